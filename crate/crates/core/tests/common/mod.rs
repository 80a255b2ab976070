//! Independent oracles shared by the integration tests. Nothing here calls
//! into the closed-form code paths it is used to check.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform couplings in `[0, amax] x [0, cmax] x [0, fmax]`.
pub fn sample_box(rng: &mut ChaCha8Rng, amax: f64, cmax: f64, fmax: f64) -> (f64, f64, f64) {
    (
        rng.gen_range(0.0..=amax),
        rng.gen_range(0.0..=cmax),
        rng.gen_range(0.0..=fmax),
    )
}

/// Polynomial with coefficients in ascending powers.
#[derive(Debug, Clone)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn trim(mut self, eps: f64) -> Self {
        while self.0.len() > 1 && self.0.last().unwrap().abs() <= eps {
            self.0.pop();
        }
        self
    }

    pub fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// Remainder of `self / other`.
    fn rem(&self, other: &Poly) -> Poly {
        let mut r = self.0.clone();
        let d = other.degree();
        let lead = *other.0.last().unwrap();
        while r.len() > d && !r.is_empty() {
            let k = r.len() - 1 - d;
            let factor = r.last().unwrap() / lead;
            for (i, &c) in other.0.iter().enumerate() {
                r[i + k] -= factor * c;
            }
            r.pop();
        }
        if r.is_empty() {
            r.push(0.0);
        }
        Poly(r)
    }

    fn sign_at_pos_inf(&self) -> f64 {
        self.0.last().copied().unwrap_or(0.0).signum()
    }

    fn sign_at_neg_inf(&self) -> f64 {
        let s = self.sign_at_pos_inf();
        if self.degree().is_multiple_of(2) {
            s
        } else {
            -s
        }
    }
}

/// Number of distinct real roots by a Sturm sequence.
pub fn sturm_real_root_count(p: &Poly) -> usize {
    let scale = p.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let eps = 1e-13 * scale.max(1.0);
    let mut seq = vec![p.clone().trim(eps), p.derivative().trim(eps)];
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        let r = Poly(r.0.iter().map(|c| -c).collect()).trim(eps);
        if r.0.len() == 1 && r.0[0].abs() <= eps {
            break;
        }
        let constant = r.0.len() == 1;
        seq.push(r);
        if constant {
            break;
        }
    }
    let changes = |signs: Vec<f64>| {
        let nz: Vec<f64> = signs.into_iter().filter(|s| *s != 0.0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let neg = changes(seq.iter().map(|q| q.sign_at_neg_inf()).collect());
    let pos = changes(seq.iter().map(|q| q.sign_at_pos_inf()).collect());
    neg - pos
}

/// The critical-point cubic `4 z^3 - 2 A z - 4 f^2`.
pub fn critical_cubic(a_coeff: f64, f2: f64) -> Poly {
    Poly(vec![-4.0 * f2, -2.0 * a_coeff, 0.0, 4.0])
}

/// Smallest `f` at which the critical cubic drops to one real root, found by
/// bisection on the Sturm count.
pub fn f_upper_by_bisection(a_coeff: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 10.0);
    assert_eq!(sturm_real_root_count(&critical_cubic(a_coeff, lo * lo + 1e-12)), 3);
    assert_eq!(sturm_real_root_count(&critical_cubic(a_coeff, hi * hi)), 1);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if sturm_real_root_count(&critical_cubic(a_coeff, mid * mid)) == 3 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real roots of `p` in `[lo, hi]`: grid bracketing then bisection.
pub fn bracketed_roots(p: &Poly, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let h = (hi - lo) / n as f64;
    for i in 0..n {
        let (mut x0, mut x1) = (lo + i as f64 * h, lo + (i + 1) as f64 * h);
        let (mut y0, y1) = (p.eval(x0), p.eval(x1));
        if y0 == 0.0 {
            roots.push(x0);
            continue;
        }
        if y0.signum() == y1.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (x0 + x1);
            if mid == x0 || mid == x1 {
                break;
            }
            let ym = p.eval(mid);
            if ym.signum() == y0.signum() {
                x0 = mid;
                y0 = ym;
            } else {
                x1 = mid;
            }
        }
        roots.push(0.5 * (x0 + x1));
    }
    roots
}

/// Determinant of `H(a, c, f)` by cofactor expansion along the first row,
/// and the three printed `C` forms evaluated term by term.
pub fn det_cofactor(m: &[[f64; 4]; 4]) -> f64 {
    fn det3(m: [[f64; 3]; 3]) -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    let mut total = 0.0;
    for j in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for r in 1..4 {
            let mut cc = 0;
            for k in 0..4 {
                if k != j {
                    minor[r - 1][cc] = m[r][k];
                    cc += 1;
                }
            }
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * m[0][j] * det3(minor);
    }
    total
}
