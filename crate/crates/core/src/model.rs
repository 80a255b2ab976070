//! The 4x4 chain Hamiltonian and its secular quartic
//! `E^4 - A E^2 - 4 f^2 E + C = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coupling triple `(a, c, f)`. The upper coupling is `b = sqrt(c^2 + f^2)`.
///
/// The secular coefficients only see `a^2`, `c^2` and `f^2`, so the
/// constructor maps every component to its absolute value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    a: f64,
    c: f64,
    f: f64,
}

impl Couplings {
    pub fn new(a: f64, c: f64, f: f64) -> Result<Self> {
        if !(a.is_finite() && c.is_finite() && f.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "couplings must be finite, got (a, c, f) = ({a}, {c}, {f})"
            )));
        }
        Ok(Self {
            a: a.abs(),
            c: c.abs(),
            f: f.abs(),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    /// Upper coupling `b = sqrt(c^2 + f^2)`.
    pub fn b(&self) -> f64 {
        self.c.hypot(self.f)
    }

    /// Same `(a, c)` with the asymmetry switched off.
    pub fn with_f(&self, f: f64) -> Result<Self> {
        Self::new(self.a, self.c, f)
    }
}

/// Dense 4x4 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4(pub [[f64; 4]; 4]);

impl Matrix4 {
    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let mut m = self.0;
        let mut det = 1.0;
        for k in 0..4 {
            let pivot = (k..4)
                .max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))
                .unwrap();
            if m[pivot][k] == 0.0 {
                return 0.0;
            }
            if pivot != k {
                m.swap(pivot, k);
                det = -det;
            }
            det *= m[k][k];
            for i in k + 1..4 {
                let factor = m[i][k] / m[k][k];
                for j in k..4 {
                    m[i][j] -= factor * m[k][j];
                }
            }
        }
        det
    }
}

/// Equidistant diagonal of the chain.
pub const DIAGONAL: [f64; 4] = [-3.0, -1.0, 1.0, 3.0];

pub fn build_hamiltonian(couplings: &Couplings) -> Matrix4 {
    let b = couplings.b();
    let (a, c) = (couplings.a(), couplings.c());
    let upper = [b, a, c];
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        m[i][i] = DIAGONAL[i];
    }
    for (i, &u) in upper.iter().enumerate() {
        m[i][i + 1] = u;
        m[i + 1][i] = -u;
    }
    Matrix4(m)
}

/// Coefficients of `Y(E) = E^4 - A E^2 - 4 f^2 E + C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecularQuartic {
    /// `A = 10 - a^2 - 2c^2 - f^2`
    pub a_coeff: f64,
    /// `C = (3 + c^2)^2 + f^2 (3 + c^2) - 9 a^2`
    pub c_coeff: f64,
    pub f2: f64,
}

impl SecularQuartic {
    pub fn new(a_coeff: f64, c_coeff: f64, f2: f64) -> Self {
        Self {
            a_coeff,
            c_coeff,
            f2,
        }
    }

    /// Monic coefficients `[c0, c1, c2, c3]` of `E^4 + c3 E^3 + c2 E^2 + c1 E + c0`.
    pub fn monic_coefficients(&self) -> [f64; 4] {
        [self.c_coeff, -4.0 * self.f2, -self.a_coeff, 0.0]
    }

    /// The same quartic with the linear term dropped, `E^4 - A E^2 + C`.
    pub fn without_linear_term(&self) -> Self {
        Self::new(self.a_coeff, self.c_coeff, 0.0)
    }
}

/// The three algebraically equivalent forms of `C(a, c, f)`.
pub fn c_forms(couplings: &Couplings) -> [f64; 3] {
    let a2 = couplings.a() * couplings.a();
    let c2 = couplings.c() * couplings.c();
    let f2 = couplings.f() * couplings.f();
    let expanded = 9.0 + 6.0 * c2 - 9.0 * a2 + 3.0 * f2 + c2 * c2 + f2 * c2;
    let compact = (3.0 + c2).powi(2) + f2 * (3.0 + c2) - 9.0 * a2;
    let completed = (3.0 + c2 + 0.5 * f2).powi(2) - (9.0 * a2 + 0.25 * f2 * f2);
    [expanded, compact, completed]
}

const FORM_TOLERANCE: f64 = 1e-9;

pub fn secular_quartic(couplings: &Couplings) -> Result<SecularQuartic> {
    let a2 = couplings.a() * couplings.a();
    let c2 = couplings.c() * couplings.c();
    let f2 = couplings.f() * couplings.f();
    let a_coeff = 10.0 - a2 - 2.0 * c2 - f2;

    let forms = c_forms(couplings);
    let c_coeff = forms[1];
    let band = FORM_TOLERANCE * (1.0 + c_coeff.abs());
    if (forms[0] - c_coeff).abs() > band || (forms[2] - c_coeff).abs() > band {
        return Err(Error::Inconsistency { forms });
    }
    Ok(SecularQuartic::new(a_coeff, c_coeff, f2))
}

/// `Y(E)` in Horner form.
pub fn eval_secular(q: &SecularQuartic, e: f64) -> f64 {
    let e2 = e * e;
    // ((E^2 - A) E - 4 f^2) E + C
    ((e2 - q.a_coeff) * e - 4.0 * q.f2) * e + q.c_coeff
}
