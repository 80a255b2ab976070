//! Eigenvalues of a small real upper-Hessenberg matrix by the Francis
//! double-shift QR iteration, preceded by diagonal balancing.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 60;
const RADIX: f64 = 2.0;

/// Balances `m` in place by a diagonal similarity with powers of two.
pub fn balance<const N: usize>(m: &mut [[f64; N]; N]) {
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..N {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..N {
                if j != i {
                    c += m[j][i].abs();
                    r += m[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..N {
                        m[i][j] *= g;
                    }
                    for row in m.iter_mut() {
                        row[i] *= f;
                    }
                }
            }
        }
    }
}

/// Eigenvalues of the upper-Hessenberg matrix `m` (entries below the first
/// subdiagonal are ignored). `m` is destroyed.
pub fn hessenberg_eigenvalues<const N: usize>(m: &mut [[f64; N]; N]) -> Result<[Complex64; N]> {
    let mut wr = [0.0; N];
    let mut wi = [0.0; N];

    let mut anorm = 0.0;
    for i in 0..N {
        for j in i.saturating_sub(1)..N {
            anorm += m[i][j].abs();
        }
    }

    let mut nn = N as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let n = nn as usize;
        let mut its = 0;
        loop {
            // Look for a negligible subdiagonal element.
            let mut l = n;
            while l >= 1 {
                let mut s = m[l - 1][l - 1].abs() + m[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if m[l][l - 1].abs() + s == s {
                    m[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }

            let mut x = m[n][n];
            if l == n {
                wr[n] = x + t;
                wi[n] = 0.0;
                nn -= 1;
                break;
            }

            let mut y = m[n - 1][n - 1];
            let mut w = m[n][n - 1] * m[n - 1][n];
            if l == n - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + z.copysign(p);
                    wr[n - 1] = x + z;
                    wr[n] = if z != 0.0 { x - w / z } else { x + z };
                    wi[n - 1] = 0.0;
                    wi[n] = 0.0;
                } else {
                    wr[n - 1] = x + p;
                    wr[n] = x + p;
                    wi[n - 1] = -z;
                    wi[n] = z;
                }
                nn -= 2;
                break;
            }

            if its == MAX_ITERATIONS {
                return Err(Error::NumericFailure(format!(
                    "QR iteration did not converge in {MAX_ITERATIONS} sweeps"
                )));
            }
            if its == 10 || its == 20 {
                // Exceptional shift.
                t += x;
                for i in 0..=n {
                    m[i][i] -= x;
                }
                let s = m[n][n - 1].abs() + m[n - 1][n - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Two consecutive small subdiagonal elements.
            let mut mm = n - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = m[mm][mm];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / m[mm + 1][mm] + m[mm][mm + 1];
                q = m[mm + 1][mm + 1] - z - rr - ss;
                r = m[mm + 2][mm + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if mm == l {
                    break;
                }
                let u = m[mm][mm - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (m[mm - 1][mm - 1].abs() + z.abs() + m[mm + 1][mm + 1].abs());
                if u + v == v {
                    break;
                }
                mm -= 1;
            }

            for i in mm + 2..=n {
                m[i][i - 2] = 0.0;
                if i != mm + 2 {
                    m[i][i - 3] = 0.0;
                }
            }

            // Double QR step on rows l..=n and columns mm..=n.
            let mut x = 0.0;
            for k in mm..n {
                if k != mm {
                    p = m[k][k - 1];
                    q = m[k + 1][k - 1];
                    r = if k != n - 1 { m[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == mm {
                    if l != mm {
                        m[k][k - 1] = -m[k][k - 1];
                    }
                } else {
                    m[k][k - 1] = -s * x;
                }
                p += s;
                let xs = p / s;
                let ys = q / s;
                let zs = r / s;
                q /= p;
                r /= p;
                for j in k..=n {
                    let mut pp = m[k][j] + q * m[k + 1][j];
                    if k != n - 1 {
                        pp += r * m[k + 2][j];
                        m[k + 2][j] -= pp * zs;
                    }
                    m[k + 1][j] -= pp * ys;
                    m[k][j] -= pp * xs;
                }
                let mmin = if n < k + 3 { n } else { k + 3 };
                for i in l..=mmin {
                    let mut pp = xs * m[i][k] + ys * m[i][k + 1];
                    if k != n - 1 {
                        pp += zs * m[i][k + 2];
                        m[i][k + 2] -= pp * r;
                    }
                    m[i][k + 1] -= pp * q;
                    m[i][k] -= pp;
                }
            }
        }
    }

    let mut out = [Complex64::new(0.0, 0.0); N];
    for i in 0..N {
        out[i] = Complex64::new(wr[i], wi[i]);
    }
    Ok(out)
}
