//! Sampled curves for the two graphical constructions: the quartic side
//! `E^4 - A E^2 + C` against the line `4 f^2 E`, and the cubic `4 z^3 - 2 A z`
//! against the level `4 f^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{secular_quartic, Couplings};
use crate::scan::Axis;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub x: f64,
    pub curve_left: f64,
    pub curve_right: f64,
}

impl CurveSample {
    pub fn difference(&self) -> f64 {
        self.curve_left - self.curve_right
    }
}

pub fn figure1_data(couplings: &Couplings, range: Axis) -> Result<Vec<CurveSample>> {
    let range = Axis::new(range.lo, range.hi, range.steps)?;
    let q = secular_quartic(couplings)?;
    Ok((0..range.steps)
        .map(|i| {
            let e = range.node(i);
            let e2 = e * e;
            CurveSample {
                x: e,
                curve_left: e2 * e2 - q.a_coeff * e2 + q.c_coeff,
                curve_right: 4.0 * q.f2 * e,
            }
        })
        .collect())
}

pub fn figure2_data(a_coeff: f64, f: f64, range: Axis) -> Result<Vec<CurveSample>> {
    if !(a_coeff > 0.0) || !f.is_finite() {
        return Err(Error::Domain(format!(
            "cubic figure needs A > 0 and finite f, got A = {a_coeff}, f = {f}"
        )));
    }
    let range = Axis::new(range.lo, range.hi, range.steps)?;
    Ok((0..range.steps)
        .map(|i| {
            let z = range.node(i);
            CurveSample {
                x: z,
                curve_left: 4.0 * z * z * z - 2.0 * a_coeff * z,
                curve_right: 4.0 * f * f,
            }
        })
        .collect())
}

/// Sign changes of `left - right`, skipping exact zeros.
pub fn sign_changes(samples: &[CurveSample]) -> usize {
    crossings(samples).len()
}

/// Crossing abscissae of the two curves by linear interpolation between the
/// samples that bracket a sign change of their difference.
pub fn crossings(samples: &[CurveSample]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    let mut pending_zero: Option<f64> = None;
    for s in samples {
        let d = s.difference();
        if d == 0.0 {
            pending_zero.get_or_insert(s.x);
            continue;
        }
        if let Some((x0, d0)) = last {
            if (d0 < 0.0) != (d < 0.0) {
                out.push(match pending_zero {
                    Some(z) => z,
                    None => x0 + (s.x - x0) * d0 / (d0 - d),
                });
            }
        }
        pending_zero = None;
        last = Some((s.x, d));
    }
    out
}
