//! Closed-form description of the reality domain.
//!
//! The critical points of `Y(z) = z^4 - A z^2 - 4 f^2 z + C` solve the cubic
//! `4 z^3 - 2 A z = 4 f^2`. With `f^2 = f_upper^2 cos(phi)` its two negative
//! roots have trigonometric closed forms, and the four energies are real iff
//! `C` lies between the values of `C` that put a double root at either of them.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{secular_quartic, Couplings, SecularQuartic};

/// Ratio slack admitted when `f^2 / f_upper^2` rounds above one.
const RATIO_ROUNDING: f64 = 8.0 * f64::EPSILON;

/// `f_upper(A) = (A^3 / 54)^(1/4)`, the largest asymmetry at which the
/// critical-point cubic keeps three real roots.
pub fn f_upper(a_coeff: f64) -> Result<f64> {
    f_upper_sq(a_coeff).map(f64::sqrt)
}

/// `f_upper(A)^2 = sqrt(A^3 / 54)`.
pub fn f_upper_sq(a_coeff: f64) -> Result<f64> {
    if !(a_coeff > 0.0) || !a_coeff.is_finite() {
        return Err(Error::Domain(format!("f_upper needs A > 0, got {a_coeff}")));
    }
    Ok((a_coeff.powi(3) / 54.0).sqrt())
}

/// Angle `phi` with `f^2 = f_upper(A)^2 cos(phi)`, in `[0, pi/2]`.
pub fn phi_of(a_coeff: f64, f: f64) -> Result<f64> {
    let upper_sq = f_upper_sq(a_coeff)?;
    let ratio = f * f / upper_sq;
    if ratio > 1.0 + RATIO_ROUNDING {
        return Err(Error::FExceedsUpper {
            excess: f.abs() - upper_sq.sqrt(),
        });
    }
    if f == 0.0 {
        return Ok(FRAC_PI_2);
    }
    Ok(ratio.min(1.0).acos())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoints {
    /// Leftmost minimum of `Y`.
    pub z_min: f64,
    /// Maximum following `z_min`.
    pub z_max: f64,
    pub f_upper: f64,
    pub phi: f64,
}

impl CriticalPoints {
    /// `4 z^3 - 2 A z - 4 f^2` at both points, for `f^2 = f_upper^2 cos(phi)`.
    pub fn cubic_residuals(&self, a_coeff: f64) -> [f64; 2] {
        let f2 = self.f_upper * self.f_upper * self.phi.cos();
        let cubic = |z: f64| 4.0 * z * z * z - 2.0 * a_coeff * z - 4.0 * f2;
        [cubic(self.z_min), cubic(self.z_max)]
    }
}

fn check_angle(angle: f64, lo: f64, hi: f64) -> Result<()> {
    if angle.is_finite() && angle >= lo && angle <= hi {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "angle {angle} outside [{lo}, {hi}]"
        )))
    }
}

pub fn critical_points(a_coeff: f64, phi: f64) -> Result<CriticalPoints> {
    let f_upper = f_upper(a_coeff)?;
    check_angle(phi, 0.0, FRAC_PI_2)?;
    let (z_min, z_max) = if phi == FRAC_PI_2 {
        // 2 z (2 z^2 - A) = 0
        (-(a_coeff / 2.0).sqrt(), 0.0)
    } else if phi == 0.0 {
        let z = -(a_coeff / 6.0).sqrt();
        (z, z)
    } else {
        let radius = (2.0 * a_coeff / 3.0).sqrt();
        (
            -radius * ((PI - phi) / 3.0).cos(),
            -radius * ((phi + PI) / 3.0).cos(),
        )
    };
    Ok(CriticalPoints {
        z_min,
        z_max,
        f_upper,
        phi,
    })
}

/// `C` making `z` a double root, simplified with the cubic: `(A/2) z^2 + 3 f^2 z`.
pub fn bound_at(a_coeff: f64, f2: f64, z: f64) -> f64 {
    0.5 * a_coeff * z * z + 3.0 * f2 * z
}

/// Unsimplified form `4 f^2 z + A z^2 - z^4` of [`bound_at`].
pub fn bound_at_unsimplified(a_coeff: f64, f2: f64, z: f64) -> f64 {
    4.0 * f2 * z + a_coeff * z * z - z.powi(4)
}

/// `(C_minus, C_plus)`: the four roots are real iff `C_minus <= C <= C_plus`.
pub fn c_bounds(a_coeff: f64, f: f64) -> Result<(f64, f64)> {
    let phi = phi_of(a_coeff, f)?;
    if f == 0.0 {
        return Ok((0.0, a_coeff * a_coeff / 4.0));
    }
    let cp = critical_points(a_coeff, phi)?;
    let f2 = f * f;
    Ok((
        bound_at(a_coeff, f2, cp.z_max),
        bound_at(a_coeff, f2, cp.z_min),
    ))
}

/// Common value of the two bounds at `f = f_upper(A)`: `-A^2 / 12`.
pub fn collapsed_bound(a_coeff: f64) -> f64 {
    -a_coeff * a_coeff / 12.0
}

/// Relative half-width of the boundary band: `|slack| <= rel * (1 + |C|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryBand(pub f64);

impl Default for BoundaryBand {
    fn default() -> Self {
        BoundaryBand(1e-9)
    }
}

impl BoundaryBand {
    pub fn width(&self, c_coeff: f64) -> f64 {
        self.0 * (1.0 + c_coeff.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Inside,
    Outside,
    Boundary,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Inside => "Inside",
            Verdict::Outside => "Outside",
            Verdict::Boundary => "Boundary",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reason {
    ANonPositive,
    FExceedsUpper,
    CBelowMinus,
    CAbovePlus,
    Interior,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::ANonPositive => "A-nonpositive",
            Reason::FExceedsUpper => "f-exceeds-upper",
            Reason::CBelowMinus => "C-below-minus",
            Reason::CAbovePlus => "C-above-plus",
            Reason::Interior => "interior",
        }
    }
}

impl std::fmt::Display for Reason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of a membership test.
///
/// `slack > 0` inside, `< 0` outside. Where the bounds exist it is
/// `min(C - C_minus, C_plus - C)`. Where they do not (`A <= 0`, or
/// `f > f_upper`) it is `-max(f^2 - f_upper^2, |C - C*|, -A)` with
/// `C* = -A^2/12` the collapsed bound, which joins the bounded case
/// continuously at `f = f_upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub verdict: Verdict,
    pub slack: f64,
    pub reason: Reason,
}

impl Membership {
    /// Lower and upper bound margins; `reason` names the tighter one when
    /// the point is not interior.
    fn from_margins(lower: f64, upper: f64, c_coeff: f64, band: BoundaryBand) -> Self {
        let slack = lower.min(upper);
        let tight = if lower <= upper {
            Reason::CBelowMinus
        } else {
            Reason::CAbovePlus
        };
        let width = band.width(c_coeff);
        let (verdict, reason) = if slack.abs() <= width {
            (Verdict::Boundary, tight)
        } else if slack > 0.0 {
            (Verdict::Inside, Reason::Interior)
        } else {
            (Verdict::Outside, tight)
        };
        Self {
            verdict,
            slack,
            reason,
        }
    }

    fn gated(q: &SecularQuartic, reason: Reason, band: BoundaryBand) -> Self {
        let (upper_sq, collapsed) = if q.a_coeff > 0.0 {
            ((q.a_coeff.powi(3) / 54.0).sqrt(), collapsed_bound(q.a_coeff))
        } else {
            (0.0, 0.0)
        };
        let slack = -(q.f2 - upper_sq)
            .max((q.c_coeff - collapsed).abs())
            .max(-q.a_coeff);
        let verdict = if slack.abs() <= band.width(q.c_coeff) {
            Verdict::Boundary
        } else {
            Verdict::Outside
        };
        Self {
            verdict,
            slack,
            reason,
        }
    }

    pub fn is_inside(&self) -> bool {
        self.verdict == Verdict::Inside
    }
}

pub fn membership_analytic(couplings: &Couplings) -> Result<Membership> {
    membership_analytic_with(couplings, BoundaryBand::default())
}

pub fn membership_analytic_with(couplings: &Couplings, band: BoundaryBand) -> Result<Membership> {
    let q = secular_quartic(couplings)?;
    Ok(membership_of_quartic(&q, band))
}

/// Membership for a secular quartic with `f^2 = q.f2`.
pub fn membership_of_quartic(q: &SecularQuartic, band: BoundaryBand) -> Membership {
    let (a_coeff, c_coeff) = (q.a_coeff, q.c_coeff);
    if q.f2 == 0.0 {
        // Biquadratic: E^2 = (A +- sqrt(A^2 - 4C)) / 2 must both be >= 0.
        if a_coeff < 0.0 {
            return Membership::gated(q, Reason::ANonPositive, band);
        }
        return Membership::from_margins(c_coeff, a_coeff * a_coeff / 4.0 - c_coeff, c_coeff, band);
    }
    if a_coeff <= 0.0 {
        return Membership::gated(q, Reason::ANonPositive, band);
    }
    let f = q.f2.sqrt();
    match c_bounds(a_coeff, f) {
        Ok((c_minus, c_plus)) => {
            Membership::from_margins(c_coeff - c_minus, c_plus - c_coeff, c_coeff, band)
        }
        Err(_) => Membership::gated(q, Reason::FExceedsUpper, band),
    }
}

/// Chart coordinates `(alpha, delta, phi)`:
/// `A = 10 sin^2(alpha)`, `a^2 = 10 cos^2(alpha) sin^2(delta)`,
/// `2c^2 + f^2 = 10 cos^2(alpha) cos^2(delta)`, `f^2 = f_upper(A)^2 cos(phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReparamPoint {
    pub alpha: f64,
    pub delta: f64,
    pub phi: f64,
}

impl ReparamPoint {
    pub fn new(alpha: f64, delta: f64, phi: f64) -> Result<Self> {
        let in_range = alpha.is_finite()
            && alpha > 0.0
            && alpha <= FRAC_PI_2
            && (0.0..=FRAC_PI_2).contains(&delta)
            && (0.0..=FRAC_PI_2).contains(&phi);
        if !in_range {
            return Err(Error::NotRepresentable(
                crate::error::ChartConstraint::AngleRange,
            ));
        }
        Ok(Self { alpha, delta, phi })
    }

    pub fn a_coeff(&self) -> f64 {
        10.0 * self.alpha.sin().powi(2)
    }

    /// `10 cos^2(alpha)`, which equals `a^2 + 2c^2 + f^2`.
    fn coupling_budget(&self) -> f64 {
        if self.alpha == FRAC_PI_2 {
            return 0.0;
        }
        10.0 * self.alpha.cos().powi(2)
    }

    fn f2(&self) -> f64 {
        if self.phi == FRAC_PI_2 {
            return 0.0;
        }
        (self.a_coeff().powi(3) / 54.0).sqrt() * self.phi.cos()
    }
}

pub fn to_reparam(couplings: &Couplings) -> Result<ReparamPoint> {
    use crate::error::ChartConstraint;
    let (a, c, f) = (couplings.a(), couplings.c(), couplings.f());
    let q = secular_quartic(couplings)?;
    if q.a_coeff <= 0.0 {
        return Err(Error::NotRepresentable(ChartConstraint::NonPositiveA));
    }
    let rest = (2.0 * c * c + f * f).sqrt();
    // 10 cos^2(alpha) = a^2 + 2c^2 + f^2, computed without cancellation.
    let budget = a.hypot(rest);
    let alpha = q.a_coeff.sqrt().atan2(budget);
    let delta = if budget == 0.0 { 0.0 } else { a.atan2(rest) };
    let phi = match phi_of(q.a_coeff, f) {
        Ok(phi) => phi,
        Err(_) => return Err(Error::NotRepresentable(ChartConstraint::FExceedsUpper)),
    };
    ReparamPoint::new(alpha, delta, phi)
}

pub fn from_reparam(p: &ReparamPoint) -> Result<Couplings> {
    let budget = p.coupling_budget();
    let f2 = p.f2();
    let a = budget.sqrt() * p.delta.sin();
    let rest = budget * p.delta.cos().powi(2);
    let mut c2 = 0.5 * (rest - f2);
    if c2 < 0.0 {
        if c2 >= -4.0 * f64::EPSILON * rest.max(1.0) {
            c2 = 0.0;
        } else {
            return Err(Error::NotRepresentable(
                crate::error::ChartConstraint::NegativeCSquared,
            ));
        }
    }
    Couplings::new(a, c2.sqrt(), f2.sqrt())
}

/// Shift turning `C` into `B = C + 90 cos^2(alpha) + 135 + f^4/4`.
fn b_shift(alpha: f64, f2: f64) -> f64 {
    90.0 * alpha.cos().powi(2) + 135.0 + 0.25 * f2 * f2
}

/// `(B_minus, B_plus)`, the shifted bounds that depend on `(alpha, phi)` only.
pub fn b_bounds(alpha: f64, phi: f64) -> Result<(f64, f64)> {
    let p = ReparamPoint::new(alpha, 0.0, phi)?;
    let a_coeff = p.a_coeff();
    let f2 = p.f2();
    let (c_minus, c_plus) = c_bounds(a_coeff, f2.sqrt())?;
    let shift = b_shift(alpha, f2);
    let bounds = (c_minus + shift, c_plus + shift);
    if bounds.0 < -1e-9 || bounds.1 < -1e-9 {
        return Err(Error::Assertion(format!(
            "shifted bounds must be non-negative, got {bounds:?}"
        )));
    }
    Ok((bounds.0.max(0.0), bounds.1.max(0.0)))
}

/// `12 + 5 cos^2(alpha) cos^2(delta)`, whose square is `B` for the point itself.
pub fn chart_middle_term(p: &ReparamPoint) -> f64 {
    12.0 + 5.0 * p.alpha.cos().powi(2) * p.delta.cos().powi(2)
}

pub fn membership_reparam(p: &ReparamPoint) -> Result<Membership> {
    membership_reparam_with(p, BoundaryBand::default())
}

/// Evaluates `sqrt(B_minus) <= 12 + 5 cos^2(alpha) cos^2(delta) <= sqrt(B_plus)`.
/// The slack is reported in `C` units so that it matches [`membership_analytic`].
pub fn membership_reparam_with(p: &ReparamPoint, band: BoundaryBand) -> Result<Membership> {
    from_reparam(p)?;
    let (b_minus, b_plus) = b_bounds(p.alpha, p.phi)?;
    let middle = chart_middle_term(p);
    let b_point = middle * middle;
    let c_coeff = b_point - b_shift(p.alpha, p.f2());
    Ok(Membership::from_margins(
        b_point - b_minus,
        b_plus - b_point,
        c_coeff,
        band,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DeltaInterval {
    Empty,
    Closed { lo: f64, hi: f64 },
}

impl DeltaInterval {
    pub fn is_empty(&self) -> bool {
        matches!(self, DeltaInterval::Empty)
    }

    pub fn contains(&self, delta: f64) -> bool {
        match *self {
            DeltaInterval::Empty => false,
            DeltaInterval::Closed { lo, hi } => delta >= lo && delta <= hi,
        }
    }
}

/// Range of `delta` admitted by the chart inequality at fixed `(alpha, phi)`,
/// restricted to chart points with a real `c`.
pub fn delta_interval(alpha: f64, phi: f64) -> Result<DeltaInterval> {
    check_angle(phi, 0.0, FRAC_PI_2)?;
    if !(alpha > 0.0 && alpha <= FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!(
            "delta_interval needs alpha in (0, pi/2], got {alpha}"
        )));
    }
    let (b_minus, b_plus) = b_bounds(alpha, phi)?;
    let p = ReparamPoint::new(alpha, 0.0, phi)?;
    let scale = 5.0 * alpha.cos().powi(2);
    // Interval for u = cos^2(delta).
    let mut lo = (b_minus.sqrt() - 12.0) / scale;
    let mut hi = (b_plus.sqrt() - 12.0) / scale;
    // c^2 >= 0 needs u >= f^2 / (10 cos^2 alpha).
    lo = lo.max(p.f2() / p.coupling_budget()).max(0.0);
    hi = hi.min(1.0);
    if lo > hi {
        return Ok(DeltaInterval::Empty);
    }
    // delta = arccos(sqrt(u)) is decreasing in u.
    Ok(DeltaInterval::Closed {
        lo: hi.sqrt().acos(),
        hi: lo.sqrt().acos(),
    })
}
