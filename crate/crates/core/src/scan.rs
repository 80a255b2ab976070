//! Grid classification of `(a, c)` slices and ray-fan tracing of the
//! domain boundary.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::analytic::{membership_analytic_with, BoundaryBand, Membership, Verdict};
use crate::error::{Error, Result};
use crate::model::{secular_quartic, Couplings};
use crate::oracle::{spectrum, RealityClass, RealityTolerance};
use crate::par::{map_indexed, Execution};

/// Samples whose `|slack|` is below this are too close to the boundary for
/// the oracle comparison to be meaningful.
pub const DECISIVE_SLACK: f64 = 1e-6;

/// `steps` equally spaced nodes from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi || steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "axis needs finite lo <= hi and steps >= 2, got ({lo}, {hi}, {steps})"
            )));
        }
        Ok(Self { lo, hi, steps })
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.steps - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceSpec {
    pub fixed_f: f64,
    pub a_axis: Axis,
    pub c_axis: Axis,
}

impl SliceSpec {
    pub fn new(fixed_f: f64, a_axis: Axis, c_axis: Axis) -> Result<Self> {
        if !fixed_f.is_finite() || fixed_f < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "fixed f must be finite and >= 0, got {fixed_f}"
            )));
        }
        Axis::new(a_axis.lo, a_axis.hi, a_axis.steps)?;
        Axis::new(c_axis.lo, c_axis.hi, c_axis.steps)?;
        Ok(Self {
            fixed_f,
            a_axis,
            c_axis,
        })
    }

    /// Square window `[lo, hi]^2` with `res` nodes per side.
    pub fn square(fixed_f: f64, lo: f64, hi: f64, res: usize) -> Result<Self> {
        let axis = Axis::new(lo, hi, res)?;
        Self::new(fixed_f, axis, axis)
    }

    pub fn cell_count(&self) -> usize {
        self.a_axis.steps * self.c_axis.steps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScanOptions {
    pub tolerance: RealityTolerance,
    pub band: BoundaryBand,
    #[serde(skip)]
    pub execution: Execution,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub a: f64,
    pub c: f64,
    pub f: f64,
    pub a_coeff: f64,
    pub c_coeff: f64,
    pub verdict: Verdict,
    pub slack: f64,
    /// `None` when the eigenvalue computation failed for this cell.
    pub oracle: Option<RealityClass>,
    pub agree: bool,
}

/// Whether an analytic verdict is consistent with an oracle class.
/// Boundary verdicts are consistent with any spectrum.
pub fn verdict_agrees(verdict: Verdict, oracle: Option<RealityClass>) -> bool {
    match (verdict, oracle) {
        (_, None) => false,
        (Verdict::Boundary, Some(_)) => true,
        (Verdict::Inside, Some(class)) => class.is_real(),
        (Verdict::Outside, Some(class)) => !class.is_real(),
    }
}

pub fn classify_point(
    couplings: &Couplings,
    options: &ScanOptions,
) -> Result<(Membership, Option<RealityClass>)> {
    let membership = membership_analytic_with(couplings, options.band)?;
    let oracle = spectrum(couplings, &options.tolerance)
        .ok()
        .map(|s| s.classification);
    Ok((membership, oracle))
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScanSummary {
    pub cells: usize,
    pub inside: usize,
    pub outside: usize,
    pub boundary: usize,
    pub disagreements: usize,
    pub oracle_failures: usize,
    /// Cells with `|slack| >= DECISIVE_SLACK`.
    pub decisive: usize,
    pub decisive_disagreements: usize,
}

impl ScanSummary {
    pub fn from_cells(cells: &[CellRecord]) -> Self {
        let mut s = ScanSummary {
            cells: cells.len(),
            ..Default::default()
        };
        for cell in cells {
            match cell.verdict {
                Verdict::Inside => s.inside += 1,
                Verdict::Outside => s.outside += 1,
                Verdict::Boundary => s.boundary += 1,
            }
            if cell.oracle.is_none() {
                s.oracle_failures += 1;
            }
            if !cell.agree {
                s.disagreements += 1;
            }
            if cell.slack.abs() >= DECISIVE_SLACK {
                s.decisive += 1;
                if !cell.agree {
                    s.decisive_disagreements += 1;
                }
            }
        }
        s
    }

    /// Fraction of decisive cells whose verdict matches the oracle.
    pub fn agreement_rate(&self) -> f64 {
        if self.decisive == 0 {
            return 1.0;
        }
        1.0 - self.decisive_disagreements as f64 / self.decisive as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedGrid {
    pub spec: SliceSpec,
    /// Row-major: `a` is the slow index, `c` the fast one.
    pub cells: Vec<CellRecord>,
    pub summary: ScanSummary,
}

pub fn scan_slice(spec: &SliceSpec) -> Result<ClassifiedGrid> {
    scan_slice_with(spec, &ScanOptions::default())
}

pub fn scan_slice_with(spec: &SliceSpec, options: &ScanOptions) -> Result<ClassifiedGrid> {
    let spec = SliceSpec::new(spec.fixed_f, spec.a_axis, spec.c_axis)?;
    let nc = spec.c_axis.steps;
    let cells = map_indexed(spec.cell_count(), options.execution, |idx| {
        let a = spec.a_axis.node(idx / nc);
        let c = spec.c_axis.node(idx % nc);
        let couplings = Couplings::new(a, c, spec.fixed_f).expect("grid nodes are finite");
        let q = secular_quartic(&couplings).expect("secular forms agree on grid nodes");
        let (membership, oracle) = classify_point(&couplings, options).expect("finite couplings");
        CellRecord {
            a,
            c,
            f: spec.fixed_f,
            a_coeff: q.a_coeff,
            c_coeff: q.c_coeff,
            verdict: membership.verdict,
            slack: membership.slack,
            oracle,
            agree: verdict_agrees(membership.verdict, oracle),
        }
    });
    let summary = ScanSummary::from_cells(&cells);
    Ok(ClassifiedGrid {
        spec,
        cells,
        summary,
    })
}

/// Number of analytically Inside cells on a square window for each `f`.
pub fn inside_counts(fs: &[f64], lo: f64, hi: f64, res: usize, exec: Execution) -> Result<Vec<(f64, usize)>> {
    let axis = Axis::new(lo, hi, res)?;
    fs.iter()
        .map(|&f| {
            let spec = SliceSpec::new(f, axis, axis)?;
            let inside = map_indexed(spec.cell_count(), exec, |idx| {
                let x = Couplings::new(axis.node(idx / res), axis.node(idx % res), f)
                    .expect("finite");
                membership_analytic_with(&x, BoundaryBand::default())
                    .map(|m| m.is_inside())
                    .unwrap_or(false)
            })
            .into_iter()
            .filter(|&inside| inside)
            .count();
            Ok((f, inside))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub ray_angle: f64,
    pub a: f64,
    pub c: f64,
    pub slack: f64,
}

/// Points of the domain boundary in the `(a, c)` plane at fixed `f`, one per
/// ray of a fan cast from an interior seed. Coordinates are the raw ray
/// coordinates; membership is even in `a` and `c`, so a point with a negative
/// component lies on the mirror image of the boundary in the positive quadrant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    pub fixed_f: f64,
    pub seed: (f64, f64),
    pub points: Vec<BoundaryPoint>,
    pub method_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Seed search grid resolution over `[0, 4]^2`.
    pub seed_res: usize,
    pub march_step: f64,
    pub max_radius: f64,
    pub band: BoundaryBand,
    pub execution: Execution,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            seed_res: 41,
            march_step: 1e-2,
            max_radius: 8.0,
            band: BoundaryBand::default(),
            execution: Execution::default(),
        }
    }
}

fn membership_at(a: f64, c: f64, f: f64, band: BoundaryBand) -> Membership {
    let x = Couplings::new(a, c, f).expect("finite ray coordinates");
    membership_analytic_with(&x, band).expect("secular forms agree")
}

/// Interior grid node with the largest relative slack.
pub fn find_interior_seed(fixed_f: f64, options: &TraceOptions) -> Result<(f64, f64)> {
    let axis = Axis::new(0.0, 4.0, options.seed_res)?;
    let res = options.seed_res;
    let scored = map_indexed(res * res, options.execution, |idx| {
        let (a, c) = (axis.node(idx / res), axis.node(idx % res));
        let x = Couplings::new(a, c, fixed_f).expect("finite");
        let q = secular_quartic(&x).expect("secular forms agree");
        let m = membership_analytic_with(&x, options.band).expect("secular forms agree");
        (m.is_inside(), m.slack / (1.0 + q.c_coeff.abs()), a, c)
    });
    scored
        .into_iter()
        .filter(|s| s.0)
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .map(|s| (s.2, s.3))
        .ok_or(Error::NoInteriorSeed { f: fixed_f })
}

pub fn trace_boundary(fixed_f: f64, rays: usize, tol: f64) -> Result<BoundaryTrace> {
    trace_boundary_with(fixed_f, rays, tol, &TraceOptions::default())
}

pub fn trace_boundary_with(
    fixed_f: f64,
    rays: usize,
    tol: f64,
    options: &TraceOptions,
) -> Result<BoundaryTrace> {
    if !fixed_f.is_finite() || fixed_f < 0.0 {
        return Err(Error::InvalidArgument(format!("f must be finite and >= 0, got {fixed_f}")));
    }
    if rays < 8 {
        return Err(Error::InvalidArgument(format!("need at least 8 rays, got {rays}")));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let seed = find_interior_seed(fixed_f, options)?;
    let results = map_indexed(rays, options.execution, |k| {
        let angle = TAU * k as f64 / rays as f64;
        trace_ray(fixed_f, seed, angle, tol, options)
    });
    let points = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(BoundaryTrace {
        fixed_f,
        seed,
        points,
        method_tol: tol,
    })
}

fn trace_ray(
    f: f64,
    seed: (f64, f64),
    angle: f64,
    tol: f64,
    options: &TraceOptions,
) -> Result<BoundaryPoint> {
    let (dir_a, dir_c) = (angle.cos(), angle.sin());
    let slack_at = |t: f64| membership_at(seed.0 + t * dir_a, seed.1 + t * dir_c, f, options.band).slack;

    // March to the first sample with non-positive slack.
    let mut t_in = 0.0;
    let mut t_out = None;
    let mut t = options.march_step;
    while t <= options.max_radius {
        if slack_at(t) <= 0.0 {
            t_out = Some(t);
            break;
        }
        t_in = t;
        t += options.march_step;
    }
    let mut t_out = t_out.ok_or_else(|| {
        Error::NumericFailure(format!("ray at angle {angle} did not leave the domain"))
    })?;

    // Bisect on the slack sign until the bracket stops shrinking.
    for _ in 0..200 {
        let mid = 0.5 * (t_in + t_out);
        if mid <= t_in || mid >= t_out {
            break;
        }
        if slack_at(mid) > 0.0 {
            t_in = mid;
        } else {
            t_out = mid;
        }
    }
    let (s_in, s_out) = (slack_at(t_in), slack_at(t_out));
    let t_best = if s_in.abs() <= s_out.abs() { t_in } else { t_out };
    let slack = s_in.abs().min(s_out.abs()).copysign(if t_best == t_in { s_in } else { s_out });
    if slack.abs() > tol {
        return Err(Error::NumericFailure(format!(
            "bisection along angle {angle} ended with slack {slack} above {tol}"
        )));
    }
    Ok(BoundaryPoint {
        ray_angle: angle,
        a: seed.0 + t_best * dir_a,
        c: seed.1 + t_best * dir_c,
        slack,
    })
}

/// Analytic verdicts at `point -+ offset` along its ray (inner probe first).
pub fn probe_verdicts(trace: &BoundaryTrace, point: &BoundaryPoint, offset: f64, band: BoundaryBand) -> (Verdict, Verdict) {
    let (da, dc) = (point.ray_angle.cos(), point.ray_angle.sin());
    let inner = membership_at(point.a - offset * da, point.c - offset * dc, trace.fixed_f, band);
    let outer = membership_at(point.a + offset * da, point.c + offset * dc, trace.fixed_f, band);
    (inner.verdict, outer.verdict)
}

/// Oracle classes at `point -+ offset` along its ray.
pub fn probe_oracle(
    trace: &BoundaryTrace,
    point: &BoundaryPoint,
    offset: f64,
    tol: &RealityTolerance,
) -> Result<(RealityClass, RealityClass)> {
    let (da, dc) = (point.ray_angle.cos(), point.ray_angle.sin());
    let at = |s: f64| -> Result<RealityClass> {
        let x = Couplings::new(point.a + s * da, point.c + s * dc, trace.fixed_f)?;
        Ok(spectrum(&x, tol)?.classification)
    };
    Ok((at(-offset)?, at(offset)?))
}
