//! Brute-force ground truth for the spectrum: matrix eigenvalues and
//! companion-matrix roots computed along independent code paths.

use nalgebra::{linalg::Schur, Matrix4 as NaMatrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hqr;
use crate::model::{build_hamiltonian, secular_quartic, Couplings, Matrix4, SecularQuartic};

pub type Roots = [Complex64; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RealityClass {
    AllReal,
    OneComplexPair,
    TwoComplexPairs,
    /// All real, with two roots closer than the degeneracy gap.
    DegenerateReal,
}

impl RealityClass {
    /// `AllReal` or `DegenerateReal`.
    pub fn is_real(self) -> bool {
        matches!(self, RealityClass::AllReal | RealityClass::DegenerateReal)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RealityClass::AllReal => "AllReal",
            RealityClass::OneComplexPair => "OneComplexPair",
            RealityClass::TwoComplexPairs => "TwoComplexPairs",
            RealityClass::DegenerateReal => "DegenerateReal",
        }
    }
}

impl std::fmt::Display for RealityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Band inside which an imaginary part counts as zero:
/// `|Im E| <= abs_tol + rel_tol * max |E|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealityTolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for RealityTolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
        }
    }
}

impl RealityTolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        let ok = abs_tol.is_finite()
            && rel_tol.is_finite()
            && abs_tol >= 0.0
            && rel_tol >= 0.0
            && (abs_tol > 0.0 || rel_tol > 0.0);
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "reality tolerance needs non-negative parts, one positive: ({abs_tol}, {rel_tol})"
            )));
        }
        Ok(Self { abs_tol, rel_tol })
    }

    fn threshold(&self, roots: &Roots) -> f64 {
        let scale = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        self.abs_tol + self.rel_tol * scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub roots: Roots,
    pub classification: RealityClass,
    pub tol_used: f64,
}

/// Sorts ascending by real part; roots sharing a real part (conjugate
/// pairs) are ordered by imaginary part.
pub fn sort_roots(roots: &mut Roots) {
    roots.sort_by(|x, y| x.re.total_cmp(&y.re));
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tie = 1e-9 * scale;
    for i in 0..3 {
        if (roots[i].re - roots[i + 1].re).abs() <= tie && roots[i].im > roots[i + 1].im {
            roots.swap(i, i + 1);
        }
    }
}

/// Eigenvalues of a general real 4x4 matrix via a real Schur decomposition.
pub fn matrix_eigenvalues(m: &Matrix4) -> Result<Roots> {
    if !m.is_finite() {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let e = m.entries();
    let na = NaMatrix4::from_fn(|i, j| e[i][j]);
    let schur = Schur::try_new(na, f64::EPSILON, 1000)
        .ok_or_else(|| Error::NumericFailure("Schur iteration did not converge".into()))?;
    let ev = schur.complex_eigenvalues();
    let mut roots = [Complex64::new(0.0, 0.0); 4];
    for (slot, z) in roots.iter_mut().zip(ev.iter()) {
        *slot = Complex64::new(z.re, z.im);
    }
    sort_roots(&mut roots);
    Ok(roots)
}

/// Companion matrix of the monic quartic, upper-Hessenberg form.
pub fn companion(q: &SecularQuartic) -> [[f64; 4]; 4] {
    let [c0, c1, c2, c3] = q.monic_coefficients();
    [
        [-c3, -c2, -c1, -c0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
}

/// Roots of `E^4 - A E^2 - 4 f^2 E + C` from the balanced companion matrix.
pub fn quartic_roots(q: &SecularQuartic) -> Result<Roots> {
    if !(q.a_coeff.is_finite() && q.c_coeff.is_finite() && q.f2.is_finite()) {
        return Err(Error::InvalidArgument("quartic has non-finite coefficients".into()));
    }
    let mut m = companion(q);
    hqr::balance(&mut m);
    let mut roots = hqr::hessenberg_eigenvalues(&mut m)?;
    sort_roots(&mut roots);
    Ok(roots)
}

pub fn classify_reality(roots: &Roots, tol: &RealityTolerance) -> RealityClass {
    let threshold = tol.threshold(roots);
    let complex = roots.iter().filter(|z| z.im.abs() > threshold).count();
    match complex {
        0 => {
            let degenerate = roots
                .windows(2)
                .any(|w| (w[1].re - w[0].re).abs() <= 10.0 * tol.abs_tol);
            if degenerate {
                RealityClass::DegenerateReal
            } else {
                RealityClass::AllReal
            }
        }
        1 | 2 => RealityClass::OneComplexPair,
        _ => RealityClass::TwoComplexPairs,
    }
}

/// Spectrum of `H(a, c, f)` from the matrix route.
pub fn spectrum(couplings: &Couplings, tol: &RealityTolerance) -> Result<SpectrumResult> {
    let roots = matrix_eigenvalues(&build_hamiltonian(couplings))?;
    Ok(SpectrumResult {
        roots,
        classification: classify_reality(&roots, tol),
        tol_used: tol.threshold(&roots),
    })
}

/// Spectrum of a quartic from the companion route.
pub fn quartic_spectrum(q: &SecularQuartic, tol: &RealityTolerance) -> Result<SpectrumResult> {
    let roots = quartic_roots(q)?;
    Ok(SpectrumResult {
        roots,
        classification: classify_reality(&roots, tol),
        tol_used: tol.threshold(&roots),
    })
}

/// `max_j |E_j + E_{5-j}|` for a sorted real spectrum.
pub fn self_duality_residual(roots: &Roots) -> Result<f64> {
    if !classify_reality(roots, &RealityTolerance::default()).is_real() {
        return Err(Error::InvalidArgument(
            "self-duality residual needs a real spectrum".into(),
        ));
    }
    Ok((0..2)
        .map(|j| (roots[j].re + roots[3 - j].re).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftSign {
    Positive,
    Negative,
    Zero,
}

impl ShiftSign {
    fn of(delta: f64, zero_band: f64) -> Self {
        if delta.abs() <= zero_band {
            ShiftSign::Zero
        } else if delta > 0.0 {
            ShiftSign::Positive
        } else {
            ShiftSign::Negative
        }
    }

    /// Nonstrict match: a zero shift satisfies either expected sign.
    pub fn satisfies(self, expected: ShiftSign) -> bool {
        self == ShiftSign::Zero || self == expected
    }

    pub fn symbol(self) -> char {
        match self {
            ShiftSign::Positive => '+',
            ShiftSign::Negative => '-',
            ShiftSign::Zero => '0',
        }
    }
}

/// Expected shift pattern of the four real roots once the linear term is on.
pub const INTERIOR_SHIFT_PATTERN: [ShiftSign; 4] = [
    ShiftSign::Positive,
    ShiftSign::Negative,
    ShiftSign::Negative,
    ShiftSign::Positive,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootShifts {
    /// `E_j(f) - E_j(0)`
    pub deltas: [f64; 4],
    pub signs: [ShiftSign; 4],
}

impl RootShifts {
    fn from_spectra(shifted: &Roots, baseline: &Roots) -> Self {
        let scale = baseline.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let zero_band = 1e-12 * scale;
        let mut deltas = [0.0; 4];
        let mut signs = [ShiftSign::Zero; 4];
        for j in 0..4 {
            deltas[j] = shifted[j].re - baseline[j].re;
            signs[j] = ShiftSign::of(deltas[j], zero_band);
        }
        Self { deltas, signs }
    }

    /// `(+, -, -, +)` with zero shifts accepted.
    pub fn matches_interior_pattern(&self) -> bool {
        self.signs
            .iter()
            .zip(INTERIOR_SHIFT_PATTERN)
            .all(|(s, e)| s.satisfies(e))
    }

    pub fn pattern_string(&self) -> String {
        self.signs.iter().map(|s| s.symbol()).collect()
    }
}

fn require_real(result: &SpectrumResult, what: &str) -> Result<()> {
    if result.classification.is_real() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{what} spectrum is {}",
            result.classification
        )))
    }
}

/// Shift of each root caused by the linear term `-4 f^2 E`, with `A` and `C`
/// held at their values for `couplings`. The baseline is the biquadratic
/// `E^4 - A E^2 + C`.
pub fn root_shift_signs(couplings: &Couplings) -> Result<RootShifts> {
    let tol = RealityTolerance::default();
    let q = secular_quartic(couplings)?;
    let shifted = quartic_spectrum(&q, &tol)?;
    let baseline = quartic_spectrum(&q.without_linear_term(), &tol)?;
    require_real(&shifted, "shifted")?;
    require_real(&baseline, "baseline")?;
    Ok(RootShifts::from_spectra(&shifted.roots, &baseline.roots))
}

/// Shift of each root between `H(a, c, f)` and `H(a, c, 0)`. Unlike
/// [`root_shift_signs`], `A` and `C` move with `f` here.
pub fn coupling_shift_signs(couplings: &Couplings) -> Result<RootShifts> {
    let tol = RealityTolerance::default();
    let shifted = spectrum(couplings, &tol)?;
    let baseline = spectrum(&couplings.with_f(0.0)?, &tol)?;
    require_real(&shifted, "shifted")?;
    require_real(&baseline, "f = 0")?;
    Ok(RootShifts::from_spectra(&shifted.roots, &baseline.roots))
}

/// Coefficients `[p0, p1, p2, p3]` of `det(x I - M) = x^4 + p3 x^3 + p2 x^2 + p1 x + p0`
/// by the Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(m: &Matrix4) -> [f64; 4] {
    let a = m.entries();
    let mul = |x: &[[f64; 4]; 4], y: &[[f64; 4]; 4]| {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = (0..4).map(|k| x[i][k] * y[k][j]).sum();
            }
        }
        out
    };
    let trace = |x: &[[f64; 4]; 4]| (0..4).map(|i| x[i][i]).sum::<f64>();

    // M_0 = 0, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k
    let mut coeffs = [0.0; 5];
    coeffs[4] = 1.0;
    let mut mk = [[0.0; 4]; 4];
    for k in 1..=4 {
        let mut next = mul(a, &mk);
        for i in 0..4 {
            next[i][i] += coeffs[4 - k + 1];
        }
        mk = next;
        coeffs[4 - k] = -trace(&mul(a, &mk)) / k as f64;
    }
    [coeffs[0], coeffs[1], coeffs[2], coeffs[3]]
}

/// Elementary symmetric polynomials `e1..e4` of the roots.
pub fn elementary_symmetric(roots: &Roots) -> [Complex64; 4] {
    let mut e = [Complex64::new(0.0, 0.0); 5];
    e[0] = Complex64::new(1.0, 0.0);
    for z in roots {
        for k in (1..5).rev() {
            e[k] += e[k - 1] * z;
        }
    }
    [e[1], e[2], e[3], e[4]]
}
