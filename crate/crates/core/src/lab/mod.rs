//! Finite-dimensional model of the path `T + sA`, `s ∈ [0, 1]`, with T diagonal.
//!
//! Spectral flow, eigenvalue trajectories and the two flow bounds are checked
//! here on dense matrices; the bounds themselves come from [`crate::perturbation`].

pub mod campaign;
mod eigen;

use crate::interval::{Bound, Ext};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Endpoint eigenvalues closer to 0 than this make the flow ill-defined.
pub const KERNEL_TOL: f64 = 1e-9;
/// Symmetry tolerance on the perturbation, entrywise.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Absolute slack on every floating-point inequality check.
pub const CHECK_TOL: f64 = 1e-9;
/// Base spectra are kept at least this far from 0.
pub const SPECTRAL_GAP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LabError {
    #[error("base spectrum must be sorted and free of 0, bad entry {0}")]
    BadSpectrum(f64),
    #[error("perturbation is {rows}×{cols}, base spectrum has {dim} entries")]
    DimensionMismatch { rows: usize, cols: usize, dim: usize },
    #[error("perturbation is not symmetric at ({i}, {j}): gap {gap:e}")]
    Asymmetric { i: usize, j: usize, gap: f64 },
    #[error("{endpoint} endpoint has eigenvalue {eigenvalue:e} within {KERNEL_TOL:e} of 0")]
    DegenerateEndpoint { endpoint: &'static str, eigenvalue: f64 },
    #[error("relative norm needs the sobolev weight model")]
    FlatModel,
    #[error("step size ε̃ = {0} must be below 1")]
    StepTooLarge(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

type Result<T> = std::result::Result<T, LabError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightModel {
    /// Unit weights: A is a bounded perturbation.
    Flat,
    /// `w_n = sqrt(3 + t_n²)`: A is measured from the graph-norm space of T.
    Sobolev,
}

impl WeightModel {
    pub fn weight(self, t: f64) -> f64 {
        match self {
            WeightModel::Flat => 1.0,
            WeightModel::Sobolev => (3.0 + t * t).sqrt(),
        }
    }
}

impl std::str::FromStr for WeightModel {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flat" => Ok(WeightModel::Flat),
            "sobolev" => Ok(WeightModel::Sobolev),
            _ => Err(LabError::InvalidParameter(format!("weight model {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorFamily {
    base_spectrum: Vec<f64>,
    perturbation: DMatrix<f64>,
    weight_model: WeightModel,
}

impl OperatorFamily {
    pub fn new(base_spectrum: Vec<f64>, perturbation: DMatrix<f64>, weight_model: WeightModel) -> Result<Self> {
        let dim = base_spectrum.len();
        if dim == 0 {
            return Err(LabError::InvalidParameter("empty base spectrum".into()));
        }
        if perturbation.nrows() != dim || perturbation.ncols() != dim {
            return Err(LabError::DimensionMismatch { rows: perturbation.nrows(), cols: perturbation.ncols(), dim });
        }
        for (i, &t) in base_spectrum.iter().enumerate() {
            if !t.is_finite() || t == 0.0 || (i > 0 && base_spectrum[i - 1] > t) {
                return Err(LabError::BadSpectrum(t));
            }
        }
        for i in 0..dim {
            for j in 0..i {
                let gap = (perturbation[(i, j)] - perturbation[(j, i)]).abs();
                if !(gap <= SYMMETRY_TOL) {
                    return Err(LabError::Asymmetric { i, j, gap });
                }
            }
        }
        Ok(OperatorFamily { base_spectrum, perturbation, weight_model })
    }

    pub fn dim(&self) -> usize {
        self.base_spectrum.len()
    }

    pub fn base_spectrum(&self) -> &[f64] {
        &self.base_spectrum
    }

    pub fn perturbation(&self) -> &DMatrix<f64> {
        &self.perturbation
    }

    pub fn weight_model(&self) -> WeightModel {
        self.weight_model
    }

    pub fn weights(&self) -> Vec<f64> {
        self.base_spectrum.iter().map(|&t| self.weight_model.weight(t)).collect()
    }

    /// `T + sA` as a dense matrix.
    pub fn operator_at(&self, s: f64) -> DMatrix<f64> {
        let mut m = &self.perturbation * s;
        for (i, &t) in self.base_spectrum.iter().enumerate() {
            m[(i, i)] += t;
        }
        m
    }
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    eigen::symmetric_eigenvalues(m)
}

/// Largest singular value, from the largest eigenvalue of `MᵀM`.
fn spectral_norm_f64(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let g = m.transpose() * m;
    largest_eigenvalue(&g).max(0.0).sqrt()
}

fn largest_eigenvalue(sym: &DMatrix<f64>) -> f64 {
    eigen::symmetric_eigenvalues(sym).last().copied().unwrap_or(f64::NEG_INFINITY)
}

/// Float result widened by a backward-error margin `4·n·u·‖M‖_F` plus one ulp.
fn norm_enclosure(sigma: f64, m: &DMatrix<f64>) -> Bound {
    let n = m.nrows().max(m.ncols()) as f64;
    let margin = 4.0 * n * f64::EPSILON * m.norm() + f64::MIN_POSITIVE;
    let lo = (sigma - margin).max(0.0);
    let hi = sigma + margin;
    Bound::new(Ext::from_f64(lo), Ext::from_f64(hi)).expect("ordered endpoints")
}

fn negative_count(eigs: &[f64], endpoint: &'static str) -> Result<i64> {
    if let Some(&z) = eigs.iter().find(|z| z.abs() < KERNEL_TOL) {
        return Err(LabError::DegenerateEndpoint { endpoint, eigenvalue: z });
    }
    Ok(eigs.iter().filter(|&&z| z < 0.0).count() as i64)
}

/// Net number of eigenvalues moving from negative to positive along `T + sA`.
pub fn spectral_flow(f: &OperatorFamily) -> Result<i64> {
    let start = negative_count(&f.base_spectrum, "start")?;
    let end = negative_count(&sorted_eigenvalues(&f.operator_at(1.0)), "end")?;
    Ok(start - end)
}

/// Ascending eigenvalues of `T + (i/steps)A` for `i = 0..=steps`, one row per grid point.
pub fn trajectories(f: &OperatorFamily, steps: usize) -> Result<Vec<Vec<f64>>> {
    if steps < 2 {
        return Err(LabError::InvalidParameter(format!("steps = {steps}, need at least 2")));
    }
    Ok((0..=steps).map(|i| sorted_eigenvalues(&f.operator_at(i as f64 / steps as f64))).collect())
}

/// Signed zero crossings of the sorted eigenvalue tracks: +1 for each
/// negative-to-positive move, -1 for the reverse. Grid points within
/// [`KERNEL_TOL`] of 0 are skipped over.
pub fn zero_crossings(rows: &[Vec<f64>]) -> i64 {
    let Some(first) = rows.first() else { return 0 };
    let mut total = 0;
    for j in 0..first.len() {
        let mut last_sign = 0i8;
        for row in rows {
            let z = row[j];
            let sign = if z > KERNEL_TOL {
                1
            } else if z < -KERNEL_TOL {
                -1
            } else {
                0
            };
            if sign != 0 {
                if last_sign != 0 && sign != last_sign {
                    total += sign as i64;
                }
                last_sign = sign;
            }
        }
    }
    total
}

/// `‖A‖₂` enclosure.
pub fn operator_norm(f: &OperatorFamily) -> Bound {
    let a = &f.perturbation;
    norm_enclosure(spectral_norm_f64(a), a)
}

/// `‖A W⁻¹‖₂` enclosure with `W = diag(sqrt(3 + t_n²))`.
pub fn relative_norm(f: &OperatorFamily) -> Result<Bound> {
    if f.weight_model != WeightModel::Sobolev {
        return Err(LabError::FlatModel);
    }
    let w = f.weights();
    let m = DMatrix::from_fn(f.dim(), f.dim(), |i, j| f.perturbation[(i, j)] / w[j]);
    Ok(norm_enclosure(spectral_norm_f64(&m), &m))
}

/// Outcome of one flow-bound check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowCheck {
    pub flow: i64,
    /// Eigenvalues of T with |t| at most the threshold.
    pub count: usize,
    /// Upper endpoint of the threshold.
    pub threshold: f64,
    pub pass: bool,
}

fn count_within(spectrum: &[f64], threshold: f64) -> usize {
    spectrum.iter().filter(|t| t.abs() <= threshold).count()
}

fn flow_check(f: &OperatorFamily, threshold: f64) -> Result<FlowCheck> {
    let flow = spectral_flow(f)?;
    let count = count_within(&f.base_spectrum, threshold);
    Ok(FlowCheck { flow, count, threshold, pass: flow.unsigned_abs() as usize <= count })
}

/// `|sf| ≤ #{n : |t_n| ≤ ‖A‖₂ + 1}`.
pub fn check_bounded_flow_bound(f: &OperatorFamily) -> Result<FlowCheck> {
    flow_check(f, operator_norm(f).hi_f64() + 1.0)
}

/// `|sf| ≤ #{n : |t_n| ≤ 2·exp(‖A‖₁)}`.
pub fn check_relative_flow_bound(f: &OperatorFamily) -> Result<FlowCheck> {
    let norm = relative_norm(f)?;
    flow_check(f, 2.0 * norm.hi_f64().exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub steps: usize,
    /// Largest step-local ε̃_k used.
    pub max_step_eps: f64,
    /// Eigenvalue checks performed.
    pub checked: usize,
    pub violations: usize,
    /// Largest `|z - t| - ε̃(2 + |t|)` over all checks, minimised over t.
    pub worst_slack: f64,
}

impl ContainmentReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Grid size making every step ε̃_k at most `target`. Weights are at least √3
/// in the sobolev model, so `‖A‖₂/√3` bounds each step-local relative norm.
pub fn default_steps(f: &OperatorFamily, target: f64) -> usize {
    let norm = match f.weight_model {
        WeightModel::Sobolev => operator_norm(f).hi_f64() / 3f64.sqrt(),
        WeightModel::Flat => operator_norm(f).hi_f64(),
    };
    ((norm / target).ceil() as usize).max(1)
}

/// Checks that every eigenvalue z of `T_{k+1} = T_k + A/N` has an eigenvalue
/// t of `T_k` with `|z - t| ≤ ε̃_k(2 + |t|)`.
///
/// ε̃_k is measured at step k: `‖Q_kᵀ A Q_k W_k⁻¹‖₂ / N` where `T_k = Q_k diag(t) Q_kᵀ`
/// and `W_k = diag(w(t))`. For t ≥ 0 this is the sandwich
/// `-2ε̃ + (1 - ε̃)t ≤ z ≤ 2ε̃ + (1 + ε̃)t`.
pub fn check_containment(f: &OperatorFamily, steps: usize) -> Result<ContainmentReport> {
    if steps == 0 {
        return Err(LabError::InvalidParameter("steps = 0".into()));
    }
    let n = steps as f64;
    let a = &f.perturbation;
    let flat_eps = spectral_norm_f64(a) / n;
    let mut report =
        ContainmentReport { steps, max_step_eps: 0.0, checked: 0, violations: 0, worst_slack: f64::NEG_INFINITY };
    let mut warm = DVector::from_element(f.dim(), 1.0 / (f.dim() as f64).sqrt());
    let squares = (f.weight_model == WeightModel::Sobolev).then(|| ShiftedSquare::new(f));
    let mut current = f.operator_at(0.0);
    let mut vals = sorted_eigenvalues(&current);
    for k in 0..steps {
        let next = f.operator_at((k + 1) as f64 / n);
        let next_vals = sorted_eigenvalues(&next);
        let worst = |eps: f64| -> Vec<f64> {
            next_vals
                .iter()
                .map(|&z| vals.iter().map(|&t| (z - t).abs() - eps * (2.0 + t.abs())).fold(f64::INFINITY, f64::min))
                .collect()
        };
        let (eps, slacks) = match f.weight_model {
            WeightModel::Flat => (flat_eps, worst(flat_eps)),
            WeightModel::Sobolev => {
                // a low estimate of ε̃ only makes the check stricter; fall back
                // to the exact value when the estimate leaves no room
                let shifted = squares.as_ref().expect("built for sobolev").at(k as f64 / n);
                let est = step_relative_norm_estimate(shifted, a, &mut warm) / n;
                let slacks = worst(est);
                if slacks.iter().any(|&s| s > CHECK_TOL) {
                    let exact = step_relative_norm(&current, a) / n;
                    (exact, worst(exact))
                } else {
                    (est, slacks)
                }
            }
        };
        if eps >= 1.0 {
            return Err(LabError::StepTooLarge(eps));
        }
        report.max_step_eps = report.max_step_eps.max(eps);
        for slack in slacks {
            report.checked += 1;
            report.worst_slack = report.worst_slack.max(slack);
            if slack > CHECK_TOL {
                report.violations += 1;
            }
        }
        current = next;
        vals = next_vals;
    }
    Ok(report)
}

/// `3 + (T + sA)²` assembled from precomputed pieces.
struct ShiftedSquare {
    base: DMatrix<f64>,
    cross: DMatrix<f64>,
    a2: DMatrix<f64>,
}

impl ShiftedSquare {
    fn new(f: &OperatorFamily) -> Self {
        let d = f.dim();
        let t = f.operator_at(0.0);
        let a = &f.perturbation;
        ShiftedSquare { base: &t * &t + DMatrix::identity(d, d) * 3.0, cross: &t * a + a * &t, a2: a * a }
    }

    fn at(&self, s: f64) -> DMatrix<f64> {
        let s2 = s * s;
        let mut m = self.base.clone();
        m.zip_zip_apply(&self.cross, &self.a2, |x, c, q| *x += s * c + s2 * q);
        m
    }
}

/// Power iteration for [`step_relative_norm`] given `3 + T²`, warm-started from `v`.
/// Returns the square root of a Rayleigh quotient, which does not exceed the
/// true value beyond rounding.
/// Relative stopping tolerance of the power iteration. The Rayleigh quotient
/// never overshoots, so a loose tolerance only risks the exact fallback.
const ESTIMATE_TOL: f64 = 1e-6;

fn step_relative_norm_estimate(shifted: DMatrix<f64>, a: &DMatrix<f64>, v: &mut DVector<f64>) -> f64 {
    let chol = shifted.cholesky().expect("3 + T² is positive definite");
    let d = a.nrows();
    let (mut x, mut w) = (DVector::zeros(d), DVector::zeros(d));
    let mut rho = 0.0;
    for _ in 0..500 {
        a.mul_to(&*v, &mut x);
        chol.solve_mut(&mut x);
        a.mul_to(&x, &mut w);
        let next = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v.copy_from(&w);
        *v /= norm;
        let done = (next - rho).abs() <= ESTIMATE_TOL * next.abs();
        rho = next;
        if done {
            break;
        }
    }
    rho.max(0.0).sqrt()
}

/// `‖Qᵀ A Q W⁻¹‖₂` for `T = Q diag(t) Qᵀ`, `W = diag(sqrt(3 + t²))`.
///
/// Its square is `λ_max(W⁻¹ QᵀA²Q W⁻¹)`, which shares its spectrum with
/// `A (3 + T²)⁻¹ A`, so no eigenvectors are needed.
pub fn step_relative_norm(t: &DMatrix<f64>, a: &DMatrix<f64>) -> f64 {
    let d = t.nrows();
    let s = t * t + DMatrix::identity(d, d) * 3.0;
    let chol = s.cholesky().expect("3 + T² is positive definite");
    let x = chol.solve(a);
    let mut g = a * x;
    // symmetrize away rounding before the eigenvalue call
    let gt = g.transpose();
    g += gt;
    g *= 0.5;
    largest_eigenvalue(&g).max(0.0).sqrt()
}

/// How base spectra are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumShape {
    /// |t| uniform on the range.
    Uniform,
    /// Counting function growing like T³, as for first-order operators in dimension three.
    #[default]
    Weyl,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub seed: u64,
    pub dim: usize,
    /// Base eigenvalues are drawn from `[-range, -gap] ∪ [gap, range]`.
    pub spectrum_range: f64,
    /// Target for ‖A‖₂; the generated perturbation is rescaled onto it.
    pub norm_target: f64,
    pub weight_model: WeightModel,
    pub shape: SpectrumShape,
    /// Share of the identity in A, in [-1, 1]. A nonzero drift moves the whole
    /// spectrum one way and so produces net flow.
    #[serde(default)]
    pub drift: f64,
}

/// Reproducible random family. The perturbation is a symmetric Gaussian matrix
/// rescaled so that ‖A‖₂ equals `norm_target` to rounding.
pub fn random_family(spec: &FamilySpec) -> Result<OperatorFamily> {
    if spec.dim == 0 {
        return Err(LabError::InvalidParameter("dim must be at least 1".into()));
    }
    if !(spec.spectrum_range > SPECTRAL_GAP) || !spec.spectrum_range.is_finite() {
        return Err(LabError::InvalidParameter(format!("spectrum range {}", spec.spectrum_range)));
    }
    if !(spec.norm_target >= 0.0) || !spec.norm_target.is_finite() {
        return Err(LabError::InvalidParameter(format!("norm target {}", spec.norm_target)));
    }
    if !(spec.drift.abs() <= 1.0) {
        return Err(LabError::InvalidParameter(format!("drift {}", spec.drift)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let span = spec.spectrum_range - SPECTRAL_GAP;
    let mut base: Vec<f64> = (0..spec.dim)
        .map(|_| {
            let u: f64 = rng.gen();
            let mag = match spec.shape {
                SpectrumShape::Uniform => SPECTRAL_GAP + span * u,
                SpectrumShape::Weyl => SPECTRAL_GAP + span * u.cbrt(),
            };
            if rng.gen::<bool>() {
                mag
            } else {
                -mag
            }
        })
        .collect();
    base.sort_by(f64::total_cmp);

    let d = spec.dim;
    let mut a = DMatrix::zeros(d, d);
    if spec.norm_target > 0.0 {
        for i in 0..d {
            for j in 0..=i {
                let x = gaussian(&mut rng);
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        let g = spectral_norm_f64(&a);
        if g > 0.0 {
            a *= (1.0 - spec.drift.abs()) / g;
        }
        for i in 0..d {
            a[(i, i)] += spec.drift;
        }
        let norm = spectral_norm_f64(&a);
        if norm > 0.0 {
            a *= spec.norm_target / norm;
        }
    }
    OperatorFamily::new(base, a, spec.weight_model)
}

/// Box-Muller.
fn gaussian(rng: &mut impl Rng) -> f64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}
