//! Operator-norm bounds for the Hessian perturbation and the abstract
//! spectral-flow threshold.

use crate::geometry::{c_v_eps, GeometryBudget, GeometryError};
use crate::interval::{Bound, IntervalError};
use crate::spectral_density::{count_extended_hessian, DensityError, WeylConstants};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PerturbationError {
    #[error("norm {name} must be nonnegative, got {value}")]
    Negative { name: &'static str, value: String },
    #[error("recurrence step ε = {0} must be below 1")]
    StepTooLarge(String),
    #[error("recurrence needs at least one step")]
    NoSteps,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

type Result<T> = std::result::Result<T, PerturbationError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// ‖A‖ as an operator on H.
    Bounded,
    /// ‖A‖₁ as an operator H₁ → H.
    RelativelyBounded,
}

#[derive(Clone, Debug)]
pub struct PerturbationNorm {
    pub value: Bound,
    pub kind: NormKind,
}

impl PerturbationNorm {
    pub fn new(value: Bound, kind: NormKind) -> Result<Self> {
        nonnegative("norm", &value)?;
        Ok(PerturbationNorm { value, kind })
    }
}

fn nonnegative(name: &'static str, b: &Bound) -> Result<()> {
    if !b.is_nonnegative() {
        return Err(PerturbationError::Negative { name, value: b.to_string() });
    }
    Ok(())
}

/// `3·max(‖B‖, ‖C‖, ‖D‖, ‖E‖, ‖F‖)` for the block perturbation of the extended Hessian.
pub fn block_norm_bound(nb: &Bound, nc: &Bound, nd: &Bound, ne: &Bound, nf: &Bound) -> Result<Bound> {
    let named = [("B", nb), ("C", nc), ("D", nd), ("E", ne), ("F", nf)];
    for (name, v) in named {
        nonnegative(name, v)?;
    }
    let m = named.iter().skip(1).fold(nb.clone(), |acc, (_, v)| acc.max(v));
    Ok(Bound::from_int(3).mul(&m)?)
}

/// `‖A‖₁ ≤ (9/2)·𝔠_{V,ε}·V^{1/2}·(1 + 3/δ)^{1/2}` at any irreducible solution.
pub fn hessian_perturbation_norm(g: &GeometryBudget) -> Result<PerturbationNorm> {
    g.validate()?;
    let c = c_v_eps(g)?;
    let v = Bound::from_rational(9, 2)?
        .mul(&c)?
        .mul(&g.volume.sqrt()?)?
        .mul(&g.rayleigh_factor()?.sqrt()?)?;
    PerturbationNorm::new(v, NormKind::RelativelyBounded)
}

/// Eigenvalues of T with |t| above this carry no spectral flow:
/// `2·e^{‖A‖₁}` (relatively bounded) or `‖A‖ + 1` (bounded).
pub fn flow_threshold(n: &PerturbationNorm) -> Result<Bound> {
    Ok(match n.kind {
        NormKind::RelativelyBounded => Bound::from_int(2).mul(&n.value.exp()?)?,
        NormKind::Bounded => n.value.add(&Bound::one())?,
    })
}

/// `x_N = 2((1 - ε)^{-N} - 1)` with `ε = ‖A‖₁/N`, the N-step value of
/// `x_{k+1} = (x_k + 2ε)/(1 - ε)` from `x_0 = 0`.
pub fn recurrence_value(norm: &Bound, steps: u64) -> Result<Bound> {
    nonnegative("norm", norm)?;
    if steps == 0 {
        return Err(PerturbationError::NoSteps);
    }
    let n = Bound::from_int(i64::try_from(steps).map_err(|_| PerturbationError::StepTooLarge(steps.to_string()))?);
    let eps = norm.div(&n)?;
    if !eps.certainly_lt(&Bound::one()) {
        return Err(PerturbationError::StepTooLarge(eps.to_string()));
    }
    let ln = Bound::one().sub(&eps)?.ln()?;
    let growth = n.mul(&ln)?.neg().exp()?;
    Ok(Bound::from_int(2).mul(&growth.sub(&Bound::one())?)?)
}

/// `2(e^{‖A‖₁} - 1)`, the limit of [`recurrence_value`] as N grows.
pub fn recurrence_limit(norm: &Bound) -> Result<Bound> {
    nonnegative("norm", norm)?;
    Ok(Bound::from_int(2).mul(&norm.exp()?.sub(&Bound::one())?)?)
}

/// Both forms of the spectral-flow bound at the reducible.
#[derive(Clone, Debug)]
pub struct SpectralFlowBound {
    /// `V[2𝔡 + (2𝔞+3𝔟+2𝔢)·8·exp(15·𝔠·V^{1/2}·(1+3/δ)^{1/2})]`.
    pub displayed: Bound,
    /// The extended-Hessian count at the threshold `2e^{‖A‖₁}`.
    pub reassembled: Bound,
    pub hessian_norm: PerturbationNorm,
    pub threshold: Bound,
}

impl SpectralFlowBound {
    /// The displayed formula uses exponent 15 where the chain gives 3·(9/2) = 13.5.
    pub fn majorized(&self) -> bool {
        self.reassembled.certainly_le(&self.displayed)
    }
}

pub fn spectral_flow_bound(g: &GeometryBudget, w: &WeylConstants) -> Result<SpectralFlowBound> {
    g.validate()?;
    w.check_budget(g)?;
    let c = c_v_eps(g)?;
    let exponent = Bound::from_int(15)
        .mul(&c)?
        .mul(&g.volume.sqrt()?)?
        .mul(&g.rayleigh_factor()?.sqrt()?)?;
    let growth = Bound::from_int(8).mul(&exponent.exp()?)?;
    let inner = Bound::from_int(2).mul(&w.d)?.add(&w.hessian_coefficient()?.mul(&growth)?)?;
    let displayed = g.volume.mul(&inner)?;

    let hessian_norm = hessian_perturbation_norm(g)?;
    let threshold = flow_threshold(&hessian_norm)?;
    let reassembled = count_extended_hessian(&g.volume, w, &threshold)?;
    Ok(SpectralFlowBound { displayed, reassembled, hessian_norm, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Ext;

    fn int(n: i64) -> Bound {
        Bound::from_int(n)
    }

    fn exact(b: &Bound, v: i64) -> bool {
        b.is_point() && b.contains(&Ext::from_i64(v))
    }

    #[test]
    fn block_bound() {
        let one = Bound::one();
        assert!(exact(&block_norm_bound(&one, &one, &one, &one, &one).unwrap(), 3));
        let z = Bound::zero();
        assert!(exact(&block_norm_bound(&z, &z, &z, &z, &int(7)).unwrap(), 21));
        let s6 = int(6).sqrt().unwrap();
        let s3 = int(3).sqrt().unwrap();
        let f = int(40);
        assert!(exact(&block_norm_bound(&s6, &s6, &s3, &s3, &f).unwrap(), 120));
        assert!(matches!(
            block_norm_bound(&one, &int(-1), &one, &one, &one),
            Err(PerturbationError::Negative { name: "C", .. })
        ));
    }

    #[test]
    fn thresholds() {
        let rel = |v: Bound| PerturbationNorm::new(v, NormKind::RelativelyBounded).unwrap();
        let bdd = |v: Bound| PerturbationNorm::new(v, NormKind::Bounded).unwrap();
        assert!(exact(&flow_threshold(&rel(Bound::zero())).unwrap(), 2));
        assert!(exact(&flow_threshold(&bdd(Bound::zero())).unwrap(), 1));
        let t = flow_threshold(&rel(Bound::ln10())).unwrap();
        assert!(t.contains(&Ext::from_i64(20)) && t.rel_width() < 1e-30);
        let huge = flow_threshold(&rel(Bound::from_int(10).powi(40).unwrap())).unwrap();
        assert!(huge.hi().is_log());
    }

    #[test]
    fn recurrence_examples() {
        assert!(recurrence_value(&Bound::zero(), 17).unwrap().contains(&Ext::zero()));
        let half = Bound::from_rational(1, 2).unwrap();
        let x1 = recurrence_value(&half, 1).unwrap();
        assert!(x1.contains(&Ext::from_i64(2)) && x1.rel_width() < 1e-30);
        let ln2 = int(2).ln().unwrap();
        assert!(recurrence_limit(&ln2).unwrap().contains(&Ext::from_i64(2)));
        assert!(matches!(recurrence_value(&int(3), 2), Err(PerturbationError::StepTooLarge(_))));
        assert!(matches!(recurrence_value(&int(1), 0), Err(PerturbationError::NoSteps)));
    }

    #[test]
    fn recurrence_matches_iteration() {
        // iterate x ← (x + 2ε)/(1 - ε) directly
        let norm = Bound::from_rational(3, 2).unwrap();
        let n = 25;
        let eps = norm.div(&int(n)).unwrap();
        let mut x = Bound::zero();
        for _ in 0..n {
            x = x.add(&int(2).mul(&eps).unwrap()).unwrap().div(&Bound::one().sub(&eps).unwrap()).unwrap();
        }
        let closed = recurrence_value(&norm, n as u64).unwrap();
        assert!(!closed.certainly_lt(&x) && !x.certainly_lt(&closed));
    }

    #[test]
    fn recurrence_decreases_to_its_limit() {
        let x = int(2);
        let lim = recurrence_limit(&x).unwrap();
        let mut prev = recurrence_value(&x, 3).unwrap();
        for n in [10, 100, 1000, 100_000] {
            let v = recurrence_value(&x, n).unwrap();
            assert!(v.certainly_lt(&prev));
            assert!(lim.certainly_lt(&v));
            prev = v;
        }
    }

    #[test]
    fn hessian_norm_factors() {
        let g = GeometryBudget::from_decimals("1", "0.15", "1", false).unwrap();
        let n = hessian_perturbation_norm(&g).unwrap();
        assert_eq!(n.kind, NormKind::RelativelyBounded);
        let expect = Bound::from_rational(9, 2).unwrap().mul(&c_v_eps(&g).unwrap()).unwrap().mul(&int(2)).unwrap();
        assert!(!n.value.certainly_lt(&expect) && !expect.certainly_lt(&n.value));
        assert!(n.value.rel_width() < 1e-25);

        let g3 = GeometryBudget::unchecked(Bound::one(), Bound::from_rational(15, 100).unwrap(), int(3)).unwrap();
        let n3 = hessian_perturbation_norm(&g3).unwrap();
        let ratio = n3.value.div(&n.value).unwrap();
        let sqrt_half = Bound::from_rational(1, 2).unwrap().sqrt().unwrap();
        assert!(!ratio.certainly_lt(&sqrt_half) && !sqrt_half.certainly_lt(&ratio));
    }

    #[test]
    fn flow_bound_at_the_minimal_budget() {
        let g = GeometryBudget::from_decimals("0.94", "0.15", "1", false).unwrap();
        let w = WeylConstants::eps_015();
        let sf = spectral_flow_bound(&g, &w).unwrap();
        assert!(sf.displayed.hi().is_log());
        assert!(sf.majorized());
        assert!(sf.reassembled.certainly_lt(&sf.displayed));
    }

    #[test]
    fn flow_bound_monotone() {
        let w = WeylConstants::eps_015();
        let sf = |v: &str, d: &str| {
            let g = GeometryBudget::from_decimals(v, "0.15", d, false).unwrap();
            spectral_flow_bound(&g, &w).unwrap().displayed
        };
        assert!(sf("0.94", "1").certainly_lt(&sf("1", "1")));
        assert!(sf("1", "1").certainly_lt(&sf("1", "0.5")));
    }

    #[test]
    fn flow_bound_rejects_incompatible_profile() {
        let g = GeometryBudget::from_decimals("1", "0.1", "1", false).unwrap();
        let r = spectral_flow_bound(&g, &WeylConstants::eps_015());
        assert!(matches!(r, Err(PerturbationError::Density(DensityError::EpsMismatch { .. }))));
    }
}
