//! Sobolev and embedding constants of a closed hyperbolic three-manifold,
//! bounded in terms of a volume upper bound, an injectivity-radius lower
//! bound and a lower bound on the first coexact eigenvalue.

use crate::interval::{Bound, IntervalError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("budget rejected: {field} = {value} violates {rule}")]
    Guard { field: &'static str, value: String, rule: &'static str },
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

type Result<T> = std::result::Result<T, GeometryError>;

/// Volume upper bound, injectivity-radius lower bound and coexact
/// spectral-gap lower bound of a hyperbolic three-manifold.
#[derive(Clone, Debug)]
pub struct GeometryBudget {
    pub volume: Bound,
    pub eps: Bound,
    pub delta: Bound,
    /// Skip the V ≥ 0.94, eps ≤ 0.15, delta ≤ 1 conventions (positivity is always required).
    pub unchecked: bool,
    /// Lower bound on the volume of any closed hyperbolic three-manifold.
    pub volume_floor: Bound,
    /// User-supplied diameter upper bound, used when smaller than the formula.
    pub diameter_override: Option<Bound>,
}

/// Plain decimal form of a budget, as it appears in reports and configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetLiteral {
    pub volume: String,
    pub eps: String,
    pub delta: String,
}

fn limit(p: i64, q: i64) -> Bound {
    Bound::from_rational(p, q).expect("nonzero denominator")
}

pub fn min_hyperbolic_volume() -> Bound {
    limit(94, 100)
}

pub fn max_conventional_eps() -> Bound {
    limit(15, 100)
}

impl GeometryBudget {
    /// Budget satisfying the default guards.
    pub fn new(volume: Bound, eps: Bound, delta: Bound) -> Result<Self> {
        GeometryBudget::unchecked(volume, eps, delta)?.checked()
    }

    /// Budget with only positivity enforced.
    pub fn unchecked(volume: Bound, eps: Bound, delta: Bound) -> Result<Self> {
        let g = GeometryBudget {
            volume,
            eps,
            delta,
            unchecked: true,
            volume_floor: min_hyperbolic_volume(),
            diameter_override: None,
        };
        for (field, b) in [("V", &g.volume), ("eps", &g.eps), ("delta", &g.delta)] {
            if !b.is_positive() {
                return Err(GeometryError::Guard { field, value: b.to_string(), rule: "> 0" });
            }
        }
        Ok(g)
    }

    /// Parses decimal literals; `unchecked` relaxes the conventional guards.
    pub fn from_decimals(volume: &str, eps: &str, delta: &str, unchecked: bool) -> Result<Self> {
        let v = Bound::from_decimal_str(volume)?;
        let e = Bound::from_decimal_str(eps)?;
        let d = Bound::from_decimal_str(delta)?;
        if unchecked {
            GeometryBudget::unchecked(v, e, d)
        } else {
            GeometryBudget::new(v, e, d)
        }
    }

    pub fn with_diameter_override(mut self, d: Bound) -> Result<Self> {
        if !d.is_positive() {
            return Err(GeometryError::Guard { field: "diameter", value: d.to_string(), rule: "> 0" });
        }
        self.diameter_override = Some(d);
        Ok(self)
    }

    pub fn with_volume_floor(mut self, v: Bound) -> Result<Self> {
        if !v.is_positive() {
            return Err(GeometryError::Guard { field: "volume_floor", value: v.to_string(), rule: "> 0" });
        }
        self.volume_floor = v;
        Ok(self)
    }

    /// True when the budget lies inside the conventional region
    /// V ≥ 0.94, eps ≤ 0.15, delta ≤ 1.
    pub fn within_conventions(&self) -> bool {
        self.check_conventions().is_ok()
    }

    fn check_conventions(&self) -> Result<()> {
        // a guard fails only when the input is certainly on the wrong side
        if self.volume.certainly_lt(&min_hyperbolic_volume()) {
            return Err(GeometryError::Guard { field: "V", value: self.volume.to_string(), rule: "V ≥ 0.94" });
        }
        if max_conventional_eps().certainly_lt(&self.eps) {
            return Err(GeometryError::Guard { field: "eps", value: self.eps.to_string(), rule: "eps ≤ 0.15" });
        }
        if Bound::one().certainly_lt(&self.delta) {
            return Err(GeometryError::Guard { field: "delta", value: self.delta.to_string(), rule: "delta ≤ 1" });
        }
        Ok(())
    }

    /// Applies the conventional guards unless the budget is marked unchecked.
    pub fn validate(&self) -> Result<()> {
        if self.unchecked {
            Ok(())
        } else {
            self.check_conventions()
        }
    }

    /// Marks a budget as guarded, failing if it is outside the conventions.
    pub fn checked(mut self) -> Result<Self> {
        self.check_conventions()?;
        self.unchecked = false;
        Ok(self)
    }

    /// `1 + 3/delta`, the Rayleigh factor relating ‖b‖²_{L²₁} to ‖db‖².
    pub fn rayleigh_factor(&self) -> Result<Bound> {
        Ok(Bound::from_int(3).div(&self.delta)?.add(&Bound::one())?)
    }
}

/// Diameter upper bound `V / (π sinh²(eps/2))`, or the override when smaller.
pub fn diameter_bound(g: &GeometryBudget) -> Result<Bound> {
    g.validate()?;
    let s = g.eps.div(&Bound::from_int(2))?.sinh()?.powi(2)?;
    let d = g.volume.div(&Bound::pi().mul(&s)?)?;
    Ok(match &g.diameter_override {
        Some(o) => d.min(o),
        None => d,
    })
}

/// `cosh(d) - 1`, rejected when it is not certainly positive.
fn cosh_minus_one(d: &Bound) -> Result<Bound> {
    let c = d.cosh()?.sub(&Bound::one())?;
    if !c.is_positive() {
        return Err(GeometryError::Guard { field: "diameter", value: d.to_string(), rule: "cosh(d) - 1 > 0" });
    }
    Ok(c)
}

/// Isoperimetric lower bound `(vol / (cosh d - 1))^4 / (64 π^5)` for a manifold
/// with Ricci curvature ≥ -2, volume at least `volume` and diameter at most `diameter`.
pub fn isoperimetric_from(volume: &Bound, diameter: &Bound) -> Result<Bound> {
    let ratio = volume.div(&cosh_minus_one(diameter)?)?;
    let denom = Bound::from_int(64).mul(&Bound::pi().powi(5)?)?;
    Ok(ratio.powi(4)?.div(&denom)?)
}

/// Isoperimetric constant lower bound at the budget's diameter bound and volume floor.
pub fn isoperimetric_lower(g: &GeometryBudget) -> Result<Bound> {
    isoperimetric_from(&g.volume_floor, &diameter_bound(g)?)
}

/// Sobolev constant lower bound: the unrounded isoperimetric chain.
pub fn sobolev_constant_lower(g: &GeometryBudget) -> Result<Bound> {
    isoperimetric_lower(g)
}

/// The rounded form `4·10⁻⁵ / (cosh d - 1)^4`, kept for comparison.
/// Its constant slightly exceeds 0.94⁴/(64π⁵), so it is not used as a bound.
pub fn sobolev_constant_rounded(g: &GeometryBudget) -> Result<Bound> {
    let c = cosh_minus_one(&diameter_bound(g)?)?;
    Ok(limit(4, 100_000).div(&c.powi(4)?)?)
}

fn two_to_eight_thirds() -> Result<Bound> {
    Ok(Bound::from_int(2).pow_rational(8, 3)?)
}

/// Lower bound on C with ‖f‖²_{L²₁} ≥ C‖f‖²_{L⁶}:
/// `min(𝔖^{2/3}/8, 1/1.05) / 2^{8/3}`.
pub fn embedding_l6_constant(g: &GeometryBudget) -> Result<Bound> {
    let s = sobolev_constant_lower(g)?;
    let a = s.pow_rational(2, 3)?.div(&Bound::from_int(8))?;
    let b = limit(100, 105);
    Ok(a.min(&b).div(&two_to_eight_thirds()?)?)
}

/// Both forms of the coefficient in ‖b‖²_{L⁶} ≤ K‖db‖² for coexact 1-forms.
#[derive(Clone, Debug)]
pub struct CoexactL6 {
    /// `e^{11}·(cosh d - 1)^{8/3}·(1 + 3/delta)`.
    pub closed_form: Bound,
    /// `(1 + 3/delta) / C` with C from [`embedding_l6_constant`].
    pub assembled: Bound,
}

impl CoexactL6 {
    pub fn majorized(&self) -> bool {
        self.assembled.certainly_le(&self.closed_form)
    }
}

pub fn coexact_l6_coefficient(g: &GeometryBudget) -> Result<CoexactL6> {
    let r = g.rayleigh_factor()?;
    let c = cosh_minus_one(&diameter_bound(g)?)?;
    let closed_form = Bound::from_int(11).exp()?.mul(&c.pow_rational(8, 3)?)?.mul(&r)?;
    let assembled = r.div(&embedding_l6_constant(g)?)?;
    Ok(CoexactL6 { closed_form, assembled })
}

/// `e^{11/2}·V^{1/12}·(cosh d - 1)^{4/3}`, the L²₁ → L⁴ constant for coexact forms.
pub fn c_v_eps(g: &GeometryBudget) -> Result<Bound> {
    let c = cosh_minus_one(&diameter_bound(g)?)?;
    let e = limit(11, 2).exp()?;
    Ok(e.mul(&g.volume.pow_rational(1, 12)?)?.mul(&c.pow_rational(4, 3)?)?)
}

/// `𝔠_{V,ε}·(1 + 3/delta)^{1/2}`: ‖b‖_{L⁴} ≤ this · ‖db‖.
pub fn coexact_l4_coefficient(g: &GeometryBudget) -> Result<Bound> {
    Ok(c_v_eps(g)?.mul(&g.rayleigh_factor()?.sqrt()?)?)
}
