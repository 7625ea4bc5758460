//! Upper bounds on eigenvalue counts in `[-T, T]` from local Weyl laws.

use crate::geometry::GeometryBudget;
use crate::interval::{Bound, IntervalError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DensityError {
    #[error("count requires T ≥ 2, got {0}")]
    WindowTooSmall(String),
    #[error("Weyl constant {name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: String },
    #[error("profile {profile} certifies injectivity radius ≥ {profile_eps}, budget has eps = {budget_eps}")]
    EpsMismatch { profile: String, profile_eps: String, budget_eps: String },
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

type Result<T> = std::result::Result<T, DensityError>;

/// Coefficients of the local Weyl laws certified for injectivity radius ≥ `eps`.
#[derive(Clone, Debug)]
pub struct WeylConstants {
    pub name: String,
    /// Coefficient 𝔞 (∗d and Dirac).
    pub a: Bound,
    /// Coefficient 𝔟 (∗d and Dirac).
    pub b: Bound,
    /// Small-eigenvalue term 𝔡 (functions).
    pub d: Bound,
    /// Coefficient 𝔢 (functions).
    pub e: Bound,
    pub eps: Bound,
    /// Accept budgets with a smaller injectivity radius than `eps`.
    pub ignore_eps: bool,
}

/// Decimal form of a profile, as stored in the config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylProfile {
    pub eps: String,
    pub a: String,
    pub b: String,
    pub d: String,
    pub e: String,
}

pub const BUILTIN_PROFILE: &str = "eps0.15";

impl WeylConstants {
    pub fn new(name: &str, a: Bound, b: Bound, d: Bound, e: Bound, eps: Bound) -> Result<Self> {
        for (n, v) in [("a", &a), ("b", &b), ("d", &d), ("e", &e), ("eps", &eps)] {
            if !v.is_positive() {
                return Err(DensityError::NonPositive { name: n, value: v.to_string() });
            }
        }
        Ok(WeylConstants { name: name.to_string(), a, b, d, e, eps, ignore_eps: false })
    }

    /// The built-in profile for injectivity radius ≥ 0.15: (3, 402, 100, 780).
    pub fn eps_015() -> Self {
        WeylConstants::new(
            BUILTIN_PROFILE,
            Bound::from_int(3),
            Bound::from_int(402),
            Bound::from_int(100),
            Bound::from_int(780),
            Bound::from_rational(15, 100).expect("constant"),
        )
        .expect("built-in profile is positive")
    }

    pub fn from_profile(name: &str, p: &WeylProfile) -> Result<Self> {
        let parse = |s: &str| Bound::from_decimal_str(s);
        WeylConstants::new(name, parse(&p.a)?, parse(&p.b)?, parse(&p.d)?, parse(&p.e)?, parse(&p.eps)?)
    }

    pub fn overriding_eps(mut self) -> Self {
        self.ignore_eps = true;
        self
    }

    /// A profile certified for ε₀ covers every manifold with injectivity radius ≥ ε₀.
    pub fn check_budget(&self, g: &GeometryBudget) -> Result<()> {
        if self.ignore_eps || self.eps.certainly_le(&g.eps) || self.eps.is_subset(&g.eps) {
            return Ok(());
        }
        Err(DensityError::EpsMismatch {
            profile: self.name.clone(),
            profile_eps: self.eps.to_string(),
            budget_eps: g.eps.to_string(),
        })
    }

    /// `2𝔞 + 3𝔟 + 2𝔢`, the cubic coefficient of the extended-Hessian count.
    pub fn hessian_coefficient(&self) -> Result<Bound> {
        let two = Bound::from_int(2);
        let three = Bound::from_int(3);
        Ok(two.mul(&self.a)?.add(&three.mul(&self.b)?)?.add(&two.mul(&self.e)?)?)
    }
}

fn check_window(t: &Bound) -> Result<Bound> {
    if !Bound::from_int(2).certainly_le(t) {
        return Err(DensityError::WindowTooSmall(t.to_string()));
    }
    Ok(t.powi(3)?)
}

/// Bound on #{|λ| ≤ T} for ∗d on coexact forms or the Dirac operator: `V(𝔞/3 + 𝔟)T³`.
pub fn count_star_or_dirac(volume: &Bound, w: &WeylConstants, t: &Bound) -> Result<Bound> {
    let t3 = check_window(t)?;
    let coeff = w.a.div(&Bound::from_int(3))?.add(&w.b)?;
    Ok(volume.mul(&coeff)?.mul(&t3)?)
}

/// Bound for the function block `[[0, -d*], [-d, 0]]`: `2V[𝔡 + (𝔞/2 + 𝔢)T³]`.
pub fn count_function_block(volume: &Bound, w: &WeylConstants, t: &Bound) -> Result<Bound> {
    let t3 = check_window(t)?;
    let coeff = w.a.div(&Bound::from_int(2))?.add(&w.e)?;
    let inner = w.d.add(&coeff.mul(&t3)?)?;
    Ok(Bound::from_int(2).mul(volume)?.mul(&inner)?)
}

/// Bound for the extended Hessian at the reducible: `V[2𝔡 + (2𝔞 + 3𝔟 + 2𝔢)T³]`.
pub fn count_extended_hessian(volume: &Bound, w: &WeylConstants, t: &Bound) -> Result<Bound> {
    let t3 = check_window(t)?;
    let inner = Bound::from_int(2).mul(&w.d)?.add(&w.hessian_coefficient()?.mul(&t3)?)?;
    Ok(volume.mul(&inner)?)
}
