//! Graded F[U]-module shapes, connected sums, Pin(2) widths and the
//! Brieskorn exclusion threshold.

use crate::interval::{Bound, Dir, Ext, IntervalError};
use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FloerError {
    #[error("torsion exponents must be at least 1, got {0}")]
    ZeroTorsion(u32),
    #[error("correction terms ({alpha}, {beta}, {gamma}) violate {rule}")]
    CorrectionTerms { alpha: i64, beta: i64, gamma: i64, rule: &'static str },
    #[error("Brieskorn index must be at least 1, got {0}")]
    BrieskornIndex(i64),
    #[error("{name} must be nonnegative, got {value}")]
    Negative { name: &'static str, value: String },
    #[error("cannot parse grading {0:?}")]
    Grading(String),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

type Result<T> = std::result::Result<T, FloerError>;

/// Rational grading, written as an integer or `p/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Grading(pub Rational64);

impl Grading {
    pub fn int(n: i64) -> Self {
        Grading(Rational64::from_integer(n))
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Grading {
    type Err = FloerError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || FloerError::Grading(s.to_string());
        let t = s.trim();
        let r = match t.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                Rational64::new(p, q)
            }
            None => Rational64::from_integer(t.parse().map_err(|_| bad())?),
        };
        Ok(Grading(r))
    }
}

impl Serialize for Grading {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            s.serialize_i64(*self.0.numer())
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Grading {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Grading::int(n)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Shape of `F[U^{-1}, U]/U·F[U] ⊕ ⨁ F[U]/U^{n_i}`: the bottom grading of the
/// tower and the torsion exponents. Torsion gradings are not tracked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct HMModule {
    pub tower_bottom: Grading,
    /// Kept sorted.
    pub torsion: Vec<u32>,
}

impl HMModule {
    pub fn new(tower_bottom: Grading, mut torsion: Vec<u32>) -> Result<Self> {
        if let Some(&z) = torsion.iter().find(|&&n| n == 0) {
            return Err(FloerError::ZeroTorsion(z));
        }
        torsion.sort_unstable();
        Ok(HMModule { tower_bottom, torsion })
    }

    /// The module of S³: a bare tower at grading 0.
    pub fn sphere() -> Self {
        HMModule::default()
    }

    /// Re-sorts and validates a module built directly from its fields.
    pub fn normalized(self) -> Result<Self> {
        HMModule::new(self.tower_bottom, self.torsion)
    }

    /// Orientation reversal: the tower bottom changes sign, torsion is kept.
    pub fn reversed(&self) -> Self {
        HMModule { tower_bottom: Grading(-self.tower_bottom.0), torsion: self.torsion.clone() }
    }

    /// Fröyshov invariant `h = -d/2`.
    pub fn froyshov(&self) -> Grading {
        Grading(-self.tower_bottom.0 / 2)
    }
}

/// The U-torsion width: the largest torsion exponent, 0 when there is none.
pub fn torsion_width(m: &HMModule) -> u32 {
    m.torsion.iter().copied().max().unwrap_or(0)
}

/// Künneth with Tor over F[U], gradings forgotten:
/// each pair (n, m) gives two copies of U^{min(n, m)} torsion,
/// each torsion summand also pairs once with the other tower.
pub fn connected_sum(a: &HMModule, b: &HMModule) -> HMModule {
    let mut torsion = Vec::with_capacity(2 * a.torsion.len() * b.torsion.len() + a.torsion.len() + b.torsion.len());
    for &n in &a.torsion {
        for &m in &b.torsion {
            torsion.extend([n.min(m); 2]);
        }
    }
    torsion.extend_from_slice(&a.torsion);
    torsion.extend_from_slice(&b.torsion);
    torsion.sort_unstable();
    HMModule { tower_bottom: Grading(a.tower_bottom.0 + b.tower_bottom.0), torsion }
}

/// `w ≤ 4t + 4`.
pub fn width_upper_from_torsion(t: u64) -> u64 {
    4 * t + 4
}

/// `t ≤ 2·max|sf| + 2`.
pub fn torsion_upper_from_flow(sf: &Bound) -> Result<Bound> {
    require_nonnegative("spectral flow bound", sf)?;
    Ok(Bound::from_int(2).mul(sf)?.add(&Bound::from_int(2))?)
}

/// `|h| ≤ ½(|gr^Q| + max|sf| + 1)`.
pub fn froyshov_upper(gr_q: &Bound, sf: &Bound) -> Result<Bound> {
    require_nonnegative("reducible grading bound", gr_q)?;
    require_nonnegative("spectral flow bound", sf)?;
    Ok(gr_q.add(sf)?.add(&Bound::one())?.div(&Bound::from_int(2))?)
}

fn require_nonnegative(name: &'static str, b: &Bound) -> Result<()> {
    if !b.is_nonnegative() {
        return Err(FloerError::Negative { name, value: b.to_string() });
    }
    Ok(())
}

/// Manolescu's α ≥ β ≥ γ, all of the same parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionTerms {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
}

impl CorrectionTerms {
    pub fn new(alpha: i64, beta: i64, gamma: i64) -> Result<Self> {
        let err = |rule| Err(FloerError::CorrectionTerms { alpha, beta, gamma, rule });
        if !(alpha >= beta && beta >= gamma) {
            return err("alpha ≥ beta ≥ gamma");
        }
        if (alpha - beta) % 2 != 0 || (alpha - gamma) % 2 != 0 {
            return err("equal parity");
        }
        Ok(CorrectionTerms { alpha, beta, gamma })
    }

    /// α(-Y) = -γ(Y), β(-Y) = -β(Y), γ(-Y) = -α(Y).
    pub fn reversed(&self) -> Self {
        CorrectionTerms { alpha: -self.gamma, beta: -self.beta, gamma: -self.alpha }
    }
}

/// Pin(2)-width `α - γ`.
pub fn width(ct: &CorrectionTerms) -> u64 {
    (ct.alpha - ct.gamma) as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrieskornWidth {
    pub n: i64,
    /// (2, 8n - 1, 16n - 1).
    pub seifert: (i64, i64, i64),
    pub width: i64,
}

impl fmt::Display for BrieskornWidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q, r) = self.seifert;
        write!(f, "Σ({p},{q},{r}) has width {}", self.width)
    }
}

/// `w(Σ(2, 8n-1, 16n-1)) = 2n`.
pub fn brieskorn_width(n: i64) -> Result<BrieskornWidth> {
    if n < 1 || n > i64::MAX / 16 {
        return Err(FloerError::BrieskornIndex(n));
    }
    Ok(BrieskornWidth { n, seifert: (2, 8 * n - 1, 16 * n - 1), width: 2 * n })
}

/// `2N + 2`: every Brieskorn index strictly above it escapes the subgroup.
pub fn exclusion_threshold(torsion_bound: &Bound) -> Result<Bound> {
    require_nonnegative("torsion bound", torsion_bound)?;
    Ok(Bound::from_int(2).mul(torsion_bound)?.add(&Bound::from_int(2))?)
}

/// First Brieskorn index certainly above a threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExcludedFrom {
    /// All n ≥ this value are excluded.
    Exact(i64),
    /// The index does not fit in an i64; log10 of the threshold's upper endpoint.
    Beyond { log10_lower: String, log10_upper: String },
}

/// The least integer strictly above the threshold's upper endpoint.
pub fn first_excluded_index(threshold: &Bound) -> Result<ExcludedFrom> {
    if let Some(f) = threshold.hi().floor_i64().and_then(|f| f.checked_add(1)) {
        return Ok(ExcludedFrom::Exact(f.max(1)));
    }
    let (lo, hi) = Bound::point(threshold.hi().clone()).log10_report()?;
    Ok(ExcludedFrom::Beyond { log10_lower: lo.to_decimal(25, Dir::Down), log10_upper: hi.to_decimal(25, Dir::Up) })
}

/// Whether `Σ(2, 8n-1, 16n-1)` is certainly excluded by the threshold.
pub fn brieskorn_excluded(n: i64, threshold: &Bound) -> bool {
    threshold.hi().lt(&Ext::from_i64(n))
}

/// A module with its width invariants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleSummary {
    pub module: HMModule,
    pub torsion_width: u32,
    pub froyshov: Grading,
    /// `4t + 4`, an upper bound on the Pin(2)-width.
    pub pin2_width_upper: u64,
}

impl ModuleSummary {
    pub fn new(module: HMModule) -> Self {
        let t = torsion_width(&module);
        ModuleSummary { froyshov: module.froyshov(), torsion_width: t, pin2_width_upper: width_upper_from_torsion(t as u64), module }
    }
}

/// Connected sum of several modules, with every summand described.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    pub summands: Vec<ModuleSummary>,
    pub sum: ModuleSummary,
    /// The width of the sum equals the largest summand width.
    pub width_is_max: bool,
}

/// Validates the modules and sums them; no modules gives the sphere.
pub fn sum_report(modules: Vec<HMModule>) -> Result<SumReport> {
    let modules = modules.into_iter().map(HMModule::normalized).collect::<Result<Vec<_>>>()?;
    let sum = modules.iter().fold(HMModule::sphere(), |acc, m| connected_sum(&acc, m));
    let max_width = modules.iter().map(torsion_width).max().unwrap_or(0);
    Ok(SumReport {
        width_is_max: torsion_width(&sum) == max_width,
        summands: modules.into_iter().map(ModuleSummary::new).collect(),
        sum: ModuleSummary::new(sum),
    })
}
