//! End-to-end constants 𝔫 and 𝔪, census ingestion and reports.

pub mod census;
pub mod config;
pub mod report;

use crate::floer::{exclusion_threshold, froyshov_upper, torsion_upper_from_flow, FloerError};
use crate::geometry::{min_hyperbolic_volume, GeometryBudget, GeometryError};
use crate::interval::{Bound, IntervalError};
use crate::perturbation::{spectral_flow_bound, PerturbationError, SpectralFlowBound};
use crate::spectral_density::{DensityError, WeylConstants};

pub use census::{parse_census, CensusError, CensusParse, CensusRecord};
pub use config::{Config, ConfigError};
pub use report::{census_report, obstruction_report, CensusEntry, ObstructionReport, RenderedBound, ReportOptions};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Perturbation(#[from] PerturbationError),
    #[error(transparent)]
    Floer(#[from] FloerError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("closed form needs {0}")]
    ClosedFormDomain(&'static str),
    #[error("𝔪 needs a bound on 𝔣 (flag or config f_bound)")]
    MissingFBound,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl PipelineError {
    /// Whether the error is an input rejected by a domain guard rather than an internal failure.
    pub fn is_guard(&self) -> bool {
        match self {
            PipelineError::Geometry(GeometryError::Guard { .. })
            | PipelineError::Density(_)
            | PipelineError::ClosedFormDomain(_)
            | PipelineError::MissingFBound
            | PipelineError::Config(_) => true,
            PipelineError::Perturbation(p) => matches!(
                p,
                PerturbationError::Negative { .. }
                    | PerturbationError::Geometry(GeometryError::Guard { .. })
                    | PerturbationError::Density(_)
            ),
            PipelineError::Floer(f) => !matches!(f, FloerError::Interval(_)),
            PipelineError::Interval(i) => matches!(i, IntervalError::Parse(_) | IntervalError::Domain { .. }),
            _ => false,
        }
    }
}

type Result<T> = std::result::Result<T, PipelineError>;

/// 𝔫 and the pieces it is assembled from.
#[derive(Clone, Debug)]
pub struct NConstant {
    pub flow: SpectralFlowBound,
    /// `N = 2·sf + 2`, the torsion bound.
    pub torsion_bound: Bound,
    /// `𝔫 = 2N + 2 = 4·sf + 6`.
    pub n: Bound,
    /// The same chain run on the reassembled flow bound.
    pub n_reassembled: Bound,
}

/// `𝔫 = 2N + 2` with `N = 2·sf + 2` and sf from the displayed spectral-flow bound.
pub fn n_constant_assembled(g: &GeometryBudget, w: &WeylConstants) -> Result<NConstant> {
    let flow = spectral_flow_bound(g, w)?;
    let torsion_bound = torsion_upper_from_flow(&flow.displayed)?;
    let n = exclusion_threshold(&torsion_bound)?;
    let n_reassembled = exclusion_threshold(&torsion_upper_from_flow(&flow.reassembled)?)?;
    Ok(NConstant { flow, torsion_bound, n, n_reassembled })
}

/// `4V·[200 + exp(11 + 15·e^{11/2}·V^{7/12}·(cosh(57V) - 1)^{8/3}·(1 + 3/δ)^{1/2})] + 6`,
/// the ε = 0.15 closed form, evaluated literally.
pub fn n_constant_closed_form(volume: &Bound, delta: &Bound) -> Result<Bound> {
    if !min_hyperbolic_volume().certainly_le(volume) && !min_hyperbolic_volume().is_subset(volume) {
        return Err(PipelineError::ClosedFormDomain("V ≥ 0.94"));
    }
    if !delta.is_positive() || !delta.certainly_le(&Bound::one()) {
        return Err(PipelineError::ClosedFormDomain("0 < delta ≤ 1"));
    }
    let int = Bound::from_int;
    let rayleigh = Bound::one().add(&int(3).div(delta)?)?.sqrt()?;
    let cosh_term = int(57).mul(volume)?.cosh()?.sub(&Bound::one())?.pow_rational(8, 3)?;
    let inner = int(15)
        .mul(&Bound::from_rational(11, 2)?.exp()?)?
        .mul(&volume.pow_rational(7, 12)?)?
        .mul(&cosh_term)?
        .mul(&rayleigh)?;
    let bracket = int(200).add(&int(11).add(&inner)?.exp()?)?;
    Ok(int(4).mul(volume)?.mul(&bracket)?.add(&int(6))?)
}

/// `𝔪 = ½(𝔣 + sf + 1)`.
pub fn m_constant(g: &GeometryBudget, w: &WeylConstants, f_bound: Option<&Bound>) -> Result<Bound> {
    let f = f_bound.ok_or(PipelineError::MissingFBound)?;
    let flow = spectral_flow_bound(g, w)?;
    Ok(froyshov_upper(f, &flow.displayed)?)
}

/// The closed form applies to budgets inside the conventions with eps ≥ 0.15.
pub fn closed_form_applies(g: &GeometryBudget) -> bool {
    let eps015 = Bound::from_rational(15, 100).expect("constant");
    (eps015.certainly_le(&g.eps) || eps015.is_subset(&g.eps))
        && (min_hyperbolic_volume().certainly_le(&g.volume) || min_hyperbolic_volume().is_subset(&g.volume))
        && g.delta.certainly_le(&Bound::one())
}
