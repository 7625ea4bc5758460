//! Obstruction reports: every huge constant as decimal endpoints plus a
//! log10 enclosure, rendered at fixed precision so that reports are
//! byte-for-byte reproducible.

use super::census::{CensusParse, CensusRecord};
use super::{closed_form_applies, m_constant, n_constant_assembled, n_constant_closed_form, PipelineError, Result};
use crate::floer::{first_excluded_index, ExcludedFrom};
use crate::geometry::{max_conventional_eps, BudgetLiteral, GeometryBudget};
use crate::interval::{Bound, Dir};
use crate::spectral_density::WeylConstants;
use serde::{Deserialize, Serialize};

/// Significant digits in rendered endpoints.
pub const REPORT_DIGITS: usize = 25;

/// A Bound as text: endpoints and, for positive values, log10 endpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderedBound {
    pub lower: String,
    pub upper: String,
    pub log10_lower: Option<String>,
    pub log10_upper: Option<String>,
}

impl RenderedBound {
    pub fn new(b: &Bound) -> Result<RenderedBound> {
        let lower = b.lo().to_decimal(REPORT_DIGITS, Dir::Down);
        let upper = b.hi().to_decimal(REPORT_DIGITS, Dir::Up);
        let (log10_lower, log10_upper) = if b.is_positive() {
            let (lo, hi) = b.log10_report()?;
            (Some(lo.to_decimal(REPORT_DIGITS, Dir::Down)), Some(hi.to_decimal(REPORT_DIGITS, Dir::Up)))
        } else {
            (None, None)
        };
        Ok(RenderedBound { lower, upper, log10_lower, log10_upper })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Skip the V ≥ 0.94, eps ≤ 0.15, delta ≤ 1 conventions entirely.
    pub unchecked: bool,
    /// Diameter upper bound replacing the formula when smaller.
    pub diameter: Option<String>,
    /// Bound on 𝔣; 𝔪 is reported only when present.
    pub f_bound: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub name: Option<String>,
    pub budget: BudgetLiteral,
    pub profile: String,
    /// Conventions were skipped, either on request or because eps > 0.15.
    pub unchecked: bool,
    pub diameter_override: Option<String>,
    pub spectral_flow_bound: RenderedBound,
    pub torsion_bound: RenderedBound,
    pub n_constant_assembled: RenderedBound,
    pub n_constant_closed: Option<RenderedBound>,
    /// The closed form with this budget substituted.
    pub closed_form_instance: Option<String>,
    pub assembled_le_closed: Option<bool>,
    pub m_constant: Option<RenderedBound>,
    pub excluded_brieskorn_from: ExcludedFrom,
}

/// `4V·[200 + exp(11 + 15·e^(11/2)·V^(7/12)·(cosh(57V) − 1)^(8/3)·(1 + 3/δ)^(1/2))] + 6` at the literal inputs.
pub fn closed_form_instance(volume: &str, delta: &str) -> String {
    format!(
        "4·{volume}·[200 + exp(11 + 15·e^(11/2)·{volume}^(7/12)·(cosh(57·{volume}) - 1)^(8/3)·(1 + 3/{delta})^(1/2))] + 6"
    )
}

/// Builds the budget. Without `unchecked`, V and δ are still held to the
/// conventions while eps > 0.15 is accepted and flagged.
fn budget_for(lit: &BudgetLiteral, opts: &ReportOptions) -> Result<GeometryBudget> {
    let v = Bound::from_decimal_str(&lit.volume)?;
    let e = Bound::from_decimal_str(&lit.eps)?;
    let d = Bound::from_decimal_str(&lit.delta)?;
    let mut g = if opts.unchecked {
        GeometryBudget::unchecked(v, e, d)?
    } else if max_conventional_eps().certainly_lt(&e) {
        GeometryBudget::new(v.clone(), max_conventional_eps(), d.clone())?;
        GeometryBudget::unchecked(v, e, d)?
    } else {
        GeometryBudget::new(v, e, d)?
    };
    if let Some(dia) = &opts.diameter {
        g = g.with_diameter_override(Bound::from_decimal_str(dia)?)?;
    }
    Ok(g)
}

pub fn obstruction_report(
    name: Option<&str>,
    lit: &BudgetLiteral,
    w: &WeylConstants,
    opts: &ReportOptions,
) -> Result<ObstructionReport> {
    let g = budget_for(lit, opts)?;
    let f_bound = opts.f_bound.as_deref().map(Bound::from_decimal_str).transpose()?;
    if f_bound.as_ref().is_some_and(|f| !f.is_nonnegative()) {
        return Err(PipelineError::Config(super::ConfigError::InvalidFBound("must be ≥ 0".into())));
    }
    let n = n_constant_assembled(&g, w)?;
    let (closed, instance, le) = if closed_form_applies(&g) {
        let c = n_constant_closed_form(&g.volume, &g.delta)?;
        let le = n.n.certainly_le(&c);
        (Some(RenderedBound::new(&c)?), Some(closed_form_instance(&lit.volume, &lit.delta)), Some(le))
    } else {
        (None, None, None)
    };
    let m = match &f_bound {
        Some(f) => Some(RenderedBound::new(&m_constant(&g, w, Some(f))?)?),
        None => None,
    };
    Ok(ObstructionReport {
        name: name.map(str::to_string),
        budget: lit.clone(),
        profile: w.name.clone(),
        unchecked: g.unchecked,
        diameter_override: opts.diameter.clone(),
        spectral_flow_bound: RenderedBound::new(&n.flow.displayed)?,
        torsion_bound: RenderedBound::new(&n.torsion_bound)?,
        n_constant_assembled: RenderedBound::new(&n.n)?,
        n_constant_closed: closed,
        closed_form_instance: instance,
        assembled_le_closed: le,
        m_constant: m,
        excluded_brieskorn_from: first_excluded_index(&n.n)?,
    })
}

/// One census entry: a report, or the reason the record was rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CensusEntry {
    Ok { line: usize, report: ObstructionReport },
    Rejected { line: usize, name: Option<String>, guard: bool, message: String },
}

impl CensusEntry {
    pub fn line(&self) -> usize {
        match self {
            CensusEntry::Ok { line, .. } | CensusEntry::Rejected { line, .. } => *line,
        }
    }
}

fn report_record(r: &CensusRecord, w: &WeylConstants, opts: &ReportOptions) -> CensusEntry {
    match obstruction_report(Some(&r.name), &r.budget_literal(), w, opts) {
        Ok(report) => CensusEntry::Ok { line: r.line, report },
        Err(e) => CensusEntry::Rejected { line: r.line, name: Some(r.name.clone()), guard: e.is_guard(), message: e.to_string() },
    }
}

/// Reports every parsed record and lists parse failures alongside, all in line order.
pub fn census_report(parsed: &CensusParse, w: &WeylConstants, opts: &ReportOptions) -> Vec<CensusEntry> {
    #[cfg(feature = "parallel")]
    let mut out: Vec<CensusEntry> = {
        use rayon::prelude::*;
        parsed.records.par_iter().map(|r| report_record(r, w, opts)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mut out: Vec<CensusEntry> = parsed.records.iter().map(|r| report_record(r, w, opts)).collect();
    out.extend(parsed.errors.iter().map(|e| CensusEntry::Rejected {
        line: e.line,
        name: None,
        guard: true,
        message: e.message.clone(),
    }));
    out.sort_by_key(CensusEntry::line);
    out
}
