//! The full ladder of bounds for one model and weight.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bounds::{
    bound_beta, bound_rld, bound_sld, max_beta_closed_form, max_beta_scan, upper_bound_2sld,
    MaxBeta,
};
use crate::error::Result;
use crate::holevo::{
    build_extension, dinv_check, holevo_min_f, holevo_sdp, optimal_observables, DinvReport,
};
use crate::matcore::{HermitianMatrix, WeightMatrix};
use crate::model::ModelPoint;

/// Slack allowed in [`BoundReport::chain_violation`].
pub const CHAIN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaValue {
    pub beta: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub label: String,
    pub dim: usize,
    pub d: usize,
    pub c_sld: f64,
    pub c_rld: f64,
    pub c_beta: Vec<BetaValue>,
    pub beta_star: f64,
    pub c_beta_star: f64,
    pub c_holevo: Option<f64>,
    pub c_holevo_sdp: Option<f64>,
    pub c_upper: f64,
    pub extension_dim: usize,
    pub dinv: DinvReport,
    pub method_tags: BTreeMap<&'static str, &'static str>,
    #[serde(skip)]
    pub observables: Option<Vec<HermitianMatrix>>,
}

/// Which optional pieces [`bound_report`] computes.
#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    pub betas: Vec<f64>,
    pub skip_holevo: bool,
    pub skip_sdp: bool,
}

pub fn bound_report(g: &WeightMatrix, m: &ModelPoint, opts: &ReportOptions) -> Result<BoundReport> {
    let mut tags = BTreeMap::new();
    let c_sld = bound_sld(g, m)?;
    let c_rld = bound_rld(g, m)?;
    let c_upper = upper_bound_2sld(g, m)?;
    tags.insert("c_sld", "fisher-inverse");
    tags.insert("c_rld", "fisher-inverse");
    tags.insert("c_upper", "twice-sld");
    let c_beta = opts
        .betas
        .iter()
        .map(|&beta| {
            Ok(BetaValue {
                beta,
                value: bound_beta(g, m, beta)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if !c_beta.is_empty() {
        tags.insert("c_beta", "fisher-inverse");
    }

    let ext = build_extension(m)?;
    let MaxBeta { value, beta_star } = match ext.rank_one() {
        Some(ro) => {
            tags.insert("c_beta_star", "closed-form");
            max_beta_closed_form(g, &ro.a, &ro.b)?
        }
        None => {
            tags.insert("c_beta_star", "scan");
            max_beta_scan(g, m)?
        }
    };

    let mut observables = None;
    let c_holevo = if opts.skip_holevo {
        None
    } else {
        let sol = holevo_min_f(g, &ext)?;
        tags.insert("c_holevo", "min-f");
        observables = Some(match optimal_observables(m, g, &ext) {
            Ok(obs) => {
                tags.insert("observables", "explicit");
                obs
            }
            Err(_) => {
                tags.insert("observables", "min-f");
                sol.observables.clone()
            }
        });
        Some(sol.value)
    };
    let c_holevo_sdp = if opts.skip_holevo || opts.skip_sdp {
        None
    } else {
        tags.insert("c_holevo_sdp", "barrier-sdp");
        Some(holevo_sdp(g, &ext)?.value)
    };

    Ok(BoundReport {
        label: m.label().to_string(),
        dim: m.dim(),
        d: m.d(),
        c_sld,
        c_rld,
        c_beta,
        beta_star,
        c_beta_star: value,
        c_holevo,
        c_holevo_sdp,
        c_upper,
        extension_dim: ext.dim(),
        dinv: dinv_check(m)?,
        method_tags: tags,
        observables,
    })
}

impl BoundReport {
    /// Largest violation of `c_upper ≥ c_holevo ≥ c_beta_star ≥ max(c_sld, c_rld)`,
    /// zero when the chain holds within [`CHAIN_TOL`].
    pub fn chain_violation(&self) -> f64 {
        let scale = self.c_upper.abs().max(1.0);
        let floor = self.c_sld.max(self.c_rld);
        let mut worst: f64 = floor - self.c_beta_star;
        if let Some(h) = self.c_holevo {
            worst = worst.max(self.c_beta_star - h).max(h - self.c_upper);
        } else {
            worst = worst.max(self.c_beta_star - self.c_upper);
        }
        if worst > CHAIN_TOL * scale {
            worst
        } else {
            0.0
        }
    }
}
