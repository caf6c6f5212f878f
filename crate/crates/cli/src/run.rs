//! The three operations behind the subcommands: single-point analysis,
//! distance sweeps, and closed-form vs Monte Carlo verification.

use anyhow::Result;
use serde::Serialize;

use coopnet_core::closed_form::{
    inter_efficiency, intra_powers_and_efficiency, traditional_efficiency, DecodePrior,
    EfficiencyReport, IntraOptions, Scheme,
};
use coopnet_core::monte_carlo::{
    simulate_inter, simulate_intra, simulate_traditional, OutageEstimate, TrialPlan,
};
use coopnet_core::{Error, PowerAllocation64};

use crate::config::ScenarioConfig;

/// One scheme's closed-form powers and efficiency, or its infeasibility.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeRow {
    pub scheme: String,
    pub p1_exchange_w: Option<f64>,
    pub p2_exchange_w: Option<f64>,
    pub p1_cellular_w: Option<f64>,
    pub p2_cellular_w: Option<f64>,
    pub total_w: Option<f64>,
    pub eta_bpj: Option<f64>,
    pub feasible: bool,
}

fn analyze_row(
    scheme: Scheme,
    result: std::result::Result<EfficiencyReport<f64>, Error>,
) -> AnalyzeRow {
    match result {
        Ok(report) => AnalyzeRow {
            scheme: scheme.to_string(),
            p1_exchange_w: Some(report.allocation.p1_exchange),
            p2_exchange_w: Some(report.allocation.p2_exchange),
            p1_cellular_w: Some(report.allocation.p1_cellular),
            p2_cellular_w: Some(report.allocation.p2_cellular),
            total_w: Some(report.allocation.total),
            eta_bpj: Some(report.eta),
            feasible: true,
        },
        Err(_) => AnalyzeRow {
            scheme: scheme.to_string(),
            p1_exchange_w: None,
            p2_exchange_w: None,
            p1_cellular_w: None,
            p2_cellular_w: None,
            total_w: None,
            eta_bpj: None,
            feasible: false,
        },
    }
}

/// Closed-form reports for all three schemes. An infeasible scheme yields a
/// flagged row; the others are still computed.
pub fn run_analyze(cfg: &ScenarioConfig) -> Vec<AnalyzeRow> {
    let opts = IntraOptions {
        exchange_double_rate: cfg.intra_exchange_double_rate,
    };
    vec![
        analyze_row(
            Scheme::Traditional,
            traditional_efficiency(&cfg.radio, &cfg.geo, &cfg.tgt),
        ),
        analyze_row(
            Scheme::Intra,
            intra_powers_and_efficiency(&cfg.radio, &cfg.geo, &cfg.tgt, opts),
        ),
        analyze_row(
            Scheme::Inter,
            inter_efficiency(&cfg.radio, &cfg.geo, &cfg.tgt),
        ),
    ]
}

/// Which geometry coordinate a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// `d_1b = d_2b` jointly.
    CellDistance,
    /// `d_12 = d_21` jointly.
    InterUserDistance,
}

/// Grid specification for a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub log_scale: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        anyhow::ensure!(
            self.start.is_finite() && self.start > 0.0,
            "sweep start must be a positive distance, got {}",
            self.start
        );
        anyhow::ensure!(
            self.stop.is_finite() && self.start < self.stop,
            "sweep start must be below stop, got {}..{}",
            self.start,
            self.stop
        );
        anyhow::ensure!(self.points >= 2, "sweep needs at least 2 points");
        Ok(())
    }

    fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                if self.log_scale {
                    (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + f * (self.stop - self.start)
                }
            })
            .collect()
    }
}

/// One sweep point. Infeasible schemes carry a cleared flag and no number.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub swept_m: f64,
    pub eta_traditional_bpj: Option<f64>,
    pub eta_intra_bpj: Option<f64>,
    pub eta_inter_bpj: Option<f64>,
    pub feasible_traditional: bool,
    pub feasible_intra: bool,
    pub feasible_inter: bool,
}

/// Evaluates the three schemes over the grid. Each row is a pure function of
/// its grid point.
pub fn run_sweep(cfg: &ScenarioConfig, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec
        .grid()
        .into_iter()
        .map(|distance| {
            let mut point = *cfg;
            match spec.variable {
                SweepVariable::CellDistance => {
                    point.geo.d_1b = distance;
                    point.geo.d_2b = distance;
                }
                SweepVariable::InterUserDistance => {
                    point.geo.d_12 = distance;
                    point.geo.d_21 = distance;
                }
            }
            let rows = run_analyze(&point);
            SweepRow {
                swept_m: distance,
                eta_traditional_bpj: rows[0].eta_bpj,
                eta_intra_bpj: rows[1].eta_bpj,
                eta_inter_bpj: rows[2].eta_bpj,
                feasible_traditional: rows[0].feasible,
                feasible_intra: rows[1].feasible,
                feasible_inter: rows[2].feasible,
            }
        })
        .collect())
}

/// One scheme/user line of the verification table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub scheme: String,
    pub user: String,
    pub p_target: f64,
    pub p_mc: Option<f64>,
    pub ci95: Option<f64>,
    pub power_analytic_w: Option<f64>,
    pub power_mc_w: Option<f64>,
    pub pass: String,
}

/// The verification table plus the aggregate outcome for the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub rows: Vec<VerifyRow>,
    /// True when no row failed (skipped and inconclusive rows do not fail).
    pub all_pass: bool,
}

/// Minimum expected failure events for a conclusive Monte Carlo row.
const MIN_EXPECTED_EVENTS: f64 = 10.0;

fn skipped_rows(scheme: Scheme, p_target: f64) -> Vec<VerifyRow> {
    ["u1", "u2"]
        .into_iter()
        .map(|user| VerifyRow {
            scheme: scheme.to_string(),
            user: user.into(),
            p_target,
            p_mc: None,
            ci95: None,
            power_analytic_w: None,
            power_mc_w: None,
            pass: "skipped".into(),
        })
        .collect()
}

fn estimate_rows(
    scheme: Scheme,
    cfg: &ScenarioConfig,
    alloc: &PowerAllocation64,
    est: &OutageEstimate<f64>,
    plan: &TrialPlan,
) -> Vec<VerifyRow> {
    let p_target = cfg.tgt.p_out;
    let conclusive = plan.n_trials as f64 * p_target >= MIN_EXPECTED_EVENTS;

    // the inter scheme additionally checks mean consumed power at 3 sigma
    let power_ok = if scheme == Scheme::Inter {
        let prior = DecodePrior::from_target(p_target).expect("validated target");
        let joint = alloc.p1_cellular + alloc.p2_cellular;
        let sigma = joint * (prior.p_theta1 * prior.p_theta2 / plan.n_trials as f64).sqrt();
        (est.mean_power - alloc.total).abs() <= 3.0 * sigma
    } else {
        true
    };

    [
        ("u1", est.p_hat_u1(), est.ci95_halfwidth_u1()),
        ("u2", est.p_hat_u2(), est.ci95_halfwidth_u2()),
    ]
    .into_iter()
    .map(|(user, p_mc, ci)| {
        let status = if !conclusive {
            "inconclusive"
        } else if (p_mc - p_target).abs() <= 3.0 * ci && power_ok {
            "pass"
        } else {
            "fail"
        };
        VerifyRow {
            scheme: scheme.to_string(),
            user: user.into(),
            p_target,
            p_mc: Some(p_mc),
            ci95: Some(ci),
            power_analytic_w: Some(alloc.total),
            power_mc_w: Some(est.mean_power),
            pass: status.into(),
        }
    })
    .collect()
}

/// Runs the Monte Carlo oracle against explicitly supplied allocations.
/// `None` marks a scheme as infeasible; its rows come out skipped.
pub fn verify_with_allocations(
    cfg: &ScenarioConfig,
    traditional: Option<PowerAllocation64>,
    intra: Option<PowerAllocation64>,
    inter: Option<PowerAllocation64>,
    plan: &TrialPlan,
) -> Result<VerifyOutcome> {
    let opts = IntraOptions {
        exchange_double_rate: cfg.intra_exchange_double_rate,
    };
    let mut rows = Vec::with_capacity(6);

    match traditional {
        Some(alloc) => {
            let est = simulate_traditional(&cfg.radio, &cfg.geo, cfg.tgt.rate, &alloc, plan)?;
            rows.extend(estimate_rows(Scheme::Traditional, cfg, &alloc, &est, plan));
        }
        None => rows.extend(skipped_rows(Scheme::Traditional, cfg.tgt.p_out)),
    }
    match intra {
        Some(alloc) => {
            let est = simulate_intra(&cfg.radio, &cfg.geo, cfg.tgt.rate, &alloc, opts, plan)?;
            rows.extend(estimate_rows(Scheme::Intra, cfg, &alloc, &est, plan));
        }
        None => rows.extend(skipped_rows(Scheme::Intra, cfg.tgt.p_out)),
    }
    match inter {
        Some(alloc) => {
            let est = simulate_inter(&cfg.radio, &cfg.geo, cfg.tgt.rate, &alloc, plan)?;
            rows.extend(estimate_rows(Scheme::Inter, cfg, &alloc, &est, plan));
        }
        None => rows.extend(skipped_rows(Scheme::Inter, cfg.tgt.p_out)),
    }

    let all_pass = rows.iter().all(|r| r.pass != "fail");
    Ok(VerifyOutcome { rows, all_pass })
}

/// Computes each scheme's closed-form allocation and verifies it against the
/// Monte Carlo oracle.
pub fn run_verify(cfg: &ScenarioConfig, plan: &TrialPlan) -> Result<VerifyOutcome> {
    let opts = IntraOptions {
        exchange_double_rate: cfg.intra_exchange_double_rate,
    };
    let traditional = traditional_efficiency(&cfg.radio, &cfg.geo, &cfg.tgt)
        .ok()
        .map(|r| r.allocation);
    let intra = intra_powers_and_efficiency(&cfg.radio, &cfg.geo, &cfg.tgt, opts)
        .ok()
        .map(|r| r.allocation);
    let inter = inter_efficiency(&cfg.radio, &cfg.geo, &cfg.tgt)
        .ok()
        .map(|r| r.allocation);
    verify_with_allocations(cfg, traditional, intra, inter, plan)
}
