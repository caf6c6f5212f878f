//! CSV and JSON emitters.
//!
//! CSV uses `.` decimals, shortest round-trip float formatting, LF line
//! endings, and always carries the header row; absent values (infeasible
//! schemes) are empty cells. JSON mirrors the CSV content with the same
//! field names, absent values as `null`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::run::{AnalyzeRow, SweepRow, VerifyRow};

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn analyze_csv(rows: &[AnalyzeRow]) -> String {
    let mut out = String::from(
        "scheme,p1_exchange_w,p2_exchange_w,p1_cellular_w,p2_cellular_w,total_w,eta_bpj,feasible\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.scheme,
            opt(r.p1_exchange_w),
            opt(r.p2_exchange_w),
            opt(r.p1_cellular_w),
            opt(r.p2_cellular_w),
            opt(r.total_w),
            opt(r.eta_bpj),
            r.feasible
        );
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "swept_m,eta_traditional_bpj,eta_intra_bpj,eta_inter_bpj,\
         feasible_traditional,feasible_intra,feasible_inter\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.swept_m,
            opt(r.eta_traditional_bpj),
            opt(r.eta_intra_bpj),
            opt(r.eta_inter_bpj),
            r.feasible_traditional,
            r.feasible_intra,
            r.feasible_inter
        );
    }
    out
}

pub fn verify_csv(rows: &[VerifyRow]) -> String {
    let mut out = String::from("scheme,user,p_target,p_mc,ci95,power_analytic_w,power_mc_w,pass\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.scheme,
            r.user,
            r.p_target,
            opt(r.p_mc),
            opt(r.ci95),
            opt(r.power_analytic_w),
            opt(r.power_mc_w),
            r.pass
        );
    }
    out
}

pub fn to_json<T: Serialize>(rows: &[T]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}
