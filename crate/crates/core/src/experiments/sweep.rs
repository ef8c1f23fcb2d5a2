//! Correlation measures along one-parameter state families.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::export::{fmt_float, fmt_opt, Exportable};
use crate::bases::qubit_pauli_mubs;
use crate::correlations::full_report;
use crate::criteria::ppt_oracle;
use crate::error::{Error, Result};
use crate::states::StateFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Measure {
    MutualInformation,
    Pearson,
    ConditionalSum,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Self::MutualInformation, Self::Pearson, Self::ConditionalSum];

    pub fn name(self) -> &'static str {
        match self {
            Self::MutualInformation => "mutual_info",
            Self::Pearson => "pearson",
            Self::ConditionalSum => "cond_prob",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "i" | "mi" | "mutual_info" | "mutual_information" => Ok(Self::MutualInformation),
            "c" | "pearson" => Ok(Self::Pearson),
            "s" | "cond_prob" | "condprob" | "conditional" => Ok(Self::ConditionalSum),
            _ => Err(Error::Parse { line: 0, message: format!("unknown measure '{s}'") }),
        }
    }
}

/// Parses `start:stop:step` into an inclusive grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |message: String| Error::Parse { line: 0, message };
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(bad(format!("grid '{spec}' is not start:stop:step")));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(format!("grid value '{t}' is not a number")));
    let (a, b, step) = (num(a)?, num(b)?, num(step)?);
    if !(step > 0.0) || !a.is_finite() || !b.is_finite() || b < a {
        return Err(bad(format!("grid '{spec}' needs finite start ≤ stop and step > 0")));
    }
    let steps = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=steps)
        .map(|k| {
            let p = a + k as f64 * step;
            if (p - b).abs() < 1e-9 * step { b } else { p }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub family: StateFamily,
    pub p_grid: Vec<f64>,
    pub measures: Vec<Measure>,
    /// 2 (σ_z, σ_x) or 3 (σ_z, σ_x, σ_y).
    pub mub_count: usize,
}

impl SweepSpec {
    pub fn new(family: StateFamily, p_grid: Vec<f64>, measures: Vec<Measure>, mub_count: usize) -> Result<Self> {
        if !(2..=3).contains(&mub_count) {
            return Err(Error::OutOfRange { name: "mub_count", value: mub_count as f64, min: 2.0, max: 3.0 });
        }
        if let Some(&p) = p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::OutOfRange { name: "p", value: p, min: 0.0, max: 1.0 });
        }
        Ok(Self { family, p_grid, measures, mub_count })
    }
}

/// One grid point. Unrequested or undefined measures are `None`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    /// Σ I over the MUBs.
    pub i_sum: Option<f64>,
    /// Σ|C| over the MUBs.
    pub c_sum: Option<f64>,
    /// S_AB + S_CD over the first two MUBs.
    pub s_sum: Option<f64>,
    /// log₂ 2 for two bases; the three-basis bound is also 1.
    pub mi_threshold: f64,
    pub c_threshold: f64,
    pub s_lower: f64,
    pub s_upper: f64,
    pub ppt_min_eigenvalue: f64,
    pub ppt_entangled: bool,
}

const D: f64 = 2.0;

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mubs = qubit_pauli_mubs().truncated(spec.mub_count);
    let n = spec.mub_count;
    let wants = |m: Measure| spec.measures.contains(&m);
    spec.p_grid
        .iter()
        .map(|&p| {
            let s = spec.family.state(p)?;
            let report = full_report(&s, &mubs)?;
            let ppt = ppt_oracle(&s);
            Ok(SweepRow {
                p,
                i_sum: wants(Measure::MutualInformation).then(|| report.mi_sum(n)),
                c_sum: if wants(Measure::Pearson) { report.pearson_sum(n) } else { None },
                s_sum: if wants(Measure::ConditionalSum) { report.conditional_sum_total(2) } else { None },
                mi_threshold: 1.0,
                c_threshold: 1.0,
                s_lower: 1.0,
                s_upper: D + 1.0,
                ppt_min_eigenvalue: ppt.value,
                ppt_entangled: ppt.detected_entangled,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct SweepTable(pub Vec<SweepRow>);

impl Exportable for SweepTable {
    fn csv_header(&self) -> Vec<String> {
        [
            "p",
            "I_sum",
            "C_sum",
            "S_sum",
            "mi_threshold",
            "c_threshold",
            "s_lower",
            "s_upper",
            "ppt_min_eigenvalue",
            "ppt_entangled",
        ]
        .map(String::from)
        .to_vec()
    }

    fn csv_records(&self) -> Vec<Vec<String>> {
        self.0
            .iter()
            .map(|r| {
                vec![
                    fmt_float(r.p),
                    fmt_opt(r.i_sum),
                    fmt_opt(r.c_sum),
                    fmt_opt(r.s_sum),
                    fmt_float(r.mi_threshold),
                    fmt_float(r.c_threshold),
                    fmt_float(r.s_lower),
                    fmt_float(r.s_upper),
                    fmt_float(r.ppt_min_eigenvalue),
                    r.ppt_entangled.to_string(),
                ]
            })
            .collect()
    }
}
