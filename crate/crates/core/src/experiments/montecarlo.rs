//! Monte Carlo comparison of detectors on random two-qubit states.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::export::{fmt_float, Exportable};
use super::map_chunks;
use crate::bases::{qubit_pauli_mubs, MubSet};
use crate::correlations::{full_report, CorrelationReport};
use crate::criteria::{
    condprob_criterion, lur_criterion, mi3_criterion, mi_criterion, pearson_criterion, pearson_product_criterion,
    ppt_oracle, witness_bank, witness_bank_verdict, Verdict,
};
use crate::error::{Error, Result};
use crate::qmat::BipartiteState;
use crate::states::{random_bipartite, StateEnsemble};

/// Detectors a Monte Carlo run can tally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Detector {
    /// Any of the W1..W5 witnesses.
    Witness,
    /// Σ|C| > 1 over σ_z, σ_x, σ_y.
    Pearson3,
    /// S_AB + S_CD outside [1, 3] over σ_z, σ_x.
    CondProb,
    /// Σ I > 1 over σ_z, σ_x, σ_y.
    MutualInfo3,
    /// |C_zz| + |C_xx| > 1.
    Pearson2,
    /// Local uncertainty relation with σ_x, σ_z.
    Lur,
    /// I_AB + I_CD > 1 over the two largest Pauli pairs.
    MutualInfo,
    /// |C_zz C_xx| > 1/4.
    PearsonProduct,
}

impl Detector {
    pub const ALL: [Detector; 8] = [
        Self::Witness,
        Self::Pearson3,
        Self::CondProb,
        Self::MutualInfo3,
        Self::Pearson2,
        Self::Lur,
        Self::MutualInfo,
        Self::PearsonProduct,
    ];

    /// Witnesses, 3-basis Pearson, conditional sum, 3-basis MI.
    pub const TABLE: [Detector; 4] = [Self::Witness, Self::Pearson3, Self::CondProb, Self::MutualInfo3];

    pub const LUR_COMPARISON: [Detector; 3] = [Self::Pearson3, Self::Pearson2, Self::Lur];

    pub fn name(self) -> &'static str {
        match self {
            Self::Witness => "witness",
            Self::Pearson3 => "pearson3",
            Self::CondProb => "cond_prob",
            Self::MutualInfo3 => "mutual_info3",
            Self::Pearson2 => "pearson2",
            Self::Lur => "lur",
            Self::MutualInfo => "mutual_info",
            Self::PearsonProduct => "pearson_product",
        }
    }

    /// `Ok(None)` marks an undefined statistic (zero variance or zero
    /// marginal), counted as not detected.
    fn evaluate(self, s: &BipartiteState, r: &CorrelationReport) -> Result<Option<Verdict>> {
        let v = match self {
            Self::Witness => Ok(witness_bank_verdict(&witness_bank(s)?)),
            Self::Pearson3 => pearson_criterion(r, 3),
            Self::Pearson2 => pearson_criterion(r, 2),
            Self::PearsonProduct => pearson_product_criterion(r),
            Self::CondProb => condprob_criterion(r, 2),
            Self::MutualInfo3 => mi3_criterion(r),
            Self::MutualInfo => mi_criterion(r, 2),
            Self::Lur => lur_criterion(s),
        };
        match v {
            Ok(v) => Ok(Some(v)),
            Err(Error::DegenerateObservable { .. } | Error::UndefinedConditional { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Detector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|d| d.name() == key)
            .ok_or_else(|| Error::Parse { line: 0, message: format!("unknown detector '{s}'") })
    }
}

/// Detection counts for one run.
///
/// `venn[mask]` counts oracle-entangled states detected by exactly the
/// detectors whose bits are set in `mask` (bit `k` is `detectors[k]`);
/// `venn[0]` holds the entangled states no detector sees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TallyMatrix {
    pub detectors: Vec<Detector>,
    pub n_samples: u64,
    pub n_entangled: u64,
    /// Per detector: oracle-entangled states detected.
    pub detected: Vec<u64>,
    /// Per detector: PPT states flagged. Nonzero is a soundness finding.
    pub false_positives: Vec<u64>,
    /// Per detector: states where the statistic is undefined.
    pub undefined: Vec<u64>,
    pub venn: Vec<u64>,
}

impl TallyMatrix {
    pub fn empty(detectors: &[Detector]) -> Self {
        let k = detectors.len();
        Self {
            detectors: detectors.to_vec(),
            n_samples: 0,
            n_entangled: 0,
            detected: vec![0; k],
            false_positives: vec![0; k],
            undefined: vec![0; k],
            venn: vec![0; 1 << k],
        }
    }

    /// Adds `other` in place; both must tally the same detectors.
    pub fn merge(&mut self, other: &TallyMatrix) -> Result<()> {
        if self.detectors != other.detectors {
            return Err(Error::DimensionMismatch { expected: self.detectors.len(), found: other.detectors.len() });
        }
        self.n_samples += other.n_samples;
        self.n_entangled += other.n_entangled;
        for (a, b) in [
            (&mut self.detected, &other.detected),
            (&mut self.false_positives, &other.false_positives),
            (&mut self.undefined, &other.undefined),
            (&mut self.venn, &other.venn),
        ] {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        Ok(())
    }

    fn index_of(&self, d: Detector) -> Result<usize> {
        self.detectors
            .iter()
            .position(|&x| x == d)
            .ok_or_else(|| Error::Parse { line: 0, message: format!("detector '{d}' not in tally") })
    }

    /// Bitmask of `subset` in this tally's detector order.
    pub fn mask(&self, subset: &[Detector]) -> Result<usize> {
        subset.iter().try_fold(0, |m, &d| Ok(m | 1 << self.index_of(d)?))
    }

    /// Marginalizes the Venn cells onto `subset`, in the given order.
    pub fn project(&self, subset: &[Detector]) -> Result<TallyMatrix> {
        let idx = subset.iter().map(|&d| self.index_of(d)).collect::<Result<Vec<_>>>()?;
        let mut out = TallyMatrix::empty(subset);
        out.n_samples = self.n_samples;
        out.n_entangled = self.n_entangled;
        for (j, &i) in idx.iter().enumerate() {
            out.detected[j] = self.detected[i];
            out.false_positives[j] = self.false_positives[i];
            out.undefined[j] = self.undefined[i];
        }
        for (mask, &count) in self.venn.iter().enumerate() {
            let projected = idx.iter().enumerate().fold(0, |m, (j, &i)| m | (((mask >> i) & 1) << j));
            out.venn[projected] += count;
        }
        Ok(out)
    }

    pub fn entangled_fraction(&self) -> f64 {
        ratio(self.n_entangled, self.n_samples)
    }

    /// Fraction of oracle-entangled states seen by `d`.
    pub fn detection_fraction(&self, d: Detector) -> Result<f64> {
        Ok(ratio(self.detected[self.index_of(d)?], self.n_entangled))
    }

    /// Entangled states seen by at least one detector.
    pub fn union_detected(&self) -> u64 {
        self.venn[1..].iter().sum()
    }

    /// Fraction of oracle-entangled states seen by at least one detector.
    pub fn combined_fraction(&self) -> f64 {
        ratio(self.union_detected(), self.n_entangled)
    }

    /// Count of states seen by exactly the detectors in `subset`.
    pub fn cell(&self, subset: &[Detector]) -> Result<u64> {
        Ok(self.venn[self.mask(subset)?])
    }

    /// Exact-subset cell as a fraction of the union of detections.
    pub fn cell_fraction(&self, subset: &[Detector]) -> Result<f64> {
        Ok(ratio(self.cell(subset)?, self.union_detected()))
    }

    pub fn total_false_positives(&self) -> u64 {
        self.false_positives.iter().sum()
    }

    fn cell_name(&self, mask: usize) -> String {
        if mask == 0 {
            return "none".into();
        }
        let names: Vec<_> = (0..self.detectors.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| self.detectors[k].name())
            .collect();
        names.join("+")
    }

    pub fn summary(&self) -> TallySummary {
        let per = |v: &Vec<u64>| -> BTreeMap<String, u64> {
            self.detectors.iter().zip(v).map(|(d, &c)| (d.name().to_string(), c)).collect()
        };
        TallySummary {
            detectors: self.detectors.iter().map(|d| d.name().to_string()).collect(),
            n_samples: self.n_samples,
            n_entangled: self.n_entangled,
            entangled_fraction: self.entangled_fraction(),
            detected: per(&self.detected),
            detection_fraction: self
                .detectors
                .iter()
                .zip(&self.detected)
                .map(|(d, &c)| (d.name().to_string(), ratio(c, self.n_entangled)))
                .collect(),
            false_positives: per(&self.false_positives),
            undefined: per(&self.undefined),
            union_detected: self.union_detected(),
            combined_fraction: self.combined_fraction(),
            venn: self.venn.iter().enumerate().map(|(m, &c)| (m.to_string(), c)).collect(),
            venn_labels: (0..self.venn.len()).map(|m| (m.to_string(), self.cell_name(m))).collect(),
        }
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Serialized form of a tally. Venn cells are keyed by the decimal bitmask.
#[derive(Clone, Debug, Serialize)]
pub struct TallySummary {
    pub detectors: Vec<String>,
    pub n_samples: u64,
    pub n_entangled: u64,
    pub entangled_fraction: f64,
    pub detected: BTreeMap<String, u64>,
    pub detection_fraction: BTreeMap<String, f64>,
    pub false_positives: BTreeMap<String, u64>,
    pub undefined: BTreeMap<String, u64>,
    pub union_detected: u64,
    pub combined_fraction: f64,
    pub venn: BTreeMap<String, u64>,
    pub venn_labels: BTreeMap<String, String>,
}

impl Exportable for TallyMatrix {
    fn csv_header(&self) -> Vec<String> {
        ["quantity", "count", "fraction"].map(String::from).to_vec()
    }

    fn csv_records(&self) -> Vec<Vec<String>> {
        let row = |q: String, c: u64, f: f64| vec![q, c.to_string(), fmt_float(f)];
        let mut out = vec![
            row("samples".into(), self.n_samples, 1.0),
            row("entangled".into(), self.n_entangled, self.entangled_fraction()),
            row("detected_any".into(), self.union_detected(), self.combined_fraction()),
        ];
        for (k, d) in self.detectors.iter().enumerate() {
            out.push(row(format!("detected:{d}"), self.detected[k], ratio(self.detected[k], self.n_entangled)));
        }
        for (k, d) in self.detectors.iter().enumerate() {
            let fp = self.false_positives[k];
            out.push(row(format!("false_positive:{d}"), fp, ratio(fp, self.n_samples - self.n_entangled)));
        }
        for (k, d) in self.detectors.iter().enumerate() {
            out.push(row(format!("undefined:{d}"), self.undefined[k], ratio(self.undefined[k], self.n_samples)));
        }
        for (m, &c) in self.venn.iter().enumerate().skip(1) {
            out.push(row(format!("venn:{m}:{}", self.cell_name(m)), c, ratio(c, self.union_detected())));
        }
        out
    }
}

impl Serialize for TallyMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.summary().serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MontecarloSpec {
    pub n: usize,
    pub detectors: Vec<Detector>,
    pub seed: u64,
    pub ensemble: StateEnsemble,
    /// Worker threads; `None` uses every core. Never affects results.
    pub threads: Option<usize>,
}

impl MontecarloSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        Self { n, detectors: Detector::TABLE.to_vec(), seed, ensemble: StateEnsemble::default(), threads: None }
    }
}

/// Tallies one state into `t`.
pub fn tally_state(t: &mut TallyMatrix, s: &BipartiteState, mubs: &MubSet) -> Result<()> {
    let entangled = ppt_oracle(s).detected_entangled;
    let report = full_report(s, mubs)?;
    t.n_samples += 1;
    t.n_entangled += entangled as u64;
    let mut mask = 0;
    for k in 0..t.detectors.len() {
        match t.detectors[k].evaluate(s, &report)? {
            None => t.undefined[k] += 1,
            Some(v) if v.detected_entangled => {
                if entangled {
                    t.detected[k] += 1;
                    mask |= 1 << k;
                } else {
                    t.false_positives[k] += 1;
                }
            }
            Some(_) => {}
        }
    }
    if entangled {
        t.venn[mask] += 1;
    }
    Ok(())
}

pub fn run_montecarlo(spec: &MontecarloSpec) -> Result<TallyMatrix> {
    let mut seen = spec.detectors.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != spec.detectors.len() {
        return Err(Error::Parse { line: 0, message: "duplicate detector".into() });
    }
    let mubs = qubit_pauli_mubs();
    let chunks = map_chunks(spec.n, spec.seed, spec.threads, |rng, count| -> Result<TallyMatrix> {
        let mut t = TallyMatrix::empty(&spec.detectors);
        for _ in 0..count {
            let s = random_bipartite(spec.ensemble, 2, rng)?;
            tally_state(&mut t, &s, &mubs)?;
        }
        Ok(t)
    })?;
    let mut total = TallyMatrix::empty(&spec.detectors);
    for c in chunks {
        total.merge(&c?)?;
    }
    Ok(total)
}

/// Pearson over three and two bases against the local uncertainty relation.
pub fn run_lur_comparison(n: usize, seed: u64, ensemble: StateEnsemble, threads: Option<usize>) -> Result<TallyMatrix> {
    run_montecarlo(&MontecarloSpec { n, detectors: Detector::LUR_COMPARISON.to_vec(), seed, ensemble, threads })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_marginalizes() {
        let mut t = TallyMatrix::empty(&[Detector::Witness, Detector::Pearson3, Detector::Lur]);
        t.n_entangled = 10;
        t.venn = vec![1, 2, 3, 4, 0, 0, 0, 0];
        t.venn[7] = 1;
        t.venn[5] = 2;
        let p = t.project(&[Detector::Lur, Detector::Witness]).unwrap();
        // bit 0 = lur, bit 1 = witness: none 1+3, lur only 0, witness only 2+4, both 2+1
        assert_eq!(p.venn, vec![4, 0, 6, 3]);
        assert_eq!(p.union_detected(), 9);
        assert!(t.project(&[Detector::CondProb]).is_err());
    }

    #[test]
    fn merge_requires_same_detectors() {
        let mut a = TallyMatrix::empty(&[Detector::Witness]);
        let b = TallyMatrix::empty(&[Detector::Lur]);
        assert!(a.merge(&b).is_err());
    }

    #[test]
    fn venn_cells_sum_to_union() {
        let mut spec = MontecarloSpec::new(3000, 5);
        spec.detectors = Detector::ALL.to_vec();
        let t = run_montecarlo(&spec).unwrap();
        assert_eq!(t.n_samples, 3000);
        let union: u64 = t.venn[1..].iter().sum();
        assert_eq!(union, t.union_detected());
        assert_eq!(t.venn.iter().sum::<u64>(), t.n_entangled);
        for k in 0..t.detectors.len() {
            let by_cells: u64 = (0..t.venn.len()).filter(|m| m >> k & 1 == 1).map(|m| t.venn[m]).sum();
            assert_eq!(by_cells, t.detected[k]);
        }
    }

    #[test]
    fn empty_run() {
        let t = run_lur_comparison(0, 1, StateEnsemble::default(), None).unwrap();
        assert_eq!(t, TallyMatrix::empty(&Detector::LUR_COMPARISON));
        assert_eq!(t.combined_fraction(), 0.0);
    }

    #[test]
    fn detector_names_round_trip() {
        for d in Detector::ALL {
            assert_eq!(d.name().parse::<Detector>().unwrap(), d);
        }
    }
}
