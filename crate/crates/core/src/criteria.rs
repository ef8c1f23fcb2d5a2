//! Entanglement detectors and the partial-transpose oracle.
//!
//! Every detector returns a [`Verdict`]. Margins are signed distances past
//! the threshold; margins inside the slack band are reported as exactly zero
//! so that `detected_entangled` always equals `margin > 0`.

use std::fmt;

use serde::Serialize;

use crate::bases::{pauli_matrices, MubPair, MubSet};
use crate::correlations::{
    conditional, full_report, joint_distribution, report_for_pairs, CorrelationReport, JointDistribution,
};
use crate::error::{Error, Result};
use crate::qmat::{
    hermitian_eigenvalues, partial_trace, partial_transpose, tensor_product, BipartiteState, ComplexMatrix,
    Subsystem,
};

/// Slack on every strict inequality.
pub const SLACK: f64 = 1e-9;
/// Partial-transpose eigenvalues below −PPT_TOL count as negative.
pub const PPT_TOL: f64 = 1e-10;
/// Tolerance for "I sum reaches 2 log₂ d".
pub const MAX_ENTANGLEMENT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum WitnessLabel {
    W1,
    W2,
    W3,
    W4,
    W5,
}

impl WitnessLabel {
    pub const ALL: [WitnessLabel; 5] = [Self::W1, Self::W2, Self::W3, Self::W4, Self::W5];

    /// Signs of σ_xσ_x, σ_yσ_y, σ_zσ_z in (I ± XX ± YY ± ZZ)/4.
    pub fn signs(self) -> [f64; 3] {
        match self {
            Self::W1 => [1.0, 1.0, 1.0],
            Self::W2 => [-1.0, -1.0, 1.0],
            Self::W3 => [1.0, -1.0, 1.0],
            Self::W4 => [1.0, -1.0, -1.0],
            Self::W5 => [-1.0, -1.0, -1.0],
        }
    }
}

impl fmt::Display for WitnessLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Criterion {
    Ppt,
    /// I_AB + I_CD > log₂ d over the two largest pairs.
    MutualInformation,
    /// Three-basis qubit form, Σ I > 1.
    MutualInformation3,
    /// Σ|C| > 1 over the first `n` bases.
    PearsonSum(usize),
    /// |C_AB C_CD| > 1/4.
    PearsonProduct,
    /// S_AB + S_CD outside [1, d+1].
    ConditionalSum,
    Witness(WitnessLabel),
    /// Any of W1..W5.
    WitnessBank,
    Lur,
}

impl Criterion {
    pub fn name(&self) -> String {
        match self {
            Self::Ppt => "ppt".into(),
            Self::MutualInformation => "mutual_info".into(),
            Self::MutualInformation3 => "mutual_info3".into(),
            Self::PearsonSum(n) => format!("pearson{n}"),
            Self::PearsonProduct => "pearson_product".into(),
            Self::ConditionalSum => "cond_prob".into(),
            Self::Witness(w) => w.to_string(),
            Self::WitnessBank => "witness".into(),
            Self::Lur => "lur".into(),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub detector: Criterion,
    pub detected_entangled: bool,
    /// Signed distance past the threshold, positive iff detected.
    pub margin: f64,
    pub threshold: f64,
    /// The evaluated statistic.
    pub value: f64,
}

impl Verdict {
    fn from_margin(detector: Criterion, value: f64, threshold: f64, margin: f64, slack: f64) -> Self {
        let margin = if margin.abs() <= slack { 0.0 } else { margin };
        Self { detector, detected_entangled: margin > 0.0, margin, threshold, value }
    }

    /// Detected iff value > threshold + slack.
    pub fn above(detector: Criterion, value: f64, threshold: f64) -> Self {
        Self::from_margin(detector, value, threshold, value - threshold, SLACK)
    }

    /// Detected iff value < threshold − slack.
    pub fn below(detector: Criterion, value: f64, threshold: f64) -> Self {
        Self::from_margin(detector, value, threshold, threshold - value, SLACK)
    }
}

/// NPT test on the partial transpose over B. Necessary and sufficient for
/// 2×2 and 2×3; for larger dimensions only "detected ⇒ entangled" holds.
pub fn ppt_oracle(s: &BipartiteState) -> Verdict {
    let pt = partial_transpose(s, Subsystem::B);
    let min = hermitian_eigenvalues(&pt).expect("partial transpose of a density matrix is Hermitian")[0];
    Verdict::from_margin(Criterion::Ppt, min, 0.0, -min, PPT_TOL)
}

fn require_pairs(report: &CorrelationReport, needed: usize) -> Result<()> {
    if report.pairs.len() < needed {
        return Err(Error::NotEnoughPairs { needed, found: report.pairs.len() });
    }
    Ok(())
}

/// I_AB + I_CD > log₂ d with the largest and second largest I when the
/// report holds more than two pairs.
pub fn mi_criterion(report: &CorrelationReport, d: usize) -> Result<Verdict> {
    require_pairs(report, 2)?;
    let mut mi = report.mutual_informations();
    mi.sort_by(|a, b| b.total_cmp(a));
    Ok(Verdict::above(Criterion::MutualInformation, mi[0] + mi[1], (d as f64).log2()))
}

/// Σ I over three qubit MUBs > 1.
pub fn mi3_criterion(report: &CorrelationReport) -> Result<Verdict> {
    if report.dim != 2 {
        return Err(Error::UnsupportedDimension { dim: report.dim, reason: "three-basis form is for qubits" });
    }
    require_pairs(report, 3)?;
    Ok(Verdict::above(Criterion::MutualInformation3, report.mi_sum(3), 1.0))
}

fn pearson_moduli(report: &CorrelationReport, n: usize) -> Result<Vec<f64>> {
    require_pairs(report, n)?;
    report.pairs[..n]
        .iter()
        .map(|p| p.pearson_abs().ok_or(Error::DegenerateObservable { variance: p.moments.var_a.min(p.moments.var_b) }))
        .collect()
}

/// Σ|C| over the first `n_mubs` pairs > 1.
pub fn pearson_criterion(report: &CorrelationReport, n_mubs: usize) -> Result<Verdict> {
    let sum = pearson_moduli(report, n_mubs)?.iter().sum();
    Ok(Verdict::above(Criterion::PearsonSum(n_mubs), sum, 1.0))
}

/// |C_AB C_CD| > 1/4 over the first two pairs.
pub fn pearson_product_criterion(report: &CorrelationReport) -> Result<Verdict> {
    let c = pearson_moduli(report, 2)?;
    Ok(Verdict::above(Criterion::PearsonProduct, c[0] * c[1], 0.25))
}

/// S_AB + S_CD over the first two pairs, detected outside [1, d+1].
/// `threshold` reports the nearer bound.
pub fn condprob_criterion(report: &CorrelationReport, d: usize) -> Result<Verdict> {
    require_pairs(report, 2)?;
    let mut sum = 0.0;
    for p in &report.pairs[..2] {
        sum += p.conditional_sum.ok_or(Error::UndefinedConditional { outcome: 0, probability: 0.0 })?;
    }
    let (lower, upper) = (1.0, d as f64 + 1.0);
    let margin = (sum - upper).max(lower - sum);
    let nearer = if sum >= (lower + upper) / 2.0 { upper } else { lower };
    Ok(Verdict::from_margin(Criterion::ConditionalSum, sum, nearer, margin, SLACK))
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessOperator {
    pub label: WitnessLabel,
    pub matrix: ComplexMatrix,
}

impl WitnessOperator {
    pub fn new(label: WitnessLabel) -> Self {
        let mut m = ComplexMatrix::identity(4);
        for (sign, p) in label.signs().into_iter().zip(pauli_matrices()) {
            m = &m + &tensor_product(&p, &p).scale_real(sign);
        }
        Self { label, matrix: m.scale_real(0.25) }
    }

    pub fn expectation(&self, s: &BipartiteState) -> f64 {
        s.expectation(&self.matrix).re
    }

    /// Detected iff Tr[ρW] < 0; margin is −Tr[ρW].
    pub fn verdict(&self, s: &BipartiteState) -> Verdict {
        Verdict::below(Criterion::Witness(self.label), self.expectation(s), 0.0)
    }
}

pub fn witness_operators() -> [WitnessOperator; 5] {
    WitnessLabel::ALL.map(WitnessOperator::new)
}

fn require_qubits(s: &BipartiteState) -> Result<()> {
    if s.d() != 2 {
        return Err(Error::UnsupportedDimension { dim: s.d(), reason: "defined for two qubits" });
    }
    Ok(())
}

/// Verdicts for W1..W5.
pub fn witness_bank(s: &BipartiteState) -> Result<Vec<Verdict>> {
    require_qubits(s)?;
    Ok(witness_operators().iter().map(|w| w.verdict(s)).collect())
}

/// Any-of aggregate of a witness bank; margin is the largest member margin.
pub fn witness_bank_verdict(bank: &[Verdict]) -> Verdict {
    let best = bank
        .iter()
        .max_by(|a, b| a.margin.total_cmp(&b.margin))
        .expect("bank is nonempty");
    Verdict { detector: Criterion::WitnessBank, ..best.clone() }
}

/// Local uncertainty relation with σ_x and σ_z:
/// |C′_XX| + |C′_ZZ| ≤ (Δ²σ_x(ρ₁) + Δ²σ_x(ρ₂) + Δ²σ_z(ρ₁) + Δ²σ_z(ρ₂))/2 − 1
/// for separable states, C′ the unnormalized covariance.
pub fn lur_criterion(s: &BipartiteState) -> Result<Verdict> {
    require_qubits(s)?;
    let [sx, _, sz] = pauli_matrices();
    let rho_a = partial_trace(s, Subsystem::A);
    let rho_b = partial_trace(s, Subsystem::B);
    let mut lhs = 0.0;
    let mut variances = 0.0;
    for p in [&sx, &sz] {
        let ea = rho_a.expectation(p).re;
        let eb = rho_b.expectation(p).re;
        let eab = s.expectation(&tensor_product(p, p)).re;
        lhs += (eab - ea * eb).abs();
        variances += (1.0 - ea * ea) + (1.0 - eb * eb);
    }
    Ok(Verdict::above(Criterion::Lur, lhs, variances / 2.0 - 1.0))
}

/// Correlations for adapted bases: A measures `side_a.first`/`.second`, B
/// measures `side_b.first`/`.second`.
pub fn adapted_report(s: &BipartiteState, side_a: &MubPair, side_b: &MubPair) -> Result<CorrelationReport> {
    report_for_pairs(
        s,
        &[(side_a.first.clone(), side_b.first.clone()), (side_a.second.clone(), side_b.second.clone())],
    )
}

/// True iff I_AB + I_CD reaches 2 log₂ d within 1e-6 for the given bases.
pub fn max_entanglement_test(s: &BipartiteState, side_a: &MubPair, side_b: &MubPair) -> Result<bool> {
    let report = adapted_report(s, side_a, side_b)?;
    let target = 2.0 * (s.d() as f64).log2();
    Ok((report.mi_sum(2) - target).abs() <= MAX_ENTANGLEMENT_TOL)
}

/// Conditional-probability profile of a state in one complementary pair,
/// same basis on both sides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplementarityProfile {
    /// p(a_i | b_i) in the first basis, `None` where p(b_i) = 0.
    pub first: Vec<Option<f64>>,
    /// p(c_i | d_i) in the second basis.
    pub second: Vec<Option<f64>>,
    pub s_first: f64,
    pub s_second: f64,
}

impl ComplementarityProfile {
    /// p(a_i|b_i) = 1 for every i.
    pub fn perfect_in_first(&self) -> bool {
        self.first.iter().all(|p| p.is_some_and(|p| (p - 1.0).abs() <= SLACK))
    }

    pub fn perfect_in_second(&self) -> bool {
        self.second.iter().all(|p| p.is_some_and(|p| (p - 1.0).abs() <= SLACK))
    }

    /// p(c_i|d_i) = 1/d for every i.
    pub fn uniform_in_second(&self) -> bool {
        let d = self.second.len() as f64;
        self.second.iter().all(|p| p.is_some_and(|p| (p - 1.0 / d).abs() <= SLACK))
    }
}

fn diagonal_conditionals(j: &JointDistribution) -> Vec<Option<f64>> {
    (0..j.dim()).map(|i| conditional(j, i, i).ok()).collect()
}

/// Checks the classical/quantum correlation pattern of a state in `mub`.
/// A CC state perfectly correlated in the first basis is uniform in the
/// second; CQ and QQ states are never perfectly correlated.
pub fn cc_cq_classification_check(s: &BipartiteState, mub: &MubPair) -> Result<ComplementarityProfile> {
    let j1 = joint_distribution(s, &mub.first, &mub.first)?;
    let j2 = joint_distribution(s, &mub.second, &mub.second)?;
    let first = diagonal_conditionals(&j1);
    let second = diagonal_conditionals(&j2);
    Ok(ComplementarityProfile {
        s_first: first.iter().flatten().sum(),
        s_second: second.iter().flatten().sum(),
        first,
        second,
    })
}

/// Correlation report plus every applicable verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub report: CorrelationReport,
    pub verdicts: Vec<Verdict>,
    /// Individual W1..W5 results for qubit pairs.
    pub witnesses: Vec<Verdict>,
    /// Detectors that could not be evaluated, with the reason.
    pub undefined: Vec<(Criterion, String)>,
}

impl Analysis {
    pub fn verdict(&self, c: Criterion) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.detector == c)
    }
}

/// Runs every detector that applies to the dimension of `s` on `mubs`.
pub fn analyze(s: &BipartiteState, mubs: &MubSet) -> Result<Analysis> {
    let report = full_report(s, mubs)?;
    let d = s.d();
    let mut verdicts = vec![ppt_oracle(s)];
    let mut undefined = Vec::new();
    let mut push = |c: Criterion, r: Result<Verdict>| match r {
        Ok(v) => verdicts.push(v),
        Err(e) => undefined.push((c, e.to_string())),
    };
    push(Criterion::MutualInformation, mi_criterion(&report, d));
    if d == 2 && report.pairs.len() >= 3 {
        push(Criterion::MutualInformation3, mi3_criterion(&report));
    }
    push(Criterion::PearsonSum(2), pearson_criterion(&report, 2));
    if report.pairs.len() > 2 {
        let n = report.pairs.len();
        push(Criterion::PearsonSum(n), pearson_criterion(&report, n));
    }
    push(Criterion::PearsonProduct, pearson_product_criterion(&report));
    push(Criterion::ConditionalSum, condprob_criterion(&report, d));
    let mut witnesses = Vec::new();
    if d == 2 {
        witnesses = witness_bank(s)?;
        push(Criterion::WitnessBank, Ok(witness_bank_verdict(&witnesses)));
        push(Criterion::Lur, lur_criterion(s));
    }
    Ok(Analysis { report, verdicts, witnesses, undefined })
}

/// Pearson coefficient of two ±1 qubit observables n·σ ⊗ I and I ⊗ m·σ
/// from Bloch data; exposed for fast repeated evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochData {
    /// ⟨σ_i ⊗ I⟩.
    pub a: [f64; 3],
    /// ⟨I ⊗ σ_j⟩.
    pub b: [f64; 3],
    /// ⟨σ_i ⊗ σ_j⟩.
    pub t: [[f64; 3]; 3],
}

impl BlochData {
    pub fn new(s: &BipartiteState) -> Result<Self> {
        require_qubits(s)?;
        let p = pauli_matrices();
        let m = s.matrix();
        let i2 = ComplexMatrix::identity(2);
        let ev = |x: &ComplexMatrix| m.trace_product(x).re;
        let a = [0, 1, 2].map(|i| ev(&tensor_product(&p[i], &i2)));
        let b = [0, 1, 2].map(|j| ev(&tensor_product(&i2, &p[j])));
        let t = [0, 1, 2].map(|i| [0, 1, 2].map(|j| ev(&tensor_product(&p[i], &p[j]))));
        Ok(Self { a, b, t })
    }

    /// |C| for n·σ on A and m·σ on B; `None` for zero variance.
    pub fn pearson_abs(&self, n: &[f64; 3], m: &[f64; 3]) -> Option<f64> {
        let mut corr = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                corr += n[i] * self.t[i][j] * m[j];
            }
        }
        let x = dot(n, &self.a);
        let y = dot(m, &self.b);
        let var = (1.0 - x * x) * (1.0 - y * y);
        (var > crate::correlations::ZERO_VARIANCE).then(|| (corr - x * y).abs() / var.sqrt())
    }

    /// Tr[ρ W] from the correlation diagonal.
    pub fn witness_expectation(&self, w: WitnessLabel) -> f64 {
        let s = w.signs();
        (1.0 + s[0] * self.t[0][0] + s[1] * self.t[1][1] + s[2] * self.t[2][2]) / 4.0
    }
}

fn dot(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{computational_basis, fourier_basis, qubit_pauli_mubs};
    use crate::states::{psi_epsilon, werner, NamedState};
    use approx::assert_abs_diff_eq;

    fn pauli_report(s: &BipartiteState, n: usize) -> CorrelationReport {
        full_report(s, &qubit_pauli_mubs().truncated(n)).unwrap()
    }

    #[test]
    fn ppt_examples() {
        assert!(ppt_oracle(&werner(0.5).unwrap()).detected_entangled);
        assert!(!ppt_oracle(&werner(1.0 / 3.0).unwrap()).detected_entangled);
        let cc = ppt_oracle(&NamedState::RhoCc.build());
        assert!(!cc.detected_entangled);
        assert!(cc.margin <= 0.0);
        let psi = ppt_oracle(&psi_epsilon(0.1).unwrap());
        assert!(psi.detected_entangled);
        assert_abs_diff_eq!(psi.margin, 0.1 * (1.0f64 - 0.01).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn mi_examples() {
        let v = mi_criterion(&pauli_report(&NamedState::PhiPlus.build(), 2), 2).unwrap();
        assert_abs_diff_eq!(v.margin, 1.0, epsilon = 1e-12);
        let v = mi_criterion(&pauli_report(&NamedState::RhoCc.build(), 2), 2).unwrap();
        assert_eq!(v.margin, 0.0);
        assert!(!v.detected_entangled);
        let v = mi_criterion(&pauli_report(&werner(0.9).unwrap(), 2), 2).unwrap();
        let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        assert_abs_diff_eq!(v.value, 2.0 * (1.0 - h(0.95)), epsilon = 1e-12);
        assert!(v.detected_entangled);
        assert!(matches!(
            mi_criterion(&pauli_report(&werner(0.9).unwrap(), 1), 2),
            Err(Error::NotEnoughPairs { needed: 2, found: 1 })
        ));
    }

    #[test]
    fn mi_uses_two_largest() {
        // all three Pauli pairs carry the same I
        let r = pauli_report(&werner(0.6).unwrap(), 3);
        let v = mi_criterion(&r, 2).unwrap();
        assert_abs_diff_eq!(v.value, 2.0 * r.pairs[0].mutual_information, epsilon = 1e-12);
    }

    #[test]
    fn mi3_examples() {
        let v = mi3_criterion(&pauli_report(&NamedState::PhiPlus.build(), 3)).unwrap();
        assert_abs_diff_eq!(v.value, 3.0, epsilon = 1e-12);
        assert!(v.detected_entangled);
        let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        for p in [0.3, 0.55, 0.6, 0.8] {
            let v = mi3_criterion(&pauli_report(&werner(p).unwrap(), 3)).unwrap();
            let closed = 3.0 * (1.0 - h((1.0 + p) / 2.0));
            assert_abs_diff_eq!(v.value, closed, epsilon = 1e-12);
            assert_eq!(v.detected_entangled, closed > 1.0 + SLACK);
        }
        let r3 = full_report(&crate::states::max_entangled(3).unwrap(), &crate::bases::prime_d_mubs(3).unwrap()).unwrap();
        assert!(mi3_criterion(&r3).is_err());
    }

    #[test]
    fn pearson_examples() {
        let v = pearson_criterion(&pauli_report(&psi_epsilon(0.3).unwrap(), 2), 2).unwrap();
        assert_abs_diff_eq!(v.value, 1.0 + 0.6 * 0.91f64.sqrt(), epsilon = 1e-12);
        assert!(v.detected_entangled);
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 1.0] {
            let v = pearson_criterion(&pauli_report(&werner(p).unwrap(), 3), 3).unwrap();
            assert_abs_diff_eq!(v.value, 3.0 * p, epsilon = 1e-12);
            assert_eq!(v.detected_entangled, p > 1.0 / 3.0 + 1e-6);
        }
        let v = pearson_product_criterion(&pauli_report(&NamedState::ProductBound.build(), 2)).unwrap();
        assert_abs_diff_eq!(v.value, 0.25, epsilon = 1e-12);
        assert!(!v.detected_entangled);
        // eigenstate of σ_z on A
        assert!(pearson_criterion(&pauli_report(&psi_epsilon(0.0).unwrap(), 2), 2).is_err());
    }

    #[test]
    fn condprob_examples() {
        let v = condprob_criterion(&pauli_report(&NamedState::PhiPlus.build(), 2), 2).unwrap();
        assert_abs_diff_eq!(v.value, 4.0, epsilon = 1e-12);
        assert!(v.detected_entangled);
        let v = condprob_criterion(&pauli_report(&NamedState::RhoCc.build(), 2), 2).unwrap();
        assert_abs_diff_eq!(v.value, 3.0, epsilon = 1e-12);
        assert_eq!((v.margin, v.threshold, v.detected_entangled), (0.0, 3.0, false));
        let v = condprob_criterion(&pauli_report(&NamedState::ShiftedCc.build(), 2), 2).unwrap();
        assert_abs_diff_eq!(v.value, 1.0, epsilon = 1e-12);
        assert_eq!((v.margin, v.threshold, v.detected_entangled), (0.0, 1.0, false));
        // Ψ⁻ anticorrelated in both: S sum = 0, below the interval
        let v = condprob_criterion(&pauli_report(&NamedState::PsiMinus.build(), 2), 2).unwrap();
        assert!(v.detected_entangled);
        assert_abs_diff_eq!(v.margin, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn witness_examples() {
        let singlet = NamedState::PsiMinus.build();
        let bank = witness_bank(&singlet).unwrap();
        assert_abs_diff_eq!(bank[0].value, -0.5, epsilon = 1e-12);
        assert!(witness_bank_verdict(&bank).detected_entangled);
        for p in [0.0, 0.3, 0.7, 1.0] {
            let w5 = WitnessOperator::new(WitnessLabel::W5).expectation(&werner(p).unwrap());
            assert_abs_diff_eq!(w5, (1.0 - p) / 4.0, epsilon = 1e-12);
        }
        for w in witness_operators() {
            assert!(w.matrix.hermiticity_deviation() < 1e-15);
            assert_abs_diff_eq!(w.matrix.trace().re, 1.0, epsilon = 1e-15);
        }
        assert!(witness_bank(&crate::states::max_entangled(3).unwrap()).is_err());
    }

    #[test]
    fn witness_bank_bell_coverage() {
        let detected = |s: NamedState| witness_bank_verdict(&witness_bank(&s.build()).unwrap()).detected_entangled;
        assert!(detected(NamedState::PsiMinus));
        assert!(detected(NamedState::PsiPlus));
        assert!(detected(NamedState::PhiMinus));
        assert!(!detected(NamedState::PhiPlus));
    }

    #[test]
    fn lur_examples() {
        let v = lur_criterion(&NamedState::PhiPlus.build()).unwrap();
        assert_abs_diff_eq!(v.value, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.threshold, 1.0, epsilon = 1e-12);
        assert!(v.detected_entangled);
        let mut rng = crate::states::RngStream::new(1, 0);
        for _ in 0..50 {
            let a = crate::states::random_density_matrix(2, &mut rng).unwrap();
            let b = crate::states::random_density_matrix(2, &mut rng).unwrap();
            assert!(!lur_criterion(&BipartiteState::product(&a, &b).unwrap()).unwrap().detected_entangled);
        }
    }

    #[test]
    fn max_entanglement_examples() {
        let std = MubPair::standard(2).unwrap();
        let conj = MubPair::new(std.first.conjugate(), std.second.conjugate()).unwrap();
        assert!(max_entanglement_test(&NamedState::PhiPlus.build(), &std, &conj).unwrap());
        assert!(!max_entanglement_test(&psi_epsilon(0.3).unwrap(), &std, &conj).unwrap());
        assert!(!max_entanglement_test(&NamedState::RhoCc.build(), &std, &conj).unwrap());
    }

    #[test]
    fn classification_examples() {
        let mub = MubPair::standard(2).unwrap();
        let cc = cc_cq_classification_check(&NamedState::RhoCc.build(), &mub).unwrap();
        assert_abs_diff_eq!(cc.s_first, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cc.s_second, 1.0, epsilon = 1e-12);
        assert!(cc.perfect_in_first() && cc.uniform_in_second());

        let qq = cc_cq_classification_check(&NamedState::QqFourCorner.build(), &mub).unwrap();
        for p in qq.first.iter().chain(&qq.second) {
            assert_abs_diff_eq!(p.unwrap(), 0.75, epsilon = 1e-12);
        }
        assert!(!qq.perfect_in_first() && !qq.perfect_in_second());
    }

    #[test]
    fn rho_cc_on_all_boundaries() {
        let r = pauli_report(&NamedState::RhoCc.build(), 2);
        for v in [mi_criterion(&r, 2), pearson_criterion(&r, 2), condprob_criterion(&r, 2)] {
            let v = v.unwrap();
            assert_eq!(v.margin, 0.0, "{}", v.detector);
            assert!(!v.detected_entangled);
        }
    }

    #[test]
    fn bloch_matches_generic_pearson() {
        let mut rng = crate::states::RngStream::new(13, 0);
        let z = computational_basis(2).unwrap();
        let x = fourier_basis(2).unwrap();
        for _ in 0..20 {
            let s = crate::states::random_bipartite(crate::states::StateEnsemble::HilbertSchmidt, 2, &mut rng).unwrap();
            let bloch = BlochData::new(&s).unwrap();
            let cz = crate::correlations::pearson_linear(&s, &z, &z).unwrap().norm();
            let cx = crate::correlations::pearson_linear(&s, &x, &x).unwrap().norm();
            assert_abs_diff_eq!(bloch.pearson_abs(&[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0]).unwrap(), cz, epsilon = 1e-10);
            assert_abs_diff_eq!(bloch.pearson_abs(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap(), cx, epsilon = 1e-10);
            for w in witness_operators() {
                assert_abs_diff_eq!(bloch.witness_expectation(w.label), w.expectation(&s), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn analyze_phi_plus() {
        let a = analyze(&NamedState::PhiPlus.build(), &qubit_pauli_mubs()).unwrap();
        for v in &a.verdicts {
            assert_eq!(v.detected_entangled, v.detector != Criterion::WitnessBank, "{}", v.detector);
        }
        assert!(a.undefined.is_empty());
        let a = analyze(&NamedState::RhoCc.build(), &qubit_pauli_mubs()).unwrap();
        assert!(a.verdicts.iter().all(|v| !v.detected_entangled));
    }
}
