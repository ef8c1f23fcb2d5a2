//! Outcome statistics of local measurements and the three correlation
//! measures: mutual information, Pearson coefficient and the sum of
//! conditional probabilities.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::bases::{linear_observable, MubSet, Observable, OrthonormalBasis};
use crate::error::{Error, Result};
use crate::qmat::{kron_vec, tensor_product, BipartiteState, ComplexMatrix, DensityMatrix};

/// Below this a marginal counts as zero.
pub const ZERO_PROBABILITY: f64 = 1e-12;
/// Below this a variance counts as zero.
pub const ZERO_VARIANCE: f64 = 1e-12;

/// p(a_i, b_j) for a pair of local measurements.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointDistribution {
    dim: usize,
    table: Vec<f64>,
}

impl JointDistribution {
    /// Row-major d×d table. Entries above −1e-12 are clamped to 0.
    pub fn new(dim: usize, mut table: Vec<f64>) -> Result<Self> {
        if table.len() != dim * dim {
            return Err(Error::BadShape { expected: dim * dim, found: table.len() });
        }
        for p in table.iter_mut() {
            if *p < -ZERO_PROBABILITY || !p.is_finite() {
                return Err(Error::OutOfRange { name: "probability", value: *p, min: 0.0, max: 1.0 });
            }
            *p = p.max(0.0);
        }
        let total: f64 = table.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::OutOfRange { name: "total probability", value: total, min: 1.0, max: 1.0 });
        }
        Ok(Self { dim, table })
    }

    pub fn uniform(dim: usize) -> Self {
        Self { dim, table: vec![1.0 / (dim * dim) as f64; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.table[a * self.dim + b]
    }

    pub fn marginal_a(&self) -> Vec<f64> {
        (0..self.dim).map(|a| (0..self.dim).map(|b| self.get(a, b)).sum()).collect()
    }

    pub fn marginal_b(&self) -> Vec<f64> {
        (0..self.dim).map(|b| (0..self.dim).map(|a| self.get(a, b)).sum()).collect()
    }

    pub fn transposed(&self) -> Self {
        let d = self.dim;
        Self { dim: d, table: (0..d * d).map(|k| self.get(k % d, k / d)).collect() }
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }
}

/// p(a_i, b_j) = ⟨a_i b_j|ρ|a_i b_j⟩.
pub fn joint_distribution(
    s: &BipartiteState,
    basis_a: &OrthonormalBasis,
    basis_b: &OrthonormalBasis,
) -> Result<JointDistribution> {
    let d = s.d();
    for b in [basis_a, basis_b] {
        if b.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: b.dim() });
        }
    }
    let va: Vec<_> = basis_a.vectors().collect();
    let vb: Vec<_> = basis_b.vectors().collect();
    let mut table = Vec::with_capacity(d * d);
    for a in &va {
        for b in &vb {
            table.push(s.matrix().quadratic_form(&kron_vec(a, b)).re);
        }
    }
    // renormalize away rounding drift; the true total is 1
    let total: f64 = table.iter().map(|p: &f64| p.max(0.0)).sum();
    for p in table.iter_mut() {
        *p = p.max(0.0) / total;
    }
    Ok(JointDistribution { dim: d, table })
}

/// p(a | b) = p(a, b) / p(b).
pub fn conditional(j: &JointDistribution, a: usize, b: usize) -> Result<f64> {
    let pb: f64 = (0..j.dim).map(|k| j.get(k, b)).sum();
    if pb < ZERO_PROBABILITY {
        return Err(Error::UndefinedConditional { outcome: b, probability: pb });
    }
    Ok(j.get(a, b) / pb)
}

/// State of A after outcome `b` of a `basis_b` measurement on B:
/// ⟨b|ρ|b⟩_B / p(b).
pub fn conditioned_state(s: &BipartiteState, basis_b: &OrthonormalBasis, b: usize) -> Result<DensityMatrix> {
    let d = s.d();
    if basis_b.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: basis_b.dim() });
    }
    let v = basis_b.vector(b);
    let m = s.matrix();
    let block = ComplexMatrix::from_fn(d, d, |i, k| {
        let mut acc = C64::new(0.0, 0.0);
        for l in 0..d {
            for n in 0..d {
                acc += v[l].conj() * m[(i * d + l, k * d + n)] * v[n];
            }
        }
        acc
    });
    let pb = block.trace().re;
    if pb < ZERO_PROBABILITY {
        return Err(Error::UndefinedConditional { outcome: b, probability: pb });
    }
    Ok(DensityMatrix::from_trusted(block.scale_real(1.0 / pb)))
}

/// Shannon entropy in bits, 0 log 0 = 0.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// I = H(A) + H(B) − H(A,B), in bits.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    let i = shannon_entropy(&j.marginal_a()) + shannon_entropy(&j.marginal_b()) - shannon_entropy(&j.table);
    i.max(0.0)
}

/// H(A|B) = −Σ p(a,b) log₂ p(a|b).
pub fn conditional_entropy(j: &JointDistribution) -> f64 {
    let pb = j.marginal_b();
    let mut h = 0.0;
    for a in 0..j.dim {
        for b in 0..j.dim {
            let p = j.get(a, b);
            if p > 0.0 {
                h -= p * (p / pb[b]).log2();
            }
        }
    }
    h
}

/// Outcome probabilities of a single-system measurement.
pub fn outcome_distribution(rho: &DensityMatrix, basis: &OrthonormalBasis) -> Vec<f64> {
    basis.vectors().map(|v| rho.matrix().quadratic_form(&v).re.max(0.0)).collect()
}

/// Pearson coefficient (⟨XY⟩ − ⟨X⟩⟨Y⟩)/(σ_X σ_Y) for operators on the full
/// space. Complex in general when X and Y do not commute.
pub fn pearson_operators(rho: &DensityMatrix, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<C64> {
    let ex = rho.expectation(x);
    let ey = rho.expectation(y);
    let exy = rho.expectation(&x.matmul(y));
    let var_x = rho.expectation(&x.matmul(x)).re - ex.re * ex.re;
    let var_y = rho.expectation(&y.matmul(y)).re - ey.re * ey.re;
    for v in [var_x, var_y] {
        if v < ZERO_VARIANCE {
            return Err(Error::DegenerateObservable { variance: v });
        }
    }
    Ok((exy - ex * ey) / (var_x * var_y).sqrt())
}

/// Pearson coefficient of `obs_a ⊗ I` and `I ⊗ obs_b`.
pub fn pearson(s: &BipartiteState, obs_a: &Observable, obs_b: &Observable) -> Result<C64> {
    let d = s.d();
    let x = tensor_product(&obs_a.matrix(), &ComplexMatrix::identity(d));
    let y = tensor_product(&ComplexMatrix::identity(d), &obs_b.matrix());
    pearson_operators(s.state(), &x, &y)
}

/// Moments of two local observables evaluated from a joint outcome table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub mean_a: f64,
    pub mean_b: f64,
    pub mean_ab: f64,
    pub var_a: f64,
    pub var_b: f64,
}

impl Moments {
    pub fn from_joint(j: &JointDistribution, values_a: &[f64], values_b: &[f64]) -> Self {
        let (mut ma, mut mb, mut mab, mut ma2, mut mb2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for a in 0..j.dim {
            for b in 0..j.dim {
                let p = j.get(a, b);
                let (x, y) = (values_a[a], values_b[b]);
                ma += p * x;
                mb += p * y;
                mab += p * x * y;
                ma2 += p * x * x;
                mb2 += p * y * y;
            }
        }
        Self { mean_a: ma, mean_b: mb, mean_ab: mab, var_a: ma2 - ma * ma, var_b: mb2 - mb * mb }
    }

    pub fn covariance(&self) -> f64 {
        self.mean_ab - self.mean_a * self.mean_b
    }

    pub fn pearson(&self) -> Result<f64> {
        for v in [self.var_a, self.var_b] {
            if v < ZERO_VARIANCE {
                return Err(Error::DegenerateObservable { variance: v });
            }
        }
        Ok(self.covariance() / (self.var_a * self.var_b).sqrt())
    }
}

/// S = Σ_i p(a_{π(i)} | b_i).
pub fn conditional_sum(j: &JointDistribution, pairing: &[usize]) -> Result<f64> {
    let d = j.dim;
    let mut seen = vec![false; d];
    if pairing.len() != d || pairing.iter().any(|&k| k >= d || std::mem::replace(&mut seen[k], true)) {
        return Err(Error::InvalidPairing(d));
    }
    pairing.iter().enumerate().map(|(b, &a)| conditional(j, a, b)).sum()
}

pub fn identity_pairing(d: usize) -> Vec<usize> {
    (0..d).collect()
}

const MAX_PAIRING_SEARCH_D: usize = 5;

/// Max of S over all d! outcome pairings, d ≤ 5.
pub fn max_conditional_sum(j: &JointDistribution) -> Result<(f64, Vec<usize>)> {
    let d = j.dim;
    if d > MAX_PAIRING_SEARCH_D {
        return Err(Error::UnsupportedDimension { dim: d, reason: "pairing search limited to d ≤ 5" });
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut perm = identity_pairing(d);
    // Heap's algorithm
    let mut c = vec![0usize; d];
    let mut consider = |p: &[usize]| -> Result<()> {
        let s = conditional_sum(j, p)?;
        if best.as_ref().is_none_or(|(b, _)| s > *b) {
            best = Some((s, p.to_vec()));
        }
        Ok(())
    };
    consider(&perm)?;
    let mut i = 0;
    while i < d {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            consider(&perm)?;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best.expect("at least one permutation"))
}

/// Correlations between outcomes of the same basis measured on both sides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCorrelations {
    pub basis: String,
    /// Mutual information, bits.
    pub mutual_information: f64,
    pub entropy_a: f64,
    pub entropy_b: f64,
    /// Pearson coefficient of the linear observables; `None` when a variance
    /// vanishes.
    pub pearson: Option<C64>,
    pub moments: Moments,
    /// S with identity pairing; `None` when a marginal vanishes.
    pub conditional_sum: Option<f64>,
    pub joint: JointDistribution,
}

impl PairCorrelations {
    pub fn from_joint(basis: impl Into<String>, joint: JointDistribution) -> Self {
        let d = joint.dim();
        let values: Vec<f64> = (0..d).map(|k| k as f64).collect();
        let moments = Moments::from_joint(&joint, &values, &values);
        Self {
            basis: basis.into(),
            mutual_information: mutual_information(&joint),
            entropy_a: shannon_entropy(&joint.marginal_a()),
            entropy_b: shannon_entropy(&joint.marginal_b()),
            pearson: moments.pearson().ok().map(|c| C64::new(c, 0.0)),
            moments,
            conditional_sum: conditional_sum(&joint, &identity_pairing(d)).ok(),
            joint,
        }
    }

    pub fn pearson_abs(&self) -> Option<f64> {
        self.pearson.map(|c| c.norm())
    }
}

/// Correlation measures for every basis of a MUB set, same basis on both
/// sides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub dim: usize,
    pub pairs: Vec<PairCorrelations>,
}

impl CorrelationReport {
    pub fn mutual_informations(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.mutual_information).collect()
    }

    /// Σ I over the first `n` pairs.
    pub fn mi_sum(&self, n: usize) -> f64 {
        self.pairs.iter().take(n).map(|p| p.mutual_information).sum()
    }

    /// Σ |C| over the first `n` pairs; `None` if any is undefined.
    pub fn pearson_sum(&self, n: usize) -> Option<f64> {
        self.pairs.iter().take(n).map(PairCorrelations::pearson_abs).sum()
    }

    /// Σ S over the first `n` pairs; `None` if any is undefined.
    pub fn conditional_sum_total(&self, n: usize) -> Option<f64> {
        self.pairs.iter().take(n).map(|p| p.conditional_sum).sum()
    }
}

pub fn full_report(s: &BipartiteState, mubs: &MubSet) -> Result<CorrelationReport> {
    if mubs.dim() != s.d() {
        return Err(Error::DimensionMismatch { expected: s.d(), found: mubs.dim() });
    }
    let pairs = mubs
        .bases()
        .iter()
        .map(|b| Ok(PairCorrelations::from_joint(b.label(), joint_distribution(s, b, b)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationReport { dim: s.d(), pairs })
}

/// Report over explicit (A-basis, B-basis) pairs.
pub fn report_for_pairs(s: &BipartiteState, pairs: &[(OrthonormalBasis, OrthonormalBasis)]) -> Result<CorrelationReport> {
    let pairs = pairs
        .iter()
        .map(|(a, b)| Ok(PairCorrelations::from_joint(a.label(), joint_distribution(s, a, b)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationReport { dim: s.d(), pairs })
}

/// Pearson via the operator route for a basis pair, using linear observables.
pub fn pearson_linear(s: &BipartiteState, basis_a: &OrthonormalBasis, basis_b: &OrthonormalBasis) -> Result<C64> {
    pearson(s, &linear_observable(basis_a), &linear_observable(basis_b))
}
