//! Named states, the parametric families used in the sweeps, and random
//! state sampling.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::bases::{computational_basis, fourier_basis, OrthonormalBasis};
use crate::error::{Error, Result};
use crate::qmat::{kron_vec, orthonormalize_columns, tensor_product, BipartiteState, ComplexMatrix, DensityMatrix};

/// Deterministic random stream identified by `(seed, stream_id)`.
///
/// Backed by ChaCha8 with the stream id selecting one of its 2^64
/// independent streams, so any partition of work into streams reproduces
/// bit-for-bit.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Standard complex Gaussian: E|z|² = 1.
    pub fn complex_gaussian(&mut self) -> C64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        C64::new(re, im) * FRAC_1_SQRT_2
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform point on the probability simplex (Dirichlet with all-ones
    /// concentration).
    pub fn simplex(&mut self, n: usize) -> Vec<f64> {
        let mut w: Vec<f64> = (0..n).map(|_| self.rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = w.iter().sum();
        for x in w.iter_mut() {
            *x /= total;
        }
        w
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn bipartite(d: usize, m: ComplexMatrix) -> BipartiteState {
    BipartiteState::new(d, DensityMatrix::from_trusted(m)).expect("dimensions fixed by construction")
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange { name, value, min: 0.0, max: 1.0 });
    }
    Ok(())
}

/// Σ_i |a_i⟩⟨a_i| ⊗ |b_i⟩⟨b_i| / d.
pub fn rho_cc(basis_a: &OrthonormalBasis, basis_b: &OrthonormalBasis) -> Result<BipartiteState> {
    let d = basis_a.dim();
    if basis_b.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: basis_b.dim() });
    }
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        m = &m + &tensor_product(&basis_a.projector(i), &basis_b.projector(i));
    }
    Ok(bipartite(d, m.scale_real(1.0 / d as f64)))
}

/// ε|00⟩ + √(1−ε²)|11⟩.
pub fn psi_epsilon(epsilon: f64) -> Result<BipartiteState> {
    check_unit_interval("epsilon", epsilon)?;
    let psi = [r(epsilon), r(0.0), r(0.0), r((1.0 - epsilon * epsilon).max(0.0).sqrt())];
    Ok(bipartite(2, ComplexMatrix::projector(&psi)))
}

/// Σ_j |jj⟩/√d.
pub fn max_entangled(d: usize) -> Result<BipartiteState> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut psi = vec![r(0.0); d * d];
    for j in 0..d {
        psi[j * d + j] = r(1.0 / (d as f64).sqrt());
    }
    Ok(bipartite(d, ComplexMatrix::projector(&psi)))
}

fn bell(sign_same: f64, swapped: bool) -> BipartiteState {
    let s = FRAC_1_SQRT_2;
    let psi = if swapped {
        [r(0.0), r(s), r(sign_same * s), r(0.0)]
    } else {
        [r(s), r(0.0), r(0.0), r(sign_same * s)]
    };
    bipartite(2, ComplexMatrix::projector(&psi))
}

/// p|Φ⁺⟩⟨Φ⁺| + (1−p) I/4.
pub fn werner(p: f64) -> Result<BipartiteState> {
    check_unit_interval("p", p)?;
    let phi = bell(1.0, false);
    let m = &phi.matrix().scale_real(p) + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    Ok(bipartite(2, m))
}

/// Σ_i (|a_i a_i⟩⟨a_i a_i| + |c_i c_i⟩⟨c_i c_i|)/2d with computational a and
/// Fourier c.
fn product_bound(d: usize) -> Result<BipartiteState> {
    let a = computational_basis(d)?;
    let c = fourier_basis(d)?;
    let mix = &rho_cc(&a, &a)?.matrix().scale_real(0.5) + &rho_cc(&c, &c)?.matrix().scale_real(0.5);
    Ok(bipartite(d, mix))
}

/// Σ_i |a_i b_{i⊕1}⟩⟨a_i b_{i⊕1}|/d in the computational basis.
fn shifted_cc(d: usize) -> Result<BipartiteState> {
    let a = computational_basis(d)?;
    let shifted = ComplexMatrix::from_fn(d, d, |row, col| r(if row == (col + 1) % d { 1.0 } else { 0.0 }));
    let b = OrthonormalBasis::new("shifted", shifted)?;
    rho_cc(&a, &b)
}

/// Fixed states referenced throughout the analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedState {
    /// (|00⟩⟨00|+|11⟩⟨11|+|++⟩⟨++|+|−−⟩⟨−−|)/4.
    QqFourCorner,
    /// (|00⟩⟨00|+|++⟩⟨++|)/2.
    TwoCorner,
    ProductBound,
    ShiftedCc,
    /// Computational-basis ρ_cc.
    RhoCc,
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl NamedState {
    pub const ALL: [NamedState; 9] = [
        NamedState::QqFourCorner,
        NamedState::TwoCorner,
        NamedState::ProductBound,
        NamedState::ShiftedCc,
        NamedState::RhoCc,
        NamedState::PhiPlus,
        NamedState::PhiMinus,
        NamedState::PsiPlus,
        NamedState::PsiMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedState::QqFourCorner => "qq_four_corner",
            NamedState::TwoCorner => "two_corner",
            NamedState::ProductBound => "product_bound",
            NamedState::ShiftedCc => "shifted_cc",
            NamedState::RhoCc => "rho_cc",
            NamedState::PhiPlus => "phi_plus",
            NamedState::PhiMinus => "phi_minus",
            NamedState::PsiPlus => "psi_plus",
            NamedState::PsiMinus => "psi_minus",
        }
    }

    pub fn is_entangled(self) -> bool {
        matches!(self, NamedState::PhiPlus | NamedState::PhiMinus | NamedState::PsiPlus | NamedState::PsiMinus)
    }

    /// Two-qubit instance.
    pub fn build(self) -> BipartiteState {
        self.build_in(2).expect("every catalog state exists for qubits")
    }

    /// Instance with subsystem dimension `d`. Qubit-only states reject d ≠ 2.
    pub fn build_in(self, d: usize) -> Result<BipartiteState> {
        let qubit_only = || Error::UnsupportedDimension { dim: d, reason: "state is defined for qubits only" };
        match self {
            NamedState::ProductBound => product_bound(d),
            NamedState::ShiftedCc => shifted_cc(d),
            NamedState::RhoCc => {
                let a = computational_basis(d)?;
                rho_cc(&a, &a)
            }
            NamedState::PhiPlus => max_entangled(d),
            _ if d != 2 => Err(qubit_only()),
            NamedState::QqFourCorner => product_bound(2),
            NamedState::TwoCorner => {
                let s = FRAC_1_SQRT_2;
                let zz = ComplexMatrix::projector(&[r(1.0), r(0.0), r(0.0), r(0.0)]);
                let pp = ComplexMatrix::projector(&kron_vec(&[r(s), r(s)], &[r(s), r(s)]));
                Ok(bipartite(2, (&zz + &pp).scale_real(0.5)))
            }
            NamedState::PhiMinus => Ok(bell(-1.0, false)),
            NamedState::PsiPlus => Ok(bell(1.0, true)),
            NamedState::PsiMinus => Ok(bell(-1.0, true)),
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        NamedState::ALL
            .into_iter()
            .find(|n| n.name() == key)
            .ok_or_else(|| Error::UnknownState(s.to_string()))
    }
}

/// One-parameter two-qubit families, p ∈ [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateFamily {
    /// p|Φ⁺⟩⟨Φ⁺| + (1−p)I/4; entangled for p > 1/3.
    Werner,
    /// p ρ_cc(z) + (1−p) ρ_cc(x): separable, discordant for p ≠ 0, 1.
    Dotted,
    /// p|Φ⁺⟩⟨Φ⁺| + (1−p)|Φ⁻⟩⟨Φ⁻|; entangled for p ≠ 1/2.
    Solid,
    /// ε|00⟩ + √(1−ε²)|11⟩ with ε = p.
    PsiEpsilon,
}

impl StateFamily {
    pub const ALL: [StateFamily; 4] =
        [StateFamily::Werner, StateFamily::Dotted, StateFamily::Solid, StateFamily::PsiEpsilon];

    pub fn name(self) -> &'static str {
        match self {
            StateFamily::Werner => "werner",
            StateFamily::Dotted => "dotted",
            StateFamily::Solid => "solid",
            StateFamily::PsiEpsilon => "psi_epsilon",
        }
    }

    pub fn state(self, p: f64) -> Result<BipartiteState> {
        check_unit_interval("p", p)?;
        match self {
            StateFamily::Werner => werner(p),
            StateFamily::PsiEpsilon => psi_epsilon(p),
            StateFamily::Dotted => {
                let z = computational_basis(2)?;
                let x = fourier_basis(2)?;
                let m = &rho_cc(&z, &z)?.matrix().scale_real(p) + &rho_cc(&x, &x)?.matrix().scale_real(1.0 - p);
                Ok(bipartite(2, m))
            }
            StateFamily::Solid => {
                let m = &bell(1.0, false).matrix().scale_real(p) + &bell(-1.0, false).matrix().scale_real(1.0 - p);
                Ok(bipartite(2, m))
            }
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        StateFamily::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// Ensembles for random mixed states.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateEnsemble {
    /// ρ = GG†/Tr(GG†) with Ginibre G.
    HilbertSchmidt,
    /// ρ = U diag(λ) U† with Haar U and λ uniform on the simplex. This is the
    /// ensemble behind the 36.87% two-qubit entangled fraction.
    #[default]
    UniformSpectrum,
}

impl StateEnsemble {
    pub fn name(self) -> &'static str {
        match self {
            StateEnsemble::HilbertSchmidt => "hilbert-schmidt",
            StateEnsemble::UniformSpectrum => "uniform-spectrum",
        }
    }
}

impl FromStr for StateEnsemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hs" | "hilbert-schmidt" | "hilbert_schmidt" => Ok(StateEnsemble::HilbertSchmidt),
            "uniform-spectrum" | "uniform_spectrum" | "zhsl" => Ok(StateEnsemble::UniformSpectrum),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

pub fn ginibre(n: usize, rng: &mut RngStream) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| rng.complex_gaussian())
}

/// Haar-random unitary (Gram-Schmidt of a Ginibre matrix).
pub fn haar_unitary(n: usize, rng: &mut RngStream) -> ComplexMatrix {
    orthonormalize_columns(&ginibre(n, rng))
}

/// Random density matrix under the Hilbert-Schmidt measure.
pub fn random_density_matrix(d_total: usize, rng: &mut RngStream) -> Result<DensityMatrix> {
    random_density_matrix_in(StateEnsemble::HilbertSchmidt, d_total, rng)
}

pub fn random_density_matrix_in(
    ensemble: StateEnsemble,
    d_total: usize,
    rng: &mut RngStream,
) -> Result<DensityMatrix> {
    if d_total < 2 {
        return Err(Error::InvalidDimension(d_total));
    }
    let m = match ensemble {
        StateEnsemble::HilbertSchmidt => {
            let g = ginibre(d_total, rng);
            let gg = g.matmul(&g.adjoint());
            let tr = gg.trace().re;
            gg.scale_real(1.0 / tr)
        }
        StateEnsemble::UniformSpectrum => {
            let u = haar_unitary(d_total, rng);
            let lambda = rng.simplex(d_total);
            u.matmul(&ComplexMatrix::from_real_diagonal(&lambda)).matmul(&u.adjoint())
        }
    };
    Ok(DensityMatrix::from_trusted(hermitize(m)))
}

fn hermitize(m: ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

/// Random two-qudit state drawn from `ensemble`.
pub fn random_bipartite(ensemble: StateEnsemble, d: usize, rng: &mut RngStream) -> Result<BipartiteState> {
    BipartiteState::new(d, random_density_matrix_in(ensemble, d * d, rng)?)
}

/// Σ_l w_l ρ_l ⊗ σ_l with k random local HS states and Dirichlet(1,…,1)
/// weights. Separable by construction.
pub fn separable_mixture(d: usize, k: usize, rng: &mut RngStream) -> Result<BipartiteState> {
    if k == 0 {
        return Err(Error::OutOfRange { name: "k", value: 0.0, min: 1.0, max: f64::INFINITY });
    }
    let weights = rng.simplex(k);
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for w in weights {
        let a = random_density_matrix(d, rng)?;
        let b = random_density_matrix(d, rng)?;
        m = &m + &tensor_product(a.matrix(), b.matrix()).scale_real(w);
    }
    Ok(bipartite(d, m))
}

/// Default component count for separable mixtures.
pub const SEPARABLE_COMPONENTS: usize = 4;

/// Σ_i p_i |a_i⟩⟨a_i| ⊗ ρ_i: classical on A, arbitrary (possibly
/// non-orthogonal) ensemble on B.
pub fn classical_quantum(
    weights: &[f64],
    basis_a: &OrthonormalBasis,
    states_b: &[DensityMatrix],
) -> Result<BipartiteState> {
    let d = basis_a.dim();
    if weights.len() != d || states_b.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: weights.len().min(states_b.len()) });
    }
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for (i, (w, rho)) in weights.iter().zip(states_b).enumerate() {
        if rho.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: rho.dim() });
        }
        m = &m + &tensor_product(&basis_a.projector(i), rho.matrix()).scale_real(w / total);
    }
    Ok(bipartite(d, m))
}
