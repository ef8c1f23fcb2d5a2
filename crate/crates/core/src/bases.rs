//! Measurement bases, mutually unbiased sets and observables built on them.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::{inner, ComplexMatrix};

const ORTHONORMAL_TOL: f64 = 1e-10;
const UNBIASED_TOL: f64 = 1e-9;
const UNITARY_TOL: f64 = 1e-9;

/// `d` orthonormal vectors, stored as the columns of a unitary.
///
/// Each vector carries the phase convention "first component with modulus
/// above 1e-12 is real and non-negative".
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthonormalBasis {
    label: String,
    vectors: ComplexMatrix,
}

impl OrthonormalBasis {
    pub fn new(label: impl Into<String>, vectors: ComplexMatrix) -> Result<Self> {
        if !vectors.is_square() {
            return Err(Error::NotSquare { rows: vectors.rows(), cols: vectors.cols() });
        }
        let dev = vectors.unitarity_deviation();
        if dev > ORTHONORMAL_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Self { label: label.into(), vectors: normalize_phases(&vectors) })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    /// The `k`-th basis vector.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    pub fn vectors(&self) -> impl Iterator<Item = Vec<C64>> + '_ {
        (0..self.dim()).map(move |k| self.vector(k))
    }

    /// Unitary whose columns are the basis vectors.
    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn projector(&self, k: usize) -> ComplexMatrix {
        ComplexMatrix::projector(&self.vector(k))
    }

    /// Entrywise complex conjugate basis. Pairs with `self` on the other side
    /// of Σ|jj⟩ to give perfectly matched outcomes.
    pub fn conjugate(&self) -> Self {
        Self { label: format!("{}*", self.label), vectors: normalize_phases(&self.vectors.conj()) }
    }

    /// max_{j,k} |⟨self_j|other_k⟩|.
    pub fn max_overlap(&self, other: &Self) -> f64 {
        overlaps_sq(self, other).into_iter().fold(0.0, f64::max).sqrt()
    }
}

fn normalize_phases(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = m.clone();
    for j in 0..m.cols() {
        let Some(first) = (0..m.rows()).map(|i| m[(i, j)]).find(|z| z.norm() > 1e-12) else {
            continue;
        };
        let phase = first.conj() / first.norm();
        for i in 0..m.rows() {
            out[(i, j)] = m[(i, j)] * phase;
        }
    }
    out
}

fn overlaps_sq(a: &OrthonormalBasis, b: &OrthonormalBasis) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.dim() * b.dim());
    for u in a.vectors() {
        for v in b.vectors() {
            out.push(inner(&u, &v).norm_sqr());
        }
    }
    out
}

/// Largest deviation of |⟨a_i|c_j⟩|² from 1/d.
pub fn unbiasedness_deviation(a: &OrthonormalBasis, b: &OrthonormalBasis) -> f64 {
    let target = 1.0 / a.dim() as f64;
    overlaps_sq(a, b).into_iter().map(|x| (x - target).abs()).fold(0.0, f64::max)
}

/// Two complementary bases of the same space.
#[derive(Clone, Debug, Serialize)]
pub struct MubPair {
    pub first: OrthonormalBasis,
    pub second: OrthonormalBasis,
    pub overlap_c: f64,
}

impl MubPair {
    pub fn new(first: OrthonormalBasis, second: OrthonormalBasis) -> Result<Self> {
        if first.dim() != second.dim() {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: second.dim() });
        }
        let dev = unbiasedness_deviation(&first, &second);
        if dev > UNBIASED_TOL {
            return Err(Error::UnsupportedDimension { dim: first.dim(), reason: "bases are not mutually unbiased" });
        }
        let overlap_c = first.max_overlap(&second);
        Ok(Self { first, second, overlap_c })
    }

    /// computational + Fourier.
    pub fn standard(d: usize) -> Result<Self> {
        Self::new(computational_basis(d)?, fourier_basis(d)?)
    }

    pub fn dim(&self) -> usize {
        self.first.dim()
    }

    /// Both members mapped by the same unitary.
    pub fn rotated(&self, unitary: &ComplexMatrix) -> Result<Self> {
        Self::new(rotate_basis(&self.first, unitary)?, rotate_basis(&self.second, unitary)?)
    }
}

/// A set of pairwise complementary bases.
#[derive(Clone, Debug, Serialize)]
pub struct MubSet {
    dim: usize,
    bases: Vec<OrthonormalBasis>,
}

impl MubSet {
    pub fn new(bases: Vec<OrthonormalBasis>) -> Result<Self> {
        let dim = bases.first().map(OrthonormalBasis::dim).ok_or(Error::InvalidDimension(0))?;
        for (i, a) in bases.iter().enumerate() {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: a.dim() });
            }
            for b in &bases[i + 1..] {
                if unbiasedness_deviation(a, b) > UNBIASED_TOL {
                    return Err(Error::UnsupportedDimension { dim, reason: "bases are not mutually unbiased" });
                }
            }
        }
        Ok(Self { dim, bases })
    }

    /// computational + Fourier, available for every d ≥ 2.
    pub fn standard_pair(d: usize) -> Result<Self> {
        Self::new(vec![computational_basis(d)?, fourier_basis(d)?])
    }

    /// The richest set available: all d+1 bases for prime d, otherwise the
    /// computational/Fourier pair.
    pub fn best_available(d: usize) -> Result<Self> {
        if is_prime(d) && d <= MAX_PRIME_D {
            prime_d_mubs(d)
        } else {
            Self::standard_pair(d)
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[OrthonormalBasis] {
        &self.bases
    }

    pub fn basis(&self, k: usize) -> &OrthonormalBasis {
        &self.bases[k]
    }

    /// First `n` members.
    pub fn truncated(&self, n: usize) -> Self {
        Self { dim: self.dim, bases: self.bases[..n.min(self.bases.len())].to_vec() }
    }

    pub fn pair(&self, i: usize, j: usize) -> Result<MubPair> {
        MubPair::new(self.bases[i].clone(), self.bases[j].clone())
    }
}

/// Nondegenerate observable Σ_i λ_i |v_i⟩⟨v_i|.
#[derive(Clone, Debug, Serialize)]
pub struct Observable {
    basis: OrthonormalBasis,
    eigenvalues: Vec<f64>,
}

impl Observable {
    pub fn new(basis: OrthonormalBasis, eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: eigenvalues.len() });
        }
        let mut sorted = eigenvalues.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DegenerateSpectrum);
        }
        Ok(Self { basis, eigenvalues })
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let u = self.basis.as_matrix();
        let diag = ComplexMatrix::from_real_diagonal(&self.eigenvalues);
        u.matmul(&diag).matmul(&u.adjoint())
    }
}

pub fn computational_basis(d: usize) -> Result<OrthonormalBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    OrthonormalBasis::new("computational", ComplexMatrix::identity(d))
}

/// Fourier basis |j̄⟩ = d^{-1/2} Σ_k e^{i2πkj/d} |k⟩.
pub fn fourier_basis(d: usize) -> Result<OrthonormalBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let f = ComplexMatrix::from_fn(d, d, |k, j| {
        C64::from_polar(norm, 2.0 * PI * ((k * j) % d) as f64 / d as f64)
    });
    OrthonormalBasis::new("fourier", f)
}

/// Eigenbases of σ_z, σ_x, σ_y, in that order. The positive-eigenvalue
/// vector comes first in each.
pub fn qubit_pauli_mubs() -> MubSet {
    let s = FRAC_1_SQRT_2;
    let r = |x: f64| C64::new(x, 0.0);
    let z = ComplexMatrix::identity(2);
    let x = ComplexMatrix::from_row_major(2, 2, vec![r(s), r(s), r(s), r(-s)]).unwrap();
    let y = ComplexMatrix::from_row_major(2, 2, vec![r(s), r(s), C64::new(0.0, s), C64::new(0.0, -s)]).unwrap();
    MubSet::new(vec![
        OrthonormalBasis::new("z", z).unwrap(),
        OrthonormalBasis::new("x", x).unwrap(),
        OrthonormalBasis::new("y", y).unwrap(),
    ])
    .expect("Pauli eigenbases are mutually unbiased")
}

pub const MAX_PRIME_D: usize = 13;

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// The complete set of d+1 MUBs for prime d ≤ 13.
///
/// Order: computational, then |v^k_j⟩ = d^{-1/2} Σ_n ω^{k n² + j n} |n⟩ for
/// k = 0..d-1 (k = 0 is the Fourier basis). d = 2 returns the Pauli set.
pub fn prime_d_mubs(d: usize) -> Result<MubSet> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if !is_prime(d) {
        return Err(Error::UnsupportedDimension { dim: d, reason: "complete MUB sets are built for prime d only" });
    }
    if d > MAX_PRIME_D {
        return Err(Error::UnsupportedDimension { dim: d, reason: "prime d above 13" });
    }
    if d == 2 {
        return Ok(qubit_pauli_mubs());
    }
    let norm = 1.0 / (d as f64).sqrt();
    let mut bases = vec![computational_basis(d)?];
    for k in 0..d {
        let m = ComplexMatrix::from_fn(d, d, |n, j| {
            let exponent = (k * n * n + j * n) % d;
            C64::from_polar(norm, 2.0 * PI * exponent as f64 / d as f64)
        });
        let label = if k == 0 { "fourier".to_string() } else { format!("quadratic-{k}") };
        bases.push(OrthonormalBasis::new(label, m)?);
    }
    MubSet::new(bases)
}

pub fn rotate_basis(b: &OrthonormalBasis, unitary: &ComplexMatrix) -> Result<OrthonormalBasis> {
    if unitary.rows() != b.dim() || !unitary.is_square() {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: unitary.rows() });
    }
    let dev = unitary.unitarity_deviation();
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation: dev });
    }
    OrthonormalBasis::new(b.label(), unitary.matmul(b.as_matrix()))
}

/// Observable with eigenvalues 0, 1, …, d-1 in basis order.
pub fn linear_observable(b: &OrthonormalBasis) -> Observable {
    let eigenvalues = (0..b.dim()).map(|j| j as f64).collect();
    Observable::new(b.clone(), eigenvalues).expect("distinct by construction")
}

/// exp(−iθ(cosφ σ_x + sinφ σ_y)/2): rotates the Bloch z axis to polar angle θ.
pub fn qubit_rotation(theta: f64, phi: f64) -> ComplexMatrix {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    // -i sin(θ/2) (cosφ σx + sinφ σy)
    let off_upper = C64::new(0.0, -s) * C64::from_polar(1.0, -phi);
    let off_lower = C64::new(0.0, -s) * C64::from_polar(1.0, phi);
    ComplexMatrix::from_row_major(2, 2, vec![C64::new(c, 0.0), off_upper, off_lower, C64::new(c, 0.0)])
        .expect("2x2")
}

/// σ_x, σ_y, σ_z.
pub fn pauli_matrices() -> [ComplexMatrix; 3] {
    let (o, l, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    [
        ComplexMatrix::from_row_major(2, 2, vec![o, l, l, o]).expect("2x2"),
        ComplexMatrix::from_row_major(2, 2, vec![o, -i, i, o]).expect("2x2"),
        ComplexMatrix::from_row_major(2, 2, vec![l, o, o, -l]).expect("2x2"),
    ]
}

/// Eigenbasis of n·σ for a unit Bloch vector n, +1 eigenvector first.
pub fn qubit_direction_basis(label: impl Into<String>, n: [f64; 3]) -> Result<OrthonormalBasis> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::OutOfRange { name: "direction norm", value: norm, min: 1.0, max: 1.0 });
    }
    let theta = n[2].clamp(-1.0, 1.0).acos();
    let phi = n[1].atan2(n[0]);
    // R(θ, φ) takes ẑ to (sinθ sinφ, −sinθ cosφ, cosθ); shift φ so it lands on n
    let u = qubit_rotation(theta, phi + PI / 2.0);
    OrthonormalBasis::new(label, u)
}
