//! The Lie algebra su(n) as traceless skew-Hermitian matrices.
//!
//! The inner product is `<A, B> = -tr(AB)`. Two bases are available:
//! [`Basis::orthonormal`] (the default, over `f64`) and [`Basis::integral`],
//! which drops the `1/sqrt(k(k+1))` and `1/sqrt(2)` prefactors so that every
//! entry is a Gaussian integer. The integral basis is orthogonal but not
//! normalized; its inverse Gram weights are carried alongside and every
//! contraction in the crate inserts them.

use std::fmt;

use num_complex::{Complex, Complex64};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{expm, i_unit, real, Matrix};
use crate::scalar::Scalar;

/// Absolute tolerance for membership checks on unit-normalized quantities.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// An element of su(n): a traceless skew-Hermitian `n x n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<S: Scalar = f64>(Matrix<S>);

impl<S: Scalar> AlgebraElement<S> {
    /// Validates membership in su(n) at [`DEFAULT_TOLERANCE`].
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(matrix: Matrix<S>, tol: f64) -> Result<Self> {
        let skew = matrix.skew_hermitian_defect();
        if skew > tol {
            return Err(Error::NotInAlgebra(format!("skew-Hermitian defect {skew:e}")));
        }
        let tr = matrix.trace();
        let tr = tr.re.to_f64().hypot(tr.im.to_f64());
        if tr > tol {
            return Err(Error::NotInAlgebra(format!("trace {tr:e}")));
        }
        Ok(Self(matrix))
    }

    /// Wraps a matrix without checking; for hot loops that only combine
    /// algebra elements by brackets and linear combinations.
    pub fn from_matrix_unchecked(matrix: Matrix<S>) -> Self {
        Self(matrix)
    }

    pub fn zero(n: usize) -> Self {
        Self(Matrix::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self(self.0.scale_real(factor))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn neg(&self) -> Self {
        Self(-&self.0)
    }

    /// Largest entry of `self - other` in absolute value.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.0 - &other.0).max_abs_entry()
    }

    pub fn to_f64(&self) -> AlgebraElement<f64> {
        AlgebraElement(self.0.to_f64())
    }
}

fn check_dims<S: Scalar>(a: &AlgebraElement<S>, b: &AlgebraElement<S>) -> Result<()> {
    a.0.check_same_dim(&b.0)
}

/// `<A, B> = -Re tr(AB)`.
pub fn inner<S: Scalar>(a: &AlgebraElement<S>, b: &AlgebraElement<S>) -> Result<S> {
    inner_with_residue(a, b).map(|(value, _)| value)
}

/// The inner product together with `|Im tr(AB)|`, which vanishes on su(n).
pub fn inner_with_residue<S: Scalar>(
    a: &AlgebraElement<S>,
    b: &AlgebraElement<S>,
) -> Result<(S, S)> {
    check_dims(a, b)?;
    let t = a.0.trace_of_product(&b.0);
    Ok((-t.re, t.im.abs()))
}

pub(crate) fn inner_unchecked<S: Scalar>(a: &AlgebraElement<S>, b: &AlgebraElement<S>) -> S {
    -a.0.trace_of_product(&b.0).re
}

/// The commutator `[A, B] = AB - BA`.
pub fn bracket<S: Scalar>(a: &AlgebraElement<S>, b: &AlgebraElement<S>) -> Result<AlgebraElement<S>> {
    check_dims(a, b)?;
    let out = bracket_unchecked(a, b);
    debug_assert!(out.0.skew_hermitian_defect() < 1e-6 * (1.0 + a.0.frobenius() * b.0.frobenius()));
    Ok(out)
}

pub(crate) fn bracket_unchecked<S: Scalar>(
    a: &AlgebraElement<S>,
    b: &AlgebraElement<S>,
) -> AlgebraElement<S> {
    AlgebraElement(a.0.commutator(&b.0))
}

/// `AB + BA`. Hermitian for skew-Hermitian inputs, but not traceless in
/// general, so it is returned as a plain matrix.
pub fn anticommutator<S: Scalar>(a: &AlgebraElement<S>, b: &AlgebraElement<S>) -> Result<Matrix<S>> {
    check_dims(a, b)?;
    Ok(a.0.anticommutator(&b.0))
}

/// Position of a basis element: `Torus(k)` is `T_k`, `RealOff(k, l)` is
/// `E^r(k, l)`, `ImagOff(k, l)` is `E^c(k, l)`. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisIndex {
    Torus(usize),
    RealOff(usize, usize),
    ImagOff(usize, usize),
}

impl BasisIndex {
    /// Validates the index ranges for su(n).
    pub fn validate(self, n: usize) -> Result<Self> {
        let ok = match self {
            BasisIndex::Torus(k) => (1..n).contains(&k),
            BasisIndex::RealOff(k, l) | BasisIndex::ImagOff(k, l) => k >= 1 && k < l && l <= n,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidDimension {
                n,
                reason: "basis index out of range",
            })
        }
    }

    /// `E^r({k, l})`: the unordered-pair lookup, sorting the indices first.
    pub fn real_pair(k: usize, l: usize) -> Self {
        BasisIndex::RealOff(k.min(l), k.max(l))
    }

    /// `E^c({k, l})`.
    pub fn imag_pair(k: usize, l: usize) -> Self {
        BasisIndex::ImagOff(k.min(l), k.max(l))
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisIndex::Torus(k) => write!(f, "T{k}"),
            BasisIndex::RealOff(k, l) => write!(f, "Er({k},{l})"),
            BasisIndex::ImagOff(k, l) => write!(f, "Ec({k},{l})"),
        }
    }
}

/// Canonical index order: `T_1..T_{n-1}`, then `E^r(k,l)` and `E^c(k,l)`,
/// each lexicographic in `(k, l)`.
pub fn canonical_indices(n: usize) -> Vec<BasisIndex> {
    let mut out = Vec::with_capacity(n * n - 1);
    out.extend((1..n).map(BasisIndex::Torus));
    for k in 1..=n {
        for l in k + 1..=n {
            out.push(BasisIndex::RealOff(k, l));
        }
    }
    for k in 1..=n {
        for l in k + 1..=n {
            out.push(BasisIndex::ImagOff(k, l));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Unit vectors; inverse Gram weights are all one.
    Orthonormal,
    /// Gaussian-integer entries; `<F_a, F_a>` is `k(k+1)` or `2`.
    Integral,
}

/// An orthogonal basis of su(n) in canonical order.
#[derive(Clone, Debug)]
pub struct Basis<S: Scalar = f64> {
    n: usize,
    indices: Vec<BasisIndex>,
    elements: Vec<AlgebraElement<S>>,
    inv_gram: Vec<S>,
    normalization: Normalization,
}

pub type OrthonormalBasis = Basis<f64>;

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidDimension {
            n,
            reason: "su(n) needs n >= 2",
        })
    } else {
        Ok(())
    }
}

/// The orthonormal basis `{T_k, E^r(k,l), E^c(k,l)}` of su(n).
pub fn build_basis(n: usize) -> Result<OrthonormalBasis> {
    Basis::orthonormal(n)
}

impl Basis<f64> {
    pub fn orthonormal(n: usize) -> Result<Self> {
        check_n(n)?;
        let indices = canonical_indices(n);
        let elements = indices
            .iter()
            .map(|&idx| {
                let scale = match idx {
                    BasisIndex::Torus(k) => 1.0 / ((k * (k + 1)) as f64).sqrt(),
                    _ => std::f64::consts::FRAC_1_SQRT_2,
                };
                integral_element::<f64>(n, idx).scale(&scale)
            })
            .collect();
        Ok(Self {
            n,
            inv_gram: vec![1.0; indices.len()],
            indices,
            elements,
            normalization: Normalization::Orthonormal,
        })
    }
}

/// Unnormalized basis element with Gaussian-integer entries.
fn integral_element<S: Scalar>(n: usize, idx: BasisIndex) -> AlgebraElement<S> {
    let mut m = Matrix::zeros(n);
    match idx {
        BasisIndex::Torus(k) => {
            for p in 0..k {
                m.set(p, p, i_unit());
            }
            m.set(k, k, Complex::new(S::zero(), S::from_i64(-(k as i64))));
        }
        BasisIndex::RealOff(k, l) => {
            m.set(k - 1, l - 1, real(S::one()));
            m.set(l - 1, k - 1, real(-S::one()));
        }
        BasisIndex::ImagOff(k, l) => {
            m.set(k - 1, l - 1, i_unit());
            m.set(l - 1, k - 1, i_unit());
        }
    }
    AlgebraElement(m)
}

impl<S: Scalar> Basis<S> {
    /// The orthogonal basis with Gaussian-integer entries and inverse Gram
    /// weights `1/(k(k+1))` on `T_k` and `1/2` on the off-diagonal elements.
    pub fn integral(n: usize) -> Result<Self> {
        check_n(n)?;
        let indices = canonical_indices(n);
        let elements = indices.iter().map(|&idx| integral_element(n, idx)).collect();
        let inv_gram = indices
            .iter()
            .map(|idx| match *idx {
                BasisIndex::Torus(k) => S::ratio(1, (k * (k + 1)) as i64),
                _ => S::ratio(1, 2),
            })
            .collect();
        Ok(Self {
            n,
            indices,
            elements,
            inv_gram,
            normalization: Normalization::Integral,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = n^2 - 1`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn elements(&self) -> &[AlgebraElement<S>] {
        &self.elements
    }

    pub fn element(&self, a: usize) -> &AlgebraElement<S> {
        &self.elements[a]
    }

    pub fn indices(&self) -> &[BasisIndex] {
        &self.indices
    }

    /// `1 / <F_a, F_a>`.
    pub fn inv_gram(&self) -> &[S] {
        &self.inv_gram
    }

    pub fn weight(&self, a: usize) -> &S {
        &self.inv_gram[a]
    }

    /// Canonical position of an index. Off-diagonal pairs are sorted, so
    /// `E^r(3, 1)` resolves to `E^r(1, 3)`.
    pub fn position(&self, idx: BasisIndex) -> Option<usize> {
        let idx = match idx {
            BasisIndex::RealOff(k, l) => BasisIndex::real_pair(k, l),
            BasisIndex::ImagOff(k, l) => BasisIndex::imag_pair(k, l),
            t => t,
        };
        idx.validate(self.n).ok()?;
        let n = self.n;
        let pair_offset = |k: usize, l: usize| {
            // Pairs (k', l') with k' < k come first: sum_{j<k} (n - j).
            let before: usize = (1..k).map(|j| n - j).sum();
            before + (l - k - 1)
        };
        let pairs = n * (n - 1) / 2;
        Some(match idx {
            BasisIndex::Torus(k) => k - 1,
            BasisIndex::RealOff(k, l) => n - 1 + pair_offset(k, l),
            BasisIndex::ImagOff(k, l) => n - 1 + pairs + pair_offset(k, l),
        })
    }

    pub fn get(&self, idx: BasisIndex) -> Option<&AlgebraElement<S>> {
        self.position(idx).map(|a| &self.elements[a])
    }

    /// Gram matrix `<F_a, F_b>`, row-major.
    pub fn gram(&self) -> Vec<S> {
        let mut out = Vec::with_capacity(self.len() * self.len());
        for a in &self.elements {
            for b in &self.elements {
                out.push(inner_unchecked(a, b));
            }
        }
        out
    }

    /// Coordinates `x_a` with `X = sum_a x_a F_a`.
    pub fn coordinates(&self, x: &AlgebraElement<S>) -> Result<Vec<S>> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: self.n,
            });
        }
        Ok(self
            .elements
            .iter()
            .zip(&self.inv_gram)
            .map(|(f, w)| inner_unchecked(x, f) * w.clone())
            .collect())
    }

    pub fn from_coordinates(&self, coords: &[S]) -> AlgebraElement<S> {
        let mut acc = Matrix::zeros(self.n);
        for (c, f) in coords.iter().zip(&self.elements) {
            if !c.is_zero() {
                acc = &acc + &f.0.scale_real(c);
            }
        }
        AlgebraElement(acc)
    }
}

/// `eta = i diag(1, ..., 1, -(n-1))`, equal to `sqrt(n(n-1)) T_{n-1}`.
pub fn eta<S: Scalar>(n: usize) -> Result<AlgebraElement<S>> {
    check_n(n)?;
    let mut diag = vec![i_unit::<S>(); n];
    diag[n - 1] = Complex::new(S::zero(), S::from_i64(-(n as i64 - 1)));
    Ok(AlgebraElement(Matrix::from_diagonal(diag)))
}

/// `sum_i [E_i, [E_i, X]]` over an orthonormal frame (inverse-Gram weighted
/// for the integral basis). Equals `-2n X` on su(n).
pub fn casimir_ad<S: Scalar>(basis: &Basis<S>, x: &AlgebraElement<S>) -> Result<AlgebraElement<S>> {
    if x.dim() != basis.n() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: basis.n(),
        });
    }
    let mut acc = Matrix::zeros(basis.n());
    for (f, w) in basis.elements().iter().zip(basis.inv_gram()) {
        let dd = bracket_unchecked(f, &bracket_unchecked(f, x));
        acc = &acc + &dd.0.scale_real(w);
    }
    Ok(AlgebraElement(acc))
}

/// Sparse structure constants: `[E_i, E_j] = sum_k c(i, j, k) E_k` in the
/// orthonormal basis.
#[derive(Clone, Debug)]
pub struct StructureTable {
    n: usize,
    dim: usize,
    // Sorted by (i, j, k).
    entries: Vec<((usize, usize, usize), f64)>,
}

/// Entries below this magnitude are treated as structural zeros.
const STRUCTURE_SPARSITY: f64 = 1e-13;

pub fn structure_table(basis: &OrthonormalBasis) -> StructureTable {
    let dim = basis.len();
    let mut entries = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            let br = bracket_unchecked(basis.element(i), basis.element(j));
            if br.is_zero() {
                continue;
            }
            for k in 0..dim {
                let c = inner_unchecked(&br, basis.element(k));
                if c.abs() > STRUCTURE_SPARSITY {
                    entries.push(((i, j, k), c));
                }
            }
        }
    }
    StructureTable {
        n: basis.n(),
        dim,
        entries,
    }
}

impl StructureTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.entries
            .binary_search_by(|(key, _)| key.cmp(&(i, j, k)))
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = ((usize, usize, usize), f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Largest violation of `c(i,j,k) = -c(j,i,k)` and of cyclic symmetry
    /// `c(i,j,k) = c(j,k,i)`.
    pub fn antisymmetry_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|&((i, j, k), c)| {
                let swap = (c + self.get(j, i, k)).abs();
                let cyc = (c - self.get(j, k, i)).abs();
                swap.max(cyc)
            })
            .fold(0.0, f64::max)
    }
}

/// A Gaussian-random element of su(n): standard normal coordinates in the
/// orthonormal basis.
pub fn random_element<R: Rng + ?Sized>(basis: &OrthonormalBasis, rng: &mut R) -> AlgebraElement {
    let coords: Vec<f64> = (0..basis.len()).map(|_| rng.sample(StandardNormal)).collect();
    basis.from_coordinates(&coords)
}

/// A random element of SU(n), `exp(X)` for a Gaussian `X` in su(n).
pub fn random_special_unitary<R: Rng + ?Sized>(basis: &OrthonormalBasis, rng: &mut R) -> Matrix<f64> {
    expm(random_element(basis, rng).matrix())
}

/// `U X U^†`.
pub fn conjugate(u: &Matrix<f64>, x: &AlgebraElement) -> AlgebraElement {
    AlgebraElement(u.matmul(x.matrix()).matmul(&u.adjoint()))
}

/// `i * A`: maps Hermitian matrices to skew-Hermitian ones.
pub fn times_i<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    m.scale(&i_unit())
}

impl<S: Scalar> fmt::Display for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0.to_f64();
        for p in 0..m.dim() {
            let row: Vec<String> = (0..m.dim())
                .map(|q| {
                    let z: &Complex64 = m.get(p, q);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
