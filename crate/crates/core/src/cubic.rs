//! The invariant symmetric cubic form on su(n),
//! `sigma(X, Y, Z) = i (tr(XYZ) + tr(XZY))`, and the symmetric 2-tensors
//! `h_v = sigma(v, ., .)` obtained by contracting a Killing generator into it.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lie::{AlgebraElement, Basis, BasisIndex, OrthonormalBasis, DEFAULT_TOLERANCE};
use crate::matrix::Matrix;
use crate::scalar::{max_abs, Scalar};

/// `sigma(X, Y, Z)`.
pub fn sigma<S: Scalar>(
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
    z: &AlgebraElement<S>,
) -> Result<S> {
    sigma_with_residue(x, y, z).map(|(v, _)| v)
}

/// `sigma` together with the imaginary residue of `i (tr(XYZ) + tr(XZY))`,
/// which vanishes on su(n).
pub fn sigma_with_residue<S: Scalar>(
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
    z: &AlgebraElement<S>,
) -> Result<(S, S)> {
    x.matrix().check_same_dim(y.matrix())?;
    x.matrix().check_same_dim(z.matrix())?;
    let t = x.matrix().trace_of_product(&y.matrix().anticommutator(z.matrix()));
    // i * (re + i im) = -im + i re
    Ok((-t.im, t.re.abs()))
}

/// `sigma` with every argument re-validated as an element of su(n).
pub fn sigma_strict(x: &Matrix<f64>, y: &Matrix<f64>, z: &Matrix<f64>) -> Result<f64> {
    let x = AlgebraElement::new(x.clone())?;
    let y = AlgebraElement::new(y.clone())?;
    let z = AlgebraElement::new(z.clone())?;
    sigma(&x, &y, &z)
}

/// `sigma(X, Y, Z)` given the precomputed anticommutator `YZ + ZY`.
#[inline]
pub fn sigma_with_anticommutator<S: Scalar>(x: &Matrix<S>, yz_plus_zy: &Matrix<S>) -> S {
    -x.trace_of_product(yz_plus_zy).im
}

/// A symmetric bilinear form on su(n) stored by its values on basis pairs,
/// `coeffs[i][j] = h(F_i, F_j)`, together with the basis inverse Gram weights.
/// For the orthonormal basis the weights are one and `coeffs` is the usual
/// coefficient matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTwoTensor<S: Scalar = f64> {
    n: usize,
    dim: usize,
    coeffs: Vec<S>,
    weights: Vec<S>,
}

impl<S: Scalar> SymTwoTensor<S> {
    /// Builds a tensor from a row-major coefficient matrix in the orthonormal
    /// convention (unit weights). Fails unless the matrix is symmetric.
    pub fn from_orthonormal_coeffs(n: usize, coeffs: Vec<S>) -> Result<Self> {
        let dim = n * n - 1;
        Self::with_weights(n, coeffs, vec![S::one(); dim])
    }

    pub fn with_weights(n: usize, coeffs: Vec<S>, weights: Vec<S>) -> Result<Self> {
        let dim = weights.len();
        if coeffs.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: coeffs.len(),
                right: dim * dim,
            });
        }
        for i in 0..dim {
            for j in i + 1..dim {
                let d = (coeffs[i * dim + j].clone() - coeffs[j * dim + i].clone()).abs();
                if d.to_f64() > DEFAULT_TOLERANCE || (S::EXACT && !d.is_zero()) {
                    return Err(Error::Consistency(format!("coefficients not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            n,
            dim,
            coeffs,
            weights,
        })
    }

    pub fn zero(basis: &Basis<S>) -> Self {
        Self {
            n: basis.n(),
            dim: basis.len(),
            coeffs: vec![S::zero(); basis.len() * basis.len()],
            weights: basis.inv_gram().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of basis directions, `n^2 - 1`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.coeffs[i * self.dim + j]
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn diagonal(&self) -> Vec<S> {
        (0..self.dim).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn max_off_diagonal(&self) -> S {
        max_abs(
            (0..self.dim)
                .flat_map(|i| (0..self.dim).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| self.get(i, j).clone()),
        )
    }

    /// Exactly diagonal for exact scalars; within `tol` otherwise.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let off = self.max_off_diagonal();
        if S::EXACT {
            off.is_zero()
        } else {
            off.to_f64() <= tol
        }
    }

    /// Coefficients in an orthonormal frame, `h(F_i, F_j) sqrt(w_i w_j)`,
    /// evaluated in `f64`.
    pub fn orthonormal_coeffs_f64(&self) -> Vec<f64> {
        let w: Vec<f64> = self.weights.iter().map(|w| w.to_f64().sqrt()).collect();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.push(self.get(i, j).to_f64() * w[i] * w[j]);
            }
        }
        out
    }
}

/// `h_v(F_i, F_j) = sigma(v, F_i, F_j)` for every pair of basis elements.
pub fn contract_h<S: Scalar>(v: &AlgebraElement<S>, basis: &Basis<S>) -> Result<SymTwoTensor<S>> {
    if v.dim() != basis.n() {
        return Err(Error::DimensionMismatch {
            left: v.dim(),
            right: basis.n(),
        });
    }
    let dim = basis.len();
    let rows: Vec<Vec<S>> = (0..dim)
        .into_par_iter()
        .map(|i| {
            let fi = basis.element(i).matrix();
            (0..dim)
                .map(|j| {
                    if j < i {
                        return S::zero();
                    }
                    let ac = fi.anticommutator(basis.element(j).matrix());
                    sigma_with_anticommutator(v.matrix(), &ac)
                })
                .collect()
        })
        .collect();
    let mut coeffs = vec![S::zero(); dim * dim];
    for i in 0..dim {
        for j in i..dim {
            coeffs[i * dim + j] = rows[i][j].clone();
            coeffs[j * dim + i] = rows[i][j].clone();
        }
    }
    Ok(SymTwoTensor {
        n: basis.n(),
        dim,
        coeffs,
        weights: basis.inv_gram().to_vec(),
    })
}

/// The metric trace `sum_i h(F_i, F_i) w_i`.
pub fn metric_trace<S: Scalar>(h: &SymTwoTensor<S>) -> S {
    (0..h.dim).fold(S::zero(), |acc, i| acc + h.get(i, i).clone() * h.weights[i].clone())
}

/// Closed-form diagonal of `h_eta` in the orthonormal basis: 2 on `T_p`
/// (p < n-1), `-2(n-2)` on `T_{n-1}`, 2 on off-diagonal pairs with `l < n`
/// and `-(n-2)` on pairs with `l = n`.
pub fn h_eta_diagonal_closed_form(n: usize, idx: BasisIndex) -> i64 {
    let n = n as i64;
    match idx {
        BasisIndex::Torus(p) if (p as i64) < n - 1 => 2,
        BasisIndex::Torus(_) => -2 * (n - 2),
        BasisIndex::RealOff(_, l) | BasisIndex::ImagOff(_, l) if (l as i64) < n => 2,
        _ => -(n - 2),
    }
}

/// Cached coefficients `sigma(E_a, E_b, E_c)` over the orthonormal basis.
/// Dense `N^3` storage; about 2.5e5 entries at n = 8.
#[derive(Clone, Debug)]
pub struct CubicCoefficients {
    n: usize,
    dim: usize,
    values: Vec<f64>,
}

impl CubicCoefficients {
    pub fn build(basis: &OrthonormalBasis) -> Self {
        let dim = basis.len();
        let anticomm: Vec<Matrix<f64>> = (0..dim * dim)
            .into_par_iter()
            .map(|bc| {
                let (b, c) = (bc / dim, bc % dim);
                basis.element(b).matrix().anticommutator(basis.element(c).matrix())
            })
            .collect();
        let values = (0..dim * dim * dim)
            .into_par_iter()
            .map(|abc| {
                let a = abc / (dim * dim);
                sigma_with_anticommutator(basis.element(a).matrix(), &anticomm[abc % (dim * dim)])
            })
            .collect();
        Self {
            n: basis.n(),
            dim,
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.values[(a * self.dim + b) * self.dim + c]
    }

    /// `h_v` from the orthonormal coordinates of `v`.
    pub fn contract(&self, coords: &[f64]) -> SymTwoTensor<f64> {
        let dim = self.dim;
        let mut coeffs = vec![0.0; dim * dim];
        for (a, &x) in coords.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for bc in 0..dim * dim {
                coeffs[bc] += x * self.values[a * dim * dim + bc];
            }
        }
        SymTwoTensor {
            n: self.n,
            dim,
            coeffs,
            weights: vec![1.0; dim],
        }
    }

    /// Largest deviation from full symmetry over all index permutations.
    pub fn symmetry_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let v = self.get(a, b, c);
                    worst = worst
                        .max((v - self.get(b, a, c)).abs())
                        .max((v - self.get(a, c, b)).abs())
                        .max((v - self.get(c, b, a)).abs());
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_basis, eta, random_element};
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sigma_t1_cubed_vanishes() {
        let b = build_basis(3).unwrap();
        let t1 = b.element(0);
        assert!(sigma(t1, t1, t1).unwrap().abs() < 1e-15);
    }

    #[test]
    fn sigma_eta_on_last_torus_element() {
        for n in 3..=6 {
            let b = build_basis(n).unwrap();
            let t = b.get(BasisIndex::Torus(n - 1)).unwrap();
            let got = sigma(&eta(n).unwrap(), t, t).unwrap();
            assert!((got + 2.0 * (n as f64 - 2.0)).abs() < 1e-12, "n = {n}: {got}");
        }
    }

    #[test]
    fn sigma_is_real_and_cyclic_on_random_triples() {
        let b = build_basis(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = random_element(&b, &mut rng);
            let y = random_element(&b, &mut rng);
            let z = random_element(&b, &mut rng);
            let (v, residue) = sigma_with_residue(&x, &y, &z).unwrap();
            assert!(residue < 1e-10);
            assert!((v - sigma(&z, &x, &y).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn strict_mode_rejects_non_skew_input() {
        let h = Matrix::from_diagonal(vec![crate::matrix::real(1.0), crate::matrix::real(-1.0)]);
        let e = eta::<f64>(2).unwrap().into_matrix();
        assert!(matches!(sigma_strict(&h, &e, &e), Err(Error::NotInAlgebra(_))));
        assert!(sigma_strict(&e, &e, &e).is_ok());
    }

    #[test]
    fn sigma_dimension_mismatch() {
        let a = eta::<f64>(3).unwrap();
        let b = eta::<f64>(4).unwrap();
        assert!(sigma(&a, &a, &b).is_err());
    }

    #[test]
    fn h_eta_diagonal_values() {
        for n in 3..=6 {
            let basis = build_basis(n).unwrap();
            let h = contract_h(&eta(n).unwrap(), &basis).unwrap();
            assert!(h.max_off_diagonal() < 1e-10);
            for (a, idx) in basis.indices().iter().enumerate() {
                let want = h_eta_diagonal_closed_form(n, *idx) as f64;
                assert!((h.get(a, a) - want).abs() < 1e-10, "n = {n} {idx}");
            }
        }
    }

    #[test]
    fn h_eta_exact_on_integral_basis() {
        let n = 5;
        let basis = Basis::<BigRational>::integral(n).unwrap();
        let h = contract_h(&eta(n).unwrap(), &basis).unwrap();
        assert!(h.is_diagonal(0.0));
        for (a, idx) in basis.indices().iter().enumerate() {
            // h(E_a, E_a) = h(F_a, F_a) / <F_a, F_a>
            let orth = h.get(a, a).clone() * h.weights()[a].clone();
            assert_eq!(orth, BigRational::from_i64(h_eta_diagonal_closed_form(n, *idx)));
        }
    }

    #[test]
    fn contraction_of_zero_is_zero() {
        let basis = build_basis(4).unwrap();
        let h = contract_h(&AlgebraElement::zero(4), &basis).unwrap();
        assert!(h.coeffs().iter().all(|c| *c == 0.0));
    }

    #[test]
    fn trace_of_identity_coeffs() {
        let n = 3;
        let mut coeffs = vec![0.0; 64];
        for i in 0..8 {
            coeffs[i * 8 + i] = 1.0;
        }
        let h = SymTwoTensor::from_orthonormal_coeffs(n, coeffs).unwrap();
        assert_eq!(metric_trace(&h), 8.0);
    }

    #[test]
    fn asymmetric_coeffs_rejected() {
        let mut coeffs = vec![0.0; 9];
        coeffs[1] = 1.0;
        assert!(SymTwoTensor::from_orthonormal_coeffs(2, coeffs).is_err());
    }

    #[test]
    fn h_eta_is_trace_free() {
        for n in 3..=8 {
            let basis = build_basis(n).unwrap();
            let h = contract_h(&eta(n).unwrap(), &basis).unwrap();
            assert!(metric_trace(&h).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn h_v_is_trace_free_for_random_v() {
        let basis = build_basis(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let v = random_element(&basis, &mut rng);
            let h = contract_h(&v, &basis).unwrap();
            assert!(metric_trace(&h).abs() < 1e-9);
        }
    }

    #[test]
    fn cached_coefficients_agree_with_direct_contraction() {
        let basis = build_basis(4).unwrap();
        let cache = CubicCoefficients::build(&basis);
        assert!(cache.symmetry_defect() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let v = random_element(&basis, &mut rng);
        let direct = contract_h(&v, &basis).unwrap();
        let cached = cache.contract(&basis.coordinates(&v).unwrap());
        let diff = direct
            .coeffs()
            .iter()
            .zip(cached.coeffs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-10);
    }
}
