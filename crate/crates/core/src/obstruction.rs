//! Koiso's second-order obstruction
//! `I(h) = 2 lambda <h_i^k h_kj, h_ij> + 3 <nabla_i nabla_j h_kl, h_ij h_kl> - 6 <nabla_i nabla_j h_kl, h_ik h_jl>`
//! for `h = h_v`, evaluated per unit volume at the identity.
//!
//! With `sigma` parallel, `nabla_i nabla_j h_kl = sigma([E_i,[E_j,v]]/4, E_k, E_l)`.
//! In a basis `F_a` with inverse Gram weights `w_a` (all one when orthonormal)
//! every contraction picks up one weight per summed index, so the same code
//! runs in `f64` and in exact rationals.

use rayon::prelude::*;
use serde::Serialize;

use crate::cubic::{contract_h, sigma_with_anticommutator, SymTwoTensor};
use crate::error::{Error, Result};
use crate::lie::{bracket_unchecked, eta, AlgebraElement, Basis, OrthonormalBasis};
use crate::matrix::{Matrix, SparseMatrix};
use crate::scalar::Scalar;
use crate::weyl::{zero_set_classify, ZeroSetReport};

/// Relative tolerance for matching the closed forms in floating point.
pub const CLOSED_FORM_RTOL: f64 = 1e-8;

/// How the Hessian terms are contracted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ContractionPath {
    /// Uses only the diagonal of `h`; requires `h` diagonal in the basis.
    /// `O(N^2)` bracket evaluations.
    #[default]
    Diagonal,
    /// The literal quadruple sum over all basis indices, `O(N^4)`.
    Full,
}

/// `<h_i^k h_kj, h_ij> = tr(h^3)` in an orthonormal frame.
pub fn term_cubic<S: Scalar>(h: &SymTwoTensor<S>) -> S {
    let dim = h.dim();
    let w = h.weights();
    let mut acc = S::zero();
    for a in 0..dim {
        for b in 0..dim {
            let hab = h.get(a, b);
            if hab.is_zero() {
                continue;
            }
            let left = hab.clone() * w[a].clone() * w[b].clone();
            for c in 0..dim {
                let hbc = h.get(b, c);
                if hbc.is_zero() {
                    continue;
                }
                let hca = h.get(c, a);
                if hca.is_zero() {
                    continue;
                }
                acc = acc + left.clone() * hbc.clone() * hca.clone() * w[c].clone();
            }
        }
    }
    acc
}

fn double_bracket<S: Scalar>(basis: &Basis<S>, i: usize, j: usize, v: &AlgebraElement<S>) -> Matrix<S> {
    bracket_unchecked(basis.element(i), &bracket_unchecked(basis.element(j), v)).into_matrix()
}

fn check_dim<S: Scalar>(basis: &Basis<S>, v: &AlgebraElement<S>) -> Result<()> {
    if v.dim() == basis.n() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: v.dim(),
            right: basis.n(),
        })
    }
}

fn require_diagonal<S: Scalar>(h: &SymTwoTensor<S>) -> Result<()> {
    if h.is_diagonal(1e-10) {
        Ok(())
    } else {
        Err(Error::NotDiagonal {
            max_off_diagonal: h.max_off_diagonal().to_f64(),
        })
    }
}

/// The two Hessian contractions
/// `(<nabla_i nabla_j h_kl, h_ij h_kl>, <nabla_i nabla_j h_kl, h_ik h_jl>)`.
pub fn hessian_terms<S: Scalar>(
    basis: &Basis<S>,
    v: &AlgebraElement<S>,
    path: ContractionPath,
) -> Result<(S, S)> {
    check_dim(basis, v)?;
    let h = contract_h(v, basis)?;
    match path {
        ContractionPath::Diagonal => {
            require_diagonal(&h)?;
            Ok((hess_a_diagonal(basis, v, &h), hess_b_diagonal(basis, v, &h)))
        }
        ContractionPath::Full => Ok(hessian_terms_full(basis, v, &h)),
    }
}

pub fn term_hess_a<S: Scalar>(basis: &Basis<S>, v: &AlgebraElement<S>, path: ContractionPath) -> Result<S> {
    check_dim(basis, v)?;
    let h = contract_h(v, basis)?;
    match path {
        ContractionPath::Diagonal => {
            require_diagonal(&h)?;
            Ok(hess_a_diagonal(basis, v, &h))
        }
        ContractionPath::Full => Ok(hessian_terms_full(basis, v, &h).0),
    }
}

pub fn term_hess_b<S: Scalar>(basis: &Basis<S>, v: &AlgebraElement<S>, path: ContractionPath) -> Result<S> {
    check_dim(basis, v)?;
    let h = contract_h(v, basis)?;
    match path {
        ContractionPath::Diagonal => {
            require_diagonal(&h)?;
            Ok(hess_b_diagonal(basis, v, &h))
        }
        ContractionPath::Full => Ok(hessian_terms_full(basis, v, &h).1),
    }
}

/// Orthonormal diagonal value `h(E_i, E_i) = h(F_i, F_i) w_i`.
fn orth_diag<S: Scalar>(h: &SymTwoTensor<S>, i: usize) -> S {
    h.get(i, i).clone() * h.weights()[i].clone()
}

// sum_{i,k} 1/4 sigma([E_i,[E_i,v]], E_k, E_k) H_ii H_kk
fn hess_a_diagonal<S: Scalar>(basis: &Basis<S>, v: &AlgebraElement<S>, h: &SymTwoTensor<S>) -> S {
    let dim = basis.len();
    // W = sum_i H_ii [E_i,[E_i,v]] = sum_i H_ii w_i [F_i,[F_i,v]]
    let mut weighted = Matrix::zeros(basis.n());
    for i in 0..dim {
        let hi = orth_diag(h, i);
        if hi.is_zero() {
            continue;
        }
        let coef = hi * basis.weight(i).clone();
        weighted = &weighted + &double_bracket(basis, i, i, v).scale_real(&coef);
    }
    let mut acc = S::zero();
    for k in 0..dim {
        let hk = orth_diag(h, k);
        if hk.is_zero() {
            continue;
        }
        let fk = basis.element(k).matrix();
        let ac = fk.anticommutator(fk);
        acc = acc + sigma_with_anticommutator(&weighted, &ac) * basis.weight(k).clone() * hk;
    }
    acc * S::ratio(1, 4)
}

// sum_{i,j} 1/4 sigma([E_i,[E_j,v]], E_i, E_j) H_ii H_jj
fn hess_b_diagonal<S: Scalar>(basis: &Basis<S>, v: &AlgebraElement<S>, h: &SymTwoTensor<S>) -> S {
    let dim = basis.len();
    let total = (0..dim)
        .into_par_iter()
        .map(|i| {
            let hi = orth_diag(h, i);
            if hi.is_zero() {
                return S::zero();
            }
            let fi = basis.element(i).matrix();
            let mut acc = S::zero();
            for j in 0..dim {
                let hj = orth_diag(h, j);
                if hj.is_zero() {
                    continue;
                }
                let m = double_bracket(basis, i, j, v);
                let ac = fi.anticommutator(basis.element(j).matrix());
                let s = sigma_with_anticommutator(&m, &ac);
                if !s.is_zero() {
                    acc = acc + s * basis.weight(i).clone() * basis.weight(j).clone() * hj;
                }
            }
            acc * hi
        })
        .reduce(S::zero, |a, b| a + b);
    total * S::ratio(1, 4)
}

// The literal quadruple sums, sharing sigma(M_ij, F_k, F_l) between both terms.
fn hessian_terms_full<S: Scalar>(basis: &Basis<S>, v: &AlgebraElement<S>, h: &SymTwoTensor<S>) -> (S, S) {
    let dim = basis.len();
    let w = basis.inv_gram();
    let anticomm: Vec<SparseMatrix<S>> = (0..dim * dim)
        .into_par_iter()
        .map(|kl| {
            let (k, l) = (kl / dim, kl % dim);
            SparseMatrix::from_dense(&basis.element(k).matrix().anticommutator(basis.element(l).matrix()))
        })
        .collect();
    let (a, b) = (0..dim)
        .into_par_iter()
        .map(|i| {
            let mut acc_a = S::zero();
            let mut acc_b = S::zero();
            for j in 0..dim {
                let m = double_bracket(basis, i, j, v);
                let wij = w[i].clone() * w[j].clone();
                for k in 0..dim {
                    for l in 0..dim {
                        // sigma(M, F_k, F_l) = -Im tr(M {F_k, F_l}); anticomm is sparse.
                        let s = -anticomm[k * dim + l].trace_of_product(&m).im;
                        let weight = wij.clone() * w[k].clone() * w[l].clone();
                        let sw = s * weight;
                        acc_a = acc_a + sw.clone() * h.get(i, j).clone() * h.get(k, l).clone();
                        acc_b = acc_b + sw * h.get(i, k).clone() * h.get(j, l).clone();
                    }
                }
            }
            (acc_a, acc_b)
        })
        .reduce(|| (S::zero(), S::zero()), |x, y| (x.0 + y.0, x.1 + y.1));
    let quarter = S::ratio(1, 4);
    (a * quarter.clone(), b * quarter)
}

/// Closed forms for `h_eta` on SU(n), per unit volume.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForms {
    /// `2(n-1)(n-2)(12-n^2)`
    pub cubic: i64,
    /// `(n-2)^2 (n-1) n (n+2)`
    pub hess_a: i64,
    /// `-hess_a / 2`, always an integer since `(n-2)^2 n` is even.
    pub hess_b: i64,
    /// `4 n^3 (n-1)(n-2)`
    pub total: i64,
}

pub fn closed_forms(n: usize) -> ClosedForms {
    let n = n as i64;
    let hess_a = (n - 2) * (n - 2) * (n - 1) * n * (n + 2);
    ClosedForms {
        cubic: 2 * (n - 1) * (n - 2) * (12 - n * n),
        hess_a,
        hess_b: -hess_a / 2,
        total: 4 * n * n * n * (n - 1) * (n - 2),
    }
}

/// The three terms of the obstruction, their total and the closed forms
/// they are compared against (the closed forms are those of `v = eta`).
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport<S: Scalar = f64> {
    pub n: usize,
    pub lambda: S,
    pub path: ContractionPath,
    pub term_cubic: S,
    pub term_hess_a: S,
    pub term_hess_b: S,
    pub i_total: S,
    pub closed: ClosedForms,
    pub match_cubic: bool,
    pub match_hess_a: bool,
    pub match_hess_b: bool,
    pub match_total: bool,
}

impl<S: Scalar> ObstructionReport<S> {
    pub fn all_match(&self) -> bool {
        self.match_cubic && self.match_hess_a && self.match_hess_b && self.match_total
    }
}

/// Evaluates `I(h_v)` per unit volume.
pub fn koiso_i<S: Scalar>(
    basis: &Basis<S>,
    v: &AlgebraElement<S>,
    lambda: S,
    path: ContractionPath,
) -> Result<ObstructionReport<S>> {
    check_dim(basis, v)?;
    let h = contract_h(v, basis)?;
    let cubic = term_cubic(&h);
    let (a, b) = match path {
        ContractionPath::Diagonal => {
            require_diagonal(&h)?;
            (hess_a_diagonal(basis, v, &h), hess_b_diagonal(basis, v, &h))
        }
        ContractionPath::Full => hessian_terms_full(basis, v, &h),
    };
    let total = S::from_i64(2) * lambda.clone() * cubic.clone() + S::from_i64(3) * a.clone()
        - S::from_i64(6) * b.clone();
    let closed = closed_forms(basis.n());
    let matches = |x: &S, target: i64| x.close_to(&S::from_i64(target), CLOSED_FORM_RTOL);
    Ok(ObstructionReport {
        n: basis.n(),
        match_cubic: matches(&cubic, closed.cubic),
        match_hess_a: matches(&a, closed.hess_a),
        match_hess_b: matches(&b, closed.hess_b),
        match_total: matches(&total, closed.total),
        lambda,
        path,
        term_cubic: cubic,
        term_hess_a: a,
        term_hess_b: b,
        i_total: total,
        closed,
    })
}

/// `I(h_eta)` on SU(n) with `lambda = n/2`, in the orthonormal basis.
pub fn koiso_i_eta(n: usize, path: ContractionPath) -> Result<ObstructionReport<f64>> {
    let basis = OrthonormalBasis::orthonormal(n)?;
    koiso_i(&basis, &eta(n)?, n as f64 / 2.0, path)
}

/// Same in exact rational arithmetic on the integral basis.
pub fn koiso_i_eta_exact(n: usize, path: ContractionPath) -> Result<ObstructionReport<num_rational::BigRational>> {
    use num_rational::BigRational;
    let basis = Basis::<BigRational>::integral(n)?;
    koiso_i(&basis, &eta(n)?, BigRational::ratio(n as i64, 2), path)
}

/// Third variation of Perelman's nu-entropy along `h_eta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NuThirdVariation {
    pub n: usize,
    /// Manifold dimension `n^2 - 1`.
    pub m: usize,
    /// `tau = 1/(2 lambda) = 1/n`.
    pub tau: f64,
    /// `-tau / (2 (4 pi tau)^{m/2})`.
    pub coefficient: f64,
    pub i_per_vol: f64,
    /// `coefficient * i_per_vol`; times `Vol(SU_n)` this is the third derivative.
    pub product: f64,
    /// A nonzero third derivative means the metric is not a local maximum of
    /// nu, hence dynamically unstable under Ricci flow.
    pub unstable: bool,
}

pub fn nu_coefficient(m: usize, tau: f64) -> f64 {
    -tau / (2.0 * (4.0 * std::f64::consts::PI * tau).powf(m as f64 / 2.0))
}

pub fn nu_third_variation(n: usize) -> Result<NuThirdVariation> {
    if n < 3 {
        return Err(Error::InvalidDimension {
            n,
            reason: "SU(n) has no Einstein deformations for n < 3",
        });
    }
    let m = n * n - 1;
    let tau = 1.0 / n as f64;
    let coefficient = nu_coefficient(m, tau);
    let i_per_vol = koiso_i_eta(n, ContractionPath::Diagonal)?.i_total;
    let product = coefficient * i_per_vol;
    Ok(NuThirdVariation {
        n,
        m,
        tau,
        coefficient,
        i_per_vol,
        product,
        unstable: product != 0.0,
    })
}

/// Which deformation directions survive the second-order obstruction.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Unobstructed {
    /// The obstruction map has no nontrivial zeros and `I(h_eta) != 0`.
    None,
    /// Only the orbit of `span{(Lambda, 0), (0, Lambda)}` can escape.
    LambdaPlaneOrbit { lambda_diagonal: Vec<i8> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructedDirections {
    pub n: usize,
    pub i_per_vol: f64,
    pub all_obstructed: bool,
    pub unobstructed: Unobstructed,
    pub zero_set: ZeroSetReport,
    pub summary: String,
}

pub fn obstructed_directions_report(n: usize) -> Result<ObstructedDirections> {
    if n < 3 {
        return Err(Error::InvalidDimension {
            n,
            reason: "SU(n) has no Einstein deformations for n < 3",
        });
    }
    let report = koiso_i_eta(n, ContractionPath::Diagonal)?;
    let zero_set = zero_set_classify(n)?;
    let nonzero = report.i_total.abs() > CLOSED_FORM_RTOL;
    let (all_obstructed, unobstructed, summary) = match &zero_set.lambda_diagonal {
        None if nonzero => (
            true,
            Unobstructed::None,
            format!("SU({n}): all infinitesimal Einstein deformations are obstructed at second order"),
        ),
        None => (
            false,
            Unobstructed::None,
            format!("SU({n}): obstruction vanishes on h_eta; inconclusive"),
        ),
        Some(diag) => (
            false,
            Unobstructed::LambdaPlaneOrbit {
                lambda_diagonal: diag.clone(),
            },
            format!(
                "SU({n}): all deformations outside the G-orbit of span{{(Lambda,0),(0,Lambda)}} are obstructed"
            ),
        ),
    };
    Ok(ObstructedDirections {
        n,
        i_per_vol: report.i_total,
        all_obstructed,
        unobstructed,
        zero_set,
        summary,
    })
}
