//! Bi-invariant geometry of SU(n) at the identity and the verification that
//! `h_v = sigma(v~, ., .)` is an infinitesimal Einstein deformation.
//!
//! Curvature convention: `R(X,Y)Z = nabla_[X,Y] Z + nabla_Y nabla_X Z - nabla_X nabla_Y Z`,
//! `Rm(h)(X,Y) = sum_k h(R(X,E_k)Y, E_k)`. On left-invariant fields
//! `nabla_X Y = [X,Y]/2`, giving `R(X,Y)Z = [[X,Y],Z]/4` and Ricci `n/2`.
//! Everything is evaluated at the identity; the tensors involved are
//! invariant, so pointwise checks are global.

use rayon::prelude::*;
use serde::Serialize;

use crate::cubic::{contract_h, metric_trace, sigma_with_anticommutator, SymTwoTensor};
use crate::error::{Error, Result};
use crate::lie::{bracket_unchecked, inner_unchecked, AlgebraElement, Basis};
use crate::matrix::{Matrix, SparseMatrix};
use crate::scalar::{max_abs, Scalar};

/// Which invariant extension of a Lie algebra element is differentiated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Invariance {
    /// Left-invariant fields: `nabla_X Y = [X,Y]/2`.
    Left,
    /// Right-invariant fields: `nabla_X Y = -[X,Y]/2` at the identity.
    Right,
}

impl Invariance {
    pub const BOTH: [Invariance; 2] = [Invariance::Left, Invariance::Right];

    fn half<S: Scalar>(self) -> S {
        match self {
            Invariance::Left => S::ratio(1, 2),
            Invariance::Right => S::ratio(-1, 2),
        }
    }
}

/// The basis of su(n) together with the Einstein constant `lambda = n/2`.
#[derive(Clone, Debug)]
pub struct GeometryContext<S: Scalar = f64> {
    basis: Basis<S>,
    lambda: S,
}

impl<S: Scalar> GeometryContext<S> {
    pub fn new(basis: Basis<S>) -> Self {
        let lambda = S::ratio(basis.n() as i64, 2);
        Self { basis, lambda }
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    pub fn basis(&self) -> &Basis<S> {
        &self.basis
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }
}

fn check<S: Scalar>(a: &AlgebraElement<S>, b: &AlgebraElement<S>) -> Result<()> {
    a.matrix().check_same_dim(b.matrix())
}

/// `nabla_X Y = [X,Y]/2` on left-invariant fields.
pub fn connection<S: Scalar>(x: &AlgebraElement<S>, y: &AlgebraElement<S>) -> Result<AlgebraElement<S>> {
    connection_with(Invariance::Left, x, y)
}

pub fn connection_with<S: Scalar>(
    invariance: Invariance,
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
) -> Result<AlgebraElement<S>> {
    check(x, y)?;
    Ok(bracket_unchecked(x, y).scale(&invariance.half()))
}

/// `nabla_X nabla_Y xi~`, i.e. `[X,[Y,xi]]/4` for either invariance.
pub fn iterated_derivative<S: Scalar>(
    invariance: Invariance,
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
    xi: &AlgebraElement<S>,
) -> Result<AlgebraElement<S>> {
    connection_with(invariance, x, &connection_with(invariance, y, xi)?)
}

/// `R(X,Y)Z = [[X,Y],Z]/4`.
pub fn curvature<S: Scalar>(
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
    z: &AlgebraElement<S>,
) -> Result<AlgebraElement<S>> {
    check(x, y)?;
    check(x, z)?;
    Ok(curvature_unchecked(x, y, z))
}

fn curvature_unchecked<S: Scalar>(
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
    z: &AlgebraElement<S>,
) -> AlgebraElement<S> {
    bracket_unchecked(&bracket_unchecked(x, y), z).scale(&S::ratio(1, 4))
}

/// The curvature assembled term by term from the connection,
/// `nabla_[X,Y] Z + nabla_Y nabla_X Z - nabla_X nabla_Y Z`.
pub fn curvature_from_connection<S: Scalar>(
    invariance: Invariance,
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
    z: &AlgebraElement<S>,
) -> Result<AlgebraElement<S>> {
    check(x, y)?;
    check(x, z)?;
    // Right-invariant fields bracket with the opposite sign.
    let xy = match invariance {
        Invariance::Left => bracket_unchecked(x, y),
        Invariance::Right => bracket_unchecked(y, x),
    };
    let a = connection_with(invariance, &xy, z)?;
    let b = iterated_derivative(invariance, y, x, z)?;
    let c = iterated_derivative(invariance, x, y, z)?;
    Ok(a.add(&b).sub(&c))
}

/// Residual of the Killing-field identity `nabla^2_{X,Y} xi = R(xi,X)Y`, with
/// the second covariant derivative `nabla_X nabla_Y xi - nabla_{nabla_X Y} xi`
/// built from the connection. Returns the largest entry of the difference.
pub fn killing_identity_residual<S: Scalar>(
    xi: &AlgebraElement<S>,
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
) -> Result<f64> {
    let lhs = curvature(xi, x, y)?;
    let second = iterated_derivative(Invariance::Left, x, y, xi)?
        .sub(&connection(&connection(x, y)?, xi)?);
    Ok(lhs.distance(&second))
}

/// `R(X,Y)Z + R(Y,Z)X + R(Z,X)Y`, largest entry.
pub fn bianchi_residual<S: Scalar>(
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
    z: &AlgebraElement<S>,
) -> Result<f64> {
    let s = curvature(x, y, z)?
        .add(&curvature(y, z, x)?)
        .add(&curvature(z, x, y)?);
    Ok(s.matrix().max_abs_entry())
}

/// The Ricci tensor in the orthonormal frame,
/// `Ric(E_a, E_b) = sum_i <R(E_a,E_i)E_b, E_i>`.
pub fn ricci_matrix<S: Scalar>(ctx: &GeometryContext<S>) -> Vec<S> {
    let basis = ctx.basis();
    let dim = basis.len();
    let rows: Vec<Vec<S>> = (0..dim)
        .into_par_iter()
        .map(|a| {
            (0..dim)
                .map(|b| {
                    let mut acc = S::zero();
                    for i in 0..dim {
                        let fi = basis.element(i);
                        let r = curvature_unchecked(basis.element(a), fi, basis.element(b));
                        acc = acc + inner_unchecked(&r, fi) * basis.weight(i).clone();
                    }
                    // Rescale F-basis values to the orthonormal frame. Off-diagonal
                    // entries only need to vanish, so sqrt is avoided there.
                    if a == b {
                        acc * basis.weight(a).clone()
                    } else {
                        acc
                    }
                })
                .collect()
        })
        .collect();
    rows.into_iter().flatten().collect()
}

/// Common value of `Ric(E_a, E_a)` over all basis directions. Fails if the
/// values disagree or the off-diagonal part does not vanish.
pub fn ricci_check<S: Scalar>(ctx: &GeometryContext<S>) -> Result<S> {
    let dim = ctx.basis().len();
    let ric = ricci_matrix(ctx);
    let first = ric[0].clone();
    let tol = 1e-10 * first.to_f64().abs().max(1.0);
    for a in 0..dim {
        for b in 0..dim {
            let v = &ric[a * dim + b];
            let target = if a == b { first.clone() } else { S::zero() };
            let off = (v.clone() - target).abs();
            if (S::EXACT && !off.is_zero()) || off.to_f64() > tol {
                return Err(Error::Consistency(format!(
                    "Ricci tensor not isotropic at ({a}, {b}): deviation {:e}",
                    off.to_f64()
                )));
            }
        }
    }
    Ok(first)
}

/// `max_Y |div(h_v)(Y)| = max_Y |sum_j sigma(nabla_{E_j} v, E_j, Y)|`.
pub fn divergence_check<S: Scalar>(
    ctx: &GeometryContext<S>,
    v: &AlgebraElement<S>,
    invariance: Invariance,
) -> Result<S> {
    let basis = ctx.basis();
    check(v, basis.element(0))?;
    let dim = basis.len();
    // sum_j w_j sigma(nabla_{F_j} v, F_j, Y) = sigma(Y, ., .) contracted; collect
    // the anticommutators {nabla_{F_j} v, F_j} once.
    let mut acc = Matrix::zeros(basis.n());
    for j in 0..dim {
        let fj = basis.element(j);
        let d = connection_with(invariance, fj, v)?;
        let ac = d.matrix().anticommutator(fj.matrix());
        acc = &acc + &ac.scale_real(basis.weight(j));
    }
    Ok(max_abs(
        basis
            .elements()
            .iter()
            .map(|y| sigma_with_anticommutator(y.matrix(), &acc)),
    ))
}

/// `(Delta h_v)(F_a, F_b) = sum_i sigma(nabla_{E_i} nabla_{E_i} v, F_a, F_b)`.
pub fn rough_laplacian_h<S: Scalar>(
    ctx: &GeometryContext<S>,
    v: &AlgebraElement<S>,
    invariance: Invariance,
) -> Result<SymTwoTensor<S>> {
    let basis = ctx.basis();
    check(v, basis.element(0))?;
    let mut lap = Matrix::zeros(basis.n());
    for (fi, w) in basis.elements().iter().zip(basis.inv_gram()) {
        let d2 = iterated_derivative(invariance, fi, fi, v)?;
        lap = &lap + &d2.matrix().scale_real(w);
    }
    contract_h(&AlgebraElement::from_matrix_unchecked(lap), basis)
}

/// `Rm(h_v)(F_a, F_b) = sum_i h_v(R(F_a,E_i)F_b, E_i)`, evaluated literally.
pub fn curvature_action_h<S: Scalar>(ctx: &GeometryContext<S>, v: &AlgebraElement<S>) -> Result<SymTwoTensor<S>> {
    let basis = ctx.basis();
    check(v, basis.element(0))?;
    let dim = basis.len();
    let rows: Vec<Vec<S>> = (0..dim)
        .into_par_iter()
        .map(|a| {
            (0..dim)
                .map(|b| {
                    let mut acc = S::zero();
                    for i in 0..dim {
                        let fi = basis.element(i);
                        let r = curvature_unchecked(basis.element(a), fi, basis.element(b));
                        let ac = fi.matrix().anticommutator(r.matrix());
                        acc = acc + sigma_with_anticommutator(v.matrix(), &ac) * basis.weight(i).clone();
                    }
                    acc
                })
                .collect()
        })
        .collect();
    SymTwoTensor::with_weights(basis.n(), rows.into_iter().flatten().collect(), basis.inv_gram().to_vec())
}

/// `max_{a,b} |(Delta h_v + 2 Rm(h_v))(F_a, F_b)|`.
pub fn lichnerowicz_residual<S: Scalar>(
    ctx: &GeometryContext<S>,
    v: &AlgebraElement<S>,
    invariance: Invariance,
) -> Result<S> {
    let lap = rough_laplacian_h(ctx, v, invariance)?;
    let rm = curvature_action_h(ctx, v)?;
    let two = S::from_i64(2);
    Ok(max_abs(
        lap.coeffs()
            .iter()
            .zip(rm.coeffs())
            .map(|(l, r)| l.clone() + two.clone() * r.clone()),
    ))
}

/// `|sigma(nabla_W xi, Y, Z) + sigma(W, nabla_Y xi, Z) + sigma(W, Y, nabla_Z xi)|`.
pub fn killing_three_term_check<S: Scalar>(
    xi: &AlgebraElement<S>,
    w: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
    z: &AlgebraElement<S>,
) -> Result<S> {
    use crate::cubic::sigma;
    let t1 = sigma(&connection(w, xi)?, y, z)?;
    let t2 = sigma(w, &connection(y, xi)?, z)?;
    let t3 = sigma(w, y, &connection(z, xi)?)?;
    Ok((t1 + t2 + t3).abs())
}

/// Largest residuals of the three deformation equations for one direction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EidResiduals {
    pub trace: f64,
    pub divergence: f64,
    pub lichnerowicz: f64,
}

impl EidResiduals {
    pub fn max(&self) -> f64 {
        self.trace.max(self.divergence).max(self.lichnerowicz)
    }
}

/// Trace, divergence and Lichnerowicz residuals of `h_v`, literal path.
pub fn eid_residuals<S: Scalar>(
    ctx: &GeometryContext<S>,
    v: &AlgebraElement<S>,
    invariance: Invariance,
) -> Result<EidResiduals> {
    let h = contract_h(v, ctx.basis())?;
    Ok(EidResiduals {
        trace: metric_trace(&h).abs().to_f64(),
        divergence: divergence_check(ctx, v, invariance)?.to_f64(),
        lichnerowicz: lichnerowicz_residual(ctx, v, invariance)?.to_f64(),
    })
}

/// Verifies every basis direction with both invariant extensions.
///
/// Uses `tr([[F_a,F_i],F_b] P) = tr([F_a,F_i] [F_b,P])` to share the
/// brackets `[F_a,F_i]` (kept sparse) across all directions, so a full sweep
/// at n = 8 stays cheap. [`eid_residuals`] is the literal path.
pub struct EidVerifier<'a, S: Scalar> {
    ctx: &'a GeometryContext<S>,
    brackets: Vec<SparseMatrix<S>>,
}

/// Result of verifying all `2(n^2 - 1)` directions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EidSweep {
    pub n: usize,
    pub directions: usize,
    pub max_trace: f64,
    pub max_div: f64,
    pub max_lichnerowicz: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl<'a, S: Scalar> EidVerifier<'a, S> {
    pub fn new(ctx: &'a GeometryContext<S>) -> Self {
        let basis = ctx.basis();
        let dim = basis.len();
        let brackets = (0..dim * dim)
            .into_par_iter()
            .map(|ai| {
                let (a, i) = (ai / dim, ai % dim);
                SparseMatrix::from_dense(bracket_unchecked(basis.element(a), basis.element(i)).matrix())
            })
            .collect();
        Self { ctx, brackets }
    }

    /// `2 Rm(h_v)` via the shared brackets.
    fn twice_rm(&self, v: &AlgebraElement<S>) -> Vec<S> {
        let basis = self.ctx.basis();
        let dim = basis.len();
        let quarter = S::ratio(1, 4);
        // P_i = F_i v + v F_i, so sigma(M, F_i, v) = -Im tr(M P_i).
        let p: Vec<Matrix<S>> = basis
            .elements()
            .iter()
            .map(|fi| fi.matrix().anticommutator(v.matrix()))
            .collect();
        let rows: Vec<Vec<S>> = (0..dim)
            .into_par_iter()
            .map(|b| {
                let fb = basis.element(b).matrix();
                let q: Vec<Matrix<S>> = p.iter().map(|pi| fb.commutator(pi)).collect();
                (0..dim)
                    .map(|a| {
                        let mut acc = S::zero();
                        for i in 0..dim {
                            let t = self.brackets[a * dim + i].trace_of_product(&q[i]);
                            if !t.im.is_zero() {
                                acc = acc - t.im * basis.weight(i).clone();
                            }
                        }
                        acc * quarter.clone() * S::from_i64(2)
                    })
                    .collect()
            })
            .collect();
        // rows are indexed [b][a]; Rm(h) is symmetric so the transpose is harmless,
        // but keep the layout honest.
        let mut out = vec![S::zero(); dim * dim];
        for (b, row) in rows.into_iter().enumerate() {
            for (a, val) in row.into_iter().enumerate() {
                out[a * dim + b] = val;
            }
        }
        out
    }

    pub fn residuals(&self, v: &AlgebraElement<S>, invariance: Invariance) -> Result<EidResiduals> {
        let h = contract_h(v, self.ctx.basis())?;
        let lap = rough_laplacian_h(self.ctx, v, invariance)?;
        let rm2 = self.twice_rm(v);
        let lich = max_abs(
            lap.coeffs()
                .iter()
                .zip(&rm2)
                .map(|(l, r)| l.clone() + r.clone()),
        );
        Ok(EidResiduals {
            trace: metric_trace(&h).abs().to_f64(),
            divergence: divergence_check(self.ctx, v, invariance)?.to_f64(),
            lichnerowicz: lich.to_f64(),
        })
    }

    /// Every basis direction, left and right invariant.
    pub fn sweep(&self, tolerance: f64) -> Result<EidSweep> {
        let basis = self.ctx.basis();
        let mut out = EidSweep {
            n: basis.n(),
            directions: 0,
            max_trace: 0.0,
            max_div: 0.0,
            max_lichnerowicz: 0.0,
            tolerance,
            pass: true,
        };
        for invariance in Invariance::BOTH {
            for v in basis.elements() {
                let r = self.residuals(v, invariance)?;
                out.directions += 1;
                out.max_trace = out.max_trace.max(r.trace);
                out.max_div = out.max_div.max(r.divergence);
                out.max_lichnerowicz = out.max_lichnerowicz.max(r.lichnerowicz);
            }
        }
        out.pass = out.max_trace < tolerance && out.max_div < tolerance && out.max_lichnerowicz < tolerance;
        Ok(out)
    }
}
