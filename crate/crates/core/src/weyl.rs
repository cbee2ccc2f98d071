//! Symmetric-group characters for `dim Hom_G(s^2(g), g)` and the equivariant
//! quadratic maps on `su(n) + su(n)`.
//!
//! Every character needed is a polynomial in fixed-point counts:
//! `chi_V = fix - 1` for the standard representation, `chi_{s^2 V}(g) =
//! (chi_V(g)^2 + chi_V(g^2)) / 2`, and the two-row Specht module `(n-2, 2)`
//! is the permutation character on 2-subsets minus `1 + chi_V`.

use std::fmt;

use itertools::Itertools;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{build_basis, conjugate, random_special_unitary, AlgebraElement};
use crate::matrix::Matrix;

/// A partition of `n`, parts in weakly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(parts));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of parts equal to `k`.
    pub fn multiplicity(&self, k: usize) -> usize {
        self.0.iter().filter(|&&p| p == k).count()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// All partitions of `n` in descending lexicographic order.
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    if n < 1 {
        return Err(Error::InvalidDimension {
            n,
            reason: "partitions need n >= 1",
        });
    }
    fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for part in (1..=max.min(remaining)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Combinatorial data of a conjugacy class of `S_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassData {
    pub cycle_type: Partition,
    /// `n! / z_lambda`.
    pub size: u64,
    /// `z_lambda = prod_k k^{m_k} m_k!`, the centralizer order.
    pub centralizer: u64,
    pub fixed_points: usize,
    /// Cycle type of `g^2`.
    pub square_type: Partition,
}

impl ClassData {
    /// Fixed points of `g^2`.
    pub fn square_fixed_points(&self) -> usize {
        self.square_type.multiplicity(1)
    }

    /// 2-subsets fixed by `g`: pairs of fixed points plus the 2-cycles.
    pub fn fixed_pairs(&self) -> usize {
        let m1 = self.fixed_points;
        m1 * m1.saturating_sub(1) / 2 + self.cycle_type.multiplicity(2)
    }
}

fn factorial(n: usize) -> Result<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k)).ok_or(Error::InvalidDimension {
        n,
        reason: "n! overflows u64",
    })
}

pub fn class_data(lambda: &Partition) -> Result<ClassData> {
    let n = lambda.size();
    let mut z: u64 = 1;
    for (k, m) in lambda.0.iter().copied().counts() {
        z = z
            .checked_mul((k as u64).pow(m as u32))
            .and_then(|z| z.checked_mul(factorial(m).ok()?))
            .ok_or(Error::InvalidDimension {
                n,
                reason: "centralizer order overflows u64",
            })?;
    }
    let mut square = Vec::with_capacity(lambda.0.len() * 2);
    for &k in &lambda.0 {
        if k % 2 == 1 {
            square.push(k);
        } else {
            square.push(k / 2);
            square.push(k / 2);
        }
    }
    Ok(ClassData {
        cycle_type: lambda.clone(),
        size: factorial(n)? / z,
        centralizer: z,
        fixed_points: lambda.multiplicity(1),
        square_type: Partition::new(square)?,
    })
}

pub fn all_classes(n: usize) -> Result<Vec<ClassData>> {
    partitions(n)?.iter().map(class_data).collect()
}

/// `chi_V = fix - 1`.
pub fn standard_character(lambda: &Partition) -> i64 {
    lambda.multiplicity(1) as i64 - 1
}

fn chi_v(c: &ClassData) -> i64 {
    c.fixed_points as i64 - 1
}

fn chi_v_sq(c: &ClassData) -> i64 {
    c.square_fixed_points() as i64 - 1
}

/// Twice the character of `s^2 V`.
fn two_chi_s2v(c: &ClassData) -> i64 {
    chi_v(c) * chi_v(c) + chi_v_sq(c)
}

fn sign(c: &ClassData) -> i64 {
    let even_cycles = c.cycle_type.0.iter().filter(|&&k| k % 2 == 0).count();
    if even_cycles % 2 == 0 {
        1
    } else {
        -1
    }
}

fn chi_two_row(c: &ClassData) -> i64 {
    c.fixed_pairs() as i64 - c.fixed_points as i64
}

/// `sum_classes size * f / (denominator * n!)`, which must be an integer.
fn class_average(classes: &[ClassData], denominator: i128, f: impl Fn(&ClassData) -> i64) -> Result<i64> {
    let order: i128 = classes.iter().map(|c| c.size as i128).sum();
    let total: i128 = classes.iter().map(|c| c.size as i128 * f(c) as i128).sum();
    let d = denominator * order;
    if total % d != 0 {
        return Err(Error::Consistency(format!("character sum {total} not divisible by {d}")));
    }
    Ok((total / d) as i64)
}

/// `<chi, psi>` over `S_n` for integer-valued characters.
pub fn class_inner(n: usize, chi: impl Fn(&ClassData) -> i64, psi: impl Fn(&ClassData) -> i64) -> Result<i64> {
    class_average(&all_classes(n)?, 1, |c| chi(c) * psi(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum HomGroup {
    /// `G = SU(n) x SU(n)`, Weyl group `S_n x S_n`.
    Product,
    /// `G = SU(n)`, Weyl group `S_n`.
    Single,
}

impl fmt::Display for HomGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HomGroup::Product => "product",
            HomGroup::Single => "single",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomReport {
    pub n: usize,
    pub group: HomGroup,
    pub dimension: i64,
}

fn check_hom_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidDimension {
            n,
            reason: "Hom dimension needs n >= 2",
        })
    } else {
        Ok(())
    }
}

/// `dim Hom_W(s^2 t, t)` by class sums.
pub fn hom_dim(n: usize, group: HomGroup) -> Result<HomReport> {
    check_hom_n(n)?;
    let classes = all_classes(n)?;
    let dimension = match group {
        HomGroup::Single => class_average(&classes, 2, |c| two_chi_s2v(c) * chi_v(c))?,
        HomGroup::Product => {
            let order: i128 = classes.iter().map(|c| c.size as i128).sum();
            let mut total: i128 = 0;
            for g in &classes {
                for h in &classes {
                    let t = chi_v(g) + chi_v(h);
                    let t_sq = chi_v_sq(g) + chi_v_sq(h);
                    let two_s2 = t * t + t_sq;
                    total += g.size as i128 * h.size as i128 * (two_s2 * t) as i128;
                }
            }
            let d = 2 * order * order;
            if total % d != 0 {
                return Err(Error::Consistency(format!("product character sum {total} not divisible by {d}")));
            }
            (total / d) as i64
        }
    };
    Ok(HomReport { n, group, dimension })
}

/// Fixed points of a permutation and of its square.
fn perm_fixed(p: &[usize]) -> (i64, i64) {
    let fix = p.iter().enumerate().filter(|(i, &x)| *i == x).count() as i64;
    let fix_sq = (0..p.len()).filter(|&i| p[p[i]] == i).count() as i64;
    (fix, fix_sq)
}

/// The same dimension by summing over every group element.
pub fn hom_dim_brute_force(n: usize, group: HomGroup) -> Result<HomReport> {
    check_hom_n(n)?;
    if n > 7 {
        return Err(Error::InvalidDimension {
            n,
            reason: "element enumeration limited to n <= 7",
        });
    }
    let elems: Vec<(i64, i64)> = (0..n).permutations(n).map(|p| perm_fixed(&p)).collect();
    let order = elems.len() as i128;
    let (total, d) = match group {
        HomGroup::Single => {
            let total: i128 = elems
                .iter()
                .map(|&(f, fsq)| {
                    let v = f - 1;
                    ((v * v + fsq - 1) * v) as i128
                })
                .sum();
            (total, 2 * order)
        }
        HomGroup::Product => {
            let mut total: i128 = 0;
            for &(f1, s1) in &elems {
                for &(f2, s2) in &elems {
                    let t = f1 - 1 + f2 - 1;
                    let t_sq = s1 - 1 + s2 - 1;
                    total += ((t * t + t_sq) * t) as i128;
                }
            }
            (total, 2 * order * order)
        }
    };
    if total % d != 0 {
        return Err(Error::Consistency(format!("element sum {total} not divisible by {d}")));
    }
    Ok(HomReport {
        n,
        group,
        dimension: (total / d) as i64,
    })
}

/// Multiplicities of irreducibles in `s^2(V)` over `S_n`. The one-dimensional
/// summand that appears is the trivial representation (the invariant inner
/// product); `alternating` is reported to make that explicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct S2VDecomposition {
    pub n: usize,
    pub trivial: i64,
    pub alternating: i64,
    pub standard: i64,
    /// The Specht module for `(n-2, 2)`; zero for `n < 4` where it does not exist.
    pub two_row: i64,
    /// `sum multiplicity * dimension`.
    pub total_dim: i64,
}

impl S2VDecomposition {
    pub fn dim_s2v(&self) -> i64 {
        let n = self.n as i64;
        (n - 1) * n / 2
    }

    /// Irreducible summands of `s^2(t)` for `t = (V x C) + (C x V)` over
    /// `S_n x S_n`: two copies of each summand of `s^2 V` plus `V x V`.
    pub fn product_summand_count(&self) -> i64 {
        2 * (self.trivial + self.alternating + self.standard + self.two_row) + 1
    }

    /// Copies of `V x C` and `C x V` inside `s^2(t)`, i.e. `dim Hom(s^2 t, t)`.
    pub fn product_hom_dim(&self) -> i64 {
        2 * self.standard
    }
}

pub fn decompose_s2v(n: usize) -> Result<S2VDecomposition> {
    check_hom_n(n)?;
    let classes = all_classes(n)?;
    let mult = |f: &dyn Fn(&ClassData) -> i64| class_average(&classes, 2, |c| two_chi_s2v(c) * f(c));
    let trivial = mult(&|_| 1)?;
    let alternating = mult(&sign)?;
    let standard = if n == 2 { 0 } else { mult(&chi_v)? };
    let two_row = if n >= 4 { mult(&chi_two_row)? } else { 0 };
    let ni = n as i64;
    let total_dim = trivial + alternating + standard * (ni - 1) + two_row * ni * (ni - 3) / 2;
    Ok(S2VDecomposition {
        n,
        trivial,
        alternating,
        standard,
        two_row,
        total_dim,
    })
}

/// The two-row character is irreducible: `<chi, chi> = 1` for `n >= 4`.
pub fn two_row_norm(n: usize) -> Result<i64> {
    class_inner(n, chi_two_row, chi_two_row)
}

/// `2i (X^2 - tr(X^2)/n Id)`.
pub fn psi(x: &AlgebraElement) -> AlgebraElement {
    psi_bilinear(x, x)
}

/// `i ((XX' + X'X) - tr(XX' + X'X)/n Id)`, the polarization of `psi`.
pub fn psi_bilinear(x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    let n = x.dim();
    let ac = x.matrix().anticommutator(y.matrix());
    let shift = ac.trace() / n as f64;
    let traceless = &ac - &Matrix::identity(n).scale(&shift);
    AlgebraElement::from_matrix_unchecked(traceless.scale(&Complex64::new(0.0, 1.0)))
}

/// `Psi(X, Y) = (psi(X), psi(Y))`.
pub fn psi_pair(x: &AlgebraElement, y: &AlgebraElement) -> Result<(AlgebraElement, AlgebraElement)> {
    x.matrix().check_same_dim(y.matrix())?;
    Ok((psi(x), psi(y)))
}

/// `Lambda`: `n/2` copies of `diag(i, -i)`, for even `n`.
pub fn lambda_matrix(n: usize) -> Result<AlgebraElement> {
    if !n.is_multiple_of(2) || n < 2 {
        return Err(Error::InvalidDimension {
            n,
            reason: "Lambda exists only for even n",
        });
    }
    let diag = (0..n)
        .map(|k| Complex64::new(0.0, if k % 2 == 0 { 1.0 } else { -1.0 }))
        .collect();
    AlgebraElement::new(Matrix::from_diagonal(diag))
}

/// Classification of the zeros of `Psi` on `su(n) + su(n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroSetReport {
    pub n: usize,
    pub odd: bool,
    /// `Psi(x) = 0` only for `x = 0`.
    pub trivial_only: bool,
    /// Eigenvalue sign patterns `(s_1, ..., s_n)`, `s_j = +-1`, examined.
    pub sign_patterns_checked: u64,
    /// Patterns compatible with tracelessness, `sum s_j = 0`.
    pub admissible_patterns: u64,
    /// Diagonal signs of `Lambda` (`i * sign` on the diagonal), even `n` only.
    pub lambda_diagonal: Option<Vec<i8>>,
    /// `max |Psi(Lambda, 0)|`.
    pub psi_residual: Option<f64>,
    /// `max |Psi(U Lambda U^*, 0)|` for a random special unitary `U`.
    pub conjugated_residual: Option<f64>,
    pub description: String,
}

/// Zeros of `Psi`. Up to conjugation `X` is diagonal with eigenvalues `i a_j`;
/// `psi(X) = 0` forces all `a_j^2` equal, so `a_j = s_j a` with signs `s_j`.
/// A nonzero zero exists iff some sign pattern has `sum s_j = 0`; every
/// pattern is checked.
pub fn zero_set_classify(n: usize) -> Result<ZeroSetReport> {
    if n < 2 {
        return Err(Error::InvalidDimension {
            n,
            reason: "su(n) needs n >= 2",
        });
    }
    if n > 24 {
        return Err(Error::InvalidDimension {
            n,
            reason: "sign-pattern enumeration limited to n <= 24",
        });
    }
    let checked = 1u64 << n;
    let admissible = (0..checked)
        .filter(|mask| {
            let plus = mask.count_ones() as i64;
            plus - (n as i64 - plus) == 0
        })
        .count() as u64;
    if admissible == 0 {
        return Ok(ZeroSetReport {
            n,
            odd: n % 2 == 1,
            trivial_only: true,
            sign_patterns_checked: checked,
            admissible_patterns: 0,
            lambda_diagonal: None,
            psi_residual: None,
            conjugated_residual: None,
            description: "{0}".to_string(),
        });
    }
    let lambda = lambda_matrix(n)?;
    let residual = psi(&lambda).matrix().max_abs_entry();
    let basis = build_basis(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let u = random_special_unitary(&basis, &mut rng);
    let conj = psi(&conjugate(&u, &lambda)).matrix().max_abs_entry();
    Ok(ZeroSetReport {
        n,
        odd: n % 2 == 1,
        trivial_only: false,
        sign_patterns_checked: checked,
        admissible_patterns: admissible,
        lambda_diagonal: Some((0..n).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect()),
        psi_residual: Some(residual),
        conjugated_residual: Some(conj),
        description: format!(
            "G-orbit of span{{(Lambda,0),(0,Lambda)}}, Lambda = {} x diag(i,-i)",
            n / 2
        ),
    })
}
