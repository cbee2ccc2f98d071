//! Solitonic rigidity bookkeeping and the cubic eigenfunction moment on `CP^m`.
//!
//! First eigenfunctions of the Fubini-Study Laplacian are `v_A([z]) =
//! z^* A z / z^* z` for `A` Hermitian and traceless. Averages over `CP^{m-1}`
//! equal averages over the unit sphere in `C^m`, where
//!
//! `E[(z^* A z)^3] = ((tr A)^3 + 3 tr A tr A^2 + 2 tr A^3) / (m (m+1) (m+2))`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::weyl::zero_set_classify;

/// Minimum Monte Carlo sample count.
pub const MIN_SAMPLES: usize = 1_000;
/// Samples drawn from one ChaCha stream.
pub const CHUNK: usize = 1 << 16;
const PROBE_TOL: f64 = 1e-10;

/// A Hermitian traceless `m x m` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenProbe {
    a: Matrix<f64>,
}

impl EigenProbe {
    pub fn new(a: Matrix<f64>) -> Result<Self> {
        let m = a.dim();
        if m < 2 {
            return Err(Error::InvalidProbe(format!("need m >= 2, got {m}")));
        }
        let h = a.hermitian_defect();
        if h > PROBE_TOL {
            return Err(Error::InvalidProbe(format!("not Hermitian (defect {h:e})")));
        }
        let t = a.trace().norm();
        if t > PROBE_TOL * (1.0 + a.max_abs_entry()) {
            return Err(Error::InvalidProbe(format!("not traceless (|tr| = {t:e})")));
        }
        Ok(Self { a })
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_diagonal(values.iter().map(|&v| Complex64::new(v, 0.0)).collect()))
    }

    /// `diag(1, ..., 1, -(m-1))`.
    pub fn standard(m: usize) -> Result<Self> {
        let mut d = vec![1.0; m];
        if let Some(last) = d.last_mut() {
            *last = -(m as f64 - 1.0);
        }
        Self::diagonal(&d)
    }

    pub fn m(&self) -> usize {
        self.a.dim()
    }

    pub fn matrix(&self) -> &Matrix<f64> {
        &self.a
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            a: self.a.scale_real(&t),
        }
    }

    /// `U A U^*`.
    pub fn conjugated(&self, u: &Matrix<f64>) -> Result<Self> {
        self.a.check_same_dim(u)?;
        Self::new(u.matmul(&self.a).matmul(&u.adjoint()))
    }

    /// `z^* A z` for a (not necessarily unit) vector `z`.
    fn quadratic(&self, z: &[Complex64]) -> f64 {
        let m = self.m();
        let mut acc = 0.0;
        for p in 0..m {
            let mut row = Complex64::new(0.0, 0.0);
            for q in 0..m {
                row += self.a.get(p, q) * z[q];
            }
            acc += (z[p].conj() * row).re;
        }
        acc
    }
}

/// Unit-sphere average of `(z^* A z)^3` for any Hermitian `A`.
pub fn cubic_moment_general(a: &Matrix<f64>) -> f64 {
    let m = a.dim() as f64;
    let t1 = a.trace().re;
    let a2 = a.matmul(a);
    let t2 = a2.trace().re;
    let t3 = a2.trace_of_product(a).re;
    (t1 * t1 * t1 + 3.0 * t1 * t2 + 2.0 * t3) / (m * (m + 1.0) * (m + 2.0))
}

/// Unit-sphere average of `(z^* A z)^3`; for traceless `A` this is
/// `2 tr(A^3) / (m (m+1) (m+2))`.
pub fn cubic_moment_exact(probe: &EigenProbe) -> f64 {
    cubic_moment_general(&probe.a)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub exact: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MomentEstimate {
    /// `|mc_mean - exact|` in units of the standard error.
    pub fn z_score(&self) -> f64 {
        let diff = (self.mc_mean - self.exact).abs();
        if self.mc_stderr == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / self.mc_stderr
        }
    }

    pub fn agrees_within(&self, sigmas: f64) -> bool {
        self.z_score() <= sigmas
    }
}

/// Count, mean and sum of squared deviations of one chunk.
#[derive(Clone, Copy, Debug)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn merge(self, other: Self) -> Self {
        let count = self.count + other.count;
        if count == 0.0 {
            return self;
        }
        let delta = other.mean - self.mean;
        Self {
            count,
            mean: self.mean + delta * other.count / count,
            m2: self.m2 + other.m2 + delta * delta * self.count * other.count / count,
        }
    }
}

fn chunk_moments(probe: &EigenProbe, seed: u64, stream: u64, count: usize) -> Moments {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let m = probe.m();
    let mut z = vec![Complex64::new(0.0, 0.0); m];
    let mut acc = Moments {
        count: 0.0,
        mean: 0.0,
        m2: 0.0,
    };
    for _ in 0..count {
        let mut norm2 = 0.0;
        for zj in z.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *zj = Complex64::new(re, im);
            norm2 += re * re + im * im;
        }
        let v = probe.quadratic(&z) / norm2;
        let x = v * v * v;
        acc.count += 1.0;
        let delta = x - acc.mean;
        acc.mean += delta / acc.count;
        acc.m2 += delta * (x - acc.mean);
    }
    acc
}

/// Monte Carlo estimate of the sphere average of `(z^* A z)^3`. Chunk `c`
/// draws from ChaCha stream `c` of `seed`, so the result does not depend on
/// the thread count.
pub fn cubic_moment_mc(probe: &EigenProbe, samples: usize, seed: u64) -> Result<MomentEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: samples,
            min: MIN_SAMPLES,
        });
    }
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK.min(samples - c * CHUNK);
            chunk_moments(probe, seed, c as u64, count)
        })
        .collect();
    let total = parts.into_iter().reduce(Moments::merge).expect("at least one chunk");
    let variance = total.m2 / (total.count - 1.0);
    Ok(MomentEstimate {
        exact: cubic_moment_exact(probe),
        mc_mean: total.mean,
        mc_stderr: (variance.max(0.0) / total.count).sqrt(),
        samples,
        seed,
    })
}

/// A homogeneous space handled by the solitonic bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Space {
    /// The group `SU(n)` with its bi-invariant metric.
    SpecialUnitary { n: usize },
    /// `Gr_k(C^N)`; `k = 1` is `CP^{N-1}`.
    Grassmannian { k: usize, ambient: usize },
}

impl Space {
    pub fn complex_projective(m: usize) -> Result<Self> {
        Self::grassmannian(1, m + 1)
    }

    pub fn grassmannian(k: usize, ambient: usize) -> Result<Self> {
        if k == 0 || k >= ambient {
            return Err(Error::UnsupportedSpace(format!("Gr_{k}(C^{ambient}) needs 1 <= k < N")));
        }
        Ok(Space::Grassmannian { k, ambient })
    }

    /// True when the Grassmannian is a projective space.
    pub fn is_projective(&self) -> bool {
        matches!(*self, Space::Grassmannian { k, ambient } if k == 1 || k + 1 == ambient)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Space::SpecialUnitary { n } => write!(f, "SU({n})"),
            Space::Grassmannian { k, ambient } if self.is_projective() && k == 1 => {
                write!(f, "CP^{}", ambient - 1)
            }
            Space::Grassmannian { k, ambient } => write!(f, "Gr_{k}(C^{ambient})"),
        }
    }
}

impl FromStr for Space {
    type Err = Error;

    /// Accepts `cpM`, `grK,N` and `suN` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let bad = || Error::UnsupportedSpace(s.to_string());
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        if let Some(rest) = lower.strip_prefix("cp") {
            let m = num(rest)?;
            if m == 0 {
                return Err(bad());
            }
            Self::complex_projective(m)
        } else if let Some(rest) = lower.strip_prefix("gr") {
            let (k, n) = rest.split_once(',').ok_or_else(bad)?;
            Self::grassmannian(num(k)?, num(n)?)
        } else if let Some(rest) = lower.strip_prefix("su") {
            let n = num(rest)?;
            if n < 2 {
                return Err(bad());
            }
            Ok(Space::SpecialUnitary { n })
        } else {
            Err(bad())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsdReport {
    pub space: String,
    pub eid_dim: usize,
    /// `dim V_{-2 lambda}`; `None` when not determined here.
    pub v_minus_2lambda_dim: Option<usize>,
    pub note: String,
}

/// Dimensions in `ISD = EID + {lambda v g + Hess v : v in V_{-2 lambda}}`.
pub fn isd_report(space: Space) -> Result<IsdReport> {
    match space {
        Space::SpecialUnitary { n } => Ok(IsdReport {
            space: space.to_string(),
            eid_dim: 2 * (n * n - 1),
            v_minus_2lambda_dim: None,
            note: "EID = su(n) + su(n) from left and right invariant h_v".to_string(),
        }),
        Space::Grassmannian { ambient, .. } => {
            let g = ambient * ambient - 1;
            let (eid_dim, note) = if space.is_projective() {
                (0, "EID vanishes on projective space".to_string())
            } else {
                (g, format!("EID and V_(-2 lambda) both isomorphic to su({ambient})"))
            };
            Ok(IsdReport {
                space: space.to_string(),
                eid_dim,
                v_minus_2lambda_dim: Some(g),
                note,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Isolated,
    WeaklySolitonicallyRigid,
    Inconclusive,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Isolated => "isolated among Ricci solitons",
            VerdictKind::WeaklySolitonicallyRigid => "weakly solitonically rigid (EID directions excluded)",
            VerdictKind::Inconclusive => "inconclusive at second order",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub space: String,
    pub kind: VerdictKind,
    pub verdict: String,
    /// Whether `Psi` on `su(N)` has only the trivial zero.
    pub psi_zero_set_trivial: bool,
    /// Cubic moment of the witness probe, computed only on projective space.
    pub cubic_moment_witness: Option<f64>,
}

/// Verdict using the witness `diag(1, ..., 1, -(N-1))`.
pub fn rigidity_verdict(space: Space) -> Result<Verdict> {
    match space {
        Space::Grassmannian { ambient, .. } => rigidity_verdict_with_probe(space, &EigenProbe::standard(ambient)?),
        Space::SpecialUnitary { .. } => Err(Error::UnsupportedSpace(format!("{space}: verdict defined for Gr_k(C^N)"))),
    }
}

pub fn rigidity_verdict_with_probe(space: Space, probe: &EigenProbe) -> Result<Verdict> {
    let Space::Grassmannian { ambient, .. } = space else {
        return Err(Error::UnsupportedSpace(format!("{space}: verdict defined for Gr_k(C^N)")));
    };
    if probe.m() != ambient {
        return Err(Error::DimensionMismatch {
            left: ambient,
            right: probe.m(),
        });
    }
    let zero_set = zero_set_classify(ambient)?;
    let witness = space.is_projective().then(|| cubic_moment_exact(probe));
    let witness_ok = witness.is_none_or(|w| w.abs() > 1e-12);
    let kind = if !zero_set.trivial_only || !witness_ok {
        VerdictKind::Inconclusive
    } else if space.is_projective() {
        VerdictKind::Isolated
    } else {
        VerdictKind::WeaklySolitonicallyRigid
    };
    Ok(Verdict {
        space: space.to_string(),
        kind,
        verdict: kind.to_string(),
        psi_zero_set_trivial: zero_set.trivial_only,
        cubic_moment_witness: witness,
    })
}
