//! Test problem suites: Cauchy-like (`p1`, `p2`, `p4`), Gaussian Toeplitz
//! (`p3`), Trummer-like (`t1`, `t2`) and the identity.
//!
//! Every problem is paired with the right-hand side `b = A·e`, where `e` is
//! the all-ones block, so the exact solution is known.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cauchy::CauchyLikeGenerators;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::toeplitz::{gaussian_toeplitz, toeplitz_to_cauchy, ToeplitzOperator, ToeplitzTransform};
use crate::trummer::{trummer_apply, trummer_reconstruct_dense, TrummerMatrix};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    P1,
    P2,
    P3,
    P4,
    T1,
    T2,
    Identity,
}

impl ProblemId {
    pub const ALL: [ProblemId; 7] = [Self::P1, Self::P2, Self::P3, Self::P4, Self::T1, Self::T2, Self::Identity];

    pub fn name(self) -> &'static str {
        match self {
            Self::P1 => "p1",
            Self::P2 => "p2",
            Self::P3 => "p3",
            Self::P4 => "p4",
            Self::T1 => "t1",
            Self::T2 => "t2",
            Self::Identity => "identity",
        }
    }

    pub fn is_trummer(self) -> bool {
        matches!(self, Self::T1 | Self::T2)
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidProblem(format!("unknown problem id {s:?}")))
    }
}

/// Parameters of one problem instance. Unused fields are ignored by the
/// generator of the given id.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub n: usize,
    /// Node offset (`p1`, `p2`, `t2`) or Gaussian parameter (`p3`).
    pub a: f64,
    /// Node step (`p1`, `p2`, `t2`).
    pub b: f64,
    /// Generator perturbation (`p4`) or shift of the identity (`t2`).
    pub eps: f64,
    pub seed: u64,
    /// Right-hand-side columns.
    pub m: usize,
}

impl ProblemSpec {
    /// The instance with the standard parameters of `id`.
    pub fn new(id: ProblemId, n: usize) -> Self {
        let (a, b, eps) = match id {
            ProblemId::P1 | ProblemId::P4 => (1.0, 2.0, 1e-12),
            ProblemId::P2 | ProblemId::T2 => (1.0, -0.3, 1e-3),
            ProblemId::P3 => (0.9, 0.0, 0.0),
            ProblemId::T1 | ProblemId::Identity => (0.0, 0.0, 0.0),
        };
        Self { id, n, a, b, eps, seed: 0, m: 1 }
    }

    /// Size used when none is given.
    pub fn default_n(id: ProblemId) -> usize {
        match id {
            ProblemId::P4 => 128,
            _ => 512,
        }
    }

    pub fn with_a(self, a: f64) -> Self {
        Self { a, ..self }
    }

    pub fn with_b(self, b: f64) -> Self {
        Self { b, ..self }
    }

    pub fn with_eps(self, eps: f64) -> Self {
        Self { eps, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_m(self, m: usize) -> Self {
        Self { m, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidProblem(msg));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.m == 0 {
            return bad("m must be positive".into());
        }
        match self.id {
            ProblemId::P1 | ProblemId::P2 | ProblemId::P4 | ProblemId::T2 if self.b == 0.0 || !self.b.is_finite() => {
                bad(format!("node step b must be finite and nonzero, got {}", self.b))
            }
            ProblemId::P3 if !(self.a > 0.0 && self.a < 1.0) => {
                bad(format!("Gaussian parameter a must lie in (0, 1), got {}", self.a))
            }
            ProblemId::P4 | ProblemId::T2 if !(self.eps > 0.0) => bad(format!("eps must be positive, got {}", self.eps)),
            _ => Ok(()),
        }
    }
}

/// The operator of a generated problem.
#[derive(Debug, Clone)]
pub enum ProblemMatrix {
    Cauchy(CauchyLikeGenerators),
    /// A Toeplitz matrix together with its Cauchy-like image.
    Toeplitz {
        op: ToeplitzOperator,
        gen: CauchyLikeGenerators,
        transform: ToeplitzTransform,
    },
    Trummer(TrummerMatrix),
}

/// A generated instance with right-hand side `b = A·e`.
#[derive(Debug, Clone)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub matrix: ProblemMatrix,
    pub rhs: DenseMatrix,
    pub exact: DenseMatrix,
}

impl Problem {
    /// `A·x` in the frame of the original problem.
    pub fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        match &self.matrix {
            ProblemMatrix::Cauchy(gen) => gen.apply(x),
            ProblemMatrix::Toeplitz { op, .. } => op.apply(x),
            ProblemMatrix::Trummer(t) => trummer_apply(t, x),
        }
    }

    /// Dense form of `A`, for oracles.
    pub fn dense(&self) -> Result<DenseMatrix> {
        match &self.matrix {
            ProblemMatrix::Cauchy(gen) => gen.reconstruct_dense(),
            ProblemMatrix::Toeplitz { op, .. } => Ok(op.to_dense()),
            ProblemMatrix::Trummer(t) => Ok(trummer_reconstruct_dense(t)),
        }
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }
}

fn real(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// `t_i = a + i·b`, `s_j = j·b` with one-based indices.
fn shifted_nodes(n: usize, a: f64, b: f64) -> (Vec<C64>, Vec<C64>) {
    let t = (1..=n).map(|i| real(a + i as f64 * b)).collect();
    let s = (1..=n).map(|j| real(j as f64 * b)).collect();
    (t, s)
}

fn p1_like(spec: &ProblemSpec) -> Result<CauchyLikeGenerators> {
    let n = spec.n;
    let g = (0..n).flat_map(|_| [real(1.0), real(-1.0)]).collect();
    let b = (1..=n)
        .flat_map(|j| [real(if j % 2 == 0 { 1.0 } else { -1.0 }), real(2.0)])
        .collect();
    let (t, s) = shifted_nodes(n, spec.a, spec.b);
    CauchyLikeGenerators::from_parts(n, 2, g, b, t, s)
}

/// `G = [a, a + εf]`, `B = [(a + εg)^T; -a^T]` with `a`, `f`, `g` uniform in
/// `[0, 1)`.
fn p4(spec: &ProblemSpec) -> Result<CauchyLikeGenerators> {
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut draw = || (0..n).map(|_| rng.gen::<f64>()).collect::<Vec<_>>();
    let (a, f, g) = (draw(), draw(), draw());
    let eps = spec.eps;
    let gm = (0..n).flat_map(|i| [real(a[i]), real(a[i] + eps * f[i])]).collect();
    let bm = (0..n).flat_map(|j| [real(a[j] + eps * g[j]), real(-a[j])]).collect();
    let (t, s) = shifted_nodes(n, 1.0, 2.0);
    CauchyLikeGenerators::from_parts(n, 2, gm, bm, t, s)
}

/// Unit diagonal, `s_i = i/n`, `G[i, :] = [i, -1]`,
/// `B[:, i] = [cos(πi/n), i·cos(πi/n)]`.
fn t1(spec: &ProblemSpec) -> Result<TrummerMatrix> {
    let n = spec.n;
    let nf = n as f64;
    let mut g = Vec::with_capacity(2 * n);
    let mut b = Vec::with_capacity(2 * n);
    for i in 1..=n {
        let fi = i as f64;
        let c = (std::f64::consts::PI * fi / nf).cos();
        g.extend([real(fi), real(-1.0)]);
        b.extend([real(c), real(fi * c)]);
    }
    let s = (1..=n).map(|i| real(i as f64 / nf)).collect();
    TrummerMatrix::from_parts(n, 2, g, b, s, vec![real(1.0); n])
}

/// `u = v/‖v‖` with `v_i = i/n`.
pub fn t2_vector(n: usize) -> Vec<f64> {
    let v: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// `(1+ε)I - u·u^T` on nodes `s_i = a + i·b`, generators
/// `G = [diag(s)u, u]`, `B = [-u^T; (diag(s)u)^T]`.
fn t2(spec: &ProblemSpec) -> Result<TrummerMatrix> {
    let n = spec.n;
    let u = t2_vector(n);
    let s: Vec<C64> = (1..=n).map(|i| real(spec.a + i as f64 * spec.b)).collect();
    let mut g = Vec::with_capacity(2 * n);
    let mut b = Vec::with_capacity(2 * n);
    for i in 0..n {
        let su = s[i] * u[i];
        g.extend([su, real(u[i])]);
        b.extend([real(-u[i]), su]);
    }
    let d = u.iter().map(|ui| real(1.0 + spec.eps - ui * ui)).collect();
    TrummerMatrix::from_parts(n, 2, g, b, s, d)
}

/// Closed-form inverse of the `t2` matrix: `(1+ε)^{-1}(I + ε^{-1}u·u^T)`.
pub fn t2_exact_inverse(n: usize, eps: f64) -> DenseMatrix {
    let u = t2_vector(n);
    let scale = 1.0 / (1.0 + eps);
    DenseMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        real(scale * (id + u[i] * u[j] / eps))
    })
}

fn toeplitz(op: ToeplitzOperator) -> Result<ProblemMatrix> {
    let (gen, transform) = toeplitz_to_cauchy(&op)?;
    Ok(ProblemMatrix::Toeplitz { op, gen, transform })
}

/// Builds the instance described by `spec`.
///
/// The identity is generated as a Toeplitz matrix, which gives it a
/// Cauchy-like image; Trummer solvers use [`identity_trummer`] instead.
pub fn generate_problem(spec: &ProblemSpec) -> Result<Problem> {
    spec.validate()?;
    let matrix = match spec.id {
        ProblemId::P1 | ProblemId::P2 => ProblemMatrix::Cauchy(p1_like(spec)?),
        ProblemId::P4 => ProblemMatrix::Cauchy(p4(spec)?),
        ProblemId::P3 => toeplitz(gaussian_toeplitz(spec.n, spec.a)?)?,
        ProblemId::Identity => {
            let mut col = vec![real(0.0); spec.n];
            col[0] = real(1.0);
            toeplitz(ToeplitzOperator::symmetric(col)?)?
        }
        ProblemId::T1 => ProblemMatrix::Trummer(t1(spec)?),
        ProblemId::T2 => ProblemMatrix::Trummer(t2(spec)?),
    };
    let exact = DenseMatrix::from_fn(spec.n, spec.m, |_, _| real(1.0));
    let mut problem = Problem {
        spec: *spec,
        matrix,
        rhs: DenseMatrix::zeros(0, 0),
        exact,
    };
    problem.rhs = problem.apply(&problem.exact)?;
    Ok(problem)
}

/// The identity as a Trummer-like matrix on nodes `s_i = i/n`.
pub fn identity_trummer(n: usize) -> Result<TrummerMatrix> {
    TrummerMatrix::identity((1..=n).map(|i| real(i as f64 / n as f64)).collect())
}
