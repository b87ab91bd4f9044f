//! Time-dependent Hermitian matrix families `t -> A(t)` on `[0, T]`.
//!
//! A family is immutable once built and cheap to clone; every query is a
//! pure function of `t`, so families can be shared across worker threads.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};

pub type MatrixFn = Arc<dyn Fn(f64) -> CMatrix + Send + Sync>;

/// Number of equispaced probe times used by the construction-time Hermitian check.
pub const HERMITICITY_PROBES: usize = 32;
/// Relative tolerance for analytic families.
pub const ANALYTIC_HERMITICITY_TOL: f64 = 1e-12;
pub const DEFAULT_HERMITICITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    AnalyticCallback,
    SampledGrid,
    DirectSumOfBlocks,
}

#[derive(Clone)]
enum Source {
    Callback { eval: MatrixFn, deriv: Option<MatrixFn> },
    Grid { times: Vec<f64>, values: Vec<CMatrix> },
    Blocks(Vec<HermitianFamily>),
}

#[derive(Clone)]
pub struct HermitianFamily {
    dim: usize,
    horizon: f64,
    kind: FamilyKind,
    source: Arc<Source>,
    // Affine reparametrisation: evaluate(t) = sign * source(origin + t).
    origin: f64,
    sign: f64,
    h_fd: f64,
    hermiticity_tol: f64,
}

impl fmt::Debug for HermitianFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HermitianFamily")
            .field("dim", &self.dim)
            .field("horizon", &self.horizon)
            .field("kind", &self.kind)
            .field("origin", &self.origin)
            .field("sign", &self.sign)
            .finish()
    }
}

fn default_h_fd(horizon: f64) -> f64 {
    1e-5 * horizon.max(1.0)
}

fn check_dims(dim: usize, horizon: f64) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidSpec("dimension must be at least 1".into()));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidSpec(format!("horizon must be positive, got {horizon}")));
    }
    Ok(())
}

impl HermitianFamily {
    /// Family given by an analytic callback. Verified Hermitian at
    /// [`HERMITICITY_PROBES`] equispaced times.
    pub fn from_fn<F>(dim: usize, horizon: f64, eval: F) -> Result<Self>
    where
        F: Fn(f64) -> CMatrix + Send + Sync + 'static,
    {
        Self::from_callbacks(dim, horizon, Arc::new(eval), None)
    }

    pub fn from_fn_with_derivative<F, G>(dim: usize, horizon: f64, eval: F, deriv: G) -> Result<Self>
    where
        F: Fn(f64) -> CMatrix + Send + Sync + 'static,
        G: Fn(f64) -> CMatrix + Send + Sync + 'static,
    {
        Self::from_callbacks(dim, horizon, Arc::new(eval), Some(Arc::new(deriv)))
    }

    fn from_callbacks(dim: usize, horizon: f64, eval: MatrixFn, deriv: Option<MatrixFn>) -> Result<Self> {
        check_dims(dim, horizon)?;
        let family = HermitianFamily {
            dim,
            horizon,
            kind: FamilyKind::AnalyticCallback,
            source: Arc::new(Source::Callback { eval, deriv }),
            origin: 0.0,
            sign: 1.0,
            h_fd: default_h_fd(horizon),
            hermiticity_tol: ANALYTIC_HERMITICITY_TOL,
        };
        family.validate()?;
        Ok(family)
    }

    /// Sampled family, interpolated linearly (entrywise) between samples.
    /// The first sample time must be 0; the horizon is the last sample time.
    pub fn from_samples(times: Vec<f64>, values: Vec<CMatrix>) -> Result<Self> {
        Self::from_samples_with_tol(times, values, DEFAULT_HERMITICITY_TOL)
    }

    pub fn from_samples_with_tol(times: Vec<f64>, values: Vec<CMatrix>, hermiticity_tol: f64) -> Result<Self> {
        if times.is_empty() || values.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if times.len() != values.len() {
            return Err(Error::InvalidSpec(format!(
                "{} sample times but {} matrices",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::InvalidSpec("a sampled family needs at least two samples".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidSpec(format!("first sample time must be 0, got {}", times[0])));
        }
        for i in 1..times.len() {
            if !(times[i] > times[i - 1]) {
                return Err(Error::NonMonotoneSamples { index: i });
            }
        }
        let dim = values[0].nrows();
        for (i, m) in values.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::InvalidSpec(format!("sample {i} is not {dim}x{dim}")));
            }
            let defect = linalg::hermiticity_defect(m);
            if defect > hermiticity_tol {
                return Err(Error::NonHermitian { t: times[i], asymmetry: defect });
            }
        }
        let horizon = *times.last().unwrap();
        check_dims(dim, horizon)?;
        let family = HermitianFamily {
            dim,
            horizon,
            kind: FamilyKind::SampledGrid,
            source: Arc::new(Source::Grid { times, values }),
            origin: 0.0,
            sign: 1.0,
            h_fd: default_h_fd(horizon),
            hermiticity_tol,
        };
        family.validate()?;
        Ok(family)
    }

    /// Block-diagonal direct sum. All blocks must share the horizon.
    pub fn direct_sum(blocks: Vec<HermitianFamily>) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| Error::InvalidSpec("direct sum of zero blocks".into()))?;
        let horizon = first.horizon;
        for (i, b) in blocks.iter().enumerate() {
            if (b.horizon - horizon).abs() > 1e-12 * horizon.max(1.0) {
                return Err(Error::InvalidSpec(format!(
                    "block {i} has horizon {} but block 0 has {horizon}",
                    b.horizon
                )));
            }
        }
        let dim = blocks.iter().map(|b| b.dim).sum();
        let tol = blocks.iter().map(|b| b.hermiticity_tol).fold(0.0, f64::max);
        let family = HermitianFamily {
            dim,
            horizon,
            kind: FamilyKind::DirectSumOfBlocks,
            source: Arc::new(Source::Blocks(blocks)),
            origin: 0.0,
            sign: 1.0,
            h_fd: default_h_fd(horizon),
            hermiticity_tol: tol,
        };
        family.validate()?;
        Ok(family)
    }

    fn validate(&self) -> Result<()> {
        for k in 0..HERMITICITY_PROBES {
            let t = self.horizon * k as f64 / (HERMITICITY_PROBES - 1) as f64;
            let m = self.evaluate(t);
            if m.nrows() != self.dim || m.ncols() != self.dim {
                return Err(Error::InvalidSpec(format!(
                    "callback returned a {}x{} matrix, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    self.dim,
                    self.dim
                )));
            }
            let defect = linalg::hermiticity_defect(&m);
            let scale = match self.kind {
                FamilyKind::SampledGrid => 1.0,
                _ => linalg::frobenius(&m).max(1.0),
            };
            if !(defect <= self.hermiticity_tol * scale) {
                return Err(Error::NonHermitian { t, asymmetry: defect });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn h_fd(&self) -> f64 {
        self.h_fd
    }

    pub fn hermiticity_tol(&self) -> f64 {
        self.hermiticity_tol
    }

    pub fn with_h_fd(mut self, h_fd: f64) -> Self {
        self.h_fd = h_fd;
        self
    }

    /// `A(t)`.
    pub fn evaluate(&self, t: f64) -> CMatrix {
        let m = self.source.eval(self.origin + t);
        if self.sign == 1.0 {
            m
        } else {
            m.scale(self.sign)
        }
    }

    /// Analytic `A'(t)` when every part of the family supplies one.
    pub fn analytic_derivative(&self, t: f64) -> Option<CMatrix> {
        self.source.deriv(self.origin + t).map(|m| m.scale(self.sign))
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.source.has_deriv()
    }

    /// `A'(t)`: the analytic derivative if present, else a second-order finite
    /// difference with step `h_fd` (one-sided within `h_fd` of an endpoint).
    /// The result is re-Hermitized.
    pub fn derivative_at(&self, t: f64) -> CMatrix {
        if let Some(d) = self.analytic_derivative(t) {
            return linalg::hermitian_part(&d);
        }
        let h = self.h_fd;
        let d = if t - h < 0.0 {
            (self.evaluate(t + h).scale(4.0) - self.evaluate(t).scale(3.0) - self.evaluate(t + 2.0 * h))
                .unscale(2.0 * h)
        } else if t + h > self.horizon {
            (self.evaluate(t).scale(3.0) - self.evaluate(t - h).scale(4.0) + self.evaluate(t - 2.0 * h))
                .unscale(2.0 * h)
        } else {
            (self.evaluate(t + h) - self.evaluate(t - h)).unscale(2.0 * h)
        };
        linalg::hermitian_part(&d)
    }

    /// `s -> A(start + s)` on `[0, end - start]`.
    pub fn restrict(&self, start: f64, end: f64) -> Result<Self> {
        if !(0.0 <= start && start < end && end <= self.horizon * (1.0 + 1e-12)) {
            return Err(Error::InvalidArgument(format!(
                "restriction [{start}, {end}] not inside [0, {}]",
                self.horizon
            )));
        }
        let mut out = self.clone();
        out.origin = self.origin + start;
        out.horizon = end - start;
        Ok(out)
    }

    /// `t -> -A(t)`.
    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.sign = -self.sign;
        out
    }

    /// Dimensions of the diagonal blocks, for direct sums.
    pub fn block_dims(&self) -> Option<Vec<usize>> {
        match self.source.as_ref() {
            Source::Blocks(blocks) => Some(blocks.iter().map(|b| b.dim).collect()),
            _ => None,
        }
    }

    /// The diagonal blocks of a direct sum at time `t`.
    pub fn block_values(&self, t: f64) -> Option<Vec<CMatrix>> {
        match self.source.as_ref() {
            Source::Blocks(blocks) => Some(
                blocks
                    .iter()
                    .map(|b| b.evaluate(self.origin + t).scale(self.sign))
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Evenly spaced probe times `0 = t_0 < ... < t_{count-1} = T`.
    pub fn probe_times(&self, count: usize) -> Vec<f64> {
        linspace(0.0, self.horizon, count)
    }
}

pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|k| {
                if k == count - 1 {
                    end
                } else {
                    start + (end - start) * k as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

impl Source {
    fn eval(&self, t: f64) -> CMatrix {
        match self {
            Source::Callback { eval, .. } => eval(t),
            Source::Grid { times, values } => interpolate(times, values, t),
            Source::Blocks(blocks) => {
                let parts: Vec<CMatrix> = blocks.iter().map(|b| b.evaluate(t)).collect();
                linalg::block_diagonal(&parts)
            }
        }
    }

    fn deriv(&self, t: f64) -> Option<CMatrix> {
        match self {
            Source::Callback { deriv, .. } => deriv.as_ref().map(|d| d(t)),
            Source::Grid { .. } => None,
            Source::Blocks(blocks) => {
                let parts: Option<Vec<CMatrix>> = blocks.iter().map(|b| b.analytic_derivative(t)).collect();
                parts.map(|p| linalg::block_diagonal(&p))
            }
        }
    }

    fn has_deriv(&self) -> bool {
        match self {
            Source::Callback { deriv, .. } => deriv.is_some(),
            Source::Grid { .. } => false,
            Source::Blocks(blocks) => blocks.iter().all(|b| b.has_analytic_derivative()),
        }
    }
}

fn interpolate(times: &[f64], values: &[CMatrix], t: f64) -> CMatrix {
    let last = times.len() - 1;
    if t <= times[0] {
        return values[0].clone();
    }
    if t >= times[last] {
        return values[last].clone();
    }
    let i = times.partition_point(|&x| x <= t);
    let (t0, t1) = (times[i - 1], times[i]);
    let w = (t - t0) / (t1 - t0);
    values[i - 1].scale(1.0 - w) + values[i].scale(w)
}

/// Right-endpoint piecewise-constant approximant `A_n(t) = A(t_k)` on
/// `(t_{k-1}, t_k]`, with `t_k = kT/n`.
#[derive(Clone, Debug)]
pub struct PiecewiseConstantApproximant {
    pub base: HermitianFamily,
    pub steps: usize,
    /// `values[k-1] = A(t_k)` for `k = 1..=steps`.
    pub values: Vec<CMatrix>,
}

impl PiecewiseConstantApproximant {
    pub fn node(&self, k: usize) -> f64 {
        grid_node(self.base.horizon(), self.steps, k)
    }

    pub fn value_at(&self, t: f64) -> &CMatrix {
        let t = t.clamp(0.0, self.base.horizon());
        let k = (1..=self.steps).find(|&k| t <= self.node(k)).unwrap_or(self.steps);
        &self.values[k - 1]
    }

    /// `max_t ||A_n(t) - A(t)||_2` over `probes` equispaced times.
    pub fn sup_error(&self, probes: usize) -> f64 {
        self.base
            .probe_times(probes)
            .into_iter()
            .map(|t| linalg::spectral_norm(&(self.value_at(t) - self.base.evaluate(t))))
            .fold(0.0, f64::max)
    }
}

/// `t_k = kT/n`, exact at `k = n`.
pub fn grid_node(horizon: f64, steps: usize, k: usize) -> f64 {
    if k == steps {
        horizon
    } else {
        k as f64 * horizon / steps as f64
    }
}

pub fn piecewise_constant(family: &HermitianFamily, steps: usize) -> Result<PiecewiseConstantApproximant> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    let values = (1..=steps)
        .map(|k| family.evaluate(grid_node(family.horizon(), steps, k)))
        .collect();
    Ok(PiecewiseConstantApproximant { base: family.clone(), steps, values })
}

/// Complex matrix serialized row-major as `[re, im]` pairs.
pub type MatrixRows = Vec<Vec<[f64; 2]>>;

pub fn matrix_from_rows(rows: &MatrixRows) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::InvalidSpec("empty matrix".into()));
    }
    let mut m = linalg::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidSpec(format!("matrix row {i} has {} entries, expected {n}", row.len())));
        }
        for (j, [re, im]) in row.iter().enumerate() {
            m[(i, j)] = C64::new(*re, *im);
        }
    }
    Ok(m)
}

pub fn matrix_to_rows(m: &CMatrix) -> MatrixRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn default_horizon() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CounterexampleStage {
    #[default]
    Single,
    Extended,
}

/// Structured family description, as read from scenario files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "kebab-case")]
pub enum FamilySpec {
    /// `A(t) = A_0`, given either as a real diagonal or a full matrix.
    Constant {
        #[serde(default)]
        diag: Option<Vec<f64>>,
        #[serde(default)]
        matrix: Option<MatrixRows>,
        #[serde(default = "default_horizon")]
        horizon: f64,
    },
    /// `A(t) = diag(offsets + t * slopes)`.
    LinearDiagonal {
        offsets: Vec<f64>,
        slopes: Vec<f64>,
        #[serde(default = "default_horizon")]
        horizon: f64,
    },
    /// Smooth random family built from seeded Gaussian Hermitian matrices.
    RandomSmooth {
        dim: usize,
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default)]
        scale: Option<f64>,
        #[serde(default)]
        drift: Option<f64>,
        #[serde(default = "default_horizon")]
        horizon: f64,
    },
    DirectSum { blocks: Vec<FamilySpec> },
    Sampled { times: Vec<f64>, matrices: Vec<MatrixRows> },
    /// Diagonal `A_0` plus a smooth perturbation of fixed rank.
    CompactPerturbation {
        dim: usize,
        rank: usize,
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default)]
        strength: Option<f64>,
        #[serde(default = "default_horizon")]
        horizon: f64,
    },
    /// Single eigenspace-swapping 2x2 block on `[0, 1]`.
    SwapBlock { lambda1: f64, lambda2: f64 },
    /// Truncated direct sum of swap blocks.
    Counterexample {
        blocks: usize,
        #[serde(default)]
        lambdas: Option<Vec<f64>>,
        #[serde(default)]
        stage: CounterexampleStage,
    },
}

/// Seed used by random builtins that do not name their own.
pub const DEFAULT_SEED: u64 = 0;

pub fn make_family(spec: &FamilySpec) -> Result<HermitianFamily> {
    make_family_seeded(spec, DEFAULT_SEED)
}

/// Builds a family; `default_seed` fills in for random builtins without a seed.
pub fn make_family_seeded(spec: &FamilySpec, default_seed: u64) -> Result<HermitianFamily> {
    match spec {
        FamilySpec::Constant { diag, matrix, horizon } => {
            let m = match (diag, matrix) {
                (Some(d), None) => {
                    if d.is_empty() {
                        return Err(Error::InvalidSpec("constant family with empty diagonal".into()));
                    }
                    linalg::real_diagonal(d)
                }
                (None, Some(rows)) => {
                    let m = matrix_from_rows(rows)?;
                    let defect = linalg::hermiticity_defect(&m);
                    if defect > DEFAULT_HERMITICITY_TOL {
                        return Err(Error::NonHermitian { t: 0.0, asymmetry: defect });
                    }
                    m
                }
                _ => return Err(Error::InvalidSpec("constant family needs exactly one of `diag` or `matrix`".into())),
            };
            constant(m, *horizon)
        }
        FamilySpec::LinearDiagonal { offsets, slopes, horizon } => linear_diagonal(offsets, slopes, *horizon),
        FamilySpec::RandomSmooth { dim, seed, scale, drift, horizon } => random_smooth(
            *dim,
            seed.unwrap_or(default_seed),
            scale.unwrap_or(1.0),
            drift.unwrap_or(2.0),
            *horizon,
        ),
        FamilySpec::DirectSum { blocks } => {
            let parts = blocks
                .iter()
                .map(|b| make_family_seeded(b, default_seed))
                .collect::<Result<Vec<_>>>()?;
            HermitianFamily::direct_sum(parts)
        }
        FamilySpec::Sampled { times, matrices } => {
            if times.is_empty() || matrices.is_empty() {
                return Err(Error::EmptyGrid);
            }
            let values = matrices.iter().map(matrix_from_rows).collect::<Result<Vec<_>>>()?;
            HermitianFamily::from_samples(times.clone(), values)
        }
        FamilySpec::CompactPerturbation { dim, rank, seed, strength, horizon } => compact_perturbation(
            *dim,
            *rank,
            seed.unwrap_or(default_seed),
            strength.unwrap_or(1.0),
            *horizon,
        ),
        FamilySpec::SwapBlock { lambda1, lambda2 } => {
            let spec = crate::counterexample::SwapBlockSpec::new(*lambda1, *lambda2)?;
            crate::counterexample::swap_block_family(&spec)
        }
        FamilySpec::Counterexample { blocks, lambdas, stage } => {
            let spec = crate::counterexample::TruncatedSumSpec::new(*blocks, lambdas.clone(), *stage)?;
            match stage {
                CounterexampleStage::Single => crate::counterexample::truncated_counterexample(&spec).map(|(f, _)| f),
                CounterexampleStage::Extended => {
                    crate::counterexample::extended_counterexample(&spec).map(|(f, _)| f)
                }
            }
        }
    }
}

pub fn constant(matrix: CMatrix, horizon: f64) -> Result<HermitianFamily> {
    let dim = matrix.nrows();
    let zero = linalg::zeros(dim, dim);
    HermitianFamily::from_fn_with_derivative(dim, horizon, move |_| matrix.clone(), move |_| zero.clone())
}

pub fn linear_diagonal(offsets: &[f64], slopes: &[f64], horizon: f64) -> Result<HermitianFamily> {
    if offsets.is_empty() || offsets.len() != slopes.len() {
        return Err(Error::InvalidSpec(format!(
            "linear-diagonal needs matching non-empty offsets and slopes ({} vs {})",
            offsets.len(),
            slopes.len()
        )));
    }
    let (o, s) = (offsets.to_vec(), slopes.to_vec());
    let slopes_m = linalg::real_diagonal(slopes);
    HermitianFamily::from_fn_with_derivative(
        offsets.len(),
        horizon,
        move |t| {
            let d: Vec<f64> = o.iter().zip(&s).map(|(a, b)| a + b * t).collect();
            linalg::real_diagonal(&d)
        },
        move |_| slopes_m.clone(),
    )
}

/// Hermitian matrix `(X + X^H) / (2 sqrt(n))` with standard complex Gaussian `X`.
pub fn gaussian_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let mut x = linalg::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            x[(i, j)] = C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
        }
    }
    (&x + x.adjoint()).unscale(2.0 * (dim as f64).sqrt())
}

/// `A(t) = scale * (H_0 + drift (t/T) H_1 + sin(pi t/T) H_2 + 0.5 sin(2 pi t/T) H_3)`.
pub fn random_smooth(dim: usize, seed: u64, scale: f64, drift: f64, horizon: f64) -> Result<HermitianFamily> {
    check_dims(dim, horizon)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h: Vec<CMatrix> = (0..4).map(|_| gaussian_hermitian(&mut rng, dim).scale(scale)).collect();
    let h2 = h.clone();
    let w = std::f64::consts::PI / horizon;
    HermitianFamily::from_fn_with_derivative(
        dim,
        horizon,
        move |t| {
            &h[0] + h[1].scale(drift * t / horizon) + h[2].scale((w * t).sin()) + h[3].scale(0.5 * (2.0 * w * t).sin())
        },
        move |t| {
            h2[1].scale(drift / horizon) + h2[2].scale(w * (w * t).cos()) + h2[3].scale(w * (2.0 * w * t).cos())
        },
    )
}

/// `A(t) = diag(-1, 1, -2, 2, ...) + strength * sin(pi t / (2T)) * K` with
/// `K` a seeded Hermitian matrix of rank `rank`, so `A'(t)` has rank `rank`.
pub fn compact_perturbation(dim: usize, rank: usize, seed: u64, strength: f64, horizon: f64) -> Result<HermitianFamily> {
    check_dims(dim, horizon)?;
    if rank == 0 || rank > dim {
        return Err(Error::InvalidSpec(format!("perturbation rank {rank} must be in 1..={dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_hermitian(&mut rng, dim);
    let (_, vecs) = linalg::hermitian_eigen(&g, 0.0)?;
    let mut k = linalg::zeros(dim, dim);
    for j in 0..rank {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let v = vecs.column(j);
        k += (v * v.adjoint()).scale(sign);
    }
    let diag: Vec<f64> = (0..dim)
        .map(|i| {
            let level = (i / 2 + 1) as f64;
            if i % 2 == 0 {
                -level
            } else {
                level
            }
        })
        .collect();
    let a0 = linalg::real_diagonal(&diag);
    let k2 = k.clone();
    let w = std::f64::consts::FRAC_PI_2 / horizon;
    HermitianFamily::from_fn_with_derivative(
        dim,
        horizon,
        move |t| &a0 + k.scale(strength * (w * t).sin()),
        move |t| k2.scale(strength * w * (w * t).cos()),
    )
}
