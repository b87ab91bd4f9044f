//! Eigenspace-swapping families: a 2x2 block whose evolution turns `e_1`
//! into `e_2` without any spectral flow, truncated direct sums of such
//! blocks, and a two-stage extension on `[0, 2]`.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{linspace, CounterexampleStage, HermitianFamily};
use crate::index::{self, IndexOptions, Verdict};
use crate::linalg::{self, CMatrix, C64};
use crate::spectral;

/// `S(x) = x^3 (10 - 15x + 6x^2)` with first and second derivatives.
fn smoothstep(x: f64) -> (f64, f64, f64) {
    let s = x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
    let d = 30.0 * x * x * (1.0 - x) * (1.0 - x);
    let dd = 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
    (s, d, dd)
}

/// Ramps `phi: [0,1] -> [0, pi/2]` with `phi(0) = 0`, `phi(1) = pi/2` and
/// vanishing end slopes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Ramp {
    /// `(pi/2) S(t)`; peak slope `(pi/2)(15/8)`.
    Smoothstep,
    /// `(pi/2) S(S(t))`; peak slope `(pi/2)(15/8)^2`.
    SmoothstepComposed,
    /// Slope profile `phi' = (pi/2) m w(t)` with `w` rising through `S` on
    /// `[0, delta]`, equal to one in the middle and falling symmetrically;
    /// `m = 1/(1 - delta)` normalises the total rise.
    Plateau { delta: f64 },
}

pub const DEFAULT_PLATEAU_WIDTH: f64 = 0.2;
pub const RAMP_PROBES: usize = 1024;
pub const RAMP_SLOPE_BOUND: f64 = 2.0;
const RAMP_ENDPOINT_TOL: f64 = 1e-10;

impl Ramp {
    /// `(phi, phi', phi'')` at `t`, clamped to `[0, 1]`.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let t = t.clamp(0.0, 1.0);
        match *self {
            Ramp::Smoothstep => {
                let (s, d, dd) = smoothstep(t);
                (FRAC_PI_2 * s, FRAC_PI_2 * d, FRAC_PI_2 * dd)
            }
            Ramp::SmoothstepComposed => {
                let (s, d, dd) = smoothstep(t);
                let (s2, d2, dd2) = smoothstep(s);
                (FRAC_PI_2 * s2, FRAC_PI_2 * d2 * d, FRAC_PI_2 * (dd2 * d * d + d2 * dd))
            }
            Ramp::Plateau { delta } => {
                let (s, d, dd) = plateau(t, delta);
                (FRAC_PI_2 * s, FRAC_PI_2 * d, FRAC_PI_2 * dd)
            }
        }
    }

    pub fn phi(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    pub fn dphi(&self, t: f64) -> f64 {
        self.eval(t).1
    }

    /// Measures the ramp on `RAMP_PROBES` points and checks its constraints.
    pub fn check(&self) -> Result<RampStats> {
        if let Ramp::Plateau { delta } = *self {
            if !(delta > 0.0 && delta <= 0.5) {
                return Err(Error::RampViolation(format!("plateau width {delta} outside (0, 1/2]")));
            }
        }
        let (p0, d0, _) = self.eval(0.0);
        let (p1, d1, _) = self.eval(1.0);
        let endpoint = p0.abs().max((p1 - FRAC_PI_2).abs()).max(d0.abs()).max(d1.abs());
        if endpoint > RAMP_ENDPOINT_TOL {
            return Err(Error::RampViolation(format!("endpoint conditions off by {endpoint:e}")));
        }
        let mut max_dphi: f64 = 0.0;
        let mut max_ddphi: f64 = 0.0;
        for t in linspace(0.0, 1.0, RAMP_PROBES) {
            let (_, d, dd) = self.eval(t);
            max_dphi = max_dphi.max(d.abs());
            max_ddphi = max_ddphi.max(dd.abs());
        }
        if max_dphi > RAMP_SLOPE_BOUND {
            return Err(Error::RampViolation(format!(
                "max |phi'| = {max_dphi:.6} exceeds {RAMP_SLOPE_BOUND}"
            )));
        }
        Ok(RampStats { max_dphi, max_ddphi, c: max_dphi.max(max_ddphi) })
    }
}

fn plateau(t: f64, delta: f64) -> (f64, f64, f64) {
    // Antiderivative of S: I(x) = 2.5x^4 - 3x^5 + x^6, I(1) = 1/2.
    let integral = |x: f64| x.powi(4) * (2.5 - 3.0 * x + x * x);
    let m = 1.0 / (1.0 - delta);
    if t <= delta {
        let x = t / delta;
        let (s, d, _) = smoothstep(x);
        (m * delta * integral(x), m * s, m * d / delta)
    } else if t < 1.0 - delta {
        (m * (0.5 * delta + (t - delta)), m, 0.0)
    } else {
        let (s, d, dd) = plateau(1.0 - t, delta);
        (1.0 - s, d, -dd)
    }
}

/// Measured ramp constants; `c = max(max |phi''|, max |phi'|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RampStats {
    pub max_dphi: f64,
    pub max_ddphi: f64,
    pub c: f64,
}

/// The ramp used when none is given; fails if its measured slope exceeds 2.
pub fn default_ramp() -> Result<(Ramp, RampStats)> {
    let ramp = Ramp::Plateau { delta: DEFAULT_PLATEAU_WIDTH };
    let stats = ramp.check()?;
    Ok((ramp, stats))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapBlockSpec {
    pub lambda1: f64,
    pub lambda2: f64,
    pub ramp: Ramp,
    pub stats: RampStats,
}

impl SwapBlockSpec {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        let (ramp, _) = default_ramp()?;
        Self::with_ramp(lambda1, lambda2, ramp)
    }

    pub fn with_ramp(lambda1: f64, lambda2: f64, ramp: Ramp) -> Result<Self> {
        if !lambda1.is_finite() || !lambda2.is_finite() {
            return Err(Error::InvalidSpec("swap block eigenvalues must be finite".into()));
        }
        let stats = ramp.check()?;
        Ok(SwapBlockSpec { lambda1, lambda2, ramp, stats })
    }

    /// `b(t) = [[0, i phi' e^{i(l1-l2)t}], [-i phi' e^{i(l2-l1)t}, 0]]`.
    pub fn coupling(&self, t: f64) -> CMatrix {
        let (_, d, _) = self.ramp.eval(t);
        let z = C64::new(0.0, d) * C64::from_polar(1.0, (self.lambda1 - self.lambda2) * t);
        off_diagonal(z)
    }

    pub fn coupling_derivative(&self, t: f64) -> CMatrix {
        let (_, d, dd) = self.ramp.eval(t);
        let w = self.lambda1 - self.lambda2;
        let z = C64::new(0.0, 1.0) * C64::new(dd, d * w) * C64::from_polar(1.0, w * t);
        off_diagonal(z)
    }

    /// `a + b(t)` with `a = diag(lambda1, lambda2)`.
    pub fn matrix(&self, t: f64) -> CMatrix {
        let mut m = self.coupling(t);
        m[(0, 0)] += self.lambda1;
        m[(1, 1)] += self.lambda2;
        m
    }

    /// Exact propagator `q(t, 0)`.
    pub fn closed_form(&self, t: f64) -> CMatrix {
        let phi = self.ramp.phi(t);
        let (c, s) = (phi.cos(), phi.sin());
        let e1 = C64::from_polar(1.0, self.lambda1 * t);
        let e2 = C64::from_polar(1.0, self.lambda2 * t);
        CMatrix::from_row_slice(2, 2, &[e1 * c, -e1 * s, e2 * s, e2 * c])
    }

    /// Eigenvalues of `a + b(t)`, ascending.
    pub fn eigenvalues(&self, t: f64) -> [f64; 2] {
        let d = self.ramp.dphi(t);
        let mean = 0.5 * (self.lambda1 + self.lambda2);
        let half = 0.5 * (self.lambda1 - self.lambda2);
        let r = (half * half + d * d).sqrt();
        [mean - r, mean + r]
    }

    /// Measured sup norms of `b` and `b'` on the ramp probe grid.
    pub fn bounds(&self) -> BlockBounds {
        let mut max_b: f64 = 0.0;
        let mut max_db: f64 = 0.0;
        for t in linspace(0.0, 1.0, RAMP_PROBES) {
            max_b = max_b.max(linalg::spectral_norm(&self.coupling(t)));
            max_db = max_db.max(linalg::spectral_norm(&self.coupling_derivative(t)));
        }
        let bound = self.stats.c * ((self.lambda1 - self.lambda2).abs() + 1.0);
        BlockBounds {
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            max_b_norm: max_b,
            max_db_norm: max_db,
            db_bound: bound,
            within_bounds: max_b <= RAMP_SLOPE_BOUND && max_db <= bound,
        }
    }
}

fn off_diagonal(z: C64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), z, z.conj(), C64::new(0.0, 0.0)])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockBounds {
    pub lambda1: f64,
    pub lambda2: f64,
    pub max_b_norm: f64,
    pub max_db_norm: f64,
    /// `c (|lambda1 - lambda2| + 1)`.
    pub db_bound: f64,
    pub within_bounds: bool,
}

/// `a + b(t)` on `[0, 1]`, with analytic derivative.
pub fn swap_block_family(spec: &SwapBlockSpec) -> Result<HermitianFamily> {
    let (s1, s2) = (*spec, *spec);
    HermitianFamily::from_fn_with_derivative(2, 1.0, move |t| s1.matrix(t), move |t| s2.coupling_derivative(t))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSumSpec {
    pub blocks: usize,
    /// Strictly increasing, positive.
    pub lambdas: Vec<f64>,
    pub ramp: Ramp,
    pub stage: CounterexampleStage,
}

/// `lambda_i = 5 (i + 1)`.
pub fn default_lambdas(blocks: usize) -> Vec<f64> {
    LambdaRule::default().lambdas(blocks)
}

impl TruncatedSumSpec {
    pub fn new(blocks: usize, lambdas: Option<Vec<f64>>, stage: CounterexampleStage) -> Result<Self> {
        let (ramp, _) = default_ramp()?;
        Self::with_ramp(blocks, lambdas, stage, ramp)
    }

    pub fn with_ramp(blocks: usize, lambdas: Option<Vec<f64>>, stage: CounterexampleStage, ramp: Ramp) -> Result<Self> {
        if blocks == 0 {
            return Err(Error::InvalidSpec("need at least one block".into()));
        }
        if stage == CounterexampleStage::Extended && blocks < 2 {
            return Err(Error::InvalidSpec("the extended family needs at least two blocks".into()));
        }
        let lambdas = lambdas.unwrap_or_else(|| default_lambdas(blocks));
        if lambdas.len() != blocks {
            return Err(Error::InvalidSpec(format!("{} lambdas given for {blocks} blocks", lambdas.len())));
        }
        if lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) || lambdas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpec("lambdas must be positive and strictly increasing".into()));
        }
        ramp.check()?;
        Ok(TruncatedSumSpec { blocks, lambdas, ramp, stage })
    }

    /// Block `i`: `a_i = diag(-lambda_i, lambda_i)` plus its coupling.
    pub fn block(&self, i: usize) -> Result<SwapBlockSpec> {
        SwapBlockSpec::with_ramp(-self.lambdas[i], self.lambdas[i], self.ramp)
    }

    /// Second-stage block coupling `iota_i(e_2)` and `iota_{i+1}(e_1)`.
    pub fn link(&self, i: usize) -> Result<SwapBlockSpec> {
        SwapBlockSpec::with_ramp(self.lambdas[i], -self.lambdas[i + 1], self.ramp)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub blocks: usize,
    pub lambdas: Vec<f64>,
    pub ramp: RampStats,
    pub max_b_norm: f64,
    /// Measured `max_t ||b_i'(t)||` per block.
    pub block_derivative_max: Vec<f64>,
    /// Global constant in `||b_i'|| <= c (lambda_i + 1)`: twice the ramp
    /// constant, since block `i` has `|lambda1 - lambda2| = 2 lambda_i`.
    pub c_global: f64,
    pub derivative_bound_holds: bool,
    /// Smallest `min_t |eigenvalue|` over blocks.
    pub spectral_gap: f64,
}

/// Direct sum of the swap blocks `a_i + b_i(t)`, `i < N`, on `[0, 1]`.
pub fn truncated_counterexample(spec: &TruncatedSumSpec) -> Result<(HermitianFamily, TruncationReport)> {
    let blocks = (0..spec.blocks).map(|i| spec.block(i)).collect::<Result<Vec<_>>>()?;
    let family = HermitianFamily::direct_sum(blocks.iter().map(swap_block_family).collect::<Result<Vec<_>>>()?)?;
    let stats = blocks[0].stats;
    let c_global = 2.0 * stats.c;
    let bounds: Vec<BlockBounds> = blocks.iter().map(|b| b.bounds()).collect();
    let derivative_bound_holds = bounds
        .iter()
        .zip(&spec.lambdas)
        .all(|(b, l)| b.max_db_norm <= c_global * (l + 1.0));
    let report = TruncationReport {
        blocks: spec.blocks,
        lambdas: spec.lambdas.clone(),
        ramp: stats,
        max_b_norm: bounds.iter().map(|b| b.max_b_norm).fold(0.0, f64::max),
        block_derivative_max: bounds.iter().map(|b| b.max_db_norm).collect(),
        c_global,
        derivative_bound_holds,
        spectral_gap: spec.lambdas[0],
    };
    Ok((family, report))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtendedReport {
    pub blocks: usize,
    /// Indices (in the `2N`-dimensional space) left fixed by the second stage.
    pub untouched: Vec<usize>,
    /// Truncated pair `(P_{<0}(0), P̂_{<0}(2))` predicted by the construction.
    pub expected_kernel_dim: usize,
    pub expected_coker_dim: usize,
    pub expected_index: i64,
    /// Index of the untruncated operator.
    pub untruncated_index: i64,
    pub boundary_effect: bool,
    pub note: String,
}

/// Two-stage family on `[0, 2]`: the swap blocks on `[0, 1]`, then couplings
/// of `iota_i(e_2)` with `iota_{i+1}(e_1)` for `i < N - 1` on `[1, 2]`.
pub fn extended_counterexample(spec: &TruncatedSumSpec) -> Result<(HermitianFamily, ExtendedReport)> {
    if spec.blocks < 2 {
        return Err(Error::InvalidSpec("the extended family needs at least two blocks".into()));
    }
    let n = spec.blocks;
    let first = (0..n).map(|i| spec.block(i)).collect::<Result<Vec<_>>>()?;
    let second = (0..n - 1).map(|i| spec.link(i)).collect::<Result<Vec<_>>>()?;
    let base: Vec<f64> = spec.lambdas.iter().flat_map(|&l| [-l, l]).collect();
    let a0 = linalg::real_diagonal(&base);
    let (f1, s1) = (first.clone(), second.clone());
    let (f2, s2) = (first, second);
    let place = move |t: f64, blocks: &[SwapBlockSpec], links: &[SwapBlockSpec], deriv: bool| -> CMatrix {
        let mut m = linalg::zeros(2 * n, 2 * n);
        let (specs, offset, local): (&[SwapBlockSpec], usize, f64) = if t <= 1.0 { (blocks, 0, t) } else { (links, 1, t - 1.0) };
        for (i, b) in specs.iter().enumerate() {
            let c = if deriv { b.coupling_derivative(local) } else { b.coupling(local) };
            let r = 2 * i + offset;
            m.view_mut((r, r), (2, 2)).copy_from(&c);
        }
        m
    };
    let place2 = place.clone();
    let family = HermitianFamily::from_fn_with_derivative(
        2 * n,
        2.0,
        move |t| &a0 + place(t, &f1, &s1, false),
        move |t| place2(t, &f2, &s2, true),
    )?;
    let report = ExtendedReport {
        blocks: n,
        untouched: vec![0, 2 * n - 1],
        expected_kernel_dim: 1,
        expected_coker_dim: 1,
        expected_index: 0,
        untruncated_index: -1,
        boundary_effect: true,
        note: "the top block's e_1 direction returns to e_2 instead of moving on, adding a kernel vector \
               that the untruncated family does not have; the cokernel vector iota_0(e_2) is genuine"
            .into(),
    };
    Ok((family, report))
}

/// Rule producing the block eigenvalues of a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum LambdaRule {
    /// `lambda_i = scale (i + 1)`.
    Linear { scale: f64 },
}

impl Default for LambdaRule {
    fn default() -> Self {
        LambdaRule::Linear { scale: 5.0 }
    }
}

impl LambdaRule {
    pub fn lambdas(&self, blocks: usize) -> Vec<f64> {
        match *self {
            LambdaRule::Linear { scale } => (0..blocks).map(|i| scale * (i + 1) as f64).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub kernel_dim: usize,
    pub coker_dim: usize,
    pub index: i64,
    pub sigma_min: f64,
    pub sfl: i64,
    pub verdict: Verdict,
    /// `kernel_dim == N` and `sfl == 0`.
    pub expected: bool,
}

/// Evolved-pair index at `t = 1` and spectral flow of each truncation.
pub fn growth_experiment(ns: &[usize], rule: LambdaRule, opts: &IndexOptions) -> Result<Vec<GrowthRow>> {
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("block counts must be strictly ascending".into()));
    }
    ns.par_iter()
        .map(|&n| {
            let spec = TruncatedSumSpec::new(n, Some(rule.lambdas(n)), CounterexampleStage::Single)?;
            let (family, _) = truncated_counterexample(&spec)?;
            let report = index::evolved_pair(&family, 1.0, opts)?.report(opts.fredholm_margin);
            let sfl = spectral::spectral_flow_with(&family, &opts.partition)?;
            Ok(GrowthRow {
                n,
                kernel_dim: report.kernel_dim,
                coker_dim: report.coker_dim,
                index: report.index,
                sigma_min: report.sigma_min.unwrap_or(f64::NAN),
                sfl,
                verdict: report.verdict,
                expected: report.kernel_dim == n && sfl == 0,
            })
        })
        .collect()
}

pub const GROWTH_CSV_HEADER: &str = "N,kernel_dim,coker_dim,sigma_min,sfl";

pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from(GROWTH_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{:e},{}\n", r.n, r.kernel_dim, r.coker_dim, r.sigma_min, r.sfl));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn default_ramp_meets_constraints() {
        let (ramp, stats) = default_ramp().unwrap();
        assert!(stats.max_dphi <= 2.0);
        assert!((stats.max_dphi - FRAC_PI_2 * 1.25).abs() < 1e-12);
        assert!((ramp.phi(0.5) - FRAC_PI_4).abs() < 1e-14);
    }

    #[test]
    fn steep_ramps_are_rejected() {
        assert!(matches!(Ramp::Smoothstep.check(), Err(Error::RampViolation(_))));
        assert!(matches!(Ramp::SmoothstepComposed.check(), Err(Error::RampViolation(_))));
        assert!(matches!(Ramp::Plateau { delta: 0.7 }.check(), Err(Error::RampViolation(_))));
    }

    #[test]
    fn plateau_derivatives_match_differences() {
        let ramp = Ramp::Plateau { delta: 0.2 };
        let h = 1e-6;
        for t in [0.05, 0.13, 0.2, 0.5, 0.85, 0.97] {
            let (_, d, dd) = ramp.eval(t);
            let fd = (ramp.phi(t + h) - ramp.phi(t - h)) / (2.0 * h);
            let fdd = (ramp.dphi(t + h) - ramp.dphi(t - h)) / (2.0 * h);
            assert!((fd - d).abs() < 1e-8, "phi' at {t}");
            assert!((fdd - dd).abs() < 1e-5, "phi'' at {t}");
        }
    }

    #[test]
    fn coupling_vanishes_at_ends() {
        let spec = SwapBlockSpec::new(-5.0, 5.0).unwrap();
        assert!(linalg::frobenius(&spec.coupling(0.0)) < 1e-14);
        assert!(linalg::frobenius(&spec.coupling(1.0)) < 1e-14);
        assert!(linalg::hermiticity_defect(&spec.matrix(0.4)) < 1e-15);
    }

    #[test]
    fn closed_form_endpoint_swaps() {
        let spec = SwapBlockSpec::new(-3.0, 7.0).unwrap();
        let q = spec.closed_form(1.0);
        let expected = C64::from_polar(1.0, 7.0);
        assert!(q[(0, 0)].norm() < 1e-15);
        assert!((q[(1, 0)] - expected).norm() < 1e-15);
        assert!(linalg::unitarity_defect(&spec.closed_form(0.37)) < 1e-14);
    }

    #[test]
    fn closed_form_solves_the_equation() {
        let spec = SwapBlockSpec::new(-2.0, 3.0).unwrap();
        let h = 1e-6;
        for t in [0.1, 0.35, 0.6, 0.9] {
            let dq = (spec.closed_form(t + h) - spec.closed_form(t - h)).unscale(2.0 * h);
            let rhs = spec.matrix(t) * spec.closed_form(t) * C64::new(0.0, 1.0);
            assert!(linalg::frobenius(&(dq - rhs)) < 1e-7, "t={t}");
        }
    }

    #[test]
    fn block_eigenvalues_closed_form() {
        let spec = SwapBlockSpec::new(-5.0, 5.0).unwrap();
        for t in [0.1, 0.5, 0.95] {
            let (vals, _) = linalg::hermitian_eigen(&spec.matrix(t), t).unwrap();
            let exact = spec.eigenvalues(t);
            assert!((vals[0] - exact[0]).abs() < 1e-12 && (vals[1] - exact[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn truncation_spec_validation() {
        assert!(TruncatedSumSpec::new(0, None, CounterexampleStage::Single).is_err());
        assert!(TruncatedSumSpec::new(1, None, CounterexampleStage::Extended).is_err());
        assert!(TruncatedSumSpec::new(2, Some(vec![3.0, 1.0]), CounterexampleStage::Single).is_err());
        let s = TruncatedSumSpec::new(3, None, CounterexampleStage::Single).unwrap();
        assert_eq!(s.lambdas, vec![5.0, 10.0, 15.0]);
    }

    #[test]
    fn truncation_bounds_hold() {
        let spec = TruncatedSumSpec::new(4, None, CounterexampleStage::Single).unwrap();
        let (family, report) = truncated_counterexample(&spec).unwrap();
        assert_eq!(family.dim(), 8);
        assert!(report.max_b_norm <= 2.0);
        assert!(report.derivative_bound_holds);
    }

    #[test]
    fn csv_header_and_rows() {
        let row = GrowthRow {
            n: 2,
            kernel_dim: 2,
            coker_dim: 2,
            index: 0,
            sigma_min: 1e-12,
            sfl: 0,
            verdict: Verdict::NotFredholmSuspected,
            expected: true,
        };
        assert_eq!(growth_csv(&[row]), "N,kernel_dim,coker_dim,sigma_min,sfl\n2,2,2,1e-12,0\n");
    }
}
