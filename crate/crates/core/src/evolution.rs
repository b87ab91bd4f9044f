//! Evolution operator `Q(t, s)` for `d/dt Q = i A(t) Q`, built as an ordered
//! product of exponentials of a piecewise-constant approximant.
//!
//! The default scheme freezes `A` at the right endpoint of each grid cell,
//! `Q_n(t, s) = exp((t - t_{l-1}) i A(t_l)) ... exp((t_k - s) i A(t_k))`.
//! Off-grid arguments are handled with partial-cell factors, so the cocycle
//! property holds for arbitrary times. Two higher-order schemes are offered
//! for oracle comparisons where first-order convergence is too slow.

use std::collections::HashMap;
use std::sync::RwLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{grid_node, HermitianFamily};
use crate::linalg::{self, CMatrix, CVector, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default, Hash)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// `A_n(t) = A(t_k)` on `(t_{k-1}, t_k]`; first order.
    #[default]
    RightEndpoint,
    /// `A` frozen at each cell midpoint; second order.
    Midpoint,
    /// Fourth-order Magnus integrator with two Gauss-Legendre nodes per cell.
    Magnus4,
}

/// Unitary factor, dense or block-diagonal following the family's blocks.
#[derive(Clone, Debug)]
enum Factor {
    Dense(CMatrix),
    Blocks(Vec<CMatrix>),
}

impl Factor {
    fn identity(layout: &Option<Vec<usize>>, dim: usize) -> Factor {
        match layout {
            Some(dims) => Factor::Blocks(dims.iter().map(|&d| linalg::identity(d)).collect()),
            None => Factor::Dense(linalg::identity(dim)),
        }
    }

    /// `self * rhs`.
    fn mul(&self, rhs: &Factor) -> Factor {
        match (self, rhs) {
            (Factor::Dense(a), Factor::Dense(b)) => Factor::Dense(a * b),
            (Factor::Blocks(a), Factor::Blocks(b)) => Factor::Blocks(a.iter().zip(b).map(|(x, y)| x * y).collect()),
            (a, b) => Factor::Dense(a.to_dense() * b.to_dense()),
        }
    }

    fn to_dense(&self) -> CMatrix {
        match self {
            Factor::Dense(a) => a.clone(),
            Factor::Blocks(b) => linalg::block_diagonal(b),
        }
    }
}

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // sqrt(3) / 6

/// Effective Hermitian generator `H` with `exp(i H)` the Magnus-4 step over `[a, b]`.
fn magnus_generator(a1: &CMatrix, a2: &CMatrix, dt: f64) -> CMatrix {
    let comm = a2 * a1 - a1 * a2;
    let h = (a1 + a2).scale(0.5 * dt) + comm * C64::new(0.0, 3f64.sqrt() / 12.0 * dt * dt);
    linalg::hermitian_part(&h)
}

fn step_exponential(a: &[CMatrix], b: Option<&[CMatrix]>, scheme: Scheme, dt: f64) -> Result<Vec<CMatrix>> {
    match scheme {
        Scheme::RightEndpoint | Scheme::Midpoint => a.iter().map(|m| linalg::hermitian_exp(m, dt)).collect(),
        Scheme::Magnus4 => {
            let b = b.expect("Magnus step needs two samples");
            a.iter()
                .zip(b)
                .map(|(m1, m2)| linalg::hermitian_exp(&magnus_generator(m1, m2, dt), 1.0))
                .collect()
        }
    }
}

/// Grid-indexed propagator at a fixed refinement level.
///
/// Queries are safe to issue from several threads; results of past queries
/// are memoised.
pub struct Propagator {
    family: HermitianFamily,
    steps: usize,
    scheme: Scheme,
    layout: Option<Vec<usize>>,
    /// `factors[k-1] = Q_n(t_k, t_{k-1})`.
    factors: Vec<Factor>,
    cache: RwLock<HashMap<(u64, u64), CMatrix>>,
}

impl std::fmt::Debug for Propagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Propagator")
            .field("steps", &self.steps)
            .field("scheme", &self.scheme)
            .field("dim", &self.family.dim())
            .finish()
    }
}

impl Propagator {
    pub fn new(family: &HermitianFamily, steps: usize, scheme: Scheme) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidArgument("steps must be at least 1".into()));
        }
        let layout = family.block_dims();
        let mut prop = Propagator {
            family: family.clone(),
            steps,
            scheme,
            layout,
            factors: Vec::new(),
            cache: RwLock::new(HashMap::new()),
        };
        let factors = (1..=steps)
            .into_par_iter()
            .map(|k| prop.cell_factor(k, prop.node(k - 1), prop.node(k)))
            .collect::<Result<Vec<_>>>()?;
        prop.factors = factors;
        Ok(prop)
    }

    pub fn family(&self) -> &HermitianFamily {
        &self.family
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// `t_k = kT/n`.
    pub fn node(&self, k: usize) -> f64 {
        grid_node(self.family.horizon(), self.steps, k)
    }

    /// `Q_n(t_k, t_{k-1})` for `k = 1..=steps`.
    pub fn grid_unitary(&self, k: usize) -> CMatrix {
        self.factors[k - 1].to_dense()
    }

    fn sample(&self, t: f64) -> Vec<CMatrix> {
        match self.family.block_values(t) {
            Some(blocks) => blocks,
            None => vec![self.family.evaluate(t)],
        }
    }

    fn wrap(&self, mut parts: Vec<CMatrix>) -> Factor {
        if self.layout.is_some() {
            Factor::Blocks(parts)
        } else {
            Factor::Dense(parts.pop().expect("one dense factor"))
        }
    }

    /// Factor for the sub-interval `[a, b]` of cell `k`.
    fn cell_factor(&self, k: usize, a: f64, b: f64) -> Result<Factor> {
        let dt = b - a;
        let parts = match self.scheme {
            Scheme::RightEndpoint => step_exponential(&self.sample(self.node(k)), None, self.scheme, dt)?,
            Scheme::Midpoint => {
                let mid = 0.5 * (self.node(k - 1) + self.node(k));
                step_exponential(&self.sample(mid), None, self.scheme, dt)?
            }
            Scheme::Magnus4 => {
                let c = 0.5 * (a + b);
                let s1 = self.sample(c - GAUSS_OFFSET * dt);
                let s2 = self.sample(c + GAUSS_OFFSET * dt);
                step_exponential(&s1, Some(&s2), self.scheme, dt)?
            }
        };
        Ok(self.wrap(parts))
    }

    /// Largest `l` with `t_l <= t`.
    fn left_node(&self, t: f64) -> usize {
        let n = self.steps;
        let mut l = ((t / self.family.horizon()) * n as f64).floor().clamp(0.0, n as f64) as usize;
        while l < n && self.node(l + 1) <= t {
            l += 1;
        }
        while l > 0 && self.node(l) > t {
            l -= 1;
        }
        l
    }

    fn check_time(&self, t: f64) -> Result<f64> {
        let horizon = self.family.horizon();
        let slack = 1e-12 * horizon.max(1.0);
        if !(t >= -slack && t <= horizon + slack) {
            return Err(Error::InvalidArgument(format!("time {t} outside [0, {horizon}]")));
        }
        Ok(t.clamp(0.0, horizon))
    }

    fn forward(&self, t: f64, s: f64) -> Result<Factor> {
        let mut acc = Factor::identity(&self.layout, self.family.dim());
        let mut cur = s;
        while cur < t {
            let k = self.left_node(cur) + 1;
            let (lo, hi) = (self.node(k - 1), self.node(k));
            let end = t.min(hi);
            let factor = if cur == lo && end == hi {
                self.factors[k - 1].clone()
            } else {
                self.cell_factor(k, cur, end)?
            };
            acc = factor.mul(&acc);
            cur = end;
        }
        Ok(acc)
    }

    /// `Q_n(t, s)`; for `t < s` this is `Q_n(s, t)^H`.
    pub fn evolve(&self, t: f64, s: f64) -> Result<CMatrix> {
        let t = self.check_time(t)?;
        let s = self.check_time(s)?;
        if t == s {
            return Ok(linalg::identity(self.family.dim()));
        }
        let key = (t.to_bits(), s.to_bits());
        if let Some(hit) = self.cache.read().expect("propagator cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let q = if t > s {
            self.forward(t, s)?.to_dense()
        } else {
            self.forward(s, t)?.to_dense().adjoint()
        };
        self.cache.write().expect("propagator cache poisoned").insert(key, q.clone());
        Ok(q)
    }

    /// `Q(t, s) x`.
    pub fn apply(&self, t: f64, s: f64, x: &CVector) -> Result<CVector> {
        Ok(self.evolve(t, s)? * x)
    }
}

/// `Q_n(t, s)` with the right-endpoint scheme.
pub fn propagate(family: &HermitianFamily, t: f64, s: f64, steps: usize) -> Result<CMatrix> {
    propagate_with(family, t, s, steps, Scheme::RightEndpoint)
}

pub fn propagate_with(family: &HermitianFamily, t: f64, s: f64, steps: usize, scheme: Scheme) -> Result<CMatrix> {
    Propagator::new(family, steps, scheme)?.evolve(t, s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveOptions {
    pub scheme: Scheme,
    pub initial_steps: usize,
    pub max_steps: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions { scheme: Scheme::RightEndpoint, initial_steps: 4, max_steps: 1 << 20 }
    }
}

#[derive(Clone, Debug)]
pub struct AdaptiveReport {
    pub unitary: CMatrix,
    /// Steps of the returned propagator.
    pub steps: usize,
    /// `||Q_{2n} - Q_n||_F` for each doubling, in order.
    pub differences: Vec<f64>,
    /// Ratios of consecutive differences.
    pub ratios: Vec<f64>,
}

/// Doubles the refinement until `||Q_{2n} - Q_n||_F < tol` and returns `Q_{2n}`.
pub fn propagate_adaptive(family: &HermitianFamily, t: f64, s: f64, tol: f64, opts: &AdaptiveOptions) -> Result<AdaptiveReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    // Refine until [s, t] spans `initial_steps` cells, otherwise a short
    // interval inside a single cell looks converged from the start.
    let initial = opts.initial_steps.max(1);
    let span = (t - s).abs() / family.horizon();
    let mut n = initial;
    while (n as f64) * span < initial as f64 && 2 * n <= opts.max_steps {
        n *= 2;
    }
    let mut prev = propagate_with(family, t, s, n, opts.scheme)?;
    let mut differences = Vec::new();
    loop {
        let next_n = 2 * n;
        if next_n > opts.max_steps {
            return Err(Error::MaxRefinementExceeded {
                steps: opts.max_steps,
                last_difference: differences.last().copied().unwrap_or(f64::INFINITY),
            });
        }
        let next = propagate_with(family, t, s, next_n, opts.scheme)?;
        let diff = linalg::frobenius(&(&next - &prev));
        differences.push(diff);
        if diff < tol {
            let ratios = differences.windows(2).map(|w| w[0] / w[1]).collect();
            return Ok(AdaptiveReport { unitary: next, steps: next_n, differences, ratios });
        }
        prev = next;
        n = next_n;
    }
}

/// Self-convergence ratios `||Q_n - Q_{2n}||_F / ||Q_{2n} - Q_{4n}||_F` at (t, s).
pub fn convergence_ratio(family: &HermitianFamily, t: f64, s: f64, n: usize, scheme: Scheme) -> Result<f64> {
    let q1 = propagate_with(family, t, s, n, scheme)?;
    let q2 = propagate_with(family, t, s, 2 * n, scheme)?;
    let q4 = propagate_with(family, t, s, 4 * n, scheme)?;
    Ok(linalg::frobenius(&(&q1 - &q2)) / linalg::frobenius(&(&q2 - &q4)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrature {
    Trapezoid,
    /// Trapezoid with the Euler-Maclaurin endpoint correction
    /// `-(h^2/12) (F'(b) - F'(a))`; fourth order.
    #[default]
    CorrectedTrapezoid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolterraOptions {
    pub terms: usize,
    pub nodes: usize,
    pub quadrature: Quadrature,
}

impl Default for VolterraOptions {
    fn default() -> Self {
        VolterraOptions { terms: 25, nodes: 512, quadrature: Quadrature::CorrectedTrapezoid }
    }
}

/// Partial sum `V_0 + ... + V_terms` of the iterated-integral series
/// `V_0 = I`, `V_m(r) = int_s^r i A(u) V_{m-1}(u) du`, evaluated at `r = t`.
pub fn volterra_oracle(family: &HermitianFamily, t: f64, s: f64, opts: &VolterraOptions) -> Result<CMatrix> {
    if opts.terms == 0 {
        return Err(Error::InvalidArgument("terms must be at least 1".into()));
    }
    if opts.nodes < 2 {
        return Err(Error::QuadratureFailure(format!("need at least 2 nodes, got {}", opts.nodes)));
    }
    let n = family.dim();
    let m = opts.nodes;
    let h = (t - s) / (m - 1) as f64;
    let nodes: Vec<f64> = (0..m).map(|k| if k == m - 1 { t } else { s + h * k as f64 }).collect();
    let i = C64::new(0.0, 1.0);
    let ia: Vec<CMatrix> = nodes.par_iter().map(|&u| family.evaluate(u) * i).collect();
    let corrected = opts.quadrature == Quadrature::CorrectedTrapezoid;
    let ia_prime: Vec<CMatrix> = if corrected {
        nodes.par_iter().map(|&u| family.derivative_at(u) * i).collect()
    } else {
        Vec::new()
    };

    let mut total = linalg::identity(n);
    let mut prev2: Option<Vec<CMatrix>> = None;
    let mut prev: Vec<CMatrix> = vec![linalg::identity(n); m];
    for _ in 1..=opts.terms {
        let integrand: Vec<CMatrix> = ia.iter().zip(&prev).map(|(a, v)| a * v).collect();
        let mut next = Vec::with_capacity(m);
        let mut acc = linalg::zeros(n, n);
        next.push(acc.clone());
        for k in 1..m {
            acc += (&integrand[k - 1] + &integrand[k]).scale(0.5 * h);
            next.push(acc.clone());
        }
        if corrected {
            // F = iA V_{m-1},  F' = iA' V_{m-1} + iA V'_{m-1},  V'_{m-1} = iA V_{m-2}.
            let deriv = |k: usize| -> CMatrix {
                let mut d = &ia_prime[k] * &prev[k];
                if let Some(p2) = &prev2 {
                    d += &ia[k] * (&ia[k] * &p2[k]);
                }
                d
            };
            let d0 = deriv(0);
            for (k, v) in next.iter_mut().enumerate().skip(1) {
                *v -= (deriv(k) - &d0).scale(h * h / 12.0);
            }
        }
        total += &next[m - 1];
        if next.iter().any(|v| v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())) {
            return Err(Error::QuadratureFailure("non-finite series term".into()));
        }
        prev2 = Some(std::mem::replace(&mut prev, next));
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct DuhamelTrajectory {
    pub times: Vec<f64>,
    pub values: Vec<CVector>,
    pub start_index: usize,
}

/// `F_s(g, x)(t) = Q(t,s) x + int_s^t Q(t,r) g(r) dr` on the propagator grid
/// (with `s` inserted), integrating cell by cell with the trapezoid rule.
pub fn duhamel_solve<G>(prop: &Propagator, s: f64, x: &CVector, g: G) -> Result<DuhamelTrajectory>
where
    G: Fn(f64) -> CVector,
{
    let family = prop.family();
    if x.len() != family.dim() {
        return Err(Error::InvalidArgument(format!("initial vector has length {}, expected {}", x.len(), family.dim())));
    }
    let mut times: Vec<f64> = (0..=prop.steps()).map(|k| prop.node(k)).collect();
    let start_index = match times.binary_search_by(|v| v.total_cmp(&s)) {
        Ok(i) => i,
        Err(i) => {
            times.insert(i, s);
            i
        }
    };
    let mut values = vec![CVector::zeros(family.dim()); times.len()];
    values[start_index] = x.clone();
    for j in start_index..times.len() - 1 {
        let (a, b) = (times[j], times[j + 1]);
        let u = prop.evolve(b, a)?;
        let h = b - a;
        values[j + 1] = &u * (&values[j] + g(a).scale(0.5 * h)) + g(b).scale(0.5 * h);
    }
    for j in (0..start_index).rev() {
        let (a, b) = (times[j], times[j + 1]);
        let u = prop.evolve(a, b)?;
        let h = b - a;
        values[j] = &u * (&values[j + 1] - g(b).scale(0.5 * h)) - g(a).scale(0.5 * h);
    }
    Ok(DuhamelTrajectory { times, values, start_index })
}

impl DuhamelTrajectory {
    /// `max ||f'(t) - i A(t) f(t) - g(t)||` over interior nodes, with `f'` by
    /// central differences.
    pub fn max_residual<G>(&self, family: &HermitianFamily, g: G) -> f64
    where
        G: Fn(f64) -> CVector,
    {
        let i = C64::new(0.0, 1.0);
        (1..self.times.len() - 1)
            .map(|j| {
                let dt = self.times[j + 1] - self.times[j - 1];
                let fd = (&self.values[j + 1] - &self.values[j - 1]).unscale(dt);
                let t = self.times[j];
                let r = fd - family.evaluate(t) * &self.values[j] * i - g(t);
                linalg::vector_norm(&r)
            })
            .fold(0.0, f64::max)
    }
}

/// `Â(t) = Q(0,t) A(t) Q(t,0)`.
pub fn evolved_family(family: &HermitianFamily, t: f64, steps: usize) -> Result<CMatrix> {
    evolved_family_with(&Propagator::new(family, steps, Scheme::RightEndpoint)?, t)
}

pub fn evolved_family_with(prop: &Propagator, t: f64) -> Result<CMatrix> {
    let q = prop.evolve(t, 0.0)?;
    Ok(linalg::hermitian_part(&(q.adjoint() * prop.family().evaluate(t) * q)))
}

/// `||Q(t,s) Q(s,r) - Q(t,r)||_F`.
pub fn cocycle_defect(prop: &Propagator, t: f64, s: f64, r: f64) -> Result<f64> {
    let lhs = prop.evolve(t, s)? * prop.evolve(s, r)?;
    Ok(linalg::frobenius(&(lhs - prop.evolve(t, r)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{constant, linear_diagonal, random_smooth};

    #[test]
    fn constant_family_gives_plain_exponential() {
        let a0 = linalg::real_diagonal(&[-1.0, 2.0]);
        let f = constant(a0.clone(), 1.0).unwrap();
        for steps in [1, 3, 16] {
            let q = propagate(&f, 0.8, 0.1, steps).unwrap();
            let exact = linalg::hermitian_exp(&a0, 0.7).unwrap();
            assert!(linalg::frobenius(&(q - exact)) < 1e-13);
        }
    }

    #[test]
    fn equal_times_give_identity() {
        let f = random_smooth(3, 1, 1.0, 1.0, 1.0).unwrap();
        let p = Propagator::new(&f, 8, Scheme::RightEndpoint).unwrap();
        assert_eq!(p.evolve(0.37, 0.37).unwrap(), linalg::identity(3));
    }

    #[test]
    fn reverse_is_adjoint() {
        let f = random_smooth(3, 2, 1.0, 1.0, 1.0).unwrap();
        let p = Propagator::new(&f, 10, Scheme::RightEndpoint).unwrap();
        let fwd = p.evolve(0.9, 0.15).unwrap();
        let back = p.evolve(0.15, 0.9).unwrap();
        assert!(linalg::frobenius(&(fwd.adjoint() - back)) < 1e-14);
        assert!(linalg::unitarity_defect(&fwd) < 1e-12);
    }

    #[test]
    fn off_grid_cocycle_is_exact() {
        let f = random_smooth(2, 3, 1.0, 1.0, 1.0).unwrap();
        let p = Propagator::new(&f, 7, Scheme::RightEndpoint).unwrap();
        assert!(cocycle_defect(&p, 0.93, 0.41, 0.02).unwrap() < 1e-12);
        assert!(cocycle_defect(&p, 0.1, 0.77, 0.5).unwrap() < 1e-12);
    }

    #[test]
    fn block_layout_matches_dense() {
        let a = random_smooth(2, 4, 1.0, 1.0, 1.0).unwrap();
        let b = random_smooth(3, 5, 1.0, 1.0, 1.0).unwrap();
        let sum = HermitianFamily::direct_sum(vec![a.clone(), b.clone()]).unwrap();
        let dense = HermitianFamily::from_fn(5, 1.0, move |t| {
            linalg::block_diagonal(&[a.evaluate(t), b.evaluate(t)])
        })
        .unwrap();
        for scheme in [Scheme::RightEndpoint, Scheme::Magnus4] {
            let q1 = propagate_with(&sum, 0.7, 0.0, 20, scheme).unwrap();
            let q2 = propagate_with(&dense, 0.7, 0.0, 20, scheme).unwrap();
            assert!(linalg::frobenius(&(q1 - q2)) < 1e-12);
        }
    }

    #[test]
    fn adaptive_constant_converges_immediately() {
        let f = constant(linalg::real_diagonal(&[-1.0, 2.0]), 1.0).unwrap();
        let r = propagate_adaptive(&f, 1.0, 0.0, 1e-10, &AdaptiveOptions::default()).unwrap();
        assert_eq!(r.differences.len(), 1);
    }

    #[test]
    fn adaptive_short_interval_is_refined() {
        let f = random_smooth(2, 4, 8.0, 1.0, 1.0).unwrap();
        let opts = AdaptiveOptions { scheme: Scheme::Magnus4, ..Default::default() };
        let r = propagate_adaptive(&f, 0.05, 0.0, 1e-10, &opts).unwrap();
        assert!(r.steps >= 4 * 20);
        let fine = propagate_with(&f, 0.05, 0.0, 1 << 14, Scheme::Magnus4).unwrap();
        assert!(linalg::frobenius(&(r.unitary - fine)) < 1e-9);
    }

    #[test]
    fn adaptive_reports_cap() {
        let f = random_smooth(2, 9, 1.0, 1.0, 1.0).unwrap();
        let opts = AdaptiveOptions { max_steps: 64, ..Default::default() };
        let err = propagate_adaptive(&f, 1.0, 0.0, 1e-12, &opts).unwrap_err();
        assert!(matches!(err, Error::MaxRefinementExceeded { steps: 64, .. }));
    }

    #[test]
    fn volterra_zero_family_is_identity() {
        let f = constant(linalg::zeros(2, 2), 1.0).unwrap();
        let v = volterra_oracle(&f, 1.0, 0.0, &VolterraOptions { terms: 5, nodes: 8, ..Default::default() }).unwrap();
        assert_eq!(v, linalg::identity(2));
    }

    #[test]
    fn volterra_constant_is_taylor_polynomial() {
        // For constant A both quadratures integrate the polynomial terms of
        // degree <= 3 exactly; compare with the degree-3 Taylor polynomial.
        let a0 = linalg::real_diagonal(&[0.5, -0.25]);
        let f = constant(a0, 1.0).unwrap();
        let v = volterra_oracle(&f, 1.0, 0.0, &VolterraOptions { terms: 3, nodes: 64, ..Default::default() }).unwrap();
        for (j, lambda) in [0.5_f64, -0.25].iter().enumerate() {
            let z = C64::new(0.0, *lambda);
            let taylor = C64::new(1.0, 0.0) + z + z * z / 2.0 + z * z * z / 6.0;
            assert!((v[(j, j)] - taylor).norm() < 1e-12);
        }
    }

    #[test]
    fn duhamel_without_source_follows_propagator() {
        let f = random_smooth(2, 11, 1.0, 1.0, 1.0).unwrap();
        let p = Propagator::new(&f, 32, Scheme::RightEndpoint).unwrap();
        let x = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.5)]);
        let traj = duhamel_solve(&p, 0.3, &x, |_| CVector::zeros(2)).unwrap();
        assert_eq!(traj.values[traj.start_index], x);
        for (t, v) in traj.times.iter().zip(&traj.values) {
            let expected = p.apply(*t, 0.3, &x).unwrap();
            assert!(linalg::vector_norm(&(v - expected)) < 1e-12);
        }
    }

    #[test]
    fn duhamel_free_constant_source_is_linear() {
        let f = constant(linalg::zeros(2, 2), 1.0).unwrap();
        let p = Propagator::new(&f, 10, Scheme::RightEndpoint).unwrap();
        let x = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        let c = CVector::from_vec(vec![C64::new(0.5, 0.0), C64::new(0.0, -1.0)]);
        let c2 = c.clone();
        let traj = duhamel_solve(&p, 0.0, &x, move |_| c2.clone()).unwrap();
        for (t, v) in traj.times.iter().zip(&traj.values) {
            assert!(linalg::vector_norm(&(v - (&x + c.scale(*t)))) < 1e-13);
        }
    }

    #[test]
    fn evolved_constant_family_is_unchanged() {
        let a0 = linalg::real_diagonal(&[-1.0, 2.0]);
        let f = constant(a0.clone(), 1.0).unwrap();
        assert!(linalg::frobenius(&(evolved_family(&f, 0.6, 8).unwrap() - a0)) < 1e-13);
        let r = linear_diagonal(&[-1.0], &[2.0], 1.0).unwrap();
        assert_eq!(evolved_family(&r, 0.0, 4).unwrap(), r.evaluate(0.0));
    }
}
