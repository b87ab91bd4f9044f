//! Spectral projections, flow partitions and the spectral flow of a family.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{linspace, HermitianFamily};
use crate::linalg::{self, CMatrix};

/// Tolerances for deciding where eigenvalues sit relative to a level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralTolerances {
    /// An eigenvalue is numerically zero iff `|lambda| < zero_rel * max(1, ||A||)`;
    /// the same relative threshold decides whether a level sits on the spectrum.
    pub zero_rel: f64,
}

impl Default for SpectralTolerances {
    fn default() -> Self {
        SpectralTolerances { zero_rel: 1e-8 }
    }
}

impl SpectralTolerances {
    pub fn threshold(&self, eigenvalues: &[f64]) -> f64 {
        self.zero_rel * spectral_radius(eigenvalues).max(1.0)
    }
}

fn spectral_radius(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub t: f64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in eigenvalue order.
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn norm(&self) -> f64 {
        spectral_radius(&self.eigenvalues)
    }

    /// Indices of eigenvalues strictly below `level`, checking that the level
    /// is off the spectrum.
    pub fn indices_below(&self, level: f64, tol: &SpectralTolerances) -> Result<Vec<usize>> {
        let eps = tol.threshold(&self.eigenvalues);
        if let Some(&lambda) = self.eigenvalues.iter().find(|&&l| (l - level).abs() < eps) {
            return Err(Error::LevelOnSpectrum { t: self.t, level, eigenvalue: lambda });
        }
        Ok((0..self.dim()).filter(|&j| self.eigenvalues[j] < level).collect())
    }

    pub fn indices_at_or_above(&self, level: f64, tol: &SpectralTolerances) -> Result<Vec<usize>> {
        let below = self.indices_below(level, tol)?;
        Ok((below.len()..self.dim()).collect())
    }

    /// Orthonormal basis of `H_{<level}` (columns ascending by eigenvalue).
    pub fn basis_below(&self, level: f64, tol: &SpectralTolerances) -> Result<CMatrix> {
        Ok(linalg::select_columns(&self.eigenvectors, &self.indices_below(level, tol)?))
    }

    pub fn basis_at_or_above(&self, level: f64, tol: &SpectralTolerances) -> Result<CMatrix> {
        Ok(linalg::select_columns(&self.eigenvectors, &self.indices_at_or_above(level, tol)?))
    }

    /// `P_{<level}`.
    pub fn projection_below(&self, level: f64, tol: &SpectralTolerances) -> Result<CMatrix> {
        let b = self.basis_below(level, tol)?;
        Ok(&b * b.adjoint())
    }

    /// `dim H_{[0, level)}`, with numerically-zero eigenvalues counted as `>= 0`.
    pub fn count_nonnegative_below(&self, level: f64, tol: &SpectralTolerances) -> usize {
        let z = tol.threshold(&self.eigenvalues);
        self.eigenvalues.iter().filter(|&&l| l > -z && l < level).count()
    }

    /// `dim H_{[-level, 0)}`.
    pub fn count_negative_above(&self, level: f64, tol: &SpectralTolerances) -> usize {
        let z = tol.threshold(&self.eigenvalues);
        self.eigenvalues.iter().filter(|&&l| l <= -z && l >= -level).count()
    }

    pub fn kernel_dim(&self, tol: &SpectralTolerances) -> usize {
        let z = tol.threshold(&self.eigenvalues);
        self.eigenvalues.iter().filter(|&&l| l.abs() < z).count()
    }

    /// Number of eigenvalues below zero, treating numerically-zero ones as zero.
    pub fn negative_count(&self, tol: &SpectralTolerances) -> usize {
        let z = tol.threshold(&self.eigenvalues);
        self.eigenvalues.iter().filter(|&&l| l <= -z).count()
    }

    pub fn max_residual(&self, a: &CMatrix) -> f64 {
        (0..self.dim())
            .map(|j| {
                let v = self.eigenvectors.column(j);
                linalg::vector_norm(&(a * v - v * linalg::C64::new(self.eigenvalues[j], 0.0)))
            })
            .fold(0.0, f64::max)
    }
}

pub fn decompose(family: &HermitianFamily, t: f64) -> Result<SpectralDecomposition> {
    let a = family.evaluate(t);
    let (eigenvalues, eigenvectors) = linalg::hermitian_eigen(&a, t)?;
    Ok(SpectralDecomposition { t, eigenvalues, eigenvectors })
}

pub fn eigenvalues_at(family: &HermitianFamily, t: f64) -> Result<Vec<f64>> {
    Ok(decompose(family, t)?.eigenvalues)
}

/// `P_{<a}(t)`; fails with `LevelOnSpectrum` when `a` is numerically an eigenvalue.
pub fn spectral_projection(family: &HermitianFamily, t: f64, level: f64, tol: &SpectralTolerances) -> Result<CMatrix> {
    decompose(family, t)?.projection_below(level, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionOptions {
    /// Uniform segments to start from before any bisection.
    pub initial_segments: usize,
    /// Probe points per segment, endpoints included.
    pub probes_per_segment: usize,
    /// Maximum bisection depth below an initial segment.
    pub max_depth: u32,
    pub max_segments: usize,
    /// Minimum distance between a level and any sampled eigenvalue, on top of
    /// the largest eigenvalue movement between adjacent probes.
    pub gap_margin: f64,
    /// Level tried first on every segment.
    pub seed_level: Option<f64>,
    pub tolerances: SpectralTolerances,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        PartitionOptions {
            initial_segments: 1,
            probes_per_segment: 17,
            max_depth: 10,
            max_segments: 4096,
            gap_margin: 1e-6,
            seed_level: None,
            tolerances: SpectralTolerances::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowPartition {
    /// `0 = t_0 < ... < t_N = T`.
    pub nodes: Vec<f64>,
    /// `a_1, ..., a_N`, all positive.
    pub levels: Vec<f64>,
    /// Whether `-a_n` also avoids the spectrum on every segment.
    pub symmetric: bool,
    /// Smallest sampled distance between a level and the spectrum.
    pub min_margin: f64,
    /// Set when `min_margin < 2 * gap_margin`.
    pub low_margin: bool,
}

impl FlowPartition {
    pub fn segments(&self) -> usize {
        self.levels.len()
    }

    /// Checks the avoidance condition on `probes` points per segment.
    pub fn validate(&self, family: &HermitianFamily, probes: usize, margin: f64) -> Result<()> {
        for n in 0..self.segments() {
            let (lo, hi) = (self.nodes[n], self.nodes[n + 1]);
            for t in linspace(lo, hi, probes) {
                let eig = eigenvalues_at(family, t)?;
                for &l in &eig {
                    let mut d = (l - self.levels[n]).abs();
                    if self.symmetric {
                        d = d.min((l + self.levels[n]).abs());
                    }
                    if d < margin {
                        return Err(Error::PartitionFailure {
                            start: lo,
                            end: hi,
                            reason: format!("level {} within {d:e} of eigenvalue {l} at t={t}", self.levels[n]),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

struct SegmentScan {
    ranges: Vec<(f64, f64)>,
    movement: f64,
    zero: f64,
    scale: f64,
}

fn scan_segment(family: &HermitianFamily, lo: f64, hi: f64, opts: &PartitionOptions) -> Result<SegmentScan> {
    let times = linspace(lo, hi, opts.probes_per_segment.max(2));
    let spectra: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| eigenvalues_at(family, t))
        .collect::<Result<Vec<_>>>()?;
    let n = family.dim();
    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); n];
    let mut movement: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (k, eig) in spectra.iter().enumerate() {
        scale = scale.max(spectral_radius(eig));
        for j in 0..n {
            ranges[j].0 = ranges[j].0.min(eig[j]);
            ranges[j].1 = ranges[j].1.max(eig[j]);
            if k > 0 {
                movement = movement.max((eig[j] - spectra[k - 1][j]).abs());
            }
        }
    }
    if ranges.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
        return Err(Error::PartitionFailure { start: lo, end: hi, reason: "non-finite eigenvalues".into() });
    }
    let zero = opts.tolerances.zero_rel * scale.max(1.0);
    Ok(SegmentScan { ranges, movement, zero, scale })
}

/// Distance from `level` to a closed interval.
fn interval_distance(level: f64, (lo, hi): (f64, f64)) -> f64 {
    if level < lo {
        lo - level
    } else if level > hi {
        level - hi
    } else {
        0.0
    }
}

impl SegmentScan {
    fn obstacles(&self, symmetric: bool) -> Vec<(f64, f64)> {
        let mut obs = self.ranges.clone();
        if symmetric {
            obs.extend(self.ranges.iter().map(|&(a, b)| (-b, -a)));
        }
        obs
    }

    fn margin_of(&self, level: f64, symmetric: bool) -> f64 {
        self.obstacles(symmetric)
            .iter()
            .map(|&r| interval_distance(level, r))
            .fold(f64::INFINITY, f64::min)
    }

    /// Half the smallest positive eigenvalue magnitude, when no eigenvalue
    /// path touches zero on the segment.
    fn zero_adjacent_level(&self, symmetric: bool) -> Option<f64> {
        let obs = self.obstacles(symmetric);
        if obs.iter().any(|&(a, b)| a <= self.zero && b >= -self.zero) {
            return None;
        }
        let smallest_positive = obs.iter().filter(|r| r.0 > self.zero).map(|r| r.0).fold(f64::INFINITY, f64::min);
        if smallest_positive.is_finite() {
            Some(0.5 * smallest_positive)
        } else {
            Some(self.scale.max(1.0))
        }
    }

    /// Lowest positive level at distance `>= required` from every obstacle.
    fn first_free_level(&self, symmetric: bool, required: f64) -> f64 {
        let mut expanded: Vec<(f64, f64)> = self
            .obstacles(symmetric)
            .into_iter()
            .map(|(a, b)| (a - required, b + required))
            .filter(|&(_, b)| b > 0.0)
            .collect();
        expanded.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut cursor = 0.0_f64;
        for (a, b) in expanded {
            if a > cursor {
                return 0.5 * (cursor + a);
            }
            cursor = cursor.max(b);
        }
        cursor + required.max(0.5 * self.scale.max(1.0))
    }
}

/// Builds a flow partition for `family` (and for `-family` when `symmetric`).
///
/// Each segment first tries the seed level, then half the smallest positive
/// eigenvalue magnitude; if an eigenvalue path touches zero the segment is
/// bisected, and at maximum depth the lowest level clearing every sampled
/// eigenvalue path is used.
pub fn build_flow_partition(family: &HermitianFamily, symmetric: bool, opts: &PartitionOptions) -> Result<FlowPartition> {
    if opts.initial_segments == 0 {
        return Err(Error::InvalidArgument("initial_segments must be positive".into()));
    }
    let horizon = family.horizon();
    let mut nodes = vec![0.0];
    let mut levels = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut stack: Vec<(f64, f64, u32)> = linspace(0.0, horizon, opts.initial_segments + 1)
        .windows(2)
        .rev()
        .map(|w| (w[0], w[1], 0))
        .collect();
    while let Some((lo, hi, depth)) = stack.pop() {
        let scan = scan_segment(family, lo, hi, opts)?;
        let required = opts.gap_margin + scan.movement;
        let seeded = opts
            .seed_level
            .filter(|&a| a > 0.0 && scan.margin_of(a, symmetric) >= required);
        let chosen = seeded.or_else(|| {
            scan.zero_adjacent_level(symmetric)
                .filter(|&a| scan.margin_of(a, symmetric) >= required)
        });
        let level = match chosen {
            Some(a) => a,
            None if depth < opts.max_depth => {
                let mid = 0.5 * (lo + hi);
                stack.push((mid, hi, depth + 1));
                stack.push((lo, mid, depth + 1));
                continue;
            }
            None => scan.first_free_level(symmetric, required),
        };
        min_margin = min_margin.min(scan.margin_of(level, symmetric));
        nodes.push(hi);
        levels.push(level);
        if levels.len() > opts.max_segments {
            return Err(Error::PartitionFailure {
                start: 0.0,
                end: horizon,
                reason: format!("more than {} segments required", opts.max_segments),
            });
        }
    }
    Ok(FlowPartition {
        nodes,
        levels,
        symmetric,
        min_margin,
        low_margin: min_margin < 2.0 * opts.gap_margin,
    })
}

/// `sum_n dim H_{[0,a_n)}(t_n) - dim H_{[0,a_n)}(t_{n-1})` over a given partition.
pub fn spectral_flow_on(family: &HermitianFamily, partition: &FlowPartition, tol: &SpectralTolerances) -> Result<i64> {
    let decomps = node_spectra(family, partition)?;
    Ok(flow_from_spectra(&decomps, &partition.levels, tol))
}

fn node_spectra(family: &HermitianFamily, partition: &FlowPartition) -> Result<Vec<SpectralDecomposition>> {
    partition
        .nodes
        .par_iter()
        .map(|&t| decompose(family, t))
        .collect()
}

fn flow_from_spectra(decomps: &[SpectralDecomposition], levels: &[f64], tol: &SpectralTolerances) -> i64 {
    levels
        .iter()
        .enumerate()
        .map(|(n, &a)| {
            decomps[n + 1].count_nonnegative_below(a, tol) as i64 - decomps[n].count_nonnegative_below(a, tol) as i64
        })
        .sum()
}

/// Spectral flow, building a default partition when none is supplied.
pub fn spectral_flow(family: &HermitianFamily, partition: Option<&FlowPartition>) -> Result<i64> {
    let opts = PartitionOptions::default();
    match partition {
        Some(p) => spectral_flow_on(family, p, &opts.tolerances),
        None => {
            let p = build_flow_partition(family, false, &opts)?;
            spectral_flow_on(family, &p, &opts.tolerances)
        }
    }
}

pub fn spectral_flow_with(family: &HermitianFamily, opts: &PartitionOptions) -> Result<i64> {
    let p = build_flow_partition(family, false, opts)?;
    spectral_flow_on(family, &p, &opts.tolerances)
}

/// Both sides of `sfl(A) = -sfl(-A) + dim ker A(T) - dim ker A(0)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinflowReport {
    pub sfl: i64,
    pub sfl_negated: i64,
    pub kernel_start: usize,
    pub kernel_end: usize,
    /// `sum_n dim H_{[-a_n,0)}(t_{n-1}) - dim H_{[-a_n,0)}(t_n)`.
    pub negative_side_sum: i64,
    pub segments: usize,
    pub passed: bool,
}

pub fn sfl_minus_identity_check(family: &HermitianFamily, opts: &PartitionOptions) -> Result<MinflowReport> {
    let tol = &opts.tolerances;
    let partition = build_flow_partition(family, true, opts)?;
    let decomps = node_spectra(family, &partition)?;
    let sfl = flow_from_spectra(&decomps, &partition.levels, tol);
    let negated = family.negated();
    let sfl_negated = spectral_flow_on(&negated, &partition, tol)?;
    let negative_side_sum: i64 = partition
        .levels
        .iter()
        .enumerate()
        .map(|(n, &a)| decomps[n].count_negative_above(a, tol) as i64 - decomps[n + 1].count_negative_above(a, tol) as i64)
        .sum();
    let kernel_start = decomps[0].kernel_dim(tol);
    let kernel_end = decomps.last().unwrap().kernel_dim(tol);
    let passed = sfl == -sfl_negated + kernel_end as i64 - kernel_start as i64 && sfl == negative_side_sum;
    Ok(MinflowReport {
        sfl,
        sfl_negated,
        kernel_start,
        kernel_end,
        negative_side_sum,
        segments: partition.segments(),
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugationReport {
    pub sfl: i64,
    pub sfl_conjugated: i64,
    pub max_unitarity_defect: f64,
    pub passed: bool,
}

pub const UNITARITY_TOL: f64 = 1e-10;

/// Compares `sfl(A)` with `sfl(U^H A U)` for a time-dependent unitary `U`.
pub fn conjugation_invariance_check<U>(family: &HermitianFamily, unitary: U, opts: &PartitionOptions) -> Result<ConjugationReport>
where
    U: Fn(f64) -> CMatrix + Send + Sync + 'static,
{
    let mut max_defect: f64 = 0.0;
    for t in family.probe_times(32) {
        let u = unitary(t);
        let defect = if u.nrows() == family.dim() && u.ncols() == family.dim() {
            linalg::unitarity_defect(&u)
        } else {
            f64::INFINITY
        };
        if !(defect <= UNITARITY_TOL) {
            return Err(Error::NonUnitaryInput { t, defect });
        }
        max_defect = max_defect.max(defect);
    }
    let base = family.clone();
    let conjugated = HermitianFamily::from_fn(family.dim(), family.horizon(), move |t| {
        let u = unitary(t);
        linalg::hermitian_part(&(u.adjoint() * base.evaluate(t) * u))
    })?;
    let sfl = spectral_flow_with(family, opts)?;
    let sfl_conjugated = spectral_flow_with(&conjugated, opts)?;
    Ok(ConjugationReport { sfl, sfl_conjugated, max_unitarity_defect: max_defect, passed: sfl == sfl_conjugated })
}

/// Eigenvalue paths over `times`, matched between adjacent times by nearest
/// neighbour against a linear prediction. Ambiguous steps are refined by
/// inserting midpoints. Row `k` holds the path values at `times[k]`.
pub fn track_eigenpaths(family: &HermitianFamily, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(times.len());
    let mut prev_slope: Option<Vec<f64>> = None;
    for (k, &t) in times.iter().enumerate() {
        let eig = eigenvalues_at(family, t)?;
        if k == 0 {
            rows.push(eig);
            continue;
        }
        let (row, slope) = match_refined(family, times[k - 1], &rows[k - 1], prev_slope.as_deref(), t, eig, 0)?;
        prev_slope = Some(slope);
        rows.push(row);
    }
    Ok(rows)
}

const MAX_TRACK_REFINEMENT: u32 = 8;

fn match_refined(
    family: &HermitianFamily,
    t0: f64,
    prev: &[f64],
    slope: Option<&[f64]>,
    t1: f64,
    eig: Vec<f64>,
    depth: u32,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let dt = t1 - t0;
    let predicted: Vec<f64> = match slope {
        Some(s) => prev.iter().zip(s).map(|(p, s)| p + s * dt).collect(),
        None => prev.to_vec(),
    };
    let (assigned, ambiguous) = nearest_assignment(&predicted, &eig);
    if ambiguous && depth < MAX_TRACK_REFINEMENT {
        let tm = 0.5 * (t0 + t1);
        let mid_eig = eigenvalues_at(family, tm)?;
        let (mid_row, mid_slope) = match_refined(family, t0, prev, slope, tm, mid_eig, depth + 1)?;
        return match_refined(family, tm, &mid_row, Some(&mid_slope), t1, eig, depth + 1);
    }
    let new_slope = assigned.iter().zip(prev).map(|(a, p)| (a - p) / dt).collect();
    Ok((assigned, new_slope))
}

/// Greedy global nearest-neighbour assignment of `values` to `predicted` paths.
/// Flags ambiguity when some runner-up distance is within twice the chosen one.
fn nearest_assignment(predicted: &[f64], values: &[f64]) -> (Vec<f64>, bool) {
    let n = predicted.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, p) in predicted.iter().enumerate() {
        for (j, v) in values.iter().enumerate() {
            pairs.push(((p - v).abs(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut path_done = vec![false; n];
    let mut value_done = vec![false; n];
    let mut out = vec![0.0; n];
    let mut chosen = vec![0.0; n];
    for &(d, i, j) in &pairs {
        if !path_done[i] && !value_done[j] {
            path_done[i] = true;
            value_done[j] = true;
            out[i] = values[j];
            chosen[i] = d;
        }
    }
    let scale = values.iter().chain(predicted).fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let floor = 1e-9 * scale;
    let ambiguous = (0..n).any(|i| {
        (0..n).any(|j| out[i] != values[j] && {
            let alt = (predicted[i] - values[j]).abs();
            // Genuinely degenerate eigenvalues are not ambiguous.
            (values[j] - out[i]).abs() > floor && alt < 2.0 * chosen[i] + floor
        })
    });
    (out, ambiguous)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{constant, linear_diagonal, FamilySpec};
    use crate::linalg::C64;

    fn pauli_x() -> HermitianFamily {
        let mut m = linalg::zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        m[(1, 0)] = C64::new(1.0, 0.0);
        constant(m, 1.0).unwrap()
    }

    #[test]
    fn decompose_diagonal() {
        let f = constant(linalg::real_diagonal(&[-1.0, 2.0]), 1.0).unwrap();
        let d = decompose(&f, 0.3).unwrap();
        assert_eq!(d.eigenvalues, vec![-1.0, 2.0]);
        assert!((&d.eigenvectors - linalg::identity(2)).norm() < 1e-14);
    }

    #[test]
    fn projection_of_pauli_x_below_zero() {
        let p = spectral_projection(&pauli_x(), 0.0, 0.0, &SpectralTolerances::default()).unwrap();
        for (i, j, v) in [(0, 0, 0.5), (0, 1, -0.5), (1, 0, -0.5), (1, 1, 0.5)] {
            assert!((p[(i, j)] - C64::new(v, 0.0)).norm() < 1e-12);
        }
        assert!(linalg::projection_defect(&p) < 1e-10);
    }

    #[test]
    fn projection_above_spectrum_is_identity() {
        let p = spectral_projection(&pauli_x(), 0.0, 3.0, &SpectralTolerances::default()).unwrap();
        assert!((p - linalg::identity(2)).norm() < 1e-12);
    }

    #[test]
    fn level_on_spectrum_is_rejected() {
        let f = constant(linalg::real_diagonal(&[-1.0, 2.0]), 1.0).unwrap();
        let err = spectral_projection(&f, 0.0, 2.0, &SpectralTolerances::default()).unwrap_err();
        assert!(matches!(err, Error::LevelOnSpectrum { .. }));
    }

    #[test]
    fn constant_family_single_segment_half_gap() {
        let f = constant(linalg::real_diagonal(&[-1.0, 2.0]), 1.0).unwrap();
        let p = build_flow_partition(&f, false, &PartitionOptions::default()).unwrap();
        assert_eq!(p.nodes, vec![0.0, 1.0]);
        assert_eq!(p.levels, vec![1.0]);
        assert_eq!(spectral_flow(&f, Some(&p)).unwrap(), 0);
    }

    #[test]
    fn ramp_needs_several_segments_and_flows_once() {
        let f = linear_diagonal(&[-1.0], &[2.0], 1.0).unwrap();
        let p = build_flow_partition(&f, false, &PartitionOptions::default()).unwrap();
        assert!(p.segments() > 1);
        p.validate(&f, 65, 0.0).unwrap();
        assert!(p.levels.iter().all(|&a| a > 0.0));
        assert_eq!(spectral_flow(&f, Some(&p)).unwrap(), 1);
    }

    #[test]
    fn seeded_level_on_spectrum_is_relocated() {
        let f = linear_diagonal(&[0.5, -1.0], &[0.0, 0.3], 1.0).unwrap();
        let opts = PartitionOptions { seed_level: Some(0.5), ..Default::default() };
        let p = build_flow_partition(&f, false, &opts).unwrap();
        assert!(p.levels.iter().all(|&a| (a - 0.5).abs() > 1e-3));
        p.validate(&f, 65, 1e-6).unwrap();
    }

    #[test]
    fn minflow_identity_with_singular_endpoint() {
        let f = linear_diagonal(&[-1.0], &[1.0], 1.0).unwrap();
        let r = sfl_minus_identity_check(&f, &PartitionOptions::default()).unwrap();
        assert_eq!(r.kernel_end, 1);
        assert_eq!(r.kernel_start, 0);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn minflow_identity_on_ramp() {
        let f = linear_diagonal(&[-1.0], &[2.0], 1.0).unwrap();
        let r = sfl_minus_identity_check(&f, &PartitionOptions::default()).unwrap();
        assert_eq!((r.sfl, r.sfl_negated), (1, -1));
        assert!(r.passed);
    }

    #[test]
    fn identity_conjugation_keeps_flow() {
        let f = linear_diagonal(&[-1.0, 0.5], &[2.0, -1.0], 1.0).unwrap();
        let r = conjugation_invariance_check(&f, |_| linalg::identity(2), &PartitionOptions::default()).unwrap();
        assert!(r.passed);
        assert_eq!(r.sfl, 0);
    }

    #[test]
    fn non_unitary_conjugation_is_rejected() {
        let f = linear_diagonal(&[-1.0], &[2.0], 1.0).unwrap();
        let err = conjugation_invariance_check(&f, |_| linalg::real_diagonal(&[2.0]), &PartitionOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::NonUnitaryInput { .. }));
    }

    #[test]
    fn eigenpaths_follow_crossing_lines() {
        let f = crate::family::make_family(&FamilySpec::LinearDiagonal {
            offsets: vec![-1.0, 1.0],
            slopes: vec![2.0, -2.0],
            horizon: 1.0,
        })
        .unwrap();
        let times = linspace(0.0, 1.0, 11);
        let rows = track_eigenpaths(&f, &times).unwrap();
        for (k, t) in times.iter().enumerate() {
            assert!((rows[k][0] - (-1.0 + 2.0 * t)).abs() < 1e-12);
            assert!((rows[k][1] - (1.0 - 2.0 * t)).abs() < 1e-12);
        }
    }
}
