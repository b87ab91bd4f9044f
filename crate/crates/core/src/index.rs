//! Indices of pairs of projections, the APS index through its
//! kernel/cokernel characterization, and checks of the index formulas.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{Propagator, Scheme};
use crate::family::{linspace, HermitianFamily};
use crate::linalg::{self, CMatrix};
use crate::spectral::{self, PartitionOptions, SpectralTolerances};

pub const PROJECTION_TOL: f64 = 1e-10;
/// Looser projection tolerance for projections transported by a propagator.
pub const EVOLVED_PROJECTION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexOptions {
    pub steps: usize,
    pub scheme: Scheme,
    pub rank_tol: f64,
    /// Below this smallest restricted singular value the pair is reported as
    /// possibly non-Fredholm instead of compared.
    pub fredholm_margin: f64,
    #[serde(skip)]
    pub partition: PartitionOptions,
}

impl Default for IndexOptions {
    fn default() -> Self {
        IndexOptions {
            steps: 256,
            scheme: Scheme::RightEndpoint,
            rank_tol: 1e-7,
            fredholm_margin: 1e-3,
            partition: PartitionOptions::default(),
        }
    }
}

impl IndexOptions {
    fn tol(&self) -> &SpectralTolerances {
        &self.partition.tolerances
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Well conditioned and, when a reference value is present, equal to it.
    Match,
    Mismatch,
    NotFredholmSuspected,
}

impl Verdict {
    /// Worst of two verdicts: mismatch beats suspicion beats match.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Mismatch, _) | (_, Mismatch) => Mismatch,
            (NotFredholmSuspected, _) | (_, NotFredholmSuspected) => NotFredholmSuspected,
            _ => Match,
        }
    }
}

/// A pair of orthogonal projections together with the restricted map
/// `[Q: Ran P -> Ran Q]` on orthonormal bases of the two ranges.
#[derive(Clone, Debug)]
pub struct ProjectionPair {
    pub p: CMatrix,
    pub q_proj: CMatrix,
    pub basis_p: CMatrix,
    pub basis_q: CMatrix,
    /// `basis_q^H basis_p`, shape `rank Q x rank P`.
    pub restricted: CMatrix,
    pub rank_tol: f64,
}

fn orthonormality_defect(b: &CMatrix) -> f64 {
    linalg::frobenius(&(b.adjoint() * b - linalg::identity(b.ncols())))
}

impl ProjectionPair {
    pub fn new(p: &CMatrix, q_proj: &CMatrix, rank_tol: f64) -> Result<Self> {
        check_projection(p, PROJECTION_TOL)?;
        check_projection(q_proj, PROJECTION_TOL)?;
        if p.nrows() != q_proj.nrows() {
            return Err(Error::InvalidArgument(format!(
                "projections act on spaces of dimension {} and {}",
                p.nrows(),
                q_proj.nrows()
            )));
        }
        let basis_p = linalg::projection_basis(p)?;
        let basis_q = linalg::projection_basis(q_proj)?;
        Self::assemble(p.clone(), q_proj.clone(), basis_p, basis_q, rank_tol)
    }

    /// Pair of the projections onto the column spans of two orthonormal bases.
    pub fn from_bases(basis_p: CMatrix, basis_q: CMatrix, rank_tol: f64, proj_tol: f64) -> Result<Self> {
        for b in [&basis_p, &basis_q] {
            let defect = orthonormality_defect(b);
            if defect > proj_tol {
                return Err(Error::NonProjectionInput { defect });
            }
        }
        let p = &basis_p * basis_p.adjoint();
        let q = &basis_q * basis_q.adjoint();
        check_projection(&p, proj_tol)?;
        check_projection(&q, proj_tol)?;
        Self::assemble(p, q, basis_p, basis_q, rank_tol)
    }

    fn assemble(p: CMatrix, q_proj: CMatrix, basis_p: CMatrix, basis_q: CMatrix, rank_tol: f64) -> Result<Self> {
        let restricted = basis_q.adjoint() * &basis_p;
        Ok(ProjectionPair { p, q_proj, basis_p, basis_q, restricted, rank_tol })
    }

    pub fn rank_p(&self) -> usize {
        self.basis_p.ncols()
    }

    pub fn rank_q(&self) -> usize {
        self.basis_q.ncols()
    }

    /// `(I - P, I - Q)`.
    pub fn complement(&self) -> Result<Self> {
        let n = self.p.nrows();
        let id = linalg::identity(n);
        ProjectionPair::new(&(&id - &self.p), &(&id - &self.q_proj), self.rank_tol)
    }

    pub fn report(&self, fredholm_margin: f64) -> IndexReport {
        IndexReport::from_map(&self.restricted, self.rank_tol, fredholm_margin)
    }
}

fn check_projection(p: &CMatrix, tol: f64) -> Result<()> {
    if p.nrows() != p.ncols() {
        return Err(Error::NonProjectionInput { defect: f64::INFINITY });
    }
    let defect = linalg::projection_defect(p);
    if defect > tol {
        return Err(Error::NonProjectionInput { defect });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub kernel_dim: usize,
    pub coker_dim: usize,
    pub index: i64,
    /// Descending singular values of the restricted map.
    pub singular_values: Vec<f64>,
    /// Smallest singular value, absent for maps with a zero dimension.
    pub sigma_min: Option<f64>,
    pub sfl_value: Option<i64>,
    pub verdict: Verdict,
}

impl IndexReport {
    /// Kernel and cokernel of a linear map from its singular values.
    pub fn from_map(map: &CMatrix, rank_tol: f64, fredholm_margin: f64) -> IndexReport {
        let singular_values = linalg::singular_values(map);
        let rank = singular_values.iter().filter(|&&s| s >= rank_tol).count();
        let kernel_dim = map.ncols() - rank;
        let coker_dim = map.nrows() - rank;
        let sigma_min = singular_values.last().copied();
        let verdict = conditioning(sigma_min, fredholm_margin);
        IndexReport {
            kernel_dim,
            coker_dim,
            index: kernel_dim as i64 - coker_dim as i64,
            singular_values,
            sigma_min,
            sfl_value: None,
            verdict,
        }
    }

    /// Records a reference spectral flow and compares it against the index.
    pub fn with_sfl(mut self, sfl: i64) -> IndexReport {
        self.sfl_value = Some(sfl);
        if self.verdict == Verdict::Match && self.index != sfl {
            self.verdict = Verdict::Mismatch;
        }
        self
    }
}

fn conditioning(sigma_min: Option<f64>, margin: f64) -> Verdict {
    match sigma_min {
        Some(s) if s < margin => Verdict::NotFredholmSuspected,
        _ => Verdict::Match,
    }
}

pub fn pair_index(p: &CMatrix, q_proj: &CMatrix, rank_tol: f64) -> Result<IndexReport> {
    Ok(ProjectionPair::new(p, q_proj, rank_tol)?.report(IndexOptions::default().fredholm_margin))
}

/// `dim(U ∩ V)` for orthonormal bases, counting principal angles with
/// cosine within `rank_tol` of one.
pub fn intersection_dim(basis_u: &CMatrix, basis_v: &CMatrix, rank_tol: f64) -> usize {
    linalg::singular_values(&(basis_u.adjoint() * basis_v))
        .iter()
        .filter(|&&s| s >= 1.0 - rank_tol)
        .count()
}

/// `(P_{<0}(0), Q(0,t) P_{<0}(t) Q(t,0))`.
pub fn evolved_pair(family: &HermitianFamily, t: f64, opts: &IndexOptions) -> Result<ProjectionPair> {
    let prop = Propagator::new(family, opts.steps, opts.scheme)?;
    evolved_pair_with(&prop, t, opts)
}

pub fn evolved_pair_with(prop: &Propagator, t: f64, opts: &IndexOptions) -> Result<ProjectionPair> {
    let family = prop.family();
    let start = spectral::decompose(family, 0.0)?.basis_below(0.0, opts.tol())?;
    let end = spectral::decompose(family, t)?.basis_below(0.0, opts.tol())?;
    let moved = prop.evolve(0.0, t)? * end;
    ProjectionPair::from_bases(start, moved, opts.rank_tol, EVOLVED_PROJECTION_TOL)
}

#[derive(Clone, Debug)]
pub struct QMinusMinus {
    /// `B_{<0}(t)^H Q(t,0) B_{<0}(0)`.
    pub matrix: CMatrix,
    pub report: IndexReport,
    pub pair_report: IndexReport,
    pub agrees: bool,
}

/// `Q_{--}(t,0) = [P_{<0}(t) Q(t,0): H_{<0}(0) -> H_{<0}(t)]`, cross-checked
/// against the evolved pair.
pub fn q_minus_minus(family: &HermitianFamily, t: f64, opts: &IndexOptions) -> Result<QMinusMinus> {
    let prop = Propagator::new(family, opts.steps, opts.scheme)?;
    q_minus_minus_with(&prop, t, opts)
}

pub fn q_minus_minus_with(prop: &Propagator, t: f64, opts: &IndexOptions) -> Result<QMinusMinus> {
    let family = prop.family();
    let start = spectral::decompose(family, 0.0)?.basis_below(0.0, opts.tol())?;
    let end = spectral::decompose(family, t)?.basis_below(0.0, opts.tol())?;
    let matrix = end.adjoint() * prop.evolve(t, 0.0)? * &start;
    let report = IndexReport::from_map(&matrix, opts.rank_tol, opts.fredholm_margin);
    let pair_report = evolved_pair_with(prop, t, opts)?.report(opts.fredholm_margin);
    let agrees = report.index == pair_report.index && report.kernel_dim == pair_report.kernel_dim;
    Ok(QMinusMinus { matrix, report, pair_report, agrees })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApsIndexReport {
    /// Kernel from `H_{<0}(0) ∩ Q(0,T) H_{>=0}(T)`, cokernel from
    /// `H_{>=0}(0) ∩ Q(0,T) H_{<0}(T)`; singular values are those of the
    /// evolved-pair restricted map.
    pub report: IndexReport,
    pub pair_index: i64,
    pub pair_kernel_dim: usize,
    pub pair_coker_dim: usize,
    /// Principal-angle and evolved-pair computations agree.
    pub consistent: bool,
}

pub fn aps_index(family: &HermitianFamily, opts: &IndexOptions) -> Result<ApsIndexReport> {
    let prop = Propagator::new(family, opts.steps, opts.scheme)?;
    aps_index_with(&prop, opts)
}

pub fn aps_index_with(prop: &Propagator, opts: &IndexOptions) -> Result<ApsIndexReport> {
    let family = prop.family();
    let horizon = family.horizon();
    let tol = opts.tol();
    let d0 = spectral::decompose(family, 0.0)?;
    let d1 = spectral::decompose(family, horizon)?;
    let back = prop.evolve(0.0, horizon)?;
    let neg0 = d0.basis_below(0.0, tol)?;
    let pos0 = d0.basis_at_or_above(0.0, tol)?;
    let neg1 = &back * d1.basis_below(0.0, tol)?;
    let pos1 = &back * d1.basis_at_or_above(0.0, tol)?;
    let kernel_dim = intersection_dim(&neg0, &pos1, opts.rank_tol);
    let coker_dim = intersection_dim(&pos0, &neg1, opts.rank_tol);

    let pair = ProjectionPair::from_bases(neg0, neg1, opts.rank_tol, EVOLVED_PROJECTION_TOL)?.report(opts.fredholm_margin);
    let sfl = spectral::spectral_flow_with(family, &opts.partition)?;
    let index = kernel_dim as i64 - coker_dim as i64;
    let consistent = index == pair.index && kernel_dim == pair.kernel_dim && coker_dim == pair.coker_dim;
    let mut report = IndexReport {
        kernel_dim,
        coker_dim,
        index,
        singular_values: pair.singular_values.clone(),
        sigma_min: pair.sigma_min,
        sfl_value: None,
        verdict: conditioning(pair.sigma_min, opts.fredholm_margin),
    }
    .with_sfl(sfl);
    if !consistent {
        report.verdict = Verdict::Mismatch;
    }
    Ok(ApsIndexReport {
        report,
        pair_index: pair.index,
        pair_kernel_dim: pair.kernel_dim,
        pair_coker_dim: pair.coker_dim,
        consistent,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub t: f64,
    pub index: i64,
    pub sfl: i64,
    pub kernel_dim: usize,
    pub coker_dim: usize,
    pub sigma_min: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainTheoremReport {
    pub checkpoints: Vec<Checkpoint>,
    pub verdict: Verdict,
    /// Smallest restricted singular value over all checkpoints.
    pub sigma_min: Option<f64>,
}

/// Compares the evolved-pair index with `sfl(A|_{[0,t]})` at
/// `t_k = kT/n`, `k = 1..=n`.
pub fn verify_main_theorem(family: &HermitianFamily, n_checkpoints: usize, opts: &IndexOptions) -> Result<MainTheoremReport> {
    if n_checkpoints == 0 {
        return Err(Error::InvalidArgument("need at least one checkpoint".into()));
    }
    let prop = Propagator::new(family, opts.steps, opts.scheme)?;
    let horizon = family.horizon();
    let times: Vec<f64> = (1..=n_checkpoints)
        .map(|k| if k == n_checkpoints { horizon } else { horizon * k as f64 / n_checkpoints as f64 })
        .collect();
    let checkpoints = times
        .par_iter()
        .map(|&t| {
            let pair = evolved_pair_with(&prop, t, opts)?.report(opts.fredholm_margin);
            let sfl = spectral::spectral_flow_with(&family.restrict(0.0, t)?, &opts.partition)?;
            let report = pair.with_sfl(sfl);
            Ok(Checkpoint {
                t,
                index: report.index,
                sfl,
                kernel_dim: report.kernel_dim,
                coker_dim: report.coker_dim,
                sigma_min: report.sigma_min,
                verdict: report.verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = checkpoints.iter().fold(Verdict::Match, |v, c| v.combine(c.verdict));
    let sigma_min = checkpoints.iter().filter_map(|c| c.sigma_min).reduce(f64::min);
    Ok(MainTheoremReport { checkpoints, verdict, sigma_min })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluingReport {
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub whole: i64,
    pub first: i64,
    pub second: i64,
    pub passed: bool,
}

/// `ind([r,t]) = ind([r,s]) + ind([s,t])` for APS indices of restrictions.
pub fn verify_gluing(family: &HermitianFamily, r: f64, s: f64, t: f64, opts: &IndexOptions) -> Result<GluingReport> {
    if !(r < s && s < t) || r < 0.0 || t > family.horizon() {
        return Err(Error::InvalidArgument(format!("need 0 <= r < s < t <= T, got {r}, {s}, {t}")));
    }
    let pieces = [(r, t), (r, s), (s, t)]
        .par_iter()
        .map(|&(a, b)| {
            let sub = family.restrict(a, b)?;
            let steps = ((opts.steps as f64 * (b - a) / family.horizon()).ceil() as usize).max(1);
            let sub_opts = IndexOptions { steps, ..opts.clone() };
            Ok(aps_index(&sub, &sub_opts)?.report.index)
        })
        .collect::<Result<Vec<_>>>()?;
    let (whole, first, second) = (pieces[0], pieces[1], pieces[2]);
    Ok(GluingReport { r, s, t, whole, first, second, passed: whole == first + second })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayProfile {
    Zero,
    FastDecay,
    Flat,
}

const ZERO_BLOCK_TOL: f64 = 1e-8;
const FAST_DECAY_RATIO: f64 = 0.1;

/// Zero if every value is negligible; fast decay if the median singular value
/// is below a tenth of the largest; flat otherwise.
pub fn decay_profile(values: &[f64]) -> DecayProfile {
    let max = values.first().copied().unwrap_or(0.0);
    if max < ZERO_BLOCK_TOL {
        return DecayProfile::Zero;
    }
    let median = values[values.len() / 2];
    if median <= FAST_DECAY_RATIO * max {
        DecayProfile::FastDecay
    } else {
        DecayProfile::Flat
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularProfile {
    pub values: Vec<f64>,
    pub profile: DecayProfile,
    /// Number of values above `1e-6 * max(1, largest)`.
    pub effective_rank: usize,
}

impl SingularProfile {
    fn of(m: &CMatrix) -> SingularProfile {
        let values = linalg::singular_values(m);
        let cut = 1e-6 * values.first().copied().unwrap_or(0.0).max(1.0);
        let effective_rank = values.iter().filter(|&&s| s > cut).count();
        SingularProfile { profile: decay_profile(&values), values, effective_rank }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffDiagonalReport {
    pub t: f64,
    /// `P_{>=0}(t) Q(t,0) P_{<0}(0)`.
    pub q_plus_minus: SingularProfile,
    /// `P_{<0}(t) Q(t,0) P_{>=0}(0)`.
    pub q_minus_plus: SingularProfile,
    /// `P_{<0}(0) - P̂_{<0}(t)`.
    pub difference: SingularProfile,
}

pub fn offdiagonal_diagnostic(family: &HermitianFamily, t: f64, opts: &IndexOptions) -> Result<OffDiagonalReport> {
    let prop = Propagator::new(family, opts.steps, opts.scheme)?;
    offdiagonal_diagnostic_with(&prop, t, opts)
}

pub fn offdiagonal_diagnostic_with(prop: &Propagator, t: f64, opts: &IndexOptions) -> Result<OffDiagonalReport> {
    let family = prop.family();
    let tol = opts.tol();
    let d0 = spectral::decompose(family, 0.0)?;
    let dt = spectral::decompose(family, t)?;
    let q = prop.evolve(t, 0.0)?;
    let (neg0, pos0) = (d0.basis_below(0.0, tol)?, d0.basis_at_or_above(0.0, tol)?);
    let (negt, post) = (dt.basis_below(0.0, tol)?, dt.basis_at_or_above(0.0, tol)?);
    let q_plus_minus = SingularProfile::of(&(post.adjoint() * &q * &neg0));
    let q_minus_plus = SingularProfile::of(&(negt.adjoint() * &q * &pos0));
    let moved = q.adjoint() * &negt;
    let diff = &neg0 * neg0.adjoint() - &moved * moved.adjoint();
    Ok(OffDiagonalReport { t, q_plus_minus, q_minus_plus, difference: SingularProfile::of(&diff) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutingReport {
    pub max_commutator: f64,
    pub commuting: bool,
    /// `max ||P̂_{<0}(t) - P_{<0}(t)||_F` over probe times off the spectrum;
    /// only measured for commuting families.
    pub projection_gap: Option<f64>,
    pub passed: bool,
}

pub const COMMUTE_TOL: f64 = 1e-10;
pub const COMMUTING_PROJECTION_TOL: f64 = 1e-8;
const COMMUTING_PROBES: usize = 9;

pub fn commuting_family_check(family: &HermitianFamily, opts: &IndexOptions) -> Result<CommutingReport> {
    let times = linspace(0.0, family.horizon(), COMMUTING_PROBES);
    let values: Vec<CMatrix> = times.iter().map(|&t| family.evaluate(t)).collect();
    let scale = values.iter().map(linalg::frobenius).fold(1.0, f64::max);
    let mut max_commutator: f64 = 0.0;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            max_commutator = max_commutator.max(linalg::frobenius(&linalg::commutator(&values[i], &values[j])));
        }
    }
    let commuting = max_commutator < COMMUTE_TOL * scale * scale;
    if !commuting {
        return Ok(CommutingReport { max_commutator, commuting, projection_gap: None, passed: true });
    }
    let prop = Propagator::new(family, opts.steps, opts.scheme)?;
    let mut gap: f64 = 0.0;
    for &t in &times {
        let p = match spectral::spectral_projection(family, t, 0.0, opts.tol()) {
            Ok(p) => p,
            Err(Error::LevelOnSpectrum { .. }) => continue,
            Err(e) => return Err(e),
        };
        let q = prop.evolve(t, 0.0)?;
        let evolved = q.adjoint() * &p * q;
        gap = gap.max(linalg::frobenius(&(evolved - p)));
    }
    Ok(CommutingReport {
        max_commutator,
        commuting,
        projection_gap: Some(gap),
        passed: gap <= COMMUTING_PROJECTION_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{constant, linear_diagonal, random_smooth};

    #[test]
    fn equal_projections_have_index_zero() {
        let p = linalg::real_diagonal(&[1.0, 0.0, 1.0]);
        let r = pair_index(&p, &p, 1e-7).unwrap();
        assert_eq!((r.kernel_dim, r.coker_dim, r.index), (0, 0, 0));
    }

    #[test]
    fn orthogonal_lines_have_kernel_and_cokernel() {
        let p = linalg::real_diagonal(&[1.0, 0.0]);
        let q = linalg::real_diagonal(&[0.0, 1.0]);
        let r = pair_index(&p, &q, 1e-7).unwrap();
        assert_eq!((r.kernel_dim, r.coker_dim, r.index), (1, 1, 0));
        assert_eq!(r.verdict, Verdict::NotFredholmSuspected);
    }

    #[test]
    fn rejects_non_projection() {
        let p = linalg::real_diagonal(&[0.5, 0.0]);
        assert!(matches!(pair_index(&p, &p, 1e-7), Err(Error::NonProjectionInput { .. })));
    }

    #[test]
    fn evolved_pair_at_zero_is_diagonal() {
        let f = random_smooth(4, 3, 1.0, 2.0, 1.0).unwrap();
        let pair = evolved_pair(&f, 0.0, &IndexOptions::default()).unwrap();
        assert!(linalg::frobenius(&(&pair.p - &pair.q_proj)) < 1e-12);
        assert_eq!(pair.report(1e-3).index, 0);
    }

    #[test]
    fn constant_family_evolved_pair_is_static() {
        let f = constant(linalg::real_diagonal(&[-2.0, -1.0, 3.0]), 1.0).unwrap();
        let pair = evolved_pair(&f, 0.7, &IndexOptions::default()).unwrap();
        assert!(linalg::frobenius(&(&pair.p - &pair.q_proj)) < 1e-12);
        let qmm = q_minus_minus(&f, 0.7, &IndexOptions::default()).unwrap();
        assert!(qmm.agrees);
        assert_eq!(qmm.report.index, 0);
    }

    #[test]
    fn crossing_ramp_aps_index() {
        let f = linear_diagonal(&[-1.0, 5.0], &[2.0, 0.0], 1.0).unwrap();
        let r = aps_index(&f, &IndexOptions::default()).unwrap();
        assert!(r.consistent);
        assert_eq!(r.report.index, 1);
        assert_eq!(r.report.sfl_value, Some(1));
        assert_eq!(r.report.verdict, Verdict::Match);
    }

    #[test]
    fn gluing_splits_crossing() {
        let f = linear_diagonal(&[-1.0], &[2.0], 1.0).unwrap();
        let g = verify_gluing(&f, 0.0, 0.3, 1.0, &IndexOptions::default()).unwrap();
        assert_eq!((g.whole, g.first, g.second), (1, 0, 1));
        assert!(g.passed);
    }

    #[test]
    fn constant_offdiagonal_blocks_vanish() {
        let f = constant(linalg::real_diagonal(&[-1.0, 2.0]), 1.0).unwrap();
        let r = offdiagonal_diagnostic(&f, 1.0, &IndexOptions::default()).unwrap();
        assert_eq!(r.q_plus_minus.profile, DecayProfile::Zero);
        assert_eq!(r.q_minus_plus.profile, DecayProfile::Zero);
    }

    #[test]
    fn diagonal_families_commute() {
        let f = linear_diagonal(&[-1.0, 0.5], &[2.0, -3.0], 1.0).unwrap();
        let r = commuting_family_check(&f, &IndexOptions::default()).unwrap();
        assert!(r.commuting && r.passed);
        let g = random_smooth(3, 1, 1.0, 2.0, 1.0).unwrap();
        let r = commuting_family_check(&g, &IndexOptions::default()).unwrap();
        assert!(!r.commuting && r.projection_gap.is_none());
    }

    #[test]
    fn verdict_combination_order() {
        use Verdict::*;
        assert_eq!(Match.combine(NotFredholmSuspected), NotFredholmSuspected);
        assert_eq!(NotFredholmSuspected.combine(Mismatch), Mismatch);
    }

    #[test]
    fn decay_profiles() {
        assert_eq!(decay_profile(&[]), DecayProfile::Zero);
        assert_eq!(decay_profile(&[1.0, 1.0, 1.0]), DecayProfile::Flat);
        assert_eq!(decay_profile(&[1.0, 1e-9, 1e-12]), DecayProfile::FastDecay);
        assert_eq!(decay_profile(&[1.0, 0.9, 0.8, 0.05, 0.01]), DecayProfile::Flat);
    }
}
