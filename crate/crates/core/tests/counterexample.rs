use apsflow::counterexample::{
    extended_counterexample, growth_csv, growth_experiment, swap_block_family, truncated_counterexample, LambdaRule,
    SwapBlockSpec, TruncatedSumSpec,
};
use apsflow::evolution::{propagate_adaptive, AdaptiveOptions, Propagator, Scheme};
use apsflow::family::CounterexampleStage;
use apsflow::index::{evolved_pair, offdiagonal_diagnostic, verify_main_theorem, DecayProfile, IndexOptions, Verdict};
use apsflow::linalg::{self, CVector, C64};
use apsflow::spectral::{spectral_flow, spectral_flow_with, PartitionOptions};

fn accurate() -> IndexOptions {
    IndexOptions { steps: 8192, scheme: Scheme::Magnus4, ..Default::default() }
}

fn unit(n: usize, j: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[j] = C64::new(1.0, 0.0);
    v
}

#[test]
fn swap_block_propagator_matches_closed_form() {
    for lambda in [1.0, 5.0, 20.0] {
        let spec = SwapBlockSpec::new(-lambda, lambda).unwrap();
        let f = swap_block_family(&spec).unwrap();
        let adaptive = AdaptiveOptions { scheme: Scheme::Magnus4, ..Default::default() };
        for k in 1..=16 {
            let t = k as f64 / 16.0;
            let q = propagate_adaptive(&f, t, 0.0, 1e-9, &adaptive).unwrap();
            assert!(linalg::frobenius(&(q.unitary - spec.closed_form(t))) < 1e-7, "lambda {lambda} t {t}");
        }
    }
}

#[test]
fn single_block_has_no_flow() {
    let spec = SwapBlockSpec::new(-1.0, 1.0).unwrap();
    assert_eq!(spectral_flow(&swap_block_family(&spec).unwrap(), None).unwrap(), 0);
}

#[test]
fn truncation_n4_kernel_is_four() {
    let spec = TruncatedSumSpec::new(4, None, CounterexampleStage::Single).unwrap();
    let (f, _) = truncated_counterexample(&spec).unwrap();
    let r = evolved_pair(&f, 1.0, &accurate()).unwrap().report(1e-3);
    assert_eq!((r.kernel_dim, r.coker_dim, r.index), (4, 4, 0));
    assert_eq!(r.verdict, Verdict::NotFredholmSuspected);
    assert_eq!(spectral_flow(&f, None).unwrap(), 0);
}

#[test]
fn truncation_offdiagonal_is_flat() {
    let spec = TruncatedSumSpec::new(4, None, CounterexampleStage::Single).unwrap();
    let (f, _) = truncated_counterexample(&spec).unwrap();
    let r = offdiagonal_diagnostic(&f, 1.0, &accurate()).unwrap();
    assert_eq!(r.q_plus_minus.profile, DecayProfile::Flat);
    assert_eq!(r.q_plus_minus.values.len(), 4);
    assert!(r.q_plus_minus.values.iter().all(|s| (s - 1.0).abs() < 1e-7));
}

#[test]
fn main_theorem_flags_truncations() {
    let spec = TruncatedSumSpec::new(3, None, CounterexampleStage::Single).unwrap();
    let (f, _) = truncated_counterexample(&spec).unwrap();
    let r = verify_main_theorem(&f, 9, &accurate()).unwrap();
    assert_eq!(r.verdict, Verdict::NotFredholmSuspected);
    assert_eq!(r.checkpoints.last().unwrap().kernel_dim, 3);
}

#[test]
fn growth_rows_follow_block_count() {
    let rows = growth_experiment(&[2, 4, 8], LambdaRule::default(), &accurate()).unwrap();
    for r in &rows {
        assert_eq!((r.kernel_dim, r.sfl, r.index), (r.n, 0, 0));
        assert!(r.expected);
    }
    assert!(growth_csv(&rows).starts_with("N,kernel_dim,coker_dim,sigma_min,sfl\n2,2,2,"));
    assert!(growth_experiment(&[4, 2], LambdaRule::default(), &accurate()).is_err());
}

#[test]
fn extended_second_stage_links_neighbours() {
    let spec = TruncatedSumSpec::new(3, None, CounterexampleStage::Extended).unwrap();
    let (f, report) = extended_counterexample(&spec).unwrap();
    assert_eq!(f.horizon(), 2.0);
    assert_eq!(linalg::frobenius(&(f.evaluate(2.0) - f.evaluate(0.0))), 0.0);
    let p = Propagator::new(&f, 16384, Scheme::Magnus4).unwrap();
    // iota_0(e_2) is coordinate 1, iota_1(e_1) coordinate 2.
    let moved = p.apply(2.0, 1.0, &unit(6, 1)).unwrap();
    assert!((moved[2].norm() - 1.0).abs() < 1e-7);
    // Q(2,0) iota_0(e_1) lands on iota_1(e_1).
    let moved = p.apply(2.0, 0.0, &unit(6, 0)).unwrap();
    assert!((moved[2].norm() - 1.0).abs() < 1e-7);
    // The boundary directions are left alone by the second stage.
    for &j in &report.untouched {
        assert!((p.apply(2.0, 1.0, &unit(6, j)).unwrap()[j].norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn extended_truncation_pair_at_two() {
    let spec = TruncatedSumSpec::new(4, None, CounterexampleStage::Extended).unwrap();
    let (f, report) = extended_counterexample(&spec).unwrap();
    let opts = IndexOptions { steps: 16384, ..accurate() };
    let r = evolved_pair(&f, 2.0, &opts).unwrap().report(1e-3);
    assert_eq!(
        (r.kernel_dim, r.coker_dim, r.index),
        (report.expected_kernel_dim, report.expected_coker_dim, report.expected_index)
    );
    assert!(report.boundary_effect);
    let partition = PartitionOptions { probes_per_segment: 33, ..Default::default() };
    assert_eq!(spectral_flow_with(&f, &partition).unwrap(), 0);
}
