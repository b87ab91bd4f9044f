//! Scenarios shipped with the binary.

use anyhow::Result;

use crate::scenario::Scenario;

pub struct Entry {
    pub name: &'static str,
    /// Result exercised by the scenario.
    pub theorem: &'static str,
    pub source: &'static str,
}

macro_rules! entry {
    ($name:literal, $theorem:literal) => {
        Entry { name: $name, theorem: $theorem, source: include_str!(concat!("../scenarios/", $name, ".toml")) }
    };
}

pub const CATALOG: &[Entry] = &[
    entry!("constant-baseline", "constant invertible family: sfl = 0 and ind(D_APS) = 0"),
    entry!("crossing-ramp", "ind(D_APS) = sfl(A) for a family bounded below"),
    entry!("random-flow", "spectral flow is independent of the flow partition; sfl(-A) identity"),
    entry!("evolve-random", "evolution operator as limit of piecewise-constant propagators; Duhamel formula"),
    entry!("evolve-swap-block", "explicit propagator of the eigenspace-swapping block"),
    entry!("random-main", "ind(D_APS) = sfl(A) when (D|[0,t])_APS is Fredholm for all t"),
    entry!("gluing-ramp", "gluing formula for the APS index"),
    entry!("compact-perturbation", "compact derivative gives a compact pair (Q+- and Q-+ compact)"),
    entry!("counterexample-diagnostic", "swap construction: Q+- is not compact"),
    entry!("swap-counterexample", "swap construction: D_APS is not Fredholm although sfl(A) = 0"),
    entry!("extended-counterexample", "D_APS Fredholm alone does not force ind(D_APS) = sfl(A)"),
];

pub fn find(name: &str) -> Option<&'static Entry> {
    CATALOG.iter().find(|e| e.name == name)
}

impl Entry {
    pub fn scenario(&self) -> Result<Scenario> {
        Scenario::parse(self.source, &format!("bundled:{}", self.name))
    }
}
