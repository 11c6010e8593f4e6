//! Self-contained reproductions of the reference witness examples, backed by
//! the data files shipped in `data/`.

use crate::acbound::{self, ObservableSet, PairSum, WitnessReport, WitnessSpec};
use crate::bloch::DensityMatrix;
use crate::hw_basis::PhasePoint;
use crate::io;
use crate::states;

/// One runnable demo: a named state plus a shipped witness file, with the
/// reference numbers the run is expected to reproduce.
#[derive(Debug, Clone)]
pub struct Demo {
    pub name: &'static str,
    pub state_label: &'static str,
    pub spec: WitnessSpec,
    pub reference_value: f64,
    pub reference_bound: f64,
    pub reference_threshold: f64,
}

fn parse_embedded(name: &str, raw: &str) -> WitnessSpec {
    io::read_witness_str(raw).unwrap_or_else(|e| panic!("embedded fixture {name}: {e}"))
}

pub fn ghz34_witness() -> WitnessSpec {
    parse_embedded("ghz34.hwwit", include_str!("../data/ghz34.hwwit"))
}

pub fn ghz34_gme_witness() -> WitnessSpec {
    parse_embedded("ghz34_gme.hwwit", include_str!("../data/ghz34_gme.hwwit"))
}

pub fn maxent9_witness() -> WitnessSpec {
    parse_embedded("maxent9.hwwit", include_str!("../data/maxent9.hwwit"))
}

pub fn pauli_witness() -> WitnessSpec {
    parse_embedded("pauli.hwwit", include_str!("../data/pauli.hwwit"))
}

pub fn ghz34() -> Demo {
    Demo {
        name: "ghz34",
        state_label: "GHZ state of three ququarts",
        spec: ghz34_witness(),
        reference_value: 3.0,
        reference_bound: 1.0,
        reference_threshold: 1.0 / 3.0,
    }
}

pub fn ghz34_gme() -> Demo {
    Demo {
        name: "ghz34-gme",
        state_label: "GHZ state of three ququarts",
        spec: ghz34_gme_witness(),
        reference_value: 7.0,
        reference_bound: 3.0,
        reference_threshold: 3.0 / 7.0,
    }
}

pub fn maxent9() -> Demo {
    Demo {
        name: "maxent9",
        state_label: "maximally entangled pair of dimension 9",
        spec: maxent9_witness(),
        reference_value: 3.0,
        reference_bound: 2.41987,
        reference_threshold: 2.41987 / 3.0,
    }
}

pub fn pauli() -> Demo {
    Demo {
        name: "pauli",
        state_label: "two-qubit Bell state",
        spec: pauli_witness(),
        reference_value: 3.0,
        reference_bound: 1.0,
        reference_threshold: 1.0 / 3.0,
    }
}

pub fn all() -> Vec<Demo> {
    vec![ghz34(), ghz34_gme(), maxent9(), pauli()]
}

impl Demo {
    pub fn state(&self) -> DensityMatrix {
        match self.name {
            "ghz34" | "ghz34-gme" => states::ghz(3, 4).expect("valid"),
            "maxent9" => states::max_entangled(9).expect("valid"),
            "pauli" => states::max_entangled(2).expect("valid"),
            other => panic!("unknown demo {other}"),
        }
    }

    pub fn run(&self) -> WitnessReport {
        acbound::evaluate_witness(&self.state(), &self.spec).expect("demo is self-consistent")
    }
}

/// The per-party observable subsets of the maxent9 demo, used to recompute
/// its separable bound from the anticommutator budget.
pub fn maxent9_local_sets() -> (ObservableSet, ObservableSet) {
    let pt = |l, m| PhasePoint::new(9, l, m).expect("on grid");
    let a = ObservableSet::from_points(&[pt(1, 0), pt(0, 4), pt(1, 4)]).expect("valid set");
    let b = ObservableSet::from_points(&[pt(1, 0), pt(0, 5), pt(1, 5)]).expect("valid set");
    (a, b)
}

/// Separable bounds of the maxent9 witness under both pair-sum conventions.
pub fn maxent9_computed_bounds() -> (f64, f64) {
    let (a, b) = maxent9_local_sets();
    let ordered =
        acbound::build_separable_bound(&a, &b, PairSum::Ordered).expect("valid sets");
    let unordered =
        acbound::build_separable_bound(&a, &b, PairSum::Unordered).expect("valid sets");
    (ordered, unordered)
}
