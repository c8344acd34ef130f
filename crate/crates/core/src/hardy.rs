//! Maximizing a Hardy success probability over the local, no-signaling, or
//! TOBL set.
//!
//! Every LP has the behavior cells as variables, pins the spec's zero cells to
//! zero, and maximizes the success cell. Membership in the chosen set is
//! expressed with extra variables where needed: deterministic-strategy weights
//! for the local set, and the reduced time-ordered weight vectors of each
//! bipartition for TOBL.

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::behavior::{validate, Behavior, BehaviorError, HardySpec};
use crate::decomposition::ToblDecomposition;
use crate::lp::{self, LpBuilder, LpOutcome};
use crate::polytopes::{
    add_tobl_block, couple_block, enumerate_local, ns_constraint_system, Bipartition, CellTarget,
    DeterministicLocalStrategy,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardyError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error(transparent)]
    Behavior(#[from] BehaviorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Bipartite,
    Tripartite,
}

impl Scenario {
    pub fn parties(self) -> usize {
        match self {
            Scenario::Bipartite => 2,
            Scenario::Tripartite => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorrelationSet {
    #[serde(rename = "local")]
    Local,
    #[serde(rename = "ns")]
    NoSignaling,
    #[serde(rename = "tobl")]
    Tobl,
}

impl CorrelationSet {
    pub fn label(self) -> &'static str {
        match self {
            CorrelationSet::Local => "local",
            CorrelationSet::NoSignaling => "no-signaling",
            CorrelationSet::Tobl => "TOBL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimizationRequest {
    scenario: Scenario,
    set: CorrelationSet,
    spec: HardySpec,
}

impl OptimizationRequest {
    pub fn new(
        scenario: Scenario,
        set: CorrelationSet,
        spec: HardySpec,
    ) -> Result<Self, HardyError> {
        if spec.parties() != scenario.parties() {
            return Err(HardyError::InvalidRequest(format!(
                "{}-party spec for a {}-party scenario",
                spec.parties(),
                scenario.parties()
            )));
        }
        if set == CorrelationSet::Tobl && scenario != Scenario::Tripartite {
            return Err(HardyError::InvalidRequest(
                "the TOBL set is only defined for three parties".into(),
            ));
        }
        Ok(OptimizationRequest {
            scenario,
            set,
            spec,
        })
    }

    pub fn canonical(scenario: Scenario, set: CorrelationSet) -> Result<Self, HardyError> {
        Self::new(scenario, set, HardySpec::canonical(scenario.parties())?)
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn set(&self) -> CorrelationSet {
        self.set
    }

    pub fn spec(&self) -> &HardySpec {
        &self.spec
    }
}

/// Evidence that the optimal behavior lies in the requested set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipWitness {
    /// The behavior satisfies the no-signaling system directly.
    NoSignaling,
    Local(Vec<(DeterministicLocalStrategy, Rational)>),
    Tobl(ToblDecomposition),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimizationResult {
    pub q_max: Rational,
    pub behavior: Behavior,
    pub witness: MembershipWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HardyOptimum {
    Optimal(OptimizationResult),
    /// No behavior in the set satisfies the zero conditions at all; carries
    /// the Farkas certificate of the LP.
    Infeasible(Vec<Rational>),
}

impl HardyOptimum {
    pub fn q_max(&self) -> Option<&Rational> {
        match self {
            HardyOptimum::Optimal(r) => Some(&r.q_max),
            HardyOptimum::Infeasible(_) => None,
        }
    }

    pub fn optimal(self) -> Option<OptimizationResult> {
        match self {
            HardyOptimum::Optimal(r) => Some(r),
            HardyOptimum::Infeasible(_) => None,
        }
    }
}

enum Extra {
    None,
    Local(Range<usize>, Vec<DeterministicLocalStrategy>),
    Tobl(Vec<crate::polytopes::ToblBlock>),
}

fn build(req: &OptimizationRequest) -> (LpBuilder, Range<usize>, Extra) {
    let n = req.scenario.parties();
    let t = 1usize << n;
    let mut lp = LpBuilder::new();
    let cells = lp.add_vars(t * t);
    let s = req.spec.success_event();
    lp.set_objective(cells.start + s.inputs * t + s.outcomes, Rational::one());

    let mut extra = Extra::None;
    match req.set {
        CorrelationSet::NoSignaling => {
            let sys = ns_constraint_system(n).expect("valid party count");
            for (row, b) in sys.rows.into_iter().zip(sys.rhs) {
                let terms = row
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| (cells.start + k, v))
                    .collect();
                lp.add_eq(terms, b);
            }
        }
        CorrelationSet::Local => {
            let strategies = enumerate_local(n).expect("valid party count");
            let weights = lp.add_vars(strategies.len());
            let mut rows: Vec<Vec<(usize, Rational)>> = (0..t * t)
                .map(|k| vec![(cells.start + k, -Rational::one())])
                .collect();
            for (k, st) in strategies.iter().enumerate() {
                for i in 0..t {
                    rows[i * t + st.outcomes(i)].push((weights.start + k, Rational::one()));
                }
            }
            for terms in rows {
                lp.add_eq(terms, Rational::zero());
            }
            lp.add_eq(
                weights.clone().map(|k| (k, Rational::one())).collect(),
                Rational::one(),
            );
            extra = Extra::Local(weights, strategies);
        }
        CorrelationSet::Tobl => {
            for i in 0..t {
                lp.add_eq(
                    (0..t).map(|o| (cells.start + i * t + o, Rational::one())).collect(),
                    Rational::one(),
                );
            }
            let blocks = Bipartition::ALL
                .iter()
                .map(|&bip| add_tobl_block(&mut lp, bip, &CellTarget::Vars(cells.clone())))
                .collect();
            extra = Extra::Tobl(blocks);
        }
    }
    for e in req.spec.zero_events() {
        lp.add_eq(
            vec![(cells.start + e.inputs * t + e.outcomes, Rational::one())],
            Rational::zero(),
        );
    }
    (lp, cells, extra)
}

/// Maximizes the spec's success probability over the requested set.
pub fn maximize_hardy(req: &OptimizationRequest) -> HardyOptimum {
    let (builder, cells, extra) = build(req);
    let lp = builder.build().expect("well-formed Hardy LP");
    match lp::solve(&lp) {
        LpOutcome::Infeasible { certificate } => HardyOptimum::Infeasible(certificate),
        LpOutcome::Unbounded => unreachable!("Hardy LPs are bounded: cells lie in [0, 1]"),
        LpOutcome::Optimal { value, solution } => {
            let behavior = Behavior::new(req.scenario.parties(), solution[cells].to_vec())
                .expect("cell count matches scenario");
            debug_assert!(validate(&behavior).is_valid());
            let witness = match extra {
                Extra::None => MembershipWitness::NoSignaling,
                Extra::Local(range, strategies) => MembershipWitness::Local(
                    strategies
                        .into_iter()
                        .zip(&solution[range])
                        .filter(|(_, w)| !w.is_zero())
                        .map(|(s, w)| (s, w.clone()))
                        .collect(),
                ),
                Extra::Tobl(blocks) => MembershipWitness::Tobl(
                    ToblDecomposition::new(
                        blocks.iter().map(|b| couple_block(b, &solution)).collect(),
                    )
                    .expect("one block per bipartition"),
                ),
            };
            HardyOptimum::Optimal(OptimizationResult {
                q_max: value,
                behavior,
                witness,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepEntry {
    pub spec: HardySpec,
    /// `None` if the zero conditions are infeasible within the set.
    pub q_max: Option<Rational>,
}

/// Optimizes every given spec over `set`, in the given order.
pub fn sweep_specs(
    specs: &[HardySpec],
    scenario: Scenario,
    set: CorrelationSet,
) -> Result<Vec<SweepEntry>, HardyError> {
    let requests = specs
        .iter()
        .map(|s| OptimizationRequest::new(scenario, set, s.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(requests
        .par_iter()
        .map(|req| SweepEntry {
            spec: req.spec.clone(),
            q_max: maximize_hardy(req).q_max().cloned(),
        })
        .collect())
}

/// Optimizes every member of the Hardy family for the scenario.
pub fn sweep_hardy_family(
    scenario: Scenario,
    set: CorrelationSet,
) -> Result<Vec<SweepEntry>, HardyError> {
    let specs = HardySpec::family(scenario.parties())?;
    sweep_specs(&specs, scenario, set)
}
