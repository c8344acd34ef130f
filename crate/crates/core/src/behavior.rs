//! Conditional probability tables for two or three parties with binary inputs
//! and outputs, plus Hardy-argument specifications over them.
//!
//! Cells are stored in one flat vector indexed by `inputs * 2^n + outcomes`,
//! where `inputs` packs `(x, y[, z])` and `outcomes` packs `(a, b[, c])` with
//! party A in the most significant bit. Row `xyz`, column `abc` of a printed
//! table is therefore cell `8 * xyz + abc`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BehaviorError {
    #[error("unsupported party count {0}; expected 2 or 3")]
    PartyCount(usize),
    #[error("{parties}-party behavior needs {expected} cells, got {found}")]
    CellCount {
        parties: usize,
        expected: usize,
        found: usize,
    },
    #[error("{location}: {message}")]
    Parse { location: String, message: String },
    #[error("spec is for {spec} parties but behavior has {behavior}")]
    PartyMismatch { spec: usize, behavior: usize },
    #[error("invalid bit value {value} for {field}")]
    InvalidBit { field: String, value: u8 },
    #[error("degenerate Hardy spec: {0}")]
    DegenerateSpec(String),
    #[error("I/O error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::A, Party::B, Party::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Party {
        Party::ALL[i]
    }

    pub fn input_symbol(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }

    pub fn outcome_symbol(self) -> char {
        ['a', 'b', 'c'][self.index()]
    }
}

fn check_parties(parties: usize) -> Result<(), BehaviorError> {
    if parties == 2 || parties == 3 {
        Ok(())
    } else {
        Err(BehaviorError::PartyCount(parties))
    }
}

/// Bit of `party` inside a packed tuple over `parties` parties.
#[inline]
pub fn bit(packed: usize, party: usize, parties: usize) -> usize {
    (packed >> (parties - 1 - party)) & 1
}

/// Packs per-party bits (party A first) into a tuple index.
pub fn pack(bits: &[usize]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | (b & 1))
}

/// Renders a packed tuple as a bit string, e.g. `"001"`.
pub fn tuple_label(packed: usize, parties: usize) -> String {
    (0..parties)
        .map(|p| if bit(packed, p, parties) == 1 { '1' } else { '0' })
        .collect()
}

/// Full table `P(outcomes | inputs)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Behavior {
    parties: usize,
    cells: Vec<Rational>,
}

impl std::fmt::Debug for Behavior {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Behavior({} parties)", self.parties)?;
        for i in 0..self.num_tuples() {
            let row: Vec<String> = (0..self.num_tuples())
                .map(|o| self.get(i, o).to_string())
                .collect();
            writeln!(f, "  {}: {}", tuple_label(i, self.parties), row.join(" "))?;
        }
        Ok(())
    }
}

impl Behavior {
    pub fn new(parties: usize, cells: Vec<Rational>) -> Result<Self, BehaviorError> {
        check_parties(parties)?;
        let expected = 1 << (2 * parties);
        if cells.len() != expected {
            return Err(BehaviorError::CellCount {
                parties,
                expected,
                found: cells.len(),
            });
        }
        Ok(Behavior { parties, cells })
    }

    /// Builds a behavior from `f(inputs, outcomes)` over packed tuples.
    pub fn from_fn(
        parties: usize,
        f: impl Fn(usize, usize) -> Rational,
    ) -> Result<Self, BehaviorError> {
        check_parties(parties)?;
        let t = 1 << parties;
        let cells = (0..t * t).map(|k| f(k / t, k % t)).collect();
        Behavior::new(parties, cells)
    }

    /// Every outcome equally likely for every input.
    pub fn uniform(parties: usize) -> Result<Self, BehaviorError> {
        let p = Rational::new(1, 1 << parties);
        Behavior::from_fn(parties, |_, _| p.clone())
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    /// Number of input (equivalently, outcome) tuples: `2^parties`.
    pub fn num_tuples(&self) -> usize {
        1 << self.parties
    }

    pub fn cells(&self) -> &[Rational] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<Rational> {
        self.cells
    }

    pub fn index(&self, inputs: usize, outcomes: usize) -> usize {
        inputs * self.num_tuples() + outcomes
    }

    pub fn get(&self, inputs: usize, outcomes: usize) -> &Rational {
        &self.cells[self.index(inputs, outcomes)]
    }

    pub fn with_cell(&self, inputs: usize, outcomes: usize, value: Rational) -> Behavior {
        let mut b = self.clone();
        let i = self.index(inputs, outcomes);
        b.cells[i] = value;
        b
    }

    /// Distribution of the kept parties' outcomes at the given full input
    /// tuple, indexed by the kept outcomes packed in party order.
    ///
    /// # Panics
    /// If `keep` is empty or names a party outside the behavior.
    pub fn marginal(&self, keep: &[Party], inputs: usize) -> Vec<Rational> {
        assert!(!keep.is_empty(), "marginal over no parties");
        let n = self.parties;
        let mut keep: Vec<usize> = keep.iter().map(|p| p.index()).collect();
        keep.sort_unstable();
        keep.dedup();
        assert!(keep.iter().all(|&p| p < n), "party outside behavior");
        let mut out = vec![Rational::zero(); 1 << keep.len()];
        for o in 0..self.num_tuples() {
            let v = self.get(inputs, o);
            if v.is_zero() {
                continue;
            }
            let k = pack(&keep.iter().map(|&p| bit(o, p, n)).collect::<Vec<_>>());
            out[k] += v;
        }
        out
    }
}

/// One violated equation or inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub constraint: String,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub normalized: bool,
    pub nonnegative: bool,
    pub no_signaling: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.normalized && self.nonnegative && self.no_signaling
    }
}

/// Checks normalization, positivity, and every no-signaling equality.
///
/// No-signaling rows are labelled `ns[P;ctx]`: the joint distribution of the
/// other parties (inputs and outcomes given by `ctx`) must not depend on
/// party `P`'s input.
pub fn validate(b: &Behavior) -> ValidationReport {
    let n = b.parties();
    let t = b.num_tuples();
    let mut violations = Vec::new();

    let mut normalized = true;
    for i in 0..t {
        let sum: Rational = (0..t).map(|o| b.get(i, o)).sum();
        if !sum.is_one() {
            normalized = false;
            violations.push(Violation {
                constraint: format!("norm[{}]", tuple_label(i, n)),
                lhs: sum,
                rhs: Rational::one(),
            });
        }
    }

    let mut nonnegative = true;
    for i in 0..t {
        for o in 0..t {
            if b.get(i, o).is_negative() {
                nonnegative = false;
                violations.push(Violation {
                    constraint: format!("pos[{},{}]", tuple_label(i, n), tuple_label(o, n)),
                    lhs: b.get(i, o).clone(),
                    rhs: Rational::zero(),
                });
            }
        }
    }

    let mut no_signaling = true;
    for row in ns_rows(n) {
        let side = |inputs: &[(usize, usize)]| -> Rational {
            inputs.iter().map(|&(i, o)| b.get(i, o)).sum()
        };
        let lhs = side(&row.plus);
        let rhs = side(&row.minus);
        if lhs != rhs {
            no_signaling = false;
            violations.push(Violation {
                constraint: row.label,
                lhs,
                rhs,
            });
        }
    }

    ValidationReport {
        normalized,
        nonnegative,
        no_signaling,
        violations,
    }
}

/// `Σ plus cells = Σ minus cells`, as (inputs, outcomes) pairs.
pub(crate) struct NsRow {
    pub label: String,
    pub plus: Vec<(usize, usize)>,
    pub minus: Vec<(usize, usize)>,
}

/// One row per (party whose input varies, other parties' inputs, other
/// parties' outcomes). Permuting the parties gives the full family; single
/// party marginals follow from these.
pub(crate) fn ns_rows(parties: usize) -> Vec<NsRow> {
    let n = parties;
    let t = 1usize << n;
    let mut rows = Vec::new();
    for p in 0..n {
        let others: Vec<usize> = (0..n).filter(|&q| q != p).collect();
        let with = |ctx_in: usize, ctx_out: usize, own_in: usize, own_out: usize| {
            let mut ib = vec![0; n];
            let mut ob = vec![0; n];
            for (k, &q) in others.iter().enumerate() {
                ib[q] = bit(ctx_in, k, others.len());
                ob[q] = bit(ctx_out, k, others.len());
            }
            ib[p] = own_in;
            ob[p] = own_out;
            (pack(&ib), pack(&ob))
        };
        for ctx_in in 0..t / 2 {
            for ctx_out in 0..t / 2 {
                let label = format!(
                    "ns[{};{}={},{}={}]",
                    Party::from_index(p).outcome_symbol().to_ascii_uppercase(),
                    others
                        .iter()
                        .map(|&q| Party::from_index(q).input_symbol())
                        .collect::<String>(),
                    tuple_label(ctx_in, others.len()),
                    others
                        .iter()
                        .map(|&q| Party::from_index(q).outcome_symbol())
                        .collect::<String>(),
                    tuple_label(ctx_out, others.len()),
                );
                rows.push(NsRow {
                    label,
                    plus: (0..2).map(|o| with(ctx_in, ctx_out, 0, o)).collect(),
                    minus: (0..2).map(|o| with(ctx_in, ctx_out, 1, o)).collect(),
                });
            }
        }
    }
    rows
}

/// A single table cell: packed inputs and packed outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub inputs: usize,
    pub outcomes: usize,
}

impl Event {
    pub fn label(&self, parties: usize) -> String {
        format!(
            "P({}|{})",
            tuple_label(self.outcomes, parties),
            tuple_label(self.inputs, parties)
        )
    }
}

/// One member of the Hardy family: each party has an unprimed and a primed
/// input. The success event has every party on its unprimed input with
/// outcomes `success`. For each party `p` there is a zero event with `p` on its
/// primed input showing `zero[p]` and the others as in the success event, and
/// a final zero event with everybody primed showing `zero[p] ⊕ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpecFields")]
pub struct HardySpec {
    parties: usize,
    unprimed_inputs: Vec<u8>,
    success_outcomes: Vec<u8>,
    zero_outcomes: Vec<u8>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFields {
    parties: usize,
    unprimed_inputs: Vec<u8>,
    success_outcomes: Vec<u8>,
    zero_outcomes: Vec<u8>,
}

impl TryFrom<SpecFields> for HardySpec {
    type Error = BehaviorError;

    fn try_from(f: SpecFields) -> Result<Self, Self::Error> {
        HardySpec::new(f.parties, f.unprimed_inputs, f.success_outcomes, f.zero_outcomes)
    }
}

impl HardySpec {
    /// Reads a spec such as
    /// `{"parties": 3, "unprimed_inputs": [0,0,1], "success_outcomes": [1,1,0], "zero_outcomes": [0,0,0]}`.
    pub fn from_json(text: &str) -> Result<Self, BehaviorError> {
        serde_json::from_str(text).map_err(|e| BehaviorError::Parse {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn new(
        parties: usize,
        unprimed_inputs: Vec<u8>,
        success_outcomes: Vec<u8>,
        zero_outcomes: Vec<u8>,
    ) -> Result<Self, BehaviorError> {
        check_parties(parties)?;
        for (field, v) in [
            ("unprimed_inputs", &unprimed_inputs),
            ("success_outcomes", &success_outcomes),
            ("zero_outcomes", &zero_outcomes),
        ] {
            if v.len() != parties {
                return Err(BehaviorError::Parse {
                    location: field.to_string(),
                    message: format!("expected {parties} entries, got {}", v.len()),
                });
            }
            if let Some(&bad) = v.iter().find(|&&b| b > 1) {
                return Err(BehaviorError::InvalidBit {
                    field: field.to_string(),
                    value: bad,
                });
            }
        }
        let spec = HardySpec {
            parties,
            unprimed_inputs,
            success_outcomes,
            zero_outcomes,
        };
        spec.check_distinct()?;
        Ok(spec)
    }

    fn check_distinct(&self) -> Result<(), BehaviorError> {
        let mut events = self.zero_events();
        events.push(self.success_event());
        let mut sorted = events.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != events.len() {
            return Err(BehaviorError::DegenerateSpec(
                "success and zero events must be distinct cells".into(),
            ));
        }
        Ok(())
    }

    /// `P(110|001) > 0`, `P(110|000) = P(100|011) = P(010|101) = P(111|110) = 0`
    /// for three parties; `P(11|00) > 0`, `P(01|10) = P(10|01) = P(11|11) = 0`
    /// for two.
    pub fn canonical(parties: usize) -> Result<Self, BehaviorError> {
        match parties {
            3 => HardySpec::new(3, vec![0, 0, 1], vec![1, 1, 0], vec![0, 0, 0]),
            2 => HardySpec::new(2, vec![0, 0], vec![1, 1], vec![0, 0]),
            n => Err(BehaviorError::PartyCount(n)),
        }
    }

    /// All `2^(3n)` members of the family in a fixed order.
    pub fn family(parties: usize) -> Result<Vec<HardySpec>, BehaviorError> {
        check_parties(parties)?;
        let n = parties;
        (0..1usize << (3 * n))
            .map(|code| {
                let field = |k: usize| -> Vec<u8> {
                    (0..n)
                        .map(|p| ((code >> (3 * n - 1 - (k * n + p))) & 1) as u8)
                        .collect()
                };
                HardySpec::new(n, field(0), field(1), field(2))
            })
            .collect()
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn unprimed_inputs(&self) -> &[u8] {
        &self.unprimed_inputs
    }

    pub fn success_outcomes(&self) -> &[u8] {
        &self.success_outcomes
    }

    pub fn zero_outcomes(&self) -> &[u8] {
        &self.zero_outcomes
    }

    fn event(&self, primed: impl Fn(usize) -> bool, flip_zero: bool) -> Event {
        let n = self.parties;
        let mut inputs = vec![0; n];
        let mut outcomes = vec![0; n];
        for p in 0..n {
            let u = self.unprimed_inputs[p] as usize;
            if primed(p) {
                inputs[p] = u ^ 1;
                outcomes[p] = self.zero_outcomes[p] as usize ^ flip_zero as usize;
            } else {
                inputs[p] = u;
                outcomes[p] = self.success_outcomes[p] as usize;
            }
        }
        Event {
            inputs: pack(&inputs),
            outcomes: pack(&outcomes),
        }
    }

    pub fn success_event(&self) -> Event {
        self.event(|_| false, false)
    }

    /// `parties + 1` events that must have probability zero.
    pub fn zero_events(&self) -> Vec<Event> {
        let mut events: Vec<Event> = (0..self.parties)
            .map(|p| self.event(|q| q == p, false))
            .collect();
        events.push(self.event(|_| true, true));
        events
    }

    pub fn describe(&self) -> String {
        let n = self.parties;
        let zeros: Vec<String> = self
            .zero_events()
            .iter()
            .map(|e| format!("{} = 0", e.label(n)))
            .collect();
        format!("{} > 0; {}", self.success_event().label(n), zeros.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HardyReport {
    pub witness: bool,
    pub q: Rational,
    pub zero_violations: Vec<(String, Rational)>,
}

/// Reads off the success probability and checks the zero conditions.
pub fn hardy_report(b: &Behavior, spec: &HardySpec) -> Result<HardyReport, BehaviorError> {
    if spec.parties() != b.parties() {
        return Err(BehaviorError::PartyMismatch {
            spec: spec.parties(),
            behavior: b.parties(),
        });
    }
    let n = b.parties();
    let s = spec.success_event();
    let q = b.get(s.inputs, s.outcomes).clone();
    let zero_violations: Vec<(String, Rational)> = spec
        .zero_events()
        .iter()
        .filter_map(|e| {
            let v = b.get(e.inputs, e.outcomes);
            (!v.is_zero()).then(|| (e.label(n), v.clone()))
        })
        .collect();
    Ok(HardyReport {
        witness: zero_violations.is_empty() && q.is_positive(),
        q,
        zero_violations,
    })
}
