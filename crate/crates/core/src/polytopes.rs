//! Deterministic strategies and membership tests for the local, no-signaling,
//! and time-ordered bi-local (TOBL) sets.
//!
//! A TOBL model for bipartition `L|PQ` has, for each hidden value, a local
//! response for the lone party `L` and two time-ordered responses for the pair:
//! one where `P` answers first (on its own input only) and `Q` answers on both
//! inputs, and one with the roles swapped. Both must reproduce the behavior
//! with the same weights and the same lone responses.
//!
//! Stochastic responses are mixtures of deterministic ones, so the LPs range
//! over deterministic strategies only. The shared weights are handled through
//! a reduced system: one weight vector over (lone response, forward pair
//! strategy), one over (lone response, backward pair strategy), and equality of
//! their lone-response marginals. Any feasible pair couples into a shared model
//! via `p(α, β⁺, β⁻) = q⁺(α, β⁺) q⁻(α, β⁻) / m(α)`.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::behavior::{bit, pack, Behavior, BehaviorError, Party};
use crate::decomposition::{BipartitionModel, ToblDecomposition, ToblTerm};
use crate::lp::{self, Feasibility, LpBuilder};
use crate::rational::Rational;

/// Outcome of a single party as a 2-bit truth table: bit `i` is the outcome on
/// input `i`.
#[inline]
fn respond(table: u8, input: usize) -> usize {
    ((table >> input) & 1) as usize
}

/// One deterministic point of the local polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeterministicLocalStrategy {
    parties: usize,
    /// Per-party 2-bit truth tables, party A first.
    responses: [u8; 3],
}

impl DeterministicLocalStrategy {
    pub fn new(responses: &[u8]) -> Result<Self, BehaviorError> {
        let parties = responses.len();
        if parties != 2 && parties != 3 {
            return Err(BehaviorError::PartyCount(parties));
        }
        if let Some(&r) = responses.iter().find(|&&r| r > 3) {
            return Err(BehaviorError::InvalidBit {
                field: "response truth table".into(),
                value: r,
            });
        }
        let mut arr = [0u8; 3];
        arr[..parties].copy_from_slice(responses);
        Ok(DeterministicLocalStrategy {
            parties,
            responses: arr,
        })
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn responses(&self) -> &[u8] {
        &self.responses[..self.parties]
    }

    /// Truth-table integer encoding: base-4 digits, party A most significant.
    pub fn encoding(&self) -> usize {
        self.responses()
            .iter()
            .fold(0, |acc, &r| acc * 4 + r as usize)
    }

    pub fn outcomes(&self, inputs: usize) -> usize {
        let n = self.parties;
        pack(
            &(0..n)
                .map(|p| respond(self.responses[p], bit(inputs, p, n)))
                .collect::<Vec<_>>(),
        )
    }

    pub fn behavior(&self) -> Behavior {
        Behavior::from_fn(self.parties, |i, o| {
            if self.outcomes(i) == o {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .expect("party count checked at construction")
    }
}

/// All `4^parties` deterministic local strategies ordered by encoding.
pub fn enumerate_local(parties: usize) -> Result<Vec<DeterministicLocalStrategy>, BehaviorError> {
    if parties != 2 && parties != 3 {
        return Err(BehaviorError::PartyCount(parties));
    }
    Ok((0..1usize << (2 * parties))
        .map(|code| {
            let responses: Vec<u8> = (0..parties)
                .map(|p| ((code >> (2 * (parties - 1 - p))) & 3) as u8)
                .collect();
            DeterministicLocalStrategy::new(&responses).expect("in range")
        })
        .collect())
}

/// A split of the three parties into a lone party and a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Bipartition {
    #[serde(rename = "A|BC")]
    ABc,
    #[serde(rename = "B|AC")]
    BAc,
    #[serde(rename = "C|AB")]
    CAb,
}

impl Bipartition {
    pub const ALL: [Bipartition; 3] = [Bipartition::ABc, Bipartition::BAc, Bipartition::CAb];

    pub fn lone(self) -> Party {
        match self {
            Bipartition::ABc => Party::A,
            Bipartition::BAc => Party::B,
            Bipartition::CAb => Party::C,
        }
    }

    /// The pair in party order.
    pub fn pair(self) -> (Party, Party) {
        match self {
            Bipartition::ABc => (Party::B, Party::C),
            Bipartition::BAc => (Party::A, Party::C),
            Bipartition::CAb => (Party::A, Party::B),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Bipartition::ABc => "A|BC",
            Bipartition::BAc => "B|AC",
            Bipartition::CAb => "C|AB",
        }
    }

    /// Label of one time order, e.g. `A|B->C` or `A<-B|C`.
    pub fn direction_label(self, direction: Direction) -> String {
        let (p, q) = self.pair();
        let arrow = match direction {
            Direction::Forward => "->",
            Direction::Backward => "<-",
        };
        let pair = format!("{p:?}{arrow}{q:?}");
        match self {
            Bipartition::CAb => format!("{pair}|{:?}", self.lone()),
            _ => format!("{:?}|{pair}", self.lone()),
        }
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Time order within the pair: `Forward` means the lower-lettered party of the
/// pair answers first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Forward, Direction::Backward];
}

/// Deterministic one-way-signaling response of a pair.
///
/// `first` is the 2-bit truth table of the party answering first, on its own
/// input. `second` is the 4-bit truth table of the other party indexed by
/// `2 * input(P) + input(Q)` with `(P, Q)` the pair in party order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairStrategy {
    pub first: u8,
    pub second: u8,
}

impl PairStrategy {
    pub const COUNT: usize = 64;

    pub fn from_encoding(code: usize) -> Self {
        PairStrategy {
            first: (code >> 4) as u8 & 3,
            second: code as u8 & 15,
        }
    }

    pub fn encoding(self) -> usize {
        (self.first as usize) << 4 | self.second as usize
    }

    /// Pair outcomes `(o_P, o_Q)` for pair inputs `(in_P, in_Q)`.
    pub fn outcomes(self, direction: Direction, in_p: usize, in_q: usize) -> (usize, usize) {
        let joint = ((self.second >> (2 * in_p + in_q)) & 1) as usize;
        match direction {
            Direction::Forward => (respond(self.first, in_p), joint),
            Direction::Backward => (joint, respond(self.first, in_q)),
        }
    }
}

/// A lone-party response together with a time-ordered pair response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeOrderedStrategy {
    pub bipartition: Bipartition,
    pub direction: Direction,
    pub lone: u8,
    pub pair: PairStrategy,
}

impl TimeOrderedStrategy {
    /// `lone * 64 + pair encoding`.
    pub fn encoding(&self) -> usize {
        self.lone as usize * PairStrategy::COUNT + self.pair.encoding()
    }

    pub fn outcomes(&self, inputs: usize) -> usize {
        tripartite_outcomes(self.bipartition, self.direction, self.lone, self.pair, inputs)
    }

    /// Induced conditional distribution (0/1-valued).
    pub fn behavior(&self) -> Behavior {
        Behavior::from_fn(3, |i, o| {
            if self.outcomes(i) == o {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .expect("three parties")
    }
}

pub(crate) fn tripartite_outcomes(
    bip: Bipartition,
    direction: Direction,
    lone: u8,
    pair: PairStrategy,
    inputs: usize,
) -> usize {
    let (p, q) = bip.pair();
    let l = bip.lone();
    let mut out = [0usize; 3];
    out[l.index()] = respond(lone, bit(inputs, l.index(), 3));
    let (op, oq) = pair.outcomes(
        direction,
        bit(inputs, p.index(), 3),
        bit(inputs, q.index(), 3),
    );
    out[p.index()] = op;
    out[q.index()] = oq;
    pack(&out)
}

/// All 256 strategies for one bipartition and time order, by encoding.
pub fn enumerate_time_ordered(
    bipartition: Bipartition,
    direction: Direction,
) -> Vec<TimeOrderedStrategy> {
    (0..4u8)
        .flat_map(|lone| {
            (0..PairStrategy::COUNT).map(move |code| TimeOrderedStrategy {
                bipartition,
                direction,
                lone,
                pair: PairStrategy::from_encoding(code),
            })
        })
        .collect()
}

/// Equality system `A·p = b` over behavior cells (in canonical cell order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub labels: Vec<String>,
}

impl ConstraintSystem {
    pub fn is_satisfied_by(&self, cells: &[Rational]) -> bool {
        self.rows
            .iter()
            .zip(&self.rhs)
            .all(|(row, b)| lp::dot(row, cells) == *b)
    }

    /// Labels of rows violated by `cells`.
    pub fn violated(&self, cells: &[Rational]) -> Vec<&str> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .zip(&self.labels)
            .filter(|((row, b), _)| lp::dot(row, cells) != **b)
            .map(|(_, l)| l.as_str())
            .collect()
    }
}

/// Normalization per input tuple followed by every no-signaling equality.
/// Together with nonnegativity this describes the no-signaling set.
pub fn ns_constraint_system(parties: usize) -> Result<ConstraintSystem, BehaviorError> {
    if parties != 2 && parties != 3 {
        return Err(BehaviorError::PartyCount(parties));
    }
    let t = 1usize << parties;
    let width = t * t;
    let mut sys = ConstraintSystem {
        rows: Vec::new(),
        rhs: Vec::new(),
        labels: Vec::new(),
    };
    for i in 0..t {
        let mut row = vec![Rational::zero(); width];
        for v in &mut row[i * t..(i + 1) * t] {
            *v = Rational::one();
        }
        sys.rows.push(row);
        sys.rhs.push(Rational::one());
        sys.labels
            .push(format!("norm[{}]", crate::behavior::tuple_label(i, parties)));
    }
    for ns in crate::behavior::ns_rows(parties) {
        let mut row = vec![Rational::zero(); width];
        for &(i, o) in &ns.plus {
            row[i * t + o] += Rational::one();
        }
        for &(i, o) in &ns.minus {
            row[i * t + o] -= Rational::one();
        }
        sys.rows.push(row);
        sys.rhs.push(Rational::zero());
        sys.labels.push(ns.label);
    }
    Ok(sys)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalMembership {
    /// Convex weights over deterministic strategies (only nonzero weights).
    Member(Vec<(DeterministicLocalStrategy, Rational)>),
    /// Bell-type functional over cells: `y·D ≤ 0` for every deterministic
    /// behavior `D` but `y·P > 0`.
    NotMember(Vec<Rational>),
}

impl LocalMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, LocalMembership::Member(_))
    }
}

/// Decides membership in the local polytope by LP over the deterministic
/// points.
pub fn membership_local(b: &Behavior) -> LocalMembership {
    let strategies = enumerate_local(b.parties()).expect("behavior party count is valid");
    let t = b.num_tuples();
    let mut a = vec![vec![Rational::zero(); strategies.len()]; t * t];
    for (k, s) in strategies.iter().enumerate() {
        for i in 0..t {
            a[i * t + s.outcomes(i)][k] = Rational::one();
        }
    }
    match lp::feasible(&a, b.cells()).expect("dimensions consistent") {
        Feasibility::Feasible(w) => LocalMembership::Member(
            strategies
                .into_iter()
                .zip(w)
                .filter(|(_, w)| !w.is_zero())
                .collect(),
        ),
        Feasibility::Infeasible(y) => LocalMembership::NotMember(y),
    }
}

/// Reconstructs a behavior from local weights.
pub fn local_mixture(
    parties: usize,
    weights: &[(DeterministicLocalStrategy, Rational)],
) -> Result<Behavior, BehaviorError> {
    let t = 1usize << parties;
    let mut cells = vec![Rational::zero(); t * t];
    for (s, w) in weights {
        for i in 0..t {
            cells[i * t + s.outcomes(i)] += w;
        }
    }
    Behavior::new(parties, cells)
}

/// Where the reconstruction rows of a TOBL block point.
pub(crate) enum CellTarget<'a> {
    /// Known behavior cells.
    Fixed(&'a [Rational]),
    /// LP variables holding the 64 cells.
    Vars(Range<usize>),
}

/// Variable ranges of one bipartition's reduced TOBL system.
pub(crate) struct ToblBlock {
    pub bipartition: Bipartition,
    pub forward: Range<usize>,
    pub backward: Range<usize>,
}

/// Adds `q⁺`, `q⁻` (256 variables each, indexed `lone * 64 + pair`), 64
/// forward and 64 backward reconstruction rows, and 4 lone-marginal coupling
/// rows.
pub(crate) fn add_tobl_block(
    lp: &mut LpBuilder,
    bipartition: Bipartition,
    target: &CellTarget<'_>,
) -> ToblBlock {
    let forward = lp.add_vars(4 * PairStrategy::COUNT);
    let backward = lp.add_vars(4 * PairStrategy::COUNT);
    for (direction, vars) in [
        (Direction::Forward, &forward),
        (Direction::Backward, &backward),
    ] {
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); 64];
        for s in enumerate_time_ordered(bipartition, direction) {
            let var = vars.start + s.encoding();
            for i in 0..8 {
                rows[i * 8 + s.outcomes(i)].push((var, Rational::one()));
            }
        }
        for (cell, mut terms) in rows.into_iter().enumerate() {
            let rhs = match target {
                CellTarget::Fixed(cells) => cells[cell].clone(),
                CellTarget::Vars(r) => {
                    terms.push((r.start + cell, -Rational::one()));
                    Rational::zero()
                }
            };
            lp.add_eq(terms, rhs);
        }
    }
    for lone in 0..4 {
        let span = lone * PairStrategy::COUNT..(lone + 1) * PairStrategy::COUNT;
        let mut terms: Vec<(usize, Rational)> = span
            .clone()
            .map(|k| (forward.start + k, Rational::one()))
            .collect();
        terms.extend(span.map(|k| (backward.start + k, -Rational::one())));
        lp.add_eq(terms, Rational::zero());
    }
    ToblBlock {
        bipartition,
        forward,
        backward,
    }
}

/// Couples the two weight vectors of a block into shared-weight terms.
pub(crate) fn couple_block(block: &ToblBlock, solution: &[Rational]) -> BipartitionModel {
    let fwd = &solution[block.forward.clone()];
    let bwd = &solution[block.backward.clone()];
    let mut terms = Vec::new();
    for lone in 0..4 {
        let span = lone * PairStrategy::COUNT..(lone + 1) * PairStrategy::COUNT;
        let mass: Rational = fwd[span.clone()].iter().sum();
        if mass.is_zero() {
            continue;
        }
        for f in span.clone().filter(|&k| !fwd[k].is_zero()) {
            for g in span.clone().filter(|&k| !bwd[k].is_zero()) {
                terms.push(ToblTerm {
                    weight: &(&fwd[f] * &bwd[g]) / &mass,
                    lone: lone as u8,
                    forward: PairStrategy::from_encoding(f % PairStrategy::COUNT),
                    backward: PairStrategy::from_encoding(g % PairStrategy::COUNT),
                });
            }
        }
    }
    BipartitionModel {
        bipartition: block.bipartition,
        terms,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToblMembership {
    Member(ToblDecomposition),
    /// Farkas certificate for the reduced system of the first failing
    /// bipartition (rows: 64 forward cells, 64 backward cells, 4 coupling).
    NotMember {
        bipartition: Bipartition,
        certificate: Vec<Rational>,
    },
}

impl ToblMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, ToblMembership::Member(_))
    }
}

/// Reduced TOBL system for one bipartition with the behavior as right-hand side.
pub fn tobl_system(b: &Behavior, bipartition: Bipartition) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let mut builder = LpBuilder::new();
    add_tobl_block(&mut builder, bipartition, &CellTarget::Fixed(b.cells()));
    let lp = builder.build().expect("well-formed block");
    (lp.constraints().to_vec(), lp.rhs().to_vec())
}

/// Decides TOBL membership, bipartition by bipartition.
///
/// # Panics
/// If `b` is not tripartite.
pub fn membership_tobl(b: &Behavior) -> ToblMembership {
    assert_eq!(b.parties(), 3, "TOBL membership needs a tripartite behavior");
    let mut models = Vec::with_capacity(3);
    for bip in Bipartition::ALL {
        let mut builder = LpBuilder::new();
        let block = add_tobl_block(&mut builder, bip, &CellTarget::Fixed(b.cells()));
        let lp = builder.build().expect("well-formed block");
        match lp::feasible(lp.constraints(), lp.rhs()).expect("dimensions consistent") {
            Feasibility::Feasible(x) => models.push(couple_block(&block, &x)),
            Feasibility::Infeasible(certificate) => {
                return ToblMembership::NotMember {
                    bipartition: bip,
                    certificate,
                }
            }
        }
    }
    ToblMembership::Member(ToblDecomposition::new(models).expect("one model per bipartition"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::validate;
    use crate::decomposition::verify_decomposition;
    use crate::rational::ratio;

    #[test]
    fn local_counts_and_validity() {
        for (n, count) in [(2, 16), (3, 64)] {
            let all = enumerate_local(n).unwrap();
            assert_eq!(all.len(), count);
            let codes: Vec<usize> = all.iter().map(|s| s.encoding()).collect();
            assert_eq!(codes, (0..count).collect::<Vec<_>>());
            for s in &all {
                assert!(validate(&s.behavior()).is_valid());
            }
        }
        assert!(enumerate_local(4).is_err());
    }

    #[test]
    fn time_ordered_counts_and_marginals() {
        for bip in Bipartition::ALL {
            for dir in Direction::BOTH {
                let all = enumerate_time_ordered(bip, dir);
                assert_eq!(all.len(), 256);
                let (p, q) = bip.pair();
                let first = match dir {
                    Direction::Forward => p,
                    Direction::Backward => q,
                };
                let second = if first == p { q } else { p };
                for s in &all {
                    let beh = s.behavior();
                    // the first party's outcome never depends on the second's input
                    for i in 0..8 {
                        let j = i ^ (1 << (2 - second.index()));
                        assert_eq!(beh.marginal(&[first], i), beh.marginal(&[first], j));
                        assert_eq!(
                            beh.marginal(&[bip.lone()], i),
                            beh.marginal(&[bip.lone()], i ^ (1 << (2 - p.index())))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn forward_a_bc_layout() {
        // b depends on y only, c on (y, z)
        for s in enumerate_time_ordered(Bipartition::ABc, Direction::Forward) {
            for i in 0..8 {
                let o = s.outcomes(i);
                let o2 = s.outcomes(i ^ 0b001);
                assert_eq!(bit(o, 1, 3), bit(o2, 1, 3));
            }
        }
        for s in enumerate_time_ordered(Bipartition::ABc, Direction::Backward) {
            for i in 0..8 {
                let o = s.outcomes(i);
                let o2 = s.outcomes(i ^ 0b010);
                assert_eq!(bit(o, 2, 3), bit(o2, 2, 3));
            }
        }
    }

    #[test]
    fn ns_system_examples() {
        let sys = ns_constraint_system(3).unwrap();
        assert_eq!(sys.rows.len(), 8 + 48);
        assert!(sys.is_satisfied_by(crate::reference::tobl_optimum().cells()));
        let flat = vec![ratio(1, 64); 64];
        let bad = sys.violated(&flat);
        assert_eq!(bad.len(), 8);
        assert!(bad.iter().all(|l| l.starts_with("norm")));

        let signaling = Behavior::uniform(3)
            .unwrap()
            .with_cell(0b001, 0b000, ratio(1, 4))
            .with_cell(0b001, 0b100, Rational::zero());
        assert!(sys.violated(signaling.cells()).iter().any(|l| l.starts_with("ns[")));
    }

    #[test]
    fn ns_system_agrees_with_validate() {
        let u = Behavior::uniform(2).unwrap();
        let sys = ns_constraint_system(2).unwrap();
        let skewed = u
            .with_cell(0b01, 0b00, ratio(1, 2))
            .with_cell(0b01, 0b01, Rational::zero());
        assert_eq!(sys.is_satisfied_by(skewed.cells()), validate(&skewed).is_valid());
        assert!(!validate(&skewed).no_signaling);
    }

    #[test]
    fn local_membership_examples() {
        let u = Behavior::uniform(3).unwrap();
        match membership_local(&u) {
            LocalMembership::Member(w) => {
                assert_eq!(local_mixture(3, &w).unwrap(), u);
            }
            other => panic!("{other:?}"),
        }
        let s = enumerate_local(3).unwrap()[37];
        assert_eq!(
            membership_local(&s.behavior()),
            LocalMembership::Member(vec![(s, Rational::one())])
        );
        let t = crate::reference::tobl_optimum();
        match membership_local(&t) {
            LocalMembership::NotMember(y) => {
                let (a, _) = local_system(3);
                assert!(lp::verify_certificate(&a, t.cells(), &y));
            }
            other => panic!("{other:?}"),
        }
    }

    pub(crate) fn local_system(parties: usize) -> (Vec<Vec<Rational>>, ()) {
        let strategies = enumerate_local(parties).unwrap();
        let t = 1 << parties;
        let mut a = vec![vec![Rational::zero(); strategies.len()]; t * t];
        for (k, s) in strategies.iter().enumerate() {
            for i in 0..t {
                a[i * t + s.outcomes(i)][k] = Rational::one();
            }
        }
        (a, ())
    }

    fn pr_box_bc() -> Behavior {
        // A uniform and independent; B, C share a PR box.
        Behavior::from_fn(3, |i, o| {
            let (y, z) = (bit(i, 1, 3), bit(i, 2, 3));
            let (b, c) = (bit(o, 1, 3), bit(o, 2, 3));
            if b ^ c == y & z {
                ratio(1, 4)
            } else {
                Rational::zero()
            }
        })
        .unwrap()
    }

    #[test]
    fn tobl_membership_examples() {
        let t = crate::reference::tobl_optimum();
        match membership_tobl(&t) {
            ToblMembership::Member(d) => assert!(verify_decomposition(&t, &d).passed()),
            other => panic!("{other:?}"),
        }
        let u = Behavior::uniform(3).unwrap();
        match membership_tobl(&u) {
            ToblMembership::Member(d) => assert!(verify_decomposition(&u, &d).passed()),
            other => panic!("{other:?}"),
        }
        let pr = pr_box_bc();
        assert!(validate(&pr).is_valid());
        match membership_tobl(&pr) {
            ToblMembership::NotMember {
                bipartition,
                certificate,
            } => {
                // a one-way B->C model can output c = b ^ yz, so the cut that
                // fails is the one separating B from C
                assert_eq!(bipartition, Bipartition::BAc);
                let (a, rhs) = tobl_system(&pr, Bipartition::BAc);
                assert!(lp::verify_certificate(&a, &rhs, &certificate));
                let (a, rhs) = tobl_system(&pr, Bipartition::ABc);
                assert!(lp::feasible(&a, &rhs).unwrap().is_feasible());
                let (a, rhs) = tobl_system(&pr, Bipartition::CAb);
                assert!(!lp::feasible(&a, &rhs).unwrap().is_feasible());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn direction_labels() {
        assert_eq!(Bipartition::ABc.direction_label(Direction::Forward), "A|B->C");
        assert_eq!(Bipartition::BAc.direction_label(Direction::Backward), "B|A<-C");
        assert_eq!(Bipartition::CAb.direction_label(Direction::Forward), "A->B|C");
    }
}
