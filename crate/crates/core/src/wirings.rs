//! Deterministic local wirings that merge two of three parties into one
//! effective party, and exhaustive locality audits of the wired behaviors.
//!
//! A wiring is given per effective input `w`: which party of the pair measures
//! first, that party's input, the second party's input as a function of the
//! first outcome, and the effective outcome as a function of both outcomes.
//! Each branch packs into 8 bits (order, first input, two second-input bits,
//! four output bits), so a wiring has a canonical index `b₀ | b₁ << 8`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::behavior::{pack, validate, Behavior, Party};
use crate::polytopes::membership_local;
use crate::rational::Rational;

pub const WIRINGS_PER_PAIR: usize = 1 << 16;

/// Progress is reported after each block of this many wirings.
pub const PROGRESS_INTERVAL: usize = 4096;

/// The two parties merged by a wiring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pair {
    AB,
    AC,
    BC,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::AB, Pair::AC, Pair::BC];

    /// The merged parties in party order.
    pub fn parties(self) -> (Party, Party) {
        match self {
            Pair::AB => (Party::A, Party::B),
            Pair::AC => (Party::A, Party::C),
            Pair::BC => (Party::B, Party::C),
        }
    }

    /// The party left alone; it is the first party of the wired behavior.
    pub fn lone(self) -> Party {
        match self {
            Pair::AB => Party::C,
            Pair::AC => Party::B,
            Pair::BC => Party::A,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::AB => "AB",
            Pair::AC => "AC",
            Pair::BC => "BC",
        }
    }
}

impl std::fmt::Display for Pair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ab" => Ok(Pair::AB),
            "ac" => Ok(Pair::AC),
            "bc" => Ok(Pair::BC),
            _ => Err(format!("unknown pair {s:?}, expected ab, ac or bc")),
        }
    }
}

/// The protocol used for one effective input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WiringBranch {
    /// `false`: the earlier party of the pair (in party order) measures
    /// first; `true`: the later one does.
    pub swapped: bool,
    pub first_input: u8,
    /// Indexed by the first outcome.
    pub second_input: [u8; 2],
    /// Indexed by first outcome, then second outcome.
    pub output: [[u8; 2]; 2],
}

impl WiringBranch {
    pub fn from_encoding(code: u8) -> Self {
        let bit = |k: u32| (code >> k) & 1;
        WiringBranch {
            swapped: bit(0) == 1,
            first_input: bit(1),
            second_input: [bit(2), bit(3)],
            output: [[bit(4), bit(5)], [bit(6), bit(7)]],
        }
    }

    pub fn encoding(&self) -> u8 {
        u8::from(self.swapped)
            | self.first_input << 1
            | self.second_input[0] << 2
            | self.second_input[1] << 3
            | self.output[0][0] << 4
            | self.output[0][1] << 5
            | self.output[1][0] << 6
            | self.output[1][1] << 7
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Wiring {
    pub pair: Pair,
    /// Indexed by the effective input.
    pub branches: [WiringBranch; 2],
}

impl Wiring {
    /// # Panics
    /// If `index` is not below [`WIRINGS_PER_PAIR`].
    pub fn from_index(pair: Pair, index: usize) -> Self {
        assert!(index < WIRINGS_PER_PAIR, "wiring index {index} out of range");
        Wiring {
            pair,
            branches: [
                WiringBranch::from_encoding((index & 0xff) as u8),
                WiringBranch::from_encoding((index >> 8) as u8),
            ],
        }
    }

    pub fn index(&self) -> usize {
        usize::from(self.branches[0].encoding()) | usize::from(self.branches[1].encoding()) << 8
    }

    /// The party measuring first on effective input `w`, then the other.
    pub fn order(&self, w: usize) -> (Party, Party) {
        let (p, q) = self.pair.parties();
        if self.branches[w].swapped {
            (q, p)
        } else {
            (p, q)
        }
    }

    fn summary(&self) -> WiringSummary {
        WiringSummary {
            index: self.index(),
            branches: (0..2)
                .map(|w| {
                    let br = &self.branches[w];
                    let (first, second) = self.order(w);
                    BranchSummary {
                        first,
                        second,
                        first_input: br.first_input,
                        second_input: br.second_input,
                        output: br.output,
                    }
                })
                .collect(),
        }
    }
}

/// All wirings for `pair` in index order.
pub fn enumerate_wirings(pair: Pair) -> impl Iterator<Item = Wiring> {
    (0..WIRINGS_PER_PAIR).map(move |i| Wiring::from_index(pair, i))
}

/// The bipartite behavior `P(a, o | x, w)` of the lone party and the merged
/// effective party.
///
/// # Panics
/// If `b` is not tripartite.
pub fn apply_wiring(b: &Behavior, wiring: &Wiring) -> Behavior {
    assert_eq!(b.parties(), 3, "wirings act on tripartite behaviors");
    let lone = wiring.pair.lone().index();
    let mut cells = vec![Rational::zero(); 16];
    for w in 0..2 {
        let br = &wiring.branches[w];
        let (first, second) = wiring.order(w);
        let (first, second) = (first.index(), second.index());
        for x in 0..2 {
            for f in 0..2 {
                let mut inputs = [0usize; 3];
                inputs[lone] = x;
                inputs[first] = usize::from(br.first_input);
                inputs[second] = usize::from(br.second_input[f]);
                let inputs = pack(&inputs);
                for s in 0..2 {
                    let o = usize::from(br.output[f][s]);
                    for a in 0..2 {
                        let mut outcomes = [0usize; 3];
                        outcomes[lone] = a;
                        outcomes[first] = f;
                        outcomes[second] = s;
                        let v = b.get(inputs, pack(&outcomes));
                        if !v.is_zero() {
                            cells[(x * 2 + w) * 4 + a * 2 + o] += v;
                        }
                    }
                }
            }
        }
    }
    Behavior::new(2, cells).expect("16 bipartite cells")
}

/// Largest CHSH value `|E₀₀ + E₀₁ + E₁₀ + E₁₁ − 2E_xy|` over the position of
/// the minus sign, with `E_xy = Σ (−1)^(a⊕b) P(ab|xy)`.
///
/// # Panics
/// If `b` is not bipartite.
pub fn chsh_value(b: &Behavior) -> Rational {
    assert_eq!(b.parties(), 2, "CHSH needs a bipartite behavior");
    let e: Vec<Rational> = (0..4)
        .map(|xy| {
            (0..4)
                .map(|ab| {
                    let v = b.get(xy, ab).clone();
                    if (ab >> 1) ^ (ab & 1) == 1 {
                        -v
                    } else {
                        v
                    }
                })
                .sum()
        })
        .collect();
    let total: Rational = e.iter().sum();
    e.iter()
        .map(|ek| (&total - &(ek + ek)).abs())
        .max()
        .expect("four correlators")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiringVerdict {
    pub index: usize,
    pub chsh: Rational,
    pub local: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairAudit {
    pub pair: Pair,
    /// One verdict per wiring, in index order.
    pub verdicts: Vec<WiringVerdict>,
    /// Number of distinct wired behaviors, each decided once.
    pub distinct_behaviors: usize,
    /// Wired behaviors failing validation; zero for no-signaling inputs.
    pub invalid: usize,
}

impl PairAudit {
    pub fn total(&self) -> usize {
        self.verdicts.len()
    }

    pub fn nonlocal_count(&self) -> usize {
        self.verdicts.iter().filter(|v| !v.local).count()
    }

    /// The wiring with the largest CHSH value, lowest index on ties.
    pub fn worst(&self) -> Option<&WiringVerdict> {
        self.verdicts
            .iter()
            .reduce(|best, v| if v.chsh > best.chsh { v } else { best })
    }

    pub fn max_chsh(&self) -> Option<&Rational> {
        self.worst().map(|v| &v.chsh)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiringAuditReport {
    pub pairs: Vec<PairAudit>,
}

impl WiringAuditReport {
    pub fn total(&self) -> usize {
        self.pairs.iter().map(PairAudit::total).sum()
    }

    pub fn nonlocal_count(&self) -> usize {
        self.pairs.iter().map(PairAudit::nonlocal_count).sum()
    }

    pub fn invalid_count(&self) -> usize {
        self.pairs.iter().map(|p| p.invalid).sum()
    }

    pub fn max_chsh(&self) -> Option<&Rational> {
        self.pairs.iter().filter_map(PairAudit::max_chsh).max()
    }

    pub fn all_local(&self) -> bool {
        self.nonlocal_count() == 0
    }

    pub fn to_json(&self) -> String {
        let pairs: Vec<PairSummary> = self
            .pairs
            .iter()
            .map(|p| PairSummary {
                pair: p.pair,
                wirings: p.total(),
                distinct_behaviors: p.distinct_behaviors,
                invalid: p.invalid,
                nonlocal: p.nonlocal_count(),
                max_chsh: p.max_chsh().cloned(),
                worst_wiring: p.worst().map(|v| Wiring::from_index(p.pair, v.index).summary()),
                nonlocal_wirings: p
                    .verdicts
                    .iter()
                    .filter(|v| !v.local)
                    .map(|v| v.index)
                    .collect(),
            })
            .collect();
        let summary = AuditSummary {
            wirings: self.total(),
            nonlocal: self.nonlocal_count(),
            max_chsh: self.max_chsh().cloned(),
            pairs,
        };
        let mut s = serde_json::to_string_pretty(&summary).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            out.push_str(&format!(
                "pair {}: {} wirings, {} distinct behaviors, {} nonlocal, max CHSH = {}\n",
                p.pair,
                p.total(),
                p.distinct_behaviors,
                p.nonlocal_count(),
                p.max_chsh().map_or("-".to_string(), |c| c.to_string()),
            ));
        }
        out.push_str(&format!(
            "total: {} wirings, {} nonlocal, max CHSH = {}\n",
            self.total(),
            self.nonlocal_count(),
            self.max_chsh().map_or("-".to_string(), |c| c.to_string()),
        ));
        out
    }
}

#[derive(Serialize)]
struct AuditSummary {
    wirings: usize,
    nonlocal: usize,
    max_chsh: Option<Rational>,
    pairs: Vec<PairSummary>,
}

#[derive(Serialize)]
struct PairSummary {
    pair: Pair,
    wirings: usize,
    distinct_behaviors: usize,
    invalid: usize,
    nonlocal: usize,
    max_chsh: Option<Rational>,
    worst_wiring: Option<WiringSummary>,
    nonlocal_wirings: Vec<usize>,
}

#[derive(Serialize)]
struct WiringSummary {
    index: usize,
    branches: Vec<BranchSummary>,
}

#[derive(Serialize)]
struct BranchSummary {
    first: Party,
    second: Party,
    first_input: u8,
    second_input: [u8; 2],
    output: [[u8; 2]; 2],
}

/// Audits every wiring of each pair. `progress(done, total)` is called after
/// each block of [`PROGRESS_INTERVAL`] wirings.
///
/// # Panics
/// If `b` is not tripartite.
pub fn audit_wirings(
    b: &Behavior,
    pairs: &[Pair],
    progress: &(dyn Fn(usize, usize) + Sync),
) -> WiringAuditReport {
    assert_eq!(b.parties(), 3, "wirings act on tripartite behaviors");
    let total = pairs.len() * WIRINGS_PER_PAIR;
    let done = AtomicUsize::new(0);
    let pairs = pairs
        .iter()
        .map(|&pair| audit_pair(b, pair, &done, total, progress))
        .collect();
    WiringAuditReport { pairs }
}

fn audit_pair(
    b: &Behavior,
    pair: Pair,
    done: &AtomicUsize,
    total: usize,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> PairAudit {
    let mut seen: HashMap<Behavior, usize> = HashMap::new();
    let mut decided: Vec<(Rational, bool)> = Vec::new();
    let mut invalid = 0;
    let mut verdicts = Vec::with_capacity(WIRINGS_PER_PAIR);
    for start in (0..WIRINGS_PER_PAIR).step_by(PROGRESS_INTERVAL) {
        let block: Vec<Behavior> = (start..start + PROGRESS_INTERVAL)
            .into_par_iter()
            .map(|i| apply_wiring(b, &Wiring::from_index(pair, i)))
            .collect();
        let mut fresh = Vec::new();
        let ids: Vec<usize> = block
            .into_iter()
            .map(|wired| {
                let next = seen.len();
                *seen.entry(wired.clone()).or_insert_with(|| {
                    fresh.push(wired);
                    next
                })
            })
            .collect();
        let results: Vec<(Rational, bool, bool)> = fresh
            .par_iter()
            .map(|wired| {
                let chsh = chsh_value(wired);
                let local = chsh <= Rational::from(2) && membership_local(wired).is_member();
                (chsh, local, validate(wired).is_valid())
            })
            .collect();
        for (chsh, local, valid) in results {
            invalid += usize::from(!valid);
            decided.push((chsh, local));
        }
        for (k, id) in ids.into_iter().enumerate() {
            let (chsh, local) = &decided[id];
            verdicts.push(WiringVerdict {
                index: start + k,
                chsh: chsh.clone(),
                local: *local,
            });
        }
        let now = done.fetch_add(PROGRESS_INTERVAL, Ordering::Relaxed) + PROGRESS_INTERVAL;
        progress(now, total);
    }
    PairAudit {
        pair,
        verdicts,
        distinct_behaviors: seen.len(),
        invalid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::bit;
    use crate::rational::ratio;
    use crate::reference::tobl_optimum;
    use std::collections::HashSet;

    fn pr_box() -> Behavior {
        Behavior::from_fn(2, |xy, ab| {
            if (ab >> 1) ^ (ab & 1) == (xy >> 1) & xy {
                ratio(1, 2)
            } else {
                Rational::zero()
            }
        })
        .unwrap()
    }

    /// B measures first with input w, C gets input 0, output is B's outcome.
    fn projection() -> Wiring {
        let br = |w: u8| WiringBranch {
            swapped: false,
            first_input: w,
            second_input: [0, 0],
            output: [[0, 0], [1, 1]],
        };
        Wiring {
            pair: Pair::BC,
            branches: [br(0), br(1)],
        }
    }

    #[test]
    fn enumeration_is_exhaustive_and_distinct() {
        for pair in Pair::ALL {
            let all: Vec<Wiring> = enumerate_wirings(pair).collect();
            assert_eq!(all.len(), 65_536);
            let distinct: HashSet<Wiring> = all.iter().copied().collect();
            assert_eq!(distinct.len(), 65_536);
            for (i, w) in all.iter().enumerate() {
                assert_eq!(w.index(), i);
            }
        }
    }

    #[test]
    fn projection_gives_marginal() {
        let t = tobl_optimum();
        let wired = apply_wiring(&t, &projection());
        for x in 0..2 {
            for y in 0..2 {
                let m = t.marginal(&[Party::A, Party::B], pack(&[x, y, 0]));
                for (ab, v) in m.iter().enumerate() {
                    assert_eq!(wired.get(x * 2 + y, ab), v);
                }
            }
        }
    }

    #[test]
    fn product_behaviors_stay_local() {
        let marg = [ratio(1, 3), ratio(1, 2), ratio(1, 5)];
        let b = Behavior::from_fn(3, |xyz, abc| {
            (0..3)
                .map(|p| {
                    let q = &marg[p] + &Rational::new(bit(xyz, p, 3) as i64, 7);
                    if bit(abc, p, 3) == 1 {
                        q
                    } else {
                        Rational::one() - q
                    }
                })
                .fold(Rational::one(), |acc, v| acc * v)
        })
        .unwrap();
        for i in (0..WIRINGS_PER_PAIR).step_by(997) {
            let wired = apply_wiring(&b, &Wiring::from_index(Pair::AC, i));
            assert!(validate(&wired).is_valid());
            assert!(chsh_value(&wired) <= Rational::from(2));
            assert!(membership_local(&wired).is_member());
        }
    }

    #[test]
    fn chsh_examples() {
        assert_eq!(chsh_value(&pr_box()), Rational::from(4));
        assert_eq!(chsh_value(&Behavior::uniform(2).unwrap()), Rational::zero());
        let best = crate::polytopes::enumerate_local(2)
            .unwrap()
            .iter()
            .map(|s| chsh_value(&s.behavior()))
            .max()
            .unwrap();
        assert_eq!(best, Rational::from(2));
    }

    #[test]
    fn pair_parsing() {
        assert_eq!("ab".parse::<Pair>(), Ok(Pair::AB));
        assert_eq!("BC".parse::<Pair>(), Ok(Pair::BC));
        assert!("abc".parse::<Pair>().is_err());
    }

    #[test]
    fn branch_encoding_round_trip() {
        for code in 0..=255u8 {
            assert_eq!(WiringBranch::from_encoding(code).encoding(), code);
        }
    }
}
