//! Time-ordered bi-local decompositions: storage, exact verification, and the
//! JSON table layout (one table per bipartition and time order, one row per
//! hidden value with its weight and deterministic output bits).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::behavior::{tuple_label, Behavior, Party};
use crate::polytopes::{tripartite_outcomes, Bipartition, Direction, PairStrategy};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("expected models for A|BC, B|AC, C|AB in that order")]
    Bipartitions,
    #[error("{table}: {message}")]
    Table { table: String, message: String },
    #[error("JSON: {0}")]
    Json(String),
}

/// One hidden value: its weight, the lone party's response, and both
/// time-ordered pair responses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToblTerm {
    pub weight: Rational,
    pub lone: u8,
    pub forward: PairStrategy,
    pub backward: PairStrategy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartitionModel {
    pub bipartition: Bipartition,
    pub terms: Vec<ToblTerm>,
}

impl BipartitionModel {
    /// Behavior generated by one of the two time orders.
    pub fn reconstruct(&self, direction: Direction) -> Behavior {
        let mut cells = vec![Rational::zero(); 64];
        for term in &self.terms {
            let pair = match direction {
                Direction::Forward => term.forward,
                Direction::Backward => term.backward,
            };
            for i in 0..8 {
                let o = tripartite_outcomes(self.bipartition, direction, term.lone, pair, i);
                cells[i * 8 + o] += &term.weight;
            }
        }
        Behavior::new(3, cells).expect("64 cells")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToblDecomposition {
    models: Vec<BipartitionModel>,
}

impl ToblDecomposition {
    pub fn new(models: Vec<BipartitionModel>) -> Result<Self, DecompositionError> {
        let order: Vec<Bipartition> = models.iter().map(|m| m.bipartition).collect();
        if order != Bipartition::ALL {
            return Err(DecompositionError::Bipartitions);
        }
        Ok(ToblDecomposition { models })
    }

    pub fn models(&self) -> &[BipartitionModel] {
        &self.models
    }

    pub fn model(&self, bipartition: Bipartition) -> &BipartitionModel {
        &self.models[bipartition as usize]
    }

    pub fn model_mut(&mut self, bipartition: Bipartition) -> &mut BipartitionModel {
        &mut self.models[bipartition as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellMismatch {
    pub inputs: String,
    pub outcomes: String,
    pub expected: Rational,
    pub found: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReconstructionCheck {
    pub bipartition: Bipartition,
    pub direction: Direction,
    pub label: String,
    pub mismatch: Option<CellMismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub weight_problems: Vec<String>,
    pub checks: Vec<ReconstructionCheck>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.weight_problems.is_empty() && self.checks.iter().all(|c| c.mismatch.is_none())
    }
}

/// Checks weights and compares all six reconstructions with `b` exactly,
/// reporting the first mismatching cell of each.
pub fn verify_decomposition(b: &Behavior, d: &ToblDecomposition) -> DecompositionReport {
    let mut weight_problems = Vec::new();
    let mut checks = Vec::new();
    if b.parties() != 3 {
        weight_problems.push(format!("behavior has {} parties", b.parties()));
        return DecompositionReport {
            weight_problems,
            checks,
        };
    }
    for model in d.models() {
        let total: Rational = model.terms.iter().map(|t| &t.weight).sum();
        if !total.is_one() {
            weight_problems.push(format!("{}: weights sum to {total}", model.bipartition));
        }
        if let Some(t) = model.terms.iter().find(|t| t.weight.is_negative()) {
            weight_problems.push(format!("{}: negative weight {}", model.bipartition, t.weight));
        }
        for direction in Direction::BOTH {
            let rebuilt = model.reconstruct(direction);
            let mismatch = (0..64)
                .find(|&k| rebuilt.cells()[k] != b.cells()[k])
                .map(|k| CellMismatch {
                    inputs: tuple_label(k / 8, 3),
                    outcomes: tuple_label(k % 8, 3),
                    expected: b.cells()[k].clone(),
                    found: rebuilt.cells()[k].clone(),
                });
            checks.push(ReconstructionCheck {
                bipartition: model.bipartition,
                direction,
                label: model.bipartition.direction_label(direction),
                mismatch,
            });
        }
    }
    DecompositionReport {
        weight_problems,
        checks,
    }
}

// ---------------------------------------------------------------------------
// Table layout

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub models: Vec<ModelTables>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelTables {
    pub bipartition: Bipartition,
    pub tables: Vec<StrategyTable>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyTable {
    pub label: String,
    pub direction: Direction,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub lambda: usize,
    pub weight: Rational,
    pub bits: Vec<u8>,
}

/// Which strategy field a column reads, and at which truth-table bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Lone(usize),
    First(usize),
    Second(usize),
}

fn party_letter(p: Party) -> char {
    p.outcome_symbol()
}

/// Column names and their slots, in the printed order: lone party first
/// except for `C|AB`, where it comes last.
fn layout(bip: Bipartition, direction: Direction) -> Vec<(String, Slot)> {
    let (p, q) = bip.pair();
    let (first, second) = match direction {
        Direction::Forward => (p, q),
        Direction::Backward => (q, p),
    };
    let mut by_party: Vec<(Party, Vec<(String, Slot)>)> = Vec::new();
    let l = bip.lone();
    by_party.push((
        l,
        (0..2)
            .map(|i| (format!("{}{i}", party_letter(l)), Slot::Lone(i)))
            .collect(),
    ));
    by_party.push((
        first,
        (0..2)
            .map(|i| (format!("{}{i}", party_letter(first)), Slot::First(i)))
            .collect(),
    ));
    by_party.push((
        second,
        (0..4)
            .map(|k| {
                (
                    format!("{}{}{}", party_letter(second), k >> 1, k & 1),
                    Slot::Second(k),
                )
            })
            .collect(),
    ));
    let order: [Party; 3] = match bip {
        Bipartition::ABc => [Party::A, Party::B, Party::C],
        Bipartition::BAc => [Party::B, Party::A, Party::C],
        Bipartition::CAb => [Party::A, Party::B, Party::C],
    };
    order
        .iter()
        .flat_map(|party| {
            by_party
                .iter()
                .find(|(pp, _)| pp == party)
                .map(|(_, cols)| cols.clone())
                .unwrap_or_default()
        })
        .collect()
}

fn read_slot(slot: Slot, lone: u8, pair: PairStrategy) -> u8 {
    match slot {
        Slot::Lone(i) => (lone >> i) & 1,
        Slot::First(i) => (pair.first >> i) & 1,
        Slot::Second(k) => (pair.second >> k) & 1,
    }
}

impl ToblDecomposition {
    pub fn to_file(&self) -> DecompositionFile {
        DecompositionFile {
            models: self
                .models
                .iter()
                .map(|m| ModelTables {
                    bipartition: m.bipartition,
                    tables: Direction::BOTH
                        .iter()
                        .map(|&dir| {
                            let cols = layout(m.bipartition, dir);
                            StrategyTable {
                                label: m.bipartition.direction_label(dir),
                                direction: dir,
                                columns: cols.iter().map(|(n, _)| n.clone()).collect(),
                                rows: m
                                    .terms
                                    .iter()
                                    .enumerate()
                                    .map(|(k, t)| {
                                        let pair = match dir {
                                            Direction::Forward => t.forward,
                                            Direction::Backward => t.backward,
                                        };
                                        TableRow {
                                            lambda: k + 1,
                                            weight: t.weight.clone(),
                                            bits: cols
                                                .iter()
                                                .map(|&(_, s)| read_slot(s, t.lone, pair))
                                                .collect(),
                                        }
                                    })
                                    .collect(),
                            }
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds a decomposition from tables. Columns are matched by name, so
    /// their order is free; the two tables of a bipartition must list the same
    /// hidden values with equal weights and equal lone-party bits.
    pub fn from_file(file: &DecompositionFile) -> Result<Self, DecompositionError> {
        let mut models = Vec::new();
        for mt in &file.models {
            let bip = mt.bipartition;
            let mut per_dir: [Option<Vec<(Rational, u8, PairStrategy)>>; 2] = [None, None];
            for table in &mt.tables {
                let err = |message: String| DecompositionError::Table {
                    table: table.label.clone(),
                    message,
                };
                let expected = layout(bip, table.direction);
                let mut slots = Vec::with_capacity(table.columns.len());
                for col in &table.columns {
                    let slot = expected
                        .iter()
                        .find(|(n, _)| n == col)
                        .map(|&(_, s)| s)
                        .ok_or_else(|| err(format!("unexpected column `{col}`")))?;
                    slots.push(slot);
                }
                if slots.len() != expected.len() || {
                    let mut s: Vec<String> = table.columns.clone();
                    s.sort();
                    s.dedup();
                    s.len() != expected.len()
                } {
                    return Err(err(format!(
                        "columns must be exactly {:?}",
                        expected.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>()
                    )));
                }
                let mut rows = Vec::with_capacity(table.rows.len());
                for row in &table.rows {
                    if row.bits.len() != slots.len() {
                        return Err(err(format!(
                            "row λ={} has {} bits for {} columns",
                            row.lambda,
                            row.bits.len(),
                            slots.len()
                        )));
                    }
                    let (mut lone, mut first, mut second) = (0u8, 0u8, 0u8);
                    for (&slot, &b) in slots.iter().zip(&row.bits) {
                        if b > 1 {
                            return Err(err(format!("row λ={}: bit {b} is not 0/1", row.lambda)));
                        }
                        match slot {
                            Slot::Lone(i) => lone |= b << i,
                            Slot::First(i) => first |= b << i,
                            Slot::Second(k) => second |= b << k,
                        }
                    }
                    rows.push((row.weight.clone(), lone, PairStrategy { first, second }));
                }
                let idx = table.direction as usize;
                if per_dir[idx].replace(rows).is_some() {
                    return Err(err("duplicate table for this time order".into()));
                }
            }
            let [Some(fwd), Some(bwd)] = per_dir else {
                return Err(DecompositionError::Table {
                    table: bip.label().into(),
                    message: "needs one forward and one backward table".into(),
                });
            };
            if fwd.len() != bwd.len() {
                return Err(DecompositionError::Table {
                    table: bip.label().into(),
                    message: "forward and backward tables list different numbers of hidden values"
                        .into(),
                });
            }
            let mut terms = Vec::with_capacity(fwd.len());
            for (k, ((w1, l1, f), (w2, l2, g))) in fwd.into_iter().zip(bwd).enumerate() {
                if w1 != w2 || l1 != l2 {
                    return Err(DecompositionError::Table {
                        table: bip.label().into(),
                        message: format!(
                            "hidden value {} differs between time orders (weight or lone response)",
                            k + 1
                        ),
                    });
                }
                terms.push(ToblTerm {
                    weight: w1,
                    lone: l1,
                    forward: f,
                    backward: g,
                });
            }
            models.push(BipartitionModel {
                bipartition: bip,
                terms,
            });
        }
        ToblDecomposition::new(models)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, DecompositionError> {
        let file: DecompositionFile =
            serde_json::from_str(s).map_err(|e| DecompositionError::Json(e.to_string()))?;
        Self::from_file(&file)
    }

    /// Plain-text rendering of the six tables.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for mt in self.to_file().models {
            for table in mt.tables {
                out.push_str(&format!("TOBL model {}\n", table.label));
                out.push_str(&format!("  λ  p_λ   {}\n", table.columns.join(" ")));
                for row in table.rows {
                    let bits: Vec<String> = row
                        .bits
                        .iter()
                        .zip(&table.columns)
                        .map(|(b, c)| format!("{b:>w$}", w = c.len()))
                        .collect();
                    out.push_str(&format!(
                        "  {:<2} {:<5} {}\n",
                        row.lambda,
                        row.weight.to_string(),
                        bits.join(" ")
                    ));
                }
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use crate::rational::ratio;

    #[test]
    fn layouts_match_printed_tables() {
        let names = |b, d| -> Vec<String> { layout(b, d).into_iter().map(|(n, _)| n).collect() };
        assert_eq!(
            names(Bipartition::ABc, Direction::Forward),
            ["a0", "a1", "b0", "b1", "c00", "c01", "c10", "c11"]
        );
        assert_eq!(
            names(Bipartition::ABc, Direction::Backward),
            ["a0", "a1", "b00", "b01", "b10", "b11", "c0", "c1"]
        );
        assert_eq!(
            names(Bipartition::BAc, Direction::Forward),
            ["b0", "b1", "a0", "a1", "c00", "c01", "c10", "c11"]
        );
        assert_eq!(
            names(Bipartition::BAc, Direction::Backward),
            ["b0", "b1", "a00", "a01", "a10", "a11", "c0", "c1"]
        );
        assert_eq!(
            names(Bipartition::CAb, Direction::Forward),
            ["a0", "a1", "b00", "b01", "b10", "b11", "c0", "c1"]
        );
        assert_eq!(
            names(Bipartition::CAb, Direction::Backward),
            ["a00", "a01", "a10", "a11", "b0", "b1", "c0", "c1"]
        );
    }

    #[test]
    fn reference_tables_reconstruct_optimum() {
        let report = verify_decomposition(&reference::tobl_optimum(), &reference::tobl_optimum_decomposition());
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.checks.len(), 6);
    }

    #[test]
    fn flipped_bit_is_located() {
        let mut d = reference::tobl_optimum_decomposition();
        d.model_mut(Bipartition::BAc).terms[2].forward.second ^= 1;
        let report = verify_decomposition(&reference::tobl_optimum(), &d);
        assert!(!report.passed());
        let bad: Vec<&ReconstructionCheck> =
            report.checks.iter().filter(|c| c.mismatch.is_some()).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].label, "B|A->C");
    }

    #[test]
    fn bad_weights_reported() {
        let mut d = reference::tobl_optimum_decomposition();
        d.model_mut(Bipartition::ABc).terms[0].weight = ratio(1, 2);
        let report = verify_decomposition(&reference::tobl_optimum(), &d);
        assert!(report.weight_problems[0].contains("5/4"));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let d = reference::tobl_optimum_decomposition();
        let s = d.to_json();
        assert_eq!(ToblDecomposition::from_json(&s).unwrap(), d);

        let mut file = d.to_file();
        file.models[0].tables[1].rows[0].weight = ratio(1, 3);
        assert!(matches!(
            ToblDecomposition::from_file(&file),
            Err(DecompositionError::Table { .. })
        ));

        let mut file = d.to_file();
        file.models[1].tables[0].columns[0] = "q0".into();
        assert!(ToblDecomposition::from_file(&file).is_err());

        let mut file = d.to_file();
        file.models.swap(0, 1);
        assert_eq!(
            ToblDecomposition::from_file(&file),
            Err(DecompositionError::Bipartitions)
        );
    }

    #[test]
    fn column_order_is_free() {
        let d = reference::tobl_optimum_decomposition();
        let mut file = d.to_file();
        for mt in &mut file.models {
            for t in &mut mt.tables {
                t.columns.reverse();
                for r in &mut t.rows {
                    r.bits.reverse();
                }
            }
        }
        assert_eq!(ToblDecomposition::from_file(&file).unwrap(), d);
    }
}
