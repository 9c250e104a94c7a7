//! Filtered complexes from critical-point data.
//!
//! A filtered complex is a CW complex in which every cell carries a value
//! (the critical level it was attached at) and boundaries never point up the
//! filtration. Sublevel slices are ordinary complexes; the relative homology
//! of a window (a, b] is computed from the quotient complex of cells strictly
//! inside it. Two perturbation modes are provided: one appends unpaired
//! cells of a fixed index (each adds one to that Betti number), the other
//! appends cancelling pairs (homology is untouched, torsion included).

use std::collections::BTreeMap;

use num_rational::Ratio;
use thiserror::Error;

use crate::chain::{ChainComplex, HomologyGroup};
use crate::cw::{CWComplex, Cell, CwError};
use crate::level::Level;
use crate::matrix::IntMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorseError {
    #[error("critical data is empty: a complex needs at least one cell")]
    EmptyCriticalData,
    #[error("critical record has count 0; every record must carry at least one critical point")]
    ZeroCount,
    #[error("boundary data names unknown cell {id:?} (generated ids look like c<dim>.<seq>)")]
    UnknownCell { id: String },
    #[error("cell {cell:?} has no filtration value")]
    MissingValue { cell: String },
    #[error("cell {cell:?} at value {value} attaches to {target:?} at higher value {target_value}")]
    SublevelClosureViolation {
        cell: String,
        value: Level,
        target: String,
        target_value: Level,
    },
    #[error("{endpoint} = {value} is a critical value; interval endpoints must be regular")]
    NotARegularValue { endpoint: &'static str, value: Level },
    #[error("interval is empty: requires a < b, got a = {a}, b = {b}")]
    EmptyInterval { a: Level, b: Level },
    #[error("perturbation count must be at least 1")]
    ZeroPerturbation,
    #[error("index sequence entries must be at least 1, found {value} at position {position}")]
    NullityBelowOne { value: u64, position: usize },
    #[error(transparent)]
    Cw(#[from] CwError),
}

/// A group of critical points: value, Morse index, and multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalRecord {
    pub value: Level,
    pub index: usize,
    pub count: usize,
}

impl CriticalRecord {
    pub fn new(value: Level, index: usize, count: usize) -> Self {
        Self { value, index, count }
    }
}

/// A CW complex whose cells all carry filtration values, with boundaries
/// closed under sublevels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    complex: CWComplex,
    levels: Vec<Level>,
}

/// Per-degree numbers of an interval: window cell count, relative homology
/// rank, and torsion rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalDegree {
    pub degree: usize,
    pub cells: usize,
    pub rank: usize,
    pub torsion_rank: usize,
    /// r + t + t_{lambda-1} <= C at this degree.
    pub rank_inequality: bool,
    /// Alternating partial sums of r bounded by those of C up to here.
    pub alternating_inequality: bool,
}

/// Interval invariants for a window (a, b] with a regular endpoint report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalReport {
    pub a: Level,
    pub b: Level,
    pub degrees: Vec<IntervalDegree>,
}

impl IntervalReport {
    pub fn pass(&self) -> bool {
        self.degrees
            .iter()
            .all(|d| d.rank_inequality && d.alternating_inequality)
    }
}

/// How [`perturb`] models the new critical points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerturbMode {
    /// All new critical points keep the given index and attach trivially,
    /// so the Betti number at that index grows by the count.
    PaperModel,
    /// New critical points arrive in birth-death pairs (index, index+1)
    /// with unit incidence, so every homology group is unchanged.
    CancellingPairs,
}

impl FilteredComplex {
    /// Wraps a CW complex whose cells all carry values, checking sublevel
    /// closure. The underlying complex must already be valid.
    pub fn new(complex: CWComplex) -> Result<Self, MorseError> {
        let mut values: BTreeMap<&str, &Level> = BTreeMap::new();
        for c in complex.cells() {
            let value = c.value.as_ref().ok_or_else(|| MorseError::MissingValue {
                cell: c.id.clone(),
            })?;
            values.insert(c.id.as_str(), value);
        }
        for cell in complex.cells() {
            let own = values[cell.id.as_str()];
            for target in cell.degrees.keys() {
                let target_value = values[target.as_str()];
                if target_value > own {
                    return Err(MorseError::SublevelClosureViolation {
                        cell: cell.id.clone(),
                        value: own.clone(),
                        target: target.clone(),
                        target_value: target_value.clone(),
                    });
                }
            }
        }
        complex.build_chain_complex()?;
        let mut levels: Vec<Level> = complex
            .cells()
            .iter()
            .map(|c| c.value.clone().expect("checked above"))
            .collect();
        levels.sort();
        levels.dedup();
        Ok(Self { complex, levels })
    }

    pub fn underlying(&self) -> &CWComplex {
        &self.complex
    }

    /// Sorted distinct critical values.
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn top_dimension(&self) -> usize {
        self.complex.top_dimension()
    }

    pub fn is_regular_value(&self, a: &Level) -> bool {
        !self.levels.contains(a)
    }

    /// The subcomplex of cells with value <= a.
    pub fn sublevel(&self, a: &Level) -> CWComplex {
        let cells: Vec<Cell> = self
            .complex
            .cells()
            .iter()
            .filter(|c| c.value.as_ref().expect("filtered") <= a)
            .cloned()
            .collect();
        CWComplex::new(format!("{}|<={a}", self.complex.name()), cells)
            .expect("sublevel closure guarantees a well-formed subcomplex")
    }

    /// Homology of the sublevel at `a`; everything below the minimum value
    /// is the empty complex, so all groups vanish.
    pub fn sublevel_homology(&self, a: &Level, k: usize) -> HomologyGroup {
        let chain = self
            .sublevel(a)
            .build_chain_complex()
            .expect("sublevel of a valid filtration is valid");
        chain.homology(k)
    }

    /// Quotient chain complex of the window a < value <= b: the relative
    /// chains of the sublevel pair, with boundary entries into the lower
    /// sublevel dropped.
    fn window_chain_complex(&self, a: &Level, b: &Level) -> ChainComplex {
        let in_window = |c: &Cell| {
            let v = c.value.as_ref().expect("filtered");
            v > a && v <= b
        };
        let window: Vec<&Cell> = self.complex.cells().iter().filter(|c| in_window(c)).collect();
        let top = self.top_dimension();
        let mut ids_by_dim: Vec<Vec<&str>> = vec![Vec::new(); top + 1];
        for cell in &window {
            ids_by_dim[cell.dim].push(&cell.id);
        }
        let index_by_dim: Vec<BTreeMap<&str, usize>> = ids_by_dim
            .iter()
            .map(|ids| ids.iter().enumerate().map(|(i, &id)| (id, i)).collect())
            .collect();
        let counts: Vec<usize> = ids_by_dim.iter().map(|v| v.len()).collect();
        let mut boundaries = Vec::new();
        for k in 1..=top {
            let mut m = IntMatrix::zeros(counts[k - 1], counts[k]);
            for (col, cell) in window.iter().filter(|c| c.dim == k).enumerate() {
                for (target, &deg) in &cell.degrees {
                    if let Some(&row) = index_by_dim[k - 1].get(target.as_str()) {
                        m.set(row, col, deg.into());
                    }
                }
            }
            boundaries.push(m);
        }
        ChainComplex::new(counts, boundaries)
            .expect("relative chains of a valid filtration satisfy the chain condition")
    }

    /// Relative invariants of the window (a, b] plus the index-count
    /// inequalities. Both endpoints must be regular values with a < b.
    pub fn interval_invariants(&self, a: &Level, b: &Level) -> Result<IntervalReport, MorseError> {
        if a >= b {
            return Err(MorseError::EmptyInterval {
                a: a.clone(),
                b: b.clone(),
            });
        }
        if !self.is_regular_value(a) {
            return Err(MorseError::NotARegularValue {
                endpoint: "a",
                value: a.clone(),
            });
        }
        if !self.is_regular_value(b) {
            return Err(MorseError::NotARegularValue {
                endpoint: "b",
                value: b.clone(),
            });
        }
        let chain = self.window_chain_complex(a, b);
        let mut degrees = Vec::new();
        let mut alt_rank: i64 = 0;
        let mut alt_cells: i64 = 0;
        let mut prev_torsion = 0usize;
        for k in 0..=chain.top_degree() {
            let h = chain.homology(k);
            let cells = chain.cell_count(k);
            let rank = h.free_rank;
            let torsion_rank = h.torsion_rank();
            // Alternating sums flip sign each degree: sum (-1)^{k-i} x_i.
            alt_rank = rank as i64 - alt_rank;
            alt_cells = cells as i64 - alt_cells;
            degrees.push(IntervalDegree {
                degree: k,
                cells,
                rank,
                torsion_rank,
                rank_inequality: rank + torsion_rank + prev_torsion <= cells,
                alternating_inequality: alt_rank <= alt_cells,
            });
            prev_torsion = torsion_rank;
        }
        Ok(IntervalReport {
            a: a.clone(),
            b: b.clone(),
            degrees,
        })
    }

    /// Adds `count` critical points of the given index at a regular value,
    /// in the chosen mode.
    pub fn perturb(
        &self,
        at_value: &Level,
        index: usize,
        count: usize,
        mode: PerturbMode,
    ) -> Result<FilteredComplex, MorseError> {
        if count == 0 {
            return Err(MorseError::ZeroPerturbation);
        }
        if !self.is_regular_value(at_value) {
            return Err(MorseError::NotARegularValue {
                endpoint: "at_value",
                value: at_value.clone(),
            });
        }
        let mut cells = self.complex.cells().to_vec();
        let fresh_base = {
            // Smallest prefix counter making all generated ids fresh.
            let existing: std::collections::BTreeSet<&str> =
                cells.iter().map(|c| c.id.as_str()).collect();
            let mut base = 0usize;
            loop {
                let clash = (0..2 * count)
                    .any(|i| existing.contains(format!("p{}", base + i).as_str()));
                if !clash {
                    break base;
                }
                base += 2 * count;
            }
        };
        match mode {
            PerturbMode::PaperModel => {
                for i in 0..count {
                    cells.push(
                        Cell::new(format!("p{}", fresh_base + i), index)
                            .with_value(at_value.clone()),
                    );
                }
            }
            PerturbMode::CancellingPairs => {
                for i in 0..count {
                    let low = format!("p{}", fresh_base + 2 * i);
                    let high = format!("p{}", fresh_base + 2 * i + 1);
                    cells.push(Cell::new(&low, index).with_value(at_value.clone()));
                    cells.push(
                        Cell::new(&high, index + 1)
                            .with_degrees([(low, 1)])
                            .with_value(at_value.clone()),
                    );
                }
            }
        }
        let complex = CWComplex::new(self.complex.name().to_string(), cells)?;
        FilteredComplex::new(complex)
    }
}

/// Builds a filtered complex from critical records: one cell of the given
/// index per critical point, tagged with the record's value. Optional
/// boundary data may attach the generated cells (ids are `c<dim>.<seq>`,
/// numbered within each dimension in value order); omitted boundaries are
/// zero.
pub fn filtered_complex_from_critical_data(
    records: &[CriticalRecord],
    boundaries: Option<&BTreeMap<String, BTreeMap<String, i64>>>,
) -> Result<FilteredComplex, MorseError> {
    if records.is_empty() {
        return Err(MorseError::EmptyCriticalData);
    }
    if records.iter().any(|r| r.count == 0) {
        return Err(MorseError::ZeroCount);
    }
    let mut sorted: Vec<&CriticalRecord> = records.iter().collect();
    sorted.sort_by(|a, b| (&a.value, a.index).cmp(&(&b.value, b.index)));

    let mut per_dim_seq: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cells = Vec::new();
    for record in sorted {
        for _ in 0..record.count {
            let seq = per_dim_seq.entry(record.index).or_insert(0);
            let id = format!("c{}.{:04}", record.index, seq);
            *seq += 1;
            cells.push(Cell::new(id, record.index).with_value(record.value.clone()));
        }
    }
    if let Some(data) = boundaries {
        let known: BTreeMap<String, usize> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.clone(), i))
            .collect();
        for (id, degs) in data {
            let &cell_idx = known
                .get(id)
                .ok_or_else(|| MorseError::UnknownCell { id: id.clone() })?;
            for target in degs.keys() {
                if !known.contains_key(target) {
                    return Err(MorseError::UnknownCell { id: target.clone() });
                }
            }
            cells[cell_idx].degrees = degs.clone();
        }
    }
    let complex = CWComplex::new("filtered", cells)?;
    FilteredComplex::new(complex)
}

/// Report of [`analyze_index_sequence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSequenceReport {
    /// seq_m = m * base_index for every position in the window.
    pub exactly_linear: bool,
    /// Largest epsilon (with C = 0) such that seq_{m+s} - seq_m >= epsilon*s
    /// for all window pairs; None when the window has no pairs.
    pub epsilon: Option<Ratio<i64>>,
    /// A pair (m, s) attaining the minimum difference quotient.
    pub epsilon_witness: Option<(usize, usize)>,
    /// Degenerate branch: every index in the window is zero.
    pub all_zero: bool,
}

/// Classifies a finite window of iterated Morse indices
/// seq = (lambda(gamma_1), ..., lambda(gamma_T)) against a base index.
///
/// The growth constant is the exact rational
/// min over m,s >= 1, m+s <= T of (seq_{m+s} - seq_m) / s,
/// i.e. the best linear lower bound with zero offset on this window.
pub fn analyze_index_sequence(seq: &[u64], base_index: u64) -> IndexSequenceReport {
    let exactly_linear = seq
        .iter()
        .enumerate()
        .all(|(i, &v)| v == base_index * (i as u64 + 1));
    let all_zero = seq.iter().all(|&v| v == 0);
    let mut epsilon: Option<Ratio<i64>> = None;
    let mut witness = None;
    for m in 1..=seq.len() {
        for s in 1..=seq.len().saturating_sub(m) {
            let diff = seq[m + s - 1] as i64 - seq[m - 1] as i64;
            let q = Ratio::new(diff, s as i64);
            if epsilon.as_ref().is_none_or(|e| q < *e) {
                epsilon = Some(q);
                witness = Some((m, s));
            }
        }
    }
    IndexSequenceReport {
        exactly_linear,
        epsilon,
        epsilon_witness: witness,
        all_zero,
    }
}

/// Report of [`analyze_nullity_sequence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullitySequenceReport {
    /// The lemma's non-degenerate branch: nullity constantly 1.
    pub constant_one: bool,
    /// Distinct values with their (1-based) first-occurrence positions, in
    /// order of first occurrence.
    pub first_occurrences: Vec<(u64, usize)>,
    /// Every position m is explained by some first-occurrence position m_i
    /// dividing m with the same value.
    pub divisibility_consistent: bool,
    /// First position violating the divisibility pattern, if any.
    pub first_violation: Option<usize>,
}

/// Classifies a finite window of iterated nullities (all entries >= 1).
pub fn analyze_nullity_sequence(seq: &[u64]) -> Result<NullitySequenceReport, MorseError> {
    if let Some((i, &v)) = seq.iter().enumerate().find(|(_, &v)| v < 1) {
        return Err(MorseError::NullityBelowOne {
            value: v,
            position: i + 1,
        });
    }
    let constant_one = seq.iter().all(|&v| v == 1);
    let mut first_occurrences: Vec<(u64, usize)> = Vec::new();
    for (i, &v) in seq.iter().enumerate() {
        if !first_occurrences.iter().any(|&(seen, _)| seen == v) {
            first_occurrences.push((v, i + 1));
        }
    }
    let mut first_violation = None;
    for (i, &v) in seq.iter().enumerate() {
        let m = i + 1;
        let explained = first_occurrences
            .iter()
            .any(|&(value, pos)| m % pos == 0 && value == v);
        if !explained {
            first_violation = Some(m);
            break;
        }
    }
    Ok(NullitySequenceReport {
        constant_one,
        first_occurrences,
        divisibility_consistent: first_violation.is_none(),
        first_violation,
    })
}
