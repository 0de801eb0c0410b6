//! Orderings of doubly indexed families `(row, column) -> position`, their
//! prefix decomposition into per-row prefixes, and the induced global order
//! on all monomials.
//!
//! An ordering is compatible when it preserves the column order inside
//! every row. Compatibility is exactly what makes every prefix
//! `{1, ..., j}` of global positions split into initial segments of the rows
//! it touches; [`prefix_decompose`] recovers those segments and fails at the
//! first position where a row would skip or repeat a column.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiindex::{self, MultiIndex};

/// Explicit finite ordering, entry `k - 1` holding the cell at position `k`.
#[derive(Debug, Clone)]
pub struct OrderingTable {
    cells: Vec<(usize, usize)>,
    positions: HashMap<(usize, usize), usize>,
}

impl OrderingTable {
    /// Validates that cells are 1-based and pairwise distinct. Row
    /// compatibility is not checked here; see [`prefix_decompose`].
    pub fn new(cells: Vec<(usize, usize)>) -> Result<Self> {
        let mut positions = HashMap::with_capacity(cells.len());
        for (i, &(row, column)) in cells.iter().enumerate() {
            if row == 0 || column == 0 {
                return Err(Error::InvalidTable(format!(
                    "cell ({row}, {column}) at position {} is not 1-based",
                    i + 1
                )));
            }
            if let Some(prev) = positions.insert((row, column), i + 1) {
                return Err(Error::InvalidTable(format!(
                    "cell ({row}, {column}) appears at positions {prev} and {}",
                    i + 1
                )));
            }
        }
        Ok(Self { cells, positions })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    /// Reads the JSON form `[[n, m], ...]`.
    pub fn from_json(text: &str) -> Result<Self> {
        let cells: Vec<(usize, usize)> = serde_json::from_str(text)?;
        Self::new(cells)
    }
}

/// A bijection between cells `(row, column)` and global positions, either
/// the lazily computed diagonal ordering or a finite table.
#[derive(Debug, Clone)]
pub enum CompatibleOrdering {
    /// Cells by increasing `row + column`, ties by increasing row.
    Diagonal,
    Table(OrderingTable),
}

fn triangular(t: usize) -> usize {
    t * (t + 1) / 2
}

impl CompatibleOrdering {
    pub fn canonical_diagonal() -> Self {
        Self::Diagonal
    }

    pub fn from_table(cells: Vec<(usize, usize)>) -> Result<Self> {
        OrderingTable::new(cells).map(Self::Table)
    }

    /// Global position of a cell, if it lies in the ordering's domain.
    pub fn forward(&self, row: usize, column: usize) -> Option<usize> {
        if row == 0 || column == 0 {
            return None;
        }
        match self {
            Self::Diagonal => Some(triangular(row + column - 2) + row),
            Self::Table(table) => table.positions.get(&(row, column)).copied(),
        }
    }

    /// Cell at a global position, if the position lies in the domain.
    pub fn inverse(&self, position: usize) -> Option<(usize, usize)> {
        if position == 0 {
            return None;
        }
        match self {
            Self::Diagonal => {
                // largest t with T(t) < position; the cell lies on diagonal t + 2
                let mut t = (((8 * position) as f64).sqrt() as usize).saturating_sub(1) / 2;
                while triangular(t) >= position {
                    t -= 1;
                }
                while triangular(t + 1) < position {
                    t += 1;
                }
                let row = position - triangular(t);
                Some((row, t + 2 - row))
            }
            Self::Table(table) => table.cells.get(position - 1).copied(),
        }
    }

    /// Number of positions certified by the ordering, `None` when unbounded.
    pub fn domain_bound(&self) -> Option<usize> {
        match self {
            Self::Diagonal => None,
            Self::Table(table) => Some(table.len()),
        }
    }

    fn cell(&self, position: usize) -> Result<(usize, usize)> {
        self.inverse(position).ok_or(Error::OrderingDomain {
            needed: position,
            available: self.domain_bound().unwrap_or(usize::MAX),
        })
    }
}

/// Split of the prefix `{1, ..., j}` into per-row initial segments: row `n`
/// contributes columns `1..=rows[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixDecomposition {
    pub j: usize,
    pub rows: BTreeMap<usize, usize>,
}

impl PrefixDecomposition {
    pub fn empty() -> Self {
        Self {
            j: 0,
            rows: BTreeMap::new(),
        }
    }

    /// The rows touched by the prefix.
    pub fn row_set(&self) -> BTreeSet<usize> {
        self.rows.keys().copied().collect()
    }

    /// Number of columns of `row` inside the prefix.
    pub fn count(&self, row: usize) -> usize {
        self.rows.get(&row).copied().unwrap_or(0)
    }

    /// Advances the decomposition to `new_j`, one position at a time.
    pub fn extend(&mut self, ordering: &CompatibleOrdering, new_j: usize) -> Result<()> {
        for position in self.j + 1..=new_j {
            let (row, column) = ordering.cell(position)?;
            let filled = self.count(row);
            if column != filled + 1 {
                return Err(Error::IncompatiblePrefix {
                    position,
                    row,
                    column,
                    filled,
                });
            }
            self.rows.insert(row, column);
            self.j = position;
        }
        Ok(())
    }

    /// Global positions `{forward(n, m) : m <= rows[n]}`, sorted.
    pub fn reconstruct(&self, ordering: &CompatibleOrdering) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .rows
            .iter()
            .flat_map(|(&row, &k)| (1..=k).filter_map(move |m| ordering.forward(row, m)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Computes the rows touched by the first `j` positions together with their
/// per-row column counts.
pub fn prefix_decompose(ordering: &CompatibleOrdering, j: usize) -> Result<PrefixDecomposition> {
    let mut decomposition = PrefixDecomposition::empty();
    decomposition.extend(ordering, j)?;
    Ok(decomposition)
}

/// Outcome of comparing the decompositions at `j` and `j + l`.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub j: usize,
    pub l: usize,
    pub rows_at_j: BTreeSet<usize>,
    pub rows_at_j_plus_l: BTreeSet<usize>,
    /// `S`, the rows first touched after position `j`.
    pub new_rows: BTreeSet<usize>,
    pub rows_nested: bool,
    pub counts_monotone: bool,
    pub pass: bool,
}

/// Checks that the row set only grows and per-row counts never shrink
/// between the prefixes `j` and `j + l`.
pub fn verify_monotone_growth(ordering: &CompatibleOrdering, j: usize, l: usize) -> Result<GrowthReport> {
    let small = prefix_decompose(ordering, j)?;
    let large = prefix_decompose(ordering, j + l)?;
    let rows_at_j = small.row_set();
    let rows_at_j_plus_l = large.row_set();
    let new_rows: BTreeSet<usize> = rows_at_j_plus_l.difference(&rows_at_j).copied().collect();
    let rows_nested = rows_at_j.is_subset(&rows_at_j_plus_l);
    let counts_monotone = small.rows.iter().all(|(&row, &k)| k <= large.count(row));
    Ok(GrowthReport {
        j,
        l,
        rows_at_j,
        rows_at_j_plus_l,
        new_rows,
        rows_nested,
        counts_monotone,
        pass: rows_nested && counts_monotone,
    })
}

/// One monomial of the global order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalEntry {
    pub degree: u32,
    pub index: MultiIndex,
}

/// All monomials of degree `<= max_degree` and length `<= max_length` in the
/// global order: the constant first, then degree rows `n >= 1` interleaved
/// by `ordering` with row `n` listed in square order.
pub fn global_monomial_order(
    ordering: &CompatibleOrdering,
    max_degree: u32,
    max_length: usize,
) -> Result<Vec<GlobalEntry>> {
    let mut out = vec![GlobalEntry {
        degree: 0,
        index: MultiIndex::empty(),
    }];
    if max_degree == 0 || max_length == 0 {
        return Ok(out);
    }
    // row n keeps its first C(n + d - 1, d - 1) columns: the length <= d prefix
    let needed: Vec<u64> = (1..=max_degree)
        .map(|n| {
            multiindex::count_up_to_length(n, max_length).ok_or(Error::RankOverflow {
                degree: n,
                length: max_length,
            })
        })
        .collect::<Result<_>>()?;
    let mut open_rows = needed.len();
    let mut position = 0;
    while open_rows > 0 {
        position += 1;
        let (row, column) = ordering.cell(position)?;
        if row > max_degree as usize {
            continue;
        }
        let quota = needed[row - 1];
        if column as u64 > quota {
            continue;
        }
        let degree = row as u32;
        out.push(GlobalEntry {
            degree,
            index: multiindex::unrank(degree, column as u64)?,
        });
        if column as u64 == quota {
            open_rows -= 1;
        }
    }
    Ok(out)
}

/// 1-based positions in a global order at which some degree row has been
/// fully emitted.
pub fn row_completion_cuts(order: &[GlobalEntry]) -> Vec<usize> {
    let mut last = BTreeMap::new();
    for (i, entry) in order.iter().enumerate() {
        last.insert(entry.degree, i + 1);
    }
    let mut cuts: Vec<usize> = last.into_values().collect();
    cuts.sort_unstable();
    cuts
}
