//! CW complexes as combinatorial data.
//!
//! A cell records its dimension and the incidence degrees of its attaching
//! map against the cells one dimension down; degrees are input data. Cells
//! are kept in the canonical order (dimension, then id lexicographically) so
//! assembled boundary matrices, and everything downstream of them, are
//! byte-reproducible.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::chain::{ChainComplex, ChainError};
use crate::level::Level;
use crate::matrix::IntMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CwError {
    #[error("duplicate cell id {id:?}")]
    DuplicateId { id: String },
    #[error("cell {cell:?} (dim {dim}) attaches to unknown cell {target:?}")]
    UnknownBoundaryCell {
        cell: String,
        dim: usize,
        target: String,
    },
    #[error(
        "cell {cell:?} (dim {dim}) attaches to {target:?} of dim {target_dim}, expected dim {expected}"
    )]
    BoundaryDimension {
        cell: String,
        dim: usize,
        target: String,
        target_dim: usize,
        expected: usize,
    },
    #[error("0-cell {cell:?} must have an empty attaching map")]
    ZeroCellWithBoundary { cell: String },
    #[error(
        "chain condition fails at degree {degree}: cells {upper:?} and {lower:?} carry inconsistent degree data (product entry {value})"
    )]
    InconsistentDegrees {
        upper: String,
        lower: String,
        degree: usize,
        value: BigInt,
    },
    #[error("attaching word uses unknown generator {symbol:?}")]
    UnknownGenerator { symbol: String },
    #[error("unknown standard complex {name:?}")]
    UnknownStandardComplex { name: String },
    #[error("invalid parameter for {name}: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// A single cell: id, dimension, attaching degrees against (dim-1)-cells,
/// and an optional filtration value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    pub degrees: BTreeMap<String, i64>,
    pub value: Option<Level>,
}

impl Cell {
    pub fn new(id: impl Into<String>, dim: usize) -> Self {
        Self {
            id: id.into(),
            dim,
            degrees: BTreeMap::new(),
            value: None,
        }
    }

    pub fn with_degrees<I, S>(mut self, degrees: I) -> Self
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        for (id, d) in degrees {
            self.degrees.insert(id.into(), d);
        }
        self
    }

    pub fn with_value(mut self, value: Level) -> Self {
        self.value = Some(value);
        self
    }
}

/// A CW complex closed under boundary references, with cells in canonical
/// order. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CWComplex {
    name: String,
    cells: Vec<Cell>,
}

impl CWComplex {
    /// Validates ids, boundary references, and dimension compatibility,
    /// then sorts cells canonically by (dim, id).
    pub fn new(name: impl Into<String>, mut cells: Vec<Cell>) -> Result<Self, CwError> {
        let mut dims: BTreeMap<&str, usize> = BTreeMap::new();
        for cell in &cells {
            if dims.insert(&cell.id, cell.dim).is_some() {
                return Err(CwError::DuplicateId {
                    id: cell.id.clone(),
                });
            }
        }
        for cell in &cells {
            if cell.dim == 0 && !cell.degrees.is_empty() {
                return Err(CwError::ZeroCellWithBoundary {
                    cell: cell.id.clone(),
                });
            }
            for target in cell.degrees.keys() {
                match dims.get(target.as_str()) {
                    None => {
                        return Err(CwError::UnknownBoundaryCell {
                            cell: cell.id.clone(),
                            dim: cell.dim,
                            target: target.clone(),
                        })
                    }
                    Some(&target_dim) if target_dim + 1 != cell.dim => {
                        return Err(CwError::BoundaryDimension {
                            cell: cell.id.clone(),
                            dim: cell.dim,
                            target: target.clone(),
                            target_dim,
                            expected: cell.dim - 1,
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        cells.sort_by(|a, b| (a.dim, &a.id).cmp(&(b.dim, &b.id)));
        Ok(Self {
            name: name.into(),
            cells,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Cells in canonical (dim, id) order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn top_dimension(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn cells_of_dim(&self, dim: usize) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(move |c| c.dim == dim)
    }

    /// Assembles the cellular boundary matrices: the entry of M_k at
    /// (row j, column i) is the attaching degree of the i-th k-cell against
    /// the j-th (k-1)-cell, rows and columns in canonical order. The result
    /// is validated; failure means the input degree data is inconsistent.
    pub fn build_chain_complex(&self) -> Result<ChainComplex, CwError> {
        let top = self.top_dimension();
        let mut ids_by_dim: Vec<Vec<&str>> = vec![Vec::new(); top + 1];
        for cell in &self.cells {
            ids_by_dim[cell.dim].push(&cell.id);
        }
        let index_by_dim: Vec<BTreeMap<&str, usize>> = ids_by_dim
            .iter()
            .map(|ids| {
                ids.iter()
                    .enumerate()
                    .map(|(i, &id)| (id, i))
                    .collect()
            })
            .collect();
        let cell_counts: Vec<usize> = ids_by_dim.iter().map(|ids| ids.len()).collect();

        let mut boundaries = Vec::new();
        for k in 1..=top {
            let mut m = IntMatrix::zeros(cell_counts[k - 1], cell_counts[k]);
            for (col, cell) in self.cells_of_dim(k).enumerate() {
                for (target, &deg) in &cell.degrees {
                    let row = index_by_dim[k - 1][target.as_str()];
                    m.set(row, col, BigInt::from(deg));
                }
            }
            boundaries.push(m);
        }

        ChainComplex::new(cell_counts, boundaries).map_err(|e| match e {
            ChainError::ChainCondition {
                degree,
                row,
                col,
                value,
                ..
            } => CwError::InconsistentDegrees {
                upper: ids_by_dim[degree + 1][col].to_string(),
                lower: ids_by_dim[degree - 1][row].to_string(),
                degree,
                value,
            },
            other => CwError::Chain(other),
        })
    }

    /// Product complex: cells are pairs with summed dimensions; the boundary
    /// degree against (x', y) is the X-degree, and against (x, y') it is the
    /// Y-degree with the tensor sign (-1)^{dim x}.
    pub fn product(&self, other: &CWComplex) -> Result<CWComplex, CwError> {
        let pair_id = |x: &Cell, y: &Cell| format!("({},{})", x.id, y.id);
        let mut cells = Vec::new();
        for x in &self.cells {
            for y in &other.cells {
                let mut degrees = BTreeMap::new();
                for (xt, &dx) in &x.degrees {
                    if dx != 0 {
                        degrees.insert(format!("({xt},{})", y.id), dx);
                    }
                }
                let sign = if x.dim % 2 == 0 { 1 } else { -1 };
                for (yt, &dy) in &y.degrees {
                    if dy != 0 {
                        degrees.insert(format!("({},{yt})", x.id), sign * dy);
                    }
                }
                cells.push(Cell {
                    id: pair_id(x, y),
                    dim: x.dim + y.dim,
                    degrees,
                    value: None,
                });
            }
        }
        CWComplex::new(format!("{}x{}", self.name, other.name), cells)
    }
}

/// One letter of an attaching word: a 1-cell symbol, possibly inverted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub symbol: String,
    pub inverse: bool,
}

/// Parses the one-line word syntax: whitespace-separated symbols with an
/// optional trailing `'` marking the inverse, e.g. `a b a' b'`.
pub fn parse_attaching_word(word: &str) -> Vec<Letter> {
    word.split_whitespace()
        .map(|tok| match tok.strip_suffix('\'') {
            Some(base) => Letter {
                symbol: base.to_string(),
                inverse: true,
            },
            None => Letter {
                symbol: tok.to_string(),
                inverse: false,
            },
        })
        .collect()
}

/// Signed occurrence count of each generator in an attaching word: the
/// degree of the word's map onto each 1-cell. Every named generator gets an
/// entry (zero when the letters cancel); unknown symbols are rejected.
pub fn degree_from_attaching_word<S: AsRef<str>>(
    word: &[Letter],
    generators: &[S],
) -> Result<BTreeMap<String, i64>, CwError> {
    let mut degrees: BTreeMap<String, i64> = generators
        .iter()
        .map(|g| (g.as_ref().to_string(), 0))
        .collect();
    for letter in word {
        match degrees.get_mut(letter.symbol.as_str()) {
            Some(d) => *d += if letter.inverse { -1 } else { 1 },
            None => {
                return Err(CwError::UnknownGenerator {
                    symbol: letter.symbol.clone(),
                })
            }
        }
    }
    Ok(degrees)
}

/// The built-in corpus of minimal CW structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardComplex {
    Sphere(usize),
    Torus,
    KleinBottle,
    RealProjectivePlane,
    ComplexProjective(usize),
    WedgeOfCircles(usize),
    /// Truncation of the classifying space of Z/m at the given top degree.
    BzmTruncation { order: u64, top_dim: usize },
    /// The contractible base cell: a single 0-cell.
    DiskInfinity,
}

impl StandardComplex {
    pub fn build(&self) -> Result<CWComplex, CwError> {
        match *self {
            StandardComplex::Sphere(n) => {
                if n == 0 {
                    return CWComplex::new("sphere(0)", vec![Cell::new("v0", 0), Cell::new("v1", 0)]);
                }
                CWComplex::new(
                    format!("sphere({n})"),
                    vec![Cell::new("v", 0), Cell::new("e", n)],
                )
            }
            StandardComplex::Torus => {
                // Commutator attaching word a b a' b': all degrees cancel.
                CWComplex::new(
                    "torus",
                    vec![
                        Cell::new("v", 0),
                        Cell::new("a", 1),
                        Cell::new("b", 1),
                        Cell::new("f", 2),
                    ],
                )
            }
            StandardComplex::KleinBottle => {
                // Attaching word a b a b': signed counts {a: 2, b: 0}.
                CWComplex::new(
                    "klein_bottle",
                    vec![
                        Cell::new("v", 0),
                        Cell::new("a", 1),
                        Cell::new("b", 1),
                        Cell::new("f", 2).with_degrees([("a", 2)]),
                    ],
                )
            }
            StandardComplex::RealProjectivePlane => {
                // Attaching word a a: degree {a: 2}.
                CWComplex::new(
                    "real_projective_plane",
                    vec![
                        Cell::new("v", 0),
                        Cell::new("a", 1),
                        Cell::new("f", 2).with_degrees([("a", 2)]),
                    ],
                )
            }
            StandardComplex::ComplexProjective(n) => {
                // One cell in each even dimension 0, 2, ..., 2n; parity
                // forces every boundary map to vanish.
                let cells = (0..=n).map(|i| Cell::new(format!("c{}", 2 * i), 2 * i)).collect();
                CWComplex::new(format!("complex_projective({n})"), cells)
            }
            StandardComplex::WedgeOfCircles(k) => {
                let width = k.to_string().len();
                let mut cells = vec![Cell::new("v", 0)];
                cells.extend((1..=k).map(|i| Cell::new(format!("a{i:0width$}"), 1)));
                CWComplex::new(format!("wedge_of_circles({k})"), cells)
            }
            StandardComplex::BzmTruncation { order, top_dim } => {
                if order < 2 {
                    return Err(CwError::InvalidParameter {
                        name: "bzm_truncation".to_string(),
                        reason: format!("order must be at least 2, got {order}"),
                    });
                }
                let mut cells = Vec::new();
                for d in 0..=top_dim {
                    let mut cell = Cell::new(format!("c{d}"), d);
                    // Odd-degree boundaries vanish, even-degree ones are
                    // multiplication by the order.
                    if d >= 2 && d % 2 == 0 {
                        cell = cell.with_degrees([(format!("c{}", d - 1), order as i64)]);
                    }
                    cells.push(cell);
                }
                CWComplex::new(format!("bzm_truncation({order},{top_dim})"), cells)
            }
            StandardComplex::DiskInfinity => {
                CWComplex::new("disk_infinity", vec![Cell::new("v", 0)])
            }
        }
    }
}

impl FromStr for StandardComplex {
    type Err = CwError;

    /// Accepts names like `torus`, `sphere(3)`, or `bzm_truncation(4,3)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, args) = match s.split_once('(') {
            Some((n, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| {
                    CwError::UnknownStandardComplex {
                        name: s.to_string(),
                    }
                })?;
                let args: Vec<&str> = inner.split(',').map(str::trim).collect();
                (n.trim(), args)
            }
            None => (s, Vec::new()),
        };
        let want = |n: usize| -> Result<Vec<u64>, CwError> {
            if args.len() != n {
                return Err(CwError::InvalidParameter {
                    name: name.to_string(),
                    reason: format!("expected {n} parameter(s), got {}", args.len()),
                });
            }
            args.iter()
                .map(|a| {
                    a.parse::<u64>().map_err(|_| CwError::InvalidParameter {
                        name: name.to_string(),
                        reason: format!("{a:?} is not a nonnegative integer"),
                    })
                })
                .collect()
        };
        match name {
            "sphere" => Ok(StandardComplex::Sphere(want(1)?[0] as usize)),
            "torus" => {
                want(0)?;
                Ok(StandardComplex::Torus)
            }
            "klein_bottle" => {
                want(0)?;
                Ok(StandardComplex::KleinBottle)
            }
            "real_projective_plane" => {
                want(0)?;
                Ok(StandardComplex::RealProjectivePlane)
            }
            "complex_projective" => Ok(StandardComplex::ComplexProjective(want(1)?[0] as usize)),
            "wedge_of_circles" => Ok(StandardComplex::WedgeOfCircles(want(1)?[0] as usize)),
            "bzm_truncation" => {
                let p = want(2)?;
                Ok(StandardComplex::BzmTruncation {
                    order: p[0],
                    top_dim: p[1] as usize,
                })
            }
            "disk_infinity" => {
                want(0)?;
                Ok(StandardComplex::DiskInfinity)
            }
            other => Err(CwError::UnknownStandardComplex {
                name: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for CWComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} cells)", self.name, self.cells.len())
    }
}
