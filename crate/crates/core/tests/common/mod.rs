//! Shared generators and independent oracles for the integration suites.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use cellchain::chain::ChainComplex;
use cellchain::cw::{CWComplex, Cell};
use cellchain::level::Level;
use cellchain::matrix::IntMatrix;
use cellchain::morse::FilteredComplex;
use cellchain::smith::integer_kernel;

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let entries = (0..rows * cols)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect();
    IntMatrix::new(rows, cols, entries).unwrap()
}

/// Random valid chain complex built degree by degree: each boundary's
/// columns are small integer combinations of the previous boundary's
/// integer kernel basis, so the chain condition holds by construction.
pub fn random_valid_complex(rng: &mut ChaCha8Rng) -> ChainComplex {
    let top = rng.gen_range(1..=4);
    let counts: Vec<usize> = (0..=top).map(|_| rng.gen_range(0..=6)).collect();
    let mut boundaries = Vec::new();
    let mut previous: Option<IntMatrix> = None;
    for k in 1..=top {
        let rows = counts[k - 1];
        let cols = counts[k];
        let m = match &previous {
            None => random_matrix(rng, rows, cols, 2),
            Some(prev) => {
                let kernel = integer_kernel(prev);
                let mut m = IntMatrix::zeros(rows, cols);
                for j in 0..cols {
                    for b in 0..kernel.cols() {
                        let c = BigInt::from(rng.gen_range(-2i64..=2));
                        if c.is_zero() {
                            continue;
                        }
                        for i in 0..rows {
                            let val = m.get(i, j) + &c * kernel.get(i, b);
                            m.set(i, j, val);
                        }
                    }
                }
                m
            }
        };
        previous = Some(m.clone());
        boundaries.push(m);
    }
    ChainComplex::new(counts, boundaries).expect("kernel construction preserves d∘d = 0")
}

/// Random filtered complex: isolated cells at integer critical values plus
/// incidence pairs (lower cell with zero boundary, upper cell attaching onto
/// it with degree 1..=3, values nondecreasing). Pairs with degree >= 2
/// contribute torsion.
pub fn random_filtration(rng: &mut ChaCha8Rng) -> FilteredComplex {
    let mut cells = Vec::new();
    let mut counter = 0usize;
    let fresh = |counter: &mut usize| {
        let id = format!("r{:03}", *counter);
        *counter += 1;
        id
    };
    for _ in 0..rng.gen_range(1..=5) {
        let dim = rng.gen_range(0..=3);
        let value = Level::from_integer(rng.gen_range(0..=4));
        cells.push(Cell::new(fresh(&mut counter), dim).with_value(value));
    }
    for _ in 0..rng.gen_range(0..=5) {
        let dim = rng.gen_range(0..=2);
        let low_value = rng.gen_range(0..=4);
        let high_value = rng.gen_range(low_value..=4);
        let degree = rng.gen_range(1..=3);
        let low = fresh(&mut counter);
        let high = fresh(&mut counter);
        cells.push(Cell::new(&low, dim).with_value(Level::from_integer(low_value)));
        cells.push(
            Cell::new(&high, dim + 1)
                .with_degrees([(low, degree)])
                .with_value(Level::from_integer(high_value)),
        );
    }
    let complex = CWComplex::new("random_filtration", cells).unwrap();
    FilteredComplex::new(complex).expect("generator respects sublevel closure")
}

/// Relabels the cells of a complex by random permutations in each degree,
/// conjugating every boundary matrix accordingly.
pub fn relabel_complex(rng: &mut ChaCha8Rng, complex: &ChainComplex) -> ChainComplex {
    let counts = complex.cell_counts().to_vec();
    // perms[k][new_index] = old_index
    let perms: Vec<Vec<usize>> = counts
        .iter()
        .map(|&n| {
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            p
        })
        .collect();
    let boundaries: Vec<IntMatrix> = (1..counts.len())
        .map(|k| {
            let old = complex.boundary(k);
            let mut m = IntMatrix::zeros(counts[k - 1], counts[k]);
            for i in 0..counts[k - 1] {
                for j in 0..counts[k] {
                    m.set(i, j, old.get(perms[k - 1][i], perms[k][j]).clone());
                }
            }
            m
        })
        .collect();
    ChainComplex::new(counts, boundaries).expect("relabeling preserves the chain condition")
}

/// Independent oracle: rank of a matrix over the prime field F_p by plain
/// Gaussian elimination on residues.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let p_big = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let r = ((m.get(i, j) % &p_big) + &p_big) % &p_big;
                    u64::try_from(&r).unwrap()
                })
                .collect()
        })
        .collect();
    let rows = m.rows();
    let cols = m.cols();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| !a[i][col].is_multiple_of(p)) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = mod_inverse(a[rank][col] % p, p);
        for j in col..cols {
            a[rank][j] = a[rank][j] % p * inv % p;
        }
        for i in 0..rows {
            if i != rank && !a[i][col].is_multiple_of(p) {
                let factor = a[i][col] % p;
                for j in col..cols {
                    a[i][j] = (a[i][j] + (p - factor) * a[rank][j]) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p for prime p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

/// Independent oracle: connected components by union-find.
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    pub fn component_count(&mut self) -> usize {
        let n = self.parent.len();
        let mut roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}
