//! Chain complexes of finitely generated free abelian groups.
//!
//! A complex is a list of cell counts n_0..n_N and boundary matrices
//! M_1..M_N (M_k maps degree-k chains to degree k-1) with M_k * M_{k+1} = 0.
//! Homology at degree k is computed from the Smith normal forms of the two
//! adjacent boundaries: the free rank is n_k - rank(M_k) - rank(M_{k+1}) and
//! the torsion coefficients are the elementary divisors of the incoming
//! boundary M_{k+1} that exceed 1.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::gcd_big;
use crate::matrix::IntMatrix;
use crate::poly::GradedPolynomial;
use crate::smith::smith_normal_form;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("expected {expected} boundary matrices for {degrees} cell counts, got {got}")]
    BoundaryCount {
        degrees: usize,
        expected: usize,
        got: usize,
    },
    #[error(
        "boundary M_{degree} is {rows}x{cols}, expected {expected_rows}x{expected_cols} from the cell counts"
    )]
    BoundaryShape {
        degree: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error(
        "chain condition fails at degree {degree}: (M_{degree} * M_{next})[{row},{col}] = {value} != 0"
    )]
    ChainCondition {
        degree: usize,
        next: usize,
        row: usize,
        col: usize,
        value: BigInt,
    },
    #[error("coefficient modulus must be at least 2, got {modulus}")]
    BadModulus { modulus: u64 },
}

/// A validated chain complex. Construction checks shapes and the chain
/// condition, so every value of this type satisfies d∘d = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    cell_counts: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

/// A finitely generated abelian group: free rank plus torsion coefficients
/// in divisibility order, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        Self {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of torsion summands (the torsion rank t of the group).
    pub fn torsion_rank(&self) -> usize {
        self.torsion.len()
    }
}

impl fmt::Display for HomologyGroup {
    /// Free part first, torsion in divisibility order: `Z^2 ⊕ Z/2 ⊕ Z/4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Coefficient ring for homology with coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientRing {
    Rationals,
    /// Z/l for l >= 2 (l need not be prime).
    Mod(u64),
}

/// Per-degree result of the Morse inequality self-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseDegree {
    pub degree: usize,
    pub betti: usize,
    pub cells: usize,
    pub holds: bool,
}

/// Report of b_k <= n_k for each degree plus the Euler characteristic
/// equality between alternating cell counts and alternating Betti numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseReport {
    pub degrees: Vec<MorseDegree>,
    pub chi_from_cells: i64,
    pub chi_from_betti: i64,
}

impl MorseReport {
    pub fn pass(&self) -> bool {
        self.degrees.iter().all(|d| d.holds) && self.chi_from_cells == self.chi_from_betti
    }
}

impl ChainComplex {
    /// Builds and validates a complex. `cell_counts` is n_0..n_N and
    /// `boundaries` is M_1..M_N; an empty boundary list with a single count
    /// is the complex concentrated in degree 0.
    pub fn new(cell_counts: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, ChainError> {
        if cell_counts.is_empty() {
            // Normalize the empty complex to a single empty degree.
            return Ok(Self {
                cell_counts: vec![0],
                boundaries: Vec::new(),
            });
        }
        if boundaries.len() + 1 != cell_counts.len() {
            return Err(ChainError::BoundaryCount {
                degrees: cell_counts.len(),
                expected: cell_counts.len() - 1,
                got: boundaries.len(),
            });
        }
        for (i, m) in boundaries.iter().enumerate() {
            let (expected_rows, expected_cols) = (cell_counts[i], cell_counts[i + 1]);
            if m.rows() != expected_rows || m.cols() != expected_cols {
                return Err(ChainError::BoundaryShape {
                    degree: i + 1,
                    rows: m.rows(),
                    cols: m.cols(),
                    expected_rows,
                    expected_cols,
                });
            }
        }
        for k in 0..boundaries.len().saturating_sub(1) {
            let product = boundaries[k]
                .mul(&boundaries[k + 1])
                .expect("shapes checked above");
            if let Some((row, col)) = first_nonzero(&product) {
                return Err(ChainError::ChainCondition {
                    degree: k + 1,
                    next: k + 2,
                    row,
                    col,
                    value: product.get(row, col).clone(),
                });
            }
        }
        Ok(Self {
            cell_counts,
            boundaries,
        })
    }

    /// Highest degree N carrying a chain group.
    pub fn top_degree(&self) -> usize {
        self.cell_counts.len() - 1
    }

    pub fn cell_counts(&self) -> &[usize] {
        &self.cell_counts
    }

    pub fn cell_count(&self, k: usize) -> usize {
        self.cell_counts.get(k).copied().unwrap_or(0)
    }

    /// The boundary matrix M_k for 1 <= k <= N; other degrees are the zero
    /// map with the appropriate (possibly empty) shape.
    pub fn boundary(&self, k: usize) -> IntMatrix {
        if k >= 1 && k <= self.boundaries.len() {
            self.boundaries[k - 1].clone()
        } else {
            let rows = if k >= 1 { self.cell_count(k - 1) } else { 0 };
            IntMatrix::zeros(rows, self.cell_count(k))
        }
    }

    fn boundary_rank_snf(&self, k: usize) -> usize {
        if k >= 1 && k <= self.boundaries.len() {
            smith_normal_form(&self.boundaries[k - 1]).rank
        } else {
            0
        }
    }

    fn boundary_rank_rational(&self, k: usize) -> usize {
        if k >= 1 && k <= self.boundaries.len() {
            self.boundaries[k - 1].rank_over_rationals()
        } else {
            0
        }
    }

    /// Integral homology at degree `k`. Degrees above the top return the
    /// zero group so graded bookkeeping composes without bounds fiddling.
    pub fn homology(&self, k: usize) -> HomologyGroup {
        if k > self.top_degree() {
            return HomologyGroup::zero();
        }
        let outgoing_rank = self.boundary_rank_snf(k);
        let incoming = smith_normal_form(&self.boundary(k + 1));
        let free_rank = self
            .cell_count(k)
            .checked_sub(outgoing_rank + incoming.rank)
            .expect("rank bound violated on a validated complex");
        let torsion: Vec<BigInt> = incoming
            .divisors
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        HomologyGroup { free_rank, torsion }
    }

    /// Betti number via fraction-free rational elimination; an independent
    /// computation path from [`Self::homology`], which uses SNF ranks.
    pub fn betti(&self, k: usize) -> usize {
        if k > self.top_degree() {
            return 0;
        }
        self.cell_count(k)
            .checked_sub(self.boundary_rank_rational(k) + self.boundary_rank_rational(k + 1))
            .expect("rank bound violated on a validated complex")
    }

    /// Homology with coefficients, assembled from integral homology by
    /// universal coefficients. The result is a list of cyclic summand
    /// orders where 0 encodes a free summand (a full copy of Z/l or Q);
    /// trivial summands are dropped and torsion orders are sorted.
    pub fn homology_with_coefficients(
        &self,
        k: usize,
        ring: CoefficientRing,
    ) -> Result<Vec<BigInt>, ChainError> {
        let h_k = self.homology(k);
        match ring {
            CoefficientRing::Rationals => Ok(vec![BigInt::zero(); h_k.free_rank]),
            CoefficientRing::Mod(l) => {
                if l < 2 {
                    return Err(ChainError::BadModulus { modulus: l });
                }
                let l = BigInt::from(l);
                let mut summands = vec![BigInt::zero(); h_k.free_rank];
                let mut torsion: Vec<BigInt> = Vec::new();
                // Tensor term from H_k, Tor term from H_{k-1}.
                for alpha in &h_k.torsion {
                    let d = gcd_big(alpha, &l);
                    if !d.is_one() {
                        torsion.push(d);
                    }
                }
                if k > 0 {
                    for alpha in &self.homology(k - 1).torsion {
                        let d = gcd_big(alpha, &l);
                        if !d.is_one() {
                            torsion.push(d);
                        }
                    }
                }
                torsion.sort();
                summands.extend(torsion);
                Ok(summands)
            }
        }
    }

    /// Alternating sum of cell counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.cell_counts
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let n = n as i64;
                if k % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// Generating polynomial of the Betti numbers; evaluates at -1 to the
    /// Euler characteristic.
    pub fn poincare_polynomial(&self) -> GradedPolynomial {
        GradedPolynomial::from_coefficients(
            (0..=self.top_degree()).map(|k| (k, self.betti(k) as u64)),
        )
    }

    /// Checks b_k <= n_k per degree and the alternating-sum equality. Both
    /// hold for every valid complex; the report makes the check visible.
    pub fn morse_inequalities(&self) -> MorseReport {
        let degrees: Vec<MorseDegree> = (0..=self.top_degree())
            .map(|k| {
                let betti = self.betti(k);
                let cells = self.cell_count(k);
                MorseDegree {
                    degree: k,
                    betti,
                    cells,
                    holds: betti <= cells,
                }
            })
            .collect();
        let chi_from_betti = degrees
            .iter()
            .map(|d| {
                let b = d.betti as i64;
                if d.degree % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .sum();
        MorseReport {
            degrees,
            chi_from_cells: self.euler_characteristic(),
            chi_from_betti,
        }
    }
}

fn first_nonzero(m: &IntMatrix) -> Option<(usize, usize)> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m.get(i, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat;

    fn group(free: usize, torsion: &[i64]) -> HomologyGroup {
        HomologyGroup {
            free_rank: free,
            torsion: torsion.iter().map(|&t| BigInt::from(t)).collect(),
        }
    }

    /// Torus as a chain complex: counts (1, 2, 1), all boundaries zero.
    fn torus() -> ChainComplex {
        ChainComplex::new(
            vec![1, 2, 1],
            vec![IntMatrix::zeros(1, 2), IntMatrix::zeros(2, 1)],
        )
        .unwrap()
    }

    /// Klein bottle: M_1 = 0, M_2 = (2, 0)^T.
    fn klein_bottle() -> ChainComplex {
        ChainComplex::new(vec![1, 2, 1], vec![IntMatrix::zeros(1, 2), mat![[2], [0]]]).unwrap()
    }

    /// Real projective plane model: counts (1, 1, 1), M_1 = 0, M_2 = [2].
    fn projective_plane() -> ChainComplex {
        ChainComplex::new(vec![1, 1, 1], vec![IntMatrix::zeros(1, 1), mat![[2]]]).unwrap()
    }

    /// Truncated classifying-space model of Z/m: one cell in each degree
    /// 0..=3 with boundaries 0, [m], [0].
    fn bzm(m: i64) -> ChainComplex {
        ChainComplex::new(
            vec![1, 1, 1, 1],
            vec![IntMatrix::zeros(1, 1), mat![[m]], IntMatrix::zeros(1, 1)],
        )
        .unwrap()
    }

    #[test]
    fn validation_accepts_zero_boundaries() {
        assert!(torus().cell_counts() == [1, 2, 1]);
    }

    #[test]
    fn validation_rejects_chain_violation() {
        // One cell in each degree 0..2 with M_1 = M_2 = [1]: product is [1].
        let err = ChainComplex::new(vec![1, 1, 1], vec![mat![[1]], mat![[1]]]).unwrap_err();
        match err {
            ChainError::ChainCondition {
                degree,
                row,
                col,
                ref value,
                ..
            } => {
                assert_eq!((degree, row, col), (1, 0, 0));
                assert_eq!(value, &BigInt::one());
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn validation_rejects_bad_shapes() {
        let err = ChainComplex::new(vec![1, 2], vec![mat![[1]]]).unwrap_err();
        assert!(matches!(err, ChainError::BoundaryShape { degree: 1, .. }));
    }

    #[test]
    fn single_point_complex() {
        let c = ChainComplex::new(vec![1], vec![]).unwrap();
        assert_eq!(c.homology(0), group(1, &[]));
        assert_eq!(c.homology(1), HomologyGroup::zero());
    }

    #[test]
    fn torus_homology() {
        let t = torus();
        assert_eq!(t.homology(0), group(1, &[]));
        assert_eq!(t.homology(1), group(2, &[]));
        assert_eq!(t.homology(2), group(1, &[]));
        assert_eq!((t.betti(0), t.betti(1), t.betti(2)), (1, 2, 1));
    }

    #[test]
    fn klein_bottle_homology() {
        // SNF of (2,0)^T has the single divisor 2; by hand: n_1 = 2,
        // rank M_1 = 0, rank M_2 = 1, so free rank 1 and torsion Z/2.
        let k = klein_bottle();
        assert_eq!(k.homology(0), group(1, &[]));
        assert_eq!(k.homology(1), group(1, &[2]));
        assert_eq!(k.homology(2), HomologyGroup::zero());
        assert_eq!((k.betti(0), k.betti(1), k.betti(2)), (1, 1, 0));
    }

    #[test]
    fn projective_plane_homology() {
        let p = projective_plane();
        assert_eq!(p.homology(0), group(1, &[]));
        assert_eq!(p.homology(1), group(0, &[2]));
        assert_eq!(p.homology(2), HomologyGroup::zero());
        assert_eq!((p.betti(0), p.betti(1), p.betti(2)), (1, 0, 0));
    }

    #[test]
    fn bzm_truncation_homology() {
        // Matches the classifying-space table in degrees <= 2:
        // H_0 = Z, H_1 = Z/m, H_2 = 0.
        for m in 2..=12 {
            let c = bzm(m);
            assert_eq!(c.homology(0), group(1, &[]));
            assert_eq!(c.homology(1), group(0, &[m]));
            assert_eq!(c.homology(2), HomologyGroup::zero());
        }
    }

    #[test]
    fn coefficients_by_universal_coefficients() {
        // H_1(BZ_4; Z/6) = Z/gcd(4,6) = Z/2 from the tensor term.
        let c = bzm(4);
        assert_eq!(
            c.homology_with_coefficients(1, CoefficientRing::Mod(6))
                .unwrap(),
            vec![BigInt::from(2)]
        );
        // H_2 picks up the same Z/2 from the Tor term.
        assert_eq!(
            c.homology_with_coefficients(2, CoefficientRing::Mod(6))
                .unwrap(),
            vec![BigInt::from(2)]
        );
        // Torsion-free integral homology: two free summands for the torus.
        for l in [2, 3, 4, 12] {
            assert_eq!(
                torus()
                    .homology_with_coefficients(1, CoefficientRing::Mod(l))
                    .unwrap(),
                vec![BigInt::zero(), BigInt::zero()]
            );
        }
        // Rational coefficients keep exactly the free rank.
        assert_eq!(
            klein_bottle()
                .homology_with_coefficients(1, CoefficientRing::Rationals)
                .unwrap(),
            vec![BigInt::zero()]
        );
        assert_eq!(
            c.homology_with_coefficients(1, CoefficientRing::Rationals)
                .unwrap(),
            Vec::<BigInt>::new()
        );
    }

    #[test]
    fn coefficients_reject_bad_modulus() {
        assert_eq!(
            torus().homology_with_coefficients(1, CoefficientRing::Mod(1)),
            Err(ChainError::BadModulus { modulus: 1 })
        );
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(torus().euler_characteristic(), 0);
        assert_eq!(projective_plane().euler_characteristic(), 1);
        let sphere = ChainComplex::new(
            vec![1, 0, 1],
            vec![IntMatrix::zeros(1, 0), IntMatrix::zeros(0, 1)],
        )
        .unwrap();
        assert_eq!(sphere.euler_characteristic(), 2);
    }

    #[test]
    fn poincare_polynomials() {
        assert_eq!(torus().poincare_polynomial().to_string(), "1 + 2t + t^2");
        assert_eq!(klein_bottle().poincare_polynomial().to_string(), "1 + t");
        let sphere = ChainComplex::new(
            vec![1, 0, 1],
            vec![IntMatrix::zeros(1, 0), IntMatrix::zeros(0, 1)],
        )
        .unwrap();
        assert_eq!(sphere.poincare_polynomial().to_string(), "1 + t^2");
        for c in [torus(), klein_bottle(), projective_plane(), bzm(5)] {
            assert_eq!(
                c.poincare_polynomial().eval_at_minus_one(),
                c.euler_characteristic()
            );
        }
    }

    #[test]
    fn morse_inequality_reports() {
        let t = torus().morse_inequalities();
        assert!(t.pass());
        assert_eq!((t.chi_from_cells, t.chi_from_betti), (0, 0));

        let k = klein_bottle().morse_inequalities();
        assert!(k.pass());
        assert_eq!(
            k.degrees.iter().map(|d| d.betti).collect::<Vec<_>>(),
            vec![1, 1, 0]
        );
        assert_eq!(
            k.degrees.iter().map(|d| d.cells).collect::<Vec<_>>(),
            vec![1, 2, 1]
        );

        // Tight case: the two-cell sphere has b = n in every degree.
        let sphere = ChainComplex::new(
            vec![1, 0, 1],
            vec![IntMatrix::zeros(1, 0), IntMatrix::zeros(0, 1)],
        )
        .unwrap();
        let s = sphere.morse_inequalities();
        assert!(s.pass());
        assert!(s.degrees.iter().all(|d| d.betti == d.cells));
    }

    #[test]
    fn display_forms() {
        assert_eq!(group(2, &[]).to_string(), "Z^2");
        assert_eq!(group(1, &[2]).to_string(), "Z ⊕ Z/2");
        assert_eq!(group(0, &[2, 4]).to_string(), "Z/2 ⊕ Z/4");
        assert_eq!(HomologyGroup::zero().to_string(), "0");
    }
}
