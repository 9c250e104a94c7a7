//! Nerves of finite covers.
//!
//! The nerve of a cover has one vertex per nonempty cover set and one
//! simplex per subcollection with nonempty common intersection. Whether the
//! cover is good (all intersections contractible) is the caller's
//! responsibility; the nerve itself is pure combinatorics.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use thiserror::Error;

use crate::chain::{ChainComplex, ChainError};
use crate::matrix::IntMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NerveError {
    #[error("cover set {set:?} contains {element:?}, which is not in the ground set")]
    ElementNotInGround { set: String, element: String },
    #[error("every cover set is empty; the nerve would have no vertices")]
    AllSetsEmpty,
    #[error("simplex {simplex:?} is missing its face {face:?}: family is not downward closed")]
    ClosureViolation { simplex: String, face: String },
    #[error("simplex references vertex index {index}, but there are only {count} vertices")]
    VertexOutOfRange { index: usize, count: usize },
    #[error(
        "{count} sets share element {element:?}; the nerve would have 2^{count} simplices, which is not tractable"
    )]
    StarTooLarge { element: String, count: usize },
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// A finite cover: a ground set of element ids and named subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    ground: BTreeSet<String>,
    sets: BTreeMap<String, BTreeSet<String>>,
}

impl Cover {
    pub fn new<G, S, E>(ground: G, sets: S) -> Result<Self, NerveError>
    where
        G: IntoIterator<Item = E>,
        S: IntoIterator<Item = (E, Vec<E>)>,
        E: Into<String>,
    {
        let ground: BTreeSet<String> = ground.into_iter().map(Into::into).collect();
        let mut named: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (name, elements) in sets {
            let name = name.into();
            let elements: BTreeSet<String> = elements.into_iter().map(Into::into).collect();
            if let Some(stray) = elements.iter().find(|e| !ground.contains(*e)) {
                return Err(NerveError::ElementNotInGround {
                    set: name,
                    element: stray.clone(),
                });
            }
            named.insert(name, elements);
        }
        Ok(Self {
            ground,
            sets: named,
        })
    }

    pub fn ground(&self) -> &BTreeSet<String> {
        &self.ground
    }

    pub fn sets(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.sets
    }
}

/// An abstract simplicial complex over an ordered vertex list; simplices are
/// strictly increasing index vectors and the family is downward closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    simplices: BTreeSet<Vec<usize>>,
}

impl SimplicialComplex {
    /// Validates index bounds and downward closure.
    pub fn new(
        vertices: Vec<String>,
        simplices: BTreeSet<Vec<usize>>,
    ) -> Result<Self, NerveError> {
        for simplex in &simplices {
            for &v in simplex {
                if v >= vertices.len() {
                    return Err(NerveError::VertexOutOfRange {
                        index: v,
                        count: vertices.len(),
                    });
                }
            }
            if simplex.len() > 1 {
                for omit in 0..simplex.len() {
                    let face: Vec<usize> = simplex
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != omit)
                        .map(|(_, &v)| v)
                        .collect();
                    if !simplices.contains(&face) {
                        return Err(NerveError::ClosureViolation {
                            simplex: format!("{simplex:?}"),
                            face: format!("{face:?}"),
                        });
                    }
                }
            }
        }
        Ok(Self {
            vertices,
            simplices,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn simplices(&self) -> &BTreeSet<Vec<usize>> {
        &self.simplices
    }

    pub fn top_dimension(&self) -> usize {
        self.simplices
            .iter()
            .map(|s| s.len() - 1)
            .max()
            .unwrap_or(0)
    }

    pub fn simplices_of_dim(&self, dim: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.simplices.iter().filter(move |s| s.len() == dim + 1)
    }

    /// The simplicial chain complex with the alternating-face sign rule
    /// under the fixed vertex order: the i-th face of an ordered simplex
    /// carries coefficient (-1)^i.
    pub fn chain_complex(&self) -> Result<ChainComplex, NerveError> {
        let top = self.top_dimension();
        let by_dim: Vec<Vec<&Vec<usize>>> = (0..=top)
            .map(|d| self.simplices_of_dim(d).collect())
            .collect();
        let index_by_dim: Vec<BTreeMap<&Vec<usize>, usize>> = by_dim
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, &s)| (s, i)).collect())
            .collect();
        let counts: Vec<usize> = by_dim.iter().map(|v| v.len()).collect();
        let mut boundaries = Vec::new();
        for d in 1..=top {
            let mut m = IntMatrix::zeros(counts[d - 1], counts[d]);
            for (col, simplex) in by_dim[d].iter().enumerate() {
                for omit in 0..simplex.len() {
                    let face: Vec<usize> = simplex
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != omit)
                        .map(|(_, &v)| v)
                        .collect();
                    let row = index_by_dim[d - 1][&face];
                    let sign = if omit % 2 == 0 { 1 } else { -1 };
                    m.set(row, col, BigInt::from(sign));
                }
            }
            boundaries.push(m);
        }
        Ok(ChainComplex::new(counts, boundaries)?)
    }
}

/// The nerve of a cover: simplices are exactly the subcollections of
/// nonempty sets whose intersection is nonempty. Empty sets contribute no
/// vertex; a cover of only empty sets is rejected.
pub fn nerve_complex(cover: &Cover) -> Result<SimplicialComplex, NerveError> {
    let vertices: Vec<String> = cover
        .sets()
        .iter()
        .filter(|(_, elements)| !elements.is_empty())
        .map(|(name, _)| name.clone())
        .collect();
    if vertices.is_empty() {
        return Err(NerveError::AllSetsEmpty);
    }
    let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
    // Every subcollection with a common element is a simplex, and every
    // simplex arises this way: enumerate each element's star and take all
    // of its nonempty subsets.
    for element in cover.ground() {
        let star: Vec<usize> = vertices
            .iter()
            .enumerate()
            .filter(|(_, name)| cover.sets()[*name].contains(element))
            .map(|(i, _)| i)
            .collect();
        if star.len() > 24 {
            return Err(NerveError::StarTooLarge {
                element: element.clone(),
                count: star.len(),
            });
        }
        for mask in 1u64..(1 << star.len()) {
            let subset: Vec<usize> = star
                .iter()
                .enumerate()
                .filter(|&(bit, _)| mask & (1 << bit) != 0)
                .map(|(_, &v)| v)
                .collect();
            simplices.insert(subset);
        }
    }
    SimplicialComplex::new(vertices, simplices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover(ground: &[&str], sets: &[(&str, &[&str])]) -> Cover {
        Cover::new(
            ground.iter().copied(),
            sets.iter().map(|&(n, els)| (n, els.to_vec())),
        )
        .unwrap()
    }

    #[test]
    fn single_set_is_a_vertex() {
        let c = cover(&["x"], &[("U", &["x"])]);
        let nerve = nerve_complex(&c).unwrap();
        assert_eq!(nerve.vertices(), &["U".to_string()]);
        assert_eq!(nerve.simplices().len(), 1);
    }

    #[test]
    fn two_overlapping_intervals_give_an_edge() {
        let c = cover(
            &["1", "2", "3"],
            &[("U", &["1", "2"]), ("V", &["2", "3"])],
        );
        let nerve = nerve_complex(&c).unwrap();
        assert_eq!(nerve.simplices_of_dim(1).count(), 1);
        let chain = nerve.chain_complex().unwrap();
        assert_eq!(chain.homology(0).free_rank, 1);
        assert!(chain.homology(1).is_zero());
    }

    #[test]
    fn three_arcs_make_a_hollow_triangle() {
        // Pairwise intersections, empty triple intersection.
        let c = cover(
            &["ab", "bc", "ca"],
            &[
                ("A", &["ab", "ca"]),
                ("B", &["ab", "bc"]),
                ("C", &["bc", "ca"]),
            ],
        );
        let nerve = nerve_complex(&c).unwrap();
        assert_eq!(nerve.simplices_of_dim(0).count(), 3);
        assert_eq!(nerve.simplices_of_dim(1).count(), 3);
        assert_eq!(nerve.simplices_of_dim(2).count(), 0);
        let chain = nerve.chain_complex().unwrap();
        // Independent route for the triangle boundary: the 3x3 boundary
        // matrix has rank 2, so b_0 = 3 - 2 = 1 and b_1 = 3 - 2 = 1.
        assert_eq!(chain.boundary(1).rank_over_rationals(), 2);
        assert_eq!(chain.homology(0).free_rank, 1);
        assert_eq!(chain.homology(1).free_rank, 1);
    }

    #[test]
    fn common_element_gives_a_full_simplex() {
        let c = cover(
            &["p", "q"],
            &[("A", &["p"]), ("B", &["p", "q"]), ("C", &["p"])],
        );
        let nerve = nerve_complex(&c).unwrap();
        assert_eq!(nerve.simplices_of_dim(2).count(), 1);
        let chain = nerve.chain_complex().unwrap();
        assert_eq!(chain.homology(0).free_rank, 1);
        for k in 1..=2 {
            assert!(chain.homology(k).is_zero(), "H_{k} should vanish");
        }
    }

    #[test]
    fn disjoint_vertices_count_components() {
        let c = cover(&["x", "y"], &[("A", &["x"]), ("B", &["y"])]);
        let chain = nerve_complex(&c).unwrap().chain_complex().unwrap();
        assert_eq!(chain.homology(0).free_rank, 2);
    }

    #[test]
    fn empty_cover_rejected() {
        let c = cover(&["x"], &[("A", &[]), ("B", &[])]);
        assert_eq!(nerve_complex(&c).unwrap_err(), NerveError::AllSetsEmpty);
    }

    #[test]
    fn stray_element_rejected() {
        assert!(matches!(
            Cover::new(["x"], [("A", vec!["y"])]),
            Err(NerveError::ElementNotInGround { .. })
        ));
    }

    #[test]
    fn closure_violation_rejected() {
        let err = SimplicialComplex::new(
            vec!["a".into(), "b".into()],
            BTreeSet::from([vec![0, 1]]),
        )
        .unwrap_err();
        assert!(matches!(err, NerveError::ClosureViolation { .. }));
    }

    #[test]
    fn random_downward_closed_families_satisfy_chain_condition() {
        // Pseudo-random generator families over at most 7 vertices; the
        // chain complex constructor validates d∘d = 0 on every one.
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let n = (next() % 7 + 1) as usize;
            let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
            for _ in 0..(next() % 6 + 1) {
                let mask = next() % (1 << n);
                let subset: Vec<usize> = (0..n).filter(|&b| mask & (1 << b) != 0).collect();
                if subset.is_empty() {
                    continue;
                }
                // Close downward: insert every nonempty sub-subset.
                for sub_mask in 1u64..(1 << subset.len()) {
                    let face: Vec<usize> = subset
                        .iter()
                        .enumerate()
                        .filter(|&(bit, _)| sub_mask & (1 << bit) != 0)
                        .map(|(_, &v)| v)
                        .collect();
                    simplices.insert(face);
                }
            }
            if simplices.is_empty() {
                simplices.insert(vec![0]);
            }
            let complex = SimplicialComplex::new(vertices, simplices).unwrap();
            complex.chain_complex().expect("d∘d = 0 must hold");
        }
    }

    #[test]
    fn homology_invariant_under_vertex_relabeling() {
        // Renaming the sets permutes the vertex order and hence the
        // boundary matrix, but no homology group moves. A two-edge path:
        // the middle set sorts first after renaming, changing the matrix.
        let original = cover(
            &["x", "y"],
            &[("A", &["x"]), ("B", &["x", "y"]), ("C", &["y"])],
        );
        let renamed = cover(
            &["x", "y"],
            &[("B", &["x"]), ("A", &["x", "y"]), ("C", &["y"])],
        );
        let a = nerve_complex(&original).unwrap().chain_complex().unwrap();
        let b = nerve_complex(&renamed).unwrap().chain_complex().unwrap();
        assert_ne!(a.boundary(1), b.boundary(1), "matrices should differ");
        for k in 0..=1 {
            assert_eq!(a.homology(k), b.homology(k));
        }
    }

    #[test]
    fn full_two_simplex_is_contractible() {
        let simplices = BTreeSet::from([
            vec![0],
            vec![1],
            vec![2],
            vec![0, 1],
            vec![0, 2],
            vec![1, 2],
            vec![0, 1, 2],
        ]);
        let k = SimplicialComplex::new(
            vec!["a".into(), "b".into(), "c".into()],
            simplices,
        )
        .unwrap();
        let chain = k.chain_complex().unwrap();
        assert_eq!(chain.homology(0).free_rank, 1);
        assert!(chain.homology(1).is_zero());
        assert!(chain.homology(2).is_zero());
    }
}
