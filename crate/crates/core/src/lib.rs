//! Exact-arithmetic cellular homology engine.
//!
//! Everything here is computed over the integers (or exact rationals); no
//! floating point enters any mathematical path. The crate is organized
//! bottom-up:
//!
//! * [`matrix`] — dense arbitrary-precision integer matrices with
//!   fraction-free rank and determinant computation,
//! * [`arith`] — gcd utilities, including the totient-sum identity,
//! * [`smith`] — Smith normal form with explicit unimodular transforms and
//!   the minor-gcd determinant divisors,
//! * [`chain`] — chain complexes of free abelian groups and their homology
//!   (integral, with coefficients, Betti numbers, Euler characteristic,
//!   Poincaré polynomial, Morse inequalities),
//! * [`cw`] — CW complexes with attaching degrees, standard complexes, and
//!   products,
//! * [`morse`] — filtered complexes, sublevel and interval invariants,
//!   perturbation models, and iteration-sequence analyzers,
//! * [`nerve`] — nerves of finite covers and simplicial chain complexes,
//! * [`spaces`] — holonomy tables, Künneth products, and the exponential
//!   growth classifier,
//! * [`io`] — the JSON file formats consumed and produced by the CLI.
//!
//! All public types are immutable after construction and safe to share
//! across threads.

pub mod arith;
pub mod chain;
pub mod cw;
pub mod io;
pub mod level;
pub mod matrix;
pub mod morse;
pub mod nerve;
pub mod poly;
pub mod smith;
pub mod spaces;

pub use chain::{ChainComplex, HomologyGroup};
pub use cw::CWComplex;
pub use matrix::IntMatrix;
pub use smith::SnfResult;
