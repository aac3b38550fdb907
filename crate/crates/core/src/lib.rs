//! Exact combinatorics of maximal sum-free sets in finite abelian groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`] and [`set`]: groups as products of cyclic groups, elements as
//!   mixed-radix indices, subsets as bitsets.
//! * [`sumfree`]: predicates and exhaustive enumeration of (maximal, distinct)
//!   sum-free sets.
//! * [`loopgraph`]: link graphs with typed edges and loops, and the graph
//!   operations used to lift constructions to products.
//! * [`mis`]: exact maximal independent set counting and classical bounds.
//! * [`certified`]: rounding-safe evaluation of real-valued bounds.
//! * [`constructions`]: the lower-bound constructions and their checks.
//! * [`verify`]: exhaustive structure checks at small scale.
//! * [`caps`]: complete caps in binary projective spaces.

pub mod budget;
pub mod caps;
pub mod certified;
pub mod constructions;
pub mod error;
pub mod group;
pub mod loopgraph;
pub mod mis;
pub mod set;
pub mod sumfree;
pub mod util;
pub mod verify;

pub use budget::Budget;
pub use error::{Error, Result};
pub use group::{GroupElement, GroupSpec, GroupType};
pub use set::ElementSet;
