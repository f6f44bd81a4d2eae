//! Exact-arithmetic builders and verifiers for two shift-space constructions
//! over the alphabet `[0, 1]`, plus a brute-force engine for forward-invariant
//! equivalence relations on finite systems.
//!
//! * [`inverse`]: a one-sided point whose orbit closure is pointwise rigid
//!   while the inverse shift has a non-recurrent point.
//! * [`product`]: a pair of two-sided points whose union of orbit closures is
//!   deterministic but whose product pair is not forward recurrent.
//! * [`recurrence`]: finite-window metric certificates for recurrence,
//!   pair separation and escape to the zero point.
//! * [`oracle`]: exhaustive checks on finite endomaps.

mod block;
mod error;
mod report;
mod symbol;

pub mod inverse;
pub mod oracle;
pub mod product;
pub mod recurrence;
pub mod tdseq;

pub use block::{Block, BlockBuilder};
pub use error::{Error, Result};
pub use report::{CheckReport, Verdict};
pub use symbol::Symbol;
