//! Exact, desk-scale computational algebra for crossed modules, crossed
//! complexes, double groupoids with connections, and cubical collapsing.
//!
//! Everything here is exact integer / finite-table arithmetic: words in free
//! groups, finite groups by multiplication table, bounded enumeration of
//! finitely presented groups, group rings, Smith normal forms, groupoid
//! presentations and pushouts, Fox derivatives, the quintuple double groupoid
//! of a crossed module, tensor products of crossed complexes, and collapse
//! certificates for subcomplexes of the n-cube.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything is safe to share across threads.

pub mod crs;
pub mod cube;
pub mod dg;
pub mod error;
pub mod fcm;
pub mod fox;
pub mod groupoid;
pub mod matrix;
pub mod presentation;
pub mod ring;
pub mod table;
pub mod text;
pub mod word;
pub mod xmod;

pub use error::{AlgebraError, CubeError, DgError, GroupoidError, ParseError, XmodError};
pub use matrix::{smith_normal_form, IntMatrix, SmithDecomposition};
pub use presentation::{enumerate_fp_group, EnumeratedGroup, GroupPresentation};
pub use ring::{GroupRingElement, RingMatrix};
pub use table::FiniteGroupTable;
pub use word::{free_reduce, FreeWord};

/// Default element bound for fp-group enumeration, overridable via the
/// `XKIT_BOUND` environment variable.
pub const DEFAULT_BOUND: usize = 4096;

/// Reads `XKIT_BOUND` falling back to [`DEFAULT_BOUND`].
pub fn default_bound() -> usize {
    std::env::var("XKIT_BOUND")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BOUND)
}
