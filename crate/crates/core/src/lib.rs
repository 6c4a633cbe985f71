//! Exact intersection theory and Chern-class bookkeeping for sheaves on
//! birationally ruled surfaces.
//!
//! A surface is `F(g, e)`, the geometrically ruled surface over a genus-`g`
//! curve with a section of self-intersection `-e`, blown up at general
//! points. On top of the Néron–Severi lattice ([`lattice`]) the crate provides
//! Riemann–Roch bookkeeping ([`invariants`]), polarizations with
//! `H·(K_S + f) < 0` ([`polarization`]), splitting-type strata on `P¹`
//! ([`strata`]) and the reduction of Chern data to the geometrically ruled
//! case with dimension audits ([`reduction`]).
//!
//! ```
//! use ruled_moduli::{ChernData, RuledSurface};
//! use ruled_moduli::invariants::stack_dim;
//! use ruled_moduli::reduction::run_reduction;
//!
//! let s = RuledSurface::geometrically_ruled(0, 0)?.blow_up();
//! let c = ChernData::on(&s, 2, vec![1, 0, -1], 1)?;
//! assert_eq!(stack_dim(&s, &c)?, 1);
//!
//! let trace = run_reduction(&s, &c)?;
//! assert!(trace.audits_passed());
//! assert_eq!((trace.base.d, trace.base.k_deg, trace.base.l_deg), (1, -1, 1));
//! # Ok::<(), ruled_moduli::Error>(())
//! ```
//!
//! A guide with worked examples lives in the `book/` directory; its Rust
//! snippets run as doctests of this crate.

pub mod config;
pub mod error;
pub mod invariants;
pub mod lattice;
pub mod polarization;
pub mod reduction;
pub mod report;
pub mod strata;

pub use config::{parse_config, Config, ConfigError, PolarizationChoice};
pub use error::{Error, Result};
pub use invariants::ChernData;
pub use lattice::{DivisorClass, RuledSurface};
pub use polarization::Ampleness;
pub use strata::SplittingType;

// Run the book's code listings as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
    #[doc = include_str!("../../../book/src/polarization.md")]
    mod polarization {}
    #[doc = include_str!("../../../book/src/strata.md")]
    mod strata {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
