//! Character complexity of quantum circuits.
//!
//! A circuit is read as an element `u` of a finite group `G` of unitaries
//! generated by its gate set. The character table of `G` gives the
//! complexity `C(u) = (1/|G|) sum_i |chi_i(u)|^2 / d_i`, a class function in
//! `(0, 1]`, and a decomposition of `u` over irreducible characters that
//! supports a truncated simulation.
//!
//! ```
//! use charcom::{catalog::named_group, chartable::character_table, complexity::complexity};
//! use charcom::group::ClosureOptions;
//!
//! let g = named_group("pauli1", ClosureOptions::default()).unwrap();
//! let t = character_table(&g).unwrap();
//! assert!((complexity(&g, &t, g.identity()) - 0.75).abs() < 1e-12);
//! ```

pub mod catalog;
pub mod chartable;
pub mod circuit;
pub mod complexity;
pub mod emit;
pub mod error;
pub mod experiments;
pub mod fmt;
pub mod group;
pub mod irrep;
pub mod matrix;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
