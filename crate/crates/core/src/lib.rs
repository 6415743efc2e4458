//! Exact intersection theory and polyhedral cones on algebraic surfaces.
//!
//! Everything is computed over `BigRational`. A [`lattice::SurfaceLattice`]
//! carries the intersection form and canonical class; [`cone::Cone`] gives
//! extremal rays, duals and membership certificates under that form.
//! [`delpezzo`], [`covers`] and [`pqsurf`] build the lattices and curve
//! rosters of the three kinds of surfaces in the bundled [`catalog`], whose
//! verifier replays every claim of an entry and reports negative curves.
//!
//! ```
//! use conelab::catalog::{bundled_catalog, verify_entry};
//!
//! let entry = bundled_catalog().into_iter().find(|e| e.id == "inoue").unwrap();
//! let report = verify_entry(&entry);
//! assert!(report.passed());
//! assert_eq!(conelab::catalog::render_multiset(&report.negatives), "2(-1,1), (-1,2)");
//! ```

// Matrix code reads better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod cli;
pub mod cone;
pub mod covers;
pub mod delpezzo;
pub mod lattice;
pub mod linalg;
pub mod pqsurf;
pub mod rational;
