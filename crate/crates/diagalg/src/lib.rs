//! Exact-arithmetic algebra of beaded chord diagrams on handlebody
//! skeletons, together with a degree-truncated Kontsevich integral for
//! bottom tangles presented by generator expressions or sliced tangles.
//!
//! The main pieces:
//!
//! * [`fgroup`] — free groups as reduced words (bead colors, homotopy
//!   classes);
//! * [`word`], [`lin`], [`relations`] — tensor words, linear
//!   combinations, and the finite-window relation oracle;
//! * [`jacobi`] — unitrivalent graphs and STU resolution into chords;
//! * [`morab`] — the monoidal category of diagrams in handlebodies,
//!   its Hopf/Casimir generators and normal forms;
//! * [`ncseries`] — truncated noncommutative series, Kohno–Drinfeld
//!   algebras and associator checks;
//! * [`quasihopf`] — the ribbon quasi-Hopf structure built from an
//!   associator, with transmutation;
//! * [`tangle`] — diagrams on polarized 1-manifolds, cabling, sliced
//!   tangles, anomalies and the cube-presentation evaluator;
//! * [`genexpr`] — generator expressions and the integral's values on
//!   them;
//! * [`hair`] — the bead-to-hairy-legs substitution;
//! * [`weights`] — weight systems for quadratic Lie algebras.

#![forbid(unsafe_code)]

pub mod fgroup;
pub mod genexpr;
pub mod hair;
pub mod jacobi;
pub mod lin;
pub mod linalg;
pub mod morab;
pub mod ncseries;
pub mod quasihopf;
pub mod rat;
pub mod relations;
pub mod report;
pub mod tangle;
pub mod weights;
pub mod word;

pub use fgroup::{FreeWord, GroupHom};
pub use lin::DiagLin;
pub use morab::MorAB;
pub use rat::{q, qi, Q};
pub use relations::{Verdict, Window};
pub use word::{Half, Sym, TensorWord};
