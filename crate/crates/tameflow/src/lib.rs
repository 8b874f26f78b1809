//! Simplicial flows on ordered complexes and their Morse data.
//!
//! The crate is organized around six pieces that build on each other:
//!
//! * [`complex`] — finite combinatorial simplicial complexes and the standard
//!   constructions (closure, star/link, join, cone, suspension, barycentric
//!   subdivision, nerves of posets).
//! * [`homology`] — integer simplicial homology via Smith normal form,
//!   Poincaré polynomials of complexes and pairs, and the `(1+t)`-divisibility
//!   order used by Morse-inequality certificates.
//! * [`flow`] — the closed-form canonical flow on an ordered simplex, its
//!   gluing over a whole complex, limits, Lyapunov functions, linearization,
//!   and the asymptotic geometry of stable/unstable strata.
//! * [`conley`] — dynamical orientations, unstable links, Morse polynomials
//!   and Morse inequalities of simplicial flows, and the subdivision flow
//!   induced by face dimension.
//! * [`poset_morse`] — Morse theory on finite posets and regular CW face
//!   posets: admissible functions, violation sets, coherence, the `C±`
//!   conditions, regular points, and both Morse-inequality variants.
//! * [`gap`] — the gap between linear subspaces, graph/slope formulas,
//!   exponential decay bounds under symmetric linear flows, Grassmannian
//!   coordinate flows, and the spectral clustering ratio.

pub mod complex;
pub mod conley;
pub mod flow;
pub mod gap;
pub mod homology;
pub mod poset_morse;

mod error;

pub use error::{Error, Result};
