//! Exact Hopf algebroids over finite base spaces.
//!
//! The central construction is the twisted tensor product `G⋉U(𝔟)` of a
//! finite groupoid `G` with the truncated enveloping algebras of a bundle of
//! Lie algebras `𝔟` on which `G` acts. On top of it the crate checks the
//! Hopf-algebroid axioms, extracts primitive and grouplike structure,
//! rebuilds the spectral groupoid with its action, and decides whether the
//! comparison map `Θ` is an isomorphism.

pub mod algebroid;
pub mod analysis;
pub mod enveloping;
pub mod exact;
pub mod groupoid;
pub mod lie;
pub mod model;
