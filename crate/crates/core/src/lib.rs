//! berglab — a numerical laboratory for L² metrics on spaces of holomorphic
//! sections and the curvature of the Hermitian bundles they form.
//!
//! The library builds weighted Bergman bases over planar domains and over ℙ¹
//! in an affine chart, assembles their Gram matrices under a family of weight
//! potentials φ(t,z), differentiates the resulting Gram field in the base
//! variable t, and certifies positivity properties (Nakano, Griffiths) of the
//! Chern curvature together with the classical identities relating it to the
//! fiberwise complex Hessian of φ.
//!
//! Everything is desk scale and deterministic: quadrature rules are fixed
//! tensor rules, reductions are pairwise in a fixed order, and reports are
//! byte-identical across runs on the same platform.

pub mod bergman;
pub mod bundle;
pub mod error;
pub mod fixtures;
pub mod kahlerpath;
pub mod linalg;
pub mod num;
pub mod projbundle;
pub mod quadrature;
pub mod scenario;
pub mod weights;

pub use error::{Error, Result};
pub use num::C64;
