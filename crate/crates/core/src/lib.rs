//! Exact computer algebra for polynomial symplectomorphisms and Weyl algebra
//! automorphisms: sparse polynomial arithmetic over exact rings, the height
//! metric and power-series topology, normal-ordered Weyl arithmetic with
//! characteristic-p center machinery, terminating star products and lifting
//! of tame symplectomorphisms, gauge normalization of truncated automorphisms,
//! and a constructive tame-approximation loop with exact certificates.

pub mod approx;
pub mod coeff;
pub mod corpus;
pub mod error;
pub mod gauge;
pub mod lift;
pub mod matrix;
pub mod reference;
pub mod monomial;
pub mod poly;
pub mod star;
pub mod suite;
pub mod symplectic;
pub mod weyl;

pub use coeff::{Coeff, Ring, ScalarRing};
pub use error::{Error, Result};
pub use monomial::Monomial;
pub use poly::{jacobian_det, Degree, Height, Poly, VarNames};
