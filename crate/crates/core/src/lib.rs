//! Exact computational commutative algebra over group algebras
//! R = F_q[x_1..x_d][G] of finite abelian groups.
//!
//! The crate is `no_std` (it needs only `alloc`). Layers, bottom up:
//!
//! * [`field`] and [`ring`]: finite fields, the rings Λ and R, norms and
//!   automorphisms.
//! * [`groebner`]: Buchberger's algorithm for submodules of free R-modules,
//!   syzygies, colon ideals, saturation and Krull dimension.
//! * [`module`]: finitely presented modules, Hom, duals, Ext, exterior
//!   powers, Fitting ideals, torsion and pseudo-null parts.
//! * [`complex`]: bounded complexes of free modules, cones, duality,
//!   determinant trivializations and the Ψ map on exterior powers of H^1.
//! * [`local`]: localization at monomial primes.
//! * [`scenario`]: random scenario generation and the verification suites.

#![no_std]

extern crate alloc;

pub mod complex;
pub mod error;
pub mod field;
pub mod groebner;
pub mod local;
pub mod matrix;
pub mod module;
pub mod report;
pub mod rng;
pub mod scenario;

pub use error::{Error, Result};
pub use field::Field;
pub use ring::{Automorphism, Mono, MonoOrder, Ring, RingElem, RingSpec, TermOrder};

pub mod ring;
