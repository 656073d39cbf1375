//! Exact computational algebra for the Tate cohomology of cyclic 3-groups.
//!
//! The crate computes Tate cohomology of `C_3` and `C_9` acting on graded
//! (anti)commutative algebras, the `C_3`-invariants of
//! `k[d1,d2,d3] (x) Lambda[c1,c2,c3]`, Groebner bases over `F_3`, the Serre
//! spectral sequence bookkeeping for `C_3 -> C_9 -> C_3`, finite-stage
//! completion checks and the Hazewinkel generators of a formal group law
//! over `Z_3[zeta_9]`.

pub mod completion_lab;
pub mod cyclic_cohomology;
pub mod fgl_detect;
pub mod gca;
pub mod groebner;
pub mod invariants;
pub mod polyparse;
pub mod report;
pub mod rings;
pub mod serre;
pub mod suites;

pub use rings::Zmod;

/// The prime field `F_3`.
pub type F3 = Zmod<3>;
