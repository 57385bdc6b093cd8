//! Computations in the central Fourier algebra `ZA(G)` of finite groups:
//! character tables, fusion rules, the diagonal and amenability constants,
//! the `SU(2)` point derivations, and discrete hypergroups.

pub mod amenability;
pub mod cache;
pub mod catalog;
pub mod char_table;
pub mod error;
pub mod group;
pub mod hypergroup;
pub mod numeric;
pub mod spec;
pub mod su2;
pub mod za;

pub use char_table::{compute_character_table, CharacterTable, TableOptions};
pub use error::{Error, Result};
pub use group::{conjugacy_classes, direct_product, ConjugacyData, FiniteGroup};
pub use num_complex::Complex64;
pub use za::{CentralElement, ClassFunction, DiagonalElement, FusionTensor};
