//! Exact-arithmetic construction of finitely generated graded nil algebras
//! of subexponential growth on two generators.

pub(crate) mod bignum;
pub mod cli;
pub mod echelon;
pub mod error;
pub mod field;
pub mod growth;
pub mod linalg;
pub mod power;
pub mod schedule;
pub mod suites;
pub mod tower;
pub mod vector;
pub mod word;

pub use echelon::EchelonSubspace;
pub use error::{Error, Result};
pub use field::FieldSpec;
pub use power::WordSet;
pub use schedule::{AlphaSpec, SparseSchedule};
pub use tower::{ProjectionTower, TowerParams};
pub use vector::FreeVector;
pub use word::{binary_expansion, enumerate_words, Word};
