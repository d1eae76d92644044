//! Exact p-adic arithmetic, characters, Bruhat functions, local and global
//! zeta integrals, desk-scale adeles and finite fields.

pub mod adele;
pub mod angle;
pub mod arith;
pub mod bruhat;
pub mod characters;
pub mod cyclotomic;
pub mod error;
pub mod finite_field;
pub mod gamma;
pub mod global;
pub mod local_zeta;
pub mod padic;
pub mod quadrature;
pub mod quadratic;

pub use error::{Error, Result};
pub use padic::{PAbsValue, PadicNumber};
