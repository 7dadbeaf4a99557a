//! Trace-power permutation polynomials over cubic field towers.
//!
//! The crate builds desk-scale towers `F_p ⊂ F_q ⊂ F_{q^n}` ([`ffield`]),
//! evaluates linearized and trace-power polynomials ([`qpoly`]), decides the
//! permutation property through the determinant criterion for the canonical
//! form `A_1^{m_1} + Σ u_i A_i^{m_i}` ([`wuyuan`]), instantiates six
//! parametric permutation families with closed-form determinants and
//! compositional inverses ([`families`]), and double-checks everything by
//! brute force ([`oracle`]).

pub mod families;
pub mod ffield;
pub(crate) mod linalg;
pub mod oracle;
pub mod qpoly;
pub mod wuyuan;

pub use families::{Family, FamilyError, FamilyParams, InverseCoeffTable, Prediction};
pub use ffield::{ArithKind, Elem, FieldCtx, FieldError};
pub use oracle::{LinearizedPerms, MuEquation, OracleError, QmWitness};
pub use qpoly::{LinearizedPoly, TracePowerPoly};
pub use wuyuan::{InverseForm, WuYuanError, WuYuanSpec};
