//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

pub mod exprs;
pub mod jacobi;
pub mod mpfr;
pub mod tor;
