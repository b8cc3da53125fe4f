// Domain guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod figures;
pub mod gamma;
pub mod moments;
pub mod quadrature;
pub mod search;
pub mod squeeze;
pub mod survey;
