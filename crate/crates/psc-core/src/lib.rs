// NaN must fail the positivity and range checks, so they are written negated.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod action;
pub mod check;
pub mod desc;
pub mod disks;
pub mod gen;
pub mod lex;
pub mod perm;
pub mod tol;
pub mod tree;
pub mod warp;
