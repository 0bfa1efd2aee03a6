//! Holomorphic expressions in one complex variable `tau`, evaluated as
//! order-2 jets.

mod eval;
mod expr;
mod jet;
mod parser;

pub use eval::{eval_jet, eval_jet_on_sheet, CONTINUATION_STEP};
pub use expr::{Expr, Func};
pub use jet::{Jet2, JetOp};
pub use parser::parse;
