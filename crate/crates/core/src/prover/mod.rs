//! Typed rewriting for string-diagram-style equalities between intertwiners.

pub mod numeric;
pub mod parse;
pub mod rules;
pub mod script;
pub mod term;

pub use parse::{parse_position, parse_term};
pub use rules::{apply_rule, Direction, RULES};
pub use script::{run_script, ProofScript, PENTAGON, RunResult, Step, Verdict};
pub use term::{normalize, typecheck, FormalObject, Gen, ObjExpr, Term};
