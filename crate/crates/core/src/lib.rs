//! Potentially non-terminating recursive functions as least fixpoints over
//! flat lifted domains.
//!
//! - [`flatdomain`]: `B⊥`, its flat order, and finite function tables.
//! - [`functional`]: an expression language whose bodies denote monotone
//!   functionals by construction.
//! - [`kleene`]: Kleene approximants, stabilization witnesses, traces, and
//!   the guarded recursive realization.
//! - [`cpo_checker`]: brute-force verification of the fixpoint theorem on
//!   finite function spaces.
//! - [`imp`]: an imperative language with fixpoint `while` semantics and a
//!   big-step oracle.

pub mod cpo_checker;
pub mod flatdomain;
pub mod functional;
pub mod imp;
pub mod kleene;
pub mod random;

pub use cpo_checker::{
    check_continuous, check_monotone, check_tarski, iterates_are_chain, least_fixpoint_bruteforce,
    CheckError, CheckReport, Counterexample, FiniteFunSpace, GraphFunctional, GraphPair,
    SpaceBounds, Verdict,
};
pub use flatdomain::{
    chain_lub, fun_leq, is_ascending, leq, DomainError, FiniteFunTable, Functional, Partial,
};
pub use functional::{
    eval_step, f_fact, to_table_functional, Approximation, BinOp, EvalError, FunExpr,
};
pub use imp::{bigstep, denot_run, parse, pretty, AExp, BExp, Com, ImpError, State};
pub use kleene::{approx, fix, iterate, run_unbounded, trace, FixOutcome, IterTrace};
