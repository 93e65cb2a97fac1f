//! A small imperative language whose `while` loops mean least fixpoints.
//!
//! [`denot_run`] interprets a loop as the Kleene approximant of its loop
//! functional on `State → State⊥`; [`bigstep`] searches for a natural
//! semantics derivation of bounded height. The two are meant to agree.

mod parse;
mod pretty;

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flatdomain::Partial;
use crate::functional::{STACK_RED_ZONE, STACK_SEGMENT};

pub use parse::parse;
pub use pretty::pretty;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImpError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undefined variable {0}")]
    UndefinedVariable(String),
    #[error("integer overflow in {0}")]
    Overflow(String),
    #[error("invalid identifier {0:?}")]
    InvalidIdentifier(String),
}

pub const KEYWORDS: [&str; 12] = [
    "skip", "if", "then", "else", "end", "while", "do", "done", "true", "false", "not", "and",
];

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&s)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AExp {
    IntLit(i64),
    Var(String),
    Plus(Box<AExp>, Box<AExp>),
    Minus(Box<AExp>, Box<AExp>),
    Times(Box<AExp>, Box<AExp>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BExp {
    BoolLit(bool),
    Eq(AExp, AExp),
    Le(AExp, AExp),
    Not(Box<BExp>),
    And(Box<BExp>, Box<BExp>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Com {
    Skip,
    Assign(String, AExp),
    Seq(Box<Com>, Box<Com>),
    If(BExp, Box<Com>, Box<Com>),
    While(BExp, Box<Com>),
}

impl AExp {
    pub fn var(name: &str) -> Self {
        AExp::Var(name.to_string())
    }

    pub fn plus(l: AExp, r: AExp) -> Self {
        AExp::Plus(Box::new(l), Box::new(r))
    }

    pub fn minus(l: AExp, r: AExp) -> Self {
        AExp::Minus(Box::new(l), Box::new(r))
    }

    pub fn times(l: AExp, r: AExp) -> Self {
        AExp::Times(Box::new(l), Box::new(r))
    }
}

impl BExp {
    #[allow(clippy::should_implement_trait)]
    pub fn not(b: BExp) -> Self {
        BExp::Not(Box::new(b))
    }

    pub fn and(l: BExp, r: BExp) -> Self {
        BExp::And(Box::new(l), Box::new(r))
    }
}

impl Com {
    pub fn assign(name: &str, e: AExp) -> Self {
        Com::Assign(name.to_string(), e)
    }

    pub fn seq(a: Com, b: Com) -> Self {
        Com::Seq(Box::new(a), Box::new(b))
    }

    pub fn if_(b: BExp, t: Com, e: Com) -> Self {
        Com::If(b, Box::new(t), Box::new(e))
    }

    pub fn while_(b: BExp, body: Com) -> Self {
        Com::While(b, Box::new(body))
    }

    pub fn has_loop(&self) -> bool {
        match self {
            Com::Skip | Com::Assign(..) => false,
            Com::Seq(a, b) | Com::If(_, a, b) => a.has_loop() || b.has_loop(),
            Com::While(..) => true,
        }
    }
}

impl fmt::Display for Com {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

/// `acc := 1; while not (n = 0) do acc := acc * n; n := n - 1 done`
pub fn factorial_program() -> Com {
    Com::seq(
        Com::assign("acc", AExp::IntLit(1)),
        Com::while_(
            BExp::not(BExp::Eq(AExp::var("n"), AExp::IntLit(0))),
            Com::seq(
                Com::assign("acc", AExp::times(AExp::var("acc"), AExp::var("n"))),
                Com::assign("n", AExp::minus(AExp::var("n"), AExp::IntLit(1))),
            ),
        ),
    )
}

/// A variable store. Insertion order is kept so states print in the order
/// variables were introduced; equality ignores order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct State(IndexMap<String, i64>);

impl State {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Result<i64, ImpError> {
        self.0
            .get(name)
            .copied()
            .ok_or_else(|| ImpError::UndefinedVariable(name.to_string()))
    }

    pub fn set(&mut self, name: &str, v: i64) {
        if let Some(slot) = self.0.get_mut(name) {
            *slot = v;
        } else {
            self.0.insert(name.to_string(), v);
        }
    }

    pub fn with(mut self, name: &str, v: i64) -> Self {
        self.set(name, v);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `{"n": 5, ...}`, rejecting malformed identifiers.
    pub fn from_json(text: &str) -> Result<Self, ImpError> {
        let state: State = serde_json::from_str(text).map_err(|e| ImpError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if let Some(bad) = state.0.keys().find(|k| !is_identifier(k)) {
            return Err(ImpError::InvalidIdentifier(bad.clone()));
        }
        Ok(state)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("string keys and integer values")
    }
}

impl<const N: usize> From<[(&str, i64); N]> for State {
    fn from(pairs: [(&str, i64); N]) -> Self {
        pairs
            .into_iter()
            .fold(State::new(), |s, (k, v)| s.with(k, v))
    }
}

fn arith(
    op: &str,
    a: i64,
    b: i64,
    f: impl FnOnce(i64, i64) -> Option<i64>,
) -> Result<i64, ImpError> {
    f(a, b).ok_or_else(|| ImpError::Overflow(format!("{a} {op} {b}")))
}

pub fn aeval(e: &AExp, s: &State) -> Result<i64, ImpError> {
    match e {
        AExp::IntLit(v) => Ok(*v),
        AExp::Var(x) => s.get(x),
        AExp::Plus(l, r) => arith("+", aeval(l, s)?, aeval(r, s)?, i64::checked_add),
        AExp::Minus(l, r) => arith("-", aeval(l, s)?, aeval(r, s)?, i64::checked_sub),
        AExp::Times(l, r) => arith("*", aeval(l, s)?, aeval(r, s)?, i64::checked_mul),
    }
}

/// `and` evaluates both operands, so an undefined variable on the right is
/// reported even when the left is false.
pub fn beval(b: &BExp, s: &State) -> Result<bool, ImpError> {
    match b {
        BExp::BoolLit(v) => Ok(*v),
        BExp::Eq(l, r) => Ok(aeval(l, s)? == aeval(r, s)?),
        BExp::Le(l, r) => Ok(aeval(l, s)? <= aeval(r, s)?),
        BExp::Not(b) => Ok(!beval(b, s)?),
        BExp::And(l, r) => {
            let a = beval(l, s)?;
            let b = beval(r, s)?;
            Ok(a && b)
        }
    }
}

type StateResult = Result<Partial<State>, ImpError>;

/// `W^iterations(⊥)(s)` for the loop functional
/// `W(w)(σ) = if b(σ) then w(body(σ)) else σ`, where the body runs with
/// `body_fuel`.
pub fn loop_approx(
    cond: &BExp,
    body: &Com,
    body_fuel: usize,
    iterations: usize,
    s: State,
) -> StateResult {
    // W^k(⊥) only recurses in tail position, so the unfolding is a loop.
    let mut sigma = s;
    for _ in 0..iterations {
        if !beval(cond, &sigma)? {
            return Ok(Partial::Value(sigma));
        }
        match denot_run(body, sigma, body_fuel)? {
            Partial::Bottom => return Ok(Partial::Bottom),
            Partial::Value(next) => sigma = next,
        }
    }
    Ok(Partial::Bottom)
}

/// One application of the loop functional to `w`.
pub fn loop_step(
    cond: &BExp,
    body: &Com,
    body_fuel: usize,
    w: &mut dyn FnMut(State) -> StateResult,
    sigma: State,
) -> StateResult {
    if beval(cond, &sigma)? {
        match denot_run(body, sigma, body_fuel)? {
            Partial::Bottom => Ok(Partial::Bottom),
            Partial::Value(next) => w(next),
        }
    } else {
        Ok(Partial::Value(sigma))
    }
}

/// Denotational semantics with every loop approximated by `fuel` Kleene
/// iterations. `Bottom` means no result within the fuel.
pub fn denot_run(c: &Com, s: State, fuel: usize) -> StateResult {
    match c {
        Com::Skip => Ok(Partial::Value(s)),
        Com::Assign(x, e) => {
            let v = aeval(e, &s)?;
            Ok(Partial::Value(s.with(x, v)))
        }
        Com::Seq(a, b) => match denot_run(a, s, fuel)? {
            Partial::Bottom => Ok(Partial::Bottom),
            Partial::Value(mid) => denot_run(b, mid, fuel),
        },
        Com::If(b, t, e) => {
            if beval(b, &s)? {
                denot_run(t, s, fuel)
            } else {
                denot_run(e, s, fuel)
            }
        }
        Com::While(b, body) => loop_approx(b, body, fuel, fuel, s),
    }
}

/// Natural semantics: searches for a derivation of height at most `fuel`.
pub fn bigstep(c: &Com, s: State, fuel: usize) -> StateResult {
    if fuel == 0 {
        return Ok(Partial::Bottom);
    }
    let sub = fuel - 1;
    stacker::maybe_grow(STACK_RED_ZONE, STACK_SEGMENT, || match c {
        Com::Skip => Ok(Partial::Value(s)),
        Com::Assign(x, e) => {
            let v = aeval(e, &s)?;
            Ok(Partial::Value(s.with(x, v)))
        }
        Com::Seq(a, b) => match bigstep(a, s, sub)? {
            Partial::Bottom => Ok(Partial::Bottom),
            Partial::Value(mid) => bigstep(b, mid, sub),
        },
        Com::If(b, t, e) => {
            if beval(b, &s)? {
                bigstep(t, s, sub)
            } else {
                bigstep(e, s, sub)
            }
        }
        Com::While(b, body) => {
            // The derivation for the remaining iterations sits one level
            // deeper each time round.
            let (mut s, mut fuel) = (s, fuel);
            loop {
                if !beval(b, &s)? {
                    return Ok(Partial::Value(s));
                }
                match bigstep(body, s, fuel - 1)? {
                    Partial::Bottom => return Ok(Partial::Bottom),
                    Partial::Value(mid) => s = mid,
                }
                fuel -= 1;
                if fuel == 0 {
                    return Ok(Partial::Bottom);
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Partial::{Bottom, Value};

    fn while_true() -> Com {
        Com::while_(BExp::BoolLit(true), Com::Skip)
    }

    #[test]
    fn aeval_beval_examples() {
        let s = State::from([("x", 4)]);
        assert_eq!(
            aeval(&AExp::plus(AExp::var("x"), AExp::IntLit(1)), &s),
            Ok(5)
        );
        let zero = State::from([("x", 0)]);
        let b = BExp::not(BExp::Eq(AExp::var("x"), AExp::IntLit(0)));
        assert_eq!(beval(&b, &zero), Ok(false));
        assert_eq!(
            aeval(&AExp::var("y"), &s),
            Err(ImpError::UndefinedVariable("y".into()))
        );
        let big = AExp::times(AExp::IntLit(i64::MAX), AExp::IntLit(2));
        assert!(matches!(aeval(&big, &s), Err(ImpError::Overflow(_))));
    }

    #[test]
    fn denot_run_examples() {
        let s = State::from([("x", 1)]);
        assert_eq!(denot_run(&Com::Skip, s.clone(), 0), Ok(Value(s)));
        let out = denot_run(&factorial_program(), State::from([("n", 5)]), 10).unwrap();
        assert_eq!(out, Value(State::from([("n", 0), ("acc", 120)])));
        for fuel in [0, 1, 10, 1000] {
            assert_eq!(denot_run(&while_true(), State::new(), fuel), Ok(Bottom));
        }
    }

    #[test]
    fn factorial_needs_six_iterations() {
        // Five body runs, then one more iteration to observe the exit test.
        let n5 = State::from([("n", 5)]);
        assert_eq!(denot_run(&factorial_program(), n5.clone(), 5), Ok(Bottom));
        assert!(denot_run(&factorial_program(), n5, 6).unwrap().is_value());
    }

    #[test]
    fn bigstep_examples() {
        let s = State::from([("x", 1)]);
        assert_eq!(bigstep(&Com::Skip, s.clone(), 1), Ok(Value(s.clone())));
        assert_eq!(bigstep(&Com::Skip, s, 0), Ok(Bottom));
        let n5 = State::from([("n", 5)]);
        assert_eq!(
            bigstep(&factorial_program(), n5.clone(), 100),
            denot_run(&factorial_program(), n5, 10)
        );
        assert_eq!(bigstep(&while_true(), State::new(), 10_000), Ok(Bottom));
    }

    #[test]
    fn faults_are_errors_not_bottom() {
        let c = Com::assign("x", AExp::var("y"));
        assert_eq!(
            denot_run(&c, State::new(), 5),
            Err(ImpError::UndefinedVariable("y".into()))
        );
        assert_eq!(
            bigstep(&c, State::new(), 5),
            Err(ImpError::UndefinedVariable("y".into()))
        );
        let grow = Com::seq(
            Com::assign("x", AExp::IntLit(2)),
            Com::while_(
                BExp::BoolLit(true),
                Com::assign("x", AExp::times(AExp::var("x"), AExp::var("x"))),
            ),
        );
        assert!(matches!(
            denot_run(&grow, State::new(), 100),
            Err(ImpError::Overflow(_))
        ));
        assert!(matches!(
            bigstep(&grow, State::new(), 100),
            Err(ImpError::Overflow(_))
        ));
    }

    #[test]
    fn loop_functional_unfolds() {
        let Com::While(b, body) = factorial_program_loop() else {
            unreachable!()
        };
        for n in 0..8 {
            for start in 0..5 {
                let s = State::from([("n", start), ("acc", 1)]);
                let lhs = loop_step(
                    &b,
                    &body,
                    3,
                    &mut |t| loop_approx(&b, &body, 3, n, t),
                    s.clone(),
                );
                assert_eq!(lhs, loop_approx(&b, &body, 3, n + 1, s));
            }
        }
    }

    #[test]
    fn loop_approx_is_the_kleene_approximant() {
        let Com::While(b, body) = factorial_program_loop() else {
            unreachable!()
        };
        let step = |w: &mut dyn FnMut(State) -> StateResult, sigma: State| {
            loop_step(&b, &body, 3, w, sigma)
        };
        for n in 0..10 {
            for start in -2..6 {
                let s = State::from([("n", start), ("acc", 1)]);
                assert_eq!(
                    loop_approx(&b, &body, 3, n, s.clone()),
                    crate::kleene::approximant(&step, n, s)
                );
            }
        }
    }

    fn factorial_program_loop() -> Com {
        match factorial_program() {
            Com::Seq(_, w) => *w,
            _ => unreachable!(),
        }
    }

    #[test]
    fn state_json() {
        let s = State::from([("n", 0), ("acc", 120)]);
        assert_eq!(s.to_json(), r#"{"n":0,"acc":120}"#);
        assert_eq!(State::from_json(r#"{"n": 0, "acc": 120}"#), Ok(s.clone()));
        assert_eq!(State::from([("acc", 120), ("n", 0)]), s);
        assert!(matches!(
            State::from_json(r#"{"while": 1}"#),
            Err(ImpError::InvalidIdentifier(_))
        ));
        assert!(State::from_json(r#"{"n": "five"}"#).is_err());
        assert_eq!(
            serde_json::to_string(&Partial::<State>::Bottom).unwrap(),
            "null"
        );
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("acc"));
        assert!(is_identifier("x_1"));
        assert!(!is_identifier("1x"));
        assert!(!is_identifier("_x"));
        assert!(!is_identifier("done"));
        assert!(!is_identifier(""));
    }
}
