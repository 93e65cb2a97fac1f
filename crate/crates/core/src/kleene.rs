//! Kleene iteration: the approximants `F^n(⊥)`, minimal stabilization
//! witnesses, traces of the chain, and the unbounded recursive realization
//! `let rec fix f x = f (fun y -> fix f y) x` cut off by a depth guard.

use serde::{Deserialize, Serialize};

use crate::flatdomain::Partial;
use crate::functional::{
    eval_step, Approximation, BottomApprox, Eval, EvalError, FunExpr, STACK_RED_ZONE, STACK_SEGMENT,
};

/// `F^fuel(⊥)(x)` for an arbitrary functional given as a one-step function.
///
/// `step(rec, x)` evaluates the body once at `x`, answering recursive calls
/// through `rec`. Each nested call gets one unit less fuel and zero fuel is
/// `Bottom`.
pub fn approximant<X, Y, E, S>(step: &S, fuel: usize, x: X) -> Result<Partial<Y>, E>
where
    S: Fn(&mut dyn FnMut(X) -> Result<Partial<Y>, E>, X) -> Result<Partial<Y>, E>,
{
    if fuel == 0 {
        return Ok(Partial::Bottom);
    }
    stacker::maybe_grow(STACK_RED_ZONE, STACK_SEGMENT, || {
        step(&mut |y| approximant(step, fuel - 1, y), x)
    })
}

/// The functional of `e` applied to an approximation.
pub struct Applied<'e, A> {
    expr: &'e FunExpr,
    inner: A,
}

impl<A: Approximation> Approximation for Applied<'_, A> {
    fn at(&self, x: i64) -> Result<Partial<i64>, EvalError> {
        eval_step(self.expr, &self.inner, x)
    }
}

pub fn apply<A: Approximation>(e: &FunExpr, approx: A) -> Applied<'_, A> {
    Applied {
        expr: e,
        inner: approx,
    }
}

impl Approximation for Box<dyn Approximation + '_> {
    fn at(&self, x: i64) -> Result<Partial<i64>, EvalError> {
        (**self).at(x)
    }
}

/// `F^n(⊥)`, built as `n` explicit applications of the functional to the
/// everywhere-`Bottom` approximation.
pub fn iterate(e: &FunExpr, n: usize) -> Box<dyn Approximation + '_> {
    let mut approx: Box<dyn Approximation + '_> = Box::new(BottomApprox);
    for _ in 0..n {
        approx = Box::new(apply(e, approx));
    }
    approx
}

/// `F^fuel(⊥)(x)` computed by direct fueled recursion.
pub fn approx(e: &FunExpr, fuel: usize, x: i64) -> Result<Partial<i64>, EvalError> {
    let step = |rec: &mut dyn FnMut(i64) -> Result<Partial<i64>, EvalError>, x: i64| {
        Eval { rec, clip: None }.run(e, x)
    };
    approximant(&step, fuel, x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixOutcome {
    pub result: Partial<i64>,
    /// Least `n` with `F^n(⊥)(x)` a value; present iff `result` is one.
    pub witness: Option<usize>,
}

/// The least fixpoint at `x`, searched up to `max_fuel` iterations.
///
/// A `Value` is the true fixpoint value. `Bottom` only says no value was
/// reached within `max_fuel`.
pub fn fix(e: &FunExpr, max_fuel: usize, x: i64) -> Result<FixOutcome, EvalError> {
    let none = FixOutcome {
        result: Partial::Bottom,
        witness: None,
    };
    // Approximants form a chain, so Bottom at max_fuel is Bottom everywhere below.
    if approx(e, max_fuel, x)?.is_bottom() {
        return Ok(none);
    }
    for n in 1..=max_fuel {
        if let Partial::Value(v) = approx(e, n, x)? {
            return Ok(FixOutcome {
                result: Partial::Value(v),
                witness: Some(n),
            });
        }
    }
    Ok(none)
}

/// Runs the genuine recursive realization: every recursive call re-enters
/// the evaluator. The top-level call is depth 1; exceeding `guard` is
/// [`EvalError::GuardExceeded`].
///
/// The realization cannot observe divergence, so on success the result is
/// always a `Value`.
pub fn run_unbounded(e: &FunExpr, x: i64, guard: usize) -> Result<Partial<i64>, EvalError> {
    fn realize(e: &FunExpr, x: i64, depth: usize, guard: usize) -> Result<Partial<i64>, EvalError> {
        if depth > guard {
            return Err(EvalError::GuardExceeded { guard });
        }
        stacker::maybe_grow(STACK_RED_ZONE, STACK_SEGMENT, || {
            Eval {
                rec: |y| realize(e, y, depth + 1, guard),
                clip: None,
            }
            .run(e, x)
        })
    }
    realize(e, x, 1, guard)
}

/// The chain `F^n(⊥)(input)` for `n = 0..=max_fuel`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterTrace {
    pub input: i64,
    pub samples: Vec<Partial<i64>>,
    pub stabilized_at: Option<usize>,
}

impl IterTrace {
    pub fn is_chain(&self) -> bool {
        crate::flatdomain::is_ascending(&self.samples)
    }
}

pub fn trace(e: &FunExpr, max_fuel: usize, x: i64) -> Result<IterTrace, EvalError> {
    let samples = (0..=max_fuel)
        .map(|n| approx(e, n, x))
        .collect::<Result<Vec<_>, _>>()?;
    let stabilized_at = samples.iter().position(Partial::is_value);
    Ok(IterTrace {
        input: x,
        samples,
        stabilized_at,
    })
}
