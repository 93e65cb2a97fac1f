//! A small expression language for bodies of recursive definitions over
//! integers.
//!
//! Evaluating a [`FunExpr`] against an [`Approximation`] of the function
//! being defined is one application of the functional `F`. Every construct
//! is strict in `Bottom` except `If`, which only evaluates the branch its
//! condition selects, so every functional built this way is monotone.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::flatdomain::{FiniteFunTable, Functional, Partial};

/// Stack headroom kept free before the evaluator switches to a fresh segment.
pub(crate) const STACK_RED_ZONE: usize = 128 * 1024;
pub(crate) const STACK_SEGMENT: usize = 4 * 1024 * 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("integer overflow in {lhs} {op} {rhs}")]
    Overflow { op: BinOp, lhs: i64, rhs: i64 },
    #[error("ill-formed expression: {0}")]
    IllFormed(String),
    #[error("recursion depth exceeded guard of {guard}")]
    GuardExceeded { guard: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Lt,
    Le,
}

impl BinOp {
    pub const ALL: [BinOp; 6] = [
        BinOp::Add,
        BinOp::Sub,
        BinOp::Mul,
        BinOp::Eq,
        BinOp::Lt,
        BinOp::Le,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<BinOp> {
        BinOp::ALL.into_iter().find(|op| op.symbol() == s)
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, BinOp::Eq | BinOp::Lt | BinOp::Le)
    }
}

impl fmt::Display for BinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FunExpr {
    Lit(i64),
    /// The argument of the function being defined.
    Input,
    BinOp(BinOp, Box<FunExpr>, Box<FunExpr>),
    If(Box<FunExpr>, Box<FunExpr>, Box<FunExpr>),
    /// A recursive call of the function being defined.
    Rec(Box<FunExpr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Type {
    Int,
    Bool,
}

impl FunExpr {
    pub fn lit(v: i64) -> Self {
        FunExpr::Lit(v)
    }

    pub fn bin(op: BinOp, l: FunExpr, r: FunExpr) -> Self {
        FunExpr::BinOp(op, Box::new(l), Box::new(r))
    }

    pub fn rec(arg: FunExpr) -> Self {
        FunExpr::Rec(Box::new(arg))
    }

    /// Builds an `If`, rejecting conditions that are not comparisons.
    pub fn if_then_else(c: FunExpr, t: FunExpr, e: FunExpr) -> Result<Self, EvalError> {
        let expr = FunExpr::If(Box::new(c), Box::new(t), Box::new(e));
        expr.type_of()?;
        Ok(expr)
    }

    /// Infers the type of the expression, failing on any mismatch.
    pub fn type_of(&self) -> Result<Type, EvalError> {
        let expect_int = |e: &FunExpr, what: &str| match e.type_of()? {
            Type::Int => Ok(()),
            Type::Bool => Err(EvalError::IllFormed(format!("{what} must be an integer"))),
        };
        match self {
            FunExpr::Lit(_) | FunExpr::Input => Ok(Type::Int),
            FunExpr::BinOp(op, l, r) => {
                expect_int(l, &format!("left operand of {op}"))?;
                expect_int(r, &format!("right operand of {op}"))?;
                Ok(if op.is_comparison() {
                    Type::Bool
                } else {
                    Type::Int
                })
            }
            FunExpr::If(c, t, e) => {
                if c.type_of()? != Type::Bool {
                    return Err(EvalError::IllFormed(
                        "if-condition must be a comparison".into(),
                    ));
                }
                let tt = t.type_of()?;
                if tt != e.type_of()? {
                    return Err(EvalError::IllFormed("if-branches differ in type".into()));
                }
                Ok(tt)
            }
            FunExpr::Rec(arg) => {
                expect_int(arg, "recursive-call argument")?;
                Ok(Type::Int)
            }
        }
    }

    /// A well-formed body is integer-typed.
    pub fn validate(&self) -> Result<(), EvalError> {
        match self.type_of()? {
            Type::Int => Ok(()),
            Type::Bool => Err(EvalError::IllFormed(
                "function body must be an integer expression".into(),
            )),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            FunExpr::Lit(_) | FunExpr::Input => 0,
            FunExpr::BinOp(_, l, r) => 1 + l.depth().max(r.depth()),
            FunExpr::If(c, t, e) => 1 + c.depth().max(t.depth()).max(e.depth()),
            FunExpr::Rec(a) => 1 + a.depth(),
        }
    }

    pub fn has_rec(&self) -> bool {
        match self {
            FunExpr::Lit(_) | FunExpr::Input => false,
            FunExpr::BinOp(_, l, r) => l.has_rec() || r.has_rec(),
            FunExpr::If(c, t, e) => c.has_rec() || t.has_rec() || e.has_rec(),
            FunExpr::Rec(_) => true,
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            FunExpr::Lit(v) => json!(["lit", v]),
            FunExpr::Input => json!(["input"]),
            FunExpr::BinOp(op, l, r) => json!([op.symbol(), l.to_json(), r.to_json()]),
            FunExpr::If(c, t, e) => json!(["if", c.to_json(), t.to_json(), e.to_json()]),
            FunExpr::Rec(a) => json!(["rec", a.to_json()]),
        }
    }

    /// Reads the S-expression form. Does not type-check; see [`FunExpr::validate`].
    pub fn from_json(v: &Json) -> Result<Self, EvalError> {
        let bad = |msg: String| EvalError::IllFormed(msg);
        let items = v
            .as_array()
            .ok_or_else(|| bad(format!("expected an array, found {v}")))?;
        let (head, args) = items
            .split_first()
            .ok_or_else(|| bad("empty node".into()))?;
        let head = head
            .as_str()
            .ok_or_else(|| bad(format!("node tag must be a string, found {head}")))?;
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(bad(format!(
                    "{head:?} expects {n} argument(s), found {}",
                    args.len()
                )))
            }
        };
        let sub = |i: usize| FunExpr::from_json(&args[i]).map(Box::new);
        match head {
            "lit" => {
                arity(1)?;
                args[0].as_i64().map(FunExpr::Lit).ok_or_else(|| {
                    bad(format!(
                        "literal must be a 64-bit integer, found {}",
                        args[0]
                    ))
                })
            }
            "input" => {
                arity(0)?;
                Ok(FunExpr::Input)
            }
            "if" => {
                arity(3)?;
                Ok(FunExpr::If(sub(0)?, sub(1)?, sub(2)?))
            }
            "rec" => {
                arity(1)?;
                Ok(FunExpr::Rec(sub(0)?))
            }
            other => {
                let op = BinOp::from_symbol(other)
                    .ok_or_else(|| bad(format!("unknown node {other:?}")))?;
                arity(2)?;
                Ok(FunExpr::BinOp(op, sub(0)?, sub(1)?))
            }
        }
    }

    /// Parses and validates the compact JSON text form.
    pub fn parse_json(text: &str) -> Result<Self, EvalError> {
        let v: Json =
            serde_json::from_str(text).map_err(|e| EvalError::IllFormed(e.to_string()))?;
        let e = FunExpr::from_json(&v)?;
        e.validate()?;
        Ok(e)
    }

    pub fn to_json_string(&self) -> String {
        self.to_json().to_string()
    }
}

impl fmt::Display for FunExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json_string())
    }
}

impl Serialize for FunExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FunExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Json::deserialize(deserializer)?;
        let e = FunExpr::from_json(&v).map_err(serde::de::Error::custom)?;
        e.validate().map_err(serde::de::Error::custom)?;
        Ok(e)
    }
}

/// The body of factorial: `if x = 0 then 1 else x * rec(x - 1)`.
pub fn f_fact() -> FunExpr {
    FunExpr::If(
        Box::new(FunExpr::bin(BinOp::Eq, FunExpr::Input, FunExpr::Lit(0))),
        Box::new(FunExpr::Lit(1)),
        Box::new(FunExpr::bin(
            BinOp::Mul,
            FunExpr::Input,
            FunExpr::rec(FunExpr::bin(BinOp::Sub, FunExpr::Input, FunExpr::Lit(1))),
        )),
    )
}

/// A current iterate: a total map from integers to `Partial<i64>`.
pub trait Approximation {
    fn at(&self, x: i64) -> Result<Partial<i64>, EvalError>;
}

impl<F: Fn(i64) -> Partial<i64>> Approximation for F {
    fn at(&self, x: i64) -> Result<Partial<i64>, EvalError> {
        Ok(self(x))
    }
}

/// The approximation that is `Bottom` everywhere.
#[derive(Debug, Clone, Copy, Default)]
pub struct BottomApprox;

impl Approximation for BottomApprox {
    fn at(&self, _x: i64) -> Result<Partial<i64>, EvalError> {
        Ok(Partial::Bottom)
    }
}

/// Reads a finite table, returning `Bottom` outside its domain.
impl Approximation for FiniteFunTable<i64, i64> {
    fn at(&self, x: i64) -> Result<Partial<i64>, EvalError> {
        Ok(self.get(&x).cloned().unwrap_or(Partial::Bottom))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    Int(i64),
    Bool(bool),
}

/// Evaluation context shared by every engine: how to answer a recursive
/// call, and which integers are admissible.
pub(crate) struct Eval<'a, R> {
    pub rec: R,
    pub clip: Option<&'a dyn Fn(i64) -> bool>,
}

impl<R> Eval<'_, R>
where
    R: FnMut(i64) -> Result<Partial<i64>, EvalError>,
{
    pub fn run(&mut self, e: &FunExpr, x: i64) -> Result<Partial<i64>, EvalError> {
        match self.node(e, x)? {
            Partial::Bottom => Ok(Partial::Bottom),
            Partial::Value(Val::Int(v)) => Ok(Partial::Value(v)),
            Partial::Value(Val::Bool(_)) => Err(EvalError::IllFormed(
                "function body must be an integer expression".into(),
            )),
        }
    }

    fn int(&self, v: i64) -> Partial<Val> {
        match self.clip {
            Some(keep) if !keep(v) => Partial::Bottom,
            _ => Partial::Value(Val::Int(v)),
        }
    }

    fn node_int(&mut self, e: &FunExpr, x: i64, what: &str) -> Result<Partial<i64>, EvalError> {
        match self.node(e, x)? {
            Partial::Bottom => Ok(Partial::Bottom),
            Partial::Value(Val::Int(v)) => Ok(Partial::Value(v)),
            Partial::Value(Val::Bool(_)) => {
                Err(EvalError::IllFormed(format!("{what} must be an integer")))
            }
        }
    }

    fn node(&mut self, e: &FunExpr, x: i64) -> Result<Partial<Val>, EvalError> {
        stacker::maybe_grow(STACK_RED_ZONE, STACK_SEGMENT, || self.node_inner(e, x))
    }

    fn node_inner(&mut self, e: &FunExpr, x: i64) -> Result<Partial<Val>, EvalError> {
        match e {
            FunExpr::Lit(v) => Ok(self.int(*v)),
            FunExpr::Input => Ok(self.int(x)),
            FunExpr::BinOp(op, l, r) => {
                let Partial::Value(a) = self.node_int(l, x, "operand")? else {
                    return Ok(Partial::Bottom);
                };
                let Partial::Value(b) = self.node_int(r, x, "operand")? else {
                    return Ok(Partial::Bottom);
                };
                let checked = match op {
                    BinOp::Add => a.checked_add(b),
                    BinOp::Sub => a.checked_sub(b),
                    BinOp::Mul => a.checked_mul(b),
                    BinOp::Eq => return Ok(Partial::Value(Val::Bool(a == b))),
                    BinOp::Lt => return Ok(Partial::Value(Val::Bool(a < b))),
                    BinOp::Le => return Ok(Partial::Value(Val::Bool(a <= b))),
                };
                match (checked, self.clip) {
                    (Some(v), _) => Ok(self.int(v)),
                    // An overflowing result lies outside every clip range.
                    (None, Some(_)) => Ok(Partial::Bottom),
                    (None, None) => Err(EvalError::Overflow {
                        op: *op,
                        lhs: a,
                        rhs: b,
                    }),
                }
            }
            FunExpr::If(c, t, f) => match self.node(c, x)? {
                Partial::Bottom => Ok(Partial::Bottom),
                Partial::Value(Val::Bool(true)) => self.node(t, x),
                Partial::Value(Val::Bool(false)) => self.node(f, x),
                Partial::Value(Val::Int(_)) => Err(EvalError::IllFormed(
                    "if-condition must be a comparison".into(),
                )),
            },
            FunExpr::Rec(arg) => {
                let Partial::Value(y) = self.node_int(arg, x, "recursive-call argument")? else {
                    return Ok(Partial::Bottom);
                };
                match (self.rec)(y)? {
                    Partial::Bottom => Ok(Partial::Bottom),
                    Partial::Value(v) => Ok(self.int(v)),
                }
            }
        }
    }
}

/// One application of the functional denoted by `e` to `approx`, at `x`.
pub fn eval_step<A: Approximation + ?Sized>(
    e: &FunExpr,
    approx: &A,
    x: i64,
) -> Result<Partial<i64>, EvalError> {
    Eval {
        rec: |y| approx.at(y),
        clip: None,
    }
    .run(e, x)
}

/// The functional of a [`FunExpr`] restricted to a finite domain, acting on
/// tables. Recursive calls outside the domain and integers rejected by the
/// clip are `Bottom`.
pub struct TableFunctional {
    expr: FunExpr,
    domain: Vec<i64>,
    clip: Box<dyn Fn(i64) -> bool + Send + Sync>,
}

impl fmt::Debug for TableFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TableFunctional")
            .field("expr", &self.expr)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

pub fn to_table_functional(
    e: FunExpr,
    domain: Vec<i64>,
    clip: impl Fn(i64) -> bool + Send + Sync + 'static,
) -> Result<TableFunctional, EvalError> {
    e.validate()?;
    if domain.is_empty() {
        return Err(EvalError::IllFormed("table domain is empty".into()));
    }
    FiniteFunTable::<i64, i64>::bottom(domain.clone())
        .map_err(|err| EvalError::IllFormed(err.to_string()))?;
    Ok(TableFunctional {
        expr: e,
        domain,
        clip: Box::new(clip),
    })
}

impl TableFunctional {
    pub fn expr(&self) -> &FunExpr {
        &self.expr
    }

    pub fn domain(&self) -> &[i64] {
        &self.domain
    }

    fn eval_at(&self, table: &FiniteFunTable<i64, i64>, x: i64) -> Partial<i64> {
        let result = Eval {
            rec: |y| table.at(y),
            clip: Some(&*self.clip),
        }
        .run(&self.expr, x);
        // Validated at construction and overflow is clipped, so evaluation is total.
        result.unwrap_or(Partial::Bottom)
    }
}

impl Functional<i64, i64> for TableFunctional {
    fn apply(&self, table: &FiniteFunTable<i64, i64>) -> FiniteFunTable<i64, i64> {
        let entries = self
            .domain
            .iter()
            .map(|&x| self.eval_at(table, x))
            .collect();
        FiniteFunTable::new(self.domain.clone(), entries).expect("domain checked at construction")
    }
}
