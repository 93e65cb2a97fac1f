//! Random instances for property checks and benchmarks: well-typed
//! [`FunExpr`] trees and monotone functionals on finite spaces.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cpo_checker::{FiniteFunSpace, GraphFunctional};
use crate::flatdomain::Partial;
use crate::functional::{BinOp, FunExpr};

/// Shape parameters for [`fun_expr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExprShape {
    pub max_depth: usize,
    pub lit_min: i64,
    pub lit_max: i64,
}

impl Default for ExprShape {
    fn default() -> Self {
        Self {
            max_depth: 5,
            lit_min: -3,
            lit_max: 3,
        }
    }
}

/// A random integer-typed expression of depth at most `shape.max_depth`.
pub fn fun_expr<R: Rng + ?Sized>(rng: &mut R, shape: ExprShape) -> FunExpr {
    int_expr(rng, shape, shape.max_depth)
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, shape: ExprShape) -> FunExpr {
    if rng.gen_bool(0.5) {
        FunExpr::Input
    } else {
        FunExpr::Lit(rng.gen_range(shape.lit_min..=shape.lit_max))
    }
}

fn int_expr<R: Rng + ?Sized>(rng: &mut R, shape: ExprShape, depth: usize) -> FunExpr {
    if depth == 0 {
        return leaf(rng, shape);
    }
    match rng.gen_range(0..10) {
        0..=1 => leaf(rng, shape),
        2..=4 => {
            let op = *[BinOp::Add, BinOp::Sub, BinOp::Mul]
                .choose(rng)
                .expect("non-empty");
            FunExpr::bin(
                op,
                int_expr(rng, shape, depth - 1),
                int_expr(rng, shape, depth - 1),
            )
        }
        5..=7 if depth >= 2 => FunExpr::If(
            Box::new(bool_expr(rng, shape, depth - 1)),
            Box::new(int_expr(rng, shape, depth - 1)),
            Box::new(int_expr(rng, shape, depth - 1)),
        ),
        5..=7 => leaf(rng, shape),
        _ => FunExpr::rec(int_expr(rng, shape, depth - 1)),
    }
}

fn bool_expr<R: Rng + ?Sized>(rng: &mut R, shape: ExprShape, depth: usize) -> FunExpr {
    let op = *[BinOp::Eq, BinOp::Lt, BinOp::Le]
        .choose(rng)
        .expect("non-empty");
    let sub = depth.saturating_sub(1);
    FunExpr::bin(op, int_expr(rng, shape, sub), int_expr(rng, shape, sub))
}

/// A random monotone functional on `space`, built one output coordinate at a
/// time by monotone completion.
///
/// Tables are visited in index order (a linear extension of `⊑`). A table
/// inherits any value one of its lower covers already has at the coordinate;
/// otherwise it is `⊥` with probability `bottom_bias`, or else a random value
/// that no compatible, already-assigned table contradicts. Two tables with a
/// common upper bound therefore never get different values, which is what
/// makes the completion monotone.
#[allow(clippy::needless_range_loop)]
pub fn monotone_functional<A, B, R>(
    rng: &mut R,
    space: &FiniteFunSpace<A, B>,
    bottom_bias: f64,
) -> GraphFunctional<A, B>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
    R: Rng + ?Sized,
{
    let n = space.len();
    let width = space.domain().len();
    let el = space.elements();
    let compatible = |i: usize, j: usize| {
        el[i]
            .entries()
            .iter()
            .zip(el[j].entries())
            .all(|(p, q)| p.is_bottom() || q.is_bottom() || p == q)
    };

    // outputs[i][x]: digit of F(el[i]) at coordinate x (0 = ⊥, j + 1 = codomain[j]).
    let mut outputs = vec![vec![0usize; width]; n];
    let mut values: Vec<usize> = (1..=space.codomain().len()).collect();
    for x in 0..width {
        for i in 0..n {
            let forced = space
                .lower_covers(i)
                .into_iter()
                .map(|p| outputs[p][x])
                .find(|&d| d != 0);
            let digit = match forced {
                Some(d) => d,
                None if values.is_empty() || rng.gen_bool(bottom_bias) => 0,
                None => {
                    values.shuffle(rng);
                    values
                        .iter()
                        .copied()
                        .find(|&d| {
                            (0..i).all(|g| {
                                outputs[g][x] == 0 || outputs[g][x] == d || !compatible(g, i)
                            })
                        })
                        .unwrap_or(0)
                }
            };
            outputs[i][x] = digit;
        }
    }

    let radix = space.codomain().len() + 1;
    let images = outputs
        .iter()
        .map(|digits| digits.iter().rev().fold(0, |acc, &d| acc * radix + d))
        .collect();
    GraphFunctional::from_indices(space.clone(), images).expect("indices are in range")
}

/// A uniformly random (generally non-monotone) functional on `space`.
pub fn arbitrary_functional<A, B, R>(
    rng: &mut R,
    space: &FiniteFunSpace<A, B>,
) -> GraphFunctional<A, B>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
    R: Rng + ?Sized,
{
    let images = (0..space.len())
        .map(|_| rng.gen_range(0..space.len()))
        .collect();
    GraphFunctional::from_indices(space.clone(), images).expect("indices are in range")
}

type Sample = (i64, Partial<i64>);

/// A random approximation pair `lower ⊑ upper` on the integers in `range`,
/// `Bottom` outside it.
pub fn approximation_pair<R: Rng + ?Sized>(
    rng: &mut R,
    range: std::ops::RangeInclusive<i64>,
    value_min: i64,
    value_max: i64,
) -> (Vec<Sample>, Vec<Sample>) {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for x in range {
        let u = if rng.gen_bool(0.7) {
            Partial::Value(rng.gen_range(value_min..=value_max))
        } else {
            Partial::Bottom
        };
        let l = if u.is_value() && rng.gen_bool(0.5) {
            u
        } else {
            Partial::Bottom
        };
        lower.push((x, l));
        upper.push((x, u));
    }
    (lower, upper)
}
