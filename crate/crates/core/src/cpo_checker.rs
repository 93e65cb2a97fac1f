//! Exhaustive checks of the fixpoint theorem's hypotheses and conclusion on
//! finite function spaces `A → B⊥`.
//!
//! Tables of a space are numbered in mixed radix `|B| + 1`: entry `⊥` is
//! digit 0 and `codomain[j]` is digit `j + 1`, with the first domain element
//! least significant. Element 0 is the everywhere-`Bottom` table, and index
//! order is a linear extension of the pointwise order.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::flatdomain::{chain_lub, fun_leq, leq, FiniteFunTable, Functional, Partial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("space too large: |A| = {domain}, |B| = {codomain} exceeds bounds {bounds:?}")]
    SpaceTooLarge {
        domain: usize,
        codomain: usize,
        bounds: SpaceBounds,
    },
    #[error("functional maps {input} outside the space (to {output})")]
    ImageOutsideSpace { input: String, output: String },
    #[error("graph does not cover the space: {missing} has no image")]
    IncompleteGraph { missing: String },
    #[error("graph gives two different images for {input}")]
    ConflictingGraph { input: String },
    #[error("functional has no fixpoint")]
    NoFixpoint,
    #[error("functional has {fixpoints} fixpoints but none is least")]
    NoLeast { fixpoints: usize },
}

/// Upper limits on `|A|` and `|B|` for a space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceBounds {
    pub max_domain: usize,
    pub max_codomain: usize,
}

impl Default for SpaceBounds {
    fn default() -> Self {
        Self {
            max_domain: 3,
            max_codomain: 2,
        }
    }
}

/// Every table `A → B⊥` for finite `A` and `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFunSpace<A, B> {
    domain: Vec<A>,
    codomain: Vec<B>,
    elements: Vec<FiniteFunTable<A, B>>,
}

impl<A, B> FiniteFunSpace<A, B>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
{
    pub fn new(domain: Vec<A>, codomain: Vec<B>) -> Result<Self, CheckError> {
        Self::with_bounds(domain, codomain, SpaceBounds::default())
    }

    pub fn with_bounds(
        domain: Vec<A>,
        codomain: Vec<B>,
        bounds: SpaceBounds,
    ) -> Result<Self, CheckError> {
        if domain.len() > bounds.max_domain || codomain.len() > bounds.max_codomain {
            return Err(CheckError::SpaceTooLarge {
                domain: domain.len(),
                codomain: codomain.len(),
                bounds,
            });
        }
        for (i, b) in codomain.iter().enumerate() {
            if codomain[..i].contains(b) {
                return Err(CheckError::InvalidSpace(format!(
                    "duplicate codomain value {b:?}"
                )));
            }
        }
        FiniteFunTable::<A, B>::bottom(domain.clone())
            .map_err(|e| CheckError::InvalidSpace(e.to_string()))?;

        let radix = codomain.len() + 1;
        let size = radix.pow(domain.len() as u32);
        let elements = (0..size)
            .map(|mut idx| {
                let entries = (0..domain.len())
                    .map(|_| {
                        let digit = idx % radix;
                        idx /= radix;
                        match digit {
                            0 => Partial::Bottom,
                            j => Partial::Value(codomain[j - 1].clone()),
                        }
                    })
                    .collect();
                FiniteFunTable::new(domain.clone(), entries).expect("domain validated")
            })
            .collect();
        Ok(Self {
            domain,
            codomain,
            elements,
        })
    }

    /// Position of `table` in the enumeration, if it belongs to the space.
    pub fn index_of(&self, table: &FiniteFunTable<A, B>) -> Option<usize> {
        if table.domain() != self.domain.as_slice() {
            return None;
        }
        let radix = self.codomain.len() + 1;
        let mut idx = 0;
        for entry in table.entries().iter().rev() {
            let digit = match entry {
                Partial::Bottom => 0,
                Partial::Value(b) => self.codomain.iter().position(|c| c == b)? + 1,
            };
            idx = idx * radix + digit;
        }
        Some(idx)
    }

    /// Tables obtained from element `idx` by resetting one defined entry to `⊥`.
    pub fn lower_covers(&self, idx: usize) -> Vec<usize> {
        let radix = self.codomain.len() + 1;
        let mut covers = Vec::new();
        let mut place = 1;
        let mut rest = idx;
        for _ in 0..self.domain.len() {
            let digit = rest % radix;
            if digit != 0 {
                covers.push(idx - digit * place);
            }
            rest /= radix;
            place *= radix;
        }
        covers
    }

    /// Tables obtained from element `idx` by defining one `⊥` entry.
    pub fn upper_covers(&self, idx: usize) -> Vec<usize> {
        let radix = self.codomain.len() + 1;
        let mut covers = Vec::new();
        let mut place = 1;
        let mut rest = idx;
        for _ in 0..self.domain.len() {
            if rest.is_multiple_of(radix) {
                covers.extend((1..radix).map(|d| idx + d * place));
            }
            rest /= radix;
            place *= radix;
        }
        covers
    }
}

impl<A: PartialEq, B: PartialEq> FiniteFunSpace<A, B> {
    pub fn domain(&self) -> &[A] {
        &self.domain
    }

    pub fn codomain(&self) -> &[B] {
        &self.codomain
    }

    pub fn elements(&self) -> &[FiniteFunTable<A, B>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bottom(&self) -> &FiniteFunTable<A, B> {
        &self.elements[0]
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        fun_leq(&self.elements[i], &self.elements[j]).expect("tables of one space share a domain")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Evidence for a failed check. [`Counterexample::recheck`] confirms it
/// without reusing the check that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound(serialize = "FiniteFunTable<A, B>: Serialize"))]
pub enum Counterexample<A, B> {
    NotMonotone {
        lower: FiniteFunTable<A, B>,
        upper: FiniteFunTable<A, B>,
        image_lower: FiniteFunTable<A, B>,
        image_upper: FiniteFunTable<A, B>,
    },
    ChainNotPreserved {
        chain: Vec<FiniteFunTable<A, B>>,
        images: Vec<FiniteFunTable<A, B>>,
    },
    IteratesNotAscending {
        index: usize,
        lower: FiniteFunTable<A, B>,
        upper: FiniteFunTable<A, B>,
    },
    NotStabilized {
        n_max: usize,
        last: FiniteFunTable<A, B>,
    },
    NoFixpoint,
    NoLeast {
        fixpoints: Vec<FiniteFunTable<A, B>>,
    },
    LimitNotLeast {
        limit: FiniteFunTable<A, B>,
        least: FiniteFunTable<A, B>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = "FiniteFunTable<A, B>: Serialize"))]
pub struct CheckReport<A, B> {
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample<A, B>>,
}

impl<A, B> CheckReport<A, B> {
    pub fn pass() -> Self {
        Self {
            verdict: Verdict::Pass,
            counterexample: None,
        }
    }

    pub fn fail(counterexample: Counterexample<A, B>) -> Self {
        Self {
            verdict: Verdict::Fail,
            counterexample: Some(counterexample),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn image_error<A: fmt::Debug, B: fmt::Debug>(
    input: &FiniteFunTable<A, B>,
    output: &FiniteFunTable<A, B>,
) -> CheckError {
    CheckError::ImageOutsideSpace {
        input: format!("{:?}", input.entries()),
        output: format!("{:?} over {:?}", output.entries(), output.domain()),
    }
}

/// Images of every element, as indices into the space.
pub fn images<A, B, F>(f: &F, space: &FiniteFunSpace<A, B>) -> Result<Vec<usize>, CheckError>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
    F: Functional<A, B> + ?Sized,
{
    space
        .elements()
        .iter()
        .map(|t| {
            let out = f.apply(t);
            space.index_of(&out).ok_or_else(|| image_error(t, &out))
        })
        .collect()
}

/// Passes iff `f ⊑ g` implies `F(f) ⊑ F(g)` for every pair of the space.
pub fn check_monotone<A, B, F>(
    f: &F,
    space: &FiniteFunSpace<A, B>,
) -> Result<CheckReport<A, B>, CheckError>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
    F: Functional<A, B> + ?Sized,
{
    let img = images(f, space)?;
    for i in 0..space.len() {
        for j in 0..space.len() {
            if space.le(i, j) && !space.le(img[i], img[j]) {
                let el = space.elements();
                return Ok(CheckReport::fail(Counterexample::NotMonotone {
                    lower: el[i].clone(),
                    upper: el[j].clone(),
                    image_lower: el[img[i]].clone(),
                    image_upper: el[img[j]].clone(),
                }));
            }
        }
    }
    Ok(CheckReport::pass())
}

/// Every maximal chain of the space, as element indices from `⊥` up to a
/// table defined everywhere, in lexicographic order.
pub fn maximal_chains<A, B>(space: &FiniteFunSpace<A, B>) -> Vec<Vec<usize>>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
{
    fn walk<A, B>(space: &FiniteFunSpace<A, B>, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>)
    where
        A: Clone + PartialEq + fmt::Debug,
        B: Clone + PartialEq + fmt::Debug,
    {
        let top = *path.last().expect("path starts at bottom");
        let covers = space.upper_covers(top);
        if covers.is_empty() {
            out.push(path.clone());
            return;
        }
        for c in covers {
            path.push(c);
            walk(space, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(space, &mut vec![0], &mut out);
    out
}

fn pointwise_lub<A, B>(
    space: &FiniteFunSpace<A, B>,
    chain: &[usize],
) -> Option<FiniteFunTable<A, B>>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
{
    let el = space.elements();
    let entries = (0..space.domain().len())
        .map(|x| chain_lub(|n| el[chain[n]].entries()[x].clone(), chain.len() - 1).ok())
        .collect::<Option<Vec<_>>>()?;
    FiniteFunTable::new(space.domain().to_vec(), entries).ok()
}

/// Passes iff along every maximal chain, `F` of the chain's top is the
/// least upper bound of the images of the chain.
pub fn check_chains<A, B, F>(
    f: &F,
    space: &FiniteFunSpace<A, B>,
) -> Result<CheckReport<A, B>, CheckError>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
    F: Functional<A, B> + ?Sized,
{
    let img = images(f, space)?;
    let el = space.elements();
    for chain in maximal_chains(space) {
        let image_chain: Vec<usize> = chain.iter().map(|&i| img[i]).collect();
        let top_image = &el[*image_chain.last().expect("chains are non-empty")];
        let preserved =
            matches!(pointwise_lub(space, &image_chain), Some(lub) if &lub == top_image);
        if !preserved {
            return Ok(CheckReport::fail(Counterexample::ChainNotPreserved {
                chain: chain.iter().map(|&i| el[i].clone()).collect(),
                images: image_chain.iter().map(|&i| el[i].clone()).collect(),
            }));
        }
    }
    Ok(CheckReport::pass())
}

/// Monotonicity plus preservation of lubs along every maximal chain. On a
/// finite space the two agree; both are run so each cross-checks the other.
pub fn check_continuous<A, B, F>(
    f: &F,
    space: &FiniteFunSpace<A, B>,
) -> Result<CheckReport<A, B>, CheckError>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
    F: Functional<A, B> + ?Sized,
{
    let monotone = check_monotone(f, space)?;
    let chains = check_chains(f, space)?;
    Ok(if !monotone.passed() { monotone } else { chains })
}

/// `F^0(⊥), ..., F^n(⊥)`.
pub fn iterates<A, B, F>(
    f: &F,
    bottom: &FiniteFunTable<A, B>,
    n: usize,
) -> Vec<FiniteFunTable<A, B>>
where
    A: Clone,
    B: Clone,
    F: Functional<A, B> + ?Sized,
{
    let mut out = Vec::with_capacity(n + 1);
    out.push(bottom.clone());
    for k in 0..n {
        let next = f.apply(&out[k]);
        out.push(next);
    }
    out
}

/// Passes iff `F^0(⊥) ⊑ F^1(⊥) ⊑ ... ⊑ F^n_max(⊥)`.
pub fn iterates_are_chain<A, B, F>(
    f: &F,
    space: &FiniteFunSpace<A, B>,
    n_max: usize,
) -> Result<CheckReport<A, B>, CheckError>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
    F: Functional<A, B> + ?Sized,
{
    let seq = iterates(f, space.bottom(), n_max);
    for (k, w) in seq.windows(2).enumerate() {
        match fun_leq(&w[0], &w[1]) {
            Ok(true) => {}
            Ok(false) => {
                return Ok(CheckReport::fail(Counterexample::IteratesNotAscending {
                    index: k,
                    lower: w[0].clone(),
                    upper: w[1].clone(),
                }))
            }
            Err(_) => return Err(image_error(&w[0], &w[1])),
        }
    }
    Ok(CheckReport::pass())
}

/// Enumerates all fixpoints and returns the one below all others.
pub fn least_fixpoint_bruteforce<A, B, F>(
    f: &F,
    space: &FiniteFunSpace<A, B>,
) -> Result<FiniteFunTable<A, B>, CheckError>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
    F: Functional<A, B> + ?Sized,
{
    let img = images(f, space)?;
    let fixpoints: Vec<usize> = (0..space.len()).filter(|&i| img[i] == i).collect();
    if fixpoints.is_empty() {
        return Err(CheckError::NoFixpoint);
    }
    fixpoints
        .iter()
        .copied()
        .find(|&p| fixpoints.iter().all(|&q| space.le(p, q)))
        .map(|p| space.elements()[p].clone())
        .ok_or(CheckError::NoLeast {
            fixpoints: fixpoints.len(),
        })
}

/// All fixpoints of `F`, in enumeration order.
pub fn fixpoints<A, B, F>(
    f: &F,
    space: &FiniteFunSpace<A, B>,
) -> Result<Vec<FiniteFunTable<A, B>>, CheckError>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
    F: Functional<A, B> + ?Sized,
{
    let img = images(f, space)?;
    Ok((0..space.len())
        .filter(|&i| img[i] == i)
        .map(|i| space.elements()[i].clone())
        .collect())
}

/// Passes iff the Kleene iterates stabilize within `n_max` steps at the
/// brute-force least fixpoint.
pub fn check_tarski<A, B, F>(
    f: &F,
    space: &FiniteFunSpace<A, B>,
    n_max: usize,
) -> Result<CheckReport<A, B>, CheckError>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
    F: Functional<A, B> + ?Sized,
{
    let seq = iterates(f, space.bottom(), n_max);
    let Some(limit) = seq.windows(2).find(|w| w[0] == w[1]).map(|w| w[0].clone()) else {
        return Ok(CheckReport::fail(Counterexample::NotStabilized {
            n_max,
            last: seq.last().expect("at least the bottom iterate").clone(),
        }));
    };
    match least_fixpoint_bruteforce(f, space) {
        Ok(least) if least == limit => Ok(CheckReport::pass()),
        Ok(least) => Ok(CheckReport::fail(Counterexample::LimitNotLeast {
            limit,
            least,
        })),
        Err(CheckError::NoFixpoint) => Ok(CheckReport::fail(Counterexample::NoFixpoint)),
        Err(CheckError::NoLeast { .. }) => Ok(CheckReport::fail(Counterexample::NoLeast {
            fixpoints: fixpoints(f, space)?,
        })),
        Err(e) => Err(e),
    }
}

impl<A, B> Counterexample<A, B>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
{
    /// Confirms the violation directly from the definitions, using only
    /// `F`, the order, and the space.
    pub fn recheck<F>(&self, f: &F, space: &FiniteFunSpace<A, B>) -> bool
    where
        F: Functional<A, B> + ?Sized,
    {
        let le = |a: &FiniteFunTable<A, B>, b: &FiniteFunTable<A, B>| {
            a.iter()
                .zip(b.iter())
                .all(|((x, p), (y, q))| x == y && leq(p, q))
        };
        match self {
            Counterexample::NotMonotone {
                lower,
                upper,
                image_lower,
                image_upper,
            } => {
                le(lower, upper)
                    && &f.apply(lower) == image_lower
                    && &f.apply(upper) == image_upper
                    && !le(image_lower, image_upper)
            }
            Counterexample::ChainNotPreserved { chain, images } => {
                let is_chain = chain.windows(2).all(|w| le(&w[0], &w[1]));
                let images_match = chain.len() == images.len()
                    && chain.iter().zip(images).all(|(c, i)| &f.apply(c) == i);
                let ascending = images.windows(2).all(|w| le(&w[0], &w[1]));
                is_chain && images_match && !ascending
            }
            Counterexample::IteratesNotAscending {
                index,
                lower,
                upper,
            } => {
                let seq = iterates(f, space.bottom(), index + 1);
                &seq[*index] == lower && &seq[index + 1] == upper && !le(lower, upper)
            }
            Counterexample::NotStabilized { n_max, last } => {
                let seq = iterates(f, space.bottom(), *n_max);
                seq.last() == Some(last) && seq.windows(2).all(|w| w[0] != w[1])
            }
            Counterexample::NoFixpoint => space.elements().iter().all(|t| &f.apply(t) != t),
            Counterexample::NoLeast { fixpoints } => {
                let all: Vec<_> = space
                    .elements()
                    .iter()
                    .filter(|t| &f.apply(t) == *t)
                    .collect();
                all.len() == fixpoints.len()
                    && fixpoints.iter().all(|p| all.contains(&p))
                    && all.iter().all(|p| !all.iter().all(|q| le(p, q)))
            }
            Counterexample::LimitNotLeast { limit, least } => {
                &f.apply(limit) == limit
                    && &f.apply(least) == least
                    && le(least, limit)
                    && least != limit
            }
        }
    }
}

/// One `(input, output)` entry of a functional's graph.
pub type GraphPair<A, B> = (FiniteFunTable<A, B>, FiniteFunTable<A, B>);

/// A functional on a space given by its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFunctional<A, B> {
    space: FiniteFunSpace<A, B>,
    images: Vec<usize>,
}

impl<A, B> GraphFunctional<A, B>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
{
    /// `images[i]` is the index of the image of element `i`.
    pub fn from_indices(
        space: FiniteFunSpace<A, B>,
        images: Vec<usize>,
    ) -> Result<Self, CheckError> {
        if images.len() != space.len() {
            return Err(CheckError::InvalidSpace(format!(
                "graph has {} images for {} elements",
                images.len(),
                space.len()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&i| i >= space.len()) {
            return Err(CheckError::InvalidSpace(format!(
                "image index {bad} out of range"
            )));
        }
        Ok(Self { space, images })
    }

    /// Builds the functional from `(input, output)` pairs covering the space.
    pub fn from_pairs(
        space: FiniteFunSpace<A, B>,
        pairs: &[GraphPair<A, B>],
    ) -> Result<Self, CheckError> {
        let mut images: Vec<Option<usize>> = vec![None; space.len()];
        for (input, output) in pairs {
            let i = space
                .index_of(input)
                .ok_or_else(|| image_error(input, output))?;
            let o = space
                .index_of(output)
                .ok_or_else(|| image_error(input, output))?;
            match images[i] {
                Some(prev) if prev != o => {
                    return Err(CheckError::ConflictingGraph {
                        input: format!("{:?}", input.entries()),
                    })
                }
                _ => images[i] = Some(o),
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| {
                img.ok_or_else(|| CheckError::IncompleteGraph {
                    missing: format!("{:?}", space.elements()[i].entries()),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { space, images })
    }

    /// Tabulates any functional over the space.
    pub fn tabulate<F: Functional<A, B> + ?Sized>(
        f: &F,
        space: FiniteFunSpace<A, B>,
    ) -> Result<Self, CheckError> {
        let images = images(f, &space)?;
        Ok(Self { space, images })
    }

    pub fn space(&self) -> &FiniteFunSpace<A, B> {
        &self.space
    }

    pub fn image_indices(&self) -> &[usize] {
        &self.images
    }
}

impl<A, B> Functional<A, B> for GraphFunctional<A, B>
where
    A: Clone + PartialEq + fmt::Debug,
    B: Clone + PartialEq + fmt::Debug,
{
    /// # Panics
    ///
    /// If `table` is not an element of the graph's space.
    fn apply(&self, table: &FiniteFunTable<A, B>) -> FiniteFunTable<A, B> {
        let idx = self
            .space
            .index_of(table)
            .unwrap_or_else(|| panic!("table {:?} is outside the graph's space", table.entries()));
        self.space.elements()[self.images[idx]].clone()
    }
}

impl<A, B> Serialize for GraphFunctional<A, B>
where
    A: Serialize + fmt::Display + PartialEq,
    B: Serialize + PartialEq,
{
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(bound(serialize = "FiniteFunTable<A, B>: Serialize, A: Serialize, B: Serialize"))]
        struct Wire<'a, A, B> {
            domain: &'a [A],
            codomain: &'a [B],
            graph: Vec<[&'a FiniteFunTable<A, B>; 2]>,
        }
        let el = self.space.elements();
        Wire {
            domain: self.space.domain(),
            codomain: self.space.codomain(),
            graph: self
                .images
                .iter()
                .enumerate()
                .map(|(i, &o)| [&el[i], &el[o]])
                .collect(),
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{f_fact, to_table_functional, FunExpr};
    use Partial::{Bottom, Value};

    type Table = FiniteFunTable<i64, i64>;

    fn space(a: usize, b: usize) -> FiniteFunSpace<i64, i64> {
        FiniteFunSpace::new((0..a as i64).collect(), (0..b as i64).collect()).unwrap()
    }

    fn fact_space() -> FiniteFunSpace<i64, i64> {
        FiniteFunSpace::new(vec![0, 1, 2], vec![1, 2]).unwrap()
    }

    fn fact_functional() -> crate::functional::TableFunctional {
        to_table_functional(f_fact(), vec![0, 1, 2], |v| (0..=2).contains(&v)).unwrap()
    }

    fn flip(t: &Table) -> Table {
        if t.is_bottom() {
            Table::from_fn(t.domain().to_vec(), |_| Value(0)).unwrap()
        } else {
            Table::bottom(t.domain().to_vec()).unwrap()
        }
    }

    #[test]
    fn enumeration_is_complete_and_starts_at_bottom() {
        let s = space(3, 2);
        assert_eq!(s.len(), 27);
        assert!(s.bottom().is_bottom());
        for (i, t) in s.elements().iter().enumerate() {
            assert_eq!(s.index_of(t), Some(i));
            for j in 0..i {
                assert_ne!(&s.elements()[j], t);
            }
        }
    }

    #[test]
    fn index_order_extends_the_pointwise_order() {
        let s = space(3, 2);
        for i in 0..s.len() {
            for j in 0..s.len() {
                if s.le(i, j) {
                    assert!(i <= j);
                }
            }
        }
    }

    #[test]
    fn covers_are_exactly_one_step() {
        let s = space(3, 2);
        for i in 0..s.len() {
            for c in s.upper_covers(i) {
                assert!(s.le(i, c) && i != c);
                assert!(s.lower_covers(c).contains(&i));
            }
        }
    }

    #[test]
    fn maximal_chain_count() {
        // |A|! * |B|^|A| chains of length |A| + 1.
        let chains = maximal_chains(&space(3, 2));
        assert_eq!(chains.len(), 6 * 8);
        assert!(chains.iter().all(|c| c.len() == 4));
    }

    #[test]
    fn space_bounds_are_enforced() {
        assert!(matches!(
            FiniteFunSpace::<i64, i64>::new(vec![0, 1, 2, 3], vec![0]),
            Err(CheckError::SpaceTooLarge { .. })
        ));
        let big = SpaceBounds {
            max_domain: 4,
            max_codomain: 3,
        };
        assert_eq!(
            FiniteFunSpace::<i64, i64>::with_bounds(vec![0, 1, 2, 3], vec![0, 1, 2], big)
                .unwrap()
                .len(),
            256
        );
    }

    #[test]
    fn monotone_examples() {
        assert!(check_monotone(&fact_functional(), &fact_space())
            .unwrap()
            .passed());
        let s = space(2, 1);
        let constant = |t: &Table| Table::bottom(t.domain().to_vec()).unwrap();
        assert!(check_monotone(&constant, &s).unwrap().passed());
        let report = check_monotone(&flip, &s).unwrap();
        assert_eq!(report.verdict, Verdict::Fail);
        let cx = report.counterexample.unwrap();
        assert!(cx.recheck(&flip, &s));
        match cx {
            Counterexample::NotMonotone { lower, .. } => assert!(lower.is_bottom()),
            other => panic!("unexpected counterexample {other:?}"),
        }
    }

    #[test]
    fn continuous_examples() {
        assert!(check_continuous(&fact_functional(), &fact_space())
            .unwrap()
            .passed());
        let s = space(2, 2);
        assert!(!check_continuous(&flip, &s).unwrap().passed());
        let chains = check_chains(&flip, &s).unwrap();
        assert!(!chains.passed());
        assert!(chains.counterexample.unwrap().recheck(&flip, &s));
        let id = |t: &Table| t.clone();
        assert!(check_continuous(&id, &s).unwrap().passed());
    }

    #[test]
    fn iterates_examples() {
        let s = space(2, 1);
        assert!(iterates_are_chain(&fact_functional(), &fact_space(), 10)
            .unwrap()
            .passed());
        let report = iterates_are_chain(&flip, &s, 2).unwrap();
        let cx = report.counterexample.clone().unwrap();
        assert!(cx.recheck(&flip, &s));
        assert!(matches!(
            cx,
            Counterexample::IteratesNotAscending { index: 1, .. }
        ));
        assert!(iterates_are_chain(&flip, &s, 0).unwrap().passed());
    }

    #[test]
    fn least_fixpoint_examples() {
        let s = space(3, 2);
        let id = |t: &Table| t.clone();
        assert!(least_fixpoint_bruteforce(&id, &s).unwrap().is_bottom());

        let lfp = least_fixpoint_bruteforce(&fact_functional(), &fact_space()).unwrap();
        assert_eq!(lfp.entries(), &[Value(1), Value(1), Value(2)]);

        let g = s.elements()[17].clone();
        let to_g = |_: &Table| g.clone();
        assert_eq!(least_fixpoint_bruteforce(&to_g, &s), Ok(g.clone()));
    }

    #[test]
    fn flip_has_no_fixpoint() {
        let s = space(2, 1);
        assert_eq!(
            least_fixpoint_bruteforce(&flip, &s),
            Err(CheckError::NoFixpoint)
        );
        let report = check_tarski(&flip, &s, 8).unwrap();
        let cx = report.counterexample.unwrap();
        assert!(cx.recheck(&flip, &s));
    }

    #[test]
    fn no_least_fixpoint() {
        let s = space(1, 2);
        let settle = |t: &Table| {
            let e = match t.entries()[0] {
                Bottom => Value(0),
                Value(0) => Value(0),
                Value(_) => Value(1),
            };
            Table::new(t.domain().to_vec(), vec![e]).unwrap()
        };
        // ⊥ ↦ 0, 0 ↦ 0, 1 ↦ 1: fixpoints 0 and 1, ⊥ is not fixed, no least.
        assert_eq!(
            least_fixpoint_bruteforce(&settle, &s),
            Err(CheckError::NoLeast { fixpoints: 2 })
        );
        let report = check_tarski(&settle, &s, 4).unwrap();
        assert!(report.counterexample.unwrap().recheck(&settle, &s));
    }

    #[test]
    fn tarski_examples() {
        assert!(check_tarski(&fact_functional(), &fact_space(), 27)
            .unwrap()
            .passed());
        let s = space(3, 2);
        let id = |t: &Table| t.clone();
        assert!(check_tarski(&id, &s, 1).unwrap().passed());
        let g = s.elements()[23].clone();
        let to_g = |_: &Table| g.clone();
        assert!(check_tarski(&to_g, &s, 2).unwrap().passed());
        assert!(!check_tarski(&to_g, &s, 1).unwrap().passed());
    }

    #[test]
    fn image_outside_space_is_an_error() {
        let s = space(2, 1);
        let seven = to_table_functional(FunExpr::Lit(7), vec![0, 1], |_| true).unwrap();
        assert!(matches!(
            check_monotone(&seven, &s),
            Err(CheckError::ImageOutsideSpace { .. })
        ));
    }

    #[test]
    fn graph_functional_from_pairs() {
        let s = space(1, 1);
        let el = s.elements().to_vec();
        let g = GraphFunctional::from_pairs(
            s.clone(),
            &[
                (el[0].clone(), el[1].clone()),
                (el[1].clone(), el[1].clone()),
            ],
        )
        .unwrap();
        assert_eq!(g.apply(&el[0]), el[1]);
        assert!(matches!(
            GraphFunctional::from_pairs(s.clone(), &[(el[0].clone(), el[1].clone())]),
            Err(CheckError::IncompleteGraph { .. })
        ));
        assert!(matches!(
            GraphFunctional::from_pairs(
                s,
                &[
                    (el[0].clone(), el[1].clone()),
                    (el[0].clone(), el[0].clone()),
                    (el[1].clone(), el[1].clone())
                ]
            ),
            Err(CheckError::ConflictingGraph { .. })
        ));
    }

    #[test]
    fn report_json_shape() {
        let s = space(1, 1);
        let report = check_monotone(&flip, &s).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["verdict"], "fail");
        assert_eq!(v["counterexample"]["kind"], "not_monotone");
        assert_eq!(
            v["counterexample"]["lower"]["entries"]["0"],
            serde_json::Value::Null
        );
        let ok = serde_json::to_string(&CheckReport::<i64, i64>::pass()).unwrap();
        assert_eq!(ok, r#"{"verdict":"pass","counterexample":null}"#);
    }
}
