//! The lifted flat domain `B⊥` and the pointwise order on finite function
//! tables.
//!
//! `Partial::Bottom` stands for non-termination and is below every other
//! element; two distinct `Value`s are incomparable.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::de::{DeserializeOwned, Error as _};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DomainError {
    #[error("function tables have different domains")]
    DomainMismatch,
    #[error("sequence is not a chain: index {later} is not above index {earlier}")]
    NotAChain { earlier: usize, later: usize },
    #[error("{0} is not in the table's domain")]
    NotInDomain(String),
    #[error("duplicate domain element {0}")]
    DuplicateElement(String),
    #[error("domain and entries have different lengths ({domain} vs {entries})")]
    LengthMismatch { domain: usize, entries: usize },
}

/// An element of the lifted domain `V⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Partial<V> {
    #[default]
    Bottom,
    Value(V),
}

impl<V> Partial<V> {
    pub fn is_bottom(&self) -> bool {
        matches!(self, Partial::Bottom)
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Partial::Value(_))
    }

    pub fn value(&self) -> Option<&V> {
        match self {
            Partial::Bottom => None,
            Partial::Value(v) => Some(v),
        }
    }

    pub fn into_option(self) -> Option<V> {
        match self {
            Partial::Bottom => None,
            Partial::Value(v) => Some(v),
        }
    }

    pub fn as_ref(&self) -> Partial<&V> {
        match self {
            Partial::Bottom => Partial::Bottom,
            Partial::Value(v) => Partial::Value(v),
        }
    }

    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> Partial<W> {
        match self {
            Partial::Bottom => Partial::Bottom,
            Partial::Value(v) => Partial::Value(f(v)),
        }
    }

    /// Strict application: `Bottom` in, `Bottom` out.
    pub fn and_then<W>(self, f: impl FnOnce(V) -> Partial<W>) -> Partial<W> {
        match self {
            Partial::Bottom => Partial::Bottom,
            Partial::Value(v) => f(v),
        }
    }
}

impl<V> From<Option<V>> for Partial<V> {
    fn from(o: Option<V>) -> Self {
        match o {
            None => Partial::Bottom,
            Some(v) => Partial::Value(v),
        }
    }
}

impl<V> From<Partial<V>> for Option<V> {
    fn from(p: Partial<V>) -> Self {
        p.into_option()
    }
}

impl<V: fmt::Display> fmt::Display for Partial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Partial::Bottom => f.write_str("⊥"),
            Partial::Value(v) => v.fmt(f),
        }
    }
}

// Bottom is `null` on the wire.
impl<V: Serialize> Serialize for Partial<V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.value().serialize(serializer)
    }
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for Partial<V> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Option::<V>::deserialize(deserializer).map(Partial::from)
    }
}

/// The flat order: `a ⊑ b` iff `a` is `Bottom` or `a == b`.
pub fn leq<V: PartialEq>(a: &Partial<V>, b: &Partial<V>) -> bool {
    match a {
        Partial::Bottom => true,
        Partial::Value(_) => a == b,
    }
}

/// True iff every adjacent pair is ordered by [`leq`].
pub fn is_ascending<V: PartialEq>(prefix: &[Partial<V>]) -> bool {
    prefix.windows(2).all(|w| leq(&w[0], &w[1]))
}

/// Least upper bound of the chain `seq(0), ..., seq(horizon)`.
///
/// Returns the first `Value` seen, or `Bottom` if none appears within the
/// horizon. Anything that is not a flat chain (two different values, or a
/// value followed by `Bottom`) is reported as [`DomainError::NotAChain`].
pub fn chain_lub<V, F>(seq: F, horizon: usize) -> Result<Partial<V>, DomainError>
where
    V: PartialEq,
    F: Fn(usize) -> Partial<V>,
{
    let mut found: Option<(usize, V)> = None;
    for n in 0..=horizon {
        let item = seq(n);
        match (&found, item) {
            (None, Partial::Bottom) => {}
            (None, Partial::Value(v)) => found = Some((n, v)),
            (Some((first, v)), item) => {
                if item.value() != Some(v) {
                    return Err(DomainError::NotAChain {
                        earlier: *first,
                        later: n,
                    });
                }
            }
        }
    }
    Ok(found.map(|(_, v)| v).into())
}

/// An explicit element of `A → B⊥` over a finite, ordered domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteFunTable<A, B> {
    domain: Vec<A>,
    entries: Vec<Partial<B>>,
}

impl<A: PartialEq + fmt::Debug, B> FiniteFunTable<A, B> {
    /// Builds a table from a domain and index-aligned entries.
    pub fn new(domain: Vec<A>, entries: Vec<Partial<B>>) -> Result<Self, DomainError> {
        if domain.len() != entries.len() {
            return Err(DomainError::LengthMismatch {
                domain: domain.len(),
                entries: entries.len(),
            });
        }
        for (i, a) in domain.iter().enumerate() {
            if domain[..i].contains(a) {
                return Err(DomainError::DuplicateElement(format!("{a:?}")));
            }
        }
        Ok(Self { domain, entries })
    }

    /// The table that is `Bottom` everywhere.
    pub fn bottom(domain: Vec<A>) -> Result<Self, DomainError> {
        let entries = domain.iter().map(|_| Partial::Bottom).collect();
        Self::new(domain, entries)
    }

    pub fn from_fn(domain: Vec<A>, f: impl Fn(&A) -> Partial<B>) -> Result<Self, DomainError> {
        let entries = domain.iter().map(&f).collect();
        Self::new(domain, entries)
    }

    pub fn position(&self, a: &A) -> Option<usize> {
        self.domain.iter().position(|d| d == a)
    }

    pub fn get(&self, a: &A) -> Result<&Partial<B>, DomainError> {
        self.position(a)
            .map(|i| &self.entries[i])
            .ok_or_else(|| DomainError::NotInDomain(format!("{a:?}")))
    }
}

impl<A, B> FiniteFunTable<A, B> {
    pub fn domain(&self) -> &[A] {
        &self.domain
    }

    pub fn entries(&self) -> &[Partial<B>] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (&A, &Partial<B>)> {
        self.domain.iter().zip(self.entries.iter())
    }

    pub fn is_bottom(&self) -> bool {
        self.entries.iter().all(Partial::is_bottom)
    }
}

/// Pointwise order on tables with identical domains.
pub fn fun_leq<A: PartialEq, B: PartialEq>(
    f: &FiniteFunTable<A, B>,
    g: &FiniteFunTable<A, B>,
) -> Result<bool, DomainError> {
    if f.domain != g.domain {
        return Err(DomainError::DomainMismatch);
    }
    Ok(f.entries.iter().zip(&g.entries).all(|(a, b)| leq(a, b)))
}

/// A map from function tables to function tables.
pub trait Functional<A, B> {
    fn apply(&self, f: &FiniteFunTable<A, B>) -> FiniteFunTable<A, B>;
}

impl<A, B, F> Functional<A, B> for F
where
    F: Fn(&FiniteFunTable<A, B>) -> FiniteFunTable<A, B>,
{
    fn apply(&self, f: &FiniteFunTable<A, B>) -> FiniteFunTable<A, B> {
        self(f)
    }
}

impl<A, B> Serialize for FiniteFunTable<A, B>
where
    A: Serialize + fmt::Display,
    B: Serialize,
{
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Entries<'a, A, B>(&'a FiniteFunTable<A, B>);

        impl<A: fmt::Display, B: Serialize> Serialize for Entries<'_, A, B> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.domain.len()))?;
                for (a, b) in self.0.iter() {
                    map.serialize_entry(&a.to_string(), b)?;
                }
                map.end()
            }
        }

        #[derive(Serialize)]
        struct Wire<'a, A: Serialize, E: Serialize> {
            domain: &'a [A],
            entries: E,
        }

        Wire {
            domain: &self.domain,
            entries: Entries(self),
        }
        .serialize(serializer)
    }
}

impl<'de, A, B> Deserialize<'de> for FiniteFunTable<A, B>
where
    A: DeserializeOwned + fmt::Display + fmt::Debug + FromStr + PartialEq,
    B: DeserializeOwned,
{
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire<A, B> {
            domain: Vec<A>,
            entries: HashMap<String, Partial<B>>,
        }

        let Wire::<A, B> {
            domain,
            mut entries,
        } = Wire::deserialize(deserializer)?;
        let mut aligned = Vec::with_capacity(domain.len());
        for a in &domain {
            let v = entries
                .remove(&a.to_string())
                .ok_or_else(|| D::Error::custom(format!("missing entry for domain element {a}")))?;
            aligned.push(v);
        }
        if let Some(extra) = entries.keys().next() {
            return Err(D::Error::custom(format!(
                "entry {extra:?} is not a domain element"
            )));
        }
        FiniteFunTable::new(domain, aligned).map_err(D::Error::custom)
    }
}
