//! Isotropy posets: orbit types ordered by subconjugation.
//!
//! An [`IsotropyPoset`] records, for every orbit type `(H)`, the dimension of
//! the stabilizer `H` and of its orbit-type manifold `Q_(H)`, together with the
//! strict order `(L) ≺ (H)` ("`L` is conjugate to a proper subgroup of `H`").
//! For abstract input the order is supplied by the caller; the torus builder in
//! [`crate::action`] derives it from character lattices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque orbit-type identifier.
pub type Label = String;

/// Default cap on the number of orbit types accepted by [`IsotropyPoset`].
pub const DEFAULT_MAX_TYPES: usize = 64;

/// A conjugacy class of stabilizers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitType {
    pub label: Label,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_tag: Option<String>,
    pub is_identity: bool,
}

/// Wire form of a poset, with the field names used on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDescription {
    #[serde(rename = "dim_Q")]
    pub dim_q: usize,
    #[serde(rename = "dim_G")]
    pub dim_g: usize,
    pub types: Vec<TypeDescription>,
    #[serde(default)]
    pub order: Vec<(Label, Label)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeDescription {
    pub label: Label,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
    #[serde(rename = "dim_Q_of")]
    pub dim_q_of: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_tag: Option<String>,
    /// Defaults to `dim_H == 0` with no finite tag.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_identity: Option<bool>,
}

/// One violated poset invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Reflexive {
        label: Label,
    },
    NotAntisymmetric {
        a: Label,
        b: Label,
    },
    NotTransitive {
        a: Label,
        b: Label,
        c: Label,
    },
    GroupDimension {
        label: Label,
        dim_h: usize,
        dim_g: usize,
    },
    OrderAgainstDimension {
        lower: Label,
        upper: Label,
    },
    StratumTooLarge {
        label: Label,
        dim_q_of: usize,
        dim_q: usize,
    },
    OrbitDoesNotFit {
        label: Label,
        dim_q_of: usize,
        orbit_dim: usize,
    },
    MultipleIdentities {
        labels: Vec<Label>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Reflexive { label } => {
                write!(f, "({label}) ≺ ({label}) breaks irreflexivity")
            }
            Violation::NotAntisymmetric { a, b } => {
                write!(f, "({a}) ≺ ({b}) and ({b}) ≺ ({a}) break antisymmetry")
            }
            Violation::NotTransitive { a, b, c } => {
                write!(f, "({a}) ≺ ({b}) ≺ ({c}) but not ({a}) ≺ ({c})")
            }
            Violation::GroupDimension {
                label,
                dim_h,
                dim_g,
            } => {
                write!(f, "dim of ({label}) is {dim_h} > dim G = {dim_g}")
            }
            Violation::OrderAgainstDimension { lower, upper } => write!(
                f,
                "({lower}) ≺ ({upper}) needs a smaller stabilizer or a distinct finite tag"
            ),
            Violation::StratumTooLarge {
                label,
                dim_q_of,
                dim_q,
            } => {
                write!(f, "dim Q_({label}) = {dim_q_of} exceeds dim Q = {dim_q}")
            }
            Violation::OrbitDoesNotFit {
                label,
                dim_q_of,
                orbit_dim,
            } => write!(
                f,
                "dim Q_({label}) = {dim_q_of} is smaller than its orbits ({orbit_dim})"
            ),
            Violation::MultipleIdentities { labels } => {
                write!(f, "several types flagged as the identity: {labels:?}")
            }
        }
    }
}

/// Outcome of [`IsotropyPoset::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Hypotheses that abstract input cannot witness and are taken on trust.
    pub assumptions: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Finite poset of orbit types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyPoset {
    types: Vec<OrbitType>,
    dim_q_of: Vec<usize>,
    index: BTreeMap<Label, usize>,
    // less[a][b] <=> a ≺ b
    less: Vec<Vec<bool>>,
    dim_g: usize,
    dim_q: usize,
}

impl IsotropyPoset {
    /// Builds a poset, rejecting only structural problems (unknown or repeated
    /// labels, size above the cap). Order-theoretic and dimensional invariants
    /// are reported by [`validate`](Self::validate).
    pub fn new(
        dim_q: usize,
        dim_g: usize,
        types: Vec<(OrbitType, usize)>,
        order: &[(Label, Label)],
    ) -> Result<Self> {
        Self::with_cap(dim_q, dim_g, types, order, DEFAULT_MAX_TYPES)
    }

    pub fn with_cap(
        dim_q: usize,
        dim_g: usize,
        types: Vec<(OrbitType, usize)>,
        order: &[(Label, Label)],
        cap: usize,
    ) -> Result<Self> {
        if types.len() > cap {
            return Err(Error::PosetTooLarge {
                size: types.len(),
                cap,
            });
        }
        let mut index = BTreeMap::new();
        for (i, (t, _)) in types.iter().enumerate() {
            if index.insert(t.label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(t.label.clone()));
            }
        }
        let n = types.len();
        let mut less = vec![vec![false; n]; n];
        for (a, b) in order {
            let ia = *index.get(a).ok_or_else(|| Error::UnknownLabel(a.clone()))?;
            let ib = *index.get(b).ok_or_else(|| Error::UnknownLabel(b.clone()))?;
            less[ia][ib] = true;
        }
        let (types, dim_q_of) = types.into_iter().unzip();
        Ok(Self {
            types,
            dim_q_of,
            index,
            less,
            dim_g,
            dim_q,
        })
    }

    pub fn from_description(desc: &PosetDescription) -> Result<Self> {
        let types = desc
            .types
            .iter()
            .map(|t| {
                let is_identity = t
                    .is_identity
                    .unwrap_or(t.dim_h == 0 && t.finite_tag.is_none());
                (
                    OrbitType {
                        label: t.label.clone(),
                        dim_h: t.dim_h,
                        finite_tag: t.finite_tag.clone(),
                        is_identity,
                    },
                    t.dim_q_of,
                )
            })
            .collect();
        Self::new(desc.dim_q, desc.dim_g, types, &desc.order)
    }

    pub fn to_description(&self) -> PosetDescription {
        PosetDescription {
            dim_q: self.dim_q,
            dim_g: self.dim_g,
            types: self
                .types
                .iter()
                .zip(&self.dim_q_of)
                .map(|(t, &d)| TypeDescription {
                    label: t.label.clone(),
                    dim_h: t.dim_h,
                    dim_q_of: d,
                    finite_tag: t.finite_tag.clone(),
                    is_identity: Some(t.is_identity),
                })
                .collect(),
            order: self.order_pairs().into_iter().collect(),
        }
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn dim_q(&self) -> usize {
        self.dim_q
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn types(&self) -> &[OrbitType] {
        &self.types
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.types.iter().map(|t| &t.label)
    }

    pub fn get(&self, label: &str) -> Result<&OrbitType> {
        self.idx(label).map(|i| &self.types[i])
    }

    fn idx(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Dimension of the orbit-type manifold `Q_(H)`.
    pub fn dim_q_of(&self, label: &str) -> Result<usize> {
        self.idx(label).map(|i| self.dim_q_of[i])
    }

    /// Dimension of the quotient stratum `Q^(H) = Q_(H)/G`, which may be
    /// negative for inconsistent input.
    pub fn quotient_dim(&self, label: &str) -> Result<i64> {
        let i = self.idx(label)?;
        Ok(self.dim_q_of[i] as i64 - self.dim_g as i64 + self.types[i].dim_h as i64)
    }

    pub fn is_subconjugate(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.less[self.idx(a)?][self.idx(b)?])
    }

    /// Stored relation as `(lower, upper)` label pairs.
    pub fn order_pairs(&self) -> BTreeSet<(Label, Label)> {
        let mut out = BTreeSet::new();
        for (i, row) in self.less.iter().enumerate() {
            for (j, &lt) in row.iter().enumerate() {
                if lt {
                    out.insert((self.types[i].label.clone(), self.types[j].label.clone()));
                }
            }
        }
        out
    }

    /// Labels strictly above `label`.
    pub fn above(&self, label: &str) -> Result<Vec<&Label>> {
        let i = self.idx(label)?;
        Ok((0..self.len())
            .filter(|&j| self.less[i][j])
            .map(|j| &self.types[j].label)
            .collect())
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let mut violations = Vec::new();
        let lab = |i: usize| self.types[i].label.clone();
        for i in 0..n {
            if self.less[i][i] {
                violations.push(Violation::Reflexive { label: lab(i) });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.less[i][j] && self.less[j][i] {
                    violations.push(Violation::NotAntisymmetric {
                        a: lab(i),
                        b: lab(j),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.less[i][j] || i == j {
                    continue;
                }
                for k in 0..n {
                    if self.less[j][k] && !self.less[i][k] && i != k && j != k {
                        violations.push(Violation::NotTransitive {
                            a: lab(i),
                            b: lab(j),
                            c: lab(k),
                        });
                    }
                }
            }
        }
        for (i, t) in self.types.iter().enumerate() {
            if t.dim_h > self.dim_g {
                violations.push(Violation::GroupDimension {
                    label: lab(i),
                    dim_h: t.dim_h,
                    dim_g: self.dim_g,
                });
            }
            if self.dim_q_of[i] > self.dim_q {
                violations.push(Violation::StratumTooLarge {
                    label: lab(i),
                    dim_q_of: self.dim_q_of[i],
                    dim_q: self.dim_q,
                });
            }
            let orbit_dim = self.dim_g.saturating_sub(t.dim_h);
            if self.dim_q_of[i] < orbit_dim {
                violations.push(Violation::OrbitDoesNotFit {
                    label: lab(i),
                    dim_q_of: self.dim_q_of[i],
                    orbit_dim,
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.less[i][j] {
                    continue;
                }
                let (lo, hi) = (&self.types[i], &self.types[j]);
                let ok =
                    lo.dim_h < hi.dim_h || (lo.dim_h == hi.dim_h && lo.finite_tag != hi.finite_tag);
                if !ok {
                    violations.push(Violation::OrderAgainstDimension {
                        lower: lab(i),
                        upper: lab(j),
                    });
                }
            }
        }
        let identities: Vec<Label> = self
            .types
            .iter()
            .filter(|t| t.is_identity)
            .map(|t| t.label.clone())
            .collect();
        if identities.len() > 1 {
            violations.push(Violation::MultipleIdentities { labels: identities });
        }
        ValidationReport {
            violations,
            assumptions: vec![
                "all connected components of each orbit-type manifold share one dimension".into(),
            ],
        }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidPoset(v.to_string())),
        }
    }

    /// The unique minimal orbit type.
    pub fn principal_type(&self) -> Result<&OrbitType> {
        let minimal: Vec<usize> = (0..self.len())
            .filter(|&j| !(0..self.len()).any(|i| i != j && self.less[i][j]))
            .collect();
        match minimal.as_slice() {
            [only] => Ok(&self.types[*only]),
            other => Err(Error::NoUniqueMinimum(other.len())),
        }
    }
}

/// Transitive closure of a relation given as ordered pairs.
pub fn transitive_closure<T: Ord + Clone>(relation: &BTreeSet<(T, T)>) -> BTreeSet<(T, T)> {
    let mut succ: BTreeMap<T, BTreeSet<T>> = BTreeMap::new();
    for (a, b) in relation {
        succ.entry(a.clone()).or_default().insert(b.clone());
    }
    let mut out = BTreeSet::new();
    for start in succ.keys() {
        let mut stack: Vec<T> = succ[start].iter().cloned().collect();
        let mut seen = BTreeSet::new();
        while let Some(v) = stack.pop() {
            if !seen.insert(v.clone()) {
                continue;
            }
            if let Some(next) = succ.get(&v) {
                stack.extend(next.iter().cloned());
            }
        }
        for v in seen {
            out.insert((start.clone(), v));
        }
    }
    out
}

/// Transitive reduction (Hasse edges) of an acyclic relation.
///
/// The input need not be transitively closed; the result is the unique
/// minimal relation with the same transitive closure.
pub fn hasse_edges<T: Ord + Clone + fmt::Debug>(
    relation: &BTreeSet<(T, T)>,
) -> Result<BTreeSet<(T, T)>> {
    let closure = transitive_closure(relation);
    if let Some((a, _)) = closure.iter().find(|(a, b)| a == b) {
        return Err(Error::CyclicRelation(format!("{a:?}")));
    }
    let mut succ: BTreeMap<&T, Vec<&T>> = BTreeMap::new();
    for (a, b) in &closure {
        succ.entry(a).or_default().push(b);
    }
    Ok(closure
        .iter()
        .filter(|(a, c)| {
            !succ[a]
                .iter()
                .any(|b| *b != c && closure.contains(&((*b).clone(), c.clone())))
        })
        .cloned()
        .collect())
}
