//! Linear torus actions on `R^{2n}` by weighted plane rotations.
//!
//! The torus `T^k` acts on plane `j` through the character `a_j`, the `j`-th
//! column of the integer weight matrix. A point whose nonzero planes form the
//! support `S` is fixed exactly by the annihilator of the lattice
//! `Λ_S = span_Z {a_j : j ∈ S}`, so stabilizer classes, their dimensions and
//! their finite parts all come from integer linear algebra on `Λ_S`.
//!
//! Plane indices are zero-based throughout the API.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{smith_invariants, IntLattice};
use crate::poset::{IsotropyPoset, Label, OrbitType};

pub const DEFAULT_MAX_WEIGHT: i64 = 16;
/// Supports are enumerated exhaustively, so the plane count is bounded.
pub const MAX_PLANES: usize = 16;

/// Weight matrix of a torus action, row-major `k × n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusActionSpec {
    pub k: usize,
    pub n: usize,
    pub weights: Vec<Vec<i64>>,
}

impl TorusActionSpec {
    pub fn new(weights: Vec<Vec<i64>>) -> Result<Self> {
        let k = weights.len();
        let n = weights.first().map_or(0, Vec::len);
        let spec = Self { k, n, weights };
        spec.check(DEFAULT_MAX_WEIGHT)?;
        Ok(spec)
    }

    pub fn check(&self, max_weight: i64) -> Result<()> {
        if self.k == 0 || self.n == 0 {
            return Err(Error::InvalidAction(
                "torus and plane counts must be positive".into(),
            ));
        }
        if self.n > MAX_PLANES {
            return Err(Error::InvalidAction(format!(
                "{} planes exceed the limit of {MAX_PLANES}",
                self.n
            )));
        }
        if self.weights.len() != self.k || self.weights.iter().any(|r| r.len() != self.n) {
            return Err(Error::InvalidAction(format!(
                "weights must be a {}×{} matrix",
                self.k, self.n
            )));
        }
        if let Some(v) = self.weights.iter().flatten().find(|v| v.abs() > max_weight) {
            return Err(Error::InvalidAction(format!(
                "weight {v} exceeds |a| ≤ {max_weight}"
            )));
        }
        if let Some(j) = (0..self.n).find(|&j| self.column(j).iter().all(|&v| v == 0)) {
            return Err(Error::InvalidAction(format!(
                "plane {j} is not acted on (zero column)"
            )));
        }
        Ok(())
    }

    /// Weight vector of plane `j`.
    pub fn column(&self, j: usize) -> Vec<i64> {
        self.weights.iter().map(|row| row[j]).collect()
    }

    pub fn dim_q(&self) -> usize {
        2 * self.n
    }

    pub fn support_lattice(&self, support: &BTreeSet<usize>) -> IntLattice {
        let gens: Vec<Vec<i64>> = support.iter().map(|&j| self.column(j)).collect();
        IntLattice::span(&gens, self.k)
    }
}

/// Stabilizer of the points with a given support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportStabilizer {
    pub support: BTreeSet<usize>,
    pub dim_stab: usize,
    /// Orders of the cyclic factors of the finite component group.
    pub finite_invariants: Vec<i64>,
    #[serde(skip)]
    pub lattice: IntLattice,
}

pub fn stabilizer_of_support(
    spec: &TorusActionSpec,
    support: &BTreeSet<usize>,
) -> SupportStabilizer {
    let lattice = spec.support_lattice(support);
    let gens: Vec<Vec<i64>> = support.iter().map(|&j| spec.column(j)).collect();
    let finite_invariants = smith_invariants(&gens, spec.k)
        .into_iter()
        .filter(|&d| d > 1)
        .collect();
    SupportStabilizer {
        support: support.clone(),
        dim_stab: spec.k - lattice.rank(),
        finite_invariants,
        lattice,
    }
}

/// A stabilizer class together with every support realizing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerClass {
    pub label: Label,
    pub dim_stab: usize,
    pub finite_invariants: Vec<i64>,
    /// Planes fixed by the stabilizer; the largest support in the class.
    pub fixed_planes: BTreeSet<usize>,
    pub supports: Vec<BTreeSet<usize>>,
    #[serde(skip)]
    pub lattice: IntLattice,
}

/// What to do when an orbit-type manifold would have components of
/// different dimensions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DimensionPolicy {
    #[default]
    Warn,
    Fail,
}

/// All stabilizer data of a torus action, indexed by support bitmask.
#[derive(Clone, Debug)]
pub struct TorusModel {
    spec: TorusActionSpec,
    classes: Vec<StabilizerClass>,
    class_of_mask: Vec<usize>,
    poset: IsotropyPoset,
    warnings: Vec<String>,
}

fn mask_to_set(mask: usize, n: usize) -> BTreeSet<usize> {
    (0..n).filter(|j| mask >> j & 1 == 1).collect()
}

const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

fn digits(v: u64, table: &[char; 10]) -> String {
    v.to_string()
        .bytes()
        .map(|b| table[(b - b'0') as usize])
        .collect()
}

/// Human-readable label of the stabilizer annihilating `lattice`.
///
/// Coordinate-aligned stabilizers are written as products of per-factor
/// groups (`e`, `Z₂`, `S¹`), with the all-trivial and all-circle cases
/// collapsed to `e` and `Tᵏ`. Other subgroups are named by the planes they fix.
fn stabilizer_label(lattice: &IntLattice, fixed_planes: &BTreeSet<usize>) -> Label {
    let k = lattice.width();
    match lattice.diagonal_entries() {
        Some(entries) => {
            if entries.iter().all(|e| *e == Some(1)) {
                return "e".into();
            }
            if entries.iter().all(Option::is_none) {
                return match k {
                    1 => "S¹".into(),
                    _ => format!("T{}", digits(k as u64, &SUPERSCRIPTS)),
                };
            }
            entries
                .iter()
                .map(|e| match e {
                    None => "S¹".to_string(),
                    Some(1) => "e".to_string(),
                    Some(d) => format!("Z{}", digits(*d as u64, &SUBSCRIPTS)),
                })
                .collect::<Vec<_>>()
                .join("×")
        }
        None => {
            let planes: Vec<String> = fixed_planes.iter().map(|j| (j + 1).to_string()).collect();
            format!("Fix{{{}}}", planes.join(","))
        }
    }
}

impl TorusModel {
    pub fn new(spec: TorusActionSpec) -> Result<Self> {
        Self::with_policy(spec, DimensionPolicy::Warn)
    }

    pub fn with_policy(spec: TorusActionSpec, policy: DimensionPolicy) -> Result<Self> {
        Self::with_options(spec, policy, DEFAULT_MAX_WEIGHT)
    }

    pub fn with_options(
        spec: TorusActionSpec,
        policy: DimensionPolicy,
        max_weight: i64,
    ) -> Result<Self> {
        spec.check(max_weight)?;
        let n = spec.n;
        let mut by_lattice: BTreeMap<IntLattice, usize> = BTreeMap::new();
        let mut classes: Vec<StabilizerClass> = Vec::new();
        let mut class_of_mask = vec![0; 1 << n];
        for mask in 0..1usize << n {
            let support = mask_to_set(mask, n);
            let stab = stabilizer_of_support(&spec, &support);
            let ci = *by_lattice.entry(stab.lattice.clone()).or_insert_with(|| {
                classes.push(StabilizerClass {
                    label: String::new(),
                    dim_stab: stab.dim_stab,
                    finite_invariants: stab.finite_invariants.clone(),
                    fixed_planes: BTreeSet::new(),
                    supports: Vec::new(),
                    lattice: stab.lattice.clone(),
                });
                classes.len() - 1
            });
            classes[ci].supports.push(support);
            class_of_mask[mask] = ci;
        }
        for class in &mut classes {
            class.fixed_planes = (0..n)
                .filter(|&j| class.lattice.contains(&spec.column(j)))
                .collect();
            class.label = stabilizer_label(&class.lattice, &class.fixed_planes);
        }

        // Q_(H) is the union of the support cells in the class. Its dimension
        // is that of the largest cell; maximal cells of different sizes would
        // mean components of different dimensions.
        let mut warnings = Vec::new();
        for class in &classes {
            let maximal: BTreeSet<usize> = class
                .supports
                .iter()
                .filter(|s| !class.supports.iter().any(|t| t != *s && s.is_subset(t)))
                .map(|s| 2 * s.len())
                .collect();
            if maximal.len() > 1 {
                let dims: Vec<usize> = maximal.into_iter().collect();
                if policy == DimensionPolicy::Fail {
                    return Err(Error::EqualDimensionAssumptionViolated {
                        label: class.label.clone(),
                        dims,
                    });
                }
                warnings.push(format!(
                    "orbit type ({}) has components of dimensions {dims:?}; using the largest",
                    class.label
                ));
            }
        }

        // Principal type first, then by growing stabilizer.
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by(|&a, &b| {
            let (ca, cb) = (&classes[a], &classes[b]);
            (
                ca.dim_stab,
                std::cmp::Reverse(ca.fixed_planes.len()),
                &ca.fixed_planes,
            )
                .cmp(&(
                    cb.dim_stab,
                    std::cmp::Reverse(cb.fixed_planes.len()),
                    &cb.fixed_planes,
                ))
        });
        let mut remap = vec![0; classes.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut slots: Vec<Option<StabilizerClass>> = classes.into_iter().map(Some).collect();
        let classes: Vec<StabilizerClass> =
            order.iter().map(|&i| slots[i].take().unwrap()).collect();
        let class_of_mask: Vec<usize> = class_of_mask.into_iter().map(|c| remap[c]).collect();

        let types = classes
            .iter()
            .map(|c| {
                (
                    OrbitType {
                        label: c.label.clone(),
                        dim_h: c.dim_stab,
                        finite_tag: (!c.finite_invariants.is_empty())
                            .then(|| format!("{:?}", c.finite_invariants)),
                        is_identity: c.dim_stab == 0 && c.finite_invariants.is_empty(),
                    },
                    2 * c.fixed_planes.len(),
                )
            })
            .collect();
        // L ≺ H iff L ⊊ H iff Λ_H ⊊ Λ_L.
        let mut pairs = Vec::new();
        for lo in &classes {
            for hi in &classes {
                if lo.lattice != hi.lattice && hi.lattice.is_sublattice_of(&lo.lattice) {
                    pairs.push((lo.label.clone(), hi.label.clone()));
                }
            }
        }
        let poset = IsotropyPoset::with_cap(spec.dim_q(), spec.k, types, &pairs, usize::MAX)?;
        Ok(Self {
            spec,
            classes,
            class_of_mask,
            poset,
            warnings,
        })
    }

    pub fn spec(&self) -> &TorusActionSpec {
        &self.spec
    }

    pub fn poset(&self) -> &IsotropyPoset {
        &self.poset
    }

    pub fn classes(&self) -> &[StabilizerClass] {
        &self.classes
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn class_of_support(&self, support: &BTreeSet<usize>) -> Result<&StabilizerClass> {
        let mut mask = 0usize;
        for &j in support {
            if j >= self.spec.n {
                return Err(Error::Precondition(format!("plane {j} out of range")));
            }
            mask |= 1 << j;
        }
        Ok(&self.classes[self.class_of_mask[mask]])
    }

    pub fn label_of_support(&self, support: &BTreeSet<usize>) -> Result<&Label> {
        self.class_of_support(support).map(|c| &c.label)
    }
}

/// Builds the isotropy poset of a torus action.
pub fn build_isotropy_poset(spec: &TorusActionSpec) -> Result<IsotropyPoset> {
    TorusModel::new(spec.clone()).map(|m| m.poset().clone())
}

/// One failed clause of the almost-semifree definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum SemifreeFailure {
    /// The principal stabilizer is not trivial.
    #[serde(rename = "a")]
    NotFreeAlmostEverywhere { principal: Label },
    /// `dim Q_(H) ≠ dim G − dim H` for a type of non-maximal orbit dimension.
    #[serde(rename = "b")]
    OrbitsNotIsolated {
        label: Label,
        dim_q_of: usize,
        orbit_dim: usize,
    },
    /// The adjoint action of a nontrivial stabilizer on `g/h ∖ {0}` is not
    /// free; for tori this means the stabilizer is not the whole group.
    #[serde(rename = "c")]
    AdjointNotFree {
        label: Label,
        dim_h: usize,
        dim_g: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemifreeReport {
    pub almost_semifree: bool,
    /// Failed clauses in the order a, b, c.
    pub failures: Vec<SemifreeFailure>,
}

impl SemifreeReport {
    pub fn first_failure(&self) -> Option<&SemifreeFailure> {
        self.failures.first()
    }
}

/// Checks the almost-semifree clauses on an isotropy poset of an abelian
/// action.
pub fn poset_is_almost_semifree(poset: &IsotropyPoset) -> Result<SemifreeReport> {
    let principal = poset.principal_type()?;
    let dim_g = poset.dim_g();
    let mut failures = Vec::new();
    if !principal.is_identity {
        failures.push(SemifreeFailure::NotFreeAlmostEverywhere {
            principal: principal.label.clone(),
        });
    }
    let max_orbit = poset
        .types()
        .iter()
        .map(|t| dim_g.saturating_sub(t.dim_h))
        .max()
        .unwrap_or(0);
    for t in poset.types() {
        let orbit_dim = dim_g.saturating_sub(t.dim_h);
        let dim_q_of = poset.dim_q_of(&t.label)?;
        if orbit_dim < max_orbit && dim_q_of != orbit_dim {
            failures.push(SemifreeFailure::OrbitsNotIsolated {
                label: t.label.clone(),
                dim_q_of,
                orbit_dim,
            });
        }
    }
    for t in poset.types() {
        if !t.is_identity && t.dim_h != dim_g {
            failures.push(SemifreeFailure::AdjointNotFree {
                label: t.label.clone(),
                dim_h: t.dim_h,
                dim_g,
            });
        }
    }
    Ok(SemifreeReport {
        almost_semifree: failures.is_empty(),
        failures,
    })
}

pub fn is_almost_semifree(spec: &TorusActionSpec) -> Result<SemifreeReport> {
    poset_is_almost_semifree(TorusModel::new(spec.clone())?.poset())
}

/// Whether the lifted action on the cosphere bundle is free, which happens
/// exactly when the base action is almost semifree.
pub fn lifted_action_is_free(spec: &TorusActionSpec) -> Result<bool> {
    Ok(is_almost_semifree(spec)?.almost_semifree)
}
