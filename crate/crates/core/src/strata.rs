//! Contact, secondary and C-L stratifications of the reduced space
//! `C₀ = J⁻¹(0)/G`, computed as dimension bookkeeping over an isotropy poset.
//!
//! The zero level only carries the orbit types of the starred lattice `I*_Q`
//! (types whose quotient stratum `Q^(H)` has positive dimension). Each such
//! `(L)` gives a contact stratum `C₀^(L)`, which splits into an open dense
//! cosphere-like piece `CC_(L)` and one seam `CS_(H)≻(L)` for every `(H) ≻ (L)`.
//! Seams over starred types are coisotropic, the others Legendrian.
//!
//! Frontier pairs are written `(A, B)` with the meaning `A ⊆ closure(B)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::action::poset_is_almost_semifree;
use crate::error::{Error, Result};
use crate::poset::{hasse_edges, transitive_closure, IsotropyPoset, Label};

/// Structured stratum name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StratumName {
    Contact(Label),
    Cc(Label),
    Seam { high: Label, low: Label },
}

impl StratumName {
    pub fn seam(high: impl Into<Label>, low: impl Into<Label>) -> Self {
        StratumName::Seam {
            high: high.into(),
            low: low.into(),
        }
    }

    pub fn cc(label: impl Into<Label>) -> Self {
        StratumName::Cc(label.into())
    }
}

impl fmt::Display for StratumName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumName::Contact(l) => write!(f, "Contact({l})"),
            StratumName::Cc(l) => write!(f, "CC({l})"),
            StratumName::Seam { high, low } => write!(f, "CS({high}≻{low})"),
        }
    }
}

impl Serialize for StratumName {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumKind {
    ContactStratum,
    CosphereLike,
    CoisotropicSeam,
    LegendrianSeam,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub name: StratumName,
    pub dim: usize,
    pub kind: StratumKind,
    /// Orbit type of the stratum of `Q/G` this piece projects onto.
    pub base_target: Label,
    pub parent_contact: Label,
    pub open_dense: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StratifyOptions {
    /// Whether `Q/G` is connected; density claims are dropped otherwise.
    pub quotient_connected: bool,
}

impl Default for StratifyOptions {
    fn default() -> Self {
        Self {
            quotient_connected: true,
        }
    }
}

fn serialize_pairs<S: Serializer>(
    pairs: &BTreeSet<(StratumName, StratumName)>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(pairs.iter().map(|(a, b)| [a.to_string(), b.to_string()]))
}

/// Full output of [`cl_stratification`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratificationResult {
    pub starred_types: Vec<Label>,
    pub contact_strata: Vec<Stratum>,
    #[serde(serialize_with = "serialize_pairs")]
    pub contact_frontier: BTreeSet<(StratumName, StratumName)>,
    pub cl_strata: Vec<Stratum>,
    /// `(A, B)` means `A ⊆ closure(B)`, `A ≠ B`.
    #[serde(serialize_with = "serialize_pairs")]
    pub frontier: BTreeSet<(StratumName, StratumName)>,
    /// Frontier pairs implied by transitivity but not produced by any rule.
    #[serde(serialize_with = "serialize_pairs")]
    pub closure_only: BTreeSet<(StratumName, StratumName)>,
    #[serde(serialize_with = "serialize_pairs")]
    pub hasse: BTreeSet<(StratumName, StratumName)>,
    pub strictly_finer: bool,
    pub smooth_total_space: bool,
}

impl StratificationResult {
    pub fn stratum(&self, name: &StratumName) -> Option<&Stratum> {
        self.cl_strata.iter().find(|s| &s.name == name)
    }

    pub fn open_dense(&self) -> Vec<&Stratum> {
        self.cl_strata.iter().filter(|s| s.open_dense).collect()
    }
}

/// Types whose quotient stratum `Q^(H)` has positive dimension.
pub fn starred_lattice(poset: &IsotropyPoset) -> Vec<Label> {
    poset
        .labels()
        .filter(|l| poset.quotient_dim(l).map_or(false, |d| d >= 1))
        .cloned()
        .collect()
}

/// Orbit types occurring in `J⁻¹(0)`; these are exactly the starred types.
pub fn zero_level_types(poset: &IsotropyPoset) -> Vec<Label> {
    starred_lattice(poset)
}

fn is_starred(poset: &IsotropyPoset, label: &str) -> Result<bool> {
    Ok(poset.quotient_dim(label)? >= 1)
}

fn to_dim(d: i64, what: impl FnOnce() -> String) -> Result<usize> {
    usize::try_from(d)
        .map_err(|_| Error::InconsistentDimensions(format!("{} has dimension {d}", what())))
}

/// `dim C₀^(L) = 2 dim Q^(L) − 1`.
pub fn contact_dim(poset: &IsotropyPoset, label: &str) -> Result<i64> {
    Ok(2 * poset.quotient_dim(label)? - 1)
}

/// Seam dimension `dim Q_(H) + dim Q_(L) − 2 dim G + dim H + dim L − 1`.
///
/// With `high == low` this is the dimension of `CC_(L)`.
pub fn seam_dim(poset: &IsotropyPoset, high: &str, low: &str) -> Result<i64> {
    let h = poset.get(high)?;
    let l = poset.get(low)?;
    Ok(
        poset.dim_q_of(high)? as i64 + poset.dim_q_of(low)? as i64 - 2 * poset.dim_g() as i64
            + h.dim_h as i64
            + l.dim_h as i64
            - 1,
    )
}

/// One contact stratum per starred type.
pub fn contact_strata(poset: &IsotropyPoset) -> Result<Vec<Stratum>> {
    let principal = poset.principal_type().ok().map(|t| t.label.clone());
    starred_lattice(poset)
        .into_iter()
        .map(|l| {
            let dim = to_dim(contact_dim(poset, &l)?, || format!("Contact({l})"))?;
            Ok(Stratum {
                name: StratumName::Contact(l.clone()),
                dim,
                kind: StratumKind::ContactStratum,
                base_target: l.clone(),
                parent_contact: l.clone(),
                open_dense: principal.as_deref() == Some(l.as_str()),
            })
        })
        .collect()
}

/// `Contact(K) ⊆ closure(Contact(H))` iff `(H) ≺ (K)`.
pub fn contact_frontier(poset: &IsotropyPoset) -> Result<BTreeSet<(StratumName, StratumName)>> {
    let starred = starred_lattice(poset);
    let mut out = BTreeSet::new();
    for h in &starred {
        for k in &starred {
            if poset.is_subconjugate(h, k)? {
                out.insert((
                    StratumName::Contact(k.clone()),
                    StratumName::Contact(h.clone()),
                ));
            }
        }
    }
    Ok(out)
}

/// Kind of the seam `CS_(H)≻(L)`, after checking the coisotropy excess
/// `dim CS − (dim C₀^(L) − 1)/2 = dim Q^(H)`.
pub fn classify_seam(poset: &IsotropyPoset, high: &str, low: &str) -> Result<StratumKind> {
    if !poset.is_subconjugate(low, high)? {
        return Err(Error::NoSuchSeam {
            high: high.into(),
            low: low.into(),
        });
    }
    if !is_starred(poset, low)? {
        return Err(Error::NotStarredType(low.into()));
    }
    let seam = seam_dim(poset, high, low)?;
    let half = (contact_dim(poset, low)? - 1) / 2;
    let excess = seam - half;
    let expected = poset.quotient_dim(high)?;
    if excess != expected || excess < 0 {
        return Err(Error::InconsistentDimensions(format!(
            "CS({high}≻{low}) exceeds half the contact dimension by {excess}, expected {expected}"
        )));
    }
    Ok(if excess > 0 {
        StratumKind::CoisotropicSeam
    } else {
        StratumKind::LegendrianSeam
    })
}

/// `CC_(L)` followed by the seams of `C₀^(L)`.
pub fn secondary_strata(poset: &IsotropyPoset, low: &str) -> Result<Vec<Stratum>> {
    if !is_starred(poset, low)? {
        return Err(Error::NotStarredType(low.into()));
    }
    let cc_dim = to_dim(seam_dim(poset, low, low)?, || format!("CC({low})"))?;
    let mut out = vec![Stratum {
        name: StratumName::cc(low),
        dim: cc_dim,
        kind: StratumKind::CosphereLike,
        base_target: low.into(),
        parent_contact: low.into(),
        open_dense: false,
    }];
    for high in poset.above(low)? {
        let dim = to_dim(seam_dim(poset, high, low)?, || format!("CS({high}≻{low})"))?;
        out.push(Stratum {
            name: StratumName::seam(high.as_str(), low),
            dim,
            kind: classify_seam(poset, high, low)?,
            base_target: high.clone(),
            parent_contact: low.into(),
            open_dense: false,
        });
    }
    Ok(out)
}

/// Frontier pairs produced directly by the five C-L rules.
fn rule_pairs(
    poset: &IsotropyPoset,
    starred: &[Label],
) -> Result<BTreeSet<(StratumName, StratumName)>> {
    let lt = |a: &str, b: &str| poset.is_subconjugate(a, b);
    let all: Vec<&Label> = poset.labels().collect();
    let mut out = BTreeSet::new();
    for h in starred {
        for k in &all {
            if !lt(h, k)? {
                continue;
            }
            // (i) CC(K) ⊂ ∂CC(H) and (iii) CC(K) ⊂ ∂CS(K≻H), for starred K.
            if starred.contains(k) {
                out.insert((StratumName::cc(k.as_str()), StratumName::cc(h.as_str())));
                out.insert((
                    StratumName::cc(k.as_str()),
                    StratumName::seam(k.as_str(), h.as_str()),
                ));
            }
            // (ii) CS(K≻H) ⊂ ∂CC(H).
            out.insert((
                StratumName::seam(k.as_str(), h.as_str()),
                StratumName::cc(h.as_str()),
            ));
            // (iv) CS(K'≻H) ⊂ ∂CS(K≻H) for H ≺ K ≺ K'.
            for k2 in &all {
                if lt(k, k2)? {
                    out.insert((
                        StratumName::seam(k2.as_str(), h.as_str()),
                        StratumName::seam(k.as_str(), h.as_str()),
                    ));
                }
            }
            // (v) CS(K≻H') ⊂ ∂CS(K≻H) for H ≺ H' ≺ K, H' starred.
            for h2 in starred {
                if lt(h, h2)? && lt(h2, k)? {
                    out.insert((
                        StratumName::seam(k.as_str(), h2.as_str()),
                        StratumName::seam(k.as_str(), h.as_str()),
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// The C-L stratification with its frontier relation.
pub fn cl_stratification(poset: &IsotropyPoset) -> Result<StratificationResult> {
    cl_stratification_with(poset, StratifyOptions::default())
}

pub fn cl_stratification_with(
    poset: &IsotropyPoset,
    options: StratifyOptions,
) -> Result<StratificationResult> {
    poset.ensure_valid()?;
    let starred = starred_lattice(poset);
    let mut contact = contact_strata(poset)?;
    let mut cl_strata = Vec::new();
    for l in &starred {
        cl_strata.extend(secondary_strata(poset, l)?);
    }
    let principal = poset.principal_type().ok().map(|t| t.label.clone());
    let dense = |l: &str| options.quotient_connected && principal.as_deref() == Some(l);
    for s in &mut cl_strata {
        s.open_dense = s.kind == StratumKind::CosphereLike && dense(&s.parent_contact);
    }
    for s in &mut contact {
        s.open_dense = dense(&s.parent_contact);
    }

    let generated = rule_pairs(poset, &starred)?;
    let frontier = transitive_closure(&generated);
    let closure_only = frontier.difference(&generated).cloned().collect();
    let hasse = hasse_edges(&frontier)?;
    let strictly_finer = cl_strata.len() > contact.len();
    Ok(StratificationResult {
        starred_types: starred,
        contact_frontier: contact_frontier(poset)?,
        contact_strata: contact,
        cl_strata,
        frontier,
        closure_only,
        hasse,
        strictly_finer,
        smooth_total_space: false,
    })
}

/// Outcome of [`is_finer_than_contact`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Refinement {
    pub finer: bool,
    pub strict: bool,
}

/// Every C-L stratum lies in exactly one contact stratum; strictness means
/// there are more C-L pieces than contact pieces.
pub fn is_finer_than_contact(result: &StratificationResult) -> Refinement {
    let contact: BTreeSet<&Label> = result
        .contact_strata
        .iter()
        .map(|s| &s.parent_contact)
        .collect();
    let finer = result
        .cl_strata
        .iter()
        .all(|s| contact.contains(&s.parent_contact));
    Refinement {
        finer,
        strict: finer && result.cl_strata.len() > result.contact_strata.len(),
    }
}

/// Base stratum of `Q/G` under the projection `k⁰` for every C-L stratum.
///
/// `CC_(L)` maps onto `Q^(L)` and `CS_(H)≻(L)` onto `Q^(H)`; each target is
/// checked to be an orbit type of the poset.
pub fn bundle_targets(
    result: &StratificationResult,
    poset: &IsotropyPoset,
) -> Result<BTreeMap<StratumName, Label>> {
    let mut out = BTreeMap::new();
    for s in &result.cl_strata {
        let expected = match &s.name {
            StratumName::Cc(l) => l,
            StratumName::Seam { high, .. } => high,
            StratumName::Contact(_) => {
                return Err(Error::InconsistentDimensions(format!(
                    "{} is not a C-L stratum",
                    s.name
                )))
            }
        };
        poset.get(expected)?;
        if &s.base_target != expected {
            return Err(Error::InconsistentDimensions(format!(
                "{} targets ({}) instead of ({expected})",
                s.name, s.base_target
            )));
        }
        out.insert(s.name.clone(), expected.clone());
    }
    Ok(out)
}

/// Direct construction for almost semifree actions: `CC(e)` plus one
/// Legendrian seam of dimension `dim Q − dim G − 1` per singular type, all in
/// the closure of `CC(e)`. The reduced space is then smooth.
pub fn semifree_decomposition(poset: &IsotropyPoset) -> Result<StratificationResult> {
    poset.ensure_valid()?;
    let report = poset_is_almost_semifree(poset)?;
    if let Some(f) = report.first_failure() {
        return Err(Error::NotAlmostSemifree(format!("{f:?}")));
    }
    let e = poset.principal_type()?.label.clone();
    let reduced = poset.dim_q() as i64 - poset.dim_g() as i64;
    let mut result = StratificationResult {
        starred_types: vec![],
        contact_strata: vec![],
        contact_frontier: BTreeSet::new(),
        cl_strata: vec![],
        frontier: BTreeSet::new(),
        closure_only: BTreeSet::new(),
        hasse: BTreeSet::new(),
        strictly_finer: false,
        smooth_total_space: true,
    };
    if reduced < 1 {
        return Ok(result);
    }
    let top = (2 * reduced - 1) as usize;
    result.starred_types.push(e.clone());
    result.contact_strata.push(Stratum {
        name: StratumName::Contact(e.clone()),
        dim: top,
        kind: StratumKind::ContactStratum,
        base_target: e.clone(),
        parent_contact: e.clone(),
        open_dense: true,
    });
    result.cl_strata.push(Stratum {
        name: StratumName::cc(e.as_str()),
        dim: top,
        kind: StratumKind::CosphereLike,
        base_target: e.clone(),
        parent_contact: e.clone(),
        open_dense: true,
    });
    for t in poset.types().iter().filter(|t| t.label != e) {
        let name = StratumName::seam(t.label.as_str(), e.as_str());
        result.cl_strata.push(Stratum {
            name: name.clone(),
            dim: (reduced - 1) as usize,
            kind: StratumKind::LegendrianSeam,
            base_target: t.label.clone(),
            parent_contact: e.clone(),
            open_dense: false,
        });
        result.frontier.insert((name, StratumName::cc(e.as_str())));
    }
    result.hasse = result.frontier.clone();
    result.strictly_finer = result.cl_strata.len() > 1;
    Ok(result)
}

/// Single orbit type: the reduced space is the cosphere bundle of `Q/G`,
/// empty when `Q/G` is a point.
pub fn single_type_reduce(poset: &IsotropyPoset) -> Result<Option<Stratum>> {
    if poset.len() != 1 {
        return Err(Error::MultipleOrbitTypes(poset.len()));
    }
    let t = &poset.types()[0];
    let base = poset.quotient_dim(&t.label)?;
    if base < 1 {
        return Ok(None);
    }
    Ok(Some(Stratum {
        name: StratumName::cc(t.label.as_str()),
        dim: (2 * base - 1) as usize,
        kind: StratumKind::CosphereLike,
        base_target: t.label.clone(),
        parent_contact: t.label.clone(),
        open_dense: true,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::OrbitType;

    fn ty(label: &str, dim_h: usize) -> (OrbitType, usize) {
        (
            OrbitType {
                label: label.into(),
                dim_h,
                finite_tag: None,
                is_identity: label == "e",
            },
            0,
        )
    }

    fn poset(
        dim_q: usize,
        dim_g: usize,
        types: &[(&str, usize, usize)],
        order: &[(&str, &str)],
    ) -> IsotropyPoset {
        let types = types
            .iter()
            .map(|(l, h, q)| {
                let (t, _) = ty(l, *h);
                (t, *q)
            })
            .collect();
        let order: Vec<(Label, Label)> = order
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        IsotropyPoset::new(dim_q, dim_g, types, &order).unwrap()
    }

    fn t2() -> IsotropyPoset {
        poset(
            4,
            2,
            &[("e", 0, 4), ("e×S¹", 1, 2), ("S¹×e", 1, 2), ("T²", 2, 0)],
            &[
                ("e", "e×S¹"),
                ("e", "S¹×e"),
                ("e×S¹", "T²"),
                ("S¹×e", "T²"),
                ("e", "T²"),
            ],
        )
    }

    fn s1() -> IsotropyPoset {
        poset(2, 1, &[("e", 0, 2), ("S¹", 1, 0)], &[("e", "S¹")])
    }

    fn free(dim_q: usize, dim_g: usize) -> IsotropyPoset {
        poset(dim_q, dim_g, &[("e", 0, dim_q)], &[])
    }

    #[test]
    fn starred_lattices() {
        assert_eq!(starred_lattice(&t2()), ["e", "e×S¹", "S¹×e"]);
        assert_eq!(starred_lattice(&s1()), ["e"]);
        assert_eq!(starred_lattice(&free(3, 1)), ["e"]);
        assert_eq!(zero_level_types(&t2()), starred_lattice(&t2()));
        assert!(zero_level_types(&free(1, 1)).is_empty());
    }

    #[test]
    fn contact_strata_dims() {
        let dims: Vec<usize> = contact_strata(&t2())
            .unwrap()
            .iter()
            .map(|s| s.dim)
            .collect();
        assert_eq!(dims, [3, 1, 1]);
        let c = contact_strata(&s1()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].dim, 1);
        assert_eq!(contact_strata(&free(5, 2)).unwrap()[0].dim, 2 * (5 - 2) - 1);
        let f = contact_frontier(&t2()).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.contains(&(
            StratumName::Contact("e×S¹".into()),
            StratumName::Contact("e".into())
        )));
    }

    #[test]
    fn secondary_strata_of_torus_example() {
        let p = t2();
        let got: Vec<(String, usize)> = secondary_strata(&p, "e")
            .unwrap()
            .iter()
            .map(|s| (s.name.to_string(), s.dim))
            .collect();
        assert_eq!(
            got,
            [
                ("CC(e)".to_string(), 3),
                ("CS(e×S¹≻e)".to_string(), 2),
                ("CS(S¹×e≻e)".to_string(), 2),
                ("CS(T²≻e)".to_string(), 1)
            ]
        );
        let got: Vec<(String, usize)> = secondary_strata(&p, "e×S¹")
            .unwrap()
            .iter()
            .map(|s| (s.name.to_string(), s.dim))
            .collect();
        assert_eq!(
            got,
            [("CC(e×S¹)".to_string(), 1), ("CS(T²≻e×S¹)".to_string(), 0)]
        );
        assert_eq!(
            secondary_strata(&p, "T²"),
            Err(Error::NotStarredType("T²".into()))
        );
    }

    #[test]
    fn circle_seam() {
        let s = secondary_strata(&s1(), "e").unwrap();
        assert_eq!(s[0].dim, 1);
        assert_eq!(s[1].dim, 0);
        assert_eq!(
            classify_seam(&s1(), "S¹", "e").unwrap(),
            StratumKind::LegendrianSeam
        );
    }

    #[test]
    fn seam_classification() {
        let p = t2();
        assert_eq!(
            classify_seam(&p, "T²", "e").unwrap(),
            StratumKind::LegendrianSeam
        );
        assert_eq!(
            classify_seam(&p, "S¹×e", "e").unwrap(),
            StratumKind::CoisotropicSeam
        );
        assert!(matches!(
            classify_seam(&p, "e", "T²"),
            Err(Error::NoSuchSeam { .. })
        ));
        assert!(matches!(
            classify_seam(&p, "S¹×e", "e×S¹"),
            Err(Error::NoSuchSeam { .. })
        ));
    }

    #[test]
    fn cl_stratification_of_torus_example() {
        let r = cl_stratification(&t2()).unwrap();
        assert_eq!(r.cl_strata.len(), 8);
        assert_eq!(r.hasse.len(), 10);
        assert_eq!(r.open_dense().len(), 1);
        assert_eq!(r.open_dense()[0].name, StratumName::cc("e"));
        assert!(r.strictly_finer);
        // Density of CC(e) forces this pair; no rule states it directly.
        assert!(r
            .closure_only
            .contains(&(StratumName::seam("T²", "e×S¹"), StratumName::cc("e"))));
        let refinement = is_finer_than_contact(&r);
        assert!(refinement.finer && refinement.strict);
        let targets = bundle_targets(&r, &t2()).unwrap();
        assert_eq!(targets[&StratumName::seam("S¹×e", "e")], "S¹×e");
        assert_eq!(targets[&StratumName::cc("e")], "e");
    }

    #[test]
    fn disconnected_quotient_drops_density() {
        let r = cl_stratification_with(
            &t2(),
            StratifyOptions {
                quotient_connected: false,
            },
        )
        .unwrap();
        assert!(r.open_dense().is_empty());
    }

    #[test]
    fn single_type_cases() {
        let r = cl_stratification(&free(4, 2)).unwrap();
        assert_eq!(r.cl_strata.len(), 1);
        assert!(r.frontier.is_empty());
        let refinement = is_finer_than_contact(&r);
        assert!(refinement.finer && !refinement.strict);
        assert_eq!(single_type_reduce(&free(4, 2)).unwrap().unwrap().dim, 3);
        let k = poset(5, 3, &[("K", 1, 5)], &[]);
        assert_eq!(single_type_reduce(&k).unwrap().unwrap().dim, 5);
        assert_eq!(single_type_reduce(&free(1, 1)).unwrap(), None);
        assert_eq!(single_type_reduce(&t2()), Err(Error::MultipleOrbitTypes(4)));
    }

    #[test]
    fn semifree_cases() {
        let r = semifree_decomposition(&s1()).unwrap();
        assert!(r.smooth_total_space);
        let dims: Vec<usize> = r.cl_strata.iter().map(|s| s.dim).collect();
        assert_eq!(dims, [1, 0]);
        let q4 = poset(4, 1, &[("e", 0, 4), ("S¹", 1, 0)], &[("e", "S¹")]);
        assert_eq!(semifree_decomposition(&q4).unwrap().cl_strata[1].dim, 2);
        assert_eq!(
            semifree_decomposition(&free(3, 1)).unwrap().cl_strata.len(),
            1
        );
        assert!(matches!(
            semifree_decomposition(&t2()),
            Err(Error::NotAlmostSemifree(_))
        ));
        let r = semifree_decomposition(&s1()).unwrap();
        let general = cl_stratification(&s1()).unwrap();
        assert_eq!(r.cl_strata, general.cl_strata);
        assert_eq!(r.hasse, general.hasse);
        assert!(is_finer_than_contact(&general).strict);
    }

    #[test]
    fn empty_reduced_space_is_legal() {
        let p = poset(2, 2, &[("e", 0, 2), ("S¹", 1, 1)], &[("e", "S¹")]);
        let r = cl_stratification(&p).unwrap();
        assert!(r.cl_strata.is_empty() && r.contact_strata.is_empty());
    }

    #[test]
    fn invalid_poset_is_rejected() {
        let p = poset(2, 1, &[("e", 0, 2)], &[("e", "e")]);
        assert!(matches!(cl_stratification(&p), Err(Error::InvalidPoset(_))));
    }
}
