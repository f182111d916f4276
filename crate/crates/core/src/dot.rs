//! Graphviz output for isotropy and stratification lattices.
//!
//! Arrows follow the stratification-lattice convention: `A -> B` when
//! `A ⊆ closure(B)` with nothing in between; for isotropy lattices `L -> H`
//! when `(L) ≺ (H)` is a covering pair. Nodes are emitted in sorted order so
//! output is byte-stable.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::error::Result;
use crate::poset::{hasse_edges, IsotropyPoset};
use crate::strata::{StratificationResult, StratumKind};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn kind_name(kind: StratumKind) -> &'static str {
    match kind {
        StratumKind::ContactStratum => "contact",
        StratumKind::CosphereLike => "cosphere-like",
        StratumKind::CoisotropicSeam => "coisotropic",
        StratumKind::LegendrianSeam => "Legendrian",
    }
}

pub fn isotropy_dot(poset: &IsotropyPoset) -> Result<String> {
    let mut out = String::from("digraph isotropy {\n  rankdir=BT;\n");
    let mut labels: Vec<&String> = poset.labels().collect();
    labels.sort();
    for l in labels {
        let t = poset.get(l)?;
        let _ = writeln!(
            out,
            "  {} [label={}];",
            quote(l),
            quote(&format!(
                "({l})\\ndim H = {}, dim Q_(H) = {}",
                t.dim_h,
                poset.dim_q_of(l)?
            ))
        );
    }
    for (a, b) in hasse_edges(&poset.order_pairs())? {
        let _ = writeln!(out, "  {} -> {};", quote(&a), quote(&b));
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn stratification_dot(result: &StratificationResult) -> String {
    let mut out = String::from("digraph cl_stratification {\n  rankdir=BT;\n");
    let mut strata: Vec<_> = result.cl_strata.iter().collect();
    strata.sort_by_key(|s| s.name.to_string());
    for s in strata {
        let name = s.name.to_string();
        let _ = writeln!(
            out,
            "  {} [label={}{}];",
            quote(&name),
            quote(&format!("{name}\\ndim {}, {}", s.dim, kind_name(s.kind))),
            if s.open_dense { ", peripheries=2" } else { "" }
        );
    }
    let edges: BTreeSet<(String, String)> = result
        .hasse
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    for (a, b) in edges {
        let _ = writeln!(out, "  {} -> {};", quote(&a), quote(&b));
    }
    out.push_str("}\n");
    out
}

pub fn contact_dot(result: &StratificationResult) -> String {
    let mut out = String::from("digraph contact {\n  rankdir=BT;\n");
    let mut strata: Vec<_> = result.contact_strata.iter().collect();
    strata.sort_by_key(|s| s.name.to_string());
    for s in strata {
        let name = s.name.to_string();
        let _ = writeln!(
            out,
            "  {} [label={}];",
            quote(&name),
            quote(&format!("{name}\\ndim {}", s.dim))
        );
    }
    if let Ok(h) = hasse_edges(&result.contact_frontier) {
        let edges: BTreeSet<(String, String)> = h
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        for (a, b) in edges {
            let _ = writeln!(out, "  {} -> {};", quote(&a), quote(&b));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{build_isotropy_poset, TorusActionSpec};
    use crate::strata::cl_stratification;

    #[test]
    fn torus_example_dot_counts() {
        let p = build_isotropy_poset(&TorusActionSpec::new(vec![vec![1, 0], vec![0, 1]]).unwrap())
            .unwrap();
        let iso = isotropy_dot(&p).unwrap();
        assert_eq!(iso.matches(" -> ").count(), 4);
        assert_eq!(iso.matches("[label=").count(), 4);
        let r = cl_stratification(&p).unwrap();
        let cl = stratification_dot(&r);
        assert_eq!(cl.matches(" -> ").count(), 10);
        assert_eq!(cl.matches("[label=").count(), 8);
        assert!(cl.contains("\"CS(T²≻e×S¹)\" -> \"CC(e×S¹)\";"));
        assert_eq!(contact_dot(&r).matches(" -> ").count(), 2);
        assert_eq!(cl, stratification_dot(&r));
    }
}
