//! One-shot reproduction of the two builtin examples: every stratum list,
//! frontier, sampling and flow check, with a record of which library
//! operations ran.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use cosphere::fixtures::{circle_chart, from_circle_chart};
use cosphere::tolerance::{KERNEL_RESIDUAL, POLY_IDENTITY};
use cosphere::{
    build_isotropy_poset, check_reduced_membership, classify_point, classify_seam, contact_strata,
    flow_exact, flow_invariants_closed, hasse_edges, hilbert_map, invariants, is_almost_semifree,
    k0_project, lifted_action_is_free, momentum, reeb_field, secondary_strata,
    semifree_decomposition, single_type_reduce, stabilizer_of_support, starred_lattice,
    zero_level_types, Fixture, HilbertImage, IsotropyPoset, OrbitType, PhasePoint, StratumKind,
    StratumName, SupportPattern, TorusModel, ZeroLevelSampler,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::flow::{run_flow, FlowMethodArg};
use crate::reduce::{render_lattice, strata_report};
use crate::verify::{all_patterns, predicted_stratum, run_verification};
use crate::CliResult;

/// Public operations the examples run must exercise.
pub const REQUIRED_OPS: &[&str] = &[
    "validate_poset",
    "hasse_edges",
    "build_isotropy_poset",
    "stabilizer_of_support",
    "is_almost_semifree",
    "lifted_action_is_free",
    "starred_lattice",
    "zero_level_types",
    "contact_strata",
    "secondary_strata",
    "classify_seam",
    "cl_stratification",
    "is_finer_than_contact",
    "bundle_targets",
    "semifree_decomposition",
    "single_type_reduce",
    "momentum",
    "invariants",
    "hilbert_map",
    "classify_point",
    "sample_zero_level",
    "check_reduced_membership",
    "k0_project",
    "reeb_field",
    "flow_exact",
    "flow_invariants_closed",
    "flow_rk4",
    "cmd_lattice",
    "cmd_reduce",
    "cmd_verify",
    "cmd_flow",
];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub fixture: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumRow {
    pub fixture: String,
    pub stratum: String,
    pub dim: usize,
    pub kind: StratumKind,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExamplesReport {
    pub seed: u64,
    pub checks: Vec<Check>,
    pub strata: Vec<StratumRow>,
    pub coverage: BTreeSet<String>,
    pub missing_coverage: Vec<String>,
    pub passed: bool,
}

impl ExamplesReport {
    /// Plain-text tables: strata per fixture, then one line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} {:<14} {:>3}  {:<17} {:>8}",
            "fixture", "stratum", "dim", "kind", "samples"
        );
        for r in &self.strata {
            let kind = serde_json::to_value(r.kind).expect("kind serializes");
            let _ = writeln!(
                out,
                "{:<10} {:<14} {:>3}  {:<17} {:>8}",
                r.fixture,
                r.stratum,
                r.dim,
                kind.as_str().unwrap_or_default(),
                r.samples
            );
        }
        out.push('\n');
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {:<9} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.fixture,
                c.name,
                c.detail
            );
        }
        let _ = writeln!(
            out,
            "\ncoverage: {}/{} operations{}",
            REQUIRED_OPS.len() - self.missing_coverage.len(),
            REQUIRED_OPS.len(),
            if self.missing_coverage.is_empty() {
                String::new()
            } else {
                format!(", missing {}", self.missing_coverage.join(", "))
            }
        );
        let _ = writeln!(
            out,
            "{}",
            if self.passed {
                "all checks passed"
            } else {
                "SOME CHECKS FAILED"
            }
        );
        out
    }
}

/// The stratum lists and frontier arrows printed for each example.
pub struct ExpectedInventory {
    pub types: Vec<&'static str>,
    pub contact_dims: Vec<usize>,
    pub strata: Vec<(StratumName, usize, StratumKind)>,
    pub arrows: BTreeSet<(StratumName, StratumName)>,
    pub almost_semifree: bool,
}

pub fn expected_inventory(fixture: Fixture) -> ExpectedInventory {
    use StratumKind::*;
    let cc = StratumName::cc;
    let cs = StratumName::seam;
    match fixture {
        Fixture::CircleOnPlane => ExpectedInventory {
            types: vec!["e", "S¹"],
            contact_dims: vec![1],
            strata: vec![
                (cc("e"), 1, CosphereLike),
                (cs("S¹", "e"), 0, LegendrianSeam),
            ],
            arrows: [(cs("S¹", "e"), cc("e"))].into_iter().collect(),
            almost_semifree: true,
        },
        Fixture::TorusOnR4 => ExpectedInventory {
            types: vec!["e", "e×S¹", "S¹×e", "T²"],
            contact_dims: vec![3, 1, 1],
            strata: vec![
                (cc("e"), 3, CosphereLike),
                (cs("e×S¹", "e"), 2, CoisotropicSeam),
                (cs("S¹×e", "e"), 2, CoisotropicSeam),
                (cs("T²", "e"), 1, LegendrianSeam),
                (cc("e×S¹"), 1, CosphereLike),
                (cs("T²", "e×S¹"), 0, LegendrianSeam),
                (cc("S¹×e"), 1, CosphereLike),
                (cs("T²", "S¹×e"), 0, LegendrianSeam),
            ],
            arrows: [
                (cc("e×S¹"), cs("e×S¹", "e")),
                (cc("S¹×e"), cs("S¹×e", "e")),
                (cs("e×S¹", "e"), cc("e")),
                (cs("S¹×e", "e"), cc("e")),
                (cs("T²", "e"), cs("e×S¹", "e")),
                (cs("T²", "e"), cs("S¹×e", "e")),
                (cs("T²", "e×S¹"), cc("e×S¹")),
                (cs("T²", "S¹×e"), cc("S¹×e")),
                (cs("T²", "e×S¹"), cs("T²", "e")),
                (cs("T²", "S¹×e"), cs("T²", "e")),
            ]
            .into_iter()
            .collect(),
            almost_semifree: false,
        },
    }
}

struct Run {
    fixture: String,
    checks: Vec<Check>,
    coverage: BTreeSet<String>,
}

impl Run {
    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            fixture: self.fixture.clone(),
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn hit(&mut self, ops: &[&str]) {
        self.coverage.extend(ops.iter().map(|s| s.to_string()));
    }
}

fn count_dot(dot: &str) -> (usize, usize) {
    let edges = dot.lines().filter(|l| l.contains(" -> ")).count();
    let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
    (nodes, edges)
}

fn inventory_checks(run: &mut Run, fixture: Fixture) -> CliResult<()> {
    let expected = expected_inventory(fixture);
    let spec = fixture.spec();
    let config = RunConfig::fixture(fixture);
    let poset = build_isotropy_poset(&spec)?;
    run.hit(&["build_isotropy_poset", "validate_poset"]);
    let mut labels: Vec<&str> = poset.labels().map(String::as_str).collect();
    labels.sort();
    let mut want = expected.types.clone();
    want.sort();
    run.check(
        "isotropy lattice",
        labels == want && poset.validate().is_valid(),
        format!("types {labels:?}"),
    );

    let full: BTreeSet<usize> = (0..spec.n).collect();
    let at_origin = stabilizer_of_support(&spec, &BTreeSet::new());
    let generic = stabilizer_of_support(&spec, &full);
    run.hit(&["stabilizer_of_support"]);
    run.check(
        "stabilizers",
        at_origin.dim_stab == spec.k
            && generic.dim_stab == 0
            && generic.finite_invariants.is_empty(),
        format!(
            "dim stab at origin {}, generic {}",
            at_origin.dim_stab, generic.dim_stab
        ),
    );

    let semifree = is_almost_semifree(&spec)?;
    let lifted = lifted_action_is_free(&spec)?;
    run.hit(&["is_almost_semifree", "lifted_action_is_free"]);
    run.check(
        "almost semifree",
        semifree.almost_semifree == expected.almost_semifree && lifted == expected.almost_semifree,
        format!(
            "{} (failures {:?})",
            semifree.almost_semifree, semifree.failures
        ),
    );

    let report = strata_report(&config)?;
    run.hit(&[
        "cmd_reduce",
        "cl_stratification",
        "is_finer_than_contact",
        "bundle_targets",
    ]);
    let r = &report.stratification;
    let contact_dims: Vec<usize> = contact_strata(&poset)?.iter().map(|s| s.dim).collect();
    let starred = starred_lattice(&poset);
    run.hit(&["contact_strata", "starred_lattice", "zero_level_types"]);
    run.check(
        "contact strata",
        contact_dims == expected.contact_dims && zero_level_types(&poset) == starred,
        format!("dims {contact_dims:?} over starred types {starred:?}"),
    );

    let got: BTreeSet<(String, usize, StratumKind)> = r
        .cl_strata
        .iter()
        .map(|s| (s.name.to_string(), s.dim, s.kind))
        .collect();
    let want: BTreeSet<(String, usize, StratumKind)> = expected
        .strata
        .iter()
        .map(|(n, d, k)| (n.to_string(), *d, *k))
        .collect();
    let mut per_low_ok = true;
    for l in &starred {
        for s in secondary_strata(&poset, l)? {
            if let StratumName::Seam { high, low } = &s.name {
                per_low_ok &= classify_seam(&poset, high, low)? == s.kind;
            }
        }
    }
    run.hit(&["secondary_strata", "classify_seam"]);
    run.check(
        "C-L strata",
        got == want && per_low_ok,
        format!(
            "{} strata, dims {:?}",
            got.len(),
            r.cl_strata.iter().map(|s| s.dim).collect::<Vec<_>>()
        ),
    );

    let reduced = hasse_edges(&r.frontier)?;
    run.hit(&["hasse_edges"]);
    run.check(
        "frontier",
        r.hasse == expected.arrows && reduced == r.hasse,
        format!(
            "{} Hasse arrows, {} closure-only pairs",
            r.hasse.len(),
            r.closure_only.len()
        ),
    );
    run.check(
        "bundle projection",
        report.bundle_targets.len() == r.cl_strata.len()
            && report.refinement.finer
            && report.refinement.strict,
        format!("strictly finer than contact: {}", report.refinement.strict),
    );

    let dots = render_lattice(&config)?;
    run.hit(&["cmd_lattice"]);
    let (iso_nodes, iso_edges) = count_dot(&dots.isotropy);
    let (cl_nodes, cl_edges) = count_dot(&dots.cl);
    run.check(
        "lattice DOT",
        iso_nodes == expected.types.len()
            && cl_nodes == expected.strata.len()
            && cl_edges == expected.arrows.len(),
        format!(
            "isotropy {iso_nodes} nodes/{iso_edges} edges, C-L {cl_nodes} nodes/{cl_edges} edges"
        ),
    );

    let direct = semifree_decomposition(&poset);
    run.hit(&["semifree_decomposition"]);
    match (expected.almost_semifree, direct) {
        (true, Ok(d)) => {
            let dims: BTreeSet<(String, usize)> = d
                .cl_strata
                .iter()
                .map(|s| (s.name.to_string(), s.dim))
                .collect();
            let from_rules: BTreeSet<(String, usize)> = r
                .cl_strata
                .iter()
                .map(|s| (s.name.to_string(), s.dim))
                .collect();
            run.check(
                "semifree shortcut",
                dims == from_rules && d.smooth_total_space,
                "direct decomposition agrees with the general one",
            );
        }
        (false, Err(cosphere::Error::NotAlmostSemifree(_))) => {
            run.check("semifree shortcut", true, "correctly refused")
        }
        (_, other) => run.check("semifree shortcut", false, format!("unexpected {other:?}")),
    }
    Ok(())
}

fn general_checks(run: &mut Run) -> CliResult<()> {
    let e = OrbitType {
        label: "e".into(),
        dim_h: 0,
        finite_tag: None,
        is_identity: true,
    };
    let poset = IsotropyPoset::new(2, 1, vec![(e, 2)], &[])?;
    let s = single_type_reduce(&poset)?;
    run.hit(&["single_type_reduce"]);
    run.check(
        "single orbit type",
        s.as_ref().is_some_and(|s| s.dim == 1),
        "free circle on a two-dimensional base gives one cosphere stratum of dimension 1",
    );
    Ok(())
}

fn sampling_checks(
    run: &mut Run,
    fixture: Fixture,
    seed: u64,
    count: usize,
    rows: &mut Vec<StratumRow>,
) -> CliResult<()> {
    let mut config = RunConfig::fixture(fixture);
    config.seed = Some(seed);
    config.count = count;
    let generic = run_verification(&config)?;
    run.hit(&[
        "cmd_verify",
        "sample_zero_level",
        "momentum",
        "invariants",
        "hilbert_map",
        "classify_point",
        "check_reduced_membership",
    ]);
    let g = &generic.patterns[0];
    run.check(
        "generic sampling",
        generic.passed,
        format!(
            "{} samples, {:.2}% in the open stratum, max |J| {:.1e}, max residual {:.1e}",
            g.samples,
            100.0 * g.principal_fraction,
            g.max_momentum,
            g.max_membership_residual
        ),
    );

    config.all_patterns = true;
    config.count = (count / 10).max(100);
    let forced = run_verification(&config)?;
    let expected = expected_inventory(fixture);
    let mut counts: BTreeMap<String, usize> = generic.counts.clone();
    for (k, v) in &forced.counts {
        *counts.entry(k.clone()).or_default() += v;
    }
    let missing: Vec<String> = expected
        .strata
        .iter()
        .map(|(n, _, _)| n.to_string())
        .filter(|n| !counts.contains_key(n))
        .collect();
    run.check(
        "support patterns",
        forced.passed && missing.is_empty(),
        format!(
            "{} patterns, strata never hit: {missing:?}",
            forced.patterns.len()
        ),
    );
    for (name, dim, kind) in &expected.strata {
        let key = name.to_string();
        rows.push(StratumRow {
            fixture: fixture.name().into(),
            samples: *counts.get(&key).unwrap_or(&0),
            stratum: key,
            dim: *dim,
            kind: *kind,
        });
    }
    Ok(())
}

fn k0_checks(run: &mut Run, fixture: Fixture) -> CliResult<()> {
    let offsets = fixture.k0_offsets();
    run.hit(&["k0_project"]);
    match fixture {
        Fixture::CircleOnPlane => {
            let spec = fixture.spec();
            let p = PhasePoint::cosphere(vec![1.0, 0.0], vec![1.0, 0.0])?;
            let image = hilbert_map(&spec, &p, KERNEL_RESIDUAL)?;
            let t: f64 = 1.0;
            let chart = [2.0 * t.sqrt(), 1.0 - t, 1.0 + t];
            let base = k0_project(&image, &offsets)?;
            // base point (0, −t, t) of the chart at t = 1
            let in_chart = circle_chart([base[0], base[1], base[2]]);
            let apex = k0_project(&HilbertImage(vec![1.0, 0.0, 1.0]), &offsets)?;
            run.check(
                "base projection",
                image.0 == from_circle_chart(chart).to_vec()
                    && in_chart == [0.0, -1.0, 1.0]
                    && apex == [0.0; 3],
                format!(
                    "image {:?} maps to {in_chart:?}; the seam point maps to the singular point",
                    image.0
                ),
            );
        }
        Fixture::TorusOnR4 => {
            let seam = HilbertImage(vec![1.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
            let base = k0_project(&seam, &offsets)?;
            run.check(
                "base projection",
                base == [0.0, 0.0, 0.0, -1.0, 0.0, 1.0],
                format!("printed formula at the seam point gives {base:?}, outside the base chart"),
            );
        }
    }
    Ok(())
}

fn flow_checks(run: &mut Run, fixture: Fixture, seed: u64) -> CliResult<()> {
    let spec = fixture.spec();
    let sampler = ZeroLevelSampler::new(spec.clone(), SupportPattern::generic())?;
    let mut worst: f64 = 0.0;
    for p in sampler.sample(seed, 1000)? {
        let start = HilbertImage(invariants(&p).hilbert_coordinates());
        for t in [0.1, 0.5, 1.0, 2.0] {
            let q = invariants(&flow_exact(&p, t)).hilbert_coordinates();
            let c = flow_invariants_closed(&start, t);
            worst = q
                .iter()
                .zip(&c.0)
                .fold(worst, |m, (a, b)| m.max((a - b).abs()));
        }
    }
    let field_ok = {
        let p = sampler.sample_at(seed, 0)?;
        let r = reeb_field(&p);
        r.dx == p.u && r.du.iter().all(|&v| v == 0.0)
    };
    let one = flow_invariants_closed(&HilbertImage(vec![1.0, 0.0, 1.0]), 1.0);
    run.hit(&["flow_exact", "flow_invariants_closed", "reeb_field"]);
    run.check(
        "closed-form flow",
        worst <= POLY_IDENTITY && one.0 == [2.0, 2.0, 0.0] && field_ok,
        format!("max deviation {worst:.1e} over 1000 starts × 4 times"),
    );

    let mut config = RunConfig::fixture(fixture);
    config.seed = Some(seed);
    let rk = run_flow(&config, FlowMethodArg::Rk4)?.summary;
    run.hit(&["flow_rk4", "cmd_flow"]);
    run.check(
        "RK4 flow",
        rk.endpoint_error < 1e-9
            && rk.max_p4_drift < POLY_IDENTITY
            && rk.max_mass_drift < POLY_IDENTITY
            && rk.max_momentum < KERNEL_RESIDUAL
            && rk.max_closed_form_error <= 1e-7,
        format!(
            "{} steps, endpoint error {:.1e}, drifts {:.1e}/{:.1e}",
            rk.rows, rk.endpoint_error, rk.max_p4_drift, rk.max_mass_drift
        ),
    );

    let model = TorusModel::new(spec.clone())?;
    let mut seams = 0;
    let mut landed = 0;
    for (i, pattern) in all_patterns(spec.n).into_iter().enumerate() {
        let sampler = ZeroLevelSampler::new(spec.clone(), pattern)?;
        for p in sampler.sample(seed.wrapping_add(1000 + i as u64), 50)? {
            let before = predicted_stratum(&model, &p)?;
            let StratumName::Seam { low, .. } = &before else {
                continue;
            };
            seams += 1;
            let image = hilbert_map(&spec, &flow_exact(&p, 0.5), KERNEL_RESIDUAL)?;
            let after = check_reduced_membership(fixture, &image)?;
            if after.stratum == StratumName::cc(low.as_str()) && classify_point(&model, &p)? == low
            {
                landed += 1;
            }
        }
    }
    run.check(
        "seams flow into CC",
        seams > 0 && landed == seams,
        format!("{landed}/{seams} seam samples in the cosphere-like stratum after t = 0.5"),
    );
    let _ = momentum(&spec, &sampler.sample_at(seed, 0)?)?;
    Ok(())
}

/// Runs every example check. `count` is the number of generic samples per
/// fixture; each forced support pattern gets a tenth of it.
pub fn cmd_examples(seed: u64, count: usize) -> CliResult<ExamplesReport> {
    let mut checks = Vec::new();
    let mut coverage = BTreeSet::new();
    let mut strata = Vec::new();
    let mut general = Run {
        fixture: "general".into(),
        checks: vec![],
        coverage: BTreeSet::new(),
    };
    general_checks(&mut general)?;
    checks.append(&mut general.checks);
    coverage.append(&mut general.coverage);
    for fixture in Fixture::ALL {
        let mut run = Run {
            fixture: fixture.name().into(),
            checks: vec![],
            coverage: BTreeSet::new(),
        };
        inventory_checks(&mut run, fixture)?;
        sampling_checks(&mut run, fixture, seed, count, &mut strata)?;
        k0_checks(&mut run, fixture)?;
        flow_checks(&mut run, fixture, seed)?;
        checks.append(&mut run.checks);
        coverage.append(&mut run.coverage);
    }
    let missing_coverage: Vec<String> = REQUIRED_OPS
        .iter()
        .filter(|op| !coverage.contains(**op))
        .map(|s| s.to_string())
        .collect();
    let passed = missing_coverage.is_empty() && checks.iter().all(|c| c.passed);
    Ok(ExamplesReport {
        seed,
        checks,
        strata,
        coverage,
        missing_coverage,
        passed,
    })
}
