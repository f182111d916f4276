use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use cosphere::fixtures::check_reduced_membership_with;
use cosphere::tolerance::{KERNEL_RESIDUAL, POLY_IDENTITY, SUPPORT_THRESHOLD};
use cosphere::{
    classify_point, hilbert_map, invariants, momentum, starred_lattice, Fixture, PhasePoint,
    StratumName, SupportPattern, TorusModel, ZeroLevelSampler,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::{emit, fmt_f64, to_json, CliError, CliResult};

/// Generic sampling must land in the open dense stratum at least this often.
pub const MIN_PRINCIPAL_FRACTION: f64 = 0.99;

#[derive(Clone, Debug, Serialize)]
pub struct PatternReport {
    pub base: Option<BTreeSet<usize>>,
    pub covector: Option<BTreeSet<usize>>,
    pub samples: usize,
    pub counts: BTreeMap<String, usize>,
    pub principal_fraction: f64,
    pub max_momentum: f64,
    pub max_cosphere_residual: f64,
    pub max_cone_residual: f64,
    pub max_membership_residual: f64,
    /// Samples whose orbit type is not in the starred lattice.
    pub unstarred: usize,
    /// Samples matched by no stratum (or by several).
    pub unmatched: usize,
    /// Samples whose matched stratum disagrees with the one predicted from
    /// the orbit types of the base point and of the pair.
    pub stratum_mismatches: usize,
    pub failures: Vec<String>,
}

impl PatternReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub fixture: String,
    pub seed: u64,
    pub count: usize,
    pub band: f64,
    pub patterns: Vec<PatternReport>,
    pub counts: BTreeMap<String, usize>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
struct SampleRow {
    pattern: usize,
    index: usize,
    values: Vec<f64>,
    stratum: String,
    residual: f64,
}

fn base_support(p: &PhasePoint) -> BTreeSet<usize> {
    (0..p.planes())
        .filter(|&j| p.x[2 * j].hypot(p.x[2 * j + 1]) > SUPPORT_THRESHOLD)
        .collect()
}

/// The stratum a zero-level point must lie in: `CC(L)` when the base point
/// has the same orbit type `L` as the pair, `CS(H≻L)` when the base point
/// has the larger type `H`.
pub fn predicted_stratum(model: &TorusModel, p: &PhasePoint) -> cosphere::Result<StratumName> {
    let pair = classify_point(model, p)?.clone();
    let base = model.label_of_support(&base_support(p))?.clone();
    Ok(if base == pair {
        StratumName::Cc(pair)
    } else {
        StratumName::seam(base, pair)
    })
}

/// Every base/covector plane pattern with a nonempty covector support, the
/// generic pattern first.
pub fn all_patterns(n: usize) -> Vec<SupportPattern> {
    let planes = |m: usize| (0..n).filter(|j| m >> j & 1 == 1).collect::<Vec<_>>();
    let mut out = vec![SupportPattern::generic()];
    for base in 0..1usize << n {
        for cov in 1..1usize << n {
            let p = SupportPattern::new(Some(&planes(base)), Some(&planes(cov)));
            if base == (1 << n) - 1 && cov == (1 << n) - 1 {
                continue;
            }
            out.push(p);
        }
    }
    out
}

struct PatternRun {
    report: PatternReport,
    rows: Vec<SampleRow>,
}

fn run_pattern(
    fixture: Fixture,
    model: &TorusModel,
    pattern: &SupportPattern,
    seed: u64,
    count: usize,
    config: &RunConfig,
    pattern_index: usize,
    keep_rows: bool,
) -> CliResult<PatternRun> {
    let spec = fixture.spec();
    let starred = starred_lattice(model.poset());
    let principal = StratumName::cc(model.poset().principal_type()?.label.as_str()).to_string();
    let sampler = ZeroLevelSampler::new(spec.clone(), pattern.clone())?;
    let samples = sampler.sample(seed, count)?;
    let mut r = PatternReport {
        base: pattern.base.clone(),
        covector: pattern.covector.clone(),
        samples: count,
        counts: BTreeMap::new(),
        principal_fraction: 0.0,
        max_momentum: 0.0,
        max_cosphere_residual: 0.0,
        max_cone_residual: 0.0,
        max_membership_residual: 0.0,
        unstarred: 0,
        unmatched: 0,
        stratum_mismatches: 0,
        failures: vec![],
    };
    let mut rows = Vec::new();
    for (i, p) in samples.iter().enumerate() {
        let j = momentum(&spec, p)?;
        let jmax = j.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        r.max_momentum = r.max_momentum.max(jmax);
        let inv = invariants(p);
        r.max_cosphere_residual = r
            .max_cosphere_residual
            .max((inv.cosphere_sum() - 2.0).abs());
        r.max_cone_residual = r.max_cone_residual.max(inv.max_cone_residual());
        if !starred.contains(classify_point(model, p)?) {
            r.unstarred += 1;
        }
        let image = hilbert_map(&spec, p, KERNEL_RESIDUAL)?;
        let (stratum, residual) =
            match check_reduced_membership_with(fixture, &image, config.tolerance) {
                Ok(m) => {
                    r.max_membership_residual = r.max_membership_residual.max(m.residual);
                    if m.stratum != predicted_stratum(model, p)? {
                        r.stratum_mismatches += 1;
                    }
                    (m.stratum.to_string(), m.residual)
                }
                Err(cosphere::Error::NoMatchingStratum(v)) => {
                    r.unmatched += 1;
                    ("none".to_string(), v)
                }
                Err(cosphere::Error::AmbiguousMembership(_)) => {
                    r.unmatched += 1;
                    ("ambiguous".to_string(), f64::NAN)
                }
                Err(e) => return Err(e.into()),
            };
        *r.counts.entry(stratum.clone()).or_default() += 1;
        if keep_rows {
            let mut values = p.x.clone();
            values.extend(&p.u);
            values.extend(&j);
            for q in &inv.planes {
                values.extend([q.p1, q.p2, q.p3, q.p4]);
            }
            rows.push(SampleRow {
                pattern: pattern_index,
                index: i,
                values,
                stratum,
                residual,
            });
        }
    }
    r.principal_fraction = *r.counts.get(&principal).unwrap_or(&0) as f64 / count as f64;

    let checks = [
        (
            r.max_momentum < KERNEL_RESIDUAL,
            format!("max |J| = {:e}", r.max_momentum),
        ),
        (
            r.max_cosphere_residual <= POLY_IDENTITY,
            format!("cosphere residual {:e}", r.max_cosphere_residual),
        ),
        (
            r.max_cone_residual <= POLY_IDENTITY,
            format!("cone residual {:e}", r.max_cone_residual),
        ),
        (
            r.unstarred == 0,
            format!("{} samples outside the starred lattice", r.unstarred),
        ),
        (
            r.unmatched == 0,
            format!("{} samples matched no unique stratum", r.unmatched),
        ),
        (
            r.max_membership_residual < config.tolerance.band,
            format!("membership residual {:e}", r.max_membership_residual),
        ),
        (
            r.stratum_mismatches == 0,
            format!("{} stratum mismatches", r.stratum_mismatches),
        ),
    ];
    r.failures = checks
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, m)| m)
        .collect();
    if *pattern == SupportPattern::generic() && r.principal_fraction < MIN_PRINCIPAL_FRACTION {
        r.failures.push(format!(
            "{principal} received {:.4} of generic samples, below {MIN_PRINCIPAL_FRACTION}",
            r.principal_fraction
        ));
    }
    Ok(PatternRun { report: r, rows })
}

/// Samples the zero level of a builtin fixture and checks every sample
/// against the fixture's reduced-space description.
pub fn run_verification(config: &RunConfig) -> CliResult<VerificationReport> {
    let fixture = config.source.fixture()?;
    let seed = config.require_seed()?;
    if config.count == 0 {
        return Err(cosphere::Error::Precondition("sample count must be at least 1".into()).into());
    }
    let model = TorusModel::new(fixture.spec())?;
    let patterns = if config.all_patterns {
        all_patterns(fixture.spec().n)
    } else {
        vec![config.pattern.clone()]
    };
    let keep_rows = config.samples_csv.is_some();
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for (i, pattern) in patterns.iter().enumerate() {
        // distinct seeds per pattern keep every stream independent
        let run = run_pattern(
            fixture,
            &model,
            pattern,
            seed.wrapping_add(i as u64),
            config.count,
            config,
            i,
            keep_rows,
        )?;
        reports.push(run.report);
        rows.extend(run.rows);
    }
    if let Some(path) = &config.samples_csv {
        write_samples(path, &fixture, &rows)?;
    }
    let mut counts = BTreeMap::new();
    for r in &reports {
        for (k, v) in &r.counts {
            *counts.entry(k.clone()).or_default() += v;
        }
    }
    Ok(VerificationReport {
        fixture: fixture.name().to_string(),
        seed,
        count: config.count,
        band: config.tolerance.band,
        passed: reports.iter().all(PatternReport::passed),
        patterns: reports,
        counts,
    })
}

fn write_samples(path: &Path, fixture: &Fixture, rows: &[SampleRow]) -> CliResult<()> {
    let spec = fixture.spec();
    let (n, k) = (spec.n, spec.k);
    let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::Input(format!("{other:?}")),
    })?;
    let mut header = vec!["pattern".to_string(), "index".to_string()];
    header.extend((1..=2 * n).map(|i| format!("x_{i}")));
    header.extend((1..=2 * n).map(|i| format!("u_{i}")));
    header.extend((1..=k).map(|i| format!("J_{i}")));
    for j in 1..=n {
        header.extend((1..=4).map(|q| format!("p{q}_{j}")));
    }
    header.extend(["stratum".to_string(), "residual".to_string()]);
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.pattern.to_string(), r.index.to_string()];
        rec.extend(r.values.iter().map(|&v| fmt_f64(v)));
        rec.push(r.stratum.clone());
        rec.push(fmt_f64(r.residual));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

/// Runs the verification, writes the JSON report to `--out` or stdout, and
/// turns a failed check into a verification error.
pub fn cmd_verify(config: &RunConfig) -> CliResult<VerificationReport> {
    let report = run_verification(config)?;
    emit(config.out.as_deref(), &to_json(&report))?;
    if !report.passed {
        let failing: Vec<String> = report
            .patterns
            .iter()
            .flat_map(|p| p.failures.iter().cloned())
            .collect();
        return Err(CliError::Verification(failing.join("; ")));
    }
    Ok(report)
}
