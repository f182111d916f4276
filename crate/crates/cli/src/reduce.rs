use std::collections::BTreeMap;
use std::path::PathBuf;

use cosphere::dot::{contact_dot, isotropy_dot, stratification_dot};
use cosphere::strata::Refinement;
use cosphere::{
    bundle_targets, cl_stratification, is_finer_than_contact, poset_is_almost_semifree,
    starred_lattice, IsotropyPoset, SemifreeReport, StratificationResult,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::{emit, to_json, CliError, CliResult};

pub struct LatticeDots {
    pub isotropy: String,
    pub cl: String,
    pub contact: String,
}

impl LatticeDots {
    pub const FILES: [&'static str; 3] = ["isotropy.dot", "cl.dot", "contact.dot"];

    fn contents(&self) -> [&str; 3] {
        [&self.isotropy, &self.cl, &self.contact]
    }
}

pub fn render_lattice(config: &RunConfig) -> CliResult<LatticeDots> {
    let poset = config.source.poset()?;
    let result = cl_stratification(&poset)?;
    Ok(LatticeDots {
        isotropy: isotropy_dot(&poset)?,
        cl: stratification_dot(&result),
        contact: contact_dot(&result),
    })
}

/// Writes `isotropy.dot`, `cl.dot` and `contact.dot` into the output
/// directory (default: the working directory) and returns their paths.
pub fn cmd_lattice(config: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let dots = render_lattice(config)?;
    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut written = Vec::new();
    for (name, body) in LatticeDots::FILES.iter().zip(dots.contents()) {
        let path = dir.join(name);
        emit(Some(&path), body)?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Debug, Serialize)]
pub struct TypeRow {
    pub label: String,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
    #[serde(rename = "dim_Q_of")]
    pub dim_q_of: usize,
    pub starred: bool,
}

#[derive(Debug, Serialize)]
pub struct StrataReport {
    pub source: String,
    #[serde(rename = "dim_Q")]
    pub dim_q: usize,
    #[serde(rename = "dim_G")]
    pub dim_g: usize,
    pub isotropy: Vec<TypeRow>,
    pub almost_semifree: SemifreeReport,
    pub warnings: Vec<String>,
    pub stratification: StratificationResult,
    pub bundle_targets: BTreeMap<String, String>,
    pub refinement: Refinement,
}

pub fn strata_report(config: &RunConfig) -> CliResult<StrataReport> {
    let (poset, warnings): (IsotropyPoset, Vec<String>) = match config.source.model()? {
        Some(m) => (m.poset().clone(), m.warnings().to_vec()),
        None => (config.source.poset()?, vec![]),
    };
    let result = cl_stratification(&poset)?;
    let starred = starred_lattice(&poset);
    let isotropy = poset
        .types()
        .iter()
        .map(|t| {
            Ok(TypeRow {
                label: t.label.clone(),
                dim_h: t.dim_h,
                dim_q_of: poset.dim_q_of(&t.label)?,
                starred: starred.contains(&t.label),
            })
        })
        .collect::<cosphere::Result<Vec<_>>>()?;
    let targets = bundle_targets(&result, &poset)?
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    Ok(StrataReport {
        source: config.source.name(),
        dim_q: poset.dim_q(),
        dim_g: poset.dim_g(),
        isotropy,
        almost_semifree: poset_is_almost_semifree(&poset)?,
        warnings,
        refinement: is_finer_than_contact(&result),
        stratification: result,
        bundle_targets: targets,
    })
}

/// Writes the JSON strata report to `--out` or stdout.
pub fn cmd_reduce(config: &RunConfig) -> CliResult<StrataReport> {
    let report = strata_report(config)?;
    emit(config.out.as_deref(), &to_json(&report))?;
    Ok(report)
}
