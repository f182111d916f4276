use std::path::{Path, PathBuf};

use cosphere::semialg::Tolerances;
use cosphere::{
    Fixture, IsotropyPoset, PhasePoint, PosetDescription, SupportPattern, TorusActionSpec,
    TorusModel,
};
use serde::Deserialize;

use crate::{CliError, CliResult};

/// Where the action comes from.
#[derive(Clone, Debug)]
pub enum Source {
    Fixture(Fixture),
    Action(TorusActionSpec),
    /// Abstract isotropy data; only the combinatorial commands accept it.
    Poset(IsotropyPoset),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    k: Option<usize>,
    n: Option<usize>,
    weights: Vec<Vec<i64>>,
}

impl Source {
    /// A builtin fixture name, or the path of an action-spec JSON file.
    pub fn from_action_arg(arg: &str) -> CliResult<Self> {
        if let Ok(f) = arg.parse::<Fixture>() {
            return Ok(Source::Fixture(f));
        }
        let path = Path::new(arg);
        if !path.exists() {
            return Err(CliError::Input(format!(
                "`{arg}` is neither a builtin fixture ({}) nor an existing file",
                Fixture::ALL.map(|f| f.name()).join(", ")
            )));
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let file: ActionFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let spec = TorusActionSpec::new(file.weights)?;
        if file.k.is_some_and(|k| k != spec.k) || file.n.is_some_and(|n| n != spec.n) {
            return Err(CliError::Input(format!(
                "{}: declared k/n disagree with the {}×{} weight matrix",
                path.display(),
                spec.k,
                spec.n
            )));
        }
        Ok(match Fixture::for_spec(&spec) {
            Some(f) => Source::Fixture(f),
            None => Source::Action(spec),
        })
    }

    pub fn from_poset_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let desc: PosetDescription = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok(Source::Poset(IsotropyPoset::from_description(&desc)?))
    }

    pub fn name(&self) -> String {
        match self {
            Source::Fixture(f) => f.name().to_string(),
            Source::Action(spec) => format!("torus action {:?}", spec.weights),
            Source::Poset(_) => "abstract poset".to_string(),
        }
    }

    pub fn spec(&self) -> Option<TorusActionSpec> {
        match self {
            Source::Fixture(f) => Some(f.spec()),
            Source::Action(s) => Some(s.clone()),
            Source::Poset(_) => None,
        }
    }

    pub fn model(&self) -> CliResult<Option<TorusModel>> {
        Ok(match self.spec() {
            Some(spec) => Some(TorusModel::new(spec)?),
            None => None,
        })
    }

    pub fn poset(&self) -> CliResult<IsotropyPoset> {
        Ok(match self {
            Source::Poset(p) => p.clone(),
            _ => self.model()?.expect("torus source").poset().clone(),
        })
    }

    /// Numerical commands need the fixture's reduced-space description.
    pub fn fixture(&self) -> CliResult<Fixture> {
        match self {
            Source::Fixture(f) => Ok(*f),
            _ => Err(CliError::Input(format!(
                "{} has no reduced-space description; use one of {}",
                self.name(),
                Fixture::ALL.map(|f| f.name()).join(", ")
            ))),
        }
    }
}

/// Parameters shared by all commands; each command reads what it needs.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source: Source,
    pub seed: Option<u64>,
    pub count: usize,
    pub t_end: f64,
    pub step: f64,
    pub out: Option<PathBuf>,
    pub samples_csv: Option<PathBuf>,
    pub tolerance: Tolerances,
    pub pattern: SupportPattern,
    /// Sweep every base/covector support pattern instead of `pattern`.
    pub all_patterns: bool,
    pub start: Option<PhasePoint>,
    pub sample_index: u64,
}

impl RunConfig {
    pub fn new(source: Source) -> Self {
        Self {
            source,
            seed: None,
            count: 10_000,
            t_end: 2.0,
            step: cosphere::tolerance::DEFAULT_RK4_STEP,
            out: None,
            samples_csv: None,
            tolerance: Tolerances::default(),
            pattern: SupportPattern::generic(),
            all_patterns: false,
            start: None,
            sample_index: 0,
        }
    }

    pub fn fixture(f: Fixture) -> Self {
        Self::new(Source::Fixture(f))
    }

    /// Sampling commands never fall back to ambient entropy.
    pub fn require_seed(&self) -> CliResult<u64> {
        self.seed
            .ok_or_else(|| CliError::Input("--seed is required for sampling commands".into()))
    }
}

/// Zero-based plane list: `"0,2"`, or `""`/`"none"` for the empty set.
pub fn parse_planes(s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("none") {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad plane index `{p}`: {e}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_lists() {
        assert_eq!(parse_planes("0, 1").unwrap(), vec![0, 1]);
        assert_eq!(parse_planes("none").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_planes("").unwrap(), Vec::<usize>::new());
        assert!(parse_planes("a").is_err());
    }

    #[test]
    fn fixture_names_resolve() {
        assert!(matches!(
            Source::from_action_arg("t2-on-r4").unwrap(),
            Source::Fixture(Fixture::TorusOnR4)
        ));
        assert!(matches!(
            Source::from_action_arg("nope"),
            Err(CliError::Input(_))
        ));
        assert!(RunConfig::fixture(Fixture::CircleOnPlane)
            .require_seed()
            .is_err());
    }
}
