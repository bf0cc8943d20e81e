//! Experiment specifications: presets, config files and flag overrides.

use std::fs;
use std::path::{Path, PathBuf};

use rqcd_core::pauli::word_count;
use rqcd_core::{Algorithm, InitialState, OptimizerConfig, WarmStart};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Figure protocol an experiment belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentTag {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Custom,
}

impl ExperimentTag {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentTag::Fig3 => "fig3",
            ExperimentTag::Fig4 => "fig4",
            ExperimentTag::Fig5 => "fig5",
            ExperimentTag::Fig6 => "fig6",
            ExperimentTag::Fig7 => "fig7",
            ExperimentTag::Custom => "custom",
        }
    }

    /// Protocol defaults; explicit settings override them.
    pub fn preset(self) -> Settings {
        let scan = |algo: Algorithm| Settings {
            algo: Some(algo),
            n: Some(OneOrMany::One(4)),
            runs: Some(20),
            max_iters: Some(50),
            warm_start_vqa: Some(200),
            ..Settings::default()
        };
        match self {
            ExperimentTag::Fig3 => Settings {
                n: Some(OneOrMany::One(4)),
                delta: Some(0.5),
                runs: Some(1),
                max_iters: Some(500),
                ..Settings::default()
            },
            ExperimentTag::Fig4 => Settings {
                algo: Some(Algorithm::Vqa),
                n: Some(OneOrMany::One(4)),
                runs: Some(1),
                max_iters: Some(500),
                vqa_lr: Some(0.01),
                ..Settings::default()
            },
            ExperimentTag::Fig5 => scan(Algorithm::Rrsn),
            ExperimentTag::Fig6 => scan(Algorithm::RrsgpFixed),
            ExperimentTag::Fig7 => Settings {
                n: Some(OneOrMany::Many(vec![2, 3, 4, 5])),
                d: Some(OneOrMany::One(1)),
                runs: Some(10),
                max_iters: Some(200_000),
                warm_start_vqa: Some(200),
                target_error: Some(1e-5),
                disable_stall: Some(true),
                ..Settings::default()
            },
            ExperimentTag::Custom => Settings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

impl OneOrMany {
    pub fn values(&self) -> Vec<usize> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }

    fn from_vec(v: Vec<usize>) -> Option<Self> {
        match v.len() {
            0 => None,
            1 => Some(OneOrMany::One(v[0])),
            _ => Some(OneOrMany::Many(v)),
        }
    }
}

/// Partially specified experiment settings, as read from a JSON config file
/// or collected from command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub tag: Option<ExperimentTag>,
    #[serde(default, with = "algo_name")]
    pub algo: Option<Algorithm>,
    pub n: Option<OneOrMany>,
    pub delta: Option<f64>,
    pub d: Option<OneOrMany>,
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub max_iters: Option<usize>,
    pub warm_start_vqa: Option<usize>,
    pub out: Option<PathBuf>,
    pub record_wall_time: Option<bool>,
    pub target_error: Option<f64>,
    pub disable_stall: Option<bool>,
    pub rho: Option<f64>,
    pub fixed_step: Option<f64>,
    pub grad_tol: Option<f64>,
    pub vqa_layers: Option<usize>,
    pub vqa_lr: Option<f64>,
    pub basis_start: Option<usize>,
}

mod algo_name {
    use rqcd_core::Algorithm;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(a: &Option<Algorithm>, s: S) -> Result<S::Ok, S::Error> {
        match a {
            Some(a) => s.serialize_some(a.name()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Algorithm>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),+) => {
        Settings { $($field: $top.$field.clone().or_else(|| $base.$field.clone())),+ }
    };
}

impl Settings {
    /// Reads a JSON config file; unknown keys are rejected.
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// `top` wins wherever it is set.
    pub fn overlay(&self, top: &Settings) -> Settings {
        overlay!(
            self,
            top,
            tag,
            algo,
            n,
            delta,
            d,
            seed,
            runs,
            max_iters,
            warm_start_vqa,
            out,
            record_wall_time,
            target_error,
            disable_stall,
            rho,
            fixed_step,
            grad_tol,
            vqa_layers,
            vqa_lr,
            basis_start
        )
    }

    pub fn set_n(&mut self, values: Vec<usize>) {
        if let Some(v) = OneOrMany::from_vec(values) {
            self.n = Some(v);
        }
    }

    pub fn set_d(&mut self, values: Vec<usize>) {
        if let Some(v) = OneOrMany::from_vec(values) {
            self.d = Some(v);
        }
    }
}

/// A resolved experiment: base optimizer settings plus sweep axes.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub tag: ExperimentTag,
    /// Seed of the first run; run `i` uses `seed + i`.
    pub base: OptimizerConfig,
    pub n_values: Vec<usize>,
    /// Requested subspace dimensions; `None` selects the full basis.
    pub d_values: Vec<Option<usize>>,
    pub runs: usize,
    pub out: PathBuf,
    pub record_wall_time: bool,
}

/// Maps a requested subspace dimension onto the non-identity Pauli basis:
/// `4^N` (the full Pauli group) becomes `4^N − 1`.
pub fn map_d(n_qubits: usize, d: usize) -> CliResult<usize> {
    let total = word_count(n_qubits);
    match d as u64 {
        0 => Err(CliError::Config("d must be at least 1".into())),
        x if x == total => Ok(d - 1),
        x if x > total => Err(CliError::Config(format!(
            "d = {d} exceeds 4^{n_qubits} = {total}"
        ))),
        _ => Ok(d),
    }
}

impl ExperimentSpec {
    /// Resolves `settings` layered over the preset of its tag (or `default_tag`).
    pub fn resolve(settings: &Settings, default_tag: ExperimentTag) -> CliResult<Self> {
        let tag = settings.tag.unwrap_or(default_tag);
        let s = tag.preset().overlay(settings);
        let algorithm = s.algo.unwrap_or(Algorithm::Rrsn);
        let n_values = s.n.as_ref().map_or(vec![4], OneOrMany::values);
        let d_values: Vec<Option<usize>> = match &s.d {
            Some(d) => d.values().into_iter().map(Some).collect(),
            None => vec![None],
        };
        if n_values.is_empty() || d_values.is_empty() {
            return Err(CliError::Config("empty n or d list".into()));
        }
        let runs = s.runs.unwrap_or(1);
        if runs == 0 {
            return Err(CliError::Config("runs must be at least 1".into()));
        }

        let mut base = OptimizerConfig::new(algorithm, n_values[0], 1);
        base.delta = s.delta.unwrap_or(base.delta);
        base.seed = s.seed.unwrap_or(0);
        base.max_iters = s.max_iters.unwrap_or(base.max_iters);
        if let Some(iters) = s.warm_start_vqa.filter(|&i| i > 0) {
            base.warm_start = WarmStart::Vqa { iters };
        }
        base.target_error = s.target_error.or(base.target_error);
        if s.disable_stall == Some(true) {
            base.rel_energy_tol = None;
        }
        base.rho = s.rho.unwrap_or(base.rho);
        base.fixed_step = s.fixed_step.unwrap_or(base.fixed_step);
        base.grad_tol = s.grad_tol.unwrap_or(base.grad_tol);
        base.vqa_layers = s.vqa_layers.unwrap_or(base.vqa_layers);
        base.vqa_lr = s.vqa_lr.unwrap_or(base.vqa_lr);
        if let Some(i) = s.basis_start {
            base.initial = InitialState::Basis(i);
        }

        let spec = ExperimentSpec {
            tag,
            base,
            n_values,
            d_values,
            runs,
            out: s.out.unwrap_or_else(|| PathBuf::from("rqcd-out")),
            record_wall_time: s.record_wall_time.unwrap_or(false),
        };
        for config in spec.members()? {
            config
                .validate()
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(spec)
    }

    /// Every run of the sweep in output order: N, then d, then seed.
    pub fn members(&self) -> CliResult<Vec<OptimizerConfig>> {
        let mut out = Vec::new();
        for &n in &self.n_values {
            for &d in &self.d_values {
                let d = match d {
                    Some(d) => map_d(n, d)?,
                    None => (word_count(n) - 1) as usize,
                };
                for i in 0..self.runs {
                    let mut c = self.base.clone();
                    c.n_qubits = n;
                    c.d = d;
                    c.seed = self.base.seed + i as u64;
                    out.push(c);
                }
            }
        }
        Ok(out)
    }

    /// Same sweep with a different algorithm.
    pub fn with_algorithm(&self, algorithm: Algorithm) -> Self {
        let mut s = self.clone();
        s.base.algorithm = algorithm;
        s
    }
}
