//! Structured text configuration: `[section]` headers with `key =
//! value` lines, `#` comments. Model descriptors serialize to the same
//! format, one section per variant.

use crate::error::{Error, Result};
use crate::gcosamp::RecoverySettings;
use crate::models::UnionModel;
use crate::operators::{AnalysisOperator, SynthesisDictionary};
use std::collections::BTreeMap;
use std::path::Path;

pub type Section = BTreeMap<String, String>;

#[derive(Debug, Clone, Default)]
pub struct Config {
    pub sections: BTreeMap<String, Section>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut sections: BTreeMap<String, Section> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim().to_string();
                sections.entry(name.clone()).or_default();
                current = Some(name);
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::parse(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                )));
            };
            let section = current
                .clone()
                .ok_or_else(|| Error::parse(format!("line {}: key outside any section", lineno + 1)))?;
            sections
                .get_mut(&section)
                .unwrap()
                .insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config { sections })
    }

    pub fn load(path: &Path) -> Result<Config> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.get(name)
    }

    pub fn require(&self, name: &str) -> Result<&Section> {
        self.section(name)
            .ok_or_else(|| Error::config(format!("missing [{name}] section")))
    }
}

pub fn get_usize(section: &Section, key: &str) -> Result<usize> {
    section
        .get(key)
        .ok_or_else(|| Error::config(format!("missing key `{key}`")))?
        .parse()
        .map_err(|_| Error::config(format!("key `{key}` must be an integer")))
}

pub fn get_usize_or(section: &Section, key: &str, default: usize) -> Result<usize> {
    match section.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| Error::config(format!("key `{key}` must be an integer"))),
        None => Ok(default),
    }
}

pub fn get_f64(section: &Section, key: &str) -> Result<f64> {
    section
        .get(key)
        .ok_or_else(|| Error::config(format!("missing key `{key}`")))?
        .parse()
        .map_err(|_| Error::config(format!("key `{key}` must be a number")))
}

pub fn get_f64_or(section: &Section, key: &str, default: f64) -> Result<f64> {
    match section.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| Error::config(format!("key `{key}` must be a number"))),
        None => Ok(default),
    }
}

pub fn get_u64_or(section: &Section, key: &str, default: u64) -> Result<u64> {
    match section.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| Error::config(format!("key `{key}` must be an integer"))),
        None => Ok(default),
    }
}

/// Recovery settings from a `[settings]` section; every key optional.
pub fn settings_from_section(section: Option<&Section>) -> Result<RecoverySettings> {
    let default = RecoverySettings::default();
    let Some(section) = section else {
        return Ok(default);
    };
    Ok(RecoverySettings {
        max_iterations: get_usize_or(section, "max_iterations", default.max_iterations)?,
        residual_relative_improvement_floor: get_f64_or(
            section,
            "residual_relative_improvement_floor",
            default.residual_relative_improvement_floor,
        )?,
        absolute_residual_floor: get_f64_or(
            section,
            "absolute_residual_floor",
            default.absolute_residual_floor,
        )?,
        ls_max_iterations: get_usize_or(section, "ls_max_iterations", default.ls_max_iterations)?,
        ls_tolerance: get_f64_or(section, "ls_tolerance", default.ls_tolerance)?,
    })
}

fn dictionary_from_section(section: &Section, base: &Path) -> Result<SynthesisDictionary> {
    match section.get("dict").map(String::as_str) {
        Some("local-dct") | None => crate::operators::build_local_dct(
            get_usize(section, "image_height")?,
            get_usize(section, "image_width")?,
            get_usize(section, "window")?,
            get_usize_or(section, "overlap", 0)?,
            get_usize_or(section, "excluded", 0)?,
        ),
        Some(spec) => {
            let path = spec
                .strip_prefix("csv:")
                .ok_or_else(|| Error::config(format!("unknown dictionary spec `{spec}`")))?;
            let matrix = super::io::read_matrix_csv(&base.join(path))?;
            SynthesisDictionary::dense(matrix)
        }
    }
}

fn analysis_from_section(section: &Section, base: &Path) -> Result<AnalysisOperator> {
    match section.get("omega").map(String::as_str) {
        Some("finite-difference") | None => AnalysisOperator::finite_difference(
            get_usize(section, "image_height")?,
            get_usize(section, "image_width")?,
        ),
        Some(spec) => {
            let path = spec
                .strip_prefix("csv:")
                .ok_or_else(|| Error::config(format!("unknown analysis spec `{spec}`")))?;
            Ok(AnalysisOperator::dense(super::io::read_matrix_csv(
                &base.join(path),
            )?))
        }
    }
}

/// Builds a model from a `[model]` section. `base` resolves relative
/// CSV paths.
pub fn model_from_section(section: &Section, base: &Path) -> Result<UnionModel> {
    let variant = section
        .get("variant")
        .ok_or_else(|| Error::config("model section needs a `variant` key"))?;
    match variant.as_str() {
        "ksparse" => UnionModel::ksparse(get_usize(section, "n")?, get_usize(section, "k")?),
        "blocksparse" => UnionModel::blocksparse(
            get_usize(section, "n")?,
            get_usize(section, "k")?,
            get_usize(section, "block")?,
        ),
        "lowrank" => UnionModel::lowrank(
            get_usize(section, "rows")?,
            get_usize(section, "cols")?,
            get_usize(section, "rank")?,
        ),
        "synthesis" => UnionModel::synthesis(
            dictionary_from_section(section, base)?,
            get_usize(section, "k")?,
        ),
        "analysis" => UnionModel::analysis(
            analysis_from_section(section, base)?,
            get_usize(section, "ell")?,
        ),
        "combined" => UnionModel::combined(
            dictionary_from_section(section, base)?,
            get_usize(section, "k")?,
            analysis_from_section(section, base)?,
            get_usize(section, "ell")?,
        ),
        other => Err(Error::config(format!("unknown model variant `{other}`"))),
    }
}

/// Serializes a model back into `[model]` section text.
pub fn model_to_section_text(model: &UnionModel) -> String {
    let mut lines = vec!["[model]".to_string(), format!("variant = {}", model.variant_name())];
    match model {
        UnionModel::KSparse { n, k } => {
            lines.push(format!("n = {n}"));
            lines.push(format!("k = {k}"));
        }
        UnionModel::BlockSparse { n, k, block } => {
            lines.push(format!("n = {n}"));
            lines.push(format!("k = {k}"));
            lines.push(format!("block = {block}"));
        }
        UnionModel::LowRank { rows, cols, rank } => {
            lines.push(format!("rows = {rows}"));
            lines.push(format!("cols = {cols}"));
            lines.push(format!("rank = {rank}"));
        }
        UnionModel::Synthesis { dict, k, .. } => {
            lines.push(format!("k = {k}"));
            lines.push(format!("# dictionary: {} with {} atoms", dict.kind_name(), dict.atoms()));
        }
        UnionModel::Analysis { omega, ell } => {
            lines.push(format!("ell = {ell}"));
            lines.push(format!("# operator: {} with {} rows", omega.kind_name(), omega.rows()));
        }
        UnionModel::Combined { dict, k, omega, ell } => {
            lines.push(format!("k = {k}"));
            lines.push(format!("ell = {ell}"));
            lines.push(format!("# dictionary: {} with {} atoms", dict.kind_name(), dict.atoms()));
            lines.push(format!("# operator: {} with {} rows", omega.kind_name(), omega.rows()));
        }
    }
    lines.join("\n") + "\n"
}
