//! Tower configuration files and algebra selection from the command line.

use std::path::Path;
use std::sync::Arc;

use iterstbc_core::codebook::CodeSpec;
use iterstbc_core::{presets, CycloField, CyclicAlgebra, DElement, IteratedAlgebra, TowerSpec, Variant};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::json::{parse_rational, CycloJson};

/// JSON description of a tower `F₀ ⊂ F, L ⊂ K` inside `Q(ζ_N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerConfig {
    pub conductor: u32,
    /// σ acts as `ζ ↦ ζ^sigma_exponent`.
    pub sigma_exponent: i64,
    pub tau_exponent: i64,
    pub m: usize,
    pub n: usize,
    pub k_generators: Vec<CycloJson>,
    pub f_generators: Vec<CycloJson>,
    pub l_generators: Vec<CycloJson>,
    /// `e^m = c` in the quaternion-type algebra; `-1` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<CycloJson>,
}

impl TowerConfig {
    pub fn from_tower(t: &TowerSpec) -> Self {
        let gens = |g: &[iterstbc_core::CycloElement]| g.iter().map(CycloJson::from_element).collect();
        Self {
            conductor: t.conductor(),
            sigma_exponent: i64::from(t.sigma().exponent()),
            tau_exponent: i64::from(t.tau().exponent()),
            m: t.m(),
            n: t.n(),
            k_generators: gens(t.k_generators()),
            f_generators: gens(t.f_generators()),
            l_generators: gens(t.l_generators()),
            c: None,
        }
    }

    pub fn build(&self) -> CliResult<TowerSpec> {
        let field = CycloField::new(self.conductor)?;
        let conv = |g: &[CycloJson]| g.iter().map(|x| x.to_element(&field)).collect::<CliResult<Vec<_>>>();
        Ok(TowerSpec::new(
            field.clone(),
            self.sigma_exponent,
            self.tau_exponent,
            self.m,
            self.n,
            conv(&self.k_generators)?,
            conv(&self.f_generators)?,
            conv(&self.l_generators)?,
        )?)
    }

    pub fn algebra(&self) -> CliResult<CyclicAlgebra> {
        let tower = Arc::new(self.build()?);
        let c = match &self.c {
            Some(c) => c.to_element(tower.field())?,
            None => tower.field().from_int(-1),
        };
        Ok(CyclicAlgebra::new(tower, c)?)
    }
}

pub fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    serde_json::from_slice(&read_file(path)?).map_err(|source| CliError::Json { path: path.into(), source })
}

/// Loads a tower config, either bare or as the `result.config` of a saved
/// `tower` output.
pub fn load_tower_config(path: &Path) -> CliResult<TowerConfig> {
    let value = read_json(path)?;
    let inner = value.pointer("/result/config").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|source| CliError::Json { path: path.into(), source })
}

/// Where an algebra came from, echoed into reports.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraSource {
    pub preset: Option<String>,
    pub config: Option<String>,
    pub variant: String,
    pub d: String,
}

pub struct Selected {
    pub algebra: IteratedAlgebra,
    pub source: AlgebraSource,
    /// Present when a code preset was named.
    pub code: Option<CodeSpec>,
}

/// Resolves `--preset`/`--config`, `--variant` and `--d`.
///
/// A code preset fixes all three but `--variant` and `--d` may override;
/// a tower preset or config needs `--d` and defaults to the RIGHT variant.
pub fn select_algebra(preset: Option<&str>, config: Option<&Path>, variant: Option<&str>, d: Option<&str>) -> CliResult<Selected> {
    let variant = variant
        .map(|v| Variant::parse(v).ok_or_else(|| CliError::Validation(format!("unknown variant {v:?} (left, middle, right)"))))
        .transpose()?;
    let (d_alg, base, code) = match (preset, config) {
        (Some(_), Some(_)) => return Err(CliError::Validation("--preset and --config are mutually exclusive".into())),
        (None, None) => return Err(CliError::Validation("one of --preset or --config is required".into())),
        (Some(name), None) => {
            if let Some(code) = presets::code_by_name(name) {
                let a = code.algebra().clone();
                (a.d_algebra().clone(), Some(a), Some(code))
            } else if let Some(t) = presets::tower_by_name(name) {
                (Arc::new(presets::quaternion_over(t)), None, None)
            } else {
                return Err(CliError::Validation(format!(
                    "unknown preset {name:?}; codes: {}; towers: {}",
                    presets::CODE_NAMES.join(", "),
                    presets::TOWER_NAMES.join(", ")
                )));
            }
        }
        (None, Some(path)) => (Arc::new(load_tower_config(path)?.algebra()?), None, None),
    };
    let algebra = match (base, d) {
        (Some(a), None) => a.with_variant(variant.unwrap_or(a.variant())),
        (Some(a), Some(text)) => IteratedAlgebra::new(d_alg.clone(), parse_d(&d_alg, text)?, variant.unwrap_or(a.variant()))?,
        (None, Some(text)) => IteratedAlgebra::new(d_alg.clone(), parse_d(&d_alg, text)?, variant.unwrap_or(Variant::Right))?,
        (None, None) => return Err(CliError::Validation("--d is required unless a code preset is given".into())),
    };
    // A code is only meaningful with its own algebra.
    let code = code.filter(|c| c.algebra().variant() == algebra.variant() && c.algebra().d() == algebra.d());
    let source = AlgebraSource {
        preset: preset.map(str::to_owned),
        config: config.map(|p| p.display().to_string()),
        variant: algebra.variant().name().to_owned(),
        d: describe_d(&algebra),
    };
    Ok(Selected { algebra, source, code })
}

fn describe_d(a: &IteratedAlgebra) -> String {
    a.d()
        .coords()
        .iter()
        .map(|c| CycloJson::from_element(c).coeffs.join(","))
        .collect::<Vec<_>>()
        .join(";")
}

/// Parses `d` as a keyword (`1`, `omega`, `theta`, `i`, `e`), a comma list
/// of rationals on the power basis of ζ_N, or `;`-separated such lists for
/// the coordinates `1, e, …, e^(m-1)`.
pub fn parse_d(alg: &CyclicAlgebra, text: &str) -> CliResult<DElement> {
    let tower = alg.tower();
    let field = tower.field();
    let n = i64::from(field.conductor());
    let root = |order: i64, name: &str| {
        if n % order == 0 {
            Ok(alg.from_k(&field.zeta_pow(n / order)))
        } else {
            Err(CliError::Validation(format!("{name} is not in Q(zeta_{n})")))
        }
    };
    let d = match text.trim() {
        "1" => alg.one(),
        "e" => alg.e(),
        "omega" => root(3, "omega")?,
        "i" => root(4, "i")?,
        "theta" => {
            let g = tower
                .f_generators()
                .first()
                .ok_or_else(|| CliError::Validation("the tower has no F generator".into()))?;
            alg.from_k(g)
        }
        other => {
            let parts: Vec<&str> = other.split(';').collect();
            if parts.len() > alg.m() {
                return Err(CliError::Validation(format!("d has {} coordinates but D has {}", parts.len(), alg.m())));
            }
            let mut coords = Vec::with_capacity(alg.m());
            for part in &parts {
                let coeffs = part.split(',').map(parse_rational).collect::<CliResult<Vec<_>>>()?;
                coords.push(field.from_coeffs(&coeffs)?);
            }
            coords.resize(alg.m(), field.zero());
            alg.element(coords)?
        }
    };
    if d.is_zero() {
        return Err(CliError::Validation("d must be nonzero".into()));
    }
    Ok(d)
}

pub fn select_code(name: &str) -> CliResult<CodeSpec> {
    presets::code_by_name(name).ok_or_else(|| {
        CliError::Validation(format!("unknown code preset {name:?}; expected one of {}", presets::CODE_NAMES.join(", ")))
    })
}
