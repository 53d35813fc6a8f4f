//! Scenario configuration: the JSON schema the CLI consumes and its
//! conversion into core types.

use serde::{Deserialize, Serialize};
use walklab_core::harness::VerdictSpec;
use walklab_core::{Element, Error, GroupSpace, Result, WeightedSupport};

/// An element as written in configuration files. Integer arrays are read
/// against the group kind (lattice coordinates or free-group letters);
/// affine elements are explicit coordinate objects.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Ints(Vec<i64>),
    Affine { log2a: f64, b: f64 },
}

impl ElementSpec {
    pub fn to_element(&self, group: &GroupSpace) -> Result<Element> {
        let element = match (self, group) {
            (ElementSpec::Ints(v), GroupSpace::Free { .. }) => {
                let letters: Vec<i32> = v.iter().map(|&x| x as i32).collect();
                Element::word(&letters)
            }
            (ElementSpec::Ints(v), _) => Element::Lattice(v.clone()),
            (ElementSpec::Affine { log2a, b }, _) => Element::affine(*log2a, *b),
        };
        group.validate(&element)?;
        Ok(element)
    }
}

/// (element, weight) pairs; doubles for laws, measures, and functions.
pub type AtomsSpec = Vec<(ElementSpec, f64)>;

pub fn to_support(
    atoms: &AtomsSpec,
    group: &GroupSpace,
    role_measure: bool,
) -> Result<WeightedSupport> {
    let mut entries = Vec::with_capacity(atoms.len());
    for (e, w) in atoms {
        entries.push((e.to_element(group)?, *w));
    }
    if role_measure {
        WeightedSupport::measure(group.clone(), &entries)
    } else {
        WeightedSupport::function(group.clone(), &entries)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremSelector {
    T1,
    T2,
    T3,
    Twisted,
    Checks,
    EstimateR,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionBLabel {
    Yes,
    No,
    Exploratory,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BumpConfig {
    pub u_halfwidth: f64,
    pub b_halfwidth: f64,
}

/// Grid-run extras for Theorem-3 scenarios.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridConfig {
    pub g_bump: BumpConfig,
    pub f_bump: BumpConfig,
    pub test_points: Vec<ElementSpec>,
    pub truncation_bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictConfig {
    pub tail_start: usize,
    /// relative to |target| (the default semantics)
    #[serde(default)]
    pub tail_epsilon_rel: Option<f64>,
    /// absolute override for criteria stated in absolute terms
    #[serde(default)]
    pub tail_epsilon_abs: Option<f64>,
    pub max_density: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub id: String,
    pub group: GroupSpace,
    pub theorem: TheoremSelector,
    pub condition_b: ConditionBLabel,
    pub law: AtomsSpec,
    #[serde(default)]
    pub f: Option<AtomsSpec>,
    #[serde(default)]
    pub g: Option<AtomsSpec>,
    #[serde(default)]
    pub x: Option<ElementSpec>,
    #[serde(default)]
    pub y: Option<ElementSpec>,
    #[serde(default)]
    pub kappa: Option<AtomsSpec>,
    #[serde(default)]
    pub mu: Option<AtomsSpec>,
    pub n_max: usize,
    #[serde(default)]
    pub m_list: Vec<usize>,
    /// relative ε for the exceptional set 𝒩_ε
    pub epsilon_rel: f64,
    pub verdict: VerdictConfig,
    /// per-series verdict overrides, keyed by series name
    #[serde(default)]
    pub verdict_overrides: std::collections::BTreeMap<String, VerdictConfig>,
    #[serde(default)]
    pub support_budget: Option<usize>,
    /// [start, end) window for the log fit of estimate-r scenarios
    #[serde(default)]
    pub fit_window: Option<(usize, usize)>,
    /// compute return probabilities by the radial chain (free groups only)
    #[serde(default)]
    pub radial_laziness: Option<f64>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    /// search bound for condition checks
    #[serde(default)]
    pub check_bound: Option<usize>,
    /// separate f for the small-domination check (defaults to `f`)
    #[serde(default)]
    pub domination_f: Option<AtomsSpec>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 10 {
            return Err(Error::Config("n_max must be at least 10".into()));
        }
        let mass: f64 = self.law.iter().map(|(_, m)| m).sum();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::NotProbability { mass });
        }
        for (e, _) in &self.law {
            e.to_element(&self.group)?;
        }
        if matches!(self.theorem, TheoremSelector::T3)
            && !matches!(self.group, GroupSpace::GridAffine(_))
        {
            return Err(Error::Config(
                "theorem t3 requires a grid_affine group".into(),
            ));
        }
        if matches!(self.theorem, TheoremSelector::T3) && self.grid.is_none() {
            return Err(Error::Config("theorem t3 requires a grid section".into()));
        }
        Ok(())
    }

    pub fn law_support(&self) -> Result<WeightedSupport> {
        let mut law = to_support(&self.law, &self.group, true)?;
        if let Some(b) = self.support_budget {
            law.budget = b;
        }
        Ok(law)
    }

    pub fn verdict_spec_for(&self, series: &str, target: f64) -> VerdictSpec {
        let cfg = self.verdict_overrides.get(series).unwrap_or(&self.verdict);
        let tail_epsilon_rel = match (cfg.tail_epsilon_abs, cfg.tail_epsilon_rel) {
            (Some(abs), _) if target != 0.0 => abs / target.abs(),
            (Some(abs), _) => abs,
            (None, Some(rel)) => rel,
            (None, None) => self.epsilon_rel,
        };
        VerdictSpec {
            tail_start: cfg.tail_start,
            tail_epsilon_rel,
            max_density: cfg.max_density,
        }
    }
}
