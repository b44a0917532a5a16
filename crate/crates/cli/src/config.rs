//! Run configuration read from a JSON file. Unknown keys are rejected.

use anyhow::{bail, Context, Result};
use lgk_core::fermion_space::MatterSpec;
use lgk_core::gauge_action::{build_kinematic_space, KinematicSpace};
use lgk_core::gauge_group::GroupSpec;
use lgk_core::lattice::{build_lattice, Region, Site};
use lgk_core::observables::{Couplings, HoppingKernel};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupName {
    ZN,
    U1,
    SU2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub lo: Site,
    pub hi: Site,
}

impl RegionConfig {
    pub fn region(&self) -> Result<Region> {
        Ok(Region::new(self.lo, self.hi)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MatterConfig {
    pub enabled: bool,
    /// Non-colour components per site.
    pub w: usize,
}

impl Default for MatterConfig {
    fn default() -> Self {
        MatterConfig { enabled: false, w: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CouplingsConfig {
    pub a: f64,
    pub g: f64,
    pub m: f64,
    pub kernel: String,
}

impl Default for CouplingsConfig {
    fn default() -> Self {
        CouplingsConfig { a: 1.0, g: 1.0, m: 0.0, kernel: "single-component".into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverMode {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub mode: SolverMode,
    /// Number of lowest eigenvalues reported.
    pub k: usize,
    /// Lanczos step limit per run; twice the dimension when absent.
    pub max_iter: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { mode: SolverMode::Dense, k: 3, max_iter: None }
    }
}

fn default_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub group: GroupName,
    /// Order of Z_N; required for `ZN` only.
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub cutoff: u32,
    pub region: RegionConfig,
    #[serde(default)]
    pub matter: MatterConfig,
    #[serde(default)]
    pub couplings: CouplingsConfig,
    /// Solver residual target and the tolerance of CLI-level checks.
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub solver: SolverConfig,
    /// Closed loop for `wilson` as a list of sites, first repeated last; the
    /// first plaquette when absent.
    #[serde(rename = "loop", default, skip_serializing_if = "Option::is_none")]
    pub wilson_loop: Option<Vec<Site>>,
    /// Inner region for the nesting check of `tprocedure-report`; the first
    /// link when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<RegionConfig>,
    /// Output directory. Not echoed into reports, so that a report does not
    /// depend on where it is written.
    #[serde(default, skip_serializing)]
    pub out: Option<String>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.group, self.n) {
            (GroupName::ZN, None) => bail!("group ZN needs the order \"N\""),
            (GroupName::U1 | GroupName::SU2, Some(_)) => bail!("\"N\" is only valid for group ZN"),
            _ => {}
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            bail!("tol must be positive, got {}", self.tol);
        }
        if self.solver.k == 0 {
            bail!("solver.k must be at least 1");
        }
        if self.matter.enabled && self.matter.w == 0 {
            bail!("matter.w must be at least 1");
        }
        self.region.region()?;
        if let Some(inner) = &self.inner {
            inner.region()?;
        }
        self.group_spec()?;
        self.couplings()?;
        Ok(())
    }

    pub fn group_spec(&self) -> Result<GroupSpec> {
        Ok(match self.group {
            GroupName::ZN => GroupSpec::zn(self.n.unwrap_or(0))?,
            GroupName::U1 => GroupSpec::u1(),
            GroupName::SU2 => GroupSpec::su2(),
        })
    }

    pub fn couplings(&self) -> Result<Couplings> {
        let c = &self.couplings;
        Ok(Couplings::new(c.a, c.g, c.m, HoppingKernel::from_name(&c.kernel)?)?)
    }

    pub fn space(&self) -> Result<KinematicSpace> {
        let group = self.group_spec()?;
        let graph = build_lattice(self.region.region()?);
        let matter = self.matter.enabled.then(|| MatterSpec::new(self.matter.w, &group));
        Ok(build_kinematic_space(graph, group, self.cutoff, matter))
    }
}
