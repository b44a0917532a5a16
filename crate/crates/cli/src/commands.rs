//! One function per subcommand, each turning a configuration into a report.

use crate::config::{RunConfig, SolverMode};
use crate::report::{Report, SectionReport, SpectrumRow};
use anyhow::{bail, Result};
use lgk_core::gauge_action::{gauge_invariance_residual, gauss_projector, invariant_dim, site_projector, KinematicSpace, ProjectorRoute};
use lgk_core::gauge_group::GroupKind;
use lgk_core::lattice::{Region, Site};
use lgk_core::linalg::{hermiticity_residual, sp_commutator, sp_dist, sp_matvec, sp_mul, sp_norm, sp_trace, SpMat, C64};
use lgk_core::link_space::build_link_space;
use lgk_core::observables::{hamiltonian, wilson_loop, LoopPath};
use lgk_core::solver::{eigs, Spectrum, SpectrumMode, SpectrumRequest};
use lgk_core::tprocedure::{
    compare_traditional, constraint_data, local_system, nesting_check, subsystem_check, MatrixAlgebra, SystemSummary, MAX_AMBIENT,
};
use lgk_core::verify::{
    fermion_checks, gauge_checks, group_checks, lattice_checks, link_checks, observable_checks, solver_checks, tprocedure_checks, Check,
};
use serde::Serialize;
use serde_json::{json, Value};

/// Pinned tolerance for agreement of the two projector routes.
const ROUTE_TOL: f64 = 1e-8;

/// A report plus the CSV files that accompany it.
pub struct Output {
    pub report: Report,
    pub tables: Vec<(&'static str, Vec<SpectrumRow>)>,
}

impl From<Report> for Output {
    fn from(report: Report) -> Self {
        Output { report, tables: Vec::new() }
    }
}

fn rank(p: &SpMat) -> usize {
    sp_trace(p).re.round() as usize
}

fn whole(space: &KinematicSpace) -> Region {
    space.graph.region
}

fn single_site(x: Site) -> Region {
    Region { lo: x, hi: x }
}

pub fn lattice_info(cfg: &RunConfig) -> Result<Output> {
    let space = cfg.space()?;
    let g = &space.graph;
    let mut sites = Vec::new();
    for x in &g.sites {
        let r = single_site(*x);
        sites.push(json!({"site": x, "envelope": g.envelope(&r)?.len(), "links_meeting": g.links_meeting(&r).len()}));
    }
    let results = json!({
        "sites": g.sites.len(),
        "links": g.links.len(),
        "plaquettes": g.plaquettes.len(),
        "envelope": g.envelope(&g.region)?.len(),
        "site_envelopes": sites,
    });
    Ok(Report::new("lattice-info", cfg, results, vec![SectionReport::new("lattice", &lattice_checks(g))]).into())
}

pub fn sector_dim(cfg: &RunConfig) -> Result<Output> {
    let space = cfg.space()?;
    let region = whole(&space);
    let exact = gauss_projector(&space, &region, ProjectorRoute::Exact)?;
    let quad = gauss_projector(&space, &region, ProjectorRoute::Quadrature)?;
    let mut site_ranks = Vec::new();
    for x in space.graph.envelope(&region)? {
        site_ranks.push(json!({"site": x, "rank": rank(&site_projector(&space, &x, ProjectorRoute::Exact)?)}));
    }
    let distance = sp_dist(&exact, &quad);
    let results = json!({
        "total_dim": space.total_dim,
        "rank": rank(&exact),
        "rank_quadrature": rank(&quad),
        "route_distance": distance,
        "route_tol": ROUTE_TOL,
        "site_ranks": site_ranks,
    });
    let checks = vec![
        Check::count("projector routes agree in rank", rank(&quad), rank(&exact)),
        Check::residual("projector routes agree", distance, ROUTE_TOL),
        Check::residual("projector is idempotent", sp_dist(&sp_mul(&exact, &exact), &exact), cfg.tol),
        Check::residual("projector is hermitian", hermiticity_residual(&exact), cfg.tol),
    ];
    Ok(Report::new("sector-dim", cfg, results, vec![SectionReport::new("gauge_action", &checks)]).into())
}

fn request<'a>(cfg: &RunConfig, h: &'a SpMat, k: usize) -> SpectrumRequest<'a> {
    match cfg.solver.mode {
        SolverMode::Dense => SpectrumRequest::dense(h),
        SolverMode::Lanczos => {
            let mut req = SpectrumRequest::lanczos(h, k, cfg.tol, cfg.seed);
            if let (SpectrumMode::Lanczos { k, tol, .. }, Some(max_iter)) = (req.mode, cfg.solver.max_iter) {
                req.mode = SpectrumMode::Lanczos { k, max_iter, tol };
            }
            req
        }
    }
}

fn truncate(mut s: Spectrum, k: usize) -> Spectrum {
    s.eigenvalues.truncate(k);
    s.residuals.truncate(k);
    if let Some(v) = &s.vectors {
        let keep = k.min(v.ncols());
        s.vectors = Some(v.columns(0, keep).into_owned());
    }
    s
}

fn rows(s: &Spectrum) -> Vec<SpectrumRow> {
    s.eigenvalues
        .iter()
        .zip(&s.residuals)
        .enumerate()
        .map(|(index, (&eigenvalue, &residual))| SpectrumRow { index, eigenvalue, residual })
        .collect()
}

#[derive(Serialize)]
struct SpectrumResult {
    eigenvalues: Vec<f64>,
    residuals: Vec<f64>,
}

impl From<&Spectrum> for SpectrumResult {
    fn from(s: &Spectrum) -> Self {
        SpectrumResult { eigenvalues: s.eigenvalues.clone(), residuals: s.residuals.clone() }
    }
}

fn max_residual(s: &Spectrum) -> f64 {
    s.residuals.iter().cloned().fold(0.0, f64::max)
}

pub fn spectrum(cfg: &RunConfig) -> Result<Output> {
    let space = cfg.space()?;
    let h = hamiltonian(&space, &cfg.couplings()?)?;
    let p = gauss_projector(&space, &whole(&space), ProjectorRoute::Exact)?;
    let k = cfg.solver.k;
    let restricted = truncate(eigs(&request(cfg, &h, k).restricted(&p))?, k);
    let full = truncate(eigs(&request(cfg, &h, k))?, k);
    let herm = hermiticity_residual(&h);
    let commutator = sp_norm(&sp_commutator(&p, &h));
    let results = json!({
        "mode": cfg.solver.mode,
        "k": k,
        "tol": cfg.tol,
        "total_dim": space.total_dim,
        "sector_dim": rank(&p),
        "hermiticity_residual": herm,
        "projector_commutator": commutator,
        "restricted": SpectrumResult::from(&restricted),
        "full": SpectrumResult::from(&full),
    });
    let checks = vec![
        Check::residual("Hamiltonian is hermitian", herm, cfg.tol),
        Check::residual("projector commutes with the Hamiltonian", commutator, cfg.tol),
        Check::residual("restricted eigenpair residuals", max_residual(&restricted), cfg.tol),
        Check::residual("full eigenpair residuals", max_residual(&full), cfg.tol),
    ];
    let report = Report::new("spectrum", cfg, results, vec![SectionReport::new("solver", &checks)]);
    Ok(Output { report, tables: vec![("spectrum.csv", rows(&restricted)), ("full_spectrum.csv", rows(&full))] })
}

fn loop_path(cfg: &RunConfig, space: &KinematicSpace) -> Result<LoopPath> {
    match &cfg.wilson_loop {
        Some(sites) => Ok(LoopPath::from_sites(&space.graph, sites)?),
        None => match space.graph.plaquettes.first() {
            Some(p) => Ok(LoopPath::plaquette(p)),
            None => bail!("the lattice has no plaquette; give a \"loop\" in the config"),
        },
    }
}

pub fn wilson(cfg: &RunConfig) -> Result<Output> {
    let space = cfg.space()?;
    let path = loop_path(cfg, &space)?;
    let w = wilson_loop(&space, &path)?;
    let h = hamiltonian(&space, &cfg.couplings()?)?;
    let p = gauss_projector(&space, &whole(&space), ProjectorRoute::Exact)?;
    let k = cfg.solver.k.max(2);
    let spec = truncate(eigs(&request(cfg, &h, k).restricted(&p).with_vectors())?, k);
    let vecs = spec.vectors.as_ref().expect("vectors requested");
    let e0 = spec.eigenvalues[0];
    // Average over the computed ground space so that the value does not
    // depend on the basis chosen inside a degenerate eigenspace.
    let ground: Vec<usize> =
        (0..spec.eigenvalues.len()).filter(|&i| (spec.eigenvalues[i] - e0).abs() <= 1e-8 * e0.abs().max(1.0)).collect();
    let expectation: C64 = ground
        .iter()
        .map(|&i| {
            let v = vecs.column(i).into_owned();
            v.dotc(&sp_matvec(&w, &v))
        })
        .sum::<C64>()
        / ground.len() as f64;
    let invariance = gauge_invariance_residual(&space, &w, &whole(&space), cfg.seed)?;
    let results = json!({
        "loop_sites": path.sites(&space.graph),
        "ground_energy": e0,
        "ground_degeneracy": ground.len(),
        "expectation": {"re": expectation.re, "im": expectation.im},
        "trace": {"re": sp_trace(&w).re, "im": sp_trace(&w).im},
        "gauge_invariance_residual": invariance,
        "tol": cfg.tol,
    });
    let checks = vec![
        Check::residual("Wilson loop is gauge invariant", invariance, cfg.tol),
        Check::residual("ground state residual", spec.residuals[0], cfg.tol),
    ];
    Ok(Report::new("wilson", cfg, results, vec![SectionReport::new("observables", &checks)]).into())
}

fn summary_json(s: &SystemSummary) -> Value {
    json!({
        "algebra_dim": s.algebra_dim,
        "constraints": s.constraints,
        "dirac_rank": s.dirac_rank,
        "n_dim": s.n_dim,
        "d_dim": s.d_dim,
        "o_dim": s.o_dim,
        "r_dim": s.r_dim,
    })
}

/// The inner region for the nesting check: configured, else the first link.
fn inner_region(cfg: &RunConfig, space: &KinematicSpace) -> Result<Option<Region>> {
    if let Some(r) = &cfg.inner {
        return Ok(Some(r.region()?));
    }
    Ok(space.graph.links.first().map(|l| Region { lo: l.source, hi: l.target }))
}

pub fn tprocedure_report(cfg: &RunConfig) -> Result<Output> {
    let space = cfg.space()?;
    let region = whole(&space);
    let sys = local_system(&space, &region)?;
    let data = constraint_data(&sys.algebra, &sys.constraints)?;
    let trad = compare_traditional(&sys.algebra, &sys.constraints, &data)?;
    let (d, r) = (space.total_dim, data.dirac_rank);

    let mut reduction = data.checks.clone();
    reduction.push(Check::flag("constraints are first class with a nonzero Dirac subspace", r > 0));
    let mut sections = vec![SectionReport::new("reduction", &reduction), SectionReport::new("traditional", &trad.checks())];
    if sys.algebra.is_full() {
        let structure = vec![
            Check::count("dim O = r^2 + (d - r)^2", data.o.dim(), r * r + (d - r) * (d - r)),
            Check::count("dim D = (d - r)^2", data.d.dim(), (d - r) * (d - r)),
            Check::count("dim R = r^2", data.r.dim(), r * r),
        ];
        sections.push(SectionReport::new("structure", &structure));
    }

    // Subalgebra: generated by the constraints and the Hamiltonian.
    let h = hamiltonian(&space, &cfg.couplings()?)?;
    let mut gens = sys.constraints.unitaries.clone();
    gens.push(h);
    let a = MatrixAlgebra::generated(sys.algebra.ambient.clone(), &gens)?;
    let sub = subsystem_check(&a, &sys.algebra, &sys.constraints)?;
    sections.push(SectionReport::new("subsystem", &sub.checks()));

    let nesting = match inner_region(cfg, &space)? {
        Some(inner) => {
            let rep = nesting_check(&space, &inner, &region)?;
            sections.push(SectionReport::new("nesting", &rep.checks()));
            json!({"inner": {"lo": inner.lo, "hi": inner.hi}, "inner_system": summary_json(&rep.inner), "outer_system": summary_json(&rep.outer)})
        }
        None => Value::Null,
    };

    let results = json!({
        "total_dim": d,
        "algebra_dim": sys.algebra.dim(),
        "constraints": sys.constraints.unitaries.len(),
        "dirac_rank": r,
        "n_dim": data.n.dim(),
        "d_dim": data.d.dim(),
        "o_dim": data.o.dim(),
        "r_dim": data.r.dim(),
        "traditional_dim": trad.dim,
        "subsystem": {"a_dim": a.dim(), "n_dim": sub.n.dim_right, "d_dim": sub.d.dim_right, "o_dim": sub.o.dim_right},
        "nesting": nesting,
    });
    Ok(Report::new("tprocedure-report", cfg, results, sections).into())
}

pub fn verify(cfg: &RunConfig) -> Result<Output> {
    let space = cfg.space()?;
    let region = whole(&space);
    let couplings = cfg.couplings()?;
    let group = space.group;
    let mut sections = vec![
        SectionReport::new("lattice", &lattice_checks(&space.graph)),
        SectionReport::new("gauge_group", &group_checks(&group, cfg.cutoff)),
        SectionReport::new("link_space", &link_checks(&build_link_space(group, cfg.cutoff), cfg.seed)?),
    ];
    if let Some(fock) = &space.matter {
        sections.push(SectionReport::new("fermion_space", &fermion_checks(fock, &group, cfg.seed)?));
    }
    sections.push(SectionReport::new("gauge_action", &gauge_checks(&space, &region, cfg.seed)?));
    sections.push(SectionReport::new("observables", &observable_checks(&space, &couplings, cfg.seed)?));
    let h = hamiltonian(&space, &couplings)?;
    sections.push(SectionReport::new("solver", &solver_checks(&h, cfg.solver.k, cfg.tol, cfg.seed)?));
    if space.total_dim <= MAX_AMBIENT {
        let mut checks = tprocedure_checks(&space, &region)?;
        if let Some(inner) = inner_region(cfg, &space)? {
            checks.extend(nesting_check(&space, &inner, &region)?.checks());
        }
        sections.push(SectionReport::new("tprocedure", &checks));
    } else {
        let reason = format!("total dimension {} above the operator-span limit {MAX_AMBIENT}", space.total_dim);
        sections.push(SectionReport::new("tprocedure", &[Check::skipped("reduction identities", reason)]));
    }
    let results = json!({
        "total_dim": space.total_dim,
        "sector_dim": invariant_dim(&space, &region)?,
        "group": group.name(),
        "lie_dim": group.lie_dim(),
        "abelian": group.kind != GroupKind::SU2,
        "sections": sections.iter().map(|s| json!({"module": s.module, "checks": s.checks.len(), "passed": s.passed})).collect::<Vec<_>>(),
    });
    Ok(Report::new("verify", cfg, results, sections).into())
}
