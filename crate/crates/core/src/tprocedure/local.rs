//! Local constraint systems of lattice regions and the nesting check.
//!
//! The field algebra `F(S)` of a region `S` is generated by
//! - every operator on the links meeting `S`,
//! - the mode annihilators at the sites of `S`,
//! - the gauge unitaries `Ŵ(g δ_x)` for `x` in the envelope of `S` and `g`
//!   a constraint generator of the group,
//!
//! and the constraints are those gauge unitaries. The first set is the full
//! matrix algebra on the covered tensor factors, so
//! `F(S) = M(covered) ⊗ B` with `B` generated on the remaining factors by the
//! restrictions of the other generators (and the identity).

use super::{constraint_data, Ambient, ConstraintData, ConstraintSet, GradedSpan, MatrixAlgebra, SpanComparison, CHECK_TOL};
use crate::error::{LgkError, Result};
use crate::gauge_action::{gauge_unitary_factors, GaugeTransformation, KinematicSpace};
use crate::lattice::{is_subregion, Region, Site};
use crate::linalg::{sp_dist, sp_from_triplets, sp_identity, sp_kron, sp_kron_all, sp_to_dense, SpMat, ZERO};
use crate::verify::Check;

#[derive(Debug, Clone)]
pub struct LocalSystem {
    pub region: Region,
    pub algebra: MatrixAlgebra,
    pub constraints: ConstraintSet,
    /// `(site, generator index)` of each constraint unitary.
    pub labels: Vec<(Site, usize)>,
    /// Tensor factors on which `F(S)` is the full matrix algebra.
    pub covered_factors: Vec<usize>,
}

pub fn local_system(space: &KinematicSpace, region: &Region) -> Result<LocalSystem> {
    let amb = Ambient::for_space(space)?;
    let env = space.graph.envelope(region)?;
    let generators = space.group.constraint_generators();
    let mut labels = Vec::new();
    let mut unitaries = Vec::new();
    let mut factor_lists = Vec::new();
    for x in &env {
        let xi = space.graph.require_site(x)?;
        for (gi, g) in generators.iter().enumerate() {
            let gamma = GaugeTransformation::single_site(&space.group, space.num_sites(), xi, *g);
            let factors = gauge_unitary_factors(space, &gamma);
            unitaries.push(sp_kron_all(&factors));
            labels.push((*x, gi));
            factor_lists.push(factors);
        }
    }
    let nfac = space.factor_dims.len();
    let mut covered = vec![false; nfac];
    for l in space.graph.links_meeting(region) {
        covered[space.link_factor(l)] = true;
    }
    let region_sites: Vec<usize> = (0..space.num_sites()).filter(|&i| region.contains(&space.graph.sites[i])).collect();
    if space.matter.is_some() && region_sites.len() == space.num_sites() {
        covered[0] = true;
    }
    let uncovered: Vec<usize> = (0..nfac).filter(|&k| !covered[k]).collect();
    let algebra = if uncovered.is_empty() {
        MatrixAlgebra::full(amb)
    } else {
        let du: usize = uncovered.iter().map(|&k| space.factor_dims[k]).product();
        let mut gens = vec![sp_identity(du)];
        for factors in &factor_lists {
            gens.push(sp_kron_all(&uncovered.iter().map(|&k| factors[k].clone()).collect::<Vec<_>>()));
        }
        if let (Some(fock), false) = (&space.matter, covered[0]) {
            let rest: usize = uncovered[1..].iter().map(|&k| space.factor_dims[k]).product();
            for &x in &region_sites {
                for i in 0..fock.matter.internal_dim() {
                    gens.push(sp_kron(&fock.mode_annihilator(fock.mode_index(x, i)), &sp_identity(rest)));
                }
            }
        }
        let b = MatrixAlgebra::generated(Ambient::trivial(du)?, &gens)?;
        let span = full_tensor(&amb, &space.factor_dims, &covered, &b);
        MatrixAlgebra::from_span(amb, span)
    };
    let constraints = ConstraintSet::new(space.total_dim, unitaries)?;
    let covered_factors = (0..nfac).filter(|&k| covered[k]).collect();
    Ok(LocalSystem { region: *region, algebra, constraints, labels, covered_factors })
}

/// Span of `E_ab ⊗ Y` over matrix units of the covered factors and a basis
/// `Y` of `B`, placed in the ambient factor order.
fn full_tensor(amb: &Ambient, dims: &[usize], covered: &[bool], b: &MatrixAlgebra) -> GradedSpan {
    let d = amb.dim();
    let dc: usize = dims.iter().zip(covered).filter(|(_, c)| **c).map(|(d, _)| d).product();
    let mut by_cov: Vec<Vec<(usize, usize)>> = vec![Vec::new(); dc];
    for s in 0..d {
        let (mut rem, mut cov, mut unc, mut cov_stride, mut unc_stride) = (s, 0, 0, 1, 1);
        for k in (0..dims.len()).rev() {
            let digit = rem % dims[k];
            rem /= dims[k];
            if covered[k] {
                cov += digit * cov_stride;
                cov_stride *= dims[k];
            } else {
                unc += digit * unc_stride;
                unc_stride *= dims[k];
            }
        }
        by_cov[cov].push((unc, s));
    }
    let ys: Vec<_> = b.span.ops(&b.ambient).iter().map(sp_to_dense).collect();
    let mut ops = Vec::with_capacity(dc * dc * ys.len());
    for rows in &by_cov {
        for cols in &by_cov {
            for y in &ys {
                let mut trips = Vec::new();
                for &(u, s) in rows {
                    for &(v, t) in cols {
                        if y[(u, v)] != ZERO {
                            trips.push((s, t, y[(u, v)]));
                        }
                    }
                }
                ops.push(sp_from_triplets(d, d, trips));
            }
        }
    }
    GradedSpan::from_ops(amb, &ops)
}

/// Dimensions describing one reduced local system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemSummary {
    pub algebra_dim: usize,
    pub constraints: usize,
    pub dirac_rank: usize,
    pub n_dim: usize,
    pub d_dim: usize,
    pub o_dim: usize,
    pub r_dim: usize,
}

impl SystemSummary {
    fn of(sys: &LocalSystem, data: &ConstraintData) -> Self {
        SystemSummary {
            algebra_dim: sys.algebra.dim(),
            constraints: sys.constraints.unitaries.len(),
            dirac_rank: data.dirac_rank,
            n_dim: data.n.dim(),
            d_dim: data.d.dim(),
            o_dim: data.o.dim(),
            r_dim: data.r.dim(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NestingReport {
    pub inner: SystemSummary,
    pub outer: SystemSummary,
    /// Distance of `F_i` from `F_j`.
    pub algebra_contained: f64,
    /// Distance of `O_i` from `O_j`.
    pub o_contained: f64,
    /// `D_i` against `D_j ∩ O_i`.
    pub d_equality: SpanComparison,
    /// The inner constraints are exactly the outer ones at envelope sites of
    /// the inner region.
    pub generators_match: bool,
    /// Checks of the two reductions themselves.
    pub inner_checks: Vec<Check>,
    pub outer_checks: Vec<Check>,
}

impl NestingReport {
    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::residual("inner field algebra lies in the outer one", self.algebra_contained, CHECK_TOL),
            Check::residual("O_i is contained in O_j", self.o_contained, CHECK_TOL),
            Check::span("D_i equals D_j restricted to O_i", self.d_equality, CHECK_TOL),
            Check::flag("inner constraints are the outer ones on the inner envelope", self.generators_match),
            Check::flag("inner reduction identities hold", self.inner_checks.iter().all(Check::passed)),
            Check::flag("outer reduction identities hold", self.outer_checks.iter().all(Check::passed)),
        ]
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(Check::passed)
    }
}

/// Reduction isotony for `inner ⊆ outer`: `O_i ⊆ O_j` and `D_i = D_j ∩ O_i`.
pub fn nesting_check(space: &KinematicSpace, inner: &Region, outer: &Region) -> Result<NestingReport> {
    if !is_subregion(inner, outer) {
        return Err(LgkError::NotNested(format!("region {:?}..{:?} is not inside {:?}..{:?}", inner.lo, inner.hi, outer.lo, outer.hi)));
    }
    let si = local_system(space, inner)?;
    let sj = local_system(space, outer)?;
    let di = constraint_data(&si.algebra, &si.constraints)?;
    let dj = constraint_data(&sj.algebra, &sj.constraints)?;
    let env_i = space.graph.envelope(inner)?;
    let expected: Vec<(&(Site, usize), &SpMat)> =
        sj.labels.iter().zip(&sj.constraints.unitaries).filter(|((x, _), _)| env_i.contains(x)).collect();
    let generators_match = expected.len() == si.labels.len()
        && expected
            .iter()
            .zip(si.labels.iter().zip(&si.constraints.unitaries))
            .all(|((lj, uj), (li, ui))| *lj == li && sp_dist(uj, ui) < 1e-14);
    Ok(NestingReport {
        inner: SystemSummary::of(&si, &di),
        outer: SystemSummary::of(&sj, &dj),
        algebra_contained: sj.algebra.span.containment_residual(&si.algebra.span),
        o_contained: dj.o.containment_residual(&di.o),
        d_equality: di.d.compare(&dj.d.intersect(&di.o)),
        generators_match,
        inner_checks: di.checks,
        outer_checks: dj.checks,
    })
}
