//! Gauge action on the full kinematic space `H = H_F ⊗ ⊗_ℓ H_ℓ`: gauge
//! unitaries, Gauss-law generators and the projector onto the
//! gauge-invariant subspace of a region.
//!
//! Tensor factors are ordered matter first (when present), then links by
//! index, the first factor being most significant in the basis index.
//! The Gauss generator at `x` is
//! `G_x = G^F_x + Σ_{ℓ out of x} P^L_ℓ + Σ_{ℓ into x} P^R_ℓ`, so that
//! `Ŵ(exp(i t Y_r) δ_x) = exp(-i t G_{x,r})`; for U(1) this is outgoing
//! minus incoming electric flux minus the matter charge at `x`.

use crate::error::{LgkError, Result};
use crate::fermion_space::{build_fock_space, matter_gauge_unitary, matter_gauss_generator, FockSpace, MatterSpec};
use crate::gauge_group::{haar_quadrature, GroupElement, GroupKind, GroupSpec};
use crate::lattice::{LatticeGraph, Region, Site};
use crate::linalg::{
    c, eigh, sp_add, sp_commutator, sp_diag, sp_embed, sp_from_dense, sp_identity, sp_kron_all, sp_mul, sp_norm, sp_scale, sp_to_dense,
    sp_zeros, Mat, SpMat, Vector, C64, ONE, ZERO,
};
use crate::link_space::{build_link_space, electric_generator_left, electric_generator_right, link_gauge_unitary, TruncatedLinkSpace};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Map from sites (by lattice position) to group elements.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransformation {
    pub elements: Vec<GroupElement>,
}

impl GaugeTransformation {
    pub fn new(elements: Vec<GroupElement>) -> Self {
        GaugeTransformation { elements }
    }

    pub fn identity(group: &GroupSpec, num_sites: usize) -> Self {
        GaugeTransformation { elements: vec![group.identity(); num_sites] }
    }

    /// `g` at site `x`, identity elsewhere.
    pub fn single_site(group: &GroupSpec, num_sites: usize, x: usize, g: GroupElement) -> Self {
        let mut t = Self::identity(group, num_sites);
        t.elements[x] = g;
        t
    }

    /// Haar-random values on `support`, identity elsewhere.
    pub fn random_supported<R: Rng>(group: &GroupSpec, num_sites: usize, support: &[usize], rng: &mut R) -> Self {
        let mut t = Self::identity(group, num_sites);
        for &x in support {
            t.elements[x] = group.random(rng);
        }
        t
    }

    pub fn at(&self, x: usize) -> &GroupElement {
        &self.elements[x]
    }

    /// Pointwise product `(γγ′)(x) = γ(x)γ′(x)`.
    pub fn compose(&self, other: &GaugeTransformation) -> Self {
        GaugeTransformation { elements: self.elements.iter().zip(&other.elements).map(|(a, b)| a.mul(b)).collect() }
    }
}

#[derive(Debug, Clone)]
pub struct KinematicSpace {
    pub graph: LatticeGraph,
    pub group: GroupSpec,
    pub link_space: TruncatedLinkSpace,
    pub matter: Option<FockSpace>,
    pub factor_dims: Vec<usize>,
    pub total_dim: usize,
}

pub fn build_kinematic_space(graph: LatticeGraph, group: GroupSpec, cutoff: u32, matter: Option<MatterSpec>) -> KinematicSpace {
    let link_space = build_link_space(group, cutoff);
    let matter = matter.map(|m| build_fock_space(&graph.sites, m));
    let mut factor_dims = Vec::new();
    if let Some(f) = &matter {
        factor_dims.push(f.dim);
    }
    factor_dims.extend(std::iter::repeat_n(link_space.dim, graph.links.len()));
    let total_dim = factor_dims.iter().product();
    KinematicSpace { graph, group, link_space, matter, factor_dims, total_dim }
}

impl KinematicSpace {
    /// Tensor-factor position of link `l`.
    pub fn link_factor(&self, l: usize) -> usize {
        l + usize::from(self.matter.is_some())
    }

    pub fn num_sites(&self) -> usize {
        self.graph.sites.len()
    }

    pub fn embed_link(&self, l: usize, op: &Mat) -> SpMat {
        sp_embed(&self.factor_dims, self.link_factor(l), &sp_from_dense(op, 0.0))
    }

    pub fn embed_matter(&self, op: &SpMat) -> Result<SpMat> {
        if self.matter.is_none() {
            return Err(LgkError::MatterAbsent);
        }
        Ok(sp_embed(&self.factor_dims, 0, op))
    }

    pub fn fock(&self) -> Result<&FockSpace> {
        self.matter.as_ref().ok_or(LgkError::MatterAbsent)
    }

    /// `Ω ⊗ ψ₀ ⊗ ⋯ ⊗ ψ₀`.
    pub fn vacuum(&self) -> Vector {
        let mut idx = 0;
        for (f, d) in self.factor_dims.iter().enumerate() {
            let local = if self.matter.is_some() && f == 0 { 0 } else { self.link_space.vacuum_index };
            idx = idx * d + local;
        }
        let mut v = Vector::zeros(self.total_dim);
        v[idx] = ONE;
        v
    }

    /// Factor indices of a basis state, first factor first.
    pub fn decode(&self, mut state: usize) -> Vec<usize> {
        let mut out = vec![0; self.factor_dims.len()];
        for f in (0..self.factor_dims.len()).rev() {
            out[f] = state % self.factor_dims[f];
            state /= self.factor_dims[f];
        }
        out
    }

    /// For abelian groups: the Gauss-law charge of every basis state at every
    /// site (eigenvalue of `G_x` for U(1), residue mod N for Z_N), and the
    /// modulus (0 for U(1)). `None` for SU(2), whose Gauss generators are not
    /// simultaneously diagonal.
    pub fn site_charges(&self) -> Option<(Vec<Vec<i64>>, i64)> {
        let modulus = match self.group.kind {
            GroupKind::ZN(n) => n as i64,
            GroupKind::U1 => 0,
            GroupKind::SU2 => return None,
        };
        let nsites = self.num_sites();
        let mut out = Vec::with_capacity(self.total_dim);
        for s in 0..self.total_dim {
            let idx = self.decode(s);
            let mut q = vec![0i64; nsites];
            for l in &self.graph.links {
                let charge = self.link_space.basis[idx[self.link_factor(l.index)]].irrep.label;
                q[self.graph.site_index(&l.source).unwrap()] += charge;
                q[self.graph.site_index(&l.target).unwrap()] -= charge;
            }
            if let Some(f) = &self.matter {
                for p in 0..f.num_modes() {
                    if f.occupied(idx[0], p) {
                        q[f.modes[p].0] -= 1;
                    }
                }
            }
            if modulus > 0 {
                for x in q.iter_mut() {
                    *x = x.rem_euclid(modulus);
                }
            }
            out.push(q);
        }
        Some((out, modulus))
    }
}

/// `Ŵ_γ = U^F_γ ⊗ ⊗_ℓ W_(γ(x_ℓ), γ(y_ℓ))`.
pub fn full_gauge_unitary(space: &KinematicSpace, gamma: &GaugeTransformation) -> SpMat {
    sp_kron_all(&gauge_unitary_factors(space, gamma))
}

/// The tensor factors of `Ŵ_γ`, in factor order.
pub fn gauge_unitary_factors(space: &KinematicSpace, gamma: &GaugeTransformation) -> Vec<SpMat> {
    let mut factors = Vec::with_capacity(space.factor_dims.len());
    if let Some(f) = &space.matter {
        factors.push(matter_gauge_unitary(f, gamma));
    }
    for l in &space.graph.links {
        let h = gamma.at(space.graph.site_index(&l.source).unwrap());
        let s = gamma.at(space.graph.site_index(&l.target).unwrap());
        factors.push(sp_from_dense(&link_gauge_unitary(&space.link_space, h, s).matrix, 1e-15));
    }
    factors
}

#[derive(Debug, Clone)]
pub struct GaussGenerator {
    pub site: Site,
    pub lie_index: usize,
    pub operator: SpMat,
}

pub fn gauss_generator(space: &KinematicSpace, x: &Site, r: usize) -> Result<GaussGenerator> {
    space.group.check_lie_index(r)?;
    let xi = space.graph.require_site(x)?;
    let mut op = sp_zeros(space.total_dim);
    if let Some(f) = &space.matter {
        op = sp_add(&op, &space.embed_matter(&matter_gauss_generator(f, &space.group, xi, r)?)?);
    }
    let (out, inc) = space.graph.links_at(x)?;
    let pl = electric_generator_left(&space.link_space, r)?.matrix;
    let pr = electric_generator_right(&space.link_space, r)?.matrix;
    for l in out {
        op = sp_add(&op, &space.embed_link(l.index, &pl));
    }
    for l in inc {
        op = sp_add(&op, &space.embed_link(l.index, &pr));
    }
    Ok(GaussGenerator { site: *x, lie_index: r, operator: op })
}

/// How the per-site projector onto the trivial isotypic component is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorRoute {
    /// Charge selection for abelian groups, nullspace of the local Casimir
    /// `Σ_r G_{x,r}²` for SU(2).
    Exact,
    /// Haar average of `Ŵ(g δ_x)` by quadrature (plain group sum for Z_N).
    Quadrature,
}

/// Relative singular-value threshold for the Casimir nullspace.
const NULLSPACE_REL_TOL: f64 = 1e-9;

fn selection_projector(space: &KinematicSpace, xi: usize) -> SpMat {
    let (charges, _) = space.site_charges().expect("abelian group");
    let d: Vec<C64> = charges.iter().map(|q| if q[xi] == 0 { ONE } else { ZERO }).collect();
    sp_diag(&d)
}

fn casimir_projector(space: &KinematicSpace, x: &Site) -> Result<SpMat> {
    let mut cas = sp_zeros(space.total_dim);
    for r in 0..space.group.lie_dim() {
        let g = gauss_generator(space, x, r)?.operator;
        cas = sp_add(&cas, &sp_mul(&g, &g));
    }
    let (vals, vecs) = eigh(&sp_to_dense(&cas));
    let top = vals.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
    let thresh = NULLSPACE_REL_TOL * top.max(1.0);
    let keep: Vec<usize> = (0..vals.len()).filter(|&k| vals[k].abs() <= thresh).collect();
    let mut basis = Mat::zeros(space.total_dim, keep.len());
    for (col, &k) in keep.iter().enumerate() {
        basis.set_column(col, &vecs.column(k));
    }
    Ok(sp_from_dense(&(&basis * basis.adjoint()), 1e-13))
}

/// Quadrature order making the site average exact: larger than the total
/// charge (U(1)) or total twice-spin (SU(2)) carried at the site.
fn quadrature_order(space: &KinematicSpace, x: &Site) -> Result<usize> {
    let (out, inc) = space.graph.links_at(x)?;
    let nlinks = out.len() + inc.len();
    let matter = space.matter.as_ref().map_or(0, |f| f.matter.internal_dim());
    Ok(nlinks * space.link_space.cutoff as usize + matter + 1)
}

fn quadrature_projector(space: &KinematicSpace, x: &Site) -> Result<SpMat> {
    let xi = space.graph.require_site(x)?;
    let rule = haar_quadrature(&space.group, quadrature_order(space, x)?);
    let mut acc = sp_zeros(space.total_dim);
    for (g, w) in &rule {
        let gamma = GaugeTransformation::single_site(&space.group, space.num_sites(), xi, *g);
        acc = sp_add(&acc, &sp_scale(&full_gauge_unitary(space, &gamma), c(*w, 0.0)));
    }
    Ok(acc.filter(|_, _, v| v.norm() > 1e-13))
}

/// Orthogonal projector `Π_x` onto the trivial isotypic component of the
/// gauge action at a single site.
pub fn site_projector(space: &KinematicSpace, x: &Site, route: ProjectorRoute) -> Result<SpMat> {
    let xi = space.graph.require_site(x)?;
    match (route, space.group.kind) {
        (ProjectorRoute::Quadrature, _) => quadrature_projector(space, x),
        (ProjectorRoute::Exact, GroupKind::SU2) => casimir_projector(space, x),
        (ProjectorRoute::Exact, _) => Ok(selection_projector(space, xi)),
    }
}

/// `P_α = ∏_{x ∈ envelope(region)} Π_x`; the identity for an empty envelope.
pub fn gauss_projector(space: &KinematicSpace, region: &Region, route: ProjectorRoute) -> Result<SpMat> {
    let env = space.graph.envelope(region)?;
    let mut p = sp_identity(space.total_dim);
    for x in &env {
        p = sp_mul(&p, &site_projector(space, x, route)?);
    }
    Ok(p.filter(|_, _, v| v.norm() > 1e-13))
}

/// Rank of `P_α`.
pub fn invariant_dim(space: &KinematicSpace, region: &Region) -> Result<usize> {
    let p = gauss_projector(space, region, ProjectorRoute::Exact)?;
    Ok(crate::linalg::sp_trace(&p).re.round() as usize)
}

/// Deterministic sample of gauge transformations supported on a site set:
/// `count` Haar-random ones from the seed.
pub fn sample_gauge_transformations(space: &KinematicSpace, support: &[usize], count: usize, seed: u64) -> Vec<GaugeTransformation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| GaugeTransformation::random_supported(&space.group, space.num_sites(), support, &mut rng)).collect()
}

pub fn envelope_indices(space: &KinematicSpace, region: &Region) -> Result<Vec<usize>> {
    let env: BTreeSet<Site> = space.graph.envelope(region)?;
    Ok(env.iter().map(|x| space.graph.site_index(x).unwrap()).collect())
}

/// Largest commutator norm of `op` with 20 seeded random gauge unitaries
/// supported on the envelope and with every local generator (Lie generators
/// for continuous groups, the generating element for Z_N).
pub fn gauge_invariance_residual(space: &KinematicSpace, op: &SpMat, region: &Region, seed: u64) -> Result<f64> {
    let support = envelope_indices(space, region)?;
    let mut worst: f64 = 0.0;
    for gamma in sample_gauge_transformations(space, &support, 20, seed) {
        worst = worst.max(sp_norm(&sp_commutator(&full_gauge_unitary(space, &gamma), op)));
    }
    for &xi in &support {
        let x = space.graph.sites[xi];
        if space.group.lie_dim() > 0 {
            for r in 0..space.group.lie_dim() {
                worst = worst.max(sp_norm(&sp_commutator(&gauss_generator(space, &x, r)?.operator, op)));
            }
        } else {
            for g in space.group.constraint_generators() {
                let gamma = GaugeTransformation::single_site(&space.group, space.num_sites(), xi, g);
                worst = worst.max(sp_norm(&sp_commutator(&full_gauge_unitary(space, &gamma), op)));
            }
        }
    }
    Ok(worst)
}

pub fn is_gauge_invariant(space: &KinematicSpace, op: &SpMat, region: &Region, tol: f64) -> Result<bool> {
    Ok(gauge_invariance_residual(space, op, region, 0x5eed)? < tol)
}
