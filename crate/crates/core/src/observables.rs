//! Gauge-invariant observables: Wilson loops, fermion bilinears joined by a
//! Wilson line, and the four terms of the lattice Hamiltonian.
//!
//! A path is a sequence of links with traversal signs. The connection matrix
//! of a step is the `k×k` matrix of operators `Φ(ℓ) = (T_ij(ℓ))` for sign +1
//! and its matrix adjoint `Φ(ℓ)* = (T_ji(ℓ)*)` for sign −1. Products along a
//! path keep the traversal order, since truncated multiplication operators on
//! the same link need not commute.

use crate::error::{LgkError, Result};
use crate::gauge_action::KinematicSpace;
use crate::gauge_group::pauli;
use crate::lattice::{LatticeGraph, Plaquette, Site};
use crate::linalg::{c, sp_add, sp_adjoint, sp_identity, sp_mul, sp_scale, sp_zeros, Mat, SpMat, Vector, C64, I, ONE, ZERO};
use crate::link_space::{casimir, multiplication_op};

/// Ordered links with traversal signs, starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopPath {
    pub start: Site,
    pub steps: Vec<(usize, i8)>,
    pub closed: bool,
}

impl LoopPath {
    /// Validate head-to-tail consistency of `steps` from `start`.
    pub fn new(graph: &LatticeGraph, start: Site, steps: Vec<(usize, i8)>) -> Result<Self> {
        graph.require_site(&start)?;
        let mut at = start;
        for (k, &(l, s)) in steps.iter().enumerate() {
            let link = graph.links.get(l).ok_or_else(|| LgkError::InvalidPath(format!("step {k}: no link {l}")))?;
            let (from, to) = match s {
                1 => (link.source, link.target),
                -1 => (link.target, link.source),
                _ => return Err(LgkError::InvalidPath(format!("step {k}: sign must be ±1"))),
            };
            if from != at {
                return Err(LgkError::InvalidPath(format!("step {k} starts at {from:?}, path is at {at:?}")));
            }
            at = to;
        }
        Ok(LoopPath { start, closed: at == start, steps })
    }

    /// Path through a sequence of nearest-neighbour sites.
    pub fn from_sites(graph: &LatticeGraph, sites: &[Site]) -> Result<Self> {
        let start = *sites.first().ok_or_else(|| LgkError::InvalidPath("empty site list".into()))?;
        let mut steps = Vec::new();
        for w in sites.windows(2) {
            let step = graph
                .link_between(&w[0], &w[1])
                .ok_or_else(|| LgkError::InvalidPath(format!("{:?} and {:?} are not joined by a link", w[0], w[1])))?;
            steps.push(step);
        }
        Self::new(graph, start, steps)
    }

    /// Boundary of a plaquette, starting at its base site.
    pub fn plaquette(p: &Plaquette) -> Self {
        LoopPath { start: p.base, steps: p.links.to_vec(), closed: true }
    }

    /// Sites visited, including the start and the end.
    pub fn sites(&self, graph: &LatticeGraph) -> Vec<Site> {
        let mut out = vec![self.start];
        for &(l, s) in &self.steps {
            let link = &graph.links[l];
            out.push(if s == 1 { link.target } else { link.source });
        }
        out
    }

    pub fn end(&self, graph: &LatticeGraph) -> Site {
        *self.sites(graph).last().unwrap()
    }

    /// The same path traversed backwards.
    pub fn reversed(&self, graph: &LatticeGraph) -> Self {
        let steps = self.steps.iter().rev().map(|&(l, s)| (l, -s)).collect();
        LoopPath { start: self.end(graph), steps, closed: self.closed }
    }

    /// Closed loop started `k` steps later.
    pub fn rotated(&self, graph: &LatticeGraph, k: usize) -> Result<Self> {
        if !self.closed {
            return Err(LgkError::InvalidPath("only closed loops can be rotated".into()));
        }
        if self.steps.is_empty() {
            return Ok(self.clone());
        }
        let k = k % self.steps.len();
        let start = self.sites(graph)[k];
        let steps = self.steps[k..].iter().chain(&self.steps[..k]).cloned().collect();
        Ok(LoopPath { start, steps, closed: true })
    }
}

/// `k×k` matrix whose entries are operators on the full space.
type OpMatrix = Vec<Vec<SpMat>>;

fn identity_op_matrix(space: &KinematicSpace) -> OpMatrix {
    let k = space.group.defining_dim();
    (0..k).map(|i| (0..k).map(|j| if i == j { sp_identity(space.total_dim) } else { sp_zeros(space.total_dim) }).collect()).collect()
}

/// Connection matrix of a single step.
fn step_matrix(space: &KinematicSpace, link: usize, sign: i8) -> Result<OpMatrix> {
    let k = space.group.defining_dim();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            row.push(if sign == 1 {
                space.embed_link(link, &multiplication_op(&space.link_space, i, j)?.matrix)
            } else {
                sp_adjoint(&space.embed_link(link, &multiplication_op(&space.link_space, j, i)?.matrix))
            });
        }
        out.push(row);
    }
    Ok(out)
}

fn op_matrix_mul(a: &OpMatrix, b: &OpMatrix, dim: usize) -> OpMatrix {
    let k = a.len();
    (0..k).map(|i| (0..k).map(|j| (0..k).fold(sp_zeros(dim), |acc, m| sp_add(&acc, &sp_mul(&a[i][m], &b[m][j])))).collect()).collect()
}

/// Ordered product of connection matrices along a path.
pub fn path_transport(space: &KinematicSpace, path: &LoopPath) -> Result<Vec<Vec<SpMat>>> {
    let mut acc = identity_op_matrix(space);
    for &(l, s) in &path.steps {
        acc = op_matrix_mul(&acc, &step_matrix(space, l, s)?, space.total_dim);
    }
    Ok(acc)
}

/// `W(L) = Tr Φ(ℓ₁)^{±} ⋯ Φ(ℓ_m)^{±}`.
pub fn wilson_loop(space: &KinematicSpace, path: &LoopPath) -> Result<SpMat> {
    if !path.closed {
        return Err(LgkError::InvalidPath("Wilson loop requires a closed path".into()));
    }
    let m = path_transport(space, path)?;
    Ok((0..m.len()).fold(sp_zeros(space.total_dim), |acc, i| sp_add(&acc, &m[i][i])))
}

/// `Σ_{u,v,i,j} K_uv ψ*_{u,i}(x) M_ij ψ_{v,j}(y)` for the transport `M` from
/// `x` to `y` along `path` and a kernel `K` on the non-colour components.
pub fn fermion_line_with_kernel(space: &KinematicSpace, path: &LoopPath, kernel: &Mat) -> Result<SpMat> {
    let fock = space.fock()?;
    let (w, k) = (fock.matter.w, fock.matter.k);
    if kernel.nrows() != w || kernel.ncols() != w {
        return Err(LgkError::DimensionMismatch { expected: w, got: kernel.nrows() });
    }
    let x = space.graph.require_site(&path.start)?;
    let y = space.graph.require_site(&path.end(&space.graph))?;
    let m = path_transport(space, path)?;
    let mut acc = sp_zeros(space.total_dim);
    for i in 0..k {
        for j in 0..k {
            let mut bilinear = sp_zeros(fock.dim);
            for u in 0..w {
                for v in 0..w {
                    let kv = kernel[(u, v)];
                    if kv == ZERO {
                        continue;
                    }
                    let cre = fock.mode_creator(fock.mode_index(x, u * k + i));
                    let ann = fock.mode_annihilator(fock.mode_index(y, v * k + j));
                    bilinear = sp_add(&bilinear, &sp_scale(&sp_mul(&cre, &ann), kv));
                }
            }
            if bilinear.nnz() == 0 {
                continue;
            }
            acc = sp_add(&acc, &sp_mul(&space.embed_matter(&bilinear)?, &m[i][j]));
        }
    }
    Ok(acc)
}

/// `Q(C) = Σ_{i,j} ψ*_{(u,i)}(x) M_ij ψ_{(v,j)}(y)` with fixed non-colour
/// components `u` at the start and `v` at the end.
pub fn fermion_line(space: &KinematicSpace, path: &LoopPath, u: usize, v: usize) -> Result<SpMat> {
    let w = space.fock()?.matter.w;
    if u >= w || v >= w {
        return Err(LgkError::DimensionMismatch { expected: w, got: u.max(v) + 1 });
    }
    let mut kernel = Mat::zeros(w, w);
    kernel[(u, v)] = ONE;
    fermion_line_with_kernel(space, path, &kernel)
}

/// Hopping-kernel preset on the non-colour components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoppingKernel {
    /// One component, `γ₀ = 1`, `K = 1`.
    SingleComponent,
    /// Four-spinor Dirac representation, `γ₀ = diag(1,1,−1,−1)`,
    /// `γ_i = [[0, σ_i], [−σ_i, 0]]`, `K(axis) = γ₀γ_axis`.
    NaiveDirac,
}

impl HoppingKernel {
    pub fn name(&self) -> &'static str {
        match self {
            HoppingKernel::SingleComponent => "single-component",
            HoppingKernel::NaiveDirac => "naive-dirac",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "single-component" => Ok(HoppingKernel::SingleComponent),
            "naive-dirac" => Ok(HoppingKernel::NaiveDirac),
            other => Err(LgkError::InvalidCoupling(format!("unknown hopping kernel {other:?}"))),
        }
    }

    /// Number of non-colour components the preset acts on.
    pub fn components(&self) -> usize {
        match self {
            HoppingKernel::SingleComponent => 1,
            HoppingKernel::NaiveDirac => 4,
        }
    }

    pub fn gamma0(&self) -> Mat {
        match self {
            HoppingKernel::SingleComponent => Mat::identity(1, 1),
            HoppingKernel::NaiveDirac => Mat::from_diagonal(&Vector::from_vec(vec![ONE, ONE, -ONE, -ONE])),
        }
    }

    pub fn gamma(&self, axis: usize) -> Mat {
        match self {
            HoppingKernel::SingleComponent => Mat::identity(1, 1),
            HoppingKernel::NaiveDirac => {
                let s = &pauli()[axis];
                let mut g = Mat::zeros(4, 4);
                g.view_mut((0, 2), (2, 2)).copy_from(s);
                g.view_mut((2, 0), (2, 2)).copy_from(&(-s));
                g
            }
        }
    }

    /// `γ₀ K(axis)`, the matrix sandwiched between `ψ*` and `Φψ`.
    pub fn hopping_matrix(&self, axis: usize) -> Mat {
        match self {
            HoppingKernel::SingleComponent => Mat::identity(1, 1),
            HoppingKernel::NaiveDirac => self.gamma0() * self.gamma(axis),
        }
    }

    fn check(&self, space: &KinematicSpace) -> Result<()> {
        let w = space.fock()?.matter.w;
        if w != self.components() {
            return Err(LgkError::DimensionMismatch { expected: self.components(), got: w });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    /// Lattice spacing.
    pub a: f64,
    /// Gauge coupling.
    pub g: f64,
    /// Fermion mass.
    pub m: f64,
    pub kernel: HoppingKernel,
}

impl Couplings {
    pub fn new(a: f64, g: f64, m: f64, kernel: HoppingKernel) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(LgkError::InvalidCoupling(format!("lattice spacing must be positive, got {a}")));
        }
        if !(g > 0.0 && g.is_finite()) {
            return Err(LgkError::InvalidCoupling(format!("gauge coupling must be positive, got {g}")));
        }
        if !m.is_finite() {
            return Err(LgkError::InvalidCoupling(format!("mass must be finite, got {m}")));
        }
        Ok(Couplings { a, g, m, kernel })
    }
}

/// `(a/2) Σ_ℓ E²(ℓ)` with `E²` the link Casimir.
pub fn electric_term(space: &KinematicSpace, a: f64) -> SpMat {
    let cas = casimir(&space.link_space).matrix;
    let sum = (0..space.graph.links.len()).fold(sp_zeros(space.total_dim), |acc, l| sp_add(&acc, &space.embed_link(l, &cas)));
    sp_scale(&sum, c(a / 2.0, 0.0))
}

/// `(1/(2g²a)) Σ_p (W(p) + W(p)*)`.
pub fn magnetic_term(space: &KinematicSpace, g: f64, a: f64) -> Result<SpMat> {
    let mut sum = sp_zeros(space.total_dim);
    for p in &space.graph.plaquettes {
        let w = wilson_loop(space, &LoopPath::plaquette(p))?;
        sum = sp_add(&sum, &sp_add(&w, &sp_adjoint(&w)));
    }
    Ok(sp_scale(&sum, c(1.0 / (2.0 * g * g * a), 0.0)))
}

/// `m a³ Σ_x ψ*(x) (γ₀ ⊗ 1_colour) ψ(x)`.
pub fn mass_term(space: &KinematicSpace, m: f64, a: f64, kernel: HoppingKernel) -> Result<SpMat> {
    kernel.check(space)?;
    let fock = space.fock()?;
    let h = kernel.gamma0().kronecker(&Mat::identity(fock.matter.k, fock.matter.k));
    let sum = (0..fock.sites.len()).fold(sp_zeros(fock.dim), |acc, x| sp_add(&acc, &fock.site_bilinear(x, &h)));
    Ok(sp_scale(&space.embed_matter(&sum)?, c(m * a * a * a, 0.0)))
}

/// `T + T*` with `T = i(a/2) Σ_ℓ ψ*(x_ℓ) γ₀K(axis_ℓ) Φ(ℓ) ψ(y_ℓ)`.
pub fn hopping_term(space: &KinematicSpace, a: f64, kernel: HoppingKernel) -> Result<SpMat> {
    kernel.check(space)?;
    let mut t = sp_zeros(space.total_dim);
    for link in &space.graph.links {
        let path = LoopPath { start: link.source, steps: vec![(link.index, 1)], closed: false };
        let q = fermion_line_with_kernel(space, &path, &kernel.hopping_matrix(link.axis))?;
        t = sp_add(&t, &q);
    }
    let t = sp_scale(&t, I * (a / 2.0));
    Ok(sp_add(&t, &sp_adjoint(&t)))
}

/// Sum of the terms present: electric always, magnetic when the lattice has
/// plaquettes, mass and hopping when matter is enabled.
pub fn hamiltonian(space: &KinematicSpace, couplings: &Couplings) -> Result<SpMat> {
    let mut h = electric_term(space, couplings.a);
    if !space.graph.plaquettes.is_empty() {
        h = sp_add(&h, &magnetic_term(space, couplings.g, couplings.a)?);
    }
    if space.matter.is_some() {
        h = sp_add(&h, &mass_term(space, couplings.m, couplings.a, couplings.kernel)?);
        h = sp_add(&h, &hopping_term(space, couplings.a, couplings.kernel)?);
    }
    Ok(h.filter(|_, _, v| v.norm() > 1e-14))
}

/// `⟨v, A v⟩` (no normalization).
pub fn expectation(state: &Vector, op: &SpMat) -> Result<C64> {
    if state.len() != op.ncols() {
        return Err(LgkError::DimensionMismatch { expected: op.ncols(), got: state.len() });
    }
    Ok(state.dotc(&crate::linalg::sp_matvec(op, state)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion_space::MatterSpec;
    use crate::gauge_action::{build_kinematic_space, full_gauge_unitary, gauss_projector, sample_gauge_transformations, ProjectorRoute};
    use crate::gauge_group::GroupSpec;
    use crate::lattice::{build_lattice, Region};
    use crate::linalg::{eigh, hermiticity_residual, sp_commutator, sp_dist, sp_norm, sp_to_dense};

    fn square() -> LatticeGraph {
        build_lattice(Region::new([0, 0, 0], [1, 1, 0]).unwrap())
    }

    fn line() -> LatticeGraph {
        build_lattice(Region::new([0, 0, 0], [1, 0, 0]).unwrap())
    }

    fn plaquette_loop(ks: &KinematicSpace) -> LoopPath {
        LoopPath::plaquette(&ks.graph.plaquettes[0])
    }

    #[test]
    fn path_validation() {
        let g = square();
        let p = LoopPath::from_sites(&g, &[[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0], [0, 0, 0]]).unwrap();
        assert!(p.closed);
        assert_eq!(p, LoopPath::plaquette(&g.plaquettes[0]));
        assert!(LoopPath::new(&g, [0, 0, 0], vec![(3, 1)]).is_err());
        assert!(LoopPath::from_sites(&g, &[[0, 0, 0], [1, 1, 0]]).is_err());
        let open = LoopPath::new(&g, [0, 0, 0], vec![(0, 1)]).unwrap();
        assert!(!open.closed);
        assert_eq!(open.reversed(&g), LoopPath::new(&g, [1, 0, 0], vec![(0, -1)]).unwrap());
        assert!(open.rotated(&g, 1).is_err());
    }

    #[test]
    fn z2_plaquette_flips_all_links() {
        let ks = build_kinematic_space(square(), GroupSpec::zn(2).unwrap(), 0, None);
        let w = wilson_loop(&ks, &plaquette_loop(&ks)).unwrap();
        // Oracle: in the charge basis the loop flips every link charge.
        for s in 0..ks.total_dim {
            let flipped = ks.decode(s).iter().fold(0, |acc, q| acc * 2 + (1 - q));
            for t in 0..ks.total_dim {
                let expect = if t == flipped { ONE } else { ZERO };
                assert_eq!(w.get_entry(t, s).map_or(ZERO, |e| e.into_value()), expect);
            }
        }
        assert!(sp_dist(&sp_mul(&w, &w), &sp_identity(ks.total_dim)) < 1e-14);
    }

    #[test]
    fn u1_plaquette_shifts_charges() {
        let ks = build_kinematic_space(square(), GroupSpec::u1(), 1, None);
        let w = wilson_loop(&ks, &plaquette_loop(&ks)).unwrap();
        let signs = [1i64, -1, -1, 1];
        let charge = |idx: usize| ks.link_space.basis[idx].irrep.label;
        let pos = |q: i64| ks.link_space.basis.iter().position(|b| b.irrep.label == q);
        for s in 0..ks.total_dim {
            let qs: Vec<i64> = ks.decode(s).into_iter().map(charge).collect();
            let target: Option<usize> = (0..4).try_fold(0usize, |acc, l| pos(qs[l] + signs[l]).map(|p| acc * 3 + p));
            let col: Vec<(usize, C64)> =
                (0..ks.total_dim).map(|t| (t, w.get_entry(t, s).map_or(ZERO, |e| e.into_value()))).filter(|(_, v)| *v != ZERO).collect();
            match target {
                Some(t) => assert_eq!(col, vec![(t, ONE)]),
                None => assert!(col.is_empty()),
            }
        }
    }

    #[test]
    fn loop_rotation_and_reversal() {
        for (group, cutoff) in [(GroupSpec::u1(), 1), (GroupSpec::su2(), 1)] {
            let ks = build_kinematic_space(square(), group, cutoff, None);
            let p = plaquette_loop(&ks);
            let w = wilson_loop(&ks, &p).unwrap();
            for k in 1..4 {
                assert!(sp_dist(&w, &wilson_loop(&ks, &p.rotated(&ks.graph, k).unwrap()).unwrap()) < 1e-12);
            }
            let rev = wilson_loop(&ks, &p.reversed(&ks.graph)).unwrap();
            assert!(sp_dist(&rev, &sp_adjoint(&w)) < 1e-12);
        }
    }

    #[test]
    fn zero_length_loop_is_trace_of_identity() {
        let ks = build_kinematic_space(line(), GroupSpec::su2(), 1, None);
        let p = LoopPath::new(&ks.graph, [0, 0, 0], vec![]).unwrap();
        let w = wilson_loop(&ks, &p).unwrap();
        assert!(sp_dist(&w, &sp_scale(&sp_identity(ks.total_dim), c(2.0, 0.0))) < 1e-15);
        let open = LoopPath::new(&ks.graph, [0, 0, 0], vec![(0, 1)]).unwrap();
        assert!(wilson_loop(&ks, &open).is_err());
    }

    #[test]
    fn wilson_loops_are_gauge_invariant() {
        for (group, cutoff) in [(GroupSpec::u1(), 1), (GroupSpec::su2(), 1), (GroupSpec::zn(3).unwrap(), 0)] {
            let ks = build_kinematic_space(square(), group, cutoff, None);
            let w = wilson_loop(&ks, &plaquette_loop(&ks)).unwrap();
            let all: Vec<usize> = (0..4).collect();
            for gamma in sample_gauge_transformations(&ks, &all, 10, 7) {
                let u = full_gauge_unitary(&ks, &gamma);
                assert!(sp_norm(&sp_commutator(&u, &w)) < 1e-11, "{group:?}");
            }
        }
    }

    #[test]
    fn fermion_lines() {
        let ks = build_kinematic_space(line(), GroupSpec::su2(), 1, Some(MatterSpec::new(1, &GroupSpec::su2())));
        let fock = ks.fock().unwrap();
        // Zero-length path: local colour density.
        let local = fermion_line(&ks, &LoopPath::new(&ks.graph, [1, 0, 0], vec![]).unwrap(), 0, 0).unwrap();
        let density = fock.site_bilinear(1, &Mat::identity(2, 2));
        assert!(sp_dist(&local, &ks.embed_matter(&density).unwrap()) < 1e-14);
        let path = LoopPath::new(&ks.graph, [0, 0, 0], vec![(0, 1)]).unwrap();
        let q = fermion_line(&ks, &path, 0, 0).unwrap();
        assert!(sp_norm(&q) > 1.0);
        let back = fermion_line(&ks, &path.reversed(&ks.graph), 0, 0).unwrap();
        assert!(sp_dist(&sp_adjoint(&q), &back) < 1e-12);
        let all = [0, 1];
        for gamma in sample_gauge_transformations(&ks, &all, 10, 8) {
            let u = full_gauge_unitary(&ks, &gamma);
            assert!(sp_norm(&sp_commutator(&u, &q)) < 1e-11);
            assert!(sp_norm(&sp_commutator(&u, &local)) < 1e-11);
        }
        let bare = build_kinematic_space(line(), GroupSpec::su2(), 1, None);
        assert_eq!(fermion_line(&bare, &path, 0, 0), Err(LgkError::MatterAbsent));
        assert!(fermion_line(&ks, &path, 1, 0).is_err());
    }

    #[test]
    fn u1_line_is_gauge_invariant() {
        let ks = build_kinematic_space(line(), GroupSpec::u1(), 2, Some(MatterSpec::new(1, &GroupSpec::u1())));
        let path = LoopPath::new(&ks.graph, [1, 0, 0], vec![(0, -1)]).unwrap();
        let q = fermion_line(&ks, &path, 0, 0).unwrap();
        for gamma in sample_gauge_transformations(&ks, &[0, 1], 20, 9) {
            assert!(sp_norm(&sp_commutator(&full_gauge_unitary(&ks, &gamma), &q)) < 1e-11);
        }
    }

    #[test]
    fn terms_are_hermitian_and_invariant() {
        let u1 = GroupSpec::u1();
        let ks = build_kinematic_space(square(), u1, 1, Some(MatterSpec::new(1, &u1)));
        let kernel = HoppingKernel::SingleComponent;
        let terms = [
            electric_term(&ks, 0.7),
            magnetic_term(&ks, 1.3, 0.7).unwrap(),
            mass_term(&ks, 0.4, 0.7, kernel).unwrap(),
            hopping_term(&ks, 0.7, kernel).unwrap(),
        ];
        let all: Vec<usize> = (0..4).collect();
        let gammas = sample_gauge_transformations(&ks, &all, 5, 10);
        let p = gauss_projector(&ks, &ks.graph.region, ProjectorRoute::Exact).unwrap();
        for t in &terms {
            assert!(sp_norm(t) > 0.1);
            assert!(hermiticity_residual(t) < 1e-12);
            for gamma in &gammas {
                assert!(sp_norm(&sp_commutator(&full_gauge_unitary(&ks, gamma), t)) < 1e-10);
            }
            assert!(sp_dist(&sp_mul(&p, &sp_mul(t, &p)), &sp_mul(t, &p)) < 1e-10);
        }
        let h = hamiltonian(&ks, &Couplings::new(0.7, 1.3, 0.4, kernel).unwrap()).unwrap();
        let sum = terms.iter().fold(sp_zeros(ks.total_dim), |acc, t| sp_add(&acc, t));
        assert!(sp_dist(&h, &sum) < 1e-12);
        assert!(mass_term(&ks, 1.0, 1.0, HoppingKernel::NaiveDirac).is_err());
    }

    #[test]
    fn naive_dirac_kernel() {
        let k = HoppingKernel::NaiveDirac;
        let g0 = k.gamma0();
        let id = Mat::identity(4, 4);
        for i in 0..3 {
            let gi = k.gamma(i);
            // Clifford relations {γ_μ, γ_ν} = 2 η_μν with signature (+,−,−,−).
            assert!((&g0 * &gi + &gi * &g0).norm() < 1e-15);
            assert!((&gi * &gi + &id).norm() < 1e-15);
            for j in 0..3 {
                if i != j {
                    let gj = k.gamma(j);
                    assert!((&gi * &gj + &gj * &gi).norm() < 1e-15);
                }
            }
        }
        let u1 = GroupSpec::u1();
        let ks = build_kinematic_space(line(), u1, 1, Some(MatterSpec::new(4, &u1)));
        let h = hamiltonian(&ks, &Couplings::new(1.0, 1.0, 0.5, k).unwrap()).unwrap();
        assert!(hermiticity_residual(&h) < 1e-12);
        for gamma in sample_gauge_transformations(&ks, &[0, 1], 5, 11) {
            assert!(sp_norm(&sp_commutator(&full_gauge_unitary(&ks, &gamma), &h)) < 1e-10);
        }
    }

    #[test]
    fn electric_ground_state_and_expectation() {
        let ks = build_kinematic_space(square(), GroupSpec::su2(), 1, None);
        let e = electric_term(&ks, 1.0);
        let vac = ks.vacuum();
        assert!(expectation(&vac, &e).unwrap().norm() < 1e-15);
        let (vals, _) = eigh(&sp_to_dense(&e));
        assert!(vals[0].abs() < 1e-12 && vals[1] > 0.5);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(12);
        let v = crate::linalg::random_vector(&mut rng, ks.total_dim);
        let w = crate::linalg::random_vector(&mut rng, ks.total_dim);
        assert!(expectation(&v, &e).unwrap().im.abs() < 1e-12);
        // Linearity in the operator.
        let m = magnetic_term(&ks, 1.0, 1.0).unwrap();
        let lhs = expectation(&w, &sp_add(&e, &sp_scale(&m, c(0.0, 2.0)))).unwrap();
        let rhs = expectation(&w, &e).unwrap() + c(0.0, 2.0) * expectation(&w, &m).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);
        assert!(expectation(&Vector::zeros(3), &e).is_err());
    }

    #[test]
    fn couplings_validation() {
        assert!(Couplings::new(1.0, 1.0, 0.0, HoppingKernel::SingleComponent).is_ok());
        assert!(Couplings::new(0.0, 1.0, 0.0, HoppingKernel::SingleComponent).is_err());
        assert!(Couplings::new(1.0, -1.0, 0.0, HoppingKernel::SingleComponent).is_err());
        assert_eq!(HoppingKernel::from_name("naive-dirac").unwrap(), HoppingKernel::NaiveDirac);
        assert!(HoppingKernel::from_name("wilson").is_err());
    }
}
