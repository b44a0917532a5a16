//! Antisymmetric Fock space over the lattice matter modes, realized with a
//! Jordan–Wigner transformation.
//!
//! Modes are ordered by site (lattice order), then internal index
//! `u·k + b` with `u` the non-colour component and `b` the colour index.
//! Mode `p` occupies bit `M-1-p` of the basis-state index, so the Fock space
//! factorizes as a tensor product over sites with the first site most
//! significant. `a_p = Z_0 ⋯ Z_{p-1} σ⁻_p`.

use crate::error::{LgkError, Result};
use crate::gauge_action::GaugeTransformation;
use crate::gauge_group::GroupSpec;
use crate::lattice::Site;
use crate::linalg::{sp_adjoint, sp_from_dense, sp_from_triplets, sp_kron_all, sp_scale, sp_zeros, Mat, SpMat, Vector, C64, ONE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatterSpec {
    /// Number of non-colour components per site.
    pub w: usize,
    /// Colour dimension (defining dimension of the gauge group).
    pub k: usize,
}

impl MatterSpec {
    pub fn new(w: usize, group: &GroupSpec) -> Self {
        MatterSpec { w, k: group.defining_dim() }
    }

    pub fn internal_dim(&self) -> usize {
        self.w * self.k
    }
}

#[derive(Debug, Clone)]
pub struct FockSpace {
    pub matter: MatterSpec,
    pub sites: Vec<Site>,
    /// (site position, internal index) per mode.
    pub modes: Vec<(usize, usize)>,
    pub dim: usize,
}

pub fn build_fock_space(sites: &[Site], matter: MatterSpec) -> FockSpace {
    let n = matter.internal_dim();
    let modes: Vec<(usize, usize)> = (0..sites.len()).flat_map(|x| (0..n).map(move |i| (x, i))).collect();
    let dim = 1usize << modes.len();
    FockSpace { matter, sites: sites.to_vec(), modes, dim }
}

impl FockSpace {
    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn mode_index(&self, site: usize, internal: usize) -> usize {
        site * self.matter.internal_dim() + internal
    }

    pub fn occupied(&self, state: usize, p: usize) -> bool {
        (state >> (self.num_modes() - 1 - p)) & 1 == 1
    }

    /// Jordan–Wigner annihilator of mode `p`.
    pub fn mode_annihilator(&self, p: usize) -> SpMat {
        let m = self.num_modes();
        let bit = 1usize << (m - 1 - p);
        let trips = (0..self.dim).filter(|s| s & bit != 0).map(|s| {
            let below = (0..p).filter(|&q| self.occupied(s, q)).count();
            let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
            (s ^ bit, s, C64::new(sign, 0.0))
        });
        sp_from_triplets(self.dim, self.dim, trips)
    }

    pub fn mode_creator(&self, p: usize) -> SpMat {
        sp_adjoint(&self.mode_annihilator(p))
    }

    pub fn vacuum(&self) -> Vector {
        let mut v = Vector::zeros(self.dim);
        v[0] = ONE;
        v
    }

    pub fn number_operator(&self) -> SpMat {
        let trips = (0..self.dim).map(|s| (s, s, C64::new(s.count_ones() as f64, 0.0)));
        sp_from_triplets(self.dim, self.dim, trips)
    }

    /// `dΓ(h) = Σ_pq h_pq a*_p a_q` for a one-particle operator on the modes
    /// of a single site.
    pub fn site_bilinear(&self, site: usize, h: &Mat) -> SpMat {
        let n = self.matter.internal_dim();
        let mut acc = sp_zeros(self.dim);
        for p in 0..n {
            for q in 0..n {
                let v = h[(p, q)];
                if v.norm() == 0.0 {
                    continue;
                }
                let term = &self.mode_creator(self.mode_index(site, p)) * &self.mode_annihilator(self.mode_index(site, q));
                acc = &acc + &sp_scale(&term, v);
            }
        }
        acc
    }
}

pub fn check_vector(space: &FockSpace, f: &Vector) -> Result<()> {
    if f.len() != space.num_modes() {
        return Err(LgkError::DimensionMismatch { expected: space.num_modes(), got: f.len() });
    }
    Ok(())
}

/// `a(f) = Σ_m conj(f_m) a_m`, antilinear in `f`.
pub fn annihilator(space: &FockSpace, f: &Vector) -> Result<SpMat> {
    check_vector(space, f)?;
    let mut acc = sp_zeros(space.dim);
    for (p, fp) in f.iter().enumerate() {
        if fp.norm() > 0.0 {
            acc = &acc + &sp_scale(&space.mode_annihilator(p), fp.conj());
        }
    }
    Ok(acc)
}

pub fn creator(space: &FockSpace, f: &Vector) -> Result<SpMat> {
    Ok(sp_adjoint(&annihilator(space, f)?))
}

/// Second quantization `Γ(u)` of a unitary on the `n` local modes of one
/// site: `⟨t|Γ(u)|s⟩ = det u[t_occ, s_occ]` for equal particle numbers.
pub fn second_quantize_local(u: &Mat) -> Mat {
    let n = u.nrows();
    let dim = 1usize << n;
    let occ = |s: usize| -> Vec<usize> { (0..n).filter(|&t| (s >> (n - 1 - t)) & 1 == 1).collect() };
    let mut out = Mat::zeros(dim, dim);
    for s in 0..dim {
        let so = occ(s);
        for t in 0..dim {
            let to = occ(t);
            if to.len() != so.len() {
                continue;
            }
            let sub = Mat::from_fn(to.len(), so.len(), |a, b| u[(to[a], so[b])]);
            out[(t, s)] = if to.is_empty() { ONE } else { sub.determinant() };
        }
    }
    out
}

/// One-particle action of `γ(x)` on the internal space of a site:
/// identity on the non-colour components, defining rep on colour.
pub fn one_particle_site_unitary(matter: &MatterSpec, g: &crate::gauge_group::GroupElement) -> Mat {
    Mat::identity(matter.w, matter.w).kronecker(&g.defining_rep())
}

/// `U^F_γ`, the second quantization of `f ↦ γ·f`.
pub fn matter_gauge_unitary(space: &FockSpace, gamma: &GaugeTransformation) -> SpMat {
    let factors: Vec<SpMat> = (0..space.sites.len())
        .map(|x| {
            let u = one_particle_site_unitary(&space.matter, gamma.at(x));
            sp_from_dense(&second_quantize_local(&u), 1e-15)
        })
        .collect();
    sp_kron_all(&factors)
}

/// Matter part of the Gauss generator at site `x` along `Y_r`:
/// `G^F = -Σ_{u,b,c} (Y_r)_bc a*_{x,(u,b)} a_{x,(u,c)}`, so that
/// `exp(-i t G^F) = U^F` of `exp(i t Y_r)` at `x`.
pub fn matter_gauss_generator(space: &FockSpace, group: &GroupSpec, x: usize, r: usize) -> Result<SpMat> {
    group.check_lie_index(r)?;
    if x >= space.sites.len() {
        return Err(LgkError::DimensionMismatch { expected: space.sites.len(), got: x + 1 });
    }
    let y = &group.lie_basis()[r];
    let h = Mat::identity(space.matter.w, space.matter.w).kronecker(y);
    Ok(sp_scale(&space.site_bilinear(x, &h), -ONE))
}
