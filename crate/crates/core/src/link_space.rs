//! Truncated electric-basis model of L²(G) for a single link.
//!
//! Basis vectors are labeled `(π, m, n)` and represent the normalized
//! matrix-element functions `√dπ · π_mn(g)`, ordered by irrep (as returned
//! by [`irreps_up_to`]), then `m`, then `n`.
//!
//! Left translation `(U_g ψ)(h) = ψ(g⁻¹h)` acts on the `m` index by
//! `conj(π(g))`, right translation `(V_s ψ)(h) = ψ(hs)` acts on the `n` index
//! by `π(s)`. Electric generators follow `U(exp(i t Y_r)) = exp(-i t P^L_r)`
//! and `V(exp(i t Y_r)) = exp(-i t P^R_r)`.

use crate::error::{LgkError, Result};
use crate::gauge_group::{
    casimir_value, clebsch_gordan, generator_rep, irrep_matrix, irreps_up_to, GroupElement, GroupKind, GroupSpec, Irrep,
};
use crate::linalg::{c, Mat, C64, ONE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkLabel {
    pub irrep: Irrep,
    pub m: usize,
    pub n: usize,
}

#[derive(Debug, Clone)]
pub struct TruncatedLinkSpace {
    pub spec: GroupSpec,
    pub cutoff: u32,
    pub irreps: Vec<Irrep>,
    pub basis: Vec<LinkLabel>,
    pub dim: usize,
    pub vacuum_index: usize,
    offsets: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkTag {
    LeftTranslation,
    RightTranslation,
    GaugeUnitary,
    Multiplication(usize, usize),
    ElectricLeft(usize),
    ElectricRight(usize),
    ElectricField(usize, usize),
    Casimir,
    Projection,
    Generic,
}

#[derive(Debug, Clone)]
pub struct LinkOperator {
    pub matrix: Mat,
    pub tag: LinkTag,
}

pub fn build_link_space(spec: GroupSpec, cutoff: u32) -> TruncatedLinkSpace {
    let irreps = irreps_up_to(&spec, cutoff);
    let mut basis = Vec::new();
    let mut offsets = Vec::new();
    for pi in &irreps {
        offsets.push(basis.len());
        for m in 0..pi.dim {
            for n in 0..pi.dim {
                basis.push(LinkLabel { irrep: *pi, m, n });
            }
        }
    }
    let vacuum_index = basis.iter().position(|l| l.irrep == Irrep::trivial()).expect("trivial irrep present");
    let dim = basis.len();
    TruncatedLinkSpace { spec, cutoff, irreps, basis, dim, vacuum_index, offsets }
}

impl TruncatedLinkSpace {
    pub fn index(&self, irrep_pos: usize, m: usize, n: usize) -> usize {
        self.offsets[irrep_pos] + m * self.irreps[irrep_pos].dim + n
    }

    fn irrep_position(&self, label: i64) -> Option<usize> {
        self.irreps.iter().position(|p| p.label == label)
    }

    pub fn vacuum(&self) -> crate::linalg::Vector {
        let mut v = crate::linalg::Vector::zeros(self.dim);
        v[self.vacuum_index] = ONE;
        v
    }

    /// Block-diagonal operator acting on the `m` index of each irrep block.
    fn on_left_index<F: Fn(&Irrep) -> Mat>(&self, f: F) -> Mat {
        let mut out = Mat::zeros(self.dim, self.dim);
        for (p, pi) in self.irreps.iter().enumerate() {
            let a = f(pi);
            for k in 0..pi.dim {
                for m in 0..pi.dim {
                    for n in 0..pi.dim {
                        out[(self.index(p, k, n), self.index(p, m, n))] = a[(k, m)];
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal operator acting on the `n` index of each irrep block.
    fn on_right_index<F: Fn(&Irrep) -> Mat>(&self, f: F) -> Mat {
        let mut out = Mat::zeros(self.dim, self.dim);
        for (p, pi) in self.irreps.iter().enumerate() {
            let a = f(pi);
            for m in 0..pi.dim {
                for k in 0..pi.dim {
                    for n in 0..pi.dim {
                        out[(self.index(p, m, k), self.index(p, m, n))] = a[(k, n)];
                    }
                }
            }
        }
        out
    }

    fn block_projection<F: Fn(&Irrep) -> bool>(&self, keep: F) -> Mat {
        let mut out = Mat::zeros(self.dim, self.dim);
        for (i, l) in self.basis.iter().enumerate() {
            if keep(&l.irrep) {
                out[(i, i)] = ONE;
            }
        }
        out
    }

    /// Irrep "size" compared against the cutoff: |q| for U(1), 2j for SU(2).
    fn level(&self, pi: &Irrep) -> u32 {
        match self.spec.kind {
            GroupKind::ZN(_) => 0,
            GroupKind::U1 => pi.label.unsigned_abs() as u32,
            GroupKind::SU2 => pi.label as u32,
        }
    }
}

pub fn left_translation(space: &TruncatedLinkSpace, g: &GroupElement) -> LinkOperator {
    let m = space.on_left_index(|pi| irrep_matrix(&space.spec, pi, g).map(|z| z.conj()));
    LinkOperator { matrix: m, tag: LinkTag::LeftTranslation }
}

pub fn right_translation(space: &TruncatedLinkSpace, g: &GroupElement) -> LinkOperator {
    let m = space.on_right_index(|pi| irrep_matrix(&space.spec, pi, g));
    LinkOperator { matrix: m, tag: LinkTag::RightTranslation }
}

/// `W_(h,s) ψ(g) = ψ(h⁻¹ g s)`.
pub fn link_gauge_unitary(space: &TruncatedLinkSpace, h: &GroupElement, s: &GroupElement) -> LinkOperator {
    let m = left_translation(space, h).matrix * right_translation(space, s).matrix;
    LinkOperator { matrix: m, tag: LinkTag::GaugeUnitary }
}

/// Compressed multiplication operator by `Φ_ij(g) = (e_i, g e_j)`.
pub fn multiplication_op(space: &TruncatedLinkSpace, i: usize, j: usize) -> Result<LinkOperator> {
    let k = space.spec.defining_dim();
    if i >= k || j >= k {
        return Err(LgkError::DimensionMismatch { expected: k, got: i.max(j) + 1 });
    }
    let mut out = Mat::zeros(space.dim, space.dim);
    match space.spec.kind {
        GroupKind::ZN(n) => {
            for q in 0..n as i64 {
                let src = space.irrep_position(q).unwrap();
                let dst = space.irrep_position((q + 1) % n as i64).unwrap();
                out[(space.index(dst, 0, 0), space.index(src, 0, 0))] = ONE;
            }
        }
        GroupKind::U1 => {
            for (src, pi) in space.irreps.iter().enumerate() {
                if let Some(dst) = space.irrep_position(pi.label + 1) {
                    out[(space.index(dst, 0, 0), space.index(src, 0, 0))] = ONE;
                }
            }
        }
        GroupKind::SU2 => {
            // Φ_ij · √d_j π^j_mn = Σ_J √(d_j/d_J) ⟨½ i; j m|J M⟩⟨½ j; j n|J N⟩ √d_J π^J_MN
            for (src, pi) in space.irreps.iter().enumerate() {
                let two_j = pi.label as u32;
                for two_big in [two_j + 1, two_j.wrapping_sub(1)] {
                    if two_big > space.cutoff {
                        continue;
                    }
                    let dst = space.irrep_position(two_big as i64).unwrap();
                    let cg = clebsch_gordan(1, two_j, two_big);
                    let norm = ((two_j + 1) as f64 / (two_big + 1) as f64).sqrt();
                    for m in 0..pi.dim {
                        for n in 0..pi.dim {
                            for big_m in 0..=two_big as usize {
                                for big_n in 0..=two_big as usize {
                                    let v = norm * cg[i][m][big_m] * cg[j][n][big_n];
                                    if v != 0.0 {
                                        out[(space.index(dst, big_m, big_n), space.index(src, m, n))] += c(v, 0.0);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(LinkOperator { matrix: out, tag: LinkTag::Multiplication(i, j) })
}

/// `P^L_r`, with `left_translation(exp(i t Y_r)) = exp(-i t P^L_r)`.
pub fn electric_generator_left(space: &TruncatedLinkSpace, r: usize) -> Result<LinkOperator> {
    space.spec.check_lie_index(r)?;
    let m = space.on_left_index(|pi| generator_rep(&space.spec, pi, r).unwrap().map(|z| z.conj()));
    Ok(LinkOperator { matrix: m, tag: LinkTag::ElectricLeft(r) })
}

/// `P^R_r`, with `right_translation(exp(i t Y_r)) = exp(-i t P^R_r)`.
pub fn electric_generator_right(space: &TruncatedLinkSpace, r: usize) -> Result<LinkOperator> {
    space.spec.check_lie_index(r)?;
    let m = space.on_right_index(|pi| -generator_rep(&space.spec, pi, r).unwrap());
    Ok(LinkOperator { matrix: m, tag: LinkTag::ElectricRight(r) })
}

/// `E_ij = Σ_r (Y_r)_ij P^L_r`.
pub fn electric_field(space: &TruncatedLinkSpace, i: usize, j: usize) -> Result<LinkOperator> {
    let ys = space.spec.lie_basis();
    if ys.is_empty() {
        return Err(LgkError::NoLieAlgebra(space.spec.name()));
    }
    let k = space.spec.defining_dim();
    if i >= k || j >= k {
        return Err(LgkError::DimensionMismatch { expected: k, got: i.max(j) + 1 });
    }
    let mut m = Mat::zeros(space.dim, space.dim);
    for (r, y) in ys.iter().enumerate() {
        m += electric_generator_left(space, r)?.matrix * y[(i, j)];
    }
    Ok(LinkOperator { matrix: m, tag: LinkTag::ElectricField(i, j) })
}

/// `Σ_ij E_ij E_ji`, block scalar equal to the quadratic Casimir. Zero for
/// Z_N, which has no electric generators.
pub fn casimir(space: &TruncatedLinkSpace) -> LinkOperator {
    let mut m = Mat::zeros(space.dim, space.dim);
    for (i, l) in space.basis.iter().enumerate() {
        m[(i, i)] = c(casimir_value(&space.spec, &l.irrep), 0.0);
    }
    LinkOperator { matrix: m, tag: LinkTag::Casimir }
}

/// Casimir assembled from the electric fields; used to cross-check
/// [`casimir`].
pub fn casimir_from_fields(space: &TruncatedLinkSpace) -> Result<Mat> {
    let k = space.spec.defining_dim();
    let mut m = Mat::zeros(space.dim, space.dim);
    for i in 0..k {
        for j in 0..k {
            m += electric_field(space, i, j)?.matrix * electric_field(space, j, i)?.matrix;
        }
    }
    Ok(m)
}

pub fn truncation_projection(space: &TruncatedLinkSpace, sub_cutoff: u32) -> Result<LinkOperator> {
    if sub_cutoff > space.cutoff {
        return Err(LgkError::InvalidCutoff { sub: sub_cutoff, cutoff: space.cutoff });
    }
    let m = space.block_projection(|pi| space.level(pi) <= sub_cutoff);
    Ok(LinkOperator { matrix: m, tag: LinkTag::Projection })
}

/// Projection onto irreps from which every multiplication operator stays
/// inside the cutoff. Identity for Z_N.
pub fn interior_projection(space: &TruncatedLinkSpace) -> LinkOperator {
    let m = match space.spec.kind {
        GroupKind::ZN(_) => Mat::identity(space.dim, space.dim),
        _ => space.block_projection(|pi| space.level(pi) < space.cutoff),
    };
    LinkOperator { matrix: m, tag: LinkTag::Projection }
}

/// Right-hand side of the covariance identity:
/// `Σ_{n,m} [h⁻¹]_in T_{Φ_nm} [s]_mj`.
pub fn transformed_multiplication(space: &TruncatedLinkSpace, h: &GroupElement, s: &GroupElement, i: usize, j: usize) -> Result<Mat> {
    let k = space.spec.defining_dim();
    let hinv = h.inverse().defining_rep();
    let sm = s.defining_rep();
    let mut out = Mat::zeros(space.dim, space.dim);
    for n in 0..k {
        for m in 0..k {
            let coef: C64 = hinv[(i, n)] * sm[(m, j)];
            out += multiplication_op(space, n, m)?.matrix * coef;
        }
    }
    Ok(out)
}
