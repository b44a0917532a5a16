//! Operator spans graded by a weight function on basis states.
//!
//! Every basis state `a` of the ambient space carries an integer weight
//! vector `w(a)` (site charges, taken mod N for Z_N). The operator space
//! splits into blocks labelled by `w(a) − w(b)` for the matrix unit `|a⟩⟨b|`;
//! all algebras and maps used by the constraint engine respect this split,
//! so spans are stored as an orthonormal basis per block and every
//! linear-algebra step runs block by block. A constant weight gives a single
//! block, i.e. plain dense span arithmetic.

use crate::error::{LgkError, Result};
use crate::gauge_action::KinematicSpace;
use crate::linalg::{
    matmul, null_basis, pivot_scale, project_out_columns, random_vector, range_basis_abs, sp_from_triplets, Mat, SpMat, Vector, ZERO,
};
use rand::Rng;
use std::collections::BTreeMap;

/// Relative rank threshold (on pivoted-QR diagonals) for spans, kernels and
/// intersections.
pub const SPAN_REL_TOL: f64 = 1e-9;
/// Largest ambient dimension accepted.
pub const MAX_AMBIENT: usize = 128;
/// Largest operator-space dimension of a single weight block.
pub const MAX_BLOCK: usize = 400;

/// Ambient space `ℂ^d` with its weight grading.
#[derive(Debug, Clone)]
pub struct Ambient {
    dim: usize,
    keys: Vec<Vec<i64>>,
    pairs: Vec<Vec<(usize, usize)>>,
    /// `(block, position)` of the matrix unit `|a⟩⟨b|`, indexed by `a·d + b`.
    coord: Vec<(usize, usize)>,
    adjoint_block: Vec<usize>,
}

impl Ambient {
    /// Graded ambient space; `modulus > 0` reduces weight differences mod N.
    pub fn new(weights: &[Vec<i64>], modulus: i64) -> Result<Self> {
        let dim = weights.len();
        if dim > MAX_AMBIENT {
            return Err(LgkError::CapExceeded(format!("ambient dimension {dim} exceeds {MAX_AMBIENT}")));
        }
        let key = |a: usize, b: usize| -> Vec<i64> {
            weights[a].iter().zip(&weights[b]).map(|(x, y)| if modulus > 0 { (x - y).rem_euclid(modulus) } else { x - y }).collect()
        };
        let mut map: BTreeMap<Vec<i64>, Vec<(usize, usize)>> = BTreeMap::new();
        for a in 0..dim {
            for b in 0..dim {
                map.entry(key(a, b)).or_default().push((a, b));
            }
        }
        let (keys, pairs): (Vec<_>, Vec<_>) = map.into_iter().unzip();
        if let Some(big) = pairs.iter().map(Vec::len).max() {
            if big > MAX_BLOCK {
                return Err(LgkError::CapExceeded(format!("operator block of dimension {big} exceeds {MAX_BLOCK}")));
            }
        }
        let mut coord = vec![(0, 0); dim * dim];
        for (blk, ps) in pairs.iter().enumerate() {
            for (pos, &(a, b)) in ps.iter().enumerate() {
                coord[a * dim + b] = (blk, pos);
            }
        }
        let adjoint_block = pairs.iter().map(|ps| coord[ps[0].1 * dim + ps[0].0].0).collect();
        Ok(Ambient { dim, keys, pairs, coord, adjoint_block })
    }

    /// Single block: ungraded span arithmetic.
    pub fn trivial(dim: usize) -> Result<Self> {
        Self::new(&vec![Vec::new(); dim], 0)
    }

    /// Site-charge grading for abelian groups, trivial grading for SU(2).
    pub fn for_space(space: &KinematicSpace) -> Result<Self> {
        if space.total_dim > MAX_AMBIENT {
            return Err(LgkError::CapExceeded(format!("ambient dimension {} exceeds {MAX_AMBIENT}", space.total_dim)));
        }
        match space.site_charges() {
            Some((w, m)) => Self::new(&w, m),
            None => Self::trivial(space.total_dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_blocks(&self) -> usize {
        self.pairs.len()
    }

    pub fn block_key(&self, blk: usize) -> &[i64] {
        &self.keys[blk]
    }

    pub fn block_size(&self, blk: usize) -> usize {
        self.pairs[blk].len()
    }

    /// Homogeneous components of an operator as `(block, coordinates)`.
    pub fn split(&self, m: &SpMat) -> Vec<(usize, Vector)> {
        let mut parts: BTreeMap<usize, Vector> = BTreeMap::new();
        for (a, b, v) in m.triplet_iter() {
            if *v == ZERO {
                continue;
            }
            let (blk, pos) = self.coord[a * self.dim + b];
            parts.entry(blk).or_insert_with(|| Vector::zeros(self.pairs[blk].len()))[pos] += *v;
        }
        parts.into_iter().collect()
    }

    /// Operator with the given coordinates in one block.
    pub fn assemble(&self, blk: usize, coords: &Vector) -> SpMat {
        let trips = self.pairs[blk].iter().zip(coords.iter()).map(|(&(a, b), v)| (a, b, *v));
        sp_from_triplets(self.dim, self.dim, trips)
    }
}

/// Orthonormal basis of the null space of `m`, rank threshold
/// `SPAN_REL_TOL · max(1, largest column norm)`.
fn kernel(m: &Mat) -> Mat {
    let n = m.ncols();
    if m.nrows() == 0 {
        return Mat::identity(n, n);
    }
    let tol = SPAN_REL_TOL * pivot_scale(m).max(1.0);
    null_basis(m, tol)
}

/// A linear span of operators, homogeneous in the weight grading.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedSpan {
    blocks: Vec<Mat>,
}

/// Outcome of comparing two spans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanComparison {
    pub dim_left: usize,
    pub dim_right: usize,
    /// Largest distance of a unit basis vector of either span to the other.
    pub residual: f64,
}

impl SpanComparison {
    pub fn equal(&self, tol: f64) -> bool {
        self.dim_left == self.dim_right && self.residual < tol
    }
}

impl GradedSpan {
    pub fn zero(amb: &Ambient) -> Self {
        GradedSpan { blocks: (0..amb.num_blocks()).map(|b| Mat::zeros(amb.block_size(b), 0)).collect() }
    }

    /// Every operator on the ambient space.
    pub fn full(amb: &Ambient) -> Self {
        GradedSpan { blocks: (0..amb.num_blocks()).map(|b| Mat::identity(amb.block_size(b), amb.block_size(b))).collect() }
    }

    /// Span of per-block coordinate columns, with the threshold relative to
    /// the largest column norm over all blocks.
    pub fn from_columns(cols: Vec<Mat>) -> Self {
        let scale = cols.iter().map(pivot_scale).fold(0.0, f64::max);
        let tol = SPAN_REL_TOL * scale;
        GradedSpan { blocks: cols.iter().map(|m| if scale == 0.0 { Mat::zeros(m.nrows(), 0) } else { range_basis_abs(m, tol) }).collect() }
    }

    /// Span of the homogeneous components of `ops`.
    pub fn from_ops(amb: &Ambient, ops: &[SpMat]) -> Self {
        let mut cols: Vec<Vec<Vector>> = vec![Vec::new(); amb.num_blocks()];
        for op in ops {
            for (blk, v) in amb.split(op) {
                cols[blk].push(v);
            }
        }
        Self::from_columns(cols.iter().enumerate().map(|(b, cs)| stack(amb.block_size(b), cs)).collect())
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.ncols()).sum()
    }

    pub fn block(&self, blk: usize) -> &Mat {
        &self.blocks[blk]
    }

    /// Orthonormal basis as operators.
    pub fn ops(&self, amb: &Ambient) -> Vec<SpMat> {
        let mut out = Vec::with_capacity(self.dim());
        for (blk, b) in self.blocks.iter().enumerate() {
            for j in 0..b.ncols() {
                out.push(amb.assemble(blk, &b.column(j).into_owned()));
            }
        }
        out
    }

    /// Frobenius distance from `op` to the span.
    pub fn op_residual(&self, amb: &Ambient, op: &SpMat) -> f64 {
        let mut sq = 0.0;
        for (blk, v) in amb.split(op) {
            let b = &self.blocks[blk];
            sq += (&v - b * (b.adjoint() * &v)).norm_squared();
        }
        sq.sqrt()
    }

    /// Largest distance from a basis vector of `other` to `self`; zero iff
    /// `other ⊆ self`.
    pub fn containment_residual(&self, other: &GradedSpan) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            if b.ncols() == 0 {
                continue;
            }
            let r = project_out_columns(a, b);
            for j in 0..r.ncols() {
                worst = worst.max(r.column(j).norm());
            }
        }
        worst
    }

    pub fn compare(&self, other: &GradedSpan) -> SpanComparison {
        SpanComparison {
            dim_left: self.dim(),
            dim_right: other.dim(),
            residual: self.containment_residual(other).max(other.containment_residual(self)),
        }
    }

    pub fn intersect(&self, other: &GradedSpan) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(s, t)| {
                if s.ncols() == 0 || t.ncols() == 0 {
                    return Mat::zeros(s.nrows(), 0);
                }
                // Directions of s with no component outside t.
                let w = null_basis(&project_out_columns(t, s), SPAN_REL_TOL);
                matmul(s, &w)
            })
            .collect();
        GradedSpan { blocks }
    }

    pub fn sum(&self, other: &GradedSpan) -> Self {
        let cols = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(s, t)| {
                let mut m = Mat::zeros(s.nrows(), s.ncols() + t.ncols());
                m.view_mut((0, 0), (s.nrows(), s.ncols())).copy_from(s);
                m.view_mut((0, s.ncols()), (t.nrows(), t.ncols())).copy_from(t);
                m
            })
            .collect();
        Self::from_columns(cols)
    }

    /// `{A* : A ∈ self}`.
    pub fn adjoint(&self, amb: &Ambient) -> Self {
        let mut blocks: Vec<Mat> = (0..amb.num_blocks()).map(|b| Mat::zeros(amb.block_size(b), 0)).collect();
        for (blk, b) in self.blocks.iter().enumerate() {
            let target = amb.adjoint_block[blk];
            let mut m = Mat::zeros(amb.block_size(target), b.ncols());
            for (pos, &(x, y)) in amb.pairs[blk].iter().enumerate() {
                let (tb, tpos) = amb.coord[y * amb.dim + x];
                debug_assert_eq!(tb, target);
                for j in 0..b.ncols() {
                    m[(tpos, j)] = b[(pos, j)].conj();
                }
            }
            blocks[target] = m;
        }
        GradedSpan { blocks }
    }

    /// Span of `f(A)` over the basis of `self`.
    pub fn image<F>(&self, amb: &Ambient, f: F) -> Self
    where
        F: Fn(&SpMat) -> Vec<SpMat>,
    {
        let mut cols: Vec<Vec<Vector>> = vec![Vec::new(); amb.num_blocks()];
        for op in self.ops(amb) {
            for out in f(&op) {
                for (blk, v) in amb.split(&out) {
                    cols[blk].push(v);
                }
            }
        }
        Self::from_columns(cols.iter().enumerate().map(|(b, cs)| stack(amb.block_size(b), cs)).collect())
    }

    /// Kernel of a weight-preserving linear map restricted to the span.
    /// The map returns a list of operators; `A` is in the kernel when all of
    /// them vanish.
    pub fn kernel<F>(&self, amb: &Ambient, f: F) -> Result<Self>
    where
        F: Fn(&SpMat) -> Vec<SpMat>,
    {
        self.kernel_impl(amb, f, None)
    }

    /// Kernel of `A ↦ f(A)` modulo `target`: `A` is kept when every output
    /// lies in `target`.
    pub fn kernel_modulo<F>(&self, amb: &Ambient, target: &GradedSpan, f: F) -> Result<Self>
    where
        F: Fn(&SpMat) -> Vec<SpMat>,
    {
        self.kernel_impl(amb, f, Some(target))
    }

    fn kernel_impl<F>(&self, amb: &Ambient, f: F, modulo: Option<&GradedSpan>) -> Result<Self>
    where
        F: Fn(&SpMat) -> Vec<SpMat>,
    {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (blk, basis) in self.blocks.iter().enumerate() {
            let n = amb.block_size(blk);
            if basis.ncols() == 0 {
                blocks.push(Mat::zeros(n, 0));
                continue;
            }
            let mut columns: Vec<Vec<Vector>> = Vec::with_capacity(basis.ncols());
            for j in 0..basis.ncols() {
                let op = amb.assemble(blk, &basis.column(j).into_owned());
                let mut col = Vec::new();
                for out in f(&op) {
                    let mut own = Vector::zeros(n);
                    for (ob, v) in amb.split(&out) {
                        if ob == blk {
                            own = v;
                        } else if v.norm() > SPAN_REL_TOL {
                            return Err(LgkError::NotHomogeneous);
                        }
                    }
                    col.push(own);
                }
                columns.push(col);
            }
            let outs = columns[0].len();
            let mut l = Mat::zeros(outs * n, basis.ncols());
            for (j, col) in columns.iter().enumerate() {
                for (k, v) in col.iter().enumerate() {
                    l.view_mut((k * n, j), (n, 1)).copy_from(v);
                }
            }
            if let Some(target) = modulo {
                for k in 0..outs {
                    let part = l.rows(k * n, n).into_owned();
                    l.rows_mut(k * n, n).copy_from(&project_out_columns(&target.blocks[blk], &part));
                }
            }
            blocks.push(matmul(basis, &kernel(&l)));
        }
        Ok(GradedSpan { blocks })
    }

    /// Random element with independent uniform coefficients on the basis.
    pub fn random_element<R: Rng>(&self, amb: &Ambient, rng: &mut R) -> SpMat {
        let mut trips = Vec::new();
        for (blk, b) in self.blocks.iter().enumerate() {
            if b.ncols() == 0 {
                continue;
            }
            let coeffs = random_vector(rng, b.ncols());
            let v = b * coeffs;
            for (pos, &(x, y)) in amb.pairs[blk].iter().enumerate() {
                trips.push((x, y, v[pos]));
            }
        }
        sp_from_triplets(amb.dim, amb.dim, trips)
    }
}

fn stack(rows: usize, cols: &[Vector]) -> Mat {
    let mut m = Mat::zeros(rows, cols.len());
    for (j, v) in cols.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}
