//! Small linear-algebra helpers shared by the operator builders.
//!
//! Dense matrices are `nalgebra::DMatrix<C64>`; sparse operators on the full
//! kinematic space are `nalgebra_sparse::CsrMatrix<C64>`. Norms used for
//! residuals are Frobenius norms, which bound the operator norm from above.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num_complex::Complex64;
use rand::Rng;

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;
pub type Vector = DVector<C64>;
pub type SpMat = CsrMatrix<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Sparse matrix from (row, col, value) triplets; duplicates are summed.
pub fn sp_from_triplets<It>(nrows: usize, ncols: usize, triplets: It) -> SpMat
where
    It: IntoIterator<Item = (usize, usize, C64)>,
{
    let mut coo = CooMatrix::new(nrows, ncols);
    for (i, j, v) in triplets {
        if v != ZERO {
            coo.push(i, j, v);
        }
    }
    CsrMatrix::from(&coo)
}

pub fn sp_identity(n: usize) -> SpMat {
    CsrMatrix::identity(n)
}

pub fn sp_zeros(n: usize) -> SpMat {
    CsrMatrix::zeros(n, n)
}

/// Sparse copy of a dense matrix, dropping entries with modulus `<= tol`.
pub fn sp_from_dense(m: &Mat, tol: f64) -> SpMat {
    let mut trips = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v.norm() > tol {
                trips.push((i, j, v));
            }
        }
    }
    sp_from_triplets(m.nrows(), m.ncols(), trips)
}

pub fn sp_to_dense(m: &SpMat) -> Mat {
    let mut d = Mat::zeros(m.nrows(), m.ncols());
    for (i, j, v) in m.triplet_iter() {
        d[(i, j)] += *v;
    }
    d
}

pub fn sp_diag(d: &[C64]) -> SpMat {
    sp_from_triplets(d.len(), d.len(), d.iter().enumerate().map(|(i, v)| (i, i, *v)))
}

pub fn sp_adjoint(m: &SpMat) -> SpMat {
    let mut t = m.transpose();
    for v in t.values_mut() {
        *v = v.conj();
    }
    t
}

pub fn sp_scale(m: &SpMat, s: C64) -> SpMat {
    let mut out = m.clone();
    for v in out.values_mut() {
        *v *= s;
    }
    out
}

pub fn sp_add(a: &SpMat, b: &SpMat) -> SpMat {
    a + b
}

pub fn sp_sub(a: &SpMat, b: &SpMat) -> SpMat {
    a - b
}

pub fn sp_mul(a: &SpMat, b: &SpMat) -> SpMat {
    a * b
}

/// Drop stored entries with modulus `<= tol`.
pub fn sp_prune(m: &SpMat, tol: f64) -> SpMat {
    m.filter(|_, _, v| v.norm() > tol)
}

pub fn sp_commutator(a: &SpMat, b: &SpMat) -> SpMat {
    &(a * b) - &(b * a)
}

pub fn sp_anticommutator(a: &SpMat, b: &SpMat) -> SpMat {
    &(a * b) + &(b * a)
}

pub fn sp_norm(m: &SpMat) -> f64 {
    m.values().iter().fold(0.0, |acc, v| acc + v.norm_sqr()).sqrt()
}

pub fn sp_trace(m: &SpMat) -> C64 {
    m.triplet_iter().filter(|(i, j, _)| i == j).map(|(_, _, v)| *v).sum()
}

/// Frobenius distance between two sparse matrices.
pub fn sp_dist(a: &SpMat, b: &SpMat) -> f64 {
    sp_norm(&(a - b))
}

/// Kronecker product `a ⊗ b`.
pub fn sp_kron(a: &SpMat, b: &SpMat) -> SpMat {
    let (br, bc) = (b.nrows(), b.ncols());
    let mut trips = Vec::with_capacity(a.nnz() * b.nnz());
    for (i, j, x) in a.triplet_iter() {
        for (k, l, y) in b.triplet_iter() {
            trips.push((i * br + k, j * bc + l, *x * *y));
        }
    }
    sp_from_triplets(a.nrows() * br, a.ncols() * bc, trips)
}

/// Embed `op` acting on tensor factor `k` of a product with the given factor
/// dimensions (first factor most significant).
pub fn sp_embed(dims: &[usize], k: usize, op: &SpMat) -> SpMat {
    let left: usize = dims[..k].iter().product();
    let right: usize = dims[k + 1..].iter().product();
    let mut trips = Vec::with_capacity(left * right * op.nnz());
    let dk = dims[k];
    for l in 0..left {
        for (i, j, v) in op.triplet_iter() {
            for r in 0..right {
                trips.push(((l * dk + i) * right + r, (l * dk + j) * right + r, *v));
            }
        }
    }
    let n = left * dk * right;
    sp_from_triplets(n, n, trips)
}

/// Kronecker product of a list of factors, first factor most significant.
pub fn sp_kron_all(factors: &[SpMat]) -> SpMat {
    let mut acc = sp_identity(1);
    for f in factors {
        acc = sp_kron(&acc, f);
    }
    acc
}

pub fn sp_matvec(m: &SpMat, v: &Vector) -> Vector {
    let mut out = Vector::zeros(m.nrows());
    for (i, row) in m.row_iter().enumerate() {
        let mut acc = ZERO;
        for (j, x) in row.col_indices().iter().zip(row.values()) {
            acc += *x * v[*j];
        }
        out[i] = acc;
    }
    out
}

pub fn dense_norm(m: &Mat) -> f64 {
    m.norm()
}

pub fn hermiticity_residual(m: &SpMat) -> f64 {
    sp_dist(m, &sp_adjoint(m))
}

pub fn unitarity_residual(m: &Mat) -> f64 {
    let n = m.nrows();
    (m.adjoint() * m - Mat::identity(n, n)).norm()
}

pub fn sp_unitarity_residual(m: &SpMat) -> f64 {
    sp_dist(&(&sp_adjoint(m) * m), &sp_identity(m.nrows()))
}

/// Eigen-decomposition of a hermitian dense matrix with ascending eigenvalues.
pub fn eigh(m: &Mat) -> (Vec<f64>, Mat) {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(h);
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = Mat::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(k));
    }
    (vals, vecs)
}

/// `exp(-i t H)` for hermitian `H`, through its eigendecomposition.
pub fn expm_hermitian(h: &Mat, t: f64) -> Mat {
    let (vals, vecs) = eigh(h);
    let phases = Mat::from_diagonal(&Vector::from_iterator(vals.len(), vals.iter().map(|l| C64::from_polar(1.0, -t * l))));
    matmul(&matmul(&vecs, &phases), &vecs.adjoint())
}

fn to_faer(m: &Mat) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> Mat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Dense product `a b` (faer's GEMM; nalgebra has no optimized complex one).
pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    from_faer((to_faer(a) * to_faer(b)).as_ref())
}

/// Dense product `a* b`.
pub fn adjoint_matmul(a: &Mat, b: &Mat) -> Mat {
    from_faer((to_faer(a).adjoint() * to_faer(b)).as_ref())
}

/// `v − B(B* v)` for the columns `v` of `m`: the component outside the span
/// of the orthonormal columns of `b`.
pub fn project_out_columns(b: &Mat, m: &Mat) -> Mat {
    let (fb, fm) = (to_faer(b), to_faer(m));
    let coeffs = fb.adjoint() * &fm;
    from_faer((fm - &fb * coeffs).as_ref())
}

/// Orthonormal basis (columns) of the range of `m`, keeping the directions
/// whose column-pivoted QR diagonal exceeds `abs_tol`.
///
/// Rank decisions use pivoted QR rather than an SVD: the operator spans built
/// here are projector-like (singular values exactly 0 or 1, massively
/// degenerate), and the available complex SVDs misplace singular vectors on
/// such inputs.
pub fn range_basis_abs(m: &Mat, abs_tol: f64) -> Mat {
    if m.is_empty() {
        return Mat::zeros(m.nrows(), 0);
    }
    let qr = to_faer(m).col_piv_qr();
    let r = qr.thin_R();
    let q = qr.compute_thin_Q();
    let keep: Vec<usize> = (0..r.nrows().min(r.ncols())).filter(|&k| r[(k, k)].norm() > abs_tol).collect();
    Mat::from_fn(m.nrows(), keep.len(), |i, j| q[(i, keep[j])])
}

/// Largest pivot of the column-pivoted QR (zero for an empty matrix): the
/// largest column norm, within a factor `√ncols` of the spectral norm.
pub fn pivot_scale(m: &Mat) -> f64 {
    m.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Orthonormal basis (columns) of the range of `m`, pivots above `rel_tol`
/// times the largest column norm.
pub fn range_basis(m: &Mat, rel_tol: f64) -> Mat {
    let scale = pivot_scale(m);
    if scale == 0.0 {
        return Mat::zeros(m.nrows(), 0);
    }
    range_basis_abs(m, rel_tol * scale)
}

/// Orthonormal basis (columns) of the null space of `m`: the orthogonal
/// complement of its row space, with rank decided as in [`range_basis_abs`].
pub fn null_basis(m: &Mat, tol: f64) -> Mat {
    let n = m.ncols();
    let rows = range_basis_abs(&m.adjoint(), tol);
    let k = rows.ncols();
    if k == 0 {
        return Mat::identity(n, n);
    }
    // The full Householder Q of the orthonormal row basis completes it to a
    // unitary; its trailing columns span the complement.
    let q = to_faer(&rows).qr().compute_Q();
    from_faer(q.as_ref().get(.., k..))
}

/// Orthogonal projector onto the joint fixed space of a set of matrices,
/// i.e. onto `∩ ker(M_k)`.
pub fn kernel_projector(ms: &[Mat], n: usize, tol: f64) -> Mat {
    if ms.is_empty() {
        return Mat::identity(n, n);
    }
    let mut stacked = Mat::zeros(n * ms.len(), n);
    for (k, m) in ms.iter().enumerate() {
        stacked.view_mut((k * n, 0), (n, n)).copy_from(m);
    }
    let b = null_basis(&stacked, tol);
    &b * b.adjoint()
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Vector {
    Vector::from_iterator(n, (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_and_embed_agree() {
        let a = sp_from_triplets(2, 2, vec![(0, 1, ONE), (1, 0, c(0.0, 2.0))]);
        let id3 = sp_identity(3);
        let id2 = sp_identity(2);
        let direct = sp_kron_all(&[id3.clone(), a.clone(), id2.clone()]);
        let embedded = sp_embed(&[3, 2, 2], 1, &a);
        assert!(sp_dist(&direct, &embedded) < 1e-15);
    }

    #[test]
    fn expm_of_pauli_z() {
        let z = Mat::from_diagonal(&Vector::from_vec(vec![ONE, -ONE]));
        let u = expm_hermitian(&z, 0.3);
        assert!((u[(0, 0)] - C64::from_polar(1.0, -0.3)).norm() < 1e-14);
        assert!((u[(1, 1)] - C64::from_polar(1.0, 0.3)).norm() < 1e-14);
        assert!(unitarity_residual(&u) < 1e-14);
    }

    #[test]
    fn null_and_range_bases() {
        let m = Mat::from_row_slice(2, 3, &[ONE, ONE, ZERO, ZERO, ZERO, ONE]);
        let nb = null_basis(&m, 1e-12);
        assert_eq!(nb.ncols(), 1);
        assert!((&m * &nb).norm() < 1e-14);
        assert_eq!(range_basis(&m, 1e-12).ncols(), 2);
    }

    #[test]
    fn kernel_projector_of_diag() {
        let u = Mat::from_diagonal(&Vector::from_vec(vec![ZERO, c(-2.0, 0.0)]));
        let p = kernel_projector(&[u], 2, 1e-12);
        assert!((p[(0, 0)] - ONE).norm() < 1e-14);
        assert!(p[(1, 1)].norm() < 1e-14);
    }
}
