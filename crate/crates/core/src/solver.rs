//! Deterministic hermitian eigensolvers: dense full spectrum and Lanczos with
//! full reorthogonalization for the lowest eigenpairs.
//!
//! Both modes can be restricted to the range of an orthogonal projector `P`
//! commuting with the operator (typically the Gauss projector). The dense
//! mode diagonalizes `B* H B` for an orthonormal basis `B` of `range P`; the
//! Lanczos mode keeps every Krylov vector inside `range P`.
//! Residuals are explicit: `‖H y − θ y‖` for unit Ritz vectors `y`.
//!
//! A single Krylov sequence sees each eigenvalue once, so Lanczos locks one
//! eigenpair per run: every run starts from a fresh seeded vector orthogonal
//! to the locked vectors, and its lowest converged Ritz pair is locked. This
//! recovers degenerate eigenvalues with their multiplicities.

use crate::error::{LgkError, Result};
use crate::linalg::{c, eigh, hermiticity_residual, random_vector, range_basis, sp_matvec, sp_norm, sp_to_dense, Mat, SpMat, Vector, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Relative hermiticity tolerance for accepted operators.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumMode {
    Dense,
    /// Lowest `k` eigenpairs, at most `max_iter` Lanczos steps, residual
    /// target `tol`.
    Lanczos {
        k: usize,
        max_iter: usize,
        tol: f64,
    },
}

#[derive(Debug, Clone)]
pub struct SpectrumRequest<'a> {
    pub operator: &'a SpMat,
    pub mode: SpectrumMode,
    /// Seed of the start vector and of restart vectors.
    pub seed: u64,
    /// Optional projector commuting with the operator.
    pub restrict_to: Option<&'a SpMat>,
    pub want_vectors: bool,
}

impl<'a> SpectrumRequest<'a> {
    pub fn dense(operator: &'a SpMat) -> Self {
        SpectrumRequest { operator, mode: SpectrumMode::Dense, seed: 0, restrict_to: None, want_vectors: false }
    }

    pub fn lanczos(operator: &'a SpMat, k: usize, tol: f64, seed: u64) -> Self {
        let max_iter = operator.nrows().max(1) * 2;
        SpectrumRequest { operator, mode: SpectrumMode::Lanczos { k, max_iter, tol }, seed, restrict_to: None, want_vectors: false }
    }

    pub fn restricted(mut self, projector: &'a SpMat) -> Self {
        self.restrict_to = Some(projector);
        self
    }

    pub fn with_vectors(mut self) -> Self {
        self.want_vectors = true;
        self
    }
}

/// Ascending eigenvalues with explicit residuals and, on request, unit
/// eigenvectors (columns, in full-space coordinates).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub vectors: Option<Mat>,
}

pub fn eigs(req: &SpectrumRequest) -> Result<Spectrum> {
    let h = req.operator;
    if h.nrows() != h.ncols() {
        return Err(LgkError::DimensionMismatch { expected: h.nrows(), got: h.ncols() });
    }
    if let Some(p) = req.restrict_to {
        if p.nrows() != h.nrows() || p.ncols() != h.ncols() {
            return Err(LgkError::DimensionMismatch { expected: h.nrows(), got: p.nrows() });
        }
    }
    let herm = hermiticity_residual(h);
    if herm > HERMITIAN_TOL * sp_norm(h).max(1.0) {
        return Err(LgkError::NotHermitian(herm));
    }
    match req.mode {
        SpectrumMode::Dense => dense(req),
        SpectrumMode::Lanczos { k, max_iter, tol } => {
            if k == 0 {
                return Err(LgkError::InvalidArgument("Lanczos needs k >= 1".into()));
            }
            if tol.is_nan() || tol <= 0.0 {
                return Err(LgkError::InvalidArgument("Lanczos needs tol > 0".into()));
            }
            lanczos(req, k, max_iter, tol)
        }
    }
}

fn residual(h: &SpMat, y: &Vector, theta: f64) -> f64 {
    (sp_matvec(h, y) - y * c(theta, 0.0)).norm()
}

fn dense(req: &SpectrumRequest) -> Result<Spectrum> {
    let h = sp_to_dense(req.operator);
    let basis = match req.restrict_to {
        Some(p) => range_basis(&sp_to_dense(p), 1e-9),
        None => Mat::identity(h.nrows(), h.nrows()),
    };
    let reduced = basis.adjoint() * &h * &basis;
    let (vals, vecs) = eigh(&reduced);
    let full = &basis * vecs;
    let residuals = (0..vals.len()).map(|i| residual(req.operator, &full.column(i).into_owned(), vals[i])).collect();
    Ok(Spectrum { eigenvalues: vals, residuals, vectors: req.want_vectors.then_some(full) })
}

fn project(p: Option<&SpMat>, v: Vector) -> Vector {
    match p {
        Some(p) => sp_matvec(p, &v),
        None => v,
    }
}

/// Orthogonalize `w` against the columns of `basis` (two Gram–Schmidt passes).
fn orthogonalize(basis: &[Vector], mut w: Vector) -> Vector {
    for _ in 0..2 {
        for b in basis {
            let proj = b.dotc(&w);
            w -= b * proj;
        }
    }
    w
}

/// Fresh random direction in `range P`, orthogonal to `basis`, or `None`
/// when the accessible space is exhausted.
fn fresh_vector(rng: &mut ChaCha8Rng, n: usize, p: Option<&SpMat>, basis: &[Vector]) -> Option<Vector> {
    for _ in 0..4 {
        let w = orthogonalize(basis, project(p, random_vector(rng, n)));
        let w = orthogonalize(basis, project(p, w));
        let norm = w.norm();
        if norm > 1e-8 {
            return Some(w / c(norm, 0.0));
        }
    }
    None
}

/// Krylov steps taken before a run tests its lowest Ritz pair, so that the
/// lowest eigenvalues have entered the Krylov space.
const MIN_RUN_STEPS: usize = 12;

fn lanczos(req: &SpectrumRequest, k: usize, max_iter: usize, tol: f64) -> Result<Spectrum> {
    let h = req.operator;
    let n = h.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let mut locked: Vec<(f64, Vector)> = Vec::new();
    while locked.len() < k {
        match lanczos_run(req, &mut rng, &locked, max_iter, tol)? {
            Some(pair) => locked.push(pair),
            None => break,
        }
    }
    locked.sort_by(|a, b| a.0.total_cmp(&b.0));
    let res = locked.iter().map(|(theta, y)| residual(h, y, *theta)).collect();
    Ok(finish(locked, res, n, req.want_vectors))
}

/// One Lanczos run in the orthogonal complement of the locked vectors,
/// returning its lowest converged Ritz pair, or `None` when the accessible
/// space is exhausted.
fn lanczos_run(
    req: &SpectrumRequest,
    rng: &mut ChaCha8Rng,
    locked: &[(f64, Vector)],
    max_iter: usize,
    tol: f64,
) -> Result<Option<(f64, Vector)>> {
    let h = req.operator;
    let n = h.nrows();
    let p = req.restrict_to;
    let scale = sp_norm(h).max(1.0);
    let mut basis: Vec<Vector> = locked.iter().map(|(_, y)| y.clone()).collect();
    let fixed = basis.len();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut best = f64::INFINITY;
    let Some(mut v) = fresh_vector(rng, n, p, &basis) else {
        return Ok(None);
    };
    for _ in 0..max_iter.max(1) {
        let w = sp_matvec(h, &v);
        alpha.push(v.dotc(&w).re);
        basis.push(v.clone());
        let w = orthogonalize(&basis, project(p, w));
        let b = w.norm();
        let mut exhausted = false;
        if b > 1e-10 * scale {
            v = w / c(b, 0.0);
        } else {
            // Invariant subspace reached; continue from a new orthogonal
            // direction with a zero coupling.
            match fresh_vector(rng, n, p, &basis) {
                Some(f) => v = f,
                None => exhausted = true,
            }
        }
        if alpha.len() >= MIN_RUN_STEPS || exhausted {
            let (theta, y) = ritz_pairs(&alpha, &beta, &basis[fixed..], 1).remove(0);
            let res = residual(h, &y, theta);
            best = best.min(res);
            if res < tol {
                return Ok(Some((theta, y)));
            }
            if exhausted {
                break;
            }
        }
        beta.push(if b > 1e-10 * scale { b } else { 0.0 });
    }
    Err(LgkError::NotConverged { best_residual: best })
}

/// Lowest `count` Ritz pairs of the tridiagonal matrix built so far.
fn ritz_pairs(alpha: &[f64], beta: &[f64], basis: &[Vector], count: usize) -> Vec<(f64, Vector)> {
    let m = alpha.len();
    let mut t = Mat::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = c(alpha[i], 0.0);
        if i + 1 < m {
            t[(i, i + 1)] = c(beta[i], 0.0);
            t[(i + 1, i)] = c(beta[i], 0.0);
        }
    }
    let (vals, vecs) = eigh(&t);
    (0..count)
        .map(|j| {
            let mut y = Vector::zeros(basis[0].len());
            for (i, b) in basis.iter().enumerate() {
                y += b * vecs[(i, j)];
            }
            let norm = y.norm();
            (vals[j], y / C64::new(norm, 0.0))
        })
        .collect()
}

fn finish(ritz: Vec<(f64, Vector)>, residuals: Vec<f64>, n: usize, want_vectors: bool) -> Spectrum {
    let eigenvalues = ritz.iter().map(|(t, _)| *t).collect();
    let vectors = want_vectors.then(|| {
        let mut m = Mat::zeros(n, ritz.len());
        for (j, (_, y)) in ritz.iter().enumerate() {
            m.set_column(j, y);
        }
        m
    });
    Spectrum { eigenvalues, residuals, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{sp_diag, sp_from_dense, ONE, ZERO};

    fn diag(d: &[f64]) -> SpMat {
        sp_diag(&d.iter().map(|x| c(*x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn dense_diag() {
        let h = diag(&[2.0, 0.0, 1.0]);
        let s = eigs(&SpectrumRequest::dense(&h)).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0, 1.0, 2.0]);
        assert!(s.residuals.iter().all(|r| *r < 1e-15));
    }

    #[test]
    fn lanczos_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 60;
        let a = Mat::from_fn(n, n, |_, _| random_vector(&mut rng, 1)[0]);
        let h = sp_from_dense(&(&a + a.adjoint()), 0.0);
        let dense = eigs(&SpectrumRequest::dense(&h)).unwrap();
        let lz = eigs(&SpectrumRequest::lanczos(&h, 3, 1e-9, 5).with_vectors()).unwrap();
        for i in 0..3 {
            assert!((dense.eigenvalues[i] - lz.eigenvalues[i]).abs() < 1e-8);
            assert!(lz.residuals[i] < 1e-9);
        }
        let v = lz.vectors.unwrap();
        assert!((v.adjoint() * &v - Mat::identity(3, 3)).norm() < 1e-8);
    }

    #[test]
    fn lanczos_lowest_of_diagonal() {
        let d: Vec<f64> = (0..40).map(|i| (i as f64) * 0.25).collect();
        let h = diag(&d);
        let s = eigs(&SpectrumRequest::lanczos(&h, 1, 1e-10, 1)).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-8);
    }

    #[test]
    fn degenerate_spectrum_needs_restarts() {
        // Identity: the first Krylov vector is already invariant.
        let h = diag(&[1.0; 6]);
        let s = eigs(&SpectrumRequest::lanczos(&h, 3, 1e-10, 2)).unwrap();
        assert_eq!(s.eigenvalues.len(), 3);
        assert!(s.eigenvalues.iter().all(|x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn restriction_to_projector() {
        let h = diag(&[-5.0, 1.0, 2.0, 3.0]);
        let p = diag(&[0.0, 1.0, 0.0, 1.0]);
        let dense = eigs(&SpectrumRequest::dense(&h).restricted(&p)).unwrap();
        assert_eq!(dense.eigenvalues.len(), 2);
        assert!((dense.eigenvalues[0] - 1.0).abs() < 1e-14);
        let lz = eigs(&SpectrumRequest::lanczos(&h, 4, 1e-10, 9).restricted(&p)).unwrap();
        assert_eq!(lz.eigenvalues.len(), 2);
        assert!((lz.eigenvalues[0] - 1.0).abs() < 1e-12 && (lz.eigenvalues[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn errors_and_determinism() {
        let bad = sp_from_dense(&Mat::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]), 0.0);
        assert!(matches!(eigs(&SpectrumRequest::dense(&bad)), Err(LgkError::NotHermitian(_))));
        let d: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let h = diag(&d);
        let mut req = SpectrumRequest::lanczos(&h, 2, 1e-12, 4);
        req.mode = SpectrumMode::Lanczos { k: 2, max_iter: 3, tol: 1e-12 };
        assert!(matches!(eigs(&req), Err(LgkError::NotConverged { .. })));
        let a = eigs(&SpectrumRequest::lanczos(&h, 2, 1e-10, 4)).unwrap();
        let b = eigs(&SpectrumRequest::lanczos(&h, 2, 1e-10, 4)).unwrap();
        assert_eq!(a, b);
    }
}
