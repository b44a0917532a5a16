//! Gauge-group data for Z_N, U(1) and SU(2): elements, irreducible
//! representations, Lie generators, Clebsch–Gordan coefficients and Haar
//! quadrature rules.
//!
//! Conventions:
//! - The Lie basis is trace-orthonormal, `Tr(Y_r Y_s) = δ_rs`; U(1) has
//!   `Y = [1]`, SU(2) has `Y_r = σ_r/√2`. Z_N has no Lie basis.
//! - The one-parameter subgroup along `Y_r` is `exp_lie(r, t) = exp(i t Y_r)`,
//!   and generator representations satisfy `π(exp(i t Y)) = exp(i t dπ(Y))`.
//! - SU(2) elements are unit quaternions `(a, b, c, d)` with defining matrix
//!   `a + i(b σx + c σy + d σz)`. Spin-j irreps use the weight basis ordered
//!   by descending `m = j, j-1, …, -j`, so spin ½ is the defining rep.

use crate::error::{LgkError, Result};
use crate::linalg::{c, Mat, C64, I, ONE, ZERO};
use gauss_quad::legendre::GaussLegendre;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    ZN(u32),
    U1,
    SU2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub kind: GroupKind,
}

impl GroupSpec {
    pub fn zn(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(LgkError::InvalidGroup(format!("Z_N requires N >= 2, got {n}")));
        }
        Ok(GroupSpec { kind: GroupKind::ZN(n) })
    }

    pub fn u1() -> Self {
        GroupSpec { kind: GroupKind::U1 }
    }

    pub fn su2() -> Self {
        GroupSpec { kind: GroupKind::SU2 }
    }

    pub fn name(&self) -> String {
        match self.kind {
            GroupKind::ZN(n) => format!("Z{n}"),
            GroupKind::U1 => "U1".into(),
            GroupKind::SU2 => "SU2".into(),
        }
    }

    /// Dimension k of the defining representation.
    pub fn defining_dim(&self) -> usize {
        match self.kind {
            GroupKind::SU2 => 2,
            _ => 1,
        }
    }

    pub fn is_abelian(&self) -> bool {
        !matches!(self.kind, GroupKind::SU2)
    }

    /// Number of Lie generators (0 for the finite groups).
    pub fn lie_dim(&self) -> usize {
        match self.kind {
            GroupKind::ZN(_) => 0,
            GroupKind::U1 => 1,
            GroupKind::SU2 => 3,
        }
    }

    /// Trace-orthonormal hermitian generators `Y_r` of the defining rep.
    pub fn lie_basis(&self) -> Vec<Mat> {
        match self.kind {
            GroupKind::ZN(_) => vec![],
            GroupKind::U1 => vec![Mat::from_element(1, 1, ONE)],
            GroupKind::SU2 => {
                let s = 1.0 / 2f64.sqrt();
                pauli().into_iter().map(|p| p * c(s, 0.0)).collect()
            }
        }
    }

    pub fn check_lie_index(&self, r: usize) -> Result<()> {
        if self.lie_dim() == 0 {
            return Err(LgkError::NoLieAlgebra(self.name()));
        }
        if r >= self.lie_dim() {
            return Err(LgkError::InvalidLieIndex { index: r, size: self.lie_dim() });
        }
        Ok(())
    }

    /// Structure constants `f_rst` with `[Y_r, Y_s] = i Σ_t f_rst Y_t`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<f64>>> {
        let ys = self.lie_basis();
        let n = ys.len();
        let mut f = vec![vec![vec![0.0; n]; n]; n];
        for r in 0..n {
            for s in 0..n {
                let comm = &ys[r] * &ys[s] - &ys[s] * &ys[r];
                for t in 0..n {
                    f[r][s][t] = ((comm.clone() * &ys[t]).trace() * (-I)).re;
                }
            }
        }
        f
    }

    pub fn identity(&self) -> GroupElement {
        match self.kind {
            GroupKind::ZN(n) => GroupElement::ZN { m: 0, n },
            GroupKind::U1 => GroupElement::U1 { theta: 0.0 },
            GroupKind::SU2 => GroupElement::SU2 { q: [1.0, 0.0, 0.0, 0.0] },
        }
    }

    /// `exp(i t Y_r)`.
    pub fn exp_lie(&self, r: usize, t: f64) -> Result<GroupElement> {
        self.check_lie_index(r)?;
        Ok(match self.kind {
            GroupKind::U1 => GroupElement::U1 { theta: t }.normalized(),
            GroupKind::SU2 => {
                let phi = t / 2f64.sqrt();
                let mut q = [phi.cos(), 0.0, 0.0, 0.0];
                q[r + 1] = phi.sin();
                GroupElement::SU2 { q }
            }
            GroupKind::ZN(_) => unreachable!(),
        })
    }

    /// Haar-random element.
    pub fn random<R: Rng>(&self, rng: &mut R) -> GroupElement {
        match self.kind {
            GroupKind::ZN(n) => GroupElement::ZN { m: rng.gen_range(0..n), n },
            GroupKind::U1 => GroupElement::U1 { theta: rng.gen_range(0.0..2.0 * PI) },
            GroupKind::SU2 => {
                let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                GroupElement::SU2 { q: v.map(|x| x / norm) }
            }
        }
    }

    /// A fixed element generating a dense (or, for Z_N, the whole) subgroup
    /// along each Lie direction; used as constraint unitaries.
    pub fn constraint_generators(&self) -> Vec<GroupElement> {
        const GENERIC_T: f64 = 1.234_567_890_123;
        match self.kind {
            GroupKind::ZN(n) => vec![GroupElement::ZN { m: 1, n }],
            _ => (0..self.lie_dim()).map(|r| self.exp_lie(r, GENERIC_T).unwrap()).collect(),
        }
    }
}

pub fn pauli() -> [Mat; 3] {
    [
        Mat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        Mat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        Mat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupElement {
    ZN { m: u32, n: u32 },
    U1 { theta: f64 },
    SU2 { q: [f64; 4] },
}

impl GroupElement {
    fn normalized(self) -> Self {
        match self {
            GroupElement::U1 { theta } => GroupElement::U1 { theta: theta.rem_euclid(2.0 * PI) },
            GroupElement::SU2 { q } => {
                let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
                GroupElement::SU2 { q: q.map(|x| x / norm) }
            }
            e => e,
        }
    }

    pub fn su2(q: [f64; 4]) -> Result<Self> {
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(LgkError::InvalidGroup(format!("quaternion norm {norm} differs from 1")));
        }
        Ok(GroupElement::SU2 { q })
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        match (self, other) {
            (GroupElement::ZN { m: a, n }, GroupElement::ZN { m: b, .. }) => GroupElement::ZN { m: (a + b) % n, n: *n },
            (GroupElement::U1 { theta: a }, GroupElement::U1 { theta: b }) => GroupElement::U1 { theta: a + b }.normalized(),
            (GroupElement::SU2 { q: p }, GroupElement::SU2 { q }) => {
                // (a + i b·σ)(a' + i b'·σ) = aa' - b·b' + i(a b' + a' b - b×b')·σ
                let (a, b) = (p[0], [p[1], p[2], p[3]]);
                let (a2, b2) = (q[0], [q[1], q[2], q[3]]);
                let dot = b[0] * b2[0] + b[1] * b2[1] + b[2] * b2[2];
                let cross = [b[1] * b2[2] - b[2] * b2[1], b[2] * b2[0] - b[0] * b2[2], b[0] * b2[1] - b[1] * b2[0]];
                let v: [f64; 3] = std::array::from_fn(|k| a * b2[k] + a2 * b[k] - cross[k]);
                GroupElement::SU2 { q: [a * a2 - dot, v[0], v[1], v[2]] }.normalized()
            }
            _ => panic!("mixed group kinds"),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::ZN { m, n } => GroupElement::ZN { m: (n - m) % n, n: *n },
            GroupElement::U1 { theta } => GroupElement::U1 { theta: -theta }.normalized(),
            GroupElement::SU2 { q } => GroupElement::SU2 { q: [q[0], -q[1], -q[2], -q[3]] },
        }
    }

    pub fn defining_rep(&self) -> Mat {
        match self {
            GroupElement::ZN { m, n } => Mat::from_element(1, 1, C64::from_polar(1.0, 2.0 * PI * *m as f64 / *n as f64)),
            GroupElement::U1 { theta } => Mat::from_element(1, 1, C64::from_polar(1.0, *theta)),
            GroupElement::SU2 { q } => Mat::from_row_slice(2, 2, &[c(q[0], q[3]), c(q[2], q[1]), c(-q[2], q[1]), c(q[0], -q[3])]),
        }
    }
}

/// Irreducible representation label: Z_N charge mod N, U(1) charge, or SU(2)
/// twice-spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Irrep {
    pub label: i64,
    pub dim: usize,
}

impl Irrep {
    pub fn trivial() -> Self {
        Irrep { label: 0, dim: 1 }
    }

    pub fn spin(two_j: u32) -> Self {
        Irrep { label: two_j as i64, dim: two_j as usize + 1 }
    }

    pub fn charge(q: i64) -> Self {
        Irrep { label: q, dim: 1 }
    }
}

/// Irreps kept at a cutoff: all N for Z_N, |q| ≤ cutoff for U(1) (ascending),
/// 2j ≤ cutoff for SU(2).
pub fn irreps_up_to(spec: &GroupSpec, cutoff: u32) -> Vec<Irrep> {
    match spec.kind {
        GroupKind::ZN(n) => (0..n as i64).map(Irrep::charge).collect(),
        GroupKind::U1 => (-(cutoff as i64)..=cutoff as i64).map(Irrep::charge).collect(),
        GroupKind::SU2 => (0..=cutoff).map(Irrep::spin).collect(),
    }
}

/// Spin matrices `(J_x, J_y, J_z)` for twice-spin `two_j` in the descending
/// weight basis.
pub fn spin_matrices(two_j: u32) -> [Mat; 3] {
    let d = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let mut jp = Mat::zeros(d, d);
    let mut jz = Mat::zeros(d, d);
    for k in 0..d {
        let m = j - k as f64;
        jz[(k, k)] = c(m, 0.0);
        if k > 0 {
            // J+ |m⟩ = sqrt(j(j+1) - m(m+1)) |m+1⟩, and |m+1⟩ sits at k-1.
            jp[(k - 1, k)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * c(0.5, 0.0);
    let jy = (&jp - &jm) * c(0.0, -0.5);
    [jx, jy, jz]
}

/// `dπ(Y_r)`: hermitian, with `π(exp(i t Y_r)) = exp(i t dπ(Y_r))`.
pub fn generator_rep(spec: &GroupSpec, pi: &Irrep, r: usize) -> Result<Mat> {
    spec.check_lie_index(r)?;
    Ok(match spec.kind {
        GroupKind::U1 => Mat::from_element(1, 1, c(pi.label as f64, 0.0)),
        GroupKind::SU2 => spin_matrices(pi.label as u32)[r].clone() * c(2f64.sqrt(), 0.0),
        GroupKind::ZN(_) => unreachable!(),
    })
}

/// Quadratic Casimir `Σ_r dπ(Y_r)²` as a scalar on the irrep.
pub fn casimir_value(spec: &GroupSpec, pi: &Irrep) -> f64 {
    match spec.kind {
        GroupKind::ZN(_) => 0.0,
        GroupKind::U1 => (pi.label * pi.label) as f64,
        GroupKind::SU2 => {
            let j = pi.label as f64 / 2.0;
            2.0 * j * (j + 1.0)
        }
    }
}

pub fn irrep_matrix(spec: &GroupSpec, pi: &Irrep, g: &GroupElement) -> Mat {
    match (spec.kind, g) {
        (GroupKind::ZN(n), GroupElement::ZN { m, .. }) => {
            Mat::from_element(1, 1, C64::from_polar(1.0, 2.0 * PI * (pi.label * *m as i64) as f64 / n as f64))
        }
        (GroupKind::U1, GroupElement::U1 { theta }) => Mat::from_element(1, 1, C64::from_polar(1.0, pi.label as f64 * theta)),
        (GroupKind::SU2, GroupElement::SU2 { q }) => {
            if pi.label == 0 {
                return Mat::identity(1, 1);
            }
            // g = exp(i φ n·σ) = exp(i 2φ n·J) in the spin-½ rep.
            let s = (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
            let phi = s.atan2(q[0]);
            let axis = if s > 0.0 { [q[1] / s, q[2] / s, q[3] / s] } else { [0.0, 0.0, 1.0] };
            let js = spin_matrices(pi.label as u32);
            let h = &js[0] * c(axis[0], 0.0) + &js[1] * c(axis[1], 0.0) + &js[2] * c(axis[2], 0.0);
            crate::linalg::expm_hermitian(&h, -2.0 * phi)
        }
        _ => panic!("group element kind does not match group spec"),
    }
}

fn factorial(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Clebsch–Gordan table `⟨j1 m1; j2 m2 | J M⟩` in the Condon–Shortley
/// convention, indexed `[i1][i2][iM]` by descending-weight positions.
/// Returns an empty table if the triangle or parity condition fails.
pub fn clebsch_gordan(two_j1: u32, two_j2: u32, two_j: u32) -> Vec<Vec<Vec<f64>>> {
    let (a, b, cc) = (two_j1 as i64, two_j2 as i64, two_j as i64);
    if cc < (a - b).abs() || cc > a + b || (a + b + cc) % 2 != 0 {
        return vec![];
    }
    let (d1, d2, d) = (a as usize + 1, b as usize + 1, cc as usize + 1);
    let mut table = vec![vec![vec![0.0; d]; d2]; d1];
    // Work with doubled quantum numbers; all factorial arguments are integers.
    let pre = ((cc + 1) as f64 * factorial((cc + a - b) / 2) * factorial((cc - a + b) / 2) * factorial((a + b - cc) / 2)
        / factorial((a + b + cc) / 2 + 1))
    .sqrt();
    for i1 in 0..d1 {
        let m1 = a - 2 * i1 as i64;
        for i2 in 0..d2 {
            let m2 = b - 2 * i2 as i64;
            let m = m1 + m2;
            if m.abs() > cc {
                continue;
            }
            let im = ((cc - m) / 2) as usize;
            let norm = (factorial((cc + m) / 2)
                * factorial((cc - m) / 2)
                * factorial((a - m1) / 2)
                * factorial((a + m1) / 2)
                * factorial((b - m2) / 2)
                * factorial((b + m2) / 2))
            .sqrt();
            let mut sum = 0.0;
            for k in 0..=(a + b) {
                let args = [k, (a + b - cc) / 2 - k, (a - m1) / 2 - k, (b + m2) / 2 - k, (cc - b + m1) / 2 + k, (cc - a - m2) / 2 + k];
                if args.iter().any(|&x| x < 0) {
                    continue;
                }
                let den: f64 = args.iter().map(|&x| factorial(x)).product();
                sum += if k % 2 == 0 { 1.0 } else { -1.0 } / den;
            }
            table[i1][i2][im] = pre * norm * sum;
        }
    }
    table
}

/// Haar quadrature rule `(element, weight)`; weights sum to 1.
///
/// Z_N: uniform sum (exact). U(1): `order`-point trapezoid, exact for
/// products of matrix elements with total |charge| < order. SU(2): Euler
/// z-y-z product rule with `order` trapezoid points in each of α, γ ∈ [0, 4π)
/// and `order` Gauss–Legendre points in cos β; exact when the total
/// twice-spin of the integrand is below `order`.
pub fn haar_quadrature(spec: &GroupSpec, order: usize) -> Vec<(GroupElement, f64)> {
    let order = order.max(1);
    match spec.kind {
        GroupKind::ZN(n) => (0..n).map(|m| (GroupElement::ZN { m, n }, 1.0 / n as f64)).collect(),
        GroupKind::U1 => (0..order).map(|k| (GroupElement::U1 { theta: 2.0 * PI * k as f64 / order as f64 }, 1.0 / order as f64)).collect(),
        GroupKind::SU2 => {
            let gl: Vec<(f64, f64)> =
                if order == 1 { vec![(0.0, 2.0)] } else { GaussLegendre::new(order).expect("order >= 2").as_node_weight_pairs().to_vec() };
            let rz = |ang: f64| GroupElement::SU2 { q: [(ang / 2.0).cos(), 0.0, 0.0, -(ang / 2.0).sin()] };
            let ry = |ang: f64| GroupElement::SU2 { q: [(ang / 2.0).cos(), 0.0, -(ang / 2.0).sin(), 0.0] };
            let mut out = Vec::with_capacity(order * order * gl.len());
            for ia in 0..order {
                let alpha = 4.0 * PI * ia as f64 / order as f64;
                for &(x, w) in &gl {
                    let beta = x.clamp(-1.0, 1.0).acos();
                    for ig in 0..order {
                        let gamma = 4.0 * PI * ig as f64 / order as f64;
                        let g = rz(alpha).mul(&ry(beta)).mul(&rz(gamma));
                        out.push((g, w / 2.0 / (order * order) as f64));
                    }
                }
            }
            out
        }
    }
}

/// Dense matrix with entries given by a closure, used by tests and the
/// quadrature projector route.
pub fn average<F>(rule: &[(GroupElement, f64)], dim: usize, f: F) -> Mat
where
    F: Fn(&GroupElement) -> Mat,
{
    let mut acc = Mat::zeros(dim, dim);
    for (g, w) in rule {
        acc += f(g) * c(*w, 0.0);
    }
    acc
}

/// Eigen-decomposition based check that `U` is close to a group element of
/// the defining representation; used in tests.
pub fn is_special_unitary(m: &Mat, tol: f64) -> bool {
    crate::linalg::unitarity_residual(m) < tol && (m.determinant() - ONE).norm() < tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;
    use crate::linalg::{expm_hermitian, unitarity_residual};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &Mat, b: &Mat, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn defining_rep_examples() {
        for spec in [GroupSpec::zn(3).unwrap(), GroupSpec::u1(), GroupSpec::su2()] {
            let k = spec.defining_dim();
            assert!(close(&spec.identity().defining_rep(), &Mat::identity(k, k), 1e-15));
        }
        let g = GroupElement::ZN { m: 1, n: 3 };
        assert!((g.defining_rep()[(0, 0)] - C64::from_polar(1.0, 2.0 * PI / 3.0)).norm() < 1e-15);
        // Quaternion (0,1,0,0) is the π-rotation about the x axis.
        let g = GroupElement::su2([0.0, 1.0, 0.0, 0.0]).unwrap();
        let expected = Mat::from_row_slice(2, 2, &[ZERO, I, I, ZERO]);
        assert!(close(&g.defining_rep(), &expected, 1e-15));
        // Same element from exponentiating the x generator: exp(i (π/√2) Y_x).
        let h = GroupSpec::su2().exp_lie(0, PI / 2f64.sqrt()).unwrap();
        assert!(close(&h.defining_rep(), &expected, 1e-12));
        let via_expm = expm_hermitian(&GroupSpec::su2().lie_basis()[0], -PI / 2f64.sqrt());
        assert!(close(&via_expm, &expected, 1e-12));
    }

    #[test]
    fn homomorphism_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for spec in [GroupSpec::zn(5).unwrap(), GroupSpec::u1(), GroupSpec::su2()] {
            for _ in 0..20 {
                let (g, h) = (spec.random(&mut rng), spec.random(&mut rng));
                let lhs = g.mul(&h).defining_rep();
                let rhs = g.defining_rep() * h.defining_rep();
                assert!(close(&lhs, &rhs, 1e-12));
                let k = spec.defining_dim();
                assert!(close(&g.mul(&g.inverse()).defining_rep(), &Mat::identity(k, k), 1e-12));
                for pi in irreps_up_to(&spec, 3) {
                    let lhs = irrep_matrix(&spec, &pi, &g.mul(&h));
                    let rhs = irrep_matrix(&spec, &pi, &g) * irrep_matrix(&spec, &pi, &h);
                    assert!(close(&lhs, &rhs, 1e-11));
                    assert!(unitarity_residual(&lhs) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn irreps_examples() {
        let labels: Vec<i64> = irreps_up_to(&GroupSpec::u1(), 1).iter().map(|p| p.label).collect();
        assert_eq!(labels, vec![-1, 0, 1]);
        let su2 = irreps_up_to(&GroupSpec::su2(), 1);
        assert_eq!(su2, vec![Irrep::spin(0), Irrep::spin(1)]);
        assert_eq!(su2[1].dim, 2);
        assert_eq!(irreps_up_to(&GroupSpec::zn(2).unwrap(), 7).len(), 2);
    }

    #[test]
    fn irrep_matrix_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let su2 = GroupSpec::su2();
        let g = su2.random(&mut rng);
        assert!(close(&irrep_matrix(&su2, &Irrep::trivial(), &g), &Mat::identity(1, 1), 1e-15));
        let u = irrep_matrix(&GroupSpec::u1(), &Irrep::charge(3), &GroupElement::U1 { theta: 0.4 });
        assert!((u[(0, 0)] - C64::from_polar(1.0, 1.2)).norm() < 1e-14);
        // z rotation by φ is exp(-i φ σz/2); in spin 1 it is diag(e^{-iφ}, 1, e^{iφ}).
        let phi: f64 = 0.7;
        let g = GroupElement::SU2 { q: [(phi / 2.0).cos(), 0.0, 0.0, -(phi / 2.0).sin()] };
        let m = irrep_matrix(&su2, &Irrep::spin(2), &g);
        let js = spin_matrices(2);
        let oracle = expm_hermitian(&js[2], phi);
        assert!(close(&m, &oracle, 1e-12));
        let expected = Mat::from_diagonal(&Vector::from_vec(vec![C64::from_polar(1.0, -phi), ONE, C64::from_polar(1.0, phi)]));
        assert!(close(&m, &expected, 1e-12));
        // Spin ½ equals the defining representation.
        let g = su2.random(&mut rng);
        assert!(close(&irrep_matrix(&su2, &Irrep::spin(1), &g), &g.defining_rep(), 1e-12));
    }

    #[test]
    fn generators_exponentiate_and_close() {
        let su2 = GroupSpec::su2();
        // dπ(Y_r) for spin ½ is Y_r itself.
        for r in 0..3 {
            assert!(close(&generator_rep(&su2, &Irrep::spin(1), r).unwrap(), &su2.lie_basis()[r], 1e-15));
        }
        let f = su2.structure_constants();
        for two_j in 0..4 {
            let pi = Irrep::spin(two_j);
            let gens: Vec<Mat> = (0..3).map(|r| generator_rep(&su2, &pi, r).unwrap()).collect();
            for r in 0..3 {
                assert!(close(&gens[r], &gens[r].adjoint(), 1e-15));
                let t = 0.37;
                let lhs = irrep_matrix(&su2, &pi, &su2.exp_lie(r, t).unwrap());
                assert!(close(&lhs, &expm_hermitian(&gens[r], -t), 1e-12));
                for s in 0..3 {
                    let comm = &gens[r] * &gens[s] - &gens[s] * &gens[r];
                    let mut rhs = Mat::zeros(pi.dim, pi.dim);
                    for (tt, g) in gens.iter().enumerate() {
                        rhs += g * c(0.0, f[r][s][tt]);
                    }
                    assert!(close(&comm, &rhs, 1e-10));
                }
            }
            let cas: Mat = gens.iter().map(|g| g * g).sum();
            assert!(close(&cas, &(Mat::identity(pi.dim, pi.dim) * c(casimir_value(&su2, &pi), 0.0)), 1e-12));
        }
        let ys = su2.lie_basis();
        for r in 0..3 {
            for s in 0..3 {
                let tr = (&ys[r] * &ys[s]).trace();
                assert!((tr - c(if r == s { 1.0 } else { 0.0 }, 0.0)).norm() < 1e-12);
            }
        }
        assert!(generator_rep(&GroupSpec::u1(), &Irrep::trivial(), 1).is_err());
        assert!(generator_rep(&GroupSpec::zn(2).unwrap(), &Irrep::trivial(), 0).is_err());
        assert_eq!(generator_rep(&GroupSpec::u1(), &Irrep::charge(-2), 0).unwrap()[(0, 0)], c(-2.0, 0.0));
        assert_eq!(generator_rep(&su2, &Irrep::trivial(), 2).unwrap()[(0, 0)], ZERO);
    }

    /// Clebsch–Gordan oracle: build |J J⟩ as the highest-weight null vector of
    /// the total raising operator on the product space, lower with J−, and
    /// read off the coefficients.
    fn cg_oracle(a: u32, b: u32, cc: u32) -> Vec<Vec<Vec<f64>>> {
        let (d1, d2) = (a as usize + 1, b as usize + 1);
        let (j1, j2) = (spin_matrices(a), spin_matrices(b));
        let kron = |x: &Mat, y: &Mat| x.kronecker(y);
        let (e1, e2) = (Mat::identity(d1, d1), Mat::identity(d2, d2));
        let tot: Vec<Mat> = (0..3).map(|r| kron(&j1[r], &e2) + kron(&e1, &j2[r])).collect();
        let jp = &tot[0] + &tot[1] * I;
        let jm = jp.adjoint();
        let n = d1 * d2;
        let big_j = cc as f64 / 2.0;
        // Restrict J+ to the M = J subspace and find its null vector.
        let states: Vec<usize> = (0..n)
            .filter(|&s| {
                let m = a as f64 / 2.0 - (s / d2) as f64 + b as f64 / 2.0 - (s % d2) as f64;
                (m - big_j).abs() < 1e-9
            })
            .collect();
        let mut restricted = Mat::zeros(n, states.len());
        for (k, &s) in states.iter().enumerate() {
            restricted.set_column(k, &jp.column(s));
        }
        let null = crate::linalg::null_basis(&restricted, 1e-10);
        assert_eq!(null.ncols(), 1);
        let mut v = Vector::zeros(n);
        for (k, &s) in states.iter().enumerate() {
            v[s] = null[(k, 0)];
        }
        // Phase: component with m1 = j1 is real positive.
        let lead = (0..d2).map(|i2| v[i2]).find(|x| x.norm() > 1e-12).unwrap();
        v *= lead.conj() / lead.norm();
        v /= C64::from(v.norm());
        let mut table = vec![vec![vec![0.0; cc as usize + 1]; d2]; d1];
        for im in 0..=cc as usize {
            for s in 0..n {
                table[s / d2][s % d2][im] = v[s].re;
                assert!(v[s].im.abs() < 1e-12);
            }
            let w = &jm * &v;
            if w.norm() > 1e-12 {
                v = &w / C64::from(w.norm());
            }
        }
        table
    }

    #[test]
    fn clebsch_gordan_against_oracle() {
        let half_half_0 = clebsch_gordan(1, 1, 0);
        assert!((half_half_0[0][1][0] - 1.0 / 2f64.sqrt()).abs() < 1e-14);
        let t = clebsch_gordan(1, 1, 2);
        assert!((t[0][0][0] - 1.0).abs() < 1e-14);
        assert!((t[0][1][1] - 1.0 / 2f64.sqrt()).abs() < 1e-14);
        assert!(clebsch_gordan(1, 1, 4).is_empty());
        assert!(clebsch_gordan(1, 2, 2).is_empty());
        for a in 0..4u32 {
            for b in 0..4u32 {
                let mut cc = a.abs_diff(b);
                while cc <= a + b {
                    let t = clebsch_gordan(a, b, cc);
                    let o = cg_oracle(a, b, cc);
                    for i1 in 0..t.len() {
                        for i2 in 0..t[i1].len() {
                            for im in 0..t[i1][i2].len() {
                                assert!((t[i1][i2][im] - o[i1][i2][im]).abs() < 1e-12, "{a} {b} {cc}");
                            }
                        }
                    }
                    cc += 2;
                }
            }
        }
    }

    #[test]
    fn clebsch_gordan_unitarity() {
        for a in 0..4u32 {
            for b in 0..4u32 {
                let (d1, d2) = (a as usize + 1, b as usize + 1);
                let mut rows = Vec::new();
                let mut cc = a.abs_diff(b);
                while cc <= a + b {
                    let t = clebsch_gordan(a, b, cc);
                    for im in 0..=cc as usize {
                        rows.push((0..d1 * d2).map(|s| t[s / d2][s % d2][im]).collect::<Vec<f64>>());
                    }
                    cc += 2;
                }
                assert_eq!(rows.len(), d1 * d2);
                for (p, rp) in rows.iter().enumerate() {
                    for (q, rq) in rows.iter().enumerate() {
                        let dot: f64 = rp.iter().zip(rq).map(|(x, y)| x * y).sum();
                        assert!((dot - if p == q { 1.0 } else { 0.0 }).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn quadrature_examples() {
        let z2 = haar_quadrature(&GroupSpec::zn(2).unwrap(), 1);
        assert_eq!(z2, vec![(GroupElement::ZN { m: 0, n: 2 }, 0.5), (GroupElement::ZN { m: 1, n: 2 }, 0.5)]);
        let u1 = haar_quadrature(&GroupSpec::u1(), 4);
        let s: C64 = u1.iter().map(|(g, w)| g.defining_rep()[(0, 0)] * *w).sum();
        assert!(s.norm() < 1e-14);
        let su2 = GroupSpec::su2();
        let rule = haar_quadrature(&su2, 3);
        let wsum: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((wsum - 1.0).abs() < 1e-14);
        let chi2: f64 = rule.iter().map(|(g, w)| w * g.defining_rep().trace().re.powi(2)).sum();
        assert!((chi2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schur_orthogonality() {
        let cutoff = 3;
        for (spec, order) in [(GroupSpec::zn(4).unwrap(), 1), (GroupSpec::u1(), 2 * cutoff + 1), (GroupSpec::su2(), 2 * cutoff + 1)] {
            let rule = haar_quadrature(&spec, order as usize);
            let irreps = irreps_up_to(&spec, cutoff);
            let mats: Vec<Vec<Mat>> = rule.iter().map(|(g, _)| irreps.iter().map(|p| irrep_matrix(&spec, p, g)).collect()).collect();
            for (a, pa) in irreps.iter().enumerate() {
                for (b, pb) in irreps.iter().enumerate() {
                    for m in 0..pa.dim {
                        for n in 0..pa.dim {
                            for p in 0..pb.dim {
                                for q in 0..pb.dim {
                                    let v: C64 = rule.iter().zip(&mats).map(|((_, w), ms)| ms[a][(m, n)] * ms[b][(p, q)].conj() * *w).sum();
                                    let expect = if a == b && m == p && n == q { 1.0 / pa.dim as f64 } else { 0.0 };
                                    assert!((v - c(expect, 0.0)).norm() < 1e-9, "{:?} {a} {b}", spec);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quaternion_normalization_enforced() {
        assert!(GroupElement::su2([1.0, 1.0, 0.0, 0.0]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = GroupSpec::su2().random(&mut rng);
        assert!(is_special_unitary(&g.defining_rep(), 1e-12));
    }
}
