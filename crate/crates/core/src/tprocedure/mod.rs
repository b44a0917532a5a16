//! Constraint reduction on finite-dimensional operator algebras.
//!
//! Input: a *-algebra `F ⊆ M_d(ℂ)` and unitary constraints `U ∈ F`. Output:
//! - the Dirac subspace, the joint fixed space of all `U`, with projector
//!   `Q` and complement `P = 1 − Q`;
//! - the left ideal `N = span F(U − 1)`;
//! - `D = N ∩ N*`;
//! - `O = {A ∈ F : PAQ = 0 = QAP}`;
//! - `R`, the compression `A ↦ QAQ` of `O`, whose kernel on `O` is `D`.
//!
//! Every identity relating these objects is also verified numerically and
//! returned as a list of [`Check`]s. Bilinear properties (ideal, closure)
//! are tested on random elements, which detects a violation with
//! probability one.

mod local;
mod span;

pub use local::{local_system, nesting_check, LocalSystem, NestingReport, SystemSummary};
pub use span::{Ambient, GradedSpan, SpanComparison, MAX_AMBIENT, MAX_BLOCK, SPAN_REL_TOL};

use crate::error::{LgkError, Result};
use crate::linalg::{
    kernel_projector, sp_adjoint, sp_commutator, sp_from_dense, sp_identity, sp_mul, sp_norm, sp_sub, sp_to_dense, sp_unitarity_residual,
    Mat, SpMat,
};
use crate::verify::Check;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tolerance for span equalities and residual checks.
pub const CHECK_TOL: f64 = 1e-9;
/// Tolerance for the unitarity of constraint matrices.
pub const UNITARY_TOL: f64 = 1e-12;
/// Random samples used for bilinear checks.
const SAMPLES: usize = 4;
const SEED: u64 = 0x7e57;

/// A linear span of operators closed under adjoint and product.
#[derive(Debug, Clone)]
pub struct MatrixAlgebra {
    pub ambient: Ambient,
    pub span: GradedSpan,
}

impl MatrixAlgebra {
    pub fn full(ambient: Ambient) -> Self {
        let span = GradedSpan::full(&ambient);
        MatrixAlgebra { ambient, span }
    }

    /// Operators diagonal in the ambient basis.
    pub fn diagonal(ambient: Ambient) -> Self {
        let d = ambient.dim();
        let units: Vec<SpMat> = (0..d).map(|a| crate::linalg::sp_from_triplets(d, d, vec![(a, a, crate::linalg::ONE)])).collect();
        let span = GradedSpan::from_ops(&ambient, &units);
        MatrixAlgebra { ambient, span }
    }

    /// The *-algebra generated by `gens`: the span of all words in the
    /// generators and their adjoints, grown by right multiplication until
    /// the dimension is stable.
    pub fn generated(ambient: Ambient, gens: &[SpMat]) -> Result<Self> {
        let mut all: Vec<SpMat> = gens.to_vec();
        all.extend(gens.iter().map(sp_adjoint));
        let mut span = GradedSpan::from_ops(&ambient, &all);
        let rounds = ambient.dim() * ambient.dim() + 1;
        for _ in 0..rounds {
            let grown = span.sum(&span.image(&ambient, |x| all.iter().map(|g| sp_mul(x, g)).collect()));
            if grown.dim() == span.dim() {
                return Ok(MatrixAlgebra { ambient, span });
            }
            span = grown;
        }
        Err(LgkError::CapExceeded("algebra closure did not stabilize".into()))
    }

    /// Wrap a span known to be an algebra; see [`MatrixAlgebra::closure_residual`].
    pub fn from_span(ambient: Ambient, span: GradedSpan) -> Self {
        MatrixAlgebra { ambient, span }
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient.dim() * self.ambient.dim()
    }

    pub fn contains_residual(&self, op: &SpMat) -> f64 {
        self.span.op_residual(&self.ambient, op)
    }

    /// Largest distance from the span of `XY` and `X*` for random elements.
    pub fn closure_residual(&self) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut worst: f64 = 0.0;
        for _ in 0..SAMPLES {
            let x = self.span.random_element(&self.ambient, &mut rng);
            let y = self.span.random_element(&self.ambient, &mut rng);
            let scale = (sp_norm(&x) * sp_norm(&y)).max(1e-300);
            worst = worst.max(self.contains_residual(&sp_mul(&x, &y)) / scale);
            worst = worst.max(self.contains_residual(&sp_adjoint(&x)) / sp_norm(&x).max(1e-300));
        }
        worst
    }

    fn same_ambient(&self, other: &MatrixAlgebra) -> bool {
        self.ambient.dim() == other.ambient.dim()
            && self.ambient.num_blocks() == other.ambient.num_blocks()
            && (0..self.ambient.num_blocks()).all(|b| self.ambient.block_key(b) == other.ambient.block_key(b))
    }
}

/// Unitaries `U` defining the constraints `U − 1`.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    pub dim: usize,
    pub unitaries: Vec<SpMat>,
}

impl ConstraintSet {
    pub fn new(dim: usize, unitaries: Vec<SpMat>) -> Result<Self> {
        for (index, u) in unitaries.iter().enumerate() {
            if u.nrows() != dim || u.ncols() != dim {
                return Err(LgkError::DimensionMismatch { expected: dim, got: u.nrows() });
            }
            let residual = sp_unitarity_residual(u);
            if residual > UNITARY_TOL {
                return Err(LgkError::NotUnitary { index, residual });
            }
        }
        Ok(ConstraintSet { dim, unitaries })
    }

    pub fn empty(dim: usize) -> Self {
        ConstraintSet { dim, unitaries: Vec::new() }
    }

    /// The constraints `U − 1`.
    pub fn constraints(&self) -> Vec<SpMat> {
        self.unitaries.iter().map(|u| sp_sub(u, &sp_identity(self.dim))).collect()
    }
}

/// Projector `Q` onto the joint fixed space of the constraint unitaries.
pub fn dirac_subspace(c: &ConstraintSet) -> Mat {
    let ms: Vec<Mat> = c.constraints().iter().map(sp_to_dense).collect();
    kernel_projector(&ms, c.dim, 1e-8)
}

fn check_constraints_in(f: &MatrixAlgebra, c: &ConstraintSet) -> Result<f64> {
    if c.dim != f.ambient.dim() {
        return Err(LgkError::DimensionMismatch { expected: f.ambient.dim(), got: c.dim });
    }
    let mut worst: f64 = 0.0;
    for (index, u) in c.unitaries.iter().enumerate() {
        let residual = f.contains_residual(u);
        if residual > CHECK_TOL {
            return Err(LgkError::ConstraintOutsideAlgebra { index, residual });
        }
        worst = worst.max(residual);
    }
    Ok(worst)
}

/// `N = span{A(U − 1) : A ∈ F, U ∈ C}`.
pub fn left_ideal(f: &MatrixAlgebra, c: &ConstraintSet) -> Result<GradedSpan> {
    check_constraints_in(f, c)?;
    let cs = c.constraints();
    Ok(f.span.image(&f.ambient, |a| cs.iter().map(|x| sp_mul(a, x)).collect()))
}

/// Outputs of the reduction with the verified identities.
#[derive(Debug, Clone)]
pub struct ConstraintData {
    /// Projector onto the Dirac subspace.
    pub dirac_projector: SpMat,
    pub dirac_rank: usize,
    pub n: GradedSpan,
    pub d: GradedSpan,
    pub o: GradedSpan,
    pub r: GradedSpan,
    pub checks: Vec<Check>,
}

impl ConstraintData {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Largest relative distance from `space` of `x·y` (and `y·x` when
/// `both_sides`) for random `x ∈ left`, `y ∈ right`.
fn product_residual(amb: &Ambient, left: &GradedSpan, right: &GradedSpan, target: &GradedSpan, both_sides: bool) -> f64 {
    if left.dim() == 0 || right.dim() == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let x = left.random_element(amb, &mut rng);
        let y = right.random_element(amb, &mut rng);
        let scale = (sp_norm(&x) * sp_norm(&y)).max(1e-300);
        worst = worst.max(target.op_residual(amb, &sp_mul(&x, &y)) / scale);
        if both_sides {
            worst = worst.max(target.op_residual(amb, &sp_mul(&y, &x)) / scale);
        }
    }
    worst
}

/// Full reduction of `(F, C)`.
pub fn constraint_data(f: &MatrixAlgebra, c: &ConstraintSet) -> Result<ConstraintData> {
    let amb = &f.ambient;
    let in_f = check_constraints_in(f, c)?;
    let q_dense = dirac_subspace(c);
    let dirac_rank = q_dense.trace().re.round() as usize;
    if dirac_rank == 0 {
        return Err(LgkError::SecondClass);
    }
    let q = sp_from_dense(&q_dense, 1e-14);
    let p = sp_sub(&sp_identity(amb.dim()), &q);
    let cs = c.constraints();

    let n = f.span.image(amb, |a| cs.iter().map(|x| sp_mul(a, x)).collect());
    let d = n.intersect(&n.adjoint(amb));
    let o = f.span.kernel(amb, |a| vec![sp_mul(&sp_mul(&p, a), &q), sp_mul(&sp_mul(&q, a), &p)])?;
    let compress = |a: &SpMat| vec![sp_mul(&sp_mul(&q, a), &q)];
    let r = o.image(amb, compress);
    let compression_kernel = o.kernel(amb, compress)?;

    let mut checks = vec![Check::residual("constraints lie in F", in_f, CHECK_TOL)];
    let n_on_dirac = n.ops(amb).iter().map(|x| sp_norm(&sp_mul(x, &q))).fold(0.0, f64::max);
    checks.push(Check::residual("N annihilates the Dirac subspace", n_on_dirac, CHECK_TOL));
    let annihilator = f.span.kernel(amb, |a| vec![sp_mul(a, &q)])?;
    checks.push(Check::span("N equals {A in F : AQ = 0}", n.compare(&annihilator), CHECK_TOL));
    checks.push(Check::residual("F N is contained in N", product_residual(amb, &f.span, &n, &n, false), CHECK_TOL));
    checks.push(Check::residual("D is contained in O", o.containment_residual(&d), CHECK_TOL));
    checks.push(Check::residual("D is a two-sided ideal of O", product_residual(amb, &o, &d, &d, true), CHECK_TOL));
    let block = o.ops(amb).iter().map(|a| sp_norm(&sp_mul(&sp_mul(&p, a), &q)) + sp_norm(&sp_mul(&sp_mul(&q, a), &p))).fold(0.0, f64::max);
    checks.push(Check::residual("O is block diagonal for Q", block, 1e-10));
    let commutant = f.span.kernel(amb, |a| vec![sp_commutator(a, &q)])?;
    checks.push(Check::span("O equals the commutant of Q in F", o.compare(&commutant), CHECK_TOL));
    let multiplier = f.span.kernel_modulo(amb, &d, |a| c.unitaries.iter().map(|u| sp_commutator(a, u)).collect())?;
    checks.push(Check::span("O equals {A in F : [A, U] in D}", o.compare(&multiplier), CHECK_TOL));
    checks.push(Check::span("kernel of the compression on O equals D", compression_kernel.compare(&d), CHECK_TOL));
    checks.push(Check::count("dim R = dim O - dim D", r.dim(), o.dim() - d.dim().min(o.dim())));
    Ok(ConstraintData { dirac_projector: q, dirac_rank, n, d, o, r, checks })
}

/// `C′ ∩ F`: elements of `F` commuting with every constraint unitary.
pub fn traditional_observables(f: &MatrixAlgebra, c: &ConstraintSet) -> Result<GradedSpan> {
    check_constraints_in(f, c)?;
    f.span.kernel(&f.ambient, |a| c.unitaries.iter().map(|u| sp_commutator(a, u)).collect())
}

/// Comparison of the traditional observables with the reduction.
#[derive(Debug, Clone)]
pub struct TraditionalReport {
    pub dim: usize,
    /// Distance of `C′ ∩ F` from `O`.
    pub in_o_residual: f64,
    /// Compression of `C′ ∩ F` to the Dirac subspace against `R`.
    pub compression: SpanComparison,
}

impl TraditionalReport {
    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::residual("traditional observables lie in O", self.in_o_residual, CHECK_TOL),
            Check::span("compressions of traditional observables and O agree", self.compression, CHECK_TOL),
        ]
    }
}

pub fn compare_traditional(f: &MatrixAlgebra, c: &ConstraintSet, data: &ConstraintData) -> Result<TraditionalReport> {
    let amb = &f.ambient;
    let trad = traditional_observables(f, c)?;
    let q = &data.dirac_projector;
    let compressed = trad.image(amb, |a| vec![sp_mul(&sp_mul(q, a), q)]);
    Ok(TraditionalReport { dim: trad.dim(), in_o_residual: data.o.containment_residual(&trad), compression: compressed.compare(&data.r) })
}

/// `N_F ∩ A = N_A`, `D_F ∩ A = D_A`, `O_F ∩ A = O_A` for `A ⊆ F`.
#[derive(Debug, Clone)]
pub struct SubsystemReport {
    pub n: SpanComparison,
    pub d: SpanComparison,
    pub o: SpanComparison,
}

impl SubsystemReport {
    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::span("N_F restricted to A equals N_A", self.n, CHECK_TOL),
            Check::span("D_F restricted to A equals D_A", self.d, CHECK_TOL),
            Check::span("O_F restricted to A equals O_A", self.o, CHECK_TOL),
        ]
    }
}

pub fn subsystem_check(a: &MatrixAlgebra, f: &MatrixAlgebra, c: &ConstraintSet) -> Result<SubsystemReport> {
    if !a.same_ambient(f) {
        return Err(LgkError::NotNested("algebras live on different ambient spaces".into()));
    }
    let outside = f.span.containment_residual(&a.span);
    if outside > CHECK_TOL {
        return Err(LgkError::NotNested(format!("A is not contained in F (residual {outside:e})")));
    }
    let data_f = constraint_data(f, c)?;
    let data_a = constraint_data(a, c)?;
    Ok(SubsystemReport {
        n: data_f.n.intersect(&a.span).compare(&data_a.n),
        d: data_f.d.intersect(&a.span).compare(&data_a.d),
        o: data_f.o.intersect(&a.span).compare(&data_a.o),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c as cx, sp_diag, sp_from_triplets, ONE};

    fn unit(d: usize, a: usize, b: usize) -> SpMat {
        sp_from_triplets(d, d, vec![(a, b, ONE)])
    }

    fn diag_u(d: &[f64]) -> SpMat {
        sp_diag(&d.iter().map(|t| crate::linalg::C64::from_polar(1.0, *t)).collect::<Vec<_>>())
    }

    #[test]
    fn dirac_subspace_examples() {
        assert!((dirac_subspace(&ConstraintSet::empty(3)) - Mat::identity(3, 3)).norm() < 1e-14);
        let c = ConstraintSet::new(2, vec![sp_diag(&[ONE, -ONE])]).unwrap();
        let q = dirac_subspace(&c);
        assert!((q[(0, 0)] - ONE).norm() < 1e-14 && q[(1, 1)].norm() < 1e-14);
        assert!(matches!(ConstraintSet::new(2, vec![sp_diag(&[ONE, cx(2.0, 0.0)])]), Err(LgkError::NotUnitary { .. })));
    }

    #[test]
    fn two_by_two_reduction() {
        let f = MatrixAlgebra::full(Ambient::trivial(2).unwrap());
        let c = ConstraintSet::new(2, vec![sp_diag(&[ONE, -ONE])]).unwrap();
        let n = left_ideal(&f, &c).unwrap();
        // Oracle: first column zero.
        assert_eq!(n.dim(), 2);
        assert!(n.op_residual(&f.ambient, &unit(2, 0, 1)) < 1e-12 && n.op_residual(&f.ambient, &unit(2, 1, 1)) < 1e-12);
        let data = constraint_data(&f, &c).unwrap();
        assert_eq!((data.d.dim(), data.o.dim(), data.r.dim()), (1, 2, 1));
        assert!(data.d.op_residual(&f.ambient, &unit(2, 1, 1)) < 1e-12);
        assert!(data.passed(), "{:?}", data.checks);
        let trad = compare_traditional(&f, &c, &data).unwrap();
        assert_eq!(trad.dim, 2);
        assert!(trad.checks().iter().all(Check::passed));
    }

    #[test]
    fn empty_constraints() {
        let f = MatrixAlgebra::full(Ambient::trivial(3).unwrap());
        let c = ConstraintSet::empty(3);
        let data = constraint_data(&f, &c).unwrap();
        assert_eq!((data.n.dim(), data.d.dim(), data.o.dim(), data.r.dim()), (0, 0, 9, 9));
        assert!(data.passed());
        assert_eq!(traditional_observables(&f, &c).unwrap().dim(), 9);
    }

    #[test]
    fn second_class_and_outside_algebra() {
        let f = MatrixAlgebra::full(Ambient::trivial(2).unwrap());
        let scalar = ConstraintSet::new(2, vec![sp_diag(&[-ONE, -ONE])]).unwrap();
        assert_eq!(constraint_data(&f, &scalar).unwrap_err(), LgkError::SecondClass);
        let diag = MatrixAlgebra::diagonal(Ambient::trivial(2).unwrap());
        let swap = ConstraintSet::new(2, vec![sp_from_triplets(2, 2, vec![(0, 1, ONE), (1, 0, ONE)])]).unwrap();
        assert!(matches!(left_ideal(&diag, &swap), Err(LgkError::ConstraintOutsideAlgebra { .. })));
    }

    #[test]
    fn generated_algebras() {
        let amb = Ambient::trivial(3).unwrap();
        // A cyclic shift generates the diagonal algebra of its eigenbasis: dim 3.
        let shift = sp_from_triplets(3, 3, vec![(1, 0, ONE), (2, 1, ONE), (0, 2, ONE)]);
        let a = MatrixAlgebra::generated(amb.clone(), &[shift]).unwrap();
        assert_eq!(a.dim(), 3);
        assert!(a.closure_residual() < 1e-12);
        // A nilpotent matrix unit generates a non-unital copy of M_2.
        let b = MatrixAlgebra::generated(amb.clone(), &[unit(3, 0, 1)]).unwrap();
        assert_eq!(b.dim(), 4);
        assert!(b.contains_residual(&unit(3, 2, 2)) > 0.5);
        assert!(MatrixAlgebra::generated(amb, &[unit(3, 0, 1), unit(3, 1, 2)]).unwrap().is_full());
    }

    #[test]
    fn subsystem_diagonal_in_full() {
        let amb = Ambient::trivial(2).unwrap();
        let a = MatrixAlgebra::diagonal(amb.clone());
        let f = MatrixAlgebra::full(amb);
        let c = ConstraintSet::new(2, vec![sp_diag(&[ONE, -ONE])]).unwrap();
        let rep = subsystem_check(&a, &f, &c).unwrap();
        assert!(rep.checks().iter().all(Check::passed), "{rep:?}");
        assert!(subsystem_check(&f, &a, &c).is_err());
        let same = subsystem_check(&f, &f, &c).unwrap();
        assert!(same.checks().iter().all(Check::passed));
    }

    #[test]
    fn random_nested_pair_without_constraints() {
        let amb = Ambient::trivial(4).unwrap();
        let a = MatrixAlgebra::generated(amb.clone(), &[diag_u(&[0.3, 1.1, 0.3, 2.0]), unit(4, 0, 2)]).unwrap();
        let f = MatrixAlgebra::generated(amb, &[diag_u(&[0.3, 1.1, 0.3, 2.0]), unit(4, 0, 2), unit(4, 1, 3)]).unwrap();
        let c = ConstraintSet::empty(4);
        let rep = subsystem_check(&a, &f, &c).unwrap();
        assert_eq!(rep.n.dim_left, 0);
        assert!(rep.checks().iter().all(Check::passed));
    }
}
