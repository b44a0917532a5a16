//! Property tests over random instances.

#![allow(clippy::needless_range_loop)]

use lgk_core::fermion_space::{annihilator, build_fock_space, creator, MatterSpec};
use lgk_core::gauge_action::{build_kinematic_space, full_gauge_unitary, GaugeTransformation};
use lgk_core::gauge_group::{clebsch_gordan, irrep_matrix, irreps_up_to, GroupElement, GroupSpec};
use lgk_core::lattice::{build_lattice, is_subregion, Region};
use lgk_core::linalg::{c, sp_anticommutator, sp_diag, sp_dist, sp_from_dense, sp_identity, sp_mul, sp_norm, sp_scale, Mat, Vector, C64};
use lgk_core::solver::{eigs, SpectrumRequest};
use lgk_core::verify::lattice_checks;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn group() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![(2u32..6).prop_map(|n| GroupSpec::zn(n).unwrap()), Just(GroupSpec::u1()), Just(GroupSpec::su2())]
}

fn region() -> impl Strategy<Value = Region> {
    (prop::array::uniform3(-2i64..2), prop::array::uniform3(0i64..3))
        .prop_map(|(lo, ext)| Region::new(lo, [lo[0] + ext[0], lo[1] + ext[1], lo[2] + ext[2]]).unwrap())
}

fn vector(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(|v| Vector::from_iterator(v.len(), v.into_iter().map(|(a, b)| c(a, b))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn irreps_are_unitary_homomorphisms(spec in group(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, h) = (spec.random(&mut rng), spec.random(&mut rng));
        for pi in irreps_up_to(&spec, 3) {
            let (mg, mh) = (irrep_matrix(&spec, &pi, &g), irrep_matrix(&spec, &pi, &h));
            let prod = irrep_matrix(&spec, &pi, &g.mul(&h));
            prop_assert!((prod - &mg * &mh).norm() < 1e-11);
            prop_assert!((mg.adjoint() * &mg - Mat::identity(pi.dim, pi.dim)).norm() < 1e-11);
            prop_assert!((irrep_matrix(&spec, &pi, &g.inverse()) - mg.adjoint()).norm() < 1e-11);
        }
    }

    #[test]
    fn clebsch_gordan_columns_are_orthonormal(a in 0u32..4, b in 0u32..4) {
        let (d1, d2) = (a as usize + 1, b as usize + 1);
        let mut cols: Vec<Vec<f64>> = Vec::new();
        for big in ((a as i64 - b as i64).unsigned_abs() as u32..=a + b).step_by(2) {
            let t = clebsch_gordan(a, b, big);
            for im in 0..=big as usize {
                cols.push((0..d1 * d2).map(|k| t[k / d2][k % d2][im]).collect());
            }
        }
        prop_assert_eq!(cols.len(), d1 * d2);
        for (i, u) in cols.iter().enumerate() {
            for (j, v) in cols.iter().enumerate() {
                let dot: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lattice_invariants(r in region()) {
        let g = build_lattice(r);
        for check in lattice_checks(&g) {
            prop_assert!(check.passed(), "{:?}", check);
        }
    }

    #[test]
    fn envelopes_grow_with_the_region(r in region(), shrink in prop::array::uniform3(0i64..2)) {
        let g = build_lattice(r);
        let hi = [0, 1, 2].map(|a| (r.hi[a] - shrink[a]).max(r.lo[a]));
        let inner = Region::new(r.lo, hi).unwrap();
        prop_assert!(is_subregion(&inner, &r));
        let (ei, eo) = (g.envelope(&inner).unwrap(), g.envelope(&r).unwrap());
        prop_assert!(ei.is_subset(&eo));
        prop_assert!(inner.points().iter().all(|x| ei.contains(x)));
    }

    #[test]
    fn car_relations(f in vector(6), g in vector(6)) {
        let u1 = GroupSpec::u1();
        let sites = build_lattice(Region::new([0, 0, 0], [2, 0, 0]).unwrap()).sites;
        let fock = build_fock_space(&sites, MatterSpec::new(2, &u1));
        let af = annihilator(&fock, &f).unwrap();
        let ag = annihilator(&fock, &g).unwrap();
        let ag_star = creator(&fock, &g).unwrap();
        let id = sp_identity(fock.dim);
        prop_assert!(sp_dist(&sp_anticommutator(&af, &ag_star), &sp_scale(&id, f.dotc(&g))) < 1e-12);
        prop_assert!(sp_norm(&sp_anticommutator(&af, &ag)) < 1e-12);
    }

    #[test]
    fn gauge_unitaries_compose(spec in group(), seed in any::<u64>()) {
        let lattice = build_lattice(Region::new([0, 0, 0], [1, 0, 0]).unwrap());
        let matter = MatterSpec::new(1, &spec);
        let space = build_kinematic_space(lattice, spec, 1, Some(matter));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all = [0, 1];
        let g1 = GaugeTransformation::random_supported(&spec, 2, &all, &mut rng);
        let g2 = GaugeTransformation::random_supported(&spec, 2, &all, &mut rng);
        let lhs = full_gauge_unitary(&space, &g1.compose(&g2));
        let rhs = sp_mul(&full_gauge_unitary(&space, &g1), &full_gauge_unitary(&space, &g2));
        prop_assert!(sp_dist(&lhs, &rhs) < 1e-10);
    }

    /// Degenerate diagonal spectra: Lanczos must return every copy.
    #[test]
    fn lanczos_matches_dense_with_multiplicities(levels in prop::collection::vec(0i32..4, 6..30), k in 1usize..5, seed in any::<u64>()) {
        let d: Vec<C64> = levels.iter().map(|&l| c(l as f64, 0.0)).collect();
        let h = sp_diag(&d);
        let k = k.min(d.len());
        let lan = eigs(&SpectrumRequest::lanczos(&h, k, 1e-9, seed)).unwrap();
        let dense = eigs(&SpectrumRequest::dense(&h)).unwrap();
        prop_assert_eq!(lan.eigenvalues.len(), k);
        for (a, b) in lan.eigenvalues.iter().zip(&dense.eigenvalues) {
            prop_assert!((a - b).abs() < 1e-8, "{:?} vs {:?}", lan.eigenvalues, dense.eigenvalues);
        }
    }

    #[test]
    fn lanczos_matches_dense_on_random_hermitian(entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 400), seed in any::<u64>()) {
        let n = 20;
        let m = Mat::from_fn(n, n, |i, j| c(entries[i * n + j].0, entries[i * n + j].1));
        let h = sp_from_dense(&((&m + m.adjoint()) * c(0.5, 0.0)), 0.0);
        let lan = eigs(&SpectrumRequest::lanczos(&h, 3, 1e-9, seed)).unwrap();
        let dense = eigs(&SpectrumRequest::dense(&h)).unwrap();
        for (a, b) in lan.eigenvalues.iter().zip(&dense.eigenvalues) {
            prop_assert!((a - b).abs() < 1e-8);
        }
        prop_assert!(lan.residuals.iter().all(|&r| r < 1e-9));
    }
}

#[test]
fn su2_inverse_is_adjoint_of_defining_rep() {
    let g = GroupElement::su2([0.6, 0.0, 0.8, 0.0]).unwrap();
    let m = g.defining_rep();
    assert!((g.inverse().defining_rep() - m.adjoint()).norm() < 1e-15);
}
