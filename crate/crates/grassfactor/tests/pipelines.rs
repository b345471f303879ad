use grassfactor::backend::{haar_special, rng_from_seed};
use grassfactor::decompose::{decompose_so, decompose_su, decompose_su_signature};
use grassfactor::grassmann::gr_validate;
use grassfactor::phi::{member_phi2, reflection_length};
use grassfactor::symplectic::{
    decompose_sp_four, psi1, psi2, sp_two_involutions_base, spgr_from_conjugation, spgr_validate,
};
use grassfactor::Error;
use nalgebra::DMatrix;
use num_complex::Complex64;

#[test]
fn so_halves_are_members_of_the_two_factor_set() {
    let mut rng = rng_from_seed(21);
    for n in 2..12 {
        let z = haar_special::<f64, _>(n, &mut rng);
        let f = decompose_so(&z, 1e-9).unwrap();
        let (a, b) = (f.factors[0].k, f.factors[1].k);
        assert!(member_phi2(&z, a.max(b), a.min(b), 1e-9).unwrap());
    }
}

#[test]
fn su_factor_counts_respect_reflection_length() {
    let mut rng = rng_from_seed(22);
    for n in 2..10 {
        let z = haar_special::<Complex64, _>(n, &mut rng);
        let f = decompose_su(&z, 1e-9).unwrap();
        let total: usize = f.ks().iter().map(|k| n - k).sum();
        assert!(reflection_length(&z, 1e-9).unwrap() <= total);
        for x in &f.factors {
            assert!(gr_validate(&x.m, x.k, 1e-9).accepted);
        }
    }
}

#[test]
fn signature_route_agrees_with_generic_route() {
    let mut rng = rng_from_seed(23);
    let z = haar_special::<Complex64, _>(6, &mut rng);
    let a = decompose_su(&z, 1e-9).unwrap();
    let b = decompose_su_signature(&z, [3, 3, 3, 3], 1e-9).unwrap();
    assert!((a.product() - &z).norm() < 1e-9 && (b.product() - &z).norm() < 1e-9);
}

#[test]
fn realified_points_survive_the_projector_map() {
    let u = grassfactor::grassmann::gr_sample::<Complex64>(2, 5, 4).unwrap();
    let x = psi1(&u).unwrap();
    let g = psi2(&x).unwrap();
    assert!(spgr_validate(&x.m, 2, 1e-10).accepted);
    assert!((g.m - &x.m).norm() < 1e-10);
}

#[test]
fn four_symplectic_factors_of_a_conjugated_diagonal() {
    let d = [2.0, 3.0, 0.7];
    let mut diag = vec![Complex64::new(0.0, 0.0); 6];
    for (i, v) in d.iter().enumerate() {
        diag[i] = Complex64::new(*v, 0.0);
        diag[3 + i] = Complex64::new(1.0 / v, 0.0);
    }
    let x0 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    let q = grassfactor::symplectic::sp_sample::<Complex64>(3, 8).m;
    let x = &q * x0 * grassfactor::symplectic::sp_inverse(&q);
    let f = decompose_sp_four(&x, 1e-8).unwrap();
    assert_eq!(f.ks(), vec![1, 1, 1, 1]);
    assert!((f.product() - &x).norm() <= 1e-8 * 3.0);
}

#[test]
fn two_involution_base_only_covers_doubled_spectra() {
    let q = grassfactor::symplectic::sp_sample::<Complex64>(2, 1).m;
    let y = spgr_from_conjugation(&q, 1, 1e-9).unwrap();
    let generic = grassfactor::symplectic::sp_sample::<Complex64>(2, 2).m;
    assert!(matches!(sp_two_involutions_base(&generic, 1e-9), Err(Error::NonGeneric(_))));
    // Y·Y' for two symplectic involutions of half-rank 1 always splits back
    let y2 = spgr_from_conjugation(&grassfactor::symplectic::sp_sample::<Complex64>(2, 3).m, 1, 1e-9).unwrap();
    let x = &y.m * &y2.m;
    let pair = sp_two_involutions_base(&x, 1e-8).unwrap();
    let back = (&pair.y1.m * &pair.y2.m) * Complex64::new(pair.sign as f64, 0.0);
    assert!((back - x).norm() < 1e-7);
}
