use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed};

use pt_liouville::spectral::classify_values;
use pt_liouville::threshold::TAU_REL;
use pt_liouville::xxz::ladder_liouvillian;
use pt_liouville::{
    build_superoperator, check_inversion, check_pt, collinearity_error, dissipator, eig_biortho, hermiticity_residual,
    mat_exp, population_matrix, steady_state, verify_d2, xxz_liouvillian, xxz_model, xxz_parity, CMatrix, Cplx,
    LindbladModel, Sector, XxzParams,
};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(0x1ab1ad),
        failure_persistence: None,
        ..Config::default()
    }
}

fn xxz_params() -> impl Strategy<Value = XxzParams<f64>> {
    (2usize..=4, -2.0..2.0f64, -1.0..=1.0f64, 0.001..3.0f64)
        .prop_map(|(n, delta, mu, gamma)| XxzParams::new(n, delta, mu, gamma).unwrap())
}

fn cmatrix(n: usize) -> impl Strategy<Value = CMatrix<f64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n)
        .prop_map(move |v| CMatrix::from_fn(n, n, |j, k| Cplx::new(v[j * n + k].0, v[j * n + k].1)))
}

/// Random Hermitian `H` and Lindblad operators scaled so that `Tr D = −N²`.
fn random_model() -> impl Strategy<Value = LindbladModel<f64>> {
    (2usize..=4, 1usize..=3, 0.01..2.0f64)
        .prop_flat_map(|(n, count, gamma)| (cmatrix(n), prop::collection::vec(cmatrix(n), count), Just(gamma)))
        .prop_map(|(a, ls, gamma)| {
            let n = a.rows();
            let h = (&a + &a.dagger()).scale_real(0.5);
            let tr: f64 = ls
                .iter()
                .map(|l| 2.0 * l.trace().norm_sqr() - 2.0 * n as f64 * l.frobenius_norm().powi(2))
                .sum();
            let s = ((n * n) as f64 / -tr).sqrt();
            LindbladModel::new(h, ls.into_iter().map(|l| l.scale_real(s)).collect(), gamma).unwrap()
        })
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn xxz_pt_identity_holds(p in xxz_params()) {
        let l = xxz_liouvillian(&p, Sector::Full).unwrap();
        let rep = check_pt(&l, &xxz_parity(p.n).unwrap()).unwrap();
        prop_assert!(rep.pt_residual <= 1e-12, "residual {}", rep.pt_residual);
        prop_assert!(rep.involution_residual <= 1e-12);
    }

    #[test]
    fn ladder_matches_direct(p in xxz_params()) {
        let direct = build_superoperator(&xxz_model(&p).unwrap());
        let ladder = ladder_liouvillian(&p).unwrap();
        prop_assert!(direct.matrix().max_abs_diff(ladder.matrix()) <= 1e-12);
    }

    #[test]
    fn hermiticity_preserved(m in random_model()) {
        prop_assert!(hermiticity_residual(&build_superoperator(&m)).unwrap() <= 1e-13);
    }

    #[test]
    fn dissipator_trace_normalized(m in random_model()) {
        let n2 = (m.hilbert_dim() * m.hilbert_dim()) as f64;
        prop_assert!((dissipator(&m).trace().re + n2).abs() <= 1e-9 * n2);
    }

    #[test]
    fn spectrum_in_left_half_plane_with_conjugates(m in random_model()) {
        let l = build_superoperator(&m);
        let dec = eig_biortho(&l).unwrap();
        let scale = dec.matrix_norm.max(1.0);
        prop_assert!(dec.eigenvalues.iter().all(|z| z.re <= 1e-10 * scale));
        prop_assert!(verify_d2(&dec, dec.gamma_bar).max_h_error <= 1e-8 * scale);
        let sum: Cplx<f64> = dec.eigenvalues.iter().sum();
        prop_assert!((sum - l.trace()).norm() <= 1e-8 * scale * dec.len() as f64);
    }

    #[test]
    fn steady_state_is_a_density_matrix(m in random_model()) {
        let ss = steady_state(&eig_biortho(&build_superoperator(&m)).unwrap()).unwrap();
        prop_assert!((ss.rho.trace() - Cplx::new(1.0, 0.0)).norm() <= 1e-10);
        prop_assert!(ss.hermiticity_defect <= 1e-9);
        prop_assert!(ss.min_eigenvalue >= -1e-9);
        prop_assert!(ss.left_identity_error <= 1e-8);
    }

    #[test]
    fn population_matrix_conserves_probability(m in random_model()) {
        let r = population_matrix(&m).unwrap();
        let n = m.hilbert_dim();
        prop_assert!(r.column_sum_defect() <= 1e-10);
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    prop_assert!(r.v[(j, k)].re >= -1e-12);
                }
            }
        }
    }

    #[test]
    fn classification_ignores_order(m in random_model()) {
        let dec = eig_biortho(&build_superoperator(&m)).unwrap();
        let mut rev = dec.eigenvalues.clone();
        rev.reverse();
        let a = classify_values(&dec.eigenvalues, dec.gamma_bar, TAU_REL).unwrap();
        let b = classify_values(&rev, dec.gamma_bar, TAU_REL).unwrap();
        prop_assert_eq!(
            (a.on_h.len(), a.on_v.len(), a.off_cross.len()),
            (b.on_h.len(), b.on_v.len(), b.off_cross.len())
        );
    }

    #[test]
    fn exponential_inverse(m in random_model(), t in 0.01..1.0f64) {
        let x = build_superoperator(&m).matrix().scale_real(t);
        let prod = &mat_exp(&x).unwrap() * &mat_exp(&x.scale_real(-1.0)).unwrap();
        let dim = x.rows();
        prop_assert!(prod.approx_eq(&CMatrix::identity(dim), 1e-10));
    }

    #[test]
    fn collinearity_is_scale_invariant(v in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..8), s in 0.1..10.0f64, ph in 0.0..std::f64::consts::TAU) {
        let x: Vec<Cplx<f64>> = v.iter().map(|&(a, b)| Cplx::new(a, b)).collect();
        prop_assume!(x.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6);
        let y: Vec<Cplx<f64>> = x.iter().map(|z| z * Cplx::from_polar(s, ph)).collect();
        prop_assert!(collinearity_error(&x, &y) <= 1e-12);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn propagator_inversion_holds(n in 2usize..=3, delta in -2.0..2.0f64, mu in -1.0..=1.0f64, gamma in 0.01..1.0f64, t in 0.05..1.0f64) {
        let l = xxz_liouvillian(&XxzParams::new(n, delta, mu, gamma).unwrap(), Sector::Full).unwrap();
        prop_assert!(check_inversion(&l, &xxz_parity(n).unwrap(), t).unwrap() <= 1e-8);
    }

    #[test]
    fn sector_spectra_obey_d2(n in 2usize..=4, gamma in 0.001..3.0f64) {
        let p = XxzParams::new(n, 0.5, 1.0, gamma).unwrap();
        let dec = eig_biortho(&xxz_liouvillian(&p, Sector::DMZ0).unwrap()).unwrap();
        let d2 = verify_d2(&dec, dec.gamma_bar);
        prop_assert!(d2.max_v_pairing_error <= 1e-8 * d2.spectral_radius);
        prop_assert!(d2.max_h_pairing_error <= 1e-8 * d2.spectral_radius);
    }
}
