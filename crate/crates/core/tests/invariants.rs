use pt_liouville::perturbation::heuristic_gamma_pt;
use pt_liouville::threshold::TAU_REL;
use pt_liouville::{
    build_superoperator, check_pt, dissipator_traceless, eig_biortho, find_gamma_pt, identity_vector,
    propagator, pt_partner_check, scaling_study, steady_state, verify_d2, xxz_liouvillian, xxz_model, xxz_parity,
    CMatrix, Cplx, Error, Sector, ThresholdOutcome, XxzFamily, XxzParams,
};

fn p(n: usize, gamma: f64) -> XxzParams<f64> {
    XxzParams::new(n, 0.5, 1.0, gamma).unwrap()
}

#[test]
fn superoperator_matches_direct_action() {
    let m = xxz_model(&p(3, 0.4)).unwrap();
    let l = build_superoperator(&m);
    let rho = CMatrix::from_fn(8, 8, |j, k| Cplx::new((j * 3 + k) as f64 * 0.01, j as f64 - k as f64));
    let via_matrix = l.apply(&rho);
    let direct = m.apply(&rho);
    assert!(via_matrix.max_abs_diff(&direct) < 1e-12);
}

#[test]
fn trace_is_preserved() {
    let l = build_superoperator(&xxz_model(&p(3, 0.7)).unwrap());
    let one = identity_vector(&l);
    let left = l.matrix().dagger().matvec(&one);
    assert!(left.iter().all(|z| z.norm() < 1e-12));
}

#[test]
fn sector_spectrum_is_a_subset_of_full() {
    let pp = p(3, 0.3);
    let full = eig_biortho(&xxz_liouvillian(&pp, Sector::Full).unwrap()).unwrap();
    let sec = eig_biortho(&xxz_liouvillian(&pp, Sector::DMZ0).unwrap()).unwrap();
    assert_eq!(sec.len(), 20);
    for &z in &sec.eigenvalues {
        let (_, d) = full.nearest(z).unwrap();
        assert!(d < 1e-9, "{z} missing from full spectrum");
    }
}

#[test]
fn pt_symmetry_implies_d2_on_random_points() {
    for (n, g) in [(2, 0.05), (3, 1.3), (4, 0.2)] {
        let l = xxz_liouvillian(&p(n, g), Sector::Full).unwrap();
        let rep = check_pt(&l, &xxz_parity(n).unwrap()).unwrap();
        assert!(rep.pt_residual < 1e-12);
        let dec = eig_biortho(&l).unwrap();
        let d2 = verify_d2(&dec, dec.gamma_bar);
        assert!(d2.max_v_pairing_error < 1e-8 * d2.spectral_radius);
        assert!(d2.max_h_pairing_error < 1e-8 * d2.spectral_radius);
        let partners = pt_partner_check(&dec, &xxz_parity(n).unwrap()).unwrap();
        assert!(partners.max_vector_error < 1e-8, "n={n}: {partners:?}");
    }
}

#[test]
fn steady_state_is_fixed_by_propagator() {
    let l = xxz_liouvillian(&p(3, 0.5), Sector::Full).unwrap();
    let ss = steady_state(&eig_biortho(&l).unwrap()).unwrap();
    let u = propagator(&l, 2.0).unwrap();
    let v = l.vectorize(&ss.rho);
    let w = u.matrix().matvec(&v);
    let err: f64 = v.iter().zip(&w).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-10);
    assert!((ss.rho.trace().re - 1.0).abs() < 1e-12);
}

#[test]
fn single_precision_instantiation() {
    let pp = XxzParams::<f32>::new(3, 0.5, 1.0, 0.3).unwrap();
    let l = xxz_liouvillian(&pp, Sector::Full).unwrap();
    let rep = check_pt(&l, &xxz_parity::<f32>(3).unwrap()).unwrap();
    assert!(rep.pt_residual < 1e-5);
    let dec = eig_biortho(&l).unwrap();
    let ss = steady_state(&dec).unwrap();
    assert!(ss.eigenvalue.norm() < 1e-3);
    assert!(dec.eigenvalues.iter().all(|z| z.re < 1e-3));
}

#[test]
fn threshold_search_is_reproducible() {
    let fam = XxzFamily { n: 4, delta: 0.5, mu: 1.0 };
    let a = find_gamma_pt(&fam, Sector::DMZ0, 1e-3, 10.0, 1e-3, TAU_REL).unwrap();
    let b = find_gamma_pt(&fam, Sector::DMZ0, 1e-3, 10.0, 1e-3, TAU_REL).unwrap();
    assert_eq!(a, b);
    let (lo, hi) = a.bracket;
    assert!(hi / lo - 1.0 <= 1e-3);
    let (below, _) = pt_liouville::is_unbroken(&fam.at(lo).unwrap(), Sector::DMZ0, TAU_REL).unwrap();
    assert!(below);
    assert!(a.gamma_pt > 0.02 && a.gamma_pt < 0.2);
}

#[test]
fn threshold_reports_invalid_bracket() {
    let fam = XxzFamily { n: 2, delta: 0.5, mu: 1.0 };
    match find_gamma_pt(&fam, Sector::DMZ0, 1e-3, 10.0, 1e-3, TAU_REL) {
        Err(Error::BracketInvalid(msg)) => assert!(msg.starts_with("unbroken")),
        other => panic!("expected an invalid bracket, got {other:?}"),
    }
}

#[test]
fn heuristic_tracks_scanned_threshold() {
    let study = scaling_study(&[2, 3, 4], 0.5, 1.0, (1e-3, 10.0), 1e-3).unwrap();
    let h: Vec<f64> = study.entries.iter().map(|e| e.heuristic).collect();
    assert!(h.windows(2).all(|w| w[1] < w[0]), "{h:?}");
    for e in &study.entries {
        if let ThresholdOutcome::Bracketed(r) = &e.outcome {
            let ratio = e.heuristic / r.gamma_pt;
            assert!((0.01..=100.0).contains(&ratio), "n={}: ratio {ratio}", e.n);
        }
    }
}

#[test]
fn heuristic_rejects_flat_hamiltonian() {
    let m = pt_liouville::LindbladModel::new(CMatrix::<f64>::identity(2), vec![pt_liouville::Pauli::Minus.matrix()], 1.0)
        .unwrap();
    let d = dissipator_traceless(&m).unwrap();
    assert!(matches!(heuristic_gamma_pt(&d, m.hamiltonian()), Err(Error::DegenerateSpectrumSpan)));
}
