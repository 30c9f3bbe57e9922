use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symadapt::fixtures;
use symadapt::mapping::MappingKind;
use symadapt::pauli::{CMatrix, PauliSum, PauliWord};
use symadapt::pipeline::QubitSystem;
use symadapt::spectral::{self, compare_spectra, diagonalize, eigenvalues, Transform};
use symadapt::symmetry::{
    lowdin_projector, project_hamiltonian, reflect_operator, reflect_singlet, shift_operator, sum_over_states,
    ProjectionForm,
};

fn lih() -> QubitSystem {
    QubitSystem::from_fixture(fixtures::LIH, MappingKind::Parity).unwrap()
}

fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[test]
fn lih_projector_rank_and_idempotency() {
    let sys = lih();
    let p = lowdin_projector(&sys.number_spec(2).unwrap()).unwrap();
    let m = p.to_matrix().unwrap();
    assert!((m.trace().re - 15.0).abs() < 1e-10);
    assert!(max_entry(&(&m * &m - &m)) < 1e-8);
    for e in eigenvalues(&p, 12).unwrap() {
        assert!(e.abs() < 1e-8 || (e - 1.0).abs() < 1e-8);
    }
}

#[test]
fn php_and_hp_agree_and_zero_the_rest() {
    let sys = lih();
    let spec = sys.number_spec(2).unwrap();
    let php = project_hamiltonian(&sys.hamiltonian, &spec, ProjectionForm::Php).unwrap();
    let hp = project_hamiltonian(&sys.hamiltonian, &spec, ProjectionForm::Hp).unwrap();
    assert_eq!(php.term_count(), 400);
    let diff = php.result.to_matrix().unwrap() - hp.result.to_matrix().unwrap();
    assert!(max_entry(&diff) < 1e-8);
    let zeros = eigenvalues(&php.result, 12).unwrap().iter().filter(|e| e.abs() < 1e-8).count();
    assert_eq!(zeros, 49);
}

#[test]
fn sum_over_states_reproduces_php() {
    let sys = lih();
    let spec = sys.number_spec(2).unwrap();
    let sos = sum_over_states(&sys.hamiltonian, &spec, 12).unwrap();
    let php = project_hamiltonian(&sys.hamiltonian, &spec, ProjectionForm::Php).unwrap();
    assert_eq!(sos.term_count(), 400);
    assert!(max_entry(&(sos.result.to_matrix().unwrap() - php.result.to_matrix().unwrap())) < 1e-8);

    let h2o = QubitSystem::from_fixture(fixtures::H2O, MappingKind::BravyiKitaev).unwrap();
    let sos = sum_over_states(&h2o.hamiltonian, &h2o.number_spec(4).unwrap(), 12).unwrap();
    assert_eq!(sos.term_count(), 1504);
}

#[test]
fn spectrum_partition_for_every_method() {
    for (f, kind) in [(fixtures::LIH, MappingKind::Parity), (fixtures::H2O, MappingKind::BravyiKitaev)] {
        let sys = QubitSystem::from_fixture(f, kind).unwrap();
        let labeled = sys.label(12).unwrap();
        for spec in [sys.number_spec(sys.n_electrons()).unwrap(), sys.spin_spec(1.0).unwrap()] {
            let cases = [
                (project_hamiltonian(&sys.hamiltonian, &spec, ProjectionForm::Php).unwrap(), Transform::Projection),
                (shift_operator(&sys.hamiltonian, &spec, 16.0).unwrap(), Transform::Shift { mu: 16.0 }),
                (reflect_operator(&sys.hamiltonian, &spec).unwrap(), Transform::Reflection),
            ];
            for (op, transform) in cases {
                assert!(op.result.is_hermitian(1e-10));
                let ev = eigenvalues(&op.result, 12).unwrap();
                let report = compare_spectra(&labeled, &ev, &spec, transform).unwrap();
                assert!(report.max_match_deviation < 1e-8, "{} {:?}", f.id, op.method);
                assert!(report.max_prediction_deviation < 1e-6, "{} {:?}", f.id, op.method);
            }
        }
    }
}

#[test]
fn variational_safety_at_the_target() {
    let sys = lih();
    let labeled = sys.label(12).unwrap();
    let spec = sys.number_spec(2).unwrap();
    let target_min = labeled
        .levels
        .iter()
        .filter(|l| l.n_label() == 2)
        .map(|l| l.energy)
        .fold(f64::INFINITY, f64::min);
    let global_min = labeled.levels[0].energy;
    // mu/2 must exceed (E_target - E_global) / min nonzero gap^2 = 0 here
    assert!(8.0 > (target_min - global_min) / 1.0);
    for op in [
        shift_operator(&sys.hamiltonian, &spec, 16.0).unwrap(),
        reflect_operator(&sys.hamiltonian, &spec).unwrap(),
    ] {
        let ev = eigenvalues(&op.result, 12).unwrap();
        assert!((ev[0] - target_min).abs() < 1e-8, "{:?}", op.method);
    }
}

#[test]
fn shift_level_predictions() {
    let sys = lih();
    let spec = sys.number_spec(2).unwrap();
    let shift = shift_operator(&sys.hamiltonian, &spec, 16.0).unwrap();
    assert_eq!(shift.term_count(), 118);
    let ev = eigenvalues(&shift.result, 12).unwrap();
    // fully occupied level, 4 electrons above target
    assert!((ev[63] - 121.8482715).abs() < 1e-6);
    assert!(matches!(shift_operator(&sys.hamiltonian, &spec, 0.0), Err(symadapt::Error::Contract(_))));
}

#[test]
fn reflection_counts_and_levels() {
    let sys = lih();
    let spec = sys.number_spec(2).unwrap();
    let refl = reflect_operator(&sys.hamiltonian, &spec).unwrap();
    assert_eq!(refl.term_count(), 381);
    let labeled = sys.label(12).unwrap();
    // a four-electron singlet at -7.8304159 goes to E (1 - 8)
    let k = labeled
        .levels
        .iter()
        .position(|l| l.n_label() == 4 && (l.energy + 7.8304159).abs() < 1e-6)
        .unwrap();
    let v = refl.result.expectation(&labeled.eigensystem.vector(k)).unwrap().re;
    assert!((v - labeled.levels[k].energy * -7.0).abs() < 1e-8);
    assert!((v - 54.8129115).abs() < 2e-6);
}

#[test]
fn singlet_reflection_scales_triplets() {
    let sys = lih();
    let spec = sys.spin_spec(0.0).unwrap();
    let op = reflect_singlet(&sys.hamiltonian, &spec).unwrap();
    assert_eq!(op.term_count(), 525);
    let labeled = sys.label(12).unwrap();
    for (k, l) in labeled.levels.iter().enumerate() {
        let v = op.result.expectation(&labeled.eigensystem.vector(k)).unwrap().re;
        let s = l.s_label();
        assert!((v - l.energy * (1.0 - 2.0 * s * (s + 1.0))).abs() < 1e-8);
    }
    // not applicable to other targets
    assert!(reflect_singlet(&sys.hamiltonian, &sys.spin_spec(1.0).unwrap()).is_err());
}

#[test]
fn lih_labels() {
    let labeled = lih().label(12).unwrap();
    assert_eq!(labeled.len(), 64);
    assert!((labeled.levels[0].energy + 8.2889385).abs() < 1e-6);
    let head: Vec<(i64, f64)> = labeled.levels[..5].iter().map(|l| (l.n_label(), l.s_label())).collect();
    assert_eq!(head, vec![(2, 0.0), (2, 1.0), (2, 1.0), (2, 1.0), (2, 0.0)]);
    assert_eq!(labeled.counts_by_n(), vec![1, 6, 15, 20, 15, 6, 1]);
    assert_eq!(labeled.counts_by_s(), vec![14, 28, 18, 4]);
    for w in labeled.levels.windows(2) {
        assert!(w[0].energy <= w[1].energy);
    }
}

#[test]
fn labeling_is_basis_independent() {
    let sys = lih();
    let mut eig = diagonalize(&sys.hamiltonian, 12).unwrap();
    let reference = sys.label(12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    // scramble every degenerate group with a random unitary-ish mix
    for g in eig.groups(spectral::DEGENERACY_TOL) {
        if g.len() < 2 {
            continue;
        }
        let mut cols: Vec<usize> = g.clone().collect();
        cols.shuffle(&mut rng);
        let block = CMatrix::from_fn(eig.vectors.nrows(), g.len(), |r, c| eig.vectors[(r, cols[c])]);
        let mix = CMatrix::from_fn(g.len(), g.len(), |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let q = (block * mix).qr().q();
        for (c, col) in g.clone().enumerate() {
            eig.vectors.set_column(col, &q.column(c));
        }
    }
    spectral::resolve_degeneracies(&mut eig, &[&sys.number, &sys.s2], 12).unwrap();
    let mut labels: Vec<(i64, i64)> = (0..eig.len())
        .map(|k| {
            let v = eig.vector(k);
            let n = sys.number.expectation(&v).unwrap().re.round() as i64;
            let s2 = sys.s2.expectation(&v).unwrap().re;
            (n, (4.0 * s2).round() as i64)
        })
        .collect();
    let mut want: Vec<(i64, i64)> = reference.levels.iter().map(|l| (l.n_label(), (4.0 * l.s2).round() as i64)).collect();
    labels.sort();
    want.sort();
    assert_eq!(labels, want);
}

#[test]
fn identity_transform_matches_everything() {
    let sys = lih();
    let labeled = sys.label(12).unwrap();
    let spec = sys.number_spec(2).unwrap();
    let report = compare_spectra(&labeled, &labeled.energies(), &spec, Transform::Identity).unwrap();
    assert_eq!(report.matched, 64);
    // a spectrum missing the target sector is reported
    let wrong: Vec<f64> = labeled.energies().iter().map(|e| e + 1.0).collect();
    assert!(matches!(
        compare_spectra(&labeled, &wrong, &spec, Transform::Projection),
        Err(symadapt::Error::Mismatch(_))
    ));
}

#[test]
fn random_hermitian_spectrum_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let n = rng.gen_range(1..=5);
        let mask = (1u64 << n) - 1;
        let terms: Vec<(PauliWord, Complex64)> = (0..6)
            .map(|_| {
                let w = PauliWord::new(n, rng.gen::<u64>() & mask, rng.gen::<u64>() & mask).unwrap();
                (w, Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
            })
            .collect();
        let a = PauliSum::from_xyz_terms(n, terms);
        let mut oracle: Vec<f64> = nalgebra::SymmetricEigen::new(a.to_matrix().unwrap()).eigenvalues.iter().copied().collect();
        oracle.sort_by(f64::total_cmp);
        let got = eigenvalues(&a, 12).unwrap();
        for (x, y) in got.iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn projector_of_identity_hamiltonian() {
    let sys = lih();
    let spec = sys.spin_spec(0.5).unwrap();
    let p = lowdin_projector(&spec).unwrap();
    let php = project_hamiltonian(&PauliSum::identity(6), &spec, ProjectionForm::Php).unwrap();
    assert!(php.result.distance(&p).unwrap() < 1e-10);
    assert!((p.to_matrix().unwrap().trace().re - 28.0).abs() < 1e-10);
}
