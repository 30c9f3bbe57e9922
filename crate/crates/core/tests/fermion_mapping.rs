use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symadapt::fermion::{
    build_hamiltonian, build_number_operator, build_s2_operator, FermionOperator, Ladder, SpinOrbitalConvention,
};
use symadapt::fixtures;
use symadapt::mapping::{map_operator_default, verify_isospectral, LadderImages, MappingKind};
use symadapt::pauli::{CMatrix, PauliSum, StateVector};
use symadapt::spectral::eigenvalues;
use symadapt::verify::random_fermion_operator;

/// Occupation-basis matrix of a ladder string, built by acting on bit
/// strings directly (mode p = bit p, sign from occupied modes below p).
fn ladder_matrix(n: usize, ops: &[Ladder]) -> CMatrix {
    let dim = 1 << n;
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut state = col;
        let mut sign = 1.0;
        let mut alive = true;
        for op in ops.iter().rev() {
            let bit = 1 << op.mode;
            let occupied = state & bit != 0;
            if occupied == op.dagger {
                alive = false;
                break;
            }
            if (state & (bit - 1)).count_ones() % 2 == 1 {
                sign = -sign;
            }
            state ^= bit;
        }
        if alive {
            m[(state, col)] += Complex64::new(sign, 0.0);
        }
    }
    m
}

fn operator_matrix(op: &FermionOperator) -> CMatrix {
    let dim = 1 << op.n_modes();
    let mut m = CMatrix::zeros(dim, dim);
    for (s, c) in op.iter() {
        m += ladder_matrix(op.n_modes(), s) * *c;
    }
    m
}

fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn random_string(rng: &mut ChaCha8Rng, n: usize) -> Vec<Ladder> {
    (0..rng.gen_range(0..=5))
        .map(|_| Ladder {
            mode: rng.gen_range(0..n),
            dagger: rng.gen_bool(0.5),
        })
        .collect()
}

#[test]
fn normal_order_preserves_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let mut raw = CMatrix::zeros(16, 16);
        let mut strings = Vec::new();
        for _ in 0..4 {
            let s = random_string(&mut rng, 4);
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            raw += ladder_matrix(4, &s) * c;
            strings.push((s, c));
        }
        let op = FermionOperator::from_strings(4, strings).unwrap().normal_order();
        assert!(max_entry(&(operator_matrix(&op) - &raw)) < 1e-12);
        // and the Jordan-Wigner image is that same matrix
        let jw = map_operator_default(&op, MappingKind::JordanWigner).unwrap().to_matrix().unwrap();
        assert!(max_entry(&(jw - raw)) < 1e-12);
    }
}

#[test]
fn mapping_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for kind in MappingKind::ALL {
        for _ in 0..20 {
            let n = rng.gen_range(2..=5);
            let a = random_fermion_operator(&mut rng, n);
            let b = random_fermion_operator(&mut rng, n);
            let map = |op: &FermionOperator| map_operator_default(op, kind).unwrap();
            let prod = map(&a.multiply(&b).unwrap());
            assert!(prod.distance(&map(&a).multiply(&map(&b)).unwrap()).unwrap() < 1e-12);
            let lin = map(&a.scale_real(2.0).add(&b.scale_real(-0.5)).unwrap());
            let parts = map(&a).scale_real(2.0).add(&map(&b).scale_real(-0.5)).unwrap();
            assert!(lin.distance(&parts).unwrap() < 1e-12);
            assert!(map(&a).is_hermitian(1e-12));
            assert_eq!(prod.n_qubits(), n);
        }
    }
}

#[test]
fn anticommutators_map_to_delta() {
    for kind in MappingKind::ALL {
        let n = 7;
        let img = LadderImages::new(kind, n).unwrap();
        for p in 0..n {
            for q in 0..n {
                let (a, ad) = (img.annihilation(p), img.creation(q));
                let anti = a.multiply(&ad).unwrap().add(&ad.multiply(&a).unwrap()).unwrap();
                let want = if p == q { PauliSum::identity(n) } else { PauliSum::zero(n) };
                assert!(anti.distance(&want).unwrap() < 1e-14, "{kind} p={p} q={q}");
            }
        }
    }
}

#[test]
fn lih_hamiltonian_isospectral_across_mappings() {
    let ints = fixtures::LIH.integrals().unwrap();
    let h = build_hamiltonian(&ints, SpinOrbitalConvention::Interleaved, false);
    let report = verify_isospectral(&h, &MappingKind::ALL, 12).unwrap();
    assert!(report.passes(1e-8), "{}", report.max_deviation);
    assert!((report.spectra[0][0] - (-8.2889385)).abs() < 1e-6);
}

#[test]
fn hermitian_after_normal_ordering() {
    for f in fixtures::ALL {
        let ints = f.integrals().unwrap();
        for conv in [SpinOrbitalConvention::Interleaved, SpinOrbitalConvention::Blocked] {
            let h = build_hamiltonian(&ints, conv, false);
            assert!(h.is_hermitian(1e-12), "{}", f.id);
        }
    }
}

#[test]
fn vnn_shifts_every_level() {
    let ints = fixtures::LIH.integrals().unwrap();
    let map = |vnn| {
        let h = build_hamiltonian(&ints, SpinOrbitalConvention::Interleaved, vnn);
        eigenvalues(&map_operator_default(&h, MappingKind::Parity).unwrap(), 12).unwrap()
    };
    let (without, with) = (map(false), map(true));
    for (a, b) in without.iter().zip(&with) {
        assert!((b - a - ints.v_nn).abs() < 1e-10);
    }
}

#[test]
fn s2_spectrum_is_spin_multiplets() {
    for n_so in [2, 4, 6] {
        let s2 = map_operator_default(&build_s2_operator(n_so, SpinOrbitalConvention::Interleaved).unwrap(), MappingKind::BravyiKitaev)
            .unwrap();
        let allowed: Vec<f64> = (0..=n_so / 2).map(|k| (k as f64 / 2.0) * (k as f64 / 2.0 + 1.0)).collect();
        for e in eigenvalues(&s2, 12).unwrap() {
            assert!(e > -1e-12);
            assert!(allowed.iter().any(|a| (a - e).abs() < 1e-10), "{e}");
        }
    }
}

#[test]
fn closed_shell_pair_is_singlet() {
    let s2 = map_operator_default(&build_s2_operator(6, SpinOrbitalConvention::Interleaved).unwrap(), MappingKind::JordanWigner)
        .unwrap();
    // alpha and beta of orbital 0
    let psi = StateVector::basis(6, 0b11);
    assert!(s2.expectation(&psi).unwrap().norm() < 1e-14);
    let n = map_operator_default(&build_number_operator(6).unwrap(), MappingKind::JordanWigner).unwrap();
    assert!((n.expectation(&psi).unwrap().re - 2.0).abs() < 1e-14);
}

#[test]
fn lih_operator_counts_under_parity() {
    let ints = fixtures::LIH.integrals().unwrap();
    let conv = SpinOrbitalConvention::Interleaved;
    let count = |op: &FermionOperator| map_operator_default(op, MappingKind::Parity).unwrap().term_count();
    assert_eq!(count(&build_hamiltonian(&ints, conv, false)), 118);
    assert_eq!(count(&build_number_operator(6).unwrap()), 7);
    assert_eq!(count(&build_s2_operator(6, conv).unwrap()), 40);
}

#[test]
fn h2o_hamiltonian_under_bk() {
    let ints = fixtures::H2O.integrals().unwrap();
    let h = build_hamiltonian(&ints, SpinOrbitalConvention::Interleaved, false);
    assert_eq!(map_operator_default(&h, MappingKind::BravyiKitaev).unwrap().term_count(), 185);
}
