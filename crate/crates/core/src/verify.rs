//! Randomized property suite behind `symadapt verify`.
//!
//! Every check reports the worst residual it saw next to the tolerance it is
//! held to, so callers can print or gate on the results.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fermion::{FermionOperator, Ladder};
use crate::fixtures;
use crate::mapping::{verify_isospectral, MappingKind};
use crate::pauli::{PauliSum, PauliWord, StateVector};
use crate::pipeline::QubitSystem;
use crate::symmetry::{lowdin_projector, project_hamiltonian, shift_operator, sum_over_states, ProjectionForm, SymmetrySpec};

pub const MAX_RANDOM_QUBITS: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl PropertyCheck {
    pub fn passed(&self) -> bool {
        self.max_residual.is_finite() && self.max_residual <= self.tolerance
    }

    fn new(name: &str, trials: usize, max_residual: f64, tolerance: f64) -> Self {
        PropertyCheck {
            name: name.to_owned(),
            trials,
            max_residual,
            tolerance,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub trials: usize,
    pub seed: u64,
    pub dense_limit: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            trials: 200,
            seed: 7,
            dense_limit: crate::pauli::DEFAULT_DENSE_LIMIT,
        }
    }
}

fn random_word<R: Rng>(rng: &mut R, n: usize) -> PauliWord {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    PauliWord::new(n, rng.gen::<u64>() & mask, rng.gen::<u64>() & mask).expect("masked to n bits")
}

fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_sum<R: Rng>(rng: &mut R, n: usize, terms: usize) -> PauliSum {
    PauliSum::from_terms(n, (0..terms).map(|_| (random_word(rng, n), random_complex(rng))))
}

fn max_entry(m: &crate::pauli::CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Associativity of the word product (with phases) and
/// `matrix(A B) = matrix(A) matrix(B)` on random sums.
pub fn pauli_algebra<R: Rng>(rng: &mut R, trials: usize) -> Result<PropertyCheck> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let n = rng.gen_range(1..=MAX_RANDOM_QUBITS);
        let (a, b, c) = (random_word(rng, n), random_word(rng, n), random_word(rng, n));
        let (ab, p1) = a.multiply(&b)?;
        let (ab_c, p2) = ab.multiply(&c)?;
        let (bc, q1) = b.multiply(&c)?;
        let (a_bc, q2) = a.multiply(&bc)?;
        let lhs = (p1 * p2).to_complex();
        let rhs = (q1 * q2).to_complex();
        if ab_c != a_bc {
            worst = f64::INFINITY;
        }
        worst = worst.max((lhs - rhs).norm());

        let (kx, ky) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let x = random_sum(rng, n, kx);
        let y = random_sum(rng, n, ky);
        let product = x.multiply(&y)?.to_matrix()?;
        let dense = x.to_matrix()? * y.to_matrix()?;
        worst = worst.max(max_entry(&(product - dense)));
    }
    Ok(PropertyCheck::new("pauli associativity and matrix homomorphism", trials, worst, 1e-10))
}

/// Random Hermitian one- and two-body operator on `n_modes`.
pub fn random_fermion_operator<R: Rng>(rng: &mut R, n_modes: usize) -> FermionOperator {
    let mut strings = Vec::new();
    for _ in 0..rng.gen_range(1..=6) {
        let (p, q) = (rng.gen_range(0..n_modes), rng.gen_range(0..n_modes));
        strings.push((vec![Ladder::create(p), Ladder::annihilate(q)], random_complex(rng)));
    }
    if n_modes >= 2 {
        for _ in 0..rng.gen_range(0..=4) {
            let mut modes: Vec<usize> = (0..n_modes).collect();
            modes.shuffle(rng);
            let (p, q) = (modes[0], modes[1]);
            modes.shuffle(rng);
            let (r, s) = (modes[0], modes[1]);
            strings.push((
                vec![Ladder::create(p), Ladder::create(q), Ladder::annihilate(s), Ladder::annihilate(r)],
                random_complex(rng),
            ));
        }
    }
    strings.push((Vec::new(), Complex64::new(rng.gen_range(-1.0..1.0), 0.0)));
    let op = FermionOperator::from_strings(n_modes, strings).expect("modes in range");
    op.add(&op.adjoint()).expect("same size").scale_real(0.5)
}

/// Sorted spectra of the JW, parity and BK images agree.
pub fn mapping_isospectrality<R: Rng>(rng: &mut R, trials: usize, dense_limit: usize) -> Result<PropertyCheck> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let n = rng.gen_range(1..=MAX_RANDOM_QUBITS);
        let op = random_fermion_operator(rng, n);
        let report = verify_isospectral(&op, &MappingKind::ALL, dense_limit)?;
        worst = worst.max(report.max_deviation);
    }
    Ok(PropertyCheck::new("mapping isospectrality (jw/parity/bk)", trials, worst, 1e-8))
}

/// Spectral norm of `P^2 - P`, evaluated on the dense matrix so pruning of
/// the symbolic product cannot hide a defect.
pub fn idempotency_defect(p: &PauliSum, dense_limit: usize) -> Result<f64> {
    let m = p.to_matrix_with_limit(dense_limit)?;
    let d = &m * &m - &m;
    Ok(d.singular_values().iter().copied().fold(0.0, f64::max))
}

/// Löwdin projectors for random registers, mappings and targets.
pub fn projector_idempotency<R: Rng>(rng: &mut R, trials: usize, dense_limit: usize) -> Result<PropertyCheck> {
    use crate::fermion::{build_number_operator, build_s2_operator, SpinOrbitalConvention};
    use crate::mapping::map_operator_default;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let kind = *MappingKind::ALL.choose(rng).expect("non-empty");
        let n_so = rng.gen_range(1..=MAX_RANDOM_QUBITS);
        let spec = if n_so % 2 == 0 && rng.gen_bool(0.5) {
            let s2 = map_operator_default(&build_s2_operator(n_so, SpinOrbitalConvention::Interleaved)?, kind)?;
            let s = rng.gen_range(0..=n_so / 2) as f64 / 2.0;
            SymmetrySpec::spin(s2, n_so, s)?
        } else {
            let n = map_operator_default(&build_number_operator(n_so)?, kind)?;
            SymmetrySpec::number(n, n_so, rng.gen_range(0..=n_so))?
        };
        worst = worst.max(idempotency_defect(&lowdin_projector(&spec)?, dense_limit)?);
    }
    Ok(PropertyCheck::new("projector idempotency", trials, worst, 1e-8))
}

fn fixture_systems() -> Result<Vec<QubitSystem>> {
    let mut out = Vec::new();
    for f in fixtures::ALL {
        for kind in MappingKind::ALL {
            out.push(QubitSystem::from_fixture(f, kind)?);
        }
    }
    Ok(out)
}

/// Frobenius norms of the dense `[H, N]` and `[H, S^2]` for every fixture
/// and mapping.
pub fn fixture_commutators(dense_limit: usize) -> Result<PropertyCheck> {
    let mut worst: f64 = 0.0;
    let systems = fixture_systems()?;
    for sys in &systems {
        let h = sys.hamiltonian.to_matrix_with_limit(dense_limit)?;
        for a in [&sys.number, &sys.s2] {
            let a = a.to_matrix_with_limit(dense_limit)?;
            worst = worst.max((&h * &a - &a * &h).norm());
        }
    }
    Ok(PropertyCheck::new("[H, N] and [H, S^2] on fixtures", systems.len(), worst, 1e-10))
}

/// `<L> = <H> + (mu/2) Var(A) + (mu/2)(<A> - a_i)^2` on random states.
pub fn penalty_variance_identity<R: Rng>(rng: &mut R, trials: usize) -> Result<PropertyCheck> {
    let systems = [
        QubitSystem::from_fixture(fixtures::LIH, MappingKind::Parity)?,
        QubitSystem::from_fixture(fixtures::H2O, MappingKind::BravyiKitaev)?,
    ];
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let sys = &systems[t % systems.len()];
        let spec = if rng.gen_bool(0.5) {
            sys.number_spec(rng.gen_range(0..=sys.n_qubits()))?
        } else {
            sys.spin_spec(rng.gen_range(0..=sys.n_qubits() / 2) as f64 / 2.0)?
        };
        let mu = rng.gen_range(0.5..20.0);
        let l = shift_operator(&sys.hamiltonian, &spec, mu)?;
        let psi = StateVector::random(sys.n_qubits(), rng);
        let r = crate::pipeline::penalty_identity_residual(&sys.hamiltonian, &l.result, &spec, mu, &psi)?;
        worst = worst.max(r.abs());
    }
    Ok(PropertyCheck::new("penalty variance identity", trials, worst, 1e-10))
}

/// Sum-over-states and `P H P` give the same matrix on every fixture.
pub fn sum_over_states_matches_projection(dense_limit: usize) -> Result<PropertyCheck> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for f in fixtures::ALL {
        let sys = QubitSystem::from_fixture(f, MappingKind::JordanWigner)?;
        let spec = sys.number_spec(sys.n_electrons())?;
        let php = project_hamiltonian(&sys.hamiltonian, &spec, ProjectionForm::Php)?;
        let sos = sum_over_states(&sys.hamiltonian, &spec, dense_limit)?;
        let diff = php.result.to_matrix_with_limit(dense_limit)? - sos.result.to_matrix_with_limit(dense_limit)?;
        worst = worst.max(max_entry(&diff));
        count += 1;
    }
    Ok(PropertyCheck::new("sum-over-states equals PHP on fixtures", count, worst, 1e-8))
}

pub fn run_suite(opts: SuiteOptions) -> Result<Vec<PropertyCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    Ok(vec![
        pauli_algebra(&mut rng, opts.trials)?,
        mapping_isospectrality(&mut rng, opts.trials, opts.dense_limit)?,
        projector_idempotency(&mut rng, opts.trials, opts.dense_limit)?,
        fixture_commutators(opts.dense_limit)?,
        penalty_variance_identity(&mut rng, opts.trials)?,
        sum_over_states_matches_projection(opts.dense_limit)?,
    ])
}

pub fn suite_table(checks: &[PropertyCheck]) -> String {
    let mut out = String::new();
    for c in checks {
        out.push_str(&format!(
            "{:<4} {:<46} trials={:<4} max={:.3e} tol={:.0e}\n",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c.trials,
            c.max_residual.abs(),
            c.tolerance
        ));
    }
    out
}
