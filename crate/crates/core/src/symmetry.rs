//! Symmetry-adapted operators: Löwdin projection, spectral shift,
//! spectral reflection and the sum-over-states reference construction.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mapping::MappingKind;
use crate::pauli::{check_dense, fmt_f64, json_string, CMatrix, PauliSum};
use crate::spectral::{self, COMMUTATOR_TOL};

/// Symmetry expectations closer than this to the target select a state.
pub const SELECTION_TOL: f64 = 1e-6;

const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryKind {
    Number,
    Spin,
}

impl SymmetryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SymmetryKind::Number => "number",
            SymmetryKind::Spin => "spin",
        }
    }
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SymmetryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "number" | "n" => Ok(SymmetryKind::Number),
            "spin" | "s2" => Ok(SymmetryKind::Spin),
            other => Err(Error::Usage(format!("unknown symmetry {other:?}"))),
        }
    }
}

/// A symmetry operator with its complete, known spectrum and the eigenvalue
/// to adapt to.
#[derive(Clone, Debug)]
pub struct SymmetrySpec {
    pub kind: SymmetryKind,
    pub operator: PauliSum,
    pub eigenvalues: Vec<f64>,
    pub target: f64,
}

impl SymmetrySpec {
    pub fn new(kind: SymmetryKind, operator: PauliSum, eigenvalues: Vec<f64>, target: f64) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Contract("symmetry spectrum is empty".into()));
        }
        for w in eigenvalues.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Contract(format!(
                    "symmetry eigenvalues must be distinct and ascending ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        if !eigenvalues.iter().any(|a| (a - target).abs() <= MEMBERSHIP_TOL) {
            return Err(Error::Contract(format!(
                "target {target} is not an eigenvalue of the {kind} operator"
            )));
        }
        if operator.hermiticity_defect() > 1e-10 {
            return Err(Error::Contract("symmetry operator is not Hermitian".into()));
        }
        Ok(SymmetrySpec {
            kind,
            operator,
            eigenvalues,
            target,
        })
    }

    /// `N` on `n_so` spin-orbitals, eigenvalues `0..=n_so`, target `n`.
    pub fn number(operator: PauliSum, n_so: usize, n: usize) -> Result<Self> {
        let eigenvalues = (0..=n_so).map(|k| k as f64).collect();
        Self::new(SymmetryKind::Number, operator, eigenvalues, n as f64)
    }

    /// `S^2` on `n_so` spin-orbitals, eigenvalues `S(S+1)` for
    /// `S = 0, 1/2, ..., n_so/4`; the target is given as the spin `S`.
    pub fn spin(operator: PauliSum, n_so: usize, s: f64) -> Result<Self> {
        let twice = 2.0 * s;
        if s < 0.0 || (twice - twice.round()).abs() > MEMBERSHIP_TOL {
            return Err(Error::Contract(format!("spin {s} is not a non-negative half-integer")));
        }
        let eigenvalues = (0..=n_so / 2)
            .map(|k| {
                let s = k as f64 / 2.0;
                s * (s + 1.0)
            })
            .collect();
        Self::new(SymmetryKind::Spin, operator, eigenvalues, s * (s + 1.0))
    }

    pub fn n_qubits(&self) -> usize {
        self.operator.n_qubits()
    }

    /// Eigenvalues other than the target, nearest first.
    pub fn others(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .eigenvalues
            .iter()
            .copied()
            .filter(|a| (a - self.target).abs() > MEMBERSHIP_TOL)
            .collect();
        out.sort_by(|a, b| (a - self.target).abs().total_cmp(&(b - self.target).abs()));
        out
    }

    /// `A - a_i`.
    pub fn shifted(&self) -> PauliSum {
        self.operator.add_scalar(-self.target)
    }
}

/// Löwdin factor `(A - a_j) / (a_i - a_j)`.
pub fn lowdin_factor(spec: &SymmetrySpec, a_j: f64) -> PauliSum {
    spec.operator
        .add_scalar(-a_j)
        .scale_real(1.0 / (spec.target - a_j))
}

/// `P = prod_{j != i} (A - a_j) / (a_i - a_j)`, multiplied nearest
/// eigenvalue first.
pub fn lowdin_projector(spec: &SymmetrySpec) -> Result<PauliSum> {
    let mut p = PauliSum::identity(spec.n_qubits()).with_threshold(spec.operator.threshold());
    for a_j in spec.others() {
        p = p.multiply(&lowdin_factor(spec, a_j))?;
    }
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "lowdin_php", alias = "php")]
    LowdinPhp,
    #[serde(rename = "lowdin_hp", alias = "hp")]
    LowdinHp,
    #[serde(rename = "shift")]
    Shift,
    #[serde(rename = "reflection", alias = "reflect")]
    Reflection,
    #[serde(rename = "reflection_singlet", alias = "reflect-singlet")]
    ReflectionSinglet,
    #[serde(rename = "sum_over_states", alias = "sos")]
    SumOverStates,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::LowdinPhp => "lowdin_php",
            Method::LowdinHp => "lowdin_hp",
            Method::Shift => "shift",
            Method::Reflection => "reflection",
            Method::ReflectionSinglet => "reflection_singlet",
            Method::SumOverStates => "sum_over_states",
        }
    }

    /// Short CLI spelling.
    pub fn cli_name(&self) -> &'static str {
        match self {
            Method::LowdinPhp => "php",
            Method::LowdinHp => "hp",
            Method::Shift => "shift",
            Method::Reflection => "reflect",
            Method::ReflectionSinglet => "reflect-singlet",
            Method::SumOverStates => "sos",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "php" | "lowdin_php" => Method::LowdinPhp,
            "hp" | "lowdin_hp" => Method::LowdinHp,
            "shift" => Method::Shift,
            "reflect" | "reflection" => Method::Reflection,
            "reflect-singlet" | "reflection_singlet" => Method::ReflectionSinglet,
            "sos" | "sum_over_states" => Method::SumOverStates,
            other => return Err(Error::Usage(format!("unknown method {other:?}"))),
        })
    }
}

/// Parameters an adapted operator was built with.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub method: Method,
    pub symmetry: SymmetryKind,
    pub target: f64,
    pub mu: Option<f64>,
    pub threshold: f64,
    pub mapping: Option<MappingKind>,
    pub fixture: Option<String>,
    /// Full run configuration, when built through the pipeline.
    pub run: Option<serde_json::Value>,
}

#[derive(Clone, Debug)]
pub struct AdaptedOperator {
    pub method: Method,
    pub result: PauliSum,
    pub provenance: Provenance,
}

impl AdaptedOperator {
    fn new(method: Method, result: PauliSum, spec: &SymmetrySpec, mu: Option<f64>) -> Self {
        let provenance = Provenance {
            method,
            symmetry: spec.kind,
            target: spec.target,
            mu,
            threshold: result.threshold(),
            mapping: None,
            fixture: None,
            run: None,
        };
        AdaptedOperator {
            method,
            result,
            provenance,
        }
    }

    /// Records where the input operators came from.
    pub fn with_origin(mut self, mapping: MappingKind, fixture: Option<&str>) -> Self {
        self.provenance.mapping = Some(mapping);
        self.provenance.fixture = fixture.map(str::to_owned);
        self
    }

    pub fn term_count(&self) -> usize {
        self.result.term_count()
    }

    pub fn to_json(&self) -> String {
        let p = &self.provenance;
        let opt_str = |v: Option<String>| v.unwrap_or_else(|| "null".into());
        format!(
            "{{\n  {},\n  \"provenance\": {{\n    \"method\": {},\n    \"symmetry\": {},\n    \
             \"target\": {},\n    \"mu\": {},\n    \"threshold\": {},\n    \"mapping\": {},\n    \
             \"fixture\": {},\n    \"run\": {}\n  }}\n}}\n",
            self.result.json_fields(),
            json_string(p.method.as_str()),
            json_string(p.symmetry.as_str()),
            fmt_f64(p.target),
            opt_str(p.mu.map(fmt_f64)),
            fmt_f64(p.threshold),
            opt_str(p.mapping.map(|m| json_string(m.as_str()))),
            opt_str(p.fixture.as_deref().map(json_string)),
            opt_str(p.run.as_ref().map(|v| v.to_string())),
        )
    }
}

fn check_commutes(h: &PauliSum, a: &PauliSum, what: &str) -> Result<()> {
    // Pauli-coefficient norm = Hilbert-Schmidt norm / sqrt(2^n)
    let residual = h.commutator(a)?.norm();
    if residual > COMMUTATOR_TOL {
        return Err(Error::Contract(format!(
            "{what} requires [H, A] = 0; residual norm {residual:.3e} exceeds {COMMUTATOR_TOL:e}"
        )));
    }
    Ok(())
}

fn threshold_of(h: &PauliSum, spec: &SymmetrySpec) -> f64 {
    h.threshold().max(spec.operator.threshold())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProjectionForm {
    /// `P H P`.
    #[default]
    Php,
    /// `H P`, valid only when `[H, A] = 0`.
    Hp,
}

pub fn project_hamiltonian(h: &PauliSum, spec: &SymmetrySpec, form: ProjectionForm) -> Result<AdaptedOperator> {
    let p = lowdin_projector(spec)?;
    let result = match form {
        ProjectionForm::Php => p.multiply(h)?.multiply(&p)?,
        ProjectionForm::Hp => {
            check_commutes(h, &spec.operator, "the HP projection")?;
            h.multiply(&p)?
        }
    };
    let method = match form {
        ProjectionForm::Php => Method::LowdinPhp,
        ProjectionForm::Hp => Method::LowdinHp,
    };
    Ok(AdaptedOperator::new(method, result, spec, None))
}

/// `L = H + (mu/2) (A - a_i)^2`.
pub fn shift_operator(h: &PauliSum, spec: &SymmetrySpec, mu: f64) -> Result<AdaptedOperator> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Contract(format!("penalty parameter mu must be positive (got {mu})")));
    }
    let d = spec.shifted().with_threshold(threshold_of(h, spec));
    let result = h.add(&d.multiply(&d)?.scale_real(0.5 * mu))?;
    Ok(AdaptedOperator::new(Method::Shift, result, spec, Some(mu)))
}

/// `H - H (A - a_i)^2 - (A - a_i)^2 H`.
pub fn reflect_operator(h: &PauliSum, spec: &SymmetrySpec) -> Result<AdaptedOperator> {
    check_commutes(h, &spec.operator, "spectral reflection")?;
    let d = spec.shifted().with_threshold(threshold_of(h, spec));
    let d2 = d.multiply(&d)?;
    let result = h.sub(&h.multiply(&d2)?)?.sub(&d2.multiply(h)?)?;
    Ok(AdaptedOperator::new(Method::Reflection, result, spec, None))
}

/// Singlet shortcut `H - H S^2 - S^2 H`: a level of spin `S` and energy `E`
/// goes to `E [1 - 2 S(S+1)]`.
pub fn reflect_singlet(h: &PauliSum, spec: &SymmetrySpec) -> Result<AdaptedOperator> {
    if spec.kind != SymmetryKind::Spin || spec.target.abs() > MEMBERSHIP_TOL {
        return Err(Error::Contract(
            "the simplified reflection applies to the S^2 singlet target only".into(),
        ));
    }
    check_commutes(h, &spec.operator, "singlet reflection")?;
    let s2 = &spec.operator;
    let result = h.sub(&h.multiply(s2)?)?.sub(&s2.multiply(h)?)?;
    Ok(AdaptedOperator::new(Method::ReflectionSinglet, result, spec, None))
}

/// Reference construction `sum_k E_k |k><k|` over eigenstates of `h` in the
/// target sector, decomposed back into Pauli words.
pub fn sum_over_states(h: &PauliSum, spec: &SymmetrySpec, dense_limit: usize) -> Result<AdaptedOperator> {
    check_dense("sum_over_states", h.n_qubits(), dense_limit)?;
    let mut eig = spectral::diagonalize(h, dense_limit)?;
    spectral::resolve_degeneracies(&mut eig, &[&spec.operator], dense_limit)?;
    let dim = eig.vectors.nrows();
    let mut m = CMatrix::zeros(dim, dim);
    for k in 0..eig.len() {
        let v = eig.vector(k);
        let a = spec.operator.expectation(&v)?.re;
        if !spec.eigenvalues.iter().any(|x| (x - a).abs() < SELECTION_TOL) {
            return Err(Error::Labeling(format!(
                "eigenvector {k} has <A> = {a:.9}, not within {SELECTION_TOL:e} of any eigenvalue; \
                 degenerate subspace is not resolved"
            )));
        }
        if (a - spec.target).abs() < SELECTION_TOL {
            let col = eig.vectors.column(k);
            m += (col * col.adjoint()) * Complex64::new(eig.values[k], 0.0);
        }
    }
    let result = PauliSum::from_matrix(&m, threshold_of(h, spec), dense_limit)?;
    Ok(AdaptedOperator::new(Method::SumOverStates, result, spec, None))
}

/// Dispatches on `method`; `mu` is used by the shift only.
pub fn adapt(h: &PauliSum, spec: &SymmetrySpec, method: Method, mu: f64, dense_limit: usize) -> Result<AdaptedOperator> {
    match method {
        Method::LowdinPhp => project_hamiltonian(h, spec, ProjectionForm::Php),
        Method::LowdinHp => project_hamiltonian(h, spec, ProjectionForm::Hp),
        Method::Shift => shift_operator(h, spec, mu),
        Method::Reflection => reflect_operator(h, spec),
        Method::ReflectionSinglet => reflect_singlet(h, spec),
        Method::SumOverStates => sum_over_states(h, spec, dense_limit),
    }
}

/// Original levels outside the target sector with positive energy; for these
/// a reflection does not move the level upward.
pub fn positive_non_target_levels(spectrum: &spectral::LabeledSpectrum, spec: &SymmetrySpec) -> Vec<usize> {
    spectrum
        .levels
        .iter()
        .enumerate()
        .filter(|(_, l)| (l.symmetry_value(spec.kind) - spec.target).abs() > MEMBERSHIP_TOL && l.energy > 0.0)
        .map(|(k, _)| k)
        .collect()
}
