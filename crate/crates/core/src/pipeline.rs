//! End-to-end flows: integrals → qubit operators → adapted operators →
//! labeled spectra.

use std::fmt::Write as _;

use log::warn;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::fermion::{
    build_hamiltonian, build_number_operator, build_s2_operator, load_fcidump, IntegralSet,
    SpinOrbitalConvention,
};
use crate::fixtures::Fixture;
use crate::mapping::{map_operator, MappingKind};
use crate::pauli::{fmt_f64, json_string, PauliSum, StateVector};
use crate::spectral::{self, compare_spectra, label_spectrum, LabeledSpectrum, SpectrumMatchReport, Transform};
use crate::symmetry::{self, AdaptedOperator, Method, SymmetryKind, SymmetrySpec};

/// Qubit images of `H`, `N` and `S^2` for one active space.
#[derive(Clone, Debug)]
pub struct QubitSystem {
    pub source: Option<String>,
    pub integrals: IntegralSet,
    pub mapping: MappingKind,
    pub ordering: SpinOrbitalConvention,
    pub threshold: f64,
    pub hamiltonian: PauliSum,
    pub number: PauliSum,
    pub s2: PauliSum,
}

impl QubitSystem {
    pub fn build(
        integrals: IntegralSet,
        mapping: MappingKind,
        ordering: SpinOrbitalConvention,
        threshold: f64,
        include_vnn: bool,
    ) -> Result<QubitSystem> {
        if integrals.n_orbitals == 0 {
            return Err(Error::Usage("empty active space".into()));
        }
        let n_so = 2 * integrals.n_orbitals;
        let h = build_hamiltonian(&integrals, ordering, include_vnn);
        let n = build_number_operator(n_so)?;
        let s2 = build_s2_operator(n_so, ordering)?;
        Ok(QubitSystem {
            source: None,
            hamiltonian: map_operator(&h, mapping, threshold)?,
            number: map_operator(&n, mapping, threshold)?,
            s2: map_operator(&s2, mapping, threshold)?,
            integrals,
            mapping,
            ordering,
            threshold,
        })
    }

    /// Bundled fixture with default threshold and without `v_nn`.
    pub fn from_fixture(fixture: Fixture, mapping: MappingKind) -> Result<QubitSystem> {
        let mut sys = Self::build(
            fixture.integrals()?,
            mapping,
            SpinOrbitalConvention::default(),
            crate::pauli::DEFAULT_THRESHOLD,
            false,
        )?;
        sys.source = Some(fixture.id.to_owned());
        Ok(sys)
    }

    pub fn from_config(cfg: &RunConfig) -> Result<QubitSystem> {
        cfg.validate()?;
        let integrals = match (&cfg.fcidump, &cfg.fixture) {
            (Some(path), _) => load_fcidump(&std::fs::read_to_string(path)?)?,
            (None, Some(id)) => Fixture::by_id(id)
                .ok_or_else(|| Error::Usage(format!("unknown fixture {id:?}")))?
                .integrals()?,
            (None, None) => return Err(Error::Usage("no FCIDUMP file or fixture given".into())),
        };
        let mut sys = Self::build(integrals, cfg.mapping, cfg.ordering, cfg.threshold, cfg.include_vnn)?;
        sys.source = cfg.source_id();
        Ok(sys)
    }

    pub fn n_qubits(&self) -> usize {
        self.hamiltonian.n_qubits()
    }

    pub fn n_electrons(&self) -> usize {
        self.integrals.n_electrons
    }

    /// `(H, N, S^2)` term counts.
    pub fn counts(&self) -> (usize, usize, usize) {
        (
            self.hamiltonian.term_count(),
            self.number.term_count(),
            self.s2.term_count(),
        )
    }

    pub fn number_spec(&self, n: usize) -> Result<SymmetrySpec> {
        SymmetrySpec::number(self.number.clone(), self.n_qubits(), n)
    }

    pub fn spin_spec(&self, s: f64) -> Result<SymmetrySpec> {
        SymmetrySpec::spin(self.s2.clone(), self.n_qubits(), s)
    }

    /// Spec from a config-style target: electron count or spin `S`.
    pub fn spec(&self, kind: SymmetryKind, target: Option<f64>) -> Result<SymmetrySpec> {
        match kind {
            SymmetryKind::Number => {
                let t = target.unwrap_or(self.n_electrons() as f64);
                if t < 0.0 || t.fract() != 0.0 {
                    return Err(Error::Usage(format!("electron-count target {t} is not a non-negative integer")));
                }
                self.number_spec(t as usize)
            }
            SymmetryKind::Spin => self.spin_spec(target.unwrap_or(0.0)),
        }
    }

    /// Adapts `H` with provenance filled in.
    pub fn adapt(&self, spec: &SymmetrySpec, method: Method, mu: f64, dense_limit: usize) -> Result<AdaptedOperator> {
        Ok(symmetry::adapt(&self.hamiltonian, spec, method, mu, dense_limit)?
            .with_origin(self.mapping, self.source.as_deref()))
    }

    pub fn label(&self, dense_limit: usize) -> Result<LabeledSpectrum> {
        label_spectrum(&self.hamiltonian, &self.number, &self.s2, dense_limit)
    }

    pub fn summary_json(&self) -> String {
        let (h, n, s2) = self.counts();
        format!(
            "{{\n  \"source\": {},\n  \"mapping\": {},\n  \"ordering\": {},\n  \"n_qubits\": {},\n  \
             \"n_electrons\": {},\n  \"v_nn\": {},\n  \"e_frozen_core\": {},\n  \
             \"terms\": {{\"hamiltonian\": {h}, \"number\": {n}, \"s2\": {s2}}}\n}}\n",
            self.source.as_deref().map(json_string).unwrap_or_else(|| "null".into()),
            json_string(self.mapping.as_str()),
            json_string(self.ordering.as_str()),
            self.n_qubits(),
            self.n_electrons(),
            fmt_f64(self.integrals.v_nn),
            fmt_f64(self.integrals.e_frozen_core),
        )
    }
}

/// Rows of the standard adaptation grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridRow {
    Neutral,
    Cation,
    Anion,
    Singlet,
    Triplet,
}

impl GridRow {
    pub const ALL: [GridRow; 5] = [
        GridRow::Neutral,
        GridRow::Cation,
        GridRow::Anion,
        GridRow::Singlet,
        GridRow::Triplet,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GridRow::Neutral => "neutral",
            GridRow::Cation => "cation",
            GridRow::Anion => "anion",
            GridRow::Singlet => "singlet",
            GridRow::Triplet => "triplet",
        }
    }

    pub fn spec(&self, sys: &QubitSystem) -> Result<SymmetrySpec> {
        let n = sys.n_electrons();
        match self {
            GridRow::Neutral => sys.number_spec(n),
            GridRow::Cation => {
                let n = n.checked_sub(1).ok_or_else(|| Error::Contract("no electron to remove".into()))?;
                sys.number_spec(n)
            }
            GridRow::Anion => sys.number_spec(n + 1),
            GridRow::Singlet => sys.spin_spec(0.0),
            GridRow::Triplet => sys.spin_spec(1.0),
        }
    }

    /// The reflection variant used in the grid: the singlet row uses the
    /// simplified `H - H S^2 - S^2 H`.
    pub fn reflection_method(&self) -> Method {
        match self {
            GridRow::Singlet => Method::ReflectionSinglet,
            _ => Method::Reflection,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GridEntry {
    pub row: GridRow,
    pub projected: AdaptedOperator,
    pub shifted: AdaptedOperator,
    pub reflected: AdaptedOperator,
}

impl GridEntry {
    pub fn counts(&self) -> (usize, usize, usize) {
        (
            self.projected.term_count(),
            self.shifted.term_count(),
            self.reflected.term_count(),
        )
    }

    pub fn operators(&self) -> [&AdaptedOperator; 3] {
        [&self.projected, &self.shifted, &self.reflected]
    }
}

pub fn adaptation_grid(sys: &QubitSystem, mu: f64, dense_limit: usize) -> Result<Vec<GridEntry>> {
    GridRow::ALL
        .iter()
        .map(|&row| {
            let spec = row.spec(sys)?;
            Ok(GridEntry {
                row,
                projected: sys.adapt(&spec, Method::LowdinPhp, mu, dense_limit)?,
                shifted: sys.adapt(&spec, Method::Shift, mu, dense_limit)?,
                reflected: sys.adapt(&spec, row.reflection_method(), mu, dense_limit)?,
            })
        })
        .collect()
}

pub fn grid_table(entries: &[GridEntry]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<10} {:>8} {:>8} {:>8}", "target", "PHP", "shift", "reflect");
    for e in entries {
        let (p, s, r) = e.counts();
        let mark = if e.row.reflection_method() == Method::ReflectionSinglet { "*" } else { "" };
        let _ = writeln!(out, "{:<10} {p:>8} {s:>8} {:>8}", e.row.name(), format!("{r}{mark}"));
    }
    out
}

pub fn grid_json(sys: &QubitSystem, entries: &[GridEntry]) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(
        out,
        "  \"source\": {},\n  \"mapping\": {},\n  \"rows\": [",
        sys.source.as_deref().map(json_string).unwrap_or_else(|| "null".into()),
        json_string(sys.mapping.as_str())
    );
    for (i, e) in entries.iter().enumerate() {
        let (p, s, r) = e.counts();
        let _ = write!(
            out,
            "    {{\"row\": {}, \"php\": {p}, \"shift\": {s}, \"reflect\": {r}, \"reflect_method\": {}}}",
            json_string(e.row.name()),
            json_string(e.row.reflection_method().as_str())
        );
        out.push_str(if i + 1 < entries.len() { ",\n" } else { "\n" });
    }
    out.push_str("  ]\n}\n");
    out
}

/// One adapted operator evaluated on the labeled eigenbasis of `H`.
#[derive(Clone, Debug)]
pub struct SpectrumColumn {
    pub name: String,
    pub method: Method,
    /// Ascending spectrum of the adapted operator.
    pub values: Vec<f64>,
    /// Expectation of the adapted operator on each labeled eigenvector of `H`.
    pub on_levels: Vec<f64>,
    pub report: SpectrumMatchReport,
    matched: Vec<bool>,
}

impl SpectrumColumn {
    /// Whether entry `index` of `values` reproduces a target-sector level.
    pub fn matched(&self, index: usize) -> bool {
        self.matched[index]
    }
}

#[derive(Clone, Debug)]
pub struct SpectraReport {
    pub spec: SymmetrySpec,
    pub spectrum: LabeledSpectrum,
    pub columns: Vec<SpectrumColumn>,
}

fn column_name(m: Method) -> &'static str {
    match m {
        Method::LowdinPhp => "PHP",
        Method::LowdinHp => "HP",
        Method::Shift => "shift",
        Method::Reflection => "reflect",
        Method::ReflectionSinglet => "reflect-S0",
        Method::SumOverStates => "SOS",
    }
}

/// Labels the spectrum of `H` and adds one column per method.
pub fn spectra(
    sys: &QubitSystem,
    spec: &SymmetrySpec,
    methods: &[Method],
    mu: f64,
    dense_limit: usize,
) -> Result<SpectraReport> {
    let spectrum = sys.label(dense_limit)?;
    let mut columns = Vec::with_capacity(methods.len());
    for &method in methods {
        if matches!(method, Method::Reflection | Method::ReflectionSinglet) {
            let positive = symmetry::positive_non_target_levels(&spectrum, spec);
            if !positive.is_empty() {
                warn!(
                    "{} non-target levels have positive energy; reflection will not raise them",
                    positive.len()
                );
            }
        }
        let op = sys.adapt(spec, method, mu, dense_limit)?;
        let eigen = spectral::eigenvalues(&op.result, dense_limit)?;
        let report = compare_spectra(&spectrum, &eigen, spec, Transform::of(&op))?;
        let on_levels = (0..spectrum.len())
            .map(|k| Ok(op.result.expectation(&spectrum.eigensystem.vector(k))?.re))
            .collect::<Result<Vec<f64>>>()?;
        let mut matched = vec![false; eigen.len()];
        for i in report.matched_transformed() {
            matched[i] = true;
        }
        columns.push(SpectrumColumn {
            name: column_name(method).to_owned(),
            method,
            values: eigen,
            on_levels,
            report,
            matched,
        });
    }
    Ok(SpectraReport {
        spec: spec.clone(),
        spectrum,
        columns,
    })
}

fn spin_label(s: f64) -> String {
    format!("{:.1}", s)
}

impl SpectraReport {
    /// Aligned text table: the labeled levels of `H` next to the ascending
    /// spectrum of every adapted operator; entries reproducing a
    /// target-sector level are starred.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{:>5}  {:>8}  {:>14}", "level", "(N, S)", "H");
        for c in &self.columns {
            let _ = write!(out, "  {:>15}", c.name);
        }
        out.push('\n');
        for (k, l) in self.spectrum.levels.iter().enumerate() {
            let label = format!("({}, {})", l.n_label(), spin_label(l.s_label()));
            let _ = write!(out, "{k:>5}  {label:>8}  {:>14.7}", l.energy);
            for c in &self.columns {
                let star = if c.matched(k) { "*" } else { " " };
                let _ = write!(out, "  {:>14.7}{star}", c.values[k]);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        let _ = writeln!(
            out,
            "  \"symmetry\": {},\n  \"target\": {},",
            json_string(self.spec.kind.as_str()),
            fmt_f64(self.spec.target)
        );
        let names: Vec<String> = self.columns.iter().map(|c| json_string(&c.name)).collect();
        let _ = writeln!(out, "  \"columns\": [{}],", names.join(", "));
        out.push_str("  \"levels\": [");
        for (k, l) in self.spectrum.levels.iter().enumerate() {
            let _ = write!(
                out,
                "{}\n    {{\"level\": {k}, \"energy\": {}, \"n\": {}, \"s\": {}, \"s2\": {}, \"group\": {}, \"values\": [",
                if k > 0 { "," } else { "" },
                fmt_f64(l.energy),
                fmt_f64(l.n),
                fmt_f64(l.s),
                fmt_f64(l.s2),
                l.group
            );
            let vals: Vec<String> = self
                .columns
                .iter()
                .map(|c| {
                    format!(
                        "{{\"value\": {}, \"matched\": {}, \"on_level\": {}}}",
                        fmt_f64(c.values[k]),
                        c.matched(k),
                        fmt_f64(c.on_levels[k])
                    )
                })
                .collect();
            out.push_str(&vals.join(", "));
            out.push_str("]}");
        }
        out.push_str("\n  ],\n  \"reports\": [");
        for (i, c) in self.columns.iter().enumerate() {
            let _ = write!(
                out,
                "{}\n    {{\"column\": {}, \"matched\": {}, \"unmatched\": {}, \"max_match_deviation\": {}, \"max_prediction_deviation\": {}}}",
                if i > 0 { "," } else { "" },
                json_string(&c.name),
                c.report.matched,
                c.report.unmatched,
                fmt_f64(c.report.max_match_deviation),
                fmt_f64(c.report.max_prediction_deviation)
            );
        }
        out.push_str("\n  ]\n}\n");
        out
    }
}

/// `<L> - <H> - (mu/2) Var(A) - (mu/2) (<A> - a_i)^2` on `psi`.
pub fn penalty_identity_residual(
    h: &PauliSum,
    shifted: &PauliSum,
    spec: &SymmetrySpec,
    mu: f64,
    psi: &StateVector,
) -> Result<f64> {
    let l = shifted.expectation(psi)?.re;
    let e = h.expectation(psi)?.re;
    let a = spec.operator.expectation(psi)?.re;
    let var = spec.operator.variance(psi)?;
    Ok(l - e - 0.5 * mu * var - 0.5 * mu * (a - spec.target).powi(2))
}

/// Operator JSON with a provenance block naming the source and run.
pub fn operator_document(name: &str, op: &PauliSum, sys: &QubitSystem, run: Option<&serde_json::Value>) -> String {
    format!(
        "{{\n  {},\n  \"provenance\": {{\n    \"operator\": {},\n    \"mapping\": {},\n    \"ordering\": {},\n    \
         \"threshold\": {},\n    \"fixture\": {},\n    \"run\": {}\n  }}\n}}\n",
        op.json_fields(),
        json_string(name),
        json_string(sys.mapping.as_str()),
        json_string(sys.ordering.as_str()),
        fmt_f64(sys.threshold),
        sys.source.as_deref().map(json_string).unwrap_or_else(|| "null".into()),
        run.map(|v| v.to_string()).unwrap_or_else(|| "null".into()),
    )
}
