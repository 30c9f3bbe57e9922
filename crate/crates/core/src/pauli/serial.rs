//! Canonical JSON form of a [`PauliSum`].
//!
//! ```text
//! {"n_qubits": 6, "threshold": 1e-10,
//!  "terms": [{"word": "X0 Y3", "re": ..., "im": ...}, ...]}
//! ```
//!
//! Coefficients are given in the X/Y/Z basis, terms follow the canonical
//! `(z_mask, x_mask)` order and every float is printed with 17 significant
//! digits, so equal operators serialize to identical bytes.

use num_complex::Complex64;
use serde::Deserialize;

use super::sum::PauliSum;
use super::word::PauliWord;
use crate::error::{Error, Result};

/// `x` with 17 significant digits in exponent form (valid JSON).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

impl PauliSum {
    /// Body fields (`n_qubits`, `threshold`, `terms`) without enclosing braces.
    pub(crate) fn json_fields(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("\"n_qubits\": {},\n", self.n_qubits()));
        out.push_str(&format!("  \"threshold\": {},\n", fmt_f64(self.threshold())));
        out.push_str("  \"terms\": [");
        for (i, (w, c)) in self.iter_xyz().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "\n    {{\"word\": {}, \"re\": {}, \"im\": {}}}",
                json_string(&w.to_string()),
                fmt_f64(c.re),
                fmt_f64(c.im)
            ));
        }
        if self.term_count() > 0 {
            out.push_str("\n  ");
        }
        out.push(']');
        out
    }

    pub fn to_json(&self) -> String {
        format!("{{\n  {}\n}}\n", self.json_fields())
    }

    pub fn from_json(text: &str) -> Result<PauliSum> {
        let doc: SumDocument = serde_json::from_str(text)?;
        doc.into_sum()
    }
}

#[derive(Deserialize)]
pub(crate) struct TermDocument {
    word: String,
    re: f64,
    im: f64,
}

#[derive(Deserialize)]
pub(crate) struct SumDocument {
    n_qubits: usize,
    threshold: f64,
    terms: Vec<TermDocument>,
}

impl SumDocument {
    pub(crate) fn into_sum(self) -> Result<PauliSum> {
        if !(self.threshold >= 0.0) {
            return Err(Error::Contract(format!(
                "negative threshold {} in operator document",
                self.threshold
            )));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((PauliWord::parse(&t.word, self.n_qubits)?, Complex64::new(t.re, t.im))))
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliSum::from_xyz_terms(self.n_qubits, terms).simplify(self.threshold))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_y_and_identity() {
        let s = PauliSum::from_xyz_terms(
            4,
            [
                (PauliWord::identity(4), Complex64::new(-1.5, 0.0)),
                (PauliWord::parse("X0 Y3", 4).unwrap(), Complex64::new(0.25, 0.0)),
            ],
        );
        let text = s.to_json();
        assert!(text.contains("\"word\": \"I\", \"re\": -1.5000000000000000e0"));
        assert!(text.contains("\"word\": \"X0 Y3\", \"re\": 2.5000000000000000e-1, \"im\": 0.0000000000000000e0"));
        let back = PauliSum::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn empty_sum_roundtrips() {
        let s = PauliSum::zero(2);
        assert_eq!(PauliSum::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn rejects_bad_word() {
        let doc = r#"{"n_qubits": 2, "threshold": 1e-10, "terms": [{"word": "X5", "re": 1, "im": 0}]}"#;
        assert!(PauliSum::from_json(doc).is_err());
    }
}
