//! Machine-readable reports: a versioned JSON envelope with deterministic
//! serialization. Rationals are strings (`p` or `p/q`), forms are arrays of
//! `{monomial, coeff}` objects, and object keys are emitted in sorted order,
//! so identical inputs produce byte-identical output.

use serde_json::{json, Value};

use crate::ce::CohClass;
use crate::exterior::Form;
use crate::linalg::QMatrix;
use crate::rational::{format_rational, Rational};

pub const SCHEMA: &str = "nilcohom/1";

pub fn rational_json(value: &Rational) -> Value {
    Value::String(format_rational(value))
}

pub fn rationals_json(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(rational_json).collect())
}

pub fn form_json(form: &Form) -> Value {
    Value::Array(
        form.terms()
            .map(|(monomial, coeff)| {
                json!({
                    "monomial": monomial.indices(),
                    "coeff": format_rational(coeff),
                })
            })
            .collect(),
    )
}

pub fn matrix_json(matrix: &QMatrix) -> Value {
    Value::Array(
        (0..matrix.rows())
            .map(|r| {
                Value::Array(
                    (0..matrix.cols())
                        .map(|c| rational_json(matrix.get(r, c)))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn class_json(class: &CohClass) -> Value {
    json!({
        "degree": class.degree,
        "coords": class.coords.iter().map(format_rational).collect::<Vec<_>>(),
    })
}

/// The top-level report envelope; field order is part of the format.
#[derive(Debug, serde::Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub input: String,
    pub results: Value,
    pub warnings: Vec<String>,
}

pub fn envelope(command: &str, input: &str, results: Value, warnings: &[String]) -> Report {
    Report {
        schema: SCHEMA,
        command: command.to_string(),
        input: input.to_string(),
        results,
        warnings: warnings.to_vec(),
    }
}

/// Pretty JSON with a trailing newline. Struct fields keep their declared
/// order and `serde_json` maps have sorted keys, so the bytes are a function
/// of the data alone.
pub fn render(report: &Report) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("JSON rendering cannot fail");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Monomial;
    use crate::rational::{rat, ratio};

    #[test]
    fn rendering_is_deterministic() {
        let form = Form::from_terms(
            4,
            [
                (Monomial::from_indices(&[1, 2], 4).unwrap(), ratio(-3, 2)),
                (Monomial::from_indices(&[3], 4).unwrap(), rat(2)),
            ],
        );
        let value = envelope("betti", "torus4", json!({"form": form_json(&form)}), &[]);
        let a = render(&value);
        let b = render(&value);
        assert_eq!(a, b);
        assert!(a.contains("\"-3/2\""));
        assert!(a.contains("nilcohom/1"));
        assert!(a.ends_with('\n'));
    }
}
