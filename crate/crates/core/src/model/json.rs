//! JSON model files.
//!
//! ```json
//! {"lambda_count": 2,
//!  "outcomes": {"A": {"x": [1, -1], "x'": [1, 1]}, "B": {"y": [1, 1], "y'": [-1, 1]}},
//!  "cond_probs": {"x,y": ["1/2", "1/2"], "x,y'": [1, 0], "x',y": [0.25, 0.75], "x',y'": ["1/3", "2/3"]},
//!  "settings": {"x,y": "1/4", "x,y'": "1/4", "x',y": "1/4", "x',y'": "1/4"},
//!  "label": "example"}
//! ```
//!
//! Probabilities are exact when written as `"p/q"` strings or integers and
//! floating point when written as decimal numbers. A file with any decimal
//! probability loads as an `f64` model; otherwise it loads exactly.
//! `settings` is optional and defaults to uniform.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{validate_model, ConditionalTable, HiddenVariableModel, OutcomeTable, SettingsDistribution, ValidationReport};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Number, Rational, Scalar};

/// A model with whichever number type its source called for.
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum AnyModel {
    Exact(HiddenVariableModel<Rational>),
    Float(HiddenVariableModel<f64>),
}

impl AnyModel {
    pub fn is_exact(&self) -> bool {
        matches!(self, AnyModel::Exact(_))
    }

    pub fn label(&self) -> &str {
        match self {
            AnyModel::Exact(m) => m.label(),
            AnyModel::Float(m) => m.label(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            AnyModel::Exact(m) => validate_model(m),
            AnyModel::Float(m) => validate_model(m),
        }
    }

    pub fn to_float(&self) -> HiddenVariableModel<f64> {
        match self {
            AnyModel::Exact(m) => m.to_float(),
            AnyModel::Float(m) => m.clone(),
        }
    }

    pub fn to_json_value(&self) -> Value {
        match self {
            AnyModel::Exact(m) => model_to_json(m),
            AnyModel::Float(m) => model_to_json(m),
        }
    }

    /// Pretty-printed JSON with a fixed key order.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("model JSON serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    lambda_count: usize,
    outcomes: RawOutcomes,
    cond_probs: RawColumns,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    settings: Option<RawSettings>,
    #[serde(default)]
    label: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutcomes {
    #[serde(rename = "A")]
    alice: RawAlice,
    #[serde(rename = "B")]
    bob: RawBob,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlice {
    x: Vec<i64>,
    #[serde(rename = "x'")]
    x_prime: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBob {
    y: Vec<i64>,
    #[serde(rename = "y'")]
    y_prime: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawColumns {
    #[serde(rename = "x,y")]
    xy: Vec<Value>,
    #[serde(rename = "x,y'")]
    xy_prime: Vec<Value>,
    #[serde(rename = "x',y")]
    x_prime_y: Vec<Value>,
    #[serde(rename = "x',y'")]
    x_prime_y_prime: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSettings {
    #[serde(rename = "x,y")]
    xy: Value,
    #[serde(rename = "x,y'")]
    xy_prime: Value,
    #[serde(rename = "x',y")]
    x_prime_y: Value,
    #[serde(rename = "x',y'")]
    x_prime_y_prime: Value,
}

fn number_from_json(value: &Value, context: &str) -> Result<Number> {
    match value {
        Value::String(s) => parse_rational(s)
            .map(Number::Exact)
            .map_err(|e| Error::Format(format!("{context}: {e}"))),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Number::Exact(Rational::from_int(i)))
            } else {
                n.as_f64()
                    .map(Number::Float)
                    .ok_or_else(|| Error::Format(format!("{context}: unrepresentable number {n}")))
            }
        }
        other => Err(Error::Format(format!("{context}: expected a number or \"p/q\" string, found {other}"))),
    }
}

fn sign_from_json(value: i64) -> i32 {
    // Out-of-range values are kept recognisably invalid for the validator.
    i32::try_from(value).unwrap_or(i32::MAX)
}

/// Parses a model file's contents.
pub fn load_model_str(text: &str) -> Result<AnyModel> {
    let raw: RawModel = serde_json::from_str(text)?;
    let sign_col = |v: &[i64]| v.iter().map(|&s| sign_from_json(s)).collect::<Vec<_>>();
    let mut outcomes = OutcomeTable::new(
        sign_col(&raw.outcomes.alice.x),
        sign_col(&raw.outcomes.alice.x_prime),
        sign_col(&raw.outcomes.bob.y),
        sign_col(&raw.outcomes.bob.y_prime),
    );
    outcomes.lambda_count = raw.lambda_count;

    let column_values = [
        ("x,y", &raw.cond_probs.xy),
        ("x,y'", &raw.cond_probs.xy_prime),
        ("x',y", &raw.cond_probs.x_prime_y),
        ("x',y'", &raw.cond_probs.x_prime_y_prime),
    ];
    let mut columns: Vec<Vec<Number>> = Vec::with_capacity(4);
    for (name, values) in column_values {
        let col = values
            .iter()
            .enumerate()
            .map(|(i, v)| number_from_json(v, &format!("cond_probs[{name:?}][{i}]")))
            .collect::<Result<Vec<_>>>()?;
        columns.push(col);
    }
    let settings: Option<Vec<Number>> = match &raw.settings {
        None => None,
        Some(s) => Some(
            [
                ("x,y", &s.xy),
                ("x,y'", &s.xy_prime),
                ("x',y", &s.x_prime_y),
                ("x',y'", &s.x_prime_y_prime),
            ]
            .iter()
            .map(|(name, v)| number_from_json(v, &format!("settings[{name:?}]")))
            .collect::<Result<Vec<_>>>()?,
        ),
    };

    let all_exact = columns.iter().flatten().chain(settings.iter().flatten()).all(|n| n.as_exact().is_some());
    if all_exact {
        let exact = |n: &Number| n.as_exact().expect("checked exact").clone();
        Ok(AnyModel::Exact(assemble(outcomes, &columns, settings.as_deref(), raw.label, exact)))
    } else {
        Ok(AnyModel::Float(assemble(outcomes, &columns, settings.as_deref(), raw.label, Number::to_f64)))
    }
}

fn assemble<T: Scalar>(
    outcomes: OutcomeTable,
    columns: &[Vec<Number>],
    settings: Option<&[Number]>,
    label: String,
    convert: impl Fn(&Number) -> T,
) -> HiddenVariableModel<T> {
    let cond = ConditionalTable::new(std::array::from_fn(|j| columns[j].iter().map(&convert).collect()));
    let settings = match settings {
        Some(q) => SettingsDistribution::new(std::array::from_fn(|j| convert(&q[j]))),
        None => SettingsDistribution::uniform(),
    };
    HiddenVariableModel::new(outcomes, cond, settings, label)
}

fn model_to_json<T: Scalar>(model: &HiddenVariableModel<T>) -> Value {
    let signs = |v: &[i32]| v.iter().map(|&s| s as i64).collect::<Vec<_>>();
    let col = |j: usize| model.cond.columns[j].iter().map(Scalar::to_json).collect::<Vec<_>>();
    let raw = RawModel {
        lambda_count: model.lambda_count(),
        outcomes: RawOutcomes {
            alice: RawAlice {
                x: signs(&model.outcomes.alice[0]),
                x_prime: signs(&model.outcomes.alice[1]),
            },
            bob: RawBob {
                y: signs(&model.outcomes.bob[0]),
                y_prime: signs(&model.outcomes.bob[1]),
            },
        },
        cond_probs: RawColumns {
            xy: col(0),
            xy_prime: col(1),
            x_prime_y: col(2),
            x_prime_y_prime: col(3),
        },
        settings: Some(RawSettings {
            xy: model.settings.q[0].to_json(),
            xy_prime: model.settings.q[1].to_json(),
            x_prime_y: model.settings.q[2].to_json(),
            x_prime_y_prime: model.settings.q[3].to_json(),
        }),
        label: model.label.clone(),
    };
    serde_json::to_value(raw).expect("model JSON serializes")
}

/// Reads and parses a model file.
pub fn load_model(path: impl AsRef<Path>) -> Result<AnyModel> {
    let text = std::fs::read_to_string(path)?;
    load_model_str(&text)
}

/// Writes a model file.
pub fn save_model(model: &AnyModel, path: impl AsRef<Path>) -> Result<()> {
    let mut text = model.to_json_string();
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::JointSetting;
    use proptest::prelude::*;

    const SAMPLE: &str = r#"{"lambda_count": 2,
        "outcomes": {"A": {"x": [1, -1], "x'": [1, 1]}, "B": {"y": [1, 1], "y'": [-1, 1]}},
        "cond_probs": {"x,y": ["1/2", "1/2"], "x,y'": [1, 0], "x',y": ["1/4", "3/4"], "x',y'": ["1/3", "2/3"]},
        "label": "sample"}"#;

    #[test]
    fn loads_exact_model_with_default_settings() {
        let m = load_model_str(SAMPLE).unwrap();
        let AnyModel::Exact(m) = m else {
            panic!("expected exact model")
        };
        assert_eq!(m.label(), "sample");
        assert!(m.settings().is_uniform());
        assert_eq!(m.cond().get(JointSetting::X_PRIME_Y_PRIME, 1), &Rational::from_ratio(2, 3));
        assert!(validate_model(&m).is_valid());
    }

    #[test]
    fn decimal_entries_give_float_model() {
        let text = SAMPLE.replace("\"1/4\", \"3/4\"", "0.25, 0.75");
        assert!(!load_model_str(&text).unwrap().is_exact());
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = load_model_str("{\"lambda_count\": 2,\n  \"outcomes\": ").unwrap_err();
        assert_eq!(err.kind(), "parse");
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn bad_rational_string_is_rejected() {
        let text = SAMPLE.replace("\"1/3\"", "\"one third\"");
        let err = load_model_str(&text).unwrap_err();
        assert!(err.to_string().contains("x',y'"), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = SAMPLE.replace("\"label\"", "\"lable\"");
        assert!(load_model_str(&text).is_err());
    }

    #[test]
    fn output_key_order_is_fixed() {
        let m = load_model_str(SAMPLE).unwrap();
        let text = m.to_json_string();
        let pos = |k: &str| text.find(k).unwrap();
        assert!(pos("lambda_count") < pos("outcomes"));
        assert!(pos("outcomes") < pos("cond_probs"));
        assert!(pos("cond_probs") < pos("settings"));
        assert!(pos("settings") < pos("label"));
        assert!(pos("\"x,y\"") < pos("\"x,y'\""));
        assert_eq!(text, load_model_str(&text).unwrap().to_json_string());
    }

    fn exact_model(cols: Vec<Vec<(i64, i64)>>) -> AnyModel {
        let n = cols[0].len();
        let columns = std::array::from_fn(|j| cols[j].iter().map(|&(a, b)| Rational::from_ratio(a, b)).collect());
        HiddenVariableModel::new(
            OutcomeTable::new(vec![1; n], vec![-1; n], vec![1; n], vec![1; n]),
            ConditionalTable::new(columns),
            SettingsDistribution::uniform(),
            "p",
        )
        .into_any()
    }

    proptest! {
        #[test]
        fn exact_round_trip_is_bit_exact(
            entries in prop::collection::vec((0i64..1000, 1i64..1000), 12)
        ) {
            let cols: Vec<Vec<(i64, i64)>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let m = exact_model(cols);
            let back = load_model_str(&m.to_json_string()).unwrap();
            prop_assert_eq!(back, m);
        }

        #[test]
        fn float_round_trip_within_tolerance(
            entries in prop::collection::vec(0.0f64..1.0, 12)
        ) {
            let columns: [Vec<f64>; 4] = std::array::from_fn(|j| entries[3 * j..3 * j + 3].to_vec());
            let m = HiddenVariableModel::new(
                OutcomeTable::new(vec![1; 3], vec![1; 3], vec![-1; 3], vec![1; 3]),
                ConditionalTable::new(columns.clone()),
                SettingsDistribution::uniform(),
                "f",
            );
            let AnyModel::Float(back) = load_model_str(&m.clone().into_any().to_json_string()).unwrap() else {
                return Err(TestCaseError::fail("expected float model"));
            };
            for js in JointSetting::ALL {
                for (a, b) in back.cond().column(js).iter().zip(m.cond().column(js)) {
                    prop_assert!((a - b).abs() <= 1e-15);
                }
            }
        }
    }
}
