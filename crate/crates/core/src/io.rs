//! JSON channel specifications and report serialization.
//!
//! A channel file looks like `{"kind": "kraus", "dim": 2, "data": [...]}`.
//! Complex entries are `[re, im]` pairs (a bare number is read as real);
//! `"stochastic"` data is a plain real matrix.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::channel::{Channel, ChannelForm, DensityOperator, StochasticMatrix};
use crate::choi::{PropertyReport, RepresentativeOperator};
use crate::error::{Error, Result};
use crate::kernel::{ComplexMatrix, C64};

/// Significant digits kept in JSON and CSV output.
pub const OUTPUT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(untagged)]
enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

impl From<Entry> for C64 {
    fn from(e: Entry) -> C64 {
        match e {
            Entry::Pair([re, im]) => C64::new(re, im),
            Entry::Real(re) => C64::new(re, 0.0),
        }
    }
}

/// Raw shape of a channel file.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct ChannelSpec {
    pub kind: String,
    pub dim: usize,
    pub data: Value,
}

fn parse_matrix(v: &Value, rows: usize, what: &str) -> Result<ComplexMatrix> {
    let raw: Vec<Vec<Entry>> =
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("{what}: {e}")))?;
    if raw.len() != rows || raw.iter().any(|r| r.len() != rows) {
        return Err(Error::Parse(format!("{what} must be {rows}x{rows}")));
    }
    let rows: Vec<Vec<C64>> = raw.into_iter().map(|r| r.into_iter().map(C64::from).collect()).collect();
    ComplexMatrix::from_rows(&rows)
}

impl ChannelSpec {
    pub fn into_channel(self) -> Result<Channel> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        match self.kind.as_str() {
            "superop" => Channel::superoperator(n, parse_matrix(&self.data, n * n, "superop data")?),
            "kraus" => {
                let list = self.data.as_array().ok_or_else(|| Error::Parse("kraus data must be a list".into()))?;
                let ops = list
                    .iter()
                    .enumerate()
                    .map(|(k, m)| parse_matrix(m, n, &format!("Kraus operator {k}")))
                    .collect::<Result<Vec<_>>>()?;
                Channel::kraus(ops)
            }
            "stochastic" => {
                let rows: Vec<Vec<f64>> = serde_json::from_value(self.data)
                    .map_err(|e| Error::Parse(format!("stochastic data: {e}")))?;
                if rows.len() != n {
                    return Err(Error::Parse(format!("stochastic data must have {n} rows")));
                }
                Ok(crate::channel::classical_embed(StochasticMatrix::new(rows)?))
            }
            "state" => Ok(crate::channel::state_channel(DensityOperator::new(parse_matrix(
                &self.data,
                n,
                "state data",
            )?)?)),
            other => Err(Error::Parse(format!("unknown channel kind {other:?}"))),
        }
    }

    /// Specification in the channel's own storage form.
    pub fn from_channel(t: &Channel) -> Result<Self> {
        let data = match t.form() {
            ChannelForm::Superoperator(l) => matrix_json(l),
            ChannelForm::Kraus(ops) => Value::Array(ops.iter().map(matrix_json).collect()),
            ChannelForm::Stochastic(s) => json!(s.rows()),
            ChannelForm::State(theta) => matrix_json(theta.matrix()),
        };
        Ok(Self { kind: t.kind().to_string(), dim: t.dim(), data })
    }

    /// Superoperator-form specification of any channel.
    pub fn superop(t: &Channel) -> Result<Self> {
        Ok(Self { kind: "superop".into(), dim: t.dim(), data: matrix_json(&t.superoperator_matrix()?) })
    }
}

pub fn parse_channel(text: &str) -> Result<Channel> {
    let spec: ChannelSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.into_channel()
}

pub fn channel_to_json(t: &Channel) -> Result<String> {
    serde_json::to_string_pretty(&ChannelSpec::from_channel(t)?).map_err(|e| Error::Internal(e.to_string()))
}

pub fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        m.to_rows().into_iter().map(|r| Value::Array(r.into_iter().map(|z| json!([z.re, z.im])).collect())).collect(),
    )
}

pub fn property_json(r: &PropertyReport) -> Value {
    json!({
        "A": r.a,
        "B": r.b,
        "C": r.c,
        "B_literal": r.b_literal,
        "min_eigenvalue": r.min_eigenvalue,
        "min_quadratic_form": r.min_quadratic_form,
        "B_deviation": r.b_deviation,
        "C_deviation": r.c_deviation,
    })
}

pub fn representative_json(rho: &RepresentativeOperator) -> Value {
    json!({
        "n": rho.dim(),
        "matrix": matrix_json(rho.matrix()),
        "spectrum": rho.spectrum().values,
        "trace": rho.trace(),
        "partial_trace_deviation": rho.partial_trace_deviation(),
    })
}

/// Round a float to [`OUTPUT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", OUTPUT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Round every float in a JSON tree in place; integers are left alone.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            if let Some(r) = num.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *num = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn to_output_json(mut v: Value) -> String {
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn format_csv_number(x: f64) -> String {
    format!("{}", round_sig(x))
}

/// Comma-separated rows with a header and LF line endings.
pub fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.into_iter().map(format_csv_number).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{"kind": "stochastic", "dim": 2, "data": [[0.5, 0.5], [0.5, 0.5]]}"#;

    #[test]
    fn parses_each_kind() {
        assert_eq!(parse_channel(EXAMPLE).unwrap().kind(), "stochastic");
        let k = r#"{"kind": "kraus", "dim": 2, "data": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        assert_eq!(parse_channel(k).unwrap().kind(), "kraus");
        let s = r#"{"kind": "state", "dim": 2, "data": [[0.5, 0], [0, [0.5, 0]]]}"#;
        assert_eq!(parse_channel(s).unwrap().kind(), "state");
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_channel("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_channel(r#"{"kind": "foo", "dim": 2, "data": []}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_channel(r#"{"kind": "stochastic", "dim": 3, "data": [[1, 0], [0, 1]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(parse_channel(r#"{"kind": "stochastic", "dim": 2, "data": [[0.4, 0.4], [0, 1]]}"#).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let t = parse_channel(EXAMPLE).unwrap();
        let again = parse_channel(&channel_to_json(&t).unwrap()).unwrap();
        assert_eq!(t, again);
        let sup = ChannelSpec::superop(&t).unwrap().into_channel().unwrap();
        assert!(t.max_deviation(&sup).unwrap() < 1e-15);
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(2.0 / 3.0), 0.666666666667);
        assert_eq!(round_sig(-1.0e-20 / 3.0), -3.33333333333e-21);
        let mut v = json!({"a": [1, 0.30000000000000004]});
        round_json(&mut v);
        assert_eq!(v.to_string(), r#"{"a":[1,0.3]}"#);
    }

    #[test]
    fn csv_layout() {
        let s = to_csv(&["p", "h"], vec![vec![0.5, 0.1 + 0.2]]);
        assert_eq!(s, "p,h\n0.5,0.3\n");
    }
}
