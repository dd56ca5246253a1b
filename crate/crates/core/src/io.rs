//! JSON encodings of matrices, polynomials and results.
//!
//! A quaternion is `[a, b, c, d]`, a complex number `[re, im]`, and a
//! polynomial its ascending coefficient array.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::check::Residual;
use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::expmap::ExpJcdReport;
use crate::generate::GeneratedInstance;
use crate::hmat::HMatrix;
use crate::jcd::{AdditiveJcd, MultiplicativeJcd};
use crate::jordan::{JordanBlock, JordanResult, JordanSpec};
use crate::poly::RealPoly;
use crate::quat::Quaternion;
use crate::spectral::{EigenKind, Spectrum};

/// How quaternion entries are rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    /// `[a, b, c, d]` arrays.
    #[default]
    Machine,
    /// Aligned `"a+bi+cj+dk"` strings.
    Pretty,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| parse_err(format!("{what}: expected a number, got {v}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what}: expected an array")))
}

pub fn quaternion_from_json(v: &Value) -> Result<Quaternion> {
    let parts = array(v, "quaternion")?;
    if parts.len() != 4 {
        return Err(parse_err(format!("quaternion needs 4 components, got {}", parts.len())));
    }
    let c: Vec<f64> = parts.iter().map(|p| number(p, "quaternion component")).collect::<Result<_>>()?;
    Quaternion::try_new(c[0], c[1], c[2], c[3])
}

/// Drops the sign of negative zero.
fn clean(x: f64) -> f64 {
    x + 0.0
}

pub fn quaternion_to_json(q: Quaternion) -> Value {
    json!([clean(q.a), clean(q.b), clean(q.c), clean(q.d)])
}

/// `a+bi+cj+dk` with six significant decimals.
pub fn format_quaternion(q: Quaternion) -> String {
    let mut out = trim(q.a).to_string();
    for (x, unit) in [(q.b, 'i'), (q.c, 'j'), (q.d, 'k')] {
        let sign = if x < 0.0 { '-' } else { '+' };
        out.push_str(&format!("{sign}{}{unit}", trim(x.abs())));
    }
    out
}

fn trim(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Also accepts a record whose `"A"` field is a matrix, such as the output
/// of instance generation.
pub fn matrix_from_json(v: &Value) -> Result<HMatrix> {
    let obj = v.as_object().ok_or_else(|| parse_err("matrix: expected an object with \"n\" and \"rows\""))?;
    if !obj.contains_key("rows") {
        if let Some(inner) = obj.get("A") {
            return matrix_from_json(inner);
        }
    }
    let rows = array(obj.get("rows").ok_or_else(|| parse_err("matrix: missing \"rows\""))?, "rows")?;
    let rows: Vec<Vec<Quaternion>> = rows
        .iter()
        .map(|r| array(r, "row")?.iter().map(quaternion_from_json).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    if let Some(n) = obj.get("n") {
        let n = n.as_u64().ok_or_else(|| parse_err("matrix: \"n\" must be a nonnegative integer"))? as usize;
        if n != rows.len() {
            return Err(Error::Dimension(format!("\"n\" is {n} but {} rows were given", rows.len())));
        }
    }
    HMatrix::from_rows(&rows)
}

pub fn parse_matrix(text: &str) -> Result<HMatrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    matrix_from_json(&v)
}

pub fn matrix_to_json(a: &HMatrix, style: Style) -> Value {
    let n = a.n();
    let rows: Vec<Value> = match style {
        Style::Machine => (0..n).map(|i| Value::Array(a.row(i).iter().map(|&q| quaternion_to_json(q)).collect())).collect(),
        Style::Pretty => {
            let cells: Vec<String> = a.entries().iter().map(|&q| format_quaternion(q)).collect();
            let width = cells.iter().map(String::len).max().unwrap_or(0);
            cells.chunks(n).map(|r| Value::Array(r.iter().map(|c| json!(format!("{c:>width$}"))).collect())).collect()
        }
    };
    json!({ "n": n, "rows": rows })
}

fn complex_to_json(z: Complex64) -> Value {
    json!([clean(z.re), clean(z.im)])
}

pub fn cmatrix_to_json(m: &CMatrix) -> Value {
    let entries: Vec<Value> =
        (0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|&z| complex_to_json(z)).collect())).collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

pub fn poly_to_json(p: &RealPoly) -> Value {
    json!(p.coeffs().iter().map(|&c| clean(c)).collect::<Vec<_>>())
}

pub fn charpoly_to_json(p: &RealPoly) -> Value {
    json!({ "coeffs": poly_to_json(p) })
}

pub fn spectrum_to_json(s: &Spectrum) -> Value {
    Value::Array(
        s.entries()
            .iter()
            .map(|e| {
                let kind = match e.kind {
                    EigenKind::Real => "real",
                    EigenKind::Pair => "pair",
                };
                json!({ "re": clean(e.value.re), "im": clean(e.value.im), "mult": e.mult, "kind": kind })
            })
            .collect(),
    )
}

pub fn spec_to_json(spec: &JordanSpec) -> Value {
    Value::Array(spec.blocks().iter().map(|b| json!({ "re": clean(b.value.re), "im": clean(b.value.im), "size": b.size })).collect())
}

pub fn spec_from_json(v: &Value) -> Result<JordanSpec> {
    let blocks = array(v, "spec")?
        .iter()
        .map(|b| {
            let re = number(b.get("re").unwrap_or(&json!(0.0)), "re")?;
            let im = number(b.get("im").unwrap_or(&json!(0.0)), "im")?;
            let size = b
                .get("size")
                .and_then(Value::as_u64)
                .filter(|&s| s > 0)
                .ok_or_else(|| parse_err("spec block needs a positive integer \"size\""))?;
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::NonFinite);
            }
            Ok(JordanBlock { value: Complex64::new(re, im), size: size as usize })
        })
        .collect::<Result<Vec<_>>>()?;
    if blocks.is_empty() {
        return Err(parse_err("spec needs at least one block"));
    }
    JordanSpec::new(blocks)
}

pub fn parse_spec(text: &str) -> Result<JordanSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    spec_from_json(&v)
}

pub fn jordan_to_json(jr: &JordanResult, style: Style) -> Value {
    json!({ "spec": spec_to_json(&jr.spec), "P": matrix_to_json(&jr.p, style), "residual": jr.residual })
}

pub fn residuals_to_json(rs: &[Residual]) -> Value {
    let mut map = Map::new();
    for r in rs {
        let mut entry = json!({ "value": r.value, "bound": r.bound, "passed": r.passed() });
        if r.advisory {
            entry["advisory"] = json!(true);
        }
        map.insert(r.name.to_string(), entry);
    }
    Value::Object(map)
}

pub fn additive_to_json(d: &AdditiveJcd, style: Style) -> Value {
    json!({
        "S": matrix_to_json(&d.s, style),
        "N": matrix_to_json(&d.n, style),
        "f": poly_to_json(&d.f),
        "g": poly_to_json(&d.g),
        "deg_f": d.f.degree(),
        "residuals": residuals_to_json(&d.residuals),
    })
}

pub fn multiplicative_to_json(d: &MultiplicativeJcd, style: Style) -> Value {
    json!({
        "S": matrix_to_json(&d.s, style),
        "U": matrix_to_json(&d.u, style),
        "f": poly_to_json(&d.f),
        "h": poly_to_json(&d.h),
        "deg_f": d.f.degree(),
        "residuals": residuals_to_json(&d.residuals),
    })
}

pub fn exp_jcd_to_json(r: &ExpJcdReport, style: Style) -> Value {
    json!({
        "A": matrix_to_json(&r.a, style),
        "expA": matrix_to_json(&r.exp_a, style),
        "S": matrix_to_json(&r.s, style),
        "N": matrix_to_json(&r.n, style),
        "S_exp": matrix_to_json(&r.s_exp, style),
        "U_exp": matrix_to_json(&r.u_exp, style),
        "residuals": {
            "exp(S) = S'": r.semisimple_residual,
            "exp(N) = U'": r.unipotent_residual,
            "scale": r.scale,
        },
    })
}

pub fn generated_to_json(g: &GeneratedInstance, style: Style) -> Value {
    json!({
        "A": matrix_to_json(&g.a, style),
        "P": matrix_to_json(&g.p, style),
        "spec": spec_to_json(&g.spec),
        "cond": g.cond,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let a = HMatrix::from_rows(&[
            vec![Quaternion::new(1.0, 2.0, 3.0, 4.0), Quaternion::J],
            vec![Quaternion::K, Quaternion::new(-0.5, 0.0, 0.0, 1e-300)],
        ])
        .unwrap();
        let text = matrix_to_json(&a, Style::Machine).to_string();
        assert_eq!(parse_matrix(&text).unwrap(), a);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_matrix("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix(r#"{"n": 1, "rows": [[[1, 2, 3]]]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix(r#"{"n": 2, "rows": [[[1, 0, 0, 0]]]}"#), Err(Error::Dimension(_))));
        assert!(matches!(parse_matrix(r#"{"rows": [[[1, 0, 0, 0], [0, 0, 0, 0]]]}"#), Err(Error::Dimension(_))));
    }

    #[test]
    fn pretty_entries() {
        assert_eq!(format_quaternion(Quaternion::new(1.0, -2.5, 0.0, 1.0 / 3.0)), "1-2.5i+0j+0.333333k");
        let a = HMatrix::from_rows(&[vec![Quaternion::ONE, Quaternion::new(-10.0, 0.0, 0.0, 0.0)], vec![
            Quaternion::ZERO,
            Quaternion::ZERO,
        ]])
        .unwrap();
        let v = matrix_to_json(&a, Style::Pretty);
        let widths: Vec<usize> =
            v["rows"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).map(|c| c.as_str().unwrap().len()).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn spec_round_trip() {
        let spec = parse_spec(r#"[{"re": 0, "im": -1, "size": 2}, {"re": 1, "size": 1}]"#).unwrap();
        assert_eq!(spec.dim(), 3);
        assert!(spec.blocks().iter().all(|b| b.value.im >= 0.0));
        let again = spec_from_json(&spec_to_json(&spec)).unwrap();
        assert_eq!(again, spec);
    }
}
