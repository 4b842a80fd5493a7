//! JSON shapes for vectors and matrices.

use blockenc::{CMatrix, CVector, C64};
use serde_json::{json, Value};

/// Imaginary parts at or below this print as real numbers.
const REAL_CUTOFF: f64 = 1e-12;

fn entry(z: &C64, real: bool) -> Value {
    if real { json!(z.re) } else { json!([z.re, z.im]) }
}

fn all_real<'a>(it: impl IntoIterator<Item = &'a C64>) -> bool {
    it.into_iter().all(|z| z.im.abs() <= REAL_CUTOFF)
}

/// Real entries as numbers, otherwise every entry as `[re, im]`.
pub fn vector_json(v: &CVector) -> Value {
    let real = all_real(v.iter());
    Value::Array(v.iter().map(|z| entry(z, real)).collect())
}

/// Row-major list of rows.
pub fn matrix_json(m: &CMatrix) -> Value {
    let real = all_real(m.iter());
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| entry(&m[(i, j)], real)).collect()))
            .collect(),
    )
}

/// Parses a JSON list of numbers or `[re, im]` pairs.
pub fn parse_vector(v: &Value) -> Option<CVector> {
    let items = v.as_array()?;
    let entries = items
        .iter()
        .map(|x| match x {
            Value::Number(n) => n.as_f64().map(|re| C64::new(re, 0.0)),
            Value::Array(p) if p.len() == 2 => Some(C64::new(p[0].as_f64()?, p[1].as_f64()?)),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()?;
    Some(CVector::from_vec(entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_and_complex_forms() {
        let v = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 1e-14)]);
        assert_eq!(vector_json(&v), json!([1.0, 0.0]));
        let w = CVector::from_vec(vec![C64::new(1.0, 0.5)]);
        assert_eq!(vector_json(&w), json!([[1.0, 0.5]]));
        assert_eq!(parse_vector(&json!([1, [0, 2]])).unwrap()[1], C64::new(0.0, 2.0));
        assert!(parse_vector(&json!(["x"])).is_none());
    }
}
