use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use serde_json::{Map, Number, Value};

/// A float with 17 significant digits, enough to round-trip any `f64`.
/// Non-finite values become `null`.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(Number::from_str(&text).expect("formatted float is a JSON number"))
}

pub fn complex(c: Complex64) -> Value {
    object([("re", float(c.re)), ("im", float(c.im))])
}

pub fn complex_list(values: &[Complex64]) -> Value {
    Value::Array(values.iter().copied().map(complex).collect())
}

pub fn ratio(r: Ratio<i64>) -> Value {
    object([("num", Value::from(*r.numer())), ("den", Value::from(*r.denom()))])
}

pub fn opt<T>(v: Option<T>, f: impl FnOnce(T) -> Value) -> Value {
    v.map_or(Value::Null, f)
}

pub fn object<'a>(entries: impl IntoIterator<Item = (&'a str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}
