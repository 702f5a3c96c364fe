//! JSON input and output schemas.
//!
//! Exact quantities (rationals, big integers) are written as strings;
//! integers are accepted either as JSON numbers or as strings. Objects are
//! emitted with sorted keys, so identical inputs give identical bytes.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::entropy::{Certificate, Context, EntropyReport, Generator};
use crate::error::{Error, Result};
use crate::linalg::{CertifiedRadius, IntMatrix};
use crate::orbifold::{Mobius, ProjPoint, WeightData};
use crate::quiver::{DynkinType, ExtendedDynkin, Quiver};
use crate::sl2z::{PositiveWord, SL2Matrix};

/// Largest JSON document accepted by the parsers, in bytes.
pub const MAX_INPUT_BYTES: usize = 1 << 20;

/// Largest accepted decimal exponent in [`parse_rational`].
const MAX_EXPONENT: u32 = 1000;

/// Parses `p/q`, an integer, or a decimal with optional exponent (`1e-9`,
/// `-0.25`, `3.5E2`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if t.is_empty() || t.len() > 4096 {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = parse_integer(n).ok_or_else(bad)?;
        let d: BigInt = parse_integer(d).ok_or_else(bad)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(k) => {
            let e: i64 = t[k + 1..].parse().map_err(|_| bad())?;
            (&t[..k], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > MAX_EXPONENT as u64 {
        return Err(Error::Parse(format!("exponent out of range in {s:?}")));
    }
    let ten = BigInt::from(10).pow(scale.unsigned_abs() as u32);
    if scale >= 0 {
        value *= BigRational::from_integer(ten);
    } else {
        value /= BigRational::from_integer(ten);
    }
    Ok(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let t = s.trim();
    let body = t.strip_prefix(['-', '+']).unwrap_or(t);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

/// Canonical text form: `p/q` in lowest terms, or `p` for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_document(text: &str) -> Result<Value> {
    if text.len() > MAX_INPUT_BYTES {
        return Err(Error::Parse(format!("input exceeds {MAX_INPUT_BYTES} bytes")));
    }
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse(format!("{what} must be a JSON object")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be a JSON array")))
}

fn check_keys(m: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    match m.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::Parse(format!("unknown field {k:?} in {what}"))),
        None => Ok(()),
    }
}

/// An integer given as a JSON integer or a decimal string.
pub fn parse_int(v: &Value) -> Result<BigInt> {
    let bad = || Error::Parse(format!("expected an integer, got {v}"));
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(bad),
        Value::String(s) if s.len() <= 4096 => parse_integer(s).ok_or_else(bad),
        _ => Err(bad()),
    }
}

fn parse_i64(v: &Value, what: &str) -> Result<i64> {
    let n = parse_int(v)?;
    i64::try_from(&n).map_err(|_| Error::Parse(format!("{what} {n} is out of range")))
}

fn parse_u64(v: &Value, what: &str) -> Result<u64> {
    let n = parse_int(v)?;
    u64::try_from(&n).map_err(|_| Error::Parse(format!("{what} {n} must be a non-negative integer")))
}

/// A rational given as a JSON integer or a string accepted by [`parse_rational`].
pub fn parse_rational_value(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(_) => parse_int(v).map(BigRational::from_integer),
        _ => Err(Error::Parse(format!("expected a rational, got {v}"))),
    }
}

fn parse_point(v: &Value) -> Result<ProjPoint> {
    match v {
        Value::String(s) => s.parse(),
        _ => parse_rational_value(v).map(ProjPoint::Finite),
    }
}

fn parse_int_rows(v: &Value, what: &str) -> Result<Vec<Vec<BigInt>>> {
    array(v, what)?
        .iter()
        .map(|row| array(row, what)?.iter().map(parse_int).collect())
        .collect()
}

fn parse_int_matrix(v: &Value, what: &str) -> Result<IntMatrix> {
    let rows = parse_int_rows(v, what)?;
    if rows.is_empty() {
        return Err(Error::Parse(format!("{what} has no rows")));
    }
    IntMatrix::from_rows(&rows)
}

fn weights_from_fields(m: &Map<String, Value>) -> Result<WeightData> {
    let weights = m
        .get("weights")
        .ok_or_else(|| Error::Parse("missing field \"weights\"".into()))?;
    let weights = array(weights, "weights")?
        .iter()
        .map(|w| parse_u64(w, "weight"))
        .collect::<Result<Vec<_>>>()?;
    match m.get("lambda") {
        None | Some(Value::Null) => WeightData::with_default_points(weights),
        Some(l) => {
            let lambda = array(l, "lambda")?.iter().map(parse_point).collect::<Result<Vec<_>>>()?;
            WeightData::new(weights, lambda)
        }
    }
}

/// `{"weights": [a_1, ...], "lambda": ["inf", "0", "1", ...]}`; `lambda` is
/// optional.
pub fn parse_weights(text: &str) -> Result<WeightData> {
    let v = parse_document(text)?;
    let m = object(&v, "weight data")?;
    check_keys(m, &["weights", "lambda"], "weight data")?;
    weights_from_fields(m)
}

/// `[[a, b], [c, d]]` with determinant 1.
pub fn parse_sl2(text: &str) -> Result<SL2Matrix> {
    let v = parse_document(text)?;
    sl2_from_value(&v)
}

fn sl2_from_value(v: &Value) -> Result<SL2Matrix> {
    let rows = parse_int_rows(v, "SL(2,Z) matrix")?;
    if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
        return Err(Error::Parse("expected a 2x2 matrix [[a, b], [c, d]]".into()));
    }
    let [[a, b], [c, d]] = [
        [rows[0][0].clone(), rows[0][1].clone()],
        [rows[1][0].clone(), rows[1][1].clone()],
    ];
    SL2Matrix::new(a, b, c, d).map_err(|_| Error::NotUnimodular {
        det: &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0],
    })
}

/// One generator: `{"shift": k}`, `{"twist": {"l": l, "p": [...]}}`,
/// `{"auto": {"sigma": [1-based images], "mobius": [[a, b], [c, d]]}}`,
/// `"serre"`, or `{"generic": [[...], ...]}`.
pub fn parse_generator(v: &Value, weights: Option<&WeightData>) -> Result<Generator> {
    if let Value::String(s) = v {
        return match s.as_str() {
            "serre" => Ok(Generator::Serre),
            _ => Err(Error::Parse(format!("unknown generator {s:?}"))),
        };
    }
    let m = object(v, "generator")?;
    if m.len() != 1 {
        return Err(Error::Parse("a generator object has exactly one key".into()));
    }
    let (key, body) = m.iter().next().expect("one key");
    let need_weights = || {
        weights.ok_or_else(|| Error::Parameter(format!("generator {key} needs weight data")))
    };
    match key.as_str() {
        "shift" => Ok(Generator::Shift(parse_i64(body, "shift")?)),
        "serre" if body.is_null() || body == &Value::Bool(true) => Ok(Generator::Serre),
        "twist" => {
            let w = need_weights()?;
            let t = object(body, "twist")?;
            check_keys(t, &["l", "p"], "twist")?;
            let l = t.get("l").map(|x| parse_i64(x, "l")).transpose()?.unwrap_or(0);
            let p = match t.get("p") {
                Some(p) => array(p, "p")?
                    .iter()
                    .map(|x| parse_i64(x, "p_i"))
                    .collect::<Result<Vec<_>>>()?,
                None => vec![0; w.r()],
            };
            Ok(Generator::Twist(w.l_element(l, &p)?))
        }
        "auto" => {
            let w = need_weights()?;
            let a = object(body, "auto")?;
            check_keys(a, &["sigma", "mobius"], "auto")?;
            let sigma = a
                .get("sigma")
                .ok_or_else(|| Error::Parse("auto needs \"sigma\"".into()))?;
            let sigma = array(sigma, "sigma")?
                .iter()
                .map(|s| {
                    let k = parse_u64(s, "sigma entry")?;
                    if k == 0 || k > w.r() as u64 {
                        return Err(Error::Inadmissible(format!(
                            "sigma entry {k} outside 1..={}",
                            w.r()
                        )));
                    }
                    Ok(k as usize - 1)
                })
                .collect::<Result<Vec<_>>>()?;
            let mobius = match a.get("mobius") {
                None | Some(Value::Null) => None,
                Some(g) => {
                    let rows = array(g, "mobius")?;
                    let e = rows
                        .iter()
                        .map(|r| array(r, "mobius")?.iter().map(parse_rational_value).collect())
                        .collect::<Result<Vec<Vec<BigRational>>>>()?;
                    if e.len() != 2 || e.iter().any(|r| r.len() != 2) {
                        return Err(Error::Parse("mobius must be [[a, b], [c, d]]".into()));
                    }
                    Some(Mobius::new(
                        e[0][0].clone(),
                        e[0][1].clone(),
                        e[1][0].clone(),
                        e[1][1].clone(),
                    )?)
                }
            };
            Ok(Generator::Auto { sigma, mobius })
        }
        "generic" => Ok(Generator::Generic(parse_int_matrix(body, "generic matrix")?)),
        other => Err(Error::Parse(format!("unknown generator {other:?}"))),
    }
}

/// `"A3"`, `"D5~"`, `"A2,3~"`.
pub fn parse_dynkin_context(symbol: &str) -> Result<Context> {
    if symbol.ends_with('~') {
        Ok(Context::quiver(ExtendedDynkin::from_str(symbol)?.quiver()))
    } else {
        Ok(Context::dynkin(DynkinType::from_str(symbol)?))
    }
}

/// Parsed form of an entropy request.
#[derive(Clone, Debug)]
pub struct EntropyInput {
    pub context: Context,
    pub word: Vec<Generator>,
}

/// `{"weights": [...], "lambda": [...], "word": [...]}`, or with
/// `"dynkin": "A3"` or `"quiver": {"vertices": n, "arrows": [[i, j], ...]}`
/// (0-based) in place of the weights.
pub fn parse_entropy_input(text: &str) -> Result<EntropyInput> {
    let v = parse_document(text)?;
    let m = object(&v, "entropy input")?;
    check_keys(m, &["weights", "lambda", "dynkin", "quiver", "word"], "entropy input")?;
    let chosen = ["weights", "dynkin", "quiver"].iter().filter(|k| m.contains_key(**k)).count();
    if chosen != 1 {
        return Err(Error::Parse(
            "give exactly one of \"weights\", \"dynkin\" or \"quiver\"".into(),
        ));
    }
    let (context, weights) = if m.contains_key("weights") {
        let w = weights_from_fields(m)?;
        (Context::orbifold(w.clone())?, Some(w))
    } else if let Some(d) = m.get("dynkin") {
        let s = d.as_str().ok_or_else(|| Error::Parse("dynkin must be a string".into()))?;
        (parse_dynkin_context(s)?, None)
    } else {
        let q = object(&m["quiver"], "quiver")?;
        check_keys(q, &["vertices", "arrows"], "quiver")?;
        let n = q
            .get("vertices")
            .ok_or_else(|| Error::Parse("quiver needs \"vertices\"".into()))
            .and_then(|x| parse_u64(x, "vertex count"))?;
        if n == 0 || n > 256 {
            return Err(Error::Unsupported(format!("{n} vertices")));
        }
        let arrows = match q.get("arrows") {
            Some(a) => array(a, "arrows")?
                .iter()
                .map(|e| {
                    let e = array(e, "arrow")?;
                    if e.len() != 2 {
                        return Err(Error::Parse("an arrow is [source, target]".into()));
                    }
                    Ok((parse_u64(&e[0], "vertex")? as usize, parse_u64(&e[1], "vertex")? as usize))
                })
                .collect::<Result<Vec<_>>>()?,
            None => vec![],
        };
        if arrows.len() > 4096 {
            return Err(Error::Unsupported(format!("{} arrows", arrows.len())));
        }
        (Context::quiver(Quiver::new(n as usize, arrows)?), None)
    };
    let word = match m.get("word") {
        None => vec![],
        Some(w) => array(w, "word")?
            .iter()
            .map(|g| parse_generator(g, weights.as_ref()))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(EntropyInput { context, word })
}

fn int_rows(m: &IntMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .into_iter()
            .map(|r| Value::Array(r.into_iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

fn sl2_rows(m: &SL2Matrix) -> Value {
    int_rows(&m.to_int_matrix())
}

fn radius_pair(r: &CertifiedRadius) -> Value {
    json!([format_rational(&r.lower), format_rational(&r.upper)])
}

/// A float, written as the integer `0` when it is exactly zero.
fn float(x: f64) -> Value {
    if x == 0.0 {
        json!(0)
    } else {
        json!(x)
    }
}

pub fn invariants_json(w: &WeightData) -> Value {
    let inv = w.invariants();
    let mut out = json!({
        "a": inv.a,
        "mu": inv.mu,
        "chi": format_rational(&inv.chi),
    });
    if let Some(d) = w.extended_dynkin() {
        out["dynkin"] = json!(d.to_string());
    }
    out
}

/// `log((t + sqrt(d)) / 2)` for a hyperbolic trace, `0` otherwise.
pub fn closed_form(trace: &BigInt, discriminant: &BigInt) -> String {
    if discriminant <= &BigInt::zero() {
        "0".into()
    } else {
        let t = if trace < &BigInt::zero() { -trace } else { trace.clone() };
        format!("log(({t}+sqrt({discriminant}))/2)")
    }
}

pub fn entropy_json(r: &EntropyReport) -> Value {
    let f = &r.factorization;
    let mut out = json!({
        "h": float(r.h),
        "rho": radius_pair(&r.rho),
        "rho_approx": r.rho.midpoint_f64(),
        "method": r.method.as_str(),
        "matrix": int_rows(&r.matrix),
        "char_poly": r.char_poly.coefficients().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "cyclotomic": {
            "zero_multiplicity": f.zero_multiplicity,
            "factors": f.cyclotomic.iter().map(|(m, e)| json!([m, e])).collect::<Vec<_>>(),
            "rest": f.rest.coefficients().iter().map(ToString::to_string).collect::<Vec<_>>(),
        },
    });
    out["certificate"] = match &r.certificate {
        Certificate::Polynomial(p) => json!({
            "kind": "polynomial",
            "coefficients": p.coefficients().iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
        Certificate::Quadratic {
            trace,
            discriminant,
        } => json!({
            "kind": "quadratic",
            "trace": trace.to_string(),
            "discriminant": discriminant.to_string(),
            "h_closed_form": closed_form(trace, discriminant),
        }),
    };
    if let Some(phi) = &r.phi {
        out["phi"] = sl2_rows(phi);
    }
    out
}

pub fn factorization_json(w: &PositiveWord, verified: bool) -> Value {
    let p = if w.conjugator.is_identity() {
        json!("identity")
    } else {
        sl2_rows(&w.conjugator)
    };
    json!({
        "m": w.m,
        "P": p,
        "negated": w.negated,
        "verified": verified,
    })
}

/// Compact serialization followed by a newline.
pub fn to_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}
