//! JSON argument parsing: matrices, generator lists and points.

use hyperstretch::hgeom::HPoint;
use hyperstretch::moebius::Isometry;
use hyperstretch::num_complex::Complex64;
use hyperstretch::{Error, Result};
use serde_json::Value;

fn json(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("{e} in {s:?}")))
}

fn number(v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::Parse(format!("expected a number, found {v}")))
}

fn array(v: &Value, len: Option<usize>) -> Result<&Vec<Value>> {
    let a = v.as_array().ok_or_else(|| Error::Parse(format!("expected an array, found {v}")))?;
    match len {
        Some(n) if a.len() != n => Err(Error::Parse(format!("expected {n} entries, found {}", a.len()))),
        _ => Ok(a),
    }
}

/// An entry is a number or a `[re, im]` pair.
fn entry(v: &Value) -> Result<(Complex64, bool)> {
    if v.is_array() {
        let a = array(v, Some(2))?;
        Ok((Complex64::new(number(&a[0])?, number(&a[1])?), true))
    } else {
        Ok((Complex64::new(number(v)?, 0.0), false))
    }
}

/// `[[a, b], [c, d]]`; any complex entry makes the whole matrix complex.
pub fn matrix_value(v: &Value) -> Result<Isometry> {
    let rows = array(v, Some(2))?;
    let mut entries = Vec::with_capacity(4);
    let mut complex = false;
    for row in rows {
        for e in array(row, Some(2))? {
            let (z, c) = entry(e)?;
            complex |= c;
            entries.push(z);
        }
    }
    let [a, b, c, d] = [entries[0], entries[1], entries[2], entries[3]];
    if complex {
        Isometry::complex(a, b, c, d)
    } else {
        Isometry::real(a.re, b.re, c.re, d.re)
    }
}

pub fn matrix(s: &str) -> Result<Isometry> {
    matrix_value(&json(s)?)
}

pub fn matrices(s: &str) -> Result<Vec<Isometry>> {
    let v = json(s)?;
    let list = array(&v, None)?;
    if list.is_empty() {
        return Err(Error::Parse("generator list is empty".into()));
    }
    list.iter().map(matrix_value).collect()
}

/// `[u, v]` in H², `[re a, im a, b]` in H³.
pub fn point_value(v: &Value) -> Result<HPoint> {
    let a = array(v, None)?;
    match a.len() {
        2 => HPoint::h2(number(&a[0])?, number(&a[1])?),
        3 => HPoint::h3(Complex64::new(number(&a[0])?, number(&a[1])?), number(&a[2])?),
        n => Err(Error::Parse(format!("a point has 2 or 3 coordinates, found {n}"))),
    }
}

pub fn point(s: &str) -> Result<HPoint> {
    point_value(&json(s)?)
}

pub fn points(s: &str) -> Result<Vec<HPoint>> {
    array(&json(s)?, None)?.iter().map(point_value).collect()
}

pub fn numbers(s: &str) -> Result<Vec<f64>> {
    array(&json(s)?, None)?.iter().map(number).collect()
}

/// `[[source, image], ...]`.
pub fn pairs(s: &str) -> Result<Vec<(HPoint, HPoint)>> {
    array(&json(s)?, None)?
        .iter()
        .map(|p| {
            let a = array(p, Some(2))?;
            Ok((point_value(&a[0])?, point_value(&a[1])?))
        })
        .collect()
}

/// Matrix entries for output: numbers for real matrices, `[re, im]` pairs
/// otherwise.
pub fn matrix_json(g: &Isometry) -> Value {
    let e = g.entries();
    let cell = |z: Complex64| {
        if g.field() == hyperstretch::moebius::Field::Real {
            Value::from(z.re)
        } else {
            Value::from(vec![z.re, z.im])
        }
    };
    Value::from(vec![Value::from(vec![cell(e[0]), cell(e[1])]), Value::from(vec![cell(e[2]), cell(e[3])])])
}
