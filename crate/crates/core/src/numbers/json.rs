//! JSON form of algebraic numbers.
//!
//! ```json
//! {"tower": [{"minpoly": ["-2", "0", "1"], "disk": {"re": "..", "im": "..", "radius": ".."}}],
//!  "level": 1, "coeffs": ["0", "1"]}
//! ```
//!
//! `tower` lists the fields from the bottom up. Each level gives the monic
//! minimal polynomial of its generator over the rationals (lowest degree
//! first) and an isolating disk for the chosen root; levels above the first
//! also give `embedding`, the image of the previous generator. `coeffs` are
//! the coordinates of the value in the power basis of the top generator.
//! Rationals have an empty tower and level 0.

use std::sync::Arc;

use num_rational::BigRational;
use serde_json::{json, Value};

use super::algebraic::AlgebraicNumber;
use super::complex::{root_disks, Disk};
use super::field::{intern_field, NumberField};
use crate::error::{AodeError, Result};
use crate::ring::{fmt_rational, parse_rational};
use crate::upoly::UniPoly;

const DISK_BITS: u32 = 64;

fn rationals(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(fmt_rational(c))).collect())
}

fn level_json(f: &Arc<NumberField>) -> Value {
    let d = f.disk(DISK_BITS);
    let mut obj = json!({
        "minpoly": rationals(f.minpoly().coeffs()),
        "disk": {
            "re": fmt_rational(&d.re),
            "im": fmt_rational(&d.im),
            "radius": fmt_rational(&d.radius),
        },
    });
    if let Some(p) = f.parent() {
        let image = AlgebraicNumber::generator(p).lift_to(f);
        obj["embedding"] = rationals(&image);
    }
    obj
}

pub fn number_to_json(x: &AlgebraicNumber) -> Value {
    match x.field() {
        None => json!({"tower": [], "level": 0, "coeffs": rationals(x.coeffs())}),
        Some(f) => {
            let tower: Vec<Value> = f.tower().iter().map(level_json).collect();
            let level = tower.len();
            json!({"tower": tower, "level": level, "coeffs": rationals(x.coeffs())})
        }
    }
}

/// Compact form used inside larger records: a `"p/q"` string for rationals,
/// the full object otherwise.
pub fn value_to_json(x: &AlgebraicNumber) -> Value {
    match x.as_rational() {
        Some(r) => Value::String(fmt_rational(&r)),
        None => number_to_json(x),
    }
}

pub fn value_from_json(v: &Value) -> Result<AlgebraicNumber> {
    match v {
        Value::String(s) => parse_rational(s).map(AlgebraicNumber::rational).ok_or_else(|| bad("expected a \"p/q\" string")),
        _ => number_from_json(v),
    }
}

fn bad(msg: &str) -> AodeError {
    AodeError::InvalidRequest(format!("malformed number JSON: {msg}"))
}

fn parse_rationals(v: &Value) -> Result<Vec<BigRational>> {
    v.as_array()
        .ok_or_else(|| bad("expected an array"))?
        .iter()
        .map(|s| s.as_str().and_then(parse_rational).ok_or_else(|| bad("expected a \"p/q\" string")))
        .collect()
}

fn parse_level(v: &Value, parent: Option<&Arc<NumberField>>) -> Result<Arc<NumberField>> {
    let minpoly = UniPoly::new(parse_rationals(&v["minpoly"])?);
    if minpoly.deg() < 2 {
        return Err(bad("minimal polynomial must have degree at least 2"));
    }
    let get = |k: &str| v["disk"][k].as_str().and_then(parse_rational).ok_or_else(|| bad("disk"));
    let target = Disk { re: get("re")?, im: get("im")?, radius: get("radius")? };
    let mut bits = 32;
    let index = loop {
        let disks = root_disks(&minpoly, bits);
        let hits: Vec<usize> = (0..disks.len()).filter(|&i| disks[i].intersects(&target)).collect();
        match hits.len() {
            0 => return Err(bad("disk contains no root of the minimal polynomial")),
            1 => break hits[0],
            _ if bits > 4096 => return Err(bad("disk does not isolate a root")),
            _ => bits *= 2,
        }
    };
    let parent = match parent {
        Some(p) => Some((p, parse_rationals(&v["embedding"])?)),
        None => None,
    };
    Ok(intern_field(&minpoly, index, parent))
}

pub fn number_from_json(v: &Value) -> Result<AlgebraicNumber> {
    let coeffs = parse_rationals(&v["coeffs"])?;
    let levels = v["tower"].as_array().ok_or_else(|| bad("missing tower"))?;
    let mut field: Option<Arc<NumberField>> = None;
    for level in levels {
        field = Some(parse_level(level, field.as_ref())?);
    }
    match field {
        None => {
            if coeffs.len() > 1 {
                return Err(bad("rational with more than one coefficient"));
            }
            Ok(AlgebraicNumber::rational(coeffs.into_iter().next().unwrap_or_default()))
        }
        Some(f) => Ok(AlgebraicNumber::in_field(&f, coeffs)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::tower::{all_roots, APoly};
    use crate::ring::q;

    #[test]
    fn round_trip_through_a_tower() {
        let s2 = AlgebraicNumber::root_of_irreducible(&UniPoly::new(vec![q(-2), q(0), q(1)]), 1);
        let f: APoly = UniPoly::new(vec![s2.neg(), AlgebraicNumber::zero(), AlgebraicNumber::one()]);
        for (r, _) in all_roots(&f).unwrap() {
            let x = r.add(&AlgebraicNumber::from_i64(3));
            let v = number_to_json(&x);
            assert_eq!(v["level"], 2);
            let back = number_from_json(&v).unwrap();
            assert_eq!(back, x);
        }
        let half = AlgebraicNumber::rational(BigRational::new(1.into(), 2.into()));
        assert_eq!(number_from_json(&number_to_json(&half)).unwrap(), half);
    }
}
