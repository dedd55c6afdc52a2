//! JSON file formats. Numbers travel as strings in the shared literal
//! grammar (`-12`, `3.25`, `5/6`); plain JSON integers and decimals are also
//! accepted and parsed from their literal text, so nothing ever goes through
//! a binary float.
//!
//! Instance files: `{"k": 3, "ring": {"tag": "scalar", "arity": 1},
//! "beta": [...], "sets": [[...], ...]}` where `beta` is optional (absent
//! means pure k-SUM). Element shape per tag: scalar `x`; complex
//! `[re, im]`; vector `[x1, ..., xm]`; complex_vector `[[re, im], ...]`.
//!
//! Point files: `{"d": 2, "points": [[x, y], ...]}` for patterns and scenes.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::geom::{MatchReport, Scene, Transform};
use crate::ksum::{KSumInstance, LdtInstance};
use crate::numeric::{
    parse_rational, ComplexRational, Rational, RingDescriptor, RingElement, RingTag,
};

pub fn number_from_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        // with arbitrary_precision the literal text round-trips exactly
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::BadInstance(format!("expected a number, got {other}"))),
    }
}

pub fn number_to_value(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn complex_from_value(v: &Value) -> Result<ComplexRational> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::BadInstance(format!("expected [re, im], got {v}")))?;
    Ok(ComplexRational::new(number_from_value(&arr[0])?, number_from_value(&arr[1])?))
}

fn complex_to_value(c: &ComplexRational) -> Value {
    json!([number_to_value(&c.re), number_to_value(&c.im)])
}

fn element_from_value(ring: RingDescriptor, v: &Value) -> Result<RingElement> {
    let elem = match ring.tag {
        RingTag::Scalar => RingElement::Scalar(number_from_value(v)?),
        RingTag::Complex => RingElement::Complex(complex_from_value(v)?),
        RingTag::Vector => {
            let arr = v
                .as_array()
                .ok_or_else(|| Error::BadInstance(format!("expected a vector, got {v}")))?;
            RingElement::Vector(arr.iter().map(number_from_value).collect::<Result<_>>()?)
        }
        RingTag::ComplexVector => {
            let arr = v
                .as_array()
                .ok_or_else(|| Error::BadInstance(format!("expected a vector, got {v}")))?;
            RingElement::ComplexVector(arr.iter().map(complex_from_value).collect::<Result<_>>()?)
        }
    };
    let found = elem.descriptor();
    if found != ring {
        return Err(Error::RingMismatch { expected: ring, found });
    }
    Ok(elem)
}

fn element_to_value(e: &RingElement) -> Value {
    match e {
        RingElement::Scalar(x) => number_to_value(x),
        RingElement::Complex(c) => complex_to_value(c),
        RingElement::Vector(xs) => Value::Array(xs.iter().map(number_to_value).collect()),
        RingElement::ComplexVector(cs) => Value::Array(cs.iter().map(complex_to_value).collect()),
    }
}

fn ring_from_value(v: &Value) -> Result<RingDescriptor> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::BadInstance("ring must be an object {tag, arity}".into()))?;
    let tag = obj
        .get("tag")
        .and_then(Value::as_str)
        .and_then(RingTag::from_str_tag)
        .ok_or_else(|| {
            Error::BadInstance("ring.tag must be scalar|complex|vector|complex_vector".into())
        })?;
    let arity = match obj.get("arity") {
        None => 1,
        Some(a) => a
            .as_u64()
            .filter(|&a| a >= 1)
            .ok_or_else(|| Error::BadInstance("ring.arity must be a positive integer".into()))?
            as usize,
    };
    if matches!(tag, RingTag::Scalar | RingTag::Complex) && arity != 1 {
        return Err(Error::BadInstance(format!("{} ring has arity 1, got {arity}", tag.as_str())));
    }
    Ok(RingDescriptor { tag, arity })
}

fn ring_to_value(ring: RingDescriptor) -> Value {
    json!({"tag": ring.tag.as_str(), "arity": ring.arity})
}

/// Parses an instance file into an LDT instance; a missing `beta` means
/// pure k-SUM (zero constant, all-one coefficients).
pub fn instance_from_json(v: &Value) -> Result<LdtInstance> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::BadInstance("instance file must be a JSON object".into()))?;
    let ring = ring_from_value(
        obj.get("ring")
            .ok_or_else(|| Error::BadInstance("instance file needs a ring".into()))?,
    )?;
    let sets_v = obj
        .get("sets")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::BadInstance("instance file needs sets".into()))?;
    let sets: Vec<Vec<RingElement>> = sets_v
        .iter()
        .map(|set| {
            set.as_array()
                .ok_or_else(|| Error::BadInstance("each set must be an array".into()))?
                .iter()
                .map(|e| element_from_value(ring, e))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    if let Some(k) = obj.get("k") {
        let k = k
            .as_u64()
            .ok_or_else(|| Error::BadInstance("k must be an integer".into()))?;
        if k as usize != sets.len() {
            return Err(Error::BadInstance(format!(
                "k is {k} but the file has {} sets",
                sets.len()
            )));
        }
    }
    match obj.get("beta") {
        Some(beta_v) => {
            let beta: Vec<RingElement> = beta_v
                .as_array()
                .ok_or_else(|| Error::BadInstance("beta must be an array".into()))?
                .iter()
                .map(|e| element_from_value(ring, e))
                .collect::<Result<_>>()?;
            LdtInstance::new(beta, sets)
        }
        None => Ok(LdtInstance::from_ksum(&KSumInstance::new(sets)?)),
    }
}

pub fn instance_to_json(inst: &LdtInstance) -> Value {
    json!({
        "k": inst.k(),
        "ring": ring_to_value(inst.ring()),
        "beta": inst.beta().iter().map(element_to_value).collect::<Vec<_>>(),
        "sets": inst
            .sets()
            .iter()
            .map(|s| s.iter().map(element_to_value).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

/// Parses a `{d, points}` file; used for both patterns and scenes.
pub fn points_from_json(v: &Value) -> Result<(usize, Vec<Vec<Rational>>)> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::BadInstance("point file must be a JSON object".into()))?;
    let d = obj
        .get("d")
        .and_then(Value::as_u64)
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::BadInstance("point file needs a positive integer d".into()))?
        as usize;
    let points = obj
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::BadInstance("point file needs points".into()))?
        .iter()
        .map(|p| {
            p.as_array()
                .ok_or_else(|| Error::BadInstance("each point must be an array".into()))?
                .iter()
                .map(number_from_value)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((d, points))
}

pub fn points_to_json(d: usize, points: &[Vec<Rational>]) -> Value {
    json!({
        "d": d,
        "points": points
            .iter()
            .map(|p| p.iter().map(number_to_value).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn scene_to_json(scene: &Scene) -> Value {
    points_to_json(scene.dim(), scene.points())
}

fn transform_to_json(t: &Transform) -> Value {
    match t {
        Transform::Similarity { scale_rotation, translation, mirrored } => json!({
            "kind": "similarity",
            "mirrored": mirrored,
            "scale_rotation": {
                "re": number_to_value(&scale_rotation.re),
                "im": number_to_value(&scale_rotation.im),
            },
            "translation": {
                "re": number_to_value(&translation.re),
                "im": number_to_value(&translation.im),
            },
        }),
        Transform::Affine { matrix, translation } => json!({
            "kind": "affine",
            "matrix": matrix
                .iter()
                .map(|row| row.iter().map(number_to_value).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "translation": translation.iter().map(number_to_value).collect::<Vec<_>>(),
        }),
    }
}

pub fn report_to_json(r: &MatchReport) -> Value {
    json!({
        "match": true,
        "indices": r.indices,
        "transform": transform_to_json(&r.transform),
    })
}

pub fn reports_to_json(rs: &[MatchReport]) -> Value {
    json!({
        "match": !rs.is_empty(),
        "matches": rs.iter().map(report_to_json).collect::<Vec<_>>(),
    })
}

pub fn no_match_json() -> Value {
    let mut m = Map::new();
    m.insert("match".into(), Value::Bool(false));
    Value::Object(m)
}

pub fn read_json_file(path: &std::path::Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json_file(path: &std::path::Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
