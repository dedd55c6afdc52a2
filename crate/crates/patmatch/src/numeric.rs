//! Exact arithmetic backends and the ring structures used by every reduction.
//!
//! All normative computation happens on arbitrary-precision rationals, kept in
//! canonical form (reduced, positive denominator) so that equal values have
//! identical representations and can be hashed directly. Complex values are
//! pairs of rationals; vectors multiply entrywise (Hadamard product).
//!
//! A float policy type exists for throughput benchmarking only. It plays no
//! role in correctness paths.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Exact rational scalar in canonical form.
pub type Rational = num_rational::BigRational;

/// Exact complex number with rational real and imaginary parts.
pub type ComplexRational = num_complex::Complex<Rational>;

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn complex_int(re: i64, im: i64) -> ComplexRational {
    ComplexRational::new(rational_int(re), rational_int(im))
}

/// Parses the number literal grammar shared by all file formats:
/// an optional sign followed by decimal digits with an optional fractional
/// part (`-12`, `3.25`), or `p/q` with integer `p` and positive integer `q`.
/// Binary floats are never involved, so no rounding can occur.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::NumberParse(s.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = p.trim();
        let q = q.trim();
        let num: BigInt = parse_signed_int(p).ok_or_else(err)?;
        if q.is_empty() || !q.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let den: BigInt = q.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    let (sign, body) = match s.as_bytes()[0] {
        b'+' => (BigInt::one(), &s[1..]),
        b'-' => (-BigInt::one(), &s[1..]),
        _ => (BigInt::one(), s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    if body.contains('.') && (frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()))
    {
        return Err(err());
    }
    let mut num: BigInt = int_part.parse().map_err(|_| err())?;
    let mut den = BigInt::one();
    if !frac_part.is_empty() {
        let ten = BigInt::from(10u8);
        for _ in 0..frac_part.len() {
            den *= &ten;
        }
        let frac: BigInt = frac_part.parse().map_err(|_| err())?;
        num = num * &den + frac;
    }
    Ok(Rational::new(sign * num, den))
}

fn parse_signed_int(s: &str) -> Option<BigInt> {
    if s.is_empty() {
        return None;
    }
    let (sign, body) = match s.as_bytes()[0] {
        b'+' => (1, &s[1..]),
        b'-' => (-1, &s[1..]),
        _ => (1, s),
    };
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    body.parse::<BigInt>().ok().map(|n| n * BigInt::from(sign))
}

/// Canonical text form: `p/q` for non-integers, plain integer otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Tag of the ring a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingTag {
    Scalar,
    Complex,
    Vector,
    ComplexVector,
}

impl RingTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RingTag::Scalar => "scalar",
            RingTag::Complex => "complex",
            RingTag::Vector => "vector",
            RingTag::ComplexVector => "complex_vector",
        }
    }

    pub fn from_str_tag(s: &str) -> Option<RingTag> {
        match s {
            "scalar" => Some(RingTag::Scalar),
            "complex" => Some(RingTag::Complex),
            "vector" => Some(RingTag::Vector),
            "complex_vector" => Some(RingTag::ComplexVector),
            _ => None,
        }
    }
}

/// Tag plus arity; all elements of an instance share one descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    pub tag: RingTag,
    pub arity: usize,
}

impl RingDescriptor {
    pub fn scalar() -> Self {
        RingDescriptor { tag: RingTag::Scalar, arity: 1 }
    }

    pub fn complex() -> Self {
        RingDescriptor { tag: RingTag::Complex, arity: 1 }
    }

    pub fn vector(arity: usize) -> Self {
        RingDescriptor { tag: RingTag::Vector, arity }
    }

    pub fn complex_vector(arity: usize) -> Self {
        RingDescriptor { tag: RingTag::ComplexVector, arity }
    }

    /// Number of real components after flattening complex parts.
    pub fn real_dimension(&self) -> usize {
        match self.tag {
            RingTag::Scalar | RingTag::Vector => self.arity,
            RingTag::Complex | RingTag::ComplexVector => 2 * self.arity,
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity == 1 {
            write!(f, "{}", self.tag.as_str())
        } else {
            write!(f, "{}^{}", self.tag.as_str(), self.arity)
        }
    }
}

/// A value in one of the rings the reductions operate in: an exact rational,
/// a complex rational, or a fixed-arity vector of either with entrywise
/// product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingElement {
    Scalar(Rational),
    Complex(ComplexRational),
    Vector(Vec<Rational>),
    ComplexVector(Vec<ComplexRational>),
}

impl RingElement {
    pub fn scalar_i64(n: i64) -> Self {
        RingElement::Scalar(rational_int(n))
    }

    pub fn descriptor(&self) -> RingDescriptor {
        match self {
            RingElement::Scalar(_) => RingDescriptor::scalar(),
            RingElement::Complex(_) => RingDescriptor::complex(),
            RingElement::Vector(v) => RingDescriptor::vector(v.len()),
            RingElement::ComplexVector(v) => RingDescriptor::complex_vector(v.len()),
        }
    }

    /// Additive identity of the given ring.
    pub fn zero(ring: RingDescriptor) -> Self {
        match ring.tag {
            RingTag::Scalar => RingElement::Scalar(Rational::zero()),
            RingTag::Complex => RingElement::Complex(ComplexRational::zero()),
            RingTag::Vector => RingElement::Vector(vec![Rational::zero(); ring.arity]),
            RingTag::ComplexVector => {
                RingElement::ComplexVector(vec![ComplexRational::zero(); ring.arity])
            }
        }
    }

    /// Multiplicative identity (the all-one vector for vector rings).
    pub fn one(ring: RingDescriptor) -> Self {
        match ring.tag {
            RingTag::Scalar => RingElement::Scalar(Rational::one()),
            RingTag::Complex => RingElement::Complex(ComplexRational::one()),
            RingTag::Vector => RingElement::Vector(vec![Rational::one(); ring.arity]),
            RingTag::ComplexVector => {
                RingElement::ComplexVector(vec![ComplexRational::one(); ring.arity])
            }
        }
    }

    fn check_same_ring(&self, other: &RingElement) -> Result<()> {
        let (a, b) = (self.descriptor(), other.descriptor());
        if a != b {
            return Err(Error::RingMismatch { expected: a, found: b });
        }
        Ok(())
    }

    /// Componentwise exact sum. Fails on tag or arity mismatch.
    pub fn try_add(&self, other: &RingElement) -> Result<RingElement> {
        self.check_same_ring(other)?;
        Ok(match (self, other) {
            (RingElement::Scalar(a), RingElement::Scalar(b)) => RingElement::Scalar(a + b),
            (RingElement::Complex(a), RingElement::Complex(b)) => RingElement::Complex(a + b),
            (RingElement::Vector(a), RingElement::Vector(b)) => {
                RingElement::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (RingElement::ComplexVector(a), RingElement::ComplexVector(b)) => {
                RingElement::ComplexVector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => unreachable!("descriptor check rules out mixed tags"),
        })
    }

    /// Ring product: scalar, complex, or entrywise (Hadamard) per tag.
    pub fn try_mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check_same_ring(other)?;
        Ok(match (self, other) {
            (RingElement::Scalar(a), RingElement::Scalar(b)) => RingElement::Scalar(a * b),
            (RingElement::Complex(a), RingElement::Complex(b)) => RingElement::Complex(a * b),
            (RingElement::Vector(a), RingElement::Vector(b)) => {
                RingElement::Vector(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            (RingElement::ComplexVector(a), RingElement::ComplexVector(b)) => {
                RingElement::ComplexVector(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            _ => unreachable!("descriptor check rules out mixed tags"),
        })
    }

    pub fn neg(&self) -> RingElement {
        match self {
            RingElement::Scalar(a) => RingElement::Scalar(-a),
            RingElement::Complex(a) => RingElement::Complex(-a),
            RingElement::Vector(a) => RingElement::Vector(a.iter().map(|x| -x).collect()),
            RingElement::ComplexVector(a) => {
                RingElement::ComplexVector(a.iter().map(|x| -x).collect())
            }
        }
    }

    /// Exact zero test: every component is the zero rational.
    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Scalar(a) => a.is_zero(),
            RingElement::Complex(a) => a.re.is_zero() && a.im.is_zero(),
            RingElement::Vector(a) => a.iter().all(Rational::is_zero),
            RingElement::ComplexVector(a) => a.iter().all(|c| c.re.is_zero() && c.im.is_zero()),
        }
    }

    /// Zero test under a float policy: max-norm at most `policy.epsilon`.
    /// The comparison itself stays exact (epsilon is lifted to a rational),
    /// so `epsilon = 0` degenerates to strict equality.
    pub fn is_zero_within(&self, policy: &FloatBackendPolicy) -> bool {
        let eps = Rational::from_float(policy.epsilon).expect("policy epsilon is finite");
        let le = |x: &Rational| x.abs() <= eps;
        match self {
            RingElement::Scalar(a) => le(a),
            RingElement::Complex(a) => le(&a.re) && le(&a.im),
            RingElement::Vector(a) => a.iter().all(le),
            RingElement::ComplexVector(a) => a.iter().all(|c| le(&c.re) && le(&c.im)),
        }
    }

    /// Real components in interleaved order; complex parts flatten to
    /// `(re0, im0, re1, im1, ...)`.
    pub fn real_components(&self) -> Vec<Rational> {
        match self {
            RingElement::Scalar(a) => vec![a.clone()],
            RingElement::Complex(a) => vec![a.re.clone(), a.im.clone()],
            RingElement::Vector(a) => a.clone(),
            RingElement::ComplexVector(a) => a
                .iter()
                .flat_map(|c| [c.re.clone(), c.im.clone()])
                .collect(),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Scalar(a) => write!(f, "{a}"),
            RingElement::Complex(a) => write!(f, "({}, {})", a.re, a.im),
            RingElement::Vector(a) => {
                write!(f, "[")?;
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            RingElement::ComplexVector(a) => {
                write!(f, "[")?;
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "({}, {})", x.re, x.im)?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Tolerance settings for the benchmarking float backend. `epsilon = 0`
/// means strict equality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatBackendPolicy {
    pub epsilon: f64,
}

impl FloatBackendPolicy {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::BadInstance(format!(
                "epsilon must be a nonnegative finite float, got {epsilon}"
            )));
        }
        Ok(FloatBackendPolicy { epsilon })
    }
}
