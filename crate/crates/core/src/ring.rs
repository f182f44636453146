//! Coefficient rings and exact scalars.
//!
//! Three rings are supported: prime fields GF(p) with `p < 2^32`, the
//! rationals with arbitrary-precision numerators and denominators, and the
//! residue rings Z/m (also `m < 2^32`). Residues are stored as `u64` in
//! `[0, modulus)`, so a product of two residues always fits in a `u64`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted for GF(p) and Z/m.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

/// The raw description of a coefficient ring, as it appears in files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingKind {
    PrimeField { p: u64 },
    Rationals,
    IntegersMod { m: u64 },
}

/// A validated coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RingKind", into = "RingKind")]
pub struct RingSpec {
    kind: RingKind,
}

impl RingSpec {
    pub fn prime_field(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::InvalidRing(format!(
                "prime {p} exceeds the supported bound {MAX_MODULUS}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(Self {
            kind: RingKind::PrimeField { p },
        })
    }

    pub fn rationals() -> Self {
        Self {
            kind: RingKind::Rationals,
        }
    }

    pub fn integers_mod(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidRing(format!("modulus {m} must be at least 2")));
        }
        if m > MAX_MODULUS {
            return Err(Error::InvalidRing(format!(
                "modulus {m} exceeds the supported bound {MAX_MODULUS}"
            )));
        }
        Ok(Self {
            kind: RingKind::IntegersMod { m },
        })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    /// True for GF(p) and Q.
    pub fn is_field(&self) -> bool {
        !matches!(self.kind, RingKind::IntegersMod { .. })
    }

    /// The modulus for residue rings, `None` for Q.
    pub fn modulus(&self) -> Option<u64> {
        match self.kind {
            RingKind::PrimeField { p } => Some(p),
            RingKind::IntegersMod { m } => Some(m),
            RingKind::Rationals => None,
        }
    }

    /// Characteristic; zero for Q.
    pub fn characteristic(&self) -> u64 {
        self.modulus().unwrap_or(0)
    }

    /// Number of elements, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        self.modulus()
    }

    pub(crate) fn require_field(&self, op: &'static str) -> Result<()> {
        if self.is_field() {
            Ok(())
        } else {
            Err(Error::UnsupportedRing { op, ring: *self })
        }
    }
}

impl TryFrom<RingKind> for RingSpec {
    type Error = Error;

    fn try_from(kind: RingKind) -> Result<Self> {
        match kind {
            RingKind::PrimeField { p } => Self::prime_field(p),
            RingKind::Rationals => Ok(Self::rationals()),
            RingKind::IntegersMod { m } => Self::integers_mod(m),
        }
    }
}

impl From<RingSpec> for RingKind {
    fn from(r: RingSpec) -> Self {
        r.kind
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::PrimeField { p } => write!(f, "GF({p})"),
            RingKind::Rationals => write!(f, "Q"),
            RingKind::IntegersMod { m } => write!(f, "Z/{m}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    /// Accepts `gf:101`, `prime:101`, `q`, `rationals`, `mod:4` and `zmod:4`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "q" || s == "rationals" {
            return Ok(Self::rationals());
        }
        let (kind, param) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidRing(format!("unrecognized ring '{s}'")))?;
        let value: u64 = param
            .trim()
            .parse()
            .map_err(|_| Error::InvalidRing(format!("bad ring parameter '{param}'")))?;
        match kind.trim() {
            "gf" | "prime" | "prime_field" => Self::prime_field(value),
            "mod" | "zmod" | "integers_mod" => Self::integers_mod(value),
            other => Err(Error::InvalidRing(format!("unrecognized ring kind '{other}'"))),
        }
    }
}

/// Deterministic primality by trial division; inputs are below 2^32.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Canonical value of a scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Residue(u64),
    Rational(BigRational),
}

/// An element of a [`RingSpec`], always in canonical form: residues in
/// `[0, m)`, fractions reduced with a positive denominator.
///
/// Serialized as its ring plus the value as a string, so fractions never
/// pass through floating point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ScalarRepr", into = "ScalarRepr")]
pub struct Scalar {
    ring: RingSpec,
    value: Value,
}

impl Scalar {
    pub fn zero(ring: RingSpec) -> Self {
        Self::from_i64(ring, 0)
    }

    pub fn one(ring: RingSpec) -> Self {
        Self::from_i64(ring, 1)
    }

    pub fn from_i64(ring: RingSpec, v: i64) -> Self {
        let value = match ring.modulus() {
            Some(m) => Value::Residue((v as i128).rem_euclid(m as i128) as u64),
            None => Value::Rational(BigRational::from_integer(BigInt::from(v))),
        };
        Self { ring, value }
    }

    /// A fraction `num/den`. In residue rings the denominator must be a unit.
    pub fn from_fraction(ring: RingSpec, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::NotInvertible("zero denominator".into()));
        }
        match ring.modulus() {
            None => Ok(Self {
                ring,
                value: Value::Rational(BigRational::new(BigInt::from(num), BigInt::from(den))),
            }),
            Some(_) => {
                let d = Self::from_i64(ring, den).inv()?;
                Ok(&Self::from_i64(ring, num) * &d)
            }
        }
    }

    pub fn from_rational(value: BigRational) -> Self {
        Self {
            ring: RingSpec::rationals(),
            value: Value::Rational(value),
        }
    }

    pub(crate) fn from_residue(ring: RingSpec, r: u64) -> Self {
        debug_assert!(ring.modulus().is_some_and(|m| r < m));
        Self {
            ring,
            value: Value::Residue(r),
        }
    }

    /// Parses `"3"`, `"-2/7"` or `"2 mod 4"` in the given ring.
    ///
    /// Fractions are only accepted over Q, and the `mod` suffix only over a
    /// residue ring with the same modulus.
    pub fn parse(ring: RingSpec, text: &str) -> Result<Self> {
        let s = text.trim();
        let bad = |why: &str| Error::ParseScalar {
            text: text.to_string(),
            ring,
            reason: why.to_string(),
        };
        if let Some((lhs, rhs)) = s.split_once("mod") {
            let m: u64 = rhs.trim().parse().map_err(|_| bad("bad modulus after 'mod'"))?;
            if ring.modulus() != Some(m) {
                return Err(bad("residue modulus does not match the ring"));
            }
            let v: BigInt = lhs.trim().parse().map_err(|_| bad("bad residue"))?;
            return Ok(Self::from_bigint(ring, &v));
        }
        if let Some((num, den)) = s.split_once('/') {
            if ring.modulus().is_some() {
                return Err(bad("fractions are only accepted over the rationals"));
            }
            let num: BigInt = num.trim().parse().map_err(|_| bad("bad numerator"))?;
            let den: BigInt = den.trim().parse().map_err(|_| bad("bad denominator"))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            return Ok(Self {
                ring,
                value: Value::Rational(BigRational::new(num, den)),
            });
        }
        let v: BigInt = s.parse().map_err(|_| bad("not an integer"))?;
        Ok(Self::from_bigint(ring, &v))
    }

    fn from_bigint(ring: RingSpec, v: &BigInt) -> Self {
        let value = match ring.modulus() {
            Some(m) => {
                let r = v.mod_floor(&BigInt::from(m));
                Value::Residue(r.try_into().expect("residue below modulus"))
            }
            None => Value::Rational(BigRational::from_integer(v.clone())),
        };
        Self { ring, value }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    /// Representative in `[0, m)` for residue rings.
    pub fn residue(&self) -> Option<u64> {
        match &self.value {
            Value::Residue(r) => Some(*r),
            Value::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Residue(_) => None,
            Value::Rational(q) => Some(q),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Residue(r) => *r == 0,
            Value::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Residue(r) => *r == 1,
            Value::Rational(q) => q.is_one(),
        }
    }

    /// Multiplicative inverse; fails on zero and on non-units of Z/m.
    pub fn inv(&self) -> Result<Self> {
        match &self.value {
            Value::Residue(r) => {
                let m = self.ring.modulus().expect("residue ring");
                mod_inverse(*r, m)
                    .map(|v| Self::from_residue(self.ring, v))
                    .ok_or_else(|| Error::NotInvertible(format!("{self} in {}", self.ring)))
            }
            Value::Rational(q) => {
                if q.is_zero() {
                    Err(Error::NotInvertible("0".into()))
                } else {
                    Ok(Self::from_rational(q.recip()))
                }
            }
        }
    }

    fn same_ring(&self, other: &Scalar) {
        assert_eq!(
            self.ring, other.ring,
            "scalar arithmetic across rings ({} vs {})",
            self.ring, other.ring
        );
    }

    fn residue_op(&self, other: &Scalar, f: impl Fn(u64, u64, u64) -> u64) -> Scalar {
        self.same_ring(other);
        let m = self.ring.modulus().expect("residue ring");
        match (&self.value, &other.value) {
            (Value::Residue(a), Value::Residue(b)) => Self::from_residue(self.ring, f(*a, *b, m)),
            _ => unreachable!("residue ring holds residues"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Residue(r) => write!(f, "{r}"),
            Value::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        if let (Value::Rational(a), Value::Rational(b)) = (&self.value, &rhs.value) {
            return Scalar::from_rational(a + b);
        }
        self.residue_op(rhs, |a, b, m| (a + b) % m)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        if let (Value::Rational(a), Value::Rational(b)) = (&self.value, &rhs.value) {
            return Scalar::from_rational(a - b);
        }
        self.residue_op(rhs, |a, b, m| (a + m - b) % m)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        if let (Value::Rational(a), Value::Rational(b)) = (&self.value, &rhs.value) {
            return Scalar::from_rational(a * b);
        }
        self.residue_op(rhs, |a, b, m| a * b % m)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match &self.value {
            Value::Residue(r) => {
                let m = self.ring.modulus().expect("residue ring");
                Scalar::from_residue(self.ring, (m - r) % m)
            }
            Value::Rational(q) => Scalar::from_rational(-q),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    ring: RingSpec,
    value: String,
}

impl TryFrom<ScalarRepr> for Scalar {
    type Error = Error;

    fn try_from(r: ScalarRepr) -> Result<Self> {
        Scalar::parse(r.ring, &r.value)
    }
}

impl From<Scalar> for ScalarRepr {
    fn from(s: Scalar) -> Self {
        ScalarRepr {
            ring: s.ring,
            value: s.to_string(),
        }
    }
}
