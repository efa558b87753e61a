//! Exact scalars over the rationals and prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted for a prime field. Products of two residues must fit in a `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// The base field of every algebra in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::Argument(format!("{p} is not a supported prime modulus")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Mod { value: v.rem_euclid(p as i64) as u64, modulus: p },
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(self) -> Option<u64> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Prime(p) => Some(p),
        }
    }

    pub fn is_finite(self) -> bool {
        self.order().is_some()
    }

    /// All elements in the order `0, 1, ..., p-1`. Empty for the rationals.
    pub fn elements(self) -> Vec<Scalar> {
        match self {
            FieldSpec::Rational => Vec::new(),
            FieldSpec::Prime(p) => (0..p).map(|v| Scalar::Mod { value: v, modulus: p }).collect(),
        }
    }

    pub fn units(self) -> Vec<Scalar> {
        self.elements().into_iter().filter(|s| !s.is_zero()).collect()
    }

    /// Parses `"3/7"`, `"-2"`, `"2 mod 5"` or a bare residue in this field.
    pub fn parse(self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        match self {
            FieldSpec::Rational => {
                let q = BigRational::from_str(text)
                    .map_err(|_| Error::Parse(format!("not a rational number: {text:?}")))?;
                Ok(Scalar::Rational(q))
            }
            FieldSpec::Prime(p) => {
                let (num, modulus) = match text.split_once("mod") {
                    Some((v, m)) => {
                        let m: u64 = m.trim().parse().map_err(|_| Error::Parse(format!("bad modulus in {text:?}")))?;
                        (v.trim(), Some(m))
                    }
                    None => (text, None),
                };
                if let Some(m) = modulus {
                    if m != p {
                        return Err(Error::Parse(format!("scalar {text:?} is not in GF({p})")));
                    }
                }
                let q = BigRational::from_str(num).map_err(|_| Error::Parse(format!("not a residue: {text:?}")))?;
                let pb = BigInt::from(p);
                let n = ((q.numer() % &pb) + &pb) % &pb;
                let d = ((q.denom() % &pb) + &pb) % &pb;
                if d.is_zero() {
                    return Err(Error::Parse(format!("denominator vanishes mod {p}: {text:?}")));
                }
                let to_u64 = |b: &BigInt| -> u64 { u64::try_from(b).expect("reduced residue fits") };
                let n = self.from_i64(to_u64(&n) as i64);
                let d = self.from_i64(to_u64(&d) as i64);
                Ok(&n * &d.inv().expect("nonzero residue"))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `Q`, `QQ`, `rational`, `GF(p)`, `Fp` style (`F5`) or a bare prime.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "q" | "qq" | "rational" | "rationals" => return Ok(FieldSpec::Rational),
            _ => {}
        }
        let digits =
            t.trim_start_matches("GF(").trim_start_matches("gf(").trim_start_matches(['F', 'f']).trim_end_matches(')');
        let p: u64 = digits.parse().map_err(|_| Error::Parse(format!("unknown field {s:?}")))?;
        FieldSpec::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact field element. Arithmetic between elements of different fields panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Mod { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Mod { value, modulus } => {
                Scalar::Mod { value: pow_mod(*value, modulus - 2, *modulus), modulus: *modulus }
            }
        })
    }

    /// Residue of a prime-field element.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Scalar::Mod { value: (a + b) % p, modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Scalar::Mod { value: a * b % p, modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod { value: (modulus - value) % modulus, modulus: *modulus },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Mod { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::prime(5).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(&a + &b, f.from_i64(2));
        assert_eq!(&a * &b, f.from_i64(2));
        assert_eq!(-&a, f.from_i64(2));
        assert_eq!(&a * &a.inv().unwrap(), f.one());
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let q = FieldSpec::Rational;
        let third = q.parse("1/3").unwrap();
        let sum = &(&third + &third) + &third;
        assert!(sum.is_one());
        assert_eq!(q.parse("-6/4").unwrap().to_string(), "-3/2");
    }

    #[test]
    fn parse_residues() {
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(f.parse("2 mod 5").unwrap(), f.from_i64(2));
        assert_eq!(f.parse("-1").unwrap(), f.from_i64(4));
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(3));
        assert!(f.parse("2 mod 7").is_err());
        assert!(f.parse("1/5").is_err());
    }

    #[test]
    fn field_names() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("GF(3)".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(3));
        assert_eq!("F5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert!("GF(4)".parse::<FieldSpec>().is_err());
        assert!(FieldSpec::prime(1).is_err());
    }
}
