use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Ground field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Prime field `GF(p)`; `p` must be prime and fit in 32 bits so products fit in a `u64`.
    pub fn prime(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 {
            return Err(Error::Parameter(format!("modulus {p} too large")));
        }
        if !is_prime(p) {
            return Err(Error::Parameter(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    /// 0 for the rationals.
    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "gf:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `q` (also `rational`) and `gf:P`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "q" | "Q" | "rational" => Ok(Field::Rational),
            other => match other.strip_prefix("gf:") {
                Some(p) => {
                    let p = p
                        .parse::<u64>()
                        .map_err(|_| Error::Parameter(format!("bad field modulus in `{s}`")))?;
                    Field::prime(p)
                }
                None => Err(Error::Parameter(format!("unknown field `{s}`; use q or gf:P"))),
            },
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Exact element of a [`Field`].
///
/// Rationals are kept in lowest terms with a positive denominator (guaranteed by
/// `BigRational`); residues always lie in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn zero(field: Field) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Self {
        Self::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, n: i64) -> Self {
        Self::from_bigint(field, &BigInt::from(n))
    }

    pub fn from_bigint(field: Field, n: &BigInt) -> Self {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => Scalar::Residue {
                value: reduce(n, p),
                modulus: p,
            },
        }
    }

    /// `num / den` in `field`; fails when `den` vanishes in the field.
    pub fn from_ratio(field: Field, num: &BigInt, den: &BigInt) -> Result<Self> {
        let n = Self::from_bigint(field, num);
        let d = Self::from_bigint(field, den);
        let inv = d
            .inverse()
            .ok_or_else(|| Error::Malformed(format!("denominator {den} vanishes in {field}")))?;
        Ok(&n * &inv)
    }

    /// Parses an exact scalar string: an integer or `a/b`.
    pub fn parse(field: Field, s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("bad scalar `{s}`; expected an integer or a/b"));
        let s = s.trim();
        match s.split_once('/') {
            Some((a, b)) => {
                let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
                let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
                Self::from_ratio(field, &a, &b)
            }
            None => Ok(Self::from_bigint(field, &BigInt::from_str(s).map_err(|_| bad())?)),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, modulus } => *value == 1 % modulus,
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Integer value when the scalar is an integer (rationals) or its residue.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(q) if q.is_integer() => q.to_integer().to_i64(),
            Scalar::Rational(_) => None,
            Scalar::Residue { value, .. } => i64::try_from(*value).ok(),
        }
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(
            self.field(),
            other.field(),
            "scalar arithmetic across different fields"
        );
    }
}

fn reduce(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    n.mod_floor(&m).to_u64().expect("residue fits in u64")
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: (a + b) % modulus,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
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
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: a * b % modulus,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Scalar {
    /// Absolute value of a rational; residues are returned unchanged.
    pub fn abs(&self) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.abs()),
            other => other.clone(),
        }
    }
}
