//! Exact scalars: rationals (small fast path, big fallback) or residues mod a prime.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Builds `F_p`, rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::Usage(format!("fp:{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Small(Ratio::from_integer(n)),
            Field::Prime(p) => Scalar::Mod(n.rem_euclid(p as i64) as u64, p),
        }
    }

    /// Parses `a`, `-a` or `a/b`.
    pub fn parse(self, text: &str) -> Option<Scalar> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().ok()?;
        let den: BigInt = den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        match self {
            Field::Rational => Some(Scalar::from_big(BigRational::new(num, den))),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let n = num.mod_floor(&pb).to_u64()?;
                let d = den.mod_floor(&pb).to_u64()?;
                if d == 0 {
                    return None;
                }
                let s = Scalar::Mod(n, p);
                Some(s.mul(&Scalar::Mod(d, p).inv()?))
            }
        }
    }

    pub fn label(self) -> String {
        match self {
            Field::Rational => "rational".to_string(),
            Field::Prime(p) => format!("fp:{p}"),
        }
    }
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

/// A field element. Rationals stay in `i64` until an operation overflows.
#[derive(Clone, Debug)]
pub enum Scalar {
    Small(Ratio<i64>),
    Big(BigRational),
    Mod(u64, u64),
}

impl Scalar {
    fn from_big(r: BigRational) -> Scalar {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Scalar::Small(Ratio::new_raw(n, d)),
            _ => Scalar::Big(r),
        }
    }

    fn big(&self) -> BigRational {
        match self {
            Scalar::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Scalar::Big(r) => r.clone(),
            Scalar::Mod(..) => panic!("mixed rational and modular scalars"),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod(_, p) => Field::Prime(*p),
            _ => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Small(r) => r.is_zero(),
            Scalar::Big(r) => r.is_zero(),
            Scalar::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Small(r) => r.is_one(),
            Scalar::Big(r) => r.is_one(),
            Scalar::Mod(v, _) => *v == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Small(a), Scalar::Small(b)) => match a.checked_add(b) {
                Some(c) => Scalar::Small(c),
                None => Scalar::from_big(self.big() + other.big()),
            },
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) => {
                debug_assert_eq!(p, q);
                Scalar::Mod((a + b) % p, *p)
            }
            _ => Scalar::from_big(self.big() + other.big()),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Small(a), Scalar::Small(b)) => match a.checked_sub(b) {
                Some(c) => Scalar::Small(c),
                None => Scalar::from_big(self.big() - other.big()),
            },
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => Scalar::Mod((a + p - b) % p, *p),
            _ => Scalar::from_big(self.big() - other.big()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Small(a), Scalar::Small(b)) => match a.checked_mul(b) {
                Some(c) => Scalar::Small(c),
                None => Scalar::from_big(self.big() * other.big()),
            },
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => Scalar::Mod(a * b % p, *p),
            _ => Scalar::from_big(self.big() * other.big()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Small(r) => match r.numer().checked_neg() {
                Some(n) => Scalar::Small(Ratio::new_raw(n, *r.denom())),
                None => Scalar::from_big(-self.big()),
            },
            Scalar::Big(r) => Scalar::from_big(-r.clone()),
            Scalar::Mod(v, p) => Scalar::Mod((p - v) % p, *p),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Small(r) => {
                if *r.numer() == i64::MIN {
                    Scalar::from_big(self.big().recip())
                } else {
                    Scalar::Small(r.recip())
                }
            }
            Scalar::Big(r) => Scalar::from_big(r.recip()),
            Scalar::Mod(v, p) => Scalar::Mod(pow_mod(*v, p - 2, *p), *p),
        })
    }

    /// Integer value when the scalar is a rational integer fitting `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Small(r) if r.is_integer() => Some(*r.numer()),
            _ => None,
        }
    }

    /// Sign of a rational scalar; modular scalars report `Greater` unless zero.
    pub fn sign(&self) -> Ordering {
        match self {
            Scalar::Small(r) => r.numer().cmp(&0),
            Scalar::Big(r) => {
                if r.is_zero() {
                    Ordering::Equal
                } else if r.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            Scalar::Mod(v, _) => v.cmp(&0),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Small(a), Scalar::Small(b)) => a == b,
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) => a == b && p == q,
            (Scalar::Mod(..), _) | (_, Scalar::Mod(..)) => false,
            _ => self.big() == other.big(),
        }
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(r) => write!(f, "{r}"),
            Scalar::Big(r) => write!(f, "{r}"),
            Scalar::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}
