//! Exact scalar arithmetic over the rationals or a prime field GF(p).
//!
//! Matroid rank is discontinuous, so everything here is exact: arbitrary
//! precision rationals via `num-rational`, and `u64` residues for GF(p).
//! The field is a runtime value (it comes from CLI flags and JSON), so
//! scalars are an enum and all arithmetic goes through [`Field`] methods.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    /// GF(p) for a prime p.
    Prime(u64),
}

/// An element of a [`Field`]. `Mod` values are reduced representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
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

impl Field {
    pub fn rationals() -> Self {
        Field::Rationals
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::input(format!("prime {p} too large")));
        }
        Ok(Field::Prime(p))
    }

    /// Parses the field spec strings used everywhere: `"Q"` or `"GF(p)"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rationals);
        }
        if let Some(inner) = s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            let p: u64 = inner
                .parse()
                .map_err(|_| Error::input(format!("bad field spec {s:?}")))?;
            return Field::prime(p);
        }
        Err(Error::input(format!(
            "bad field spec {s:?}; expected \"Q\" or \"GF(p)\""
        )))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rat(BigRational::zero()),
            Field::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rat(BigRational::one()),
            Field::Prime(_) => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
            Field::Prime(p) => {
                let p = *p as i128;
                Scalar::Mod((((n as i128) % p + p) % p) as u64)
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(m) => *m == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch in add"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (Field::Prime(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar/field mismatch in neg"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch in mul"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::domain("division by zero".to_string()));
        }
        Ok(match (self, a) {
            (Field::Rationals, Scalar::Rat(x)) => Scalar::Rat(x.recip()),
            (Field::Prime(p), Scalar::Mod(x)) => Scalar::Mod(mod_pow(*x, p - 2, *p)),
            _ => panic!("scalar/field mismatch in inv"),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Parses a scalar: integers or `a/b` over Q, a residue over GF(p).
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match self {
            Field::Rationals => {
                let r = if let Some((num, den)) = s.split_once('/') {
                    let n: BigInt = num
                        .trim()
                        .parse()
                        .map_err(|_| Error::input(format!("bad rational {s:?}")))?;
                    let d: BigInt = den
                        .trim()
                        .parse()
                        .map_err(|_| Error::input(format!("bad rational {s:?}")))?;
                    if d.is_zero() {
                        return Err(Error::input(format!("zero denominator in {s:?}")));
                    }
                    BigRational::new(n, d)
                } else {
                    let n: BigInt = s
                        .parse()
                        .map_err(|_| Error::input(format!("bad rational {s:?}")))?;
                    BigRational::from(n)
                };
                Ok(Scalar::Rat(r))
            }
            Field::Prime(p) => {
                let (neg, digits) = match s.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, s),
                };
                let n: u64 = digits
                    .parse()
                    .map_err(|_| Error::input(format!("bad GF({p}) element {s:?}")))?;
                let n = n % p;
                Ok(Scalar::Mod(if neg && n != 0 { p - n } else { n }))
            }
        }
    }

    pub fn scalar_string(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod(m) => m.to_string(),
        }
    }

    /// All elements of a finite field, in residue order. Errors on Q.
    pub fn elements(&self) -> Result<Vec<Scalar>> {
        match self {
            Field::Rationals => Err(Error::domain("cannot enumerate Q".to_string())),
            Field::Prime(p) => Ok((0..*p).map(Scalar::Mod).collect()),
        }
    }

    /// Nonzero elements of a finite field.
    pub fn units(&self) -> Result<Vec<Scalar>> {
        Ok(self.elements()?.into_iter().skip(1).collect())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    /// Deterministic ordering key used when scalars must be sorted for output.
    pub fn sort_key(&self, a: &Scalar) -> String {
        match a {
            Scalar::Mod(m) => format!("{m:020}"),
            Scalar::Rat(r) => {
                // order rationals by sign, then magnitude; good enough for
                // deterministic reporting
                let s = if r.is_negative() { '1' } else { '0' };
                format!("{s}{}", self.scalar_string(a))
            }
        }
    }
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_field_specs() {
        assert_eq!(Field::parse("Q").unwrap(), Field::Rationals);
        assert_eq!(Field::parse("GF(5)").unwrap(), Field::Prime(5));
        assert_eq!(Field::parse("GF(7)").unwrap(), Field::Prime(7));
        assert!(Field::parse("GF(6)").is_err());
        assert!(Field::parse("R").is_err());
    }

    #[test]
    fn rational_arithmetic() {
        let f = Field::Rationals;
        let half = f.parse_scalar("1/2").unwrap();
        let third = f.parse_scalar("1/3").unwrap();
        let sum = f.add(&half, &third);
        assert_eq!(f.scalar_string(&sum), "5/6");
        let prod = f.mul(&half, &third);
        assert_eq!(f.scalar_string(&prod), "1/6");
        let inv = f.inv(&f.parse_scalar("-2/3").unwrap()).unwrap();
        assert_eq!(f.scalar_string(&inv), "-3/2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        let a = f.parse_scalar("3").unwrap();
        let b = f.parse_scalar("4").unwrap();
        assert_eq!(f.add(&a, &b), Scalar::Mod(2));
        assert_eq!(f.mul(&a, &b), Scalar::Mod(2));
        assert_eq!(f.inv(&a).unwrap(), Scalar::Mod(2)); // 3*2 = 6 = 1 mod 5
        assert_eq!(f.parse_scalar("-2").unwrap(), Scalar::Mod(3));
        assert!(f.inv(&Scalar::Mod(0)).is_err());
    }

    #[test]
    fn units_and_elements() {
        let f = Field::prime(3).unwrap();
        assert_eq!(f.elements().unwrap().len(), 3);
        assert_eq!(f.units().unwrap(), vec![Scalar::Mod(1), Scalar::Mod(2)]);
        assert!(Field::Rationals.elements().is_err());
    }
}
