//! Exact scalar arithmetic over the working field: arbitrary-precision
//! rationals (the default) or a prime field F_p.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;

use crate::Error;

/// The working field. Every container (matrix, subspace, algebra) carries one
/// and all element operations go through it, so moduli never live inside
/// individual scalars.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp(u64),
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
    pub fn prime(p: u64) -> Result<Field, Error> {
        if !is_prime(p) {
            return Err(Error::Arithmetic(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::zero()),
            Field::Prime(_) => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::one()),
            Field::Prime(_) => Scalar::Fp(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from(BigInt::from(n))),
            Field::Prime(p) => {
                let m = n.rem_euclid(*p as i64) as u64;
                Scalar::Fp(m % p)
            }
        }
    }

    /// n/d as a field element; in F_p this is n * d^{-1}.
    pub fn from_ratio(&self, n: i64, d: i64) -> Result<Scalar, Error> {
        if d == 0 {
            return Err(Error::Arithmetic("zero denominator".into()));
        }
        match self {
            Field::Rational => Ok(Scalar::Rat(BigRational::new(
                BigInt::from(n),
                BigInt::from(d),
            ))),
            Field::Prime(_) => {
                let dn = self.from_i64(d);
                let inv = self.inv(&dn)?;
                Ok(self.mul(&self.from_i64(n), &inv))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Field::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rational, Scalar::Rat(x)) => Scalar::Rat(-x),
            (Field::Prime(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Field::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, Error> {
        if self.is_zero(a) {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        match (self, a) {
            (Field::Rational, Scalar::Rat(x)) => Ok(Scalar::Rat(x.recip())),
            (Field::Prime(p), Scalar::Fp(x)) => {
                // extended Euclid on (x, p)
                let (mut r0, mut r1) = (*x as i128, *p as i128);
                let (mut s0, mut s1) = (1i128, 0i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                debug_assert_eq!(r0, 1);
                Ok(Scalar::Fp(s0.rem_euclid(*p as i128) as u64))
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, Error> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Parses "p", "-p", or "p/q".
    pub fn parse(&self, s: &str) -> Result<Scalar, Error> {
        let s = s.trim();
        let bad = || Error::Arithmetic(format!("cannot parse scalar `{s}`"));
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            self.from_ratio(n, d)
        } else {
            let n: i64 = s.parse().map_err(|_| bad())?;
            Ok(self.from_i64(n))
        }
    }

    pub fn fmt_scalar(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp(v) => format!("{v}"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl Scalar {
    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp(v) => *v == 1,
        }
    }

    /// Signed integer value when the scalar is an integer rational; used for
    /// integer-normalized polynomial output.
    pub fn as_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    Some(r.numer().clone())
                } else {
                    None
                }
            }
            Scalar::Fp(v) => Some(BigInt::from(*v)),
        }
    }

    pub fn rat(&self) -> &BigRational {
        match self {
            Scalar::Rat(r) => r,
            _ => panic!("not a rational scalar"),
        }
    }

    pub fn is_negative_rat(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_negative())
    }
}
