//! Exact coefficient fields: arbitrary-precision rationals and prime fields GF(p).
//!
//! A [`Coeff`] value always lives in one field, fixed by a [`CoeffField`]
//! descriptor. Values are kept in canonical form after every operation, so
//! structural equality is field equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest modulus accepted for GF(p); products of residues must fit in `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

/// Default prime for the fast cross-check field, 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient field mismatch: {0} vs {1}")]
    FieldMismatch(CoeffField, CoeffField),
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("cannot parse coefficient `{0}`")]
    Syntax(String),
}

/// The field a session computes over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum CoeffField {
    #[default]
    Rationals,
    Prime(u64),
}

impl CoeffField {
    /// GF(p), after checking that `p` is a prime small enough for `u64` products.
    pub fn prime(p: u64) -> Result<Self, CoeffError> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(CoeffError::NotPrime(p));
        }
        Ok(CoeffField::Prime(p))
    }

    pub fn zero(self) -> Coeff {
        self.from_i64(0)
    }

    pub fn one(self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Coeff {
        match self {
            CoeffField::Rationals => Coeff::Q(BigRational::from_integer(BigInt::from(v))),
            CoeffField::Prime(p) => Coeff::Fp(Fp::new(v.rem_euclid(p as i64) as u64, p)),
        }
    }

    /// Maps the rational `num/den` into this field.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<Coeff, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        match self {
            CoeffField::Rationals => Ok(Coeff::Q(BigRational::new(num.clone(), den.clone()))),
            CoeffField::Prime(p) => {
                let n = Fp::from_bigint(num, p);
                let d = Fp::from_bigint(den, p);
                Ok(Coeff::Fp(n.div(d)?))
            }
        }
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffField::Rationals => write!(f, "QQ"),
            CoeffField::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for CoeffField {
    type Err = CoeffError;

    /// Accepts `qq`, `rationals`, `gf`, `gf(p)` and `gf:p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "qq" | "q" | "rationals" => return Ok(CoeffField::Rationals),
            "gf" | "gfp" => return Ok(CoeffField::Prime(DEFAULT_PRIME)),
            _ => {}
        }
        let digits = t
            .strip_prefix("gf(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("gf:"))
            .ok_or_else(|| CoeffError::Syntax(s.to_string()))?;
        let p: u64 = digits
            .trim()
            .parse()
            .map_err(|_| CoeffError::Syntax(s.to_string()))?;
        CoeffField::prime(p)
    }
}

/// Element of GF(p). The residue is always reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    residue: u64,
    modulus: u64,
}

impl Fp {
    fn new(residue: u64, modulus: u64) -> Self {
        Fp {
            residue: residue % modulus,
            modulus,
        }
    }

    fn from_bigint(v: &BigInt, p: u64) -> Self {
        let r = v.mod_floor(&BigInt::from(p));
        Fp::new(r.to_u64().expect("reduced residue fits"), p)
    }

    pub fn residue(self) -> u64 {
        self.residue
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    fn check(self, o: Fp) -> Result<(), CoeffError> {
        if self.modulus != o.modulus {
            Err(CoeffError::FieldMismatch(
                CoeffField::Prime(self.modulus),
                CoeffField::Prime(o.modulus),
            ))
        } else {
            Ok(())
        }
    }

    fn add(self, o: Fp) -> Fp {
        Fp::new(self.residue + o.residue, self.modulus)
    }

    fn sub(self, o: Fp) -> Fp {
        Fp::new(self.residue + self.modulus - o.residue, self.modulus)
    }

    fn mul(self, o: Fp) -> Fp {
        Fp::new(self.residue * o.residue, self.modulus)
    }

    fn neg(self) -> Fp {
        Fp::new(self.modulus - self.residue, self.modulus)
    }

    fn inv(self) -> Result<Fp, CoeffError> {
        if self.residue == 0 {
            return Err(CoeffError::DivisionByZero);
        }
        // extended Euclid on signed values
        let (mut r0, mut r1) = (self.modulus as i128, self.residue as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(Fp::new(s0.rem_euclid(self.modulus as i128) as u64, self.modulus))
    }

    fn div(self, o: Fp) -> Result<Fp, CoeffError> {
        self.check(o)?;
        Ok(self.mul(o.inv()?))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element: either an exact rational or a residue mod p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Q(BigRational),
    Fp(Fp),
}

impl Coeff {
    pub fn field(&self) -> CoeffField {
        match self {
            Coeff::Q(_) => CoeffField::Rationals,
            Coeff::Fp(x) => CoeffField::Prime(x.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_zero(),
            Coeff::Fp(x) => x.residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_one(),
            Coeff::Fp(x) => x.residue == 1,
        }
    }

    /// True for rationals below zero; residues are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_negative(),
            Coeff::Fp(_) => false,
        }
    }

    pub fn checked_add(&self, o: &Coeff) -> Result<Coeff, CoeffError> {
        match (self, o) {
            (Coeff::Q(a), Coeff::Q(b)) => Ok(Coeff::Q(a + b)),
            (Coeff::Fp(a), Coeff::Fp(b)) => a.check(*b).map(|_| Coeff::Fp(a.add(*b))),
            _ => Err(CoeffError::FieldMismatch(self.field(), o.field())),
        }
    }

    pub fn checked_sub(&self, o: &Coeff) -> Result<Coeff, CoeffError> {
        match (self, o) {
            (Coeff::Q(a), Coeff::Q(b)) => Ok(Coeff::Q(a - b)),
            (Coeff::Fp(a), Coeff::Fp(b)) => a.check(*b).map(|_| Coeff::Fp(a.sub(*b))),
            _ => Err(CoeffError::FieldMismatch(self.field(), o.field())),
        }
    }

    pub fn checked_mul(&self, o: &Coeff) -> Result<Coeff, CoeffError> {
        match (self, o) {
            (Coeff::Q(a), Coeff::Q(b)) => Ok(Coeff::Q(a * b)),
            (Coeff::Fp(a), Coeff::Fp(b)) => a.check(*b).map(|_| Coeff::Fp(a.mul(*b))),
            _ => Err(CoeffError::FieldMismatch(self.field(), o.field())),
        }
    }

    pub fn checked_div(&self, o: &Coeff) -> Result<Coeff, CoeffError> {
        match (self, o) {
            (Coeff::Q(a), Coeff::Q(b)) => {
                if b.is_zero() {
                    Err(CoeffError::DivisionByZero)
                } else {
                    Ok(Coeff::Q(a / b))
                }
            }
            (Coeff::Fp(a), Coeff::Fp(b)) => a.div(*b).map(Coeff::Fp),
            _ => Err(CoeffError::FieldMismatch(self.field(), o.field())),
        }
    }

    pub fn inv(&self) -> Result<Coeff, CoeffError> {
        self.field().one().checked_div(self)
    }

    /// Formats the value as it appears inside a polynomial: bare residues for GF(p).
    pub(crate) fn fmt_bare(&self) -> String {
        match self {
            Coeff::Q(q) => fmt_rational(q),
            Coeff::Fp(x) => x.residue.to_string(),
        }
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Q(q) => f.write_str(&fmt_rational(q)),
            Coeff::Fp(x) => write!(f, "{} mod {}", x.residue, x.modulus),
        }
    }
}

impl FromStr for Coeff {
    type Err = CoeffError;

    /// Parses `-7/3`, `5` (rationals) or `3 mod 7` (prime field).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CoeffError::Syntax(s.to_string());
        let s = s.trim();
        if let Some((val, m)) = s.split_once("mod") {
            let p: u64 = m.trim().parse().map_err(|_| bad())?;
            let field = CoeffField::prime(p)?;
            let (num, den) = parse_ratio(val.trim()).ok_or_else(bad)?;
            return field.from_ratio(&num, &den);
        }
        let (num, den) = parse_ratio(s).ok_or_else(bad)?;
        CoeffField::Rationals.from_ratio(&num, &den)
    }
}

fn parse_ratio(s: &str) -> Option<(BigInt, BigInt)> {
    match s.split_once('/') {
        Some((n, d)) => Some((n.trim().parse().ok()?, d.trim().parse().ok()?)),
        None => Some((s.parse().ok()?, BigInt::one())),
    }
}

// Operator forms panic on a field mismatch; inside one ring context the field
// is fixed, so only the `checked_*` methods are needed at API boundaries.
macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Coeff> for &Coeff {
            type Output = Coeff;
            fn $method(self, o: &Coeff) -> Coeff {
                self.$checked(o).expect("coefficient field mismatch")
            }
        }
        impl $tr<Coeff> for Coeff {
            type Output = Coeff;
            fn $method(self, o: Coeff) -> Coeff {
                (&self).$method(&o)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Q(q) => Coeff::Q(-q),
            Coeff::Fp(x) => Coeff::Fp(x.neg()),
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}
