//! Commutative semirings of scalars with exact arithmetic.
//!
//! Four instances are provided: the one-element semiring, the naturals, the
//! rationals and the Gaussian rationals `ℚ(i)`. Every scalar is kept in a
//! canonical form so that structural equality is semantic equality.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which semiring scalars live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semiring {
    /// The singleton semiring `{@}`.
    Trivial,
    /// Arbitrary-precision naturals.
    Nat,
    /// Exact rationals.
    Rat,
    /// Complex numbers with rational real and imaginary parts.
    Crat,
}

/// An element of one of the [`Semiring`] instances.
///
/// Rationals are always reduced with a positive denominator (guaranteed by
/// `BigRational`), so derived equality and ordering are canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Unit,
    Nat(BigUint),
    Rat(BigRational),
    Crat(BigRational, BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiringError {
    #[error("scalar {scalar} does not belong to the {expected} semiring")]
    Mismatch { expected: Semiring, scalar: String },
    #[error("invalid {semiring} literal `{text}`: {reason}")]
    BadLiteral {
        semiring: Semiring,
        text: String,
        reason: String,
    },
}

impl Semiring {
    pub const ALL: [Semiring; 4] = [
        Semiring::Trivial,
        Semiring::Nat,
        Semiring::Rat,
        Semiring::Crat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Semiring::Trivial => "trivial",
            Semiring::Nat => "nat",
            Semiring::Rat => "rat",
            Semiring::Crat => "crat",
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(self) -> Scalar {
        self.from_int(1)
    }

    /// Image of an integer under the unique ring map. Negative integers in
    /// `Nat` saturate to zero, since ℕ has no additive inverses.
    pub fn from_int(self, n: i64) -> Scalar {
        match self {
            Semiring::Trivial => Scalar::Unit,
            Semiring::Nat => Scalar::Nat(BigUint::from(n.max(0) as u64)),
            Semiring::Rat => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Semiring::Crat => Scalar::Crat(
                BigRational::from_integer(BigInt::from(n)),
                BigRational::zero(),
            ),
        }
    }

    pub fn contains(self, a: &Scalar) -> bool {
        a.semiring() == self
    }

    fn check(self, a: &Scalar) -> Result<(), SemiringError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(SemiringError::Mismatch {
                expected: self,
                scalar: a.to_string(),
            })
        }
    }

    pub fn add(self, a: &Scalar, b: &Scalar) -> Result<Scalar, SemiringError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.add_same(b))
    }

    pub fn mul(self, a: &Scalar, b: &Scalar) -> Result<Scalar, SemiringError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.mul_same(b))
    }

    /// Parse a literal in this semiring's codec: `@`, `17`, `-3/4`,
    /// `(3/4, -1/2)`.
    pub fn parse(self, text: &str) -> Result<Scalar, SemiringError> {
        let bad = |reason: &str| SemiringError::BadLiteral {
            semiring: self,
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let s = text.trim();
        match self {
            Semiring::Trivial => {
                if s == "@" {
                    Ok(Scalar::Unit)
                } else {
                    Err(bad("the trivial semiring has the single literal `@`"))
                }
            }
            Semiring::Nat => {
                if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad("expected a natural number"));
                }
                BigUint::from_str(s)
                    .map(Scalar::Nat)
                    .map_err(|e| bad(&e.to_string()))
            }
            Semiring::Rat => parse_rational(s).map(Scalar::Rat).map_err(|r| bad(&r)),
            Semiring::Crat => {
                let inner = s
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| bad("expected `(re, im)`"))?;
                let (re, im) = inner
                    .split_once(',')
                    .ok_or_else(|| bad("expected `(re, im)`"))?;
                let re = parse_rational(re.trim()).map_err(|r| bad(&r))?;
                let im = parse_rational(im.trim()).map_err(|r| bad(&r))?;
                Ok(Scalar::Crat(re, im))
            }
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semiring {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trivial" => Ok(Semiring::Trivial),
            "nat" => Ok(Semiring::Nat),
            "rat" => Ok(Semiring::Rat),
            "crat" => Ok(Semiring::Crat),
            other => Err(format!(
                "unknown semiring `{other}` (expected trivial, nat, rat or crat)"
            )),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let int = |p: &str| -> Result<BigInt, String> {
        let digits = p.strip_prefix('-').unwrap_or(p);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("`{p}` is not an integer"));
        }
        BigInt::from_str(p).map_err(|e| e.to_string())
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(int(s)?)),
        Some((n, d)) => {
            if d.starts_with('-') {
                return Err("denominator must be positive".into());
            }
            let d = int(d)?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(int(n)?, d))
        }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl Scalar {
    pub fn semiring(&self) -> Semiring {
        match self {
            Scalar::Unit => Semiring::Trivial,
            Scalar::Nat(_) => Semiring::Nat,
            Scalar::Rat(_) => Semiring::Rat,
            Scalar::Crat(..) => Semiring::Crat,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            // In the one-element semiring 0 = 1 = @.
            Scalar::Unit => true,
            Scalar::Nat(n) => n.is_zero(),
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Crat(re, im) => re.is_zero() && im.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.semiring().one()
    }

    /// Addition of two scalars of the same semiring.
    ///
    /// Panics when the semirings differ; use [`Semiring::add`] for a checked
    /// variant.
    pub fn add_same(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Unit, Scalar::Unit) => Scalar::Unit,
            (Scalar::Nat(a), Scalar::Nat(b)) => Scalar::Nat(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Crat(a, b), Scalar::Crat(c, d)) => Scalar::Crat(a + c, b + d),
            (a, b) => panic!("semiring mismatch: {a} + {b}"),
        }
    }

    /// Multiplication of two scalars of the same semiring. Panics on mismatch.
    pub fn mul_same(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Unit, Scalar::Unit) => Scalar::Unit,
            (Scalar::Nat(a), Scalar::Nat(b)) => Scalar::Nat(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Crat(a, b), Scalar::Crat(c, d)) => {
                Scalar::Crat(a * c - b * d, a * d + b * c)
            }
            (a, b) => panic!("semiring mismatch: {a} * {b}"),
        }
    }

    /// Additive inverse, where the semiring has one (`Rat`, `Crat`, and
    /// trivially `Trivial`).
    pub fn neg(&self) -> Option<Scalar> {
        match self {
            Scalar::Unit => Some(Scalar::Unit),
            Scalar::Nat(n) if n.is_zero() => Some(self.clone()),
            Scalar::Nat(_) => None,
            Scalar::Rat(q) => Some(Scalar::Rat(-q)),
            Scalar::Crat(a, b) => Some(Scalar::Crat(-a, -b)),
        }
    }

    /// Sum of an iterator of scalars, starting from the semiring zero.
    pub fn sum<'a>(semiring: Semiring, items: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
        items
            .into_iter()
            .fold(semiring.zero(), |acc, s| acc.add_same(s))
    }

    pub fn product<'a>(semiring: Semiring, items: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
        items
            .into_iter()
            .fold(semiring.one(), |acc, s| acc.mul_same(s))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Unit => f.write_str("@"),
            Scalar::Nat(n) => write!(f, "{n}"),
            Scalar::Rat(q) => write_rational(f, q),
            Scalar::Crat(re, im) => {
                f.write_str("(")?;
                write_rational(f, re)?;
                f.write_str(", ")?;
                write_rational(f, im)?;
                f.write_str(")")
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Complex rational `re + i·im` built from small integer fractions; test and
/// example helper.
pub fn crat(re: (i64, i64), im: (i64, i64)) -> Scalar {
    let q = |(n, d): (i64, i64)| BigRational::new(BigInt::from(n), BigInt::from(d));
    Scalar::Crat(q(re), q(im))
}

/// Rational `n/d`; test and example helper.
pub fn rat(n: i64, d: i64) -> Scalar {
    Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nat(n: u64) -> Scalar {
        Scalar::Nat(BigUint::from(n))
    }

    #[test]
    fn add_examples() {
        assert_eq!(Semiring::Nat.add(&nat(2), &nat(3)).unwrap(), nat(5));
        assert_eq!(
            Semiring::Rat.add(&rat(1, 2), &rat(1, 3)).unwrap(),
            rat(5, 6)
        );
        assert_eq!(
            Semiring::Trivial.add(&Scalar::Unit, &Scalar::Unit).unwrap(),
            Scalar::Unit
        );
    }

    #[test]
    fn mul_examples() {
        let i = crat((0, 1), (1, 1));
        assert_eq!(Semiring::Crat.mul(&i, &i).unwrap(), crat((-1, 1), (0, 1)));
        assert_eq!(Semiring::Nat.mul(&nat(4), &nat(0)).unwrap(), nat(0));
        assert_eq!(
            Semiring::Rat.mul(&rat(2, 3), &rat(3, 2)).unwrap(),
            Semiring::Rat.one()
        );
    }

    #[test]
    fn mismatch_is_an_error() {
        let err = Semiring::Nat.add(&nat(1), &rat(1, 2)).unwrap_err();
        assert!(matches!(err, SemiringError::Mismatch { .. }));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(Semiring::Nat.parse("12").unwrap(), nat(12));
        assert_eq!(
            Semiring::Crat.parse("(1/2, -1)").unwrap(),
            crat((1, 2), (-1, 1))
        );
        assert!(Semiring::Nat.parse("-3").is_err());
        assert!(Semiring::Rat.parse("1/0").is_err());
        assert!(Semiring::Rat.parse("1/-2").is_err());
        assert!(Semiring::Trivial.parse("0").is_err());
        assert_eq!(Semiring::Rat.parse("-2/5").unwrap(), rat(-2, 5));
        assert_eq!(Semiring::Rat.parse("6/4").unwrap(), rat(3, 2));
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(rat(6, -4).to_string(), "-3/2");
        assert_eq!(rat(4, 2).to_string(), "2");
        assert_eq!(crat((3, 4), (-1, 2)).to_string(), "(3/4, -1/2)");
        assert_eq!(Scalar::Unit.to_string(), "@");
    }

    fn arb_scalar(s: Semiring) -> BoxedStrategy<Scalar> {
        match s {
            Semiring::Trivial => Just(Scalar::Unit).boxed(),
            Semiring::Nat => (0u64..1000).prop_map(nat).boxed(),
            Semiring::Rat => (-50i64..50, 1i64..20)
                .prop_map(|(n, d)| rat(n, d))
                .boxed(),
            Semiring::Crat => ((-20i64..20, 1i64..9), (-20i64..20, 1i64..9))
                .prop_map(|(a, b)| crat(a, b))
                .boxed(),
        }
    }

    fn arb_triple() -> impl Strategy<Value = (Semiring, Scalar, Scalar, Scalar)> {
        prop_oneof![
            Just(Semiring::Trivial),
            Just(Semiring::Nat),
            Just(Semiring::Rat),
            Just(Semiring::Crat)
        ]
        .prop_flat_map(|s| (Just(s), arb_scalar(s), arb_scalar(s), arb_scalar(s)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn semiring_laws((s, a, b, c) in arb_triple()) {
            let add = |x: &Scalar, y: &Scalar| s.add(x, y).unwrap();
            let mul = |x: &Scalar, y: &Scalar| s.mul(x, y).unwrap();
            prop_assert_eq!(add(&a, &b), add(&b, &a));
            prop_assert_eq!(mul(&a, &b), mul(&b, &a));
            prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
            prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
            prop_assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
            prop_assert_eq!(add(&a, &s.zero()), a.clone());
            prop_assert_eq!(mul(&a, &s.one()), a.clone());
            prop_assert_eq!(mul(&a, &s.zero()), s.zero());
        }

        #[test]
        fn print_parse_round_trip((s, a, _, _) in arb_triple()) {
            prop_assert_eq!(s.parse(&a.to_string()).unwrap(), a);
        }
    }
}
