//! Exact scalar domains.
//!
//! Every proof term of `1` carries a scalar drawn from a commutative
//! semiring. The semiring is chosen at run time, so scalars are a tagged
//! enum rather than a type parameter; operations on scalars from two
//! different semirings fail with [`SemiringError::MixedSemiring`].

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiringError {
    #[error("scalars from different semirings: {left} and {right}")]
    MixedSemiring { left: Semiring, right: Semiring },
    #[error("invalid {semiring} literal `{text}`: {reason}")]
    Parse {
        semiring: Semiring,
        text: String,
        reason: &'static str,
    },
    #[error("unknown semiring `{0}` (expected one of unit, nat, rat, gauss)")]
    Unknown(String),
}

/// The built-in scalar domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semiring {
    /// The one-element semiring `{⋆}`.
    Unit,
    /// Arbitrary-precision naturals.
    Nat,
    /// Arbitrary-precision rationals.
    Rat,
    /// Complex numbers with rational real and imaginary parts.
    Gauss,
}

const BUILTIN: [Semiring; 4] = [Semiring::Unit, Semiring::Nat, Semiring::Rat, Semiring::Gauss];

pub fn builtin_semirings() -> &'static [Semiring] {
    &BUILTIN
}

impl Semiring {
    pub fn name(self) -> &'static str {
        match self {
            Semiring::Unit => "unit",
            Semiring::Nat => "nat",
            Semiring::Rat => "rat",
            Semiring::Gauss => "gauss",
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            Semiring::Unit => Scalar::Unit,
            Semiring::Nat => Scalar::Nat(BigUint::zero()),
            Semiring::Rat => Scalar::Rat(BigRational::zero()),
            Semiring::Gauss => Scalar::Gauss(Complex::new(BigRational::zero(), BigRational::zero())),
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            Semiring::Unit => Scalar::Unit,
            Semiring::Nat => Scalar::Nat(BigUint::one()),
            Semiring::Rat => Scalar::Rat(BigRational::one()),
            Semiring::Gauss => Scalar::Gauss(Complex::new(BigRational::one(), BigRational::zero())),
        }
    }

    /// Embeds a natural number (`n` copies of one summed).
    pub fn from_u64(self, n: u64) -> Scalar {
        match self {
            Semiring::Unit => Scalar::Unit,
            Semiring::Nat => Scalar::Nat(BigUint::from(n)),
            Semiring::Rat => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Semiring::Gauss => Scalar::Gauss(Complex::new(
                BigRational::from_integer(BigInt::from(n)),
                BigRational::zero(),
            )),
        }
    }

    /// Parses a literal of this semiring.
    ///
    /// Accepted forms: unit `u`; nat `42`; rat `3`, `-3`, `2/5`;
    /// gauss `2+3i`, `-i`, `1/2-1/3i`.
    pub fn parse(self, text: &str) -> Result<Scalar, SemiringError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason| SemiringError::Parse {
            semiring: self,
            text: text.to_string(),
            reason,
        };
        if s.is_empty() {
            return Err(err("empty literal"));
        }
        match self {
            Semiring::Unit => {
                if s == "u" {
                    Ok(Scalar::Unit)
                } else {
                    Err(err("the only unit scalar is `u`"))
                }
            }
            Semiring::Nat => {
                if !s.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(err("expected decimal digits"));
                }
                BigUint::from_str(&s).map(Scalar::Nat).map_err(|_| err("expected decimal digits"))
            }
            Semiring::Rat => parse_rational(&s).map(Scalar::Rat).ok_or_else(|| err("expected p or p/q")),
            Semiring::Gauss => parse_gaussian(&s).map(Scalar::Gauss).ok_or_else(|| err("expected a+bi")),
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semiring {
    type Err = SemiringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "unit" => Ok(Semiring::Unit),
            "nat" => Ok(Semiring::Nat),
            "rat" => Ok(Semiring::Rat),
            "gauss" | "gaussrat" => Ok(Semiring::Gauss),
            _ => Err(SemiringError::Unknown(s.to_string())),
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let unsigned = num.strip_prefix('-').unwrap_or(num);
    if !digits(unsigned) {
        return None;
    }
    let n = BigInt::from_str(num).ok()?;
    match den {
        None => Some(BigRational::from_integer(n)),
        Some(d) => {
            if !digits(d) {
                return None;
            }
            let d = BigInt::from_str(d).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
    }
}

fn parse_gaussian(s: &str) -> Option<Complex<BigRational>> {
    let Some(body) = s.strip_suffix('i') else {
        return Some(Complex::new(parse_rational(s)?, BigRational::zero()));
    };
    // split between the real and the imaginary part at the last sign that is
    // not the leading one
    let split = body
        .char_indices()
        .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(k) => (parse_rational(&body[..k])?, &body[k..]),
        None => (BigRational::zero(), body),
    };
    let im = match im {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
    };
    Some(Complex::new(re, im))
}

/// A scalar tagged with its semiring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Unit,
    Nat(BigUint),
    Rat(BigRational),
    Gauss(Complex<BigRational>),
}

impl Scalar {
    pub fn semiring(&self) -> Semiring {
        match self {
            Scalar::Unit => Semiring::Unit,
            Scalar::Nat(_) => Semiring::Nat,
            Scalar::Rat(_) => Semiring::Rat,
            Scalar::Gauss(_) => Semiring::Gauss,
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, SemiringError> {
        Ok(match (self, other) {
            (Scalar::Unit, Scalar::Unit) => Scalar::Unit,
            (Scalar::Nat(a), Scalar::Nat(b)) => Scalar::Nat(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Gauss(a), Scalar::Gauss(b)) => Scalar::Gauss(a + b),
            _ => return Err(self.mixed(other)),
        })
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, SemiringError> {
        Ok(match (self, other) {
            (Scalar::Unit, Scalar::Unit) => Scalar::Unit,
            (Scalar::Nat(a), Scalar::Nat(b)) => Scalar::Nat(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Gauss(a), Scalar::Gauss(b)) => Scalar::Gauss(a * b),
            _ => return Err(self.mixed(other)),
        })
    }

    fn mixed(&self, other: &Scalar) -> SemiringError {
        SemiringError::MixedSemiring {
            left: self.semiring(),
            right: other.semiring(),
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == self.semiring().zero()
    }

    /// True when the printed literal is more than a bare natural number or
    /// `u`, i.e. when it needs parentheses inside a term.
    pub fn is_composite(&self) -> bool {
        match self {
            Scalar::Unit | Scalar::Nat(_) => false,
            Scalar::Rat(q) => !(q.is_integer() && !q.is_negative()),
            Scalar::Gauss(z) => !(z.im.is_zero() && z.re.is_integer() && !z.re.is_negative()),
        }
    }
}

pub fn scalar_add(a: &Scalar, b: &Scalar) -> Result<Scalar, SemiringError> {
    a.try_add(b)
}

pub fn scalar_mul(a: &Scalar, b: &Scalar) -> Result<Scalar, SemiringError> {
    a.try_mul(b)
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Unit => f.write_str("u"),
            Scalar::Nat(n) => write!(f, "{n}"),
            Scalar::Rat(q) => write_rational(f, q),
            Scalar::Gauss(z) => {
                if z.im.is_zero() {
                    return write_rational(f, &z.re);
                }
                if !z.re.is_zero() {
                    write_rational(f, &z.re)?;
                    if z.im.is_positive() {
                        f.write_str("+")?;
                    }
                }
                if z.im == BigRational::one() {
                } else if z.im == -BigRational::one() {
                    f.write_str("-")?;
                } else {
                    write_rational(f, &z.im)?;
                }
                f.write_str("i")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(s: &str) -> Scalar {
        Semiring::Rat.parse(s).unwrap()
    }

    fn gauss(s: &str) -> Scalar {
        Semiring::Gauss.parse(s).unwrap()
    }

    #[test]
    fn builtin_examples() {
        let names: Vec<_> = builtin_semirings().iter().map(|s| s.name()).collect();
        assert_eq!(names, ["unit", "nat", "rat", "gauss"]);

        let u = Semiring::Unit.one();
        assert_eq!(u.try_add(&u).unwrap(), Scalar::Unit);
        assert_eq!(u.try_mul(&u).unwrap(), Scalar::Unit);
        assert_eq!(rat("1/2").try_add(&rat("1/3")).unwrap(), rat("5/6"));
        assert_eq!(gauss("i").try_mul(&gauss("i")).unwrap(), gauss("-1"));
    }

    #[test]
    fn add_and_mul_examples() {
        let n = |k: u64| Semiring::Nat.from_u64(k);
        assert_eq!(scalar_add(&n(2), &n(3)).unwrap(), n(5));
        assert_eq!(scalar_mul(&rat("2"), &rat("1/2")).unwrap(), rat("1"));
        assert!(matches!(
            scalar_add(&n(1), &rat("1")),
            Err(SemiringError::MixedSemiring { .. })
        ));
    }

    #[test]
    fn literal_forms() {
        assert_eq!(Semiring::Nat.parse("42").unwrap().to_string(), "42");
        assert!(Semiring::Nat.parse("-1").is_err());
        assert_eq!(rat("-3").to_string(), "-3");
        assert_eq!(rat("4/10").to_string(), "2/5");
        assert!(Semiring::Rat.parse("1/0").is_err());
        assert_eq!(gauss("2+3i").to_string(), "2+3i");
        assert_eq!(gauss("-i").to_string(), "-i");
        assert_eq!(gauss("1/2-1/3i").to_string(), "1/2-1/3i");
        assert_eq!(gauss("3i").to_string(), "3i");
        assert_eq!(gauss("-2-i").to_string(), "-2-i");
        assert!(Semiring::Gauss.parse("2+").is_err());
        assert_eq!(Semiring::Unit.parse("u").unwrap(), Scalar::Unit);
        assert!(Semiring::Unit.parse("1").is_err());
    }

    #[test]
    fn composite_detection() {
        assert!(!rat("3").is_composite());
        assert!(rat("-3").is_composite());
        assert!(rat("1/2").is_composite());
        assert!(gauss("2+3i").is_composite());
        assert!(!gauss("7").is_composite());
        assert!(!Scalar::Unit.is_composite());
    }

    fn small_int() -> impl Strategy<Value = i64> {
        -20i64..20
    }

    fn scalar_in(s: Semiring) -> BoxedStrategy<Scalar> {
        match s {
            Semiring::Unit => Just(Scalar::Unit).boxed(),
            Semiring::Nat => (0u64..1000).prop_map(|n| Semiring::Nat.from_u64(n)).boxed(),
            Semiring::Rat => (small_int(), 1i64..12)
                .prop_map(|(p, q)| Scalar::Rat(BigRational::new(p.into(), q.into())))
                .boxed(),
            Semiring::Gauss => (small_int(), 1i64..6, small_int(), 1i64..6)
                .prop_map(|(a, b, c, d)| {
                    Scalar::Gauss(Complex::new(
                        BigRational::new(a.into(), b.into()),
                        BigRational::new(c.into(), d.into()),
                    ))
                })
                .boxed(),
        }
    }

    fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
        prop::sample::select(builtin_semirings().to_vec())
            .prop_flat_map(|s| (scalar_in(s), scalar_in(s), scalar_in(s)))
    }

    proptest! {
        #[test]
        fn semiring_laws((a, b, c) in triple()) {
            let s = a.semiring();
            let add = |x: &Scalar, y: &Scalar| x.try_add(y).unwrap();
            let mul = |x: &Scalar, y: &Scalar| x.try_mul(y).unwrap();
            prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
            prop_assert_eq!(add(&a, &b), add(&b, &a));
            prop_assert_eq!(add(&a, &s.zero()), a.clone());
            prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
            prop_assert_eq!(mul(&a, &s.one()), a.clone());
            prop_assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
            prop_assert_eq!(mul(&a, &s.zero()), s.zero());
        }

        #[test]
        fn print_parse_round_trip((a, _, _) in triple()) {
            let back = a.semiring().parse(&a.to_string()).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
