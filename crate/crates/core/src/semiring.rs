//! The commutative semirings a tiling system can be evaluated over.
//!
//! All arithmetic is exact. Counting semirings use arbitrary-precision
//! integers or reduced fractions; the tropical semirings carry an explicit
//! infinity which is their additive identity.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemiringError {
    #[error("unknown semiring `{0}`")]
    UnknownSemiring(String),
    #[error("cannot parse `{text}` as a {semiring} weight: {reason}")]
    Parse {
        semiring: SemiringId,
        text: String,
        reason: &'static str,
    },
}

/// Identifier of one of the supported semirings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemiringId {
    Boolean,
    Natural,
    Integer,
    Rational,
    RationalNonneg,
    MaxPlusNat,
    MaxPlusInt,
    MinPlusNat,
    MinPlusInt,
}

impl SemiringId {
    pub const ALL: [SemiringId; 9] = [
        SemiringId::Boolean,
        SemiringId::Natural,
        SemiringId::Integer,
        SemiringId::Rational,
        SemiringId::RationalNonneg,
        SemiringId::MaxPlusNat,
        SemiringId::MaxPlusInt,
        SemiringId::MinPlusNat,
        SemiringId::MinPlusInt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SemiringId::Boolean => "boolean",
            SemiringId::Natural => "natural",
            SemiringId::Integer => "integer",
            SemiringId::Rational => "rational",
            SemiringId::RationalNonneg => "rational-nonneg",
            SemiringId::MaxPlusNat => "max-plus-nat",
            SemiringId::MaxPlusInt => "max-plus-int",
            SemiringId::MinPlusNat => "min-plus-nat",
            SemiringId::MinPlusInt => "min-plus-int",
        }
    }

    fn is_tropical(self) -> bool {
        matches!(
            self,
            SemiringId::MaxPlusNat | SemiringId::MaxPlusInt | SemiringId::MinPlusNat | SemiringId::MinPlusInt
        )
    }
}

impl fmt::Display for SemiringId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemiringId {
    type Err = SemiringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SemiringId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| SemiringError::UnknownSemiring(s.to_string()))
    }
}

/// An element of one of the supported semirings.
///
/// `Infinity` is the tropical zero: `-inf` under max-plus, `+inf` under
/// min-plus. It never occurs in the other semirings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Weight {
    Bool(bool),
    Int(BigInt),
    Rat(BigRational),
    Finite(BigInt),
    Infinity,
}

/// The minimal algebraic surface the law checker needs.
///
/// [`Semiring`] implements it; tests implement it for deliberately broken
/// structures to check that violations are reported.
pub trait SemiringOps {
    type Elem: Clone + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
}

/// A runtime-selected commutative semiring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Semiring {
    id: SemiringId,
}

pub fn make_semiring(id: SemiringId) -> Semiring {
    Semiring { id }
}

impl Semiring {
    pub fn new(id: SemiringId) -> Self {
        Semiring { id }
    }

    pub fn by_name(name: &str) -> Result<Self, SemiringError> {
        Ok(Semiring::new(name.parse()?))
    }

    pub fn id(&self) -> SemiringId {
        self.id
    }

    pub fn zero(&self) -> Weight {
        match self.id {
            SemiringId::Boolean => Weight::Bool(false),
            SemiringId::Natural | SemiringId::Integer => Weight::Int(BigInt::zero()),
            SemiringId::Rational | SemiringId::RationalNonneg => Weight::Rat(BigRational::zero()),
            _ => Weight::Infinity,
        }
    }

    pub fn one(&self) -> Weight {
        match self.id {
            SemiringId::Boolean => Weight::Bool(true),
            SemiringId::Natural | SemiringId::Integer => Weight::Int(BigInt::one()),
            SemiringId::Rational | SemiringId::RationalNonneg => Weight::Rat(BigRational::one()),
            _ => Weight::Finite(BigInt::zero()),
        }
    }

    pub fn is_zero(&self, w: &Weight) -> bool {
        match w {
            Weight::Bool(b) => !b,
            Weight::Int(n) => n.is_zero(),
            Weight::Rat(r) => r.is_zero(),
            Weight::Finite(_) => false,
            Weight::Infinity => true,
        }
    }

    fn is_max_plus(&self) -> bool {
        matches!(self.id, SemiringId::MaxPlusNat | SemiringId::MaxPlusInt)
    }

    pub fn add(&self, a: &Weight, b: &Weight) -> Weight {
        match (a, b) {
            (Weight::Bool(x), Weight::Bool(y)) => Weight::Bool(*x || *y),
            (Weight::Int(x), Weight::Int(y)) => Weight::Int(x + y),
            (Weight::Rat(x), Weight::Rat(y)) => Weight::Rat(x + y),
            (Weight::Infinity, other) | (other, Weight::Infinity) => other.clone(),
            (Weight::Finite(x), Weight::Finite(y)) => {
                let pick_x = match x.cmp(y) {
                    Ordering::Less => !self.is_max_plus(),
                    _ => self.is_max_plus(),
                };
                Weight::Finite(if pick_x { x.clone() } else { y.clone() })
            }
            _ => panic!("weights {a:?} and {b:?} do not belong to {}", self.id),
        }
    }

    pub fn mul(&self, a: &Weight, b: &Weight) -> Weight {
        match (a, b) {
            (Weight::Bool(x), Weight::Bool(y)) => Weight::Bool(*x && *y),
            (Weight::Int(x), Weight::Int(y)) => Weight::Int(x * y),
            (Weight::Rat(x), Weight::Rat(y)) => Weight::Rat(x * y),
            (Weight::Infinity, _) | (_, Weight::Infinity) => Weight::Infinity,
            (Weight::Finite(x), Weight::Finite(y)) => Weight::Finite(x + y),
            _ => panic!("weights {a:?} and {b:?} do not belong to {}", self.id),
        }
    }

    /// In-place `acc ⊕= w`.
    pub fn add_assign(&self, acc: &mut Weight, w: &Weight) {
        match (&mut *acc, w) {
            (Weight::Int(x), Weight::Int(y)) => *x += y,
            (Weight::Rat(x), Weight::Rat(y)) => *x += y,
            _ => *acc = self.add(acc, w),
        }
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Weight>>(&self, items: I) -> Weight {
        let mut acc = self.zero();
        for w in items {
            self.add_assign(&mut acc, w);
        }
        acc
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Weight>>(&self, items: I) -> Weight {
        let mut acc = self.one();
        for w in items {
            acc = self.mul(&acc, w);
        }
        acc
    }

    /// Embeds an integer into the carrier. Booleans map nonzero to `1`.
    ///
    /// Returns `None` when the value is outside the carrier (negative numbers
    /// in the natural-valued semirings).
    pub fn from_i64(&self, n: i64) -> Option<Weight> {
        let w = match self.id {
            SemiringId::Boolean => Weight::Bool(n != 0),
            SemiringId::Natural | SemiringId::Integer => Weight::Int(BigInt::from(n)),
            SemiringId::Rational | SemiringId::RationalNonneg => {
                Weight::Rat(BigRational::from_integer(BigInt::from(n)))
            }
            _ => Weight::Finite(BigInt::from(n)),
        };
        self.check(&w).then_some(w)
    }

    /// True when `w` is a value of this semiring's carrier.
    pub fn check(&self, w: &Weight) -> bool {
        match (self.id, w) {
            (SemiringId::Boolean, Weight::Bool(_)) => true,
            (SemiringId::Natural, Weight::Int(n)) => !n.is_negative(),
            (SemiringId::Integer, Weight::Int(_)) => true,
            (SemiringId::Rational, Weight::Rat(_)) => true,
            (SemiringId::RationalNonneg, Weight::Rat(r)) => !r.is_negative(),
            (SemiringId::MaxPlusNat | SemiringId::MinPlusNat, Weight::Finite(n)) => !n.is_negative(),
            (SemiringId::MaxPlusInt | SemiringId::MinPlusInt, Weight::Finite(_)) => true,
            (id, Weight::Infinity) => id.is_tropical(),
            _ => false,
        }
    }

    /// Parses the textual weight syntax shared by all file formats.
    pub fn parse(&self, text: &str) -> Result<Weight, SemiringError> {
        let err = |reason| SemiringError::Parse {
            semiring: self.id,
            text: text.to_string(),
            reason,
        };
        let t = text.trim();
        let w = match self.id {
            SemiringId::Boolean => match t {
                "0" => Weight::Bool(false),
                "1" => Weight::Bool(true),
                _ => return Err(err("expected 0 or 1")),
            },
            SemiringId::Natural | SemiringId::Integer => {
                Weight::Int(parse_int(t).ok_or_else(|| err("expected an integer"))?)
            }
            SemiringId::Rational | SemiringId::RationalNonneg => {
                let r = match t.split_once('/') {
                    Some((num, den)) => {
                        let num = parse_int(num).ok_or_else(|| err("bad numerator"))?;
                        let den = parse_digits(den).ok_or_else(|| err("bad denominator"))?;
                        if den.is_zero() {
                            return Err(err("zero denominator"));
                        }
                        BigRational::new(num, den)
                    }
                    None => BigRational::from_integer(parse_int(t).ok_or_else(|| err("expected p or p/q"))?),
                };
                Weight::Rat(r)
            }
            _ => {
                let inf = if self.is_max_plus() { "-inf" } else { "+inf" };
                if t == inf {
                    Weight::Infinity
                } else if t == "-inf" || t == "+inf" {
                    return Err(err("infinity of the wrong sign for this semiring"));
                } else {
                    Weight::Finite(parse_int(t).ok_or_else(|| err("expected an integer or infinity"))?)
                }
            }
        };
        if !self.check(&w) {
            return Err(err("value outside the carrier"));
        }
        Ok(w)
    }

    pub fn render(&self, w: &Weight) -> String {
        match w {
            Weight::Bool(b) => if *b { "1" } else { "0" }.to_string(),
            Weight::Int(n) | Weight::Finite(n) => n.to_string(),
            Weight::Rat(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Weight::Infinity => if self.is_max_plus() { "-inf" } else { "+inf" }.to_string(),
        }
    }

    /// Draws a random element of bounded magnitude. Identities and the
    /// tropical infinity are drawn with elevated probability so that the
    /// law checks exercise them.
    pub fn random_weight<R: Rng + ?Sized>(&self, rng: &mut R) -> Weight {
        let roll: u8 = rng.gen_range(0..10);
        if roll == 0 {
            return self.zero();
        }
        if roll == 1 {
            return self.one();
        }
        let nonneg = matches!(
            self.id,
            SemiringId::Natural | SemiringId::RationalNonneg | SemiringId::MaxPlusNat | SemiringId::MinPlusNat
        );
        let mut int = |lo: i64, hi: i64| -> BigInt {
            let lo = if nonneg { 0 } else { lo };
            BigInt::from(rng.gen_range(lo..=hi))
        };
        match self.id {
            SemiringId::Boolean => Weight::Bool(rng.gen()),
            SemiringId::Natural | SemiringId::Integer => Weight::Int(int(-20, 20)),
            SemiringId::Rational | SemiringId::RationalNonneg => {
                let num = int(-30, 30);
                let den = BigInt::from(rng.gen_range(1..=12));
                Weight::Rat(BigRational::new(num, den))
            }
            _ => Weight::Finite(int(-50, 50)),
        }
    }
}

impl SemiringOps for Semiring {
    type Elem = Weight;

    fn zero(&self) -> Weight {
        Semiring::zero(self)
    }
    fn one(&self) -> Weight {
        Semiring::one(self)
    }
    fn add(&self, a: &Weight, b: &Weight) -> Weight {
        Semiring::add(self, a, b)
    }
    fn mul(&self, a: &Weight, b: &Weight) -> Weight {
        Semiring::mul(self, a, b)
    }
    fn equal(&self, a: &Weight, b: &Weight) -> bool {
        a == b
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Weight {
        self.random_weight(rng)
    }
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_int(s: &str) -> Option<BigInt> {
    match s.strip_prefix('-') {
        Some(rest) => parse_digits(rest).map(|n| -n),
        None => parse_digits(s),
    }
}

/// One of the axioms checked by [`check_semiring_laws`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    AddAssociative,
    MulAssociative,
    AddCommutative,
    MulCommutative,
    AddIdentity,
    MulIdentity,
    LeftDistributive,
    RightDistributive,
    Annihilation,
}

impl Law {
    pub const ALL: [Law; 9] = [
        Law::AddAssociative,
        Law::MulAssociative,
        Law::AddCommutative,
        Law::MulCommutative,
        Law::AddIdentity,
        Law::MulIdentity,
        Law::LeftDistributive,
        Law::RightDistributive,
        Law::Annihilation,
    ];
}

#[derive(Clone, Debug)]
pub struct LawViolation<E> {
    pub law: Law,
    pub witness: (E, E, E),
}

#[derive(Clone, Debug)]
pub struct LawReport<E> {
    pub samples: usize,
    pub violations: Vec<LawViolation<E>>,
}

impl<E> LawReport<E> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self, law: Law) -> Option<&LawViolation<E>> {
        self.violations.iter().find(|v| v.law == law)
    }
}

/// Checks the commutative-semiring axioms on `samples` random triples.
///
/// At most one violation per law is recorded (the first one found).
pub fn check_semiring_laws<S: SemiringOps, R: Rng + ?Sized>(s: &S, samples: usize, rng: &mut R) -> LawReport<S::Elem> {
    let mut violations: Vec<LawViolation<S::Elem>> = Vec::new();
    let zero = s.zero();
    let one = s.one();
    for _ in 0..samples.max(1) {
        let (a, b, c) = (s.sample(rng), s.sample(rng), s.sample(rng));
        for law in Law::ALL {
            if violations.iter().any(|v| v.law == law) {
                continue;
            }
            let holds = match law {
                Law::AddAssociative => s.equal(&s.add(&s.add(&a, &b), &c), &s.add(&a, &s.add(&b, &c))),
                Law::MulAssociative => s.equal(&s.mul(&s.mul(&a, &b), &c), &s.mul(&a, &s.mul(&b, &c))),
                Law::AddCommutative => s.equal(&s.add(&a, &b), &s.add(&b, &a)),
                Law::MulCommutative => s.equal(&s.mul(&a, &b), &s.mul(&b, &a)),
                Law::AddIdentity => s.equal(&s.add(&a, &zero), &a) && s.equal(&s.add(&zero, &a), &a),
                Law::MulIdentity => s.equal(&s.mul(&a, &one), &a) && s.equal(&s.mul(&one, &a), &a),
                Law::LeftDistributive => s.equal(&s.mul(&a, &s.add(&b, &c)), &s.add(&s.mul(&a, &b), &s.mul(&a, &c))),
                Law::RightDistributive => s.equal(&s.mul(&s.add(&a, &b), &c), &s.add(&s.mul(&a, &c), &s.mul(&b, &c))),
                Law::Annihilation => s.equal(&s.mul(&a, &zero), &zero) && s.equal(&s.mul(&zero, &a), &zero),
            };
            if !holds {
                violations.push(LawViolation {
                    law,
                    witness: (a.clone(), b.clone(), c.clone()),
                });
            }
        }
    }
    LawReport { samples, violations }
}
