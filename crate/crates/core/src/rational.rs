//! Exact rational vectors and linear functionals.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("denominator must be positive in {0:?}")]
    NonPositiveDenominator(String),
}

/// Parses `"p/q"` with `q > 0`, or an integer string.
pub fn parse_rational(s: &str) -> Result<BigRational, RationalParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let int = |t: &str| -> Result<BigInt, RationalParseError> {
        let t = t.trim();
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RationalParseError::Malformed(s.to_owned()));
        }
        t.parse().map_err(|_| RationalParseError::Malformed(s.to_owned()))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(int(s)?)),
        Some((p, q)) => {
            let p = int(p)?;
            let q = int(q)?;
            if !q.is_positive() {
                return Err(RationalParseError::NonPositiveDenominator(s.to_owned()));
            }
            Ok(BigRational::new(p, q))
        }
    }
}

/// Lowest-terms text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Coordinate vector over the rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalVector(Vec<BigRational>);

impl RationalVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![BigRational::zero(); dim])
    }

    /// `i`-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigRational::one();
        v
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self(
            coords
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_integers(coords: &[BigInt]) -> Self {
        Self(coords.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn parse<S: AsRef<str>>(coords: &[S]) -> Result<Self, RationalParseError> {
        coords
            .iter()
            .map(|c| parse_rational(c.as_ref()))
            .collect::<Result<_, _>>()
            .map(Self)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Self) -> BigRational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self(self.0.iter().map(|c| c * k).collect())
    }

    /// Positive integer multiple with coprime entries; zero stays zero.
    pub fn primitive_integers(&self) -> Vec<BigInt> {
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() || g.is_one() {
            ints
        } else {
            ints.into_iter().map(|c| c / &g).collect()
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: Self) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: Self) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Neg for RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        -&self
    }
}

/// Linear map `x ↦ Σ a_i x_i` given by its coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalFunctional(Vec<BigRational>);

impl RationalFunctional {
    pub fn new(coefficients: Vec<BigRational>) -> Self {
        Self(coefficients)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![BigRational::zero(); dim])
    }

    pub fn from_i64s(coefficients: &[i64]) -> Self {
        Self(RationalVector::from_i64s(coefficients).0)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, v: &RationalVector) -> BigRational {
        debug_assert_eq!(self.dim(), v.dim());
        self.0
            .iter()
            .zip(v.coords())
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn as_vector(&self) -> RationalVector {
        RationalVector(self.0.clone())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl From<RationalVector> for RationalFunctional {
    fn from(v: RationalVector) -> Self {
        Self(v.0)
    }
}

impl fmt::Debug for RationalFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f[{}]", self.to_strings().join(", "))
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl Serialize for RationalFunctional {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}
