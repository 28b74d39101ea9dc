use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// A real number `sign · √radicand` with an exact rational radicand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactReal {
    sign: i8,
    radicand: BigRational,
}

impl ExactReal {
    /// `None` if the sign is not in `{−1, 0, 1}`, the radicand is negative,
    /// or exactly one of them is zero.
    pub fn new(sign: i8, radicand: BigRational) -> Option<Self> {
        let ok = match sign {
            0 => radicand.is_zero(),
            1 | -1 => radicand.is_positive(),
            _ => false,
        };
        ok.then_some(ExactReal { sign, radicand })
    }

    pub fn zero() -> Self {
        ExactReal { sign: 0, radicand: BigRational::zero() }
    }

    pub fn one() -> Self {
        ExactReal { sign: 1, radicand: BigRational::one() }
    }

    /// `q · √p` for a rational `q` and nonnegative rational `p`.
    pub fn scaled_root(q: &BigRational, p: &BigRational) -> Self {
        debug_assert!(!p.is_negative());
        if q.is_zero() || p.is_zero() {
            return ExactReal::zero();
        }
        let sign = if q.is_positive() { 1 } else { -1 };
        ExactReal { sign, radicand: q * q * p }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The square of the value, exact.
    pub fn square(&self) -> BigRational {
        self.radicand.clone()
    }

    /// The square as a float.
    pub fn square_f64(&self) -> f64 {
        self.radicand.to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let magnitude = self.radicand.to_f64().unwrap_or(f64::NAN).sqrt();
        if self.sign < 0 {
            -magnitude
        } else {
            magnitude
        }
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => f.write_str("0"),
            s => write!(f, "{}√({})", if s < 0 { "-" } else { "" }, self.radicand),
        }
    }
}

/// Integers that fit in 64 bits serialize as JSON numbers, larger ones as
/// decimal strings.
pub(crate) struct JsonInt<'a>(pub &'a BigInt);

impl Serialize for JsonInt<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match (self.0.to_i64(), self.0.to_u64()) {
            (Some(v), _) => serializer.serialize_i64(v),
            (_, Some(v)) => serializer.serialize_u64(v),
            _ => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

impl Serialize for ExactReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ExactReal", 3)?;
        s.serialize_field("sign", &self.sign)?;
        s.serialize_field("radicand_num", &JsonInt(self.radicand.numer()))?;
        s.serialize_field("radicand_den", &JsonInt(self.radicand.denom()))?;
        s.end()
    }
}

pub(crate) fn factorial(n: u64) -> BigInt {
    let product = (2..=n).fold(BigUint::one(), |acc, k| acc * k);
    BigInt::from_biguint(Sign::Plus, product)
}
