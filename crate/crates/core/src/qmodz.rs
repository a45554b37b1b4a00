//! Exact elements of ℚ/ℤ.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A rational in `[0, 1)` in lowest terms, standing for `e^{2πi r}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QmodZ(BigRational);

impl QmodZ {
    pub fn zero() -> Self {
        QmodZ(BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        let fl = r.floor();
        QmodZ(r - fl)
    }

    /// `a/b mod 1`. Panics on `b == 0`.
    pub fn new(a: i64, b: i64) -> Self {
        assert!(b != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(a), BigInt::from(b)))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Denominator as a machine integer, when it fits.
    pub fn denom_u64(&self) -> Option<u64> {
        self.0.denom().to_u64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    pub fn add(&self, other: &QmodZ) -> QmodZ {
        Self::from_rational(&self.0 + &other.0)
    }

    pub fn neg(&self) -> QmodZ {
        Self::from_rational(-&self.0)
    }

    /// `n·r mod 1`.
    pub fn mul_int(&self, n: &BigInt) -> QmodZ {
        Self::from_rational(&self.0 * BigRational::from_integer(n.clone()))
    }

    pub fn mul_u64(&self, n: u64) -> QmodZ {
        self.mul_int(&BigInt::from(n))
    }

    /// The `n` solutions `s` of `n·s = r`, namely `(r + k)/n` for `k = 0..n`.
    pub fn preimages(&self, n: u64) -> Vec<QmodZ> {
        assert!(n >= 1);
        let nn = BigRational::from_integer(BigInt::from(n));
        (0..n)
            .map(|k| {
                let v = (&self.0 + BigRational::from_integer(BigInt::from(k))) / &nn;
                QmodZ(v)
            })
            .collect()
    }

    /// Order of `r` in ℚ/ℤ, i.e. its reduced denominator.
    pub fn order(&self) -> BigInt {
        self.0.denom().clone()
    }

    /// The primitive `n`-th root `1/n`.
    pub fn primitive(n: u64) -> QmodZ {
        QmodZ::new(1, n as i64)
    }

    pub fn divides_order(&self, n: &BigInt) -> bool {
        (n % self.0.denom()).is_zero()
    }

    pub fn is_one_denominator(&self) -> bool {
        self.0.denom().is_one()
    }

    pub fn gcd_with_denom(&self, n: &BigInt) -> BigInt {
        self.0.denom().gcd(n)
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for QmodZ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 0, msg: format!("bad rational {s:?}") };
        let s = s.trim();
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let a: BigInt = a.parse().map_err(|_| bad())?;
        let b: BigInt = b.parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        Ok(Self::from_rational(BigRational::new(a, b)))
    }
}

impl serde::Serialize for QmodZ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
