//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// `(-1)^e` as a scalar.
pub fn sign(e: usize) -> Scalar {
    if e % 2 == 0 {
        one()
    } else {
        -one()
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse(s: &str) -> Result<Scalar> {
    let bad = || Error::Format(format!("not a rational: {s:?}"));
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Always `"p/q"`, with `q = 1` for integers, so files round-trip bit-exactly.
pub fn format(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Small random rational: mostly integers in [-3, 3], occasionally a fraction.
pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    let p = rng.gen_range(-3i64..=3);
    if rng.gen_bool(0.2) {
        ratio(p, rng.gen_range(2i64..=3))
    } else {
        int(p)
    }
}

pub fn is_unit(x: &Scalar) -> bool {
    x.is_integer() && x.abs().is_one()
}
