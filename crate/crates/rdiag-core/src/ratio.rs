//! Exact rational helpers: the crate-wide `Rat` alias plus the `p/q`
//! text form used by every external interface.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p/q` with the denominator always present, e.g. `-3/2`, `5/1`.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q` or a bare integer `p`.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |txt: &str, off: usize| -> Result<BigInt> {
        txt.parse::<BigInt>().map_err(|_| Error::Parse {
            offset: off,
            msg: format!("expected integer, got {txt:?}"),
        })
    };
    match s.find('/') {
        None => Ok(Rat::from_integer(parse_int(s, 0)?)),
        Some(pos) => {
            let num = parse_int(&s[..pos], 0)?;
            let den = parse_int(&s[pos + 1..], pos + 1)?;
            if den.is_zero() {
                return Err(Error::Parse {
                    offset: pos + 1,
                    msg: "zero denominator".into(),
                });
            }
            Ok(Rat::new(num, den))
        }
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn biguint_to_rat(n: &BigUint) -> Rat {
    Rat::from_integer(BigInt::from(n.clone()))
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc = acc * BigUint::from(n - k + i) / BigUint::from(i);
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `n`-th Catalan number `C(2n,n)/(n+1)`.
pub fn catalan(n: u64) -> BigUint {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

/// Ceiling of a nonnegative rational, for integer-facing reports.
pub fn rat_ceil(r: &Rat) -> BigInt {
    let (q, rem) = (r.numer() / r.denom(), r.numer() % r.denom());
    if rem.is_zero() || r.is_negative() {
        q
    } else {
        q + BigInt::one()
    }
}
