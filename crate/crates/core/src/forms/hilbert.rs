//! Hilbert symbols over ℚ.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// A place of ℚ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(BigUint),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Place::Infinity);
        }
        match s.parse::<BigUint>() {
            Ok(p) if arith::is_probable_prime(&p) => Ok(Place::Prime(p)),
            _ => Err(Error::NotAPlace(s.to_string())),
        }
    }
}

/// Integer in the same square class as `r`.
fn integral_rep(r: &BigRational) -> BigInt {
    r.numer() * r.denom()
}

/// The Hilbert symbol `(a, b)_v`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &Place) -> Result<i8> {
    hilbert_symbol_impl(a, b, place, false)
}

/// Same as [`hilbert_symbol`]; with `flip` the 2-adic symbol of two units
/// congruent to 3 mod 4 has its sign flipped. Used only to check that the
/// property suite notices a broken symbol.
pub(crate) fn hilbert_symbol_impl(
    a: &BigRational,
    b: &BigRational,
    place: &Place,
    flip: bool,
) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let (a, b) = (integral_rep(a), integral_rep(b));
    match place {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() {
            -1
        } else {
            1
        }),
        Place::Prime(p) => {
            if !arith::is_probable_prime(p) {
                return Err(Error::NotAPlace(p.to_string()));
            }
            let (alpha, u) = arith::valuation(&a, p);
            let (beta, v) = arith::valuation(&b, p);
            if *p == BigUint::from(2u32) {
                let eight = BigInt::from(8);
                let (u8_, v8) = (
                    u.mod_floor(&eight).to_u32().expect("small"),
                    v.mod_floor(&eight).to_u32().expect("small"),
                );
                let eps = |x: u32| u32::from(x % 4 == 3);
                let omega = |x: u32| u32::from(x == 3 || x == 5);
                let mut e = eps(u8_) * eps(v8) + alpha * omega(v8) + beta * omega(u8_);
                if flip && alpha == 0 && beta == 0 && eps(u8_) == 1 && eps(v8) == 1 {
                    e += 1;
                }
                Ok(if e % 2 == 0 { 1 } else { -1 })
            } else {
                let eps_p = ((p - 1u32) >> 1u32).is_odd();
                let mut sign = if eps_p && (alpha * beta) % 2 == 1 {
                    -1
                } else {
                    1
                };
                if beta % 2 == 1 {
                    sign *= arith::legendre(&u, p);
                }
                if alpha % 2 == 1 {
                    sign *= arith::legendre(&v, p);
                }
                Ok(sign)
            }
        }
    }
}

/// Places where `(a, b)` can be nontrivial: ∞, 2 and the odd primes
/// dividing numerator or denominator of `a` or `b`.
pub fn relevant_places(a: &BigRational, b: &BigRational) -> Vec<Place> {
    let mut primes = std::collections::BTreeSet::new();
    primes.insert(BigUint::from(2u32));
    for r in [a, b] {
        for n in [r.numer(), r.denom()] {
            primes.extend(arith::prime_divisors(n));
        }
    }
    std::iter::once(Place::Infinity)
        .chain(primes.into_iter().map(Place::Prime))
        .collect()
}

/// Hasse invariant `Π_{i<j} (a_i, a_j)_v` of a diagonal form.
pub fn hasse_invariant(diag: &[BigRational], place: &Place) -> Result<i8> {
    let mut acc = 1;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            acc *= hilbert_symbol(&diag[i], &diag[j], place)?;
        }
    }
    Ok(acc)
}
