//! Irreducibility policy for extension moduli.
//!
//! Over 𝔽_p the check is exact. Over ℚ and 𝔽_p(t) reducibility is refuted
//! when cheaply detectable (repeated factors, rational roots, p-th powers)
//! and irreducibility is otherwise proven when a certificate is at hand or
//! recorded as asserted by the caller.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Elem, Field, FieldKind};
use crate::arith;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// How irreducibility of a modulus was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    Proven,
    /// Not refuted; later inverse computations still detect a reducible modulus.
    Asserted,
}

pub(crate) fn check(m: &Poly) -> Result<Irreducibility> {
    let refute = |why: &str| Err(Error::ReducibleModulus(format!("{}: {why}", m.show("x"))));
    match m.field().kind() {
        FieldKind::Prime { .. } => {
            if is_irreducible_mod_p(m) {
                Ok(Irreducibility::Proven)
            } else {
                refute("has a factor over the prime field")
            }
        }
        FieldKind::Rationals => {
            if m.gcd(&m.derivative())?.deg() > 0 {
                return refute("repeated factor");
            }
            if let Some(r) = rational_root(m) {
                return refute(&format!("root {r}"));
            }
            if m.deg() <= 3 || irreducible_mod_some_prime(m) {
                Ok(Irreducibility::Proven)
            } else {
                Ok(Irreducibility::Asserted)
            }
        }
        FieldKind::RationalFunctions { .. } => {
            let dec = match m.separability_decompose() {
                Ok(dec) => dec,
                Err(Error::NotSeparableResidue) => return refute("repeated factor"),
                Err(e) => return Err(e),
            };
            if dec.m0.deg() == 1 {
                let c = m.field().neg(&dec.m0.coeff(0));
                if is_pth_power(m.field(), &c) {
                    refute("constant term is a p-th power")
                } else {
                    Ok(Irreducibility::Proven)
                }
            } else {
                Ok(Irreducibility::Asserted)
            }
        }
        FieldKind::Extension { .. } => Err(Error::TowerTooDeep),
    }
}

/// Exact test over 𝔽_p: no factor of degree `<= n/2`.
pub(crate) fn is_irreducible_mod_p(m: &Poly) -> bool {
    let n = m.deg();
    if n <= 1 {
        return n == 1;
    }
    let p = BigUint::from(m.field().characteristic());
    let x = Poly::x(m.field());
    let mut h = x.clone();
    for _ in 0..n / 2 {
        h = h.powmod(&p, m).expect("nonzero modulus");
        if h.sub(&x).gcd(m).expect("same field").deg() > 0 {
            return false;
        }
    }
    true
}

fn is_pth_power(k: &Field, c: &Elem) -> bool {
    let p = k.characteristic() as usize;
    match c {
        Elem::Frac(f) => [&f.num, &f.den].iter().all(|q| {
            q.coeffs()
                .iter()
                .enumerate()
                .all(|(i, a)| i % p == 0 || q.field().is_zero(a))
        }),
        _ => true,
    }
}

/// Integer-coefficient monic polynomial `D^n m(y/D)` whose roots are `D` times
/// those of `m`, with `D` the common denominator.
fn integral_monic(m: &Poly) -> (Vec<BigInt>, BigInt) {
    let coeffs: Vec<_> = m
        .coeffs()
        .iter()
        .map(|c| m.field().as_rational(c).expect("rational").clone())
        .collect();
    let d = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let n = coeffs.len() - 1;
    let out = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            (c * num_rational::BigRational::from_integer(d.pow((n - k) as u32))).to_integer()
        })
        .collect();
    (out, d)
}

fn rational_root(m: &Poly) -> Option<String> {
    let (q, d) = integral_monic(m);
    let eval = |r: &BigInt| q.iter().rev().fold(BigInt::zero(), |acc, c| acc * r + c);
    if q[0].is_zero() {
        return Some("0".into());
    }
    let mut divisors = vec![BigInt::one()];
    for (p, e) in arith::factor(q[0].magnitude()) {
        let p = BigInt::from(p);
        let mut next = Vec::new();
        for dv in &divisors {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(dv * &pk);
                pk *= &p;
            }
        }
        divisors = next;
    }
    for dv in divisors {
        for r in [dv.clone(), -dv] {
            if eval(&r).is_zero() {
                let root = num_rational::BigRational::new(r, d.clone());
                return Some(root.to_string());
            }
        }
    }
    None
}

fn irreducible_mod_some_prime(m: &Poly) -> bool {
    let coeffs: Vec<_> = m
        .coeffs()
        .iter()
        .map(|c| m.field().as_rational(c).expect("rational").clone())
        .collect();
    for p in arith::small_primes().skip(1).take_while(|&p| p < 200) {
        let bp = BigInt::from(p);
        if coeffs.iter().any(|c| c.denom().mod_floor(&bp).is_zero()) {
            continue;
        }
        let fp = Field::prime(p).expect("odd prime");
        let reduced = Poly::from_coeffs(
            &fp,
            coeffs
                .iter()
                .map(|c| fp.from_rational(c).expect("p-integral"))
                .collect(),
        );
        if is_irreducible_mod_p(&reduced) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_field;

    #[test]
    fn policy_outcomes() {
        assert_eq!(
            parse_field("Q[a]/(a^3-2)").unwrap().irreducibility(),
            Some(Irreducibility::Proven)
        );
        assert_eq!(
            parse_field("Q[a]/(a^4-2)").unwrap().irreducibility(),
            Some(Irreducibility::Proven)
        );
        assert!(matches!(
            parse_field("Q[a]/(a^2-4)"),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(
            parse_field("Q[a]/(a^3-1/8)"),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(
            parse_field("F5[a]/(a^2-4)"),
            Err(Error::ReducibleModulus(_))
        ));
        assert_eq!(
            parse_field("F5[a]/(a^2-2)").unwrap().irreducibility(),
            Some(Irreducibility::Proven)
        );
        assert_eq!(
            parse_field("F3(s)[a]/(a^9-s)").unwrap().irreducibility(),
            Some(Irreducibility::Proven)
        );
        assert!(matches!(
            parse_field("F3(s)[a]/(a^3-s^3)"),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(
            parse_field("Q[a]/(a^2+1)[b]/(b^2-2)"),
            Err(Error::TowerTooDeep) | Err(Error::Parse { .. })
        ));
    }
}
