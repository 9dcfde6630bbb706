//! Exact arithmetic in ℚ, 𝔽_p, 𝔽_p(t) and simple extensions of these.
//!
//! A [`Field`] is a cheap, shareable descriptor; elements ([`Elem`]) carry no
//! reference to their field, so every operation goes through the descriptor.
//! Representations are canonical, which makes structural equality of
//! elements coincide with equality in the field.

mod irreducible;
mod square;

pub use irreducible::Irreducibility;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// The shape of a field: one of the three base fields, or a simple
/// extension `base[symbol]/(modulus)` of one of them.
#[derive(Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Prime {
        p: u64,
    },
    RationalFunctions {
        p: u64,
        var: String,
        coeffs: Field,
    },
    Extension {
        base: Field,
        modulus: Poly,
        symbol: String,
        irreducibility: Irreducibility,
    },
}

/// Shared field descriptor.
#[derive(Clone)]
pub struct Field(Arc<FieldKind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

/// A rational function `num/den` over 𝔽_p with `den` monic and
/// `gcd(num, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

/// A field element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elem {
    Rat(BigRational),
    /// Residue in `0..p`.
    Mod(u64),
    Frac(Box<RatFunc>),
    /// Coefficients over the base field in the power basis `1, t, …, t^{n-1}`.
    Ext(Vec<Elem>),
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldKind::Rationals))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !arith::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field(Arc::new(FieldKind::Prime { p })))
    }

    pub fn rational_functions(p: u64, var: &str) -> Result<Field> {
        let coeffs = Field::prime(p)?;
        Ok(Field(Arc::new(FieldKind::RationalFunctions {
            p,
            var: var.to_string(),
            coeffs,
        })))
    }

    /// Builds `base[symbol]/(modulus)` after running the irreducibility policy.
    pub fn extension(base: &Field, modulus: Poly, symbol: &str) -> Result<Field> {
        if base.is_extension() {
            return Err(Error::TowerTooDeep);
        }
        if modulus.field() != base {
            return Err(Error::FieldMismatch);
        }
        if modulus.degree().unwrap_or(0) < 2 {
            return Err(Error::Malformed(
                "extension modulus must have degree at least 2".into(),
            ));
        }
        if !modulus.is_monic() {
            return Err(Error::NotMonic);
        }
        let irreducibility = irreducible::check(&modulus)?;
        Ok(Field(Arc::new(FieldKind::Extension {
            base: base.clone(),
            modulus,
            symbol: symbol.to_string(),
            irreducibility,
        })))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0
    }

    pub fn ptr_eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// `p`, or 0 for characteristic zero.
    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            FieldKind::Rationals => 0,
            FieldKind::Prime { p } | FieldKind::RationalFunctions { p, .. } => *p,
            FieldKind::Extension { base, .. } => base.characteristic(),
        }
    }

    /// `[L:k]` for an extension, 1 for a base field.
    pub fn degree_over_base(&self) -> usize {
        match self.kind() {
            FieldKind::Extension { modulus, .. } => modulus.deg(),
            _ => 1,
        }
    }

    pub fn is_extension(&self) -> bool {
        matches!(self.kind(), FieldKind::Extension { .. })
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self.kind(), FieldKind::Rationals)
    }

    /// The base field of an extension; a base field is its own base.
    pub fn base(&self) -> &Field {
        match self.kind() {
            FieldKind::Extension { base, .. } => base,
            _ => self,
        }
    }

    /// The field ℚ or 𝔽_p underneath everything.
    pub fn ground(&self) -> Field {
        match self.kind() {
            FieldKind::RationalFunctions { coeffs, .. } => coeffs.clone(),
            FieldKind::Extension { base, .. } => base.ground(),
            _ => self.clone(),
        }
    }

    pub fn modulus(&self) -> Option<&Poly> {
        match self.kind() {
            FieldKind::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    pub fn irreducibility(&self) -> Option<Irreducibility> {
        match self.kind() {
            FieldKind::Extension { irreducibility, .. } => Some(*irreducibility),
            _ => None,
        }
    }

    /// Extension symbol or the variable of 𝔽_p(t).
    pub fn symbol(&self) -> Option<&str> {
        match self.kind() {
            FieldKind::Extension { symbol, .. } => Some(symbol),
            FieldKind::RationalFunctions { var, .. } => Some(var),
            _ => None,
        }
    }

    /// Named constants available when parsing elements of this field.
    pub fn symbols(&self) -> Vec<(String, Elem)> {
        let mut out = Vec::new();
        match self.kind() {
            FieldKind::RationalFunctions { var, .. } => out.push((var.clone(), self.generator())),
            FieldKind::Extension { base, symbol, .. } => {
                for (name, e) in base.symbols() {
                    out.push((name, self.embed(&e)));
                }
                out.push((symbol.clone(), self.generator()));
            }
            _ => {}
        }
        out
    }

    /// True when the field has finitely many elements.
    pub fn is_finite(&self) -> bool {
        match self.kind() {
            FieldKind::Prime { .. } => true,
            FieldKind::Extension { base, .. } => base.is_finite(),
            _ => false,
        }
    }

    /// Number of elements of a finite field.
    pub fn order(&self) -> Option<BigUint> {
        if !self.is_finite() {
            return None;
        }
        Some(BigUint::from(self.characteristic()).pow(self.degree_over_base() as u32))
    }

    /// Whether `self` is `k` or a simple extension of `k`.
    pub fn extends(&self, k: &Field) -> bool {
        self == k || (self.is_extension() && self.base() == k)
    }

    // ---- constants -------------------------------------------------------

    pub fn zero(&self) -> Elem {
        match self.kind() {
            FieldKind::Rationals => Elem::Rat(BigRational::zero()),
            FieldKind::Prime { .. } => Elem::Mod(0),
            FieldKind::RationalFunctions { coeffs, .. } => Elem::Frac(Box::new(RatFunc {
                num: Poly::zero(coeffs),
                den: Poly::one(coeffs),
            })),
            FieldKind::Extension { base, modulus, .. } => {
                Elem::Ext(vec![base.zero(); modulus.deg()])
            }
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    /// Image of an integer under the characteristic map.
    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match self.kind() {
            FieldKind::Rationals => Elem::Rat(BigRational::from_integer(n.clone())),
            FieldKind::Prime { p } => Elem::Mod(
                n.mod_floor(&BigInt::from(*p))
                    .to_u64()
                    .expect("residue fits"),
            ),
            FieldKind::RationalFunctions { coeffs, .. } => Elem::Frac(Box::new(RatFunc {
                num: Poly::constant(coeffs, coeffs.from_bigint(n)),
                den: Poly::one(coeffs),
            })),
            FieldKind::Extension { base, .. } => self.embed(&base.from_bigint(n)),
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        let num = self.from_bigint(r.numer());
        let den = self.from_bigint(r.denom());
        self.div(&num, &den)
    }

    /// The rational value of an element of ℚ.
    pub fn as_rational<'a>(&self, a: &'a Elem) -> Option<&'a BigRational> {
        match a {
            Elem::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// The primitive element of an extension, or `t` in 𝔽_p(t).
    pub fn generator(&self) -> Elem {
        match self.kind() {
            FieldKind::RationalFunctions { coeffs, .. } => Elem::Frac(Box::new(RatFunc {
                num: Poly::x(coeffs),
                den: Poly::one(coeffs),
            })),
            FieldKind::Extension { base, modulus, .. } => {
                let mut v = vec![base.zero(); modulus.deg()];
                v[1] = base.one();
                Elem::Ext(v)
            }
            _ => panic!("{self} has no generator"),
        }
    }

    /// Embeds an element of the base field; identity on base fields.
    pub fn embed(&self, a: &Elem) -> Elem {
        match self.kind() {
            FieldKind::Extension { base, modulus, .. } => {
                let mut v = vec![base.zero(); modulus.deg()];
                v[0] = a.clone();
                Elem::Ext(v)
            }
            _ => a.clone(),
        }
    }

    /// Coordinates in the power basis; a base-field element is its own
    /// single coordinate.
    pub fn coords(&self, a: &Elem) -> Vec<Elem> {
        match a {
            Elem::Ext(v) => v.clone(),
            _ => vec![a.clone()],
        }
    }

    /// Inverse of [`Field::coords`]; short vectors are zero-padded.
    pub fn from_coords(&self, mut v: Vec<Elem>) -> Elem {
        match self.kind() {
            FieldKind::Extension { base, modulus, .. } => {
                assert!(v.len() <= modulus.deg(), "too many coordinates");
                v.resize(modulus.deg(), base.zero());
                Elem::Ext(v)
            }
            _ => {
                assert!(v.len() == 1, "base field element has one coordinate");
                v.pop().expect("one coordinate")
            }
        }
    }

    /// The element `a(t)` for a polynomial `a` over the base field.
    pub fn from_poly(&self, a: &Poly) -> Elem {
        match self.kind() {
            FieldKind::Extension { modulus, .. } => {
                let r = a.divrem(modulus).expect("monic modulus").1;
                self.from_coords(r.coeffs().to_vec())
            }
            _ => {
                assert!(a.deg() == 0, "base field elements are constants");
                a.coeff(0)
            }
        }
    }

    /// The polynomial `a(x)` of degree `< n` representing `a`.
    pub fn to_poly(&self, a: &Elem) -> Poly {
        Poly::from_coeffs(self.base(), self.coords(a))
    }

    // ---- arithmetic ------------------------------------------------------

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_zero(),
            Elem::Mod(v) => *v == 0,
            Elem::Frac(f) => f.num.is_zero(),
            Elem::Ext(v) => v.iter().all(|c| self.base().is_zero(c)),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.kind(), a, b) {
            (_, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (FieldKind::Prime { p }, Elem::Mod(x), Elem::Mod(y)) => {
                Elem::Mod(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            (FieldKind::RationalFunctions { .. }, Elem::Frac(x), Elem::Frac(y)) => {
                if x.den == y.den {
                    return self.frac(x.num.add(&y.num), x.den.clone());
                }
                let num = x.num.mul(&y.den).add(&y.num.mul(&x.den));
                self.frac(num, x.den.mul(&y.den))
            }
            (FieldKind::Extension { base, .. }, Elem::Ext(x), Elem::Ext(y)) => {
                Elem::Ext(x.iter().zip(y).map(|(a, b)| base.add(a, b)).collect())
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (self.kind(), a) {
            (_, Elem::Rat(x)) => Elem::Rat(-x),
            (FieldKind::Prime { p }, Elem::Mod(x)) => Elem::Mod(if *x == 0 { 0 } else { p - x }),
            (_, Elem::Frac(x)) => Elem::Frac(Box::new(RatFunc {
                num: x.num.neg(),
                den: x.den.clone(),
            })),
            (FieldKind::Extension { base, .. }, Elem::Ext(x)) => {
                Elem::Ext(x.iter().map(|c| base.neg(c)).collect())
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.kind(), a, b) {
            (_, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (FieldKind::Prime { p }, Elem::Mod(x), Elem::Mod(y)) => Elem::Mod(mod_mul(*x, *y, *p)),
            (FieldKind::RationalFunctions { .. }, Elem::Frac(x), Elem::Frac(y)) => {
                self.frac(x.num.mul(&y.num), x.den.mul(&y.den))
            }
            (FieldKind::Extension { base, modulus, .. }, Elem::Ext(x), Elem::Ext(y)) => {
                let n = x.len();
                let mut prod = vec![base.zero(); 2 * n - 1];
                for (i, a) in x.iter().enumerate() {
                    if base.is_zero(a) {
                        continue;
                    }
                    for (j, b) in y.iter().enumerate() {
                        prod[i + j] = base.add(&prod[i + j], &base.mul(a, b));
                    }
                }
                let m = modulus.coeffs();
                for k in (n..2 * n - 1).rev() {
                    let c = std::mem::replace(&mut prod[k], base.zero());
                    if base.is_zero(&c) {
                        continue;
                    }
                    for (i, mi) in m.iter().enumerate().take(n) {
                        prod[k - n + i] = base.sub(&prod[k - n + i], &base.mul(&c, mi));
                    }
                }
                prod.truncate(n);
                Elem::Ext(prod)
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self.kind(), a) {
            (_, Elem::Rat(x)) => Elem::Rat(x.recip()),
            (FieldKind::Prime { p }, Elem::Mod(x)) => Elem::Mod(arith::pow_mod_u64(*x, p - 2, *p)),
            (_, Elem::Frac(x)) => self.frac(x.den.clone(), x.num.clone()),
            (FieldKind::Extension { modulus, .. }, Elem::Ext(_)) => {
                let (g, s, _) = self.to_poly(a).ext_gcd(modulus)?;
                if g.deg() != 0 {
                    return Err(Error::IrreducibilityViolated);
                }
                self.from_coords(s.coeffs().to_vec())
            }
            _ => panic!("element does not belong to {self}"),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, e: u64) -> Elem {
        self.pow_big(a, &BigUint::from(e))
    }

    pub fn pow_big(&self, a: &Elem, e: &BigUint) -> Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Sum of a list of elements.
    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Elem>) -> Elem {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Product of a list of elements.
    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Elem>) -> Elem {
        items
            .into_iter()
            .fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    fn frac(&self, num: Poly, den: Poly) -> Elem {
        let FieldKind::RationalFunctions { coeffs, .. } = self.kind() else {
            unreachable!("fractions live in 𝔽_p(t)");
        };
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return self.zero();
        }
        let g = num.gcd(&den).expect("same coefficient field");
        let (mut num, mut den) = if g.deg() > 0 {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        } else {
            (num, den)
        };
        if !den.is_monic() {
            let c = coeffs.inv(den.lc()).expect("nonzero leading coefficient");
            num = num.scale(&c);
            den = den.scale(&c);
        }
        Elem::Frac(Box::new(RatFunc { num, den }))
    }

    /// Builds `num/den` in 𝔽_p(t) from polynomials over 𝔽_p.
    pub fn fraction(&self, num: Poly, den: Poly) -> Result<Elem> {
        match self.kind() {
            FieldKind::RationalFunctions { coeffs, .. } => {
                if num.field() != coeffs || den.field() != coeffs {
                    return Err(Error::FieldMismatch);
                }
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(self.frac(num, den))
            }
            _ => Err(Error::UnsupportedField(format!(
                "{self} is not a rational function field"
            ))),
        }
    }

    /// Checks that an element is in canonical form for this field.
    pub fn is_canonical(&self, a: &Elem) -> bool {
        match (self.kind(), a) {
            (FieldKind::Rationals, Elem::Rat(r)) => {
                r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
            }
            (FieldKind::Prime { p }, Elem::Mod(v)) => v < p,
            (FieldKind::RationalFunctions { coeffs, .. }, Elem::Frac(f)) => {
                f.den.is_monic()
                    && f.num.field() == coeffs
                    && if f.num.is_zero() {
                        f.den.deg() == 0
                    } else {
                        f.num.gcd(&f.den).map(|g| g.deg() == 0).unwrap_or(false)
                    }
            }
            (FieldKind::Extension { base, modulus, .. }, Elem::Ext(v)) => {
                v.len() == modulus.deg() && v.iter().all(|c| base.is_canonical(c))
            }
            _ => false,
        }
    }

    // ---- display ---------------------------------------------------------

    /// Display adapter for an element.
    pub fn show<'a>(&'a self, a: &'a Elem) -> Shown<'a> {
        Shown {
            field: self,
            elem: a,
        }
    }

    pub fn format(&self, a: &Elem) -> String {
        self.show(a).to_string()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime { p } => write!(f, "F{p}"),
            FieldKind::RationalFunctions { p, var, .. } => write!(f, "F{p}({var})"),
            FieldKind::Extension {
                base,
                modulus,
                symbol,
                ..
            } => write!(f, "{base}[{symbol}]/({})", modulus.show(symbol)),
        }
    }
}

/// An element paired with its field for printing.
pub struct Shown<'a> {
    field: &'a Field,
    elem: &'a Elem,
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.field.kind(), self.elem) {
            (_, Elem::Rat(r)) => write!(f, "{r}"),
            (_, Elem::Mod(v)) => write!(f, "{v}"),
            (FieldKind::RationalFunctions { var, .. }, Elem::Frac(x)) => {
                if x.den.deg() == 0 {
                    write!(f, "{}", x.num.show(var))
                } else {
                    write!(f, "({})/({})", x.num.show(var), x.den.show(var))
                }
            }
            (FieldKind::Extension { base, symbol, .. }, Elem::Ext(v)) => {
                write!(f, "{}", Poly::from_coeffs(base, v.clone()).show(symbol))
            }
            _ => write!(f, "<foreign element>"),
        }
    }
}
