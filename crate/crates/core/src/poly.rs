//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::fields::{Elem, Field};

/// Dense polynomial; `coeffs[k]` is the coefficient of `x^k` and the last
/// entry is nonzero (the zero polynomial has no entries).
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

/// `f = u·m^d` with `m ∤ u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredAtPoint {
    pub u: Poly,
    pub d: usize,
    pub m: Poly,
}

/// `m(x) = m0(x^{p^i})` with `m0` separable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsepDecomposition {
    pub m0: Poly,
    pub i: u32,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field, self.show("x"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.show("x"))
    }
}

impl Poly {
    pub fn from_coeffs(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Coefficients given as integers, constant term first.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::from_coeffs(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, field.one(), 1)
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::from_coeffs(field, vec![c])
    }

    pub fn monomial(field: &Field, c: Elem, k: usize) -> Poly {
        let mut v = vec![field.zero(); k + 1];
        v[k] = c;
        Poly::from_coeffs(field, v)
    }

    /// `x - c`.
    pub fn linear(field: &Field, c: &Elem) -> Poly {
        Poly::from_coeffs(field, vec![field.neg(c), field.one()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as degree 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn lc(&self) -> &Elem {
        self.coeffs
            .last()
            .expect("zero polynomial has no leading coefficient")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.field.is_one(self.lc())
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    // ---- ring operations -------------------------------------------------
    // The plain operations assume a shared field; `checked_*` report mismatches.

    pub fn add(&self, other: &Poly) -> Poly {
        let k = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => k.add(a, b),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::from_coeffs(k, coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let k = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(k);
        }
        let mut out = vec![k.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(a, b));
            }
        }
        Poly::from_coeffs(k, out)
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        Poly::from_coeffs(
            &self.field,
            self.coeffs.iter().map(|a| self.field.mul(a, c)).collect(),
        )
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.add(other))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.sub(other))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.mul(other))
    }

    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = &self.field;
        let n = d.deg();
        if self.coeffs.len() <= n {
            return Ok((Poly::zero(k), self.clone()));
        }
        let lc_inv = k.inv(d.lc())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![k.zero(); rem.len() - n];
        for pos in (n..rem.len()).rev() {
            let c = k.mul(&rem[pos], &lc_inv);
            if k.is_zero(&c) {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                let at = pos - n + i;
                rem[at] = k.sub(&rem[at], &k.mul(&c, di));
            }
            quot[pos - n] = c;
        }
        rem.truncate(n);
        Ok((Poly::from_coeffs(k, quot), Poly::from_coeffs(k, rem)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Invariant(format!("{} does not divide {}", d, self)));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Result<Poly> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        Ok(self.scale(&self.field.inv(self.lc())?))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g` and `g` the monic gcd.
    pub fn ext_gcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.same_field(other)?;
        let k = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(k), Poly::zero(k));
        let (mut t0, mut t1) = (Poly::zero(k), Poly::one(k));
        while !r1.is_zero() {
            let (q, r2) = r0.divrem(&r1)?;
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r2);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let c = k.inv(r0.lc())?;
        Ok((r0.scale(&c), s0.scale(&c), t0.scale(&c)))
    }

    /// `self^e mod m`.
    pub fn powmod(&self, e: &BigUint, m: &Poly) -> Result<Poly> {
        let base = self.rem(m)?;
        let mut acc = Poly::one(&self.field).rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m)?;
            if e.bit(i) {
                acc = acc.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Poly {
        let k = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| k.mul(&k.from_i64(i as i64), c))
            .collect();
        Poly::from_coeffs(k, coeffs)
    }

    /// The `i`-th Hasse derivative `Σ_j C(j, i)·c_j·x^{j-i}`.
    pub fn hasse_derivative(&self, i: usize) -> Poly {
        let k = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(i)
            .map(|(j, c)| {
                let binom: BigInt = num_integer::binomial(BigInt::from(j), BigInt::from(i));
                k.mul(&k.from_bigint(&binom), c)
            })
            .collect();
        Poly::from_coeffs(k, coeffs)
    }

    /// Evaluation at an element of the coefficient field.
    pub fn eval(&self, x: &Elem) -> Elem {
        let k = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
    }

    /// Evaluation at an element of an extension of the coefficient field.
    pub fn eval_in(&self, l: &Field, x: &Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(l.zero(), |acc, c| l.add(&l.mul(&acc, x), &l.embed(c)))
    }

    /// Coefficient-wise embedding into `l`, which must be the coefficient
    /// field or a simple extension of it.
    pub fn base_change(&self, l: &Field) -> Result<Poly> {
        if *l == self.field {
            return Ok(self.clone());
        }
        if !l.extends(&self.field) {
            return Err(Error::NotAnExtension);
        }
        Ok(Poly::from_coeffs(
            l,
            self.coeffs.iter().map(|c| l.embed(c)).collect(),
        ))
    }

    /// Maximal `d` with `m^d | self` and the cofactor.
    pub fn multiplicity_at(&self, m: &Poly) -> Result<FactoredAtPoint> {
        self.same_field(m)?;
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !m.is_monic() {
            return Err(Error::NotMonic);
        }
        if m.deg() == 0 {
            return Err(Error::Malformed(
                "point polynomial must be nonconstant".into(),
            ));
        }
        let mut u = self.clone();
        let mut d = 0;
        loop {
            let (q, r) = u.divrem(m)?;
            if !r.is_zero() {
                break;
            }
            u = q;
            d += 1;
        }
        if d == 0 {
            return Err(Error::NotVanishing);
        }
        if u.mul(&m.pow(d as u32)) != *self {
            return Err(Error::Invariant("u·m^d != f".into()));
        }
        Ok(FactoredAtPoint { u, d, m: m.clone() })
    }

    /// Writes a monic `m` as `m0(x^{p^i})` with `i` maximal and `m0` separable.
    pub fn separability_decompose(&self) -> Result<InsepDecomposition> {
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        if self.deg() == 0 {
            return Err(Error::Malformed("polynomial must be nonconstant".into()));
        }
        let p = self.field.characteristic() as usize;
        let separable = |f: &Poly| f.gcd(&f.derivative()).map(|g| g.deg() == 0);
        if p == 0 {
            return if separable(self)? {
                Ok(InsepDecomposition {
                    m0: self.clone(),
                    i: 0,
                })
            } else {
                Err(Error::NotSeparableResidue)
            };
        }
        let support: Vec<usize> = (0..self.coeffs.len())
            .filter(|&k| !self.field.is_zero(&self.coeffs[k]))
            .collect();
        let mut i_max = 0u32;
        let mut stride = p;
        while support.iter().all(|k| k % stride == 0) {
            i_max += 1;
            stride *= p;
        }
        for i in (0..=i_max).rev() {
            let step = p.pow(i);
            let m0 = Poly::from_coeffs(
                &self.field,
                self.coeffs.iter().step_by(step).cloned().collect(),
            );
            if separable(&m0)? {
                return Ok(InsepDecomposition { m0, i });
            }
        }
        Err(Error::NotSeparableResidue)
    }

    /// Horner polynomials `[Hor_{n-1}, …, Hor_0]` of a monic polynomial of
    /// degree `n`, with `Hor_0 = 1` and `Hor_i = x·Hor_{i-1} + a_{n-i}`.
    pub fn horner_basis(&self) -> Result<Vec<Poly>> {
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let n = self.deg();
        let mut hor = vec![Poly::one(&self.field)];
        for i in 1..n {
            let next = hor[i - 1]
                .shift(1)
                .add(&Poly::constant(&self.field, self.coeff(n - i)));
            hor.push(next);
        }
        hor.reverse();
        Ok(hor)
    }

    /// Squarefree decomposition `[(g, e)]` of the monic part over a prime
    /// field or ℚ: `self = lc·Π g^e` with each `g` monic squarefree and the
    /// `g` pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, u32)> {
        let f = self.monic().expect("nonzero leading coefficient");
        if f.deg() == 0 {
            return Vec::new();
        }
        let p = self.field.characteristic();
        let mut out = Vec::new();
        let mut c = f.gcd(&f.derivative()).expect("same field");
        let mut w = f.exact_div(&c).expect("gcd divides");
        let mut i = 1u32;
        while w.deg() > 0 {
            let y = w.gcd(&c).expect("same field");
            let z = w.exact_div(&y).expect("gcd divides");
            if z.deg() > 0 {
                out.push((z, i));
            }
            i += 1;
            c = c.exact_div(&y).expect("gcd divides");
            w = y;
        }
        if c.deg() > 0 {
            assert!(p > 0, "leftover factor in characteristic zero");
            let root = Poly::from_coeffs(
                &self.field,
                c.coeffs.iter().step_by(p as usize).cloned().collect(),
            );
            for (g, e) in root.squarefree_decomposition() {
                out.push((g, e * p as u32));
            }
        }
        out
    }

    /// Display adapter printing the polynomial in the variable `var`.
    pub fn show<'a>(&'a self, var: &'a str) -> PolyShown<'a> {
        PolyShown { poly: self, var }
    }
}

/// Coefficient strings that can precede `*x^k` without parentheses.
fn is_atomic(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    !body.is_empty() && !body.contains([' ', '+', '-', '(', ')'])
}

pub struct PolyShown<'a> {
    poly: &'a Poly,
    var: &'a str,
}

impl fmt::Display for PolyShown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = &self.poly.field;
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let minus_one = k.neg(&k.one());
        let mut first = true;
        for (deg, c) in self.poly.coeffs.iter().enumerate().rev() {
            if k.is_zero(c) {
                continue;
            }
            let mono = match deg {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{deg}", self.var),
            };
            let term = if deg == 0 {
                k.format(c)
            } else if k.is_one(c) {
                mono
            } else if k.characteristic() == 0 && *c == minus_one {
                format!("-{mono}")
            } else {
                let cs = k.format(c);
                if is_atomic(&cs) {
                    format!("{cs}*{mono}")
                } else {
                    format!("({cs})*{mono}")
                }
            };
            if first {
                write!(f, "{term}")?;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
            first = false;
        }
        Ok(())
    }
}
