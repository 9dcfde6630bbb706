//! Square testing and square-class representatives.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Elem, Field, FieldKind};
use crate::arith;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Poly;

/// Largest modulus bit length tried when lifting a square root over ℚ.
const LIFT_BITS: u64 = 4096;

impl Field {
    /// Whether a nonzero element is a square.
    pub fn is_square(&self, a: &Elem) -> Result<bool> {
        if self.is_zero(a) {
            return Err(Error::ZeroArgument);
        }
        match (self.kind(), a) {
            (_, Elem::Rat(r)) => Ok(rational_sqrt(r).is_some()),
            (FieldKind::Prime { p }, Elem::Mod(v)) => {
                Ok(arith::pow_mod_u64(*v, (p - 1) / 2, *p) == 1)
            }
            (FieldKind::RationalFunctions { coeffs, .. }, Elem::Frac(f)) => {
                if !coeffs.is_square(f.num.lc())? {
                    return Ok(false);
                }
                Ok(odd_part(&f.num).deg() == 0 && odd_part(&f.den).deg() == 0)
            }
            (FieldKind::Extension { base, .. }, _) => match base.kind() {
                FieldKind::Prime { .. } => {
                    let q = self.order().expect("finite");
                    Ok(self.is_one(&self.pow_big(a, &((q - 1u32) >> 1))))
                }
                FieldKind::Rationals if self.degree_over_base() == 2 => self.is_square_quadratic(a),
                FieldKind::Rationals => self.is_square_number_field(a),
                _ => Err(Error::UnsupportedField(format!("square testing in {self}"))),
            },
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Canonical representative of the square class of `a` where one exists;
    /// extension elements represent themselves.
    pub fn square_class_rep(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::ZeroArgument);
        }
        Ok(match (self.kind(), a) {
            (_, Elem::Rat(r)) => Elem::Rat(BigRational::from_integer(arith::squarefree_part(
                &(r.numer() * r.denom()),
            ))),
            (FieldKind::Prime { p }, Elem::Mod(_)) => {
                if self.is_square(a)? {
                    self.one()
                } else {
                    Elem::Mod(least_nonresidue(*p))
                }
            }
            (FieldKind::RationalFunctions { coeffs, .. }, Elem::Frac(f)) => {
                let unit = coeffs.square_class_rep(f.num.lc())?;
                let poly = odd_part(&f.num).mul(&odd_part(&f.den)).scale(&unit);
                self.fraction(poly, Poly::one(coeffs))?
            }
            _ => a.clone(),
        })
    }

    /// Whether `a / b` is a square, for nonzero `a`, `b`.
    pub fn same_square_class(&self, a: &Elem, b: &Elem) -> Result<bool> {
        self.is_square(&self.div(a, b).map_err(|_| Error::ZeroArgument)?)
    }

    /// Matrix of multiplication by `a` on the power basis, columns holding
    /// the coordinates of `a·t^j`.
    pub fn mult_matrix(&self, a: &Elem) -> Matrix {
        let base = self.base();
        let n = self.degree_over_base();
        let mut out = Matrix::zero(base, n, n);
        let mut col = a.clone();
        let t = if self.is_extension() {
            self.generator()
        } else {
            self.one()
        };
        for j in 0..n {
            for (i, c) in self.coords(&col).into_iter().enumerate() {
                out.set(i, j, c);
            }
            col = self.mul(&col, &t);
        }
        out
    }

    /// Field norm down to the base field.
    pub fn norm(&self, a: &Elem) -> Elem {
        self.mult_matrix(a).det(self.base())
    }

    /// Field trace down to the base field.
    pub fn trace(&self, a: &Elem) -> Elem {
        let m = self.mult_matrix(a);
        let base = self.base();
        base.sum((0..m.rows()).map(|i| m.get(i, i)))
    }

    fn is_square_quadratic(&self, a: &Elem) -> Result<bool> {
        let k = self.base();
        let m = self.modulus().expect("extension");
        let half = k.from_rational(&BigRational::new(1.into(), 2.into()))?;
        let c1 = m.coeff(1);
        let c0 = m.coeff(0);
        let shift = k.mul(&c1, &half);
        // With t' = t + c1/2 we have t'^2 = disc and a = alpha + beta t'.
        let disc = k.sub(&k.mul(&shift, &shift), &c0);
        let v = self.coords(a);
        let beta = v[1].clone();
        let alpha = k.sub(&v[0], &k.mul(&beta, &shift));
        if k.is_zero(&beta) {
            return Ok(k.is_square(&alpha)? || k.is_square(&k.div(&alpha, &disc)?)?);
        }
        let norm = k.sub(&k.mul(&alpha, &alpha), &k.mul(&disc, &k.mul(&beta, &beta)));
        let Some(s) = k.as_rational(&norm).and_then(rational_sqrt) else {
            return Ok(false);
        };
        let s = Elem::Rat(s);
        for cand in [k.add(&alpha, &s), k.sub(&alpha, &s)] {
            let x2 = k.mul(&cand, &half);
            if !k.is_zero(&x2) && k.is_square(&x2)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn is_square_number_field(&self, a: &Elem) -> Result<bool> {
        let k = self.base();
        let norm = self.norm(a);
        if !k.is_square(&norm)? {
            return Ok(false);
        }
        let m = rational_coeffs(self.modulus().expect("extension"));
        let av = rational_coeffs(&self.to_poly(a));
        let n = self.degree_over_base();
        let mut inert = None;
        for p in arith::small_primes().skip(1).take_while(|&p| p < 2000) {
            let Some((mbar, abar)) = reduce_pair(&m, &av, p) else {
                continue;
            };
            if mbar.gcd(&mbar.derivative())?.deg() > 0 {
                continue;
            }
            if p < 400 {
                let fp = mbar.field().clone();
                for r in 0..p {
                    let r = Elem::Mod(r);
                    if fp.is_zero(&mbar.eval(&r)) {
                        let v = abar.eval(&r);
                        if !fp.is_zero(&v) && !fp.is_square(&v)? {
                            return Ok(false);
                        }
                    }
                }
            }
            if inert.is_none() && !abar.is_zero() && super::irreducible::is_irreducible_mod_p(&mbar)
            {
                inert = Some((p, mbar, abar));
            }
        }
        let Some((p, mbar, abar)) = inert else {
            return Err(Error::UnsupportedField(format!(
                "no inert prime found for square test in {self}"
            )));
        };
        let fq = Field::extension(mbar.field(), mbar.clone(), "z")?;
        let abar_q = fq.from_poly(&abar);
        let Some(root) = sqrt_finite(&fq, &abar_q) else {
            return Ok(false);
        };
        let root: Vec<BigInt> = fq
            .coords(&root)
            .iter()
            .map(|c| match c {
                Elem::Mod(v) => BigInt::from(*v),
                _ => unreachable!("prime field residue"),
            })
            .collect();
        if let Some(z) = lift_and_reconstruct(&m, &av, root, p, n) {
            let z = self.from_coords(z.into_iter().map(Elem::Rat).collect());
            if self.mul(&z, &z) == *a {
                return Ok(true);
            }
        }
        Err(Error::UnsupportedField(format!(
            "square test inconclusive in {self}"
        )))
    }
}

/// Product of the monic squarefree factors occurring to an odd power.
fn odd_part(f: &Poly) -> Poly {
    let mut out = Poly::one(f.field());
    for (g, e) in f.squarefree_decomposition() {
        if e % 2 == 1 {
            out = out.mul(&g);
        }
    }
    out
}

fn least_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&a| arith::pow_mod_u64(a, (p - 1) / 2, p) == p - 1)
        .expect("odd prime has a nonresidue")
}

/// Exact square root of a rational, when it has one.
pub(crate) fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

/// Square root in a finite field by Tonelli–Shanks.
pub(crate) fn sqrt_finite(f: &Field, a: &Elem) -> Option<Elem> {
    if f.is_zero(a) {
        return Some(f.zero());
    }
    let q = f.order().expect("finite field");
    let qm1 = &q - 1u32;
    if !f.is_one(&f.pow_big(a, &(&qm1 >> 1))) {
        return None;
    }
    let s = qm1.trailing_zeros().expect("q - 1 is even");
    let odd = &qm1 >> s;
    let p = f.characteristic();
    let n = f.degree_over_base();
    let minus_one = f.neg(&f.one());
    let z = (1u64..)
        .map(|c| {
            let mut digits = Vec::with_capacity(n);
            let mut c = c;
            for _ in 0..n {
                digits.push(Elem::Mod(c % p));
                c /= p;
            }
            if f.is_extension() {
                f.from_coords(digits)
            } else {
                digits.swap_remove(0)
            }
        })
        .find(|z| f.pow_big(z, &(&qm1 >> 1)) == minus_one)
        .expect("finite field of odd order has a nonresidue");
    let mut m = s;
    let mut c = f.pow_big(&z, &odd);
    let mut t = f.pow_big(a, &odd);
    let mut r = f.pow_big(a, &((&odd + 1u32) >> 1));
    while !f.is_one(&t) {
        let mut i = 0;
        let mut t2 = t.clone();
        while !f.is_one(&t2) {
            t2 = f.mul(&t2, &t2);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = f.mul(&b, &b);
        }
        m = i;
        c = f.mul(&b, &b);
        t = f.mul(&t, &c);
        r = f.mul(&r, &b);
    }
    Some(r)
}

fn rational_coeffs(f: &Poly) -> Vec<BigRational> {
    f.coeffs()
        .iter()
        .map(|c| {
            f.field()
                .as_rational(c)
                .expect("rational coefficients")
                .clone()
        })
        .collect()
}

fn reduce_pair(m: &[BigRational], a: &[BigRational], p: u64) -> Option<(Poly, Poly)> {
    let bp = BigInt::from(p);
    if m.iter()
        .chain(a)
        .any(|c| c.denom().mod_floor(&bp).is_zero())
    {
        return None;
    }
    let fp = Field::prime(p).expect("odd prime");
    let red = |v: &[BigRational]| {
        Poly::from_coeffs(
            &fp,
            v.iter()
                .map(|c| fp.from_rational(c).expect("p-integral"))
                .collect(),
        )
    };
    Some((red(m), red(a)))
}

/// Arithmetic in `(ℤ/M)[x]/(m)` on coefficient vectors.
struct LiftRing {
    m: Vec<BigInt>,
    modulus: BigInt,
}

impl LiftRing {
    fn new(m: &[BigRational], modulus: BigInt) -> Self {
        let m = m.iter().map(|c| to_residue(c, &modulus)).collect();
        LiftRing { m, modulus }
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.m.len() - 1;
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = std::mem::take(&mut prod[k]).mod_floor(&self.modulus);
            for i in 0..n {
                prod[k - n + i] -= &c * &self.m[i];
            }
        }
        prod.truncate(n);
        prod.into_iter()
            .map(|c| c.mod_floor(&self.modulus))
            .collect()
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).mod_floor(&self.modulus))
            .collect()
    }

    fn scale(&self, a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
        a.iter().map(|x| (x * c).mod_floor(&self.modulus)).collect()
    }
}

fn to_residue(c: &BigRational, modulus: &BigInt) -> BigInt {
    let inv = arith::mod_inverse(c.denom(), modulus).expect("p-integral");
    (c.numer() * inv).mod_floor(modulus)
}

/// Newton-lifts a square root of `a` from mod `p` and reconstructs rational
/// coordinates once they stabilize.
fn lift_and_reconstruct(
    m: &[BigRational],
    a: &[BigRational],
    root: Vec<BigInt>,
    p: u64,
    n: usize,
) -> Option<Vec<BigRational>> {
    let bp = BigInt::from(p);
    let mut modulus = bp.clone();
    let mut z = root;
    z.resize(n, BigInt::zero());
    let mut a_vec: Vec<BigRational> = a.to_vec();
    a_vec.resize(n, BigRational::zero());
    // w approximates (2z)^{-1}.
    let ring = LiftRing::new(m, modulus.clone());
    let two_z = ring.scale(&z, &BigInt::from(2));
    let fq_inv = invert_mod_p(m, &two_z, p)?;
    let mut w = fq_inv;
    while modulus.bits() < LIFT_BITS {
        let next = &modulus * &modulus;
        let ring = LiftRing::new(m, next.clone());
        let av: Vec<BigInt> = a_vec.iter().map(|c| to_residue(c, &next)).collect();
        // Refine the inverse first, then the root: both converge quadratically.
        let two_z = ring.scale(&z, &BigInt::from(2));
        let one = unit_vec(n);
        let corr = ring.sub(&ring.scale(&one, &BigInt::from(2)), &ring.mul(&two_z, &w));
        w = ring.mul(&w, &corr);
        let err = ring.sub(&ring.mul(&z, &z), &av);
        z = ring.sub(&z, &ring.mul(&err, &w));
        modulus = next;
        let rec: Option<Vec<BigRational>> = z
            .iter()
            .map(|c| {
                arith::rational_reconstruction(c, &modulus)
                    .map(|(num, den)| BigRational::new(num, den))
            })
            .collect();
        if let Some(rec) = rec {
            let check: Vec<BigInt> = rec.iter().map(|c| to_residue(c, &modulus)).collect();
            if check == z && square_matches(m, &rec, &a_vec) {
                return Some(rec);
            }
        }
    }
    None
}

fn unit_vec(n: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[0] = BigInt::one();
    v
}

fn square_matches(m: &[BigRational], z: &[BigRational], a: &[BigRational]) -> bool {
    let n = m.len() - 1;
    let mut prod = vec![BigRational::zero(); 2 * n - 1];
    for (i, x) in z.iter().enumerate() {
        for (j, y) in z.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (n..2 * n - 1).rev() {
        let c = std::mem::take(&mut prod[k]);
        for i in 0..n {
            prod[k - n + i] -= &c * &m[i];
        }
    }
    prod.truncate(n);
    prod == a
}

fn invert_mod_p(m: &[BigRational], v: &[BigInt], p: u64) -> Option<Vec<BigInt>> {
    let fp = Field::prime(p).ok()?;
    let mbar = Poly::from_coeffs(
        &fp,
        m.iter()
            .map(|c| fp.from_rational(c).expect("p-integral"))
            .collect(),
    );
    let fq = Field::extension(&fp, mbar, "z").ok()?;
    let e = fq.from_coords(v.iter().map(|c| fp.from_bigint(c)).collect());
    let inv = fq.inv(&e).ok()?;
    Some(
        fq.coords(&inv)
            .iter()
            .map(|c| match c {
                Elem::Mod(x) => BigInt::from(*x),
                _ => unreachable!("prime field residue"),
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use crate::error::Error;
    use crate::parse::{parse_elem, parse_field};

    fn sq(field: &str, elem: &str) -> Result<bool, Error> {
        let k = parse_field(field).unwrap();
        k.is_square(&parse_elem(elem, &k).unwrap())
    }

    fn rep(field: &str, elem: &str) -> String {
        let k = parse_field(field).unwrap();
        k.format(&k.square_class_rep(&parse_elem(elem, &k).unwrap()).unwrap())
    }

    #[test]
    fn rational_squares() {
        assert_eq!(sq("Q", "8"), Ok(false));
        assert_eq!(sq("Q", "9/4"), Ok(true));
        assert_eq!(sq("Q", "-1"), Ok(false));
        assert_eq!(sq("Q", "0"), Err(Error::ZeroArgument));
        assert_eq!(rep("Q", "18"), "2");
        assert_eq!(rep("Q", "-4"), "-1");
        assert_eq!(rep("Q", "-12/5"), "-15");
    }

    #[test]
    fn prime_field_squares() {
        assert_eq!(sq("F5", "4"), Ok(true));
        assert_eq!(sq("F5", "-1"), Ok(true));
        assert_eq!(sq("F5", "2"), Ok(false));
        assert_eq!(rep("F5", "3"), "2");
        assert_eq!(rep("F5", "4"), "1");
        assert_eq!(rep("F7", "3"), "3");
    }

    #[test]
    fn rational_function_squares() {
        assert_eq!(sq("F5(t)", "t^2*(t+1)^2/t"), Ok(false));
        assert_eq!(sq("F5(t)", "4*(t+1)^2/t^2"), Ok(true));
        assert_eq!(sq("F5(t)", "2*(t+1)^2"), Ok(false));
        assert_eq!(sq("F3(t)", "t^3*(t+2)"), Ok(false));
        assert_eq!(sq("F3(t)", "t^6"), Ok(true));
        assert_eq!(rep("F5(t)", "3*t^3*(t+1)^2/(t+2)"), "2*t^2 + 4*t");
    }

    #[test]
    fn extension_squares() {
        assert_eq!(sq("Q[i]/(i^2+1)", "-1"), Ok(true));
        assert_eq!(sq("Q[i]/(i^2+1)", "2i"), Ok(true));
        assert_eq!(sq("Q[i]/(i^2+1)", "i"), Ok(false));
        assert_eq!(sq("Q[i]/(i^2+1)", "3"), Ok(false));
        assert_eq!(sq("Q[a]/(a^2-2)", "3+2a"), Ok(true));
        assert_eq!(sq("Q[a]/(a^2-2)", "2"), Ok(true));
        assert_eq!(sq("Q[a]/(a^2-2)", "a"), Ok(false));
        assert_eq!(sq("Q[a]/(a^3-2)", "a^2"), Ok(true));
        assert_eq!(sq("Q[a]/(a^3-2)", "a"), Ok(false));
        assert_eq!(sq("Q[a]/(a^3-2)", "2a"), Ok(true));
        assert_eq!(sq("Q[a]/(a^3-2)", "-1"), Ok(false));
        assert_eq!(sq("Q[a]/(a^3-2)", "(1+a)^2/(3-a)^2"), Ok(true));
        assert_eq!(sq("F5[a]/(a^2-2)", "2"), Ok(true));
        assert_eq!(sq("F5[a]/(a^2-2)", "a"), Ok(false));
        assert!(matches!(
            sq("F3(t)[a]/(a^3-t)", "a"),
            Err(Error::UnsupportedField(_))
        ));
    }

    #[test]
    fn norms_and_traces() {
        let l = parse_field("Q[a]/(a^3-2)").unwrap();
        let k = l.base();
        assert_eq!(l.norm(&l.generator()), k.from_i64(2));
        assert_eq!(l.trace(&l.one()), k.from_i64(3));
        assert_eq!(l.trace(&l.generator()), k.zero());
    }
}
