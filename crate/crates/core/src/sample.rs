//! Seeded random instances for the property suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degree::ClosedPoint;
use crate::fields::{Elem, Field, FieldKind, Irreducibility};
use crate::forms::SymForm;
use crate::matrix::Matrix;
use crate::poly::Poly;

/// The generator used everywhere randomness is needed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational with numerator and denominator bounded by `bound`.
pub fn nonzero_rational(rng: &mut ChaCha8Rng, bound: i64) -> BigRational {
    loop {
        let n: i64 = rng.gen_range(-bound..=bound);
        let d: i64 = rng.gen_range(1..=bound);
        if n != 0 {
            return BigRational::new(BigInt::from(n), BigInt::from(d));
        }
    }
}

/// Random element of a base field: small integers over ℚ, uniform over 𝔽_p,
/// polynomials of degree `≤ 1` in 𝔽_p(t); extensions combine these.
pub fn elem(rng: &mut ChaCha8Rng, k: &Field) -> Elem {
    match k.kind() {
        FieldKind::Rationals => k.from_i64(rng.gen_range(-5..=5)),
        FieldKind::Prime { p } => k.from_i64(rng.gen_range(0..*p as i64)),
        FieldKind::RationalFunctions { coeffs, .. } => {
            let c = Poly::from_coeffs(coeffs, vec![elem(rng, coeffs), elem(rng, coeffs)]);
            k.fraction(c, Poly::one(coeffs)).expect("unit denominator")
        }
        FieldKind::Extension { base, modulus, .. } => {
            k.from_coords((0..modulus.deg()).map(|_| elem(rng, base)).collect())
        }
    }
}

pub fn nonzero_elem(rng: &mut ChaCha8Rng, k: &Field) -> Elem {
    loop {
        let a = elem(rng, k);
        if !k.is_zero(&a) {
            return a;
        }
    }
}

/// Polynomial of degree at most `deg`.
pub fn poly(rng: &mut ChaCha8Rng, k: &Field, deg: usize) -> Poly {
    Poly::from_coeffs(k, (0..=deg).map(|_| elem(rng, k)).collect())
}

pub fn monic(rng: &mut ChaCha8Rng, k: &Field, deg: usize) -> Poly {
    let mut c: Vec<Elem> = (0..deg).map(|_| elem(rng, k)).collect();
    c.push(k.one());
    Poly::from_coeffs(k, c)
}

/// Closed point whose minimal polynomial has degree `1..=max_deg` and is
/// proven irreducible.
pub fn point(rng: &mut ChaCha8Rng, k: &Field, max_deg: usize) -> ClosedPoint {
    let deg = rng.gen_range(1..=max_deg);
    loop {
        let m = monic(rng, k, deg);
        if let Ok(p) = ClosedPoint::new(&m) {
            if p.degree() == 1 || p.residue_field().irreducibility() == Some(Irreducibility::Proven)
            {
                return p;
            }
        }
    }
}

/// Point with a separable minimal polynomial.
pub fn separable_point(rng: &mut ChaCha8Rng, k: &Field, max_deg: usize) -> ClosedPoint {
    loop {
        let p = point(rng, k, max_deg);
        if p.m()
            .gcd(&p.m().derivative())
            .map(|g| g.deg() == 0)
            .unwrap_or(false)
        {
            return p;
        }
    }
}

/// Nonzero polynomial of degree `≤ max_deg` not divisible by `m`.
pub fn unit_at(rng: &mut ChaCha8Rng, m: &Poly, max_deg: usize) -> Poly {
    loop {
        let deg = rng.gen_range(0..=max_deg);
        let u = poly(rng, m.field(), deg);
        if !u.is_zero() && !u.rem(m).expect("nonzero modulus").is_zero() {
            return u;
        }
    }
}

/// `f = u·m^d` at a random point.
#[derive(Clone, Debug)]
pub struct LocalInstance {
    pub f: Poly,
    pub u: Poly,
    pub d: usize,
    pub point: ClosedPoint,
}

impl LocalInstance {
    pub fn new(u: Poly, d: usize, point: ClosedPoint) -> LocalInstance {
        let f = u.mul(&point.m().pow(d as u32));
        LocalInstance { f, u, d, point }
    }

    /// Command line reproducing the instance.
    pub fn command(&self) -> String {
        format!(
            "a1deg verify --field \"{}\" --poly \"{}\" --point \"{}\"",
            self.f.field(),
            self.f,
            self.point.m()
        )
    }
}

pub fn local_instance(
    rng: &mut ChaCha8Rng,
    k: &Field,
    max_m_deg: usize,
    max_d: usize,
    max_u_deg: usize,
) -> LocalInstance {
    let point = point(rng, k, max_m_deg);
    let u = unit_at(rng, point.m(), max_u_deg);
    let d = rng.gen_range(1..=max_d);
    LocalInstance::new(u, d, point)
}

/// `f = u·(x^p - c)^d` over 𝔽_p(t) with `c` not a p-th power, so the point
/// has a purely inseparable residue field of degree `p`.
pub fn inseparable_instance(
    rng: &mut ChaCha8Rng,
    k: &Field,
    max_d: usize,
    max_u_deg: usize,
) -> LocalInstance {
    let FieldKind::RationalFunctions { p, coeffs, .. } = k.kind() else {
        panic!("inseparable instances live over a rational function field")
    };
    let p = *p as usize;
    let point = loop {
        let a1 = nonzero_elem(rng, coeffs);
        let a0 = elem(rng, coeffs);
        let c = k
            .fraction(Poly::from_coeffs(coeffs, vec![a0, a1]), Poly::one(coeffs))
            .expect("unit denominator");
        let m = Poly::monomial(k, k.one(), p).sub(&Poly::constant(k, c));
        if let Ok(point) = ClosedPoint::new(&m) {
            break point;
        }
    };
    let u = unit_at(rng, point.m(), max_u_deg);
    let d = rng.gen_range(1..=max_d);
    LocalInstance::new(u, d, point)
}

/// Nondegenerate block-Hankel form over ℚ with `d` symmetric `n × n` blocks.
pub fn block_hankel(rng: &mut ChaCha8Rng, n: usize, d: usize) -> SymForm {
    let k = Field::rationals();
    loop {
        let blocks: Vec<Matrix> = (0..d)
            .map(|_| {
                let mut b = Matrix::zero(&k, n, n);
                for i in 0..n {
                    for j in i..n {
                        let v = k.from_i64(rng.gen_range(-4..=4));
                        b.set(i, j, v.clone());
                        b.set(j, i, v);
                    }
                }
                b
            })
            .collect();
        if k.is_zero(&blocks[d - 1].det(&k)) {
            continue;
        }
        return SymForm::block_hankel(&k, n, blocks).expect("symmetric blocks");
    }
}

/// One of the prime fields used by the suites.
pub fn small_prime_field(rng: &mut ChaCha8Rng) -> Field {
    let p = [3u64, 5, 7][rng.gen_range(0..3)];
    Field::prime(p).expect("odd prime")
}
