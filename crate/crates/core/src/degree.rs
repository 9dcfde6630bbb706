//! Bézoutians and global and local A¹-degrees of univariate maps.

use crate::error::{Error, Result};
use crate::fields::{Elem, Field, FieldKind};
use crate::forms::{GWClass, Structure, SymForm};
use crate::matrix::Matrix;
use crate::poly::{FactoredAtPoint, Poly};

/// Coefficient matrix `c` of `(f(X)g(Y) - f(Y)g(X))/(X - Y) = Σ c_ij X^i Y^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bezoutian {
    field: Field,
    coeffs: Matrix,
}

impl Bezoutian {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn form(&self) -> SymForm {
        SymForm::new(&self.field, self.coeffs.clone()).expect("Bézoutians are symmetric")
    }
}

/// The Bézoutian of `f/g`, of dimension `max(deg f, deg g)`.
pub fn bezoutian(f: &Poly, g: &Poly) -> Result<Bezoutian> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch);
    }
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroPair);
    }
    let k = f.field();
    let dim = f.deg().max(g.deg());
    let mut c = Matrix::zero(k, dim, dim);
    // For a > b: (X^a Y^b - X^b Y^a)/(X - Y) = Σ_{0≤j<a-b} X^{b+j} Y^{a-1-j}.
    for a in 0..=dim {
        for b in 0..a {
            let w = k.sub(
                &k.mul(&f.coeff(a), &g.coeff(b)),
                &k.mul(&f.coeff(b), &g.coeff(a)),
            );
            if k.is_zero(&w) {
                continue;
            }
            for j in 0..a - b {
                let (r, s) = (b + j, a - 1 - j);
                let v = k.add(c.get(r, s), &w);
                c.set(r, s, v);
            }
        }
    }
    Ok(Bezoutian {
        field: k.clone(),
        coeffs: c,
    })
}

/// Degree of the rational map `f/g` as a GW class.
pub fn global_degree(f: &Poly, g: &Poly) -> Result<GWClass> {
    global_form(f, g)?.class()
}

/// The Bézoutian form of `f/g`, tagged upper-Hankel when `g` is constant.
pub fn global_form(f: &Poly, g: &Poly) -> Result<SymForm> {
    let bez = bezoutian(f, g)?;
    if f.gcd(g)?.deg() > 0 {
        return Err(Error::NotReduced);
    }
    if bez.dim() == 0 {
        return Err(Error::Malformed("constant map has no degree".into()));
    }
    if g.deg() == 0 && f.deg() > 0 {
        let k = f.field();
        let s = (1..=f.deg())
            .map(|i| k.mul(&f.coeff(i), &g.coeff(0)))
            .collect();
        return bez.form().with_structure(Structure::UpperHankel(s));
    }
    Ok(bez.form())
}

/// A closed point of the affine line: a monic irreducible `m` with residue
/// field `L = k[x]/(m)` and `t` the image of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedPoint {
    m: Poly,
    residue_field: Field,
    t: Elem,
}

impl ClosedPoint {
    /// Point with residue-field generator printed as a default symbol.
    pub fn new(m: &Poly) -> Result<ClosedPoint> {
        let taken: Vec<String> = match m.field().kind() {
            FieldKind::RationalFunctions { var, .. } => vec![var.clone()],
            _ => Vec::new(),
        };
        let symbol = ["a", "b", "c", "w"]
            .into_iter()
            .find(|s| !taken.iter().any(|t| t == s))
            .expect("free symbol");
        ClosedPoint::with_symbol(m, symbol)
    }

    pub fn with_symbol(m: &Poly, symbol: &str) -> Result<ClosedPoint> {
        if !m.is_monic() {
            return Err(Error::NotMonic);
        }
        let k = m.field();
        match m.deg() {
            0 => Err(Error::Malformed(
                "point polynomial must be nonconstant".into(),
            )),
            1 => Ok(ClosedPoint {
                m: m.clone(),
                residue_field: k.clone(),
                t: k.neg(&m.coeff(0)),
            }),
            _ => {
                let l = Field::extension(k, m.clone(), symbol)?;
                let t = l.generator();
                Ok(ClosedPoint {
                    m: m.clone(),
                    residue_field: l,
                    t,
                })
            }
        }
    }

    /// Minimal polynomial over the base field.
    pub fn m(&self) -> &Poly {
        &self.m
    }

    pub fn base_field(&self) -> &Field {
        self.m.field()
    }

    pub fn residue_field(&self) -> &Field {
        &self.residue_field
    }

    /// Image of `x` in the residue field.
    pub fn t(&self) -> &Elem {
        &self.t
    }

    /// `[L:k]`.
    pub fn degree(&self) -> usize {
        self.m.deg()
    }
}

/// Factorization `f = u·m^d` together with `ũ = u mod m^d`.
#[derive(Clone, Debug)]
pub struct LocalData {
    pub factored: FactoredAtPoint,
    pub m_pow: Poly,
    pub u_reduced: Poly,
}

pub fn local_data(f: &Poly, p: &ClosedPoint) -> Result<LocalData> {
    let factored = f.multiplicity_at(p.m())?;
    let m_pow = p.m().pow(factored.d as u32);
    let u_reduced = factored.u.rem(&m_pow)?;
    Ok(LocalData {
        factored,
        m_pow,
        u_reduced,
    })
}

/// The Bézoutian of `m^d / ũ` in the monomial basis.
pub fn local_bezoutian(f: &Poly, p: &ClosedPoint) -> Result<Bezoutian> {
    let data = local_data(f, p)?;
    bezoutian(&data.m_pow, &data.u_reduced)
}

/// Basis `∪_i {Hor_{n-1}·m^{d-1-i}, …, Hor_0·m^{d-1-i}}` of polynomials of
/// degree `< nd`; entry `r` has degree `nd - 1 - r`.
pub fn block_basis(m: &Poly, d: usize) -> Result<Vec<Poly>> {
    let hor = m.horner_basis()?;
    let mut out = Vec::with_capacity(m.deg() * d);
    for i in 0..d {
        let mp = m.pow((d - 1 - i) as u32);
        out.extend(hor.iter().map(|h| h.mul(&mp)));
    }
    Ok(out)
}

/// Matrix whose column `r` holds the coefficients of `basis[r]`.
fn coefficient_columns(field: &Field, basis: &[Poly], dim: usize) -> Matrix {
    Matrix::from_fn(dim, dim, |i, r| {
        if i < basis[r].coeffs().len() {
            basis[r].coeff(i)
        } else {
            field.zero()
        }
    })
}

/// Re-expresses a bivariate coefficient matrix (in monomials) in the
/// product basis `basis(X)·basis(Y)`. `basis` must span the same space.
pub fn expand_in_basis(field: &Field, c: &Matrix, basis: &[Poly]) -> Result<Matrix> {
    let t = coefficient_columns(field, basis, c.rows());
    let p = t.inverse(field)?.transpose();
    Ok(c.congruence(&p, field))
}

/// The local form at `p` written in the block basis, where it is
/// block-Hankel with `n × n` blocks (`n = [L:k]`).
pub fn local_form(f: &Poly, p: &ClosedPoint) -> Result<SymForm> {
    let data = local_data(f, p)?;
    let bez = bezoutian(&data.m_pow, &data.u_reduced)?;
    let basis = block_basis(p.m(), data.factored.d)?;
    let gram = expand_in_basis(p.base_field(), bez.coeffs(), &basis)?;
    SymForm::new(p.base_field(), gram)?.detect_block_hankel(p.degree())
}

/// Local degree of `f` at `p`, of rank `[L:k]·d`.
pub fn local_degree(f: &Poly, p: &ClosedPoint) -> Result<GWClass> {
    local_form(f, p)?.class()
}

/// Upper-Hankel local form of `f` at a rational point `t` of its
/// coefficient field, with anti-diagonals `u^{(d-1)}(t), …, u(t)` in the
/// basis `(x-t)^{d-1}, …, 1`.
pub fn local_form_rational(f: &Poly, t: &Elem) -> Result<SymForm> {
    let k = f.field();
    let factored = f.multiplicity_at(&Poly::linear(k, t))?;
    let (u, d) = (&factored.u, factored.d);
    if k.is_zero(&u.eval(t)) {
        return Err(Error::NotIsolated);
    }
    let s = (0..d)
        .map(|i| u.hasse_derivative(d - 1 - i).eval(t))
        .collect();
    SymForm::upper_hankel(k, s)
}

/// Local degree at a rational point: `(d/2)ℍ`, or `((d-1)/2)ℍ + ⟨u(t)⟩`.
pub fn local_degree_rational(f: &Poly, t: &Elem) -> Result<GWClass> {
    local_form_rational(f, t)?.class()
}

/// Reduces a bivariate coefficient matrix modulo `(q(X), q(Y))`, returning
/// the `deg q × deg q` matrix of the remainder.
pub fn reduce_bivariate(field: &Field, c: &Matrix, q: &Poly) -> Result<Matrix> {
    let n = q.deg();
    let reduce = |coeffs: Vec<Elem>| -> Result<Vec<Elem>> {
        let r = Poly::from_coeffs(field, coeffs).rem(q)?;
        Ok((0..n).map(|i| r.coeff(i)).collect())
    };
    let mut cols = Vec::with_capacity(c.cols());
    for j in 0..c.cols() {
        cols.push(reduce(
            (0..c.rows()).map(|i| c.get(i, j).clone()).collect(),
        )?);
    }
    let mut out = Matrix::zero(field, n, n);
    for i in 0..n {
        let row = reduce(cols.iter().map(|col| col[i].clone()).collect())?;
        for (j, v) in row.into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{diagonalize, gw_equal, Verdict};
    use crate::parse::{parse_field, parse_poly};

    fn poly(src: &str, k: &Field) -> Poly {
        parse_poly(src, k).unwrap()
    }

    #[test]
    fn bezoutian_examples() {
        let k = Field::rationals();
        let one = Poly::one(&k);
        let b = bezoutian(&poly("x^3 + 3x^2 - 4x + 1", &k), &one).unwrap();
        assert_eq!(
            b.coeffs(),
            &Matrix::from_ints(&k, &[&[-4, 3, 1], &[3, 1, 0], &[1, 0, 0]])
        );
        assert_eq!(
            bezoutian(&poly("x", &k), &one).unwrap().coeffs(),
            &Matrix::from_ints(&k, &[&[1]])
        );
        assert_eq!(
            bezoutian(&poly("x^2-2", &k), &one).unwrap().coeffs(),
            &Matrix::from_ints(&k, &[&[0, 1], &[1, 0]])
        );
        assert_eq!(
            bezoutian(&Poly::zero(&k), &Poly::zero(&k)),
            Err(Error::ZeroPair)
        );
    }

    #[test]
    fn global_examples() {
        let k = Field::rationals();
        let one = Poly::one(&k);
        assert_eq!(
            global_degree(&poly("x^3 + 3x^2 - 4x + 1", &k), &one)
                .unwrap()
                .to_string(),
            "H + <1>"
        );
        assert_eq!(
            global_degree(&poly("x^2 - 2", &k), &one)
                .unwrap()
                .to_string(),
            "H"
        );
        assert_eq!(
            global_degree(&poly("x", &k), &one).unwrap().to_string(),
            "<1>"
        );
        assert_eq!(
            global_degree(&poly("x^2-1", &k), &poly("x-1", &k)),
            Err(Error::NotReduced)
        );
        let c = global_degree(&poly("x^2+1", &k), &poly("x", &k)).unwrap();
        assert_eq!(c.rank(), 2);
    }

    #[test]
    fn local_examples() {
        let k = Field::rationals();
        let f = poly("(x+2)*(x-2)*(x^2+1)^3", &k);
        let p = ClosedPoint::new(&poly("x^2+1", &k)).unwrap();
        let c = local_degree(&f, &p).unwrap();
        assert_eq!(c.rank(), 6);
        assert_eq!(
            gw_equal(&c, &GWClass::hyperbolic(&k, 3)).unwrap(),
            Verdict::Equal
        );
        let raw = diagonalize(&local_bezoutian(&f, &p).unwrap().form()).unwrap();
        assert_eq!(gw_equal(&c, &raw).unwrap(), Verdict::Equal);

        let x = poly("x", &k);
        assert_eq!(
            local_degree(&x, &ClosedPoint::new(&x).unwrap())
                .unwrap()
                .to_string(),
            "<1>"
        );

        let m = poly("x^3-2", &k);
        let lhs = local_degree(&m, &ClosedPoint::new(&m).unwrap()).unwrap();
        let rhs = global_degree(&m, &Poly::one(&k)).unwrap();
        assert_eq!(gw_equal(&lhs, &rhs).unwrap(), Verdict::Equal);

        assert_eq!(
            local_degree(&poly("x^2+2", &k), &p),
            Err(Error::NotVanishing)
        );
    }

    #[test]
    fn rational_examples() {
        let l = parse_field("Q[i]/(i^2+1)").unwrap();
        let f = poly("(x+2)*(x-2)*(x-i)^3", &l);
        let c = local_degree_rational(&f, &l.generator()).unwrap();
        let want = GWClass::hyperbolic(&l, 1)
            .sum(&GWClass::from_diag(&l, vec![l.from_i64(-5)]))
            .unwrap();
        assert_eq!(gw_equal(&c, &want).unwrap(), Verdict::Equal);
        assert_eq!(
            local_degree_rational(&poly("(x-i)^2", &l), &l.generator())
                .unwrap()
                .to_string(),
            "H"
        );
        let k = Field::rationals();
        let c = local_degree_rational(&poly("(x-1)*(x+3)", &k), &k.one()).unwrap();
        assert_eq!(c.to_string(), "<1>");
    }

    #[test]
    fn block_form_antidiagonal_is_scharlau_gram() {
        let k = Field::rationals();
        let f = poly("(x^2+x+3)*(x^3-2)^2", &k);
        let p = ClosedPoint::new(&poly("x^3-2", &k)).unwrap();
        let form = local_form(&f, &p).unwrap();
        let Some(Structure::BlockHankel { n, blocks }) = form.structure() else {
            panic!("expected block structure")
        };
        assert_eq!((*n, blocks.len()), (3, 2));
        let l = p.residue_field();
        let ut = poly("x^2+x+3", &k).eval_in(l, p.t());
        let want = Matrix::from_fn(3, 3, |a, b| {
            let e = l.mul(&l.pow(p.t(), (a + b) as u64), &ut);
            l.coords(&e)[2].clone()
        });
        assert_eq!(blocks[1], want);
    }

    #[test]
    fn chain_rule_reduction() {
        let k = Field::rationals();
        let f = poly("(x^2+x+3)*(x^2-2)^2", &k);
        let p = ClosedPoint::new(&poly("x^2-2", &k)).unwrap();
        let data = local_data(&f, &p).unwrap();
        let full = bezoutian(&f, &Poly::one(&k)).unwrap();
        let local = local_bezoutian(&f, &p).unwrap();
        assert_eq!(
            reduce_bivariate(&k, full.coeffs(), &data.m_pow).unwrap(),
            reduce_bivariate(&k, local.coeffs(), &data.m_pow).unwrap()
        );
    }
}
