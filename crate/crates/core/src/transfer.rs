//! Transfers along a residue field `L = k(t)`: the Scharlau form, the
//! geometric and cohomological transfers, lifts of `f` to `L`, trace forms,
//! and the check that the local degree at a closed point is the transfer of
//! the local degree of either lift.

use serde::Serialize;

use crate::degree::{
    bezoutian, block_basis, expand_in_basis, local_bezoutian, local_data, local_degree,
    local_form_rational, reduce_bivariate, ClosedPoint,
};
use crate::error::{Error, Result};
use crate::fields::Elem;
use crate::forms::{
    diagonalize, gw_equal, hyperbolic_reduce, GWClass, GWClassJson, Structure, SymForm, Verdict,
};
use crate::matrix::Matrix;
use crate::poly::Poly;

/// `s(a)`: the coefficient of `t^{n-1}` in `a`.
pub fn scharlau_apply(p: &ClosedPoint, a: &Elem) -> Elem {
    let coords = p.residue_field().coords(a);
    coords[p.degree() - 1].clone()
}

/// Gram matrix of `s_*⟨a⟩` in the basis `1, t, …, t^{n-1}`.
pub fn scharlau_gram(p: &ClosedPoint, a: &Elem) -> Matrix {
    let l = p.residue_field();
    let n = p.degree();
    let powers: Vec<Elem> = (0..2 * n).map(|e| l.pow(p.t(), e as u64)).collect();
    Matrix::from_fn(n, n, |i, j| scharlau_apply(p, &l.mul(&powers[i + j], a)))
}

fn check_residue_field(beta: &SymForm, p: &ClosedPoint) -> Result<()> {
    if beta.field() != p.residue_field() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// `τ(β)`: the `n·rank β` form over `k` whose `(i, j)` block is the Gram
/// matrix of `s_*⟨β_ij⟩`. Upper-Hankel input yields a block-Hankel output.
pub fn geometric_transfer(beta: &SymForm, p: &ClosedPoint) -> Result<SymForm> {
    check_residue_field(beta, p)?;
    let k = p.base_field();
    let n = p.degree();
    let r = beta.dim();
    let grams: Vec<Vec<Matrix>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| scharlau_gram(p, beta.gram().get(i, j)))
                .collect()
        })
        .collect();
    let gram = Matrix::from_fn(n * r, n * r, |a, b| {
        grams[a / n][b / n].get(a % n, b % n).clone()
    });
    let form = SymForm::new(k, gram)?;
    match beta.structure() {
        Some(Structure::UpperHankel(s)) => form.with_structure(Structure::BlockHankel {
            n,
            blocks: s.iter().map(|e| scharlau_gram(p, e)).collect(),
        }),
        _ => Ok(form),
    }
}

/// `ω₀(x) = m₀(x)/(x - t^{p^i})` over `L`, with `m(x) = m₀(x^{p^i})`.
pub fn omega0(p: &ClosedPoint) -> Result<(Poly, Elem)> {
    let dec = p.m().separability_decompose()?;
    let l = p.residue_field();
    let m0 = dec.m0.base_change(l)?;
    let q = l.characteristic().max(1);
    let root = l.pow(p.t(), q.pow(dec.i));
    let w = m0.exact_div(&Poly::linear(l, &root))?;
    let value = w.eval(p.t());
    if l.is_zero(&value) {
        return Err(Error::Invariant("ω₀(t) vanishes".into()));
    }
    Ok((w, value))
}

/// `Tr(β) = τ(⟨ω₀(t)⟩·β)`.
pub fn cohomological_transfer(beta: &SymForm, p: &ClosedPoint) -> Result<SymForm> {
    check_residue_field(beta, p)?;
    let (_, w) = omega0(p)?;
    geometric_transfer(&beta.scale(&w), p)
}

fn is_separable(m: &Poly) -> Result<bool> {
    Ok(m.gcd(&m.derivative())?.deg() == 0)
}

/// Gram matrix `Tr_{L/k}(a·t^i·t^j)` for a separable residue field.
pub fn trace_form(p: &ClosedPoint, a: &Elem) -> Result<SymForm> {
    if !is_separable(p.m())? {
        return Err(Error::InseparableExtension);
    }
    let l = p.residue_field();
    let n = p.degree();
    let powers: Vec<Elem> = (0..2 * n).map(|e| l.pow(p.t(), e as u64)).collect();
    let gram = Matrix::from_fn(n, n, |i, j| l.trace(&l.mul(&powers[i + j], a)));
    SymForm::new(p.base_field(), gram)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LiftKind {
    Geometric,
    Cohomological,
}

/// A lift of `f` to the residue field, vanishing to order `d` at `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftResult {
    pub kind: LiftKind,
    pub lifted: Poly,
    pub t: Elem,
    pub d: usize,
    pub u_lifted: Poly,
    pub omega0_at_t: Option<Elem>,
}

/// `f_g = u(x)·(x - t)^d` over `L`.
pub fn geometric_lift(f: &Poly, p: &ClosedPoint) -> Result<LiftResult> {
    let data = local_data(f, p)?;
    let l = p.residue_field();
    let u_lifted = data.factored.u.base_change(l)?;
    let d = data.factored.d;
    let lifted = u_lifted.mul(&Poly::linear(l, p.t()).pow(d as u32));
    Ok(LiftResult {
        kind: LiftKind::Geometric,
        lifted,
        t: p.t().clone(),
        d,
        u_lifted,
        omega0_at_t: None,
    })
}

/// `f_c = ω₀(x)^d·u(x)·(x - t)^d` over `L`; equal to `f` base-changed to
/// `L` when `L/k` is separable.
pub fn cohomological_lift(f: &Poly, p: &ClosedPoint) -> Result<LiftResult> {
    let g = geometric_lift(f, p)?;
    let (w, w_t) = omega0(p)?;
    let lifted = w.pow(g.d as u32).mul(&g.lifted);
    if is_separable(p.m())? && lifted != f.base_change(p.residue_field())? {
        return Err(Error::Invariant(
            "separable cohomological lift differs from the base change".into(),
        ));
    }
    Ok(LiftResult {
        kind: LiftKind::Cohomological,
        lifted,
        omega0_at_t: Some(w_t),
        ..g
    })
}

/// Ranks gathered by [`verify_local_transfer`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ranks {
    /// `[L:k]`.
    pub residue_degree: usize,
    pub multiplicity: usize,
    pub lhs: usize,
    pub geometric: usize,
    pub cohomological: usize,
    /// Rank of the local degree of either lift at `t`.
    pub lift: usize,
    /// Order of vanishing of `f` base-changed to `L` at `t`.
    pub naive_base_change: usize,
}

/// Outcome of comparing the local degree with both transfers.
#[derive(Clone, Debug)]
pub struct TransferReport {
    pub lhs: GWClass,
    pub geometric: GWClass,
    pub cohomological: GWClass,
    pub verdict_geometric: Verdict,
    pub verdict_cohomological: Verdict,
    /// The anti-diagonal block of the reduced Bézoutian of `f` in the block
    /// basis equals the Gram matrix of `τ⟨u(t)⟩`.
    pub block_antidiagonal_check: bool,
    /// Verdict against plain diagonalization of the localized Bézoutian,
    /// where equality is decidable.
    pub generic_check: Option<Verdict>,
    /// `det Bez(m^d/ũ) = (-1)^{d·n(n-1)/2}·N_{L/k}(det H)` with `H` the
    /// local form of `f_g` at `t`.
    pub det_norm_check: bool,
    pub ranks: Ranks,
    /// Class of `τ⟨u(t)⟩`.
    pub residue_transfer: GWClass,
}

/// Serialized form of a [`TransferReport`].
#[derive(Clone, Debug, Serialize)]
pub struct TransferReportJson {
    pub lhs: GWClassJson,
    pub geometric: GWClassJson,
    pub cohomological: GWClassJson,
    pub verdict_geometric: String,
    pub verdict_cohomological: String,
    pub block_antidiagonal_check: bool,
    pub ranks: Ranks,
    pub generic_check: Option<String>,
    pub det_norm_check: bool,
}

impl TransferReport {
    /// Every check that can fail outright passed.
    pub fn consistent(&self) -> bool {
        self.verdict_geometric != Verdict::NotEqual
            && self.verdict_cohomological != Verdict::NotEqual
            && self.block_antidiagonal_check
            && self.generic_check != Some(Verdict::NotEqual)
            && self.det_norm_check
    }

    pub fn to_json(&self) -> TransferReportJson {
        TransferReportJson {
            lhs: self.lhs.to_json(),
            geometric: self.geometric.to_json(),
            cohomological: self.cohomological.to_json(),
            verdict_geometric: self.verdict_geometric.to_string(),
            verdict_cohomological: self.verdict_cohomological.to_string(),
            block_antidiagonal_check: self.block_antidiagonal_check,
            ranks: self.ranks.clone(),
            generic_check: self.generic_check.map(|v| v.to_string()),
            det_norm_check: self.det_norm_check,
        }
    }
}

/// Computes `deg_p(f)`, `τ(deg_t f_g)` and `Tr(deg_t f_c)` and compares them.
pub fn verify_local_transfer(f: &Poly, p: &ClosedPoint) -> Result<TransferReport> {
    let k = p.base_field();
    if k.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let l = p.residue_field();
    let n = p.degree();
    let lhs = local_degree(f, p)?;

    let fg = geometric_lift(f, p)?;
    let form_g = local_form_rational(&fg.lifted, p.t())?;
    let geometric = geometric_transfer(&form_g, p)?.class()?;

    let fc = cohomological_lift(f, p)?;
    let form_c = local_form_rational(&fc.lifted, p.t())?;
    let cohomological = cohomological_transfer(&form_c, p)?.class()?;

    let verdict_geometric = gw_equal(&lhs, &geometric)?;
    let verdict_cohomological = gw_equal(&lhs, &cohomological)?;

    // Block route straight from Bez(f): reduce mod m^d in both variables.
    let data = local_data(f, p)?;
    let d = data.factored.d;
    let bez_f = bezoutian(f, &Poly::one(k))?;
    let reduced = reduce_bivariate(k, bez_f.coeffs(), &data.m_pow)?;
    let in_blocks = expand_in_basis(k, &reduced, &block_basis(p.m(), d)?)?;
    let u_t = fg.u_lifted.eval(p.t());
    let residue_gram = scharlau_gram(p, &u_t);
    let block_antidiagonal_check = in_blocks.block(0, (d - 1) * n, n, n) == residue_gram;
    let residue_transfer = SymForm::new(k, residue_gram)?.class()?;

    let local_bez = local_bezoutian(f, p)?;
    let generic_check = if k.is_rationals() || k.is_finite() {
        Some(gw_equal(&lhs, &diagonalize(&local_bez.form())?)?)
    } else {
        None
    };

    let sign_exp = d * n * n.saturating_sub(1) / 2;
    let mut expected = l.norm(&form_g.det());
    if sign_exp % 2 == 1 {
        expected = k.neg(&expected);
    }
    let det_norm_check = local_bez.form().det() == expected;

    let naive = f
        .base_change(l)?
        .multiplicity_at(&Poly::linear(l, p.t()))?
        .d;
    let ranks = Ranks {
        residue_degree: n,
        multiplicity: d,
        lhs: lhs.rank(),
        geometric: geometric.rank(),
        cohomological: cohomological.rank(),
        lift: form_g.dim(),
        naive_base_change: naive,
    };
    Ok(TransferReport {
        lhs,
        geometric,
        cohomological,
        verdict_geometric,
        verdict_cohomological,
        block_antidiagonal_check,
        generic_check,
        det_norm_check,
        ranks,
        residue_transfer,
    })
}

/// A class computed directly together with its verdict against the
/// corresponding local degree.
#[derive(Clone, Debug)]
pub struct CheckedClass {
    pub form: SymForm,
    pub class: GWClass,
    /// `None` when the degree route does not apply.
    pub cross_check: Option<Verdict>,
}

fn nonzero_scale(p: &ClosedPoint, a: &Elem) -> Result<()> {
    if p.residue_field().is_zero(a) {
        return Err(Error::ZeroScale);
    }
    Ok(())
}

/// `τ⟨a⟩`, cross-checked against `deg_p(a(x)·m(x))` when `L/k` is separable.
pub fn scaled_scharlau_form(p: &ClosedPoint, a: &Elem) -> Result<CheckedClass> {
    nonzero_scale(p, a)?;
    let l = p.residue_field();
    let form = geometric_transfer(&SymForm::diagonal(l, std::slice::from_ref(a)), p)?;
    let class = form.class()?;
    let cross_check = if is_separable(p.m())? {
        let f = l.to_poly(a).mul(p.m());
        Some(gw_equal(&class, &local_degree(&f, p)?)?)
    } else {
        None
    };
    Ok(CheckedClass {
        form,
        class,
        cross_check,
    })
}

/// `Tr⟨a⟩` from the trace form, cross-checked against
/// `deg_p(a(x)·m'(x)·m(x))`.
pub fn scaled_trace_form(p: &ClosedPoint, a: &Elem) -> Result<CheckedClass> {
    nonzero_scale(p, a)?;
    let form = trace_form(p, a)?;
    let class = form.class()?;
    let l = p.residue_field();
    let f = l.to_poly(a).mul(&p.m().derivative()).mul(p.m());
    let cross_check = Some(gw_equal(&class, &local_degree(&f, p)?)?);
    Ok(CheckedClass {
        form,
        class,
        cross_check,
    })
}

/// Shape of the local degree predicted by its block structure: the number of
/// hyperbolic planes found by greedy reduction, and whether the remainder is
/// `τ⟨u(t)⟩` (odd `d`) or empty (even `d`).
pub fn check_hyperbolic_shape(report: &TransferReport) -> Result<bool> {
    let (n, d) = (report.ranks.residue_degree, report.ranks.multiplicity);
    let red = hyperbolic_reduce(&report.lhs);
    let k = report.lhs.field();
    if d % 2 == 0 {
        return Ok(red.count == n * d / 2 && red.residue.is_empty());
    }
    let base = n * (d - 1) / 2;
    if red.count < base {
        return Ok(false);
    }
    let rest = GWClass::hyperbolic(k, red.count - base).sum(&GWClass::from_diag(k, red.residue))?;
    Ok(gw_equal(&rest, &report.residue_transfer)? != Verdict::NotEqual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;
    use crate::parse::{parse_elem, parse_field, parse_poly};

    fn point(field: &str, m: &str) -> ClosedPoint {
        let k = parse_field(field).unwrap();
        ClosedPoint::new(&parse_poly(m, &k).unwrap()).unwrap()
    }

    fn elem(p: &ClosedPoint, src: &str) -> Elem {
        parse_elem(src, p.residue_field()).unwrap()
    }

    fn ints(p: &ClosedPoint, rows: &[&[i64]]) -> Matrix {
        Matrix::from_ints(p.base_field(), rows)
    }

    #[test]
    fn scharlau_examples() {
        let p = point("Q", "x^2-2");
        let k = p.base_field();
        assert_eq!(scharlau_apply(&p, &elem(&p, "1")), k.zero());
        assert_eq!(scharlau_apply(&p, &elem(&p, "a")), k.one());
        assert_eq!(scharlau_apply(&p, &elem(&p, "2a")), k.from_i64(2));
        let p = point("Q", "x^3-2");
        assert_eq!(
            scharlau_apply(&p, &elem(&p, "a^2*a")),
            p.base_field().zero()
        );
    }

    #[test]
    fn geometric_transfer_examples() {
        let p = point("Q", "x^2-2");
        let l = p.residue_field();
        let g = geometric_transfer(&SymForm::diagonal(l, &[l.one()]), &p).unwrap();
        assert_eq!(g.gram(), &ints(&p, &[&[0, 1], &[1, 0]]));
        let g = geometric_transfer(&SymForm::diagonal(l, &[elem(&p, "a")]), &p).unwrap();
        assert_eq!(g.gram(), &ints(&p, &[&[1, 0], &[0, 2]]));
        let q = point("Q", "x^2+1");
        let l = q.residue_field();
        let g = geometric_transfer(&SymForm::diagonal(l, &[l.from_i64(-5)]), &q).unwrap();
        assert_eq!(g.gram(), &ints(&q, &[&[0, -5], &[-5, 0]]));
        assert_eq!(g.class().unwrap().to_string(), "H");
    }

    #[test]
    fn omega0_examples() {
        let p = point("Q", "x^2+1");
        let (w, v) = omega0(&p).unwrap();
        assert_eq!(w, parse_poly("x + a", p.residue_field()).unwrap());
        assert_eq!(v, elem(&p, "2a"));
        let p = point("F3(s)", "x^3 - s");
        let (w, _) = omega0(&p).unwrap();
        assert!(w.is_one());
        let p = point("Q", "x^3-2");
        let m_prime = p.m().derivative().eval_in(p.residue_field(), p.t());
        assert_eq!(omega0(&p).unwrap().1, m_prime);
    }

    #[test]
    fn cohomological_transfer_example() {
        let p = point("Q", "x^2-2");
        let l = p.residue_field();
        let g = cohomological_transfer(&SymForm::diagonal(l, &[l.one()]), &p).unwrap();
        assert_eq!(g.gram(), &ints(&p, &[&[2, 0], &[0, 4]]));
        assert_eq!(
            gw_equal(
                &g.class().unwrap(),
                &trace_form(&p, &l.one()).unwrap().class().unwrap()
            ),
            Ok(Verdict::Equal)
        );
    }

    #[test]
    fn trace_form_examples() {
        let p = point("Q", "x^3-2");
        let t = trace_form(&p, &p.residue_field().one()).unwrap();
        assert_eq!(t.gram(), &ints(&p, &[&[3, 0, 0], &[0, 0, 6], &[0, 6, 0]]));
        assert_eq!(t.class().unwrap().to_string(), "H + <3>");
        let p = point("Q", "x^2-2");
        assert_eq!(
            trace_form(&p, &p.residue_field().one()).unwrap().gram(),
            &ints(&p, &[&[2, 0], &[0, 4]])
        );
        let p = point("Q", "x^2+1");
        assert_eq!(
            trace_form(&p, &p.residue_field().one()).unwrap().gram(),
            &ints(&p, &[&[2, 0], &[0, -2]])
        );
        let p = point("F3(s)", "x^3 - s");
        assert_eq!(
            trace_form(&p, &p.residue_field().one()),
            Err(Error::InseparableExtension)
        );
    }

    #[test]
    fn lifts() {
        let k = Field::rationals();
        let p = ClosedPoint::with_symbol(&parse_poly("x^2+1", &k).unwrap(), "i").unwrap();
        let l = p.residue_field();
        let f = parse_poly("(x+2)*(x-2)*(x^2+1)^3", &k).unwrap();
        let g = geometric_lift(&f, &p).unwrap();
        assert_eq!(g.lifted, parse_poly("(x+2)*(x-2)*(x-i)^3", l).unwrap());
        let c = cohomological_lift(&f, &p).unwrap();
        assert_eq!(c.lifted, f.base_change(l).unwrap());

        let p = point("F3(s)", "x^3 - s");
        let f = parse_poly("(x^3-s)^2", p.base_field()).unwrap();
        let g = geometric_lift(&f, &p).unwrap();
        assert_eq!(g.lifted, parse_poly("(x-a)^2", p.residue_field()).unwrap());
        assert_eq!(cohomological_lift(&f, &p).unwrap().lifted, g.lifted);
    }

    #[test]
    fn verify_examples() {
        let k = Field::rationals();
        let f = parse_poly("(x^2+1)^3*(x+2)*(x-2)", &k).unwrap();
        let p = ClosedPoint::new(&parse_poly("x^2+1", &k).unwrap()).unwrap();
        let r = verify_local_transfer(&f, &p).unwrap();
        assert_eq!(
            (r.verdict_geometric, r.verdict_cohomological),
            (Verdict::Equal, Verdict::Equal)
        );
        assert!(r.consistent());
        assert_eq!(
            gw_equal(&r.lhs, &GWClass::hyperbolic(&k, 3)),
            Ok(Verdict::Equal)
        );
        assert!(check_hyperbolic_shape(&r).unwrap());

        let p = point("F5(s)", "x^5 - s");
        let f = parse_poly("(x^5-s)^3*(x+1)", p.base_field()).unwrap();
        let r = verify_local_transfer(&f, &p).unwrap();
        assert!(r.consistent(), "{r:?}");
        assert_eq!(
            (r.ranks.lhs, r.ranks.lift, r.ranks.naive_base_change),
            (15, 3, 15)
        );

        let m = parse_poly("x^3-2", &k).unwrap();
        let r = verify_local_transfer(&m, &ClosedPoint::new(&m).unwrap()).unwrap();
        assert_eq!(r.verdict_geometric, Verdict::Equal);
    }

    #[test]
    fn scaled_forms() {
        let p = point("Q", "x^2-2");
        let r = scaled_scharlau_form(&p, &elem(&p, "a")).unwrap();
        assert_eq!(r.cross_check, Some(Verdict::Equal));
        assert_eq!(r.class.to_string(), "<1,2>");
        let r = scaled_trace_form(&p, &elem(&p, "1")).unwrap();
        assert_eq!(r.cross_check, Some(Verdict::Equal));
        let p = point("Q", "x^3-2");
        let r = scaled_trace_form(&p, &elem(&p, "1")).unwrap();
        assert_eq!(
            (r.class.to_string(), r.cross_check),
            ("H + <3>".to_string(), Some(Verdict::Equal))
        );
        assert_eq!(
            scaled_scharlau_form(&p, &elem(&p, "0")).unwrap_err(),
            Error::ZeroScale
        );
    }
}
