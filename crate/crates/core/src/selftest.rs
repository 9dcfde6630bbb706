//! Seeded randomized property suite with a deterministic text report.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::degree::{
    bezoutian, block_basis, global_degree, local_bezoutian, local_degree, local_form_rational,
};
use crate::error::Result;
use crate::fields::Field;
use crate::forms::hilbert::{hilbert_symbol_impl, relevant_places};
use crate::forms::{
    block_hankel_diagonalize, diagonalize, gw_equal, GWClass, Place, SymForm, Verdict,
};
use crate::parse::parse_poly;
use crate::poly::Poly;
use crate::sample::{self, LocalInstance};
use crate::transfer::{
    check_hyperbolic_shape, cohomological_transfer, geometric_transfer, scharlau_apply, trace_form,
    verify_local_transfer,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Size {
    Small,
    Medium,
}

impl Size {
    fn factor(self) -> usize {
        match self {
            Size::Small => 1,
            Size::Medium => 5,
        }
    }
}

impl std::fmt::Display for Size {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Size::Small => "small",
            Size::Medium => "medium",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub size: Size,
    /// Run the reciprocity property against a 2-adic symbol with a sign
    /// error, to confirm the suite catches it.
    pub flip_hilbert_sign: bool,
}

#[derive(Clone, Debug, Default)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub undecided: usize,
    pub failures: Vec<String>,
}

impl PropertyOutcome {
    pub fn instances(&self) -> usize {
        self.passed + self.undecided + self.failures.len()
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub seed: u64,
    pub size: Size,
    pub properties: Vec<PropertyOutcome>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.properties.iter().all(|p| p.failures.is_empty())
    }

    pub fn instances(&self) -> usize {
        self.properties.iter().map(PropertyOutcome::instances).sum()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "selftest seed={} size={}", self.seed, self.size).unwrap();
        for p in &self.properties {
            write!(out, "{}: {}/{} passed", p.name, p.passed, p.instances()).unwrap();
            if p.undecided > 0 {
                write!(out, ", {} consistent-undecided", p.undecided).unwrap();
            }
            out.push('\n');
            for f in &p.failures {
                writeln!(out, "  counterexample: {f}").unwrap();
            }
        }
        let failed: usize = self.properties.iter().map(|p| p.failures.len()).sum();
        writeln!(
            out,
            "total: {} instances, {} failures",
            self.instances(),
            failed
        )
        .unwrap();
        out
    }
}

enum Outcome {
    Pass,
    Undecided,
    Fail(String),
}

fn run_property(
    name: &'static str,
    count: usize,
    rng: &mut ChaCha8Rng,
    mut case: impl FnMut(&mut ChaCha8Rng) -> Outcome,
) -> PropertyOutcome {
    let mut out = PropertyOutcome {
        name,
        ..Default::default()
    };
    for _ in 0..count {
        match case(rng) {
            Outcome::Pass => out.passed += 1,
            Outcome::Undecided => out.undecided += 1,
            Outcome::Fail(cmd) => out.failures.push(cmd),
        }
    }
    out
}

fn check(ok: Result<bool>, cmd: impl FnOnce() -> String) -> Outcome {
    match ok {
        Ok(true) => Outcome::Pass,
        Ok(false) => Outcome::Fail(cmd()),
        Err(e) => Outcome::Fail(format!("{}  # error: {e}", cmd())),
    }
}

fn hilbert_command(a: &BigRational, b: &BigRational) -> String {
    format!("a1deg hilbert --a {a} --b {b}")
}

fn reciprocity(a: &BigRational, b: &BigRational, flip: bool) -> Result<bool> {
    let mut product = 1;
    for place in relevant_places(a, b) {
        product *= hilbert_symbol_impl(a, b, &place, flip)?;
    }
    Ok(product == 1)
}

fn symmetric_bimultiplicative(a: &BigRational, b: &BigRational, c: &BigRational) -> Result<bool> {
    let bc = b * c;
    let mut places = relevant_places(a, &bc);
    places.extend(relevant_places(b, c));
    places.push(Place::Prime(BigUint::from(3u32)));
    for place in places {
        let s = |x: &BigRational, y: &BigRational| hilbert_symbol_impl(x, y, &place, false);
        if s(a, b)? != s(b, a)? || s(a, &bc)? != s(a, b)? * s(a, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn gw_equal_laws(rng: &mut ChaCha8Rng) -> Result<bool> {
    let k = Field::rationals();
    let n = rng.gen_range(1..=4);
    let diag: Vec<_> = (0..n).map(|_| sample::nonzero_elem(rng, &k)).collect();
    let other: Vec<_> = (0..n).map(|_| sample::nonzero_elem(rng, &k)).collect();
    let x = GWClass::from_diag(&k, diag.clone());
    let y = GWClass::from_diag(&k, other);
    let mut scaled = diag.clone();
    for a in scaled.iter_mut() {
        let s = sample::nonzero_elem(rng, &k);
        *a = k.mul(a, &k.mul(&s, &s));
    }
    scaled.reverse();
    let z = GWClass::from_diag(&k, scaled);
    Ok(gw_equal(&x, &x)? == Verdict::Equal
        && gw_equal(&x, &y)? == gw_equal(&y, &x)?
        && gw_equal(&x, &z)? == Verdict::Equal)
}

fn block_hankel_agrees(form: &SymForm) -> Result<bool> {
    Ok(gw_equal(&block_hankel_diagonalize(form)?, &diagonalize(form)?)? == Verdict::Equal)
}

fn block_hankel_command(form: &SymForm) -> String {
    let rows: Vec<String> = form
        .gram()
        .to_strings(form.field())
        .into_iter()
        .map(|r| r.join(","))
        .collect();
    format!("# block-Hankel Gram [{}]", rows.join("; "))
}

/// Scharlau duality `s(x^i·Hor_{n-1-j}(t)) = [i = j]` and the Bézoutian–Horner
/// identity `Bez(m/g)` restricted to deg `g < n` equals the coefficient matrix
/// of `g(X)(m(X) - m(Y))/(X - Y)` reduced mod `(m(X), m(Y))`.
fn horner_identities(rng: &mut ChaCha8Rng, k: &Field) -> Result<bool> {
    let p = sample::point(rng, k, 4);
    let n = p.degree();
    let l = p.residue_field();
    let hor = p.m().horner_basis()?;
    for i in 0..n {
        for j in 0..n {
            let v = hor[j].eval_in(l, p.t());
            let v = l.mul(&l.pow(p.t(), i as u64), &v);
            let want = if i == j { k.one() } else { k.zero() };
            if scharlau_apply(&p, &v) != want {
                return Ok(false);
            }
        }
    }
    let g = sample::unit_at(rng, p.m(), n - 1);
    let bez = bezoutian(p.m(), &g)?;
    let expanded = crate::degree::expand_in_basis(k, bez.coeffs(), &block_basis(p.m(), 1)?)?;
    let g_t = g.eval_in(l, p.t());
    Ok(expanded == crate::transfer::scharlau_gram(&p, &g_t))
}

fn separable_identities(rng: &mut ChaCha8Rng, k: &Field) -> Result<Outcome> {
    let p = sample::separable_point(rng, k, 3);
    let l = p.residue_field();
    let a = sample::nonzero_elem(rng, l);
    let cmd = format!(
        "a1deg trace-form --field \"{}\" --modulus \"{}\" --scale \"{}\"",
        k,
        p.m(),
        l.format(&a)
    );
    let beta = SymForm::diagonal(l, std::slice::from_ref(&a));
    let trace = trace_form(&p, &a)?.class()?;
    let coh = cohomological_transfer(&beta, &p)?.class()?;
    let m_prime = p.m().derivative().eval_in(l, p.t());
    let hoyois = geometric_transfer(&beta.scale(&m_prime), &p)?.class()?;
    let verdicts = [gw_equal(&trace, &coh)?, gw_equal(&coh, &hoyois)?];
    Ok(if verdicts.iter().all(|v| *v == Verdict::Equal) {
        Outcome::Pass
    } else {
        Outcome::Fail(cmd)
    })
}

fn transfer_outcome(inst: &LocalInstance) -> Outcome {
    let run = || -> Result<(bool, bool)> {
        let r = verify_local_transfer(&inst.f, &inst.point)?;
        let rank_ok = r.ranks.lhs == inst.point.degree() * inst.d;
        let decided =
            r.verdict_geometric == Verdict::Equal && r.verdict_cohomological == Verdict::Equal;
        Ok((
            r.consistent() && rank_ok && check_hyperbolic_shape(&r)?,
            decided,
        ))
    };
    match run() {
        Ok((true, true)) => Outcome::Pass,
        Ok((true, false)) => Outcome::Undecided,
        Ok((false, _)) => Outcome::Fail(inst.command()),
        Err(e) => Outcome::Fail(format!("{}  # error: {e}", inst.command())),
    }
}

fn local_rational_agrees(rng: &mut ChaCha8Rng, k: &Field) -> Result<bool> {
    let t = sample::elem(rng, k);
    let line = Poly::linear(k, &t);
    let u = sample::unit_at(rng, &line, 3);
    let d = rng.gen_range(1..=4);
    let f = u.mul(&line.pow(d as u32));
    let point = crate::degree::ClosedPoint::new(&line)?;
    let structured = local_form_rational(&f, &t)?.class()?;
    let raw = diagonalize(&local_bezoutian(&f, &point)?.form())?;
    Ok(gw_equal(&structured, &raw)? == Verdict::Equal
        && gw_equal(&structured, &local_degree(&f, &point)?)? == Verdict::Equal)
}

fn global_local_consistency(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let k = Field::rationals();
    let count = rng.gen_range(1..=2);
    let mut points: Vec<crate::degree::ClosedPoint> = Vec::new();
    while points.len() < count {
        let p = sample::point(rng, &k, 2);
        if points.iter().all(|q| q.m() != p.m()) {
            points.push(p);
        }
    }
    let exps: Vec<usize> = points.iter().map(|_| rng.gen_range(1..=2)).collect();
    let c = sample::nonzero_elem(rng, &k);
    let mut f = Poly::constant(&k, c);
    for (p, e) in points.iter().zip(&exps) {
        f = f.mul(&p.m().pow(*e as u32));
    }
    let cmd = format!("a1deg degree-global --field Q --poly \"{f}\"");
    let global = global_degree(&f, &Poly::one(&k))?;
    let mut sum = GWClass::from_diag(&k, Vec::new());
    for p in &points {
        sum = sum.sum(&local_degree(&f, p)?)?;
    }
    Ok((gw_equal(&global, &sum)? == Verdict::Equal, cmd))
}

fn round_trip(rng: &mut ChaCha8Rng) -> (bool, String) {
    let fields = ["Q", "F7", "F5(t)", "Q[a]/(a^2 - 3)"];
    let spec = fields[rng.gen_range(0..fields.len())];
    let k = crate::parse::parse_field(spec).expect("valid field");
    let deg = rng.gen_range(0..=5);
    let f = sample::poly(rng, &k, deg);
    let printed = f.to_string();
    let ok = parse_poly(&printed, &k).map(|g| g == f).unwrap_or(false);
    (
        ok,
        format!("a1deg degree-global --field \"{spec}\" --poly \"{printed}\""),
    )
}

/// Runs every property; the report depends only on the options.
pub fn run(opts: &Options) -> Report {
    let mut rng = sample::rng(opts.seed);
    let f = opts.size.factor();
    let q = Field::rationals();
    let mut props = Vec::new();
    let flip = opts.flip_hilbert_sign;

    props.push(run_property("hilbert-reciprocity", 60 * f, &mut rng, |r| {
        let (a, b) = (
            sample::nonzero_rational(r, 10_000),
            sample::nonzero_rational(r, 10_000),
        );
        check(reciprocity(&a, &b, flip), || hilbert_command(&a, &b))
    }));
    props.push(run_property(
        "hilbert-symmetric-bimultiplicative",
        30 * f,
        &mut rng,
        |r| {
            let (a, b, c) = (
                sample::nonzero_rational(r, 200),
                sample::nonzero_rational(r, 200),
                sample::nonzero_rational(r, 200),
            );
            check(symmetric_bimultiplicative(&a, &b, &c), || {
                hilbert_command(&a, &(&b * &c))
            })
        },
    ));
    props.push(run_property("gw-equal-laws", 20 * f, &mut rng, |r| {
        check(gw_equal_laws(r), || {
            format!("a1deg selftest --seed {}  # gw-equal-laws", opts.seed)
        })
    }));
    props.push(run_property(
        "block-hankel-vs-diagonalize",
        20 * f,
        &mut rng,
        |r| {
            let (n, d) = (r.gen_range(1..=3), r.gen_range(1..=4));
            let form = sample::block_hankel(r, n, d);
            check(block_hankel_agrees(&form), || block_hankel_command(&form))
        },
    ));
    props.push(run_property(
        "horner-scharlau-duality",
        20 * f,
        &mut rng,
        |r| {
            let k = if r.gen_bool(0.5) {
                q.clone()
            } else {
                sample::small_prime_field(r)
            };
            check(horner_identities(r, &k), || {
                format!("a1deg selftest --seed {}  # horner", opts.seed)
            })
        },
    ));
    props.push(run_property(
        "local-rational-vs-bezoutian",
        15 * f,
        &mut rng,
        |r| {
            let k = if r.gen_bool(0.5) {
                q.clone()
            } else {
                sample::small_prime_field(r)
            };
            check(local_rational_agrees(r, &k), || {
                format!("a1deg selftest --seed {}  # local-rational", opts.seed)
            })
        },
    ));
    props.push(run_property(
        "global-local-consistency",
        10 * f,
        &mut rng,
        |r| match global_local_consistency(r) {
            Ok((true, _)) => Outcome::Pass,
            Ok((false, cmd)) => Outcome::Fail(cmd),
            Err(e) => Outcome::Fail(format!("# error: {e}")),
        },
    ));
    props.push(run_property(
        "separable-coincidence",
        15 * f,
        &mut rng,
        |r| {
            let k = if r.gen_bool(0.5) {
                q.clone()
            } else {
                sample::small_prime_field(r)
            };
            separable_identities(r, &k).unwrap_or_else(|e| Outcome::Fail(format!("# error: {e}")))
        },
    ));
    props.push(run_property(
        "local-transfer-rationals",
        15 * f,
        &mut rng,
        |r| transfer_outcome(&sample::local_instance(r, &q, 4, 4, 3)),
    ));
    props.push(run_property(
        "local-transfer-prime-fields",
        15 * f,
        &mut rng,
        |r| {
            let k = sample::small_prime_field(r);
            transfer_outcome(&sample::local_instance(r, &k, 4, 4, 3))
        },
    ));
    props.push(run_property(
        "local-transfer-inseparable",
        5 * f,
        &mut rng,
        |r| {
            let p = if r.gen_bool(0.5) { 3 } else { 5 };
            let k = Field::rational_functions(p, "t").expect("odd prime");
            transfer_outcome(&sample::inseparable_instance(r, &k, 3, 2))
        },
    ));
    props.push(run_property("parse-round-trip", 20 * f, &mut rng, |r| {
        let (ok, cmd) = round_trip(r);
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail(cmd)
        }
    }));

    Report {
        seed: opts.seed,
        size: opts.size,
        properties: props,
    }
}
