//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use a1deg::degree::{bezoutian, global_degree, local_degree, local_form_rational, ClosedPoint};
use a1deg::forms::hilbert::relevant_places;
use a1deg::forms::{
    block_hankel_diagonalize, diagonalize, gw_equal, hilbert_symbol, GWClass, SymForm, Verdict,
};
use a1deg::parse::parse_poly;
use a1deg::sample::{self, LocalInstance};
use a1deg::selftest::{self, Size};
use a1deg::transfer::{
    check_hyperbolic_shape, cohomological_transfer, geometric_transfer, scharlau_gram, trace_form,
    verify_local_transfer, TransferReport,
};
use a1deg::{BigRational, Field, Matrix, Poly};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn err(e: a1deg::Error) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let k = Field::rationals();
    let f = parse_poly("x^3 + 3x^2 - 4x + 1", &k).map_err(err)?;
    let start = Instant::now();
    let bez = bezoutian(&f, &Poly::one(&k)).map_err(err)?;
    let class = global_degree(&f, &Poly::one(&k)).map_err(err)?;
    let elapsed = start.elapsed();
    ensure(
        bez.coeffs() == &Matrix::from_ints(&k, &[&[-4, 3, 1], &[3, 1, 0], &[1, 0, 0]]),
        || "Bézoutian matrix differs".into(),
    )?;
    let want = GWClass::hyperbolic(&k, 1)
        .sum(&GWClass::from_diag(&k, vec![k.one()]))
        .map_err(err)?;
    ensure(
        gw_equal(&class, &want).map_err(err)? == Verdict::Equal,
        || format!("class {class}"),
    )?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("class {class} in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let k = Field::rationals();
    let m = parse_poly("x^3 - 2", &k).map_err(err)?;
    let start = Instant::now();
    let p = ClosedPoint::new(&m).map_err(err)?;
    let tf = trace_form(&p, &p.residue_field().one()).map_err(err)?;
    let class = tf.class().map_err(err)?;
    let local = local_degree(&m.derivative().mul(&m), &p).map_err(err)?;
    let elapsed = start.elapsed();
    ensure(
        tf.gram() == &Matrix::from_ints(&k, &[&[3, 0, 0], &[0, 0, 6], &[0, 6, 0]]),
        || "trace Gram differs".into(),
    )?;
    let want = GWClass::from_diag(&k, vec![k.from_i64(3)])
        .sum(&GWClass::hyperbolic(&k, 1))
        .map_err(err)?;
    ensure(
        gw_equal(&class, &want).map_err(err)? == Verdict::Equal,
        || format!("class {class}"),
    )?;
    ensure(
        gw_equal(&class, &local).map_err(err)? == Verdict::Equal,
        || format!("local degree {local}"),
    )?;
    within(elapsed, Duration::from_millis(10))?;
    Ok(format!("class {class} in {elapsed:?}"))
}

struct Suite {
    reports: Vec<(LocalInstance, TransferReport)>,
}

fn run_suite(instances: Vec<LocalInstance>) -> Result<Suite, String> {
    let mut reports = Vec::new();
    for inst in instances {
        let r = verify_local_transfer(&inst.f, &inst.point)
            .map_err(|e| format!("{}: {e}", inst.command()))?;
        reports.push((inst, r));
    }
    Ok(Suite { reports })
}

fn separable_instances() -> Vec<LocalInstance> {
    let mut rng = sample::rng(2024);
    let q = Field::rationals();
    let mut out: Vec<LocalInstance> = (0..100)
        .map(|_| sample::local_instance(&mut rng, &q, 4, 4, 3))
        .collect();
    for i in 0..100 {
        let k = Field::prime([3, 5, 7][i % 3]).expect("odd prime");
        out.push(sample::local_instance(&mut rng, &k, 4, 4, 3));
    }
    out
}

fn inseparable_instances() -> Vec<LocalInstance> {
    let mut rng = sample::rng(5150);
    let mut out = Vec::new();
    for p in [3u64, 5] {
        let k = Field::rational_functions(p, "t").expect("odd prime");
        let m = parse_poly(&format!("x^{p} - t"), &k).expect("valid point");
        let point = ClosedPoint::new(&m).expect("irreducible");
        for _ in 0..20 {
            let u = sample::unit_at(&mut rng, &m, 2);
            let d = rng.gen_range(1..=4);
            out.push(LocalInstance::new(u, d, point.clone()));
        }
    }
    out
}

fn criterion_3(suite: &Suite, elapsed: Duration) -> Outcome {
    let (mut q, mut fp) = (0, 0);
    for (inst, r) in &suite.reports {
        ensure(
            r.verdict_geometric == Verdict::Equal
                && r.verdict_cohomological == Verdict::Equal
                && r.consistent(),
            || {
                format!(
                    "{} -> {} / {}",
                    inst.command(),
                    r.verdict_geometric,
                    r.verdict_cohomological
                )
            },
        )?;
        if inst.f.field().is_rationals() {
            q += 1;
        } else {
            fp += 1;
        }
    }
    ensure(q >= 100 && fp >= 100, || {
        format!("only {q} + {fp} instances")
    })?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "{q} over Q, {fp} over F_p, all Equal in {elapsed:?}"
    ))
}

fn criterion_4(suite: &Suite, elapsed: Duration) -> Outcome {
    let mut undecided = 0;
    for (inst, r) in &suite.reports {
        let p = inst.f.field().characteristic() as usize;
        let d = inst.d;
        let g = &r.ranks;
        ensure(
            g.lhs == p * d && g.naive_base_change == p * d && g.lift == d,
            || format!("{}: ranks {g:?}", inst.command()),
        )?;
        let k = inst.f.field();
        let lift_rank = local_form_rational(&sample_lift(inst)?, inst.point.t())
            .map_err(err)?
            .dim();
        ensure(lift_rank == d, || {
            format!("{}: lift rank {lift_rank}", inst.command())
        })?;
        ensure(r.consistent(), || {
            format!("{}: a check failed", inst.command())
        })?;
        for other in [&r.geometric, &r.cohomological] {
            ensure(other.rank() == r.lhs.rank(), || {
                format!("{}: rank mismatch", inst.command())
            })?;
            let same = k
                .same_square_class(&other.det(), &r.lhs.det())
                .map_err(err)?;
            ensure(same, || {
                format!("{}: discriminant mismatch", inst.command())
            })?;
        }
        if r.verdict_geometric != Verdict::Equal || r.verdict_cohomological != Verdict::Equal {
            undecided += 1;
        }
    }
    ensure(suite.reports.len() >= 40, || "too few instances".into())?;
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "{} instances, rank p·d vs lift rank d, {} consistent-undecided, none NotEqual, in {elapsed:?}",
        suite.reports.len(),
        undecided
    ))
}

fn sample_lift(inst: &LocalInstance) -> Result<Poly, String> {
    Ok(a1deg::transfer::geometric_lift(&inst.f, &inst.point)
        .map_err(err)?
        .lifted)
}

fn criterion_5(suites: &[&Suite]) -> Outcome {
    let mut count = 0;
    for suite in suites {
        for (inst, r) in &suite.reports {
            ensure(check_hyperbolic_shape(r).map_err(err)?, || {
                format!("{}: shape {}", inst.command(), r.lhs)
            })?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} local degrees have the predicted hyperbolic shape"
    ))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = sample::rng(66);
    let mut count = 0;
    for n in 1..=3 {
        for d in 1..=4 {
            for _ in 0..17 {
                let form = sample::block_hankel(&mut rng, n, d);
                let a = block_hankel_diagonalize(&form).map_err(err)?;
                let b = diagonalize(&form).map_err(err)?;
                ensure(gw_equal(&a, &b).map_err(err)? == Verdict::Equal, || {
                    format!("n={n} d={d}: {a} vs {b}")
                })?;
                count += 1;
            }
        }
    }
    // Scalar upper-Hankel 5 × 5: 2ℍ + ⟨a_5⟩.
    let k = Field::rationals();
    for _ in 0..5 {
        let s: Vec<_> = (0..5)
            .map(|i| {
                if i == 4 {
                    sample::nonzero_elem(&mut rng, &k)
                } else {
                    sample::elem(&mut rng, &k)
                }
            })
            .collect();
        let blocks = s
            .iter()
            .map(|v| Matrix::diagonal(&k, std::slice::from_ref(v)))
            .collect();
        let form = SymForm::block_hankel(&k, 1, blocks).map_err(err)?;
        let want = GWClass::hyperbolic(&k, 2)
            .sum(&GWClass::from_diag(&k, vec![s[4].clone()]))
            .map_err(err)?;
        let got = block_hankel_diagonalize(&form).map_err(err)?;
        ensure(
            gw_equal(&got, &want).map_err(err)? == Verdict::Equal,
            || format!("scalar case gave {got}"),
        )?;
        ensure(
            gw_equal(&diagonalize(&form).map_err(err)?, &want).map_err(err)? == Verdict::Equal,
            || "scalar generic".into(),
        )?;
        count += 1;
    }
    let elapsed = start.elapsed();
    ensure(count >= 200, || format!("only {count} forms"))?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("{count} forms agree in {elapsed:?}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = sample::rng(77);
    for _ in 0..500 {
        let a = sample::nonzero_rational(&mut rng, 10_000);
        let b = sample::nonzero_rational(&mut rng, 10_000);
        let c = sample::nonzero_rational(&mut rng, 10_000);
        let product: i8 = relevant_places(&a, &b)
            .iter()
            .map(|p| hilbert_symbol(&a, &b, p).unwrap())
            .product();
        ensure(product == 1, || format!("reciprocity fails for ({a}, {b})"))?;
        let bc: BigRational = &b * &c;
        for place in relevant_places(&a, &bc)
            .into_iter()
            .chain(relevant_places(&b, &c))
        {
            let s = |x: &BigRational, y: &BigRational| hilbert_symbol(x, y, &place).unwrap();
            ensure(s(&a, &b) == s(&b, &a), || {
                format!("asymmetric at {place}: ({a}, {b})")
            })?;
            ensure(s(&a, &bc) == s(&a, &b) * s(&a, &c), || {
                format!("not multiplicative at {place}: {a}, {b}, {c}")
            })?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("500 pairs in {elapsed:?}"))
}

fn criterion_8() -> Outcome {
    let mut rng = sample::rng(88);
    for i in 0..200 {
        let k = if i % 2 == 0 {
            Field::rationals()
        } else {
            sample::small_prime_field(&mut rng)
        };
        let p = sample::point(&mut rng, &k, 4);
        let (m, n) = (p.m(), p.degree());
        // Duality: s(x^i·Hor_{n-1-j}) = [i = j], with s read off a remainder mod m.
        let hor = m.horner_basis().map_err(err)?;
        for a in 0..n {
            for b in 0..n {
                let r = Poly::monomial(&k, k.one(), a)
                    .mul(&hor[b])
                    .rem(m)
                    .map_err(err)?;
                let want = if a == b { k.one() } else { k.zero() };
                ensure(r.coeff(n - 1) == want, || {
                    format!("duality fails for {m} at ({a}, {b})")
                })?;
            }
        }
        // Bez(m/g) in the Horner basis is the Gram matrix of τ⟨g(t)⟩.
        let g = sample::unit_at(&mut rng, m, n - 1);
        let bez = bezoutian(m, &g).map_err(err)?;
        let horner = a1deg::degree::expand_in_basis(
            &k,
            bez.coeffs(),
            &a1deg::degree::block_basis(m, 1).map_err(err)?,
        )
        .map_err(err)?;
        let oracle = Matrix::from_fn(n, n, |a, b| {
            g.mul(&Poly::monomial(&k, k.one(), a + b))
                .rem(m)
                .expect("monic")
                .coeff(n - 1)
        });
        ensure(horner == oracle, || {
            format!("Bézoutian-Horner identity fails for {m}, {g}")
        })?;
        ensure(
            scharlau_gram(&p, &g.eval_in(p.residue_field(), p.t())) == oracle,
            || "Scharlau Gram differs".into(),
        )?;
    }
    Ok("200 instances".into())
}

fn criterion_9() -> Outcome {
    let mut rng = sample::rng(99);
    for i in 0..120 {
        let k = if i % 2 == 0 {
            Field::rationals()
        } else {
            sample::small_prime_field(&mut rng)
        };
        let p = sample::separable_point(&mut rng, &k, 4);
        let l = p.residue_field();
        let a = sample::nonzero_elem(&mut rng, l);
        let beta = SymForm::diagonal(l, std::slice::from_ref(&a));
        let trace = trace_form(&p, &a).map_err(err)?.class().map_err(err)?;
        let coh = cohomological_transfer(&beta, &p)
            .map_err(err)?
            .class()
            .map_err(err)?;
        let m_prime = p.m().derivative().eval_in(l, p.t());
        let hoyois = geometric_transfer(&beta.scale(&m_prime), &p)
            .map_err(err)?
            .class()
            .map_err(err)?;
        ensure(
            gw_equal(&trace, &coh).map_err(err)? == Verdict::Equal,
            || format!("trace vs Tr at {}", p.m()),
        )?;
        ensure(
            gw_equal(&coh, &hoyois).map_err(err)? == Verdict::Equal,
            || format!("Tr vs τ⟨m'(t)⟩ at {}", p.m()),
        )?;
    }
    Ok("120 separable instances".into())
}

fn criterion_10() -> Outcome {
    let opts = selftest::Options {
        seed: 1,
        size: Size::Small,
        flip_hilbert_sign: false,
    };
    let (first, second) = (selftest::run(&opts), selftest::run(&opts));
    ensure(first.ok(), || first.render())?;
    ensure(first.instances() >= 200, || {
        format!("only {} instances", first.instances())
    })?;
    ensure(first.render() == second.render(), || {
        "reports differ".into()
    })?;
    let mutated = selftest::run(&selftest::Options {
        flip_hilbert_sign: true,
        ..opts
    });
    ensure(
        !mutated.ok() && mutated.render().contains("counterexample: a1deg hilbert"),
        || "sign-flipped Hilbert symbol went unnoticed".into(),
    )?;
    Ok(format!(
        "{} instances, identical reports",
        first.instances()
    ))
}

fn main() {
    let start = Instant::now();
    let separable = run_suite(separable_instances());
    let separable_time = start.elapsed();
    let start = Instant::now();
    let inseparable = run_suite(inseparable_instances());
    let inseparable_time = start.elapsed();

    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "Bézoutian golden test", criterion_1()),
        (2, "trace form of Q(2^(1/3))", criterion_2()),
        (
            3,
            "local transfer identity, randomized",
            separable
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|s| criterion_3(s, separable_time)),
        ),
        (
            4,
            "inseparable suite",
            inseparable
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|s| criterion_4(s, inseparable_time)),
        ),
        (
            5,
            "hyperbolic shape of local degrees",
            match (&separable, &inseparable) {
                (Ok(a), Ok(b)) => criterion_5(&[a, b]),
                _ => Err("suites did not run".into()),
            },
        ),
        (6, "block-Hankel oracle equivalence", criterion_6()),
        (7, "Hilbert reciprocity", criterion_7()),
        (8, "Horner-Scharlau duality", criterion_8()),
        (9, "separable coincidence", criterion_9()),
        (10, "selftest determinism", criterion_10()),
    ];
    let mut failed = Vec::new();
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS  {name}: {detail}"),
            Err(why) => {
                println!("criterion {n}: FAIL  {name}: {why}");
                failed.push(*n);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
