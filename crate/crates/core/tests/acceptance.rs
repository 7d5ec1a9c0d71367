//! Acceptance run: one PASS/FAIL line per criterion, with the time taken
//! and the pinned limit. Exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::Declarative;
use ls2::encode::{apply_matrix, iterate, mat_pow, mat_vec, DenseMat, DenseVec, VShape};
use ls2::gen::{self, mutate, open_term, random_scalar, GenConfig};
use ls2::linearity::{obs_equiv_sample, Observation};
use ls2::metatheory::{run, Suite, SuiteConfig};
use ls2::reduce::{critical_pair_scan, equiv};
use ls2::{infer, normalize, parse_prop, parse_term, Prop, Semiring, Term};

const STEPS: usize = 100_000;

type Outcome = Result<(), String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn rat(src: &str) -> Term {
    parse_term(src, Semiring::Rat).unwrap_or_else(|e| panic!("{src}: {e}"))
}

fn q(n: u64) -> ls2::Scalar {
    Semiring::Rat.from_u64(n)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn matrix_example() -> Outcome {
    // (a c; b d) with a..f = 1..6
    let t = rat(r"\x:1 & 1. da1(x; y:1. d1(y; <1.*, 2.*>)) + da2(x; z:1. d1(z; <3.*, 4.*>))");
    let nf = normalize(&Term::app(t, rat("<5.*, 6.*>")), STEPS).map_err(|e| e.to_string())?.term;
    ensure(nf == rat("<23.*, 34.*>"), || format!("normal form {nf}"))?;
    let m = DenseMat::from_rows(vec![vec![q(1), q(3)], vec![q(2), q(4)]]).unwrap();
    let v = DenseVec::from_entries(vec![q(5), q(6)]).unwrap();
    let dense = mat_vec(&m, &v).unwrap();
    let compiled = apply_matrix(&m, &v, STEPS).map_err(|e| e.to_string())?;
    ensure(dense == compiled && dense.entries() == [q(23), q(34)], || {
        format!("compiled {compiled}, dense {dense}")
    })
}

fn bang_counterexample() -> Outcome {
    let f = r"(\x:!1. db(x; y:1. 2.*))";
    let inside = rat(&format!("{f} (!(1.*) + !(3.*))"));
    let outside = rat(&format!("({f} (!(1.*))) + ({f} (!(3.*)))"));
    let a = normalize(&inside, STEPS).map_err(|e| e.to_string())?.term;
    let b = normalize(&outside, STEPS).map_err(|e| e.to_string())?.term;
    ensure(a == rat("2.*") && b == rat("4.*"), || format!("{a} and {b}"))?;
    ensure(!equiv(&inside, &outside, STEPS).unwrap(), || "equiv returned true".into())
}

fn observational_example() -> Outcome {
    let t1 = rat(r"\y:1 -o 1. y 3.*");
    let t2 = rat(r"\y:1 -o 1. (y 1.*) + (y 2.*)");
    let b = parse_prop("(1 -o 1) -o 1").unwrap();
    let obs = Observation {
        context: rat(r"_ (\z:1. z)"),
        result_type: Prop::One,
    };
    let report = obs_equiv_sample(&t1, &t2, &b, &[obs], STEPS).map_err(|e| e.to_string())?;
    let v = &report.verdicts[0];
    ensure(v.holds() && v.left.entries() == [q(3)], || format!("{} vs {}", v.left, v.right))?;
    ensure(!equiv(&t1, &t2, STEPS).unwrap(), || "raw equiv returned true".into())
}

fn matrix_iterator() -> Outcome {
    let mut rng = gen::rng(2024);
    let shape = VShape::right_comb(2);
    for i in 0..20 {
        let mut entry = || random_scalar(&mut rng, Semiring::Rat);
        let rows = vec![vec![entry(), entry()], vec![entry(), entry()]];
        let m = DenseMat::with_shapes(rows, shape.clone(), shape.clone()).unwrap();
        let u = DenseVec::new(vec![entry(), entry()], shape.clone()).unwrap();
        for n in 0..=5 {
            let got = iterate(&m, n, &u, 1_000_000).map_err(|e| e.to_string())?;
            let want = mat_vec(&mat_pow(&m, n).unwrap(), &u).unwrap();
            ensure(got == want, || format!("matrix {i}, n = {n}: {got} vs {want}\n{m}"))?;
        }
    }
    Ok(())
}

fn suite(suite: Suite, semiring: Semiring, samples: usize, max_size: Option<usize>) -> Outcome {
    let report = run(suite, &SuiteConfig::new(semiring).samples(samples));
    ensure(report.ok(), || report.to_string())?;
    for p in &report.properties {
        if let Some(max) = max_size {
            ensure(p.max_size <= max, || format!("{} saw a term of size {}", p.property, p.max_size))?;
        }
    }
    let first = &report.properties[0];
    ensure(first.checked == samples, || format!("{} checked only {} samples", first.property, first.checked))
}

fn subject_reduction() -> Outcome {
    suite(Suite::SubjectReduction, Semiring::Rat, 1_000, Some(60))
}

fn confluence() -> Outcome {
    suite(Suite::Confluence, Semiring::Rat, 300, Some(60))
}

fn termination() -> Outcome {
    suite(Suite::Termination, Semiring::Rat, 300, Some(60))
}

fn introduction() -> Outcome {
    suite(Suite::Introduction, Semiring::Rat, 500, Some(60))
}

fn semimodule() -> Outcome {
    suite(Suite::Semimodule, Semiring::Rat, 200, None)?;
    suite(Suite::Semimodule, Semiring::Gauss, 200, None)
}

fn linearity() -> Outcome {
    suite(Suite::Linearity, Semiring::Rat, 200, None)
}

fn measure() -> Outcome {
    let report = run(Suite::Measure, &SuiteConfig::new(Semiring::Rat).samples(500));
    ensure(report.ok(), || report.to_string())?;
    let decompositions = report.property("measure.decomposition").map_or(0, |p| p.checked);
    ensure(decompositions >= 400, || format!("only {decompositions} decompositions"))
}

fn critical_pairs() -> Outcome {
    let report = critical_pair_scan();
    let pairs = report.critical_pairs().len();
    let linear = report.left_linear_count();
    ensure(pairs == 0 && linear == 25 && report.rules.len() == 25, || {
        format!("{pairs} critical pairs, {linear}/{} left-linear", report.rules.len())
    })
}

fn typing_oracle() -> Outcome {
    let cfg = GenConfig::new(Semiring::Rat);
    let mut oracle = Declarative::default();
    for seed in 0..2_000u64 {
        let s = open_term(&cfg, seed, 6);
        let t = if seed % 2 == 0 { s.term.clone() } else { mutate(seed, &s) };
        let ours = infer(&s.ctx, &t).ok().map(|r| r.prop);
        let theirs = oracle.type_of(&s.ctx.xi, &s.ctx.gamma, &t);
        ensure(ours == theirs, || format!("seed {seed}: {t}\nthreading {ours:?}, declarative {theirs:?}"))?;
        if seed % 200 == 199 {
            oracle = Declarative::default();
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "2x2 matrix example", limit: secs(1), run: matrix_example },
        Criterion { id: 2, name: "! counterexample", limit: secs(1), run: bang_counterexample },
        Criterion { id: 3, name: "observational equivalence example", limit: secs(1), run: observational_example },
        Criterion { id: 4, name: "matrix iterator vs powers", limit: secs(30), run: matrix_iterator },
        Criterion { id: 5, name: "subject reduction, 1000 terms", limit: secs(120), run: subject_reduction },
        Criterion { id: 6, name: "confluence, 300 terms x 20 strategies", limit: secs(120), run: confluence },
        Criterion { id: 7, name: "termination, standard and ultra", limit: secs(120), run: termination },
        Criterion { id: 8, name: "introduction shapes, 500 closed terms", limit: secs(120), run: introduction },
        Criterion { id: 9, name: "semimodule laws, Rat and GaussRat", limit: secs(120), run: semimodule },
        Criterion { id: 10, name: "linearity, 200 instances", limit: secs(120), run: linearity },
        Criterion { id: 11, name: "measure monotone and additive", limit: secs(120), run: measure },
        Criterion { id: 12, name: "critical pairs and left-linearity", limit: secs(10), run: critical_pairs },
        Criterion { id: 13, name: "threading vs declarative checker, 2000 terms", limit: secs(120), run: typing_oracle },
    ];
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let outcome = outcome.and_then(|()| ensure(took <= c.limit, || format!("took longer than {:?}", c.limit)));
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        println!("{status} {:>2} {} ({took:.2?}, limit {:?})", c.id, c.name, c.limit);
        if let Err(why) = outcome {
            failed += 1;
            for line in why.lines().take(20) {
                println!("     {line}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
