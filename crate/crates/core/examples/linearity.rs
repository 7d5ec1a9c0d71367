//! Linearity of `!`-free terms, where it breaks with `!`, decompositions,
//! and sampled observational equivalence.
//!
//! cargo run --example linearity

use ls2::linearity::{check_linearity, decompose, obs_equiv_sample, Observation};
use ls2::{normalize, parse_prop, parse_term, Prop, Semiring};

fn main() {
    let sr = Semiring::Rat;
    let t = |s: &str| parse_term(s, sr).unwrap();
    let p = |s: &str| parse_prop(s).unwrap();

    let body = t("da1(x; y:1. d1(y; <1.*, 2.*>)) + da2(x; z:1. d1(z; <3.*, 4.*>))");
    let report = check_linearity(&body, "x", &p("1 & 1"), &p("1 & 1"), &t("<1.*, 0.*>"), &t("<2.*, 7.*>"), &sr.from_u64(3), 10_000)
        .unwrap();
    println!("additivity {} = {}", report.additivity.left, report.additivity.right);
    println!("homogeneity {} = {}", report.homogeneity.left, report.homogeneity.right);

    let f = r"(\x:!1. db(x; y:1. 2.*))";
    let inside = normalize(&t(&format!("{f} (!(1.*) + !(3.*))")), 1_000).unwrap().term;
    let outside = normalize(&t(&format!("({f} (!(1.*))) + ({f} (!(3.*)))")), 1_000).unwrap().term;
    println!("with !: f(1 + 3) = {inside} but f(1) + f(3) = {outside}");
    println!("check_linearity refuses it: {}", check_linearity(&t(&format!("{f} x")), "x", &p("!1"), &Prop::One, &t("!(1.*)"), &t("!(3.*)"), &sr.one(), 1_000).unwrap_err());

    let d = decompose(&t("da1(x; y:1. d1(y; 2.*))"), "x", &p("1 & 1")).unwrap();
    println!("context {} around head {} ({:?}) of type {}", d.context, d.head, d.kind, d.cut_type);

    let t1 = t(r"\y:1 -o 1. y 3.*");
    let t2 = t(r"\y:1 -o 1. (y 1.*) + (y 2.*)");
    let contexts = [
        Observation { context: t(r"_ (\z:1. z)"), result_type: Prop::One },
        Observation { context: t(r"_ (\z:1. 5 . z)"), result_type: Prop::One },
        Observation { context: t(r"_ (\z:1. d1(z; 1.*))"), result_type: Prop::One },
    ];
    let obs = obs_equiv_sample(&t1, &t2, &p("(1 -o 1) -o 1"), &contexts, 1_000).unwrap();
    for v in &obs.verdicts {
        println!("observed {} and {}", v.left, v.right);
    }
    println!("refuted: {}; same normal form: {}", obs.refuted(), normalize(&t1, 100).unwrap().term == normalize(&t2, 100).unwrap().term);
}
