use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::semiring::Semiring;
use crate::syntax::{Binder, Hint, Var};

fn rat(n: u64) -> Scalar {
    Semiring::Rat.from_u64(n)
}

fn t(src: &str) -> Term {
    parse_term(src, Semiring::Rat).unwrap_or_else(|e| panic!("{src}: {e}"))
}

fn p(src: &str) -> Prop {
    parse_prop(src).unwrap_or_else(|e| panic!("{src}: {e}"))
}

#[test]
fn sum_of_stars() {
    assert_eq!(t("1.* + 2.*"), Term::sum(Term::Star(rat(1)), Term::Star(rat(2))));
    assert_eq!(t("1.⋆ ⊞ 2.⋆"), t("1.* + 2.*"));
}

#[test]
fn projection_example() {
    let got = t(r"\x:1&1. da1(x; y:1. d1(y; <2.*, 3.*>))");
    let one = Prop::One;
    let want = Term::lam(
        "x",
        Prop::with(one.clone(), one.clone()),
        Term::elim_with1(
            Term::var("x"),
            "y",
            one,
            Term::elim_one(Term::var("y"), Term::pair(Term::Star(rat(2)), Term::Star(rat(3)))),
        ),
    );
    assert_eq!(got, want);
}

#[test]
fn nat_proposition() {
    let x = Prop::var("X");
    let nat = Prop::forall(
        "X",
        Prop::lolli(x.clone(), Prop::lolli(Prop::bang(Prop::lolli(x.clone(), x)), Prop::var("X"))),
    );
    assert_eq!(p("forall X. X -o !(X -o X) -o X"), nat);
    assert_eq!(p("∀X. X ⊸ !(X ⊸ X) ⊸ X"), nat);
}

#[test]
fn printing_examples() {
    assert_eq!(print_prop(&p("(1 & 1) -o 1")), "1 & 1 -o 1");
    assert_eq!(p("1 & 1 -o 1"), p("(1 & 1) -o 1"));
    assert_eq!(print_term(&Term::Star(Semiring::Rat.parse("1/2").unwrap())), "(1/2).*");
    // a Λ whose binder clashes with a free type variable gets a fresh name
    let clash = Term::tlam("X", Term::lam("x", Prop::var("X"), Term::var("x")));
    let clash = Term::tapp(clash, Prop::var("X"));
    let clash = Term::app(clash, Term::elim_zero(Prop::var("X"), Term::var("z")));
    let printed = print_term(&clash);
    assert!(printed.starts_with(r"(/\X1. \x:X1. x) [X]"), "{printed}");
    assert_eq!(t(&printed), clash);
}

#[test]
fn precedence() {
    // application binds tighter than `.`, which binds tighter than `*` and `+`
    let f = || Term::var("f");
    let x = || Term::var("x");
    assert_eq!(t("2 . f x"), Term::prod(rat(2), Term::app(f(), x())));
    assert_eq!(t("2 . x * y + z"), t("((2 . x) * y) + z"));
    assert_eq!(t("x + y + z"), Term::sum(Term::sum(x(), Term::var("y")), Term::var("z")));
    assert_eq!(t("f 2.* x"), Term::apps(f(), [Term::Star(rat(2)), x()]));
    assert_eq!(t(r"f \x:1. x + y"), t(r"f (\x:1. (x + y))"));
    assert_eq!(p("A -o B -o C"), p("A -o (B -o C)"));
    assert_eq!(p("!A * B"), p("(!A) * B"));
    assert_eq!(p("A * B * C"), p("(A * B) * C"));
    assert!(parse_prop("A * B & C").is_err());
}

#[test]
fn scalar_literals() {
    assert_eq!(t("(1/2) . x"), Term::prod(Semiring::Rat.parse("1/2").unwrap(), Term::var("x")));
    assert_eq!(t("(-3).*"), Term::Star(Semiring::Rat.parse("-3").unwrap()));
    let g = parse_term("(2+3i).* + (i).*", Semiring::Gauss).unwrap();
    assert_eq!(g.to_string(), "(2+3i).* + (i).*");
    assert_eq!(parse_term("u.*", Semiring::Unit).unwrap(), Term::Star(Scalar::Unit));
    assert!(parse_term("(1/2).*", Semiring::Nat).is_err());
    assert_eq!(t("2 • 3.⋆"), Term::prod(rat(2), Term::Star(rat(3))));
}

#[test]
fn keyword_forms() {
    let all = r"dp(inl[1](x); a:1. d1(a; <>); b:1. db(!y; c:1. d0[1](z)))";
    let got = t(all);
    assert_eq!(t(&got.to_string()), got);
    let dx = t("dx(x * y; a:A, b:B. b * a)");
    assert!(matches!(dx, Term::ElimTensor(..)));
    assert_eq!(dx.to_string(), "dx(x * y; a:A, b:B. b * a)");
    assert!(parse_term("dx(p; a:A, a:B. a)", Semiring::Rat).is_err());
    assert_eq!(t("⟨⟩"), Term::Unit);
    assert_eq!(t("δ₁(x; 2.*)"), t("d1(x; 2.*)"));
    assert_eq!(t("inlx"), Term::var("inlx"));
}

#[test]
fn errors_have_spans() {
    let e = parse_term("\\x:1.\n  x +", Semiring::Rat).unwrap_err();
    assert_eq!((e.span.line, e.span.column), (2, 6));
    assert_eq!(e.found, "end of input");
    let e = parse_prop("1 -o").unwrap_err();
    assert_eq!(e.expected, vec!["proposition".to_string()]);
    assert!(parse_term("x)", Semiring::Rat).is_err());
    assert!(parse_term("def", Semiring::Rat).is_err());
}

#[test]
fn files_expand_definitions() {
    let src = r"
        # a tiny program
        defprop V = 1 & 1
        def swap = \v:V. <da2(v; b:1. b), da1(v; a:1. a)>
        def e = <5.*, 6.*>
        main = swap e
    ";
    let prog = parse_file(src, Semiring::Rat).unwrap();
    assert_eq!(prog.items.len(), 4);
    let main = prog.main().unwrap();
    assert!(main.free_vars().is_empty());
    assert!(main.free_type_vars().is_empty());
    assert_eq!(prog.items[1].span.line, 4);
    let shadow = parse_file("def f = 1.*\nmain = \\f:1. f", Semiring::Rat).unwrap();
    assert_eq!(shadow.main().unwrap(), &t(r"\f:1. f"));
    assert!(parse_file("main = 1.*\nmain = 2.*", Semiring::Rat).is_err());
    assert!(parse_file("def X = 1.*", Semiring::Rat).is_err());
}

#[test]
fn vectors_and_contexts() {
    assert_eq!(parse_vector("[1, 2/3, -4]", Semiring::Rat).unwrap().len(), 3);
    assert_eq!(parse_matrix("[[1,2],[3,4]]", Semiring::Rat).unwrap()[1][0], rat(3));
    assert!(parse_matrix("[[1,2],[3]]", Semiring::Rat).is_err());
    let g = parse_vector("[2+3i, -i]", Semiring::Gauss).unwrap();
    assert_eq!(print_vector(&g), "[2+3i, -i]");
    let ctx = parse_ctx("x:A, y:A -o 1").unwrap();
    assert_eq!(ctx[1], ("y".to_string(), p("A -o 1")));
    assert!(parse_ctx("").unwrap().is_empty());
}

// ---------------------------------------------------------------------------
// Random round trip

fn random_scalar(rng: &mut ChaCha8Rng, s: Semiring) -> Scalar {
    let lit = match (s, rng.gen_range(0..4)) {
        (Semiring::Unit, _) => "u".to_string(),
        (Semiring::Nat, _) | (_, 0) => rng.gen_range(0..30).to_string(),
        (Semiring::Rat, 1) => format!("-{}", rng.gen_range(1..9)),
        (Semiring::Rat, _) => format!("{}/{}", rng.gen_range(0..9), rng.gen_range(1..9)),
        (_, 1) => "-i".to_string(),
        (_, _) => format!("{}-{}/{}i", rng.gen_range(0..5), rng.gen_range(1..5), rng.gen_range(1..5)),
    };
    s.parse(&lit).unwrap()
}

const HINTS: [&str; 6] = ["x", "y", "x1", "u", "Bad", ""];

fn hint(rng: &mut ChaCha8Rng) -> Hint {
    Hint::new(HINTS[rng.gen_range(0..HINTS.len())])
}

fn random_prop(rng: &mut ChaCha8Rng, depth: usize, tvars: usize) -> Prop {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..5) {
            0 => Prop::One,
            1 => Prop::Top,
            2 => Prop::Zero,
            3 if tvars > 0 => Prop::Var(Var::Bound(rng.gen_range(0..tvars))),
            _ => Prop::var(["A", "X", "X1"][rng.gen_range(0..3)]),
        };
    }
    let pick = rng.gen_range(0..6);
    let mut sub = || Box::new(random_prop(rng, depth - 1, tvars));
    match pick {
        0 => Prop::Lolli(sub(), sub()),
        1 => Prop::Tensor(sub(), sub()),
        2 => Prop::With(sub(), sub()),
        3 => Prop::Plus(sub(), sub()),
        4 => Prop::Bang(sub()),
        _ => {
            let h = Hint::new(["X", "Y", "z"][rng.gen_range(0..3)]);
            Prop::Forall(h, Box::new(random_prop(rng, depth - 1, tvars + 1)))
        }
    }
}

/// Any scoped term, typed or not.
fn random_term(rng: &mut ChaCha8Rng, depth: usize, vars: usize, tvars: usize, s: Semiring) -> Term {
    let ty = |rng: &mut ChaCha8Rng| random_prop(rng, 2, tvars);
    let binder = |rng: &mut ChaCha8Rng| Binder {
        hint: hint(rng),
        ty: random_prop(rng, 2, tvars),
    };
    if depth == 0 || rng.gen_bool(0.15) {
        return match rng.gen_range(0..4) {
            0 => Term::Star(random_scalar(rng, s)),
            1 => Term::Unit,
            2 if vars > 0 => Term::Var(Var::Bound(rng.gen_range(0..vars))),
            _ => Term::var(["x", "y", "x1", "f"][rng.gen_range(0..4)]),
        };
    }
    let d = depth - 1;
    let sub = |rng: &mut ChaCha8Rng, extra: usize| Box::new(random_term(rng, d, vars + extra, tvars, s));
    match rng.gen_range(0..20) {
        0 => Term::Sum(sub(rng, 0), sub(rng, 0)),
        1 => Term::Prod(random_scalar(rng, s), sub(rng, 0)),
        2 => Term::ElimOne(sub(rng, 0), sub(rng, 0)),
        3 => Term::Lam(binder(rng), sub(rng, 1)),
        4 => Term::App(sub(rng, 0), sub(rng, 0)),
        5 => Term::TensorI(sub(rng, 0), sub(rng, 0)),
        6 => Term::ElimTensor(sub(rng, 0), binder(rng), binder(rng), sub(rng, 2)),
        7 => Term::ElimZero(ty(rng), sub(rng, 0)),
        8 => Term::Pair(sub(rng, 0), sub(rng, 0)),
        9 => Term::ElimWith1(sub(rng, 0), binder(rng), sub(rng, 1)),
        10 => Term::ElimWith2(sub(rng, 0), binder(rng), sub(rng, 1)),
        11 => Term::Inl(sub(rng, 0), ty(rng)),
        12 => Term::Inr(sub(rng, 0), ty(rng)),
        13 => Term::ElimPlus(sub(rng, 0), binder(rng), sub(rng, 1), binder(rng), sub(rng, 1)),
        14 => Term::BangI(sub(rng, 0)),
        15 => Term::ElimBang(sub(rng, 0), binder(rng), sub(rng, 1)),
        16 => Term::TLam(Hint::new(["X", "Y", "a"][rng.gen_range(0..3)]), Box::new(random_term(rng, d, vars, tvars + 1, s))),
        17 => Term::TApp(sub(rng, 0), ty(rng)),
        18 => Term::Star(random_scalar(rng, s)),
        _ => Term::App(sub(rng, 0), sub(rng, 0)),
    }
}

#[test]
fn random_asts_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let semirings = crate::semiring::builtin_semirings();
    for i in 0..10_000 {
        let s = semirings[i % semirings.len()];
        let term = random_term(&mut rng, 6, 0, 0, s);
        let printed = print_term(&term);
        let back = parse_term(&printed, s).unwrap_or_else(|e| panic!("#{i} `{printed}`: {e}"));
        assert_eq!(back, term, "#{i} `{printed}`");
        let prop = random_prop(&mut rng, 5, 0);
        let printed = print_prop(&prop);
        assert_eq!(parse_prop(&printed).unwrap(), prop, "#{i} `{printed}`");
    }
}
