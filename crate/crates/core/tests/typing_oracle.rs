mod common;

use common::Declarative;
use ls2::gen::{mutate, open_term, GenConfig};
use ls2::text::parse_ctx;
use ls2::{infer, parse_prop, parse_term, Semiring, TypingCtx};

fn agree(oracle: &mut Declarative, ctx: &TypingCtx, src: &str) -> Option<String> {
    let t = parse_term(src, Semiring::Rat).unwrap();
    let ours = infer(ctx, &t).ok().map(|r| r.prop);
    let theirs = oracle.type_of(&ctx.xi, &ctx.gamma, &t);
    assert_eq!(ours, theirs, "{src}");
    ours.map(|a| a.to_string())
}

#[test]
fn hand_written_cases() {
    let mut o = Declarative::default();
    let ctx = TypingCtx::linear(parse_ctx("x:A, y:A").unwrap());
    assert_eq!(agree(&mut o, &ctx, "(x*y)+(y*x)").as_deref(), Some("A * A"));
    assert_eq!(agree(&mut o, &ctx, "(x+y)*(y+x)"), None);
    assert_eq!(agree(&mut o, &ctx, "<x, y>"), None);
    assert_eq!(agree(&mut o, &ctx, "<>").as_deref(), Some("top"));
    assert_eq!(agree(&mut o, &ctx, "<x * y, <>>").as_deref(), Some("(A * A) & top"));
    assert_eq!(agree(&mut o, &ctx, "x"), None);
    let ctx = TypingCtx::linear(parse_ctx("x:0, y:A, z:1").unwrap());
    assert_eq!(agree(&mut o, &ctx, "d0[B](x)").as_deref(), Some("B"));
    assert_eq!(agree(&mut o, &ctx, "d1(z; d0[B](x))").as_deref(), Some("B"));
    let ctx = TypingCtx::empty().with_nonlinear("w", parse_prop("1").unwrap());
    assert_eq!(agree(&mut o, &ctx, "w * w").as_deref(), Some("1 * 1"));
    assert_eq!(agree(&mut o, &ctx, "!(w + 2.*)").as_deref(), Some("!1"));
    let empty = TypingCtx::empty();
    assert_eq!(agree(&mut o, &empty, r"/\X. \x:X. x").as_deref(), Some("forall X. X -o X"));
    assert_eq!(agree(&mut o, &empty, r"\x:!1. db(x; y:1. y * y)").as_deref(), Some("!1 -o 1 * 1"));
    assert_eq!(agree(&mut o, &empty, r"\x:1. !x"), None);
}

#[test]
fn generated_and_mutated_terms() {
    let cfg = GenConfig::new(Semiring::Rat);
    let mut o = Declarative::default();
    let (mut accepted, mut rejected) = (0, 0);
    for seed in 0..300 {
        let s = open_term(&cfg, seed, 6);
        let t = if seed % 2 == 0 { s.term.clone() } else { mutate(seed, &s) };
        let ours = infer(&s.ctx, &t).ok().map(|r| r.prop);
        let theirs = o.type_of(&s.ctx.xi, &s.ctx.gamma, &t);
        assert_eq!(ours, theirs, "seed {seed}: {t}");
        if ours.is_some() {
            accepted += 1;
        } else {
            rejected += 1;
        }
    }
    assert!(accepted > 150 && rejected > 40, "{accepted} accepted, {rejected} rejected");
}
