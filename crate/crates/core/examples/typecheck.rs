//! Type-checking closed and open terms, and reading the errors.
//!
//! cargo run --example typecheck

use ls2::text::parse_ctx;
use ls2::{infer, parse_term, Semiring, TypingCtx};

fn main() {
    let shared = TypingCtx::linear(parse_ctx("x:A, y:A").unwrap());
    let cases = [
        (TypingCtx::empty(), r"\x:1 & 1. da1(x; y:1. d1(y; <1.*, 2.*>)) + da2(x; z:1. d1(z; <3.*, 4.*>))"),
        (TypingCtx::empty(), r"/\X. \x:X. \f:!(X -o X). db(f; g:X -o X. g (g x))"),
        (shared.clone(), "(x * y) + (y * x)"),
        (shared.clone(), "(x + y) * (y + x)"),
        (shared.clone(), "<x, y>"),
        (shared, "<x * y, <>>"),
        (TypingCtx::empty(), r"\x:1. !x"),
    ];
    for (ctx, src) in cases {
        let t = parse_term(src, Semiring::Rat).unwrap();
        match infer(&ctx, &t) {
            Ok(r) => println!("{src}\n  : {}", r.prop),
            Err(e) => println!("{src}\n  error: {e}"),
        }
    }
}
