//! Normalizing terms, printing reduction traces, and comparing normal forms.
//!
//! cargo run --example normalize

use ls2::reduce::{equiv, normalize_random, replay};
use ls2::{normalize, parse_term, Mode, Semiring};

fn main() {
    let t = parse_term("d1(2.*; <1.*, 1.*>)", Semiring::Rat).unwrap();
    let nf = normalize(&t, 1_000).unwrap();
    print!("{}", nf.trace);
    println!("=> {}", nf.term);
    assert!(replay(&t, &nf.trace).is_ok());

    let sum = parse_term(r"((\x:1. x) + (\x:1. 2 . x)) 3.*", Semiring::Rat).unwrap();
    for seed in 0..3 {
        let r = normalize_random(&sum, seed, 1_000, Mode::Standard).unwrap();
        println!("strategy {seed}: {} steps, {}", r.trace.len(), r.term);
    }
    let ultra = normalize_random(&sum, 7, 1_000, Mode::Ultra).unwrap();
    println!("one ultra normal form: {}", ultra.term);

    let a = parse_term("1.* + 2.*", Semiring::Rat).unwrap();
    let b = parse_term("3.*", Semiring::Rat).unwrap();
    println!("1.* + 2.* == 3.* : {}", equiv(&a, &b, 1_000).unwrap());

    let g = parse_term("(1/2).* + (i).*", Semiring::Gauss).unwrap();
    println!("over Gaussian rationals: {}", normalize(&g, 100).unwrap().term);
}
