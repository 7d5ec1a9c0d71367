//! Vectors as closed terms of types built from `1` and `&`.
//!
//! cargo run --example vectors

use ls2::encode::{is_v_type, term_to_vec, vec_to_term, zero_term, DenseVec, VShape};
use ls2::{parse_prop, parse_term, Semiring, Term};

fn main() {
    let sr = Semiring::Rat;
    let shape = is_v_type(&parse_prop("(1 & 1) & 1").unwrap()).unwrap();
    println!("shape {shape}, dimension {}", shape.dim());

    let v = DenseVec::new(vec![sr.from_u64(1), sr.from_u64(2), sr.from_u64(3)], shape.clone()).unwrap();
    let t = vec_to_term(&v);
    println!("{v} is written {t}");
    println!("zero vector: {}", zero_term(&shape, sr));

    let combo = Term::sum(Term::prod(sr.from_u64(2), t.clone()), parse_term("<<1.*, 0.*>, 5.*>", sr).unwrap());
    println!("2 . v + (1, 0, 5) = {}", term_to_vec(&combo, &shape, 10_000).unwrap());

    let right = VShape::right_comb(3);
    println!("the same entries on {right}: {}", vec_to_term(&DenseVec::new(v.entries().to_vec(), right.clone()).unwrap()));
}
