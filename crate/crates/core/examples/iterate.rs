//! Church numerals and iterating a matrix with the polymorphic iterator.
//!
//! cargo run --example iterate

use ls2::encode::{church, iterate, mat_pow, mat_vec, nat_type, DenseMat, DenseVec};
use ls2::typing::type_of_closed;
use ls2::Semiring;

fn main() {
    println!("Nat = {}", nat_type());
    println!("2 = {}", church(2));
    assert_eq!(type_of_closed(&church(3)).unwrap(), nat_type());

    let n = |k| Semiring::Rat.from_u64(k);
    let fib = DenseMat::from_rows(vec![vec![n(1), n(1)], vec![n(1), n(0)]]).unwrap();
    let start = DenseVec::from_entries(vec![n(1), n(0)]).unwrap();
    for k in 0..=6 {
        let by_terms = iterate(&fib, k, &start, 1_000_000).unwrap();
        let dense = mat_vec(&mat_pow(&fib, k).unwrap(), &start).unwrap();
        assert_eq!(by_terms, dense);
        println!("M^{k} (1, 0) = {by_terms}");
    }
}
