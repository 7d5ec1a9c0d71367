//! Compiling matrices to terms and applying them by normalization.
//!
//! cargo run --example matrices

use ls2::encode::{apply_matrix, mat_vec, matrix_to_term, DenseMat, DenseVec, VShape};
use ls2::typing::type_of_closed;
use ls2::Semiring;

fn main() {
    let n = |k| Semiring::Rat.from_u64(k);
    let m = DenseMat::from_rows(vec![vec![n(1), n(3)], vec![n(2), n(4)]]).unwrap();
    let t = matrix_to_term(&m);
    println!("{m}\ncompiles to\n  {t}\n  : {}", type_of_closed(&t).unwrap());

    let v = DenseVec::from_entries(vec![n(5), n(6)]).unwrap();
    println!("by normalization: {}", apply_matrix(&m, &v, 10_000).unwrap());
    println!("dense product:    {}", mat_vec(&m, &v).unwrap());

    // a 2x3 matrix from a left-nested domain to a right-nested codomain
    let rect = DenseMat::with_shapes(
        vec![vec![n(1), n(0), n(2)], vec![n(0), n(1), n(1)]],
        VShape::left_comb(3),
        VShape::right_comb(2),
    )
    .unwrap();
    let u = DenseVec::new(vec![n(1), n(2), n(3)], VShape::left_comb(3)).unwrap();
    println!("{} : {}", matrix_to_term(&rect), type_of_closed(&matrix_to_term(&rect)).unwrap());
    println!("applied to {u}: {}", apply_matrix(&rect, &u, 10_000).unwrap());
}
