//! Checking and running the `.ls2` files under `programs/`.
//!
//! cargo run --example programs

use std::fs;

use ls2::text::parse_file;
use ls2::{infer, normalize, Semiring, TypingCtx};

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/programs");
    let mut paths: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    for path in paths {
        let src = fs::read_to_string(&path).unwrap();
        let program = parse_file(&src, Semiring::Rat).unwrap_or_else(|e| panic!("{}:{e}", path.display()));
        println!("{}", path.file_name().unwrap().to_string_lossy());
        for (name, t, _) in program.terms() {
            let ty = infer(&TypingCtx::empty(), t).unwrap().prop;
            let nf = normalize(t, 100_000).unwrap().term;
            println!("  {name} : {ty}\n    = {nf}");
        }
    }
}
