//! Seeded generation of well-typed terms.
//!
//! cargo run --example generate -- [seed]

use ls2::gen::{closed_term, open_term, GenConfig};
use ls2::{infer, Semiring};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let cfg = GenConfig::new(Semiring::Rat).max_size(30);
    for s in seed..seed + 3 {
        let c = closed_term(&cfg, s);
        println!("closed  {} : {}", c.term, c.ty);
        let o = open_term(&cfg, s, 3);
        let show = |h: &[(String, ls2::Prop)]| h.iter().map(|(x, a)| format!("{x}:{a}")).collect::<Vec<_>>().join(", ");
        println!("open    {}; {} ⊢ {} : {}", show(&o.ctx.xi), show(&o.ctx.gamma), o.term, o.ty);
        assert_eq!(infer(&o.ctx, &o.term).unwrap().prop, o.ty);
    }
}
