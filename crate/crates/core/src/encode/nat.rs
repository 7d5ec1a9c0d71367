//! Church numerals and the matrix iterator.

use crate::reduce::normalize;
use crate::syntax::{Prop, Term};

use super::{matrix_to_term, term_to_vec, vec_to_term, DenseMat, DenseVec, EncodeError, Result};

fn endo(a: Prop) -> Prop {
    Prop::lolli(a.clone(), a)
}

/// `forall X. X -o !(X -o X) -o X`
pub fn nat_type() -> Prop {
    let x = Prop::var("X");
    Prop::forall("X", Prop::lolli(x.clone(), Prop::lolli(Prop::bang(endo(x.clone())), x)))
}

fn zero() -> Term {
    let x = Prop::var("X");
    Term::tlam(
        "X",
        Term::lam(
            "x",
            x.clone(),
            Term::lam(
                "f",
                Prop::bang(endo(x.clone())),
                Term::elim_bang(Term::var("f"), "f'", endo(x), Term::var("x")),
            ),
        ),
    )
}

/// `\n:Nat. /\X. \x:X. \f:!(X -o X). db(f; f'. f' (n [X] x !f'))`
pub fn succ_term() -> Term {
    let x = Prop::var("X");
    let unfolded = Term::apps(
        Term::tapp(Term::var("n"), x.clone()),
        [Term::var("x"), Term::bang(Term::var("f'"))],
    );
    let body = Term::lam(
        "x",
        x.clone(),
        Term::lam(
            "f",
            Prop::bang(endo(x.clone())),
            Term::elim_bang(Term::var("f"), "f'", endo(x), Term::app(Term::var("f'"), unfolded)),
        ),
    );
    Term::lam("n", nat_type(), Term::tlam("X", body))
}

/// The numeral `n`: zero for `0`, otherwise the normal form of `succ`
/// applied to the numeral `n - 1`.
pub fn church(n: u32) -> Term {
    let succ = succ_term();
    (0..n).fold(zero(), |k, _| {
        normalize(&Term::app(succ.clone(), k), 1_000_000)
            .expect("successor of a numeral normalizes")
            .term
    })
}

/// `\n:Nat. \m:!(A -o A). \v:A. n [A] v m`
pub fn miter_term(a: &Prop) -> Term {
    let body = Term::apps(Term::tapp(Term::var("n"), a.clone()), [Term::var("v"), Term::var("m")]);
    Term::lam(
        "n",
        nat_type(),
        Term::lam("m", Prop::bang(endo(a.clone())), Term::lam("v", a.clone(), body)),
    )
}

/// `M^n v`, computed by normalizing the iterator applied to the numeral,
/// the compiled matrix and the encoded vector.
pub fn iterate(m: &DenseMat, n: u32, v: &DenseVec, max_steps: usize) -> Result<DenseVec> {
    if m.domain() != m.codomain() {
        return Err(EncodeError::ShapeMismatch {
            expected: m.domain().to_prop(),
            found: m.codomain().to_prop(),
        });
    }
    v.check_shape(m.domain())?;
    let a = m.domain().to_prop();
    let t = Term::apps(
        miter_term(&a),
        [church(n), Term::bang(matrix_to_term(m)), vec_to_term(v)],
    );
    term_to_vec(&t, m.domain(), max_steps)
}
