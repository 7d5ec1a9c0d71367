//! Vectors and matrices as proof terms.
//!
//! A proposition built from `1` and `&` only is a *vector type*; its closed
//! normal forms are trees of `a.*` leaves and correspond one-to-one with
//! vectors of scalars, left block above right block. A matrix becomes a
//! closed term of `A -o B` whose application to a vector term normalizes to
//! the encoded product.

mod nat;

use std::fmt;

use thiserror::Error;

use crate::reduce::{normalize, ReduceError};
use crate::semiring::{Scalar, Semiring, SemiringError};
use crate::syntax::{Prop, Term};
use crate::typing::{type_of_closed, TypeError};

pub use nat::{church, iterate, miter_term, nat_type, succ_term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: Prop, found: Prop },
    #[error("`{0}` is not a vector type")]
    NotAVectorType(Prop),
    #[error("empty vector or matrix")]
    Empty,
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("normal form `{0}` is not a vector")]
    NotAVector(Term),
    #[error("ill-typed: {0}")]
    IllTyped(#[from] TypeError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
}

pub type Result<T, E = EncodeError> = std::result::Result<T, E>;

/// The shape of a vector type: `1` or `A & B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VShape {
    Leaf,
    Node(Box<VShape>, Box<VShape>),
}

impl VShape {
    pub fn node(l: VShape, r: VShape) -> VShape {
        VShape::Node(Box::new(l), Box::new(r))
    }

    /// `1 & (1 & (... & 1))` with `n` leaves.
    pub fn right_comb(n: usize) -> VShape {
        assert!(n >= 1, "a vector shape has at least one leaf");
        if n == 1 {
            VShape::Leaf
        } else {
            VShape::node(VShape::Leaf, VShape::right_comb(n - 1))
        }
    }

    /// `((1 & 1) & ...) & 1` with `n` leaves.
    pub fn left_comb(n: usize) -> VShape {
        assert!(n >= 1, "a vector shape has at least one leaf");
        if n == 1 {
            VShape::Leaf
        } else {
            VShape::node(VShape::left_comb(n - 1), VShape::Leaf)
        }
    }

    pub fn from_prop(a: &Prop) -> Option<VShape> {
        match a {
            Prop::One => Some(VShape::Leaf),
            Prop::With(l, r) => Some(VShape::node(VShape::from_prop(l)?, VShape::from_prop(r)?)),
            _ => None,
        }
    }

    pub fn to_prop(&self) -> Prop {
        match self {
            VShape::Leaf => Prop::One,
            VShape::Node(l, r) => Prop::with(l.to_prop(), r.to_prop()),
        }
    }

    /// Number of leaves.
    pub fn dim(&self) -> usize {
        match self {
            VShape::Leaf => 1,
            VShape::Node(l, r) => l.dim() + r.dim(),
        }
    }

    /// Paths to the leaves, left to right; `false` steps into the left component.
    pub fn leaf_paths(&self) -> Vec<Vec<bool>> {
        match self {
            VShape::Leaf => vec![Vec::new()],
            VShape::Node(l, r) => {
                let mut out = Vec::new();
                for (side, s) in [(false, l), (true, r)] {
                    for mut p in s.leaf_paths() {
                        p.insert(0, side);
                        out.push(p);
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for VShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_prop().fmt(f)
    }
}

/// `Some(shape)` when `a` is built from `1` and `&` only.
pub fn is_v_type(a: &Prop) -> Option<VShape> {
    VShape::from_prop(a)
}

pub fn dim(shape: &VShape) -> usize {
    shape.dim()
}

fn same_semiring(entries: &[Scalar]) -> Result<Semiring> {
    let first = entries.first().ok_or(EncodeError::Empty)?.semiring();
    if let Some(b) = entries.iter().find(|b| b.semiring() != first) {
        return Err(SemiringError::MixedSemiring {
            left: first,
            right: b.semiring(),
        }
        .into());
    }
    Ok(first)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseVec {
    entries: Vec<Scalar>,
    shape: VShape,
}

impl DenseVec {
    pub fn new(entries: Vec<Scalar>, shape: VShape) -> Result<DenseVec> {
        same_semiring(&entries)?;
        if entries.len() != shape.dim() {
            return Err(EncodeError::DimMismatch {
                expected: shape.dim(),
                found: entries.len(),
            });
        }
        Ok(DenseVec { entries, shape })
    }

    /// A vector over the right comb of its length.
    pub fn from_entries(entries: Vec<Scalar>) -> Result<DenseVec> {
        let shape = VShape::right_comb(entries.len().max(1));
        DenseVec::new(entries, shape)
    }

    pub fn zeros(shape: VShape, semiring: Semiring) -> DenseVec {
        DenseVec {
            entries: vec![semiring.zero(); shape.dim()],
            shape,
        }
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn shape(&self) -> &VShape {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn semiring(&self) -> Semiring {
        self.entries[0].semiring()
    }

    pub fn add(&self, other: &DenseVec) -> Result<DenseVec> {
        self.check_shape(&other.shape)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_, _>>()?;
        Ok(DenseVec {
            entries,
            shape: self.shape.clone(),
        })
    }

    pub fn scale(&self, a: &Scalar) -> Result<DenseVec> {
        let entries = self.entries.iter().map(|b| a.try_mul(b)).collect::<Result<_, _>>()?;
        Ok(DenseVec {
            entries,
            shape: self.shape.clone(),
        })
    }

    fn check_shape(&self, shape: &VShape) -> Result<()> {
        if self.shape != *shape {
            return Err(EncodeError::ShapeMismatch {
                expected: shape.to_prop(),
                found: self.shape.to_prop(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for DenseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_vector(&self.entries))
    }
}

/// An `n × m` matrix, mapping vectors of `domain` (dimension `m`) to vectors
/// of `codomain` (dimension `n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMat {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
    domain: VShape,
    codomain: VShape,
}

impl DenseMat {
    /// From row-major rows, with right-comb shapes.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<DenseMat> {
        let n = rows.len();
        let m = rows.first().ok_or(EncodeError::Empty)?.len();
        DenseMat::with_shapes(rows, VShape::right_comb(m.max(1)), VShape::right_comb(n))
    }

    pub fn with_shapes(rows: Vec<Vec<Scalar>>, domain: VShape, codomain: VShape) -> Result<DenseMat> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(EncodeError::Empty);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(EncodeError::Ragged {
                row,
                expected: m,
                found: r.len(),
            });
        }
        for (shape, d) in [(&domain, m), (&codomain, n)] {
            if shape.dim() != d {
                return Err(EncodeError::DimMismatch {
                    expected: shape.dim(),
                    found: d,
                });
            }
        }
        let entries: Vec<Scalar> = rows.into_iter().flatten().collect();
        same_semiring(&entries)?;
        Ok(DenseMat {
            rows: n,
            cols: m,
            entries,
            domain,
            codomain,
        })
    }

    pub fn identity(shape: VShape, semiring: Semiring) -> DenseMat {
        let n = shape.dim();
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { semiring.one() } else { semiring.zero() })
            .collect();
        DenseMat {
            rows: n,
            cols: n,
            entries,
            domain: shape.clone(),
            codomain: shape,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn domain(&self) -> &VShape {
        &self.domain
    }

    pub fn codomain(&self) -> &VShape {
        &self.codomain
    }

    pub fn semiring(&self) -> Semiring {
        self.entries[0].semiring()
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.cols).map(<[Scalar]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> DenseVec {
        DenseVec {
            entries: (0..self.rows).map(|i| self.get(i, j).clone()).collect(),
            shape: self.codomain.clone(),
        }
    }

    pub fn mul(&self, other: &DenseMat) -> Result<DenseMat> {
        if self.cols != other.rows {
            return Err(EncodeError::DimMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let zero = self.semiring().zero();
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = zero.clone();
                for k in 0..self.cols {
                    acc = acc.try_add(&self.get(i, k).try_mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(DenseMat {
            rows: self.rows,
            cols: other.cols,
            entries,
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
        })
    }
}

impl fmt::Display for DenseMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_matrix(&self.row_vecs()))
    }
}

/// The exact product `M v`.
pub fn mat_vec(m: &DenseMat, v: &DenseVec) -> Result<DenseVec> {
    if m.cols != v.len() {
        return Err(EncodeError::DimMismatch {
            expected: m.cols,
            found: v.len(),
        });
    }
    let mut entries = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let mut acc = m.semiring().zero();
        for (j, b) in v.entries.iter().enumerate() {
            acc = acc.try_add(&m.get(i, j).try_mul(b)?)?;
        }
        entries.push(acc);
    }
    Ok(DenseVec {
        entries,
        shape: m.codomain.clone(),
    })
}

/// `M` multiplied by itself `n` times; the identity for `n = 0`.
pub fn mat_pow(m: &DenseMat, n: u32) -> Result<DenseMat> {
    if m.rows != m.cols {
        return Err(EncodeError::DimMismatch {
            expected: m.rows,
            found: m.cols,
        });
    }
    let mut acc = DenseMat::identity(m.domain.clone(), m.semiring());
    acc.codomain = m.codomain.clone();
    for _ in 0..n {
        acc = m.mul(&acc)?;
    }
    Ok(acc)
}

/// The zero vector of a shape: `0.*` at every leaf.
pub fn zero_term(shape: &VShape, semiring: Semiring) -> Term {
    match shape {
        VShape::Leaf => Term::Star(semiring.zero()),
        VShape::Node(l, r) => Term::pair(zero_term(l, semiring), zero_term(r, semiring)),
    }
}

fn build(shape: &VShape, entries: &mut std::slice::Iter<'_, Scalar>) -> Term {
    match shape {
        VShape::Leaf => Term::Star(entries.next().expect("shape and length agree").clone()),
        VShape::Node(l, r) => {
            let l = build(l, entries);
            Term::pair(l, build(r, entries))
        }
    }
}

/// The closed normal term encoding `v`.
pub fn vec_to_term(v: &DenseVec) -> Term {
    build(&v.shape, &mut v.entries.iter())
}

fn read(t: &Term, shape: &VShape, out: &mut Vec<Scalar>) -> Result<()> {
    match (t, shape) {
        (Term::Star(a), VShape::Leaf) => out.push(a.clone()),
        (Term::Pair(l, r), VShape::Node(sl, sr)) => {
            read(l, sl, out)?;
            read(r, sr, out)?;
        }
        _ => return Err(EncodeError::NotAVector(t.clone())),
    }
    Ok(())
}

/// Reads the vector a closed term of a vector type denotes, after
/// normalizing it.
pub fn term_to_vec(t: &Term, shape: &VShape, max_steps: usize) -> Result<DenseVec> {
    let ty = type_of_closed(t)?;
    if ty != shape.to_prop() {
        return Err(EncodeError::ShapeMismatch {
            expected: shape.to_prop(),
            found: ty,
        });
    }
    let n = normalize(t, max_steps)?.term;
    let mut entries = Vec::with_capacity(shape.dim());
    read(&n, shape, &mut entries)?;
    DenseVec::new(entries, shape.clone())
}

fn project(cur: Term, shape: &VShape, path: &[bool], depth: usize, body: &Term) -> Term {
    match (shape, path.split_first()) {
        (VShape::Leaf, _) => Term::elim_one(cur, body.clone()),
        (VShape::Node(l, r), Some((&right, rest))) => {
            let y = format!("y{depth}");
            let (sub, ty) = if right { (r, r.to_prop()) } else { (l, l.to_prop()) };
            let inner = project(Term::var(y.as_str()), sub, rest, depth + 1, body);
            if right {
                Term::elim_with2(cur, &y, ty, inner)
            } else {
                Term::elim_with1(cur, &y, ty, inner)
            }
        }
        (VShape::Node(..), None) => unreachable!("leaf paths end at leaves"),
    }
}

/// The closed term of `domain -o codomain` encoding `m`: the sum over the
/// columns `j` of "project the argument to leaf `j`, then scale column `j`".
pub fn matrix_to_term(m: &DenseMat) -> Term {
    let summands = m
        .domain
        .leaf_paths()
        .iter()
        .enumerate()
        .map(|(j, path)| project(Term::var("x"), &m.domain, path, 0, &vec_to_term(&m.column(j))))
        .reduce(Term::sum)
        .expect("at least one column");
    Term::lam("x", m.domain.to_prop(), summands)
}

/// Applies the compiled matrix to the encoded vector and reads the result.
pub fn apply_matrix(m: &DenseMat, v: &DenseVec, max_steps: usize) -> Result<DenseVec> {
    v.check_shape(&m.domain)?;
    term_to_vec(&Term::app(matrix_to_term(m), vec_to_term(v)), &m.codomain, max_steps)
}
