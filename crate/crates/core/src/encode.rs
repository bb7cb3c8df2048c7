//! Vectors and matrices as proof-terms.
//!
//! A vector type is built from `1` and `&` only. Its closed irreducible
//! inhabitants are nested pairs of scalar stars and correspond one-to-one to
//! tuples of scalars, read left to right. A matrix with `m` columns and `n`
//! rows is compiled to a closed term of `A ⊸ B` where `dim A = m` and
//! `dim B = n`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::reduce::{normalize, NormalizeOptions, ReduceError};
use crate::semiring::{Scalar, Semiring, SemiringError};
use crate::syntax::{Side, Term, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("`{0}` is not a vector type (only `I` and `&` are allowed)")]
    NotVectorType(Type),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("normal form `{term}` is not a vector of type `{ty}`")]
    Shape { term: String, ty: Type },
    #[error("malformed matrix: {0}")]
    Malformed(String),
    #[error(transparent)]
    Scalar(#[from] SemiringError),
}

pub fn is_vector_type(a: &Type) -> bool {
    match a {
        Type::One => true,
        Type::With(b, c) => is_vector_type(b) && is_vector_type(c),
        _ => false,
    }
}

fn require_vector(a: &Type) -> Result<(), EncodeError> {
    if is_vector_type(a) {
        Ok(())
    } else {
        Err(EncodeError::NotVectorType(a.clone()))
    }
}

/// Number of occurrences of `1` in a vector type.
pub fn dim(a: &Type) -> Result<usize, EncodeError> {
    require_vector(a)?;
    fn go(a: &Type) -> usize {
        match a {
            Type::With(b, c) => go(b) + go(c),
            _ => 1,
        }
    }
    Ok(go(a))
}

pub fn zero_term(a: &Type, semiring: Semiring) -> Result<Term, EncodeError> {
    let n = dim(a)?;
    vec_to_term(&vec![semiring.zero(); n], a)
}

/// The closed irreducible term of `a` whose entries are `v`.
pub fn vec_to_term(v: &[Scalar], a: &Type) -> Result<Term, EncodeError> {
    let n = dim(a)?;
    if n != v.len() {
        return Err(EncodeError::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    fn go(v: &[Scalar], a: &Type) -> Term {
        match a {
            Type::With(b, c) => {
                let k = dim(b).expect("checked");
                Term::pair(go(&v[..k], b), go(&v[k..], c))
            }
            _ => Term::star(v[0].clone()),
        }
    }
    Ok(go(v, a))
}

/// Read the entries of an irreducible closed term of a vector type.
pub fn read_vector(t: &Term, a: &Type) -> Result<Vec<Scalar>, EncodeError> {
    require_vector(a)?;
    fn go(t: &Term, a: &Type, out: &mut Vec<Scalar>) -> bool {
        match (t, a) {
            (Term::Star(s), Type::One) => {
                out.push(s.clone());
                true
            }
            (Term::Pair(l, r), Type::With(b, c)) => go(l, b, out) && go(r, c, out),
            _ => false,
        }
    }
    let mut out = Vec::new();
    if go(t, a, &mut out) {
        Ok(out)
    } else {
        Err(EncodeError::Shape {
            term: t.to_string(),
            ty: a.clone(),
        })
    }
}

/// Normalise `t` (leftmost-outermost, default fuel) and read its entries.
pub fn term_to_vec(t: &Term, a: &Type) -> Result<Vec<Scalar>, EncodeError> {
    term_to_vec_with(t, a, NormalizeOptions::default())
}

pub fn term_to_vec_with(
    t: &Term,
    a: &Type,
    opts: NormalizeOptions,
) -> Result<Vec<Scalar>, EncodeError> {
    require_vector(a)?;
    let nf = normalize(t, opts)?;
    read_vector(&nf.term, a)
}

/// A dense matrix; `entries[i][j]` is row `i`, column `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Scalar>>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Matrix {
    pub fn new(entries: Vec<Vec<Scalar>>) -> Result<Matrix, EncodeError> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(EncodeError::Malformed("empty matrix".into()));
        }
        if let Some(i) = entries.iter().position(|r| r.len() != cols) {
            return Err(EncodeError::Malformed(format!(
                "row {i} has {} entries, expected {cols}",
                entries[i].len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn identity(n: usize, semiring: Semiring) -> Matrix {
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { semiring.one() } else { semiring.zero() })
                    .collect()
            })
            .collect();
        Matrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, EncodeError> {
        if v.len() != self.cols {
            return Err(EncodeError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .map(|(a, b)| a.mul_same(b))
                    .reduce(|x, y| x.add_same(&y))
                    .expect("nonempty row")
            })
            .collect())
    }

    /// `self · other`.
    pub fn compose(&self, other: &Matrix) -> Result<Matrix, EncodeError> {
        if self.cols != other.rows {
            return Err(EncodeError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let cols: Vec<Vec<Scalar>> = (0..other.cols)
            .map(|j| self.apply(&other.column(j)))
            .collect::<Result<_, _>>()?;
        let entries = (0..self.rows)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Matrix::new(entries)
    }

    /// Parse the JSON form `{"rows":n,"cols":m,"entries":[["1","0"],...]}`
    /// with scalar literals in the codec of `semiring`.
    pub fn from_json(text: &str, semiring: Semiring) -> Result<Matrix, EncodeError> {
        let raw: RawMatrix =
            serde_json::from_str(text).map_err(|e| EncodeError::Malformed(e.to_string()))?;
        let entries = raw
            .entries
            .iter()
            .map(|r| r.iter().map(|s| semiring.parse(s)).collect())
            .collect::<Result<Vec<Vec<Scalar>>, _>>()?;
        let m = Matrix::new(entries)?;
        if m.rows != raw.rows || m.cols != raw.cols {
            return Err(EncodeError::Malformed(format!(
                "declared {}x{}, entries are {}x{}",
                raw.rows, raw.cols, m.rows, m.cols
            )));
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrices serialize")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, a) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Name of the variable bound along the projection chain of column `j`.
fn column_var(j: usize) -> String {
    const NAMES: [&str; 6] = ["y", "z", "w", "v", "u", "s"];
    match NAMES.get(j) {
        Some(n) => n.to_string(),
        None => format!("y{j}"),
    }
}

/// `λx:A. Σ_j π_j(x) ▷ let1(_, column j)`, where `π_j` projects `x` down to
/// the `j`-th leaf of `A` and the sum is nested like the `&` tree of `A`.
pub fn matrix_to_term(m: &Matrix, a: &Type, b: &Type) -> Result<Term, EncodeError> {
    let (da, db) = (dim(a)?, dim(b)?);
    if da != m.cols {
        return Err(EncodeError::DimensionMismatch {
            expected: da,
            found: m.cols,
        });
    }
    if db != m.rows {
        return Err(EncodeError::DimensionMismatch {
            expected: db,
            found: m.rows,
        });
    }
    let mut next = 0;
    let body = columns(m, a, b, a, &mut Vec::new(), &mut next)?;
    Ok(Term::lam("x", a.clone(), body))
}

/// Summands for the subtree of `root` at `path`, nested like that subtree.
fn columns(
    m: &Matrix,
    root: &Type,
    b: &Type,
    a: &Type,
    path: &mut Vec<Side>,
    next: &mut usize,
) -> Result<Term, EncodeError> {
    match a {
        Type::With(l, r) => {
            path.push(Side::Left);
            let left = columns(m, root, b, l, path, next);
            path.pop();
            path.push(Side::Right);
            let right = columns(m, root, b, r, path, next);
            path.pop();
            Ok(Term::sum(left?, right?))
        }
        _ => {
            let j = *next;
            *next += 1;
            Ok(chain(root, path, &column_var(j), vec_to_term(&m.column(j), b)?))
        }
    }
}

/// Project `x : a` along `path` down to a leaf of type `1`, then `let1` the
/// leaf into `col`. Every step rebinds the same name.
fn chain(a: &Type, path: &[Side], name: &str, col: Term) -> Term {
    fn go(a: &Type, path: &[Side], scrut: Term, name: &str, col: Term) -> Term {
        match (path.split_first(), a) {
            (Some((side, rest)), Type::With(l, r)) => {
                let sub = if *side == Side::Left { l } else { r };
                let body = go(sub, rest, Term::var(name), name, col);
                Term::proj(*side, scrut, name, (**sub).clone(), body)
            }
            _ => Term::let1(scrut, col),
        }
    }
    go(a, path, Term::var("x"), name, col)
}

/// Matrix of a closed term `t : A ⊸ B`, column `j` being the vector of
/// `t e_j`.
pub fn term_to_matrix(
    t: &Term,
    a: &Type,
    b: &Type,
    semiring: Semiring,
) -> Result<Matrix, EncodeError> {
    let da = dim(a)?;
    dim(b)?;
    let cols = (0..da)
        .map(|j| {
            let e: Vec<Scalar> = (0..da)
                .map(|i| if i == j { semiring.one() } else { semiring.zero() })
                .collect();
            term_to_vec(&Term::app(t.clone(), vec_to_term(&e, a)?), b)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows = cols[0].len();
    Matrix::new(
        (0..rows)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{crat, rat};
    use crate::syntax::{alpha_eq, parse_term, parse_type};
    use crate::typecheck::check_closed;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn nat(n: u64) -> Scalar {
        Semiring::Nat.from_int(n as i64)
    }

    fn nats(v: &[u64]) -> Vec<Scalar> {
        v.iter().map(|&n| nat(n)).collect()
    }

    #[test]
    fn vector_types() {
        assert!(is_vector_type(&ty("I & I")));
        assert!(is_vector_type(&ty("(I & I) & I")));
        assert!(!is_vector_type(&ty("I * I")));
        assert_eq!(dim(&ty("I")).unwrap(), 1);
        assert_eq!(dim(&ty("(I&I)&I")).unwrap(), 3);
        assert_eq!(dim(&ty("I&(I&I)")).unwrap(), 3);
        assert!(matches!(dim(&ty("I -o I")), Err(EncodeError::NotVectorType(_))));
    }

    #[test]
    fn zero_vectors() {
        assert_eq!(
            zero_term(&ty("I"), Semiring::Nat).unwrap(),
            Term::star(nat(0))
        );
        assert_eq!(
            zero_term(&ty("I&I"), Semiring::Nat).unwrap(),
            Term::pair(Term::star(nat(0)), Term::star(nat(0)))
        );
        assert_eq!(
            zero_term(&ty("I"), Semiring::Trivial).unwrap(),
            Term::star(Scalar::Unit)
        );
    }

    #[test]
    fn vectors_follow_the_with_tree() {
        let p = |s: &str| parse_term(s, Semiring::Nat).unwrap();
        assert_eq!(
            vec_to_term(&nats(&[2, 3]), &ty("I&I")).unwrap(),
            p("pair(star(2), star(3))")
        );
        assert_eq!(
            vec_to_term(&nats(&[2, 3, 5]), &ty("(I&I)&I")).unwrap(),
            p("pair(pair(star(2), star(3)), star(5))")
        );
        assert_eq!(vec_to_term(&nats(&[7]), &ty("I")).unwrap(), p("star(7)"));
        assert!(matches!(
            vec_to_term(&nats(&[1]), &ty("I&I")),
            Err(EncodeError::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn readback_normalises_first() {
        let p = |s: &str| parse_term(s, Semiring::Nat).unwrap();
        let qubit = ty("I&I");
        assert_eq!(
            term_to_vec(&p("pair(star(2),star(3)) <+> pair(star(4),star(5))"), &qubit).unwrap(),
            nats(&[6, 8])
        );
        assert_eq!(
            term_to_vec(&p("2 <.> pair(star(1),star(4))"), &qubit).unwrap(),
            nats(&[2, 8])
        );
        assert_eq!(term_to_vec(&p("star(0)"), &ty("I")).unwrap(), nats(&[0]));
    }

    #[test]
    fn two_by_two_template() {
        let m = Matrix::new(vec![nats(&[2, 5]), nats(&[3, 7])]).unwrap();
        let t = matrix_to_term(&m, &ty("I&I"), &ty("I&I")).unwrap();
        let expected = parse_term(
            "\\x:I&I. fst(x, y:I. let1(y, pair(star(2), star(3)))) <+> snd(x, z:I. let1(z, pair(star(5), star(7))))",
            Semiring::Nat,
        )
        .unwrap();
        assert!(alpha_eq(&t, &expected), "{t}");
    }

    #[test]
    fn identity_one_by_one() {
        let m = Matrix::identity(1, Semiring::Nat);
        let t = matrix_to_term(&m, &Type::One, &Type::One).unwrap();
        let expected = parse_term("\\x:I. let1(x, star(1))", Semiring::Nat).unwrap();
        assert_eq!(t, expected);
        let applied = Term::app(t, Term::star(nat(7)));
        let nf = normalize(&applied, NormalizeOptions::default()).unwrap();
        assert_eq!(nf.term, Term::star(nat(7)));
        // beta, then let1, then the scalar product of stars
        assert_eq!(nf.steps, 3);
    }

    #[test]
    fn hadamard_compiles_to_the_example_term() {
        let one = crat((1, 1), (0, 1));
        let minus = crat((-1, 1), (0, 1));
        let m = Matrix::new(vec![vec![one.clone(), one.clone()], vec![one, minus]]).unwrap();
        let q = ty("I&I");
        let t = matrix_to_term(&m, &q, &q).unwrap();
        let h = parse_term(
            "\\x:I&I. fst(x, y:I. let1(y, pair(star((1,0)), star((1,0))))) <+> snd(x, z:I. let1(z, pair(star((1,0)), star((-1,0)))))",
            Semiring::Crat,
        )
        .unwrap();
        assert!(alpha_eq(&t, &h));
        assert_eq!(term_to_matrix(&h, &q, &q, Semiring::Crat).unwrap(), m);
    }

    #[test]
    fn identity_term_extracts_identity() {
        let id = parse_term("\\x:I&I. x", Semiring::Rat).unwrap();
        let q = ty("I&I");
        assert_eq!(
            term_to_matrix(&id, &q, &q, Semiring::Rat).unwrap(),
            Matrix::identity(2, Semiring::Rat)
        );
    }

    #[test]
    fn non_square_shapes_typecheck_and_round_trip() {
        let a = ty("(I&I)&I");
        let b = ty("I&(I&I)&I");
        let entries = (0..4)
            .map(|i| (0..3).map(|j| rat(i * 3 + j - 4, 3)).collect())
            .collect();
        let m = Matrix::new(entries).unwrap();
        let t = matrix_to_term(&m, &a, &b).unwrap();
        check_closed(&t, &Type::lolli(a.clone(), b.clone())).unwrap();
        assert_eq!(term_to_matrix(&t, &a, &b, Semiring::Rat).unwrap(), m);
    }

    #[test]
    fn json_codec() {
        let m = Matrix::new(vec![vec![rat(1, 2), rat(-3, 1)]]).unwrap();
        let text = m.to_json();
        assert_eq!(text, r#"{"rows":1,"cols":2,"entries":[["1/2","-3"]]}"#);
        assert_eq!(Matrix::from_json(&text, Semiring::Rat).unwrap(), m);
        assert!(Matrix::from_json(r#"{"rows":2,"cols":2,"entries":[["1","2"]]}"#, Semiring::Nat).is_err());
        assert!(Matrix::from_json(r#"{"rows":1,"cols":1,"entries":[["-1"]]}"#, Semiring::Nat).is_err());
    }

    #[test]
    fn composition_matches_matrix_product() {
        let s = Matrix::new(vec![nats(&[1, 2]), nats(&[0, 3])]).unwrap();
        let t = Matrix::new(vec![nats(&[4, 1]), nats(&[2, 2])]).unwrap();
        let q = ty("I&I");
        let (ts, tt) = (
            matrix_to_term(&s, &q, &q).unwrap(),
            matrix_to_term(&t, &q, &q).unwrap(),
        );
        let composed = Term::lam(
            "x",
            q.clone(),
            Term::app(tt, Term::app(ts, Term::var("x"))),
        );
        assert_eq!(
            term_to_matrix(&composed, &q, &q, Semiring::Nat).unwrap(),
            t.compose(&s).unwrap()
        );
    }
}
