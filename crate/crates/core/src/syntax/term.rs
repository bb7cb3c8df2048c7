use std::collections::BTreeSet;

use crate::semiring::Scalar;
use crate::syntax::Type;

pub type Name = String;

/// Which component a projection or injection refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// Proof-terms. Binders carry their type annotation; injections carry the
/// summand they do not witness so that typing stays syntax-directed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Sum(Box<Term>, Box<Term>),
    Smul(Scalar, Box<Term>),
    Star(Scalar),
    ElimOne(Box<Term>, Box<Term>),
    Lam {
        var: Name,
        ty: Type,
        body: Box<Term>,
    },
    App(Box<Term>, Box<Term>),
    Tens(Box<Term>, Box<Term>),
    ElimTens {
        scrut: Box<Term>,
        left: Name,
        left_ty: Type,
        right: Name,
        right_ty: Type,
        body: Box<Term>,
    },
    Unit,
    /// `abort(t)`. The result type is optional in the surface syntax
    /// (`abort[C](t)`); without it the term can only be checked, not inferred.
    ElimZero {
        scrut: Box<Term>,
        ty: Option<Type>,
    },
    Pair(Box<Term>, Box<Term>),
    ElimWith {
        side: Side,
        scrut: Box<Term>,
        var: Name,
        ty: Type,
        body: Box<Term>,
    },
    Inj {
        side: Side,
        arg: Box<Term>,
        other: Type,
    },
    ElimPlus {
        scrut: Box<Term>,
        left: Name,
        left_ty: Type,
        left_body: Box<Term>,
        right: Name,
        right_ty: Type,
        right_body: Box<Term>,
    },
    Bang(Box<Term>),
    ElimBang {
        scrut: Box<Term>,
        var: Name,
        ty: Type,
        body: Box<Term>,
    },
}

impl Term {
    pub fn var(x: impl Into<Name>) -> Term {
        Term::Var(x.into())
    }

    pub fn sum(t: Term, u: Term) -> Term {
        Term::Sum(Box::new(t), Box::new(u))
    }

    pub fn smul(a: Scalar, t: Term) -> Term {
        Term::Smul(a, Box::new(t))
    }

    pub fn star(a: Scalar) -> Term {
        Term::Star(a)
    }

    pub fn let1(t: Term, u: Term) -> Term {
        Term::ElimOne(Box::new(t), Box::new(u))
    }

    pub fn lam(x: impl Into<Name>, ty: Type, body: Term) -> Term {
        Term::Lam {
            var: x.into(),
            ty,
            body: Box::new(body),
        }
    }

    pub fn app(t: Term, u: Term) -> Term {
        Term::App(Box::new(t), Box::new(u))
    }

    pub fn tens(t: Term, u: Term) -> Term {
        Term::Tens(Box::new(t), Box::new(u))
    }

    pub fn lettens(
        t: Term,
        x: impl Into<Name>,
        a: Type,
        y: impl Into<Name>,
        b: Type,
        body: Term,
    ) -> Term {
        Term::ElimTens {
            scrut: Box::new(t),
            left: x.into(),
            left_ty: a,
            right: y.into(),
            right_ty: b,
            body: Box::new(body),
        }
    }

    pub fn abort(t: Term, ty: Option<Type>) -> Term {
        Term::ElimZero {
            scrut: Box::new(t),
            ty,
        }
    }

    pub fn pair(t: Term, u: Term) -> Term {
        Term::Pair(Box::new(t), Box::new(u))
    }

    pub fn proj(side: Side, t: Term, x: impl Into<Name>, ty: Type, body: Term) -> Term {
        Term::ElimWith {
            side,
            scrut: Box::new(t),
            var: x.into(),
            ty,
            body: Box::new(body),
        }
    }

    pub fn fst(t: Term, x: impl Into<Name>, ty: Type, body: Term) -> Term {
        Term::proj(Side::Left, t, x, ty, body)
    }

    pub fn snd(t: Term, x: impl Into<Name>, ty: Type, body: Term) -> Term {
        Term::proj(Side::Right, t, x, ty, body)
    }

    pub fn inj(side: Side, t: Term, other: Type) -> Term {
        Term::Inj {
            side,
            arg: Box::new(t),
            other,
        }
    }

    pub fn inl(t: Term, other: Type) -> Term {
        Term::inj(Side::Left, t, other)
    }

    pub fn inr(t: Term, other: Type) -> Term {
        Term::inj(Side::Right, t, other)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn case(
        t: Term,
        x: impl Into<Name>,
        a: Type,
        u: Term,
        y: impl Into<Name>,
        b: Type,
        v: Term,
    ) -> Term {
        Term::ElimPlus {
            scrut: Box::new(t),
            left: x.into(),
            left_ty: a,
            left_body: Box::new(u),
            right: y.into(),
            right_ty: b,
            right_body: Box::new(v),
        }
    }

    pub fn bang(t: Term) -> Term {
        Term::Bang(Box::new(t))
    }

    pub fn letbang(t: Term, x: impl Into<Name>, ty: Type, body: Term) -> Term {
        Term::ElimBang {
            scrut: Box::new(t),
            var: x.into(),
            ty,
            body: Box::new(body),
        }
    }

    /// Immediate subterms in child-index order. Paths into terms use these
    /// indices.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Star(_) | Term::Unit => vec![],
            Term::Smul(_, t)
            | Term::Lam { body: t, .. }
            | Term::ElimZero { scrut: t, .. }
            | Term::Inj { arg: t, .. }
            | Term::Bang(t) => vec![t],
            Term::Sum(t, u)
            | Term::ElimOne(t, u)
            | Term::App(t, u)
            | Term::Tens(t, u)
            | Term::Pair(t, u)
            | Term::ElimTens {
                scrut: t, body: u, ..
            }
            | Term::ElimWith {
                scrut: t, body: u, ..
            }
            | Term::ElimBang {
                scrut: t, body: u, ..
            } => vec![t, u],
            Term::ElimPlus {
                scrut,
                left_body,
                right_body,
                ..
            } => vec![scrut, left_body, right_body],
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Term> {
        match self {
            Term::Var(_) | Term::Star(_) | Term::Unit => vec![],
            Term::Smul(_, t)
            | Term::Lam { body: t, .. }
            | Term::ElimZero { scrut: t, .. }
            | Term::Inj { arg: t, .. }
            | Term::Bang(t) => vec![t],
            Term::Sum(t, u)
            | Term::ElimOne(t, u)
            | Term::App(t, u)
            | Term::Tens(t, u)
            | Term::Pair(t, u)
            | Term::ElimTens {
                scrut: t, body: u, ..
            }
            | Term::ElimWith {
                scrut: t, body: u, ..
            }
            | Term::ElimBang {
                scrut: t, body: u, ..
            } => vec![t, u],
            Term::ElimPlus {
                scrut,
                left_body,
                right_body,
                ..
            } => vec![scrut, left_body, right_body],
        }
    }

    /// Names bound by this node around child `i`.
    pub fn binders_of_child(&self, i: usize) -> Vec<&Name> {
        match (self, i) {
            (Term::Lam { var, .. }, 0) => vec![var],
            (Term::ElimTens { left, right, .. }, 1) => vec![left, right],
            (Term::ElimWith { var, .. }, 1) | (Term::ElimBang { var, .. }, 1) => vec![var],
            (Term::ElimPlus { left, .. }, 1) => vec![left],
            (Term::ElimPlus { right, .. }, 2) => vec![right],
            _ => vec![],
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.subterm(rest),
        }
    }

    pub fn subterm_mut(&mut self, path: &[usize]) -> Option<&mut Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children_mut().into_iter().nth(i)?.subterm_mut(rest),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Name>, out: &mut BTreeSet<Name>) {
        if let Term::Var(x) = self {
            if !bound.contains(&x) {
                out.insert(x.clone());
            }
            return;
        }
        for (i, child) in self.children().into_iter().enumerate() {
            let binders = self.binders_of_child(i);
            let n = binders.len();
            bound.extend(binders);
            child.collect_free(bound, out);
            bound.truncate(bound.len() - n);
        }
    }

    pub fn is_free(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => y == x,
            _ => self
                .children()
                .into_iter()
                .enumerate()
                .any(|(i, c)| !self.binders_of_child(i).iter().any(|b| *b == x) && c.is_free(x)),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// All names occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        if let Term::Var(x) = self {
            out.insert(x.clone());
        }
        for i in 0..self.children().len() {
            out.extend(self.binders_of_child(i).into_iter().cloned());
        }
        for c in self.children() {
            c.collect_names(out);
        }
    }

    /// The measure μ: additive connectives take the max of their branches,
    /// everything else sums its children, and every non-variable node adds one.
    pub fn measure(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Star(_) | Term::Unit => 1,
            Term::Sum(t, u) | Term::Pair(t, u) => 1 + t.measure().max(u.measure()),
            Term::ElimPlus {
                scrut,
                left_body,
                right_body,
                ..
            } => 1 + scrut.measure() + left_body.measure().max(right_body.measure()),
            _ => 1 + self.children().iter().map(|c| c.measure()).sum::<usize>(),
        }
    }

    /// Every constructor tag that occurs in the term.
    pub fn constructor_name(&self) -> &'static str {
        match self {
            Term::Var(_) => "var",
            Term::Sum(..) => "sum",
            Term::Smul(..) => "smul",
            Term::Star(_) => "star",
            Term::ElimOne(..) => "let1",
            Term::Lam { .. } => "lam",
            Term::App(..) => "app",
            Term::Tens(..) => "tens",
            Term::ElimTens { .. } => "lettens",
            Term::Unit => "unit",
            Term::ElimZero { .. } => "abort",
            Term::Pair(..) => "pair",
            Term::ElimWith {
                side: Side::Left, ..
            } => "fst",
            Term::ElimWith {
                side: Side::Right, ..
            } => "snd",
            Term::Inj {
                side: Side::Left, ..
            } => "inl",
            Term::Inj {
                side: Side::Right, ..
            } => "inr",
            Term::ElimPlus { .. } => "case",
            Term::Bang(_) => "bang",
            Term::ElimBang { .. } => "letbang",
        }
    }

    pub const CONSTRUCTORS: [&'static str; 19] = [
        "var", "sum", "smul", "star", "let1", "lam", "app", "tens", "lettens", "unit", "abort",
        "pair", "fst", "snd", "inl", "inr", "case", "bang", "letbang",
    ];

    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Semiring;

    fn n(k: i64) -> Scalar {
        Semiring::Nat.from_int(k)
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(
            Term::var("x").free_vars(),
            BTreeSet::from(["x".to_string()])
        );
        assert!(Term::lam("x", Type::One, Term::var("x")).free_vars().is_empty());
        let t = Term::lettens(
            Term::var("z"),
            "x",
            Type::One,
            "y",
            Type::One,
            Term::sum(Term::var("x"), Term::var("w")),
        );
        assert_eq!(
            t.free_vars(),
            BTreeSet::from(["z".to_string(), "w".to_string()])
        );
    }

    #[test]
    fn measure_examples() {
        assert_eq!(Term::pair(Term::var("x"), Term::star(n(2))).measure(), 2);
        assert_eq!(Term::var("x").measure(), 0);
        let t = Term::letbang(Term::var("x"), "y", Type::One, Term::var("y"));
        assert_eq!(t.measure(), 1);
    }

    #[test]
    fn measure_of_case_takes_max_of_branches() {
        let t = Term::case(
            Term::var("s"),
            "x",
            Type::One,
            Term::let1(Term::var("x"), Term::star(n(1))),
            "y",
            Type::One,
            Term::var("y"),
        );
        // 1 + μ(s) + max(1 + 0 + 1, 0)
        assert_eq!(t.measure(), 3);
    }

    #[test]
    fn paths_address_children() {
        let t = Term::app(
            Term::lam("x", Type::One, Term::var("x")),
            Term::star(n(3)),
        );
        assert_eq!(t.subterm(&[0, 0]), Some(&Term::var("x")));
        assert_eq!(t.subterm(&[1]), Some(&Term::star(n(3))));
        assert_eq!(t.subterm(&[2]), None);
    }
}
