//! Syntax-directed checker for the dual-context judgement `Υ; Γ ⊢ t : A`.
//!
//! Linear splitting is algorithmic: each premise reports the set of linear
//! variables it consumed. Multiplicative rules require the sets of their
//! premises to be disjoint, additive rules (sum, pairing, the branches of a
//! case) require them to be equal. `unit` consumes nothing, so a linear
//! variable can never be discarded through `⊤`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{DualContext, Name, Side, Term, Type};

/// Result type of a derivation together with the linear variables it used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Typing {
    pub ty: Type,
    pub used: BTreeSet<Name>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TypeErrorKind {
    UnboundVar {
        name: Name,
    },
    LinearReuse {
        name: Name,
    },
    LinearUnused {
        name: Name,
    },
    BranchUsageMismatch {
        left: Vec<Name>,
        right: Vec<Name>,
    },
    Mismatch {
        #[serde(serialize_with = "display")]
        expected: Type,
        #[serde(serialize_with = "display")]
        found: Type,
    },
    BangUnderLinear {
        used: Vec<Name>,
    },
    NotAFunction {
        #[serde(serialize_with = "display")]
        found: Type,
    },
    NotATensor {
        #[serde(serialize_with = "display")]
        found: Type,
    },
    NotAWith {
        #[serde(serialize_with = "display")]
        found: Type,
    },
    NotAPlus {
        #[serde(serialize_with = "display")]
        found: Type,
    },
    NotABang {
        #[serde(serialize_with = "display")]
        found: Type,
    },
    NotOne {
        #[serde(serialize_with = "display")]
        found: Type,
    },
    NotZero {
        #[serde(serialize_with = "display")]
        found: Type,
    },
    /// `abort(t)` in a position where the result type cannot be inferred.
    MissingAnnotation,
}

fn display<S: serde::Serializer>(ty: &Type, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&ty.to_string())
}

/// A typing failure at `path` (child indices from the root).
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub struct TypeError {
    #[serde(flatten)]
    pub kind: TypeErrorKind,
    pub path: Vec<usize>,
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TypeErrorKind::*;
        match self {
            UnboundVar { name } => write!(f, "unbound variable `{name}`"),
            LinearReuse { name } => write!(f, "linear variable `{name}` used more than once"),
            LinearUnused { name } => write!(f, "linear variable `{name}` is never used"),
            BranchUsageMismatch { left, right } => write!(
                f,
                "additive branches use different linear variables: {{{}}} vs {{{}}}",
                left.join(", "),
                right.join(", ")
            ),
            Mismatch { expected, found } => {
                write!(f, "type mismatch: expected `{expected}`, found `{found}`")
            }
            BangUnderLinear { used } => write!(
                f,
                "`bang` body uses linear variables {{{}}}",
                used.join(", ")
            ),
            NotAFunction { found } => write!(f, "applying a term of type `{found}`"),
            NotATensor { found } => write!(f, "`lettens` on a term of type `{found}`"),
            NotAWith { found } => write!(f, "projection from a term of type `{found}`"),
            NotAPlus { found } => write!(f, "`case` on a term of type `{found}`"),
            NotABang { found } => write!(f, "`letbang` on a term of type `{found}`"),
            NotOne { found } => write!(f, "`let1` on a term of type `{found}`"),
            NotZero { found } => write!(f, "`abort` on a term of type `{found}`"),
            MissingAnnotation => f.write_str("cannot infer the result type of `abort`; write `abort[T](...)`"),
        }
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at path {:?}", self.kind, self.path)
    }
}

/// Infer the type of `t` under `ctx`. Linear variables of `ctx` that `t`
/// does not consume are reported through [`Typing::used`], not as errors.
pub fn infer(ctx: &DualContext, t: &Term) -> Result<Typing, TypeError> {
    Checker::default().run(ctx, t, None)
}

/// Check `t` against `expected`. Unlike [`infer`] this accepts unannotated
/// `abort(t)` wherever the expected type reaches it.
pub fn check(ctx: &DualContext, t: &Term, expected: &Type) -> Result<Typing, TypeError> {
    Checker::default().run(ctx, t, Some(expected))
}

/// `∅; ∅ ⊢ t : ty`.
pub fn check_closed(t: &Term, ty: &Type) -> Result<(), TypeError> {
    check(&DualContext::new(), t, ty).map(|_| ())
}

/// Type of a closed term.
pub fn infer_closed(t: &Term) -> Result<Type, TypeError> {
    infer(&DualContext::new(), t).map(|r| r.ty)
}

/// `Υ; Γ ⊢ t : A` with every linear variable of `Γ` consumed.
pub fn check_exact(ctx: &DualContext, t: &Term) -> Result<Type, TypeError> {
    let r = infer(ctx, t)?;
    if let Some(x) = ctx.linear.keys().find(|x| !r.used.contains(*x)) {
        return Err(TypeError {
            kind: TypeErrorKind::LinearUnused { name: x.clone() },
            path: vec![],
        });
    }
    Ok(r.ty)
}

/// Branch-usage mismatches are deferred: checking continues with the union
/// of the branch usages so that a multiplicative overlap further up, the more
/// informative diagnosis, is reported first.
#[derive(Default)]
struct Checker {
    path: Vec<usize>,
    deferred: Option<TypeError>,
}

type TResult<T> = Result<T, TypeError>;

impl Checker {
    fn err<T>(&self, kind: TypeErrorKind) -> TResult<T> {
        Err(TypeError {
            kind,
            path: self.path.clone(),
        })
    }

    fn child(
        &mut self,
        i: usize,
        ctx: &DualContext,
        t: &Term,
        expected: Option<&Type>,
    ) -> TResult<Typing> {
        self.path.push(i);
        let r = self.synth(ctx, t, expected);
        self.path.pop();
        r
    }

    fn disjoint(&self, a: BTreeSet<Name>, b: BTreeSet<Name>) -> TResult<BTreeSet<Name>> {
        if let Some(x) = a.intersection(&b).next() {
            return self.err(TypeErrorKind::LinearReuse { name: x.clone() });
        }
        Ok(a.union(&b).cloned().collect())
    }

    fn run(mut self, ctx: &DualContext, t: &Term, expected: Option<&Type>) -> TResult<Typing> {
        let r = self.synth(ctx, t, expected)?;
        match self.deferred {
            Some(e) => Err(e),
            None => Ok(r),
        }
    }

    fn same_usage(&mut self, a: BTreeSet<Name>, b: BTreeSet<Name>) -> BTreeSet<Name> {
        if a != b && self.deferred.is_none() {
            self.deferred = Some(TypeError {
                kind: TypeErrorKind::BranchUsageMismatch {
                    left: a.iter().cloned().collect(),
                    right: b.iter().cloned().collect(),
                },
                path: self.path.clone(),
            });
        }
        a.union(&b).cloned().collect()
    }

    /// Type the body of a binder, requiring each linearly bound name to be
    /// consumed, and return the usage with those names removed.
    fn linear_body(
        &mut self,
        i: usize,
        ctx: &DualContext,
        binders: &[(&Name, &Type)],
        body: &Term,
        expected: Option<&Type>,
    ) -> TResult<Typing> {
        let inner = binders
            .iter()
            .fold(ctx.clone(), |c, (x, ty)| c.with_linear(x, (*ty).clone()));
        let mut r = self.child(i, &inner, body, expected)?;
        for (x, _) in binders {
            if !r.used.remove(*x) {
                self.path.push(i);
                let e = self.err(TypeErrorKind::LinearUnused {
                    name: (*x).clone(),
                });
                self.path.pop();
                return e;
            }
        }
        Ok(r)
    }

    fn expect_eq(&self, expected: &Type, found: &Type) -> TResult<()> {
        if expected != found {
            return self.err(TypeErrorKind::Mismatch {
                expected: expected.clone(),
                found: found.clone(),
            });
        }
        Ok(())
    }

    fn synth(&mut self, ctx: &DualContext, t: &Term, expected: Option<&Type>) -> TResult<Typing> {
        let r = self.synth_node(ctx, t, expected)?;
        if let Some(e) = expected {
            self.expect_eq(e, &r.ty)?;
        }
        Ok(r)
    }

    fn synth_node(
        &mut self,
        ctx: &DualContext,
        t: &Term,
        expected: Option<&Type>,
    ) -> TResult<Typing> {
        use TypeErrorKind::*;
        match t {
            Term::Var(x) => {
                if let Some(ty) = ctx.linear.get(x) {
                    Ok(Typing {
                        ty: ty.clone(),
                        used: BTreeSet::from([x.clone()]),
                    })
                } else if let Some(ty) = ctx.intuitionistic.get(x) {
                    Ok(Typing {
                        ty: ty.clone(),
                        used: BTreeSet::new(),
                    })
                } else {
                    self.err(UnboundVar { name: x.clone() })
                }
            }
            Term::Sum(a, b) => {
                let ra = self.child(0, ctx, a, expected)?;
                let rb = self.child(1, ctx, b, Some(&ra.ty))?;
                let used = self.same_usage(ra.used, rb.used);
                Ok(Typing { ty: ra.ty, used })
            }
            Term::Smul(_, a) => self.child(0, ctx, a, expected),
            Term::Star(_) => Ok(Typing {
                ty: Type::One,
                used: BTreeSet::new(),
            }),
            Term::ElimOne(a, b) => {
                let ra = self.child(0, ctx, a, None)?;
                if ra.ty != Type::One {
                    return self.err(NotOne { found: ra.ty });
                }
                let rb = self.child(1, ctx, b, expected)?;
                let used = self.disjoint(ra.used, rb.used)?;
                Ok(Typing { ty: rb.ty, used })
            }
            Term::Lam { var, ty, body } => {
                let body_expected = match expected {
                    Some(Type::Lolli(a, b)) if **a == *ty => Some(&**b),
                    _ => None,
                };
                let r = self.linear_body(0, ctx, &[(var, ty)], body, body_expected)?;
                Ok(Typing {
                    ty: Type::lolli(ty.clone(), r.ty),
                    used: r.used,
                })
            }
            Term::App(f, a) => {
                let rf = self.child(0, ctx, f, None)?;
                let Type::Lolli(dom, cod) = rf.ty else {
                    return self.err(NotAFunction { found: rf.ty });
                };
                let ra = self.child(1, ctx, a, Some(&dom))?;
                let used = self.disjoint(rf.used, ra.used)?;
                Ok(Typing { ty: *cod, used })
            }
            Term::Tens(a, b) => {
                let (ea, eb) = match expected {
                    Some(Type::Tensor(x, y)) => (Some(&**x), Some(&**y)),
                    _ => (None, None),
                };
                let ra = self.child(0, ctx, a, ea)?;
                let rb = self.child(1, ctx, b, eb)?;
                let used = self.disjoint(ra.used, rb.used)?;
                Ok(Typing {
                    ty: Type::tensor(ra.ty, rb.ty),
                    used,
                })
            }
            Term::ElimTens {
                scrut,
                left,
                left_ty,
                right,
                right_ty,
                body,
            } => {
                let rs = self.child(0, ctx, scrut, None)?;
                let Type::Tensor(a, b) = &rs.ty else {
                    return self.err(NotATensor { found: rs.ty });
                };
                self.expect_eq(&Type::tensor(left_ty.clone(), right_ty.clone()), &Type::tensor((**a).clone(), (**b).clone()))?;
                let rb = self.linear_body(
                    1,
                    ctx,
                    &[(left, left_ty), (right, right_ty)],
                    body,
                    expected,
                )?;
                let used = self.disjoint(rs.used, rb.used)?;
                Ok(Typing { ty: rb.ty, used })
            }
            Term::Unit => Ok(Typing {
                ty: Type::Top,
                used: BTreeSet::new(),
            }),
            Term::ElimZero { scrut, ty } => {
                let rs = self.child(0, ctx, scrut, None)?;
                if rs.ty != Type::Zero {
                    return self.err(NotZero { found: rs.ty });
                }
                let Some(result) = ty.as_ref().or(expected) else {
                    return self.err(MissingAnnotation);
                };
                Ok(Typing {
                    ty: result.clone(),
                    used: rs.used,
                })
            }
            Term::Pair(a, b) => {
                let (ea, eb) = match expected {
                    Some(Type::With(x, y)) => (Some(&**x), Some(&**y)),
                    _ => (None, None),
                };
                let ra = self.child(0, ctx, a, ea)?;
                let rb = self.child(1, ctx, b, eb)?;
                let used = self.same_usage(ra.used, rb.used);
                Ok(Typing {
                    ty: Type::with(ra.ty, rb.ty),
                    used,
                })
            }
            Term::ElimWith {
                side,
                scrut,
                var,
                ty,
                body,
            } => {
                let rs = self.child(0, ctx, scrut, None)?;
                let Type::With(a, b) = &rs.ty else {
                    return self.err(NotAWith { found: rs.ty });
                };
                let component = match side {
                    Side::Left => a,
                    Side::Right => b,
                };
                self.expect_eq(component, ty)?;
                let rb = self.linear_body(1, ctx, &[(var, ty)], body, expected)?;
                let used = self.disjoint(rs.used, rb.used)?;
                Ok(Typing { ty: rb.ty, used })
            }
            Term::Inj { side, arg, other } => {
                let (mine, theirs) = match (expected, side) {
                    (Some(Type::Plus(a, b)), Side::Left) => (Some(&**a), Some(&**b)),
                    (Some(Type::Plus(a, b)), Side::Right) => (Some(&**b), Some(&**a)),
                    _ => (None, None),
                };
                if let Some(o) = theirs {
                    self.expect_eq(o, other)?;
                }
                let ra = self.child(0, ctx, arg, mine)?;
                let ty = match side {
                    Side::Left => Type::plus(ra.ty, other.clone()),
                    Side::Right => Type::plus(other.clone(), ra.ty),
                };
                Ok(Typing { ty, used: ra.used })
            }
            Term::ElimPlus {
                scrut,
                left,
                left_ty,
                left_body,
                right,
                right_ty,
                right_body,
            } => {
                let rs = self.child(0, ctx, scrut, None)?;
                let Type::Plus(a, b) = &rs.ty else {
                    return self.err(NotAPlus { found: rs.ty });
                };
                self.expect_eq(&Type::plus(left_ty.clone(), right_ty.clone()), &Type::plus((**a).clone(), (**b).clone()))?;
                let ru = self.linear_body(1, ctx, &[(left, left_ty)], left_body, expected)?;
                let rv = self.linear_body(2, ctx, &[(right, right_ty)], right_body, Some(&ru.ty))?;
                let branches = self.same_usage(ru.used, rv.used);
                let used = self.disjoint(rs.used, branches)?;
                Ok(Typing { ty: ru.ty, used })
            }
            Term::Bang(a) => {
                let inner = match expected {
                    Some(Type::Bang(x)) => Some(&**x),
                    _ => None,
                };
                let ra = self.child(0, ctx, a, inner)?;
                if !ra.used.is_empty() {
                    return self.err(BangUnderLinear {
                        used: ra.used.into_iter().collect(),
                    });
                }
                Ok(Typing {
                    ty: Type::bang(ra.ty),
                    used: BTreeSet::new(),
                })
            }
            Term::ElimBang {
                scrut,
                var,
                ty,
                body,
            } => {
                let rs = self.child(0, ctx, scrut, None)?;
                let Type::Bang(a) = &rs.ty else {
                    return self.err(NotABang { found: rs.ty });
                };
                self.expect_eq(a, ty)?;
                let inner = ctx.with_intuitionistic(var, ty.clone());
                let rb = self.child(1, &inner, body, expected)?;
                let used = self.disjoint(rs.used, rb.used)?;
                Ok(Typing { ty: rb.ty, used })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Semiring;
    use crate::syntax::parse_term;

    fn nat(src: &str) -> Term {
        parse_term(src, Semiring::Nat).unwrap()
    }

    fn linear(vars: &[(&str, Type)]) -> DualContext {
        DualContext::from_parts([], vars.iter().map(|(x, t)| (x.to_string(), t.clone()))).unwrap()
    }

    #[test]
    fn star_is_one() {
        let r = infer(&DualContext::new(), &nat("star(3)")).unwrap();
        assert_eq!(r.ty, Type::One);
        assert!(r.used.is_empty());
    }

    #[test]
    fn sum_of_tensors_uses_both_variables() {
        let ctx = linear(&[("x", Type::One), ("y", Type::One)]);
        let r = infer(&ctx, &nat("tens(x, y) <+> tens(y, x)")).unwrap();
        assert_eq!(r.ty, Type::tensor(Type::One, Type::One));
        assert_eq!(r.used, BTreeSet::from(["x".into(), "y".into()]));
    }

    #[test]
    fn tensor_of_sums_reuses_linear_variables() {
        let ctx = linear(&[("x", Type::One), ("y", Type::One)]);
        let err = infer(&ctx, &nat("tens(x <+> y, y <+> x)")).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::LinearReuse { .. }), "{err}");
        assert!(err.path.is_empty());
    }

    #[test]
    fn hadamard_is_an_endomorphism_of_qubits() {
        let h = parse_term(
            "\\x:I&I. fst(x, y:I. let1(y, pair(star((1,0)), star((1,0))))) <+> snd(x, z:I. let1(z, pair(star((1,0)), star((-1,0)))))",
            Semiring::Crat,
        )
        .unwrap();
        let qubit = Type::with(Type::One, Type::One);
        let r = infer(&DualContext::new(), &h).unwrap();
        assert_eq!(r.ty, Type::lolli(qubit.clone(), qubit));
        assert!(r.used.is_empty());
    }

    #[test]
    fn check_closed_examples() {
        check_closed(&nat("star(1)"), &Type::One).unwrap();
        check_closed(&nat("\\x:I. x"), &Type::lolli(Type::One, Type::One)).unwrap();
        let err = check_closed(&nat("\\x:I. x"), &Type::One).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::Mismatch { .. }));
    }

    #[test]
    fn unused_linear_binder() {
        let err = infer(&DualContext::new(), &nat("\\x:I. star(1)")).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::LinearUnused { name: "x".into() });
        assert_eq!(err.path, vec![0]);
    }

    #[test]
    fn bang_rejects_linear_usage() {
        let err = infer(&DualContext::new(), &nat("\\x:I. bang(x)")).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::BangUnderLinear { .. }));
        assert_eq!(err.path, vec![0]);
    }

    #[test]
    fn intuitionistic_variables_duplicate() {
        let t = nat("\\y:!I. letbang(y, x:I. tens(x, x))");
        assert_eq!(
            infer_closed(&t).unwrap(),
            Type::lolli(Type::bang(Type::One), Type::tensor(Type::One, Type::One))
        );
    }

    #[test]
    fn case_branches_must_agree_on_usage() {
        let ctx = linear(&[("s", Type::plus(Type::One, Type::One)), ("w", Type::One)]);
        let ok = nat("case(s, a:I. let1(a, w), b:I. let1(b, w))");
        assert_eq!(infer(&ctx, &ok).unwrap().used.len(), 2);
        let bad = nat("case(s, a:I. let1(a, w), b:I. b)");
        let err = infer(&ctx, &bad).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::BranchUsageMismatch { .. }));
    }

    #[test]
    fn eliminator_kinds() {
        let empty = DualContext::new();
        let cases = [
            ("star(1) star(2)", "NotAFunction"),
            ("lettens(star(1), a:I, b:I. a)", "NotATensor"),
            ("fst(star(1), a:I. a)", "NotAWith"),
            ("case(star(1), a:I. a, b:I. b)", "NotAPlus"),
            ("letbang(star(1), a:I. a)", "NotABang"),
            ("let1(unit, star(1))", "NotOne"),
            ("abort[I](star(1))", "NotZero"),
            ("z", "UnboundVar"),
        ];
        for (src, kind) in cases {
            let err = infer(&empty, &nat(src)).unwrap_err();
            assert!(format!("{:?}", err.kind).starts_with(kind), "{src}: {err}");
        }
    }

    #[test]
    fn abort_is_checked_against_expected_type() {
        let t = nat("\\z:Zero. abort(z)");
        let ty = Type::lolli(Type::Zero, Type::One);
        assert!(matches!(
            infer_closed(&t).unwrap_err().kind,
            TypeErrorKind::MissingAnnotation
        ));
        check_closed(&t, &ty).unwrap();
        check_closed(&nat("\\z:Zero. abort[I](z)"), &ty).unwrap();
    }

    #[test]
    fn unit_does_not_discard_linear_variables() {
        let err = infer(&DualContext::new(), &nat("\\x:I. unit")).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::LinearUnused { name: "x".into() });
    }

    #[test]
    fn injections_use_stored_summand() {
        let t = nat("inr[I -o I](star(2))");
        assert_eq!(
            infer_closed(&t).unwrap(),
            Type::plus(Type::lolli(Type::One, Type::One), Type::One)
        );
    }

    #[test]
    fn check_exact_requires_full_consumption() {
        let ctx = linear(&[("x", Type::One), ("y", Type::One)]);
        assert!(check_exact(&ctx, &nat("x")).is_err());
        assert_eq!(check_exact(&ctx, &nat("let1(x, y)")).unwrap(), Type::One);
    }
}
