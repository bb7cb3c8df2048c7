//! Elimination contexts and bounded observational equivalence.
//!
//! Two closed terms of type `A` are observationally equivalent when every
//! elimination context `K` with a hole of type `A` and result type `1`
//! sends both to the same scalar star. Contexts are infinite, so the check
//! here enumerates spines of bounded length with bounded continuation
//! bodies and reports how far it got.

use std::fmt;

use serde::Serialize;

use crate::encode::{is_vector_type, term_to_vec_with, EncodeError};
use crate::gen::{GenConfig, Generator};
use crate::reduce::{normalize, NormalizeOptions, ReduceError, DEFAULT_FUEL};
use crate::semiring::{Scalar, Semiring};
use crate::syntax::{alpha_eq, Name, Side, Term, Type};

/// One eliminator around the hole.
#[derive(Clone, Debug, PartialEq)]
pub enum Frame {
    /// `_ u`
    App(Term),
    /// `let1(_, u)`
    Let1(Term),
    /// `lettens(_, x:B, y:C. v)`
    Tens {
        left: Name,
        left_ty: Type,
        right: Name,
        right_ty: Type,
        body: Term,
    },
    /// `fst(_, x:B. v)` or `snd(_, x:C. v)`
    With {
        side: Side,
        var: Name,
        ty: Type,
        body: Term,
    },
    /// `case(_, x:B. u, y:C. v)`
    Plus {
        left: Name,
        left_ty: Type,
        left_body: Term,
        right: Name,
        right_ty: Type,
        right_body: Term,
    },
    /// `letbang(_, x:B. v)`
    Bang { var: Name, ty: Type, body: Term },
    /// `abort[C](_)`
    Abort(Type),
}

impl Frame {
    fn wrap(&self, t: Term) -> Term {
        match self.clone() {
            Frame::App(u) => Term::app(t, u),
            Frame::Let1(u) => Term::let1(t, u),
            Frame::Tens {
                left,
                left_ty,
                right,
                right_ty,
                body,
            } => Term::lettens(t, left, left_ty, right, right_ty, body),
            Frame::With {
                side,
                var,
                ty,
                body,
            } => Term::proj(side, t, var, ty, body),
            Frame::Plus {
                left,
                left_ty,
                left_body,
                right,
                right_ty,
                right_body,
            } => Term::case(t, left, left_ty, left_body, right, right_ty, right_body),
            Frame::Bang { var, ty, body } => Term::letbang(t, var, ty, body),
            Frame::Abort(c) => Term::abort(t, Some(c)),
        }
    }
}

/// A spine of eliminators; `frames[0]` is applied to the hole first.
#[derive(Clone, Debug, PartialEq)]
pub struct ElimContext {
    pub hole: Type,
    pub frames: Vec<Frame>,
    /// Type of `K[t]`.
    pub result: Type,
}

impl ElimContext {
    pub fn hole(ty: Type) -> Self {
        ElimContext {
            result: ty.clone(),
            hole: ty,
            frames: Vec::new(),
        }
    }

    pub fn plug(&self, t: &Term) -> Term {
        self.frames.iter().fold(t.clone(), |acc, f| f.wrap(acc))
    }

    fn push(&self, f: Frame, result: Type) -> Self {
        let mut k = self.clone();
        k.frames.push(f);
        k.result = result;
        k
    }
}

impl fmt::Display for ElimContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.plug(&Term::var("_")))
    }
}

impl Serialize for ElimContext {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct EquivOptions {
    /// Maximum number of frames.
    pub depth: usize,
    /// Maximum size of generated arguments and continuation bodies.
    pub budget: usize,
    pub fuel: u64,
    pub seed: u64,
    pub semiring: Semiring,
    /// Generated candidates per frame, after the canonical ones.
    pub samples: usize,
    /// Also observe contexts ending at a vector type, by reading back the
    /// vector, instead of only contexts into `1`.
    pub vector_observations: bool,
}

impl EquivOptions {
    pub fn new(semiring: Semiring) -> Self {
        EquivOptions {
            depth: 2,
            budget: 8,
            fuel: DEFAULT_FUEL,
            seed: 0,
            semiring,
            samples: 2,
            vector_observations: false,
        }
    }
}

/// Enumerate contexts with a hole of type `a`, spine length at most
/// `opts.depth`, in a fixed order for a fixed seed. Frames that change the
/// type to a continuation type choose it strictly smaller than the type
/// they eliminate.
pub fn enum_contexts(a: &Type, opts: &EquivOptions) -> Vec<ElimContext> {
    let mut g = Generator::new(GenConfig {
        max_size: opts.budget.max(1),
        type_depth: 2,
        ..GenConfig::new(opts.seed, opts.semiring)
    });
    let mut out = Vec::new();
    let mut fresh = 0usize;
    extend(
        &ElimContext::hole(a.clone()),
        opts,
        opts.depth,
        &mut g,
        &mut fresh,
        &mut out,
    );
    out
}

fn extend(
    k: &ElimContext,
    opts: &EquivOptions,
    depth: usize,
    g: &mut Generator,
    fresh: &mut usize,
    out: &mut Vec<ElimContext>,
) {
    let ty = k.result.clone();
    if ty == Type::One || (opts.vector_observations && is_vector_type(&ty)) {
        out.push(k.clone());
    }
    if depth == 0 {
        return;
    }
    let mut name = || {
        *fresh += 1;
        format!("k{fresh}")
    };
    let mut next: Vec<(Frame, Type)> = Vec::new();
    match &ty {
        Type::One => {}
        Type::Top => {}
        Type::Zero => next.push((Frame::Abort(Type::One), Type::One)),
        Type::Lolli(b, c) => {
            for u in arguments(b, opts, g) {
                next.push((Frame::App(u), (**c).clone()));
            }
        }
        Type::With(b, c) => {
            for (side, comp) in [(Side::Left, b), (Side::Right, c)] {
                let x = name();
                next.push((
                    Frame::With {
                        side,
                        var: x.clone(),
                        ty: (**comp).clone(),
                        body: Term::var(x),
                    },
                    (**comp).clone(),
                ));
                let x = name();
                for (d, body) in bodies(&[], &[(x.clone(), (**comp).clone())], &ty, opts, g) {
                    next.push((
                        Frame::With {
                            side,
                            var: x.clone(),
                            ty: (**comp).clone(),
                            body,
                        },
                        d,
                    ));
                }
            }
        }
        Type::Tensor(b, c) => {
            let (x, y) = (name(), name());
            let lin = [(x.clone(), (**b).clone()), (y.clone(), (**c).clone())];
            for (d, body) in bodies(&[], &lin, &ty, opts, g) {
                next.push((
                    Frame::Tens {
                        left: x.clone(),
                        left_ty: (**b).clone(),
                        right: y.clone(),
                        right_ty: (**c).clone(),
                        body,
                    },
                    d,
                ));
            }
        }
        Type::Plus(b, c) => {
            let (x, y) = (name(), name());
            for d in continuation_types(&ty, g) {
                let u = gen_body(&[], &[(x.clone(), (**b).clone())], &d, g);
                let v = gen_body(&[], &[(y.clone(), (**c).clone())], &d, g);
                if let (Some(u), Some(v)) = (u, v) {
                    next.push((
                        Frame::Plus {
                            left: x.clone(),
                            left_ty: (**b).clone(),
                            left_body: u,
                            right: y.clone(),
                            right_ty: (**c).clone(),
                            right_body: v,
                        },
                        d,
                    ));
                }
            }
        }
        Type::Bang(b) => {
            let x = name();
            next.push((
                Frame::Bang {
                    var: x.clone(),
                    ty: (**b).clone(),
                    body: Term::var(&x),
                },
                (**b).clone(),
            ));
            for (d, body) in bodies(&[(x.clone(), (**b).clone())], &[], &ty, opts, g) {
                next.push((
                    Frame::Bang {
                        var: x.clone(),
                        ty: (**b).clone(),
                        body,
                    },
                    d,
                ));
            }
        }
    }
    for (f, d) in next {
        extend(&k.push(f, d.clone()), opts, depth - 1, g, fresh, out);
    }
    if ty == Type::One && depth > 0 {
        let u = Term::star(opts.semiring.from_int(2));
        extend(&k.push(Frame::Let1(u), Type::One), opts, depth - 1, g, fresh, out);
    }
}

/// Continuation types for a frame eliminating `a`: `1` first, then a few
/// random types, all of size strictly below `|a|`.
fn continuation_types(a: &Type, g: &mut Generator) -> Vec<Type> {
    let mut out = vec![Type::One];
    for _ in 0..2 {
        let d = g.type_of_depth(2);
        if d.size() < a.size() && !out.contains(&d) && !matches!(d, Type::Top | Type::Zero) {
            out.push(d);
        }
    }
    out
}

fn gen_body(
    intuitionistic: &[(Name, Type)],
    linear: &[(Name, Type)],
    d: &Type,
    g: &mut Generator,
) -> Option<Term> {
    g.gen_term(intuitionistic, linear, d).ok()
}

fn bodies(
    intuitionistic: &[(Name, Type)],
    linear: &[(Name, Type)],
    a: &Type,
    opts: &EquivOptions,
    g: &mut Generator,
) -> Vec<(Type, Term)> {
    let mut out = Vec::new();
    for d in continuation_types(a, g) {
        for _ in 0..opts.samples {
            if let Some(t) = gen_body(intuitionistic, linear, &d, g) {
                if !out.iter().any(|(_, u)| alpha_eq(u, &t)) {
                    out.push((d.clone(), t));
                }
            }
        }
    }
    out
}

/// Closed arguments of type `b`: a canonical one when there is an obvious
/// choice, then generated ones.
fn arguments(b: &Type, opts: &EquivOptions, g: &mut Generator) -> Vec<Term> {
    let mut out: Vec<Term> = canonical(b, opts.semiring).into_iter().collect();
    for _ in 0..opts.samples {
        if let Ok(t) = g.gen_closed_term(b) {
            if !out.iter().any(|u| alpha_eq(u, &t)) {
                out.push(t);
            }
        }
    }
    out
}

/// The identity at `C ⊸ C`, `1.⋆` at `1`, and componentwise otherwise.
pub fn canonical(b: &Type, semiring: Semiring) -> Option<Term> {
    match b {
        Type::One => Some(Term::star(semiring.one())),
        Type::Top => Some(Term::Unit),
        Type::Zero => None,
        Type::Lolli(c, d) if c == d => Some(Term::lam("z", (**c).clone(), Term::var("z"))),
        Type::Lolli(..) => None,
        Type::Tensor(c, d) => Some(Term::tens(canonical(c, semiring)?, canonical(d, semiring)?)),
        Type::With(c, d) => Some(Term::pair(canonical(c, semiring)?, canonical(d, semiring)?)),
        Type::Plus(c, d) => match canonical(c, semiring) {
            Some(u) => Some(Term::inl(u, (**d).clone())),
            None => Some(Term::inr(canonical(d, semiring)?, (**c).clone())),
        },
        Type::Bang(c) => Some(Term::bang(canonical(c, semiring)?)),
    }
}

/// What a context observes of a term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observation {
    Scalar { value: Scalar },
    Vector { entries: Vec<Scalar> },
    /// A normal form that is neither, which a well-typed input never gives.
    Other { term: String },
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observation::Scalar { value } => write!(f, "star({value})"),
            Observation::Vector { entries } => {
                let parts: Vec<String> = entries.iter().map(|s| s.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            Observation::Other { term } => f.write_str(term),
        }
    }
}

/// Normalise `K[t]` and read off the result.
pub fn observe(k: &ElimContext, t: &Term, fuel: u64) -> Result<Observation, ReduceError> {
    let plugged = k.plug(t);
    let opts = NormalizeOptions {
        fuel,
        ..NormalizeOptions::default()
    };
    if k.result != Type::One && is_vector_type(&k.result) {
        return match term_to_vec_with(&plugged, &k.result, opts) {
            Ok(entries) => Ok(Observation::Vector { entries }),
            Err(EncodeError::Reduce(e)) => Err(e),
            Err(e) => Ok(Observation::Other {
                term: e.to_string(),
            }),
        };
    }
    let nf = normalize(&plugged, opts)?.term;
    Ok(match nf {
        Term::Star(value) => Observation::Scalar { value },
        other => Observation::Other {
            term: other.to_string(),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum EquivVerdict {
    /// No context within the bound tells the terms apart.
    EquivalentUpToBound { depth: usize, contexts: usize },
    Distinguished {
        context: ElimContext,
        left: Observation,
        right: Observation,
    },
    Unknown { reason: String },
}

impl EquivVerdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, EquivVerdict::Distinguished { .. })
    }
}

/// Compare `t` and `u : a` under every enumerated context.
pub fn obs_equiv(t: &Term, u: &Term, a: &Type, opts: &EquivOptions) -> EquivVerdict {
    let contexts = enum_contexts(a, opts);
    obs_equiv_in(t, u, &contexts, opts)
}

/// Compare `t` and `u` under the given contexts only.
pub fn obs_equiv_in(
    t: &Term,
    u: &Term,
    contexts: &[ElimContext],
    opts: &EquivOptions,
) -> EquivVerdict {
    for k in contexts {
        let (l, r) = match (observe(k, t, opts.fuel), observe(k, u, opts.fuel)) {
            (Ok(l), Ok(r)) => (l, r),
            (Err(e), _) | (_, Err(e)) => {
                return EquivVerdict::Unknown {
                    reason: format!("in context {k}: {e}"),
                }
            }
        };
        if l != r {
            return EquivVerdict::Distinguished {
                context: k.clone(),
                left: l,
                right: r,
            };
        }
    }
    EquivVerdict::EquivalentUpToBound {
        depth: opts.depth,
        contexts: contexts.len(),
    }
}

/// `λy:!A. letbang(y, x:A. t)`: a term with a free intuitionistic `x`
/// turned into a closed-over linear argument, so that it can be tested in
/// linear-hole contexts.
pub fn close_intuitionistic(x: &str, a: &Type, t: &Term, fresh: &str) -> Term {
    Term::lam(
        fresh,
        Type::bang(a.clone()),
        Term::letbang(Term::var(fresh), x, a.clone(), t.clone()),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IdentityCheck {
    Holds,
    Fails { left: String, right: String },
    Unknown { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearityRoute {
    /// The codomain is a vector type; both sides are read back and compared.
    Vector,
    /// Bounded observational equivalence at the codomain.
    Observational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearityReport {
    pub route: LinearityRoute,
    /// `f (u₁ ⊞ u₂)` against `f u₁ ⊞ f u₂`.
    pub additivity: IdentityCheck,
    /// `f (a • u₁)` against `a • f u₁`.
    pub homogeneity: IdentityCheck,
}

/// Check that `f : A ⊸ B` commutes with sums and scalar products on the
/// given arguments.
pub fn linearity_check(
    f: &Term,
    b: &Type,
    u1: &Term,
    u2: &Term,
    a: &Scalar,
    opts: &EquivOptions,
) -> LinearityReport {
    let app = |u: Term| Term::app(f.clone(), u);
    let pairs = [
        (
            app(Term::sum(u1.clone(), u2.clone())),
            Term::sum(app(u1.clone()), app(u2.clone())),
        ),
        (
            app(Term::smul(a.clone(), u1.clone())),
            Term::smul(a.clone(), app(u1.clone())),
        ),
    ];
    let route = if is_vector_type(b) {
        LinearityRoute::Vector
    } else {
        LinearityRoute::Observational
    };
    let [additivity, homogeneity] = pairs.map(|(l, r)| match route {
        LinearityRoute::Vector => {
            let nopts = NormalizeOptions {
                fuel: opts.fuel,
                ..NormalizeOptions::default()
            };
            match (
                term_to_vec_with(&l, b, nopts),
                term_to_vec_with(&r, b, nopts),
            ) {
                (Ok(x), Ok(y)) if x == y => IdentityCheck::Holds,
                (Ok(x), Ok(y)) => IdentityCheck::Fails {
                    left: format!("{x:?}"),
                    right: format!("{y:?}"),
                },
                (Err(e), _) | (_, Err(e)) => IdentityCheck::Unknown {
                    reason: e.to_string(),
                },
            }
        }
        LinearityRoute::Observational => match obs_equiv(&l, &r, b, opts) {
            EquivVerdict::EquivalentUpToBound { .. } => IdentityCheck::Holds,
            EquivVerdict::Distinguished { left, right, .. } => IdentityCheck::Fails {
                left: left.to_string(),
                right: right.to_string(),
            },
            EquivVerdict::Unknown { reason } => IdentityCheck::Unknown { reason },
        },
    });
    LinearityReport {
        route,
        additivity,
        homogeneity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::{normal_form, redexes, step_at};
    use crate::syntax::{parse_term, parse_type};
    use crate::typecheck::check_closed;

    fn nat(s: &str) -> Term {
        parse_term(s, Semiring::Nat).unwrap()
    }

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn opts(depth: usize) -> EquivOptions {
        EquivOptions {
            depth,
            ..EquivOptions::new(Semiring::Nat)
        }
    }

    #[test]
    fn hole_alone_at_one() {
        let ks = enum_contexts(&Type::One, &opts(0));
        assert_eq!(ks, vec![ElimContext::hole(Type::One)]);
    }

    #[test]
    fn top_has_no_contexts() {
        assert!(enum_contexts(&Type::Top, &opts(3)).is_empty());
    }

    #[test]
    fn functions_are_applied() {
        let ks = enum_contexts(&ty("I -o I"), &opts(1));
        assert!(!ks.is_empty());
        for k in &ks {
            assert!(matches!(k.frames.as_slice(), [Frame::App(_)]), "{k}");
        }
        assert_eq!(ks[0].to_string(), "_ star(1)");
    }

    #[test]
    fn contexts_are_well_typed_and_shrink_types() {
        let a = ty("((I -o I) & (I (+) I)) * !(I & I)");
        for k in enum_contexts(&a, &opts(3)) {
            let hole = Term::var("hole");
            let ctx = crate::syntax::DualContext::from_parts([], [("hole".to_string(), a.clone())])
                .unwrap();
            let plugged = k.plug(&hole);
            let got = crate::typecheck::check_exact(&ctx, &plugged)
                .unwrap_or_else(|e| panic!("{k}: {e}"));
            assert_eq!(got, Type::One, "{k}");
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = ty("(I -o I) -o I");
        let o = EquivOptions {
            seed: 42,
            ..opts(2)
        };
        assert_eq!(enum_contexts(&a, &o), enum_contexts(&a, &o));
    }

    #[test]
    fn sum_inside_and_outside_a_function() {
        let t = "(\\x:I. \\y:I -o I. y x)";
        let left = nat(&format!("{t} (star(1) <+> star(2))"));
        let right = nat(&format!("({t} star(1)) <+> ({t} star(2))"));
        let a = ty("(I -o I) -o I");
        check_closed(&left, &a).unwrap();
        check_closed(&right, &a).unwrap();
        // not syntactically the same normal form
        assert!(!alpha_eq(
            &normal_form(&left).unwrap(),
            &normal_form(&right).unwrap()
        ));
        let k = ElimContext::hole(a.clone()).push(
            Frame::App(nat("\\z:I. z")),
            Type::One,
        );
        assert_eq!(k.to_string(), "_ (\\z:I. z)");
        let three = Observation::Scalar {
            value: Semiring::Nat.from_int(3),
        };
        assert_eq!(observe(&k, &left, DEFAULT_FUEL).unwrap(), three);
        assert_eq!(observe(&k, &right, DEFAULT_FUEL).unwrap(), three);
        let ks = enum_contexts(&a, &opts(1));
        assert_eq!(ks[0], k);
        assert!(matches!(
            obs_equiv(&left, &right, &a, &opts(1)),
            EquivVerdict::EquivalentUpToBound { depth: 1, .. }
        ));
    }

    #[test]
    fn reflexivity() {
        let t = nat("\\p:I & I. fst(p, a:I. a)");
        assert!(matches!(
            obs_equiv(&t, &t, &ty("I & I -o I"), &opts(2)),
            EquivVerdict::EquivalentUpToBound { .. }
        ));
    }

    #[test]
    fn distinguished_with_replayable_witness() {
        let a = ty("I & I");
        let t = nat("pair(star(1), star(2))");
        let u = nat("pair(star(1), star(3))");
        match obs_equiv(&t, &u, &a, &opts(2)) {
            EquivVerdict::Distinguished {
                context,
                left,
                right,
            } => {
                assert_ne!(left, right);
                assert_eq!(observe(&context, &t, DEFAULT_FUEL).unwrap(), left);
                assert_eq!(observe(&context, &u, DEFAULT_FUEL).unwrap(), right);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn one_step_reducts_are_never_distinguished() {
        let t = nat("letbang(bang(star(2)) <+> bang(star(3)), x:I. \\y:I. let1(y, tens(x, x)))");
        let a = ty("I -o I * I");
        check_closed(&t, &a).unwrap();
        for site in redexes(&t, false) {
            let r = step_at(&t, &site).unwrap();
            assert!(!obs_equiv(&t, &r, &a, &opts(3)).is_distinguished());
        }
    }

    #[test]
    fn intuitionistic_holes_through_bang() {
        let a = Type::One;
        let t = nat("let1(x, x)");
        let u = nat("let1(x, let1(x, star(1)))");
        let ct = close_intuitionistic("x", &a, &t, "w");
        let cu = close_intuitionistic("x", &a, &u, "w");
        let f = ty("!I -o I");
        check_closed(&ct, &f).unwrap();
        assert!(!obs_equiv(&ct, &cu, &f, &opts(2)).is_distinguished());
        let v = nat("let1(x, star(2))");
        let cv = close_intuitionistic("x", &a, &v, "w");
        assert!(obs_equiv(&ct, &cv, &f, &opts(2)).is_distinguished());
    }

    #[test]
    fn linearity_routes() {
        let h = parse_term(
            "\\x:I&I. fst(x, y:I. let1(y, pair(star((1,0)), star((1,0))))) <+> snd(x, z:I. let1(z, pair(star((1,0)), star((-1,0)))))",
            Semiring::Crat,
        )
        .unwrap();
        let q = ty("I&I");
        let u1 = parse_term("pair(star((1,0)), star((0,0)))", Semiring::Crat).unwrap();
        let u2 = parse_term("pair(star((0,0)), star((1,0)))", Semiring::Crat).unwrap();
        let a = crate::semiring::crat((2, 1), (1, 1));
        let r = linearity_check(&h, &q, &u1, &u2, &a, &EquivOptions::new(Semiring::Crat));
        assert_eq!(r.route, LinearityRoute::Vector);
        assert_eq!(r.additivity, IdentityCheck::Holds);
        assert_eq!(r.homogeneity, IdentityCheck::Holds);

        let id = nat("\\x:I. x");
        let five = Semiring::Nat.from_int(5);
        let r = linearity_check(&id, &Type::One, &nat("star(4)"), &nat("star(1)"), &five, &opts(1));
        assert_eq!(r.homogeneity, IdentityCheck::Holds);

        let f = nat("\\x:I. \\y:I -o I. y x");
        let r = linearity_check(
            &f,
            &ty("(I -o I) -o I"),
            &nat("star(1)"),
            &nat("star(2)"),
            &five,
            &opts(1),
        );
        assert_eq!(r.route, LinearityRoute::Observational);
        assert_eq!(r.additivity, IdentityCheck::Holds);
        assert_eq!(r.homogeneity, IdentityCheck::Holds);
    }

    #[test]
    fn vector_observations_read_back() {
        let a = ty("I & I");
        let o = EquivOptions {
            vector_observations: true,
            ..opts(0)
        };
        let ks = enum_contexts(&a, &o);
        assert_eq!(ks, vec![ElimContext::hole(a.clone())]);
        let t = nat("pair(star(1), star(2)) <+> pair(star(0), star(1))");
        let u = nat("pair(star(1), star(3))");
        assert!(matches!(
            obs_equiv(&t, &u, &a, &o),
            EquivVerdict::EquivalentUpToBound { contexts: 1, .. }
        ));
    }
}
