//! The rewrite system: β-rules for every connective plus the commutation
//! rules that push sums and scalar products through introductions of
//! `1`, `⊸`, `⊤`, `&` and through eliminations of `⊗`, `⊕`, `!`.
//!
//! Reduction is full: redexes are contracted anywhere, including under
//! binders and under `bang`.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::syntax::{fresh_name, substitute, substitute_many, Side, Subst, Term, Type};

pub const DEFAULT_FUEL: u64 = 100_000;

/// A rewrite rule. Declaration order is the order in which rules are tried
/// at a single position: cuts first, then commutations, then the ultra
/// rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `let1(a.⋆, t) → a • t`
    BetaOne,
    /// `(λx.t) u → (u/x)t`
    BetaLam,
    /// `lettens(u ⊗ v, x y. w) → (u/x, v/y)w`
    BetaTens,
    /// `fst(⟨t₁, t₂⟩, x. v) → (t₁/x)v`
    BetaFst,
    /// `snd(⟨t₁, t₂⟩, x. v) → (t₂/x)v`
    BetaSnd,
    /// `case(inl(t), x. v, y. w) → (t/x)v`
    BetaInl,
    /// `case(inr(u), x. v, y. w) → (u/y)w`
    BetaInr,
    /// `letbang(!t, x. u) → (t/x)u`
    BetaBang,
    /// `a.⋆ ⊞ b.⋆ → (a+b).⋆`
    StarSum,
    /// `a • b.⋆ → (a×b).⋆`
    StarSmul,
    /// `(λx.t) ⊞ (λx.u) → λx.(t ⊞ u)`
    LamSum,
    /// `a • λx.t → λx. a • t`
    LamSmul,
    /// `lettens(t ⊞ u, …) → lettens(t, …) ⊞ lettens(u, …)`
    TensSum,
    /// `lettens(a • t, …) → a • lettens(t, …)`
    TensSmul,
    /// `⟨⟩ ⊞ ⟨⟩ → ⟨⟩`
    UnitSum,
    /// `a • ⟨⟩ → ⟨⟩`
    UnitSmul,
    /// `⟨t,u⟩ ⊞ ⟨v,w⟩ → ⟨t ⊞ v, u ⊞ w⟩`
    PairSum,
    /// `a • ⟨t,u⟩ → ⟨a • t, a • u⟩`
    PairSmul,
    /// `case(t ⊞ u, …) → case(t, …) ⊞ case(u, …)`
    CaseSum,
    /// `case(a • t, …) → a • case(t, …)`
    CaseSmul,
    /// `letbang(t ⊞ u, …) → letbang(t, …) ⊞ letbang(u, …)`
    BangSum,
    /// `letbang(a • t, …) → a • letbang(t, …)`
    BangSmul,
    /// Ultra: `t ⊞ u → t`
    UltraLeft,
    /// Ultra: `t ⊞ u → u`
    UltraRight,
    /// Ultra: `a • t → t`
    UltraSmul,
}

impl Rule {
    pub fn is_ultra(self) -> bool {
        matches!(self, Rule::UltraLeft | Rule::UltraRight | Rule::UltraSmul)
    }

    pub fn is_beta(self) -> bool {
        self <= Rule::BetaBang
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("rule names serialize");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

/// A position in a term together with the rule that applies there.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RedexSite {
    pub path: Vec<usize>,
    pub rule: Rule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    LeftmostOutermost,
    /// Uniform choice among all redexes, driven by a generator seeded once
    /// per normalisation.
    Random(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("rule {rule} does not apply at path {path:?}")]
    InvalidSite { path: Vec<usize>, rule: Rule },
    #[error("fuel exhausted after {steps} steps")]
    FuelExhausted { last: Box<Term>, steps: u64 },
}

/// Rules that match at the root of `t`, in rule order.
pub fn rules_at(t: &Term, ultra: bool) -> Vec<Rule> {
    let mut out = Vec::new();
    match t {
        Term::ElimOne(a, _) if matches!(**a, Term::Star(_)) => out.push(Rule::BetaOne),
        Term::App(f, _) if matches!(**f, Term::Lam { .. }) => out.push(Rule::BetaLam),
        Term::ElimTens { scrut, .. } => match **scrut {
            Term::Tens(..) => out.push(Rule::BetaTens),
            Term::Sum(..) => out.push(Rule::TensSum),
            Term::Smul(..) => out.push(Rule::TensSmul),
            _ => {}
        },
        Term::ElimWith { side, scrut, .. } if matches!(**scrut, Term::Pair(..)) => {
            out.push(match side {
                Side::Left => Rule::BetaFst,
                Side::Right => Rule::BetaSnd,
            })
        }
        Term::ElimPlus { scrut, .. } => match **scrut {
            Term::Inj {
                side: Side::Left, ..
            } => out.push(Rule::BetaInl),
            Term::Inj {
                side: Side::Right, ..
            } => out.push(Rule::BetaInr),
            Term::Sum(..) => out.push(Rule::CaseSum),
            Term::Smul(..) => out.push(Rule::CaseSmul),
            _ => {}
        },
        Term::ElimBang { scrut, .. } => match **scrut {
            Term::Bang(_) => out.push(Rule::BetaBang),
            Term::Sum(..) => out.push(Rule::BangSum),
            Term::Smul(..) => out.push(Rule::BangSmul),
            _ => {}
        },
        Term::Sum(a, b) => match (&**a, &**b) {
            (Term::Star(x), Term::Star(y)) if x.semiring() == y.semiring() => {
                out.push(Rule::StarSum)
            }
            (Term::Lam { ty: s, .. }, Term::Lam { ty: r, .. }) if s == r => out.push(Rule::LamSum),
            (Term::Unit, Term::Unit) => out.push(Rule::UnitSum),
            (Term::Pair(..), Term::Pair(..)) => out.push(Rule::PairSum),
            _ => {}
        },
        Term::Smul(a, b) => match &**b {
            Term::Star(x) if x.semiring() == a.semiring() => out.push(Rule::StarSmul),
            Term::Lam { .. } => out.push(Rule::LamSmul),
            Term::Unit => out.push(Rule::UnitSmul),
            Term::Pair(..) => out.push(Rule::PairSmul),
            _ => {}
        },
        _ => {}
    }
    if ultra {
        match t {
            Term::Sum(..) => out.extend([Rule::UltraLeft, Rule::UltraRight]),
            Term::Smul(..) => out.push(Rule::UltraSmul),
            _ => {}
        }
    }
    out
}

/// Every redex of `t`: preorder over positions, rule order within a
/// position.
pub fn redexes(t: &Term, ultra: bool) -> Vec<RedexSite> {
    let mut out = Vec::new();
    collect_redexes(t, ultra, &mut Vec::new(), &mut out);
    out
}

fn collect_redexes(t: &Term, ultra: bool, path: &mut Vec<usize>, out: &mut Vec<RedexSite>) {
    for rule in rules_at(t, ultra) {
        out.push(RedexSite {
            path: path.clone(),
            rule,
        });
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        collect_redexes(c, ultra, path, out);
        path.pop();
    }
}

/// The leftmost-outermost redex, without enumerating the rest.
pub fn first_redex(t: &Term, ultra: bool) -> Option<RedexSite> {
    fn go(t: &Term, ultra: bool, path: &mut Vec<usize>) -> Option<RedexSite> {
        if let Some(&rule) = rules_at(t, ultra).first() {
            return Some(RedexSite {
                path: path.clone(),
                rule,
            });
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            let found = go(c, ultra, path);
            path.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
    go(t, ultra, &mut Vec::new())
}

pub fn is_normal(t: &Term) -> bool {
    first_redex(t, false).is_none()
}

/// Contract `rule` at the root of `t`, or `None` if it does not match.
pub fn contract(t: &Term, rule: Rule) -> Option<Term> {
    use Rule::*;
    let out = match (rule, t) {
        (BetaOne, Term::ElimOne(a, u)) => match &**a {
            Term::Star(s) => Term::smul(s.clone(), (**u).clone()),
            _ => return None,
        },
        (BetaLam, Term::App(f, u)) => match &**f {
            Term::Lam { var, body, .. } => substitute(body, var, u),
            _ => return None,
        },
        (
            BetaTens,
            Term::ElimTens {
                scrut,
                left,
                right,
                body,
                ..
            },
        ) => match &**scrut {
            Term::Tens(u, v) => {
                let mut map = Subst::new();
                map.insert(left.clone(), (**u).clone());
                map.insert(right.clone(), (**v).clone());
                substitute_many(body, &map)
            }
            _ => return None,
        },
        (
            BetaFst | BetaSnd,
            Term::ElimWith {
                side,
                scrut,
                var,
                body,
                ..
            },
        ) => match (&**scrut, side, rule) {
            (Term::Pair(a, _), Side::Left, BetaFst) => substitute(body, var, a),
            (Term::Pair(_, b), Side::Right, BetaSnd) => substitute(body, var, b),
            _ => return None,
        },
        (
            BetaInl | BetaInr,
            Term::ElimPlus {
                scrut,
                left,
                left_body,
                right,
                right_body,
                ..
            },
        ) => match (&**scrut, rule) {
            (
                Term::Inj {
                    side: Side::Left,
                    arg,
                    ..
                },
                BetaInl,
            ) => substitute(left_body, left, arg),
            (
                Term::Inj {
                    side: Side::Right,
                    arg,
                    ..
                },
                BetaInr,
            ) => substitute(right_body, right, arg),
            _ => return None,
        },
        (BetaBang, Term::ElimBang { scrut, var, body, .. }) => match &**scrut {
            Term::Bang(a) => substitute(body, var, a),
            _ => return None,
        },
        (StarSum, Term::Sum(a, b)) => match (&**a, &**b) {
            (Term::Star(x), Term::Star(y)) => {
                Term::Star(x.semiring().add(x, y).ok()?)
            }
            _ => return None,
        },
        (StarSmul, Term::Smul(a, b)) => match &**b {
            Term::Star(y) => Term::Star(a.semiring().mul(a, y).ok()?),
            _ => return None,
        },
        (LamSum, Term::Sum(a, b)) => match (&**a, &**b) {
            (
                Term::Lam {
                    var: x,
                    ty: s,
                    body: t1,
                },
                Term::Lam {
                    var: y,
                    ty: r,
                    body: t2,
                },
            ) if s == r => {
                let (z, l, rt) = merge_binders(x, t1, y, t2);
                Term::lam(z, s.clone(), Term::sum(l, rt))
            }
            _ => return None,
        },
        (LamSmul, Term::Smul(a, b)) => match &**b {
            Term::Lam { var, ty, body } => {
                Term::lam(var.clone(), ty.clone(), Term::smul(a.clone(), (**body).clone()))
            }
            _ => return None,
        },
        (UnitSum, Term::Sum(a, b)) if **a == Term::Unit && **b == Term::Unit => Term::Unit,
        (UnitSmul, Term::Smul(_, b)) if **b == Term::Unit => Term::Unit,
        (PairSum, Term::Sum(a, b)) => match (&**a, &**b) {
            (Term::Pair(t1, u1), Term::Pair(t2, u2)) => Term::pair(
                Term::sum((**t1).clone(), (**t2).clone()),
                Term::sum((**u1).clone(), (**u2).clone()),
            ),
            _ => return None,
        },
        (PairSmul, Term::Smul(a, b)) => match &**b {
            Term::Pair(t1, u1) => Term::pair(
                Term::smul(a.clone(), (**t1).clone()),
                Term::smul(a.clone(), (**u1).clone()),
            ),
            _ => return None,
        },
        (TensSum | CaseSum | BangSum, _) => {
            let scrut = eliminated(t, rule)?;
            let Term::Sum(l, r) = scrut else {
                return None;
            };
            Term::sum(with_scrutinee(t, (**l).clone()), with_scrutinee(t, (**r).clone()))
        }
        (TensSmul | CaseSmul | BangSmul, _) => {
            let scrut = eliminated(t, rule)?;
            let Term::Smul(a, inner) = scrut else {
                return None;
            };
            Term::smul(a.clone(), with_scrutinee(t, (**inner).clone()))
        }
        (UltraLeft, Term::Sum(a, _)) => (**a).clone(),
        (UltraRight, Term::Sum(_, b)) => (**b).clone(),
        (UltraSmul, Term::Smul(_, b)) => (**b).clone(),
        _ => return None,
    };
    Some(out)
}

/// The scrutinee of the eliminator a commutation rule acts on.
fn eliminated(t: &Term, rule: Rule) -> Option<&Term> {
    use Rule::*;
    match (rule, t) {
        (TensSum | TensSmul, Term::ElimTens { scrut, .. })
        | (CaseSum | CaseSmul, Term::ElimPlus { scrut, .. })
        | (BangSum | BangSmul, Term::ElimBang { scrut, .. }) => Some(scrut),
        _ => None,
    }
}

fn with_scrutinee(t: &Term, new: Term) -> Term {
    let mut out = t.clone();
    *out.children_mut()[0] = new;
    out
}

/// Bring `λx.t₁` and `λy.t₂` under a common binder.
fn merge_binders(x: &str, t1: &Term, y: &str, t2: &Term) -> (String, Term, Term) {
    if x == y {
        return (x.to_string(), t1.clone(), t2.clone());
    }
    if !t2.is_free(x) {
        return (x.to_string(), t1.clone(), substitute(t2, y, &Term::var(x)));
    }
    let mut avoid: BTreeSet<String> = t1.all_names();
    avoid.extend(t2.all_names());
    let z = fresh_name(x, &avoid);
    (
        z.clone(),
        substitute(t1, x, &Term::var(z.as_str())),
        substitute(t2, y, &Term::var(z.as_str())),
    )
}

/// Contract the redex at `site`, leaving the rest of the term untouched.
pub fn step_at(t: &Term, site: &RedexSite) -> Result<Term, ReduceError> {
    let invalid = || ReduceError::InvalidSite {
        path: site.path.clone(),
        rule: site.rule,
    };
    let sub = t.subterm(&site.path).ok_or_else(invalid)?;
    let contracted = contract(sub, site.rule).ok_or_else(invalid)?;
    let mut out = t.clone();
    *out.subterm_mut(&site.path).expect("path checked above") = contracted;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub term: Term,
    pub steps: u64,
    /// Every intermediate term, starting with the input, when requested.
    pub trace: Option<Vec<Term>>,
}

#[derive(Clone, Copy, Debug)]
pub struct NormalizeOptions {
    pub strategy: Strategy,
    pub fuel: u64,
    pub ultra: bool,
    pub trace: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            strategy: Strategy::LeftmostOutermost,
            fuel: DEFAULT_FUEL,
            ultra: false,
            trace: false,
        }
    }
}

/// Contract strategy-chosen redexes until none remain or `fuel` steps have
/// been taken.
pub fn normalize(t: &Term, opts: NormalizeOptions) -> Result<Normalized, ReduceError> {
    let mut rng = match opts.strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::LeftmostOutermost => None,
    };
    let mut current = t.clone();
    let mut trace = opts.trace.then(|| vec![current.clone()]);
    let mut steps = 0u64;
    loop {
        let site = match rng.as_mut() {
            None => first_redex(&current, opts.ultra),
            Some(rng) => {
                let all = redexes(&current, opts.ultra);
                if all.is_empty() {
                    None
                } else {
                    let i = rng.random_range(0..all.len());
                    all.into_iter().nth(i)
                }
            }
        };
        let Some(site) = site else {
            return Ok(Normalized {
                term: current,
                steps,
                trace,
            });
        };
        if steps >= opts.fuel {
            return Err(ReduceError::FuelExhausted {
                last: Box::new(current),
                steps,
            });
        }
        current = step_at(&current, &site)?;
        steps += 1;
        if let Some(tr) = trace.as_mut() {
            tr.push(current.clone());
        }
    }
}

/// Leftmost-outermost normal form with the default fuel.
pub fn normal_form(t: &Term) -> Result<Term, ReduceError> {
    normalize(t, NormalizeOptions::default()).map(|n| n.term)
}

/// Shapes a closed irreducible term may take, by the type it inhabits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    ScalarStar,
    Lambda,
    TensorIntro,
    Sum,
    Smul,
    Unit,
    Pair,
    Inl,
    Inr,
    Bang,
    /// The term's head does not match any shape allowed for its type.
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("term is not irreducible")]
    NotNormal,
    #[error("term has free variables")]
    NotClosed,
}

/// Match a closed normal form of type `ty` against the shapes it can have:
/// `a.⋆` at `1`; `λ` at `⊸`; `⟨⟩` at `⊤`; a pair at `&`; and at `⊗`, `⊕`,
/// `!` an introduction, a sum or a scalar product.
pub fn classify_normal(t: &Term, ty: &Type) -> Result<Classification, ClassifyError> {
    if !t.is_closed() {
        return Err(ClassifyError::NotClosed);
    }
    if !is_normal(t) {
        return Err(ClassifyError::NotNormal);
    }
    use Classification as C;
    let c = match (ty, t) {
        (Type::One, Term::Star(_)) => C::ScalarStar,
        (Type::Lolli(..), Term::Lam { .. }) => C::Lambda,
        (Type::Top, Term::Unit) => C::Unit,
        (Type::With(..), Term::Pair(..)) => C::Pair,
        (Type::Tensor(..), Term::Tens(..)) => C::TensorIntro,
        (Type::Plus(..), Term::Inj { side: Side::Left, .. }) => C::Inl,
        (Type::Plus(..), Term::Inj { side: Side::Right, .. }) => C::Inr,
        (Type::Bang(_), Term::Bang(_)) => C::Bang,
        (Type::Tensor(..) | Type::Plus(..) | Type::Bang(_), Term::Sum(..)) => C::Sum,
        (Type::Tensor(..) | Type::Plus(..) | Type::Bang(_), Term::Smul(..)) => C::Smul,
        _ => C::Violation,
    };
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{Scalar, Semiring};
    use crate::syntax::{alpha_eq, parse_term};

    fn nat(src: &str) -> Term {
        parse_term(src, Semiring::Nat).unwrap()
    }

    fn n(k: i64) -> Scalar {
        Semiring::Nat.from_int(k)
    }

    #[test]
    fn star_sum_redex_at_root() {
        let sites = redexes(&nat("star(1) <+> star(2)"), false);
        assert_eq!(
            sites,
            vec![RedexSite {
                path: vec![],
                rule: Rule::StarSum
            }]
        );
    }

    #[test]
    fn lambda_is_normal() {
        assert!(redexes(&nat("\\x:I. x"), false).is_empty());
    }

    #[test]
    fn nested_redexes_in_preorder() {
        let sites = redexes(&nat("let1(star(2), star(3) <+> star(4))"), false);
        assert_eq!(
            sites,
            vec![
                RedexSite {
                    path: vec![],
                    rule: Rule::BetaOne
                },
                RedexSite {
                    path: vec![1],
                    rule: Rule::StarSum
                },
            ]
        );
    }

    #[test]
    fn step_examples() {
        let root = |rule| RedexSite { path: vec![], rule };
        assert_eq!(
            step_at(&nat("let1(star(2), t)"), &root(Rule::BetaOne)).unwrap(),
            nat("2 <.> t")
        );
        assert_eq!(
            step_at(&nat("pair(t, u) <+> pair(v, w)"), &root(Rule::PairSum)).unwrap(),
            nat("pair(t <+> v, u <+> w)")
        );
        assert_eq!(
            step_at(&nat("letbang(bang(t), x:I. tens(x, x))"), &root(Rule::BetaBang)).unwrap(),
            nat("tens(t, t)")
        );
        let err = step_at(&nat("star(1)"), &root(Rule::BetaOne)).unwrap_err();
        assert!(matches!(err, ReduceError::InvalidSite { .. }));
    }

    #[test]
    fn scalar_folding_takes_one_step() {
        let r = normalize(&nat("star(1) <+> star(2)"), NormalizeOptions::default()).unwrap();
        assert_eq!((r.term, r.steps), (Term::star(n(3)), 1));
        let r = normalize(&nat("2 <.> star(3)"), NormalizeOptions::default()).unwrap();
        assert_eq!((r.term, r.steps), (Term::star(n(6)), 1));
        for seed in 0..5 {
            let opts = NormalizeOptions {
                strategy: Strategy::Random(seed),
                ..Default::default()
            };
            assert_eq!(normalize(&nat("2 <.> star(3)"), opts).unwrap().term, Term::star(n(6)));
        }
        assert_eq!(normal_form(&nat("unit <+> unit")).unwrap(), Term::Unit);
    }

    #[test]
    fn matrix_example_applies() {
        // (a c; b d) = (2 5; 3 7) applied to (e, f) = (11, 13).
        let t = nat("(\\x:I&I. fst(x, y:I. let1(y, pair(star(2), star(3)))) <+> snd(x, z:I. let1(z, pair(star(5), star(7))))) pair(star(11), star(13))");
        let nf = normal_form(&t).unwrap();
        assert_eq!(nf, nat("pair(star(87), star(124))"));
    }

    #[test]
    fn lam_sum_renames_to_a_common_binder() {
        let t = nat("(\\x:I. let1(x, y)) <+> (\\y:I. let1(y, x))");
        let out = step_at(&t, &RedexSite { path: vec![], rule: Rule::LamSum }).unwrap();
        let expected = nat("\\z:I. let1(z, y) <+> let1(z, x)");
        assert!(alpha_eq(&out, &expected), "{out}");
    }

    #[test]
    fn commutation_through_eliminators() {
        let t = nat("letbang(bang(star(1)) <+> bang(star(2)), x:I. x)");
        assert_eq!(normal_form(&t).unwrap(), Term::star(n(3)));
        let t = nat("case(2 <.> inl[I](star(3)), a:I. a, b:I. b)");
        assert_eq!(normal_form(&t).unwrap(), Term::star(n(6)));
    }

    #[test]
    fn fuel_exhaustion_carries_last_term() {
        let t = nat("(star(1) <+> star(2)) <+> star(3)");
        let err = normalize(
            &t,
            NormalizeOptions {
                fuel: 1,
                ..Default::default()
            },
        )
        .unwrap_err();
        match err {
            ReduceError::FuelExhausted { last, steps } => {
                assert_eq!(steps, 1);
                assert_eq!(*last, nat("star(3) <+> star(3)"));
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn trace_records_every_term() {
        let t = nat("let1(star(2), star(3) <+> star(4))");
        let opts = NormalizeOptions {
            trace: true,
            ..Default::default()
        };
        let r = normalize(&t, opts).unwrap();
        let trace = r.trace.unwrap();
        assert_eq!(trace.len() as u64, r.steps + 1);
        assert_eq!(trace.first(), Some(&t));
        assert_eq!(trace.last(), Some(&Term::star(n(14))));
    }

    #[test]
    fn ultra_rules_only_in_ultra_mode() {
        let t = nat("x <+> y");
        assert!(redexes(&t, false).is_empty());
        let rules: Vec<_> = redexes(&t, true).into_iter().map(|s| s.rule).collect();
        assert_eq!(rules, vec![Rule::UltraLeft, Rule::UltraRight]);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify_normal(&nat("star(5)"), &Type::One).unwrap(),
            Classification::ScalarStar
        );
        let tt = Type::tensor(Type::One, Type::One);
        assert_eq!(
            classify_normal(&nat("tens(star(1), star(2)) <+> tens(star(3), star(4))"), &tt)
                .unwrap(),
            Classification::Sum
        );
        let ww = Type::with(Type::One, Type::One);
        assert_eq!(
            classify_normal(&nat("pair(star(1), star(2))"), &ww).unwrap(),
            Classification::Pair
        );
        assert_eq!(
            classify_normal(&nat("star(1) <+> star(2)"), &Type::One),
            Err(ClassifyError::NotNormal)
        );
        assert_eq!(
            classify_normal(&nat("x"), &Type::One),
            Err(ClassifyError::NotClosed)
        );
        assert_eq!(
            classify_normal(&nat("tens(star(1), star(2))"), &Type::One).unwrap(),
            Classification::Violation
        );
    }
}
