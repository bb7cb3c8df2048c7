//! Capture-avoiding substitution and α-equivalence over named binders.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Name, Term};

/// A simultaneous substitution `x₁ ↦ u₁, …, xₙ ↦ uₙ`.
pub type Subst = BTreeMap<Name, Term>;

/// `(u/x)t`.
pub fn substitute(t: &Term, x: &str, u: &Term) -> Term {
    let mut map = Subst::new();
    map.insert(x.to_string(), u.clone());
    substitute_many(t, &map)
}

/// Simultaneous capture-avoiding substitution. Bound names of `t` that would
/// capture a free variable of a replacement are freshened by priming.
pub fn substitute_many(t: &Term, map: &Subst) -> Term {
    let mut out = t.clone();
    if !map.is_empty() {
        subst_in_place(&mut out, map);
    }
    out
}

/// Priming `base` until it avoids every name in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

fn range_free_vars(map: &Subst) -> BTreeSet<Name> {
    map.values().flat_map(|u| u.free_vars()).collect()
}

fn subst_in_place(t: &mut Term, map: &Subst) {
    match t {
        Term::Var(x) => {
            if let Some(u) = map.get(x.as_str()) {
                *t = u.clone();
            }
        }
        Term::Lam { var, body, .. } => under_binders(vec![var], body, map),
        Term::ElimTens {
            scrut,
            left,
            right,
            body,
            ..
        } => {
            subst_in_place(scrut, map);
            under_binders(vec![left, right], body, map);
        }
        Term::ElimWith {
            scrut, var, body, ..
        }
        | Term::ElimBang {
            scrut, var, body, ..
        } => {
            subst_in_place(scrut, map);
            under_binders(vec![var], body, map);
        }
        Term::ElimPlus {
            scrut,
            left,
            left_body,
            right,
            right_body,
            ..
        } => {
            subst_in_place(scrut, map);
            under_binders(vec![left], left_body, map);
            under_binders(vec![right], right_body, map);
        }
        _ => {
            for c in t.children_mut() {
                subst_in_place(c, map);
            }
        }
    }
}

fn under_binders(mut binders: Vec<&mut Name>, body: &mut Term, map: &Subst) {
    let inner: Subst = map
        .iter()
        .filter(|(k, _)| !binders.iter().any(|b| **b == **k) && body.is_free(k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    if inner.is_empty() {
        return;
    }
    let range_fv = range_free_vars(&inner);
    for i in 0..binders.len() {
        if !range_fv.contains(binders[i].as_str()) {
            continue;
        }
        let mut avoid = range_fv.clone();
        avoid.extend(body.all_names());
        avoid.extend(inner.keys().cloned());
        avoid.extend(binders.iter().map(|b| (**b).clone()));
        let fresh = fresh_name(binders[i], &avoid);
        let mut rename = Subst::new();
        rename.insert(binders[i].clone(), Term::Var(fresh.clone()));
        subst_in_place(body, &rename);
        *binders[i] = fresh;
    }
    subst_in_place(body, &inner);
}

/// α-equivalence: equal up to consistent renaming of bound names. Type
/// annotations and scalars must match exactly.
pub fn alpha_eq(t1: &Term, t2: &Term) -> bool {
    alpha(t1, t2, &mut Vec::new())
}

fn lookup(env: &[(&str, &str)], x: &str, left: bool) -> Option<usize> {
    env.iter()
        .rposition(|(l, r)| if left { *l == x } else { *r == x })
}

fn alpha<'a>(t1: &'a Term, t2: &'a Term, env: &mut Vec<(&'a str, &'a str)>) -> bool {
    use Term::*;
    let bind = |env: &mut Vec<(&'a str, &'a str)>,
                    pairs: &[(&'a Name, &'a Name)],
                    a: &'a Term,
                    b: &'a Term| {
        let n = pairs.len();
        env.extend(pairs.iter().map(|(x, y)| (x.as_str(), y.as_str())));
        let ok = alpha(a, b, env);
        env.truncate(env.len() - n);
        ok
    };
    match (t1, t2) {
        (Var(x), Var(y)) => match (lookup(env, x, true), lookup(env, y, false)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Star(a), Star(b)) => a == b,
        (Unit, Unit) => true,
        (Smul(a, t), Smul(b, u)) => a == b && alpha(t, u, env),
        (Sum(a, b), Sum(c, d))
        | (ElimOne(a, b), ElimOne(c, d))
        | (App(a, b), App(c, d))
        | (Tens(a, b), Tens(c, d))
        | (Pair(a, b), Pair(c, d)) => alpha(a, c, env) && alpha(b, d, env),
        (Bang(a), Bang(b)) => alpha(a, b, env),
        (ElimZero { scrut: a, ty: s }, ElimZero { scrut: b, ty: r }) => {
            s == r && alpha(a, b, env)
        }
        (
            Inj {
                side: s1,
                arg: a,
                other: o1,
            },
            Inj {
                side: s2,
                arg: b,
                other: o2,
            },
        ) => s1 == s2 && o1 == o2 && alpha(a, b, env),
        (
            Lam {
                var: x,
                ty: a,
                body: t,
            },
            Lam {
                var: y,
                ty: b,
                body: u,
            },
        ) => a == b && bind(env, &[(x, y)], t, u),
        (
            ElimTens {
                scrut: s1,
                left: x1,
                left_ty: a1,
                right: y1,
                right_ty: b1,
                body: t1,
            },
            ElimTens {
                scrut: s2,
                left: x2,
                left_ty: a2,
                right: y2,
                right_ty: b2,
                body: t2,
            },
        ) => {
            a1 == a2
                && b1 == b2
                && alpha(s1, s2, env)
                && bind(env, &[(x1, x2), (y1, y2)], t1, t2)
        }
        (
            ElimWith {
                side: d1,
                scrut: s1,
                var: x1,
                ty: a1,
                body: t1,
            },
            ElimWith {
                side: d2,
                scrut: s2,
                var: x2,
                ty: a2,
                body: t2,
            },
        ) => d1 == d2 && a1 == a2 && alpha(s1, s2, env) && bind(env, &[(x1, x2)], t1, t2),
        (
            ElimBang {
                scrut: s1,
                var: x1,
                ty: a1,
                body: t1,
            },
            ElimBang {
                scrut: s2,
                var: x2,
                ty: a2,
                body: t2,
            },
        ) => a1 == a2 && alpha(s1, s2, env) && bind(env, &[(x1, x2)], t1, t2),
        (
            ElimPlus {
                scrut: s1,
                left: x1,
                left_ty: a1,
                left_body: u1,
                right: y1,
                right_ty: b1,
                right_body: v1,
            },
            ElimPlus {
                scrut: s2,
                left: x2,
                left_ty: a2,
                left_body: u2,
                right: y2,
                right_ty: b2,
                right_body: v2,
            },
        ) => {
            a1 == a2
                && b1 == b2
                && alpha(s1, s2, env)
                && bind(env, &[(x1, x2)], u1, u2)
                && bind(env, &[(y1, y2)], v1, v2)
        }
        _ => false,
    }
}
