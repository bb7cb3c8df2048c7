//! Element-level evaluation in the model of semimodules over the scalars.
//!
//! Types are read as semimodules: `1` is the scalars, `&` and `⊕` are both
//! the direct sum, `⊤` and `0` are the zero module, `⊗` is the tensor
//! product, `⊸` is the module of linear maps and `!A` is the free
//! semimodule over the elements of `A`. Elements of `!A` and `A ⊗ B` are
//! finite formal sums; functions are formal sums of closures.
//!
//! A term `Υ; Γ ⊢ t : A` denotes a map that is linear in every binding, so
//! an intuitionistic binding `Σ sⱼ·[vⱼ]` may be split into its atoms and the
//! results recombined with the weights. Where that splitting happens is
//! chosen by [`BangMode`]; both modes compute the same values.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::semiring::{Scalar, Semiring};
use crate::syntax::{DualContext, Name, Side, Term, Type};
use crate::reduce::{step_at, ReduceError, RedexSite};
use crate::typecheck::{infer, TypeError};

/// An element of the denotation of some type.
#[derive(Clone, Debug, PartialEq)]
pub enum SemValue {
    Scalar(Scalar),
    /// Element of a direct sum, for both `&` and `⊕`.
    Pair(Box<SemValue>, Box<SemValue>),
    /// The only element of the zero module (`⊤` and `0`).
    Zero,
    /// `Σ wᵢ·(pᵢ ⊗ qᵢ)`.
    Tensor(Vec<(Scalar, SemValue, SemValue)>),
    /// `Σ wᵢ·[vᵢ]`, atoms of the free semimodule.
    Bang(Vec<(Scalar, SemValue)>),
    /// `Σ wᵢ·fᵢ`, a linear combination of closures.
    Fun(Vec<(Scalar, Closure)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Closure {
    pub param: Name,
    pub param_ty: Type,
    pub body: Term,
    pub cod: Type,
    pub env: SemEnv,
}

/// Values for the free variables of a term. Intuitionistic bindings hold
/// elements of `!A` (always [`SemValue::Bang`]) next to the type `A`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SemEnv {
    pub intuitionistic: BTreeMap<Name, (Type, SemValue)>,
    pub linear: BTreeMap<Name, (Type, SemValue)>,
}

impl SemEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_linear(mut self, x: &str, ty: Type, v: SemValue) -> Self {
        self.intuitionistic.remove(x);
        self.linear.insert(x.to_string(), (ty, v));
        self
    }

    /// Bind `x : A` intuitionistically to an element of `!A`.
    pub fn with_intuitionistic(mut self, x: &str, ty: Type, v: SemValue) -> Self {
        self.linear.remove(x);
        self.intuitionistic.insert(x.to_string(), (ty, v));
        self
    }

    pub fn context(&self) -> DualContext {
        DualContext {
            intuitionistic: self
                .intuitionistic
                .iter()
                .map(|(x, (t, _))| (x.clone(), t.clone()))
                .collect(),
            linear: self
                .linear
                .iter()
                .map(|(x, (t, _))| (x.clone(), t.clone()))
                .collect(),
        }
    }

    fn singletons(&self) -> bool {
        self.intuitionistic.values().all(|(_, v)| match v {
            SemValue::Bang(atoms) => atoms.len() == 1 && atoms[0].0.is_one(),
            _ => false,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DenotError {
    #[error("value does not have the shape of its type: {0}")]
    Shape(String),
    #[error("no decidable equality at type `{0}`")]
    Unsupported(Type),
    #[error(transparent)]
    Type(#[from] TypeError),
}

type DResult<T> = Result<T, DenotError>;

fn shape<T>(what: impl Into<String>) -> DResult<T> {
    Err(DenotError::Shape(what.into()))
}

/// Where intuitionistic bindings are split into atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BangMode {
    /// At `letbang`, as soon as a bang value is bound.
    #[default]
    Eager,
    /// Keep whole formal sums bound and split at every rule that
    /// duplicates the intuitionistic context.
    Deferred,
}

/// What a type denotes, as far as testing is concerned.
#[derive(Clone, Debug, PartialEq)]
pub struct SemType {
    pub ty: Type,
    /// Built from `1`, `⊤`, `0`, `&`, `⊕`, `⊗` only.
    pub basis_enumerable: bool,
    pub basis: Option<Vec<SemValue>>,
    pub decidable: bool,
}

pub fn basis_enumerable(a: &Type) -> bool {
    match a {
        Type::One | Type::Top | Type::Zero => true,
        Type::With(b, c) | Type::Plus(b, c) | Type::Tensor(b, c) => {
            basis_enumerable(b) && basis_enumerable(c)
        }
        Type::Lolli(..) | Type::Bang(_) => false,
    }
}

/// Whether [`canonicalize`] succeeds on every element of `a`.
pub fn decidable(a: &Type) -> bool {
    match a {
        Type::One | Type::Top | Type::Zero => true,
        Type::With(b, c) | Type::Plus(b, c) | Type::Tensor(b, c) => decidable(b) && decidable(c),
        Type::Bang(b) => decidable(b),
        Type::Lolli(b, c) => basis_enumerable(b) && decidable(c),
    }
}

pub fn interp_type(a: &Type, semiring: Semiring) -> SemType {
    SemType {
        ty: a.clone(),
        basis_enumerable: basis_enumerable(a),
        basis: basis(a, semiring),
        decidable: decidable(a),
    }
}

/// A basis of the free semimodule `⟦a⟧`, when `a` is basis-enumerable.
pub fn basis(a: &Type, semiring: Semiring) -> Option<Vec<SemValue>> {
    match a {
        Type::One => Some(vec![SemValue::Scalar(semiring.one())]),
        Type::Top | Type::Zero => Some(vec![]),
        Type::With(b, c) | Type::Plus(b, c) => {
            let (bb, bc) = (basis(b, semiring)?, basis(c, semiring)?);
            let (zb, zc) = (vzero(b, semiring), vzero(c, semiring));
            Some(
                bb.into_iter()
                    .map(|v| SemValue::pair(v, zc.clone()))
                    .chain(bc.into_iter().map(|w| SemValue::pair(zb.clone(), w)))
                    .collect(),
            )
        }
        Type::Tensor(b, c) => {
            let (bb, bc) = (basis(b, semiring)?, basis(c, semiring)?);
            let mut out = Vec::new();
            for v in &bb {
                for w in &bc {
                    out.push(SemValue::Tensor(vec![(semiring.one(), v.clone(), w.clone())]));
                }
            }
            Some(out)
        }
        Type::Lolli(..) | Type::Bang(_) => None,
    }
}

pub fn vzero(a: &Type, semiring: Semiring) -> SemValue {
    match a {
        Type::One => SemValue::Scalar(semiring.zero()),
        Type::Top | Type::Zero => SemValue::Zero,
        Type::With(b, c) | Type::Plus(b, c) => {
            SemValue::pair(vzero(b, semiring), vzero(c, semiring))
        }
        Type::Tensor(..) => SemValue::Tensor(vec![]),
        Type::Bang(_) => SemValue::Bang(vec![]),
        Type::Lolli(..) => SemValue::Fun(vec![]),
    }
}

impl SemValue {
    pub fn pair(a: SemValue, b: SemValue) -> SemValue {
        SemValue::Pair(Box::new(a), Box::new(b))
    }

    /// `[v]`, the atom of `!A` with weight one.
    pub fn atom(v: SemValue, semiring: Semiring) -> SemValue {
        SemValue::Bang(vec![(semiring.one(), v)])
    }

    /// Structurally zero; a zero closure combination is not detected.
    pub fn is_zero(&self) -> bool {
        match self {
            SemValue::Scalar(s) => s.is_zero(),
            SemValue::Pair(a, b) => a.is_zero() && b.is_zero(),
            SemValue::Zero => true,
            SemValue::Tensor(xs) => xs.is_empty(),
            SemValue::Bang(xs) => xs.is_empty(),
            SemValue::Fun(xs) => xs.is_empty(),
        }
    }

    fn bang_atoms(&self) -> DResult<&[(Scalar, SemValue)]> {
        match self {
            SemValue::Bang(atoms) => Ok(atoms),
            v => shape(format!("expected a bang value, found {v}")),
        }
    }
}

pub fn vadd(v: &SemValue, w: &SemValue) -> DResult<SemValue> {
    use SemValue::*;
    Ok(match (v, w) {
        (Scalar(a), Scalar(b)) => Scalar(a.add_same(b)),
        (Pair(a, b), Pair(c, d)) => SemValue::pair(vadd(a, c)?, vadd(b, d)?),
        (Zero, Zero) => Zero,
        (Tensor(a), Tensor(b)) => Tensor(merge_tensor(a.iter().chain(b).cloned())),
        (Bang(a), Bang(b)) => Bang(merge_bang(a.iter().chain(b).cloned())),
        (Fun(a), Fun(b)) => Fun(a.iter().chain(b).cloned().collect()),
        (v, w) => return shape(format!("cannot add {v} and {w}")),
    })
}

pub fn vsmul(s: &Scalar, v: &SemValue) -> SemValue {
    use SemValue::*;
    match v {
        Scalar(a) => Scalar(s.mul_same(a)),
        Pair(a, b) => SemValue::pair(vsmul(s, a), vsmul(s, b)),
        Zero => Zero,
        Tensor(xs) => Tensor(merge_tensor(
            xs.iter().map(|(w, p, q)| (s.mul_same(w), p.clone(), q.clone())),
        )),
        Bang(xs) => Bang(merge_bang(xs.iter().map(|(w, a)| (s.mul_same(w), a.clone())))),
        Fun(xs) => Fun(xs
            .iter()
            .map(|(w, c)| (s.mul_same(w), c.clone()))
            .filter(|(w, _)| !w.is_zero())
            .collect()),
    }
}

fn merge_tensor(
    items: impl Iterator<Item = (Scalar, SemValue, SemValue)>,
) -> Vec<(Scalar, SemValue, SemValue)> {
    let mut out: Vec<(Scalar, SemValue, SemValue)> = Vec::new();
    for (w, p, q) in items {
        if w.is_zero() || p.is_zero() || q.is_zero() {
            continue;
        }
        match out.iter_mut().find(|(_, p2, q2)| *p2 == p && *q2 == q) {
            Some(slot) => slot.0 = slot.0.add_same(&w),
            None => out.push((w, p, q)),
        }
    }
    out.retain(|(w, _, _)| !w.is_zero());
    out
}

/// Merge atoms that are equal as elements, drop zero weights, and order
/// atoms canonically when every atom has a canonical form.
fn merge_bang(items: impl Iterator<Item = (Scalar, SemValue)>) -> Vec<(Scalar, SemValue)> {
    let mut keyed: Vec<(Option<Canonical>, Scalar, SemValue)> = Vec::new();
    for (w, v) in items {
        if w.is_zero() {
            continue;
        }
        let key = canonical_untyped(&v);
        let found = keyed.iter_mut().find(|(k, _, v2)| match (k, &key) {
            (Some(k), Some(key)) => k == key,
            _ => *v2 == v,
        });
        match found {
            Some(slot) => slot.1 = slot.1.add_same(&w),
            None => keyed.push((key, w, v)),
        }
    }
    keyed.retain(|(_, w, _)| !w.is_zero());
    if keyed.iter().all(|(k, _, _)| k.is_some()) {
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
    }
    keyed.into_iter().map(|(_, w, v)| (w, v)).collect()
}

/// Dereliction: `Σ sᵢ·[vᵢ] ↦ Σ sᵢ·vᵢ`, at atom type `a`.
pub fn eps(a: &Type, v: &SemValue, semiring: Semiring) -> DResult<SemValue> {
    v.bang_atoms()?
        .iter()
        .try_fold(vzero(a, semiring), |acc, (s, x)| vadd(&acc, &vsmul(s, x)))
}

/// Digging: `Σ sᵢ·[vᵢ] ↦ Σ sᵢ·[[vᵢ]]`.
pub fn delta(v: &SemValue, semiring: Semiring) -> DResult<SemValue> {
    Ok(SemValue::Bang(merge_bang(v.bang_atoms()?.iter().map(
        |(s, x)| (s.clone(), SemValue::atom(x.clone(), semiring)),
    ))))
}

/// Contraction: `Σ sᵢ·[vᵢ] ↦ Σ sᵢ·([vᵢ] ⊗ [vᵢ])`.
pub fn dup(v: &SemValue, semiring: Semiring) -> DResult<SemValue> {
    Ok(SemValue::Tensor(merge_tensor(v.bang_atoms()?.iter().map(
        |(s, x)| {
            let a = SemValue::atom(x.clone(), semiring);
            (s.clone(), a.clone(), a)
        },
    ))))
}

/// Weakening: `Σ sᵢ·[vᵢ] ↦ Σ sᵢ`.
pub fn erase(v: &SemValue, semiring: Semiring) -> DResult<SemValue> {
    Ok(SemValue::Scalar(weight(v, semiring)?))
}

fn weight(v: &SemValue, semiring: Semiring) -> DResult<Scalar> {
    Ok(Scalar::sum(semiring, v.bang_atoms()?.iter().map(|(s, _)| s)))
}

/// Monoidality: `(Σ sᵢ·[vᵢ], Σ tⱼ·[wⱼ]) ↦ Σ sᵢtⱼ·[vᵢ ⊗ wⱼ]`.
pub fn merge(v: &SemValue, w: &SemValue, semiring: Semiring) -> DResult<SemValue> {
    let mut out = Vec::new();
    for (s, x) in v.bang_atoms()? {
        for (t, y) in w.bang_atoms()? {
            out.push((
                s.mul_same(t),
                SemValue::Tensor(merge_tensor(std::iter::once((
                    semiring.one(),
                    x.clone(),
                    y.clone(),
                )))),
            ));
        }
    }
    Ok(SemValue::Bang(merge_bang(out.into_iter())))
}

/// The evaluator. Scalars in terms and environments must belong to
/// `semiring`.
#[derive(Clone, Copy, Debug)]
pub struct Evaluator {
    pub semiring: Semiring,
    pub mode: BangMode,
}

impl Evaluator {
    pub fn new(semiring: Semiring) -> Self {
        Evaluator {
            semiring,
            mode: BangMode::Eager,
        }
    }

    pub fn with_mode(mut self, mode: BangMode) -> Self {
        self.mode = mode;
        self
    }

    /// `⟦t⟧` applied to `env`, where `t : ty` under the context of `env`.
    pub fn eval(&self, t: &Term, env: &SemEnv, ty: &Type) -> DResult<SemValue> {
        if self.mode == BangMode::Eager && !env.singletons() {
            return self.split(env, ty, |e| self.node(t, e, ty));
        }
        self.go(t, env, ty)
    }

    /// Value of a closed term.
    pub fn eval_closed(&self, t: &Term, ty: &Type) -> DResult<SemValue> {
        self.eval(t, &SemEnv::new(), ty)
    }

    /// The morphism `I → ⟦ty⟧` of a closed term, evaluated at `n`.
    pub fn eval_at(&self, t: &Term, ty: &Type, n: &Scalar) -> DResult<SemValue> {
        Ok(vsmul(n, &self.eval_closed(t, ty)?))
    }

    /// `f v`, for `f : a ⊸ b`.
    pub fn apply(&self, f: &SemValue, v: &SemValue, b: &Type) -> DResult<SemValue> {
        let SemValue::Fun(closures) = f else {
            return shape(format!("applying {f}"));
        };
        let mut acc = vzero(b, self.semiring);
        for (w, c) in closures {
            let env = c.env.clone().with_linear(&c.param, c.param_ty.clone(), v.clone());
            let r = self.eval(&c.body, &env, &c.cod)?;
            acc = vadd(&acc, &vsmul(w, &r))?;
        }
        Ok(acc)
    }

    /// Split every intuitionistic binding into its atoms, run `f` on each
    /// combination and recombine with the product of the weights.
    fn split(
        &self,
        env: &SemEnv,
        ty: &Type,
        f: impl Fn(&SemEnv) -> DResult<SemValue>,
    ) -> DResult<SemValue> {
        let one = self.semiring.one();
        let mut combos = vec![(one.clone(), env.clone())];
        for (x, (a, v)) in &env.intuitionistic {
            let atoms = v.bang_atoms()?;
            if atoms.len() == 1 && atoms[0].0.is_one() {
                continue;
            }
            let mut next = Vec::with_capacity(combos.len() * atoms.len());
            for (w, e) in &combos {
                for (s, atom) in atoms {
                    let mut e = e.clone();
                    e.intuitionistic
                        .insert(x.clone(), (a.clone(), SemValue::atom(atom.clone(), self.semiring)));
                    next.push((w.mul_same(s), e));
                }
            }
            combos = next;
        }
        let mut acc = vzero(ty, self.semiring);
        for (w, e) in &combos {
            acc = vadd(&acc, &vsmul(w, &f(e)?))?;
        }
        Ok(acc)
    }

    fn go(&self, t: &Term, env: &SemEnv, ty: &Type) -> DResult<SemValue> {
        if self.mode == BangMode::Deferred && duplicates_context(t) && !env.singletons() {
            return self.split(env, ty, |e| self.node(t, e, ty));
        }
        self.node(t, env, ty)
    }

    /// Product of the weights of every intuitionistic binding except `skip`:
    /// the bindings a leaf discards.
    fn discarded(&self, env: &SemEnv, skip: Option<&str>) -> DResult<Scalar> {
        let mut acc = self.semiring.one();
        for (x, (_, v)) in &env.intuitionistic {
            if Some(x.as_str()) != skip {
                acc = acc.mul_same(&weight(v, self.semiring)?);
            }
        }
        Ok(acc)
    }

    fn type_of(&self, env: &SemEnv, t: &Term) -> DResult<Type> {
        Ok(infer(&env.context(), t)?.ty)
    }

    fn node(&self, t: &Term, env: &SemEnv, ty: &Type) -> DResult<SemValue> {
        let sr = self.semiring;
        match t {
            Term::Var(x) => {
                if let Some((_, v)) = env.linear.get(x) {
                    Ok(vsmul(&self.discarded(env, None)?, v))
                } else if let Some((a, v)) = env.intuitionistic.get(x) {
                    Ok(vsmul(&self.discarded(env, Some(x))?, &eps(a, v, sr)?))
                } else {
                    shape(format!("unbound variable {x}"))
                }
            }
            Term::Sum(a, b) => vadd(&self.go(a, env, ty)?, &self.go(b, env, ty)?),
            Term::Smul(s, a) => Ok(vsmul(s, &self.go(a, env, ty)?)),
            Term::Star(s) => Ok(SemValue::Scalar(s.mul_same(&self.discarded(env, None)?))),
            Term::ElimOne(a, b) => {
                let SemValue::Scalar(s) = self.go(a, env, &Type::One)? else {
                    return shape("let1 on a non-scalar");
                };
                Ok(vsmul(&s, &self.go(b, env, ty)?))
            }
            Term::Lam { var, ty: dom, body } => {
                let Type::Lolli(_, cod) = ty else {
                    return shape(format!("lambda at type {ty}"));
                };
                Ok(SemValue::Fun(vec![(
                    sr.one(),
                    Closure {
                        param: var.clone(),
                        param_ty: dom.clone(),
                        body: (**body).clone(),
                        cod: (**cod).clone(),
                        env: env.clone(),
                    },
                )]))
            }
            Term::App(f, a) => {
                let fty = match self.type_of(env, f) {
                    Ok(fty) => fty,
                    Err(_) => Type::lolli(self.type_of(env, a)?, ty.clone()),
                };
                let Type::Lolli(dom, _) = &fty else {
                    return shape(format!("applying a term of type {fty}"));
                };
                let vf = self.go(f, env, &fty)?;
                let va = self.go(a, env, dom)?;
                self.apply(&vf, &va, ty)
            }
            Term::Tens(a, b) => {
                let Type::Tensor(ta, tb) = ty else {
                    return shape(format!("tensor at type {ty}"));
                };
                let (va, vb) = (self.go(a, env, ta)?, self.go(b, env, tb)?);
                Ok(SemValue::Tensor(merge_tensor(std::iter::once((
                    sr.one(),
                    va,
                    vb,
                )))))
            }
            Term::ElimTens {
                scrut,
                left,
                left_ty,
                right,
                right_ty,
                body,
            } => {
                let st = Type::tensor(left_ty.clone(), right_ty.clone());
                let SemValue::Tensor(atoms) = self.go(scrut, env, &st)? else {
                    return shape("lettens on a non-tensor");
                };
                let mut acc = vzero(ty, sr);
                for (w, p, q) in atoms {
                    let e = env
                        .clone()
                        .with_linear(left, left_ty.clone(), p)
                        .with_linear(right, right_ty.clone(), q);
                    acc = vadd(&acc, &vsmul(&w, &self.go(body, &e, ty)?))?;
                }
                Ok(acc)
            }
            Term::Unit => Ok(SemValue::Zero),
            Term::ElimZero { scrut, .. } => {
                self.go(scrut, env, &Type::Zero)?;
                Ok(vzero(ty, sr))
            }
            Term::Pair(a, b) => {
                let Type::With(ta, tb) = ty else {
                    return shape(format!("pair at type {ty}"));
                };
                Ok(SemValue::pair(self.go(a, env, ta)?, self.go(b, env, tb)?))
            }
            Term::ElimWith {
                side,
                scrut,
                var,
                ty: comp,
                body,
            } => {
                let st = self.type_of(env, scrut)?;
                let SemValue::Pair(l, r) = self.go(scrut, env, &st)? else {
                    return shape("projection from a non-pair");
                };
                let v = if *side == Side::Left { *l } else { *r };
                let e = env.clone().with_linear(var, comp.clone(), v);
                self.go(body, &e, ty)
            }
            Term::Inj { side, arg, other } => {
                let Type::Plus(ta, tb) = ty else {
                    return shape(format!("injection at type {ty}"));
                };
                let zero = vzero(other, sr);
                Ok(match side {
                    Side::Left => SemValue::pair(self.go(arg, env, ta)?, zero),
                    Side::Right => SemValue::pair(zero, self.go(arg, env, tb)?),
                })
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
                let st = Type::plus(left_ty.clone(), right_ty.clone());
                let SemValue::Pair(p, q) = self.go(scrut, env, &st)? else {
                    return shape("case on a non-pair");
                };
                let u = self.go(
                    left_body,
                    &env.clone().with_linear(left, left_ty.clone(), *p),
                    ty,
                )?;
                let v = self.go(
                    right_body,
                    &env.clone().with_linear(right, right_ty.clone(), *q),
                    ty,
                )?;
                vadd(&u, &v)
            }
            Term::Bang(a) => {
                let Type::Bang(inner) = ty else {
                    return shape(format!("bang at type {ty}"));
                };
                let mut body_env = env.clone();
                body_env.linear.clear();
                if body_env.singletons() {
                    let v = self.go(a, &body_env, inner)?;
                    Ok(SemValue::Bang(merge_bang(std::iter::once((sr.one(), v)))))
                } else {
                    self.split(&body_env, ty, |e| {
                        let v = self.go(a, e, inner)?;
                        Ok(SemValue::Bang(merge_bang(std::iter::once((sr.one(), v)))))
                    })
                }
            }
            Term::ElimBang {
                scrut,
                var,
                ty: a,
                body,
            } => {
                let vs = self.go(scrut, env, &Type::bang(a.clone()))?;
                match self.mode {
                    BangMode::Deferred => {
                        let e = env.clone().with_intuitionistic(var, a.clone(), vs);
                        self.go(body, &e, ty)
                    }
                    BangMode::Eager => {
                        let mut acc = vzero(ty, sr);
                        for (s, atom) in vs.bang_atoms()? {
                            let e = env.clone().with_intuitionistic(
                                var,
                                a.clone(),
                                SemValue::atom(atom.clone(), sr),
                            );
                            acc = vadd(&acc, &vsmul(s, &self.go(body, &e, ty)?))?;
                        }
                        Ok(acc)
                    }
                }
            }
        }
    }
}

/// Rules whose interpretation starts by duplicating `!Υ` between premises.
fn duplicates_context(t: &Term) -> bool {
    matches!(
        t,
        Term::ElimOne(..)
            | Term::App(..)
            | Term::Tens(..)
            | Term::ElimTens { .. }
            | Term::ElimWith { .. }
            | Term::ElimPlus { .. }
            | Term::ElimBang { .. }
    )
}

/// Coordinates of a basis element of some free semimodule.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisKey {
    Unit,
    Left(Box<BasisKey>),
    Right(Box<BasisKey>),
    Tensor(Box<BasisKey>, Box<BasisKey>),
    /// An atom of `!A`, identified by the canonical form of its value.
    Atom(Canonical),
    /// Output coordinate on the `i`-th basis input of a linear map.
    Column(usize, Box<BasisKey>),
}

/// A value as a finite map from basis elements to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Canonical(pub BTreeMap<BasisKey, Scalar>);

impl Canonical {
    fn single(k: BasisKey, s: Scalar) -> Canonical {
        let mut c = Canonical::default();
        c.add(k, s);
        c
    }

    fn add(&mut self, k: BasisKey, s: Scalar) {
        if s.is_zero() {
            return;
        }
        match self.0.get_mut(&k) {
            Some(v) => {
                *v = v.add_same(&s);
                if v.is_zero() {
                    self.0.remove(&k);
                }
            }
            None => {
                self.0.insert(k, s);
            }
        }
    }

    fn extend(&mut self, other: Canonical, wrap: impl Fn(BasisKey) -> BasisKey) {
        for (k, s) in other.0 {
            self.add(wrap(k), s);
        }
    }

    fn tensor(&self, other: &Canonical, w: &Scalar) -> Canonical {
        let mut c = Canonical::default();
        for (k1, s1) in &self.0 {
            for (k2, s2) in &other.0 {
                c.add(
                    BasisKey::Tensor(Box::new(k1.clone()), Box::new(k2.clone())),
                    w.mul_same(s1).mul_same(s2),
                );
            }
        }
        c
    }
}

/// Canonical form without type information; fails on closures.
fn canonical_untyped(v: &SemValue) -> Option<Canonical> {
    Some(match v {
        SemValue::Scalar(s) => Canonical::single(BasisKey::Unit, s.clone()),
        SemValue::Pair(a, b) => {
            let mut c = Canonical::default();
            c.extend(canonical_untyped(a)?, |k| BasisKey::Left(Box::new(k)));
            c.extend(canonical_untyped(b)?, |k| BasisKey::Right(Box::new(k)));
            c
        }
        SemValue::Zero => Canonical::default(),
        SemValue::Tensor(xs) => {
            let mut c = Canonical::default();
            for (w, p, q) in xs {
                c.extend(
                    canonical_untyped(p)?.tensor(&canonical_untyped(q)?, w),
                    |k| k,
                );
            }
            c
        }
        SemValue::Bang(xs) => {
            let mut c = Canonical::default();
            for (w, a) in xs {
                c.add(BasisKey::Atom(canonical_untyped(a)?), w.clone());
            }
            c
        }
        SemValue::Fun(_) => return None,
    })
}

impl Evaluator {
    /// Canonical form of `v ∈ ⟦a⟧`; linear maps are tabulated on a basis of
    /// their domain.
    pub fn canonicalize(&self, a: &Type, v: &SemValue) -> DResult<Canonical> {
        if !decidable(a) {
            return Err(DenotError::Unsupported(a.clone()));
        }
        self.canon(a, v)
    }

    fn canon(&self, a: &Type, v: &SemValue) -> DResult<Canonical> {
        Ok(match (a, v) {
            (Type::One, SemValue::Scalar(s)) => Canonical::single(BasisKey::Unit, s.clone()),
            (Type::Top | Type::Zero, SemValue::Zero) => Canonical::default(),
            (Type::With(b, c) | Type::Plus(b, c), SemValue::Pair(x, y)) => {
                let mut out = Canonical::default();
                out.extend(self.canon(b, x)?, |k| BasisKey::Left(Box::new(k)));
                out.extend(self.canon(c, y)?, |k| BasisKey::Right(Box::new(k)));
                out
            }
            (Type::Tensor(b, c), SemValue::Tensor(xs)) => {
                let mut out = Canonical::default();
                for (w, p, q) in xs {
                    out.extend(self.canon(b, p)?.tensor(&self.canon(c, q)?, w), |k| k);
                }
                out
            }
            (Type::Bang(b), SemValue::Bang(xs)) => {
                let mut out = Canonical::default();
                for (w, x) in xs {
                    out.add(BasisKey::Atom(self.canon(b, x)?), w.clone());
                }
                out
            }
            (Type::Lolli(b, c), SemValue::Fun(_)) => {
                let Some(inputs) = basis(b, self.semiring) else {
                    return Err(DenotError::Unsupported(a.clone()));
                };
                let mut out = Canonical::default();
                for (i, e) in inputs.iter().enumerate() {
                    let r = self.apply(v, e, c)?;
                    out.extend(self.canon(c, &r)?, |k| BasisKey::Column(i, Box::new(k)));
                }
                out
            }
            (a, v) => return shape(format!("{v} is not an element of {a}")),
        })
    }

    /// Equality in `⟦a⟧`.
    pub fn sem_eq(&self, a: &Type, v: &SemValue, w: &SemValue) -> DResult<bool> {
        Ok(self.canonicalize(a, v)? == self.canonicalize(a, w)?)
    }

    /// Entries of an element of a vector type, in the order of its leaves.
    pub fn coefficients(&self, a: &Type, v: &SemValue) -> DResult<Vec<Scalar>> {
        let c = self.canonicalize(a, v)?;
        let mut out = Vec::new();
        fn leaves(a: &Type, prefix: &mut Vec<Side>, out: &mut Vec<BasisKey>) -> bool {
            match a {
                Type::One => {
                    let key = prefix.iter().rev().fold(BasisKey::Unit, |k, s| match s {
                        Side::Left => BasisKey::Left(Box::new(k)),
                        Side::Right => BasisKey::Right(Box::new(k)),
                    });
                    out.push(key);
                    true
                }
                Type::With(b, c) => {
                    prefix.push(Side::Left);
                    let ok = leaves(b, prefix, out);
                    prefix.pop();
                    prefix.push(Side::Right);
                    let ok = ok && leaves(c, prefix, out);
                    prefix.pop();
                    ok
                }
                _ => false,
            }
        }
        let mut keys = Vec::new();
        if !leaves(a, &mut Vec::new(), &mut keys) {
            return Err(DenotError::Unsupported(a.clone()));
        }
        for k in keys {
            out.push(c.0.get(&k).cloned().unwrap_or_else(|| self.semiring.zero()));
        }
        Ok(out)
    }
}

impl fmt::Display for SemValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn sum<T>(
            f: &mut fmt::Formatter<'_>,
            items: &[T],
            each: impl Fn(&mut fmt::Formatter<'_>, &T) -> fmt::Result,
        ) -> fmt::Result {
            if items.is_empty() {
                return f.write_str("0");
            }
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(" + ")?;
                }
                each(f, x)?;
            }
            Ok(())
        }
        match self {
            SemValue::Scalar(s) => write!(f, "{s}"),
            SemValue::Pair(a, b) => write!(f, "({a}, {b})"),
            SemValue::Zero => f.write_str("0"),
            SemValue::Tensor(xs) => {
                f.write_str("[")?;
                sum(f, xs, |f, (w, p, q)| write!(f, "{w}.({p} * {q})"))?;
                f.write_str("]")
            }
            SemValue::Bang(xs) => {
                f.write_str("![")?;
                sum(f, xs, |f, (w, v)| write!(f, "{w}.{v}"))?;
                f.write_str("]")
            }
            SemValue::Fun(xs) => {
                f.write_str("<")?;
                sum(f, xs, |f, (w, c)| write!(f, "{w}.fun {}", c.param))?;
                f.write_str(">")
            }
        }
    }
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKey::Unit => f.write_str("*"),
            BasisKey::Left(k) => write!(f, "l.{k}"),
            BasisKey::Right(k) => write!(f, "r.{k}"),
            BasisKey::Tensor(a, b) => write!(f, "({a} * {b})"),
            BasisKey::Atom(c) => write!(f, "!{{{c}}}"),
            BasisKey::Column(i, k) => write!(f, "col{i}.{k}"),
        }
    }
}

impl fmt::Display for Canonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, s)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{s}:{k}")?;
        }
        Ok(())
    }
}

/// Environments for the free variables of `ctx`: basis elements for linear
/// bindings; single atoms on basis elements and one small formal sum for
/// intuitionistic ones. `None` when some binding has no enumerable basis.
/// At most `limit` environments are returned.
pub fn sample_envs(ctx: &DualContext, semiring: Semiring, limit: usize) -> Option<Vec<SemEnv>> {
    let mut envs = vec![SemEnv::new()];
    for (x, ty) in &ctx.linear {
        let b = basis(ty, semiring)?;
        envs = envs
            .iter()
            .flat_map(|e| b.iter().map(|v| e.clone().with_linear(x, ty.clone(), v.clone())))
            .take(limit)
            .collect();
    }
    for (x, ty) in &ctx.intuitionistic {
        let b = basis(ty, semiring)?;
        let one = semiring.one();
        let mut atoms: Vec<SemValue> = b
            .iter()
            .map(|v| SemValue::Bang(vec![(one.clone(), v.clone())]))
            .collect();
        let mut mix: Vec<(Scalar, SemValue)> = b
            .iter()
            .take(2)
            .enumerate()
            .map(|(i, v)| (semiring.from_int(i as i64 + 2), v.clone()))
            .collect();
        if b.is_empty() {
            mix.push((semiring.from_int(2), vzero(ty, semiring)));
        }
        atoms.push(SemValue::Bang(mix));
        envs = envs
            .iter()
            .flat_map(|e| {
                atoms
                    .iter()
                    .map(|v| e.clone().with_intuitionistic(x, ty.clone(), v.clone()))
            })
            .take(limit)
            .collect();
    }
    Some(envs)
}

/// Outcome of comparing a term with one of its reducts.
#[derive(Clone, Debug, PartialEq)]
pub struct SoundnessReport {
    /// Environments on which both sides were compared.
    pub checked: usize,
    /// Environments the model could not handle.
    pub skipped: usize,
    pub failure: Option<SoundnessFailure>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SoundnessFailure {
    pub reduct: Term,
    pub env: String,
    pub before: String,
    pub after: String,
}

impl Evaluator {
    /// Compare `⟦t⟧` and `⟦r⟧` for the reduct `r` of `t : ty` at `site`, on
    /// every environment in `envs`.
    pub fn soundness_check(
        &self,
        t: &Term,
        ty: &Type,
        envs: &[SemEnv],
        site: &RedexSite,
    ) -> Result<SoundnessReport, SoundnessError> {
        if !decidable(ty) {
            return Err(SoundnessError::Denot(DenotError::Unsupported(ty.clone())));
        }
        let r = step_at(t, site)?;
        let mut report = SoundnessReport {
            checked: 0,
            skipped: 0,
            failure: None,
        };
        for env in envs {
            let (v, w) = match (self.eval(t, env, ty), self.eval(&r, env, ty)) {
                (Ok(v), Ok(w)) => (v, w),
                (Err(DenotError::Unsupported(_)), _) | (_, Err(DenotError::Unsupported(_))) => {
                    report.skipped += 1;
                    continue;
                }
                (Err(e), _) | (_, Err(e)) => return Err(e.into()),
            };
            report.checked += 1;
            let (cv, cw) = (self.canonicalize(ty, &v)?, self.canonicalize(ty, &w)?);
            if cv != cw {
                report.failure = Some(SoundnessFailure {
                    reduct: r,
                    env: format!("{env:?}"),
                    before: cv.to_string(),
                    after: cw.to_string(),
                });
                break;
            }
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SoundnessError {
    #[error(transparent)]
    Denot(#[from] DenotError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}
