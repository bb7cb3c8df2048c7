//! Random well-typed terms.
//!
//! Terms are built by reading the typing rules bottom-up: at each node the
//! generator picks a rule whose conclusion matches the goal, splits the
//! linear context between premises for multiplicative rules and copies it
//! for additive ones. Every linear variable ends up consumed exactly once.
//! A node gets a fixed number of attempts, and a whole term a fixed number
//! of node visits, before the generator gives up.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::semiring::{Scalar, Semiring};
use crate::syntax::{substitute, Name, Side, Term, Type};

/// Attempts per node before backtracking.
pub const ATTEMPTS_PER_NODE: usize = 32;
/// Node visits per generated term before giving up.
const VISITS_PER_TERM: usize = 4000;

/// Relative weights of the connectives picked by [`Generator::gen_type`]:
/// `⊸`, `⊗`, `&`, `⊕`, `!`.
const CONNECTIVE_WEIGHTS: [u32; 5] = [3, 2, 3, 2, 2];
/// Relative weights of `1`, `⊤`, `0` at the leaves of a type.
const BASE_WEIGHTS: [u32; 3] = [8, 1, 1];

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_size: usize,
    pub semiring: Semiring,
    pub scalar_pool: Vec<Scalar>,
    pub type_depth: usize,
    pub allow_bang: bool,
}

impl GenConfig {
    pub fn new(seed: u64, semiring: Semiring) -> Self {
        GenConfig {
            seed,
            max_size: 40,
            semiring,
            scalar_pool: default_pool(semiring),
            type_depth: 3,
            allow_bang: true,
        }
    }
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig::new(0, Semiring::Nat)
    }
}

/// `{0, 1, 2, 3}` in the given semiring, deduplicated.
pub fn default_pool(semiring: Semiring) -> Vec<Scalar> {
    let mut pool: Vec<Scalar> = (0..4).map(|n| semiring.from_int(n)).collect();
    pool.dedup();
    pool
}

/// No term was found within the search budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GiveUp;

type Binding = (Name, Type);

#[derive(Clone, Debug, Default)]
struct Ctx {
    intuitionistic: Vec<Binding>,
    linear: Vec<(Name, Type)>,
}

impl Ctx {
    fn with_linear(&self, x: &Name, ty: &Type) -> Ctx {
        let mut c = self.clone();
        c.linear.push((x.clone(), ty.clone()));
        c
    }

    fn with_linear_vec(&self, linear: Vec<(Name, Type)>) -> Ctx {
        Ctx {
            intuitionistic: self.intuitionistic.clone(),
            linear,
        }
    }
}

#[derive(Clone, Debug)]
enum Strat {
    Linear,
    Intuitionistic(usize),
    Intro,
    Sum,
    Smul,
    ElimLinear(usize),
    ElimIntuitionistic(usize),
    Cut,
}

pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
    fresh: usize,
    visits: usize,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Generator {
            cfg,
            rng,
            fresh: 0,
            visits: 0,
        }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn gen_type(&mut self) -> Type {
        let depth = self.cfg.type_depth;
        self.type_of_depth(depth)
    }

    pub fn type_of_depth(&mut self, depth: usize) -> Type {
        if depth == 0 || self.rng.random_ratio(1, 4) {
            return match weighted(&mut self.rng, &BASE_WEIGHTS) {
                0 => Type::One,
                1 => Type::Top,
                _ => Type::Zero,
            };
        }
        let mut weights = CONNECTIVE_WEIGHTS;
        if !self.cfg.allow_bang {
            weights[4] = 0;
        }
        let d = depth - 1;
        match weighted(&mut self.rng, &weights) {
            0 => Type::lolli(self.type_of_depth(d), self.type_of_depth(d)),
            1 => Type::tensor(self.type_of_depth(d), self.type_of_depth(d)),
            2 => Type::with(self.type_of_depth(d), self.type_of_depth(d)),
            3 => Type::plus(self.type_of_depth(d), self.type_of_depth(d)),
            _ => Type::bang(self.type_of_depth(d)),
        }
    }

    /// A vector type (`1` and `&` only) with at most `max_dim` leaves.
    pub fn gen_vector_type(&mut self, max_dim: usize) -> Type {
        let n = self.rng.random_range(1..=max_dim.max(1));
        self.vector_type_of_dim(n)
    }

    pub fn vector_type_of_dim(&mut self, n: usize) -> Type {
        if n <= 1 {
            return Type::One;
        }
        let k = self.rng.random_range(1..n);
        Type::with(self.vector_type_of_dim(k), self.vector_type_of_dim(n - k))
    }

    pub fn gen_scalar(&mut self) -> Scalar {
        self.cfg
            .scalar_pool
            .choose(&mut self.rng)
            .cloned()
            .unwrap_or_else(|| self.cfg.semiring.one())
    }

    /// A closed term of type `ty`.
    pub fn gen_closed_term(&mut self, ty: &Type) -> Result<Term, GiveUp> {
        self.gen_term(&[], &[], ty)
    }

    /// A term with `Υ; Γ ⊢ t : ty` that consumes all of `Γ`.
    pub fn gen_term(
        &mut self,
        intuitionistic: &[(Name, Type)],
        linear: &[(Name, Type)],
        ty: &Type,
    ) -> Result<Term, GiveUp> {
        let ctx = Ctx {
            intuitionistic: intuitionistic.to_vec(),
            linear: linear.to_vec(),
        };
        for _ in 0..4 {
            self.visits = 0;
            let budget = self.cfg.max_size as i64;
            if let Some(t) = self.term(&ctx, ty, budget) {
                if t.size() <= self.cfg.max_size {
                    return Ok(t);
                }
            }
        }
        Err(GiveUp)
    }

    /// A random type together with a closed inhabitant, retrying types.
    pub fn gen_closed(&mut self) -> Result<(Term, Type), GiveUp> {
        for _ in 0..64 {
            let ty = self.gen_type();
            if let Ok(t) = self.gen_closed_term(&ty) {
                return Ok((t, ty));
            }
        }
        Err(GiveUp)
    }

    fn fresh(&mut self) -> Name {
        self.fresh += 1;
        format!("x{}", self.fresh)
    }

    fn term(&mut self, ctx: &Ctx, target: &Type, budget: i64) -> Option<Term> {
        self.visits += 1;
        if self.visits > VISITS_PER_TERM {
            return None;
        }
        let mut options: Vec<(Strat, u32)> = Vec::new();
        if ctx.linear.len() == 1 && ctx.linear[0].1 == *target {
            options.push((Strat::Linear, 6));
        }
        if ctx.linear.is_empty() {
            for (i, (_, ty)) in ctx.intuitionistic.iter().enumerate() {
                if ty == target {
                    options.push((Strat::Intuitionistic(i), 3));
                }
            }
        }
        let intro_ok = match target {
            Type::One | Type::Top | Type::Bang(_) => ctx.linear.is_empty(),
            Type::Zero => false,
            _ => true,
        };
        if intro_ok {
            options.push((Strat::Intro, if budget > 0 { 6 } else { 12 }));
        }
        if budget > 2 {
            options.push((Strat::Sum, 1));
            options.push((Strat::Smul, 1));
        }
        for (i, (_, ty)) in ctx.linear.iter().enumerate() {
            if *ty != Type::Top {
                options.push((Strat::ElimLinear(i), 4));
            }
        }
        if budget > 1 {
            for (i, (_, ty)) in ctx.intuitionistic.iter().enumerate() {
                if !matches!(ty, Type::Top | Type::Zero) {
                    options.push((Strat::ElimIntuitionistic(i), 1));
                }
            }
        }
        if budget > 4 {
            options.push((Strat::Cut, 2));
        }
        for _ in 0..ATTEMPTS_PER_NODE {
            if options.is_empty() || self.visits > VISITS_PER_TERM {
                return None;
            }
            let weights: Vec<u32> = options.iter().map(|(_, w)| *w).collect();
            let i = weighted(&mut self.rng, &weights);
            let strat = options[i].0.clone();
            if let Some(t) = self.apply(strat.clone(), ctx, target, budget) {
                return Some(t);
            }
            // Strategies without randomness below them fail the same way
            // every time.
            if matches!(strat, Strat::Linear | Strat::Intuitionistic(_)) {
                options.remove(i);
            }
        }
        None
    }

    fn apply(&mut self, strat: Strat, ctx: &Ctx, target: &Type, budget: i64) -> Option<Term> {
        match strat {
            Strat::Linear => Some(Term::var(&ctx.linear[0].0)),
            Strat::Intuitionistic(i) => Some(Term::var(&ctx.intuitionistic[i].0)),
            Strat::Intro => self.intro(ctx, target, budget),
            Strat::Sum => {
                let a = self.term(ctx, target, budget / 2 - 1)?;
                let b = self.term(ctx, target, budget / 2 - 1)?;
                Some(Term::sum(a, b))
            }
            Strat::Smul => {
                let s = self.gen_scalar();
                Some(Term::smul(s, self.term(ctx, target, budget - 1)?))
            }
            Strat::ElimLinear(i) => {
                let mut rest = ctx.linear.clone();
                let (x, ty) = rest.remove(i);
                self.elim(Term::var(x), &ty, &ctx.with_linear_vec(rest), target, budget - 1)
            }
            Strat::ElimIntuitionistic(i) => {
                let (x, ty) = ctx.intuitionistic[i].clone();
                self.elim(Term::var(x), &ty, ctx, target, budget - 1)
            }
            Strat::Cut => {
                let ty = self.cut_type();
                let (l, r) = self.split(&ctx.linear);
                let share = (budget / 3).max(1);
                let head = self.intro(&ctx.with_linear_vec(l), &ty, share)?;
                self.elim(head, &ty, &ctx.with_linear_vec(r), target, budget - share - 1)
            }
        }
    }

    /// Type of the redex built by a cut: small, and never `⊤` or `0`
    /// since those have no introduction to cut against.
    fn cut_type(&mut self) -> Type {
        loop {
            let ty = self.type_of_depth(2);
            if !matches!(ty, Type::Top | Type::Zero) && (self.cfg.allow_bang || !ty.contains_bang())
            {
                return ty;
            }
        }
    }

    fn split(&mut self, linear: &[Binding]) -> (Vec<Binding>, Vec<Binding>) {
        let (mut l, mut r) = (Vec::new(), Vec::new());
        for b in linear {
            if self.rng.random_bool(0.5) {
                l.push(b.clone());
            } else {
                r.push(b.clone());
            }
        }
        (l, r)
    }

    fn intro(&mut self, ctx: &Ctx, target: &Type, budget: i64) -> Option<Term> {
        match target {
            Type::One if ctx.linear.is_empty() => Some(Term::star(self.gen_scalar())),
            Type::Top if ctx.linear.is_empty() => Some(Term::Unit),
            Type::Lolli(a, b) => {
                let x = self.fresh();
                let body = self.term(&ctx.with_linear(&x, a), b, budget - 1)?;
                Some(Term::lam(x, (**a).clone(), body))
            }
            Type::Tensor(a, b) => {
                let (l, r) = self.split(&ctx.linear);
                let half = budget / 2 - 1;
                let u = self.term(&ctx.with_linear_vec(l), a, half)?;
                let v = self.term(&ctx.with_linear_vec(r), b, half)?;
                Some(Term::tens(u, v))
            }
            Type::With(a, b) => {
                let half = budget / 2 - 1;
                let u = self.term(ctx, a, half)?;
                let v = self.term(ctx, b, half)?;
                Some(Term::pair(u, v))
            }
            Type::Plus(a, b) => {
                let side = if self.rng.random_bool(0.5) {
                    Side::Left
                } else {
                    Side::Right
                };
                let (mine, other) = match side {
                    Side::Left => (a, b),
                    Side::Right => (b, a),
                };
                let u = self.term(ctx, mine, budget - 1)?;
                Some(Term::inj(side, u, (**other).clone()))
            }
            Type::Bang(a) if ctx.linear.is_empty() => {
                Some(Term::bang(self.term(ctx, a, budget - 1)?))
            }
            _ => None,
        }
    }

    /// Eliminate `head : ty` and continue towards `target` with `ctx`.
    fn elim(
        &mut self,
        head: Term,
        ty: &Type,
        ctx: &Ctx,
        target: &Type,
        budget: i64,
    ) -> Option<Term> {
        match ty {
            Type::One => Some(Term::let1(head, self.term(ctx, target, budget)?)),
            Type::Lolli(a, b) => {
                let (l, r) = self.split(&ctx.linear);
                let arg = self.term(&ctx.with_linear_vec(l), a, budget / 3)?;
                let y = self.fresh();
                let cont = self.term(
                    &ctx.with_linear_vec(r).with_linear(&y, b),
                    target,
                    budget - budget / 3,
                )?;
                Some(substitute(&cont, &y, &Term::app(head, arg)))
            }
            Type::Tensor(a, b) => {
                let (y, z) = (self.fresh(), self.fresh());
                let body = self.term(&ctx.with_linear(&y, a).with_linear(&z, b), target, budget)?;
                Some(Term::lettens(head, y, (**a).clone(), z, (**b).clone(), body))
            }
            Type::With(a, b) => {
                let (side, comp) = if self.rng.random_bool(0.5) {
                    (Side::Left, a)
                } else {
                    (Side::Right, b)
                };
                let y = self.fresh();
                let body = self.term(&ctx.with_linear(&y, comp), target, budget)?;
                Some(Term::proj(side, head, y, (**comp).clone(), body))
            }
            Type::Plus(a, b) => {
                let (y, z) = (self.fresh(), self.fresh());
                let half = budget / 2;
                let u = self.term(&ctx.with_linear(&y, a), target, half)?;
                let v = self.term(&ctx.with_linear(&z, b), target, half)?;
                Some(Term::case(head, y, (**a).clone(), u, z, (**b).clone(), v))
            }
            Type::Bang(a) => {
                let y = self.fresh();
                let mut inner = ctx.clone();
                inner.intuitionistic.push((y.clone(), (**a).clone()));
                let body = self.term(&inner, target, budget)?;
                Some(Term::letbang(head, y, (**a).clone(), body))
            }
            Type::Zero if ctx.linear.is_empty() => Some(Term::abort(head, Some(target.clone()))),
            _ => None,
        }
    }
}

fn weighted(rng: &mut ChaCha8Rng, weights: &[u32]) -> usize {
    let total: u32 = weights.iter().sum();
    let mut pick = rng.random_range(0..total.max(1));
    for (i, w) in weights.iter().enumerate() {
        if pick < *w {
            return i;
        }
        pick -= w;
    }
    weights.len() - 1
}

/// Smaller candidate terms: immediate subterms, scalars simplified to 0 or
/// 1, and the same applied one level down. Candidates may be ill-typed.
pub fn shrink(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    match t {
        Term::Star(s) => {
            let sr = s.semiring();
            if !s.is_zero() && !s.is_one() {
                out.push(Term::star(sr.zero()));
                out.push(Term::star(sr.one()));
            }
        }
        Term::Smul(s, u) => {
            out.push((**u).clone());
            let sr = s.semiring();
            for c in [sr.zero(), sr.one()] {
                if *s != c {
                    out.push(Term::smul(c, (**u).clone()));
                }
            }
        }
        _ => out.extend(t.children().into_iter().cloned()),
    }
    for i in 0..t.children().len() {
        let child = t.children()[i];
        for c in shrink(child) {
            if c.size() < child.size() {
                let mut copy = t.clone();
                *copy.children_mut()[i] = c;
                out.push(copy);
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|c| seen.insert(c.clone()));
    out
}

/// Greedily shrink `t` while `fails` keeps holding.
pub fn minimize(t: &Term, mut fails: impl FnMut(&Term) -> bool) -> Term {
    let mut current = t.clone();
    'outer: loop {
        for c in shrink(&current) {
            if c.size() < current.size() && fails(&c) {
                current = c;
                continue 'outer;
            }
        }
        return current;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::DualContext;
    use crate::typecheck::{check, check_exact};
    use std::collections::BTreeSet;

    #[test]
    fn same_seed_same_terms() {
        let run = |seed| {
            let mut g = Generator::new(GenConfig::new(seed, Semiring::Nat));
            (0..20).map(|_| g.gen_closed().map(|(t, _)| t.to_string())).collect::<Vec<_>>()
        };
        assert_eq!(run(1), run(1));
        assert_ne!(run(1), run(2));
    }

    #[test]
    fn depth_zero_types_are_base_types() {
        let mut g = Generator::new(GenConfig {
            type_depth: 0,
            ..GenConfig::new(3, Semiring::Nat)
        });
        for _ in 0..50 {
            assert!(matches!(g.gen_type(), Type::One | Type::Top | Type::Zero));
        }
    }

    #[test]
    fn no_bang_when_disallowed() {
        let mut g = Generator::new(GenConfig {
            allow_bang: false,
            ..GenConfig::new(5, Semiring::Nat)
        });
        for _ in 0..200 {
            assert!(!g.gen_type().contains_bang());
            if let Ok((t, _)) = g.gen_closed() {
                let mut bang = false;
                t.visit(&mut |u| bang |= matches!(u, Term::Bang(_) | Term::ElimBang { .. }));
                assert!(!bang, "{t}");
            }
        }
    }

    #[test]
    fn one_is_always_inhabited() {
        let mut g = Generator::new(GenConfig::new(9, Semiring::Nat));
        for _ in 0..100 {
            assert!(g.gen_closed_term(&Type::One).is_ok());
        }
    }

    #[test]
    fn zero_has_no_closed_inhabitant() {
        let mut g = Generator::new(GenConfig::new(9, Semiring::Nat));
        assert_eq!(g.gen_closed_term(&Type::Zero), Err(GiveUp));
    }

    #[test]
    fn generated_terms_typecheck() {
        let mut g = Generator::new(GenConfig::new(11, Semiring::Nat));
        let mut ok = 0;
        for _ in 0..1000 {
            if let Ok((t, ty)) = g.gen_closed() {
                check(&DualContext::new(), &t, &ty).unwrap_or_else(|e| panic!("{t} : {ty}: {e}"));
                assert!(t.size() <= 40);
                ok += 1;
            }
        }
        assert!(ok > 900, "{ok}");
    }

    #[test]
    fn open_terms_consume_their_context() {
        let mut g = Generator::new(GenConfig::new(13, Semiring::Nat));
        let lin = vec![
            ("a".to_string(), Type::One),
            ("b".to_string(), Type::with(Type::One, Type::One)),
        ];
        let int = vec![("u".to_string(), Type::lolli(Type::One, Type::One))];
        let ctx = DualContext::from_parts(int.clone(), lin.clone()).unwrap();
        for _ in 0..100 {
            let ty = g.gen_type();
            if let Ok(t) = g.gen_term(&int, &lin, &ty) {
                assert_eq!(check_exact(&ctx, &t).unwrap(), ty, "{t}");
            }
        }
    }

    #[test]
    fn every_constructor_appears() {
        let mut g = Generator::new(GenConfig::new(17, Semiring::Nat));
        let mut seen = BTreeSet::new();
        for _ in 0..2000 {
            if let Ok((t, _)) = g.gen_closed() {
                t.visit(&mut |u| {
                    seen.insert(u.constructor_name());
                });
            }
        }
        let all: BTreeSet<_> = Term::CONSTRUCTORS.into_iter().collect();
        let missing: Vec<_> = all.difference(&seen).collect();
        assert!(missing.is_empty(), "{missing:?}");
    }

    #[test]
    fn shrinking() {
        let nat = |n| Semiring::Nat.from_int(n);
        let t = Term::sum(Term::star(nat(2)), Term::star(nat(3)));
        let c = shrink(&t);
        assert!(c.contains(&Term::star(nat(2))) && c.contains(&Term::star(nat(3))));
        let s = Term::smul(nat(2), Term::star(nat(3)));
        assert!(shrink(&s).contains(&Term::star(nat(3))));
        assert!(shrink(&Term::star(nat(0))).is_empty());
        assert!(shrink(&Term::star(nat(1))).is_empty());
        let small = minimize(&t, |u| u.size() > 0);
        assert_eq!(small.size(), 1);
    }
}
