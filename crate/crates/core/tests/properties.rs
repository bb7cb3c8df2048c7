//! Randomised invariants over generated terms. Every case derives its terms
//! from a proptest-chosen seed fed to the generator, so a failing seed is
//! enough to replay it.

use std::collections::BTreeSet;

use oclam::denot::{basis, basis_enumerable, decidable, vadd, vsmul, Evaluator};
use oclam::encode::{matrix_to_term, term_to_matrix, term_to_vec, vec_to_term, Matrix};
use oclam::equiv::{enum_contexts, obs_equiv, observe, EquivOptions, EquivVerdict};
use oclam::gen::{GenConfig, Generator};
use oclam::reduce::{first_redex, step_at};
use oclam::semiring::{Scalar, Semiring};
use oclam::syntax::{
    alpha_eq, parse_term, print_term, substitute, DualContext, Term, Type,
};
use oclam::typecheck::{check, check_exact, infer};
use proptest::prelude::*;

fn generator(seed: u64, sr: Semiring, max_size: usize) -> Generator {
    let mut cfg = GenConfig::new(seed, sr);
    cfg.max_size = max_size;
    Generator::new(cfg)
}

/// A type with an inhabitant of the open judgement `x : a ⊢ t : b`.
fn open_term(g: &mut Generator, x: &str) -> Option<(Type, Term, Type)> {
    for _ in 0..16 {
        let a = g.type_of_depth(2);
        let b = g.gen_type();
        if let Ok(t) = g.gen_term(&[], &[(x.to_string(), a.clone())], &b) {
            return Some((a, t, b));
        }
    }
    None
}

fn manual_product(n: &Matrix, m: &Matrix, sr: Semiring) -> Vec<Vec<Scalar>> {
    let mut out = vec![vec![sr.zero(); m.cols]; n.rows];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for k in 0..n.cols {
                let p = sr.mul(&n.entries[i][k], &m.entries[k][j]).unwrap();
                *cell = sr.add(cell, &p).unwrap();
            }
        }
    }
    out
}

fn random_matrix(g: &mut Generator, rows: usize, cols: usize) -> Matrix {
    let entries = (0..rows)
        .map(|_| (0..cols).map(|_| g.gen_scalar()).collect())
        .collect();
    Matrix::new(entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_then_parsing_is_identity(seed in any::<u64>(), crat in any::<bool>()) {
        let sr = if crat { Semiring::Crat } else { Semiring::Nat };
        let mut g = generator(seed, sr, 40);
        if let Ok((t, _)) = g.gen_closed() {
            let text = print_term(&t);
            prop_assert_eq!(parse_term(&text, sr).unwrap(), t);
        }
    }

    #[test]
    fn renaming_a_binder_is_alpha_equivalent(seed in any::<u64>()) {
        let mut g = generator(seed, Semiring::Nat, 30);
        let Some((a, t, _)) = open_term(&mut g, "x") else { return Ok(()) };
        let avoid = t.all_names();
        let fresh = |base: &str| oclam::syntax::fresh_name(base, &avoid);
        let (z, w) = (fresh("z"), fresh("w"));
        let t1 = Term::lam("x", a.clone(), t.clone());
        let t2 = Term::lam(z.clone(), a.clone(), substitute(&t, "x", &Term::var(z.clone())));
        let t3 = Term::lam(w.clone(), a.clone(), substitute(&t, "x", &Term::var(w.clone())));
        prop_assert!(alpha_eq(&t1, &t1));
        prop_assert!(alpha_eq(&t1, &t2) && alpha_eq(&t2, &t1));
        prop_assert!(alpha_eq(&t2, &t3) && alpha_eq(&t1, &t3));
        if t.is_free("x") {
            let dangling = Term::lam(z, a, t.clone());
            prop_assert!(!alpha_eq(&t1, &dangling));
        }
    }

    #[test]
    fn free_variables_after_substitution(seed in any::<u64>()) {
        let mut g = generator(seed, Semiring::Nat, 30);
        let Some((a, t, _)) = open_term(&mut g, "x") else { return Ok(()) };
        let Ok(u) = g.gen_term(&[], &[("y".to_string(), Type::One)], &a) else {
            return Ok(());
        };
        let mut expected = t.free_vars();
        if expected.remove("x") {
            expected.extend(u.free_vars());
        }
        prop_assert_eq!(substitute(&t, "x", &u).free_vars(), expected);
    }

    #[test]
    fn linear_substitution_preserves_types(seed in any::<u64>()) {
        let mut g = generator(seed, Semiring::Nat, 30);
        let Some((a, t, b)) = open_term(&mut g, "x") else { return Ok(()) };
        let Ok(u) = g.gen_closed_term(&a) else { return Ok(()) };
        let s = substitute(&t, "x", &u);
        prop_assert_eq!(check_exact(&DualContext::new(), &s), Ok(b));
    }

    #[test]
    fn intuitionistic_substitution_preserves_types(seed in any::<u64>()) {
        let mut g = generator(seed, Semiring::Nat, 30);
        let a = g.type_of_depth(2);
        let b = g.gen_type();
        let Ok(t) = g.gen_term(&[("u".to_string(), a.clone())], &[], &b) else {
            return Ok(());
        };
        let Ok(v) = g.gen_closed_term(&a) else { return Ok(()) };
        let s = substitute(&t, "u", &v);
        prop_assert_eq!(check_exact(&DualContext::new(), &s), Ok(b));
    }

    #[test]
    fn weakening_and_determinism(seed in any::<u64>()) {
        let mut g = generator(seed, Semiring::Nat, 30);
        let Some((a, t, b)) = open_term(&mut g, "x") else { return Ok(()) };
        let ctx = DualContext::new().with_linear("x", a);
        let first = infer(&ctx, &t).map(|ty| ty.ty);
        prop_assert_eq!(first.clone(), infer(&ctx, &t).map(|ty| ty.ty));
        prop_assert_eq!(first, Ok(b.clone()));
        let avoid = t.all_names();
        let extra = oclam::syntax::fresh_name("extra", &avoid);
        let weak = ctx.with_intuitionistic(&extra, g.gen_type());
        prop_assert_eq!(check(&weak, &t, &b).map(|ty| ty.ty), Ok(b));
    }

    #[test]
    fn vector_terms_round_trip(seed in any::<u64>()) {
        let mut g = generator(seed, Semiring::Nat, 30);
        let a = g.gen_vector_type(5);
        let n = oclam::encode::dim(&a).unwrap();
        let v: Vec<Scalar> = (0..n).map(|_| g.gen_scalar()).collect();
        let t = vec_to_term(&v, &a).unwrap();
        prop_assert_eq!(term_to_vec(&t, &a).unwrap(), v);
        if let Ok(u) = g.gen_closed_term(&a) {
            let w = term_to_vec(&u, &a).unwrap();
            let back = vec_to_term(&w, &a).unwrap();
            prop_assert_eq!(term_to_vec(&back, &a).unwrap(), w);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn context_measure_adds_up(seed in any::<u64>()) {
        let mut g = generator(seed, Semiring::Nat, 20);
        let Ok((t, a)) = g.gen_closed() else { return Ok(()) };
        let mut opts = EquivOptions::new(Semiring::Nat);
        opts.seed = seed;
        for k in enum_contexts(&a, &opts) {
            let mk = k.plug(&Term::var("_")).measure();
            prop_assert_eq!(k.plug(&t).measure(), mk + t.measure(), "{}", k);
        }
    }

    #[test]
    fn closures_are_linear_on_basis_vectors(seed in any::<u64>()) {
        let sr = Semiring::Nat;
        let mut g = generator(seed, sr, 30);
        let a = g.type_of_depth(2);
        let b = g.type_of_depth(2);
        if !basis_enumerable(&a) || !decidable(&b) {
            return Ok(());
        }
        let f_ty = Type::lolli(a.clone(), b.clone());
        let Ok(f) = g.gen_closed_term(&f_ty) else { return Ok(()) };
        let ev = Evaluator::new(sr);
        let fv = ev.eval_closed(&f, &f_ty).unwrap();
        let es = basis(&a, sr).unwrap();
        if es.is_empty() {
            return Ok(());
        }
        let i = (seed as usize) % es.len();
        let j = (seed as usize / 7) % es.len();
        let (s, r) = (g.gen_scalar(), g.gen_scalar());
        let arg = vadd(&vsmul(&s, &es[i]), &vsmul(&r, &es[j])).unwrap();
        let lhs = ev.apply(&fv, &arg, &b).unwrap();
        let rhs = vadd(
            &vsmul(&s, &ev.apply(&fv, &es[i], &b).unwrap()),
            &vsmul(&r, &ev.apply(&fv, &es[j], &b).unwrap()),
        )
        .unwrap();
        prop_assert!(ev.sem_eq(&b, &lhs, &rhs).unwrap());
    }

    #[test]
    fn matrix_product_matches_composition(seed in any::<u64>(), rat in any::<bool>()) {
        let sr = if rat { Semiring::Rat } else { Semiring::Nat };
        let mut g = generator(seed, sr, 30);
        let a = g.gen_vector_type(3);
        let b = g.gen_vector_type(3);
        let c = g.gen_vector_type(3);
        let dim = |t: &Type| oclam::encode::dim(t).unwrap();
        let m = random_matrix(&mut g, dim(&b), dim(&a));
        let n = random_matrix(&mut g, dim(&c), dim(&b));
        let composed = Term::lam(
            "v",
            a.clone(),
            Term::app(
                matrix_to_term(&n, &b, &c).unwrap(),
                Term::app(matrix_to_term(&m, &a, &b).unwrap(), Term::var("v")),
            ),
        );
        let got = term_to_matrix(&composed, &a, &c, sr).unwrap();
        prop_assert_eq!(&got.entries, &manual_product(&n, &m, sr));
        prop_assert_eq!(got, n.compose(&m).unwrap());
    }

    #[test]
    fn distinguishing_contexts_replay(seed in any::<u64>()) {
        let mut g = generator(seed, Semiring::Nat, 20);
        let Ok((t, a)) = g.gen_closed() else { return Ok(()) };
        let Ok(u) = g.gen_closed_term(&a) else { return Ok(()) };
        let mut opts = EquivOptions::new(Semiring::Nat);
        opts.seed = seed;
        if let EquivVerdict::Distinguished { context, left, right } = obs_equiv(&t, &u, &a, &opts) {
            prop_assert_ne!(&left, &right);
            prop_assert_eq!(observe(&context, &t, opts.fuel).unwrap(), left);
            prop_assert_eq!(observe(&context, &u, opts.fuel).unwrap(), right);
        }
    }

    #[test]
    fn one_step_reducts_are_not_distinguished(seed in any::<u64>()) {
        let mut g = generator(seed, Semiring::Nat, 20);
        let Ok((t, a)) = g.gen_closed() else { return Ok(()) };
        let Some(site) = first_redex(&t, false) else { return Ok(()) };
        let t1 = step_at(&t, &site).unwrap();
        let mut opts = EquivOptions::new(Semiring::Nat);
        opts.seed = seed;
        let verdict = obs_equiv(&t, &t1, &a, &opts);
        prop_assert!(!verdict.is_distinguished(), "{t} ~> {t1}: {verdict:?}");
    }
}

#[test]
fn generator_reaches_every_constructor() {
    let mut g = generator(2024, Semiring::Nat, 40);
    let mut seen = BTreeSet::new();
    for _ in 0..10_000 {
        if let Ok((t, _)) = g.gen_closed() {
            t.visit(&mut |u| {
                seen.insert(u.constructor_name());
            });
        }
    }
    let missing: Vec<_> = Term::CONSTRUCTORS
        .into_iter()
        .filter(|c| !seen.contains(c))
        .collect();
    assert!(missing.is_empty(), "never generated: {missing:?}");
}
