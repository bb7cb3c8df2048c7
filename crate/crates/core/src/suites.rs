//! Randomised property suites.
//!
//! Each property draws terms from the generator with per-iteration seeds
//! derived from one base seed, so a report can be reproduced from the seed
//! alone. Failing terms are shrunk before they are reported.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::denot::{decidable, sample_envs, BangMode, Evaluator};
use crate::encode::{matrix_to_term, term_to_matrix, term_to_vec_with, vec_to_term, zero_term, Matrix};
use crate::equiv::{linearity_check, obs_equiv, EquivOptions, EquivVerdict, IdentityCheck};
use crate::gen::{minimize, GenConfig, Generator};
use crate::reduce::{
    classify_normal, normalize, redexes, step_at, Classification, NormalizeOptions, Rule, Strategy,
    DEFAULT_FUEL,
};
use crate::semiring::{Scalar, Semiring};
use crate::syntax::{alpha_eq, parse_term, parse_type, DualContext, Name, Term, Type};
use crate::typecheck::{check, check_closed, infer, infer_closed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Prop {
    /// Every one-step reduct keeps the type and the consumed variables.
    Sr,
    /// Leftmost-outermost and random strategies reach the same normal form.
    Confluence,
    /// Closed normal forms have the shape their type allows.
    Intro,
    /// Plain and ultra reduction stop within the fuel.
    Termination,
    /// Compiled matrices and generated functions commute with `⊞` and `•`.
    Linearity,
    /// Reduction preserves the denotation, in both bang modes.
    Soundness,
    /// A term and its normal form are equal in the model and never told
    /// apart by contexts.
    Adequacy,
    /// The model and the vector readback agree at vector types.
    Agreement,
    /// The semimodule laws hold for closed vector terms.
    Semimodule,
    /// Matrices survive compilation to a term and extraction back.
    Roundtrip,
}

impl Prop {
    pub const ALL: [Prop; 10] = [
        Prop::Sr,
        Prop::Confluence,
        Prop::Intro,
        Prop::Termination,
        Prop::Linearity,
        Prop::Soundness,
        Prop::Adequacy,
        Prop::Agreement,
        Prop::Semimodule,
        Prop::Roundtrip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Prop::Sr => "sr",
            Prop::Confluence => "confluence",
            Prop::Intro => "intro",
            Prop::Termination => "termination",
            Prop::Linearity => "linearity",
            Prop::Soundness => "soundness",
            Prop::Adequacy => "adequacy",
            Prop::Agreement => "agreement",
            Prop::Semimodule => "semimodule",
            Prop::Roundtrip => "roundtrip",
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Prop {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Prop::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown property `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Iterations.
    pub n: usize,
    pub seed: u64,
    /// Size bound of generated terms.
    pub max_size: usize,
    pub semiring: Semiring,
    pub fuel: u64,
}

impl SuiteConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        SuiteConfig {
            n,
            seed,
            max_size: 40,
            semiring: Semiring::Nat,
            fuel: DEFAULT_FUEL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    /// Seed of the generator that produced the term.
    pub seed: u64,
    pub term: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub detail: String,
    /// Smallest failing term found by shrinking, if it differs.
    pub shrunk: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropReport {
    pub prop: Prop,
    pub passes: usize,
    /// Iterations for which no input could be produced or the check did
    /// not apply.
    pub skipped: usize,
    pub failures: Vec<Failure>,
    pub stats: BTreeMap<String, u64>,
}

impl PropReport {
    fn new(prop: Prop) -> Self {
        PropReport {
            prop,
            passes: 0,
            skipped: 0,
            failures: Vec::new(),
            stats: BTreeMap::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn bump(&mut self, key: &str, by: u64) {
        *self.stats.entry(key.to_string()).or_default() += by;
    }

    fn max(&mut self, key: &str, v: u64) {
        let e = self.stats.entry(key.to_string()).or_default();
        *e = (*e).max(v);
    }

    fn record(&mut self, outcome: Result<(), Failure>) {
        match outcome {
            Ok(()) => self.passes += 1,
            Err(f) => self.failures.push(f),
        }
    }
}

/// SplitMix64 step, used to derive independent per-iteration seeds.
pub fn sub_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn run(prop: Prop, cfg: &SuiteConfig) -> PropReport {
    match prop {
        Prop::Sr => sr(cfg),
        Prop::Confluence => confluence(cfg),
        Prop::Intro => intro(cfg),
        Prop::Termination => termination(cfg),
        Prop::Linearity => linearity(cfg),
        Prop::Soundness => soundness(cfg),
        Prop::Adequacy => adequacy(cfg),
        Prop::Agreement => agreement(cfg),
        Prop::Semimodule => semimodule(cfg),
        Prop::Roundtrip => roundtrip(cfg),
    }
}

fn generator(cfg: &SuiteConfig, seed: u64) -> Generator {
    Generator::new(GenConfig {
        max_size: cfg.max_size,
        ..GenConfig::new(seed, cfg.semiring)
    })
}

/// A closed term of a random type satisfying `keep`, or `None` after a
/// bounded number of seeds.
fn sample(
    cfg: &SuiteConfig,
    i: usize,
    keep: impl Fn(&Type) -> bool,
) -> Option<(u64, Term, Type)> {
    for k in 0..16u64 {
        let seed = sub_seed(cfg.seed, (i as u64) << 8 | k);
        let mut g = generator(cfg, seed);
        for _ in 0..8 {
            let ty = g.gen_type();
            if !keep(&ty) {
                continue;
            }
            if let Ok(t) = g.gen_closed_term(&ty) {
                return Some((seed, t, ty));
            }
        }
    }
    None
}

/// Build a failure report, shrinking `t` among closed well-typed terms for
/// which `check` still fails.
fn failure(
    seed: u64,
    t: &Term,
    ty: &Type,
    detail: String,
    mut check: impl FnMut(&Term, &Type) -> Result<(), String>,
) -> Failure {
    let shrunk = minimize(t, |c| match infer_closed(c) {
        Ok(cty) => check(c, &cty).is_err(),
        Err(_) => false,
    });
    Failure {
        seed,
        term: t.to_string(),
        ty: ty.to_string(),
        detail,
        shrunk: (!alpha_eq(&shrunk, t)).then(|| shrunk.to_string()),
    }
}

fn closed_prop(
    prop: Prop,
    cfg: &SuiteConfig,
    keep: impl Fn(&Type) -> bool,
    check: impl Fn(&Term, &Type, &mut PropReport) -> Result<(), String>,
) -> PropReport {
    let mut report = PropReport::new(prop);
    for i in 0..cfg.n {
        let Some((seed, t, ty)) = sample(cfg, i, &keep) else {
            report.skipped += 1;
            continue;
        };
        report.max("max_term_size", t.size() as u64);
        let outcome = check(&t, &ty, &mut report).map_err(|detail| {
            let mut scratch = PropReport::new(prop);
            failure(seed, &t, &ty, detail, |c, cty| check(c, cty, &mut scratch))
        });
        report.record(outcome);
    }
    report
}

fn plain(cfg: &SuiteConfig) -> NormalizeOptions {
    NormalizeOptions {
        fuel: cfg.fuel,
        ..NormalizeOptions::default()
    }
}

/// Every site of `t`, reduced once, must check at `ty` under `ctx` and use
/// exactly the same linear variables as `t`.
pub fn sr_check(ctx: &DualContext, t: &Term, ty: &Type) -> Result<usize, String> {
    let before = check(ctx, t, ty).map_err(|e| format!("input does not check: {e}"))?;
    let sites = redexes(t, false);
    for site in &sites {
        let r = step_at(t, site).map_err(|e| e.to_string())?;
        match infer(ctx, &r) {
            Ok(after) if after.ty == *ty && after.used == before.used => {}
            Ok(after) => {
                return Err(format!(
                    "{} at {:?} gives {r} : {} using {:?}",
                    site.rule, site.path, after.ty, after.used
                ))
            }
            Err(e) => return Err(format!("{} at {:?} gives {r}: {e}", site.rule, site.path)),
        }
    }
    Ok(sites.len())
}

fn sr(cfg: &SuiteConfig) -> PropReport {
    let mut report = closed_prop(Prop::Sr, cfg, |_| true, |t, ty, rep| {
        let n = sr_check(&DualContext::new(), t, ty)?;
        rep.bump("sites", n as u64);
        // every term on the leftmost-outermost path as well
        let mut cur = t.clone();
        for _ in 0..64 {
            let Some(site) = crate::reduce::first_redex(&cur, false) else {
                break;
            };
            cur = step_at(&cur, &site).map_err(|e| e.to_string())?;
            let n = sr_check(&DualContext::new(), &cur, ty)?;
            rep.bump("sites", n as u64);
        }
        Ok(())
    });
    // open terms
    for i in 0..cfg.n {
        let seed = sub_seed(cfg.seed ^ 0x5EED, i as u64);
        let mut g = generator(cfg, seed);
        let lin: Vec<(Name, Type)> = (0..g.rng().random_range(1..=2))
            .map(|k| (format!("l{k}"), g.type_of_depth(1)))
            .collect();
        let int: Vec<(Name, Type)> = (0..g.rng().random_range(0..=1))
            .map(|k| (format!("u{k}"), g.type_of_depth(1)))
            .collect();
        let ty = g.gen_type();
        let Ok(t) = g.gen_term(&int, &lin, &ty) else {
            continue;
        };
        let ctx = DualContext::from_parts(int, lin).expect("distinct names");
        report.bump("open_terms", 1);
        match sr_check(&ctx, &t, &ty) {
            Ok(n) => report.bump("sites", n as u64),
            Err(detail) => report.failures.push(Failure {
                seed,
                term: t.to_string(),
                ty: ty.to_string(),
                detail,
                shrunk: None,
            }),
        }
    }
    // Mutants: the typed ones are new SR inputs, the rest must still rewrite.
    for i in 0..cfg.n {
        let Some((seed, t, _)) = sample(cfg, i, |_| true) else {
            continue;
        };
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 0x307A));
        for _ in 0..4 {
            let m = mutate(&t, &mut rng);
            let outcome = match infer_closed(&m) {
                Ok(mty) => {
                    report.bump("typed_mutants", 1);
                    sr_check(&DualContext::new(), &m, &mty).map(|n| report.bump("sites", n as u64))
                }
                Err(_) => {
                    report.bump("ill_typed_mutants", 1);
                    redexes(&m, false)
                        .iter()
                        .try_for_each(|site| step_at(&m, site).map(drop))
                        .map_err(|e| format!("rewriting an ill-typed mutant: {e}"))
                }
            };
            if let Err(detail) = outcome {
                report.failures.push(Failure {
                    seed,
                    term: m.to_string(),
                    ty: String::new(),
                    detail,
                    shrunk: None,
                });
            }
        }
    }
    report
}

/// Paths to every subterm, root first.
fn paths(t: &Term) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for (i, c) in t.children().into_iter().enumerate() {
        out.extend(paths(c).into_iter().map(|mut p| {
            p.insert(0, i);
            p
        }));
    }
    out
}

/// One random edit that usually breaks typing: swap two children, copy one
/// subterm over another, or replace a subterm by a variable.
pub fn mutate(t: &Term, rng: &mut ChaCha8Rng) -> Term {
    let ps = paths(t);
    let at = &ps[rng.random_range(0..ps.len())];
    let mut m = t.clone();
    let target = m.subterm_mut(at).expect("path from paths()");
    match rng.random_range(0..3) {
        0 => {
            let mut kids = target.children_mut();
            if kids.len() >= 2 {
                let j = rng.random_range(1..kids.len());
                let (head, tail) = kids.split_at_mut(j);
                std::mem::swap(&mut *head[0], &mut *tail[0]);
            }
        }
        1 => {
            let from = &ps[rng.random_range(0..ps.len())];
            *target = t.subterm(from).expect("path from paths()").clone();
        }
        _ => {
            let names: Vec<Name> = t.all_names().into_iter().collect();
            let x = if names.is_empty() || rng.random_bool(0.2) {
                "free".to_string()
            } else {
                names[rng.random_range(0..names.len())].clone()
            };
            *target = Term::var(x);
        }
    }
    m
}

/// Normal forms under leftmost-outermost and under ten random strategies.
pub fn confluence_check(t: &Term, seed: u64, fuel: u64) -> Result<u64, String> {
    let opts = NormalizeOptions {
        fuel,
        ..NormalizeOptions::default()
    };
    let lo = normalize(t, opts).map_err(|e| e.to_string())?;
    for j in 0..10 {
        let s = sub_seed(seed, j);
        let r = normalize(
            t,
            NormalizeOptions {
                strategy: Strategy::Random(s),
                ..opts
            },
        )
        .map_err(|e| format!("random({s}): {e}"))?;
        if !alpha_eq(&r.term, &lo.term) {
            return Err(format!(
                "leftmost-outermost gives {}, random({s}) gives {}",
                lo.term, r.term
            ));
        }
    }
    Ok(lo.steps)
}

fn confluence(cfg: &SuiteConfig) -> PropReport {
    let fuel = cfg.fuel;
    let seed = cfg.seed;
    closed_prop(Prop::Confluence, cfg, |_| true, move |t, _, rep| {
        let steps = confluence_check(t, seed, fuel)?;
        rep.max("max_steps", steps);
        Ok(())
    })
}

fn intro(cfg: &SuiteConfig) -> PropReport {
    let opts = plain(cfg);
    let mut report = closed_prop(Prop::Intro, cfg, |_| true, |t, ty, rep| {
        let nf = normalize(t, opts).map_err(|e| e.to_string())?.term;
        match classify_normal(&nf, ty) {
            Ok(Classification::Violation) => Err(format!("normal form {nf} violates {ty}")),
            Ok(c) => {
                let key = serde_json::to_value(c).expect("serializes");
                rep.bump(key.as_str().unwrap_or("?"), 1);
                Ok(())
            }
            Err(e) => Err(format!("normal form {nf}: {e}")),
        }
    });
    // the generator must never produce a closed inhabitant of 0
    for i in 0..cfg.n.div_ceil(10) {
        let seed = sub_seed(cfg.seed ^ 0x2E20, i as u64);
        report.bump("zero_attempts", 1);
        if let Ok(t) = generator(cfg, seed).gen_closed_term(&Type::Zero) {
            report.failures.push(Failure {
                seed,
                term: t.to_string(),
                ty: Type::Zero.to_string(),
                detail: "closed inhabitant of 0".into(),
                shrunk: None,
            });
        }
    }
    report
}

fn termination(cfg: &SuiteConfig) -> PropReport {
    let base = plain(cfg);
    closed_prop(Prop::Termination, cfg, |_| true, move |t, _, rep| {
        for (key, opts) in [
            ("max_steps_plain", base),
            (
                "max_steps_ultra",
                NormalizeOptions {
                    ultra: true,
                    ..base
                },
            ),
            (
                "max_steps_ultra_random",
                NormalizeOptions {
                    ultra: true,
                    strategy: Strategy::Random(t.size() as u64),
                    ..base
                },
            ),
        ] {
            let n = normalize(t, opts).map_err(|e| format!("{key}: {e}"))?;
            rep.max(key, n.steps);
        }
        Ok(())
    })
}

/// A random scalar with small numerators and denominators.
pub fn random_scalar(rng: &mut impl Rng, semiring: Semiring) -> Scalar {
    let q = |rng: &mut dyn rand::RngCore| {
        let n: i64 = rng.random_range(-6..=6);
        let d: i64 = rng.random_range(1..=4);
        (n, d)
    };
    match semiring {
        Semiring::Trivial => semiring.one(),
        Semiring::Nat => semiring.from_int(rng.random_range(0..=6)),
        Semiring::Rat => {
            let (n, d) = q(rng);
            crate::semiring::rat(n, d)
        }
        Semiring::Crat => {
            let re = q(rng);
            let im = if rng.random_bool(0.5) { (0, 1) } else { q(rng) };
            crate::semiring::crat(re, im)
        }
    }
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, semiring: Semiring) -> Matrix {
    let entries = (0..rows)
        .map(|_| (0..cols).map(|_| random_scalar(rng, semiring)).collect())
        .collect();
    Matrix::new(entries).expect("nonempty")
}

pub fn random_vector(rng: &mut impl Rng, n: usize, semiring: Semiring) -> Vec<Scalar> {
    (0..n).map(|_| random_scalar(rng, semiring)).collect()
}

fn vadd(u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    u.iter().zip(v).map(|(a, b)| a.add_same(b)).collect()
}

fn vscale(a: &Scalar, u: &[Scalar]) -> Vec<Scalar> {
    u.iter().map(|b| a.mul_same(b)).collect()
}

fn linearity(cfg: &SuiteConfig) -> PropReport {
    let mut report = PropReport::new(Prop::Linearity);
    let sr = cfg.semiring;
    let nopts = plain(cfg);
    let eopts = EquivOptions {
        fuel: cfg.fuel,
        seed: cfg.seed,
        ..EquivOptions::new(sr)
    };
    for i in 0..cfg.n {
        let seed = sub_seed(cfg.seed, i as u64);
        let mut g = generator(cfg, seed);
        let (n, m) = (g.rng().random_range(1..=4), g.rng().random_range(1..=4));
        let (a, b) = (g.vector_type_of_dim(n), g.vector_type_of_dim(m));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mat = random_matrix(&mut rng, m, n, sr);
        let (u, v) = (random_vector(&mut rng, n, sr), random_vector(&mut rng, n, sr));
        let s = random_scalar(&mut rng, sr);
        let outcome = (|| -> Result<(), String> {
            let f = matrix_to_term(&mat, &a, &b).map_err(|e| e.to_string())?;
            let (tu, tv) = (
                vec_to_term(&u, &a).map_err(|e| e.to_string())?,
                vec_to_term(&v, &a).map_err(|e| e.to_string())?,
            );
            let read = |t: Term| term_to_vec_with(&t, &b, nopts).map_err(|e| e.to_string());
            let mu = mat.apply(&u).map_err(|e| e.to_string())?;
            let mv = mat.apply(&v).map_err(|e| e.to_string())?;
            let got = read(Term::app(f.clone(), Term::sum(tu.clone(), tv.clone())))?;
            if got != vadd(&mu, &mv) {
                return Err(format!("f(u ⊞ v) reads {got:?}, expected M·u + M·v"));
            }
            let got = read(Term::app(f.clone(), Term::smul(s.clone(), tu.clone())))?;
            if got != vscale(&s, &mu) {
                return Err(format!("f({s} • u) reads {got:?}, expected {s}·M·u"));
            }
            let rep = linearity_check(&f, &b, &tu, &tv, &s, &eopts);
            if rep.additivity != IdentityCheck::Holds || rep.homogeneity != IdentityCheck::Holds {
                return Err(format!("{rep:?}"));
            }
            Ok(())
        })();
        report.record(outcome.map_err(|detail| Failure {
            seed,
            term: mat.to_json(),
            ty: format!("{a} -o {b}"),
            detail,
            shrunk: None,
        }));
        // a generated function between vector types
        let fty = Type::lolli(a.clone(), b.clone());
        if let Ok(f) = g.gen_closed_term(&fty) {
            report.bump("generated_functions", 1);
            let tu = vec_to_term(&u, &a).expect("dimension matches");
            let tv = vec_to_term(&v, &a).expect("dimension matches");
            let rep = linearity_check(&f, &b, &tu, &tv, &s, &eopts);
            if rep.additivity != IdentityCheck::Holds || rep.homogeneity != IdentityCheck::Holds {
                report.failures.push(Failure {
                    seed,
                    term: f.to_string(),
                    ty: fty.to_string(),
                    detail: format!("{rep:?}"),
                    shrunk: None,
                });
            }
        }
    }
    report
}

/// One entry of the hand-written soundness corpus.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub ctx: DualContext,
    pub term: Term,
    pub ty: Type,
}

const CORPUS: [(&str, &str, &str, &str); 30] = [
    ("", "", "let1(star(3), star(2))", "I"),
    ("", "", "let1(star(3), pair(star(1), star(2)))", "I & I"),
    ("", "", "(\\x:I. let1(x, star(2))) star(4)", "I"),
    ("", "", "(\\x:I. pair(x, x)) star(4)", "I & I"),
    ("", "", "lettens(tens(star(2), star(3)), x:I, y:I. let1(x, y))", "I"),
    ("", "", "fst(pair(star(1), star(2)), x:I. x)", "I"),
    ("", "", "snd(pair(star(1), star(2)), x:I. pair(x, x))", "I & I"),
    ("", "", "case(inl[I](star(2)), x:I. x, y:I. 3 <.> y)", "I"),
    ("", "", "case(inr[I](star(2)), x:I. x, y:I. 3 <.> y)", "I"),
    ("", "", "letbang(bang(star(2)), x:I. bang(let1(x, x)))", "!I"),
    ("", "", "star(1) <+> star(2)", "I"),
    ("", "", "2 <.> star(3)", "I"),
    ("", "", "((\\x:I. x) <+> (\\x:I. 2 <.> x)) star(3)", "I"),
    ("", "", "(2 <.> (\\x:I. pair(x, let1(x, star(1))))) star(3)", "I & I"),
    (
        "",
        "",
        "lettens(tens(star(1), star(2)) <+> tens(star(3), star(4)), x:I, y:I. let1(x, y))",
        "I",
    ),
    (
        "",
        "",
        "lettens(2 <.> tens(star(1), star(2)), x:I, y:I. pair(let1(x, y), let1(y, x)))",
        "I & I",
    ),
    ("", "", "pair(star(1), unit <+> unit)", "I & Top"),
    ("", "", "pair(star(2), 3 <.> unit)", "I & Top"),
    ("", "", "pair(star(1), star(2)) <+> pair(star(3), star(4))", "I & I"),
    ("", "", "3 <.> pair(star(1), star(2))", "I & I"),
    (
        "",
        "",
        "case(inl[I](star(1)) <+> inr[I](star(2)), x:I. x, y:I. 2 <.> y)",
        "I",
    ),
    ("", "", "case(2 <.> inr[I](star(5)), x:I. x, y:I. 3 <.> y)", "I"),
    ("", "", "letbang(bang(star(2)) <+> bang(star(3)), x:I. let1(x, x))", "I"),
    ("", "", "letbang(2 <.> bang(star(3)), x:I. bang(x))", "!I"),
    (
        "u:I",
        "",
        "letbang(bang(u) <+> bang(star(1)), z:I. bang(let1(z, z)))",
        "!I",
    ),
    ("", "", "(\\f:I -o I. f star(2)) (\\y:I. 3 <.> y)", "I"),
    (
        "",
        "",
        "letbang(bang(pair(star(1), star(2))), p:I & I. fst(p, a:I. let1(a, snd(p, b:I. b))))",
        "I",
    ),
    ("", "x:I", "let1(star(2), x <+> x)", "I"),
    (
        "",
        "",
        "lettens(tens(bang(star(2)), star(3)), x:!I, y:I. letbang(x, z:I. let1(z, let1(z, y))))",
        "I",
    ),
    (
        "",
        "",
        "case(inl[I & I](star(2)) <+> inr[I](pair(star(1), star(3))), x:I. pair(x, x), y:I & I. y)",
        "I & I",
    ),
];

fn bindings(text: &str) -> Vec<(Name, Type)> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|b| {
            let (x, ty) = b.split_once(':').expect("binding has a type");
            (x.trim().to_string(), parse_type(ty).expect("corpus type parses"))
        })
        .collect()
}

/// Small terms that together exercise every non-ultra rule at `1`, `1 & 1`
/// and `!1`, some with free variables.
pub fn soundness_corpus() -> Vec<CorpusEntry> {
    CORPUS
        .iter()
        .map(|(int, lin, t, ty)| CorpusEntry {
            ctx: DualContext::from_parts(bindings(int), bindings(lin)).expect("distinct names"),
            term: parse_term(t, Semiring::Nat).expect("corpus term parses"),
            ty: parse_type(ty).expect("corpus type parses"),
        })
        .collect()
}

/// The value of `t` is unchanged by each of its one-step reducts, in both
/// bang modes, and the two modes give the same value. Returns the number of
/// comparisons made.
pub fn soundness_check(
    ctx: &DualContext,
    t: &Term,
    ty: &Type,
    semiring: Semiring,
) -> Result<usize, String> {
    let envs = sample_envs(ctx, semiring, 16)
        .ok_or_else(|| "free variables without a finite basis".to_string())?;
    let eager = Evaluator::new(semiring);
    let deferred = eager.with_mode(BangMode::Deferred);
    let mut checked = 0;
    for env in &envs {
        let v = eager.eval(t, env, ty).map_err(|e| e.to_string())?;
        let w = deferred.eval(t, env, ty).map_err(|e| e.to_string())?;
        if !eager.sem_eq(ty, &v, &w).map_err(|e| e.to_string())? {
            return Err(format!("bang modes disagree: {v} vs {w}"));
        }
    }
    for site in redexes(t, false) {
        for ev in [eager, deferred] {
            let rep = ev
                .soundness_check(t, ty, &envs, &site)
                .map_err(|e| e.to_string())?;
            if let Some(f) = rep.failure {
                return Err(format!(
                    "{} at {:?} ({:?} mode): {} becomes {} in {}",
                    site.rule, site.path, ev.mode, f.before, f.after, f.env
                ));
            }
            checked += rep.checked;
        }
    }
    Ok(checked)
}

/// Rules with at least one instance in the corpus.
pub fn corpus_rules() -> Vec<Rule> {
    let mut rules: Vec<Rule> = soundness_corpus()
        .iter()
        .flat_map(|e| {
            // rules met anywhere along a normalisation, not just at the start
            let mut seen = Vec::new();
            let mut cur = e.term.clone();
            while let Some(site) = crate::reduce::first_redex(&cur, false) {
                seen.extend(redexes(&cur, false).into_iter().map(|s| s.rule));
                cur = step_at(&cur, &site).expect("site is valid");
            }
            seen
        })
        .collect();
    rules.sort();
    rules.dedup();
    rules
}

fn soundness(cfg: &SuiteConfig) -> PropReport {
    let sr = cfg.semiring;
    let mut report = closed_prop(Prop::Soundness, cfg, decidable, |t, ty, rep| {
        let n = soundness_check(&DualContext::new(), t, ty, sr)?;
        rep.bump("comparisons", n as u64);
        Ok(())
    });
    if sr == Semiring::Nat {
        for e in soundness_corpus() {
            report.bump("corpus_terms", 1);
            // every term on the way to the normal form, not just the first
            let mut cur = e.term.clone();
            loop {
                match soundness_check(&e.ctx, &cur, &e.ty, sr) {
                    Ok(n) => report.bump("comparisons", n as u64),
                    Err(detail) => {
                        report.failures.push(Failure {
                            seed: 0,
                            term: cur.to_string(),
                            ty: e.ty.to_string(),
                            detail,
                            shrunk: None,
                        });
                        break;
                    }
                }
                let Some(site) = crate::reduce::first_redex(&cur, false) else {
                    break;
                };
                cur = step_at(&cur, &site).expect("site is valid");
            }
        }
    }
    report
}

/// Depth of the context search in the adequacy suite.
pub const ADEQUACY_DEPTH: usize = 3;

fn adequacy(cfg: &SuiteConfig) -> PropReport {
    let sr = cfg.semiring;
    let opts = plain(cfg);
    let eopts = EquivOptions {
        depth: ADEQUACY_DEPTH,
        budget: 6,
        samples: 1,
        fuel: cfg.fuel,
        seed: cfg.seed,
        ..EquivOptions::new(sr)
    };
    closed_prop(Prop::Adequacy, cfg, |_| true, |t, ty, rep| {
        let nf = normalize(t, opts).map_err(|e| e.to_string())?.term;
        if decidable(ty) {
            let ev = Evaluator::new(sr);
            let v = ev.eval_closed(t, ty).map_err(|e| e.to_string())?;
            let w = ev.eval_closed(&nf, ty).map_err(|e| e.to_string())?;
            if !ev.sem_eq(ty, &v, &w).map_err(|e| e.to_string())? {
                return Err(format!("{v} and its normal form's value {w} differ"));
            }
            rep.bump("sem_eq", 1);
        }
        match obs_equiv(t, &nf, ty, &eopts) {
            EquivVerdict::Distinguished {
                context,
                left,
                right,
            } => Err(format!("context {context} gives {left} and {right}")),
            EquivVerdict::Unknown { .. } => {
                rep.bump("unknown", 1);
                Ok(())
            }
            EquivVerdict::EquivalentUpToBound { contexts, .. } => {
                rep.bump("contexts", contexts as u64);
                Ok(())
            }
        }
    })
}

/// Largest vector dimension used by the vector suites.
pub const MAX_DIM: usize = 6;

fn vector_sample(cfg: &SuiteConfig, i: usize, k: usize) -> Option<(u64, Type, Vec<Term>)> {
    for attempt in 0..16u64 {
        let seed = sub_seed(cfg.seed, (i as u64) << 8 | attempt);
        let mut g = generator(cfg, seed);
        let a = g.gen_vector_type(MAX_DIM);
        let terms: Result<Vec<Term>, _> = (0..k).map(|_| g.gen_closed_term(&a)).collect();
        if let Ok(ts) = terms {
            return Some((seed, a, ts));
        }
    }
    None
}

fn agreement(cfg: &SuiteConfig) -> PropReport {
    let mut report = PropReport::new(Prop::Agreement);
    let ev = Evaluator::new(cfg.semiring);
    let opts = plain(cfg);
    for i in 0..cfg.n {
        let Some((seed, a, ts)) = vector_sample(cfg, i, 1) else {
            report.skipped += 1;
            continue;
        };
        let t = &ts[0];
        let check = |t: &Term, a: &Type| -> Result<(), String> {
            let v = ev.eval_closed(t, a).map_err(|e| e.to_string())?;
            let model = ev.coefficients(a, &v).map_err(|e| e.to_string())?;
            let read = term_to_vec_with(t, a, opts).map_err(|e| e.to_string())?;
            if model != read {
                return Err(format!("model gives {model:?}, readback gives {read:?}"));
            }
            Ok(())
        };
        let outcome = check(t, &a).map_err(|d| failure(seed, t, &a, d, check));
        report.record(outcome);
    }
    report
}

/// The seven semimodule identities on `t₁, t₂, t₃ : a` with scalars `x`
/// and `y`, compared through the vector readback.
pub fn semimodule_check(
    ts: &[Term; 3],
    a: &Type,
    x: &Scalar,
    y: &Scalar,
    fuel: u64,
) -> Result<(), String> {
    let sr = x.semiring();
    let [t1, t2, t3] = ts.clone();
    let zero = zero_term(a, sr).map_err(|e| e.to_string())?;
    let s = Term::sum;
    let m = |c: &Scalar, t: Term| Term::smul(c.clone(), t);
    let laws: [(&str, Term, Term); 7] = [
        (
            "associativity",
            s(s(t1.clone(), t2.clone()), t3.clone()),
            s(t1.clone(), s(t2.clone(), t3)),
        ),
        ("commutativity", s(t1.clone(), t2.clone()), s(t2.clone(), t1.clone())),
        ("zero", s(t1.clone(), zero), t1.clone()),
        (
            "scalar associativity",
            m(x, m(y, t1.clone())),
            m(&x.mul_same(y), t1.clone()),
        ),
        ("one", m(&sr.one(), t1.clone()), t1.clone()),
        (
            "distributivity over sums",
            m(x, s(t1.clone(), t2.clone())),
            s(m(x, t1.clone()), m(x, t2.clone())),
        ),
        (
            "distributivity over scalars",
            m(&x.add_same(y), t1.clone()),
            s(m(x, t1.clone()), m(y, t1)),
        ),
    ];
    let opts = NormalizeOptions {
        fuel,
        ..NormalizeOptions::default()
    };
    for (name, l, r) in laws {
        let lv = term_to_vec_with(&l, a, opts).map_err(|e| format!("{name}: {e}"))?;
        let rv = term_to_vec_with(&r, a, opts).map_err(|e| format!("{name}: {e}"))?;
        if lv != rv {
            return Err(format!("{name}: {lv:?} vs {rv:?}"));
        }
    }
    Ok(())
}

fn semimodule(cfg: &SuiteConfig) -> PropReport {
    let mut report = PropReport::new(Prop::Semimodule);
    for i in 0..cfg.n {
        let Some((seed, a, ts)) = vector_sample(cfg, i, 3) else {
            report.skipped += 1;
            continue;
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (
            random_scalar(&mut rng, cfg.semiring),
            random_scalar(&mut rng, cfg.semiring),
        );
        let ts: [Term; 3] = ts.try_into().expect("three terms");
        let outcome = semimodule_check(&ts, &a, &x, &y, cfg.fuel).map_err(|detail| Failure {
            seed,
            term: format!("{} ; {} ; {}", ts[0], ts[1], ts[2]),
            ty: a.to_string(),
            detail: format!("{detail} (a = {x}, b = {y})"),
            shrunk: None,
        });
        report.record(outcome);
    }
    report
}

fn roundtrip(cfg: &SuiteConfig) -> PropReport {
    let mut report = PropReport::new(Prop::Roundtrip);
    for i in 0..cfg.n {
        let seed = sub_seed(cfg.seed, i as u64);
        let mut g = generator(cfg, seed);
        let (n, m) = (g.rng().random_range(1..=4), g.rng().random_range(1..=4));
        let (a, b) = (g.vector_type_of_dim(n), g.vector_type_of_dim(m));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mat = random_matrix(&mut rng, m, n, cfg.semiring);
        let outcome = matrix_to_term(&mat, &a, &b)
            .and_then(|t| {
                check_closed(&t, &Type::lolli(a.clone(), b.clone()))
                    .map_err(|e| crate::encode::EncodeError::Malformed(e.to_string()))?;
                term_to_matrix(&t, &a, &b, cfg.semiring)
            })
            .map_err(|e| e.to_string())
            .and_then(|back| {
                if back == mat {
                    Ok(())
                } else {
                    Err(format!("extracted {}", back.to_json()))
                }
            });
        report.record(outcome.map_err(|detail| Failure {
            seed,
            term: mat.to_json(),
            ty: format!("{a} -o {b}"),
            detail,
            shrunk: None,
        }));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typecheck::check;

    fn small(n: usize) -> SuiteConfig {
        SuiteConfig {
            max_size: 20,
            ..SuiteConfig::new(n, 3)
        }
    }

    #[test]
    fn mutants_are_deterministic_and_mixed() {
        let t = parse_term(r"(\x:I. tens(x, star(2))) star(3)", Semiring::Nat).unwrap();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..40).map(|_| mutate(&t, &mut rng)).collect::<Vec<_>>()
        };
        let ms = run(5);
        assert_eq!(ms, run(5));
        let typed = ms.iter().filter(|m| infer_closed(m).is_ok()).count();
        assert!(typed > 0 && typed < ms.len(), "{typed} of {}", ms.len());
    }

    #[test]
    fn prop_names_round_trip() {
        for p in Prop::ALL {
            assert_eq!(p.name().parse::<Prop>(), Ok(p));
        }
        assert!("nope".parse::<Prop>().is_err());
    }

    #[test]
    fn sub_seeds_differ() {
        let seeds: std::collections::BTreeSet<u64> = (0..1000).map(|i| sub_seed(7, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }

    #[test]
    fn corpus_is_well_typed() {
        for e in soundness_corpus() {
            let got = check(&e.ctx, &e.term, &e.ty).unwrap_or_else(|err| panic!("{}: {err}", e.term));
            assert_eq!(got.used.len(), e.ctx.linear.len(), "{}", e.term);
        }
    }

    #[test]
    fn corpus_covers_every_rule() {
        let seen = corpus_rules();
        for r in [
            Rule::BetaOne,
            Rule::BetaLam,
            Rule::BetaTens,
            Rule::BetaFst,
            Rule::BetaSnd,
            Rule::BetaInl,
            Rule::BetaInr,
            Rule::BetaBang,
            Rule::StarSum,
            Rule::StarSmul,
            Rule::LamSum,
            Rule::LamSmul,
            Rule::TensSum,
            Rule::TensSmul,
            Rule::UnitSum,
            Rule::UnitSmul,
            Rule::PairSum,
            Rule::PairSmul,
            Rule::CaseSum,
            Rule::CaseSmul,
            Rule::BangSum,
            Rule::BangSmul,
        ] {
            assert!(seen.contains(&r), "{r} has no instance");
        }
    }

    #[test]
    fn every_suite_passes_small() {
        for p in Prop::ALL {
            let rep = run(p, &small(15));
            assert!(rep.ok(), "{p}: {:?}", rep.failures);
            assert!(rep.passes > 0, "{p}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run(Prop::Confluence, &small(10));
        let b = run(Prop::Confluence, &small(10));
        assert_eq!(a, b);
    }

    #[test]
    fn broken_check_is_reported_and_shrunk() {
        // a deliberately false property: no normal form is a scalar star
        let rep = closed_prop(Prop::Intro, &small(30), |ty| *ty == Type::One, |t, _, _| {
            match crate::reduce::normal_form(t) {
                Ok(Term::Star(_)) => Err("star".into()),
                _ => Ok(()),
            }
        });
        assert!(!rep.failures.is_empty());
        let f = &rep.failures[0];
        if let Some(s) = &f.shrunk {
            assert!(s.len() <= f.term.len());
        }
    }
}
