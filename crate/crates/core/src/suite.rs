//! The nine acceptance criteria as runnable checks.
//!
//! Random instances are drawn sequentially from a seeded generator and then
//! checked under the configured [`Exec`], so the report depends only on the
//! seed. Wall-clock time is measured but kept out of the serialized report.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::automata::{words_up_to, Alphabet, Automaton, Fsa, Word};
use crate::budget::Budget;
use crate::catauto::{
    cat_generator_probes, cat_naturality_check_with, encode_fsa, encode_transducer, CatFsa, CatNaturalityOptions, CatTransducer, FreeCat, Path,
};
use crate::cobordism::floating_line;
use crate::error::Result;
use crate::fixtures;
use crate::gen::{self, SuiteRng};
use crate::operad::{
    apply_grammar, cs_factorize, grammar_naturality_check_with, grammar_transduce, language_of_arrows, splice_compose, spliced_defect_operator,
    trees_up_to_depth, treecont, CfGrammar, GrammarNaturalityOptions, SplicedSeq,
};
use crate::oracle;
use crate::par::{self, Exec};
use crate::subregular::{k_factors, LEFT_MARKER, RIGHT_MARKER};
use crate::tqft::{check_naturality_with, generator_probes, NaturalityOptions, TqftFunctor};
use crate::transducer::Transducer;

/// Id, name and time limit in seconds.
pub const CRITERIA: [(u8, &str, u64); 9] = [
    (1, "path-integral acceptance law", 10),
    (2, "transducer semantics", 30),
    (3, "category laws", 60),
    (4, "naturality", 60),
    (5, "SL2 cohomological structure", 1),
    (6, "categorical functoriality", 30),
    (7, "operad laws", 30),
    (8, "Chomsky-Schützenberger pipeline", 60),
    (9, "degenerate reduction", 10),
];

const MAX_LISTED: usize = 10;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub exec: Exec,
    pub budget: Budget,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            exec: Exec::default(),
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub criterion: u8,
    pub name: &'static str,
    pub passed: bool,
    pub instances: usize,
    pub checks: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    pub limit_secs: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionReport {
    pub fn within_limit(&self) -> bool {
        self.elapsed <= Duration::from_secs(self.limit_secs)
    }

    /// Correct and on time.
    pub fn ok(&self) -> bool {
        self.passed && self.within_limit()
    }

    pub fn summary_line(&self) -> String {
        let verdict = if self.ok() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{verdict} criterion {} ({}): {} instances, {} checks, {:.3}s of {}s",
            self.criterion,
            self.name,
            self.instances,
            self.checks,
            self.elapsed.as_secs_f64(),
            self.limit_secs
        );
        if !self.passed {
            line.push_str(&format!("; first failure: {}", self.failures.first().map(String::as_str).unwrap_or("?")));
        } else if !self.within_limit() {
            line.push_str("; over the time limit");
        }
        line
    }
}

#[derive(Default)]
struct Tally {
    instances: usize,
    checks: u64,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < MAX_LISTED {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.instances += other.instances;
        self.checks += other.checks;
        for f in other.failures {
            if self.failures.len() < MAX_LISTED {
                self.failures.push(f);
            }
        }
    }

    fn merge(parts: Vec<Result<Tally>>) -> Result<Tally> {
        let mut t = Tally::default();
        for p in parts {
            t.absorb(p?);
        }
        Ok(t)
    }
}

fn criterion_rng(cfg: &SuiteConfig, id: u8) -> SuiteRng {
    gen::rng(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ u64::from(id))
}

/// Runs one criterion. Library errors count as failures.
pub fn run(id: u8, cfg: &SuiteConfig) -> CriterionReport {
    let (_, name, limit) = CRITERIA[usize::from(id) - 1];
    let start = Instant::now();
    let result = match id {
        1 => acceptance_law(cfg),
        2 => transducer_semantics(cfg),
        3 => category_laws(cfg),
        4 => naturality(cfg),
        5 => sl2_structure(),
        6 => functoriality(cfg),
        7 => operad_laws(cfg),
        8 => cs_pipeline(cfg),
        _ => degenerate_reduction(),
    };
    let elapsed = start.elapsed();
    let tally = result.unwrap_or_else(|e| Tally {
        failures: vec![format!("error: {e}")],
        ..Tally::default()
    });
    CriterionReport {
        criterion: id,
        name,
        passed: tally.failures.is_empty() && tally.checks > 0,
        instances: tally.instances,
        checks: tally.checks,
        failures: tally.failures,
        limit_secs: limit,
        elapsed,
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|&(id, _, _)| run(id, cfg)).collect()
}

fn show(w: &Word) -> String {
    format!("{w:?}")
}

fn acceptance_law(cfg: &SuiteConfig) -> Result<Tally> {
    let mut rng = criterion_rng(cfg, 1);
    let machines: Vec<Fsa> = (0..200).map(|_| gen::random_trimmed_fsa(&mut rng, 6, 3)).collect();
    let parts = par::map(cfg.exec, &machines, |m| -> Result<Tally> {
        let mut t = Tally {
            instances: 1,
            ..Tally::default()
        };
        let phi = TqftFunctor::new(m).with_budget(cfg.budget);
        for w in words_up_to(m.alphabet().len(), 8) {
            let word = m.alphabet().decode(&w);
            let v = phi.eval(&floating_line(word.clone()))?;
            let value = v.shape() == (1, 1) && v.get(0, 0);
            let want = oracle::nfa_accepts(m, &w);
            t.check(value == want, || format!("{} states: floating line of {} gives {value}, oracle {want}", m.len(), show(&word)));
        }
        Ok(t)
    });
    Tally::merge(parts)
}

fn transducer_semantics(cfg: &SuiteConfig) -> Result<Tally> {
    let mut rng = criterion_rng(cfg, 2);
    let out = gen::alphabet('x', 2);
    let pairs: Vec<(Transducer, Fsa)> = (0..50)
        .map(|_| {
            let m = gen::random_trimmed_fsa(&mut rng, 4, 2);
            (gen::random_transducer(&mut rng, m.alphabet(), &out), m)
        })
        .collect();
    let parts = par::map(cfg.exec, &pairs, |(t, m)| -> Result<Tally> {
        let mut tally = Tally {
            instances: 1,
            ..Tally::default()
        };
        let got: BTreeSet<Word> = t.apply(m)?.enumerate_language_with(8, &cfg.budget)?.into_iter().collect();
        let want = oracle::transduction_words(t, m, 8);
        tally.check(got == want, || {
            let extra: Vec<_> = got.difference(&want).take(3).map(show).collect();
            let missing: Vec<_> = want.difference(&got).take(3).map(show).collect();
            format!("apply differs from the word oracle: extra {extra:?}, missing {missing:?}")
        });
        Ok(tally)
    });
    Tally::merge(parts)
}

fn language(m: &Fsa, maxlen: usize, budget: &Budget) -> Result<BTreeSet<Word>> {
    Ok(m.enumerate_language_with(maxlen, budget)?.into_iter().collect())
}

fn category_laws(cfg: &SuiteConfig) -> Result<Tally> {
    let mut rng = criterion_rng(cfg, 3);
    let (a, b, c, d) = (gen::alphabet('A', 2), gen::alphabet('x', 2), gen::alphabet('m', 2), gen::alphabet('u', 2));
    type Triple = (Fsa, Transducer, Transducer, Transducer);
    let triples: Vec<Triple> = (0..25)
        .map(|_| {
            let m = loop {
                let m = gen::random_fsa(&mut rng, 4, &a, 0.35).trim();
                if !m.is_language_empty() {
                    break m;
                }
            };
            let t1 = gen::random_transducer(&mut rng, &a, &b);
            let t2 = gen::random_transducer(&mut rng, &b, &c);
            let t3 = gen::random_transducer(&mut rng, &c, &d);
            (m, t1, t2, t3)
        })
        .collect();
    let budget = &cfg.budget;
    let parts = par::map(cfg.exec, &triples, |(m, t1, t2, t3)| -> Result<Tally> {
        let mut tally = Tally {
            instances: 1,
            ..Tally::default()
        };
        let stepwise = t2.apply(&t1.apply(m)?)?;
        let t21 = t2.compose_with(t1, budget)?;
        let composed = t21.apply(m)?;
        tally.check(language(&stepwise, 6, budget)? == language(&composed, 6, budget)?, || "(T2∘T1)(M) differs from T2(T1(M))".into());
        let left = t3.compose_with(t2, budget)?.compose_with(t1, budget)?.apply(m)?;
        let right = t3.compose_with(&t21, budget)?.apply(m)?;
        let three = t3.apply(&stepwise)?;
        let l = language(&left, 6, budget)?;
        tally.check(l == language(&right, 6, budget)?, || "(T3∘T2)∘T1 differs from T3∘(T2∘T1)".into());
        tally.check(l == language(&three, 6, budget)?, || "triple composite differs from stepwise application".into());
        Ok(tally)
    });
    Tally::merge(parts)
}

fn naturality(cfg: &SuiteConfig) -> Result<Tally> {
    let mut rng = criterion_rng(cfg, 4);
    let budget = cfg.budget;
    let mut tally = Tally::default();

    let classical_opts = |drop_right| NaturalityOptions {
        exec: Exec::Sequential,
        budget,
        drop_right,
        spans: true,
    };
    let mut classical: Vec<(String, Transducer, Fsa)> = vec![
        ("identity on ab_star".into(), Transducer::identity(fixtures::ab_star().alphabet()), fixtures::ab_star()),
        ("C↦AB on ab_star".into(), fixtures::c_to_ab(), fixtures::ab_star()),
        ("rename on ab_star".into(), fixtures::rename_ab(), fixtures::ab_star()),
    ];
    for (name, m) in fixtures::fixture_fsas().into_iter().skip(1) {
        classical.push((format!("identity on {name}"), Transducer::identity(m.alphabet()), m));
    }
    // Redraw instances whose T(M) is empty (the half-line squares assume
    // q0 and the finals survive the pullback) or too large for a two-strand
    // probe to fit the default entry budget.
    let mut drawn = 0;
    while drawn < 25 {
        let m = gen::random_trimmed_fsa(&mut rng, 4, 2);
        let t = gen::random_natural_transducer(&mut rng, m.alphabet());
        let image = t.apply(&m)?;
        if !image.is_language_empty() && image.len() <= 16 {
            classical.push((format!("random classical #{drawn}"), t, m));
            drawn += 1;
        }
    }
    let parts = par::map(cfg.exec, &classical, |(name, t, m)| -> Result<Tally> {
        let mut tl = Tally {
            instances: 1,
            ..Tally::default()
        };
        let r = check_naturality_with(t, m, &generator_probes(t.mid_alphabet()), &classical_opts(None))?;
        for p in &r.probes {
            tl.check(p.commutes && p.span_equal != Some(false), || format!("{name}: probe {} (left {}, right {}, span {:?})", p.name, p.left, p.right, p.span_equal));
        }
        Ok(tl)
    });
    tally.absorb(Tally::merge(parts)?);

    let cat_opts = |drop| CatNaturalityOptions {
        exec: Exec::Sequential,
        budget,
        bound: 8,
        drop,
    };
    let ab = encode_fsa(&fixtures::ab_star());
    let mut cat: Vec<(String, CatTransducer, CatFsa)> = vec![
        ("identity on encoded ab_star".into(), CatTransducer::identity(ab.base()), ab.clone()),
        ("encoded C↦AB on encoded ab_star".into(), encode_transducer(&fixtures::c_to_ab())?, ab.clone()),
    ];
    for i in 0..25 {
        let m = gen::random_cat_fsa(&mut rng);
        cat.push((format!("random categorical #{i}"), gen::random_natural_cat_transducer(&mut rng, m.base()), m));
    }
    let parts = par::map(cfg.exec, &cat, |(name, t, m)| -> Result<Tally> {
        let mut tl = Tally {
            instances: 1,
            ..Tally::default()
        };
        let r = cat_naturality_check_with(t, m, &cat_generator_probes(t.states(), 2), &cat_opts(None))?;
        tl.check(!r.truncated, || format!("{name}: pullback truncated"));
        for p in &r.probes {
            tl.check(p.commutes, || format!("{name}: probe {} fails at {:?}", p.name, p.witness));
        }
        Ok(tl)
    });
    tally.absorb(Tally::merge(parts)?);

    let grammar_opts = |drop| GrammarNaturalityOptions {
        exec: Exec::Sequential,
        budget,
        drop,
    };
    let dyck = fixtures::dyck_grammar();
    for (name, t) in [("identity on Dyck", CatTransducer::identity(dyck.base())), ("brackets on Dyck", fixtures::bracket_transducer())] {
        tally.instances += 1;
        let r = grammar_naturality_check_with(&t, &dyck, &[], &grammar_opts(None))?;
        for p in &r.probes {
            tally.check(p.commutes, || format!("{name}: probe {} fails at {:?}", p.name, p.witness));
        }
    }

    // Negative controls: each corrupted leg must be caught.
    let m = fixtures::ab_star();
    let r = check_naturality_with(&Transducer::identity(m.alphabet()), &m, &generator_probes(m.alphabet()), &classical_opts(Some(1)))?;
    tally.check(!r.all_commute, || "classical corrupted γ not detected".into());
    let r = cat_naturality_check_with(&CatTransducer::identity(ab.base()), &ab, &cat_generator_probes(ab.base(), 2), &cat_opts(Some(0)))?;
    tally.check(!r.all_commute, || "categorical corrupted γ not detected".into());
    let r = grammar_naturality_check_with(&fixtures::bracket_transducer(), &dyck, &[], &grammar_opts(Some(0)))?;
    tally.check(!r.all_commute, || "grammar corrupted leg not detected".into());
    Ok(tally)
}

fn sl2_structure() -> Result<Tally> {
    let m = fixtures::ab_star();
    let mut t = Tally {
        instances: 1,
        ..Tally::default()
    };
    let words = |v: &[&[&str]]| -> BTreeSet<Word> { v.iter().map(|w| Word::from_symbols(w.iter().copied())).collect() };
    let plain = k_factors(&m, 2, false)?;
    let want = words(&[&["A", "B"], &["B", "A"]]);
    t.check(plain.factors == want, || format!("markerless 2-factors {:?}", plain.factors));
    let marked = k_factors(&m, 2, true)?;
    let want = words(&[&[LEFT_MARKER, "A"], &["A", "B"], &["B", "A"], &["B", RIGHT_MARKER]]);
    t.check(marked.factors == want, || format!("marked 2-factors {:?}", marked.factors));
    for (a, name) in [(0, "A"), (1, "B")] {
        let ta = m.letter_matrix(a);
        t.check(ta.mul(&ta)?.is_zero(), || format!("T_{name}² is not zero"));
    }
    Ok(t)
}

fn functoriality(cfg: &SuiteConfig) -> Result<Tally> {
    let mut rng = criterion_rng(cfg, 6);
    let machines: Vec<CatFsa> = (0..20).map(|_| gen::random_cat_fsa(&mut rng)).collect();
    let parts = par::map(cfg.exec, &machines, |m| -> Result<Tally> {
        let mut t = Tally {
            instances: 1,
            ..Tally::default()
        };
        let base = m.base();
        let paths = base.paths_up_to(3);
        let ops: Vec<_> = paths.iter().map(|p| m.t_phi(p)).collect::<Result<_>>()?;
        for (p, op) in paths.iter().zip(&ops) {
            let want = oracle::cat_operator_by_paths(m, p, p.len());
            t.check(op == &want, || format!("T_φ of {} differs from path enumeration", base.show(p)));
        }
        for (p1, op1) in paths.iter().zip(&ops) {
            for (p2, op2) in paths.iter().zip(&ops) {
                let product = op2.mul(op1)?;
                match p1.then(p2) {
                    Some(p) => t.check(product == m.t_phi(&p)?, || format!("T_{{{}}}∘T_{{{}}} ≠ T of the composite", base.show(p2), base.show(p1))),
                    None => t.check(product.is_zero(), || format!("mismatched pair {} then {} gives a nonzero product", base.show(p1), base.show(p2))),
                }
            }
        }
        Ok(t)
    });
    Tally::merge(parts)
}

/// Every sequence of 1 to `max_gaps + 1` parts drawn from `paths`.
fn sequences(paths: &[Path], max_gaps: usize) -> Vec<SplicedSeq> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Path>> = vec![Vec::new()];
    for _ in 0..=max_gaps {
        let mut next = Vec::new();
        for prefix in &layer {
            for p in paths {
                let mut v = prefix.clone();
                v.push(p.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().map(|v| SplicedSeq::new(v.clone()).expect("nonempty")));
        layer = next;
    }
    out
}

fn splice_laws(cat: &FreeCat, exec: Exec) -> Result<Tally> {
    let mut t = Tally {
        instances: 1,
        ..Tally::default()
    };
    for f in sequences(&cat.paths_up_to(2), 3) {
        let (x, y) = f.out_color();
        t.check(splice_compose(&SplicedSeq::identity(x, y), 0, &f)? == f, || format!("id ∘ {} ≠ itself", f.show(cat)));
        for i in 0..f.gaps() {
            let (a, b) = f.gap_color(i);
            t.check(splice_compose(&f, i, &SplicedSeq::identity(a, b))? == f, || format!("{} ∘_{i} id ≠ itself", f.show(cat)));
        }
    }
    let small = sequences(&cat.paths_up_to(1), 2);
    let mut by_color: HashMap<(usize, usize), Vec<&SplicedSeq>> = HashMap::new();
    for s in &small {
        by_color.entry(s.out_color()).or_default().push(s);
    }
    let fitting = |c: (usize, usize)| by_color.get(&c).map(Vec::as_slice).unwrap_or(&[]);
    let parts = par::map(exec, &small, |f| -> Result<Tally> {
        let mut t = Tally::default();
        for i in 0..f.gaps() {
            for &g in fitting(f.gap_color(i)) {
                let fg = splice_compose(f, i, g)?;
                for j in 0..g.gaps() {
                    for &h in fitting(g.gap_color(j)) {
                        let lhs = splice_compose(&fg, i + j, h)?;
                        let rhs = splice_compose(f, i, &splice_compose(g, j, h)?)?;
                        t.check(lhs == rhs, || format!("sequential associativity fails for {} / {} / {}", f.show(cat), g.show(cat), h.show(cat)));
                    }
                }
                for k in i + 1..f.gaps() {
                    for &h in fitting(f.gap_color(k)) {
                        let lhs = splice_compose(&splice_compose(f, k, h)?, i, g)?;
                        let rhs = splice_compose(&fg, k + g.gaps() - 1, h)?;
                        t.check(lhs == rhs, || format!("parallel associativity fails for {} / {} / {}", f.show(cat), g.show(cat), h.show(cat)));
                    }
                }
            }
        }
        Ok(t)
    });
    t.absorb(Tally::merge(parts)?);
    Ok(t)
}

fn homomorphism(g: &CfGrammar, depth: usize, cfg: &SuiteConfig) -> Result<Tally> {
    let s = g.species();
    let mut trees = Vec::new();
    let mut by_color = Vec::new();
    for c in 0..s.colors().len() {
        let ts = trees_up_to_depth(s, c, depth, &cfg.budget)?;
        trees.extend(ts.iter().cloned());
        by_color.push(ts);
    }
    let parts = par::map(cfg.exec, &trees, |t1| -> Result<Tally> {
        let mut t = Tally::default();
        let p1 = apply_grammar(g, t1)?;
        for (i, &c) in t1.leaves().iter().enumerate() {
            for t2 in &by_color[c] {
                let lhs = apply_grammar(g, &t1.graft(s, i, t2)?)?;
                let rhs = splice_compose(&p1, i, &apply_grammar(g, t2)?)?;
                t.check(lhs == rhs, || format!("apply(graft({}, {i}, {})) ≠ splice", t1.show(s), t2.show(s)));
            }
        }
        Ok(t)
    });
    let mut t = Tally::merge(parts)?;
    t.instances = 1;
    Ok(t)
}

fn operad_laws(cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::default();
    t.absorb(splice_laws(&FreeCat::monoid(["A", "B"])?, cfg.exec)?);
    t.absorb(splice_laws(fixtures::two_object_machine().base(), cfg.exec)?);
    t.absorb(homomorphism(&fixtures::dyck_grammar(), 3, cfg)?);
    t.absorb(homomorphism(&fixtures::right_linear_grammar(), 3, cfg)?);
    Ok(t)
}

fn words_of(g: &CfGrammar, paths: &BTreeSet<Path>) -> BTreeSet<Word> {
    paths.iter().map(|p| Word::from_symbols(g.base().labels(p))).collect()
}

fn cs_pipeline(cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::default();
    let budget = &cfg.budget;
    let dyck_oracle = oracle::dyck_words("(", ")", 8);
    let ab_oracle = oracle::nfa_language(&fixtures::ab_star(), 8);
    for (name, g, want) in [("Dyck", fixtures::dyck_grammar(), dyck_oracle), ("right-linear (AB)*", fixtures::right_linear_grammar(), ab_oracle)] {
        t.instances += 1;
        let cs = cs_factorize(&g, 3, budget)?;
        t.check(cs.checked_trees > 0, || format!("{name}: no trees checked"));
        let tc = treecont(g.species(), g.start())?;
        let back = grammar_transduce(&cs.transducer, &tc, budget)?;
        let reproduced = words_of(&g, &language_of_arrows(&back, 8)?);
        let original = words_of(&g, &language_of_arrows(&g, 8)?);
        t.check(reproduced == original, || format!("{name}: transduced contour language differs from the grammar's"));
        t.check(original == want, || format!("{name}: grammar language differs from the oracle"));
    }
    // Contours of binary trees against balanced words up to length 10.
    let g = fixtures::dyck_grammar();
    let cs = cs_factorize(&g, 3, budget)?;
    let tc = treecont(g.species(), g.start())?;
    let contours = language_of_arrows(&tc, 21)?;
    let images: BTreeSet<Word> = contours.iter().map(|p| Word::from_symbols(g.base().labels(&cs.tau_g.apply(p)))).collect();
    t.check(images.len() == contours.len(), || "contour words are not mapped injectively".into());
    t.check(images == oracle::dyck_words("(", ")", 10), || "contour images differ from balanced words up to length 10".into());
    Ok(t)
}

fn degenerate_reduction() -> Result<Tally> {
    let mut t = Tally::default();
    for (name, m) in fixtures::fixture_cat_fsas() {
        t.instances += 1;
        for p in m.base().paths_up_to(4) {
            let limit = p.len() + (p.len() + 1) * m.len();
            let op = spliced_defect_operator(&m, &SplicedSeq::constant(p.clone()), limit)?;
            let want = m.t_phi(&p)?;
            t.check(op.complete && op.matrix == want, || format!("{name}: {} differs from T_φ", m.base().show(&p)));
        }
    }
    Ok(t)
}

/// Alphabet helper for callers building their own instances.
pub fn letters(s: &str) -> Result<Alphabet> {
    Alphabet::chars(s)
}
