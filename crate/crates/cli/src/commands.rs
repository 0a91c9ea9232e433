use std::path::Path as FilePath;

use cobweave_core::automata::{Automaton, Word};
use cobweave_core::boolsemi::BoolMat;
use cobweave_core::budget::Budget;
use cobweave_core::catauto::{cat_apply, cat_generator_probes, cat_naturality_check_with, check_finitary, check_ulf, CatFsa, CatNaturalityOptions, CatTransducer, PathSpec};
use cobweave_core::cobordism::Term;
use cobweave_core::operad::{
    apply_grammar, cs_factorize as factorize, grammar_naturality_check_with, grammar_tqft_operator, grammar_transduce, language_of_arrows_with, treecont,
    CfGrammar, GrammarNaturalityOptions, OperadTree, SplicedSeq, SplicedSpec, TreeSpec,
};
use cobweave_core::par::Exec;
use cobweave_core::subregular::analyze;
use cobweave_core::suite::{self, SuiteConfig, CRITERIA};
use cobweave_core::tqft::{check_naturality_with, generator_probes, NaturalityOptions, TqftFunctor};
use cobweave_core::transducer::Transducer;
use serde_json::json;

use crate::io::{check_letters, load, parse_word, Failure, Machine, Outcome, Report};
use crate::{CatAction, Common, GrammarAction, SubregularAction};

pub struct Ctx<'a> {
    pub common: &'a Common,
    pub budget: Budget,
}

fn words(ws: &[Word]) -> Vec<String> {
    ws.iter().map(Word::to_string).collect()
}

pub fn accept(ctx: &Ctx, report: &mut Report, machine: &FilePath, word: &str) -> Outcome<()> {
    let w = parse_word(word);
    let accepted = match Machine::load(machine)? {
        Machine::Finite(m) => {
            check_letters(&w, m.alphabet())?;
            m.accepts_with(w.symbols(), &ctx.budget)?
        }
        Machine::Pushdown(m) => {
            check_letters(&w, m.alphabet())?;
            m.accepts_with(w.symbols(), &ctx.budget)?
        }
    };
    eprintln!("{} `{w}`", if accepted { "accepts" } else { "rejects" });
    report.record(&json!({ "word": w, "accepted": accepted }))
}

pub fn eval(ctx: &Ctx, report: &mut Report, machine: &FilePath, diagram: &FilePath) -> Outcome<()> {
    let m = Machine::load(machine)?.finite("eval")?;
    let term: Term<Word> = load(diagram)?;
    let d = term.typecheck()?;
    let phi = TqftFunctor::new(&m).with_budget(ctx.budget);
    let value = phi.eval(&d)?;
    eprintln!("{} → {}: {}x{} matrix", d.dom(), d.cod(), value.rows(), value.cols());
    report.record(&json!({ "dom": d.dom(), "cod": d.cod(), "matrix": value }))
}

pub fn apply(ctx: &Ctx, report: &mut Report, transducer: &FilePath, machine: &FilePath) -> Outcome<()> {
    let t: Transducer = load(transducer)?;
    let bound = ctx.common.bound;
    let (machine, language) = match Machine::load(machine)? {
        Machine::Finite(m) => {
            let out = t.apply_with(&m, &ctx.budget)?;
            let lang = out.enumerate_language_with(bound, &ctx.budget)?;
            (serde_json::to_value(&out), lang)
        }
        Machine::Pushdown(m) => {
            let out = t.apply_with(&m, &ctx.budget)?;
            let lang = out.enumerate_language_with(bound, &ctx.budget)?;
            (serde_json::to_value(&out), lang)
        }
    };
    let machine = machine.map_err(|e| Failure::Io(e.to_string()))?;
    eprintln!("{} words of length ≤ {bound}", language.len());
    report.record(&json!({ "machine": machine, "bound": bound, "language": words(&language) }))
}

pub fn compose(ctx: &Ctx, report: &mut Report, second: &FilePath, first: &FilePath) -> Outcome<()> {
    let t2: Transducer = load(second)?;
    let t1: Transducer = load(first)?;
    let t = t2.compose_with(&t1, &ctx.budget)?;
    eprintln!("core with {} states", t.core().len());
    report.record(&t)
}

pub fn naturality(ctx: &Ctx, report: &mut Report, transducer: &FilePath, machine: &FilePath, spans: bool) -> Outcome<()> {
    let t: Transducer = load(transducer)?;
    let m = Machine::load(machine)?.finite("check-naturality")?;
    let opts = NaturalityOptions {
        exec: Exec::Sequential,
        budget: ctx.budget,
        drop_right: None,
        spans,
    };
    let r = check_naturality_with(&t, &m, &generator_probes(t.mid_alphabet()), &opts)?;
    for p in &r.probes {
        report.check(p.commutes && p.span_equal != Some(false), p)?;
    }
    eprintln!("{} of {} probe squares commute", r.probes.iter().filter(|p| p.commutes).count(), r.probes.len());
    Ok(())
}

pub fn subregular(ctx: &Ctx, report: &mut Report, action: SubregularAction) -> Outcome<()> {
    let SubregularAction::Analyze { machine, k, markers } = action;
    let m = Machine::load(&machine)?.finite("subregular analyze")?;
    let a = analyze(&m, k, markers, &ctx.budget)?;
    eprintln!("{} {k}-factors; strictly {k}-local: {}", a.factors.len(), a.sl);
    report.record(&a)
}

fn cat_probes(t: &CatTransducer) -> Vec<cobweave_core::cobordism::Diagram<cobweave_core::catauto::Path>> {
    cat_generator_probes(t.states(), 2)
}

pub fn cat(ctx: &Ctx, report: &mut Report, action: CatAction) -> Outcome<()> {
    let bound = ctx.common.bound;
    match action {
        CatAction::Check { machine } => {
            let m: CatFsa = load(&machine)?;
            for (name, c) in [("finitary", check_finitary(m.tau())), ("ulf", check_ulf(m.tau()))] {
                eprintln!("{name}: {}", c.holds);
                report.check(c.holds, &json!({ "check": name, "holds": c.holds, "witness": c.witness }))?;
            }
        }
        CatAction::Language { machine } => {
            let m: CatFsa = load(&machine)?;
            let paths = m.arrow_language_with(bound, &ctx.budget)?;
            let specs: Vec<PathSpec> = paths.iter().map(|p| m.base().spec_of(p)).collect();
            eprintln!("{} arrows of length ≤ {bound}", specs.len());
            report.record(&json!({ "bound": bound, "arrows": specs }))?;
        }
        CatAction::Tphi { machine, word } => {
            let m: CatFsa = load(&machine)?;
            let labels = parse_word(&word).0;
            let op = m.t_phi_spec(&PathSpec::Labels(labels.clone()))?;
            eprintln!("{}x{} operator", op.rows(), op.cols());
            report.record(&json!({ "path": labels, "matrix": op }))?;
        }
        CatAction::Apply { transducer, machine } => {
            let t: CatTransducer = load(&transducer)?;
            let m: CatFsa = load(&machine)?;
            let applied = cat_apply(&t, &m, bound, &ctx.budget)?;
            if applied.truncated {
                eprintln!("warning: pullback search truncated at {bound} generators per side");
            }
            report.record(&json!({ "machine": applied.machine, "truncated": applied.truncated }))?;
        }
        CatAction::Naturality { transducer, machine } => {
            let t: CatTransducer = load(&transducer)?;
            let m: CatFsa = load(&machine)?;
            let opts = CatNaturalityOptions {
                exec: Exec::Sequential,
                budget: ctx.budget,
                bound,
                drop: None,
            };
            let r = cat_naturality_check_with(&t, &m, &cat_probes(&t), &opts)?;
            for p in &r.probes {
                report.check(p.commutes, p)?;
            }
            if r.truncated {
                report.check(false, &json!({ "check": "pullback", "truncated": true }))?;
            }
            eprintln!("{} of {} probe squares commute", r.probes.iter().filter(|p| p.commutes).count(), r.probes.len());
        }
    }
    Ok(())
}

pub fn grammar(ctx: &Ctx, report: &mut Report, action: GrammarAction) -> Outcome<()> {
    let bound = ctx.common.bound;
    match action {
        GrammarAction::Language { grammar } => {
            let g: CfGrammar = load(&grammar)?;
            let paths = language_of_arrows_with(&g, bound, &ctx.budget)?;
            let specs: Vec<PathSpec> = paths.iter().map(|p| g.base().spec_of(p)).collect();
            eprintln!("{} arrows of length ≤ {bound}", specs.len());
            report.record(&json!({ "bound": bound, "arrows": specs }))?;
        }
        GrammarAction::Apply { grammar, tree } => {
            let g: CfGrammar = load(&grammar)?;
            let spec: TreeSpec = load(&tree)?;
            let t = OperadTree::from_spec(g.species(), &spec)?;
            let s = apply_grammar(&g, &t)?;
            eprintln!("{}", s.show(g.base()));
            report.record(&s.to_spec(g.base()))?;
        }
        GrammarAction::Operator { grammar, sequence } => {
            let g: CfGrammar = load(&grammar)?;
            let spec: SplicedSpec = load(&sequence)?;
            let s = SplicedSeq::from_spec(g.base(), &spec)?;
            let op: BoolMat = grammar_tqft_operator(&g, &s)?;
            eprintln!("{}x{} operator", op.rows(), op.cols());
            report.record(&json!({ "sequence": spec, "matrix": op }))?;
        }
        GrammarAction::Naturality { transducer, grammar } => {
            let t: CatTransducer = load(&transducer)?;
            let g: CfGrammar = load(&grammar)?;
            let opts = GrammarNaturalityOptions {
                exec: Exec::Sequential,
                budget: ctx.budget,
                drop: None,
            };
            let r = grammar_naturality_check_with(&t, &g, &[], &opts)?;
            for p in &r.probes {
                report.check(p.commutes, p)?;
            }
            eprintln!("{} of {} probe squares commute", r.probes.iter().filter(|p| p.commutes).count(), r.probes.len());
        }
    }
    Ok(())
}

pub fn cs_factorize(ctx: &Ctx, report: &mut Report, grammar: &FilePath, depth: usize) -> Outcome<()> {
    let g: CfGrammar = load(grammar)?;
    let bound = ctx.common.bound;
    let cs = factorize(&g, depth, &ctx.budget)?;
    let tc = treecont(g.species(), g.start())?;
    let back = grammar_transduce(&cs.transducer, &tc, &ctx.budget)?;
    let reproduced = language_of_arrows_with(&back, bound, &ctx.budget)?;
    let original = language_of_arrows_with(&g, bound, &ctx.budget)?;
    let show = |ps: &std::collections::BTreeSet<cobweave_core::catauto::Path>| -> Vec<Word> {
        ps.iter().map(|p| Word::from_symbols(g.base().labels(p))).collect()
    };
    let (a, b) = (show(&reproduced), show(&original));
    report.record(&json!({
        "checked_trees": cs.checked_trees,
        "relabel": cs.relabel,
        "tau_g": cs.tau_g.to_spec(),
        "transducer": cs.transducer,
    }))?;
    report.check(a == b, &json!({ "check": "contour language", "bound": bound, "equal": a == b, "words": words(&b) }))?;
    eprintln!("{} trees checked; contour transduction {} the language up to {bound}", cs.checked_trees, if a == b { "reproduces" } else { "does not reproduce" });
    Ok(())
}

pub fn suite(ctx: &Ctx, report: &mut Report, seed: u64, criterion: Option<u8>, sequential: bool) -> Outcome<()> {
    let cfg = SuiteConfig {
        seed,
        exec: if sequential { Exec::Sequential } else { Exec::Parallel },
        budget: ctx.budget,
    };
    let ids: Vec<u8> = match criterion {
        Some(id) if CRITERIA.iter().any(|c| c.0 == id) => vec![id],
        Some(id) => return Err(Failure::Usage(format!("no criterion {id}; they are numbered 1 to {}", CRITERIA.len()))),
        None => CRITERIA.iter().map(|c| c.0).collect(),
    };
    for id in ids {
        let r = suite::run(id, &cfg);
        eprintln!("{}", r.summary_line());
        report.check(r.ok(), &r)?;
    }
    Ok(())
}
