//! The subcommands, as functions from input text to an exit code and the
//! text to print.

use std::fmt::Write as _;

use doctrina_core::completion::{leq, ExElement, Mode};
use doctrina_core::herbrand::{conjunctive_sequent, find_witnesses, HerbrandOutcome, Schedule};
use doctrina_core::logic::{entails, Fragment, Sequent, Theory};
use doctrina_core::semantics::{enumerate_models, eval, satisfies, FiniteModel, Subset};
use doctrina_core::terms::Context;
use serde::Serialize;

use crate::config::RunConfig;
use crate::laws::{run_all, LawConfig};
use crate::model::ModelFile;
use crate::report;
use crate::syntax::{parse_context, parse_element, parse_sequent, parse_theory, Compiled};
use crate::validate::validate;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// The theory and sequent named by `target`: an axiom name checks that axiom
/// against the remaining ones, anything else is read as a sequent.
fn target_sequent(compiled: &Compiled, target: &str) -> Result<(Theory, Sequent), Error> {
    let target = target.trim();
    if is_name(target) {
        if let Some(ax) = compiled.theory.axiom(target) {
            let mut rest = Theory::new(compiled.signature().clone(), compiled.theory.fragment());
            for other in compiled.theory.axioms().iter().filter(|o| o.name != target) {
                rest.add_axiom(&other.name, other.sequent.clone())?;
            }
            return Ok((rest, ax.sequent.clone()));
        }
    }
    let (ctx, lhs, rhs) = parse_sequent(target, compiled.signature(), compiled.is_classical())?;
    let (theory, mut fs) = compiled.translate(&[(ctx.clone(), lhs), (ctx.clone(), rhs)])?;
    let rhs = fs.pop().expect("two formulas");
    let lhs = fs.pop().expect("two formulas");
    let seq = Sequent::new(theory.signature(), ctx, lhs, rhs)?;
    Ok((theory, seq))
}

fn human_trace(out: &mut String, steps: &[report::Step]) {
    for s in steps {
        let _ = writeln!(out, "  {:<8} {} {}", s.branch, s.axiom, s.instance);
    }
}

fn human_validation(out: &mut String, v: &Option<crate::validate::Validation>) {
    if let Some(v) = v {
        let _ = writeln!(
            out,
            "models: {} of size <= {}, {} violations",
            v.models, v.max_size, v.violations
        );
    }
}

pub fn entails_cmd(text: &str, target: &str, cfg: &RunConfig) -> Result<Output, Error> {
    let compiled = parse_theory(text)?.compile()?;
    let (theory, seq) = target_sequent(&compiled, target)?;
    let verdict = entails(&theory, &seq, cfg.budget)?;
    let mut rep = report::Entails::new(theory.signature(), &seq, &verdict, cfg.budget);
    if cfg.validate && verdict.is_proved() {
        rep.validation = Some(validate(&theory, &seq, cfg.model_size, cfg.max_table_bits)?);
    }
    let code = match (&rep.validation, verdict.is_proved()) {
        (Some(v), _) if v.violations > 0 => EXIT_FAIL,
        (_, true) => EXIT_OK,
        (_, false) => EXIT_UNKNOWN,
    };
    let stdout = if cfg.json {
        json(&rep)
    } else {
        let mut out = String::new();
        let _ = write!(out, "{}: {}", rep.status, rep.sequent);
        match rep.exhausted {
            Some("saturated") => out.push_str(" (saturated)"),
            Some(e) => {
                let _ = write!(out, " ({e} budget exhausted)");
            }
            None => {}
        }
        let _ = writeln!(out);
        human_trace(&mut out, &rep.trace);
        human_validation(&mut out, &rep.validation);
        out
    };
    Ok(Output { code, stdout })
}

pub fn herbrand_cmd(text: &str, goal: Option<&str>, cfg: &RunConfig) -> Result<Output, Error> {
    let compiled = parse_theory(text)?.compile()?;
    let selected: Vec<_> = match goal {
        Some(name) => vec![compiled.goal(name).ok_or_else(|| Error::UnknownGoal(name.to_owned()))?],
        None => compiled.goals.iter().collect(),
    };
    let theory = &compiled.theory;
    let sig = theory.signature();
    let schedule = Schedule::dovetail(cfg.depth, cfg.budget);
    let mut reports = Vec::new();
    for g in selected {
        let rep = match find_witnesses(theory, &g.goal, &schedule)? {
            HerbrandOutcome::Found(cert) => {
                let conjunctive = match &g.forall_forall {
                    Some(ff) => {
                        let (seq, v) = conjunctive_sequent(theory, ff, &cert.witnesses, cert.budget)?;
                        Some(report::Entails::new(sig, &seq, &v, cert.budget))
                    }
                    None => None,
                };
                let validation = if cfg.validate {
                    Some(validate(
                        theory,
                        &cert.derived_sequent,
                        cfg.model_size,
                        cfg.max_table_bits,
                    )?)
                } else {
                    None
                };
                report::Herbrand {
                    name: g.name.clone(),
                    status: "found",
                    stages_tried: schedule
                        .stages()
                        .iter()
                        .position(|s| s.depth == cert.depth_used && s.budget == cert.budget)
                        .map_or(0, |i| i + 1),
                    certificate: Some(report::Certificate::new(sig, &cert)),
                    conjunctive,
                    validation,
                }
            }
            HerbrandOutcome::Unknown { stages_tried } => report::Herbrand {
                name: g.name.clone(),
                status: "unknown",
                stages_tried,
                certificate: None,
                conjunctive: None,
                validation: None,
            },
        };
        reports.push(rep);
    }
    let broken = reports
        .iter()
        .any(|r| r.validation.as_ref().is_some_and(|v| v.violations > 0));
    let code = if broken {
        EXIT_FAIL
    } else if reports.iter().all(|r| r.certificate.is_some()) {
        EXIT_OK
    } else {
        EXIT_UNKNOWN
    };
    let stdout = if cfg.json {
        if goal.is_some() {
            json(&reports[0])
        } else {
            json(&reports)
        }
    } else {
        let mut out = String::new();
        for r in &reports {
            match &r.certificate {
                Some(c) => {
                    let _ = writeln!(out, "{}: found [{}]", r.name, c.witnesses.join(", "));
                    let _ = writeln!(out, "  derived: {}", c.derived_sequent);
                    if let Some(conj) = &r.conjunctive {
                        let _ = writeln!(out, "  conjunctive: {} ({})", conj.sequent, conj.status);
                    }
                }
                None => {
                    let _ = writeln!(out, "{}: unknown after {} stages", r.name, r.stages_tried);
                }
            }
            human_validation(&mut out, &r.validation);
        }
        out
    };
    Ok(Output { code, stdout })
}

pub fn leq_cmd(text: &str, left: &str, right: &str, context: &str, cfg: &RunConfig) -> Result<Output, Error> {
    let compiled = parse_theory(text)?.compile()?;
    let sig = compiled.signature();
    let base = parse_context(context, sig)?;
    let classical = compiled.is_classical();
    let a = parse_element(left, sig, &base, classical)?;
    let b = parse_element(right, sig, &base, classical)?;
    let bodies: Vec<(Context, _)> = a.iter().chain(&b).map(|(w, f)| (w.concat(&base), f.clone())).collect();
    let (theory, mut fs) = compiled.translate(&bodies)?;
    let b_bodies = fs.split_off(a.len());
    let mode = if theory.fragment() == Fragment::Horn {
        Mode::Horn
    } else {
        Mode::Coherent
    };
    let sig = theory.signature();
    let pairs = |ps: &[(Context, _)], bodies: Vec<_>| -> Vec<_> {
        ps.iter().map(|(w, _): &(Context, _)| w.clone()).zip(bodies).collect()
    };
    let ea = ExElement::new(sig, base.clone(), pairs(&a, fs), mode)?;
    let eb = ExElement::new(sig, base, pairs(&b, b_bodies), mode)?;
    let out = leq(&theory, &ea, &eb, cfg.depth, cfg.budget)?;
    let rep = report::Leq::new(sig, &ea, &eb, &out, cfg.depth, cfg.budget);
    let code = if out.is_proved() { EXIT_OK } else { EXIT_UNKNOWN };
    let stdout = if cfg.json {
        json(&rep)
    } else {
        let mut out = format!("{}: {} <= {}\n", rep.status, rep.left, rep.right);
        for p in rep.witness.iter().flatten() {
            for a in &p.arrows {
                let _ = writeln!(out, "  pair {} -> {} via {}", p.pair, a.target, a.tuple);
            }
        }
        out
    };
    Ok(Output { code, stdout })
}

/// A model of the compiled signature from one given over the file's own
/// signature: relations introduced for negations, when not given, are read
/// as the complements of their skeletons.
fn complete_model(compiled: &Compiled, file_sig_model: &ModelFile) -> Result<FiniteModel, Error> {
    let sig = compiled.signature();
    let mut given = file_sig_model.clone();
    let missing: Vec<_> = compiled
        .negations
        .iter()
        .filter(|n| !given.relations.contains_key(&sig.rel(n.relation).name))
        .collect();
    for n in &missing {
        given.relations.insert(sig.rel(n.relation).name.clone(), Vec::new());
    }
    let mut m = given.to_model(sig)?;
    for n in missing {
        let skeleton = eval(&m, sig, &n.skeleton, &n.context)?;
        let complement = Subset::from_indices(skeleton.len(), (0..skeleton.len()).filter(|i| !skeleton.contains(*i)));
        let relations = sig
            .relations()
            .map(|(r, _)| {
                if r == n.relation {
                    complement.clone()
                } else {
                    m.relation_table(r).clone()
                }
            })
            .collect();
        let functions = sig.functions().map(|(f, _)| m.function_table(f).to_vec()).collect();
        m = FiniteModel::new(sig, m.sizes().to_vec(), functions, relations)?;
    }
    Ok(m)
}

pub fn model_cmd(text: &str, model_json: &str, cfg: &RunConfig) -> Result<Output, Error> {
    let compiled = parse_theory(text)?.compile()?;
    let m = complete_model(&compiled, &ModelFile::parse(model_json)?)?;
    let sig = compiled.signature();
    let axioms: Vec<report::AxiomCheck> = compiled
        .theory
        .axioms()
        .iter()
        .map(|ax| {
            let counter = m.counterexample(sig, &ax.sequent);
            report::AxiomCheck {
                name: ax.name.clone(),
                holds: counter.is_none(),
                counterexample: counter,
            }
        })
        .collect();
    let rep = report::ModelCheck {
        satisfied: axioms.iter().all(|a| a.holds),
        axioms,
    };
    debug_assert_eq!(rep.satisfied, satisfies(&m, &compiled.theory));
    let code = if rep.satisfied { EXIT_OK } else { EXIT_FAIL };
    let stdout = if cfg.json {
        json(&rep)
    } else {
        let mut out = String::new();
        for a in &rep.axioms {
            match &a.counterexample {
                None => {
                    let _ = writeln!(out, "{}: holds", a.name);
                }
                Some(env) => {
                    let _ = writeln!(out, "{}: fails at {}", a.name, report::tuple_text(env));
                }
            }
        }
        out
    };
    Ok(Output { code, stdout })
}

pub fn countermodel_cmd(text: &str, target: &str, cfg: &RunConfig) -> Result<Output, Error> {
    let compiled = parse_theory(text)?.compile()?;
    let (theory, seq) = target_sequent(&compiled, target)?;
    let sig = theory.signature();
    let mut checked = 0;
    let mut found = None;
    for m in enumerate_models(sig, cfg.model_size, cfg.max_table_bits)? {
        if !satisfies(&m, &theory) {
            continue;
        }
        checked += 1;
        if let Some(env) = m.counterexample(sig, &seq) {
            found = Some((m, env));
            break;
        }
    }
    let rep = report::Countermodel {
        sequent: seq.display(sig).to_string(),
        max_size: cfg.model_size,
        models_checked: checked,
        found: found.is_some(),
        model: found.as_ref().map(|(m, _)| ModelFile::from_model(m, sig)),
        counterexample: found.as_ref().map(|(_, env)| env.clone()),
    };
    let code = if rep.found { EXIT_OK } else { EXIT_UNKNOWN };
    let stdout = if cfg.json {
        json(&rep)
    } else {
        match &rep.model {
            Some(m) => format!(
                "countermodel to {} at {}:\n{}\n",
                rep.sequent,
                report::tuple_text(rep.counterexample.as_deref().unwrap_or_default()),
                serde_json::to_string(m).expect("models serialize")
            ),
            None => format!(
                "no countermodel to {} among {} models of size <= {}\n",
                rep.sequent, rep.models_checked, rep.max_size
            ),
        }
    };
    Ok(Output { code, stdout })
}

/// Runs the law suites; `cases` overrides every suite's size.
pub fn laws_cmd(cases: Option<usize>, cfg: &RunConfig) -> Result<Output, Error> {
    let mut lc = LawConfig {
        seed: cfg.seed,
        ..LawConfig::default()
    };
    if let Some(n) = cases {
        lc = LawConfig {
            category: n,
            lattice: n,
            adjunction: n,
            unit: n,
            extension: n,
            ..lc
        };
    }
    let run = run_all(&lc, cfg.model_size, cfg.max_table_bits)?;
    let ok = run.reports.iter().all(|r| r.passed()) && run.soundness.violations == 0;
    let code = if ok { EXIT_OK } else { EXIT_FAIL };
    let stdout = if cfg.json {
        json(&run)
    } else {
        let mut out = String::new();
        for r in &run.reports {
            let verdict = if r.passed() { "ok" } else { "FAILED" };
            let _ = writeln!(
                out,
                "{:<16} {verdict:<6} {} cases, {} proved, {} failures",
                r.law, r.cases, r.proved, r.failures
            );
            if let Some(f) = &r.first_failure {
                let _ = writeln!(out, "  first failure: {f}");
            }
        }
        let s = &run.soundness;
        let _ = writeln!(
            out,
            "{:<16} {:<6} {} sequents, {} models, {} violations",
            "soundness",
            if s.violations == 0 { "ok" } else { "FAILED" },
            s.sequents,
            s.models,
            s.violations
        );
        out
    };
    Ok(Output { code, stdout })
}
