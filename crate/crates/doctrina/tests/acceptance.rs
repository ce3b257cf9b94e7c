//! One PASS/FAIL line per acceptance criterion; exits non-zero on any FAIL.

mod common;

use std::time::{Duration, Instant};

use common::*;
use doctrina::commands::{countermodel_cmd, entails_cmd, herbrand_cmd, EXIT_OK, EXIT_UNKNOWN};
use doctrina::laws::{
    adjunction_laws, category_laws, extension_laws, lattice_laws, soundness, theories, unit_laws, LawConfig, LawReport,
    ProvedLog,
};
use doctrina::syntax::parse_theory;
use doctrina::RunConfig;
use doctrina_core::herbrand::{find_witnesses, HerbrandOutcome, Schedule};
use doctrina_core::logic::{entails, Formula, Sequent};
use serde_json::Value;

const SEED: u64 = 0;
const CATEGORY_LIMIT: Duration = Duration::from_secs(10);
const ADJUNCTION_LIMIT: Duration = Duration::from_secs(120);
const HERBRAND_LIMIT: Duration = Duration::from_secs(60);
const MODEL_SIZE: usize = 3;
const TABLE_BITS: u32 = 20;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn summary(reports: &[LawReport]) -> (bool, String) {
    let pass = reports.iter().all(LawReport::passed);
    let text = reports
        .iter()
        .map(|r| {
            let mut s = format!("{} {}/{} failures", r.law, r.failures, r.cases);
            if let Some(f) = &r.first_failure {
                s.push_str(&format!(" (first: {f})"));
            }
            s
        })
        .collect::<Vec<_>>()
        .join(", ");
    (pass, text)
}

fn category() -> Outcome {
    let start = Instant::now();
    let rep = category_laws(SEED, 1000);
    let took = start.elapsed();
    let (pass, text) = summary(std::slice::from_ref(&rep));
    outcome(
        pass && rep.cases == 1000 && took < CATEGORY_LIMIT,
        format!("{text}, {took:.2?}"),
    )
}

fn lattice(log: &mut ProvedLog) -> Outcome {
    let th = theories();
    let rep = lattice_laws(SEED, 300, &th, LawConfig::default().budget, log);
    let (pass, text) = summary(std::slice::from_ref(&rep));
    outcome(pass, text)
}

fn adjunction(log: &mut ProvedLog) -> Outcome {
    let th = theories();
    let start = Instant::now();
    let reps = adjunction_laws(SEED, 200, &th, LawConfig::default().budget, log);
    let took = start.elapsed();
    let (pass, text) = summary(&reps);
    outcome(pass && took < ADJUNCTION_LIMIT, format!("{text}, {took:.2?}"))
}

fn unit_injectivity(log: &mut ProvedLog) -> Outcome {
    let th = theories();
    let rep = unit_laws(SEED, 200, &th, LawConfig::default().budget, log);
    let (pass, text) = summary(std::slice::from_ref(&rep));
    outcome(pass, format!("{text}, {} equivalent pairs", rep.proved))
}

fn json(out: &str) -> Value {
    serde_json::from_str(out).expect("command output is JSON")
}

fn validating() -> RunConfig {
    RunConfig {
        json: true,
        validate: true,
        model_size: MODEL_SIZE,
        max_table_bits: TABLE_BITS,
        ..RunConfig::default()
    }
}

fn witnesses(v: &Value) -> Vec<String> {
    v["certificate"]["witnesses"]
        .as_array()
        .map(|ws| ws.iter().map(|w| w.as_str().unwrap().to_owned()).collect())
        .unwrap_or_default()
}

/// Dropping any single witness leaves a sequent that is not proved.
fn minimal(text: &str, goal: &str) -> Result<bool, String> {
    let compiled = parse_theory(text)
        .map_err(|e| e.to_string())?
        .compile()
        .map_err(|e| e.to_string())?;
    let g = compiled.goal(goal).ok_or("no goal")?;
    let cfg = RunConfig::default();
    let schedule = Schedule::dovetail(cfg.depth, cfg.budget);
    let HerbrandOutcome::Found(cert) =
        find_witnesses(&compiled.theory, &g.goal, &schedule).map_err(|e| e.to_string())?
    else {
        return Err("no certificate".into());
    };
    if cert.witnesses.len() < 2 {
        return Ok(true);
    }
    for skip in 0..cert.witnesses.len() {
        let rhs = Formula::disj(
            cert.witnesses
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, w)| g.goal.instance(w)),
        );
        let seq =
            Sequent::new(compiled.signature(), g.goal.outer.clone(), Formula::True, rhs).map_err(|e| e.to_string())?;
        if entails(&compiled.theory, &seq, cert.budget)
            .map_err(|e| e.to_string())?
            .is_proved()
        {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Corpus {
    certificates: usize,
    validated_models: u64,
    violations: u64,
}

fn herbrand() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let files = theory_files();
    if files.len() < 10 {
        problems.push(format!("only {} theory files", files.len()));
    }
    let mut corpus = Corpus {
        certificates: 0,
        validated_models: 0,
        violations: 0,
    };
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let text = std::fs::read_to_string(path).unwrap();
        let out = match herbrand_cmd(&text, None, &validating()) {
            Ok(out) => out,
            Err(e) => {
                problems.push(format!("{name}: {e}"));
                continue;
            }
        };
        let expect_unknown = name == "unknown.theory";
        let want = if expect_unknown { EXIT_UNKNOWN } else { EXIT_OK };
        if out.code != want {
            problems.push(format!("{name}: exit {}", out.code));
        }
        for g in json(&out.stdout).as_array().unwrap() {
            let goal = g["name"].as_str().unwrap();
            let Some(cert) = g.get("certificate") else { continue };
            corpus.certificates += 1;
            let v = &g["validation"];
            corpus.validated_models += v["models"].as_u64().unwrap_or(0);
            corpus.violations += v["violations"].as_u64().unwrap_or(1);
            let derived = cert["derived_sequent"].as_str().unwrap();
            match entails_cmd(&text, derived, &RunConfig::default()) {
                Ok(r) if r.code == EXIT_OK => {}
                _ => problems.push(format!("{name}/{goal}: derived sequent does not replay")),
            }
            match minimal(&text, goal) {
                Ok(true) => {}
                Ok(false) => problems.push(format!("{name}/{goal}: witnesses not minimal")),
                Err(e) => problems.push(format!("{name}/{goal}: {e}")),
            }
            if let Some(conj) = g.get("conjunctive") {
                let seq = conj["sequent"].as_str().unwrap();
                let replay = entails_cmd(&text, seq, &RunConfig::default()).map(|r| r.code);
                if conj["status"] != "proved" || replay.ok() != Some(EXIT_OK) {
                    problems.push(format!("{name}/{goal}: conjunctive sequent not proved"));
                }
            }
        }
    }

    // (a) exactly {a, f(a)}, and each single witness fails in a two-element model
    let text = read("two_witnesses.theory");
    let out = herbrand_cmd(&text, Some("some"), &validating()).unwrap();
    let ws = witnesses(&json(&out.stdout));
    if ws != ["a", "f(a)"] {
        problems.push(format!("two_witnesses: got {ws:?}"));
    }
    for w in ["a", "f(a)"] {
        let target = format!("true |- R({w})");
        let cfg = RunConfig {
            json: true,
            model_size: 2,
            ..RunConfig::default()
        };
        let proved = entails_cmd(&text, &target, &cfg).map(|o| o.code);
        let counter = countermodel_cmd(&text, &target, &cfg).map(|o| json(&o.stdout));
        let two = counter
            .as_ref()
            .is_ok_and(|v| v["found"] == true && v["model"]["carriers"]["S"] == 2);
        let model_ok = counter.as_ref().is_ok_and(|v| {
            let m = serde_json::to_string(&v["model"]).unwrap();
            doctrina::commands::model_cmd(&text, &m, &RunConfig::default()).is_ok_and(|o| o.code == EXIT_OK)
        });
        if proved.ok() != Some(EXIT_UNKNOWN) || !two || !model_ok {
            problems.push(format!("two_witnesses: single witness {w} not excluded"));
        }
    }

    // (b) one Horn witness of f-depth two
    let out = herbrand_cmd(&read("horn_chain.theory"), Some("far"), &validating()).unwrap();
    if witnesses(&json(&out.stdout)) != ["f(f(a))"] {
        problems.push("horn_chain: expected the single witness f(f(a))".into());
    }

    // (c) the forall/forall reduction ends in a conjunctive sequent
    let out = herbrand_cmd(&read("forall_forall.theory"), Some("shifted"), &validating()).unwrap();
    let v = json(&out.stdout);
    if witnesses(&v) != ["g(y)"] || v["conjunctive"]["sequent"] != "P(g(y)) |- P(g(y)) [y:S]" {
        problems.push("forall_forall: expected witness g(y) and P(g(y)) |- P(g(y)) [y:S]".into());
    }

    let took = start.elapsed();
    if took >= HERBRAND_LIMIT {
        problems.push(format!("took {took:.2?}"));
    }
    if corpus.violations > 0 {
        problems.push(format!("{} validation violations", corpus.violations));
    }
    let detail = format!(
        "{} files, {} certificates, {} model checks, {took:.2?}",
        files.len(),
        corpus.certificates,
        corpus.validated_models
    );
    if problems.is_empty() {
        outcome(true, detail)
    } else {
        outcome(false, format!("{detail}; {}", problems.join("; ")))
    }
}

/// Everything the law suites proved, plus every corpus verdict, checked in
/// all models of size at most three.
fn soundness_oracle(log: &ProvedLog) -> Outcome {
    let th = theories();
    let mut problems = Vec::new();
    let laws = match soundness(&th, log, MODEL_SIZE, TABLE_BITS) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    if laws.violations > 0 {
        problems.push(format!(
            "violated: {}",
            laws.first_violation.clone().unwrap_or_default()
        ));
    }
    let mut corpus_checks = 0;
    for path in theory_files() {
        let text = std::fs::read_to_string(&path).unwrap();
        let compiled = parse_theory(&text).unwrap().compile().unwrap();
        let mut targets: Vec<String> = compiled.theory.axioms().iter().map(|a| a.name.clone()).collect();
        let out = herbrand_cmd(
            &text,
            None,
            &RunConfig {
                json: true,
                ..RunConfig::default()
            },
        )
        .unwrap();
        for g in json(&out.stdout).as_array().unwrap() {
            if let Some(c) = g.get("certificate") {
                targets.push(c["derived_sequent"].as_str().unwrap().to_owned());
            }
            if let Some(c) = g.get("conjunctive") {
                targets.push(c["sequent"].as_str().unwrap().to_owned());
            }
        }
        for t in targets {
            let out = entails_cmd(&text, &t, &validating()).unwrap();
            let v = json(&out.stdout);
            if v["status"] == "proved" {
                corpus_checks += 1;
                if v["validation"]["violations"] != 0 {
                    problems.push(format!("{}: {t}", path.display()));
                }
            }
        }
    }
    let detail = format!(
        "{} law sequents over {} models, {corpus_checks} corpus verdicts",
        laws.sequents, laws.models
    );
    if problems.is_empty() {
        outcome(true, detail)
    } else {
        outcome(false, format!("{detail}; {}", problems.join("; ")))
    }
}

fn extension() -> Outcome {
    let rep = extension_laws(SEED, 200);
    let (pass, text) = summary(std::slice::from_ref(&rep));
    outcome(pass && rep.cases == 200, text)
}

/// Everything the corpus can be asked, as JSON.
fn corpus_run() -> Vec<u8> {
    let mut out = Vec::new();
    let mut push = |args: &[&str]| {
        let run = doctrina(args);
        out.extend(format!("$ {} -> {}\n", args.join(" "), run.code).bytes());
        out.extend(run.stdout.bytes());
    };
    for path in theory_files() {
        let p = path.to_str().unwrap();
        push(&["herbrand", p, "--json", "--validate"]);
        push(&["entails", p, "true |- true", "--json"]);
    }
    let models = [
        ("empty.theory", "any.json"),
        ("fact.theory", "fact_empty.json"),
        ("fact.theory", "fact_ok.json"),
        ("two_witnesses.theory", "split_left.json"),
        ("monotone.theory", "forall_forall.json"),
        ("monotone.theory", "forall_forall_bad.json"),
    ];
    for (t, m) in models {
        let t = corpus_file(t);
        let m = corpus().join("models").join(m);
        push(&["model", t.to_str().unwrap(), m.to_str().unwrap(), "--json"]);
    }
    let t = corpus_file("two_witnesses.theory");
    push(&["countermodel", t.to_str().unwrap(), "true |- R(f(a))", "--json"]);
    push(&[
        "leq",
        t.to_str().unwrap(),
        "{ true }",
        "{ [y:S] R(y) }",
        "--depth",
        "2",
        "--json",
    ]);
    push(&["laws", "--cases", "10", "--seed", "3", "--json"]);
    out
}

fn determinism() -> Outcome {
    let first = corpus_run();
    let second = corpus_run();
    outcome(first == second, format!("{} bytes per run", first.len()))
}

fn main() {
    let mut log = ProvedLog::default();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 category laws", category()),
        ("2 lattice laws", lattice(&mut log)),
        ("3 adjunction, Frobenius, Beck-Chevalley", adjunction(&mut log)),
        ("4 unit injectivity", unit_injectivity(&mut log)),
        ("5 Herbrand corpus", herbrand()),
        ("6 soundness oracle", soundness_oracle(&log)),
        ("7 extension commutes", extension()),
        ("8 determinism", determinism()),
    ];
    let mut failed = 0;
    for (name, o) in &criteria {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {name}: {}", o.detail);
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
