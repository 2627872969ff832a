//! One line per acceptance criterion. Run with `cargo test --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use gradcause::{grade_candidates, is_actual_cause, is_extended_cause, Grade, Mode, Value};
use rand::rngs::StdRng;
use rand::SeedableRng;

const PER_FIXTURE: Duration = Duration::from_secs(1);
const ISOMORPHISM: Duration = Duration::from_secs(1);
const DIFFERENTIAL: Duration = Duration::from_secs(60);
const PROPERTIES: Duration = Duration::from_secs(120);
const DIFFERENTIAL_MODELS: u64 = 200;
const PROPERTY_SEEDS: u64 = 200;
const FUZZ_INPUTS: u64 = 10_000;

type Event<'a> = (&'a str, Value);

/// Verdict of one candidate in the fixture's named context.
fn verdict(name: &str, context: &str, cand: &[Event<'_>], effect: Event<'_>, mode: Mode) -> Result<bool, String> {
    let doc = fixture(name);
    let m = &doc.model;
    let (c, f, x) = (ctx(&doc, context), phi(m, effect.0, effect.1), cause(m, cand));
    let v = match mode {
        Mode::Hp => is_actual_cause(m, c, &x, &f, limits()),
        Mode::Extended => is_extended_cause(&doc.extended().ok_or("no order")?, c, &x, &f, limits()),
    }
    .map_err(|e| e.to_string())?;
    Ok(v.is_cause())
}

/// Extended verdicts of two singletons and the grade of the first against the second.
fn graded(
    name: &str,
    context: &str,
    a: Event<'_>,
    b: Event<'_>,
    effect: Event<'_>,
) -> Result<(bool, bool, Grade), String> {
    let doc = fixture(name);
    let m = &doc.model;
    let ext = doc.extended().ok_or("no order")?;
    let cands = [cause(m, &[a]), cause(m, &[b])];
    let g = grade_candidates(&ext, ctx(&doc, context), &cands, &phi(m, effect.0, effect.1), Mode::Extended, limits())
        .map_err(|e| e.to_string())?;
    Ok((g.verdicts[0].is_cause(), g.verdicts[1].is_cause(), g.grade(0, 1)))
}

struct Report {
    failures: Vec<String>,
    slowest: Duration,
    checks: usize,
}

impl Report {
    fn new() -> Self {
        Report { failures: Vec::new(), slowest: Duration::ZERO, checks: 0 }
    }

    /// Runs one fixture's checks, timing them together.
    fn fixture<T: PartialEq + std::fmt::Debug>(
        &mut self,
        label: &str,
        expected: T,
        run: impl FnOnce() -> Result<T, String>,
    ) {
        let start = Instant::now();
        let got = run();
        let took = start.elapsed();
        self.slowest = self.slowest.max(took);
        self.checks += 1;
        match got {
            Ok(g) if g == expected => {}
            Ok(g) => self.failures.push(format!("{label}: expected {expected:?}, got {g:?}")),
            Err(e) => self.failures.push(format!("{label}: {e}")),
        }
        if took > PER_FIXTURE {
            self.failures.push(format!("{label}: took {took:?}"));
        }
    }
}

fn line(ok: &mut bool, n: u32, title: &str, detail: String, failures: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("{status} criterion {n}: {title} ({detail})");
    for f in failures.iter().take(10) {
        println!("    {f}");
    }
    *ok &= failures.is_empty();
}

fn criterion_1() -> Report {
    let mut r = Report::new();
    let hp = Mode::Hp;
    r.fixture("forest fire L=1", true, || verdict("forest_fire", "u11", &[("L", 1)], ("F", 1), hp));
    r.fixture("forest fire M=1", true, || verdict("forest_fire", "u11", &[("M", 1)], ("F", 1), hp));
    r.fixture("poisoning A=1", true, || verdict("poisoning", "u11", &[("A", 1)], ("D", 1), hp));
    r.fixture("poisoning R=1", false, || verdict("poisoning", "u11", &[("R", 1)], ("D", 1), hp));
    r.fixture("bogus prevention B=1", true, || verdict("bogus_prevention", "u01", &[("B", 1)], ("VS", 1), hp));
    r
}

fn criterion_2() -> Report {
    let mut r = Report::new();
    let ext = Mode::Extended;
    r.fixture("bogus prevention B=1", false, || verdict("bogus_prevention", "u01", &[("B", 1)], ("VS", 1), ext));
    r.fixture("bogus prevention A=0", false, || verdict("bogus_prevention", "u01", &[("A", 0)], ("VS", 1), ext));
    r.fixture("background O=1", false, || verdict("background", "u11", &[("O", 1)], ("F", 1), ext));
    r.fixture("background M=1", true, || verdict("background", "u11", &[("M", 1)], ("F", 1), ext));
    r.fixture("short circuit A=1", false, || verdict("short_circuit", "u1", &[("A", 1)], ("VS", 1), ext));
    r.fixture("short circuit with intentions A=1", false, || {
        verdict("short_circuit_intentions", "u11", &[("A", 1)], ("VS", 1), ext)
    });
    r
}

fn criterion_3() -> Report {
    let mut r = Report::new();
    let (yes, no) = (true, false);
    r.fixture("knobe PT=1 vs AT=1", (yes, yes, Grade::Above), || {
        graded("knobe_pens", "u11", ("PT", 1), ("AT", 1), ("PO", 1))
    });
    r.fixture("chain LL=1 vs M=1", (yes, yes, Grade::Above), || {
        graded("faulkner_chain", "actual", ("LL", 1), ("M", 1), ("ES", 1))
    });
    r.fixture("legal careless AN=1 vs BC=1", (yes, yes, Grade::Above), || {
        graded("legal_careless", "careless", ("AN", 1), ("BC", 1), ("F", 1))
    });
    r.fixture("legal malicious BM=1 vs AN=1", (yes, yes, Grade::Above), || {
        graded("legal_malicious", "malicious", ("BM", 1), ("AN", 1), ("F", 1))
    });
    let omission = [
        ("omission_a", (yes, no, Grade::Above)),
        ("omission_b", (yes, yes, Grade::Equal)),
        ("omission_c", (yes, yes, Grade::Above)),
        ("omission_d", (yes, yes, Grade::Incomparable)),
    ];
    let mut patterns = Vec::new();
    for (name, expected) in omission {
        if !patterns.contains(&expected) {
            patterns.push(expected);
        }
        r.fixture(&format!("{name} H=1 vs W=0"), expected, || graded(name, "u10", ("H", 1), ("W", 0), ("D", 1)));
    }
    if patterns.len() != omission.len() {
        r.failures.push("omission viewpoints do not give four distinct patterns".into());
    }
    r
}

fn timed(limit: Duration, run: impl FnOnce() -> Vec<String>) -> (Vec<String>, Duration) {
    let start = Instant::now();
    let mut failures = run();
    let took = start.elapsed();
    if took > limit {
        failures.push(format!("took {took:?}, limit {limit:?}"));
    }
    (failures, took)
}

fn errors(results: impl IntoIterator<Item = Check>) -> Vec<String> {
    results.into_iter().filter_map(Result::err).collect()
}

fn main() -> ExitCode {
    let mut ok = true;
    let limit_ms = PER_FIXTURE.as_millis();

    for (n, title, report) in [
        (1, "plain-HP fixture suite", criterion_1()),
        (2, "extended fixture suite", criterion_2()),
        (3, "grading suite", criterion_3()),
    ] {
        let detail = format!(
            "{} checks, exact match, slowest {:.1} ms, limit {limit_ms} ms per fixture",
            report.checks,
            report.slowest.as_secs_f64() * 1e3
        );
        line(&mut ok, n, title, detail, &report.failures);
    }

    let (failures, took) = timed(ISOMORPHISM, || errors([prop_isomorphism_discrimination()]));
    let detail = format!(
        "bogus prevention vs forest fire, exact, {:.1} ms, limit {} ms",
        took.as_secs_f64() * 1e3,
        ISOMORPHISM.as_millis()
    );
    line(&mut ok, 4, "isomorphism discrimination", detail, &failures);

    let (failures, took) = timed(DIFFERENTIAL, || errors((0..DIFFERENTIAL_MODELS).map(prop_differential)));
    let detail = format!(
        "{DIFFERENTIAL_MODELS} random models, HP and extended vs oracle, trivial order vs HP, {} disagreements, {:.2} s, limit {} s",
        failures.len(),
        took.as_secs_f64(),
        DIFFERENTIAL.as_secs()
    );
    line(&mut ok, 5, "differential oracle suite", detail, &failures);

    let seeds: Vec<String> = gradcause::corpus::load_corpus().iter().map(|f| f.text.to_string()).collect();
    let refs: Vec<&str> = seeds.iter().map(String::as_str).collect();
    let (failures, took) = timed(PROPERTIES, || {
        let mut out = Vec::new();
        for seed in 0..PROPERTY_SEEDS {
            out.extend(errors([
                prop_preorder(seed),
                prop_but_for(seed),
                prop_extended_implies_hp(seed),
                prop_empty_prefix(seed),
                prop_solver(seed),
            ]));
        }
        let mut rng = StdRng::seed_from_u64(0);
        for _ in 0..FUZZ_INPUTS {
            out.extend(errors([prop_parser_total(rand::Rng::gen(&mut rng), &refs)]));
        }
        out
    });
    let detail = format!(
        "{PROPERTY_SEEDS} seeds x 5 properties, {FUZZ_INPUTS} fuzz inputs, {:.2} s, limit {} s",
        took.as_secs_f64(),
        PROPERTIES.as_secs()
    );
    line(&mut ok, 6, "property suites", detail, &failures);

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
