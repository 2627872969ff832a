use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use gradcause::corpus::load_corpus;
use gradcause::dsl::QueryKind;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradcause")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_model(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("gradcause-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn check_lists_the_forest_fire_witness() {
    let o = run(&["check", "--mode", "hp", &fixture("forest_fire.scm.txt"), "cause L=1 for F=1 @ u11"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict: cause"), "{out}");
    assert!(out.contains("-> (L=0, M=0, F=0)"), "{out}");
}

#[test]
fn grade_ranks_negligence_above_carelessness() {
    let o = run(&["grade", "--mode", "extended", &fixture("legal_careless.scm.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("AN=1 above BC=1"), "{}", stdout(&o));
}

#[test]
fn solve_prints_the_poisoning_world() {
    let o = run(&["solve", &fixture("poisoning.scm.txt"), "@u11"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(A=1, R=1, B=0, D=1)"), "{}", stdout(&o));
}

#[test]
fn satisfies_evaluates_interventions() {
    let o = run(&["satisfies", &fixture("forest_fire.scm.txt"), "[M<-0](F=1) @ u11"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("true"));
    let o = run(&["satisfies", &fixture("forest_fire.scm.txt"), "[L<-0, M<-0](F=1) @ u11"]);
    assert!(stdout(&o).contains("false"));
}

#[test]
fn extended_text_shows_relation_to_actual() {
    let o = run(&["check", "--mode", "extended", &fixture("bogus_prevention.scm.txt"), "B=1 for VS=1 @ u01"]);
    let out = stdout(&o);
    assert!(out.contains("[incomparable, inadmissible]"), "{out}");
    assert!(out.contains("not a cause"), "{out}");
}

#[test]
fn context_flag_supplies_missing_context() {
    let o = run(&["check", "--context", "u10", &fixture("forest_fire.scm.txt"), "L=1 for F=1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("@ u10"));
}

#[test]
fn all_causes_lists_conjunctions_up_to_k() {
    let o = run(&["check", "--all-causes", "2", &fixture("forest_fire_conjunctive.scm.txt"), "F=1 @ u11"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("  L=1\n") && out.contains("  M=1\n"), "{out}");
    assert!(!out.contains("L=1 & M=1"), "{out}");
}

#[test]
fn exit_codes() {
    let ff = fixture("forest_fire.scm.txt");
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["check", "/nonexistent/model.scm.txt"]).status.code(), Some(1));
    assert_eq!(run(&["check", &ff, "cause Q=1 for F=1 @ u11"]).status.code(), Some(1));
    assert_eq!(run(&["check", &ff, "cause L=1 for F=1"]).status.code(), Some(1));
    assert_eq!(run(&["check", &ff, "--context", "nowhere", "L=1 for F=1"]).status.code(), Some(1));
    assert_eq!(run(&["grade", &ff, "cause L=1 for F=1 @ u11"]).status.code(), Some(1));
    assert_eq!(run(&["check", "--max-search", "2", &ff, "L=1 for F=1 @ u11"]).status.code(), Some(2));
    let bad = temp_model("bad.scm.txt", "exo U : {0,1}\nvar F : {0,1} = max(L, U)\n");
    let o = run(&["validate", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("L"));
    let plain = temp_model("plain.scm.txt", "exo U : {0,1}\nvar F : {0,1} = U\ncontext u : U=1\n");
    assert_eq!(run(&["check", "--mode", "hp", &plain, "F=1 for F=1"]).status.code(), Some(0));
    assert_eq!(run(&["check", "--mode", "extended", &plain, "F=1 for F=1"]).status.code(), Some(1));
}

#[test]
fn validate_reports_counts() {
    let o = run(&["validate", &fixture("legal_careless.scm.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok: 3 exogenous, 6 endogenous, 1 contexts, 4 queries, normality typicality\n");
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = ["grade", "--mode", "extended", "--format", "json", &fixture("faulkner_chain.scm.txt")];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_verdict_keys_in_schema_order() {
    let o = run(&["check", "--format", "json", &fixture("forest_fire.scm.txt"), "L=1 for F=1 @ u11"]);
    let out = stdout(&o);
    let keys = [
        "\"query\"",
        "\"mode\"",
        "\"ac1\"",
        "\"is_cause\"",
        "\"witnesses\"",
        "\"best_witnesses\"",
        "\"ac3\"",
        "\"grading\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| out.find(k).unwrap_or_else(|| panic!("{k} missing"))).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{out}");
    for k in ["\"w_set\"", "\"w_values\"", "\"x_prime\"", "\"world\"", "\"admissible\"", "\"relation_to_actual\""] {
        assert!(out.contains(k), "{k} missing");
    }
}

const SUBCOMMANDS: [&str; 5] = ["solve", "satisfies", "check", "witnesses", "grade"];

fn has_queries(sub: &str, kinds: &[QueryKind]) -> bool {
    kinds.iter().any(|k| match sub {
        "solve" => matches!(k, QueryKind::Solve),
        "satisfies" => matches!(k, QueryKind::Satisfies(_)),
        "check" => matches!(k, QueryKind::Cause { .. } | QueryKind::Causes { .. }),
        "witnesses" => matches!(k, QueryKind::Witnesses { .. } | QueryKind::Cause { .. }),
        _ => matches!(k, QueryKind::Grade { .. }),
    })
}

/// Every fixture's own queries, through every subcommand and mode, match the
/// stored JSON. Set `GRADCAUSE_BLESS=1` to rewrite the stored files.
#[test]
fn fixture_goldens_and_timing() {
    let bless = std::env::var_os("GRADCAUSE_BLESS").is_some();
    let golden = root().join("fixtures/golden");
    let mut failures = Vec::new();
    let mut expected_files = Vec::new();
    for f in load_corpus() {
        let doc = f.parse().unwrap();
        let kinds: Vec<QueryKind> = doc.queries.iter().map(|q| q.kind.clone()).collect();
        let modes: &[&str] = if doc.order().is_some() { &["hp", "extended"] } else { &["hp"] };
        let start = Instant::now();
        for sub in SUBCOMMANDS {
            if !has_queries(sub, &kinds) {
                continue;
            }
            for mode in modes {
                let o = run(&[sub, "--mode", mode, "--format", "json", &fixture(f.file)]);
                assert_eq!(o.status.code(), Some(0), "{} {sub} {mode}", f.name);
                let file = format!("{}.{sub}.{mode}.json", f.name);
                let path = golden.join(&file);
                expected_files.push(file.clone());
                if bless {
                    std::fs::create_dir_all(&golden).unwrap();
                    std::fs::write(&path, &o.stdout).unwrap();
                } else {
                    match std::fs::read(&path) {
                        Ok(want) if want == o.stdout => {}
                        Ok(_) => failures.push(format!("{file}: output differs")),
                        Err(_) => failures.push(format!("{file}: missing")),
                    }
                }
            }
        }
        let elapsed = start.elapsed();
        let runs = SUBCOMMANDS.iter().filter(|s| has_queries(s, &kinds)).count() * modes.len();
        assert!(elapsed < Duration::from_secs(runs as u64), "{}: {runs} runs took {elapsed:?}", f.name);
    }
    let mut on_disk: Vec<String> =
        std::fs::read_dir(&golden).unwrap().filter_map(|e| e.ok()?.file_name().into_string().ok()).collect();
    on_disk.sort();
    expected_files.sort();
    assert_eq!(on_disk, expected_files, "stale or missing golden files");
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
