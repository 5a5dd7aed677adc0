use std::sync::Arc;

use quantcert::oracle::{subprocess_oracle, Oracle};
use quantcert::robustness::{linf_sampler, Sampler};
use quantcert::tester::Execution;
use quantcert::{bincert, Error, OracleErrorKind, SeedSpec, ThresholdQuery, Verdict};

fn sampler() -> Arc<dyn Sampler> {
    Arc::new(linf_sampler(vec![0.5, 0.5], 0.1).unwrap())
}

fn sh(script: &str) -> Vec<String> {
    vec!["sh".into(), "-c".into(), script.into()]
}

const ECHO_ZERO: &str = "while read line; do echo 0; done";

#[test]
fn constant_label_child_has_zero_rate() {
    let oracle = subprocess_oracle(&sh(ECHO_ZERO), sampler(), 0).unwrap();
    let t = oracle.draw(0, 0..300, SeedSpec::new(1)).unwrap();
    assert_eq!((t.trials(), t.successes()), (300, 0));
    assert!(!oracle.supports_concurrent_draws());
}

#[test]
fn alternating_labels_count_half() {
    let script = "i=0; while read line; do echo $((i % 2)); i=$((i + 1)); done";
    let oracle = subprocess_oracle(&sh(script), sampler(), 0).unwrap();
    let t = oracle.draw(0, 0..10, SeedSpec::new(1)).unwrap();
    assert_eq!(t.successes(), 5);
    // the child's counter carries over between draws: lines 10..15
    let t = oracle.draw(1, 0..5, SeedSpec::new(1)).unwrap();
    assert_eq!(t.successes(), 2);
}

#[test]
fn child_receives_csv_samples_in_support() {
    // label 1 iff the line has exactly two fields inside [0.4, 0.6]
    let script = r#"while IFS=, read a b; do
        if [ -n "$b" ] && awk -v a="$a" -v b="$b" 'BEGIN { exit !(a >= 0.4 && a <= 0.6 && b >= 0.4 && b <= 0.6) }'; then echo 1; else echo 0; fi
    done"#;
    let oracle = subprocess_oracle(&sh(script), sampler(), 0).unwrap();
    let t = oracle.draw(0, 0..40, SeedSpec::new(2)).unwrap();
    assert_eq!(t.successes(), 40);
}

#[test]
fn child_exit_mid_batch_reports_partial_tally() {
    let script = "i=0; while read line; do i=$((i + 1)); [ $i -gt 3 ] && exit 3; echo 1; done";
    let oracle = subprocess_oracle(&sh(script), sampler(), 0).unwrap();
    let err = oracle.draw(0, 0..10, SeedSpec::new(1)).unwrap_err();
    assert!(matches!(err.kind, OracleErrorKind::ChildExit(_)), "{err}");
    assert_eq!((err.partial.trials(), err.partial.successes()), (3, 3));
    // later draws fail fast
    let again = oracle.draw(1, 0..1, SeedSpec::new(1)).unwrap_err();
    assert!(matches!(again.kind, OracleErrorKind::ChildExit(_)));
}

#[test]
fn garbage_label_is_protocol_violation() {
    let oracle = subprocess_oracle(&sh("while read line; do echo banana; done"), sampler(), 0).unwrap();
    let err = oracle.draw(0, 0..4, SeedSpec::new(1)).unwrap_err();
    assert!(matches!(err.kind, OracleErrorKind::ProtocolViolation(_)));
    assert_eq!(err.partial.trials(), 0);
}

#[test]
fn missing_program_is_spawn_failure() {
    let cmd = vec!["/nonexistent/quantcert-oracle".to_string()];
    match subprocess_oracle(&cmd, sampler(), 0) {
        Err(Error::Oracle(e)) => assert!(matches!(e.kind, OracleErrorKind::SpawnFailure(_))),
        Err(other) => panic!("unexpected error {other}"),
        Ok(_) => panic!("spawned a missing program"),
    }
    assert!(matches!(subprocess_oracle(&[], sampler(), 0), Err(Error::InvalidArgument(_))));
}

#[test]
fn bincert_over_subprocess() {
    let q = ThresholdQuery::new(0.1, 0.05, 0.05).unwrap();
    let oracle = subprocess_oracle(&sh(ECHO_ZERO), sampler(), 0).unwrap();
    let r = bincert(&q, &oracle, SeedSpec::new(3), &Execution::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Yes);
    r.check_invariants().unwrap();

    let oracle = subprocess_oracle(&sh(ECHO_ZERO), sampler(), 7).unwrap();
    let r = bincert(&q, &oracle, SeedSpec::new(3), &Execution::default().with_threads(4).unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::No);
}

#[test]
fn oracle_failure_propagates_from_strategy() {
    let q = ThresholdQuery::new(0.1, 0.05, 0.05).unwrap();
    let script = "i=0; while read line; do i=$((i + 1)); [ $i -gt 50 ] && exit 1; echo 0; done";
    let oracle = subprocess_oracle(&sh(script), sampler(), 0).unwrap();
    match bincert(&q, &oracle, SeedSpec::new(3), &Execution::default()) {
        Err(Error::Oracle(e)) => {
            assert!(matches!(e.kind, OracleErrorKind::ChildExit(_)));
            assert!(e.partial.trials() <= 50);
        }
        other => panic!("expected an oracle error, got {other:?}"),
    }
}
