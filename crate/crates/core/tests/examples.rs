mod plan_tester {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/plan_tester.rs"));
}

#[test]
fn plan_tester_runs() {
    plan_tester::run_example().expect("plan_tester example should run");
}

mod bincert_vs_baseline {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bincert_vs_baseline.rs"));
}

#[test]
fn bincert_vs_baseline_runs() {
    bincert_vs_baseline::run_example().expect("bincert_vs_baseline example should run");
}

mod fixedcert_schedule {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fixedcert_schedule.rs"));
}

#[test]
fn fixedcert_schedule_runs() {
    fixedcert_schedule::run_example().expect("fixedcert_schedule example should run");
}

mod worst_case_budget {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/worst_case_budget.rs"));
}

#[test]
fn worst_case_budget_runs() {
    worst_case_budget::run_example().expect("worst_case_budget example should run");
}

mod density_certification {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/density_certification.rs"));
}

#[test]
fn density_certification_runs() {
    density_certification::run_example().expect("density_certification example should run");
}

mod hardness_search {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/hardness_search.rs"));
}

#[test]
fn hardness_search_runs() {
    hardness_search::run_example().expect("hardness_search example should run");
}

mod subprocess_oracle {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/subprocess_oracle.rs"));
}

#[test]
fn subprocess_oracle_runs() {
    subprocess_oracle::run_example().expect("subprocess_oracle example should run");
}

mod simulation_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/simulation_sweep.rs"));
}

#[test]
fn simulation_sweep_runs() {
    simulation_sweep::run_example().expect("simulation_sweep example should run");
}

mod model_json {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/model_json.rs"));
}

#[test]
fn model_json_runs() {
    model_json::run_example().expect("model_json example should run");
}

mod reproducible_report {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/reproducible_report.rs"));
}

#[test]
fn reproducible_report_runs() {
    reproducible_report::run_example().expect("reproducible_report example should run");
}
