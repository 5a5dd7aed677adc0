// A CLI run with its embedded config, replayed to the same bytes.

use quantcert::cli::run_cli_with_io;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let report = dir.path().join("report.json");
    let report = report.to_str().ok_or("non-utf8 temp path")?;

    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli_with_io(
        [
            "quantcert", "certify", "--theta", "0.1", "--eta", "0.05", "--delta", "0.05",
            "--bernoulli", "0.3", "--seed", "2024", "--no-timing", "--out", report,
        ],
        &mut out,
        &mut err,
    );
    println!("certify exited {code}");
    let first = std::fs::read(report)?;

    let code = run_cli_with_io(["quantcert", "replay", report, "--verify"], &mut out, &mut err);
    println!("replay --verify exited {code}, identical bytes: {}", out == first);
    println!("{}", String::from_utf8(first)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
