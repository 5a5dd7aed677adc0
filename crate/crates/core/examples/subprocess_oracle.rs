// Certifying a model that lives in another process.
//
// The child reads one comma-separated sample per line and answers with one
// integer label per line. Here it is a shell loop labelling points by
// whether their first coordinate exceeds 0.58.

use std::sync::Arc;

use quantcert::oracle::subprocess_oracle;
use quantcert::robustness::{linf_sampler, Sampler};
use quantcert::{bincert, Execution, SeedSpec, ThresholdQuery};

const CHILD: &str = r#"while IFS=, read a rest; do
    awk -v a="$a" 'BEGIN { print (a > 0.58) ? 1 : 0 }'
done"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let command = vec!["sh".to_string(), "-c".to_string(), CHILD.to_string()];
    let query = ThresholdQuery::new(0.1, 0.1, 0.05)?;
    for eps in [0.05, 0.2] {
        let sampler: Arc<dyn Sampler> = Arc::new(linf_sampler(vec![0.5, 0.5], eps)?);
        let oracle = subprocess_oracle(&command, sampler, 0)?;
        let r = bincert(&query, &oracle, SeedSpec::new(5), &Execution::default())?;
        println!("eps {eps}: {:?} after {} labels", r.verdict, r.total_samples);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
