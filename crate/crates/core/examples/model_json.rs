// Loading a model document and running inference.

use quantcert::nn::{forward, load_model, predict};

const MODEL: &str = r#"{
  "input_dim": 2,
  "layers": [
    {"kind": "dense", "rows": 2, "cols": 2, "weights": [1.0, 2.0, 3.0, 4.0], "bias": [0.5, -0.5]},
    {"kind": "relu"},
    {"kind": "dense", "rows": 2, "cols": 2, "weights": [1.0, 0.0, -1.0, 2.0], "bias": [0.0, 0.0]}
  ]
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = load_model(MODEL.as_bytes())?;
    for x in [[0.5, 0.5], [1.0, 0.0], [0.0, 0.0]] {
        println!("{x:?} -> logits {:?}, label {}", forward(&model, &x)?, predict(&model, &x)?);
    }
    match load_model(br#"{"input_dim": 2, "layers": [{"kind": "dense", "rows": 2, "cols": 3, "weights": [1, 2, 3, 4, 5, 6], "bias": [0, 0]}]}"#) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
