//! Dense feed-forward inference in double precision.
//!
//! Model files are JSON:
//!
//! ```json
//! {"input_dim": 2,
//!  "layers": [{"kind": "dense", "rows": 2, "cols": 2,
//!              "weights": [1, 0, 0, 1], "bias": [0, 0]},
//!             {"kind": "relu"}]}
//! ```
//!
//! Dense weights are row-major with `rows` outputs and `cols` inputs.

use serde::{Deserialize, Serialize};

use crate::error::NnError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Layer {
    Dense {
        rows: usize,
        cols: usize,
        weights: Vec<f64>,
        bias: Vec<f64>,
    },
    Relu,
    Sigmoid,
    Tanh,
}

impl Layer {
    pub fn dense(rows: usize, cols: usize, weights: Vec<f64>, bias: Vec<f64>) -> Self {
        Layer::Dense {
            rows,
            cols,
            weights,
            bias,
        }
    }

    fn apply(&self, input: &[f64]) -> Vec<f64> {
        match self {
            Layer::Dense {
                rows,
                cols,
                weights,
                bias,
            } => (0..*rows)
                .map(|r| {
                    let row = &weights[r * cols..(r + 1) * cols];
                    row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + bias[r]
                })
                .collect(),
            Layer::Relu => input.iter().map(|&v| v.max(0.0)).collect(),
            Layer::Sigmoid => input.iter().map(|&v| 1.0 / (1.0 + (-v).exp())).collect(),
            Layer::Tanh => input.iter().map(|&v| v.tanh()).collect(),
        }
    }
}

/// Validated, immutable network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Model {
    input_dim: usize,
    layers: Vec<Layer>,
    #[serde(skip)]
    output_dim: usize,
}

#[derive(Deserialize)]
struct RawModel {
    input_dim: usize,
    layers: Vec<Layer>,
}

impl<'de> Deserialize<'de> for Model {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawModel::deserialize(deserializer)?;
        Model::new(raw.input_dim, raw.layers).map_err(serde::de::Error::custom)
    }
}

impl Model {
    pub fn new(input_dim: usize, layers: Vec<Layer>) -> Result<Self, NnError> {
        if input_dim == 0 {
            return Err(NnError::ShapeError("input_dim must be positive".into()));
        }
        let mut width = input_dim;
        for (idx, layer) in layers.iter().enumerate() {
            if let Layer::Dense {
                rows,
                cols,
                weights,
                bias,
            } = layer
            {
                if *cols != width {
                    return Err(NnError::ShapeError(format!(
                        "layer {idx} expects {cols} inputs but receives {width}"
                    )));
                }
                if weights.len() != rows * cols {
                    return Err(NnError::ShapeError(format!(
                        "layer {idx} has {} weights, expected {rows}x{cols}",
                        weights.len()
                    )));
                }
                if bias.len() != *rows {
                    return Err(NnError::ShapeError(format!(
                        "layer {idx} has {} biases, expected {rows}",
                        bias.len()
                    )));
                }
                if weights.iter().chain(bias).any(|v| !v.is_finite()) {
                    return Err(NnError::NonFiniteWeight { layer: idx });
                }
                width = *rows;
            }
        }
        if width < 2 {
            return Err(NnError::ShapeError(format!(
                "final output dimension is {width}, a classifier needs at least 2"
            )));
        }
        Ok(Self {
            input_dim,
            layers,
            output_dim: width,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialization is infallible")
    }
}

pub fn load_model(bytes: &[u8]) -> Result<Model, NnError> {
    let raw: RawModel =
        serde_json::from_slice(bytes).map_err(|e| NnError::ParseError(e.to_string()))?;
    Model::new(raw.input_dim, raw.layers)
}

pub fn forward(model: &Model, x: &[f64]) -> Result<Vec<f64>, NnError> {
    if x.len() != model.input_dim {
        return Err(NnError::DimensionMismatch {
            expected: model.input_dim,
            found: x.len(),
        });
    }
    let mut activ = x.to_vec();
    for layer in &model.layers {
        activ = layer.apply(&activ);
    }
    Ok(activ)
}

/// Index of the largest logit, lowest index on ties.
pub fn argmax(logits: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in logits.iter().enumerate().skip(1) {
        if v > logits[best] {
            best = i;
        }
    }
    best
}

pub fn predict(model: &Model, x: &[f64]) -> Result<usize, NnError> {
    forward(model, x).map(|logits| argmax(&logits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_relu() -> Model {
        Model::new(
            2,
            vec![
                Layer::dense(2, 2, vec![1.0, 0.0, 0.0, 1.0], vec![0.0, 0.0]),
                Layer::Relu,
            ],
        )
        .unwrap()
    }

    #[test]
    fn loads_identity_document() {
        let doc = br#"{"input_dim":2,"layers":[
            {"kind":"dense","rows":2,"cols":2,"weights":[1,0,0,1],"bias":[0,0]},
            {"kind":"relu"}]}"#;
        let m = load_model(doc).unwrap();
        assert_eq!(m.layers().len(), 2);
        assert_eq!(m, identity_relu());
    }

    #[test]
    fn load_errors() {
        let bad_len = br#"{"input_dim":2,"layers":[
            {"kind":"dense","rows":2,"cols":2,"weights":[1,0,0],"bias":[0,0]}]}"#;
        assert!(matches!(load_model(bad_len), Err(NnError::ShapeError(_))));

        let bad_chain = br#"{"input_dim":3,"layers":[
            {"kind":"dense","rows":2,"cols":2,"weights":[1,0,0,1],"bias":[0,0]}]}"#;
        assert!(matches!(load_model(bad_chain), Err(NnError::ShapeError(_))));

        let one_output = br#"{"input_dim":2,"layers":[
            {"kind":"dense","rows":1,"cols":2,"weights":[1,0],"bias":[0]}]}"#;
        assert!(matches!(load_model(one_output), Err(NnError::ShapeError(_))));

        assert!(matches!(load_model(b"{not json"), Err(NnError::ParseError(_))));
        assert!(matches!(
            load_model(br#"{"input_dim":2,"layers":[{"kind":"softmax"}]}"#),
            Err(NnError::ParseError(_))
        ));
    }

    #[test]
    fn nan_weight_is_rejected() {
        let err = Model::new(
            2,
            vec![Layer::dense(2, 2, vec![1.0, f64::NAN, 0.0, 1.0], vec![0.0, 0.0])],
        )
        .unwrap_err();
        assert_eq!(err, NnError::NonFiniteWeight { layer: 0 });
        // JSON has no NaN literal; an overflowing literal is the closest a
        // document can get and must not slip through either.
        let doc = br#"{"input_dim":2,"layers":[
            {"kind":"dense","rows":2,"cols":2,"weights":[1,1e999,0,1],"bias":[0,0]}]}"#;
        assert!(load_model(doc).is_err());
    }

    #[test]
    fn forward_hand_computations() {
        assert_eq!(forward(&identity_relu(), &[1.0, -1.0]).unwrap(), vec![1.0, 0.0]);

        let m = Model::new(
            2,
            vec![Layer::dense(2, 2, vec![1.0, 2.0, 3.0, 4.0], vec![0.5, -0.5])],
        )
        .unwrap();
        assert_eq!(forward(&m, &[1.0, 1.0]).unwrap(), vec![3.5, 6.5]);

        let s = Model::new(2, vec![Layer::Sigmoid]).unwrap();
        assert_eq!(forward(&s, &[0.0, 0.0]).unwrap(), vec![0.5, 0.5]);

        let t = Model::new(2, vec![Layer::Tanh]).unwrap();
        assert_eq!(forward(&t, &[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);

        assert_eq!(
            forward(&m, &[1.0]).unwrap_err(),
            NnError::DimensionMismatch { expected: 2, found: 1 }
        );
    }

    #[test]
    fn argmax_ties_go_low() {
        assert_eq!(argmax(&[0.2, 0.9]), 1);
        assert_eq!(argmax(&[0.5, 0.5]), 0);
        assert_eq!(argmax(&[1.0, 2.0, 3.0]), 2);
    }

    proptest::proptest! {
        #[test]
        fn bias_shift_keeps_prediction(
            w in proptest::collection::vec(-2.0f64..2.0, 6),
            b in proptest::collection::vec(-1.0f64..1.0, 3),
            x in proptest::collection::vec(0.0f64..1.0, 2),
            shift in -10.0f64..10.0,
        ) {
            let base = Model::new(2, vec![Layer::dense(3, 2, w.clone(), b.clone())]).unwrap();
            let shifted_bias: Vec<f64> = b.iter().map(|v| v + shift).collect();
            let shifted = Model::new(2, vec![Layer::dense(3, 2, w, shifted_bias)]).unwrap();
            let logits = forward(&base, &x).unwrap();
            let mut sorted = logits.clone();
            sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
            // skip near-ties where the shift's rounding could flip the order
            proptest::prop_assume!(sorted[0] - sorted[1] > 1e-9);
            proptest::prop_assert_eq!(predict(&base, &x).unwrap(), predict(&shifted, &x).unwrap());
        }

        #[test]
        fn json_round_trip(
            w in proptest::collection::vec(-5.0f64..5.0, 4),
            b in proptest::collection::vec(-5.0f64..5.0, 2),
        ) {
            let m = Model::new(2, vec![Layer::dense(2, 2, w, b), Layer::Tanh, Layer::Relu]).unwrap();
            let back = load_model(m.to_json().as_bytes()).unwrap();
            proptest::prop_assert_eq!(m, back);
        }
    }
}
