use serde::{Deserialize, Serialize};

use super::BarronError;

/// Activation function `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    #[default]
    Relu,
    /// `tanh`, the default sigmoidal choice.
    #[serde(alias = "sigmoidal")]
    Tanh,
    /// `1/(1+e^{-z})`.
    Logistic,
    /// `ln(1+e^z)`: unbounded and Lipschitz but not homogeneous.
    Softplus,
}

impl std::str::FromStr for Activation {
    type Err = BarronError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "relu" => Ok(Activation::Relu),
            "tanh" | "sigmoidal" => Ok(Activation::Tanh),
            "logistic" => Ok(Activation::Logistic),
            "softplus" => Ok(Activation::Softplus),
            other => Err(BarronError::InvalidParameter(format!("unknown activation {other:?}"))),
        }
    }
}

impl Activation {
    #[inline]
    pub fn eval(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Tanh => z.tanh(),
            Activation::Logistic => 1.0 / (1.0 + (-z).exp()),
            Activation::Softplus => {
                if z > 30.0 {
                    z + (-z).exp().ln_1p()
                } else {
                    z.exp().ln_1p()
                }
            }
        }
    }

    /// `σ'(z)`, with `σ'(0) = 0` for ReLU.
    #[inline]
    pub fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => {
                let t = z.tanh();
                1.0 - t * t
            }
            Activation::Logistic => {
                let s = 1.0 / (1.0 + (-z).exp());
                s * (1.0 - s)
            }
            Activation::Softplus => 1.0 / (1.0 + (-z).exp()),
        }
    }

    /// Lipschitz constant `L`.
    pub fn lipschitz(self) -> f64 {
        match self {
            Activation::Relu | Activation::Tanh | Activation::Softplus => 1.0,
            Activation::Logistic => 0.25,
        }
    }

    pub fn is_sigmoidal(self) -> bool {
        matches!(self, Activation::Tanh | Activation::Logistic)
    }

    /// Per-neuron weight in the norm: `|w|_q + |b|` (ReLU), `|w|_q + 1`
    /// (sigmoidal), `|w|_q + |b| + 1` (softplus).
    #[inline]
    pub fn neuron_weight(self, w_norm: f64, b: f64) -> f64 {
        match self {
            Activation::Relu => w_norm + b.abs(),
            Activation::Tanh | Activation::Logistic => w_norm + 1.0,
            Activation::Softplus => w_norm + b.abs() + 1.0,
        }
    }
}

/// Exponent `q` of the inner-weight norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PathNormOrder {
    #[default]
    L1,
    L2,
}

impl PathNormOrder {
    pub fn norm(self, w: &[f64]) -> f64 {
        match self {
            PathNormOrder::L1 => w.iter().map(|x| x.abs()).sum(),
            PathNormOrder::L2 => w.iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neuron {
    pub a: f64,
    pub w: Vec<f64>,
    pub b: f64,
}

impl Neuron {
    pub fn new(a: f64, w: Vec<f64>, b: f64) -> Self {
        Neuron { a, w, b }
    }

    #[inline]
    pub fn preactivation(&self, x: &[f64]) -> f64 {
        self.w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + self.b
    }
}

/// A finite two-layer network.
///
/// JSON form: `{"activation": "relu", "averaged": true, "neurons": [[a, [w..], b], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "NetworkFile", into = "NetworkFile")]
pub struct TwoLayerNetwork {
    pub activation: Activation,
    pub averaged: bool,
    pub neurons: Vec<Neuron>,
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    activation: Activation,
    #[serde(default)]
    averaged: bool,
    neurons: Vec<(f64, Vec<f64>, f64)>,
}

impl From<NetworkFile> for TwoLayerNetwork {
    fn from(f: NetworkFile) -> Self {
        TwoLayerNetwork {
            activation: f.activation,
            averaged: f.averaged,
            neurons: f.neurons.into_iter().map(|(a, w, b)| Neuron { a, w, b }).collect(),
        }
    }
}

impl From<TwoLayerNetwork> for NetworkFile {
    fn from(n: TwoLayerNetwork) -> Self {
        NetworkFile {
            activation: n.activation,
            averaged: n.averaged,
            neurons: n.neurons.into_iter().map(|u| (u.a, u.w, u.b)).collect(),
        }
    }
}

impl TwoLayerNetwork {
    pub fn new(activation: Activation, averaged: bool, neurons: Vec<Neuron>) -> Result<Self, BarronError> {
        let net = TwoLayerNetwork { activation, averaged, neurons };
        net.validate()?;
        Ok(net)
    }

    /// The network with no neurons, i.e. the zero function.
    pub fn zero(activation: Activation) -> Self {
        TwoLayerNetwork { activation, averaged: false, neurons: Vec::new() }
    }

    pub fn validate(&self) -> Result<(), BarronError> {
        if let Some(first) = self.neurons.first() {
            let expected = first.w.len();
            for (index, n) in self.neurons.iter().enumerate() {
                if n.w.len() != expected {
                    return Err(BarronError::DimensionMismatch { index, expected, found: n.w.len() });
                }
                if !(n.a.is_finite() && n.b.is_finite() && n.w.iter().all(|x| x.is_finite())) {
                    return Err(BarronError::NonFinite { context: format!("neuron {index}") });
                }
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self, BarronError> {
        let net: TwoLayerNetwork =
            serde_json::from_str(s).map_err(|e| BarronError::InvalidParameter(format!("network json: {e}")))?;
        net.validate()?;
        Ok(net)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("network serialization cannot fail")
    }

    pub fn width(&self) -> usize {
        self.neurons.len()
    }

    /// Input dimension, if there is at least one neuron.
    pub fn dim(&self) -> Option<usize> {
        self.neurons.first().map(|n| n.w.len())
    }

    /// `1/m` when averaged, else 1.
    pub fn scale(&self) -> f64 {
        if self.averaged && !self.neurons.is_empty() {
            1.0 / self.neurons.len() as f64
        } else {
            1.0
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let s: f64 = self.neurons.iter().map(|n| n.a * self.activation.eval(n.preactivation(x))).sum();
        s * self.scale()
    }

    pub fn path_norm(&self, q: PathNormOrder) -> f64 {
        path_norm(self, q)
    }

    /// Multiply every outer weight by `lambda`.
    pub fn scale_outer(&mut self, lambda: f64) {
        self.neurons.iter_mut().for_each(|n| n.a *= lambda);
    }

    /// Sum of two networks as one neuron list (weights adjusted for averaging).
    pub fn concat(&self, other: &TwoLayerNetwork) -> Result<TwoLayerNetwork, BarronError> {
        if self.activation != other.activation || self.averaged != other.averaged {
            return Err(BarronError::InvalidParameter("concatenation needs matching activation and averaging".into()));
        }
        let total = (self.width() + other.width()) as f64;
        let factor = |net: &TwoLayerNetwork| {
            if net.averaged && net.width() > 0 {
                total / net.width() as f64
            } else {
                1.0
            }
        };
        let (fa, fb) = (factor(self), factor(other));
        let neurons = self
            .neurons
            .iter()
            .map(|n| Neuron { a: n.a * fa, ..n.clone() })
            .chain(other.neurons.iter().map(|n| Neuron { a: n.a * fb, ..n.clone() }))
            .collect();
        TwoLayerNetwork::new(self.activation, self.averaged, neurons)
    }
}

/// `(1/m) Σ |a_i| (|w_i|_q + |b_i|)` for ReLU; see [`Activation::neuron_weight`]
/// for the other activations. Zero for the empty network.
pub fn path_norm(net: &TwoLayerNetwork, q: PathNormOrder) -> f64 {
    let s: f64 = net
        .neurons
        .iter()
        .map(|n| n.a.abs() * net.activation.neuron_weight(q.norm(&n.w), n.b))
        .sum();
    s * net.scale()
}
