//! Bit-parallel circuit simulation and label propagation over trial batches.
//!
//! A [`TrialBatch`] packs up to 64 independent trials into each machine
//! word, one value plane and one label plane per net. Bit `i` of a plane
//! word always refers to the same trial across every net. All randomness is
//! counter-based (see [`rng`]), so results are a pure function of
//! `(circuit, technique, protocol, trials, seed)` regardless of batch
//! width, evaluation order, or worker count.

pub mod rng;

use crate::netlist::{binarize, Circuit, Driver, NetId};
use crate::rules::{self, Technique};

use serde::Serialize;
use thiserror::Error;

/// How primary inputs are labeled and how per-trial outcomes are scored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabelProtocol {
    /// Portion of primary inputs labeled per trial, in `[0, 1]`.
    pub fraction: f64,
    pub selection: Selection,
    pub metric: Metric,
}

impl Default for LabelProtocol {
    fn default() -> Self {
        LabelProtocol {
            fraction: 0.25,
            selection: Selection::ExactCount,
            metric: Metric::AnyOutputLabeled,
        }
    }
}

impl LabelProtocol {
    pub fn with_fraction(fraction: f64) -> Self {
        LabelProtocol {
            fraction,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// Exactly `round(fraction * |PI|)` inputs per trial (round half away
    /// from zero), chosen uniformly without replacement.
    ExactCount,
    /// Each input labeled independently with probability `fraction`.
    IndependentBernoulli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// 1.0 when any primary output carries a label, else 0.0.
    AnyOutputLabeled,
    /// Fraction of primary outputs carrying a label.
    LabeledOutputFraction,
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("label fraction {0} is outside [0, 1]")]
    FractionOutOfRange(f64),
    #[error("circuit has no primary inputs")]
    NoPrimaryInputs,
    #[error("trial count must be at least 1")]
    ZeroTrials,
    #[error("gate driving `{net}` has {fanins} fanins; label propagation needs a binarized circuit")]
    NonBinaryGate { net: String, fanins: usize },
    #[error("batch was built for a different circuit ({batch_nets} nets vs {circuit_nets})")]
    ShapeMismatch {
        batch_nets: usize,
        circuit_nets: usize,
    },
}

/// Bit-packed planes for a batch of independent trials.
#[derive(Debug, Clone)]
pub struct TrialBatch {
    trial_count: usize,
    /// Trials packed per word, 1..=64. Smaller widths waste bits but must
    /// produce identical per-trial results; tests rely on that.
    width: u32,
    words_per_net: usize,
    net_count: usize,
    seed: u64,
    values: Vec<u64>,
    labels: Vec<u64>,
}

impl TrialBatch {
    /// An all-zero batch: every input value 0, no labels injected.
    pub fn new_zeroed(c: &Circuit, trial_count: usize, width: u32) -> Result<Self, SimError> {
        if trial_count == 0 {
            return Err(SimError::ZeroTrials);
        }
        let width = width.clamp(1, 64);
        let words_per_net = trial_count.div_ceil(width as usize);
        let net_count = c.num_nets();
        Ok(TrialBatch {
            trial_count,
            width,
            words_per_net,
            net_count,
            seed: 0,
            values: vec![0; net_count * words_per_net],
            labels: vec![0; net_count * words_per_net],
        })
    }

    /// A batch with primary-input value and label planes drawn from the
    /// documented counter streams for `seed`.
    pub fn from_seed(
        c: &Circuit,
        trial_count: usize,
        seed: u64,
        protocol: &LabelProtocol,
    ) -> Result<Self, SimError> {
        Self::from_seed_with_width(c, trial_count, seed, protocol, 64)
    }

    pub fn from_seed_with_width(
        c: &Circuit,
        trial_count: usize,
        seed: u64,
        protocol: &LabelProtocol,
        width: u32,
    ) -> Result<Self, SimError> {
        if !(0.0..=1.0).contains(&protocol.fraction) || protocol.fraction.is_nan() {
            return Err(SimError::FractionOutOfRange(protocol.fraction));
        }
        if c.inputs().is_empty() {
            return Err(SimError::NoPrimaryInputs);
        }
        let mut batch = Self::new_zeroed(c, trial_count, width)?;
        batch.seed = seed;
        let value_root = rng::child(seed, rng::DOMAIN_VALUES);
        let label_root = rng::child(seed, rng::DOMAIN_LABELS);
        let n_pi = c.inputs().len();
        let mut keyed: Vec<(u64, usize)> = Vec::with_capacity(n_pi);
        for t in 0..trial_count {
            let value_stream = rng::child(value_root, t as u64);
            let label_stream = rng::child(label_root, t as u64);
            for (p, &pi) in c.inputs().iter().enumerate() {
                if rng::child(value_stream, p as u64) & 1 == 1 {
                    batch.set_value_bit(pi, t, true);
                }
            }
            match protocol.selection {
                Selection::ExactCount => {
                    let k = exact_label_count(protocol.fraction, n_pi);
                    keyed.clear();
                    keyed.extend(
                        (0..n_pi).map(|p| (rng::child(label_stream, p as u64), p)),
                    );
                    keyed.sort_unstable();
                    for &(_, p) in keyed.iter().take(k) {
                        batch.set_label_bit(c.inputs()[p], t, true);
                    }
                }
                Selection::IndependentBernoulli => {
                    let threshold = bernoulli_threshold(protocol.fraction);
                    for (p, &pi) in c.inputs().iter().enumerate() {
                        let draw = rng::child(label_stream, p as u64) as u128;
                        if draw < threshold {
                            batch.set_label_bit(pi, t, true);
                        }
                    }
                }
            }
        }
        Ok(batch)
    }

    pub fn trial_count(&self) -> usize {
        self.trial_count
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    fn slot(&self, net: NetId, trial: usize) -> (usize, u32) {
        debug_assert!(trial < self.trial_count);
        let word = trial / self.width as usize;
        let bit = (trial % self.width as usize) as u32;
        (net.index() * self.words_per_net + word, bit)
    }

    pub fn value_bit(&self, net: NetId, trial: usize) -> bool {
        let (idx, bit) = self.slot(net, trial);
        self.values[idx] >> bit & 1 == 1
    }

    pub fn label_bit(&self, net: NetId, trial: usize) -> bool {
        let (idx, bit) = self.slot(net, trial);
        self.labels[idx] >> bit & 1 == 1
    }

    pub fn set_value_bit(&mut self, net: NetId, trial: usize, v: bool) {
        let (idx, bit) = self.slot(net, trial);
        if v {
            self.values[idx] |= 1 << bit;
        } else {
            self.values[idx] &= !(1 << bit);
        }
    }

    pub fn set_label_bit(&mut self, net: NetId, trial: usize, v: bool) {
        let (idx, bit) = self.slot(net, trial);
        if v {
            self.labels[idx] |= 1 << bit;
        } else {
            self.labels[idx] &= !(1 << bit);
        }
    }

    pub fn value_plane(&self, net: NetId) -> &[u64] {
        let start = net.index() * self.words_per_net;
        &self.values[start..start + self.words_per_net]
    }

    pub fn label_plane(&self, net: NetId) -> &[u64] {
        let start = net.index() * self.words_per_net;
        &self.labels[start..start + self.words_per_net]
    }

    fn check_shape(&self, c: &Circuit) -> Result<(), SimError> {
        if self.net_count != c.num_nets() {
            return Err(SimError::ShapeMismatch {
                batch_nets: self.net_count,
                circuit_nets: c.num_nets(),
            });
        }
        Ok(())
    }
}

/// Number of labeled inputs under [`Selection::ExactCount`].
pub fn exact_label_count(fraction: f64, n_inputs: usize) -> usize {
    ((fraction * n_inputs as f64).round() as usize).min(n_inputs)
}

/// `draw < threshold` over the full u64 grid realizes probability
/// `fraction`; u128 keeps `fraction = 1.0` exact.
fn bernoulli_threshold(fraction: f64) -> u128 {
    (fraction * 2.0f64.powi(64)) as u128
}

/// Fills the value plane of every net by evaluating gates in topological
/// order. Supports n-ary gates.
pub fn simulate_values(c: &Circuit, batch: &mut TrialBatch) -> Result<(), SimError> {
    batch.check_shape(c)?;
    let wpn = batch.words_per_net;
    for &gi in c.topo() {
        let gate = &c.gates()[gi as usize];
        let out = gate.fanout.index() * wpn;
        match gate.fanin.len() {
            1 => {
                let a = gate.fanin[0].index() * wpn;
                for w in 0..wpn {
                    let va = batch.values[a + w];
                    batch.values[out + w] = rules::eval2_word(gate.kind, va, 0);
                }
            }
            2 => {
                let a = gate.fanin[0].index() * wpn;
                let b = gate.fanin[1].index() * wpn;
                for w in 0..wpn {
                    let va = batch.values[a + w];
                    let vb = batch.values[b + w];
                    batch.values[out + w] = rules::eval2_word(gate.kind, va, vb);
                }
            }
            _ => {
                let base = gate.kind.base();
                for w in 0..wpn {
                    let mut acc = batch.values[gate.fanin[0].index() * wpn + w];
                    for f in &gate.fanin[1..] {
                        acc = rules::eval2_word(base, acc, batch.values[f.index() * wpn + w]);
                    }
                    if gate.kind.is_complemented() {
                        acc = !acc;
                    }
                    batch.values[out + w] = acc;
                }
            }
        }
    }
    Ok(())
}

/// Fills the label plane of every net by applying the technique's gate
/// rules in topological order. Requires a binarized circuit and an
/// already-simulated value plane (level ≥ 1 rules read values).
pub fn propagate_labels(
    c: &Circuit,
    batch: &mut TrialBatch,
    tech: Technique,
) -> Result<(), SimError> {
    batch.check_shape(c)?;
    let precision = tech.precision();
    let wpn = batch.words_per_net;
    for &gi in c.topo() {
        let gate = &c.gates()[gi as usize];
        let expected = if gate.kind.is_unary() { 1 } else { 2 };
        if gate.fanin.len() != expected {
            return Err(SimError::NonBinaryGate {
                net: c.net(gate.fanout).name.clone(),
                fanins: gate.fanin.len(),
            });
        }
        let out = gate.fanout.index() * wpn;
        let a = gate.fanin[0].index() * wpn;
        let b = gate.fanin.get(1).map_or(a, |f| f.index() * wpn);
        for w in 0..wpn {
            let va = batch.values[a + w];
            let vb = batch.values[b + w];
            let la = batch.labels[a + w];
            let lb = batch.labels[b + w];
            batch.labels[out + w] = if gate.kind.is_unary() {
                rules::label_rule_word(gate.kind, precision, va, 0, la, 0)
            } else {
                rules::label_rule_word(gate.kind, precision, va, vb, la, lb)
            };
        }
    }
    Ok(())
}

/// Per-trial metric values for a propagated batch.
pub fn extract_metrics(c: &Circuit, batch: &TrialBatch, metric: Metric) -> Vec<f64> {
    let n_out = c.outputs().len();
    (0..batch.trial_count)
        .map(|t| {
            let labeled = c
                .outputs()
                .iter()
                .filter(|&&o| batch.label_bit(o, t))
                .count();
            match metric {
                Metric::AnyOutputLabeled => (labeled > 0) as u8 as f64,
                Metric::LabeledOutputFraction => {
                    if n_out == 0 {
                        0.0
                    } else {
                        labeled as f64 / n_out as f64
                    }
                }
            }
        })
        .collect()
}

/// Runs `trials` random trials and returns the metric value of each.
///
/// The circuit is binarized internally when needed (primary outputs are
/// preserved, so metrics are unaffected). Deterministic for fixed
/// `(circuit, technique, protocol, trials, seed)`.
pub fn run_trials(
    c: &Circuit,
    tech: Technique,
    protocol: &LabelProtocol,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>, SimError> {
    let owned;
    let sim = if c.is_binary() {
        c
    } else {
        owned = binarize(c);
        &owned
    };
    let mut batch = TrialBatch::from_seed(sim, trials, seed, protocol)?;
    simulate_values(sim, &mut batch)?;
    propagate_labels(sim, &mut batch, tech)?;
    Ok(extract_metrics(sim, &batch, protocol.metric))
}

/// Per-trial primary-input values, identical to what [`TrialBatch::from_seed`]
/// injects. Exposed so definitional oracles can pair with simulator trials.
pub fn trial_input_values(c: &Circuit, seed: u64, trial: usize) -> Vec<bool> {
    let stream = rng::child(rng::child(seed, rng::DOMAIN_VALUES), trial as u64);
    (0..c.inputs().len())
        .map(|p| rng::child(stream, p as u64) & 1 == 1)
        .collect()
}

/// Per-trial labeled-input mask, identical to what [`TrialBatch::from_seed`]
/// injects.
pub fn trial_input_labels(
    c: &Circuit,
    seed: u64,
    trial: usize,
    protocol: &LabelProtocol,
) -> Vec<bool> {
    let stream = rng::child(rng::child(seed, rng::DOMAIN_LABELS), trial as u64);
    let n_pi = c.inputs().len();
    let mut mask = vec![false; n_pi];
    match protocol.selection {
        Selection::ExactCount => {
            let k = exact_label_count(protocol.fraction, n_pi);
            let mut keyed: Vec<(u64, usize)> =
                (0..n_pi).map(|p| (rng::child(stream, p as u64), p)).collect();
            keyed.sort_unstable();
            for &(_, p) in keyed.iter().take(k) {
                mask[p] = true;
            }
        }
        Selection::IndependentBernoulli => {
            let threshold = bernoulli_threshold(protocol.fraction);
            for (p, slot) in mask.iter_mut().enumerate() {
                *slot = (rng::child(stream, p as u64) as u128) < threshold;
            }
        }
    }
    mask
}

/// Dumps value and label planes as CSV (net name, trial, value, label) for
/// debugging small batches.
pub fn planes_to_csv(c: &Circuit, batch: &TrialBatch) -> String {
    let mut out = String::from("net,trial,value,label\n");
    for (i, net) in c.nets().iter().enumerate() {
        let id = NetId(i as u32);
        for t in 0..batch.trial_count() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                net.name,
                t,
                batch.value_bit(id, t) as u8,
                batch.label_bit(id, t) as u8
            ));
        }
    }
    out
}

/// True when `net` is a primary input of `c` (convenience for callers
/// walking planes).
pub fn is_primary_input(c: &Circuit, net: NetId) -> bool {
    matches!(c.net(net).driver, Driver::Input(_))
}
