//! Definitional reference analyses used to validate the constructive rules
//! and to measure their false positives.
//!
//! Three ground truths, one per label interpretation:
//!
//! - flow (taint): an output is labeled iff *some* assignment to the
//!   labeled inputs, with the others held fixed, changes that output —
//!   checked by enumerating all `2^k` assignments;
//! - non-determinism (X): an output is labeled iff two assignments to the
//!   unknown inputs disagree on it, which is equivalent to the flow check
//!   because the given assignment is itself enumerated (a single-toggle
//!   variant is provided for comparison);
//! - fault: an output is labeled iff flipping *all* faulty inputs
//!   simultaneously changes it — a single differential evaluation.
//!
//! Everything here evaluates circuits one scalar assignment at a time with
//! its own gate semantics, independent of the bit-parallel engine and of
//! the rule library it is used to check.

use crate::netlist::{Circuit, GateKind, NetId};
use crate::rules::Technique;
use crate::simulate::{trial_input_labels, trial_input_values, LabelProtocol};

use serde::Serialize;
use thiserror::Error;

/// Enumeration limits for the flow/X oracles.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OracleBudget {
    /// Maximum number of labeled inputs to enumerate over.
    pub max_enumeration_bits: u32,
    /// Maximum number of circuit evaluations per query.
    pub max_vectors: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_enumeration_bits: 20,
            max_vectors: 1 << 20,
        }
    }
}

impl OracleBudget {
    pub fn with_bits(bits: u32) -> Self {
        OracleBudget {
            max_enumeration_bits: bits,
            max_vectors: 1u64 << bits.min(63),
        }
    }

    fn allows(&self, labeled_bits: u32) -> bool {
        labeled_bits <= self.max_enumeration_bits
            && (labeled_bits >= 64 || (1u64 << labeled_bits) <= self.max_vectors)
    }
}

/// Exceeding the budget is a distinct outcome, not a failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    /// Per-primary-output label bits.
    Exact(Vec<bool>),
    /// The query needed more enumeration than the budget allows.
    OverBudget { labeled_bits: u32 },
}

impl OracleOutcome {
    pub fn exact(self) -> Option<Vec<bool>> {
        match self {
            OracleOutcome::Exact(bits) => Some(bits),
            OracleOutcome::OverBudget { .. } => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("expected {expected} primary input values, got {got}")]
    InputLength { expected: usize, got: usize },
}

/// Evaluates every net for one primary-input assignment.
///
/// This is the crate's scalar reference evaluator; it shares no code with
/// the word-level rule library.
pub fn eval_assignment(c: &Circuit, pi_values: &[bool]) -> Vec<bool> {
    assert_eq!(
        pi_values.len(),
        c.inputs().len(),
        "one value per primary input"
    );
    let mut values = vec![false; c.num_nets()];
    for (p, &pi) in c.inputs().iter().enumerate() {
        values[pi.index()] = pi_values[p];
    }
    for &gi in c.topo() {
        let gate = &c.gates()[gi as usize];
        let v = scalar_gate(gate.kind, &gate.fanin, &values);
        values[gate.fanout.index()] = v;
    }
    values
}

fn scalar_gate(kind: GateKind, fanin: &[NetId], values: &[bool]) -> bool {
    let read = |id: NetId| values[id.index()];
    match kind {
        GateKind::Not => !read(fanin[0]),
        GateKind::Buf => read(fanin[0]),
        GateKind::And => fanin.iter().all(|&f| read(f)),
        GateKind::Nand => !fanin.iter().all(|&f| read(f)),
        GateKind::Or => fanin.iter().any(|&f| read(f)),
        GateKind::Nor => !fanin.iter().any(|&f| read(f)),
        GateKind::Xor => fanin.iter().fold(false, |acc, &f| acc ^ read(f)),
        GateKind::Xnor => !fanin.iter().fold(false, |acc, &f| acc ^ read(f)),
    }
}

/// Primary-output values for one assignment.
pub fn output_values(c: &Circuit, pi_values: &[bool]) -> Vec<bool> {
    let all = eval_assignment(c, pi_values);
    c.outputs().iter().map(|&o| all[o.index()]).collect()
}

/// Flow ground truth: output bit set iff some assignment to the labeled
/// inputs (unlabeled inputs fixed at their given values) changes that
/// output relative to the given assignment.
pub fn ift_oracle(
    c: &Circuit,
    values: &[bool],
    labeled: &[bool],
    budget: &OracleBudget,
) -> Result<OracleOutcome, OracleError> {
    check_lengths(c, values, labeled)?;
    let positions: Vec<usize> = (0..labeled.len()).filter(|&p| labeled[p]).collect();
    let k = positions.len() as u32;
    if k == 0 {
        return Ok(OracleOutcome::Exact(vec![false; c.outputs().len()]));
    }
    if !budget.allows(k) {
        return Ok(OracleOutcome::OverBudget { labeled_bits: k });
    }
    let reference = output_values(c, values);
    let mut flowed = vec![false; reference.len()];
    let mut scratch = values.to_vec();
    for assignment in 0..(1u64 << k) {
        scratch.copy_from_slice(values);
        for (bit, &p) in positions.iter().enumerate() {
            scratch[p] = assignment >> bit & 1 == 1;
        }
        let outs = output_values(c, &scratch);
        let mut all_flowed = true;
        for (i, (&o, &r)) in outs.iter().zip(reference.iter()).enumerate() {
            flowed[i] |= o != r;
            all_flowed &= flowed[i];
        }
        if all_flowed {
            break;
        }
    }
    Ok(OracleOutcome::Exact(flowed))
}

/// Non-determinism ground truth, existential form: output bit set iff two
/// assignments to the X inputs disagree on it. Because the given assignment
/// is among those enumerated, this coincides with [`ift_oracle`].
pub fn xprop_oracle(
    c: &Circuit,
    values: &[bool],
    x_inputs: &[bool],
    budget: &OracleBudget,
) -> Result<OracleOutcome, OracleError> {
    ift_oracle(c, values, x_inputs, budget)
}

/// Single-toggle non-determinism variant: output bit set iff toggling one
/// particular X input alone (others at their given values) changes it.
/// Weaker than [`xprop_oracle`] on circuits where only joint toggles
/// matter; kept for comparison.
pub fn xprop_oracle_single_toggle(
    c: &Circuit,
    values: &[bool],
    x_inputs: &[bool],
) -> Result<Vec<bool>, OracleError> {
    check_lengths(c, values, x_inputs)?;
    let reference = output_values(c, values);
    let mut differs = vec![false; reference.len()];
    let mut scratch = values.to_vec();
    for p in (0..x_inputs.len()).filter(|&p| x_inputs[p]) {
        scratch.copy_from_slice(values);
        scratch[p] = !scratch[p];
        for (i, (&o, &r)) in output_values(c, &scratch)
            .iter()
            .zip(reference.iter())
            .enumerate()
        {
            differs[i] |= o != r;
        }
    }
    Ok(differs)
}

/// Fault ground truth: output bit set iff flipping all faulty inputs
/// simultaneously changes it. One differential evaluation, no enumeration.
pub fn fpa_oracle(
    c: &Circuit,
    values: &[bool],
    faulty: &[bool],
) -> Result<Vec<bool>, OracleError> {
    check_lengths(c, values, faulty)?;
    let reference = output_values(c, values);
    let flipped: Vec<bool> = values
        .iter()
        .zip(faulty.iter())
        .map(|(&v, &f)| v ^ f)
        .collect();
    Ok(output_values(c, &flipped)
        .iter()
        .zip(reference.iter())
        .map(|(&o, &r)| o != r)
        .collect())
}

/// The ground truth matching a technique's label interpretation.
pub fn oracle_for(
    c: &Circuit,
    tech: Technique,
    values: &[bool],
    labeled: &[bool],
    budget: &OracleBudget,
) -> Result<OracleOutcome, OracleError> {
    match tech {
        Technique::ImpreciseIft | Technique::PreciseIft => ift_oracle(c, values, labeled, budget),
        Technique::XProp => xprop_oracle(c, values, labeled, budget),
        Technique::ImpreciseFpa | Technique::PreciseFpa => {
            fpa_oracle(c, values, labeled).map(OracleOutcome::Exact)
        }
    }
}

fn check_lengths(c: &Circuit, values: &[bool], labeled: &[bool]) -> Result<(), OracleError> {
    let expected = c.inputs().len();
    for got in [values.len(), labeled.len()] {
        if got != expected {
            return Err(OracleError::InputLength { expected, got });
        }
    }
    Ok(())
}

/// Which flow/X ground truth to compare against: the joint-assignment
/// enumeration (default) or the weaker single-toggle reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowVariant {
    Joint,
    SingleToggle,
}

/// One (trial, output) comparison between the constructive label and the
/// ground truth.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub trial: u32,
    pub output: String,
    pub constructive: bool,
    pub oracle: bool,
}

/// Summary of constructive-vs-oracle agreement over seeded random trials.
#[derive(Debug, Clone, Serialize)]
pub struct FalsePositiveReport {
    pub circuit: String,
    pub technique: Technique,
    pub trials: u32,
    pub evaluated_trials: u32,
    /// Trials whose oracle query exceeded the enumeration budget.
    pub skipped_trials: u32,
    /// (trial, output) pairs compared.
    pub comparisons: u64,
    /// Constructive 1, oracle 0: safe over-approximation.
    pub false_positives: u64,
    /// Constructive 0, oracle 1: a missed flow; must never happen.
    pub false_negatives: u64,
    pub false_positive_rate: f64,
    pub false_negative_rate: f64,
    /// Under [`FlowVariant::SingleToggle`], how many comparisons the two
    /// oracle variants disagreed on (reported, not adjudicated); absent for
    /// the joint variant.
    pub variant_disagreements: Option<u64>,
    pub rows: Vec<ComparisonRow>,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Sim(#[from] crate::simulate::SimError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Compares constructive labels against the matching ground truth over
/// seeded random trials (values and label positions resampled per trial,
/// paired with the simulator's streams).
pub fn false_positive_report(
    c: &Circuit,
    tech: Technique,
    protocol: &LabelProtocol,
    trials: u32,
    seed: u64,
    budget: &OracleBudget,
) -> Result<FalsePositiveReport, ReportError> {
    false_positive_report_with(c, tech, protocol, trials, seed, budget, FlowVariant::Joint)
}

/// [`false_positive_report`] with an explicit flow-oracle variant. The
/// variant only affects enumeration-based techniques; fault techniques
/// always use the differential ground truth.
pub fn false_positive_report_with(
    c: &Circuit,
    tech: Technique,
    protocol: &LabelProtocol,
    trials: u32,
    seed: u64,
    budget: &OracleBudget,
    variant: FlowVariant,
) -> Result<FalsePositiveReport, ReportError> {
    use crate::netlist::binarize;
    use crate::simulate::{propagate_labels, simulate_values, TrialBatch};

    let uses_enumeration = matches!(
        tech,
        Technique::ImpreciseIft | Technique::PreciseIft | Technique::XProp
    );
    let single_toggle = variant == FlowVariant::SingleToggle && uses_enumeration;

    let owned;
    let sim = if c.is_binary() {
        c
    } else {
        owned = binarize(c);
        &owned
    };
    let mut batch = TrialBatch::from_seed(sim, trials as usize, seed, protocol)?;
    simulate_values(sim, &mut batch)?;
    propagate_labels(sim, &mut batch, tech)?;

    let output_names: Vec<String> = c
        .outputs()
        .iter()
        .map(|&o| c.net(o).name.clone())
        .collect();
    let mut report = FalsePositiveReport {
        circuit: c.name().to_string(),
        technique: tech,
        trials,
        evaluated_trials: 0,
        skipped_trials: 0,
        comparisons: 0,
        false_positives: 0,
        false_negatives: 0,
        false_positive_rate: 0.0,
        false_negative_rate: 0.0,
        variant_disagreements: single_toggle.then_some(0),
        rows: Vec::new(),
    };
    for t in 0..trials {
        let values = trial_input_values(c, seed, t as usize);
        let labels = trial_input_labels(c, seed, t as usize, protocol);
        let joint = match oracle_for(c, tech, &values, &labels, budget)? {
            OracleOutcome::Exact(bits) => Some(bits),
            OracleOutcome::OverBudget { .. } if !single_toggle => {
                report.skipped_trials += 1;
                continue;
            }
            OracleOutcome::OverBudget { .. } => None,
        };
        let truth = if single_toggle {
            let toggled = xprop_oracle_single_toggle(c, &values, &labels)?;
            if let (Some(j), Some(d)) = (&joint, report.variant_disagreements.as_mut()) {
                *d += j.iter().zip(toggled.iter()).filter(|(a, b)| a != b).count() as u64;
            }
            toggled
        } else {
            joint.expect("joint truth present unless skipped")
        };
        report.evaluated_trials += 1;
        for (i, &o) in sim.outputs().iter().enumerate() {
            let constructive = batch.label_bit(o, t as usize);
            let oracle = truth[i];
            report.comparisons += 1;
            if constructive && !oracle {
                report.false_positives += 1;
            }
            if !constructive && oracle {
                report.false_negatives += 1;
            }
            report.rows.push(ComparisonRow {
                trial: t,
                output: output_names[i].clone(),
                constructive,
                oracle,
            });
        }
    }
    if report.comparisons > 0 {
        report.false_positive_rate = report.false_positives as f64 / report.comparisons as f64;
        report.false_negative_rate = report.false_negatives as f64 / report.comparisons as f64;
    }
    Ok(report)
}
