//! Per-gate label propagation rules shared by every analysis technique.
//!
//! Each of the five techniques picks one of three precision levels, and
//! techniques at the same level use identical gate rules — only the
//! interpretation of the label bit changes (tainted, non-deterministic,
//! or faulty):
//!
//! | Technique        | Level | Label meaning      |
//! |------------------|-------|--------------------|
//! | `ImpreciseIft`   | 0     | tainted            |
//! | `PreciseIft`     | 1     | tainted            |
//! | `XProp`          | 1     | non-deterministic  |
//! | `ImpreciseFpa`   | 1     | faulty             |
//! | `PreciseFpa`     | 2     | faulty             |
//!
//! Level 0 is value-blind: the output label is the OR of the input labels.
//! Level 1 is value-aware per gate; for a two-input gate with input values
//! `a, b` and labels `a_l, b_l`:
//!
//! - AND family: `o_l = a·b_l + b·a_l + a_l·b_l`
//! - OR  family: `o_l = ā·b_l + b̄·a_l + a_l·b_l`
//! - XOR family: `o_l = a_l + b_l`
//! - NOT/BUF:    `o_l = i_l`
//!
//! Level 2 additionally accounts for fault masking and is computed by the
//! differential identity `o_l = g(a, b) XOR g(a XOR a_l, b XOR b_l)`, which
//! is exact for every gate kind by construction. Complemented kinds share
//! the rules of their base kind at every level.
//!
//! All rules are plain functions over machine words; bit `i` of each word
//! is one independent evaluation.

use crate::netlist::GateKind;

use serde::Serialize;
use thiserror::Error;

/// The five analysis techniques.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Technique {
    ImpreciseIft,
    PreciseIft,
    XProp,
    ImpreciseFpa,
    PreciseFpa,
}

impl Technique {
    pub const ALL: [Technique; 5] = [
        Technique::ImpreciseIft,
        Technique::PreciseIft,
        Technique::XProp,
        Technique::ImpreciseFpa,
        Technique::PreciseFpa,
    ];

    /// The precision level whose gate rules this technique uses.
    pub fn precision(self) -> Precision {
        match self {
            Technique::ImpreciseIft => Precision::ValueBlind,
            Technique::PreciseIft | Technique::XProp | Technique::ImpreciseFpa => {
                Precision::ValueAware
            }
            Technique::PreciseFpa => Precision::MaskingAware,
        }
    }

    /// Stable hyphenated name used by the CLI and report files.
    pub fn slug(self) -> &'static str {
        match self {
            Technique::ImpreciseIft => "imprecise-ift",
            Technique::PreciseIft => "precise-ift",
            Technique::XProp => "xprop",
            Technique::ImpreciseFpa => "imprecise-fpa",
            Technique::PreciseFpa => "precise-fpa",
        }
    }

    pub fn from_slug(s: &str) -> Option<Technique> {
        Technique::ALL.iter().copied().find(|t| t.slug() == s)
    }

    /// What a set label bit means under this technique.
    pub fn label_meaning(self) -> &'static str {
        match self {
            Technique::ImpreciseIft | Technique::PreciseIft => "tainted",
            Technique::XProp => "non-deterministic",
            Technique::ImpreciseFpa | Technique::PreciseFpa => "faulty",
        }
    }
}

impl std::fmt::Display for Technique {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.slug())
    }
}

/// Rule families by how much circuit behavior they model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
#[repr(u8)]
pub enum Precision {
    /// Level 0: labels propagate regardless of values.
    ValueBlind = 0,
    /// Level 1: per-gate exact treatment of input values.
    ValueAware = 1,
    /// Level 2: additionally models fault masking; exact by construction.
    MaskingAware = 2,
}

impl Precision {
    pub fn level(self) -> u8 {
        self as u8
    }
}

/// One logic value with its attribute label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabeledBit {
    pub value: bool,
    pub label: bool,
}

impl LabeledBit {
    pub fn new(value: bool, label: bool) -> Self {
        LabeledBit { value, label }
    }
}

/// Pushes a labeled pair through one gate: the output value by Boolean
/// semantics, the output label by the technique's rule.
pub fn propagate_pair(
    kind: GateKind,
    tech: Technique,
    a: LabeledBit,
    b: LabeledBit,
) -> LabeledBit {
    LabeledBit {
        value: eval2_word(kind, a.value as u64, b.value as u64) & 1 == 1,
        label: label_rule(kind, tech, (a.value, b.value), (a.label, b.label)),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("{kind} expects {expected} fanins, got {got}")]
    ArityMismatch {
        kind: GateKind,
        expected: &'static str,
        got: usize,
    },
}

/// Evaluates one two-input (or unary; `b` ignored) gate over machine words.
#[inline]
pub fn eval2_word(kind: GateKind, a: u64, b: u64) -> u64 {
    match kind {
        GateKind::And => a & b,
        GateKind::Nand => !(a & b),
        GateKind::Or => a | b,
        GateKind::Nor => !(a | b),
        GateKind::Xor => a ^ b,
        GateKind::Xnor => !(a ^ b),
        GateKind::Not => !a,
        GateKind::Buf => a,
    }
}

/// n-ary gate evaluation over machine words (fanins folded left to right).
pub fn gate_eval_word(kind: GateKind, fanin: &[u64]) -> u64 {
    if kind.is_unary() {
        return eval2_word(kind, fanin[0], 0);
    }
    let base = kind.base();
    let folded = fanin[1..]
        .iter()
        .fold(fanin[0], |acc, &w| eval2_word(base, acc, w));
    if kind.is_complemented() {
        !folded
    } else {
        folded
    }
}

/// Boolean gate semantics with arity checking.
pub fn gate_eval(kind: GateKind, values: &[bool]) -> Result<bool, RuleError> {
    let ok = if kind.is_unary() {
        values.len() == 1
    } else {
        values.len() >= 2
    };
    if !ok {
        return Err(RuleError::ArityMismatch {
            kind,
            expected: if kind.is_unary() { "exactly 1" } else { "2 or more" },
            got: values.len(),
        });
    }
    let words: Vec<u64> = values.iter().map(|&v| v as u64).collect();
    Ok(gate_eval_word(kind, &words) & 1 == 1)
}

/// Output label for one gate over machine words.
///
/// `a, b` are the fanin value words and `al, bl` their label words; unary
/// kinds ignore the second slots. This is the single source of truth for
/// every level; the scalar [`label_rule`] and the batch simulator both call
/// it.
#[inline]
pub fn label_rule_word(
    kind: GateKind,
    precision: Precision,
    a: u64,
    b: u64,
    al: u64,
    bl: u64,
) -> u64 {
    if kind.is_unary() {
        return match precision {
            Precision::MaskingAware => {
                eval2_word(kind, a, 0) ^ eval2_word(kind, a ^ al, 0)
            }
            _ => al,
        };
    }
    match precision {
        Precision::ValueBlind => al | bl,
        Precision::ValueAware => match kind.base() {
            GateKind::And => (a & bl) | (b & al) | (al & bl),
            GateKind::Or => (!a & bl) | (!b & al) | (al & bl),
            GateKind::Xor => al | bl,
            _ => unreachable!("base() yields AND, OR, or XOR for binary kinds"),
        },
        Precision::MaskingAware => eval2_word(kind, a, b) ^ eval2_word(kind, a ^ al, b ^ bl),
    }
}

/// Scalar output label for one gate under a technique.
pub fn label_rule(
    kind: GateKind,
    tech: Technique,
    values: (bool, bool),
    labels: (bool, bool),
) -> bool {
    label_rule_word(
        kind,
        tech.precision(),
        values.0 as u64,
        values.1 as u64,
        labels.0 as u64,
        labels.1 as u64,
    ) & 1
        == 1
}

/// One row of a 16-row label propagation truth table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruthRow {
    pub a: bool,
    pub b: bool,
    pub a_label: bool,
    pub b_label: bool,
    pub out_label: bool,
}

/// Full 16-row truth table for a two-input kind under a technique.
///
/// Row index `i` encodes `(a, b, a_label, b_label)` as the bits of `i` from
/// most to least significant: `i = 8a + 4b + 2a_label + b_label`.
pub fn rule_truth_table(kind: GateKind, tech: Technique) -> [TruthRow; 16] {
    std::array::from_fn(|i| {
        let a = i & 8 != 0;
        let b = i & 4 != 0;
        let a_label = i & 2 != 0;
        let b_label = i & 1 != 0;
        TruthRow {
            a,
            b,
            a_label,
            b_label,
            out_label: label_rule(kind, tech, (a, b), (a_label, b_label)),
        }
    })
}
