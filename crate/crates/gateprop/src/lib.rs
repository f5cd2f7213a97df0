//! Gate-level propagation analysis over combinational netlists.
//!
//! One framework covers three verification questions that share the same
//! machinery — can this input *affect* that output? — under different
//! label interpretations:
//!
//! - information flow tracking (labels mark tainted data),
//! - X-propagation (labels mark non-deterministic values),
//! - fault propagation (labels mark flipped bits).
//!
//! The crate parses ISCAS `.bench` netlists, generates synthesizable
//! shadow logic per technique, simulates label propagation bit-parallel
//! over thousands of random trials, validates everything against
//! definitional brute-force oracles, and compares techniques with Welch
//! t-tests and bootstrap confidence intervals.
//!
//! # Modules
//!
//! - [`netlist`]: circuit IR, `.bench` parser, validation, binarization,
//!   `.bench`/Verilog emission;
//! - [`rules`]: the per-gate label rule library (three precision levels);
//! - [`instrument`]: netlist-to-netlist shadow logic generation;
//! - [`simulate`]: bit-parallel trial batches with pinned counter RNG;
//! - [`oracle`]: definitional references and false-positive measurement;
//! - [`stats`]: Welch t-test, percentile bootstrap, paired experiments;
//! - [`synth`]: deterministic random circuit generation for benchmarks;
//! - [`cli`]: the `gateprop` command-line driver.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --example parse_and_stats          # parse + validate + counts
//! cargo run --example truth_tables             # per-gate rule tables
//! cargo run --example instrument_shadow        # shadow logic generation
//! cargo run --example simulate_batch           # bit-parallel propagation
//! cargo run --example oracle_false_positives   # constructive vs oracle
//! cargo run --example experiment_compare       # t-test + bootstrap CI
//! ```

pub mod cli;
pub mod instrument;
pub mod netlist;
pub mod oracle;
pub mod rules;
pub mod simulate;
pub mod stats;
pub mod synth;

pub use instrument::{instrument, instrument_with_mode, EmitFormat, InstrumentedCircuit, ShadowMode};
pub use netlist::{
    binarize, parse_bench, parse_bench_with, validate, write_bench, write_verilog, Circuit,
    CircuitBuilder, Diagnostic, Gate, GateKind, NetId, ParseOptions, Severity,
};
pub use oracle::{
    false_positive_report, fpa_oracle, ift_oracle, xprop_oracle, FlowVariant, OracleBudget,
    OracleOutcome,
};
pub use rules::{
    gate_eval, label_rule, propagate_pair, rule_truth_table, LabeledBit, Precision, Technique,
};
pub use simulate::{
    propagate_labels, run_trials, simulate_values, LabelProtocol, Metric, Selection, TrialBatch,
};
pub use stats::{bootstrap_ci, compare, compare_on, welch_t, ExperimentConfig, ExperimentResult};
