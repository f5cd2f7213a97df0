//! Deterministic random circuit generation, for scale tests and benchmarks
//! when no external netlist files are at hand.

use crate::netlist::{Circuit, CircuitBuilder, GateKind};
use crate::simulate::rng;

/// Generates a random combinational circuit with the requested shape.
///
/// Gates draw their kind uniformly from the six binary kinds plus NOT, and
/// their fanins uniformly from all earlier nets, so the result is acyclic
/// by construction with plenty of reconvergent fanout. The final
/// `n_outputs` gate outputs are marked as primary outputs. Deterministic in
/// `seed`.
pub fn random_circuit(seed: u64, n_inputs: usize, n_gates: usize, n_outputs: usize) -> Circuit {
    assert!(n_inputs >= 2, "need at least two inputs");
    assert!(n_gates >= 1, "need at least one gate");
    let n_outputs = n_outputs.clamp(1, n_gates);

    const KINDS: [GateKind; 7] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
    ];

    let mut b = CircuitBuilder::new(format!("rand_{seed}_{n_inputs}x{n_gates}"));
    let mut nets: Vec<String> = Vec::with_capacity(n_inputs + n_gates);
    for i in 0..n_inputs {
        let name = format!("i{i}");
        b.input(name.clone());
        nets.push(name);
    }
    for g in 0..n_gates {
        let stream = rng::child(seed, g as u64);
        let kind = KINDS[(rng::child(stream, 0) % KINDS.len() as u64) as usize];
        let out = format!("g{g}");
        let pick = |slot: u64| -> &str {
            let idx = (rng::child(stream, slot) % nets.len() as u64) as usize;
            &nets[idx]
        };
        if kind.is_unary() {
            b.gate(kind, &[pick(1)], out.clone());
        } else {
            b.gate(kind, &[pick(1), pick(2)], out.clone());
        }
        nets.push(out);
    }
    for g in (n_gates - n_outputs)..n_gates {
        b.output(format!("g{g}"));
    }
    b.finish().expect("generated circuit is valid by construction")
}
