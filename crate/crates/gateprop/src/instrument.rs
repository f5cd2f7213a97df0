//! Netlist-to-netlist instrumentation: generates a synthesizable
//! propagation-logic circuit for a chosen technique.
//!
//! Port naming convention (part of the public contract): for every original
//! primary input `p` the instrumented design has an input `p__l` carrying
//! its label, and for every original primary output `o` an output `o__l`
//! carrying the propagated label. Pre-existing `__l` names are disambiguated
//! with a numeric suffix (`__l_1`, `__l_2`, ...). Two deployment styles:
//!
//! - [`ShadowMode::Combined`] (default): one self-contained netlist holding
//!   the original value logic plus the shadow logic, ports
//!   `<pi>..., <pi>__l... -> <po>..., <po>__l...`;
//! - [`ShadowMode::ShadowOnly`]: just the shadow logic, with the original
//!   nets it reads exposed as extra value-tap inputs, for bolting onto an
//!   existing design as a runtime monitor.
//!
//! Shadow size per original gate is a small constant:
//!
//! | Level          | AND/NAND | OR/NOR | XOR/XNOR | NOT/BUF |
//! |----------------|----------|--------|----------|---------|
//! | value-blind    | 1        | 1      | 1        | 1       |
//! | value-aware    | 5        | 7      | 1        | 1       |
//! | masking-aware  | see below                              |
//!
//! The masking-aware shadow is the differential structure: one XOR per
//! (read) primary input flips the labeled inputs, a duplicate of the value
//! logic evaluates the flipped world, and one XOR per gate output compares
//! the two worlds. Its label taps for internal nets are declared as
//! observation outputs so the emitted netlist has no dangling nets.

use std::collections::HashSet;

use crate::netlist::{
    binarize, validate, write_bench_with_header, write_verilog_with_header, Circuit,
    CircuitBuilder, GateKind, NetId,
};
use crate::rules::{Precision, Technique};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Bench,
    Verilog,
}

impl EmitFormat {
    pub fn from_name(s: &str) -> Option<EmitFormat> {
        match s.to_ascii_lowercase().as_str() {
            "bench" => Some(EmitFormat::Bench),
            "verilog" | "v" => Some(EmitFormat::Verilog),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShadowMode {
    Combined,
    ShadowOnly,
}

impl ShadowMode {
    fn name(self) -> &'static str {
        match self {
            ShadowMode::Combined => "combined",
            ShadowMode::ShadowOnly => "shadow-only",
        }
    }
}

/// A generated propagation-logic design plus the bookkeeping to relate it
/// back to the original circuit.
#[derive(Debug, Clone)]
pub struct InstrumentedCircuit {
    circuit: Circuit,
    base: Circuit,
    technique: Technique,
    mode: ShadowMode,
    value_inputs: Vec<NetId>,
    label_inputs: Vec<NetId>,
    label_outputs: Vec<NetId>,
    origin_map: Vec<NetId>,
    shadow_gates: usize,
}

impl InstrumentedCircuit {
    /// The generated design.
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// The binarized original the shadow logic was derived from.
    pub fn base(&self) -> &Circuit {
        &self.base
    }

    pub fn technique(&self) -> Technique {
        self.technique
    }

    pub fn mode(&self) -> ShadowMode {
        self.mode
    }

    /// Value inputs of the generated design: the mirrored primary inputs in
    /// combined mode, the value taps in shadow-only mode.
    pub fn value_inputs(&self) -> &[NetId] {
        &self.value_inputs
    }

    /// One label input per original primary input, in order.
    pub fn label_inputs(&self) -> &[NetId] {
        &self.label_inputs
    }

    /// One label output per original primary output, in order.
    pub fn label_outputs(&self) -> &[NetId] {
        &self.label_outputs
    }

    /// The net of the generated design carrying the label of an original
    /// net. Total and injective over the base circuit's nets.
    pub fn label_net_of(&self, base_net: NetId) -> NetId {
        self.origin_map[base_net.index()]
    }

    /// Gates added beyond the original value logic.
    pub fn shadow_gate_count(&self) -> usize {
        self.shadow_gates
    }

    /// Serializes the design with a descriptive comment header. The header
    /// is the only place the technique appears: same-level techniques emit
    /// byte-identical netlists apart from it.
    pub fn emit(&self, format: EmitFormat) -> String {
        let header = vec![
            format!(
                "{}: propagation logic for `{}`",
                self.circuit.name(),
                self.base.name()
            ),
            format!(
                "technique: {} (precision level {})",
                self.technique.slug(),
                self.technique.precision().level()
            ),
            format!("mode: {}", self.mode.name()),
            "ports: value inputs, then one <pi>__l per primary input;".to_string(),
            "       value outputs (combined mode), then one <po>__l per primary output"
                .to_string(),
        ];
        match format {
            EmitFormat::Bench => write_bench_with_header(&self.circuit, &header),
            EmitFormat::Verilog => write_verilog_with_header(&self.circuit, &header),
        }
    }
}

/// Deterministic fresh-name allocator over a used-name set.
struct NameAlloc {
    used: HashSet<String>,
}

impl NameAlloc {
    fn new<'a>(existing: impl Iterator<Item = &'a str>) -> Self {
        NameAlloc {
            used: existing.map(str::to_string).collect(),
        }
    }

    fn fresh(&mut self, base: String) -> String {
        if self.used.insert(base.clone()) {
            return base;
        }
        let mut k = 1usize;
        loop {
            let candidate = format!("{base}_{k}");
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
            k += 1;
        }
    }
}

/// Generates combined-mode propagation logic (value logic + shadow logic).
pub fn instrument(c: &Circuit, tech: Technique) -> InstrumentedCircuit {
    instrument_with_mode(c, tech, ShadowMode::Combined)
}

/// Generates propagation logic in the requested deployment style. The
/// input is binarized first when needed.
pub fn instrument_with_mode(c: &Circuit, tech: Technique, mode: ShadowMode) -> InstrumentedCircuit {
    let base = binarize(c);
    let precision = tech.precision();

    let mut alloc = NameAlloc::new(base.nets().iter().map(|n| n.name.as_str()));
    // Label net name for every base net, allocated in net order so the
    // naming is identical for every technique and mode.
    let label_name: Vec<String> = base
        .nets()
        .iter()
        .map(|n| alloc.fresh(format!("{}__l", n.name)))
        .collect();

    let read_by_gate: HashSet<u32> = base
        .gates()
        .iter()
        .flat_map(|g| g.fanin.iter().map(|f| f.0))
        .collect();
    let input_set: HashSet<u32> = base.inputs().iter().map(|i| i.0).collect();

    let mut b = CircuitBuilder::new(format!("{}_prop", base.name()));

    // Value inputs: original PIs in combined mode, value taps otherwise.
    let mut value_input_names: Vec<String> = Vec::new();
    match mode {
        ShadowMode::Combined => {
            for &i in base.inputs() {
                value_input_names.push(base.net(i).name.clone());
            }
        }
        ShadowMode::ShadowOnly => {
            // Tap exactly the original nets whose values the shadow logic
            // reads; anything more would dangle.
            let value_read: HashSet<u32> = match precision {
                Precision::ValueBlind => HashSet::new(),
                // AND- and OR-family label rules read their fanin values;
                // XOR-family and unary rules do not.
                Precision::ValueAware => base
                    .gates()
                    .iter()
                    .filter(|g| {
                        !g.kind.is_unary()
                            && matches!(g.kind.base(), GateKind::And | GateKind::Or)
                    })
                    .flat_map(|g| g.fanin.iter().map(|f| f.0))
                    .collect(),
                // The differential structure flips every read input and
                // compares every gate output against the original.
                Precision::MaskingAware => (0..base.num_nets() as u32)
                    .filter(|n| {
                        (input_set.contains(n) && read_by_gate.contains(n))
                            || !input_set.contains(n)
                    })
                    .collect(),
            };
            let tapped: Vec<u32> =
                (0..base.num_nets() as u32).filter(|n| value_read.contains(n)).collect();
            for n in tapped {
                value_input_names.push(base.nets()[n as usize].name.clone());
            }
        }
    }
    for name in &value_input_names {
        b.input(name.clone());
    }
    for &i in base.inputs() {
        b.input(label_name[i.index()].clone());
    }

    // Value logic is shared in combined mode rather than duplicated.
    if mode == ShadowMode::Combined {
        for gate in base.gates() {
            let fanin: Vec<&str> = gate
                .fanin
                .iter()
                .map(|&f| base.net(f).name.as_str())
                .collect();
            b.gate(gate.kind, &fanin, base.net(gate.fanout).name.clone());
        }
    }

    let mut shadow_gates = 0usize;
    match precision {
        Precision::ValueBlind | Precision::ValueAware => {
            for gate in base.gates() {
                let out_label = label_name[gate.fanout.index()].clone();
                let la = label_name[gate.fanin[0].index()].clone();
                if gate.kind.is_unary() {
                    b.gate(GateKind::Buf, &[la.as_str()], out_label);
                    shadow_gates += 1;
                    continue;
                }
                let lb = label_name[gate.fanin[1].index()].clone();
                if precision == Precision::ValueBlind {
                    b.gate(GateKind::Or, &[la.as_str(), lb.as_str()], out_label);
                    shadow_gates += 1;
                    continue;
                }
                let va = base.net(gate.fanin[0]).name.clone();
                let vb = base.net(gate.fanin[1]).name.clone();
                match gate.kind.base() {
                    GateKind::Xor => {
                        b.gate(GateKind::Or, &[la.as_str(), lb.as_str()], out_label);
                        shadow_gates += 1;
                    }
                    GateKind::And => {
                        let t1 = alloc.fresh(format!("{out_label}t0"));
                        let t2 = alloc.fresh(format!("{out_label}t1"));
                        let t3 = alloc.fresh(format!("{out_label}t2"));
                        let u1 = alloc.fresh(format!("{out_label}t3"));
                        b.gate(GateKind::And, &[va.as_str(), lb.as_str()], t1.clone());
                        b.gate(GateKind::And, &[vb.as_str(), la.as_str()], t2.clone());
                        b.gate(GateKind::And, &[la.as_str(), lb.as_str()], t3.clone());
                        b.gate(GateKind::Or, &[t1.as_str(), t2.as_str()], u1.clone());
                        b.gate(GateKind::Or, &[u1.as_str(), t3.as_str()], out_label);
                        shadow_gates += 5;
                    }
                    GateKind::Or => {
                        let na = alloc.fresh(format!("{out_label}t0"));
                        let nb = alloc.fresh(format!("{out_label}t1"));
                        let t1 = alloc.fresh(format!("{out_label}t2"));
                        let t2 = alloc.fresh(format!("{out_label}t3"));
                        let t3 = alloc.fresh(format!("{out_label}t4"));
                        let u1 = alloc.fresh(format!("{out_label}t5"));
                        b.gate(GateKind::Not, &[va.as_str()], na.clone());
                        b.gate(GateKind::Not, &[vb.as_str()], nb.clone());
                        b.gate(GateKind::And, &[na.as_str(), lb.as_str()], t1.clone());
                        b.gate(GateKind::And, &[nb.as_str(), la.as_str()], t2.clone());
                        b.gate(GateKind::And, &[la.as_str(), lb.as_str()], t3.clone());
                        b.gate(GateKind::Or, &[t1.as_str(), t2.as_str()], u1.clone());
                        b.gate(GateKind::Or, &[u1.as_str(), t3.as_str()], out_label);
                        shadow_gates += 7;
                    }
                    _ => unreachable!("binary base kinds are AND, OR, XOR"),
                }
            }
        }
        Precision::MaskingAware => {
            // Flipped-world net for each base net that feeds a gate.
            let mut flipped: Vec<Option<String>> = vec![None; base.num_nets()];
            for &i in base.inputs() {
                if read_by_gate.contains(&i.0) {
                    let name = alloc.fresh(format!("{}__f", base.net(i).name));
                    b.gate(
                        GateKind::Xor,
                        &[base.net(i).name.as_str(), label_name[i.index()].as_str()],
                        name.clone(),
                    );
                    shadow_gates += 1;
                    flipped[i.index()] = Some(name);
                }
            }
            for gate in base.gates() {
                let dup = alloc.fresh(format!("{}__d", base.net(gate.fanout).name));
                let fanin: Vec<&str> = gate
                    .fanin
                    .iter()
                    .map(|&f| {
                        flipped[f.index()]
                            .as_deref()
                            .expect("every read net has a flipped-world counterpart")
                    })
                    .collect();
                b.gate(gate.kind, &fanin, dup.clone());
                shadow_gates += 1;
                flipped[gate.fanout.index()] = Some(dup);
            }
            // Label taps compare the two worlds at every gate output.
            for gate in base.gates() {
                let n = gate.fanout;
                let dup = flipped[n.index()].clone().expect("gate output was duplicated");
                b.gate(
                    GateKind::Xor,
                    &[base.net(n).name.as_str(), dup.as_str()],
                    label_name[n.index()].clone(),
                );
                shadow_gates += 1;
            }
        }
    }

    // Outputs: value POs (combined mode), label POs, then the masking-aware
    // internal observation taps.
    if mode == ShadowMode::Combined {
        for &o in base.outputs() {
            b.output(base.net(o).name.clone());
        }
    }
    let output_set: HashSet<u32> = base.outputs().iter().map(|o| o.0).collect();
    for &o in base.outputs() {
        b.output(label_name[o.index()].clone());
    }
    if precision == Precision::MaskingAware {
        for gate in base.gates() {
            let n = gate.fanout;
            if !output_set.contains(&n.0) {
                b.output(label_name[n.index()].clone());
            }
        }
    }

    let circuit = b
        .finish()
        .expect("instrumentation of a valid circuit must produce a valid circuit");

    let id_of = |name: &str| -> NetId {
        circuit
            .net_id(name)
            .expect("generated net must exist in the generated circuit")
    };
    let value_inputs: Vec<NetId> = value_input_names.iter().map(|n| id_of(n)).collect();
    let label_inputs: Vec<NetId> = base
        .inputs()
        .iter()
        .map(|&i| id_of(&label_name[i.index()]))
        .collect();
    let label_outputs: Vec<NetId> = base
        .outputs()
        .iter()
        .map(|&o| id_of(&label_name[o.index()]))
        .collect();
    let origin_map: Vec<NetId> = (0..base.num_nets())
        .map(|n| id_of(&label_name[n]))
        .collect();

    InstrumentedCircuit {
        circuit,
        base,
        technique: tech,
        mode,
        value_inputs,
        label_inputs,
        label_outputs,
        origin_map,
        shadow_gates,
    }
}

/// Expected shadow gate count for a circuit and technique; the instrument
/// pass is asserted against this in tests.
pub fn expected_shadow_gates(base: &Circuit, tech: Technique) -> usize {
    let read_by_gate: HashSet<u32> = base
        .gates()
        .iter()
        .flat_map(|g| g.fanin.iter().map(|f| f.0))
        .collect();
    match tech.precision() {
        Precision::ValueBlind => base.num_gates(),
        Precision::ValueAware => base
            .gates()
            .iter()
            .map(|g| match g.kind.base() {
                GateKind::Buf => 1,
                GateKind::Xor => 1,
                GateKind::And => 5,
                GateKind::Or => 7,
                _ => unreachable!(),
            })
            .sum(),
        Precision::MaskingAware => {
            let flips = base
                .inputs()
                .iter()
                .filter(|i| read_by_gate.contains(&i.0))
                .count();
            flips + 2 * base.num_gates()
        }
    }
}

/// Sanity wrapper asserting the emitted artifact parses back cleanly.
pub fn emit_checked(ic: &InstrumentedCircuit, format: EmitFormat) -> String {
    let text = ic.emit(format);
    if format == EmitFormat::Bench {
        let reparsed = crate::netlist::parse_bench(&text)
            .into_result()
            .expect("emitted bench must reparse");
        debug_assert!(validate(&reparsed).iter().all(|d| !d.is_error()));
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{parse_bench, structurally_equal, CircuitBuilder};
    use crate::rules::Technique::*;

    fn single_and() -> Circuit {
        let mut b = CircuitBuilder::new("and2");
        b.input("a").input("b").output("o");
        b.gate(GateKind::And, &["a", "b"], "o");
        b.finish().unwrap()
    }

    fn single_not() -> Circuit {
        let mut b = CircuitBuilder::new("inv");
        b.input("a").output("y");
        b.gate(GateKind::Not, &["a"], "y");
        b.finish().unwrap()
    }

    #[test]
    fn value_blind_and_shadow_is_one_or_gate() {
        let ic = instrument(&single_and(), ImpreciseIft);
        assert_eq!(ic.shadow_gate_count(), 1);
        let shadow: Vec<_> = ic
            .circuit()
            .gates()
            .iter()
            .filter(|g| g.kind == GateKind::Or)
            .collect();
        assert_eq!(shadow.len(), 1);
        let names: Vec<&str> = shadow[0]
            .fanin
            .iter()
            .map(|&f| ic.circuit().net(f).name.as_str())
            .collect();
        assert_eq!(names, vec!["a__l", "b__l"]);
    }

    #[test]
    fn value_aware_and_shadow_matches_rule_structure() {
        let ic = instrument(&single_and(), PreciseIft);
        assert_eq!(ic.shadow_gate_count(), 5);
        let ands = ic
            .circuit()
            .gates()
            .iter()
            .filter(|g| g.kind == GateKind::And)
            .count();
        let ors = ic
            .circuit()
            .gates()
            .iter()
            .filter(|g| g.kind == GateKind::Or)
            .count();
        // Original AND + three product terms, two OR fold stages.
        assert_eq!((ands, ors), (4, 2));
    }

    #[test]
    fn inverter_label_is_wired_through() {
        for tech in Technique::ALL {
            let ic = instrument(&single_not(), tech);
            let c = ic.circuit();
            match tech.precision() {
                Precision::MaskingAware => {
                    // Differential structure: flip, duplicate, compare.
                    assert_eq!(ic.shadow_gate_count(), 3);
                }
                _ => {
                    assert_eq!(ic.shadow_gate_count(), 1);
                    let buf = c
                        .gates()
                        .iter()
                        .find(|g| g.kind == GateKind::Buf)
                        .expect("label pass-through buffer");
                    assert_eq!(c.net(buf.fanin[0]).name, "a__l");
                    assert_eq!(c.net(buf.fanout).name, "y__l");
                }
            }
        }
    }

    #[test]
    fn combined_ports_follow_convention() {
        let ic = instrument(&single_and(), PreciseIft);
        let c = ic.circuit();
        let in_names: Vec<&str> = c.inputs().iter().map(|&i| c.net(i).name.as_str()).collect();
        let out_names: Vec<&str> = c.outputs().iter().map(|&o| c.net(o).name.as_str()).collect();
        assert_eq!(in_names, vec!["a", "b", "a__l", "b__l"]);
        assert_eq!(out_names, vec!["o", "o__l"]);
    }

    #[test]
    fn preexisting_label_suffix_gets_bumped() {
        let mut b = CircuitBuilder::new("tricky");
        b.input("a").input("a__l").output("o");
        b.gate(GateKind::And, &["a", "a__l"], "o");
        let ic = instrument(&b.finish().unwrap(), PreciseIft);
        let c = ic.circuit();
        let names: Vec<&str> = c.inputs().iter().map(|&i| c.net(i).name.as_str()).collect();
        assert_eq!(names, vec!["a", "a__l", "a__l_1", "a__l__l"]);
        // Injective: four distinct label ids for four distinct nets.
        let mut seen = std::collections::HashSet::new();
        for n in 0..ic.base().num_nets() {
            assert!(seen.insert(ic.label_net_of(NetId(n as u32))));
        }
    }

    #[test]
    fn emitted_bench_reparses_cleanly() {
        let src = "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(o)\nt = NAND(a, b)\no = NOR(t, c)";
        let c = parse_bench(src).into_result().unwrap();
        for tech in Technique::ALL {
            for mode in [ShadowMode::Combined, ShadowMode::ShadowOnly] {
                let ic = instrument_with_mode(&c, tech, mode);
                let text = ic.emit(EmitFormat::Bench);
                let again = parse_bench(&text).into_result().unwrap();
                assert!(structurally_equal(ic.circuit(), &again), "{tech} {mode:?}");
                let diags = validate(&again);
                assert!(diags.is_empty(), "{tech} {mode:?}: {diags:?}");
            }
        }
    }

    #[test]
    fn same_level_techniques_emit_identical_structure() {
        let c = single_and();
        let a = instrument(&c, PreciseIft);
        let b = instrument(&c, XProp);
        let d = instrument(&c, ImpreciseFpa);
        assert!(structurally_equal(a.circuit(), b.circuit()));
        assert!(structurally_equal(b.circuit(), d.circuit()));
        // Only the technique header line differs.
        let strip = |s: &str| -> String {
            s.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("\n")
        };
        assert_eq!(
            strip(&a.emit(EmitFormat::Bench)),
            strip(&b.emit(EmitFormat::Bench))
        );
    }

    #[test]
    fn verilog_value_blind_and_has_one_or_primitive() {
        let ic = instrument(&single_and(), ImpreciseIft);
        let v = ic.emit(EmitFormat::Verilog);
        assert_eq!(v.matches("\n  or ").count(), 1);
        assert_eq!(v.matches("\n  and ").count(), 1);
    }

    #[test]
    fn shadow_counts_match_documented_formulas() {
        let src = "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(o)\nOUTPUT(p)\nt = NAND(a, b)\nu = NOR(t, c)\no = XNOR(u, a)\np = NOT(u)";
        let c = parse_bench(src).into_result().unwrap();
        for tech in Technique::ALL {
            let ic = instrument(&c, tech);
            assert_eq!(
                ic.shadow_gate_count(),
                expected_shadow_gates(ic.base(), tech),
                "{tech}"
            );
            // Linearity bound: at most 8 shadow gates per original gate.
            assert!(ic.shadow_gate_count() <= 8 * ic.base().num_gates());
        }
    }

    #[test]
    fn shadow_only_mode_taps_what_it_reads() {
        let c = single_and();
        // Value-blind logic reads no values at all.
        let ic = instrument_with_mode(&c, ImpreciseIft, ShadowMode::ShadowOnly);
        assert!(ic.value_inputs().is_empty());
        assert_eq!(ic.circuit().num_gates(), 1);

        // Value-aware logic taps every gate fanin.
        let ic = instrument_with_mode(&c, PreciseIft, ShadowMode::ShadowOnly);
        let taps: Vec<&str> = ic
            .value_inputs()
            .iter()
            .map(|&n| ic.circuit().net(n).name.as_str())
            .collect();
        assert_eq!(taps, vec!["a", "b"]);

        // Masking-aware logic taps the inputs and the compared outputs.
        let ic = instrument_with_mode(&c, PreciseFpa, ShadowMode::ShadowOnly);
        let taps: Vec<&str> = ic
            .value_inputs()
            .iter()
            .map(|&n| ic.circuit().net(n).name.as_str())
            .collect();
        assert_eq!(taps, vec!["a", "b", "o"]);
        let text = ic.emit(EmitFormat::Bench);
        let again = parse_bench(&text).into_result().unwrap();
        assert!(validate(&again).is_empty());
    }

    #[test]
    fn nary_input_is_binarized_first() {
        let src = "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(o)\no = NAND(a, b, c)";
        let c = parse_bench(src).into_result().unwrap();
        let ic = instrument(&c, PreciseIft);
        assert!(ic.base().is_binary());
        assert_eq!(ic.base().num_gates(), 3);
    }
}
