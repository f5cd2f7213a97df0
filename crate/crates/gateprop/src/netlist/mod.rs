//! Combinational netlist IR: parsing, validation, transformation, emission.
//!
//! A [`Circuit`] is an immutable DAG of primitive gates over named nets.
//! Circuits are constructed through [`CircuitBuilder`] (or the `.bench`
//! parser), which enforces the structural invariants: acyclicity, a single
//! driver per net, unique net names, and fully driven fanins. Once built, a
//! circuit is safe to share across threads.

mod parse;
mod write;

pub use parse::{parse_bench, parse_bench_with, ParseOptions, ParseResult};
pub use write::{
    mangle_verilog_ident, write_bench, write_bench_with_header, write_verilog,
    write_verilog_with_header,
};

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

/// Index of a net within its [`Circuit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetId(pub u32);

impl NetId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Primitive gate functions. This set is closed: the parser rejects
/// anything else (including flip-flops, unless register cutting is enabled).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buf,
    ];

    /// The six two-input (after [`binarize`]) kinds.
    pub const BINARY: [GateKind; 6] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Nand => "NAND",
            GateKind::Or => "OR",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
        }
    }

    /// Case-insensitive lookup. `BUFF` is accepted as a synonym for `BUF`.
    pub fn from_name(s: &str) -> Option<GateKind> {
        let upper = s.to_ascii_uppercase();
        Some(match upper.as_str() {
            "AND" => GateKind::And,
            "NAND" => GateKind::Nand,
            "OR" => GateKind::Or,
            "NOR" => GateKind::Nor,
            "XOR" => GateKind::Xor,
            "XNOR" => GateKind::Xnor,
            "NOT" => GateKind::Not,
            "BUF" | "BUFF" => GateKind::Buf,
            _ => return None,
        })
    }

    /// NOT and BUF take exactly one fanin; everything else takes two or more.
    pub fn is_unary(self) -> bool {
        matches!(self, GateKind::Not | GateKind::Buf)
    }

    /// Strips the output complement: NAND→AND, NOR→OR, XNOR→XOR, NOT→BUF.
    pub fn base(self) -> GateKind {
        match self {
            GateKind::Nand => GateKind::And,
            GateKind::Nor => GateKind::Or,
            GateKind::Xnor => GateKind::Xor,
            GateKind::Not => GateKind::Buf,
            k => k,
        }
    }

    pub fn is_complemented(self) -> bool {
        matches!(
            self,
            GateKind::Nand | GateKind::Nor | GateKind::Xnor | GateKind::Not
        )
    }

    /// Verilog gate primitive spelling.
    pub fn verilog_primitive(self) -> &'static str {
        match self {
            GateKind::And => "and",
            GateKind::Nand => "nand",
            GateKind::Or => "or",
            GateKind::Nor => "nor",
            GateKind::Xor => "xor",
            GateKind::Xnor => "xnor",
            GateKind::Not => "not",
            GateKind::Buf => "buf",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A primitive gate: an ordered fanin list and a single fanout net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub fanin: Vec<NetId>,
    pub fanout: NetId,
}

/// What drives a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Driver {
    /// Primary input at the given position of the input list.
    Input(u32),
    /// Output of the gate at the given index.
    Gate(u32),
}

/// A named signal.
#[derive(Debug, Clone)]
pub struct Net {
    pub name: String,
    pub driver: Driver,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A structured parse or validation finding with a source location.
/// Line and column are 1-based; programmatically built circuits report 0:0.
#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub line: u32,
    pub column: u32,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, line: u32, column: u32) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            line,
            column,
        }
    }

    pub fn warning(message: impl Into<String>, line: u32, column: u32) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message: message.into(),
            line,
            column,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {}: {}", self.line, self.column, sev, self.message)
    }
}

/// An immutable combinational circuit.
///
/// Invariants (enforced at construction):
/// - the gate graph is acyclic;
/// - every net has exactly one driver (a primary input or one gate output);
/// - every gate fanin refers to a driven net;
/// - net names are unique;
/// - `topo` holds every gate after the drivers of all of its fanins,
///   with ties broken by gate declaration order.
#[derive(Debug, Clone)]
pub struct Circuit {
    name: String,
    nets: Vec<Net>,
    by_name: HashMap<String, NetId>,
    inputs: Vec<NetId>,
    outputs: Vec<NetId>,
    gates: Vec<Gate>,
    topo: Vec<u32>,
}

impl Circuit {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nets(&self) -> &[Net] {
        &self.nets
    }

    pub fn net(&self, id: NetId) -> &Net {
        &self.nets[id.index()]
    }

    pub fn net_id(&self, name: &str) -> Option<NetId> {
        self.by_name.get(name).copied()
    }

    /// Primary inputs in declaration order.
    pub fn inputs(&self) -> &[NetId] {
        &self.inputs
    }

    /// Primary outputs in declaration order.
    pub fn outputs(&self) -> &[NetId] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Cached topological order (gate indices).
    pub fn topo(&self) -> &[u32] {
        &self.topo
    }

    /// Gates in dependency order; every gate appears after the drivers of
    /// its fanins, ties broken by declaration index.
    pub fn topo_gates(&self) -> impl Iterator<Item = &Gate> {
        self.topo.iter().map(move |&gi| &self.gates[gi as usize])
    }

    pub fn num_nets(&self) -> usize {
        self.nets.len()
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    /// True when every multi-input gate has exactly two fanins.
    pub fn is_binary(&self) -> bool {
        self.gates
            .iter()
            .all(|g| g.fanin.len() == if g.kind.is_unary() { 1 } else { 2 })
    }

    /// Returns a copy with a different name; connectivity is unchanged.
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Structural equality up to net ids: same input/output name sequences and
/// the same gate list (kind, fanin names, fanout name) in the same order.
pub fn structurally_equal(a: &Circuit, b: &Circuit) -> bool {
    let names = |c: &Circuit, ids: &[NetId]| -> Vec<String> {
        ids.iter().map(|&n| c.net(n).name.clone()).collect()
    };
    if names(a, &a.inputs) != names(b, &b.inputs) || names(a, &a.outputs) != names(b, &b.outputs) {
        return false;
    }
    if a.gates.len() != b.gates.len() {
        return false;
    }
    a.gates.iter().zip(b.gates.iter()).all(|(ga, gb)| {
        ga.kind == gb.kind
            && names(a, &ga.fanin) == names(b, &gb.fanin)
            && a.net(ga.fanout).name == b.net(gb.fanout).name
    })
}

/// Re-checks every circuit invariant and reports dangling nets.
///
/// Errors are impossible for builder-produced circuits; the useful output is
/// the warning list: nets that are driven but read by no gate and not marked
/// as primary outputs.
pub fn validate(c: &Circuit) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut read = vec![false; c.nets.len()];
    for gate in &c.gates {
        for &f in &gate.fanin {
            read[f.index()] = true;
        }
        let expected = if gate.kind.is_unary() { 1 } else { 2 };
        if gate.kind.is_unary() && gate.fanin.len() != expected {
            diags.push(Diagnostic::error(
                format!(
                    "gate {} driving `{}` has {} fanins, expected {}",
                    gate.kind,
                    c.net(gate.fanout).name,
                    gate.fanin.len(),
                    expected
                ),
                0,
                0,
            ));
        }
        if !gate.kind.is_unary() && gate.fanin.len() < 2 {
            diags.push(Diagnostic::error(
                format!(
                    "gate {} driving `{}` has {} fanins, expected at least 2",
                    gate.kind,
                    c.net(gate.fanout).name,
                    gate.fanin.len()
                ),
                0,
                0,
            ));
        }
    }
    let mut is_output = vec![false; c.nets.len()];
    for &o in &c.outputs {
        is_output[o.index()] = true;
    }
    for (i, net) in c.nets.iter().enumerate() {
        if !read[i] && !is_output[i] {
            diags.push(Diagnostic::warning(
                format!("net `{}` is driven but never read", net.name),
                0,
                0,
            ));
        }
    }
    // Topological order sanity: a permutation of gates respecting fanin edges.
    let mut pos = vec![usize::MAX; c.gates.len()];
    for (p, &gi) in c.topo.iter().enumerate() {
        if pos[gi as usize] != usize::MAX {
            diags.push(Diagnostic::error("topological order repeats a gate", 0, 0));
        }
        pos[gi as usize] = p;
    }
    if c.topo.len() != c.gates.len() {
        diags.push(Diagnostic::error(
            "topological order is not a permutation of the gate list",
            0,
            0,
        ));
    }
    for (gi, gate) in c.gates.iter().enumerate() {
        for &f in &gate.fanin {
            if let Driver::Gate(d) = c.net(f).driver {
                if pos[d as usize] >= pos[gi] {
                    diags.push(Diagnostic::error(
                        format!(
                            "gate driving `{}` appears before its fanin driver",
                            c.net(gate.fanout).name
                        ),
                        0,
                        0,
                    ));
                }
            }
        }
    }
    diags
}

/// Incremental circuit construction with deferred name resolution.
///
/// Fanins may reference nets that are declared later; `finish` resolves
/// everything, checks the invariants, and computes the topological order.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    name: String,
    inputs: Vec<(String, u32, u32)>,
    outputs: Vec<(String, u32, u32)>,
    gates: Vec<PendingGate>,
}

#[derive(Debug)]
struct PendingGate {
    kind: GateKind,
    fanin: Vec<(String, u32, u32)>,
    fanout: String,
    line: u32,
    column: u32,
}

impl CircuitBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CircuitBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, name: impl Into<String>) -> &mut Self {
        self.input_at(name, 0, 0)
    }

    pub fn input_at(&mut self, name: impl Into<String>, line: u32, column: u32) -> &mut Self {
        self.inputs.push((name.into(), line, column));
        self
    }

    pub fn output(&mut self, name: impl Into<String>) -> &mut Self {
        self.output_at(name, 0, 0)
    }

    pub fn output_at(&mut self, name: impl Into<String>, line: u32, column: u32) -> &mut Self {
        self.outputs.push((name.into(), line, column));
        self
    }

    pub fn gate(&mut self, kind: GateKind, fanin: &[&str], fanout: impl Into<String>) -> &mut Self {
        let fanin = fanin.iter().map(|f| (f.to_string(), 0, 0)).collect();
        self.gates.push(PendingGate {
            kind,
            fanin,
            fanout: fanout.into(),
            line: 0,
            column: 0,
        });
        self
    }

    pub fn gate_at(
        &mut self,
        kind: GateKind,
        fanin: Vec<(String, u32, u32)>,
        fanout: impl Into<String>,
        line: u32,
        column: u32,
    ) -> &mut Self {
        self.gates.push(PendingGate {
            kind,
            fanin,
            fanout: fanout.into(),
            line,
            column,
        });
        self
    }

    /// Resolves names, checks every invariant, and computes the cached
    /// topological order. Any violation is returned as error diagnostics.
    pub fn finish(self) -> Result<Circuit, Vec<Diagnostic>> {
        let mut diags: Vec<Diagnostic> = Vec::new();
        let mut nets: Vec<Net> = Vec::new();
        let mut by_name: HashMap<String, NetId> = HashMap::new();

        let mut declare = |name: &str,
                           driver: Driver,
                           line: u32,
                           column: u32,
                           nets: &mut Vec<Net>,
                           diags: &mut Vec<Diagnostic>|
         -> Option<NetId> {
            if let Some(&existing) = by_name.get(name) {
                let what = match nets[existing.index()].driver {
                    Driver::Input(_) => "a primary input",
                    Driver::Gate(_) => "a gate output",
                };
                diags.push(Diagnostic::error(
                    format!("duplicate driver for net `{name}` (already {what})"),
                    line,
                    column,
                ));
                return None;
            }
            let id = NetId(nets.len() as u32);
            nets.push(Net {
                name: name.to_string(),
                driver,
            });
            by_name.insert(name.to_string(), id);
            Some(id)
        };

        let mut input_ids = Vec::new();
        for (pos, (name, line, column)) in self.inputs.iter().enumerate() {
            if let Some(id) = declare(
                name,
                Driver::Input(pos as u32),
                *line,
                *column,
                &mut nets,
                &mut diags,
            ) {
                input_ids.push(id);
            }
        }
        let mut gates: Vec<Gate> = Vec::new();
        for (gi, pg) in self.gates.iter().enumerate() {
            if let Some(out) = declare(
                &pg.fanout,
                Driver::Gate(gi as u32),
                pg.line,
                pg.column,
                &mut nets,
                &mut diags,
            ) {
                gates.push(Gate {
                    kind: pg.kind,
                    fanin: Vec::new(),
                    fanout: out,
                });
            } else {
                // Placeholder keeps gate indices aligned with pending list.
                gates.push(Gate {
                    kind: pg.kind,
                    fanin: Vec::new(),
                    fanout: NetId(u32::MAX),
                });
            }
        }

        // Resolve fanins now that all drivers are declared.
        for (gi, pg) in self.gates.iter().enumerate() {
            let expected_unary = pg.kind.is_unary();
            if expected_unary && pg.fanin.len() != 1 {
                diags.push(Diagnostic::error(
                    format!(
                        "{} takes exactly 1 input, got {}",
                        pg.kind,
                        pg.fanin.len()
                    ),
                    pg.line,
                    pg.column,
                ));
                continue;
            }
            if !expected_unary && pg.fanin.len() < 2 {
                diags.push(Diagnostic::error(
                    format!(
                        "{} takes at least 2 inputs, got {}",
                        pg.kind,
                        pg.fanin.len()
                    ),
                    pg.line,
                    pg.column,
                ));
                continue;
            }
            let mut resolved = Vec::with_capacity(pg.fanin.len());
            for (name, line, column) in &pg.fanin {
                match by_name.get(name) {
                    Some(&id) => resolved.push(id),
                    None => diags.push(Diagnostic::error(
                        format!("net `{name}` is used as a fanin but never driven"),
                        *line,
                        *column,
                    )),
                }
            }
            if resolved.len() == pg.fanin.len() {
                gates[gi].fanin = resolved;
            }
        }

        let mut output_ids = Vec::new();
        let mut seen_outputs: HashMap<&str, ()> = HashMap::new();
        for (name, line, column) in &self.outputs {
            if seen_outputs.insert(name.as_str(), ()).is_some() {
                diags.push(Diagnostic::warning(
                    format!("net `{name}` is declared OUTPUT more than once"),
                    *line,
                    *column,
                ));
                continue;
            }
            match by_name.get(name) {
                Some(&id) => output_ids.push(id),
                None => diags.push(Diagnostic::error(
                    format!("output net `{name}` is never driven"),
                    *line,
                    *column,
                )),
            }
        }

        if diags.iter().any(Diagnostic::is_error) {
            return Err(diags);
        }

        let topo = match compute_topo(&nets, &gates) {
            Ok(t) => t,
            Err(net_on_cycle) => {
                let pg_line = self
                    .gates
                    .iter()
                    .find(|pg| pg.fanout == nets[net_on_cycle.index()].name)
                    .map(|pg| (pg.line, pg.column))
                    .unwrap_or((0, 0));
                diags.push(Diagnostic::error(
                    format!(
                        "combinational cycle through net `{}`",
                        nets[net_on_cycle.index()].name
                    ),
                    pg_line.0,
                    pg_line.1,
                ));
                return Err(diags);
            }
        };

        Ok(Circuit {
            name: self.name,
            nets,
            by_name,
            inputs: input_ids,
            outputs: output_ids,
            gates,
            topo,
        })
    }
}

/// Kahn's algorithm with a min-heap on the gate index, so ties always break
/// by declaration order. On a cycle, returns the fanout net of the
/// lowest-indexed gate stuck on it.
fn compute_topo(nets: &[Net], gates: &[Gate]) -> Result<Vec<u32>, NetId> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let mut indegree = vec![0u32; gates.len()];
    let mut dependents: Vec<Vec<u32>> = vec![Vec::new(); gates.len()];
    for (gi, gate) in gates.iter().enumerate() {
        for &f in &gate.fanin {
            if let Driver::Gate(d) = nets[f.index()].driver {
                indegree[gi] += 1;
                dependents[d as usize].push(gi as u32);
            }
        }
    }
    let mut ready: BinaryHeap<Reverse<u32>> = indegree
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d == 0)
        .map(|(gi, _)| Reverse(gi as u32))
        .collect();
    let mut order = Vec::with_capacity(gates.len());
    while let Some(Reverse(gi)) = ready.pop() {
        order.push(gi);
        for &dep in &dependents[gi as usize] {
            indegree[dep as usize] -= 1;
            if indegree[dep as usize] == 0 {
                ready.push(Reverse(dep));
            }
        }
    }
    if order.len() != gates.len() {
        let stuck = indegree
            .iter()
            .enumerate()
            .find(|&(_, &d)| d > 0)
            .map(|(gi, _)| gi)
            .expect("cycle implies a gate with positive indegree");
        return Err(gates[stuck].fanout);
    }
    Ok(order)
}

/// Suffix used for fresh nets introduced by [`binarize`].
pub const BINARIZE_SUFFIX: &str = "__b";

/// Rewrites every gate with more than two fanins into a left-to-right fold
/// of two-input gates of the base kind, with the complement (if any) applied
/// once as a trailing NOT. Two-input and unary gates are copied unchanged.
///
/// Fresh internal nets are named `<fanout>__b<i>` (bumped with `_<k>` on
/// collision). Inputs, outputs, and existing net names are preserved, so the
/// result is functionally equivalent and its outputs line up positionally.
pub fn binarize(c: &Circuit) -> Circuit {
    if c.is_binary() {
        return c.clone();
    }
    let mut used: HashMap<String, ()> = c.nets.iter().map(|n| (n.name.clone(), ())).collect();
    let fresh = |base: String, used: &mut HashMap<String, ()>| -> String {
        if used.insert(base.clone(), ()).is_none() {
            return base;
        }
        let mut k = 1usize;
        loop {
            let candidate = format!("{base}_{k}");
            if used.insert(candidate.clone(), ()).is_none() {
                return candidate;
            }
            k += 1;
        }
    };

    let mut b = CircuitBuilder::new(c.name().to_string());
    for &i in c.inputs() {
        b.input(c.net(i).name.clone());
    }
    for &o in c.outputs() {
        b.output(c.net(o).name.clone());
    }
    for gate in c.gates() {
        let fanout = c.net(gate.fanout).name.clone();
        let fanin_names: Vec<String> = gate
            .fanin
            .iter()
            .map(|&f| c.net(f).name.clone())
            .collect();
        if gate.kind.is_unary() || fanin_names.len() == 2 {
            let refs: Vec<&str> = fanin_names.iter().map(String::as_str).collect();
            b.gate(gate.kind, &refs, fanout);
            continue;
        }
        let base_kind = gate.kind.base();
        let complemented = gate.kind.is_complemented();
        let mut acc = fanin_names[0].clone();
        let stages = fanin_names.len() - 1;
        for (stage, next) in fanin_names[1..].iter().enumerate() {
            let last_stage = stage + 1 == stages;
            let out = if last_stage && !complemented {
                fanout.clone()
            } else {
                fresh(format!("{fanout}{BINARIZE_SUFFIX}{stage}"), &mut used)
            };
            b.gate(base_kind, &[acc.as_str(), next.as_str()], out.clone());
            acc = out;
        }
        if complemented {
            b.gate(GateKind::Not, &[acc.as_str()], fanout);
        }
    }
    b.finish()
        .expect("binarizing a valid circuit cannot introduce violations")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Circuit {
        let mut b = CircuitBuilder::new("chain");
        b.input("a").output("y");
        b.gate(GateKind::Not, &["a"], "m");
        b.gate(GateKind::Not, &["m"], "y");
        b.finish().unwrap()
    }

    #[test]
    fn topo_respects_chain_order() {
        let c = chain();
        let order: Vec<u32> = c.topo().to_vec();
        assert_eq!(order, vec![0, 1]);
    }

    #[test]
    fn topo_sorts_reverse_declarations() {
        // Gates declared consumer-first still come out dependency-sorted.
        let mut b = CircuitBuilder::new("rev");
        b.input("a").output("y");
        b.gate(GateKind::Not, &["m"], "y");
        b.gate(GateKind::Not, &["a"], "m");
        let c = b.finish().unwrap();
        assert_eq!(c.topo(), &[1, 0]);
        assert!(validate(&c).iter().all(|d| !d.is_error()));
    }

    #[test]
    fn topo_is_permutation_respecting_edges() {
        let c = chain();
        let diags = validate(&c);
        assert!(diags.iter().all(|d| !d.is_error()), "{diags:?}");
    }

    #[test]
    fn self_loop_is_a_cycle_error() {
        let mut b = CircuitBuilder::new("loop");
        b.input("a").output("y");
        b.gate(GateKind::And, &["a", "y"], "y");
        let errs = b.finish().unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("cycle")), "{errs:?}");
    }

    #[test]
    fn undriven_fanin_is_an_error() {
        let mut b = CircuitBuilder::new("undriven");
        b.input("a").output("y");
        b.gate(GateKind::And, &["a", "ghost"], "y");
        let errs = b.finish().unwrap_err();
        assert_eq!(errs.iter().filter(|d| d.is_error()).count(), 1);
        assert!(errs[0].message.contains("ghost"));
    }

    #[test]
    fn duplicate_driver_is_an_error() {
        let mut b = CircuitBuilder::new("dup");
        b.input("a").input("a").output("a");
        let errs = b.finish().unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("duplicate driver")));
    }

    #[test]
    fn unread_internal_net_warns() {
        let mut b = CircuitBuilder::new("dangling");
        b.input("a").output("y");
        b.gate(GateKind::Not, &["a"], "y");
        b.gate(GateKind::Not, &["a"], "unused");
        let c = b.finish().unwrap();
        let warnings: Vec<_> = validate(&c)
            .into_iter()
            .filter(|d| d.severity == Severity::Warning)
            .collect();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].message.contains("unused"));
    }

    #[test]
    fn binarize_leaves_binary_gates_alone() {
        let mut b = CircuitBuilder::new("bin2");
        b.input("a").input("b").output("y");
        b.gate(GateKind::Nand, &["a", "b"], "y");
        let c = b.finish().unwrap();
        let bz = binarize(&c);
        assert!(structurally_equal(&c, &bz));
    }

    #[test]
    fn binarize_folds_nand4_into_three_ands_and_a_not() {
        let mut b = CircuitBuilder::new("nand4");
        b.input("a").input("b").input("c").input("d").output("y");
        b.gate(GateKind::Nand, &["a", "b", "c", "d"], "y");
        let c = b.finish().unwrap();
        let bz = binarize(&c);
        let ands = bz.gates().iter().filter(|g| g.kind == GateKind::And).count();
        let nots = bz.gates().iter().filter(|g| g.kind == GateKind::Not).count();
        assert_eq!((ands, nots), (3, 1));
        assert!(bz.is_binary());
    }

    #[test]
    fn binarize_fresh_names_avoid_collisions() {
        let mut b = CircuitBuilder::new("collide");
        b.input("a").input("b").input("c").output("y");
        // Deliberately occupy the first fresh name binarize would pick.
        b.gate(GateKind::Buf, &["a"], "y__b0");
        b.gate(GateKind::And, &["a", "b", "c"], "y");
        let c = b.finish().unwrap();
        let bz = binarize(&c);
        assert!(bz.net_id("y__b0_1").is_some());
        assert!(validate(&bz).iter().all(|d| !d.is_error()));
    }
}
