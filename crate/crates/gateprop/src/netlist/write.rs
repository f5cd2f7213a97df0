//! Netlist emission: `.bench` text and a structural Verilog subset.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::Circuit;

/// Serializes a circuit back to `.bench` text.
///
/// Layout: INPUT lines in declaration order, OUTPUT lines, then one gate
/// assignment per gate in declaration order. Reparsing the result yields a
/// structurally equal circuit.
pub fn write_bench(c: &Circuit) -> String {
    write_bench_with_header(c, &[])
}

/// Same as [`write_bench`] with leading `#` comment lines (one per entry).
pub fn write_bench_with_header(c: &Circuit, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    if !header.is_empty() {
        out.push('\n');
    }
    for &i in c.inputs() {
        let _ = writeln!(out, "INPUT({})", c.net(i).name);
    }
    out.push('\n');
    for &o in c.outputs() {
        let _ = writeln!(out, "OUTPUT({})", c.net(o).name);
    }
    out.push('\n');
    for gate in c.gates() {
        let args: Vec<&str> = gate.fanin.iter().map(|&f| c.net(f).name.as_str()).collect();
        let _ = writeln!(
            out,
            "{} = {}({})",
            c.net(gate.fanout).name,
            gate.kind.name(),
            args.join(", ")
        );
    }
    out
}

/// Verilog keywords that a mangled identifier must not collide with.
const VERILOG_KEYWORDS: &[&str] = &[
    "always", "and", "assign", "begin", "buf", "bufif0", "bufif1", "case", "casex", "casez",
    "default", "defparam", "else", "end", "endcase", "endfunction", "endmodule", "endtask", "for",
    "forever", "function", "if", "initial", "inout", "input", "integer", "module", "nand",
    "negedge", "nor", "not", "notif0", "notif1", "or", "output", "parameter", "posedge", "reg",
    "repeat", "signed", "supply0", "supply1", "task", "tri", "tri0", "tri1", "wand", "while",
    "wire", "wor", "xnor", "xor",
];

/// Maps an arbitrary net name to a legal Verilog identifier, injectively.
///
/// Encoding, character by character:
/// - ASCII alphanumerics pass through unchanged;
/// - `_` doubles to `__`;
/// - any other character becomes `_x` plus its two-digit uppercase hex code
///   (below U+0100) or `_u` plus six hex digits (otherwise).
///
/// If the encoded string is empty, starts with a digit, or equals a Verilog
/// keyword, it is prefixed with `n_`. The prefix cannot collide with an
/// unprefixed encoding: a lone `_` in encoded output is always followed by
/// `_`, `x`, or `u`, so no encoding starts with `n_` followed by a digit or
/// keyword body. Distinct names therefore always map to distinct
/// identifiers.
pub fn mangle_verilog_ident(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' => out.push(c),
            '_' => out.push_str("__"),
            other => {
                let code = other as u32;
                if code < 0x100 {
                    let _ = write!(out, "_x{code:02X}");
                } else {
                    let _ = write!(out, "_u{code:06X}");
                }
            }
        }
    }
    let needs_prefix = out.is_empty()
        || out.chars().next().is_some_and(|c| c.is_ascii_digit())
        || VERILOG_KEYWORDS.contains(&out.as_str());
    if needs_prefix {
        format!("n_{out}")
    } else {
        out
    }
}

/// Emits the circuit as a single structural Verilog module.
///
/// Only `wire` declarations and gate primitive instantiations are used.
/// Ports are listed inputs first, then outputs, in declaration order. A net
/// that is both a primary input and a primary output is observed through a
/// fresh buffered output port.
pub fn write_verilog(c: &Circuit) -> String {
    write_verilog_with_header(c, &[])
}

/// Same as [`write_verilog`] with leading `//` comment lines.
pub fn write_verilog_with_header(c: &Circuit, header: &[String]) -> String {
    let mangled: Vec<String> = c
        .nets()
        .iter()
        .map(|n| mangle_verilog_ident(&n.name))
        .collect();
    let mut used: HashSet<String> = mangled.iter().cloned().collect();
    assert_eq!(
        used.len(),
        mangled.len(),
        "identifier mangling must be injective"
    );

    let input_set: HashSet<u32> = c.inputs().iter().map(|i| i.0).collect();
    let output_set: HashSet<u32> = c.outputs().iter().map(|o| o.0).collect();

    // A PI that is also declared as a PO needs a distinct observation port.
    let mut observed: Vec<(u32, String)> = Vec::new();
    for &o in c.outputs() {
        if input_set.contains(&o.0) {
            let mut candidate = format!("{}_obs", mangled[o.index()]);
            let mut k = 1usize;
            while used.contains(&candidate) {
                candidate = format!("{}_obs{}", mangled[o.index()], k);
                k += 1;
            }
            used.insert(candidate.clone());
            observed.push((o.0, candidate));
        }
    }
    let observed_name = |net: u32| -> Option<&str> {
        observed
            .iter()
            .find(|(n, _)| *n == net)
            .map(|(_, s)| s.as_str())
    };

    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "// {line}");
    }
    let mut ports: Vec<String> = c.inputs().iter().map(|&i| mangled[i.index()].clone()).collect();
    for &o in c.outputs() {
        match observed_name(o.0) {
            Some(obs) => ports.push(obs.to_string()),
            None => ports.push(mangled[o.index()].clone()),
        }
    }
    let _ = writeln!(
        out,
        "module {} ({});",
        mangle_verilog_ident(c.name()),
        ports.join(", ")
    );
    for &i in c.inputs() {
        let _ = writeln!(out, "  input {};", mangled[i.index()]);
    }
    for &o in c.outputs() {
        match observed_name(o.0) {
            Some(obs) => {
                let _ = writeln!(out, "  output {obs};");
            }
            None => {
                let _ = writeln!(out, "  output {};", mangled[o.index()]);
            }
        }
    }
    for id in 0..c.nets().len() as u32 {
        if input_set.contains(&id) || output_set.contains(&id) {
            continue;
        }
        let _ = writeln!(out, "  wire {};", mangled[id as usize]);
    }
    for (gi, gate) in c.gates().iter().enumerate() {
        let mut pins: Vec<&str> = vec![&mangled[gate.fanout.index()]];
        for &f in &gate.fanin {
            pins.push(&mangled[f.index()]);
        }
        let _ = writeln!(
            out,
            "  {} g{} ({});",
            gate.kind.verilog_primitive(),
            gi,
            pins.join(", ")
        );
    }
    for (i, (net, obs)) in observed.iter().enumerate() {
        let _ = writeln!(out, "  buf obs{} ({}, {});", i, obs, mangled[*net as usize]);
    }
    let _ = writeln!(out, "endmodule");
    out
}
