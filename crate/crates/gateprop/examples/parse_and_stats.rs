//! Parse a `.bench` netlist, inspect its structure, and see how parse
//! and validation diagnostics are reported.
//!
//! ```bash
//! cargo run --example parse_and_stats
//! ```

use gateprop::netlist::{parse_bench, parse_bench_with, validate, Driver, GateKind, ParseOptions};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/testdata/c17.bench");
    let text = std::fs::read_to_string(path).expect("bundled netlist");

    let circuit = parse_bench_with(
        &text,
        &ParseOptions {
            name: "c17".to_string(),
            ..Default::default()
        },
    )
    .into_result()
    .expect("c17 parses cleanly");

    println!("── {} ──", circuit.name());
    println!("inputs:  {:?}", names(&circuit, circuit.inputs()));
    println!("outputs: {:?}", names(&circuit, circuit.outputs()));
    println!("gates:   {}", circuit.num_gates());
    for kind in GateKind::ALL {
        let n = circuit.gates().iter().filter(|g| g.kind == kind).count();
        if n > 0 {
            println!("  {kind}: {n}");
        }
    }

    println!("\nTopological evaluation order (gate output nets):");
    let order: Vec<&str> = circuit
        .topo_gates()
        .map(|g| circuit.net(g.fanout).name.as_str())
        .collect();
    println!("  {}", order.join(" -> "));

    println!("\nDrivers:");
    for net in circuit.nets() {
        match net.driver {
            Driver::Input(pos) => println!("  {} <- primary input #{pos}", net.name),
            Driver::Gate(gi) => {
                let gate = &circuit.gates()[gi as usize];
                let fanin: Vec<&str> = gate
                    .fanin
                    .iter()
                    .map(|&f| circuit.net(f).name.as_str())
                    .collect();
                println!("  {} <- {}({})", net.name, gate.kind, fanin.join(", "));
            }
        }
    }

    let warnings = validate(&circuit);
    println!("\nvalidate: {} finding(s)", warnings.len());

    // Malformed input never panics; it reports located diagnostics.
    println!("\n── diagnostics demo ──");
    let broken = "INPUT(a)\nOUTPUT(y)\ny = AND(a, ghost)\nz = MAJ(a, a, a)\nw = AND(a, w)";
    let result = parse_bench(broken);
    for d in &result.diagnostics {
        println!("  {d}");
    }
    assert!(result.circuit.is_none());
}

fn names(c: &gateprop::netlist::Circuit, ids: &[gateprop::netlist::NetId]) -> Vec<String> {
    ids.iter().map(|&n| c.net(n).name.clone()).collect()
}
