//! Generate synthesizable propagation (shadow) logic for a netlist and
//! emit it as `.bench` and structural Verilog.
//!
//! ```bash
//! cargo run --example instrument_shadow
//! ```

use gateprop::instrument::{instrument, instrument_with_mode, EmitFormat, ShadowMode};
use gateprop::netlist::{parse_bench, parse_bench_with, ParseOptions};
use gateprop::rules::Technique;

fn main() {
    // A single AND gate makes the shadow structures easy to read.
    let and2 = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(o)\no = AND(a, b)")
        .into_result()
        .unwrap()
        .renamed("and2");

    println!("── value-blind shadow for one AND gate ──");
    println!("(one OR over the label inputs; values are ignored)\n");
    print!("{}", instrument(&and2, Technique::ImpreciseIft).emit(EmitFormat::Bench));

    println!("\n── value-aware shadow for one AND gate ──");
    println!("(o_l = a·b_l + b·a_l + a_l·b_l)\n");
    print!("{}", instrument(&and2, Technique::PreciseIft).emit(EmitFormat::Bench));

    println!("\n── masking-aware shadow: differential structure ──");
    println!("(flip labeled inputs, re-evaluate, compare both worlds)\n");
    print!("{}", instrument(&and2, Technique::PreciseFpa).emit(EmitFormat::Bench));

    println!("\n── the same, as structural Verilog ──\n");
    print!("{}", instrument(&and2, Technique::ImpreciseIft).emit(EmitFormat::Verilog));

    // Shadow-only mode produces a runtime monitor: original nets become
    // value-tap inputs, and only label logic is emitted.
    println!("\n── shadow-only monitor for the AND gate ──\n");
    let monitor = instrument_with_mode(&and2, Technique::PreciseIft, ShadowMode::ShadowOnly);
    print!("{}", monitor.emit(EmitFormat::Bench));

    // Size behavior on a real netlist.
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/testdata/c17.bench");
    let c17 = parse_bench_with(
        &std::fs::read_to_string(path).unwrap(),
        &ParseOptions {
            name: "c17".into(),
            ..Default::default()
        },
    )
    .into_result()
    .unwrap();

    println!("\n── shadow size on c17 ({} gates) ──", c17.num_gates());
    println!("  technique       shadow gates  per original gate");
    for tech in Technique::ALL {
        let ic = instrument(&c17, tech);
        println!(
            "  {:<14} {:>12}  {:>17.2}",
            tech.slug(),
            ic.shadow_gate_count(),
            ic.shadow_gate_count() as f64 / c17.num_gates() as f64
        );
    }
}
