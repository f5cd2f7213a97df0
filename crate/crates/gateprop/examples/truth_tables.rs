//! Print the per-gate label propagation truth tables at each precision
//! level, and show where the levels disagree.
//!
//! ```bash
//! cargo run --example truth_tables
//! ```

use gateprop::netlist::GateKind;
use gateprop::rules::{rule_truth_table, Technique};

fn main() {
    let techniques = [
        Technique::ImpreciseIft,
        Technique::PreciseIft,
        Technique::PreciseFpa,
    ];

    for kind in [GateKind::And, GateKind::Or, GateKind::Xor] {
        println!("── {kind}: output label per (a, b, a_l, b_l) ──");
        println!("  a b a_l b_l │ level 0  level 1  level 2");
        println!("  ────────────┼──────────────────────────");
        let tables: Vec<_> = techniques
            .iter()
            .map(|&t| rule_truth_table(kind, t))
            .collect();
        for i in 0..16 {
            let row = tables[0][i];
            let marks: Vec<&str> = tables
                .iter()
                .map(|t| if t[i].out_label { "1" } else { "0" })
                .collect();
            let disagree = marks.iter().any(|&m| m != marks[0]);
            println!(
                "  {} {}  {}   {}  │    {}        {}        {}   {}",
                row.a as u8,
                row.b as u8,
                row.a_label as u8,
                row.b_label as u8,
                marks[0],
                marks[1],
                marks[2],
                if disagree { "<- differs" } else { "" }
            );
        }
        println!();
    }

    println!("── complemented kinds share their base rules ──");
    for (comp, base) in [
        (GateKind::Nand, GateKind::And),
        (GateKind::Nor, GateKind::Or),
        (GateKind::Xnor, GateKind::Xor),
    ] {
        let same = techniques.iter().all(|&t| {
            rule_truth_table(comp, t)
                .iter()
                .zip(rule_truth_table(base, t).iter())
                .all(|(a, b)| a.out_label == b.out_label)
        });
        println!("  {comp} == {base} at every level: {same}");
    }

    println!("\n── label counts per 16-row table ──");
    println!("  kind   level0  level1  level2");
    for kind in GateKind::BINARY {
        let counts: Vec<usize> = techniques
            .iter()
            .map(|&t| {
                rule_truth_table(kind, t)
                    .iter()
                    .filter(|r| r.out_label)
                    .count()
            })
            .collect();
        println!(
            "  {:<6} {:>5}  {:>6}  {:>6}",
            kind.name(),
            counts[0],
            counts[1],
            counts[2]
        );
    }
    println!("\nFewer labeled rows = fewer false positives; level 2 is exact for faults.");
}
