//! Native vs optimized CNOT counts on the standard QAOA benchmarks.
//!
//!     cargo run --release --example benchmarks

use std::time::Instant;

use cliffex::circuit::peephole;
use cliffex::extract::{extract, native_cnots};
use cliffex::pauli::PauliTerm;
use cliffex::problems::{labs_terms, maxcut_terms, random_graph, regular_graph, Schedule};

fn row(name: &str, terms: &[PauliTerm]) {
    let start = Instant::now();
    let r = extract(terms).expect("generated terms are valid");
    let opt = peephole(&r.opt_circuit);
    println!(
        "{name:<22} {:>6} {:>8} {:>8} {:>8} {:>9.3}s",
        terms.len(),
        native_cnots(terms),
        opt.cnot_count(),
        opt.entangling_depth(),
        start.elapsed().as_secs_f64()
    );
}

fn main() {
    let one = Schedule::default_for(1);
    println!(
        "{:<22} {:>6} {:>8} {:>8} {:>8} {:>10}",
        "benchmark", "terms", "native", "cnots", "depth", "time"
    );
    for seed in [1, 2, 3] {
        for (n, d) in [(15, 4), (20, 4), (20, 8), (20, 12)] {
            let g = regular_graph(n, d, seed).unwrap();
            row(
                &format!("maxcut n{n} r{d} s{seed}"),
                &maxcut_terms(&g, &one).unwrap(),
            );
        }
    }
    for (n, e) in [(10, 12), (20, 117)] {
        let g = random_graph(n, e, 1).unwrap();
        row(
            &format!("maxcut n{n} e{e}"),
            &maxcut_terms(&g, &one).unwrap(),
        );
    }
    for n in [10, 15, 20] {
        row(&format!("labs n{n}"), &labs_terms(n, &one).unwrap());
    }
}
