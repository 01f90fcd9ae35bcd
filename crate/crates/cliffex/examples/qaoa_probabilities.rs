//! Sampling a QAOA circuit with the Clifford tail replaced by classical
//! bit flips.
//!
//!     cargo run --example qaoa_probabilities

use cliffex::absorb::{absorb_probabilities, postprocess_counts, CountsHistogram};
use cliffex::oracle::index_to_bits;
use cliffex::problems::{maxcut_terms, Graph, Schedule};
use cliffex::{extract, peephole, DenseOracle};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let schedule = Schedule {
        gammas: vec![0.7],
        betas: vec![0.35],
    };
    let terms = maxcut_terms(&Graph::triangle(), &schedule).unwrap();
    let r = extract(&terms).unwrap();
    let absorption = absorb_probabilities(&r.extracted).unwrap();
    let executed = absorption
        .executed_circuit(&peephole(&r.opt_circuit))
        .unwrap();
    println!(
        "native {} CNOTs, executed {} CNOTs, H on {:?}, classical network {:?}",
        r.stats.native_cnots,
        executed.cnot_count(),
        absorption.h_mask,
        absorption.network
    );

    // Sample the executed circuit as a device would.
    let oracle = DenseOracle::default();
    let probs = oracle.probabilities(&executed).unwrap();
    let dist = WeightedIndex::new(&probs).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shots = 4000;
    let raw = CountsHistogram::from_counts(
        3,
        (0..shots).map(|_| (index_to_bits(3, dist.sample(&mut rng)), 1)),
    )
    .unwrap();
    let fixed = postprocess_counts(&absorption, &raw).unwrap();

    let exact = oracle
        .probabilities(&r.opt_circuit.then(&r.extracted).unwrap())
        .unwrap();
    println!("bits  raw   fixed  fixed/shots  exact");
    for (i, p) in exact.iter().enumerate() {
        let bits = index_to_bits(3, i);
        println!(
            "{bits}  {:>4}  {:>5}  {:>11.4}  {p:.4}",
            raw.get(&bits),
            fixed.get(&bits),
            fixed.get(&bits) as f64 / shots as f64
        );
    }
}
