//! Shaping a CNOT tree so that the next Paulis in the sequence shrink too.
//!
//!     cargo run --example tree_synthesis

use cliffex::clifford::ConjugationTableau;
use cliffex::extract::{basis_layer, tree_synthesis, TreeMode};
use cliffex::{CliffordGate, PauliString};

fn main() {
    let seq: Vec<PauliString> = ["YZXXYZZ", "YZXIZYX", "XZYZIYX"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();

    // Move the first Pauli's single-qubit layer to the end first.
    let mut tab = ConjugationTableau::identity(7).unwrap();
    tab.append_all(basis_layer(&seq[0])).unwrap();
    let current = tab.conjugate(&seq[0]).unwrap();
    let next: Vec<PauliString> = seq[1..].iter().map(|p| tab.conjugate(p).unwrap()).collect();
    println!("after the basis layer: {current}, {}, {}", next[0], next[1]);

    for mode in [TreeMode::Chain, TreeMode::Recursive] {
        let tree = tree_synthesis(&seq, 0, &current.support(), &tab, mode).unwrap();
        let gates: Vec<CliffordGate> = tree.clifford_gates().collect();
        println!("\n{mode:?} tree, root q{}: {:?}", tree.root, tree.gates);
        for p in &next {
            println!("  {p} -> {}", p.clone().conjugated_by(&gates));
        }
    }
}
