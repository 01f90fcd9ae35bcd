//! How every two-qubit Pauli changes when a CNOT is moved past it.
//!
//!     cargo run --example conjugation_table

use cliffex::{CliffordGate, ConjugationTableau, PauliString};

fn main() {
    let mut tab = ConjugationTableau::identity(2).unwrap();
    tab.append(CliffordGate::Cx(0, 1)).unwrap();

    println!("control,target  P -> P'");
    for a in "IXYZ".chars() {
        for b in "IXYZ".chars() {
            let p: PauliString = format!("{a}{b}").parse().unwrap();
            let image = tab.conjugate(&p).unwrap();
            let marker = if image.weight() < p.weight() {
                "  (reduced)"
            } else {
                ""
            };
            println!("  {p} -> {image:>3}{marker}");
        }
    }
}
