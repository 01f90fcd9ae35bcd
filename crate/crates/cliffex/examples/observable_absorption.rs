//! Expectation values without running the Clifford tail.
//!
//! The two rotations need 12 CNOTs as written. After extraction the circuit
//! keeps 4, and the observable is rewritten to absorb the rest.
//!
//!     cargo run --example observable_absorption

use cliffex::absorb::{absorb_observables, map_expectations};
use cliffex::oracle::{apply_unitary, expectation_in_state};
use cliffex::{extract, peephole, DenseOracle, PauliString, PauliTerm};
use num_complex::Complex64;

fn main() {
    let terms = [
        PauliTerm::parse("ZZZZ", 0.4).unwrap(),
        PauliTerm::parse("YYXX", -0.9).unwrap(),
    ];
    let observables: Vec<PauliString> = ["XXZZ", "YXXX", "XYYY", "ZZII"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();

    let r = extract(&terms).unwrap();
    let optimized = peephole(&r.opt_circuit);
    println!(
        "CNOTs: {} native, {} optimized",
        r.stats.native_cnots,
        optimized.cnot_count()
    );
    println!("{}", optimized.to_qasm());

    let records = absorb_observables(&r.tableau, &observables).unwrap();
    let oracle = DenseOracle::default();

    // Stand-in for the device: exact expectations of the rewritten strings.
    let measured: Vec<f64> = records
        .iter()
        .map(|rec| {
            oracle
                .expectation(&optimized, &rec.transformed.unsigned())
                .unwrap()
        })
        .collect();
    let mapped = map_expectations(&records, &measured).unwrap();

    let full = oracle
        .product_unitary(4, terms.iter().map(|t| (&t.pauli, t.coeff)))
        .unwrap();
    let mut zero = vec![Complex64::new(0.0, 0.0); 16];
    zero[0] = Complex64::new(1.0, 0.0);
    let psi = apply_unitary(&full, &zero);

    for (rec, value) in records.iter().zip(mapped) {
        let exact = expectation_in_state(&oracle.pauli_matrix(&rec.original).unwrap(), &psi);
        println!(
            "{} -> {:>6}  measured {value:+.6}  exact {exact:+.6}",
            rec.original,
            rec.transformed.to_string()
        );
    }
}
