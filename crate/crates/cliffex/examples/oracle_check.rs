//! Cross-checks extraction against dense matrices on random rotation lists.
//!
//!     cargo run --release --example oracle_check -- 500

use cliffex::oracle::equivalent_up_to_phase;
use cliffex::{extract, peephole, DenseOracle, Letter, PauliString, PauliTerm, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let cases: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(100);
    let oracle = DenseOracle::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    let (mut saved, mut native) = (0, 0);
    for case in 0..cases {
        let n = rng.gen_range(1..=6);
        let terms: Vec<PauliTerm> = (0..rng.gen_range(1..=12))
            .map(|_| {
                let ls: Vec<Letter> = (0..n).map(|_| letters[rng.gen_range(0..4)]).collect();
                let sign = Sign::from_negative(rng.gen_bool(0.5));
                PauliTerm::new(
                    PauliString::from_letters(&ls, sign),
                    rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
                )
                .unwrap()
            })
            .collect();
        let r = extract(&terms).unwrap();
        let opt = peephole(&r.opt_circuit);
        let want = oracle
            .product_unitary(n, terms.iter().map(|t| (&t.pauli, t.coeff)))
            .unwrap();
        let got = oracle
            .circuit_unitary(&opt.then(&r.extracted).unwrap())
            .unwrap();
        if !equivalent_up_to_phase(&want, &got, 1e-9).unwrap() {
            eprintln!("case {case} differs: {terms:?}");
            std::process::exit(1);
        }
        native += r.stats.native_cnots;
        saved += r.stats.native_cnots - opt.cnot_count().min(r.stats.native_cnots);
    }
    println!("{cases} random lists match; {saved} of {native} native CNOTs removed");
}
