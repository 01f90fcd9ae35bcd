//! Absorbing the extracted Clifford into measurement.
//!
//! Expectation workloads rewrite each observable `O` to `C† O C`, measure the
//! rewritten string in its own basis and multiply the result by its sign.
//! Probability workloads require the Clifford to be an H layer followed by a
//! CNOT network: the H layer runs on the device and the network is replayed
//! classically on every measured bitstring.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::clifford::{decompose_h_cnot, CliffordGate, ConjugationTableau};
use crate::error::{Error, Result};
use crate::extract::basis_layer;
use crate::pauli::PauliString;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformedObservable {
    pub original: PauliString,
    pub transformed: PauliString,
    /// Gates appended before measurement so that `transformed` is read in
    /// the computational basis.
    #[serde(skip)]
    pub basis_layer: Vec<CliffordGate>,
}

impl TransformedObservable {
    pub fn sign(&self) -> f64 {
        self.transformed.sign().as_f64()
    }

    /// Qubits whose parity gives the (unsigned) transformed observable.
    pub fn measured_qubits(&self) -> Vec<usize> {
        self.transformed.support()
    }

    /// `circuit` followed by this observable's basis layer.
    pub fn measurement_circuit(&self, circuit: &Circuit) -> Result<Circuit> {
        let mut c = circuit.clone();
        c.extend(self.basis_layer.iter().map(|&g| Gate::from(g)))?;
        Ok(c)
    }
}

pub fn absorb_observables(
    tableau: &ConjugationTableau,
    observables: &[PauliString],
) -> Result<Vec<TransformedObservable>> {
    observables
        .iter()
        .map(|o| {
            let transformed = tableau.conjugate(o)?;
            Ok(TransformedObservable {
                original: o.clone(),
                basis_layer: basis_layer(&transformed),
                transformed,
            })
        })
        .collect()
}

/// `result_i = sign(transformed_i) · measured_i`
pub fn map_expectations(records: &[TransformedObservable], measured: &[f64]) -> Result<Vec<f64>> {
    if records.len() != measured.len() {
        return Err(Error::LengthMismatch {
            expected: records.len(),
            found: measured.len(),
        });
    }
    Ok(records
        .iter()
        .zip(measured)
        .map(|(r, m)| r.sign() * m)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ProbabilityAbsorption {
    pub h_mask: Vec<usize>,
    pub network: Vec<(usize, usize)>,
}

impl ProbabilityAbsorption {
    /// `optimized` followed by the H layer.
    pub fn executed_circuit(&self, optimized: &Circuit) -> Result<Circuit> {
        let mut c = optimized.clone();
        c.extend(self.h_mask.iter().map(|&q| Gate::H(q)))?;
        Ok(c)
    }

    fn apply(&self, bits: &mut [bool]) {
        for &(c, t) in &self.network {
            bits[t] ^= bits[c];
        }
    }
}

pub fn absorb_probabilities(extracted: &Circuit) -> Result<ProbabilityAbsorption> {
    let form = decompose_h_cnot(extracted)?;
    Ok(ProbabilityAbsorption {
        h_mask: form.h_mask,
        network: form.network,
    })
}

/// Measurement histogram; the leftmost character is qubit 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCounts", into = "RawCounts")]
pub struct CountsHistogram {
    n: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize)]
struct RawCounts {
    n: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl TryFrom<RawCounts> for CountsHistogram {
    type Error = Error;

    fn try_from(r: RawCounts) -> Result<Self> {
        let h = CountsHistogram::from_counts(r.n, r.counts)?;
        if h.shots != r.shots {
            return Err(Error::ShotMismatch {
                sum: h.shots,
                shots: r.shots,
            });
        }
        Ok(h)
    }
}

impl From<CountsHistogram> for RawCounts {
    fn from(h: CountsHistogram) -> Self {
        RawCounts {
            n: h.n,
            shots: h.shots,
            counts: h.counts,
        }
    }
}

fn check_bits(n: usize, bits: &str) -> Result<()> {
    if bits.len() != n {
        return Err(Error::BitstringLengthMismatch {
            bits: bits.to_string(),
            expected: n,
            found: bits.len(),
        });
    }
    if !bits.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::InvalidBitstring(bits.to_string()));
    }
    Ok(())
}

impl CountsHistogram {
    pub fn from_counts(n: usize, counts: impl IntoIterator<Item = (String, u64)>) -> Result<Self> {
        let mut merged = BTreeMap::new();
        for (bits, k) in counts {
            check_bits(n, &bits)?;
            *merged.entry(bits).or_insert(0) += k;
        }
        let shots = merged.values().sum();
        Ok(CountsHistogram {
            n,
            shots,
            counts: merged,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }
}

fn rewrite(pa: &ProbabilityAbsorption, bits: &str) -> String {
    let mut v: Vec<bool> = bits.bytes().map(|b| b == b'1').collect();
    pa.apply(&mut v);
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn check_network(pa: &ProbabilityAbsorption, n: usize) -> Result<()> {
    for &(c, t) in &pa.network {
        Gate::Cx(c, t).validate(n)?;
    }
    Ok(())
}

pub fn postprocess_counts(
    pa: &ProbabilityAbsorption,
    h: &CountsHistogram,
) -> Result<CountsHistogram> {
    check_network(pa, h.n)?;
    let mut out = BTreeMap::new();
    for (bits, &k) in &h.counts {
        *out.entry(rewrite(pa, bits)).or_insert(0) += k;
    }
    Ok(CountsHistogram {
        n: h.n,
        shots: h.shots,
        counts: out,
    })
}

/// Same rewrite on an exact distribution indexed with qubit 0 as the most
/// significant bit.
pub fn postprocess_distribution(pa: &ProbabilityAbsorption, probs: &[f64]) -> Result<Vec<f64>> {
    let n = probs.len().trailing_zeros() as usize;
    if !probs.len().is_power_of_two() {
        return Err(Error::InvalidSize);
    }
    check_network(pa, n)?;
    let mut out = vec![0.0; probs.len()];
    let mut bits = vec![false; n];
    for (idx, &p) in probs.iter().enumerate() {
        for (q, b) in bits.iter_mut().enumerate() {
            *b = idx >> (n - 1 - q) & 1 == 1;
        }
        pa.apply(&mut bits);
        let j = bits.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
        out[j] += p;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn hist(n: usize, pairs: &[(&str, u64)]) -> CountsHistogram {
        CountsHistogram::from_counts(n, pairs.iter().map(|(b, k)| (b.to_string(), *k))).unwrap()
    }

    #[test]
    fn observables() {
        let id = ConjugationTableau::identity(3).unwrap();
        let r = absorb_observables(&id, &[p("III")]).unwrap();
        assert_eq!(r[0].transformed, p("III"));
        assert!(r[0].basis_layer.is_empty());
        assert_eq!(r[0].sign(), 1.0);

        let mut t = ConjugationTableau::identity(3).unwrap();
        t.append_all((0..3).map(CliffordGate::H)).unwrap();
        let r = absorb_observables(&t, &[p("ZZZ"), p("YII")]).unwrap();
        assert_eq!(r[0].transformed, p("XXX"));
        assert_eq!(r[1].transformed, p("-YII"));
        assert_eq!(
            r[1].basis_layer,
            vec![CliffordGate::Sdg(0), CliffordGate::H(0)]
        );

        assert!(matches!(
            absorb_observables(&t, &[p("ZZ")]),
            Err(Error::LengthMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn expectations() {
        let mut t = ConjugationTableau::identity(1).unwrap();
        t.append(CliffordGate::H(0)).unwrap();
        let recs = absorb_observables(&t, &[p("Y"), p("Z")]).unwrap();
        assert_eq!(
            map_expectations(&recs, &[0.5, 0.0]).unwrap(),
            vec![-0.5, 0.0]
        );
        assert!(map_expectations(&recs, &[0.5]).is_err());
    }

    #[test]
    fn probability_absorption() {
        let empty = absorb_probabilities(&Circuit::new(2)).unwrap();
        assert_eq!(empty, ProbabilityAbsorption::default());
        let ok = Circuit::from_gates(2, [Gate::H(0), Gate::Cx(0, 1)]).unwrap();
        assert_eq!(
            absorb_probabilities(&ok).unwrap(),
            ProbabilityAbsorption {
                h_mask: vec![0],
                network: vec![(0, 1)]
            }
        );
        let bad = Circuit::from_gates(2, [Gate::Cx(0, 1), Gate::H(0)]).unwrap();
        assert!(matches!(
            absorb_probabilities(&bad),
            Err(Error::NotReducible { gate_index: 0 })
        ));
    }

    #[test]
    fn counts_rewrite() {
        let pa = ProbabilityAbsorption {
            h_mask: vec![],
            network: vec![(0, 1)],
        };
        let out = postprocess_counts(&pa, &hist(2, &[("10", 5)])).unwrap();
        assert_eq!(out.counts().len(), 1);
        assert_eq!(out.get("11"), 5);

        let zero = postprocess_counts(&pa, &hist(2, &[("00", 7)])).unwrap();
        assert_eq!(zero.get("00"), 7);

        let id = ProbabilityAbsorption::default();
        let h = hist(3, &[("101", 2), ("011", 3)]);
        assert_eq!(postprocess_counts(&id, &h).unwrap(), h);

        let wide = ProbabilityAbsorption {
            h_mask: vec![],
            network: vec![(0, 2)],
        };
        assert!(matches!(
            postprocess_counts(&wide, &hist(2, &[("10", 1)])),
            Err(Error::QubitOutOfRange { qubit: 2, n: 2 })
        ));
    }

    #[test]
    fn histogram_validation() {
        assert!(matches!(
            CountsHistogram::from_counts(2, [("101".to_string(), 1)]),
            Err(Error::BitstringLengthMismatch {
                expected: 2,
                found: 3,
                ..
            })
        ));
        assert!(matches!(
            CountsHistogram::from_counts(2, [("1x".to_string(), 1)]),
            Err(Error::InvalidBitstring(_))
        ));
        let bad: std::result::Result<CountsHistogram, _> =
            serde_json::from_str(r#"{"n":2,"shots":4,"counts":{"01":3}}"#);
        assert!(bad.is_err());
        let good: CountsHistogram =
            serde_json::from_str(r#"{"n":2,"shots":3,"counts":{"01":3}}"#).unwrap();
        assert_eq!(good.shots(), 3);
        assert_eq!(
            serde_json::to_string(&good).unwrap(),
            r#"{"n":2,"shots":3,"counts":{"01":3}}"#
        );
    }

    #[test]
    fn distribution_rewrite() {
        let pa = ProbabilityAbsorption {
            h_mask: vec![],
            network: vec![(0, 1)],
        };
        // index 2 = "10" -> "11" = 3
        assert_eq!(
            postprocess_distribution(&pa, &[0.1, 0.2, 0.3, 0.4]).unwrap(),
            vec![0.1, 0.2, 0.4, 0.3]
        );
    }
}
