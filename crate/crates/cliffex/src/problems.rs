//! Benchmark term lists: QAOA for MaxCut and LABS, plus the JSON input format.

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString, PauliTerm, Sign};

/// Simple undirected graph with sorted `(u, v)` edges, `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::Schema(format!("self-loop on node {u}")));
            }
            if let Some(q) = [u, v].into_iter().find(|&q| q >= nodes) {
                return Err(Error::QubitOutOfRange { qubit: q, n: nodes });
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(Graph { nodes, edges: out })
    }

    pub fn triangle() -> Self {
        Graph {
            nodes: 3,
            edges: vec![(0, 1), (1, 2), (0, 2)],
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }
}

/// Uniform-ish random `degree`-regular graph by stub pairing. Bad pairs
/// (self-loops, repeated edges) are redrawn; a stuck attempt restarts.
pub fn regular_graph(nodes: usize, degree: usize, seed: u64) -> Result<Graph> {
    if degree >= nodes || (nodes * degree) % 2 == 1 {
        return Err(Error::InfeasibleDegree { nodes, degree });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: loop {
        let mut stubs: Vec<usize> = (0..nodes)
            .flat_map(|v| std::iter::repeat_n(v, degree))
            .collect();
        let mut edges = std::collections::BTreeSet::new();
        while !stubs.is_empty() {
            let mut placed = false;
            for _ in 0..100 {
                let i = rng.gen_range(0..stubs.len());
                let j = rng.gen_range(0..stubs.len());
                let (u, v) = (stubs[i], stubs[j]);
                if i == j || u == v || edges.contains(&(u.min(v), u.max(v))) {
                    continue;
                }
                edges.insert((u.min(v), u.max(v)));
                let (hi, lo) = (i.max(j), i.min(j));
                stubs.swap_remove(hi);
                stubs.swap_remove(lo);
                placed = true;
                break;
            }
            if !placed {
                continue 'attempt;
            }
        }
        return Ok(Graph {
            nodes,
            edges: edges.into_iter().collect(),
        });
    }
}

/// Uniformly random graph with exactly `edges` edges.
pub fn random_graph(nodes: usize, edges: usize, seed: u64) -> Result<Graph> {
    let all: Vec<(usize, usize)> = (0..nodes)
        .flat_map(|u| (u + 1..nodes).map(move |v| (u, v)))
        .collect();
    if edges > all.len() {
        return Err(Error::InfeasibleEdges { nodes, edges });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<(usize, usize)> = all.choose_multiple(&mut rng, edges).copied().collect();
    chosen.sort_unstable();
    Ok(Graph {
        nodes,
        edges: chosen,
    })
}

/// Per-layer angles. Missing values default to `γ = 0.2·(layer+1)`, `β = 0.4`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Schedule {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl Schedule {
    pub fn default_for(layers: usize) -> Self {
        Schedule {
            gammas: (0..layers).map(|l| 0.2 * (l + 1) as f64).collect(),
            betas: vec![0.4; layers],
        }
    }

    pub fn layers(&self) -> usize {
        self.gammas.len()
    }

    fn check(&self) -> Result<()> {
        if self.gammas.len() != self.betas.len() {
            return Err(Error::LengthMismatch {
                expected: self.gammas.len(),
                found: self.betas.len(),
            });
        }
        Ok(())
    }
}

fn z_word(n: usize, qubits: &[usize]) -> PauliString {
    let mut p = PauliString::identity(n);
    for &q in qubits {
        p.set(q, Letter::Z);
    }
    p
}

fn mixer(n: usize, beta: f64, out: &mut Vec<PauliTerm>) {
    for q in 0..n {
        out.push(PauliTerm {
            pauli: PauliString::single(n, q, Letter::X),
            coeff: beta,
        });
    }
}

/// Per layer: one `ZZ` term (coefficient γ) per edge in edge order, then one
/// `X` term (coefficient β) per node.
pub fn maxcut_terms(graph: &Graph, schedule: &Schedule) -> Result<Vec<PauliTerm>> {
    schedule.check()?;
    let n = graph.nodes;
    if n == 0 {
        return Err(Error::InvalidSize);
    }
    let mut out = Vec::new();
    for (&g, &b) in schedule.gammas.iter().zip(&schedule.betas) {
        for &(u, v) in &graph.edges {
            out.push(PauliTerm {
                pauli: z_word(n, &[u, v]),
                coeff: g,
            });
        }
        mixer(n, b, &mut out);
    }
    Ok(out)
}

/// Distinct non-identity Z strings of `Σ_k (Σ_i Z_i Z_{i+k})²` with their
/// integer multiplicities, in first-appearance order.
pub fn labs_hamiltonian(n: usize) -> Result<Vec<(Vec<usize>, u64)>> {
    if n < 3 {
        return Err(Error::InvalidSize);
    }
    let mut order: Vec<Vec<usize>> = Vec::new();
    let mut mult: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for k in 1..n {
        for i in 0..n - k {
            for j in 0..n - k {
                // Z_i Z_{i+k} Z_j Z_{j+k}, with Z² = 1
                let mut qs = [i, i + k, j, j + k];
                qs.sort_unstable();
                let mut support = Vec::with_capacity(4);
                let mut idx = 0;
                while idx < 4 {
                    if idx + 1 < 4 && qs[idx] == qs[idx + 1] {
                        idx += 2;
                    } else {
                        support.push(qs[idx]);
                        idx += 1;
                    }
                }
                if support.is_empty() {
                    continue;
                }
                let e = mult.entry(support.clone()).or_insert(0);
                if *e == 0 {
                    order.push(support);
                }
                *e += 1;
            }
        }
    }
    Ok(order
        .into_iter()
        .map(|s| {
            let m = mult[&s];
            (s, m)
        })
        .collect())
}

pub fn labs_terms(n: usize, schedule: &Schedule) -> Result<Vec<PauliTerm>> {
    schedule.check()?;
    let ham = labs_hamiltonian(n)?;
    let mut out = Vec::new();
    for (&g, &b) in schedule.gammas.iter().zip(&schedule.betas) {
        for (support, m) in &ham {
            out.push(PauliTerm {
                pauli: z_word(n, support),
                coeff: g * *m as f64,
            });
        }
        mixer(n, b, &mut out);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemKind {
    MaxcutRegular { degree: usize },
    MaxcutRandom { edges: usize },
    MaxcutGraph(Graph),
    Labs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub nodes: usize,
    pub seed: u64,
    pub schedule: Schedule,
}

impl ProblemSpec {
    pub fn graph(&self) -> Result<Option<Graph>> {
        Ok(match &self.kind {
            ProblemKind::MaxcutRegular { degree } => {
                Some(regular_graph(self.nodes, *degree, self.seed)?)
            }
            ProblemKind::MaxcutRandom { edges } => {
                Some(random_graph(self.nodes, *edges, self.seed)?)
            }
            ProblemKind::MaxcutGraph(g) => Some(g.clone()),
            ProblemKind::Labs => None,
        })
    }

    pub fn terms(&self) -> Result<Vec<PauliTerm>> {
        match self.graph()? {
            Some(g) => maxcut_terms(&g, &self.schedule),
            None => labs_terms(self.nodes, &self.schedule),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Observables,
    Probabilities,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Observables => "observables",
            Mode::Probabilities => "probabilities",
        }
    }
}

/// Validated input file.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub num_qubits: usize,
    pub terms: Vec<PauliTerm>,
    pub observables: Vec<PauliString>,
    pub mode: Mode,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    pauli: String,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    num_qubits: usize,
    terms: Vec<RawTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    observables: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
}

fn parse_word(field: &str, text: &str, n: usize, index: usize) -> Result<PauliString> {
    let p = PauliString::parse(text).map_err(|e| Error::Schema(format!("{field}: {e}")))?;
    if p.num_qubits() != n {
        return Err(Error::MixedQubitCounts {
            index,
            expected: n,
            found: p.num_qubits(),
        });
    }
    Ok(p)
}

impl Problem {
    pub fn new(
        terms: Vec<PauliTerm>,
        observables: Vec<PauliString>,
        mode: Option<Mode>,
    ) -> Result<Self> {
        let n = terms.first().ok_or(Error::EmptyTerms)?.num_qubits();
        for (index, t) in terms.iter().enumerate() {
            if t.num_qubits() != n {
                return Err(Error::MixedQubitCounts {
                    index,
                    expected: n,
                    found: t.num_qubits(),
                });
            }
        }
        for o in &observables {
            if o.num_qubits() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: o.num_qubits(),
                });
            }
        }
        let mode = mode.unwrap_or(if observables.is_empty() {
            Mode::Probabilities
        } else {
            Mode::Observables
        });
        Ok(Problem {
            num_qubits: n,
            terms,
            observables,
            mode,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawProblem =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let n = raw.num_qubits;
        if n == 0 {
            return Err(Error::Schema("num_qubits must be positive".into()));
        }
        if raw.terms.is_empty() {
            return Err(Error::EmptyTerms);
        }
        let mut terms = Vec::with_capacity(raw.terms.len());
        for (i, t) in raw.terms.iter().enumerate() {
            let pauli = parse_word(&format!("terms[{i}].pauli"), &t.pauli, n, i)?;
            let term = PauliTerm::new(pauli, t.coeff)
                .map_err(|e| Error::Schema(format!("terms[{i}].coeff: {e}")))?;
            terms.push(term);
        }
        let mut observables = Vec::new();
        for (i, o) in raw.observables.unwrap_or_default().iter().enumerate() {
            let p = PauliString::parse(o)
                .map_err(|e| Error::Schema(format!("observables[{i}]: {e}")))?;
            if p.num_qubits() != n {
                return Err(Error::Schema(format!(
                    "observables[{i}]: {} qubits, expected {n}",
                    p.num_qubits()
                )));
            }
            observables.push(p);
        }
        if raw.mode == Some(Mode::Observables) && observables.is_empty() {
            return Err(Error::Schema(
                "mode \"observables\" needs a non-empty \"observables\" list".into(),
            ));
        }
        Problem::new(terms, observables, raw.mode)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Problem::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let raw = RawProblem {
            num_qubits: self.num_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| RawTerm {
                    pauli: t.pauli.to_string(),
                    coeff: t.coeff,
                })
                .collect(),
            observables: (!self.observables.is_empty())
                .then(|| self.observables.iter().map(|o| o.to_string()).collect()),
            mode: Some(self.mode),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }
}

/// `Z` on every qubit with the given sign; handy default observable.
pub fn all_z(n: usize, sign: Sign) -> PauliString {
    z_word(n, &(0..n).collect::<Vec<_>>()).with_sign(sign)
}
