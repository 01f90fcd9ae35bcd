//! Clifford extraction for a product of Pauli rotations.
//!
//! Every rotation `exp(i t P)` is synthesized as a basis-change layer, a CNOT
//! parity tree, an RZ on the tree root, then the mirror of the first two.
//! Only the left half is emitted. The right half is commuted to the end of the
//! circuit, which rewrites every later Pauli; that rewrite is tracked by a
//! [`ConjugationTableau`] holding the inverse of the extracted Clifford, so
//! the left half is simply appended to it.
//!
//! Qubits inside a subtree are connected in descending index order and the
//! lowest index becomes the subtree root.

use log::warn;

use crate::circuit::{Circuit, Gate};
use crate::clifford::{CliffordGate, ConjugationTableau};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString, PauliTerm};

/// Consecutive run of mutually commuting terms. Terms may be reordered
/// inside a block, never across blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct CommuteBlock {
    pub terms: Vec<PauliTerm>,
}

impl CommuteBlock {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn check_uniform(terms: &[PauliTerm]) -> Result<usize> {
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
    Ok(n)
}

/// Greedy left-to-right partition into commuting blocks.
pub fn convert_commute_sets(terms: &[PauliTerm]) -> Result<Vec<CommuteBlock>> {
    check_uniform(terms)?;
    let mut blocks: Vec<CommuteBlock> = Vec::new();
    for t in terms {
        match blocks.last_mut() {
            Some(b) if b.terms.iter().all(|m| m.pauli.commutes_unchecked(&t.pauli)) => {
                b.terms.push(t.clone())
            }
            _ => blocks.push(CommuteBlock {
                terms: vec![t.clone()],
            }),
        }
    }
    Ok(blocks)
}

/// How multi-qubit subtrees are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeMode {
    /// Chain every subtree; only the next Pauli guides the shape.
    Chain,
    /// Split subtrees again using the Paulis further down the sequence.
    Recursive,
}

/// A CNOT parity tree: applying `gates` in order moves the parity of all
/// tree qubits onto `root`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnotTree {
    pub gates: Vec<(usize, usize)>,
    pub root: usize,
}

impl CnotTree {
    pub fn clifford_gates(&self) -> impl Iterator<Item = CliffordGate> + '_ {
        self.gates.iter().map(|&(c, t)| CliffordGate::Cx(c, t))
    }
}

/// Lazily conjugated guidance Paulis `paulis[start + depth]`.
struct Guidance<'a> {
    paulis: &'a [PauliString],
    tableau: &'a ConjugationTableau,
    start: usize,
    cache: Vec<Option<PauliString>>,
}

impl<'a> Guidance<'a> {
    fn new(paulis: &'a [PauliString], tableau: &'a ConjugationTableau, start: usize) -> Self {
        Guidance {
            paulis,
            tableau,
            start,
            cache: Vec::new(),
        }
    }

    fn letter(&mut self, depth: usize, q: usize) -> Option<Letter> {
        let idx = self.start + depth;
        if idx >= self.paulis.len() {
            return None;
        }
        if self.cache.len() <= depth {
            self.cache.resize(depth + 1, None);
        }
        if self.cache[depth].is_none() {
            let p = self
                .tableau
                .conjugate(&self.paulis[idx])
                .expect("guidance Paulis share the tableau width");
            self.cache[depth] = Some(p);
        }
        self.cache[depth].as_ref().map(|p| p.letter(q))
    }

    fn available(&self, depth: usize) -> bool {
        self.start + depth < self.paulis.len()
    }
}

/// Appends a chain over `qubits` in descending order; returns the root.
fn chain(qubits: &[usize], gates: &mut Vec<(usize, usize)>) -> usize {
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    for w in sorted.windows(2) {
        gates.push((w[0], w[1]));
    }
    *sorted.last().expect("chain over a non-empty set")
}

/// Roots awaiting connection, grouped by the guidance letter of their
/// subtree and kept in descending index order; the last one is the anchor.
#[derive(Default)]
struct Roots {
    z: Vec<usize>,
    i: Vec<usize>,
    y: Vec<usize>,
    x: Vec<usize>,
}

impl Roots {
    fn class(&mut self, l: Letter) -> &mut Vec<usize> {
        match l {
            Letter::Z => &mut self.z,
            Letter::I => &mut self.i,
            Letter::Y => &mut self.y,
            Letter::X => &mut self.x,
        }
    }

    /// Connects Z→Y, I→X and Y→X, then feeds leftovers into the final root
    /// (priority X > Y > I > Z).
    fn connect(mut self, gates: &mut Vec<(usize, usize)>) -> usize {
        for v in [&mut self.z, &mut self.i, &mut self.y, &mut self.x] {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        if let Some(&y) = self.y.last() {
            for z in self.z.drain(..) {
                gates.push((z, y));
            }
        }
        if let Some(&x) = self.x.last() {
            for i in self.i.drain(..) {
                gates.push((i, x));
            }
        }
        let pairs = self.y.len().min(self.x.len());
        for k in 1..=pairs {
            gates.push((self.y[self.y.len() - k], self.x[self.x.len() - k]));
        }
        self.y.truncate(self.y.len() - pairs);

        let root = *[&self.x, &self.y, &self.i, &self.z]
            .into_iter()
            .find_map(|v| v.last())
            .expect("at least one root");
        for r in self.z.iter().chain(&self.i).chain(&self.y).chain(&self.x) {
            if *r != root {
                gates.push((*r, root));
            }
        }
        root
    }
}

fn build_tree(
    guidance: &mut Guidance<'_>,
    depth: usize,
    idxs: &[usize],
    mode: TreeMode,
    gates: &mut Vec<(usize, usize)>,
) -> usize {
    if idxs.len() == 1 {
        return idxs[0];
    }
    if !guidance.available(depth) {
        return chain(idxs, gates);
    }
    let mut groups: [(Letter, Vec<usize>); 4] = [
        (Letter::X, Vec::new()),
        (Letter::Y, Vec::new()),
        (Letter::Z, Vec::new()),
        (Letter::I, Vec::new()),
    ];
    for &q in idxs {
        let l = guidance.letter(depth, q).expect("checked above");
        groups
            .iter_mut()
            .find(|(g, _)| *g == l)
            .expect("all letters covered")
            .1
            .push(q);
    }
    let mut roots = Roots::default();
    for (letter, members) in groups {
        match members.len() {
            0 => {}
            1 => roots.class(letter).push(members[0]),
            _ => match mode {
                TreeMode::Chain => {
                    let r = chain(&members, gates);
                    roots.class(letter).push(r);
                }
                TreeMode::Recursive if guidance.available(depth + 1) => {
                    let r = build_tree(guidance, depth + 1, &members, mode, gates);
                    roots.class(letter).push(r);
                }
                // Nothing further down to order this subtree by: its qubits
                // are connected directly at this level.
                TreeMode::Recursive => roots.class(letter).extend(members),
            },
        }
    }
    roots.connect(gates)
}

/// Synthesizes the CNOT tree over `tree_idxs` for the Pauli at `p_idx`.
///
/// `paulis` holds the raw (not yet rewritten) sequence; the Paulis after
/// `p_idx` are conjugated through `tableau` on demand and used to shape the
/// tree. `tableau` must already contain the basis layer of the current Pauli.
pub fn tree_synthesis(
    paulis: &[PauliString],
    p_idx: usize,
    tree_idxs: &[usize],
    tableau: &ConjugationTableau,
    mode: TreeMode,
) -> Result<CnotTree> {
    if tree_idxs.is_empty() {
        return Err(Error::EmptyTree);
    }
    let n = tableau.num_qubits();
    if let Some(&q) = tree_idxs.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange { qubit: q, n });
    }
    let mut guidance = Guidance::new(paulis, tableau, p_idx + 1);
    let mut gates = Vec::with_capacity(tree_idxs.len() - 1);
    let root = build_tree(&mut guidance, 0, tree_idxs, mode, &mut gates);
    Ok(CnotTree { gates, root })
}

/// Tree shaped by a single already-rewritten guidance Pauli, chaining
/// every subtree.
pub fn chain_tree_for(tree_idxs: &[usize], guide: &PauliString) -> Result<CnotTree> {
    if tree_idxs.is_empty() {
        return Err(Error::EmptyTree);
    }
    let n = guide.num_qubits();
    let id = ConjugationTableau::identity(n)?;
    let single = std::slice::from_ref(guide);
    let mut guidance = Guidance::new(single, &id, 0);
    let mut gates = Vec::new();
    let root = build_tree(&mut guidance, 0, tree_idxs, TreeMode::Chain, &mut gates);
    Ok(CnotTree { gates, root })
}

/// Basis change taking each letter of `p` to Z: `X: [H]`, `Y: [SDG, H]`.
pub fn basis_layer(p: &PauliString) -> Vec<CliffordGate> {
    let mut out = Vec::new();
    for q in 0..p.num_qubits() {
        match p.letter(q) {
            Letter::X => out.push(CliffordGate::H(q)),
            Letter::Y => {
                out.push(CliffordGate::Sdg(q));
                out.push(CliffordGate::H(q));
            }
            Letter::I | Letter::Z => {}
        }
    }
    out
}

/// Picks the Pauli in `paulis[p_idx+1..block_end]` whose rewritten form is
/// lightest once the current Pauli's chained tree is extracted. `current`
/// is the current Pauli after its basis layer (all Z/I), and `tableau`
/// includes that layer. Ties go to the earliest index.
pub fn find_next_pauli(
    paulis: &[PauliString],
    p_idx: usize,
    block_end: usize,
    current: &PauliString,
    tableau: &ConjugationTableau,
) -> Result<usize> {
    let support = current.support();
    let mut best = (usize::MAX, p_idx + 1);
    let end = block_end.min(paulis.len());
    for (j, raw) in paulis.iter().enumerate().take(end).skip(p_idx + 1) {
        let cand = tableau.conjugate(raw)?;
        let score = if support.is_empty() {
            cand.weight()
        } else {
            let tree = chain_tree_for(&support, &cand)?;
            cand.conjugated_by(&tree.clifford_gates().collect::<Vec<_>>())
                .weight()
        };
        if score < best.0 {
            best = (score, j);
        }
    }
    Ok(best.1)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExtractionStats {
    pub rotations: usize,
    pub blocks: usize,
    pub skipped_identity: usize,
    /// `Σ 2(w−1)` over the input terms.
    pub native_cnots: usize,
    pub emitted_cnots: usize,
    /// Input indices of the terms in the order they were synthesized.
    pub order: Vec<usize>,
    /// Weight of each synthesized term after rewriting, in emission order.
    pub rewritten_weights: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ExtractionResult {
    /// The part that is executed.
    pub opt_circuit: Circuit,
    /// Map `P ↦ U_CL† P U_CL`.
    pub tableau: ConjugationTableau,
    /// `U_CL`, to be applied after `opt_circuit`.
    pub extracted: Circuit,
    pub stats: ExtractionStats,
}

/// Native CNOT cost of a V-shaped rotation circuit.
pub fn native_cnots(terms: &[PauliTerm]) -> usize {
    terms
        .iter()
        .map(|t| 2 * t.pauli.weight().saturating_sub(1))
        .sum()
}

/// Textbook circuit: for each term, basis layer, descending CNOT chain,
/// RZ on the lowest support qubit, then the mirror image.
pub fn native_circuit(terms: &[PauliTerm]) -> Result<Circuit> {
    let n = check_uniform(terms)?;
    let mut c = Circuit::new(n);
    for t in terms {
        let support = t.pauli.support();
        let Some(&root) = support.first() else {
            continue;
        };
        let basis = basis_layer(&t.pauli);
        let mut ladder = Vec::new();
        chain(&support, &mut ladder);
        c.extend(basis.iter().map(|&g| Gate::from(g)))?;
        c.extend(ladder.iter().map(|&(a, b)| Gate::Cx(a, b)))?;
        c.push(Gate::Rz(root, -2.0 * t.coeff * t.pauli.sign().as_f64()))?;
        c.extend(ladder.iter().rev().map(|&(a, b)| Gate::Cx(a, b)))?;
        c.extend(basis.iter().rev().map(|&g| Gate::from(g.inverse())))?;
    }
    Ok(c)
}

pub fn extract(terms: &[PauliTerm]) -> Result<ExtractionResult> {
    let n = check_uniform(terms)?;
    let mut stats = ExtractionStats {
        native_cnots: native_cnots(terms),
        ..Default::default()
    };

    let mut kept = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        if t.pauli.is_identity() {
            warn!("term {i} is the identity; it only contributes a global phase and is skipped");
            stats.skipped_identity += 1;
        } else {
            kept.push((i, t.clone()));
        }
    }

    let mut tableau = ConjugationTableau::identity(n)?;
    let mut opt = Circuit::new(n);
    if kept.is_empty() {
        return Ok(ExtractionResult {
            extracted: tableau.extracted_circuit(),
            opt_circuit: opt,
            tableau,
            stats,
        });
    }

    let only: Vec<PauliTerm> = kept.iter().map(|(_, t)| t.clone()).collect();
    let blocks = convert_commute_sets(&only)?;
    stats.blocks = blocks.len();

    let mut order: Vec<usize> = kept.iter().map(|(i, _)| *i).collect();
    let mut paulis: Vec<PauliString> = only.iter().map(|t| t.pauli.clone()).collect();
    let mut coeffs: Vec<f64> = only.iter().map(|t| t.coeff).collect();

    let mut block_start = 0;
    for block in &blocks {
        let block_end = block_start + block.len();
        for pos in block_start..block_end {
            let current = tableau.conjugate(&paulis[pos])?;
            let basis = basis_layer(&current);
            tableau.append_all(basis.iter().copied())?;
            let current = current.conjugated_by(&basis);

            if pos + 1 < block_end {
                let next = find_next_pauli(&paulis, pos, block_end, &current, &tableau)?;
                if next != pos + 1 {
                    let p = paulis.remove(next);
                    paulis.insert(pos + 1, p);
                    let c = coeffs.remove(next);
                    coeffs.insert(pos + 1, c);
                    let o = order.remove(next);
                    order.insert(pos + 1, o);
                }
            }

            let support = current.support();
            let tree = tree_synthesis(&paulis, pos, &support, &tableau, TreeMode::Recursive)?;
            let tree_gates: Vec<CliffordGate> = tree.clifford_gates().collect();
            let reduced = current.clone().conjugated_by(&tree_gates);
            debug_assert!(
                reduced.weight() == 1 && reduced.letter(tree.root) == Letter::Z,
                "tree did not reduce {current} to Z on {}",
                tree.root
            );

            opt.extend(basis.iter().map(|&g| Gate::from(g)))?;
            opt.extend(tree_gates.iter().map(|&g| Gate::from(g)))?;
            // exp(i t s Z) = RZ(-2 t s)
            opt.push(Gate::Rz(
                tree.root,
                -2.0 * coeffs[pos] * reduced.sign().as_f64(),
            ))?;
            tableau.append_all(tree_gates)?;

            stats.rewritten_weights.push(support.len());
            stats.emitted_cnots += tree.gates.len();
        }
        block_start = block_end;
    }

    stats.rotations = paulis.len();
    stats.order = order;
    Ok(ExtractionResult {
        extracted: tableau.extracted_circuit(),
        opt_circuit: opt,
        tableau,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn terms(words: &[&str]) -> Vec<PauliTerm> {
        words
            .iter()
            .map(|w| PauliTerm::parse(w, 0.1).unwrap())
            .collect()
    }

    fn apply(tree: &CnotTree, guide: &PauliString) -> PauliString {
        guide
            .clone()
            .conjugated_by(&tree.clifford_gates().collect::<Vec<_>>())
    }

    #[test]
    fn commute_sets() {
        let b = convert_commute_sets(&terms(&["ZZZZ", "YYXX"])).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].len(), 2);

        assert_eq!(convert_commute_sets(&terms(&["Z", "X"])).unwrap().len(), 2);

        let b = convert_commute_sets(&terms(&["ZZI", "IZZ", "ZIZ", "XII", "IXI", "IIX"])).unwrap();
        let words: Vec<Vec<String>> = b
            .iter()
            .map(|b| b.terms.iter().map(|t| t.pauli.to_string()).collect())
            .collect();
        assert_eq!(words, [["ZZI", "IZZ", "ZIZ"], ["XII", "IXI", "IIX"]]);

        assert!(matches!(
            convert_commute_sets(&terms(&["ZZ", "Z"])),
            Err(Error::MixedQubitCounts { index: 1, .. })
        ));
        assert!(matches!(convert_commute_sets(&[]), Err(Error::EmptyTerms)));
    }

    #[test]
    fn singleton_tree() {
        let id = ConjugationTableau::identity(7).unwrap();
        let tree = tree_synthesis(&[p("IIIIIZI")], 0, &[5], &id, TreeMode::Recursive).unwrap();
        assert_eq!(
            tree,
            CnotTree {
                gates: vec![],
                root: 5
            }
        );
        assert!(matches!(
            tree_synthesis(
                &[p("Z")],
                0,
                &[],
                &ConjugationTableau::identity(1).unwrap(),
                TreeMode::Chain
            ),
            Err(Error::EmptyTree)
        ));
    }

    #[test]
    fn chain_without_guidance_roots_at_lowest_index() {
        let id = ConjugationTableau::identity(4).unwrap();
        let tree =
            tree_synthesis(&[p("ZZZZ")], 0, &[0, 1, 2, 3], &id, TreeMode::Recursive).unwrap();
        assert_eq!(tree.gates, vec![(3, 2), (2, 1), (1, 0)]);
        assert_eq!(tree.root, 0);
        assert_eq!(apply(&tree, &p("ZZZZ")), p("ZIII"));
    }

    #[test]
    fn root_connection_kills_z_into_y_and_y_into_x() {
        // guidance letters: Z Z Y X I on qubits 0..5
        let tree = chain_tree_for(&[0, 1, 2, 3, 4], &p("ZZYXI")).unwrap();
        assert_eq!(tree.root, 3);
        assert_eq!(tree.gates.len(), 4);
        assert_eq!(apply(&tree, &p("ZZYXI")), p("IIYII"));
        assert_eq!(apply(&tree, &p("ZZZZZ")).weight(), 1);
    }

    #[test]
    fn seven_qubit_trees() {
        // Current Pauli already in the Z basis; the next two rewritten Paulis follow.
        let seq = [p("ZZZZZZZ"), p("ZZZIXYX"), p("YZYXIYX")];
        let id = ConjugationTableau::identity(7).unwrap();
        let all: Vec<usize> = (0..7).collect();

        let flat = tree_synthesis(&seq, 0, &all, &id, TreeMode::Chain).unwrap();
        assert_eq!(flat.gates.len(), 6);
        assert_eq!(apply(&flat, &seq[1]), p("IIIIXYX"));
        assert_eq!(apply(&flat, &seq[0]).weight(), 1);

        let deep = tree_synthesis(&seq, 0, &all, &id, TreeMode::Recursive).unwrap();
        assert_eq!(
            deep.gates,
            vec![(4, 6), (1, 0), (2, 0), (0, 5), (3, 6), (5, 6)]
        );
        assert_eq!(deep.root, 6);
        assert_eq!(apply(&deep, &seq[1]), p("IIIIXYX"));
        assert_eq!(apply(&deep, &seq[2]).unsigned(), p("IIXXIYX"));
        assert!(apply(&flat, &seq[2]).weight() > 4);
    }

    #[test]
    fn next_pauli_prefers_lighter_candidate() {
        let id = ConjugationTableau::identity(3).unwrap();
        // ZZI is reduced to one qubit by the tree on {0,1}; XXX keeps weight 2.
        let seq = [p("ZZI"), p("XXX"), p("ZZI")];
        assert_eq!(find_next_pauli(&seq, 0, 3, &p("ZZI"), &id).unwrap(), 2);
        // Block end stops the search.
        assert_eq!(find_next_pauli(&seq, 0, 2, &p("ZZI"), &id).unwrap(), 1);
        // Ties keep the earliest candidate.
        let seq = [p("ZZI"), p("XYI"), p("ZZI")];
        assert_eq!(find_next_pauli(&seq, 0, 3, &p("ZZI"), &id).unwrap(), 1);
    }

    #[test]
    fn native_cost() {
        let ts = [
            PauliTerm::parse("ZZZZ", 0.3).unwrap(),
            PauliTerm::parse("YYXX", 0.7).unwrap(),
        ];
        let c = native_circuit(&ts).unwrap();
        assert_eq!(c.cnot_count(), 12);
        assert_eq!(native_cnots(&ts), 12);
    }

    #[test]
    fn single_zz_term() {
        let r = extract(&[PauliTerm::parse("ZZ", 0.3).unwrap()]).unwrap();
        assert_eq!(r.opt_circuit.gates(), &[Gate::Cx(1, 0), Gate::Rz(0, -0.6)]);
        assert_eq!(r.extracted.gates(), &[Gate::Cx(1, 0)]);
    }

    #[test]
    fn negative_sign_flips_angle() {
        let r = extract(&[PauliTerm::parse("-ZZ", 0.3).unwrap()]).unwrap();
        assert_eq!(r.opt_circuit.gates()[1], Gate::Rz(0, 0.6));
    }

    #[test]
    fn identity_terms_are_skipped() {
        let r = extract(&[
            PauliTerm::parse("II", 0.3).unwrap(),
            PauliTerm::parse("XI", 0.2).unwrap(),
        ])
        .unwrap();
        assert_eq!(r.stats.skipped_identity, 1);
        assert_eq!(r.stats.order, vec![1]);
        assert_eq!(r.opt_circuit.gates(), &[Gate::H(0), Gate::Rz(0, -0.4)]);
    }

    #[test]
    fn motivating_pair_costs_four_cnots() {
        let r = extract(&[
            PauliTerm::parse("ZZZZ", 0.3).unwrap(),
            PauliTerm::parse("YYXX", 0.7).unwrap(),
        ])
        .unwrap();
        assert_eq!(r.opt_circuit.cnot_count(), 4);
        assert_eq!(r.stats.rewritten_weights, vec![4, 2]);
    }
}
