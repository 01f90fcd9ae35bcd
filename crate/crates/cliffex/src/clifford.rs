//! Heisenberg-picture conjugation through Clifford circuits.
//!
//! [`ConjugationTableau`] stores the images `Φ(X_q)` and `Φ(Z_q)` of a
//! Clifford `D` given as a time-ordered gate log, where `Φ(P) = D P D†`.
//! During extraction `D` is the inverse of the Clifford moved to the end of
//! the circuit, so rewriting a downstream Pauli and absorbing an observable
//! are the same call.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    /// `(control, target)`
    Cx(usize, usize),
}

impl CliffordGate {
    pub fn inverse(self) -> Self {
        match self {
            CliffordGate::S(q) => CliffordGate::Sdg(q),
            CliffordGate::Sdg(q) => CliffordGate::S(q),
            g => g,
        }
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        Gate::from(*self).validate(n)
    }
}

impl PauliString {
    /// In-place `P ↦ g P g†`.
    pub fn conjugate_by(&mut self, g: CliffordGate) {
        match g {
            CliffordGate::H(q) => {
                if self.x_bit(q) && self.z_bit(q) {
                    self.negate();
                }
                self.swap_xz(q);
            }
            CliffordGate::S(q) => {
                let x = self.x_bit(q);
                if x && self.z_bit(q) {
                    self.negate();
                }
                self.xor_z(q, x);
            }
            CliffordGate::Sdg(q) => {
                let x = self.x_bit(q);
                if x && !self.z_bit(q) {
                    self.negate();
                }
                self.xor_z(q, x);
            }
            CliffordGate::Cx(c, t) => {
                let (xc, zc, xt, zt) = (self.x_bit(c), self.z_bit(c), self.x_bit(t), self.z_bit(t));
                if xc && zt && (xt == zc) {
                    self.negate();
                }
                self.xor_x(t, xc);
                self.xor_z(c, zt);
            }
        }
    }

    pub fn conjugated_by(mut self, gates: &[CliffordGate]) -> Self {
        for &g in gates {
            self.conjugate_by(g);
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugationTableau {
    n: usize,
    x_images: Vec<PauliString>,
    z_images: Vec<PauliString>,
    log: Vec<CliffordGate>,
}

impl ConjugationTableau {
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize);
        }
        Ok(ConjugationTableau {
            n,
            x_images: (0..n)
                .map(|q| PauliString::single(n, q, Letter::X))
                .collect(),
            z_images: (0..n)
                .map(|q| PauliString::single(n, q, Letter::Z))
                .collect(),
            log: Vec::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, q: usize) -> &PauliString {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliString {
        &self.z_images[q]
    }

    /// Rows in the order `Φ(X_0), .., Φ(X_{n-1}), Φ(Z_0), .., Φ(Z_{n-1})`.
    pub fn rows(&self) -> impl Iterator<Item = &PauliString> {
        self.x_images.iter().chain(&self.z_images)
    }

    pub fn gate_log(&self) -> &[CliffordGate] {
        &self.log
    }

    /// Extends `D` by `g` applied after it in time: `Φ'(P) = g Φ(P) g†`.
    pub fn append(&mut self, g: CliffordGate) -> Result<()> {
        g.validate(self.n)?;
        for row in self.x_images.iter_mut().chain(self.z_images.iter_mut()) {
            row.conjugate_by(g);
        }
        self.log.push(g);
        Ok(())
    }

    pub fn append_all(&mut self, gates: impl IntoIterator<Item = CliffordGate>) -> Result<()> {
        for g in gates {
            self.append(g)?;
        }
        Ok(())
    }

    pub fn with_gate(mut self, g: CliffordGate) -> Result<Self> {
        self.append(g)?;
        Ok(self)
    }

    /// `Φ(P) = D P D†`, assembled as a signed product of rows.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        if p.num_qubits() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        // P = sign * i^{#Y} * prod_q X_q^{x_q} Z_q^{z_q}
        let mut acc = PauliString::identity(self.n);
        let mut k = p.count_y() + if p.sign().is_negative() { 2 } else { 0 };
        for q in 0..self.n {
            if p.x_bit(q) {
                k += self.mul_row(&mut acc, &self.x_images[q]);
            }
            if p.z_bit(q) {
                k += self.mul_row(&mut acc, &self.z_images[q]);
            }
        }
        assert!(
            k.is_multiple_of(2),
            "conjugation produced a non-Hermitian phase i^{k}; tableau is corrupt"
        );
        Ok(acc.with_sign(Sign::from_negative(k % 4 == 2)))
    }

    fn mul_row(&self, acc: &mut PauliString, row: &PauliString) -> u32 {
        let k = acc.mul_letters_assign(row) as u32;
        k + if row.sign().is_negative() { 2 } else { 0 }
    }

    /// The Clifford `C = D†`: log reversed, each gate inverted.
    pub fn extracted_circuit(&self) -> Circuit {
        let gates = self.log.iter().rev().map(|g| Gate::from(g.inverse()));
        Circuit::from_gates(self.n, gates).expect("logged gates are validated on append")
    }

    /// Checks the symplectic relations between rows.
    pub fn is_consistent(&self) -> bool {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let xz = self.x_images[a].commutes_unchecked(&self.z_images[b]);
                if xz != (a != b) {
                    return false;
                }
                if a < b
                    && (!self.x_images[a].commutes_unchecked(&self.x_images[b])
                        || !self.z_images[a].commutes_unchecked(&self.z_images[b]))
                {
                    return false;
                }
            }
        }
        true
    }
}

/// A Clifford written as a Hadamard layer followed in time by a CNOT network.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HCnotForm {
    pub h_mask: Vec<usize>,
    pub network: Vec<(usize, usize)>,
}

impl HCnotForm {
    pub fn to_circuit(&self, n: usize) -> Result<Circuit> {
        let hs = self.h_mask.iter().map(|&q| Gate::H(q));
        let cxs = self.network.iter().map(|&(c, t)| Gate::Cx(c, t));
        Circuit::from_gates(n, hs.chain(cxs))
    }
}

/// Rewrites an H/CNOT circuit as `[H on h_mask]` then `[network]`.
///
/// Hadamards are pushed toward the start of the circuit. Walking backwards,
/// a CNOT whose both wires carry a pending H flips direction
/// (`CX(c,t) H⊗H = H⊗H CX(t,c)`), one with neither passes through. When
/// that sweep gets stuck (one pending H on a CNOT, or an S gate), the
/// circuit's tableau is inspected instead and the network is rebuilt by
/// Gaussian elimination; the sweep's error is returned if that fails too.
pub fn decompose_h_cnot(c: &Circuit) -> Result<HCnotForm> {
    match sweep(c) {
        Ok(form) => Ok(form),
        Err(e @ (Error::NotReducible { .. } | Error::NonHCnotGate { .. })) => {
            from_tableau(c).ok_or(e)
        }
        Err(e) => Err(e),
    }
}

fn sweep(c: &Circuit) -> Result<HCnotForm> {
    let n = c.num_qubits();
    let mut pending = vec![false; n];
    let mut network = Vec::new();
    for (idx, g) in c.gates().iter().enumerate().rev() {
        match *g {
            Gate::H(q) => pending[q] = !pending[q],
            Gate::Cx(ctl, tgt) => match (pending[ctl], pending[tgt]) {
                (true, true) => network.push((tgt, ctl)),
                (false, false) => network.push((ctl, tgt)),
                _ => return Err(Error::NotReducible { gate_index: idx }),
            },
            other => {
                return Err(Error::NonHCnotGate {
                    gate_index: idx,
                    name: other.name(),
                })
            }
        }
    }
    network.reverse();
    Ok(HCnotForm {
        h_mask: (0..n).filter(|&q| pending[q]).collect(),
        network,
    })
}

fn x_type(p: &PauliString) -> bool {
    !p.sign().is_negative() && (0..p.num_qubits()).all(|q| !p.z_bit(q))
}

fn z_type(p: &PauliString) -> bool {
    !p.sign().is_negative() && (0..p.num_qubits()).all(|q| !p.x_bit(q))
}

/// With `C = N·H_mask`, `C X_q C†` is `N X_q N†` (X-type) off the mask and
/// `N Z_q N†` (Z-type) on it, and the other way round for `Z_q`.
fn from_tableau(c: &Circuit) -> Option<HCnotForm> {
    let n = c.num_qubits();
    if n == 0 {
        return Some(HCnotForm::default());
    }
    let mut tab = ConjugationTableau::identity(n).ok()?;
    for g in c.gates() {
        tab.append(g.as_clifford()?).ok()?;
    }
    let mut h_mask = Vec::new();
    // columns[q] = x bits of N X_q N†
    let mut columns = Vec::with_capacity(n);
    for q in 0..n {
        let (xi, zi) = (tab.x_image(q), tab.z_image(q));
        if x_type(xi) && z_type(zi) {
            columns.push(xi.clone());
        } else if z_type(xi) && x_type(zi) {
            h_mask.push(q);
            columns.push(zi.clone());
        } else {
            return None;
        }
    }
    // a[row][col]; CX(c,t) acts as row t += row c
    let mut a: Vec<Vec<bool>> = (0..n)
        .map(|row| (0..n).map(|col| columns[col].x_bit(row)).collect())
        .collect();
    let mut ops = Vec::new();
    for j in 0..n {
        let pivot = (j..n).find(|&r| a[r][j])?;
        if pivot != j {
            row_add(&mut a, pivot, j);
            ops.push((pivot, j));
        }
        for i in 0..n {
            if i != j && a[i][j] {
                row_add(&mut a, j, i);
                ops.push((j, i));
            }
        }
    }
    ops.reverse();
    let form = HCnotForm {
        h_mask,
        network: ops,
    };
    // Z images (and signs) are implied for a valid Clifford; check anyway.
    let mut check = ConjugationTableau::identity(n).ok()?;
    for g in form.to_circuit(n).ok()?.gates() {
        check.append(g.as_clifford()?).ok()?;
    }
    (check.x_images == tab.x_images && check.z_images == tab.z_images).then_some(form)
}

fn row_add(a: &mut [Vec<bool>], src: usize, dst: usize) {
    for col in 0..a[src].len() {
        let v = a[src][col];
        a[dst][col] ^= v;
    }
}
