//! Dense reference simulation for small registers.
//!
//! Nothing here touches the tableau or the extractor: Pauli matrices are built
//! from letters and gates from their textbook matrices, so these routines can
//! falsify the symbolic machinery. Basis index convention: qubit 0 is the most
//! significant bit, matching bitstrings whose leftmost character is qubit 0.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};

pub const DEFAULT_MAX_QUBITS: usize = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major `2^n × 2^n` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseUnitary {
    pub fn identity(n: usize) -> Self {
        let dim = 1usize << n;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        DenseUnitary { n, data }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        let dim = self.dim();
        self.data[row * dim + col] = v;
    }

    pub fn scale(mut self, s: Complex64) -> Self {
        for v in &mut self.data {
            *v *= s;
        }
        self
    }

    pub fn add(&self, other: &DenseUnitary) -> Result<DenseUnitary> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(DenseUnitary { n: self.n, data })
    }

    fn check_dim(&self, other: &DenseUnitary) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &DenseUnitary) -> Result<DenseUnitary> {
        self.check_dim(other)?;
        let dim = self.dim();
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = self.data[i * dim + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * dim..(k + 1) * dim];
                let out = &mut data[i * dim..(i + 1) * dim];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(DenseUnitary { n: self.n, data })
    }

    pub fn adjoint(&self) -> DenseUnitary {
        let dim = self.dim();
        let mut out = self.clone();
        for i in 0..dim {
            for j in 0..dim {
                out.data[i * dim + j] = self.data[j * dim + i].conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &DenseUnitary) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint()
            .matmul(self)
            .and_then(|p| p.max_abs_diff(&DenseUnitary::identity(self.n)))
            .map(|d| d <= tol)
            .unwrap_or(false)
    }

    /// Applies `gate` on the left: `self ← G · self`.
    fn apply_gate(&mut self, gate: &Gate) {
        let dim = self.dim();
        for col in 0..dim {
            let mut column: Vec<Complex64> = (0..dim).map(|r| self.data[r * dim + col]).collect();
            apply_gate_to_state(self.n, &mut column, gate);
            for (r, v) in column.into_iter().enumerate() {
                self.data[r * dim + col] = v;
            }
        }
    }
}

fn bit_mask(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

fn apply_gate_to_state(n: usize, state: &mut [Complex64], gate: &Gate) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match *gate {
        Gate::H(q) => {
            let m = bit_mask(n, q);
            for i in 0..state.len() {
                if i & m == 0 {
                    let (a, b) = (state[i], state[i | m]);
                    state[i] = (a + b) * h;
                    state[i | m] = (a - b) * h;
                }
            }
        }
        Gate::S(q) | Gate::Sdg(q) | Gate::Rz(q, _) => {
            let (d0, d1) = match *gate {
                Gate::S(_) => (ONE, I),
                Gate::Sdg(_) => (ONE, -I),
                Gate::Rz(_, theta) => (
                    Complex64::from_polar(1.0, -theta / 2.0),
                    Complex64::from_polar(1.0, theta / 2.0),
                ),
                _ => unreachable!(),
            };
            let m = bit_mask(n, q);
            for (i, v) in state.iter_mut().enumerate() {
                *v *= if i & m == 0 { d0 } else { d1 };
            }
        }
        Gate::Cx(c, t) => {
            let (mc, mt) = (bit_mask(n, c), bit_mask(n, t));
            for i in 0..state.len() {
                if i & mc != 0 && i & mt == 0 {
                    state.swap(i, i | mt);
                }
            }
        }
    }
}

/// Dense simulator with a configurable qubit cap.
#[derive(Debug, Clone, Copy)]
pub struct DenseOracle {
    pub max_qubits: usize,
}

impl Default for DenseOracle {
    fn default() -> Self {
        DenseOracle {
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl DenseOracle {
    pub fn new(max_qubits: usize) -> Self {
        DenseOracle { max_qubits }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_qubits {
            return Err(Error::TooLarge {
                n,
                cap: self.max_qubits,
            });
        }
        Ok(())
    }

    /// Kronecker product of the letters, qubit 0 leftmost, sign included.
    pub fn pauli_matrix(&self, p: &PauliString) -> Result<DenseUnitary> {
        let n = p.num_qubits();
        self.check(n)?;
        let dim = 1usize << n;
        let mut out = DenseUnitary {
            n,
            data: vec![ZERO; dim * dim],
        };
        let sign = p.sign().as_f64();
        // Each column has exactly one non-zero entry.
        for col in 0..dim {
            let mut row = col;
            let mut amp = Complex64::new(sign, 0.0);
            for q in 0..n {
                let m = bit_mask(n, q);
                let bit = col & m != 0;
                match p.letter(q) {
                    Letter::I => {}
                    Letter::X => row ^= m,
                    Letter::Y => {
                        row ^= m;
                        amp *= if bit { -I } else { I };
                    }
                    Letter::Z => {
                        if bit {
                            amp = -amp;
                        }
                    }
                }
            }
            out.data[row * dim + col] = amp;
        }
        Ok(out)
    }

    /// `exp(i t P) = cos(t)·1 + i sin(t)·P`.
    pub fn rotation_unitary(&self, p: &PauliString, t: f64) -> Result<DenseUnitary> {
        let pm = self.pauli_matrix(p)?;
        let id = DenseUnitary::identity(p.num_qubits()).scale(Complex64::new(t.cos(), 0.0));
        id.add(&pm.scale(Complex64::new(0.0, t.sin())))
    }

    /// Product of rotations, first term applied first.
    pub fn product_unitary<'a>(
        &self,
        n: usize,
        terms: impl IntoIterator<Item = (&'a PauliString, f64)>,
    ) -> Result<DenseUnitary> {
        self.check(n)?;
        let mut u = DenseUnitary::identity(n);
        for (p, t) in terms {
            u = self.rotation_unitary(p, t)?.matmul(&u)?;
        }
        Ok(u)
    }

    pub fn circuit_unitary(&self, c: &Circuit) -> Result<DenseUnitary> {
        self.check(c.num_qubits())?;
        let mut u = DenseUnitary::identity(c.num_qubits());
        for g in c.gates() {
            u.apply_gate(g);
        }
        Ok(u)
    }

    /// `|ψ⟩ = C|0…0⟩`.
    pub fn statevector(&self, c: &Circuit) -> Result<Vec<Complex64>> {
        let n = c.num_qubits();
        self.check(n)?;
        let mut state = vec![ZERO; 1 << n];
        state[0] = ONE;
        for g in c.gates() {
            apply_gate_to_state(n, &mut state, g);
        }
        Ok(state)
    }

    pub fn probabilities(&self, c: &Circuit) -> Result<Vec<f64>> {
        Ok(self.statevector(c)?.iter().map(|a| a.norm_sqr()).collect())
    }

    pub fn expectation(&self, c: &Circuit, o: &PauliString) -> Result<f64> {
        if o.num_qubits() != c.num_qubits() {
            return Err(Error::LengthMismatch {
                expected: c.num_qubits(),
                found: o.num_qubits(),
            });
        }
        let psi = self.statevector(c)?;
        Ok(expectation_in_state(&self.pauli_matrix(o)?, &psi))
    }
}

/// `⟨ψ|M|ψ⟩`, real part.
pub fn expectation_in_state(m: &DenseUnitary, psi: &[Complex64]) -> f64 {
    let dim = m.dim();
    let mut acc = ZERO;
    for (i, a) in psi.iter().enumerate() {
        let mut row = ZERO;
        for (j, b) in psi.iter().enumerate() {
            row += m.data[i * dim + j] * b;
        }
        acc += a.conj() * row;
    }
    acc.re
}

pub fn apply_unitary(u: &DenseUnitary, psi: &[Complex64]) -> Vec<Complex64> {
    let dim = u.dim();
    (0..dim)
        .map(|i| (0..dim).map(|j| u.data[i * dim + j] * psi[j]).sum())
        .collect()
}

/// True iff `max |u − e^{iφ} v| ≤ tol`, with `φ` taken from the
/// largest-magnitude entry of `v`.
pub fn equivalent_up_to_phase(u: &DenseUnitary, v: &DenseUnitary, tol: f64) -> Result<bool> {
    u.check_dim(v)?;
    let (idx, _) = v.data.iter().enumerate().fold((0, -1.0), |best, (i, z)| {
        if z.norm() > best.1 {
            (i, z.norm())
        } else {
            best
        }
    });
    let (a, b) = (u.data[idx], v.data[idx]);
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return Ok(false);
    }
    let phase = (a / b) / (a / b).norm();
    Ok(u.data
        .iter()
        .zip(&v.data)
        .all(|(x, y)| (x - phase * y).norm() <= tol))
}

/// Basis-state index → bitstring, leftmost character = qubit 0.
pub fn index_to_bits(n: usize, index: usize) -> String {
    (0..n)
        .map(|q| {
            if index & bit_mask(n, q) != 0 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub fn bits_to_index(bits: &str) -> usize {
    bits.bytes()
        .fold(0, |acc, b| (acc << 1) | (b == b'1') as usize)
}
