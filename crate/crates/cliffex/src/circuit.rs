//! Gate-level circuits over {H, S, SDG, CNOT, RZ}.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::clifford::CliffordGate;
use crate::error::{Error, Result};

/// RZ angles below this magnitude are dropped by [`peephole`].
pub const ANGLE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    Cx(usize, usize),
    /// `RZ(theta) = exp(-i theta Z / 2)`.
    Rz(usize, f64),
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Rz(q, _) => (q, None),
            Gate::Cx(c, t) => (c, Some(t)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::Cx(..) => "cx",
            Gate::Rz(..) => "rz",
        }
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cx(..))
    }

    pub fn as_clifford(&self) -> Option<CliffordGate> {
        match *self {
            Gate::H(q) => Some(CliffordGate::H(q)),
            Gate::S(q) => Some(CliffordGate::S(q)),
            Gate::Sdg(q) => Some(CliffordGate::Sdg(q)),
            Gate::Cx(c, t) => Some(CliffordGate::Cx(c, t)),
            Gate::Rz(..) => None,
        }
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        let (a, b) = self.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
        }
        match *self {
            Gate::Cx(c, t) if c == t => Err(Error::SameControlTarget(c)),
            Gate::Rz(_, theta) if !theta.is_finite() => Err(Error::NonFiniteAngle(theta)),
            _ => Ok(()),
        }
    }
}

impl From<CliffordGate> for Gate {
    fn from(g: CliffordGate) -> Self {
        match g {
            CliffordGate::H(q) => Gate::H(q),
            CliffordGate::S(q) => Gate::S(q),
            CliffordGate::Sdg(q) => Gate::Sdg(q),
            CliffordGate::Cx(c, t) => Gate::Cx(c, t),
        }
    }
}

/// JSON form `{"g": "cx", "q": [0, 1]}`, with `"theta"` for RZ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub g: String,
    pub q: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

impl From<&Gate> for GateRecord {
    fn from(g: &Gate) -> Self {
        let (a, b) = g.qubits();
        GateRecord {
            g: g.name().to_string(),
            q: std::iter::once(a).chain(b).collect(),
            theta: match *g {
                Gate::Rz(_, t) => Some(t),
                _ => None,
            },
        }
    }
}

impl TryFrom<&GateRecord> for Gate {
    type Error = Error;

    fn try_from(r: &GateRecord) -> Result<Gate> {
        let bad = || Error::Schema(format!("malformed gate record {r:?}"));
        let one = || match r.q.as_slice() {
            [q] => Ok(*q),
            _ => Err(bad()),
        };
        Ok(match (r.g.as_str(), r.theta) {
            ("h", None) => Gate::H(one()?),
            ("s", None) => Gate::S(one()?),
            ("sdg", None) => Gate::Sdg(one()?),
            ("cx", None) => match r.q.as_slice() {
                [c, t] => Gate::Cx(*c, *t),
                _ => return Err(bad()),
            },
            ("rz", Some(theta)) => Gate::Rz(one()?, theta),
            _ => return Err(bad()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Circuit::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.validate(self.n)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = self.clone();
        out.gates.extend_from_slice(&other.gates);
        Ok(out)
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cnot()).count()
    }

    /// CNOT layers under ASAP scheduling; single-qubit gates are free.
    pub fn entangling_depth(&self) -> usize {
        let mut level = vec![0usize; self.n];
        let mut depth = 0;
        for g in &self.gates {
            if let Gate::Cx(c, t) = *g {
                let l = level[c].max(level[t]) + 1;
                level[c] = l;
                level[t] = l;
                depth = depth.max(l);
            }
        }
        depth
    }

    pub fn to_records(&self) -> Vec<GateRecord> {
        self.gates.iter().map(GateRecord::from).collect()
    }

    pub fn from_records(n: usize, records: &[GateRecord]) -> Result<Circuit> {
        let gates = records
            .iter()
            .map(Gate::try_from)
            .collect::<Result<Vec<_>>>()?;
        Circuit::from_gates(n, gates)
    }

    /// OpenQASM 2.0 text.
    pub fn to_qasm(&self) -> String {
        let mut out = String::new();
        out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let _ = writeln!(out, "qreg q[{}];", self.n);
        for g in &self.gates {
            let _ = match *g {
                Gate::H(q) => writeln!(out, "h q[{q}];"),
                Gate::S(q) => writeln!(out, "s q[{q}];"),
                Gate::Sdg(q) => writeln!(out, "sdg q[{q}];"),
                Gate::Cx(c, t) => writeln!(out, "cx q[{c}],q[{t}];"),
                Gate::Rz(q, theta) => writeln!(out, "rz({}) q[{q}];", format_angle(theta)),
            };
        }
        out
    }

    /// Reads back the subset written by [`Circuit::to_qasm`]. Blank lines and
    /// `//` comments are skipped.
    pub fn from_qasm(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |msg: &str| Error::Qasm {
                line: line_no,
                msg: msg.to_string(),
            };
            let line = raw.split("//").next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with("OPENQASM") || line.starts_with("include") {
                continue;
            }
            let stmt = line
                .strip_suffix(';')
                .ok_or_else(|| err("missing ';'"))?
                .trim();
            if let Some(rest) = stmt.strip_prefix("qreg") {
                let n = parse_index(rest.trim(), "q").ok_or_else(|| err("bad qreg"))?;
                if circuit.is_some() {
                    return Err(err("multiple qreg declarations"));
                }
                circuit = Some(Circuit::new(n));
                continue;
            }
            let c = circuit.as_mut().ok_or_else(|| err("gate before qreg"))?;
            let (head, args) = stmt
                .split_once(|ch: char| ch.is_whitespace())
                .ok_or_else(|| err("malformed statement"))?;
            let qubits = args
                .split(',')
                .map(|a| parse_index(a.trim(), "q"))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| err("bad qubit argument"))?;
            let gate = match (head, qubits.as_slice()) {
                ("h", [q]) => Gate::H(*q),
                ("s", [q]) => Gate::S(*q),
                ("sdg", [q]) => Gate::Sdg(*q),
                ("cx", [a, b]) => Gate::Cx(*a, *b),
                (h, [q]) if h.starts_with("rz(") && h.ends_with(')') => {
                    let theta: f64 = h[3..h.len() - 1]
                        .trim()
                        .parse()
                        .map_err(|_| err("bad rz angle"))?;
                    Gate::Rz(*q, theta)
                }
                _ => return Err(err(&format!("unsupported statement {stmt:?}"))),
            };
            c.push(gate).map_err(|e| err(&e.to_string()))?;
        }
        circuit.ok_or(Error::Qasm {
            line: 0,
            msg: "no qreg declaration".into(),
        })
    }
}

fn parse_index(s: &str, reg: &str) -> Option<usize> {
    s.strip_prefix(reg)?
        .trim()
        .strip_prefix('[')?
        .strip_suffix(']')?
        .trim()
        .parse()
        .ok()
}

/// 17 significant digits, positional unless the exponent is extreme.
pub fn format_angle(theta: f64) -> String {
    if theta == 0.0 {
        return "0".to_string();
    }
    let exp = theta.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        format!("{theta:.decimals$}")
    } else {
        format!("{theta:.16e}")
    }
}

/// Local cancellation to a fixed point: self-inverse pairs, S/SDG pairs and
/// RZ merging, only between gates adjacent on every wire they touch.
pub fn peephole(c: &Circuit) -> Circuit {
    let mut gates: Vec<Gate> = c
        .gates
        .iter()
        .copied()
        .filter(|g| !matches!(g, Gate::Rz(_, t) if t.abs() < ANGLE_EPS))
        .collect();
    loop {
        let (next, changed) = peephole_pass(c.n, &gates);
        gates = next;
        if !changed {
            break;
        }
    }
    Circuit { n: c.n, gates }
}

fn peephole_pass(n: usize, input: &[Gate]) -> (Vec<Gate>, bool) {
    let mut out: Vec<Option<Gate>> = Vec::with_capacity(input.len());
    let mut wires: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut changed = false;

    for &g in input {
        let (a, b) = g.qubits();
        let prev_a = wires[a].last().copied();
        let prev = match b {
            None => prev_a,
            Some(b) if wires[b].last().copied() == prev_a => prev_a,
            Some(_) => None,
        };
        if let Some(idx) = prev {
            let p = out[idx].expect("wire stacks only hold live gates");
            match combine(&p, &g) {
                Combine::Cancel => {
                    out[idx] = None;
                    wires[a].pop();
                    if let Some(b) = b {
                        wires[b].pop();
                    }
                    changed = true;
                    continue;
                }
                Combine::Merge(m) => {
                    changed = true;
                    if let Gate::Rz(_, t) = m {
                        if t.abs() < ANGLE_EPS {
                            out[idx] = None;
                            wires[a].pop();
                            continue;
                        }
                    }
                    out[idx] = Some(m);
                    continue;
                }
                Combine::None => {}
            }
        }
        let idx = out.len();
        out.push(Some(g));
        wires[a].push(idx);
        if let Some(b) = b {
            wires[b].push(idx);
        }
    }
    (out.into_iter().flatten().collect(), changed)
}

enum Combine {
    None,
    Cancel,
    Merge(Gate),
}

fn combine(prev: &Gate, next: &Gate) -> Combine {
    match (*prev, *next) {
        (Gate::H(a), Gate::H(b)) if a == b => Combine::Cancel,
        (Gate::Cx(c1, t1), Gate::Cx(c2, t2)) if c1 == c2 && t1 == t2 => Combine::Cancel,
        (Gate::S(a), Gate::Sdg(b)) | (Gate::Sdg(a), Gate::S(b)) if a == b => Combine::Cancel,
        (Gate::Rz(a, x), Gate::Rz(b, y)) if a == b => Combine::Merge(Gate::Rz(a, x + y)),
        _ => Combine::None,
    }
}
