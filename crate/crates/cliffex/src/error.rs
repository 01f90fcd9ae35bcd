use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Pauli letter {letter:?} at position {position}")]
    InvalidLetter { letter: char, position: usize },

    #[error("empty Pauli word")]
    EmptyPauli,

    #[error("length mismatch: expected {expected} qubits, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("term {index} acts on {found} qubits, expected {expected}")]
    MixedQubitCounts {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("qubit count must be positive")]
    InvalidSize,

    #[error("qubit index {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("CNOT control and target coincide on qubit {0}")]
    SameControlTarget(usize),

    #[error("non-finite angle {0}")]
    NonFiniteAngle(f64),

    #[error("empty term list")]
    EmptyTerms,

    #[error("CNOT tree needs at least one qubit")]
    EmptyTree,

    #[error(
        "Clifford is not reducible to a Hadamard layer plus CNOT network \
         (mixed Hadamard state at gate {gate_index}); use observable mode instead"
    )]
    NotReducible { gate_index: usize },

    #[error("gate {gate_index} ({name}) is neither H nor CNOT, so probabilities cannot absorb it; use observable mode instead")]
    NonHCnotGate {
        gate_index: usize,
        name: &'static str,
    },

    #[error("{n} qubits exceeds the dense simulation cap of {cap}; try a subset of the terms")]
    TooLarge { n: usize, cap: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("bitstring {bits:?} has length {found}, expected {expected}")]
    BitstringLengthMismatch {
        bits: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid bitstring {0:?}")]
    InvalidBitstring(String),

    #[error("histogram counts sum to {sum} but shots = {shots}")]
    ShotMismatch { sum: u64, shots: u64 },

    #[error("no {degree}-regular graph on {nodes} nodes")]
    InfeasibleDegree { nodes: usize, degree: usize },

    #[error("cannot place {edges} edges on {nodes} nodes")]
    InfeasibleEdges { nodes: usize, edges: usize },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("QASM parse error on line {line}: {msg}")]
    Qasm { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
