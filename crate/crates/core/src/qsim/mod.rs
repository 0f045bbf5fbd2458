//! Dense statevector simulation over a Clifford+T gate set.

mod gate;
mod grover;
mod state;

pub use gate::{ccz_decomposition, gate_histogram, Circuit, Gate, GateHistogram, GateKind};
pub use grover::{
    build_grover_circuit, grover_iteration, grover_iteration_in_place, multi_controlled_phase,
    multi_controlled_z, optimal_iterations, phase_gate, reference_grover_circuit, MarkPredicate,
    MAX_GROVER_CIRCUIT_QUBITS, REFERENCE_GROVER_MARKED, REFERENCE_GROVER_QUBITS,
};
pub use state::{apply_gate, measure, StateVector, MAX_QUBITS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QsimError {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("qubit {0} used twice by one gate")]
    RepeatedQubit(usize),
    #[error("{requested} qubits requested, cap is {cap}")]
    TooManyQubits { requested: usize, cap: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    BasisOutOfRange { index: usize, dim: usize },
    #[error("amplitude count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state norm {0} is not 1")]
    NotNormalized(f64),
    #[error("circuit width {circuit} does not match state width {state}")]
    WidthMismatch { state: usize, circuit: usize },
    #[error("mark predicate has dimension {got}, expected {expected}")]
    MarkDimension { expected: usize, got: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
