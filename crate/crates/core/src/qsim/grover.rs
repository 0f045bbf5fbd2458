//! Grover operators, both matrix-free (for search) and compiled to Clifford+T (for gate counting).

use num_complex::Complex64;

use crate::phase::Phase;
use crate::qsim::gate::ccz_decomposition;
use crate::qsim::{Circuit, Gate, QsimError, StateVector};

/// Largest register `build_grover_circuit` will compile explicitly.
pub const MAX_GROVER_CIRCUIT_QUBITS: usize = 8;

/// Which basis states the phase oracle flips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkPredicate {
    marked: Vec<bool>,
}

impl MarkPredicate {
    pub fn from_indices(dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut marked = vec![false; dim];
        for j in indices {
            if j < dim {
                marked[j] = true;
            }
        }
        MarkPredicate { marked }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize) -> bool) -> Self {
        MarkPredicate {
            marked: (0..dim).map(f).collect(),
        }
    }

    /// `{ j : values[j] > threshold }` over a register of `dim` states; indices past
    /// `values.len()` are padding and never marked.
    pub fn above_threshold(values: &[f64], threshold: f64, dim: usize) -> Self {
        Self::from_fn(dim, |j| j < values.len() && values[j] > threshold)
    }

    pub fn dim(&self) -> usize {
        self.marked.len()
    }

    pub fn is_marked(&self, j: usize) -> bool {
        self.marked.get(j).copied().unwrap_or(false)
    }

    pub fn count(&self) -> usize {
        self.marked.iter().filter(|&&m| m).count()
    }

    pub fn marked_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.marked
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(j, _)| j)
    }
}

/// One oracle + diffusion step, in place: flip the sign of marked amplitudes, then reflect
/// every amplitude about the mean (`a_j ← 2ā − a_j`).
pub fn grover_iteration_in_place(state: &mut StateVector, mark: &MarkPredicate) {
    let amps = state.amps_mut();
    for (j, a) in amps.iter_mut().enumerate() {
        if mark.is_marked(j) {
            *a = -*a;
        }
    }
    let mean: Complex64 = amps.iter().sum::<Complex64>() / amps.len() as f64;
    for a in amps.iter_mut() {
        *a = mean * 2.0 - *a;
    }
}

pub fn grover_iteration(state: &StateVector, mark: &MarkPredicate) -> StateVector {
    let mut out = state.clone();
    grover_iteration_in_place(&mut out, mark);
    out
}

/// Phase gate `diag(1, e^{iθ})`, using the named Clifford+T gates whenever θ is a multiple
/// of π/4 and `Rz` (equal up to global phase) otherwise.
pub fn phase_gate(q: usize, theta: Phase) -> Vec<Gate> {
    let r = theta.to_rational();
    if *r.denom() > 4 {
        return vec![Gate::Rz(q, theta)];
    }
    let eighths = (*r.numer() * (4 / *r.denom())) as u8;
    match eighths {
        0 => vec![],
        1 => vec![Gate::T(q)],
        2 => vec![Gate::S(q)],
        3 => vec![Gate::S(q), Gate::T(q)],
        4 => vec![Gate::Z(q)],
        5 => vec![Gate::Z(q), Gate::T(q)],
        6 => vec![Gate::Sdg(q)],
        _ => vec![Gate::Tdg(q)],
    }
}

/// Multi-controlled phase: multiplies `|1…1⟩` on `controls ∪ {target}` by `e^{iθ}`.
///
/// Ancilla-free recursion on the last control `c`:
///
/// ```text
/// C^k P(θ) = CP(θ/2; c,t) · C^{k-1}X(rest→c) · CP(−θ/2; c,t) · (C^{k-1}X(rest→c))† · C^{k-1}P(θ/2; rest,t)
/// ```
///
/// with `CP(φ; a,b) = CNOT P(−φ/2)_b CNOT` plus `P(φ/2)` on both `a` and `b`. The uncompute
/// step is emitted as the gate-reversed inverse, and the single-qubit phases of the first `CP`
/// go after its CNOT pair while those of the second go before it, so that opposite phases on
/// the target meet. `C^{k-1}X = H · C^{k-1}P(π) · H`; a two-control `P(π)` is a CCZ and is
/// emitted with the 7-T construction. Angles below π/4 fall back to `Rz`, so the result
/// matches the ideal gate up to a global phase.
pub fn multi_controlled_phase(controls: &[usize], target: usize, theta: Phase) -> Vec<Gate> {
    let mut out = Vec::new();
    emit_mcp(controls, target, theta, &mut out);
    out
}

fn emit_mcp(controls: &[usize], target: usize, theta: Phase, out: &mut Vec<Gate>) {
    let half = Phase::from_rational(theta.to_rational() / 2);
    match controls {
        [] => out.extend(phase_gate(target, theta)),
        [c] => emit_cp(*c, target, theta, false, out),
        [a, b] if theta == Phase::pi() => out.extend(ccz_decomposition(*a, *b, target)),
        [rest @ .., c] => {
            emit_cp(*c, target, half, true, out);
            let start = out.len();
            emit_mcx(rest, *c, out);
            let compute: Vec<Gate> = out[start..].to_vec();
            emit_cp(*c, target, -half, false, out);
            out.extend(compute.iter().rev().map(|g| g.inverse()));
            emit_mcp(rest, target, half, out);
        }
    }
}

/// `CP(φ; c,t)`; the diagonal single-qubit parts commute, so they go either before or after
/// the CNOT pair.
fn emit_cp(c: usize, t: usize, phi: Phase, phases_last: bool, out: &mut Vec<Gate>) {
    if phi == Phase::pi() {
        out.push(Gate::Cz(c, t));
        return;
    }
    let half = Phase::from_rational(phi.to_rational() / 2);
    let singles = [phase_gate(c, half), phase_gate(t, half)].concat();
    if !phases_last {
        out.extend(singles.iter().copied());
    }
    out.push(Gate::Cnot {
        control: c,
        target: t,
    });
    out.extend(phase_gate(t, -half));
    out.push(Gate::Cnot {
        control: c,
        target: t,
    });
    if phases_last {
        out.extend(singles);
    }
}

fn emit_mcx(controls: &[usize], target: usize, out: &mut Vec<Gate>) {
    if let [c] = controls {
        out.push(Gate::Cnot {
            control: *c,
            target,
        });
        return;
    }
    out.push(Gate::H(target));
    emit_mcp(controls, target, Phase::pi(), out);
    out.push(Gate::H(target));
}

/// Z on `|1…1⟩` of all listed qubits.
pub fn multi_controlled_z(qubits: &[usize]) -> Vec<Gate> {
    match qubits {
        [] => vec![],
        [rest @ .., t] => multi_controlled_phase(rest, *t, Phase::pi()),
    }
}

/// Compiles `iterations` rounds of Grover search over `n` qubits to Clifford+T (+`Rz`).
///
/// Layout: `H^⊗n`, then per round the phase oracle (for each marked `j`: X on the zero bits
/// of `j`, multi-controlled Z, undo the X's) followed by diffusion
/// `H^⊗n X^⊗n MCZ X^⊗n H^⊗n`. The compiled diffusion is `−(2|s⟩⟨s| − I)`, so the simulated
/// state matches [`grover_iteration`] up to a global phase.
pub fn build_grover_circuit(
    n: usize,
    mark: &MarkPredicate,
    iterations: usize,
) -> Result<Circuit, QsimError> {
    if n == 0 || n > MAX_GROVER_CIRCUIT_QUBITS {
        return Err(QsimError::TooManyQubits {
            requested: n,
            cap: MAX_GROVER_CIRCUIT_QUBITS,
        });
    }
    if mark.dim() != 1 << n {
        return Err(QsimError::MarkDimension {
            expected: 1 << n,
            got: mark.dim(),
        });
    }
    let qubits: Vec<usize> = (0..n).collect();
    let mcz = multi_controlled_z(&qubits);
    let mut gates = Vec::new();
    gates.extend(qubits.iter().map(|&q| Gate::H(q)));
    for _ in 0..iterations {
        for j in mark.marked_indices() {
            let flips: Vec<Gate> = qubits
                .iter()
                .filter(|&&q| j & (1 << q) == 0)
                .map(|&q| Gate::X(q))
                .collect();
            gates.extend(flips.iter().copied());
            gates.extend(mcz.iter().copied());
            gates.extend(flips);
        }
        gates.extend(qubits.iter().map(|&q| Gate::H(q)));
        gates.extend(qubits.iter().map(|&q| Gate::X(q)));
        gates.extend(mcz.iter().copied());
        gates.extend(qubits.iter().map(|&q| Gate::X(q)));
        gates.extend(qubits.iter().map(|&q| Gate::H(q)));
    }
    Circuit::from_gates(n, gates)
}

/// Qubit count of the reference Grover build used for T-count reporting.
pub const REFERENCE_GROVER_QUBITS: usize = 5;
/// The single marked basis state of the reference build (`0b10110`).
pub const REFERENCE_GROVER_MARKED: usize = 22;

/// Five qubits, one marked element, [`optimal_iterations`] rounds (4).
pub fn reference_grover_circuit() -> Circuit {
    let n = REFERENCE_GROVER_QUBITS;
    let mark = MarkPredicate::from_indices(1 << n, [REFERENCE_GROVER_MARKED]);
    build_grover_circuit(n, &mark, optimal_iterations(n, 1)).expect("reference build is in range")
}

/// Optimal round count `⌊π/(4θ)⌋` with `sin θ = √(M/N)`, at least 1 when anything is marked.
pub fn optimal_iterations(n: usize, marked: usize) -> usize {
    if marked == 0 {
        return 0;
    }
    let theta = ((marked as f64) / ((1usize << n) as f64)).sqrt().asin();
    ((std::f64::consts::FRAC_PI_4 / theta).floor() as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::gate_histogram;

    const TOL: f64 = 1e-12;

    #[test]
    fn single_iteration_finds_one_of_four() {
        let s = StateVector::uniform(2).unwrap();
        let out = grover_iteration(&s, &MarkPredicate::from_indices(4, [3]));
        assert!((out.probability(3) - 1.0).abs() < TOL);
    }

    #[test]
    fn empty_mark_leaves_uniform_state_alone() {
        let s = StateVector::uniform(3).unwrap();
        let out = grover_iteration(&s, &MarkPredicate::from_indices(8, []));
        assert!(out.max_deviation(&s) < TOL);
    }

    #[test]
    fn one_qubit_half_marked() {
        let s = StateVector::uniform(1).unwrap();
        let out = grover_iteration(&s, &MarkPredicate::from_indices(2, [1]));
        assert!((out.probability(1) - 0.5).abs() < TOL);
    }

    #[test]
    fn marked_mass_follows_rotation_formula() {
        for n in 0..=4usize {
            let dim = 1usize << n;
            for m in 0..=dim {
                let mark = MarkPredicate::from_indices(dim, 0..m);
                let out = grover_iteration(&StateVector::uniform(n).unwrap(), &mark);
                let mass: f64 = (0..m).map(|j| out.probability(j)).sum();
                let theta = ((m as f64) / (dim as f64)).sqrt().asin();
                let expect = (3.0 * theta).sin().powi(2);
                assert!((mass - expect).abs() < 1e-12, "n={n} m={m}");
                assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }

    fn diag_phase_check(gates: &[Gate], n: usize, expect: impl Fn(usize) -> Complex64) {
        let c = Circuit::from_gates(n, gates.to_vec()).unwrap();
        // a generic superposition exposes relative phases between all basis states
        let mut probe = StateVector::uniform(n).unwrap();
        for q in 0..n {
            probe.apply(&Gate::T(q)).unwrap();
        }
        let mut ideal = probe.clone();
        for (j, a) in ideal.amps_mut().iter_mut().enumerate() {
            *a *= expect(j);
        }
        probe.apply_circuit(&c).unwrap();
        assert!(probe.max_deviation_up_to_phase(&ideal) < 1e-9);
    }

    #[test]
    fn ccz_expansion_is_exact() {
        let gates = ccz_decomposition(0, 1, 2);
        let c = Circuit::from_gates(3, gates).unwrap();
        for j in 0..8 {
            let mut s = StateVector::basis(3, j).unwrap();
            s.apply_circuit(&c).unwrap();
            let expect = if j == 7 { -1.0 } else { 1.0 };
            assert!((s.amplitude(j) - Complex64::new(expect, 0.0)).norm() < TOL);
        }
        assert_eq!(gate_histogram(&c).t_count, 7);
    }

    #[test]
    fn multi_controlled_z_matches_diagonal() {
        for n in 1..=6usize {
            let qubits: Vec<usize> = (0..n).collect();
            let all = (1usize << n) - 1;
            diag_phase_check(&multi_controlled_z(&qubits), n, |j| {
                Complex64::new(if j == all { -1.0 } else { 1.0 }, 0.0)
            });
        }
    }

    #[test]
    fn multi_controlled_phase_matches_diagonal() {
        let theta = Phase::new(1, 3);
        let gates = multi_controlled_phase(&[0, 2], 1, theta);
        diag_phase_check(&gates, 3, |j| {
            if j == 0b111 {
                Complex64::from_polar(1.0, theta.to_radians())
            } else {
                Complex64::new(1.0, 0.0)
            }
        });
    }

    #[test]
    fn compiled_grover_matches_matrix_free() {
        for n in 1..=5usize {
            let dim = 1 << n;
            let mark = MarkPredicate::from_indices(dim, [dim - 1, dim / 3]);
            for iters in 0..=2 {
                let circuit = build_grover_circuit(n, &mark, iters).unwrap();
                let mut sim = StateVector::zero(n).unwrap();
                sim.apply_circuit(&circuit).unwrap();
                let mut ideal = StateVector::uniform(n).unwrap();
                for _ in 0..iters {
                    grover_iteration_in_place(&mut ideal, &mark);
                }
                assert!(
                    sim.max_deviation_up_to_phase(&ideal) < 1e-9,
                    "n={n} iters={iters}"
                );
            }
        }
    }

    #[test]
    fn two_qubit_compiled_search_is_certain() {
        let mark = MarkPredicate::from_indices(4, [3]);
        let circuit = build_grover_circuit(2, &mark, 1).unwrap();
        let mut s = StateVector::zero(2).unwrap();
        s.apply_circuit(&circuit).unwrap();
        assert!((s.probability(3) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_iterations_is_preparation_only() {
        let mark = MarkPredicate::from_indices(8, [5]);
        let circuit = build_grover_circuit(3, &mark, 0).unwrap();
        let mut s = StateVector::zero(3).unwrap();
        s.apply_circuit(&circuit).unwrap();
        assert!(s.max_deviation(&StateVector::uniform(3).unwrap()) < 1e-12);
    }

    #[test]
    fn oversized_register_rejected() {
        let mark = MarkPredicate::from_indices(1 << 9, [0]);
        assert!(build_grover_circuit(9, &mark, 1).is_err());
    }
}
