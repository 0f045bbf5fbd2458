#![allow(dead_code)]

use qpos::phase::Phase;
use qpos::qsim::{Circuit, Gate};
use rand::seq::SliceRandom;
use rand::Rng;

/// Uniform over the whole gate set; `Rz` angles are multiples of π/8.
pub fn random_gate<R: Rng>(rng: &mut R, n: usize) -> Gate {
    let kinds = if n >= 3 {
        11
    } else if n == 2 {
        10
    } else {
        8
    };
    let mut qs: Vec<usize> = (0..n).collect();
    qs.shuffle(rng);
    let (a, b, c) = (
        qs[0],
        qs.get(1).copied().unwrap_or(0),
        qs.get(2).copied().unwrap_or(0),
    );
    match rng.gen_range(0..kinds) {
        0 => Gate::H(a),
        1 => Gate::X(a),
        2 => Gate::Z(a),
        3 => Gate::S(a),
        4 => Gate::Sdg(a),
        5 => Gate::T(a),
        6 => Gate::Tdg(a),
        7 => Gate::Rz(a, Phase::new(rng.gen_range(0..16), 8)),
        8 => Gate::Cnot {
            control: a,
            target: b,
        },
        9 => Gate::Cz(a, b),
        _ => Gate::Ccz(a, b, c),
    }
}

pub fn random_circuit<R: Rng>(rng: &mut R, max_qubits: usize, max_gates: usize) -> Circuit {
    let n = rng.gen_range(1..=max_qubits);
    let len = rng.gen_range(0..=max_gates);
    let gates = (0..len).map(|_| random_gate(rng, n)).collect();
    Circuit::from_gates(n, gates).expect("generated gates are in range")
}
