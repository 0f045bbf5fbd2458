use num_complex::Complex64;

use crate::phase::Phase;
use crate::qsim::{Circuit, Gate};
use crate::zx::{EdgeKind, VertexId, VertexKind, ZxDiagram};

/// Translates a circuit gate by gate. The diagram's tensor (scalar included) equals the
/// circuit unitary exactly:
///
/// * phase gates and `Rz` become arity-2 Z spiders (`Rz` adds its `e^{-iθ/2}` to the scalar);
/// * `X` is an X spider with phase π; `H` toggles the kind of the next wire segment;
/// * `CNOT` is a Z (control) – X (target) pair, `CZ` a Z–Z pair joined by a Hadamard edge,
///   each with a `√2` scalar;
/// * `CCZ` is expanded to its 7-T form first.
pub fn circuit_to_diagram(circuit: &Circuit) -> ZxDiagram {
    let circuit = circuit.expand_ccz();
    let n = circuit.n_qubits();
    let mut d = ZxDiagram::new();
    let mut wires = Wires {
        frontier: (0..n).map(|_| d.add_input()).collect(),
        pending: vec![EdgeKind::Plain; n],
    };
    let sqrt2 = Complex64::new(std::f64::consts::SQRT_2, 0.0);

    for g in circuit.gates() {
        match *g {
            Gate::H(q) => wires.pending[q] = wires.pending[q].toggled(),
            Gate::X(q) => {
                wires.extend(&mut d, q, VertexKind::X, Phase::pi());
            }
            Gate::Z(q) => {
                wires.extend(&mut d, q, VertexKind::Z, Phase::pi());
            }
            Gate::S(q) => {
                wires.extend(&mut d, q, VertexKind::Z, Phase::half_pi());
            }
            Gate::Sdg(q) => {
                wires.extend(&mut d, q, VertexKind::Z, -Phase::half_pi());
            }
            Gate::T(q) => {
                wires.extend(&mut d, q, VertexKind::Z, Phase::quarter_pi());
            }
            Gate::Tdg(q) => {
                wires.extend(&mut d, q, VertexKind::Z, -Phase::quarter_pi());
            }
            Gate::Rz(q, theta) => {
                wires.extend(&mut d, q, VertexKind::Z, theta);
                d.mul_scalar(Complex64::from_polar(1.0, -theta.to_radians() / 2.0));
            }
            Gate::Cnot { control, target } => {
                let c = wires.extend(&mut d, control, VertexKind::Z, Phase::zero());
                let t = wires.extend(&mut d, target, VertexKind::X, Phase::zero());
                d.add_edge(c, t, EdgeKind::Plain).expect("fresh pair");
                d.mul_scalar(sqrt2);
            }
            Gate::Cz(a, b) => {
                let u = wires.extend(&mut d, a, VertexKind::Z, Phase::zero());
                let v = wires.extend(&mut d, b, VertexKind::Z, Phase::zero());
                d.add_edge(u, v, EdgeKind::Hadamard).expect("fresh pair");
                d.mul_scalar(sqrt2);
            }
            Gate::Ccz(..) => unreachable!("expanded above"),
        }
    }
    for q in 0..n {
        let o = d.add_output();
        d.add_edge(wires.frontier[q], o, wires.pending[q])
            .expect("fresh output");
    }
    d
}

/// Last vertex on each qubit wire and the kind of the edge still to be drawn from it.
struct Wires {
    frontier: Vec<VertexId>,
    pending: Vec<EdgeKind>,
}

impl Wires {
    fn extend(&mut self, d: &mut ZxDiagram, q: usize, kind: VertexKind, phase: Phase) -> VertexId {
        let v = d.add_vertex(kind, phase);
        d.add_edge(self.frontier[q], v, self.pending[q])
            .expect("fresh vertex");
        self.frontier[q] = v;
        self.pending[q] = EdgeKind::Plain;
        v
    }
}
