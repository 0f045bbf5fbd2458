use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::phase::Phase;
use crate::qsim::QsimError;

/// Clifford+T gate set, plus arbitrary `Rz` and the `CCZ` macro gate.
///
/// `Rz(θ)` is `diag(e^{-iθ/2}, e^{iθ/2})`; its angle is kept exact as a [`Phase`], i.e.
/// modulo 2π, so `Rz` (period 4π) and [`Gate::inverse`] of it hold up to a global sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    Rz(usize, Phase),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    Ccz(usize, usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    H,
    X,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rz,
    Cnot,
    Cz,
    Ccz,
}

impl GateKind {
    pub const ALL: [GateKind; 11] = [
        GateKind::H,
        GateKind::X,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Rz,
        GateKind::Cnot,
        GateKind::Cz,
        GateKind::Ccz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
            GateKind::T => "T",
            GateKind::Tdg => "TDG",
            GateKind::Rz => "RZ",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Ccz => "CCZ",
        }
    }
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::X(_) => GateKind::X,
            Gate::Z(_) => GateKind::Z,
            Gate::S(_) => GateKind::S,
            Gate::Sdg(_) => GateKind::Sdg,
            Gate::T(_) => GateKind::T,
            Gate::Tdg(_) => GateKind::Tdg,
            Gate::Rz(..) => GateKind::Rz,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Cz(..) => GateKind::Cz,
            Gate::Ccz(..) => GateKind::Ccz,
        }
    }

    /// Qubits touched, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q)
            | Gate::X(q)
            | Gate::Z(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::T(q)
            | Gate::Tdg(q)
            | Gate::Rz(q, _) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Cz(a, b) => vec![a, b],
            Gate::Ccz(a, b, c) => vec![a, b, c],
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::T(q) => Gate::Tdg(q),
            Gate::Tdg(q) => Gate::T(q),
            Gate::Rz(q, theta) => Gate::Rz(q, -theta),
            g => g,
        }
    }

    /// True when the gate contributes one to the T-count.
    pub fn is_t_like(&self) -> bool {
        match self {
            Gate::T(_) | Gate::Tdg(_) => true,
            Gate::Rz(_, theta) => theta.is_odd_quarter(),
            _ => false,
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<(), QsimError> {
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= n_qubits {
                return Err(QsimError::QubitOutOfRange { qubit: q, n_qubits });
            }
            if qs[..i].contains(&q) {
                return Err(QsimError::RepeatedQubit(q));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind().name())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        if let Gate::Rz(_, theta) = self {
            write!(f, " {}", format_angle(*theta))?;
        }
        Ok(())
    }
}

/// `pi/4`, `-3pi/8`, `0` style; always parseable by [`Phase::from_str`].
fn format_angle(theta: Phase) -> String {
    let r = theta.to_rational();
    let (n, d) = (*r.numer(), *r.denom());
    // prefer the representative in (-1, 1]
    let n = if n > d { n - 2 * d } else { n };
    match (n, d) {
        (0, _) => "0".to_string(),
        (1, 1) => "pi".to_string(),
        (1, d) => format!("pi/{d}"),
        (-1, d) => format!("-pi/{d}"),
        (n, 1) => format!("{n}pi"),
        (n, d) => format!("{n}pi/{d}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self, QsimError> {
        for g in &gates {
            g.validate(n_qubits)?;
        }
        Ok(Circuit { n_qubits, gates })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
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

    pub fn push(&mut self, gate: Gate) -> Result<(), QsimError> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<(), QsimError> {
        for g in other.gates() {
            self.push(*g)?;
        }
        Ok(())
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Replaces every `CCZ` by its 7-T Clifford+T expansion.
    pub fn expand_ccz(&self) -> Circuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            match *g {
                Gate::Ccz(a, b, c) => gates.extend(ccz_decomposition(a, b, c)),
                other => gates.push(other),
            }
        }
        Circuit {
            n_qubits: self.n_qubits,
            gates,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("QUBITS {}\n", self.n_qubits);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

/// Standard 7-T, ancilla-free CCZ: the Toffoli network with its target Hadamards removed.
///
/// The resulting unitary is exactly `diag(1,1,1,1,1,1,1,-1)` with no global phase.
pub fn ccz_decomposition(a: usize, b: usize, c: usize) -> Vec<Gate> {
    vec![
        Gate::Cnot {
            control: b,
            target: c,
        },
        Gate::Tdg(c),
        Gate::Cnot {
            control: a,
            target: c,
        },
        Gate::T(c),
        Gate::Cnot {
            control: b,
            target: c,
        },
        Gate::Tdg(c),
        Gate::Cnot {
            control: a,
            target: c,
        },
        Gate::T(b),
        Gate::T(c),
        Gate::Cnot {
            control: a,
            target: b,
        },
        Gate::T(a),
        Gate::Tdg(b),
        Gate::Cnot {
            control: a,
            target: b,
        },
    ]
}

/// Line-oriented text format: `GATE q0 [q1 [q2]] [theta]`, `#` comments,
/// optional `QUBITS n` header (otherwise inferred from the largest index).
impl FromStr for Circuit {
    type Err = QsimError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut declared: Option<usize> = None;
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| QsimError::Parse {
                line: lineno + 1,
                message: msg.to_string(),
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let name = toks[0].to_ascii_uppercase();
            if name == "QUBITS" {
                if toks.len() != 2 {
                    return Err(bad("expected `QUBITS n`"));
                }
                declared = Some(toks[1].parse().map_err(|_| bad("bad qubit count"))?);
                continue;
            }
            let qubit = |i: usize| -> Result<usize, QsimError> {
                toks.get(i)
                    .ok_or_else(|| bad("missing qubit index"))?
                    .parse()
                    .map_err(|_| bad("bad qubit index"))
            };
            let arity = |n: usize| -> Result<(), QsimError> {
                if toks.len() != n + 1 {
                    Err(bad(&format!("{name} takes {n} argument(s)")))
                } else {
                    Ok(())
                }
            };
            let gate = match name.as_str() {
                "H" | "X" | "Z" | "S" | "SDG" | "T" | "TDG" => {
                    arity(1)?;
                    let q = qubit(1)?;
                    match name.as_str() {
                        "H" => Gate::H(q),
                        "X" => Gate::X(q),
                        "Z" => Gate::Z(q),
                        "S" => Gate::S(q),
                        "SDG" => Gate::Sdg(q),
                        "T" => Gate::T(q),
                        _ => Gate::Tdg(q),
                    }
                }
                "RZ" => {
                    arity(2)?;
                    let theta: Phase = toks[2].parse().map_err(|_| bad("bad angle"))?;
                    Gate::Rz(qubit(1)?, theta)
                }
                "CNOT" | "CX" => {
                    arity(2)?;
                    Gate::Cnot {
                        control: qubit(1)?,
                        target: qubit(2)?,
                    }
                }
                "CZ" => {
                    arity(2)?;
                    Gate::Cz(qubit(1)?, qubit(2)?)
                }
                "CCZ" => {
                    arity(3)?;
                    Gate::Ccz(qubit(1)?, qubit(2)?, qubit(3)?)
                }
                _ => return Err(bad(&format!("unknown gate `{}`", toks[0]))),
            };
            gates.push((lineno + 1, gate));
        }
        let inferred = gates
            .iter()
            .flat_map(|(_, g)| g.qubits())
            .max()
            .map_or(0, |m| m + 1);
        let n_qubits = declared.unwrap_or(inferred);
        let mut circuit = Circuit::new(n_qubits);
        for (line, g) in gates {
            circuit.push(g).map_err(|e| QsimError::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        Ok(circuit)
    }
}

/// Per-kind gate counts plus the derived T-count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateHistogram {
    pub counts: BTreeMap<GateKind, usize>,
    pub t_count: usize,
}

impl GateHistogram {
    pub fn count(&self, kind: GateKind) -> usize {
        self.counts.get(&kind).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

impl fmt::Display for GateHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for kind in GateKind::ALL {
            writeln!(f, "{:<5} {}", kind.name(), self.count(kind))?;
        }
        write!(f, "T-count {}", self.t_count)
    }
}

pub fn gate_histogram(circuit: &Circuit) -> GateHistogram {
    let mut counts: BTreeMap<GateKind, usize> = GateKind::ALL.iter().map(|&k| (k, 0)).collect();
    let mut t_count = 0;
    for g in circuit.gates() {
        *counts.entry(g.kind()).or_default() += 1;
        if g.is_t_like() {
            t_count += 1;
        }
    }
    GateHistogram { counts, t_count }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_of_empty_circuit_is_zero() {
        let h = gate_histogram(&Circuit::new(2));
        assert_eq!(h.total(), 0);
        assert_eq!(h.t_count, 0);
    }

    #[test]
    fn histogram_counts_t_and_tdg() {
        let c = Circuit::from_gates(1, vec![Gate::T(0), Gate::Tdg(0), Gate::H(0)]).unwrap();
        let h = gate_histogram(&c);
        assert_eq!(h.t_count, 2);
        assert_eq!(h.count(GateKind::H), 1);
    }

    #[test]
    fn rz_counts_only_at_odd_quarter_angles() {
        let c = Circuit::from_gates(
            1,
            vec![
                Gate::Rz(0, Phase::new(3, 4)),
                Gate::Rz(0, Phase::new(1, 2)),
                Gate::Rz(0, Phase::new(1, 8)),
            ],
        )
        .unwrap();
        assert_eq!(gate_histogram(&c).t_count, 1);
    }

    #[test]
    fn validation_rejects_bad_indices() {
        assert!(matches!(
            Circuit::from_gates(2, vec![Gate::H(2)]),
            Err(QsimError::QubitOutOfRange { qubit: 2, .. })
        ));
        assert!(matches!(
            Circuit::from_gates(2, vec![Gate::Cz(1, 1)]),
            Err(QsimError::RepeatedQubit(1))
        ));
    }

    #[test]
    fn parses_comments_and_angles() {
        let c: Circuit = "# ghz\nH 0\nCNOT 0 1  # entangle\nRZ 1 -pi/8\nccz 0 1 2\n"
            .parse()
            .unwrap();
        assert_eq!(c.n_qubits(), 3);
        assert_eq!(c.gates()[2], Gate::Rz(1, Phase::new(-1, 8)));
        assert_eq!(c.gates()[3], Gate::Ccz(0, 1, 2));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = "H 0\nH 1\nFOO 2\n".parse::<Circuit>().unwrap_err();
        assert!(matches!(err, QsimError::Parse { line: 3, .. }));
        let err = "QUBITS 1\nCNOT 0 1\n".parse::<Circuit>().unwrap_err();
        assert!(matches!(err, QsimError::Parse { line: 2, .. }));
    }

    #[test]
    fn angle_formatting_is_parseable() {
        for (n, d) in [(1, 4), (-1, 4), (3, 8), (-3, 8), (1, 1), (0, 1), (5, 16)] {
            let p = Phase::new(n, d);
            assert_eq!(format_angle(p).parse::<Phase>().unwrap(), p);
        }
    }
}
