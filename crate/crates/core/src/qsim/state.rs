use num_complex::Complex64;
use rand::Rng;

use crate::qsim::{Circuit, Gate, QsimError};

/// Default ceiling on simulated register width.
pub const MAX_QUBITS: usize = 20;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Dense amplitude vector. Qubit `q` is bit `1 << q` of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits`.
    pub fn zero(n_qubits: usize) -> Result<Self, QsimError> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, QsimError> {
        check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(QsimError::BasisOutOfRange { index, dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// `(1/√2ⁿ) Σ_j |j⟩`.
    pub fn uniform(n_qubits: usize) -> Result<Self, QsimError> {
        check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(StateVector {
            n_qubits,
            amps: vec![a; dim],
        })
    }

    /// Builds a state from raw amplitudes; the length must be a power of two and the norm 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, QsimError> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(QsimError::NotPowerOfTwo(dim));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_width(n_qubits)?;
        let s = StateVector { n_qubits, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(QsimError::NotNormalized(norm));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies one gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<(), QsimError> {
        gate.validate(self.n_qubits)?;
        let i = Complex64::i();
        match *gate {
            Gate::H(q) => self.apply_hadamard(q),
            Gate::X(q) => {
                let m = 1 << q;
                for j in 0..self.amps.len() {
                    if j & m == 0 {
                        self.amps.swap(j, j | m);
                    }
                }
            }
            Gate::Z(q) => self.phase_on(1 << q, Complex64::new(-1.0, 0.0)),
            Gate::S(q) => self.phase_on(1 << q, i),
            Gate::Sdg(q) => self.phase_on(1 << q, -i),
            Gate::T(q) => self.phase_on(
                1 << q,
                Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
            ),
            Gate::Tdg(q) => self.phase_on(
                1 << q,
                Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
            ),
            Gate::Rz(q, theta) => {
                let half = theta.to_radians() / 2.0;
                let lo = Complex64::from_polar(1.0, -half);
                let hi = Complex64::from_polar(1.0, half);
                let m = 1 << q;
                for (j, a) in self.amps.iter_mut().enumerate() {
                    *a *= if j & m == 0 { lo } else { hi };
                }
            }
            Gate::Cnot { control, target } => {
                let (c, t) = (1 << control, 1 << target);
                for j in 0..self.amps.len() {
                    if j & c != 0 && j & t == 0 {
                        self.amps.swap(j, j | t);
                    }
                }
            }
            Gate::Cz(a, b) => self.phase_on((1 << a) | (1 << b), Complex64::new(-1.0, 0.0)),
            Gate::Ccz(a, b, c) => {
                self.phase_on((1 << a) | (1 << b) | (1 << c), Complex64::new(-1.0, 0.0))
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<(), QsimError> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(QsimError::WidthMismatch {
                state: self.n_qubits,
                circuit: circuit.n_qubits(),
            });
        }
        for g in circuit.gates() {
            self.apply(g)?;
        }
        Ok(())
    }

    fn apply_hadamard(&mut self, q: usize) {
        let m = 1 << q;
        for j in 0..self.amps.len() {
            if j & m == 0 {
                let a = self.amps[j];
                let b = self.amps[j | m];
                self.amps[j] = (a + b) * FRAC_1_SQRT_2;
                self.amps[j | m] = (a - b) * FRAC_1_SQRT_2;
            }
        }
    }

    /// Multiplies by `factor` every amplitude whose index has all bits of `mask` set.
    fn phase_on(&mut self, mask: usize, factor: Complex64) {
        for (j, a) in self.amps.iter_mut().enumerate() {
            if j & mask == mask {
                *a *= factor;
            }
        }
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Largest elementwise deviation from `other`.
    pub fn max_deviation(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise deviation after rotating `other` onto `self`'s global phase.
    pub fn max_deviation_up_to_phase(&self, other: &StateVector) -> f64 {
        let overlap: Complex64 = other
            .amps
            .iter()
            .zip(&self.amps)
            .map(|(b, a)| b.conj() * a)
            .sum();
        let rot = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b * rot).norm())
            .fold(0.0, f64::max)
    }
}

fn check_width(n_qubits: usize) -> Result<(), QsimError> {
    if n_qubits > MAX_QUBITS {
        Err(QsimError::TooManyQubits {
            requested: n_qubits,
            cap: MAX_QUBITS,
        })
    } else {
        Ok(())
    }
}

/// Value-returning form of [`StateVector::apply`].
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector, QsimError> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Samples a basis index with probability `|amp_j|²`.
pub fn measure<R: Rng + ?Sized>(state: &StateVector, rng: &mut R) -> usize {
    let u: f64 = rng.gen::<f64>() * state.norm_sqr();
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (j, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            last_nonzero = j;
        }
        acc += p;
        if u < acc {
            return j;
        }
    }
    last_nonzero
}
