//! Elementary gates, Pauli operators and Bell states.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SalError};
use crate::linalg::{c, r, Operator, QState, C64};

pub fn pauli_x() -> Operator {
    Operator::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).expect("2x2")
}

pub fn pauli_y() -> Operator {
    Operator::from_rows(&[vec![r(0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), r(0.0)]]).expect("2x2")
}

pub fn pauli_z() -> Operator {
    Operator::diagonal(&[1.0, -1.0])
}

pub fn hadamard() -> Operator {
    let h = FRAC_1_SQRT_2;
    Operator::from_real_rows(&[vec![h, h], vec![h, -h]]).expect("2x2")
}

/// The π/8 gate `diag(1, e^{iπ/4})`.
pub fn pi8() -> Operator {
    Operator::from_rows(&[vec![r(1.0), r(0.0)], vec![r(0.0), C64::from_polar(1.0, FRAC_PI_4)]]).expect("2x2")
}

/// CNOT with the control on the first qubit.
pub fn cnot() -> Operator {
    permutation_gate(&[0, 1, 3, 2])
}

/// Toffoli with the controls on the first two qubits.
pub fn toffoli() -> Operator {
    permutation_gate(&[0, 1, 2, 3, 4, 5, 7, 6])
}

pub fn identity(num_qubits: usize) -> Operator {
    Operator::identity(1 << num_qubits)
}

/// `n·σ` for a real 3-vector.
pub fn sigma_dot(axis: [f64; 3]) -> Operator {
    let [x, y, z] = axis;
    Operator::from_rows(&[vec![r(z), c(x, -y)], vec![c(x, y), r(-z)]]).expect("2x2")
}

fn permutation_gate(images: &[usize]) -> Operator {
    let n = images.len();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if images[j] == i { 1.0 } else { 0.0 }).collect()).collect();
    Operator::from_real_rows(&rows).expect("square")
}

/// Named gates accepted by the teleport builders and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    I,
    X,
    Y,
    Z,
    H,
    T,
    Cnot,
    Toffoli,
}

impl Gate {
    pub fn num_qubits(self) -> usize {
        match self {
            Gate::Cnot => 2,
            Gate::Toffoli => 3,
            _ => 1,
        }
    }

    pub fn operator(self) -> Operator {
        match self {
            Gate::I => identity(1),
            Gate::X => pauli_x(),
            Gate::Y => pauli_y(),
            Gate::Z => pauli_z(),
            Gate::H => hadamard(),
            Gate::T => pi8(),
            Gate::Cnot => cnot(),
            Gate::Toffoli => toffoli(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::I => "I",
            Gate::X => "X",
            Gate::Y => "Y",
            Gate::Z => "Z",
            Gate::H => "H",
            Gate::T => "T",
            Gate::Cnot => "CNOT",
            Gate::Toffoli => "Toffoli",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gate {
    type Err = SalError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "ID" | "IDENTITY" => Ok(Gate::I),
            "X" | "NOT" => Ok(Gate::X),
            "Y" => Ok(Gate::Y),
            "Z" => Ok(Gate::Z),
            "H" | "HADAMARD" => Ok(Gate::H),
            "T" | "PI8" | "PI/8" => Ok(Gate::T),
            "CNOT" | "CX" => Ok(Gate::Cnot),
            "TOFFOLI" | "CCX" | "CCNOT" => Ok(Gate::Toffoli),
            other => Err(SalError::InvalidSpec(format!("unknown gate `{other}`"))),
        }
    }
}

/// Bell state `(|0 n> + (-1)^m |1 n̄>)/√2`.
pub fn bell_state(n: u8, m: u8) -> Result<QState> {
    if n > 1 || m > 1 {
        return Err(SalError::InvalidSpec(format!("Bell labels must be bits, got ({n}, {m})")));
    }
    let n = n as usize;
    let sign = if m == 0 { 1.0 } else { -1.0 };
    let mut amps = vec![r(0.0); 4];
    amps[n] = r(FRAC_1_SQRT_2);
    amps[2 | (1 - n)] = r(sign * FRAC_1_SQRT_2);
    QState::new(amps)
}
