//! Shift-invariant Clifford gates and their action on stabilizer matrices.
//!
//! Qubits are 0-based in the API and 1-based in printed form.

use std::fmt;

use thiserror::Error;

use crate::poly::LaurentPoly;
use crate::stabilizer::StabilizerMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    P(usize),
    /// `z_q += (D^-l + D^l) x_q`.
    PL {
        qubit: usize,
        offset: i64,
    },
    Cnot {
        control: usize,
        target: usize,
        offset: i64,
    },
    Csign {
        a: usize,
        b: usize,
        offset: i64,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GateError {
    #[error("qubit {} out of range for n = {n}", .qubit + 1)]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("{0}: both operands on the same qubit")]
    SameQubit(Gate),
    #[error("{0}: offset must be nonzero")]
    ZeroOffset(Gate),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::P(q) | Gate::PL { qubit: q, .. } => vec![q],
            Gate::Cnot {
                control, target, ..
            } => vec![control, target],
            Gate::Csign { a, b, .. } => vec![a, b],
        }
    }

    pub fn offset(&self) -> i64 {
        match *self {
            Gate::H(_) | Gate::P(_) => 0,
            Gate::PL { offset, .. } | Gate::Cnot { offset, .. } | Gate::Csign { offset, .. } => {
                offset
            }
        }
    }

    /// Gates that only add `x` into `z`; these commute with each other.
    pub fn is_diagonal(&self) -> bool {
        matches!(self, Gate::P(_) | Gate::PL { .. } | Gate::Csign { .. })
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(
            self,
            Gate::Cnot { .. } | Gate::Csign { .. } | Gate::PL { .. }
        )
    }

    pub fn validate(&self, n: usize) -> Result<(), GateError> {
        for q in self.qubits() {
            if q >= n {
                return Err(GateError::QubitOutOfRange { qubit: q, n });
            }
        }
        match *self {
            Gate::Cnot {
                control, target, ..
            } if control == target => Err(GateError::SameQubit(*self)),
            Gate::Csign { a, b, .. } if a == b => Err(GateError::SameQubit(*self)),
            Gate::PL { offset: 0, .. } => Err(GateError::ZeroOffset(*self)),
            _ => Ok(()),
        }
    }

    /// `CSIGN(a,b,l)` and `CSIGN(b,a,-l)` coincide, as do `PL(q,l)` and
    /// `PL(q,-l)`; this picks `a < b` and `l > 0`.
    pub fn canonical(self) -> Gate {
        match self {
            Gate::Csign { a, b, offset } if a > b => Gate::Csign {
                a: b,
                b: a,
                offset: -offset,
            },
            Gate::PL { qubit, offset } if offset < 0 => Gate::PL {
                qubit,
                offset: -offset,
            },
            g => g,
        }
    }

    /// Column action on every row of `s`.
    pub fn apply(&self, s: &mut StabilizerMatrix) {
        let mono = LaurentPoly::monomial;
        match *self {
            Gate::H(q) => {
                for i in 0..s.r() {
                    let x = s.x()[(i, q)].clone();
                    let z = std::mem::replace(&mut s.z_mut()[(i, q)], x);
                    s.x_mut()[(i, q)] = z;
                }
            }
            Gate::P(q) => {
                for i in 0..s.r() {
                    let x = s.x()[(i, q)].clone();
                    s.z_mut()[(i, q)] += &x;
                }
            }
            Gate::PL { qubit, offset } => {
                let f = &mono(-offset) + &mono(offset);
                for i in 0..s.r() {
                    let d = &f * &s.x()[(i, qubit)];
                    s.z_mut()[(i, qubit)] += &d;
                }
            }
            Gate::Cnot {
                control,
                target,
                offset,
            } => {
                s.x_mut().add_col_multiple(control, target, &mono(offset));
                s.z_mut().add_col_multiple(target, control, &mono(-offset));
            }
            Gate::Csign { a, b, offset } => {
                for i in 0..s.r() {
                    let db = &mono(offset) * &s.x()[(i, a)];
                    let da = &mono(-offset) * &s.x()[(i, b)];
                    s.z_mut()[(i, b)] += &db;
                    s.z_mut()[(i, a)] += &da;
                }
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H q={}", q + 1),
            Gate::P(q) => write!(f, "P q={}", q + 1),
            Gate::PL { qubit, offset } => write!(f, "PL q={} l={offset}", qubit + 1),
            Gate::Cnot {
                control,
                target,
                offset,
            } => {
                write!(f, "CNOT c={} t={} off={offset}", control + 1, target + 1)
            }
            Gate::Csign { a, b, offset } => write!(f, "CSIGN a={} b={} off={offset}", a + 1, b + 1),
        }
    }
}

/// Which polynomial-weighted template [`expand_poly`] expands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    Cnot { control: usize, target: usize },
    Csign { a: usize, b: usize },
}

/// One gate per monomial of `f`, in ascending exponent order.
pub fn expand_poly(template: Template, f: &LaurentPoly) -> Vec<Gate> {
    f.exponents()
        .map(|offset| match template {
            Template::Cnot { control, target } => Gate::Cnot {
                control,
                target,
                offset,
            },
            Template::Csign { a, b } => Gate::Csign { a, b, offset }.canonical(),
        })
        .collect()
}

/// `SWAP(i, j)` from three CNOTs.
pub fn swap_gates(i: usize, j: usize) -> [Gate; 3] {
    let c = |control, target| Gate::Cnot {
        control,
        target,
        offset: 0,
    };
    [c(i, j), c(j, i), c(i, j)]
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self, GateError> {
        for g in &gates {
            g.validate(n)?;
        }
        Ok(Circuit { n, gates })
    }

    pub fn push(&mut self, g: Gate) -> Result<(), GateError> {
        g.validate(self.n)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Every gate here is an involution, so the inverse is the reversed list.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().copied().collect(),
        }
    }

    pub fn apply(&self, s: &mut StabilizerMatrix) {
        for g in &self.gates {
            g.apply(s);
        }
    }

    pub fn memory(&self) -> u64 {
        self.gates
            .iter()
            .map(|g| g.offset().unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Greedy layering: runs of diagonal gates share a layer, Hadamards on
    /// distinct qubits share a layer, and each CNOT gets its own.
    pub fn schedule(&self) -> Schedule {
        let mut layers: Vec<Vec<Gate>> = Vec::new();
        for &g in &self.gates {
            let joins = layers.last().is_some_and(|layer| match g {
                Gate::H(q) => layer.iter().all(|h| matches!(h, Gate::H(p) if *p != q)),
                _ if g.is_diagonal() => layer.iter().all(Gate::is_diagonal),
                _ => false,
            });
            if joins {
                layers.last_mut().unwrap().push(g);
            } else {
                layers.push(vec![g]);
            }
        }
        Schedule {
            layers,
            memory: self.memory(),
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub layers: Vec<Vec<Gate>>,
    pub memory: u64,
}

impl Schedule {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }
}
