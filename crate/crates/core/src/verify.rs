//! Finite-window checks: conjugation of Pauli operators by unrolled circuits,
//! error-propagation reports, and encoder round trips.
//!
//! Windows hold `blocks` consecutive blocks of `n` qubits. A template acts at
//! every block shift; instances reaching outside the window are dropped.

use std::fmt::{self, Write as _};

use crate::gates::{Circuit, Gate};
use crate::gf2::{BitVector, RowSpace};
use crate::stabilizer::{StabilizerMatrix, WindowError};
use crate::synthesis::{GammaClass, SynthesisResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

#[derive(Clone, PartialEq, Eq)]
pub struct PauliVector {
    n: usize,
    blocks: usize,
    bits: BitVector,
}

impl PauliVector {
    pub fn identity(n: usize, blocks: usize) -> Self {
        PauliVector {
            n,
            blocks,
            bits: BitVector::zeros(2 * n * blocks),
        }
    }

    pub fn from_bits(n: usize, blocks: usize, bits: BitVector) -> Self {
        assert_eq!(
            bits.len(),
            2 * n * blocks,
            "bit length does not match the window"
        );
        PauliVector { n, blocks, bits }
    }

    pub fn single(n: usize, blocks: usize, block: usize, qubit: usize, p: Pauli) -> Self {
        let mut v = PauliVector::identity(n, blocks);
        let pos = block * n + qubit;
        if matches!(p, Pauli::X | Pauli::Y) {
            v.bits.set(pos, true);
        }
        if matches!(p, Pauli::Z | Pauli::Y) {
            v.bits.set(v.half() + pos, true);
        }
        v
    }

    fn half(&self) -> usize {
        self.n * self.blocks
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn into_bits(self) -> BitVector {
        self.bits
    }

    pub fn x(&self, pos: usize) -> bool {
        self.bits.get(pos)
    }

    pub fn z(&self, pos: usize) -> bool {
        self.bits.get(self.half() + pos)
    }

    fn touches(&self, pos: usize) -> bool {
        self.x(pos) || self.z(pos)
    }

    /// Qubit positions `block * n + q` carrying a non-identity factor.
    pub fn support(&self) -> Vec<usize> {
        (0..self.half()).filter(|&p| self.touches(p)).collect()
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    pub fn commutes_with(&self, other: &PauliVector) -> bool {
        !self.bits.symplectic_inner(&other.bits)
    }

    fn flip_x(&mut self, pos: usize, on: bool) {
        if on {
            self.bits.flip(pos);
        }
    }

    fn flip_z(&mut self, pos: usize, on: bool) {
        if on {
            let h = self.half();
            self.bits.flip(h + pos);
        }
    }

    fn cnot(&mut self, a: usize, b: usize) {
        let (xa, zb) = (self.x(a), self.z(b));
        self.flip_x(b, xa);
        self.flip_z(a, zb);
    }

    fn cz(&mut self, a: usize, b: usize) {
        let (xa, xb) = (self.x(a), self.x(b));
        self.flip_z(b, xa);
        self.flip_z(a, xb);
    }
}

impl fmt::Debug for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.half())
            .map(|p| match (self.x(p), self.z(p)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            })
            .collect();
        write!(f, "PauliVector({s})")
    }
}

/// One step of a window program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowOp {
    /// A shift-invariant template: all instances commute.
    Template(Gate),
    /// CNOTs from `(qubit, t)` to `(qubit, t + offset)` applied one after
    /// another for ascending `t`. The shifts overlap, so the result is not a
    /// finite-depth circuit; used as the catastrophic reference case.
    CnotChain { qubit: usize, offset: i64 },
}

impl WindowOp {
    fn memory(&self) -> u64 {
        match self {
            WindowOp::Template(g) => g.offset().unsigned_abs(),
            WindowOp::CnotChain { offset, .. } => offset.unsigned_abs(),
        }
    }
}

impl fmt::Display for WindowOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowOp::Template(g) => write!(f, "{g}"),
            WindowOp::CnotChain { qubit, offset } => {
                write!(f, "CNOT c={} t={} off={offset}", qubit + 1, qubit + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WindowProgram {
    pub n: usize,
    pub ops: Vec<WindowOp>,
}

impl From<&Circuit> for WindowProgram {
    fn from(c: &Circuit) -> Self {
        WindowProgram {
            n: c.n,
            ops: c.gates.iter().map(|g| WindowOp::Template(*g)).collect(),
        }
    }
}

impl WindowProgram {
    pub fn memory(&self) -> u64 {
        self.ops.iter().map(WindowOp::memory).max().unwrap_or(0)
    }

    pub fn two_qubit_templates(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| match op {
                WindowOp::Template(g) => g.is_two_qubit(),
                WindowOp::CnotChain { .. } => true,
            })
            .count()
    }

    /// Whether every op is a plain template.
    pub fn is_circuit(&self) -> bool {
        self.ops
            .iter()
            .all(|op| matches!(op, WindowOp::Template(_)))
    }

    pub fn to_circuit(&self) -> Option<Circuit> {
        let gates = self
            .ops
            .iter()
            .map(|op| match op {
                WindowOp::Template(g) => Some(*g),
                WindowOp::CnotChain { .. } => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Circuit { n: self.n, gates })
    }

    fn check_window(&self, blocks: usize) -> Result<(), WindowError> {
        let memory = self.memory() as usize;
        if blocks <= memory {
            return Err(WindowError::TooSmall { blocks, memory });
        }
        Ok(())
    }

    pub fn conjugate(&self, blocks: usize, p: &PauliVector) -> Result<PauliVector, WindowError> {
        Ok(self.conjugate_tracked(blocks, p)?.0)
    }

    /// Also reports whether a dropped edge instance acted on the support, in
    /// which case the result differs from the unbounded conjugation.
    pub fn conjugate_tracked(
        &self,
        blocks: usize,
        p: &PauliVector,
    ) -> Result<(PauliVector, bool), WindowError> {
        self.check_window(blocks)?;
        assert_eq!(
            (p.n, p.blocks),
            (self.n, blocks),
            "Pauli vector does not fit this window"
        );
        let mut v = p.clone();
        let mut truncated = false;
        let n = self.n;
        let nb = blocks as i64;
        let pos = |q: usize, b: i64| -> Option<usize> {
            (0..nb).contains(&b).then(|| b as usize * n + q)
        };
        // An instance with a qubit outside the window is dropped; flag it
        // when its in-window part meets the current support.
        let mut pair = |v: &mut PauliVector,
                        qa: usize,
                        ba: i64,
                        qb: usize,
                        bb: i64,
                        act: fn(&mut PauliVector, usize, usize)| {
            match (pos(qa, ba), pos(qb, bb)) {
                (Some(a), Some(b)) => act(v, a, b),
                (Some(a), None) | (None, Some(a)) => truncated |= v.touches(a),
                (None, None) => {}
            }
        };
        for op in &self.ops {
            match *op {
                WindowOp::Template(g) => match g {
                    Gate::H(q) => {
                        for b in 0..blocks {
                            let i = b * n + q;
                            let (x, z) = (v.x(i), v.z(i));
                            if x != z {
                                v.flip_x(i, true);
                                v.flip_z(i, true);
                            }
                        }
                    }
                    Gate::P(q) => {
                        for b in 0..blocks {
                            let i = b * n + q;
                            let x = v.x(i);
                            v.flip_z(i, x);
                        }
                    }
                    Gate::PL { qubit, offset } => {
                        for t in -offset.abs()..nb {
                            pair(&mut v, qubit, t, qubit, t + offset, PauliVector::cz);
                        }
                    }
                    Gate::Cnot {
                        control,
                        target,
                        offset,
                    } => {
                        for t in -offset.abs()..nb {
                            pair(&mut v, control, t, target, t + offset, PauliVector::cnot);
                        }
                    }
                    Gate::Csign { a, b, offset } => {
                        for t in -offset.abs()..nb {
                            pair(&mut v, a, t, b, t + offset, PauliVector::cz);
                        }
                    }
                },
                WindowOp::CnotChain { qubit, offset } => {
                    for t in -offset.abs()..nb {
                        pair(&mut v, qubit, t, qubit, t + offset, PauliVector::cnot);
                    }
                }
            }
        }
        Ok((v, truncated))
    }
}

pub fn conjugate(c: &Circuit, blocks: usize, p: &PauliVector) -> Result<PauliVector, WindowError> {
    WindowProgram::from(c).conjugate(blocks, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bounded,
    Growing,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Bounded => "bounded",
            Verdict::Growing => "growing",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowStat {
    pub blocks: usize,
    /// Largest output support over single-qubit inputs at interior positions.
    pub max_support: usize,
    /// Largest output support per interior seed block, in block order.
    pub per_block: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagationReport {
    pub margin: usize,
    pub windows: Vec<WindowStat>,
    /// `n (2 T m + 1)` for `T` two-qubit templates of memory at most `m`: each
    /// template widens the support by at most `m` blocks on either side, so no
    /// finite-depth program can exceed this in any window.
    pub bound: usize,
    /// Whether the interior maximum is the same for every window size.
    pub uniform: bool,
    pub verdict: Verdict,
}

impl PropagationReport {
    pub fn within_bound(&self) -> bool {
        self.windows.iter().all(|w| w.max_support <= self.bound)
    }

    pub fn table(&self) -> String {
        let mut out = String::from("N\tmax_support\tverdict\n");
        for w in &self.windows {
            let _ = writeln!(out, "{}\t{}\t{}", w.blocks, w.max_support, self.verdict);
        }
        out
    }

    pub fn records(&self) -> String {
        let mut out = String::new();
        for w in &self.windows {
            let _ = writeln!(
                out,
                "propagation N={} max_support={}",
                w.blocks, w.max_support
            );
        }
        let _ = writeln!(
            out,
            "propagation margin={} bound={} uniform={} verdict={}",
            self.margin, self.bound, self.uniform, self.verdict
        );
        out
    }
}

/// Conjugates every single-qubit `X`, `Y` and `Z` in the interior blocks
/// `[m, N - m)` for each window size, `m` being the program memory. Windows
/// too short to have an interior report a maximum of zero.
///
/// The verdict is `Growing` when some interior image is wider than any
/// finite-depth program of this shape allows.
pub fn propagation_report(
    prog: &WindowProgram,
    sizes: &[usize],
) -> Result<PropagationReport, WindowError> {
    let margin = prog.memory() as usize;
    let mut windows = Vec::new();
    for &blocks in sizes {
        prog.check_window(blocks)?;
        let mut per_block = Vec::new();
        for block in margin..blocks.saturating_sub(margin) {
            let mut best = 0;
            for q in 0..prog.n {
                for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                    let v = PauliVector::single(prog.n, blocks, block, q, p);
                    best = best.max(prog.conjugate(blocks, &v)?.weight());
                }
            }
            per_block.push((block, best));
        }
        let max_support = per_block.iter().map(|&(_, s)| s).max().unwrap_or(0);
        windows.push(WindowStat {
            blocks,
            max_support,
            per_block,
        });
    }
    let uniform = windows
        .windows(2)
        .all(|w| w[0].max_support == w[1].max_support);
    let bound = prog.n * (2 * prog.two_qubit_templates() * margin + 1);
    let within = windows.iter().all(|w| w.max_support <= bound);
    Ok(PropagationReport {
        margin,
        windows,
        bound,
        uniform,
        verdict: if within {
            Verdict::Bounded
        } else {
            Verdict::Growing
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Encoder image of a subcode generator lies in the code's window span.
    Encode,
    /// Reduction image of a code generator lies in the subcode's window span.
    Reduce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Pass,
    Fail,
    /// Conjugation met the window edge; not conclusive.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCheck {
    pub direction: Direction,
    pub generator: usize,
    pub shift: usize,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncoderReport {
    pub blocks: usize,
    pub margin: usize,
    pub rows: Vec<RowCheck>,
}

impl EncoderReport {
    pub fn failures(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.status == RowStatus::Fail)
            .count()
    }

    pub fn checked(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.status != RowStatus::Skipped)
            .count()
    }

    /// Every generator must be checked at least once in each direction.
    pub fn passed(&self, generators: usize, code_generators: usize) -> bool {
        let covered = |d: Direction, count: usize| {
            (0..count).all(|g| {
                self.rows
                    .iter()
                    .any(|r| r.direction == d && r.generator == g && r.status == RowStatus::Pass)
            })
        };
        self.failures() == 0
            && covered(Direction::Encode, generators)
            && covered(Direction::Reduce, code_generators)
    }

    pub fn listing(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let dir = match r.direction {
                Direction::Encode => "encode",
                Direction::Reduce => "reduce",
            };
            let status = match r.status {
                RowStatus::Pass => "pass",
                RowStatus::Fail => "FAIL",
                RowStatus::Skipped => "skip",
            };
            let _ = writeln!(
                out,
                "{dir} generator={} shift={} {status}",
                r.generator + 1,
                r.shift
            );
        }
        out
    }

    pub fn records(&self) -> String {
        format!(
            "encoder N={} margin={} checked={} failures={}\n",
            self.blocks,
            self.margin,
            self.checked(),
            self.failures()
        )
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("dimension mismatch: code has n={code}, circuit has n={circuit}")]
    Dimension { code: usize, circuit: usize },
    #[error("window of {blocks} blocks is below the {needed} needed for this code")]
    WindowTooSmall { blocks: usize, needed: usize },
    #[error(transparent)]
    Window(#[from] WindowError),
}

/// Round-trip check of `encoder` against the code `s` and subcode rows `s0`
/// (one row per generator, already scaled by its divisor where needed).
///
/// Encode: each subcode row at each shift, pushed through the encoder, lies
/// in the span of the unrolled code plus its edge truncations. Reduce: each
/// code generator at each interior shift, pushed through the inverse, lies in
/// the span of the unrolled subcode. Rows whose conjugation hits the window
/// edge are skipped. Needs `blocks >= 2 (m + 1)` for code memory `m`.
pub fn check_encoder(
    s: &StabilizerMatrix,
    s0: &StabilizerMatrix,
    encoder: &WindowProgram,
    blocks: usize,
) -> Result<EncoderReport, VerifyError> {
    if s.n() != encoder.n || s0.n() != s.n() {
        return Err(VerifyError::Dimension {
            code: s.n(),
            circuit: encoder.n,
        });
    }
    let n = s.n();
    let needed = 2 * (s.memory() + 1);
    if blocks < needed {
        return Err(VerifyError::WindowTooSmall { blocks, needed });
    }
    let margin = encoder.memory() as usize;
    let reverse = WindowProgram {
        n,
        ops: encoder.ops.iter().rev().copied().collect(),
    };
    let code = s.unroll(blocks)?;
    let mut code_space = RowSpace::from_rows(&code.rows);
    for b in s.boundary_rows(blocks) {
        code_space.insert(b);
    }
    let sub = s0.unroll(blocks)?;
    let sub_space = RowSpace::from_rows(&sub.rows);

    let mut rows = Vec::new();
    let mut check = |dir: Direction,
                     prog: &WindowProgram,
                     bits: &BitVector,
                     generator: usize,
                     shift: usize,
                     space: &RowSpace|
     -> Result<(), WindowError> {
        let v = PauliVector::from_bits(n, blocks, bits.clone());
        let (img, truncated) = prog.conjugate_tracked(blocks, &v)?;
        let status = if truncated {
            RowStatus::Skipped
        } else if space.contains(img.bits()) {
            RowStatus::Pass
        } else {
            RowStatus::Fail
        };
        rows.push(RowCheck {
            direction: dir,
            generator,
            shift,
            status,
        });
        Ok(())
    };
    for (bits, pl) in sub.rows.iter().zip(&sub.placements) {
        check(
            Direction::Encode,
            encoder,
            bits,
            pl.generator,
            pl.shift,
            &code_space,
        )?;
    }
    for (bits, pl) in code.rows.iter().zip(&code.placements) {
        check(
            Direction::Reduce,
            &reverse,
            bits,
            pl.generator,
            pl.shift,
            &sub_space,
        )?;
    }
    Ok(EncoderReport {
        blocks,
        margin,
        rows,
    })
}

/// [`check_encoder`] with the subcode of a synthesis result: `Z_i` rows, or
/// `gamma_i Z_i` for proper divisors.
pub fn verify_encoder(
    s: &StabilizerMatrix,
    result: &SynthesisResult,
    blocks: usize,
) -> Result<EncoderReport, VerifyError> {
    if result.input.n() != s.n() || result.encoder.n != s.n() {
        return Err(VerifyError::Dimension {
            code: s.n(),
            circuit: result.encoder.n,
        });
    }
    check_encoder(
        s,
        &subcode_rows(result),
        &WindowProgram::from(&result.encoder),
        blocks,
    )
}

pub fn subcode_rows(result: &SynthesisResult) -> StabilizerMatrix {
    let mut s0 = result.s0.clone();
    for (i, g) in result.gamma.iter().enumerate() {
        if matches!(g.class, GammaClass::Proper { .. }) {
            s0.z_mut()[(i, i)] = g.value.clone();
        }
    }
    s0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csign_cascade_maps_x_to_zxz() {
        let c = Circuit::from_gates(
            1,
            vec![Gate::Csign {
                a: 0,
                b: 0,
                offset: 1,
            }],
        );
        // a == b is not a valid CSIGN; the single-qubit cascade is PL.
        assert!(c.is_err());
        let c = Circuit::from_gates(
            1,
            vec![Gate::PL {
                qubit: 0,
                offset: 1,
            }],
        )
        .unwrap();
        let out = conjugate(&c, 7, &PauliVector::single(1, 7, 3, 0, Pauli::X)).unwrap();
        assert_eq!(format!("{out:?}"), "PauliVector(IIZXZII)");
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(2);
        let p = PauliVector::single(2, 4, 1, 1, Pauli::Y);
        assert_eq!(conjugate(&c, 4, &p).unwrap(), p);
        let rep = propagation_report(&WindowProgram::from(&c), &[5, 10, 20]).unwrap();
        assert_eq!(rep.verdict, Verdict::Bounded);
        assert!(rep.uniform);
        assert!(rep.windows.iter().all(|w| w.max_support == 1));
    }

    #[test]
    fn chain_spreads_to_the_edge() {
        let prog = WindowProgram {
            n: 1,
            ops: vec![WindowOp::CnotChain {
                qubit: 0,
                offset: 1,
            }],
        };
        let out = prog
            .conjugate(8, &PauliVector::single(1, 8, 0, 0, Pauli::X))
            .unwrap();
        assert_eq!(out.weight(), 8);
        let rep = propagation_report(&prog, &[5, 10, 20]).unwrap();
        assert_eq!(rep.verdict, Verdict::Growing);
        assert!(!rep.uniform);
        // Y at block 1 spreads right to the edge and its Z part one block left.
        let first: Vec<usize> = rep.windows.iter().map(|w| w.per_block[0].1).collect();
        assert_eq!(first, vec![5, 10, 20]);
    }

    #[test]
    fn truncation_is_flagged() {
        let c = Circuit::from_gates(
            2,
            vec![Gate::Cnot {
                control: 0,
                target: 1,
                offset: 1,
            }],
        )
        .unwrap();
        let prog = WindowProgram::from(&c);
        let (_, t) = prog
            .conjugate_tracked(3, &PauliVector::single(2, 3, 2, 0, Pauli::X))
            .unwrap();
        assert!(t);
        let (out, t) = prog
            .conjugate_tracked(3, &PauliVector::single(2, 3, 1, 0, Pauli::X))
            .unwrap();
        assert!(!t);
        assert_eq!(format!("{out:?}"), "PauliVector(IIXIIX)");
    }

    #[test]
    fn hadamard_swaps_x_and_z() {
        let c = Circuit::from_gates(1, vec![Gate::H(0)]).unwrap();
        let out = conjugate(&c, 2, &PauliVector::single(1, 2, 1, 0, Pauli::X)).unwrap();
        assert_eq!(out, PauliVector::single(1, 2, 1, 0, Pauli::Z));
        let y = PauliVector::single(1, 2, 0, 0, Pauli::Y);
        assert_eq!(conjugate(&c, 2, &y).unwrap(), y);
    }

    #[test]
    fn window_too_small() {
        let c = Circuit::from_gates(
            2,
            vec![Gate::Cnot {
                control: 0,
                target: 1,
                offset: 3,
            }],
        )
        .unwrap();
        assert!(conjugate(&c, 3, &PauliVector::identity(2, 3)).is_err());
    }
}
