//! Reduction of a stabilizer matrix to `(0 0 | Gamma 0)` by shift-invariant
//! Clifford gates, and the encoder obtained by reversing the reduction.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::gates::{expand_poly, swap_gates, Circuit, Gate, Template};
use crate::poly::{inverse_period, LaurentPoly, RationalFn, DEFAULT_MAX_SPAN};
use crate::smith::{self, degree_measure, ColOp, ReductionOp, RowOp, SmithError};
use crate::stabilizer::{StabilizerError, StabilizerMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("precondition failed: {0}")]
    Precondition(#[from] StabilizerError),
    #[error("entry ({row},{col}) cannot be cleared: {reason}", row = .row + 1, col = .col + 1)]
    NonClearable {
        row: usize,
        col: usize,
        reason: String,
    },
    #[error("divisor-reduction loop did not terminate as expected: {0}")]
    LoopLimit(String),
    #[error(transparent)]
    Smith(#[from] SmithError),
}

/// One entry of the reduction transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transform {
    Gate(Gate),
    /// Changes the presentation only; emits no gate.
    Row(RowOp),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub step: u8,
    pub label: String,
    pub matrix: StabilizerMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaClass {
    Unit,
    /// `gamma = D^l` with `l > 0`.
    Shift(u64),
    /// Anything else. `period` is the period of the expansion of `1/gamma`
    /// when the body has constant term one, and `head` its first terms.
    Proper {
        period: Option<usize>,
        head: Vec<bool>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaEntry {
    pub value: LaurentPoly,
    pub class: GammaClass,
}

impl GammaEntry {
    pub fn note(&self) -> String {
        match &self.class {
            GammaClass::Unit => "unit: input constrained to |0>".to_string(),
            GammaClass::Shift(l) => {
                format!("shift l={l}: first {l} block(s) unconstrained, input constrained to |0> thereafter")
            }
            GammaClass::Proper { period, head } => {
                let bits: String = head.iter().map(|b| if *b { '1' } else { '0' }).collect();
                match period {
                    Some(p) => format!("proper: subcode only; 1/gamma has period {p}, head {bits}"),
                    None => format!("proper: subcode only; 1/gamma head {bits}"),
                }
            }
        }
    }
}

const HEAD_LEN: usize = 8;

pub fn classify(gamma: &[LaurentPoly]) -> Vec<GammaEntry> {
    gamma
        .iter()
        .map(|g| {
            let class = if g.is_one() {
                GammaClass::Unit
            } else if g.is_monomial() && g.low().is_some_and(|l| l > 0) {
                GammaClass::Shift(g.low().unwrap() as u64)
            } else {
                let body = g.body();
                let period = inverse_period(body);
                let head = RationalFn::inverse_of(body)
                    .and_then(|f| f.series_head(HEAD_LEN))
                    .unwrap_or_default();
                GammaClass::Proper { period, head }
            };
            GammaEntry {
                value: g.clone(),
                class,
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub input: StabilizerMatrix,
    /// Reduction circuit: maps the input to `normal_form`.
    pub forward: Circuit,
    /// `forward` reversed; maps the subcode stabilizer into the code.
    pub encoder: Circuit,
    pub gamma: Vec<GammaEntry>,
    pub s0: StabilizerMatrix,
    pub normal_form: StabilizerMatrix,
    pub transcript: Vec<Transform>,
    pub checkpoints: Vec<Checkpoint>,
    /// Degree measure of `Gamma` after each full-rank reduction in the
    /// Hadamard loop.
    pub measures: Vec<usize>,
    pub loop_iterations: usize,
}

impl SynthesisResult {
    pub fn n(&self) -> usize {
        self.input.n()
    }

    pub fn k(&self) -> usize {
        self.input.n() - self.input.r()
    }

    pub fn memory(&self) -> u64 {
        self.encoder.memory()
    }

    pub fn all_units(&self) -> bool {
        self.gamma.iter().all(|g| g.class == GammaClass::Unit)
    }

    /// Row operations from the transcript, in order.
    pub fn row_ops(&self) -> Vec<RowOp> {
        self.transcript
            .iter()
            .filter_map(|t| match t {
                Transform::Row(r) => Some(r.clone()),
                Transform::Gate(_) => None,
            })
            .collect()
    }

    /// Plain-text summary: parameters, divisors, memory, depth and subcode note.
    pub fn report(&self) -> String {
        let mut out = String::new();
        let sched = self.encoder.schedule();
        let _ = writeln!(out, "n={} k={} r={}", self.n(), self.k(), self.input.r());
        let _ = writeln!(out, "gates={}", self.encoder.len());
        let _ = writeln!(out, "memory={}", sched.memory);
        let _ = writeln!(out, "layers={}", sched.depth());
        let diag: Vec<String> = self.gamma.iter().map(|g| g.value.to_string()).collect();
        let _ = writeln!(out, "gamma=diag({})", diag.join(", "));
        for (i, g) in self.gamma.iter().enumerate() {
            let _ = writeln!(out, "gamma[{}]={} {}", i + 1, g.value, g.note());
        }
        let note = if self.all_units() {
            "subcode equals the code"
        } else {
            "subcode S0 = (0 0 | I 0) encodes a subcode of the code"
        };
        let _ = writeln!(out, "subcode: {note}");
        out
    }
}

/// `(0 0 | I 0)` with the shape of the result.
pub fn subcode_stabilizer(result: &SynthesisResult) -> StabilizerMatrix {
    StabilizerMatrix::trivial(result.n(), result.input.r())
}

pub fn synthesize(s: &StabilizerMatrix) -> Result<SynthesisResult, SynthesisError> {
    synthesize_with_limit(s, DEFAULT_MAX_SPAN)
}

struct Run {
    s: StabilizerMatrix,
    transcript: Vec<Transform>,
    checkpoints: Vec<Checkpoint>,
    since_checkpoint: usize,
    step: u8,
}

impl Run {
    fn gate(&mut self, g: Gate) {
        g.apply(&mut self.s);
        self.transcript.push(Transform::Gate(g));
        self.since_checkpoint += 1;
    }

    fn row(&mut self, op: RowOp) {
        self.s.apply_row_op(&op);
        self.transcript.push(Transform::Row(op));
        self.since_checkpoint += 1;
    }

    fn checkpoint(&mut self, label: impl Into<String>) {
        if self.since_checkpoint == 0 {
            return;
        }
        self.checkpoints.push(Checkpoint {
            step: self.step,
            label: label.into(),
            matrix: self.s.clone(),
        });
        self.since_checkpoint = 0;
    }

    /// Replays a reduction log: column operations as CNOT templates, row
    /// operations directly. Checkpoints at every switch between the two.
    fn replay(&mut self, log: &[ReductionOp]) {
        let mut last_was_col = None;
        for op in log {
            let is_col = matches!(op, ReductionOp::Col(_));
            if last_was_col.is_some_and(|c| c != is_col) {
                self.checkpoint(if is_col {
                    "row operations"
                } else {
                    "column operations"
                });
            }
            last_was_col = Some(is_col);
            match op {
                ReductionOp::Col(ColOp::Add { from, to, factor }) => {
                    for g in expand_poly(
                        Template::Cnot {
                            control: *from,
                            target: *to,
                        },
                        factor,
                    ) {
                        self.gate(g);
                    }
                }
                ReductionOp::Col(ColOp::Swap { a, b }) => {
                    for g in swap_gates(*a, *b) {
                        self.gate(g);
                    }
                }
                ReductionOp::Row(r) => self.row(r.clone()),
            }
        }
        if let Some(c) = last_was_col {
            self.checkpoint(if c {
                "column operations"
            } else {
                "row operations"
            });
        }
    }
}

/// `P` for the constant term of a symmetric `sigma`, `PL(l)` for each pair
/// `D^-l + D^l`: together they add `sigma * x` to `z`.
fn symmetric_gates(qubit: usize, sigma: &LaurentPoly) -> Vec<Gate> {
    let mut out = Vec::new();
    if sigma.coeff(0) {
        out.push(Gate::P(qubit));
    }
    out.extend(
        sigma
            .exponents()
            .filter(|&l| l > 0)
            .map(|offset| Gate::PL { qubit, offset }),
    );
    out
}

/// Drives `(X_ii | Z_ii)` to `(g | 0)`. Both entries share their centre of
/// symmetry, so `D^-j + D^j` (or `1`) times the shorter one cancels both ends
/// of the longer one.
fn reduce_diagonal_pair(run: &mut Run, i: usize) -> Result<(), SynthesisError> {
    loop {
        let a = run.s.x()[(i, i)].clone();
        let b = run.s.z()[(i, i)].clone();
        if b.is_zero() {
            return Ok(());
        }
        if a.is_zero() || b.laurent_degree() < a.laurent_degree() {
            run.gate(Gate::H(i));
            continue;
        }
        let (la, ha) = (a.low().unwrap(), a.high().unwrap());
        let (lb, hb) = (b.low().unwrap(), b.high().unwrap());
        if la + ha != lb + hb {
            return Err(non_clearable(
                i,
                i,
                format!("{a} and {b} are not centred alike"),
            ));
        }
        let j = la - lb;
        let sigma = if j == 0 {
            LaurentPoly::one()
        } else {
            &LaurentPoly::monomial(-j) + &LaurentPoly::monomial(j)
        };
        for g in symmetric_gates(i, &sigma) {
            run.gate(g);
        }
    }
}

fn non_clearable(row: usize, col: usize, reason: impl Into<String>) -> SynthesisError {
    SynthesisError::NonClearable {
        row,
        col,
        reason: reason.into(),
    }
}

pub fn synthesize_with_limit(
    s: &StabilizerMatrix,
    max_span: u64,
) -> Result<SynthesisResult, SynthesisError> {
    s.validate()?;
    let (n, r) = (s.n(), s.r());
    let mut run = Run {
        s: s.clone(),
        transcript: Vec::new(),
        checkpoints: Vec::new(),
        since_checkpoint: 0,
        step: 1,
    };

    // Step 1: Smith form of X.
    let dec = smith::smith_with_limit(run.s.x(), max_span)?;
    run.replay(&dec.log);
    let mut rank = dec.rank();
    let mut gamma = dec.elementary_divisors();

    // Step 2: move residual Z columns into X until Gamma has full rank and
    // every residual Z entry is a multiple of its row's divisor. The
    // multiples are cleared with CSIGN in step 4.
    run.step = 2;
    let mut measures = Vec::new();
    let mut iterations = 0;
    let mut budget: Option<usize> = None;
    if rank == r {
        measures.push(degree_measure(&gamma));
    }
    loop {
        let residual: Vec<usize> = (rank..n)
            .filter(|&j| (0..r).any(|i| !run.s.z()[(i, j)].is_zero()))
            .collect();
        if residual.is_empty() {
            break;
        }
        if rank == r
            && (0..r).all(|i| {
                residual
                    .iter()
                    .all(|&j| gamma[i].divides(&run.s.z()[(i, j)]))
            })
        {
            break;
        }
        iterations += 1;
        // One pass may be spent completing the rank; after that each pass
        // must lower the measure, which bounds the remaining passes by it.
        let limit = budget.unwrap_or(1);
        if iterations > limit + 1 {
            return Err(SynthesisError::LoopLimit(format!(
                "{iterations} passes exceed the budget of {}",
                limit + 1
            )));
        }
        for &j in &residual {
            run.gate(Gate::H(j));
        }
        run.checkpoint("hadamard swap");
        let dec = smith::smith_with_limit(run.s.x(), max_span)?;
        run.replay(&dec.log);
        rank = dec.rank();
        gamma = dec.elementary_divisors();
        if rank == r {
            let m = degree_measure(&gamma);
            if let Some(&prev) = measures.last() {
                if m >= prev {
                    return Err(SynthesisError::LoopLimit(format!(
                        "degree measure did not decrease ({prev} -> {m})"
                    )));
                }
            }
            if budget.is_none() {
                budget = Some(iterations + m);
            }
            measures.push(m);
        }
    }
    if rank < r {
        return Err(SynthesisError::Precondition(
            StabilizerError::RankDeficient { rank, r },
        ));
    }

    // Step 3: the shape (Gamma 0 | Z1 Z2) with Gamma diagonal.
    run.step = 3;
    for i in 0..r {
        for j in 0..n {
            let want = if i == j {
                gamma[i].clone()
            } else {
                LaurentPoly::zero()
            };
            if run.s.x()[(i, j)] != want {
                return Err(non_clearable(
                    i,
                    j,
                    "X part is not (Gamma 0) after reduction",
                ));
            }
        }
    }

    // Step 4: off-diagonal Z entries.
    run.step = 4;
    for i in 0..r {
        for j in (0..n).filter(|&j| j != i) {
            let entry = run.s.z()[(i, j)].clone();
            if entry.is_zero() {
                continue;
            }
            let f = entry.exact_div(&gamma[i]).ok_or_else(|| {
                non_clearable(i, j, format!("{entry} is not a multiple of {}", gamma[i]))
            })?;
            for g in expand_poly(Template::Csign { a: i, b: j }, &f) {
                run.gate(g);
            }
        }
        for j in (0..n).filter(|&j| j != i) {
            if !run.s.z()[(i, j)].is_zero() {
                return Err(non_clearable(i, j, "entry survived clearing"));
            }
        }
        for k in (0..r).filter(|&k| k != i) {
            if !run.s.z()[(k, i)].is_zero() {
                return Err(non_clearable(k, i, "paired entry did not vanish"));
            }
        }
        run.checkpoint(format!("row {}", i + 1));
    }

    // Step 5: diagonal Z entries, Z_ii = gamma_i * sigma_i with sigma_i
    // symmetric. When the quotient is not a Laurent polynomial, qubit i is
    // isolated by now and the pair (X_ii | Z_ii) is reduced by a Euclidean
    // loop with symmetric multipliers instead.
    run.step = 5;
    for i in 0..r {
        let entry = run.s.z()[(i, i)].clone();
        if entry.is_zero() {
            continue;
        }
        match entry.exact_div(&gamma[i]) {
            Some(sigma) => {
                if !sigma.is_symmetric() {
                    return Err(non_clearable(
                        i,
                        i,
                        format!("quotient {sigma} is not symmetric"),
                    ));
                }
                for g in symmetric_gates(i, &sigma) {
                    run.gate(g);
                }
            }
            None => {
                reduce_diagonal_pair(&mut run, i)?;
                gamma[i] = run.s.x()[(i, i)].clone();
                let by = smith::unit_normalization(&gamma[i]);
                if by != 0 {
                    run.row(RowOp::Shift { row: i, by });
                    gamma[i] = gamma[i].shift(by);
                }
            }
        }
    }
    run.checkpoint("diagonal");

    // Step 6: move Gamma to the Z side.
    run.step = 6;
    for i in 0..r {
        run.gate(Gate::H(i));
    }
    run.checkpoint("hadamard");

    let normal_form = run.s.clone();
    debug_assert!(normal_form.x().is_zero());

    let gates: Vec<Gate> = run
        .transcript
        .iter()
        .filter_map(|t| match t {
            Transform::Gate(g) => Some(*g),
            Transform::Row(_) => None,
        })
        .collect();
    let forward = Circuit { n, gates };
    let encoder = forward.inverse();
    let gamma = classify(&gamma);
    Ok(SynthesisResult {
        input: s.clone(),
        forward,
        encoder,
        gamma,
        s0: StabilizerMatrix::trivial(n, r),
        normal_form,
        transcript: run.transcript,
        checkpoints: run.checkpoints,
        measures,
        loop_iterations: iterations,
    })
}

impl fmt::Display for Checkpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# step {}: {}", self.step, self.label)?;
        write!(f, "{}", self.matrix)
    }
}
