//! Smith normal form over the Laurent ring `GF(2)[D, 1/D]`.
//!
//! The reduction is driven entirely by elementary operations so that the
//! column side can be replayed as CNOT templates. Pivots are moved into place
//! without column swaps: when the smallest entry `p` of a row sits in column
//! `c` and divides the entry `x` at the pivot column `t`, the reducer adds
//! `(x + p)/p` times column `c` to column `t` (making the pivot equal to `p`)
//! and then column `t` to column `c` (clearing it).
//!
//! Row operations (additions, swaps and unit scalings by `D^k`) are logged
//! separately; they never become gates.

use thiserror::Error;

use crate::matrix::LaurentMatrix;
use crate::poly::{LaurentPoly, DEFAULT_MAX_SPAN};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SmithError {
    #[error("exponent window exceeded: |exponent| {found} > limit {limit}")]
    SpanOverflow { found: u64, limit: u64 },
    #[error("column index {index} out of range for {cols} columns")]
    IndexOutOfRange { index: usize, cols: usize },
    #[error("malformed column operation: {0}")]
    Malformed(String),
}

/// An elementary column operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColOp {
    /// `col[to] += factor · col[from]`.
    Add {
        from: usize,
        to: usize,
        factor: LaurentPoly,
    },
    /// `col[a] <-> col[b]`.
    Swap { a: usize, b: usize },
}

impl ColOp {
    fn validate(&self, cols: usize) -> Result<(), SmithError> {
        let (i, j) = match self {
            ColOp::Add { from, to, factor } => {
                if factor.is_zero() {
                    return Err(SmithError::Malformed("zero factor".into()));
                }
                (*from, *to)
            }
            ColOp::Swap { a, b } => (*a, *b),
        };
        for index in [i, j] {
            if index >= cols {
                return Err(SmithError::IndexOutOfRange { index, cols });
            }
        }
        if i == j {
            return Err(SmithError::Malformed(format!("column {i} used twice")));
        }
        Ok(())
    }

    fn apply(&self, m: &mut LaurentMatrix) {
        match self {
            ColOp::Add { from, to, factor } => m.add_col_multiple(*from, *to, factor),
            ColOp::Swap { a, b } => m.swap_cols(*a, *b),
        }
    }
}

/// An elementary row operation. These change the presentation of a row
/// space, never the row space itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOp {
    /// `row[to] += factor · row[from]`.
    Add {
        from: usize,
        to: usize,
        factor: LaurentPoly,
    },
    Swap {
        a: usize,
        b: usize,
    },
    /// `row[row] *= D^by`.
    Shift {
        row: usize,
        by: i64,
    },
}

impl RowOp {
    pub fn apply(&self, m: &mut LaurentMatrix) {
        match self {
            RowOp::Add { from, to, factor } => m.add_row_multiple(*from, *to, factor),
            RowOp::Swap { a, b } => m.swap_rows(*a, *b),
            RowOp::Shift { row, by } => m.shift_row(*row, *by),
        }
    }
}

/// One step of a reduction transcript, in the order it was performed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionOp {
    Col(ColOp),
    Row(RowOp),
}

/// `M = A · Gamma · B`, together with the operations that produced it.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    /// Row transform (`r x r`), inverse of the logged row operations.
    pub a: LaurentMatrix,
    /// Diagonal `r x n` matrix of elementary divisors.
    pub gamma: LaurentMatrix,
    /// Column transform (`n x n`): the logged column operations applied to the
    /// identity in reverse order.
    pub b: LaurentMatrix,
    /// Column operations in application order; `M` with these applied is `A · Gamma`.
    pub col_ops: Vec<ColOp>,
    /// Complete interleaved transcript.
    pub log: Vec<ReductionOp>,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries `gamma_1 .. gamma_s`.
    pub fn elementary_divisors(&self) -> Vec<LaurentPoly> {
        diagonal(&self.gamma)
            .into_iter()
            .take_while(|g| !g.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }

    pub fn row_ops(&self) -> impl Iterator<Item = &RowOp> {
        self.log.iter().filter_map(|op| match op {
            ReductionOp::Row(r) => Some(r),
            ReductionOp::Col(_) => None,
        })
    }
}

/// Diagonal entries `m[(i, i)]` for `i < min(rows, cols)`.
pub fn diagonal(m: &LaurentMatrix) -> Vec<LaurentPoly> {
    (0..m.nrows().min(m.ncols()))
        .map(|i| m[(i, i)].clone())
        .collect()
}

/// Sum of Laurent degrees of the nonzero entries; the termination measure of
/// the divisor-reduction loop.
pub fn degree_measure(divisors: &[LaurentPoly]) -> usize {
    divisors
        .iter()
        .filter_map(LaurentPoly::laurent_degree)
        .sum()
}

pub fn smith(m: &LaurentMatrix) -> Result<SmithDecomposition, SmithError> {
    smith_with_limit(m, DEFAULT_MAX_SPAN)
}

pub fn smith_with_limit(
    m: &LaurentMatrix,
    max_span: u64,
) -> Result<SmithDecomposition, SmithError> {
    let mut red = Reducer {
        w: m.clone(),
        a: LaurentMatrix::identity(m.nrows()),
        log: Vec::new(),
        limit: max_span,
    };
    red.check_span()?;
    red.run()?;
    let col_ops: Vec<ColOp> = red
        .log
        .iter()
        .filter_map(|op| match op {
            ReductionOp::Col(c) => Some(c.clone()),
            ReductionOp::Row(_) => None,
        })
        .collect();
    let mut b = LaurentMatrix::identity(m.ncols());
    for op in col_ops.iter().rev() {
        op.apply(&mut b);
    }
    Ok(SmithDecomposition {
        a: red.a,
        gamma: red.w,
        b,
        col_ops,
        log: red.log,
    })
}

/// Applies column operations left to right.
pub fn apply_col_ops(m: &LaurentMatrix, ops: &[ColOp]) -> Result<LaurentMatrix, SmithError> {
    let mut out = m.clone();
    for op in ops {
        op.validate(m.ncols())?;
        op.apply(&mut out);
    }
    Ok(out)
}

/// For each row `i`, whether `gamma_i` divides every entry of row `i` of `u`.
pub fn row_divisibility_check(gamma: &LaurentMatrix, u: &LaurentMatrix) -> Vec<bool> {
    let diag = diagonal(gamma);
    (0..u.nrows())
        .map(|i| {
            let g = diag.get(i).cloned().unwrap_or_else(LaurentPoly::zero);
            u.row(i).iter().all(|x| {
                if g.is_zero() {
                    x.is_zero()
                } else {
                    g.divides(x)
                }
            })
        })
        .collect()
}

/// Row scaling that brings a diagonal entry to normal form: a polynomial with
/// constant term one, `1`, or a positive power `D^l` (kept to preserve the
/// distinction between unit and shift divisors).
pub fn unit_normalization(p: &LaurentPoly) -> i64 {
    match p.low() {
        None => 0,
        Some(low) if p.is_monomial() && low > 0 => 0,
        Some(low) => -low,
    }
}

struct Reducer {
    w: LaurentMatrix,
    a: LaurentMatrix,
    log: Vec<ReductionOp>,
    limit: u64,
}

fn deg(p: &LaurentPoly) -> usize {
    p.laurent_degree().unwrap_or(usize::MAX)
}

impl Reducer {
    fn check_span(&self) -> Result<(), SmithError> {
        let found = self.w.max_abs_exponent();
        if found > self.limit {
            return Err(SmithError::SpanOverflow {
                found,
                limit: self.limit,
            });
        }
        Ok(())
    }

    fn col_add(&mut self, from: usize, to: usize, factor: LaurentPoly) -> Result<(), SmithError> {
        if factor.is_zero() {
            return Ok(());
        }
        let op = ColOp::Add { from, to, factor };
        op.apply(&mut self.w);
        self.log.push(ReductionOp::Col(op));
        self.check_span()
    }

    fn row_op(&mut self, op: RowOp) -> Result<(), SmithError> {
        match &op {
            RowOp::Add { factor, .. } if factor.is_zero() => return Ok(()),
            RowOp::Shift { by: 0, .. } => return Ok(()),
            RowOp::Add { from, to, factor } => self.a.add_col_multiple(*to, *from, factor),
            RowOp::Swap { a, b } => self.a.swap_cols(*a, *b),
            RowOp::Shift { row, by } => self.a.shift_col(*row, -by),
        }
        op.apply(&mut self.w);
        self.log.push(ReductionOp::Row(op));
        self.check_span()
    }

    fn run(&mut self) -> Result<(), SmithError> {
        let (r, n) = (self.w.nrows(), self.w.ncols());
        for t in 0..r.min(n) {
            let Some((pr, _)) = self.min_entry(t..r, t..n) else {
                break;
            };
            if pr != t {
                self.row_op(RowOp::Swap { a: t, b: pr })?;
            }
            self.reduce_pivot(t)?;
            let by = unit_normalization(&self.w[(t, t)]);
            self.row_op(RowOp::Shift { row: t, by })?;
        }
        Ok(())
    }

    /// Position of the entry of least Laurent degree; ties by row, then column.
    fn min_entry(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in rows {
            for j in cols.clone() {
                let x = &self.w[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let d = deg(x);
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn reduce_pivot(&mut self, t: usize) -> Result<(), SmithError> {
        let (r, n) = (self.w.nrows(), self.w.ncols());
        loop {
            self.clear_row(t)?;
            let p = self.w[(t, t)].clone();
            for i in t + 1..r {
                let x = self.w[(i, t)].clone();
                if x.is_zero() {
                    continue;
                }
                let (q, _) = x.div_rem(&p).expect("nonzero pivot");
                self.row_op(RowOp::Add {
                    from: t,
                    to: i,
                    factor: q,
                })?;
            }
            if let Some((i, _)) = self.min_entry(t + 1..r, t..t + 1) {
                // A remainder of smaller degree than the pivot survived.
                self.row_op(RowOp::Swap { a: t, b: i })?;
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..n).any(|j| !p.divides(&self.w[(i, j)])));
            if let Some(i) = offender {
                self.row_op(RowOp::Add {
                    from: i,
                    to: t,
                    factor: LaurentPoly::one(),
                })?;
                continue;
            }
            return Ok(());
        }
    }

    fn clear_row(&mut self, t: usize) -> Result<(), SmithError> {
        let n = self.w.ncols();
        loop {
            let nonzero: Vec<usize> = (t..n).filter(|&c| !self.w[(t, c)].is_zero()).collect();
            if nonzero.is_empty() || nonzero == [t] {
                return Ok(());
            }
            let pc = *nonzero
                .iter()
                .min_by_key(|&&c| (deg(&self.w[(t, c)]), c))
                .expect("nonempty");
            let p = self.w[(t, pc)].clone();
            if pc == t {
                for c in nonzero.into_iter().filter(|&c| c != t) {
                    let (q, _) = self.w[(t, c)].div_rem(&p).expect("nonzero pivot");
                    self.col_add(t, c, q)?;
                }
            } else {
                let x = self.w[(t, t)].clone();
                let (q, rem) = x.div_rem(&p).expect("nonzero pivot");
                if rem.is_zero() {
                    self.col_add(pc, t, &q + &LaurentPoly::one())?;
                    self.col_add(t, pc, LaurentPoly::one())?;
                } else {
                    self.col_add(pc, t, q)?;
                }
            }
        }
    }
}
