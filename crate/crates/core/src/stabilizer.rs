//! Polynomial stabilizer matrices `S(D) = (X(D) | Z(D))` and their finite
//! binary windows.

use std::fmt;

use thiserror::Error;

use crate::gf2::BitVector;
use crate::matrix::LaurentMatrix;
use crate::poly::LaurentPoly;
use crate::smith::{self, RowOp, SmithError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilizerError {
    #[error("X is {xr}x{xc} but Z is {zr}x{zc}")]
    Shape {
        xr: usize,
        xc: usize,
        zr: usize,
        zc: usize,
    },
    #[error(
        "r = {r} generators on n = {n} qubits per block leaves no logical qubits (need r < n)"
    )]
    ZeroRate { r: usize, n: usize },
    #[error("symplectic condition violated: {0}")]
    NotSymplectic(Witness),
    #[error("generators are dependent: rank {rank} < r = {r}")]
    RankDeficient { rank: usize, r: usize },
    #[error(transparent)]
    Smith(#[from] SmithError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WindowError {
    #[error("window of {blocks} blocks is too small for memory {memory}")]
    TooSmall { blocks: usize, memory: usize },
}

/// A nonzero entry of `X(D) Z(1/D)^t + Z(D) X(1/D)^t`; indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub row: usize,
    pub col: usize,
    pub value: LaurentPoly,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "entry ({},{}) = {}",
            self.row + 1,
            self.col + 1,
            self.value
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymplecticCheck {
    Ok,
    /// All nonzero entries on or above the diagonal, row-major.
    Violated(Vec<Witness>),
}

impl SymplecticCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, SymplecticCheck::Ok)
    }

    pub fn witnesses(&self) -> &[Witness] {
        match self {
            SymplecticCheck::Ok => &[],
            SymplecticCheck::Violated(w) => w,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub k: isize,
    pub r: usize,
    pub memory: usize,
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} k={} r={} m={}",
            self.n, self.k, self.r, self.memory
        )
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StabilizerMatrix {
    x: LaurentMatrix,
    z: LaurentMatrix,
}

impl StabilizerMatrix {
    pub fn new(x: LaurentMatrix, z: LaurentMatrix) -> Result<Self, StabilizerError> {
        if (x.nrows(), x.ncols()) != (z.nrows(), z.ncols()) {
            return Err(StabilizerError::Shape {
                xr: x.nrows(),
                xc: x.ncols(),
                zr: z.nrows(),
                zc: z.ncols(),
            });
        }
        Ok(StabilizerMatrix { x, z })
    }

    /// Test and example helper: rows of `X` and `Z` in the polynomial grammar.
    pub fn parse_rows(x: &[&[&str]], z: &[&[&str]]) -> Self {
        StabilizerMatrix::new(LaurentMatrix::parse_rows(x), LaurentMatrix::parse_rows(z))
            .expect("matching shapes")
    }

    /// `(0 0 | I 0)` with `r` rows on `n` qubits.
    pub fn trivial(n: usize, r: usize) -> Self {
        let mut z = LaurentMatrix::zeros(r, n);
        for i in 0..r.min(n) {
            z[(i, i)] = LaurentPoly::one();
        }
        StabilizerMatrix {
            x: LaurentMatrix::zeros(r, n),
            z,
        }
    }

    pub fn n(&self) -> usize {
        self.x.ncols()
    }

    pub fn r(&self) -> usize {
        self.x.nrows()
    }

    pub fn x(&self) -> &LaurentMatrix {
        &self.x
    }

    pub fn z(&self) -> &LaurentMatrix {
        &self.z
    }

    pub fn x_mut(&mut self) -> &mut LaurentMatrix {
        &mut self.x
    }

    pub fn z_mut(&mut self) -> &mut LaurentMatrix {
        &mut self.z
    }

    /// `(X | Z)` as one `r x 2n` matrix.
    pub fn combined(&self) -> LaurentMatrix {
        self.x.hconcat(&self.z)
    }

    pub fn apply_row_op(&mut self, op: &RowOp) {
        op.apply(&mut self.x);
        op.apply(&mut self.z);
    }

    /// `X(D) Z(1/D)^t + Z(D) X(1/D)^t`.
    pub fn commutator(&self) -> LaurentMatrix {
        let xt = self.x.reciprocal().transpose();
        let zt = self.z.reciprocal().transpose();
        self.x.mul(&zt).add(&self.z.mul(&xt))
    }

    pub fn check_symplectic(&self) -> SymplecticCheck {
        let c = self.commutator();
        let mut witnesses = Vec::new();
        for i in 0..c.nrows() {
            // Entry (j, i) is the reciprocal of (i, j).
            for j in i..c.ncols() {
                if !c[(i, j)].is_zero() {
                    witnesses.push(Witness {
                        row: i,
                        col: j,
                        value: c[(i, j)].clone(),
                    });
                }
            }
        }
        if witnesses.is_empty() {
            SymplecticCheck::Ok
        } else {
            SymplecticCheck::Violated(witnesses)
        }
    }

    /// Rank over the rational function field.
    pub fn rank(&self) -> Result<usize, SmithError> {
        Ok(smith::smith(&self.combined())?.rank())
    }

    /// Checks `r < n`, the symplectic condition and full rank.
    pub fn validate(&self) -> Result<(), StabilizerError> {
        if self.r() >= self.n() {
            return Err(StabilizerError::ZeroRate {
                r: self.r(),
                n: self.n(),
            });
        }
        if let SymplecticCheck::Violated(w) = self.check_symplectic() {
            return Err(StabilizerError::NotSymplectic(w[0].clone()));
        }
        let rank = self.rank()?;
        if rank < self.r() {
            return Err(StabilizerError::RankDeficient { rank, r: self.r() });
        }
        Ok(())
    }

    /// `(min, max)` exponent over all entries.
    pub fn exponent_range(&self) -> Option<(i64, i64)> {
        match (self.x.exponent_range(), self.z.exponent_range()) {
            (None, z) => z,
            (x, None) => x,
            (Some((a, b)), Some((c, d))) => Some((a.min(c), b.max(d))),
        }
    }

    pub fn memory(&self) -> usize {
        self.exponent_range()
            .map_or(0, |(lo, hi)| (hi - lo) as usize)
    }

    pub fn params(&self) -> CodeParams {
        CodeParams {
            n: self.n(),
            k: self.n() as isize - self.r() as isize,
            r: self.r(),
            memory: self.memory(),
        }
    }

    /// For `X = (I 0)`: whether the leading `r x r` block of `Z` satisfies
    /// `Z(1/D)^t = Z(D)`. `None` when `X` is not of that shape.
    pub fn systematic_self_dual(&self) -> Option<bool> {
        let r = self.r();
        for i in 0..r {
            for j in 0..self.n() {
                let want = if i == j {
                    LaurentPoly::one()
                } else {
                    LaurentPoly::zero()
                };
                if self.x[(i, j)] != want {
                    return None;
                }
            }
        }
        let lead = self.z.columns(0, r);
        Some(lead.reciprocal().transpose() == lead)
    }

    fn place(&self, gen: usize, block_of: impl Fn(i64) -> i64, blocks: usize) -> BitVector {
        let n = self.n();
        let mut v = BitVector::zeros(2 * n * blocks);
        for q in 0..n {
            for (part, m) in [(0, &self.x), (1, &self.z)] {
                for e in m[(gen, q)].exponents() {
                    let b = block_of(e);
                    if (0..blocks as i64).contains(&b) {
                        v.flip(part * n * blocks + b as usize * n + q);
                    }
                }
            }
        }
        v
    }

    /// The banded binary matrix over `blocks` blocks: every generator at every
    /// shift whose band `G_0 .. G_m` lies inside the window.
    pub fn unroll(&self, blocks: usize) -> Result<UnrolledWindow, WindowError> {
        let memory = self.memory();
        if blocks <= memory {
            return Err(WindowError::TooSmall { blocks, memory });
        }
        let lo = self.exponent_range().map_or(0, |(lo, _)| lo);
        let mut rows = Vec::new();
        let mut placements = Vec::new();
        for t in 0..(blocks - memory) {
            for g in 0..self.r() {
                rows.push(self.place(g, |e| e - lo + t as i64, blocks));
                placements.push(Placement {
                    generator: g,
                    shift: t,
                });
            }
        }
        Ok(UnrolledWindow {
            n: self.n(),
            blocks,
            origin_shift: lo,
            rows,
            placements,
        })
    }

    /// Window restrictions of the generator shifts that straddle an edge of
    /// the window (those excluded by [`unroll`](Self::unroll)).
    pub fn boundary_rows(&self, blocks: usize) -> Vec<BitVector> {
        let memory = self.memory() as i64;
        let lo = self.exponent_range().map_or(0, |(lo, _)| lo);
        let mut out = Vec::new();
        for t in -memory..blocks as i64 {
            if t >= 0 && t + memory < blocks as i64 {
                continue;
            }
            for g in 0..self.r() {
                let v = self.place(g, |e| e - lo + t, blocks);
                if !v.is_zero() {
                    out.push(v);
                }
            }
        }
        out
    }
}

impl fmt::Display for StabilizerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.r() {
            let xs: Vec<String> = self.x.row(i).iter().map(ToString::to_string).collect();
            let zs: Vec<String> = self.z.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{} | {}]", xs.join(", "), zs.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for StabilizerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StabilizerMatrix {}x{}\n{self}", self.r(), self.n())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub generator: usize,
    pub shift: usize,
}

/// Binary rows in `(x | z)` layout; qubit `q` of block `b` is bit `b·n + q`
/// of each half.
#[derive(Debug, Clone)]
pub struct UnrolledWindow {
    pub n: usize,
    pub blocks: usize,
    /// Exponent of `D` that lands in window block 0 for shift 0.
    pub origin_shift: i64,
    pub rows: Vec<BitVector>,
    pub placements: Vec<Placement>,
}

impl UnrolledWindow {
    /// Whether every pair of rows commutes.
    pub fn is_commuting(&self) -> bool {
        self.first_anticommuting_pair().is_none()
    }

    pub fn first_anticommuting_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                if self.rows[i].symplectic_inner(&self.rows[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// An element `a + ω b` of `GF(4)[D, 1/D]`, kept as two binary Laurent
/// polynomials.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct F4Poly {
    pub one: LaurentPoly,
    pub omega: LaurentPoly,
}

impl F4Poly {
    pub fn new(one: LaurentPoly, omega: LaurentPoly) -> Self {
        F4Poly { one, omega }
    }

    /// `ω (a + ω b) = b + ω (a + b)`.
    pub fn times_omega(&self) -> F4Poly {
        F4Poly {
            one: self.omega.clone(),
            omega: &self.one + &self.omega,
        }
    }
}

/// Binary image of an `F4` generator matrix: each row `g` contributes the
/// images of `g` and `ω g` under `a + ω b -> (a | b)`.
pub fn from_f4(rows: &[Vec<F4Poly>]) -> Result<StabilizerMatrix, StabilizerError> {
    let n = rows.first().map_or(0, Vec::len);
    let mut x = Vec::new();
    let mut z = Vec::new();
    for g in rows {
        for image in [g.clone(), g.iter().map(F4Poly::times_omega).collect()] {
            x.push(image.iter().map(|e| e.one.clone()).collect::<Vec<_>>());
            z.push(image.iter().map(|e| e.omega.clone()).collect::<Vec<_>>());
        }
    }
    if x.iter().any(|row| row.len() != n) {
        return Err(StabilizerError::Shape {
            xr: x.len(),
            xc: n,
            zr: z.len(),
            zc: n,
        });
    }
    if x.is_empty() {
        return StabilizerMatrix::new(LaurentMatrix::zeros(0, n), LaurentMatrix::zeros(0, n));
    }
    StabilizerMatrix::new(LaurentMatrix::from_rows(x), LaurentMatrix::from_rows(z))
}
