//! Random inputs shared by the integration tests.
#![allow(dead_code)]

use qconv::gates::Gate;
use qconv::matrix::LaurentMatrix;
use qconv::poly::LaurentPoly;
use qconv::stabilizer::StabilizerMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_gate<R: Rng>(rng: &mut R, n: usize) -> Gate {
    let q = rng.gen_range(0..n);
    let mut other = rng.gen_range(0..n - 1);
    if other >= q {
        other += 1;
    }
    let offset = rng.gen_range(-2..=2);
    match rng.gen_range(0..5) {
        0 => Gate::H(q),
        1 => Gate::P(q),
        2 => Gate::PL {
            qubit: q,
            offset: if offset == 0 { 1 } else { offset },
        },
        3 => Gate::Cnot {
            control: q,
            target: other,
            offset,
        },
        _ => Gate::Csign {
            a: q,
            b: other,
            offset,
        },
    }
}

/// A valid code: `(0 | I 0)` pushed through up to 12 random templates.
pub fn random_code<R: Rng>(rng: &mut R) -> StabilizerMatrix {
    let n = rng.gen_range(2..=4);
    let r = rng.gen_range(1..=(n - 1).min(3));
    let mut s = StabilizerMatrix::trivial(n, r);
    for _ in 0..rng.gen_range(0..=12) {
        random_gate(rng, n).apply(&mut s);
    }
    s
}

/// Flips one monomial of one entry.
pub fn mutate<R: Rng>(rng: &mut R, s: &StabilizerMatrix) -> StabilizerMatrix {
    let mut m = s.clone();
    let (i, j) = (rng.gen_range(0..m.r()), rng.gen_range(0..m.n()));
    let e = LaurentPoly::monomial(rng.gen_range(-2..=2));
    if rng.gen_bool(0.5) {
        m.x_mut()[(i, j)] += &e;
    } else {
        m.z_mut()[(i, j)] += &e;
    }
    m
}

pub fn random_poly<R: Rng>(rng: &mut R, max_degree: i64) -> LaurentPoly {
    LaurentPoly::from_exponents((0..=max_degree).filter(|_| rng.gen_bool(0.5)))
}

pub fn random_matrix<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    max_degree: i64,
) -> LaurentMatrix {
    LaurentMatrix::from_rows(
        (0..rows)
            .map(|_| (0..cols).map(|_| random_poly(rng, max_degree)).collect())
            .collect(),
    )
}

pub fn worked_example() -> StabilizerMatrix {
    StabilizerMatrix::parse_rows(
        &[&["1 + D", "1", "1 + D"], &["0", "D", "D"]],
        &[&["0", "D", "D"], &["1 + D", "1 + D", "1"]],
    )
}

/// Invariant factors from gcds of `k x k` minors, as constant-term-one
/// bodies (Laurent units dropped).
pub fn minors_oracle(m: &LaurentMatrix) -> Vec<qconv::poly::Poly> {
    use qconv::poly::Poly;
    let (r, c) = (m.nrows(), m.ncols());
    let mut d_prev = Poly::one();
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut g = Poly::zero();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub = LaurentMatrix::from_rows(
                    rows.iter()
                        .map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect())
                        .collect(),
                );
                let det = sub.determinant();
                if !det.is_zero() {
                    g = g.gcd(det.body());
                }
            }
        }
        if g.is_zero() {
            break;
        }
        let (q, rem) = g.divmod(&d_prev).unwrap();
        assert!(rem.is_zero(), "minor gcds must form a divisibility chain");
        out.push(q);
        d_prev = g;
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Commutation of every pair of rows in a window where every relative shift
/// the commutator can reach is present.
pub fn full_window_commutes(s: &StabilizerMatrix) -> bool {
    let m = s.memory();
    s.unroll(2 * m + 1).unwrap().is_commuting()
}

/// `(a + w b)(c + w d)` with `w^2 = w + 1`.
pub fn f4_mul(
    u: &qconv::stabilizer::F4Poly,
    v: &qconv::stabilizer::F4Poly,
) -> qconv::stabilizer::F4Poly {
    let (a, b, c, d) = (&u.one, &u.omega, &v.one, &v.omega);
    let bd = b * d;
    qconv::stabilizer::F4Poly::new(&(a * c) + &bd, &(&(a * d) + &(b * c)) + &bd)
}

/// Conjugation `w -> w^2` together with `D -> 1/D`.
pub fn f4_bar(u: &qconv::stabilizer::F4Poly) -> qconv::stabilizer::F4Poly {
    qconv::stabilizer::F4Poly::new((&u.one + &u.omega).reciprocal(), u.omega.reciprocal())
}

/// Trace-hermitian self-orthogonality of the additive code spanned by the
/// rows and their `w` multiples: the trace of `a + w b` is `b`.
pub fn f4_self_orthogonal(rows: &[Vec<qconv::stabilizer::F4Poly>]) -> bool {
    let mut all = Vec::new();
    for g in rows {
        all.push(g.clone());
        all.push(g.iter().map(|e| e.times_omega()).collect::<Vec<_>>());
    }
    all.iter().all(|u| {
        all.iter().all(|v| {
            let mut acc = qconv::stabilizer::F4Poly::default();
            for (x, y) in u.iter().zip(v) {
                let p = f4_mul(x, &f4_bar(y));
                acc.one += &p.one;
                acc.omega += &p.omega;
            }
            acc.omega.is_zero()
        })
    })
}
