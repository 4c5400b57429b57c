mod common;

use common::*;
use proptest::prelude::*;
use qconv::gates::{Circuit, Gate};
use qconv::io;
use qconv::poly::LaurentPoly;
use qconv::smith;
use qconv::stabilizer::{from_f4, F4Poly, StabilizerMatrix};
use qconv::synthesis::{synthesize, Transform};
use qconv::verify::{PauliVector, WindowProgram};
use rand::Rng;

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    (prop::collection::vec(-6i64..=6, 0..6)).prop_map(LaurentPoly::from_exponents)
}

proptest! {
    #[test]
    fn ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a + &a).is_zero());
        prop_assert_eq!((&a * &b).reciprocal(), &a.reciprocal() * &b.reciprocal());
        prop_assert_eq!(a.reciprocal().reciprocal(), a.clone());
    }

    #[test]
    fn division_with_remainder(a in laurent(), b in laurent()) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a.clone());
        if let Some(rd) = r.laurent_degree() {
            prop_assert!(rd < b.laurent_degree().unwrap());
        }
        prop_assert_eq!((&a * &b).exact_div(&b), Some(a.clone()));
    }

    #[test]
    fn poly_text_round_trip(a in laurent()) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<LaurentPoly>().unwrap(), a);
    }
}

#[test]
fn smith_against_minors() {
    let mut rng = rng(11);
    for _ in 0..150 {
        let (r, c) = (rng.gen_range(1..=3), rng.gen_range(1..=4));
        let m = random_matrix(&mut rng, r, c, 3);
        let dec = smith::smith(&m).unwrap();
        assert_eq!(dec.a.mul(&dec.gamma).mul(&dec.b), m);
        assert_eq!(
            &smith::apply_col_ops(&m, &dec.col_ops).unwrap(),
            &dec.a.mul(&dec.gamma)
        );
        let divs = dec.elementary_divisors();
        let oracle = minors_oracle(&m);
        assert_eq!(divs.len(), oracle.len(), "{m:?}");
        for (g, o) in divs.iter().zip(&oracle) {
            assert_eq!(g.body(), o, "{m:?}");
        }
        for w in divs.windows(2) {
            assert!(w[0].divides(&w[1]));
        }
        assert!(dec.a.determinant().is_monomial());
        assert!(dec.b.determinant().is_monomial());
    }
}

#[test]
fn symplectic_check_matches_full_window() {
    let mut rng = rng(12);
    let mut invalid = 0;
    for k in 0..400 {
        let s = random_code(&mut rng);
        let s = if k % 2 == 0 { s } else { mutate(&mut rng, &s) };
        let ok = s.check_symplectic().is_ok();
        invalid += usize::from(!ok);
        assert_eq!(ok, full_window_commutes(&s), "{s}");
    }
    assert!(invalid > 50);
}

#[test]
fn gates_preserve_the_symplectic_condition() {
    let mut rng = rng(13);
    for _ in 0..100 {
        let mut s = random_code(&mut rng);
        for _ in 0..5 {
            random_gate(&mut rng, s.n()).apply(&mut s);
            assert!(s.check_symplectic().is_ok());
        }
    }
}

fn embed(row: &StabilizerMatrix, blocks: usize, pad: i64) -> PauliVector {
    let n = row.n();
    let mut bits = vec![false; 2 * n * blocks];
    for q in 0..n {
        for (half, m) in [(0, row.x()), (1, row.z())] {
            for e in m[(0, q)].exponents() {
                let b = e + pad;
                assert!(
                    (0..blocks as i64).contains(&b),
                    "row does not fit the window"
                );
                bits[half * n * blocks + b as usize * n + q] ^= true;
            }
        }
    }
    PauliVector::from_bits(n, blocks, qconv::gf2::BitVector::from_bools(&bits))
}

#[test]
fn window_conjugation_agrees_with_column_action() {
    let mut rng = rng(14);
    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let g = if n == 1 {
            if rng.gen_bool(0.5) {
                Gate::H(0)
            } else {
                Gate::PL {
                    qubit: 0,
                    offset: rng.gen_range(1..=2),
                }
            }
        } else {
            random_gate(&mut rng, n)
        };
        let row = StabilizerMatrix::new(
            random_matrix(&mut rng, 1, n, 2),
            random_matrix(&mut rng, 1, n, 2),
        )
        .unwrap();
        let m = g.offset().abs();
        for blocks in [(2 + 2 * m + 1) as usize, (2 + 2 * m + 4) as usize] {
            let pad = m;
            let mut image = row.clone();
            g.apply(&mut image);
            let c = Circuit::from_gates(n, vec![g]).unwrap();
            let got = WindowProgram::from(&c)
                .conjugate(blocks, &embed(&row, blocks, pad))
                .unwrap();
            assert_eq!(got, embed(&image, blocks, pad), "{g} on {row}");
        }
    }
}

#[test]
fn conjugation_preserves_commutation() {
    let mut rng = rng(15);
    for _ in 0..100 {
        let n = rng.gen_range(2..=3);
        let gates: Vec<Gate> = (0..6).map(|_| random_gate(&mut rng, n)).collect();
        let prog = WindowProgram::from(&Circuit::from_gates(n, gates).unwrap());
        let blocks = 7;
        let rand_pauli = |rng: &mut rand_chacha::ChaCha8Rng| {
            let bits: Vec<bool> = (0..2 * n * blocks).map(|_| rng.gen_bool(0.2)).collect();
            PauliVector::from_bits(n, blocks, qconv::gf2::BitVector::from_bools(&bits))
        };
        let (p, q) = (rand_pauli(&mut rng), rand_pauli(&mut rng));
        let (cp, cq) = (
            prog.conjugate(blocks, &p).unwrap(),
            prog.conjugate(blocks, &q).unwrap(),
        );
        assert_eq!(cp.commutes_with(&cq), p.commutes_with(&q));
    }
}

#[test]
fn synthesis_invariants_on_random_codes() {
    let mut rng = rng(16);
    for _ in 0..150 {
        let s = random_code(&mut rng);
        let res = synthesize(&s).unwrap_or_else(|e| panic!("{e}\n{s}"));
        let mut probe = s.clone();
        for t in &res.transcript {
            match t {
                Transform::Gate(g) => g.apply(&mut probe),
                Transform::Row(op) => probe.apply_row_op(op),
            }
        }
        assert_eq!(probe, res.normal_form);
        assert!(res.normal_form.x().is_zero());
        for i in 0..s.r() {
            for j in 0..s.n() {
                let e = &res.normal_form.z()[(i, j)];
                assert_eq!(e.is_zero(), i != j, "{}", res.normal_form);
            }
        }
        for c in &res.checkpoints {
            assert!(c.matrix.check_symplectic().is_ok());
        }
        for w in res.measures.windows(2) {
            assert!(w[1] < w[0]);
        }
        if res.all_units() {
            let nf = smith::smith(&res.normal_form.combined()).unwrap();
            assert_eq!(nf.rank(), s.r());
            assert!(res
                .normal_form
                .z()
                .columns(0, s.r())
                .determinant()
                .is_monomial());
        }
    }
}

#[test]
fn text_formats_round_trip() {
    let mut rng = rng(17);
    for _ in 0..50 {
        let s = random_code(&mut rng);
        assert_eq!(io::parse_stabilizer(&io::format_stabilizer(&s)).unwrap(), s);
        let res = synthesize(&s).unwrap();
        let text = io::format_circuit(&res.encoder);
        assert_eq!(io::parse_circuit(&text).unwrap(), res.encoder);
    }
}

fn random_f4_row<R: Rng>(rng: &mut R, n: usize) -> Vec<F4Poly> {
    (0..n)
        .map(|_| F4Poly::new(random_poly(rng, 1), random_poly(rng, 1)))
        .collect()
}

#[test]
fn f4_import_matches_trace_hermitian_form() {
    let mut rng = rng(18);
    let mut orthogonal = 0;
    for _ in 0..3000 {
        let n = rng.gen_range(1..=3);
        let rows: Vec<Vec<F4Poly>> = (0..rng.gen_range(1..=2))
            .map(|_| random_f4_row(&mut rng, n))
            .collect();
        let s = from_f4(&rows).unwrap();
        assert_eq!(s.r() % 2, 0);
        let oracle = f4_self_orthogonal(&rows);
        orthogonal += usize::from(oracle);
        assert_eq!(s.check_symplectic().is_ok(), oracle);
    }
    assert!(
        orthogonal >= 20,
        "only {orthogonal} self-orthogonal samples"
    );
}
