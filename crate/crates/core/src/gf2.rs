//! Dense binary vectors and exact row-space membership over GF(2).

use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters, ignoring `|` and whitespace.
    pub fn parse(s: &str) -> Self {
        let bits: Vec<bool> = s
            .chars()
            .filter(|c| *c == '0' || *c == '1')
            .map(|c| c == '1')
            .collect();
        BitVector::from_bools(&bits)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index out of range");
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index out of range");
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index out of range");
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    /// Symplectic form for the `(x | z)` layout with `half` qubits.
    pub fn symplectic_inner(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        assert!(
            self.len.is_multiple_of(2),
            "symplectic vectors have even length"
        );
        let half = self.len / 2;
        let mut acc = false;
        for q in 0..half {
            acc ^= (self.get(q) & other.get(half + q)) ^ (self.get(half + q) & other.get(q));
        }
        acc
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitVector({s})")
    }
}

/// A row space kept in echelon form, keyed by pivot position.
#[derive(Debug, Clone, Default)]
pub struct RowSpace {
    basis: BTreeMap<usize, BitVector>,
}

impl RowSpace {
    pub fn new() -> Self {
        RowSpace::default()
    }

    pub fn from_rows<'a, I: IntoIterator<Item = &'a BitVector>>(rows: I) -> Self {
        let mut s = RowSpace::new();
        for r in rows {
            s.insert(r.clone());
        }
        s
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: BitVector) -> bool {
        let v = self.reduce_fully(v);
        match v.first_one() {
            None => false,
            Some(p) => {
                self.basis.insert(p, v);
                true
            }
        }
    }

    // Basis vectors only touch positions at or after their pivot, so one
    // ascending pass clears every pivot position.
    fn reduce_fully(&self, mut v: BitVector) -> BitVector {
        for (&p, b) in &self.basis {
            if v.get(p) {
                v.xor_assign(b);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce_fully(v.clone()).is_zero()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}
