//! Square roots of Sturmian sequences.
//!
//! A Sturmian sequence splits greedily into blocks `w²` where each `w²` is the
//! shortest square prefix of what remains; the square root keeps one copy of
//! each `w`. For a characteristic fixed point of `φ` the root is fixed by a
//! conjugate of `φ`, `φ²` or `φ³` with palindromic images.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::dynamics::fixed_point_stream;
use crate::error::{Error, Result};
use crate::morphisms::{compose, rightmost_conjugate, BinaryMorphism, GenWord, IncidenceMatrix};
use crate::representation::{decompose, is_in_e, Mat3, Membership};
use crate::words::{FiniteWord, PrefixStream};

pub const DEFAULT_SCAN_BOUND: usize = 10_000;

/// Splits a stream into shortest square blocks, buffering only the lookahead.
pub struct SquareSplitter {
    stream: PrefixStream,
    buf: VecDeque<u8>,
    bound: usize,
}

impl SquareSplitter {
    /// `bound` caps the length of a square prefix `ww`.
    pub fn new(stream: PrefixStream, bound: usize) -> SquareSplitter {
        SquareSplitter {
            stream,
            buf: VecDeque::new(),
            bound,
        }
    }

    fn fill(&mut self, n: usize) -> Result<bool> {
        while self.buf.len() < n {
            match self.stream.next() {
                Some(l) => self.buf.push_back(l?),
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Root of the shortest square prefix of the unconsumed stream; consumes `ww`.
    pub fn next_root(&mut self) -> Result<FiniteWord> {
        let mut n = 1;
        while 2 * n <= self.bound {
            if !self.fill(2 * n)? {
                return Err(Error::StreamEnded {
                    wanted: 2 * n,
                    got: self.buf.len(),
                });
            }
            if (0..n).all(|i| self.buf[i] == self.buf[n + i]) {
                let root: Vec<u8> = self.buf.drain(..2 * n).take(n).collect();
                return FiniteWord::new(root);
            }
            n += 1;
        }
        Err(Error::NoSquarePrefix(self.bound))
    }
}

impl Iterator for SquareSplitter {
    type Item = Result<FiniteWord>;
    fn next(&mut self) -> Option<Result<FiniteWord>> {
        Some(self.next_root())
    }
}

pub fn shortest_square_prefix(s: PrefixStream, bound: usize) -> Result<FiniteWord> {
    SquareSplitter::new(s, bound).next_root()
}

/// Lazy concatenation of the greedy square roots.
pub fn square_root_stream(s: PrefixStream, bound: usize) -> PrefixStream {
    let mut splitter = SquareSplitter::new(s, bound);
    let mut pending: VecDeque<u8> = VecDeque::new();
    let mut failed = false;
    PrefixStream::new(std::iter::from_fn(move || {
        if failed {
            return None;
        }
        while pending.is_empty() {
            match splitter.next_root() {
                Ok(w) => pending.extend(w.letters()),
                Err(e) => {
                    failed = true;
                    return Some(Err(e));
                }
            }
        }
        pending.pop_front().map(Ok)
    }))
}

/// The first blocks of `u = w₁² w₂² …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareDecomposition {
    pub roots: Vec<FiniteWord>,
}

impl SquareDecomposition {
    /// First `blocks` roots of the stream.
    pub fn of_stream(s: PrefixStream, blocks: usize, bound: usize) -> Result<SquareDecomposition> {
        let roots = SquareSplitter::new(s, bound)
            .take(blocks)
            .collect::<Result<Vec<_>>>()?;
        Ok(SquareDecomposition { roots })
    }

    /// `w₁² w₂² …` written out.
    pub fn squared(&self) -> FiniteWord {
        self.roots
            .iter()
            .fold(FiniteWord::empty(), |acc, w| acc.concat(w).concat(w))
    }

    /// `w₁ w₂ …`.
    pub fn root(&self) -> FiniteWord {
        self.roots
            .iter()
            .fold(FiniteWord::empty(), |acc, w| acc.concat(w))
    }

    pub fn distinct_roots(&self) -> BTreeSet<&FiniteWord> {
        self.roots.iter().collect()
    }
}

impl fmt::Display for SquareDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.roots.iter().map(|w| format!("{w}^2")).collect();
        f.write_str(&blocks.join(" "))
    }
}

/// Morphism fixing the square root of the characteristic fixed point of `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtMorphism {
    pub psi: BinaryMorphism,
    pub k: u32,
    pub genword: GenWord,
}

impl fmt::Display for SqrtMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "psi: {}", self.psi)?;
        writeln!(f, "k: {}", self.k)?;
        write!(f, "genword: {}", self.genword)
    }
}

/// Smallest `k ∈ {1,2,3}` with `(1,1)(Mᵏ − I) ≡ (0,0) mod 2`.
pub fn parity_exponent(m: &IncidenceMatrix) -> Option<u32> {
    let mut mk = IncidenceMatrix::identity();
    for k in 1..=3 {
        mk = mk.mul(m);
        // (1,1)(Mᵏ − I) = (A+C−1, B+D−1)
        let even = |x: BigInt| x.is_even();
        if even(&mk.a + &mk.c - 1) && even(&mk.b + &mk.d - 1) {
            return Some(k);
        }
    }
    None
}

/// 2P with `P = [[1,0,0],[0,1,0],[½,0,½]]`, and `P⁻¹`.
fn half_conjugators() -> (Mat3, Mat3) {
    (
        Mat3::from_i64([[2, 0, 0], [0, 2, 0], [1, 0, 1]]),
        Mat3::from_i64([[1, 0, 0], [0, 1, 0], [-1, 0, 2]]),
    )
}

/// Fixing morphism of `√u` for the characteristic fixed point `u` of
/// `compose(w)`, together with the power `k` it is conjugate to.
pub fn sqrt_fixing_morphism(w: &GenWord) -> Result<SqrtMorphism> {
    let r = crate::representation::rep(w);
    let m = r.incidence();
    if !m.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    if r.get(2, 0) != &m.c {
        return Err(Error::NotCharacteristic("E=C"));
    }
    if r.get(2, 1) != &(&m.d - 1) {
        return Err(Error::NotCharacteristic("F=D-1"));
    }
    let k =
        parity_exponent(&m).ok_or_else(|| Error::SqrtPostcondition("no k in {1,2,3}".into()))?;

    // 2R = (2P)·𝓡(φ)·P⁻¹; then (2R)ᵏ = 2ᵏ·Rᵏ must have an integral third row
    let (two_p, p_inv) = half_conjugators();
    let two_r = two_p.mul(&r).mul(&p_inv);
    let scaled = two_r.pow(k);
    let scale = BigInt::one() << k;
    let mk = m.pow(k);
    let e = (&mk.a + &mk.c - 1) / 2;
    let f = (&mk.b + &mk.d - 1) / 2;
    let rk = Mat3::from_blocks(&mk, e, f);
    for j in 0..3 {
        let (q, rem) = scaled.get(2, j).div_rem(&scale);
        if !rem.is_zero() || &q != rk.get(2, j) {
            return Err(Error::SqrtPostcondition(format!(
                "third row of R^{k} is not {rk}"
            )));
        }
    }
    if let Membership::Violates(c) = is_in_e(&rk) {
        return Err(Error::SqrtPostcondition(format!("R^{k} violates {c}")));
    }
    let genword = decompose(&rk)?;
    let psi = compose(&genword);

    let odd_palindrome = |x: &FiniteWord| x.is_palindrome() && x.len() % 2 == 1;
    if !odd_palindrome(psi.image0()) || !odd_palindrome(psi.image1()) {
        return Err(Error::SqrtPostcondition(format!(
            "images of {psi} are not odd palindromes"
        )));
    }
    let phi_k = compose(&w.pow(k as usize));
    if psi.incidence() != phi_k.incidence()
        || rightmost_conjugate(&psi)? != rightmost_conjugate(&phi_k)?
    {
        return Err(Error::SqrtPostcondition(format!(
            "{psi} is not conjugate to phi^{k}"
        )));
    }
    let n = 512;
    let root = square_root_stream(fixed_point_stream(w)?, DEFAULT_SCAN_BOUND).take_word(n)?;
    if !psi.fixes_prefix(&root) {
        return Err(Error::SqrtPostcondition(format!(
            "{psi} does not fix the square root"
        )));
    }
    Ok(SqrtMorphism { psi, k, genword })
}
