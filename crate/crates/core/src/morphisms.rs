//! The special Sturmian monoid generated by G, G̃, D, D̃.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::representation::{decompose, Mat3};
use crate::words::{FiniteWord, PrefixStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// 0 → 0, 1 → 01
    G,
    /// G̃: 0 → 0, 1 → 10
    Gt,
    /// 0 → 10, 1 → 1
    D,
    /// D̃: 0 → 01, 1 → 1
    Dt,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::G, Generator::Gt, Generator::D, Generator::Dt];

    /// Image of the generator under conjugation by the coordinate swap:
    /// G̃ ↔ D, G ↔ D̃.
    pub fn swapped(self) -> Generator {
        match self {
            Generator::G => Generator::Dt,
            Generator::Dt => Generator::G,
            Generator::Gt => Generator::D,
            Generator::D => Generator::Gt,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::G => "G",
            Generator::Gt => "G'",
            Generator::D => "D",
            Generator::Dt => "D'",
        })
    }
}

/// Product `φ₁∘φ₂∘…∘φₙ` of generators; the leftmost one is applied last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GenWord(Vec<Generator>);

impl GenWord {
    pub fn new(generators: Vec<Generator>) -> GenWord {
        GenWord(generators)
    }

    pub fn identity() -> GenWord {
        GenWord(Vec::new())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, g: Generator) {
        self.0.push(g);
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GenWord(v)
    }

    pub fn pow(&self, k: usize) -> GenWord {
        GenWord(self.0.repeat(k))
    }

    /// Generators occurring in the word.
    pub fn alphabet(&self) -> BTreeSet<Generator> {
        self.0.iter().copied().collect()
    }

    pub fn map(&self, f: impl Fn(Generator) -> Generator) -> GenWord {
        GenWord(self.0.iter().map(|&g| f(g)).collect())
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|g| write!(f, "{g}"))
    }
}

impl FromStr for GenWord {
    type Err = Error;

    /// Tokens `G`, `G'`, `D`, `D'`; the empty string and `1` denote the identity.
    fn from_str(s: &str) -> Result<GenWord> {
        if s == "1" {
            return Ok(GenWord::identity());
        }
        let mut out = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(ch) = chars.next() {
            let tilde = chars.peek() == Some(&'\'');
            if tilde {
                chars.next();
            }
            out.push(match (ch, tilde) {
                ('G', false) => Generator::G,
                ('G', true) => Generator::Gt,
                ('D', false) => Generator::D,
                ('D', true) => Generator::Dt,
                _ => return Err(Error::Parse(format!("bad generator token {ch:?} in {s:?}"))),
            });
        }
        Ok(GenWord(out))
    }
}

/// Morphism on {0,1}* given by the images of both letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMorphism {
    image0: FiniteWord,
    image1: FiniteWord,
}

impl BinaryMorphism {
    pub fn new(image0: FiniteWord, image1: FiniteWord) -> Result<BinaryMorphism> {
        if image0.is_empty() || image1.is_empty() {
            return Err(Error::EmptyImage);
        }
        Ok(BinaryMorphism { image0, image1 })
    }

    fn from_strs(i0: &str, i1: &str) -> BinaryMorphism {
        BinaryMorphism {
            image0: i0.parse().expect("binary"),
            image1: i1.parse().expect("binary"),
        }
    }

    pub fn identity() -> BinaryMorphism {
        BinaryMorphism::from_strs("0", "1")
    }

    /// The letter exchange E: 0 → 1, 1 → 0.
    pub fn exchange() -> BinaryMorphism {
        BinaryMorphism::from_strs("1", "0")
    }

    pub fn image(&self, letter: u8) -> &FiniteWord {
        if letter == 0 {
            &self.image0
        } else {
            &self.image1
        }
    }

    pub fn image0(&self) -> &FiniteWord {
        &self.image0
    }

    pub fn image1(&self) -> &FiniteWord {
        &self.image1
    }

    pub fn apply(&self, w: &FiniteWord) -> FiniteWord {
        let letters: Vec<u8> = w
            .letters()
            .iter()
            .flat_map(|&l| self.image(l).letters().iter().copied())
            .collect();
        FiniteWord::new(letters).expect("images are binary")
    }

    /// Lazy image of a stream.
    pub fn apply_stream(&self, s: PrefixStream) -> PrefixStream {
        let phi = self.clone();
        PrefixStream::new(s.flat_map(move |r| {
            match r {
                Ok(l) => phi
                    .image(l)
                    .letters()
                    .iter()
                    .map(|&x| Ok(x))
                    .collect::<Vec<_>>(),
                Err(e) => vec![Err(e)],
            }
        }))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &BinaryMorphism) -> BinaryMorphism {
        BinaryMorphism {
            image0: self.apply(&other.image0),
            image1: self.apply(&other.image1),
        }
    }

    pub fn pow(&self, k: u32) -> BinaryMorphism {
        (0..k).fold(BinaryMorphism::identity(), |acc, _| acc.compose(self))
    }

    pub fn incidence(&self) -> IncidenceMatrix {
        let n = |w: &FiniteWord, l: u8| BigInt::from(w.count(l));
        IncidenceMatrix::new(
            n(&self.image0, 0),
            n(&self.image1, 0),
            n(&self.image0, 1),
            n(&self.image1, 1),
        )
    }

    /// Binary morphisms are cyclic exactly when the two images commute.
    pub fn is_cyclic(&self) -> bool {
        self.image0.concat(&self.image1) == self.image1.concat(&self.image0)
    }

    /// The fixed point starting with `letter`, generated by iteration.
    pub fn fixed_point_stream(&self, letter: u8) -> Result<PrefixStream> {
        let img = self.image(letter).clone();
        if img.first() != Some(letter) {
            return Err(Error::NoFixedPoint(letter));
        }
        if img.len() == 1 {
            return Ok(PrefixStream::from_letters(std::iter::repeat(letter)));
        }
        let phi = self.clone();
        let mut buf = img.into_letters();
        let mut expanded = 1usize;
        let mut pos = 0usize;
        Ok(PrefixStream::from_letters(std::iter::from_fn(move || {
            while pos >= buf.len() {
                let l = buf[expanded];
                buf.extend_from_slice(phi.image(l).letters());
                expanded += 1;
            }
            pos += 1;
            Some(buf[pos - 1])
        })))
    }

    /// Whether `u` is a prefix of the fixed point `φ^ω(u₀)`: `φ(u)` begins
    /// with `u` and `φ(u₀)` has at least two letters.
    pub fn fixes_prefix(&self, u: &FiniteWord) -> bool {
        let Some(first) = u.first() else { return false };
        if self.image(first).len() < 2 {
            return false;
        }
        let mut image = Vec::with_capacity(u.len() + self.image0.len().max(self.image1.len()));
        for &l in u.letters() {
            if image.len() >= u.len() {
                break;
            }
            image.extend_from_slice(self.image(l).letters());
        }
        image[..u.len()] == *u.letters()
    }
}

impl fmt::Display for BinaryMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0->{},1->{}", self.image0, self.image1)
    }
}

impl FromStr for BinaryMorphism {
    type Err = Error;

    /// `0->10,1->10101`
    fn from_str(s: &str) -> Result<BinaryMorphism> {
        let bad = || Error::Parse(format!("expected 0->w0,1->w1, got {s:?}"));
        let (left, right) = s.split_once(',').ok_or_else(bad)?;
        let i0 = left.trim().strip_prefix("0->").ok_or_else(bad)?;
        let i1 = right.trim().strip_prefix("1->").ok_or_else(bad)?;
        BinaryMorphism::new(i0.parse()?, i1.parse()?)
    }
}

pub fn gen_morphism(g: Generator) -> BinaryMorphism {
    match g {
        Generator::G => BinaryMorphism::from_strs("0", "01"),
        Generator::Gt => BinaryMorphism::from_strs("0", "10"),
        Generator::D => BinaryMorphism::from_strs("10", "1"),
        Generator::Dt => BinaryMorphism::from_strs("01", "1"),
    }
}

/// The morphism denoted by a generator word.
pub fn compose(w: &GenWord) -> BinaryMorphism {
    w.generators()
        .iter()
        .rev()
        .fold(BinaryMorphism::identity(), |acc, &g| {
            gen_morphism(g).compose(&acc)
        })
}

/// 2×2 incidence matrix `[[A,B],[C,D]]`, entry (i,j) = |φ(j)|_i.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncidenceMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl IncidenceMatrix {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> IncidenceMatrix {
        IncidenceMatrix {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> IncidenceMatrix {
        IncidenceMatrix::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &IncidenceMatrix) -> IncidenceMatrix {
        IncidenceMatrix {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn pow(&self, k: u32) -> IncidenceMatrix {
        (0..k).fold(IncidenceMatrix::identity(), |acc, _| acc.mul(self))
    }

    fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Primitive iff the square is entrywise positive (Wielandt bound for 2×2).
    pub fn is_primitive(&self) -> bool {
        if self.entries().iter().any(|x| x.is_negative()) {
            return false;
        }
        self.mul(self).entries().iter().all(|x| x.is_positive())
    }

    pub fn is_sl2n(&self) -> bool {
        self.entries().iter().all(|x| !x.is_negative()) && self.det().is_one()
    }
}

impl fmt::Display for IncidenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for IncidenceMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<IncidenceMatrix> {
        let rows = crate::representation::parse_rows(s, 2)?;
        Ok(IncidenceMatrix {
            a: rows[0][0].clone(),
            b: rows[0][1].clone(),
            c: rows[1][0].clone(),
            d: rows[1][1].clone(),
        })
    }
}

/// One elementary right conjugation: when both images end with the same
/// letter `x`, move that `x` to the front of both images.
pub fn right_conjugate_step(phi: &BinaryMorphism) -> Result<Option<BinaryMorphism>> {
    if phi.is_cyclic() {
        return Err(Error::Cyclic);
    }
    match (phi.image0.last(), phi.image1.last()) {
        (Some(x), Some(y)) if x == y => {
            let rotate = |w: &FiniteWord| {
                let mut v = Vec::with_capacity(w.len());
                v.push(x);
                v.extend_from_slice(&w.letters()[..w.len() - 1]);
                FiniteWord::new(v).expect("binary")
            };
            Ok(Some(BinaryMorphism {
                image0: rotate(&phi.image0),
                image1: rotate(&phi.image1),
            }))
        }
        _ => Ok(None),
    }
}

/// Iterates [`right_conjugate_step`] until the last letters of the images differ.
pub fn rightmost_conjugate(phi: &BinaryMorphism) -> Result<BinaryMorphism> {
    // the steps consume a common suffix of the left-infinite powers of the
    // images; by Fine–Wilf it is shorter than |φ(0)| + |φ(1)| for acyclic φ
    let limit = phi.image0.len() + phi.image1.len();
    let mut current = phi.clone();
    for _ in 0..=limit {
        match right_conjugate_step(&current)? {
            Some(next) => current = next,
            None => return Ok(current),
        }
    }
    Err(Error::Cyclic)
}

/// Matrices `[[A,B,0],[C,D,0],[E,F,1]]` of the `A+B+C+D−1` morphisms with
/// incidence `m`, in increasing order of `S = E+F`.
pub fn conjugate_matrices(m: &IncidenceMatrix) -> Result<Vec<Mat3>> {
    if !m.det().is_one() {
        return Err(Error::Determinant(m.det().to_string()));
    }
    if m.entries().iter().any(|x| x.is_negative()) {
        return Err(Error::InvalidParams(format!("negative entry in {m}")));
    }
    let total = &m.a + &m.b + &m.c + &m.d;
    let ab = &m.a + &m.b;
    let mut out = Vec::new();
    let mut s = BigInt::zero();
    while s <= &total - 2 {
        // the unique E with −A < A(S−E) − BE ≤ B
        let e = Integer::div_ceil(&(&m.a * &s - &m.b), &ab);
        let f = &s - &e;
        out.push(Mat3::from_blocks(m, e, f));
        s += 1;
    }
    Ok(out)
}

/// All Sturmian morphisms with incidence matrix `m`, by decomposing each
/// matrix of [`conjugate_matrices`].
pub fn conjugates_of(m: &IncidenceMatrix) -> Result<Vec<BinaryMorphism>> {
    conjugate_matrices(m)?
        .iter()
        .map(|r| decompose(r).map(|w| compose(&w)))
        .collect()
}
