//! Binary words, mechanical sequences and two-interval-exchange codings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactfield::{surd_sign, QuadExt};

/// Finite word over {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiniteWord(Vec<u8>);

impl FiniteWord {
    pub fn new(letters: Vec<u8>) -> Result<FiniteWord> {
        if let Some(&bad) = letters.iter().find(|&&l| l > 1) {
            return Err(Error::InvalidLetter(char::from(b'0'.wrapping_add(bad))));
        }
        Ok(FiniteWord(letters))
    }

    pub fn empty() -> FiniteWord {
        FiniteWord(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// Number of occurrences of `letter`.
    pub fn count(&self, letter: u8) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    pub fn is_palindrome(&self) -> bool {
        let n = self.0.len();
        (0..n / 2).all(|k| self.0[k] == self.0[n - 1 - k])
    }

    pub fn mirror(&self) -> FiniteWord {
        FiniteWord(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FiniteWord(v)
    }

    pub fn prefix(&self, n: usize) -> FiniteWord {
        FiniteWord(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &FiniteWord) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            f.write_str(if l == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl FromStr for FiniteWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<FiniteWord> {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidLetter(other)),
            })
            .collect::<Result<Vec<u8>>>()
            .map(FiniteWord)
    }
}

/// Pull-based letter producer. Sources that can fail (square roots) surface
/// the error in place of the next letter.
pub struct PrefixStream {
    inner: Box<dyn Iterator<Item = Result<u8>> + Send>,
}

impl PrefixStream {
    pub fn new(inner: impl Iterator<Item = Result<u8>> + Send + 'static) -> PrefixStream {
        PrefixStream {
            inner: Box::new(inner),
        }
    }

    pub fn from_letters(inner: impl Iterator<Item = u8> + Send + 'static) -> PrefixStream {
        PrefixStream::new(inner.map(Ok))
    }

    /// Mechanical sequence `s_{α,δ}` or `s'_{α,δ}`.
    pub fn mechanical(si: &SlopeIntercept) -> PrefixStream {
        let si = si.clone();
        let mut n: u64 = 0;
        PrefixStream::from_letters(std::iter::from_fn(move || {
            let letter = mechanical_letter(&si, n);
            n += 1;
            Some(letter)
        }))
    }

    /// Coding of the orbit of ρ under the two-interval exchange.
    pub fn iet(v: &ParamVector) -> Result<PrefixStream> {
        Ok(PrefixStream::from_letters(IetOrbit::new(v)?))
    }

    /// Next `n` letters as a word.
    pub fn take_word(&mut self, n: usize) -> Result<FiniteWord> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            match self.inner.next() {
                Some(letter) => out.push(letter?),
                None => {
                    return Err(Error::StreamEnded {
                        wanted: n,
                        got: out.len(),
                    })
                }
            }
        }
        Ok(FiniteWord(out))
    }
}

impl Iterator for PrefixStream {
    type Item = Result<u8>;
    fn next(&mut self) -> Option<Result<u8>> {
        self.inner.next()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Lower,
    Upper,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Lower => "lower",
            Boundary::Upper => "upper",
        })
    }
}

impl FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Boundary> {
        match s {
            "lower" => Ok(Boundary::Lower),
            "upper" => Ok(Boundary::Upper),
            other => Err(Error::Parse(format!(
                "unknown kind {other:?}, expected lower|upper"
            ))),
        }
    }
}

/// Interval lengths `ℓ0, ℓ1 > 0` and starting point `ρ` of a 2iet.
///
/// Lower: domain `[0, ℓ0+ℓ1)`, `I0 = [0, ℓ0)`. Upper: domain `(0, ℓ0+ℓ1]`,
/// `I0 = (0, ℓ0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamVector {
    l0: QuadExt,
    l1: QuadExt,
    rho: QuadExt,
    boundary: Boundary,
}

impl ParamVector {
    pub fn new(l0: QuadExt, l1: QuadExt, rho: QuadExt, boundary: Boundary) -> Result<ParamVector> {
        let bad = |what: &str| {
            Err(Error::InvalidParams(format!(
                "{what} for ({l0}, {l1}, {rho}, {boundary})"
            )))
        };
        let total = l0.try_add(&l1)?;
        let to_end = total.try_sub(&rho)?;
        if l0.signum() <= 0 || l1.signum() <= 0 {
            return bad("interval lengths must be positive");
        }
        let ok = match boundary {
            Boundary::Lower => rho.signum() >= 0 && to_end.signum() > 0,
            Boundary::Upper => rho.signum() > 0 && to_end.signum() >= 0,
        };
        if !ok {
            return bad("rho outside the domain");
        }
        Ok(ParamVector {
            l0,
            l1,
            rho,
            boundary,
        })
    }

    pub fn l0(&self) -> &QuadExt {
        &self.l0
    }

    pub fn l1(&self) -> &QuadExt {
        &self.l1
    }

    pub fn rho(&self) -> &QuadExt {
        &self.rho
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn components(&self) -> [QuadExt; 3] {
        [self.l0.clone(), self.l1.clone(), self.rho.clone()]
    }

    /// `ℓ1/(ℓ0+ℓ1)`.
    pub fn slope(&self) -> QuadExt {
        &self.l1 / &(&self.l0 + &self.l1)
    }

    /// Same vector with another orientation, if ρ is still inside the domain.
    pub fn with_boundary(&self, boundary: Boundary) -> Result<ParamVector> {
        ParamVector::new(self.l0.clone(), self.l1.clone(), self.rho.clone(), boundary)
    }

    pub fn scaled(&self, k: &QuadExt) -> Result<ParamVector> {
        ParamVector::new(
            self.l0.try_mul(k)?,
            self.l1.try_mul(k)?,
            self.rho.try_mul(k)?,
            self.boundary,
        )
    }

    /// Rescaled so that `ℓ0 + ℓ1 = 1`.
    pub fn normalized(&self) -> ParamVector {
        let total = &self.l0 + &self.l1;
        let inv = QuadExt::one() / total;
        self.scaled(&inv)
            .expect("positive rescaling keeps the domain")
    }
}

impl fmt::Display for ParamVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.l0, self.l1, self.rho, self.boundary
        )
    }
}

/// Slope `0 < α < 1` (irrational) and intercept `δ` of a mechanical sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlopeIntercept {
    alpha: QuadExt,
    delta: QuadExt,
    kind: Boundary,
}

impl SlopeIntercept {
    pub fn new(alpha: QuadExt, delta: QuadExt, kind: Boundary) -> Result<SlopeIntercept> {
        if alpha.is_rational() {
            return Err(Error::RationalSlope(alpha.to_string()));
        }
        if alpha.signum() <= 0 || (QuadExt::one() - &alpha).signum() <= 0 {
            return Err(Error::InvalidParams(format!("slope {alpha} outside (0,1)")));
        }
        let to_one = QuadExt::one().try_sub(&delta)?;
        let in_range = delta.signum() >= 0
            && match kind {
                Boundary::Lower => to_one.signum() > 0,
                Boundary::Upper => to_one.signum() >= 0,
            };
        if !in_range {
            return Err(Error::InvalidParams(format!(
                "intercept {delta} out of range for {kind}"
            )));
        }
        // δ must be comparable with α
        alpha.try_add(&delta)?;
        Ok(SlopeIntercept { alpha, delta, kind })
    }

    pub fn alpha(&self) -> &QuadExt {
        &self.alpha
    }

    pub fn delta(&self) -> &QuadExt {
        &self.delta
    }

    pub fn kind(&self) -> Boundary {
        self.kind
    }
}

fn mechanical_letter(si: &SlopeIntercept, n: u64) -> u8 {
    let at = |k: u64| &(&si.alpha * &QuadExt::integer(k)) + &si.delta;
    let (x0, x1) = (at(n), at(n + 1));
    let d = match si.kind {
        Boundary::Lower => x1.floor() - x0.floor(),
        Boundary::Upper => x1.ceil() - x0.ceil(),
    };
    if d.is_zero() {
        0
    } else {
        debug_assert!(d.is_one());
        1
    }
}

/// First `n` letters of `s_{α,δ}` (lower) or `s'_{α,δ}` (upper).
pub fn mechanical(si: &SlopeIntercept, n: usize) -> FiniteWord {
    FiniteWord((0..n as u64).map(|k| mechanical_letter(si, k)).collect())
}

/// First `n` letters of the 2iet coding of `v`.
pub fn iet_code(v: &ParamVector, n: usize) -> Result<FiniteWord> {
    Ok(FiniteWord(IetOrbit::new(v)?.take(n).collect()))
}

/// Orbit of ρ kept as integer pairs `p + q·√m` over one common denominator.
struct IetOrbit {
    m: BigInt,
    x: (BigInt, BigInt),
    l0: (BigInt, BigInt),
    l1: (BigInt, BigInt),
    boundary: Boundary,
}

impl IetOrbit {
    fn new(v: &ParamVector) -> Result<IetOrbit> {
        let slope = v.slope();
        if slope.is_rational() {
            return Err(Error::RationalSlope(slope.to_string()));
        }
        let m = slope
            .field()
            .expect("irrational slope has a field")
            .radicand()
            .clone();
        // every component is comparable with the slope, so one field suffices
        v.l0.try_add(&v.rho)?;
        v.l1.try_add(&v.rho)?;
        let den = [&v.l0, &v.l1, &v.rho].iter().fold(BigInt::one(), |acc, q| {
            num_integer::Integer::lcm(&acc, q.c())
        });
        let scale = |q: &QuadExt| {
            let k = &den / q.c();
            (q.a() * &k, q.b() * &k)
        };
        Ok(IetOrbit {
            m,
            x: scale(&v.rho),
            l0: scale(&v.l0),
            l1: scale(&v.l1),
            boundary: v.boundary,
        })
    }
}

impl Iterator for IetOrbit {
    type Item = u8;
    fn next(&mut self) -> Option<u8> {
        let diff = surd_sign(
            &(&self.x.0 - &self.l0.0),
            &(&self.x.1 - &self.l0.1),
            &self.m,
        );
        let in_i0 = match self.boundary {
            Boundary::Lower => diff.is_lt(),
            Boundary::Upper => diff.is_le(),
        };
        if in_i0 {
            self.x.0 += &self.l1.0;
            self.x.1 += &self.l1.1;
            Some(0)
        } else {
            self.x.0 -= &self.l0.0;
            self.x.1 -= &self.l0.1;
            Some(1)
        }
    }
}
