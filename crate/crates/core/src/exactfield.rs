//! Exact arithmetic in real quadratic fields Q(√m).
//!
//! Every value is stored as `(a + b·√m)/c` in lowest terms with `c > 0`.
//! Signs, comparisons and floors are decided by integer comparisons only.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use regex::Regex;

use crate::error::{Error, Result};

/// Radicand `m` of a real quadratic field: square-free and at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldDescriptor {
    m: BigInt,
}

impl FieldDescriptor {
    pub fn new(m: impl Into<BigInt>) -> Result<Self> {
        let m = m.into();
        if m < BigInt::from(2) {
            return Err(Error::InvalidRadicand(m.to_string()));
        }
        let (s, _) = square_free_split(m.magnitude());
        if !s.is_one() {
            return Err(Error::InvalidRadicand(m.to_string()));
        }
        Ok(FieldDescriptor { m })
    }

    pub fn radicand(&self) -> &BigInt {
        &self.m
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.m)
    }
}

/// Splits `n = s²·f` with `f` square-free.
///
/// Trial division runs only up to the cube root of the unfactored part: what
/// remains afterwards has at most two prime factors, so it is either a
/// perfect square or square-free.
pub fn square_free_split(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut f = BigUint::one();
    let mut d: u64 = 2;
    loop {
        let d_big = BigUint::from(d);
        if &d_big * &d_big * &d_big > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % d).is_zero() {
            rest /= d;
            e += 1;
        }
        if e > 0 {
            s *= d_big.pow(e / 2);
            if e % 2 == 1 {
                f *= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        s *= r;
    } else {
        f *= rest;
    }
    (s, f)
}

/// Sign of `a + b·√m` for square-free `m ≥ 2`.
pub(crate) fn surd_sign(a: &BigInt, b: &BigInt, m: &BigInt) -> Ordering {
    let sa = a.sign();
    let sb = b.sign();
    match (sa, sb) {
        (_, Sign::NoSign) => a.cmp(&BigInt::zero()),
        (Sign::NoSign, _) => b.cmp(&BigInt::zero()),
        (Sign::Plus, Sign::Plus) => Ordering::Greater,
        (Sign::Minus, Sign::Minus) => Ordering::Less,
        (Sign::Plus, Sign::Minus) => (a * a).cmp(&(b * b * m)),
        (Sign::Minus, Sign::Plus) => (b * b * m).cmp(&(a * a)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

/// Exact element `(a + b·√m)/c` of a real quadratic field.
///
/// Rationals (`b = 0`) may carry a field descriptor or none; they combine
/// with values of any field.
#[derive(Debug, Clone)]
pub struct QuadExt {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    field: Option<FieldDescriptor>,
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
            && self.b == other.b
            && self.c == other.c
            && (self.b.is_zero() || self.field == other.field)
    }
}

impl Eq for QuadExt {}

impl Hash for QuadExt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        self.c.hash(state);
        if !self.b.is_zero() {
            self.field.hash(state);
        }
    }
}

impl QuadExt {
    fn canonical(
        mut a: BigInt,
        mut b: BigInt,
        mut c: BigInt,
        field: Option<FieldDescriptor>,
    ) -> QuadExt {
        debug_assert!(!c.is_zero());
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        debug_assert!(b.is_zero() || field.is_some());
        QuadExt { a, b, c, field }
    }

    /// `(a + b·√m)/c` over an already square-free radicand.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        field: &FieldDescriptor,
    ) -> Result<QuadExt> {
        let c = c.into();
        if c.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(QuadExt::canonical(
            a.into(),
            b.into(),
            c,
            Some(field.clone()),
        ))
    }

    /// `(a + b·√n)/c` for any `n ≥ 0`; square factors of `n` move into `b`.
    pub fn from_radicand(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        n: impl Into<BigInt>,
    ) -> Result<QuadExt> {
        let (a, b, c, n) = (a.into(), b.into(), c.into(), n.into());
        if c.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if n.is_negative() {
            return Err(Error::NegativeRadicand(n.to_string()));
        }
        let (s, f) = square_free_split(n.magnitude());
        let b = b * BigInt::from(s);
        if f.is_one() {
            // √n is an integer (or n = 0, where s = 0)
            return Ok(QuadExt::canonical(a + b, BigInt::zero(), c, None));
        }
        let field = FieldDescriptor { m: BigInt::from(f) };
        Ok(QuadExt::canonical(a, b, c, Some(field)))
    }

    pub fn integer(n: impl Into<BigInt>) -> QuadExt {
        QuadExt {
            a: n.into(),
            b: BigInt::zero(),
            c: BigInt::one(),
            field: None,
        }
    }

    pub fn rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<QuadExt> {
        let q = q.into();
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(QuadExt::canonical(p.into(), BigInt::zero(), q, None))
    }

    /// `√m` itself.
    pub fn sqrt_of(field: &FieldDescriptor) -> QuadExt {
        QuadExt {
            a: BigInt::zero(),
            b: BigInt::one(),
            c: BigInt::one(),
            field: Some(field.clone()),
        }
    }

    pub fn zero() -> QuadExt {
        QuadExt::integer(0)
    }

    pub fn one() -> QuadExt {
        QuadExt::integer(1)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn field(&self) -> Option<&FieldDescriptor> {
        self.field.as_ref()
    }

    /// Attaches a field descriptor to a rational value. Irrational values
    /// keep their own field.
    pub fn in_field(mut self, field: &FieldDescriptor) -> QuadExt {
        if self.b.is_zero() {
            self.field = Some(field.clone());
        }
        self
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.c.is_one()
    }

    fn radicand(&self) -> Option<&BigInt> {
        self.field.as_ref().map(|f| &f.m)
    }

    fn join(&self, other: &QuadExt) -> Result<Option<FieldDescriptor>> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (false, false) => {
                if self.field != other.field {
                    return Err(Error::FieldMismatch(
                        self.radicand().map(|m| m.to_string()).unwrap_or_default(),
                        other.radicand().map(|m| m.to_string()).unwrap_or_default(),
                    ));
                }
                Ok(self.field.clone())
            }
            (false, true) => Ok(self.field.clone()),
            (true, false) => Ok(other.field.clone()),
            (true, true) => Ok(self.field.clone().or_else(|| other.field.clone())),
        }
    }

    pub fn try_add(&self, other: &QuadExt) -> Result<QuadExt> {
        let field = self.join(other)?;
        Ok(QuadExt::canonical(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            field,
        ))
    }

    pub fn try_sub(&self, other: &QuadExt) -> Result<QuadExt> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &QuadExt) -> Result<QuadExt> {
        let field = self.join(other)?;
        let bb = &self.b * &other.b;
        let rational_part = if bb.is_zero() {
            &self.a * &other.a
        } else {
            &self.a * &other.a + bb * field.as_ref().map(|f| &f.m).expect("irrational operand")
        };
        Ok(QuadExt::canonical(
            rational_part,
            &self.a * &other.b + &self.b * &other.a,
            &self.c * &other.c,
            field,
        ))
    }

    pub fn try_div(&self, other: &QuadExt) -> Result<QuadExt> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = self.join(other)?;
        // x / y = x · conj(y)·c_y / (a_y² − b_y²·m)
        let norm = match other.radicand() {
            Some(m) if !other.b.is_zero() => &other.a * &other.a - &other.b * &other.b * m,
            _ => &other.a * &other.a,
        };
        let helper = QuadExt {
            a: &other.a * &other.c,
            b: -(&other.b * &other.c),
            c: BigInt::one(),
            field: field.clone(),
        };
        let num = self.try_mul(&helper)?;
        Ok(QuadExt::canonical(num.a, num.b, num.c * norm, field))
    }

    fn neg_ref(&self) -> QuadExt {
        QuadExt {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            field: self.field.clone(),
        }
    }

    /// Applies one field operation; `Neg` ignores `y`.
    pub fn arith(op: ArithOp, x: &QuadExt, y: &QuadExt) -> Result<QuadExt> {
        match op {
            ArithOp::Add => x.try_add(y),
            ArithOp::Sub => x.try_sub(y),
            ArithOp::Mul => x.try_mul(y),
            ArithOp::Div => x.try_div(y),
            ArithOp::Neg => Ok(x.neg_ref()),
        }
    }

    /// Exact sign as -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        let ord = match self.radicand() {
            Some(m) => surd_sign(&self.a, &self.b, m),
            None => self.a.cmp(&BigInt::zero()),
        };
        match ord {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn floor(&self) -> BigInt {
        // Estimate from the integer square root, then certify with sign tests.
        let mut k = match self.radicand() {
            Some(m) if !self.b.is_zero() => {
                let t: BigInt = (&self.b * &self.b * m).sqrt();
                if self.b.is_positive() {
                    (&self.a + t).div_floor(&self.c)
                } else {
                    (&self.a - t - BigInt::one()).div_floor(&self.c)
                }
            }
            _ => self.a.div_floor(&self.c),
        };
        while self.minus_integer(&k).signum() < 0 {
            k -= 1;
        }
        while self.minus_integer(&(&k + 1)).signum() >= 0 {
            k += 1;
        }
        k
    }

    pub fn ceil(&self) -> BigInt {
        -self.neg_ref().floor()
    }

    fn minus_integer(&self, k: &BigInt) -> QuadExt {
        QuadExt {
            a: &self.a - k * &self.c,
            b: self.b.clone(),
            c: self.c.clone(),
            field: self.field.clone(),
        }
    }

    /// Galois conjugate `(a − b·√m)/c`.
    pub fn conj(&self) -> QuadExt {
        QuadExt {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            field: self.field.clone(),
        }
    }

    /// Floating-point approximation, for display and sampling only.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let c = self.c.to_f64().unwrap_or(f64::NAN);
        let irr = match self.radicand() {
            Some(m) => self.b.to_f64().unwrap_or(f64::NAN) * m.to_f64().unwrap_or(f64::NAN).sqrt(),
            None => 0.0,
        };
        (a + irr) / c
    }
}

impl PartialOrd for QuadExt {
    /// `None` only when the two values live in different fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let d = self.try_sub(other).ok()?;
        Some(d.signum().cmp(&0))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QuadExt> for &QuadExt {
            type Output = QuadExt;
            /// Panics on a field mismatch (and on division by zero).
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                (&self).$method(rhs)
            }
        }
        impl $tr<QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        self.neg_ref()
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        self.neg_ref()
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::integer(0)
    }
    fn is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::integer(1)
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::integer(n)
    }
}

impl From<BigInt> for QuadExt {
    fn from(n: BigInt) -> Self {
        QuadExt::integer(n)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(field) => {
                let op = if self.b.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "({}{}{}*sqrt({}))/{}",
                    self.a,
                    op,
                    self.b.abs(),
                    field.m,
                    self.c
                )
            }
            None if self.c.is_one() => write!(f, "{}", self.a),
            None => write!(f, "{}/{}", self.a, self.c),
        }
    }
}

fn surd_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\(([+-]?\d+)([+-])([+-]?\d+)\*sqrt\((\d+)\)\)(?:/([+-]?\d+))?$")
            .expect("valid regex")
    })
}

fn rational_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^([+-]?\d+)(?:/([+-]?\d+))?$").expect("valid regex"))
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("{s}: {e}")))
}

impl FromStr for QuadExt {
    type Err = Error;

    /// Accepts `(a+b*sqrt(m))/c` (signs optional, `/c` optional) and plain
    /// rationals `p` or `p/q`.
    fn from_str(s: &str) -> Result<QuadExt> {
        let t: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
        if let Some(cap) = surd_regex().captures(&t) {
            let a = parse_int(&cap[1])?;
            let mut b = parse_int(&cap[3])?;
            if &cap[2] == "-" {
                b = -b;
            }
            let m = parse_int(&cap[4])?;
            let c = match cap.get(5) {
                Some(c) => parse_int(c.as_str())?,
                None => BigInt::one(),
            };
            if c.is_zero() {
                return Err(Error::Parse(format!("{s}: zero denominator")));
            }
            let mut value = QuadExt::from_radicand(a, b, c, m.clone())?;
            // keep the field on (a+0*sqrt(m))/c so printing round-trips
            if value.field.is_none() {
                if let Ok(field) = FieldDescriptor::new(m) {
                    value.field = Some(field);
                }
            }
            return Ok(value);
        }
        if let Some(cap) = rational_regex().captures(&t) {
            let p = parse_int(&cap[1])?;
            let q = match cap.get(2) {
                Some(q) => parse_int(q.as_str())?,
                None => BigInt::one(),
            };
            if q.is_zero() {
                return Err(Error::Parse(format!("{s}: zero denominator")));
            }
            return QuadExt::rational(p, q);
        }
        Err(Error::Parse(format!("not a quadratic number: {s}")))
    }
}
