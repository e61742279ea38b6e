//! Fixed points of primitive morphisms through the spectrum of their
//! 3×3 representation.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactfield::{FieldDescriptor, QuadExt};
use crate::morphisms::{GenWord, Generator};
use crate::representation::rep;
use crate::words::{Boundary, ParamVector, PrefixStream, SlopeIntercept};

/// 2iet parameters `(1−α, α, δ)` of a mechanical sequence.
pub fn params_of(si: &SlopeIntercept) -> ParamVector {
    let alpha = si.alpha().clone();
    let l0 = QuadExt::one() - &alpha;
    // s'_{α,0} = s'_{α,1} starts at the closed right end
    let rho = if si.kind() == Boundary::Upper && si.delta().is_zero() {
        QuadExt::one()
    } else {
        si.delta().clone()
    };
    ParamVector::new(l0, alpha, rho, si.kind())
        .expect("mechanical parameters lie in the 2iet domain")
}

/// Parameters of `φ(u)` where `φ = compose(w)` and `u` has parameters `v`.
pub fn image_params(w: &GenWord, v: &ParamVector) -> Result<ParamVector> {
    let [l0, l1, rho] = rep(w).apply(&v.components())?;
    ParamVector::new(l0, l1, rho, v.boundary())
}

/// Dominant eigenvalue of `rep(w)` with its eigenvector normalized to `ℓ0+ℓ1 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenData {
    pub lambda: QuadExt,
    pub vector: ParamVector,
    pub field: FieldDescriptor,
}

impl fmt::Display for EigenData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lambda: {}", self.lambda)?;
        writeln!(f, "l0: {}", self.vector.l0())?;
        writeln!(f, "l1: {}", self.vector.l1())?;
        writeln!(f, "rho: {}", self.vector.rho())?;
        write!(f, "kind: {}", self.vector.boundary())
    }
}

pub fn dominant_eigen(w: &GenWord) -> Result<EigenData> {
    let r = rep(w);
    let m = r.incidence();
    if !m.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let p = m.trace();
    let disc = &p * &p - BigInt::from(4);
    let lambda = QuadExt::from_radicand(p, 1, 2, disc)?;
    let field = lambda
        .field()
        .cloned()
        .expect("trace >= 3 gives an irrational eigenvalue");

    // (M − Λ)(x, y)ᵀ = 0 from the first row; B > 0 for primitive M
    let int = |n: &BigInt| QuadExt::integer(n.clone());
    let x = int(&m.b);
    let y = &lambda - &int(&m.a);
    let total = &x + &y;
    let (x, y) = (&x / &total, &y / &total);
    // third row: Ex + Fy + z = Λz
    let z = &(&(&int(r.get(2, 0)) * &x) + &(&int(r.get(2, 1)) * &y)) / &(&lambda - &QuadExt::one());
    let boundary = if z == QuadExt::one() {
        Boundary::Upper
    } else {
        Boundary::Lower
    };
    let vector = ParamVector::new(x, y, z, boundary)?;
    Ok(EigenData {
        lambda,
        vector,
        field,
    })
}

/// Parameters of the Sturmian sequence fixed by `compose(w)`.
pub fn fixed_point_params(w: &GenWord) -> Result<ParamVector> {
    Ok(dominant_eigen(w)?.vector)
}

pub fn fixed_point_stream(w: &GenWord) -> Result<PrefixStream> {
    PrefixStream::iet(&fixed_point_params(w)?)
}

/// Intercept constraint forced by the generator alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RhoConstraint {
    /// ⟨G̃, D⟩
    RhoEqL0PlusL1,
    /// ⟨G, D⟩
    RhoEqL1,
    /// ⟨G̃, D̃⟩
    RhoEqL0,
    /// ⟨G, D̃⟩
    RhoEq0,
}

impl RhoConstraint {
    pub const ALL: [RhoConstraint; 4] = [
        RhoConstraint::RhoEqL0PlusL1,
        RhoConstraint::RhoEqL1,
        RhoConstraint::RhoEqL0,
        RhoConstraint::RhoEq0,
    ];

    pub fn generators(self) -> [Generator; 2] {
        match self {
            RhoConstraint::RhoEqL0PlusL1 => [Generator::Gt, Generator::D],
            RhoConstraint::RhoEqL1 => [Generator::G, Generator::D],
            RhoConstraint::RhoEqL0 => [Generator::Gt, Generator::Dt],
            RhoConstraint::RhoEq0 => [Generator::G, Generator::Dt],
        }
    }

    pub fn holds(self, v: &ParamVector) -> bool {
        let rho = v.rho();
        match self {
            RhoConstraint::RhoEqL0PlusL1 => rho == &(v.l0() + v.l1()),
            RhoConstraint::RhoEqL1 => rho == v.l1(),
            RhoConstraint::RhoEqL0 => rho == v.l0(),
            RhoConstraint::RhoEq0 => rho.is_zero(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RhoConstraint::RhoEqL0PlusL1 => "rho_eq_l0_plus_l1",
            RhoConstraint::RhoEqL1 => "rho_eq_l1",
            RhoConstraint::RhoEqL0 => "rho_eq_l0",
            RhoConstraint::RhoEq0 => "rho_eq_0",
        }
    }
}

impl fmt::Display for RhoConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every constraint whose submonoid contains the word; empty when none does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterceptClass(Vec<RhoConstraint>);

impl InterceptClass {
    pub fn constraints(&self) -> &[RhoConstraint] {
        &self.0
    }

    pub fn is_unconstrained(&self) -> bool {
        self.0.is_empty()
    }

    pub fn holds(&self, v: &ParamVector) -> bool {
        self.0.iter().all(|c| c.holds(v))
    }
}

impl fmt::Display for InterceptClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("unconstrained");
        }
        let names: Vec<_> = self.0.iter().map(|c| c.name()).collect();
        f.write_str(&names.join(","))
    }
}

pub fn intercept_class(w: &GenWord) -> InterceptClass {
    let alphabet = w.alphabet();
    InterceptClass(
        RhoConstraint::ALL
            .into_iter()
            .filter(|c| alphabet.iter().all(|g| c.generators().contains(g)))
            .collect(),
    )
}

/// Tokenwise G → G̃, D̃ → D, turning a fixer of `s_{α,0}` into a fixer of `s'_{α,0}`.
pub fn dekking_mirror(w: &GenWord) -> Result<GenWord> {
    if let Some(g) = w
        .generators()
        .iter()
        .find(|g| matches!(g, Generator::Gt | Generator::D))
    {
        return Err(Error::GeneratorNotAllowed(g.to_string()));
    }
    Ok(w.map(|g| {
        if g == Generator::G {
            Generator::Gt
        } else {
            Generator::D
        }
    }))
}

/// Outcome of the conjugate-interval test on `(α, δ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YasutomiReport {
    pub alpha: QuadExt,
    pub delta: QuadExt,
    pub same_field: bool,
    /// `min(ᾱ, 1−ᾱ) ≤ δ̄ ≤ max(ᾱ, 1−ᾱ)`; false when the fields differ.
    pub in_interval: bool,
}

impl YasutomiReport {
    pub fn holds(&self) -> bool {
        self.same_field && self.in_interval
    }
}

impl fmt::Display for YasutomiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alpha: {}", self.alpha)?;
        writeln!(f, "delta: {}", self.delta)?;
        writeln!(f, "same_field: {}", self.same_field)?;
        writeln!(f, "conjugate_interval: {}", self.in_interval)?;
        write!(f, "holds: {}", self.holds())
    }
}

pub fn yasutomi_condition(alpha: &QuadExt, delta: &QuadExt) -> YasutomiReport {
    let report = |same_field, in_interval| YasutomiReport {
        alpha: alpha.clone(),
        delta: delta.clone(),
        same_field,
        in_interval,
    };
    if alpha.try_sub(delta).is_err() {
        return report(false, false);
    }
    let a = alpha.conj();
    let b = QuadExt::one() - &a;
    let d = delta.conj();
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    report(true, lo <= d && d <= hi)
}

/// Necessary condition for `(α, δ) = (ℓ1, ρ)` to come from a fixed point.
pub fn yasutomi_check(e: &EigenData) -> YasutomiReport {
    yasutomi_condition(e.vector.l1(), e.vector.rho())
}
