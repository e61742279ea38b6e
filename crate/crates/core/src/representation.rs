//! Faithful 3×3 representation of the special Sturmian monoid and the
//! cone-defined matrix monoid ℰ it maps onto.
//!
//! A generator word `φ₁…φₙ` maps to `R_{φ₁}⋯R_{φₙ}`. Every image has the block
//! form `[[A,B,0],[C,D,0],[E,F,1]]` where the top-left block is the incidence
//! matrix. Membership in ℰ is decided by integer inequalities, and members are
//! factored back into generator words by peeling `R_G` or `R_{G̃}` off the
//! left, conjugating by the coordinate swap when the block leans the other way.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactfield::QuadExt;
use crate::morphisms::{GenWord, Generator, IncidenceMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat3 {
    rows: [[BigInt; 3]; 3],
}

impl Mat3 {
    pub fn new(rows: [[BigInt; 3]; 3]) -> Mat3 {
        Mat3 { rows }
    }

    pub fn from_i64(rows: [[i64; 3]; 3]) -> Mat3 {
        Mat3 {
            rows: rows.map(|r| r.map(BigInt::from)),
        }
    }

    pub fn identity() -> Mat3 {
        Mat3::from_i64([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    /// `[[A,B,0],[C,D,0],[E,F,1]]` from an incidence block and a third row.
    pub fn from_blocks(m: &IncidenceMatrix, e: BigInt, f: BigInt) -> Mat3 {
        let z = BigInt::zero;
        Mat3 {
            rows: [
                [m.a.clone(), m.b.clone(), z()],
                [m.c.clone(), m.d.clone(), z()],
                [e, f, BigInt::one()],
            ],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[[BigInt; 3]; 3] {
        &self.rows
    }

    pub fn mul(&self, o: &Mat3) -> Mat3 {
        let rows = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| &self.rows[i][k] * &o.rows[k][j]).sum())
        });
        Mat3 { rows }
    }

    pub fn pow(&self, k: u32) -> Mat3 {
        (0..k).fold(Mat3::identity(), |acc, _| acc.mul(self))
    }

    pub fn det(&self) -> BigInt {
        let r = &self.rows;
        &r[0][0] * (&r[1][1] * &r[2][2] - &r[1][2] * &r[2][1])
            - &r[0][1] * (&r[1][0] * &r[2][2] - &r[1][2] * &r[2][0])
            + &r[0][2] * (&r[1][0] * &r[2][1] - &r[1][1] * &r[2][0])
    }

    pub fn apply(&self, v: &[QuadExt; 3]) -> Result<[QuadExt; 3]> {
        let mut out: [QuadExt; 3] = std::array::from_fn(|_| QuadExt::zero());
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = QuadExt::zero();
            for (j, vj) in v.iter().enumerate() {
                acc = acc.try_add(&QuadExt::integer(self.rows[i][j].clone()).try_mul(vj)?)?;
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// Top-left 2×2 block.
    pub fn incidence(&self) -> IncidenceMatrix {
        let r = &self.rows;
        IncidenceMatrix::new(
            r[0][0].clone(),
            r[0][1].clone(),
            r[1][0].clone(),
            r[1][1].clone(),
        )
    }

    /// Third column equals (0,0,1)ᵀ.
    pub fn has_block_shape(&self) -> bool {
        self.rows[0][2].is_zero() && self.rows[1][2].is_zero() && self.rows[2][2].is_one()
    }

    /// `PRP` for the coordinate swap `P = [[0,1,0],[1,0,0],[0,0,1]]`.
    pub fn swap_conjugate(&self) -> Mat3 {
        let p = [1usize, 0, 2];
        Mat3 {
            rows: std::array::from_fn(|i| std::array::from_fn(|j| self.rows[p[i]][p[j]].clone())),
        }
    }

    fn block(&self) -> Block<'_> {
        let r = &self.rows;
        Block {
            a: &r[0][0],
            b: &r[0][1],
            c: &r[1][0],
            d: &r[1][1],
            e: &r[2][0],
            f: &r[2][1],
        }
    }
}

struct Block<'a> {
    a: &'a BigInt,
    b: &'a BigInt,
    c: &'a BigInt,
    d: &'a BigInt,
    e: &'a BigInt,
    f: &'a BigInt,
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.rows;
        write!(
            f,
            "[[{},{},{}],[{},{},{}],[{},{},{}]]",
            r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2]
        )
    }
}

/// Parses `[[..],[..],…]` with `n` rows of `n` integers each.
pub(crate) fn parse_rows(s: &str, n: usize) -> Result<Vec<Vec<BigInt>>> {
    let bad = |why: &str| Error::Parse(format!("{why} in matrix {s:?}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix("[[")
        .and_then(|x| x.strip_suffix("]]"))
        .ok_or_else(|| bad("expected [[...]]"))?;
    let rows: Vec<Vec<BigInt>> = inner
        .split("],[")
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.parse::<BigInt>()
                        .map_err(|_| bad(&format!("bad entry {x:?}")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(bad(&format!("expected {n}x{n}")));
    }
    Ok(rows)
}

impl FromStr for Mat3 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mat3> {
        let rows = parse_rows(s, 3)?;
        Ok(Mat3 {
            rows: std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j].clone())),
        })
    }
}

pub fn rep_gen(g: Generator) -> Mat3 {
    match g {
        Generator::Gt => Mat3::from_i64([[1, 1, 0], [0, 1, 0], [0, 1, 1]]),
        Generator::G => Mat3::from_i64([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
        Generator::Dt => Mat3::from_i64([[1, 0, 0], [1, 1, 0], [0, 0, 1]]),
        Generator::D => Mat3::from_i64([[1, 0, 0], [1, 1, 0], [1, 0, 1]]),
    }
}

pub fn rep(w: &GenWord) -> Mat3 {
    w.generators()
        .iter()
        .fold(Mat3::identity(), |acc, &g| acc.mul(&rep_gen(g)))
}

/// Parameter-vector matrix of the letter exchange.
pub fn rep_e() -> Mat3 {
    Mat3::from_i64([[0, 1, 0], [1, 0, 0], [1, 1, -1]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cone {
    /// x, y ≥ 0, 0 ≤ z ≤ x+y
    C1,
    /// x ≥ 0 ≥ y, y ≤ z ≤ x
    C2,
    /// x = y = 0, z ≥ 0
    C3,
}

pub fn cone_contains(cone: Cone, v: &[QuadExt; 3]) -> bool {
    let [x, y, z] = v;
    let nonneg = |q: &QuadExt| q.signum() >= 0;
    let le = |p: &QuadExt, q: &QuadExt| p.partial_cmp(q).is_some_and(|o| o.is_le());
    match cone {
        Cone::C1 => nonneg(x) && nonneg(y) && nonneg(z) && le(z, &(x + y)),
        Cone::C2 => nonneg(x) && y.signum() <= 0 && le(y, z) && le(z, x),
        Cone::C3 => x.is_zero() && y.is_zero() && nonneg(z),
    }
}

/// Defining constraints of ℰ, in the order they are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    Shape,
    NonNegative,
    Determinant,
    EBound,
    FBound,
    LowerCone,
    UpperCone,
}

impl Constraint {
    pub const ALL: [Constraint; 7] = [
        Constraint::Shape,
        Constraint::NonNegative,
        Constraint::Determinant,
        Constraint::EBound,
        Constraint::FBound,
        Constraint::LowerCone,
        Constraint::UpperCone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constraint::Shape => "third-column=(0,0,1)",
            Constraint::NonNegative => "entries>=0",
            Constraint::Determinant => "AD-BC=1",
            Constraint::EBound => "E<A+C",
            Constraint::FBound => "F<B+D",
            Constraint::LowerCone => "-C<=CF-DE",
            Constraint::UpperCone => "CF-DE<D",
        }
    }

    /// Whether `r` satisfies this constraint on its own. Constraints after
    /// `Shape` read the entries as if the shape held.
    pub fn holds(self, r: &Mat3) -> bool {
        let k = r.block();
        let cf_de = || k.c * k.f - k.d * k.e;
        match self {
            Constraint::Shape => r.has_block_shape(),
            Constraint::NonNegative => [k.a, k.b, k.c, k.d, k.e, k.f]
                .iter()
                .all(|x| !x.is_negative()),
            Constraint::Determinant => (k.a * k.d - k.b * k.c).is_one(),
            Constraint::EBound => k.e < &(k.a + k.c),
            Constraint::FBound => k.f < &(k.b + k.d),
            Constraint::LowerCone => -k.c <= cf_de(),
            Constraint::UpperCone => &cf_de() < k.d,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// First violated constraint.
    Violates(Constraint),
}

impl Membership {
    pub fn is_member(self) -> bool {
        self == Membership::Member
    }
}

pub fn is_in_e(r: &Mat3) -> Membership {
    if let Some(c) = Constraint::ALL.into_iter().find(|c| !c.holds(r)) {
        return Membership::Violates(c);
    }
    // companion bound −A < AF − BE ≤ B, equivalent given the checks above
    let k = r.block();
    let af_be = k.a * k.f - k.b * k.e;
    assert!(
        -k.a < af_be && &af_be <= k.b,
        "companion bound fails for member {r}"
    );
    Membership::Member
}

fn count(n: &BigInt) -> Result<usize> {
    n.to_usize()
        .ok_or_else(|| Error::InvalidParams(format!("exponent {n} too large")))
}

/// Factors a member of ℰ into generators.
///
/// Dispatch per step: `C = 0` gives `G^{B−F} G̃^F`; `B = 0` gives
/// `D̃^{C−E} D^E`; `A ≥ C, B ≥ D` peels `R_{G̃}` when `C ≤ E, D ≤ F` and `R_G`
/// otherwise; anything else is swap-conjugated first, with tokens mapped back
/// through G̃ ↔ D, G ↔ D̃.
pub fn decompose(r: &Mat3) -> Result<GenWord> {
    if let Membership::Violates(c) = is_in_e(r) {
        return Err(Error::Membership(c));
    }
    let mut out = GenWord::identity();
    let mut cur = r.clone();
    let mut swapped = false;
    let emit = |out: &mut GenWord, g: Generator, swapped: bool, times: usize| {
        for _ in 0..times {
            out.push(if swapped { g.swapped() } else { g });
        }
    };
    loop {
        let k = cur.block();
        if k.c.is_zero() {
            debug_assert!(k.a.is_one() && k.d.is_one() && k.e.is_zero());
            emit(&mut out, Generator::G, swapped, count(&(k.b - k.f))?);
            emit(&mut out, Generator::Gt, swapped, count(k.f)?);
            return Ok(out);
        }
        if k.b.is_zero() {
            debug_assert!(k.a.is_one() && k.d.is_one() && k.f.is_zero());
            emit(&mut out, Generator::Dt, swapped, count(&(k.c - k.e))?);
            emit(&mut out, Generator::D, swapped, count(k.e)?);
            return Ok(out);
        }
        if !(k.a >= k.c && k.b >= k.d) {
            // A ≤ C and B ≤ D; the swap turns this into A ≥ C, B ≥ D
            cur = cur.swap_conjugate();
            swapped = !swapped;
            let k = cur.block();
            assert!(
                k.a >= k.c && k.b >= k.d,
                "swap did not reach the A>=C, B>=D case for {cur}"
            );
            continue;
        }
        let before = k.a + k.c;
        let peel_gt = k.c <= k.e && k.d <= k.f;
        assert!(
            peel_gt || (k.e < k.a && k.f < k.b),
            "no peel applies to {cur}"
        );
        let (a, b, c, d) = (k.a - k.c, k.b - k.d, k.c.clone(), k.d.clone());
        let (e, f) = if peel_gt {
            (k.e - k.c, k.f - k.d)
        } else {
            (k.e.clone(), k.f.clone())
        };
        emit(
            &mut out,
            if peel_gt { Generator::Gt } else { Generator::G },
            swapped,
            1,
        );
        cur = Mat3::from_blocks(&IncidenceMatrix::new(a, b, c, d), e, f);
        let k = cur.block();
        assert!(k.a + k.c < before, "A+C did not decrease");
    }
}

/// Closed-form inverse of `[[A,B,0],[C,D,0],[E,F,1]]` with `AD−BC = 1`.
pub fn mat3_inverse(r: &Mat3) -> Result<Mat3> {
    if !r.has_block_shape() {
        return Err(Error::Shape);
    }
    let k = r.block();
    let det = k.a * k.d - k.b * k.c;
    if !det.is_one() {
        return Err(Error::Determinant(det.to_string()));
    }
    let z = BigInt::zero;
    Ok(Mat3 {
        rows: [
            [k.d.clone(), -k.b, z()],
            [-k.c, k.a.clone(), z()],
            [k.f * k.c - k.e * k.d, k.b * k.e - k.f * k.a, BigInt::one()],
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphisms::compose;
    use proptest::prelude::*;

    fn mat(s: &str) -> Mat3 {
        s.parse().unwrap()
    }

    fn gw(s: &str) -> GenWord {
        s.parse().unwrap()
    }

    fn qv(v: [i64; 3]) -> [QuadExt; 3] {
        v.map(QuadExt::integer)
    }

    #[test]
    fn generator_matrices() {
        assert_eq!(rep_gen(Generator::Gt), mat("[[1,1,0],[0,1,0],[0,1,1]]"));
        assert_eq!(rep_gen(Generator::D), mat("[[1,0,0],[1,1,0],[1,0,1]]"));
        assert_eq!(rep_gen(Generator::G), mat("[[1,1,0],[0,1,0],[0,0,1]]"));
        assert_eq!(rep_gen(Generator::Dt), mat("[[1,0,0],[1,1,0],[0,0,1]]"));
    }

    #[test]
    fn products() {
        // R_D·R_G·R_G by hand: R_D·R_G = [[1,1,0],[1,2,0],[1,1,1]], times R_G adds column 0 to column 1
        assert_eq!(rep(&gw("DGG")), mat("[[1,2,0],[1,3,0],[1,2,1]]"));
        assert_eq!(rep(&gw("GDG'")), rep(&gw("G'D'G")));
        assert_eq!(rep(&gw("G'D'D'G")), mat("[[3,4,0],[2,3,0],[2,3,1]]"));
        assert_eq!(rep(&GenWord::identity()), Mat3::identity());
        for k in 0..6 {
            let dk = rep(&GenWord::new(vec![Generator::D; k]));
            let k = k as i64;
            assert_eq!(dk, Mat3::from_i64([[1, 0, 0], [k, 1, 0], [k, 0, 1]]));
        }
    }

    #[test]
    fn letter_exchange_matrix() {
        let e = rep_e();
        assert_eq!(e.mul(&e), Mat3::identity());
        assert_eq!(e.det(), BigInt::one());
        let alpha: QuadExt = "(0+1*sqrt(2))/2".parse().unwrap();
        let delta: QuadExt = "1/3".parse().unwrap();
        let one = QuadExt::one();
        let image = e
            .apply(&[&one - &alpha, alpha.clone(), delta.clone()])
            .unwrap();
        assert_eq!(image, [alpha.clone(), &one - &alpha, &one - &delta]);
    }

    #[test]
    fn cone_examples() {
        assert!(cone_contains(Cone::C1, &qv([1, 1, 2])));
        assert!(!cone_contains(Cone::C1, &qv([1, 1, 3])));
        assert!(cone_contains(Cone::C2, &qv([1, -1, 0])));
        assert!(!cone_contains(Cone::C2, &qv([1, 1, 0])));
        assert!(!cone_contains(Cone::C3, &qv([0, 0, -1])));
        assert!(cone_contains(Cone::C3, &qv([0, 0, 4])));
    }

    #[test]
    fn membership_examples() {
        assert!(is_in_e(&mat("[[1,2,0],[1,3,0],[1,2,1]]")).is_member());
        assert_eq!(
            is_in_e(&mat("[[1,1,0],[0,1,0],[0,2,1]]")),
            Membership::Violates(Constraint::FBound)
        );
        assert!(is_in_e(&Mat3::identity()).is_member());
        assert_eq!(
            is_in_e(&mat("[[2,1,0],[1,2,0],[0,0,1]]")),
            Membership::Violates(Constraint::Determinant)
        );
        assert_eq!(
            is_in_e(&mat("[[1,1,1],[0,1,0],[0,0,1]]")),
            Membership::Violates(Constraint::Shape)
        );
        assert_eq!(
            is_in_e(&mat("[[1,0,0],[1,1,0],[-1,0,1]]")),
            Membership::Violates(Constraint::NonNegative)
        );
        // E = 2 with A+C = 3, F = 0: CF−DE = −2 < −C = −1
        assert_eq!(
            is_in_e(&mat("[[1,1,0],[2,3,0],[2,0,1]]")),
            Membership::Violates(Constraint::LowerCone)
        );
        // E = 0, F = 2 with C = 1, D = 2: CF−DE = 2 ≥ D
        assert_eq!(
            is_in_e(&mat("[[1,1,0],[1,2,0],[0,2,1]]")),
            Membership::Violates(Constraint::UpperCone)
        );
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(
            decompose(&mat("[[1,2,0],[1,3,0],[1,2,1]]")).unwrap(),
            gw("DGG")
        );
        assert_eq!(decompose(&Mat3::identity()).unwrap(), GenWord::identity());
        assert_eq!(
            decompose(&mat("[[1,1,0],[0,1,0],[0,2,1]]")),
            Err(Error::Membership(Constraint::FBound))
        );
        assert_eq!(
            decompose(&mat("[[1,3,0],[0,1,0],[0,1,1]]")).unwrap(),
            gw("GGG'")
        );
        assert_eq!(
            decompose(&mat("[[1,0,0],[3,1,0],[1,0,1]]")).unwrap(),
            gw("D'D'D")
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            mat3_inverse(&rep_gen(Generator::G)).unwrap(),
            mat("[[1,-1,0],[0,1,0],[0,0,1]]")
        );
        assert_eq!(
            mat3_inverse(&mat("[[1,2,0],[1,3,0],[1,2,1]]")).unwrap(),
            mat("[[3,-2,0],[-1,1,0],[-1,0,1]]")
        );
        assert_eq!(mat3_inverse(&Mat3::identity()).unwrap(), Mat3::identity());
        assert_eq!(
            mat3_inverse(&mat("[[1,0,1],[0,1,0],[0,0,1]]")),
            Err(Error::Shape)
        );
        assert!(matches!(
            mat3_inverse(&mat("[[2,0,0],[0,1,0],[0,0,1]]")),
            Err(Error::Determinant(_))
        ));
    }

    #[test]
    fn text_format() {
        let s = "[[1,2,0],[1,3,0],[1,2,1]]";
        assert_eq!(mat(s).to_string(), s);
        assert_eq!(mat("[[1, 2, 0], [1, 3, 0], [1, 2, 1]]").to_string(), s);
        assert!("[[1,2],[3,4]]".parse::<Mat3>().is_err());
        assert!("[[1,2,x],[1,3,0],[1,2,1]]".parse::<Mat3>().is_err());
    }

    fn arb_genword(max: usize) -> impl Strategy<Value = GenWord> {
        prop::collection::vec(prop::sample::select(Generator::ALL.to_vec()), 0..=max)
            .prop_map(GenWord::new)
    }

    fn arb_cone_point(cone: Cone) -> impl Strategy<Value = [QuadExt; 3]> {
        (0i64..100, 0i64..100, 0i64..=100, 1i64..20).prop_map(move |(x, y, t, den)| {
            let r = |n: i64| QuadExt::rational(n, den).unwrap();
            match cone {
                // z = t% of the way from 0 to x+y
                Cone::C1 => [
                    r(x),
                    r(y),
                    QuadExt::rational(t * (x + y), 100 * den).unwrap(),
                ],
                Cone::C2 => [
                    r(x),
                    r(-y),
                    QuadExt::rational(-y * 100 + t * (x + y), 100 * den).unwrap(),
                ],
                Cone::C3 => [QuadExt::zero(), QuadExt::zero(), r(t)],
            }
        })
    }

    proptest! {
        #[test]
        fn homomorphism(w1 in arb_genword(8), w2 in arb_genword(8)) {
            prop_assert_eq!(rep(&w1.concat(&w2)), rep(&w1).mul(&rep(&w2)));
        }

        #[test]
        fn faithful_on_pairs(w1 in arb_genword(10), w2 in arb_genword(10)) {
            prop_assert_eq!(rep(&w1) == rep(&w2), compose(&w1) == compose(&w2));
        }

        #[test]
        fn decompose_round_trip(w in arb_genword(15)) {
            let r = rep(&w);
            prop_assert!(is_in_e(&r).is_member());
            let back = decompose(&r).unwrap();
            prop_assert_eq!(rep(&back), r);
            prop_assert_eq!(compose(&back), compose(&w));
            prop_assert_eq!(rep(&w).mul(&mat3_inverse(&rep(&w)).unwrap()), Mat3::identity());
        }

        #[test]
        fn cones_invariant(
            w in arb_genword(8),
            p1 in arb_cone_point(Cone::C1),
            p2 in arb_cone_point(Cone::C2),
            p3 in arb_cone_point(Cone::C3),
        ) {
            let r = rep(&w);
            let inv = mat3_inverse(&r).unwrap();
            prop_assert!(cone_contains(Cone::C1, &p1));
            prop_assert!(cone_contains(Cone::C2, &p2));
            prop_assert!(cone_contains(Cone::C1, &r.apply(&p1).unwrap()));
            prop_assert!(cone_contains(Cone::C2, &inv.apply(&p2).unwrap()));
            prop_assert!(cone_contains(Cone::C3, &r.apply(&p3).unwrap()));
        }
    }
}
