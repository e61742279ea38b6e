//! Seeded property suites behind `sturm verify`.
//!
//! Samples are drawn in fixed-size batches. Batch `b` of suite `s` uses
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `(s << 32) | b`, so batches can
//! run on any number of threads and the merged report is always the same.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sturm_core::dynamics::{
    dekking_mirror, dominant_eigen, fixed_point_params, fixed_point_stream, image_params,
    params_of, yasutomi_check,
};
use sturm_core::morphisms::{conjugates_of, rightmost_conjugate};
use sturm_core::sqroot::{sqrt_fixing_morphism, square_root_stream, DEFAULT_SCAN_BOUND};
use sturm_core::words::iet_code;
use sturm_core::{
    compose, decompose, is_in_e, rep, Boundary, GenWord, Generator, ParamVector, QuadExt,
    SlopeIntercept,
};

pub const RNG_NAME: &str = "ChaCha8Rng";
const BATCH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Relations,
    Faithfulness,
    RoundTrip,
    Commutation,
    FixedPoint,
    Conjugacy,
    Sqrt,
    Yasutomi,
    Dekking,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Relations,
        Suite::Faithfulness,
        Suite::RoundTrip,
        Suite::Commutation,
        Suite::FixedPoint,
        Suite::Conjugacy,
        Suite::Sqrt,
        Suite::Yasutomi,
        Suite::Dekking,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Faithfulness => "faithfulness",
            Suite::RoundTrip => "roundtrip",
            Suite::Commutation => "commutation",
            Suite::FixedPoint => "fixed-point",
            Suite::Conjugacy => "conjugacy",
            Suite::Sqrt => "sqrt",
            Suite::Yasutomi => "yasutomi",
            Suite::Dekking => "dekking",
        }
    }

    fn check(self, rng: &mut ChaCha8Rng) -> Result<(), String> {
        match self {
            Suite::Relations => relations(rng),
            Suite::Faithfulness => faithfulness(rng),
            Suite::RoundTrip => round_trip(rng),
            Suite::Commutation => commutation(rng),
            Suite::FixedPoint => fixed_point(rng),
            Suite::Conjugacy => conjugacy(rng),
            Suite::Sqrt => sqrt(rng),
            Suite::Yasutomi => yasutomi(rng),
            Suite::Dekking => dekking(rng),
        }
    }
}

pub fn select(name: &str) -> Result<Vec<Suite>, String> {
    if name == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    Suite::ALL
        .into_iter()
        .find(|s| s.name() == name)
        .map(|s| vec![s])
        .ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
            format!(
                "unknown suite {name:?}, expected all or one of {}",
                names.join(", ")
            )
        })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: Suite,
    pub passed: usize,
    pub samples: usize,
    /// Sample index and message of the first failure.
    pub first_failure: Option<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub seed: u64,
    pub samples: usize,
    pub results: Vec<SuiteResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.first_failure.is_none())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "rng: {RNG_NAME} seed={} samples={} batch={BATCH}",
            self.seed, self.samples
        )?;
        for r in &self.results {
            match &r.first_failure {
                None => writeln!(f, "{}: PASS {}/{}", r.suite.name(), r.passed, r.samples)?,
                Some((i, msg)) => writeln!(
                    f,
                    "{}: FAIL {}/{} first failure at sample {i}: {msg}",
                    r.suite.name(),
                    r.passed,
                    r.samples
                )?,
            }
        }
        Ok(())
    }
}

fn batch_rng(seed: u64, suite: usize, batch: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((suite as u64) << 32) | batch as u64);
    rng
}

pub fn run(suites: &[Suite], samples: usize, seed: u64) -> Report {
    let results = suites
        .iter()
        .map(|&suite| {
            let index = Suite::ALL.iter().position(|&s| s == suite).expect("listed");
            let batches = samples.div_ceil(BATCH);
            let outcomes: Vec<Vec<Result<(), String>>> = (0..batches)
                .into_par_iter()
                .map(|b| {
                    let mut rng = batch_rng(seed, index, b);
                    let n = BATCH.min(samples - b * BATCH);
                    (0..n).map(|_| suite.check(&mut rng)).collect()
                })
                .collect();
            let flat: Vec<_> = outcomes.into_iter().flatten().collect();
            let passed = flat.iter().filter(|o| o.is_ok()).count();
            let first_failure = flat
                .into_iter()
                .enumerate()
                .find_map(|(i, o)| o.err().map(|m| (i, m)));
            SuiteResult {
                suite,
                passed,
                samples,
                first_failure,
            }
        })
        .collect();
    Report {
        seed,
        samples,
        results,
    }
}

fn random_word(rng: &mut ChaCha8Rng, gens: &[Generator], min: usize, max: usize) -> GenWord {
    let len = rng.gen_range(min..=max);
    GenWord::new(
        (0..len)
            .map(|_| *gens.choose(rng).expect("nonempty"))
            .collect(),
    )
}

fn random_primitive(rng: &mut ChaCha8Rng, gens: &[Generator], max: usize) -> GenWord {
    loop {
        let w = random_word(rng, gens, 2, max);
        if compose(&w).incidence().is_primitive() {
            return w;
        }
    }
}

/// Irrational slope in Q(√m) and a rational or same-field intercept.
fn random_slope_intercept(rng: &mut ChaCha8Rng) -> SlopeIntercept {
    let m = *[2i64, 3, 5, 7, 13].choose(rng).expect("nonempty");
    let frac = |x: QuadExt| &x - &QuadExt::integer(x.floor());
    let alpha = frac(
        QuadExt::from_radicand(
            rng.gen_range(-9..10),
            rng.gen_range(1..5),
            rng.gen_range(1..10),
            m,
        )
        .unwrap(),
    );
    let delta = if rng.gen_bool(0.5) {
        let q = rng.gen_range(1..40);
        QuadExt::rational(rng.gen_range(0..q), q).unwrap()
    } else {
        frac(
            QuadExt::from_radicand(
                rng.gen_range(-9..10),
                rng.gen_range(-4..5),
                rng.gen_range(1..10),
                m,
            )
            .unwrap(),
        )
    };
    let kind = if rng.gen_bool(0.5) {
        Boundary::Lower
    } else {
        Boundary::Upper
    };
    match SlopeIntercept::new(alpha.clone(), delta, kind) {
        Ok(si) => si,
        // δ = 1 is out of range for lower, δ = 0 is fine for both
        Err(_) => {
            SlopeIntercept::new(alpha, QuadExt::zero(), kind).expect("zero intercept is valid")
        }
    }
}

fn relations(rng: &mut ChaCha8Rng) -> Result<(), String> {
    use Generator::*;
    let k = rng.gen_range(0..12);
    let word = |a, b, c| GenWord::new([vec![a], vec![b; k], vec![c]].concat());
    for (l, r) in [
        (word(G, D, Gt), word(Gt, Dt, G)),
        (word(D, G, Dt), word(Dt, Gt, D)),
    ] {
        if compose(&l) != compose(&r) || rep(&l) != rep(&r) {
            return Err(format!("{l} and {r} differ"));
        }
    }
    Ok(())
}

fn faithfulness(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let a = random_word(rng, &Generator::ALL, 0, 8);
    // bias towards equal matrices by rewriting with a relation
    let b = if rng.gen_bool(0.5) {
        random_word(rng, &Generator::ALL, 0, 8)
    } else {
        decompose(&rep(&a)).unwrap()
    };
    if (rep(&a) == rep(&b)) != (compose(&a) == compose(&b)) {
        return Err(format!("{a} vs {b}"));
    }
    Ok(())
}

fn round_trip(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let w = random_word(rng, &Generator::ALL, 0, 15);
    let r = rep(&w);
    if !is_in_e(&r).is_member() {
        return Err(format!("rep({w}) rejected"));
    }
    let back = decompose(&r).map_err(|e| format!("{w}: {e}"))?;
    if rep(&back) != r {
        return Err(format!("{w} decomposed to {back}"));
    }
    Ok(())
}

fn commutation(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let w = random_word(rng, &Generator::ALL, 0, 6);
    let si = random_slope_intercept(rng);
    let phi = compose(&w);
    let v = params_of(&si);
    let n = 2000;
    let longest = phi.image0().len().max(phi.image1().len());
    let lhs = phi.apply(&iet_code(&v, n).map_err(|e| e.to_string())?);
    let image = image_params(&w, &v).map_err(|e| e.to_string())?;
    let rhs = iet_code(&image, n * longest).map_err(|e| e.to_string())?;
    if !lhs.is_prefix_of(&rhs) {
        return Err(format!("{w} on {v}"));
    }
    Ok(())
}

fn fixed_point(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let w = random_primitive(rng, &Generator::ALL, 8);
    let u = fixed_point_stream(&w)
        .and_then(|mut s| s.take_word(5000))
        .map_err(|e| e.to_string())?;
    if !compose(&w).fixes_prefix(&u) {
        return Err(format!("{w} does not fix its eigen-parameter sequence"));
    }
    Ok(())
}

fn conjugacy(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let w = random_word(rng, &Generator::ALL, 0, 7);
    let m = compose(&w).incidence();
    let family = conjugates_of(&m).map_err(|e| e.to_string())?;
    let total: usize = [&m.a, &m.b, &m.c, &m.d]
        .iter()
        .map(|x| usize::try_from(*x).unwrap())
        .sum();
    let distinct: std::collections::BTreeSet<_> = family.iter().collect();
    if distinct.len() != total - 1 || family.iter().any(|phi| phi.incidence() != m) {
        return Err(format!("{m}: {} conjugates", distinct.len()));
    }
    let rightmost: std::collections::BTreeSet<_> = family
        .iter()
        .map(|phi| rightmost_conjugate(phi).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if rightmost.len() != 1 {
        return Err(format!("{m}: {} rightmost conjugates", rightmost.len()));
    }
    Ok(())
}

fn sqrt(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let w = random_primitive(rng, &[Generator::G, Generator::D], 6);
    let s = sqrt_fixing_morphism(&w).map_err(|e| format!("{w}: {e}"))?;
    let root = fixed_point_stream(&w)
        .and_then(|u| square_root_stream(u, DEFAULT_SCAN_BOUND).take_word(2000))
        .map_err(|e| e.to_string())?;
    if !s.psi.fixes_prefix(&root) {
        return Err(format!("{} does not fix the square root for {w}", s.psi));
    }
    Ok(())
}

fn yasutomi(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let w = random_primitive(rng, &Generator::ALL, 10);
    let e = dominant_eigen(&w).map_err(|e| e.to_string())?;
    let report = yasutomi_check(&e);
    if !report.holds() {
        return Err(format!("{w}: {}", report.to_string().replace('\n', "; ")));
    }
    Ok(())
}

fn dekking(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let err = |e: sturm_core::Error| e.to_string();
    let w = random_primitive(rng, &[Generator::Gt, Generator::Dt], 8);
    let v = fixed_point_params(&w).map_err(err)?;
    for kind in [Boundary::Lower, Boundary::Upper] {
        let u = iet_code(&v.with_boundary(kind).map_err(err)?, 2000).map_err(err)?;
        if !compose(&w).fixes_prefix(&u) {
            return Err(format!("{w} does not fix the {kind} sequence"));
        }
    }
    let w = random_primitive(rng, &[Generator::G, Generator::Dt], 8);
    let v = fixed_point_params(&w).map_err(err)?;
    let upper = ParamVector::new(
        v.l0().clone(),
        v.l1().clone(),
        QuadExt::one(),
        Boundary::Upper,
    )
    .map_err(err)?;
    let eta = compose(&dekking_mirror(&w).map_err(err)?);
    if !eta.fixes_prefix(&iet_code(&upper, 2000).map_err(err)?) {
        return Err(format!("mirror of {w} does not fix the upper sequence"));
    }
    Ok(())
}
