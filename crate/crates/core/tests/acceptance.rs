//! Acceptance gate: ten criteria, one PASS/FAIL line each.
//!
//! Every criterion has a pinned sample count, seed and wall-clock limit. A
//! criterion passes only if all of its checks hold and it finishes in time.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sturm_core::dynamics::{
    dekking_mirror, dominant_eigen, fixed_point_params, fixed_point_stream, image_params,
    params_of, yasutomi_check,
};
use sturm_core::morphisms::{conjugates_of, rightmost_conjugate};
use sturm_core::representation::{Constraint, Membership};
use sturm_core::sqroot::{
    sqrt_fixing_morphism, square_root_stream, SquareDecomposition, DEFAULT_SCAN_BOUND,
};
use sturm_core::words::iet_code;
use sturm_core::{
    compose, decompose, is_in_e, rep, Boundary, GenWord, Generator, IncidenceMatrix, Mat3, QuadExt,
    SlopeIntercept,
};

type Outcome = Result<String, String>;

/// Name, time limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gw(s: &str) -> GenWord {
    s.parse().expect("generator word")
}

fn random_word(rng: &mut ChaCha8Rng, gens: &[Generator], min: usize, max: usize) -> GenWord {
    let len = rng.gen_range(min..=max);
    GenWord::new((0..len).map(|_| *gens.choose(rng).unwrap()).collect())
}

fn random_primitive(rng: &mut ChaCha8Rng, gens: &[Generator], max: usize) -> GenWord {
    loop {
        let w = random_word(rng, gens, 2, max);
        if compose(&w).incidence().is_primitive() {
            return w;
        }
    }
}

fn relation_pair(k: usize) -> [(GenWord, GenWord); 2] {
    use Generator::*;
    let word = |a, b, c| GenWord::new([vec![a], vec![b; k], vec![c]].concat());
    [
        (word(G, D, Gt), word(Gt, Dt, G)),
        (word(D, G, Dt), word(Dt, Gt, D)),
    ]
}

fn c1_relations() -> Outcome {
    for k in 0..=5 {
        for (l, r) in relation_pair(k) {
            ensure(compose(&l) == compose(&r), || {
                format!("{l} and {r} differ as morphisms")
            })?;
            ensure(rep(&l) == rep(&r), || {
                format!("{l} and {r} differ as matrices")
            })?;
        }
    }
    Ok("k = 0..5, both relations".into())
}

fn c2_faithfulness() -> Outcome {
    let mut groups: HashMap<Mat3, Vec<GenWord>> = HashMap::new();
    let mut words = vec![GenWord::identity()];
    let mut frontier = words.clone();
    for _ in 0..7 {
        frontier = frontier
            .iter()
            .flat_map(|w| {
                Generator::ALL
                    .iter()
                    .map(move |&g| w.concat(&GenWord::new(vec![g])))
            })
            .collect();
        words.extend(frontier.iter().cloned());
    }
    for w in &words {
        groups.entry(rep(w)).or_default().push(w.clone());
    }
    let mut images = HashSet::new();
    for (m, ws) in &groups {
        let phi = compose(&ws[0]);
        for w in &ws[1..] {
            ensure(compose(w) == phi, || {
                format!("{} and {w} share {m} but differ", ws[0])
            })?;
        }
        images.insert(phi);
    }
    ensure(images.len() == groups.len(), || {
        format!("{} matrices but {} morphisms", groups.len(), images.len())
    })?;
    Ok(format!("{} words, {} classes", words.len(), groups.len()))
}

/// Independent transcription of the defining inequalities, in certificate order.
fn first_violation(m: &Mat3) -> Option<Constraint> {
    let e = |i, j| -> i128 { i128::try_from(m.get(i, j)).expect("small entries") };
    let (a, b, c, d, ee, f) = (e(0, 0), e(0, 1), e(1, 0), e(1, 1), e(2, 0), e(2, 1));
    let checks = [
        (
            Constraint::Shape,
            e(0, 2) == 0 && e(1, 2) == 0 && e(2, 2) == 1,
        ),
        (
            Constraint::NonNegative,
            [a, b, c, d, ee, f].iter().all(|&x| x >= 0),
        ),
        (Constraint::Determinant, a * d - b * c == 1),
        (Constraint::EBound, ee < a + c),
        (Constraint::FBound, f < b + d),
        (Constraint::LowerCone, -c <= c * f - d * ee),
        (Constraint::UpperCone, c * f - d * ee < d),
    ];
    checks.into_iter().find(|(_, ok)| !ok).map(|(c, _)| c)
}

fn c3_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut members = Vec::new();
    for _ in 0..1000 {
        let w = random_word(&mut rng, &Generator::ALL, 0, 15);
        let r = rep(&w);
        ensure(is_in_e(&r).is_member(), || format!("rep({w}) rejected"))?;
        let back = decompose(&r).map_err(|e| format!("{w}: {e}"))?;
        ensure(rep(&back) == r, || format!("{w} came back as {back}"))?;
        members.push(r);
    }
    let mut rejected = 0;
    let mut tries = 0;
    while rejected < 200 {
        tries += 1;
        let base = members.choose(&mut rng).unwrap();
        let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
        let delta = *[-3i64, -2, -1, 1, 2, 3].choose(&mut rng).unwrap();
        let mut rows = base.rows().clone();
        rows[i][j] += delta;
        let m = Mat3::new(rows);
        match first_violation(&m) {
            Some(expected) => {
                ensure(is_in_e(&m) == Membership::Violates(expected), || {
                    format!(
                        "{m}: expected certificate {expected}, got {:?}",
                        is_in_e(&m)
                    )
                })?;
                ensure(!expected.holds(&m), || {
                    format!("{m}: certificate {expected} actually holds")
                })?;
                ensure(decompose(&m).is_err(), || {
                    format!("{m} decomposed despite violating {expected}")
                })?;
                rejected += 1;
            }
            // the perturbation landed on another member
            None => ensure(decompose(&m).map(|w| rep(&w) == m) == Ok(true), || {
                format!("{m} should round-trip")
            })?,
        }
    }
    Ok(format!(
        "1000 words, {rejected} mutants rejected out of {tries}"
    ))
}

fn random_slope_intercept(rng: &mut ChaCha8Rng) -> SlopeIntercept {
    let m = *[2i64, 3, 5, 7, 13].choose(rng).unwrap();
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
    SlopeIntercept::new(alpha, delta, kind).unwrap()
}

fn c4_commutation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 2000;
    for _ in 0..200 {
        let w = random_word(&mut rng, &Generator::ALL, 0, 6);
        let si = random_slope_intercept(&mut rng);
        let phi = compose(&w);
        let v = params_of(&si);
        let longest = phi.image0().len().max(phi.image1().len());
        let symbolic = phi.apply(&iet_code(&v, n).map_err(|e| e.to_string())?);
        let image = image_params(&w, &v).map_err(|e| e.to_string())?;
        let geometric = iet_code(&image, n * longest).map_err(|e| e.to_string())?;
        ensure(symbolic.is_prefix_of(&geometric), || format!("{w} on {v}"))?;
    }
    Ok("200 pairs, 2000 letters".into())
}

const DGG_FIXED: &str = "10101101010110101011010110101011010101101010110101101010";

fn c5_fixed_points() -> Outcome {
    let phi = compose(&gw("DGG"));
    let iterated = phi
        .fixed_point_stream(1)
        .and_then(|mut s| s.take_word(56))
        .map_err(|e| e.to_string())?;
    ensure(iterated.to_string() == DGG_FIXED, || {
        format!("iteration gave {iterated}")
    })?;
    let eigen = iet_code(
        &fixed_point_params(&gw("DGG")).map_err(|e| e.to_string())?,
        56,
    )
    .map_err(|e| e.to_string())?;
    ensure(eigen.to_string() == DGG_FIXED, || {
        format!("eigenvector gave {eigen}")
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let w = random_primitive(&mut rng, &Generator::ALL, 8);
        let u = fixed_point_stream(&w)
            .and_then(|mut s| s.take_word(5000))
            .map_err(|e| e.to_string())?;
        let it = compose(&w)
            .fixed_point_stream(u.first().unwrap())
            .and_then(|mut s| s.take_word(5000));
        ensure(it.as_ref() == Ok(&u), || {
            format!("{w}: iteration and eigenvector disagree")
        })?;
    }
    Ok("DG² prefix from both routes, 100 random words to 5000 letters".into())
}

fn c6_conjugacy() -> Outcome {
    let mut count = 0;
    for a in 0..=20i64 {
        for b in 0..=20 - a {
            for c in 0..=20 - a - b {
                for d in 0..=20 - a - b - c {
                    if a * d - b * c != 1 {
                        continue;
                    }
                    let m = IncidenceMatrix::new(a, b, c, d);
                    let family = conjugates_of(&m).map_err(|e| format!("{m}: {e}"))?;
                    let distinct: BTreeSet<_> = family.iter().collect();
                    let want = (a + b + c + d - 1) as usize;
                    ensure(distinct.len() == want, || {
                        format!("{m}: {} distinct, want {want}", distinct.len())
                    })?;
                    ensure(family.iter().all(|phi| phi.incidence() == m), || {
                        format!("{m}: wrong incidence")
                    })?;
                    let right: BTreeSet<_> = family
                        .iter()
                        .map(|phi| rightmost_conjugate(phi).map_err(|e| e.to_string()))
                        .collect::<Result<_, _>>()?;
                    ensure(right.len() == 1, || {
                        format!("{m}: {} rightmost conjugates", right.len())
                    })?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} matrices"))
}

const PAPER_ROOTS: [&str; 16] = [
    "10", "1", "01", "0110101", "10", "101", "01", "10", "101", "0110101", "0110101", "10", "101",
    "01", "1", "10",
];
const PAPER_SQRT: &str = "1010110110101011010101101010110101101010110101011010101101";

fn c7_sqrt_reproduction() -> Outcome {
    let mut problems = Vec::new();
    let fp = compose(&gw("DGG"))
        .fixed_point_stream(1)
        .map_err(|e| e.to_string())?;
    let d =
        SquareDecomposition::of_stream(fp, 16, DEFAULT_SCAN_BOUND).map_err(|e| e.to_string())?;
    let roots: Vec<String> = d.roots.iter().map(|w| w.to_string()).collect();
    if roots != PAPER_ROOTS {
        let at: Vec<usize> = (0..16)
            .filter(|&i| roots[i] != PAPER_ROOTS[i])
            .map(|i| i + 1)
            .collect();
        problems.push(format!(
            "roots differ at blocks {at:?}: got {}",
            roots.join(",")
        ));
    }
    let u = fixed_point_stream(&gw("DGG")).map_err(|e| e.to_string())?;
    let root = square_root_stream(u, DEFAULT_SCAN_BOUND)
        .take_word(58)
        .map_err(|e| e.to_string())?;
    if root.to_string() != PAPER_SQRT {
        problems.push(format!("58-letter root is {root}"));
    }
    let s = sqrt_fixing_morphism(&gw("DGG")).map_err(|e| e.to_string())?;
    if s.k != 2 || s.psi.to_string() != "0->1010101,1->1010101101011010101" {
        problems.push(format!("got k = {} and psi = {}", s.k, s.psi));
    }
    if problems.is_empty() {
        Ok("roots, 58-letter root, k = 2 and psi".into())
    } else {
        Err(problems.join("; "))
    }
}

fn c8_sqrt_theorem() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ks = [0usize; 4];
    let mut found = 0;
    while found < 50 {
        let w = random_primitive(&mut rng, &Generator::ALL, 7);
        let r = rep(&w);
        if r.get(2, 0) != r.get(1, 0) || r.get(2, 1) != &(r.get(1, 1) - 1) {
            continue;
        }
        found += 1;
        let s = sqrt_fixing_morphism(&w).map_err(|e| format!("{w}: {e}"))?;
        ensure(s.k <= 3, || format!("{w}: k = {}", s.k))?;
        ks[s.k as usize] += 1;
        for img in [s.psi.image0(), s.psi.image1()] {
            ensure(img.is_palindrome() && img.len() % 2 == 1, || {
                format!("{w}: {img} is not an odd palindrome")
            })?;
        }
        let phi_k = compose(&w.pow(s.k as usize));
        ensure(s.psi.incidence() == phi_k.incidence(), || {
            format!("{w}: incidence differs from phi^k")
        })?;
        let same = rightmost_conjugate(&s.psi).ok() == rightmost_conjugate(&phi_k).ok();
        ensure(same, || format!("{w}: psi is not conjugate to phi^{}", s.k))?;
        let root = fixed_point_stream(&w)
            .and_then(|u| square_root_stream(u, DEFAULT_SCAN_BOUND).take_word(2000))
            .map_err(|e| e.to_string())?;
        ensure(s.psi.fixes_prefix(&root), || {
            format!("{w}: {} does not fix the root", s.psi)
        })?;
    }
    Ok(format!(
        "50 words, k = 1/2/3 counts {}/{}/{}",
        ks[1], ks[2], ks[3]
    ))
}

fn c9_yasutomi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let w = random_primitive(&mut rng, &Generator::ALL, 10);
        let e = dominant_eigen(&w).map_err(|e| e.to_string())?;
        let report = yasutomi_check(&e);
        ensure(report.holds(), || {
            format!("{w}: {}", report.to_string().replace('\n', "; "))
        })?;
    }
    Ok("200 words".into())
}

fn c10_dekking() -> Outcome {
    let err = |e: sturm_core::Error| e.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let one = QuadExt::one();
    for _ in 0..50 {
        let w = random_primitive(&mut rng, &[Generator::Gt, Generator::Dt], 9);
        let v = fixed_point_params(&w).map_err(err)?;
        ensure(v.rho() == &(&one - v.l1()), || {
            format!("{w}: intercept is not 1-alpha")
        })?;
        for kind in [Boundary::Lower, Boundary::Upper] {
            let si = SlopeIntercept::new(v.l1().clone(), v.rho().clone(), kind).map_err(err)?;
            let u = iet_code(&params_of(&si), 2000).map_err(err)?;
            ensure(compose(&w).fixes_prefix(&u), || {
                format!("{w} does not fix the {kind} sequence")
            })?;
        }
    }
    for _ in 0..50 {
        let w = random_primitive(&mut rng, &[Generator::G, Generator::Dt], 9);
        let alpha = fixed_point_params(&w).map_err(err)?.l1().clone();
        let si = SlopeIntercept::new(alpha, QuadExt::zero(), Boundary::Upper).map_err(err)?;
        let eta = compose(&dekking_mirror(&w).map_err(err)?);
        let u = iet_code(&params_of(&si), 2000).map_err(err)?;
        ensure(eta.fixes_prefix(&u), || {
            format!("mirror of {w} does not fix the upper sequence")
        })?;
    }
    Ok("50 words over {G',D'}, 50 mirrored words over {G,D'}".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("presentation relations", 1, c1_relations),
        ("faithfulness up to length 7", 30, c2_faithfulness),
        ("membership and decomposition round trip", 60, c3_round_trip),
        ("parameter commutation", 60, c4_commutation),
        ("fixed-point reproduction", 60, c5_fixed_points),
        ("conjugacy count", 60, c6_conjugacy),
        ("square root example", 5, c7_sqrt_reproduction),
        ("square-root theorem properties", 300, c8_sqrt_theorem),
        ("Yasutomi condition", 30, c9_yasutomi),
        ("Dekking pairs", 120, c10_dekking),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let limit = Duration::from_secs(limit);
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(detail) if elapsed < limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; over the time limit")),
            Err(why) => ("FAIL", why),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} [{:.2}s < {}s] {name}: {detail}",
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
