//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{brute_force_quasi_determinants, generic_spec, random_binary, random_smonomial, sweep_suite, Q};
use mrees_core::grobner::{default_order_suite, generic_s_bar_a, universal_gb_check, ReductionStrategy};
use mrees_core::oracle::{compare_generated, monomial_syzygy_kernel, multidegrees, span_compare, OracleCaps};
use mrees_core::quasimat::{
    binary_subquasi_enumerate, quasi_determinants, quasi_determinants_positioned, rewrite_as_two_minors,
    BinaryQuasiMatrix, Binomial, QuasiMatrix,
};
use mrees_core::rees::{
    build_presentation, enumerate_T, squarefree_normality_report, Family, IndexingMode, NormalityVerdict,
    ReesPresentation, ReesSpec,
};
use mrees_core::sseq::{binomial, taylor_complex, SeqSpec};
use mrees_core::{parse_poly, OrderKind, Poly, VarUniverse};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Caps for the desk-scale sweep: total t-degree 3, s-degree 8. The largest
/// piece of the sweep has 20790 monomials.
const SWEEP_CAPS: OracleCaps = OracleCaps {
    max_monomials: 25_000,
    t_degree: 3,
    aux_degree: Some(8),
};

const SEED: u64 = 20_240_611;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn worked_example_spec() -> ReesSpec<Q> {
    let names = ["p1", "p2", "x", "y"].iter().map(|s| s.to_string()).collect();
    ReesSpec::new(
        SeqSpec::generic(names).unwrap(),
        vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3]],
        vec![1; 5],
        false,
    )
    .unwrap()
}

/// Parses `plus - minus` over the universe and returns its sign-normalized
/// display form.
fn normalized_binomial(text: &str, u: &Arc<VarUniverse>) -> String {
    let p: Poly<Q> = parse_poly(text, u).unwrap();
    normalized_poly(&p)
}

fn normalized_poly(p: &Poly<Q>) -> String {
    let mut sides = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect::<Vec<_>>();
    sides.sort_by(|a, b| a.0.cmp(&b.0));
    if sides.len() == 2 && sides[0].1 < sides[1].1 {
        p.scale(&-Q::from_integer(1.into())).to_string()
    } else {
        p.to_string()
    }
}

fn sweep_presentation(n: usize, ideals: &[Vec<usize>], a: &[u32]) -> ReesPresentation<Q> {
    build_presentation(&generic_spec(n, ideals.to_vec(), a.to_vec()), IndexingMode::Primary).unwrap()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let pres = build_presentation(&worked_example_spec(), IndexingMode::Primary).unwrap();
    let layout = "\
[ p1  T[1;1,1,1]  T[2;1,1,1]              T[4;1,1,1]             ]
[ p2  T[1;1,1,0]              T[3;1,1,0]              T[5;1,1,0] ]
[ x               T[2;1,0,0]  T[3;1,0,0]                         ]
[ y                                       T[4;0,0,0]  T[5;0,0,0] ]
";
    let layout_ok = pres.render_e() == layout && (pres.e.n_rows(), pres.e.n_cols()) == (4, 6);
    let u = &pres.universe;
    let expected: BTreeSet<String> = [
        "p1*T[1;1,1,0] - p2*T[1;1,1,1]",
        "p1*T[2;1,0,0] - x*T[2;1,1,1]",
        "p2*T[3;1,0,0] - x*T[3;1,1,0]",
        "p1*T[4;0,0,0] - y*T[4;1,1,1]",
        "p2*T[5;0,0,0] - y*T[5;1,1,0]",
        "T[1;1,1,1]*T[3;1,1,0]*T[2;1,0,0] - T[1;1,1,0]*T[2;1,1,1]*T[3;1,0,0]",
        "T[1;1,1,1]*T[5;1,1,0]*T[4;0,0,0] - T[1;1,1,0]*T[4;1,1,1]*T[5;0,0,0]",
        "T[2;1,1,1]*T[3;1,0,0]*T[4;0,0,0]*T[5;1,1,0] - T[2;1,0,0]*T[3;1,1,0]*T[4;1,1,1]*T[5;0,0,0]",
    ]
    .iter()
    .map(|s| normalized_binomial(s, u))
    .collect();
    let restricted = pres.defining_generators(Family::Restricted, None).unwrap();
    let got: BTreeSet<String> = restricted.iter().map(normalized_poly).collect();
    let gens_ok = restricted.len() == 8 && got == expected;
    let elapsed = t.elapsed();
    // The full family generates the same ideal as the listed eight.
    let full = pres.defining_generators(Family::FullIbin, None).unwrap();
    let caps = OracleCaps {
        max_monomials: 25_000,
        t_degree: 2,
        aux_degree: Some(4),
    };
    let degrees = multidegrees(&pres, &caps);
    let cmp = compare_generated(&restricted, &full, &pres, &degrees, &caps).unwrap();
    let full_ok = cmp.iter().all(|c| c.equal());
    outcome(
        layout_ok && gens_ok && full_ok && elapsed < Duration::from_secs(1),
        format!(
            "layout={layout_ok} generators={gens_ok} ({} listed) full-family span agrees={full_ok} on {} pieces; build {:.0} ms",
            restricted.len(),
            cmp.len(),
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for _ in 0..25 {
        let n = rng.gen_range(1..=4);
        let r = rng.gen_range(1..=3);
        let ideals: Vec<Vec<usize>> = (0..r)
            .map(|_| {
                let mask = rng.gen_range(1..(1u32 << n));
                (0..n).filter(|i| mask >> i & 1 == 1).collect()
            })
            .collect();
        let a: Vec<u32> = (0..r).map(|_| rng.gen_range(1..=2)).collect();
        let pres = sweep_presentation(n, &ideals, &a);
        for family in [Family::Restricted, Family::FullIbin] {
            for g in pres.defining_generators(family, None).unwrap() {
                checked += 1;
                if !pres.phi_apply(&g).unwrap().is_zero() {
                    bad.push(format!("{ideals:?} {a:?}: {g}"));
                }
            }
        }
    }
    let json = r#"{"mode":"concrete","coefficients":"ZZ","n":6,"s":["2","3","5","x","y","z"],
        "x_vars":["x","y","z"],"ideals":[[1,4,5],[2,4,6],[3,5,6]],"a":[1,1,1],"assume_weak_regular":true}"#;
    let spec: ReesSpec<BigInt> = ReesSpec::from_json(json).unwrap();
    let pres = build_presentation(&spec, IndexingMode::Primary).unwrap();
    let mut intro = 0usize;
    for family in [Family::Restricted, Family::FullIbin] {
        for g in pres.defining_generators(family, None).unwrap() {
            intro += 1;
            if !pres.phi_apply(&g).unwrap().is_zero() {
                bad.push(format!("intro: {g}"));
            }
        }
    }
    let elapsed = t.elapsed();
    outcome(
        bad.is_empty() && intro > 0 && elapsed < Duration::from_secs(30),
        format!(
            "{checked} generators over 25 random specs, {intro} over the integer spec, {} nonvanishing; {:.1} s",
            bad.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let suite = sweep_suite();
    let mut pieces = 0;
    let mut failures = Vec::new();
    for (n, ideals, a) in &suite {
        let pres = sweep_presentation(*n, ideals, a);
        let full = pres.defining_generators(Family::FullIbin, None).unwrap();
        let degrees = multidegrees(&pres, &SWEEP_CAPS);
        let report = span_compare(&full, &pres, &degrees, &SWEEP_CAPS).unwrap();
        pieces += report.pieces.len();
        if !report.equal {
            failures.push(format!("n={n} ideals={ideals:?} a={a:?}"));
        }
    }
    let elapsed = t.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(300),
        format!(
            "{} specs, {pieces} pieces, {} unequal{}; {:.1} s",
            suite.len(),
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let mut orders_checked = 0;
    let mut failures = Vec::new();
    for rows in 1..=3 {
        for cols in 1..=4 {
            let (u, b) = generic_s_bar_a(rows, cols).unwrap();
            let orders = default_order_suite(&u, SEED, 5);
            let rep = universal_gb_check::<Q>(&b, &u, &orders, ReductionStrategy::FirstMatch).unwrap();
            orders_checked += rep.reports.len();
            if !rep.passed() {
                failures.push(format!("{rows}x{cols}"));
            }
        }
    }
    let elapsed = t.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(120),
        format!(
            "12 shapes up to 3x4, {orders_checked} order checks, failing shapes {failures:?}; {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=6usize {
        for a in 1..=5u32 {
            let all = enumerate_T(a, n, false).unwrap().len() as u64;
            let primed = enumerate_T(a, n, true).unwrap().len() as u64;
            let (n64, a64) = (n as u64, u64::from(a));
            if all != binomial(a64 + n64 - 1, n64 - 1) || primed != binomial(a64 + n64 - 2, n64 - 1) {
                bad.push((n, a));
            }
        }
    }
    outcome(bad.is_empty(), format!("30 (n, a) pairs, mismatches {bad:?}"))
}

fn criterion_6() -> Outcome {
    let full3 = QuasiMatrix::full(vec![vec!['a', 'b', 'c'], vec!['d', 'e', 'f'], vec!['g', 'h', 'i']]).unwrap();
    let threes = binary_subquasi_enumerate(&full3, 3).unwrap().filter(|b| b.size() == 3).count();
    let two_block = QuasiMatrix::from_rows(vec![
        vec![Some('a'), Some('b'), None, None],
        vec![Some('c'), Some('d'), None, None],
        vec![None, None, Some('e'), Some('f')],
        vec![None, None, Some('g'), Some('h')],
    ])
    .unwrap();
    let got: BTreeSet<Binomial<char>> = quasi_determinants(&BinaryQuasiMatrix::validate(&two_block).unwrap())
        .into_iter()
        .map(|b| b.normalized())
        .collect();
    let sym = |p: &str, m: &str| Binomial::new(p.chars().collect(), m.chars().collect()).normalized();
    let expected: BTreeSet<_> = [sym("adeh", "bcgf"), sym("adgf", "bceh")].into_iter().collect();
    let two_block_ok = got == expected;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut cases = 0;
    let mut bad = Vec::new();
    for size in 2..=8 {
        for _ in 0..40 {
            let span = rng.gen_range(size..=8);
            let (q, c) = random_binary(&mut rng, size, span);
            let b = BinaryQuasiMatrix::validate(&q).unwrap();
            let ours: BTreeSet<_> = quasi_determinants(&b).into_iter().map(|x| x.normalized()).collect();
            let brute = brute_force_quasi_determinants(&b);
            cases += 1;
            if b.cycles().len() != c || ours.len() != 1 << (c - 1) || ours != brute {
                bad.push(format!("size {size}, {c} cycles"));
            }
        }
    }
    outcome(
        threes == 6 && two_block_ok && bad.is_empty(),
        format!(
            "3x3 binary count {threes}, two-block example {two_block_ok}, {cases} random cases ({} mismatches)",
            bad.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0;
    let mut bad = Vec::new();
    while checked < 50 {
        let rows = rng.gen_range(2..=4);
        let cols = rng.gen_range(2..=4);
        let names: Vec<String> = (0..rows * cols).map(|k| format!("x{}_{}", k / cols + 1, k % cols + 1)).collect();
        let u = VarUniverse::builder().big_t_vars(names).build().unwrap();
        let a = QuasiMatrix::full(
            (0..rows)
                .map(|i| (0..cols).map(|j| u.big_t_vars()[i * cols + j]).collect())
                .collect(),
        )
        .unwrap();
        let binaries: Vec<_> = binary_subquasi_enumerate(&a, 4).unwrap().collect();
        let Some(b) = binaries.choose(&mut rng) else { continue };
        let minors = quasi_determinants_positioned(b);
        let delta = minors.choose(&mut rng).unwrap();
        let cert = rewrite_as_two_minors(delta, &a).unwrap();
        let target = delta.binomial(&a).unwrap().to_poly::<Q>(&u);
        let mut sum = Poly::zero(&u);
        let mut two_by_two = true;
        for (mult, minor) in cert.to_polys::<Q>(&a, &u) {
            sum = sum.checked_add(&mult.checked_mul(&minor).unwrap()).unwrap();
        }
        for term in &cert.terms {
            two_by_two &= term.minor.size() == 2 && term.minor.is_quasi_minor_of(&a);
        }
        checked += 1;
        if sum != target || !two_by_two || !cert.verify(&a) {
            bad.push(format!("{rows}x{cols} size {}", b.size()));
        }
    }
    outcome(bad.is_empty(), format!("{checked} quasi-minors expanded, {} mismatches {bad:?}", bad.len()))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut not_complex = 0;
    for _ in 0..100 {
        let m = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=4);
        let gens: Vec<_> = (0..m).map(|_| random_smonomial(&mut rng, n, 3)).collect();
        if !taylor_complex(&gens).unwrap().is_complex() {
            not_complex += 1;
        }
    }
    let caps = OracleCaps::default();
    let mut syz_lists = 0;
    let mut pieces = 0;
    let mut syz_bad = 0;
    for _ in 0..40 {
        let m = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=3);
        let gens: Vec<_> = (0..m).map(|_| random_smonomial(&mut rng, n, 2)).collect();
        let rep = monomial_syzygy_kernel(&gens, 8, &caps).unwrap();
        syz_lists += 1;
        pieces += rep.pieces.len();
        if !rep.equal {
            syz_bad += 1;
        }
    }
    outcome(
        not_complex == 0 && syz_bad == 0,
        format!(
            "d∘d=0 failed on {not_complex}/100 lists; syzygy kernel unequal on {syz_bad}/{syz_lists} lists ({pieces} pieces)"
        ),
    )
}

fn criterion_9() -> Outcome {
    let suite = sweep_suite();
    let mut failures = Vec::new();
    let mut standard_failures = 0;
    for (n, ideals, a) in &suite {
        let pres = sweep_presentation(*n, ideals, a);
        let gens = pres.defining_generators(Family::Restricted, None).unwrap();
        for kind in [OrderKind::Lex, OrderKind::GrevLex] {
            let rep = squarefree_normality_report(&pres, &gens, &pres.pure_first_order(kind)).unwrap();
            if rep.verdict != NormalityVerdict::NormalCm {
                failures.push(format!("{kind:?} n={n} {ideals:?} {a:?}"));
            }
            let std_order = mrees_core::MonomialOrder::standard(kind, &pres.universe);
            if squarefree_normality_report(&pres, &gens, &std_order).unwrap().verdict != NormalityVerdict::NormalCm {
                standard_failures += 1;
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} specs x {{LEX, GREVLEX}} with pure powers ranked first: {} not squarefree{}; informational: standard ranking non-squarefree in {standard_failures} cases",
            suite.len(),
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default(),
        ),
    )
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let suite = sweep_suite();
    let mut pieces = 0;
    let mut failures = Vec::new();
    for (n, ideals, a) in &suite {
        let pres = sweep_presentation(*n, ideals, a);
        let restricted = pres.defining_generators(Family::Restricted, None).unwrap();
        let full = pres.defining_generators(Family::FullIbin, None).unwrap();
        let degrees = multidegrees(&pres, &SWEEP_CAPS);
        let cmp = compare_generated(&restricted, &full, &pres, &degrees, &SWEEP_CAPS).unwrap();
        pieces += cmp.len();
        if !cmp.iter().all(|c| c.equal()) {
            failures.push(format!("n={n} {ideals:?} {a:?}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} specs, {pieces} pieces, {} unequal{}; {:.1} s",
            suite.len(),
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default(),
            t.elapsed().as_secs_f64()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked example layout and generators", criterion_1),
        ("generators vanish under the presentation map", criterion_2),
        ("generated ideal equals the kernel at desk scale", criterion_3),
        ("universal Groebner property of (s | A)", criterion_4),
        ("index tuple counting identities", criterion_5),
        ("quasi-minor combinatorics", criterion_6),
        ("binary quasi-minors rewrite into 2x2 minors", criterion_7),
        ("Taylor complex and monomial syzygies", criterion_8),
        ("squarefree leading terms", criterion_9),
        ("restricted and full families agree", criterion_10),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if filter.as_ref().is_some_and(|f| f.parse::<usize>().ok() != Some(id)) {
            continue;
        }
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let status = if result.ok { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status}  {name}: {}", result.detail);
        failed += usize::from(!result.ok);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
