//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria listed in `KNOWN_RED` are expected to fail; their analysis lives
//! in the decisions ledger. The process exits non-zero on any unexpected
//! failure, and also when a known-red criterion starts passing.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cdforge::cdnum::{basis_product_oracle, conjugate, quadratic_witness};
use cdforge::diractest::{build_f, laplace_check, plane_pair_function, verify_hyperholomorphic, GeneratedF, Kind};
use cdforge::isomap::{normalize_signature, pullback_check, scaling_map};
use cdforge::ratexpr::parse;
use cdforge::rational::ratio;
use cdforge::twistlab::automaton::verify_against_oracle;
use cdforge::twistlab::chains::{admissible_chains, admissible_pairs, chain_factors, chain_product};
use cdforge::twistlab::render::{render_pretty, render_sign_grid, GammaMode};
use cdforge::twistlab::{
    chain_sign, chain_sign_oracle, derive_twist_automaton, pair_table, pair_table_oracle, shuffle, twist_sign,
    xor_index, SignTable,
};
use cdforge::{AlgebraSignature, Element};

const KNOWN_RED: &[u32] = &[5];

const SAMPLE_VS: [&str; 5] = ["x", "x*y", "x^2 - y", "1/(x - y)", "(x*y + 1)/(x^2 + 1)"];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(0x5eed);
    r.set_stream(stream);
    r
}

fn small_rational(r: &mut impl Rng, nonzero: bool) -> BigRational {
    loop {
        let n = r.random_range(-9..=9);
        if n != 0 || !nonzero {
            return ratio(n, r.random_range(1..=6));
        }
    }
}

fn random_signature(r: &mut impl Rng, t: usize) -> Arc<AlgebraSignature> {
    Arc::new(AlgebraSignature::new((0..t).map(|_| small_rational(r, true)).collect()).unwrap())
}

fn random_element(r: &mut impl Rng, sig: &Arc<AlgebraSignature>) -> Element {
    let c = (0..sig.dim()).map(|_| small_rational(r, false)).collect();
    Element::new(sig.clone(), c).unwrap()
}

fn sedenion_spot_check() -> Outcome {
    let aut = derive_twist_automaton(4).map_err(|e| e.to_string())?;
    let sig = AlgebraSignature::uniform(4, -1);
    let start = Instant::now();
    let twist = (twist_sign(7, 13, 4, &aut), xor_index(7, 13));
    let oracle = basis_product_oracle(7, 13, &sig).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    check(
        twist == (-1, 10) && (oracle.sign(), oracle.index) == (-1, 10) && took < Duration::from_millis(1),
        format!("twist {}e{}, oracle {oracle}, {:.3} ms < 1 ms", sign_char(twist.0), twist.1, ms(took)),
    )
}

fn sign_char(s: i8) -> char {
    if s < 0 {
        '-'
    } else {
        '+'
    }
}

fn quaternion_tables() -> Outcome {
    let generalized = render_pretty(&GammaMode::parse("g1,g2").unwrap()).map_err(|e| e.to_string())?;
    let division = render_pretty(&GammaMode::parse("-1,-1").unwrap()).map_err(|e| e.to_string())?;
    let grid = render_sign_grid(2).map_err(|e| e.to_string())?;
    let sig = AlgebraSignature::uniform(2, -1);
    let rows: Vec<Vec<i8>> = (0..4).map(|p| (0..4).map(|q| sig.basis_product(p, q).sign()).collect()).collect();
    let expected_rows = [[1, 1, 1, 1], [1, -1, 1, -1], [1, -1, -1, 1], [1, 1, -1, -1]];
    let mut bad = Vec::new();
    for (name, got, want) in [
        ("generalized", generalized.as_str(), include_str!("golden/generalized_quaternion.txt")),
        ("division", division.as_str(), include_str!("golden/division_quaternion.txt")),
        ("twist", grid.as_str(), include_str!("golden/quaternion_twist.txt")),
    ] {
        if got != want {
            bad.push(name);
        }
    }
    if rows != expected_rows {
        bad.push("sign rows");
    }
    check(bad.is_empty(), if bad.is_empty() { "3 tables byte-identical, grid rows match".into() } else { format!("mismatch: {bad:?}") })
}

fn exhaustive_twist() -> Outcome {
    let t = 8;
    let aut = derive_twist_automaton(t).map_err(|e| e.to_string())?;
    let sig = AlgebraSignature::uniform(t, -1);
    let start = Instant::now();
    let mut bad = 0usize;
    for p in 0..sig.dim() {
        for q in 0..sig.dim() {
            let o = basis_product_oracle(p, q, &sig).map_err(|e| e.to_string())?;
            if (twist_sign(p, q, t, &aut), xor_index(p, q)) != (o.sign(), o.index) {
                bad += 1;
            }
        }
    }
    let took = start.elapsed();
    let n = sig.dim() * sig.dim();
    check(bad == 0 && took < Duration::from_secs(5), format!("{n} pairs, {bad} mismatches, {:.0} ms < 5000 ms", ms(took)))
}

fn automaton_fidelity() -> Outcome {
    let aut = derive_twist_automaton(8).map_err(|e| e.to_string())?;
    let reference = [
        ("A0", 0b01, "A"),
        ("A", 0b10, "C"),
        ("A", 0b11, "-C"),
        ("A", 0b00, "A"),
        ("-C", 0b10, "C"),
        ("C", 0b10, "-C"),
        ("C", 0b11, "-C"),
        ("-C", 0b11, "C"),
        ("C", 0b00, "C"),
        ("C", 0b01, "-C"),
    ];
    let mut wrong = Vec::new();
    for (from, pair, to) in reference {
        let state = aut.state(from).ok_or(format!("no state {from}"))?;
        let got = aut.state_name(aut.step(state, pair));
        if got != to {
            wrong.push(format!("{from} -{pair:02b}-> {got} (expected {to})"));
        }
    }
    let walk = aut.trace(&shuffle(7, 13, 4));
    if walk != "A0 -01-> A -11-> -C -10-> C -11-> -C" {
        wrong.push(format!("walk {walk}"));
    }
    if let Err(e) = verify_against_oracle(&aut, 8) {
        wrong.push(e.to_string());
    }
    check(wrong.is_empty(), if wrong.is_empty() { format!("10/10 transitions, {} letters", aut.letter_count()) } else { wrong.join("; ") })
}

fn closed_forms() -> Outcome {
    let start = Instant::now();
    let (mut total, mut bad) = (0usize, 0usize);
    let mut first = None;
    for t in 4..=8 {
        for (r, k, i) in admissible_chains(t) {
            for with_e1 in [false, true] {
                total += 1;
                let closed = chain_sign(r, k, i, with_e1, t).map_err(|e| e.to_string())?;
                let truth = chain_sign_oracle(r, k, i, with_e1, t).map_err(|e| e.to_string())?;
                if closed != truth {
                    bad += 1;
                    first.get_or_insert(format!("(r,k,i)=({r},{k},{i}) e1={with_e1} t={t}: closed form {closed:?}, oracle {truth:?}"));
                }
            }
        }
    }
    let mut table_bad = 0usize;
    for t in 3..=8 {
        for (r, k, i) in admissible_pairs(t) {
            total += 1;
            if pair_table(r, k, i, t).map_err(|e| e.to_string())? != pair_table_oracle(r, k, i, t).map_err(|e| e.to_string())? {
                table_bad += 1;
            }
        }
    }
    let took = start.elapsed();
    let detail = format!(
        "{total} cases, {bad} chain mismatches, {table_bad} table mismatches, {:.0} ms{}",
        ms(took),
        first.map(|f| format!("; first {f}")).unwrap_or_default()
    );
    check(bad == 0 && table_bad == 0 && took < Duration::from_secs(10), detail)
}

fn gamma_independence() -> Outcome {
    let mut r = rng(6);
    let mut checked = 0;
    for n in 0..20 {
        let t = 4 + n % 3;
        let sig = random_signature(&mut r, t);
        for (a, k, i) in admissible_chains(t) {
            for with_e1 in [false, true] {
                let bp = chain_product(&sig, &chain_factors(a, k, i, with_e1)).map_err(|e| e.to_string())?;
                if bp.sign() == 0 || bp.coefficient != ratio(bp.sign().into(), 1) {
                    return Err(format!("{sig}: chain ({a},{k},{i}) gives {bp}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("20 signatures, {checked} chains, all coefficients ±1"))
}

fn algebra_laws() -> Outcome {
    let mut r = rng(7);
    let mut fails = [0usize; 3];
    for n in 0..200 {
        let t = 1 + n % 6;
        let sig = random_signature(&mut r, t);
        let (x, y) = (random_element(&mut r, &sig), random_element(&mut r, &sig));
        let xy = x.mul(&y).unwrap();
        if x.mul(&y.mul(&x).unwrap()).unwrap() != xy.mul(&x).unwrap() {
            fails[0] += 1;
        }
        if !quadratic_witness(&x).is_zero() {
            fails[1] += 1;
        }
        if conjugate(&xy) != conjugate(&y).mul(&conjugate(&x)).unwrap() {
            fails[2] += 1;
        }
    }
    check(fails == [0; 3], format!("200 cases each, failures flexible/quadratic/conjugation = {fails:?}"))
}

fn isomorphism() -> Outcome {
    let mut r = rng(8);
    let mut bad = 0;
    for n in 0..10 {
        let target = random_signature(&mut r, 1 + n % 4);
        let x: Vec<BigRational> = (0..target.t()).map(|_| small_rational(&mut r, true)).collect();
        let map = scaling_map(&target, &x).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let (a, b) = (random_element(&mut r, &map.source), random_element(&mut r, &map.source));
            let lhs = map.apply(&a.mul(&b).unwrap()).unwrap();
            let rhs = map.apply(&a).unwrap().mul(&map.apply(&b).unwrap()).unwrap();
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    check(bad == 0, format!("10 signatures x 100 pairs, {bad} failures"))
}

fn generated_functions() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut resamples = 0;
    for t in 1..=5 {
        for v in SAMPLE_VS {
            let f = build_f(t, &parse(v).unwrap());
            let rep = verify_hyperholomorphic(&f, 20, t as u64).map_err(|e| format!("t={t} v={v}: {e}"))?;
            resamples += rep.resamples;
            if !rep.all_zero || rep.points.len() < 20 {
                notes.push(format!("t={t} v={v}"));
            }
        }
    }
    let took = start.elapsed();
    check(
        notes.is_empty() && took < Duration::from_secs(60),
        format!("25 functions x 20 points exact zero, {resamples} resamples, {:.1} s < 60 s{}", took.as_secs_f64(), if notes.is_empty() { String::new() } else { format!("; nonzero: {}", notes.join(", ")) }),
    )
}

fn pullback() -> Outcome {
    let v = parse("(x*y + 1)/(x^2 + 1)").unwrap();
    let mut worst = 0.0f64;
    let mut r = rng(10);
    for gammas in [&[4i64, 9][..], &[-2, 3, -5]] {
        let sig = AlgebraSignature::from_ints(gammas).unwrap();
        let (s, _) = normalize_signature(&sig);
        let pairs: Vec<(usize, usize)> = (0..sig.dim() / 2).map(|k| (2 * k, 2 * k + 1)).collect();
        let phi = plane_pair_function(Arc::new(s), Kind::Hyper, &v, &pairs).map_err(|e| e.to_string())?;
        let points: Vec<Vec<f64>> = (0..20).map(|_| (0..sig.dim()).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
        let rep = pullback_check(&phi, &sig, &points, 1e-5).map_err(|e| e.to_string())?;
        worst = worst.max(rep.max_residual);
    }
    check(worst < 1e-8, format!("(4,9) and (-2,3,-5), 20 points each, max residual {worst:.2e} < 1e-8"))
}

fn laplace() -> Outcome {
    let mut worst = Vec::new();
    let mut r = rng(11);
    for v in SAMPLE_VS {
        // the e₂/e₃ part of F₂ is holomorphic in (x₂, x₃)
        let mut f = build_f(2, &parse(v).unwrap());
        f.terms.retain(|term| term.alpha_index != 0);
        let phi = f.to_hyper();
        let mut w = 0.0f64;
        for _ in 0..10 {
            // coordinates of size 0.4..0.7 keep ρ at least 0.5 from the poles at 0 and ±e₁
            let p: Vec<f64> = (0..4).map(|_| r.random_range(0.4..0.7) * if r.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
            w = w.max(laplace_check(&phi, &p, 1e-4).map_err(|e| format!("v={v}: {e}"))?);
        }
        worst.push(w);
    }
    let max = worst.iter().copied().fold(0.0, f64::max);
    let each: Vec<String> = worst.iter().map(|w| format!("{w:.1e}")).collect();
    check(max < 1e-6, format!("5 functions x 10 points, max residual {max:.2e} < 1e-6 (per v: {})", each.join(", ")))
}

fn mutation_sensitivity() -> Outcome {
    let f: GeneratedF = build_f(4, &parse("(x*y + 1)/(x^2 + 1)").unwrap());
    let slots = f.sign_slots();
    let mut missed = Vec::new();
    for m in 0..50 {
        let g = f.mutate(m % slots);
        let rep = verify_hyperholomorphic(&g, 1, 1000 + m as u64).map_err(|e| e.to_string())?;
        if rep.all_zero {
            missed.push(m);
        }
    }
    check(missed.is_empty(), format!("50 mutations over {slots} sign slots, {} undetected {missed:?}", missed.len()))
}

fn engineering() -> Outcome {
    let start = Instant::now();
    // the shared table that `multiply` reads, built here on first use
    let table = SignTable::cached(12).ok_or("t = 12 is not cached")?;
    let build = start.elapsed();
    std::hint::black_box(&table);
    let sig = Arc::new(AlgebraSignature::uniform(12, -1));
    let mut r = rng(13);
    let a = random_element(&mut r, &sig);
    let b = random_element(&mut r, &sig);
    let start = Instant::now();
    let c = a.mul(&b).map_err(|e| e.to_string())?;
    let product = start.elapsed();
    std::hint::black_box(&c);
    check(
        build < Duration::from_secs(10) && product < Duration::from_millis(500),
        format!("t=12 table {:.0} ms < 10000 ms, dense product {:.0} ms < 500 ms", ms(build), ms(product)),
    )
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (1, "sedenion spot check", sedenion_spot_check),
        (2, "quaternion tables", quaternion_tables),
        (3, "twist vs oracle, t=8", exhaustive_twist),
        (4, "automaton transitions", automaton_fidelity),
        (5, "chain closed forms", closed_forms),
        (6, "gamma independence", gamma_independence),
        (7, "algebra laws", algebra_laws),
        (8, "scaling isomorphism", isomorphism),
        (9, "generated functions, exact Dirac", generated_functions),
        (10, "pullback residual", pullback),
        (11, "Laplace-type identity", laplace),
        (12, "mutation sensitivity", mutation_sensitivity),
        (13, "table and product timing", engineering),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let red = KNOWN_RED.contains(&id);
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        let note = if red { " [known red, see ledger]" } else { "" };
        println!("{tag} {id:>2} {name}: {detail} ({:.1} ms){note}", ms(took));
        if outcome.is_ok() == red {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: as expected (known red: {KNOWN_RED:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for {unexpected:?}");
        ExitCode::FAILURE
    }
}
