//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use topical::boolfn::BitVec;
use topical::checks::{Checker, Condition, Engine, Verdict, Witness};
use topical::expr::{parse_map, MapClass, MapExpr};
use topical::gen::{random_positive_matrix, MapGen};
use topical::sat::{model_check, parse_dimacs, solve, to_dimacs, CnfFormula, Lit, SolveOutcome, SolverConfig};
use topical::signature::{
    extended_upper_oracle, local_signatures, lower_signature, numeric_lower_oracle, numeric_upper_oracle,
    upper_signature, DEFAULT_TIE_TOL,
};
use topical::spectral::{
    condition_m, condition_n, hilbert_distance, mconvexity_spot_check, power_iteration_observed, Certification,
    MConvexity, PowerOptions,
};

const E1: &str = "(entries (+ (x 2) (x 3)) (+ (x 1) (x 3)) (* 0.5 (avg -1 (0.5 0.5 0))))";
const E2: &str = "(entries (+ (x 1) (avg 0 (0.5 0.5))) (+ (x 2) (avg 0 (0.5 0.5))))";
const E3: &str = "(entries (x 2) (x 2))";
const E4: &str = "(entries (x 1) (avg inf (0.5 0.5)))";

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: summary }
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        Outcome {
            pass: false,
            detail: format!("{summary}; {} failure(s): {}", failures.len(), shown.join(" | ")),
        }
    }
}

// 1 ------------------------------------------------------------------------

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let expect: [(&str, &str, &[(Condition, bool)]); 3] = [
        (
            "E1",
            E1,
            &[(Condition::Facial, true), (Condition::Graphical, false), (Condition::Indecomposable, true)],
        ),
        (
            "E2",
            E2,
            &[
                (Condition::Graphical, true),
                (Condition::Indecomposable, true),
                (Condition::Partial, false),
                (Condition::Facial, false),
            ],
        ),
        (
            "E3",
            E3,
            &[(Condition::Partial, true), (Condition::Facial, false), (Condition::Imperturbable, true)],
        ),
    ];
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, src, conds) in expect {
        let c = Checker::new(&parse_map(src).expect("example parses"));
        for &(cond, want) in conds {
            checked += 1;
            let want = if want { Verdict::Holds } else { Verdict::Fails };
            match c.check(cond, Engine::Auto) {
                Ok(r) if r.verdict == want => {}
                Ok(r) => failures.push(format!("{name} {cond}: got {}", r.verdict)),
                Err(e) => failures.push(format!("{name} {cond}: {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("runtime {elapsed:?} >= 1 s"));
    }
    outcome(&failures, format!("{checked} verdicts in {elapsed:.2?}"))
}

// 2 and 4 ------------------------------------------------------------------

struct Instance {
    class: MapClass,
    /// Verdicts in `Condition::ALL` order, from the SAT engine.
    sat: [Verdict; 5],
    fastpath: Option<Verdict>,
}

fn pool_map(n: usize, k: usize, rng: &mut StdRng) -> MapExpr {
    if k % 2 == 0 {
        MapGen::broad(n).sample(rng)
    } else {
        MapGen::nonnegative(n).sample(rng)
    }
}

fn criterion_2(pool: &mut Vec<Instance>) -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC2);
    let mut failures = Vec::new();
    let mut counts = [[0usize; 2]; 5];
    for n in 2..=10 {
        for k in 0..300 {
            let f = pool_map(n, k, &mut rng);
            let c = Checker::new(&f);
            let mut sat = [Verdict::Unknown; 5];
            for (idx, cond) in Condition::ALL.into_iter().enumerate() {
                let a = c.check(cond, Engine::Sat);
                let b = c.check(cond, Engine::Brute);
                match (a, b) {
                    (Ok(a), Ok(b)) if a.verdict == b.verdict && a.verdict != Verdict::Unknown => {
                        sat[idx] = a.verdict;
                        counts[idx][usize::from(a.verdict == Verdict::Holds)] += 1;
                    }
                    (a, b) => failures.push(format!(
                        "n={n} #{k} {cond}: sat {:?} brute {:?} for {f}",
                        a.map(|r| r.verdict),
                        b.map(|r| r.verdict)
                    )),
                }
            }
            let fastpath = (c.class == MapClass::Plus)
                .then(|| c.check(Condition::Imperturbable, Engine::Fastpath).map(|r| r.verdict).unwrap_or(Verdict::Unknown));
            pool.push(Instance {
                class: c.class,
                sat,
                fastpath,
            });
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(120) {
        failures.push(format!("runtime {elapsed:?} >= 120 s"));
    }
    let mix: Vec<String> = Condition::ALL
        .iter()
        .zip(counts)
        .map(|(c, [fails, holds])| format!("{c} {holds}/{}", holds + fails))
        .collect();
    outcome(
        &failures,
        format!("{} maps x 5 conditions in {elapsed:.2?}; holds: {}", pool.len(), mix.join(", ")),
    )
}

fn criterion_4(pool: &[Instance]) -> Outcome {
    let idx = |c: Condition| Condition::ALL.iter().position(|&d| d == c).expect("listed");
    let holds = |i: &Instance, c: Condition| i.sat[idx(c)] == Verdict::Holds;
    let mut failures = Vec::new();
    let mut plus = 0;
    for (k, i) in pool.iter().enumerate() {
        if holds(i, Condition::Facial) && !holds(i, Condition::Indecomposable) {
            failures.push(format!("#{k}: facial without indecomposable"));
        }
        if holds(i, Condition::Graphical) && !holds(i, Condition::Indecomposable) {
            failures.push(format!("#{k}: graphical without indecomposable"));
        }
        if holds(i, Condition::Partial) && !holds(i, Condition::Imperturbable) {
            failures.push(format!("#{k}: partial without imperturbable"));
        }
        if i.class == MapClass::Plus {
            plus += 1;
            if holds(i, Condition::Indecomposable) != holds(i, Condition::Graphical) {
                failures.push(format!("#{k}: indecomposable and graphical differ"));
            }
            if i.fastpath != Some(i.sat[idx(Condition::Imperturbable)]) {
                failures.push(format!("#{k}: fastpath {:?} vs sat", i.fastpath));
            }
        }
    }
    outcome(&failures, format!("{} instances, {plus} with nonnegative exponents", pool.len()))
}

// 3 ------------------------------------------------------------------------

fn criterion_3() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xC3);
    let mut failures = Vec::new();
    let mut subsets = 0;
    for k in 0..100 {
        let n = 2 + k % 5;
        let f = MapGen::log_resolvable(n).sample(&mut rng);
        let (up, lo) = (upper_signature(&f), lower_signature(&f));
        for m in 0..1u64 << n {
            subsets += 1;
            let j = BitVec::from_mask(m, n);
            let u_sym = up.eval(&j).expect("dimension");
            let l_sym = lo.eval(&j).expect("dimension");
            if u_sym != numeric_upper_oracle(&f, &j, 40.0, 20.0) {
                failures.push(format!("upper #{k} J={j}: {f}"));
            }
            if Ok(l_sym) != numeric_lower_oracle(&f, &j) {
                failures.push(format!("lower #{k} J={j}: {f}"));
            }
        }
    }
    // The same comparison against exact extended-real evaluation, on the
    // unrestricted generator including geometric means.
    let mut exact = 0;
    for k in 0..100 {
        let n = 2 + k % 5;
        let f = MapGen::broad(n).sample(&mut rng);
        let (up, lo) = (upper_signature(&f), lower_signature(&f));
        for m in 0..1u64 << n {
            exact += 1;
            let j = BitVec::from_mask(m, n);
            if Ok(up.eval(&j).expect("dimension")) != extended_upper_oracle(&f, &j) {
                failures.push(format!("extended upper #{k} J={j}: {f}"));
            }
            if Ok(lo.eval(&j).expect("dimension")) != numeric_lower_oracle(&f, &j) {
                failures.push(format!("lower (broad) #{k} J={j}: {f}"));
            }
        }
    }
    outcome(
        &failures,
        format!("{subsets} subsets against T=40/threshold 20, {exact} against exact extended evaluation"),
    )
}

// 5 and 6 ------------------------------------------------------------------

fn classical_power_method(a: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let n = a.len();
    let mut v = vec![1.0; n];
    let mut lambda = 0.0;
    for _ in 0..200 {
        let w: Vec<f64> = a.iter().map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        lambda = w.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>() / v.iter().map(|x| x * x).sum::<f64>();
        v = w.iter().map(|x| x / norm).collect();
    }
    (v, lambda)
}

fn criterion_5(eigvecs: &mut Vec<(MapExpr, Vec<f64>)>) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xC5);
    let mut failures = Vec::new();
    let (mut worst_val, mut worst_vec) = (0.0f64, 0.0f64);
    for k in 0..50 {
        let n = rng.random_range(2..=8);
        let a = random_positive_matrix(n, &mut rng);
        let f = parse_map(&MapExpr::linear(&a).to_string()).expect("matrix text parses");
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..10.0)).collect();
        let mut brackets = Vec::new();
        let r = match power_iteration_observed(&f, &x0, &PowerOptions::default(), |s| brackets.push((s.alpha, s.beta))) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("#{k}: {e}"));
                continue;
            }
        };
        if !r.converged {
            failures.push(format!("#{k}: did not converge"));
            continue;
        }
        let (v, lambda) = classical_power_method(&a);
        let rel = (r.eigenvalue - lambda).abs() / lambda;
        let dist = hilbert_distance(&r.vector, &v).unwrap_or(f64::INFINITY);
        worst_val = worst_val.max(rel);
        worst_vec = worst_vec.max(dist);
        if rel > 1e-8 || dist > 1e-8 {
            failures.push(format!("#{k}: eigenvalue error {rel:e}, Hilbert distance {dist:e}"));
        }
        let slack = 1e-10 * r.eigenvalue;
        if let Some(t) = brackets.iter().position(|&(lo, hi)| lo > r.eigenvalue + slack || hi < r.eigenvalue - slack) {
            failures.push(format!("#{k}: bracket at iterate {t} misses the eigenvalue"));
        }
        eigvecs.push((f, r.vector));
    }
    outcome(
        &failures,
        format!("50 matrices; max eigenvalue rel. error {worst_val:.1e}, max Hilbert distance {worst_vec:.1e}"),
    )
}

fn verify_n_witness(f: &MapExpr, u: &[f64], w: &Option<Witness>) -> bool {
    let Some(Witness::Pair { i, j }) = w else { return false };
    let l = local_signatures(f, u, DEFAULT_TIE_TOL).expect("interior point");
    let (x, y) = (i.complement(), j.complement());
    let disjoint = i.iter().zip(j.iter()).all(|(a, b)| !(a && b));
    !i.is_zero()
        && !j.is_zero()
        && disjoint
        && l.lower.eval(&x).expect("dimension").le(&x)
        && l.upper.eval(&y).expect("dimension").le(&y)
}

fn criterion_6(eigvecs: &[(MapExpr, Vec<f64>)]) -> Outcome {
    let cfg = SolverConfig::default();
    let mut failures = Vec::new();
    for (k, (f, u)) in eigvecs.iter().enumerate() {
        match condition_n(f, u, Engine::Auto, DEFAULT_TIE_TOL, &cfg) {
            Ok(r) if r.verdict == Certification::Certified => {}
            other => failures.push(format!("matrix #{k}: {:?}", other.map(|r| r.verdict))),
        }
    }
    let e4 = parse_map(E4).expect("E4 parses");
    for u in [[1.0, 2.0], [1.0, 1.0]] {
        for engine in [Engine::Brute, Engine::Sat] {
            match condition_n(&e4, &u, engine, DEFAULT_TIE_TOL, &cfg) {
                Ok(r) if r.verdict == Certification::Refuted && verify_n_witness(&e4, &u, &r.witness) => {}
                other => failures.push(format!("E4 N at {u:?} ({engine}): {other:?}")),
            }
        }
    }
    let e2 = parse_map(E2).expect("E2 parses");
    for engine in [Engine::Brute, Engine::Sat] {
        match condition_m(&e2, &[1.0, 1.0], engine, DEFAULT_TIE_TOL, &cfg) {
            Ok(r) if r.verdict == Certification::Certified => {}
            other => failures.push(format!("E2 M ({engine}): {other:?}")),
        }
        match condition_m(&e4, &[1.0, 1.0], engine, DEFAULT_TIE_TOL, &cfg) {
            Ok(r) if r.verdict == Certification::Refuted => {
                let Some(Witness::Set(j)) = &r.witness else {
                    failures.push("E4 M: missing witness".into());
                    continue;
                };
                let l = local_signatures(&e4, &[1.0, 1.0], DEFAULT_TIE_TOL).expect("interior");
                if !(j.is_nontrivial() && l.upper.eval(j).expect("dimension").le(j)) {
                    failures.push(format!("E4 M witness {j} does not verify"));
                }
            }
            other => failures.push(format!("E4 M ({engine}): {other:?}")),
        }
    }
    outcome(
        &failures,
        format!("{} matrix eigenvectors certified, E4 refuted at two points, M checked on E2 and E4", eigvecs.len()),
    )
}

// 7 ------------------------------------------------------------------------

/// Clause as (positive mask, negative mask) over bit `v−1`.
fn exhaustive_sat(n: usize, clauses: &[(u32, u32)]) -> bool {
    (0..1u32 << n).any(|a| clauses.iter().all(|&(p, q)| a & p != 0 || !a & q != 0))
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xC7);
    let mut failures = Vec::new();
    let mut sat_count = 0;
    for k in 0..1000 {
        let n = rng.random_range(3..=20);
        let m = (4.26 * n as f64).round() as usize + rng.random_range(0..=4) - 2;
        let mut f = CnfFormula::new(n);
        let mut masks = Vec::new();
        for _ in 0..m {
            let mut vars = Vec::new();
            while vars.len() < 3 {
                let v = rng.random_range(1..=n);
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            let lits: Vec<Lit> = vars.iter().map(|&v| Lit::new(v, rng.random_bool(0.5))).collect();
            let (mut p, mut q) = (0u32, 0u32);
            for l in &lits {
                if l.is_positive() {
                    p |= 1 << (l.var() - 1);
                } else {
                    q |= 1 << (l.var() - 1);
                }
            }
            masks.push((p, q));
            f.add_clause(lits).expect("well-formed clause");
        }
        let truth = exhaustive_sat(n, &masks);
        match solve(&f) {
            SolveOutcome::Sat(a) => {
                sat_count += 1;
                if !truth {
                    failures.push(format!("#{k}: solver SAT, enumeration UNSAT"));
                }
                if model_check(&f, &a) != Ok(true) {
                    failures.push(format!("#{k}: model fails model_check"));
                }
            }
            SolveOutcome::Unsat if truth => failures.push(format!("#{k}: solver UNSAT, enumeration SAT")),
            SolveOutcome::Unsat => {}
            SolveOutcome::Unknown => failures.push(format!("#{k}: unknown")),
        }
        let text = to_dimacs(&f);
        match parse_dimacs(&text) {
            Ok(g) => {
                let mut a: Vec<Vec<Lit>> = f.clauses().to_vec();
                let mut b: Vec<Vec<Lit>> = g.clauses().to_vec();
                a.sort();
                b.sort();
                if a != b || to_dimacs(&g) != text {
                    failures.push(format!("#{k}: DIMACS round trip changed the formula"));
                }
            }
            Err(e) => failures.push(format!("#{k}: DIMACS parse failed: {e}")),
        }
    }
    outcome(&failures, format!("1000 instances, {sat_count} satisfiable"))
}

// 8 ------------------------------------------------------------------------

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xC8);
    let mut failures = Vec::new();
    for k in 0..100 {
        let n = 2 + k % 5;
        let f = MapGen::nonnegative(n).sample(&mut rng);
        match mconvexity_spot_check(&f, 100, 1e-10, &mut rng) {
            Ok(MConvexity::Pass) => {}
            Ok(MConvexity::Violation { entry, lhs, rhs, .. }) => {
                failures.push(format!("#{k} entry {}: {lhs} > {rhs} for {f}", entry + 1))
            }
            Err(e) => failures.push(format!("#{k}: {e}")),
        }
    }
    outcome(&failures, "100 maps x 100 samples".into())
}

fn main() -> ExitCode {
    let mut pool = Vec::new();
    let mut eigvecs = Vec::new();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("1 worked examples", criterion_1()));
    results.push(("2 sat/brute agreement", criterion_2(&mut pool)));
    results.push(("3 signature oracles", criterion_3()));
    results.push(("4 implications", criterion_4(&pool)));
    results.push(("5 power iteration", criterion_5(&mut eigvecs)));
    results.push(("6 uniqueness", criterion_6(&eigvecs)));
    results.push(("7 sat backend", criterion_7()));
    results.push(("8 m-convexity", criterion_8()));
    let mut all = true;
    for (name, o) in &results {
        all &= o.pass;
        println!("criterion {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
