//! Acceptance suite: one `criterion N: PASS|FAIL: detail` line per criterion.
//!
//! Criteria 1, 8 and 9 cannot hold as literally stated; each of them must
//! fail for exactly the reason recorded here, and any other failure (or an
//! attainable criterion failing) makes the run exit nonzero.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use lacunary::dto::{DigitsSummary, SolutionJson, SweepOut};
use lacunary::par;
use lacunary_core::classify::{builtin_rows, oracle_search, vandermonde_sum, verify_rho_solutions, OracleConfig, RhoCase};
use lacunary_core::coeffield::{rat, BigInt, Rational};
use lacunary_core::compgap::{ruzsa_bound_check, sigmapos_witness, KminConfig, RuzsaStatus};
use lacunary_core::digits::{family_instance, FAMILIES};
use lacunary_core::lattice::{indep_certificate, DEFAULT_TRIAL_BOUND};
use lacunary_core::parser::parse_expsum;
use lacunary_core::uhs::{uhs_verdict, ExpSum, UhsStatus};
use lacunary_core::{ExponentVector, GaussianRational, UniPoly};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
    /// For a criterion known to be unattainable: whether the failure is the
    /// documented one.
    expected_failure: Option<bool>,
}

impl Verdict {
    fn attainable(pass: bool, detail: String) -> Self {
        Verdict { pass, detail, expected_failure: None }
    }
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

fn gr(s: &str) -> GaussianRational {
    s.parse().unwrap()
}

fn within(t: Duration, limit: Duration) -> (bool, String) {
    (t <= limit, format!("{:.2}s (limit {}s)", t.as_secs_f64(), limit.as_secs()))
}

fn cli_json(args: &[&str]) -> (i32, String) {
    let out = lacunary::run(["lacunary", "--format", "json"].into_iter().chain(args.iter().copied()));
    (out.code, out.stdout)
}

/// The documented cells plus their copies in the extra-monomial tables.
const NAMED_TYPOS: [&str; 3] = ["T1.1:xi4", "T3.1:xi3", "E1a.1:xi4"];
/// Further misprints found by the symbolic check, with copies.
const EXTRA_TYPOS: [&str; 6] = ["T1.4:xi2", "T1.4:xi4", "T1.5:xi3", "E1a.4:xi2", "E1a.4:xi4", "E1a.5:xi3"];

fn criterion1() -> Verdict {
    let start = Instant::now();
    let (code, out) = cli_json(&["verify-tables"]);
    let (fast, time) = within(start.elapsed(), Duration::from_secs(1));
    let s: SweepOut = serde_json::from_str(&out).expect("sweep document");
    let mismatched: BTreeSet<String> = s.mismatches.iter().map(|m| format!("{}:xi{}", m.row, m.cell)).collect();
    let named: BTreeSet<String> = NAMED_TYPOS.iter().map(|s| s.to_string()).collect();
    let extra: Vec<&String> = mismatched.difference(&named).collect();
    let all_flagged = s.mismatches.iter().all(|m| m.suspected_typo);
    let pass = code == 0 && fast && s.shape_failures.is_empty() && mismatched == named && all_flagged;
    let detail = format!(
        "{} rows, {} instantiations, {} shape failures, named cells reported: {}; other mismatching cells: [{}]; {time}",
        s.rows,
        s.instantiations,
        s.shape_failures.len(),
        named.is_subset(&mismatched),
        extra.iter().map(|e| e.as_str()).collect::<Vec<_>>().join(", ")
    );
    // The rows print wrong coefficients in more cells than the two named ones.
    let documented: BTreeSet<String> = EXTRA_TYPOS.iter().map(|s| s.to_string()).collect();
    let expected = code == 0
        && fast
        && s.shape_failures.is_empty()
        && all_flagged
        && named.is_subset(&mismatched)
        && extra.iter().cloned().cloned().collect::<BTreeSet<_>>() == documented;
    Verdict { pass, detail, expected_failure: Some(expected) }
}

fn criterion2() -> Verdict {
    let start = Instant::now();
    let bad: Vec<(u32, u32)> =
        (2..=12).flat_map(|d| (2..=12).map(move |n| (d, n))).filter(|&(d, n)| !vandermonde_sum(d, n).is_zero()).collect();
    let (fast, time) = within(start.elapsed(), Duration::from_secs(1));
    Verdict::attainable(bad.is_empty() && fast, format!("121 sums, nonzero at {bad:?}; {time}"))
}

fn random_sparse(rng: &mut ChaCha8Rng) -> UniPoly {
    let extra = rng.gen_range(1..=5);
    let mut exps: Vec<i64> = (1..=20).collect();
    exps.shuffle(rng);
    let mut terms = vec![(0, GaussianRational::one())];
    for &e in &exps[..extra] {
        let c = loop {
            let re = rat(rng.gen_range(-9..=9), rng.gen_range(1..=6));
            let im = if rng.gen_bool(0.5) { rat(rng.gen_range(-9..=9), rng.gen_range(1..=6)) } else { Rational::zero() };
            let c = GaussianRational::new(re, im);
            if !c.is_zero() {
                break c;
            }
        };
        terms.push((e, c));
    }
    UniPoly::from_coeffs(terms)
}

fn criterion3() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut violations = Vec::new();
    let mut checks = 0;
    for _ in 0..1000 {
        let p = random_sparse(&mut rng);
        for d in 1..=6u32 {
            checks += 1;
            let t = p.pow(d).unwrap().term_count();
            if t < d as usize + 1 {
                violations.push(format!("({p})^{d} has {t} terms"));
            }
        }
    }
    let (fast, time) = within(start.elapsed(), Duration::from_secs(30));
    Verdict::attainable(
        violations.is_empty() && fast,
        format!("1000 polynomials, {checks} powers, {} violations {violations:?}; {time}", violations.len()),
    )
}

fn criterion4() -> Verdict {
    let grid: Vec<GaussianRational> = ["1", "-1", "1/2", "-1/2", "1/4", "-1/4"].iter().map(|s| gr(s)).collect();
    let rows = builtin_rows();
    let cfg2 = OracleConfig { d: 2, k: 5, max_deg: 4, grid: grid.clone() };
    let cfg5 = OracleConfig { d: 5, k: 5, max_deg: 4, grid };

    let start = Instant::now();
    let serial2 = oracle_search(&cfg2, &rows).unwrap();
    let serial5 = oracle_search(&cfg5, &rows).unwrap();
    let (serial_fast, serial_time) = within(start.elapsed(), Duration::from_secs(300));

    let start = Instant::now();
    let (par2, par5) = pool(8).install(|| (par::oracle_search(&cfg2, &rows).unwrap(), par::oracle_search(&cfg5, &rows).unwrap()));
    let (par_fast, par_time) = within(start.elapsed(), Duration::from_secs(60));

    let unique = serial2.iter().filter(|h| h.matches.len() == 1).count();
    let mut per_row: Vec<String> = serial2.iter().flat_map(|h| h.matches.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    per_row.sort();
    let pass = !serial2.is_empty()
        && unique == serial2.len()
        && serial5.is_empty()
        && par2 == serial2
        && par5.is_empty()
        && serial_fast
        && par_fast;
    Verdict::attainable(
        pass,
        format!(
            "d=2: {} hits, {unique} match exactly one row (rows {}); d=5: {} hits; serial {serial_time}, 8 threads {par_time}",
            serial2.len(),
            per_row.join(" "),
            serial5.len()
        ),
    )
}

fn criterion5() -> Verdict {
    let start = Instant::now();
    let values = ["1", "4", "9/4", "-1", "-4", "8", "-27", "1/8", "2i", "-2i", "1/4"];
    let mut cases = Vec::new();
    for a1 in values {
        for a2 in values {
            let (a1, a2) = (gr(a1), gr(a2));
            for (m1, m2) in [(2, 1), (3, 1), (3, 2)] {
                for r in [1, 2] {
                    cases.push(RhoCase::Rho1Sol1 { a1: a1.clone(), a2: a2.clone(), m1, m2, r });
                }
            }
            for (l1, l2) in [(2, 2), (4, 2), (2, 6)] {
                cases.push(RhoCase::Rho1Sol2 { a1: a1.clone(), a2: a2.clone(), l1, l2 });
            }
            for (l1, l2) in [(3, 3), (6, 3)] {
                cases.push(RhoCase::Rho2Sol1 { a1: a1.clone(), a2: a2.clone(), l1, l2 });
            }
            for (l1, l2) in [(4, 4), (8, 4)] {
                cases.push(RhoCase::Rho2Sol2 { a1: a1.clone(), a2: a2.clone(), l1, l2 });
            }
        }
    }
    let mut built = [0usize; 4];
    let mut bad = Vec::new();
    for case in &cases {
        let Ok(r) = verify_rho_solutions(case) else { continue };
        built[case.rho() + case.sigma() - 2 + usize::from(matches!(case, RhoCase::Rho2Sol2 { .. }))] += 1;
        if !r.shape_ok || r.term_count != r.sigma + r.rho {
            bad.push(format!("{case:?}"));
        }
    }
    let special = verify_rho_solutions(&RhoCase::Rho2Sol2 { a1: gr("1"), a2: gr("4"), l1: 4, l2: 4 }).unwrap();
    let special_ok = special.shape_ok && special.composition.to_string() == "X1^4 + 4i*X1^3*X2 + 8i*X1*X2^3 + 4*X2^4";
    let (fast, time) = within(start.elapsed(), Duration::from_secs(1));
    Verdict::attainable(
        bad.is_empty() && special_ok && fast && built.iter().all(|&n| n > 0),
        format!(
            "{} instantiations in Q(i) (rho1-sol1 {}, rho1-sol2 {}, rho2-sol1 {}, rho2-sol2 {}), {} with wrong shape; a1=1, a2=4 gives {}; {time}",
            built.iter().sum::<usize>(),
            built[0],
            built[1],
            built[2],
            built[3],
            bad.len(),
            special.composition
        ),
    )
}

fn criterion6() -> Verdict {
    let start = Instant::now();
    let bases: Vec<BigInt> = [8, 27, 12, 18].iter().map(|&n| BigInt::from(n)).collect();
    let c = indep_certificate(&bases, DEFAULT_TRIAL_BOUND).unwrap();
    let rel = |i: usize| c.relations.iter().find(|r| r.index == i).map(|r| (r.m_ii, r.exps.clone()));
    let relations_ok = c.chosen == [0, 1] && rel(2) == Some((3, vec![2, 1])) && rel(3) == Some((3, vec![1, 2]));
    let big = |n: i64, e: u32| num_traits::pow(BigInt::from(n), e as usize);
    let reconstructed = big(12, 3) == big(8, 2) * big(27, 1) && big(18, 3) == big(8, 1) * big(27, 2) && c.verify();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut perm = bases.clone();
    let mut ranks = BTreeSet::new();
    for _ in 0..100 {
        perm.shuffle(&mut rng);
        ranks.insert(indep_certificate(&perm, DEFAULT_TRIAL_BOUND).unwrap().rank);
    }
    let (fast, time) = within(start.elapsed(), Duration::from_secs(1));
    Verdict::attainable(
        c.rank == 2 && relations_ok && reconstructed && ranks == BTreeSet::from([2]) && fast,
        format!(
            "rank {}, 12^3 = 8^2*27 and 18^3 = 8*27^2: {relations_ok}, reconstruction: {reconstructed}, ranks over 100 permutations {ranks:?}; {time}",
            c.rank
        ),
    )
}

fn criterion7() -> Verdict {
    let start = Instant::now();
    let v = |s: &str| uhs_verdict(&parse_expsum(s).unwrap(), DEFAULT_TRIAL_BOUND).unwrap();
    let simple = v("2^n+3^n").status == UhsStatus::Uhs;
    let example = parse_expsum("8^n+27^n+3*12^n+3*18^n").unwrap();
    let ex = v("8^n+27^n+3*12^n+3*18^n");
    let witness_ok = ex.status == UhsStatus::NotUhs
        && ex.witness.as_ref().is_some_and(|w| {
            w.b1.is_one() && w.b2.is_one() && w.beta1 == 2.into() && w.beta2 == 3.into() && w.d == 3 && w.reproduces(&example)
        });

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let (mut sums, mut not_uhs) = (0, Vec::new());
    while sums < 200 {
        let bases: Vec<BigInt> = (0..4).map(|_| BigInt::from(rng.gen_range(2..=400))).collect();
        if indep_certificate(&bases, DEFAULT_TRIAL_BOUND).unwrap().rank != 4 {
            continue;
        }
        let terms = bases.into_iter().map(|b| {
            let n = loop {
                let n = rng.gen_range(-20..=20);
                if n != 0 {
                    break n;
                }
            };
            (rat(n, rng.gen_range(1..=5)), b)
        });
        let alpha = ExpSum::new(terms).unwrap();
        sums += 1;
        let r = uhs_verdict(&alpha, DEFAULT_TRIAL_BOUND).unwrap();
        if r.status != UhsStatus::Uhs {
            not_uhs.push(alpha.to_string());
        }
    }
    let (fast, time) = within(start.elapsed(), Duration::from_secs(1));
    Verdict::attainable(
        simple && witness_ok && not_uhs.is_empty() && fast,
        format!(
            "2^n+3^n UHS: {simple}; example NOT_UHS via (2^n+3^n)^3: {witness_ok}; {sums} random sums with sigma=4, {} not UHS; {time}",
            not_uhs.len()
        ),
    )
}

fn random_points(rng: &mut ChaCha8Rng, sigma: usize, n: usize) -> Vec<ExponentVector> {
    let mut set = BTreeSet::new();
    let mut tries = 0;
    while set.len() < n && tries < 1000 {
        tries += 1;
        set.insert(ExponentVector((0..sigma).map(|_| rng.gen_range(-3..=3)).collect()));
    }
    set.into_iter().collect()
}

fn criterion8() -> Verdict {
    let mut failures = Vec::new();
    for sigma in 1..=5usize {
        for h in sigma..=8 {
            let w = sigmapos_witness(sigma, h).unwrap();
            if !w.holds {
                failures.push((sigma, h, w.report.k, w.expected_k));
            }
        }
    }

    let threads = pool(8);
    let kmin = |sigma: usize, lo: i64, hi: i64, h_max: usize, f: &[i64]| {
        let cfg = KminConfig {
            sigma,
            lo,
            hi,
            h_max,
            f_family: f.iter().map(|&e| UniPoly::monomial(e)).collect(),
            coeffs: KminConfig::default_coeffs(),
        };
        threads.install(|| par::kmin_search(&cfg)).unwrap().best.unwrap().k
    };
    let k1 = kmin(1, -2, 2, 2, &[2, 3]);
    let k2 = kmin(2, -2, 2, 3, &[2, 3]);
    let start = Instant::now();
    let k3 = kmin(3, -1, 2, 3, &[2]);
    let (fast, time) = within(start.elapsed(), Duration::from_secs(600));
    let k4 = kmin(4, 0, 1, 4, &[2]);
    let minima_ok = (k1, k2, k3) == (1, 3, 6);
    let lower_ok = k1 >= 1 && k2 >= 3 && k3 >= 5 && k4 >= 10;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let (mut applicable, mut drawn, mut violated) = (0, 0, 0);
    while applicable < 1000 {
        drawn += 1;
        let sigma = rng.gen_range(1..=4);
        let nb = rng.gen_range(1..=20);
        let na = rng.gen_range(1..=nb);
        let (a, b) = (random_points(&mut rng, sigma, na), random_points(&mut rng, sigma, nb));
        let r = ruzsa_bound_check(&a, &b).unwrap();
        match r.status {
            RuzsaStatus::Inapplicable => continue,
            RuzsaStatus::Holds => applicable += 1,
            RuzsaStatus::Violated => {
                applicable += 1;
                violated += 1;
            }
        }
    }

    let pass = failures.is_empty() && minima_ok && lower_ok && violated == 0 && fast;
    let detail = format!(
        "witness equality fails at (sigma, h, k, expected) {failures:?}; kmin minima {k1}, {k2}, {k3} (sigma=3 search {time}), sigma=4 non-negative box min {k4}; Ruzsa bound violated in {violated} of {applicable} applicable pairs ({drawn} drawn)"
    );
    // With sigma = 1 every extra term X1^i / X1^(i-1) equals X1, so g = h*X1 and f(g) has one term.
    let expected =
        failures == (2..=8).map(|h| (1, h, 1, h as i64)).collect::<Vec<_>>() && minima_ok && lower_ok && violated == 0 && fast;
    Verdict { pass, detail, expected_failure: Some(expected) }
}

fn criterion9() -> Verdict {
    let start = Instant::now();
    let mut checked = 0;
    let mut family_failures = Vec::new();
    for f in FAMILIES {
        for p in f.min_param..=50 {
            checked += 1;
            let inst = family_instance(f.id, p).unwrap();
            if !inst.verified {
                family_failures.push(format!("{}@{p}", f.id));
            }
        }
    }

    let mut solutions: Vec<SolutionJson> = Vec::new();
    let mut summaries = Vec::new();
    for x in ["2", "3"] {
        let (code, out) = cli_json(&["--threads", "8", "digits-search", "--x", x, "--m-max", "24"]);
        assert_eq!(code, 0);
        let mut lines: Vec<&str> = out.lines().collect();
        summaries.push(serde_json::from_str::<DigitsSummary>(lines.pop().unwrap()).unwrap());
        solutions.extend(lines.iter().map(|l| serde_json::from_str::<SolutionJson>(l).unwrap()));
    }
    let (fast, time) = within(start.elapsed(), Duration::from_secs(120));
    let has = |x: u64, m: [i64; 4], value: &str| solutions.iter().any(|s| s.x == x && s.m == m && s.value == value);
    let required = has(3, [1, 2, 3, 4], "121")
        && has(2, [3, 4, 5, 6], "121")
        && has(2, [4, 7, 9, 10], "1681")
        && has(2, [4, 5, 6, 9], "625")
        && has(3, [2, 3, 4, 5], "361");
    let digits_ok = solutions.iter().all(|s| {
        let value: BigInt = s.value.parse().unwrap();
        let digits = lacunary_core::digits::base_digits(&value, s.x);
        let ones: Vec<usize> = digits.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect();
        let mut expected = vec![0usize];
        expected.extend(s.m.iter().map(|&m| m as usize));
        digits.iter().all(|&c| c <= 1) && ones == expected
    });
    let findings: Vec<&SolutionJson> = solutions.iter().filter(|s| s.finding).collect();
    let unmatched: Vec<&SolutionJson> = solutions.iter().filter(|s| s.matches.is_empty()).collect();
    let ratio = |a: i64, b: i64| a as f64 / b as f64;
    let left_window = unmatched.iter().map(|s| ratio(s.m[2], s.m[3])).fold(f64::INFINITY, f64::min);
    let right_window = unmatched.iter().map(|s| ratio(s.m[0], s.m[3])).fold(0.0, f64::max);

    let pass = family_failures.is_empty() && required && digits_ok && findings.is_empty() && fast;
    let listed: Vec<String> = findings.iter().map(|s| format!("x={} {:?} y={}", s.x, s.m, s.y)).collect();
    let detail = format!(
        "{checked} family instances, failures {family_failures:?}; {} + {} solutions, required instances found: {required}, digits rechecked: {digits_ok}; with c_left=3/4, c_right=1/3 unexplained gap solutions: [{}] (all unmatched solutions would pass only for c_left < {left_window:.3} and c_right > {right_window:.3}); {time}",
        summaries[0].solutions,
        summaries[1].solutions,
        listed.join("; ")
    );
    // Sporadic squares such as 29^2 = 1 + 2^3 + 2^6 + 2^8 + 2^9 satisfy a gap
    // condition yet belong to no family; they are genuine, not search errors.
    let expected = family_failures.is_empty()
        && required
        && digits_ok
        && fast
        && !findings.is_empty()
        && findings.iter().all(|s| s.matches.is_empty() && (s.gap_left || s.gap_right))
        && has(2, [3, 6, 8, 9], "841");
    Verdict { pass, detail, expected_failure: Some(expected) }
}

fn criterion10() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_lacunary");
    let commands: [&[&str]; 12] = [
        &["expand", "(1 + T)^3 - 3*T", "--power", "2"],
        &["compose", "T^2 + T", "X1 + X2 + X1^2*X2^-1"],
        &["verify-tables"],
        &["oracle-search", "--d", "2", "--k", "5", "--max-deg", "4", "--grid", "1,-1,1/2,-1/2,1/4,-1/4"],
        &["vandermonde", "--d", "5", "--n", "9"],
        &["indep", "8", "27", "12", "18"],
        &["uhs-check", "8^n + 27^n + 3*12^n + 3*18^n"],
        &["gap-report", "T^3 - T", "X1 + X2 - X1*X2"],
        &["kmin-search", "--sigma", "2", "--box", "-2,2", "--h-max", "3", "--f", "T^2", "--f", "T^3"],
        &["vecfact", "--w", "4,2", "--gens", "1,0;0,1;1,1;2,1", "--j", "2,3,4"],
        &["digits-verify", "--family", "all", "--up-to", "20"],
        &["digits-search", "--x", "2", "--m-max", "20"],
    ];
    let run = |threads: &str, args: &[&str]| {
        let out = Command::new(bin).args(["--format", "json", "--threads", threads]).args(args).output().unwrap();
        (out.status.success(), out.stdout)
    };
    let mut differing = Vec::new();
    for args in commands {
        let a = run("1", args);
        let b = run("1", args);
        let c = run("8", args);
        if !(a.0 && a == b && a == c && !a.1.is_empty()) {
            differing.push(args[0]);
        }
    }
    Verdict::attainable(
        differing.is_empty(),
        format!("12 subcommands run twice at 1 thread and once at 8 threads; differing or failing: {differing:?}"),
    )
}

fn main() {
    let criteria: [fn() -> Verdict; 10] = [
        criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7, criterion8, criterion9,
        criterion10,
    ];
    let mut unexpected = Vec::new();
    for (i, c) in criteria.iter().enumerate() {
        let v = c();
        let n = i + 1;
        println!("criterion {n}: {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        match (v.pass, v.expected_failure) {
            (true, _) | (false, Some(true)) => {}
            (false, Some(false)) => unexpected.push(format!("criterion {n} failed for an undocumented reason")),
            (false, None) => unexpected.push(format!("criterion {n} failed")),
        }
    }
    if !unexpected.is_empty() {
        eprintln!("{}", unexpected.join("\n"));
        std::process::exit(1);
    }
}
