//! Acceptance checks, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the PASS/FAIL lines are
//! always printed. Exits nonzero if any criterion fails.

mod common;

use std::f64::consts::FRAC_PI_4;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use coinkit::exprlang::{
    amplified_error, equality_test, eval_exact, modulus_range, parse, per_trial_error,
    single_trial, EqVerdict, EqualityTest, Expr, SizeBound, DEFAULT_GUARD_BITS,
};
use coinkit::extractor::{
    adversary_view, enumerate_prg, exact_output_distribution, key_recover, seed_averaged_distance,
    statistical_distance, BitFixingSource, ExactDistribution, SeedSet, ToeplitzExtractor,
};
use coinkit::loadbalance::{run_experiment, TaskDuration};
use coinkit::numtheory::{miller_rabin, CompositeWitness, PrimalityVerdict};
use coinkit::pairwise::{output_length, verify_not_threewise, verify_pairwise, PairwiseStream};
use coinkit::sampling::{area_runs, poll_coverage, required_samples, BoundMethod, QuarterDisk};
use coinkit::{BitString, SeedStream};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn seeds(label: &str) -> SeedStream {
    SeedStream::new(format!("acceptance/{label}").into_bytes())
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

const FLAGSHIP_LHS: &str = "12^1000001 + 7^442";
const FLAGSHIP_RHS: &str = "143^500001 + 197";

fn flagship_inequality() -> Outcome {
    let (lhs, rhs) = (parse(FLAGSHIP_LHS).unwrap(), parse(FLAGSHIP_RHS).unwrap());
    let (report, fast) = timed(|| {
        EqualityTest::default()
            .run(&lhs, &rhs, &mut seeds("1").stream("precheck", 0))
            .unwrap()
    });
    let parity_ok = matches!(
        report.verdict,
        EqVerdict::Unequal {
            witness_modulus: 2,
            ..
        }
    ) && fast < Duration::from_secs(1);

    let mut slowest = Duration::ZERO;
    let mut most_trials = 0;
    let mut all_unequal = true;
    for i in 0..10 {
        let (r, t) = timed(|| {
            EqualityTest::default()
                .with_parity_precheck(false)
                .with_max_trials(20)
                .run(&lhs, &rhs, &mut seeds("1").stream("random", i))
        });
        slowest = slowest.max(t);
        match r {
            Ok(r) if r.verdict.is_unequal() => most_trials = most_trials.max(r.trials_run),
            _ => all_unequal = false,
        }
    }
    let random_ok = all_unequal && most_trials <= 20 && slowest < Duration::from_secs(10);
    outcome(
        parity_ok && random_ok,
        format!(
            "parity path {:?} witness {}; without pre-check: 10/10 unequal = {all_unequal}, max {most_trials} trials, slowest {slowest:?}",
            fast,
            match report.verdict {
                EqVerdict::Unequal { witness_modulus, .. } => witness_modulus.to_string(),
                _ => "none".into(),
            }
        ),
    )
}

fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return Expr::lit(rng.gen_range(0u32..50));
    }
    let mut sub = || random_expr(rng, depth - 1);
    let (a, b) = (sub(), sub());
    match rng.gen_range(0..4) {
        0 => Expr::add(a, b),
        1 => Expr::sub(a, b),
        2 => Expr::mul(a, b),
        _ => Expr::pow(a, rng.gen_range(0..4)),
    }
}

fn exact(e: &Expr) -> BigInt {
    eval_exact(e, DEFAULT_GUARD_BITS).unwrap()
}

/// An equal pair: a rewrite by a ring identity, or an expression against its
/// own value.
fn equal_pair<R: Rng>(rng: &mut R) -> (Expr, Expr) {
    let a = random_expr(rng, 2);
    let b = random_expr(rng, 2);
    match rng.gen_range(0..5) {
        0 => (Expr::add(a.clone(), b.clone()), Expr::add(b, a)),
        1 => (Expr::mul(a.clone(), b.clone()), Expr::mul(b, a)),
        2 => (
            Expr::pow(Expr::add(a.clone(), b.clone()), 2),
            Expr::add(
                Expr::add(Expr::mul(a.clone(), a.clone()), Expr::mul(Expr::lit(2u8), Expr::mul(a, b.clone()))),
                Expr::mul(b.clone(), b),
            ),
        ),
        3 => {
            let k = rng.gen_range(0..4);
            (
                Expr::pow(Expr::mul(a.clone(), b.clone()), k),
                Expr::mul(Expr::pow(a, k), Expr::pow(b, k)),
            )
        }
        _ => {
            let e = random_expr(rng, 3);
            let v = exact(&e);
            if v.is_negative() {
                (Expr::add(e, Expr::lit((-v).to_biguint().unwrap())), Expr::lit(0u8))
            } else {
                (e, Expr::lit(v.to_biguint().unwrap()))
            }
        }
    }
}

fn fingerprint_soundness() -> Outcome {
    let mut rng = seeds("2").stream("pairs", 0);
    let mut false_unequal = 0;
    for _ in 0..10_000 {
        let (l, r) = equal_pair(&mut rng);
        assert_eq!(exact(&l), exact(&r));
        if equality_test(&l, &r, 10, 1e-9, &mut rng).unwrap().verdict.is_unequal() {
            false_unequal += 1;
        }
    }
    let mut unequal = 0;
    let mut fooled = 0;
    while unequal < 10_000 {
        let l = random_expr(&mut rng, 3);
        let r = if rng.gen_bool(0.5) {
            random_expr(&mut rng, 3)
        } else {
            // values differing by a small amount are the hard case
            let v = exact(&l) + BigInt::from(rng.gen_range(1..=30));
            if v.is_negative() {
                continue;
            }
            Expr::lit(v.to_biguint().unwrap())
        };
        if exact(&l) == exact(&r) {
            continue;
        }
        unequal += 1;
        let range = modulus_range(SizeBound::of_difference(&l, &r)).unwrap();
        if single_trial(&l, &r, range, &mut rng).unwrap().agrees() {
            fooled += 1;
        }
    }
    let rate = fooled as f64 / unequal as f64;
    outcome(
        false_unequal == 0 && rate <= 0.10,
        format!("equal pairs judged unequal: {false_unequal}/10000; single-trial miss rate on unequal pairs {rate:.4}"),
    )
}

fn amplification() -> Outcome {
    let p = per_trial_error();
    let ten = BigInt::from(10);
    let e10 = amplified_error(&p, 10).unwrap();
    let e100 = amplified_error(&p, 100).unwrap();
    let exact_ok = e10 == BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), 10))
        && e100 == BigRational::new(BigInt::one(), num_traits::pow(ten, 100));

    // "3" and "1" agree mod 2 and differ mod 3: a fair coin per trial.
    let (three, one) = (parse("3").unwrap(), parse("1").unwrap());
    let mut rng = seeds("3").stream("coin", 0);
    let runs = 1_000_000u32;
    let mut all_missed = 0u32;
    for _ in 0..runs {
        if (0..10).all(|_| single_trial(&three, &one, 3, &mut rng).unwrap().agrees()) {
            all_missed += 1;
        }
    }
    let freq = all_missed as f64 / runs as f64;
    let expected = 1.0 / 1024.0;
    let rel = (freq - expected).abs() / expected;
    outcome(
        exact_ok && rel <= 0.5,
        format!(
            "(1/10)^10 and (1/10)^100 exact: {exact_ok}; all 10 trials missed in {all_missed}/{runs} runs = {freq:.3e} vs 2^-10 = {expected:.3e} ({:.1}% off)",
            rel * 100.0
        ),
    )
}

fn pairwise_table() -> Outcome {
    let mut rows: Vec<String> = (0..4u64)
        .map(|s| {
            let g = PairwiseStream::new(BitString::from_u64(s, 2)).unwrap();
            (1..=3).map(|i| if g.bit(i).unwrap() { '1' } else { '0' }).collect()
        })
        .collect();
    rows.sort();
    let table_ok = rows == ["000", "011", "101", "110"];
    let verified = (1..=10).filter(|&k| verify_pairwise(k).unwrap().passed()).count();
    let witness = verify_not_threewise(2).unwrap().witness;
    outcome(
        table_ok && verified == 10 && witness.is_some(),
        format!(
            "rows {rows:?} one seed each; pairwise verified for k = 1..=10: {verified}/10; three-wise witness for k=2: {:?}",
            witness.map(|w| w.indices)
        ),
    )
}

fn million_bits() -> Outcome {
    let len = output_length(20).unwrap();
    let g = PairwiseStream::random(20, &mut seeds("5").stream("seed", 0)).unwrap();
    let (bits, t) = timed(|| g.emit_all());
    outcome(
        len == 1_048_575 && bits.len() as u64 == len && t < Duration::from_secs(5),
        format!("output_length(20) = {len}; emitted {} bits in {t:?}", bits.len()),
    )
}

fn leftover_hash() -> Outcome {
    let src = BitFixingSource::new(0..6, BitString::parse_bits("00000011").unwrap()).unwrap();
    let ((report, oracle), t) = timed(|| {
        let report = seed_averaged_distance(2, &src, SeedSet::All).unwrap();
        // Independent path: per-seed exact distributions as rationals.
        let uniform = ExactDistribution::uniform(2);
        let mut sum = BigRational::zero();
        for s in 0..512 {
            let ext = ToeplitzExtractor::new(8, 2, BitString::from_u64(s, 9)).unwrap();
            sum += statistical_distance(&exact_output_distribution(&ext, &src).unwrap(), &uniform)
                .unwrap();
        }
        (report, sum / BigRational::from_integer(512.into()))
    });
    let avg = report.average_distance.to_f64().unwrap();
    outcome(
        report.seeds_enumerated == 512
            && report.average_distance == oracle
            && avg <= 0.125
            && t < Duration::from_secs(60),
        format!(
            "n=8 u=6 m=2: average distance {} = {avg:.5} over 512 seeds x 64 sources (oracle agrees: {}), worst seed {}, bound 0.125, {t:?}",
            report.average_distance,
            report.average_distance == oracle,
            report.worst_distance
        ),
    )
}

/// Toeplitz product by the definition: out_i = XOR_j diag[i - j + n - 1] x_j.
fn toeplitz_by_definition(diag: u64, n: usize, m: usize, x: &BitString) -> BitString {
    BitString::from_bits((0..m).map(|i| {
        (0..n).fold(false, |acc, j| acc ^ (diag >> (i + n - 1 - j) & 1 == 1 && x.get(j)))
    }))
}

fn prg_structure() -> Outcome {
    let x = BitString::parse_bits("1101001110").unwrap();
    let outs = enumerate_prg(10, 4, &x).unwrap();
    let mismatches = outs
        .iter()
        .enumerate()
        .filter(|&(t, o)| {
            let ext = ToeplitzExtractor::new(10, 4, BitString::from_u64(t as u64, 13)).unwrap();
            o != &ext.extract(&x).unwrap() || o != &toeplitz_by_definition(t as u64, 10, 4, &x)
        })
        .count();
    outcome(
        outs.len() == 8192 && mismatches == 0,
        format!("{} outputs, {mismatches} differ from an independent extract call", outs.len()),
    )
}

fn key_recovery() -> Outcome {
    let mut rng = seeds("8").stream("key", 0);
    let random_bits = |rng: &mut rand_chacha::ChaCha20Rng, n: usize| {
        BitString::from_bits((0..n).map(|_| rng.gen::<bool>()))
    };
    let key = random_bits(&mut rng, 20);
    let leaked: Vec<usize> = (0..20).step_by(2).collect();
    let view = adversary_view(&key, &leaked, 4).unwrap();
    let src = coinkit::extractor::adversary_source(&key, &leaked).unwrap();
    let enumerated = seed_averaged_distance(4, &src, SeedSet::Relevant).unwrap();
    let avg = view.average_distance.to_f64().unwrap();

    let mut disagreements = 0;
    for _ in 0..10_000 {
        let key = random_bits(&mut rng, 20);
        let mut positions: Vec<usize> = (0..20).collect();
        for i in 0..10 {
            positions.swap(i, rng.gen_range(i..20));
        }
        let leaked = &positions[..10];
        let seed = random_bits(&mut rng, 23);
        let alice = key_recover(&key, leaked, 4, &seed).unwrap();
        let bob = key_recover(&key, leaked, 4, &seed).unwrap();
        let oracle = toeplitz_by_definition(seed.to_u64().unwrap(), 20, 4, &key);
        if alice != bob || alice != oracle {
            disagreements += 1;
        }
    }
    outcome(
        avg <= 0.125 && enumerated.average_distance == view.average_distance && disagreements == 0,
        format!(
            "20-bit key, 10 leaked, m=4: seed-averaged distance {avg:.5} (enumeration agrees: {}), worst seed {:.4}; disagreements {disagreements}/10000",
            enumerated.average_distance == view.average_distance,
            view.worst_distance_f64
        ),
    )
}

fn polling() -> Outcome {
    let c = poll_coverage(0.57, 400, 0.05, 10_000, &seeds("9")).unwrap();
    let normal = required_samples(0.05, 0.05, BoundMethod::Normal).unwrap();
    let hoeffding = required_samples(0.05, 0.05, BoundMethod::Hoeffding).unwrap();
    outcome(
        c.fraction >= 0.95 && normal == 385 && hoeffding == 738,
        format!(
            "p=0.57 n=400: within 0.05 in {}/{} polls ({:.4}); samples normal {normal}, hoeffding {hoeffding}",
            c.within, c.runs, c.fraction
        ),
    )
}

fn area() -> Outcome {
    let runs = area_runs(&QuarterDisk, 1_000_000, 0.95, 100, &seeds("10")).unwrap();
    let close = runs.iter().filter(|e| (e.value - FRAC_PI_4).abs() <= 0.0014).count();
    outcome(
        close >= 95,
        format!("quarter disk, 10^6 points: within 0.0014 of pi/4 in {close}/100 runs"),
    )
}

fn is_prime_by_division(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn primality() -> Outcome {
    let mut rng = seeds("11").stream("exhaustive", 0);
    let (disagreements, t) = timed(|| {
        (2..=100_000u64)
            .filter(|&n| {
                miller_rabin(&BigUint::from(n), 20, &mut rng).unwrap().is_probably_prime()
                    != is_prime_by_division(n)
            })
            .count()
    });
    let carmichael = [561u64, 1105, 29_111_881];
    let korselt = carmichael.iter().all(|&n| {
        let factors: Vec<u64> = (2..n).filter(|&p| n % p == 0 && is_prime_by_division(p)).collect();
        factors.len() >= 3
            && factors.iter().all(|&p| n % (p * p) != 0 && (n - 1) % (p - 1) == 0)
    });
    let mut missed = 0;
    let mut by_base = 0;
    for &n in &carmichael {
        for run in 0..1000 {
            let v = miller_rabin(&BigUint::from(n), 20, &mut seeds("11").stream("carmichael", run));
            match v.unwrap() {
                PrimalityVerdict::Composite { witness } => {
                    assert!(witness.certifies(&BigUint::from(n)));
                    by_base += matches!(witness, CompositeWitness::Base(_)) as u32;
                }
                PrimalityVerdict::ProbablyPrime { .. } => missed += 1,
            }
        }
    }
    outcome(
        disagreements == 0 && missed == 0 && korselt && t < Duration::from_secs(60),
        format!(
            "n <= 10^5: {disagreements} disagreements with trial division ({t:?}); Carmichael {carmichael:?} composite in every run ({missed} misses, {by_base} via a base witness)"
        ),
    )
}

fn load_balance() -> Outcome {
    let tasks = vec![TaskDuration::UNIT; 1000];
    let (s, _) = run_experiment(&tasks, 10, 1000, &seeds("12")).unwrap();
    outcome(
        s.conservation_failures == 0 && (1.0..=1.25).contains(&s.median_ratio),
        format!(
            "1000 unit tasks on 10 machines, 1000 runs: conservation failures {}, median max/mean {:.4}",
            s.conservation_failures, s.median_ratio
        ),
    )
}

fn reproducibility() -> Outcome {
    let mut differing = Vec::new();
    let invocations = common::seeded_invocations();
    for args in &invocations {
        for json in [false, true] {
            let mut a = args.clone();
            if json {
                a.push("--json");
            }
            let reference = common::coinkit(&a, Some(1));
            let runs = [
                common::coinkit(&a, Some(1)),
                common::coinkit(&a, Some(4)),
                common::coinkit(&a, None),
            ];
            if !reference.status.success()
                || runs.iter().any(|r| r.stdout != reference.stdout || r.status != reference.status)
            {
                differing.push(a.join(" "));
            }
        }
    }
    outcome(
        differing.is_empty(),
        format!(
            "{} invocations x text/json, 1 vs 4 threads vs default pool: {} differ {differing:?}",
            invocations.len(),
            differing.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("flagship inequality", flagship_inequality),
        ("fingerprint soundness", fingerprint_soundness),
        ("amplification arithmetic", amplification),
        ("pairwise table", pairwise_table),
        ("million-bit stream", million_bits),
        ("leftover-hash bound", leftover_hash),
        ("seed-enumeration generator", prg_structure),
        ("key recovery", key_recovery),
        ("polling", polling),
        ("area estimation", area),
        ("primality", primality),
        ("load balancing", load_balance),
        ("reproducibility", reproducibility),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.iter().any(|o| name.contains(o.as_str())) {
            continue;
        }
        let (o, t) = timed(check);
        println!(
            "{} {:>2} {name} ({:.1}s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            t.as_secs_f64(),
            o.detail
        );
        failed += !o.pass as u32;
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
