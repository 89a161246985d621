use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::{
    domain, usage, AreaArgs, BalanceArgs, BitFormat, CliError, Ctx, EqtestArgs, ExtractArgs,
    FactorArgs, KeyrecoverArgs, PairwiseArgs, PollArgs, PrgEnumArgs, PrimeArgs, RegionName,
    Report, SamplesizeArgs,
};
use crate::bits::{BitString, WireBits};
use crate::exprlang::{self, EqVerdict, EqualityTest, ExprError};
use crate::extractor::{self, ExtractError, ToeplitzExtractor};
use crate::loadbalance::{self, LoadError, TaskDuration};
use crate::numtheory::{self, CompositeWitness, NumError, PrimalityVerdict};
use crate::pairwise::{self, PairwiseError, PairwiseStream};
use crate::sampling::{self, Annulus, BoundMethod, BoundingBox, FullBox, QuarterDisk, Region};

fn wire(b: &BitString) -> Value {
    serde_json::to_value(WireBits::from(b)).expect("wire bits serialize")
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn ratio_str(r: &num_rational::BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn eqtest(a: &EqtestArgs, ctx: &mut Ctx) -> Result<Report, CliError> {
    let lhs = exprlang::parse(&a.lhs).map_err(|e| usage("--lhs", e))?;
    let rhs = exprlang::parse(&a.rhs).map_err(|e| usage("--rhs", e))?;
    let test = EqualityTest::new(a.trials, a.target_error)
        .with_parity_precheck(!a.no_precheck)
        .with_max_trials(a.max_trials.max(a.trials));
    let report = test
        .run(&lhs, &rhs, &mut ctx.rng("eqtest")?)
        .map_err(|e| match &e {
            ExprError::TrialBudgetExhausted {
                trials_run,
                error_bound,
                target_error,
            } => CliError::Domain {
                kind: "trial_budget_exhausted",
                message: e.to_string(),
                detail: json!({
                    "trials_run": trials_run,
                    "error_bound": error_bound,
                    "target_error": target_error,
                }),
            },
            ExprError::ModulusRangeTooLarge { .. } => domain("modulus_range_too_large", &e),
            _ => domain("expression", &e),
        })?;

    let mut text = String::new();
    match &report.verdict {
        EqVerdict::Unequal {
            witness_modulus,
            lhs_residue,
            rhs_residue,
        } => {
            writeln!(text, "verdict: unequal").unwrap();
            writeln!(
                text,
                "witness: lhs mod {witness_modulus} = {lhs_residue}, rhs mod {witness_modulus} = {rhs_residue}"
            )
            .unwrap();
        }
        EqVerdict::ProbablyEqual { error_bound, trials } => {
            writeln!(text, "verdict: probably equal").unwrap();
            writeln!(
                text,
                "error bound: {} ({:e}) after {trials} trials",
                ratio_str(error_bound),
                error_bound.to_f64().unwrap_or(0.0)
            )
            .unwrap();
        }
    }
    if report.decided_by_parity {
        writeln!(text, "decided by: parity pre-check").unwrap();
    } else {
        writeln!(text, "random prime trials: {}", report.trials_run).unwrap();
    }
    writeln!(text, "modulus range: primes up to {}", report.modulus_range).unwrap();
    writeln!(text, "size bound: {} bits", report.size_bound_bits).unwrap();
    Ok(Report {
        result: to_json(&report),
        text,
    })
}

fn witness_json(w: &CompositeWitness) -> Value {
    let kind = match w {
        CompositeWitness::Divisor(_) => "divisor",
        CompositeWitness::Base(_) => "base",
    };
    json!({"kind": kind, "value": w.value().to_string()})
}

pub(crate) fn prime(a: &PrimeArgs, ctx: &mut Ctx) -> Result<Report, CliError> {
    if let Some(n) = &a.test {
        let n: BigUint = n.parse().expect("validated decimal");
        let verdict = numtheory::miller_rabin(&n, a.rounds, &mut ctx.rng("prime")?)
            .map_err(|e| usage("--test", e))?;
        return Ok(match verdict {
            PrimalityVerdict::Composite { witness } => Report {
                text: match &witness {
                    CompositeWitness::Divisor(d) => format!("{n} is composite: divisible by {d}\n"),
                    CompositeWitness::Base(b) => {
                        format!("{n} is composite: base {b} is a Miller-Rabin witness\n")
                    }
                },
                result: json!({
                    "n": n.to_string(),
                    "verdict": "composite",
                    "witness": witness_json(&witness),
                    "rounds": a.rounds,
                }),
            },
            PrimalityVerdict::ProbablyPrime { error_bound, rounds } => Report {
                text: format!(
                    "{n} is probably prime: error at most 4^-{rounds} ({:e})\n",
                    error_bound.to_f64().unwrap_or(0.0)
                ),
                result: json!({
                    "n": n.to_string(),
                    "verdict": "probably_prime",
                    "error_bound": ratio_str(&error_bound),
                    "rounds": rounds,
                }),
            },
        });
    }
    let range = a.random.as_ref().expect("clap requires --test or --random");
    let lo: BigUint = range[0].parse().expect("validated decimal");
    let hi: BigUint = range[1].parse().expect("validated decimal");
    let p = numtheory::random_prime(&lo, &hi, &mut ctx.rng("prime")?)
        .map_err(|e| domain("no_prime_in_range", e))?;
    Ok(Report {
        text: format!("{p}\n"),
        result: json!({"lo": lo.to_string(), "hi": hi.to_string(), "prime": p.to_string()}),
    })
}

pub(crate) fn factor(a: &FactorArgs, _: &mut Ctx) -> Result<Report, CliError> {
    let factors = match numtheory::trial_division_factor(a.n, a.budget) {
        Ok(f) => f,
        Err(NumError::Timeout(t)) => {
            return Err(CliError::Domain {
                kind: "timeout",
                message: NumError::Timeout(t.clone()).to_string(),
                detail: json!({
                    "partial": t.partial.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "remaining": t.remaining.to_string(),
                    "candidates_tried": t.candidates_tried,
                }),
            })
        }
        Err(e) => return Err(usage("N", e)),
    };
    let mut powers: Vec<(u128, u32)> = Vec::new();
    for &p in &factors {
        match powers.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => powers.push((p, 1)),
        }
    }
    let product = powers
        .iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join(" * ");
    Ok(Report {
        text: format!("{} = {product}\n", a.n),
        result: json!({
            "n": a.n.to_string(),
            "factors": factors.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "prime": factors.len() == 1,
        }),
    })
}

fn pairwise_usage(e: PairwiseError) -> CliError {
    match e {
        PairwiseError::VerifyRange { .. } | PairwiseError::TooLarge { .. } => usage("--k", e),
        PairwiseError::IndexOutOfRange { .. } => usage("--emit", e),
        e => usage("--k", e),
    }
}

pub(crate) fn pairwise(a: &PairwiseArgs, ctx: &mut Ctx) -> Result<Report, CliError> {
    if a.verify {
        let r = pairwise::verify_pairwise(a.k).map_err(pairwise_usage)?;
        let mut text = format!(
            "k={}: {} outputs, {} seeds, {} pairs checked, {} violations\n",
            r.seed_bits, r.output_len, r.seeds, r.pairs_checked, r.violation_count
        );
        for v in &r.violations {
            writeln!(text, "  outputs ({}, {}) = ({}, {}) for {} seeds", v.i, v.j, v.a, v.b, v.count).unwrap();
        }
        text += if r.passed() { "pairwise independent: pass\n" } else { "pairwise independent: FAIL\n" };
        let mut result = to_json(&r);
        result["passed"] = r.passed().into();
        return Ok(Report { result, text });
    }
    if a.verify_triple {
        let r = pairwise::verify_not_threewise(a.k).map_err(pairwise_usage)?;
        let text = match &r.witness {
            Some(t) => format!(
                "outputs ({}, {}, {}) are not 3-wise independent: only {} occur\n",
                t.indices[0],
                t.indices[1],
                t.indices[2],
                t.support().join(", ")
            ),
            None => format!("k={}: every triple is jointly uniform\n", a.k),
        };
        let mut result = to_json(&r);
        result["passed"] = r.passed().into();
        return Ok(Report { result, text });
    }

    let len = pairwise::output_length(a.k).map_err(pairwise_usage)?;
    let count = match a.emit {
        Some(c) => c,
        None if a.k <= 20 => len,
        None => return Err(usage("--emit", format!("required when k > 20 (stream has {len} bits)"))),
    };
    let stream = PairwiseStream::new(ctx.seed_bits(a.k as usize)?).map_err(pairwise_usage)?;
    let out = stream.emit(count).map_err(pairwise_usage)?;
    let mut result = json!({
        "k": a.k,
        "seed": wire(stream.seed()),
        "output": wire(&out),
    });
    let text = match a.format {
        BitFormat::Hex => format!("{}\n", out.to_hex()),
        BitFormat::Text => {
            result["text"] = out.to_string().into();
            format!("{out}\n")
        }
    };
    Ok(Report { result, text })
}

fn shape_usage(e: ExtractError) -> CliError {
    match e {
        ExtractError::InvalidShape { .. } => usage("--m", e),
        ExtractError::LengthMismatch { .. } => usage("--input", e),
        e => usage("--seed", e),
    }
}

pub(crate) fn extract(a: &ExtractArgs, ctx: &mut Ctx) -> Result<Report, CliError> {
    if a.m == 0 || a.m > a.n {
        return Err(usage("--m", ExtractError::InvalidShape { n: a.n, m: a.m }));
    }
    let input = BitString::from_hex(&a.input, a.n).map_err(|e| usage("--input", e))?;
    let seed = ctx.seed_bits(a.n + a.m - 1)?;
    let ext = ToeplitzExtractor::new(a.n, a.m, seed.clone()).map_err(shape_usage)?;
    let out = ext.extract(&input).map_err(shape_usage)?;
    Ok(Report {
        text: format!("{} ({} bits: {out})\n", out.to_hex(), a.m),
        result: json!({
            "n": a.n,
            "m": a.m,
            "seed": wire(&seed),
            "input": wire(&input),
            "output": wire(&out),
        }),
    })
}

pub(crate) fn prg_enum(a: &PrgEnumArgs, _: &mut Ctx) -> Result<Report, CliError> {
    if a.m == 0 || a.m > a.n {
        return Err(usage("--m", ExtractError::InvalidShape { n: a.n, m: a.m }));
    }
    let input = BitString::from_hex(&a.input, a.n).map_err(|e| usage("--input", e))?;
    let outs = extractor::enumerate_prg(a.n, a.m, &input).map_err(|e| match e {
        ExtractError::EnumerationBudget { .. } => domain("enumeration_budget", e),
        e => shape_usage(e),
    })?;
    let seed_bits = a.n + a.m - 1;
    let mut text = format!("{} outputs of {} bits, one per {seed_bits}-bit seed\n", outs.len(), a.m);
    for (t, o) in outs.iter().enumerate() {
        writeln!(text, "{} {}", BitString::from_u64(t as u64, seed_bits).to_hex(), o.to_hex()).unwrap();
    }
    Ok(Report {
        result: json!({
            "n": a.n,
            "m": a.m,
            "input": wire(&input),
            "seed_bits": seed_bits,
            "count": outs.len(),
            "outputs": outs.iter().map(|o| o.to_hex()).collect::<Vec<_>>(),
        }),
        text,
    })
}

/// `None` when the exact analysis is too large to enumerate.
fn within_budget<T>(r: Result<T, ExtractError>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(ExtractError::EnumerationBudget { .. }) => Ok(None),
        Err(e) => Err(domain("extract", e)),
    }
}

pub(crate) fn keyrecover(a: &KeyrecoverArgs, ctx: &mut Ctx) -> Result<Report, CliError> {
    let digits = a
        .key
        .strip_prefix("0x")
        .or_else(|| a.key.strip_prefix("0X"))
        .unwrap_or(&a.key);
    let key_bits = a.key_bits.unwrap_or(4 * digits.len());
    let key = BitString::from_hex(&a.key, key_bits).map_err(|e| usage("--key", e))?;
    let achievable = extractor::achievable_output(key_bits, &a.leaked).map_err(|e| usage("--leaked", e))?;
    if a.m == 0 || a.m > achievable {
        let e = ExtractError::OutputTooLong {
            requested: a.m,
            achievable,
        };
        return Err(CliError::Domain {
            kind: "output_too_long",
            message: e.to_string(),
            detail: json!({"requested": a.m, "achievable": achievable}),
        });
    }
    let seed = ctx.seed_bits(key_bits + a.m - 1)?;
    let out = extractor::key_recover(&key, &a.leaked, a.m, &seed).map_err(shape_usage)?;
    let mut leaked = a.leaked.clone();
    leaked.sort_unstable();
    leaked.dedup();
    let view = within_budget(extractor::adversary_view(&key, &leaked, a.m))?;
    let this_seed = if key_bits - leaked.len() <= extractor::MAX_ENUMERATION_BITS {
        within_budget(extractor::adversary_view_for_seed(&key, &leaked, &seed, a.m))?
    } else {
        None
    };

    let mut text = format!("{} ({} bits: {out})\n", out.to_hex(), a.m);
    writeln!(text, "safe output length: {achievable} bits").unwrap();
    match &view {
        Some(v) => writeln!(
            text,
            "eavesdropper's distance from uniform: {:.6} averaged over seeds, {:.6} worst seed (leftover-hash bound {:.6})",
            v.average_distance_f64, v.worst_distance_f64, v.leftover_hash_bound
        )
        .unwrap(),
        None => writeln!(text, "eavesdropper's view: too large to enumerate").unwrap(),
    }
    if let Some(d) = &this_seed {
        writeln!(text, "distance for this seed: {}", ratio_str(d)).unwrap();
    }
    Ok(Report {
        result: json!({
            "key_bits": key_bits,
            "leaked": leaked,
            "m": a.m,
            "achievable": achievable,
            "seed": wire(&seed),
            "output": wire(&out),
            "adversary": view.map(|v| to_json(&v)),
            "seed_distance": this_seed.map(|d| ratio_str(&d)),
        }),
        text,
    })
}

pub(crate) fn area(a: &AreaArgs, ctx: &mut Ctx) -> Result<Report, CliError> {
    let annulus = Annulus::default();
    let (region, truth): (&dyn Region, f64) = match a.region {
        RegionName::QuarterDisk => (&QuarterDisk, std::f64::consts::FRAC_PI_4),
        RegionName::Box => (&FullBox(BoundingBox::UNIT), 1.0),
        RegionName::Annulus => (&annulus, annulus.area()),
    };
    let e = sampling::estimate_area(region, a.n, a.confidence, &mut ctx.rng("area")?)
        .map_err(|e| usage("--n", e))?;
    Ok(Report {
        text: format!(
            "area: {:.6} +/- {:.6} ({}% confidence, {} points)\nexact: {truth:.6}\n",
            e.value,
            e.half_width,
            e.confidence * 100.0,
            e.samples
        ),
        result: json!({"estimate": to_json(&e), "exact": truth, "covered": e.covers(truth)}),
    })
}

pub(crate) fn poll(a: &PollArgs, ctx: &mut Ctx) -> Result<Report, CliError> {
    let seeds = ctx.seeds()?;
    let runs = sampling::poll_runs(a.p, a.n, a.runs, &seeds).map_err(|e| usage("--p", e))?;
    let within = runs.iter().filter(|e| (e.value - a.p).abs() <= a.epsilon).count() as u64;
    let first = &runs[0];
    let mut text = format!(
        "estimate: {:.4} +/- {:.4} ({}% confidence, {} people)\n",
        first.value,
        first.half_width,
        first.confidence * 100.0,
        first.samples
    );
    if a.runs > 1 {
        writeln!(
            text,
            "within {} of {} in {within} of {} polls ({:.4})",
            a.epsilon,
            a.p,
            a.runs,
            within as f64 / a.runs as f64
        )
        .unwrap();
    }
    Ok(Report {
        result: json!({
            "estimate": to_json(first),
            "runs": a.runs,
            "within": within,
            "coverage": within as f64 / a.runs as f64,
        }),
        text,
    })
}

pub(crate) fn samplesize(a: &SamplesizeArgs, _: &mut Ctx) -> Result<Report, CliError> {
    let n = |m| sampling::required_samples(a.eps, a.delta, m).map_err(|e| usage("--eps", e));
    let (h, z) = (n(BoundMethod::Hoeffding)?, n(BoundMethod::Normal)?);
    let chosen = match a.method {
        BoundMethod::Hoeffding => h,
        BoundMethod::Normal => z,
    };
    Ok(Report {
        text: format!("{chosen}\n(hoeffding {h}, normal approximation {z})\n"),
        result: json!({
            "samples": chosen,
            "method": a.method,
            "hoeffding": h,
            "normal": z,
        }),
    })
}

pub(crate) fn balance(a: &BalanceArgs, ctx: &mut Ctx) -> Result<Report, CliError> {
    let durations = match &a.durations {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage("--durations", e))?;
            let d = loadbalance::parse_durations(&text).map_err(|e| usage("--durations", e))?;
            if let Some(t) = a.tasks {
                if t != d.len() {
                    return Err(usage(
                        "--tasks",
                        format!("{t} does not match the {} durations in the file", d.len()),
                    ));
                }
            }
            d
        }
        None => match a.tasks {
            Some(t) => vec![TaskDuration::UNIT; t],
            None => return Err(usage("--tasks", "either --tasks or --durations is required")),
        },
    };
    let machines = a.machines as usize;
    let seeds = ctx.seeds()?;
    let undefined = |e: LoadError| domain("undefined_ratio", e);
    let first = loadbalance::assign_random(&durations, machines, &mut seeds.stream("balance", 0))
        .map_err(undefined)?;
    let first_imbalance = loadbalance::imbalance(&first).map_err(undefined)?;
    let (summary, _) = loadbalance::run_experiment(&durations, machines, a.runs, &seeds).map_err(undefined)?;
    let total: u128 = durations.iter().map(|d| d.0 as u128).sum();

    let loads = first.loads();
    let mut text = format!(
        "{} tasks on {machines} machines, total duration {}\n",
        durations.len(),
        total as f64 / loadbalance::SCALE as f64
    );
    writeln!(
        text,
        "loads: {}",
        loads.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
    )
    .unwrap();
    writeln!(
        text,
        "max {} / mean {} = {:.4}",
        first_imbalance.max_load, first_imbalance.mean_load, first_imbalance.ratio
    )
    .unwrap();
    if a.runs > 1 {
        writeln!(
            text,
            "over {} runs: median ratio {:.4}, range [{:.4}, {:.4}]",
            summary.runs, summary.median_ratio, summary.min_ratio, summary.max_ratio
        )
        .unwrap();
    }
    Ok(Report {
        result: json!({
            "first_run": {
                "loads": loads,
                "imbalance": to_json(&first_imbalance),
            },
            "summary": to_json(&summary),
        }),
        text,
    })
}
