//! Compare two enormous expressions without ever writing them out.
//!
//! `12^1000001 + 7^442` has over a million decimal digits. Fingerprinting
//! evaluates both sides modulo small random primes instead.

use coinkit::exprlang::{eval_exact, parse, EqVerdict, EqualityTest, DEFAULT_GUARD_BITS};
use coinkit::SeedStream;

fn show(lhs: &str, rhs: &str, test: &EqualityTest, seeds: &SeedStream) {
    let (l, r) = (parse(lhs).unwrap(), parse(rhs).unwrap());
    let report = test.run(&l, &r, &mut seeds.stream(lhs, 0)).unwrap();
    println!("{lhs}  vs  {rhs}");
    match &report.verdict {
        EqVerdict::Unequal {
            witness_modulus,
            lhs_residue,
            rhs_residue,
        } => println!(
            "  unequal: mod {witness_modulus} the sides are {lhs_residue} and {rhs_residue} (after {} random primes)",
            report.trials_run
        ),
        EqVerdict::ProbablyEqual { error_bound, trials } => {
            println!("  probably equal: wrong with probability at most {error_bound} after {trials} primes")
        }
    }
    println!(
        "  primes drawn from [2, {}], difference bounded by 2^{}",
        report.modulus_range, report.size_bound_bits
    );
}

fn main() {
    let seeds = SeedStream::new(b"expression_equality".to_vec());
    let default = EqualityTest::default();
    show("12^1000001 + 7^442", "143^500001 + 197", &default, &seeds);
    show(
        "12^1000001 + 7^442",
        "143^500001 + 197",
        &default.clone().with_parity_precheck(false),
        &seeds,
    );
    show("(3^200 + 1) * (3^200 - 1)", "9^200 - 1", &default, &seeds);
    show("2^521 - 1", "2^521 - 3", &default.clone().with_parity_precheck(false), &seeds);

    // Small enough to check exactly.
    let (l, r) = (parse("(2+3)^8").unwrap(), parse("390625").unwrap());
    println!(
        "exact check: (2+3)^8 = {}, 390625 = {}",
        eval_exact(&l, DEFAULT_GUARD_BITS).unwrap(),
        eval_exact(&r, DEFAULT_GUARD_BITS).unwrap()
    );
}
