//! Miller-Rabin against Carmichael numbers, random primes, and why factoring
//! is the hard direction.

use num_bigint::BigUint;

use coinkit::numtheory::{
    miller_rabin, random_prime, trial_division_factor, CompositeWitness, NumError,
    PrimalityVerdict,
};
use coinkit::SeedStream;

fn main() {
    let seeds = SeedStream::new(b"primality".to_vec());
    let mut rng = seeds.stream("mr", 0);

    // Carmichael numbers fool the Fermat test for every coprime base.
    for n in [561u64, 1105, 29_111_881, 1_000_000_007] {
        match miller_rabin(&BigUint::from(n), 20, &mut rng).unwrap() {
            PrimalityVerdict::Composite { witness } => {
                let how = match &witness {
                    CompositeWitness::Divisor(d) => format!("divisor {d}"),
                    CompositeWitness::Base(a) => format!("base {a} fails the strong test"),
                };
                println!("{n}: composite ({how}; re-checked: {})", witness.certifies(&BigUint::from(n)));
            }
            PrimalityVerdict::ProbablyPrime { error_bound, rounds } => {
                println!("{n}: probably prime, error <= {error_bound} after {rounds} rounds")
            }
        }
    }

    let lo = BigUint::from(10u8).pow(30);
    let hi = &lo * 10u8;
    let p = random_prime(&lo, &hi, &mut rng).unwrap();
    let q = random_prime(&lo, &hi, &mut rng).unwrap();
    println!("random 31-digit primes:\n  {p}\n  {q}");

    println!("{:?}", trial_division_factor(600_851_475_143, 1_000_000).unwrap());
    // A product of two ten-digit primes already exhausts a modest budget.
    match trial_division_factor(1_000_000_007u128 * 1_000_000_009, 1_000_000) {
        Err(NumError::Timeout(t)) => println!(
            "1000000007 * 1000000009: gave up after {} candidates, {} still unfactored",
            t.candidates_tried, t.remaining
        ),
        other => println!("{other:?}"),
    }
}
