//! A Toeplitz extractor on a bit-fixing source, with exact distances.

use num_traits::ToPrimitive;

use coinkit::extractor::{
    exact_output_distribution, leftover_hash_bound, seed_averaged_distance, statistical_distance,
    BitFixingSource, ExactDistribution, SeedSet, ToeplitzExtractor,
};
use coinkit::BitString;

fn main() {
    // 8-bit samples: the low six bits are random, the top two always 1.
    let src = BitFixingSource::new(0..6, BitString::parse_bits("00000011").unwrap()).unwrap();
    println!("source: n = {}, min-entropy = {} bits", src.len(), src.min_entropy());

    for m in 1..=6 {
        let r = seed_averaged_distance(m, &src, SeedSet::All).unwrap();
        println!(
            "m = {m}: distance from uniform {:.5} on average over {} seeds, {:.3} for the worst seed; leftover-hash bound {:.4}",
            r.average_distance.to_f64().unwrap(),
            r.seeds_enumerated,
            r.worst_distance.to_f64().unwrap(),
            leftover_hash_bound(m, 6)
        );
    }

    let ext = ToeplitzExtractor::new(8, 2, BitString::parse_bits("101100101").unwrap()).unwrap();
    let out = exact_output_distribution(&ext, &src).unwrap();
    let d = statistical_distance(&out, &ExactDistribution::uniform(2)).unwrap();
    println!("one seed: output probabilities {:?}, distance {d}", out.probs().iter().map(|p| p.to_string()).collect::<Vec<_>>());
}
