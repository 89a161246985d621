//! Twenty random bits stretched into a million pairwise independent ones.

use coinkit::pairwise::{
    output_length, verify_not_threewise, verify_pairwise, PairwiseStream,
};
use coinkit::{BitString, SeedStream};

fn main() {
    println!("seed  bits 1..3");
    for s in 0..4u64 {
        let g = PairwiseStream::new(BitString::from_u64(s, 2)).unwrap();
        println!("{}    {}", g.seed(), g.emit(3).unwrap());
    }
    let report = verify_pairwise(2).unwrap();
    println!("every pair uniform over the 4 seeds: {}", report.passed());
    let triple = verify_not_threewise(2).unwrap().witness.unwrap();
    println!("but bits {:?} only take the values {:?}", triple.indices, triple.support());

    for k in 1..=10 {
        assert!(verify_pairwise(k).unwrap().passed());
    }
    println!("pairwise independence checked exhaustively for k = 1..=10");

    let g = PairwiseStream::random(20, &mut SeedStream::new(b"pairwise".to_vec()).stream("k20", 0)).unwrap();
    let start = std::time::Instant::now();
    let bits = g.emit_all();
    println!(
        "k = 20: {} bits ({} expected) in {:?}, {} ones",
        bits.len(),
        output_length(20).unwrap(),
        start.elapsed(),
        bits.count_ones()
    );
}
