//! One weak sample, every seed: 8192 outputs from a single 10-bit input.

use coinkit::extractor::{enumerate_prg, ToeplitzExtractor};
use coinkit::BitString;

fn main() {
    let x = BitString::from_hex("2cb", 10).unwrap();
    let outs = enumerate_prg(10, 4, &x).unwrap();
    println!("input {} -> {} outputs of 4 bits", x, outs.len());
    for (t, o) in outs.iter().enumerate().take(8) {
        println!("  seed {:>4}: {o}", t);
    }
    let mut counts = [0u32; 16];
    for o in &outs {
        counts[o.to_u64().unwrap() as usize] += 1;
    }
    println!("output counts: {counts:?}");
    let t = 4321;
    let direct = ToeplitzExtractor::new(10, 4, BitString::from_u64(t, 13)).unwrap().extract(&x).unwrap();
    assert_eq!(outs[t as usize], direct);
    println!("seed {t} gives {direct} either way");
}
