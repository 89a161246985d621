//! Two parties share a 20-bit key; an eavesdropper learned half of it.
//! They publish a random seed and both extract the same short key that looks
//! uniform to the eavesdropper.

use rand::Rng;

use coinkit::extractor::{achievable_output, adversary_view, key_recover, KEY_SLACK_BITS};
use coinkit::{BitString, SeedStream};

fn main() {
    let mut rng = SeedStream::new(b"leaked_key".to_vec()).stream("demo", 0);
    let key = BitString::from_bits((0..20).map(|_| rng.gen::<bool>()));
    let leaked: Vec<usize> = vec![0, 1, 3, 4, 7, 9, 12, 13, 16, 19];
    println!("shared key {key}, leaked positions {leaked:?}");
    println!(
        "safe output: {} bits ({} unleaked minus {KEY_SLACK_BITS} slack)",
        achievable_output(20, &leaked).unwrap(),
        20 - leaked.len()
    );

    let m = 4;
    let seed = BitString::from_bits((0..20 + m - 1).map(|_| rng.gen::<bool>()));
    let alice = key_recover(&key, &leaked, m, &seed).unwrap();
    let bob = key_recover(&key, &leaked, m, &seed).unwrap();
    println!("public seed {seed}\nalice {alice}, bob {bob}");

    let view = adversary_view(&key, &leaked, m).unwrap();
    println!(
        "eavesdropper's distance from uniform: {:.5} averaged over {} seeds (bound {:.4})",
        view.average_distance_f64, view.seeds_enumerated, view.leftover_hash_bound
    );
    println!("asking for 7 bits: {:?}", key_recover(&key, &leaked, 7, &BitString::zeros(26)).unwrap_err());
}
