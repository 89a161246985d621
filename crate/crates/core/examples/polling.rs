//! Why 400 people are enough, whatever the population.

use coinkit::sampling::{poll_coverage, poll_simulate, required_samples, BoundMethod};
use coinkit::SeedStream;

fn main() {
    let seeds = SeedStream::new(b"polling".to_vec());
    let e = poll_simulate(0.57, 400, &mut seeds.stream("one", 0)).unwrap();
    println!("one poll of 400: {:.3} (Hoeffding 95% half-width {:.3})", e.value, e.half_width);

    let c = poll_coverage(0.57, 400, 0.05, 10_000, &seeds).unwrap();
    println!("within 5 points in {} of {} polls ({:.4})", c.within, c.runs, c.fraction);

    println!("samples for +/-epsilon at 95%:");
    println!("  epsilon   normal  hoeffding");
    for eps in [0.1, 0.05, 0.03, 0.01] {
        println!(
            "  {eps:<8}  {:>6}  {:>9}",
            required_samples(eps, 0.05, BoundMethod::Normal).unwrap(),
            required_samples(eps, 0.05, BoundMethod::Hoeffding).unwrap()
        );
    }
}
