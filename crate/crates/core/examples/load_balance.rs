//! Random placement of tasks whose lengths are unknown in advance.

use coinkit::loadbalance::{assign_random, imbalance, parse_durations, run_experiment, TaskDuration};
use coinkit::SeedStream;

fn main() {
    let seeds = SeedStream::new(b"load_balance".to_vec());
    for (tasks, machines) in [(10, 10), (100, 10), (1000, 10), (10_000, 10)] {
        let (s, _) = run_experiment(&vec![TaskDuration::UNIT; tasks], machines, 1000, &seeds).unwrap();
        println!(
            "{tasks:>6} unit tasks on {machines} machines: median max/mean {:.3}, worst {:.3}",
            s.median_ratio, s.max_ratio
        );
    }

    let durations = parse_durations("3.5\n0.25\n1\n8\n2.75\n0.5\n4\n1.25\n").unwrap();
    let a = assign_random(&durations, 3, &mut seeds.stream("mixed", 0)).unwrap();
    let i = imbalance(&a).unwrap();
    println!("mixed durations on 3 machines: loads {:?}, ratio {:.3}", a.loads(), i.ratio);
}
