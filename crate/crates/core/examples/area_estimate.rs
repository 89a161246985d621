//! Area by throwing random points: pi/4, an annulus, and a custom shape.

use coinkit::sampling::{area_runs, estimate_area, Annulus, FnRegion, QuarterDisk};
use coinkit::SeedStream;

fn main() {
    let seeds = SeedStream::new(b"area".to_vec());
    let mut rng = seeds.stream("single", 0);
    for n in [100, 10_000, 1_000_000] {
        let e = estimate_area(&QuarterDisk, n, 0.95, &mut rng).unwrap();
        println!(
            "quarter disk, {n:>7} points: {:.5} +/- {:.5}, pi/4 = {:.5}",
            e.value,
            e.half_width,
            std::f64::consts::FRAC_PI_4
        );
    }
    let a = Annulus::default();
    let e = estimate_area(&a, 1_000_000, 0.99, &mut rng).unwrap();
    println!("annulus: {:.5} +/- {:.5}, exact {:.5}", e.value, e.half_width, a.area());

    let below_parabola = FnRegion(|x: f64, y: f64| y <= x * x);
    let e = estimate_area(&below_parabola, 1_000_000, 0.95, &mut rng).unwrap();
    println!("under y = x^2: {:.5} +/- {:.5}, exact 1/3", e.value, e.half_width);

    let runs = area_runs(&QuarterDisk, 100_000, 0.95, 200, &seeds).unwrap();
    let covered = runs.iter().filter(|e| e.covers(std::f64::consts::FRAC_PI_4)).count();
    println!("95% intervals containing pi/4: {covered} of 200");
}
