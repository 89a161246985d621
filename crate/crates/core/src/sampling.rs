//! Monte Carlo area estimation, poll simulation and sample-size calculators.
//!
//! Both calculators ignore population size: the error of a sample mean
//! depends only on the number of samples.
//!
//! | (epsilon, delta) | Hoeffding | normal approximation |
//! |---|---|---|
//! | (0.05, 0.05) | 738 | 385 |
//!
//! Hoeffding is a guarantee for every sample size; the normal figure is the
//! usual polling rule of thumb at `p = 0.5`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::seed::SeedStream;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplingError {
    #[error("{name} must lie in {range}, got {value}")]
    OutOfRange {
        name: &'static str,
        range: &'static str,
        value: String,
    },
}

fn check_open_unit(name: &'static str, v: f64) -> Result<(), SamplingError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(SamplingError::OutOfRange {
            name,
            range: "(0, 1)",
            value: v.to_string(),
        })
    }
}

fn check_positive(name: &'static str, n: u64) -> Result<(), SamplingError> {
    if n >= 1 {
        Ok(())
    } else {
        Err(SamplingError::OutOfRange {
            name,
            range: "[1, inf)",
            value: n.to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    #[default]
    Hoeffding,
    Normal,
}

impl std::str::FromStr for BoundMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hoeffding" => Ok(BoundMethod::Hoeffding),
            "normal" => Ok(BoundMethod::Normal),
            other => Err(format!("unknown method {other:?}; expected hoeffding or normal")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub half_width: f64,
    pub confidence: f64,
    pub samples: u64,
    pub method: BoundMethod,
}

impl Estimate {
    pub fn covers(&self, truth: f64) -> bool {
        (self.value - truth).abs() <= self.half_width
    }
}

/// `sqrt(ln(2 / (1 - confidence)) / (2n))`.
pub fn hoeffding_half_width(n: u64, confidence: f64) -> f64 {
    ((2.0 / (1.0 - confidence)).ln() / (2.0 * n as f64)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundingBox {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl BoundingBox {
    pub const UNIT: BoundingBox = BoundingBox {
        x0: 0.0,
        y0: 0.0,
        x1: 1.0,
        y1: 1.0,
    };

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }
}

/// A planar shape known only through a membership test.
pub trait Region: Sync {
    fn contains(&self, x: f64, y: f64) -> bool;

    fn bounding_box(&self) -> BoundingBox {
        BoundingBox::UNIT
    }
}

/// `x^2 + y^2 <= 1` inside the unit square; area `pi / 4`.
#[derive(Debug, Clone, Copy)]
pub struct QuarterDisk;

impl Region for QuarterDisk {
    fn contains(&self, x: f64, y: f64) -> bool {
        x * x + y * y <= 1.0
    }
}

/// The whole box.
#[derive(Debug, Clone, Copy)]
pub struct FullBox(pub BoundingBox);

impl Region for FullBox {
    fn contains(&self, _: f64, _: f64) -> bool {
        true
    }

    fn bounding_box(&self) -> BoundingBox {
        self.0
    }
}

/// Ring centred in the unit square.
#[derive(Debug, Clone, Copy)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * (self.outer * self.outer - self.inner * self.inner)
    }
}

impl Default for Annulus {
    fn default() -> Self {
        Self {
            inner: 0.25,
            outer: 0.5,
        }
    }
}

impl Region for Annulus {
    fn contains(&self, x: f64, y: f64) -> bool {
        let r2 = (x - 0.5).powi(2) + (y - 0.5).powi(2);
        r2 >= self.inner * self.inner && r2 <= self.outer * self.outer
    }
}

/// Any closure as a region of the unit square.
pub struct FnRegion<F>(pub F);

impl<F: Fn(f64, f64) -> bool + Sync> Region for FnRegion<F> {
    fn contains(&self, x: f64, y: f64) -> bool {
        (self.0)(x, y)
    }
}

/// Area estimate from a hit count.
pub fn area_from_hits(hits: u64, n: u64, bbox: BoundingBox, confidence: f64) -> Estimate {
    let area = bbox.area();
    Estimate {
        value: hits as f64 / n as f64 * area,
        half_width: hoeffding_half_width(n, confidence) * area,
        confidence,
        samples: n,
        method: BoundMethod::Hoeffding,
    }
}

/// Samples `n` uniform points from the bounding box and scales the hit
/// fraction by its area.
pub fn estimate_area<G: Region + ?Sized, R: Rng + ?Sized>(
    region: &G,
    n: u64,
    confidence: f64,
    rng: &mut R,
) -> Result<Estimate, SamplingError> {
    check_positive("n", n)?;
    check_open_unit("confidence", confidence)?;
    let b = region.bounding_box();
    let hits = (0..n)
        .filter(|_| {
            // gen::<f64>() has 53 bits of precision in [0, 1)
            let x = b.x0 + rng.gen::<f64>() * (b.x1 - b.x0);
            let y = b.y0 + rng.gen::<f64>() * (b.y1 - b.y0);
            region.contains(x, y)
        })
        .count() as u64;
    Ok(area_from_hits(hits, n, b, confidence))
}

/// Confidence attached to poll estimates.
pub const POLL_CONFIDENCE: f64 = 0.95;

/// Asks `n` people, each a coin with bias `true_fraction`.
pub fn poll_simulate<R: Rng + ?Sized>(
    true_fraction: f64,
    n: u64,
    rng: &mut R,
) -> Result<Estimate, SamplingError> {
    check_positive("n", n)?;
    if !(0.0..=1.0).contains(&true_fraction) {
        return Err(SamplingError::OutOfRange {
            name: "true_fraction",
            range: "[0, 1]",
            value: true_fraction.to_string(),
        });
    }
    let yes = (0..n).filter(|_| rng.gen_bool(true_fraction)).count() as u64;
    Ok(Estimate {
        value: yes as f64 / n as f64,
        half_width: hoeffding_half_width(n, POLL_CONFIDENCE),
        confidence: POLL_CONFIDENCE,
        samples: n,
        method: BoundMethod::Hoeffding,
    })
}

/// Two-sided normal quantiles `z_{1 - delta/2}` by `delta`.
const Z_TABLE: [(f64, f64); 7] = [
    (0.2, 1.2816),
    (0.1, 1.6449),
    (0.05, 1.96),
    (0.02, 2.3263),
    (0.01, 2.5758),
    (0.005, 2.8070),
    (0.001, 3.2905),
];

/// `z_{1 - delta/2}`: the table value when `delta` is listed, otherwise the
/// standard normal inverse CDF.
pub fn normal_quantile(delta: f64) -> f64 {
    Z_TABLE
        .iter()
        .find(|(d, _)| (d - delta).abs() < 1e-12)
        .map(|&(_, z)| z)
        .unwrap_or_else(|| {
            Normal::new(0.0, 1.0)
                .expect("standard normal")
                .inverse_cdf(1.0 - delta / 2.0)
        })
}

/// Samples needed for `P(|mean - p| > epsilon) <= delta`.
///
/// Hoeffding: `ceil(ln(2/delta) / (2 epsilon^2))`. Normal approximation at
/// the worst case `p = 1/2`: `ceil(z^2 / (4 epsilon^2))`.
pub fn required_samples(epsilon: f64, delta: f64, method: BoundMethod) -> Result<u64, SamplingError> {
    check_open_unit("epsilon", epsilon)?;
    check_open_unit("delta", delta)?;
    let n = match method {
        BoundMethod::Hoeffding => (2.0 / delta).ln() / (2.0 * epsilon * epsilon),
        BoundMethod::Normal => normal_quantile(delta).powi(2) * 0.25 / (epsilon * epsilon),
    };
    Ok(n.ceil() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coverage {
    pub runs: u64,
    /// Runs with `|estimate - truth| <= epsilon`.
    pub within: u64,
    pub fraction: f64,
}

/// Repeats a poll `runs` times, run `i` drawing from stream `("poll", i)`.
pub fn poll_coverage(
    true_fraction: f64,
    n: u64,
    epsilon: f64,
    runs: u64,
    seeds: &SeedStream,
) -> Result<Coverage, SamplingError> {
    check_positive("runs", runs)?;
    let estimates = poll_runs(true_fraction, n, runs, seeds)?;
    let within = estimates
        .iter()
        .filter(|e| (e.value - true_fraction).abs() <= epsilon)
        .count() as u64;
    Ok(Coverage {
        runs,
        within,
        fraction: within as f64 / runs as f64,
    })
}

pub fn poll_runs(
    true_fraction: f64,
    n: u64,
    runs: u64,
    seeds: &SeedStream,
) -> Result<Vec<Estimate>, SamplingError> {
    (0..runs)
        .into_par_iter()
        .map(|i| poll_simulate(true_fraction, n, &mut seeds.stream("poll", i)))
        .collect()
}

/// Repeats an area estimate `runs` times, run `i` drawing from stream
/// `("area", i)`.
pub fn area_runs<G: Region + ?Sized>(
    region: &G,
    n: u64,
    confidence: f64,
    runs: u64,
    seeds: &SeedStream,
) -> Result<Vec<Estimate>, SamplingError> {
    (0..runs)
        .into_par_iter()
        .map(|i| estimate_area(region, n, confidence, &mut seeds.stream("area", i)))
        .collect()
}
