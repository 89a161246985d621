//! Sieve of Eratosthenes, exact prime counts and an unbounded prime iterator.

/// `is_prime[i]` for `0 <= i <= limit`.
pub fn sieve(limit: usize) -> Vec<bool> {
    let mut is_prime = vec![true; limit + 1];
    is_prime[0] = false;
    if limit >= 1 {
        is_prime[1] = false;
    }
    let mut p = 2;
    while p * p <= limit {
        if is_prime[p] {
            for k in (p * p..=limit).step_by(p) {
                is_prime[k] = false;
            }
        }
        p += 1;
    }
    is_prime
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    sieve(limit as usize)
        .into_iter()
        .enumerate()
        .filter_map(|(i, p)| p.then_some(i as u64))
        .collect()
}

/// `pi[x]` = number of primes `<= x`, for `0 <= x <= limit`.
pub fn prime_pi_table(limit: usize) -> Vec<u32> {
    let mut count = 0;
    sieve(limit)
        .into_iter()
        .map(|p| {
            count += p as u32;
            count
        })
        .collect()
}

const SEGMENT: u64 = 1 << 16;

/// Successive primes 2, 3, 5, 7, ... from a segmented sieve.
#[derive(Debug, Clone)]
pub struct Primes {
    next_segment: u64,
    buf: Vec<u64>,
    pos: usize,
    base: Vec<u64>,
    base_limit: u64,
}

impl Primes {
    pub fn new() -> Self {
        Self {
            next_segment: 0,
            buf: Vec::new(),
            pos: 0,
            base: Vec::new(),
            base_limit: 0,
        }
    }

    fn fill(&mut self) {
        let lo = self.next_segment;
        let hi = lo.saturating_add(SEGMENT);
        let needed = hi.isqrt() + 1;
        if self.base_limit < needed {
            self.base_limit = needed.max(self.base_limit * 2);
            self.base = primes_up_to(self.base_limit);
        }
        let mut composite = vec![false; (hi - lo) as usize];
        for &p in &self.base {
            if p * p >= hi {
                break;
            }
            let first = (p * p).max(lo.div_ceil(p) * p);
            for k in (first..hi).step_by(p as usize) {
                composite[(k - lo) as usize] = true;
            }
        }
        self.buf.clear();
        self.buf.extend(
            composite
                .iter()
                .enumerate()
                .map(|(i, &c)| (lo + i as u64, c))
                .filter(|&(k, c)| k >= 2 && !c)
                .map(|(k, _)| k),
        );
        self.pos = 0;
        self.next_segment = hi;
    }
}

impl Default for Primes {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for Primes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos == self.buf.len() {
            if self.next_segment == u64::MAX {
                return None;
            }
            self.fill();
        }
        self.pos += 1;
        Some(self.buf[self.pos - 1])
    }
}
