use crate::arith::{is_prime_u64, small_primes};

const SEGMENT: u64 = 1 << 15;

/// Unbounded increasing stream of primes, sieved one segment at a time.
#[derive(Debug, Clone)]
pub struct PrimeStream {
    buf: Vec<u64>,
    pos: usize,
    next_lo: u64,
}

impl PrimeStream {
    pub fn new() -> Self {
        Self {
            buf: Vec::new(),
            pos: 0,
            next_lo: 2,
        }
    }

    fn refill(&mut self) {
        let lo = self.next_lo;
        let hi = lo.saturating_add(SEGMENT);
        self.buf.clear();
        self.pos = 0;
        self.next_lo = hi;
        // The 16-bit prime table sieves any segment below 2^32.
        if hi > 1 << 32 {
            self.buf.extend((lo..hi).filter(|&n| is_prime_u64(n)));
            return;
        }
        let mut composite = vec![false; (hi - lo) as usize];
        for &p in small_primes() {
            let p = p as u64;
            if p * p >= hi {
                break;
            }
            let first = (p * p).max(lo.div_ceil(p) * p);
            let mut j = first;
            while j < hi {
                composite[(j - lo) as usize] = true;
                j += p;
            }
        }
        self.buf
            .extend((lo..hi).filter(|&n| !composite[(n - lo) as usize]));
    }
}

impl Default for PrimeStream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos == self.buf.len() {
            if self.next_lo == u64::MAX {
                return None;
            }
            self.refill();
        }
        self.pos += 1;
        Some(self.buf[self.pos - 1])
    }
}
