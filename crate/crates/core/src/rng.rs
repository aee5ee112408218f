use crate::rational::Rat;

/// Small deterministic PRNG (splitmix64). Used for reproducible random
/// parameter points and test vectors; same seed, same stream, forever.
#[derive(Clone, Debug)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [lo, hi] inclusive.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    pub fn usize(&mut self, lo: usize, hi: usize) -> usize {
        self.int(lo as i64, hi as i64) as usize
    }

    /// Nonzero rational with small numerator and denominator, suitable as a
    /// deformation parameter value away from poles at 0 and 1.
    pub fn parameter(&mut self) -> Rat {
        loop {
            let n = self.int(-9, 9);
            let d = self.int(1, 9);
            if n != 0 && n != d {
                return Rat::new(n, d);
            }
        }
    }

    /// Any small rational, zero allowed.
    pub fn rational(&mut self) -> Rat {
        let n = self.int(-9, 9);
        let d = self.int(1, 9);
        Rat::new(n, d)
    }
}
