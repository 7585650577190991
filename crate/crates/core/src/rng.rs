//! Reproducible random streams.
//!
//! Every Monte Carlo sample draws from its own ChaCha8 stream, keyed by
//! `(master_seed, stream_index)`. Because ChaCha is counter based, a stream
//! can be materialised anywhere without replaying the ones before it, so a
//! parallel run produces exactly the draws a serial run would.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct SeededRng {
    master_seed: u64,
    stream_index: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            inner,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// A Bernoulli coin for success probability `p`, quantised to 2^-32.
    ///
    /// `p <= 0` never fires and `p >= 1` always does.
    #[inline]
    pub fn coin(p: f64) -> Coin {
        let threshold = if p <= 0.0 {
            0
        } else if p >= 1.0 {
            1u64 << 32
        } else {
            (p * 4_294_967_296.0).round() as u64
        };
        Coin { threshold }
    }

    #[inline]
    pub fn flip(&mut self, coin: Coin) -> bool {
        (self.inner.next_u32() as u64) < coin.threshold
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Coin {
    threshold: u64,
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
