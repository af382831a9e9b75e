//! Counter-based random streams.
//!
//! Every draw is a pure function of its key tuple (seed, path, step, slot),
//! so results are bitwise identical under any worker count or evaluation
//! order. Normal variates come from a Box-Muller transform of two keyed
//! uniforms.

use std::f64::consts::TAU;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Scrambles a key tuple into one 64-bit word.
#[inline]
pub fn mix(seed: u64, path: u64, step: u64, slot: u64, draw: u64) -> u64 {
    let mut h = seed ^ 0x853C_49E6_748F_EA9B;
    for p in [path, step, slot, draw] {
        h = splitmix64(h ^ p.wrapping_mul(GOLDEN)).wrapping_add(GOLDEN);
    }
    splitmix64(h)
}

/// Uniform in the open interval (0, 1).
#[inline]
pub fn uniform(seed: u64, path: u64, step: u64, slot: u64) -> f64 {
    to_unit(mix(seed, path, step, slot, 0))
}

#[inline]
fn to_unit(x: u64) -> f64 {
    // 53 mantissa bits, offset by half an ulp so 0 and 1 are excluded.
    ((x >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Standard normal draw keyed by (seed, path, step, slot).
#[inline]
pub fn standard_normal(seed: u64, path: u64, step: u64, slot: u64) -> f64 {
    let u1 = to_unit(mix(seed, path, step, slot, 0));
    let u2 = to_unit(mix(seed, path, step, slot, 1));
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// FNV-1a over the bit patterns of a float sequence. Used to fingerprint the
/// Gaussian draws a trajectory consumed so replays can be checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DrawHash(u64);

impl DrawHash {
    pub fn new() -> Self {
        DrawHash(0xCBF2_9CE4_8422_2325)
    }

    #[inline]
    pub fn absorb(&mut self, x: f64) {
        let mut h = self.0 ^ x.to_bits();
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
        self.0 = h;
    }

    pub fn value(&self) -> u64 {
        self.0
    }
}

impl Default for DrawHash {
    fn default() -> Self {
        Self::new()
    }
}
