//! Deterministic counter-based random streams.
//!
//! Every random quantity in the crate derives from the SplitMix64 output
//! mixer applied to a counter tree rooted at a user seed:
//!
//! ```text
//! child(seed, i) = mix64(seed + (i + 1) * 0x9E3779B97F4A7C15)   (wrapping)
//!
//! mix64(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!           z ^= z >> 27; z *= 0x94D049BB133111EB;
//!           z ^= z >> 31
//! ```
//!
//! Streams nest: `child(child(seed, DOMAIN), index)` and so on. Because
//! every draw is addressed purely by its path from the seed, results are
//! identical however trials are batched, ordered, or spread across workers,
//! and any draw can be recomputed in isolation. The exact derivations used
//! by the simulator are:
//!
//! - input value bit for trial `t`, input position `p`:
//!   `child(child(child(seed, DOMAIN_VALUES), t), p) & 1`
//! - label selection key for trial `t`, input position `p`:
//!   `child(child(child(seed, DOMAIN_LABELS), t), p)`
//! - bootstrap draw `j` of resample `r`:
//!   `child(child(child(seed, DOMAIN_BOOTSTRAP), r), j)`

/// SplitMix64 increment (golden-ratio constant).
pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Sub-stream domain for primary input value bits.
pub const DOMAIN_VALUES: u64 = 1;
/// Sub-stream domain for label injection choices.
pub const DOMAIN_LABELS: u64 = 2;
/// Sub-stream domain for bootstrap resampling.
pub const DOMAIN_BOOTSTRAP: u64 = 3;

/// SplitMix64 output mixer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The `index`-th child stream seed under `seed`.
#[inline]
pub fn child(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}
