//! Deterministic seed derivation: every random stream is a pure function
//! of the master seed, a stream tag and integer indices.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 output for state `x`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a of a tag.
pub fn tag_hash(tag: &str) -> u64 {
    tag.bytes()
        .fold(0xCBF2_9CE4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01B3))
}

pub fn derive(master: u64, tag: &str, indices: &[u64]) -> u64 {
    indices
        .iter()
        .fold(splitmix64(master ^ tag_hash(tag)), |s, &i| splitmix64(s ^ splitmix64(i)))
}

pub fn topology_seed(master: u64, topo: usize) -> u64 {
    derive(master, "topo", &[topo as u64])
}

/// Seed of a named stream (`env`, `init`, `scheme`) of one trial.
pub fn trial_seed(master: u64, stream: &str, topo: usize, trial: usize) -> u64 {
    derive(master, stream, &[topo as u64, trial as u64])
}
