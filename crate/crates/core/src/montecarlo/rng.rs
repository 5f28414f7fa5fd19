//! Counter-based random streams: the ChaCha key comes from the master seed and
//! every (sample size, replication) pair gets its own 64-bit stream, so a
//! replication's draws do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream id of replication `r` at sample size `n`.
pub fn stream_id(master_seed: u64, n: u64, r: u64) -> u64 {
    splitmix64(splitmix64(master_seed ^ splitmix64(n)) ^ splitmix64(r.wrapping_add(0x51_7cc1_b727_220a)))
}

fn key(master_seed: u64) -> [u8; 32] {
    let mut k = [0u8; 32];
    let mut s = master_seed;
    for chunk in k.chunks_mut(8) {
        s = splitmix64(s);
        chunk.copy_from_slice(&s.to_le_bytes());
    }
    k
}

pub fn stream_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(key(master_seed));
    rng.set_stream(stream);
    rng
}

pub fn replication_rng(master_seed: u64, n: u64, r: u64) -> ChaCha8Rng {
    stream_rng(master_seed, stream_id(master_seed, n, r))
}
