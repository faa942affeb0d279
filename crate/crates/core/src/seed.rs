use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The generator type used for every stochastic operation.
pub type Rng = ChaCha8Rng;

/// Identifies the single random stream of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPolicy {
    pub base_seed: u64,
    pub replicate_index: u64,
}

impl SeedPolicy {
    pub fn new(base_seed: u64, replicate_index: u64) -> Self {
        SeedPolicy {
            base_seed,
            replicate_index,
        }
    }

    /// Replicate `r` of an experiment uses seed `base_seed + r`.
    pub fn stream_seed(&self) -> u64 {
        splitmix64(self.base_seed.wrapping_add(self.replicate_index))
    }

    pub fn rng(&self) -> Rng {
        Rng::seed_from_u64(self.stream_seed())
    }
}

/// Derives an independent child generator; used to split work across threads
/// without making results depend on scheduling.
pub fn child_rng<R: rand::Rng + ?Sized>(parent: &mut R) -> Rng {
    Rng::seed_from_u64(parent.random::<u64>())
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    #[test]
    fn equal_policies_give_equal_streams() {
        let a: Vec<u64> = (0..4).map({
            let mut r = SeedPolicy::new(3, 1).rng();
            move |_| r.random()
        }).collect();
        let b: Vec<u64> = (0..4).map({
            let mut r = SeedPolicy::new(3, 1).rng();
            move |_| r.random()
        }).collect();
        assert_eq!(a, b);
        let mut c = SeedPolicy::new(3, 2).rng();
        assert_ne!(a[0], c.random::<u64>());
    }
}
