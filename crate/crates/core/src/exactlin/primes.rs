//! Random 31-bit primes for modular rank computation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const LOW: u64 = 1 << 30;
const HIGH: u64 = 1 << 31;

/// Deterministic Miller-Rabin, exact for `n < 3_215_031_751`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n % p == 0 {
            return n == p;
        }
    }
    assert!(n < 3_215_031_751, "primality test only exact below 3.2e9");
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Two distinct primes in `(2^30, 2^31)` drawn from a seeded generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePair {
    pub first: u64,
    pub second: u64,
}

impl PrimePair {
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let first = random_prime(&mut rng);
        let mut second = random_prime(&mut rng);
        while second == first {
            second = random_prime(&mut rng);
        }
        PrimePair { first, second }
    }
}

fn random_prime(rng: &mut impl Rng) -> u64 {
    loop {
        let candidate = rng.gen_range(LOW + 1..HIGH) | 1;
        if is_prime(candidate) {
            return candidate;
        }
    }
}
