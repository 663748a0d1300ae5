//! The rank lemma behind the bit decoder: a uniform C'×C' matrix over F_Q
//! keeps full rank after fixed projections with probability ≥ 1 − C'/Q.
//! Exhaustive at Q = 8, Monte Carlo at Q = 512.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snec::fields::{BaseField, ExtField};
use snec::secret_bit;

fn main() {
    let small = ExtField::new(BaseField::new(1).unwrap(), 3).unwrap(); // Q = 8
    for (mu, delta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let (full, total) = secret_bit::lemma1_census(&small, 2, mu, delta);
        println!(
            "Q=8  mu={mu} delta={delta}: full rank {full}/{total} (failure {:.4}, bound C'/Q = 0.25)",
            1.0 - full as f64 / total as f64
        );
    }

    let big = ExtField::new(BaseField::new(3).unwrap(), 3).unwrap(); // Q = 512
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trials = 100_000;
    let full = secret_bit::lemma1_mc(&big, 2, 0, 0, trials, &mut rng);
    println!(
        "Q=512 mu=0 delta=0: full rank {full}/{trials} (failure {:.2e}, bound {:.2e})",
        1.0 - full as f64 / trials as f64,
        2.0 / 512.0
    );
}
