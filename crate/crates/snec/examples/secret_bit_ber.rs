//! Bit error rate of the single-secret-bit scheme under the cut attack.
//! Bit 0 never flips; bit 1 misses with probability at most C'/Q.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snec::channel::{transmit, AdversaryStrategy, CodeParams};
use snec::rank_codes::SecrecyCodebook;
use snec::secret_bit;

fn main() {
    let params = CodeParams::new(3, 1, 1, 3, 9).unwrap();
    let cb = SecrecyCodebook::build(params.c, params.z_i, &params.ext_field()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trials = 20_000u32;
    let (mut false_alarms, mut misses) = (0u32, 0u32);
    for t in 0..trials {
        let bit = t % 2 == 1;
        let enc = secret_bit::encode(bit, &cb, &params, &mut rng).unwrap();
        let (y, _, _) = transmit(&enc.x, &params, &AdversaryStrategy::CutAttack, &mut rng).unwrap();
        let decoded = secret_bit::decode(&y, &cb).unwrap();
        match (bit, decoded) {
            (false, true) => false_alarms += 1,
            (true, false) => misses += 1,
            _ => {}
        }
    }
    let bound = 2.0 / 512.0;
    println!("trials per bit: {}", trials / 2);
    println!("bit-0 false alarms: {false_alarms} (must be 0)");
    println!("bit-1 misses: {misses} (rate {:.2e}, bound C'/Q = {bound:.2e})", f64::from(misses) / f64::from(trials / 2));
    assert_eq!(false_alarms, 0);
}
