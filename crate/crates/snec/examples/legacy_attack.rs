//! Why the public-hash single-bit scheme is broken: Calvin forges the D₁
//! condition inside Bob's row space, so a transmitted 0 never survives as a
//! confident 0.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snec::channel::{transmit, AdversaryStrategy, CodeParams};
use snec::legacy::{self, LegacyOutcome};

fn run(params: CodeParams, label: &str, rng: &mut ChaCha8Rng) {
    let pair = legacy::LegacyHashPair::build(&params, rng).unwrap();

    let mut honest_ok = 0u32;
    for t in 0..200 {
        let bit = t % 2 == 0;
        let x = legacy::pad_codeword(&legacy::encode(bit, &pair, &params, rng), &params);
        let (y, _, _) = transmit(&x, &params, &AdversaryStrategy::None, rng).unwrap();
        let want = if bit { LegacyOutcome::Bit1 } else { LegacyOutcome::Bit0 };
        honest_ok += u32::from(legacy::decode(&y, &pair, &params) == want);
    }

    let strategy = legacy::mimic_attack(&pair, &params).unwrap();
    let mut confident_zero = 0u32;
    for _ in 0..200 {
        let x = legacy::pad_codeword(&legacy::encode(false, &pair, &params, rng), &params);
        let (y, _, _) = transmit(&x, &params, &strategy, rng).unwrap();
        confident_zero += u32::from(legacy::decode(&y, &pair, &params) == LegacyOutcome::Bit0);
    }
    println!("{label}: honest decode {honest_ok}/200, confident 0 under attack {confident_zero}/200");
    assert_eq!(confident_zero, 0);
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    run(CodeParams::new(4, 0, 2, 16, 16).unwrap(), "direct mimic (C=4, Z_O=2)", &mut rng);
    run(CodeParams::new(3, 1, 1, 16, 9).unwrap(), "eavesdrop-assisted (C=3, Z_O=1, Z_I=1)", &mut rng);
}
