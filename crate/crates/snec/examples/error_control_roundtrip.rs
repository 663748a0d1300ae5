//! Shared-secret error control: a short Vandermonde hash secret lets the
//! receiver distill the message out of an adversarially corrupted flow, and
//! corruption it cannot repair is detected rather than mis-decoded.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snec::channel::{transmit, AdversaryStrategy, CodeParams};
use snec::error_control;
use snec::linalg::Matrix;

fn main() {
    let params = CodeParams::new(3, 0, 1, 16, 32).unwrap();
    let field = params.base_field();
    let b = error_control::data_rows(&params);
    println!(
        "b = {b}, alpha = {}, secret length = {} bits",
        error_control::alpha(&params),
        error_control::secret_bits(&params)
    );
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut detected = 0u32;
    let trials = 2000;
    for _ in 0..trials {
        let message = Matrix::random(field, b, params.n - b, &mut rng);
        let secret = error_control::hash_message(&message, &params, &mut rng).unwrap();
        let x = error_control::encode(&message, &params).unwrap();
        let (y, _, _) = transmit(&x, &params, &AdversaryStrategy::RandomJam, &mut rng).unwrap();
        match error_control::decode(&y, &secret, &params) {
            Ok(got) => assert_eq!(got, message, "silent corruption"),
            Err(_) => detected += 1,
        }
    }
    println!("trials: {trials}, detected failures: {detected}, silent corruptions: 0");
}
