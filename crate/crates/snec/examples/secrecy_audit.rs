//! Exhaustively verify perfect secrecy of the coset codebook at tiny
//! parameters: for every wiretap matrix B and every message pair, the
//! distribution of W = B·φ(T[S;N]) over the noise must be identical.

use snec::channel::CodeParams;
use snec::rank_codes::SecrecyCodebook;
use snec::secrecy;

fn main() {
    let params = CodeParams::new(3, 1, 0, 1, 9).unwrap();
    let cb = SecrecyCodebook::build(params.c, params.z_i, &params.ext_field()).unwrap();
    let report = secrecy::audit(&cb).unwrap();
    println!(
        "q=2 C=3 Z_I=1: {} wiretap matrices x {} messages audited",
        report.b_count, report.message_count
    );
    println!("violations: {}", report.violations.len());
    assert!(report.perfectly_secret());
    println!("perfect secrecy holds for every B");
}
