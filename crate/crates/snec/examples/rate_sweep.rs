//! Net rate of the composed scheme as packet length grows: the fixed
//! k-bit header amortizes away and the rate climbs toward C − Z_O − Z_I.

use snec::channel::CodeParams;
use snec::full_scheme::FullCodeLayout;

fn main() {
    println!("{:>6} {:>7} {:>12} {:>8}", "n", "n'", "net rate", "loss");
    for n in [510, 600, 900, 1500, 3000, 6000, 12000] {
        let params = CodeParams::new(3, 1, 1, 4, n).unwrap();
        let lay = FullCodeLayout::new(&params).unwrap();
        let rep = lay.rate_report(&params);
        println!(
            "{n:>6} {:>7} {:>6}/{:<5} {:>8.4}",
            lay.n_prime,
            rep.net_num,
            rep.net_den,
            rep.loss_num as f64 / rep.loss_den as f64
        );
    }
    println!("gross rate R = 1; loss is O(log q / n)");
}
