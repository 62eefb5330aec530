//! Rate adaptation in PAS: how a target information rate splits between
//! the shaper and the sign bits for several modulation orders and FEC rates.
//!
//! Run: cargo run --release --example rate_plan

use num_rational::Rational64;
use pas_shaping::shaping::rate::{extra_sign_bits, parity_sign_bits};
use pas_shaping::shaping::{gamma, parse_rational, plan_rate};

fn main() -> pas_shaping::Result<()> {
    println!("{:>2} {:>5} {:>6} {:>8} {:>8} {:>8}", "m", "R_c", "gamma", "parity", "extra", "signs");
    for m in 3..=5u32 {
        for fec in ["2/3", "3/4", "5/6"] {
            let rc = parse_rational(fec)?;
            let n = 120;
            // parity alone fills every sign bit when gamma <= 0
            let g = match gamma(m, rc) {
                Ok(g) => g.to_string(),
                Err(_) => "-".to_string(),
            };
            let (p, e) = (parity_sign_bits(m, rc, n), extra_sign_bits(m, rc, n));
            // every sign bit is either parity or an extra information bit
            assert_eq!(p + e, Rational64::from_integer(n as i64));
            println!("{m:>2} {fec:>5} {g:>6} {p:>8} {e:>8} {n:>8}");
        }
    }
    let plan = plan_rate(parse_rational("2.5")?, 4, parse_rational("5/6")?, 200)?;
    println!(
        "\n16-PAM, R = 2.5, R_c = 5/6, N = 200: gamma = {}, R_s = {}, k = {}, achieved {} bit/1D",
        plan.gamma,
        plan.target_shaping_rate,
        plan.k,
        plan.achieved_rate()
    );
    Ok(())
}
