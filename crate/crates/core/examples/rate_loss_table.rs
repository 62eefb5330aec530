//! Rate loss of ESS and CCDM at the 2.5 bit/1D operating point (16-PAM, R_c = 5/6).
//!
//! Run: cargo run --release --example rate_loss_table

use pas_shaping::shaping::{
    parse_rational, plan_rate, DistributionMatcher, Shaper, ShapingConfig,
};

fn main() -> pas_shaping::Result<()> {
    let target = parse_rational("2.5")?;
    let fec = parse_rational("5/6")?;
    println!("{:>6} {:>5} {:>7} {:>9} {:>12} {:>12}", "N", "k", "shaper", "E_max", "H(A)", "rate loss");
    for n in [50usize, 100, 200, 3600] {
        let plan = plan_rate(target, 4, fec, n)?;
        let mut configs = vec![ShapingConfig::ccdm(plan.clone())?];
        if n <= 400 {
            configs.insert(0, ShapingConfig::ess(plan.clone())?);
        }
        for config in configs {
            let shaper = Shaper::from_config(&config)?;
            let loss = shaper.rate_loss();
            let h = loss + plan.k as f64 / n as f64;
            let emax = config.e_max().map(|e| e.to_string()).unwrap_or_else(|| "-".into());
            println!("{n:>6} {:>5} {:>7} {emax:>9} {h:>12.6} {loss:>12.6}", plan.k, shaper.name());
        }
    }
    Ok(())
}
