//! PAS and uniform BICM chains through the optical front end and back.

mod common;

use std::sync::Arc;

use pas_shaping::pas::{compute_pam_llrs, LdpcCode, PamConstellation, PasCodec, UniformCodec};
use pas_shaping::shaping::{
    parse_rational, plan_rate, BitBlock, DistributionMatcher, Shaper, ShapingConfig,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shaper(ess: bool, n: usize, code: &LdpcCode) -> pas_shaping::Result<Shaper> {
    let plan = plan_rate(parse_rational("2.5")?, 4, code.rate(), n)?;
    let config = if ess { ShapingConfig::ess(plan) } else { ShapingConfig::ccdm(plan) };
    Shaper::from_config(&config?)
}

#[test]
fn noiseless_optical_loopback_ccdm() {
    let (sent, errors) = common::end_to_end("awgn-ccdm-200.cfg", 3000, 1).unwrap();
    assert!(sent >= 3000);
    assert_eq!(errors, 0);
}

#[test]
fn noiseless_optical_loopback_uniform() {
    let (sent, errors) = common::end_to_end("awgn-uniform.cfg", 2000, 2).unwrap();
    assert!(sent >= 2000);
    assert_eq!(errors, 0);
}

#[test]
fn decoder_corrects_moderate_noise() {
    // 22 dB per real dimension sits well above the 2.5 bit/1D threshold
    let code = common::r56_code();
    let s = shaper(true, 60, &code).unwrap();
    let dist = s.distribution();
    let codec = PasCodec::new(s, code).unwrap();
    let constellation = PamConstellation::shaped(codec.labeling().clone(), &dist).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut hard_errors = 0;
    for f in 0..10u64 {
        let info = BitBlock::random(codec.layout().info_bits(), &mut rng);
        let frame = codec.transmit(&info).unwrap();
        let tx: Vec<f64> = frame.symbols.iter().map(|&v| v as f64).collect();
        let rx = pas_shaping::channel::awgn_real(&tx, 22.0, f);
        let power = tx.iter().map(|x| x * x).sum::<f64>() / tx.len() as f64;
        let llrs = compute_pam_llrs(&rx, power / 10f64.powf(2.2), &constellation).unwrap();
        hard_errors += frame.symbols.iter().zip(&rx).filter(|(&t, &r)| (r - t as f64).abs() > 1.0).count();
        let out = codec.receive_llrs(&llrs).unwrap();
        assert!(out.converged);
        assert_eq!(out.info, info);
    }
    assert!(hard_errors > 0, "noise too weak to exercise the decoder");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn genie_receive_inverts_transmit(ess in any::<bool>(), n in prop::sample::select(vec![8usize, 12, 20, 24, 40, 60, 120]), seed in any::<u64>()) {
        let code = common::r56_code();
        let s = shaper(ess, n, &code);
        // short CCDM blocks cannot carry the planned bits
        prop_assume!(s.is_ok());
        let codec = PasCodec::new(s.unwrap(), code).unwrap();
        let info = BitBlock::random(codec.layout().info_bits(), &mut ChaCha8Rng::seed_from_u64(seed));
        let frame = codec.transmit(&info).unwrap();
        prop_assert_eq!(frame.symbols.len(), codec.layout().symbols());
        prop_assert_eq!(&codec.receive_symbols(&frame.symbols).unwrap(), &info);
        for cw in &frame.codewords {
            prop_assert!(codec.code().h().is_codeword(cw));
        }
        prop_assert_eq!(codec.receive_codewords(&frame.codewords).unwrap(), info);
    }

    #[test]
    fn uniform_bicm_roundtrip(m in 2u32..=5, seed in any::<u64>()) {
        let code = Arc::new(LdpcCode::from_alist_file(&common::manifest_dir().join("fixtures/ldpc_r56_n480.alist")).unwrap());
        prop_assume!(code.length() % m as usize == 0);
        let codec = UniformCodec::new(m, code).unwrap();
        let info = BitBlock::random(codec.info_bits_per_codeword() * 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let symbols = codec.transmit(&info).unwrap();
        prop_assert_eq!(codec.receive_symbols(&symbols).unwrap(), info);
    }
}
