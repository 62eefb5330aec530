//! Brute-force enumeration oracles for the ESS and CCDM codebooks.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use pas_shaping::shaping::{
    ccdm_composition_for_bits, ccdm_count, ccdm_num_bits, min_emax_for_bits, AmplitudeAlphabet,
    AmplitudeBlock, BitBlock, CcdmCodebook, Composition, EnergyTrellis,
};
use proptest::prelude::*;

/// Every sequence of `A^n` in lexicographic order.
fn all_sequences(alphabet: &[u32], n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                alphabet.iter().map(move |&a| {
                    let mut p = prefix.clone();
                    p.push(a);
                    p
                })
            })
            .collect();
    }
    out
}

fn energy(seq: &[u32]) -> u64 {
    seq.iter().map(|&a| (a as u64).pow(2)).sum()
}

fn bounded_set(alphabet: &AmplitudeAlphabet, n: usize, e_max: u64) -> Vec<Vec<u32>> {
    all_sequences(alphabet.amplitudes(), n)
        .into_iter()
        .filter(|s| energy(s) <= e_max)
        .collect()
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    (0..=n)
        .flat_map(|first| {
            compositions(n - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn permutations_of(alphabet: &[u32], counts: &[usize]) -> Vec<Vec<u32>> {
    let n: usize = counts.iter().sum();
    all_sequences(&alphabet[..counts.len()], n)
        .into_iter()
        .filter(|s| {
            counts
                .iter()
                .enumerate()
                .all(|(i, &c)| s.iter().filter(|&&a| a == alphabet[i]).count() == c)
        })
        .collect()
}

/// Small (m, N, E_max) cases with the full grid of energy bounds.
fn ess_cases(max_n: usize) -> Vec<(AmplitudeAlphabet, usize, u64)> {
    let mut cases = Vec::new();
    for m in 2..=3u32 {
        let alphabet = AmplitudeAlphabet::new(m).unwrap();
        let amax = alphabet.max_amplitude() as u64;
        for n in 1..=max_n {
            if m == 3 && n > 6 {
                continue;
            }
            let mut e = n as u64;
            while e <= n as u64 * amax * amax {
                cases.push((alphabet.clone(), n, e));
                e += 8;
            }
        }
    }
    cases
}

#[test]
fn trellis_count_matches_enumeration() {
    for (alphabet, n, e_max) in ess_cases(8) {
        let t = EnergyTrellis::build(&alphabet, n, e_max).unwrap();
        let brute = bounded_set(&alphabet, n, e_max).len();
        assert_eq!(t.num_sequences(), &BigUint::from(brute), "m={} n={n} e={e_max}", alphabet.m());
    }
}

#[test]
fn trellis_codebook_is_lexicographic_enumeration() {
    for (alphabet, n, e_max) in ess_cases(6) {
        let t = EnergyTrellis::build(&alphabet, n, e_max).unwrap();
        for (i, seq) in bounded_set(&alphabet, n, e_max).iter().enumerate() {
            let index = BigUint::from(i);
            assert_eq!(&t.sequence_at(&index).unwrap().0, seq);
            assert_eq!(t.index_of(&AmplitudeBlock(seq.clone())).unwrap(), index);
        }
    }
}

#[test]
fn ess_bits_roundtrip_every_index() {
    for (alphabet, n, e_max) in ess_cases(8) {
        let t = EnergyTrellis::build(&alphabet, n, e_max).unwrap();
        if t.num_sequences() > &BigUint::from(1u32 << 12) {
            continue;
        }
        let k = t.num_bits() as usize;
        let mut prev: Option<Vec<u32>> = None;
        for i in 0..1u64 << k {
            let bits = BitBlock::from_index(&BigUint::from(i), k).unwrap();
            let seq = t.encode(&bits).unwrap();
            assert!(seq.energy() <= e_max);
            assert_eq!(t.decode(&seq).unwrap(), bits);
            if let Some(p) = &prev {
                assert!(p < &seq.0, "encoder must be strictly monotone");
            }
            prev = Some(seq.0);
        }
    }
}

#[test]
fn full_distribution_matches_histogram() {
    for (alphabet, n, e_max) in ess_cases(6) {
        let t = EnergyTrellis::build(&alphabet, n, e_max).unwrap();
        let set = bounded_set(&alphabet, n, e_max);
        let exact = t.amplitude_distribution_exact();
        let sum: BigRational = exact.iter().cloned().sum();
        assert_eq!(sum, BigRational::one());
        for (ai, &a) in alphabet.amplitudes().iter().enumerate() {
            let hits: usize = set.iter().map(|s| s.iter().filter(|&&x| x == a).count()).sum();
            let want = BigRational::new(hits.into(), (set.len() * n).into());
            assert_eq!(exact[ai], want);
        }
    }
}

#[test]
fn codebook_distribution_matches_used_prefix() {
    for (alphabet, n, e_max) in ess_cases(6) {
        let t = EnergyTrellis::build(&alphabet, n, e_max).unwrap();
        let set = bounded_set(&alphabet, n, e_max);
        for k in 0..=t.num_bits() {
            let used = &set[..1usize << k];
            let exact = t.codebook_distribution_exact(k).unwrap();
            let sum: BigRational = exact.iter().cloned().sum();
            assert_eq!(sum, BigRational::one());
            for (ai, &a) in alphabet.amplitudes().iter().enumerate() {
                let hits: usize = used.iter().map(|s| s.iter().filter(|&&x| x == a).count()).sum();
                assert_eq!(exact[ai], BigRational::new(hits.into(), (used.len() * n).into()));
            }
        }
    }
}

#[test]
fn count_nondecreasing_in_emax() {
    let alphabet = AmplitudeAlphabet::new(4).unwrap();
    let mut prev = BigUint::zero();
    for j in 0..200u64 {
        let t = EnergyTrellis::build(&alphabet, 12, 12 + 8 * j).unwrap();
        assert!(t.num_sequences() >= &prev);
        prev = t.num_sequences().clone();
    }
}

#[test]
fn min_emax_is_smallest_grid_point() {
    for m in 2..=4u32 {
        let alphabet = AmplitudeAlphabet::new(m).unwrap();
        for n in 1..=6usize {
            for k in 0..=n as u64 * (m as u64 - 1) {
                let e = min_emax_for_bits(&alphabet, n, k).unwrap();
                let t = EnergyTrellis::build(&alphabet, n, e).unwrap();
                assert!(t.num_bits() >= k);
                if e > n as u64 {
                    let below = EnergyTrellis::build(&alphabet, n, e - 8).unwrap();
                    assert!(below.num_bits() < k);
                }
            }
        }
    }
}

#[test]
fn ccdm_counts_and_roundtrip_over_all_compositions() {
    for m in 2..=3u32 {
        let alphabet = AmplitudeAlphabet::new(m).unwrap();
        for n in 1..=8usize {
            if m == 3 && n > 6 {
                continue;
            }
            for counts in compositions(n, alphabet.len()) {
                let perms = permutations_of(alphabet.amplitudes(), &counts);
                let comp = Composition::new(counts.clone()).unwrap();
                assert_eq!(ccdm_count(&comp), BigUint::from(perms.len()));
                let cb = CcdmCodebook::new(&alphabet, comp).unwrap();
                for (i, p) in perms.iter().enumerate() {
                    assert_eq!(&cb.sequence_at(&BigUint::from(i)).unwrap().0, p);
                }
                let k = cb.num_bits() as usize;
                for i in 0..1u64 << k {
                    let bits = BitBlock::from_index(&BigUint::from(i), k).unwrap();
                    let seq = cb.encode(&bits).unwrap();
                    assert_eq!(cb.decode(&seq).unwrap(), bits);
                }
            }
        }
    }
}

#[test]
fn balanced_composition_maximizes_count() {
    for n in 1..=10usize {
        let all = compositions(n, 4);
        let best = all.iter().map(|c| ccdm_count(&Composition::new(c.clone()).unwrap())).max().unwrap();
        let balanced: Vec<usize> = (0..4).map(|i| n / 4 + usize::from(i < n % 4)).collect();
        assert_eq!(ccdm_count(&Composition::new(balanced).unwrap()), best);
    }
}

#[test]
fn composition_search_matches_exhaustive_minimum() {
    for m in 2..=4u32 {
        let alphabet = AmplitudeAlphabet::new(m).unwrap();
        let max_n = if m == 4 { 8 } else { 12 };
        for n in 1..=max_n {
            let all = compositions(n, alphabet.len());
            let max_bits = all.iter().map(|c| ccdm_num_bits(&Composition::new(c.clone()).unwrap())).max().unwrap();
            for k in 0..=max_bits {
                let best = all
                    .iter()
                    .map(|c| Composition::new(c.clone()).unwrap())
                    .filter(|c| ccdm_num_bits(c) >= k)
                    .map(|c| c.energy(&alphabet))
                    .min()
                    .unwrap();
                let found = ccdm_composition_for_bits(&alphabet, n, k).unwrap();
                assert!(ccdm_num_bits(&found) >= k);
                assert_eq!(found.energy(&alphabet), best, "m={m} n={n} k={k} got {:?}", found.counts());
            }
            assert!(ccdm_composition_for_bits(&alphabet, n, max_bits + 1).is_err());
        }
    }
}

#[test]
fn sphere_has_minimum_average_energy() {
    for m in 2..=3u32 {
        let alphabet = AmplitudeAlphabet::new(m).unwrap();
        for n in 1..=6usize {
            let all = compositions(n, alphabet.len());
            for k in 1..=n as u64 * (m as u64 - 1) {
                let e = min_emax_for_bits(&alphabet, n, k).unwrap();
                let set = bounded_set(&alphabet, n, e);
                let full_mean = set.iter().map(|s| energy(s)).sum::<u64>() as f64 / set.len() as f64;
                let used = &set[..1usize << k];
                let used_mean = used.iter().map(|s| energy(s)).sum::<u64>() as f64 / used.len() as f64;
                for c in &all {
                    let comp = Composition::new(c.clone()).unwrap();
                    if ccdm_num_bits(&comp) >= k {
                        let ce = comp.energy(&alphabet) as f64;
                        assert!(full_mean <= ce + 1e-9 && used_mean <= ce + 1e-9);
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn ess_roundtrip_random_indices(m in 2u32..=4, n in 1usize..40, slack in 0u64..400, seed in any::<u64>()) {
        let alphabet = AmplitudeAlphabet::new(m).unwrap();
        let t = EnergyTrellis::build(&alphabet, n, n as u64 + slack).unwrap();
        let k = t.num_bits();
        let raw = BigUint::from(seed) * BigUint::from(seed.rotate_left(17)) * BigUint::from(0x9e37_79b9_7f4a_7c15u64);
        let index = raw % (BigUint::one() << k);
        let seq = t.sequence_at(&index).unwrap();
        prop_assert!(seq.energy() <= n as u64 + slack);
        prop_assert_eq!(t.index_of(&seq).unwrap(), index);
    }

    #[test]
    fn ccdm_roundtrip_random_compositions(counts in proptest::collection::vec(0usize..30, 2..=8), seed in any::<u64>()) {
        prop_assume!(counts.iter().sum::<usize>() > 0);
        let alphabet = AmplitudeAlphabet::new(4).unwrap();
        let cb = CcdmCodebook::new(&alphabet, Composition::new(counts).unwrap()).unwrap();
        let index = (BigUint::from(seed) * BigUint::from(seed ^ 0x5555)) % cb.num_sequences();
        let seq = cb.sequence_at(&index).unwrap();
        prop_assert_eq!(cb.index_of(&seq).unwrap(), index);
    }

    #[test]
    fn codebook_distribution_sums_to_one(n in 1usize..30, slack in 0u64..200) {
        let alphabet = AmplitudeAlphabet::new(3).unwrap();
        let t = EnergyTrellis::build(&alphabet, n, n as u64 + slack).unwrap();
        let total: f64 = t.codebook_distribution(t.num_bits()).unwrap().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let exact: BigRational = t.amplitude_distribution_exact().into_iter().sum();
        prop_assert_eq!(exact.to_f64().unwrap(), 1.0);
    }
}
