//! Property-based invariants over randomized strings, measures, and words.

use num_traits::ToPrimitive;
use proptest::prelude::*;

use rdiag_core::cumulants::{cumulants_to_moments, moments_to_cumulants, MomentSeq};
use rdiag_core::mehler::{markov_check, DiscreteMeasure};
use rdiag_core::noncrossing::{count_nc2, enumerate_nc2, enumerate_nc_alternating};
use rdiag_core::ratio::{rat, Rat};
use rdiag_core::semigroup::{xs_roundtrip, GeneratorWord};
use rdiag_core::strings::{StarString, Symbol};

fn arb_star_string(max_runs: usize, max_len: usize) -> impl Strategy<Value = StarString> {
    (
        proptest::collection::vec(1usize..=max_len, 0..=max_runs),
        proptest::bool::ANY,
    )
        .prop_map(|(lens, start_one)| {
            let mut runs = Vec::new();
            let mut sym = if start_one { Symbol::One } else { Symbol::Star };
            for l in lens {
                runs.push((sym, l));
                sym = sym.flipped();
            }
            StarString::from_runs(runs)
        })
}

fn arb_balanced(half_max: usize) -> impl Strategy<Value = StarString> {
    proptest::collection::vec(proptest::bool::ANY, 0..=2 * half_max).prop_map(|bits| {
        // Balance by construction: emit each drawn symbol together with a
        // bookkeeping count, then truncate to equal counts via pairing.
        let mut ones = Vec::new();
        let mut stars = Vec::new();
        for (i, b) in bits.iter().enumerate() {
            if *b {
                ones.push(i);
            } else {
                stars.push(i);
            }
        }
        let keep = ones.len().min(stars.len());
        let mut picked: Vec<(usize, Symbol)> = ones[..keep]
            .iter()
            .map(|&i| (i, Symbol::One))
            .chain(stars[..keep].iter().map(|&i| (i, Symbol::Star)))
            .collect();
        picked.sort_by_key(|&(i, _)| i);
        StarString::from_symbols(picked.into_iter().map(|(_, s)| s))
    })
}

proptest! {
    #[test]
    fn parse_format_round_trip(s in arb_star_string(8, 5)) {
        let text = s.format();
        prop_assert_eq!(StarString::parse(&text).unwrap(), s);
    }

    #[test]
    fn counts_match_enumeration(s in arb_balanced(6)) {
        let c = count_nc2(&s);
        let e = enumerate_nc2(&s).unwrap().len();
        prop_assert_eq!(c.to_usize().unwrap(), e);
    }

    #[test]
    fn pairings_lie_in_nc_s(s in arb_balanced(5)) {
        let all = enumerate_nc_alternating(&s).unwrap();
        for p in enumerate_nc2(&s).unwrap() {
            prop_assert!(all.contains(&p));
        }
    }

    #[test]
    fn count_nc2_rotation_invariant(s in arb_balanced(6), k in 0usize..12) {
        prop_assert_eq!(count_nc2(&s.rotate(k)), count_nc2(&s));
    }

    #[test]
    fn moment_cumulant_inversion(nums in proptest::collection::vec((-9i64..=9, 1i64..=9), 1..=6)) {
        let m = MomentSeq::new(nums.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap();
        let kappa = moments_to_cumulants(&m).unwrap();
        prop_assert_eq!(cumulants_to_moments(&kappa).unwrap(), m);
    }

    #[test]
    fn xs_round_trip_random_words(letters in proptest::collection::vec((1usize..=3, proptest::bool::ANY), 0..=10)) {
        let w = GeneratorWord::new(
            letters.into_iter().map(|(g, s)| (g, if s { 1 } else { -1 })).collect(),
        ).unwrap();
        prop_assert_eq!(xs_roundtrip(&w).unwrap(), w);
    }

    /// Items (1)-(4) of the positivity proposition agree on random
    /// finite-support measures: kernel nonnegativity, positivity
    /// preservation, and the two contractions are one condition.
    #[test]
    fn markov_equivalences(
        raw in proptest::collection::vec((-12i64..=12, 1u32..=8), 2..=4),
        rs in proptest::collection::vec((1i64..=19, 20i64..=20), 1..=3),
    ) {
        let mut pts: Vec<(Rat, Rat)> = Vec::new();
        for (p, w) in raw {
            let x = rat(p, 3);
            if pts.iter().all(|(y, _)| *y != x) {
                pts.push((x, rat(w as i64, 1)));
            }
        }
        prop_assume!(pts.len() >= 2);
        let total: Rat = pts.iter().map(|(_, w)| w.clone()).sum();
        let atoms: Vec<(Rat, Rat)> = pts
            .into_iter()
            .map(|(x, w)| (x, w / total.clone()))
            .collect();
        let mu = DiscreteMeasure::new(atoms).unwrap();
        let grid: Vec<Rat> = rs.into_iter().map(|(n, d)| rat(n, d)).collect();
        let report = markov_check(&mu, &grid).unwrap();
        for row in &report.rows {
            prop_assert_eq!(row.markovian, row.positivity_preserving);
            prop_assert_eq!(row.markovian, row.l1_contractive);
            prop_assert_eq!(row.markovian, row.linf_contractive);
            prop_assert!(row.trace_preserving);
        }
    }
}
