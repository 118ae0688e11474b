use std::collections::BTreeSet;

use proptest::prelude::*;
use shuffle_compat::perm::{standardize, Permutation};
use shuffle_compat::reduce::{reduce_pair, supported_statistics};
use shuffle_compat::shuffle::{
    from_word, normalize_pair, phi, shuffles, t_swap, word_of, NormalMode,
};
use shuffle_compat::stats::{self, Statistic};

/// Two disjoint permutations drawn from a shuffled pool of distinct values.
fn disjoint_pair(max_len: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
    (0..=max_len, 0..=max_len).prop_flat_map(|(m, n)| {
        Just((1u32..=20).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |pool| {
                let pi = Permutation::new(pool[..m].to_vec()).unwrap();
                let sigma = Permutation::new(pool[m..m + n].to_vec()).unwrap();
                (pi, sigma)
            })
    })
}

fn perm(max_len: usize) -> impl Strategy<Value = Permutation> {
    (0..=max_len).prop_flat_map(|m| {
        Just((1..=m as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn shuffle_words_round_trip((pi, sigma) in disjoint_pair(4)) {
        let all = shuffles(&pi, &sigma).unwrap();
        let distinct: BTreeSet<_> = all.iter().cloned().collect();
        prop_assert_eq!(distinct.len(), all.len());
        for t in &all {
            let w = word_of(t, &pi, &sigma).unwrap();
            prop_assert_eq!(&from_word(&pi, &sigma, &w).unwrap(), t);
        }
    }

    #[test]
    fn phi_keeps_descent_set_for_equal_descent_sets((pi, sigma) in disjoint_pair(4)) {
        let (np, ns, _) = normalize_pair(&pi, &sigma, NormalMode::PiLow).unwrap();
        let reversed = np.reversed();
        if stats::des_set(&reversed) == stats::des_set(&np) {
            for t in shuffles(&np, &ns).unwrap() {
                let u = phi(&t, &np, &reversed, &ns).unwrap();
                prop_assert_eq!(stats::des_set(&u), stats::des_set(&t));
            }
        }
    }

    #[test]
    fn t_swap_is_an_involution(p in perm(7), i in 2u32..8) {
        if (i as usize) <= p.len() {
            prop_assert_eq!(t_swap(&t_swap(&p, i).unwrap(), i).unwrap(), p);
        }
    }

    #[test]
    fn statistics_invariant_under_standardization(p in perm(7), shift in 1u32..30) {
        let spread: Vec<u32> = p.as_slice().iter().map(|&v| v * 3 + shift).collect();
        let spread = Permutation::new(spread).unwrap();
        for s in Statistic::all_named() {
            if s.is_descent_statistic() || matches!(s, Statistic::Inv) {
                prop_assert_eq!(s.evaluate(&spread), s.evaluate(&p));
            }
        }
        let mut dom = spread.domain();
        dom.sort_unstable();
        prop_assert_eq!(standardize(&p, &dom).unwrap(), spread);
    }

    #[test]
    fn reductions_are_bijections((pi, sigma) in disjoint_pair(3), pick in 0usize..9) {
        let (stat, _) = supported_statistics()[pick].clone();
        let red = reduce_pair(&stat, &pi, &sigma).unwrap();
        let tgt = red.target().clone();
        let image: BTreeSet<Permutation> =
            shuffles(&pi, &sigma).unwrap().iter().map(|t| red.apply(t).unwrap()).collect();
        let want: BTreeSet<Permutation> = shuffles(&tgt.pi, &tgt.sigma).unwrap().into_iter().collect();
        prop_assert_eq!(image, want);
    }
}
