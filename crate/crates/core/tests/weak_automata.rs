use backdet::alphabet::Alphabet;
use backdet::backward::Bda;
use backdet::gen::{random_ltl, random_weak_waa};
use backdet::lasso::LassoWord;
use backdet::ltl::ltl_to_waa;
use backdet::run::{bda_final_run, cycle_census, waa_acceptance, waa_accepted_sets};
use backdet::value::Value;
use backdet::waa::Waa;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

fn waa_from(seed: u64, max_states: usize) -> Waa {
    random_weak_waa(&mut ChaCha8Rng::seed_from_u64(seed), &ab(), max_states)
}

fn lasso() -> impl Strategy<Value = LassoWord> {
    (prop::collection::vec(0..2usize, 0..3), prop::collection::vec(0..2usize, 1..4)).prop_map(|(u, v)| {
        let ab = ab();
        let ids = |xs: Vec<usize>| xs.into_iter().map(|i| ab.letters().nth(i).unwrap()).collect();
        LassoWord::new(ids(u), ids(v)).unwrap()
    })
}

/// Answer at position `p` of the doubled lasso, read back on the original.
fn undouble(w: &LassoWord, p: usize) -> usize {
    if p < w.len() { p } else { p - w.period().len() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dualize_is_an_involution(seed in any::<u64>()) {
        let waa = waa_from(seed, 6);
        prop_assert_eq!(waa.dualize().dualize().to_text(), waa.to_text());
    }

    #[test]
    fn dual_accepts_exactly_the_rejected_suffixes(seed in any::<u64>(), w in lasso()) {
        let waa = waa_from(seed, 5);
        let (x, y) = (waa_acceptance(&waa, &w), waa_acceptance(&waa.dualize(), &w));
        for (p, (xs, ys)) in x.iter().zip(&y).enumerate() {
            for (q, (a, b)) in xs.iter().zip(ys).enumerate() {
                prop_assert!(a ^ b, "state {} position {}", q, p);
            }
        }
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let waa = waa_from(seed, 6);
        let back = Waa::parse(&waa.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), waa.to_text());
    }

    #[test]
    fn step_stays_in_range_and_keeps_the_order(seed in any::<u64>(), index in any::<u64>(), letter in 0..2usize) {
        let waa = waa_from(seed, 5);
        let bda = Bda::new(waa.clone()).unwrap();
        let family = bda.family_at(index % bda.state_space_size().unwrap());
        let a = waa.alphabet().letters().nth(letter).unwrap();
        let next = bda.step(a, &family).result;
        prop_assert!(next.is_well_formed(&waa));
        for scc in waa.sccs() {
            let before: Vec<Value> = scc.states.iter().map(|&q| bda.eval_condition(q, a, &family)).collect();
            let after: Vec<Value> = scc.states.iter().map(|&q| next.get(q)).collect();
            for i in 0..before.len() {
                for j in 0..before.len() {
                    prop_assert_eq!(before[i].cmp(&before[j]), after[i].cmp(&after[j]));
                }
            }
        }
    }

    #[test]
    fn doubling_the_period_changes_nothing(seed in any::<u64>(), w in lasso()) {
        let waa = waa_from(seed, 5);
        let bda = Bda::new(waa.clone()).unwrap();
        let d = w.doubled();
        let (oracle, oracle2) = (waa_accepted_sets(&waa, &w), waa_accepted_sets(&waa, &d));
        let (out, out2) = (
            bda_final_run(&bda, &w).unwrap().outputs(&bda),
            bda_final_run(&bda, &d).unwrap().outputs(&bda),
        );
        for p in 0..d.len() {
            prop_assert_eq!(&oracle2[p], &oracle[undouble(&w, p)]);
            prop_assert_eq!(&out2[p], &out[undouble(&w, p)]);
        }
    }

    #[test]
    fn exactly_one_final_cycle(seed in any::<u64>(), w in lasso()) {
        let waa = waa_from(seed, 4);
        let bda = Bda::new(waa.clone()).unwrap();
        prop_assume!(bda.state_space_size().unwrap() <= 1 << 12);
        let census = cycle_census(&bda, &w, 1 << 12).unwrap();
        prop_assert_eq!(census.final_cycles.len(), 1);
        let run = bda_final_run(&bda, &w).unwrap();
        prop_assert_eq!(run.outputs(&bda), waa_accepted_sets(&waa, &w));
    }

    #[test]
    fn run_satisfies_the_transition_constraint(seed in any::<u64>(), w in lasso()) {
        let bda = Bda::new(waa_from(seed, 5)).unwrap();
        let run = bda_final_run(&bda, &w).unwrap();
        for p in 0..w.len() {
            prop_assert_eq!(&bda.step(w.letter(p), &run.families[w.succ(p)]).result, &run.families[p]);
        }
    }

    #[test]
    fn ltl_automata_are_very_weak_with_power_of_two_space(seed in any::<u64>()) {
        let ab = ab();
        let phi = random_ltl(&mut ChaCha8Rng::seed_from_u64(seed), &ab, 8);
        let waa = ltl_to_waa(&phi, &ab);
        prop_assert!(waa.is_very_weak());
        prop_assert!(waa.num_states() <= phi.size());
        let bda = Bda::new(waa.clone()).unwrap();
        prop_assert_eq!(bda.state_space_size(), Some(1 << waa.num_states()));
        prop_assert_eq!(bda.num_buchi_sets(), waa.num_states());
    }
}
