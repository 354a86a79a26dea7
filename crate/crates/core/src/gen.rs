//! Seeded random instances for property checks.

use rand::Rng;

use crate::alphabet::{Alphabet, LetterId, LetterSet};
use crate::condition::Condition;
use crate::ltl::Ltl;
use crate::nba::Nba;
use crate::waa::{scc_decompose, StateId, Waa};

fn random_condition<R: Rng>(rng: &mut R, alphabet: &Alphabet, targets: &[StateId], depth: usize) -> Condition {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        if !targets.is_empty() && rng.gen_bool(0.5) {
            Condition::Next(targets[rng.gen_range(0..targets.len())])
        } else {
            Condition::Letters(LetterSet(rng.gen_range(0..=alphabet.full().0)))
        }
    } else {
        let l = random_condition(rng, alphabet, targets, depth - 1);
        let r = random_condition(rng, alphabet, targets, depth - 1);
        if rng.gen_bool(0.5) {
            l.or(r)
        } else {
            l.and(r)
        }
    }
}

/// A random weak automaton with `1..=max_states` states; polarity is drawn per SCC.
pub fn random_weak_waa<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_states: usize) -> Waa {
    let n = rng.gen_range(1..=max_states);
    let all: Vec<StateId> = (0..n).map(StateId).collect();
    let delta: Vec<Condition> = (0..n).map(|_| random_condition(rng, alphabet, &all, 3)).collect();
    with_random_polarity(rng, alphabet, delta)
}

/// A random very weak automaton: `X` atoms only point to the same or an earlier state.
pub fn random_very_weak_waa<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_states: usize) -> Waa {
    let n = rng.gen_range(1..=max_states);
    let delta: Vec<Condition> = (0..n)
        .map(|i| {
            let targets: Vec<StateId> = (0..=i).map(StateId).collect();
            random_condition(rng, alphabet, &targets, 3)
        })
        .collect();
    with_random_polarity(rng, alphabet, delta)
}

fn with_random_polarity<R: Rng>(rng: &mut R, alphabet: &Alphabet, delta: Vec<Condition>) -> Waa {
    let n = delta.len();
    let (sccs, _) = scc_decompose(&delta, &vec![false; n]);
    let mut recurring = vec![false; n];
    for scc in sccs {
        let r = rng.gen_bool(0.5);
        for q in scc.states {
            recurring[q.0] = r;
        }
    }
    let states = (0..n).map(|i| format!("q{i}")).collect();
    Waa::new(alphabet.clone(), states, delta, recurring, Some(vec![StateId(0)]))
        .expect("generated automata are well-formed")
}

/// A random formula with at most `max_size` nodes.
pub fn random_ltl<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_size: usize) -> Ltl {
    let size = rng.gen_range(1..=max_size.max(1));
    random_of_size(rng, alphabet, size)
}

fn random_of_size<R: Rng>(rng: &mut R, alphabet: &Alphabet, size: usize) -> Ltl {
    if size == 1 {
        let a = LetterId(rng.gen_range(0..alphabet.len()));
        return if rng.gen_bool(0.5) { Ltl::Letter(a) } else { Ltl::NegLetter(a) };
    }
    if size == 2 || rng.gen_bool(0.4) {
        let f = random_of_size(rng, alphabet, size - 1);
        return match rng.gen_range(0..3) {
            0 => f.next(),
            1 => f.eventually(),
            _ => f.always(),
        };
    }
    let left = rng.gen_range(1..size - 1);
    let l = random_of_size(rng, alphabet, left);
    let r = random_of_size(rng, alphabet, size - 1 - left);
    match rng.gen_range(0..4) {
        0 => l.or(r),
        1 => l.and(r),
        2 => l.until(r),
        _ => l.release(r),
    }
}

/// A random automaton with `n` states and initial state `q0`; every possible
/// transition is present with probability `density`.
pub fn random_nba<R: Rng>(rng: &mut R, alphabet: &Alphabet, n: usize, density: f64) -> Nba {
    let mut trans = Vec::new();
    for p in 0..n {
        for a in alphabet.letters() {
            for q in 0..n {
                if rng.gen_bool(density) {
                    trans.push((p, a, q));
                }
            }
        }
    }
    let buchi = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let states = (0..n).map(|i| format!("q{i}")).collect();
    Nba::new(alphabet.clone(), states, vec![0], trans, buchi).expect("generated automata are well-formed")
}

/// Every automaton with `n` states and initial state `q0`: all transition
/// relations times all Büchi sets. Only sensible for tiny `n`.
pub fn all_nbas(alphabet: &Alphabet, n: usize) -> Vec<Nba> {
    let possible: Vec<(usize, LetterId, usize)> = (0..n)
        .flat_map(|p| alphabet.letters().flat_map(move |a| (0..n).map(move |q| (p, a, q))))
        .collect();
    assert!(possible.len() <= 20, "too many transition relations to enumerate");
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << possible.len() {
        let trans: Vec<_> = (0..possible.len()).filter(|i| mask >> i & 1 == 1).map(|i| possible[i]).collect();
        for b in 0u32..1 << n {
            let buchi = (0..n).map(|q| b >> q & 1 == 1).collect();
            out.push(
                Nba::new(alphabet.clone(), states.clone(), vec![0], trans.clone(), buchi)
                    .expect("enumerated automata are well-formed"),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_formulas_respect_size() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            assert!(random_ltl(&mut rng, &al, 8).size() <= 8);
        }
    }

    #[test]
    fn random_automata_are_weak() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            assert!(random_weak_waa(&mut rng, &al, 5).validate_weak().is_ok());
            assert!(random_very_weak_waa(&mut rng, &al, 5).is_very_weak());
        }
    }

    #[test]
    fn nba_enumeration_counts() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        assert_eq!(all_nbas(&al, 1).len(), 8);
        assert_eq!(all_nbas(&al, 2).len(), 1024);
    }
}
