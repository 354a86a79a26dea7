//! Dualizing a weak automaton complements every state's language.

use backdet::alphabet::Alphabet;
use backdet::gen::random_weak_waa;
use backdet::lasso::LassoWord;
use backdet::run::waa_acceptance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> backdet::Result<()> {
    let ab = Alphabet::new(["a", "b"])?;
    let waa = random_weak_waa(&mut ChaCha8Rng::seed_from_u64(3), &ab, 4);
    let dual = waa.dualize();
    print!("{}\n{}", waa.to_text(), dual.to_text());

    let mut checked = 0;
    for w in LassoWord::enumerate(&ab, 2, 2) {
        let (x, y) = (waa_acceptance(&waa, &w), waa_acceptance(&dual, &w));
        for (xs, ys) in x.iter().zip(&y) {
            for (a, b) in xs.iter().zip(ys) {
                assert!(a ^ b);
                checked += 1;
            }
        }
    }
    println!("{checked} (state, position, lasso) triples, each accepted by exactly one side");
    Ok(())
}
