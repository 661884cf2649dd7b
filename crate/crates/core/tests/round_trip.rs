use std::time::Instant;

use condlin::algebra::{RationalFunction, Q};
use condlin::linearize::{extract, generate, FormClass, RootCoefficients};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_monomial(rng: &mut ChaCha8Rng, zero_weight: u32) -> RationalFunction {
    if rng.gen_ratio(zero_weight, 10) {
        return RationalFunction::zero();
    }
    let lambdas = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)];
    let (p, q) = lambdas[rng.gen_range(0..lambdas.len())];
    let m = rng.gen_range(-2..=2);
    let n = rng.gen_range(-2..=2);
    RationalFunction::laurent_monomial(Q::new(p.into(), q.into()), m, n)
}

fn random_root(rng: &mut ChaCha8Rng) -> RootCoefficients {
    RootCoefficients::new(
        random_monomial(rng, 4),
        random_monomial(rng, 2),
        random_monomial(rng, 2),
        random_monomial(rng, 2),
    )
}

#[test]
fn fourth_order_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let start = Instant::now();
    let mut degenerate = 0;
    for _ in 0..50 {
        let r = random_root(&mut rng);
        if r.c.is_zero() {
            degenerate += 1;
        }
        for class in FormClass::FOURTH {
            let f = generate(&r, class);
            let got = extract(&f, class).unwrap_or_else(|e| panic!("{} {}: {}", class, r, e));
            for e in &got {
                assert_eq!(generate(&e.root, class), f, "{} {}", class, r);
            }
        }
    }
    assert!(degenerate > 0);
    assert!(start.elapsed().as_secs() < 60, "took {:?}", start.elapsed());
}
