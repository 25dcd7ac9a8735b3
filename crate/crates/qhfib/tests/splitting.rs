mod common;

use qhfib::fibration::correct_splitting;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn uncorrected_splittings_are_not_orthogonal() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in [2, 3] {
        let syn = common::synthetic(n, &mut rng);
        assert!(syn.nonzero_q > 0);
        assert!(!common::splitting_defects(&syn, &syn.s_prime).is_empty());
    }
}

#[test]
fn corrected_splittings_are_orthogonal() {
    let mut rng = StdRng::seed_from_u64(11);
    for n in [2, 3] {
        for _ in 0..40 {
            let syn = common::synthetic(n, &mut rng);
            let s = correct_splitting(&syn.fiber, &syn.total, &syn.iota, &syn.s_prime).unwrap();
            assert_eq!(common::splitting_defects(&syn, &s), Vec::<String>::new());
        }
    }
}
