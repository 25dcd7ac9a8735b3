use proptest::prelude::*;
use qhfib::catalog;
use qhfib::manifold::QHClass;
use qhfib::rational::{q, qi};
use qhfib::report::Status;

fn class() -> impl Strategy<Value = QHClass> {
    prop::collection::vec((0usize..4, -2i64..=1, -3i64..=3, 1i64..=2), 0..3).prop_map(|ts| {
        let m = catalog::ruled_fiber(&qi(1));
        let mut x = QHClass::zero();
        for (i, k, p, d) in ts {
            x.add_scalar_term(m.h2.generator(0).scale(&qi(k)), 4, i, q(p, d));
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn psi_shifts_with_the_section(num in -6i64..=6, den in 1i64..=6, k in -2i64..=2) {
        let f = catalog::ruled_total(&qi(1));
        let data = f.section_data().unwrap();
        let fg = f.fiber.h2.generator(0);
        let checks = data.shift_checks(&fg.scale(&q(num, den)), &fg.scale(&qi(k)), &qi(4));
        prop_assert!(!checks.is_empty());
        for c in checks {
            prop_assert_eq!(c.status, Status::Pass, "{} {}: {} vs {}", c.label, c.instance, c.lhs, c.rhs);
        }
    }

    #[test]
    fn psi_is_linear(x in class(), y in class(), num in -6i64..=6) {
        let f = catalog::ruled_total(&qi(1));
        let data = f.section_data().unwrap();
        let off = f.fiber.h2.generator(0).scale(&q(num, 5));
        let cut = qi(4);
        let lhs = data.psi(&off, &x.add(&y), &cut).unwrap();
        let rhs = data.psi(&off, &x, &cut).unwrap().add(&data.psi(&off, &y, &cut).unwrap());
        prop_assert_eq!(lhs.truncate(&cut), rhs.truncate(&cut));
    }
}
