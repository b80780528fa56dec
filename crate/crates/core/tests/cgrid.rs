use cmc_core::cgrid::{sweep_antiderivative, wirtinger_d, wirtinger_dbar, ComplexField, GridChart, Mask, ResidualStat};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_field(chart: &GridChart, seed: u64) -> ComplexField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mask = Mask::from_elem(chart.shape(), true);
    mask[[rng.random_range(0..chart.nx()), rng.random_range(0..chart.ny())]] = false;
    ComplexField::from_index_fn(chart, |i, j| {
        mask[[i, j]].then(|| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    })
}

fn close(a: &ComplexField, b: &ComplexField) -> bool {
    a.mask() == b.mask() && a.iter_valid().all(|(i, j, v)| (v - b.at(i, j)).norm() <= 1e-12 * (1.0 + v.norm()))
}

proptest! {
    #[test]
    fn stencils_are_linear(seed in any::<u64>(), a in (-3.0f64..3.0, -3.0f64..3.0), n in 3usize..12) {
        let chart = GridChart::new(0.0, 1.0, -1.0, 0.5, n, n + 1).unwrap();
        let f = random_field(&chart, seed);
        let g = random_field(&chart, seed.wrapping_add(1));
        let a = Complex64::new(a.0, a.1);
        let lhs = wirtinger_d(&(&f.scale(a) + &g));
        let rhs = &wirtinger_d(&f).scale(a) + &wirtinger_d(&g);
        prop_assert!(close(&lhs, &rhs));
        let lhs = wirtinger_dbar(&(&f.scale(a) + &g));
        let rhs = &wirtinger_dbar(&f).scale(a) + &wirtinger_dbar(&g);
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn dbar_of_conjugate_is_conjugate_of_d(seed in any::<u64>(), n in 3usize..12) {
        let chart = GridChart::square(-1.0, 1.0, n).unwrap();
        let f = random_field(&chart, seed);
        prop_assert_eq!(wirtinger_dbar(&f.conj()), wirtinger_d(&f).conj());
    }

    #[test]
    fn sweep_recovers_linear_functions(a in (-2.0f64..2.0, -2.0f64..2.0), b in (-2.0f64..2.0, -2.0f64..2.0)) {
        // F = a z + b z̄ has ∂F = a, ∂̄F = b; the trapezoid rule is exact.
        let chart = GridChart::square(-1.0, 1.0, 17).unwrap();
        let (a, b) = (Complex64::new(a.0, a.1), Complex64::new(b.0, b.1));
        let base = (3, 11);
        let anti = sweep_antiderivative(&ComplexField::constant(&chart, a), &ComplexField::constant(&chart, b), base).unwrap();
        let zb = chart.z(base.0, base.1);
        let exact = ComplexField::from_fn(&chart, |z| a * (z - zb) + b * (z - zb).conj());
        prop_assert!(ResidualStat::of(&(&anti.value - &exact), 0).max < 1e-13);
    }
}
