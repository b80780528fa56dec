//! Finite-difference Wirtinger calculus.
//!
//! `∂ = (∂x − i∂y)/2` and `∂̄ = (∂x + i∂y)/2`, each partial taken with the
//! second-order central stencil in the interior and the second-order one-sided
//! stencil on the first and last row/column. A derivative sample is valid only
//! when every stencil input (and the point itself) is valid.
//!
//! Composing two stencils is still second order in the interior, but on the
//! boundary band the one-sided error constants differ from the central ones,
//! so a composed derivative is only first order within `depth` points of the
//! chart edge. Residuals built from composed derivatives therefore trim that
//! band (see [`Field::trimmed`](super::Field::trimmed)).

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::field::{ComplexField, Field, RealField, Sample, Vec3Field};
use super::stats::ResidualStat;

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
}

fn partial<T>(f: &Field<T>, axis: Axis) -> Field<T>
where
    T: Sample + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let chart = *f.chart();
    let (n, h) = match axis {
        Axis::X => (chart.nx(), chart.hx()),
        Axis::Y => (chart.ny(), chart.hy()),
    };
    let inv = 1.0 / (2.0 * h);
    Field::from_index_fn(&chart, |i, j| {
        let k = match axis {
            Axis::X => i,
            Axis::Y => j,
        };
        let at = |m: usize| match axis {
            Axis::X => f.get(m, j),
            Axis::Y => f.get(i, m),
        };
        f.get(i, j)?;
        let v = if k == 0 {
            let (a, b, c) = (at(0)?, at(1)?, at(2)?);
            (b * 4.0 - a * 3.0 - c) * inv
        } else if k + 1 == n {
            let (a, b, c) = (at(n - 1)?, at(n - 2)?, at(n - 3)?);
            (a * 3.0 - b * 4.0 + c) * inv
        } else {
            (at(k + 1)? - at(k - 1)?) * inv
        };
        Some(v)
    })
}

/// Real partial derivative along x.
pub fn partial_x<T>(f: &Field<T>) -> Field<T>
where
    T: Sample + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    partial(f, Axis::X)
}

/// Real partial derivative along y.
pub fn partial_y<T>(f: &Field<T>) -> Field<T>
where
    T: Sample + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    partial(f, Axis::Y)
}

/// `∂f = (∂x f − i ∂y f)/2`.
pub fn wirtinger_d(f: &ComplexField) -> ComplexField {
    let (dx, dy) = (partial_x(f), partial_y(f));
    dx.zip_with(&dy, |a, b| Complex64::new(0.5 * (a.re + b.im), 0.5 * (a.im - b.re)))
}

/// `∂̄f = (∂x f + i ∂y f)/2`.
pub fn wirtinger_dbar(f: &ComplexField) -> ComplexField {
    let (dx, dy) = (partial_x(f), partial_y(f));
    dx.zip_with(&dy, |a, b| Complex64::new(0.5 * (a.re - b.im), 0.5 * (a.im + b.re)))
}

pub fn wirtinger_d_real(f: &RealField) -> ComplexField {
    wirtinger_d(&f.to_complex())
}

pub fn wirtinger_dbar_real(f: &RealField) -> ComplexField {
    wirtinger_dbar(&f.to_complex())
}

/// `∂∂̄f`, as the composition `∂ ∘ ∂̄`. Equals a quarter of the Laplacian.
pub fn d_dbar(f: &ComplexField) -> ComplexField {
    wirtinger_d(&wirtinger_dbar(f))
}

/// `∂∂̄f` for real data; the result is real up to rounding so only the real part is kept.
pub fn d_dbar_real(f: &RealField) -> RealField {
    d_dbar(&f.to_complex()).re()
}

/// Componentwise `∂` of a real vector field.
pub fn wirtinger_d_vec(v: &Vec3Field) -> [ComplexField; 3] {
    [0, 1, 2].map(|k| wirtinger_d_real(v.component(k)))
}

/// Componentwise `∂̄` of a real vector field.
pub fn wirtinger_dbar_vec(v: &Vec3Field) -> [ComplexField; 3] {
    [0, 1, 2].map(|k| wirtinger_dbar_real(v.component(k)))
}

/// Max and mean of `|∂̄f|`: zero up to discretization exactly when `f` is holomorphic.
pub fn holomorphy_residual(f: &ComplexField) -> ResidualStat {
    ResidualStat::of(&wirtinger_dbar(f), 0)
}

/// Trapezoidal `∫∫ f dx dy` over the unmasked samples (edge samples carry half
/// weight per axis; masked samples contribute nothing).
pub fn integrate(f: &RealField) -> f64 {
    let chart = *f.chart();
    let (nx, ny) = chart.shape();
    let w = |k: usize, n: usize| if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
    let sum: f64 = f.iter_valid().map(|(i, j, v)| v * w(i, nx) * w(j, ny)).sum();
    sum * chart.hx() * chart.hy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cgrid::GridChart;

    fn unit_square(n: usize) -> GridChart {
        GridChart::square(-1.0, 1.0, n).unwrap()
    }

    fn max_err(a: &ComplexField, exact: impl Fn(Complex64) -> Complex64, interior: bool) -> f64 {
        let chart = *a.chart();
        a.iter_valid()
            .filter(|&(i, j, _)| !interior || chart.edge_distance(i, j) > 0)
            .map(|(i, j, v)| (v - exact(chart.z(i, j))).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn linear_data_is_differentiated_exactly() {
        let c = unit_square(9);
        let z = ComplexField::from_fn(&c, |z| z);
        let zb = z.conj();
        let one = Complex64::new(1.0, 0.0);
        assert!(max_err(&wirtinger_d(&z), |_| one, false) < 1e-13);
        assert!(max_err(&wirtinger_dbar(&z), |_| Complex64::new(0.0, 0.0), false) < 1e-13);
        assert!(max_err(&wirtinger_dbar(&zb), |_| one, false) < 1e-13);
        assert!(max_err(&wirtinger_d(&zb), |_| Complex64::new(0.0, 0.0), false) < 1e-13);
    }

    #[test]
    fn quadratic_data_is_differentiated_exactly() {
        let c = unit_square(65);
        let f = ComplexField::from_fn(&c, |z| z * z.conj());
        assert!(max_err(&wirtinger_d(&f), |z| z.conj(), false) < 1e-12);
    }

    #[test]
    fn cubic_monomial_has_second_order_error() {
        let c = unit_square(65);
        let h = c.h();
        let f = ComplexField::from_fn(&c, |z| z * z * z.conj());
        let err = max_err(&wirtinger_dbar(&f), |z| z * z, false);
        assert!(err > 0.0 && err <= 5.0 * h * h, "err = {err}");
    }

    #[test]
    fn masked_inputs_mask_the_stencil() {
        let c = unit_square(9);
        let f = ComplexField::from_fn(&c, |z| z).mask_where(|i, j, _| i == 4 && j == 4);
        let d = wirtinger_d(&f);
        for (i, j) in [(4, 4), (3, 4), (5, 4), (4, 3), (4, 5)] {
            assert!(!d.is_valid(i, j));
        }
        assert!(d.is_valid(3, 3));
        // (2, 4) is interior, its x-stencil reaches 1 and 3 only
        assert!(d.is_valid(2, 4));
    }

    #[test]
    fn fully_masked_field_gives_fully_masked_derivative() {
        let c = unit_square(5);
        let f = ComplexField::from_fn(&c, |z| z).mask_where(|_, _, _| true);
        assert!(wirtinger_d(&f).is_empty());
        let s = holomorphy_residual(&f);
        assert_eq!(s.count, 0);
    }

    #[test]
    fn conjugation_symmetry_is_bitwise() {
        let c = unit_square(17);
        let f = ComplexField::from_fn(&c, |z| (z + z.conj() * z.conj()).exp());
        let lhs = wirtinger_dbar(&f.conj());
        let rhs = wirtinger_d(&f).conj();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn holomorphy_of_exponential() {
        let c = unit_square(65);
        let h = c.h();
        let s = holomorphy_residual(&ComplexField::from_fn(&c, |z| z.exp()));
        assert!(s.max <= 10.0 * h * h, "{s:?}");
        let fine = holomorphy_residual(&ComplexField::from_fn(&unit_square(129), |z| z.exp()));
        let ratio = s.max / fine.max;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn holomorphy_of_conjugate_and_constant() {
        let c = unit_square(33);
        let s = holomorphy_residual(&ComplexField::from_fn(&c, |z| z.conj()));
        assert!((s.max - 1.0).abs() < 1e-12);
        let s = holomorphy_residual(&ComplexField::constant(&c, Complex64::new(5.0, 0.0)));
        assert!(s.max < 1e-12);
    }

    #[test]
    fn interior_convergence_is_second_order() {
        let f = |z: Complex64| (z + z.conj() * z.conj()).exp();
        let df = |z: Complex64| f(z);
        let errs: Vec<f64> = [65, 129, 257]
            .iter()
            .map(|&n| {
                let c = unit_square(n);
                max_err(&wirtinger_d(&ComplexField::from_fn(&c, f)), df, true)
            })
            .collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn trapezoid_integrates_bilinear_data_exactly() {
        let c = GridChart::new(0.0, 2.0, -1.0, 1.0, 9, 5).unwrap();
        let f = RealField::from_fn(&c, |z| 1.0 + z.re * z.im + z.re);
        assert!((integrate(&f) - 8.0).abs() < 1e-13);
    }

    #[test]
    fn mixed_derivative_is_quarter_laplacian() {
        let c = unit_square(65);
        let f = RealField::from_fn(&c, |z| z.norm_sqr());
        let l = d_dbar_real(&f);
        for (_, _, v) in l.iter_valid() {
            assert!((v - 1.0).abs() < 1e-10);
        }
    }
}
