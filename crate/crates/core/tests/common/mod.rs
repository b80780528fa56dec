#![allow(dead_code)]

use cmc_core::cgrid::GridChart;
use cmc_core::sigma::{instanton, RationalMap};
use cmc_core::weierstrass::families::cylinder;
use cmc_core::weierstrass::SpinorData;
use num_complex::Complex64;

pub fn cylinder_chart(n: usize) -> GridChart {
    GridChart::square(0.0, 3.0, n).unwrap()
}

pub fn sphere_chart(n: usize) -> GridChart {
    GridChart::square(-2.0, 2.0, n).unwrap()
}

pub fn cyl(n: usize) -> SpinorData {
    cylinder(1.0, &cylinder_chart(n)).unwrap()
}

pub fn sphere(n: usize) -> SpinorData {
    instanton(&RationalMap::identity(), &sphere_chart(n)).unwrap()
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn tol(h: f64, order: i32) -> f64 {
    50.0 * h.powi(order)
}
