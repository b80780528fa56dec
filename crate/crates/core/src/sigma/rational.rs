//! Rational functions of one complex variable on coefficient lists.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients, lowest degree first, without trailing zeros (the zero polynomial is empty).
pub type Coeffs = Vec<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub(crate) fn trim(mut p: Coeffs) -> Coeffs {
    while p.last() == Some(&ZERO) {
        p.pop();
    }
    p
}

pub(crate) fn degree(p: &[Complex64]) -> usize {
    p.len().saturating_sub(1)
}

pub fn poly_add(a: &[Complex64], b: &[Complex64]) -> Coeffs {
    let mut out = vec![ZERO; a.len().max(b.len())];
    for (k, v) in a.iter().enumerate() {
        out[k] += v;
    }
    for (k, v) in b.iter().enumerate() {
        out[k] += v;
    }
    trim(out)
}

pub fn poly_neg(a: &[Complex64]) -> Coeffs {
    a.iter().map(|v| -v).collect()
}

pub fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Coeffs {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Horner evaluation.
pub fn poly_eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

pub(crate) fn poly_derivative(p: &[Complex64]) -> Coeffs {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
}

/// Divides by `(z − r)`, dropping the remainder.
fn deflate(p: &[Complex64], r: Complex64) -> Coeffs {
    let n = p.len();
    let mut out = vec![ZERO; n - 1];
    let mut carry = ZERO;
    for k in (1..n).rev() {
        carry = p[k] + carry * r;
        out[k - 1] = carry;
    }
    trim(out)
}

/// All complex roots by Durand–Kerner iteration followed by Newton polishing.
pub fn poly_roots(p: &[Complex64]) -> Vec<Complex64> {
    let p = trim(p.to_vec());
    let n = degree(&p);
    if p.len() <= 1 {
        return Vec::new();
    }
    let lead = p[n];
    let monic: Coeffs = p.iter().map(|c| c / lead).collect();
    // Cauchy bound for the initial circle
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    // starts spread around a circle, off any symmetry axis
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..1000 {
        let mut change = 0.0f64;
        for i in 0..n {
            let num = poly_eval(&monic, roots[i]);
            let mut den = ONE;
            for j in 0..n {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            if den == ZERO {
                den = Complex64::new(1e-12, 0.0);
            }
            let step = num / den;
            roots[i] -= step;
            change = change.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if change < 1e-15 {
            break;
        }
    }
    let dp = poly_derivative(&monic);
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = poly_eval(&dp, *r);
            if d.norm() == 0.0 {
                break;
            }
            let step = poly_eval(&monic, *r) / d;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    roots
}

/// `ρ(z) = N(z)/D(z)` in lowest terms with monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    num: Coeffs,
    den: Coeffs,
}

/// Highest degree the parser and constructors accept.
pub const DEGREE_CAP: usize = 64;

impl RationalMap {
    /// Builds and reduces `num/den`: common factors `z^k` are removed exactly,
    /// other common roots are matched within `1e-6·(1 + |r|)` and deflated, and
    /// the denominator is scaled to be monic. The degree cap applies once the
    /// powers of `z` are cancelled.
    pub fn new(num: Coeffs, den: Coeffs) -> Result<Self> {
        let mut num = trim(num);
        let mut den = trim(den);
        if den.is_empty() {
            return Err(Error::NonRational("denominator is identically zero".into()));
        }
        if num.iter().chain(den.iter()).any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonRational("non-finite coefficient".into()));
        }
        if num.is_empty() {
            return Ok(Self { num, den: vec![ONE] });
        }
        let common = num.iter().zip(&den).take_while(|(a, b)| **a == ZERO && **b == ZERO).count();
        num.drain(..common);
        den.drain(..common);
        let deg = degree(&num).max(degree(&den));
        if deg > DEGREE_CAP {
            return Err(Error::DegreeCap(deg));
        }
        if degree(&num) > 0 && degree(&den) > 0 {
            let mut num_roots = poly_roots(&num);
            for rd in poly_roots(&den) {
                let tol = 1e-6 * (1.0 + rd.norm());
                if let Some(k) = num_roots.iter().position(|rn| (rn - rd).norm() <= tol) {
                    let rn = num_roots.swap_remove(k);
                    num = deflate(&num, rn);
                    den = deflate(&den, rd);
                }
            }
        }
        let lead = *den.last().expect("non-empty");
        if lead != ONE {
            num = num.iter().map(|c| c / lead).collect();
            den = den.iter().map(|c| c / lead).collect();
        }
        Ok(Self { num, den })
    }

    pub fn polynomial(num: Coeffs) -> Result<Self> {
        Self::new(num, vec![ONE])
    }

    /// The identity map `ρ(z) = z`.
    pub fn identity() -> Self {
        Self { num: vec![ZERO, ONE], den: vec![ONE] }
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.num
    }
    pub fn denominator(&self) -> &[Complex64] {
        &self.den
    }

    /// `max(deg N, deg D)`.
    pub fn degree(&self) -> usize {
        if self.num.is_empty() {
            return 0;
        }
        degree(&self.num).max(degree(&self.den))
    }

    pub fn is_constant(&self) -> bool {
        degree(&self.num) == 0 && degree(&self.den) == 0
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        poly_eval(&self.num, z) / poly_eval(&self.den, z)
    }

    /// `ρ′(z) = (N′D − ND′)/D²`, evaluated directly.
    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        let d = poly_eval(&self.den, z);
        let n = poly_eval(&self.num, z);
        (poly_eval(&poly_derivative(&self.num), z) * d - n * poly_eval(&poly_derivative(&self.den), z)) / (d * d)
    }

    /// `ρ′` as a reduced rational map.
    pub fn derivative(&self) -> Result<Self> {
        let top = poly_add(
            &poly_mul(&poly_derivative(&self.num), &self.den),
            &poly_neg(&poly_mul(&self.num, &poly_derivative(&self.den))),
        );
        Self::new(top, poly_mul(&self.den, &self.den))
    }

    /// Roots of the denominator.
    pub fn poles(&self) -> Vec<Complex64> {
        poly_roots(&self.den)
    }
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({}{}{}i)", c.re, if c.im < 0.0 { "" } else { "+" }, c.im)
    }
}

fn fmt_poly(p: &[Complex64]) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != ZERO)
        .map(|(k, c)| match k {
            0 => fmt_coeff(*c),
            1 => format!("{}*z", fmt_coeff(*c)),
            _ => format!("{}*z^{k}", fmt_coeff(*c)),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Canonical text form, readable back by the expression parser.
impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == [ONE] {
            write!(f, "{}", fmt_poly(&self.num))
        } else {
            write!(f, "({})/({})", fmt_poly(&self.num), fmt_poly(&self.den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(v: &[f64]) -> Coeffs {
        v.iter().map(|&x| c(x, 0.0)).collect()
    }

    #[test]
    fn roots_of_known_polynomials() {
        let mut r = poly_roots(&real(&[-1.0, 0.0, 1.0]));
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-12 && (r[1] - c(1.0, 0.0)).norm() < 1e-12);
        let r = poly_roots(&real(&[1.0, 0.0, 1.0]));
        assert!(r.iter().all(|z| (z * z + 1.0).norm() < 1e-12));
        // (z − 1)²(z + 2i)
        let p = poly_mul(&poly_mul(&real(&[-1.0, 1.0]), &real(&[-1.0, 1.0])), &[c(0.0, 2.0), ONE]);
        for z in poly_roots(&p) {
            assert!(poly_eval(&p, z).norm() < 1e-10);
        }
    }

    #[test]
    fn common_factors_cancel() {
        // (z² − 1)/(z − 1) = z + 1
        let m = RationalMap::new(real(&[-1.0, 0.0, 1.0]), real(&[-1.0, 1.0])).unwrap();
        assert_eq!(m.denominator().len(), 1);
        assert!((m.numerator()[0] - ONE).norm() < 1e-12 && (m.numerator()[1] - ONE).norm() < 1e-12);
        // z³/z = z², exactly
        let m = RationalMap::new(real(&[0.0, 0.0, 0.0, 1.0]), real(&[0.0, 1.0])).unwrap();
        assert_eq!(m, RationalMap::polynomial(real(&[0.0, 0.0, 1.0])).unwrap());
    }

    #[test]
    fn denominator_is_monic() {
        let m = RationalMap::new(real(&[2.0]), real(&[0.0, 4.0])).unwrap();
        assert_eq!(m.numerator(), &real(&[0.5])[..]);
        assert_eq!(m.denominator(), &real(&[0.0, 1.0])[..]);
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(RationalMap::new(real(&[1.0]), vec![]).is_err());
        assert!(matches!(RationalMap::polynomial(vec![ONE; 70]), Err(Error::DegreeCap(69))));
    }

    #[test]
    fn derivative_matches_quotient_rule() {
        let m = RationalMap::new(real(&[1.0, 0.0, 1.0]), real(&[0.0, 1.0])).unwrap();
        let d = m.derivative().unwrap();
        for z in [c(0.3, 0.7), c(-1.2, 0.4), c(2.0, -3.0)] {
            let exact = ONE - ONE / (z * z);
            assert!((m.derivative_at(z) - exact).norm() < 1e-12);
            assert!((d.eval(z) - exact).norm() < 1e-10);
        }
    }

    #[test]
    fn display_is_canonical() {
        let m = RationalMap::new(vec![c(1.0, -2.0), ZERO, c(0.5, 0.0)], real(&[1.0, 0.0, 1.0])).unwrap();
        assert_eq!(m.to_string(), "((1-2i) + 0.5*z^2)/(1 + 1*z^2)");
        assert_eq!(RationalMap::identity().to_string(), "1*z");
        assert_eq!(RationalMap::polynomial(vec![]).unwrap().to_string(), "0");
    }
}
