use std::ops::{Add, Div, Mul, Neg, Sub};

use ndarray::Array2;
use num_complex::Complex64;

use super::chart::GridChart;
use crate::error::{Error, Result};

/// Validity flags, `true` = usable sample. Indexed `[[i, j]]` like the values.
pub type Mask = Array2<bool>;

/// Scalar types a [`Field`] can carry.
pub trait Sample: Copy + Default + PartialEq + std::fmt::Debug {
    fn is_finite_sample(&self) -> bool;
    fn magnitude(&self) -> f64;
}

impl Sample for f64 {
    fn is_finite_sample(&self) -> bool {
        self.is_finite()
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Sample for Complex64 {
    fn is_finite_sample(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Anything that lives on a chart with a validity mask.
pub trait Masked {
    fn chart(&self) -> &GridChart;
    fn mask(&self) -> &Mask;
}

/// Samples of a scalar function on a [`GridChart`].
///
/// Masked samples hold `T::default()` and never take part in arithmetic
/// results: the mask of any combination is the AND of its inputs, and
/// non-finite results are masked rather than stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    chart: GridChart,
    values: Array2<T>,
    mask: Mask,
}

pub type ComplexField = Field<Complex64>;
pub type RealField = Field<f64>;

impl<T: Sample> Masked for Field<T> {
    fn chart(&self) -> &GridChart {
        &self.chart
    }
    fn mask(&self) -> &Mask {
        &self.mask
    }
}

/// AND of the masks of `sources`; panics if they do not share one chart.
pub fn joint_mask(chart: &GridChart, sources: &[&dyn Masked]) -> Mask {
    let mut mask = Mask::from_elem(chart.shape(), true);
    for s in sources {
        assert_eq!(s.chart(), chart, "fields live on different charts");
        mask.zip_mut_with(s.mask(), |a, &b| *a = *a && b);
    }
    mask
}

impl<T: Sample> Field<T> {
    pub fn new(chart: GridChart, values: Array2<T>, mask: Mask) -> Result<Self> {
        let shape = chart.shape();
        for dim in [values.dim(), mask.dim()] {
            if dim != shape {
                return Err(Error::DimensionMismatch { expected: shape, got: dim });
            }
        }
        let mut f = Self { chart, values, mask };
        f.scrub();
        Ok(f)
    }

    /// Samples `f(z)` at every grid point.
    pub fn from_fn(chart: &GridChart, mut f: impl FnMut(Complex64) -> T) -> Self {
        Self::from_index_fn(chart, |i, j| Some(f(chart.z(i, j))))
    }

    /// Builds a field point by point; `None` masks the point.
    pub fn from_index_fn(chart: &GridChart, mut f: impl FnMut(usize, usize) -> Option<T>) -> Self {
        let mut mask = Mask::from_elem(chart.shape(), false);
        let values = Array2::from_shape_fn(chart.shape(), |(i, j)| match f(i, j) {
            Some(v) if v.is_finite_sample() => {
                mask[[i, j]] = true;
                v
            }
            _ => T::default(),
        });
        Self { chart: *chart, values, mask }
    }

    /// Evaluates `f` wherever every source is valid.
    pub fn combine(chart: &GridChart, sources: &[&dyn Masked], mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mask = joint_mask(chart, sources);
        Self::from_index_fn(chart, |i, j| if mask[[i, j]] { Some(f(i, j)) } else { None })
    }

    pub fn constant(chart: &GridChart, v: T) -> Self {
        Self::from_index_fn(chart, |_, _| Some(v))
    }

    pub fn chart(&self) -> &GridChart {
        &self.chart
    }
    pub fn mask(&self) -> &Mask {
        &self.mask
    }
    pub fn values(&self) -> &Array2<T> {
        &self.values
    }

    /// Raw value, `T::default()` at masked points.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[[i, j]]
    }

    #[inline]
    pub fn is_valid(&self, i: usize, j: usize) -> bool {
        self.mask[[i, j]]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<T> {
        if self.chart.contains(i, j) && self.mask[[i, j]] {
            Some(self.values[[i, j]])
        } else {
            None
        }
    }

    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.valid_count() == 0
    }

    pub fn iter_valid(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.values.indexed_iter().filter(|((i, j), _)| self.mask[[*i, *j]]).map(|((i, j), &v)| (i, j, v))
    }

    pub fn map<U: Sample>(&self, mut f: impl FnMut(T) -> U) -> Field<U> {
        Field::from_index_fn(&self.chart, |i, j| if self.mask[[i, j]] { Some(f(self.values[[i, j]])) } else { None })
    }

    /// Pointwise combination; the result mask is the AND of both masks.
    ///
    /// Panics when the charts differ; use [`Field::try_zip_with`] to get an error instead.
    pub fn zip_with<U: Sample, V: Sample>(&self, other: &Field<U>, mut f: impl FnMut(T, U) -> V) -> Field<V> {
        Field::combine(&self.chart, &[self, other], |i, j| f(self.values[[i, j]], other.values[[i, j]]))
    }

    pub fn try_zip_with<U: Sample, V: Sample>(&self, other: &Field<U>, f: impl FnMut(T, U) -> V) -> Result<Field<V>> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        Ok(self.zip_with(other, f))
    }

    /// Masks every point where `mask` is false.
    pub fn and_mask(mut self, mask: &Mask) -> Self {
        self.mask.zip_mut_with(mask, |a, &b| *a = *a && b);
        self.scrub();
        self
    }

    /// Masks points where `pred(i, j, value)` holds.
    pub fn mask_where(mut self, mut pred: impl FnMut(usize, usize, T) -> bool) -> Self {
        for ((i, j), m) in self.mask.indexed_iter_mut() {
            if *m && pred(i, j, self.values[[i, j]]) {
                *m = false;
            }
        }
        self.scrub();
        self
    }

    /// Masks the band of `width` points along the chart boundary.
    pub fn trimmed(self, width: usize) -> Self {
        if width == 0 {
            return self;
        }
        let chart = self.chart;
        self.mask_where(|i, j, _| chart.edge_distance(i, j) < width)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.iter_valid().map(|(_, _, v)| v.magnitude()).fold(0.0, f64::max)
    }

    /// Panics if any unmasked sample is non-finite.
    pub fn assert_finite(&self) {
        for (i, j, v) in self.iter_valid() {
            assert!(v.is_finite_sample(), "non-finite sample {v:?} at ({i}, {j})");
        }
    }

    fn scrub(&mut self) {
        for ((i, j), v) in self.values.indexed_iter_mut() {
            if self.mask[[i, j]] && !v.is_finite_sample() {
                self.mask[[i, j]] = false;
            }
            if !self.mask[[i, j]] {
                *v = T::default();
            }
        }
    }
}

impl ComplexField {
    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }
    pub fn re(&self) -> RealField {
        self.map(|v| v.re)
    }
    pub fn im(&self) -> RealField {
        self.map(|v| v.im)
    }
    pub fn abs(&self) -> RealField {
        self.map(|v| v.norm())
    }
    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }
}

impl RealField {
    pub fn to_complex(&self) -> ComplexField {
        self.map(|v| Complex64::new(v, 0.0))
    }
    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }
    pub fn ln(&self) -> Self {
        self.map(f64::ln)
    }
}

macro_rules! field_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<T> $tr<&Field<T>> for &Field<T>
        where
            T: Sample + $tr<Output = T>,
        {
            type Output = Field<T>;
            fn $method(self, rhs: &Field<T>) -> Field<T> {
                self.zip_with(rhs, |a, b| a $op b)
            }
        }
    };
}

field_binop!(Add, add, +);
field_binop!(Sub, sub, -);
field_binop!(Mul, mul, *);
field_binop!(Div, div, /);

impl<T: Sample + Neg<Output = T>> Neg for &Field<T> {
    type Output = Field<T>;
    fn neg(self) -> Field<T> {
        self.map(|v| -v)
    }
}

/// Three real components sharing one chart and one mask (radius vector, normal).
#[derive(Debug, Clone, PartialEq)]
pub struct Vec3Field {
    components: [RealField; 3],
}

impl Masked for Vec3Field {
    fn chart(&self) -> &GridChart {
        self.components[0].chart()
    }
    fn mask(&self) -> &Mask {
        self.components[0].mask()
    }
}

impl Vec3Field {
    /// Joins three components; masks are ANDed so all three agree.
    pub fn new(components: [RealField; 3]) -> Result<Self> {
        let chart = *components[0].chart();
        if components.iter().any(|c| *c.chart() != chart) {
            return Err(Error::ChartMismatch);
        }
        let mask = joint_mask(&chart, &[&components[0], &components[1], &components[2]]);
        let components = components.map(|c| c.and_mask(&mask));
        Ok(Self { components })
    }

    pub fn from_index_fn(chart: &GridChart, mut f: impl FnMut(usize, usize) -> Option<[f64; 3]>) -> Self {
        let mut data = Array2::from_elem(chart.shape(), None);
        for ((i, j), slot) in data.indexed_iter_mut() {
            *slot = f(i, j).filter(|v: &[f64; 3]| v.iter().all(|c| c.is_finite()));
        }
        let comp = |k: usize| RealField::from_index_fn(chart, |i, j| data[[i, j]].map(|v| v[k]));
        Self { components: [comp(0), comp(1), comp(2)] }
    }

    pub fn constant(chart: &GridChart, v: [f64; 3]) -> Self {
        Self::from_index_fn(chart, |_, _| Some(v))
    }

    pub fn chart(&self) -> &GridChart {
        self.components[0].chart()
    }
    pub fn mask(&self) -> &Mask {
        self.components[0].mask()
    }
    pub fn component(&self, k: usize) -> &RealField {
        &self.components[k]
    }
    pub fn components(&self) -> &[RealField; 3] {
        &self.components
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> [f64; 3] {
        [self.components[0].at(i, j), self.components[1].at(i, j), self.components[2].at(i, j)]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<[f64; 3]> {
        self.components[0].get(i, j).map(|_| self.at(i, j))
    }

    pub fn valid_count(&self) -> usize {
        self.components[0].valid_count()
    }

    pub fn norm(&self) -> RealField {
        RealField::combine(self.chart(), &[self], |i, j| {
            let v = self.at(i, j);
            (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
        })
    }

    pub fn and_mask(self, mask: &Mask) -> Self {
        Self { components: self.components.map(|c| c.and_mask(mask)) }
    }

    pub fn negated(&self) -> Self {
        Self { components: [-&self.components[0], -&self.components[1], -&self.components[2]] }
    }

    pub fn iter_valid(&self) -> impl Iterator<Item = (usize, usize, [f64; 3])> + '_ {
        self.components[0].iter_valid().map(move |(i, j, _)| (i, j, self.at(i, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> GridChart {
        GridChart::square(-1.0, 1.0, 5).unwrap()
    }

    #[test]
    fn combination_masks_are_anded() {
        let c = chart();
        let a = ComplexField::from_fn(&c, |z| z).mask_where(|i, _, _| i == 0);
        let b = ComplexField::from_fn(&c, |z| z * z).mask_where(|_, j, _| j == 4);
        let s = &a + &b;
        assert!(!s.is_valid(0, 2));
        assert!(!s.is_valid(2, 4));
        assert!(s.is_valid(2, 2));
        assert_eq!(s.valid_count(), 16);
    }

    #[test]
    fn non_finite_results_are_masked() {
        let c = chart();
        let f = RealField::from_fn(&c, |z| 1.0 / z.re);
        assert!(!f.is_valid(2, 0));
        assert_eq!(f.at(2, 0), 0.0);
        f.assert_finite();
    }

    #[test]
    fn wrong_shapes_are_rejected() {
        let c = chart();
        let bad = Field::new(c, Array2::<f64>::zeros((4, 5)), Mask::from_elem((5, 5), true));
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn try_zip_reports_chart_mismatch() {
        let a = RealField::constant(&chart(), 1.0);
        let b = RealField::constant(&GridChart::square(0.0, 1.0, 5).unwrap(), 1.0);
        assert!(matches!(a.try_zip_with(&b, |x, y| x + y), Err(Error::ChartMismatch)));
    }

    #[test]
    fn trimming_masks_the_edge_band() {
        let f = RealField::constant(&chart(), 1.0).trimmed(1);
        assert_eq!(f.valid_count(), 9);
        assert!(!f.is_valid(0, 2) && f.is_valid(1, 1));
    }

    #[test]
    fn vector_field_shares_one_mask() {
        let c = chart();
        let x = RealField::constant(&c, 1.0).mask_where(|i, _, _| i == 1);
        let y = RealField::constant(&c, 2.0);
        let z = RealField::constant(&c, 2.0).mask_where(|_, j, _| j == 3);
        let v = Vec3Field::new([x, y, z]).unwrap();
        assert!(!v.component(1).is_valid(1, 0));
        assert!(!v.component(0).is_valid(0, 3));
        assert_eq!(v.get(0, 0), Some([1.0, 2.0, 2.0]));
        assert_eq!(v.norm().at(0, 0), 3.0);
    }
}
