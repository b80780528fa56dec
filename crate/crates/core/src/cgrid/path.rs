//! Trapezoidal line integrals `∫ fz dz + fzbar dz̄` along grid polylines, and
//! antiderivatives built by sweeping such integrals out from a base point.

use ndarray::Array2;
use num_complex::Complex64;

use super::chart::GridChart;
use super::field::{ComplexField, Mask, Masked};
use crate::error::{Error, Result};

/// A 4-connected polyline of grid indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPath {
    points: Vec<(usize, usize)>,
}

impl GridPath {
    pub fn new(points: Vec<(usize, usize)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidPath("empty path".into()));
        }
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            let step = a.0.abs_diff(b.0) + a.1.abs_diff(b.1);
            if step != 1 {
                return Err(Error::InvalidPath(format!("{a:?} -> {b:?} is not a unit step")));
            }
        }
        Ok(Self { points })
    }

    /// Straight run from `from` to `to`, which must share a row or a column.
    pub fn straight(from: (usize, usize), to: (usize, usize)) -> Result<Self> {
        let mut pts = vec![from];
        let mut cur = from;
        if from.0 != to.0 && from.1 != to.1 {
            return Err(Error::InvalidPath("endpoints share neither row nor column".into()));
        }
        while cur != to {
            cur = (step_towards(cur.0, to.0), step_towards(cur.1, to.1));
            pts.push(cur);
        }
        Self::new(pts)
    }

    /// Closed counter-clockwise loop around the index rectangle `[i0, i1] × [j0, j1]`.
    pub fn rectangle(i0: usize, j0: usize, i1: usize, j1: usize) -> Result<Self> {
        if i1 <= i0 || j1 <= j0 {
            return Err(Error::InvalidPath("degenerate rectangle".into()));
        }
        let mut pts = Vec::new();
        pts.extend((i0..i1).map(|i| (i, j0)));
        pts.extend((j0..j1).map(|j| (i1, j)));
        pts.extend((i0 + 1..=i1).rev().map(|i| (i, j1)));
        pts.extend((j0 + 1..=j1).rev().map(|j| (i0, j)));
        pts.push((i0, j0));
        Self::new(pts)
    }

    pub fn points(&self) -> &[(usize, usize)] {
        &self.points
    }
}

fn step_towards(a: usize, b: usize) -> usize {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => a + 1,
        std::cmp::Ordering::Greater => a - 1,
        std::cmp::Ordering::Equal => a,
    }
}

/// `(dz, dz̄)` for one unit step from `a` to `b`.
fn increments(chart: &GridChart, a: (usize, usize), b: (usize, usize)) -> (Complex64, Complex64) {
    if a.1 == b.1 {
        let dx = if b.0 > a.0 { chart.hx() } else { -chart.hx() };
        (Complex64::new(dx, 0.0), Complex64::new(dx, 0.0))
    } else {
        let dy = if b.1 > a.1 { chart.hy() } else { -chart.hy() };
        (Complex64::new(0.0, dy), Complex64::new(0.0, -dy))
    }
}

#[inline]
fn trapezoid(fz: &ComplexField, fzbar: &ComplexField, a: (usize, usize), b: (usize, usize)) -> Complex64 {
    let (dz, dzb) = increments(fz.chart(), a, b);
    (fz.at(a.0, a.1) + fz.at(b.0, b.1)) * 0.5 * dz + (fzbar.at(a.0, a.1) + fzbar.at(b.0, b.1)) * 0.5 * dzb
}

/// `∫ fz dz + fzbar dz̄` along `path` by the trapezoid rule on each step.
pub fn path_integrate(fz: &ComplexField, fzbar: &ComplexField, path: &GridPath) -> Result<Complex64> {
    if fz.chart() != fzbar.chart() {
        return Err(Error::ChartMismatch);
    }
    let chart = fz.chart();
    for &(i, j) in path.points() {
        if !chart.contains(i, j) {
            return Err(Error::InvalidPath(format!("({i}, {j}) is outside the chart")));
        }
        if !(fz.is_valid(i, j) && fzbar.is_valid(i, j)) {
            return Err(Error::PathThroughMask(i, j));
        }
    }
    Ok(path.points().windows(2).map(|w| trapezoid(fz, fzbar, w[0], w[1])).sum())
}

/// Order in which [`sweep_antiderivative_with`] visits the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOrder {
    /// Integrate along the base row, then up and down every column.
    RowFirst,
    /// Integrate along the base column, then left and right along every row.
    ColumnFirst,
}

/// `F` with `∂F ≈ fz`, `∂̄F ≈ fzbar`, plus the worst closed-cell circulation.
#[derive(Debug, Clone)]
pub struct Antiderivative {
    pub value: ComplexField,
    /// Max over grid cells of `|∮ fz dz + fzbar dz̄|`; zero up to
    /// discretization exactly when the pair is integrable.
    pub loop_defect: f64,
}

/// Row-first sweep from `base`; see [`sweep_antiderivative_with`].
pub fn sweep_antiderivative(fz: &ComplexField, fzbar: &ComplexField, base: (usize, usize)) -> Result<Antiderivative> {
    sweep_antiderivative_with(fz, fzbar, base, SweepOrder::RowFirst)
}

/// Integrates the pair from `base` (where `F = 0`) along straight grid runs.
///
/// Points that cannot be reached without crossing a masked sample stay masked.
pub fn sweep_antiderivative_with(
    fz: &ComplexField,
    fzbar: &ComplexField,
    base: (usize, usize),
    order: SweepOrder,
) -> Result<Antiderivative> {
    if fz.chart() != fzbar.chart() {
        return Err(Error::ChartMismatch);
    }
    let chart = *fz.chart();
    let ok = super::field::joint_mask(&chart, &[fz as &dyn Masked, fzbar]);
    if !chart.contains(base.0, base.1) || !ok[[base.0, base.1]] {
        return Err(Error::MaskedBase(base.0, base.1));
    }
    let mut out: Array2<Option<Complex64>> = Array2::from_elem(chart.shape(), None);
    out[[base.0, base.1]] = Some(Complex64::new(0.0, 0.0));

    let (nx, ny) = chart.shape();
    // walk from `start` in unit steps produced by `next` while samples are valid
    let run = |out: &mut Array2<Option<Complex64>>,
               start: (usize, usize),
               next: &dyn Fn((usize, usize)) -> Option<(usize, usize)>| {
        let mut cur = start;
        while let Some(nb) = next(cur) {
            if !ok[[nb.0, nb.1]] {
                break;
            }
            let v = out[[cur.0, cur.1]].unwrap() + trapezoid(fz, fzbar, cur, nb);
            out[[nb.0, nb.1]] = Some(v);
            cur = nb;
        }
    };
    let right = |p: (usize, usize)| (p.0 + 1 < nx).then(|| (p.0 + 1, p.1));
    let left = |p: (usize, usize)| (p.0 > 0).then(|| (p.0 - 1, p.1));
    let up = |p: (usize, usize)| (p.1 + 1 < ny).then(|| (p.0, p.1 + 1));
    let down = |p: (usize, usize)| (p.1 > 0).then(|| (p.0, p.1 - 1));

    match order {
        SweepOrder::RowFirst => {
            run(&mut out, base, &right);
            run(&mut out, base, &left);
            for i in 0..nx {
                if out[[i, base.1]].is_some() {
                    run(&mut out, (i, base.1), &up);
                    run(&mut out, (i, base.1), &down);
                }
            }
        }
        SweepOrder::ColumnFirst => {
            run(&mut out, base, &up);
            run(&mut out, base, &down);
            for j in 0..ny {
                if out[[base.0, j]].is_some() {
                    run(&mut out, (base.0, j), &right);
                    run(&mut out, (base.0, j), &left);
                }
            }
        }
    }

    let value = ComplexField::from_index_fn(&chart, |i, j| out[[i, j]]);
    let loop_defect = loop_defect(fz, fzbar);
    Ok(Antiderivative { value, loop_defect })
}

/// Counter-clockwise circulation around every grid cell whose four corners are valid.
///
/// Returns `(values, valid)` of shape `(nx − 1, ny − 1)`; cell `(i, j)` has
/// lower-left corner `(i, j)`.
pub fn cell_circulations(fz: &ComplexField, fzbar: &ComplexField) -> (Array2<Complex64>, Mask) {
    let chart = *fz.chart();
    let ok = super::field::joint_mask(&chart, &[fz as &dyn Masked, fzbar]);
    let (nx, ny) = chart.shape();
    let mut valid = Mask::from_elem((nx - 1, ny - 1), false);
    let values = Array2::from_shape_fn((nx - 1, ny - 1), |(i, j)| {
        let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
        if corners.iter().any(|&(a, b)| !ok[[a, b]]) {
            return Complex64::new(0.0, 0.0);
        }
        valid[[i, j]] = true;
        (0..4).map(|k| trapezoid(fz, fzbar, corners[k], corners[(k + 1) % 4])).sum()
    });
    (values, valid)
}

/// Worst cell circulation, see [`cell_circulations`].
pub fn loop_defect(fz: &ComplexField, fzbar: &ComplexField) -> f64 {
    let (values, valid) = cell_circulations(fz, fzbar);
    values.iter().zip(valid.iter()).filter(|(_, &ok)| ok).map(|(v, _)| v.norm()).fold(0.0, f64::max)
}
