//! Continuous square roots on the grid.

use ndarray::Array2;
use num_complex::Complex64;

use super::field::{ComplexField, Mask, Masked};

/// Result of [`continue_sqrt`].
#[derive(Debug, Clone)]
pub struct BranchRoot {
    /// `root² = w` at every unmasked point.
    pub root: ComplexField,
    /// Points lying on a sign flip of `root` between grid neighbours.
    pub seam: Mask,
    /// Points that took the principal root because no neighbour was assigned yet.
    pub seeds: Vec<(usize, usize)>,
    /// First point where the chosen root was not closer to its reference than
    /// the reference is to zero (`|Δ| ≥ |reference|`), if any.
    pub ambiguous: Option<(usize, usize)>,
}

/// Square root of `w` continued along a row-major sweep.
///
/// Rows are lines of constant `y`. Each point takes whichever of `±√w` is
/// closer to its reference: the left neighbour if assigned, otherwise the
/// neighbour below. A point with neither starts a new seed on the principal
/// branch. Samples with `|w|` below `1e-12·max|w|` are accepted without the
/// continuity check.
pub fn continue_sqrt(w: &ComplexField) -> BranchRoot {
    let chart = *w.chart();
    let (nx, ny) = chart.shape();
    let tiny = 1e-12 * w.max_magnitude();
    let mut out: Array2<Option<Complex64>> = Array2::from_elem((nx, ny), None);
    let mut seeds = Vec::new();
    let mut ambiguous = None;
    for j in 0..ny {
        for i in 0..nx {
            let Some(v) = w.get(i, j) else { continue };
            let s = v.sqrt();
            let reference =
                (i > 0).then(|| out[[i - 1, j]]).flatten().or_else(|| (j > 0).then(|| out[[i, j - 1]]).flatten());
            let chosen = match reference {
                None => {
                    seeds.push((i, j));
                    s
                }
                Some(r) => {
                    let c = if (s - r).norm() <= (s + r).norm() { s } else { -s };
                    if ambiguous.is_none() && v.norm() > tiny && (c - r).norm() >= r.norm() {
                        ambiguous = Some((i, j));
                    }
                    c
                }
            };
            out[[i, j]] = Some(chosen);
        }
    }
    let root = ComplexField::from_index_fn(&chart, |i, j| out[[i, j]]);
    let seam = seam_mask(&[&root]);
    BranchRoot { root, seam, seeds, ambiguous }
}

/// Marks both ends of every neighbouring pair across which the vector
/// `(f₁, …, f_k)` flips direction, i.e. `Re Σ f(a)·conj(f(b)) < 0`.
///
/// Stencils that straddle such a pair would difference two different sheets
/// of a double-valued function, so callers mask the seam before differentiating.
pub fn seam_mask(fields: &[&ComplexField]) -> Mask {
    let chart = *fields[0].chart();
    let sources: Vec<&dyn Masked> = fields.iter().map(|f| *f as &dyn Masked).collect();
    let ok = super::field::joint_mask(&chart, &sources);
    let (nx, ny) = chart.shape();
    let mut seam = Mask::from_elem((nx, ny), false);
    let dot = |a: (usize, usize), b: (usize, usize)| -> f64 {
        fields.iter().map(|f| (f.at(a.0, a.1) * f.at(b.0, b.1).conj()).re).sum()
    };
    for i in 0..nx {
        for j in 0..ny {
            if !ok[[i, j]] {
                continue;
            }
            for nb in [(i + 1, j), (i, j + 1)] {
                if nb.0 < nx && nb.1 < ny && ok[[nb.0, nb.1]] && dot((i, j), nb) < 0.0 {
                    seam[[i, j]] = true;
                    seam[[nb.0, nb.1]] = true;
                }
            }
        }
    }
    seam
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cgrid::GridChart;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_takes_principal_root() {
        let ch = GridChart::square(-1.0, 1.0, 9).unwrap();
        let b = continue_sqrt(&ComplexField::constant(&ch, c(4.0, 0.0)));
        assert!(b.root.iter_valid().all(|(_, _, v)| v == c(2.0, 0.0)));
        assert_eq!(b.seeds, vec![(0, 0)]);
        assert!(b.ambiguous.is_none());
        assert!(!b.seam.iter().any(|&s| s));
    }

    #[test]
    fn square_of_z_is_continued_as_plus_or_minus_z() {
        // right half plane: no winding around 0
        let ch = GridChart::new(0.5, 2.0, -1.0, 1.0, 33, 33).unwrap();
        let w = ComplexField::from_fn(&ch, |z| z * z);
        let b = continue_sqrt(&w);
        let sign = b.root.at(0, 0) / ch.z(0, 0);
        assert!((sign.norm() - 1.0).abs() < 1e-12 && sign.im.abs() < 1e-12);
        for (i, j, v) in b.root.iter_valid() {
            assert!((v - sign * ch.z(i, j)).norm() < 1e-12);
            assert!((v * v - w.at(i, j)).norm() < 1e-12);
        }
        assert!(b.ambiguous.is_none());
    }

    #[test]
    fn winding_root_leaves_a_seam() {
        let ch = GridChart::square(-1.0, 1.0, 20).unwrap();
        let b = continue_sqrt(&ComplexField::from_fn(&ch, |z| z));
        for (i, j, v) in b.root.iter_valid() {
            assert!((v * v - ch.z(i, j)).norm() < 1e-12);
        }
        assert!(b.seam.iter().any(|&s| s));
    }

    #[test]
    fn disconnected_pieces_get_their_own_seeds() {
        let ch = GridChart::square(-1.0, 1.0, 11).unwrap();
        let w = ComplexField::constant(&ch, c(-1.0, 0.0)).mask_where(|_, j, _| j == 5);
        let b = continue_sqrt(&w);
        assert_eq!(b.seeds, vec![(0, 0), (0, 6)]);
    }
}
