use super::SpinorData;
use crate::cgrid::{sweep_antiderivative, RealField, Vec3Field};
use crate::error::{Error, Result};

/// Radius vector obtained by integrating `∂r`, `∂̄r`.
#[derive(Debug, Clone)]
pub struct Surface {
    /// `r` with `r(base) = 0`.
    pub r: Vec3Field,
    /// Largest cell circulation over the three components.
    pub loop_defect: f64,
    /// Largest imaginary part discarded when taking `r` real.
    pub imaginary_residue: f64,
    pub base: (usize, usize),
}

/// Integrates the closed-form `∂r`, `∂̄r` of `s` from `base`.
///
/// The integral is real for exact data; its imaginary part is checked against
/// `100·h²` before being dropped.
pub fn integrate_surface(s: &SpinorData, base: (usize, usize)) -> Result<Surface> {
    let chart = *s.chart();
    let dr = s.dr();
    let dbr = s.dbar_r();
    let mut comps: Vec<RealField> = Vec::with_capacity(3);
    let (mut loop_defect, mut imaginary_residue) = (0.0f64, 0.0f64);
    for k in 0..3 {
        let a = sweep_antiderivative(&dr[k], &dbr[k], base)?;
        loop_defect = loop_defect.max(a.loop_defect);
        imaginary_residue = imaginary_residue.max(a.value.im().max_magnitude());
        comps.push(a.value.re());
    }
    let limit = 100.0 * chart.h() * chart.h();
    if imaginary_residue > limit {
        return Err(Error::ImaginaryResidueTooLarge { residue: imaginary_residue, limit });
    }
    let [x, y, z]: [RealField; 3] = comps.try_into().expect("three components");
    let r = Vec3Field::new([x, y, z])?;
    if r.valid_count() == 0 {
        return Err(Error::EmptyGeometry);
    }
    Ok(Surface { r, loop_defect, imaginary_residue, base })
}
