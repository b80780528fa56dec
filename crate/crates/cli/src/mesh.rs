//! Triangle meshes of grid surfaces in OBJ text form.

use std::fmt::Write;

use cmc_core::cgrid::Vec3Field;
use cmc_core::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 3]>,
    pub normals: Vec<[f64; 3]>,
    /// Zero-based vertex indices, counter-clockwise in the chart.
    pub faces: Vec<[usize; 3]>,
}

/// One vertex per point valid in both `r` and `n`; each grid quad whose four
/// corners are valid becomes two triangles.
pub fn build_mesh(r: &Vec3Field, n: &Vec3Field) -> Result<TriMesh> {
    let chart = *r.chart();
    let (nx, ny) = chart.shape();
    let mut index = vec![None; nx * ny];
    let mut vertices = Vec::new();
    let mut normals = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            if let (Some(v), Some(nv)) = (r.get(i, j), n.get(i, j)) {
                index[j * nx + i] = Some(vertices.len());
                vertices.push(v);
                normals.push(nv);
            }
        }
    }
    if vertices.is_empty() {
        return Err(Error::EmptyGeometry);
    }
    let mut faces = Vec::new();
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let corner = |di: usize, dj: usize| index[(j + dj) * nx + i + di];
            if let (Some(a), Some(b), Some(c), Some(d)) = (corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)) {
                faces.push([a, b, c]);
                faces.push([a, c, d]);
            }
        }
    }
    Ok(TriMesh { vertices, normals, faces })
}

impl TriMesh {
    /// `v`, `vn` and `f a//a b//b c//c` records, one-based.
    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# {} vertices, {} faces", self.vertices.len(), self.faces.len()).ok();
        for v in &self.vertices {
            writeln!(out, "v {} {} {}", v[0], v[1], v[2]).ok();
        }
        for n in &self.normals {
            writeln!(out, "vn {} {} {}", n[0], n[1], n[2]).ok();
        }
        for f in &self.faces {
            let [a, b, c] = f.map(|k| k + 1);
            writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}").ok();
        }
        out
    }
}
