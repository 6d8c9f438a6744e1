//! Angle sums, vertex curvature and the combinatorial Gauss–Bonnet check.

use serde::Serialize;

use crate::complex::{Complex2, VertexId};
use crate::error::Error;
use crate::link::build_link;
use crate::Angle;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCurvature {
    pub vertex: VertexId,
    /// Sum of corner angles at the vertex.
    pub angle_sum: Angle,
    pub chi_link: i64,
    pub kappa: Angle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurvatureReport {
    pub vertices: Vec<VertexCurvature>,
    pub total: Angle,
    /// `Σκ - 2π`; present only for complexes marked as disk diagrams.
    pub gauss_bonnet_residual: Option<Angle>,
}

/// Total corner angle at `v`.
pub fn angle_sum(x: &Complex2, v: &VertexId) -> Result<Angle, Error> {
    x.require_vertex(v)?;
    Ok(x.corners_at(v).map(|c| c.angle.clone()).sum())
}

/// `κ(v) = 2π − π·χ(Lk(v)) − S(v)`.
pub fn kappa(x: &Complex2, v: &VertexId) -> Result<Angle, Error> {
    let link = build_link(x, v)?;
    let s = angle_sum(x, v)?;
    Ok(Angle::two_pi() - Angle::pi() * link.euler_characteristic() - s)
}

fn vertex_record(x: &Complex2, v: &VertexId) -> Result<VertexCurvature, Error> {
    let link = build_link(x, v)?;
    let angle_sum = angle_sum(x, v)?;
    let chi_link = link.euler_characteristic();
    let kappa = Angle::two_pi() - Angle::pi() * chi_link - angle_sum.clone();
    Ok(VertexCurvature {
        vertex: v.clone(),
        angle_sum,
        chi_link,
        kappa,
    })
}

/// Per-vertex curvature table, vertices in lexicographic order.
pub fn curvature_report(x: &Complex2) -> CurvatureReport {
    let vertices: Vec<VertexCurvature> = x
        .sorted_vertices()
        .into_iter()
        .map(|v| vertex_record(x, v).expect("vertex of x"))
        .collect();
    let total: Angle = vertices.iter().map(|r| r.kappa.clone()).sum();
    let gauss_bonnet_residual = x
        .meta()
        .is_disk_diagram
        .then(|| total.clone() - Angle::two_pi());
    CurvatureReport {
        vertices,
        total,
        gauss_bonnet_residual,
    }
}

/// `Σκ(v) − 2π`; zero is consistent with Gauss–Bonnet for a planar simply
/// connected complex. Planarity and simple connectivity are taken from the
/// `is_disk_diagram` flag, not decided here.
pub fn gauss_bonnet_check(x: &Complex2) -> Result<Angle, Error> {
    if !x.meta().is_disk_diagram {
        return Err(Error::NotDiskDiagram);
    }
    Ok(curvature_report(x).total - Angle::two_pi())
}
