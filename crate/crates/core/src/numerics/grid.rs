use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Minimum number of cells accepted by [`RadialGrid::new`].
pub const MIN_CELLS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grading {
    Uniform,
    /// `r_i = scale * sinh(i * ds)`: spacing `~ scale * ds` near the origin,
    /// geometric growth beyond `r ~ scale`.
    Sinh { scale: f64 },
}

impl Default for Grading {
    fn default() -> Self {
        Grading::Sinh { scale: 1.0 }
    }
}

/// Nodes `0 = r_0 < ... < r_N = R_max` with the dual finite-volume mesh.
///
/// Dual faces sit at the midpoints `r_{i+1/2}`; cell `i` is the shell between
/// the faces around `r_i` (a ball for `i = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    grading: Grading,
    dim: u32,
    sphere: f64,
    volumes: Vec<f64>,
    transmissibility: Vec<f64>,
}

impl RadialGrid {
    pub fn new(r_max: f64, cells: usize, grading: Grading, dim: u32) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::invalid("R_max", "must be positive and finite"));
        }
        if cells < MIN_CELLS {
            return Err(Error::invalid("N", format!("need at least {MIN_CELLS} cells")));
        }
        if dim == 0 {
            return Err(Error::invalid("d", "dimension must be at least 1"));
        }
        // r^d and the shell volumes must stay finite.
        if dim as f64 * math::ln(r_max) > 690.0 {
            return Err(Error::invalid("R_max", format!("R_max^{dim} overflows")));
        }
        let nodes: Vec<f64> = match grading {
            Grading::Uniform => (0..=cells).map(|i| r_max * i as f64 / cells as f64).collect(),
            Grading::Sinh { scale } => {
                if !(scale > 0.0) || !scale.is_finite() {
                    return Err(Error::invalid("grid.scale", "must be positive"));
                }
                let ds = math::asinh(r_max / scale) / cells as f64;
                let mut nodes: Vec<f64> =
                    (0..=cells).map(|i| scale * math::sinh(i as f64 * ds)).collect();
                nodes[cells] = r_max;
                nodes
            }
        };
        Self::from_nodes(nodes, grading, dim)
    }

    /// Arbitrary nodes; must start at 0 and increase strictly.
    pub fn from_nodes(nodes: Vec<f64>, grading: Grading, dim: u32) -> Result<Self> {
        if nodes.len() < 2 || nodes[0] != 0.0 {
            return Err(Error::SingularGrid("nodes must start at r = 0".into()));
        }
        if let Some(i) = (1..nodes.len()).find(|&i| !(nodes[i] > nodes[i - 1])) {
            return Err(Error::SingularGrid(format!(
                "nodes {} and {} coincide or decrease ({} >= {})",
                i - 1,
                i,
                nodes[i - 1],
                nodes[i]
            )));
        }
        let n = nodes.len();
        let sphere = math::sphere_area(dim);
        let df = dim as f64;
        let ball = |r: f64| sphere * math::pow(r, df) / df;
        let mut volumes = Vec::with_capacity(n);
        let mut transmissibility = Vec::with_capacity(n - 1);
        let mut inner = 0.0;
        for i in 0..n {
            let outer = if i + 1 < n {
                let face = 0.5 * (nodes[i] + nodes[i + 1]);
                transmissibility.push(
                    sphere * math::pow(face, df - 1.0) / (nodes[i + 1] - nodes[i]),
                );
                face
            } else {
                nodes[i]
            };
            // Shell volume as a difference of nested balls, written so that
            // thin far-field shells keep their relative accuracy.
            let vol = if inner == 0.0 {
                ball(outer)
            } else {
                -ball(outer) * math::expm1(df * math::ln(inner / outer))
            };
            volumes.push(vol);
            inner = outer;
        }
        Ok(RadialGrid { nodes, grading, dim, sphere, volumes, transmissibility })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn r_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Number of nodes, `N + 1`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    /// `|S^{d-1}|`.
    pub fn sphere_area(&self) -> f64 {
        self.sphere
    }

    /// Dual cell volumes in `R^d`; they sum to the volume of the ball `B_{R_max}`.
    pub fn cell_volumes(&self) -> &[f64] {
        &self.volumes
    }

    /// `|S^{d-1}| r_{i+1/2}^{d-1} / (r_{i+1} - r_i)` for each interior face.
    pub fn transmissibility(&self) -> &[f64] {
        &self.transmissibility
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_nodes() {
        let g = RadialGrid::new(10.0, 100, Grading::Uniform, 3).unwrap();
        for (i, &r) in g.nodes().iter().enumerate() {
            assert!((r - i as f64 / 10.0).abs() < 1e-14);
        }
    }

    #[test]
    fn volumes_sum_to_ball() {
        let g = RadialGrid::new(7.0, 64, Grading::default(), 5).unwrap();
        let total: f64 = g.cell_volumes().iter().sum();
        let ball = math::sphere_area(5) * math::pow(7.0, 5.0) / 5.0;
        assert!((total / ball - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(RadialGrid::new(0.0, 32, Grading::Uniform, 3).is_err());
        assert!(RadialGrid::new(-1.0, 32, Grading::Uniform, 3).is_err());
        assert!(RadialGrid::new(1.0, 8, Grading::Uniform, 3).is_err());
        assert!(RadialGrid::from_nodes(alloc::vec![0.0, 1.0, 1.0], Grading::Uniform, 3).is_err());
        assert!(RadialGrid::from_nodes(alloc::vec![0.5, 1.0], Grading::Uniform, 3).is_err());
    }
}
