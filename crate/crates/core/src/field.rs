use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::grid::RadialGrid;

/// Nodal values of a radial function, tagged with its harmonic sector `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    l: u32,
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>, l: u32) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(
                "values",
                alloc::format!("expected {} nodal values, got {}", grid.len(), values.len()),
            ));
        }
        Ok(RadialField { grid, values, l })
    }

    pub fn from_fn(grid: Arc<RadialGrid>, l: u32, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        RadialField { grid, values, l }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
