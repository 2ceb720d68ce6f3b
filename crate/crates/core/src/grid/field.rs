use super::GridSpec;
use crate::error::{Error, Result};

/// Scalar samples on every node of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: GridSpec) -> Self {
        ScalarField {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_vec(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "scalar field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(ScalarField { grid, values })
    }

    /// Samples `f(x)` at every node.
    pub fn from_fn(grid: GridSpec, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values = (0..grid.len()).map(|p| f(grid.position(p))).collect();
        ScalarField { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
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

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

impl std::ops::Index<usize> for ScalarField {
    type Output = f64;
    fn index(&self, p: usize) -> &f64 {
        &self.values[p]
    }
}

/// A `dim`-component vector sampled on every node.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: GridSpec,
    components: Vec<Vec<f64>>,
}

impl VectorField {
    pub fn zeros(grid: GridSpec) -> Self {
        VectorField {
            grid,
            components: vec![vec![0.0; grid.len()]; grid.dim()],
        }
    }

    pub fn from_components(grid: GridSpec, components: Vec<Vec<f64>>) -> Result<Self> {
        if components.len() != grid.dim() {
            return Err(Error::Shape(format!(
                "{} components supplied for a {}D grid",
                components.len(),
                grid.dim()
            )));
        }
        if let Some(c) = components.iter().find(|c| c.len() != grid.len()) {
            return Err(Error::Shape(format!(
                "component has {} values, grid has {} nodes",
                c.len(),
                grid.len()
            )));
        }
        Ok(VectorField { grid, components })
    }

    pub fn from_scalars(fields: Vec<ScalarField>) -> Result<Self> {
        let grid = *fields
            .first()
            .ok_or_else(|| Error::Shape("no components".into()))?
            .grid();
        if fields.iter().any(|f| *f.grid() != grid) {
            return Err(Error::Shape("components live on different grids".into()));
        }
        Self::from_components(grid, fields.into_iter().map(ScalarField::into_values).collect())
    }

    /// Samples `f(x)` at every node; `f` returns all three slots, of which
    /// the first `dim` are kept.
    pub fn from_fn(grid: GridSpec, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut out = Self::zeros(grid);
        for p in 0..grid.len() {
            let v = f(grid.position(p));
            for (c, comp) in out.components.iter_mut().enumerate() {
                comp[p] = v[c];
            }
        }
        out
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.components[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.components[c]
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn scalar(&self, c: usize) -> ScalarField {
        ScalarField {
            grid: self.grid,
            values: self.components[c].clone(),
        }
    }

    /// Velocity vector at node `p`, padded with zeros to three slots.
    pub fn at(&self, p: usize) -> [f64; 3] {
        let mut v = [0.0; 3];
        for (c, comp) in self.components.iter().enumerate() {
            v[c] = comp[p];
        }
        v
    }

    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest Euclidean node speed.
    pub fn max_norm(&self) -> f64 {
        (0..self.grid.len())
            .map(|p| self.components.iter().map(|c| c[p] * c[p]).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().flatten().all(|v| v.is_finite())
    }

    /// `a * self + b * other`.
    pub fn axpby(&self, a: f64, other: &VectorField, b: f64) -> Result<VectorField> {
        if other.grid != self.grid {
            return Err(Error::Shape("fields live on different grids".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(x, y)| x.iter().zip(y).map(|(x, y)| a * x + b * y).collect())
            .collect();
        Ok(VectorField {
            grid: self.grid,
            components,
        })
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(&self, other: &VectorField) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .flat_map(|(x, y)| x.iter().zip(y).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    /// Per-component arithmetic mean over all nodes.
    pub fn mean(&self) -> Vec<f64> {
        let n = self.grid.len() as f64;
        self.components.iter().map(|c| c.iter().sum::<f64>() / n).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_checks() {
        let g = GridSpec::bounded(2, 8, 0.0, 1.0).unwrap();
        assert!(ScalarField::from_vec(g, vec![0.0; 63]).is_err());
        assert!(VectorField::from_components(g, vec![vec![0.0; 64]]).is_err());
        assert!(VectorField::from_components(g, vec![vec![0.0; 64], vec![0.0; 60]]).is_err());
        assert!(VectorField::from_components(g, vec![vec![0.0; 64]; 2]).is_ok());
    }

    #[test]
    fn from_fn_samples_nodes() {
        let g = GridSpec::bounded(2, 8, 0.0, 7.0).unwrap();
        let u = VectorField::from_fn(g, |x| [x[0], 2.0 * x[1], 99.0]);
        let p = g.index(3, 5, 0);
        assert_eq!(u.at(p), [3.0, 10.0, 0.0]);
        assert_eq!(u.dim(), 2);
    }
}
