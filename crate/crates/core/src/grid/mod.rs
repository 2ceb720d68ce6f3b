//! Regular Cartesian solution box, node-centred fields and region masks.
//!
//! All quantities live on the same nodes (collocated layout). Nodes are
//! stored with the first axis varying fastest: the flat index of node
//! `(i, j, k)` is `i + n0 * (j + n1 * k)`. Two-dimensional grids carry a
//! degenerate third axis with a single node.

mod field;
mod mask;

pub use field::{ScalarField, VectorField};
pub use mask::{build_mask, embed, extract, AxisBox, NodeTag, Prescribed, RegionId, RegionMask};

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 8;

/// Regular grid in two or three dimensions.
///
/// Bounded axes sample `[lo, hi]` including both endpoints; periodic axes
/// sample `[lo, hi)` and omit the duplicate endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    n: [usize; 3],
    lo: [f64; 3],
    hi: [f64; 3],
    periodic: [bool; 3],
}

impl GridSpec {
    pub fn new(n: &[usize], lo: &[f64], hi: &[f64], periodic: &[bool]) -> Result<Self> {
        let dim = n.len();
        if !(2..=3).contains(&dim) {
            return Err(Error::Grid(format!("dimension must be 2 or 3, got {dim}")));
        }
        if lo.len() != dim || hi.len() != dim || periodic.len() != dim {
            return Err(Error::Grid("per-axis lists must all have length dim".into()));
        }
        let mut grid = GridSpec {
            dim,
            n: [1; 3],
            lo: [0.0; 3],
            hi: [1.0; 3],
            periodic: [false; 3],
        };
        for a in 0..dim {
            if n[a] < MIN_NODES {
                return Err(Error::Grid(format!(
                    "axis {a} has {} nodes, need at least {MIN_NODES}",
                    n[a]
                )));
            }
            if !(lo[a].is_finite() && hi[a].is_finite() && hi[a] > lo[a]) {
                return Err(Error::Grid(format!(
                    "axis {a} bounds [{}, {}] are not an increasing finite interval",
                    lo[a], hi[a]
                )));
            }
            grid.n[a] = n[a];
            grid.lo[a] = lo[a];
            grid.hi[a] = hi[a];
            grid.periodic[a] = periodic[a];
        }
        Ok(grid)
    }

    /// Same node count and bounds on every axis, all bounded.
    pub fn bounded(dim: usize, n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(&vec![n; dim], &vec![lo; dim], &vec![hi; dim], &vec![false; dim])
    }

    /// Same node count and bounds on every axis, all periodic.
    pub fn periodic(dim: usize, n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(&vec![n; dim], &vec![lo; dim], &vec![hi; dim], &vec![true; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Node counts; the unused third axis of a 2D grid reports 1.
    pub fn shape(&self) -> [usize; 3] {
        self.n
    }

    pub fn n(&self, axis: usize) -> usize {
        self.n[axis]
    }

    pub fn lo(&self, axis: usize) -> f64 {
        self.lo[axis]
    }

    pub fn hi(&self, axis: usize) -> f64 {
        self.hi[axis]
    }

    pub fn is_periodic(&self, axis: usize) -> bool {
        axis < self.dim && self.periodic[axis]
    }

    pub fn fully_periodic(&self) -> bool {
        (0..self.dim).all(|a| self.periodic[a])
    }

    pub fn fully_bounded(&self) -> bool {
        (0..self.dim).all(|a| !self.periodic[a])
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    /// Node spacing along `axis`.
    pub fn h(&self, axis: usize) -> f64 {
        if axis >= self.dim {
            return 1.0;
        }
        let intervals = if self.periodic[axis] {
            self.n[axis]
        } else {
            self.n[axis] - 1
        };
        self.extent(axis) / intervals as f64
    }

    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n[0] * (j + self.n[1] * k)
    }

    #[inline]
    pub fn unravel(&self, p: usize) -> [usize; 3] {
        let i = p % self.n[0];
        let r = p / self.n[0];
        [i, r % self.n[1], r / self.n[1]]
    }

    /// Flat-index stride of `axis`.
    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        match axis {
            0 => 1,
            1 => self.n[0],
            _ => self.n[0] * self.n[1],
        }
    }

    #[inline]
    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        self.lo[axis] + i as f64 * self.h(axis)
    }

    /// Physical position of a flat node index (unused axes are 0).
    pub fn position(&self, p: usize) -> [f64; 3] {
        let idx = self.unravel(p);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.coord(a, idx[a]);
        }
        x
    }

    /// True when the node lies on a bounded face of the box (part of Γ_D).
    pub fn on_bounded_edge(&self, idx: [usize; 3]) -> bool {
        (0..self.dim).any(|a| !self.periodic[a] && (idx[a] == 0 || idx[a] + 1 == self.n[a]))
    }

    /// Distance, in nodes, to the nearest bounded face. `usize::MAX` when every
    /// axis is periodic.
    pub fn edge_distance(&self, idx: [usize; 3]) -> usize {
        (0..self.dim)
            .filter(|&a| !self.periodic[a])
            .map(|a| idx[a].min(self.n[a] - 1 - idx[a]))
            .min()
            .unwrap_or(usize::MAX)
    }

    /// Quadrature weight of a node: trapezoidal on bounded axes, uniform on
    /// periodic ones. The weights sum to the box volume.
    pub fn weight(&self, idx: [usize; 3]) -> f64 {
        (0..self.dim)
            .map(|a| {
                let h = self.h(a);
                if !self.periodic[a] && (idx[a] == 0 || idx[a] + 1 == self.n[a]) {
                    0.5 * h
                } else {
                    h
                }
            })
            .product()
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim).map(|a| self.extent(a)).product()
    }

    /// Neighbour of `p` one node along `axis` in direction `forward`, wrapping on
    /// periodic axes. `None` past a bounded edge.
    #[inline]
    pub fn neighbor(&self, p: usize, axis: usize, forward: bool) -> Option<usize> {
        let idx = self.unravel(p);
        let n = self.n[axis];
        let i = idx[axis];
        let s = self.stride(axis);
        if forward {
            if i + 1 < n {
                Some(p + s)
            } else if self.periodic[axis] {
                Some(p + s - n * s)
            } else {
                None
            }
        } else if i > 0 {
            Some(p - s)
        } else if self.periodic[axis] {
            Some(p + (n - 1) * s)
        } else {
            None
        }
    }
}
