use std::collections::BTreeMap;
use std::fmt;

use super::{GridSpec, VectorField};
use crate::error::{Error, Result};

/// Relative slack (in units of node spacing) used when deciding whether a
/// node lies on a box face, so that faces falling exactly on nodes are
/// classified regardless of rounding in the node coordinates.
const FACE_SLACK: f64 = 1e-9;

/// Closed axis-aligned box. Only the first `dim` axes are consulted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisBox {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl AxisBox {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Self {
        AxisBox { lo, hi }
    }

    /// `{ x : ||x - center||_inf <= half_width }`.
    pub fn centered(center: [f64; 3], half_width: f64) -> Self {
        AxisBox {
            lo: center.map(|c| c - half_width),
            hi: center.map(|c| c + half_width),
        }
    }

    pub fn contains(&self, grid: &GridSpec, x: [f64; 3]) -> bool {
        (0..grid.dim()).all(|a| {
            let eps = FACE_SLACK * grid.h(a);
            x[a] >= self.lo[a] - eps && x[a] <= self.hi[a] + eps
        })
    }
}

/// Identifies one obstacle or one given-velocity region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionId {
    Solid(usize),
    Given(usize),
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionId::Solid(i) => write!(f, "solid{i}"),
            RegionId::Given(i) => write!(f, "given{i}"),
        }
    }
}

/// Classification of a single node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeTag {
    Fluid,
    Solid(usize),
    Given(usize),
    Margin,
}

impl NodeTag {
    pub fn region(self) -> Option<RegionId> {
        match self {
            NodeTag::Solid(i) => Some(RegionId::Solid(i)),
            NodeTag::Given(i) => Some(RegionId::Given(i)),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            NodeTag::Fluid => "fluid",
            NodeTag::Solid(_) => "solid",
            NodeTag::Given(_) => "given",
            NodeTag::Margin => "margin",
        }
    }
}

/// Prescribed constant velocity for every solid / given region.
pub type Prescribed = BTreeMap<RegionId, Vec<f64>>;

/// Per-node partition of the solution box into flow domain, obstacles,
/// given-velocity regions and the zero-velocity margin.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMask {
    grid: GridSpec,
    tags: Vec<NodeTag>,
    margin_width: f64,
    solids: Vec<AxisBox>,
    givens: Vec<AxisBox>,
}

impl RegionMask {
    /// Every node is flow domain.
    pub fn all_fluid(grid: GridSpec) -> Self {
        RegionMask {
            grid,
            tags: vec![NodeTag::Fluid; grid.len()],
            margin_width: 0.0,
            solids: Vec::new(),
            givens: Vec::new(),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn tags(&self) -> &[NodeTag] {
        &self.tags
    }

    pub fn tag(&self, p: usize) -> NodeTag {
        self.tags[p]
    }

    pub fn margin_width(&self) -> f64 {
        self.margin_width
    }

    pub fn solids(&self) -> &[AxisBox] {
        &self.solids
    }

    pub fn givens(&self) -> &[AxisBox] {
        &self.givens
    }

    pub fn region_box(&self, id: RegionId) -> &AxisBox {
        match id {
            RegionId::Solid(i) => &self.solids[i],
            RegionId::Given(i) => &self.givens[i],
        }
    }

    pub fn regions(&self) -> impl Iterator<Item = RegionId> + '_ {
        (0..self.solids.len())
            .map(RegionId::Solid)
            .chain((0..self.givens.len()).map(RegionId::Given))
    }

    /// Node counts `(fluid, solid, given, margin)`.
    pub fn counts(&self) -> (usize, usize, usize, usize) {
        self.tags.iter().fold((0, 0, 0, 0), |(f, s, g, m), t| match t {
            NodeTag::Fluid => (f + 1, s, g, m),
            NodeTag::Solid(_) => (f, s + 1, g, m),
            NodeTag::Given(_) => (f, s, g + 1, m),
            NodeTag::Margin => (f, s, g, m + 1),
        })
    }

    /// Flow-domain node whose full centred stencil stays in the flow domain
    /// (and which is not on a bounded face of the box).
    pub fn is_fluid_interior(&self, p: usize) -> bool {
        if self.tags[p] != NodeTag::Fluid || self.grid.on_bounded_edge(self.grid.unravel(p)) {
            return false;
        }
        (0..self.grid.dim()).all(|a| {
            [true, false].iter().all(|&fwd| {
                self.grid
                    .neighbor(p, a, fwd)
                    .is_some_and(|q| self.tags[q] == NodeTag::Fluid)
            })
        })
    }

    /// Nodes of `id` that have at least one axis neighbour outside the region.
    pub fn region_boundary(&self, id: RegionId) -> Vec<usize> {
        let tag = match id {
            RegionId::Solid(i) => NodeTag::Solid(i),
            RegionId::Given(i) => NodeTag::Given(i),
        };
        (0..self.grid.len())
            .filter(|&p| self.tags[p] == tag)
            .filter(|&p| {
                (0..self.grid.dim()).any(|a| {
                    [true, false].iter().any(|&fwd| {
                        self.grid
                            .neighbor(p, a, fwd)
                            .is_none_or(|q| self.tags[q] != tag)
                    })
                })
            })
            .collect()
    }
}

/// Classifies every node of `grid`.
///
/// Nodes closer than `margin_width` to a face of the box become margin.
/// Among the remaining nodes, solids take precedence over given-velocity
/// regions, and earlier boxes over later ones.
pub fn build_mask(
    grid: &GridSpec,
    solids: &[AxisBox],
    givens: &[AxisBox],
    margin_width: f64,
) -> Result<RegionMask> {
    if !(margin_width.is_finite() && margin_width >= 0.0) {
        return Err(Error::Geometry(format!(
            "margin width must be a non-negative length, got {margin_width}"
        )));
    }
    for a in 0..grid.dim() {
        if 2.0 * margin_width >= grid.extent(a) {
            return Err(Error::Geometry(format!(
                "margin width {margin_width} leaves no interior on axis {a} (extent {})",
                grid.extent(a)
            )));
        }
    }
    for (kind, boxes) in [("solid", solids), ("given", givens)] {
        for (i, b) in boxes.iter().enumerate() {
            for a in 0..grid.dim() {
                let eps = FACE_SLACK * grid.h(a);
                let inner_lo = grid.lo(a) + margin_width;
                let inner_hi = grid.hi(a) - margin_width;
                if b.lo[a] > b.hi[a] || b.lo[a].is_nan() || b.hi[a].is_nan() {
                    return Err(Error::Geometry(format!("{kind} box {i} is inverted on axis {a}")));
                }
                if b.lo[a] < inner_lo - eps || b.hi[a] > inner_hi + eps {
                    return Err(Error::Geometry(format!(
                        "{kind} box {i} [{}, {}] on axis {a} overlaps the margin or leaves [{inner_lo}, {inner_hi}]",
                        b.lo[a], b.hi[a]
                    )));
                }
            }
        }
    }

    let tags = (0..grid.len())
        .map(|p| {
            let x = grid.position(p);
            let in_margin = (0..grid.dim()).any(|a| {
                let eps = FACE_SLACK * grid.h(a);
                x[a] - grid.lo(a) < margin_width - eps || grid.hi(a) - x[a] < margin_width - eps
            });
            if in_margin {
                NodeTag::Margin
            } else if let Some(i) = solids.iter().position(|b| b.contains(grid, x)) {
                NodeTag::Solid(i)
            } else if let Some(i) = givens.iter().position(|b| b.contains(grid, x)) {
                NodeTag::Given(i)
            } else {
                NodeTag::Fluid
            }
        })
        .collect();

    Ok(RegionMask {
        grid: *grid,
        tags,
        margin_width,
        solids: solids.to_vec(),
        givens: givens.to_vec(),
    })
}

/// Extends a flow-domain field to the whole box: `u_star` on fluid nodes,
/// the prescribed constant velocity on solid / given nodes, zero in the
/// margin.
pub fn embed(u_star: &VectorField, mask: &RegionMask, prescribed: &Prescribed) -> Result<VectorField> {
    let grid = *mask.grid();
    if *u_star.grid() != grid {
        return Err(Error::Shape("velocity and mask live on different grids".into()));
    }
    for id in mask.regions() {
        match prescribed.get(&id) {
            None => {
                return Err(Error::Config(format!("no prescribed velocity for region {id}")));
            }
            Some(v) if v.len() != grid.dim() => {
                return Err(Error::Config(format!(
                    "region {id} velocity has {} components, expected {}",
                    v.len(),
                    grid.dim()
                )));
            }
            Some(v) if v.iter().any(|x| !x.is_finite()) => {
                return Err(Error::Config(format!("region {id} velocity is not finite")));
            }
            _ => {}
        }
    }

    let mut out = u_star.clone();
    for (p, tag) in mask.tags().iter().enumerate() {
        match tag {
            NodeTag::Fluid => {}
            NodeTag::Margin => {
                for c in 0..grid.dim() {
                    out.component_mut(c)[p] = 0.0;
                }
            }
            NodeTag::Solid(_) | NodeTag::Given(_) => {
                let v = &prescribed[&tag.region().unwrap()];
                for (c, &vc) in v.iter().enumerate() {
                    out.component_mut(c)[p] = vc;
                }
            }
        }
    }
    Ok(out)
}

/// Restricts a box field to the flow domain. Values on margin, solid and
/// given nodes are discarded (set to zero); fluid values are copied as is.
pub fn extract(u_d: &VectorField, mask: &RegionMask) -> Result<VectorField> {
    if u_d.grid() != mask.grid() {
        return Err(Error::Shape("velocity and mask live on different grids".into()));
    }
    let mut out = u_d.clone();
    for (p, tag) in mask.tags().iter().enumerate() {
        if *tag != NodeTag::Fluid {
            for c in 0..out.dim() {
                out.component_mut(c)[p] = 0.0;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn margin_band_around_unit_box() {
        let g = GridSpec::bounded(2, 51, -1.25, 1.25).unwrap();
        let m = build_mask(&g, &[], &[], 0.25).unwrap();
        for p in 0..g.len() {
            let x = g.position(p);
            let outside = x[0].abs().max(x[1].abs()) > 1.0 + 1e-12;
            assert_eq!(m.tag(p) == NodeTag::Margin, outside, "node {x:?}");
        }
        let (f, s, gv, mg) = m.counts();
        assert_eq!(s + gv, 0);
        assert_eq!(f + mg, g.len());
        // nodes at +-1 are on the grid for n = 51 and stay fluid
        assert_eq!(f, 41 * 41);
    }

    #[test]
    fn zero_margin_keeps_everything_fluid() {
        let g = GridSpec::periodic(2, 64, 0.0, 2.0 * PI).unwrap();
        let sq = AxisBox::centered([PI, PI, 0.0], 10.0 * PI / 128.0);
        let m = build_mask(&g, &[sq], &[], 0.0).unwrap();
        let (f, s, gv, mg) = m.counts();
        assert_eq!(mg + gv, 0);
        assert_eq!(f + s, g.len());
        // half-width is 2.5 h on a 64 grid: indices 30..=34
        assert_eq!(s, 25);
    }

    #[test]
    fn square_is_centred() {
        let g = GridSpec::periodic(2, 256, 0.0, 2.0 * PI).unwrap();
        let sq = AxisBox::centered([PI, PI, 0.0], 10.0 * PI / 128.0);
        let m = build_mask(&g, &[sq], &[], 0.0).unwrap();
        let solid: Vec<_> = (0..g.len()).filter(|&p| m.tag(p) == NodeTag::Solid(0)).collect();
        // faces fall exactly on nodes 118 and 138
        assert_eq!(solid.len(), 21 * 21);
        let first = g.unravel(solid[0]);
        let last = g.unravel(*solid.last().unwrap());
        assert_eq!((first[0], first[1]), (118, 118));
        assert_eq!((last[0], last[1]), (138, 138));
        assert_eq!(m.region_boundary(RegionId::Solid(0)).len(), 4 * 20);
    }

    #[test]
    fn geometry_errors() {
        let g = GridSpec::bounded(2, 32, -1.25, 1.25).unwrap();
        let big = AxisBox::centered([0.0; 3], 1.1);
        assert!(matches!(build_mask(&g, &[big], &[], 0.25), Err(Error::Geometry(_))));
        assert!(matches!(build_mask(&g, &[], &[], 1.25), Err(Error::Geometry(_))));
        assert!(matches!(build_mask(&g, &[], &[], -0.1), Err(Error::Geometry(_))));
        assert!(build_mask(&g, &[AxisBox::centered([0.0; 3], 1.0)], &[], 0.25).is_ok());
    }

    #[test]
    fn embed_places_prescribed_velocity() {
        let g = GridSpec::periodic(2, 64, 0.0, 2.0 * PI).unwrap();
        let sq = AxisBox::centered([PI, PI, 0.0], 0.5);
        let m = build_mask(&g, &[sq], &[], 0.0).unwrap();
        let zero = VectorField::zeros(g);
        assert!(matches!(embed(&zero, &m, &Prescribed::new()), Err(Error::Config(_))));

        let pres = Prescribed::from([(RegionId::Solid(0), vec![1.0, 0.0])]);
        let u = embed(&zero, &m, &pres).unwrap();
        for p in 0..g.len() {
            let expect = if sq.contains(&g, g.position(p)) { 1.0 } else { 0.0 };
            assert_eq!(u.component(0)[p], expect);
            assert_eq!(u.component(1)[p], 0.0);
        }
    }

    #[test]
    fn embed_rejects_wrong_velocity_length() {
        let g = GridSpec::periodic(2, 16, 0.0, 1.0).unwrap();
        let m = build_mask(&g, &[], &[AxisBox::centered([0.5; 3], 0.1)], 0.0).unwrap();
        let pres = Prescribed::from([(RegionId::Given(0), vec![1.0, 0.0, 0.0])]);
        assert!(embed(&VectorField::zeros(g), &m, &pres).is_err());
    }

    #[test]
    fn all_fluid_embed_and_extract_are_identity() {
        let g = GridSpec::bounded(2, 16, 0.0, 1.0).unwrap();
        let m = RegionMask::all_fluid(g);
        let u = VectorField::from_fn(g, |x| [x[0].sin(), x[1].exp(), 0.0]);
        let e = embed(&u, &m, &Prescribed::new()).unwrap();
        assert_eq!(e, u);
        assert_eq!(extract(&e, &m).unwrap(), u);
    }

    #[test]
    fn fluid_interior_excludes_wall_neighbours() {
        let g = GridSpec::bounded(2, 21, -1.25, 1.25).unwrap();
        let m = build_mask(&g, &[], &[], 0.25).unwrap();
        for p in 0..g.len() {
            if m.is_fluid_interior(p) {
                for a in 0..2 {
                    for fwd in [true, false] {
                        let q = g.neighbor(p, a, fwd).unwrap();
                        assert_eq!(m.tag(q), NodeTag::Fluid);
                    }
                }
            }
        }
    }
}
