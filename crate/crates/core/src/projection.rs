//! Projective coordinates of root-product triples and population density
//! grids over the quotient triangle (ordered triples) and the full triangle
//! (unordered triples).

use crate::error::{Error, Result};
use crate::forms::RootForm;

pub const DEFAULT_RESOLUTION: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleKind {
    /// Ordered triples; `x ∈ [0, 1/2]`, `y ∈ [0, 1/3]`.
    Quotient,
    /// Unordered triples; `x ∈ [-1/2, 1/2]`, `y ∈ [0, 1]`.
    Full,
}

impl TriangleKind {
    /// `(x_min, x_max, y_min, y_max)` of the bounding rectangle.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        match self {
            TriangleKind::Quotient => (0.0, 0.5, 0.0, 1.0 / 3.0),
            TriangleKind::Full => (-0.5, 0.5, 0.0, 1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrianglePoint {
    pub x: f64,
    pub y: f64,
    pub kind: TriangleKind,
}

impl TrianglePoint {
    fn clamped(x: f64, y: f64, kind: TriangleKind) -> Self {
        let (x0, x1, y0, y1) = kind.bounds();
        TrianglePoint { x: x.clamp(x0, x1), y: y.clamp(y0, y1), kind }
    }
}

fn normalized(t: [f64; 3]) -> Result<[f64; 3]> {
    if t.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidArgument(format!("triple must be finite and non-negative: {t:?}")));
    }
    let s: f64 = t.iter().sum();
    if s <= 0.0 {
        return Err(Error::DegenerateTriple);
    }
    Ok(t.map(|x| x / s))
}

/// Ordered triple `r23 ≤ r13 ≤ r12` → `((r̄12 - r̄13)/2, r̄23)`.
pub fn qt_project(t: [f64; 3]) -> Result<TrianglePoint> {
    let tol = 1e-12 * t.iter().fold(0.0, |m: f64, &x| m.max(x.abs()));
    if t[0] > t[1] + tol || t[1] > t[2] + tol {
        return Err(Error::UnorderedTriple(t));
    }
    let [r23, r13, r12] = normalized(t)?;
    Ok(TrianglePoint::clamped((r12 - r13) / 2.0, r23, TriangleKind::Quotient))
}

/// Unordered triple `(r01, r02, r03)` → `((r̄03 - r̄02)/2, r̄01)`.
pub fn ft_project(t: [f64; 3]) -> Result<TrianglePoint> {
    let [r01, r02, r03] = normalized(t)?;
    Ok(TrianglePoint::clamped((r03 - r02) / 2.0, r01, TriangleKind::Full))
}

/// Both projections of a root form; a row summing to zero gives `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedForm {
    pub qt: Option<TrianglePoint>,
    pub ft: Option<TrianglePoint>,
}

pub fn project_root_form(rf: &RootForm) -> Result<ProjectedForm> {
    let keep = |r: Result<TrianglePoint>| match r {
        Ok(p) => Ok(Some(p)),
        Err(Error::DegenerateTriple) => Ok(None),
        Err(e) => Err(e),
    };
    // An oriented form need not have an ordered top row.
    let mut top = rf.top();
    top.sort_by(f64::total_cmp);
    Ok(ProjectedForm { qt: keep(qt_project(top))?, ft: keep(ft_project(rf.bottom()))? })
}

/// Side lengths `a ≤ b ≤ c` of an orthorhombic lattice in the quotient triangle.
pub fn orthorhombic_project(a: f64, b: f64, c: f64) -> Result<TrianglePoint> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::InvalidArgument(format!("side length {a} must be positive")));
    }
    qt_project([a, b, c])
}

/// Integer counts over the bounding rectangle of a triangle. Cell
/// `(x_bin, y_bin)` is stored at `counts[y_bin * resolution + x_bin]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityGrid {
    pub kind: TriangleKind,
    pub resolution: usize,
    pub counts: Vec<u64>,
}

impl DensityGrid {
    pub fn new(kind: TriangleKind, resolution: usize) -> Self {
        DensityGrid { kind, resolution, counts: vec![0; resolution * resolution] }
    }

    /// Bin indices of a point; points on the upper edges land in the last bin.
    pub fn bin_of(&self, p: &TrianglePoint) -> (usize, usize) {
        let (x0, x1, y0, y1) = self.kind.bounds();
        let n = self.resolution;
        let bin = |v: f64, lo: f64, hi: f64| (((v - lo) / (hi - lo) * n as f64).floor().max(0.0) as usize).min(n - 1);
        (bin(p.x, x0, x1), bin(p.y, y0, y1))
    }

    pub fn count_at(&self, x_bin: usize, y_bin: usize) -> u64 {
        self.counts[y_bin * self.resolution + x_bin]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn add(&mut self, p: &TrianglePoint) -> Result<()> {
        if p.kind != self.kind {
            return Err(Error::MixedKinds);
        }
        let (bx, by) = self.bin_of(p);
        self.counts[by * self.resolution + bx] += 1;
        Ok(())
    }

    /// Sums two grids of the same shape.
    pub fn merge(&mut self, other: &DensityGrid) -> Result<()> {
        if other.kind != self.kind || other.resolution != self.resolution {
            return Err(Error::MixedKinds);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }
}

/// Bins points of one kind. An empty input gives a quotient-triangle grid of zeros.
pub fn accumulate_density(points: &[TrianglePoint], resolution: usize) -> Result<DensityGrid> {
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be at least 1".into()));
    }
    let kind = points.first().map_or(TriangleKind::Quotient, |p| p.kind);
    let mut grid = DensityGrid::new(kind, resolution);
    for p in points {
        grid.add(p)?;
    }
    Ok(grid)
}
