//! Geometric foundations: vectors, bases, unit cells, superbases and their
//! seven partial sums, plus the transformations used to build alternative
//! descriptions of the same lattice (orthogonal maps, unimodular changes).

use nalgebra::{Matrix3, Matrix3x4, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Integer change-of-basis matrix. Row `k` holds the coefficients of the
/// k-th new vector in terms of the old ones.
pub type IntMatrix = Matrix3<i64>;

/// Default relative tolerance used across the crate.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Unordered index pairs of a superbase in the canonical 2×3 layout
/// `[[23, 13, 12], [01, 02, 03]]`. Column `c` pairs `LAYOUT[c]` with
/// `LAYOUT[c + 3]`; both entries of a column use complementary indices.
pub const LAYOUT: [(usize, usize); 6] = [(2, 3), (1, 3), (1, 2), (0, 1), (0, 2), (0, 3)];

/// Position of the unordered pair `{i, j}` in [`LAYOUT`].
pub fn pair_slot(i: usize, j: usize) -> Option<usize> {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    LAYOUT.iter().position(|&p| p == (a, b))
}

fn check_finite(v: &Vec3) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Three linearly independent vectors generating a lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis {
    vectors: [Vec3; 3],
}

impl Basis {
    pub fn new(v1: Vec3, v2: Vec3, v3: Vec3) -> Result<Self> {
        for v in [&v1, &v2, &v3] {
            check_finite(v)?;
        }
        let det = Matrix3::from_rows(&[v1.transpose(), v2.transpose(), v3.transpose()]).determinant();
        let scale = v1.norm() * v2.norm() * v3.norm();
        if det == 0.0 || det.abs() <= 1e-14 * scale {
            return Err(Error::DegenerateBasis { det });
        }
        Ok(Basis { vectors: [v1, v2, v3] })
    }

    /// Basis from nine numbers, one vector per row.
    pub fn from_rows(m: [f64; 9]) -> Result<Self> {
        Basis::new(
            Vec3::new(m[0], m[1], m[2]),
            Vec3::new(m[3], m[4], m[5]),
            Vec3::new(m[6], m[7], m[8]),
        )
    }

    pub fn from_matrix(m: &Matrix3<f64>) -> Result<Self> {
        Basis::new(m.row(0).transpose(), m.row(1).transpose(), m.row(2).transpose())
    }

    pub fn vectors(&self) -> &[Vec3; 3] {
        &self.vectors
    }

    /// Vectors as matrix rows.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_rows(&[
            self.vectors[0].transpose(),
            self.vectors[1].transpose(),
            self.vectors[2].transpose(),
        ])
    }

    pub fn to_rows(&self) -> [f64; 9] {
        let mut out = [0.0; 9];
        for (k, v) in self.vectors.iter().enumerate() {
            out[3 * k..3 * k + 3].copy_from_slice(v.as_slice());
        }
        out
    }

    pub fn determinant(&self) -> f64 {
        self.matrix().determinant()
    }

    pub fn gram(&self) -> Matrix3<f64> {
        let m = self.matrix();
        m * m.transpose()
    }

    /// The basis whose vectors are the rows of `u · B`. For unimodular `u`
    /// this generates the same lattice.
    pub fn transformed(&self, u: &IntMatrix) -> Result<Self> {
        Basis::from_matrix(&(u.map(|x| x as f64) * self.matrix()))
    }

    /// Applies `q` to every vector.
    pub fn rotated(&self, q: &Matrix3<f64>) -> Result<Self> {
        let [a, b, c] = self.vectors;
        Basis::new(q * a, q * b, q * c)
    }
}

/// Crystallographic cell parameters; angles are in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitCell {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl UnitCell {
    pub fn new(a: f64, b: f64, c: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let cell = UnitCell { a, b, c, alpha, beta, gamma };
        cell.validate()?;
        Ok(cell)
    }

    fn validate(&self) -> Result<()> {
        let all = [self.a, self.b, self.c, self.alpha, self.beta, self.gamma];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidCell("non-finite parameter".into()));
        }
        if self.a <= 0.0 || self.b <= 0.0 || self.c <= 0.0 {
            return Err(Error::InvalidCell("cell lengths must be positive".into()));
        }
        for (name, angle) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if angle <= 0.0 || angle >= 180.0 {
                return Err(Error::InvalidCell(format!("{name} = {angle} is outside (0, 180)")));
            }
        }
        let g = self.reduced_gram_determinant();
        if g <= 1e-12 {
            return Err(Error::InvalidCell(format!("angles give non-positive Gram determinant {g:e}")));
        }
        Ok(())
    }

    /// `1 - cos²α - cos²β - cos²γ + 2 cosα cosβ cosγ`, the Gram determinant
    /// divided by `(abc)²`.
    fn reduced_gram_determinant(&self) -> f64 {
        let (ca, cb, cg) = (
            cos_deg(self.alpha),
            cos_deg(self.beta),
            cos_deg(self.gamma),
        );
        1.0 - ca * ca - cb * cb - cg * cg + 2.0 * ca * cb * cg
    }

    /// Conventional Cartesian frame: `v1` along +x, `v2` in the xy-plane and
    /// `v3` with positive z-component.
    pub fn to_basis(&self) -> Result<Basis> {
        self.validate()?;
        let (ca, cb) = (cos_deg(self.alpha), cos_deg(self.beta));
        let cg = cos_deg(self.gamma);
        let sg = if self.gamma == 90.0 { 1.0 } else { self.gamma.to_radians().sin() };
        let v1 = Vec3::new(self.a, 0.0, 0.0);
        let v2 = Vec3::new(self.b * cg, self.b * sg, 0.0);
        let cx = cb;
        let cy = (ca - cb * cg) / sg;
        let cz = (1.0 - cx * cx - cy * cy).max(0.0).sqrt();
        let v3 = Vec3::new(self.c * cx, self.c * cy, self.c * cz);
        Basis::new(v1, v2, v3)
    }

    /// Cell parameters read off the Gram matrix of a basis.
    pub fn from_basis(basis: &Basis) -> UnitCell {
        let [v1, v2, v3] = basis.vectors();
        let angle = |x: &Vec3, y: &Vec3| (x.dot(y) / (x.norm() * y.norm())).clamp(-1.0, 1.0).acos().to_degrees();
        UnitCell {
            a: v1.norm(),
            b: v2.norm(),
            c: v3.norm(),
            alpha: angle(v2, v3),
            beta: angle(v1, v3),
            gamma: angle(v1, v2),
        }
    }
}

/// Cosine of an angle in degrees, exact at the common right and hexagonal angles.
fn cos_deg(angle: f64) -> f64 {
    match angle {
        90.0 => 0.0,
        60.0 => 0.5,
        120.0 => -0.5,
        a => a.to_radians().cos(),
    }
}

/// Four vectors `v0, v1, v2, v3` summing to zero, with `(v1, v2, v3)` a basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superbase {
    vectors: [Vec3; 4],
}

impl Superbase {
    /// Validates the zero-sum invariant relative to the longest vector.
    pub fn new(vectors: [Vec3; 4]) -> Result<Self> {
        for v in &vectors {
            check_finite(v)?;
        }
        let sum: Vec3 = vectors.iter().sum();
        let scale = vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if sum.norm() > 1e-9 * scale {
            return Err(Error::NotSuperbase { residual: sum.norm() });
        }
        Basis::new(vectors[1], vectors[2], vectors[3])?;
        Ok(Superbase { vectors })
    }

    pub(crate) fn new_unchecked(vectors: [Vec3; 4]) -> Self {
        Superbase { vectors }
    }

    pub fn from_basis(basis: &Basis) -> Self {
        let [v1, v2, v3] = *basis.vectors();
        Superbase { vectors: [-(v1 + v2 + v3), v1, v2, v3] }
    }

    pub fn vectors(&self) -> &[Vec3; 4] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> Vec3 {
        self.vectors[i]
    }

    pub fn basis(&self) -> Basis {
        Basis { vectors: [self.vectors[1], self.vectors[2], self.vectors[3]] }
    }

    /// Conorm `p_ij = -v_i · v_j`.
    pub fn conorm(&self, i: usize, j: usize) -> f64 {
        -self.vectors[i].dot(&self.vectors[j])
    }

    /// Sign of `det(v1, v2, v3)`.
    pub fn orientation(&self) -> i8 {
        if self.basis().determinant() >= 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn max_length(&self) -> f64 {
        self.vectors.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Sum of the seven vonorms.
    pub fn vonorm_sum(&self) -> f64 {
        partial_sums(self).vectors.iter().map(|v| v.norm_squared()).sum()
    }

    /// Maps every vector by the orthogonal matrix `q`.
    pub fn apply_orthogonal(&self, q: &Matrix3<f64>) -> Result<Self> {
        check_orthogonal(q, DEFAULT_REL_TOL)?;
        Ok(Superbase { vectors: self.vectors.map(|v| q * v) })
    }

    /// Reflection in the xy-plane.
    pub fn mirrored(&self) -> Self {
        Superbase { vectors: self.vectors.map(|v| Vec3::new(v.x, v.y, -v.z)) }
    }

    pub(crate) fn as_matrix(&self) -> Matrix3x4<f64> {
        Matrix3x4::from_columns(&self.vectors)
    }
}

pub fn check_orthogonal(q: &Matrix3<f64>, tol: f64) -> Result<()> {
    let deviation = (q.transpose() * q - Matrix3::identity()).abs().max();
    if !deviation.is_finite() || deviation > tol.max(1e-12) {
        return Err(Error::NotOrthogonal { deviation });
    }
    Ok(())
}

/// The seven partial-sum representatives `v0, v1, v2, v3, v01, v02, v03`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSums {
    pub vectors: [Vec3; 7],
}

impl PartialSums {
    pub const LABELS: [&'static str; 7] = ["v0", "v1", "v2", "v3", "v01", "v02", "v03"];

    pub fn lengths(&self) -> [f64; 7] {
        self.vectors.map(|v| v.norm())
    }

    pub fn vonorms(&self) -> [f64; 7] {
        self.vectors.map(|v| v.norm_squared())
    }
}

pub fn partial_sums(sb: &Superbase) -> PartialSums {
    let [v0, v1, v2, v3] = sb.vectors;
    PartialSums { vectors: [v0, v1, v2, v3, v0 + v1, v0 + v2, v0 + v3] }
}

/// Deterministic random unimodular matrix. Built from a bounded sequence of
/// elementary row operations: adding integer multiples of one row to another
/// (rejected if an entry would exceed `bound`), row swaps and row negations.
pub fn random_unimodular(seed: u64, bound: i64) -> IntMatrix {
    let bound = bound.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = IntMatrix::identity();
    for _ in 0..24 {
        let i = rng.gen_range(0..3);
        let j = (i + rng.gen_range(1..3)) % 3;
        let k: i64 = if rng.gen_bool(0.5) { rng.gen_range(1..=2) } else { -rng.gen_range(1..=2) };
        let mut candidate = u;
        for col in 0..3 {
            candidate[(i, col)] += k * u[(j, col)];
        }
        if candidate.iter().all(|x| x.abs() <= bound) {
            u = candidate;
        }
    }
    if rng.gen_bool(0.5) {
        let i = rng.gen_range(0..3);
        let j = (i + rng.gen_range(1..3)) % 3;
        u.swap_rows(i, j);
    }
    if rng.gen_bool(0.5) {
        let i = rng.gen_range(0..3);
        for col in 0..3 {
            u[(i, col)] = -u[(i, col)];
        }
    }
    u
}

/// Determinant of an integer 3×3 matrix in exact arithmetic.
pub fn int_determinant(u: &IntMatrix) -> i64 {
    u[(0, 0)] * (u[(1, 1)] * u[(2, 2)] - u[(1, 2)] * u[(2, 1)])
        - u[(0, 1)] * (u[(1, 0)] * u[(2, 2)] - u[(1, 2)] * u[(2, 0)])
        + u[(0, 2)] * (u[(1, 0)] * u[(2, 1)] - u[(1, 1)] * u[(2, 0)])
}

/// Least-squares orthogonal alignment of `b` onto `a` over O(3), then the
/// largest residual vector length.
///
/// This is an upper bound on the Chebyshev distance minimized over all
/// orthogonal maps, since the aligning map is only optimal in the L2 sense.
pub fn superbase_distance(a: &Superbase, b: &Superbase) -> Result<f64> {
    for sb in [a, b] {
        Superbase::new(sb.vectors)?;
    }
    let (target, source) = (a.as_matrix(), b.as_matrix());
    let h = source * target.transpose();
    let svd = h.svd(true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::InvalidArgument("alignment SVD did not converge".into())),
    };
    let rotation = v_t.transpose() * u.transpose();
    let aligned = rotation * source;
    Ok((0..4).map(|k| (aligned.column(k) - target.column(k)).norm()).fold(0.0, f64::max))
}

/// Rotation by `angle` radians about a unit `axis` (Rodrigues formula).
pub fn rotation(axis: &Vec3, angle: f64) -> Matrix3<f64> {
    let k = axis.normalize();
    let kx = Matrix3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
    Matrix3::identity() + kx * angle.sin() + kx * kx * (1.0 - angle.cos())
}
