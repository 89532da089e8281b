//! Rebuilds an obtuse superbase from a root form, up to isometry.

use crate::error::{Error, Result};
use crate::forms::{coform_to_voform, RootForm};
use crate::lattice::{Superbase, Vec3};

/// Slack allowed on cosines before an angle is declared impossible.
const COS_SLACK: f64 = 1e-9;

fn clamp_cos(c: f64, what: &str) -> Result<f64> {
    if !c.is_finite() || c.abs() > 1.0 + COS_SLACK {
        return Err(Error::NonRealizable(format!("cos {what} = {c}")));
    }
    Ok(c.clamp(-1.0, 1.0))
}

/// Places `v0` on +x and `v1` in the upper xy-half-plane, fixes `v2` from its
/// angles to both, and closes with `v3 = -v0 - v1 - v2`.
///
/// Of the two mirror positions of `v2`, an oriented form takes the one that
/// makes `(v1, v2, v3)` right-handed; a non-oriented form takes `z ≥ 0`.
pub fn reconstruct_superbase(rf: &RootForm) -> Result<Superbase> {
    let cf = rf.to_coform();
    let vf = coform_to_voform(&cf);
    let len: [f64; 4] = std::array::from_fn(|i| vf.v[i].max(0.0).sqrt());
    let scale = len.iter().fold(0.0, |m: f64, &x| m.max(x));
    if scale == 0.0 || len.iter().any(|&l| l <= 1e-12 * scale) {
        return Err(Error::DegenerateForm(format!("zero-length superbase vector, lengths {len:?}")));
    }

    let c01 = clamp_cos(-cf.get(0, 1) / (len[0] * len[1]), "(v0, v1)")?;
    let s01 = (1.0 - c01 * c01).sqrt();
    if s01 <= 1e-12 {
        return Err(Error::DegenerateForm("v0 and v1 are collinear".into()));
    }
    let c02 = clamp_cos(-cf.get(0, 2) / (len[0] * len[2]), "(v0, v2)")?;
    let c12 = clamp_cos(-cf.get(1, 2) / (len[1] * len[2]), "(v1, v2)")?;

    let v0 = Vec3::new(len[0], 0.0, 0.0);
    let v1 = Vec3::new(len[1] * c01, len[1] * s01, 0.0);
    // Unit direction of v2: x from its angle to v0, y from its angle to v1.
    let ux = c02;
    let uy = (c12 - c01 * c02) / s01;
    let uz2 = 1.0 - ux * ux - uy * uy;
    if uz2 < -COS_SLACK {
        return Err(Error::NonRealizable(format!("angles of v2 cannot close (z² = {uz2:e})")));
    }
    let uz = uz2.max(0.0).sqrt();
    if uz <= 1e-12 {
        return Err(Error::DegenerateForm("v0, v1, v2 are coplanar".into()));
    }
    // det(v1, v2, v3) = -det(v0, v1, v2), whose sign is that of z(v2).
    let z = if rf.oriented { -uz } else { uz };
    let v2 = Vec3::new(ux, uy, z) * len[2];
    let v3 = -(v0 + v1 + v2);
    Superbase::new([v0, v1, v2, v3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{conorms_of, root_form};
    use crate::lattice::{superbase_distance, Basis};
    use approx::assert_relative_eq;

    #[test]
    fn orthorhombic_form_rebuilds_box() {
        let rf = RootForm { r: [0.0, 0.0, 0.0, 1.0, 2.0, 3.0], oriented: false };
        let sb = reconstruct_superbase(&rf).unwrap();
        let cf = conorms_of(&sb);
        assert_relative_eq!(cf.p.as_slice(), [0.0, 0.0, 0.0, 1.0, 4.0, 9.0].as_slice(), epsilon = 1e-12);
        let target = Superbase::from_basis(&Basis::from_rows([1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]).unwrap());
        assert!(superbase_distance(&target, &sb).unwrap() < 1e-9);
    }

    #[test]
    fn oriented_flag_selects_handedness() {
        let rf = RootForm::from_products([1.0, 1.2, 1.5, 1.1, 1.7, 1.3], true).unwrap();
        let right = reconstruct_superbase(&rf).unwrap();
        assert_eq!(right.orientation(), 1);
        assert!(root_form(&conorms_of(&right), true, 1).unwrap().max_abs_diff(&rf) < 1e-12);
        let left = reconstruct_superbase(&RootForm { oriented: false, ..rf }).unwrap();
        assert_eq!(left.orientation(), -1);
        let mirrored = root_form(&conorms_of(&left), true, left.orientation()).unwrap();
        assert!(mirrored.max_abs_diff(&rf) > 1e-3);
    }

    #[test]
    fn impossible_forms() {
        // v1 would have zero length.
        let rf = RootForm { r: [1.0, 0.0, 0.0, 0.0, 1.0, 1.0], oriented: false };
        assert!(matches!(reconstruct_superbase(&rf), Err(Error::DegenerateForm(_))));
        let rf = RootForm { r: [0.0; 6], oriented: false };
        assert!(reconstruct_superbase(&rf).is_err());
    }
}
