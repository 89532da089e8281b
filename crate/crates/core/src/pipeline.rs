//! Basis → obtuse superbase → coform → root forms, in one call.

use crate::error::Result;
use crate::forms::{conorms_of, detect_special, lattice_sign_with_tol, root_form_with_tol, Coform, LatticeSign, RootForm, SpecialFlags};
use crate::lattice::{Basis, Superbase};
use crate::metrics::{dc7_vector, Dc7Vector};
use crate::reduction::{reduce_to_obtuse, Reduced, DEFAULT_MAX_ITER};

#[derive(Debug, Clone)]
pub struct Invariants {
    pub reduced: Reduced,
    pub coform: Coform,
    pub root_form: RootForm,
    pub oriented_root_form: RootForm,
    pub sign: LatticeSign,
    pub special: SpecialFlags,
    pub dc7: Dc7Vector,
}

impl Invariants {
    pub fn from_basis(basis: &Basis, rel_tol: f64) -> Result<Self> {
        Invariants::from_superbase(&Superbase::from_basis(basis), rel_tol)
    }

    pub fn from_superbase(sb: &Superbase, rel_tol: f64) -> Result<Self> {
        let reduced = reduce_to_obtuse(sb, rel_tol, DEFAULT_MAX_ITER)?;
        let obtuse = &reduced.superbase;
        let coform = conorms_of(obtuse);
        let root_form = root_form_with_tol(&coform, false, 1, rel_tol)?;
        let oriented_root_form = root_form_with_tol(&coform, true, obtuse.orientation(), rel_tol)?;
        let sign = lattice_sign_with_tol(&oriented_root_form, rel_tol);
        let special = detect_special(&root_form, rel_tol);
        let dc7 = dc7_vector(obtuse)?;
        Ok(Invariants { reduced, coform, root_form, oriented_root_form, sign, special, dc7 })
    }
}

/// Non-oriented root form of the lattice generated by `basis`.
pub fn root_form_of_basis(basis: &Basis) -> Result<RootForm> {
    Ok(Invariants::from_basis(basis, crate::lattice::DEFAULT_REL_TOL)?.root_form)
}
