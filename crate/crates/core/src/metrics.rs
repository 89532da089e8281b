//! Root metrics between root forms, DC⁷ comparisons and the brute-force
//! search for lattices that DC⁷ cannot tell apart.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{canonicalize, coform_to_voform, Coform, PermutationS4, RootForm};
use crate::lattice::{partial_sums, Basis, Superbase, DEFAULT_REL_TOL};
use crate::pipeline::Invariants;

/// Distance on root forms seen as vectors of six numbers.
#[derive(Debug, Clone, Copy)]
pub enum BaseDistance {
    /// Minkowski `L_q` for `q ≥ 1`; `f64::INFINITY` gives the max norm.
    Minkowski(f64),
    Custom(fn(&[f64; 6], &[f64; 6]) -> f64),
}

impl BaseDistance {
    pub fn chebyshev() -> Self {
        BaseDistance::Minkowski(f64::INFINITY)
    }

    pub fn eval(&self, a: &[f64; 6], b: &[f64; 6]) -> f64 {
        match *self {
            BaseDistance::Minkowski(q) => minkowski(a, b, q),
            BaseDistance::Custom(f) => f(a, b),
        }
    }
}

pub fn minkowski(a: &[f64; 6], b: &[f64; 6], q: f64) -> f64 {
    let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
    if q.is_infinite() {
        diffs.fold(0.0, f64::max)
    } else if q == 1.0 {
        diffs.sum()
    } else if q == 2.0 {
        diffs.map(|d| d * d).sum::<f64>().sqrt()
    } else {
        diffs.map(|d| d.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

fn check_q(q: f64) -> Result<()> {
    if q >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("q = {q} must lie in [1, inf]")))
    }
}

/// Minimum of `d(a, σ(b))` over the 24 relabellings, or the 12 even ones in
/// oriented mode.
pub fn root_metric(a: &RootForm, b: &RootForm, d: &BaseDistance, oriented: bool) -> Result<f64> {
    if a.oriented != oriented || b.oriented != oriented {
        return Err(Error::OrientationMismatch);
    }
    if let BaseDistance::Minkowski(q) = d {
        check_q(*q)?;
    }
    let group: &[PermutationS4] = if oriented { PermutationS4::even() } else { PermutationS4::all() };
    Ok(group
        .iter()
        .map(|sigma| d.eval(&a.r, &sigma.apply(&b.r)))
        .fold(f64::INFINITY, f64::min))
}

/// Root metric between two lattices given by arbitrary bases.
pub fn lattice_distance(a: &Basis, b: &Basis, q: f64, oriented: bool) -> Result<f64> {
    check_q(q)?;
    let ia = Invariants::from_basis(a, DEFAULT_REL_TOL)?;
    let ib = Invariants::from_basis(b, DEFAULT_REL_TOL)?;
    let (fa, fb) = if oriented {
        (ia.oriented_root_form, ib.oriented_root_form)
    } else {
        (ia.root_form, ib.root_form)
    };
    root_metric(&fa, &fb, &BaseDistance::Minkowski(q), oriented)
}

/// `6^{1/q} · √(2 l δ)`, the bound on the root metric between obtuse
/// superbases whose vectors have length at most `l` and move by at most `δ`.
pub fn continuity_bound(l: f64, delta: f64, q: f64) -> f64 {
    let factor = if q.is_infinite() { 1.0 } else { 6f64.powf(1.0 / q) };
    factor * (2.0 * l * delta).sqrt()
}

/// Sorted lengths of the seven partial sums of an obtuse superbase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dc7Vector(pub [f64; 7]);

pub fn dc7_vector(sb: &Superbase) -> Result<Dc7Vector> {
    let cf = crate::forms::conorms_of(sb);
    let floor = -DEFAULT_REL_TOL * cf.scale();
    if let Some(slot) = cf.p.iter().position(|&p| p < floor) {
        let (i, j) = crate::lattice::LAYOUT[slot];
        return Err(Error::NotObtuse { i, j, value: cf.p[slot] });
    }
    let mut lengths = partial_sums(sb).lengths();
    lengths.sort_by(f64::total_cmp);
    Ok(Dc7Vector(lengths))
}

/// DC⁷ read from a coform through its vonorms.
pub fn dc7_of_coform(cf: &Coform) -> Result<Dc7Vector> {
    let floor = -DEFAULT_REL_TOL * cf.scale();
    if let Some(slot) = cf.p.iter().position(|&p| p < floor) {
        let (i, j) = crate::lattice::LAYOUT[slot];
        return Err(Error::NotObtuse { i, j, value: cf.p[slot] });
    }
    let mut lengths = coform_to_voform(cf).v.map(|v| v.max(0.0).sqrt());
    lengths.sort_by(f64::total_cmp);
    Ok(Dc7Vector(lengths))
}

pub fn dc7_distance(a: &Dc7Vector, b: &Dc7Vector) -> f64 {
    a.0.iter().zip(&b.0).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Entrywise sum of a coform and an obtuse shift coform.
pub fn shift_coform(cf: &Coform, q: &Coform) -> Result<Coform> {
    if let Some(x) = q.p.iter().find(|&&x| x < 0.0) {
        return Err(Error::InvalidArgument(format!("shift coform must be obtuse, found conorm {x}")));
    }
    let mut p = cf.p;
    for (a, b) in p.iter_mut().zip(&q.p) {
        *a += b;
    }
    Ok(Coform { p })
}

/// Integer coform in the canonical layout.
pub type IntCoform = [i64; 6];

/// Two non-isomorphic integer coforms whose voforms hold the same seven values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dc7Collision {
    pub first: IntCoform,
    pub second: IntCoform,
    /// Shared sorted vonorms.
    pub vonorms: [i64; 7],
}

pub fn int_voform(p: &IntCoform) -> [i64; 7] {
    let v = coform_to_voform(&Coform { p: p.map(|x| x as f64) }).v;
    v.map(|x| x as i64)
}

/// Exact Gram determinant of `(v1, v2, v3)` for an integer coform; positive
/// exactly when the coform describes a nondegenerate lattice.
pub fn int_gram_determinant(p: &IntCoform) -> i64 {
    let v = int_voform(p);
    let [p23, p13, p12, ..] = *p;
    let g = [[v[1], -p12, -p13], [-p12, v[2], -p23], [-p13, -p23, v[3]]];
    g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
}

/// Lexicographically smallest relabelling of an integer coform.
pub fn int_canonical(p: &IntCoform) -> IntCoform {
    let (best, _) = canonicalize(&p.map(|x| x as f64), false, 0.0);
    best.map(|x| x as i64)
}

fn is_int_canonical(p: &IntCoform) -> bool {
    PermutationS4::all().iter().all(|sigma| sigma.apply(p) >= *p)
}

/// Enumerates nondegenerate integer obtuse coforms with entries in
/// `[0, max_conorm]`, one per isomorphism class, and returns every pair of
/// classes sharing the multiset of seven vonorms.
///
/// Both members of a pair are canonical (so the pair is non-isomorphic by
/// construction). The result is sorted.
pub fn find_dc7_collisions(max_conorm: i64) -> Vec<Dc7Collision> {
    if max_conorm < 1 {
        return Vec::new();
    }
    let n = max_conorm + 1;
    let classes: Vec<(IntCoform, [i64; 7])> = (0..n)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut local = Vec::new();
            let mut rest = [0i64; 5];
            loop {
                let p = [first, rest[0], rest[1], rest[2], rest[3], rest[4]];
                if is_int_canonical(&p) && int_gram_determinant(&p) > 0 {
                    let mut v = int_voform(&p);
                    v.sort_unstable();
                    local.push((p, v));
                }
                // Odometer over the remaining five entries.
                let mut k = 4;
                loop {
                    rest[k] += 1;
                    if rest[k] < n {
                        break;
                    }
                    rest[k] = 0;
                    if k == 0 {
                        return local.into_iter();
                    }
                    k -= 1;
                }
            }
        })
        .collect();

    let mut groups: HashMap<[i64; 7], Vec<IntCoform>> = HashMap::new();
    for (p, v) in classes {
        groups.entry(v).or_default().push(p);
    }
    let mut out: Vec<Dc7Collision> = groups
        .into_iter()
        .filter(|(_, members)| members.len() > 1)
        .flat_map(|(vonorms, mut members)| {
            members.sort_unstable();
            let mut pairs = Vec::new();
            for a in 0..members.len() {
                for b in a + 1..members.len() {
                    pairs.push(Dc7Collision { first: members[a], second: members[b], vonorms });
                }
            }
            pairs
        })
        .collect();
    out.sort_unstable();
    out
}

/// True when both shifted coforms still share their vonorm multiset and
/// remain non-isomorphic.
pub fn shift_preserves_collision(pair: &Dc7Collision, q: &IntCoform) -> bool {
    let a: IntCoform = std::array::from_fn(|k| pair.first[k] + q[k]);
    let b: IntCoform = std::array::from_fn(|k| pair.second[k] + q[k]);
    let (mut va, mut vb) = (int_voform(&a), int_voform(&b));
    va.sort_unstable();
    vb.sort_unstable();
    va == vb && int_canonical(&a) != int_canonical(&b)
}

/// The degenerate shift condition `q23 + q01 = q12 + q03`.
pub fn is_degenerate_shift(q: &IntCoform) -> bool {
    q[0] + q[3] == q[2] + q[5]
}
