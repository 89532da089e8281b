//! Reduction of an arbitrary superbase to an obtuse one (all conorms
//! non-negative) by repeated elementary superbase moves.
//!
//! A move on the pair `(i, j)` with `ε = v_i · v_j > 0` replaces the
//! superbase by `u_i = -v_i`, `u_j = v_j`, `u_k = v_i + v_k`,
//! `u_l = v_i + v_l`. Six vonorms keep or swap their values and the vonorm
//! of `v_i + v_j` drops by `4ε`, which bounds the number of moves.

use crate::error::{Error, Result};
use crate::lattice::{IntMatrix, Superbase, DEFAULT_REL_TOL, LAYOUT};

pub const DEFAULT_MAX_ITER: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionStep {
    pub pair: (usize, usize),
    pub epsilon: f64,
    pub vonorm_sum_before: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }
}

/// Result of [`reduce_to_obtuse`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reduced {
    pub superbase: Superbase,
    /// Rows: integer coefficients of the reduced `v1, v2, v3` in terms of
    /// the input `v1, v2, v3`. Always unimodular.
    pub transform: IntMatrix,
    pub trace: ReductionTrace,
}

fn complement(i: usize, j: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&x| x != i && x != j);
    (rest.next().unwrap(), rest.next().unwrap())
}

fn move_indices<T: Copy>(v: &[T; 4], i: usize, j: usize, neg: impl Fn(T) -> T, add: impl Fn(T, T) -> T) -> [T; 4] {
    let (k, l) = complement(i, j);
    let mut u = *v;
    u[i] = neg(v[i]);
    u[j] = v[j];
    u[k] = add(v[i], v[k]);
    u[l] = add(v[i], v[l]);
    u
}

/// One reduction move on the pair `(i, j)`. Requires `p_ij < 0`.
pub fn reduction_step(sb: &Superbase, i: usize, j: usize) -> Result<Superbase> {
    if i == j || i > 3 || j > 3 {
        return Err(Error::InvalidPair(i, j));
    }
    let p = sb.conorm(i, j);
    if p >= 0.0 {
        return Err(Error::NoReductionNeeded { i: i.min(j), j: i.max(j), value: p });
    }
    let u = move_indices(sb.vectors(), i, j, |v| -v, |a, b| a + b);
    Ok(Superbase::new_unchecked(u))
}

/// Reduces until every conorm is at least `-rel_tol · (max vonorm)`.
///
/// At each iteration the most negative conorm is reduced; ties go to the
/// lexicographically smallest pair.
pub fn reduce_to_obtuse(sb: &Superbase, rel_tol: f64, max_iter: usize) -> Result<Reduced> {
    if rel_tol.is_nan() || rel_tol <= 0.0 || max_iter == 0 {
        return Err(Error::InvalidArgument("rel_tol must be positive and max_iter at least 1".into()));
    }
    let mut current = *sb;
    let mut coeffs: [[i64; 3]; 4] = [[-1, -1, -1], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut trace = ReductionTrace::default();

    loop {
        let max_vonorm = crate::lattice::partial_sums(&current)
            .vonorms()
            .into_iter()
            .fold(0.0, f64::max);
        let threshold = -rel_tol * max_vonorm;
        let mut worst: Option<((usize, usize), f64)> = None;
        // LAYOUT is not lexicographic; scan pairs in (i, j) order.
        let mut pairs = LAYOUT;
        pairs.sort();
        for (i, j) in pairs {
            let p = current.conorm(i, j);
            if p < threshold && worst.is_none_or(|(_, w)| p < w) {
                worst = Some(((i, j), p));
            }
        }
        let Some(((i, j), p)) = worst else {
            let transform = IntMatrix::from_fn(|r, c| coeffs[r + 1][c]);
            return Ok(Reduced { superbase: current, transform, trace });
        };
        if trace.iterations() >= max_iter {
            return Err(Error::NonTermination { trace });
        }
        trace.steps.push(ReductionStep {
            pair: (i, j),
            epsilon: -p,
            vonorm_sum_before: current.vonorm_sum(),
        });
        current = reduction_step(&current, i, j)?;
        coeffs = move_indices(&coeffs, i, j, |c| c.map(|x| -x), |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    }
}

/// [`reduce_to_obtuse`] with the default tolerance and iteration cap.
pub fn reduce(sb: &Superbase) -> Result<Reduced> {
    reduce_to_obtuse(sb, DEFAULT_REL_TOL, DEFAULT_MAX_ITER)
}
