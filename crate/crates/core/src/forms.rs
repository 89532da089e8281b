//! Coforms, voforms and root forms.
//!
//! All six-entry arrays use the layout `[p23, p13, p12, p01, p02, p03]`,
//! i.e. the 2×3 matrix `[[p23, p13, p12], [p01, p02, p03]]` read row by row.
//! Relabelling the superbase indices by a permutation of `{0, 1, 2, 3}`
//! moves entries between slots; the two entries of a column always stay
//! together in one column.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{pair_slot, Superbase, DEFAULT_REL_TOL, LAYOUT};

/// Relative tolerance for equality tests while ordering root products.
pub const ORDER_REL_TOL: f64 = 1e-12;

/// A permutation of the superbase indices `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PermutationS4 {
    images: [usize; 4],
}

impl PermutationS4 {
    pub fn new(images: [usize; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x] {
                return Err(Error::InvalidArgument(format!("{images:?} is not a permutation of 0..4")));
            }
            seen[x] = true;
        }
        Ok(PermutationS4 { images })
    }

    pub fn identity() -> Self {
        PermutationS4 { images: [0, 1, 2, 3] }
    }

    pub fn transposition(a: usize, b: usize) -> Self {
        let mut images = [0, 1, 2, 3];
        images.swap(a, b);
        PermutationS4 { images }
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> [usize; 4] {
        self.images
    }

    pub fn is_even(&self) -> bool {
        let inversions = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .filter(|&(i, j)| self.images[i] > self.images[j])
            .count();
        inversions % 2 == 0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        PermutationS4 { images: other.images.map(|x| self.images[x]) }
    }

    /// All 24 permutations in lexicographic order of their image tuples.
    pub fn all() -> &'static [PermutationS4; 24] {
        &ALL_PERMUTATIONS
    }

    /// The 12 even permutations.
    pub fn even() -> &'static [PermutationS4; 12] {
        &EVEN_PERMUTATIONS
    }

    /// Relabels a six-entry array: the new entry at `{i, j}` is the old
    /// entry at `{σ(i), σ(j)}`.
    pub fn apply<T: Copy>(&self, values: &[T; 6]) -> [T; 6] {
        let mut out = *values;
        for (slot, &(i, j)) in LAYOUT.iter().enumerate() {
            out[slot] = values[pair_slot(self.images[i], self.images[j]).unwrap()];
        }
        out
    }
}

const fn build_all() -> [PermutationS4; 24] {
    let mut out = [PermutationS4 { images: [0, 1, 2, 3] }; 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && a != c && b != c {
                    out[n] = PermutationS4 { images: [a, b, c, 6 - a - b - c] };
                    n += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

const fn build_even() -> [PermutationS4; 12] {
    let all = build_all();
    let mut out = [PermutationS4 { images: [0, 1, 2, 3] }; 12];
    let mut n = 0;
    let mut k = 0;
    while k < 24 {
        let p = all[k].images;
        let mut inversions = 0;
        let mut i = 0;
        while i < 4 {
            let mut j = i + 1;
            while j < 4 {
                if p[i] > p[j] {
                    inversions += 1;
                }
                j += 1;
            }
            i += 1;
        }
        if inversions % 2 == 0 {
            out[n] = all[k];
            n += 1;
        }
        k += 1;
    }
    out
}

static ALL_PERMUTATIONS: [PermutationS4; 24] = build_all();
static EVEN_PERMUTATIONS: [PermutationS4; 12] = build_even();

/// Odd relabelling used to turn a left-handed superbase into a right-handed one.
fn mirror_relabel() -> PermutationS4 {
    PermutationS4::transposition(1, 2)
}

/// Lexicographic comparison treating entries within `tol` as equal.
pub fn tolerant_cmp(a: &[f64; 6], b: &[f64; 6], tol: f64) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > tol {
            return x.partial_cmp(y).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

/// The lexicographically smallest relabelling of `values` over all 24
/// permutations (or the 12 even ones), with the permutation attaining it.
///
/// Ordering by top row then bottom row realizes every ordering clause of a
/// root form: global minimum top left, minimum of the remaining columns top
/// middle, and bottom-row tie breaks.
pub fn canonicalize(values: &[f64; 6], even_only: bool, tol: f64) -> ([f64; 6], PermutationS4) {
    let group: &[PermutationS4] = if even_only { PermutationS4::even() } else { PermutationS4::all() };
    let mut best = *values;
    let mut best_perm = PermutationS4::identity();
    for sigma in group {
        let candidate = sigma.apply(values);
        if tolerant_cmp(&candidate, &best, tol) == Ordering::Less {
            best = candidate;
            best_perm = *sigma;
        }
    }
    (best, best_perm)
}

/// Six conorms `p_ij = -v_i · v_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coform {
    pub p: [f64; 6],
}

impl Coform {
    pub fn new(p: [f64; 6]) -> Self {
        Coform { p }
    }

    pub fn from_rows(top: [f64; 3], bottom: [f64; 3]) -> Self {
        Coform { p: [top[0], top[1], top[2], bottom[0], bottom[1], bottom[2]] }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[pair_slot(i, j).expect("distinct indices in 0..4")]
    }

    pub fn rows(&self) -> [[f64; 3]; 2] {
        [[self.p[0], self.p[1], self.p[2]], [self.p[3], self.p[4], self.p[5]]]
    }

    /// Tolerance scale: the largest vonorm.
    pub fn scale(&self) -> f64 {
        coform_to_voform(self).v.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_obtuse(&self, rel_tol: f64) -> bool {
        let floor = -rel_tol * self.scale();
        self.p.iter().all(|&x| x >= floor)
    }
}

pub fn conorms_of(sb: &Superbase) -> Coform {
    Coform { p: LAYOUT.map(|(i, j)| sb.conorm(i, j)) }
}

/// Seven vonorms in the order `v0², v1², v2², v3², v01², v02², v03²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Voform {
    pub v: [f64; 7],
}

/// Voform slot holding `|v_i + v_j|²` (`v_ij = -v_kl`).
fn pair_vonorm_slot(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 1) | (2, 3) => 4,
        (0, 2) | (1, 3) => 5,
        (0, 3) | (1, 2) => 6,
        _ => unreachable!("indices must be distinct"),
    }
}

fn others(i: usize, j: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&x| x != i && x != j);
    (rest.next().unwrap(), rest.next().unwrap())
}

pub fn coform_to_voform(cf: &Coform) -> Voform {
    let mut v = [0.0; 7];
    for (i, slot) in v.iter_mut().take(4).enumerate() {
        *slot = (0..4).filter(|&j| j != i).map(|j| cf.get(i, j)).sum();
    }
    for j in 1..4 {
        let (k, l) = others(0, j);
        v[3 + j] = cf.get(0, k) + cf.get(0, l) + cf.get(j, k) + cf.get(j, l);
    }
    Voform { v }
}

/// `v0² + v1² + v2² + v3² - v01² - v02² - v03²`, zero for every genuine voform.
pub fn zero_conorm_residual(vf: &Voform) -> f64 {
    let v = &vf.v;
    v[0] + v[1] + v[2] + v[3] - v[4] - v[5] - v[6]
}

/// Inverts [`coform_to_voform`] through
/// `4 p_ij = v_i² + v_j² + v_ik² + v_jk² - v_ij² - v_k² - v_l²`.
pub fn voform_to_coform(vf: &Voform, rel_tol: f64) -> Result<Coform> {
    let residual = zero_conorm_residual(vf);
    let scale = vf.v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if residual.abs() > rel_tol * scale {
        return Err(Error::InvalidVoform { residual });
    }
    let v = &vf.v;
    let p = LAYOUT.map(|(i, j)| {
        let (k, l) = others(i, j);
        let sum = v[i] + v[j] + v[pair_vonorm_slot(i, k)] + v[pair_vonorm_slot(j, k)]
            - v[pair_vonorm_slot(i, j)]
            - v[k]
            - v[l];
        sum / 4.0
    });
    Ok(Coform { p })
}

pub fn permute_coform(cf: &Coform, sigma: &PermutationS4) -> Coform {
    Coform { p: sigma.apply(&cf.p) }
}

/// Canonical arrangement of the six root products `r_ij = √p_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootForm {
    pub r: [f64; 6],
    pub oriented: bool,
}

impl RootForm {
    pub fn top(&self) -> [f64; 3] {
        [self.r[0], self.r[1], self.r[2]]
    }

    pub fn bottom(&self) -> [f64; 3] {
        [self.r[3], self.r[4], self.r[5]]
    }

    pub fn rows(&self) -> [[f64; 3]; 2] {
        [self.top(), self.bottom()]
    }

    pub fn max(&self) -> f64 {
        self.r.iter().fold(0.0, |m, &x| m.max(x))
    }

    /// Squared entries as a coform.
    pub fn to_coform(&self) -> Coform {
        Coform { p: self.r.map(|x| x * x) }
    }

    /// Builds a form from six root products, canonicalizing them. For an
    /// oriented form the entries are taken as those of a right-handed superbase.
    pub fn from_products(r: [f64; 6], oriented: bool) -> Result<Self> {
        if r.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidArgument(format!("root products must be finite and non-negative: {r:?}")));
        }
        let tol = order_tol(&r);
        Ok(RootForm { r: canonicalize(&r, oriented, tol).0, oriented })
    }

    pub fn scaled(&self, s: f64) -> Self {
        RootForm { r: self.r.map(|x| x * s), oriented: self.oriented }
    }

    pub fn max_abs_diff(&self, other: &RootForm) -> f64 {
        self.r.iter().zip(&other.r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Canonical form of the mirror image. Non-oriented forms are their own mirror.
    pub fn mirror(&self) -> Self {
        if !self.oriented {
            return *self;
        }
        let flipped = mirror_relabel().apply(&self.r);
        RootForm { r: canonicalize(&flipped, true, order_tol(&self.r)).0, oriented: true }
    }

    /// The form forgetting orientation.
    pub fn unoriented(&self) -> Self {
        RootForm { r: canonicalize(&self.r, false, order_tol(&self.r)).0, oriented: false }
    }
}

impl fmt::Display for RootForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [t, b] = self.rows();
        write!(f, "[[{}, {}, {}], [{}, {}, {}]]", t[0], t[1], t[2], b[0], b[1], b[2])
    }
}

fn order_tol(r: &[f64; 6]) -> f64 {
    ORDER_REL_TOL * r.iter().fold(0.0_f64, |m, &x| m.max(x))
}

/// Root form with the default tolerance. `orientation_sign` is the sign of
/// `det(v1, v2, v3)` of the superbase that produced `cf`; it only matters
/// when `oriented` is set.
pub fn root_form(cf: &Coform, oriented: bool, orientation_sign: i8) -> Result<RootForm> {
    root_form_with_tol(cf, oriented, orientation_sign, DEFAULT_REL_TOL)
}

/// Conorms within `rel_tol · max vonorm` of zero are set to zero; anything
/// more negative is rejected.
pub fn root_form_with_tol(cf: &Coform, oriented: bool, orientation_sign: i8, rel_tol: f64) -> Result<RootForm> {
    let floor = -rel_tol * cf.scale();
    for (slot, &p) in cf.p.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::NonFinite);
        }
        if p < floor {
            let (i, j) = LAYOUT[slot];
            return Err(Error::NotObtuse { i, j, value: p });
        }
    }
    let mut r = cf.p.map(|p| if p <= -floor { 0.0 } else { p.sqrt() });
    if oriented && orientation_sign < 0 {
        r = mirror_relabel().apply(&r);
    }
    Ok(RootForm { r: canonicalize(&r, oriented, order_tol(&r)).0, oriented })
}

/// Checks the ordering clauses a canonical root form must satisfy.
pub fn satisfies_root_form_clauses(rf: &RootForm) -> bool {
    let tol = order_tol(&rf.r).max(1e-300);
    let le = |a: f64, b: f64| a <= b + tol;
    let eq = |a: f64, b: f64| (a - b).abs() <= tol;
    let [r23, r13, r12, r01, r02, r03] = rf.r;
    if !rf.r.iter().all(|&x| le(r23, x)) {
        return false;
    }
    if rf.oriented {
        // Vertical swap of the last two columns orders (r13, r12) against (r02, r03).
        if !le(r13, r02) || (eq(r13, r02) && !le(r12, r03)) {
            return false;
        }
    } else {
        if !(le(r13, r12) && le(r13, r02) && le(r13, r03)) {
            return false;
        }
        if eq(r23, r13) && !le(r01, r02) {
            return false;
        }
        if eq(r13, r12) && !le(r02, r03) {
            return false;
        }
    }
    if eq(r23, r13) && eq(r13, r12) && !(le(r01, r02) && le(r01, r03)) {
        return false;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeSign {
    Positive,
    Negative,
    Neutral,
}

impl fmt::Display for LatticeSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeSign::Positive => "positive",
            LatticeSign::Negative => "negative",
            LatticeSign::Neutral => "neutral",
        })
    }
}

/// Special configurations of a canonical root form.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SpecialFlags {
    /// Two columns carry identical root products.
    pub mirror_columns: bool,
    /// Both rows coincide (face-centred orthorhombic).
    pub of_rows: bool,
    /// At least two zeros in the top row.
    pub two_top_zeros: bool,
}

impl SpecialFlags {
    pub fn any(&self) -> bool {
        self.mirror_columns || self.of_rows || self.two_top_zeros
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.mirror_columns {
            out.push("mirror_columns");
        }
        if self.of_rows {
            out.push("oF_rows");
        }
        if self.two_top_zeros {
            out.push("two_top_zeros");
        }
        out
    }
}

pub fn detect_special(rf: &RootForm, rel_tol: f64) -> SpecialFlags {
    let tol = rel_tol * rf.max();
    let eq = |a: f64, b: f64| (a - b).abs() <= tol;
    let [top, bottom] = rf.rows();
    let mirror_columns = (0..3)
        .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
        .any(|(a, b)| eq(top[a], top[b]) && eq(bottom[a], bottom[b]));
    let of_rows = (0..3).all(|c| eq(top[c], bottom[c]));
    let two_top_zeros = top.iter().filter(|&&x| x <= tol).count() >= 2;
    SpecialFlags { mirror_columns, of_rows, two_top_zeros }
}

/// Chirality sign read from an oriented canonical root form.
///
/// Neutral when one of the special configurations holds or when the form is
/// carried to itself by a reflection. Otherwise the form is positive when it
/// is also the canonical form under all 24 relabellings (its top row is then
/// increasing with the bottom-row tie break applied), and negative when the
/// mirror image holds that position.
pub fn lattice_sign(rf: &RootForm) -> LatticeSign {
    lattice_sign_with_tol(rf, DEFAULT_REL_TOL)
}

pub fn lattice_sign_with_tol(rf: &RootForm, rel_tol: f64) -> LatticeSign {
    if detect_special(rf, rel_tol).any() {
        return LatticeSign::Neutral;
    }
    let tol = rel_tol * rf.max();
    let oriented = RootForm { oriented: true, ..*rf };
    let mirror = oriented.mirror();
    if oriented.max_abs_diff(&mirror) <= tol {
        return LatticeSign::Neutral;
    }
    if tolerant_cmp(&oriented.r, &mirror.r, tol) == Ordering::Less {
        LatticeSign::Positive
    } else {
        LatticeSign::Negative
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const S2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn group_sizes_and_parity() {
        assert_eq!(PermutationS4::all().len(), 24);
        assert!(PermutationS4::even().iter().all(|p| p.is_even()));
        assert!(!PermutationS4::transposition(0, 3).is_even());
        let p = PermutationS4::new([1, 2, 3, 0]).unwrap();
        assert!(!p.is_even());
        assert!(PermutationS4::new([0, 0, 1, 2]).is_err());
        assert_eq!(p.compose(&PermutationS4::identity()), p);
    }

    #[test]
    fn transpositions_move_columns() {
        let cf = Coform::new([23.0, 13.0, 12.0, 1.0, 2.0, 3.0]);
        assert_eq!(permute_coform(&cf, &PermutationS4::identity()), cf);
        let swapped = permute_coform(&cf, &PermutationS4::transposition(1, 2));
        assert_eq!(swapped.p, [13.0, 23.0, 12.0, 2.0, 1.0, 3.0]);
        let diagonal = permute_coform(&cf, &PermutationS4::transposition(0, 1));
        assert_eq!(diagonal.p, [23.0, 3.0, 2.0, 1.0, 12.0, 13.0]);
    }

    #[test]
    fn column_mates_stay_together() {
        let cf = Coform::new([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        for sigma in PermutationS4::all() {
            let q = permute_coform(&cf, sigma);
            for c in 0..3 {
                let mut pair = [q.p[c], q.p[c + 3]];
                pair.sort_by(f64::total_cmp);
                assert!([[1.0, 4.0], [2.0, 5.0], [3.0, 6.0]].contains(&pair));
            }
        }
    }

    #[test]
    fn voforms_of_simple_coforms() {
        let vf = coform_to_voform(&Coform::new([1.0; 6]));
        assert_eq!(vf.v, [3.0, 3.0, 3.0, 3.0, 4.0, 4.0, 4.0]);
        let op = Coform::from_rows([0.0, 0.0, 0.0], [1.0, 4.0, 9.0]);
        assert_eq!(coform_to_voform(&op).v, [14.0, 1.0, 4.0, 9.0, 13.0, 10.0, 5.0]);
        assert!(zero_conorm_residual(&coform_to_voform(&Coform::new([0.3, 1.7, 2.9, 0.1, 5.5, 3.25]))).abs() < 1e-14);
    }

    #[test]
    fn voform_inversion() {
        let op = Coform::from_rows([0.0, 0.0, 0.0], [1.0, 4.0, 9.0]);
        assert_eq!(voform_to_coform(&coform_to_voform(&op), 1e-9).unwrap(), op);
        let sym = Voform { v: [3.0, 3.0, 3.0, 3.0, 4.0, 4.0, 4.0] };
        assert_eq!(voform_to_coform(&sym, 1e-9).unwrap().p, [1.0; 6]);
        let mut bad = coform_to_voform(&op);
        bad.v[0] *= 1.1;
        assert!(matches!(voform_to_coform(&bad, 1e-9), Err(Error::InvalidVoform { .. })));
        let mut inflated = sym;
        inflated.v[0] += 4.0;
        assert_eq!(zero_conorm_residual(&inflated), 4.0);
    }

    #[test]
    fn orthorhombic_and_monoclinic_examples() {
        // oF with a = b = 1, c = 2: conorms [[0, 1, 1], [3, 1, 1]].
        let of = root_form(&Coform::from_rows([1.0, 1.0, 0.0], [1.0, 1.0, 3.0]), false, 1).unwrap();
        assert_relative_eq!(of.r.as_slice(), [0.0, 1.0, 1.0, 3f64.sqrt(), 1.0, 1.0].as_slice(), epsilon = 1e-15);

        // Monoclinic a = b = 2, α = 120°, c = 3: p12 = 2, p01 = p02 = 2, p03 = 9.
        let mono = Coform::from_rows([0.0, 0.0, 2.0], [2.0, 2.0, 9.0]);
        let rf = root_form(&mono, true, 1).unwrap();
        assert_relative_eq!(rf.r.as_slice(), [0.0, 0.0, S2, S2, S2, 3.0].as_slice(), epsilon = 1e-15);
        assert_eq!(lattice_sign(&rf), LatticeSign::Neutral);
    }

    #[test]
    fn negative_conorm_is_rejected_tiny_one_clamped() {
        let cf = Coform::from_rows([-1.0, 1.0, 1.0], [1.0, 1.0, 1.0]);
        assert!(matches!(root_form(&cf, false, 1), Err(Error::NotObtuse { i: 2, j: 3, .. })));
        let cf = Coform::from_rows([-1e-14, 1.0, 1.0], [1.0, 1.0, 1.0]);
        assert_eq!(root_form(&cf, false, 1).unwrap().r[0], 0.0);
        let cf = Coform::from_rows([1e-14, 1.0, 1.0], [1.0, 1.0, 1.0]);
        assert_eq!(root_form(&cf, false, 1).unwrap().r[0], 0.0);
    }

    #[test]
    fn signs() {
        let oi = RootForm::from_products([1.0; 6], true).unwrap();
        assert_eq!(lattice_sign(&oi), LatticeSign::Neutral);
        let generic = root_form(&Coform::from_rows([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]), true, 1).unwrap();
        assert_eq!(generic.r, [1.0, 2f64.sqrt(), 3f64.sqrt(), 2.0, 5f64.sqrt(), 6f64.sqrt()]);
        assert_eq!(lattice_sign(&generic), LatticeSign::Positive);
        assert_eq!(lattice_sign(&generic.mirror()), LatticeSign::Negative);
        assert_eq!(generic.mirror().mirror(), generic);
    }

    #[test]
    fn special_flags() {
        let of = RootForm { r: [0.0, 1.0, 1.0, 3f64.sqrt(), 1.0, 1.0], oriented: false };
        let flags = detect_special(&of, 1e-9);
        assert!(flags.mirror_columns && !flags.of_rows && !flags.two_top_zeros);
        let oi = RootForm { r: [1.0; 6], oriented: false };
        let flags = detect_special(&oi, 1e-9);
        assert!(flags.mirror_columns && flags.of_rows);
        let op = RootForm { r: [0.0, 0.0, 0.0, 1.0, 2.0, 3.0], oriented: false };
        let flags = detect_special(&op, 1e-9);
        assert!(flags.two_top_zeros && !flags.mirror_columns && !flags.of_rows);
    }

    #[test]
    fn clause_validator_accepts_canonical_forms() {
        for sample in [[5.0, 1.0, 3.0, 2.0, 6.0, 4.0], [1.0, 1.0, 2.0, 2.0, 1.0, 3.0], [0.0, 0.0, 0.0, 3.0, 1.0, 2.0]] {
            for oriented in [false, true] {
                let rf = RootForm::from_products(sample, oriented).unwrap();
                assert!(satisfies_root_form_clauses(&rf), "{rf} oriented={oriented}");
            }
        }
        assert!(!satisfies_root_form_clauses(&RootForm { r: [2.0, 1.0, 3.0, 4.0, 5.0, 6.0], oriented: false }));
    }
}
