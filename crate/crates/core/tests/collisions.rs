//! Shifting a DC7 collision by an integer coform.
//!
//! The vonorms are linear in the conorms. When the second member of a pair
//! has, after relabelling, the voform of the first with two entries `a, b`
//! exchanged, a shift `q` keeps the collision exactly when `VF(q)_a = VF(q)_b`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rootforms::metrics::{int_canonical, int_gram_determinant, int_voform, shift_preserves_collision};
use rootforms::*;

/// A relabelling of `second` whose voform differs from that of `first` by a
/// single exchange, with the two exchanged slots.
fn swap_alignment(pair: &Dc7Collision) -> Option<(IntCoform, usize, usize)> {
    let va = int_voform(&pair.first);
    for sigma in PermutationS4::all() {
        let relabelled = sigma.apply(&pair.second);
        let vb = int_voform(&relabelled);
        let diff: Vec<usize> = (0..7).filter(|&k| va[k] != vb[k]).collect();
        if let [a, b] = diff[..] {
            if va[a] == vb[b] && va[b] == vb[a] {
                return Some((relabelled, a, b));
            }
        }
    }
    None
}

fn shift(p: &IntCoform, q: &IntCoform) -> IntCoform {
    std::array::from_fn(|k| p[k] + q[k])
}

fn sorted(mut v: [i64; 7]) -> [i64; 7] {
    v.sort_unstable();
    v
}

#[test]
fn collisions_survive_shifts_on_the_swap_hyperplane() {
    let pairs = find_dc7_collisions(4);
    let aligned: Vec<_> = pairs.iter().filter_map(|p| swap_alignment(p).map(|s| (*p, s))).take(25).collect();
    assert!(!aligned.is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (pair, (second, a, b)) in aligned {
        let relabelled = Dc7Collision { first: pair.first, second, vonorms: pair.vonorms };
        let mut on = 0;
        let mut off = 0;
        while on < 5 || off < 5 {
            let q: IntCoform = std::array::from_fn(|_| rng.gen_range(0..=4));
            if int_gram_determinant(&q) <= 0 {
                continue;
            }
            let vq = int_voform(&q);
            let same = sorted(int_voform(&shift(&pair.first, &q))) == sorted(int_voform(&shift(&second, &q)));
            if vq[a] == vq[b] {
                on += 1;
                assert!(same, "{pair:?} shifted by {q:?}");
                let distinct = int_canonical(&shift(&pair.first, &q)) != int_canonical(&shift(&second, &q));
                assert_eq!(shift_preserves_collision(&relabelled, &q), distinct);
            } else {
                off += 1;
                assert!(!same, "{pair:?} kept its vonorms under the generic shift {q:?}");
            }
        }
    }
}

#[test]
fn collision_members_share_dc7_but_not_root_forms() {
    for pair in find_dc7_collisions(3) {
        let a = Coform::new(pair.first.map(|x| x as f64));
        let b = Coform::new(pair.second.map(|x| x as f64));
        assert_eq!(dc7_distance(&dc7_of_coform(&a).unwrap(), &dc7_of_coform(&b).unwrap()), 0.0);
        let (fa, fb) = (root_form(&a, false, 1).unwrap(), root_form(&b, false, 1).unwrap());
        assert!(root_metric(&fa, &fb, &BaseDistance::chebyshev(), false).unwrap() > 0.0);
        // The DC7 of a realized superbase agrees with the one read from the coform.
        let sb = reconstruct_superbase(&fa).unwrap();
        let realized = dc7_vector(&sb).unwrap();
        assert!(dc7_distance(&realized, &dc7_of_coform(&a).unwrap()) <= 1e-9);
    }
}

#[test]
fn collision_search_is_deterministic() {
    assert_eq!(find_dc7_collisions(4), find_dc7_collisions(4));
    let small = find_dc7_collisions(2);
    let larger = find_dc7_collisions(3);
    assert!(small.iter().all(|p| larger.contains(p)));
}
