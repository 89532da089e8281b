use nalgebra::Matrix3;
use proptest::prelude::*;

use rootforms::forms::satisfies_root_form_clauses;
use rootforms::lattice::{int_determinant, rotation};
use rootforms::metrics::minkowski;
use rootforms::*;

fn products() -> impl Strategy<Value = [f64; 6]> {
    prop::array::uniform6(0.05f64..5.0)
}

fn basis_rows() -> impl Strategy<Value = [f64; 9]> {
    prop::array::uniform9(-2.0f64..2.0).prop_filter("nearly flat cell", |m| {
        Basis::from_rows(*m).is_ok_and(|b| {
            let norms: f64 = b.vectors().iter().map(|v| v.norm()).product();
            b.determinant().abs() > 0.05 * norms
        })
    })
}

fn rotation_matrix() -> impl Strategy<Value = Matrix3<f64>> {
    (prop::array::uniform3(-1.0f64..1.0), 0.0f64..6.3).prop_map(|(axis, angle)| {
        let axis = Vec3::from(axis);
        rotation(&if axis.norm() < 1e-3 { Vec3::x() } else { axis }, angle)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn unit_cell_round_trip(a in 0.5f64..10.0, b in 0.5f64..10.0, c in 0.5f64..10.0,
                            alpha in 60.0f64..120.0, beta in 60.0f64..120.0, gamma in 60.0f64..120.0) {
        prop_assume!(UnitCell::new(a, b, c, alpha, beta, gamma).is_ok());
        let cell = UnitCell::new(a, b, c, alpha, beta, gamma).unwrap();
        let back = UnitCell::from_basis(&cell.to_basis().unwrap());
        for (x, y) in [(a, back.a), (b, back.b), (c, back.c)] {
            prop_assert!((x - y).abs() <= 1e-12 * x);
        }
        for (x, y) in [(alpha, back.alpha), (beta, back.beta), (gamma, back.gamma)] {
            prop_assert!((x - y).abs() <= 1e-8);
        }
    }

    #[test]
    fn vonorms_satisfy_relation_and_invert(p in prop::array::uniform6(-3.0f64..3.0)) {
        let cf = Coform::new(p);
        let vf = coform_to_voform(&cf);
        let scale = vf.v.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        prop_assert!(zero_conorm_residual(&vf).abs() <= 1e-12 * scale);
        let back = voform_to_coform(&vf, 1e-9).unwrap();
        for (x, y) in p.iter().zip(&back.p) {
            prop_assert!((x - y).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn canonical_form_ignores_relabelling(r in products(), k in 0usize..24) {
        let rf = RootForm::from_products(r, false).unwrap();
        prop_assert!(satisfies_root_form_clauses(&rf));
        let sigma = PermutationS4::all()[k];
        prop_assert_eq!(RootForm::from_products(sigma.apply(&r), false).unwrap(), rf);
        let oriented = RootForm::from_products(r, true).unwrap();
        prop_assert!(satisfies_root_form_clauses(&oriented));
        let even = PermutationS4::even()[k % 12];
        prop_assert_eq!(RootForm::from_products(even.apply(&r), true).unwrap(), oriented);
        prop_assert_eq!(oriented.unoriented(), rf);
    }

    #[test]
    fn root_form_is_an_isometry_invariant(m in basis_rows(), seed in any::<u64>(), q in rotation_matrix()) {
        let b = Basis::from_rows(m).unwrap();
        let u = random_unimodular(seed, 8);
        prop_assert_eq!(int_determinant(&u).abs(), 1);
        let moved = b.transformed(&u).unwrap().rotated(&q).unwrap();
        let f1 = Invariants::from_basis(&b, DEFAULT_REL_TOL).unwrap();
        let f2 = Invariants::from_basis(&moved, DEFAULT_REL_TOL).unwrap();
        let tol = 1e-6 * f1.root_form.max();
        prop_assert!(f1.root_form.max_abs_diff(&f2.root_form) <= tol, "{} vs {}", f1.root_form, f2.root_form);
        let (o1, o2) = (f1.oriented_root_form, f2.oriented_root_form);
        let same = o1.max_abs_diff(&o2) <= tol;
        prop_assert!(same || o1.mirror().max_abs_diff(&o2) <= tol);
        if same {
            prop_assert_eq!(f1.sign, f2.sign);
        }
        prop_assert!(dc7_distance(&f1.dc7, &f2.dc7) <= tol);
    }

    #[test]
    fn reduction_is_obtuse_and_unimodular(m in basis_rows(), seed in any::<u64>()) {
        let b = Basis::from_rows(m).unwrap().transformed(&random_unimodular(seed, 8)).unwrap();
        let reduced = reduce_to_obtuse(&Superbase::from_basis(&b), DEFAULT_REL_TOL, 1000).unwrap();
        prop_assert!(conorms_of(&reduced.superbase).is_obtuse(1e-9));
        prop_assert_eq!(int_determinant(&reduced.transform).abs(), 1);
        let expected = b.transformed(&reduced.transform).unwrap();
        let got = reduced.superbase.basis();
        let scale = b.vectors().iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (x, y) in expected.vectors().iter().zip(got.vectors()) {
            prop_assert!((x - y).norm() <= 1e-9 * scale * 100.0);
        }
        let steps = &reduced.trace.steps;
        for w in steps.windows(2) {
            prop_assert!(w[1].vonorm_sum_before < w[0].vonorm_sum_before);
        }
    }

    #[test]
    fn mirror_images_share_the_unoriented_form(r in products(), q in rotation_matrix()) {
        let rf = RootForm::from_products(r, true).unwrap();
        let sb = reconstruct_superbase(&rf).unwrap().apply_orthogonal(&q).unwrap();
        let mirror = sb.mirrored();
        let a = Invariants::from_superbase(&sb, DEFAULT_REL_TOL).unwrap();
        let b = Invariants::from_superbase(&mirror, DEFAULT_REL_TOL).unwrap();
        prop_assert!(a.root_form.max_abs_diff(&b.root_form) <= 1e-9 * rf.max());
        prop_assert!(a.oriented_root_form.mirror().max_abs_diff(&b.oriented_root_form) <= 1e-9 * rf.max());
        match a.sign {
            LatticeSign::Neutral => prop_assert_eq!(b.sign, LatticeSign::Neutral),
            LatticeSign::Positive => prop_assert_eq!(b.sign, LatticeSign::Negative),
            LatticeSign::Negative => prop_assert_eq!(b.sign, LatticeSign::Positive),
        }
        let cheb = BaseDistance::chebyshev();
        prop_assert!(root_metric(&a.root_form, &b.root_form, &cheb, false).unwrap() <= 1e-9 * rf.max());
        if a.sign != LatticeSign::Neutral {
            prop_assert!(root_metric(&a.oriented_root_form, &b.oriented_root_form, &cheb, true).unwrap() > 0.0);
        }
    }

    #[test]
    fn reconstruction_round_trip(r in products(), oriented in any::<bool>()) {
        let rf = RootForm::from_products(r, oriented).unwrap();
        let sb = reconstruct_superbase(&rf).unwrap();
        prop_assert!(conorms_of(&sb).is_obtuse(1e-9));
        let back = root_form(&conorms_of(&sb), oriented, sb.orientation()).unwrap();
        prop_assert!(back.max_abs_diff(&rf) <= 1e-9 * rf.max().max(1.0));
        let again = reconstruct_superbase(&rf).unwrap();
        prop_assert!(superbase_distance(&sb, &again).unwrap() <= 1e-8);
    }

    #[test]
    fn projections_are_bounded_and_scale_free(r in prop::array::uniform6(0.0f64..5.0), s in 0.01f64..100.0) {
        let rf = RootForm::from_products(r, false).unwrap();
        let p = project_root_form(&rf).unwrap();
        let ps = project_root_form(&rf.scaled(s)).unwrap();
        for (a, b) in [(p.qt, ps.qt), (p.ft, ps.ft)] {
            if let (Some(a), Some(b)) = (a, b) {
                let (x0, x1, y0, y1) = a.kind.bounds();
                prop_assert!(a.x >= x0 && a.x <= x1 && a.y >= y0 && a.y <= y1);
                prop_assert!((a.x - b.x).abs() <= 1e-12 && (a.y - b.y).abs() <= 1e-12);
            } else {
                prop_assert_eq!(a.is_none(), b.is_none());
            }
        }
        if let Some(qt) = p.qt {
            prop_assert!(qt.y <= 1.0 / 3.0 + 1e-12 && qt.x <= 0.5 * (1.0 - 3.0 * qt.y) + 1e-12);
        }
    }

    #[test]
    fn root_metric_is_relabelling_invariant(a in products(), b in products(), k in 0usize..24) {
        let (fa, fb) = (RootForm::from_products(a, false).unwrap(), RootForm::from_products(b, false).unwrap());
        let raw = RootForm { r: PermutationS4::all()[k].apply(&fb.r), oriented: false };
        for q in [1.0, 2.0, 3.5, f64::INFINITY] {
            let d = BaseDistance::Minkowski(q);
            let x = root_metric(&fa, &fb, &d, false).unwrap();
            let y = root_metric(&fa, &raw, &d, false).unwrap();
            prop_assert!((x - y).abs() <= 1e-12);
            prop_assert!(x <= minkowski(&fa.r, &fb.r, q) + 1e-12);
        }
    }

    #[test]
    fn density_conserves_counts(rs in prop::collection::vec(prop::array::uniform3(0.0f64..4.0), 0..200), res in 1usize..64) {
        let points: Vec<_> = rs
            .iter()
            .filter_map(|t| {
                let mut t = *t;
                t.sort_by(f64::total_cmp);
                qt_project(t).ok()
            })
            .collect();
        let grid = accumulate_density(&points, res).unwrap();
        prop_assert_eq!(grid.total(), points.len() as u64);
        let mut reversed = points.clone();
        reversed.reverse();
        prop_assert_eq!(accumulate_density(&reversed, res).unwrap(), grid);
    }
}
