mod common;

use common::{knot_grid, knot_surgery, mirror};
use pertinv::io::read_presentation;
use pertinv::jones::{alexander_polynomial, conway_coefficients};
use pertinv::scalar::{int, ratio};
use pertinv::surgery::{denominator_bound_check, integerize, perturbative_invariants, phi1_s1};
use pertinv::{MilnorData, SlopeClass, SurgeryPresentation};

const SLOPES: [(i64, i64); 8] = [
    (1, 1),
    (1, -1),
    (2, 1),
    (-2, 1),
    (1, 2),
    (5, 3),
    (-3, 2),
    (7, -4),
];

#[test]
fn fixtures_carry_the_conway_polynomial() {
    let t = knot_grid("trefoil_left.json");
    let f = knot_grid("figure_eight.json");
    assert_eq!(t.class(), SlopeClass::Bl);
    assert!(t.validate_slope().passed() && f.validate_slope().passed());
    let ct = conway_coefficients(&t).unwrap();
    let cf = conway_coefficients(&f).unwrap();
    assert_eq!(&ct.coeffs()[..3], &[int(1), int(1), int(0)]);
    assert_eq!(&cf.coeffs()[..3], &[int(1), int(-1), int(0)]);
    assert!(ct.coeffs()[2..].iter().all(|c| *c == int(0)));
    // Δ = 1 ± z^2 with z^2 = 4X + O(X^2), X = (iπa)^2.
    assert_eq!(alexander_polynomial(&t).unwrap().coeff(1), int(4));
    assert_eq!(alexander_polynomial(&f).unwrap().coeff(1), int(-4));
}

#[test]
fn phi1_route_matches_the_engine_on_knots() {
    for (name, phi) in [("trefoil_left.json", 1), ("figure_eight.json", -1)] {
        let g = knot_grid(name);
        for (p, q) in SLOPES {
            let mut m = MilnorData::new(1);
            m.set_phi1_single(0, int(phi)).unwrap();
            let sp = SurgeryPresentation::new(
                knot_surgery(&g, p, q).components().to_vec(),
                None,
                SlopeClass::Bl,
                g.clone(),
                Some(m),
            )
            .unwrap();
            assert_eq!(
                phi1_s1(&sp).unwrap(),
                perturbative_invariants(&sp, 1).unwrap().s(1),
                "{name} ({p},{q})"
            );
        }
    }
}

#[test]
fn integer_surgery_s1_is_twelve_phi_q() {
    for (name, phi) in [("trefoil_left.json", 1), ("figure_eight.json", -1)] {
        let g = knot_grid(name);
        for q in [-3, -1, 1, 2] {
            let s1 = perturbative_invariants(&knot_surgery(&g, 1, q), 1)
                .unwrap()
                .s(1);
            assert_eq!(s1, int(12 * phi * q));
        }
    }
}

#[test]
fn orientation_reversal_flips_odd_orders() {
    let t = knot_grid("trefoil_left.json");
    let f = knot_grid("figure_eight.json");
    for (p, q) in SLOPES {
        let a = perturbative_invariants(&knot_surgery(&t, p, q), 6).unwrap();
        let b = perturbative_invariants(&knot_surgery(&mirror(&t), -p, q), 6).unwrap();
        let c = perturbative_invariants(&knot_surgery(&f, p, q), 6).unwrap();
        let d = perturbative_invariants(&knot_surgery(&f, -p, q), 6).unwrap();
        for n in 1..=6 {
            let sign = if n % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(a.s(n), sign.clone() * b.s(n), "trefoil ({p},{q}) n={n}");
            assert_eq!(c.s(n), sign * d.s(n), "figure-eight ({p},{q}) n={n}");
        }
    }
}

#[test]
fn two_presentations_of_the_brieskorn_sphere_agree() {
    // -1 surgery on the left trefoil and +1 surgery on the figure-eight give
    // the same manifold.
    let a =
        perturbative_invariants(&knot_surgery(&knot_grid("trefoil_left.json"), 1, -1), 6).unwrap();
    let b =
        perturbative_invariants(&knot_surgery(&knot_grid("figure_eight.json"), 1, 1), 6).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.s(1), int(-12));
    assert_eq!(a.s(2), ratio(1153, 6));
}

#[test]
fn knot_surgeries_are_integral() {
    for name in ["trefoil_left.json", "figure_eight.json"] {
        let g = knot_grid(name);
        for (p, q) in SLOPES {
            let inv = perturbative_invariants(&knot_surgery(&g, p, q), 3).unwrap();
            assert_eq!(inv.ord_h1(), &(p.abs().into()));
            for n in 1..=3 {
                assert!(
                    integerize(&inv, n).unwrap().integral,
                    "{name} ({p},{q}) n={n}"
                );
                assert!(
                    denominator_bound_check(&inv, n).unwrap().passed,
                    "{name} ({p},{q}) n={n}"
                );
            }
        }
    }
}

#[test]
fn presentation_file_resolves_a_relative_fixture() {
    let (file, sp) = read_presentation(&common::fixture("trefoil_plus1.json")).unwrap();
    let inv = perturbative_invariants(&sp, file.n_max).unwrap();
    assert_eq!(inv.s(1), int(12));
    assert_eq!(phi1_s1(&sp).unwrap(), int(12));
    assert_eq!(inv.lambda_cw(), int(2));
}
