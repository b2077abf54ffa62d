use proptest::prelude::*;

use super::*;
use crate::poly::act;

fn q(a: i64, b: i64) -> Scalar {
    Scalar::ratio(a, b)
}

fn close(a: &Scalar, b: &Scalar, tol: f64) -> bool {
    (a - b).abs().to_f64() <= tol * b.abs().to_f64().max(1.0)
}

fn gaussian_two() -> XuFormula {
    XuFormula::new(Family::Odd, 2, vec![q(1, 2)], vec![Scalar::one()], None).unwrap()
}

fn two_pi() -> Scalar {
    &Scalar::pi(DEFAULT_PRECISION) * &Scalar::from_int(2)
}

#[test]
fn square_formula_points() {
    let pts = build_points(&gaussian_two());
    assert_eq!(pts.len(), 4);
    let quarter = &Scalar::pi(DEFAULT_PRECISION) / &Scalar::from_int(4);
    let want = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    for (p, (x, y)) in pts.iter().zip(want) {
        assert!(
            close(&p.x, &Scalar::from_int(x), 1e-60) && close(&p.y, &Scalar::from_int(y), 1e-60)
        );
        assert!(close(&p.weight, &quarter, 1e-60));
    }
    let total = pts.iter().fold(Scalar::zero(), |a, p| &a + &p.weight);
    assert!(close(&total, &Scalar::pi(DEFAULT_PRECISION), 1e-60));
}

#[test]
fn odd_n_has_a_center_and_even_family_uses_2m_plus_1_angles() {
    let f = XuFormula::new(Family::Odd, 3, vec![q(1, 8)], vec![q(3, 2)], Some(q(1, 3))).unwrap();
    let pts = build_points(&f);
    assert_eq!(pts.len(), 1 + 6);
    assert!(pts[0].x.is_zero() && pts[0].y.is_zero());
    assert_eq!(pts[0].weight, q(1, 3));

    let g = XuFormula::new(
        Family::Even,
        2,
        vec![q(1, 4), q(1, 4)],
        vec![q(1, 2), q(3, 2)],
        None,
    )
    .unwrap();
    assert_eq!(g.m, 1);
    assert_eq!(g.angles(), 3);
    assert_eq!(build_points(&g).len(), 6);
    assert_eq!(g.sigma, vec![0, 1]);
    // total weight is 2 pi sum lambda
    let total = build_points(&g)
        .iter()
        .fold(Scalar::zero(), |a, p| &a + &p.weight);
    assert!(close(&total, &(&two_pi() * &q(1, 2)), 1e-60));
}

#[test]
fn malformed_formulas_are_rejected() {
    assert!(XuFormula::new(Family::Odd, 4, vec![q(1, 2)], vec![q(1, 1)], None).is_err());
    assert!(XuFormula::new(Family::Odd, 3, vec![q(1, 2)], vec![q(1, 1)], None).is_err());
    assert!(XuFormula::new(
        Family::Odd,
        4,
        vec![q(1, 2), q(1, 2)],
        vec![q(1, 1), q(1, 1)],
        None
    )
    .is_err());
    assert!(XuFormula::new(Family::Odd, 2, vec![q(-1, 2)], vec![q(1, 1)], None).is_err());
    let bad: Result<XuFormula, _> =
        serde_json::from_str(r#"{"family":"odd","n":2,"m":3,"lambda":["1/2"],"r":["1"]}"#);
    assert!(bad.is_err());
}

#[test]
fn json_round_trip() {
    let f = gaussian_two();
    let text = serde_json::to_string(&f).unwrap();
    let back: XuFormula = serde_json::from_str(&text).unwrap();
    assert_eq!(back, f);
    let plain: XuFormula =
        serde_json::from_str(r#"{"family":"odd","n":2,"lambda":[0.5],"r":[1]}"#).unwrap();
    assert_eq!(plain, f);
}

#[test]
fn gaussian_moments() {
    // mu(j) = int r^(2j+1) e^(-r^2) dr = j!/2
    let w = RadialWeight::Gaussian;
    assert_eq!(w.moment(0).unwrap(), q(1, 2));
    assert_eq!(w.moment(3).unwrap(), q(3, 1));
    assert_eq!(RadialWeight::UnitDisk.moment(2).unwrap(), q(1, 6));
    assert!(RadialWeight::custom(vec![q(1, 1), q(0, 1)]).is_err());
    let c = RadialWeight::custom(vec![q(1, 1)]).unwrap();
    assert!(matches!(c.moment(1), Err(XuError::MomentUnavailable(1))));
}

#[test]
fn gaussian_two_conditions_vanish_exactly() {
    let rep = verify_conditions(&gaussian_two(), &RadialWeight::Gaussian).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.residuals.len(), 2);
    assert!(rep
        .residuals
        .iter()
        .all(|r| r.kind == ConditionKind::Moment && r.value.is_zero()));
    assert!(rep.residuals[0].added && !rep.residuals[1].added);
}

#[test]
fn perturbed_radius_gives_linear_residual() {
    let f = XuFormula::new(Family::Odd, 2, vec![q(1, 2)], vec![q(11, 10)], None).unwrap();
    let rep = verify_conditions(&f, &RadialWeight::Gaussian).unwrap();
    assert!(!rep.pass);
    assert_eq!(
        rep.residuals[1].value,
        &q(1, 2) * &(&q(121, 100) - &q(1, 1))
    );
    assert_eq!(rep.failing, vec![(ConditionKind::Moment, 1)]);
}

/// Two-point Gauss-Laguerre rule for `e^(-s) ds / 2`: nodes `2 -+ sqrt 2`,
/// weights `(2 +- sqrt 2) / 8`.
fn laguerre_two() -> XuFormula {
    let s2 = Scalar::sqrt_of_int(2);
    let nodes = [&Scalar::from_int(2) - &s2, &Scalar::from_int(2) + &s2];
    let lambda = vec![
        &(&Scalar::from_int(2) + &s2) / &Scalar::from_int(8),
        &(&Scalar::from_int(2) - &s2) / &Scalar::from_int(8),
    ];
    let r = nodes
        .iter()
        .map(|s| s.sqrt(DEFAULT_PRECISION).unwrap())
        .collect();
    XuFormula::new(Family::Odd, 4, lambda, r, None).unwrap()
}

#[test]
fn alternating_violation_is_flagged_with_its_index() {
    let f = laguerre_two();
    let rep = verify_conditions(&f, &RadialWeight::Gaussian).unwrap();
    assert_eq!(rep.failing, vec![(ConditionKind::Alternating, 3)]);
    let deg = verify_degree(&f, &RadialWeight::Gaussian, 7).unwrap();
    assert!(!deg.pass);
    assert!(verify_degree(&f, &RadialWeight::Gaussian, 5).unwrap().pass);
}

#[test]
fn gaussian_four_odd_is_not_solvable() {
    // moments 0..3 force the Laguerre rule above, which breaks j = 3
    assert!(matches!(
        solve_moment_system(&RadialWeight::Gaussian, 4, Family::Odd),
        Err(XuError::NoPositiveSolution { .. })
    ));
}

#[test]
fn degree_of_the_square_rule() {
    let f = gaussian_two();
    let w = RadialWeight::Gaussian;
    assert!(verify_degree(&f, &w, 3).unwrap().pass);
    let rep = verify_degree(&f, &w, 4).unwrap();
    assert!(!rep.pass);
    let x4 = rep.monomials.iter().find(|m| m.a == 4 && m.b == 0).unwrap();
    // formula pi/2, integral 3 pi/4
    let pi = Scalar::pi(DEFAULT_PRECISION);
    assert!(close(&x4.value, &(&pi * &q(-1, 4)), 1e-60));
    assert!(!x4.vanishes);
    assert!(rep.invariants.len() < rep.monomials.len());
}

#[test]
fn constants_check_total_weight() {
    let w = RadialWeight::UnitDisk;
    let good = XuFormula::new(Family::Odd, 2, vec![q(1, 2)], vec![q(1, 3)], None).unwrap();
    let bad = XuFormula::new(Family::Odd, 2, vec![q(1, 3)], vec![q(1, 3)], None).unwrap();
    assert!(verify_degree(&good, &w, 0).unwrap().pass);
    assert!(!verify_degree(&bad, &w, 0).unwrap().pass);
}

fn solved(w: &RadialWeight, n: usize, family: Family) -> XuFormula {
    solve_moment_system(w, n, family).unwrap_or_else(|e| panic!("{} n={n} {family}: {e}", w.name()))
}

#[test]
fn two_equation_solves() {
    let g = solved(&RadialWeight::Gaussian, 2, Family::Odd);
    assert_eq!(g.lambda, vec![q(1, 2)]);
    assert_eq!(g.r, vec![Scalar::one()]);
    let d = solved(&RadialWeight::UnitDisk, 2, Family::Odd);
    assert_eq!(d.lambda, vec![q(1, 2)]);
    assert_eq!(&d.r[0] * &d.r[0], q(1, 2));
}

#[test]
fn center_point_solves_match_closed_form() {
    // s = mu2/mu1, lambda1 = mu1^2/mu2, lambda0 = 2 pi (mu0 - lambda1)
    for w in [RadialWeight::Gaussian, RadialWeight::UnitDisk] {
        let (m0, m1, m2) = (
            w.moment(0).unwrap(),
            w.moment(1).unwrap(),
            w.moment(2).unwrap(),
        );
        let f = solved(&w, 3, Family::Odd);
        let lam = &(&m1 * &m1) / &m2;
        assert!(close(&(&f.r[0] * &f.r[0]), &(&m2 / &m1), 1e-60));
        assert!(close(&f.lambda[0], &lam, 1e-60));
        assert!(close(
            f.lambda0.as_ref().unwrap(),
            &(&two_pi() * &(&m0 - &lam)),
            1e-60
        ));
    }
}

#[test]
fn solved_formulas_reach_their_degree() {
    let cases = [(2, Family::Odd), (3, Family::Odd), (2, Family::Even)];
    for w in [RadialWeight::Gaussian, RadialWeight::UnitDisk] {
        for (n, fam) in cases {
            let f = solved(&w, n, fam);
            assert!(verify_conditions(&f, &w).unwrap().pass);
            let rep = verify_degree(&f, &w, f.degree()).unwrap();
            assert!(rep.pass, "{} n={n} {fam}", w.name());
            // odd monomials integrate to zero and the formula agrees
            for m in rep
                .monomials
                .iter()
                .filter(|m| m.a % 2 == 1 || m.b % 2 == 1)
            {
                assert!(m.value.abs().to_f64() < 1e-60);
            }
        }
    }
}

#[test]
fn dihedral_basics() {
    let u = dihedral_u();
    for l in 1..=6 {
        let e = dihedral_reduce(&u, l).unwrap();
        assert_eq!(e.terms, vec![(1, 0, Scalar::one())]);
    }
    let f = MultiPoly::from_terms(
        2,
        [
            (crate::poly::Monomial(vec![4, 0]), q(1, 1)),
            (crate::poly::Monomial(vec![2, 2]), q(-6, 1)),
            (crate::poly::Monomial(vec![0, 4]), q(1, 1)),
        ],
    );
    assert_eq!(
        dihedral_reduce(&f, 4).unwrap().terms,
        vec![(0, 1, Scalar::one())]
    );
    // u^3 + v, expanded independently from Re((x+iy)^4)
    let mix = u.pow(3).add(&f);
    let e = dihedral_reduce(&mix, 4).unwrap();
    assert_eq!(e.terms, vec![(0, 1, Scalar::one()), (3, 0, Scalar::one())]);
    assert!(e.reconstruct().sub(&mix).is_zero());
}

#[test]
fn dihedral_rejects_non_invariants() {
    let xy = MultiPoly::monomial(Scalar::one(), &[1, 1]);
    assert!(matches!(
        dihedral_reduce(&xy, 4),
        Err(XuError::NotInvariant(4))
    ));
    let x3 = MultiPoly::monomial(Scalar::one(), &[3, 0]);
    assert!(dihedral_reduce(&x3, 4).is_err());
    assert!(dihedral_reduce(&x3, 3).is_err());
    assert!(dihedral_reduce(&MultiPoly::zero(3), 2).is_err());
}

fn rotation(l: usize) -> Matrix {
    let a = &(&Scalar::pi(DEFAULT_PRECISION) * &Scalar::from_int(2)) / &Scalar::from_int(l as i64);
    let (c, s) = (a.cos(DEFAULT_PRECISION), a.sin(DEFAULT_PRECISION));
    vec![vec![c.clone(), -s.clone()], vec![s, c]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduce_inverts_reconstruct(l in 1usize..7, coeffs in prop::collection::vec((0u32..4, 0u32..3, -9i64..10), 1..5)) {
        let terms: Vec<(u32, u32, Scalar)> = coeffs.into_iter().map(|(p, q, c)| (p, q, Scalar::from_int(c))).collect();
        let f = DihedralExpansion { l, terms }.reconstruct();
        let e = dihedral_reduce(&f, l).unwrap();
        prop_assert!(e.reconstruct().sub(&f).is_zero());
        // invariance under the rotation by 2 pi / l, in floats
        let g = act(&rotation(l), &f).unwrap();
        let diff = g.sub(&f);
        prop_assert!(diff.terms().values().all(|c| c.abs().to_f64() < 1e-50));
    }

    #[test]
    fn perturbations_flip_both_checks(case in 0usize..6, which in 0usize..5, rel in 1e-4f64..0.3, up in any::<bool>()) {
        let (w, n, fam) = [
            (RadialWeight::Gaussian, 2, Family::Odd),
            (RadialWeight::Gaussian, 3, Family::Odd),
            (RadialWeight::Gaussian, 2, Family::Even),
            (RadialWeight::UnitDisk, 2, Family::Odd),
            (RadialWeight::UnitDisk, 3, Family::Odd),
            (RadialWeight::UnitDisk, 2, Family::Even),
        ][case].clone();
        let mut f = solved(&w, n, fam);
        let factor = Scalar::from_f64(if up { 1.0 + rel } else { 1.0 - rel }, DEFAULT_PRECISION);
        let slots = f.lambda.len() + f.r.len() + f.lambda0.is_some() as usize;
        let k = which % slots;
        if k < f.lambda.len() {
            f.lambda[k] = &f.lambda[k] * &factor;
        } else if k < 2 * f.lambda.len() {
            let i = k - f.lambda.len();
            f.r[i] = &f.r[i] * &factor;
        } else {
            f.lambda0 = f.lambda0.map(|v| &v * &factor);
        }
        let cond = verify_conditions(&f, &w).unwrap().pass;
        let deg = verify_degree(&f, &w, f.degree()).unwrap().pass;
        prop_assert_eq!(cond, deg);
        prop_assert!(!cond);
    }
}
