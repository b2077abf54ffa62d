//! End-to-end acceptance checks. Each criterion prints one pass/fail line;
//! the test fails if any of them does.

use std::cmp::Ordering;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbit_designs::designs::{
    nonexistence_obstruction, strength_direct, strength_full, strength_invariant,
    tables::{certify_instance, table_instances},
    CornerShell, WeightedDesign,
};
use orbit_designs::groups::{build_group, molien_dims, GroupType, ReflectionGroup};
use orbit_designs::invariants::{
    a_phi, closed_form_invariant, closed_form_labels, corner_value, evaluate_at_corner,
    generator_residuals, invariant_harm_basis,
};
use orbit_designs::poly::laplacian;
use orbit_designs::scalar::DEFAULT_PRECISION;
use orbit_designs::xu::{
    solve_moment_system, verify_conditions, verify_degree, Family, RadialWeight, XuError, XuFormula,
};
use orbit_designs::{MultiPoly, Scalar};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || {
        format!("{what} took {took:?}, limit {limit:?}")
    })
}

fn max_coeff(p: &MultiPoly) -> f64 {
    p.terms()
        .values()
        .map(|c| c.abs().to_f64())
        .fold(0.0, f64::max)
}

fn groups(
    ty: GroupType,
    ranks: std::ops::RangeInclusive<usize>,
) -> impl Iterator<Item = ReflectionGroup> {
    ranks.map(move |n| build_group(ty, n).expect("valid rank"))
}

fn molien_dimensions() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let all = groups(GroupType::A, 2..=8)
        .chain(groups(GroupType::B, 2..=8))
        .chain(groups(GroupType::D, 4..=8));
    for g in all {
        let q = molien_dims(&g, 10);
        for l in 0..=10u32 {
            let count = invariant_harm_basis(&g, l)
                .map_err(|e| e.to_string())?
                .polys
                .len() as u64;
            ensure(count == q[l as usize], || {
                format!(
                    "{}{} l={l}: basis {count}, series {}",
                    g.ty, g.n, q[l as usize]
                )
            })?;
            checked += 1;
        }
    }
    let printed: [(GroupType, usize, &[u64]); 3] = [
        (GroupType::B, 2, &[1, 0, 0, 0, 1, 0, 0, 0, 1]),
        (GroupType::D, 4, &[1, 0, 0, 0, 2, 0, 1, 0, 3]),
        (GroupType::A, 3, &[1, 0, 0, 1, 1, 0, 1]),
    ];
    for (ty, n, want) in printed {
        let q = molien_dims(&build_group(ty, n).unwrap(), want.len() - 1);
        ensure(q == want, || {
            format!("{ty}{n} series {q:?}, printed {want:?}")
        })?;
    }
    within(start, Duration::from_secs(120), "molien")?;
    Ok(format!(
        "{checked} (group, degree) counts and 3 printed series in {:.1?}",
        start.elapsed()
    ))
}

fn closed_form_fixtures() -> Outcome {
    let mut checked = 0;
    let mut worst_a = 0.0f64;
    let cases = (2..=10)
        .map(|n| (GroupType::A, n))
        .chain((2..=10).map(|n| (GroupType::B, n)))
        .chain((4..=10).map(|n| (GroupType::D, n)));
    for (ty, n) in cases {
        let g = build_group(ty, n).unwrap();
        for label in closed_form_labels(ty, n) {
            let f = closed_form_invariant(ty, n, label).map_err(|e| e.to_string())?;
            // the symmetric building blocks are invariant under the coordinate permutations only
            let partial = label.starts_with('h') || label == "obstruction6";
            let mut residuals = vec![laplacian(&f)];
            if partial {
                let perms = ReflectionGroup {
                    generators: g
                        .generators
                        .iter()
                        .filter(|m| ReflectionGroup::is_monomial(m))
                        .cloned()
                        .collect(),
                    ..g.clone()
                };
                residuals.extend(generator_residuals(&perms, &f));
            } else {
                residuals.extend(generator_residuals(&g, &f));
            }
            for r in &residuals {
                if ty == GroupType::A {
                    let m = max_coeff(r);
                    worst_a = worst_a.max(m);
                    ensure(m < 1e-30, || format!("{ty}{n} {label}: residual {m:e}"))?;
                } else {
                    ensure(r.is_zero(), || {
                        format!("{ty}{n} {label}: nonzero exact residual")
                    })?;
                }
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} fixtures harmonic and invariant; B/D exact, A max residual {worst_a:e}"
    ))
}

fn rel_close(a: &Scalar, b: &Scalar, tol: f64) -> bool {
    let diff = (a - b).abs().to_f64();
    diff <= tol * a.abs().to_f64().max(b.abs().to_f64()).max(1e-300)
}

fn corner_values() -> Outcome {
    let mut exact = 0;
    for (ty, lo) in [(GroupType::B, 2), (GroupType::D, 4)] {
        for n in lo..=10 {
            for label in closed_form_labels(ty, n) {
                let f = closed_form_invariant(ty, n, label).unwrap();
                for k in 1..=n {
                    let got = evaluate_at_corner(&f, ty, k);
                    let want = corner_value(ty, n, k, label).map_err(|e| e.to_string())?;
                    ensure(got == want, || {
                        format!("{ty}{n} {label} k={k}: {got} vs {want}")
                    })?;
                    exact += 1;
                }
            }
        }
    }
    let mut numeric = 0;
    for n in 2..=10usize {
        let f3 = closed_form_invariant(GroupType::A, n, "f3").unwrap();
        for k in 1..=n {
            let v = evaluate_at_corner(&f3, GroupType::A, k);
            let zero = v.to_f64().abs() < 1e-30;
            ensure(zero == (2 * k == n + 1), || {
                format!("A{n} f3 k={k}: value {v}")
            })?;
            if n != 3 {
                let want = corner_value(GroupType::A, n, k, "f3").unwrap();
                ensure(zero || rel_close(&v, &want, 1e-30), || {
                    format!("A{n} f3 k={k}: {v} vs {want}")
                })?;
            }
            numeric += 1;
        }
        if n < 3 {
            continue;
        }
        // roots alpha, beta = (n+1)/2 -+ sqrt((n^2-1)/12)
        let mid = (n as f64 + 1.0) / 2.0;
        let half = ((n * n - 1) as f64 / 12.0).sqrt();
        let (alpha, beta) = (mid - half, mid + half);
        ensure(
            1.0 < alpha && alpha < mid && mid < beta && beta < n as f64,
            || format!("A{n}: roots {alpha}, {beta}"),
        )?;
        let phi = a_phi(n, 4).unwrap().signum();
        let f4 = closed_form_invariant(GroupType::A, n, "f4").unwrap();
        let mut signs = Vec::new();
        for k in 1..=n {
            let v = evaluate_at_corner(&f4, GroupType::A, k);
            let want = corner_value(GroupType::A, n, k, "f4").unwrap();
            ensure(rel_close(&v, &want, 1e-30), || {
                format!("A{n} f4 k={k}: {v} vs {want}")
            })?;
            let q = (k as f64 - alpha) * (k as f64 - beta);
            // integral roots occur, e.g. alpha = 2 for n = 7
            let expected = if q.abs() < 1e-9 {
                Ordering::Equal
            } else if q > 0.0 {
                phi
            } else {
                phi.reverse()
            };
            ensure(v.signum() == expected, || {
                format!(
                    "A{n} f4 k={k}: sign {:?}, expected {expected:?}",
                    v.signum()
                )
            })?;
            signs.push(v.signum());
            numeric += 1;
        }
        let inside = signs[n.div_ceil(2) - 1];
        ensure(signs[0] == signs[n - 1] && signs[0] != inside, || {
            format!("A{n} f4 signs {signs:?} do not straddle")
        })?;
    }
    Ok(format!(
        "{exact} exact B/D values, {numeric} A sign/zero checks"
    ))
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let mut rows = 0;
    for table in 1..=3u8 {
        for row in table_instances(table, None) {
            let c = certify_instance(&row, DEFAULT_PRECISION)
                .map_err(|e| format!("{}: {e}", row.label()))?;
            ensure(c.pass, || {
                format!(
                    "{}: invariant {} full {} direct {} size {} bound {}",
                    c.label, c.invariant, c.full, c.direct, c.size, c.bound
                )
            })?;
            rows += 1;
        }
    }
    within(start, Duration::from_secs(300), "tables")?;
    Ok(format!(
        "{rows} row instances certified, tight and failing at t+1 in {:.1?}",
        start.elapsed()
    ))
}

fn random_ratio(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(1..=12), rng.gen_range(1..=12))
}

/// Random `X(G, J)`: a nonempty set of corners, each on its own shell.
fn random_corner_design(
    rng: &mut ChaCha8Rng,
    g: &ReflectionGroup,
) -> Result<WeightedDesign, String> {
    let mut ks: Vec<usize> = (1..=g.n).collect();
    ks.shuffle(rng);
    let size = rng.gen_range(1..=g.n.min(3));
    let mut shells: Vec<CornerShell> = ks[..size]
        .iter()
        .map(|&k| CornerShell::new(k, random_ratio(rng), random_ratio(rng)))
        .collect();
    shells.sort_by_key(|s| s.k);
    WeightedDesign::from_corners(g, &shells).map_err(|e| e.to_string())
}

fn nonexistence() -> Outcome {
    for n in 2..=12 {
        let t = nonexistence_obstruction(GroupType::A, n).map_err(|e| e.to_string())?;
        let f = t.factor.unwrap();
        ensure(f.iter().all(|(_, v)| v.is_negative()), || {
            format!("A{n}: F(k) not negative")
        })?;
    }
    for n in 4..=12 {
        for k in 1..=n {
            let v = corner_value(GroupType::D, n, k, "f8").map_err(|e| e.to_string())?;
            ensure(v.is_positive(), || format!("D{n}: f8(v_{k}) = {v}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut best = Vec::new();
    for (ty, ranks, forbidden) in [
        (GroupType::A, 2..=5, 6),
        (GroupType::B, 2..=5, 8),
        (GroupType::D, 4..=5, 8),
    ] {
        let gs: Vec<ReflectionGroup> = groups(ty, ranks).collect();
        let mut top = 0;
        for _ in 0..200 {
            let g = gs.choose(&mut rng).unwrap();
            let x = random_corner_design(&mut rng, g)?;
            let t = strength_invariant(&x, g, forbidden)
                .map_err(|e| e.to_string())?
                .t_certified;
            ensure(t < forbidden, || {
                format!("{ty}{} sample certified t = {t}", g.n)
            })?;
            top = top.max(t);
        }
        best.push(format!("{ty} max t {top}"));
    }
    Ok(format!(
        "F(k) < 0 for A2..12, f8 > 0 for D4..12, 600 samples below the bound ({})",
        best.join(", ")
    ))
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    // small entries with repeats keep the orbits short
    (0..n)
        .map(|_| Scalar::from_int(rng.gen_range(-2..=2)))
        .collect()
}

fn oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let gs: Vec<ReflectionGroup> = groups(GroupType::A, 2..=4)
        .chain(groups(GroupType::B, 2..=4))
        .chain(groups(GroupType::D, 4..=5))
        .collect();
    let mut histogram = [0usize; 8];
    let mut made = 0;
    while made < 100 {
        let g = gs.choose(&mut rng).unwrap();
        let x = if g.ty == GroupType::B && rng.gen_bool(0.5) {
            let reps: Vec<(Vec<Scalar>, Scalar)> = (0..rng.gen_range(1..=2))
                .map(|_| (random_point(&mut rng, g.n), random_ratio(&mut rng)))
                .collect();
            if reps.iter().any(|(p, _)| p.iter().all(Scalar::is_zero)) {
                continue;
            }
            match WeightedDesign::from_orbits(g, &reps) {
                Ok(x) => x,
                Err(_) => continue,
            }
        } else {
            random_corner_design(&mut rng, g)?
        };
        let a = strength_invariant(&x, g, 7)
            .map_err(|e| e.to_string())?
            .t_certified;
        let b = strength_full(&x, 7).map_err(|e| e.to_string())?.t_certified;
        let c = strength_direct(&x, 7)
            .map_err(|e| e.to_string())?
            .t_certified;
        ensure(a == b && b == c, || {
            format!("{}{}: invariant {a}, full {b}, direct {c}", g.ty, g.n)
        })?;
        histogram[a as usize] += 1;
        made += 1;
    }
    Ok(format!(
        "100 designs, all three methods agree; strengths 0..7: {histogram:?}"
    ))
}

fn xu_round_trip() -> Outcome {
    let mut solved = Vec::new();
    let mut unsolvable = Vec::new();
    let mut worst = 0.0f64;
    for w in [RadialWeight::Gaussian, RadialWeight::UnitDisk] {
        for n in 2..=6 {
            for fam in [Family::Odd, Family::Even] {
                let tag = format!("{} n={n} {fam}", w.name());
                let f = match solve_moment_system(&w, n, fam) {
                    Ok(f) => f,
                    Err(XuError::NoPositiveSolution { .. }) => {
                        unsolvable.push(tag);
                        continue;
                    }
                    Err(e) => return Err(format!("{tag}: {e}")),
                };
                let cond = verify_conditions(&f, &w).map_err(|e| e.to_string())?;
                let deg = verify_degree(&f, &w, f.degree()).map_err(|e| e.to_string())?;
                ensure(cond.pass && deg.pass, || {
                    format!("{tag}: conditions {} degree {}", cond.pass, deg.pass)
                })?;
                let values = cond
                    .residuals
                    .iter()
                    .map(|r| &r.value)
                    .chain(deg.monomials.iter().map(|r| &r.value))
                    .chain(deg.invariants.iter().map(|r| &r.value));
                for v in values {
                    let a = v.abs().to_f64();
                    worst = worst.max(a);
                    ensure(a < 1e-12, || format!("{tag}: residual {a:e}"))?;
                }
                solved.push(tag);
            }
        }
    }
    for must in [
        "gaussian n=2 odd",
        "gaussian n=3 odd",
        "gaussian n=2 even",
        "unit_disk n=2 odd",
        "unit_disk n=3 odd",
    ] {
        ensure(solved.iter().any(|s| s == must), || {
            format!("{must} was not solved")
        })?;
    }
    let g2 =
        solve_moment_system(&RadialWeight::Gaussian, 2, Family::Odd).map_err(|e| e.to_string())?;
    let off = (g2.lambda[0].to_f64() - 0.5)
        .abs()
        .max((g2.r[0].to_f64() - 1.0).abs());
    ensure(off < 1e-12, || {
        format!("gaussian n=2 solution ({}, {})", g2.lambda[0], g2.r[0])
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let bases: Vec<(RadialWeight, XuFormula)> = [
        (RadialWeight::Gaussian, 3),
        (RadialWeight::UnitDisk, 3),
        (RadialWeight::Gaussian, 2),
    ]
    .into_iter()
    .map(|(w, n)| {
        let f = solve_moment_system(&w, n, Family::Odd).unwrap();
        (w, f)
    })
    .collect();
    for i in 0..20 {
        let (w, base) = &bases[i % bases.len()];
        let mut f = base.clone();
        let rel: f64 = rng.gen_range(1e-6..0.25) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let factor = Scalar::from_f64(1.0 + rel, DEFAULT_PRECISION);
        let c = f.lambda.len();
        match rng.gen_range(0..2 * c + f.lambda0.is_some() as usize) {
            k if k < c => f.lambda[k] = &f.lambda[k] * &factor,
            k if k < 2 * c => f.r[k - c] = &f.r[k - c] * &factor,
            _ => f.lambda0 = f.lambda0.map(|v| &v * &factor),
        }
        let cond = verify_conditions(&f, w).map_err(|e| e.to_string())?.pass;
        let deg = verify_degree(&f, w, f.degree())
            .map_err(|e| e.to_string())?
            .pass;
        ensure(!cond && !deg, || {
            format!("perturbation {i} (rel {rel:e}): conditions {cond}, degree {deg}")
        })?;
    }
    Ok(format!(
        "solved [{}], max residual {worst:e}; no positive solution for [{}]; 20 perturbations flip both checks",
        solved.join(", "),
        unsolvable.join(", ")
    ))
}

fn orbit_designs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for (ty, n) in [
        (GroupType::A, 2),
        (GroupType::A, 3),
        (GroupType::B, 2),
        (GroupType::B, 3),
        (GroupType::D, 4),
    ] {
        let g = build_group(ty, n).unwrap();
        for _ in 0..5 {
            // random direction with a rational representative; the radius does not affect strength
            let v: Vec<Scalar> = (0..n)
                .map(|_| Scalar::ratio(rng.gen_range(-40..=40), rng.gen_range(1..=9)))
                .collect();
            if v.iter().all(Scalar::is_zero) {
                continue;
            }
            let x = WeightedDesign::from_orbits(&g, &[(v, Scalar::one())])
                .map_err(|e| e.to_string())?;
            let t = strength_full(&x, g.m2())
                .map_err(|e| e.to_string())?
                .t_certified;
            ensure(t == g.m2(), || {
                format!("{ty}{n}: orbit of size {} reached only t = {t}", x.size())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} random orbits are spherical m2-designs"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("molien dimensions", molien_dimensions),
        ("closed-form fixtures", closed_form_fixtures),
        ("corner values", corner_values),
        ("table reproduction", table_reproduction),
        ("nonexistence", nonexistence),
        ("oracle agreement", oracle_agreement),
        ("xu round trip", xu_round_trip),
        ("orbit m2-designs", orbit_designs),
    ];
    // written straight to stderr so the lines survive the harness's output capture
    let mut err = std::io::stderr();
    let _ = writeln!(err);
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(detail) => {
                let _ = writeln!(
                    err,
                    "criterion {}: PASS {name} ({:.1?}): {detail}",
                    i + 1,
                    start.elapsed()
                );
            }
            Err(reason) => {
                let _ = writeln!(err, "criterion {}: FAIL {name}: {reason}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
