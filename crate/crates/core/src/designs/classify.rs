//! Search for tight designs among the corner unions `X(G, J)`.
//!
//! Candidates are pruned by cardinality against the Fisher-type bound. For
//! a surviving `(J, t)` and a partition of `J` into radius classes, the
//! conditions `sum_k w_k N_k r_k^(2j+l) phi(v_k) = 0` are solved for radii
//! and weights: Levenberg-Marquardt in `f64` over log-variables, then
//! Gauss-Newton at full precision.

use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::{storage::Owned, DMatrix, DVector, Dyn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{fisher_bound, is_tight, CornerShell, DesignError, ShellMeta, WeightedDesign};
use crate::groups::{GroupType, ReflectionGroup};
use crate::invariants::{cached_invariant_basis, evaluate_at_corner};
use crate::linalg::solve;
use crate::scalar::{Scalar, DEFAULT_PRECISION};

const SEEDS: usize = 24;
const LM_ACCEPT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Confirmation {
    /// Verified with exact arithmetic after recognising rational values.
    Exact,
    /// Verified at full float precision.
    Numeric,
    /// Converged in double precision only; needs a closer look.
    Unresolved,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusSolution {
    /// `(k, r_k^2)` with the first radius class at radius 1.
    pub radii_sq: Vec<(usize, Scalar)>,
    /// `(k, w_k)` with `w_{min J} = 1`.
    pub weights: Vec<(usize, Scalar)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifiedDesign {
    pub ty: GroupType,
    pub n: usize,
    pub t: u32,
    pub j: Vec<usize>,
    /// Members of `J` sharing a radius.
    pub classes: Vec<Vec<usize>>,
    /// Dimension of the solution family; the sample fixes that many radii.
    pub free_dim: usize,
    pub sample: RadiusSolution,
    pub size: u128,
    pub confirmation: Confirmation,
}

impl ClassifiedDesign {
    pub fn spheres(&self) -> usize {
        self.classes.len()
    }

    pub fn corner_shells(&self) -> Vec<CornerShell> {
        self.sample
            .radii_sq
            .iter()
            .zip(&self.sample.weights)
            .map(|((k, r2), (_, w))| CornerShell::new(*k, r2.clone(), w.clone()))
            .collect()
    }
}

/// Rows `N_k phi(v_k)` of the conditions up to degree `t`, with their degree `2j + l`.
struct Conditions {
    degrees: Vec<u32>,
    rows: Vec<Vec<Scalar>>,
}

fn conditions(j: &[usize], t: u32, values: &[(u32, Vec<Scalar>)]) -> Conditions {
    let mut degrees = Vec::new();
    let mut rows = Vec::new();
    for d in 1..=t {
        for (l, row) in values.iter().filter(|(l, _)| *l <= d && (d - *l) % 2 == 0) {
            debug_assert!(*l >= 1);
            let r: Vec<Scalar> = j.iter().map(|&k| row[k - 1].clone()).collect();
            if r.iter().any(|x| !x.is_zero()) {
                degrees.push(d);
                rows.push(r);
            }
        }
    }
    Conditions { degrees, rows }
}

/// `N_k phi(v_k)` for every invariant basis element of degree `1..=t_max`.
fn corner_values(g: &ReflectionGroup, t_max: u32) -> Result<Vec<(u32, Vec<Scalar>)>, DesignError> {
    let mut out = Vec::new();
    for l in 1..=t_max {
        for phi in cached_invariant_basis(g, l)?.iter() {
            let row = (1..=g.n)
                .map(|k| {
                    let v = evaluate_at_corner(phi, g.ty, k);
                    let nk = Scalar::from_bigint((g.corner_orbit_size(k) as i64).into());
                    &nk * &v
                })
                .collect();
            out.push((l, row));
        }
    }
    Ok(out)
}

/// Variable layout: log-radii of classes `1..p`, log-weights of `J[1..]`.
#[derive(Clone)]
struct Layout {
    class_of: Vec<usize>,
    classes: usize,
}

impl Layout {
    fn vars(&self) -> usize {
        self.classes - 1 + self.class_of.len() - 1
    }

    /// Radii and weights per member of `J` from a full variable vector.
    fn unpack(&self, v: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let radius: Vec<f64> = std::iter::once(1.0)
            .chain(v[..self.classes - 1].iter().map(|y| y.exp()))
            .collect();
        let r = self.class_of.iter().map(|&c| radius[c]).collect();
        let w = std::iter::once(1.0)
            .chain(v[self.classes - 1..].iter().map(|z| z.exp()))
            .collect();
        (r, w)
    }
}

struct Problem<'a> {
    rows: &'a [(u32, Vec<f64>)],
    layout: &'a Layout,
    /// Value per variable; `Some` when frozen.
    frozen: &'a [Option<f64>],
    free: Vec<usize>,
    full: Vec<f64>,
}

impl<'a> Problem<'a> {
    fn new(
        rows: &'a [(u32, Vec<f64>)],
        layout: &'a Layout,
        frozen: &'a [Option<f64>],
        start: &[f64],
    ) -> Self {
        let free: Vec<usize> = (0..layout.vars())
            .filter(|&i| frozen[i].is_none())
            .collect();
        let full = (0..layout.vars())
            .map(|i| frozen[i].unwrap_or(start[i]))
            .collect();
        Problem {
            rows,
            layout,
            frozen,
            free,
            full,
        }
    }

    fn residual_vec(&self) -> Vec<f64> {
        let (r, w) = self.layout.unpack(&self.full);
        self.rows
            .iter()
            .map(|(d, a)| {
                a.iter()
                    .enumerate()
                    .map(|(i, ai)| w[i] * ai * r[i].powi(*d as i32))
                    .sum()
            })
            .collect()
    }

    /// Jacobian with respect to every variable.
    fn full_jacobian(&self) -> DMatrix<f64> {
        let (r, w) = self.layout.unpack(&self.full);
        let nc = self.layout.classes - 1;
        let mut jac = DMatrix::zeros(self.rows.len(), self.layout.vars());
        for (row, (d, a)) in self.rows.iter().enumerate() {
            for (i, ai) in a.iter().enumerate() {
                let term = w[i] * ai * r[i].powi(*d as i32);
                let c = self.layout.class_of[i];
                if c > 0 {
                    jac[(row, c - 1)] += term * *d as f64;
                }
                if i > 0 {
                    jac[(row, nc + i - 1)] += term;
                }
            }
        }
        jac
    }
}

impl LeastSquaresProblem<f64, Dyn, Dyn> for Problem<'_> {
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, Dyn>;
    type ParameterStorage = Owned<f64, Dyn>;

    fn set_params(&mut self, x: &DVector<f64>) {
        for (slot, v) in self.free.iter().zip(x.iter()) {
            self.full[*slot] = *v;
        }
        debug_assert!(self
            .frozen
            .iter()
            .zip(&self.full)
            .all(|(f, v)| f.is_none_or(|f| f == *v)));
    }

    fn params(&self) -> DVector<f64> {
        DVector::from_iterator(self.free.len(), self.free.iter().map(|&i| self.full[i]))
    }

    fn residuals(&self) -> Option<DVector<f64>> {
        Some(DVector::from_vec(self.residual_vec()))
    }

    fn jacobian(&self) -> Option<DMatrix<f64>> {
        let full = self.full_jacobian();
        Some(full.select_columns(self.free.iter()))
    }
}

fn lm_solve(
    rows: &[(u32, Vec<f64>)],
    layout: &Layout,
    frozen: &[Option<f64>],
    start: &[f64],
) -> Option<Vec<f64>> {
    let problem = Problem::new(rows, layout, frozen, start);
    let solved = if problem.free.is_empty() {
        problem
    } else {
        LevenbergMarquardt::new()
            .with_patience(400)
            .minimize(problem)
            .0
    };
    let res = solved.residual_vec();
    let norm = res.iter().map(|x| x * x).sum::<f64>().sqrt();
    let finite = solved.full.iter().all(|v| v.is_finite() && v.abs() < 40.0);
    (finite && norm < LM_ACCEPT).then_some(solved.full)
}

fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|s| **s > 1e-7 * top.max(1e-300)).count()
}

/// Variables to freeze so the remaining Jacobian columns are independent.
/// Weights are kept first, so radii become the free parameters.
fn choose_frozen(jac: &DMatrix<f64>, layout: &Layout) -> Vec<usize> {
    let nc = layout.classes - 1;
    let order: Vec<usize> = (nc..layout.vars()).chain(0..nc).collect();
    let mut kept: Vec<usize> = Vec::new();
    let mut frozen = Vec::new();
    for c in order {
        let mut trial = kept.clone();
        trial.push(c);
        if numerical_rank(&jac.select_columns(trial.iter())) == trial.len() {
            kept = trial;
        } else {
            frozen.push(c);
        }
    }
    frozen.sort_unstable();
    frozen
}

/// A tidy value near `v` for a frozen log-radius: the radius rounded to quarters.
fn tidy_log_radius(v: f64) -> f64 {
    let r = v.exp();
    let q = (r * 4.0).round() / 4.0;
    if q > 0.0 && (q - 1.0).abs() > 1e-9 {
        q.ln()
    } else {
        v
    }
}

/// Gauss-Newton at full precision in the plain variables `(r, w)`.
fn refine(
    cond: &Conditions,
    layout: &Layout,
    frozen: &[bool],
    start: &[f64],
    prec: usize,
) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
    let f = |x: f64| Scalar::from_f64(x, prec);
    let nc = layout.classes - 1;
    let mut vars: Vec<Scalar> = start.iter().map(|v| f(v.exp())).collect();
    let rows: Vec<Vec<Scalar>> = cond
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_float(prec))
                .map(Scalar::Float)
                .collect()
        })
        .collect();
    let free: Vec<usize> = (0..layout.vars()).filter(|&i| !frozen[i]).collect();
    let eval = |vars: &[Scalar]| -> (Vec<Scalar>, Vec<Vec<Scalar>>) {
        let radius: Vec<Scalar> = std::iter::once(Scalar::one())
            .chain(vars[..nc].iter().cloned())
            .collect();
        let w: Vec<Scalar> = std::iter::once(Scalar::one())
            .chain(vars[nc..].iter().cloned())
            .collect();
        let mut res = Vec::with_capacity(rows.len());
        let mut jac = Vec::with_capacity(rows.len());
        for (d, a) in cond.degrees.iter().zip(&rows) {
            let mut acc = Scalar::zero();
            let mut grad = vec![Scalar::zero(); layout.vars()];
            for (i, ai) in a.iter().enumerate() {
                let c = layout.class_of[i];
                let rd1 = radius[c].pow(d - 1);
                let base = &w[i] * ai;
                acc = &acc + &(&base * &(&rd1 * &radius[c]));
                if c > 0 {
                    grad[c - 1] = &grad[c - 1] + &(&(&base * &rd1) * &Scalar::from_int(*d as i64));
                }
                if i > 0 {
                    grad[nc + i - 1] = &grad[nc + i - 1] + &(ai * &(&rd1 * &radius[c]));
                }
            }
            res.push(acc);
            jac.push(free.iter().map(|&v| grad[v].clone()).collect());
        }
        (res, jac)
    };
    let tol = crate::scalar::tolerance_from_bits(prec * 7 / 8, prec);
    for _ in 0..60 {
        let (res, jac) = eval(&vars);
        let norm = res.iter().fold(
            Scalar::zero(),
            |acc, r| if r.abs() > acc { r.abs() } else { acc },
        );
        if norm <= tol || free.is_empty() {
            break;
        }
        // normal equations J^T J delta = -J^T F
        let m = free.len();
        let mut jtj = vec![vec![Scalar::zero(); m]; m];
        let mut rhs = vec![Scalar::zero(); m];
        for (row, r) in jac.iter().zip(&res) {
            for a in 0..m {
                rhs[a] = &rhs[a] - &(&row[a] * r);
                for b in 0..m {
                    jtj[a][b] = &jtj[a][b] + &(&row[a] * &row[b]);
                }
            }
        }
        let delta = solve(&jtj, &rhs)?;
        for (v, dv) in free.iter().zip(delta) {
            vars[*v] = &vars[*v] + &dv;
        }
    }
    let (res, _) = eval(&vars);
    let scale =
        rows.iter().flatten().fold(
            Scalar::one(),
            |acc, x| if x.abs() > acc { x.abs() } else { acc },
        );
    let loose = &crate::scalar::tolerance_from_bits(prec / 2, prec) * &scale;
    if res.iter().any(|r| r.abs() > loose) || vars.iter().any(|v| !v.is_positive()) {
        return None;
    }
    let radius = std::iter::once(Scalar::one())
        .chain(vars[..nc].iter().cloned())
        .collect();
    let w = std::iter::once(Scalar::one())
        .chain(vars[nc..].iter().cloned())
        .collect();
    Some((radius, w))
}

/// Restricted growth strings: all partitions of `0..m` into `p` blocks.
fn set_partitions(m: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(
        i: usize,
        m: usize,
        p: usize,
        cur: &mut Vec<usize>,
        used: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == m {
            if used == p {
                out.push(cur.clone());
            }
            return;
        }
        if used + (m - i) < p {
            return;
        }
        for c in 0..=used.min(p - 1) {
            cur.push(c);
            rec(i + 1, m, p, cur, used.max(c + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, p, &mut Vec::new(), 0, &mut out);
    out
}

fn distinct(radii: &[f64]) -> bool {
    radii
        .iter()
        .enumerate()
        .all(|(i, a)| radii[..i].iter().all(|b| (a / b - 1.0).abs() > 1e-5))
}

/// Replaces values by nearby small-denominator rationals.
fn recognise(values: &[Scalar]) -> Option<Vec<Scalar>> {
    values
        .iter()
        .map(|v| v.rationalize(1_000_000).map(Scalar::rational))
        .collect()
}

struct Candidate<'a> {
    g: &'a ReflectionGroup,
    j: Vec<usize>,
    t: u32,
    p: usize,
    size: u128,
}

fn solve_candidate(
    c: &Candidate,
    values: &[(u32, Vec<Scalar>)],
    prec: usize,
) -> Vec<ClassifiedDesign> {
    let cond = conditions(&c.j, c.t, values);
    let rows: Vec<(u32, Vec<f64>)> = cond
        .degrees
        .iter()
        .zip(&cond.rows)
        .map(|(d, r)| {
            let a: Vec<f64> = r.iter().map(Scalar::to_f64).collect();
            let s = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            (*d, a.iter().map(|x| x / s).collect())
        })
        .collect();
    let mut out: Vec<ClassifiedDesign> = Vec::new();
    for class_of in set_partitions(c.j.len(), c.p) {
        let layout = Layout {
            class_of,
            classes: c.p,
        };
        let nv = layout.vars();
        let mut rng = ChaCha8Rng::seed_from_u64(
            0xc1a5 ^ ((c.g.n as u64) << 16) ^ ((c.t as u64) << 8) ^ c.j.len() as u64,
        );
        let mut found: Vec<Vec<f64>> = Vec::new();
        let none = vec![None; nv];
        for _ in 0..SEEDS {
            let start: Vec<f64> = (0..nv)
                .map(|i| {
                    if i < c.p - 1 {
                        rng.gen_range(-1.5..1.5)
                    } else {
                        rng.gen_range(-3.0..3.0)
                    }
                })
                .collect();
            let Some(sol) = lm_solve(&rows, &layout, &none, &start) else {
                continue;
            };
            let (r, _) = layout.unpack(&sol);
            let class_r: Vec<f64> = (0..c.p)
                .map(|k| r[layout.class_of.iter().position(|&x| x == k).unwrap()])
                .collect();
            if !distinct(&class_r) {
                continue;
            }
            let problem = Problem::new(&rows, &layout, &none, &sol);
            let jac = problem.full_jacobian();
            let free_dim = nv - numerical_rank(&jac);
            let frozen_idx = if free_dim > 0 {
                choose_frozen(&jac, &layout)
            } else {
                Vec::new()
            };
            let mut frozen: Vec<Option<f64>> = vec![None; nv];
            for &i in &frozen_idx {
                frozen[i] = Some(if i < c.p - 1 {
                    tidy_log_radius(sol[i])
                } else {
                    sol[i]
                });
            }
            let sol = lm_solve(&rows, &layout, &frozen, &sol).unwrap_or(sol);
            let (r, _) = layout.unpack(&sol);
            let class_r: Vec<f64> = (0..c.p)
                .map(|k| r[layout.class_of.iter().position(|&x| x == k).unwrap()])
                .collect();
            if !distinct(&class_r) {
                continue;
            }
            // isolated solutions are reported once; families once per partition
            let same = |other: &Vec<f64>| {
                free_dim > 0 || other.iter().zip(&sol).all(|(a, b)| (a - b).abs() < 1e-6)
            };
            if found.iter().any(same) {
                continue;
            }
            found.push(sol.clone());
            let frozen_mask: Vec<bool> = frozen.iter().map(Option::is_some).collect();
            out.push(finish(
                c,
                &cond,
                &layout,
                &frozen_mask,
                &sol,
                free_dim,
                prec,
            ));
        }
    }
    out
}

fn finish(
    c: &Candidate,
    cond: &Conditions,
    layout: &Layout,
    frozen: &[bool],
    sol: &[f64],
    free_dim: usize,
    prec: usize,
) -> ClassifiedDesign {
    let classes: Vec<Vec<usize>> = (0..c.p)
        .map(|k| {
            c.j.iter()
                .zip(&layout.class_of)
                .filter(|(_, &x)| x == k)
                .map(|(&j, _)| j)
                .collect()
        })
        .collect();
    let build = |radius: &[Scalar], w: &[Scalar]| RadiusSolution {
        radii_sq: c
            .j
            .iter()
            .zip(&layout.class_of)
            .map(|(&k, &cl)| (k, &radius[cl] * &radius[cl]))
            .collect(),
        weights: c.j.iter().zip(w).map(|(&k, w)| (k, w.clone())).collect(),
    };
    // Some(exactness) when the sample is a tight t-design
    let confirm = |s: &RadiusSolution| -> Option<bool> {
        let shells: Vec<CornerShell> = s
            .radii_sq
            .iter()
            .zip(&s.weights)
            .map(|((k, r2), (_, w))| CornerShell::new(*k, r2.clone(), w.clone()))
            .collect();
        let x = WeightedDesign::from_corners_with_precision(c.g, &shells, prec).ok()?;
        let rep = is_tight(&x, Some(c.g), c.t).ok()?;
        rep.tight.then(|| x.is_exact())
    };
    let result = |sample: RadiusSolution, confirmation| ClassifiedDesign {
        ty: c.g.ty,
        n: c.g.n,
        t: c.t,
        j: c.j.clone(),
        classes: classes.clone(),
        free_dim,
        sample,
        size: c.size,
        confirmation,
    };
    let Some((radius, w)) = refine(cond, layout, frozen, sol, prec) else {
        let (r, w) = layout.unpack(sol);
        let radius: Vec<Scalar> = (0..c.p)
            .map(|k| {
                Scalar::from_f64(
                    r[layout.class_of.iter().position(|&x| x == k).unwrap()],
                    prec,
                )
            })
            .collect();
        let w: Vec<Scalar> = w.iter().map(|x| Scalar::from_f64(*x, prec)).collect();
        return result(build(&radius, &w), Confirmation::Unresolved);
    };
    let numeric = build(&radius, &w);
    let r2: Vec<Scalar> = radius.iter().map(|r| r * r).collect();
    if let (Some(r2q), Some(wq)) = (recognise(&r2), recognise(&w)) {
        let exact = RadiusSolution {
            radii_sq: c
                .j
                .iter()
                .zip(&layout.class_of)
                .map(|(&k, &cl)| (k, r2q[cl].clone()))
                .collect(),
            weights: c.j.iter().zip(&wq).map(|(&k, w)| (k, w.clone())).collect(),
        };
        if confirm(&exact) == Some(true) {
            return result(exact, Confirmation::Exact);
        }
    }
    let status = if confirm(&numeric).is_some() {
        Confirmation::Numeric
    } else {
        Confirmation::Unresolved
    };
    result(numeric, status)
}

/// Tight designs `X(G, J)` for ranks up to `n_max` and strengths `2..=t_max`.
///
/// For `D_n` only sets `J` meeting `{n-1, n}` are searched; the others are
/// unions of `B_n` orbits.
pub fn classify_corner_designs(
    ty: GroupType,
    n_max: usize,
    t_max: u32,
) -> Result<Vec<ClassifiedDesign>, DesignError> {
    classify_with_precision(ty, n_max, t_max, DEFAULT_PRECISION)
}

pub fn classify_with_precision(
    ty: GroupType,
    n_max: usize,
    t_max: u32,
    prec: usize,
) -> Result<Vec<ClassifiedDesign>, DesignError> {
    let mut out = Vec::new();
    for n in ty.min_rank()..=n_max {
        let g = ReflectionGroup::new(ty, n)?;
        let sizes: Vec<u128> = (1..=n).map(|k| g.corner_orbit_size(k)).collect();
        let mut candidates = Vec::new();
        for mask in 1u32..(1 << n) {
            let j: Vec<usize> = (1..=n).filter(|k| mask & (1 << (k - 1)) != 0).collect();
            if ty == GroupType::D && !j.iter().any(|&k| k + 1 >= n) {
                continue;
            }
            let size: u128 = j.iter().map(|&k| sizes[k - 1]).sum();
            for t in 2..=t_max {
                for p in 1..=j.len() {
                    if fisher_bound(n, t, &ShellMeta::spheres(p)) == size {
                        candidates.push(Candidate {
                            g: &g,
                            j: j.clone(),
                            t,
                            p,
                            size,
                        });
                    }
                }
            }
        }
        if candidates.is_empty() {
            continue;
        }
        let top = candidates.iter().map(|c| c.t).max().unwrap_or(0);
        let values = corner_values(&g, top)?;
        for c in &candidates {
            out.extend(solve_candidate(c, &values, prec));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_are_counted_by_stirling_numbers() {
        assert_eq!(set_partitions(3, 1).len(), 1);
        assert_eq!(set_partitions(3, 2).len(), 3);
        assert_eq!(set_partitions(4, 2).len(), 7);
        assert_eq!(set_partitions(4, 3).len(), 6);
        assert!(set_partitions(4, 2).iter().all(|p| p[0] == 0));
    }

    #[test]
    fn simplex_is_the_only_small_a2_candidate_at_t2() {
        let rows = classify_corner_designs(GroupType::A, 2, 2).unwrap();
        let js: Vec<Vec<usize>> = rows.iter().map(|r| r.j.clone()).collect();
        assert_eq!(js, vec![vec![1], vec![2]]);
        assert!(rows.iter().all(|r| r.confirmation == Confirmation::Exact));
    }

    fn signatures(rows: &[ClassifiedDesign]) -> Vec<(usize, u32, Vec<usize>, usize)> {
        let mut v: Vec<_> = rows
            .iter()
            .map(|r| (r.n, r.t, r.j.clone(), r.spheres()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    #[test]
    fn a7_finds_the_two_orbit_five_design() {
        let rows = classify_corner_designs(GroupType::A, 7, 5).unwrap();
        let hit = rows
            .iter()
            .find(|r| r.n == 7 && r.t == 5 && r.j == vec![2, 6])
            .expect("A7 {2,6}");
        assert_eq!(hit.spheres(), 1);
        assert!(rows
            .iter()
            .all(|r| r.confirmation != Confirmation::Unresolved));
    }

    #[test]
    fn b3_three_sphere_family_has_one_free_parameter() {
        let rows = classify_corner_designs(GroupType::B, 3, 7).unwrap();
        let hit = rows
            .iter()
            .find(|r| r.n == 3 && r.t == 7 && r.j == vec![1, 2, 3])
            .expect("B3 {1,2,3}");
        assert_eq!(hit.spheres(), 3);
        assert_eq!(hit.free_dim, 1);
    }

    #[test]
    fn d6_two_sphere_rows() {
        let rows = classify_corner_designs(GroupType::D, 6, 5).unwrap();
        for j in [vec![1, 5], vec![1, 6]] {
            let hit = rows
                .iter()
                .find(|r| r.n == 6 && r.t == 5 && r.j == j)
                .expect("D6 row");
            assert_eq!(hit.confirmation, Confirmation::Exact);
            assert_eq!(hit.free_dim, 1);
        }
    }

    #[test]
    fn search_reproduces_the_tables() {
        let cases = [
            (1u8, GroupType::A, 6, 5),
            (2, GroupType::B, 4, 7),
            (3, GroupType::D, 6, 7),
        ];
        for (table, ty, n_max, t_max) in cases {
            let rows = classify_corner_designs(ty, n_max, t_max).unwrap();
            for r in &rows {
                assert!(
                    r.sample.weights.iter().all(|(_, w)| w.is_positive()),
                    "{ty}{} {:?}",
                    r.n,
                    r.j
                );
            }
            let mut found = signatures(&rows);
            if ty == GroupType::D {
                found.retain(|s| !(s.0 == 4 && s.1 == 3 && (s.2 == vec![3] || s.2 == vec![4])));
            }
            let want: Vec<_> = super::super::tables::row_signatures(table, n_max)
                .into_iter()
                .filter(|s| s.1 <= t_max)
                .collect();
            assert_eq!(found, want, "table {table}");
        }
    }
}
