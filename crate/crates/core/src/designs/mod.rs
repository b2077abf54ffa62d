//! Weighted point sets on concentric spheres: strength certification by
//! invariant harmonics, by the full harmonic space and by direct sphere
//! integration, together with the Fisher-type cardinality bounds.

mod classify;
mod obstruction;
pub mod tables;

pub use classify::{
    classify_corner_designs, classify_with_precision, ClassifiedDesign, Confirmation,
    RadiusSolution,
};
pub use obstruction::{nonexistence_obstruction, ObstructionTable};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{corner_vector, orbit, GroupError, Orbit, ReflectionGroup};
use crate::invariants::{cached_invariant_basis, InvariantError};
use crate::linalg::{norm_sq, ZeroTest};
use crate::poly::{binomial, evaluate, harm_basis, monomials, Monomial, MultiPoly};
use crate::scalar::{is_negligible, tolerance_from_bits, Scalar, DEFAULT_PRECISION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("design has no points")]
    Empty,
    #[error("point has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("weights must be strictly positive")]
    NonPositiveWeight,
    #[error("radii must be strictly positive")]
    NonPositiveRadius,
    #[error("{points} points but {weights} weights")]
    WeightCount { points: usize, weights: usize },
    #[error("shell {0} is not a single orbit of the group")]
    NotAnOrbit(usize),
    #[error("weight is not constant on shell {0}")]
    NonConstantWeight(usize),
    #[error("orbit sum for {ty}{n} at k = {k} has the wrong sign")]
    ObstructionSign {
        ty: crate::groups::GroupType,
        n: usize,
        k: usize,
    },
}

/// Points of equal norm. Weights are per point; invariant designs keep
/// them constant.
#[derive(Debug, Clone, Serialize)]
pub struct Shell {
    pub radius_sq: Scalar,
    pub points: Vec<Vec<Scalar>>,
    pub weights: Vec<Scalar>,
    /// Corner index `k` when the shell is the orbit `r_k v_k^G`.
    pub corner: Option<usize>,
}

impl Shell {
    pub fn total_weight(&self) -> Scalar {
        self.weights.iter().fold(Scalar::zero(), |acc, w| &acc + w)
    }

    /// The common weight, when there is one.
    pub fn constant_weight(&self) -> Option<&Scalar> {
        let first = self.weights.first()?;
        let zt = ZeroTest::for_entries(self.weights.iter());
        self.weights
            .iter()
            .all(|w| zt.is_zero(&(w - first)))
            .then_some(first)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightedDesign {
    pub n: usize,
    pub shells: Vec<Shell>,
    /// Weight at the origin; `None` when the origin is not a point.
    pub origin_weight: Option<Scalar>,
    /// Every stored radius equals the intended one times `sqrt(radius_scale_sq)`.
    pub radius_scale_sq: Scalar,
}

/// One shell `r_k v_k^G` of a corner design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerShell {
    pub k: usize,
    pub radius_sq: Scalar,
    pub weight: Scalar,
}

impl CornerShell {
    pub fn new(k: usize, radius_sq: Scalar, weight: Scalar) -> Self {
        CornerShell {
            k,
            radius_sq,
            weight,
        }
    }
}

/// Sphere count data for the Fisher-type bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellMeta {
    /// Number of spheres in the support, the origin included.
    pub p: usize,
    /// Whether the origin belongs to the support.
    pub eps_s: bool,
    pub origin_in_x: bool,
}

impl ShellMeta {
    pub fn spheres(p: usize) -> Self {
        ShellMeta {
            p,
            eps_s: false,
            origin_in_x: false,
        }
    }

    /// `p' = p - eps_S`.
    pub fn p_prime(&self) -> usize {
        self.p - usize::from(self.eps_s)
    }
}

impl WeightedDesign {
    /// Groups explicit points into shells by norm.
    pub fn from_points(
        points: Vec<Vec<Scalar>>,
        weights: Vec<Scalar>,
    ) -> Result<Self, DesignError> {
        if points.is_empty() {
            return Err(DesignError::Empty);
        }
        if points.len() != weights.len() {
            return Err(DesignError::WeightCount {
                points: points.len(),
                weights: weights.len(),
            });
        }
        let n = points[0].len();
        let zt = ZeroTest::for_entries(points.iter().flatten());
        let mut shells: Vec<Shell> = Vec::new();
        let mut origin_weight: Option<Scalar> = None;
        for (p, w) in points.into_iter().zip(weights) {
            if p.len() != n {
                return Err(DesignError::DimensionMismatch {
                    expected: n,
                    got: p.len(),
                });
            }
            if !w.is_positive() {
                return Err(DesignError::NonPositiveWeight);
            }
            let r2 = norm_sq(&p);
            if zt.is_zero(&r2) {
                origin_weight = Some(origin_weight.map_or(w.clone(), |o| &o + &w));
                continue;
            }
            match shells
                .iter_mut()
                .find(|s| zt.is_zero(&(&s.radius_sq - &r2)))
            {
                Some(s) => {
                    s.points.push(p);
                    s.weights.push(w);
                }
                None => shells.push(Shell {
                    radius_sq: r2,
                    points: vec![p],
                    weights: vec![w],
                    corner: None,
                }),
            }
        }
        Ok(WeightedDesign {
            n,
            shells,
            origin_weight,
            radius_scale_sq: Scalar::one(),
        })
    }

    /// Union of the orbits of `reps`, one shell per orbit with its weight.
    pub fn from_orbits(
        g: &ReflectionGroup,
        reps: &[(Vec<Scalar>, Scalar)],
    ) -> Result<Self, DesignError> {
        if reps.is_empty() {
            return Err(DesignError::Empty);
        }
        let mut shells = Vec::with_capacity(reps.len());
        for (x, w) in reps {
            if !w.is_positive() {
                return Err(DesignError::NonPositiveWeight);
            }
            let o = orbit(g, x)?;
            shells.push(shell_from_orbit(o, w, None));
        }
        Ok(WeightedDesign {
            n: g.n,
            shells,
            origin_weight: None,
            radius_scale_sq: Scalar::one(),
        })
    }

    /// `X(G, J)` with the given radii and weights at default precision.
    pub fn from_corners(g: &ReflectionGroup, layout: &[CornerShell]) -> Result<Self, DesignError> {
        Self::from_corners_with_precision(g, layout, DEFAULT_PRECISION)
    }

    /// `X(G, J)`. All radii may be rescaled by one common factor so that the
    /// coordinates stay exact; strength and tightness do not see the scale.
    pub fn from_corners_with_precision(
        g: &ReflectionGroup,
        layout: &[CornerShell],
        prec: usize,
    ) -> Result<Self, DesignError> {
        if layout.is_empty() {
            return Err(DesignError::Empty);
        }
        let mut corners = Vec::with_capacity(layout.len());
        for s in layout {
            if !s.weight.is_positive() {
                return Err(DesignError::NonPositiveWeight);
            }
            if !s.radius_sq.is_positive() {
                return Err(DesignError::NonPositiveRadius);
            }
            corners.push(corner_vector(g.ty, g.n, s.k)?);
        }
        // sigma_k = r_k^2 / |scaled_k|^2, so that r_k v_k = sqrt(sigma_k) scaled_k
        let sigma: Vec<Scalar> = layout
            .iter()
            .zip(&corners)
            .map(|(s, c)| &s.radius_sq / &c.norm_sq)
            .collect();
        let exact: Option<Vec<Vec<Scalar>>> = layout
            .iter()
            .zip(&corners)
            .zip(&sigma)
            .map(|((s, c), sg)| {
                if !s.radius_sq.is_exact() {
                    return None;
                }
                let ratio = sg / &sigma[0];
                let f = ratio.sqrt_in_field().or_else(|| ratio.sqrt_exact())?;
                let p: Vec<Scalar> = c
                    .scaled
                    .iter()
                    .map(|x| x.try_mul(&f).ok())
                    .collect::<Option<_>>()?;
                Some(p)
            })
            .collect();
        let exact = exact.filter(|pts| Scalar::common_extension(pts.iter().flatten()).is_ok());
        let (reps, scale) = match exact {
            Some(pts) => (pts, sigma[0].clone()),
            None => {
                let pts = corners
                    .iter()
                    .zip(&sigma)
                    .map(|(c, sg)| {
                        let f = sg.sqrt(prec).expect("positive").into_float(prec);
                        c.scaled
                            .iter()
                            .map(|x| &x.clone().into_float(prec) * &f)
                            .collect()
                    })
                    .collect();
                (pts, Scalar::one())
            }
        };
        let mut shells = Vec::with_capacity(layout.len());
        for ((x, s), c) in reps.iter().zip(layout).zip(&corners) {
            let o = orbit(g, x)?;
            debug_assert_eq!(o.size() as u128, g.corner_orbit_size(c.k));
            shells.push(shell_from_orbit(o, &s.weight, Some(s.k)));
        }
        Ok(WeightedDesign {
            n: g.n,
            shells,
            origin_weight: None,
            radius_scale_sq: scale,
        })
    }

    pub fn with_origin(mut self, w: Scalar) -> Result<Self, DesignError> {
        if !w.is_positive() {
            return Err(DesignError::NonPositiveWeight);
        }
        self.origin_weight = Some(w);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.shells.iter().map(|s| s.points.len()).sum::<usize>()
            + usize::from(self.origin_weight.is_some())
    }

    pub fn points(&self) -> impl Iterator<Item = (&Vec<Scalar>, &Scalar)> {
        self.shells
            .iter()
            .flat_map(|s| s.points.iter().zip(&s.weights))
    }

    pub fn total_weight(&self) -> Scalar {
        let shells = self
            .shells
            .iter()
            .fold(Scalar::zero(), |acc, s| &acc + &s.total_weight());
        match &self.origin_weight {
            Some(w) => &shells + w,
            None => shells,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.points()
            .all(|(p, w)| w.is_exact() && p.iter().all(Scalar::is_exact))
    }

    /// Largest float precision among the entries, if any.
    pub fn precision(&self) -> Option<usize> {
        self.points()
            .flat_map(|(p, w)| p.iter().chain(std::iter::once(w)))
            .filter_map(Scalar::precision)
            .max()
    }

    /// Distinct nonzero radii as `(radius_sq, total weight)`.
    pub fn spheres(&self) -> Vec<(Scalar, Scalar)> {
        let zt = ZeroTest::for_entries(self.shells.iter().map(|s| &s.radius_sq));
        let mut out: Vec<(Scalar, Scalar)> = Vec::new();
        for s in &self.shells {
            let w = s.total_weight();
            match out
                .iter_mut()
                .find(|(r, _)| zt.is_zero(&(r - &s.radius_sq)))
            {
                Some((_, acc)) => *acc = &*acc + &w,
                None => out.push((s.radius_sq.clone(), w)),
            }
        }
        out
    }

    pub fn shell_meta(&self) -> ShellMeta {
        let origin = self.origin_weight.is_some();
        ShellMeta {
            p: self.spheres().len() + usize::from(origin),
            eps_s: origin,
            origin_in_x: origin,
        }
    }

    /// Multiplies every point by `c`, keeping the weights.
    pub fn scaled(&self, c: &Scalar) -> WeightedDesign {
        let c2 = c * c;
        let shells = self
            .shells
            .iter()
            .map(|s| Shell {
                radius_sq: &s.radius_sq * &c2,
                points: s
                    .points
                    .iter()
                    .map(|p| p.iter().map(|x| x * c).collect())
                    .collect(),
                weights: s.weights.clone(),
                corner: s.corner,
            })
            .collect();
        WeightedDesign {
            shells,
            ..self.clone()
        }
    }
}

fn shell_from_orbit(o: Orbit, w: &Scalar, corner: Option<usize>) -> Shell {
    let weights = vec![w.clone(); o.size()];
    Shell {
        radius_sq: o.norm_sq,
        points: o.points,
        weights,
        corner,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrengthMethod {
    Invariant,
    FullHarmonic,
    DirectIntegration,
}

impl fmt::Display for StrengthMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrengthMethod::Invariant => "invariant",
            StrengthMethod::FullHarmonic => "full_harmonic",
            StrengthMethod::DirectIntegration => "direct_integration",
        })
    }
}

/// Largest-magnitude residual of the `(l, j)` conditions. For direct
/// integration `l` is the monomial degree and `j = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct Residual {
    pub l: u32,
    pub j: u32,
    pub value: Scalar,
    pub vanishes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrengthReport {
    pub t_certified: u32,
    pub method: StrengthMethod,
    pub residuals: Vec<Residual>,
}

/// Running maximum of residuals for one `(l, j)`.
struct Tally {
    tol: Option<Scalar>,
    worst: Scalar,
    ok: bool,
}

impl Tally {
    fn new(prec: Option<usize>) -> Self {
        Tally {
            tol: prec.map(|p| tolerance_from_bits(p / 2, p)),
            worst: Scalar::zero(),
            ok: true,
        }
    }

    fn push(&mut self, value: Scalar, scale: &Scalar) {
        let zero = match &self.tol {
            None => value.is_zero(),
            Some(t) => is_negligible(&value, scale, t),
        };
        self.ok &= zero;
        if value.abs() > self.worst.abs() {
            self.worst = value;
        }
    }

    fn finish(self, l: u32, j: u32) -> Residual {
        Residual {
            l,
            j,
            value: self.worst,
            vanishes: self.ok,
        }
    }
}

/// Walks degrees `d = 1..=t_max`, collecting the residuals of every `(l, j)`
/// with `2j + l = d`, and stops after the first degree that fails.
fn certify(
    t_max: u32,
    method: StrengthMethod,
    mut degree: impl FnMut(u32) -> Result<Vec<Residual>, DesignError>,
) -> Result<StrengthReport, DesignError> {
    let mut residuals = Vec::new();
    for d in 1..=t_max {
        let rs = degree(d)?;
        let failed = rs.iter().any(|r| !r.vanishes);
        residuals.extend(rs);
        if failed {
            return Ok(StrengthReport {
                t_certified: d - 1,
                method,
                residuals,
            });
        }
    }
    Ok(StrengthReport {
        t_certified: t_max,
        method,
        residuals,
    })
}

fn split(d: u32) -> impl Iterator<Item = (u32, u32)> {
    (1..=d)
        .rev()
        .filter(move |l| (d - l).is_multiple_of(2))
        .map(move |l| (l, (d - l) / 2))
}

/// Strength through `G`-invariant harmonics: one representative per shell.
pub fn strength_invariant(
    x: &WeightedDesign,
    g: &ReflectionGroup,
    t_max: u32,
) -> Result<StrengthReport, DesignError> {
    let mut reps = Vec::with_capacity(x.shells.len());
    for (i, s) in x.shells.iter().enumerate() {
        let w = s
            .constant_weight()
            .ok_or(DesignError::NonConstantWeight(i))?;
        let rep = s.points.first().ok_or(DesignError::Empty)?;
        let o = Orbit {
            representative: rep.clone(),
            points: s.points.clone(),
            norm_sq: s.radius_sq.clone(),
        };
        if !o.is_closed(g) || orbit(g, rep)?.size() != s.points.len() {
            return Err(DesignError::NotAnOrbit(i));
        }
        let wn = w * &Scalar::from_int(s.points.len() as i64);
        reps.push((rep, wn, &s.radius_sq));
    }
    let prec = x.precision();
    certify(t_max, StrengthMethod::Invariant, |d| {
        let mut out = Vec::new();
        for (l, j) in split(d) {
            let basis = cached_invariant_basis(g, l)?;
            let mut tally = Tally::new(prec);
            for phi in basis.iter() {
                let mut acc = Scalar::zero();
                let mut scale = Scalar::zero();
                for (rep, wn, r2) in &reps {
                    let v = evaluate(phi, rep).expect("compatible scalars");
                    let term = &(wn * &r2.pow(j)) * &v;
                    scale = &scale + &term.abs();
                    acc = &acc + &term;
                }
                tally.push(acc, &scale);
            }
            out.push(tally.finish(l, j));
        }
        Ok(out)
    })
}

type HarmCache = Mutex<HashMap<(usize, u32), Arc<Vec<MultiPoly>>>>;

fn cached_harm_basis(n: usize, l: u32) -> Arc<Vec<MultiPoly>> {
    static CACHE: OnceLock<HarmCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().expect("harm cache").get(&(n, l)) {
        return b.clone();
    }
    let b = Arc::new(harm_basis(n, l));
    cache.lock().expect("harm cache").insert((n, l), b.clone());
    b
}

/// Powers `x_i^e` for `e <= max_deg`, per point.
struct PowerTable {
    pows: Vec<Vec<Vec<Scalar>>>,
}

impl PowerTable {
    fn new<'a>(points: impl Iterator<Item = &'a Vec<Scalar>>, max_deg: u32) -> Self {
        let pows = points
            .map(|p| {
                p.iter()
                    .map(|x| {
                        let mut row = vec![Scalar::one()];
                        for e in 1..=max_deg as usize {
                            let next = &row[e - 1] * x;
                            row.push(next);
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        PowerTable { pows }
    }

    fn monomial(&self, point: usize, m: &Monomial) -> Scalar {
        let mut acc = Scalar::one();
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                let v = &self.pows[point][i][e as usize];
                if v.is_zero() {
                    return Scalar::zero();
                }
                acc = &acc * v;
            }
        }
        acc
    }
}

/// Weighted monomial moments of degree `l`: value and absolute mass.
fn moments(
    table: &PowerTable,
    factors: &[Scalar],
    n: usize,
    l: u32,
) -> HashMap<Monomial, (Scalar, Scalar)> {
    monomials(n, l)
        .into_iter()
        .map(|m| {
            let mut acc = Scalar::zero();
            let mut mass = Scalar::zero();
            for (i, f) in factors.iter().enumerate() {
                let v = table.monomial(i, &m);
                if !v.is_zero() {
                    let t = f * &v;
                    mass = &mass + &t.abs();
                    acc = &acc + &t;
                }
            }
            (m, (acc, mass))
        })
        .collect()
}

/// Strength through the full harmonic space `Harm_l(R^n)`.
pub fn strength_full(x: &WeightedDesign, t_max: u32) -> Result<StrengthReport, DesignError> {
    let pts: Vec<(&Vec<Scalar>, &Scalar)> = x.points().collect();
    let table = PowerTable::new(pts.iter().map(|(p, _)| *p), t_max);
    let norms: Vec<Scalar> = pts.iter().map(|(p, _)| norm_sq(p)).collect();
    let prec = x.precision();
    certify(t_max, StrengthMethod::FullHarmonic, |d| {
        let mut out = Vec::new();
        for (l, j) in split(d) {
            let factors: Vec<Scalar> = pts
                .iter()
                .zip(&norms)
                .map(|((_, w), r2)| *w * &r2.pow(j))
                .collect();
            let mom = moments(&table, &factors, x.n, l);
            let mut tally = Tally::new(prec);
            for f in cached_harm_basis(x.n, l).iter() {
                let mut acc = Scalar::zero();
                let mut scale = Scalar::zero();
                for (m, c) in f.terms() {
                    let (v, mass) = &mom[m];
                    if !v.is_zero() {
                        acc = &acc + &(c * v);
                    }
                    scale = &scale + &(&c.abs() * mass);
                }
                tally.push(acc, &scale);
            }
            out.push(tally.finish(l, j));
        }
        Ok(out)
    })
}

/// `(a-1)!!` for even `a`, as an integer scalar.
fn double_factorial_odd(a: u32) -> Scalar {
    let mut acc = Scalar::one();
    let mut k = 1i64;
    while k < a as i64 {
        acc = &acc * &Scalar::from_int(k);
        k += 2;
    }
    acc
}

/// Average of `x^a` over the unit sphere `S^{n-1}`:
/// `prod (a_i - 1)!! / (n (n+2) ... (n + |a| - 2))`, zero if some `a_i` is odd.
pub fn sphere_moment(n: usize, a: &[u32]) -> Scalar {
    if a.iter().any(|e| e % 2 == 1) {
        return Scalar::zero();
    }
    let num = a
        .iter()
        .fold(Scalar::one(), |acc, &e| &acc * &double_factorial_odd(e));
    let half: u32 = a.iter().sum::<u32>() / 2;
    let den = (0..half).fold(Scalar::one(), |acc, i| {
        &acc * &Scalar::from_int(n as i64 + 2 * i as i64)
    });
    num / den
}

/// Strength by comparing both sides of the defining identity on monomials.
pub fn strength_direct(x: &WeightedDesign, t_max: u32) -> Result<StrengthReport, DesignError> {
    let pts: Vec<(&Vec<Scalar>, &Scalar)> = x.points().collect();
    let table = PowerTable::new(pts.iter().map(|(p, _)| *p), t_max);
    let factors: Vec<Scalar> = pts.iter().map(|(_, w)| (*w).clone()).collect();
    let spheres = x.spheres();
    let prec = x.precision();
    certify(t_max, StrengthMethod::DirectIntegration, |d| {
        let mom = moments(&table, &factors, x.n, d);
        let mut tally = Tally::new(prec);
        for m in monomials(x.n, d) {
            let (rhs, mass) = &mom[&m];
            let avg = sphere_moment(x.n, m.exps());
            let mut lhs = Scalar::zero();
            if !avg.is_zero() {
                for (r2, w) in &spheres {
                    lhs = &lhs + &(&(w * &r2.pow(d / 2)) * &avg);
                }
            }
            let scale = mass + &lhs.abs();
            tally.push(&lhs - rhs, &scale);
        }
        Ok(vec![tally.finish(d, 0)])
    })
}

/// `dim P_l(S)` for a support of `p` spheres.
pub fn dim_p(n: usize, l: u32, meta: &ShellMeta) -> u128 {
    let pp = meta.p_prime() as u32;
    let (n64, l64) = (n as u64, l as u64);
    if l < 2 * pp {
        return binomial(n64 + l64, l64);
    }
    let tail: u128 = (0..2 * pp as u64)
        .map(|i| binomial(n64 + l64 - i - 1, n64 - 1))
        .sum();
    u128::from(meta.eps_s) + tail
}

/// `dim P*_l(S)`, the span of `Hom_l, Hom_{l-2}, ...` restricted to `S`.
pub fn dim_p_star(n: usize, l: u32, meta: &ShellMeta) -> u128 {
    let pp = meta.p_prime() as u64;
    let (n64, l64) = (n as u64, l as u64);
    let term = |i: u64| binomial(n64 + l64 - 2 * i - 1, n64 - 1);
    if l64 < 2 * pp {
        return (0..=l64 / 2).map(term).sum();
    }
    let tail: u128 = (0..pp).map(term).sum();
    tail + u128::from(meta.eps_s && l.is_multiple_of(2))
}

/// Fisher-type lower bound on `|X|` for a Euclidean `t`-design.
pub fn fisher_bound(n: usize, t: u32, meta: &ShellMeta) -> u128 {
    assert!(
        t >= 1 && meta.p >= 1,
        "fisher_bound needs t >= 1 and p >= 1"
    );
    if t.is_multiple_of(2) {
        return dim_p(n, t / 2, meta);
    }
    let e = t.div_ceil(2);
    let b = 2 * dim_p_star(n, e - 1, meta);
    if e % 2 == 1 && meta.origin_in_x {
        b - 1
    } else {
        b
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TightnessReport {
    pub t: u32,
    pub size: u128,
    pub bound: u128,
    pub slack: i128,
    pub tight: bool,
    /// Strength certified along the way, when a group was supplied.
    pub t_certified: Option<u32>,
}

/// Compares `|X|` with the Fisher-type bound for strength `t`. With a group,
/// the strength is also certified through invariant harmonics.
pub fn is_tight(
    x: &WeightedDesign,
    g: Option<&ReflectionGroup>,
    t: u32,
) -> Result<TightnessReport, DesignError> {
    let size = x.size() as u128;
    let bound = fisher_bound(x.n, t, &x.shell_meta());
    let t_certified = match g {
        Some(g) => Some(strength_invariant(x, g, t)?.t_certified),
        None => None,
    };
    let slack = size as i128 - bound as i128;
    let tight = slack == 0 && t_certified.is_none_or(|c| c >= t);
    Ok(TightnessReport {
        t,
        size,
        bound,
        slack,
        tight,
        t_certified,
    })
}
