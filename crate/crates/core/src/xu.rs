//! Two-dimensional cubature for radially symmetric integrals built from
//! regular polygons on concentric circles, with the moment conditions that
//! characterise them and two independent degree checks.
//!
//! Family `Odd` has degree `2n-1`, family `Even` degree `2n`. Every circle of
//! a formula carries `l` equally spaced points, so the point set is invariant
//! under the dihedral group of order `2l` and each point has weight
//! `2 pi lambda_i / l`.

use std::fmt;

use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::{storage::Owned, DMatrix, DVector, Dyn};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, Matrix};
use crate::poly::{self, binomial, monomials, MultiPoly};
use crate::scalar::{is_negligible, tolerance_from_bits, Scalar, DEFAULT_PRECISION};

#[derive(Debug, thiserror::Error)]
pub enum XuError {
    #[error("malformed formula: {0}")]
    Malformed(String),
    #[error("moment mu({0}) is not available for this weight")]
    MomentUnavailable(usize),
    #[error("weight moments must be positive")]
    NonPositiveMoment,
    #[error("no positive solution for family {family} with n = {n} (best residual {best:.3e})")]
    NoPositiveSolution { family: Family, n: usize, best: f64 },
    #[error("brute-force and invariant checks disagree at degree {0}")]
    Disagreement(u32),
    #[error("polynomial is not invariant under the dihedral group of order {0}")]
    NotInvariant(usize),
    #[error("expected a polynomial in two variables")]
    NotBivariate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Degree `2n-1`; `n = 2m` or `2m+1` (with a center point).
    Odd,
    /// Degree `2n`; `n = 2m-1` or `2m`.
    Even,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Odd => "odd",
            Family::Even => "even",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = XuError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "odd" | "i" => Ok(Family::Odd),
            "even" | "ii" => Ok(Family::Even),
            _ => Err(XuError::Malformed(format!("unknown family {s}"))),
        }
    }
}

impl Family {
    pub fn m(self, n: usize) -> usize {
        match self {
            Family::Odd => n / 2,
            Family::Even => n.div_ceil(2),
        }
    }

    pub fn circles(self, n: usize) -> usize {
        match self {
            Family::Odd => n / 2,
            Family::Even => (n + 2) / 2,
        }
    }

    pub fn has_center(self, n: usize) -> bool {
        self == Family::Odd && n % 2 == 1
    }

    /// Points per circle.
    pub fn angles(self, n: usize) -> usize {
        let m = self.m(n);
        match self {
            Family::Odd if n.is_multiple_of(2) => 2 * m + 2,
            Family::Odd => 2 * m + 4,
            Family::Even => 2 * m + 1,
        }
    }

    pub fn degree(self, n: usize) -> u32 {
        match self {
            Family::Odd => 2 * n as u32 - 1,
            Family::Even => 2 * n as u32,
        }
    }
}

/// Radial weight `W`, known through `mu(j) = int_0^inf r^(2j+1) W(r) dr`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "name")]
pub enum RadialWeight {
    /// `W(r) = exp(-r^2)`.
    Gaussian,
    /// `W = 1` on `[0, 1]`.
    UnitDisk,
    Custom {
        moments: Vec<Scalar>,
    },
}

impl RadialWeight {
    pub fn custom(moments: Vec<Scalar>) -> Result<Self, XuError> {
        if moments.iter().any(|m| !m.is_positive()) {
            return Err(XuError::NonPositiveMoment);
        }
        Ok(RadialWeight::Custom { moments })
    }

    pub fn name(&self) -> &'static str {
        match self {
            RadialWeight::Gaussian => "gaussian",
            RadialWeight::UnitDisk => "unit_disk",
            RadialWeight::Custom { .. } => "custom",
        }
    }

    pub fn moment(&self, j: usize) -> Result<Scalar, XuError> {
        match self {
            RadialWeight::Gaussian => {
                let fact: BigInt = (1..=j as u64).map(BigInt::from).product();
                Ok(&Scalar::from_bigint(fact) * &Scalar::ratio(1, 2))
            }
            RadialWeight::UnitDisk => Ok(Scalar::ratio(1, 2 * j as i64 + 2)),
            RadialWeight::Custom { moments } => {
                moments.get(j).cloned().ok_or(XuError::MomentUnavailable(j))
            }
        }
    }

    fn moments_f64(&self, upto: usize) -> Option<Vec<f64>> {
        (0..=upto)
            .map(|j| self.moment(j).ok().map(|m| m.to_f64()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFormula")]
pub struct XuFormula {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub lambda: Vec<Scalar>,
    pub r: Vec<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<Scalar>,
    /// `sigma_i = 0` iff `m + i` is even.
    pub sigma: Vec<u8>,
}

#[derive(Deserialize)]
struct RawFormula {
    family: Family,
    n: usize,
    m: Option<usize>,
    lambda: Vec<Scalar>,
    r: Vec<Scalar>,
    lambda0: Option<Scalar>,
}

impl TryFrom<RawFormula> for XuFormula {
    type Error = XuError;

    fn try_from(raw: RawFormula) -> Result<Self, Self::Error> {
        let f = XuFormula::new(raw.family, raw.n, raw.lambda, raw.r, raw.lambda0)?;
        match raw.m {
            Some(m) if m != f.m => Err(XuError::Malformed(format!(
                "m = {m} does not match n = {}",
                f.n
            ))),
            _ => Ok(f),
        }
    }
}

impl XuFormula {
    pub fn new(
        family: Family,
        n: usize,
        lambda: Vec<Scalar>,
        r: Vec<Scalar>,
        lambda0: Option<Scalar>,
    ) -> Result<Self, XuError> {
        let bad = |s: String| Err(XuError::Malformed(s));
        if n == 0 || (family == Family::Odd && n < 2) {
            return bad(format!("n = {n} is too small for family {family}"));
        }
        let c = family.circles(n);
        if lambda.len() != c || r.len() != c {
            return bad(format!(
                "expected {c} circles, got {} weights and {} radii",
                lambda.len(),
                r.len()
            ));
        }
        if lambda.iter().chain(&r).any(|v| !v.is_positive()) {
            return bad("weights and radii must be positive".into());
        }
        if (0..c).any(|i| (i + 1..c).any(|k| r[i] == r[k])) {
            return bad("radii must be distinct".into());
        }
        if lambda0.is_some() != family.has_center(n) {
            return bad("lambda0 is required exactly when the formula has a center point".into());
        }
        if lambda0.as_ref().is_some_and(Scalar::is_negative) {
            return bad("lambda0 must be non-negative".into());
        }
        let m = family.m(n);
        let sigma = (1..=c).map(|i| ((m + i) % 2) as u8).collect();
        Ok(XuFormula {
            family,
            n,
            m,
            lambda,
            r,
            lambda0,
            sigma,
        })
    }

    pub fn degree(&self) -> u32 {
        self.family.degree(self.n)
    }

    pub fn angles(&self) -> usize {
        self.family.angles(self.n)
    }

    fn sign(&self, i: usize) -> Scalar {
        // (-1)^i with 1-based i
        if i % 2 == 1 {
            -Scalar::one()
        } else {
            Scalar::one()
        }
    }

    fn precision(&self) -> usize {
        self.lambda
            .iter()
            .chain(&self.r)
            .chain(&self.lambda0)
            .filter_map(Scalar::precision)
            .max()
            .unwrap_or(DEFAULT_PRECISION)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct XuPoint {
    pub x: Scalar,
    pub y: Scalar,
    pub weight: Scalar,
}

/// Explicit weighted points; the center comes first when present.
pub fn build_points(f: &XuFormula) -> Vec<XuPoint> {
    let prec = f.precision();
    let l = f.angles();
    let pi = Scalar::pi(prec);
    let mut out = Vec::with_capacity(f.r.len() * l + 1);
    if let Some(l0) = &f.lambda0 {
        out.push(XuPoint {
            x: Scalar::zero(),
            y: Scalar::zero(),
            weight: l0.clone(),
        });
    }
    let step = &pi / &Scalar::from_int(l as i64);
    for ((lam, r), s) in f.lambda.iter().zip(&f.r).zip(&f.sigma) {
        let w = &(&(&pi * lam) * &Scalar::from_int(2)) / &Scalar::from_int(l as i64);
        for j in 0..l {
            let theta = &step * &Scalar::from_int(2 * j as i64 + *s as i64);
            out.push(XuPoint {
                x: r * &theta.cos(prec),
                y: r * &theta.sin(prec),
                weight: w.clone(),
            });
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct XuConfig {
    pub prec: usize,
    pub tol: Scalar,
}

impl XuConfig {
    pub fn with_precision(prec: usize) -> Self {
        XuConfig {
            prec,
            tol: tolerance_from_bits(prec / 2, prec),
        }
    }
}

impl Default for XuConfig {
    fn default() -> Self {
        XuConfig::with_precision(DEFAULT_PRECISION)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    Moment,
    Alternating,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionResidual {
    pub kind: ConditionKind,
    pub j: usize,
    pub value: Scalar,
    pub vanishes: bool,
    /// The `j = 0` moment equation, required here but absent from the
    /// stated range.
    pub added: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub pass: bool,
    pub residuals: Vec<ConditionResidual>,
    pub failing: Vec<(ConditionKind, usize)>,
}

/// One equation `sum_i sign_i lambda_i r_i^power (+ lambda0 / 2pi) = target`.
#[derive(Debug, Clone)]
struct Equation {
    kind: ConditionKind,
    j: usize,
    alternating: bool,
    power: u32,
    center: bool,
    target: Scalar,
}

fn equations(family: Family, n: usize, w: &RadialWeight) -> Result<Vec<Equation>, XuError> {
    let mut out = Vec::new();
    let top = match family {
        Family::Odd => n - 1,
        Family::Even => n,
    };
    for j in 0..=top {
        let target = w.moment(j)?;
        if !target.is_positive() {
            return Err(XuError::NonPositiveMoment);
        }
        let center = j == 0 && family.has_center(n);
        out.push(Equation {
            kind: ConditionKind::Moment,
            j,
            alternating: false,
            power: 2 * j as u32,
            center,
            target,
        });
    }
    let (lo, odd_power) = match family {
        Family::Odd => ((n + 3) / 2, false),
        Family::Even => (n.div_ceil(2), true),
    };
    for j in lo..n {
        let power = 2 * j as u32 + odd_power as u32;
        out.push(Equation {
            kind: ConditionKind::Alternating,
            j,
            alternating: true,
            power,
            center: false,
            target: Scalar::zero(),
        });
    }
    Ok(out)
}

impl Equation {
    /// Residual and the sum of absolute values of its terms.
    fn eval(&self, f: &XuFormula, pi2: &Scalar) -> (Scalar, Scalar) {
        let mut acc = -self.target.clone();
        let mut scale = self.target.abs();
        for (i, (lam, r)) in f.lambda.iter().zip(&f.r).enumerate() {
            let mut t = lam * &r.pow(self.power);
            if self.alternating {
                t = &t * &f.sign(i + 1);
            }
            scale = &scale + &t.abs();
            acc = &acc + &t;
        }
        if self.center {
            if let Some(l0) = &f.lambda0 {
                let c = l0 / pi2;
                scale = &scale + &c.abs();
                acc = &acc + &c;
            }
        }
        (acc, scale)
    }
}

pub fn verify_conditions(f: &XuFormula, w: &RadialWeight) -> Result<ConditionReport, XuError> {
    verify_conditions_with(f, w, &XuConfig::default())
}

/// Residuals of the moment equations (from `j = 0`) and of the alternating
/// equations.
pub fn verify_conditions_with(
    f: &XuFormula,
    w: &RadialWeight,
    cfg: &XuConfig,
) -> Result<ConditionReport, XuError> {
    let pi2 = &Scalar::pi(cfg.prec) * &Scalar::from_int(2);
    let mut residuals = Vec::new();
    let mut failing = Vec::new();
    for eq in equations(f.family, f.n, w)? {
        let (value, scale) = eq.eval(f, &pi2);
        let vanishes = is_negligible(&value, &scale, &cfg.tol);
        if !vanishes {
            failing.push((eq.kind, eq.j));
        }
        let added = eq.kind == ConditionKind::Moment && eq.j == 0;
        residuals.push(ConditionResidual {
            kind: eq.kind,
            j: eq.j,
            value,
            vanishes,
            added,
        });
    }
    Ok(ConditionReport {
        pass: failing.is_empty(),
        residuals,
        failing,
    })
}

fn double_factorial(k: i64) -> BigInt {
    let mut acc = BigInt::from(1);
    let mut i = k;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    acc
}

/// `int_0^{2pi} cos^a sin^b / (2 pi)`.
fn angular_mean(a: u32, b: u32) -> Scalar {
    if a % 2 == 1 || b % 2 == 1 {
        return Scalar::zero();
    }
    let num = double_factorial(a as i64 - 1) * double_factorial(b as i64 - 1);
    let den = double_factorial((a + b) as i64);
    &Scalar::from_bigint(num) / &Scalar::from_bigint(den)
}

/// `v = Re((x + iy)^l) = r^l cos(l theta)`.
pub fn dihedral_v(l: usize) -> MultiPoly {
    let mut v = MultiPoly::zero(2);
    for k in (0..=l).step_by(2) {
        let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
        let c = Scalar::from_bigint(BigInt::from(binomial(l as u64, k as u64)) * sign);
        v.add_term(crate::poly::Monomial(vec![(l - k) as u32, k as u32]), c);
    }
    v
}

/// `u = r^2`.
pub fn dihedral_u() -> MultiPoly {
    MultiPoly::monomial(Scalar::one(), &[2, 0]).add(&MultiPoly::monomial(Scalar::one(), &[0, 2]))
}

#[derive(Debug, Clone, Serialize)]
pub struct MonomialResidual {
    pub a: u32,
    pub b: u32,
    pub value: Scalar,
    pub vanishes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantResidual {
    pub p: u32,
    pub q: u32,
    pub value: Scalar,
    pub vanishes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeReport {
    pub t: u32,
    pub pass: bool,
    pub monomials: Vec<MonomialResidual>,
    pub invariants: Vec<InvariantResidual>,
}

pub fn verify_degree(f: &XuFormula, w: &RadialWeight, t: u32) -> Result<DegreeReport, XuError> {
    verify_degree_with(f, w, t, &XuConfig::default())
}

/// Exactness on every monomial `x^a y^b` with `a + b <= t`, and separately on
/// the invariants `u^p v^q`; the two verdicts must agree.
pub fn verify_degree_with(
    f: &XuFormula,
    w: &RadialWeight,
    t: u32,
    cfg: &XuConfig,
) -> Result<DegreeReport, XuError> {
    let pts = build_points(f);
    let two_pi = &Scalar::pi(cfg.prec) * &Scalar::from_int(2);
    // scale: the same sum with every polynomial replaced by |x|^degree
    let check = |value: &dyn Fn(&Scalar, &Scalar) -> Scalar,
                 degree: u32,
                 exact: Scalar|
     -> (Scalar, bool) {
        let mut sum = Scalar::zero();
        let mut scale = exact.abs();
        for p in &pts {
            let r2 = &(&p.x * &p.x) + &(&p.y * &p.y);
            let size = if degree.is_multiple_of(2) {
                r2.pow(degree / 2)
            } else {
                &r2.pow(degree / 2) * &r2.sqrt(cfg.prec).expect("non-negative")
            };
            scale = &scale + &(&p.weight.abs() * &size);
            sum = &sum + &(&p.weight * &value(&p.x, &p.y));
        }
        let r = &sum - &exact;
        let ok = is_negligible(&r, &scale, &cfg.tol);
        (r, ok)
    };

    let mut mono = Vec::new();
    for d in 0..=t {
        for a in (0..=d).rev() {
            let b = d - a;
            let exact = if d % 2 == 0 {
                &(&w.moment(d as usize / 2)? * &angular_mean(a, b)) * &two_pi
            } else {
                Scalar::zero()
            };
            let (value, vanishes) = check(&|x, y| &x.pow(a) * &y.pow(b), d, exact);
            mono.push(MonomialResidual {
                a,
                b,
                value,
                vanishes,
            });
        }
    }

    let l = f.angles() as u32;
    let v = dihedral_v(l as usize);
    let mut inv = Vec::new();
    for q in 0..=t / l {
        for p in 0..=(t - q * l) / 2 {
            let exact = if q % 2 == 0 {
                let j = (p + q * l / 2) as usize;
                &(&w.moment(j)? * &angular_mean(q, 0)) * &two_pi
            } else {
                Scalar::zero()
            };
            let value = |x: &Scalar, y: &Scalar| {
                let u = &(x * x) + &(y * y);
                let vv = poly::evaluate(&v, &[x.clone(), y.clone()]).expect("two variables");
                &u.pow(p) * &vv.pow(q)
            };
            let (value, vanishes) = check(&value, 2 * p + l * q, exact);
            inv.push(InvariantResidual {
                p,
                q,
                value,
                vanishes,
            });
        }
    }

    let pass_a = mono.iter().all(|r| r.vanishes);
    let pass_b = inv.iter().all(|r| r.vanishes);
    if pass_a != pass_b {
        return Err(XuError::Disagreement(t));
    }
    Ok(DegreeReport {
        t,
        pass: pass_a,
        monomials: mono,
        invariants: inv,
    })
}

/// `f = sum c_pq u^p v^q` with `u = r^2`, `v = r^l cos(l theta)`.
#[derive(Debug, Clone, Serialize)]
pub struct DihedralExpansion {
    pub l: usize,
    /// `(p, q, c_pq)`, sorted by `(p, q)`.
    pub terms: Vec<(u32, u32, Scalar)>,
}

impl DihedralExpansion {
    pub fn reconstruct(&self) -> MultiPoly {
        let u = dihedral_u();
        let v = dihedral_v(self.l);
        let mut out = MultiPoly::zero(2);
        for (p, q, c) in &self.terms {
            out.add_scaled(c, &u.pow(*p).mul(&v.pow(*q)));
        }
        out
    }
}

pub fn dihedral_reduce(f: &MultiPoly, l: usize) -> Result<DihedralExpansion, XuError> {
    if f.nvars() != 2 {
        return Err(XuError::NotBivariate);
    }
    if l == 0 {
        return Err(XuError::Malformed("l must be positive".into()));
    }
    let flip: Matrix = vec![
        vec![Scalar::one(), Scalar::zero()],
        vec![Scalar::zero(), -Scalar::one()],
    ];
    let flipped = poly::act(&flip, f).map_err(|_| XuError::NotInvariant(l))?;
    if !flipped.sub(f).is_zero() {
        return Err(XuError::NotInvariant(l));
    }
    let u = dihedral_u();
    let v = dihedral_v(l);
    let mut terms = Vec::new();
    for d in 0..=f.degree().unwrap_or(0) {
        let part = f.component(d);
        if part.is_zero() {
            continue;
        }
        let cand: Vec<(u32, u32)> = (0..=d / l as u32)
            .filter(|q| (d - q * l as u32).is_multiple_of(2))
            .map(|q| ((d - q * l as u32) / 2, q))
            .collect();
        let basis: Vec<MultiPoly> = cand.iter().map(|&(p, q)| u.pow(p).mul(&v.pow(q))).collect();
        let mons = monomials(2, d);
        let a: Matrix = mons
            .iter()
            .map(|mn| basis.iter().map(|b| b.coeff(mn)).collect())
            .collect();
        let rhs: Vec<Scalar> = mons.iter().map(|mn| part.coeff(mn)).collect();
        let c = if cand.is_empty() {
            None
        } else {
            linalg::solve(&a, &rhs)
        }
        .ok_or(XuError::NotInvariant(l))?;
        for ((p, q), c) in cand.into_iter().zip(c) {
            if !c.is_zero() {
                terms.push((p, q, c));
            }
        }
    }
    terms.sort_by_key(|t| (t.0, t.1));
    let out = DihedralExpansion { l, terms };
    if !out.reconstruct().sub(f).is_zero() {
        return Err(XuError::NotInvariant(l));
    }
    Ok(out)
}

/// Gauss nodes and weights of `c` points for the moments `mu`, in `s = r^2`.
fn gauss_rule(mu: &[f64], c: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    if mu.len() < 2 * c {
        return None;
    }
    let h = DMatrix::from_fn(c, c, |i, k| mu[i + k]);
    let rhs = DVector::from_fn(c, |i, _| -mu[i + c]);
    let coef = h.lu().solve(&rhs)?;
    let mut comp = DMatrix::<f64>::zeros(c, c);
    for i in 1..c {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..c {
        comp[(i, c - 1)] = -coef[i];
    }
    let eig = comp.complex_eigenvalues();
    if eig
        .iter()
        .any(|z| z.im.abs() > 1e-9 * z.re.abs().max(1.0) || z.re <= 0.0)
    {
        return None;
    }
    let mut nodes: Vec<f64> = eig.iter().map(|z| z.re).collect();
    nodes.sort_by(f64::total_cmp);
    let v = DMatrix::from_fn(c, c, |j, i| nodes[i].powi(j as i32));
    let w = v.lu().solve(&DVector::from_fn(c, |j, _| mu[j]))?;
    w.iter()
        .all(|x| *x > 0.0)
        .then(|| (nodes, w.iter().copied().collect()))
}

/// Unknowns `lambda_1..c`, `r_1..c` and, with a center, `lambda0 / 2pi`.
struct Moments<'a> {
    eqs: &'a [Equation],
    targets: Vec<f64>,
    scales: Vec<f64>,
    c: usize,
    center: bool,
    y: Vec<f64>,
}

impl Moments<'_> {
    fn vars(&self) -> usize {
        2 * self.c + self.center as usize
    }

    fn residual_at(&self, x: &[f64]) -> Vec<f64> {
        self.eqs
            .iter()
            .zip(self.targets.iter().zip(&self.scales))
            .map(|(eq, (t, s))| {
                let mut acc = -t;
                for i in 0..self.c {
                    let sg = if eq.alternating && (i + 1) % 2 == 1 {
                        -1.0
                    } else {
                        1.0
                    };
                    acc += sg * x[i] * x[self.c + i].powi(eq.power as i32);
                }
                if eq.center {
                    acc += x[2 * self.c];
                }
                acc / s
            })
            .collect()
    }

    fn values(&self) -> Vec<f64> {
        self.y.iter().map(|v| v.exp()).collect()
    }
}

impl LeastSquaresProblem<f64, Dyn, Dyn> for Moments<'_> {
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, Dyn>;
    type ParameterStorage = Owned<f64, Dyn>;

    fn set_params(&mut self, x: &DVector<f64>) {
        self.y = x.iter().copied().collect();
    }

    fn params(&self) -> DVector<f64> {
        DVector::from_vec(self.y.clone())
    }

    fn residuals(&self) -> Option<DVector<f64>> {
        Some(DVector::from_vec(self.residual_at(&self.values())))
    }

    fn jacobian(&self) -> Option<DMatrix<f64>> {
        let x = self.values();
        let c = self.c;
        let mut jac = DMatrix::zeros(self.eqs.len(), self.vars());
        for (row, (eq, s)) in self.eqs.iter().zip(&self.scales).enumerate() {
            for i in 0..c {
                let sg = if eq.alternating && (i + 1) % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                let rp = x[c + i].powi(eq.power as i32);
                // d/dlog v = v d/dv
                jac[(row, i)] = sg * x[i] * rp / s;
                jac[(row, c + i)] = sg * x[i] * eq.power as f64 * rp / s;
            }
            if eq.center {
                jac[(row, 2 * c)] = x[2 * c] / s;
            }
        }
        Some(jac)
    }
}

fn seeds(w: &RadialWeight, family: Family, n: usize, count: usize) -> Vec<Vec<f64>> {
    let c = family.circles(n);
    let center = family.has_center(n);
    let mu = w
        .moments_f64(2 * c + 1)
        .or_else(|| w.moments_f64(n))
        .unwrap_or_default();
    let base = if center {
        gauss_rule(&mu[1.min(mu.len())..], c).map(|(s, wt)| {
            let lam: Vec<f64> = wt.iter().zip(&s).map(|(w, s)| w / s).collect();
            let c0 = (mu[0] - lam.iter().sum::<f64>()).max(1e-3 * mu[0]);
            (s, lam, Some(c0))
        })
    } else {
        gauss_rule(&mu, c).map(|(s, wt)| (s, wt, None))
    };
    let (s, lam, c0) = base.unwrap_or_else(|| {
        let m0 = mu.first().copied().unwrap_or(1.0);
        let m1 = mu.get(1).copied().unwrap_or(m0);
        let s = (1..=c)
            .map(|i| m1 / m0 * i as f64 / c as f64 * 2.0)
            .collect();
        (
            s,
            vec![m0 / (c + center as usize) as f64; c],
            center.then_some(m0 / (c as f64 + 1.0)),
        )
    });
    let mut y: Vec<f64> = lam
        .iter()
        .map(|v| v.ln())
        .chain(s.iter().map(|v| 0.5 * v.ln()))
        .collect();
    if let Some(c0) = c0 {
        y.push(c0.ln());
    }
    let mut out = vec![y.clone()];
    let mut rev = y.clone();
    rev[..c].reverse();
    rev[c..2 * c].reverse();
    out.push(rev);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (n as u64) << 8 ^ family as u64);
    while out.len() < count {
        out.push(y.iter().map(|v| v + rng.gen_range(-1.0..1.0)).collect());
    }
    out
}

/// Newton steps on the normal equations at full precision.
fn refine(eqs: &[Equation], c: usize, start: &[f64], prec: usize) -> Option<Vec<Scalar>> {
    let mut x: Vec<Scalar> = start.iter().map(|v| Scalar::from_f64(*v, prec)).collect();
    let nv = x.len();
    let stop = tolerance_from_bits(prec * 7 / 8, prec);
    for _ in 0..80 {
        let mut res = Vec::with_capacity(eqs.len());
        let mut jac: Matrix = Vec::with_capacity(eqs.len());
        for eq in eqs {
            let mut acc = -eq.target.clone().into_float(prec);
            let mut row = vec![Scalar::zero(); nv];
            for i in 0..c {
                let sg = if eq.alternating && (i + 1) % 2 == 1 {
                    -Scalar::one()
                } else {
                    Scalar::one()
                };
                let rp1 = if eq.power == 0 {
                    Scalar::zero()
                } else {
                    x[c + i].pow(eq.power - 1)
                };
                let rp = x[c + i].pow(eq.power);
                acc = &acc + &(&sg * &(&x[i] * &rp));
                row[i] = &sg * &rp;
                row[c + i] = &(&sg * &(&x[i] * &rp1)) * &Scalar::from_int(eq.power as i64);
            }
            if eq.center {
                acc = &acc + &x[2 * c];
                row[2 * c] = Scalar::one();
            }
            res.push(acc);
            jac.push(row);
        }
        let worst = res
            .iter()
            .fold(Scalar::zero(), |a, r| if r.abs() > a { r.abs() } else { a });
        if worst <= stop {
            return x.iter().all(Scalar::is_positive).then_some(x);
        }
        let jt = linalg::transpose(&jac);
        let jtj = linalg::mat_mul(&jt, &jac);
        let rhs: Vec<Scalar> = linalg::mat_vec(&jt, &res).into_iter().map(|v| -v).collect();
        // keep the right-hand side at unit size so elimination does not
        // round it away near convergence
        let size = rhs
            .iter()
            .fold(Scalar::zero(), |a, r| if r.abs() > a { r.abs() } else { a });
        if size.is_zero() {
            return None;
        }
        let unit: Vec<Scalar> = rhs.iter().map(|v| v / &size).collect();
        let delta = linalg::solve(&jtj, &unit)?;
        for (xi, d) in x.iter_mut().zip(delta) {
            *xi = &*xi + &(&d * &size);
        }
    }
    None
}

/// Replaces values by nearby rationals (and radii by exact roots) when the
/// result still satisfies every condition exactly.
fn recognise(f: &XuFormula, w: &RadialWeight, cfg: &XuConfig) -> Option<XuFormula> {
    let rat = |v: &Scalar| v.rationalize(1_000_000).map(Scalar::rational);
    let lambda: Vec<Scalar> = f.lambda.iter().map(rat).collect::<Option<_>>()?;
    let r: Vec<Scalar> =
        f.r.iter()
            .map(|r| rat(&(r * r)).and_then(|s| s.sqrt_in_field().or_else(|| s.sqrt_exact())))
            .collect::<Option<_>>()?;
    Scalar::common_extension(lambda.iter().chain(&r)).ok()?;
    let lambda0 = match &f.lambda0 {
        Some(l0) => {
            let pi2 = &Scalar::pi(cfg.prec) * &Scalar::from_int(2);
            Some(&rat(&(l0 / &pi2))? * &pi2)
        }
        None => None,
    };
    let g = XuFormula::new(f.family, f.n, lambda, r, lambda0).ok()?;
    verify_conditions_with(&g, w, cfg).ok()?.pass.then_some(g)
}

pub fn solve_moment_system(
    w: &RadialWeight,
    n: usize,
    family: Family,
) -> Result<XuFormula, XuError> {
    solve_moment_system_with(w, n, family, &XuConfig::default())
}

/// Positive `lambda_i`, distinct positive `r_i` (and `lambda0`) satisfying the
/// conditions, by damped least squares in log variables from Gauss-node
/// seeds, then Newton refinement at full precision.
pub fn solve_moment_system_with(
    w: &RadialWeight,
    n: usize,
    family: Family,
    cfg: &XuConfig,
) -> Result<XuFormula, XuError> {
    if n == 0 || (family == Family::Odd && n < 2) {
        return Err(XuError::Malformed(format!(
            "n = {n} is too small for family {family}"
        )));
    }
    let eqs = equations(family, n, w)?;
    let c = family.circles(n);
    let center = family.has_center(n);
    let targets: Vec<f64> = eqs.iter().map(|e| e.target.to_f64()).collect();
    let scales: Vec<f64> = eqs
        .iter()
        .map(|e| {
            w.moment((e.power / 2) as usize)
                .map(|m| m.to_f64())
                .unwrap_or(1.0)
        })
        .collect();
    let mut best = f64::INFINITY;
    for y in seeds(w, family, n, 24) {
        let problem = Moments {
            eqs: &eqs,
            targets: targets.clone(),
            scales: scales.clone(),
            c,
            center,
            y,
        };
        let (solved, _) = LevenbergMarquardt::new()
            .with_patience(300)
            .minimize(problem);
        let x = solved.values();
        let norm = solved
            .residual_at(&x)
            .iter()
            .map(|r| r * r)
            .sum::<f64>()
            .sqrt();
        best = best.min(norm);
        let finite = x.iter().all(|v| v.is_finite() && *v > 0.0);
        let rs = &x[c..2 * c];
        let distinct =
            (0..c).all(|i| (i + 1..c).all(|k| (rs[i] - rs[k]).abs() > 1e-6 * rs[i].max(rs[k])));
        if !(finite && distinct && norm < 1e-9) {
            continue;
        }
        let Some(v) = refine(&eqs, c, &x, cfg.prec) else {
            continue;
        };
        let lambda0 = center.then(|| &(&v[2 * c] * &Scalar::pi(cfg.prec)) * &Scalar::from_int(2));
        let Ok(f) = XuFormula::new(family, n, v[..c].to_vec(), v[c..2 * c].to_vec(), lambda0)
        else {
            continue;
        };
        if let Some(g) = recognise(&f, w, cfg) {
            return Ok(g);
        }
        if verify_conditions_with(&f, w, cfg)?.pass {
            return Ok(f);
        }
    }
    Err(XuError::NoPositiveSolution { family, n, best })
}

#[cfg(test)]
mod tests;
