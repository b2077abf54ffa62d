//! Reflection groups of types `A_n`, `B_n`, `D_n`: roots, generators,
//! corner vectors, orbits and harmonic Molien dimensions.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::linalg::{dot, identity, mat_mul, mat_vec, Matrix, ZeroTest};
use crate::scalar::Scalar;

/// Largest rank for which orbits are enumerated by default.
pub const DEFAULT_RANK_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("rank {n} is below the minimum {min} for type {ty}")]
    RankTooSmall { ty: GroupType, n: usize, min: usize },
    #[error("rank {n} exceeds the enumeration cap {cap}")]
    RankCap { n: usize, cap: usize },
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector has no orbit")]
    ZeroVector,
    #[error("orbit closure exceeded the group order {0}")]
    ClosureOverflow(u128),
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    OrderCap { order: u128, cap: u128 },
    #[error("corner index {k} out of range 1..={n}")]
    CornerIndex { k: usize, n: usize },
    #[error("unknown group type `{0}`")]
    UnknownType(String),
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum GroupType {
    A,
    B,
    D,
}

impl GroupType {
    pub fn min_rank(self) -> usize {
        match self {
            GroupType::A | GroupType::B => 2,
            GroupType::D => 4,
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupType::A => "A",
            GroupType::B => "B",
            GroupType::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for GroupType {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(GroupType::A),
            "B" | "b" => Ok(GroupType::B),
            "D" | "d" => Ok(GroupType::D),
            other => Err(GroupError::UnknownType(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReflectionGroup {
    pub ty: GroupType,
    pub n: usize,
    pub roots: Vec<Vec<Scalar>>,
    pub generators: Vec<Matrix>,
    pub exponents: Vec<u32>,
    pub order: u128,
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    (0..n)
        .map(|j| {
            if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
        .collect()
}

fn transposition(n: usize, i: usize) -> Matrix {
    let mut g = identity(n);
    g.swap(i, i + 1);
    g
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// `sqrt(n+1)` together with the entries `a`, `b` of the last `A_n` root.
fn a_root_entries(n: usize) -> (Scalar, Scalar, Scalar) {
    let s = Scalar::sqrt_of_int(n as u64 + 1);
    let nn = Scalar::from_int(n as i64);
    let a = (&s - &Scalar::one()) / &nn;
    let b = (&s + &Scalar::from_int(n as i64 - 1)) / &nn;
    (s, a, b)
}

impl ReflectionGroup {
    pub fn new(ty: GroupType, n: usize) -> Result<Self, GroupError> {
        if n < ty.min_rank() {
            return Err(GroupError::RankTooSmall {
                ty,
                n,
                min: ty.min_rank(),
            });
        }
        let mut roots: Vec<Vec<Scalar>> = (0..n - 1)
            .map(|i| {
                let mut r = unit(n, i);
                r[i + 1] = Scalar::from_int(-1);
                r
            })
            .collect();
        let mut generators: Vec<Matrix> = (0..n - 1).map(|i| transposition(n, i)).collect();
        let (exponents, order, last_root) = match ty {
            GroupType::A => {
                let (_, a, b) = a_root_entries(n);
                let mut alpha = vec![a; n];
                alpha[n - 1] = b;
                ((1..=n as u32).collect::<Vec<_>>(), factorial(n + 1), alpha)
            }
            GroupType::B => {
                let ex = (1..=n as u32).map(|i| 2 * i - 1).collect();
                // the reflection only depends on the direction of sqrt(2) e_n
                (ex, (1u128 << n) * factorial(n), unit(n, n - 1))
            }
            GroupType::D => {
                let mut ex: Vec<u32> = (1..n as u32).map(|i| 2 * i - 1).collect();
                ex.push(n as u32 - 1);
                ex.sort_unstable();
                let mut alpha = unit(n, n - 2);
                alpha[n - 1] = Scalar::one();
                (ex, (1u128 << (n - 1)) * factorial(n), alpha)
            }
        };
        generators.push(reflection(&last_root));
        roots.push(last_root);
        Ok(ReflectionGroup {
            ty,
            n,
            roots,
            generators,
            exponents,
            order,
        })
    }

    /// Generators that permute coordinates up to sign.
    pub fn is_monomial(g: &Matrix) -> bool {
        g.iter()
            .all(|row| row.iter().filter(|x| !x.is_zero()).count() == 1)
    }

    /// All group elements, by closure over the generators.
    pub fn elements(&self, cap: u128) -> Result<Vec<Matrix>, GroupError> {
        if self.order > cap {
            return Err(GroupError::OrderCap {
                order: self.order,
                cap,
            });
        }
        let mut seen: HashSet<Matrix> = HashSet::new();
        let id = identity(self.n);
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id.clone()]);
        let mut out = vec![id];
        while let Some(h) = queue.pop_front() {
            for g in &self.generators {
                let x = mat_mul(g, &h);
                if seen.insert(x.clone()) {
                    out.push(x.clone());
                    queue.push_back(x);
                }
            }
        }
        debug_assert_eq!(out.len() as u128, self.order);
        Ok(out)
    }

    /// Closed-form orbit size `N_k` of the `k`-th corner vector.
    pub fn corner_orbit_size(&self, k: usize) -> u128 {
        let n = self.n as u64;
        let k64 = k as u64;
        match self.ty {
            GroupType::A => crate::poly::binomial(n + 1, k64),
            GroupType::B => (1u128 << k) * crate::poly::binomial(n, k64),
            GroupType::D if k + 2 <= self.n => (1u128 << k) * crate::poly::binomial(n, k64),
            GroupType::D => 1u128 << (self.n - 1),
        }
    }

    /// Second smallest exponent: every orbit is a spherical design of this strength.
    pub fn m2(&self) -> u32 {
        self.exponents[1]
    }

    /// The quadratic extension the group data lives in, if any.
    pub fn extension(&self) -> Option<u64> {
        Scalar::common_extension(self.generators.iter().flatten().flatten())
            .ok()
            .flatten()
    }
}

pub fn build_group(ty: GroupType, n: usize) -> Result<ReflectionGroup, GroupError> {
    ReflectionGroup::new(ty, n)
}

/// `I - 2 a a^T / |a|^2`.
pub fn reflection(alpha: &[Scalar]) -> Matrix {
    let n = alpha.len();
    let c = Scalar::from_int(2) / crate::linalg::norm_sq(alpha);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    };
                    &d - &(&c * &(&alpha[i] * &alpha[j]))
                })
                .collect()
        })
        .collect()
}

/// Corner vector `v_k` in a radical-free scaled form together with its
/// squared norm, so that `v_k = scaled / sqrt(norm_sq)`.
#[derive(Debug, Clone)]
pub struct CornerVector {
    pub k: usize,
    pub scaled: Vec<Scalar>,
    pub norm_sq: Scalar,
    /// Unit-norm vector; exact when the normalization stays in one
    /// quadratic field, a float otherwise.
    pub unit: Vec<Scalar>,
}

pub fn corner_vectors(ty: GroupType, n: usize) -> Result<Vec<CornerVector>, GroupError> {
    if n < ty.min_rank() {
        return Err(GroupError::RankTooSmall {
            ty,
            n,
            min: ty.min_rank(),
        });
    }
    (1..=n).map(|k| corner_vector(ty, n, k)).collect()
}

pub fn corner_vector(ty: GroupType, n: usize, k: usize) -> Result<CornerVector, GroupError> {
    if n < ty.min_rank() {
        return Err(GroupError::RankTooSmall {
            ty,
            n,
            min: ty.min_rank(),
        });
    }
    if k == 0 || k > n {
        return Err(GroupError::CornerIndex { k, n });
    }
    let one = Scalar::one();
    let zero = Scalar::zero();
    let scaled: Vec<Scalar> = match ty {
        GroupType::A => {
            let s = Scalar::sqrt_of_int(n as u64 + 1);
            let c = &Scalar::from_int((n + 1 - k) as i64) + &s;
            let d = Scalar::from_int(-(k as i64));
            (0..n)
                .map(|i| if i < k { c.clone() } else { d.clone() })
                .collect()
        }
        GroupType::B => (0..n)
            .map(|i| if i < k { one.clone() } else { zero.clone() })
            .collect(),
        GroupType::D if k + 2 <= n => (0..n)
            .map(|i| if i < k { one.clone() } else { zero.clone() })
            .collect(),
        GroupType::D => {
            let mut v = vec![one.clone(); n];
            if k == n - 1 {
                v[n - 1] = Scalar::from_int(-1);
            }
            v
        }
    };
    let norm_sq = crate::linalg::norm_sq(&scaled);
    let unit = normalize(&scaled, &norm_sq);
    Ok(CornerVector {
        k,
        scaled,
        norm_sq,
        unit,
    })
}

/// `x / sqrt(norm_sq)`, exact when it stays inside one field.
pub fn normalize(x: &[Scalar], norm_sq: &Scalar) -> Vec<Scalar> {
    if let Some(root) = norm_sq.sqrt_exact() {
        if Scalar::common_extension(x.iter().chain(std::iter::once(&root))).is_ok() {
            let inv = root.inv();
            return x.iter().map(|c| c * &inv).collect();
        }
    }
    let prec = crate::scalar::DEFAULT_PRECISION;
    let inv = norm_sq
        .sqrt(prec)
        .expect("positive norm")
        .into_float(prec)
        .inv();
    x.iter()
        .map(|c| &c.clone().into_float(prec) * &inv)
        .collect()
}

#[derive(Debug, Clone)]
pub struct Orbit {
    pub representative: Vec<Scalar>,
    pub points: Vec<Vec<Scalar>>,
    pub norm_sq: Scalar,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// Whether every generator maps the point set into itself.
    pub fn is_closed(&self, g: &ReflectionGroup) -> bool {
        let mut index = PointIndex::new(&self.points);
        for (i, p) in self.points.iter().enumerate() {
            index.insert(p.clone(), i);
        }
        g.generators.iter().all(|m| {
            self.points
                .iter()
                .all(|p| index.find(&mat_vec(m, p)).is_some())
        })
    }
}

/// Point lookup: exact hashing for exact data, a sorted first-coordinate
/// index with tolerance otherwise.
struct PointIndex {
    exact: Option<std::collections::HashMap<Vec<Scalar>, usize>>,
    approx: BTreeMap<OrdF64, Vec<(Vec<Scalar>, usize)>>,
    zt: ZeroTest,
    eps: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PointIndex {
    fn new(sample: &[Vec<Scalar>]) -> Self {
        let float = sample.iter().flatten().any(Scalar::is_float);
        if !float {
            return PointIndex {
                exact: Some(Default::default()),
                approx: BTreeMap::new(),
                zt: ZeroTest::exact(),
                eps: 0.0,
            };
        }
        PointIndex {
            exact: None,
            approx: BTreeMap::new(),
            zt: ZeroTest::for_entries(sample.iter().flatten()),
            eps: 1e-9,
        }
    }

    fn find(&self, p: &[Scalar]) -> Option<usize> {
        if let Some(map) = &self.exact {
            return map.get(p).copied();
        }
        let x0 = p.first().map_or(0.0, Scalar::to_f64);
        let lo = OrdF64(x0 - self.eps * (1.0 + x0.abs()));
        let hi = OrdF64(x0 + self.eps * (1.0 + x0.abs()));
        self.approx
            .range(lo..=hi)
            .flat_map(|(_, v)| v)
            .find_map(|(q, i)| {
                q.iter()
                    .zip(p)
                    .all(|(a, b)| self.zt.is_zero(&(a - b)))
                    .then_some(*i)
            })
    }

    fn insert(&mut self, p: Vec<Scalar>, i: usize) {
        if let Some(map) = &mut self.exact {
            map.insert(p, i);
            return;
        }
        let key = OrdF64(p.first().map_or(0.0, Scalar::to_f64));
        self.approx.entry(key).or_default().push((p, i));
    }
}

/// Orbit of `x` under `G` by breadth-first closure over the generators.
pub fn orbit(g: &ReflectionGroup, x: &[Scalar]) -> Result<Orbit, GroupError> {
    orbit_capped(g, x, DEFAULT_RANK_CAP)
}

pub fn orbit_capped(
    g: &ReflectionGroup,
    x: &[Scalar],
    rank_cap: usize,
) -> Result<Orbit, GroupError> {
    if x.len() != g.n {
        return Err(GroupError::DimensionMismatch {
            expected: g.n,
            got: x.len(),
        });
    }
    if g.n > rank_cap {
        return Err(GroupError::RankCap {
            n: g.n,
            cap: rank_cap,
        });
    }
    if x.iter().all(Scalar::is_zero) {
        return Err(GroupError::ZeroVector);
    }
    let sample: Vec<Vec<Scalar>> = std::iter::once(x.to_vec())
        .chain(g.generators.iter().flatten().cloned())
        .collect();
    let mut index = PointIndex::new(&sample);
    let mut points = vec![x.to_vec()];
    index.insert(x.to_vec(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for m in &g.generators {
            let y = mat_vec(m, &points[i]);
            if index.find(&y).is_none() {
                if points.len() as u128 >= g.order {
                    return Err(GroupError::ClosureOverflow(g.order));
                }
                index.insert(y.clone(), points.len());
                queue.push_back(points.len());
                points.push(y);
            }
        }
    }
    Ok(Orbit {
        representative: x.to_vec(),
        norm_sq: dot(x, x),
        points,
    })
}

/// Coefficients `q_0..q_lmax` of `prod_{i>=2} 1/(1 - t^(1+m_i))`.
pub fn molien_dims(g: &ReflectionGroup, l_max: usize) -> Vec<u64> {
    let mut q = vec![0u64; l_max + 1];
    q[0] = 1;
    for &m in g.exponents.iter().skip(1) {
        let d = (m + 1) as usize;
        for l in d..=l_max {
            q[l] += q[l - d];
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_orthogonal, nullspace, transpose};

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn group_data_examples() {
        let b3 = build_group(GroupType::B, 3).unwrap();
        assert_eq!(b3.exponents, vec![1, 3, 5]);
        assert_eq!(b3.order, 48);
        assert_eq!(
            b3.generators[2],
            vec![
                vec![q(1, 1), q(0, 1), q(0, 1)],
                vec![q(0, 1), q(1, 1), q(0, 1)],
                vec![q(0, 1), q(0, 1), q(-1, 1)],
            ]
        );
        let a2 = build_group(GroupType::A, 2).unwrap();
        assert_eq!((a2.exponents.clone(), a2.order), (vec![1, 2], 6));
        let d4 = build_group(GroupType::D, 4).unwrap();
        assert_eq!((d4.exponents.clone(), d4.order), (vec![1, 3, 3, 5], 192));
        assert!(matches!(
            build_group(GroupType::D, 3),
            Err(GroupError::RankTooSmall { .. })
        ));
    }

    #[test]
    fn generators_are_orthogonal_involutions() {
        for (ty, n) in [
            (GroupType::A, 2),
            (GroupType::A, 5),
            (GroupType::B, 4),
            (GroupType::D, 5),
        ] {
            let g = build_group(ty, n).unwrap();
            for m in &g.generators {
                assert!(is_orthogonal(m));
                assert_eq!(mat_mul(m, m), identity(n));
            }
        }
    }

    #[test]
    fn a_last_generator_matches_block_form() {
        let n = 4;
        let g = build_group(GroupType::A, n).unwrap();
        let (_, a, b) = a_root_entries(n);
        let r = &g.generators[n - 1];
        assert_eq!(r[0][0], &Scalar::one() - &(&a * &a));
        assert_eq!(r[0][1], -(&a * &a));
        assert_eq!(r[0][n - 1], -(&a * &b));
        assert_eq!(r[n - 1][n - 1], &Scalar::one() - &(&b * &b));
    }

    #[test]
    fn element_enumeration_reaches_order() {
        for (ty, n) in [(GroupType::A, 3), (GroupType::B, 3), (GroupType::D, 4)] {
            let g = build_group(ty, n).unwrap();
            assert_eq!(g.elements(1_000_000).unwrap().len() as u128, g.order);
        }
    }

    #[test]
    fn corner_vectors_are_orthogonal_to_other_roots() {
        for (ty, n) in [
            (GroupType::A, 2),
            (GroupType::A, 4),
            (GroupType::A, 7),
            (GroupType::B, 5),
            (GroupType::D, 6),
        ] {
            let g = build_group(ty, n).unwrap();
            for v in corner_vectors(ty, n).unwrap() {
                for (j, alpha) in g.roots.iter().enumerate() {
                    let ip = dot(&v.scaled, alpha);
                    assert_eq!(ip.is_zero(), j + 1 != v.k, "{ty}{n} k={} j={}", v.k, j + 1);
                }
                let nrm = crate::linalg::norm_sq(&v.unit);
                assert!((nrm.to_f64() - 1.0).abs() < 1e-30_f64.max(f64::EPSILON * 4.0));
            }
        }
    }

    #[test]
    fn a4_corner_vectors_match_direct_solve() {
        // kernel of the n-1 orthogonality equations, compared up to a positive factor
        let n = 4;
        let g = build_group(GroupType::A, n).unwrap();
        for v in corner_vectors(GroupType::A, n).unwrap() {
            let rows: Matrix = g
                .roots
                .iter()
                .enumerate()
                .filter(|(j, _)| j + 1 != v.k)
                .map(|(_, r)| r.clone())
                .collect();
            let ker = nullspace(&rows, n);
            assert_eq!(ker.len(), 1);
            let w = &ker[0];
            let i = w.iter().position(|x| !x.is_zero()).unwrap();
            let ratio = &v.scaled[i] / &w[i];
            let scaled: Vec<Scalar> = w.iter().map(|x| x * &ratio).collect();
            assert_eq!(scaled, v.scaled);
            // unit form against the printed c_k, d_k
            let s = Scalar::sqrt_of_int(5);
            let kk = v.k as i64;
            let denom_sq = &Scalar::from_int(kk * (5 - kk))
                * &(&Scalar::from_int(6) + &(&Scalar::from_int(2) * &s));
            let c = (&Scalar::from_int(5 - kk) + &s).to_f64() / denom_sq.to_f64().sqrt();
            assert!((v.unit[0].to_f64() - c).abs() < 1e-14);
        }
    }

    #[test]
    fn orbit_examples() {
        let b3 = build_group(GroupType::B, 3).unwrap();
        let o = orbit(&b3, &corner_vector(GroupType::B, 3, 1).unwrap().unit).unwrap();
        assert_eq!(o.size(), 6);
        let a2 = build_group(GroupType::A, 2).unwrap();
        assert_eq!(
            orbit(&a2, &corner_vector(GroupType::A, 2, 1).unwrap().scaled)
                .unwrap()
                .size(),
            3
        );
        let d4 = build_group(GroupType::D, 4).unwrap();
        let o = orbit(&d4, &corner_vector(GroupType::D, 4, 4).unwrap().unit).unwrap();
        assert_eq!(o.size(), 8);
        for p in &o.points {
            assert!(p.iter().all(|x| x.abs() == q(1, 2)));
            assert_eq!(p.iter().filter(|x| x.is_negative()).count() % 2, 0);
        }
    }

    #[test]
    fn corner_orbit_sizes_match_closed_form() {
        for ty in [GroupType::A, GroupType::B, GroupType::D] {
            for n in ty.min_rank()..=6 {
                let g = build_group(ty, n).unwrap();
                for v in corner_vectors(ty, n).unwrap() {
                    let o = orbit(&g, &v.scaled).unwrap();
                    assert_eq!(
                        o.size() as u128,
                        g.corner_orbit_size(v.k),
                        "{ty}{n} k={}",
                        v.k
                    );
                    assert_eq!(g.order % o.size() as u128, 0);
                    assert!(o
                        .points
                        .iter()
                        .all(|p| crate::linalg::norm_sq(p) == o.norm_sq));
                    assert!(o.is_closed(&g));
                }
            }
        }
    }

    /// Scaled corner orbit of `A_n` from the explicit description as the
    /// union of two coordinate-permutation classes.
    fn a_orbit_by_description(n: usize, k: usize) -> HashSet<Vec<Scalar>> {
        let s = Scalar::sqrt_of_int(n as u64 + 1);
        let nk = (n + 1 - k) as i64;
        let u1: Vec<u32> = (0..n).map(|i| (i < k) as u32).collect();
        let u2: Vec<u32> = (0..n).map(|i| (i + 1 < k) as u32).collect();
        let mut out = HashSet::new();
        for pattern in crate::poly::distinct_permutations(&u1) {
            out.insert(
                pattern
                    .iter()
                    .map(|&b| {
                        if b == 1 {
                            &Scalar::from_int(nk) + &s
                        } else {
                            Scalar::from_int(-(k as i64))
                        }
                    })
                    .collect(),
            );
        }
        for pattern in crate::poly::distinct_permutations(&u2) {
            out.insert(
                pattern
                    .iter()
                    .map(|&b| {
                        if b == 1 {
                            Scalar::from_int(nk)
                        } else {
                            &Scalar::from_int(-(k as i64)) - &s
                        }
                    })
                    .collect(),
            );
        }
        out
    }

    #[test]
    fn a_orbits_match_two_class_description() {
        for n in 2..=6 {
            let g = build_group(GroupType::A, n).unwrap();
            for v in corner_vectors(GroupType::A, n).unwrap() {
                let o = orbit(&g, &v.scaled).unwrap();
                let got: HashSet<Vec<Scalar>> = o.points.into_iter().collect();
                assert_eq!(got, a_orbit_by_description(n, v.k), "n={n} k={}", v.k);
            }
        }
    }

    #[test]
    fn orbit_antipodality_relations() {
        let neg = |p: &Vec<Scalar>| p.iter().map(|x| -x).collect::<Vec<_>>();
        // A_n: v_k orbit is minus the v_{n+1-k} orbit, after unit scaling
        let n = 4;
        let g = build_group(GroupType::A, n).unwrap();
        for k in 1..=n {
            let a = orbit(&g, &corner_vector(GroupType::A, n, k).unwrap().unit).unwrap();
            let b = orbit(&g, &corner_vector(GroupType::A, n, n + 1 - k).unwrap().unit).unwrap();
            for p in &a.points {
                let m = neg(p);
                assert!(b.points.iter().any(|x| x
                    .iter()
                    .zip(&m)
                    .all(|(u, v)| (u - v).abs().to_f64() < 1e-40)));
            }
        }
        let d5 = build_group(GroupType::D, 5).unwrap();
        let o4 = orbit(&d5, &corner_vector(GroupType::D, 5, 4).unwrap().scaled).unwrap();
        let o5: HashSet<Vec<Scalar>> =
            orbit(&d5, &corner_vector(GroupType::D, 5, 5).unwrap().scaled)
                .unwrap()
                .points
                .into_iter()
                .collect();
        assert!(o4.points.iter().all(|p| o5.contains(&neg(p))));
        let b3 = build_group(GroupType::B, 3).unwrap();
        let o: HashSet<Vec<Scalar>> =
            orbit(&b3, &corner_vector(GroupType::B, 3, 2).unwrap().scaled)
                .unwrap()
                .points
                .into_iter()
                .collect();
        assert!(o.iter().all(|p| o.contains(&neg(p))));
    }

    #[test]
    fn float_orbit_deduplicates() {
        let g = build_group(GroupType::B, 3).unwrap();
        let x: Vec<Scalar> = [0.3, -0.2, 0.7]
            .iter()
            .map(|&v| Scalar::from_f64(v, 256))
            .collect();
        assert_eq!(orbit(&g, &x).unwrap().size(), 48);
        let a = build_group(GroupType::A, 3).unwrap();
        let v = corner_vector(GroupType::A, 3, 1).unwrap();
        let fl: Vec<Scalar> = v.scaled.iter().map(|c| c.clone().into_float(256)).collect();
        assert_eq!(orbit(&a, &fl).unwrap().size(), 4);
    }

    #[test]
    fn orbit_errors() {
        let g = build_group(GroupType::B, 3).unwrap();
        assert!(matches!(
            orbit(&g, &[q(1, 1)]),
            Err(GroupError::DimensionMismatch { .. })
        ));
        assert_eq!(
            orbit(&g, &[q(0, 1), q(0, 1), q(0, 1)]).unwrap_err(),
            GroupError::ZeroVector
        );
        let big = build_group(GroupType::B, 11).unwrap();
        assert!(matches!(
            orbit(&big, &vec![q(1, 1); 11]),
            Err(GroupError::RankCap { .. })
        ));
    }

    #[test]
    fn molien_examples() {
        assert_eq!(
            molien_dims(&build_group(GroupType::B, 2).unwrap(), 8),
            vec![1, 0, 0, 0, 1, 0, 0, 0, 1]
        );
        let d4 = molien_dims(&build_group(GroupType::D, 4).unwrap(), 8);
        assert_eq!((d4[4], d4[6], d4[8]), (2, 1, 3));
        let a3 = molien_dims(&build_group(GroupType::A, 3).unwrap(), 6);
        assert_eq!(&a3[3..], &[1, 1, 0, 1]);
    }

    #[test]
    fn transposes_of_generators_are_generators() {
        let g = build_group(GroupType::A, 3).unwrap();
        for m in &g.generators {
            assert_eq!(&transpose(m), m);
        }
    }
}
