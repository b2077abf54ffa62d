//! Sparse multivariate polynomials with [`Scalar`] coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::linalg::{is_orthogonal, Matrix};
use crate::scalar::{Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Exponent vector, ordered graded-lexicographically: total degree first,
/// then lexicographically by exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
    pub fn exps(&self) -> &[u32] {
        &self.0
    }
    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of total degree `l` in `n` variables, in
/// decreasing graded-lex order.
pub fn monomials(n: usize, l: u32) -> Vec<Monomial> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(Monomial(cur.clone()));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if l == 0 {
            out.push(Monomial(vec![]));
        }
        return out;
    }
    rec(n, l, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Polynomial in `n` variables. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        Self::term(c, Monomial::one(n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        Self::term(Scalar::one(), Monomial::var(n, i))
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        let mut p = Self::zero(m.0.len());
        p.add_term(m, c);
        p
    }

    /// `c * x^exps`.
    pub fn monomial(c: Scalar, exps: &[u32]) -> Self {
        Self::term(c, Monomial(exps.to_vec()))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(n: usize, terms: I) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            assert_eq!(m.0.len(), n, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.n);
        }
        MultiPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n, other.n, "polynomial arity");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &MultiPoly) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n, other.n, "polynomial arity");
        let mut out = MultiPoly::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::constant(self.n, Scalar::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Homogeneous component of degree `l`.
    pub fn component(&self, l: u32) -> MultiPoly {
        MultiPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == l)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.0[i] -= 1;
            out.add_term(d, c * &Scalar::from_int(e as i64));
        }
        out
    }

    /// Maps every coefficient through `f`.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> MultiPoly {
        MultiPoly::from_terms(self.n, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(Scalar::is_exact)
    }
}

/// `f(g^T x)`. This is a left action: `act(g1 g2, f) = act(g1, act(g2, f))`.
pub fn act(g: &Matrix, f: &MultiPoly) -> Result<MultiPoly, PolyError> {
    let n = f.n;
    if g.len() != n || g.iter().any(|r| r.len() != n) {
        return Err(PolyError::DimensionMismatch {
            expected: n,
            got: g.len(),
        });
    }
    if !is_orthogonal(g) {
        return Err(PolyError::NotOrthogonal);
    }
    Ok(act_unchecked(g, f))
}

/// [`act`] without the orthogonality check.
pub fn act_unchecked(g: &Matrix, f: &MultiPoly) -> MultiPoly {
    let n = f.n;
    // x_i -> y_i = sum_j g[j][i] x_j
    let images: Vec<Vec<(usize, Scalar)>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| !g[j][i].is_zero())
                .map(|j| (j, g[j][i].clone()))
                .collect()
        })
        .collect();
    if images.iter().all(|im| im.len() == 1) {
        // signed permutation: map monomials directly
        let mut out = MultiPoly::zero(n);
        for (m, c) in &f.terms {
            let mut e = vec![0u32; n];
            let mut coeff = c.clone();
            for (i, &a) in m.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let (j, s) = &images[i][0];
                e[*j] += a;
                if !s.is_one() {
                    coeff = &coeff * &s.pow(a);
                }
            }
            out.add_term(Monomial(e), coeff);
        }
        return out;
    }
    if let Some((u, v)) = rank_one_update(g) {
        return taylor_shift(f, &u, &v);
    }
    let linear: Vec<MultiPoly> = images
        .iter()
        .map(|im| {
            MultiPoly::from_terms(n, im.iter().map(|(j, s)| (Monomial::var(n, *j), s.clone())))
        })
        .collect();
    let mut powers: HashMap<(usize, u32), MultiPoly> = HashMap::new();
    let mut out = MultiPoly::zero(n);
    for (m, c) in &f.terms {
        let mut prod = MultiPoly::constant(n, c.clone());
        for (i, &a) in m.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let p = powers
                .entry((i, a))
                .or_insert_with(|| linear[i].pow(a))
                .clone();
            prod = prod.mul(&p);
        }
        out = out.add(&prod);
    }
    out
}

/// Writes `g^T - I = u v^T` when that difference has rank one.
fn rank_one_update(g: &Matrix) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
    let n = g.len();
    // m[i][j] = g[j][i] - delta_ij
    let m = |i: usize, j: usize| {
        if i == j {
            &g[j][i] - &Scalar::one()
        } else {
            g[j][i].clone()
        }
    };
    let (r, c) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !m(i, j).is_zero())?;
    let pivot = m(r, c);
    let v: Vec<Scalar> = (0..n).map(|j| &m(r, j) / &pivot).collect();
    let u: Vec<Scalar> = (0..n).map(|i| m(i, c)).collect();
    let ok = (0..n).all(|i| (0..n).all(|j| m(i, j) == &u[i] * &v[j]));
    ok.then_some((u, v))
}

/// `f(x + u (v.x)) = sum_k (v.x)^k / k! (u.grad)^k f`.
fn taylor_shift(f: &MultiPoly, u: &[Scalar], v: &[Scalar]) -> MultiPoly {
    let n = f.n;
    let s = MultiPoly::from_terms(
        n,
        v.iter()
            .enumerate()
            .map(|(j, c)| (Monomial::var(n, j), c.clone())),
    );
    let mut out = f.clone();
    let mut deriv = f.clone();
    let mut s_pow = MultiPoly::constant(n, Scalar::one());
    let mut k = 0i64;
    loop {
        let mut next = MultiPoly::zero(n);
        for (i, ui) in u.iter().enumerate() {
            if !ui.is_zero() {
                next.add_scaled(ui, &deriv.derivative(i));
            }
        }
        if next.is_zero() {
            break;
        }
        k += 1;
        deriv = next.scale(&Scalar::from_int(k).inv());
        s_pow = s_pow.mul(&s);
        out = out.add(&deriv.mul(&s_pow));
    }
    out
}

/// Sum of the distinct images of `f` under coordinate permutations.
pub fn sym(f: &MultiPoly) -> Result<MultiPoly, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let n = f.n;
    if f.len() == 1 {
        let (m, c) = f.terms.iter().next().unwrap();
        let mut out = MultiPoly::zero(n);
        for e in distinct_permutations(&m.0) {
            out.add_term(Monomial(e), c.clone());
        }
        return Ok(out);
    }
    let mut seen: BTreeSet<Vec<(Monomial, String)>> = BTreeSet::new();
    let key = |p: &MultiPoly| {
        p.terms
            .iter()
            .map(|(m, c)| (m.clone(), c.to_string()))
            .collect::<Vec<_>>()
    };
    let mut queue = VecDeque::from([f.clone()]);
    seen.insert(key(f));
    let mut out = MultiPoly::zero(n);
    while let Some(p) = queue.pop_front() {
        out = out.add(&p);
        for i in 0..n.saturating_sub(1) {
            let q = swap_vars(&p, i, i + 1);
            if seen.insert(key(&q)) {
                queue.push_back(q);
            }
        }
    }
    Ok(out)
}

fn swap_vars(p: &MultiPoly, i: usize, j: usize) -> MultiPoly {
    MultiPoly::from_terms(
        p.n,
        p.terms.iter().map(|(m, c)| {
            let mut e = m.clone();
            e.0.swap(i, j);
            (e, c.clone())
        }),
    )
}

/// Distinct permutations of a multiset, in decreasing lex order.
pub fn distinct_permutations(e: &[u32]) -> Vec<Vec<u32>> {
    let mut cur: Vec<u32> = e.to_vec();
    cur.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = vec![cur.clone()];
    // previous permutation in lex order
    while let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] > cur[i]) {
        let j = (i..cur.len()).rev().find(|&j| cur[j] < cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// Shorthand for `sym(x^exps)` with unit coefficient.
pub fn sym_monomial(n: usize, exps: &[u32]) -> MultiPoly {
    let mut e = exps.to_vec();
    e.resize(n, 0);
    sym(&MultiPoly::monomial(Scalar::one(), &e)).expect("nonzero monomial")
}

pub fn laplacian(f: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::zero(f.n);
    for (m, c) in &f.terms {
        for i in 0..f.n {
            let a = m.0[i];
            if a < 2 {
                continue;
            }
            let mut d = m.clone();
            d.0[i] -= 2;
            out.add_term(d, c * &Scalar::from_int((a * (a - 1)) as i64));
        }
    }
    out
}

/// Laplacian in the variables `x_2..x_n` only.
fn laplacian_tail(f: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::zero(f.n);
    for (m, c) in &f.terms {
        for i in 1..f.n {
            let a = m.0[i];
            if a < 2 {
                continue;
            }
            let mut d = m.clone();
            d.0[i] -= 2;
            out.add_term(d, c * &Scalar::from_int((a * (a - 1)) as i64));
        }
    }
    out
}

/// Basis of the harmonic homogeneous polynomials of degree `l` in `n`
/// variables.
///
/// One element per monomial `x^a` with `a_1 <= 1`: the unique harmonic
/// polynomial `sum_k x_1^(a_1+2k) g_k` with `g_0 = x'^(a')`.
pub fn harm_basis(n: usize, l: u32) -> Vec<MultiPoly> {
    assert!(n >= 1, "need at least one variable");
    let mut out = Vec::new();
    for m in monomials(n, l) {
        let a1 = m.0[0];
        if a1 > 1 {
            continue;
        }
        let mut g = MultiPoly::term(Scalar::one(), Monomial([&[0], &m.0[1..]].concat()));
        let mut h = MultiPoly::zero(n);
        let mut k = 0u32;
        while !g.is_zero() {
            let p = a1 + 2 * k;
            let mut shift = vec![0u32; n];
            shift[0] = p;
            h = h.add(&g.mul(&MultiPoly::monomial(Scalar::one(), &shift)));
            let denom = Scalar::from_int(((p + 2) * (p + 1)) as i64);
            g = laplacian_tail(&g).scale(&(-Scalar::one() / denom));
            k += 1;
        }
        out.push(h);
    }
    out
}

/// `dim Harm_l(R^n) = C(n+l-1, l) - C(n+l-3, l-2)`.
pub fn harm_dim(n: usize, l: u32) -> usize {
    let hom = |l: i64| -> usize {
        if l < 0 {
            0
        } else {
            binomial((n as i64 + l - 1) as u64, l as u64) as usize
        }
    };
    hom(l as i64) - hom(l as i64 - 2)
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

pub fn evaluate(f: &MultiPoly, x: &[Scalar]) -> Result<Scalar, PolyError> {
    if x.len() != f.n {
        return Err(PolyError::DimensionMismatch {
            expected: f.n,
            got: x.len(),
        });
    }
    Scalar::common_extension(x.iter().chain(f.terms.values()))?;
    let mut powers: Vec<Vec<Scalar>> = x.iter().map(|v| vec![Scalar::one(), v.clone()]).collect();
    let mut acc = Scalar::zero();
    for (m, c) in &f.terms {
        let mut t = c.clone();
        for (i, &a) in m.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let pw = &mut powers[i];
            while pw.len() <= a as usize {
                let next = pw.last().unwrap() * &x[i];
                pw.push(next);
            }
            t = &t * &pw[a as usize];
        }
        acc = acc + t;
    }
    Ok(acc)
}

impl fmt::Display for MultiPoly {
    /// `c * x1^a1 ... xn^an` terms, highest graded-lex first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(i, &a)| {
                        if a == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, a)
                        }
                    })
                    .collect();
            let (neg, mag) = if c.is_negative() && c.extension().is_none() {
                (true, c.abs())
            } else {
                (false, c.clone())
            };
            let coeff = mag.to_string();
            let coeff = if coeff.contains(['+', '-']) && !vars.is_empty() {
                format!("({coeff})")
            } else {
                coeff
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if vars.is_empty() {
                write!(f, "{coeff}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join(" "))?;
            } else {
                write!(f, "{coeff} * {}", vars.join(" "))?;
            }
        }
        Ok(())
    }
}
