//! Invariant harmonic polynomials: bases from generator linear systems,
//! the Reynolds average, and the closed forms with their corner values.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::groups::{corner_vector, GroupType, ReflectionGroup};
use crate::linalg::{mat_vec, nullspace, rref, transpose, Matrix};
use crate::poly::{
    act_unchecked, evaluate, laplacian, monomials, sym_monomial, Monomial, MultiPoly,
};
use crate::scalar::{Scalar, DEFAULT_PRECISION};

/// Largest group order the Reynolds operator will enumerate.
pub const REYNOLDS_ORDER_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(
        "invariant space of degree {l} has dimension {got}, Molien series predicts {expected}"
    )]
    MolienMismatch { l: u32, expected: u64, got: usize },
    #[error("group order {0} exceeds the Reynolds cap")]
    OrderCap(u128),
    #[error("no closed form `{label}` for {ty}{n}")]
    UnknownClosedForm {
        ty: GroupType,
        n: usize,
        label: String,
    },
    #[error("no corner value `{label}` for {ty}{n}, k = {k}")]
    UnknownCornerValue {
        ty: GroupType,
        n: usize,
        k: usize,
        label: String,
    },
}

#[derive(Debug, Clone)]
pub struct InvariantBasis {
    pub ty: GroupType,
    pub n: usize,
    pub degree: u32,
    pub polys: Vec<MultiPoly>,
}

/// A coordinate permutation with signs: `x_i -> sign_i * x_{perm_i}`.
struct SignedPerm {
    perm: Vec<usize>,
    negate: Vec<bool>,
}

impl SignedPerm {
    fn from_matrix(g: &Matrix) -> Self {
        // act(g, x_i) = sum_j g[j][i] x_j
        let n = g.len();
        let mut perm = vec![0; n];
        let mut negate = vec![false; n];
        for i in 0..n {
            let j = (0..n)
                .find(|&j| !g[j][i].is_zero())
                .expect("monomial matrix");
            perm[i] = j;
            negate[i] = g[j][i].is_negative();
        }
        SignedPerm { perm, negate }
    }

    fn apply(&self, e: &[u32]) -> (Vec<u32>, bool) {
        let mut out = vec![0; e.len()];
        let mut neg = false;
        for (i, &a) in e.iter().enumerate() {
            out[self.perm[i]] += a;
            if self.negate[i] && a % 2 == 1 {
                neg = !neg;
            }
        }
        (out, neg)
    }
}

/// Signed orbit sum of a monomial under the subgroup generated by the
/// monomial generators.
#[derive(Clone, Debug)]
struct OrbitSum {
    rep: Monomial,
    poly: MultiPoly,
    /// Sorted exponents when the sum is the full monomial symmetric function.
    partition: Option<Vec<u32>>,
}

/// All nonvanishing orbit sums of degree `l`, ordered by decreasing
/// representative.
fn orbit_sums(n: usize, l: u32, gens: &[SignedPerm]) -> Vec<OrbitSum> {
    let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
    let mut out = Vec::new();
    for m in monomials(n, l) {
        if seen.contains_key(&m.0) {
            continue;
        }
        let mut signs: BTreeMap<Vec<u32>, bool> = BTreeMap::new();
        signs.insert(m.0.clone(), false);
        let mut stack = vec![(m.0.clone(), false)];
        let mut conflict = false;
        while let Some((e, s)) = stack.pop() {
            for g in gens {
                let (f, t) = g.apply(&e);
                let t = t ^ s;
                match signs.get(&f) {
                    Some(&prev) => conflict |= prev != t,
                    None => {
                        signs.insert(f.clone(), t);
                        stack.push((f, t));
                    }
                }
            }
        }
        for e in signs.keys() {
            seen.insert(e.clone(), ());
        }
        if conflict {
            continue;
        }
        let rep = signs.keys().map(|e| Monomial(e.clone())).max().unwrap();
        let all_positive = signs.values().all(|s| !s);
        let mut sorted = m.0.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let full = all_positive && signs.len() == crate::poly::distinct_permutations(&sorted).len();
        let poly = MultiPoly::from_terms(
            n,
            signs.into_iter().map(|(e, s)| {
                (
                    Monomial(e),
                    if s {
                        Scalar::from_int(-1)
                    } else {
                        Scalar::one()
                    },
                )
            }),
        );
        out.push(OrbitSum {
            rep,
            poly,
            partition: full.then_some(sorted),
        });
    }
    out.sort_by(|a, b| b.rep.cmp(&a.rep));
    out
}

/// Monomial symmetric function `m_lambda(x)` by dynamic programming over
/// the parts still to be placed.
pub fn monomial_symmetric_eval(partition: &[u32], x: &[Scalar]) -> Scalar {
    let mut parts: Vec<(u32, usize)> = Vec::new();
    for &p in partition.iter().filter(|&&p| p > 0) {
        match parts.iter_mut().find(|(q, _)| *q == p) {
            Some(e) => e.1 += 1,
            None => parts.push((p, 1)),
        }
    }
    let mut states: HashMap<Vec<usize>, Scalar> = HashMap::new();
    states.insert(parts.iter().map(|p| p.1).collect(), Scalar::one());
    for xi in x {
        let mut next: HashMap<Vec<usize>, Scalar> = HashMap::new();
        let pows: Vec<Scalar> = parts.iter().map(|(p, _)| xi.pow(*p)).collect();
        for (state, val) in &states {
            let e = next.entry(state.clone()).or_insert_with(Scalar::zero);
            *e = &*e + val;
            for (j, c) in state.iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                let mut s = state.clone();
                s[j] -= 1;
                let add = val * &pows[j];
                let e = next.entry(s).or_insert_with(Scalar::zero);
                *e = &*e + &add;
            }
        }
        states = next;
    }
    states
        .remove(&vec![0; parts.len()])
        .unwrap_or_else(Scalar::zero)
}

impl OrbitSum {
    fn eval(&self, x: &[Scalar]) -> Scalar {
        match &self.partition {
            Some(p) => monomial_symmetric_eval(p, x),
            None => evaluate(&self.poly, x).expect("compatible point"),
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|_| Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=7)))
        .collect()
}

/// Basis of the `G`-invariant harmonic polynomials of degree `l`.
///
/// Works on signed orbit sums of the monomial generators, imposes the
/// Laplacian exactly and every remaining (dense) generator by evaluation at
/// random rational points. The evaluation kernel contains the true kernel,
/// so agreement with the Molien coefficient certifies the result.
pub fn invariant_harm_basis(g: &ReflectionGroup, l: u32) -> Result<InvariantBasis, InvariantError> {
    let n = g.n;
    let expected = crate::groups::molien_dims(g, l as usize)[l as usize];
    let (mono, dense): (Vec<&Matrix>, Vec<&Matrix>) = g
        .generators
        .iter()
        .partition(|m| ReflectionGroup::is_monomial(m));
    let perms: Vec<SignedPerm> = mono.iter().map(|m| SignedPerm::from_matrix(m)).collect();
    let cols = orbit_sums(n, l, &perms);
    let mut rows: Matrix = Vec::new();
    if l >= 2 && !cols.is_empty() {
        let reps: Vec<Monomial> = orbit_sums(n, l - 2, &perms)
            .into_iter()
            .map(|o| o.rep)
            .collect();
        let laps: Vec<MultiPoly> = cols.iter().map(|o| laplacian(&o.poly)).collect();
        for r in &reps {
            rows.push(laps.iter().map(|p| p.coeff(r)).collect());
        }
    }
    let mut kernel = nullspace(&rows, cols.len());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (n as u64) << 8 ^ l as u64);
    let dense_t: Vec<Matrix> = dense.iter().map(|m| transpose(m)).collect();
    let mut rounds = 0;
    while !dense_t.is_empty() && kernel.len() as u64 > expected && rounds < 8 {
        let points = kernel.len() - expected as usize + 2 + rounds;
        for _ in 0..points {
            let p = random_point(&mut rng, n);
            let base: Vec<Scalar> = cols.iter().map(|o| o.eval(&p)).collect();
            for gt in &dense_t {
                let q = mat_vec(gt, &p);
                rows.push(
                    cols.iter()
                        .zip(&base)
                        .map(|(o, b)| &o.eval(&q) - b)
                        .collect(),
                );
            }
        }
        kernel = nullspace(&rows, cols.len());
        rounds += 1;
    }
    if kernel.len() as u64 != expected {
        return Err(InvariantError::MolienMismatch {
            l,
            expected,
            got: kernel.len(),
        });
    }
    // canonical form: reduced echelon over decreasing representatives
    rref(&mut kernel);
    let polys = kernel
        .iter()
        .map(|v| {
            let mut p = MultiPoly::zero(n);
            for (c, o) in v.iter().zip(&cols) {
                p.add_scaled(c, &o.poly);
            }
            p
        })
        .collect();
    Ok(InvariantBasis {
        ty: g.ty,
        n,
        degree: l,
        polys,
    })
}

type BasisKey = (GroupType, usize, u32);

/// Process-wide memo of [`invariant_harm_basis`], keyed by type, rank and degree.
pub fn cached_invariant_basis(
    g: &ReflectionGroup,
    l: u32,
) -> Result<Arc<Vec<MultiPoly>>, InvariantError> {
    static CACHE: OnceLock<Mutex<HashMap<BasisKey, Arc<Vec<MultiPoly>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (g.ty, g.n, l);
    if let Some(b) = cache.lock().expect("basis cache").get(&key) {
        return Ok(b.clone());
    }
    let basis = Arc::new(invariant_harm_basis(g, l)?.polys);
    cache
        .lock()
        .expect("basis cache")
        .insert(key, basis.clone());
    Ok(basis)
}

/// Average of `f` over every element of `G`.
pub fn reynolds(g: &ReflectionGroup, f: &MultiPoly) -> Result<MultiPoly, InvariantError> {
    let elems = g
        .elements(REYNOLDS_ORDER_CAP)
        .map_err(|_| InvariantError::OrderCap(g.order))?;
    let mut acc = MultiPoly::zero(f.nvars());
    for m in &elems {
        acc = acc.add(&act_unchecked(m, f));
    }
    Ok(acc.scale(&Scalar::from_int(elems.len() as i64).inv()))
}

/// `act(g, f) - f` for every generator; all zero iff `f` is invariant.
pub fn generator_residuals(g: &ReflectionGroup, f: &MultiPoly) -> Vec<MultiPoly> {
    g.generators
        .iter()
        .map(|m| act_unchecked(m, f).sub(f))
        .collect()
}

fn sym(n: usize, e: &[u32]) -> MultiPoly {
    sym_monomial(n, e)
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn frac(a: Scalar, b: i64) -> Scalar {
    a / Scalar::from_int(b)
}

/// Linear combination `sum c_i p_i`.
fn combo(n: usize, parts: &[(Scalar, MultiPoly)]) -> MultiPoly {
    let mut out = MultiPoly::zero(n);
    for (c, p) in parts {
        out.add_scaled(c, p);
    }
    out
}

fn a_h4(n: usize, i: usize) -> Option<MultiPoly> {
    let ni = n as i64;
    match i {
        // harmonic only with 6/(n-1); the printed 6/(n-2) leaves 12(n-1)/(n-2) - 12 times sym(x_1^2)
        1 if n >= 3 => Some(combo(
            n,
            &[
                (int(1), sym(n, &[4])),
                (Scalar::ratio(-6, ni - 1), sym(n, &[2, 2])),
            ],
        )),
        2 if n >= 4 => Some(sym(n, &[1, 1, 1, 1])),
        3 if n >= 3 => Some(combo(
            n,
            &[
                (int(1), sym(n, &[1, 3])),
                (Scalar::ratio(-6, ni - 2), sym(n, &[1, 1, 2])),
            ],
        )),
        _ => None,
    }
}

fn a_h5(n: usize, i: usize) -> Option<MultiPoly> {
    let ni = n as i64;
    match i {
        1 if n >= 3 => Some(combo(
            n,
            &[
                (int(1), sym(n, &[5])),
                (Scalar::ratio(-10, ni - 1), sym(n, &[2, 3])),
                (Scalar::ratio(30, (ni - 1) * (ni - 2)), sym(n, &[1, 2, 2])),
            ],
        )),
        2 if n >= 2 => Some(combo(
            n,
            &[
                (int(1), sym(n, &[5])),
                (Scalar::ratio(-10, ni - 1), sym(n, &[2, 3])),
                (Scalar::ratio(5, ni - 1), sym(n, &[1, 4])),
            ],
        )),
        3 if n >= 4 => Some(combo(
            n,
            &[
                (int(1), sym(n, &[1, 1, 3])),
                (Scalar::ratio(-9, ni - 3), sym(n, &[1, 1, 1, 2])),
            ],
        )),
        4 if n >= 5 => Some(sym(n, &[1, 1, 1, 1, 1])),
        _ => None,
    }
}

/// The closed-form invariants listed for each group.
///
/// Labels: `f3`, `f4`, `f5`, `f6`, `f8`, `f4_2`, `f6_2`, `obstruction6`,
/// `h4_1..h4_3`, `h5_1..h5_4`.
pub fn closed_form_invariant(
    ty: GroupType,
    n: usize,
    label: &str,
) -> Result<MultiPoly, InvariantError> {
    let unknown = || InvariantError::UnknownClosedForm {
        ty,
        n,
        label: label.to_string(),
    };
    if n < ty.min_rank() {
        return Err(unknown());
    }
    let ni = n as i64;
    let s = Scalar::sqrt_of_int(n as u64 + 1);
    let b_f4 = || {
        combo(
            n,
            &[
                (int(1), sym(n, &[4])),
                (Scalar::ratio(-6, ni - 1), sym(n, &[2, 2])),
            ],
        )
    };
    let b_f6 = || {
        combo(
            n,
            &[
                (int(1), sym(n, &[6])),
                (Scalar::ratio(-15, ni - 1), sym(n, &[2, 4])),
                (Scalar::ratio(180, (ni - 1) * (ni - 2)), sym(n, &[2, 2, 2])),
            ],
        )
    };
    let f8 = || {
        combo(
            n,
            &[
                (int(1), sym(n, &[8])),
                (Scalar::ratio(-28, ni - 1), sym(n, &[2, 6])),
                (Scalar::ratio(70, ni - 1), sym(n, &[4, 4])),
            ],
        )
    };
    let poly = match (ty, label) {
        (GroupType::A, "f3") if n == 2 => combo(
            2,
            &[
                (int(1), MultiPoly::monomial(int(1), &[3, 0])),
                (int(-3), MultiPoly::monomial(int(1), &[2, 1])),
                (int(-3), MultiPoly::monomial(int(1), &[1, 2])),
                (int(1), MultiPoly::monomial(int(1), &[0, 3])),
            ],
        ),
        (GroupType::A, "f3") if n == 3 => combo(
            3,
            &[
                (int(1), sym(3, &[3])),
                (Scalar::ratio(-3, 2), sym(3, &[1, 2])),
                (Scalar::ratio(-3, 4), sym(3, &[1, 1, 1])),
            ],
        ),
        (GroupType::A, "f3") => combo(
            n,
            &[
                (int(1), sym(n, &[3])),
                (Scalar::ratio(-3, ni - 1), sym(n, &[1, 2])),
                (
                    frac(&int(6) * &(&int(2) - &s), (ni - 1) * (ni - 3)),
                    sym(n, &[1, 1, 1]),
                ),
            ],
        ),
        (GroupType::A, "f4") if n == 3 => combo(
            3,
            &[
                (int(1), a_h4(3, 1).unwrap()),
                (Scalar::ratio(-20, 13), a_h4(3, 3).unwrap()),
            ],
        ),
        (GroupType::A, "f4") if n >= 4 => {
            let d = ni * ni * ni - 2 * ni * ni - 15 * ni - 16;
            let c2 = frac(
                &int(24 * (ni + 2)) * &(&int(ni * ni - 5 * ni - 12) + &(&int(4) * &s)),
                (ni - 1) * (ni - 2) * d,
            );
            let c3 = -frac(
                &int(4 * (ni + 2)) * &(&int(ni * ni - 2 * ni - 7) - &(&int(ni - 1) * &s)),
                (ni - 1) * d,
            );
            combo(
                n,
                &[
                    (int(1), a_h4(n, 1).unwrap()),
                    (c2, a_h4(n, 2).unwrap()),
                    (c3, a_h4(n, 3).unwrap()),
                ],
            )
        }
        (GroupType::A, "f5") if n == 4 => {
            let c2 = frac(&int(17) - &(&int(20) * &s), 58);
            let c3 = frac(&int(10) * &(&int(18) + &s), 87);
            combo(
                4,
                &[
                    (int(1), a_h5(4, 1).unwrap()),
                    (c2, a_h5(4, 2).unwrap()),
                    (c3, a_h5(4, 3).unwrap()),
                ],
            )
        }
        (GroupType::A, "f5") if n >= 5 => {
            let d = 4 * ni.pow(3) + 3 * ni * ni - 60 * ni - 180;
            let c2 = -frac(
                &int(2 * ni.pow(3) + 5 * ni * ni - 21 * ni - 90) - &(&int(ni * (ni + 6)) * &s),
                d,
            );
            let c3 = frac(
                &int(20)
                    * &(&int(2 * ni.pow(3) + 6 * ni * ni - 32 * ni - 168)
                        + &(&int(ni * ni - 8 * ni + 12) * &s)),
                (ni - 1) * (ni - 2) * d,
            );
            let c4 = -frac(
                &int(120 * (ni + 6))
                    * &(&int(ni * ni - 11 * ni - 78) + &(&int(2 * ni * ni - 2 * ni + 12) * &s)),
                (ni - 1) * (ni - 2) * (ni - 3) * d,
            );
            combo(
                n,
                &[
                    (int(1), a_h5(n, 1).unwrap()),
                    (c2, a_h5(n, 2).unwrap()),
                    (c3, a_h5(n, 3).unwrap()),
                    (c4, a_h5(n, 4).unwrap()),
                ],
            )
        }
        (GroupType::A, "obstruction6") => combo(
            n,
            &[
                (int(1), sym(n, &[1, 5])),
                (Scalar::ratio(-10, 3), sym(n, &[3, 3])),
            ],
        ),
        (GroupType::A, l) if l.starts_with("h4_") => {
            a_h4(n, l[3..].parse().map_err(|_| unknown())?).ok_or_else(unknown)?
        }
        (GroupType::A, l) if l.starts_with("h5_") => {
            a_h5(n, l[3..].parse().map_err(|_| unknown())?).ok_or_else(unknown)?
        }
        (GroupType::B | GroupType::D, "f4") => b_f4(),
        (GroupType::B | GroupType::D, "f6") if n >= 3 => b_f6(),
        (GroupType::B | GroupType::D, "f8") => f8(),
        (GroupType::D, "f4_2") if n == 4 => sym(4, &[1, 1, 1, 1]),
        (GroupType::D, "f5") if n == 5 => sym(5, &[1, 1, 1, 1, 1]),
        (GroupType::D, "f6_2") if n == 6 => sym(6, &[1, 1, 1, 1, 1, 1]),
        _ => return Err(unknown()),
    };
    Ok(poly)
}

/// Labels with a closed form for the given group.
pub fn closed_form_labels(ty: GroupType, n: usize) -> Vec<&'static str> {
    let all = [
        "f3",
        "f4",
        "f5",
        "f6",
        "f8",
        "f4_2",
        "f6_2",
        "obstruction6",
        "h4_1",
        "h4_2",
        "h4_3",
        "h5_1",
        "h5_2",
        "h5_3",
        "h5_4",
    ];
    all.into_iter()
        .filter(|l| closed_form_invariant(ty, n, l).is_ok())
        .collect()
}

fn sqrt_f(x: &Scalar) -> Scalar {
    x.sqrt(DEFAULT_PRECISION)
        .expect("nonnegative")
        .into_float(DEFAULT_PRECISION)
}

/// `(n + 2 + 2 sqrt(n+1))^(e/2)`, which equals `(1 + sqrt(n+1))^e`.
fn a_scale_pow(n: usize, e: u32) -> Scalar {
    (&Scalar::one() + &Scalar::sqrt_of_int(n as u64 + 1)).pow(e)
}

/// `phi_3`, `phi_4`, `phi_5` of the `A_n` corner-value formulas.
pub fn a_phi(n: usize, degree: u32) -> Option<Scalar> {
    let ni = n as i64;
    let s = Scalar::sqrt_of_int(n as u64 + 1);
    match degree {
        3 if n == 2 || n >= 4 => {
            let num = &int(2)
                * &(&int(ni.pow(3) + 3 * ni * ni - 12 * ni - 16)
                    + &(&int(3 * ni * ni - 4 * ni - 16) * &s));
            Some(num / (&int((ni - 1) * (ni - 3)) * &a_scale_pow(n, 3)))
        }
        4 if n >= 3 => {
            let num = &int(6 * (ni + 1))
                * &(&int(ni.pow(5) + 7 * ni.pow(4)
                    - 24 * ni.pow(3)
                    - 160 * ni * ni
                    - 256 * ni
                    - 128)
                    + &(&int(4 * (ni.pow(4) - 20 * ni * ni - 48 * ni - 32)) * &s));
            let den = &int((ni - 1) * (ni - 2) * (ni.pow(3) - 2 * ni * ni - 15 * ni - 16))
                * &a_scale_pow(n, 4);
            Some(num / den)
        }
        5 if n >= 4 => {
            let d = (ni - 1) * (ni - 2) * (ni - 3) * (4 * ni.pow(3) + 3 * ni * ni - 60 * ni - 180);
            let p1 = int(2 * ni.pow(6) + 31 * ni.pow(5) + 50 * ni.pow(4)
                - 448 * ni.pow(3)
                - 2144 * ni * ni
                - 3200 * ni
                - 1536);
            let p2 = int(11 * ni.pow(5) + 50 * ni.pow(4)
                - 96 * ni.pow(3)
                - 1120 * ni * ni
                - 2432 * ni
                - 1536);
            let num = &int(24 * (ni + 1)) * &(&p1 + &(&p2 * &s));
            Some(num / (&int(d) * &a_scale_pow(n, 5)))
        }
        _ => None,
    }
}

/// The `A_n` degree-6 obstruction in factored form: returns `(g_1, F)`
/// with `sum_{x in v_k^G} f(x) = g_1 * F`.
pub fn a_obstruction_factors(n: usize, k: usize) -> (Scalar, Scalar) {
    let ni = n as i64;
    let ki = k as i64;
    let s = Scalar::sqrt_of_int(n as u64 + 1);
    let g1 =
        &Scalar::from_bigint((crate::poly::binomial(n as u64 - 1, k as u64 - 1) as i64).into())
            * &(Scalar::ratio(ni * (ni + 1), 3 * ki.pow(3) * (ni + 1 - ki).pow(3))
                / a_scale_pow(n, 6));
    let g2 = &int(5) * &(&int(ni * ni + 11 * ni + 12) + &(&int(6 * ni + 12) * &s));
    let g3 = &int((ni + 1).pow(2) * (ni + 2))
        * &(&int(2 * ni * ni + 28 * ni + 30) + &(&int(15 * ni + 30) * &s));
    let big_f =
        &(&int(ki * (ki - ni - 1) * (4 * ki * ki - 4 * (ni + 1) * ki + ni * ni + 5 * ni + 4))
            * &g2)
            + &g3;
    (g1, big_f)
}

/// Closed-form value of an invariant at the unit corner vector `v_k`.
///
/// Exact for `B_n` and `D_n`. For `A_n` the radicals `sqrt(k(n+1-k))` and
/// `sqrt(3(n^2-1))` leave the field, so values are floats; the `n = 3`
/// degree-3 entries are the stated-scale fixtures `729/4, 0, -729/4`.
/// `obstruction6` returns the orbit sum `g_1 F(k)`.
pub fn corner_value(
    ty: GroupType,
    n: usize,
    k: usize,
    label: &str,
) -> Result<Scalar, InvariantError> {
    let unknown = || InvariantError::UnknownCornerValue {
        ty,
        n,
        k,
        label: label.to_string(),
    };
    if n < ty.min_rank() || k == 0 || k > n {
        return Err(unknown());
    }
    let (ni, ki) = (n as i64, k as i64);
    let top = k + 2 > n;
    let value = match (ty, label) {
        (GroupType::B, "f4") => {
            Scalar::ratio(1, ki) * (&int(1) - &Scalar::ratio(3 * (ki - 1), ni - 1))
        }
        (GroupType::D, "f4") if !top => {
            Scalar::ratio(1, ki) * (&int(1) - &Scalar::ratio(3 * (ki - 1), ni - 1))
        }
        (GroupType::D, "f4") => Scalar::ratio(-2, ni),
        (GroupType::B, "f6") if n >= 3 => b_f6_value(ni, ki),
        (GroupType::D, "f6") if !top => b_f6_value(ni, ki),
        (GroupType::D, "f6") => Scalar::ratio(16, ni * ni),
        (GroupType::B, "f8") => {
            Scalar::ratio(1, ki.pow(3)) * (&int(1) + &Scalar::ratio(7 * (ki - 1), ni - 1))
        }
        (GroupType::D, "f8") if !top => {
            Scalar::ratio(1, ki.pow(3)) * (&int(1) + &Scalar::ratio(7 * (ki - 1), ni - 1))
        }
        (GroupType::D, "f8") => Scalar::ratio(8, ni.pow(3)),
        (GroupType::D, "f4_2") if n == 4 => {
            [int(0), int(0), Scalar::ratio(-1, 16), Scalar::ratio(1, 16)][k - 1].clone()
        }
        (GroupType::D, "f5") if n == 5 => {
            let c = (&int(25) * &Scalar::sqrt_of_int(5)).inv();
            match k {
                4 => -c,
                5 => c,
                _ => int(0),
            }
        }
        (GroupType::D, "f6_2") if n == 6 => match k {
            5 => Scalar::ratio(-1, 216),
            6 => Scalar::ratio(1, 216),
            _ => int(0),
        },
        (GroupType::A, "f3") if n == 3 => {
            [Scalar::ratio(729, 4), int(0), Scalar::ratio(-729, 4)][k - 1].clone()
        }
        (GroupType::A, "f3") => {
            let phi = a_phi(n, 3).ok_or_else(unknown)?;
            let num = -Scalar::ratio(2 * ki - ni - 1, 2);
            if num.is_zero() {
                int(0)
            } else {
                &(&num * &phi).into_float(DEFAULT_PRECISION) / &sqrt_f(&int(ki * (ni + 1 - ki)))
            }
        }
        (GroupType::A, "f4") => {
            let phi = a_phi(n, 4).ok_or_else(unknown)?;
            // (k - alpha)(k - beta) = (k - (n+1)/2)^2 - (n^2-1)/12
            let c = Scalar::ratio(2 * ki - ni - 1, 2);
            let prod = &(&c * &c) - &Scalar::ratio(ni * ni - 1, 12);
            (&prod * &phi) / int(ki * (ni + 1 - ki))
        }
        (GroupType::A, "f5") => {
            let phi = a_phi(n, 5).ok_or_else(unknown)?;
            let c = Scalar::ratio(2 * ki - ni - 1, 2);
            // (k - alpha')(k - beta') = c^2 - (n+1)(2n-3)/12
            let prod = &(&c * &c) - &Scalar::ratio((ni + 1) * (2 * ni - 3), 12);
            let num = -(&(&c * &prod) * &phi);
            if num.is_zero() {
                int(0)
            } else {
                let kk = int(ki * (ni + 1 - ki));
                &num.into_float(DEFAULT_PRECISION) / &(&sqrt_f(&kk) * &kk)
            }
        }
        (GroupType::A, "obstruction6") => {
            let (g1, f) = a_obstruction_factors(n, k);
            &g1 * &f
        }
        _ => return Err(unknown()),
    };
    Ok(value)
}

fn b_f6_value(ni: i64, ki: i64) -> Scalar {
    Scalar::ratio(1, ki * ki)
        * (&(&int(1) - &Scalar::ratio(15 * (ki - 1), ni - 1))
            + &Scalar::ratio(30 * (ki - 1) * (ki - 2), (ni - 1) * (ni - 2)))
}

/// Evaluates `f` at the unit corner vector `v_k` through the scaled vector:
/// `f(v_k) = f(scaled) / norm_sq^(deg/2)`.
pub fn evaluate_at_corner(f: &MultiPoly, ty: GroupType, k: usize) -> Scalar {
    let v = corner_vector(ty, f.nvars(), k).expect("valid corner");
    let deg = f.degree().unwrap_or(0);
    let raw = evaluate(f, &v.scaled).expect("compatible scalars");
    let half = v.norm_sq.pow(deg / 2);
    let even = &raw / &half;
    if deg.is_multiple_of(2) {
        return even;
    }
    match v.norm_sq.sqrt_exact() {
        Some(r) if Scalar::common_extension([&even, &r]).is_ok() => &even / &r,
        _ => &even.into_float(DEFAULT_PRECISION) / &sqrt_f(&v.norm_sq),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_group;
    use crate::poly::{act, harm_basis};

    #[test]
    fn basis_examples() {
        let b2 = build_group(GroupType::B, 2).unwrap();
        assert!(invariant_harm_basis(&b2, 6).unwrap().polys.is_empty());
        let d4 = build_group(GroupType::D, 4).unwrap();
        assert_eq!(invariant_harm_basis(&d4, 4).unwrap().polys.len(), 2);
        let a2 = build_group(GroupType::A, 2).unwrap();
        let basis = invariant_harm_basis(&a2, 3).unwrap();
        assert_eq!(basis.polys.len(), 1);
        assert_eq!(
            basis.polys[0],
            closed_form_invariant(GroupType::A, 2, "f3").unwrap()
        );
    }

    #[test]
    fn basis_elements_are_harmonic_and_invariant() {
        for (ty, n) in [
            (GroupType::A, 3),
            (GroupType::A, 4),
            (GroupType::B, 3),
            (GroupType::D, 4),
            (GroupType::D, 5),
        ] {
            let g = build_group(ty, n).unwrap();
            for l in 0..=6 {
                for p in invariant_harm_basis(&g, l).unwrap().polys {
                    assert!(laplacian(&p).is_zero());
                    for m in &g.generators {
                        assert_eq!(act(m, &p).unwrap(), p, "{ty}{n} l={l}");
                    }
                    let lead = p.leading().unwrap().1;
                    assert!(lead.is_one());
                }
            }
        }
    }

    #[test]
    fn basis_counts_match_molien_small() {
        for (ty, n) in [
            (GroupType::A, 2),
            (GroupType::A, 5),
            (GroupType::B, 4),
            (GroupType::D, 6),
        ] {
            let g = build_group(ty, n).unwrap();
            let q = crate::groups::molien_dims(&g, 8);
            for l in 0..=8u32 {
                assert_eq!(
                    invariant_harm_basis(&g, l).unwrap().polys.len() as u64,
                    q[l as usize]
                );
            }
        }
    }

    #[test]
    fn monomial_symmetric_dp_matches_expansion() {
        let x: Vec<Scalar> = [2, -1, 3, 5].iter().map(|&v| Scalar::ratio(v, 3)).collect();
        for part in [
            vec![3],
            vec![2, 1],
            vec![1, 1, 1],
            vec![4, 2, 2],
            vec![1, 1, 1, 1],
        ] {
            let p = sym_monomial(4, &part);
            assert_eq!(
                monomial_symmetric_eval(&part, &x),
                evaluate(&p, &x).unwrap()
            );
        }
    }

    #[test]
    fn reynolds_examples() {
        let b2 = build_group(GroupType::B, 2).unwrap();
        let f = MultiPoly::monomial(int(1), &[4, 0]);
        let expect = MultiPoly::monomial(Scalar::ratio(1, 2), &[4, 0])
            .add(&MultiPoly::monomial(Scalar::ratio(1, 2), &[0, 4]));
        assert_eq!(reynolds(&b2, &f).unwrap(), expect);
        let inv = closed_form_invariant(GroupType::B, 2, "f4").unwrap();
        assert_eq!(reynolds(&b2, &inv).unwrap(), inv);
        let odd = MultiPoly::monomial(int(1), &[2, 1]);
        assert!(reynolds(&b2, &odd).unwrap().is_zero());
    }

    #[test]
    fn reynolds_lands_in_invariant_span() {
        // project harmonic polynomials and compare ranks
        for (ty, n, l) in [
            (GroupType::A, 3, 4),
            (GroupType::B, 3, 6),
            (GroupType::D, 4, 4),
        ] {
            let g = build_group(ty, n).unwrap();
            let basis = invariant_harm_basis(&g, l).unwrap().polys;
            let mons = monomials(n, l);
            for h in harm_basis(n, l).iter().take(4) {
                let r = reynolds(&g, h).unwrap();
                let mut rows: Matrix = basis
                    .iter()
                    .map(|p| mons.iter().map(|m| p.coeff(m)).collect())
                    .collect();
                let before = crate::linalg::rank(&rows);
                rows.push(mons.iter().map(|m| r.coeff(m)).collect());
                assert_eq!(crate::linalg::rank(&rows), before);
            }
        }
    }

    #[test]
    fn reynolds_order_cap() {
        let g = build_group(GroupType::B, 9).unwrap();
        assert!(matches!(
            reynolds(&g, &MultiPoly::var(9, 0)),
            Err(InvariantError::OrderCap(_))
        ));
    }

    #[test]
    fn closed_form_examples() {
        let f = closed_form_invariant(GroupType::B, 5, "f4").unwrap();
        let expect =
            sym_monomial(5, &[4]).add(&sym_monomial(5, &[2, 2]).scale(&Scalar::ratio(-6, 4)));
        assert_eq!(f, expect);
        let f = closed_form_invariant(GroupType::A, 3, "f4").unwrap();
        assert_eq!(
            f,
            a_h4(3, 1)
                .unwrap()
                .add(&a_h4(3, 3).unwrap().scale(&Scalar::ratio(-20, 13)))
        );
        assert!(!closed_form_invariant(GroupType::A, 4, "f5")
            .unwrap()
            .is_empty());
        assert!(closed_form_invariant(GroupType::D, 5, "f4_2").is_err());
        assert!(closed_form_invariant(GroupType::B, 3, "nonsense").is_err());
    }

    #[test]
    fn corner_value_examples() {
        assert_eq!(
            corner_value(GroupType::B, 3, 2, "f4").unwrap(),
            Scalar::ratio(-1, 4)
        );
        assert_eq!(
            corner_value(GroupType::D, 4, 3, "f4_2").unwrap(),
            Scalar::ratio(-1, 16)
        );
        for n in 4..=9 {
            assert_eq!(
                corner_value(GroupType::D, n, n, "f8").unwrap(),
                Scalar::ratio(8, (n as i64).pow(3))
            );
        }
    }

    #[test]
    fn b_and_d_corner_values_match_evaluation() {
        for (ty, n) in [
            (GroupType::B, 3),
            (GroupType::B, 6),
            (GroupType::D, 4),
            (GroupType::D, 5),
            (GroupType::D, 6),
        ] {
            for label in closed_form_labels(ty, n) {
                let f = closed_form_invariant(ty, n, label).unwrap();
                for k in 1..=n {
                    assert_eq!(
                        evaluate_at_corner(&f, ty, k),
                        corner_value(ty, n, k, label).unwrap(),
                        "{ty}{n} {label} k={k}"
                    );
                }
            }
        }
    }
}
