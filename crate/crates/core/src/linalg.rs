//! Dense linear algebra over [`Scalar`]: row reduction, kernels, solves.
//!
//! Exact inputs are reduced exactly. As soon as a float entry appears the
//! zero test switches to `|x| <= 2^(-prec/2) * max|a_ij|`.

use crate::scalar::{tolerance_from_bits, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "matrix shapes do not match");
            (0..cols)
                .map(|j| {
                    let mut acc = Scalar::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = acc + x * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, x: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|row| dot(row, x)).collect()
}

pub fn dot(x: &[Scalar], y: &[Scalar]) -> Scalar {
    assert_eq!(x.len(), y.len(), "vector lengths differ");
    let mut acc = Scalar::zero();
    for (a, b) in x.iter().zip(y) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc + a * b;
        }
    }
    acc
}

pub fn norm_sq(x: &[Scalar]) -> Scalar {
    dot(x, x)
}

/// Zero policy derived from the entries: exact, or relative to the largest
/// magnitude when floats are present.
#[derive(Clone, Debug)]
pub struct ZeroTest {
    bound: Option<Scalar>,
}

impl ZeroTest {
    pub fn exact() -> Self {
        ZeroTest { bound: None }
    }

    pub fn for_entries<'a, I: IntoIterator<Item = &'a Scalar>>(entries: I) -> Self {
        let mut prec = None;
        let mut scale = Scalar::zero();
        for x in entries {
            if let Some(p) = x.precision() {
                prec = Some(prec.map_or(p, |q: usize| q.max(p)));
            }
            let a = x.abs();
            if a > scale {
                scale = a;
            }
        }
        match prec {
            None => ZeroTest::exact(),
            Some(p) => {
                let scale = if scale.is_zero() {
                    Scalar::one()
                } else {
                    scale
                };
                ZeroTest {
                    bound: Some(tolerance_from_bits(p / 2, p) * scale),
                }
            }
        }
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        match &self.bound {
            None => x.is_zero(),
            Some(b) => x.is_zero() || x.abs() <= *b,
        }
    }
}

/// In-place reduced row echelon form. Returns the pivot columns.
pub fn rref(a: &mut Matrix) -> Vec<usize> {
    let zt = ZeroTest::for_entries(a.iter().flatten());
    rref_with(a, &zt)
}

pub fn rref_with(a: &mut Matrix, zt: &ZeroTest) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let float = zt.bound.is_some();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // exact: any nonzero pivot; float: largest magnitude
        let pick = if float {
            (r..rows)
                .filter(|&i| !zt.is_zero(&a[i][c]))
                .max_by(|&i, &j| {
                    a[i][c]
                        .abs()
                        .partial_cmp(&a[j][c].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
        } else {
            (r..rows).find(|&i| !a[i][c].is_zero())
        };
        let Some(p) = pick else {
            for row in a.iter_mut().skip(r) {
                row[c] = Scalar::zero();
            }
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv();
        for x in a[r].iter_mut().skip(c) {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        a[r][c] = Scalar::one();
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    row[j] = &row[j] - &(&f * &pivot_row[j]);
                }
            }
            row[c] = Scalar::zero();
            if float {
                for x in row.iter_mut().skip(c + 1) {
                    if zt.is_zero(x) {
                        *x = Scalar::zero();
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &Matrix) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

/// Basis of `{x : A x = 0}`, one vector per free column, with a `1` in
/// that free column.
pub fn nullspace(a: &Matrix, cols: usize) -> Vec<Vec<Scalar>> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    nullspace_from_rref(&m, &pivots, cols)
}

fn nullspace_from_rref(m: &Matrix, pivots: &[usize], cols: usize) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                if !m[r][f].is_zero() {
                    v[p] = -&m[r][f];
                }
            }
            v
        })
        .collect()
}

/// Solves `A x = b`. Returns a particular solution (free variables zero)
/// or `None` when the system is inconsistent.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            row.iter()
                .cloned()
                .chain(std::iter::once(bi.clone()))
                .collect()
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

/// Determinant by elimination.
pub fn determinant(a: &Matrix) -> Scalar {
    let n = a.len();
    let zt = ZeroTest::for_entries(a.iter().flatten());
    let mut m = a.clone();
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !zt.is_zero(&m[i][c])) else {
            return Scalar::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det = &det * &piv;
        let inv = piv.inv();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            let (top, rest) = m.split_at_mut(i);
            for (x, p) in rest[0][c..].iter_mut().zip(&top[c][c..]) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
    }
    det
}

/// `g^T g = I`, exactly or to tolerance.
pub fn is_orthogonal(g: &Matrix) -> bool {
    let n = g.len();
    if g.iter().any(|row| row.len() != n) {
        return false;
    }
    let prod = mat_mul(&transpose(g), g);
    let zt = ZeroTest::for_entries(g.iter().flatten());
    let id = identity(n);
    prod.iter()
        .flatten()
        .zip(id.iter().flatten())
        .all(|(x, y)| zt.is_zero(&(x - y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ker = nullspace(&a, 3);
        assert_eq!(ker.len(), 1);
        assert!(mat_vec(&a, &ker[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[Scalar::from_int(3), Scalar::from_int(5)]).unwrap();
        assert_eq!(x, vec![Scalar::ratio(4, 5), Scalar::ratio(7, 5)]);
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&b, &[Scalar::one(), Scalar::one()]).is_none());
    }

    #[test]
    fn determinant_over_quadratic_field() {
        let s = Scalar::sqrt_of_int(5);
        let a = vec![
            vec![s.clone(), Scalar::one()],
            vec![Scalar::one(), s.clone()],
        ];
        assert_eq!(determinant(&a), Scalar::from_int(4));
    }

    #[test]
    fn float_rank_uses_tolerance() {
        let third = Scalar::ratio(1, 3).into_float(128);
        let a = vec![
            vec![third.clone(), Scalar::one()],
            vec![Scalar::one(), &Scalar::from_int(3) * &Scalar::one()],
        ];
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn permutation_is_orthogonal() {
        let p = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]]);
        assert!(is_orthogonal(&p));
        assert!(!is_orthogonal(&m(&[&[1, 1], &[0, 1]])));
    }
}
