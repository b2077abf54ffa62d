//! The published tight designs from `X(A_n, J)`, `X(B_n, J)`, `X(D_n, J)`
//! as concrete instances, with free radii sampled so coordinates stay exact.
//!
//! Weight cells written with `r_2` where another radius is the free one are
//! read with that radius. The `A_3` three-orbit row carries `w_2 = 8/(9 r_2^4)`:
//! the printed `9/(8 r_2^4)` is the weight of the `B_3` row with the roles of
//! cube and octahedron swapped.

use serde::Serialize;

use super::{
    is_tight, strength_direct, strength_full, strength_invariant, CornerShell, DesignError,
    WeightedDesign,
};
use crate::groups::{GroupType, ReflectionGroup};
use crate::scalar::Scalar;

/// Ranks used for rows valid in every rank.
pub const ANY_RANK: std::ops::RangeInclusive<usize> = 2..=8;

#[derive(Debug, Clone, Serialize)]
pub struct TableInstance {
    pub table: u8,
    pub ty: GroupType,
    pub n: usize,
    pub t: u32,
    /// Number of distinct radii.
    pub spheres: usize,
    pub j: Vec<usize>,
    /// Free parameter `q` of the row, if any.
    pub parameter: Option<Scalar>,
    pub shells: Vec<CornerShell>,
}

impl TableInstance {
    pub fn label(&self) -> String {
        let j: Vec<String> = self.j.iter().map(usize::to_string).collect();
        let mut s = format!(
            "table {} {}{} t={} J={{{}}}",
            self.table,
            self.ty,
            self.n,
            self.t,
            j.join(",")
        );
        if let Some(q) = &self.parameter {
            s.push_str(&format!(" q={q}"));
        }
        s
    }
}

fn q(a: i64, b: i64) -> Scalar {
    Scalar::ratio(a, b)
}

fn one() -> Scalar {
    Scalar::one()
}

fn shell(k: usize, r2: Scalar, w: Scalar) -> CornerShell {
    CornerShell::new(k, r2, w)
}

/// Default samples of the free parameter for each one-parameter row.
pub fn default_parameters(table: u8) -> Vec<Scalar> {
    match table {
        // the B_3 three-sphere row needs 5q^2 - 1 to be a square
        2 => vec![q(1, 1), q(1, 2), q(5, 11)],
        _ => vec![q(1, 2), q(2, 1), q(3, 2)],
    }
}

struct Builder {
    table: u8,
    ty: GroupType,
    out: Vec<TableInstance>,
}

impl Builder {
    fn row(
        &mut self,
        n: usize,
        t: u32,
        spheres: usize,
        parameter: Option<Scalar>,
        shells: Vec<CornerShell>,
    ) {
        let j = shells.iter().map(|s| s.k).collect();
        self.out.push(TableInstance {
            table: self.table,
            ty: self.ty,
            n,
            t,
            spheres,
            j,
            parameter,
            shells,
        });
    }

    fn unit(&mut self, n: usize, t: u32, ks: &[usize]) {
        let shells = ks.iter().map(|&k| shell(k, one(), one())).collect();
        self.row(n, t, 1, None, shells);
    }
}

/// Instances of every row of table `1` (`A_n`), `2` (`B_n`) or `3` (`D_n`).
/// Free-parameter rows are sampled at `params`, or at the defaults.
pub fn table_instances(table: u8, params: Option<&[Scalar]>) -> Vec<TableInstance> {
    let defaults = default_parameters(table);
    let params = params.unwrap_or(&defaults);
    match table {
        1 => table_a(params),
        2 => table_b(params),
        3 => table_d(params),
        _ => Vec::new(),
    }
}

fn table_a(params: &[Scalar]) -> Vec<TableInstance> {
    let mut b = Builder {
        table: 1,
        ty: GroupType::A,
        out: Vec::new(),
    };
    for n in ANY_RANK {
        b.unit(n, 2, &[1]);
        b.unit(n, 2, &[n]);
    }
    b.unit(3, 3, &[2]);
    b.unit(2, 5, &[1, 2]);
    b.unit(7, 5, &[2, 6]);
    for p in params {
        // r_2 = q, w_2 = 1/r_2^3
        b.row(
            2,
            4,
            2,
            Some(p.clone()),
            vec![shell(1, one(), one()), shell(2, p * p, p.pow(3).inv())],
        );
    }
    b.row(
        4,
        4,
        2,
        None,
        vec![shell(1, one(), one()), shell(3, q(1, 6), q(27, 1))],
    );
    b.row(
        4,
        4,
        2,
        None,
        vec![shell(2, q(1, 6), q(27, 1)), shell(4, one(), one())],
    );
    b.row(
        5,
        4,
        2,
        None,
        vec![shell(1, one(), one()), shell(4, q(8, 5), q(1, 2))],
    );
    b.row(
        5,
        4,
        2,
        None,
        vec![shell(2, q(8, 5), q(1, 2)), shell(5, one(), one())],
    );
    b.row(
        6,
        4,
        2,
        None,
        vec![shell(1, one(), one()), shell(5, q(15, 1), q(1, 81))],
    );
    b.row(
        6,
        4,
        2,
        None,
        vec![shell(2, q(15, 1), q(1, 81)), shell(6, one(), one())],
    );
    for p in params {
        // r_2^2 = 4 q^2 / 3, w_2 = 8 / (9 r_2^4)
        let r2 = &q(4, 3) * &(p * p);
        let w = &q(8, 9) * &(&r2 * &r2).inv();
        b.row(
            3,
            5,
            2,
            Some(p.clone()),
            vec![
                shell(1, one(), one()),
                shell(2, r2, w),
                shell(3, one(), one()),
            ],
        );
    }
    for p in params {
        // r_3^2 = 9 q^2 / 5, w_3 = 27 / (25 r_3^4)
        let r2 = &q(9, 5) * &(p * p);
        let w = &q(27, 25) * &(&r2 * &r2).inv();
        b.row(
            5,
            5,
            2,
            Some(p.clone()),
            vec![
                shell(1, one(), one()),
                shell(3, r2, w),
                shell(5, one(), one()),
            ],
        );
    }
    b.out
}

fn table_b(params: &[Scalar]) -> Vec<TableInstance> {
    let mut b = Builder {
        table: 2,
        ty: GroupType::B,
        out: Vec::new(),
    };
    for n in ANY_RANK {
        b.unit(n, 3, &[1]);
    }
    b.unit(2, 3, &[2]);
    b.unit(2, 7, &[1, 2]);
    for p in params {
        // r_2^2 = 2 q^2, w_2 = 1/r_2^4
        let r2 = &q(2, 1) * &(p * p);
        let w = (&r2 * &r2).inv();
        b.row(
            2,
            5,
            2,
            Some(p.clone()),
            vec![shell(1, one(), one()), shell(2, r2, w)],
        );
    }
    for p in params {
        // r_3^2 = 3 q^2, w_3 = 9 / (8 r_3^4)
        let r2 = &q(3, 1) * &(p * p);
        let w = &q(9, 8) * &(&r2 * &r2).inv();
        b.row(
            3,
            5,
            2,
            Some(p.clone()),
            vec![shell(1, one(), one()), shell(3, r2, w)],
        );
    }
    for p in params {
        // r_2^2 = 2 q^2, w_2 = 1/r_2^6
        let r2 = &q(2, 1) * &(p * p);
        let w = r2.pow(3).inv();
        b.row(
            4,
            7,
            2,
            Some(p.clone()),
            vec![
                shell(1, one(), one()),
                shell(2, r2, w),
                shell(4, one(), one()),
            ],
        );
    }
    for p in params {
        // r_3^2 = 3 q^2, r_2^2 = 2 r_3^2 / (5 r_3^2 - 3)
        let r3 = &q(3, 1) * &(p * p);
        let r2 = &(&q(2, 1) * &r3) / &(&(&q(5, 1) * &r3) - &q(3, 1));
        let w2 = &q(4, 5) * &r2.pow(3).inv();
        let w3 = &q(27, 40) * &r3.pow(3).inv();
        b.row(
            3,
            7,
            3,
            Some(p.clone()),
            vec![shell(1, one(), one()), shell(2, r2, w2), shell(3, r3, w3)],
        );
    }
    b.out
}

fn table_d(params: &[Scalar]) -> Vec<TableInstance> {
    let mut b = Builder {
        table: 3,
        ty: GroupType::D,
        out: Vec::new(),
    };
    b.unit(8, 7, &[2, 7]);
    b.unit(8, 7, &[2, 8]);
    for k in [5, 6] {
        for p in params {
            // r_k^2 = 6 q^2, w_k = 9 / (8 r_k^4)
            let r2 = &q(6, 1) * &(p * p);
            let w = &q(9, 8) * &(&r2 * &r2).inv();
            b.row(
                6,
                5,
                2,
                Some(p.clone()),
                vec![shell(1, one(), one()), shell(k, r2, w)],
            );
        }
    }
    for p in params {
        let r2 = &q(2, 1) * &(p * p);
        let w = r2.pow(3).inv();
        let shells = vec![
            shell(1, one(), one()),
            shell(2, r2, w),
            shell(3, one(), one()),
            shell(4, one(), one()),
        ];
        b.row(4, 7, 2, Some(p.clone()), shells);
    }
    b.out
}

/// `(n, t, J, radius classes)` of every row, for comparison with a search.
pub fn row_signatures(table: u8, n_max: usize) -> Vec<(usize, u32, Vec<usize>, usize)> {
    let mut out: Vec<(usize, u32, Vec<usize>, usize)> =
        table_instances(table, Some(&[Scalar::ratio(1, 2)]))
            .into_iter()
            .filter(|r| r.n <= n_max)
            .map(|r| (r.n, r.t, r.j, r.spheres))
            .collect();
    out.sort();
    out.dedup();
    out
}

/// Outcome of re-certifying one table row.
#[derive(Debug, Clone, Serialize)]
pub struct RowCertificate {
    pub label: String,
    pub n: usize,
    pub t: u32,
    pub j: Vec<usize>,
    pub parameter: Option<Scalar>,
    /// Strength found by each method when searching up to `t + 1`.
    pub invariant: u32,
    pub full: u32,
    pub direct: u32,
    pub size: u128,
    pub bound: u128,
    pub tight: bool,
    pub exact: bool,
    pub pass: bool,
}

/// Certifies a row at its strength `t` by all three methods, checks that
/// `t + 1` fails and that the Fisher-type bound is met with equality.
pub fn certify_instance(row: &TableInstance, prec: usize) -> Result<RowCertificate, DesignError> {
    let g = ReflectionGroup::new(row.ty, row.n)?;
    let x = WeightedDesign::from_corners_with_precision(&g, &row.shells, prec)?;
    let invariant = strength_invariant(&x, &g, row.t + 1)?.t_certified;
    let full = strength_full(&x, row.t + 1)?.t_certified;
    let direct = strength_direct(&x, row.t + 1)?.t_certified;
    let tight = is_tight(&x, None, row.t)?;
    let pass = [invariant, full, direct].iter().all(|&t| t == row.t) && tight.tight;
    Ok(RowCertificate {
        label: row.label(),
        n: row.n,
        t: row.t,
        j: row.j.clone(),
        parameter: row.parameter.clone(),
        invariant,
        full,
        direct,
        size: tight.size,
        bound: tight.bound,
        tight: tight.tight,
        exact: x.is_exact(),
        pass,
    })
}
