//! Scalar domain shared by every module: exact rationals, a single real
//! quadratic extension `a + b*sqrt(d)`, or a high-precision binary float.
//!
//! Arithmetic between two *different* quadratic extensions is refused.
//! The operator impls panic in that case; the `try_*` methods report it.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Default float precision in bits.
pub const DEFAULT_PRECISION: usize = 256;
/// Smallest precision accepted for the float variant.
pub const MIN_PRECISION: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("float constants cache"));
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("cannot mix quadratic extensions sqrt({0}) and sqrt({1})")]
    IncompatibleExtensions(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid scalar literal `{0}`")]
    Parse(String),
    #[error("square root of a negative number")]
    NegativeSqrt,
}

/// Element `a + b*sqrt(d)` of a real quadratic field, `d > 1` square-free, `b != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    d: u64,
    a: BigRational,
    b: BigRational,
}

impl QuadraticNumber {
    pub fn radicand(&self) -> u64 {
        self.d
    }
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }
    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }
    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.into())
    }
    fn conjugate(&self) -> Self {
        Self {
            d: self.d,
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }
    fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sa == sb || sa == Ordering::Equal {
            return sb;
        }
        if sb == Ordering::Equal {
            return sa;
        }
        // opposite signs: compare a^2 against d b^2
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigRational::from_integer(self.d.into());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }
}

/// A number in one of the three supported domains.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Quadratic(QuadraticNumber),
    Float(BigFloat),
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Splits `d = f^2 * r` with `r` square-free.
fn square_free_part(d: u64) -> (u64, u64) {
    let mut r = d;
    let mut f = 1u64;
    let mut p = 2u64;
    while p * p <= r {
        while r.is_multiple_of(p * p) {
            r /= p * p;
            f *= p;
        }
        p += 1;
    }
    (f, r)
}

fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

fn rational_sqrt_exact(q: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(
        int_sqrt_exact(q.numer())?,
        int_sqrt_exact(q.denom())?,
    ))
}

fn bigint_to_float(n: &BigInt, prec: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    let base = BigFloat::from_u64(u64::MAX, prec).add(&BigFloat::from_u64(1, prec), prec, RM);
    let mut acc = BigFloat::from_u64(0, prec);
    for d in digits.iter().rev() {
        acc = acc
            .mul(&base, prec, RM)
            .add(&BigFloat::from_u64(*d, prec), prec, RM);
    }
    if sign == Sign::Minus {
        acc = acc.neg();
    }
    acc
}

fn rational_to_float(q: &BigRational, prec: usize) -> BigFloat {
    bigint_to_float(q.numer(), prec).div(&bigint_to_float(q.denom(), prec), prec, RM)
}

fn float_prec(x: &BigFloat) -> usize {
    x.mantissa_max_bit_len()
        .unwrap_or(DEFAULT_PRECISION)
        .max(MIN_PRECISION)
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }
    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }
    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(n.into()))
    }
    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::Rational(BigRational::from_integer(n))
    }
    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rational(rat(n, d))
    }
    pub fn rational(q: BigRational) -> Self {
        Scalar::Rational(q)
    }

    /// `a + b*sqrt(d)`, normalized so that `d` is square-free and rational
    /// results collapse to the rational variant.
    pub fn quadratic(a: BigRational, b: BigRational, d: u64) -> Self {
        let (f, r) = square_free_part(d);
        let b = b * BigRational::from_integer(f.into());
        if r == 1 {
            return Scalar::Rational(a + b);
        }
        if b.is_zero() || r == 0 {
            return Scalar::Rational(a);
        }
        Scalar::Quadratic(QuadraticNumber { d: r, a, b })
    }

    /// `sqrt(d)` as an exact quadratic number.
    pub fn sqrt_of_int(d: u64) -> Self {
        Self::quadratic(BigRational::zero(), BigRational::one(), d)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Scalar::Float(BigFloat::from_f64(x, prec.max(MIN_PRECISION)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Quadratic(_) => false,
            Scalar::Float(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_one())
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Float(_))
    }

    pub fn is_float(&self) -> bool {
        matches!(self, Scalar::Float(_))
    }

    /// Radicand of the quadratic extension this value lives in, if any.
    pub fn extension(&self) -> Option<u64> {
        match self {
            Scalar::Quadratic(q) => Some(q.d),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Precision in bits of the float variant.
    pub fn precision(&self) -> Option<usize> {
        match self {
            Scalar::Float(x) => Some(float_prec(x)),
            _ => None,
        }
    }

    /// Converts to the float domain at `prec` bits.
    pub fn to_float(&self, prec: usize) -> BigFloat {
        let prec = prec.max(MIN_PRECISION);
        match self {
            Scalar::Rational(q) => rational_to_float(q, prec),
            Scalar::Quadratic(q) => {
                let root = BigFloat::from_u64(q.d, prec).sqrt(prec, RM);
                rational_to_float(&q.a, prec).add(
                    &rational_to_float(&q.b, prec).mul(&root, prec, RM),
                    prec,
                    RM,
                )
            }
            Scalar::Float(x) => {
                let mut y = x.clone();
                if float_prec(x) != prec {
                    let _ = y.set_precision(prec, RM);
                }
                y
            }
        }
    }

    /// Same value in the float domain.
    pub fn into_float(self, prec: usize) -> Scalar {
        Scalar::Float(self.to_float(prec))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            Scalar::Quadratic(q) => {
                q.a.to_f64().unwrap_or(f64::NAN)
                    + q.b.to_f64().unwrap_or(f64::NAN) * (q.d as f64).sqrt()
            }
            Scalar::Float(x) => format!("{}", x).parse::<f64>().unwrap_or(f64::NAN),
        }
    }

    pub fn signum(&self) -> Ordering {
        match self {
            Scalar::Rational(q) => q.cmp(&BigRational::zero()),
            Scalar::Quadratic(q) => q.signum(),
            Scalar::Float(x) => {
                if x.is_zero() {
                    Ordering::Equal
                } else if x.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut result = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn try_inv(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Rational(q) => {
                if q.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(q.recip()))
                }
            }
            Scalar::Quadratic(q) => {
                // 1/(a + b r) = (a - b r)/(a^2 - d b^2)
                let n = q.norm();
                let c = q.conjugate();
                Ok(Scalar::quadratic(c.a / &n, c.b / &n, q.d))
            }
            Scalar::Float(x) => {
                if x.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    let p = float_prec(x);
                    Ok(Scalar::Float(BigFloat::from_u64(1, p).div(x, p, RM)))
                }
            }
        }
    }

    pub fn inv(&self) -> Scalar {
        self.try_inv().expect("inverse of zero")
    }

    /// Exact square root when one exists in this value's field, or when
    /// the value is rational (the root may then be a quadratic number).
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => {
                if q.is_negative() {
                    return None;
                }
                if let Some(r) = rational_sqrt_exact(q) {
                    return Some(Scalar::Rational(r));
                }
                // q = n/m -> sqrt(n m)/m
                let nm = q.numer() * q.denom();
                let nm = nm.to_u64()?;
                let (f, r) = square_free_part(nm);
                let coeff = BigRational::new(BigInt::from(f), q.denom().clone());
                Some(Scalar::quadratic(BigRational::zero(), coeff, r))
            }
            Scalar::Quadratic(q) => {
                if q.signum() != Ordering::Greater {
                    return None;
                }
                // (p + s r)^2 = p^2 + d s^2 + 2 p s r
                let root_norm = rational_sqrt_exact(&q.norm())?;
                let two = BigRational::from_integer(2.into());
                for cand in [(&q.a + &root_norm) / &two, (&q.a - &root_norm) / &two] {
                    if cand.is_positive() {
                        if let Some(p) = rational_sqrt_exact(&cand) {
                            let s = &q.b / (&two * &p);
                            let root = Scalar::quadratic(p, s, q.d);
                            if root.is_positive() {
                                return Some(root);
                            }
                            return Some(-root);
                        }
                    }
                }
                None
            }
            Scalar::Float(_) => None,
        }
    }

    /// Square root, exact when possible and otherwise in the float domain.
    pub fn sqrt(&self, prec: usize) -> Result<Scalar, ScalarError> {
        if self.is_negative() {
            return Err(ScalarError::NegativeSqrt);
        }
        if let Some(r) = self.sqrt_exact() {
            return Ok(r);
        }
        let prec = self.precision().unwrap_or(prec).max(MIN_PRECISION);
        Ok(Scalar::Float(self.to_float(prec).sqrt(prec, RM)))
    }

    /// Square root that stays inside the current field: rational inputs
    /// only yield rational roots, quadratic inputs only roots in the same
    /// extension.
    pub fn sqrt_in_field(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => rational_sqrt_exact(q).map(Scalar::Rational),
            _ => self.sqrt_exact(),
        }
    }

    fn binary(&self, other: &Scalar, op: BinOp) -> Result<Scalar, ScalarError> {
        use Scalar::*;
        match (self, other) {
            (Rational(x), Rational(y)) => match op {
                BinOp::Add => Ok(Rational(x + y)),
                BinOp::Sub => Ok(Rational(x - y)),
                BinOp::Mul => Ok(Rational(x * y)),
                BinOp::Div => {
                    if y.is_zero() {
                        Err(ScalarError::DivisionByZero)
                    } else {
                        Ok(Rational(x / y))
                    }
                }
            },
            (Float(_), _) | (_, Float(_)) => {
                let p = self
                    .precision()
                    .into_iter()
                    .chain(other.precision())
                    .max()
                    .unwrap_or(DEFAULT_PRECISION);
                let x = self.to_float(p);
                let y = other.to_float(p);
                Ok(Float(match op {
                    BinOp::Add => x.add(&y, p, RM),
                    BinOp::Sub => x.sub(&y, p, RM),
                    BinOp::Mul => x.mul(&y, p, RM),
                    BinOp::Div => {
                        if y.is_zero() {
                            return Err(ScalarError::DivisionByZero);
                        }
                        x.div(&y, p, RM)
                    }
                }))
            }
            (Quadratic(x), Quadratic(y)) if x.d != y.d => {
                Err(ScalarError::IncompatibleExtensions(x.d, y.d))
            }
            _ => {
                let d = self
                    .extension()
                    .or(other.extension())
                    .expect("one operand is quadratic");
                let (a1, b1) = self.quadratic_parts();
                let (a2, b2) = other.quadratic_parts();
                let dd = BigRational::from_integer(d.into());
                match op {
                    BinOp::Add => Ok(Scalar::quadratic(a1 + a2, b1 + b2, d)),
                    BinOp::Sub => Ok(Scalar::quadratic(a1 - a2, b1 - b2, d)),
                    BinOp::Mul => Ok(Scalar::quadratic(
                        &a1 * &a2 + &b1 * &b2 * dd,
                        &a1 * &b2 + &b1 * &a2,
                        d,
                    )),
                    BinOp::Div => {
                        let inv = other.try_inv()?;
                        self.binary(&inv, BinOp::Mul)
                    }
                }
            }
        }
    }

    fn quadratic_parts(&self) -> (BigRational, BigRational) {
        match self {
            Scalar::Rational(q) => (q.clone(), BigRational::zero()),
            Scalar::Quadratic(q) => (q.a.clone(), q.b.clone()),
            Scalar::Float(_) => unreachable!("float has no quadratic parts"),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(other, BinOp::Add)
    }
    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(other, BinOp::Sub)
    }
    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(other, BinOp::Mul)
    }
    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(other, BinOp::Div)
    }

    /// Checks that a set of scalars can be combined without mixing two
    /// different quadratic extensions. Returns the common extension.
    pub fn common_extension<'a, I>(values: I) -> Result<Option<u64>, ScalarError>
    where
        I: IntoIterator<Item = &'a Scalar>,
    {
        let mut ext: Option<u64> = None;
        for v in values {
            if let Some(d) = v.extension() {
                match ext {
                    None => ext = Some(d),
                    Some(e) if e != d => return Err(ScalarError::IncompatibleExtensions(e, d)),
                    _ => {}
                }
            }
        }
        Ok(ext)
    }

    /// `pi` at the given precision.
    pub fn pi(prec: usize) -> Scalar {
        let prec = prec.max(MIN_PRECISION);
        CONSTS.with(|cc| Scalar::Float(cc.borrow_mut().pi(prec, RM)))
    }

    pub fn cos(&self, prec: usize) -> Scalar {
        let prec = self.precision().unwrap_or(prec).max(MIN_PRECISION);
        let x = self.to_float(prec);
        CONSTS.with(|cc| Scalar::Float(x.cos(prec, RM, &mut cc.borrow_mut())))
    }

    pub fn sin(&self, prec: usize) -> Scalar {
        let prec = self.precision().unwrap_or(prec).max(MIN_PRECISION);
        let x = self.to_float(prec);
        CONSTS.with(|cc| Scalar::Float(x.sin(prec, RM, &mut cc.borrow_mut())))
    }

    /// Closest rational with denominator at most `max_den`, by continued
    /// fractions on the float value.
    pub fn rationalize(&self, max_den: u64) -> Option<BigRational> {
        if let Scalar::Rational(q) = self {
            return Some(q.clone());
        }
        let prec = self.precision().unwrap_or(DEFAULT_PRECISION);
        let mut x = self.to_float(prec);
        let neg = x.is_negative();
        if neg {
            x = x.neg();
        }
        let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
        let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
        let mut best = None;
        for _ in 0..64 {
            let a = x.floor();
            let ai = BigInt::from_str(&format_integer(&a)).ok()?;
            let h2 = &ai * &h1 + &h0;
            let k2 = &ai * &k1 + &k0;
            if k2 > BigInt::from(max_den) {
                break;
            }
            best = Some(BigRational::new(h2.clone(), k2.clone()));
            h0 = h1;
            h1 = h2;
            k0 = k1;
            k1 = k2;
            let frac = x.sub(&a, prec, RM);
            if frac.is_zero() {
                break;
            }
            x = BigFloat::from_u64(1, prec).div(&frac, prec, RM);
        }
        best.map(|b| if neg { -b } else { b })
    }
}

type Decimal = (astro_float::Sign, Vec<u8>, astro_float::Exponent);

fn decimal_digits(x: &BigFloat) -> Result<Decimal, astro_float::Error> {
    CONSTS.with(|cc| x.convert_to_radix(Radix::Dec, RM, &mut cc.borrow_mut()))
}

fn format_integer(x: &BigFloat) -> String {
    // BigFloat formats integers in scientific notation; expand via the
    // radix conversion to decimal digits.
    let (sign, digits, exp) = decimal_digits(x).unwrap_or((astro_float::Sign::Pos, vec![0], 0));
    let mut s = String::new();
    if sign == astro_float::Sign::Neg {
        s.push('-');
    }
    if exp <= 0 {
        return "0".into();
    }
    for i in 0..exp as usize {
        s.push(char::from(b'0' + digits.get(i).copied().unwrap_or(0)));
    }
    s
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

macro_rules! impl_op {
    ($tr:ident, $method:ident, $op:expr) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.binary(rhs, $op)
                    .unwrap_or_else(|e| panic!("scalar arithmetic: {e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

impl_op!(Add, add, BinOp::Add);
impl_op!(Sub, sub, BinOp::Sub);
impl_op!(Mul, mul, BinOp::Mul);
impl_op!(Div, div, BinOp::Div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q.clone()),
            Scalar::Quadratic(q) => Scalar::Quadratic(QuadraticNumber {
                d: q.d,
                a: -q.a.clone(),
                b: -q.b.clone(),
            }),
            Scalar::Float(x) => Scalar::Float(x.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Rational(q)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        use Scalar::*;
        match (self, other) {
            (Rational(x), Rational(y)) => x == y,
            (Quadratic(x), Quadratic(y)) => x == y,
            (Rational(_), Quadratic(_)) | (Quadratic(_), Rational(_)) => false,
            _ => match self.try_sub(other) {
                Ok(diff) => diff.is_zero(),
                Err(_) => false,
            },
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Rational(q) => {
                0u8.hash(state);
                q.hash(state);
            }
            Scalar::Quadratic(q) => {
                1u8.hash(state);
                q.hash(state);
            }
            Scalar::Float(x) => {
                2u8.hash(state);
                format!("{x}").hash(state);
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_sub(other).ok().map(|d| d.signum())
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}", fmt_rational(q)),
            Scalar::Quadratic(q) => {
                let radical = if q.b.is_one() {
                    format!("sqrt({})", q.d)
                } else if (-q.b.clone()).is_one() {
                    format!("-sqrt({})", q.d)
                } else {
                    format!("{}*sqrt({})", fmt_rational(&q.b), q.d)
                };
                if q.a.is_zero() {
                    write!(f, "{radical}")
                } else if radical.starts_with('-') {
                    write!(f, "{}{}", fmt_rational(&q.a), radical)
                } else {
                    write!(f, "{}+{}", fmt_rational(&q.a), radical)
                }
            }
            Scalar::Float(x) => {
                let digits = f.precision().unwrap_or(40);
                write!(f, "{}", format_float(x, digits))
            }
        }
    }
}

/// Plain decimal rendering of a float with `digits` significant digits.
fn format_float(x: &BigFloat, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let Ok((sign, mant, exp)) = decimal_digits(x) else {
        return format!("{x}");
    };
    let mut mant: Vec<u8> = mant.into_iter().collect();
    // round to `digits` significant digits
    let mut exp = exp;
    if mant.len() > digits {
        let round_up = mant[digits] >= 5;
        mant.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    mant.insert(0, 1);
                    exp += 1;
                    break;
                }
                i -= 1;
                if mant[i] == 9 {
                    mant[i] = 0;
                } else {
                    mant[i] += 1;
                    break;
                }
            }
        }
    }
    while mant.len() > 1 && *mant.last().unwrap() == 0 {
        mant.pop();
    }
    let mut s = String::new();
    if sign == astro_float::Sign::Neg {
        s.push('-');
    }
    let ds: String = mant.iter().map(|d| char::from(b'0' + d)).collect();
    if !(-40..=40).contains(&exp) {
        s.push_str(&ds[..1]);
        if ds.len() > 1 {
            s.push('.');
            s.push_str(&ds[1..]);
        }
        s.push_str(&format!("e{}", exp - 1));
    } else if exp <= 0 {
        s.push_str("0.");
        for _ in 0..(-exp) {
            s.push('0');
        }
        s.push_str(&ds);
    } else {
        let e = exp as usize;
        if ds.len() <= e {
            s.push_str(&ds);
            for _ in ds.len()..e {
                s.push('0');
            }
        } else {
            s.push_str(&ds[..e]);
            s.push('.');
            s.push_str(&ds[e..]);
        }
    }
    s
}

fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let err = || ScalarError::Parse(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        return Ok(n / d);
    }
    // decimal with optional exponent, parsed exactly
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits == "-" || digits == "+" || digits.is_empty() {
        return Err(err());
    } else {
        digits
    };
    let n = BigInt::from_str(&digits).map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    })
}

fn parse_radical(s: &str) -> Option<(BigRational, u64)> {
    // [coeff*]sqrt(d)
    let s = s.trim();
    let (coeff, rest) = match s.find("sqrt(") {
        Some(0) => (BigRational::one(), s),
        Some(i) => {
            let c = s[..i].trim().trim_end_matches('*').trim();
            let c = match c {
                "" | "+" => BigRational::one(),
                "-" => -BigRational::one(),
                _ => parse_rational(c).ok()?,
            };
            (c, &s[i..])
        }
        None => return None,
    };
    let inner = rest.strip_prefix("sqrt(")?.strip_suffix(')')?;
    let d = inner.trim().parse::<u64>().ok()?;
    Some((coeff, d))
}

impl FromStr for Scalar {
    type Err = ScalarError;

    /// Accepts `p/q`, exact decimals, `c*sqrt(d)` and `a+c*sqrt(d)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if !t.contains("sqrt") {
            return parse_rational(t).map(Scalar::Rational);
        }
        // split on the last +/- that starts the radical term
        let start = t.find("sqrt(").unwrap();
        let prefix = &t[..start];
        let split = prefix
            .char_indices()
            .filter(|&(i, c)| {
                (c == '+' || c == '-') && i > 0 && !prefix[..i].ends_with(['e', 'E', '/'])
            })
            .map(|(i, _)| i)
            .next_back();
        let (a, radical) = match split {
            Some(i) => (parse_rational(&t[..i])?, &t[i..]),
            None => (BigRational::zero(), t),
        };
        let (b, d) = parse_radical(radical).ok_or_else(|| ScalarError::Parse(s.to_string()))?;
        Ok(Scalar::quadratic(a, b, d))
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
            Num(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(Scalar::from_int(i)),
            Raw::Num(x) => format!("{x}").parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Name of the domain a scalar lives in, as used in structured output.
pub fn mode_tag(values: &[Scalar]) -> &'static str {
    if values.iter().any(Scalar::is_float) {
        "float"
    } else if values.iter().any(|v| v.extension().is_some()) {
        "quadratic"
    } else {
        "rational"
    }
}

/// Zero test that is exact for exact scalars and relative for floats:
/// `|value| <= tol * scale`.
pub fn is_negligible(value: &Scalar, scale: &Scalar, tol: &Scalar) -> bool {
    if value.is_exact() {
        return value.is_zero();
    }
    let bound = tol * scale.abs();
    value.abs() <= bound
}

/// `2^(-bits)` as a float scalar.
pub fn tolerance_from_bits(bits: usize, prec: usize) -> Scalar {
    let prec = prec.max(MIN_PRECISION);
    let two = BigFloat::from_u64(2, prec);
    let p = two.powi(bits, prec, RM);
    Scalar::Float(BigFloat::from_u64(1, prec).div(&p, prec, RM))
}
