//! Exact scalars: arbitrary precision integers, rationals and Gaussian
//! rationals `a + b·i` with `a, b ∈ ℚ`.
//!
//! Integers and rationals are backed by `num-bigint` / `num-rational`; this
//! module adds the handful of number-theoretic helpers the rest of the crate
//! needs (fractional binomials, exact roots) and the `ℚ(i)` field itself.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use num_bigint::BigInt;

/// Arbitrary precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffError {
    ZeroDenominator,
    DivisionByZero,
    InvalidLiteral(String),
}

impl fmt::Display for CoeffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffError::ZeroDenominator => f.write_str("invalid rational: zero denominator"),
            CoeffError::DivisionByZero => f.write_str("division by zero"),
            CoeffError::InvalidLiteral(s) => write!(f, "invalid numeric literal `{s}`"),
        }
    }
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Reduces `n/m` to lowest terms with a positive second component.
pub fn gcd_reduce(n: &BigInt, m: &BigInt) -> Result<(BigInt, BigInt), CoeffError> {
    if m.is_zero() {
        return Err(CoeffError::ZeroDenominator);
    }
    if n.is_zero() {
        return Ok((BigInt::zero(), BigInt::one()));
    }
    let g = n.gcd(m);
    let (mut a, mut b) = (n / &g, m / &g);
    if b.is_negative() {
        a = -a;
        b = -b;
    }
    Ok((a, b))
}

/// `r (r-1) ... (r-n+1) / n!` for an arbitrary rational `r`.
pub fn binom_rational(r: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    for j in 0..n {
        acc *= r - Rational::from_integer(BigInt::from(j));
        acc /= Rational::from_integer(BigInt::from(j + 1));
    }
    acc
}

/// The generalized binomial coefficient `binom(1/d, n)`.
pub fn binom_fractional(d: u32, n: u32) -> Rational {
    assert!(d >= 1, "binom_fractional needs d >= 1");
    binom_rational(&Rational::new(BigInt::one(), BigInt::from(d)), n)
}

/// Exact integer `d`-th root: `Some(y)` iff `y^d == n`.
///
/// Negative inputs have a (negative) root only for odd `d`.
pub fn integer_root(n: &BigInt, d: u32) -> Option<BigInt> {
    assert!(d >= 1, "integer_root needs d >= 1");
    if d == 1 {
        return Some(n.clone());
    }
    if n.is_negative() {
        if d % 2 == 0 {
            return None;
        }
        return integer_root(&-n, d).map(|y| -y);
    }
    let y = n.nth_root(d);
    if num_traits::pow(y.clone(), d as usize) == *n {
        Some(y)
    } else {
        None
    }
}

/// Exact rational `d`-th root (real), if one exists.
pub fn rational_root(q: &Rational, d: u32) -> Option<Rational> {
    let num = integer_root(q.numer(), d)?;
    let den = integer_root(q.denom(), d)?;
    Some(Rational::new(num, den))
}

/// Parses `"3/4"`, `"-1/8"`, `"−1/8"`, `"7"` or a finite decimal `"0.25"`.
pub fn parse_rational(src: &str) -> Result<Rational, CoeffError> {
    let bad = || CoeffError::InvalidLiteral(src.to_string());
    let s: String = src.trim().replace('\u{2212}', "-");
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, &s[..]),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let value = if let Some((n, d)) = body.split_once('/') {
        let n = parse_digits(n).ok_or_else(bad)?;
        let d = parse_digits(d).ok_or_else(bad)?;
        if d.is_zero() {
            return Err(CoeffError::ZeroDenominator);
        }
        Rational::new(n, d)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if whole.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        let w = if whole.is_empty() { BigInt::zero() } else { parse_digits(whole).ok_or_else(bad)? };
        let f = if frac.is_empty() { BigInt::zero() } else { parse_digits(frac).ok_or_else(bad)? };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        Rational::new(w * &scale + f, scale)
    } else {
        Rational::from_integer(parse_digits(body).ok_or_else(bad)?)
    };
    Ok(if neg { -value } else { value })
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::parse_bytes(s.as_bytes(), 10)
}

/// An element `re + im·i` of `ℚ(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    pub fn i() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `re² + im²`.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = GaussianRational::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Some(acc)
    }

    /// All `w ∈ ℚ(i)` with `w^d == self`, in no particular order.
    pub fn nth_roots(&self, d: u32) -> Vec<Self> {
        assert!(d >= 1);
        if self.is_zero() {
            return alloc::vec![GaussianRational::zero()];
        }
        if d == 1 {
            return alloc::vec![self.clone()];
        }
        // With D | s^d, every root w has w·s integral over ℤ[i] (a root of
        // X^d - z·s^d), hence a Gaussian integer.
        let den = root_scale(&self.re.denom().lcm(self.im.denom()), d);
        let scale = num_traits::pow(den.clone(), d as usize);
        let gr = (&self.re * Rational::from_integer(scale.clone())).to_integer();
        let gi = (&self.im * Rational::from_integer(scale)).to_integer();
        let target = GaussianRational::new(Rational::from_integer(gr.clone()), Rational::from_integer(gi.clone()));
        let norm = &gr * &gr + &gi * &gi;
        let Some(n) = integer_root(&norm, d) else {
            return Vec::new();
        };
        let den_q = Rational::from_integer(den);
        let mut roots = Vec::new();
        let top = n.sqrt();
        let mut a = BigInt::zero();
        while a <= top {
            let rest = &n - &a * &a;
            if let Some(b) = integer_root(&rest, 2) {
                let mut cands: Vec<(BigInt, BigInt)> = alloc::vec![(a.clone(), b.clone())];
                if !b.is_zero() {
                    cands.push((a.clone(), -b.clone()));
                }
                if !a.is_zero() {
                    cands.push((-a.clone(), b.clone()));
                    if !b.is_zero() {
                        cands.push((-a.clone(), -b.clone()));
                    }
                }
                for (x, y) in cands {
                    let w = GaussianRational::new(Rational::from_integer(x), Rational::from_integer(y));
                    if w.pow(d as i64).as_ref() == Some(&target) {
                        roots.push(GaussianRational::new(&w.re / &den_q, &w.im / &den_q));
                    }
                }
            }
            a += 1;
        }
        roots
    }

    /// The `d`-th root in `ℚ(i)` closest to the principal branch (largest
    /// real part, ties broken towards positive imaginary part).
    pub fn nth_root(&self, d: u32) -> Option<Self> {
        self.nth_roots(d).into_iter().max_by(|a, b| match a.re.cmp(&b.re) {
            Ordering::Equal => a.im.cmp(&b.im),
            o => o,
        })
    }
}

/// A small `s` with `n | s^d`: each prime below a trial bound contributes
/// `p^⌈e/d⌉`, and whatever cofactor remains is kept whole.
fn root_scale(n: &BigInt, d: u32) -> BigInt {
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1u32 << 16);
    while p <= limit && &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            s *= num_traits::pow(p.clone(), e.div_ceil(d) as usize);
        }
        p += 1u32;
    }
    s * rest
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational { re: Rational::one(), im: Rational::zero() }
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        GaussianRational::from_rational(r)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'a GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::from_rational(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if !self.re.is_zero() {
            write!(f, "{}", self.re)?;
            if !self.im.is_negative() {
                f.write_str("+")?;
            }
        }
        if self.im == -Rational::one() {
            f.write_str("-i")
        } else if self.im.is_one() {
            f.write_str("i")
        } else {
            write!(f, "{}i", self.im)
        }
    }
}

impl FromStr for GaussianRational {
    type Err = CoeffError;

    /// Accepts `"3/4"`, `"2i"`, `"-i"`, `"1+2i"`, `"1/2-3/4i"`.
    fn from_str(src: &str) -> Result<Self, CoeffError> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('\u{2212}', "-");
        if s.is_empty() {
            return Err(CoeffError::InvalidLiteral(src.to_string()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(GaussianRational::from_rational(parse_rational(&s)?));
        };
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
        let (re, im) = match split {
            Some(k) => (parse_rational(&body[..k])?, &body[k..]),
            None => (Rational::zero(), body),
        };
        let im = match im {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other).map_err(|_| CoeffError::InvalidLiteral(src.to_string()))?,
        };
        Ok(GaussianRational::new(re, im))
    }
}
