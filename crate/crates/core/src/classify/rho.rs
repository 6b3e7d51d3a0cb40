//! The compositions `f(g)` with one or two monomials beyond the `σ` pure
//! powers `a_i X_i^{l_i}`, built from their closed forms and re-expanded.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::coeffield::GaussianRational;
use crate::polycore::{compose, ExponentVector, PolyError, SparsePoly, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RhoCase {
    /// `σ = 1`: `f = T^{m1} + c T^{m2}`, `g = a1^{1/m1} X^r`.
    Rho1Sol1 { a1: GaussianRational, a2: GaussianRational, m1: u32, m2: u32, r: i64 },
    /// `σ = 2`: `f = T²`, `g = √a1 X1^{l1/2} + √a2 X2^{l2/2}`.
    Rho1Sol2 { a1: GaussianRational, a2: GaussianRational, l1: i64, l2: i64 },
    /// `σ = 2`: `f = T³`, `g = ∛a1 X1^{l1/3} + ∛a2 X2^{l2/3}`.
    Rho2Sol1 { a1: GaussianRational, a2: GaussianRational, l1: i64, l2: i64 },
    /// `σ = 2`: `f = T²`, `g = √a1 X1^{l1/2} + √a2 X2^{l2/2} + c X1^{l1/4} X2^{l2/4}`
    /// with `c² = -2√a1√a2`.
    Rho2Sol2 { a1: GaussianRational, a2: GaussianRational, l1: i64, l2: i64 },
}

impl RhoCase {
    pub fn rho(&self) -> usize {
        match self {
            RhoCase::Rho1Sol1 { .. } | RhoCase::Rho1Sol2 { .. } => 1,
            _ => 2,
        }
    }

    pub fn sigma(&self) -> usize {
        match self {
            RhoCase::Rho1Sol1 { .. } => 1,
            _ => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RhoCase::Rho1Sol1 { .. } => "rho1-sol1",
            RhoCase::Rho1Sol2 { .. } => "rho1-sol2",
            RhoCase::Rho2Sol1 { .. } => "rho2-sol1",
            RhoCase::Rho2Sol2 { .. } => "rho2-sol2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RhoError {
    /// The needed radical is not in `ℚ(i)`; pick other parameters.
    RadicalOutsideField { value: GaussianRational, degree: u32 },
    /// An exponent `l / n` is not an integer.
    NonIntegerExponent { l: i64, n: i64 },
    InvalidParameters(String),
    Poly(PolyError),
}

impl fmt::Display for RhoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhoError::RadicalOutsideField { value, degree } => {
                write!(f, "{degree}-th root of {value} is not in Q(i); choose different parameters")
            }
            RhoError::NonIntegerExponent { l, n } => write!(f, "exponent {l}/{n} is not an integer"),
            RhoError::InvalidParameters(m) => f.write_str(m),
            RhoError::Poly(e) => fmt::Display::fmt(e, f),
        }
    }
}

impl From<PolyError> for RhoError {
    fn from(e: PolyError) -> Self {
        RhoError::Poly(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoReport {
    pub case: RhoCase,
    pub sigma: usize,
    pub rho: usize,
    pub f: UniPoly,
    pub g: SparsePoly,
    pub composition: SparsePoly,
    pub term_count: usize,
    pub expected_terms: usize,
    /// Term count is `σ + ρ`, each `a_i X_i^{l_i}` is present with its
    /// coefficient, and the remaining `ρ` terms are other monomials.
    pub shape_ok: bool,
}

fn root(value: &GaussianRational, degree: u32) -> Result<GaussianRational, RhoError> {
    value.nth_root(degree).ok_or_else(|| RhoError::RadicalOutsideField { value: value.clone(), degree })
}

fn div_exact(l: i64, n: i64) -> Result<i64, RhoError> {
    if l <= 0 {
        return Err(RhoError::InvalidParameters(alloc::format!("exponent {l} must be positive")));
    }
    if l % n != 0 {
        return Err(RhoError::NonIntegerExponent { l, n });
    }
    Ok(l / n)
}

fn nonzero(a: &GaussianRational, name: &str) -> Result<(), RhoError> {
    if a.is_zero() {
        return Err(RhoError::InvalidParameters(alloc::format!("{name} must be nonzero")));
    }
    Ok(())
}

fn term(nvars: usize, c: GaussianRational, exps: Vec<i64>) -> SparsePoly {
    SparsePoly::monomial(nvars, c, ExponentVector(exps))
}

/// Builds `f` and `g` for the chosen solution, expands `f(g)` and checks
/// the declared shape.
pub fn verify_rho_solutions(case: &RhoCase) -> Result<RhoReport, RhoError> {
    let (f, g, pure): (UniPoly, SparsePoly, Vec<(ExponentVector, GaussianRational)>) = match case {
        RhoCase::Rho1Sol1 { a1, a2, m1, m2, r } => {
            nonzero(a1, "a1")?;
            nonzero(a2, "a2")?;
            if m1 <= m2 || *m2 == 0 || *r <= 0 {
                return Err(RhoError::InvalidParameters("need m1 > m2 >= 1 and r >= 1".into()));
            }
            let b = root(a1, *m1)?;
            let c = a2.checked_div(&b.pow(*m2 as i64).unwrap()).unwrap();
            let f = UniPoly::from_coeffs([(*m1 as i64, GaussianRational::one()), (*m2 as i64, c)]);
            let g = term(1, b, vec![*r]);
            let pure = vec![
                (ExponentVector(vec![*m1 as i64 * r]), a1.clone()),
                (ExponentVector(vec![*m2 as i64 * r]), a2.clone()),
            ];
            (f, g, pure)
        }
        RhoCase::Rho1Sol2 { a1, a2, l1, l2 } | RhoCase::Rho2Sol1 { a1, a2, l1, l2 } | RhoCase::Rho2Sol2 { a1, a2, l1, l2 } => {
            nonzero(a1, "a1")?;
            nonzero(a2, "a2")?;
            let s: u32 = if matches!(case, RhoCase::Rho2Sol1 { .. }) { 3 } else { 2 };
            let b1 = root(a1, s)?;
            let b2 = root(a2, s)?;
            let mut g = term(2, b1.clone(), vec![div_exact(*l1, s as i64)?, 0])
                .add(&term(2, b2.clone(), vec![0, div_exact(*l2, s as i64)?]))?;
            if let RhoCase::Rho2Sol2 { .. } = case {
                let c3 = root(&-(GaussianRational::from_int(2) * b1 * b2), 2)?;
                g = g.add(&term(2, c3, vec![div_exact(*l1, 4)?, div_exact(*l2, 4)?]))?;
            }
            let f = UniPoly::monomial(s as i64);
            let pure = vec![(ExponentVector(vec![*l1, 0]), a1.clone()), (ExponentVector(vec![0, *l2]), a2.clone())];
            (f, g, pure)
        }
    };
    let composition = compose(&f, &g)?;
    let (sigma, rho) = (case.sigma(), case.rho());
    let pure_ok = pure.iter().all(|(e, a)| composition.coeff(e) == Some(a));
    // The extra terms must not be pure powers of a single variable already
    // listed (σ = 1 has no such distinction: both terms are powers of X).
    let extras = composition.terms().filter(|(e, _)| !pure.iter().any(|(p, _)| p == *e)).count();
    let expected_extras = if sigma == 1 { 0 } else { rho };
    let term_count = composition.term_count();
    Ok(RhoReport {
        case: case.clone(),
        sigma,
        rho,
        shape_ok: term_count == sigma + rho && pure_ok && extras == expected_extras,
        expected_terms: sigma + rho,
        term_count,
        f,
        g,
        composition,
    })
}
