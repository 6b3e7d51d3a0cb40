//! Sparse multivariate Laurent polynomials over `ℚ(i)`.
//!
//! A [`SparsePoly`] is a finitely supported map from integer exponent vectors
//! to nonzero coefficients. Every constructor and arithmetic operation returns
//! the canonical form: no stored zero coefficients, terms kept in ascending
//! lexicographic exponent order.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::coeffield::{GaussianRational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    NvarsMismatch { left: usize, right: usize },
    ExponentOverflow,
    /// The outer polynomial of a composition must not have negative exponents.
    NegativeOuterExponent(i64),
    NotUnivariate(usize),
    InvalidSubstitution(String),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::NvarsMismatch { left, right } => {
                write!(f, "variable count mismatch: {left} vs {right}")
            }
            PolyError::ExponentOverflow => f.write_str("exponent overflow"),
            PolyError::NegativeOuterExponent(e) => {
                write!(f, "outer polynomial has negative exponent {e}")
            }
            PolyError::NotUnivariate(n) => write!(f, "expected a univariate polynomial, got {n} variables"),
            PolyError::InvalidSubstitution(msg) => write!(f, "invalid substitution: {msg}"),
        }
    }
}

/// Exponents of a Laurent monomial `X1^e1 ... Xσ^eσ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn zero(nvars: usize) -> Self {
        ExponentVector(vec![0; nvars])
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut v = vec![0; nvars];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(PolyError::ExponentOverflow))
            .collect::<Result<Vec<_>, _>>()
            .map(ExponentVector)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self, PolyError> {
        self.0
            .iter()
            .map(|a| a.checked_mul(k).ok_or(PolyError::ExponentOverflow))
            .collect::<Result<Vec<_>, _>>()
            .map(ExponentVector)
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Default variable names: `T` for one variable, `X1..Xσ` otherwise.
pub fn default_names(nvars: usize) -> Vec<String> {
    if nvars == 1 {
        vec!["T".to_string()]
    } else {
        (1..=nvars).map(|i| format!("X{i}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<ExponentVector, GaussianRational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        Self::monomial(nvars, c, ExponentVector::zero(nvars))
    }

    pub fn monomial(nvars: usize, c: GaussianRational, exp: ExponentVector) -> Self {
        assert_eq!(exp.len(), nvars, "exponent vector length must equal nvars");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        SparsePoly { nvars, terms }
    }

    /// The variable `X_{i+1}` (0-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, GaussianRational::one(), ExponentVector::unit(nvars, i))
    }

    /// Builds a polynomial from possibly repeated terms, merging and purging zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, GaussianRational)>,
    {
        let mut p = SparsePoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length must equal nvars");
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, e: ExponentVector, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVector> {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Option<&GaussianRational> {
        self.terms.get(e)
    }

    fn check_nvars(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        if k.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_nvars(other)?;
        let mut out = SparsePoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.checked_add(eb)?, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// `self^e` by repeated squaring; `p^0 = 1`.
    pub fn pow(&self, e: u32) -> Result<Self, PolyError> {
        let mut acc = SparsePoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Replaces each variable `X_i` by the monomial `c_i · Y^{v_i}`.
    ///
    /// Image exponents may be rational; every resulting exponent must be an
    /// integer. A variable with zero image coefficient may only appear with
    /// nonnegative exponent.
    pub fn substitute_monomial(&self, images: &[MonomialImage]) -> Result<Self, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::InvalidSubstitution(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars
            )));
        }
        let target = images.first().map(|m| m.exps.len()).unwrap_or(0);
        if images.iter().any(|m| m.exps.len() != target) {
            return Err(PolyError::InvalidSubstitution("images have different variable counts".into()));
        }
        if target == 0 {
            return Err(PolyError::InvalidSubstitution("images need at least one target variable".into()));
        }
        let mut out = SparsePoly::zero(target);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut acc = vec![Rational::zero(); target];
            for (k, &ek) in e.0.iter().enumerate() {
                if ek == 0 {
                    continue;
                }
                let img = &images[k];
                let Some(p) = img.coeff.pow(ek) else {
                    return Err(PolyError::InvalidSubstitution(format!(
                        "variable {} has zero image and negative exponent",
                        k + 1
                    )));
                };
                coeff = &coeff * &p;
                let ek = Rational::from_integer(ek.into());
                for (slot, v) in acc.iter_mut().zip(&img.exps) {
                    *slot += v * &ek;
                }
            }
            let mut exps = Vec::with_capacity(target);
            for r in acc {
                if !r.is_integer() {
                    return Err(PolyError::InvalidSubstitution(format!("non-integer exponent {r}")));
                }
                let n: i64 = r.to_integer().try_into().map_err(|_| PolyError::ExponentOverflow)?;
                exps.push(n);
            }
            out.add_term(ExponentVector(exps), &coeff);
        }
        Ok(out)
    }

    /// Value at `point`; `None` if a variable with negative exponent is zero there.
    pub fn eval(&self, point: &[GaussianRational]) -> Option<GaussianRational> {
        assert_eq!(point.len(), self.nvars, "point dimension must equal nvars");
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&e.0) {
                if k != 0 {
                    t = &t * &x.pow(k)?;
                }
            }
            acc += &t;
        }
        Some(acc)
    }

    /// Canonical text form using the given variable names, terms in
    /// descending lexicographic exponent order.
    pub fn render(&self, names: &[String]) -> String {
        assert!(names.len() >= self.nvars, "not enough variable names");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = render_monomial(e, names);
            let (neg, mag) = render_coeff(c, mono.is_empty());
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mag.is_empty(), mono.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&mag),
                (false, false) => {
                    out.push_str(&mag);
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_names(self.nvars)))
    }
}

fn render_monomial(e: &ExponentVector, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (k, &ek) in e.0.iter().enumerate() {
        match ek {
            0 => {}
            1 => parts.push(names[k].clone()),
            _ => parts.push(format!("{}^{}", names[k], ek)),
        }
    }
    parts.join("*")
}

/// Returns `(is_negative, magnitude)`; an empty magnitude stands for 1.
fn render_coeff(c: &GaussianRational, constant: bool) -> (bool, String) {
    fn real_mag(r: &Rational, constant: bool) -> String {
        if r.is_one() && !constant {
            String::new()
        } else if r.is_integer() {
            r.to_string()
        } else {
            format!("({r})")
        }
    }
    if c.im.is_zero() {
        (c.re.is_negative(), real_mag(&c.re.abs(), constant))
    } else if c.re.is_zero() {
        let m = c.im.abs();
        let s = if m.is_one() {
            "i".to_string()
        } else if m.is_integer() {
            format!("{m}i")
        } else {
            format!("({m})*i")
        };
        (c.im.is_negative(), s)
    } else {
        (false, format!("({c})"))
    }
}

/// Image `coeff · Y^exps` of one variable under a monomial substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialImage {
    pub coeff: GaussianRational,
    pub exps: Vec<Rational>,
}

impl MonomialImage {
    pub fn new(coeff: GaussianRational, exps: Vec<Rational>) -> Self {
        MonomialImage { coeff, exps }
    }

    /// Unit-coefficient image with integer exponents.
    pub fn power(exps: &[i64]) -> Self {
        MonomialImage {
            coeff: GaussianRational::one(),
            exps: exps.iter().map(|&e| Rational::from_integer(e.into())).collect(),
        }
    }
}

/// A univariate polynomial (a [`SparsePoly`] in one variable).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly(SparsePoly);

impl UniPoly {
    pub fn new(p: SparsePoly) -> Result<Self, PolyError> {
        if p.nvars != 1 {
            return Err(PolyError::NotUnivariate(p.nvars));
        }
        Ok(UniPoly(p))
    }

    pub fn from_coeffs<I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, GaussianRational)>,
    {
        UniPoly(SparsePoly::from_terms(1, coeffs.into_iter().map(|(e, c)| (ExponentVector(vec![e]), c))))
    }

    pub fn monomial(e: i64) -> Self {
        Self::from_coeffs([(e, GaussianRational::one())])
    }

    pub fn as_sparse(&self) -> &SparsePoly {
        &self.0
    }

    pub fn into_sparse(self) -> SparsePoly {
        self.0
    }

    pub fn degree(&self) -> Option<i64> {
        self.0.terms.keys().next_back().map(|e| e.0[0])
    }

    pub fn low_degree(&self) -> Option<i64> {
        self.0.terms.keys().next().map(|e| e.0[0])
    }

    pub fn coeff(&self, e: i64) -> Option<&GaussianRational> {
        self.0.terms.get(&ExponentVector(vec![e]))
    }

    pub fn term_count(&self) -> usize {
        self.0.term_count()
    }

    /// `(exponent, coefficient)` pairs in ascending degree.
    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (i64, &GaussianRational)> {
        self.0.terms.iter().map(|(e, c)| (e.0[0], c))
    }

    pub fn pow(&self, e: u32) -> Result<Self, PolyError> {
        self.0.pow(e).map(UniPoly)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.0.mul(&other.0).map(UniPoly)
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.0.add(&other.0).map(UniPoly)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// `f(g) = Σ_j f_j · g^j`.
pub fn compose(f: &UniPoly, g: &SparsePoly) -> Result<SparsePoly, PolyError> {
    let mut out = SparsePoly::zero(g.nvars);
    for (e, c) in f.coeffs() {
        if e < 0 {
            return Err(PolyError::NegativeOuterExponent(e));
        }
        let e = u32::try_from(e).map_err(|_| PolyError::ExponentOverflow)?;
        let power = g.pow(e)?;
        for (pe, pc) in &power.terms {
            out.add_term(pe.clone(), &(pc * c));
        }
    }
    Ok(out)
}
