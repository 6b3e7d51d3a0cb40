//! Universal Hilbert Set verdicts for exponential sums `α(n) = Σ c_i α_i^n`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Pow, Signed, Zero};

use crate::coeffield::{binom_rational, integer_root, rational_root, BigInt, Rational};
use crate::lattice::{indep_certificate, IndepCertificate, LatticeError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpTerm {
    pub coeff: Rational,
    pub base: BigInt,
}

/// An exponential sum with rational coefficients and distinct integer bases
/// `>= 2`, terms kept in first-occurrence order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpSum {
    terms: Vec<ExpTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpSumError {
    BaseTooSmall(BigInt),
    ZeroCoefficient(BigInt),
    Empty,
}

impl fmt::Display for ExpSumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpSumError::BaseTooSmall(b) => write!(f, "base {b} must be at least 2"),
            ExpSumError::ZeroCoefficient(b) => write!(f, "coefficient of {b}^n is zero"),
            ExpSumError::Empty => f.write_str("empty exponential sum"),
        }
    }
}

impl ExpSum {
    /// Merges repeated bases; rejects bases below 2 and zero merged coefficients.
    pub fn new(terms: impl IntoIterator<Item = (Rational, BigInt)>) -> Result<Self, ExpSumError> {
        let mut merged: Vec<ExpTerm> = Vec::new();
        for (coeff, base) in terms {
            if base <= BigInt::one() {
                return Err(ExpSumError::BaseTooSmall(base));
            }
            match merged.iter_mut().find(|t| t.base == base) {
                Some(t) => t.coeff += coeff,
                None => merged.push(ExpTerm { coeff, base }),
            }
        }
        if merged.is_empty() {
            return Err(ExpSumError::Empty);
        }
        if let Some(t) = merged.iter().find(|t| t.coeff.is_zero()) {
            return Err(ExpSumError::ZeroCoefficient(t.base.clone()));
        }
        Ok(ExpSum { terms: merged })
    }

    pub(crate) fn from_merged(terms: Vec<(Rational, BigInt)>) -> Self {
        ExpSum { terms: terms.into_iter().map(|(coeff, base)| ExpTerm { coeff, base }).collect() }
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn bases(&self) -> Vec<BigInt> {
        self.terms.iter().map(|t| t.base.clone()).collect()
    }

    /// Value at `n`, exactly.
    pub fn eval(&self, n: u32) -> Rational {
        self.terms
            .iter()
            .map(|t| &t.coeff * Rational::from_integer(Pow::pow(&t.base, n)))
            .fold(Rational::zero(), |a, b| a + b)
    }

    fn sorted(&self) -> Vec<(BigInt, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|t| (t.base.clone(), t.coeff.clone())).collect();
        v.sort();
        v
    }
}

impl fmt::Display for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let m = t.coeff.abs();
            if m.is_one() {
            } else if m.is_integer() {
                write!(f, "{m}*")?;
            } else {
                write!(f, "({m})*")?;
            }
            write!(f, "{}^n", t.base)?;
        }
        Ok(())
    }
}

/// `α(n) = (b1·β1^n + b2·β2^n)^d` with `β1 < β2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialWitness {
    pub b1: Rational,
    pub b2: Rational,
    pub beta1: BigInt,
    pub beta2: BigInt,
    pub d: u32,
}

impl BinomialWitness {
    /// The terms of the expanded power, ascending by base.
    pub fn expand(&self) -> Vec<(BigInt, Rational)> {
        (0..=self.d)
            .map(|j| {
                let base = Pow::pow(&self.beta1, self.d - j) * Pow::pow(&self.beta2, j);
                let c = binom_rational(&Rational::from_integer(self.d.into()), j)
                    * Pow::pow(&self.b1, self.d - j)
                    * Pow::pow(&self.b2, j);
                (base, c)
            })
            .collect()
    }

    /// Term-level multiset equality of the expansion with `alpha`.
    pub fn reproduces(&self, alpha: &ExpSum) -> bool {
        self.expand() == alpha.sorted()
    }
}

impl fmt::Display for BinomialWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}*{}^n + {}*{}^n)^{}", self.b1, self.beta1, self.b2, self.beta2, self.d)
    }
}

/// Searches for `(b1, b2, β1, β2)` with `α = (b1 β1^n + b2 β2^n)^d`.
pub fn binomial_power_witness(alpha: &ExpSum, d: u32) -> Option<BinomialWitness> {
    if d < 2 || alpha.len() != d as usize + 1 {
        return None;
    }
    let sorted = alpha.sorted();
    let (lo_base, lo_c) = &sorted[0];
    let (hi_base, hi_c) = &sorted[d as usize];
    let beta1 = integer_root(lo_base, d)?;
    let beta2 = integer_root(hi_base, d)?;
    let b1 = rational_root(lo_c, d)?;
    let b2 = rational_root(hi_c, d)?;
    // For even d the overall sign is irrelevant: fix b1 > 0 and try both signs of b2.
    let b2_choices: Vec<Rational> = if d % 2 == 0 { alloc::vec![b2.clone(), -b2] } else { alloc::vec![b2] };
    let b1 = if d % 2 == 0 { b1.abs() } else { b1 };
    b2_choices
        .into_iter()
        .map(|b2| BinomialWitness { b1: b1.clone(), b2, beta1: beta1.clone(), beta2: beta2.clone(), d })
        .find(|w| w.reproduces(alpha))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UhsStatus {
    Uhs,
    NotUhs,
    Unknown,
}

impl UhsStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            UhsStatus::Uhs => "UHS",
            UhsStatus::NotUhs => "NOT_UHS",
            UhsStatus::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UhsRule {
    IndMul,
    DepSquare,
    DepCube,
    TrivBound,
    None,
}

impl UhsRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            UhsRule::IndMul => "indmul",
            UhsRule::DepSquare => "12dep-square",
            UhsRule::DepCube => "12dep-cube",
            UhsRule::TrivBound => "trivbnd",
            UhsRule::None => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UhsVerdict {
    pub status: UhsStatus,
    pub rule: UhsRule,
    pub witness: Option<BinomialWitness>,
    pub certificate: IndepCertificate,
}

impl UhsVerdict {
    pub fn summary(&self) -> String {
        alloc::format!("{} ({})", self.status.as_str(), self.rule.as_str())
    }
}

/// Applies the independence rules in order: full independence, one or two
/// dependent bases (with the binomial square/cube exceptions), then the
/// `k/2 + 1` bound.
pub fn uhs_verdict(alpha: &ExpSum, bound: u64) -> Result<UhsVerdict, LatticeError> {
    let certificate = indep_certificate(&alpha.bases(), bound)?;
    let sigma = certificate.rank;
    let k = alpha.len();
    let with_witness = |d: u32, rule| {
        let witness = binomial_power_witness(alpha, d);
        let status = if witness.is_some() { UhsStatus::NotUhs } else { UhsStatus::Uhs };
        (status, rule, witness)
    };
    let (status, rule, witness) = if sigma == k {
        (UhsStatus::Uhs, UhsRule::IndMul, None)
    } else if sigma + 1 == k && sigma >= 2 {
        with_witness(2, UhsRule::DepSquare)
    } else if sigma + 2 == k && sigma >= 2 {
        with_witness(3, UhsRule::DepCube)
    } else if 2 * sigma >= k + 2 {
        (UhsStatus::Uhs, UhsRule::TrivBound, None)
    } else {
        (UhsStatus::Unknown, UhsRule::None, None)
    };
    Ok(UhsVerdict { status, rule, witness, certificate })
}
