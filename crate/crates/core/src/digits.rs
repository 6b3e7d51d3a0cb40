//! Perfect powers with few nonzero digits in base `x`:
//! `y^d = c_0 + Σ c_i x^{m_i}` with `c_0 = 1`. Known infinite families for
//! five all-ones digits, an exhaustive search, and the matcher between them.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use num_traits::{One, ToPrimitive, Zero};

use crate::coeffield::{integer_root, BigInt, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitsError {
    UnknownFamily(String),
    BelowThreshold { id: String, param: i64, min: i64 },
    InvalidConfig(String),
}

impl fmt::Display for DigitsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DigitsError::UnknownFamily(id) => write!(f, "unknown family '{id}'"),
            DigitsError::BelowThreshold { id, param, min } => {
                write!(f, "family {id} needs parameter >= {min}, got {param}")
            }
            DigitsError::InvalidConfig(m) => f.write_str(m),
        }
    }
}

/// One infinite family: `m_i = a_i·p + b_i` and `y = Σ c·x^{a·p + b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Family {
    pub id: &'static str,
    pub x: u64,
    pub d: u32,
    /// Smallest parameter with `0 < m_1 < m_2 < m_3 < m_4`.
    pub min_param: i64,
    pub exps: [(i64, i64); 4],
    pub y_terms: &'static [(u64, i64, i64)],
}

impl Family {
    pub fn exponents(&self, p: i64) -> Vec<i64> {
        self.exps.iter().map(|(a, b)| a * p + b).collect()
    }

    pub fn y(&self, p: i64) -> BigInt {
        let x = BigInt::from(self.x);
        self.y_terms
            .iter()
            .map(|&(c, a, b)| BigInt::from(c) * num_traits::pow(x.clone(), (a * p + b) as usize))
            .sum()
    }

    /// Parameter reproducing `m`, if any.
    pub fn solve(&self, x: u64, d: u32, m: &[i64]) -> Option<i64> {
        if x != self.x || d != self.d || m.len() != 4 {
            return None;
        }
        let (j, &(a, b)) = self.exps.iter().enumerate().find(|(_, (a, _))| *a != 0)?;
        let num = m[j] - b;
        if num % a != 0 {
            return None;
        }
        let p = num / a;
        (p >= self.min_param && self.exponents(p) == m).then_some(p)
    }
}

const LAST_2: Family = Family {
    id: "5last-2",
    x: 2,
    d: 2,
    min_param: 4,
    exps: [(1, 0), (2, -1), (3, -3), (4, -6)],
    y_terms: &[(1, 0, 0), (1, 1, -1), (1, 2, -3)],
};

pub const FAMILIES: [Family; 6] = [
    Family {
        id: "5last-1",
        x: 3,
        d: 2,
        min_param: 2,
        exps: [(0, 1), (1, 0), (1, 1), (2, 0)],
        y_terms: &[(1, 1, 0), (2, 0, 0)],
    },
    LAST_2,
    Family {
        id: "5last-3",
        x: 2,
        d: 2,
        min_param: 4,
        exps: [(0, 3), (1, 0), (1, 1), (2, -2)],
        y_terms: &[(1, 1, -1), (3, 0, 0)],
    },
    Family { id: "5first-1", ..LAST_2 },
    Family {
        id: "5first-2",
        x: 3,
        d: 2,
        min_param: 2,
        exps: [(1, 0), (1, 1), (2, 0), (2, 1)],
        y_terms: &[(2, 1, 0), (1, 0, 0)],
    },
    Family {
        id: "5first-3",
        x: 2,
        d: 2,
        min_param: 4,
        exps: [(1, 0), (1, 1), (2, -2), (2, 1)],
        y_terms: &[(1, 0, 0), (1, 1, -1), (1, 1, 0)],
    },
];

pub fn family(id: &str) -> Result<&'static Family, DigitsError> {
    FAMILIES.iter().find(|f| f.id == id).ok_or_else(|| DigitsError::UnknownFamily(id.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub id: String,
    pub x: u64,
    pub d: u32,
    pub param: i64,
    pub m: Vec<i64>,
    pub y: BigInt,
    /// `1 + Σ x^{m_i}`.
    pub value: BigInt,
    pub verified: bool,
}

/// `1 + Σ c_i x^{m_i}`.
pub fn digit_value(x: u64, m: &[i64], c: &[u64]) -> BigInt {
    let x = BigInt::from(x);
    let mut v = BigInt::one();
    for (e, ci) in m.iter().zip(c) {
        v += BigInt::from(*ci) * num_traits::pow(x.clone(), *e as usize);
    }
    v
}

/// Instantiates a family and checks `y^d = 1 + Σ x^{m_i}` exactly.
pub fn family_instance(id: &str, param: i64) -> Result<FamilyInstance, DigitsError> {
    let f = family(id)?;
    if param < f.min_param {
        return Err(DigitsError::BelowThreshold { id: id.to_string(), param, min: f.min_param });
    }
    let m = f.exponents(param);
    let y = f.y(param);
    let value = digit_value(f.x, &m, &[1; 4]);
    let verified = num_traits::pow(y.clone(), f.d as usize) == value && m.windows(2).all(|w| w[0] < w[1]) && m[0] > 0;
    Ok(FamilyInstance { id: id.to_string(), x: f.x, d: f.d, param, m, y, value, verified })
}

/// Every `(id, param)` whose instance has exactly this `x`, `d` and `m`.
pub fn match_families(x: u64, d: u32, m: &[i64]) -> Vec<(String, i64)> {
    FAMILIES.iter().filter_map(|f| f.solve(x, d, m).map(|p| (f.id.to_string(), p))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapSide {
    /// `m_{k-2} <= c·m_{k-1}`: gap between the two leading digits.
    Leftmost,
    /// `m_1 >= c·m_{k-1}`: gap right after the units digit.
    Rightmost,
}

impl GapSide {
    pub fn as_str(self) -> &'static str {
        match self {
            GapSide::Leftmost => "leftmost",
            GapSide::Rightmost => "rightmost",
        }
    }
}

/// Linear-gap condition on a strictly increasing exponent tuple.
pub fn gap_condition(m: &[i64], side: GapSide, c: &Rational) -> bool {
    let n = m.len();
    if n < 2 {
        return false;
    }
    let top = Rational::from_integer(BigInt::from(m[n - 1])) * c;
    match side {
        GapSide::Leftmost => Rational::from_integer(BigInt::from(m[n - 2])) <= top,
        GapSide::Rightmost => Rational::from_integer(BigInt::from(m[0])) >= top,
    }
}

/// Base-`x` digits of `n`, least significant first.
pub fn base_digits(n: &BigInt, x: u64) -> Vec<u64> {
    let base = BigInt::from(x);
    let mut n = n.clone();
    let mut out = Vec::new();
    while !n.is_zero() {
        let r = &n % &base;
        out.push(r.to_u64().unwrap());
        n /= &base;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSearchConfig {
    pub x: u64,
    pub d: u32,
    /// Number of nonzero digits, the units digit included.
    pub k: usize,
    /// Exponents are strictly below this.
    pub m_max: i64,
    pub digit_set: Vec<u64>,
}

impl DigitSearchConfig {
    pub fn validate(&self) -> Result<(), DigitsError> {
        if self.x < 2 || self.d < 2 || self.k < 2 || self.m_max < 1 {
            return Err(DigitsError::InvalidConfig("need x >= 2, d >= 2, k >= 2 and m_max >= 1".into()));
        }
        if self.digit_set.is_empty() || self.digit_set.iter().any(|&c| c == 0 || c >= self.x) {
            return Err(DigitsError::InvalidConfig(alloc::format!("digits must lie in 1..{}", self.x)));
        }
        Ok(())
    }

    /// Values of the leading exponent `m_{k-1}`, the unit of sharding.
    pub fn top_range(&self) -> Range<i64> {
        (self.k as i64 - 1).min(self.m_max)..self.m_max
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSolution {
    pub x: u64,
    pub d: u32,
    pub k: usize,
    pub m: Vec<i64>,
    /// `c_1, …, c_{k-1}` (`c_0 = 1`).
    pub digits: Vec<u64>,
    pub y: BigInt,
    pub matches: Vec<(String, i64)>,
}

impl DigitSolution {
    /// Recomputes `y^d` and reads its base-`x` digits back.
    pub fn check(&self, digit_set: &[u64]) -> bool {
        let v = num_traits::pow(self.y.clone(), self.d as usize);
        let ds = base_digits(&v, self.x);
        let nonzero: Vec<(usize, u64)> = ds.iter().copied().enumerate().filter(|(_, c)| *c != 0).collect();
        let mut expected = vec![(0usize, 1u64)];
        expected.extend(self.m.iter().zip(&self.digits).map(|(e, c)| (*e as usize, *c)));
        nonzero.len() == self.k && nonzero == expected && self.digits.iter().all(|c| digit_set.contains(c))
    }
}

/// Solutions whose leading exponent lies in `top`, in [`solution_order`].
pub fn exhaustive_shard(cfg: &DigitSearchConfig, top: Range<i64>) -> Result<Vec<DigitSolution>, DigitsError> {
    cfg.validate()?;
    let x = BigInt::from(cfg.x);
    let powers: Vec<BigInt> = (0..cfg.m_max.max(0)).map(|e| num_traits::pow(x.clone(), e as usize)).collect();
    let all_ones = |c: &[u64]| c.iter().all(|&v| v == 1);
    let slots = cfg.k - 1;
    let nd = cfg.digit_set.len();
    let mut out = Vec::new();
    let range = top.start.max(cfg.top_range().start)..top.end.min(cfg.m_max);
    for t in range {
        // lower exponents: strictly increasing subsets of 1..t
        let mut lower: Vec<i64> = (1..slots as i64).collect();
        if slots > 1 && lower.last().is_some_and(|&l| l >= t) {
            continue;
        }
        loop {
            let mut m = lower.clone();
            m.push(t);
            let combos = nd.pow(slots as u32);
            for mut idx in 0..combos {
                let digits: Vec<u64> = (0..slots)
                    .map(|_| {
                        let c = cfg.digit_set[idx % nd];
                        idx /= nd;
                        c
                    })
                    .collect();
                let mut v = BigInt::one();
                for (e, c) in m.iter().zip(&digits) {
                    v += &powers[*e as usize] * BigInt::from(*c);
                }
                if let Some(y) = integer_root(&v, cfg.d) {
                    let matches =
                        if slots == 4 && all_ones(&digits) { match_families(cfg.x, cfg.d, &m) } else { Vec::new() };
                    out.push(DigitSolution { x: cfg.x, d: cfg.d, k: cfg.k, m: m.clone(), digits, y, matches });
                }
            }
            if !next_combination(&mut lower, t - 1) {
                break;
            }
        }
    }
    out.sort_by(solution_order);
    Ok(out)
}

/// Colexicographic on exponents (leading exponent first), then digits, so
/// shards over consecutive leading exponents concatenate in order.
pub fn solution_order(a: &DigitSolution, b: &DigitSolution) -> core::cmp::Ordering {
    a.m.iter().rev().cmp(b.m.iter().rev()).then_with(|| a.digits.cmp(&b.digits))
}

/// Advances a strictly increasing tuple over `1..=max`; false when exhausted.
fn next_combination(c: &mut [i64], max: i64) -> bool {
    let n = c.len();
    for i in (0..n).rev() {
        if c[i] < max - (n - 1 - i) as i64 {
            c[i] += 1;
            for j in i + 1..n {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Serial search over every leading exponent.
pub fn exhaustive_search(cfg: &DigitSearchConfig) -> Result<Vec<DigitSolution>, DigitsError> {
    exhaustive_shard(cfg, cfg.top_range())
}
