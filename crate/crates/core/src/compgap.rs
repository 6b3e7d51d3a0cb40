//! Term-count gaps of compositions `f(g(X_1, …, X_σ))`: the pre-cancellation
//! count `W`, the cancellation count `C`, sumset bounds, the sharp witness
//! family, bounded searches for the minimum term count and the additive
//! factorizations that govern cross-power cancellation.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use num_traits::{One, Zero};

use crate::coeffield::{BigInt, GaussianRational};
use crate::lattice::bareiss_rank;
use crate::polycore::{compose, ExponentVector, PolyError, SparsePoly, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompgapError {
    ConstantOuter,
    ZeroInner,
    EmptySearchSpace,
    InvalidConfig(String),
    Poly(PolyError),
}

impl fmt::Display for CompgapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompgapError::ConstantOuter => f.write_str("outer polynomial must be nonconstant"),
            CompgapError::ZeroInner => f.write_str("inner polynomial must be nonzero"),
            CompgapError::EmptySearchSpace => f.write_str("search space contains no admissible composition"),
            CompgapError::InvalidConfig(m) => f.write_str(m),
            CompgapError::Poly(e) => fmt::Display::fmt(e, f),
        }
    }
}

impl From<PolyError> for CompgapError {
    fn from(e: PolyError) -> Self {
        CompgapError::Poly(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub w: usize,
    pub c: usize,
    pub k: usize,
    /// `(j, |supp g^j|)` for each `j` in the support of `f`, ascending.
    pub per_power: Vec<(u32, usize)>,
    /// Exponents present in some `g^j` but absent from `f(g)`.
    pub cancelled: Vec<ExponentVector>,
}

/// `W` is the size of the union of the supports of the powers `g^j`
/// (each power already reduced), `k` the term count of `f(g)`, `C = W - k`.
pub fn gap_report(f: &UniPoly, g: &SparsePoly) -> Result<GapReport, CompgapError> {
    if f.degree().unwrap_or(0) <= 0 {
        return Err(CompgapError::ConstantOuter);
    }
    if g.is_zero() {
        return Err(CompgapError::ZeroInner);
    }
    let mut union = BTreeSet::new();
    let mut per_power = Vec::new();
    for (j, _) in f.coeffs() {
        let j = u32::try_from(j).map_err(|_| PolyError::NegativeOuterExponent(j))?;
        let power = g.pow(j)?;
        per_power.push((j, power.term_count()));
        union.extend(power.support().cloned());
    }
    let composition = compose(f, g)?;
    let cancelled: Vec<ExponentVector> = union.iter().filter(|e| composition.coeff(e).is_none()).cloned().collect();
    let k = composition.term_count();
    Ok(GapReport { w: union.len(), c: union.len() - k, k, per_power, cancelled })
}

/// `h + (deg f - 1)·((σ-1)h - σ(σ-1)/2)`, the lower bound on `W`.
pub fn w_lower_bound(sigma: i64, h: i64, deg_f: i64) -> i64 {
    h + (deg_f - 1) * ((sigma - 1) * h - sigma * (sigma - 1) / 2)
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Dimension of the affine span of `points`.
pub fn affine_dim(points: &[ExponentVector]) -> usize {
    let Some(first) = points.first() else { return 0 };
    let rows: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|p| p.0.iter().zip(&first.0).map(|(a, b)| BigInt::from(*a) - BigInt::from(*b)).collect())
        .collect();
    bareiss_rank(&rows)
}

/// Rank of the lattice spanned by `points` (linear, not affine).
pub fn linear_rank<'a>(points: impl IntoIterator<Item = &'a ExponentVector>) -> usize {
    let rows: Vec<Vec<BigInt>> = points.into_iter().map(|p| to_big(&p.0)).collect();
    bareiss_rank(&rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuzsaStatus {
    Holds,
    Violated,
    /// `|A| > |B|` or the sumset does not span the ambient space.
    Inapplicable,
}

impl RuzsaStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RuzsaStatus::Holds => "holds",
            RuzsaStatus::Violated => "violated",
            RuzsaStatus::Inapplicable => "inapplicable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuzsaReport {
    pub sigma: usize,
    pub a_size: usize,
    pub b_size: usize,
    pub sumset_size: usize,
    pub dim: usize,
    /// `|B| + σ|A| - σ(σ+1)/2`.
    pub bound: i64,
    pub slack: i64,
    pub status: RuzsaStatus,
}

/// Computes `|A + B|` exactly and compares it with `|B| + σ|A| - σ(σ+1)/2`.
pub fn ruzsa_bound_check(a: &[ExponentVector], b: &[ExponentVector]) -> Result<RuzsaReport, CompgapError> {
    let a: BTreeSet<&ExponentVector> = a.iter().collect();
    let b: BTreeSet<&ExponentVector> = b.iter().collect();
    let sigma = match a.iter().chain(b.iter()).next() {
        Some(v) => v.len(),
        None => return Err(CompgapError::InvalidConfig("empty point set".into())),
    };
    if a.iter().chain(b.iter()).any(|v| v.len() != sigma) {
        return Err(CompgapError::Poly(PolyError::NvarsMismatch { left: sigma, right: 0 }));
    }
    let mut sum = BTreeSet::new();
    for x in &a {
        for y in &b {
            sum.insert(x.checked_add(y)?);
        }
    }
    let sum: Vec<ExponentVector> = sum.into_iter().collect();
    let dim = affine_dim(&sum);
    let s = sigma as i64;
    let bound = b.len() as i64 + s * a.len() as i64 - s * (s + 1) / 2;
    let slack = sum.len() as i64 - bound;
    let status = if a.len() > b.len() || dim < sigma {
        RuzsaStatus::Inapplicable
    } else if slack >= 0 {
        RuzsaStatus::Holds
    } else {
        RuzsaStatus::Violated
    };
    Ok(RuzsaReport { sigma, a_size: a.len(), b_size: b.len(), sumset_size: sum.len(), dim, bound, slack, status })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaposWitness {
    pub sigma: usize,
    pub h: usize,
    pub f: UniPoly,
    pub g: SparsePoly,
    pub report: GapReport,
    /// `σh - σ(σ-1)/2`.
    pub expected_k: i64,
    pub holds: bool,
}

/// `f = T²` and `g = X_1 + … + X_σ + Σ_{i=2}^{h-σ+1} X_1^i X_σ^{1-i}`.
///
/// For `σ = 1` the extra terms are all `X_1`, so `g` collapses to a single
/// term and the equality only survives at `h = 1`.
pub fn sigmapos_witness(sigma: usize, h: usize) -> Result<SigmaposWitness, CompgapError> {
    if sigma == 0 || h < sigma {
        return Err(CompgapError::InvalidConfig(alloc::format!("need h >= sigma >= 1, got sigma={sigma}, h={h}")));
    }
    let mut g = SparsePoly::zero(sigma);
    for i in 0..sigma {
        g = g.add(&SparsePoly::var(sigma, i))?;
    }
    for i in 2..=(h - sigma + 1) as i64 {
        let mut e = vec![0i64; sigma];
        e[0] += i;
        e[sigma - 1] -= i - 1;
        g = g.add(&SparsePoly::monomial(sigma, GaussianRational::one(), ExponentVector(e)))?;
    }
    let f = UniPoly::monomial(2);
    let report = gap_report(&f, &g)?;
    let (s, hh) = (sigma as i64, h as i64);
    let expected_k = s * hh - s * (s - 1) / 2;
    Ok(SigmaposWitness { sigma, h, holds: report.k as i64 == expected_k, f, g, report, expected_k })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KminConfig {
    pub sigma: usize,
    /// Inclusive exponent range for every coordinate.
    pub lo: i64,
    pub hi: i64,
    pub h_max: usize,
    pub f_family: Vec<UniPoly>,
    /// Coefficients tried for each monomial of `g`.
    pub coeffs: Vec<GaussianRational>,
}

impl KminConfig {
    pub fn default_coeffs() -> Vec<GaussianRational> {
        vec![GaussianRational::one(), -GaussianRational::one()]
    }

    fn validate(&self) -> Result<(), CompgapError> {
        if self.sigma == 0 || self.lo > self.hi || self.h_max == 0 {
            return Err(CompgapError::InvalidConfig("need sigma >= 1, lo <= hi and h_max >= 1".into()));
        }
        if self.f_family.is_empty() || self.coeffs.is_empty() {
            return Err(CompgapError::EmptySearchSpace);
        }
        if self.coeffs.iter().any(|c| c.is_zero()) {
            return Err(CompgapError::InvalidConfig("coefficients must be nonzero".into()));
        }
        if self.f_family.iter().any(|f| f.degree().unwrap_or(0) <= 0 || f.low_degree().unwrap_or(0) < 0) {
            return Err(CompgapError::InvalidConfig("outer polynomials must be nonconstant polynomials".into()));
        }
        Ok(())
    }
}

/// The exponent box in search order: by total absolute degree, then
/// lexicographically descending, so `X_1, …, X_σ` come first.
pub fn kmin_box(cfg: &KminConfig) -> Vec<ExponentVector> {
    let width = (cfg.hi - cfg.lo + 1) as usize;
    let total = width.pow(cfg.sigma as u32);
    let mut out: Vec<ExponentVector> = (0..total)
        .map(|mut idx| {
            let mut e = vec![0i64; cfg.sigma];
            for slot in e.iter_mut().rev() {
                *slot = cfg.lo + (idx % width) as i64;
                idx /= width;
            }
            ExponentVector(e)
        })
        .collect();
    out.sort_by(|a, b| {
        let na: i64 = a.0.iter().map(|x| x.abs()).sum();
        let nb: i64 = b.0.iter().map(|x| x.abs()).sum();
        na.cmp(&nb).then_with(|| b.cmp(a))
    });
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KminWitness {
    pub k: usize,
    pub f: UniPoly,
    pub g: SparsePoly,
    pub composition: SparsePoly,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KminPartial {
    pub best: Option<KminWitness>,
    /// `(f, g)` pairs whose composition was expanded.
    pub examined: u64,
    /// Of those, how many had the required shape.
    pub admissible: u64,
}

impl KminPartial {
    /// Folds a later shard into this one; ties keep the earlier witness.
    pub fn merge(&mut self, other: KminPartial) {
        self.examined += other.examined;
        self.admissible += other.admissible;
        if let Some(w) = other.best {
            if self.best.as_ref().map_or(true, |b| w.k < b.k) {
                self.best = Some(w);
            }
        }
    }
}

fn combos(n: usize, start: usize, size: usize, acc: &mut Vec<usize>, out: &mut dyn FnMut(&[usize])) {
    if acc.len() == size {
        out(acc);
        return;
    }
    for i in start..n {
        if n - i < size - acc.len() {
            break;
        }
        acc.push(i);
        combos(n, i + 1, size, acc, out);
        acc.pop();
    }
}

/// Searches every `g` whose smallest box index lies in `first`. Candidates
/// need exponent rank `σ`, and so must the composition.
pub fn kmin_shard(cfg: &KminConfig, first: Range<usize>) -> Result<KminPartial, CompgapError> {
    cfg.validate()?;
    let boxv = kmin_box(cfg);
    let mut part = KminPartial::default();
    let mut err = None;
    for a in first.start..first.end.min(boxv.len()) {
        for size in 1..=cfg.h_max {
            let mut visit = |rest: &[usize]| {
                if err.is_some() {
                    return;
                }
                let mut support: Vec<&ExponentVector> = vec![&boxv[a]];
                support.extend(rest.iter().map(|&i| &boxv[i]));
                if linear_rank(support.iter().copied()) != cfg.sigma {
                    return;
                }
                let radix = cfg.coeffs.len();
                let count = radix.pow(support.len() as u32);
                for mut idx in 0..count {
                    let g = SparsePoly::from_terms(
                        cfg.sigma,
                        support.iter().map(|e| {
                            let c = cfg.coeffs[idx % radix].clone();
                            idx /= radix;
                            ((*e).clone(), c)
                        }),
                    );
                    for f in &cfg.f_family {
                        part.examined += 1;
                        let composition = match compose(f, &g) {
                            Ok(c) => c,
                            Err(e) => {
                                err = Some(e);
                                return;
                            }
                        };
                        let k = composition.term_count();
                        if linear_rank(composition.support()) != cfg.sigma {
                            continue;
                        }
                        part.admissible += 1;
                        if part.best.as_ref().map_or(true, |b| k < b.k) {
                            part.best = Some(KminWitness { k, f: f.clone(), g: g.clone(), composition });
                        }
                    }
                }
            };
            combos(boxv.len(), a + 1, size - 1, &mut Vec::new(), &mut visit);
        }
    }
    match err {
        Some(e) => Err(e.into()),
        None => Ok(part),
    }
}

/// Serial search over the whole box.
pub fn kmin_search(cfg: &KminConfig) -> Result<KminPartial, CompgapError> {
    let part = kmin_shard(cfg, 0..kmin_box(cfg).len())?;
    if part.best.is_none() {
        return Err(CompgapError::EmptySearchSpace);
    }
    Ok(part)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorFactorization {
    pub target: ExponentVector,
    /// `(v, c)` with `c >= 1`, in the order of the generator set.
    pub parts: Vec<(ExponentVector, u32)>,
    pub total: u32,
}

impl VectorFactorization {
    /// Recomputes `Σ c_i v_i` and compares it with the target.
    pub fn verify(&self, j: &[u32]) -> bool {
        let mut acc = vec![0i64; self.target.len()];
        for (v, c) in &self.parts {
            if *c == 0 || v.len() != acc.len() {
                return false;
            }
            for (a, x) in acc.iter_mut().zip(&v.0) {
                *a += x * *c as i64;
            }
        }
        acc == self.target.0 && self.parts.iter().map(|p| p.1).sum::<u32>() == self.total && j.contains(&self.total)
    }
}

/// All `w = Σ c_i v_i` with `v_i` in `generators`, `1 <= c_i <= c_max` and
/// `Σ c_i ∈ j`. Depth-first over the generators in the given order (after
/// removing duplicates), multiplicities ascending.
pub fn vector_factorizations(
    w: &ExponentVector,
    generators: &[ExponentVector],
    j: &[u32],
    c_max: Option<u32>,
) -> Result<Vec<VectorFactorization>, CompgapError> {
    let mut gens: Vec<&ExponentVector> = Vec::new();
    for g in generators {
        if g.len() != w.len() {
            return Err(PolyError::NvarsMismatch { left: w.len(), right: g.len() }.into());
        }
        if !gens.contains(&g) {
            gens.push(g);
        }
    }
    let max_total = j.iter().copied().max().unwrap_or(0);
    let c_max = c_max.unwrap_or(max_total);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut acc = vec![0i64; w.len()];
    fn dfs(
        i: usize,
        gens: &[&ExponentVector],
        w: &ExponentVector,
        j: &[u32],
        c_max: u32,
        max_total: u32,
        total: u32,
        acc: &mut Vec<i64>,
        chosen: &mut Vec<(ExponentVector, u32)>,
        out: &mut Vec<VectorFactorization>,
    ) {
        if i == gens.len() {
            if total > 0 && *acc == w.0 && j.contains(&total) {
                out.push(VectorFactorization { target: w.clone(), parts: chosen.clone(), total });
            }
            return;
        }
        dfs(i + 1, gens, w, j, c_max, max_total, total, acc, chosen, out);
        let v = gens[i];
        for c in 1..=c_max.min(max_total.saturating_sub(total)) {
            for (a, x) in acc.iter_mut().zip(&v.0) {
                *a += x;
            }
            chosen.push((v.clone(), c));
            dfs(i + 1, gens, w, j, c_max, max_total, total + c, acc, chosen, out);
            chosen.pop();
        }
        let used = c_max.min(max_total.saturating_sub(total)) as i64;
        for (a, x) in acc.iter_mut().zip(&v.0) {
            *a -= x * used;
        }
    }
    dfs(0, &gens, w, j, c_max, max_total, 0, &mut acc, &mut chosen, &mut out);
    Ok(out)
}
