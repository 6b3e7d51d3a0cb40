//! Multiplicative independence of positive integers through their
//! prime-exponent matrices.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::coeffield::{BigInt, Rational};
use crate::polycore::MonomialImage;

pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    /// Bases must be integers `>= 2`.
    InvalidBase(BigInt),
    /// A cofactor without small prime factors that could not be certified prime.
    NeedsLargerBound { n: BigInt, cofactor: BigInt },
    Overflow(String),
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::InvalidBase(b) => write!(f, "base {b} must be at least 2"),
            LatticeError::NeedsLargerBound { n, cofactor } => {
                write!(f, "could not factor {n}: cofactor {cofactor} needs a larger trial-division bound")
            }
            LatticeError::Overflow(what) => write!(f, "overflow: {what}"),
        }
    }
}

/// Miller-Rabin with the first 13 prime bases, deterministic below 3.3·10^24.
fn is_probable_prime(n: &BigInt) -> bool {
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    if *n < BigInt::from(2) {
        return false;
    }
    for &p in &BASES {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for &a in &BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mr_limit() -> BigInt {
    "3317044064679887385961981".parse().unwrap()
}

/// Prime factorization `[(p, e)]` with primes ascending.
///
/// Trial division runs up to `bound`; a remaining cofactor is accepted if it
/// is below `bound^2` or passes the deterministic Miller-Rabin range.
pub fn factorize(n: &BigInt, bound: u64) -> Result<Vec<(BigInt, u32)>, LatticeError> {
    if *n < BigInt::from(2) {
        return Err(LatticeError::InvalidBase(n.clone()));
    }
    let mut m = n.clone();
    let mut out = Vec::new();
    let mut d: u64 = 2;
    while d <= bound.max(2) {
        let dd = BigInt::from(d);
        if &dd * &dd > m {
            break;
        }
        let mut e = 0u32;
        while (&m % d).is_zero() {
            m /= d;
            e += 1;
        }
        if e > 0 {
            out.push((dd, e));
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    if m.is_one() {
        return Ok(out);
    }
    let dd = BigInt::from(d);
    if &dd * &dd > m || (m < mr_limit() && is_probable_prime(&m)) {
        out.push((m, 1));
        return Ok(out);
    }
    Err(LatticeError::NeedsLargerBound { n: n.clone(), cofactor: m })
}

/// Exponent matrix of a list of bases: one row per base, one column per prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationTable {
    pub bases: Vec<BigInt>,
    pub primes: Vec<BigInt>,
    pub matrix: Vec<Vec<u32>>,
}

impl FactorizationTable {
    pub fn build(bases: &[BigInt], bound: u64) -> Result<Self, LatticeError> {
        let facts = bases.iter().map(|b| factorize(b, bound)).collect::<Result<Vec<_>, _>>()?;
        let mut primes: Vec<BigInt> = facts.iter().flatten().map(|(p, _)| p.clone()).collect();
        primes.sort();
        primes.dedup();
        let matrix = facts
            .iter()
            .map(|f| {
                let mut row = vec![0u32; primes.len()];
                for (p, e) in f {
                    row[primes.binary_search(p).unwrap()] = *e;
                }
                row
            })
            .collect();
        let table = FactorizationTable { bases: bases.to_vec(), primes, matrix };
        debug_assert!(table.reconstructs());
        Ok(table)
    }

    /// Every base equals the product of primes raised to its row.
    pub fn reconstructs(&self) -> bool {
        self.bases.iter().zip(&self.matrix).all(|(b, row)| {
            let prod = self.primes.iter().zip(row).fold(BigInt::one(), |acc, (p, &e)| acc * Pow::pow(p, e));
            prod == *b
        })
    }
}

/// Rank over ℚ of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// `β_index^{m_ii} = ∏_j β_{chosen[j]}^{exps[j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub index: usize,
    pub m_ii: i64,
    pub exps: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndepCertificate {
    pub table: FactorizationTable,
    pub rank: usize,
    /// Indices into `table.bases`, ascending.
    pub chosen: Vec<usize>,
    /// One relation per non-chosen base, in input order.
    pub relations: Vec<Relation>,
    /// `coords[i][j]`: rational exponent of `β_{chosen[j]}` in `β_i`.
    pub coords: Vec<Vec<Rational>>,
}

fn to_big_rows(table: &FactorizationTable, idx: &[usize]) -> Vec<Vec<BigInt>> {
    idx.iter().map(|&i| table.matrix[i].iter().map(|&e| BigInt::from(e)).collect()).collect()
}

/// Solves `Σ_j x_j · a_j = b` for the unique rational `x` (the `a_j` are independent).
fn solve_combination(a: &[Vec<BigInt>], b: &[u32]) -> Option<Vec<Rational>> {
    let sigma = a.len();
    let ncols = b.len();
    // Augmented system: one equation per prime, unknowns are the x_j.
    let mut m: Vec<Vec<Rational>> = (0..ncols)
        .map(|p| {
            let mut row: Vec<Rational> = (0..sigma).map(|j| Rational::from_integer(a[j][p].clone())).collect();
            row.push(Rational::from_integer(b[p].into()));
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..sigma {
        let piv = (r..ncols).find(|&i| !m[i][c].is_zero())?;
        m.swap(r, piv);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..ncols {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for cc in 0..=sigma {
                    let t = &m[r][cc] * &f;
                    m[i][cc] -= t;
                }
            }
        }
        r += 1;
    }
    if m[r..].iter().any(|row| !row[sigma].is_zero()) {
        return None;
    }
    Some((0..sigma).map(|j| m[j][sigma].clone()).collect())
}

fn lcm_of_denominators<'a>(it: impl Iterator<Item = &'a Rational>) -> BigInt {
    it.fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

fn to_i64(n: &BigInt, what: &str) -> Result<i64, LatticeError> {
    n.to_i64().ok_or_else(|| LatticeError::Overflow(format!("{what} {n} exceeds 64 bits")))
}

/// Maximal multiplicatively independent subset (earliest-index-first) with
/// integer relations for the remaining bases.
pub fn indep_certificate(bases: &[BigInt], bound: u64) -> Result<IndepCertificate, LatticeError> {
    let table = FactorizationTable::build(bases, bound)?;
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..bases.len() {
        let mut trial = chosen.clone();
        trial.push(i);
        if bareiss_rank(&to_big_rows(&table, &trial)) == trial.len() {
            chosen = trial;
        }
    }
    let basis = to_big_rows(&table, &chosen);
    let mut relations = Vec::new();
    let mut coords = Vec::with_capacity(bases.len());
    for i in 0..bases.len() {
        let x = solve_combination(&basis, &table.matrix[i]).expect("row lies in the span of a maximal independent set");
        if chosen.binary_search(&i).is_err() {
            let m = lcm_of_denominators(x.iter());
            let exps = x
                .iter()
                .map(|q| to_i64(&(q * Rational::from_integer(m.clone())).to_integer(), "relation exponent"))
                .collect::<Result<Vec<_>, _>>()?;
            relations.push(Relation { index: i, m_ii: to_i64(&m, "relation exponent")?, exps });
        }
        coords.push(x);
    }
    let cert = IndepCertificate { rank: chosen.len(), table, chosen, relations, coords };
    debug_assert!(cert.verify());
    Ok(cert)
}

impl IndepCertificate {
    /// Checks every relation by exact big-integer exponentiation.
    pub fn verify(&self) -> bool {
        self.relations.iter().all(|rel| self.verify_relation(rel))
    }

    pub fn verify_relation(&self, rel: &Relation) -> bool {
        if rel.m_ii < 1 || rel.exps.len() != self.chosen.len() {
            return false;
        }
        let pow = |b: &BigInt, e: i64| -> BigInt { Pow::pow(b, e.unsigned_abs()) };
        let mut lhs = pow(&self.table.bases[rel.index], rel.m_ii);
        let mut rhs = BigInt::one();
        for (&j, &e) in self.chosen.iter().zip(&rel.exps) {
            let b = &self.table.bases[j];
            if e >= 0 {
                rhs *= pow(b, e);
            } else {
                lhs *= pow(b, e);
            }
        }
        lhs == rhs
    }

    pub fn chosen_bases(&self) -> Vec<BigInt> {
        self.chosen.iter().map(|&i| self.table.bases[i].clone()).collect()
    }
}

/// Integer Laurent-monomial images of the bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    /// `r_j`: `Y_j` stands for the `r_j`-th root of the `j`-th chosen base.
    pub r: Vec<i64>,
    /// Image exponent vector of `β_i^d` for every input base, in input order.
    pub images: Vec<Vec<i64>>,
}

impl MonomialMap {
    /// The images as unit-coefficient substitutions.
    pub fn as_substitution(&self) -> Vec<MonomialImage> {
        self.images.iter().map(|v| MonomialImage::power(v)).collect()
    }
}

/// Maps `β_i^d ↦ ∏_j Y_j^{r_j · d · c_ij}` with the least `r_j` that make every
/// exponent an integer (`c_ij` are the certificate's rational coordinates).
pub fn monomial_images(cert: &IndepCertificate, d: u32) -> Result<MonomialMap, LatticeError> {
    let sigma = cert.rank;
    let d = Rational::from_integer(d.into());
    let scaled: Vec<Vec<Rational>> = cert.coords.iter().map(|row| row.iter().map(|c| c * &d).collect()).collect();
    let r_big: Vec<BigInt> = (0..sigma).map(|j| lcm_of_denominators(scaled.iter().map(|row| &row[j]))).collect();
    let images = scaled
        .iter()
        .map(|row| {
            row.iter()
                .zip(&r_big)
                .map(|(c, r)| {
                    let v = c * Rational::from_integer(r.clone());
                    to_i64(&v.to_integer(), "image exponent")
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let r = r_big.iter().map(|r| to_i64(r, "root index")).collect::<Result<Vec<_>, _>>()?;
    Ok(MonomialMap { r, images })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigInt {
        BigInt::from(n)
    }

    fn bases(v: &[u64]) -> Vec<BigInt> {
        v.iter().map(|&b| big(b)).collect()
    }

    fn fact(n: u64) -> Vec<(u64, u32)> {
        factorize(&big(n), DEFAULT_TRIAL_BOUND)
            .unwrap()
            .into_iter()
            .map(|(p, e)| (p.try_into().unwrap(), e))
            .collect()
    }

    #[test]
    fn factorization() {
        assert_eq!(fact(12), [(2, 2), (3, 1)]);
        assert_eq!(fact(27), [(3, 3)]);
        assert_eq!(fact(3073), [(7, 1), (439, 1)]);
        assert_eq!(fact(2), [(2, 1)]);
        assert_eq!(fact(1_000_003), [(1_000_003, 1)]);
        assert!(factorize(&big(1), 10).is_err());

        // 1009^2 has no factor below 100 and is not prime
        let n = big(1009 * 1009);
        assert!(matches!(factorize(&n, 100), Err(LatticeError::NeedsLargerBound { .. })));
        assert_eq!(factorize(&n, 1009).unwrap(), [(big(1009), 2)]);
        // a large prime cofactor is certified by Miller-Rabin
        let p = big(1_000_000_007);
        assert_eq!(factorize(&(&p * big(6)), 100).unwrap(), [(big(2), 1), (big(3), 1), (p, 1)]);
    }

    #[test]
    fn miller_rabin_small_numbers() {
        let sieve: Vec<u64> = (2..2000).filter(|n| (2..*n).take_while(|d| d * d <= *n).all(|d| n % d != 0)).collect();
        for n in 2..2000u64 {
            assert_eq!(is_probable_prime(&big(n)), sieve.contains(&n), "{n}");
        }
    }

    #[test]
    fn ranks() {
        let m = |v: &[&[i64]]| -> Vec<Vec<BigInt>> {
            v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
        };
        assert_eq!(bareiss_rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(bareiss_rank(&m(&[&[0, 1], &[1, 0], &[1, 1]])), 2);
        assert_eq!(bareiss_rank(&m(&[&[2, 1, 0], &[0, 3, 0], &[2, 4, 0]])), 2);
        assert_eq!(bareiss_rank(&m(&[])), 0);
    }

    #[test]
    fn certificates() {
        let c = indep_certificate(&bases(&[2, 3]), DEFAULT_TRIAL_BOUND).unwrap();
        assert_eq!((c.rank, c.chosen.clone(), c.relations.len()), (2, vec![0, 1], 0));

        let c = indep_certificate(&bases(&[8, 27, 12, 18]), DEFAULT_TRIAL_BOUND).unwrap();
        assert_eq!(c.rank, 2);
        assert_eq!(c.chosen_bases(), bases(&[8, 27]));
        assert_eq!(
            c.relations,
            [
                Relation { index: 2, m_ii: 3, exps: vec![2, 1] },
                Relation { index: 3, m_ii: 3, exps: vec![1, 2] }
            ]
        );
        assert!(c.verify());

        let c = indep_certificate(&bases(&[4, 8]), DEFAULT_TRIAL_BOUND).unwrap();
        assert_eq!(c.relations, [Relation { index: 1, m_ii: 2, exps: vec![3] }]);

        // 6 = 2·3 relative to 2 and 3; 1/6 exponents need negative entries elsewhere
        let c = indep_certificate(&bases(&[12, 3, 2]), DEFAULT_TRIAL_BOUND).unwrap();
        assert_eq!(c.relations, [Relation { index: 2, m_ii: 2, exps: vec![1, -1] }]);
        assert!(c.verify());
    }

    #[test]
    fn images() {
        let img = |v: &[u64], d| {
            let c = indep_certificate(&bases(v), DEFAULT_TRIAL_BOUND).unwrap();
            monomial_images(&c, d).unwrap()
        };
        let m = img(&[2, 3], 1);
        assert_eq!((m.r.clone(), m.images.clone()), (vec![1, 1], vec![vec![1, 0], vec![0, 1]]));
        let m = img(&[8, 27, 12, 18], 1);
        assert_eq!(m.r, [3, 3]);
        assert_eq!(m.images, [vec![3, 0], vec![0, 3], vec![2, 1], vec![1, 2]]);
        let m = img(&[4, 8], 1);
        assert_eq!((m.r.clone(), m.images.clone()), (vec![2], vec![vec![2], vec![3]]));
        let m = img(&[4, 8], 2);
        assert_eq!((m.r.clone(), m.images.clone()), (vec![1], vec![vec![2], vec![3]]));
    }
}
