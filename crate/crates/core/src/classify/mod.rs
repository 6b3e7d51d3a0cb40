//! Classification of lacunary powers `P(T)^d` with at most five terms:
//! row verification by expansion, the fractional-binomial identity behind
//! it, the reciprocal pairing of rows, a grid oracle that rediscovers the
//! rows, and the composition solutions with one or two extra monomials.

mod oracle;
mod rho;
pub mod tables;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::coeffield::{binom_fractional, GaussianRational, Rational};
use crate::parser::{parse_poly, ParseError};
use crate::polycore::{ExponentVector, MonomialImage, PolyError, SparsePoly, UniPoly};

pub use oracle::{match_rows, oracle_search, oracle_shard, oracle_space, OracleConfig, OracleHit};
pub use rho::{verify_rho_solutions, RhoCase, RhoError, RhoReport};
pub use tables::{builtin_rows, find_row, Cell, CellKind, TableRow, FORMULA_VARS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassifyError {
    ZeroXi1,
    MissingXi2(String),
    InvalidL1(i64),
    Formula { row: String, formula: String, error: ParseError },
    /// Expected `P(0) = 1`.
    NotNormalized,
    ConstantPolynomial,
    NegativeExponent(i64),
    Poly(PolyError),
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::ZeroXi1 => f.write_str("xi1 must be nonzero"),
            ClassifyError::MissingXi2(id) => write!(f, "row {id} needs a value for xi2"),
            ClassifyError::InvalidL1(l) => write!(f, "l1 must be positive, got {l}"),
            ClassifyError::Formula { row, formula, error } => {
                write!(f, "row {row}: cannot parse formula '{formula}': {error}")
            }
            ClassifyError::NotNormalized => f.write_str("polynomial must have constant term 1"),
            ClassifyError::ConstantPolynomial => f.write_str("polynomial is constant"),
            ClassifyError::NegativeExponent(e) => write!(f, "negative exponent {e} in a polynomial"),
            ClassifyError::Poly(e) => fmt::Display::fmt(e, f),
        }
    }
}

impl From<PolyError> for ClassifyError {
    fn from(e: PolyError) -> Self {
        ClassifyError::Poly(e)
    }
}

/// `Σ_{x_1+…+x_d = n, x_j ≥ 0} ∏_j binom(1/d, x_j)`, computed as the
/// coefficient of `x^n` in the truncated series `(Σ_j binom(1/d, j) x^j)^d`.
pub fn vandermonde_sum(d: u32, n: u32) -> Rational {
    let n = n as usize;
    let series: Vec<Rational> = (0..=n as u32).map(|j| binom_fractional(d, j)).collect();
    let mut acc = vec![Rational::zero(); n + 1];
    acc[0] = Rational::one();
    for _ in 0..d {
        let mut next = vec![Rational::zero(); n + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, s) in series.iter().enumerate().take(n + 1 - i) {
                next[i + j] += a * s;
            }
        }
        acc = next;
    }
    acc.swap_remove(n)
}

fn formula_vars() -> Vec<String> {
    FORMULA_VARS.iter().map(|s| s.to_string()).collect()
}

/// A row with its formulas parsed into polynomials in `xi1, xi2`.
#[derive(Clone, Debug)]
pub struct CompiledRow {
    pub row: TableRow,
    pub pattern: Vec<(i64, SparsePoly)>,
    /// Printed formula per cell (`None` for free or unprinted cells).
    pub cells: Vec<Option<SparsePoly>>,
}

impl CompiledRow {
    pub fn new(row: &TableRow) -> Result<Self, ClassifyError> {
        let vars = formula_vars();
        let parse = |f: &str| {
            parse_poly(f, &vars).map_err(|error| ClassifyError::Formula {
                row: row.id.clone(),
                formula: f.to_string(),
                error,
            })
        };
        let pattern = row.pattern.iter().map(|(m, f)| Ok((*m, parse(f)?))).collect::<Result<_, ClassifyError>>()?;
        let cells = row
            .cells
            .iter()
            .map(|c| match &c.kind {
                CellKind::Formula(f) => parse(f).map(Some),
                _ => Ok(None),
            })
            .collect::<Result<_, _>>()?;
        Ok(CompiledRow { row: row.clone(), pattern, cells })
    }

    /// `P(T)` at the given parameters.
    pub fn instantiate(
        &self,
        xi1: &GaussianRational,
        xi2: Option<&GaussianRational>,
        l1: i64,
    ) -> Result<UniPoly, ClassifyError> {
        if xi1.is_zero() {
            return Err(ClassifyError::ZeroXi1);
        }
        if l1 <= 0 {
            return Err(ClassifyError::InvalidL1(l1));
        }
        let xi2 = match xi2 {
            Some(v) => v.clone(),
            None if self.row.has_free_cell() => return Err(ClassifyError::MissingXi2(self.row.id.clone())),
            None => GaussianRational::zero(),
        };
        let point = [xi1.clone(), xi2];
        let mut terms = Vec::with_capacity(self.pattern.len());
        for (m, f) in &self.pattern {
            let e = m.checked_mul(l1).ok_or(PolyError::ExponentOverflow)?;
            terms.push((e, f.eval(&point).expect("formulas have no negative exponents")));
        }
        Ok(UniPoly::from_coeffs(terms))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellCheck {
    /// `i` in `ξ_i`.
    pub index: usize,
    pub printed: Option<String>,
    pub printed_value: Option<GaussianRational>,
    pub expanded: GaussianRational,
    /// `None` when nothing is printed. A free cell is compared with the
    /// supplied `ξ_2`.
    pub matches: Option<bool>,
    pub suspected_typo: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReport {
    pub row_id: String,
    pub d: u32,
    pub l1: i64,
    pub xi1: GaussianRational,
    pub xi2: Option<GaussianRational>,
    pub p: UniPoly,
    pub expansion: UniPoly,
    pub term_count: usize,
    pub expected_k: usize,
    pub exponents: Vec<i64>,
    pub expected_exponents: Vec<i64>,
    /// The `T^{l_1}` coefficient of the expansion equals the input `ξ_1`.
    pub xi1_consistent: bool,
    /// Every expanded `ξ_i` is nonzero (the rows' standing hypothesis).
    pub in_domain: bool,
    pub cells: Vec<CellCheck>,
}

impl RowReport {
    pub fn shape_ok(&self) -> bool {
        self.term_count == self.expected_k && self.exponents == self.expected_exponents && self.xi1_consistent
    }

    /// Indices `i` whose printed `ξ_i` disagrees with the expansion.
    pub fn mismatches(&self) -> Vec<usize> {
        self.cells.iter().filter(|c| c.matches == Some(false)).map(|c| c.index).collect()
    }
}

/// Builds `P(T)` from the row's pattern, expands `P^d`, and compares term
/// count, exponents and every printed coefficient with the expansion.
pub fn verify_row(
    row: &TableRow,
    xi1: &GaussianRational,
    xi2: Option<&GaussianRational>,
    l1: i64,
) -> Result<RowReport, ClassifyError> {
    verify_compiled(&CompiledRow::new(row)?, xi1, xi2, l1)
}

pub fn verify_compiled(
    c: &CompiledRow,
    xi1: &GaussianRational,
    xi2: Option<&GaussianRational>,
    l1: i64,
) -> Result<RowReport, ClassifyError> {
    let row = &c.row;
    let p = c.instantiate(xi1, xi2, l1)?;
    let expansion = p.pow(row.d)?;
    let point = [xi1.clone(), xi2.cloned().unwrap_or_else(GaussianRational::zero)];
    let mut expected_exponents = vec![0];
    expected_exponents.extend(row.multipliers.iter().map(|m| m * l1));
    let coeff_at = |e: i64| expansion.coeff(e).cloned().unwrap_or_else(GaussianRational::zero);

    let cells: Vec<CellCheck> = row
        .cells
        .iter()
        .zip(&c.cells)
        .enumerate()
        .map(|(j, (cell, formula))| {
            let expanded = coeff_at(row.multipliers[j + 1] * l1);
            let printed_value = match (&cell.kind, formula) {
                (CellKind::Free, _) => xi2.cloned(),
                (_, Some(f)) => Some(f.eval(&point).expect("formulas have no negative exponents")),
                _ => None,
            };
            let matches = printed_value.as_ref().map(|v| *v == expanded);
            CellCheck {
                index: j + 2,
                printed: match &cell.kind {
                    CellKind::Formula(f) => Some(f.clone()),
                    _ => None,
                },
                printed_value,
                expanded,
                matches,
                suspected_typo: cell.suspected_typo,
            }
        })
        .collect();

    let in_domain = expected_exponents[1..].iter().all(|&e| !coeff_at(e).is_zero());
    Ok(RowReport {
        row_id: row.id.clone(),
        d: row.d,
        l1,
        xi1: xi1.clone(),
        xi2: xi2.cloned(),
        xi1_consistent: coeff_at(l1) == *xi1,
        term_count: expansion.term_count(),
        expected_k: row.k(),
        exponents: expansion.coeffs().map(|(e, _)| e).collect(),
        expected_exponents,
        in_domain,
        cells,
        p,
        expansion,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicCell {
    pub index: usize,
    /// Coefficient of `T^{m_i}` in `P^d` as a polynomial in `xi1, xi2`.
    pub expanded: SparsePoly,
    pub printed: Option<SparsePoly>,
    pub matches: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicReport {
    pub row_id: String,
    pub cells: Vec<SymbolicCell>,
    /// Exponents (in units of `l_1`) of `P^d` outside the row's list.
    pub extra_exponents: Vec<i64>,
}

/// Expands `P^d` with `ξ_1, ξ_2` kept symbolic (and `l_1 = 1`), so the printed
/// cells are compared as polynomials rather than at sample points.
pub fn verify_row_symbolic(row: &TableRow) -> Result<SymbolicReport, ClassifyError> {
    let c = CompiledRow::new(row)?;
    let lift = [MonomialImage::power(&[1, 0, 0]), MonomialImage::power(&[0, 1, 0])];
    let mut p = SparsePoly::zero(3);
    for (m, f) in &c.pattern {
        let t = SparsePoly::monomial(3, GaussianRational::one(), ExponentVector(vec![0, 0, *m]));
        p = p.add(&f.substitute_monomial(&lift)?.mul(&t)?)?;
    }
    let power = p.pow(row.d)?;
    let coeff_of = |m: i64| {
        SparsePoly::from_terms(
            2,
            power.terms().filter(|(e, _)| e.0[2] == m).map(|(e, c)| (ExponentVector(vec![e.0[0], e.0[1]]), c.clone())),
        )
    };
    let cells = c
        .cells
        .iter()
        .enumerate()
        .map(|(j, printed)| {
            let expanded = coeff_of(row.multipliers[j + 1]);
            // A free cell is the parameter itself.
            let printed = match row.cells[j].kind {
                CellKind::Free => Some(SparsePoly::var(2, 1)),
                _ => printed.clone(),
            };
            let matches = printed.as_ref().map(|pr| *pr == expanded);
            SymbolicCell { index: j + 2, expanded, printed, matches }
        })
        .collect();
    let mut extra: Vec<i64> = power
        .terms()
        .map(|(e, _)| e.0[2])
        .filter(|m| *m != 0 && !row.multipliers.contains(m))
        .collect();
    extra.dedup();
    Ok(SymbolicReport { row_id: row.id.clone(), cells, extra_exponents: extra })
}

/// Renders a formula polynomial with the `xi1, xi2` names.
pub fn render_formula(p: &SparsePoly) -> String {
    p.render(&formula_vars())
}

/// `Q(T) = T^n · P(1/T) / a_n` for `P = 1 + … + a_n T^n`.
///
/// `Q(0) = 1` and `Q^d = T^{nd} · P(1/T)^d / a_n^d`, i.e. the power of `P`
/// read backwards and rescaled by its leading coefficient `ξ_{k-1} = a_n^d`;
/// the `d`-th root of `ξ_{k-1}` is `a_n` itself, so the transform never leaves
/// the coefficient field. Applying it twice returns `P`.
pub fn reciprocal_transform(p: &UniPoly) -> Result<UniPoly, ClassifyError> {
    if p.coeff(0).map(|c| c.is_one()) != Some(true) {
        return Err(ClassifyError::NotNormalized);
    }
    if let Some(low) = p.low_degree().filter(|&l| l < 0) {
        return Err(ClassifyError::NegativeExponent(low));
    }
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Err(ClassifyError::ConstantPolynomial);
    }
    let lead_inv = p.coeff(n).unwrap().inv().unwrap();
    Ok(UniPoly::from_coeffs(p.coeffs().map(|(e, c)| (n - e, c * &lead_inv))))
}

/// Re-reads `P^d = 1 + Σ ξ_i T^{l_i}` as `(ξ_1, l_1)` from its lowest
/// positive-degree term.
pub fn normalization(expansion: &UniPoly) -> Option<(GaussianRational, i64)> {
    expansion.coeffs().find(|(e, _)| *e > 0).map(|(e, c)| (c.clone(), e))
}
