//! JSON documents emitted by the CLI. Every top-level document carries a
//! `schema` tag of the form `lacunary.<name>.v1`; see `docs/json-schema.md`.

use lacunary_core::coeffield::parse_rational;
use lacunary_core::{BigInt, ExponentVector, GaussianRational, Rational, SparsePoly};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

pub fn schema(name: &str) -> String {
    format!("lacunary.{name}.v1")
}

/// An exact number: a JSON integer when it fits in 64 bits, else a string.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    pub fn from_rational(q: &Rational) -> Num {
        match (q.is_integer(), q.numer().to_i64()) {
            (true, Some(n)) => Num::Int(n),
            _ => Num::Str(q.to_string()),
        }
    }

    pub fn from_int(n: &BigInt) -> Num {
        n.to_i64().map_or_else(|| Num::Str(n.to_string()), Num::Int)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub re: String,
    pub im: String,
}

/// Terms in canonical (descending) order.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_poly(p: &SparsePoly) -> Self {
        PolyJson {
            nvars: p.nvars(),
            terms: p
                .terms()
                .rev()
                .map(|(e, c)| TermJson { exp: e.0.clone(), re: c.re.to_string(), im: c.im.to_string() })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<SparsePoly, String> {
        let mut terms = Vec::new();
        for t in &self.terms {
            if t.exp.len() != self.nvars {
                return Err(format!("term {:?} does not have {} exponents", t.exp, self.nvars));
            }
            let re = parse_rational(&t.re).map_err(|e| e.to_string())?;
            let im = parse_rational(&t.im).map_err(|e| e.to_string())?;
            terms.push((ExponentVector(t.exp.clone()), GaussianRational::new(re, im)));
        }
        Ok(SparsePoly::from_terms(self.nvars, terms))
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SpanJson {
    pub start: usize,
    pub end: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ErrorJson {
    pub schema: String,
    /// `parse`, `domain`, `bound` or `io`.
    pub kind: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<SpanJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expected: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ExpandOut {
    pub schema: String,
    pub input: String,
    pub variables: Vec<String>,
    pub power: u32,
    pub text: String,
    pub term_count: usize,
    pub result: PolyJson,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ComposeOut {
    pub schema: String,
    pub f: String,
    pub g: String,
    pub variables: Vec<String>,
    pub text: String,
    pub term_count: usize,
    pub result: PolyJson,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct VandermondeOut {
    pub schema: String,
    pub d: u32,
    pub n: u32,
    pub value: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RelationJson {
    /// Input position of the dependent base.
    pub index: usize,
    pub base: String,
    /// `base^m_ii = Π chosen_j^exps_j`.
    pub m_ii: i64,
    pub exps: Vec<i64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub bases: Vec<String>,
    pub primes: Vec<String>,
    /// Row `i` holds the prime exponents of base `i`.
    pub matrix: Vec<Vec<u32>>,
    pub rank: usize,
    pub chosen: Vec<usize>,
    pub relations: Vec<RelationJson>,
    /// Big-integer reconstruction of every base and relation.
    pub verified: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct IndepOut {
    pub schema: String,
    pub sigma: usize,
    pub certificate: CertificateJson,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub b: [Num; 2],
    pub beta: [Num; 2],
    pub d: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct UhsOut {
    pub schema: String,
    pub input: String,
    pub status: String,
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    pub certificate: CertificateJson,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CellJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    pub suspected_typo: bool,
}

/// One row of the shipped classification data file.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RowJson {
    pub id: String,
    pub table: String,
    pub d: u32,
    pub multipliers: Vec<i64>,
    pub cells: Vec<CellJson>,
    pub pattern: Vec<(i64, String)>,
    pub base_table: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TablesFile {
    pub schema: String,
    pub rows: Vec<RowJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CellCheckJson {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed_value: Option<String>,
    pub expanded: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
    pub suspected_typo: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RowCheckOut {
    pub schema: String,
    pub row: String,
    pub d: u32,
    pub xi1: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi2: Option<String>,
    pub l1: i64,
    pub p: String,
    pub expansion: String,
    pub term_count: usize,
    pub expected_k: usize,
    pub exponents: Vec<i64>,
    pub expected_exponents: Vec<i64>,
    pub in_domain: bool,
    pub shape_ok: bool,
    pub cells: Vec<CellCheckJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MismatchJson {
    pub row: String,
    /// `i` in `ξ_i`.
    pub cell: usize,
    pub suspected_typo: bool,
    pub printed: String,
    /// The coefficient as a polynomial in `xi1, xi2`.
    pub expanded: String,
    /// Sample instantiations where the values differ.
    pub instances: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RhoJson {
    pub case: String,
    pub sigma: usize,
    pub rho: usize,
    pub f: String,
    pub g: String,
    pub composition: String,
    pub term_count: usize,
    pub shape_ok: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SweepOut {
    pub schema: String,
    pub rows: usize,
    pub instantiations: usize,
    /// Instantiations where some expanded `ξ_i` vanished (outside the rows' hypotheses).
    pub out_of_domain: usize,
    pub shape_failures: Vec<String>,
    pub mismatches: Vec<MismatchJson>,
    /// Flagged cells that nevertheless matched everywhere.
    pub flagged_but_matching: Vec<String>,
    pub rho: Vec<RhoJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct OracleConfigJson {
    pub d: u32,
    pub k: usize,
    pub max_deg: u32,
    pub grid: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct HitJson {
    pub p: String,
    pub expansion: String,
    pub xi1: String,
    pub l1: i64,
    pub matches: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct OracleOut {
    pub schema: String,
    pub config: OracleConfigJson,
    pub candidates: u64,
    pub hits: Vec<HitJson>,
    /// Hits that match no row or more than one.
    pub ambiguous: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PowerSupportJson {
    pub j: u32,
    pub support: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GapOut {
    pub schema: String,
    pub f: String,
    pub g: String,
    pub w: usize,
    pub c: usize,
    pub k: usize,
    pub per_power: Vec<PowerSupportJson>,
    pub cancelled: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SigmaposOut {
    pub schema: String,
    pub sigma: usize,
    pub h: usize,
    pub f: String,
    pub g: String,
    pub w: usize,
    pub c: usize,
    pub k: usize,
    pub expected_k: i64,
    pub holds: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RuzsaOut {
    pub schema: String,
    pub sigma: usize,
    pub a_size: usize,
    pub b_size: usize,
    pub sumset_size: usize,
    pub dim: usize,
    pub bound: i64,
    pub slack: i64,
    pub status: String,
}

/// Search configuration for `kmin-search`, also accepted as a `--config` file.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct KminConfigJson {
    pub sigma: usize,
    #[serde(rename = "box")]
    pub exp_box: [i64; 2],
    pub h_max: usize,
    pub f: Vec<String>,
    #[serde(default = "default_kmin_coeffs")]
    pub coeffs: Vec<String>,
}

pub fn default_kmin_coeffs() -> Vec<String> {
    vec!["1".into(), "-1".into()]
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct KminWitnessJson {
    pub k: usize,
    pub f: String,
    pub g: String,
    pub composition: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct KminOut {
    pub schema: String,
    pub config: KminConfigJson,
    pub examined: u64,
    pub admissible: u64,
    pub best: KminWitnessJson,
    /// `2σ - 1`.
    pub lower_bound: usize,
    /// `σ(σ+1)/2`.
    pub upper_bound: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PartJson {
    pub v: Vec<i64>,
    pub c: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FactorizationJson {
    pub parts: Vec<PartJson>,
    pub total: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct VecfactOut {
    pub schema: String,
    pub w: Vec<i64>,
    pub generators: Vec<Vec<i64>>,
    pub j: Vec<u32>,
    pub c_max: u32,
    pub factorizations: Vec<FactorizationJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceJson {
    pub id: String,
    pub x: u64,
    pub d: u32,
    pub param: i64,
    pub m: Vec<i64>,
    pub y: String,
    pub value: String,
    pub verified: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DigitsVerifyOut {
    pub schema: String,
    pub instances: Vec<InstanceJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FamilyMatchJson {
    pub id: String,
    pub param: i64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SolutionJson {
    pub schema: String,
    pub x: u64,
    pub d: u32,
    pub k: usize,
    pub m: Vec<i64>,
    pub digits: Vec<u64>,
    pub y: String,
    pub value: String,
    pub matches: Vec<FamilyMatchJson>,
    /// `m_{k-2} <= c_left · m_{k-1}`.
    pub gap_left: bool,
    /// `m_1 >= c_right · m_{k-1}`.
    pub gap_right: bool,
    /// A gap condition holds but no family explains the solution.
    pub finding: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DigitsConfigJson {
    pub x: u64,
    pub d: u32,
    pub k: usize,
    pub m_max: i64,
    pub digits: Vec<u64>,
    pub c_left: String,
    pub c_right: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DigitsSummary {
    pub schema: String,
    pub config: DigitsConfigJson,
    pub shards_total: usize,
    pub shards_done: usize,
    pub complete: bool,
    pub solutions: usize,
    pub matched: usize,
    pub findings: Vec<Vec<i64>>,
}

/// Resume state for `digits-search`: shards are values of the leading exponent.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DigitsCheckpoint {
    pub schema: String,
    pub config: DigitsConfigJson,
    /// Leading exponent of the next shard to run.
    pub next_top: i64,
    pub solutions: Vec<SolutionJson>,
}
