use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use lacunary_core::classify::{
    builtin_rows, find_row, oracle_space, render_formula, vandermonde_sum, verify_compiled, verify_rho_solutions,
    verify_row, verify_row_symbolic, CellKind, CompiledRow, OracleConfig, RhoCase, TableRow,
};
use lacunary_core::coeffield::parse_rational;
use lacunary_core::compgap::{gap_report, ruzsa_bound_check, sigmapos_witness, vector_factorizations, KminConfig};
use lacunary_core::digits::{family_instance, gap_condition, DigitSearchConfig, DigitSolution, GapSide, FAMILIES};
use lacunary_core::lattice::{indep_certificate, IndepCertificate, LatticeError};
use lacunary_core::parser::{collect_variables, parse_expsum, parse_poly, ParseError};
use lacunary_core::uhs::uhs_verdict;
use lacunary_core::{compose, BigInt, ExponentVector, GaussianRational, Rational, SparsePoly, UniPoly};
use serde::Serialize;

use crate::args::*;
use crate::dto::*;
use crate::{par, tables_data, CliError, CliResult};

/// Largest oracle grid we are willing to enumerate.
const ORACLE_LIMIT: u64 = 100_000_000;

pub(crate) fn dispatch(cmd: &Command, format: Format, threads: usize) -> CliResult<String> {
    let json = format == Format::Json;
    match cmd {
        Command::Expand(a) => expand(a, json),
        Command::Compose(a) => compose_cmd(a, json),
        Command::VerifyTables(a) => verify_tables(a, json),
        Command::OracleSearch(a) => oracle(a, json),
        Command::Vandermonde(a) => vandermonde(a, json),
        Command::Indep(a) => indep(a, json),
        Command::UhsCheck(a) => uhs(a, json),
        Command::GapReport(a) => gap(a, json),
        Command::KminSearch(a) => kmin(a, json),
        Command::Vecfact(a) => vecfact(a, json),
        Command::DigitsVerify(a) => digits_verify(a, json),
        Command::DigitsSearch(a) => digits_search(a, json, threads),
    }
}

fn line<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("documents serialize") + "\n"
}

fn parse_failure(what: &str, src: &str) -> impl FnOnce(ParseError) -> CliError {
    let (what, src) = (what.to_string(), src.to_string());
    move |error| CliError::Parse { what, src, error }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))
}

fn input(expr: &Option<String>, file: &Option<std::path::PathBuf>) -> CliResult<String> {
    match (expr, file) {
        (Some(e), _) => Ok(e.clone()),
        (None, Some(p)) => Ok(read_text(p)?.trim().to_string()),
        (None, None) => Err(CliError::usage("an expression or --file is required")),
    }
}

fn number(what: &str, s: &str) -> CliResult<GaussianRational> {
    s.trim().parse().map_err(|e| CliError::domain(format!("invalid {what} '{s}': {e}")))
}

fn rational(what: &str, s: &str) -> CliResult<Rational> {
    parse_rational(s.trim()).map_err(|e| CliError::domain(format!("invalid {what} '{s}': {e}")))
}

fn variables(src: &str, given: &Option<Vec<String>>, what: &str) -> CliResult<Vec<String>> {
    let vars = match given {
        Some(v) => v.iter().map(|s| s.trim().to_string()).collect(),
        None => collect_variables(src).map_err(parse_failure(what, src))?,
    };
    Ok(if vars.is_empty() { vec!["T".to_string()] } else { vars })
}

fn multivariate(what: &str, src: &str, given: &Option<Vec<String>>) -> CliResult<(SparsePoly, Vec<String>)> {
    let vars = variables(src, given, what)?;
    let p = parse_poly(src, &vars).map_err(parse_failure(what, src))?;
    Ok((p, vars))
}

fn univariate(what: &str, src: &str) -> CliResult<UniPoly> {
    let vars = variables(src, &None, what)?;
    if vars.len() > 1 {
        return Err(CliError::domain(format!("{what} must use a single variable, found {}", vars.join(", "))));
    }
    let p = parse_poly(src, &vars).map_err(parse_failure(what, src))?;
    UniPoly::new(p).map_err(CliError::domain)
}

fn vector(what: &str, s: &str) -> CliResult<ExponentVector> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| CliError::domain(format!("invalid integer '{x}' in {what}"))))
        .collect::<CliResult<Vec<_>>>()
        .map(ExponentVector)
}

fn points(what: &str, s: &str) -> CliResult<Vec<ExponentVector>> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(|p| vector(what, p)).collect()
}

fn expand(a: &ExpandArgs, json: bool) -> CliResult<String> {
    let src = input(&a.expr, &a.file)?;
    let (p, vars) = multivariate("expression", &src, &a.vars)?;
    let q = p.pow(a.power).map_err(CliError::domain)?;
    let text = q.render(&vars);
    if !json {
        return Ok(text + "\n");
    }
    Ok(line(&ExpandOut {
        schema: schema("expand"),
        input: src,
        variables: vars,
        power: a.power,
        text,
        term_count: q.term_count(),
        result: PolyJson::from_poly(&q),
    }))
}

fn compose_cmd(a: &ComposeArgs, json: bool) -> CliResult<String> {
    let f = univariate("f", &a.f)?;
    let (g, vars) = multivariate("g", &a.g, &a.vars)?;
    let c = compose(&f, &g).map_err(CliError::domain)?;
    let text = c.render(&vars);
    if !json {
        return Ok(format!("{text}\nterms: {}\n", c.term_count()));
    }
    Ok(line(&ComposeOut {
        schema: schema("compose"),
        f: f.to_string(),
        g: g.render(&vars),
        variables: vars,
        text,
        term_count: c.term_count(),
        result: PolyJson::from_poly(&c),
    }))
}

/// Sample values used by the full sweep for `ξ_1` and a free `ξ_2`.
pub const SWEEP_VALUES: [&str; 5] = ["1", "2", "-1", "1/2", "1+i"];

fn rho_cases() -> Vec<RhoCase> {
    let g = |s: &str| s.parse::<GaussianRational>().expect("literal");
    vec![
        RhoCase::Rho1Sol1 { a1: g("8"), a2: g("3"), m1: 3, m2: 1, r: 2 },
        RhoCase::Rho1Sol1 { a1: g("-1"), a2: g("1/2"), m1: 2, m2: 1, r: 1 },
        RhoCase::Rho1Sol2 { a1: g("1"), a2: g("4"), l1: 2, l2: 2 },
        RhoCase::Rho1Sol2 { a1: g("-1"), a2: g("9/4"), l1: 4, l2: 2 },
        RhoCase::Rho2Sol1 { a1: g("1"), a2: g("1"), l1: 3, l2: 3 },
        RhoCase::Rho2Sol1 { a1: g("8"), a2: g("-27"), l1: 6, l2: 3 },
        RhoCase::Rho2Sol2 { a1: g("1"), a2: g("4"), l1: 4, l2: 4 },
        RhoCase::Rho2Sol2 { a1: g("4"), a2: g("1"), l1: 8, l2: 4 },
    ]
}

fn rho_json(case: &RhoCase) -> CliResult<RhoJson> {
    let r = verify_rho_solutions(case).map_err(|e| CliError::domain(format!("{}: {e}", case.name())))?;
    let names = xnames(r.sigma);
    Ok(RhoJson {
        case: case.name().into(),
        sigma: r.sigma,
        rho: r.rho,
        f: r.f.to_string(),
        g: r.g.render(&names),
        composition: r.composition.render(&names),
        term_count: r.term_count,
        shape_ok: r.shape_ok,
    })
}

/// `X1, …, Xn` even for one variable: inner polynomials never use `T`.
fn xnames(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

fn cell_label(row: &str, index: usize) -> String {
    format!("{row}:xi{index}")
}

/// Verifies every row at every sample point and summarizes disagreements.
pub fn sweep(rows: &[TableRow]) -> CliResult<SweepOut> {
    let values: Vec<GaussianRational> = SWEEP_VALUES.iter().map(|s| s.parse().expect("literal")).collect();
    let mut out = SweepOut {
        schema: schema("verify-tables"),
        rows: rows.len(),
        instantiations: 0,
        out_of_domain: 0,
        shape_failures: Vec::new(),
        mismatches: Vec::new(),
        flagged_but_matching: Vec::new(),
        rho: Vec::new(),
    };
    for row in rows {
        let compiled = CompiledRow::new(row).map_err(CliError::domain)?;
        let symbolic = verify_row_symbolic(row).map_err(CliError::domain)?;
        let xi2s: Vec<Option<&GaussianRational>> =
            if row.has_free_cell() { values.iter().map(Some).collect() } else { vec![None] };
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for xi1 in &values {
            for xi2 in &xi2s {
                for l1 in 1..=3 {
                    out.instantiations += 1;
                    let r = verify_compiled(&compiled, xi1, *xi2, l1).map_err(CliError::domain)?;
                    if !r.in_domain {
                        out.out_of_domain += 1;
                        continue;
                    }
                    if !r.shape_ok() {
                        let xi2 = xi2.map(|v| format!(" xi2={v}")).unwrap_or_default();
                        out.shape_failures.push(format!("{} xi1={xi1}{xi2} l1={l1}", row.id));
                    }
                    for i in r.mismatches() {
                        *counts.entry(i).or_default() += 1;
                    }
                }
            }
        }
        for (j, cell) in row.cells.iter().enumerate() {
            let index = j + 2;
            let instances = counts.get(&index).copied().unwrap_or(0);
            let sym = symbolic.cells.iter().find(|c| c.index == index);
            let mismatch = instances > 0 || sym.and_then(|c| c.matches) == Some(false);
            if mismatch {
                let printed = match &cell.kind {
                    CellKind::Formula(f) => f.clone(),
                    CellKind::Free => "xi2".into(),
                    CellKind::NotPrinted => String::new(),
                };
                out.mismatches.push(MismatchJson {
                    row: row.id.clone(),
                    cell: index,
                    suspected_typo: cell.suspected_typo,
                    printed,
                    expanded: sym.map(|c| render_formula(&c.expanded)).unwrap_or_default(),
                    instances,
                });
            } else if cell.suspected_typo {
                out.flagged_but_matching.push(cell_label(&row.id, index));
            }
        }
    }
    for case in rho_cases() {
        out.rho.push(rho_json(&case)?);
    }
    Ok(out)
}

fn sweep_text(s: &SweepOut) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "rows: {}  instantiations: {}  out of domain: {}", s.rows, s.instantiations, s.out_of_domain);
    let _ = writeln!(t, "shape failures: {}", s.shape_failures.len());
    for f in &s.shape_failures {
        let _ = writeln!(t, "  {f}");
    }
    let _ = writeln!(t, "coefficient mismatches: {}", s.mismatches.len());
    for m in &s.mismatches {
        let flag = if m.suspected_typo { "flagged" } else { "UNFLAGGED" };
        let _ = writeln!(
            t,
            "  {} [{flag}] printed {}  expansion {}  ({} instances)",
            cell_label(&m.row, m.cell),
            m.printed,
            m.expanded,
            m.instances
        );
    }
    for c in &s.flagged_but_matching {
        let _ = writeln!(t, "  {c} flagged but matches");
    }
    for r in &s.rho {
        let ok = if r.shape_ok { "ok" } else { "FAILED" };
        let _ = writeln!(t, "{}: f = {}, g = {}, f(g) = {} [{} terms, {ok}]", r.case, r.f, r.g, r.composition, r.term_count);
    }
    t
}

fn load_rows(a: &VerifyTablesArgs) -> CliResult<Vec<TableRow>> {
    match &a.data {
        Some(p) => tables_data::parse_file(&read_text(p)?)
            .map_err(|e| CliError::domain(format!("{}: {e}", p.display()))),
        None => Ok(builtin_rows()),
    }
}

fn verify_tables(a: &VerifyTablesArgs, json: bool) -> CliResult<String> {
    if a.dump_data {
        let rows = load_rows(a)?;
        let file = TablesFile { schema: schema("tables"), rows: rows.iter().map(tables_data::to_json).collect() };
        return Ok(tables_data::render_file(&file));
    }
    let rows = load_rows(a)?;
    let Some(id) = &a.row else {
        let s = sweep(&rows)?;
        return Ok(if json { line(&s) } else { sweep_text(&s) });
    };
    let row = find_row(&rows, id).ok_or_else(|| CliError::domain(format!("unknown row '{id}'")))?;
    let xi1 = number("xi1", a.xi1.as_deref().unwrap_or_default())?;
    let xi2 = a.xi2.as_deref().map(|s| number("xi2", s)).transpose()?;
    let r = verify_row(row, &xi1, xi2.as_ref(), a.l1).map_err(CliError::domain)?;
    let out = RowCheckOut {
        schema: schema("row-check"),
        row: r.row_id.clone(),
        d: r.d,
        xi1: r.xi1.to_string(),
        xi2: r.xi2.as_ref().map(|v| v.to_string()),
        l1: r.l1,
        p: r.p.to_string(),
        expansion: r.expansion.to_string(),
        term_count: r.term_count,
        expected_k: r.expected_k,
        exponents: r.exponents.clone(),
        expected_exponents: r.expected_exponents.clone(),
        in_domain: r.in_domain,
        shape_ok: r.shape_ok(),
        cells: r
            .cells
            .iter()
            .map(|c| CellCheckJson {
                index: c.index,
                printed: c.printed.clone(),
                printed_value: c.printed_value.as_ref().map(|v| v.to_string()),
                expanded: c.expanded.to_string(),
                matches: c.matches,
                suspected_typo: c.suspected_typo,
            })
            .collect(),
    };
    if json {
        return Ok(line(&out));
    }
    let mut t = format!("P = {}\nP^{} = {}\n", out.p, out.d, out.expansion);
    let shape = if out.shape_ok { "ok" } else { "FAILED" };
    let _ = writeln!(t, "terms {} (expected {}), exponents {:?}: {shape}", out.term_count, out.expected_k, out.exponents);
    for c in &out.cells {
        let verdict = match c.matches {
            Some(true) => "match",
            Some(false) if c.suspected_typo => "mismatch (flagged)",
            Some(false) => "MISMATCH",
            None => "not printed",
        };
        let _ = writeln!(t, "xi{} = {}: printed {}  {verdict}", c.index, c.expanded, c.printed.as_deref().unwrap_or("-"));
    }
    Ok(t)
}

fn oracle(a: &OracleArgs, json: bool) -> CliResult<String> {
    if a.d == 0 || a.k == 0 || a.max_deg == 0 {
        return Err(CliError::domain("--d, --k and --max-deg must be positive"));
    }
    let grid = a.grid.iter().map(|s| number("grid value", s)).collect::<CliResult<Vec<_>>>()?;
    let cfg = OracleConfig { d: a.d, k: a.k, max_deg: a.max_deg, grid };
    let space = oracle_space(&cfg)
        .filter(|&n| n <= ORACLE_LIMIT)
        .ok_or_else(|| CliError::bound(format!("grid too large: more than {ORACLE_LIMIT} candidates")))?;
    let hits = par::oracle_search(&cfg, &builtin_rows()).map_err(CliError::domain)?;
    let hits: Vec<HitJson> = hits
        .iter()
        .map(|h| HitJson {
            p: h.p.to_string(),
            expansion: h.expansion.to_string(),
            xi1: h.xi1.to_string(),
            l1: h.l1,
            matches: h.matches.clone(),
        })
        .collect();
    let out = OracleOut {
        schema: schema("oracle-search"),
        config: OracleConfigJson {
            d: cfg.d,
            k: cfg.k,
            max_deg: cfg.max_deg,
            grid: cfg.values().iter().map(|v| v.to_string()).collect(),
        },
        candidates: space.saturating_sub(1),
        ambiguous: hits.iter().filter(|h| h.matches.len() != 1).count(),
        hits,
    };
    if json {
        return Ok(line(&out));
    }
    let mut t = format!("{} candidates, {} hits, {} not matching exactly one row\n", out.candidates, out.hits.len(), out.ambiguous);
    for h in &out.hits {
        let _ = writeln!(t, "P = {}  ->  {}  [{}]", h.p, h.expansion, h.matches.join(", "));
    }
    Ok(t)
}

fn vandermonde(a: &VandermondeArgs, json: bool) -> CliResult<String> {
    if a.d == 0 || a.n == 0 || a.d > 10_000 || a.n > 10_000 {
        return Err(CliError::bound("--d and --n must lie in 1..=10000"));
    }
    let value = vandermonde_sum(a.d, a.n).to_string();
    if !json {
        return Ok(value + "\n");
    }
    Ok(line(&VandermondeOut { schema: schema("vandermonde"), d: a.d, n: a.n, value }))
}

fn lattice_error(e: LatticeError) -> CliError {
    match e {
        LatticeError::NeedsLargerBound { .. } => CliError::bound(e),
        _ => CliError::domain(e),
    }
}

fn certificate_json(c: &IndepCertificate) -> CertificateJson {
    CertificateJson {
        bases: c.table.bases.iter().map(|b| b.to_string()).collect(),
        primes: c.table.primes.iter().map(|p| p.to_string()).collect(),
        matrix: c.table.matrix.clone(),
        rank: c.rank,
        chosen: c.chosen.clone(),
        relations: c
            .relations
            .iter()
            .map(|r| RelationJson {
                index: r.index,
                base: c.table.bases[r.index].to_string(),
                m_ii: r.m_ii,
                exps: r.exps.clone(),
            })
            .collect(),
        verified: c.verify(),
    }
}

fn certificate_text(c: &CertificateJson) -> String {
    let chosen: Vec<&str> = c.chosen.iter().map(|&i| c.bases[i].as_str()).collect();
    let mut t = format!("rank {}: independent {}\n", c.rank, chosen.join(", "));
    for r in &c.relations {
        let rhs: Vec<String> = chosen
            .iter()
            .zip(&r.exps)
            .filter(|(_, e)| **e != 0)
            .map(|(b, e)| if *e == 1 { b.to_string() } else { format!("{b}^{e}") })
            .collect();
        let rhs = if rhs.is_empty() { "1".to_string() } else { rhs.join(" * ") };
        let _ = writeln!(t, "{}^{} = {rhs}", r.base, r.m_ii);
    }
    let _ = writeln!(t, "verified: {}", c.verified);
    t
}

fn indep(a: &IndepArgs, json: bool) -> CliResult<String> {
    let bases = a
        .bases
        .iter()
        .map(|s| s.trim().parse::<BigInt>().map_err(|_| CliError::domain(format!("invalid integer '{s}'"))))
        .collect::<CliResult<Vec<_>>>()?;
    let cert = indep_certificate(&bases, a.bound).map_err(lattice_error)?;
    let c = certificate_json(&cert);
    if !json {
        return Ok(certificate_text(&c));
    }
    Ok(line(&IndepOut { schema: schema("indep"), sigma: cert.rank, certificate: c }))
}

fn uhs(a: &UhsArgs, json: bool) -> CliResult<String> {
    let src = input(&a.expr, &a.file)?;
    let alpha = parse_expsum(&src).map_err(parse_failure("exponential sum", &src))?;
    let v = uhs_verdict(&alpha, a.bound).map_err(lattice_error)?;
    if !json {
        let mut t = v.summary() + "\n";
        if let Some(w) = &v.witness {
            let _ = writeln!(t, "witness: {w}");
        }
        return Ok(t);
    }
    Ok(line(&UhsOut {
        schema: schema("uhs-check"),
        input: alpha.to_string(),
        status: v.status.as_str().into(),
        rule: v.rule.as_str().into(),
        witness: v.witness.as_ref().map(|w| WitnessJson {
            b: [Num::from_rational(&w.b1), Num::from_rational(&w.b2)],
            beta: [Num::from_int(&w.beta1), Num::from_int(&w.beta2)],
            d: w.d,
        }),
        certificate: certificate_json(&v.certificate),
    }))
}

fn gap(a: &GapArgs, json: bool) -> CliResult<String> {
    if let Some(w) = &a.witness {
        let [sigma, h] = w[..] else {
            return Err(CliError::usage("--witness takes two values: sigma,h"));
        };
        let r = sigmapos_witness(sigma, h).map_err(CliError::domain)?;
        let names = xnames(sigma);
        let out = SigmaposOut {
            schema: schema("sigmapos"),
            sigma,
            h,
            f: r.f.to_string(),
            g: r.g.render(&names),
            w: r.report.w,
            c: r.report.c,
            k: r.report.k,
            expected_k: r.expected_k,
            holds: r.holds,
        };
        if json {
            return Ok(line(&out));
        }
        let verdict = if out.holds { "equality holds" } else { "equality FAILS" };
        return Ok(format!("g = {}\nk = {} (sigma*h - sigma(sigma-1)/2 = {}): {verdict}\n", out.g, out.k, out.expected_k));
    }
    if let (Some(sa), Some(sb)) = (&a.set_a, &a.set_b) {
        let r = ruzsa_bound_check(&points("A", sa)?, &points("B", sb)?).map_err(CliError::domain)?;
        let out = RuzsaOut {
            schema: schema("ruzsa"),
            sigma: r.sigma,
            a_size: r.a_size,
            b_size: r.b_size,
            sumset_size: r.sumset_size,
            dim: r.dim,
            bound: r.bound,
            slack: r.slack,
            status: r.status.as_str().into(),
        };
        if json {
            return Ok(line(&out));
        }
        return Ok(format!("|A+B| = {} >= {} (slack {}): {}\n", out.sumset_size, out.bound, out.slack, out.status));
    }
    let (Some(fs), Some(gs)) = (&a.f, &a.g) else {
        return Err(CliError::usage("give F and G, --witness sigma,h, or --set-a and --set-b"));
    };
    let f = univariate("f", fs)?;
    let (g, vars) = multivariate("g", gs, &a.vars)?;
    let r = gap_report(&f, &g).map_err(CliError::domain)?;
    let out = GapOut {
        schema: schema("gap-report"),
        f: f.to_string(),
        g: g.render(&vars),
        w: r.w,
        c: r.c,
        k: r.k,
        per_power: r.per_power.iter().map(|&(j, support)| PowerSupportJson { j, support }).collect(),
        cancelled: r.cancelled.iter().map(|e| e.0.clone()).collect(),
    };
    if json {
        return Ok(line(&out));
    }
    let mut t = format!("W = {}, C = {}, k = {}\n", out.w, out.c, out.k);
    for p in &out.per_power {
        let _ = writeln!(t, "  |supp g^{}| = {}", p.j, p.support);
    }
    for e in &out.cancelled {
        let _ = writeln!(t, "  cancelled {e:?}");
    }
    Ok(t)
}

fn kmin_config(a: &KminArgs) -> CliResult<KminConfigJson> {
    if let Some(p) = &a.config {
        return serde_json::from_str(&read_text(p)?)
            .map_err(|e| CliError::domain(format!("{}: {e}", p.display())));
    }
    let (Some(sigma), Some(b), Some(h_max)) = (a.sigma, &a.exp_box, a.h_max) else {
        return Err(CliError::usage("--sigma, --box and --h-max are required without --config"));
    };
    let [lo, hi] = b[..] else {
        return Err(CliError::usage("--box takes two values: lo,hi"));
    };
    if a.f.is_empty() {
        return Err(CliError::usage("at least one --f is required without --config"));
    }
    Ok(KminConfigJson {
        sigma,
        exp_box: [lo, hi],
        h_max,
        f: a.f.clone(),
        coeffs: a.coeffs.clone().unwrap_or_else(default_kmin_coeffs),
    })
}

fn kmin(a: &KminArgs, json: bool) -> CliResult<String> {
    let cj = kmin_config(a)?;
    let cfg = KminConfig {
        sigma: cj.sigma,
        lo: cj.exp_box[0],
        hi: cj.exp_box[1],
        h_max: cj.h_max,
        f_family: cj.f.iter().map(|s| univariate("f", s)).collect::<CliResult<_>>()?,
        coeffs: cj.coeffs.iter().map(|s| number("coefficient", s)).collect::<CliResult<_>>()?,
    };
    let width = (cfg.hi as i128 - cfg.lo as i128 + 1).max(0);
    if width.checked_pow(cfg.sigma as u32).map_or(true, |n| n > 4096) || cfg.h_max > 8 {
        return Err(CliError::bound("search box too large: at most 4096 exponent vectors and h_max <= 8"));
    }
    let part = par::kmin_search(&cfg).map_err(CliError::domain)?;
    let best = part.best.expect("search returns a witness");
    let names = xnames(cfg.sigma);
    let s = cfg.sigma;
    let out = KminOut {
        schema: schema("kmin-search"),
        config: cj,
        examined: part.examined,
        admissible: part.admissible,
        best: KminWitnessJson {
            k: best.k,
            f: best.f.to_string(),
            g: best.g.render(&names),
            composition: best.composition.render(&names),
        },
        lower_bound: 2 * s - 1,
        upper_bound: s * (s + 1) / 2,
    };
    if json {
        return Ok(line(&out));
    }
    Ok(format!(
        "min k = {} (bounds {}..{}) via f = {}, g = {}\nf(g) = {}\n{} pairs examined, {} admissible\n",
        out.best.k, out.lower_bound, out.upper_bound, out.best.f, out.best.g, out.best.composition, out.examined, out.admissible
    ))
}

fn vecfact(a: &VecfactArgs, json: bool) -> CliResult<String> {
    let w = vector("w", &a.w)?;
    let gens = points("generators", &a.gens)?;
    let c_max = a.c_max.unwrap_or_else(|| a.j.iter().copied().max().unwrap_or(0));
    if c_max > 64 || a.j.iter().any(|&j| j > 64) {
        return Err(CliError::bound("multiplicities are limited to 64"));
    }
    let fs = vector_factorizations(&w, &gens, &a.j, Some(c_max)).map_err(CliError::domain)?;
    let out = VecfactOut {
        schema: schema("vecfact"),
        w: w.0.clone(),
        generators: gens.iter().map(|g| g.0.clone()).collect(),
        j: a.j.clone(),
        c_max,
        factorizations: fs
            .iter()
            .map(|f| FactorizationJson {
                parts: f.parts.iter().map(|(v, c)| PartJson { v: v.0.clone(), c: *c }).collect(),
                total: f.total,
            })
            .collect(),
    };
    if json {
        return Ok(line(&out));
    }
    let mut t = format!("{} factorizations\n", out.factorizations.len());
    for f in &out.factorizations {
        let parts: Vec<String> = f.parts.iter().map(|p| format!("{}*{:?}", p.c, p.v)).collect();
        let _ = writeln!(t, "  {}  (total {})", parts.join(" + "), f.total);
    }
    Ok(t)
}

fn digits_verify(a: &DigitsVerifyArgs, json: bool) -> CliResult<String> {
    let families: Vec<&str> = if a.family == "all" {
        FAMILIES.iter().map(|f| f.id).collect()
    } else {
        vec![a.family.as_str()]
    };
    let mut instances = Vec::new();
    for id in families {
        let fam = lacunary_core::digits::family(id).map_err(CliError::domain)?;
        let params: Vec<i64> = match (a.param, a.up_to) {
            (p, Some(hi)) => {
                if hi > 1000 {
                    return Err(CliError::bound("--up-to is limited to 1000"));
                }
                (p.unwrap_or(fam.min_param).max(fam.min_param)..=hi).collect()
            }
            (Some(p), None) if a.family == "all" => vec![p.max(fam.min_param)],
            (Some(p), None) => vec![p],
            (None, None) => return Err(CliError::usage("--param or --up-to is required")),
        };
        for p in params {
            let inst = family_instance(id, p).map_err(CliError::domain)?;
            instances.push(InstanceJson {
                id: inst.id,
                x: inst.x,
                d: inst.d,
                param: inst.param,
                m: inst.m,
                y: inst.y.to_string(),
                value: inst.value.to_string(),
                verified: inst.verified,
            });
        }
    }
    let out = DigitsVerifyOut { schema: schema("digits-verify"), instances };
    if json {
        return Ok(line(&out));
    }
    let mut t = String::new();
    for i in &out.instances {
        let status = if i.verified { "verified" } else { "FAILED" };
        let _ = writeln!(t, "{} @ {}: x={} m={:?} {status}, y={}, y^{}={}", i.id, i.param, i.x, i.m, i.y, i.d, i.value);
    }
    Ok(t)
}

fn solution_json(s: &DigitSolution, c_left: &Rational, c_right: &Rational) -> SolutionJson {
    let gap_left = gap_condition(&s.m, GapSide::Leftmost, c_left);
    let gap_right = gap_condition(&s.m, GapSide::Rightmost, c_right);
    // The family lists cover squares with five unit digits only.
    let family_setting = s.k == 5 && s.d == 2 && s.digits.iter().all(|&c| c == 1);
    let finding = family_setting && (gap_left || gap_right) && s.matches.is_empty();
    SolutionJson {
        schema: schema("digit-solution"),
        x: s.x,
        d: s.d,
        k: s.k,
        m: s.m.clone(),
        digits: s.digits.clone(),
        y: s.y.to_string(),
        value: num_traits::pow(s.y.clone(), s.d as usize).to_string(),
        matches: s.matches.iter().map(|(id, param)| FamilyMatchJson { id: id.clone(), param: *param }).collect(),
        gap_left,
        gap_right,
        finding,
    }
}

fn write_checkpoint(path: &Path, cp: &DigitsCheckpoint) -> CliResult<()> {
    let tmp = path.with_extension("tmp");
    let text = serde_json::to_string_pretty(cp).expect("checkpoint serializes") + "\n";
    fs::write(&tmp, text)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| CliError::io(format!("cannot write checkpoint {}: {e}", path.display())))
}

fn digits_search(a: &DigitsSearchArgs, json: bool, threads: usize) -> CliResult<String> {
    let cfg = DigitSearchConfig { x: a.x, d: a.d, k: a.k, m_max: a.m_max, digit_set: a.digits.clone() };
    cfg.validate().map_err(CliError::domain)?;
    if a.m_max > 4096 || a.x > 1 << 20 {
        return Err(CliError::bound("--m-max is limited to 4096 and --x to 2^20"));
    }
    let c_left = rational("c-left", &a.c_left)?;
    let c_right = rational("c-right", &a.c_right)?;
    for c in [&c_left, &c_right] {
        if *c <= Rational::from_integer(0.into()) || *c >= Rational::from_integer(1.into()) {
            return Err(CliError::domain(format!("gap constants must lie strictly between 0 and 1, got {c}")));
        }
    }
    let config = DigitsConfigJson {
        x: a.x,
        d: a.d,
        k: a.k,
        m_max: a.m_max,
        digits: a.digits.clone(),
        c_left: c_left.to_string(),
        c_right: c_right.to_string(),
    };
    let tops: Vec<i64> = cfg.top_range().collect();
    let mut state = DigitsCheckpoint { schema: schema("digits-checkpoint"), config: config.clone(), next_top: cfg.top_range().start, solutions: Vec::new() };
    if let Some(path) = a.checkpoint.as_ref().filter(|p| p.exists()) {
        let saved: DigitsCheckpoint = serde_json::from_str(&read_text(path)?)
            .map_err(|e| CliError::domain(format!("{}: {e}", path.display())))?;
        if saved.schema != state.schema || saved.config != config {
            return Err(CliError::domain(format!("checkpoint {} belongs to a different search", path.display())));
        }
        state = saved;
    }
    let mut budget = a.max_shards.unwrap_or(usize::MAX);
    let mut pending: Vec<i64> = tops.iter().copied().filter(|&t| t >= state.next_top).collect();
    while !pending.is_empty() && budget > 0 {
        let take = threads.max(1).min(budget).min(pending.len());
        let batch: Vec<i64> = pending.drain(..take).collect();
        let sols = par::digits_shards(&cfg, &batch).map_err(CliError::domain)?;
        state.solutions.extend(sols.iter().map(|s| solution_json(s, &c_left, &c_right)));
        state.next_top = batch.last().unwrap() + 1;
        budget -= take;
        if let Some(path) = &a.checkpoint {
            write_checkpoint(path, &state)?;
        }
    }
    let done = tops.iter().filter(|&&t| t < state.next_top).count();
    let summary = DigitsSummary {
        schema: schema("digits-summary"),
        config,
        shards_total: tops.len(),
        shards_done: done,
        complete: done == tops.len(),
        solutions: state.solutions.len(),
        matched: state.solutions.iter().filter(|s| !s.matches.is_empty()).count(),
        findings: state.solutions.iter().filter(|s| s.finding).map(|s| s.m.clone()).collect(),
    };
    if json {
        let mut t: String = state.solutions.iter().map(line).collect();
        t.push_str(&line(&summary));
        return Ok(t);
    }
    let mut t = format!("{:<28} {:>12}  {:<5} {:<5} {}\n", "exponents", "y", "left", "right", "families");
    for s in &state.solutions {
        let fams: Vec<String> = s.matches.iter().map(|m| format!("{}@{}", m.id, m.param)).collect();
        let fams = if fams.is_empty() { "-".to_string() } else { fams.join(", ") };
        let mark = if s.finding { "  <-- unexplained" } else { "" };
        let _ = writeln!(t, "{:<28} {:>12}  {:<5} {:<5} {fams}{mark}", format!("{:?}", s.m), s.y, s.gap_left, s.gap_right);
    }
    let _ = writeln!(
        t,
        "shards {}/{}, {} solutions, {} matched, {} unexplained by the families",
        summary.shards_done,
        summary.shards_total,
        summary.solutions,
        summary.matched,
        summary.findings.len()
    );
    Ok(t)
}
