//! Built-in classification rows for normalized lacunary powers
//! `P(T)^d = 1 + Σ ξ_i T^{l_i}` with at most five terms, and their copies
//! used for two extra monomials in compositions.
//!
//! Formulas are polynomials in `xi1` and `xi2` written in the crate's
//! polynomial grammar. The `P(T)` pattern is authoritative; coefficient cells
//! are what the rows print and are checked against the expansion.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Variable names available to row formulas.
pub const FORMULA_VARS: [&str; 2] = ["xi1", "xi2"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellKind {
    /// Printed closed form.
    Formula(String),
    /// Left blank: a free parameter supplied by the caller (`xi2`).
    Free,
    /// The table has no column for this coefficient.
    NotPrinted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub kind: CellKind,
    /// Known disagreement between the printed formula and the expansion.
    pub suspected_typo: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub id: String,
    pub table: String,
    pub d: u32,
    /// `l_i / l_1` for `i = 1..k-1` (first entry is 1).
    pub multipliers: Vec<i64>,
    /// Cells for `ξ_2, …, ξ_{k-1}`.
    pub cells: Vec<Cell>,
    /// `P(T)` as `(m, formula)`: coefficient of `T^{m·l_1}`.
    pub pattern: Vec<(i64, String)>,
    /// Whether the row belongs to the four base tables matched by the oracle.
    pub base_table: bool,
}

impl TableRow {
    /// Number of terms of `P(T)^d`.
    pub fn k(&self) -> usize {
        self.multipliers.len() + 1
    }

    pub fn has_free_cell(&self) -> bool {
        self.cells.iter().any(|c| c.kind == CellKind::Free)
    }
}

struct RowSpec {
    id: &'static str,
    d: u32,
    multipliers: &'static [i64],
    cells: &'static [(&'static str, bool)],
    pattern: &'static [(i64, &'static str)],
}

const FREE: &str = "<free>";
const NONE: &str = "<none>";

const T1: &[RowSpec] = &[
    RowSpec {
        id: "1",
        d: 4,
        multipliers: &[1, 2, 3, 4],
        cells: &[("3/8*xi1^2", false), ("1/16*xi1^3", false), ("1/256*xi1^3", true)],
        pattern: &[(0, "1"), (1, "1/4*xi1")],
    },
    RowSpec {
        id: "2",
        d: 3,
        multipliers: &[1, 3, 5, 6],
        cells: &[("-5/27*xi1^3", false), ("1/81*xi1^5", false), ("-1/729*xi1^6", false)],
        pattern: &[(0, "1"), (1, "1/3*xi1"), (2, "-1/9*xi1^2")],
    },
    RowSpec {
        id: "3",
        d: 2,
        multipliers: &[1, 4, 5, 6],
        cells: &[("5/64*xi1^4", false), ("-1/64*xi1^5", false), ("1/256*xi1^6", false)],
        pattern: &[(0, "1"), (1, "1/2*xi1"), (2, "-1/8*xi1^2"), (3, "1/16*xi1^3")],
    },
    RowSpec {
        id: "4",
        d: 2,
        multipliers: &[1, 3, 5, 6],
        cells: &[("-5/32*xi1^4", true), ("1/256*xi1^5", false), ("19/1024*xi1^6", true)],
        pattern: &[(0, "1"), (1, "1/2*xi1"), (2, "-1/8*xi1^2"), (3, "-1/64*xi1^3")],
    },
    RowSpec {
        id: "5",
        d: 2,
        multipliers: &[1, 4, 7, 8],
        cells: &[("7/64*xi1^4", false), ("-1/512*xi1^7", true), ("1/4096*xi1^8", false)],
        pattern: &[(0, "1"), (1, "1/2*xi1"), (2, "-1/8*xi1^2"), (3, "1/16*xi1^3"), (4, "1/64*xi1^4")],
    },
    RowSpec {
        id: "6",
        d: 2,
        multipliers: &[1, 2, 5, 6],
        cells: &[("5/4*xi1^2", false), ("-1/4*xi1^5", false), ("1/16*xi1^6", false)],
        pattern: &[(0, "1"), (1, "1/2*xi1"), (2, "1/2*xi1^2"), (3, "-1/4*xi1^3")],
    },
];

const T2: &[RowSpec] = &[RowSpec {
    id: "1",
    d: 2,
    multipliers: &[1, 2, 3, 4],
    cells: &[(FREE, false), ("-1/8*xi1^3 + 1/2*xi1*xi2", false), ("(-1/8*xi1^2 + 1/2*xi2)^2", false)],
    pattern: &[(0, "1"), (1, "1/2*xi1"), (2, "1/2*xi2 - 1/8*xi1^2")],
}];

const T3: &[RowSpec] = &[
    RowSpec {
        id: "1",
        d: 2,
        multipliers: &[1, 3, 4],
        cells: &[("-1/8*xi1^3", false), ("-1/64*xi1^4", true)],
        pattern: &[(0, "1"), (1, "1/2*xi1"), (2, "-1/8*xi1^2")],
    },
    RowSpec {
        id: "2",
        d: 3,
        multipliers: &[1, 2, 3],
        cells: &[("1/3*xi1^2", false), ("1/27*xi1^3", false)],
        pattern: &[(0, "1"), (1, "1/3*xi1")],
    },
];

const T4: &[RowSpec] = &[RowSpec {
    id: "1",
    d: 2,
    multipliers: &[1, 2],
    cells: &[("1/4*xi1^2", false)],
    pattern: &[(0, "1"), (1, "1/2*xi1")],
}];

const E2: &[RowSpec] = &[
    RowSpec {
        id: "1",
        d: 2,
        multipliers: &[1, 3, 4],
        cells: &[(NONE, false), (NONE, false)],
        pattern: &[(0, "1"), (1, "1/2*xi1"), (2, "-1/8*xi1^2")],
    },
    RowSpec {
        id: "2",
        d: 3,
        multipliers: &[1, 2, 3],
        cells: &[(NONE, false), (NONE, false)],
        pattern: &[(0, "1"), (1, "1/3*xi1")],
    },
];

fn build(table: &str, prefix: &str, specs: &'static [RowSpec], base_table: bool) -> impl Iterator<Item = TableRow> {
    let table = table.to_string();
    let prefix = prefix.to_string();
    specs.iter().map(move |s| TableRow {
        id: alloc::format!("{prefix}.{}", s.id),
        table: table.clone(),
        d: s.d,
        multipliers: s.multipliers.to_vec(),
        cells: s
            .cells
            .iter()
            .map(|&(f, typo)| Cell {
                kind: match f {
                    FREE => CellKind::Free,
                    NONE => CellKind::NotPrinted,
                    f => CellKind::Formula(f.to_string()),
                },
                suspected_typo: typo,
            })
            .collect(),
        pattern: s.pattern.iter().map(|&(m, f)| (m, f.to_string())).collect(),
        base_table,
    })
}

/// All rows: the four base tables, then the three tables for two extra
/// monomials (`E1a`, `E1b` repeat tables 1 and 2; `E2` repeats table 3 without
/// coefficient columns).
pub fn builtin_rows() -> Vec<TableRow> {
    build("1", "T1", T1, true)
        .chain(build("2", "T2", T2, true))
        .chain(build("3", "T3", T3, true))
        .chain(build("4", "T4", T4, true))
        .chain(build("rho2-E1a", "E1a", T1, false))
        .chain(build("rho2-E1b", "E1b", T2, false))
        .chain(build("rho2-E2", "E2", E2, false))
        .collect()
}

pub fn find_row<'a>(rows: &'a [TableRow], id: &str) -> Option<&'a TableRow> {
    rows.iter().find(|r| r.id == id)
}
