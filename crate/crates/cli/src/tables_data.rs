//! The versioned row data file (`data/tables.v1.json`) and its conversion to
//! and from the core row type.

use lacunary_core::classify::{builtin_rows, Cell, CellKind, TableRow};

use crate::dto::{schema, CellJson, RowJson, TablesFile};

/// The shipped data file; a test keeps it equal to [`builtin_file`].
pub const SHIPPED: &str = include_str!("../data/tables.v1.json");

pub fn to_json(row: &TableRow) -> RowJson {
    RowJson {
        id: row.id.clone(),
        table: row.table.clone(),
        d: row.d,
        multipliers: row.multipliers.clone(),
        cells: row
            .cells
            .iter()
            .map(|c| {
                let (kind, formula) = match &c.kind {
                    CellKind::Formula(f) => ("formula", Some(f.clone())),
                    CellKind::Free => ("free", None),
                    CellKind::NotPrinted => ("none", None),
                };
                CellJson { kind: kind.into(), formula, suspected_typo: c.suspected_typo }
            })
            .collect(),
        pattern: row.pattern.clone(),
        base_table: row.base_table,
    }
}

pub fn from_json(row: &RowJson) -> Result<TableRow, String> {
    if row.multipliers.first() != Some(&1) || row.cells.len() + 1 != row.multipliers.len() {
        return Err(format!("row {}: multipliers must start at 1 and have one more entry than cells", row.id));
    }
    let cells = row
        .cells
        .iter()
        .map(|c| {
            let kind = match (c.kind.as_str(), &c.formula) {
                ("formula", Some(f)) => CellKind::Formula(f.clone()),
                ("free", None) => CellKind::Free,
                ("none", None) => CellKind::NotPrinted,
                (k, _) => return Err(format!("row {}: bad cell kind '{k}'", row.id)),
            };
            Ok(Cell { kind, suspected_typo: c.suspected_typo })
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(TableRow {
        id: row.id.clone(),
        table: row.table.clone(),
        d: row.d,
        multipliers: row.multipliers.clone(),
        cells,
        pattern: row.pattern.clone(),
        base_table: row.base_table,
    })
}

pub fn builtin_file() -> TablesFile {
    TablesFile { schema: schema("tables"), rows: builtin_rows().iter().map(to_json).collect() }
}

pub fn render_file(file: &TablesFile) -> String {
    serde_json::to_string_pretty(file).expect("tables serialize") + "\n"
}

pub fn parse_file(text: &str) -> Result<Vec<TableRow>, String> {
    let file: TablesFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if file.schema != schema("tables") {
        return Err(format!("unsupported schema '{}'", file.schema));
    }
    file.rows.iter().map(from_json).collect()
}
