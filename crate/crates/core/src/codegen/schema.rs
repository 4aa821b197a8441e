use alloc::collections::BTreeSet;
use alloc::string::String;
use core::fmt::Write;

use crate::fui::{ColumnType, EntityBinding};
use crate::names::Ident;

pub const SCHEMA_HEADER: &str = "-- Generated DDL. Changes are overwritten on regeneration.\n";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("entity `{0}` is bound more than once")]
    DuplicateEntity(Ident),
}

pub fn sql_type(ty: ColumnType) -> String {
    match ty {
        ColumnType::Text(n) => alloc::format!("VARCHAR({n})"),
        ColumnType::Integer => "INT".into(),
        ColumnType::Decimal(p, s) => alloc::format!("DECIMAL({p},{s})"),
        ColumnType::Date => "DATE".into(),
    }
}

/// One `CREATE TABLE` per binding in authored order, columns in field-map
/// order, primary key clause last.
///
/// ```text
/// CREATE TABLE Emp_Credentials (
///   emp_id INT,
///   password VARCHAR(64),
///   PRIMARY KEY (emp_id)
/// );
/// ```
pub fn emit_schema(bindings: &[EntityBinding]) -> Result<String, SchemaError> {
    let mut seen = BTreeSet::new();
    let mut out = String::from(SCHEMA_HEADER);
    for b in bindings {
        if !seen.insert(b.entity_name.as_str()) {
            return Err(SchemaError::DuplicateEntity(b.entity_name.clone()));
        }
        let _ = write!(out, "\nCREATE TABLE {} (\n", b.entity_name);
        for map in &b.field_maps {
            let _ = writeln!(out, "  {} {},", map.column, sql_type(map.column_type));
        }
        let _ = write!(out, "  PRIMARY KEY ({})\n);\n", b.primary_key);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fui::FieldMap;
    use crate::names::Slug;
    use alloc::vec::Vec;

    fn binding(entity: &str, cols: &[(&str, ColumnType)]) -> EntityBinding {
        EntityBinding {
            screen_id: Slug::new("s").unwrap(),
            entity_name: Ident::new(entity).unwrap(),
            primary_key: Ident::new(cols[0].0).unwrap(),
            field_maps: cols
                .iter()
                .map(|(c, t)| FieldMap {
                    instance_id: Slug::new("x").unwrap(),
                    column: Ident::new(*c).unwrap(),
                    column_type: *t,
                })
                .collect::<Vec<_>>(),
        }
    }

    #[test]
    fn empty_binding_list_is_header_only() {
        assert_eq!(emit_schema(&[]).unwrap(), SCHEMA_HEADER);
    }

    #[test]
    fn emp_salary_columns_in_order() {
        let money = ColumnType::Decimal(10, 2);
        let ddl = emit_schema(&[binding(
            "Emp_Salary",
            &[
                ("emp_id", ColumnType::Integer),
                ("designation", ColumnType::Text(50)),
                ("basic", money),
                ("da", money),
                ("hra", money),
                ("cca", money),
                ("pf", money),
            ],
        )])
        .unwrap();
        assert_eq!(
            ddl,
            "-- Generated DDL. Changes are overwritten on regeneration.\n\
             \n\
             CREATE TABLE Emp_Salary (\n  \
             emp_id INT,\n  \
             designation VARCHAR(50),\n  \
             basic DECIMAL(10,2),\n  \
             da DECIMAL(10,2),\n  \
             hra DECIMAL(10,2),\n  \
             cca DECIMAL(10,2),\n  \
             pf DECIMAL(10,2),\n  \
             PRIMARY KEY (emp_id)\n\
             );\n"
        );
    }

    #[test]
    fn type_mapping() {
        assert_eq!(sql_type(ColumnType::Text(15)), "VARCHAR(15)");
        assert_eq!(sql_type(ColumnType::Integer), "INT");
        assert_eq!(sql_type(ColumnType::Decimal(8, 0)), "DECIMAL(8,0)");
        assert_eq!(sql_type(ColumnType::Date), "DATE");
    }

    #[test]
    fn duplicate_entity_rejected() {
        let b = binding("T", &[("id", ColumnType::Integer)]);
        assert_eq!(
            emit_schema(&[b.clone(), b]),
            Err(SchemaError::DuplicateEntity(Ident::new("T").unwrap()))
        );
    }
}
