#![allow(dead_code)]

use std::fs;
use std::path::Path;

use walkdir::WalkDir;

/// Table name and column names of every `CREATE TABLE` in `ddl`, in order.
pub fn ddl_tables(ddl: &str) -> Vec<(String, Vec<String>)> {
    let mut tables = Vec::new();
    let mut lines = ddl.lines();
    while let Some(line) = lines.next() {
        let Some(rest) = line.strip_prefix("CREATE TABLE ") else {
            continue;
        };
        let name = rest.trim_end_matches(" (").to_string();
        let mut columns = Vec::new();
        for line in lines.by_ref() {
            let line = line.trim();
            if line.starts_with("PRIMARY KEY") || line.starts_with(");") {
                break;
            }
            columns.push(line.split_whitespace().next().unwrap().to_string());
        }
        tables.push((name, columns));
    }
    tables
}

/// Recursive copy of `from` into `to`.
pub fn copy_tree(from: &Path, to: &Path) {
    for entry in WalkDir::new(from) {
        let entry = entry.unwrap();
        let dest = to.join(entry.path().strip_prefix(from).unwrap());
        if entry.file_type().is_dir() {
            fs::create_dir_all(&dest).unwrap();
        } else {
            fs::copy(entry.path(), &dest).unwrap();
        }
    }
}
