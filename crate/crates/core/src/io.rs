//! Matrix CSV and scale JSON files.
//!
//! A level-matrix CSV has the object names on its first row and one row of
//! cells per object. Rows may optionally start with the object name, in
//! which case the header starts with an empty cell. Cells hold level labels
//! or integer level indices; diagonal cells may also be left empty or `-`.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scale::{LevelMatrix, LinguisticScale};

fn parse_cell(
    raw: &str,
    scale: &LinguisticScale,
    objects: &[String],
    row: usize,
    col: usize,
) -> Result<usize> {
    let cell = raw.trim();
    let at = || {
        format!(
            "row {} ({}), column {} ({})",
            row + 1,
            objects[row],
            col + 1,
            objects[col]
        )
    };
    if row == col && matches!(cell, "" | "-" | "." | "·") {
        return Ok(0);
    }
    let index = match scale.index_of(cell) {
        Some(i) => i,
        None => cell.parse::<usize>().map_err(|_| {
            Error::InvalidLevelMatrix(format!("unknown level {cell:?} at {}", at()))
        })?,
    };
    if index >= scale.len() {
        return Err(Error::InvalidLevelMatrix(format!(
            "level index {index} at {} is out of range for a {}-level scale",
            at(),
            scale.len()
        )));
    }
    if row == col && index != 0 {
        return Err(Error::InvalidLevelMatrix(format!(
            "diagonal cell at {} is {cell:?}; self-influence must be the weakest level ({})",
            at(),
            scale.label(0).unwrap_or("0")
        )));
    }
    Ok(index)
}

pub fn parse_level_matrix(reader: impl Read, scale: &LinguisticScale) -> Result<LevelMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut records = rdr.records();
    let header = records
        .next()
        .ok_or_else(|| Error::InvalidLevelMatrix("empty file".into()))??;
    let labeled_rows = header.get(0).is_some_and(str::is_empty);
    let objects: Vec<String> = header
        .iter()
        .skip(usize::from(labeled_rows))
        .map(str::to_string)
        .collect();
    let n = objects.len();

    let mut cells = Vec::with_capacity(n);
    for (row, record) in records.enumerate() {
        let record = record?;
        if row >= n {
            return Err(Error::InvalidLevelMatrix(format!(
                "more than {n} data rows for {n} objects"
            )));
        }
        let mut fields = record.iter();
        if labeled_rows {
            let name = fields.next().unwrap_or_default();
            if name != objects[row] {
                return Err(Error::InvalidLevelMatrix(format!(
                    "row {} is labeled {name:?}, expected {:?}",
                    row + 1,
                    objects[row]
                )));
            }
        }
        let fields: Vec<&str> = fields.collect();
        if fields.len() != n {
            return Err(Error::InvalidLevelMatrix(format!(
                "row {} ({}) has {} cells, expected {n}",
                row + 1,
                objects[row],
                fields.len()
            )));
        }
        let parsed = fields
            .iter()
            .enumerate()
            .map(|(col, raw)| parse_cell(raw, scale, &objects, row, col))
            .collect::<Result<Vec<_>>>()?;
        cells.push(parsed);
    }
    LevelMatrix::new(objects, cells)
}

pub fn read_level_matrix(path: &Path, scale: &LinguisticScale) -> Result<LevelMatrix> {
    let file = fs::File::open(path)?;
    parse_level_matrix(file, scale)
}

/// Writes the matrix with level labels, in the layout `parse_level_matrix`
/// reads back.
pub fn write_level_matrix(
    m: &LevelMatrix,
    scale: &LinguisticScale,
    writer: impl Write,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(m.objects())?;
    for (i, row) in m.cells().iter().enumerate() {
        let labels = row
            .iter()
            .enumerate()
            .map(|(j, &idx)| {
                scale.label(idx).ok_or(Error::LevelIndexOutOfRange {
                    row: i,
                    col: j,
                    index: idx,
                    levels: scale.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        w.write_record(labels)?;
    }
    w.flush()?;
    Ok(())
}

pub fn level_matrix_to_csv(m: &LevelMatrix, scale: &LinguisticScale) -> Result<String> {
    let mut buf = Vec::new();
    write_level_matrix(m, scale, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn read_scale(path: &Path) -> Result<LinguisticScale> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
