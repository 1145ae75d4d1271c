use std::collections::HashMap;
use std::io::{Read, Write};

use serde::Serialize;

use super::plate::{PlateData, Well, WellType};
use crate::error::{Error, Result};

pub const PLATE_HEADER: [&str; 6] = ["plate_id", "well_id", "row", "col", "value", "well_type"];

/// A plate that parsed but failed validation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectedPlate {
    pub plate_id: String,
    pub reason: Error,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlateBatch {
    /// Valid plates in order of first appearance.
    pub plates: Vec<PlateData>,
    pub rejected: Vec<RejectedPlate>,
}

/// Reads plate wells from CSV with header `plate_id,well_id,row,col,value,well_type`.
///
/// Structural problems (missing columns, unparsable fields, duplicate wells)
/// fail the whole read. Plates lacking controls are returned in `rejected`.
pub fn parse_plates<R: Read>(input: R) -> Result<PlateBatch> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let header = reader
        .headers()
        .map_err(|e| Error::FormatError(format!("unreadable header: {e}")))?
        .clone();
    let mut index = [0usize; 6];
    for (slot, name) in index.iter_mut().zip(PLATE_HEADER) {
        *slot = header
            .iter()
            .position(|h| h.trim_start_matches('\u{feff}') == name)
            .ok_or_else(|| Error::FormatError(format!("missing column `{name}`")))?;
    }

    let mut order: Vec<String> = Vec::new();
    let mut wells: HashMap<String, Vec<Well>> = HashMap::new();
    let mut positions: HashMap<(String, u32, u32), u64> = HashMap::new();

    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Error::ParseError {
                line,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| record.get(index[i]).unwrap_or("");
        let parse_err = |message: String| Error::ParseError { line, message };

        let plate_id = field(0).to_string();
        if plate_id.is_empty() {
            return Err(parse_err("empty plate_id".into()));
        }
        let row: u32 = field(2)
            .parse()
            .map_err(|_| parse_err(format!("row `{}` is not a non-negative integer", field(2))))?;
        let col: u32 = field(3)
            .parse()
            .map_err(|_| parse_err(format!("col `{}` is not a non-negative integer", field(3))))?;
        let value: f64 = field(4)
            .parse()
            .map_err(|_| parse_err(format!("value `{}` is not a number", field(4))))?;
        if !value.is_finite() {
            return Err(parse_err(format!("value `{}` is not finite", field(4))));
        }
        let well_type = WellType::parse(field(5))
            .ok_or_else(|| parse_err(format!("unknown well_type `{}`", field(5))))?;

        if positions
            .insert((plate_id.clone(), row, col), line)
            .is_some()
        {
            return Err(Error::DuplicateWell {
                plate: plate_id,
                row,
                col,
                line,
            });
        }
        let entry = wells.entry(plate_id.clone()).or_insert_with(|| {
            order.push(plate_id.clone());
            Vec::new()
        });
        entry.push(Well {
            well_id: field(1).to_string(),
            row,
            col,
            value,
            well_type,
        });
    }

    let mut batch = PlateBatch::default();
    for id in order {
        let w = wells.remove(&id).unwrap_or_default();
        match PlateData::new(id.clone(), w) {
            Ok(p) => batch.plates.push(p),
            Err(reason) => batch.rejected.push(RejectedPlate {
                plate_id: id,
                reason,
            }),
        }
    }
    Ok(batch)
}

/// Writes plates in the same CSV layout `parse_plates` reads.
pub fn write_plates<W: Write>(plates: &[PlateData], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(PLATE_HEADER).map_err(io)?;
    for p in plates {
        for well in &p.wells {
            w.write_record([
                p.plate_id.as_str(),
                well.well_id.as_str(),
                &well.row.to_string(),
                &well.col.to_string(),
                &well.value.to_string(),
                well.well_type.as_str(),
            ])
            .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}
