//! Columnar CSV for exit records. Occupation histograms go to a side file
//! in long form, `path_id,cell,count`, with empty cells omitted.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::simulate::ExitRecord;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct OccupationRow {
    path_id: u64,
    cell: usize,
    count: u32,
}

pub fn write_records(records: &[ExitRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_occupation(records: &[ExitRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        for (cell, &count) in r.occupation.iter().enumerate().filter(|(_, &c)| c > 0) {
            w.serialize(OccupationRow {
                path_id: r.path_id,
                cell,
                count,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads records back, attaching occupation histograms of `cells` cells
/// from the side file when one is given.
pub fn read_records(path: &Path, occupation: Option<(&Path, usize)>) -> Result<Vec<ExitRecord>> {
    let mut records = csv::Reader::from_path(path)?
        .deserialize()
        .collect::<std::result::Result<Vec<ExitRecord>, _>>()?;
    if let Some((occ_path, cells)) = occupation {
        let index: HashMap<u64, usize> = records.iter().enumerate().map(|(i, r)| (r.path_id, i)).collect();
        for r in &mut records {
            r.occupation = vec![0; cells];
        }
        for row in csv::Reader::from_path(occ_path)?.deserialize() {
            let row: OccupationRow = row?;
            let i = *index
                .get(&row.path_id)
                .ok_or_else(|| Error::Io(format!("occupation row for unknown path {}", row.path_id)))?;
            let slot = records[i]
                .occupation
                .get_mut(row.cell)
                .ok_or_else(|| Error::GridMismatch(format!("cell {} out of {cells}", row.cell)))?;
            *slot = row.count;
        }
    }
    Ok(records)
}
