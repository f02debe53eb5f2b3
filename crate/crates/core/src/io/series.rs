use std::path::Path;

use crate::error::{Error, Result};

/// A series CSV read back: a `t` column and named value columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SeriesTable {
    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }

    pub fn column(&self, name: &str) -> Option<Vec<(f64, f64)>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| (r[0], r[j])).collect())
    }
}

pub fn read_series<R: std::io::Read>(input: R) -> Result<SeriesTable> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.first().map(String::as_str) != Some("t") {
        return Err(Error::Data("series CSV must start with a `t` column".into()));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Data(format!("row {}: `{v}` is not a number", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(SeriesTable { header, rows })
}

pub fn read_series_csv(path: &Path) -> Result<SeriesTable> {
    read_series(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_columns() {
        let t = read_series("t,u_L2\n1,2.5\n2,inf\n".as_bytes()).unwrap();
        assert_eq!(t.column("u_L2").unwrap(), vec![(1.0, 2.5), (2.0, f64::INFINITY)]);
        assert!(t.column("b_L2").is_none());
        assert!(matches!(read_series("x,y\n1,2\n".as_bytes()), Err(Error::Data(_))));
        assert!(matches!(read_series("t,y\n1,abc\n".as_bytes()), Err(Error::Data(_))));
    }
}
