use std::io::{Read, Write};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::admg::MixedGraph;
use crate::error::{Error, Result};

/// Where a dataset came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub generator: String,
    #[serde(default)]
    pub params: serde_json::Value,
}

impl Provenance {
    pub fn new(seed: Option<u64>, generator: &str, params: serde_json::Value) -> Self {
        Self { seed, generator: generator.to_string(), params }
    }
}

/// `n × p` sample matrix with named columns; rows are samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<String>,
    values: DMatrix<f64>,
    provenance: Provenance,
}

impl Dataset {
    pub fn new(columns: Vec<String>, values: DMatrix<f64>, provenance: Provenance) -> Result<Self> {
        if values.ncols() != columns.len() {
            return Err(Error::SizeMismatch(format!(
                "{} columns named, {} in the data",
                columns.len(),
                values.ncols()
            )));
        }
        if values.nrows() == 0 {
            return Err(Error::Invalid("dataset has no rows".into()));
        }
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            let (r, c) = (i % values.nrows(), i / values.nrows());
            return Err(Error::Invalid(format!("non-finite value in row {}, column `{}`", r + 1, columns[c])));
        }
        Ok(Self { columns, values, provenance })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.values.as_slice()[j * self.n()..(j + 1) * self.n()]
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Errors unless the columns are exactly the graph's vertices, in order.
    pub fn check_binding(&self, g: &MixedGraph) -> Result<()> {
        if self.columns != g.names() {
            return Err(Error::BindingMismatch(format!(
                "data columns [{}] do not match graph vertices [{}]",
                self.columns.join(", "),
                g.names().join(", ")
            )));
        }
        Ok(())
    }

    /// Header of column names, then one sample per row.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns).map_err(io)?;
        let mut row = Vec::with_capacity(self.p());
        for i in 0..self.n() {
            row.clear();
            row.extend((0..self.p()).map(|j| self.values[(i, j)].to_string()));
            out.write_record(&row).map_err(io)?;
        }
        out.flush().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R, provenance: Provenance) -> Result<Self> {
        let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
        let mut input = csv::Reader::from_reader(r);
        let columns: Vec<String> = input.headers().map_err(io)?.iter().map(|s| s.trim().to_string()).collect();
        let mut data = Vec::new();
        let mut rows = 0;
        for rec in input.records() {
            let rec = rec.map_err(io)?;
            if rec.len() != columns.len() {
                return Err(Error::SizeMismatch(format!("row {} has {} fields", rows + 1, rec.len())));
            }
            for field in rec.iter() {
                let x: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("row {}: `{field}` is not a number", rows + 1)))?;
                data.push(x);
            }
            rows += 1;
        }
        let values = DMatrix::from_row_slice(rows, columns.len(), &data);
        Self::new(columns, values, provenance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prov() -> Provenance {
        Provenance::new(Some(1), "test", serde_json::Value::Null)
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let values = DMatrix::from_row_slice(2, 2, &[0.1, -1.0 / 3.0, 1e-300, 12345.678]);
        let ds = Dataset::new(vec!["a".into(), "b".into()], values, prov()).unwrap();
        let mut buf = Vec::new();
        ds.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("a,b\n"));
        let back = Dataset::read_csv(buf.as_slice(), prov()).unwrap();
        assert_eq!(back, ds);
        assert_eq!(back.column(1), &[-1.0 / 3.0, 12345.678]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Dataset::new(vec!["a".into()], DMatrix::zeros(0, 1), prov()).is_err());
        assert!(Dataset::new(vec!["a".into()], DMatrix::from_element(1, 1, f64::NAN), prov()).is_err());
        assert!(Dataset::read_csv("a,b\n1,x\n".as_bytes(), prov()).is_err());
    }
}
