//! Indicator matrices: m systems (rows) by n indicators (columns), CSV
//! ingestion, validation and min-max scaling.
//!
//! Every indicator is treated as benefit-type. Cost-type columns have to be
//! negated (see [`IndicatorMatrix::negate_columns`]) before scaling.

use std::collections::HashSet;
use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{pearson_correlation_matrix, Matrix};

const DUPLICATE_CORRELATION: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorMatrix {
    system_ids: Vec<String>,
    indicator_names: Vec<String>,
    values: Matrix,
    scaled: bool,
}

/// Findings of [`IndicatorMatrix::validate`]. Empty when nothing is suspicious.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub constant_columns: Vec<String>,
    /// Pairs of columns with correlation 1.
    pub duplicate_columns: Vec<(String, String)>,
    pub fewer_systems_than_indicators: bool,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.constant_columns.is_empty()
            && self.duplicate_columns.is_empty()
            && !self.fewer_systems_than_indicators
    }

    pub fn messages(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .constant_columns
            .iter()
            .map(|c| format!("indicator '{c}' is constant"))
            .collect();
        out.extend(
            self.duplicate_columns
                .iter()
                .map(|(a, b)| format!("indicators '{a}' and '{b}' are perfectly correlated")),
        );
        if self.fewer_systems_than_indicators {
            out.push("fewer systems than indicators".to_string());
        }
        out
    }
}

impl IndicatorMatrix {
    /// Builds an unscaled matrix.
    pub fn new(
        system_ids: Vec<String>,
        indicator_names: Vec<String>,
        values: Matrix,
    ) -> Result<Self> {
        Self::build(system_ids, indicator_names, values, false)
    }

    /// Wraps data that is already normalized to [0, 1].
    pub fn from_scaled(
        system_ids: Vec<String>,
        indicator_names: Vec<String>,
        values: Matrix,
    ) -> Result<Self> {
        Self::build(system_ids, indicator_names, values, true)
    }

    /// Unscaled matrix with generated labels `s1..sm` and `X1..Xn`.
    pub fn with_default_labels(values: Matrix) -> Result<Self> {
        let (ids, names) = default_labels(values.rows(), values.cols());
        Self::new(ids, names, values)
    }

    /// Scaled matrix with generated labels `s1..sm` and `X1..Xn`.
    pub fn scaled_with_default_labels(values: Matrix) -> Result<Self> {
        let (ids, names) = default_labels(values.rows(), values.cols());
        Self::from_scaled(ids, names, values)
    }

    fn build(
        system_ids: Vec<String>,
        indicator_names: Vec<String>,
        values: Matrix,
        scaled: bool,
    ) -> Result<Self> {
        if values.rows() == 0 || values.cols() == 0 {
            return Err(Error::usage(
                "indicator matrix needs at least one system and one indicator",
            ));
        }
        if system_ids.len() != values.rows() || indicator_names.len() != values.cols() {
            return Err(Error::usage(format!(
                "{} system ids and {} indicator names for a {}x{} matrix",
                system_ids.len(),
                indicator_names.len(),
                values.rows(),
                values.cols()
            )));
        }
        if scaled {
            if let Some(v) = values.as_slice().iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::usage(format!("scaled value {v} outside [0, 1]")));
            }
        }
        Ok(Self {
            system_ids,
            indicator_names,
            values,
            scaled,
        })
    }

    pub fn system_ids(&self) -> &[String] {
        &self.system_ids
    }

    pub fn indicator_names(&self) -> &[String] {
        &self.indicator_names
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn is_scaled(&self) -> bool {
        self.scaled
    }

    pub fn num_systems(&self) -> usize {
        self.values.rows()
    }

    pub fn num_indicators(&self) -> usize {
        self.values.cols()
    }

    pub(crate) fn require_scaled(&self, what: &str) -> Result<()> {
        if self.scaled {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "{what} needs min-max scaled indicators; scale the matrix first"
            )))
        }
    }

    /// Reads a CSV whose header holds the id column name followed by the
    /// indicator names, with one row per system.
    ///
    /// Row numbers in errors are 1-based and count the header as row 1.
    pub fn load_csv<R: Read>(source: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(source);
        let mut records = reader.records();

        let header = match records.next() {
            None => return Err(Error::parse(1, "", "empty file")),
            Some(r) => r.map_err(|e| Error::parse(1, "", e.to_string()))?,
        };
        if header.len() < 2 {
            return Err(Error::parse(
                1,
                "",
                "header needs an id column and at least one indicator",
            ));
        }
        let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let width = header.len();

        let mut ids = Vec::new();
        let mut seen = HashSet::new();
        let mut data = Vec::new();
        for (idx, rec) in records.enumerate() {
            let row = idx + 2;
            let rec = rec.map_err(|e| Error::parse(row, "", e.to_string()))?;
            if rec.len() == 1 && rec[0].is_empty() {
                continue;
            }
            if rec.len() != width {
                return Err(Error::parse(
                    row,
                    "",
                    format!("ragged row: {} cells, header has {width}", rec.len()),
                ));
            }
            let id = rec[0].to_string();
            if !seen.insert(id.clone()) {
                return Err(Error::parse(
                    row,
                    &header[0],
                    format!("duplicate system id '{id}'"),
                ));
            }
            for (cell, name) in rec.iter().skip(1).zip(&names) {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| Error::parse(row, name, format!("'{cell}' is not a number")))?;
                if !v.is_finite() {
                    return Err(Error::parse(row, name, format!("'{cell}' is not finite")));
                }
                data.push(v);
            }
            ids.push(id);
        }
        if ids.is_empty() {
            return Err(Error::parse(2, "", "no data rows"));
        }
        let values = Matrix::new(ids.len(), names.len(), data)?;
        Self::new(ids, names, values)
    }

    /// Multiplies the named columns by -1, turning cost-type indicators into
    /// benefit-type ones. Only valid before scaling.
    pub fn negate_columns<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        if self.scaled {
            return Err(Error::usage("negate columns before scaling"));
        }
        let mut values = self.values.clone();
        for name in names {
            let name = name.as_ref();
            let j = self
                .indicator_names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::usage(format!("unknown indicator '{name}'")))?;
            for i in 0..values.rows() {
                values[(i, j)] = -values[(i, j)];
            }
        }
        Ok(Self {
            values,
            ..self.clone()
        })
    }

    /// Maps each column onto [0, 1] with `(x - min) / (max - min)`.
    /// Constant columns become all zeros and are reported with a warning.
    pub fn min_max_scale(&self) -> Result<Self> {
        if self.scaled {
            return Err(Error::usage("matrix is already scaled"));
        }
        let mut values = self.values.clone();
        for j in 0..values.cols() {
            let col = values.column(j);
            let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let range = hi - lo;
            for (i, &x) in col.iter().enumerate() {
                values[(i, j)] = if range > 0.0 {
                    ((x - lo) / range).clamp(0.0, 1.0)
                } else {
                    0.0
                };
            }
            if range <= 0.0 {
                log::warn!(
                    "indicator '{}' is constant; scaled to zeros",
                    self.indicator_names[j]
                );
            }
        }
        Ok(Self {
            values,
            scaled: true,
            ..self.clone()
        })
    }

    /// Lists constant columns, perfectly correlated column pairs and a
    /// too-few-systems warning.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport {
            fewer_systems_than_indicators: self.num_systems() < self.num_indicators(),
            ..Default::default()
        };
        for j in 0..self.num_indicators() {
            let col = self.values.column(j);
            if col.iter().all(|&v| v == col[0]) {
                report
                    .constant_columns
                    .push(self.indicator_names[j].clone());
            }
        }
        if self.num_systems() >= 2 {
            if let Ok(r) = pearson_correlation_matrix(&self.values) {
                for a in 0..self.num_indicators() {
                    for b in (a + 1)..self.num_indicators() {
                        if r[(a, b)] >= DUPLICATE_CORRELATION {
                            report.duplicate_columns.push((
                                self.indicator_names[a].clone(),
                                self.indicator_names[b].clone(),
                            ));
                        }
                    }
                }
            }
        }
        report
    }

    /// Reorders indicators; column `j` of the result is column `order[j]`.
    pub fn permute_indicators(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.num_indicators())?;
        Ok(Self {
            indicator_names: order
                .iter()
                .map(|&j| self.indicator_names[j].clone())
                .collect(),
            values: self.values.select_columns(order)?,
            ..self.clone()
        })
    }

    /// Reorders systems; row `i` of the result is row `order[i]`.
    pub fn permute_systems(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.num_systems())?;
        Ok(Self {
            system_ids: order.iter().map(|&i| self.system_ids[i].clone()).collect(),
            values: self.values.select_rows(order)?,
            ..self.clone()
        })
    }
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::usage(format!(
            "permutation of length {} for {n} items",
            order.len()
        )));
    }
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::usage("not a permutation"));
        }
    }
    Ok(())
}

pub(crate) fn default_labels(rows: usize, cols: usize) -> (Vec<String>, Vec<String>) {
    (
        (1..=rows).map(|i| format!("s{i}")).collect(),
        (1..=cols).map(|j| format!("X{j}")).collect(),
    )
}
