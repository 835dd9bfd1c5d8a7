use std::io::{Read, Write};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{AttrKind, Path, Schema};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Discrete(Vec<u32>),
    Continuous(Vec<f64>),
}

impl Column {
    fn len(&self) -> usize {
        match self {
            Column::Discrete(v) => v.len(),
            Column::Continuous(v) => v.len(),
        }
    }

    fn select(&self, rows: &[usize]) -> Column {
        match self {
            Column::Discrete(v) => Column::Discrete(rows.iter().map(|&r| v[r]).collect()),
            Column::Continuous(v) => Column::Continuous(rows.iter().map(|&r| v[r]).collect()),
        }
    }
}

/// A single attribute value of a record.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Code(u32),
    Num(f64),
    /// A discrete label outside the schema domain, kept so prediction can
    /// decide what to do with it.
    Unseen(String),
}

/// Column-oriented table conforming to a [`Schema`]. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Arc<Schema>,
    columns: Vec<Column>,
    labels: Option<Vec<u32>>,
}

impl Dataset {
    pub fn new(schema: Arc<Schema>, columns: Vec<Column>, labels: Option<Vec<u32>>) -> Result<Self> {
        if columns.len() != schema.n_attrs() {
            return Err(Error::SchemaMismatch(format!(
                "expected {} columns, got {}",
                schema.n_attrs(),
                columns.len()
            )));
        }
        let n = columns.first().map(Column::len).or(labels.as_ref().map(Vec::len)).unwrap_or(0);
        for (i, col) in columns.iter().enumerate() {
            let attr = schema.attr(i);
            if col.len() != n {
                return Err(Error::SchemaMismatch(format!(
                    "column `{}` has {} rows, expected {n}",
                    attr.name,
                    col.len()
                )));
            }
            match (col, attr.kind) {
                (Column::Discrete(v), AttrKind::Discrete) => {
                    if let Some(r) = v.iter().position(|&c| c as usize >= attr.cardinality()) {
                        return Err(Error::ValueOutOfDomain {
                            row: r,
                            column: attr.name.clone(),
                            value: v[r].to_string(),
                        });
                    }
                }
                (Column::Continuous(v), AttrKind::Continuous) => {
                    for (r, &x) in v.iter().enumerate() {
                        let outside = attr.bounds.is_some_and(|(lo, hi)| x < lo || x > hi);
                        if !x.is_finite() || outside {
                            return Err(Error::ValueOutOfDomain {
                                row: r,
                                column: attr.name.clone(),
                                value: x.to_string(),
                            });
                        }
                    }
                }
                _ => {
                    return Err(Error::SchemaMismatch(format!(
                        "column `{}` has the wrong kind",
                        attr.name
                    )))
                }
            }
        }
        if let Some(y) = &labels {
            if y.len() != n {
                return Err(Error::SchemaMismatch("class column length differs".into()));
            }
            if let Some(r) = y.iter().position(|&c| c as usize >= schema.n_classes()) {
                return Err(Error::ValueOutOfDomain {
                    row: r,
                    column: schema.class.name.clone(),
                    value: y[r].to_string(),
                });
            }
        }
        Ok(Self {
            schema,
            columns,
            labels,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn schema_arc(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn len(&self) -> usize {
        match self.columns.first() {
            Some(c) => c.len(),
            None => self.labels.as_ref().map_or(0, Vec::len),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    pub fn labels(&self) -> Result<&[u32]> {
        self.labels.as_deref().ok_or(Error::UnlabeledData)
    }

    pub fn column(&self, attr: usize) -> &Column {
        &self.columns[attr]
    }

    /// Category code of a discrete attribute. Panics on a continuous column.
    #[inline]
    pub fn code(&self, attr: usize, row: usize) -> u32 {
        match &self.columns[attr] {
            Column::Discrete(v) => v[row],
            Column::Continuous(_) => panic!("attribute {attr} is continuous"),
        }
    }

    /// Value of a continuous attribute. Panics on a discrete column.
    #[inline]
    pub fn num(&self, attr: usize, row: usize) -> f64 {
        match &self.columns[attr] {
            Column::Continuous(v) => v[row],
            Column::Discrete(_) => panic!("attribute {attr} is discrete"),
        }
    }

    pub fn value(&self, attr: usize, row: usize) -> Value {
        match &self.columns[attr] {
            Column::Discrete(v) => Value::Code(v[row]),
            Column::Continuous(v) => Value::Num(v[row]),
        }
    }

    pub fn record(&self, row: usize) -> Vec<Value> {
        (0..self.columns.len()).map(|a| self.value(a, row)).collect()
    }

    pub fn select(&self, rows: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            columns: self.columns.iter().map(|c| c.select(rows)).collect(),
            labels: self.labels.as_ref().map(|y| rows.iter().map(|&r| y[r]).collect()),
        }
    }

    /// Same rows with the class column dropped.
    pub fn without_labels(&self) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            columns: self.columns.clone(),
            labels: None,
        }
    }

    pub fn view(&self) -> DatasetView<'_> {
        DatasetView {
            data: self,
            rows: (0..self.len()).collect(),
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let schema = &self.schema;
        let mut header: Vec<&str> = schema.predictive.iter().map(|a| a.name.as_str()).collect();
        if self.labels.is_some() {
            header.push(&schema.class.name);
        }
        w.write_record(&header)?;
        let mut buf: Vec<String> = Vec::with_capacity(header.len());
        for r in 0..self.len() {
            buf.clear();
            for (a, col) in self.columns.iter().enumerate() {
                buf.push(match col {
                    Column::Discrete(v) => schema.attr(a).label(v[r]).to_string(),
                    Column::Continuous(v) => v[r].to_string(),
                });
            }
            if let Some(y) = &self.labels {
                buf.push(schema.class.label(y[r]).to_string());
            }
            w.write_record(&buf)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Reads a CSV against a JSON schema document.
pub fn load_dataset<R: Read, S: Read>(csv_source: R, schema_source: S) -> Result<Dataset> {
    let schema = Arc::new(Schema::from_reader(schema_source)?);
    read_csv(csv_source, schema)
}

/// Reads a CSV with a header row. The class column is optional; when it is
/// absent the dataset is unlabeled. Extra columns are rejected.
pub fn read_csv<R: Read>(csv_source: R, schema: Arc<Schema>) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(csv_source);
    let header = rdr.headers()?.clone();
    let (positions, class_pos) = column_positions(&header, &schema)?;
    let mut columns: Vec<Column> = schema
        .predictive
        .iter()
        .map(|a| match a.kind {
            AttrKind::Discrete => Column::Discrete(Vec::new()),
            AttrKind::Continuous => Column::Continuous(Vec::new()),
        })
        .collect();
    let mut labels = class_pos.map(|_| Vec::new());
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        for (a, &pos) in positions.iter().enumerate() {
            let attr = schema.attr(a);
            let raw = rec.get(pos).unwrap_or("");
            if raw.is_empty() {
                return Err(Error::MissingValue {
                    row: r,
                    column: attr.name.clone(),
                });
            }
            match &mut columns[a] {
                Column::Discrete(v) => v.push(attr.code_of(raw).ok_or_else(|| {
                    Error::ValueOutOfDomain {
                        row: r,
                        column: attr.name.clone(),
                        value: raw.to_string(),
                    }
                })?),
                Column::Continuous(v) => {
                    let x = parse_num(raw, r, &attr.name)?;
                    if attr.bounds.is_some_and(|(lo, hi)| x < lo || x > hi) {
                        return Err(Error::ValueOutOfDomain {
                            row: r,
                            column: attr.name.clone(),
                            value: raw.to_string(),
                        });
                    }
                    v.push(x);
                }
            }
        }
        if let (Some(pos), Some(y)) = (class_pos, labels.as_mut()) {
            let raw = rec.get(pos).unwrap_or("");
            if raw.is_empty() {
                return Err(Error::MissingValue {
                    row: r,
                    column: schema.class.name.clone(),
                });
            }
            y.push(schema.class.code_of(raw).ok_or_else(|| Error::ValueOutOfDomain {
                row: r,
                column: schema.class.name.clone(),
                value: raw.to_string(),
            })?);
        }
    }
    Dataset::new(schema, columns, labels)
}

/// Like [`read_csv`] but unknown discrete labels are kept as [`Value::Unseen`]
/// records instead of failing. Used for prediction inputs.
pub fn read_records<R: Read>(csv_source: R, schema: &Schema) -> Result<Vec<Vec<Value>>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(csv_source);
    let header = rdr.headers()?.clone();
    let (positions, _) = column_positions(&header, schema)?;
    let mut out = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let mut row = Vec::with_capacity(schema.n_attrs());
        for (a, &pos) in positions.iter().enumerate() {
            let raw = rec.get(pos).unwrap_or("");
            let attr = schema.attr(a);
            if raw.is_empty() {
                return Err(Error::MissingValue {
                    row: r,
                    column: attr.name.clone(),
                });
            }
            row.push(match attr.kind {
                AttrKind::Discrete => match attr.code_of(raw) {
                    Some(c) => Value::Code(c),
                    None => Value::Unseen(raw.to_string()),
                },
                AttrKind::Continuous => Value::Num(parse_num(raw, r, &attr.name)?),
            });
        }
        out.push(row);
    }
    Ok(out)
}

fn parse_num(raw: &str, row: usize, column: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Parse(format!("row {row}, column `{column}`: `{raw}` is not a number")))
}

fn column_positions(header: &csv::StringRecord, schema: &Schema) -> Result<(Vec<usize>, Option<usize>)> {
    let find = |name: &str| header.iter().position(|h| h == name);
    let mut positions = Vec::with_capacity(schema.n_attrs());
    for a in &schema.predictive {
        positions.push(
            find(&a.name)
                .ok_or_else(|| Error::SchemaMismatch(format!("column `{}` missing", a.name)))?,
        );
    }
    let class_pos = find(&schema.class.name);
    for h in header.iter() {
        let known = h == schema.class.name || schema.predictive.iter().any(|a| a.name == h);
        if !known {
            return Err(Error::SchemaMismatch(format!("unexpected column `{h}`")));
        }
    }
    let expected = positions.len() + usize::from(class_pos.is_some());
    if header.len() != expected {
        return Err(Error::SchemaMismatch("duplicate column in header".into()));
    }
    Ok((positions, class_pos))
}

/// Outcome of [`split_train_test`]; `degenerate` is set when either side is empty.
#[derive(Debug, Clone)]
pub struct TrainTest {
    pub train: Dataset,
    pub test: Dataset,
    pub degenerate: bool,
}

/// Seeded uniform shuffle followed by a prefix cut of `round(fraction * n)` rows
/// (halves round up).
pub fn split_train_test(d: &Dataset, train_fraction: f64, seed: u64) -> Result<TrainTest> {
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Domain(format!(
            "train fraction {train_fraction} not in (0, 1)"
        )));
    }
    let n = d.len();
    let n_train = ((train_fraction * n as f64) + 0.5).floor() as usize;
    let n_train = n_train.min(n);
    let mut idx: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    idx.shuffle(&mut rng);
    let (train_idx, test_idx) = idx.split_at(n_train);
    Ok(TrainTest {
        train: d.select(train_idx),
        test: d.select(test_idx),
        degenerate: train_idx.is_empty() || test_idx.is_empty(),
    })
}

/// A subset of rows of a dataset, sharing its storage.
#[derive(Debug, Clone)]
pub struct DatasetView<'a> {
    data: &'a Dataset,
    rows: Vec<usize>,
}

impl<'a> DatasetView<'a> {
    pub fn new(data: &'a Dataset, rows: Vec<usize>) -> Self {
        Self { data, rows }
    }

    pub fn data(&self) -> &'a Dataset {
        self.data
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn filter_path(&self, path: &Path) -> DatasetView<'a> {
        DatasetView {
            data: self.data,
            rows: self
                .rows
                .iter()
                .copied()
                .filter(|&r| path.holds(self.data, r))
                .collect(),
        }
    }

    pub fn partition(&self, cond: &crate::data::SplitCondition) -> (DatasetView<'a>, DatasetView<'a>) {
        let (l, r): (Vec<usize>, Vec<usize>) =
            self.rows.iter().partition(|&&row| cond.holds(self.data, row));
        (
            DatasetView { data: self.data, rows: l },
            DatasetView { data: self.data, rows: r },
        )
    }

    /// Per-class row counts.
    pub fn class_counts(&self) -> Result<Vec<usize>> {
        let y = self.data.labels()?;
        let mut counts = vec![0usize; self.data.schema().n_classes()];
        for &r in &self.rows {
            counts[y[r] as usize] += 1;
        }
        Ok(counts)
    }

    pub fn materialize(&self) -> Dataset {
        self.data.select(&self.rows)
    }
}

/// Rows of `d` satisfying every condition of `path`.
pub fn filter_by_path<'a>(d: &'a Dataset, path: &Path) -> Result<DatasetView<'a>> {
    path.check(d.schema())?;
    Ok(d.view().filter_path(path))
}
