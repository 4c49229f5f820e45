use std::collections::HashMap;
use std::fmt;
use std::io::Read;

use indexmap::IndexMap;
use rustc_hash::{FxHashMap, FxHashSet};

use super::TeamError;

/// Ordered, duplicate-free attribute names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    attributes: Vec<String>,
    index: HashMap<String, usize>,
}

impl Schema {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, TeamError> {
        let attributes: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(attributes.len());
        for (i, name) in attributes.iter().enumerate() {
            if name.is_empty() {
                return Err(TeamError::format(1, format!("attribute {} has an empty name", i + 1)));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(TeamError::format(1, format!("duplicate attribute {name:?}")));
            }
        }
        Ok(Schema { attributes, index })
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

/// A tuple of attribute names; may be empty and may repeat names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AttributeTuple(pub Vec<String>);

impl AttributeTuple {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        AttributeTuple(names.into_iter().map(Into::into).collect())
    }

    pub fn empty() -> Self {
        AttributeTuple(Vec::new())
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Column positions in `schema`, in tuple order.
    pub fn resolve(&self, schema: &Schema) -> Result<Vec<usize>, TeamError> {
        self.0
            .iter()
            .map(|n| {
                schema
                    .position(n)
                    .ok_or_else(|| TeamError::UnknownAttribute(n.clone()))
            })
            .collect()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &AttributeTuple) -> AttributeTuple {
        AttributeTuple(self.0.iter().chain(&other.0).cloned().collect())
    }
}

impl fmt::Display for AttributeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("()")
        } else {
            f.write_str(&self.0.join(" "))
        }
    }
}

/// One column, dictionary-encoded. Codes are dense and compare exactly like
/// the underlying strings.
#[derive(Clone, Debug)]
struct Column {
    codes: Vec<u32>,
    dict: Vec<String>,
}

/// A finite set of rows over a schema (a database relation, or a team of
/// assignments). Rows are deduplicated, keeping first occurrences.
#[derive(Clone, Debug)]
pub struct Team {
    schema: Schema,
    columns: Vec<Column>,
    rows: usize,
}

/// Dense labels of a column function: equal labels iff equal value tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fibers {
    pub labels: Vec<u32>,
    pub count: usize,
}

impl Team {
    /// Builds a team from string rows; duplicates are dropped.
    pub fn from_rows<S, R>(schema: Schema, rows: impl IntoIterator<Item = R>) -> Result<Self, TeamError>
    where
        S: AsRef<str>,
        R: AsRef<[S]>,
    {
        let mut builder = TeamBuilder::new(schema);
        for (i, row) in rows.into_iter().enumerate() {
            builder.push(i + 2, row.as_ref().iter().map(|s| s.as_ref()))?;
        }
        Ok(builder.finish())
    }

    /// Builds a team from pre-coded columns; code `k` stands for the string `k`.
    pub fn from_code_columns(schema: Schema, columns: Vec<Vec<u32>>) -> Result<Self, TeamError> {
        if columns.len() != schema.len() {
            return Err(TeamError::format(1, "column count differs from schema"));
        }
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(TeamError::format(1, "columns have different lengths"));
        }
        let raw = Team {
            schema,
            columns: columns
                .into_iter()
                .map(|codes| {
                    let max = codes.iter().copied().max().map_or(0, |m| m as usize + 1);
                    Column {
                        codes,
                        dict: (0..max).map(|v| v.to_string()).collect(),
                    }
                })
                .collect(),
            rows,
        };
        Ok(raw.deduplicated())
    }

    fn deduplicated(self) -> Team {
        let all: Vec<usize> = (0..self.schema.len()).collect();
        let fibers = self.fibers(&all);
        if fibers.count == self.rows {
            return self;
        }
        let mut seen = vec![false; fibers.count];
        let keep: Vec<usize> = (0..self.rows)
            .filter(|&r| !std::mem::replace(&mut seen[fibers.labels[r] as usize], true))
            .collect();
        Team {
            rows: keep.len(),
            columns: self
                .columns
                .into_iter()
                .map(|c| Column {
                    codes: keep.iter().map(|&r| c.codes[r]).collect(),
                    dict: c.dict,
                })
                .collect(),
            schema: self.schema,
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn value(&self, row: usize, attr: usize) -> &str {
        let col = &self.columns[attr];
        &col.dict[col.codes[row] as usize]
    }

    pub(crate) fn code(&self, row: usize, attr: usize) -> u32 {
        self.columns[attr].codes[row]
    }

    pub fn row(&self, row: usize) -> Vec<&str> {
        (0..self.schema.len()).map(|a| self.value(row, a)).collect()
    }

    pub fn rows_as_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).into_iter().map(str::to_owned).collect())
            .collect()
    }

    /// The column function of `attrs`, as dense labels in first-occurrence order.
    pub fn fibers(&self, attrs: &[usize]) -> Fibers {
        let mut labels = vec![0u32; self.rows];
        let mut count = usize::from(self.rows > 0);
        for &attr in attrs {
            let codes = &self.columns[attr].codes;
            let mut ids: FxHashMap<u64, u32> = FxHashMap::default();
            for (label, &code) in labels.iter_mut().zip(codes) {
                let key = (u64::from(*label) << 32) | u64::from(code);
                let next = ids.len() as u32;
                *label = *ids.entry(key).or_insert(next);
            }
            count = ids.len();
        }
        Fibers { labels, count }
    }

    /// The column function `ẋ` of an attribute tuple.
    pub fn column_function(&self, tuple: &AttributeTuple) -> Result<ColumnFunction<'_>, TeamError> {
        Ok(ColumnFunction {
            team: self,
            attrs: tuple.resolve(&self.schema)?,
        })
    }
}

/// `ẋ : rows → values^n`, the restriction of each row to a tuple of attributes.
#[derive(Clone, Debug)]
pub struct ColumnFunction<'a> {
    team: &'a Team,
    attrs: Vec<usize>,
}

impl<'a> ColumnFunction<'a> {
    pub fn eval(&self, row: usize) -> Vec<&'a str> {
        self.attrs.iter().map(|&a| self.team.value(row, a)).collect()
    }

    pub fn attrs(&self) -> &[usize] {
        &self.attrs
    }

    pub fn fibers(&self) -> Fibers {
        self.team.fibers(&self.attrs)
    }
}

struct TeamBuilder {
    schema: Schema,
    dicts: Vec<FxHashMap<String, u32>>,
    columns: Vec<Column>,
    seen: FxHashSet<Vec<u32>>,
    rows: usize,
}

impl TeamBuilder {
    fn new(schema: Schema) -> Self {
        let width = schema.len();
        TeamBuilder {
            schema,
            dicts: vec![FxHashMap::default(); width],
            columns: vec![
                Column {
                    codes: Vec::new(),
                    dict: Vec::new()
                };
                width
            ],
            seen: FxHashSet::default(),
            rows: 0,
        }
    }

    /// Appends a row unless it duplicates an earlier one. `line` is used in errors.
    fn push<'s>(&mut self, line: usize, values: impl Iterator<Item = &'s str>) -> Result<(), TeamError> {
        let mut codes = Vec::with_capacity(self.schema.len());
        for (attr, value) in values.enumerate() {
            if attr >= self.schema.len() {
                return Err(TeamError::format(
                    line,
                    format!("expected {} fields, found more", self.schema.len()),
                ));
            }
            if value.is_empty() {
                return Err(TeamError::format(
                    line,
                    format!("missing value for {:?}", self.schema.attributes()[attr]),
                ));
            }
            let dict = &mut self.dicts[attr];
            let code = match dict.get(value) {
                Some(&c) => c,
                None => {
                    let c = dict.len() as u32;
                    dict.insert(value.to_owned(), c);
                    self.columns[attr].dict.push(value.to_owned());
                    c
                }
            };
            codes.push(code);
        }
        if codes.len() != self.schema.len() {
            return Err(TeamError::format(
                line,
                format!("expected {} fields, found {}", self.schema.len(), codes.len()),
            ));
        }
        if self.seen.insert(codes.clone()) {
            for (col, code) in self.columns.iter_mut().zip(codes) {
                col.codes.push(code);
            }
            self.rows += 1;
        }
        Ok(())
    }

    fn finish(self) -> Team {
        Team {
            schema: self.schema,
            columns: self.columns,
            rows: self.rows,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guesses the format from a file extension; CSV unless it ends in `.json`.
    pub fn from_path(path: &std::path::Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Reads a team. CSV: the first record is the header. JSON: an array of flat
/// objects with string values, all with the same keys.
pub fn load_team<R: Read>(source: R, format: Format) -> Result<Team, TeamError> {
    match format {
        Format::Csv => load_csv(source),
        Format::Json => load_json(source),
    }
}

fn load_csv<R: Read>(source: R) -> Result<Team, TeamError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(source);
    let mut records = reader.records();
    let header = match records.next() {
        Some(rec) => rec.map_err(csv_error)?,
        None => return Err(TeamError::format(1, "empty header")),
    };
    if header.iter().all(str::is_empty) {
        return Err(TeamError::format(1, "empty header"));
    }
    let mut builder = TeamBuilder::new(Schema::new(header.iter())?);
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        builder.push(line, rec.iter())?;
    }
    Ok(builder.finish())
}

fn csv_error(err: csv::Error) -> TeamError {
    let line = err.position().map_or(0, |p| p.line() as usize);
    TeamError::format(line, err.to_string())
}

fn load_json<R: Read>(source: R) -> Result<Team, TeamError> {
    let objects: Vec<IndexMap<String, serde_json::Value>> =
        serde_json::from_reader(source).map_err(|e| TeamError::format(e.line(), e.to_string()))?;
    let Some(first) = objects.first() else {
        return Err(TeamError::format(1, "empty header: no objects to take the schema from"));
    };
    let schema = Schema::new(first.keys().cloned())?;
    let mut builder = TeamBuilder::new(schema.clone());
    for (i, obj) in objects.iter().enumerate() {
        let record = i + 1;
        if obj.len() != schema.len() {
            return Err(TeamError::format(
                record,
                format!("object has {} keys, expected {}", obj.len(), schema.len()),
            ));
        }
        let mut values = Vec::with_capacity(schema.len());
        for name in schema.attributes() {
            match obj.get(name) {
                Some(serde_json::Value::String(s)) => values.push(s.as_str()),
                Some(serde_json::Value::Null) | None => {
                    return Err(TeamError::format(record, format!("missing value for {name:?}")))
                }
                Some(other) => {
                    return Err(TeamError::format(
                        record,
                        format!("value for {name:?} is not a string: {other}"),
                    ))
                }
            }
        }
        builder.push(record, values.into_iter())?;
    }
    Ok(builder.finish())
}
