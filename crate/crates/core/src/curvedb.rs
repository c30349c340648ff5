//! A minimal text format for tables of elliptic curves indexed by conductor.
//!
//! ```text
//! # coverage <= 500000
//! # conductor label a1 a2 a3 a4 a6 [min_disc]
//! 98 a1 1 5 0 7 0 -343
//! ```
//!
//! Models are assumed minimal; a stored discriminant must agree with the one
//! computed from the coefficients. The `coverage` directive states up to
//! which conductor the file lists every curve. Without it no conductor is
//! considered complete.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use serde::Serialize;

use crate::ellcurve::{general_invariants, CurveGeneral};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub conductor: u64,
    pub label: String,
    pub curve: CurveGeneral,
    pub min_disc: BigInt,
    /// 1-based source line, 0 for records built in memory.
    pub line: usize,
}

impl CurveRecord {
    /// Builds a record from coefficients, computing the discriminant.
    pub fn new(conductor: u64, label: impl Into<String>, curve: CurveGeneral) -> Result<Self> {
        let label = label.into();
        let inv = general_invariants(&curve).map_err(|_| Error::Singular(label.clone()))?;
        Ok(CurveRecord {
            conductor,
            label,
            curve,
            min_disc: inv.disc,
            line: 0,
        })
    }
}

/// Whether a conductor query is known to return every curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coverage {
    Complete,
    Unknown,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CurveDb {
    records: Vec<CurveRecord>,
    coverage_bound: Option<u64>,
    index: BTreeMap<u64, Vec<usize>>,
}

impl CurveDb {
    pub fn from_records(records: Vec<CurveRecord>, coverage_bound: Option<u64>) -> Self {
        let mut index: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            index.entry(r.conductor).or_default().push(i);
        }
        CurveDb {
            records,
            coverage_bound,
            index,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            line: 0,
            msg: format!("{}: {e}", path.display()),
        })?;
        parse_db(&text)
    }

    pub fn records(&self) -> &[CurveRecord] {
        &self.records
    }

    pub fn coverage_bound(&self) -> Option<u64> {
        self.coverage_bound
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn coverage_of(&self, n: u64) -> Coverage {
        match self.coverage_bound {
            Some(bound) if n <= bound => Coverage::Complete,
            _ => Coverage::Unknown,
        }
    }

    /// All records of conductor `n`, in file order.
    pub fn by_conductor(&self, n: u64) -> (Vec<&CurveRecord>, Coverage) {
        let records = self
            .index
            .get(&n)
            .map(|ix| ix.iter().map(|&i| &self.records[i]).collect())
            .unwrap_or_default();
        (records, self.coverage_of(n))
    }

    /// Inverse of [`parse_db`]; always writes the discriminant column.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(bound) = self.coverage_bound {
            let _ = writeln!(out, "# coverage <= {bound}");
        }
        for r in &self.records {
            let [a1, a2, a3, a4, a6] = r.curve.coefficients();
            let _ = writeln!(
                out,
                "{} {} {a1} {a2} {a3} {a4} {a6} {}",
                r.conductor, r.label, r.min_disc
            );
        }
        out
    }
}

fn parse_coverage(comment: &str) -> Option<&str> {
    let rest = comment.trim().strip_prefix("coverage")?.trim_start();
    rest.strip_prefix("<=")
        .or_else(|| rest.strip_prefix('≤'))
        .map(str::trim)
}

fn parse_int(field: &str, what: &str, line: usize) -> Result<BigInt> {
    field.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("{what}: not an integer: `{field}`"),
    })
}

pub fn parse_db(source: &str) -> Result<CurveDb> {
    let mut records = Vec::new();
    let mut coverage_bound = None;
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let text = raw.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            if let Some(bound) = parse_coverage(comment) {
                coverage_bound = Some(bound.parse::<u64>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad coverage bound `{bound}`"),
                })?);
            }
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 7 && fields.len() != 8 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 7 or 8 fields, found {}", fields.len()),
            });
        }
        let conductor: u64 = fields[0].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad conductor `{}`", fields[0]),
        })?;
        if conductor == 0 {
            return Err(Error::Parse {
                line,
                msg: "conductor must be positive".into(),
            });
        }
        let label = fields[1].to_string();
        let a: Vec<BigInt> = fields[2..7]
            .iter()
            .map(|f| parse_int(f, "coefficient", line))
            .collect::<Result<_>>()?;
        let curve = CurveGeneral::new(a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone(), a[4].clone());
        let mut record = CurveRecord::new(conductor, label, curve)?;
        record.line = line;
        if let Some(stored) = fields.get(7) {
            let stored = parse_int(stored, "discriminant", line)?;
            if stored != record.min_disc {
                return Err(Error::Parse {
                    line,
                    msg: format!("stored discriminant {stored} differs from computed {}", record.min_disc),
                });
            }
        }
        records.push(record);
    }
    Ok(CurveDb::from_records(records, coverage_bound))
}
