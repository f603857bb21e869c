//! Classification tables of Calabi–Yau double covers of Picard number one,
//! grouped by the kind of quotient `Y`, with validators.
//!
//! The rows ship as a TSV fixture (`family N s h3 hc2 e refs`) embedded at
//! compile time and checked against a SHA-256 digest on load. A second
//! fixture carries the quotient data (`H'³`, `e(Y)`) needed to recompute
//! the unstarred Euler characteristics.

use crate::invariants::{hc2_of_cover, hc2_offset, QuotientData};
use crate::rational::{self, q, qi, Q};
use num_integer::Integer;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub const OPERATIONS: &[&str] = &["load_dataset", "validate_all", "query"];

pub const TABLES_TSV: &str = include_str!("../data/tables.tsv");
pub const TABLES_SHA256: &str = "1fbb399d6df2a516919fa2a39d29762452315110b140ca7620f53f3390c2c4be";
pub const QUOTIENTS_TSV: &str = include_str!("../data/quotients.tsv");
pub const QUOTIENTS_SHA256: &str =
    "3237cd540abc7583a9df5984c7bf6d35cc15ab9d346bf46b28a3001950041efb";

pub const HEADER: &str = "family\tN\ts\th3\thc2\te\trefs";
const QUOTIENT_HEADER: &str = "family\tN\ts\th3\tname\td\teuler_Y\tsource";

/// Starred entries known to fail the consistency rule. They are kept as
/// published and must keep failing it: `(family, N, s, h3, e)`.
pub const KNOWN_ANOMALIES: &[(Family, u32, u32, i64, i64)] = &[(Family::IndexHalf, 2, 2, 30, -95)];

/// Global bounds `(min, max)` that every row obeys and some row attains.
pub const H3_BOUNDS: (i64, i64) = (1, 44);
pub const HC2_BOUNDS: (i64, i64) = (20, 92);
pub const N_BOUNDS: (i64, i64) = (0, 8);
pub const S_BOUNDS: (i64, i64) = (2, 10);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TablesError {
    #[error("checksum mismatch for {file}: expected {expected}, got {actual}")]
    Checksum {
        file: String,
        expected: String,
        actual: String,
    },
    #[error("{file} line {line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("cannot read {0}")]
    Io(String),
    #[error("malformed range {0:?}")]
    MalformedRange(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

type Result<T> = std::result::Result<T, TablesError>;

/// Kind of quotient, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SmoothFano,
    FanoEnriques,
    IndexHalf,
    P1112,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::SmoothFano,
        Family::FanoEnriques,
        Family::IndexHalf,
        Family::P1112,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::SmoothFano => "smooth_fano",
            Family::FanoEnriques => "fano_enriques",
            Family::IndexHalf => "index_half",
            Family::P1112 => "p1112",
        }
    }

    /// Rows shipped for this family.
    pub fn expected_rows(&self) -> usize {
        match self {
            Family::SmoothFano => 17,
            Family::FanoEnriques => 3,
            Family::IndexHalf => 29,
            Family::P1112 => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = TablesError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| TablesError::UnknownFamily(s.to_string()))
    }
}

/// An Euler characteristic entry; starred ones are realised by some
/// example but not known to be the only value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EValue {
    pub value: i64,
    pub starred: bool,
}

impl fmt::Display for EValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.value, if self.starred { "*" } else { "" })
    }
}

impl FromStr for EValue {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (body, starred) = match s.strip_suffix('*') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let value = body.parse().map_err(|_| format!("bad e value {s:?}"))?;
        Ok(Self { value, starred })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub family: Family,
    #[serde(rename = "N")]
    pub n: u32,
    pub s: u32,
    pub h3: i64,
    pub hc2: i64,
    pub e_values: Vec<EValue>,
    pub refs: Vec<String>,
}

impl TableRow {
    pub fn key(&self) -> (Family, u32, u32, i64) {
        (self.family, self.n, self.s, self.h3)
    }

    pub fn label(&self) -> String {
        format!(
            "{} N={} s={} h3={} hc2={}",
            self.family, self.n, self.s, self.h3, self.hc2
        )
    }

    pub fn to_tsv_line(&self) -> String {
        let e: Vec<String> = self.e_values.iter().map(EValue::to_string).collect();
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.family,
            self.n,
            self.s,
            self.h3,
            self.hc2,
            e.join(","),
            self.refs.join(", ")
        )
    }
}

/// Where a quotient's `e(Y)` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EulerSource {
    /// Hodge numbers of the quotient, independent of the table.
    Hodge,
    /// Solved back from the tabulated `e(X)`; only a consistency check.
    Inverted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientRecord {
    pub family: Family,
    #[serde(rename = "N")]
    pub n: u32,
    pub s: u32,
    pub h3: i64,
    pub name: String,
    #[serde(with = "rational::as_string")]
    pub d: Q,
    #[serde(with = "rational::as_string")]
    pub euler_y: Q,
    pub source: EulerSource,
}

impl QuotientRecord {
    pub fn key(&self) -> (Family, u32, u32, i64) {
        (self.family, self.n, self.s, self.h3)
    }

    pub fn quotient_data(&self) -> std::result::Result<QuotientData, crate::invariants::InvariantsError> {
        Ok(QuotientData::new(self.d.clone(), self.s, self.n)?.with_euler(self.euler_y.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub rows: Vec<TableRow>,
    pub quotients: Vec<QuotientRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn verify_checksum(file: &str, bytes: &[u8], expected: &str) -> Result<()> {
    let actual = sha256_hex(bytes);
    if actual.eq_ignore_ascii_case(expected.trim()) {
        Ok(())
    } else {
        Err(TablesError::Checksum {
            file: file.to_string(),
            expected: expected.trim().to_string(),
            actual,
        })
    }
}

fn parse_err(file: &str, line: usize, msg: impl Into<String>) -> TablesError {
    TablesError::Parse {
        file: file.to_string(),
        line,
        msg: msg.into(),
    }
}

fn data_lines<'a>(
    file: &'a str,
    text: &'a str,
    header: &str,
    width: usize,
) -> Result<impl Iterator<Item = (usize, Vec<&'a str>)> + 'a> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == header => {}
        _ => return Err(parse_err(file, 1, format!("expected header {header:?}"))),
    }
    let rows: Vec<(usize, Vec<&str>)> = lines
        .enumerate()
        .map(|(i, l)| (i + 2, l.split('\t').collect::<Vec<&str>>()))
        .collect();
    if let Some((line, cols)) = rows.iter().find(|(_, c)| c.len() != width) {
        return Err(parse_err(
            file,
            *line,
            format!("{} columns, expected {width}", cols.len()),
        ));
    }
    Ok(rows.into_iter())
}

fn field<T: FromStr>(file: &str, line: usize, name: &str, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| parse_err(file, line, format!("bad {name} {s:?}")))
}

pub fn parse_tables(text: &str) -> Result<Vec<TableRow>> {
    const FILE: &str = "tables.tsv";
    data_lines(FILE, text, HEADER, 7)?
        .map(|(line, c)| {
            let family = c[0]
                .parse()
                .map_err(|e: TablesError| parse_err(FILE, line, e.to_string()))?;
            let e_values = if c[5].is_empty() {
                Vec::new()
            } else {
                c[5].split(',')
                    .map(|v| v.parse().map_err(|m: String| parse_err(FILE, line, m)))
                    .collect::<Result<Vec<EValue>>>()?
            };
            Ok(TableRow {
                family,
                n: field(FILE, line, "N", c[1])?,
                s: field(FILE, line, "s", c[2])?,
                h3: field(FILE, line, "h3", c[3])?,
                hc2: field(FILE, line, "hc2", c[4])?,
                e_values,
                refs: c[6].split(", ").map(String::from).collect(),
            })
        })
        .collect()
}

pub fn parse_quotients(text: &str) -> Result<Vec<QuotientRecord>> {
    const FILE: &str = "quotients.tsv";
    data_lines(FILE, text, QUOTIENT_HEADER, 8)?
        .map(|(line, c)| {
            let family = c[0]
                .parse()
                .map_err(|e: TablesError| parse_err(FILE, line, e.to_string()))?;
            let rat = |name: &str, s: &str| {
                rational::parse_q(s).map_err(|_| parse_err(FILE, line, format!("bad {name} {s:?}")))
            };
            let source = match c[7] {
                "hodge" => EulerSource::Hodge,
                "inverted" => EulerSource::Inverted,
                other => return Err(parse_err(FILE, line, format!("bad source {other:?}"))),
            };
            Ok(QuotientRecord {
                family,
                n: field(FILE, line, "N", c[1])?,
                s: field(FILE, line, "s", c[2])?,
                h3: field(FILE, line, "h3", c[3])?,
                name: c[4].to_string(),
                d: rat("d", c[5])?,
                euler_y: rat("euler_Y", c[6])?,
                source,
            })
        })
        .collect()
}

/// Renders rows in the fixture format; the shipped dataset round-trips
/// byte for byte.
pub fn to_tsv(rows: &[TableRow]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_tsv_line());
        out.push('\n');
    }
    out
}

/// The embedded dataset, checksum-verified.
pub fn load_dataset() -> Result<Dataset> {
    load_embedded(TABLES_TSV, TABLES_SHA256)
}

fn load_embedded(tables: &str, digest: &str) -> Result<Dataset> {
    verify_checksum("tables.tsv", tables.as_bytes(), digest)?;
    verify_checksum("quotients.tsv", QUOTIENTS_TSV.as_bytes(), QUOTIENTS_SHA256)?;
    Ok(Dataset {
        rows: parse_tables(tables)?,
        quotients: parse_quotients(QUOTIENTS_TSV)?,
    })
}

/// Loads rows from `path`, verified against `<path>.sha256` when that
/// sidecar exists. Quotient data stays embedded.
pub fn load_dataset_from(path: &Path) -> Result<Dataset> {
    let bytes = std::fs::read(path).map_err(|_| TablesError::Io(path.display().to_string()))?;
    let mut sidecar = path.as_os_str().to_owned();
    sidecar.push(".sha256");
    if let Ok(expected) = std::fs::read_to_string(&sidecar) {
        let digest = expected.split_whitespace().next().unwrap_or("");
        verify_checksum(&path.display().to_string(), &bytes, digest)?;
    }
    let text = String::from_utf8(bytes)
        .map_err(|_| parse_err(&path.display().to_string(), 0, "not UTF-8"))?;
    verify_checksum("quotients.tsv", QUOTIENTS_TSV.as_bytes(), QUOTIENTS_SHA256)?;
    Ok(Dataset {
        rows: parse_tables(&text)?,
        quotients: parse_quotients(QUOTIENTS_TSV)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub failures: Vec<String>,
    /// Findings that do not fail the check.
    pub notes: Vec<String>,
}

impl Check {
    fn new(name: &'static str, failures: Vec<String>) -> Self {
        Self {
            name,
            passed: failures.is_empty(),
            failures,
            notes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failure_count(&self) -> usize {
        self.checks.iter().map(|c| c.failures.len()).sum()
    }
}

/// Branch surface Euler number `e(S)` for a row, from `d = h3/2`.
fn branch_euler(row: &TableRow) -> Option<Q> {
    QuotientData::new(q(row.h3, 2), row.s, row.n)
        .ok()?
        .branch_surface_euler()
        .ok()
}

/// `e(Y) = (e(X) + e(S) + N)/2`.
pub fn implied_quotient_euler(row: &TableRow, e: i64) -> Option<Q> {
    branch_euler(row).map(|es| (qi(e) + es + qi(row.n.into())) / qi(2))
}

/// Runs every dataset check; failures are report entries, never errors.
pub fn validate_all(ds: &Dataset) -> ValidationReport {
    let rows = &ds.rows;
    let mut checks = Vec::new();

    // hc2 = (4/s)(24 - 3N/2) + (s²/4)·h3
    checks.push(Check::new(
        "row_identity",
        rows.iter()
            .filter_map(|r| match r.s {
                0 => Some(format!("{}: s = 0", r.label())),
                s => {
                    let want = hc2_of_cover(s, r.n, &qi(r.h3));
                    (want != qi(r.hc2))
                        .then(|| format!("{}: formula gives {}", r.label(), rational::render(&want)))
                }
            })
            .collect(),
    ));

    type Field = fn(&TableRow) -> i64;
    let bounds: [(&str, (i64, i64), Field); 4] = [
        ("h3", H3_BOUNDS, |r| r.h3),
        ("hc2", HC2_BOUNDS, |r| r.hc2),
        ("N", N_BOUNDS, |r| r.n.into()),
        ("s", S_BOUNDS, |r| r.s.into()),
    ];
    let mut out_of_bounds = Vec::new();
    let mut sharp = Vec::new();
    for (name, (lo, hi), get) in bounds {
        for r in rows {
            let v = get(r);
            if v < lo || v > hi {
                out_of_bounds.push(format!("{}: {name} = {v} outside [{lo}, {hi}]", r.label()));
            }
        }
        if !rows.iter().any(|r| get(r) == lo) {
            sharp.push(format!("lower bound {name} = {lo} not attained"));
        }
        if !rows.iter().any(|r| get(r) == hi) {
            sharp.push(format!("upper bound {name} = {hi} not attained"));
        }
    }
    checks.push(Check::new("bounds", out_of_bounds));
    checks.push(Check::new("sharpness", sharp));

    let quotients: BTreeMap<_, &QuotientRecord> = ds.quotients.iter().map(|q| (q.key(), q)).collect();
    let mut euler_fail = Vec::new();
    let mut euler_notes = Vec::new();
    for r in rows {
        for e in r.e_values.iter().filter(|e| !e.starred) {
            let Some(rec) = quotients.get(&r.key()) else {
                euler_fail.push(format!("{}: no quotient data for e = {}", r.label(), e.value));
                continue;
            };
            let got = rec
                .quotient_data()
                .and_then(|d| d.invariants())
                .ok()
                .and_then(|inv| inv.euler);
            if got != Some(qi(e.value)) {
                euler_fail.push(format!(
                    "{}: e = {} but {} gives {}",
                    r.label(),
                    e.value,
                    rec.name,
                    got.map_or("nothing".into(), |g| rational::render(&g))
                ));
            } else if rec.source == EulerSource::Inverted {
                euler_notes.push(format!("{}: e(Y) solved from the table", r.label()));
            }
        }
    }
    let mut c = Check::new("euler_reproduction", euler_fail);
    c.notes = euler_notes;
    checks.push(c);

    // Starred values: the implied e(Y) must be an even integer at most 4
    // (b₃ is even and b₂ = 1).
    let mut starred_fail = Vec::new();
    let mut anomalies = Vec::new();
    for r in rows {
        for e in r.e_values.iter().filter(|e| e.starred) {
            let known = KNOWN_ANOMALIES.contains(&(r.family, r.n, r.s, r.h3, e.value));
            let ok = implied_quotient_euler(r, e.value).is_some_and(|ey| {
                ey.is_integer() && ey.to_integer().is_even() && ey <= qi(4)
            });
            match (ok, known) {
                (true, false) => {}
                (false, true) => anomalies.push(format!(
                    "{}: e = {}* implies e(Y) = {} (known anomaly, kept as published)",
                    r.label(),
                    e.value,
                    implied_quotient_euler(r, e.value).map_or("?".into(), |v| rational::render(&v))
                )),
                (false, false) => starred_fail.push(format!(
                    "{}: e = {}* implies e(Y) = {}",
                    r.label(),
                    e.value,
                    implied_quotient_euler(r, e.value).map_or("?".into(), |v| rational::render(&v))
                )),
                (true, true) => starred_fail.push(format!(
                    "{}: registered anomaly e = {}* is no longer anomalous",
                    r.label(),
                    e.value
                )),
            }
        }
    }
    for &(family, n, s, h3, e) in KNOWN_ANOMALIES {
        let present = rows.iter().any(|r| {
            r.key() == (family, n, s, h3) && r.e_values.iter().any(|v| v.value == e && v.starred)
        });
        if !present {
            starred_fail.push(format!(
                "registered anomaly {family} N={n} s={s} h3={h3} e={e}* missing"
            ));
        }
    }
    let mut c = Check::new("starred_consistency", starred_fail);
    c.notes = anomalies;
    checks.push(c);

    // duplicate keys, and quotient records with no row
    let mut key_fail = Vec::new();
    let mut seen = BTreeSet::new();
    for r in rows {
        if !seen.insert(r.key()) {
            key_fail.push(format!("{}: duplicate row", r.label()));
        }
    }
    for rec in &ds.quotients {
        if !seen.contains(&rec.key()) {
            key_fail.push(format!("quotient {} matches no row", rec.name));
        }
    }
    checks.push(Check::new("row_keys", key_fail));

    let mut fam = Vec::new();
    for r in rows {
        let ok = match r.family {
            Family::SmoothFano => r.n == 0,
            Family::FanoEnriques => r.n == 8,
            Family::IndexHalf => r.s == 2 && (1..=7).contains(&r.n),
            Family::P1112 => r.n == 1 && r.s == 10,
        };
        if !ok {
            fam.push(format!("{}: N/s incompatible with family", r.label()));
        }
        let stars_ok = match r.family {
            Family::IndexHalf => r.e_values.iter().all(|e| e.starred),
            _ => r.e_values.len() == 1 && !r.e_values[0].starred,
        };
        if !stars_ok {
            fam.push(format!("{}: e entries have the wrong form for the family", r.label()));
        }
    }
    for f in Family::ALL {
        let count = rows.iter().filter(|r| r.family == f).count();
        if count != f.expected_rows() {
            fam.push(format!("{f}: {count} rows, expected {}", f.expected_rows()));
        }
    }
    checks.push(Check::new("family_invariants", fam));

    // empirical regularity of the index-½ table
    checks.push(Check::new(
        "index_half_h3_mod_4",
        rows.iter()
            .filter(|r| r.family == Family::IndexHalf && (r.h3 - i64::from(r.n)).rem_euclid(4) != 0)
            .map(|r| format!("{}: h3 ≢ N (mod 4)", r.label()))
            .collect(),
    ));

    let mut offsets: BTreeMap<(u32, u32), Vec<(Q, String)>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.s > 0) {
        let off = qi(r.hc2) - q(i64::from(r.s * r.s), 4) * qi(r.h3);
        offsets.entry((r.s, r.n)).or_default().push((off, r.label()));
    }
    let mut off_fail = Vec::new();
    for ((s, n), vals) in &offsets {
        let expected = hc2_offset(*s, *n);
        for (v, label) in vals {
            if *v != expected {
                off_fail.push(format!(
                    "{label}: offset {} differs from {} for (s, N) = ({s}, {n})",
                    rational::render(v),
                    rational::render(&expected)
                ));
            }
        }
    }
    checks.push(Check::new("offset_constancy", off_fail));

    let passed = checks.iter().all(|c| c.passed);
    ValidationReport { checks, passed }
}

/// Inclusive integer range, either end open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct IntRange {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl IntRange {
    pub fn contains(&self, v: i64) -> bool {
        self.lo.is_none_or(|lo| v >= lo) && self.hi.is_none_or(|hi| v <= hi)
    }
}

impl FromStr for IntRange {
    type Err = TablesError;

    /// Accepts `a..b`, `a..`, `..b`, `>a`, `>=a`, `<b`, `<=b`, `=a`, `a`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = || TablesError::MalformedRange(text.to_string());
        let s = text.trim();
        let num = |x: &str| x.trim().parse::<i64>().map_err(|_| bad());
        let r = if let Some((a, b)) = s.split_once("..") {
            IntRange {
                lo: (!a.trim().is_empty()).then(|| num(a)).transpose()?,
                hi: (!b.trim().is_empty()).then(|| num(b)).transpose()?,
            }
        } else if let Some(x) = s.strip_prefix(">=") {
            IntRange { lo: Some(num(x)?), hi: None }
        } else if let Some(x) = s.strip_prefix("<=") {
            IntRange { lo: None, hi: Some(num(x)?) }
        } else if let Some(x) = s.strip_prefix('>') {
            IntRange { lo: Some(num(x)?.checked_add(1).ok_or_else(bad)?), hi: None }
        } else if let Some(x) = s.strip_prefix('<') {
            IntRange { lo: None, hi: Some(num(x)?.checked_sub(1).ok_or_else(bad)?) }
        } else {
            let v = num(s.strip_prefix('=').unwrap_or(s))?;
            IntRange { lo: Some(v), hi: Some(v) }
        };
        if r.lo.is_none() && r.hi.is_none() && s != ".." {
            return Err(bad());
        }
        if let (Some(lo), Some(hi)) = (r.lo, r.hi) {
            if lo > hi {
                return Err(bad());
            }
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Filter {
    pub n: Option<u32>,
    pub s: Option<u32>,
    pub h3: Option<IntRange>,
    pub hc2: Option<IntRange>,
    pub family: Option<Family>,
}

impl Filter {
    pub fn matches(&self, r: &TableRow) -> bool {
        self.n.is_none_or(|n| r.n == n)
            && self.s.is_none_or(|s| r.s == s)
            && self.h3.is_none_or(|h| h.contains(r.h3))
            && self.hc2.is_none_or(|h| h.contains(r.hc2))
            && self.family.is_none_or(|f| r.family == f)
    }
}

/// Matching rows ordered by `(family, N, s, h3)`, ties kept in file order.
pub fn query(ds: &Dataset, filter: &Filter) -> Vec<TableRow> {
    let mut out: Vec<TableRow> = ds.rows.iter().filter(|r| filter.matches(r)).cloned().collect();
    out.sort_by_key(TableRow::key);
    out
}
