//! Classification of all two-term codes with block length below 200:
//! orbit enumeration, per-code records with certified distances and graph
//! certificates, a resumable JSON-lines cache, and extremal tables grouped
//! by block length.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cayley::{canonical_form, is_three_connected};
use crate::distance::{min_distance, SearchOptions, SearchStatus};
use crate::equivalence::{canonical_triple, Triple};
use crate::lattice::theorem1_bound;
use crate::{Error, Result};

/// Largest circulant size the classification covers; block length 2n
/// stays below 200.
pub const N_MAX_LIMIT: usize = 99;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn isqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// One canonical triple per orbit with gcd(a, b, n) = 1, for all
/// 2 ≤ n ≤ n_max, sorted by (n, a, b).
///
/// # Errors
///
/// [`Error::InvalidInput`] when n_max is outside 2..=[`N_MAX_LIMIT`].
pub fn enumerate_triples(n_max: usize) -> Result<Vec<Triple>> {
    if !(2..=N_MAX_LIMIT).contains(&n_max) {
        return Err(Error::InvalidInput(format!(
            "n_max must lie in 2..={N_MAX_LIMIT}, got {n_max}"
        )));
    }
    let mut seen = BTreeSet::new();
    for n in 2..=n_max {
        for a in 1..n {
            for b in a..n {
                if gcd(gcd(a, b), n) != 1 {
                    continue;
                }
                let c = canonical_triple(Triple { a, b, n });
                seen.insert((c.n, c.a, c.b));
            }
        }
    }
    Ok(seen.into_iter().map(|(n, a, b)| Triple { a, b, n }).collect())
}

/// Family names whose canonical triple equals `t`: "square" for
/// GB(1+X, 1+X^m, m²), "even" for GB(1+X, 1+X^(2r−1), 2r²), "odd" for
/// GB(1+X, 1+X^(2k+1), k²+(k+1)²), and "kp" for the two-term presentation
/// GB(1+X^(2k²+1), X+X^(2k²), k²+(k+1)²) with k ≥ 2.
pub fn family_tags(t: Triple) -> Vec<String> {
    let n = t.n;
    let mut tags = Vec::new();
    let m = isqrt(n);
    if m >= 2 && m * m == n && matches(t, 1, m) {
        tags.push("square".to_string());
    }
    let r = isqrt(n / 2);
    if r >= 1 && 2 * r * r == n && matches(t, 1, (2 * r - 1) % n) {
        tags.push("even".to_string());
    }
    let k = isqrt(n / 2);
    if k * k + (k + 1) * (k + 1) == n {
        if k >= 2 && matches(t, (2 * k * k + 1) % n, (2 * k * k - 1) % n) {
            tags.push("kp".to_string());
        }
        if k >= 1 && matches(t, 1, 2 * k + 1) {
            tags.push("odd".to_string());
        }
    }
    tags
}

fn matches(t: Triple, a: usize, b: usize) -> bool {
    Triple::new(a, b, t.n).is_ok_and(|u| canonical_triple(u) == t)
}

/// Everything the classification records about one canonical triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub triple: Triple,
    #[serde(rename = "N")]
    pub block_length: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub d: Option<usize>,
    pub status: SearchStatus,
    pub lower: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub upper: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub lambda: Option<usize>,
    pub three_connected: bool,
    pub certificate_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub certificate_support: Option<Vec<usize>>,
    pub family_tags: Vec<String>,
    pub nodes: u64,
    pub millis: u64,
}

/// Computes the full record for one canonical triple: code parameters,
/// certified distance, lattice bound, 3-connectivity, and the graph
/// certificate hash.
///
/// # Errors
///
/// Propagates construction and search errors.
pub fn compute_record(t: Triple, search: &SearchOptions) -> Result<CodeRecord> {
    let start = Instant::now();
    let code = t.code()?;
    let result = min_distance(&code, search)?;
    let lambda = theorem1_bound(&code);
    let graph = t.graph()?;
    let three_connected = t.n >= 4 && is_three_connected(&graph)?;
    let cert = canonical_form(&graph)?;
    let mut hasher = Sha256::new();
    hasher.update(&cert.certificate);
    let certificate_hash = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect::<String>();
    Ok(CodeRecord {
        triple: t,
        block_length: result.block_length,
        k: result.k,
        d: result.d,
        status: result.status,
        lower: result.lower,
        upper: result.upper,
        lambda,
        three_connected,
        certificate_hash,
        certificate_support: result.certificate_support,
        family_tags: family_tags(t),
        nodes: result.nodes,
        millis: start.elapsed().as_millis() as u64,
    })
}

/// One table row: the best exact distance at a block length and the
/// non-isomorphic codes achieving it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(rename = "N")]
    pub block_length: usize,
    pub k: usize,
    pub d: usize,
    pub count: usize,
    pub representatives: Vec<Triple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub lambda: Option<usize>,
    pub three_connected: bool,
    pub family_tags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationTable {
    pub n_max: usize,
    pub rows: Vec<TableRow>,
}

/// Builds the extremal table from a record set: rows sorted by block
/// length, best exact d per length among k = 2 records, representatives
/// deduplicated within the group by graph certificate (keeping the
/// lexicographically smallest triple of each isomorphism class).
pub fn build_table(n_max: usize, records: &BTreeMap<Triple, CodeRecord>) -> ClassificationTable {
    let mut by_length: BTreeMap<usize, Vec<&CodeRecord>> = BTreeMap::new();
    for rec in records.values() {
        if rec.triple.n <= n_max && rec.k == 2 {
            by_length.entry(rec.block_length).or_default().push(rec);
        }
    }
    let mut rows = Vec::new();
    for (&block_length, group) in &by_length {
        let best = group
            .iter()
            .filter(|r| r.status == SearchStatus::Exact)
            .filter_map(|r| r.d)
            .max();
        let Some(best) = best else { continue };
        let extremal: Vec<&CodeRecord> =
            group.iter().filter(|r| r.d == Some(best)).copied().collect();
        let mut by_cert: BTreeMap<&str, Triple> = BTreeMap::new();
        for rec in &extremal {
            by_cert
                .entry(rec.certificate_hash.as_str())
                .and_modify(|t| {
                    if (rec.triple.n, rec.triple.a, rec.triple.b) < (t.n, t.a, t.b) {
                        *t = rec.triple;
                    }
                })
                .or_insert(rec.triple);
        }
        let mut representatives: Vec<Triple> = by_cert.values().copied().collect();
        representatives.sort_by_key(|t| (t.n, t.a, t.b));
        let reps: Vec<&CodeRecord> = extremal
            .iter()
            .filter(|r| representatives.contains(&r.triple))
            .copied()
            .collect();
        let lambda = reps.iter().filter_map(|r| r.lambda).max();
        let three_connected = reps.iter().all(|r| r.three_connected);
        let mut family_tags: Vec<String> =
            reps.iter().flat_map(|r| r.family_tags.clone()).collect();
        family_tags.sort();
        family_tags.dedup();
        rows.push(TableRow {
            block_length,
            k: 2,
            d: best,
            count: representatives.len(),
            representatives,
            lambda,
            three_connected,
            family_tags,
        });
    }
    ClassificationTable { n_max, rows }
}

/// Options for a classification run.
#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    /// JSON-lines cache; records found here are not recomputed.
    pub cache_path: Option<PathBuf>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub search: SearchOptions,
}

/// Loads a JSON-lines record cache, tolerating a torn trailing line from
/// an interrupted writer.
///
/// # Errors
///
/// [`Error::Io`] on unreadable files.
pub fn load_cache(path: &Path) -> Result<BTreeMap<Triple, CodeRecord>> {
    let mut map = BTreeMap::new();
    if !path.exists() {
        return Ok(map);
    }
    let text = std::fs::read_to_string(path)?;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match serde_json::from_str::<CodeRecord>(line) {
            Ok(rec) => {
                map.insert(rec.triple, rec);
            }
            Err(_) => break,
        }
    }
    Ok(map)
}

struct CacheWriter {
    out: BufWriter<File>,
    pending: usize,
}

impl CacheWriter {
    fn append(&mut self, rec: &CodeRecord) -> Result<()> {
        let line = serde_json::to_string(rec)
            .map_err(|e| Error::Internal(format!("record serialization failed: {e}")))?;
        writeln!(self.out, "{line}")?;
        self.pending += 1;
        if self.pending >= 64 {
            self.sync()?;
        }
        Ok(())
    }

    fn sync(&mut self) -> Result<()> {
        self.out.flush()?;
        self.out.get_ref().sync_all()?;
        self.pending = 0;
        Ok(())
    }
}

/// Runs the classification: enumerates canonical triples up to n_max,
/// computes records for the ones missing from the cache (in parallel,
/// persisting each as it completes), and reduces everything into the
/// extremal table. The table depends only on the record set, so resumed
/// and fresh runs emit identical tables.
///
/// # Errors
///
/// Propagates enumeration, search, and cache I/O errors.
pub fn classify(n_max: usize, opts: &ClassifyOptions) -> Result<ClassificationTable> {
    let triples = enumerate_triples(n_max)?;
    let mut records = match &opts.cache_path {
        Some(p) => load_cache(p)?,
        None => BTreeMap::new(),
    };
    let todo: Vec<Triple> = triples
        .iter()
        .filter(|t| !records.contains_key(t))
        .copied()
        .collect();
    let writer = match &opts.cache_path {
        Some(p) => {
            let file = OpenOptions::new().create(true).append(true).open(p)?;
            Some(Mutex::new(CacheWriter { out: BufWriter::new(file), pending: 0 }))
        }
        None => None,
    };
    let run = || {
        todo.par_iter()
            .map(|&t| {
                let rec = compute_record(t, &opts.search)?;
                if let Some(w) = &writer {
                    let mut guard = w.lock().expect("cache writer poisoned");
                    guard.append(&rec)?;
                }
                Ok(rec)
            })
            .collect::<Result<Vec<CodeRecord>>>()
    };
    let computed = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }?;
    if let Some(w) = &writer {
        w.lock().expect("cache writer poisoned").sync()?;
    }
    for rec in computed {
        records.insert(rec.triple, rec);
    }
    Ok(build_table(n_max, &records))
}

/// Output formats for [`emit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
    Markdown,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<TableFormat> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            "md" | "markdown" => Ok(TableFormat::Markdown),
            other => Err(Error::InvalidInput(format!("unknown format {other:?}"))),
        }
    }
}

const COLUMNS: [&str; 8] = [
    "N",
    "k",
    "d",
    "count",
    "representatives",
    "lambda",
    "three_connected",
    "family_tags",
];

fn row_strings(row: &TableRow) -> [String; 8] {
    [
        row.block_length.to_string(),
        row.k.to_string(),
        row.d.to_string(),
        row.count.to_string(),
        row.representatives
            .iter()
            .map(Triple::to_string)
            .collect::<Vec<_>>()
            .join("; "),
        row.lambda.map(|l| l.to_string()).unwrap_or_default(),
        row.three_connected.to_string(),
        row.family_tags.join(";"),
    ]
}

/// Renders the table with the fixed column order N, k, d, count,
/// representatives, lambda, three_connected, family_tags.
pub fn emit(table: &ClassificationTable, format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS).expect("in-memory csv");
            for row in &table.rows {
                w.write_record(row_strings(row)).expect("in-memory csv");
            }
            String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
        }
        TableFormat::Json => {
            serde_json::to_string_pretty(table).expect("table serialization is infallible")
        }
        TableFormat::Markdown => {
            let mut out = String::new();
            out.push_str(&format!("| {} |\n", COLUMNS.join(" | ")));
            out.push_str(&format!("|{}\n", " --- |".repeat(COLUMNS.len())));
            for row in &table.rows {
                out.push_str(&format!("| {} |\n", row_strings(row).join(" | ")));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{fam_even, fam_odd, fam_square};

    fn table_for(n_max: usize) -> ClassificationTable {
        classify(n_max, &ClassifyOptions::default()).unwrap()
    }

    fn row(table: &ClassificationTable, block_length: usize) -> &TableRow {
        table
            .rows
            .iter()
            .find(|r| r.block_length == block_length)
            .unwrap_or_else(|| panic!("no row at N = {block_length}"))
    }

    #[test]
    fn enumeration_matches_the_hand_counted_small_cases() {
        let triples = enumerate_triples(5).unwrap();
        let at = |n: usize| -> Vec<(usize, usize)> {
            triples.iter().filter(|t| t.n == n).map(|t| (t.a, t.b)).collect()
        };
        assert_eq!(at(2), vec![(1, 1)]);
        assert_eq!(at(4), vec![(1, 1), (1, 2)]);
        assert_eq!(at(5), vec![(1, 1), (1, 2)]);
        assert!(triples
            .iter()
            .all(|t| gcd(gcd(t.a, t.b), t.n) == 1 && canonical_triple(*t) == *t));
    }

    #[test]
    fn enumeration_rejects_out_of_range_limits() {
        assert!(enumerate_triples(1).is_err());
        assert!(enumerate_triples(100).is_err());
    }

    #[test]
    fn family_tags_identify_all_four_constructions() {
        let sq = canonical_triple(Triple::new(1, 4, 16).unwrap());
        assert_eq!(family_tags(sq), vec!["square"]);
        let even = canonical_triple(Triple::new(1, 5, 18).unwrap());
        assert_eq!(family_tags(even), vec!["even"]);
        let odd = canonical_triple(Triple::new(1, 5, 13).unwrap());
        assert_eq!(family_tags(odd), vec!["kp", "odd"]);
        let plain = canonical_triple(Triple::new(1, 2, 11).unwrap());
        assert!(family_tags(plain).is_empty());
        assert_eq!(family_tags(Triple::new(1, 1, 2).unwrap()), vec!["even"]);
    }

    #[test]
    fn records_satisfy_their_invariants() {
        let opts = SearchOptions::default();
        for &t in enumerate_triples(12).unwrap().iter() {
            let rec = compute_record(t, &opts).unwrap();
            assert_eq!(rec.triple, canonical_triple(t));
            assert_eq!(rec.block_length, 2 * t.n);
            assert_eq!(rec.k, 2);
            if let (Some(d), Some(lambda)) = (rec.d, rec.lambda) {
                assert!(d >= lambda, "d < lambda at {t}");
            }
            let simple = t.a != t.b
                && t.b != t.n - t.a
                && 2 * t.a != t.n
                && 2 * t.b != t.n;
            if t.n >= 4 && simple {
                assert!(rec.three_connected, "representative at {t} not 3-connected");
            }
        }
    }

    #[test]
    fn small_tables_match_the_published_family_values() {
        let table = table_for(18);
        assert_eq!(row(&table, 36).d, 6);
        assert!(row(&table, 36)
            .representatives
            .contains(&Triple::new(1, 5, 18).unwrap()));
        assert_eq!(row(&table, 10).d, 3);
        assert_eq!(
            row(&table, 10).representatives,
            vec![Triple::new(1, 2, 5).unwrap()]
        );
        assert!(row(&table, 32).d >= 4);
        let lengths: Vec<usize> = table.rows.iter().map(|r| r.block_length).collect();
        assert_eq!(lengths, (2..=18).map(|n| 2 * n).collect::<Vec<_>>());
    }

    #[test]
    fn extremal_rows_meet_or_beat_every_family_value() {
        let table = table_for(26);
        for n in 2..=5usize {
            let (_, params) = fam_square(n).unwrap();
            assert!(row(&table, params.block_length).d >= params.distance.unwrap());
        }
        for r in 1..=3usize {
            let (_, params) = fam_even(r).unwrap();
            assert!(row(&table, params.block_length).d >= params.distance.unwrap());
        }
        for t in 1..=3usize {
            let (_, params) = fam_odd(t).unwrap();
            assert!(row(&table, params.block_length).d >= params.distance.unwrap());
        }
    }

    #[test]
    fn representative_parameters_are_recomputable() {
        let table = table_for(10);
        let opts = SearchOptions::default();
        for row in &table.rows {
            for &rep in &row.representatives {
                let rec = compute_record(rep, &opts).unwrap();
                assert_eq!(rec.d, Some(row.d));
                assert_eq!(rec.k, row.k);
                assert_eq!(rec.block_length, row.block_length);
            }
        }
    }

    #[test]
    fn representatives_within_a_row_have_distinct_certificates() {
        let table = table_for(16);
        let opts = SearchOptions::default();
        for row in &table.rows {
            let hashes: Vec<String> = row
                .representatives
                .iter()
                .map(|&t| compute_record(t, &opts).unwrap().certificate_hash)
                .collect();
            let mut dedup = hashes.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), hashes.len(), "duplicate graphs at N = {}", row.block_length);
            assert_eq!(row.count, hashes.len());
        }
    }

    #[test]
    fn cached_and_fresh_runs_emit_identical_tables() {
        let dir = tempfile::tempdir().unwrap();
        let cache = dir.path().join("records.jsonl");
        let fresh = classify(12, &ClassifyOptions::default()).unwrap();
        let opts = ClassifyOptions {
            cache_path: Some(cache.clone()),
            ..ClassifyOptions::default()
        };
        let first = classify(12, &opts).unwrap();
        let resumed = classify(12, &opts).unwrap();
        assert_eq!(emit(&fresh, TableFormat::Csv), emit(&first, TableFormat::Csv));
        assert_eq!(emit(&first, TableFormat::Csv), emit(&resumed, TableFormat::Csv));
        assert!(cache.exists());
    }

    #[test]
    fn interrupted_caches_resume_to_the_same_table() {
        let dir = tempfile::tempdir().unwrap();
        let cache = dir.path().join("records.jsonl");
        let opts = ClassifyOptions {
            cache_path: Some(cache.clone()),
            ..ClassifyOptions::default()
        };
        let full = classify(10, &opts).unwrap();
        let text = std::fs::read_to_string(&cache).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let keep = lines.len() / 2;
        let mut torn = lines[..keep].join("\n");
        torn.push_str("\n{\"triple\":{\"a\":1,\"b\":");
        std::fs::write(&cache, &torn).unwrap();
        let resumed = classify(10, &opts).unwrap();
        assert_eq!(
            emit(&full, TableFormat::Csv),
            emit(&resumed, TableFormat::Csv)
        );
    }

    #[test]
    fn tables_are_deterministic_across_thread_counts() {
        let one = classify(
            10,
            &ClassifyOptions { jobs: Some(1), ..ClassifyOptions::default() },
        )
        .unwrap();
        let four = classify(
            10,
            &ClassifyOptions { jobs: Some(4), ..ClassifyOptions::default() },
        )
        .unwrap();
        assert_eq!(one, four);
        assert_eq!(
            emit(&one, TableFormat::Json),
            emit(&four, TableFormat::Json)
        );
    }

    #[test]
    fn csv_output_is_quoted_and_ordered() {
        let table = table_for(5);
        let csv = emit(&table, TableFormat::Csv);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "N,k,d,count,representatives,lambda,three_connected,family_tags"
        );
        let lengths: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(lengths, vec!["4", "6", "8", "10"]);
        assert!(csv.contains("\"1,1,2\""), "comma-bearing fields must be quoted");
    }

    #[test]
    fn json_and_markdown_round_trip_the_rows() {
        let table = table_for(5);
        let json = emit(&table, TableFormat::Json);
        let parsed: ClassificationTable = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, table);
        let md = emit(&table, TableFormat::Markdown);
        assert!(md.starts_with("| N | k | d |"));
        assert_eq!(md.lines().count(), table.rows.len() + 2);
        let empty = ClassificationTable { n_max: 0, rows: Vec::new() };
        let csv = emit(&empty, TableFormat::Csv);
        assert_eq!(csv.lines().count(), 1);
    }

    #[test]
    fn formats_parse_from_their_names() {
        assert_eq!("csv".parse::<TableFormat>().unwrap(), TableFormat::Csv);
        assert_eq!("md".parse::<TableFormat>().unwrap(), TableFormat::Markdown);
        assert_eq!("JSON".parse::<TableFormat>().unwrap(), TableFormat::Json);
        assert!("yaml".parse::<TableFormat>().is_err());
    }
}
