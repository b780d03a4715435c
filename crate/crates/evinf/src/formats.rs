//! CSV readers and writers for the four input files and the three outputs.
//!
//! Inputs:
//!
//! | file      | header                              |
//! |-----------|-------------------------------------|
//! | edges     | `src,dst`                           |
//! | mentions  | `mentioner,mentioned,count`         |
//! | retweets  | `retweeter,original_author,count`   |
//! | activity  | `user,tweets,followers`             |
//!
//! Headers must match exactly, every row must have as many fields as the
//! header, blank lines are skipped and counts are nonnegative integers.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use evinf_core::{
    ComparisonReport, EdgeId, EdgeInfluence, FusionError, FusionPlan, GraphBuilder, SeedSelection,
    SocialGraph, SyntheticDataset, UserActivity,
};
use thiserror::Error;

pub const EDGES_HEADER: [&str; 2] = ["src", "dst"];
pub const MENTIONS_HEADER: [&str; 3] = ["mentioner", "mentioned", "count"];
pub const RETWEETS_HEADER: [&str; 3] = ["retweeter", "original_author", "count"];
pub const ACTIVITY_HEADER: [&str; 3] = ["user", "tweets", "followers"];
pub const SEEDS_HEADER: [&str; 4] = ["rank", "user", "marginal_gain", "cumulative_sigma"];
pub const REPORT_HEADER: [&str; 7] = [
    "config",
    "rank",
    "user",
    "follows_acc",
    "mentions_acc",
    "retweets_acc",
    "tweets_acc",
];

/// File names used when a dataset is written to or read from a directory.
pub const EDGES_FILE: &str = "edges.csv";
pub const MENTIONS_FILE: &str = "mentions.csv";
pub const RETWEETS_FILE: &str = "retweets.csv";
pub const ACTIVITY_FILE: &str = "activity.csv";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: line {line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
}

impl FormatError {
    pub fn path(&self) -> &Path {
        match self {
            FormatError::Io { path, .. } | FormatError::Parse { path, .. } => path,
        }
    }
}

/// Paths of one dataset. Only the edges file is mandatory.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DatasetPaths {
    pub edges: PathBuf,
    pub mentions: Option<PathBuf>,
    pub retweets: Option<PathBuf>,
    pub activity: Option<PathBuf>,
}

impl DatasetPaths {
    /// The four standard file names inside `dir`.
    pub fn in_dir(dir: &Path) -> Self {
        DatasetPaths {
            edges: dir.join(EDGES_FILE),
            mentions: Some(dir.join(MENTIONS_FILE)),
            retweets: Some(dir.join(RETWEETS_FILE)),
            activity: Some(dir.join(ACTIVITY_FILE)),
        }
    }
}

/// Streams records of one CSV source, checking the header and field count.
struct Records<R: Read> {
    path: PathBuf,
    reader: csv::Reader<R>,
    record: csv::StringRecord,
}

impl<R: Read> Records<R> {
    fn new(source: R, path: &Path, header: &[&str]) -> Result<Self, FormatError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(source);
        let parse_error = |line, message| FormatError::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let found = reader.headers().map_err(|e| csv_error(path, e))?.clone();
        if found.is_empty() {
            return Err(parse_error(
                1,
                format!("missing header, expected `{}`", header.join(",")),
            ));
        }
        if found.iter().ne(header.iter().copied()) {
            return Err(parse_error(
                1,
                format!(
                    "header `{}` does not match `{}`",
                    found.iter().collect::<Vec<_>>().join(","),
                    header.join(",")
                ),
            ));
        }
        Ok(Records {
            path: path.to_path_buf(),
            reader,
            record: csv::StringRecord::new(),
        })
    }

    fn next(&mut self) -> Result<Option<Row<'_>>, FormatError> {
        if !self
            .reader
            .read_record(&mut self.record)
            .map_err(|e| csv_error(&self.path, e))?
        {
            return Ok(None);
        }
        Ok(Some(Row {
            path: &self.path,
            line: self.record.position().map_or(0, |p| p.line()),
            fields: &self.record,
        }))
    }
}

struct Row<'a> {
    path: &'a Path,
    line: u64,
    fields: &'a csv::StringRecord,
}

impl<'a> Row<'a> {
    fn error(&self, message: String) -> FormatError {
        FormatError::Parse {
            path: self.path.to_path_buf(),
            line: self.line,
            message,
        }
    }

    fn name(&self, i: usize, column: &str) -> Result<&'a str, FormatError> {
        match &self.fields[i] {
            "" => Err(self.error(format!("empty {column}"))),
            raw => Ok(raw),
        }
    }

    fn count(&self, i: usize, column: &str) -> Result<u64, FormatError> {
        let raw = &self.fields[i];
        raw.parse::<u64>()
            .map_err(|_| self.error(format!("{column} `{raw}` is not a nonnegative integer")))
    }
}

fn csv_error(path: &Path, e: csv::Error) -> FormatError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => FormatError::Io {
            path: path.to_path_buf(),
            source,
        },
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => FormatError::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        csv::ErrorKind::Utf8 { .. } => FormatError::Parse {
            path: path.to_path_buf(),
            line,
            message: "invalid UTF-8".into(),
        },
        other => FormatError::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("{other:?}"),
        },
    }
}

fn open(path: &Path) -> Result<File, FormatError> {
    File::open(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Adds the rows of an edges source; `path` labels diagnostics.
pub fn read_edges<R: Read>(
    b: &mut GraphBuilder,
    source: R,
    path: &Path,
) -> Result<(), FormatError> {
    let mut rows = Records::new(source, path, &EDGES_HEADER)?;
    while let Some(row) = rows.next()? {
        let src = row.name(0, "src")?;
        let dst = row.name(1, "dst")?;
        b.add_follow_edge(src, dst);
    }
    Ok(())
}

pub fn read_mentions<R: Read>(
    b: &mut GraphBuilder,
    source: R,
    path: &Path,
) -> Result<(), FormatError> {
    let mut rows = Records::new(source, path, &MENTIONS_HEADER)?;
    while let Some(row) = rows.next()? {
        let actor = row.name(0, "mentioner")?;
        let target = row.name(1, "mentioned")?;
        let count = row.count(2, "count")?;
        b.add_mentions(actor, target, count);
    }
    Ok(())
}

pub fn read_retweets<R: Read>(
    b: &mut GraphBuilder,
    source: R,
    path: &Path,
) -> Result<(), FormatError> {
    let mut rows = Records::new(source, path, &RETWEETS_HEADER)?;
    while let Some(row) = rows.next()? {
        let actor = row.name(0, "retweeter")?;
        let target = row.name(1, "original_author")?;
        let count = row.count(2, "count")?;
        b.add_retweets(actor, target, count);
    }
    Ok(())
}

pub fn read_activity<R: Read>(
    b: &mut GraphBuilder,
    source: R,
    path: &Path,
) -> Result<(), FormatError> {
    let mut rows = Records::new(source, path, &ACTIVITY_HEADER)?;
    while let Some(row) = rows.next()? {
        let user = row.name(0, "user")?;
        let tweets = row.count(1, "tweets")?;
        let followers = row.count(2, "followers")?;
        b.add_activity(user, tweets, followers);
    }
    Ok(())
}

/// Reads a dataset from disk. Users that appear only in the interaction or
/// activity files are added with whatever the files say about them.
pub fn load_graph(paths: &DatasetPaths) -> Result<(SocialGraph, Vec<UserActivity>), FormatError> {
    let mut b = GraphBuilder::new();
    read_edges(&mut b, open(&paths.edges)?, &paths.edges)?;
    if let Some(p) = &paths.mentions {
        read_mentions(&mut b, open(p)?, p)?;
    }
    if let Some(p) = &paths.retweets {
        read_retweets(&mut b, open(p)?, p)?;
    }
    if let Some(p) = &paths.activity {
        read_activity(&mut b, open(p)?, p)?;
    }
    Ok(b.build())
}

/// A CSV writer bound to a path for error reporting.
pub struct CsvSink<W: Write> {
    path: PathBuf,
    writer: csv::Writer<W>,
}

impl CsvSink<BufWriter<File>> {
    pub fn create(path: &Path) -> Result<Self, FormatError> {
        let file = File::create(path).map_err(|source| FormatError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(CsvSink::new(BufWriter::new(file), path))
    }
}

impl<W: Write> CsvSink<W> {
    pub fn new(sink: W, path: &Path) -> Self {
        CsvSink {
            path: path.to_path_buf(),
            writer: csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(sink),
        }
    }

    pub fn row<I, T>(&mut self, fields: I) -> Result<(), FormatError>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.writer
            .write_record(fields)
            .map_err(|e| csv_error(&self.path, e))
    }

    pub fn finish(self) -> Result<W, FormatError> {
        let path = self.path;
        self.writer.into_inner().map_err(|e| FormatError::Io {
            path,
            source: io::Error::other(e.to_string()),
        })
    }
}

fn fixed6(x: f64) -> String {
    format!("{x:.6}")
}

/// Writes `g` and `activity` as the four input files under the paths in
/// `paths` (all four must be set). Reloading reproduces the same graph.
pub fn write_graph(
    g: &SocialGraph,
    activity: &[UserActivity],
    paths: &DatasetPaths,
) -> Result<(), FormatError> {
    let missing = |what: &str| FormatError::Io {
        path: paths.edges.clone(),
        source: io::Error::new(io::ErrorKind::InvalidInput, format!("no {what} path given")),
    };
    let mut edges = CsvSink::create(&paths.edges)?;
    let mut mentions = CsvSink::create(
        paths
            .mentions
            .as_deref()
            .ok_or_else(|| missing("mentions"))?,
    )?;
    let mut retweets = CsvSink::create(
        paths
            .retweets
            .as_deref()
            .ok_or_else(|| missing("retweets"))?,
    )?;
    let mut act = CsvSink::create(
        paths
            .activity
            .as_deref()
            .ok_or_else(|| missing("activity"))?,
    )?;
    edges.row(EDGES_HEADER)?;
    mentions.row(MENTIONS_HEADER)?;
    retweets.row(RETWEETS_HEADER)?;
    act.row(ACTIVITY_HEADER)?;
    for e in g.edges() {
        let (src, dst) = (g.name(e.src), g.name(e.dst));
        if e.follow {
            edges.row([src, dst])?;
        }
        if e.mentions > 0 {
            mentions.row([dst, src, &e.mentions.to_string()])?;
        }
        if e.retweets > 0 {
            retweets.row([dst, src, &e.retweets.to_string()])?;
        }
    }
    for a in activity {
        act.row([
            g.name(a.user),
            &a.tweets.to_string(),
            &a.followers.to_string(),
        ])?;
    }
    edges.finish()?;
    mentions.finish()?;
    retweets.finish()?;
    act.finish()?;
    Ok(())
}

/// Writes a generated dataset as the four standard files inside `dir`.
pub fn write_synthetic(ds: &SyntheticDataset, dir: &Path) -> Result<DatasetPaths, FormatError> {
    let paths = DatasetPaths::in_dir(dir);
    let mut edges = CsvSink::create(&paths.edges)?;
    edges.row(EDGES_HEADER)?;
    for (s, d) in &ds.follows {
        edges.row([s, d])?;
    }
    edges.finish()?;
    let interactions = |path: &Path, header: [&str; 3], rows: &[(String, String, u64)]| {
        let mut sink = CsvSink::create(path)?;
        sink.row(header)?;
        for (actor, target, n) in rows {
            sink.row([actor, target, &n.to_string()])?;
        }
        sink.finish().map(drop)
    };
    interactions(
        paths.mentions.as_deref().unwrap(),
        MENTIONS_HEADER,
        &ds.mentions,
    )?;
    interactions(
        paths.retweets.as_deref().unwrap(),
        RETWEETS_HEADER,
        &ds.retweets,
    )?;
    let mut act = CsvSink::create(paths.activity.as_deref().unwrap())?;
    act.row(ACTIVITY_HEADER)?;
    for (user, tweets, followers) in &ds.activity {
        act.row([user, &tweets.to_string(), &followers.to_string()])?;
    }
    act.finish()?;
    Ok(paths)
}

pub fn write_seeds<W: Write>(
    g: &SocialGraph,
    sel: &SeedSelection,
    sink: &mut CsvSink<W>,
) -> Result<(), FormatError> {
    sink.row(SEEDS_HEADER)?;
    for s in &sel.seeds {
        sink.row([
            s.rank.to_string(),
            g.name(s.user).to_string(),
            fixed6(s.marginal_gain),
            fixed6(s.cumulative_sigma),
        ])?;
    }
    Ok(())
}

pub fn write_report<W: Write>(
    g: &SocialGraph,
    report: &ComparisonReport,
    sink: &mut CsvSink<W>,
) -> Result<(), FormatError> {
    sink.row(REPORT_HEADER)?;
    for run in &report.runs {
        for (i, s) in run.selection.seeds.iter().enumerate() {
            let c = &run.curve;
            sink.row([
                run.name.clone(),
                s.rank.to_string(),
                g.name(s.user).to_string(),
                c.follows[i].to_string(),
                c.mentions[i].to_string(),
                c.retweets[i].to_string(),
                c.tweets[i].to_string(),
            ])?;
        }
    }
    Ok(())
}

/// Per-edge fusion diagnostics: raw indicators, reliabilities, fused masses
/// and the influence score.
pub fn write_edge_dump<W: Write>(
    g: &SocialGraph,
    plan: &FusionPlan,
    fused: &[EdgeInfluence],
    sink: &mut CsvSink<W>,
) -> Result<(), DumpError> {
    let names = evinf_core::graph::INDICATOR_NAMES;
    let mut header = vec!["src".to_string(), "dst".to_string()];
    header.extend(names.iter().map(|n| format!("w_{n}")));
    header.extend(names.iter().map(|n| format!("alpha_{n}")));
    header.extend(["m_influence", "m_passive", "m_frame", "inf"].map(String::from));
    sink.row(&header)?;
    for (i, f) in fused.iter().enumerate() {
        let e = EdgeId(i as u32);
        let (src, dst) = plan.endpoints(e);
        let set = plan.edge_set(e)?;
        let mut row = vec![g.name(src).to_string(), g.name(dst).to_string()];
        row.extend(plan.raw(e).values.iter().map(|w| fixed6(*w)));
        row.extend(set.reliabilities.iter().map(|r| fixed6(r.alpha())));
        let m = f.fused.masses();
        row.extend([m[1], m[2], m[3], f.inf].map(fixed6));
        sink.row(&row)?;
    }
    Ok(())
}

#[derive(Debug, Error)]
pub enum DumpError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}
