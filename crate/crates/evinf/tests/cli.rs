use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn evinf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evinf"))
        .args(args)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn generate(dir: &Path, extra: &[&str]) {
    let mut args = vec![
        "generate",
        "--out",
        dir.to_str().unwrap(),
        "--n-users",
        "200",
        "--n-edges",
        "600",
        "--seed",
        "9",
    ];
    args.extend_from_slice(extra);
    let o = evinf(&args);
    assert!(o.status.success(), "{}", stderr(&o));
}

fn inputs(dir: &Path) -> Vec<String> {
    ["edges", "mentions", "retweets", "activity"]
        .iter()
        .flat_map(|f| {
            [
                format!("--{f}"),
                dir.join(format!("{f}.csv")).display().to_string(),
            ]
        })
        .collect()
}

fn run_with(dir: &Path, cmd: &str, extra: &[&str]) -> Output {
    let mut args: Vec<String> = vec![cmd.into()];
    args.extend(inputs(dir));
    args.extend(extra.iter().map(|s| s.to_string()));
    evinf(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn missing_edges_file_names_the_path() {
    let o = evinf(&["select", "--edges", "/nonexistent/edges.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("/nonexistent/edges.csv"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn invalid_flags_exit_one() {
    let o = evinf(&["select", "--edges", "x.csv", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--alpha"));
    let o = evinf(&["select", "--edges", "x.csv", "--lambda", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--lambda"));
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &[]);
    let o = run_with(dir.path(), "evaluate", &["--sweep", "fixed:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("total conflict"), "{}", stderr(&o));
    let o = evinf(&["select", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    let o = evinf(&["--threads", "0", "select", "--edges", "x.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--threads"));
}

#[test]
fn malformed_row_reports_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.csv");
    fs::write(&edges, "src,dst\na,b\nb,c,extra\n").unwrap();
    let o = evinf(&["select", "--edges", edges.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let msg = stderr(&o);
    assert!(msg.contains("edges.csv") && msg.contains("line 3"), "{msg}");
}

#[test]
fn generate_rejects_zero_users() {
    let dir = tempfile::tempdir().unwrap();
    let o = evinf(&[
        "generate",
        "--out",
        dir.path().to_str().unwrap(),
        "--n-users",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--n-users"), "{}", stderr(&o));
}

#[test]
fn generate_is_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    generate(a.path(), &[]);
    generate(b.path(), &[]);
    for f in ["edges.csv", "mentions.csv", "retweets.csv", "activity.csv"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn generate_then_select() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &[]);
    let o = run_with(dir.path(), "select", &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "rank,user,marginal_gain,cumulative_sigma");
    assert_eq!(lines.len(), 51);
    assert!(lines[1].starts_with("1,"));
    let gain = lines[1].split(',').nth(2).unwrap();
    assert_eq!(
        gain.split('.').nth(1).unwrap().len(),
        6,
        "six decimals: {gain}"
    );
}

#[test]
fn select_truncates_to_user_count() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.csv");
    fs::write(&edges, "src,dst\na,b\nb,c\n").unwrap();
    let o = evinf(&["select", "--edges", edges.to_str().unwrap(), "--alpha", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 4);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &[]);
    for cmd in ["select", "evaluate", "dump-edges"] {
        let first = run_with(dir.path(), cmd, &["--k", "10"]);
        assert!(first.status.success(), "{cmd}: {}", stderr(&first));
        let second = run_with(dir.path(), cmd, &["--k", "10", "--threads", "1"]);
        assert_eq!(first.stdout, second.stdout, "{cmd}");
    }
}

#[test]
fn evaluate_row_count_and_blocks() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &[]);
    let out = dir.path().join("report.csv");
    let o = run_with(
        dir.path(),
        "evaluate",
        &["--k", "12", "--out", out.to_str().unwrap()],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("config,rank,user,follows_acc,mentions_acc,retweets_acc,tweets_acc")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 12);
    for (block, name) in ["fixed:0", "fixed:0.2", "estimated"].iter().enumerate() {
        let block = &rows[block * 12..(block + 1) * 12];
        assert!(block.iter().all(|r| r[0] == *name));
        let follows: Vec<u64> = block.iter().map(|r| r[3].parse().unwrap()).collect();
        assert!(
            follows.windows(2).all(|w| w[0] <= w[1]),
            "{name}: {follows:?}"
        );
    }
    let o = run_with(
        dir.path(),
        "evaluate",
        &["--sweep", "fixed:0.5,estimated:2", "--k", "5"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        String::from_utf8(o.stdout).unwrap().lines().count(),
        1 + 2 * 5
    );
}

#[test]
fn evaluate_rejects_empty_sweep() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &[]);
    let o = run_with(dir.path(), "evaluate", &["--sweep", ""]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--sweep"));
}

#[test]
fn dump_edges_columns() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.csv");
    let mentions = dir.path().join("mentions.csv");
    fs::write(&edges, "src,dst\na,b\nb,c\n").unwrap();
    fs::write(&mentions, "mentioner,mentioned,count\nb,a,3\n").unwrap();
    let o = evinf(&[
        "dump-edges",
        "--edges",
        edges.to_str().unwrap(),
        "--mentions",
        mentions.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "src,dst,w_common_neighbors,w_mentions,w_retweets,alpha_common_neighbors,alpha_mentions,alpha_retweets,m_influence,m_passive,m_frame,inf"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("a,b,0.000000,3.000000,0.000000,"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &[]);
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "edges = \"edges.csv\"\nmentions = \"mentions.csv\"\nretweets = \"retweets.csv\"\nk = 7\nalpha = 0.5\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let o = evinf(&["select", "--config", c]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 8);
    let o = evinf(&["select", "--config", c, "--k", "3"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 4);
    let o = evinf(&["select", "--config", "/nonexistent/run.toml"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/run.toml"));
}
