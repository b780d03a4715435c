use std::time::{Duration, Instant};

use evinf::formats::{load_graph, write_graph, write_synthetic, DatasetPaths};
use evinf_core::{generate_synthetic, GraphBuilder, SyntheticParams};

#[test]
fn written_graph_reloads_identically() {
    let dir = tempfile::tempdir().unwrap();
    let ds = generate_synthetic(&SyntheticParams {
        seed: 3,
        n_users: 300,
        n_edges: 900,
        activity_intensity: 2.0,
    })
    .unwrap();
    let paths = write_synthetic(&ds, dir.path()).unwrap();
    let (g, act) = load_graph(&paths).unwrap();
    assert_eq!((g.clone(), act.clone()), ds.build());

    let copy = tempfile::tempdir().unwrap();
    let copy_paths = DatasetPaths::in_dir(copy.path());
    write_graph(&g, &act, &copy_paths).unwrap();
    assert_eq!(load_graph(&copy_paths).unwrap(), (g, act));
}

#[test]
fn interaction_only_users_and_edges_survive() {
    let mut b = GraphBuilder::new();
    b.add_follow_edge("a", "b")
        .add_mentions("c", "a", 2)
        .add_retweets("b", "d", 1)
        .add_user("lonely");
    b.add_activity("a", 5, 1);
    let (g, act) = b.build();
    let dir = tempfile::tempdir().unwrap();
    let paths = DatasetPaths::in_dir(dir.path());
    write_graph(&g, &act, &paths).unwrap();
    assert_eq!(load_graph(&paths).unwrap(), (g, act));
}

#[test]
fn full_scale_dataset_loads_quickly() {
    let dir = tempfile::tempdir().unwrap();
    let ds = generate_synthetic(&SyntheticParams {
        seed: 2018,
        n_users: 36_274,
        n_edges: 71_027,
        activity_intensity: 1.0,
    })
    .unwrap();
    let paths = write_synthetic(&ds, dir.path()).unwrap();
    let start = Instant::now();
    let (g, _) = load_graph(&paths).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(g.user_count(), 36_274);
    assert!(g.edges().iter().filter(|e| e.follow).count() == 71_027);
    assert!(elapsed < Duration::from_secs(5), "load took {elapsed:?}");
}
