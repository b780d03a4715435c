//! Directed social graph and the raw per-edge influence indicators.
//!
//! An edge `(u, v)` means "u can influence v": v follows u, mentions u,
//! or retweets u. Users are interned to dense [`UserId`]s assigned in
//! lexicographic order of their names, so comparing ids compares names.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UserId(pub u32);

impl UserId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Position of an edge in [`SocialGraph::edges`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: UserId,
    pub dst: UserId,
    /// Present in the follow relation (as opposed to created by activity alone).
    pub follow: bool,
    /// Times `dst` mentioned `src`.
    pub mentions: u64,
    /// Times `dst` retweeted `src`.
    pub retweets: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UserActivity {
    pub user: UserId,
    pub tweets: u64,
    pub followers: u64,
    pub mentions_received: u64,
    pub retweets_received: u64,
}

/// Raw (unnormalized) indicator values for one edge:
/// `(common neighbors, mentions, retweets)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RawIndicatorVector {
    pub edge: EdgeId,
    pub values: Vec<f64>,
}

pub const INDICATOR_NAMES: [&str; 3] = ["common_neighbors", "mentions", "retweets"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    UnknownUser(String),
    UnknownUserId(UserId),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::UnknownUser(name) => write!(f, "unknown user `{name}`"),
            GraphError::UnknownUserId(id) => write!(f, "unknown user id {id}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GraphError {}

#[derive(Debug, Default, Clone, Copy)]
struct EdgeAcc {
    follow: bool,
    mentions: u64,
    retweets: u64,
}

#[derive(Debug, Default, Clone, Copy)]
struct ActivityAcc {
    tweets: u64,
    followers: u64,
}

/// Accumulates users, follows and interaction counts, then freezes them
/// into a [`SocialGraph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    ids: BTreeMap<String, u32>,
    names: Vec<String>,
    edges: BTreeMap<(u32, u32), EdgeAcc>,
    activity: BTreeMap<u32, ActivityAcc>,
    self_loops: usize,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, name: &str) -> u32 {
        if let Some(id) = self.ids.get(name) {
            return *id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    fn edge(&mut self, src: &str, dst: &str) -> Option<&mut EdgeAcc> {
        let s = self.intern(src);
        let d = self.intern(dst);
        if s == d {
            self.self_loops += 1;
            return None;
        }
        Some(self.edges.entry((s, d)).or_default())
    }

    pub fn add_user(&mut self, name: &str) -> &mut Self {
        self.intern(name);
        self
    }

    /// `src` influences `dst` (dst follows src). Duplicates collapse.
    pub fn add_follow_edge(&mut self, src: &str, dst: &str) -> &mut Self {
        if let Some(e) = self.edge(src, dst) {
            e.follow = true;
        }
        self
    }

    /// `mentioner` mentioned `mentioned` `count` times; lands on edge
    /// `(mentioned, mentioner)`.
    pub fn add_mentions(&mut self, mentioner: &str, mentioned: &str, count: u64) -> &mut Self {
        if let Some(e) = self.edge(mentioned, mentioner) {
            e.mentions += count;
        }
        self
    }

    /// `retweeter` retweeted `original_author` `count` times; lands on edge
    /// `(original_author, retweeter)`.
    pub fn add_retweets(
        &mut self,
        retweeter: &str,
        original_author: &str,
        count: u64,
    ) -> &mut Self {
        if let Some(e) = self.edge(original_author, retweeter) {
            e.retweets += count;
        }
        self
    }

    /// Repeated records for the same user accumulate.
    pub fn add_activity(&mut self, user: &str, tweets: u64, followers: u64) -> &mut Self {
        let id = self.intern(user);
        let acc = self.activity.entry(id).or_default();
        acc.tweets += tweets;
        acc.followers += followers;
        self
    }

    /// Self-referencing rows dropped so far.
    pub fn skipped_self_loops(&self) -> usize {
        self.self_loops
    }

    pub fn build(self) -> (SocialGraph, Vec<UserActivity>) {
        // Renumber so that id order equals name order.
        let mut remap = vec![0u32; self.names.len()];
        let mut names = Vec::with_capacity(self.names.len());
        for (rank, (name, provisional)) in self.ids.into_iter().enumerate() {
            remap[provisional as usize] = rank as u32;
            names.push(name);
        }

        let mut edges: Vec<Edge> = self
            .edges
            .into_iter()
            .map(|((s, d), acc)| Edge {
                src: UserId(remap[s as usize]),
                dst: UserId(remap[d as usize]),
                follow: acc.follow,
                mentions: acc.mentions,
                retweets: acc.retweets,
            })
            .collect();
        edges.sort_by_key(|e| (e.src, e.dst));

        let graph = SocialGraph::from_sorted_edges(names, edges);

        let mut activity: Vec<UserActivity> = (0..graph.user_count())
            .map(|i| UserActivity {
                user: UserId(i as u32),
                ..UserActivity::default()
            })
            .collect();
        for (provisional, acc) in self.activity {
            let a = &mut activity[remap[provisional as usize] as usize];
            a.tweets = acc.tweets;
            a.followers = acc.followers;
        }
        for e in &graph.edges {
            activity[e.src.index()].mentions_received += e.mentions;
            activity[e.src.index()].retweets_received += e.retweets;
        }
        (graph, activity)
    }
}

/// Immutable directed graph with CSR adjacency in both directions and an
/// undirected neighbor index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocialGraph {
    names: Vec<String>,
    edges: Vec<Edge>,
    // edges are sorted by (src, dst): out-edges of u are out_start[u]..out_start[u+1]
    out_start: Vec<u32>,
    in_start: Vec<u32>,
    in_edges: Vec<EdgeId>,
    nbr_start: Vec<u32>,
    nbrs: Vec<UserId>,
}

impl SocialGraph {
    fn from_sorted_edges(names: Vec<String>, edges: Vec<Edge>) -> Self {
        let n = names.len();
        let mut out_start = vec![0u32; n + 1];
        let mut in_count = vec![0u32; n + 1];
        for e in &edges {
            out_start[e.src.index() + 1] += 1;
            in_count[e.dst.index() + 1] += 1;
        }
        for i in 0..n {
            out_start[i + 1] += out_start[i];
            in_count[i + 1] += in_count[i];
        }
        let in_start = in_count.clone();
        let mut fill = in_count;
        let mut in_edges = vec![EdgeId(0); edges.len()];
        // edges are visited in src order, so each in-list ends up sorted by src
        for (idx, e) in edges.iter().enumerate() {
            let slot = &mut fill[e.dst.index()];
            in_edges[*slot as usize] = EdgeId(idx as u32);
            *slot += 1;
        }

        let mut nbr_start = Vec::with_capacity(n + 1);
        let mut nbrs = Vec::with_capacity(edges.len() * 2);
        nbr_start.push(0u32);
        for u in 0..n {
            let outs = edges[out_start[u] as usize..out_start[u + 1] as usize]
                .iter()
                .map(|e| e.dst);
            let ins = in_edges[in_start[u] as usize..in_start[u + 1] as usize]
                .iter()
                .map(|id| edges[id.index()].src);
            let from = nbrs.len();
            nbrs.extend(outs.chain(ins));
            nbrs[from..].sort_unstable();
            let mut write = from;
            for read in from..nbrs.len() {
                if write == from || nbrs[write - 1] != nbrs[read] {
                    nbrs[write] = nbrs[read];
                    write += 1;
                }
            }
            nbrs.truncate(write);
            nbr_start.push(nbrs.len() as u32);
        }

        SocialGraph {
            names,
            edges,
            out_start,
            in_start,
            in_edges,
            nbr_start,
            nbrs,
        }
    }

    pub fn user_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn users(&self) -> impl ExactSizeIterator<Item = UserId> + '_ {
        (0..self.names.len() as u32).map(UserId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.index()]
    }

    pub fn name(&self, u: UserId) -> &str {
        &self.names[u.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn user_id(&self, name: &str) -> Result<UserId, GraphError> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .map(|i| UserId(i as u32))
            .map_err(|_| GraphError::UnknownUser(name.to_string()))
    }

    pub fn contains(&self, u: UserId) -> bool {
        u.index() < self.names.len()
    }

    pub fn check_user(&self, u: UserId) -> Result<(), GraphError> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(GraphError::UnknownUserId(u))
        }
    }

    /// Edge ids leaving `u`, ordered by destination.
    pub fn out_edge_ids(&self, u: UserId) -> impl ExactSizeIterator<Item = EdgeId> {
        (self.out_start[u.index()]..self.out_start[u.index() + 1]).map(EdgeId)
    }

    /// Edges leaving `u`, ordered by destination.
    pub fn out_edges(&self, u: UserId) -> &[Edge] {
        &self.edges[self.out_start[u.index()] as usize..self.out_start[u.index() + 1] as usize]
    }

    /// Edge ids entering `v`, ordered by source; the sources form `IN(v)`.
    pub fn in_edge_ids(&self, v: UserId) -> &[EdgeId] {
        &self.in_edges[self.in_start[v.index()] as usize..self.in_start[v.index() + 1] as usize]
    }

    pub fn in_neighbors(&self, v: UserId) -> impl Iterator<Item = UserId> + '_ {
        self.in_edge_ids(v)
            .iter()
            .map(move |id| self.edges[id.index()].src)
    }

    pub fn out_degree(&self, u: UserId) -> usize {
        (self.out_start[u.index() + 1] - self.out_start[u.index()]) as usize
    }

    pub fn in_degree(&self, v: UserId) -> usize {
        (self.in_start[v.index() + 1] - self.in_start[v.index()]) as usize
    }

    /// Undirected neighborhood (in- and out-neighbors), sorted.
    pub fn neighbors(&self, u: UserId) -> &[UserId] {
        &self.nbrs[self.nbr_start[u.index()] as usize..self.nbr_start[u.index() + 1] as usize]
    }

    pub fn edge_id(&self, src: UserId, dst: UserId) -> Option<EdgeId> {
        if !self.contains(src) {
            return None;
        }
        let start = self.out_start[src.index()];
        self.out_edges(src)
            .binary_search_by_key(&dst, |e| e.dst)
            .ok()
            .map(|off| EdgeId(start + off as u32))
    }

    /// `|N(u) ∩ N(v)|` over undirected neighborhoods.
    pub fn common_neighbors(&self, u: UserId, v: UserId) -> Result<usize, GraphError> {
        self.check_user(u)?;
        self.check_user(v)?;
        Ok(sorted_intersection_len(
            self.neighbors(u),
            self.neighbors(v),
        ))
    }

    /// `(common neighbors, mentions of u by v, retweets of u by v)` for every
    /// edge, indexed by [`EdgeId`].
    pub fn raw_indicators(&self) -> Vec<RawIndicatorVector> {
        self.edges
            .iter()
            .enumerate()
            .map(|(idx, e)| RawIndicatorVector {
                edge: EdgeId(idx as u32),
                values: vec![
                    sorted_intersection_len(self.neighbors(e.src), self.neighbors(e.dst)) as f64,
                    e.mentions as f64,
                    e.retweets as f64,
                ],
            })
            .collect()
    }
}

fn sorted_intersection_len(a: &[UserId], b: &[UserId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
