//! Interaction graphs, generators, boundary statistics, and the total mixing
//! gap.
//!
//! Graphs are directed, loop-free, and stored as a flat ordered edge list:
//! the simulation only needs uniform link sampling, and per-node adjacency
//! lists are derived once for incremental boundary updates.
//!
//! The total mixing gap of a nonempty graph is
//!
//! ```text
//! W = max over disjoint S, U of | |E(S,U)|/m  -  |S||U| / (n(n-1)) |
//! ```
//!
//! where `E(S,U)` is the set of links pointing from `S` to `U`. It is 0
//! exactly for complete graphs and at most 1 in general (1/2 for symmetric
//! edge relations). [`mixing_gap_exact`] maximizes over all `3^n` labelings
//! of nodes into (S, U, neither) and is capped by default at `n = 14`;
//! [`mixing_gap_local_search`] is the scalable surrogate and reports a
//! certified lower bound.

use crate::model::{BoundaryMatrix, TypeVector};
use crate::par;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

/// Largest order accepted by [`mixing_gap_exact`] (about 4.8M labelings).
pub const EXACT_ENUMERATION_CAP: usize = 14;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph needs at least {min} nodes, got {n}")]
    TooFewNodes { n: usize, min: usize },
    #[error("link ({tail}, {head}) is a self-loop")]
    SelfLoop { tail: u32, head: u32 },
    #[error("link ({tail}, {head}) out of range for {n} nodes")]
    NodeOutOfRange { tail: u32, head: u32, n: usize },
    #[error("duplicate link ({tail}, {head})")]
    DuplicateLink { tail: u32, head: u32 },
    #[error("edge probability must lie in (0, 1], got {0}")]
    EdgeProbabilityOutOfRange(f64),
    #[error("Erdős–Rényi sample came out empty (n={n}, p={p}, seed={seed}); resample with another seed")]
    EmptySample { n: usize, p: f64, seed: u64 },
    #[error("operation requires at least one link")]
    NoEdges,
    #[error("configuration has {got} states but the graph has {expected} nodes")]
    LengthMismatch { got: usize, expected: usize },
    #[error("exact mixing-gap enumeration is capped at n = {cap}, got n = {n}; use the local search variant")]
    ExactCapExceeded { n: usize, cap: usize },
    #[error("local search needs at least one restart")]
    NoRestarts,
    #[error("witness sets must be disjoint")]
    WitnessOverlap,
    #[error("eta must lie in (0, 1], got {0}")]
    EtaOutOfRange(f64),
    #[error("type vector times n is not integral: {0}")]
    NonIntegralCounts(String),
    #[error("failed to read graph file: {0}")]
    Io(#[from] std::io::Error),
    #[error("graph file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Directed graph without self-loops or duplicate links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    out_adj: Vec<Vec<u32>>,
    in_adj: Vec<Vec<u32>>,
    complete: bool,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::TooFewNodes { n, min: 1 });
        }
        for &(tail, head) in &edges {
            if tail == head {
                return Err(GraphError::SelfLoop { tail, head });
            }
            if tail as usize >= n || head as usize >= n {
                return Err(GraphError::NodeOutOfRange { tail, head, n });
            }
        }
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateLink {
                    tail: pair[0].0,
                    head: pair[0].1,
                });
            }
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(tail, head) in &edges {
            out_adj[tail as usize].push(head);
            in_adj[head as usize].push(tail);
        }
        let complete = edges.len() == n * (n - 1);
        Ok(Self {
            n,
            edges,
            out_adj,
            in_adj,
            complete,
        })
    }

    /// Complete graph: all `n(n-1)` ordered pairs, in row-major order.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewNodes { n, min: 2 });
        }
        let mut edges = Vec::with_capacity(n * (n - 1));
        for u in 0..n as u32 {
            for v in 0..n as u32 {
                if u != v {
                    edges.push((u, v));
                }
            }
        }
        Self::new(n, edges)
    }

    /// Erdős–Rényi sample: each unordered pair of distinct nodes is included
    /// independently with probability `p` and contributes both directed
    /// links. Deterministic given the seed. An empty sample is reported as
    /// [`GraphError::EmptySample`] so callers own the resampling policy.
    pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewNodes { n, min: 2 });
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(GraphError::EdgeProbabilityOutOfRange(p));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                if rng.random_bool(p) {
                    edges.push((i, j));
                    edges.push((j, i));
                }
            }
        }
        if edges.is_empty() {
            return Err(GraphError::EmptySample { n, p, seed });
        }
        Self::new(n, edges)
    }

    /// Star graph: hub node 0 connected bidirectionally to all others.
    pub fn star(n: usize) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewNodes { n, min: 2 });
        }
        let mut edges = Vec::with_capacity(2 * (n - 1));
        for v in 1..n as u32 {
            edges.push((0, v));
            edges.push((v, 0));
        }
        Self::new(n, edges)
    }

    /// Graph with the single directed link (0, 1).
    pub fn single_link(n: usize) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewNodes { n, min: 2 });
        }
        Self::new(n, vec![(0, 1)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of directed links.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn out_neighbors(&self, v: usize) -> &[u32] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[u32] {
        &self.in_adj[v]
    }

    /// Whether every ordered pair of distinct nodes is present.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Whether the edge relation is symmetric.
    pub fn is_symmetric(&self) -> bool {
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        self.edges
            .iter()
            .all(|&(u, v)| sorted.binary_search(&(v, u)).is_ok())
    }

    /// Reads the plain-text format: first line `n m`, then `m` lines
    /// `tail head` (0-based).
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self, GraphError> {
        let mut lines = reader.lines().enumerate();
        let (n, m) = match lines.next() {
            Some((_, line)) => {
                let line = line?;
                let mut it = line.split_whitespace();
                let n: usize = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(GraphError::Parse {
                        line: 1,
                        msg: "expected node count".to_string(),
                    })?;
                let m: usize = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(GraphError::Parse {
                        line: 1,
                        msg: "expected link count".to_string(),
                    })?;
                (n, m)
            }
            None => {
                return Err(GraphError::Parse {
                    line: 1,
                    msg: "empty file".to_string(),
                })
            }
        };
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (idx, line) = lines.next().ok_or(GraphError::Parse {
                line: m + 1,
                msg: format!("expected {m} links, file ended early"),
            })?;
            let line = line?;
            let mut it = line.split_whitespace();
            let parse = |t: Option<&str>| -> Option<u32> { t.and_then(|s| s.parse().ok()) };
            match (parse(it.next()), parse(it.next())) {
                (Some(tail), Some(head)) => edges.push((tail, head)),
                _ => {
                    return Err(GraphError::Parse {
                        line: idx + 1,
                        msg: "expected `tail head`".to_string(),
                    })
                }
            }
        }
        Self::new(n, edges)
    }

    pub fn from_file<P: AsRef<Path>>(path: P) -> Result<Self, GraphError> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file))
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n, self.edges.len())?;
        for &(tail, head) in &self.edges {
            writeln!(w, "{tail} {head}")?;
        }
        Ok(())
    }

    pub fn to_file<P: AsRef<Path>>(&self, path: P) -> std::io::Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut file)
    }
}

/// Boundary of a configuration: entry `(i, j)` is the fraction of links
/// `(u, v)` with `states[u] = i` and `states[v] = j`.
pub fn boundary(g: &Graph, states: &[u8], alphabet: usize) -> Result<BoundaryMatrix, GraphError> {
    if states.len() != g.n {
        return Err(GraphError::LengthMismatch {
            got: states.len(),
            expected: g.n,
        });
    }
    if g.m() == 0 {
        return Err(GraphError::NoEdges);
    }
    let mut counts = vec![0u64; alphabet * alphabet];
    for &(tail, head) in &g.edges {
        let i = states[tail as usize] as usize;
        let j = states[head as usize] as usize;
        counts[i * alphabet + j] += 1;
    }
    let m = g.m() as f64;
    let xi = counts.iter().map(|&c| c as f64 / m).collect();
    BoundaryMatrix::new(alphabet, xi).map_err(|_| GraphError::NoEdges)
}

/// Boundary of a complete graph, determined by the type alone:
/// `xi_ij = c_i (c_j - [i = j]) / (n (n - 1))` for counts `c = n theta`.
///
/// Computed as a ratio of exact integers, so it agrees bitwise with
/// [`boundary`] evaluated on a complete graph.
pub fn boundary_complete_formula(
    theta: &TypeVector,
    n: usize,
) -> Result<BoundaryMatrix, GraphError> {
    if n < 2 {
        return Err(GraphError::TooFewNodes { n, min: 2 });
    }
    let k = theta.len();
    let mut counts = vec![0u64; k];
    let mut total = 0u64;
    for i in 0..k {
        let scaled = theta[i] * n as f64;
        let rounded = scaled.round();
        if (scaled - rounded).abs() > 1e-9 {
            return Err(GraphError::NonIntegralCounts(format!(
                "n * theta[{i}] = {scaled}"
            )));
        }
        counts[i] = rounded as u64;
        total += counts[i];
    }
    if total != n as u64 {
        return Err(GraphError::NonIntegralCounts(format!(
            "counts sum to {total}, expected {n}"
        )));
    }
    let pairs = (n * (n - 1)) as f64;
    let mut xi = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            let c = if i == j {
                counts[i] * counts[i].saturating_sub(1)
            } else {
                counts[i] * counts[j]
            };
            xi[i * k + j] = c as f64 / pairs;
        }
    }
    BoundaryMatrix::new(k, xi).map_err(|_| GraphError::NoEdges)
}

/// Result of a mixing-gap computation, with the witnessing node sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixingGapResult {
    pub value: f64,
    pub witness_s: Vec<u32>,
    pub witness_u: Vec<u32>,
    /// `true` for exhaustive enumeration, `false` for a lower bound found by
    /// local search.
    pub exact: bool,
}

/// Evaluates the mixing-gap objective at a given pair of disjoint sets.
pub fn mixing_objective(g: &Graph, s: &[u32], u: &[u32]) -> Result<f64, GraphError> {
    if g.m() == 0 {
        return Err(GraphError::NoEdges);
    }
    let mut label = vec![0u8; g.n];
    for &v in s {
        label[v as usize] = 1;
    }
    for &v in u {
        if label[v as usize] == 1 {
            return Err(GraphError::WitnessOverlap);
        }
        label[v as usize] = 2;
    }
    let crossing = g
        .edges
        .iter()
        .filter(|&&(tail, head)| label[tail as usize] == 1 && label[head as usize] == 2)
        .count();
    let pairs = (g.n * (g.n - 1)) as f64;
    Ok((crossing as f64 / g.m() as f64 - (s.len() * u.len()) as f64 / pairs).abs())
}

// Labels used during enumeration and local search.
const NEITHER: u8 = 0;
const IN_S: u8 = 1;
const IN_U: u8 = 2;

struct LabelState<'g> {
    g: &'g Graph,
    // Neighbors with smaller index, so a DFS assigning nodes in order only
    // ever scans already-assigned endpoints.
    pred_out: Vec<Vec<u32>>,
    pred_in: Vec<Vec<u32>>,
    labels: Vec<u8>,
    s_count: u64,
    u_count: u64,
    crossing: u64,
}

impl<'g> LabelState<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.n;
        let mut pred_out = vec![Vec::new(); n];
        let mut pred_in = vec![Vec::new(); n];
        for &(tail, head) in &g.edges {
            if head < tail {
                pred_out[tail as usize].push(head);
            } else {
                pred_in[head as usize].push(tail);
            }
        }
        Self {
            g,
            pred_out,
            pred_in,
            labels: vec![NEITHER; n],
            s_count: 0,
            u_count: 0,
            crossing: 0,
        }
    }

    /// Crossing links gained by assigning `label` to node `v`, counting only
    /// links whose other endpoint has a smaller index.
    fn delta(&self, v: usize, label: u8) -> u64 {
        match label {
            IN_S => self.pred_out[v]
                .iter()
                .filter(|&&w| self.labels[w as usize] == IN_U)
                .count() as u64,
            IN_U => self.pred_in[v]
                .iter()
                .filter(|&&w| self.labels[w as usize] == IN_S)
                .count() as u64,
            _ => 0,
        }
    }

    fn assign(&mut self, v: usize, label: u8) {
        self.crossing += self.delta(v, label);
        self.labels[v] = label;
        match label {
            IN_S => self.s_count += 1,
            IN_U => self.u_count += 1,
            _ => {}
        }
    }

    fn unassign(&mut self, v: usize) {
        let label = self.labels[v];
        match label {
            IN_S => self.s_count -= 1,
            IN_U => self.u_count -= 1,
            _ => {}
        }
        self.labels[v] = NEITHER;
        self.crossing -= self.delta(v, label);
    }

    fn objective(&self) -> f64 {
        let pairs = (self.g.n * (self.g.n - 1)) as f64;
        (self.crossing as f64 / self.g.m() as f64
            - (self.s_count * self.u_count) as f64 / pairs)
            .abs()
    }
}

fn labels_to_sets(labels: &[u8]) -> (Vec<u32>, Vec<u32>) {
    let mut s = Vec::new();
    let mut u = Vec::new();
    for (v, &l) in labels.iter().enumerate() {
        match l {
            IN_S => s.push(v as u32),
            IN_U => u.push(v as u32),
            _ => {}
        }
    }
    (s, u)
}

fn dfs_best(state: &mut LabelState, depth: usize, best: &mut (f64, Vec<u8>)) {
    if depth == state.g.n {
        let obj = state.objective();
        if obj > best.0 {
            best.0 = obj;
            best.1.copy_from_slice(&state.labels);
        }
        return;
    }
    for label in [NEITHER, IN_S, IN_U] {
        state.assign(depth, label);
        dfs_best(state, depth + 1, best);
        state.unassign(depth);
    }
}

fn enumerate_from_prefix(g: &Graph, prefix_len: usize, prefix_id: usize) -> (f64, Vec<u8>) {
    let mut state = LabelState::new(g);
    let mut id = prefix_id;
    for v in 0..prefix_len {
        state.assign(v, (id % 3) as u8);
        id /= 3;
    }
    let mut best = (f64::NEG_INFINITY, vec![NEITHER; g.n]);
    dfs_best(&mut state, prefix_len, &mut best);
    best
}

fn mixing_gap_enumerate(
    g: &Graph,
    cap: usize,
    sequential: bool,
) -> Result<MixingGapResult, GraphError> {
    if g.m() == 0 {
        return Err(GraphError::NoEdges);
    }
    if g.n > cap {
        return Err(GraphError::ExactCapExceeded { n: g.n, cap });
    }
    // Split the labeling space over prefixes of the first few nodes; each
    // task runs an independent DFS over the remaining suffix. Tasks are
    // merged in index order with a strict comparison, so the winning witness
    // matches the purely sequential scan.
    let prefix_len = g.n.min(5);
    let tasks = 3usize.pow(prefix_len as u32);
    let task = |id: usize| enumerate_from_prefix(g, prefix_len, id);
    let results = if sequential {
        par::map_indexed_seq(tasks, task)
    } else {
        par::map_indexed(tasks, task)
    };
    let mut best = (f64::NEG_INFINITY, vec![NEITHER; g.n]);
    for candidate in results {
        if candidate.0 > best.0 {
            best = candidate;
        }
    }
    let (witness_s, witness_u) = labels_to_sets(&best.1);
    Ok(MixingGapResult {
        value: best.0,
        witness_s,
        witness_u,
        exact: true,
    })
}

/// Exact total mixing gap by exhaustive enumeration over all `3^n` node
/// labelings, with incremental crossing-count updates.
pub fn mixing_gap_exact(g: &Graph) -> Result<MixingGapResult, GraphError> {
    mixing_gap_exact_with_cap(g, EXACT_ENUMERATION_CAP)
}

/// [`mixing_gap_exact`] with an explicit enumeration cap.
pub fn mixing_gap_exact_with_cap(g: &Graph, cap: usize) -> Result<MixingGapResult, GraphError> {
    mixing_gap_enumerate(g, cap, false)
}

/// Sequential twin of [`mixing_gap_exact`], kept available in every build for
/// benchmark comparison.
pub fn mixing_gap_exact_seq(g: &Graph) -> Result<MixingGapResult, GraphError> {
    mixing_gap_enumerate(g, EXACT_ENUMERATION_CAP, true)
}

fn climb(g: &Graph, seed: u64) -> (f64, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init: Vec<u8> = (0..g.n).map(|_| rng.random_range(0..3u8)).collect();
    let mut full = FullLabeling::new(g, init);
    let mut best = full.objective();
    loop {
        let mut improved = false;
        for v in 0..g.n {
            let current = full.labels[v];
            let mut best_label = current;
            let mut best_obj = best;
            for label in [NEITHER, IN_S, IN_U] {
                if label == current {
                    continue;
                }
                let obj = full.objective_if(v, label);
                if obj > best_obj {
                    best_obj = obj;
                    best_label = label;
                }
            }
            if best_label != current {
                full.relabel(v, best_label);
                best = best_obj;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    (best, full.labels)
}

struct FullLabeling<'g> {
    g: &'g Graph,
    labels: Vec<u8>,
    s_count: i64,
    u_count: i64,
    crossing: i64,
}

impl<'g> FullLabeling<'g> {
    fn new(g: &'g Graph, labels: Vec<u8>) -> Self {
        let mut s_count = 0;
        let mut u_count = 0;
        for &l in &labels {
            match l {
                IN_S => s_count += 1,
                IN_U => u_count += 1,
                _ => {}
            }
        }
        let crossing = g
            .edges
            .iter()
            .filter(|&&(t, h)| labels[t as usize] == IN_S && labels[h as usize] == IN_U)
            .count() as i64;
        Self {
            g,
            labels,
            s_count,
            u_count,
            crossing,
        }
    }

    /// Crossing links incident to `v` under a hypothetical label for `v`.
    fn incident_crossing(&self, v: usize, label: u8) -> i64 {
        let mut c = 0;
        if label == IN_S {
            c += self
                .g
                .out_neighbors(v)
                .iter()
                .filter(|&&w| self.labels[w as usize] == IN_U)
                .count() as i64;
        }
        if label == IN_U {
            c += self
                .g
                .in_neighbors(v)
                .iter()
                .filter(|&&w| self.labels[w as usize] == IN_S)
                .count() as i64;
        }
        c
    }

    fn counts_if(&self, v: usize, label: u8) -> (i64, i64, i64) {
        let current = self.labels[v];
        let mut s = self.s_count;
        let mut u = self.u_count;
        match current {
            IN_S => s -= 1,
            IN_U => u -= 1,
            _ => {}
        }
        match label {
            IN_S => s += 1,
            IN_U => u += 1,
            _ => {}
        }
        let crossing =
            self.crossing - self.incident_crossing(v, current) + self.incident_crossing(v, label);
        (s, u, crossing)
    }

    fn objective_of(&self, s: i64, u: i64, crossing: i64) -> f64 {
        let pairs = (self.g.n * (self.g.n - 1)) as f64;
        (crossing as f64 / self.g.m() as f64 - (s * u) as f64 / pairs).abs()
    }

    fn objective(&self) -> f64 {
        self.objective_of(self.s_count, self.u_count, self.crossing)
    }

    fn objective_if(&self, v: usize, label: u8) -> f64 {
        let (s, u, crossing) = self.counts_if(v, label);
        self.objective_of(s, u, crossing)
    }

    fn relabel(&mut self, v: usize, label: u8) {
        let (s, u, crossing) = self.counts_if(v, label);
        self.labels[v] = label;
        self.s_count = s;
        self.u_count = u;
        self.crossing = crossing;
    }
}

/// Lower bound on the total mixing gap by random-restart single-node-move
/// hill climbing over labelings. The returned value is re-evaluated from the
/// witness sets, so it is a certified lower bound whatever the search did.
pub fn mixing_gap_local_search(
    g: &Graph,
    restarts: usize,
    seed: u64,
) -> Result<MixingGapResult, GraphError> {
    if g.m() == 0 {
        return Err(GraphError::NoEdges);
    }
    if restarts < 1 {
        return Err(GraphError::NoRestarts);
    }
    let results = par::map_indexed(restarts, |r| climb(g, crate::seeds::derive(seed, r as u64)));
    let mut best: Option<(f64, Vec<u8>)> = None;
    for candidate in results {
        if best.as_ref().is_none_or(|b| candidate.0 > b.0) {
            best = Some(candidate);
        }
    }
    let (_, labels) = best.expect("at least one restart");
    let (witness_s, witness_u) = labels_to_sets(&labels);
    let value = mixing_objective(g, &witness_s, &witness_u)?;
    Ok(MixingGapResult {
        value,
        witness_s,
        witness_u,
        exact: false,
    })
}

/// Log of the Erdős–Rényi mixing-gap tail bound
/// `min(1, 3^(n+2) exp(-n^2 p eta^3 / 32))`, capped at 0.
pub fn er_tail_bound_log(n: usize, p: f64, eta: f64) -> Result<f64, GraphError> {
    if n < 2 {
        return Err(GraphError::TooFewNodes { n, min: 2 });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(GraphError::EdgeProbabilityOutOfRange(p));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(GraphError::EtaOutOfRange(eta));
    }
    let n = n as f64;
    let log = (n + 2.0) * 3.0f64.ln() - n * n * p * eta.powi(3) / 32.0;
    Ok(log.min(0.0))
}

/// Probability bound on observing a mixing gap of at least `eta` in an
/// Erdős–Rényi sample, evaluated in log-space to avoid overflow.
pub fn er_tail_bound(n: usize, p: f64, eta: f64) -> Result<f64, GraphError> {
    Ok(er_tail_bound_log(n, p, eta)?.exp())
}
