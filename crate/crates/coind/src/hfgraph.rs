//! Hereditarily finite sets and hypersets as pointed graphs.
//!
//! A pointed graph presents a set: the root is the set itself, edges point to
//! members, and two graphs present the same set exactly when they are
//! bisimilar. Well-founded graphs present ordinary hereditarily finite sets;
//! graphs with cycles present hypersets (a self-loop is the set containing
//! only itself). [`canon`] quotients a graph by its greatest bisimulation and
//! renumbers deterministically, making structural equality — and the digest —
//! a decision procedure for set equality.
//!
//! Each graph carries a `reflexive` flag selecting which bisimulation
//! governs it. Strong mode matches membership edge for edge. Reflexive mode
//! reads membership as reflexive (every set counts as a member of itself)
//! and lets a move be answered one level deeper; this identification is so
//! coarse that every two pointed graphs are reflexively bisimilar — the
//! reflexive universe collapses to a single point, and the code computes
//! that honestly rather than assuming it.

use std::collections::BTreeMap;
use std::fmt;

use crate::digest::{Digest, Hasher};

/// Errors for graph construction, parsing, and bounded enumerations.
#[derive(Debug, thiserror::Error)]
pub enum HfError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{what} {got} exceeds the supported bound {bound}")]
    BoundExceeded { what: &'static str, got: usize, bound: usize },
}

/// Index of a node within one graph; dense and 0-based.
pub type NodeId = usize;

/// A rooted membership graph. Construction prunes nodes unreachable from
/// the root and renumbers the rest densely in breadth-first order, so every
/// held graph is pointed in the strict sense.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGraph {
    succ: Vec<Vec<NodeId>>,
    root: NodeId,
    reflexive_mode: bool,
}

impl HGraph {
    pub fn new(
        node_count: usize,
        edges: Vec<(NodeId, NodeId)>,
        root: NodeId,
        reflexive_mode: bool,
    ) -> Result<Self, HfError> {
        if root >= node_count {
            return Err(HfError::Invalid(format!(
                "root {root} out of range for {node_count} nodes"
            )));
        }
        let mut succ = vec![Vec::new(); node_count];
        for (src, dst) in edges {
            if src >= node_count || dst >= node_count {
                return Err(HfError::Invalid(format!(
                    "edge {src} -> {dst} out of range for {node_count} nodes"
                )));
            }
            succ[src].push(dst);
        }
        for adj in &mut succ {
            adj.sort_unstable();
            adj.dedup();
        }
        // Prune to the reachable part, renumbering in BFS discovery order.
        let mut renum = vec![usize::MAX; node_count];
        let mut order = vec![root];
        renum[root] = 0;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in &succ[v] {
                if renum[w] == usize::MAX {
                    renum[w] = order.len();
                    order.push(w);
                }
            }
        }
        let succ = order
            .iter()
            .map(|&v| {
                let mut adj: Vec<NodeId> = succ[v].iter().map(|&w| renum[w]).collect();
                adj.sort_unstable();
                adj
            })
            .collect();
        Ok(HGraph { succ, root: 0, reflexive_mode })
    }

    /// The empty set: one node, no members.
    pub fn empty_set(reflexive_mode: bool) -> HGraph {
        HGraph { succ: vec![Vec::new()], root: 0, reflexive_mode }
    }

    pub fn node_count(&self) -> usize {
        self.succ.len()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn successors(&self, node: NodeId) -> &[NodeId] {
        &self.succ[node]
    }

    pub fn is_reflexive_mode(&self) -> bool {
        self.reflexive_mode
    }

    /// The same graph under the other membership reading.
    pub fn with_reflexive_mode(&self, reflexive_mode: bool) -> HGraph {
        HGraph { succ: self.succ.clone(), root: self.root, reflexive_mode }
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(src, adj)| adj.iter().map(move |&dst| (src, dst)))
    }

    /// The set whose members are the given graphs (copied whole).
    pub fn set_of(members: &[&HGraph], reflexive_mode: bool) -> HGraph {
        let mut edges = Vec::new();
        let mut count = 1usize;
        for g in members {
            let base = count;
            count += g.node_count();
            edges.push((0, base + g.root));
            edges.extend(g.edges().map(|(s, d)| (base + s, base + d)));
        }
        HGraph::new(count, edges, 0, reflexive_mode).expect("member graphs are well-formed")
    }
}

/// True iff the membership relation below the root has no cycle (the graph
/// presents an ordinary well-founded set). Only explicit edges count; the
/// reflexive reading's implicit self-membership lives in the bisimulation
/// checkers, not here.
pub fn is_wellfounded(g: &HGraph) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Grey,
        Black,
    }
    let mut color = vec![Color::White; g.node_count()];
    let mut stack = vec![(g.root(), false)];
    while let Some((v, done)) = stack.pop() {
        if done {
            color[v] = Color::Black;
            continue;
        }
        match color[v] {
            Color::Black => continue,
            Color::Grey => return false,
            Color::White => {}
        }
        color[v] = Color::Grey;
        stack.push((v, true));
        for &w in g.successors(v) {
            match color[w] {
                Color::Grey => return false,
                Color::White => stack.push((w, false)),
                Color::Black => {}
            }
        }
    }
    true
}

/// Which bisimulation notion relates two graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsMode {
    /// Membership matched edge for edge on both sides.
    Strong,
    /// Membership read reflexively, with a one-level stutter allowed: a
    /// member's member may answer for it.
    Reflexive,
}

/// Partition refinement: split classes by the set of successor classes until
/// stable. The result is the partition induced by the greatest strong
/// bisimulation on the (disjoint union of the) input graph(s).
fn refine_partition(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut class_of = vec![0usize; n];
    let mut classes = 1usize;
    loop {
        let mut sig_ids: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let next: Vec<usize> = (0..n)
            .map(|v| {
                let mut s: Vec<usize> = succ[v].iter().map(|&w| class_of[w]).collect();
                s.sort_unstable();
                s.dedup();
                let id = sig_ids.len();
                *sig_ids.entry((class_of[v], s)).or_insert(id)
            })
            .collect();
        let next_classes = sig_ids.len();
        class_of = next;
        // Splitting only refines, so a stable class count means a fixpoint.
        if next_classes == classes {
            return class_of;
        }
        classes = next_classes;
    }
}

/// Greatest reflexive-stuttering bisimulation between the node sets of two
/// graphs, as a boolean matrix, computed by greatest-fixpoint iteration.
/// Every node counts as its own member here.
fn reflexive_gfp(g: &HGraph, h: &HGraph) -> Vec<bool> {
    let (ng, nh) = (g.node_count(), h.node_count());
    fn memb(gr: &HGraph, v: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(v).chain(gr.successors(v).iter().copied())
    }
    let mut rel = vec![true; ng * nh];
    loop {
        let mut changed = false;
        for u in 0..ng {
            for v in 0..nh {
                if !rel[u * nh + v] {
                    continue;
                }
                let forward = memb(g, u).all(|u1| {
                    memb(h, v).any(|v1| rel[u1 * nh + v1])
                        || memb(g, u1).any(|u2| rel[u2 * nh + v])
                });
                let backward = memb(h, v).all(|v1| {
                    memb(g, u).any(|u1| rel[u1 * nh + v1])
                        || memb(h, v1).any(|v2| rel[u * nh + v2])
                });
                if !(forward && backward) {
                    rel[u * nh + v] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

/// Do two graphs present the same (hyper)set under the given mode? The
/// graphs' own reflexive flags are ignored; the mode parameter decides.
pub fn bisimilar(g: &HGraph, h: &HGraph, mode: HsMode) -> bool {
    match mode {
        HsMode::Strong => {
            // Refine the disjoint union and compare root classes.
            let ng = g.node_count();
            let mut succ: Vec<Vec<usize>> = g.succ.clone();
            succ.extend(h.succ.iter().map(|adj| adj.iter().map(|&w| w + ng).collect::<Vec<_>>()));
            let class_of = refine_partition(&succ);
            class_of[g.root()] == class_of[ng + h.root()]
        }
        HsMode::Reflexive => {
            let rel = reflexive_gfp(g, h);
            rel[g.root() * h.node_count() + h.root()]
        }
    }
}

/// A graph in canonical form, together with the digest that names it.
/// Digest equality is set equality: two graphs canonicalize to equal
/// digests exactly when they are bisimilar under the canonicalized mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalSet {
    graph: HGraph,
    digest: Digest,
}

impl CanonicalSet {
    pub fn graph(&self) -> &HGraph {
        &self.graph
    }

    pub fn digest(&self) -> Digest {
        self.digest
    }
}

/// Node digests by iterated neighborhood hashing: round `k+1` hashes the
/// deduplicated sorted multiset of round-`k` successor digests. After as
/// many rounds as there are nodes the partition by digest equality has
/// stabilized at the strong-bisimilarity partition, so on a quotient graph
/// (no two nodes bisimilar) the digests are pairwise distinct.
fn node_digests(succ: &[Vec<usize>]) -> Vec<Digest> {
    let n = succ.len();
    let mut d = vec![Hasher::new("hf-node").finish(); n];
    for _ in 0..n {
        d = succ
            .iter()
            .map(|adj| {
                let mut ds: Vec<Digest> = adj.iter().map(|&w| d[w]).collect();
                ds.sort_unstable();
                ds.dedup();
                let mut h = Hasher::new("hf-node");
                h.usize(ds.len());
                for x in &ds {
                    h.digest(x);
                }
                h.finish()
            })
            .collect();
    }
    d
}

/// Quotient a graph by its greatest bisimulation (strong, or
/// reflexive-stuttering when the graph's flag says so) and renumber
/// canonically: breadth-first from the root class, successors visited in
/// digest order. The digest of the result names the set itself.
pub fn canon(g: &HGraph) -> CanonicalSet {
    let n = g.node_count();
    // Class of each node under the governing bisimulation.
    let class_of: Vec<usize> = if g.reflexive_mode {
        let rel = reflexive_gfp(g, g);
        // The gfp is an equivalence here; pick the least related node as
        // each node's class representative.
        let mut class_of = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for v in 0..n {
            match reps.iter().position(|&r| rel[r * n + v] && rel[v * n + r]) {
                Some(c) => class_of[v] = c,
                None => {
                    class_of[v] = reps.len();
                    reps.push(v);
                }
            }
        }
        class_of
    } else {
        refine_partition(&g.succ)
    };
    let classes = class_of.iter().max().map_or(1, |m| m + 1);
    // Membership between classes, from the explicit edges. The reflexive
    // reading makes self-membership implicit, so a class edge to itself is
    // redundant there and is dropped.
    let mut qsucc = vec![Vec::new(); classes];
    for (v, adj) in g.succ.iter().enumerate() {
        for &w in adj {
            if g.reflexive_mode && class_of[v] == class_of[w] {
                continue;
            }
            qsucc[class_of[v]].push(class_of[w]);
        }
    }
    for adj in &mut qsucc {
        adj.sort_unstable();
        adj.dedup();
    }
    let qroot = class_of[g.root()];
    // Canonical numbering: BFS from the root class, successors in digest
    // order. On the quotient the digests are pairwise distinct, so the
    // numbering is well-defined.
    let digests = node_digests(&qsucc);
    let mut renum = vec![usize::MAX; classes];
    let mut order = vec![qroot];
    renum[qroot] = 0;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        let mut nexts: Vec<usize> = qsucc[v].clone();
        nexts.sort_by_key(|&w| digests[w]);
        for w in nexts {
            if renum[w] == usize::MAX {
                renum[w] = order.len();
                order.push(w);
            }
        }
    }
    let succ: Vec<Vec<usize>> = order
        .iter()
        .map(|&v| {
            let mut adj: Vec<usize> = qsucc[v].iter().map(|&w| renum[w]).collect();
            adj.sort_unstable();
            adj
        })
        .collect();
    let mut h = Hasher::new("hf-canon");
    h.u64(g.reflexive_mode as u64);
    h.usize(succ.len());
    for (src, adj) in succ.iter().enumerate() {
        for &dst in adj {
            h.usize(src).usize(dst);
        }
    }
    let digest = h.finish();
    let graph = HGraph { succ, root: 0, reflexive_mode: g.reflexive_mode };
    CanonicalSet { graph, digest }
}

/// Largest `n` accepted by [`vn`].
pub const VN_BOUND: usize = 12;

/// The von Neumann numeral `n = {0, 1, …, n−1}` as an explicit graph:
/// one node per numeral up to `n`, an edge from each numeral to every
/// smaller one.
pub fn vn(n: usize) -> Result<HGraph, HfError> {
    if n > VN_BOUND {
        return Err(HfError::BoundExceeded { what: "von Neumann numeral", got: n, bound: VN_BOUND });
    }
    let mut edges = Vec::new();
    for k in 0..=n {
        for j in 0..k {
            edges.push((k, j));
        }
    }
    HGraph::new(n + 1, edges, n, false)
}

/// The complete enumeration of the `n`-th finite powerset stage: stage 0 is
/// `[∅]`, and stage `k+1` lists every subset of stage `k`, canonicalized.
/// Sizes run 1, 2, 4, 16, 65536; the last is gated behind `allow_stage4`
/// because it is four orders of magnitude bigger than everything else.
pub fn pow_tower(n: usize, allow_stage4: bool) -> Result<Vec<CanonicalSet>, HfError> {
    let bound = if allow_stage4 { 4 } else { 3 };
    if n > bound {
        return Err(HfError::BoundExceeded { what: "powerset stage", got: n, bound });
    }
    let mut stage = vec![canon(&HGraph::empty_set(false))];
    for _ in 0..n {
        let mut next: Vec<CanonicalSet> = Vec::with_capacity(1 << stage.len());
        for mask in 0u64..(1u64 << stage.len()) {
            let members: Vec<&HGraph> = stage
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, c)| c.graph())
                .collect();
            next.push(canon(&HGraph::set_of(&members, false)));
        }
        next.sort_by_key(CanonicalSet::digest);
        stage = next;
    }
    Ok(stage)
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

impl fmt::Display for HGraph {
    /// The `.hg` line format. The reflexive flag is graph-level; it is
    /// written on every node line for round-tripping.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let marker = if self.reflexive_mode { " reflexive" } else { "" };
        for v in 0..self.node_count() {
            writeln!(f, "node {v}{marker}")?;
        }
        for (src, dst) in self.edges() {
            writeln!(f, "edge {src} {dst}")?;
        }
        write!(f, "root {}", self.root)
    }
}

/// Parse the `.hg` line format: `node <id> [reflexive]`, `edge <src> <dst>`,
/// `root <id>`, `#` comments. A `reflexive` marker on any node line puts the
/// whole graph in reflexive mode. Ids may be any decimal naturals.
pub fn parse_hg(text: &str) -> Result<HGraph, HfError> {
    let err = |line: usize, msg: String| HfError::Parse { line, msg };
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut declared: Vec<usize> = Vec::new();
    let mut reflexive = false;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new(); // (line, src, dst)
    let mut root: Option<(usize, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tok: Vec<&str> = body.split_whitespace().collect();
        let nat = |s: &str| s.parse::<usize>().map_err(|_| err(line, format!("`{s}` is not a node id")));
        match tok[0] {
            "node" => {
                let flagged = match tok.len() {
                    2 => false,
                    3 if tok[2] == "reflexive" => true,
                    _ => return Err(err(line, "expected `node <id> [reflexive]`".into())),
                };
                reflexive |= flagged;
                let id = nat(tok[1])?;
                let dense = declared.len();
                if ids.insert(id, dense).is_some() {
                    return Err(err(line, format!("node {id} declared twice")));
                }
                declared.push(id);
            }
            "edge" => {
                if tok.len() != 3 {
                    return Err(err(line, "expected `edge <src> <dst>`".into()));
                }
                edges.push((line, nat(tok[1])?, nat(tok[2])?));
            }
            "root" => {
                if tok.len() != 2 {
                    return Err(err(line, "expected `root <id>`".into()));
                }
                if root.is_some() {
                    return Err(err(line, "duplicate root".into()));
                }
                root = Some((line, nat(tok[1])?));
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    let resolve = |line: usize, id: usize| {
        ids.get(&id).copied().ok_or_else(|| err(line, format!("node {id} is never declared")))
    };
    let last = text.lines().count();
    let (root_line, root_id) = root.ok_or_else(|| err(last, "missing `root` line".into()))?;
    let root = resolve(root_line, root_id)?;
    let edges = edges
        .into_iter()
        .map(|(line, s, d)| Ok((resolve(line, s)?, resolve(line, d)?)))
        .collect::<Result<Vec<_>, HfError>>()?;
    HGraph::new(ids.len(), edges, root, reflexive)
}
