//! Signed games: pointed graphs with left- and right-polarized edges.
//!
//! A game is a position with a set of left options and a set of right
//! options, each itself a game; finite graphs present them with sharing, and
//! cyclic graphs present non-well-founded games. Well-founded games carry
//! Conway's order [`leq`] — the mutual recursion "no left option of `s`
//! dominates `t`, and `s` dominates no right option of `t`" — together with
//! negation, sum, and (for numeric games) product. Arbitrary games, cyclic
//! ones included, can instead be related by [`hyperstrategy`] relations,
//! the greatest fixpoints of a synchronous or an asynchronous
//! move-matching clause.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::digest::{Digest, Hasher};
use crate::reals;

/// Errors for game construction and arithmetic.
#[derive(Debug, thiserror::Error)]
pub enum GamesError {
    #[error("game has a cycle reachable from the root; this operation needs a well-founded game")]
    Cyclic,
    #[error("game is not numeric: some left option fails to sit strictly below every right option")]
    NonNumeric,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl From<reals::RealsError> for GamesError {
    fn from(e: reals::RealsError) -> Self {
        match e {
            reals::RealsError::CyclicGame => GamesError::Cyclic,
            reals::RealsError::NonNumeric => GamesError::NonNumeric,
            other => GamesError::Invalid(other.to_string()),
        }
    }
}

/// A rooted game graph. Nodes are positions, edges point to options, and
/// every edge carries a polarity: left edges list the first player's moves,
/// right edges the second's. Graphs are immutable once built; construction
/// sorts adjacency lists, detects cycles reachable from the root, and (for
/// well-founded graphs) assigns every reachable node a digest of its
/// unfolded option tree, so that structurally equal positions — even across
/// different graphs — share one digest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedGame {
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
    root: usize,
    wellfounded: bool,
    digests: Vec<Option<Digest>>,
}

impl SignedGame {
    /// Build a game from explicit edge lists. Endpoints must lie below
    /// `node_count`; nodes unreachable from the root are kept but take no
    /// part in any operation.
    pub fn new(
        node_count: usize,
        left_edges: Vec<(usize, usize)>,
        right_edges: Vec<(usize, usize)>,
        root: usize,
    ) -> Result<Self, GamesError> {
        if root >= node_count {
            return Err(GamesError::Invalid(format!(
                "root {root} out of range for {node_count} nodes"
            )));
        }
        let mut left = vec![Vec::new(); node_count];
        let mut right = vec![Vec::new(); node_count];
        for (edges, adj, what) in [(&left_edges, &mut left, "left"), (&right_edges, &mut right, "right")]
        {
            for &(src, dst) in edges.iter() {
                if src >= node_count || dst >= node_count {
                    return Err(GamesError::Invalid(format!(
                        "{what} edge {src} -> {dst} out of range for {node_count} nodes"
                    )));
                }
                adj[src].push(dst);
            }
        }
        for adj in left.iter_mut().chain(right.iter_mut()) {
            adj.sort_unstable();
            adj.dedup();
        }
        let mut g = SignedGame { left, right, root, wellfounded: false, digests: Vec::new() };
        g.wellfounded = g.check_wellfounded();
        g.digests = vec![None; node_count];
        if g.wellfounded {
            g.fill_digests(g.root);
        }
        Ok(g)
    }

    /// The game whose options are the given games: each argument graph is
    /// copied in whole under a fresh root.
    pub fn from_options(left: &[SignedGame], right: &[SignedGame]) -> SignedGame {
        let mut left_edges = Vec::new();
        let mut right_edges = Vec::new();
        let mut count = 1usize;
        for (is_right, opts) in [(false, left), (true, right)] {
            for g in opts {
                let base = count;
                count += g.node_count();
                if is_right {
                    right_edges.push((0, base + g.root));
                } else {
                    left_edges.push((0, base + g.root));
                }
                for (src, adj) in g.left.iter().enumerate() {
                    left_edges.extend(adj.iter().map(|&dst| (base + src, base + dst)));
                }
                for (src, adj) in g.right.iter().enumerate() {
                    right_edges.extend(adj.iter().map(|&dst| (base + src, base + dst)));
                }
            }
        }
        SignedGame::new(count, left_edges, right_edges, 0).expect("option graphs are well-formed")
    }

    /// The zero game `{|}`.
    pub fn zero() -> SignedGame {
        SignedGame::new(1, Vec::new(), Vec::new(), 0).expect("trivial graph")
    }

    pub fn node_count(&self) -> usize {
        self.left.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn left_options(&self, node: usize) -> &[usize] {
        &self.left[node]
    }

    pub fn right_options(&self, node: usize) -> &[usize] {
        &self.right[node]
    }

    /// True when no cycle is reachable from the root.
    pub fn is_wellfounded(&self) -> bool {
        self.wellfounded
    }

    /// Digest of the unfolded option tree below a node; `None` on the
    /// non-well-founded part.
    pub fn node_digest(&self, node: usize) -> Option<Digest> {
        self.digests[node]
    }

    /// Digest of the whole game (its root position), when well-founded.
    pub fn digest(&self) -> Option<Digest> {
        self.digests[self.root]
    }

    fn successors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.left[node].iter().chain(self.right[node].iter()).copied()
    }

    /// All nodes reachable from the root, in BFS order.
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.node_count()];
        let mut queue = vec![self.root];
        seen[self.root] = true;
        let mut i = 0;
        while i < queue.len() {
            let v = queue[i];
            i += 1;
            for w in self.successors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push(w);
                }
            }
        }
        queue
    }

    fn check_wellfounded(&self) -> bool {
        // Iterative 3-color DFS from the root; a back edge is a cycle.
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Grey,
            Black,
        }
        let mut color = vec![Color::White; self.node_count()];
        let mut stack = vec![(self.root, false)];
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
            for w in self.successors(v) {
                match color[w] {
                    Color::Grey => return false,
                    Color::White => stack.push((w, false)),
                    Color::Black => {}
                }
            }
        }
        true
    }

    fn fill_digests(&mut self, node: usize) {
        if self.digests[node].is_some() {
            return;
        }
        let (lefts, rights) = (self.left[node].clone(), self.right[node].clone());
        let mut ld: Vec<Digest> = Vec::with_capacity(lefts.len());
        for &a in &lefts {
            self.fill_digests(a);
            ld.push(self.digests[a].unwrap());
        }
        let mut rd: Vec<Digest> = Vec::with_capacity(rights.len());
        for &b in &rights {
            self.fill_digests(b);
            rd.push(self.digests[b].unwrap());
        }
        // Options form sets: sort and dedup each side before hashing.
        for side in [&mut ld, &mut rd] {
            side.sort_unstable();
            side.dedup();
        }
        let mut h = Hasher::new("game");
        h.usize(ld.len());
        for d in &ld {
            h.digest(d);
        }
        h.usize(rd.len());
        for d in &rd {
            h.digest(d);
        }
        self.digests[node] = Some(h.finish());
    }
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

impl fmt::Display for SignedGame {
    /// The `.sg` line format: `node` declarations, `edge <src> -|+ <dst>`
    /// lines, and a final `root` line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in 0..self.node_count() {
            writeln!(f, "node {v}")?;
        }
        for (src, adj) in self.left.iter().enumerate() {
            for dst in adj {
                writeln!(f, "edge {src} - {dst}")?;
            }
        }
        for (src, adj) in self.right.iter().enumerate() {
            for dst in adj {
                writeln!(f, "edge {src} + {dst}")?;
            }
        }
        write!(f, "root {}", self.root)
    }
}

/// Parse the `.sg` line format. Node ids may be any decimal naturals (they
/// are renumbered densely in declaration order); `#` starts a comment.
pub fn parse_sg(text: &str) -> Result<SignedGame, GamesError> {
    let err = |line: usize, msg: String| GamesError::Parse { line, msg };
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize, char, usize)> = Vec::new(); // (line, src, polarity, dst)
    let mut root: Option<(usize, usize)> = None; // (line, id)
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
                if tok.len() != 2 {
                    return Err(err(line, "expected `node <id>`".into()));
                }
                let id = nat(tok[1])?;
                let dense = ids.len();
                if ids.insert(id, dense).is_some() {
                    return Err(err(line, format!("node {id} declared twice")));
                }
            }
            "edge" => {
                if tok.len() != 4 || !matches!(tok[2], "-" | "+") {
                    return Err(err(line, "expected `edge <src> -|+ <dst>`".into()));
                }
                edges.push((line, nat(tok[1])?, tok[2].chars().next().unwrap(), nat(tok[3])?));
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
    let (root_line, root_id) = root.ok_or_else(|| err(0, "missing `root` line".into()))?;
    let root = resolve(root_line, root_id)?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (line, src, pol, dst) in edges {
        let e = (resolve(line, src)?, resolve(line, dst)?);
        if pol == '-' {
            left.push(e);
        } else {
            right.push(e);
        }
    }
    SignedGame::new(ids.len(), left, right, root)
}

/// Parse a brace literal such as `{0,{1|}|2}`. Leaves are dyadic literals
/// (spelled as their shortest-string games); the sides of `|` are
/// comma-separated option lists, either possibly empty.
pub fn parse_literal(text: &str) -> Result<SignedGame, GamesError> {
    fn split_top(s: &str, sep: char) -> Result<Vec<&str>, String> {
        let mut parts = Vec::new();
        let mut depth = 0usize;
        let mut start = 0;
        for (i, c) in s.char_indices() {
            match c {
                '{' => depth += 1,
                '}' => depth = depth.checked_sub(1).ok_or("unbalanced braces")?,
                c if c == sep && depth == 0 => {
                    parts.push(&s[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err("unbalanced braces".into());
        }
        parts.push(&s[start..]);
        Ok(parts)
    }
    fn game(s: &str) -> Result<SignedGame, String> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('{') {
            let inner = inner.strip_suffix('}').ok_or(format!("`{s}`: missing closing brace"))?;
            let sides = split_top(inner, '|')?;
            if sides.len() != 2 {
                return Err(format!("`{s}`: expected exactly one top-level `|`"));
            }
            let mut opts = [Vec::new(), Vec::new()];
            for (side, out) in sides.iter().zip(opts.iter_mut()) {
                for part in split_top(side, ',')? {
                    if !part.trim().is_empty() {
                        out.push(game(part)?);
                    }
                }
            }
            let [l, r] = opts;
            Ok(SignedGame::from_options(&l, &r))
        } else {
            let d: reals::Dyadic = s.parse().map_err(|e: reals::RealsError| e.to_string())?;
            reals::gamma(&reals::encode(&reals::ExtReal::Finite(d))).map_err(|e| e.to_string())
        }
    }
    game(text).map_err(GamesError::Invalid)
}

// ---------------------------------------------------------------------------
// Order and equivalence
// ---------------------------------------------------------------------------

/// Comparator for well-founded games with a memo shared across calls, keyed
/// by position digests so that repeated positions — within one graph or
/// across graphs — are compared once.
#[derive(Default)]
pub struct Comparer {
    memo: HashMap<(Digest, Digest), bool>,
}

impl Comparer {
    pub fn new() -> Self {
        Comparer::default()
    }

    /// `s ≤ t` in the Conway order: no left option of `s` is ≥ `t`, and no
    /// right option of `t` is ≤ `s`.
    pub fn leq(&mut self, s: &SignedGame, t: &SignedGame) -> Result<bool, GamesError> {
        if !s.is_wellfounded() || !t.is_wellfounded() {
            return Err(GamesError::Cyclic);
        }
        Ok(self.leq_nodes(s, s.root(), t, t.root()))
    }

    /// Mutual order: `s ≤ t` and `t ≤ s`.
    pub fn equiv(&mut self, s: &SignedGame, t: &SignedGame) -> Result<bool, GamesError> {
        Ok(self.leq(s, t)? && self.leq(t, s)?)
    }

    fn leq_nodes(&mut self, x: &SignedGame, u: usize, y: &SignedGame, v: usize) -> bool {
        let key = (
            x.node_digest(u).expect("compared nodes are well-founded"),
            y.node_digest(v).expect("compared nodes are well-founded"),
        );
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = x.left_options(u).iter().all(|&a| !self.leq_nodes(y, v, x, a))
            && y.right_options(v).iter().all(|&b| !self.leq_nodes(y, b, x, u));
        self.memo.insert(key, r);
        r
    }

    pub(crate) fn equiv_nodes(&mut self, x: &SignedGame, u: usize, y: &SignedGame, v: usize) -> bool {
        self.leq_nodes(x, u, y, v) && self.leq_nodes(y, v, x, u)
    }
}

/// See [`Comparer::leq`]. Errors on games with reachable cycles.
pub fn leq(s: &SignedGame, t: &SignedGame) -> Result<bool, GamesError> {
    Comparer::new().leq(s, t)
}

/// Game equivalence: mutual [`leq`].
pub fn equiv(s: &SignedGame, t: &SignedGame) -> Result<bool, GamesError> {
    Comparer::new().equiv(s, t)
}

// ---------------------------------------------------------------------------
// Arithmetic
// ---------------------------------------------------------------------------

/// Negation swaps the players: left and right edges trade places.
pub fn neg(g: &SignedGame) -> SignedGame {
    let flip = |adj: &[Vec<usize>]| {
        adj.iter()
            .enumerate()
            .flat_map(|(src, dsts)| dsts.iter().map(move |&dst| (src, dst)))
            .collect::<Vec<_>>()
    };
    SignedGame::new(g.node_count(), flip(&g.right), flip(&g.left), g.root())
        .expect("negation preserves well-formedness")
}

/// Disjunctive sum: a move in `s + t` is a move in either summand, by the
/// same player. The result is built over pairs of positions, so sharing in
/// the inputs is preserved.
pub fn add(s: &SignedGame, t: &SignedGame) -> Result<SignedGame, GamesError> {
    if !s.is_wellfounded() || !t.is_wellfounded() {
        return Err(GamesError::Cyclic);
    }
    struct Builder<'a> {
        s: &'a SignedGame,
        t: &'a SignedGame,
        ids: HashMap<(usize, usize), usize>,
        left: Vec<(usize, usize)>,
        right: Vec<(usize, usize)>,
    }
    impl Builder<'_> {
        fn node(&mut self, u: usize, v: usize) -> usize {
            if let Some(&id) = self.ids.get(&(u, v)) {
                return id;
            }
            let id = self.ids.len();
            self.ids.insert((u, v), id);
            for &a in self.s.left_options(u) {
                let child = self.node(a, v);
                self.left.push((id, child));
            }
            for &b in self.t.left_options(v) {
                let child = self.node(u, b);
                self.left.push((id, child));
            }
            for &a in self.s.right_options(u) {
                let child = self.node(a, v);
                self.right.push((id, child));
            }
            for &b in self.t.right_options(v) {
                let child = self.node(u, b);
                self.right.push((id, child));
            }
            id
        }
    }
    let mut b = Builder { s, t, ids: HashMap::new(), left: Vec::new(), right: Vec::new() };
    let root = b.node(s.root(), t.root());
    SignedGame::new(b.ids.len(), b.left, b.right, root)
}

/// Conway product of two numeric games. An option takes an option in each
/// factor — like-polarity pairs give left options, unlike pairs right — and
/// corrects the double count: the option at `(a, b)` is
/// `a·t + s·b − a·b`. Inputs must be well-founded and numeric.
///
/// Every subproduct of numbers is again a number, so the memo stores each
/// one as the chain game of its sign expansion instead of the raw option
/// tree, whose size grows doubly exponentially in the birthday. Only the
/// representation shrinks: the compact game is order-equivalent to the
/// tree it replaces, and values still emerge from the option formula, not
/// from arithmetic on the factors' values.
pub fn mul(s: &SignedGame, t: &SignedGame) -> Result<SignedGame, GamesError> {
    reals::game_value(s)?;
    reals::game_value(t)?;
    fn compact(g: SignedGame) -> SignedGame {
        let s = reals::upsilon(&g).expect("subproducts of numeric games are numeric");
        reals::gamma(&s).expect("sign expansions of dyadics are finite")
    }
    fn prod(
        s: &SignedGame,
        u: usize,
        t: &SignedGame,
        v: usize,
        memo: &mut HashMap<(usize, usize), SignedGame>,
    ) -> SignedGame {
        if let Some(g) = memo.get(&(u, v)) {
            return g.clone();
        }
        let mut opts = [Vec::new(), Vec::new()]; // [left, right]
        let sides = [
            (s.left_options(u), t.left_options(v), 0),
            (s.right_options(u), t.right_options(v), 0),
            (s.left_options(u), t.right_options(v), 1),
            (s.right_options(u), t.left_options(v), 1),
        ];
        for (s_opts, t_opts, polarity) in sides {
            for &a in s_opts {
                for &b in t_opts {
                    let at = prod(s, a, t, v, memo);
                    let sb = prod(s, u, t, b, memo);
                    let ab = prod(s, a, t, b, memo);
                    let sum = add(&at, &sb).and_then(|g| add(&g, &neg(&ab)));
                    opts[polarity].push(sum.expect("products of numeric games are well-founded"));
                }
            }
        }
        let [l, r] = opts;
        let g = compact(SignedGame::from_options(&l, &r));
        memo.insert((u, v), g.clone());
        g
    }
    Ok(prod(s, s.root(), t, t.root(), &mut HashMap::new()))
}

/// The day a well-founded game is born: 0 for `{|}`, else one more than the
/// latest-born option.
pub fn birthday(g: &SignedGame) -> Result<u64, GamesError> {
    if !g.is_wellfounded() {
        return Err(GamesError::Cyclic);
    }
    fn rank(g: &SignedGame, v: usize, memo: &mut [Option<u64>]) -> u64 {
        if let Some(r) = memo[v] {
            return r;
        }
        let r = g
            .successors(v)
            .map(|w| rank(g, w, memo))
            .max()
            .map_or(0, |m| m + 1);
        memo[v] = Some(r);
        r
    }
    Ok(rank(g, g.root(), &mut vec![None; g.node_count()]))
}

/// Hereditary option-transitivity: at every reachable position, each left
/// option's left options recur among the position's own (up to game
/// equivalence), the position's right options recur among each left
/// option's, and dually on the right. Numbers in this form compose their
/// moves transitively; the property is what the asynchronous move-matching
/// order presupposes.
pub fn is_transitive(g: &SignedGame) -> Result<bool, GamesError> {
    if !g.is_wellfounded() {
        return Err(GamesError::Cyclic);
    }
    let mut cmp = Comparer::new();
    fn subset_equiv(cmp: &mut Comparer, g: &SignedGame, xs: &[usize], ys: &[usize]) -> bool {
        xs.iter().all(|&x| ys.iter().any(|&y| cmp.equiv_nodes(g, x, g, y)))
    }
    for u in g.reachable() {
        for &a in g.left_options(u) {
            if !subset_equiv(&mut cmp, g, g.left_options(a), g.left_options(u))
                || !subset_equiv(&mut cmp, g, g.right_options(u), g.right_options(a))
            {
                return Ok(false);
            }
        }
        for &b in g.right_options(u) {
            if !subset_equiv(&mut cmp, g, g.left_options(u), g.left_options(b))
                || !subset_equiv(&mut cmp, g, g.right_options(b), g.right_options(u))
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Hyperstrategies
// ---------------------------------------------------------------------------

/// Which move-matching clause a strategy relation satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StratMode {
    /// Every left move answers a left move now; every right move a right
    /// move now.
    Sync,
    /// A left move may instead be absorbed by one of its own right moves
    /// (and dually), letting one side run ahead of the other.
    Async,
}

/// A relation between the positions of two games, closed under the clause
/// of its mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyRelation {
    mode: StratMode,
    pairs: BTreeSet<(usize, usize)>,
}

impl StrategyRelation {
    pub fn mode(&self) -> StratMode {
        self.mode
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.pairs.contains(&(u, v))
    }
}

/// The greatest relation between positions of `s` and `t` closed under the
/// mode's clause, if it relates the roots; `None` otherwise. Cyclic games
/// are welcome — the computation is a finite greatest-fixpoint iteration
/// over position pairs, no well-foundedness needed.
pub fn hyperstrategy(s: &SignedGame, t: &SignedGame, mode: StratMode) -> Option<StrategyRelation> {
    let (ns, nt) = (s.node_count(), t.node_count());
    let mut rel = vec![true; ns * nt];
    let clause = |rel: &[bool], u: usize, v: usize| -> bool {
        let at = |a: usize, b: usize| rel[a * nt + b];
        match mode {
            StratMode::Sync => {
                s.left_options(u).iter().all(|&a| t.left_options(v).iter().any(|&b| at(a, b)))
                    && t.right_options(v).iter().all(|&b| s.right_options(u).iter().any(|&a| at(a, b)))
            }
            StratMode::Async => {
                s.left_options(u).iter().all(|&a| {
                    t.left_options(v).iter().any(|&b| at(a, b))
                        || s.right_options(a).iter().any(|&ap| at(ap, v))
                }) && t.right_options(v).iter().all(|&b| {
                    s.right_options(u).iter().any(|&a| at(a, b))
                        || t.left_options(b).iter().any(|&bm| at(u, bm))
                })
            }
        }
    };
    let root_cell = s.root() * nt + t.root();
    loop {
        let mut changed = false;
        for u in 0..ns {
            for v in 0..nt {
                if rel[u * nt + v] && !clause(&rel, u, v) {
                    rel[u * nt + v] = false;
                    changed = true;
                }
            }
        }
        // Once the root pair has died no later sweep revives it.
        if !rel[root_cell] {
            return None;
        }
        if !changed {
            break;
        }
    }
    let pairs = (0..ns)
        .flat_map(|u| (0..nt).map(move |v| (u, v)))
        .filter(|&(u, v)| rel[u * nt + v])
        .collect();
    Some(StrategyRelation { mode, pairs })
}

// ---------------------------------------------------------------------------
// Matrix extensions
// ---------------------------------------------------------------------------

/// Which way a game matrix acts on a game vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Extend a `p × q` matrix of numeric games along a vector: on the left, a
/// length-`p` vector lands in length `q` with entries `Σᵢ αᵢ·Λᵢⱼ`; on the
/// right, a length-`q` vector lands in length `p` with entries `Σⱼ Λᵢⱼ·βⱼ`.
/// Sums start from the zero game.
pub fn kan_matvec(
    matrix: &[Vec<SignedGame>],
    vector: &[SignedGame],
    side: Side,
) -> Result<Vec<SignedGame>, GamesError> {
    let p = matrix.len();
    if p == 0 {
        return Err(GamesError::Dimension("matrix has no rows".into()));
    }
    let q = matrix[0].len();
    if matrix.iter().any(|row| row.len() != q) {
        return Err(GamesError::Dimension("matrix rows have unequal lengths".into()));
    }
    let expect = match side {
        Side::Left => p,
        Side::Right => q,
    };
    if vector.len() != expect {
        return Err(GamesError::Dimension(format!(
            "vector has length {}, expected {expect}",
            vector.len()
        )));
    }
    let mut out = Vec::new();
    match side {
        Side::Left => {
            for j in 0..q {
                let mut acc = SignedGame::zero();
                for (i, a) in vector.iter().enumerate() {
                    acc = add(&acc, &mul(a, &matrix[i][j])?)?;
                }
                out.push(acc);
            }
        }
        Side::Right => {
            for row in matrix {
                let mut acc = SignedGame::zero();
                for (j, b) in vector.iter().enumerate() {
                    acc = add(&acc, &mul(&row[j], b)?)?;
                }
                out.push(acc);
            }
        }
    }
    Ok(out)
}
