//! Processes extended in time: safety specifications as prefix-closed
//! tries, finite machines unfolded into history tables, the cumulative
//! lifting that turns a per-step function into a function on whole runs,
//! and bisimulation witnesses between specifications.
//!
//! Two bisimulation modes are supported. In synchronous (strong) mode
//! every step of one specification must be answered by a step of the
//! other, layer by layer. In the stuttering mode — called weak here,
//! observational elsewhere — a step may instead be absorbed: the moving
//! side may continue any number of extra steps while the other side stays
//! put. Deletion is a separate phenomenon and lives in machine outputs as
//! `⊥` (written `_` in the text format), not in the bisimulation game.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Errors for process construction, parsing, and table lookups.
#[derive(Debug, thiserror::Error)]
pub enum ProcError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("history `{0}` is present but its prefix `{1}` is not; pass --close to take the prefix closure")]
    NotPrefixClosed(String, String),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("depth {0} is out of range (this table covers 1..={1})")]
    InvalidDepth(usize, usize),
    #[error("table would exceed the {0}-entry limit")]
    TableTooLarge(usize),
    #[error("history `{0}` has no recorded entry")]
    MissingEntry(String),
    #[error("output at `{0}` is deleted; the cumulative lifting needs a total function")]
    DeletedOutput(String),
    #[error("output symbol `{0}` has no counterpart in the downstream input alphabet")]
    AlphabetMismatch(String),
    #[error("relation mentions node {node}, but the {side} specification has only {count} nodes")]
    ForeignNode { node: usize, side: &'static str, count: usize },
    #[error("cannot compose a {0} witness with a {1} witness")]
    ModeMismatch(BisimMode, BisimMode),
    #[error("alphabets share the symbol `{0}`; shuffle needs disjoint alphabets (use tagging)")]
    AlphabetCollision(String),
}

// ---------------------------------------------------------------------------
// Alphabets and histories
// ---------------------------------------------------------------------------

/// A nonempty, ordered set of distinct symbol names. Histories and tables
/// refer to symbols by index into an alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, ProcError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(ProcError::Invalid("alphabet must be nonempty".into()));
        }
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if s.is_empty() {
                return Err(ProcError::Invalid("empty symbol name".into()));
            }
            if !seen.insert(s.clone()) {
                return Err(ProcError::Invalid(format!("symbol `{s}` listed twice")));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(String::as_str)
    }

    /// Concatenation, failing on any shared symbol name.
    pub fn union_disjoint(&self, other: &Alphabet) -> Result<Alphabet, ProcError> {
        for s in other.iter() {
            if self.index(s).is_some() {
                return Err(ProcError::AlphabetCollision(s.to_string()));
            }
        }
        Alphabet::new(self.iter().chain(other.iter()))
    }

    /// The same alphabet with every symbol prefixed, for forcing disjointness.
    pub fn tagged(&self, prefix: &str) -> Alphabet {
        Alphabet::new(self.iter().map(|s| format!("{prefix}{s}")))
            .expect("tagging preserves distinctness")
    }

    /// Render a history (symbol indices) as space-separated names.
    /// Indices outside the alphabet — possible in histories quoted by
    /// error messages — render as `#i` instead of panicking.
    pub fn render(&self, h: &[usize]) -> String {
        if h.is_empty() {
            return "()".into();
        }
        h.iter()
            .map(|&i| match self.symbols.get(i) {
                Some(s) => s.clone(),
                None => format!("#{i}"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Left fold over a nonempty history: `init` consumes the head, `cons`
/// folds in each later symbol. Every function on histories that respects
/// concatenation arises this way.
///
/// Panics if `h` is empty — histories have length at least one.
pub fn fold_history<V>(
    h: &[usize],
    init: impl FnOnce(usize) -> V,
    mut cons: impl FnMut(usize, V) -> V,
) -> V {
    let (&head, tail) = h.split_first().expect("a history has at least one symbol");
    tail.iter().fold(init(head), |v, &a| cons(a, v))
}

// ---------------------------------------------------------------------------
// Safety specifications
// ---------------------------------------------------------------------------

/// A prefix-closed set of histories, stored as a trie. Node 0 is the root
/// (the empty history, always present); every other node is one member
/// history. Nodes are numbered by depth, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafetySpec {
    alphabet: Alphabet,
    children: Vec<Vec<(usize, usize)>>, // (symbol, child node), sorted by symbol
    parent: Vec<Option<(usize, usize)>>, // (parent node, symbol)
    depth: Vec<usize>,
}

impl SafetySpec {
    /// The specification containing only the empty history.
    pub fn empty(alphabet: Alphabet) -> SafetySpec {
        SafetySpec {
            alphabet,
            children: vec![Vec::new()],
            parent: vec![None],
            depth: vec![0],
        }
    }

    /// Build from member histories. Unless `close` is set, every proper
    /// prefix of a member must itself be listed; with `close`, the prefix
    /// closure is taken silently.
    pub fn from_histories(
        alphabet: Alphabet,
        histories: &[Vec<usize>],
        close: bool,
    ) -> Result<SafetySpec, ProcError> {
        let mut paths: BTreeSet<Vec<usize>> = BTreeSet::new();
        for h in histories {
            if h.is_empty() {
                return Err(ProcError::Invalid("a history must have at least one symbol".into()));
            }
            for &a in h {
                if a >= alphabet.len() {
                    return Err(ProcError::UnknownSymbol(format!("#{a}")));
                }
            }
            paths.insert(h.clone());
        }
        if !close {
            for h in &paths {
                let prefix = &h[..h.len() - 1];
                if !prefix.is_empty() && !paths.contains(prefix) {
                    return Err(ProcError::NotPrefixClosed(
                        alphabet.render(h),
                        alphabet.render(prefix),
                    ));
                }
            }
        }
        // Take the closure (a no-op when already closed) and number nodes
        // by depth, then lexicographically.
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for h in &paths {
            for k in 1..=h.len() {
                all.insert(h[..k].to_vec());
            }
        }
        let mut ordered: Vec<Vec<usize>> = all.into_iter().collect();
        ordered.sort_by_key(|h| (h.len(), h.clone()));
        let mut ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        ids.insert(Vec::new(), 0);
        let mut spec = SafetySpec::empty(alphabet);
        for h in ordered {
            let id = spec.children.len();
            let parent = ids[&h[..h.len() - 1]];
            let sym = *h.last().expect("nonempty");
            spec.children[parent].push((sym, id));
            spec.children.push(Vec::new());
            spec.parent.push(Some((parent, sym)));
            spec.depth.push(h.len());
            ids.insert(h, id);
        }
        for ch in &mut spec.children {
            ch.sort_unstable();
        }
        Ok(spec)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    pub fn root(&self) -> usize {
        0
    }

    /// Children of a node as `(symbol, node)` pairs, in symbol order.
    pub fn children(&self, node: usize) -> &[(usize, usize)] {
        &self.children[node]
    }

    pub fn child(&self, node: usize, sym: usize) -> Option<usize> {
        self.children[node]
            .iter()
            .find(|&&(s, _)| s == sym)
            .map(|&(_, n)| n)
    }

    pub fn depth_of(&self, node: usize) -> usize {
        self.depth[node]
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// The history spelled by the path from the root to `node`.
    pub fn history_of(&self, node: usize) -> Vec<usize> {
        let mut h = Vec::with_capacity(self.depth[node]);
        let mut v = node;
        while let Some((p, sym)) = self.parent[v] {
            h.push(sym);
            v = p;
        }
        h.reverse();
        h
    }

    pub fn contains(&self, h: &[usize]) -> bool {
        let mut v = 0;
        for &a in h {
            match self.child(v, a) {
                Some(w) => v = w,
                None => return false,
            }
        }
        true
    }

    /// All member histories (the root's empty history excluded), in node order.
    pub fn language(&self) -> Vec<Vec<usize>> {
        (1..self.node_count()).map(|v| self.history_of(v)).collect()
    }

    /// The node and all its descendants, the node first.
    fn descendants_and_self(&self, node: usize) -> Vec<usize> {
        let mut out = vec![node];
        let mut i = 0;
        while i < out.len() {
            let v = out[i];
            i += 1;
            out.extend(self.children[v].iter().map(|&(_, w)| w));
        }
        out
    }
}

impl fmt::Display for SafetySpec {
    /// The `.spec` format: an `alphabet` line, then one member history per
    /// line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alphabet")?;
        for s in self.alphabet.iter() {
            write!(f, " {s}")?;
        }
        for v in 1..self.node_count() {
            write!(f, "\n{}", self.alphabet.render(&self.history_of(v)))?;
        }
        Ok(())
    }
}

/// Parse the `.spec` format: `alphabet <tok> <tok> …`, then one history per
/// line, tokens space-separated, `#` comments. Rejects files that are not
/// prefix-closed unless `close` is set.
pub fn parse_spec(text: &str, close: bool) -> Result<SafetySpec, ProcError> {
    let err = |line: usize, msg: String| ProcError::Parse { line, msg };
    let mut alphabet: Option<Alphabet> = None;
    let mut histories: Vec<Vec<usize>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tok: Vec<&str> = body.split_whitespace().collect();
        if tok[0] == "alphabet" {
            if alphabet.is_some() {
                return Err(err(line, "duplicate alphabet line".into()));
            }
            let a = Alphabet::new(tok[1..].iter().copied())
                .map_err(|e| err(line, e.to_string()))?;
            alphabet = Some(a);
        } else {
            let a = alphabet
                .as_ref()
                .ok_or_else(|| err(line, "the alphabet line must come first".into()))?;
            let h = tok
                .iter()
                .map(|s| {
                    a.index(s)
                        .ok_or_else(|| err(line, format!("symbol `{s}` is not in the alphabet")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            histories.push(h);
        }
    }
    let alphabet =
        alphabet.ok_or_else(|| err(text.lines().count(), "missing alphabet line".into()))?;
    SafetySpec::from_histories(alphabet, &histories, close)
}

// ---------------------------------------------------------------------------
// Machines
// ---------------------------------------------------------------------------

/// A finite-state transducer: on each input symbol it emits one output
/// symbol — or `⊥`, deleting that step's output — and moves to a next
/// state. Both maps are total over states × input symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyMachine {
    input: Alphabet,
    output: Alphabet,
    init: usize,
    /// `trans[state][symbol]` = (emitted output if any, next state).
    trans: Vec<Vec<(Option<usize>, usize)>>,
}

impl MealyMachine {
    pub fn new(
        input: Alphabet,
        output: Alphabet,
        init: usize,
        trans: Vec<Vec<(Option<usize>, usize)>>,
    ) -> Result<MealyMachine, ProcError> {
        let states = trans.len();
        if init >= states {
            return Err(ProcError::Invalid(format!(
                "initial state {init} out of range for {states} states"
            )));
        }
        for (x, row) in trans.iter().enumerate() {
            if row.len() != input.len() {
                return Err(ProcError::Invalid(format!(
                    "state {x} has {} transitions, expected one per input symbol ({})",
                    row.len(),
                    input.len()
                )));
            }
            for &(out, next) in row {
                if next >= states {
                    return Err(ProcError::Invalid(format!(
                        "state {x} jumps to missing state {next}"
                    )));
                }
                if out.is_some_and(|b| b >= output.len()) {
                    return Err(ProcError::Invalid(format!(
                        "state {x} emits a symbol outside the output alphabet"
                    )));
                }
            }
        }
        Ok(MealyMachine { input, output, init, trans })
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn state_count(&self) -> usize {
        self.trans.len()
    }

    /// One transition: the output emitted (if any) and the state entered.
    pub fn step(&self, state: usize, sym: usize) -> (Option<usize>, usize) {
        self.trans[state][sym]
    }

    /// The full trajectory on a history: per step, the output emitted and
    /// the state entered.
    pub fn run(&self, h: &[usize]) -> Result<Vec<(Option<usize>, usize)>, ProcError> {
        let mut state = self.init;
        let mut traj = Vec::with_capacity(h.len());
        for &a in h {
            if a >= self.input.len() {
                return Err(ProcError::UnknownSymbol(format!("#{a}")));
            }
            let (out, next) = self.step(state, a);
            traj.push((out, next));
            state = next;
        }
        Ok(traj)
    }

    /// The output on the last step of the history.
    pub fn last_output(&self, h: &[usize]) -> Result<Option<usize>, ProcError> {
        if h.is_empty() {
            return Err(ProcError::Invalid("a history must have at least one symbol".into()));
        }
        Ok(self.run(h)?.last().expect("nonempty run").0)
    }
}

impl fmt::Display for MealyMachine {
    /// The `.mealy` format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "states {}\ninit {}", self.state_count(), self.init)?;
        for (x, row) in self.trans.iter().enumerate() {
            for (a, &(out, next)) in row.iter().enumerate() {
                let out = match out {
                    Some(b) => self.output.symbol(b),
                    None => "_",
                };
                write!(f, "\ntrans {x} {} {out} {next}", self.input.symbol(a))?;
            }
        }
        Ok(())
    }
}

/// Parse the `.mealy` format: `states n`, `init i`, and one
/// `trans <state> <in> <out|_> <state'>` line per state and input symbol
/// (`_` deletes the output). Alphabets are inferred, symbols numbered in
/// order of first appearance.
pub fn parse_mealy(text: &str) -> Result<MealyMachine, ProcError> {
    let err = |line: usize, msg: String| ProcError::Parse { line, msg };
    let mut states: Option<usize> = None;
    let mut init: Option<usize> = None;
    let mut in_syms: Vec<String> = Vec::new();
    let mut out_syms: Vec<String> = Vec::new();
    // (line, state, input sym, output sym or ⊥, next state)
    let mut lines: Vec<(usize, usize, usize, Option<usize>, usize)> = Vec::new();
    let intern = |pool: &mut Vec<String>, tok: &str| match pool.iter().position(|s| s == tok) {
        Some(i) => i,
        None => {
            pool.push(tok.to_string());
            pool.len() - 1
        }
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tok: Vec<&str> = body.split_whitespace().collect();
        let nat = |s: &str| {
            s.parse::<usize>().map_err(|_| err(line, format!("`{s}` is not a state number")))
        };
        match tok[0] {
            "states" if tok.len() == 2 => {
                if states.replace(nat(tok[1])?).is_some() {
                    return Err(err(line, "duplicate states line".into()));
                }
            }
            "init" if tok.len() == 2 => {
                if init.replace(nat(tok[1])?).is_some() {
                    return Err(err(line, "duplicate init line".into()));
                }
            }
            "trans" if tok.len() == 5 => {
                let a = intern(&mut in_syms, tok[2]);
                let out = if tok[3] == "_" { None } else { Some(intern(&mut out_syms, tok[3])) };
                lines.push((line, nat(tok[1])?, a, out, nat(tok[4])?));
            }
            other => return Err(err(line, format!("unrecognized line `{other} …`"))),
        }
    }
    let last = text.lines().count();
    let states = states.ok_or_else(|| err(last, "missing `states` line".into()))?;
    let init = init.ok_or_else(|| err(last, "missing `init` line".into()))?;
    if states == 0 {
        return Err(err(last, "a machine needs at least one state".into()));
    }
    let input = Alphabet::new(in_syms.iter().cloned())
        .map_err(|_| err(last, "no transitions; cannot infer an input alphabet".into()))?;
    // A machine may never emit; give the output alphabet a placeholder then.
    if out_syms.is_empty() {
        out_syms.push("_out".into());
    }
    let output = Alphabet::new(out_syms).expect("interned symbols are distinct");
    let mut trans: Vec<Vec<Option<(Option<usize>, usize)>>> =
        vec![vec![None; input.len()]; states];
    for (line, x, a, out, next) in lines {
        if x >= states || next >= states {
            return Err(err(line, format!("state out of range 0..{states}")));
        }
        if trans[x][a].replace((out, next)).is_some() {
            return Err(err(
                line,
                format!("state {x} already has a transition on `{}`", input.symbol(a)),
            ));
        }
    }
    let trans = trans
        .into_iter()
        .enumerate()
        .map(|(x, row)| {
            row.into_iter()
                .enumerate()
                .map(|(a, cell)| {
                    cell.ok_or_else(|| {
                        err(
                            last,
                            format!("state {x} has no transition on `{}`", input.symbol(a)),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    MealyMachine::new(input, output, init, trans)
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

/// Entry cap for depth-bounded tables, guarding against runaway alphabets.
const TABLE_CAP: usize = 1 << 20;

fn table_size(alphabet: usize, depth: usize) -> Result<usize, ProcError> {
    let mut total = 0usize;
    let mut layer = 1usize;
    for _ in 0..depth {
        layer = layer
            .checked_mul(alphabet)
            .filter(|&l| l <= TABLE_CAP)
            .ok_or(ProcError::TableTooLarge(TABLE_CAP))?;
        total = total
            .checked_add(layer)
            .filter(|&t| t <= TABLE_CAP)
            .ok_or(ProcError::TableTooLarge(TABLE_CAP))?;
    }
    Ok(total)
}

/// A function from histories (up to a depth) to single outputs, `⊥`
/// recorded as `None`. This is the finite window onto a causal stream
/// function that a machine unfolds to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputTable {
    input: Alphabet,
    output: Alphabet,
    depth: usize,
    entries: BTreeMap<Vec<usize>, Option<usize>>,
}

impl OutputTable {
    /// Build directly from a total assignment; `f` is consulted on every
    /// history up to `depth`.
    pub fn tabulate(
        input: Alphabet,
        output: Alphabet,
        depth: usize,
        mut f: impl FnMut(&[usize]) -> Option<usize>,
    ) -> Result<OutputTable, ProcError> {
        if depth == 0 {
            return Err(ProcError::ZeroDepth);
        }
        table_size(input.len(), depth)?;
        let mut entries = BTreeMap::new();
        let mut h: Vec<usize> = Vec::new();
        fn walk(
            input: usize,
            depth: usize,
            h: &mut Vec<usize>,
            f: &mut impl FnMut(&[usize]) -> Option<usize>,
            entries: &mut BTreeMap<Vec<usize>, Option<usize>>,
        ) {
            if h.len() == depth {
                return;
            }
            for a in 0..input {
                h.push(a);
                entries.insert(h.clone(), f(h));
                walk(input, depth, h, f, entries);
                h.pop();
            }
        }
        walk(input.len(), depth, &mut h, &mut f, &mut entries);
        Ok(OutputTable { input, output, depth, entries })
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Look up one history; `Ok(None)` means the output is deleted there.
    pub fn get(&self, h: &[usize]) -> Result<Option<usize>, ProcError> {
        if h.is_empty() || h.len() > self.depth {
            return Err(ProcError::InvalidDepth(h.len(), self.depth));
        }
        self.entries
            .get(h)
            .copied()
            .ok_or_else(|| ProcError::MissingEntry(self.input.render(h)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, Option<usize>)> {
        self.entries.iter().map(|(h, &o)| (h, o))
    }
}

impl fmt::Display for OutputTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (h, o) in self.iter() {
            if !first {
                writeln!(f)?;
            }
            first = false;
            let out = match o {
                Some(b) => self.output.symbol(b),
                None => "_",
            };
            write!(f, "{} -> {out}", self.input.render(h))?;
        }
        Ok(())
    }
}

/// Unfold a machine into its table of step outputs on every history of
/// length 1 to `depth`: the entry at `a₁…aₙ` is the output the machine
/// emits on the `n`-th step after reading the first `n−1`.
pub fn unfold(m: &MealyMachine, depth: usize) -> Result<OutputTable, ProcError> {
    if depth == 0 {
        return Err(ProcError::ZeroDepth);
    }
    table_size(m.input().len(), depth)?;
    let input = m.input().clone();
    let output = m.output().clone();
    let mut entries = BTreeMap::new();
    // Depth-first over histories, carrying the machine state to avoid
    // re-running prefixes.
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), m.init())];
    while let Some((h, state)) = stack.pop() {
        if h.len() == depth {
            continue;
        }
        for a in 0..input.len() {
            let (out, next) = m.step(state, a);
            let mut ha = h.clone();
            ha.push(a);
            entries.insert(ha.clone(), out);
            stack.push((ha, next));
        }
    }
    Ok(OutputTable { input, output, depth, entries })
}

/// A function from histories to output *histories*, the cumulative form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumTable {
    input: Alphabet,
    output: Alphabet,
    depth: usize,
    entries: BTreeMap<Vec<usize>, Vec<usize>>,
}

impl CumTable {
    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn get(&self, h: &[usize]) -> Result<&[usize], ProcError> {
        if h.is_empty() || h.len() > self.depth {
            return Err(ProcError::InvalidDepth(h.len(), self.depth));
        }
        self.entries
            .get(h)
            .map(Vec::as_slice)
            .ok_or_else(|| ProcError::MissingEntry(self.input.render(h)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &[usize])> {
        self.entries.iter().map(|(h, o)| (h, o.as_slice()))
    }
}

impl fmt::Display for CumTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (h, o) in self.iter() {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{} ->", self.input.render(h))?;
            for &b in o {
                write!(f, " {}", self.output.symbol(b))?;
            }
        }
        Ok(())
    }
}

fn cumulative_core(
    f: &OutputTable,
    depth: usize,
    strict: bool,
) -> Result<CumTable, ProcError> {
    if depth == 0 {
        return Err(ProcError::ZeroDepth);
    }
    if depth > f.depth() {
        return Err(ProcError::InvalidDepth(depth, f.depth()));
    }
    let mut entries: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (h, o) in f.iter() {
        if h.len() > depth {
            continue;
        }
        // The table is sorted, so the proper prefix's entry is already in.
        let mut outs: Vec<usize> = if h.len() == 1 {
            Vec::new()
        } else {
            entries[&h[..h.len() - 1]].clone()
        };
        match o {
            Some(b) => outs.push(b),
            None if strict => return Err(ProcError::DeletedOutput(f.input.render(h))),
            None => {}
        }
        entries.insert(h.clone(), outs);
    }
    Ok(CumTable { input: f.input.clone(), output: f.output.clone(), depth, entries })
}

/// The cumulative lifting of a per-step function: the value at `a₁…aₙ` is
/// the sequence `f(a₁), f(a₁a₂), …, f(a₁…aₙ)`. Length-preserving; a
/// deleted output anywhere in range is a domain error.
pub fn cumulative(f: &OutputTable, depth: usize) -> Result<CumTable, ProcError> {
    cumulative_core(f, depth, true)
}

/// The cumulative lifting for partial outputs: deleted steps contribute
/// nothing, so the value's length can lag behind the input's.
pub fn cumulative_async(f: &OutputTable, depth: usize) -> Result<CumTable, ProcError> {
    cumulative_core(f, depth, false)
}

/// Causal composition: feed the cumulative output history of `f` to `g`,
/// so the composite's step `n` is `g` applied to `f`'s first `n` outputs.
/// `f`'s output symbols are matched to `g`'s input symbols by name.
pub fn compose_causal(
    f: &OutputTable,
    g: &OutputTable,
    depth: usize,
) -> Result<OutputTable, ProcError> {
    if depth == 0 {
        return Err(ProcError::ZeroDepth);
    }
    if depth > f.depth() || depth > g.depth() {
        return Err(ProcError::InvalidDepth(depth, f.depth().min(g.depth())));
    }
    let map: Vec<usize> = f
        .output()
        .iter()
        .map(|s| {
            g.input()
                .index(s)
                .ok_or_else(|| ProcError::AlphabetMismatch(s.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let lifted = cumulative(f, depth)?;
    let mut entries = BTreeMap::new();
    for (h, outs) in lifted.iter() {
        let translated: Vec<usize> = outs.iter().map(|&b| map[b]).collect();
        entries.insert(h.clone(), g.get(&translated)?);
    }
    Ok(OutputTable {
        input: f.input.clone(),
        output: g.output.clone(),
        depth,
        entries,
    })
}

// ---------------------------------------------------------------------------
// Bisimulation
// ---------------------------------------------------------------------------

/// Which matching discipline a relation between specifications obeys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BisimMode {
    /// Every step answered by a step, in lockstep.
    Strong,
    /// A step may also be absorbed: the mover continues descending while
    /// the other side stays put.
    Weak,
}

impl fmt::Display for BisimMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BisimMode::Strong => "strong",
            BisimMode::Weak => "weak",
        })
    }
}

/// A relation between the trie nodes of two specifications, tagged with
/// the mode whose clause it is meant to satisfy. A witness that actually
/// relates the roots is a morphism between the specifications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimedRelation {
    mode: BisimMode,
    pairs: BTreeSet<(usize, usize)>,
}

impl TimedRelation {
    pub fn new(mode: BisimMode, pairs: impl IntoIterator<Item = (usize, usize)>) -> TimedRelation {
        TimedRelation { mode, pairs: pairs.into_iter().collect() }
    }

    pub fn mode(&self) -> BisimMode {
        self.mode
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Whether the relation connects the two roots — the difference
    /// between a bare relation and a morphism witness.
    pub fn relates_roots(&self) -> bool {
        self.contains(0, 0)
    }
}

/// One clause evaluation: does the pair `(u, v)` survive given the
/// current relation? `desc_s`/`desc_t` are the per-node
/// descendants-and-self lists, consulted only in weak mode.
fn clause_holds(
    s: &SafetySpec,
    t: &SafetySpec,
    rel: &[bool],
    nt: usize,
    u: usize,
    v: usize,
    mode: BisimMode,
    desc_s: &[Vec<usize>],
    desc_t: &[Vec<usize>],
) -> bool {
    let forward = s.children(u).iter().all(|&(_, u1)| {
        t.children(v).iter().any(|&(_, v1)| rel[u1 * nt + v1])
            || (mode == BisimMode::Weak && desc_s[u1].iter().any(|&u2| rel[u2 * nt + v]))
    });
    let backward = t.children(v).iter().all(|&(_, v1)| {
        s.children(u).iter().any(|&(_, u1)| rel[u1 * nt + v1])
            || (mode == BisimMode::Weak && desc_t[v1].iter().any(|&v2| rel[u * nt + v2]))
    });
    forward && backward
}

/// The greatest bisimulation of the given mode between two
/// specifications, restricted to the pairs reachable from the root pair
/// by its own matching moves; `None` if the roots themselves fall out of
/// the fixpoint. A returned witness is total and surjective on every
/// depth layer it touches.
pub fn greatest_bisim(s: &SafetySpec, t: &SafetySpec, mode: BisimMode) -> Option<TimedRelation> {
    let (ns, nt) = (s.node_count(), t.node_count());
    let weak = mode == BisimMode::Weak;
    let desc = |spec: &SafetySpec, on: bool| -> Vec<Vec<usize>> {
        if on {
            (0..spec.node_count()).map(|v| spec.descendants_and_self(v)).collect()
        } else {
            Vec::new()
        }
    };
    let (desc_s, desc_t) = (desc(s, weak), desc(t, weak));
    let mut rel = vec![true; ns * nt];
    loop {
        let mut changed = false;
        for u in 0..ns {
            for v in 0..nt {
                if rel[u * nt + v]
                    && !clause_holds(s, t, &rel, nt, u, v, mode, &desc_s, &desc_t)
                {
                    rel[u * nt + v] = false;
                    changed = true;
                }
            }
        }
        if !rel[0] {
            return None;
        }
        if !changed {
            break;
        }
    }
    // Walk the witnessing moves from the root pair.
    let mut seen = BTreeSet::new();
    let mut stack = vec![(0usize, 0usize)];
    seen.insert((0, 0));
    while let Some((u, v)) = stack.pop() {
        let push = |seen: &mut BTreeSet<(usize, usize)>,
                        stack: &mut Vec<(usize, usize)>,
                        p: (usize, usize)| {
            if rel[p.0 * nt + p.1] && seen.insert(p) {
                stack.push(p);
            }
        };
        for &(_, u1) in s.children(u) {
            for &(_, v1) in t.children(v) {
                push(&mut seen, &mut stack, (u1, v1));
            }
            if weak {
                for &u2 in &desc_s[u1] {
                    push(&mut seen, &mut stack, (u2, v));
                }
            }
        }
        if weak {
            for &(_, v1) in t.children(v) {
                for &v2 in &desc_t[v1] {
                    push(&mut seen, &mut stack, (u, v2));
                }
            }
        }
    }
    Some(TimedRelation { mode, pairs: seen })
}

/// Check a user-supplied relation pointwise against the mode's clause.
/// True means every pair satisfies it — the empty relation passes
/// vacuously, so pair this with [`TimedRelation::relates_roots`] to tell
/// a bare relation from a morphism witness.
pub fn verify_bisim(
    r: &TimedRelation,
    s: &SafetySpec,
    t: &SafetySpec,
    mode: BisimMode,
) -> Result<bool, ProcError> {
    let (ns, nt) = (s.node_count(), t.node_count());
    for &(u, v) in r.pairs() {
        if u >= ns {
            return Err(ProcError::ForeignNode { node: u, side: "left", count: ns });
        }
        if v >= nt {
            return Err(ProcError::ForeignNode { node: v, side: "right", count: nt });
        }
    }
    let weak = mode == BisimMode::Weak;
    let mut rel = vec![false; ns * nt];
    for &(u, v) in r.pairs() {
        rel[u * nt + v] = true;
    }
    let desc = |spec: &SafetySpec, on: bool| -> Vec<Vec<usize>> {
        if on {
            (0..spec.node_count()).map(|v| spec.descendants_and_self(v)).collect()
        } else {
            Vec::new()
        }
    };
    let (desc_s, desc_t) = (desc(s, weak), desc(t, weak));
    Ok(r.pairs()
        .iter()
        .all(|&(u, v)| clause_holds(s, t, &rel, nt, u, v, mode, &desc_s, &desc_t)))
}

/// Relational composition of two witnesses of the same mode: `(x, z)` is
/// related iff some middle node connects them. Composing verified
/// witnesses yields a verified witness.
pub fn compose_rel(r1: &TimedRelation, r2: &TimedRelation) -> Result<TimedRelation, ProcError> {
    if r1.mode() != r2.mode() {
        return Err(ProcError::ModeMismatch(r1.mode(), r2.mode()));
    }
    let mut by_mid: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(y, z) in r2.pairs() {
        by_mid.entry(y).or_default().push(z);
    }
    let mut pairs = BTreeSet::new();
    for &(x, y) in r1.pairs() {
        if let Some(zs) = by_mid.get(&y) {
            pairs.extend(zs.iter().map(|&z| (x, z)));
        }
    }
    Ok(TimedRelation { mode: r1.mode(), pairs })
}

// ---------------------------------------------------------------------------
// Shuffle
// ---------------------------------------------------------------------------

fn shuffle_core(s: &SafetySpec, t: &SafetySpec, alphabet: Alphabet) -> SafetySpec {
    // Breadth-first walk of the interleaving trie. Distinct interleavings
    // are distinct histories, so each queue entry is its own trie node,
    // carrying the pair of component states it has reached.
    let shift = s.alphabet().len();
    let mut out = SafetySpec::empty(alphabet);
    let mut queue = std::collections::VecDeque::from([(0usize, 0usize, 0usize)]);
    while let Some((here, u, v)) = queue.pop_front() {
        let steps = s
            .children(u)
            .iter()
            .map(|&(a, u1)| (a, u1, v))
            .chain(t.children(v).iter().map(|&(b, v1)| (shift + b, u, v1)));
        for (sym, u1, v1) in steps {
            let id = out.children.len();
            out.children[here].push((sym, id));
            out.children.push(Vec::new());
            out.parent.push(Some((here, sym)));
            out.depth.push(out.depth[here] + 1);
            queue.push_back((id, u1, v1));
        }
    }
    out
}

/// Interleave two specifications over disjoint alphabets: the result
/// holds every history whose restriction to either alphabet is a member
/// (or empty) on that side. Fails if the alphabets share a name.
pub fn shuffle(s: &SafetySpec, t: &SafetySpec) -> Result<SafetySpec, ProcError> {
    let alphabet = s.alphabet().union_disjoint(t.alphabet())?;
    Ok(shuffle_core(s, t, alphabet))
}

/// Interleave after forcing disjointness by tagging: left symbols get the
/// prefix `l:`, right symbols `r:`.
pub fn shuffle_tagged(s: &SafetySpec, t: &SafetySpec) -> SafetySpec {
    let left = s.alphabet().tagged("l:");
    let right = t.alphabet().tagged("r:");
    let alphabet = left
        .union_disjoint(&right)
        .expect("tag prefixes make the alphabets disjoint");
    shuffle_core(s, t, alphabet)
}
