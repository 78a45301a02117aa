//! The `coind` command: one binary over the whole toolkit, grouped by
//! module. Reports go to standard output and diagnostics to standard
//! error; the exit code is the machine-readable channel — 0 for success
//! or a true check, 1 for a check that came back false (not bisimilar,
//! not ≤, out of fuel), 2 for unusable input.

use std::fmt::Display;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use coind::catcomp::{self, EvalResult, StepResult, Term};
use coind::games::{self, SignedGame, StratMode};
use coind::hfgraph::{self, HsMode};
use coind::intcat::{self, FinRel, FinRelCat, IntMor, IntObj, ZPair};
use coind::proc::{self, BisimMode};
use coind::reals::{self, ExtReal, SignString};

#[derive(Parser)]
#[command(
    name = "coind",
    version,
    about = "Bisimulation, hypersets, signed games, sign-string reals, polarized relations, and a toy computer"
)]
struct Cli {
    #[command(subcommand)]
    command: Group,
}

#[derive(Subcommand)]
enum Group {
    /// Hereditarily finite sets as pointed graphs
    #[command(subcommand)]
    Hfset(HfsetCmd),
    /// Safety specifications and causal stream functions
    #[command(subcommand)]
    Proc(ProcCmd),
    /// Signed games and their order
    #[command(subcommand)]
    Game(GameCmd),
    /// Sign strings and the dyadic numbers they denote
    #[command(subcommand)]
    Real(RealCmd),
    /// Polarized objects over traced relations
    #[command(subcommand)]
    Int(IntCmd),
    /// Programs as λ-terms
    #[command(subcommand)]
    Comp(CompCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum SetMode {
    Strong,
    Reflexive,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecMode {
    Strong,
    Weak,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyMode {
    Sync,
    Async,
}

#[derive(Subcommand)]
enum HfsetCmd {
    /// Canonicalize a graph: print the quotient and its digest
    Canon { file: String },
    /// Decide bisimilarity of two graphs (exit 1 when they differ)
    Bisim {
        #[arg(long, value_enum, default_value_t = SetMode::Strong)]
        mode: SetMode,
        a: String,
        b: String,
    },
    /// Count the canonical sets in a powerset-tower stage
    Tower {
        stage: usize,
        /// Permit stage 4 (65536 sets) despite its cost
        #[arg(long)]
        allow_stage4: bool,
    },
}

#[derive(Subcommand)]
enum ProcCmd {
    /// Tabulate a machine's step outputs over all histories up to a depth
    Unfold {
        #[arg(long)]
        depth: usize,
        machine: String,
    },
    /// Tabulate cumulative output histories
    Cumulative {
        #[arg(long)]
        depth: usize,
        /// Skip deleted outputs instead of rejecting them
        #[arg(long = "async")]
        skip_deleted: bool,
        machine: String,
    },
    /// Compute the greatest bisimulation between two specifications
    /// (exit 1 when none relates the roots)
    Bisim {
        #[arg(long, value_enum, default_value_t = SpecMode::Strong)]
        mode: SpecMode,
        /// Close non-prefix-closed inputs instead of rejecting them
        #[arg(long)]
        close: bool,
        s: String,
        t: String,
    },
    /// Causal composition of two machines' behaviors at a depth
    Compose {
        #[arg(long)]
        depth: usize,
        f: String,
        g: String,
    },
    /// Interleave two specifications over disjoint alphabets
    Shuffle {
        /// Close non-prefix-closed inputs instead of rejecting them
        #[arg(long)]
        close: bool,
        /// Tag the two alphabets (`l:`/`r:`) to force disjointness
        #[arg(long)]
        tag: bool,
        s: String,
        t: String,
    },
}

// Game and sign-string arguments may begin with `-` (negative dyadics,
// minus signs), so every such positional allows hyphen values.
#[derive(Subcommand)]
enum GameCmd {
    /// Decide whether the first game is ≤ the second (exit 1 when not)
    Leq {
        #[arg(allow_hyphen_values = true)]
        s: String,
        #[arg(allow_hyphen_values = true)]
        t: String,
    },
    /// Exhibit a hyperstrategy relation (exit 1 when none exists)
    Strategy {
        #[arg(long, value_enum, default_value_t = StrategyMode::Sync)]
        mode: StrategyMode,
        #[arg(allow_hyphen_values = true)]
        s: String,
        #[arg(allow_hyphen_values = true)]
        t: String,
    },
    /// Negate a game
    Neg {
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Sum of two games
    Add {
        #[arg(allow_hyphen_values = true)]
        s: String,
        #[arg(allow_hyphen_values = true)]
        t: String,
    },
    /// Product of two numeric games
    Mul {
        #[arg(allow_hyphen_values = true)]
        s: String,
        #[arg(allow_hyphen_values = true)]
        t: String,
    },
    /// Sign expansion of a numeric game's value
    Value {
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Check hereditary ε-transitivity (exit 1 when it fails)
    Transitive {
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
}

#[derive(Subcommand)]
enum RealCmd {
    /// Value of a sign string, as an exact dyadic
    Phi {
        #[arg(allow_hyphen_values = true)]
        signs: String,
    },
    /// Sign expansion of a dyadic; with --depth, a prefix for any rational
    Encode {
        #[arg(long)]
        depth: Option<usize>,
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Compare two sign strings positionwise: prints LT, EQ, or GT
    Cmp {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// The game a sign string denotes
    Gamma {
        #[arg(allow_hyphen_values = true)]
        signs: String,
    },
    /// Recover the sign expansion of a game's value
    Upsilon {
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
}

#[derive(Subcommand)]
enum IntCmd {
    /// Trace out the feedback block of a relation on labeled carriers
    Trace {
        /// Block sizes, e.g. `A=2,Y=1,B=2`
        #[arg(long)]
        blocks: String,
        /// Edges `a0 -> b1, a1 -> y0, y0 -> y1, …`
        edges: String,
    },
    /// Compose two polarized morphisms over finite relations
    Compose {
        /// Source object sizes `MINUS,PLUS`
        #[arg(long)]
        a: String,
        /// Middle object sizes `MINUS,PLUS`
        #[arg(long)]
        b: String,
        /// Target object sizes `MINUS,PLUS`
        #[arg(long)]
        c: String,
        /// Base of the first morphism: edges `i -> j` on A₋⊗B₊ → B₋⊗A₊
        f: String,
        /// Base of the second morphism: edges `i -> j` on B₋⊗C₊ → C₋⊗B₊
        g: String,
    },
    /// Normalize a formal difference of naturals
    Znorm { minus: u64, plus: u64 },
}

#[derive(Subcommand)]
enum CompCmd {
    /// Evaluate a closed program (exit 1 on fuel exhaustion)
    Eval {
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
        program: String,
    },
    /// Fix a program's first argument
    Specialize { program: String, argument: String },
    /// Run one transducer step: print the output and the residual program
    Step {
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
        program: String,
        input: String,
    },
    /// Close a self-referential definition
    Fix { transformer: String },
    /// Compile a machine into one self-referential program per state
    Compile { machine: String },
}

/// Outcome of a dispatched command that parsed cleanly: either plain
/// success, or a check that came back false (exit 1).
enum Verdict {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version go to stdout with code 0; everything else
            // is a usage problem: code 2, like any other bad input.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Group) -> Result<Verdict, String> {
    match cmd {
        Group::Hfset(c) => run_hfset(c),
        Group::Proc(c) => run_proc(c),
        Group::Game(c) => run_game(c),
        Group::Real(c) => run_real(c),
        Group::Int(c) => run_int(c),
        Group::Comp(c) => run_comp(c),
    }
}

// ---------------------------------------------------------------------------
// Argument helpers
// ---------------------------------------------------------------------------

fn read_file(path: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

/// Flatten a library error into the diagnostic channel.
fn lib<T, E: Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// A game argument: a path to a `.sg` file, or an inline literal —
/// `{…|…}` with nesting (a decorative trailing `.sg` is tolerated) or a
/// dyadic number.
fn game_arg(arg: &str) -> Result<SignedGame, String> {
    if Path::new(arg).is_file() {
        return lib(games::parse_sg(&read_file(arg)?));
    }
    let trimmed = arg.trim();
    let text = match trimmed.strip_suffix(".sg") {
        Some(stem) if trimmed.starts_with('{') => stem,
        Some(_) => return Err(format!("file not found: {arg}")),
        None => trimmed,
    };
    lib(games::parse_literal(text))
}

/// A program argument: a path to a `.tm` file, or an inline expression.
fn term_arg(arg: &str) -> Result<Term, String> {
    if Path::new(arg).is_file() {
        return lib(catcomp::parse_tm(&read_file(arg)?));
    }
    if arg.ends_with(".tm") {
        return Err(format!("file not found: {arg}"));
    }
    lib(catcomp::parse_tm(arg))
}

fn spec_arg(path: &str, close: bool) -> Result<proc::SafetySpec, String> {
    lib(proc::parse_spec(&read_file(path)?, close))
}

fn mealy_arg(path: &str) -> Result<proc::MealyMachine, String> {
    lib(proc::parse_mealy(&read_file(path)?))
}

fn signs_arg(arg: &str) -> Result<SignString, String> {
    lib(arg.trim().parse::<SignString>())
}

/// Split an edge-list argument into `lhs -> rhs` items.
fn edge_items(s: &str) -> Result<Vec<(&str, &str)>, String> {
    s.split([',', ';', '\n'])
        .map(str::trim)
        .filter(|item| !item.is_empty())
        .map(|item| {
            item.split_once("->")
                .map(|(l, r)| (l.trim(), r.trim()))
                .ok_or_else(|| format!("`{item}`: expected `src -> dst`"))
        })
        .collect()
}

fn verdict(pass: bool) -> Result<Verdict, String> {
    Ok(if pass { Verdict::Pass } else { Verdict::Fail })
}

// ---------------------------------------------------------------------------
// Dispatch, one group at a time
// ---------------------------------------------------------------------------

fn run_hfset(cmd: HfsetCmd) -> Result<Verdict, String> {
    match cmd {
        HfsetCmd::Canon { file } => {
            let g = lib(hfgraph::parse_hg(&read_file(&file)?))?;
            let canonical = hfgraph::canon(&g);
            println!("{}", canonical.graph());
            println!("# digest {}", canonical.digest());
            Ok(Verdict::Pass)
        }
        HfsetCmd::Bisim { mode, a, b } => {
            let mode = match mode {
                SetMode::Strong => HsMode::Strong,
                SetMode::Reflexive => HsMode::Reflexive,
            };
            let ga = lib(hfgraph::parse_hg(&read_file(&a)?))?;
            let gb = lib(hfgraph::parse_hg(&read_file(&b)?))?;
            let same = hfgraph::bisimilar(&ga, &gb, mode);
            println!("{}", if same { "bisimilar" } else { "not bisimilar" });
            verdict(same)
        }
        HfsetCmd::Tower { stage, allow_stage4 } => {
            if stage == 4 && !allow_stage4 {
                return Err("stage 4 holds 65536 sets; pass --allow-stage4 to compute it".into());
            }
            let sets = lib(hfgraph::pow_tower(stage, allow_stage4))?;
            println!("stage {stage}: {} sets", sets.len());
            Ok(Verdict::Pass)
        }
    }
}

fn run_proc(cmd: ProcCmd) -> Result<Verdict, String> {
    match cmd {
        ProcCmd::Unfold { depth, machine } => {
            let m = mealy_arg(&machine)?;
            let table = lib(proc::unfold(&m, depth))?;
            println!("{table}");
            Ok(Verdict::Pass)
        }
        ProcCmd::Cumulative { depth, skip_deleted, machine } => {
            let m = mealy_arg(&machine)?;
            let table = lib(proc::unfold(&m, depth))?;
            let lifted = lib(if skip_deleted {
                proc::cumulative_async(&table, depth)
            } else {
                proc::cumulative(&table, depth)
            })?;
            println!("{lifted}");
            Ok(Verdict::Pass)
        }
        ProcCmd::Bisim { mode, close, s, t } => {
            let mode = match mode {
                SpecMode::Strong => BisimMode::Strong,
                SpecMode::Weak => BisimMode::Weak,
            };
            let s = spec_arg(&s, close)?;
            let t = spec_arg(&t, close)?;
            match proc::greatest_bisim(&s, &t, mode) {
                Some(rel) => {
                    for &(u, v) in rel.pairs() {
                        println!(
                            "{} ~ {}",
                            s.alphabet().render(&s.history_of(u)),
                            t.alphabet().render(&t.history_of(v)),
                        );
                    }
                    Ok(Verdict::Pass)
                }
                None => {
                    println!("not bisimilar");
                    Ok(Verdict::Fail)
                }
            }
        }
        ProcCmd::Compose { depth, f, g } => {
            let mf = mealy_arg(&f)?;
            let mg = mealy_arg(&g)?;
            let tf = lib(proc::unfold(&mf, depth))?;
            let tg = lib(proc::unfold(&mg, depth))?;
            let composite = lib(proc::compose_causal(&tf, &tg, depth))?;
            println!("{composite}");
            Ok(Verdict::Pass)
        }
        ProcCmd::Shuffle { close, tag, s, t } => {
            let s = spec_arg(&s, close)?;
            let t = spec_arg(&t, close)?;
            let woven = if tag {
                proc::shuffle_tagged(&s, &t)
            } else {
                lib(proc::shuffle(&s, &t))?
            };
            println!("{woven}");
            Ok(Verdict::Pass)
        }
    }
}

fn run_game(cmd: GameCmd) -> Result<Verdict, String> {
    match cmd {
        GameCmd::Leq { s, t } => {
            let holds = lib(games::leq(&game_arg(&s)?, &game_arg(&t)?))?;
            println!("{holds}");
            verdict(holds)
        }
        GameCmd::Strategy { mode, s, t } => {
            let mode = match mode {
                StrategyMode::Sync => StratMode::Sync,
                StrategyMode::Async => StratMode::Async,
            };
            match games::hyperstrategy(&game_arg(&s)?, &game_arg(&t)?, mode) {
                Some(rel) => {
                    for &(u, v) in rel.pairs() {
                        println!("{u} ~ {v}");
                    }
                    Ok(Verdict::Pass)
                }
                None => {
                    println!("no hyperstrategy");
                    Ok(Verdict::Fail)
                }
            }
        }
        GameCmd::Neg { g } => {
            println!("{}", games::neg(&game_arg(&g)?));
            Ok(Verdict::Pass)
        }
        GameCmd::Add { s, t } => {
            println!("{}", lib(games::add(&game_arg(&s)?, &game_arg(&t)?))?);
            Ok(Verdict::Pass)
        }
        GameCmd::Mul { s, t } => {
            println!("{}", lib(games::mul(&game_arg(&s)?, &game_arg(&t)?))?);
            Ok(Verdict::Pass)
        }
        GameCmd::Value { g } => {
            println!("{}", lib(reals::upsilon(&game_arg(&g)?))?);
            Ok(Verdict::Pass)
        }
        GameCmd::Transitive { g } => {
            let yes = lib(games::is_transitive(&game_arg(&g)?))?;
            println!("{yes}");
            verdict(yes)
        }
    }
}

fn run_real(cmd: RealCmd) -> Result<Verdict, String> {
    match cmd {
        RealCmd::Phi { signs } => {
            println!("{}", reals::phi(&signs_arg(&signs)?));
            Ok(Verdict::Pass)
        }
        RealCmd::Encode { depth, value } => {
            let expansion = match depth {
                Some(d) => {
                    let r = lib(reals::parse_rational(&value))?;
                    reals::encode_approx(&r, d)
                }
                None => {
                    let v: ExtReal = lib(value.trim().parse())?;
                    reals::encode(&v)
                }
            };
            println!("{expansion}");
            Ok(Verdict::Pass)
        }
        RealCmd::Cmp { a, b } => {
            let verdict = match reals::lex_cmp(&signs_arg(&a)?, &signs_arg(&b)?) {
                std::cmp::Ordering::Less => "LT",
                std::cmp::Ordering::Equal => "EQ",
                std::cmp::Ordering::Greater => "GT",
            };
            println!("{verdict}");
            Ok(Verdict::Pass)
        }
        RealCmd::Gamma { signs } => {
            println!("{}", lib(reals::gamma(&signs_arg(&signs)?))?);
            Ok(Verdict::Pass)
        }
        RealCmd::Upsilon { g } => {
            println!("{}", lib(reals::upsilon(&game_arg(&g)?))?);
            Ok(Verdict::Pass)
        }
    }
}

/// Parse `A=2,Y=1,B=2` into the three block sizes.
fn parse_blocks(s: &str) -> Result<(usize, usize, usize), String> {
    let (mut a, mut y, mut b) = (None, None, None);
    for item in s.split(',') {
        let (name, size) = item
            .split_once('=')
            .ok_or_else(|| format!("`{item}`: expected NAME=SIZE"))?;
        let n: usize = size.trim().parse().map_err(|_| format!("`{size}`: bad size"))?;
        match name.trim().to_ascii_uppercase().as_str() {
            "A" => a = Some(n),
            "Y" => y = Some(n),
            "B" => b = Some(n),
            other => return Err(format!("unknown block `{other}` (expected A, Y, B)")),
        }
    }
    match (a, y, b) {
        (Some(a), Some(y), Some(b)) => Ok((a, y, b)),
        _ => Err("blocks must set all of A, Y, B".into()),
    }
}

/// Parse `MINUS,PLUS` carrier sizes for one polarized object.
fn parse_polarity(s: &str, name: &str) -> Result<IntObj<usize>, String> {
    let (m, p) = s
        .split_once(',')
        .ok_or_else(|| format!("--{name}: expected MINUS,PLUS"))?;
    let minus: usize = m.trim().parse().map_err(|_| format!("--{name}: `{m}`: bad size"))?;
    let plus: usize = p.trim().parse().map_err(|_| format!("--{name}: `{p}`: bad size"))?;
    Ok(IntObj::new(minus, plus))
}

/// Parse a plain-index edge list into a relation of the given shape.
fn parse_base(edges: &str, source: usize, target: usize, name: &str) -> Result<FinRel, String> {
    let mut pairs = Vec::new();
    for (l, r) in edge_items(edges)? {
        let i: usize = l.parse().map_err(|_| format!("{name}: `{l}`: bad index"))?;
        let j: usize = r.parse().map_err(|_| format!("{name}: `{r}`: bad index"))?;
        pairs.push((i, j));
    }
    lib(FinRel::new(source, target, pairs))
}

fn run_int(cmd: IntCmd) -> Result<Verdict, String> {
    match cmd {
        IntCmd::Trace { blocks, edges } => {
            let (na, ny, nb) = parse_blocks(&blocks)?;
            // Sources live on A ⊕ Y (labels a<i>, y<j>), targets on
            // B ⊕ Y (labels b<k>, y<j>).
            let endpoint = |tok: &str, first: char, n_first: usize, n_y: usize| {
                let (tag, idx) = tok.split_at(1);
                let idx: usize = idx
                    .parse()
                    .map_err(|_| format!("`{tok}`: expected a label like `{first}0` or `y0`"))?;
                match tag.chars().next() {
                    Some(t) if t.eq_ignore_ascii_case(&first) && idx < n_first => Ok(idx),
                    Some('y') | Some('Y') if idx < n_y => Ok(n_first + idx),
                    _ => Err(format!("`{tok}`: out of range for blocks {first}={n_first}, y={n_y}")),
                }
            };
            let mut pairs = Vec::new();
            for (l, r) in edge_items(&edges)? {
                pairs.push((endpoint(l, 'a', na, ny)?, endpoint(r, 'b', nb, ny)?));
            }
            let rel = lib(FinRel::new(na + ny, nb + ny, pairs))?;
            let traced = lib(rel.trace(na, nb, ny))?;
            for (i, j) in traced.pairs() {
                println!("a{i} -> b{j}");
            }
            Ok(Verdict::Pass)
        }
        IntCmd::Compose { a, b, c, f, g } => {
            let a = parse_polarity(&a, "a")?;
            let b = parse_polarity(&b, "b")?;
            let c = parse_polarity(&c, "c")?;
            let f = IntMor {
                src: a.clone(),
                tgt: b.clone(),
                base: parse_base(&f, a.minus + b.plus, b.minus + a.plus, "f")?,
            };
            let g = IntMor {
                src: b.clone(),
                tgt: c.clone(),
                base: parse_base(&g, b.minus + c.plus, c.minus + b.plus, "g")?,
            };
            let composite = lib(intcat::int_compose(&FinRelCat, &f, &g))?;
            for (i, j) in composite.base.pairs() {
                println!("{i} -> {j}");
            }
            Ok(Verdict::Pass)
        }
        IntCmd::Znorm { minus, plus } => {
            println!("{}", intcat::znorm(&ZPair::new(minus, plus)));
            Ok(Verdict::Pass)
        }
    }
}

fn run_comp(cmd: CompCmd) -> Result<Verdict, String> {
    match cmd {
        CompCmd::Eval { fuel, program } => {
            match lib(catcomp::eval(&term_arg(&program)?, fuel))? {
                EvalResult::Value(v) => {
                    println!("{v}");
                    Ok(Verdict::Pass)
                }
                EvalResult::OutOfFuel => {
                    println!("out of fuel");
                    Ok(Verdict::Fail)
                }
            }
        }
        CompCmd::Specialize { program, argument } => {
            let specialized =
                lib(catcomp::specialize(&term_arg(&program)?, &term_arg(&argument)?))?;
            println!("{specialized}");
            Ok(Verdict::Pass)
        }
        CompCmd::Step { fuel, program, input } => {
            match lib(catcomp::step(&term_arg(&program)?, &term_arg(&input)?, fuel))? {
                StepResult::Step { output, residual } => {
                    println!("output {output}");
                    println!("residual {residual}");
                    Ok(Verdict::Pass)
                }
                StepResult::OutOfFuel => {
                    println!("out of fuel");
                    Ok(Verdict::Fail)
                }
            }
        }
        CompCmd::Fix { transformer } => {
            println!("{}", lib(catcomp::fix(&term_arg(&transformer)?))?);
            Ok(Verdict::Pass)
        }
        CompCmd::Compile { machine } => {
            let programs = lib(catcomp::compile_mealy(&mealy_arg(&machine)?))?;
            for (state, program) in programs.iter().enumerate() {
                println!("state {state} {program}");
            }
            Ok(Verdict::Pass)
        }
    }
}
