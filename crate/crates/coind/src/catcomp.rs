//! Programs as terms: an untyped λ-calculus with numerals and pairs,
//! evaluated by a deterministic, fuel-bounded, normal-order strategy.
//!
//! The strategy is weak: the leftmost-outermost redex is contracted,
//! arguments are passed unevaluated, and reduction never goes under a
//! binder (it does go inside pairs and primitive arguments). The
//! evaluator shares the work of repeated argument uses internally —
//! forcing a thunk twice costs one evaluation — but a convergent run
//! produces exactly the normal form plain leftmost-outermost rewriting
//! would; sharing only lowers how much fuel convergence needs. Running
//! out of fuel is an ordinary outcome, not an error: divergence is
//! approximated, never decided.
//!
//! On top of evaluation sit the staging operations: [`specialize`]
//! fixes a program's first argument, [`step`] reads a program as a
//! transducer step returning an output and a residual program, [`fix`]
//! closes a self-referential definition, and [`compile_mealy`] turns a
//! finite machine into one such self-referential program per state.

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

use crate::proc::MealyMachine;

/// Errors for term parsing, malformed programs, and protocol violations.
#[derive(Debug, thiserror::Error)]
pub enum CatcompError {
    #[error("{0}")]
    Parse(String),
    #[error("term is not closed: variable index {0} escapes")]
    NotClosed(usize),
    #[error("fuel must be positive")]
    ZeroFuel,
    #[error("{0}")]
    Protocol(String),
    #[error("{0}")]
    Invalid(String),
}

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

/// A term with de Bruijn variables: `Var(0)` is the innermost binder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Lam(Box<Term>),
    App(Box<Term>, Box<Term>),
    Lit(u64),
    Succ(Box<Term>),
    Pred(Box<Term>),
    Ifz(Box<Term>, Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
}

impl Term {
    pub fn lam(body: Term) -> Term {
        Term::Lam(Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn pred(t: Term) -> Term {
        Term::Pred(Box::new(t))
    }

    pub fn ifz(c: Term, zero: Term, nonzero: Term) -> Term {
        Term::Ifz(Box::new(c), Box::new(zero), Box::new(nonzero))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn fst(t: Term) -> Term {
        Term::Fst(Box::new(t))
    }

    pub fn snd(t: Term) -> Term {
        Term::Snd(Box::new(t))
    }

    /// The smallest context depth under which every variable is bound;
    /// 0 means closed.
    pub fn free_depth(&self) -> usize {
        fn walk(t: &Term, depth: usize) -> usize {
            match t {
                Term::Var(k) => (k + 1).saturating_sub(depth),
                Term::Lam(b) => walk(b, depth + 1),
                Term::App(f, a) | Term::Pair(f, a) => walk(f, depth).max(walk(a, depth)),
                Term::Lit(_) => 0,
                Term::Succ(t) | Term::Pred(t) | Term::Fst(t) | Term::Snd(t) => walk(t, depth),
                Term::Ifz(c, a, b) => walk(c, depth).max(walk(a, depth)).max(walk(b, depth)),
            }
        }
        walk(self, 0)
    }

    pub fn is_closed(&self) -> bool {
        self.free_depth() == 0
    }

    fn require_closed(&self) -> Result<(), CatcompError> {
        match self.free_depth() {
            0 => Ok(()),
            d => Err(CatcompError::NotClosed(d - 1)),
        }
    }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------
//
// A call-by-need machine. Suspended arguments become shared, memoized
// thunks; wherever the weak leftmost-outermost strategy would contract
// a redex, the machine either ticks fuel (β, numeral ops, conditional
// dispatch, projections) or re-reads the untouched original term
// (conditional branches of a stuck `Ifz`, bodies of result λs). The
// readback in `quote`/`resolve` always substitutes from the suspended
// source terms, never from forced memos, so the normal form is the one
// plain term rewriting would produce.

/// `Term` mirrored into shared nodes, so descent and suspension are
/// pointer copies rather than tree clones.
enum RTerm {
    Var(usize),
    Lam(Rc<RTerm>),
    App(Rc<RTerm>, Rc<RTerm>),
    Lit(u64),
    Succ(Rc<RTerm>),
    Pred(Rc<RTerm>),
    Ifz(Rc<RTerm>, Rc<RTerm>, Rc<RTerm>),
    Pair(Rc<RTerm>, Rc<RTerm>),
    Fst(Rc<RTerm>),
    Snd(Rc<RTerm>),
}

fn rterm_of(t: &Term) -> Rc<RTerm> {
    Rc::new(match t {
        Term::Var(k) => RTerm::Var(*k),
        Term::Lam(b) => RTerm::Lam(rterm_of(b)),
        Term::App(f, a) => RTerm::App(rterm_of(f), rterm_of(a)),
        Term::Lit(n) => RTerm::Lit(*n),
        Term::Succ(i) => RTerm::Succ(rterm_of(i)),
        Term::Pred(i) => RTerm::Pred(rterm_of(i)),
        Term::Ifz(c, a, b) => RTerm::Ifz(rterm_of(c), rterm_of(a), rterm_of(b)),
        Term::Pair(a, b) => RTerm::Pair(rterm_of(a), rterm_of(b)),
        Term::Fst(i) => RTerm::Fst(rterm_of(i)),
        Term::Snd(i) => RTerm::Snd(rterm_of(i)),
    })
}

/// Persistent environment: one thunk per enclosing binder, innermost
/// first, shared between all closures that extend it.
#[derive(Clone)]
struct Env(Option<Rc<EnvNode>>);

struct EnvNode {
    head: Thunk,
    tail: Env,
}

/// Environments form chains one link per β-step in the worst case, and
/// a thunk captured in a link can hold the only reference to an entire
/// earlier chain. Left to the default recursive `Drop`, an exhausted
/// run would unwind those chains on the host stack and overflow it, so
/// release goes through an explicit worklist: the outermost drop on a
/// thread becomes the collector, and environments freed while it runs
/// are queued instead of dismantled in place.
impl Drop for Env {
    fn drop(&mut self) {
        if let Some(node) = self.0.take() {
            reclaim(node);
        }
    }
}

thread_local! {
    static SCRAP: RefCell<(bool, Vec<Rc<EnvNode>>)> =
        const { RefCell::new((false, Vec::new())) };
}

fn reclaim(node: Rc<EnvNode>) {
    let collector = SCRAP.with(|s| {
        let mut s = s.borrow_mut();
        s.1.push(node);
        !std::mem::replace(&mut s.0, true)
    });
    if !collector {
        return;
    }
    while let Some(link) = SCRAP.with(|s| s.borrow_mut().1.pop()) {
        // Sole owner: the link's fields drop here, and any environment
        // they release joins the queue rather than the call stack.
        let _ = Rc::try_unwrap(link);
    }
    SCRAP.with(|s| s.borrow_mut().0 = false);
}

impl Env {
    fn empty() -> Env {
        Env(None)
    }

    fn cons(&self, head: Thunk) -> Env {
        Env(Some(Rc::new(EnvNode { head, tail: self.clone() })))
    }

    fn get(&self, k: usize) -> Option<&Thunk> {
        let mut cur = self;
        let mut k = k;
        while let Some(node) = &cur.0 {
            if k == 0 {
                return Some(&node.head);
            }
            k -= 1;
            cur = &node.tail;
        }
        None
    }
}

/// A suspended subterm with its environment. Forcing evaluates at most
/// once; the original term and environment are retained alongside the
/// memo because readback needs the unevaluated source.
#[derive(Clone)]
struct Thunk(Rc<ThunkCell>);

struct ThunkCell {
    term: Rc<RTerm>,
    env: Env,
    memo: RefCell<Option<Whnf>>,
}

impl Thunk {
    fn new(term: Rc<RTerm>, env: Env) -> Thunk {
        Thunk(Rc::new(ThunkCell { term, env, memo: RefCell::new(None) }))
    }

    fn force(&self, m: &mut Meter) -> Result<Whnf, Stop> {
        if let Some(w) = self.0.memo.borrow().as_ref() {
            return Ok(w.clone());
        }
        let w = whnf(self.0.term.clone(), self.0.env.clone(), m)?;
        *self.0.memo.borrow_mut() = Some(w.clone());
        Ok(w)
    }
}

/// Weak head normal forms. `Neutral` covers every stuck shape the
/// strategy leaves alone: an application whose head is not a λ, a
/// numeral or projection or conditional over something that is not a
/// literal or pair.
#[derive(Clone)]
enum Whnf {
    Closure(Rc<RTerm>, Env),
    Nat(u64),
    PairV(Thunk, Thunk),
    Neutral(Rc<Neutral>),
}

enum Neutral {
    App(Whnf, Thunk),
    Succ(Whnf),
    Pred(Whnf),
    Ifz(Whnf, Thunk, Thunk),
    Fst(Whnf),
    Snd(Whnf),
}

/// Fuel meter; `Stop` aborts the run and surfaces as `OutOfFuel`.
struct Stop;

struct Meter {
    left: u64,
}

impl Meter {
    fn tick(&mut self) -> Result<(), Stop> {
        if self.left == 0 {
            return Err(Stop);
        }
        self.left -= 1;
        Ok(())
    }
}

enum Applied {
    Done(Whnf),
    Enter(Rc<RTerm>, Env),
}

/// Apply a head value to the pending application spine: β-enter on a
/// closure, otherwise absorb the remaining arguments as a stuck chain.
fn apply_args(mut w: Whnf, args: &mut Vec<Thunk>, m: &mut Meter) -> Result<Applied, Stop> {
    while let Some(arg) = args.pop() {
        match w {
            Whnf::Closure(body, cenv) => {
                m.tick()?;
                return Ok(Applied::Enter(body, cenv.cons(arg)));
            }
            other => w = Whnf::Neutral(Rc::new(Neutral::App(other, arg))),
        }
    }
    Ok(Applied::Done(w))
}

/// Reduce to weak head normal form. The β-loop and the application
/// spine are iterative, so deep tail recursions in the object language
/// cost no host stack; host recursion tracks only the nesting of
/// scrutinees and primitive operands in the source term.
fn whnf(start: Rc<RTerm>, start_env: Env, m: &mut Meter) -> Result<Whnf, Stop> {
    let mut cur = start;
    let mut env = start_env;
    let mut args: Vec<Thunk> = Vec::new();
    loop {
        let node = cur.clone();
        let head = match &*node {
            RTerm::App(f, a) => {
                args.push(Thunk::new(a.clone(), env.clone()));
                cur = f.clone();
                continue;
            }
            RTerm::Lam(b) => match args.pop() {
                Some(arg) => {
                    m.tick()?;
                    env = env.cons(arg);
                    cur = b.clone();
                    continue;
                }
                None => return Ok(Whnf::Closure(b.clone(), env)),
            },
            RTerm::Var(k) => {
                let thunk = env.get(*k).expect("evaluated terms are closed").clone();
                thunk.force(m)?
            }
            RTerm::Lit(n) => Whnf::Nat(*n),
            RTerm::Pair(a, b) => Whnf::PairV(
                Thunk::new(a.clone(), env.clone()),
                Thunk::new(b.clone(), env.clone()),
            ),
            RTerm::Succ(_) | RTerm::Pred(_) => numeral_ops(node.clone(), env.clone(), m)?,
            RTerm::Ifz(c, zero, nonzero) => match whnf(c.clone(), env.clone(), m)? {
                Whnf::Nat(0) => {
                    m.tick()?;
                    cur = zero.clone();
                    continue;
                }
                Whnf::Nat(_) => {
                    m.tick()?;
                    cur = nonzero.clone();
                    continue;
                }
                stuck => Whnf::Neutral(Rc::new(Neutral::Ifz(
                    stuck,
                    Thunk::new(zero.clone(), env.clone()),
                    Thunk::new(nonzero.clone(), env.clone()),
                ))),
            },
            RTerm::Fst(inner) => match whnf(inner.clone(), env.clone(), m)? {
                Whnf::PairV(a, _) => {
                    m.tick()?;
                    a.force(m)?
                }
                stuck => Whnf::Neutral(Rc::new(Neutral::Fst(stuck))),
            },
            RTerm::Snd(inner) => match whnf(inner.clone(), env.clone(), m)? {
                Whnf::PairV(_, b) => {
                    m.tick()?;
                    b.force(m)?
                }
                stuck => Whnf::Neutral(Rc::new(Neutral::Snd(stuck))),
            },
        };
        match apply_args(head, &mut args, m)? {
            Applied::Done(w) => return Ok(w),
            Applied::Enter(b, e) => {
                cur = b;
                env = e;
            }
        }
    }
}

/// Evaluate a `Succ`/`Pred` chain. The spine is walked iteratively so
/// unary numerals of any height stay off the host stack; once the base
/// stops being a literal the rest of the chain is stuck.
fn numeral_ops(start: Rc<RTerm>, env: Env, m: &mut Meter) -> Result<Whnf, Stop> {
    let mut ops: Vec<bool> = Vec::new();
    let mut base = start;
    loop {
        let node = base.clone();
        match &*node {
            RTerm::Succ(i) => {
                ops.push(true);
                base = i.clone();
            }
            RTerm::Pred(i) => {
                ops.push(false);
                base = i.clone();
            }
            _ => break,
        }
    }
    let mut w = whnf(base, env, m)?;
    for &is_succ in ops.iter().rev() {
        w = match w {
            Whnf::Nat(n) => {
                m.tick()?;
                Whnf::Nat(if is_succ { n + 1 } else { n.saturating_sub(1) })
            }
            stuck => Whnf::Neutral(Rc::new(if is_succ {
                Neutral::Succ(stuck)
            } else {
                Neutral::Pred(stuck)
            })),
        };
    }
    Ok(w)
}

/// Read a term back from a suspended source, substituting each free
/// variable's thunk by its own readback. Insertions are closed, so no
/// index shifting is needed; memos are ignored on purpose — this is the
/// unevaluated residue the strategy never touched.
fn resolve(t: &RTerm, env: &Env, depth: usize) -> Term {
    match t {
        RTerm::Var(k) => {
            if *k < depth {
                Term::Var(*k)
            } else {
                let thunk = env.get(*k - depth).expect("evaluated terms are closed");
                resolve(&thunk.0.term, &thunk.0.env, 0)
            }
        }
        RTerm::Lam(b) => Term::lam(resolve(b, env, depth + 1)),
        RTerm::App(f, a) => Term::app(resolve(f, env, depth), resolve(a, env, depth)),
        RTerm::Lit(n) => Term::Lit(*n),
        RTerm::Succ(i) => Term::succ(resolve(i, env, depth)),
        RTerm::Pred(i) => Term::pred(resolve(i, env, depth)),
        RTerm::Ifz(c, a, b) => Term::ifz(
            resolve(c, env, depth),
            resolve(a, env, depth),
            resolve(b, env, depth),
        ),
        RTerm::Pair(a, b) => Term::pair(resolve(a, env, depth), resolve(b, env, depth)),
        RTerm::Fst(i) => Term::fst(resolve(i, env, depth)),
        RTerm::Snd(i) => Term::snd(resolve(i, env, depth)),
    }
}

/// Turn a weak head normal form into the strategy's normal form. Pair
/// components and stuck-application arguments are forced and quoted in
/// left-to-right order, exactly where plain rewriting keeps reducing;
/// λ-bodies and the branches of a stuck conditional are read back
/// untouched via [`resolve`].
fn quote(w: &Whnf, m: &mut Meter) -> Result<Term, Stop> {
    match w {
        Whnf::Nat(n) => Ok(Term::Lit(*n)),
        Whnf::Closure(body, env) => Ok(Term::lam(resolve(body, env, 1))),
        Whnf::PairV(a, b) => {
            let fa = a.force(m)?;
            let qa = quote(&fa, m)?;
            let fb = b.force(m)?;
            let qb = quote(&fb, m)?;
            Ok(Term::pair(qa, qb))
        }
        Whnf::Neutral(n) => match &**n {
            Neutral::App(head, arg) => {
                let qh = quote(head, m)?;
                let fa = arg.force(m)?;
                Ok(Term::app(qh, quote(&fa, m)?))
            }
            Neutral::Succ(i) => Ok(Term::succ(quote(i, m)?)),
            Neutral::Pred(i) => Ok(Term::pred(quote(i, m)?)),
            Neutral::Fst(i) => Ok(Term::fst(quote(i, m)?)),
            Neutral::Snd(i) => Ok(Term::snd(quote(i, m)?)),
            Neutral::Ifz(c, zero, nonzero) => {
                let qc = quote(c, m)?;
                Ok(Term::ifz(
                    qc,
                    resolve(&zero.0.term, &zero.0.env, 0),
                    resolve(&nonzero.0.term, &nonzero.0.env, 0),
                ))
            }
        },
    }
}

/// The outcome of a bounded evaluation: a normal form for the strategy,
/// or the honest admission that the fuel ran out first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalResult {
    Value(Term),
    OutOfFuel,
}

/// Run the strategy on a closed term, spending at most `fuel` redex
/// contractions. Deterministic; more fuel can only turn `OutOfFuel`
/// into the one value every sufficient fuel yields.
pub fn eval(t: &Term, fuel: u64) -> Result<EvalResult, CatcompError> {
    t.require_closed()?;
    if fuel == 0 {
        return Err(CatcompError::ZeroFuel);
    }
    let mut meter = Meter { left: fuel };
    let outcome = whnf(rterm_of(t), Env::empty(), &mut meter)
        .and_then(|w| quote(&w, &mut meter));
    match outcome {
        Ok(nf) => Ok(EvalResult::Value(nf)),
        Err(Stop) => Ok(EvalResult::OutOfFuel),
    }
}

/// Fix a program's first argument, returning the application as a new
/// program. Running the result on any remaining input agrees with
/// running the original on both — specialization is application.
pub fn specialize(p: &Term, a: &Term) -> Result<Term, CatcompError> {
    p.require_closed()?;
    a.require_closed()?;
    Ok(Term::app(p.clone(), a.clone()))
}

/// What one transducer step of a program produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    /// The emitted output literal and the residual program for the rest
    /// of the input.
    Step { output: u64, residual: Term },
    OutOfFuel,
}

/// Run one transducer step: apply the program to one input and demand a
/// pair of an output literal and a residual program. Any other shape of
/// result is a protocol violation.
pub fn step(p: &Term, input: &Term, fuel: u64) -> Result<StepResult, CatcompError> {
    match eval(&Term::app(p.clone(), input.clone()), fuel)? {
        EvalResult::OutOfFuel => Ok(StepResult::OutOfFuel),
        EvalResult::Value(v) => match v {
            Term::Pair(out, residual) => match *out {
                Term::Lit(n) => Ok(StepResult::Step { output: n, residual: *residual }),
                other => Err(CatcompError::Protocol(format!(
                    "step produced a pair, but its first component is `{other}`, not a literal"
                ))),
            },
            other => Err(CatcompError::Protocol(format!(
                "step result `{other}` is not a pair of output and residual"
            ))),
        },
    }
}

/// Close a self-referential definition: for a transformer `t`, the term
/// `fix(t)` satisfies `eval(fix(t)·n) = eval((t·fix(t))·n)` for every
/// argument — each recursive call re-enters `t` with the whole knot.
/// The handle passed to `t` is η-delayed so the knot itself is a value.
pub fn fix(t: &Term) -> Result<Term, CatcompError> {
    t.require_closed()?;
    // w = λx. t (λv. (x x) v);  fix(t) = w w
    let handle = Term::lam(Term::app(
        Term::app(Term::Var(1), Term::Var(1)),
        Term::Var(0),
    ));
    let w = Term::lam(Term::app(t.clone(), handle));
    Ok(Term::app(w.clone(), w))
}

/// Compile a machine into programs, one per state: applying the state's
/// program to an input symbol's index evaluates to a pair of the output
/// code and the next state's program. Outputs are coded by index into
/// the machine's output alphabet, with the alphabet size itself standing
/// for a deleted output.
pub fn compile_mealy(m: &MealyMachine) -> Result<Vec<Term>, CatcompError> {
    if m.input().is_empty() {
        return Err(CatcompError::Invalid(
            "cannot compile a machine with no input symbols".into(),
        ));
    }
    let deleted = m.output().len() as u64;
    // body(self=Var 2, state=Var 1, input=Var 0): dispatch on the state,
    // then on the input, to a pair of output code and recursive call.
    let state_cases: Vec<Term> = (0..m.state_count())
        .map(|x| {
            let input_cases: Vec<Term> = (0..m.input().len())
                .map(|a| {
                    let (out, next) = m.step(x, a);
                    let code = out.map_or(deleted, |b| b as u64);
                    Term::pair(
                        Term::Lit(code),
                        Term::app(Term::Var(2), Term::Lit(next as u64)),
                    )
                })
                .collect();
            ifz_chain(Term::Var(0), input_cases)
        })
        .collect();
    let transformer = Term::lam(Term::lam(Term::lam(ifz_chain(Term::Var(1), state_cases))));
    let knot = fix(&transformer)?;
    Ok((0..m.state_count())
        .map(|x| Term::app(knot.clone(), Term::Lit(x as u64)))
        .collect())
}

/// Dispatch a numeral onto a case list: case `i` is taken when the
/// scrutinee is `i`, the last case catching everything beyond.
fn ifz_chain(scrutinee: Term, cases: Vec<Term>) -> Term {
    let n = cases.len();
    assert!(n > 0, "dispatch needs at least one case");
    let mut iter = cases.into_iter().enumerate().rev();
    let (_, last) = iter.next().expect("nonempty");
    iter.fold(last, |acc, (i, case)| {
        let mut probe = scrutinee.clone();
        for _ in 0..i {
            probe = Term::pred(probe);
        }
        Term::ifz(probe, case, acc)
    })
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

impl fmt::Display for Term {
    /// The `.tm` S-expression format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(k) => write!(f, "(var {k})"),
            Term::Lam(b) => write!(f, "(lam {b})"),
            Term::App(g, a) => write!(f, "(app {g} {a})"),
            Term::Lit(n) => write!(f, "(lit {n})"),
            Term::Succ(t) => write!(f, "(succ {t})"),
            Term::Pred(t) => write!(f, "(pred {t})"),
            Term::Ifz(c, a, b) => write!(f, "(ifz {c} {a} {b})"),
            Term::Pair(a, b) => write!(f, "(pair {a} {b})"),
            Term::Fst(t) => write!(f, "(fst {t})"),
            Term::Snd(t) => write!(f, "(snd {t})"),
        }
    }
}

/// Parse the `.tm` S-expression format: `(lam body)`, `(app f x)`,
/// `(var k)`, `(lit n)`, `(succ t)`, `(pred t)`, `(ifz c a b)`,
/// `(pair a b)`, `(fst t)`, `(snd t)`. Whitespace is free; `;` starts a
/// line comment.
pub fn parse_tm(text: &str) -> Result<Term, CatcompError> {
    let mut tokens = Vec::new();
    for line in text.lines() {
        let body = line.split(';').next().unwrap_or("");
        let mut rest = body;
        while let Some(i) = rest.find(|c: char| !c.is_whitespace()) {
            rest = &rest[i..];
            match rest.as_bytes()[0] {
                b'(' | b')' => {
                    tokens.push(&rest[..1]);
                    rest = &rest[1..];
                }
                _ => {
                    let end = rest
                        .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                        .unwrap_or(rest.len());
                    tokens.push(&rest[..end]);
                    rest = &rest[end..];
                }
            }
        }
    }
    let mut pos = 0;
    let term = parse_expr(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(CatcompError::Parse(format!(
            "trailing input after the term: `{}`",
            tokens[pos]
        )));
    }
    Ok(term)
}

fn parse_expr(tokens: &[&str], pos: &mut usize) -> Result<Term, CatcompError> {
    let next = |pos: &mut usize| -> Result<&str, CatcompError> {
        let t = tokens
            .get(*pos)
            .copied()
            .ok_or_else(|| CatcompError::Parse("unexpected end of input".into()))?;
        *pos += 1;
        Ok(t)
    };
    let open = next(pos)?;
    if open != "(" {
        return Err(CatcompError::Parse(format!("expected `(`, found `{open}`")));
    }
    let head = next(pos)?.to_string();
    let nat = |tok: &str| {
        tok.parse::<u64>()
            .map_err(|_| CatcompError::Parse(format!("`{tok}` is not a number")))
    };
    let term = match head.as_str() {
        "var" => Term::Var(nat(next(pos)?)? as usize),
        "lit" => Term::Lit(nat(next(pos)?)?),
        "lam" => Term::lam(parse_expr(tokens, pos)?),
        "app" => {
            let f = parse_expr(tokens, pos)?;
            Term::app(f, parse_expr(tokens, pos)?)
        }
        "succ" => Term::succ(parse_expr(tokens, pos)?),
        "pred" => Term::pred(parse_expr(tokens, pos)?),
        "ifz" => {
            let c = parse_expr(tokens, pos)?;
            let zero = parse_expr(tokens, pos)?;
            Term::ifz(c, zero, parse_expr(tokens, pos)?)
        }
        "pair" => {
            let a = parse_expr(tokens, pos)?;
            Term::pair(a, parse_expr(tokens, pos)?)
        }
        "fst" => Term::fst(parse_expr(tokens, pos)?),
        "snd" => Term::snd(parse_expr(tokens, pos)?),
        other => return Err(CatcompError::Parse(format!("unknown form `{other}`"))),
    };
    let close = next(pos)?;
    if close != ")" {
        return Err(CatcompError::Parse(format!("expected `)`, found `{close}`")));
    }
    Ok(term)
}

// ---------------------------------------------------------------------------
// Sample programs
// ---------------------------------------------------------------------------

/// Closed programs used across examples and tests: a small arithmetic
/// library built on [`fix`], and a corpus of recursion transformers.
pub mod samples {
    use super::{fix, Term};

    /// `add m n`, by recursion on `m`.
    pub fn add_program() -> Term {
        // λadd. λm. λn. ifz m n (succ (add (pred m) n))
        let body = Term::ifz(
            Term::Var(1),
            Term::Var(0),
            Term::succ(Term::app(
                Term::app(Term::Var(2), Term::pred(Term::Var(1))),
                Term::Var(0),
            )),
        );
        fix(&Term::lam(Term::lam(Term::lam(body)))).expect("closed by construction")
    }

    /// `mul m n`, as repeated addition.
    pub fn mul_program() -> Term {
        // λmul. λm. λn. ifz m 0 (add n (mul (pred m) n))
        let body = Term::ifz(
            Term::Var(1),
            Term::Lit(0),
            Term::app(
                Term::app(add_program(), Term::Var(0)),
                Term::app(
                    Term::app(Term::Var(2), Term::pred(Term::Var(1))),
                    Term::Var(0),
                ),
            ),
        );
        fix(&Term::lam(Term::lam(Term::lam(body)))).expect("closed by construction")
    }

    /// The factorial step: `λf. λn. ifz n 1 (mul n (f (pred n)))`.
    pub fn factorial_step() -> Term {
        Term::lam(Term::lam(Term::ifz(
            Term::Var(0),
            Term::Lit(1),
            Term::app(
                Term::app(mul_program(), Term::Var(0)),
                Term::app(Term::Var(1), Term::pred(Term::Var(0))),
            ),
        )))
    }

    /// `fix` of the factorial step.
    pub fn factorial_program() -> Term {
        fix(&factorial_step()).expect("closed by construction")
    }

    /// Transformers exercising the recursion contract: constant,
    /// factorial, the divergent identity, a slow adder, and parity by
    /// double descent. Each is a closed `λf. …`.
    pub fn transformer_corpus() -> Vec<(&'static str, Term)> {
        let constant = Term::lam(Term::lam(Term::Lit(7)));
        let identity = Term::lam(Term::Var(0));
        // λf. λn. ifz n 0 (succ (f (pred n)))
        let rebuild = Term::lam(Term::lam(Term::ifz(
            Term::Var(0),
            Term::Lit(0),
            Term::succ(Term::app(Term::Var(1), Term::pred(Term::Var(0)))),
        )));
        // λf. λn. ifz n 1 (ifz (pred n) 0 (f (pred (pred n))))
        let parity = Term::lam(Term::lam(Term::ifz(
            Term::Var(0),
            Term::Lit(1),
            Term::ifz(
                Term::pred(Term::Var(0)),
                Term::Lit(0),
                Term::app(Term::Var(1), Term::pred(Term::pred(Term::Var(0)))),
            ),
        )));
        vec![
            ("constant", constant),
            ("factorial", factorial_step()),
            ("identity", identity),
            ("rebuild", rebuild),
            ("parity", parity),
        ]
    }
}
