//! Finite relations as a traced monoidal category, and the Int
//! construction that turns feedback into formal polarity.
//!
//! Objects are finite carriers (sizes); the monoidal product is disjoint
//! sum, so a morphism into or out of a sum splits into blocks. Trace ties
//! a feedback carrier `Y` from output back to input: for relations this
//! is reachability — a direct `A`→`B` step, or a step into `Y`, any
//! number of loops inside `Y`, and a step out. The Int construction then
//! builds a category whose objects are polarized pairs `⟨minus, plus⟩`
//! and whose composition hides the middle object inside a trace; over the
//! discrete category of naturals this yields exactly the integers as
//! formal differences, which [`ZPair`] and [`znorm`] spell out.

use std::fmt;

/// Errors for relation construction and composition.
#[derive(Debug, thiserror::Error)]
pub enum IntError {
    #[error("{0}")]
    Dimension(String),
    #[error("{0}")]
    Invalid(String),
}

// ---------------------------------------------------------------------------
// Finite relations
// ---------------------------------------------------------------------------

/// A relation between finite carriers, stored as a boolean matrix with
/// one row per source element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinRel {
    source: usize,
    target: usize,
    cells: Vec<bool>, // row-major, source × target
}

impl FinRel {
    pub fn new(
        source: usize,
        target: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<FinRel, IntError> {
        let mut rel = FinRel::empty(source, target);
        for (i, j) in pairs {
            if i >= source || j >= target {
                return Err(IntError::Dimension(format!(
                    "pair ({i}, {j}) out of range for a {source}×{target} relation"
                )));
            }
            rel.cells[i * target + j] = true;
        }
        Ok(rel)
    }

    pub fn empty(source: usize, target: usize) -> FinRel {
        FinRel { source, target, cells: vec![false; source * target] }
    }

    pub fn identity(n: usize) -> FinRel {
        let mut rel = FinRel::empty(n, n);
        for i in 0..n {
            rel.cells[i * n + i] = true;
        }
        rel
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.target + j]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.source {
            for j in 0..self.target {
                if self.contains(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Relational composition — boolean matrix product.
    pub fn compose(&self, other: &FinRel) -> Result<FinRel, IntError> {
        if self.target != other.source {
            return Err(IntError::Dimension(format!(
                "cannot compose {}×{} with {}×{}: middle carriers differ",
                self.source, self.target, other.source, other.target
            )));
        }
        let mut out = FinRel::empty(self.source, other.target);
        for i in 0..self.source {
            for k in 0..self.target {
                if !self.contains(i, k) {
                    continue;
                }
                for j in 0..other.target {
                    if other.contains(k, j) {
                        out.cells[i * other.target + j] = true;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn union(&self, other: &FinRel) -> Result<FinRel, IntError> {
        if self.source != other.source || self.target != other.target {
            return Err(IntError::Dimension(format!(
                "cannot union {}×{} with {}×{}",
                self.source, self.target, other.source, other.target
            )));
        }
        let mut out = self.clone();
        for (c, &o) in out.cells.iter_mut().zip(&other.cells) {
            *c |= o;
        }
        Ok(out)
    }

    /// Disjoint sum of relations: carriers concatenate, and each relation
    /// acts on its own block.
    pub fn tensor(&self, other: &FinRel) -> FinRel {
        let (src, tgt) = (self.source + other.source, self.target + other.target);
        let mut out = FinRel::empty(src, tgt);
        for (i, j) in self.pairs() {
            out.cells[i * tgt + j] = true;
        }
        for (i, j) in other.pairs() {
            out.cells[(self.source + i) * tgt + (self.target + j)] = true;
        }
        out
    }

    /// The block swap `a + b → b + a`.
    pub fn symmetry(a: usize, b: usize) -> FinRel {
        let n = a + b;
        let mut out = FinRel::empty(n, n);
        for i in 0..a {
            out.cells[i * n + (b + i)] = true;
        }
        for i in 0..b {
            out.cells[(a + i) * n + i] = true;
        }
        out
    }

    /// Feed the `y` block of a relation `a + y → b + y` back to its
    /// input: the result relates `i` to `j` if there is a direct step, or
    /// a step into the feedback carrier, finitely many steps inside it,
    /// and a step out. The loops are a reflexive-transitive closure —
    /// a least fixpoint riding inside the coinductive machinery.
    pub fn trace(&self, a: usize, b: usize, y: usize) -> Result<FinRel, IntError> {
        if self.source != a + y || self.target != b + y {
            return Err(IntError::Dimension(format!(
                "trace blocks {a}+{y} → {b}+{y} do not fit a {}×{} relation",
                self.source, self.target
            )));
        }
        // Reflexive-transitive closure of the y×y block.
        let mut star = vec![false; y * y];
        for p in 0..y {
            for q in 0..y {
                star[p * y + q] = p == q || self.contains(a + p, b + q);
            }
        }
        for mid in 0..y {
            for p in 0..y {
                if star[p * y + mid] {
                    for q in 0..y {
                        if star[mid * y + q] {
                            star[p * y + q] = true;
                        }
                    }
                }
            }
        }
        let mut out = FinRel::empty(a, b);
        for i in 0..a {
            for j in 0..b {
                let direct = self.contains(i, j);
                let looped = (0..y).any(|p| {
                    self.contains(i, b + p)
                        && (0..y).any(|q| star[p * y + q] && self.contains(a + q, j))
                });
                if direct || looped {
                    out.cells[i * b + j] = true;
                }
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// The traced interface and its two instances
// ---------------------------------------------------------------------------

/// The record of operations the Int construction needs from its base:
/// a symmetric monoidal category with a trace. Objects are value-level
/// data (sizes here), so the laws are checked by tests, not types.
pub trait TracedMonoidal {
    type Obj: Clone + PartialEq + fmt::Debug;
    type Mor: Clone + PartialEq + fmt::Debug;

    fn id(&self, a: &Self::Obj) -> Self::Mor;
    /// Diagrammatic order: `f` then `g`.
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor, IntError>;
    fn tensor_obj(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn tensor_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    fn symmetry(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;
    fn trace(
        &self,
        f: &Self::Mor,
        a: &Self::Obj,
        b: &Self::Obj,
        y: &Self::Obj,
    ) -> Result<Self::Mor, IntError>;
}

/// Finite carriers and relations under disjoint sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct FinRelCat;

impl TracedMonoidal for FinRelCat {
    type Obj = usize;
    type Mor = FinRel;

    fn id(&self, a: &usize) -> FinRel {
        FinRel::identity(*a)
    }

    fn compose(&self, f: &FinRel, g: &FinRel) -> Result<FinRel, IntError> {
        f.compose(g)
    }

    fn tensor_obj(&self, a: &usize, b: &usize) -> usize {
        a + b
    }

    fn tensor_mor(&self, f: &FinRel, g: &FinRel) -> FinRel {
        f.tensor(g)
    }

    fn symmetry(&self, a: &usize, b: &usize) -> FinRel {
        FinRel::symmetry(*a, *b)
    }

    fn trace(&self, f: &FinRel, a: &usize, b: &usize, y: &usize) -> Result<FinRel, IntError> {
        f.trace(*a, *b, *y)
    }
}

/// The naturals as a discrete traced category: the only morphisms are
/// identities, written as their own object. Tracing an identity discards
/// the feedback summand. Int over this base is the integers.
#[derive(Clone, Copy, Debug, Default)]
pub struct NatCat;

impl TracedMonoidal for NatCat {
    type Obj = u64;
    type Mor = u64;

    fn id(&self, a: &u64) -> u64 {
        *a
    }

    fn compose(&self, f: &u64, g: &u64) -> Result<u64, IntError> {
        if f != g {
            return Err(IntError::Dimension(format!(
                "no morphisms between distinct naturals {f} and {g}"
            )));
        }
        Ok(*f)
    }

    fn tensor_obj(&self, a: &u64, b: &u64) -> u64 {
        a + b
    }

    fn tensor_mor(&self, f: &u64, g: &u64) -> u64 {
        f + g
    }

    fn symmetry(&self, a: &u64, b: &u64) -> u64 {
        a + b
    }

    fn trace(&self, f: &u64, a: &u64, b: &u64, y: &u64) -> Result<u64, IntError> {
        if a != b || *f != a + y {
            return Err(IntError::Dimension(format!(
                "cannot trace {f} over {y} from {a} to {b} in a discrete category"
            )));
        }
        Ok(*a)
    }
}

// ---------------------------------------------------------------------------
// The Int construction
// ---------------------------------------------------------------------------

/// A polarized object: a pair of base objects, one demanded and one
/// offered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntObj<O> {
    pub minus: O,
    pub plus: O,
}

impl<O> IntObj<O> {
    pub fn new(minus: O, plus: O) -> IntObj<O> {
        IntObj { minus, plus }
    }
}

/// A morphism `⟨A₋,A₊⟩ → ⟨B₋,B₊⟩`, carried by a base morphism
/// `A₋ ⊗ B₊ → B₋ ⊗ A₊`: inputs of the source and outputs of the target
/// flow forward, the other two polarities flow back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMor<O, M> {
    pub src: IntObj<O>,
    pub tgt: IntObj<O>,
    pub base: M,
}

/// The identity on a polarized object: the base identity on
/// `minus ⊗ plus`.
pub fn int_id<C: TracedMonoidal>(cat: &C, a: &IntObj<C::Obj>) -> IntMor<C::Obj, C::Mor> {
    IntMor {
        src: a.clone(),
        tgt: a.clone(),
        base: cat.id(&cat.tensor_obj(&a.minus, &a.plus)),
    }
}

/// Composition in the Int category: tensor the two bases, permute so
/// that each base sees its own inputs, and trace out the middle object's
/// two polarities `B₋ ⊗ B₊`. The feedback carrier is exactly the
/// communication between the two halves.
pub fn int_compose<C: TracedMonoidal>(
    cat: &C,
    f: &IntMor<C::Obj, C::Mor>,
    g: &IntMor<C::Obj, C::Mor>,
) -> Result<IntMor<C::Obj, C::Mor>, IntError> {
    if f.tgt != g.src {
        return Err(IntError::Dimension(format!(
            "cannot compose: middle objects differ ({:?} vs {:?})",
            f.tgt, g.src
        )));
    }
    let (am, ap) = (&f.src.minus, &f.src.plus);
    let (bm, bp) = (&f.tgt.minus, &f.tgt.plus);
    let (cm, cp) = (&g.tgt.minus, &g.tgt.plus);
    let t = |x: &C::Obj, y: &C::Obj| cat.tensor_obj(x, y);
    // Route A₋ ⊗ C₊ ⊗ B₋ ⊗ B₊ to (A₋ ⊗ B₊) ⊗ (B₋ ⊗ C₊).
    let in_perm = cat.compose(
        &cat.tensor_mor(&cat.id(am), &cat.symmetry(&t(cp, bm), bp)),
        &cat.tensor_mor(&cat.id(&t(am, bp)), &cat.symmetry(cp, bm)),
    )?;
    let mid = cat.tensor_mor(&f.base, &g.base);
    // Route (B₋ ⊗ A₊) ⊗ (C₋ ⊗ B₊) to (C₋ ⊗ A₊) ⊗ (B₋ ⊗ B₊).
    let out_perm = cat.compose(
        &cat.tensor_mor(&cat.symmetry(&t(bm, ap), cm), &cat.id(bp)),
        &cat.tensor_mor(
            &cat.tensor_mor(&cat.id(cm), &cat.symmetry(bm, ap)),
            &cat.id(bp),
        ),
    )?;
    let whole = cat.compose(&cat.compose(&in_perm, &mid)?, &out_perm)?;
    let base = cat.trace(&whole, &t(am, cp), &t(cm, ap), &t(bm, bp))?;
    Ok(IntMor { src: f.src.clone(), tgt: g.tgt.clone(), base })
}

// ---------------------------------------------------------------------------
// Integers as polarized naturals
// ---------------------------------------------------------------------------

/// A formal difference of naturals: the object `⟨m₋, m₊⟩` of Int over
/// the naturals, denoting the integer `m₊ − m₋`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZPair {
    pub m_minus: u64,
    pub m_plus: u64,
}

impl ZPair {
    pub fn new(m_minus: u64, m_plus: u64) -> ZPair {
        ZPair { m_minus, m_plus }
    }

    /// The integer this pair denotes.
    pub fn value(&self) -> i64 {
        self.m_plus as i64 - self.m_minus as i64
    }

    /// The corresponding polarized object over the naturals.
    pub fn as_int_obj(&self) -> IntObj<u64> {
        IntObj::new(self.m_minus, self.m_plus)
    }
}

impl std::ops::Add for ZPair {
    type Output = ZPair;

    /// The tensor of polarized objects: componentwise sum.
    fn add(self, rhs: ZPair) -> ZPair {
        ZPair::new(self.m_minus + rhs.m_minus, self.m_plus + rhs.m_plus)
    }
}

impl fmt::Display for ZPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m_minus, self.m_plus)
    }
}

/// Cancel the common part of a formal difference: subtract the smaller
/// coordinate from both, leaving a pair with at least one zero. Pairs
/// with equal normal forms denote the same integer, and tensoring then
/// normalizing is integer addition.
pub fn znorm(z: &ZPair) -> ZPair {
    let k = z.m_minus.min(z.m_plus);
    ZPair::new(z.m_minus - k, z.m_plus - k)
}
