//! Extended reals as ±-sign strings, with an exact dyadic codec.
//!
//! A finite string over `{+, -}` denotes a dyadic rational: a maximal leading
//! run of `z` equal symbols contributes `±z` (a unary integer part), and each
//! later symbol contributes `±1/2, ±1/4, …` (a binary refinement). The two
//! infinite constant strings are kept as explicit `inf` / `-inf` tokens. On
//! finite strings the denotation [`phi`] is injective and [`encode`] inverts
//! it, so sign strings are a canonical spelling of the dyadics; lexicographic
//! order with virtual `0` padding ([`lex_cmp`]) agrees with numeric order.
//!
//! The same strings name positions inside signed games: [`gamma`] turns a
//! string into a game whose options are its proper prefixes, and [`upsilon`]
//! maps any well-founded numeric game back to the string spelling its value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::games::SignedGame;

/// Errors for codec, interval, and game-valuation operations.
#[derive(Debug, thiserror::Error)]
pub enum RealsError {
    #[error("empty interval: no value lies strictly between {lo} and {hi}")]
    EmptyInterval { lo: String, hi: String },
    #[error("infinite sign string has no finite game presentation; truncate it first")]
    InfiniteString,
    #[error("`{0}` is not a dyadic rational (denominator must be a power of two)")]
    NonDyadic(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("game has a cycle reachable from the root; only well-founded games carry values")]
    CyclicGame,
    #[error("game is not numeric: some left option fails to sit strictly below every right option")]
    NonNumeric,
}

// ---------------------------------------------------------------------------
// Signs and sign strings
// ---------------------------------------------------------------------------

/// One symbol of the two-letter value alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    /// `+1` or `-1`.
    pub fn value(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

/// A finite ±-string, or one of the two infinite constant strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SignString {
    NegInf,
    Finite(Vec<Sign>),
    PosInf,
}

impl SignString {
    pub fn empty() -> Self {
        SignString::Finite(Vec::new())
    }

    pub fn finite(signs: Vec<Sign>) -> Self {
        SignString::Finite(signs)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SignString::Finite(_))
    }

    /// The symbols of a finite string; `None` for the infinities.
    pub fn signs(&self) -> Option<&[Sign]> {
        match self {
            SignString::Finite(v) => Some(v),
            _ => None,
        }
    }
}

/// Positionwise comparison with virtual `0` padding after the end of the
/// shorter string, under the symbol order `- < 0 < +`. The infinite strings
/// sit below and above every finite string. This agrees with comparing
/// denotations under [`phi`].
pub fn lex_cmp(a: &SignString, b: &SignString) -> Ordering {
    match (a, b) {
        (SignString::NegInf, SignString::NegInf) => Ordering::Equal,
        (SignString::PosInf, SignString::PosInf) => Ordering::Equal,
        (SignString::NegInf, _) => Ordering::Less,
        (_, SignString::NegInf) => Ordering::Greater,
        (_, SignString::PosInf) => Ordering::Less,
        (SignString::PosInf, _) => Ordering::Greater,
        (SignString::Finite(x), SignString::Finite(y)) => lex_cmp_signs(x, y),
    }
}

/// Finite-string core of [`lex_cmp`]: the first position where the (padded)
/// symbols differ decides.
pub(crate) fn lex_cmp_signs(a: &[Sign], b: &[Sign]) -> Ordering {
    let rank = |s: Option<&Sign>| s.map_or(0i64, |s| s.value());
    for i in 0..a.len().max(b.len()) {
        match rank(a.get(i)).cmp(&rank(b.get(i))) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

impl PartialOrd for SignString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SignString {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_cmp(self, other)
    }
}

impl fmt::Display for SignString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignString::NegInf => f.write_str("-inf"),
            SignString::PosInf => f.write_str("inf"),
            SignString::Finite(v) => {
                for s in v {
                    write!(f, "{}", s.as_char())?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for SignString {
    type Err = RealsError;

    fn from_str(s: &str) -> Result<Self, RealsError> {
        match s {
            "inf" | "+inf" => return Ok(SignString::PosInf),
            "-inf" => return Ok(SignString::NegInf),
            _ => {}
        }
        let mut signs = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '+' => signs.push(Sign::Plus),
                '-' => signs.push(Sign::Minus),
                other => {
                    return Err(RealsError::Parse(format!(
                        "sign strings use only `+` and `-` (or the tokens `inf`, `-inf`); found `{other}`"
                    )))
                }
            }
        }
        Ok(SignString::Finite(signs))
    }
}

// ---------------------------------------------------------------------------
// Dyadic rationals and the extended real line
// ---------------------------------------------------------------------------

/// An exact dyadic rational `num / 2^exp`, kept in lowest terms
/// (`num` odd unless `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    /// `num / 2^exp`, normalized to lowest terms.
    pub fn new(mut num: BigInt, mut exp: u32) -> Self {
        while exp > 0 && num.is_even() {
            num >>= 1;
            exp -= 1;
        }
        Dyadic { num, exp }
    }

    pub fn zero() -> Self {
        Dyadic { num: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { num: BigInt::from(n), exp: 0 }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Dyadic { num: n, exp: 0 }
    }

    /// `1 / 2^k`.
    pub fn half_power(k: u32) -> Self {
        Dyadic { num: BigInt::one(), exp: k }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// The exponent of the (power-of-two) denominator.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&(BigInt::one() << self.exp))
    }

    pub fn ceil(&self) -> BigInt {
        self.num.div_ceil(&(BigInt::one() << self.exp))
    }

    /// `⌈|x|⌉`, the length of the unary stage of [`encode`].
    pub fn abs_ceil(&self) -> BigInt {
        self.num.abs().div_ceil(&(BigInt::one() << self.exp))
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), BigInt::one() << self.exp)
    }

    /// The dyadic value of a rational, if its reduced denominator is a power
    /// of two.
    pub fn from_rational(r: &BigRational) -> Option<Dyadic> {
        let den = r.denom();
        // A reduced denominator is positive; it is a power of two exactly
        // when it has a single set bit.
        if (den & (den - BigInt::one())).is_zero() {
            let exp = (den.bits() - 1) as u32;
            Some(Dyadic { num: r.numer().clone(), exp })
        } else {
            None
        }
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let exp = self.exp.max(rhs.exp);
        let num = (&self.num << (exp - self.exp)) + (&rhs.num << (exp - rhs.exp));
        Dyadic::new(num, exp)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &-rhs
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -&self.num, exp: self.exp }
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        (&self.num << (exp - self.exp)).cmp(&(&other.num << (exp - other.exp)))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigInt::one() << self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = RealsError;

    fn from_str(s: &str) -> Result<Self, RealsError> {
        let r = parse_rational(s)?;
        Dyadic::from_rational(&r).ok_or_else(|| RealsError::NonDyadic(s.to_string()))
    }
}

/// A dyadic rational or one of the two infinities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtReal {
    NegInf,
    Finite(Dyadic),
    PosInf,
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite(Dyadic::zero())
    }

    pub fn finite(&self) -> Option<&Dyadic> {
        match self {
            ExtReal::Finite(d) => Some(d),
            _ => None,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("inf"),
            ExtReal::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl FromStr for ExtReal {
    type Err = RealsError;

    fn from_str(s: &str) -> Result<Self, RealsError> {
        match s {
            "inf" | "+inf" => Ok(ExtReal::PosInf),
            "-inf" => Ok(ExtReal::NegInf),
            _ => Ok(ExtReal::Finite(s.parse()?)),
        }
    }
}

/// Parse a rational from an integer literal (`-3`), a fraction (`7/12`,
/// `5/2^4`), or an exact decimal (`2.5`).
pub fn parse_rational(s: &str) -> Result<BigRational, RealsError> {
    let s = s.trim();
    let bad = |why: &str| RealsError::Parse(format!("`{s}`: {why}"));
    if let Some((p, q)) = s.split_once('/') {
        let numer: BigInt = p.trim().parse().map_err(|_| bad("bad numerator"))?;
        let q = q.trim();
        let denom: BigInt = if let Some(k) = q.strip_prefix("2^") {
            let k: u32 = k.parse().map_err(|_| bad("bad exponent"))?;
            BigInt::one() << k
        } else {
            q.parse().map_err(|_| bad("bad denominator"))?
        };
        if denom.is_positive() {
            Ok(BigRational::new(numer, denom))
        } else {
            Err(bad("denominator must be positive"))
        }
    } else if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad("bad integer part"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("bad fractional part"));
        }
        let scale = num::pow::pow(BigInt::from(10), frac.len());
        let frac: BigInt = frac.parse().map_err(|_| bad("bad fractional part"))?;
        let abs = BigRational::new(int.abs() * &scale + frac, scale);
        Ok(if negative { -abs } else { abs })
    } else {
        let n: BigInt = s.parse().map_err(|_| bad("expected an integer, fraction, or decimal"))?;
        Ok(BigRational::from_integer(n))
    }
}

// ---------------------------------------------------------------------------
// The codec
// ---------------------------------------------------------------------------

/// Value of a sign string: the leading run of `z` equal symbols counts
/// `±z` in unary, and each symbol after the run contributes `±1/2^i` with
/// `i` counted from 1 at the first post-run position. The empty string is 0
/// and the infinite strings are `±inf`.
pub fn phi(s: &SignString) -> ExtReal {
    let v = match s {
        SignString::PosInf => return ExtReal::PosInf,
        SignString::NegInf => return ExtReal::NegInf,
        SignString::Finite(v) => v,
    };
    if v.is_empty() {
        return ExtReal::zero();
    }
    let lead = v[0];
    let z = v.iter().take_while(|&&c| c == lead).count();
    let n = v.len();
    let exp = (n - z) as u32;
    // Over the common denominator 2^exp: the unary part is z·2^exp and the
    // symbol at position i (0-based) carries weight 2^(n-1-i).
    let mut num = BigInt::from(lead.value() * z as i64) << exp;
    for (i, c) in v.iter().enumerate().skip(z) {
        num += BigInt::from(c.value()) << (n - 1 - i);
    }
    ExtReal::Finite(Dyadic::new(num, exp))
}

/// The unique sign string denoting `x`: emit `⌈|x|⌉` copies of the sign of
/// `x`, then repeatedly emit the sign of the remaining error while halving
/// the step weight, stopping when the running sum hits `x` exactly. Every
/// dyadic is reached in finitely many steps, and `encode(phi(s)) == s` for
/// all finite `s`.
pub fn encode(x: &ExtReal) -> SignString {
    let d = match x {
        ExtReal::PosInf => return SignString::PosInf,
        ExtReal::NegInf => return SignString::NegInf,
        ExtReal::Finite(d) => d,
    };
    if d.is_zero() {
        return SignString::empty();
    }
    let lead = if d.is_positive() { Sign::Plus } else { Sign::Minus };
    let n0 = d.abs_ceil();
    let mut out = vec![lead; n0.to_usize().expect("unary part fits in memory")];
    let mut sum = Dyadic::from_bigint(if d.is_positive() { n0 } else { -n0 });
    // Step weight 1/2^k. After the unary stage |x - sum| < 1, and each step
    // at most halves the gap to the nearest representable value; for a
    // denominator 2^e the loop stops by k = e + 1.
    let mut k = 1u32;
    while sum != *d {
        let step = if *d < sum {
            out.push(Sign::Minus);
            -&Dyadic::half_power(k)
        } else {
            out.push(Sign::Plus);
            Dyadic::half_power(k)
        };
        sum = &sum + &step;
        k += 1;
    }
    SignString::Finite(out)
}

/// The first `max_len` symbols of the (possibly infinite) greedy expansion
/// of an arbitrary rational; equals [`encode`] whenever the expansion
/// terminates within the budget. The truncation error is below the weight of
/// the first omitted symbol.
pub fn encode_approx(x: &BigRational, max_len: usize) -> SignString {
    if x.is_zero() || max_len == 0 {
        return SignString::empty();
    }
    let lead = if x.is_positive() { Sign::Plus } else { Sign::Minus };
    let n0 = x.abs().ceil().to_integer();
    if n0 > BigInt::from(max_len) {
        return SignString::Finite(vec![lead; max_len]);
    }
    let n0 = n0.to_usize().expect("checked against max_len");
    let mut out = vec![lead; n0];
    let mut sum = BigRational::from_integer(BigInt::from(lead.value() * n0 as i64));
    let mut w = BigRational::new(BigInt::one(), BigInt::from(2));
    while out.len() < max_len && sum != *x {
        if *x < sum {
            out.push(Sign::Minus);
            sum -= &w;
        } else {
            out.push(Sign::Plus);
            sum += &w;
        }
        w /= BigInt::from(2);
    }
    SignString::Finite(out)
}

// ---------------------------------------------------------------------------
// Simplicity
// ---------------------------------------------------------------------------

/// The simplest dyadic strictly inside an interval: the one whose sign
/// string is shortest (ties cannot arise). `None` bounds leave that side
/// open, as does the matching infinity; a `+inf` lower bound or `-inf`
/// upper bound leaves nothing strictly inside, as does an ill-ordered pair.
pub fn simplest_between(lo: Option<&ExtReal>, hi: Option<&ExtReal>) -> Result<Dyadic, RealsError> {
    let err = || RealsError::EmptyInterval {
        lo: lo.map_or("unbounded".into(), |v| v.to_string()),
        hi: hi.map_or("unbounded".into(), |v| v.to_string()),
    };
    let lo = match lo {
        None | Some(ExtReal::NegInf) => None,
        Some(ExtReal::PosInf) => return Err(err()),
        Some(ExtReal::Finite(d)) => Some(d),
    };
    let hi = match hi {
        None | Some(ExtReal::PosInf) => None,
        Some(ExtReal::NegInf) => return Err(err()),
        Some(ExtReal::Finite(d)) => Some(d),
    };
    if let (Some(l), Some(h)) = (lo, hi) {
        if l >= h {
            return Err(err());
        }
    }
    Ok(simplest_dyadic(lo, hi))
}

/// Core of [`simplest_between`] on finite bounds already known to be
/// well-ordered.
pub(crate) fn simplest_dyadic(lo: Option<&Dyadic>, hi: Option<&Dyadic>) -> Dyadic {
    let zero = Dyadic::zero();
    match (lo, hi) {
        (None, None) => zero,
        (Some(l), None) => {
            if *l < zero {
                zero
            } else {
                // Shortest strings are unary, so the winner is the smallest
                // integer strictly above the bound.
                Dyadic::from_bigint(l.floor() + 1)
            }
        }
        (None, Some(h)) => -&simplest_dyadic(Some(&-h), None),
        (Some(l), Some(h)) => {
            if *l < zero && zero < *h {
                zero
            } else if *h <= zero {
                -&simplest_dyadic(Some(&-h), Some(&-l))
            } else {
                let n = Dyadic::from_bigint(l.floor() + 1);
                if n < *h {
                    // An integer inside the interval beats every proper
                    // fraction there (fractions spell strictly longer).
                    n
                } else {
                    // No integer inside: bisect from the unit interval
                    // around the bounds; the first midpoint to land
                    // strictly inside is the shortest spelling.
                    let mut a = Dyadic::from_bigint(l.floor());
                    let mut b = &a + &Dyadic::from_int(1);
                    let half = Dyadic::half_power(1);
                    loop {
                        let m = &(&a + &b) * &half;
                        if m <= *l {
                            a = m;
                        } else if m >= *h {
                            b = m;
                        } else {
                            return m;
                        }
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Strings as games and back
// ---------------------------------------------------------------------------

/// Present a finite string as a signed game over its prefixes: every proper
/// prefix becomes an option of the string it extends, on the left when it
/// compares below under [`lex_cmp`] and on the right when above. Prefixes of
/// the same string never compare equal, so the split is total. The result
/// shares one node per prefix and is well-founded by construction.
pub fn gamma(s: &SignString) -> Result<SignedGame, RealsError> {
    let v = s.signs().ok_or(RealsError::InfiniteString)?;
    let n = v.len();
    let mut left = Vec::new();
    let mut right = Vec::new();
    // Node i is the prefix of length i; the root is the whole string.
    for i in 0..=n {
        for j in 0..i {
            match lex_cmp_signs(&v[..j], &v[..i]) {
                Ordering::Less => left.push((i, j)),
                Ordering::Greater => right.push((i, j)),
                Ordering::Equal => unreachable!("distinct prefixes never compare equal"),
            }
        }
    }
    Ok(SignedGame::new(n + 1, left, right, n).expect("prefix graph is well-formed"))
}

/// The dyadic value of a well-founded numeric game: recursively, the
/// simplest value strictly between the greatest left-option value and the
/// least right-option value. Errors if the game has a cycle or if some
/// position's options fail the strict left-below-right ordering.
pub fn game_value(g: &SignedGame) -> Result<Dyadic, RealsError> {
    if !g.is_wellfounded() {
        return Err(RealsError::CyclicGame);
    }
    fn value_at(g: &SignedGame, node: usize, memo: &mut [Option<Dyadic>]) -> Result<Dyadic, RealsError> {
        if let Some(v) = &memo[node] {
            return Ok(v.clone());
        }
        let mut lo: Option<Dyadic> = None;
        for &a in g.left_options(node) {
            let v = value_at(g, a, memo)?;
            if lo.as_ref().is_none_or(|m| v > *m) {
                lo = Some(v);
            }
        }
        let mut hi: Option<Dyadic> = None;
        for &b in g.right_options(node) {
            let v = value_at(g, b, memo)?;
            if hi.as_ref().is_none_or(|m| v < *m) {
                hi = Some(v);
            }
        }
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l >= h {
                return Err(RealsError::NonNumeric);
            }
        }
        let v = simplest_dyadic(lo.as_ref(), hi.as_ref());
        memo[node] = Some(v.clone());
        Ok(v)
    }
    let mut memo = vec![None; g.node_count()];
    value_at(g, g.root(), &mut memo)
}

/// The sign string spelling a game's value; inverse to [`gamma`] up to game
/// equivalence, and invariant under it.
pub fn upsilon(g: &SignedGame) -> Result<SignString, RealsError> {
    Ok(encode(&ExtReal::Finite(game_value(g)?)))
}
