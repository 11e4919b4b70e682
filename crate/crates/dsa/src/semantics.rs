//! Exact discounted-sum evaluation.
//!
//! Words are evaluated by dynamic programming over positions and states with
//! arbitrary-precision integer arithmetic; no floating point is used anywhere.
//! Values are represented as `num / lambda^exp` in a canonical form so that
//! equality and ordering are cheap and unambiguous.

use num_bigint::BigInt;
use num_traits::Zero;
use std::cmp::Ordering;

use crate::automaton::{Automaton, StateSet, Word};
use crate::error::{Error, Result};

/// Exact value `num * lambda^(-exp)`.
///
/// Canonical form: `exp == 0`, or `lambda` does not divide `num`; the zero
/// value is always stored with `exp == 0`. Equality and hashing are
/// structural, which matches value equality exactly because of canonicity.
/// Ordering and arithmetic need the discounting factor, so they are exposed
/// as `*_with(&self, ..., lambda)` methods rather than trait impls.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaledValue {
    num: BigInt,
    exp: u32,
}

impl ScaledValue {
    /// Canonicalizing constructor.
    pub fn new(mut num: BigInt, mut exp: u32, lambda: &BigInt) -> Self {
        debug_assert!(*lambda >= BigInt::from(2));
        if num.is_zero() {
            return ScaledValue { num, exp: 0 };
        }
        while exp > 0 && (&num % lambda).is_zero() {
            num /= lambda;
            exp -= 1;
        }
        ScaledValue { num, exp }
    }

    pub fn from_int(num: BigInt) -> Self {
        ScaledValue { num, exp: 0 }
    }

    pub fn zero() -> Self {
        ScaledValue {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Both sides scaled to the larger exponent and compared exactly.
    pub fn cmp_with(&self, other: &Self, lambda: &BigInt) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = &self.num * lambda.pow(exp - self.exp);
        let b = &other.num * lambda.pow(exp - other.exp);
        a.cmp(&b)
    }

    pub fn add_with(&self, other: &Self, lambda: &BigInt) -> Self {
        let exp = self.exp.max(other.exp);
        let a = &self.num * lambda.pow(exp - self.exp);
        let b = &other.num * lambda.pow(exp - other.exp);
        ScaledValue::new(a + b, exp, lambda)
    }

    pub fn neg(&self) -> Self {
        ScaledValue {
            num: -self.num.clone(),
            exp: self.exp,
        }
    }

    pub fn sub_with(&self, other: &Self, lambda: &BigInt) -> Self {
        self.add_with(&other.neg(), lambda)
    }

    /// Multiplies by `lambda^(-k)`.
    pub fn shift_down(&self, k: u32, lambda: &BigInt) -> Self {
        ScaledValue::new(self.num.clone(), self.exp + k, lambda)
    }

    pub fn to_rational(&self, lambda: &BigInt) -> num_rational::BigRational {
        num_rational::BigRational::new(self.num.clone(), lambda.pow(self.exp))
    }

    /// `num` when `exp == 0`, otherwise `num/lambda^exp` (e.g. `7/2^3`).
    pub fn display(&self, lambda: &BigInt) -> String {
        if self.exp == 0 {
            format!("{}", self.num)
        } else {
            format!("{}/{}^{}", self.num, lambda, self.exp)
        }
    }
}

/// A [`ScaledValue`] extended with a greatest element for "no run exists".
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtendedValue {
    Finite(ScaledValue),
    Infinite,
}

impl ExtendedValue {
    pub fn zero() -> Self {
        ExtendedValue::Finite(ScaledValue::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&ScaledValue> {
        match self {
            ExtendedValue::Finite(v) => Some(v),
            ExtendedValue::Infinite => None,
        }
    }

    /// Infinity compares strictly greater than every finite value.
    pub fn cmp_with(&self, other: &Self, lambda: &BigInt) -> Ordering {
        match (self, other) {
            (ExtendedValue::Infinite, ExtendedValue::Infinite) => Ordering::Equal,
            (ExtendedValue::Infinite, ExtendedValue::Finite(_)) => Ordering::Greater,
            (ExtendedValue::Finite(_), ExtendedValue::Infinite) => Ordering::Less,
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => a.cmp_with(b, lambda),
        }
    }

    /// Infinity absorbs addition.
    pub fn add_with(&self, other: &Self, lambda: &BigInt) -> Self {
        match (self, other) {
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => {
                ExtendedValue::Finite(a.add_with(b, lambda))
            }
            _ => ExtendedValue::Infinite,
        }
    }

    pub fn shift_down(&self, k: u32, lambda: &BigInt) -> Self {
        match self {
            ExtendedValue::Finite(v) => ExtendedValue::Finite(v.shift_down(k, lambda)),
            ExtendedValue::Infinite => ExtendedValue::Infinite,
        }
    }

    pub fn min_with(self, other: Self, lambda: &BigInt) -> Self {
        if self.cmp_with(&other, lambda) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn display(&self, lambda: &BigInt) -> String {
        match self {
            ExtendedValue::Finite(v) => v.display(lambda),
            ExtendedValue::Infinite => "inf".into(),
        }
    }
}

/// An integer extended with `+infinity`; the codomain of normalized gaps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtendedInt {
    Finite(BigInt),
    Infinite,
}

impl ExtendedInt {
    pub fn as_finite(&self) -> Option<&BigInt> {
        match self {
            ExtendedInt::Finite(n) => Some(n),
            ExtendedInt::Infinite => None,
        }
    }
}

impl std::fmt::Display for ExtendedInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedInt::Finite(n) => write!(f, "{n}"),
            ExtendedInt::Infinite => write!(f, "inf"),
        }
    }
}

// The forward pass keeps, per state, the minimal run value scaled by
// lambda^(i-1) after i symbols, which stays an integer throughout.
fn forward_pass(a: &Automaton, w: &Word, from: &StateSet) -> Vec<Option<BigInt>> {
    let n = a.state_count();
    let mut cur: Vec<Option<BigInt>> = (0..n)
        .map(|q| from.contains(q).then(BigInt::zero))
        .collect();
    for &sym in w.symbols() {
        let mut next: Vec<Option<BigInt>> = vec![None; n];
        for t in a.transitions_on(sym) {
            if let Some(v) = &cur[t.src] {
                let cand = v * a.lambda() + &t.weight;
                match &next[t.dst] {
                    Some(best) if *best <= cand => {}
                    _ => next[t.dst] = Some(cand),
                }
            }
        }
        cur = next;
    }
    cur
}

fn scaled_from_forward(v: &BigInt, len: usize, lambda: &BigInt) -> ScaledValue {
    if len == 0 {
        ScaledValue::zero()
    } else {
        ScaledValue::new(v.clone(), (len - 1) as u32, lambda)
    }
}

/// Per-state minimal run values on `w` starting anywhere in `from`, without
/// final weights: entry `q` is the minimum over runs from `from` to `q`.
pub fn state_values(a: &Automaton, w: &Word, from: &StateSet) -> Result<Vec<ExtendedValue>> {
    a.check_word(w)?;
    let fwd = forward_pass(a, w, from);
    Ok(fwd
        .iter()
        .map(|v| match v {
            Some(v) => ExtendedValue::Finite(scaled_from_forward(v, w.len(), a.lambda())),
            None => ExtendedValue::Infinite,
        })
        .collect())
}

/// Per-state minimal accepting-continuation values: entry `q` is the minimal
/// weight of an accepting run on `z` starting in `q`, including the final
/// weight discounted by `lambda^(-|z|)`.
pub fn suffix_values(a: &Automaton, z: &Word) -> Result<Vec<ExtendedValue>> {
    a.check_word(z)?;
    let n = a.state_count();
    let lambda = a.lambda();
    // cur[q] = minimal value of the remaining suffix from q, scaled by
    // lambda^(number of remaining symbols).
    let mut cur: Vec<Option<BigInt>> = (0..n).map(|q| a.final_weight(q).cloned()).collect();
    let mut pow = BigInt::from(1);
    for &sym in z.symbols().iter().rev() {
        pow *= lambda;
        let mut prev: Vec<Option<BigInt>> = vec![None; n];
        for t in a.transitions_on(sym) {
            if let Some(v) = &cur[t.dst] {
                let cand = &t.weight * &pow + v;
                match &prev[t.src] {
                    Some(best) if *best <= cand => {}
                    _ => prev[t.src] = Some(cand),
                }
            }
        }
        cur = prev;
    }
    Ok(cur
        .iter()
        .map(|v| match v {
            Some(v) => ExtendedValue::Finite(ScaledValue::new(v.clone(), z.len() as u32, lambda)),
            None => ExtendedValue::Infinite,
        })
        .collect())
}

/// Minimal run value on `w` from `from` to `to`.
///
/// With `with_final` off this is the plain minimal run weight; with it on,
/// `to` is intersected with the accepting set and the discounted final weight
/// `lambda^(-|w|) * fval(q)` is added. Returns infinity when no such run
/// exists.
pub fn min_value(
    a: &Automaton,
    w: &Word,
    from: &StateSet,
    to: &StateSet,
    with_final: bool,
) -> Result<ExtendedValue> {
    a.check_word(w)?;
    let fwd = forward_pass(a, w, from);
    let lambda = a.lambda();
    let mut best: Option<BigInt> = None;
    for q in to.iter() {
        let Some(v) = &fwd[q] else { continue };
        let cand = if with_final {
            match a.final_weight(q) {
                Some(f) => {
                    if w.is_empty() {
                        f.clone()
                    } else {
                        v * lambda + f
                    }
                }
                None => continue,
            }
        } else {
            v.clone()
        };
        match &best {
            Some(b) if *b <= cand => {}
            _ => best = Some(cand),
        }
    }
    Ok(match best {
        Some(v) if with_final => ExtendedValue::Finite(ScaledValue::new(v, w.len() as u32, lambda)),
        Some(v) => ExtendedValue::Finite(scaled_from_forward(&v, w.len(), lambda)),
        None => ExtendedValue::Infinite,
    })
}

/// The value of `w`: the minimal accepting run from the initial states,
/// including final weights; infinity when no accepting run exists.
pub fn eval(a: &Automaton, w: &Word) -> Result<ExtendedValue> {
    min_value(
        a,
        w,
        &a.initial_set(),
        &StateSet::full(a.state_count()),
        true,
    )
}

/// The normalized difference `lambda^len * (x - y)`.
///
/// For values of runs of an integral automaton on a common word of length
/// `len` this is always an integer; a non-integral result therefore signals
/// an internal arithmetic bug and is reported as an error. `x` infinite with
/// `y` finite yields `+infinity`; both infinite (undefined) and `x` finite
/// with `y` infinite (negative-infinite, not a gap) are errors.
pub fn normalized_diff(
    x: &ExtendedValue,
    y: &ExtendedValue,
    len: usize,
    lambda: &BigInt,
) -> Result<ExtendedInt> {
    match (x, y) {
        (ExtendedValue::Infinite, ExtendedValue::Infinite) => {
            Err(Error::UndefinedGap("both values are infinite".into()))
        }
        (ExtendedValue::Infinite, ExtendedValue::Finite(_)) => Ok(ExtendedInt::Infinite),
        (ExtendedValue::Finite(_), ExtendedValue::Infinite) => Err(Error::UndefinedGap(
            "upper value finite but lower value infinite".into(),
        )),
        (ExtendedValue::Finite(x), ExtendedValue::Finite(y)) => {
            let d = x.sub_with(y, lambda);
            let len = len as u32;
            if d.exp() > len {
                return Err(Error::NonIntegral(format!(
                    "lambda^{len} * ({} - {}) has residual exponent {}",
                    x.display(lambda),
                    y.display(lambda),
                    d.exp() - len
                )));
            }
            Ok(ExtendedInt::Finite(d.num() * lambda.pow(len - d.exp())))
        }
    }
}
