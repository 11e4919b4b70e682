//! The decision thresholds of the analysis, computed exactly.
//!
//! For an automaton with maximal absolute weight `m_A`, state count `n`, and
//! discounting factor `lambda`:
//!
//! * `M = 2 * lambda/(lambda-1) * m_A` — once two same-length runs are more
//!   than `M` apart (normalized), their gap can only grow.
//! * `N = lambda^E * ((n-1)*M - M) + M` with `E = n^2 * 2^(n^2)` — a gap
//!   above `N` implies unboundedly large recoverable gaps.
//! * `C = lambda/(lambda-1) * (N*n + 2*m_A)` — the vector-tracking cutoff,
//!   strictly above `N` whenever the automaton has any weight at all.
//!
//! `N` and `C` are astronomically large already for `n = 3` (the exponent is
//! 4608), so they are kept both as exact rationals and in a symbolic affine
//! form `lambda^E * c + d` for printing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::automaton::Automaton;
use crate::error::{Error, Result};

/// Default cap on the exponent `E = n^2 * 2^(n^2)`; reached exactly at
/// `n = 4`. This is a desk-scale resource guard, not a correctness bound.
pub const DEFAULT_EXPONENT_CAP: u64 = 1 << 20;

/// Exact value of the affine form `coeff * base^exp + offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerAffine {
    pub base: BigInt,
    pub exp: BigInt,
    pub coeff: BigRational,
    pub offset: BigRational,
}

impl PowerAffine {
    /// Materializes the value; the exponent must fit the given cap.
    pub fn value(&self, cap: u64) -> Result<BigRational> {
        if self.coeff.is_zero() {
            return Ok(self.offset.clone());
        }
        let exp = self
            .exp
            .to_u64()
            .filter(|&e| e <= cap)
            .ok_or_else(|| Error::ExponentCap {
                exponent: self.exp.clone(),
                cap,
            })?;
        let pow = BigRational::from(Pow::pow(&self.base, exp));
        Ok(&self.coeff * pow + &self.offset)
    }
}

impl std::fmt::Display for PowerAffine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "{}", self.offset);
        }
        write!(f, "{}^{} * {}", self.base, self.exp, self.coeff)?;
        if self.offset.is_positive() {
            write!(f, " + {}", self.offset)?;
        } else if self.offset.is_negative() {
            write!(f, " - {}", -&self.offset)?;
        }
        Ok(())
    }
}

/// The four thresholds of an automaton, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantSet {
    pub m_a: BigInt,
    pub big_m: BigRational,
    pub big_n: BigRational,
    pub big_c: BigRational,
    /// `N` in symbolic form `lambda^E * c + d`.
    pub n_symbolic: PowerAffine,
    /// `C` in symbolic form `lambda^E * c + d`.
    pub c_symbolic: PowerAffine,
}

/// Maximal absolute value of a transition weight or a final weight; 0 when
/// the automaton has neither.
pub fn max_weight(a: &Automaton) -> BigInt {
    a.max_abs_weight()
}

/// Computes all four constants with the default exponent cap.
pub fn compute_constants(a: &Automaton) -> Result<ConstantSet> {
    compute_constants_with_cap(a, DEFAULT_EXPONENT_CAP)
}

/// Computes all four constants, erroring when the exponent `n^2 * 2^(n^2)`
/// exceeds `cap`. The cap is a resource knob: raising it trades memory and
/// time for larger state counts.
pub fn compute_constants_with_cap(a: &Automaton, cap: u64) -> Result<ConstantSet> {
    let n = a.state_count();
    let lambda = a.lambda().clone();
    let m_a = max_weight(a);

    let ratio = BigRational::new(lambda.clone(), &lambda - BigInt::one());
    let big_m = BigRational::from(BigInt::from(2)) * &ratio * BigRational::from(m_a.clone());

    // E = n^2 * 2^(n^2); kept as a BigInt since it overflows u64 by n = 6.
    let n_sq = BigInt::from(n) * BigInt::from(n);
    let exponent = match n_sq.to_u64() {
        Some(e) if e < u32::MAX as u64 => &n_sq * (BigInt::one() << (e as usize)),
        _ => {
            return Err(Error::ExponentCap {
                exponent: n_sq,
                cap,
            })
        }
    };

    let n_coeff = BigRational::from(BigInt::from(n as i64 - 2)) * &big_m;
    let n_offset = big_m.clone();
    let n_symbolic = PowerAffine {
        base: lambda.clone(),
        exp: exponent.clone(),
        coeff: n_coeff.clone(),
        offset: n_offset.clone(),
    };

    // C = lambda/(lambda-1) * (N*n + 2*m_A), pushed through the affine form.
    let n_states = BigRational::from(BigInt::from(n));
    let c_symbolic = PowerAffine {
        base: lambda.clone(),
        exp: exponent,
        coeff: &ratio * &n_states * &n_coeff,
        offset: &ratio * (&n_states * &n_offset + BigRational::from(BigInt::from(2) * &m_a)),
    };

    let big_n = n_symbolic.value(cap)?;
    let big_c = c_symbolic.value(cap)?;

    Ok(ConstantSet {
        m_a,
        big_m,
        big_n,
        big_c,
        n_symbolic,
        c_symbolic,
    })
}
