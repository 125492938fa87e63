//! Ingleton's inequality on subset quadruples:
//!
//!   f(AB) + f(AC) + f(BC) + f(AD) + f(BD)
//!     >= f(A) + f(B) + f(ABC) + f(ABD) + f(CD)
//!
//! Every linear polymatroid satisfies it; the Vamos matroid and the
//! four-element violator in [`crate::corpus`] do not.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rat::Rational;
use crate::setfn::{SetFunction, SubsetMask};
use crate::{Error, Result};

/// Largest ground set for which the exhaustive quadruple scan (2^{4n}
/// quadruples) is allowed.
pub const MAX_EXHAUSTIVE: usize = 4;

/// Slack of Ingleton's inequality at one quadruple; `satisfied` iff the
/// left-hand side is at least the right-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IngletonReport {
    pub delta: Rational,
    pub quadruple: [SubsetMask; 4],
    pub satisfied: bool,
}

/// delta = LHS - RHS of Ingleton's inequality at (A, B, C, D).
pub fn ingleton_delta(
    f: &SetFunction,
    a: SubsetMask,
    b: SubsetMask,
    c: SubsetMask,
    d: SubsetMask,
) -> IngletonReport {
    let v = |m: SubsetMask| f.value(m);
    let lhs = v(a.union(b)) + v(a.union(c)) + v(b.union(c)) + v(a.union(d)) + v(b.union(d));
    let rhs = v(a) + v(b) + v(a.union(b).union(c)) + v(a.union(b).union(d)) + v(c.union(d));
    let delta = lhs - rhs;
    let satisfied = delta >= Rational::from_integer(0.into());
    IngletonReport {
        delta,
        quadruple: [a, b, c, d],
        satisfied,
    }
}

/// How to search for violations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    /// Every quadruple, lexicographic on the (A, B, C, D) bit patterns.
    /// Only allowed for n <= 4.
    Exhaustive,
    /// `count` quadruples drawn from a seeded generator.
    Sample { count: u64, seed: u64 },
}

/// Returns the first violating quadruple found, or `None`. Exhaustive scans
/// report the lexicographically smallest violation.
pub fn ingleton_scan(f: &SetFunction, mode: ScanMode) -> Result<Option<IngletonReport>> {
    match mode {
        ScanMode::Exhaustive => {
            let n = f.ground().n();
            if n > MAX_EXHAUSTIVE {
                return Err(Error::CapExceeded(format!(
                    "exhaustive Ingleton scan needs n <= {MAX_EXHAUSTIVE}, got {n}"
                )));
            }
            for a in f.ground().masks() {
                for b in f.ground().masks() {
                    for c in f.ground().masks() {
                        for d in f.ground().masks() {
                            let report = ingleton_delta(f, a, b, c, d);
                            if !report.satisfied {
                                return Ok(Some(report));
                            }
                        }
                    }
                }
            }
            Ok(None)
        }
        ScanMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let size = f.ground().num_subsets() as u32;
            for _ in 0..count {
                let mut q = [SubsetMask::from_bits(0); 4];
                for slot in &mut q {
                    *slot = SubsetMask::from_bits(rng.gen_range(0..size));
                }
                let report = ingleton_delta(f, q[0], q[1], q[2], q[3]);
                if !report.satisfied {
                    return Ok(Some(report));
                }
            }
            Ok(None)
        }
    }
}
