//! Support analysis for convolutions on the circle.
//!
//! On the line the convex hull of `supp f ∗ g` is the sum of the hulls of
//! `supp f` and `supp g`. On the circle this can fail (there are zero
//! divisors), but only in a controlled way: if the supports sit inside
//! `R_n(I)` and `R_n(J)` with `|I| + |J| < 1/n` and the support of `f ∗ g`
//! starts strictly later than `inf I + inf J`, then both factors carry a
//! root-of-unity symmetry, witnessed by roots `α ≠ β` with `α^n = β^n = 1`.
//!
//! Everything here is constructive: the analyzers compute the hulls, the
//! shortfall `λ` (and its mirror `ρ`), and search the `n` roots of unity
//! for the witnesses, then re-check every claimed fact exactly. A failure to
//! find a witness is reported as [`Error::TheoremViolation`].
//!
//! [`Error::TheoremViolation`]: crate::error::Error::TheoremViolation

mod lemma;
mod pair;
mod power;
mod reflection;

pub use lemma::{lemma_alpha, vandermonde_matrix, vandermonde_product};
pub use pair::{Certificate, Corollary2Verdict, Fact, Role, Side, TitchmarshReport};
pub use power::PowerReport;
pub use reflection::{assemble, Decomposition, ReflectionCase, ReflectionMode, ReflectionOutcome};

use num_traits::Zero;

use crate::circle::{minimal_covering_arc, Angle, Arc};
use crate::cyclotomic::CycloNumber;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A root of unity `γ^m` with `γ = exp(2πi/n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub exponent: u32,
    pub n: u32,
    pub value: CycloNumber,
}

impl Root {
    pub fn new(exponent: u32, n: u32) -> Root {
        Root {
            exponent: exponent % n,
            n,
            value: CycloNumber::root_of_unity(exponent as i64, n),
        }
    }
}

/// Deliberate defects for checking that the test suites notice a broken
/// engine. Never enabled outside of such checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    /// Negates the `k = 1` term of every symmetrization.
    SymmetrizeSignFlip,
}

/// The analysis engine. The default value is the correct engine.
#[derive(Clone, Copy, Debug, Default)]
pub struct Engine {
    pub mutation: Mutation,
}

impl Engine {
    pub fn with_mutation(mutation: Mutation) -> Engine {
        Engine { mutation }
    }

    /// `Σ_{k ∈ Z_n} α^k S_{k/n} f`, subject to the configured mutation.
    pub fn symmetrize(&self, f: &Distribution, n: u32, alpha: &CycloNumber) -> Result<Distribution> {
        match self.mutation {
            Mutation::None => f.symmetrize(n, alpha),
            Mutation::SymmetrizeSignFlip => {
                let honest = f.symmetrize(n, alpha)?;
                if n < 2 {
                    return Ok(honest);
                }
                let first = f
                    .shift(&Angle::from_ratio(1, n as i64))
                    .scale(alpha);
                Ok(honest.sub(&first).sub(&first))
            }
        }
    }
}

/// The hull `I` of `f` with respect to `R_n`: the shortest closed arc with
/// `supp f ⊂ R_n(I)`, start in `[0, 1/n)`.
pub fn minimal_hull(f: &Distribution, n: u32) -> Result<Arc> {
    if f.is_zero() {
        return Err(Error::ZeroDistribution);
    }
    minimal_covering_arc(&f.support(), n)
}

/// `(f + S_{1/2} f, g - S_{1/2} g)`, whose convolution is zero.
pub fn make_zero_divisors(f: &Distribution, g: &Distribution) -> (Distribution, Distribution) {
    let half = Angle::half();
    (f.add(&f.shift(&half)), g.sub(&g.shift(&half)))
}

pub fn analyze_pair(f: &Distribution, g: &Distribution, n: u32) -> Result<TitchmarshReport> {
    Engine::default().analyze_pair(f, g, n, None)
}

pub fn check_corollary_n2(f: &Distribution, g: &Distribution) -> Result<Corollary2Verdict> {
    Engine::default().check_corollary_n2(f, g)
}

pub fn analyze_reflection(f: &Distribution) -> Result<ReflectionOutcome> {
    Engine::default().analyze_reflection(f, ReflectionMode::Plain)
}

pub fn analyze_power(f: &Distribution, n: u32, p: u32) -> Result<PowerReport> {
    Engine::default().analyze_power(f, n, p)
}

/// `[min, max]` of the lifts of `supp h` into `window` modulo `1/n`; `None`
/// for `h = 0`. A point with no lift is a theorem violation since every
/// caller has already established `supp h ⊂ R_n(window)`.
fn lifted_hull(h: &Distribution, window: &Arc, n: u32) -> Result<Option<Arc>> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for x in h.support() {
        let Some(t) = crate::circle::lift_into(&x, window, n) else {
            return Err(Error::TheoremViolation(format!(
                "support point {x} of the convolution lies outside R_{n}({window})"
            )));
        };
        if lo.as_ref().is_none_or(|l| t < *l) {
            lo = Some(t.clone());
        }
        if hi.as_ref().is_none_or(|h| t > *h) {
            hi = Some(t);
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok(Some(Arc::from_bounds(lo, hi)?)),
        _ => Ok(None),
    }
}

fn nonnegative(x: &Rational) -> bool {
    *x >= Rational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::deltas;
    use crate::rational::ratio;

    #[test]
    fn hull_examples() {
        let f = deltas(&[(1, (1, 16))]);
        assert_eq!(minimal_hull(&f, 2).unwrap(), Arc::point(&Angle::from_ratio(1, 16)));
        let f = deltas(&[(1, (0, 1)), (1, (1, 8)), (1, (1, 2)), (1, (5, 8))]);
        assert_eq!(
            minimal_hull(&f, 2).unwrap(),
            Arc::new(ratio(0, 1), ratio(1, 8)).unwrap()
        );
        let f = deltas(&[(1, (1, 16)), (1, (9, 16)), (1, (15, 16)), (-1, (7, 16))]);
        let hull = minimal_hull(&f, 2).unwrap();
        let centred = hull
            .relift_inside(2, &ratio(-1, 4), &ratio(1, 4))
            .unwrap();
        assert_eq!(centred, Arc::new(ratio(-1, 16), ratio(1, 8)).unwrap());
        assert_eq!(minimal_hull(&Distribution::zero(), 2), Err(Error::ZeroDistribution));
    }

    #[test]
    fn zero_divisor_examples() {
        let d0 = Distribution::delta(Angle::zero());
        let (a, b) = make_zero_divisors(&d0, &d0);
        assert_eq!(a, deltas(&[(1, (0, 1)), (1, (1, 2))]));
        assert_eq!(b, deltas(&[(1, (0, 1)), (-1, (1, 2))]));
        assert!(a.convolve(&b).is_zero());

        let f = Distribution::term(Angle::from_ratio(1, 8), 1, CycloNumber::one(1));
        let g = Distribution::delta(Angle::from_ratio(1, 3));
        let (a, b) = make_zero_divisors(&f, &g);
        assert!(!a.is_zero() && !b.is_zero());
        assert!(a.convolve(&b).is_zero());

        let (a, b) = make_zero_divisors(&Distribution::zero(), &g);
        assert!(a.is_zero());
        assert_eq!(b, g.sub(&g.shift(&Angle::half())));
        assert!(a.convolve(&b).is_zero());
    }

    #[test]
    fn mutated_symmetrize_differs_for_n_at_least_two() {
        let f = deltas(&[(1, (0, 1)), (-1, (1, 2))]);
        let one = CycloNumber::one(1);
        let broken = Engine::with_mutation(Mutation::SymmetrizeSignFlip);
        assert!(Engine::default().symmetrize(&f, 2, &one).unwrap().is_zero());
        assert!(!broken.symmetrize(&f, 2, &one).unwrap().is_zero());
    }
}
