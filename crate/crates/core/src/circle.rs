//! Points and closed arcs on the circle `R/Z`.
//!
//! Angles are measured in turns: `1/2` is the antipode (π radians) and the
//! rotation by `2π/n` is the rotation by `1/n`. Every endpoint is an exact
//! rational, so membership and ordering questions are decided exactly.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_fraction, int, parse_rational, ratio, rem_euclid, Rational};

/// A point of the circle, stored as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(Rational);

impl Angle {
    pub fn new(turns: Rational) -> Angle {
        Angle(rem_euclid(&turns, &Rational::one()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Angle {
        Angle::new(ratio(num, den))
    }

    pub fn zero() -> Angle {
        Angle(Rational::zero())
    }

    pub fn half() -> Angle {
        Angle(ratio(1, 2))
    }

    /// Representative in `[0, 1)`.
    pub fn turns(&self) -> &Rational {
        &self.0
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Parses `"p/q"` (turns) or `"p/q pi"` (radians, also `π`).
    pub fn parse(text: &str) -> Result<Angle> {
        let bad = |reason: String| Error::InvalidAngle {
            text: text.to_string(),
            reason,
        };
        let t = text.trim();
        let (body, radians) = if let Some(b) = t.strip_suffix("pi") {
            (b, true)
        } else if let Some(b) = t.strip_suffix('π') {
            (b, true)
        } else {
            (t, false)
        };
        let body = body.trim().trim_end_matches('*').trim();
        let value = if radians && body.is_empty() {
            Rational::one()
        } else {
            parse_rational(body).map_err(bad)?
        };
        Ok(if radians {
            Angle::new(value / int(2))
        } else {
            Angle::new(value)
        })
    }
}

impl FromStr for Angle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Angle> {
        Angle::parse(s)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_fraction(&self.0))
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({self})")
    }
}

impl Add for &Angle {
    type Output = Angle;
    fn add(self, rhs: &Angle) -> Angle {
        Angle::new(&self.0 + &rhs.0)
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        &self + &rhs
    }
}

impl Sub for &Angle {
    type Output = Angle;
    fn sub(self, rhs: &Angle) -> Angle {
        Angle::new(&self.0 - &rhs.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        &self - &rhs
    }
}

impl Neg for &Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::new(-&self.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        -&self
    }
}

/// Whether the endpoints of an arc belong to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoints {
    Closed,
    Open,
}

/// An arc `[lo, lo + length]` with `0 <= length < 1`.
///
/// `lo` is a lift to the real line and may lie outside `[0, 1)`: some
/// windows (for instance those centred at 0) only make sense as real
/// intervals. Two arcs covering the same point set but with different
/// lifts compare unequal; use [`Arc::same_points`] for set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    lo: Rational,
    length: Rational,
}

impl Arc {
    pub fn new(lo: Rational, length: Rational) -> Result<Arc> {
        if length.is_negative() || length >= Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "arc length {} outside [0, 1)",
                format_fraction(&length)
            )));
        }
        Ok(Arc { lo, length })
    }

    /// Arc from real endpoints `lo <= hi` with `hi - lo < 1`.
    pub fn from_bounds(lo: Rational, hi: Rational) -> Result<Arc> {
        let length = &hi - &lo;
        Arc::new(lo, length)
    }

    pub fn point(x: &Angle) -> Arc {
        Arc {
            lo: x.turns().clone(),
            length: Rational::zero(),
        }
    }

    pub fn inf(&self) -> &Rational {
        &self.lo
    }

    pub fn sup(&self) -> Rational {
        &self.lo + &self.length
    }

    pub fn length(&self) -> &Rational {
        &self.length
    }

    pub fn is_point(&self) -> bool {
        self.length.is_zero()
    }

    pub fn start_angle(&self) -> Angle {
        Angle::new(self.lo.clone())
    }

    /// The same arc rotated by `by` turns, keeping the lift continuous.
    pub fn shifted(&self, by: &Rational) -> Arc {
        Arc {
            lo: &self.lo + by,
            length: self.length.clone(),
        }
    }

    /// Whether both arcs describe the same subset of the circle.
    pub fn same_points(&self, other: &Arc) -> bool {
        self.length == other.length
            && rem_euclid(&(&self.lo - &other.lo), &Rational::one()).is_zero()
    }

    pub fn contains(&self, x: &Angle, mode: Endpoints) -> bool {
        self.lift(x, mode).is_some()
    }

    /// The lift of `x` (an integer translate) lying in this arc, if any.
    /// For `length < 1` there is at most one.
    pub fn lift(&self, x: &Angle, mode: Endpoints) -> Option<Rational> {
        let offset = rem_euclid(&(x.turns() - &self.lo), &Rational::one());
        let inside = match mode {
            Endpoints::Closed => offset <= self.length,
            Endpoints::Open => offset.is_positive() && offset < self.length,
        };
        inside.then(|| &self.lo + offset)
    }

    /// Re-lifts the arc by a multiple of `1/n` (and whole turns) so that it
    /// sits strictly inside the open real interval `(lo_bound, hi_bound)`.
    /// Returns the candidate with the smallest `inf` when several fit.
    pub fn relift_inside(&self, n: u32, lo_bound: &Rational, hi_bound: &Rational) -> Option<Arc> {
        let step = ratio(1, n as i64);
        // smallest translate with inf > lo_bound, then walk upward.
        let k0 = ((lo_bound - &self.lo) / &step).floor() + Rational::one();
        let lo = &self.lo + &k0 * &step;
        (&lo + &self.length < *hi_bound).then(|| Arc {
            lo,
            length: self.length.clone(),
        })
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{{{}}}", format_fraction(&self.lo))
        } else {
            write!(
                f,
                "[{}, {}]",
                format_fraction(&self.lo),
                format_fraction(&self.sup())
            )
        }
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Arc{self}")
    }
}

/// An open real interval `(lo, hi)` viewed through the covering map; any
/// length is allowed. A point of the circle lies in it when some lift does.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Window {
    lo: Rational,
    hi: Rational,
}

impl Window {
    pub fn new(lo: Rational, hi: Rational) -> Result<Window> {
        if hi < lo {
            return Err(Error::InvalidParameter(format!(
                "window ({}, {}) has negative length",
                format_fraction(&lo),
                format_fraction(&hi)
            )));
        }
        Ok(Window { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    /// Smallest lift of `x` strictly inside the window.
    pub fn lift_min(&self, x: &Angle) -> Option<Rational> {
        let mut t = &self.lo + rem_euclid(&(x.turns() - &self.lo), &Rational::one());
        if t == self.lo {
            t += Rational::one();
        }
        (t < self.hi).then_some(t)
    }

    /// Largest lift of `x` strictly inside the window.
    pub fn lift_max(&self, x: &Angle) -> Option<Rational> {
        let mut t = &self.hi - rem_euclid(&(&self.hi - x.turns()), &Rational::one());
        if t == self.hi {
            t -= Rational::one();
        }
        (t > self.lo).then_some(t)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_fraction(&self.lo), format_fraction(&self.hi))
    }
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Window{self}")
    }
}

/// Membership of `x` in `a`.
pub fn arc_contains(a: &Arc, x: &Angle, mode: Endpoints) -> bool {
    a.contains(x, mode)
}

/// Minkowski sum `i + j`. Both endpoints add as lifts.
pub fn arc_sum(i: &Arc, j: &Arc) -> Result<Arc> {
    let length = &i.length + &j.length;
    if length >= Rational::one() {
        return Err(Error::SumWrapsCircle(format_fraction(&length)));
    }
    Ok(Arc {
        lo: &i.lo + &j.lo,
        length,
    })
}

/// `p`-fold Minkowski sum `i + ... + i`.
pub fn arc_multiple(i: &Arc, p: u32) -> Result<Arc> {
    if p == 0 {
        return Err(Error::InvalidParameter("arc multiple needs p >= 1".into()));
    }
    (1..p).try_fold(i.clone(), |acc, _| arc_sum(&acc, i))
}

/// The rotates of an arc by multiples of `1/n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub arcs: Vec<Arc>,
    /// True iff the `n` rotates are pairwise disjoint, i.e. `|i| < 1/n`.
    pub disjoint: bool,
}

pub fn rn_orbit(i: &Arc, n: u32) -> Result<Orbit> {
    check_n(n)?;
    let step = ratio(1, n as i64);
    let arcs = (0..n)
        .map(|k| i.shifted(&(&step * int(k as i64))))
        .collect();
    Ok(Orbit {
        arcs,
        disjoint: i.length < step,
    })
}

/// Membership of `x` in `R_n(i)`.
pub fn orbit_contains(i: &Arc, n: u32, x: &Angle) -> bool {
    lift_mod(x, i, n).is_some()
}

/// Shortest closed arc `I` with every point in `R_n(I)`.
///
/// Points are reduced modulo `1/n`; the complement of the largest cyclic
/// gap between consecutive residues is the answer. Both endpoints are
/// residues of input points. Ties between equal gaps go to the smallest
/// start, and the start is reported in `[0, 1/n)`.
pub fn minimal_covering_arc(points: &[Angle], n: u32) -> Result<Arc> {
    check_n(n)?;
    if points.is_empty() {
        return Err(Error::InvalidParameter(
            "minimal covering arc of an empty set".into(),
        ));
    }
    let period = ratio(1, n as i64);
    let mut residues: Vec<Rational> = points
        .iter()
        .map(|p| rem_euclid(p.turns(), &period))
        .collect();
    residues.sort();
    residues.dedup();
    if residues.len() == 1 {
        return Arc::new(residues.pop().unwrap(), Rational::zero());
    }
    // gap `g` ends at residue `idx`; the arc starts there.
    let count = residues.len();
    let mut best: Option<(Rational, Rational)> = None;
    for idx in 0..count {
        let prev = if idx == 0 {
            &residues[count - 1] - &period
        } else {
            residues[idx - 1].clone()
        };
        let gap = &residues[idx] - prev;
        let start = &residues[idx];
        let better = match &best {
            None => true,
            Some((g, s)) => gap > *g || (gap == *g && start < s),
        };
        if better {
            best = Some((gap, start.clone()));
        }
    }
    let (gap, start) = best.expect("at least two residues");
    Arc::new(start, period - gap)
}

/// The lift `x + k/n + m` lying in `window`, where `|window| < 1/n`.
pub fn lift_into(x: &Angle, window: &Arc, n: u32) -> Option<Rational> {
    if n == 0 || window.length >= ratio(1, n as i64) {
        return None;
    }
    lift_mod(x, window, n)
}

fn lift_mod(x: &Angle, window: &Arc, n: u32) -> Option<Rational> {
    let period = ratio(1, n as i64);
    let offset = rem_euclid(&(x.turns() - &window.lo), &period);
    (offset <= window.length).then(|| &window.lo + offset)
}

pub(crate) fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("n must be a positive integer".into()))
    } else {
        Ok(())
    }
}
