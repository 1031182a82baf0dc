//! Finite sums of derivatives of Dirac deltas at rational points of the
//! circle, with cyclotomic coefficients.
//!
//! A term `(x, p, c)` stands for `c · δ_x^{(p)}`, acting on a test function
//! by `φ ↦ c · (-1)^p φ^{(p)}(x)`. The map from `(x, p)` to `c` never stores
//! a zero coefficient, so structural equality is equality of distributions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::circle::{orbit_contains, Angle, Arc, Endpoints, Window};
use crate::cyclotomic::CycloNumber;
use crate::error::{Error, Result};
use crate::rational::{int, ratio, Rational};

/// Largest field order the Fourier evaluation will build.
pub const MAX_FIELD_ORDER: u32 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub angle: Angle,
    pub order: u32,
}

#[derive(Clone, Default, PartialEq, Eq)]
pub struct Distribution {
    terms: BTreeMap<TermKey, CycloNumber>,
}

impl Distribution {
    pub fn zero() -> Distribution {
        Distribution::default()
    }

    /// `δ_x`.
    pub fn delta(x: Angle) -> Distribution {
        Distribution::term(x, 0, CycloNumber::one(1))
    }

    /// `c · δ_x^{(order)}`.
    pub fn term(x: Angle, order: u32, coeff: CycloNumber) -> Distribution {
        let mut d = Distribution::zero();
        d.add_term(x, order, coeff);
        d
    }

    pub fn from_terms<I>(terms: I) -> Distribution
    where
        I: IntoIterator<Item = (Angle, u32, CycloNumber)>,
    {
        let mut d = Distribution::zero();
        for (x, p, c) in terms {
            d.add_term(x, p, c);
        }
        d
    }

    /// Adds `c · δ_x^{(order)}` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, angle: Angle, order: u32, coeff: CycloNumber) {
        if coeff.is_zero() {
            return;
        }
        let key = TermKey { angle, order };
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = &*existing + &coeff;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in `(angle, order)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&Angle, u32, &CycloNumber)> {
        self.terms.iter().map(|(k, c)| (&k.angle, k.order, c))
    }

    pub fn coeff(&self, angle: &Angle, order: u32) -> Option<&CycloNumber> {
        self.terms.get(&TermKey {
            angle: angle.clone(),
            order,
        })
    }

    /// Distinct locations carrying a nonzero coefficient, increasing.
    pub fn support(&self) -> Vec<Angle> {
        let mut out: Vec<Angle> = Vec::new();
        for k in self.terms.keys() {
            if out.last() != Some(&k.angle) {
                out.push(k.angle.clone());
            }
        }
        out
    }

    pub fn max_derivative_order(&self) -> u32 {
        self.terms.keys().map(|k| k.order).max().unwrap_or(0)
    }

    /// Least common multiple of the coefficient field orders.
    pub fn field_order(&self) -> u32 {
        self.terms.values().fold(1, |acc, c| acc.lcm(&c.order()))
    }

    pub fn add(&self, other: &Distribution) -> Distribution {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.angle.clone(), k.order, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Distribution) -> Distribution {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Distribution {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, s: &CycloNumber) -> Distribution {
        if s.is_zero() {
            return Distribution::zero();
        }
        self.map_coeffs(|c| c * s)
    }

    pub fn scale_rational(&self, q: &Rational) -> Distribution {
        if q.is_zero() {
            return Distribution::zero();
        }
        self.map_coeffs(|c| c.scale(q))
    }

    fn map_coeffs(&self, f: impl Fn(&CycloNumber) -> CycloNumber) -> Distribution {
        Distribution {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), f(c)))
                .collect(),
        }
    }

    /// Complex conjugate of every coefficient.
    pub fn conj(&self) -> Distribution {
        self.map_coeffs(CycloNumber::conj)
    }

    /// `S_y f`: every location moves by `+y`.
    pub fn shift(&self, y: &Angle) -> Distribution {
        if y.is_zero() {
            return self.clone();
        }
        Distribution {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    (
                        TermKey {
                            angle: &k.angle + y,
                            order: k.order,
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// `f♯(ω) = f(-ω)`: `(x, p, c) ↦ (-x, p, (-1)^p c)`.
    pub fn reflect(&self) -> Distribution {
        Distribution {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let coeff = if k.order % 2 == 1 { -c } else { c.clone() };
                    (
                        TermKey {
                            angle: -&k.angle,
                            order: k.order,
                        },
                        coeff,
                    )
                })
                .collect(),
        }
    }

    /// `ω ↦ conj(f(-ω))`.
    pub fn reflect_conj(&self) -> Distribution {
        self.reflect().conj()
    }

    /// `f ∗ g`: locations add, derivative orders add, coefficients multiply.
    pub fn convolve(&self, other: &Distribution) -> Distribution {
        let mut out = Distribution::zero();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out.add_term(&a.angle + &b.angle, a.order + b.order, c * d);
            }
        }
        out
    }

    /// `f^{∗p}` by repeated squaring.
    pub fn convolve_power(&self, p: u32) -> Result<Distribution> {
        if p == 0 {
            return Err(Error::InvalidParameter(
                "convolution power needs p >= 1".into(),
            ));
        }
        let mut e = p;
        let mut base = self.clone();
        let mut acc: Option<Distribution> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.convolve(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.convolve(&base);
            }
        }
        Ok(acc.expect("p >= 1"))
    }

    /// Keeps the terms whose location lies in `w`.
    pub fn restrict(&self, w: &Arc, mode: Endpoints) -> Distribution {
        Distribution {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| w.contains(&k.angle, mode))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// `Σ_{k ∈ Z_n} α^k S_{k/n} f`. Rejects `α` with `α^n ≠ 1`.
    pub fn symmetrize(&self, n: u32, alpha: &CycloNumber) -> Result<Distribution> {
        crate::circle::check_n(n)?;
        if !alpha.is_root_of_unity_of(n) {
            return Err(Error::NotRootOfUnity(alpha.to_expr(), n));
        }
        let mut out = Distribution::zero();
        let mut weight = CycloNumber::one(1);
        for k in 0..n {
            let shifted = self.shift(&Angle::from_ratio(k as i64, n as i64));
            out = out.add(&shifted.scale(&weight));
            weight = &weight * alpha;
        }
        Ok(out)
    }

    /// `f_j = (S_{j/n} f)|_I` for `j ∈ Z_n`, with `I` closed.
    pub fn components(&self, i: &Arc, n: u32) -> Result<Vec<Distribution>> {
        crate::circle::check_n(n)?;
        if *i.length() >= ratio(1, n as i64) {
            return Err(Error::InvalidParameter(format!(
                "component arc {i} is not shorter than 1/{n}"
            )));
        }
        if let Some(x) = self.support().iter().find(|x| !orbit_contains(i, n, x)) {
            return Err(Error::SupportOutsideOrbit(x.to_string()));
        }
        Ok((0..n)
            .map(|j| {
                self.shift(&Angle::from_ratio(j as i64, n as i64))
                    .restrict(i, Endpoints::Closed)
            })
            .collect())
    }

    /// Infimum of the lifted support inside the open window. `None` stands
    /// for `+∞`, the infimum of an empty support.
    pub fn inf_supp_within(&self, window: &Window) -> Option<Rational> {
        self.support().iter().filter_map(|x| window.lift_min(x)).min()
    }

    /// Mirror of [`Distribution::inf_supp_within`]; `None` stands for `-∞`.
    pub fn sup_supp_within(&self, window: &Window) -> Option<Rational> {
        self.support().iter().filter_map(|x| window.lift_max(x)).max()
    }

    /// Smallest lift of a support point lying in `arc`.
    pub fn inf_lift(&self, arc: &Arc, mode: Endpoints) -> Option<Rational> {
        self.support()
            .iter()
            .filter_map(|x| arc.lift(x, mode))
            .min()
    }

    /// Largest lift of a support point lying in `arc`.
    pub fn sup_lift(&self, arc: &Arc, mode: Endpoints) -> Option<Rational> {
        self.support()
            .iter()
            .filter_map(|x| arc.lift(x, mode))
            .max()
    }

    /// Whether `f` vanishes on the open window.
    pub fn vanishes_on(&self, window: &Window) -> bool {
        self.inf_supp_within(window).is_none()
    }

    /// Order of the smallest field holding every Fourier coefficient:
    /// `lcm(4, location denominators, coefficient orders)`.
    pub fn fourier_field_order(&self) -> Result<u32> {
        let mut order = BigInt::from(4u32.lcm(&self.field_order()));
        for k in self.terms.keys() {
            order = order.lcm(k.angle.denom());
        }
        order
            .to_u32()
            .filter(|&o| o <= MAX_FIELD_ORDER)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "Fourier evaluation would need Q(zeta_{order}), above the supported maximum"
                ))
            })
    }

    /// `f̂(m) = ⟨f, e^{-imω}⟩ = Σ c · (im)^p · e^{-imx}` with `x` in radians,
    /// evaluated exactly in the field of [`Distribution::fourier_field_order`].
    pub fn fourier_coeff(&self, m: i64) -> Result<CycloNumber> {
        self.fourier_coeff_in(m, self.fourier_field_order()?)
    }

    /// As [`Distribution::fourier_coeff`] in a caller-chosen field order,
    /// which must be a multiple of the minimal one.
    pub fn fourier_coeff_in(&self, m: i64, order: u32) -> Result<CycloNumber> {
        let minimal = self.fourier_field_order()?;
        if order % minimal != 0 {
            return Err(Error::InvalidParameter(format!(
                "field order {order} is not a multiple of {minimal}"
            )));
        }
        let big_order = BigInt::from(order);
        let mut acc = CycloNumber::zero(order);
        for (k, c) in &self.terms {
            let m_pow = int(m).pow(k.order as i32);
            if m_pow.is_zero() {
                continue;
            }
            // ζ_N^e with e = p·N/4 - m·x·N, x in turns.
            let x = k.angle.turns();
            let shift = (x * Rational::from_integer(big_order.clone()) * int(m)).to_integer();
            let quarter = BigInt::from(order / 4 * (k.order % 4));
            let e = (quarter - shift).mod_floor(&big_order);
            let root = CycloNumber::root_of_unity(e.to_i64().expect("bounded"), order);
            acc = acc + (&root * c).scale(&m_pow);
        }
        Ok(acc)
    }

    /// Human-readable form, e.g. `2·δ(1/8) - 2·δ'(5/8)`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in &self.terms {
            let delta = match k.order {
                0 => format!("δ({})", k.angle),
                1 => format!("δ'({})", k.angle),
                2 => format!("δ''({})", k.angle),
                p => format!("δ^({p})({})", k.angle),
            };
            let coeff = c.to_expr();
            let piece = if c.is_one() {
                delta
            } else if (-c).is_one() {
                format!("-{delta}")
            } else if coeff.contains(' ') {
                format!("({coeff})·{delta}")
            } else {
                format!("{coeff}·{delta}")
            };
            parts.push(piece);
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Distribution({})", self.to_text())
    }
}

/// Shorthand used throughout tests: `Σ c_k δ_{x_k}` with integer weights.
pub fn deltas(items: &[(i64, (i64, i64))]) -> Distribution {
    Distribution::from_terms(items.iter().map(|&(c, (p, q))| {
        (Angle::from_ratio(p, q), 0, CycloNumber::from_int(c))
    }))
}

/// `e^{-i m y}` for `y` in turns, as a root of unity.
pub fn modulation(m: i64, y: &Angle) -> CycloNumber {
    let q = y.denom().to_i64().expect("small denominator");
    let p = y.turns().numer().to_i64().expect("small numerator");
    CycloNumber::root_of_unity(-(m * p), q as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn a(p: i64, q: i64) -> Angle {
        Angle::from_ratio(p, q)
    }

    fn arc(lo: (i64, i64), len: (i64, i64)) -> Arc {
        Arc::new(ratio(lo.0, lo.1), ratio(len.0, len.1)).unwrap()
    }

    fn d1(p: i64, q: i64) -> Distribution {
        Distribution::term(a(p, q), 1, CycloNumber::one(1))
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let f = deltas(&[(1, (0, 1)), (-1, (0, 1))]);
        assert!(f.is_zero());
        assert_eq!(f, Distribution::zero());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(Distribution::delta(a(0, 1)).shift(&a(1, 2)), Distribution::delta(a(1, 2)));
        let f = deltas(&[(3, (1, 8)), (-2, (2, 3))]);
        assert_eq!(f.shift(&a(1, 2)).shift(&a(1, 2)), f);
        assert_eq!(d1(1, 8).shift(&a(1, 4)), d1(3, 8));
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(Distribution::delta(a(0, 1)).reflect(), Distribution::delta(a(0, 1)));
        assert_eq!(Distribution::delta(a(1, 8)).reflect(), Distribution::delta(a(7, 8)));
        assert_eq!(d1(1, 8).reflect(), d1(7, 8).neg());
        let f = deltas(&[(3, (1, 8)), (-2, (2, 3))]).add(&d1(1, 5));
        assert_eq!(f.reflect().reflect(), f);
    }

    #[test]
    fn convolve_examples() {
        let f = deltas(&[(3, (1, 8)), (-2, (2, 3))]).add(&d1(1, 5));
        assert_eq!(Distribution::delta(a(0, 1)).convolve(&f), f);
        assert_eq!(
            Distribution::delta(a(1, 8)).convolve(&Distribution::delta(a(1, 8))),
            Distribution::delta(a(1, 4))
        );
        let zd = deltas(&[(1, (0, 1)), (1, (1, 2))]).convolve(&deltas(&[(1, (0, 1)), (-1, (1, 2))]));
        assert!(zd.is_zero());
    }

    #[test]
    fn power_examples() {
        let f = deltas(&[(1, (0, 1)), (1, (1, 32)), (1, (1, 2))]);
        assert_eq!(f.convolve_power(1).unwrap(), f);
        assert_eq!(
            Distribution::delta(a(1, 32)).convolve_power(3).unwrap(),
            Distribution::delta(a(3, 32))
        );
        // brute force: the 27 ordered triples of {0, 1/32, 1/2}
        let pts = [a(0, 1), a(1, 32), a(1, 2)];
        let mut brute = Distribution::zero();
        for x in &pts {
            for y in &pts {
                for z in &pts {
                    brute.add_term(&(x + y) + z, 0, CycloNumber::one(1));
                }
            }
        }
        let cube = f.convolve_power(3).unwrap();
        assert_eq!(cube, brute);
        // 1/2 + 3/32 would need four summands, so it is absent
        let expect: Vec<Angle> = [0, 1, 2, 3, 16, 17, 18]
            .iter()
            .map(|&k| a(k, 32))
            .collect();
        assert_eq!(cube.support(), expect);
        assert_eq!(cube.coeff(&a(0, 1), 0), Some(&CycloNumber::from_int(4)));
        assert_eq!(cube.coeff(&a(1, 32), 0), Some(&CycloNumber::from_int(6)));
        assert_eq!(cube.coeff(&a(17, 32), 0), Some(&CycloNumber::from_int(6)));
        assert!(f.convolve_power(0).is_err());
    }

    #[test]
    fn restrict_examples() {
        let f = deltas(&[(1, (0, 1)), (1, (1, 2))]);
        assert_eq!(f.restrict(&arc((0, 1), (1, 4)), Endpoints::Closed), Distribution::delta(a(0, 1)));
        assert_eq!(f.restrict(&arc((-1, 4), (3, 4)), Endpoints::Closed), f);
        let g = deltas(&[(2, (1, 8)), (-2, (5, 8))]);
        assert!(g.restrict(&arc((-3, 8), (1, 2)), Endpoints::Open).is_zero());
    }

    #[test]
    fn symmetrize_examples() {
        let f = deltas(&[(1, (0, 1)), (-1, (1, 2))]);
        let one = CycloNumber::one(1);
        assert_eq!(f.symmetrize(1, &one).unwrap(), f);
        assert!(f.symmetrize(2, &one).unwrap().is_zero());
        assert_eq!(
            f.symmetrize(2, &CycloNumber::from_int(-1)).unwrap(),
            deltas(&[(2, (0, 1)), (-2, (1, 2))])
        );
        assert!(matches!(
            f.symmetrize(2, &CycloNumber::from_int(2)),
            Err(Error::NotRootOfUnity(_, 2))
        ));
        assert!(f.symmetrize(2, &CycloNumber::root_of_unity(1, 4)).is_err());
    }

    #[test]
    fn components_examples() {
        let p0 = Arc::point(&a(0, 1));
        let c = Distribution::delta(a(0, 1)).components(&p0, 2).unwrap();
        assert_eq!(c, vec![Distribution::delta(a(0, 1)), Distribution::zero()]);
        let c = deltas(&[(1, (0, 1)), (1, (1, 2))]).components(&p0, 2).unwrap();
        assert_eq!(c, vec![Distribution::delta(a(0, 1)); 2]);
        let c = deltas(&[(1, (1, 8)), (-1, (5, 8))])
            .components(&Arc::point(&a(1, 8)), 2)
            .unwrap();
        assert_eq!(c, vec![deltas(&[(1, (1, 8))]), deltas(&[(-1, (1, 8))])]);
        assert!(matches!(
            deltas(&[(1, (1, 4))]).components(&p0, 2),
            Err(Error::SupportOutsideOrbit(_))
        ));
    }

    #[test]
    fn inf_supp_within_examples() {
        let win = |lo: (i64, i64), hi: (i64, i64)| Window::new(ratio(lo.0, lo.1), ratio(hi.0, hi.1)).unwrap();
        let w = win((-3, 8), (1, 8));
        assert_eq!(Distribution::zero().inf_supp_within(&w), None);
        assert_eq!(
            deltas(&[(2, (0, 1)), (2, (1, 2))]).inf_supp_within(&w),
            Some(ratio(0, 1))
        );
        assert_eq!(deltas(&[(2, (1, 8)), (-2, (5, 8))]).inf_supp_within(&w), None);
        let g = deltas(&[(1, (15, 16)), (1, (1, 16))]);
        let centered = win((-1, 4), (1, 4));
        assert_eq!(g.inf_supp_within(&centered), Some(ratio(-1, 16)));
        assert_eq!(g.sup_supp_within(&centered), Some(ratio(1, 16)));
    }

    #[test]
    fn fourier_examples() {
        let d0 = Distribution::delta(a(0, 1));
        for m in -5..=5 {
            assert!(d0.fourier_coeff(m).unwrap().is_one());
        }
        assert_eq!(
            Distribution::delta(a(1, 2)).fourier_coeff(1).unwrap(),
            CycloNumber::from_int(-1)
        );
        let three_i = CycloNumber::imaginary_unit().scale(&crate::rational::int(3));
        assert_eq!(d1(0, 1).fourier_coeff(3).unwrap(), three_i);
        // derivative terms vanish at m = 0
        assert!(d1(1, 3).fourier_coeff(0).unwrap().is_zero());
    }

    #[test]
    fn modulation_matches_shift() {
        let f = deltas(&[(3, (1, 8)), (-2, (2, 3))]).add(&d1(1, 5));
        let y = a(3, 10);
        for m in -6..=6 {
            let lhs = f.shift(&y).fourier_coeff(m).unwrap();
            let rhs = &modulation(m, &y) * &f.fourier_coeff(m).unwrap();
            assert_eq!(lhs, rhs, "m = {m}");
        }
    }

    #[test]
    fn text_rendering() {
        let f = deltas(&[(2, (1, 8)), (-2, (5, 8))]).add(&d1(0, 1));
        assert_eq!(f.to_text(), "δ'(0/1) + 2·δ(1/8) - 2·δ(5/8)");
        assert_eq!(Distribution::zero().to_text(), "0");
    }
}
