//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is a polynomial in `ζ_N` of degree below `φ(N)`, i.e. a
//! residue modulo the cyclotomic polynomial `Φ_N`. Because `Φ_N` is the
//! minimal polynomial of `ζ_N`, this representation is unique: zero tests
//! and equality are plain comparisons of coefficient vectors.
//!
//! Coefficients are stored as an integer numerator vector over one common
//! positive denominator, kept in lowest terms. `Φ_N` is monic with integer
//! coefficients, so reducing a product never introduces new denominators.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{lcm_u32, Rational};

/// Precomputed data for one field order.
struct Field {
    order: u32,
    phi: usize,
    /// `ζ^e` reduced modulo `Φ_N`, for `e` in `0..N`.
    powers: Vec<Vec<BigInt>>,
}

fn field(order: u32) -> Arc<Field> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.read().unwrap().get(&order) {
        return f.clone();
    }
    let built = Arc::new(build_field(order));
    cache
        .write()
        .unwrap()
        .entry(order)
        .or_insert(built)
        .clone()
}

fn build_field(order: u32) -> Field {
    let modulus = cyclotomic_polynomial(order);
    let phi = modulus.len() - 1;
    let n = order as usize;
    let mut powers = Vec::with_capacity(n);
    // x^0 = 1, then multiply by x and fold the overflow back using the
    // monic relation x^phi = -(m_0 + m_1 x + ... + m_{phi-1} x^{phi-1}).
    let mut cur = vec![BigInt::zero(); phi];
    cur[0] = BigInt::one();
    for _ in 0..n {
        powers.push(cur.clone());
        let top = cur[phi - 1].clone();
        for k in (1..phi).rev() {
            cur[k] = cur[k - 1].clone();
        }
        cur[0] = BigInt::zero();
        if !top.is_zero() {
            for k in 0..phi {
                cur[k] -= &top * &modulus[k];
            }
        }
    }
    Field {
        order,
        phi,
        powers,
    }
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// `Φ_N` as integer coefficients, lowest degree first.
///
/// Computed by dividing `x^N - 1` exactly by `Φ_d` for every proper
/// divisor `d` of `N`. Panics if `N == 0`.
pub fn cyclotomic_polynomial(order: u32) -> Vec<BigInt> {
    assert!(order > 0, "cyclotomic polynomial needs a positive order");
    static CACHE: OnceLock<RwLock<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&order) {
        return p.clone();
    }
    let n = order as usize;
    let mut poly = vec![BigInt::zero(); n + 1];
    poly[0] = BigInt::from(-1);
    poly[n] = BigInt::one();
    for d in divisors(order) {
        if d == order {
            continue;
        }
        poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
    }
    cache.write().unwrap().insert(order, poly.clone());
    poly
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (k, dk) in den.iter().enumerate() {
            rem[i + k] -= &c * dk;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact division");
    quot
}

/// An element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CycloNumber {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloNumber {
    pub fn zero(order: u32) -> CycloNumber {
        let phi = field(order).phi;
        CycloNumber {
            order,
            num: vec![BigInt::zero(); phi],
            den: BigInt::one(),
        }
    }

    pub fn one(order: u32) -> CycloNumber {
        CycloNumber::from_rational(&Rational::one(), order)
    }

    pub fn from_int(v: i64) -> CycloNumber {
        CycloNumber::from_rational(&Rational::from_integer(BigInt::from(v)), 1)
    }

    pub fn from_rational(q: &Rational, order: u32) -> CycloNumber {
        let mut z = CycloNumber::zero(order);
        z.num[0] = q.numer().clone();
        z.den = q.denom().clone();
        z
    }

    /// `ζ_n^k` as an element of `Q(ζ_n)`.
    pub fn root_of_unity(k: i64, n: u32) -> CycloNumber {
        assert!(n > 0, "root of unity needs n >= 1");
        let f = field(n);
        let e = k.rem_euclid(n as i64) as usize;
        CycloNumber {
            order: n,
            num: f.powers[e].clone(),
            den: BigInt::one(),
        }
    }

    /// `ζ_n^k` as an element of `Q(ζ_N)`; requires `n | N`.
    pub fn root_of_unity_in(k: i64, n: u32, order: u32) -> Result<CycloNumber> {
        CycloNumber::root_of_unity(k, n).promote(order)
    }

    /// `i = ζ_4`.
    pub fn imaginary_unit() -> CycloNumber {
        CycloNumber::root_of_unity(1, 4)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in `Q`.
    pub fn to_rational(&self) -> Option<Rational> {
        let d = self.demote(1)?;
        Some(Rational::new(d.num[0].clone(), d.den))
    }

    /// Coefficients on the basis `1, ζ_N, ..., ζ_N^{φ(N)-1}`.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// `Σ v_e ζ_N^e` for a vector indexed by all exponents `0..N`, i.e. the
    /// image of a group-ring element of `Q[Z/N]`.
    pub fn from_group_ring(order: u32, v: &[Rational]) -> CycloNumber {
        assert_eq!(v.len(), order as usize, "group-ring vector needs one entry per exponent");
        let f = field(order);
        let den = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num = vec![BigInt::zero(); f.phi];
        for (e, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = c.numer() * (&den / c.denom());
            for (slot, b) in num.iter_mut().zip(&f.powers[e]) {
                if !b.is_zero() {
                    *slot += &scaled * b;
                }
            }
        }
        CycloNumber::from_parts(order, num, den)
    }

    fn from_parts(order: u32, mut num: Vec<BigInt>, mut den: BigInt) -> CycloNumber {
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c /= &g;
            }
            den /= &g;
        }
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        CycloNumber { order, num, den }
    }

    fn from_rational_coeffs(order: u32, coeffs: &[Rational]) -> CycloNumber {
        let phi = field(order).phi;
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num = vec![BigInt::zero(); phi];
        for (k, c) in coeffs.iter().enumerate().take(phi) {
            num[k] = c.numer() * (&den / c.denom());
        }
        CycloNumber::from_parts(order, num, den)
    }

    /// The same value in `Q(ζ_M)`; requires `N | M`.
    pub fn promote(&self, target: u32) -> Result<CycloNumber> {
        if target == self.order {
            return Ok(self.clone());
        }
        if target == 0 || target % self.order != 0 {
            return Err(Error::InvalidParameter(format!(
                "cannot promote Q(zeta_{}) into Q(zeta_{target})",
                self.order
            )));
        }
        let f = field(target);
        let step = (target / self.order) as usize;
        let mut num = vec![BigInt::zero(); f.phi];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let basis = &f.powers[(k * step) % f.order as usize];
            for (slot, b) in num.iter_mut().zip(basis) {
                if !b.is_zero() {
                    *slot += c * b;
                }
            }
        }
        Ok(CycloNumber::from_parts(target, num, self.den.clone()))
    }

    /// The same value in `Q(ζ_n)` for a divisor `n` of `N`, if it lies
    /// there.
    pub fn demote(&self, target: u32) -> Option<CycloNumber> {
        if target == self.order {
            return Some(self.clone());
        }
        if target == 0 || self.order % target != 0 {
            return None;
        }
        let small = field(target).phi;
        let big = field(self.order).phi;
        // columns: images of ζ_n^k in Q(ζ_N); solve columns * d = self.
        let columns: Vec<Vec<BigInt>> = (0..small)
            .map(|k| {
                CycloNumber::root_of_unity(k as i64, target)
                    .promote(self.order)
                    .expect("divisor order")
                    .num
            })
            .collect();
        let mut rows: Vec<Vec<Rational>> = (0..big)
            .map(|r| {
                let mut row: Vec<Rational> = columns
                    .iter()
                    .map(|c| Rational::from_integer(c[r].clone()))
                    .collect();
                row.push(Rational::new(self.num[r].clone(), self.den.clone()));
                row
            })
            .collect();
        let solution = solve_rational(&mut rows, small)?;
        Some(CycloNumber::from_rational_coeffs(target, &solution))
    }

    /// Smallest divisor `d` of `N` with the value in `Q(ζ_d)`.
    pub fn minimal_order(&self) -> u32 {
        if self.num[1..].iter().all(Zero::is_zero) {
            return 1;
        }
        divisors(self.order)
            .into_iter()
            .find(|&d| self.demote(d).is_some())
            .unwrap_or(self.order)
    }

    /// Complex conjugate: `ζ_N ↦ ζ_N^{N-1}`.
    pub fn conj(&self) -> CycloNumber {
        let f = field(self.order);
        let n = f.order as usize;
        let mut num = vec![BigInt::zero(); f.phi];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, b) in num.iter_mut().zip(&f.powers[(n - k) % n]) {
                *slot += c * b;
            }
        }
        CycloNumber::from_parts(self.order, num, self.den.clone())
    }

    pub fn pow(&self, mut e: u64) -> CycloNumber {
        let mut base = self.clone();
        let mut acc = CycloNumber::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<CycloNumber> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Φ_N`.
    pub fn inv(&self) -> Result<CycloNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero { order: self.order });
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.order)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        let a = trim(self.coeffs());
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (vec![], vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant because Φ_N is irreducible.
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let inv: Vec<Rational> = s0.iter().map(|x| x / &c).collect();
        let mut padded = inv;
        padded.resize(field(self.order).phi, Rational::zero());
        Ok(CycloNumber::from_rational_coeffs(self.order, &padded))
    }

    pub fn checked_div(&self, rhs: &CycloNumber) -> Result<CycloNumber> {
        Ok(self * &rhs.inv()?)
    }

    /// Whether `self^n = 1`.
    pub fn is_root_of_unity_of(&self, n: u32) -> bool {
        n > 0 && self.pow(n as u64).is_one()
    }

    pub fn scale(&self, q: &Rational) -> CycloNumber {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        CycloNumber::from_parts(self.order, num, &self.den * q.denom())
    }

    /// Renders with `z(N)` for `ζ_N`, highest power first, e.g.
    /// `3/2*z(8)^3 - 1/7*z(8) + 2`.
    pub fn to_expr(&self) -> String {
        let mut out = String::new();
        for k in (0..self.num.len()).rev() {
            if self.num[k].is_zero() {
                continue;
            }
            let c = Rational::new(self.num[k].clone(), self.den.clone());
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag_text = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            if k == 0 {
                out.push_str(&mag_text);
                continue;
            }
            if !mag.is_one() {
                out.push_str(&mag_text);
                out.push('*');
            }
            out.push_str(&format!("z({})", self.order));
            if k > 1 {
                out.push_str(&format!("^{k}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses the textual form produced by [`CycloNumber::to_expr`]; also
    /// accepts `i`, parentheses and products of factors. The result lives
    /// in the least common order of the roots mentioned.
    pub fn parse(text: &str) -> Result<CycloNumber> {
        let mut p = ExprParser {
            text,
            chars: text.char_indices().collect(),
            pos: 0,
        };
        let value = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(value)
    }

    fn aligned<'a>(
        a: &'a CycloNumber,
        b: &'a CycloNumber,
    ) -> (Cow<'a, CycloNumber>, Cow<'a, CycloNumber>) {
        if a.order == b.order {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let m = lcm_u32(a.order, b.order);
        let lift = |x: &'a CycloNumber| -> Cow<'a, CycloNumber> {
            if x.order == m {
                Cow::Borrowed(x)
            } else {
                Cow::Owned(x.promote(m).expect("lcm is a multiple"))
            }
        };
        (lift(a), lift(b))
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    if rem.len() < den.len() {
        return (vec![], trim(rem));
    }
    let lead = den[dn].clone();
    let mut quot = vec![Rational::zero(); rem.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dn] / &lead;
        if c.is_zero() {
            continue;
        }
        for (k, dk) in den.iter().enumerate() {
            rem[i + k] -= &c * dk;
        }
        quot[i] = c;
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Solves an augmented system with `unknowns` columns; `None` when
/// inconsistent. Assumes full column rank.
fn solve_rational(rows: &mut [Vec<Rational>], unknowns: usize) -> Option<Vec<Rational>> {
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(unknowns);
    for col in 0..unknowns {
        let sel = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot_row, sel);
        let p = rows[pivot_row][col].clone();
        for v in rows[pivot_row].iter_mut() {
            *v /= &p;
        }
        for r in 0..rows.len() {
            if r == pivot_row || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in col..=unknowns {
                let delta = &factor * &rows[pivot_row][c];
                rows[r][c] -= delta;
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[unknowns].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&r| rows[r][unknowns].clone()).collect())
}

/// Determinant by Gaussian elimination over the field.
pub fn determinant(mut m: Vec<Vec<CycloNumber>>) -> Result<CycloNumber> {
    let size = m.len();
    if m.iter().any(|row| row.len() != size) {
        return Err(Error::InvalidParameter("determinant of a non-square matrix".into()));
    }
    if size == 0 {
        return Ok(CycloNumber::one(1));
    }
    let mut det = CycloNumber::one(1);
    for col in 0..size {
        let Some(sel) = (col..size).find(|&r| !m[r][col].is_zero()) else {
            return Ok(CycloNumber::zero(m[0][0].order));
        };
        if sel != col {
            m.swap(sel, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = &det * &pivot;
        let inv = pivot.inv()?;
        for r in (col + 1)..size {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..size {
                let delta = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &delta;
            }
        }
    }
    Ok(det)
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &CycloNumber) -> bool {
        let (a, b) = CycloNumber::aligned(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycloNumber {}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]({})", self.order, self.to_expr())
    }
}

impl FromStr for CycloNumber {
    type Err = Error;
    fn from_str(s: &str) -> Result<CycloNumber> {
        CycloNumber::parse(s)
    }
}

impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        let (a, b) = CycloNumber::aligned(self, rhs);
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        CycloNumber::from_parts(a.order, num, &a.den * &b.den)
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self + &(-rhs)
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            order: self.order,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        let (a, b) = CycloNumber::aligned(self, rhs);
        let f = field(a.order);
        let phi = f.phi;
        let n = f.order as usize;
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut num: Vec<BigInt> = prod.drain(..phi).collect();
        for (off, c) in prod.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let basis = &f.powers[(phi + off) % n];
            for (slot, bk) in num.iter_mut().zip(basis) {
                if !bk.is_zero() {
                    *slot += c * bk;
                }
            }
        }
        CycloNumber::from_parts(a.order, num, &a.den * &b.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: &CycloNumber) -> CycloNumber {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for CycloNumber {
    fn sum<I: Iterator<Item = CycloNumber>>(iter: I) -> CycloNumber {
        iter.fold(CycloNumber::zero(1), |acc, x| acc + x)
    }
}

struct ExprParser<'a> {
    text: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, reason: &str) -> Error {
        let at = self
            .chars
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or(self.text.len());
        Error::InvalidExpr {
            text: self.text.to_string(),
            reason: format!("{reason} at offset {at}"),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {ch:?}")))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn small_integer(&mut self) -> Result<i64> {
        let negative = self.eat('-');
        let v = self.integer()?;
        let v: i64 = v
            .try_into()
            .map_err(|_| self.error("integer too large"))?;
        Ok(if negative { -v } else { v })
    }

    fn expr(&mut self) -> Result<CycloNumber> {
        let mut negative = false;
        if self.eat('-') {
            negative = true;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if negative {
            acc = -acc;
        }
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<CycloNumber> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<CycloNumber> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                self.exponent(inner)
            }
            Some('z') => {
                self.pos += 1;
                self.expect('(')?;
                let n = self.small_integer()?;
                if n <= 0 || n > u32::MAX as i64 {
                    return Err(self.error("root order must be positive"));
                }
                self.expect(')')?;
                let e = if self.eat('^') { self.small_integer()? } else { 1 };
                Ok(CycloNumber::root_of_unity(e, n as u32))
            }
            Some('i') => {
                self.pos += 1;
                let e = if self.eat('^') { self.small_integer()? } else { 1 };
                Ok(CycloNumber::root_of_unity(e, 4))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut den = BigInt::one();
                if self.eat('/') {
                    den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                }
                Ok(CycloNumber::from_rational(&Rational::new(num, den), 1))
            }
            _ => Err(self.error("expected a number, z(N), i or '('")),
        }
    }

    fn exponent(&mut self, base: CycloNumber) -> Result<CycloNumber> {
        if self.eat('^') {
            let e = self.small_integer()?;
            base.powi(e).map_err(|_| self.error("zero raised to a negative power"))
        } else {
            Ok(base)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_polynomial_examples() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn phi_105_has_a_coefficient_minus_two() {
        assert!(cyclotomic_polynomial(105).contains(&BigInt::from(-2)));
        assert_eq!(cyclotomic_polynomial(105).len() - 1, totient(105));
    }

    #[test]
    fn product_of_cyclotomics_is_x_n_minus_1() {
        for n in 1..=30u32 {
            let mut prod = ints(&[1]);
            for d in divisors(n) {
                let p = cyclotomic_polynomial(d);
                let mut out = vec![BigInt::zero(); prod.len() + p.len() - 1];
                for (i, a) in prod.iter().enumerate() {
                    for (j, b) in p.iter().enumerate() {
                        out[i + j] += a * b;
                    }
                }
                prod = out;
            }
            let mut expect = vec![BigInt::zero(); n as usize + 1];
            expect[0] = BigInt::from(-1);
            expect[n as usize] = BigInt::one();
            assert_eq!(prod, expect, "n = {n}");
        }
    }

    #[test]
    fn roots_of_unity_examples() {
        assert!(CycloNumber::root_of_unity(0, 7).is_one());
        assert_eq!(CycloNumber::root_of_unity(1, 2), CycloNumber::from_int(-1));
        let w = CycloNumber::root_of_unity(1, 3);
        assert!((&(&w * &w) + &w + CycloNumber::one(3)).is_zero());
        for n in 1..=24u32 {
            for k in 0..n as i64 {
                assert!(CycloNumber::root_of_unity(k, n).is_root_of_unity_of(n));
            }
        }
    }

    #[test]
    fn zero_test_examples() {
        let z = CycloNumber::one(2) + CycloNumber::root_of_unity(1, 2);
        assert!(z.is_zero());
        let s: CycloNumber = (0..5).map(|k| CycloNumber::root_of_unity(k, 5)).sum();
        assert!(s.is_zero());
        let d = CycloNumber::root_of_unity(1, 8) - CycloNumber::root_of_unity(3, 8);
        assert!(!d.is_zero());
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = CycloNumber::imaginary_unit();
        assert_eq!(&i * &i, CycloNumber::from_int(-1));
        assert_eq!(CycloNumber::root_of_unity(2, 8), i);
        assert_eq!(i.conj(), -i.clone());
    }

    #[test]
    fn inverse_and_division_by_zero() {
        let x = CycloNumber::parse("3/2*z(8)^3 - 1/7*z(8) + 2").unwrap();
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(
            CycloNumber::zero(8).inv(),
            Err(Error::DivisionByZero { order: 8 })
        );
    }

    #[test]
    fn expression_round_trip() {
        let text = "3/2*z(8)^3 - 1/7*z(8) + 2";
        let x = CycloNumber::parse(text).unwrap();
        assert_eq!(x.order(), 8);
        assert_eq!(x.to_expr(), text);
        assert_eq!(CycloNumber::zero(5).to_expr(), "0");
        assert_eq!(CycloNumber::parse("-z(4)").unwrap().to_expr(), "-z(4)");
        assert_eq!(CycloNumber::parse("i^2").unwrap(), CycloNumber::from_int(-1));
        assert_eq!(
            CycloNumber::parse("(1 + z(3))*2").unwrap(),
            CycloNumber::parse("-2*z(3)^2").unwrap()
        );
        assert!(CycloNumber::parse("1/0").is_err());
        assert!(CycloNumber::parse("z(0)").is_err());
        assert!(CycloNumber::parse("2 +").is_err());
        assert!(CycloNumber::parse("2 3").is_err());
    }

    #[test]
    fn mixed_orders_promote_to_lcm() {
        let a = CycloNumber::root_of_unity(1, 4);
        let b = CycloNumber::root_of_unity(1, 6);
        let c = &a * &b;
        assert_eq!(c.order(), 12);
        assert_eq!(c, CycloNumber::root_of_unity(5, 12));
    }

    #[test]
    fn promote_demote_round_trip() {
        let x = CycloNumber::parse("2/3*z(6) - 5").unwrap();
        let up = x.promote(24).unwrap();
        assert_eq!(up.order(), 24);
        assert_eq!(up.demote(6).unwrap().to_expr(), x.to_expr());
        assert_eq!(up.minimal_order(), 3);
        assert!(CycloNumber::root_of_unity(1, 8).promote(24).unwrap().demote(12).is_none());
        assert_eq!(
            CycloNumber::from_rational(&ratio(7, 3), 1)
                .promote(30)
                .unwrap()
                .to_rational(),
            Some(ratio(7, 3))
        );
        assert!(x.promote(10).is_err());
    }

    #[test]
    fn determinant_small() {
        let one = CycloNumber::one(1);
        let two = CycloNumber::from_int(2);
        let m = vec![vec![one.clone(), two.clone()], vec![two.clone(), one.clone()]];
        assert_eq!(determinant(m).unwrap(), CycloNumber::from_int(-3));
        let singular = vec![vec![one.clone(), two.clone()], vec![two.clone(), two.clone() + two]];
        assert!(determinant(singular).unwrap().is_zero());
    }
}
