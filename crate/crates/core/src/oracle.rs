//! Independent checks of the engine.
//!
//! Nothing here calls the hull, lift or certificate code of the analyzers.
//! Distributions are flattened to plain term maps, convolved with a double
//! loop, and hulls are found by trying every pair of residues. The only
//! shared pieces are the field arithmetic and [`Distribution::fourier_coeff_in`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::circle::Arc;
use crate::cyclotomic::CycloNumber;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::rational::{format_fraction, ratio, rem_euclid, Rational};
use crate::titchmarsh::{
    Engine, Fact, PowerReport, ReflectionMode, ReflectionOutcome, Role, Root, Side, TitchmarshReport,
};

pub const DEFAULT_M_MAX: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub identity: String,
    pub m_max: u32,
    pub passed: bool,
    pub first_failing_mode: Option<i64>,
    /// The failing instance and what went wrong; present iff `!passed`.
    pub counterexample: Option<String>,
}

impl OracleVerdict {
    fn pass(identity: &str, m_max: u32) -> OracleVerdict {
        OracleVerdict {
            identity: identity.into(),
            m_max,
            passed: true,
            first_failing_mode: None,
            counterexample: None,
        }
    }

    fn fail(identity: &str, m_max: u32, mode: Option<i64>, detail: String) -> OracleVerdict {
        OracleVerdict {
            identity: identity.into(),
            m_max,
            passed: false,
            first_failing_mode: mode,
            counterexample: Some(detail),
        }
    }
}

/// An analyzer input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Pair {
        f: Distribution,
        g: Distribution,
        n: u32,
    },
    Lemma {
        components: Vec<Distribution>,
        arc: Arc,
        n: u32,
    },
    Power {
        f: Distribution,
        n: u32,
        p: u32,
    },
    Reflection {
        f: Distribution,
        mode: ReflectionMode,
    },
}

impl fmt::Display for Instance {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Pair { f, g, n } => write!(out, "pair n = {n}: f = {f}; g = {g}"),
            Instance::Lemma { components, arc, n } => {
                write!(out, "lemma n = {n} on {arc}:")?;
                for (j, c) in components.iter().enumerate() {
                    write!(out, " f_{j} = {c};")?;
                }
                Ok(())
            }
            Instance::Power { f, n, p } => write!(out, "power n = {n}, p = {p}: f = {f}"),
            Instance::Reflection { f, mode } => write!(out, "reflection ({mode:?}): f = {f}"),
        }
    }
}

/// What the engine said about an [`Instance`].
#[derive(Clone, Debug)]
pub enum Outcome {
    Pair(Result<TitchmarshReport>),
    Lemma(Result<Root>),
    Power(Result<PowerReport>),
    Reflection(Result<ReflectionOutcome>),
}

impl Outcome {
    pub fn error(&self) -> Option<&Error> {
        match self {
            Outcome::Pair(r) => r.as_ref().err(),
            Outcome::Lemma(r) => r.as_ref().err(),
            Outcome::Power(r) => r.as_ref().err(),
            Outcome::Reflection(r) => r.as_ref().err(),
        }
    }
}

/// Runs the matching analyzer.
pub fn run(engine: &Engine, instance: &Instance) -> Outcome {
    match instance {
        Instance::Pair { f, g, n } => Outcome::Pair(engine.analyze_pair(f, g, *n, None)),
        Instance::Lemma { components, arc, n } => {
            Outcome::Lemma(crate::titchmarsh::lemma_alpha(components, arc, *n))
        }
        Instance::Power { f, n, p } => Outcome::Power(engine.analyze_power(f, *n, *p)),
        Instance::Reflection { f, mode } => Outcome::Reflection(engine.analyze_reflection(f, *mode)),
    }
}

/// Checks `(f ∗ g)^(m) = f^(m) g^(m)` for `|m| <= m_max` and compares the
/// engine's product with a naive double loop.
pub fn check_convolution(f: &Distribution, g: &Distribution, m_max: u32) -> OracleVerdict {
    const NAME: &str = "convolution";
    let h = f.convolve(g);
    let naive = convolve(&flatten(f), &flatten(g));
    if flatten(&h) != naive {
        return OracleVerdict::fail(
            NAME,
            m_max,
            None,
            format!("f = {f}; g = {g}: engine product {h} differs from the naive expansion"),
        );
    }
    let order = match [f, g, &h]
        .iter()
        .map(|d| d.fourier_field_order())
        .collect::<Result<Vec<u32>>>()
    {
        Ok(orders) => orders.into_iter().fold(1, |a, b| a.lcm(&b)),
        Err(e) => return OracleVerdict::fail(NAME, m_max, None, format!("f = {f}; g = {g}: {e}")),
    };
    let m_max_i = m_max as i64;
    let tables = [&h, f, g].map(|d| fourier_table(&flatten(d), order, m_max_i));
    for (k, m) in (-m_max_i..=m_max_i).enumerate() {
        let (hm, fm, gm) = (&tables[0][k], &tables[1][k], &tables[2][k]);
        if *hm != fm * gm {
            return OracleVerdict::fail(
                NAME,
                m_max,
                Some(m),
                format!("f = {f}; g = {g}: mode {m} gives {hm} but f^ g^ = {}", fm * gm),
            );
        }
    }
    OracleVerdict::pass(NAME, m_max)
}

/// `f̂(m)` for `|m| <= m_max`, computed in the group ring of `Z/N` where a
/// root-of-unity factor is a rotation. `N` must hold every location and
/// coefficient, and be divisible by 4.
fn fourier_table(t: &Terms, order: u32, m_max: i64) -> Vec<CycloNumber> {
    let n = order as usize;
    let big = BigInt::from(order);
    let spread: Vec<(i64, u32, Vec<(usize, Rational)>)> = t
        .iter()
        .map(|((x, p), c)| {
            let step = (order / c.order()) as usize;
            let parts = c
                .coeffs()
                .into_iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .map(|(j, q)| (j * step, q))
                .collect();
            let at = (x * Rational::from_integer(big.clone())).to_integer();
            (i64::try_from(at).expect("location index fits"), *p, parts)
        })
        .collect();
    (-m_max..=m_max)
        .map(|m| {
            let mut ring = vec![Rational::zero(); n];
            for (at, p, parts) in &spread {
                let weight = Rational::from_integer(BigInt::from(m).pow(*p));
                if weight.is_zero() {
                    continue;
                }
                // (im)^p e^{-imx}: i^p is a quarter turn per derivative.
                let e = (*p as i64 * (n as i64 / 4) - m * at).rem_euclid(n as i64) as usize;
                for (j, q) in parts {
                    ring[(j + e) % n] += q * &weight;
                }
            }
            CycloNumber::from_group_ring(order, &ring)
        })
        .collect()
}

/// Runs the default engine on `instance` and cross-checks the result.
pub fn check_support_theorems(instance: &Instance) -> OracleVerdict {
    check_outcome(instance, &run(&Engine::default(), instance))
}

/// Cross-checks an engine outcome against brute force.
pub fn check_outcome(instance: &Instance, outcome: &Outcome) -> OracleVerdict {
    let (name, result) = match (instance, outcome) {
        (Instance::Pair { f, g, n }, Outcome::Pair(r)) => ("support:pair", pair(f, g, *n, r)),
        (Instance::Lemma { components, arc, n }, Outcome::Lemma(r)) => {
            ("support:lemma", lemma(components, arc, *n, r))
        }
        (Instance::Power { f, n, p }, Outcome::Power(r)) => ("support:power", power(f, *n, *p, r)),
        (Instance::Reflection { f, mode }, Outcome::Reflection(r)) => {
            ("support:reflection", reflection(f, *mode, r))
        }
        _ => ("support", Err("outcome does not match the instance kind".to_string())),
    };
    match result {
        Ok(()) => OracleVerdict::pass(name, 0),
        Err(why) => OracleVerdict::fail(name, 0, None, format!("{instance}: {why}")),
    }
}

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

/// Term map keyed by `(location in [0, 1), derivative order)`, zeros dropped.
type Terms = BTreeMap<(Rational, u32), CycloNumber>;

fn put(t: &mut Terms, x: Rational, p: u32, c: CycloNumber) {
    let key = (rem_euclid(&x, &Rational::one()), p);
    let sum = match t.remove(&key) {
        Some(old) => old + c,
        None => c,
    };
    if !sum.is_zero() {
        t.insert(key, sum);
    }
}

fn flatten(f: &Distribution) -> Terms {
    let mut t = Terms::new();
    for (x, p, c) in f.terms() {
        put(&mut t, x.turns().clone(), p, c.clone());
    }
    t
}

fn convolve(a: &Terms, b: &Terms) -> Terms {
    let mut t = Terms::new();
    for ((x, p), c) in a {
        for ((y, q), d) in b {
            put(&mut t, x + y, p + q, c * d);
        }
    }
    t
}

fn shifted(a: &Terms, y: &Rational, scale: &CycloNumber) -> Terms {
    let mut t = Terms::new();
    for ((x, p), c) in a {
        put(&mut t, x + y, *p, c * scale);
    }
    t
}

fn sum(a: &Terms, b: &Terms) -> Terms {
    let mut t = a.clone();
    for ((x, p), c) in b {
        put(&mut t, x.clone(), *p, c.clone());
    }
    t
}

/// `Σ_k α^k S_{k/n} f`, term by term.
fn symmetrize(a: &Terms, n: u32, alpha: &CycloNumber) -> Terms {
    let mut t = Terms::new();
    let mut weight = CycloNumber::one(1);
    for k in 0..n {
        t = sum(&t, &shifted(a, &ratio(k as i64, n as i64), &weight));
        weight = &weight * alpha;
    }
    t
}

fn support(a: &Terms) -> Vec<Rational> {
    let mut out: Vec<Rational> = a.keys().map(|(x, _)| x.clone()).collect();
    out.dedup();
    out
}

/// Every integer translate of `x` in the real interval between `lo` and `hi`.
fn translates(x: &Rational, lo: &Rational, hi: &Rational, open: bool) -> Vec<Rational> {
    let first: BigInt = (lo - x).floor().to_integer() - 1;
    let last: BigInt = (hi - x).ceil().to_integer() + 1;
    let mut out = Vec::new();
    let mut m = first;
    while m <= last {
        let t = x + Rational::from_integer(m.clone());
        let inside = if open { t > *lo && t < *hi } else { t >= *lo && t <= *hi };
        if inside {
            out.push(t);
        }
        m += 1;
    }
    out
}

fn open_lifts(a: &Terms, lo: &Rational, hi: &Rational) -> Vec<Rational> {
    support(a)
        .iter()
        .flat_map(|x| translates(x, lo, hi, true))
        .collect()
}

/// Shortest closed arc whose `1/n`-rotates cover the points, tried over all
/// pairs of residues. Ties go to the smallest start in `[0, 1/n)`.
fn hull(points: &[Rational], n: u32) -> Option<(Rational, Rational)> {
    let period = ratio(1, n as i64);
    let mut residues: Vec<Rational> = points.iter().map(|x| rem_euclid(x, &period)).collect();
    residues.sort();
    residues.dedup();
    let mut best: Option<(Rational, Rational)> = None;
    for s in &residues {
        for e in &residues {
            let len = rem_euclid(&(e - s), &period);
            let covers = residues
                .iter()
                .all(|r| rem_euclid(&(r - s), &period) <= len);
            if !covers {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bs, bl)) => len < *bl || (len == *bl && s < bs),
            };
            if better {
                best = Some((s.clone(), len));
            }
        }
    }
    best
}

fn same_arc(arc: &Arc, lo: &Rational, len: &Rational) -> bool {
    arc.inf() == lo && arc.length() == len
}

fn show(lo: &Rational, len: &Rational) -> String {
    format!("[{}, {}]", format_fraction(lo), format_fraction(&(lo + len)))
}

/// `[min, max]` of the lifts `x + k/n + m` (`k ∈ Z_n`, `|m| <= 2`) landing
/// in `[lo, lo + len]`; every point must have exactly one.
fn lifted_range(points: &[Rational], lo: &Rational, len: &Rational, n: u32) -> std::result::Result<Option<(Rational, Rational)>, String> {
    let hi = lo + len;
    let mut lifts = Vec::new();
    for x in points {
        let mut hits = Vec::new();
        for k in 0..n {
            for m in -2..=2i64 {
                let t = x + ratio(k as i64, n as i64) + Rational::from_integer(m.into());
                if t >= *lo && t <= hi && !hits.contains(&t) {
                    hits.push(t);
                }
            }
        }
        if hits.len() != 1 {
            return Err(format!(
                "support point {} has {} lifts into {}",
                format_fraction(x),
                hits.len(),
                show(lo, len)
            ));
        }
        lifts.push(hits.pop().expect("one lift"));
    }
    let min = lifts.iter().min().cloned();
    let max = lifts.iter().max().cloned();
    Ok(min.zip(max))
}

fn unexpected<T: fmt::Debug>(r: &Result<T>) -> String {
    format!("unexpected engine result {r:?}")
}

fn pair(f: &Distribution, g: &Distribution, n: u32, r: &Result<TitchmarshReport>) -> Check {
    let (tf, tg) = (flatten(f), flatten(g));
    let (Some((i_lo, i_len)), Some((j_lo, j_len))) = (hull(&support(&tf), n), hull(&support(&tg), n)) else {
        return ensure(matches!(r, Err(Error::ZeroDistribution)), || unexpected(r));
    };
    let period = ratio(1, n as i64);
    if &i_len + &j_len >= period {
        return ensure(r.as_ref().is_err_and(Error::is_hypothesis), || {
            format!("|I| + |J| >= 1/n but {}", unexpected(r))
        });
    }
    let report = r.as_ref().map_err(|e| format!("engine failed: {e}"))?;
    ensure(same_arc(&report.i, &i_lo, &i_len), || {
        format!("I = {} but brute force gives {}", report.i, show(&i_lo, &i_len))
    })?;
    ensure(same_arc(&report.j, &j_lo, &j_len), || {
        format!("J = {} but brute force gives {}", report.j, show(&j_lo, &j_len))
    })?;

    let h = convolve(&tf, &tg);
    let sum_lo = &i_lo + &j_lo;
    let sum_len = &i_len + &j_len;
    let Some((k_lo, k_hi)) = lifted_range(&support(&h), &sum_lo, &sum_len, n)? else {
        return ensure(
            report.k.is_none() && report.lambda.is_none() && report.rho.is_none() && report.certificates.is_empty(),
            || "f ∗ g = 0 but the report has a hull".into(),
        );
    };
    let k = report.k.as_ref().ok_or("f ∗ g ≠ 0 but the report has no K")?;
    ensure(*k.inf() == k_lo && k.sup() == k_hi, || {
        format!("K = {k} but brute force gives [{}, {}]", format_fraction(&k_lo), format_fraction(&k_hi))
    })?;
    let lambda = &k_lo - &sum_lo;
    let rho = &sum_lo + &sum_len - &k_hi;
    ensure(report.lambda_max.as_ref() == Some(&lambda) && report.lambda.as_ref() == Some(&lambda), || {
        format!("λ = {:?} but brute force gives {}", report.lambda, format_fraction(&lambda))
    })?;
    ensure(report.rho.as_ref() == Some(&rho), || {
        format!("ρ = {:?} but brute force gives {}", report.rho, format_fraction(&rho))
    })?;

    let i_hi = &i_lo + &i_len;
    let j_hi = &j_lo + &j_len;
    let mut expected = Vec::new();
    if lambda.is_positive() {
        let a = report.alpha.as_ref().ok_or("λ > 0 without α")?;
        let b = report.beta.as_ref().ok_or("λ > 0 without β")?;
        let wi = (&i_hi - &period, &i_lo + &lambda);
        let wj = (&j_hi - &period, &j_lo + &lambda);
        expected.push((Role::Alpha, Side::F, a, wi.clone(), Fact::Vanishes));
        expected.push((Role::Alpha, Side::G, a, wj.clone(), Fact::InfEquals(j_lo.clone())));
        expected.push((Role::Beta, Side::F, b, wi, Fact::InfEquals(i_lo.clone())));
        expected.push((Role::Beta, Side::G, b, wj, Fact::Vanishes));
    } else {
        ensure(report.alpha.is_none() && report.beta.is_none(), || "λ = 0 with witnesses".into())?;
    }
    if rho.is_positive() {
        let a = report.alpha_sup.as_ref().ok_or("ρ > 0 without α")?;
        let b = report.beta_sup.as_ref().ok_or("ρ > 0 without β")?;
        let wi = (&i_hi - &rho, &i_lo + &period);
        let wj = (&j_hi - &rho, &j_lo + &period);
        expected.push((Role::AlphaSup, Side::F, a, wi.clone(), Fact::Vanishes));
        expected.push((Role::AlphaSup, Side::G, a, wj.clone(), Fact::SupEquals(j_hi.clone())));
        expected.push((Role::BetaSup, Side::F, b, wi, Fact::SupEquals(i_hi.clone())));
        expected.push((Role::BetaSup, Side::G, b, wj, Fact::Vanishes));
    } else {
        ensure(report.alpha_sup.is_none() && report.beta_sup.is_none(), || "ρ = 0 with witnesses".into())?;
    }
    for (x, y) in [(&report.alpha, &report.beta), (&report.alpha_sup, &report.beta_sup)] {
        if let (Some(x), Some(y)) = (x, y) {
            ensure(x.exponent != y.exponent, || "α = β".into())?;
        }
    }
    ensure(report.certificates.len() == expected.len(), || {
        format!("{} certificates, expected {}", report.certificates.len(), expected.len())
    })?;
    for (c, (role, side, root, (lo, hi), fact)) in report.certificates.iter().zip(&expected) {
        ensure(c.role == *role && c.side == *side && c.root == **root && c.fact == *fact, || {
            format!("certificate {c:?} does not match the expected claim")
        })?;
        ensure(c.window.lo() == lo && c.window.hi() == hi, || {
            format!("certificate window {} should be ({}, {})", c.window, format_fraction(lo), format_fraction(hi))
        })?;
        ensure(c.verified, || format!("certificate {c:?} is not marked verified"))?;
        let value = CycloNumber::root_of_unity(root.exponent as i64, n);
        ensure(value == root.value, || format!("root {:?} is not γ^{}", root.value, root.exponent))?;
        let base = if *side == Side::F { &tf } else { &tg };
        let lifts = open_lifts(&symmetrize(base, n, &value), lo, hi);
        let holds = match fact {
            Fact::Vanishes => lifts.is_empty(),
            Fact::InfEquals(v) => lifts.iter().min() == Some(v),
            Fact::SupEquals(v) => lifts.iter().max() == Some(v),
        };
        ensure(holds, || {
            format!("{} certificate for {side:?} fails under naive symmetrization", role.name())
        })?;
    }
    Ok(())
}

fn lemma(components: &[Distribution], arc: &Arc, n: u32, r: &Result<Root>) -> Check {
    let lo = arc.inf().clone();
    let hi = arc.sup();
    let flat: Vec<Terms> = components.iter().map(flatten).collect();
    let min_lift = |t: &Terms| {
        support(t)
            .iter()
            .flat_map(|x| translates(x, &lo, &hi, false))
            .min()
    };
    let Some(a) = flat.iter().filter_map(min_lift).min() else {
        return ensure(r.is_err(), || unexpected(r));
    };
    let root = r.as_ref().map_err(|e| format!("engine failed: {e}"))?;
    let value = CycloNumber::root_of_unity(root.exponent as i64, n);
    ensure(root.value == value && root.n == n, || format!("returned root {root:?} is not γ^m"))?;
    let mut combined = Terms::new();
    let mut weight = CycloNumber::one(1);
    for t in &flat {
        combined = sum(&combined, &shifted(t, &Rational::zero(), &weight));
        weight = &weight * &value;
    }
    let got = min_lift(&combined);
    ensure(got.as_ref() == Some(&a), || {
        format!(
            "inf of the weighted sum is {:?}, expected {}",
            got.map(|x| format_fraction(&x)),
            format_fraction(&a)
        )
    })
}

fn power(f: &Distribution, n: u32, p: u32, r: &Result<PowerReport>) -> Check {
    let tf = flatten(f);
    let Some((i_lo, i_len)) = hull(&support(&tf), n) else {
        return ensure(matches!(r, Err(Error::ZeroDistribution)), || unexpected(r));
    };
    let bound = ratio(1, p as i64 * n as i64);
    if i_len >= bound {
        return ensure(r.as_ref().is_err_and(Error::is_hypothesis), || {
            format!("|I| >= 1/(pn) but {}", unexpected(r))
        });
    }
    let report = r.as_ref().map_err(|e| format!("engine failed: {e}"))?;
    ensure(same_arc(&report.i, &i_lo, &i_len), || {
        format!("I = {} but brute force gives {}", report.i, show(&i_lo, &i_len))
    })?;
    let mut acc = tf.clone();
    for _ in 1..p {
        acc = convolve(&acc, &tf);
    }
    ensure(flatten(&report.power) == acc, || "f^{∗p} differs from repeated naive convolution".into())?;
    let scale = Rational::from_integer(p.into());
    let (p_lo, p_len) = (&i_lo * &scale, &i_len * &scale);
    let k = lifted_range(&support(&acc), &p_lo, &p_len, n)?.ok_or("f^{∗p} = 0")?;
    ensure(k.0 == p_lo && k.1 == &p_lo + &p_len, || {
        format!("hull of f^{{∗p}} is [{}, {}], not pI", format_fraction(&k.0), format_fraction(&k.1))
    })?;
    ensure(*report.k.inf() == k.0 && report.k.sup() == k.1, || format!("report K = {}", report.k))
}

fn reflection(f: &Distribution, mode: ReflectionMode, r: &Result<ReflectionOutcome>) -> Check {
    let tf = flatten(f);
    let Some((lo, len)) = hull(&support(&tf), 2) else {
        return ensure(matches!(r, Err(Error::ZeroDistribution)), || unexpected(r));
    };
    let quarter = ratio(1, 4);
    let centred = (-2..=2i64)
        .map(|k| &lo + ratio(k, 2))
        .find(|l| *l > -quarter.clone() && l + &len < quarter);
    let Some(i_lo) = centred.filter(|_| len < quarter) else {
        return ensure(r.as_ref().is_err_and(Error::is_hypothesis), || {
            format!("hull outside (-1/4, 1/4) but {}", unexpected(r))
        });
    };
    let i_hi = &i_lo + &len;
    let mut sharp = Terms::new();
    for ((x, p), c) in &tf {
        let c = if mode == ReflectionMode::Conjugate { c.conj() } else { c.clone() };
        let c = if p % 2 == 1 { -c } else { c };
        put(&mut sharp, -x, *p, c);
    }
    let half = ratio(1, 2);
    let stray = support(&convolve(&tf, &sharp))
        .into_iter()
        .find(|x| !x.is_zero() && *x != half);
    let outcome = r.as_ref().map_err(|e| format!("engine failed: {e}"))?;
    let d = match (stray, outcome) {
        (Some(_), ReflectionOutcome::NotApplicable { .. }) => return Ok(()),
        (Some(x), _) => return Err(format!("supp f ∗ f♯ contains {} yet f was decomposed", format_fraction(&x))),
        (None, ReflectionOutcome::NotApplicable { stray }) => {
            return Err(format!("engine reports stray point {stray} but supp f ∗ f♯ ⊂ {{0, 1/2}}"))
        }
        (None, ReflectionOutcome::Decomposed(d)) => d,
    };
    ensure(*d.i.inf() == i_lo && *d.i.length() == len, || {
        format!("I = {} but brute force gives {}", d.i, show(&i_lo, &len))
    })?;
    let one = Rational::one();
    let corners: Vec<Rational> = [&i_lo, &i_hi]
        .iter()
        .flat_map(|x| [rem_euclid(x, &one), rem_euclid(&(*x + &half), &one)])
        .collect();
    ensure(support(&tf).iter().all(|x| corners.contains(x)), || {
        "support of f is not within the endpoints of I and their antipodes".into()
    })?;
    let (mu, nu) = (flatten(&d.mu), flatten(&d.nu));
    ensure(support(&mu).len() <= 1 && support(&nu).len() <= 1, || {
        "μ or ν has more than one support point".into()
    })?;
    let minus = CycloNumber::from_int(-1);
    let plus = CycloNumber::one(1);
    let rebuilt = sum(
        &sum(&mu, &shifted(&mu, &half, &plus)),
        &sum(&nu, &shifted(&nu, &half, &minus)),
    );
    ensure(rebuilt == tf, || "μ + S μ + ν - S ν differs from f".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::Angle;
    use crate::distribution::deltas;
    use crate::titchmarsh::{make_zero_divisors, Mutation};

    #[test]
    fn group_ring_table_matches_field_evaluation() {
        let zeta = CycloNumber::root_of_unity(1, 3);
        let mut f = deltas(&[(2, (1, 8)), (-1, (5, 6))]);
        f.add_term(Angle::from_ratio(1, 3), 1, zeta.clone());
        f.add_term(Angle::from_ratio(3, 4), 3, &zeta * &zeta);
        let order = f.fourier_field_order().unwrap();
        let table = fourier_table(&flatten(&f), order, 5);
        for (k, m) in (-5..=5).enumerate() {
            assert_eq!(table[k], f.fourier_coeff_in(m, order).unwrap(), "mode {m}");
        }
    }

    fn worked_pair() -> Instance {
        Instance::Pair {
            f: deltas(&[(1, (0, 1)), (-1, (1, 2))]),
            g: deltas(&[(1, (0, 1)), (1, (1, 2)), (1, (1, 8)), (-1, (5, 8))]),
            n: 2,
        }
    }

    #[test]
    fn convolution_examples() {
        let d0 = Distribution::delta(Angle::zero());
        let g = Distribution::term(Angle::from_ratio(1, 3), 2, CycloNumber::root_of_unity(1, 5));
        assert!(check_convolution(&d0, &g, 16).passed);
        let (a, b) = make_zero_divisors(&g, &deltas(&[(1, (1, 8)), (3, (1, 6))]));
        let v = check_convolution(&a, &b, 16);
        assert!(v.passed);
        assert!(a.convolve(&b).is_zero());
        for m in -16..=16 {
            assert!(a.fourier_coeff(m).unwrap().is_zero() || b.fourier_coeff(m).unwrap().is_zero());
        }
    }

    #[test]
    fn brute_hull_matches_examples() {
        let pts = [ratio(1, 16), ratio(9, 16), ratio(15, 16), ratio(7, 16)];
        assert_eq!(hull(&pts, 2), Some((ratio(7, 16), ratio(1, 8))));
        let pts = [ratio(0, 1), ratio(1, 8), ratio(1, 2), ratio(5, 8)];
        assert_eq!(hull(&pts, 2), Some((ratio(0, 1), ratio(1, 8))));
        assert_eq!(hull(&[], 2), None);
    }

    #[test]
    fn support_examples() {
        let v = check_support_theorems(&worked_pair());
        assert!(v.passed, "{v:?}");
        let trinomial = Instance::Power {
            f: deltas(&[(1, (0, 1)), (1, (1, 32)), (1, (1, 2))]),
            n: 2,
            p: 3,
        };
        assert!(check_support_theorems(&trinomial).passed);
        let (f, g) = make_zero_divisors(&deltas(&[(1, (1, 16))]), &deltas(&[(2, (0, 1))]));
        let annihilated = Instance::Pair { f, g, n: 2 };
        assert!(check_support_theorems(&annihilated).passed);
        let four = Instance::Reflection {
            f: deltas(&[(1, (1, 16)), (1, (9, 16)), (1, (15, 16)), (-1, (7, 16))]),
            mode: ReflectionMode::Plain,
        };
        assert!(check_support_theorems(&four).passed);
        let gate = Instance::Pair {
            f: deltas(&[(1, (0, 1)), (1, (1, 4))]),
            g: deltas(&[(1, (0, 1)), (1, (1, 4))]),
            n: 2,
        };
        assert!(check_support_theorems(&gate).passed);
    }

    #[test]
    fn catches_mutated_engine() {
        // the low parts cancel: (Σ_k ζ_3^{-k} δ_{k/3}) ∗ (Σ_k δ_{k/3}) = 0
        let mut f = deltas(&[(2, (1, 24))]);
        let mut g = deltas(&[(3, (1, 24))]);
        for k in 0..3 {
            let x = Angle::from_ratio(k, 3);
            f = f.add(&Distribution::term(x.clone(), 0, CycloNumber::root_of_unity(-k, 3)));
            g = g.add(&Distribution::delta(x));
        }
        let inst = Instance::Pair { f, g, n: 3 };
        let honest = run(&Engine::default(), &inst);
        let Outcome::Pair(Ok(report)) = &honest else { panic!("{honest:?}") };
        assert!(report.lambda_positive());
        assert!(check_outcome(&inst, &honest).passed);
        let broken = run(&Engine::with_mutation(Mutation::SymmetrizeSignFlip), &inst);
        assert!(broken.error().is_some() || !check_outcome(&inst, &broken).passed);
    }

    #[test]
    fn failing_verdict_carries_counterexample() {
        let inst = worked_pair();
        let mut report = crate::titchmarsh::analyze_pair(
            &deltas(&[(1, (0, 1)), (-1, (1, 2))]),
            &deltas(&[(1, (0, 1)), (1, (1, 2)), (1, (1, 8)), (-1, (5, 8))]),
            2,
        )
        .unwrap();
        report.lambda = Some(ratio(1, 16));
        let v = check_outcome(&inst, &Outcome::Pair(Ok(report)));
        assert!(!v.passed);
        assert!(v.counterexample.unwrap().contains("pair n = 2"));
    }
}
