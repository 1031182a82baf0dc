use num_traits::Signed;

use crate::circle::{arc_sum, Angle, Arc, Window};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::rational::{format_fraction, ratio, Rational};

use super::{lifted_hull, minimal_hull, nonnegative, Engine, Root};

/// Which witness a certificate belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// `α` on the inf side: the `f`-sum vanishes low, the `g`-sum starts at `inf J`.
    Alpha,
    /// `β` on the inf side, with the roles of `f` and `g` exchanged.
    Beta,
    /// `α` on the sup side: the `f`-sum vanishes high, the `g`-sum ends at `sup J`.
    AlphaSup,
    /// `β` on the sup side.
    BetaSup,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Alpha => "alpha",
            Role::Beta => "beta",
            Role::AlphaSup => "alpha_sup",
            Role::BetaSup => "beta_sup",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    F,
    G,
}

/// A claim about a symmetrized factor restricted to an open window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fact {
    Vanishes,
    InfEquals(Rational),
    SupEquals(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub role: Role,
    pub side: Side,
    pub root: Root,
    /// Open window the fact is asserted on.
    pub window: Window,
    pub fact: Fact,
    pub verified: bool,
}

/// Outcome of [`Engine::analyze_pair`].
///
/// `k`, `lambda` and `rho` are absent exactly when `f ∗ g = 0`; the
/// shortfalls are undefined for an annihilated pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TitchmarshReport {
    pub n: u32,
    pub i: Arc,
    pub j: Arc,
    pub k: Option<Arc>,
    /// `λ` used for the certificates (the maximal one unless overridden).
    pub lambda: Option<Rational>,
    /// `inf K - inf I - inf J` for the smallest admissible `K`.
    pub lambda_max: Option<Rational>,
    pub rho: Option<Rational>,
    pub alpha: Option<Root>,
    pub beta: Option<Root>,
    pub alpha_sup: Option<Root>,
    pub beta_sup: Option<Root>,
    pub certificates: Vec<Certificate>,
}

impl TitchmarshReport {
    pub fn is_annihilated(&self) -> bool {
        self.k.is_none()
    }

    pub fn lambda_positive(&self) -> bool {
        self.lambda.as_ref().is_some_and(Signed::is_positive)
    }

    pub fn rho_positive(&self) -> bool {
        self.rho.as_ref().is_some_and(Signed::is_positive)
    }

    pub fn all_verified(&self) -> bool {
        self.certificates.iter().all(|c| c.verified)
    }
}

/// Both sides of the `n = 2` equivalence, evaluated independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Corollary2Verdict {
    /// `f ∗ g = 0`; the equivalence is vacuous.
    Annihilated,
    Decided {
        /// `λ > 0` from the pair analysis.
        lambda_positive: bool,
        /// Some `α = ±1` makes `f + α S_{1/2} f` and `g - α S_{1/2} g` vanish
        /// on windows of positive length `λ'`.
        symmetric: bool,
        /// The `α` achieving the largest `λ'`, as `±1`.
        alpha: Option<i8>,
        /// The largest such `λ'`.
        lambda_symmetric: Option<Rational>,
        /// `f ∗ g` vanishes on `(sup I + sup J - 1/2, inf I + inf J + λ')`.
        convolution_vanishes: bool,
    },
}

impl Corollary2Verdict {
    pub fn agrees(&self) -> bool {
        match self {
            Corollary2Verdict::Annihilated => true,
            Corollary2Verdict::Decided {
                lambda_positive,
                symmetric,
                convolution_vanishes,
                ..
            } => lambda_positive == symmetric && *convolution_vanishes,
        }
    }
}

/// Symmetrizations of `f` and `g` for every candidate root.
struct Symmetrized {
    roots: Vec<Root>,
    f: Vec<Distribution>,
    g: Vec<Distribution>,
}

impl Engine {
    fn symmetrized(&self, f: &Distribution, g: &Distribution, n: u32) -> Result<Symmetrized> {
        let roots: Vec<Root> = (0..n).map(|m| Root::new(m, n)).collect();
        let f_sym = roots
            .iter()
            .map(|r| self.symmetrize(f, n, &r.value))
            .collect::<Result<_>>()?;
        let g_sym = roots
            .iter()
            .map(|r| self.symmetrize(g, n, &r.value))
            .collect::<Result<_>>()?;
        Ok(Symmetrized {
            roots,
            f: f_sym,
            g: g_sym,
        })
    }

    /// Pair analysis for `f`, `g` and the rotation group `Z_n`.
    ///
    /// Computes the hulls `I`, `J`, the smallest `K ⊂ I + J` with
    /// `supp f ∗ g ⊂ R_n(K)`, the shortfalls `λ = inf K - inf I - inf J`
    /// and `ρ = sup I + sup J - sup K`, and, when positive, the witnessing
    /// roots. `lambda` optionally asks for certificates at a smaller `λ`
    /// (it must not exceed the maximal one).
    pub fn analyze_pair(
        &self,
        f: &Distribution,
        g: &Distribution,
        n: u32,
        lambda: Option<&Rational>,
    ) -> Result<TitchmarshReport> {
        crate::circle::check_n(n)?;
        let i = minimal_hull(f, n)?;
        let j = minimal_hull(g, n)?;
        let period = ratio(1, n as i64);
        let total = i.length() + j.length();
        if total >= period {
            return Err(Error::Hypothesis(format!(
                "|I| + |J| = {} is not below 1/n = {} (I = {i}, J = {j})",
                format_fraction(&total),
                format_fraction(&period)
            )));
        }
        if let Some(l) = lambda {
            if l.is_negative() {
                return Err(Error::InvalidParameter("requested λ is negative".into()));
            }
        }
        let ij = arc_sum(&i, &j)?;
        let h = f.convolve(g);
        let mut report = TitchmarshReport {
            n,
            i: i.clone(),
            j: j.clone(),
            k: None,
            lambda: None,
            lambda_max: None,
            rho: None,
            alpha: None,
            beta: None,
            alpha_sup: None,
            beta_sup: None,
            certificates: Vec::new(),
        };
        let Some(k) = lifted_hull(&h, &ij, n)? else {
            return Ok(report);
        };
        let lambda_max = k.inf() - ij.inf();
        let rho = ij.sup() - k.sup();
        if !nonnegative(&lambda_max) || !nonnegative(&rho) || &lambda_max + &rho != ij.length() - k.length() {
            return Err(Error::TheoremViolation(format!(
                "inconsistent shortfalls λ = {}, ρ = {} for K = {k} in I + J = {ij}",
                format_fraction(&lambda_max),
                format_fraction(&rho)
            )));
        }
        let lambda_used = match lambda {
            Some(l) if *l > lambda_max => {
                return Err(Error::Hypothesis(format!(
                    "requested λ = {} exceeds the maximal λ = {}",
                    format_fraction(l),
                    format_fraction(&lambda_max)
                )));
            }
            Some(l) => l.clone(),
            None => lambda_max.clone(),
        };
        report.k = Some(k);
        report.lambda = Some(lambda_used.clone());
        report.lambda_max = Some(lambda_max);
        report.rho = Some(rho.clone());

        if !lambda_used.is_positive() && !rho.is_positive() {
            return Ok(report);
        }
        let sym = self.symmetrized(f, g, n)?;

        if lambda_used.is_positive() {
            let wi = Window::new(i.sup() - &period, i.inf() + &lambda_used)?;
            let wj = Window::new(j.sup() - &period, j.inf() + &lambda_used)?;
            let alpha = (0..n as usize).find(|&m| {
                sym.f[m].vanishes_on(&wi) && sym.g[m].inf_supp_within(&wj).as_ref() == Some(j.inf())
            });
            let beta = (0..n as usize).find(|&m| {
                sym.f[m].inf_supp_within(&wi).as_ref() == Some(i.inf()) && sym.g[m].vanishes_on(&wj)
            });
            let (Some(a), Some(b)) = (alpha, beta) else {
                return Err(Error::TheoremViolation(format!(
                    "λ = {} > 0 but no {} witness among the {n}-th roots of unity",
                    format_fraction(&lambda_used),
                    if alpha.is_none() { "α" } else { "β" }
                )));
            };
            if a == b {
                return Err(Error::TheoremViolation("α = β on the inf side".into()));
            }
            let (ra, rb) = (sym.roots[a].clone(), sym.roots[b].clone());
            report.certificates.extend([
                cert(Role::Alpha, Side::F, &ra, &wi, Fact::Vanishes),
                cert(Role::Alpha, Side::G, &ra, &wj, Fact::InfEquals(j.inf().clone())),
                cert(Role::Beta, Side::F, &rb, &wi, Fact::InfEquals(i.inf().clone())),
                cert(Role::Beta, Side::G, &rb, &wj, Fact::Vanishes),
            ]);
            report.alpha = Some(ra);
            report.beta = Some(rb);
        }

        if rho.is_positive() {
            let wi = Window::new(i.sup() - &rho, i.inf() + &period)?;
            let wj = Window::new(j.sup() - &rho, j.inf() + &period)?;
            let sup_i = i.sup();
            let sup_j = j.sup();
            let alpha = (0..n as usize).find(|&m| {
                sym.f[m].vanishes_on(&wi) && sym.g[m].sup_supp_within(&wj) == Some(sup_j.clone())
            });
            let beta = (0..n as usize).find(|&m| {
                sym.f[m].sup_supp_within(&wi) == Some(sup_i.clone()) && sym.g[m].vanishes_on(&wj)
            });
            let (Some(a), Some(b)) = (alpha, beta) else {
                return Err(Error::TheoremViolation(format!(
                    "ρ = {} > 0 but no {} witness among the {n}-th roots of unity",
                    format_fraction(&rho),
                    if alpha.is_none() { "α" } else { "β" }
                )));
            };
            if a == b {
                return Err(Error::TheoremViolation("α = β on the sup side".into()));
            }
            let (ra, rb) = (sym.roots[a].clone(), sym.roots[b].clone());
            report.certificates.extend([
                cert(Role::AlphaSup, Side::F, &ra, &wi, Fact::Vanishes),
                cert(Role::AlphaSup, Side::G, &ra, &wj, Fact::SupEquals(sup_j)),
                cert(Role::BetaSup, Side::F, &rb, &wi, Fact::SupEquals(sup_i)),
                cert(Role::BetaSup, Side::G, &rb, &wj, Fact::Vanishes),
            ]);
            report.alpha_sup = Some(ra);
            report.beta_sup = Some(rb);
        }

        for c in report.certificates.iter_mut() {
            c.verified = self.verify_certificate(c, f, g, n)?;
            if !c.verified {
                return Err(Error::TheoremViolation(format!(
                    "certificate {} for {:?} failed re-verification",
                    c.role.name(),
                    c.side
                )));
            }
        }
        Ok(report)
    }

    /// Recomputes the symmetrization from scratch and re-checks the fact.
    pub fn verify_certificate(
        &self,
        c: &Certificate,
        f: &Distribution,
        g: &Distribution,
        n: u32,
    ) -> Result<bool> {
        if !c.root.value.is_root_of_unity_of(n) {
            return Ok(false);
        }
        let base = match c.side {
            Side::F => f,
            Side::G => g,
        };
        let s = self.symmetrize(base, n, &c.root.value)?;
        Ok(match &c.fact {
            Fact::Vanishes => s.vanishes_on(&c.window),
            Fact::InfEquals(v) => s.inf_supp_within(&c.window).as_ref() == Some(v),
            Fact::SupEquals(v) => s.sup_supp_within(&c.window).as_ref() == Some(v),
        })
    }

    /// Evaluates both sides of the `n = 2` statement: `λ > 0` if and only
    /// if some `α = ±1` makes `f + α S_{1/2} f` vanish on
    /// `(sup I - 1/2, inf I + λ)` and `g - α S_{1/2} g` vanish on
    /// `(sup J - 1/2, inf J + λ)`.
    ///
    /// The right-hand side is evaluated without using `λ`: for each `α` the
    /// largest admissible window length `λ'` is read off the supports, and
    /// the side holds when some `λ' > 0`. The convolution identity behind
    /// the converse is then checked directly: `f ∗ g` must vanish on
    /// `(sup I + sup J - 1/2, inf I + inf J + λ')`.
    pub fn check_corollary_n2(&self, f: &Distribution, g: &Distribution) -> Result<Corollary2Verdict> {
        let report = self.analyze_pair(f, g, 2, None)?;
        let Some(lambda) = report.lambda.clone() else {
            return Ok(Corollary2Verdict::Annihilated);
        };
        let (i, j) = (&report.i, &report.j);
        let half = Angle::half();
        // (sup I - 1/2, inf I + 1/2) sees exactly the copy of I itself.
        let wi = Window::new(i.sup() - ratio(1, 2), i.inf() + ratio(1, 2))?;
        let wj = Window::new(j.sup() - ratio(1, 2), j.inf() + ratio(1, 2))?;

        let mut best: Option<(i8, Option<Rational>)> = None;
        for sign in [1i8, -1] {
            let s = Rational::from_integer(sign.into());
            let u = f.add(&f.shift(&half).scale_rational(&s));
            let v = g.sub(&g.shift(&half).scale_rational(&s));
            let lu = u.inf_supp_within(&wi).map(|x| x - i.inf());
            let lv = v.inf_supp_within(&wj).map(|x| x - j.inf());
            // None means the window may grow without bound.
            let reach = match (lu, lv) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (Some(a), None) | (None, Some(a)) => Some(a),
                (None, None) => None,
            };
            let positive = reach.as_ref().is_none_or(Signed::is_positive);
            if !positive {
                continue;
            }
            let improves = match &best {
                None => true,
                Some((_, None)) => false,
                Some((_, Some(prev))) => reach.as_ref().is_none_or(|r| r > prev),
            };
            if improves {
                best = Some((sign, reach));
            }
        }

        let symmetric = best.is_some();
        let (alpha, lambda_symmetric, convolution_vanishes) = match best {
            None => (None, None, true),
            Some((sign, reach)) => {
                // windows longer than |I| + |J| add nothing.
                let cap = i.length() + j.length();
                let reach = reach.map_or(cap.clone(), |r| r.min(cap));
                let h = f.convolve(g);
                let lo = i.sup() + j.sup() - ratio(1, 2);
                let hi = i.inf() + j.inf() + &reach;
                let vanishes = if hi > lo {
                    h.vanishes_on(&Window::new(lo, hi)?)
                } else {
                    true
                };
                (Some(sign), Some(reach.clone()), vanishes && lambda >= reach)
            }
        };
        Ok(Corollary2Verdict::Decided {
            lambda_positive: lambda.is_positive(),
            symmetric,
            alpha,
            lambda_symmetric,
            convolution_vanishes,
        })
    }
}

fn cert(role: Role, side: Side, root: &Root, window: &Window, fact: Fact) -> Certificate {
    Certificate {
        role,
        side,
        root: root.clone(),
        window: window.clone(),
        fact,
        verified: false,
    }
}
