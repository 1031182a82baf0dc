use crate::circle::{Angle, Arc, Endpoints, Window};
use crate::cyclotomic::CycloNumber;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::rational::{format_fraction, ratio};

use super::{minimal_hull, Engine};

/// How `f♯` is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReflectionMode {
    /// `f♯(ω) = f(-ω)`.
    #[default]
    Plain,
    /// `f♯(ω) = conj(f(-ω))`.
    Conjugate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReflectionCase {
    /// The hull is a single point.
    SinglePoint,
    /// `f + S_{1/2} f` vanishes just below `sup I`.
    AlphaPlus,
    /// `f - S_{1/2} f` vanishes just below `sup I`.
    AlphaMinus,
}

/// `f = μ + S_{1/2} μ + ν - S_{1/2} ν` with `μ`, `ν` each supported at (at
/// most) one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Hull of `f` for `R_2`, lifted into `(-1/4, 1/4)`.
    pub i: Arc,
    pub mu: Distribution,
    pub nu: Distribution,
    pub case: ReflectionCase,
}

impl Decomposition {
    pub fn reassemble(&self) -> Distribution {
        let half = Angle::half();
        self.mu
            .add(&self.mu.shift(&half))
            .add(&self.nu)
            .sub(&self.nu.shift(&half))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReflectionOutcome {
    /// `supp f ∗ f♯` has a point outside `{0, 1/2}`.
    NotApplicable { stray: Angle },
    Decomposed(Decomposition),
}

impl Engine {
    /// If `supp f ∗ f♯ ⊂ {0, 1/2}` and the `R_2` hull of `f` fits in
    /// `(-1/4, 1/4)` with length below `1/4`, the support of `f` is at most
    /// the four points `inf I, sup I, inf I + 1/2, sup I + 1/2` and `f`
    /// splits into a symmetric and an antisymmetric point part.
    pub fn analyze_reflection(&self, f: &Distribution, mode: ReflectionMode) -> Result<ReflectionOutcome> {
        let hull = minimal_hull(f, 2)?;
        let quarter = ratio(1, 4);
        if *hull.length() >= quarter {
            return Err(Error::Hypothesis(format!(
                "|I| = {} is not below 1/4 (I = {hull})",
                format_fraction(hull.length())
            )));
        }
        let Some(i) = hull.relift_inside(2, &-quarter.clone(), &quarter) else {
            return Err(Error::Hypothesis(format!(
                "no lift of I = {hull} lies inside (-1/4, 1/4)"
            )));
        };

        let sharp = match mode {
            ReflectionMode::Plain => f.reflect(),
            ReflectionMode::Conjugate => f.reflect_conj(),
        };
        let half = Angle::half();
        if let Some(stray) = f
            .convolve(&sharp)
            .support()
            .into_iter()
            .find(|x| !x.is_zero() && *x != half)
        {
            return Ok(ReflectionOutcome::NotApplicable { stray });
        }

        let shifted = f.shift(&half);
        let decomposition = if i.is_point() {
            let two = ratio(1, 2);
            Decomposition {
                mu: f.add(&shifted).scale_rational(&two).restrict(&i, Endpoints::Closed),
                nu: f.sub(&shifted).scale_rational(&two).restrict(&i, Endpoints::Closed),
                i,
                case: ReflectionCase::SinglePoint,
            }
        } else {
            let corners = [
                Angle::new(i.inf().clone()),
                Angle::new(i.sup()),
                Angle::new(i.inf() + ratio(1, 2)),
                Angle::new(i.sup() + ratio(1, 2)),
            ];
            if let Some(x) = f.support().iter().find(|x| !corners.contains(x)) {
                return Err(Error::TheoremViolation(format!(
                    "supp f ∗ f♯ ⊂ {{0, 1/2}} but {x} is not an endpoint of I = {i} or its antipode"
                )));
            }
            let below_sup = Window::new(i.sup() - ratio(1, 2), i.sup())?;
            let above_inf = Window::new(i.inf().clone(), i.inf() + ratio(1, 2))?;
            let case = [1i64, -1].into_iter().find(|&a| {
                let s = CycloNumber::from_int(a);
                f.add(&shifted.scale(&s)).vanishes_on(&below_sup)
                    && f.sub(&shifted.scale(&s)).vanishes_on(&above_inf)
            });
            let Some(alpha) = case else {
                return Err(Error::TheoremViolation(format!(
                    "neither α = 1 nor α = -1 gives the symmetry of f on I = {i}"
                )));
            };
            let upper = Arc::from_bounds(i.inf().clone(), quarter.clone())?;
            let lower = Arc::from_bounds(-quarter, i.sup())?;
            let at_sup = f.restrict(&upper, Endpoints::Open);
            let at_inf = f.restrict(&lower, Endpoints::Open);
            if alpha == 1 {
                Decomposition {
                    i,
                    mu: at_sup,
                    nu: at_inf,
                    case: ReflectionCase::AlphaPlus,
                }
            } else {
                Decomposition {
                    i,
                    mu: at_inf,
                    nu: at_sup,
                    case: ReflectionCase::AlphaMinus,
                }
            }
        };

        for (name, part) in [("μ", &decomposition.mu), ("ν", &decomposition.nu)] {
            if part.support().len() > 1 {
                return Err(Error::TheoremViolation(format!(
                    "{name} = {part} is supported at more than one point"
                )));
            }
        }
        if decomposition.reassemble() != *f {
            return Err(Error::TheoremViolation(format!(
                "μ + S μ + ν - S ν = {} differs from f = {f}",
                decomposition.reassemble()
            )));
        }
        Ok(ReflectionOutcome::Decomposed(decomposition))
    }
}

/// `f = μ + S_{1/2} μ + ν - S_{1/2} ν`.
pub fn assemble(mu: &Distribution, nu: &Distribution) -> Distribution {
    Decomposition {
        i: Arc::point(&Angle::zero()),
        mu: mu.clone(),
        nu: nu.clone(),
        case: ReflectionCase::SinglePoint,
    }
    .reassemble()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::deltas;
    use crate::titchmarsh::analyze_reflection;

    fn decomposed(f: &Distribution) -> Decomposition {
        match analyze_reflection(f).unwrap() {
            ReflectionOutcome::Decomposed(d) => d,
            other => panic!("expected a decomposition, got {other:?}"),
        }
    }

    #[test]
    fn point_case() {
        let d = decomposed(&deltas(&[(1, (0, 1)), (1, (1, 2))]));
        assert_eq!(d.case, ReflectionCase::SinglePoint);
        assert_eq!(d.mu, Distribution::delta(Angle::zero()));
        assert!(d.nu.is_zero());
    }

    #[test]
    fn four_point_example() {
        let f = deltas(&[(1, (1, 16)), (1, (9, 16)), (1, (15, 16)), (-1, (7, 16))]);
        let sharp = f.reflect();
        let prod = f.convolve(&sharp);
        assert!(prod.support().iter().all(|x| x.is_zero() || *x == Angle::half()));
        let d = decomposed(&f);
        assert_eq!(d.i, Arc::from_bounds(ratio(-1, 16), ratio(1, 16)).unwrap());
        assert_eq!(d.case, ReflectionCase::AlphaPlus);
        assert_eq!(d.mu, deltas(&[(1, (1, 16))]));
        assert_eq!(d.nu, deltas(&[(1, (15, 16))]));
    }

    #[test]
    fn swapped_roles_take_alpha_minus() {
        // μ at the low end, ν at the high end
        let f = assemble(&deltas(&[(2, (15, 16))]), &deltas(&[(3, (1, 16))]));
        let d = decomposed(&f);
        assert_eq!(d.case, ReflectionCase::AlphaMinus);
        assert_eq!(d.reassemble(), f);
        assert_eq!(d.mu, deltas(&[(2, (15, 16))]));
    }

    #[test]
    fn not_applicable() {
        let f = deltas(&[(1, (1, 16)), (1, (1, 8))]);
        match analyze_reflection(&f).unwrap() {
            ReflectionOutcome::NotApplicable { stray } => {
                assert!(stray == Angle::from_ratio(1, 16) || stray == Angle::from_ratio(15, 16));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hypotheses() {
        let wide = deltas(&[(1, (0, 1)), (1, (1, 4))]);
        assert!(analyze_reflection(&wide).unwrap_err().is_hypothesis());
        assert_eq!(analyze_reflection(&Distribution::zero()), Err(Error::ZeroDistribution));
    }

    #[test]
    fn conjugate_mode_with_complex_coefficients() {
        let i = CycloNumber::imaginary_unit();
        let mu = Distribution::term(Angle::from_ratio(1, 32), 0, i.clone());
        let nu = Distribution::term(Angle::from_ratio(-1, 16), 1, CycloNumber::from_int(2));
        let f = assemble(&mu, &nu);
        let e = Engine::default();
        for mode in [ReflectionMode::Plain, ReflectionMode::Conjugate] {
            match e.analyze_reflection(&f, mode).unwrap() {
                ReflectionOutcome::Decomposed(d) => assert_eq!(d.reassemble(), f),
                other => panic!("{mode:?}: {other:?}"),
            }
        }
    }
}
