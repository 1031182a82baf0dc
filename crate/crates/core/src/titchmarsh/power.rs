use crate::circle::{arc_multiple, check_n, Arc};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::rational::{format_fraction, ratio};

use super::{lifted_hull, minimal_hull, Engine};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerReport {
    pub n: u32,
    pub p: u32,
    /// Hull of `f` for `R_n`.
    pub i: Arc,
    /// Hull of `f^{∗p}`, lifted into `pI`; always equal to `pI`.
    pub k: Arc,
    pub power: Distribution,
}

impl Engine {
    /// Checks that the hull of `f^{∗p}` is exactly `pI` when `|I| < 1/(pn)`.
    pub fn analyze_power(&self, f: &Distribution, n: u32, p: u32) -> Result<PowerReport> {
        check_n(n)?;
        if p == 0 {
            return Err(Error::InvalidParameter("p must be a positive integer".into()));
        }
        let i = minimal_hull(f, n)?;
        let bound = ratio(1, p as i64 * n as i64);
        if *i.length() >= bound {
            return Err(Error::Hypothesis(format!(
                "|I| = {} is not below 1/(pn) = {}",
                format_fraction(i.length()),
                format_fraction(&bound)
            )));
        }
        let power = f.convolve_power(p)?;
        let pi = arc_multiple(&i, p)?;
        let Some(k) = lifted_hull(&power, &pi, n)? else {
            return Err(Error::TheoremViolation(format!(
                "f^{{∗{p}}} vanishes although f = {f} is nonzero"
            )));
        };
        if k != pi {
            return Err(Error::TheoremViolation(format!(
                "hull of f^{{∗{p}}} is {k}, expected pI = {pi}"
            )));
        }
        Ok(PowerReport { n, p, i, k, power })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::Angle;
    use crate::distribution::deltas;
    use crate::titchmarsh::analyze_power;

    #[test]
    fn single_point() {
        let r = analyze_power(&deltas(&[(1, (1, 32))]), 2, 3).unwrap();
        assert_eq!(r.k, Arc::point(&Angle::from_ratio(3, 32)));
        assert_eq!(r.power, deltas(&[(1, (3, 32))]));
    }

    #[test]
    fn trinomial() {
        let f = deltas(&[(1, (0, 1)), (1, (1, 32)), (1, (1, 2))]);
        let r = analyze_power(&f, 2, 3).unwrap();
        assert_eq!(r.i, Arc::from_bounds(ratio(0, 1), ratio(1, 32)).unwrap());
        assert_eq!(r.k, Arc::from_bounds(ratio(0, 1), ratio(3, 32)).unwrap());
    }

    #[test]
    fn difference_squared() {
        let f = deltas(&[(1, (0, 1)), (-1, (1, 32))]);
        let r = analyze_power(&f, 1, 2).unwrap();
        assert_eq!(r.k, Arc::from_bounds(ratio(0, 1), ratio(2, 32)).unwrap());
        assert_eq!(r.power, deltas(&[(1, (0, 1)), (-2, (1, 32)), (1, (1, 16))]));
    }

    #[test]
    fn hypothesis_and_parameters() {
        let f = deltas(&[(1, (0, 1)), (1, (1, 8))]);
        assert!(analyze_power(&f, 2, 4).unwrap_err().is_hypothesis());
        assert!(analyze_power(&f, 2, 3).is_ok());
        assert!(matches!(analyze_power(&f, 2, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(analyze_power(&f, 0, 2), Err(Error::InvalidParameter(_))));
        assert_eq!(analyze_power(&Distribution::zero(), 2, 2), Err(Error::ZeroDistribution));
    }
}
