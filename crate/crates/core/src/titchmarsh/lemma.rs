use std::collections::BTreeSet;

use crate::circle::{Arc, Endpoints};
use crate::cyclotomic::CycloNumber;
use crate::distribution::Distribution;
use crate::error::{Error, Result};

use super::Root;

/// Picks `α = γ^m` with `inf supp Σ_j α^j f_j = min_j inf supp f_j`.
///
/// All components must live on `arc` (closed). Let `a` be the smallest
/// lifted support point. For each derivative order the coefficients at `a`
/// form a vector `c_j`; the Vandermonde matrix `[γ^{mj}]` is invertible, so
/// some `m` leaves `Σ_j γ^{mj} c_j ≠ 0` for some order. Candidates are tried
/// in the order `m = 0, 1, ..., n-1`.
pub fn lemma_alpha(components: &[Distribution], arc: &Arc, n: u32) -> Result<Root> {
    if n == 0 || components.len() != n as usize {
        return Err(Error::InvalidParameter(format!(
            "expected {n} components, got {}",
            components.len()
        )));
    }
    for (j, c) in components.iter().enumerate() {
        if let Some(x) = c.support().iter().find(|x| !arc.contains(x, Endpoints::Closed)) {
            return Err(Error::InvalidParameter(format!(
                "component {j} has support point {x} outside {arc}"
            )));
        }
    }
    let Some(a) = components
        .iter()
        .filter_map(|c| c.inf_lift(arc, Endpoints::Closed))
        .min()
    else {
        return Err(Error::ZeroDistribution);
    };
    let at = crate::circle::Angle::new(a.clone());
    let orders: BTreeSet<u32> = components
        .iter()
        .flat_map(|c| c.terms().filter(|t| *t.0 == at).map(|t| t.1).collect::<Vec<_>>())
        .collect();

    for m in 0..n {
        let root = Root::new(m, n);
        let survives = orders.iter().any(|&p| {
            let mut weight = CycloNumber::one(1);
            let mut sum = CycloNumber::zero(1);
            for c in components {
                if let Some(coeff) = c.coeff(&at, p) {
                    sum = sum + &weight * coeff;
                }
                weight = &weight * &root.value;
            }
            !sum.is_zero()
        });
        if !survives {
            continue;
        }
        let combined = weighted_sum(components, &root.value);
        if combined.inf_lift(arc, Endpoints::Closed) != Some(a.clone()) {
            return Err(Error::TheoremViolation(format!(
                "root γ^{m} keeps a coefficient at {at} but the weighted sum starts elsewhere"
            )));
        }
        return Ok(root);
    }
    Err(Error::TheoremViolation(format!(
        "no {n}-th root of unity keeps the leading coefficients at {at}"
    )))
}

/// `Σ_j α^j f_j`.
pub(crate) fn weighted_sum(components: &[Distribution], alpha: &CycloNumber) -> Distribution {
    let mut out = Distribution::zero();
    let mut weight = CycloNumber::one(1);
    for c in components {
        out = out.add(&c.scale(&weight));
        weight = &weight * alpha;
    }
    out
}

/// Rows `m = 1..=n`, columns `j = 0..n`: entry `γ^{mj}`.
pub fn vandermonde_matrix(n: u32) -> Vec<Vec<CycloNumber>> {
    (1..=n as i64)
        .map(|m| {
            (0..n as i64)
                .map(|j| CycloNumber::root_of_unity(m * j, n))
                .collect()
        })
        .collect()
}

/// `∏_{1 <= j < k <= n} (γ^k - γ^j)`.
pub fn vandermonde_product(n: u32) -> CycloNumber {
    let mut acc = CycloNumber::one(n);
    for k in 1..=n as i64 {
        for j in 1..k {
            let diff = CycloNumber::root_of_unity(k, n) - CycloNumber::root_of_unity(j, n);
            acc = &acc * &diff;
        }
    }
    acc
}
