//! Algebraic and geometric invariants, checked on random exact inputs.

use circle_titchmarsh::circle::{
    arc_sum, minimal_covering_arc, orbit_contains, rn_orbit, Angle, Arc, Endpoints,
};
use circle_titchmarsh::cyclotomic::CycloNumber;
use circle_titchmarsh::distribution::{modulation, Distribution};
use circle_titchmarsh::format::{parse_instance, write_distribution};
use circle_titchmarsh::rational::{lcm_u32, ratio, Rational};
use circle_titchmarsh::titchmarsh::make_zero_divisors;
use proptest::prelude::*;

const ORDERS: [u32; 7] = [1, 2, 3, 4, 6, 8, 12];

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn cyclo_in(order: u32) -> impl Strategy<Value = CycloNumber> {
    prop::collection::vec(
        prop_oneof![3 => Just(ratio(0, 1)), 2 => small_rational()],
        order as usize,
    )
    .prop_map(move |v| CycloNumber::from_group_ring(order, &v))
}

fn cyclo() -> impl Strategy<Value = CycloNumber> {
    prop::sample::select(&ORDERS[..]).prop_flat_map(cyclo_in)
}

fn angle() -> impl Strategy<Value = Angle> {
    (1i64..=24).prop_flat_map(|q| (0..q).prop_map(move |p| Angle::from_ratio(p, q)))
}

/// Locations with denominators dividing 48, so Fourier fields stay small.
fn grid_angle() -> impl Strategy<Value = Angle> {
    (0i64..48).prop_map(|p| Angle::from_ratio(p, 48))
}

fn distribution() -> impl Strategy<Value = Distribution> {
    prop::collection::vec((grid_angle(), 0u32..=2, cyclo()), 0..5).prop_map(Distribution::from_terms)
}

fn fourier_order(ds: &[&Distribution]) -> u32 {
    ds.iter()
        .map(|d| d.fourier_field_order().unwrap())
        .fold(1, lcm_u32)
}

/// Arc with a start on a 1/48 grid and a length below `cap`.
fn arc_below(cap: Rational) -> impl Strategy<Value = Arc> {
    (0i64..48, 0i64..48).prop_filter_map("length too large", move |(lo, len)| {
        let len = ratio(len, 48);
        (len < cap).then(|| Arc::new(ratio(lo, 48), len).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_is_a_commutative_group(a in cyclo(), b in cyclo(), c in cyclo()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &CycloNumber::zero(1), a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn multiplication_is_commutative_associative_and_distributive(a in cyclo(), b in cyclo(), c in cyclo()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &CycloNumber::one(1), a.clone());
    }

    #[test]
    fn nonzero_elements_are_invertible(a in cyclo()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!((&a * &inv).is_one());
        prop_assert_eq!(b_div(&a, &a), CycloNumber::one(1));
    }

    #[test]
    fn conjugation_is_a_field_involution(a in cyclo(), b in cyclo()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
    }

    #[test]
    fn promote_then_demote_is_identity(a in cyclo(), k in 1u32..=4) {
        let big = a.order() * k;
        let up = a.promote(big).unwrap();
        prop_assert_eq!(&up, &a);
        prop_assert_eq!(up.demote(a.order()), Some(a.clone()));
        let minimal = a.minimal_order();
        prop_assert_eq!(a.order() % minimal, 0);
        prop_assert_eq!(a.demote(minimal), Some(a.clone()));
    }

    #[test]
    fn text_form_round_trips(a in cyclo()) {
        let parsed = CycloNumber::parse(&a.to_expr()).unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn convolution_is_commutative_associative_and_bilinear(
        f in distribution(), g in distribution(), h in distribution(), s in cyclo()
    ) {
        prop_assert_eq!(f.convolve(&g), g.convolve(&f));
        prop_assert_eq!(f.convolve(&g).convolve(&h), f.convolve(&g.convolve(&h)));
        prop_assert_eq!(f.convolve(&g.add(&h)), f.convolve(&g).add(&f.convolve(&h)));
        prop_assert_eq!(f.scale(&s).convolve(&g), f.convolve(&g).scale(&s));
        prop_assert_eq!(f.convolve(&Distribution::delta(Angle::zero())), f.clone());
    }

    #[test]
    fn fourier_turns_convolution_into_products(f in distribution(), g in distribution(), m in -8i64..=8) {
        let h = f.convolve(&g);
        let order = fourier_order(&[&f, &g, &h]);
        let lhs = h.fourier_coeff_in(m, order).unwrap();
        let rhs = &f.fourier_coeff_in(m, order).unwrap() * &g.fourier_coeff_in(m, order).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_multiplies_by_a_character(f in distribution(), y in grid_angle(), m in -8i64..=8) {
        let shifted = f.shift(&y);
        let order = lcm_u32(fourier_order(&[&f, &shifted]), modulation(m, &y).order());
        let lhs = shifted.fourier_coeff_in(m, order).unwrap();
        let rhs = &modulation(m, &y) * &f.fourier_coeff_in(m, order).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reflection_negates_the_frequency(f in distribution(), m in -8i64..=8) {
        let r = f.reflect();
        let order = fourier_order(&[&f, &r]);
        prop_assert_eq!(r.fourier_coeff_in(m, order).unwrap(), f.fourier_coeff_in(-m, order).unwrap());
        let rc = f.reflect_conj();
        prop_assert_eq!(rc.fourier_coeff_in(m, order).unwrap(), f.fourier_coeff_in(m, order).unwrap().conj());
        prop_assert_eq!(r.reflect(), f.clone());
    }

    #[test]
    fn symmetric_and_antisymmetric_parts_annihilate(f in distribution(), g in distribution()) {
        let (a, b) = make_zero_divisors(&f, &g);
        prop_assert!(a.convolve(&b).is_zero());
    }

    #[test]
    fn components_rebuild_the_distribution(
        n in 1u32..=6,
        start in 0i64..48,
        len in 0i64..8,
        raw in prop::collection::vec((0i64..8, 0i64..6, 0u32..=1, cyclo()), 1..6),
        alpha_k in 0i64..6,
    ) {
        let i = Arc::new(ratio(start, 48), ratio(len, 48 * n as i64)).unwrap();
        let den = 7 * 48 * n as i64;
        // Points of I at offsets t·|I|/7, rotated by j/n.
        let f = Distribution::from_terms(raw.into_iter().map(|(t, j, p, c)| {
            let x = i.inf() + ratio(t.min(7) * len, den) + ratio(j % n as i64, n as i64);
            (Angle::new(x), p, c)
        }));
        let parts = f.components(&i, n).unwrap();
        let mut rebuilt = Distribution::zero();
        for (j, part) in parts.iter().enumerate() {
            for x in part.support() {
                prop_assert!(i.contains(&x, Endpoints::Closed));
            }
            rebuilt = rebuilt.add(&part.shift(&Angle::from_ratio(-(j as i64), n as i64)));
        }
        prop_assert_eq!(&rebuilt, &f);

        let alpha = CycloNumber::root_of_unity(alpha_k, n);
        let restricted = f.symmetrize(n, &alpha).unwrap().restrict(&i, Endpoints::Closed);
        let mut weighted = Distribution::zero();
        let mut w = CycloNumber::one(1);
        for part in &parts {
            weighted = weighted.add(&part.scale(&w));
            w = &w * &alpha;
        }
        prop_assert_eq!(restricted, weighted);
    }

    #[test]
    fn arc_sum_is_associative(a in arc_below(ratio(1, 3)), b in arc_below(ratio(1, 3)), c in arc_below(ratio(1, 3))) {
        let left = arc_sum(&arc_sum(&a, &b).unwrap(), &c).unwrap();
        let right = arc_sum(&a, &arc_sum(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.inf(), right.inf());
        prop_assert_eq!(left.length(), right.length());
        prop_assert_eq!(left.length(), &(a.length() + b.length() + c.length()));
    }

    #[test]
    fn rotates_are_disjoint_exactly_below_one_over_n(i in arc_below(ratio(1, 1)), n in 1u32..=8) {
        let orbit = rn_orbit(&i, n).unwrap();
        prop_assert_eq!(orbit.arcs.len(), n as usize);
        prop_assert_eq!(orbit.disjoint, *i.length() < ratio(1, n as i64));
        if orbit.disjoint && n > 1 {
            // Endpoints of one rotate never lie in another.
            for (j, a) in orbit.arcs.iter().enumerate() {
                for (k, b) in orbit.arcs.iter().enumerate() {
                    if j != k {
                        prop_assert!(!b.contains(&a.start_angle(), Endpoints::Closed));
                        prop_assert!(!b.contains(&Angle::new(a.sup()), Endpoints::Closed));
                    }
                }
            }
        }
    }

    #[test]
    fn minimal_covering_arc_covers_and_is_shortest(
        points in prop::collection::vec(angle(), 1..7),
        n in 1u32..=6,
    ) {
        let arc = minimal_covering_arc(&points, n).unwrap();
        prop_assert!(*arc.length() < ratio(1, n as i64));
        for x in &points {
            prop_assert!(orbit_contains(&arc, n, x));
        }
        // Endpoints are residues of input points.
        let period = ratio(1, n as i64);
        let residue = |x: &Rational| circle_titchmarsh::rational::rem_euclid(x, &period);
        let residues: Vec<Rational> = points.iter().map(|p| residue(p.turns())).collect();
        prop_assert!(residues.contains(&residue(arc.inf())));
        prop_assert!(residues.contains(&residue(&arc.sup())));
        // No covering arc starting at a residue is shorter.
        for lo in &residues {
            let needed = residues
                .iter()
                .map(|r| circle_titchmarsh::rational::rem_euclid(&(r - lo), &period))
                .max()
                .unwrap();
            prop_assert!(*arc.length() <= needed);
        }
    }

    #[test]
    fn canonical_json_round_trips(f in distribution()) {
        let text = write_distribution(&f);
        let parsed = parse_instance(&text).unwrap();
        prop_assert_eq!(parsed.distributions.len(), 1);
        prop_assert_eq!(&parsed.distributions[0], &f);
        prop_assert_eq!(write_distribution(&parsed.distributions[0]), text);
    }
}

fn b_div(a: &CycloNumber, b: &CycloNumber) -> CycloNumber {
    a.checked_div(b).unwrap()
}
