use proptest::prelude::*;
use velojet::formal::{d_formal, JetPolynomial, JetVariable};
use velojet::{
    extract, extract_normalize, extract_recurrence, is_regular, orbit_equal, prolong,
    solve_transporter, GroupJet, MultiIndex, PolyMap, Polynomial, Rational, Scalar, Tolerance,
    Velocity,
};

const EXACT: Tolerance = Tolerance(0.0);

fn ratio() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Rational::from_ratio(n, d))
}

fn pool() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(ratio(), 48)
}

fn velocity_from(n: usize, m: usize, r: usize, values: &[Rational]) -> Velocity<Rational> {
    let mut k = 0;
    Velocity::from_fn(n, m, r, |_, _| {
        k += 1;
        values[(k - 1) % values.len()].clone()
    })
}

fn group_from(n: usize, r: usize, values: &[Rational]) -> Option<GroupJet<Rational>> {
    let mut k = 0;
    GroupJet::from_fn(n, r, |_, _| {
        k += 1;
        values[(k - 1) % values.len()].clone()
    })
    .ok()
}

fn shape() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=2, 1usize..=2, 1usize..=3)
}

fn regular_velocity() -> impl Strategy<Value = Velocity<Rational>> {
    (shape(), pool())
        .prop_map(|((n, m, r), values)| velocity_from(n, m, r, &values))
        .prop_filter("regular", |v| is_regular(v, EXACT).is_some())
}

fn group(n: usize, r: usize) -> impl Strategy<Value = GroupJet<Rational>> {
    pool().prop_filter_map("invertible", move |values| group_from(n, r, &values))
}

fn velocity_and_group() -> impl Strategy<Value = (Velocity<Rational>, GroupJet<Rational>)> {
    regular_velocity().prop_flat_map(|v| {
        let (n, r) = (v.n(), v.order());
        (Just(v), group(n, r))
    })
}

fn three_groups() -> impl Strategy<Value = [GroupJet<Rational>; 3]> {
    (1usize..=2, 1usize..=3).prop_flat_map(|(n, r)| {
        (group(n, r), group(n, r), group(n, r)).prop_map(|(a, b, c)| [a, b, c])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_axioms([a, b, c] in three_groups()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let id = GroupJet::identity(a.n(), a.order());
        prop_assert_eq!(&a.compose(&id).unwrap(), &a);
        prop_assert_eq!(&id.compose(&a).unwrap(), &a);
        let inv = a.inverse().unwrap();
        prop_assert_eq!(&a.compose(&inv).unwrap(), &id);
        prop_assert_eq!(&inv.compose(&a).unwrap(), &id);
    }

    #[test]
    fn right_action((v, a) in velocity_and_group(), seed in pool()) {
        let Some(b) = group_from(v.n(), v.order(), &seed) else { return Ok(()); };
        let stepwise = v.act(&a).unwrap().act(&b).unwrap();
        prop_assert_eq!(stepwise, v.act(&a.compose(&b).unwrap()).unwrap());
        prop_assert_eq!(v.act(&GroupJet::identity(v.n(), v.order())).unwrap(), v);
    }

    #[test]
    fn truncation_commutes_with_the_action((v, g) in velocity_and_group()) {
        for s in 1..=v.order() {
            let lhs = v.act(&g).unwrap().truncate(s).unwrap();
            let rhs = v.truncate(s).unwrap().act(&g.truncate(s).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn invariants_are_constant_on_orbits((v, g) in velocity_and_group()) {
        let moved = v.act(&g).unwrap();
        let p = extract(&v, EXACT).unwrap();
        prop_assert_eq!(&extract_recurrence(&moved, p.nu()).unwrap(), &p);
        prop_assert_eq!(&extract_normalize(&v, p.nu(), EXACT).unwrap(), &p);
        prop_assert_eq!(p.coordinate_count(), p.coordinates().len());
        let found = solve_transporter(&v, &moved, p.nu(), EXACT).unwrap();
        prop_assert_eq!(found.as_ref(), Some(&g));
        let verdict = orbit_equal(&v, &moved, EXACT).unwrap();
        prop_assert!(verdict.equal);
        prop_assert_eq!(verdict.transporter, Some(g));
    }

    #[test]
    fn lift_is_a_section(v in regular_velocity()) {
        let p = extract(&v, EXACT).unwrap();
        let lifted = p.lift();
        prop_assert_eq!(&extract_recurrence(&lifted, p.nu()).unwrap(), &p);
        prop_assert!(orbit_equal(&v, &lifted, EXACT).unwrap().equal);
    }

    #[test]
    fn separation(v in regular_velocity(), bump in ratio()) {
        prop_assume!(!bump.is_zero());
        let p = extract(&v, EXACT).unwrap();
        let mut other = p.clone().lift();
        let top = MultiIndex::new(vec![0; v.order()]);
        let sigma = (0..v.target_dim()).find(|c| !p.nu().contains(c)).unwrap();
        let value = other.coord(sigma, &top).clone() + bump;
        other.set_coord(sigma, &top, value);
        prop_assert!(!orbit_equal(&v, &other, EXACT).unwrap().equal);
        prop_assert_eq!(solve_transporter(&v, &other, p.nu(), EXACT).unwrap(), None);
    }
}

fn poly_map(vars: usize, comps: usize, coeffs: &[Rational], shift_free: bool) -> PolyMap<Rational> {
    let mut k = 0;
    let mut next = || {
        k += 1;
        coeffs[(k - 1) % coeffs.len()].clone()
    };
    let components = (0..comps)
        .map(|c| {
            let mut p = Polynomial::zero(vars);
            for total in 0..=3u32 {
                if total == 0 && shift_free {
                    continue;
                }
                for i in 0..vars {
                    let mut exps = vec![0; vars];
                    exps[i] = total;
                    if total == 1 && i == c % vars && shift_free {
                        p.add_term(exps.clone(), Rational::one());
                    }
                    p.add_term(exps, next());
                }
            }
            if vars == 2 {
                p.add_term(vec![1, 1], next());
            }
            p
        })
        .collect();
    PolyMap::new(vars, components).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn prolongation_chain_rule(n in 1usize..=2, m in 1usize..=2, r in 1usize..=3, a in pool(), b in pool()) {
        let gamma = poly_map(n, n + m, &a, false);
        let phi = poly_map(n, n, &b, true);
        let origin = vec![Rational::zero(); n];
        let Ok(g) = GroupJet::new(phi.jet_at(&origin, r).unwrap()) else { return Ok(()); };
        let lhs = prolong(&gamma.compose(&phi).unwrap(), &origin, r).unwrap();
        let rhs = prolong(&gamma, &origin, r).unwrap().act(&g).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn formal_derivative_is_total_derivative(m in 1usize..=2, a in pool(), t in ratio(), comp in 0usize..3, order in 0usize..3) {
        // (d_1 y^A_J)(j^r γ(t)) is the t-derivative of y^A_J along the prolongation
        let gamma = poly_map(1, 1 + m, &a, false);
        let comp = comp % (1 + m);
        let f = JetPolynomial::variable(1, JetVariable::new(comp, MultiIndex::new(vec![0; order])));
        let df = d_formal(&f, 0, 3).unwrap();
        let v = prolong(&gamma, std::slice::from_ref(&t), 3).unwrap();
        let expected = gamma.components()[comp].derivative(0).pow_derivative(order).eval(&[t]);
        prop_assert_eq!(df.evaluate(&v).unwrap(), expected);
    }

    #[test]
    fn formal_derivatives_commute_and_obey_leibniz(picks in prop::collection::vec((0usize..3, 0usize..2, 0usize..2), 2), c in ratio()) {
        let var = |(comp, i, deg): (usize, usize, usize)| {
            let index = MultiIndex::new(vec![i; deg]);
            JetPolynomial::<Rational>::variable(2, JetVariable::new(comp, index))
        };
        let f = var(picks[0]).add(&JetPolynomial::constant(2, c));
        let g = var(picks[1]).mul(&var(picks[0]));
        let d01 = d_formal(&d_formal(&f.mul(&g), 0, 4).unwrap(), 1, 4).unwrap();
        let d10 = d_formal(&d_formal(&f.mul(&g), 1, 4).unwrap(), 0, 4).unwrap();
        prop_assert_eq!(d01, d10);
        let lhs = d_formal(&f.mul(&g), 0, 4).unwrap();
        let rhs = d_formal(&f, 0, 4).unwrap().mul(&g).add(&f.mul(&d_formal(&g, 0, 4).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }
}

trait RepeatedDerivative {
    fn pow_derivative(&self, times: usize) -> Self;
}

impl RepeatedDerivative for Polynomial<Rational> {
    fn pow_derivative(&self, times: usize) -> Self {
        (0..times).fold(self.clone(), |p, _| p.derivative(0))
    }
}
