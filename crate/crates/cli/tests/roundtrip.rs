use proptest::prelude::*;
use velojet::{extract, Rational, Tolerance, Velocity};
use velojet_cli::doc::JetDocument;
use velojet_cli::random::Sampler;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_documents_round_trip(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=2, r in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let v: Velocity<Rational> = s.velocity(n, m, r);
        let doc = JetDocument::from_velocity(&v);
        let reparsed = JetDocument::parse(&doc.to_json()).unwrap();
        prop_assert_eq!(&reparsed, &doc);
        prop_assert_eq!(reparsed.to_velocity::<Rational>().unwrap(), v.clone());

        let g = s.group::<Rational>(n, r);
        prop_assert_eq!(JetDocument::parse(&JetDocument::from_group(&g).to_json()).unwrap().to_group::<Rational>().unwrap(), g);

        let p = extract(&v, Tolerance(0.0)).unwrap();
        let text = JetDocument::from_grassmann(&p).to_json();
        prop_assert_eq!(JetDocument::parse(&text).unwrap().to_grassmann::<Rational>().unwrap(), p);

        let base = s.point::<Rational>(n + m);
        let chart = s.chart(base, r);
        let text = JetDocument::from_chart(&chart).to_json();
        prop_assert_eq!(JetDocument::parse(&text).unwrap().to_chart::<Rational>().unwrap(), chart);

        let map = s.polymap::<Rational>(n, n + m, 3);
        let text = JetDocument::from_polymap(&map).to_json();
        prop_assert_eq!(JetDocument::parse(&text).unwrap().to_polymap::<Rational>().unwrap(), map);
    }

    #[test]
    fn float_documents_round_trip(seed in any::<u64>(), n in 1usize..=2, r in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let v: Velocity<f64> = s.velocity(n, 2, r);
        let back = JetDocument::parse(&JetDocument::from_velocity(&v).to_json()).unwrap();
        prop_assert_eq!(back.to_velocity::<f64>().unwrap(), v);
    }
}
