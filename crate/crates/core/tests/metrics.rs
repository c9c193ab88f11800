use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use clab::classes::{gen_mdnf, gen_pmon, gen_singletons, vcd1_example};
use clab::learners::vcd1_metric;
use clab::metrics::{hamming, parse_rational, spectrum, spectrum_size, vs_distance, DistanceMatrix, Metric};
use clab::{Caps, ConceptClass, Error, Rational, VersionSpace};

fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

#[test]
fn hamming_examples() {
    assert_eq!(hamming(0b011, 0b110), 2);
    assert_eq!(hamming(5, 5), 0);
    assert_eq!(hamming(0, 0b1111), 4);
    assert_eq!(Metric::Hamming.fixed(0b011, 0b110), int(2));
}

#[test]
fn discrete_examples() {
    assert_eq!(Metric::Discrete.fixed(3, 3), int(0));
    assert_eq!(Metric::Discrete.fixed(3, 9), int(1));
}

#[test]
fn spectrum_examples() {
    for m in 1..=5 {
        assert_eq!(spectrum_size(&Metric::Hamming, 1 << m), m);
    }
    assert_eq!(spectrum_size(&Metric::Discrete, 7), 1);
    let distinct = DistanceMatrix::from_fn(4, |x, y| int(if x == y { 0 } else { (1 << x) + (1 << y) })).unwrap();
    let m = Metric::matrix(distinct);
    for x in 0..4 {
        assert_eq!(spectrum(&m, 4, x).len(), 3);
    }
}

#[test]
fn vs_distance_examples() {
    let class = Arc::new(ConceptClass::parse_spec("domain 4\n1111\n0011\n").unwrap());
    let vs = VersionSpace::full(class.clone());
    assert_eq!(vs_distance(&vs, 0b00, 0b10), Rational::new(1, 2));
    assert_eq!(vs_distance(&vs, 2, 2), int(0));
    assert_eq!(vs_distance(&vs, 0b10, 0b11), int(0));
    let env = clab::metrics::MetricEnv { vs: Some(&vs), round: 0 };
    assert_eq!(Metric::VersionSpaceInduced.distance(0, 2, &env), Rational::new(1, 2));
}

#[test]
fn matrix_csv_round_trip() {
    let text = "0, 1/2, 3\n1/2, 0, 0.25\n3, 1/4, 0\n";
    let m = DistanceMatrix::from_csv(text.as_bytes()).unwrap();
    assert_eq!(m.get(0, 1), Rational::new(1, 2));
    assert_eq!(m.get(1, 2), Rational::new(1, 4));
    let back = DistanceMatrix::from_csv(m.to_csv().as_bytes()).unwrap();
    assert_eq!(back, m);
    assert!(matches!(DistanceMatrix::from_csv("0,x\nx,0\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
    assert!(DistanceMatrix::from_csv("0,1\n2,0\n".as_bytes()).is_err());
    assert!(DistanceMatrix::from_csv("0,1,1\n1,0\n".as_bytes()).is_err());
}

#[test]
fn rational_parsing() {
    assert_eq!(parse_rational("3"), Some(int(3)));
    assert_eq!(parse_rational(" 6/8 "), Some(Rational::new(3, 4)));
    assert_eq!(parse_rational("0.125"), Some(Rational::new(1, 8)));
    assert_eq!(parse_rational("1/0"), None);
    assert_eq!(parse_rational("abc"), None);
}

#[test]
fn metric_domain_checks() {
    assert!(Metric::Hamming.check_domain(8).is_ok());
    assert!(matches!(Metric::Hamming.check_domain(6), Err(Error::DomainMismatch(_))));
    assert!(Metric::GridL1 { dims: vec![2, 3] }.check_domain(6).is_ok());
    assert!(Metric::GridL1 { dims: vec![2, 3] }.check_domain(5).is_err());
}

#[test]
fn vcd1_metric_examples() {
    let cons = vcd1_metric(&vcd1_example()).unwrap();
    assert_eq!(cons.order.len(), 3);
    assert_eq!(cons.concepts.len(), 4);
    let mut order = cons.order.clone();
    order.sort();
    assert_eq!(order, [0, 1, 2]);
    let singles = vcd1_metric(&gen_singletons(3, &Caps::default()).unwrap()).unwrap();
    assert_eq!(singles.concepts.len(), 4);
    assert!(matches!(vcd1_metric(&gen_pmon(2, &Caps::default()).unwrap()), Err(Error::NotVcdOne)));
}

#[test]
fn vcd1_metric_is_symmetric_with_zero_diagonal() {
    for n in 2..=6 {
        let cons = vcd1_metric(&gen_singletons(n, &Caps::default()).unwrap()).unwrap();
        let pos = cons.positions();
        for x in 0..n {
            assert_eq!(cons.metric.fixed(x, x), int(0));
            for y in 0..n {
                let d = cons.metric.fixed(x, y);
                assert_eq!(d, cons.metric.fixed(y, x));
                if x != y && cons.bits[pos[x]] == cons.bits[pos[y]] {
                    assert_eq!(d, int((pos[x] as i64 - pos[y] as i64).abs()));
                } else if x != y {
                    assert_eq!(d, int(n as i64));
                }
            }
        }
    }
}

#[test]
fn vs_distance_monotone_on_chains() {
    let class = Arc::new(gen_mdnf(4, 2, 2, &Caps::default()).unwrap());
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(2024);
    for _ in 0..1000 {
        let keep: Vec<bool> = (0..class.len()).map(|_| rng.gen_bool(0.5)).collect();
        let mut vs = VersionSpace::full(class.clone()).retain(|c| keep[c]);
        if vs.is_empty() {
            vs = VersionSpace::full(class.clone());
        }
        let a: usize = rng.gen_range(0..16);
        let b = a | rng.gen_range(0..16);
        let c = b | rng.gen_range(0..16);
        assert!(vs_distance(&vs, a, b) <= vs_distance(&vs, a, c), "a={:04b} b={:04b} c={:04b}", a, b, c);
    }
}

proptest! {
    #[test]
    fn random_matrices_are_valid(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let m = DistanceMatrix::random(n, 4, &mut rng);
        for x in 0..n {
            prop_assert_eq!(m.get(x, x), int(0));
            for y in 0..n {
                prop_assert_eq!(m.get(x, y), m.get(y, x));
                prop_assert!(x == y || (m.get(x, y) >= int(1) && m.get(x, y) <= int(4)));
            }
        }
    }

    #[test]
    fn builtin_metrics_are_symmetric(x in 0usize..64, y in 0usize..64) {
        for m in [Metric::Hamming, Metric::Discrete, Metric::GridL1 { dims: vec![4, 4, 4] }] {
            prop_assert_eq!(m.fixed(x, y), m.fixed(y, x));
            prop_assert_eq!(m.fixed(x, x), int(0));
        }
    }
}
