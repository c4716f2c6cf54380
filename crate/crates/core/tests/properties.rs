mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{if_oracle, rect_less, rel_close, valid_sets, OracleRadio};
use uavpoc::allocator::{random_plan, run, LearnerConfig};
use uavpoc::config::{ScenarioConfig, Scheme};
use uavpoc::environment::{radio_params, Environment, EnvironmentOptions};
use uavpoc::fuzzy::{relative_index, satisfaction, Direction, Stance, Tfn, Viewpoint};
use uavpoc::interference::{interference_factor, ChannelSet};
use uavpoc::network::{generate_topology, NetworkState};
use uavpoc::plan::{is_orthogonal_set, ChannelPlan};
use uavpoc::preference::{build_fpr, deviation_residuals, least_deviation, FprMatrix, PreferenceParams, PriorityVector};
use uavpoc::quadrature::{ordered_pair_integrals, DEFAULT_NODES};
use uavpoc::utility::{achievable_rate, generalized_throughput, global_utility, Metric};

fn tfn() -> impl Strategy<Value = Tfn> {
    (-50.0..50.0f64, 0.01..10.0f64, 0.01..10.0f64).prop_map(|(c, l, r)| Tfn::new(c, l, r).unwrap())
}

fn fpr(size: usize) -> impl Strategy<Value = FprMatrix> {
    prop::collection::vec(0.0..=1.0f64, size * (size - 1) / 2).prop_map(move |upper| {
        let mut e = vec![0.5; size * size];
        let mut k = 0;
        for i in 0..size {
            for j in i + 1..size {
                e[i * size + j] = upper[k];
                e[j * size + i] = 1.0 - upper[k];
                k += 1;
            }
        }
        FprMatrix::new(size, e).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn satisfaction_is_complementary(a in tfn(), b in tfn()) {
        let lt = satisfaction(&a, &b, Direction::Less).unwrap();
        let gt = satisfaction(&a, &b, Direction::Greater).unwrap();
        prop_assert!((lt + gt - 1.0).abs() < 1e-4);
        prop_assert!((0.0..=1.0).contains(&lt));
    }

    #[test]
    fn satisfaction_with_itself_is_half(a in tfn()) {
        prop_assert!((satisfaction(&a, &a, Direction::Less).unwrap() - 0.5).abs() < 1e-4);
    }

    #[test]
    fn shifting_right_raises_satisfaction(a in tfn(), b in tfn(), by in 0.0..20.0f64) {
        let base = satisfaction(&a, &b, Direction::Greater).unwrap();
        let moved = satisfaction(&a.shifted(by), &b, Direction::Greater).unwrap();
        prop_assert!(moved >= base - 1e-9);
    }

    #[test]
    fn arithmetic_matches_alpha_cuts(a in tfn(), b in tfn(), nu in 0.0..5.0f64, alpha in 0.0..=1.0f64) {
        let cut = |t: &Tfn| (t.center() - (1.0 - alpha) * t.left(), t.center() + (1.0 - alpha) * t.right());
        let (s, (al, ah), (bl, bh)) = (a + b, cut(&a), cut(&b));
        let (sl, sh) = cut(&s);
        prop_assert!((sl - (al + bl)).abs() <= 1e-12 * (1.0 + sl.abs()));
        prop_assert!((sh - (ah + bh)).abs() <= 1e-12 * (1.0 + sh.abs()));
        let scaled = a.scale(nu).unwrap();
        let (kl, kh) = cut(&scaled);
        prop_assert!((kl - nu * al).abs() <= 1e-12 * (1.0 + kl.abs()));
        prop_assert!((kh - nu * ah).abs() <= 1e-12 * (1.0 + kh.abs()));
    }

    #[test]
    fn quadrature_matches_rectangles(a1 in -5.0..5.0f64, w1 in 0.1..5.0f64, a2 in -5.0..5.0f64, w2 in 0.1..5.0f64) {
        let (b1, b2) = (a1 + w1, a2 + w2);
        let f = move |x: f64| if (a1..=b1).contains(&x) { 1.0 } else { 0.0 };
        let g = move |y: f64| if (a2..=b2).contains(&y) { 1.0 } else { 0.0 };
        let r = ordered_pair_integrals(f, &[a1, b1], g, &[a2, b2], DEFAULT_NODES);
        prop_assert!((r.below / r.total - rect_less(a1, b1, a2, b2)).abs() < 1e-4);
    }

    #[test]
    fn relative_index_peaks_at_one(set in prop::collection::vec(tfn(), 2..12)) {
        let v = Viewpoint::for_set(&set, Stance::Neutral).unwrap();
        let idx = relative_index(&set, &v).unwrap();
        let top = idx.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(top, 1.0);
        prop_assert!(idx.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn least_deviation_meets_threshold_on_simplex(q in fpr(11)) {
        let params = PreferenceParams::default();
        let w = least_deviation(&q, &params, &PriorityVector::uniform(11)).unwrap();
        let phi = deviation_residuals(&q, w.weights());
        prop_assert!(phi.iter().all(|p| p.abs() <= params.eta));
        prop_assert!((w.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(w.weights().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn least_deviation_is_permutation_equivariant(q in fpr(11), perm in Just((0..11).collect::<Vec<usize>>()).prop_shuffle()) {
        let params = PreferenceParams::default();
        let w = least_deviation(&q, &params, &PriorityVector::uniform(11)).unwrap();
        let wp = least_deviation(&q.permuted(&perm), &params, &PriorityVector::uniform(11)).unwrap();
        for (i, &p) in perm.iter().enumerate() {
            prop_assert_eq!(wp.weights()[i].to_bits(), w.weights()[p].to_bits());
        }
    }

    #[test]
    fn fpr_is_complementary(v in prop::collection::vec(0.0..1.0f64, 1..11), zeta in 0.0..=1.0f64) {
        let mut v = v;
        v.push(1.0);
        let q = build_fpr(&v, zeta).unwrap();
        let n = v.len();
        for i in 0..n {
            for j in 0..n {
                prop_assert!((q.get(i, j) + q.get(j, i) - 1.0).abs() <= 1e-12);
                if v[i] > v[j] + 1e-12 {
                    prop_assert!(q.get(i, j) > 0.5);
                }
            }
        }
    }

    #[test]
    fn interference_factor_cases(delta in 0usize..12, d in 0.0..200.0f64) {
        let got = interference_factor(delta, d);
        let want = if_oracle(delta, d);
        prop_assert!(got == want || (got - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn orthogonal_sets_are_well_separated(m in 1usize..20, tau in 1usize..7) {
        let cs = ChannelSet::new(m, tau).unwrap();
        let best = cs.max_orthogonal_set();
        prop_assert_eq!(best.len(), cs.o_max());
        prop_assert!(is_orthogonal_set(&best, &cs));
        // no C4-valid set is larger
        prop_assert!(valid_sets(m, tau, m).iter().all(|s| s.len() <= cs.o_max()));
    }

    #[test]
    fn throughput_never_exceeds_rate(seed in any::<u64>(), n in 2usize..12, factor in 1.0..4.0f64) {
        let cfg = ScenarioConfig { n_nodes: n, power_budget_factor: factor, box_extent: [120.0; 3], ..ScenarioConfig::default() };
        let net = generate_topology(&cfg, seed).unwrap();
        let env = Environment::new(net, radio_params(&cfg).unwrap(), EnvironmentOptions::from_scenario(&cfg).frozen(), seed).unwrap();
        let cs = ChannelSet::default();
        let plan = random_plan(&env.net().nodes, &cs, &mut ChaCha8Rng::seed_from_u64(seed));
        for node in 0..n {
            let (r, t) = (achievable_rate(env.estimates(), node, &plan), generalized_throughput(env.estimates(), node, &plan));
            prop_assert!(t <= r + 1e-12 * r && t >= 0.0);
        }
    }

    #[test]
    fn global_utility_matches_oracle(seed in any::<u64>(), n in 1usize..8) {
        let cfg = ScenarioConfig { n_nodes: n, power_budget_factor: 3.0, box_extent: [100.0; 3], ..ScenarioConfig::default() };
        let net = generate_topology(&cfg, seed).unwrap();
        let env = Environment::new(net.clone(), radio_params(&cfg).unwrap(), EnvironmentOptions::from_scenario(&cfg).frozen(), seed).unwrap();
        let mut plan = random_plan(&net.nodes, &ChannelSet::default(), &mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        plan.active[0] = seed % 2 == 0;
        let oracle = OracleRadio::from_net(&net, env.estimates().signal_table().to_vec(), 11, cfg.noise_w(), cfg.bandwidth);
        prop_assert!(rel_close(global_utility(env.estimates(), &plan, Metric::Throughput), oracle.global_throughput(&plan), 1e-12));
        prop_assert!(rel_close(global_utility(env.estimates(), &plan, Metric::Rate), oracle.global_rate(&plan), 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // with no QoS floor every adopted change strictly raises the mover's decision-view utility
    #[test]
    fn frozen_fuzzy_runs_converge(seed in any::<u64>(), n in 3usize..25) {
        let cfg = ScenarioConfig { n_nodes: n, r_th: 0.0, ..ScenarioConfig::default() };
        let net: NetworkState = generate_topology(&cfg, seed).unwrap();
        let mut env = Environment::new(net, radio_params(&cfg).unwrap(), EnvironmentOptions::from_scenario(&cfg).frozen(), seed).unwrap();
        let init: ChannelPlan = random_plan(&env.net().nodes, &ChannelSet::default(), &mut ChaCha8Rng::seed_from_u64(seed));
        let trace = run(&mut env, init, Scheme::Fuzzy, &LearnerConfig::from_scenario(&cfg), &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        prop_assert!(trace.converged);
        prop_assert_eq!(trace.c4_violations(), 0);
    }
}

#[test]
fn uniform_preferences_give_uniform_weights() {
    for n in 1..=11 {
        let w = least_deviation(&FprMatrix::uniform(n), &PreferenceParams::default(), &PriorityVector::uniform(n)).unwrap();
        assert!(w.weights().iter().all(|&x| x == 1.0 / n as f64));
    }
}

#[test]
fn two_alternative_extreme_ratio() {
    let q = build_fpr(&[1.0, 0.0], 0.5).unwrap();
    assert_eq!(q.get(0, 1), 1.0);
    let w = least_deviation(&q, &PreferenceParams::default(), &PriorityVector::uniform(2)).unwrap();
    assert!((w.weights()[0] / w.weights()[1] - 9.0).abs() < 1e-3);
}
