mod common;

use actinwire::charge_transport::{transmission_time, Transmission};
use actinwire::wannet::{
    campaign_seeds, grow_wire, hit_probability, run_campaign, run_simulation, summarize, Dimension,
    GrowthOutcome, Node, RelayPolicy, ScenarioConfig,
};
use actinwire::ModelError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn node(id: u32, x: f64, y: f64, r: f64) -> Node {
    Node {
        id,
        position: [x, y, 0.0],
        radius_um: r,
        is_gateway: false,
        initial_detector: false,
    }
}

fn pair(target_radius: f64) -> ScenarioConfig {
    let mut a = node(0, 0.0, 0.0, 1.0);
    a.initial_detector = true;
    let mut b = node(1, 10.0, 0.0, target_radius);
    b.is_gateway = true;
    ScenarioConfig::with_nodes(vec![a, b], Dimension::Two)
}

#[test]
fn monte_carlo_hit_rate_matches_cone_fraction() {
    for dim in [Dimension::Two, Dimension::Three] {
        let cfg = ScenarioConfig {
            dimension: dim,
            ..pair(1.0)
        };
        let src = &cfg.nodes[0];
        let target = [&cfg.nodes[1]];
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 200_000;
        let hits = (0..n)
            .filter(|_| {
                matches!(
                    grow_wire(src, &target, &mut rng, &cfg),
                    GrowthOutcome::Hit { .. }
                )
            })
            .count();
        let p = hit_probability(&src.position, &target[0].position, 1.0, dim, 30.0);
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        let rate = hits as f64 / n as f64;
        assert!((rate - p).abs() < 3.0 * sigma, "{dim:?}: {rate} vs {p}");
    }
}

#[test]
fn attempts_per_delivery_follow_the_geometric_law() {
    let cfg = pair(1.0);
    let p = hit_probability(
        &cfg.nodes[0].position,
        &cfg.nodes[1].position,
        1.0,
        Dimension::Two,
        cfg.wire_max_length_um,
    );
    let seeds = campaign_seeds(0, 20_000);
    let runs = run_campaign(&cfg, &seeds).unwrap();
    assert!(runs.iter().all(|m| m.delivered && m.wires_established == 1));
    let attempts: Vec<f64> = runs.iter().map(|m| m.wires_attempted as f64).collect();
    let n = attempts.len() as f64;
    let mean = attempts.iter().sum::<f64>() / n;
    // geometric on {1, 2, ...}: mean 1/p, variance (1-p)/p²
    let sigma = ((1.0 - p) / (p * p) / n).sqrt();
    assert!(
        (mean - 1.0 / p).abs() < 3.0 * sigma,
        "{mean} vs {}",
        1.0 / p
    );
}

#[test]
fn forced_hit_delivery_time_decomposes_exactly() {
    let cfg = ScenarioConfig {
        message_bits: 1000,
        per_hop_overhead_bits: 32,
        ..pair(12.0)
    };
    let m = run_simulation(&cfg).unwrap();
    // growth 10 µm at 1 µm/s, DC delay of a 10 µm filament 2.4 ms,
    // 1032 bits (tests/oracles/closed_forms.py), disassembly 10 s
    let expected = 10.0 + 2.4e-3 + 4.419_598_053_381_502_5e-5 + 10.0;
    assert!((m.delivery_time_s.unwrap() - expected).abs() < 1e-9);
    assert_eq!(m.hops_to_gateway, Some(1));
    assert_eq!((m.wires_attempted, m.wires_established), (1, 1));
    let hop = m.delivery_path[0];
    assert_eq!((hop.from, hop.to), (0, 1));
    assert_eq!(hop.retry_s, 0.0);
    assert_eq!(hop.wire_length_um, 10.0);
}

#[test]
fn delivery_path_accounts_for_every_second() {
    let (_, scenario) = common::load_scenario("configs/thirteen_node.toml");
    let runs = run_campaign(&scenario, &campaign_seeds(0, 200)).unwrap();
    let mut checked = 0;
    for m in runs.iter().filter(|m| m.delivered) {
        let mut clock = 0.0;
        for hop in &m.delivery_path {
            assert!((hop.start_s - clock).abs() < 1e-9 * (1.0 + clock));
            clock += hop.total_s();
        }
        let t = m.delivery_time_s.unwrap();
        assert!((clock - t).abs() < 1e-9 * t);
        assert_eq!(m.delivery_path.len() as u32, m.hops_to_gateway.unwrap());
        assert!(m.wires_attempted >= m.wires_established);
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn informed_fraction_timeline_is_monotone() {
    let (_, scenario) = common::load_scenario("configs/thirteen_node.toml");
    for m in run_campaign(&scenario, &campaign_seeds(100, 50)).unwrap() {
        let tl = &m.informed_fraction_timeline;
        assert_eq!(tl[0], (0.0, 1.0 / 13.0));
        assert!(tl.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 > w[0].1));
        assert!(tl.last().unwrap().1 <= 1.0);
    }
}

#[test]
fn campaigns_are_reproducible_and_seed_sensitive() {
    let (_, scenario) = common::load_scenario("configs/thirteen_node.toml");
    let seeds = campaign_seeds(7, 64);
    let a = run_campaign(&scenario, &seeds).unwrap();
    let b = run_campaign(&scenario, &seeds).unwrap();
    assert_eq!(a, b);
    let mut reversed = seeds.clone();
    reversed.reverse();
    assert_eq!(run_campaign(&scenario, &reversed).unwrap(), a);
    assert!(a
        .windows(2)
        .any(|w| w[0].wires_attempted != w[1].wires_attempted));
}

#[test]
fn unreachable_gateway_is_reported_not_raised() {
    let mut cfg = pair(1.0);
    cfg.nodes[1].position = [80.0, 0.0, 0.0];
    cfg.max_sim_time_s = 7_000.0;
    let m = run_simulation(&cfg).unwrap();
    assert!(!m.delivered);
    assert_eq!(m.delivery_time_s, None);
    // every 70 s cycle misses until the horizon
    assert_eq!(m.wires_attempted, 100);
    assert_eq!(m.wires_established, 0);
}

#[test]
fn scenario_without_gateway_never_delivers() {
    let mut cfg = pair(1.0);
    cfg.nodes[1].is_gateway = false;
    cfg.max_sim_time_s = 1e5;
    let m = run_simulation(&cfg).unwrap();
    assert!(!m.delivered);
    assert!(m.wires_attempted > 0);
}

#[test]
fn detector_that_is_a_gateway_delivers_at_once() {
    let mut cfg = pair(1.0);
    cfg.nodes[0].is_gateway = true;
    for m in run_campaign(&cfg, &campaign_seeds(0, 10)).unwrap() {
        assert_eq!(m.delivery_time_s, Some(0.0));
        assert_eq!(m.hops_to_gateway, Some(0));
        assert_eq!(m.wires_attempted, 0);
    }
}

#[test]
fn oversized_message_is_a_scenario_error() {
    let cfg = ScenarioConfig {
        message_bits: 5_000,
        ..pair(12.0)
    };
    assert!(matches!(run_simulation(&cfg), Err(ModelError::Scenario(_))));
    // the limit sits at the capacity reached by the stop time
    let p = cfg.channel.transport;
    assert!(matches!(
        transmission_time(1393, &p).unwrap(),
        Transmission::Delivered(_)
    ));
    assert!(matches!(
        transmission_time(1394, &p).unwrap(),
        Transmission::NotDeliverable { .. }
    ));
}

#[test]
fn epidemic_policy_may_bounce_back_to_the_sender() {
    // with the sender allowed back in, some runs end by hitting the already
    // informed detector
    let mut d = node(0, 0.0, 0.0, 1.0);
    d.initial_detector = true;
    let mid = node(1, 8.0, 0.0, 2.0);
    let mut g = node(2, 8.0, 9.0, 2.0);
    g.is_gateway = true;
    let mut cfg = ScenarioConfig::with_nodes(vec![d, mid, g], Dimension::Two);
    let seeds = campaign_seeds(0, 400);
    let excl = summarize(&run_campaign(&cfg, &seeds).unwrap());
    cfg.relay_policy = RelayPolicy::RandomNeighborEpidemic;
    let epi = summarize(&run_campaign(&cfg, &seeds).unwrap());
    assert!(epi.delivery_rate < excl.delivery_rate);
}

#[test]
fn chain_oracle_layout_is_valid() {
    let (_, scenario) = common::load_scenario("configs/thirteen_node.toml");
    assert_eq!(scenario.nodes.len(), 13);
    assert_eq!(scenario.relay_policy, RelayPolicy::RandomExcludingSource);
    assert!(common::cones_disjoint_2d(&scenario));
    let o = common::absorption_chain(&scenario);
    // the layout was picked for a delivery rate high enough to estimate hop
    // moments from 1000 seeds
    assert!(o.p_delivered > 0.2 && o.p_delivered < 0.35, "{o:?}");
    assert!(o.mean_hops > 3.0 && o.mean_hops < 8.0, "{o:?}");
}
