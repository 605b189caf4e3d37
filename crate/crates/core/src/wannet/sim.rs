//! Event-driven spreading of one message through a wired ad hoc nanonetwork.
//!
//! A node that is informed for the first time grows wires in random
//! directions until one is captured by a neighbour, then sends the message
//! over it. Each hop costs the missed attempts, the wire growth, the channel
//! group delay, the transmission time and the wire disassembly. A node that
//! was already informed drops a repeated message, so every node relays at
//! most once. The run ends when a gateway is informed, no event is left, or
//! `max_sim_time_s` is exceeded.
//!
//! RNG: one `ChaCha8Rng` seeded from `rng_seed`; each growth attempt draws
//! exactly
//! [`DRAWS_PER_DIRECTION`](super::geometry::DRAWS_PER_DIRECTION) uniforms, and relays are resolved in event
//! order (time, then insertion sequence).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charge_transport::{transmission_time, Transmission, TransportParams};
use crate::error::{ModelError, Result};
use crate::frequency_response::dc_group_delay_s;
use crate::monomer_circuit::{build_filament, CircuitMode, PhysicalParams, DEFAULT_N_EFF_PER_UM};

use super::geometry::{
    capture_distance, distance, hit_probability, random_direction, Dimension, Point,
};

/// Upper bound on wire length; filaments stay within a few tens of µm.
pub const MAX_WIRE_LENGTH_UM: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeState {
    Idle,
    Growing,
    Linked,
    Informed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: u32,
    pub position: Point,
    pub radius_um: f64,
    pub is_gateway: bool,
    pub initial_detector: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelayPolicy {
    /// Any neighbour, including the node the message came from.
    RandomNeighborEpidemic,
    /// Any neighbour except the node the message came from.
    #[default]
    RandomExcludingSource,
}

/// Channel parameters used to price each hop.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    pub physical: PhysicalParams,
    pub circuit_mode: CircuitMode,
    pub n_eff_per_um: f64,
    pub transport: TransportParams,
    /// Fixed per-hop channel delay replacing the DC group delay.
    pub delay_override_s: Option<f64>,
}

impl Default for ChannelModel {
    fn default() -> Self {
        Self {
            physical: PhysicalParams::default(),
            circuit_mode: CircuitMode::Paper,
            n_eff_per_um: DEFAULT_N_EFF_PER_UM,
            transport: TransportParams::default(),
            delay_override_s: None,
        }
    }
}

impl ChannelModel {
    /// DC group delay of a wire of `length_um`, or the override.
    pub fn hop_delay_s(&self, length_um: f64) -> Result<f64> {
        match self.delay_override_s {
            Some(d) => Ok(d),
            None => {
                let c = build_filament(
                    &self.physical,
                    length_um,
                    self.circuit_mode,
                    self.n_eff_per_um,
                )?;
                dc_group_delay_s(&c)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub nodes: Vec<Node>,
    pub dimension: Dimension,
    pub wire_growth_um_s: f64,
    pub wire_max_length_um: f64,
    pub miss_timeout_s: f64,
    pub disassembly_s: f64,
    pub message_bits: u64,
    pub per_hop_overhead_bits: u64,
    pub relay_policy: RelayPolicy,
    pub rng_seed: u64,
    pub max_sim_time_s: f64,
    pub channel: ChannelModel,
}

impl ScenarioConfig {
    /// Scenario with default timing and channel parameters.
    pub fn with_nodes(nodes: Vec<Node>, dimension: Dimension) -> Self {
        Self {
            nodes,
            dimension,
            wire_growth_um_s: 1.0,
            wire_max_length_um: 30.0,
            miss_timeout_s: 60.0,
            disassembly_s: 10.0,
            message_bits: 256,
            per_hop_overhead_bits: 32,
            relay_policy: RelayPolicy::default(),
            rng_seed: 0,
            max_sim_time_s: 1e7,
            channel: ChannelModel::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(ModelError::Scenario(msg));
        if self.nodes.is_empty() {
            return bad("no nodes".into());
        }
        let mut ids: Vec<u32> = self.nodes.iter().map(|n| n.id).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return bad(format!("duplicate node id {}", w[0]));
        }
        for n in &self.nodes {
            if !(n.radius_um > 0.0 && n.radius_um.is_finite()) {
                return bad(format!("node {} radius_um must be > 0", n.id));
            }
            if n.position.iter().any(|c| !c.is_finite()) {
                return bad(format!("node {} has a non-finite position", n.id));
            }
            if self.dimension == Dimension::Two && n.position[2] != 0.0 {
                return bad(format!("node {} has z != 0 in a 2D scenario", n.id));
            }
        }
        if !self.nodes.iter().any(|n| n.initial_detector) {
            return bad("no initial detector".into());
        }
        let positive = [
            ("wire_growth_um_s", self.wire_growth_um_s),
            ("wire_max_length_um", self.wire_max_length_um),
            ("miss_timeout_s", self.miss_timeout_s),
            ("disassembly_s", self.disassembly_s),
            ("max_sim_time_s", self.max_sim_time_s),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be > 0, got {v}"));
            }
        }
        if self.wire_max_length_um > MAX_WIRE_LENGTH_UM {
            return bad(format!(
                "wire_max_length_um {} exceeds {MAX_WIRE_LENGTH_UM}",
                self.wire_max_length_um
            ));
        }
        if self.message_bits == 0 {
            return bad("message_bits must be >= 1".into());
        }
        if let Some(d) = self.channel.delay_override_s {
            if !(d >= 0.0 && d.is_finite()) {
                return bad(format!("channel delay override must be >= 0, got {d}"));
            }
        }
        self.channel.transport.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthOutcome {
    /// Wire captured by candidate `target` (index into the candidate list).
    Hit {
        target: usize,
        wire_length_um: f64,
        elapsed_s: f64,
    },
    Miss {
        elapsed_s: f64,
    },
}

/// Resolves one growth attempt along a fixed direction: the candidate whose
/// capture ball the ray enters first wins. The realised wire spans the
/// centre-to-centre distance and grows at `wire_growth_um_s`.
pub fn resolve_growth(
    source: &Node,
    candidates: &[&Node],
    dir: &Point,
    cfg: &ScenarioConfig,
) -> GrowthOutcome {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in candidates.iter().enumerate() {
        if let Some(entry) = capture_distance(
            &source.position,
            dir,
            &c.position,
            c.radius_um,
            cfg.wire_max_length_um,
        ) {
            if best.is_none_or(|(_, e)| entry < e) {
                best = Some((i, entry));
            }
        }
    }
    match best {
        Some((target, _)) => {
            let wire_length_um = distance(&source.position, &candidates[target].position);
            GrowthOutcome::Hit {
                target,
                wire_length_um,
                elapsed_s: wire_length_um / cfg.wire_growth_um_s,
            }
        }
        None => GrowthOutcome::Miss {
            elapsed_s: cfg.miss_timeout_s + cfg.disassembly_s,
        },
    }
}

/// One growth attempt in a uniformly random direction.
pub fn grow_wire(
    source: &Node,
    candidates: &[&Node],
    rng: &mut ChaCha8Rng,
    cfg: &ScenarioConfig,
) -> GrowthOutcome {
    let dir = random_direction(rng, cfg.dimension);
    resolve_growth(source, candidates, &dir, cfg)
}

/// Time components of one successful hop; `total_s` is their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopRecord {
    pub from: u32,
    pub to: u32,
    pub start_s: f64,
    pub wire_length_um: f64,
    /// Time spent on missed attempts before the capturing one.
    pub retry_s: f64,
    pub growth_s: f64,
    pub channel_delay_s: f64,
    pub transmission_s: f64,
    pub disassembly_s: f64,
}

impl HopRecord {
    pub fn total_s(&self) -> f64 {
        self.retry_s
            + self.growth_s
            + self.channel_delay_s
            + self.transmission_s
            + self.disassembly_s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimMetrics {
    pub seed: u64,
    pub delivered: bool,
    pub delivery_time_s: Option<f64>,
    pub hops_to_gateway: Option<u32>,
    pub wires_attempted: u64,
    pub wires_established: u64,
    pub informed_fraction_timeline: Vec<(f64, f64)>,
    /// Hops that informed a node, in the order they happened.
    pub informing_hops: Vec<HopRecord>,
    /// Hops from a detector to the gateway, when delivered.
    pub delivery_path: Vec<HopRecord>,
    pub node_states: Vec<NodeState>,
}

#[derive(Debug, Clone, Copy)]
struct Arrival {
    at: f64,
    seq: u64,
    hop: HopRecord,
    from_idx: usize,
    to_idx: usize,
}

impl PartialEq for Arrival {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Arrival {}

impl PartialOrd for Arrival {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Arrival {
    // min-heap on (time, sequence)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .at
            .total_cmp(&self.at)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Run<'a> {
    cfg: &'a ScenarioConfig,
    rng: ChaCha8Rng,
    transmission_s: f64,
    queue: BinaryHeap<Arrival>,
    seq: u64,
    attempted: u64,
    established: u64,
}

impl Run<'_> {
    fn candidates(&self, source: usize, parent: Option<usize>) -> Vec<usize> {
        (0..self.cfg.nodes.len())
            .filter(|&i| i != source)
            .filter(|&i| match self.cfg.relay_policy {
                RelayPolicy::RandomExcludingSource => Some(i) != parent,
                RelayPolicy::RandomNeighborEpidemic => true,
            })
            .collect()
    }

    /// Grows wires from `source` until one is captured, and queues the arrival.
    fn relay(&mut self, source: usize, parent: Option<usize>, start: f64) -> Result<()> {
        let cfg = self.cfg;
        let node = &cfg.nodes[source];
        let idx = self.candidates(source, parent);
        let candidates: Vec<&Node> = idx.iter().map(|&i| &cfg.nodes[i]).collect();
        let cycle = cfg.miss_timeout_s + cfg.disassembly_s;

        let reachable = candidates.iter().any(|c| {
            hit_probability(
                &node.position,
                &c.position,
                c.radius_um,
                cfg.dimension,
                cfg.wire_max_length_um,
            ) > 0.0
        });
        if !reachable {
            // every attempt misses until the time limit; no draws are consumed
            let remaining = (cfg.max_sim_time_s - start).max(0.0);
            self.attempted += (remaining / cycle).ceil().max(1.0) as u64;
            return Ok(());
        }

        let mut retry_s = 0.0;
        loop {
            if start + retry_s > cfg.max_sim_time_s {
                return Ok(());
            }
            self.attempted += 1;
            match grow_wire(node, &candidates, &mut self.rng, cfg) {
                GrowthOutcome::Miss { elapsed_s } => retry_s += elapsed_s,
                GrowthOutcome::Hit {
                    target,
                    wire_length_um,
                    elapsed_s,
                } => {
                    self.established += 1;
                    let to_idx = idx[target];
                    let hop = HopRecord {
                        from: node.id,
                        to: cfg.nodes[to_idx].id,
                        start_s: start,
                        wire_length_um,
                        retry_s,
                        growth_s: elapsed_s,
                        channel_delay_s: cfg.channel.hop_delay_s(wire_length_um)?,
                        transmission_s: self.transmission_s,
                        disassembly_s: cfg.disassembly_s,
                    };
                    self.seq += 1;
                    self.queue.push(Arrival {
                        at: start + hop.total_s(),
                        seq: self.seq,
                        hop,
                        from_idx: source,
                        to_idx,
                    });
                    return Ok(());
                }
            }
        }
    }
}

/// Runs one seeded simulation of the scenario.
pub fn run_simulation(cfg: &ScenarioConfig) -> Result<SimMetrics> {
    cfg.validate()?;
    let bits = cfg.message_bits + cfg.per_hop_overhead_bits;
    let transmission_s = match transmission_time(bits, &cfg.channel.transport)? {
        Transmission::Delivered(t) => t,
        Transmission::NotDeliverable { capacity_bits } => {
            return Err(ModelError::Scenario(format!(
                "message of {bits} bits exceeds the {capacity_bits:.1}-bit channel capacity before the stop time"
            )))
        }
    };

    let n = cfg.nodes.len();
    let mut states = vec![NodeState::Idle; n];
    let mut depth = vec![0u32; n];
    let mut via: Vec<Option<HopRecord>> = vec![None; n];
    let mut informed = 0usize;
    let mut timeline = Vec::new();

    let detectors: Vec<usize> = (0..n).filter(|&i| cfg.nodes[i].initial_detector).collect();
    for &d in &detectors {
        states[d] = NodeState::Informed;
        informed += 1;
    }
    timeline.push((0.0, informed as f64 / n as f64));

    let mut metrics = SimMetrics {
        seed: cfg.rng_seed,
        delivered: false,
        delivery_time_s: None,
        hops_to_gateway: None,
        wires_attempted: 0,
        wires_established: 0,
        informed_fraction_timeline: Vec::new(),
        informing_hops: Vec::new(),
        delivery_path: Vec::new(),
        node_states: Vec::new(),
    };

    let mut delivered_at: Option<usize> =
        detectors.iter().copied().find(|&d| cfg.nodes[d].is_gateway);
    let mut run = Run {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed),
        transmission_s,
        queue: BinaryHeap::new(),
        seq: 0,
        attempted: 0,
        established: 0,
    };

    if let Some(g) = delivered_at {
        metrics.delivery_time_s = Some(0.0);
        metrics.hops_to_gateway = Some(depth[g]);
    } else {
        for &d in &detectors {
            run.relay(d, None, 0.0)?;
        }
    }

    while delivered_at.is_none() {
        let Some(arrival) = run.queue.pop() else {
            break;
        };
        if arrival.at > cfg.max_sim_time_s {
            break;
        }
        let to = arrival.to_idx;
        states[arrival.from_idx] = NodeState::Linked;
        if states[to] != NodeState::Idle {
            continue;
        }
        states[to] = NodeState::Informed;
        depth[to] = depth[arrival.from_idx] + 1;
        via[to] = Some(arrival.hop);
        metrics.informing_hops.push(arrival.hop);
        informed += 1;
        timeline.push((arrival.at, informed as f64 / n as f64));
        if cfg.nodes[to].is_gateway {
            delivered_at = Some(to);
            metrics.delivery_time_s = Some(arrival.at);
            metrics.hops_to_gateway = Some(depth[to]);
            break;
        }
        states[to] = NodeState::Growing;
        run.relay(to, Some(arrival.from_idx), arrival.at)?;
    }

    if let Some(g) = delivered_at {
        metrics.delivered = true;
        let index_of = |id: u32| cfg.nodes.iter().position(|n| n.id == id);
        let mut path = Vec::new();
        let mut cur = g;
        while let Some(hop) = via[cur] {
            path.push(hop);
            cur = index_of(hop.from).expect("hop source is a scenario node");
        }
        path.reverse();
        metrics.delivery_path = path;
    }
    metrics.wires_attempted = run.attempted;
    metrics.wires_established = run.established;
    metrics.informed_fraction_timeline = timeline;
    metrics.node_states = states;
    Ok(metrics)
}

/// Seeds `base, base+1, …` for a campaign of `n` runs.
pub fn campaign_seeds(base: u64, n: u64) -> Vec<u64> {
    (0..n).map(|i| base.wrapping_add(i)).collect()
}

/// Runs the scenario once per seed, in parallel, returning results sorted by
/// seed.
pub fn run_campaign(cfg: &ScenarioConfig, seeds: &[u64]) -> Result<Vec<SimMetrics>> {
    cfg.validate()?;
    let mut sorted = seeds.to_vec();
    sorted.sort_unstable();
    sorted
        .par_iter()
        .map(|&seed| {
            let mut c = cfg.clone();
            c.rng_seed = seed;
            run_simulation(&c)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CampaignSummary {
    pub runs: usize,
    pub delivered: usize,
    pub delivery_rate: f64,
    pub mean_delivery_time_s: f64,
    pub std_delivery_time_s: f64,
    pub mean_hops: f64,
    pub std_hops: f64,
}

/// Mean and sample standard deviation over delivered runs (NaN when fewer
/// than one or two runs were delivered).
pub fn summarize(results: &[SimMetrics]) -> CampaignSummary {
    let times: Vec<f64> = results.iter().filter_map(|m| m.delivery_time_s).collect();
    let hops: Vec<f64> = results
        .iter()
        .filter_map(|m| m.hops_to_gateway.map(f64::from))
        .collect();
    let (mean_t, std_t) = mean_std(&times);
    let (mean_h, std_h) = mean_std(&hops);
    CampaignSummary {
        runs: results.len(),
        delivered: times.len(),
        delivery_rate: if results.is_empty() {
            f64::NAN
        } else {
            times.len() as f64 / results.len() as f64
        },
        mean_delivery_time_s: mean_t,
        std_delivery_time_s: std_t,
        mean_hops: mean_h,
        std_hops: std_h,
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
