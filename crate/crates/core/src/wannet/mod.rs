//! Wired ad hoc nanonetwork: random wire growth between nanomachines and
//! hop-by-hop spreading of a message towards a gateway.

pub mod geometry;
pub mod sim;

pub use geometry::{capture_distance, hit_probability, random_direction, Dimension, Point};
pub use sim::{
    campaign_seeds, grow_wire, resolve_growth, run_campaign, run_simulation, summarize,
    CampaignSummary, ChannelModel, GrowthOutcome, HopRecord, Node, NodeState, RelayPolicy,
    ScenarioConfig, SimMetrics,
};
