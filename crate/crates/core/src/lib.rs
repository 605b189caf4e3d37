//! Actin-filament nanowire channel model and wired ad hoc nanonetwork
//! simulator.
//!
//! The channel side turns monomer geometry into an effective series RLC
//! circuit ([`monomer_circuit`]), analyses its two-pole response
//! ([`frequency_response`]) and evaluates charge velocity and throughput
//! ([`charge_transport`]). The network side ([`wannet`]) simulates nanomachines
//! that grow wires in random directions and relay a message to a gateway.
//! [`cli`] and [`config`] back the `actinwire` binary.

pub mod charge_transport;
pub mod cli;
pub mod config;
pub mod error;
pub mod frequency_response;
pub mod monomer_circuit;
mod serde_opt;
pub mod wannet;

pub use charge_transport::{
    charge_capacity, eta_prime, max_throughput, transmission_time, velocity, Transmission,
    TransportParams,
};
pub use error::{ModelError, Result};
pub use frequency_response::{
    attenuation_db, compute_poles, group_delay_s, phase_deg, sweep, DelayMethod, PhaseMode, Poles,
    ResponsePoint,
};
pub use monomer_circuit::{
    build_filament, monomer_capacitance, monomer_inductance, monomer_resistance, CircuitMode,
    FilamentCircuit, PhysicalParams,
};
