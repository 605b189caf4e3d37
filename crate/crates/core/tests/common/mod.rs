//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use actinwire::config::Config;
use actinwire::wannet::{hit_probability, Dimension, ScenarioConfig};
use num_bigint::BigInt;

pub fn repo_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

pub fn load_scenario(rel: &str) -> (Config, ScenarioConfig) {
    let none: &[&str] = &[];
    let cfg = Config::load(Some(&repo_path(rel)), none).expect("bundled config loads");
    let scenario = cfg.scenario_config();
    (cfg, scenario)
}

// ---------------------------------------------------------------------------
// Arbitrary-precision quadratic roots
// ---------------------------------------------------------------------------

/// Fixed-point fraction bits. Inputs are doubles, so every product of two of
/// them is exact well inside this budget.
const FRAC_BITS: i64 = 640;

/// `x * 2^FRAC_BITS`, exact for any normal double with exponent above
/// `-FRAC_BITS`.
fn to_fixed(x: f64) -> BigInt {
    assert!(x.is_finite() && x > 0.0);
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    assert!(exp > 0, "subnormal input");
    let mantissa = BigInt::from((bits & ((1u64 << 52) - 1)) | (1u64 << 52));
    let shift = exp - 1075 + FRAC_BITS;
    assert!(shift >= 0, "input too small for the fixed-point budget");
    mantissa << shift as usize
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> FRAC_BITS as usize
}

fn from_fixed(v: &BigInt) -> f64 {
    // decimal round trip keeps the conversion correctly rounded
    let scaled: f64 = v.to_string().parse().expect("integer string");
    scaled / 2f64.powi(FRAC_BITS as i32)
}

/// Small-magnitude root of `LC s² + RC s + 1 = 0`, evaluated with the
/// textbook formula `(-RC + sqrt((RC)² - 4LC)) / (2LC)` in ~190-digit fixed
/// point. Exact inputs, so the cancellation costs nothing here.
pub fn small_pole_exact(r: f64, l: f64, c: f64) -> f64 {
    let (r, l, c) = (to_fixed(r), to_fixed(l), to_fixed(c));
    let a = mul(&l, &c);
    let b = mul(&r, &c);
    let disc = mul(&b, &b) - (&a << 2usize);
    assert!(disc > BigInt::from(0), "not overdamped");
    let root = (disc << FRAC_BITS as usize).sqrt();
    let num = root - &b;
    let p2 = (num << FRAC_BITS as usize) / (&a << 1usize);
    from_fixed(&p2)
}

/// The same formula in plain doubles.
pub fn small_pole_naive(r: f64, l: f64, c: f64) -> f64 {
    let a = l * c;
    let b = r * c;
    (-b + (b * b - 4.0 * a).sqrt()) / (2.0 * a)
}

/// Decimal digits lost relative to double precision.
pub fn digits_lost(approx: f64, exact: f64) -> f64 {
    let rel = ((approx - exact) / exact).abs();
    if rel == 0.0 {
        0.0
    } else {
        (rel / f64::EPSILON).log10()
    }
}

// ---------------------------------------------------------------------------
// Hop-chain absorption oracle
// ---------------------------------------------------------------------------

/// `true` when, from every node, the capture cones of all other nodes are
/// pairwise disjoint (2D only). Under that condition the first capture of a
/// growth attempt is decided by which single cone the direction falls in,
/// and the hop sequence is an exact Markov chain.
pub fn cones_disjoint_2d(s: &ScenarioConfig) -> bool {
    assert_eq!(s.dimension, Dimension::Two);
    let pi = std::f64::consts::PI;
    for src in &s.nodes {
        let mut cones = Vec::new();
        for t in s.nodes.iter().filter(|t| t.id != src.id) {
            let p = hit_probability(
                &src.position,
                &t.position,
                t.radius_um,
                s.dimension,
                s.wire_max_length_um,
            );
            if p > 0.0 {
                let dy = t.position[1] - src.position[1];
                let dx = t.position[0] - src.position[0];
                // in 2D the probability is the half-angle over π
                cones.push((dy.atan2(dx), p * pi));
            }
        }
        for (i, a) in cones.iter().enumerate() {
            for b in &cones[i + 1..] {
                let gap = (a.0 - b.0 + pi).rem_euclid(2.0 * pi) - pi;
                if gap.abs() <= a.1 + b.1 {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy)]
pub struct ChainOracle {
    pub p_delivered: f64,
    /// E[hops | delivered].
    pub mean_hops: f64,
    /// Var[hops | delivered].
    pub var_hops: f64,
}

/// Exact delivery probability and hop-count moments for a single detector
/// under the relay-once, exclude-the-sender rule.
///
/// From node `cur` (reached from `prev`) each attempt captures candidate `j`
/// with probability `q_j`, so the next node is `j` with `q_j / Σq`. Landing
/// on an already informed node ends the chain undelivered.
pub fn absorption_chain(s: &ScenarioConfig) -> ChainOracle {
    let n = s.nodes.len();
    assert!(n <= 64);
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        0.0
                    } else {
                        let t = &s.nodes[j];
                        hit_probability(
                            &s.nodes[i].position,
                            &t.position,
                            t.radius_um,
                            s.dimension,
                            s.wire_max_length_um,
                        )
                    }
                })
                .collect()
        })
        .collect();
    let detector = s
        .nodes
        .iter()
        .position(|n| n.initial_detector)
        .expect("one detector");
    assert_eq!(s.nodes.iter().filter(|n| n.initial_detector).count(), 1);

    // memo value: (P(deliver), E[h·1_deliver], E[h²·1_deliver]) counting
    // hops from the current node
    type Memo = HashMap<(u64, usize, usize), (f64, f64, f64)>;
    fn go(
        mask: u64,
        cur: usize,
        prev: usize,
        q: &[Vec<f64>],
        gw: &[bool],
        memo: &mut Memo,
    ) -> (f64, f64, f64) {
        if let Some(&v) = memo.get(&(mask, cur, prev)) {
            return v;
        }
        let n = q.len();
        let cands: Vec<usize> = (0..n)
            .filter(|&j| j != cur && j != prev && q[cur][j] > 0.0)
            .collect();
        let total: f64 = cands.iter().map(|&j| q[cur][j]).sum();
        let mut out = (0.0, 0.0, 0.0);
        for &j in &cands {
            let w = q[cur][j] / total;
            if mask >> j & 1 == 1 {
                continue;
            }
            if gw[j] {
                out.0 += w;
                out.1 += w;
                out.2 += w;
                continue;
            }
            let (p, m1, m2) = go(mask | 1 << j, j, cur, q, gw, memo);
            // one more hop: E[(h+1)²] = E[h²] + 2E[h] + P
            out.0 += w * p;
            out.1 += w * (m1 + p);
            out.2 += w * (m2 + 2.0 * m1 + p);
        }
        memo.insert((mask, cur, prev), out);
        out
    }

    let gw: Vec<bool> = s.nodes.iter().map(|n| n.is_gateway).collect();
    let mut memo = Memo::new();
    let (p, m1, m2) = go(1 << detector, detector, usize::MAX, &q, &gw, &mut memo);
    let mean = m1 / p;
    ChainOracle {
        p_delivered: p,
        mean_hops: mean,
        var_hops: m2 / p - mean * mean,
    }
}
