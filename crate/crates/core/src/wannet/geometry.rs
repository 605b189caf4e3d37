//! Random-direction wire growth and spherical (or disk) capture targets.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Spatial dimension of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Dimension {
    Two,
    Three,
}

impl TryFrom<u8> for Dimension {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            other => Err(format!("dimension must be 2 or 3, got {other}")),
        }
    }
}

impl From<Dimension> for u8 {
    fn from(d: Dimension) -> u8 {
        match d {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }
}

pub type Point = [f64; 3];

pub fn distance(a: &Point, b: &Point) -> f64 {
    let d = sub(b, a);
    dot(&d, &d).sqrt()
}

fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Number of uniform draws consumed by [`random_direction`], in either
/// dimension.
pub const DRAWS_PER_DIRECTION: usize = 2;

/// Uniform unit vector. Always consumes exactly two `f64` draws `u0, u1`:
/// in 2D the angle is `2π u0` and `u1` is discarded; in 3D `z = 2 u0 - 1`
/// and the azimuth is `2π u1`.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R, dim: Dimension) -> Point {
    let u0: f64 = rng.random();
    let u1: f64 = rng.random();
    match dim {
        Dimension::Two => {
            let theta = 2.0 * PI * u0;
            [theta.cos(), theta.sin(), 0.0]
        }
        Dimension::Three => {
            let z = 2.0 * u0 - 1.0;
            let s = (1.0 - z * z).max(0.0).sqrt();
            let phi = 2.0 * PI * u1;
            [s * phi.cos(), s * phi.sin(), z]
        }
    }
}

/// Distance along a ray from `origin` (unit `dir`) at which it enters the
/// ball of `radius` around `center`, if it does so within `max_len`.
///
/// An origin inside the ball is captured at distance zero.
pub fn capture_distance(
    origin: &Point,
    dir: &Point,
    center: &Point,
    radius: f64,
    max_len: f64,
) -> Option<f64> {
    let to_center = sub(center, origin);
    let dist_sq = dot(&to_center, &to_center);
    if dist_sq <= radius * radius {
        return Some(0.0);
    }
    let along = dot(&to_center, dir);
    if along <= 0.0 {
        return None;
    }
    let perp_sq = dist_sq - along * along;
    let r_sq = radius * radius;
    if perp_sq > r_sq {
        return None;
    }
    let entry = along - (r_sq - perp_sq).sqrt();
    (entry <= max_len).then_some(entry)
}

/// Probability that a uniformly random ray from `source` enters the ball of
/// `radius` around `target` within `max_len`.
///
/// With `D` the centre distance, the full capture cone has half-angle
/// `asin(r/D)`. When the tangent point lies beyond `max_len` the cone shrinks
/// to the angle at which the sphere surface is exactly `max_len` away.
/// Returns 1 when the source sits inside the target and 0 when even the
/// nearest surface point is out of reach.
pub fn hit_probability(
    source: &Point,
    target: &Point,
    radius: f64,
    dim: Dimension,
    max_len: f64,
) -> f64 {
    let d = distance(source, target);
    if d <= radius {
        return 1.0;
    }
    if d - radius > max_len {
        return 0.0;
    }
    let tangent_len = (d * d - radius * radius).sqrt();
    let half_angle = if tangent_len <= max_len {
        (radius / d).asin()
    } else {
        let cos =
            ((max_len * max_len + d * d - radius * radius) / (2.0 * max_len * d)).clamp(-1.0, 1.0);
        cos.acos()
    };
    match dim {
        Dimension::Two => half_angle / PI,
        Dimension::Three => (1.0 - half_angle.cos()) / 2.0,
    }
}
