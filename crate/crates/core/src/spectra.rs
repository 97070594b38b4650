//! Helpers for comparing finite point sets in the complex plane.

use crate::scalar::{principal_arg, Real, C};

/// Hausdorff distance between two finite sets; 0 for two empty sets and
/// infinite when exactly one is empty.
pub fn hausdorff_distance<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return T::zero(),
        (true, false) | (false, true) => return T::infinity(),
        _ => {}
    }
    directed(a, b).max(directed(b, a))
}

fn directed<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    a.iter()
        .map(|x| {
            b.iter()
                .map(|y| (*x - *y).norm())
                .fold(T::infinity(), T::min)
        })
        .fold(T::zero(), T::max)
}

/// Signed angular distance from `arg z` to `center`, folded into (−π, π].
pub fn angle_from<T: Real>(z: C<T>, center: T) -> T {
    let two_pi = T::TAU();
    let mut d = principal_arg(z) - center;
    while d > T::PI() {
        d -= two_pi;
    }
    while d <= -T::PI() {
        d += two_pi;
    }
    d
}

pub fn max_abs_arg<T: Real>(points: &[C<T>]) -> T {
    points
        .iter()
        .map(|z| principal_arg(*z).abs())
        .fold(T::zero(), T::max)
}

/// Points grouped by nearest of three sector centers.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorPartition<T> {
    pub groups: [Vec<C<T>>; 3],
    /// Every point lies in exactly one of the closed sectors (within tolerance).
    pub exclusive: bool,
    /// Largest angular distance of a point beyond its assigned sector's half-angle.
    pub worst_excess: T,
}

/// Assigns each point to the nearest of `centers`, then checks membership in
/// the closed sector of half-angle `half_angle` around that center.
pub fn partition_sectors<T: Real>(
    points: &[C<T>],
    centers: [T; 3],
    half_angle: T,
    tol: T,
) -> SectorPartition<T> {
    let mut groups: [Vec<C<T>>; 3] = Default::default();
    let mut exclusive = true;
    let mut worst_excess = T::neg_infinity();
    for &z in points {
        let dist: Vec<T> = centers.iter().map(|&c| angle_from(z, c).abs()).collect();
        let k = (0..3)
            .min_by(|&i, &j| {
                dist[i]
                    .partial_cmp(&dist[j])
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        groups[k].push(z);
        worst_excess = worst_excess.max(dist[k] - half_angle);
        let hits = dist.iter().filter(|&&d| d <= half_angle + tol).count();
        if z.norm() > T::zero() && hits != 1 {
            exclusive = false;
        }
    }
    if !worst_excess.is_finite() {
        worst_excess = T::zero();
    }
    SectorPartition {
        groups,
        exclusive,
        worst_excess,
    }
}
