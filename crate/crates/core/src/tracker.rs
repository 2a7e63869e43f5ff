//! Floating-point fiber tracking.
//!
//! Samples the n values of a map along a coordinate loop and follows each
//! branch numerically: consecutive fibers are matched by a minimum-cost
//! bijection under the torus max-metric, and the composite of all steps is
//! the loop's branch permutation. A margin test rejects samplings too
//! coarse to make the matching trustworthy. This is the only module in
//! the crate that computes with floats; everything else is exact.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::Error;
use crate::exactlin::RatVector;
use crate::monodromy::{orbit_partition, Permutation};
use crate::nvmaps::CompositeMap;

/// Anything that can produce the n-point value fiber over a torus point.
pub trait FiberSampler {
    /// Torus dimension q.
    fn dim(&self) -> usize;
    /// Fiber cardinality n.
    fn fiber_size(&self) -> usize;
    /// The fiber over t, in a fixed branch order; coordinates in [0,1).
    fn fiber(&self, t: &[f64]) -> Vec<Vec<f64>>;
}

/// Samples a composite map by exact evaluation at the float point read
/// back as a rational, so fiber order is the map's lift order.
pub struct MapSampler<'a> {
    map: &'a CompositeMap,
}

impl<'a> MapSampler<'a> {
    pub fn new(map: &'a CompositeMap) -> Self {
        MapSampler { map }
    }
}

impl FiberSampler for MapSampler<'_> {
    fn dim(&self) -> usize {
        self.map.q()
    }

    fn fiber_size(&self) -> usize {
        self.map.n()
    }

    fn fiber(&self, t: &[f64]) -> Vec<Vec<f64>> {
        let point = RatVector::new(
            t.iter()
                .map(|&x| BigRational::from_float(x).expect("sample point must be finite"))
                .collect(),
        );
        self.map
            .evaluate_lifts(&point)
            .into_iter()
            .map(|v| v.iter().map(|x| x.to_f64().unwrap()).collect())
            .collect()
    }
}

/// Sampling resolution and how much slack the matching margin gets.
#[derive(Debug, Clone, Copy)]
pub struct TrackerConfig {
    /// Fibers per loop, at parameters step/samples for step = 0..=samples.
    pub samples_per_loop: usize,
    /// A matching step is accepted only if every branch moved less than
    /// this fraction of the fiber's minimum pairwise separation.
    pub margin_factor: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            samples_per_loop: 256,
            margin_factor: 0.5,
        }
    }
}

/// Distance on the circle R/Z.
fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Max-metric distance on the torus.
fn torus_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| circle_dist(*a, *b))
        .fold(0.0, f64::max)
}

/// Minimum pairwise distance within a fiber; infinite for fewer than two
/// points.
fn min_separation(fiber: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..fiber.len() {
        for j in i + 1..fiber.len() {
            best = best.min(torus_dist(&fiber[i], &fiber[j]));
        }
    }
    best
}

/// Minimum-cost perfect matching on a square cost matrix (Hungarian
/// algorithm with potentials). Returns the column assigned to each row.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if row_of[j] > 0 {
            assignment[row_of[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Follow branches through a sequence of fibers (first and last over the
/// same point for a loop) and return the end-to-end permutation of
/// initial fiber indices. Fails with `ResolutionTooCoarse` at the first
/// step whose best matching moves some branch at least `margin_factor`
/// times the fiber separation.
pub fn track_fiber_sequence(
    fibers: &[Vec<Vec<f64>>],
    config: &TrackerConfig,
) -> Result<Permutation, Error> {
    assert!(fibers.len() >= 2, "need at least two fibers to track");
    let n = fibers[0].len();
    for fiber in fibers {
        if fiber.len() != n {
            return Err(Error::FiberCardinality {
                expected: n,
                found: fiber.len(),
            });
        }
    }
    let mut images: Vec<usize> = (0..n).collect();
    for step in 1..fibers.len() {
        let prev = &fibers[step - 1];
        let next = &fibers[step];
        let cost: Vec<Vec<f64>> = prev
            .iter()
            .map(|p| next.iter().map(|q| torus_dist(p, q)).collect())
            .collect();
        let assignment = hungarian(&cost);
        let moved = (0..n)
            .map(|i| cost[i][assignment[i]])
            .fold(0.0, f64::max);
        let limit = config.margin_factor * min_separation(next);
        if !(moved < limit) {
            return Err(Error::ResolutionTooCoarse {
                step,
                cost: moved,
                limit,
            });
        }
        for image in images.iter_mut() {
            *image = assignment[*image];
        }
    }
    Ok(Permutation::from_images(images).expect("matchings are bijections"))
}

/// Fiber base point: the origin unless two fiber points there share a
/// coordinate, in which case the base moves to (1/(7q), …, 1/(7q)) to
/// break the tie.
fn choose_base<S: FiberSampler>(sampler: &S) -> Vec<f64> {
    let q = sampler.dim();
    let origin = vec![0.0; q];
    let fiber = sampler.fiber(&origin);
    for i in 0..fiber.len() {
        for j in i + 1..fiber.len() {
            for c in 0..q {
                if circle_dist(fiber[i][c], fiber[j][c]) < 1e-12 {
                    return vec![1.0 / (7.0 * q as f64); q];
                }
            }
        }
    }
    origin
}

fn sample_loop<S: FiberSampler>(
    sampler: &S,
    base: &[f64],
    axis: usize,
    samples: usize,
) -> Result<Vec<Vec<Vec<f64>>>, Error> {
    let n = sampler.fiber_size();
    let mut fibers = Vec::with_capacity(samples + 1);
    for step in 0..=samples {
        let mut t = base.to_vec();
        t[axis] = (t[axis] + step as f64 / samples as f64).rem_euclid(1.0);
        let fiber = sampler.fiber(&t);
        if fiber.len() != n {
            return Err(Error::FiberCardinality {
                expected: n,
                found: fiber.len(),
            });
        }
        fibers.push(fiber);
    }
    Ok(fibers)
}

/// Track the fiber once around the `axis`-th coordinate loop and return
/// the branch permutation, indexed by the sampler's fiber order.
pub fn track_loop<S: FiberSampler>(
    sampler: &S,
    axis: usize,
    config: &TrackerConfig,
) -> Result<Permutation, Error> {
    assert!(axis < sampler.dim(), "loop axis out of range");
    assert!(config.samples_per_loop >= 2, "need at least two samples");
    let base = choose_base(sampler);
    let fibers = sample_loop(sampler, &base, axis, config.samples_per_loop)?;
    track_fiber_sequence(&fibers, config)
}

/// Numerically recovered monodromy: the q loop permutations and their
/// orbits on fiber indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalMonodromy {
    generators: Vec<Permutation>,
    orbits: Vec<Vec<usize>>,
}

impl EmpiricalMonodromy {
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn orbit_partition(&self) -> &[Vec<usize>] {
        &self.orbits
    }
}

/// Track all q coordinate loops and partition the fiber indices into
/// orbits of the recovered permutations.
pub fn empirical_partition<S: FiberSampler>(
    sampler: &S,
    config: &TrackerConfig,
) -> Result<EmpiricalMonodromy, Error> {
    let mut generators = Vec::with_capacity(sampler.dim());
    for axis in 0..sampler.dim() {
        generators.push(track_loop(sampler, axis, config)?);
    }
    let orbits = orbit_partition(sampler.fiber_size(), &generators);
    Ok(EmpiricalMonodromy { generators, orbits })
}
