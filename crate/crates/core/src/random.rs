//! Seeded random instances for tests and the `random` subcommand.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::Instance;
use crate::rational::int;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub machines: usize,
    pub jobs: usize,
    /// Inclusive integer range for finite processing times.
    pub p_min: i64,
    pub p_max: i64,
    /// Probability that a cell is finite.
    pub density: f64,
    /// Cap eligibility at two machines per job.
    pub balancing: bool,
    /// When set, times are drawn from `[γ, 3γ]` instead of `p_min..=p_max`.
    pub gamma_band: Option<i64>,
    /// When nonempty, times are drawn from this set instead.
    pub values: Vec<i64>,
}

impl RandomSpec {
    pub fn new(machines: usize, jobs: usize, p_min: i64, p_max: i64) -> Self {
        RandomSpec {
            machines,
            jobs,
            p_min,
            p_max,
            density: 1.0,
            balancing: false,
            gamma_band: None,
            values: Vec::new(),
        }
    }

    pub fn density(mut self, d: f64) -> Self {
        self.density = d;
        self
    }

    pub fn balancing(mut self) -> Self {
        self.balancing = true;
        self
    }

    pub fn gamma_band(mut self, gamma: i64) -> Self {
        self.gamma_band = Some(gamma);
        self
    }

    pub fn values(mut self, values: &[i64]) -> Self {
        self.values = values.to_vec();
        self
    }
}

/// Draws an instance; identical `(spec, seed)` give identical instances.
///
/// A job row that comes out with no finite entry is resampled.
pub fn random_instance(spec: &RandomSpec, seed: u64) -> Instance {
    assert!(spec.machines > 0 && spec.jobs > 0, "empty instance");
    assert!(spec.density > 0.0 && spec.density <= 1.0, "density must lie in (0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = match spec.gamma_band {
        Some(g) => (g, 3 * g),
        None => (spec.p_min, spec.p_max),
    };
    let draw_p = |rng: &mut ChaCha8Rng| {
        if spec.values.is_empty() {
            rng.gen_range(lo..=hi)
        } else {
            spec.values[rng.gen_range(0..spec.values.len())]
        }
    };
    let rows = (0..spec.jobs)
        .map(|_| loop {
            let mut machines: Vec<usize> = (0..spec.machines)
                .filter(|_| rng.gen_bool(spec.density))
                .collect();
            if spec.balancing && machines.len() > 2 {
                let keep = sample(&mut rng, machines.len(), 2);
                let mut kept: Vec<usize> = keep.iter().map(|k| machines[k]).collect();
                kept.sort_unstable();
                machines = kept;
            }
            if !machines.is_empty() {
                break machines
                    .into_iter()
                    .map(|i| (i, int(draw_p(&mut rng))))
                    .collect::<Vec<_>>();
            }
        })
        .collect();
    Instance::new(spec.machines, rows).expect("generated rows are valid")
}
