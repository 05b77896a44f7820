//! Stochastic hill climbing with quake perturbations.
//!
//! Each iteration is either a *global* pass or a *quake*. A global pass
//! probes all `n` single flips starting at a random offset and keeps the
//! first one whose fitness is strictly below the reference value (see
//! [`Acceptance`]); rejected probes are undone immediately. A pass with no
//! improvement switches to quake mode, which flips 2 to 4 distinct random
//! positions and hands control back to the next global pass. The run ends
//! after `threshold` iterations, each pass or quake counting as one.
//!
//! The best-by-PSL sequence is tracked next to the best-by-fitness one since
//! the kernel minimises fitness while results are reported as PSL.

use std::time::{Duration, Instant};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flip::{FitnessSpec, FitnessTable, SidelobeState};
use crate::generators::random_sequence;
use crate::seqcore::BinarySequence;

/// Identifier of the generator behind every seeded run.
pub const RNG_ID: &str = "chacha8-rand_chacha-0.3";

pub type SearchRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SearchRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Optional early exits. With both unset a run performs exactly
/// `threshold` iterations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopCriteria {
    /// Stop as soon as the best PSL is at or below this value.
    pub target_psl: Option<u32>,
    pub time_limit: Option<Duration>,
}

/// What a probe flip has to beat to be kept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Acceptance {
    /// Beat the fitness of the current sequence. A quake resets the current
    /// fitness to that of the perturbed sequence, so every quake is followed
    /// by a fresh climb.
    #[default]
    Current,
    /// Beat the best fitness of the whole run. Moves after a quake are only
    /// kept when they improve on the run's best.
    OverallBest,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackOptions {
    /// Record every improvement of the best PSL.
    pub trace: bool,
    pub stop: StopCriteria,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub threshold: u64,
    pub fitness: FitnessSpec,
    pub seed: u64,
    pub initial: Option<BinarySequence>,
    pub acceptance: Acceptance,
    pub track: TrackOptions,
}

impl SearchConfig {
    pub fn new(n: usize, threshold: u64, fitness: FitnessSpec, seed: u64) -> Self {
        Self {
            n,
            threshold,
            fitness,
            seed,
            initial: None,
            acceptance: Acceptance::default(),
            track: TrackOptions::default(),
        }
    }

    pub fn with_initial(mut self, initial: BinarySequence) -> Self {
        self.n = initial.len();
        self.initial = Some(initial);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::LengthTooShort(self.n));
        }
        if self.threshold == 0 {
            return Err(Error::Config("threshold must be at least 1".into()));
        }
        if let Some(init) = &self.initial {
            if init.len() != self.n {
                return Err(Error::LengthMismatch { expected: self.n, actual: init.len() });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scored<T> {
    pub sequence: BinarySequence,
    pub value: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Improvement {
    pub iteration: u64,
    pub psl: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Sequence at the last strict fitness improvement and its fitness `V*`.
    pub best_by_fitness: Scored<u128>,
    /// Lowest-PSL sequence observed at any point of the run.
    pub best_by_psl: Scored<u32>,
    pub iterations_used: u64,
    pub quakes_performed: u64,
    pub stopped_early: bool,
    pub rng_id: String,
    pub trace: Vec<Improvement>,
    #[serde(with = "duration_secs")]
    pub elapsed: Duration,
}

/// Flips `count` distinct uniformly chosen positions.
pub fn quake<R: Rng + ?Sized>(count: usize, state: &mut SidelobeState, rng: &mut R) -> Result<()> {
    let n = state.len();
    if count == 0 || count > n {
        return Err(Error::QuakeOutOfRange { count, len: n });
    }
    for pos in index::sample(rng, n, count) {
        state.flip_unchecked(pos);
    }
    Ok(())
}

pub fn shc_run(config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let started = Instant::now();
    let n = config.n;
    let mut rng = rng_from_seed(config.seed);
    let initial = match &config.initial {
        Some(b) => b.clone(),
        None => random_sequence(n, &mut rng)?,
    };
    let mut state = SidelobeState::new(initial);
    let table = FitnessTable::new(n, config.fitness);
    let stop = config.track.stop;

    let mut best_fitness = table.eval(state.sidelobe_values());
    let mut current_fitness = best_fitness;
    let mut best_fitness_seq = state.elements().to_vec();
    let mut best_psl = state.psl();
    let mut best_psl_seq = state.elements().to_vec();
    let mut trace = Vec::new();
    if config.track.trace {
        trace.push(Improvement { iteration: 0, psl: best_psl });
    }

    let reached = |p: u32| stop.target_psl.is_some_and(|t| p <= t);
    let mut stopped_early = reached(best_psl);
    let mut global = true;
    let mut counter = 0u64;
    let mut quakes = 0u64;
    let mut scratch = vec![0i32; n - 1];
    let mut prefix = Vec::with_capacity(n);
    if let Some(t) = table.small() {
        state.fill_prefix(t, &mut prefix);
    }

    while counter < config.threshold && !stopped_early {
        if let Some(limit) = stop.time_limit {
            if started.elapsed() >= limit {
                stopped_early = true;
                break;
            }
        }
        counter += 1;
        if global {
            let offset = rng.gen_range(1..n);
            let mut improved = false;
            let bound = match config.acceptance {
                Acceptance::Current => current_fitness,
                Acceptance::OverallBest => best_fitness,
            };
            for i in 0..n {
                let pos = (offset + i) % n;
                let accepted = match table.probe_table(bound) {
                    Some(t) => state.probe_fitness(pos, t, &prefix, bound as u64).map(|f| {
                        state.flip_unchecked(pos);
                        f as u128
                    }),
                    None => {
                        state.probe_into(pos, &mut scratch);
                        table.eval_below(&scratch, bound).inspect(|_| state.commit_probe(pos, &mut scratch))
                    }
                };
                if accepted.is_some() {
                    if let Some(t) = table.small() {
                        state.fill_prefix(t, &mut prefix);
                    }
                }
                if let Some(f) = accepted {
                    current_fitness = f;
                    if f < best_fitness {
                        best_fitness = f;
                        best_fitness_seq.copy_from_slice(state.elements());
                    }
                    improved = true;
                    break;
                }
            }
            if !improved {
                global = false;
                continue;
            }
        } else {
            let r = rng.gen_range(1..4usize);
            quake((1 + r).min(n), &mut state, &mut rng)?;
            quakes += 1;
            if let Some(t) = table.small() {
                state.fill_prefix(t, &mut prefix);
            }
            if config.acceptance == Acceptance::Current {
                current_fitness = table.eval(state.sidelobe_values());
            }
            global = true;
        }

        let current = state.psl();
        if current < best_psl {
            best_psl = current;
            best_psl_seq.copy_from_slice(state.elements());
            if config.track.trace {
                trace.push(Improvement { iteration: counter, psl: current });
            }
            stopped_early = reached(current);
        }
    }

    Ok(SearchOutcome {
        best_by_fitness: Scored { sequence: BinarySequence::from_vec_unchecked(best_fitness_seq), value: best_fitness },
        best_by_psl: Scored { sequence: BinarySequence::from_vec_unchecked(best_psl_seq), value: best_psl },
        iterations_used: counter,
        quakes_performed: quakes,
        stopped_early,
        rng_id: RNG_ID.to_string(),
        trace,
        elapsed: started.elapsed(),
    })
}

mod duration_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Ok(Duration::from_secs_f64(secs.max(0.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flip::fitness;
    use crate::seqcore::{psl, sidelobes};

    fn cfg(n: usize, alpha: u32, threshold: u64, seed: u64) -> SearchConfig {
        SearchConfig::new(n, threshold, FitnessSpec::new(alpha).unwrap(), seed)
    }

    #[test]
    fn quake_flips_distinct_positions() {
        let mut rng = rng_from_seed(1);
        for n in [2usize, 5, 17, 64] {
            for count in [1, 2, n.min(4), n] {
                let b = random_sequence(n, &mut rng).unwrap();
                let mut st = SidelobeState::new(b.clone());
                quake(count, &mut st, &mut rng).unwrap();
                let changed = b.as_slice().iter().zip(st.elements()).filter(|(a, c)| a != c).count();
                assert_eq!(changed, count);
                assert_eq!(st.sidelobe_values(), sidelobes(&st.sequence()).values());
            }
        }
        let mut st = SidelobeState::new(random_sequence(4, &mut rng).unwrap());
        assert!(matches!(quake(0, &mut st, &mut rng), Err(Error::QuakeOutOfRange { .. })));
        assert!(matches!(quake(5, &mut st, &mut rng), Err(Error::QuakeOutOfRange { .. })));
    }

    #[test]
    fn length_two_and_three() {
        for seed in 0..20 {
            let out = shc_run(&cfg(2, 2, 10, seed)).unwrap();
            assert_eq!(out.best_by_psl.value, 1);
            assert_eq!(out.iterations_used, 10);
            let out = shc_run(&cfg(3, 4, 50, seed)).unwrap();
            assert_eq!(out.best_by_psl.value, 1);
        }
    }

    #[test]
    fn reaches_optimum_at_n4() {
        for seed in 0..10 {
            let out = shc_run(&cfg(4, 2, 1000, seed)).unwrap();
            assert_eq!(out.best_by_psl.value, 1);
        }
    }

    #[test]
    fn barker_11_within_budget() {
        let found = (0..12).any(|seed| shc_run(&cfg(11, 2, 10_000, seed)).unwrap().best_by_psl.value == 1);
        assert!(found);
    }

    #[test]
    fn outcome_is_consistent_and_reproducible() {
        let c = cfg(37, 3, 3000, 42);
        let a = shc_run(&c).unwrap();
        let b = shc_run(&c).unwrap();
        assert_eq!(a.best_by_psl, b.best_by_psl);
        assert_eq!(a.best_by_fitness, b.best_by_fitness);
        assert_eq!(a.quakes_performed, b.quakes_performed);
        assert_eq!(a.iterations_used, 3000);
        assert_eq!(psl(&a.best_by_psl.sequence), a.best_by_psl.value);
        assert_eq!(fitness(&sidelobes(&a.best_by_fitness.sequence), c.fitness), a.best_by_fitness.value);
        assert!(psl(&a.best_by_fitness.sequence) >= a.best_by_psl.value);
    }

    #[test]
    fn initial_sequence_is_respected() {
        let init = BinarySequence::ones(20).unwrap();
        let mut c = cfg(20, 2, 1, 0).with_initial(init.clone());
        c.threshold = 1;
        let out = shc_run(&c).unwrap();
        // One pass from the all-ones start always finds an improving flip.
        assert!(out.best_by_fitness.value < fitness(&sidelobes(&init), c.fitness));
        assert!(out.best_by_psl.value <= 19);

        let mut bad = cfg(21, 2, 10, 0);
        bad.initial = Some(init);
        assert!(matches!(shc_run(&bad), Err(Error::LengthMismatch { .. })));
        assert!(shc_run(&cfg(20, 2, 0, 0)).is_err());
    }

    #[test]
    fn trace_and_target_stop() {
        let mut c = cfg(30, 2, 1_000_000, 5);
        c.track.trace = true;
        c.track.stop.target_psl = Some(4);
        let out = shc_run(&c).unwrap();
        assert!(out.stopped_early);
        assert!(out.best_by_psl.value <= 4);
        assert!(out.iterations_used < 1_000_000);
        assert!(out.trace.windows(2).all(|w| w[0].psl > w[1].psl && w[0].iteration <= w[1].iteration));
        assert_eq!(out.trace.last().unwrap().psl, out.best_by_psl.value);
    }

    /// Replays the kernel step by step and checks that a pass declared
    /// non-improving really leaves no single flip below `V*`.
    #[test]
    fn non_improving_pass_is_a_local_optimum() {
        let spec = FitnessSpec::new(2).unwrap();
        for seed in 0..20 {
            let n = 9 + (seed as usize % 7);
            let mut rng = rng_from_seed(seed);
            let mut state = SidelobeState::new(random_sequence(n, &mut rng).unwrap());
            let mut best = fitness(&state.sidelobes(), spec);
            let mut checked = 0;
            for _ in 0..200 {
                let offset = rng.gen_range(1..n);
                let mut improved = false;
                for i in 0..n {
                    let pos = (offset + i) % n;
                    state.flip(pos).unwrap();
                    let f = fitness(&state.sidelobes(), spec);
                    if f < best {
                        best = f;
                        improved = true;
                        break;
                    }
                    state.flip(pos).unwrap();
                }
                assert_eq!(state.sidelobe_values(), sidelobes(&state.sequence()).values());
                if !improved {
                    for pos in 0..n {
                        let mut probe = state.sequence().into_inner();
                        probe[pos] = -probe[pos];
                        let probe = BinarySequence::new(probe).unwrap();
                        assert!(fitness(&sidelobes(&probe), spec) >= best);
                    }
                    checked += 1;
                    quake(rng.gen_range(2..5usize).min(n), &mut state, &mut rng).unwrap();
                }
            }
            assert!(checked > 0);
        }
    }

    #[test]
    fn both_acceptance_rules_are_sound() {
        for acceptance in [Acceptance::Current, Acceptance::OverallBest] {
            for seed in 0..5 {
                let mut c = cfg(29, 3, 2000, seed);
                c.acceptance = acceptance;
                let out = shc_run(&c).unwrap();
                assert_eq!(out, SearchOutcome { elapsed: out.elapsed, ..shc_run(&c).unwrap() });
                assert_eq!(out.iterations_used, 2000);
                assert!(out.quakes_performed > 0);
                assert_eq!(fitness(&sidelobes(&out.best_by_fitness.sequence), c.fitness), out.best_by_fitness.value);
                assert_eq!(psl(&out.best_by_psl.sequence), out.best_by_psl.value);
            }
        }
    }

    #[test]
    fn rules_diverge_after_a_quake() {
        let mut a = cfg(48, 2, 3000, 8);
        let mut b = a.clone();
        a.acceptance = Acceptance::Current;
        b.acceptance = Acceptance::OverallBest;
        let (x, y) = (shc_run(&a).unwrap(), shc_run(&b).unwrap());
        assert_ne!(x.best_by_fitness, y.best_by_fitness);
    }
}
