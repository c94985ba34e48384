//! Racemization dynamics generated by mirror isotopisms.
//!
//! A square `Q` jumps to isotopes of its mirror through the channels
//! `g ∈ Mir(Q)`: channel `g` carries weight `w(g)` and lands on
//! `apply(g, mirror(Q))`. Summed over channels this defines the mirror rate
//! `k` of the square, which is constant on isotopy classes, so the chain
//! projects to a two-state exchange `[Q] ⇄ [Q#]` with rates `(k([Q]),
//! k([Q#]))`; chiral squares have no channels at all and are frozen.
//!
//! Everything real-valued is engineered for exact reproducibility: rates are
//! sums of weight multisets taken in sorted order (so isotopic squares get
//! bit-identical rates), and samplers draw every trajectory from its own
//! seeded substream, making results independent of thread count and
//! scheduling.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::isotopism::Isotopism;
use crate::perm::CycleType;
use crate::rng::SplitMix64;
use crate::search::{self, ClassPartition};
use crate::square::LatinSquare;

/// Sums after sorting by the total order on `f64`, so the result depends
/// only on the *multiset* of addends: any two equal multisets produce
/// bit-identical sums. Folding from `+0.0` (rather than `Iterator::sum`,
/// whose empty identity is `-0.0`) keeps empty rates canonically positive.
fn multiset_sum(mut xs: Vec<f64>) -> f64 {
    xs.sort_unstable_by(f64::total_cmp);
    xs.iter().fold(0.0, |acc, &x| acc + x)
}

/// A nonnegative weight on isotopisms that depends only on conjugation-
/// invariant data (component cycle types), so transported channels keep
/// their weights exactly.
///
/// Two families are supported. `constant(c)` weighs every channel `c`; with
/// `c = 1` the mirror rate counts mirror isotopisms. `gamma_cycle_type(map)`
/// reads the cycle type of the symbol permutation `gamma` and looks it up in
/// the map (absent types weigh 0). The symbol component is the right one to
/// key on: transporting a mirror isotopism along a relabeling conjugates
/// `gamma` but *swaps* the row/column components, so only `gamma`'s cycle
/// type is preserved channel-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFn {
    kind: WeightKind,
}

#[derive(Debug, Clone, PartialEq)]
enum WeightKind {
    Constant(f64),
    GammaCycleType(BTreeMap<CycleType, f64>),
}

impl WeightFn {
    /// The same weight for every channel. Must be finite and nonnegative.
    pub fn constant(c: f64) -> Result<WeightFn, Error> {
        if !c.is_finite() || c < 0.0 {
            return Err(Error::InvalidWeight { value: c });
        }
        Ok(WeightFn {
            kind: WeightKind::Constant(c),
        })
    }

    /// `constant(1)`: the mirror rate becomes `|Mir(Q)|`.
    pub fn unit() -> WeightFn {
        WeightFn {
            kind: WeightKind::Constant(1.0),
        }
    }

    /// Weight by the cycle type of the symbol permutation; cycle types not
    /// present in the map weigh 0.
    pub fn gamma_cycle_type(map: BTreeMap<CycleType, f64>) -> Result<WeightFn, Error> {
        for &v in map.values() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidWeight { value: v });
            }
        }
        Ok(WeightFn {
            kind: WeightKind::GammaCycleType(map),
        })
    }

    /// The weight of one channel.
    pub fn eval(&self, g: &Isotopism) -> f64 {
        match &self.kind {
            WeightKind::Constant(c) => *c,
            WeightKind::GammaCycleType(map) => {
                map.get(&g.gamma().cycle_type()).copied().unwrap_or(0.0)
            }
        }
    }

    /// Short human-readable description, e.g. `constant(1)` or
    /// `gamma-cycles(2-1:0.5, 3:1)`.
    pub fn describe(&self) -> String {
        match &self.kind {
            WeightKind::Constant(c) => format!("constant({c})"),
            WeightKind::GammaCycleType(map) => {
                let entries: Vec<String> = map.iter().map(|(ct, v)| format!("{ct}:{v}")).collect();
                format!("gamma-cycles({})", entries.join(", "))
            }
        }
    }
}

/// The mirror rate `k` of a square: the total weight of its mirror
/// isotopisms, summed as a multiset so isotopic squares (whose channel
/// weight multisets coincide) get bit-identical values. Zero exactly when
/// the square is structurally chiral or all channel weights vanish.
pub fn mirror_rate(q: &LatinSquare, w: &WeightFn) -> f64 {
    let weights = search::mirror_isotopisms(q)
        .iter()
        .map(|g| w.eval(g))
        .collect();
    multiset_sum(weights)
}

/// Whether the square and its mirror racemize at equal rates,
/// `k([Q]) == k([Q#])`, compared exactly. The channel bijection
/// `g ↦ mirror_twist(g)` preserves weights, so this always holds for the
/// supported weight families; the check recomputes both sides honestly.
pub fn racemic_condition(q: &LatinSquare, w: &WeightFn) -> bool {
    mirror_rate(q, w) == mirror_rate(&q.mirror(), w)
}

/// Outgoing jump rates of one square: target square → rate, with the
/// underlying per-target weight multisets retained so that rates and the
/// total are exact multiset sums.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMap {
    entries: BTreeMap<LatinSquare, Channel>,
}

#[derive(Debug, Clone, PartialEq)]
struct Channel {
    /// Sorted by `f64::total_cmp`.
    weights: Vec<f64>,
    rate: f64,
}

impl RateMap {
    /// Rate toward one target (0 for non-targets).
    pub fn rate(&self, target: &LatinSquare) -> f64 {
        self.entries.get(target).map_or(0.0, |c| c.rate)
    }

    /// The sorted weight multiset feeding one target.
    pub fn weights(&self, target: &LatinSquare) -> Option<&[f64]> {
        self.entries.get(target).map(|c| c.weights.as_slice())
    }

    /// Targets with their rates, in the deterministic square order.
    pub fn targets(&self) -> impl Iterator<Item = (&LatinSquare, f64)> {
        self.entries.iter().map(|(t, c)| (t, c.rate))
    }

    /// Number of distinct targets.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Whether there are no channels at all (the frozen, chiral case).
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total outgoing rate, summed over the full channel weight multiset:
    /// bit-identical to [`mirror_rate`] of the source square.
    pub fn total_rate(&self) -> f64 {
        let all: Vec<f64> = self
            .entries
            .values()
            .flat_map(|c| c.weights.iter().copied())
            .collect();
        multiset_sum(all)
    }
}

/// Builds the rate map of `q`: one channel per mirror isotopism `g`,
/// landing on `apply(g, mirror(q))` with weight `w(g)`. Capped at order 7,
/// where complete mirror-isotopism enumeration is still instantaneous.
pub fn symmetry_generated_rates(q: &LatinSquare, w: &WeightFn) -> Result<RateMap, Error> {
    const MAX_ORDER: usize = 7;
    if q.order() > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: q.order(),
            max: MAX_ORDER,
        });
    }
    let qm = q.mirror();
    let mut per_target: BTreeMap<LatinSquare, Vec<f64>> = BTreeMap::new();
    for g in search::mirror_isotopisms(q) {
        let target = qm.apply(&g).expect("channel preserves the order");
        per_target.entry(target).or_default().push(w.eval(&g));
    }
    let entries = per_target
        .into_iter()
        .map(|(target, mut weights)| {
            weights.sort_unstable_by(f64::total_cmp);
            let rate = weights.iter().fold(0.0, |acc, &x| acc + x);
            (target, Channel { weights, rate })
        })
        .collect();
    Ok(RateMap { entries })
}

/// Parameters of the reduced two-state exchange `[Q] ⇄ [Q#]`:
/// rate `k_q` out of `[Q]`, rate `k_qm` out of `[Q#]`, and the initial
/// probability `p0` of `[Q]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateSpec {
    k_q: f64,
    k_qm: f64,
    p0: f64,
}

impl TwoStateSpec {
    /// Validates rates (finite, nonnegative) and `p0 ∈ [0, 1]`.
    pub fn new(k_q: f64, k_qm: f64, p0: f64) -> Result<TwoStateSpec, Error> {
        for v in [k_q, k_qm] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidRate { value: v });
            }
        }
        if !p0.is_finite() || !(0.0..=1.0).contains(&p0) {
            return Err(Error::InvalidProbability { value: p0 });
        }
        Ok(TwoStateSpec { k_q, k_qm, p0 })
    }

    /// Rate out of `[Q]`.
    pub fn k_q(&self) -> f64 {
        self.k_q
    }

    /// Rate out of `[Q#]`.
    pub fn k_qm(&self) -> f64 {
        self.k_qm
    }

    /// Initial probability of `[Q]`.
    pub fn p0(&self) -> f64 {
        self.p0
    }

    /// Long-time probability of `[Q]`: `k_qm / (k_q + k_qm)`, which is 1/2
    /// exactly when the rates balance. A fully frozen chain stays at `p0`.
    pub fn equilibrium(&self) -> f64 {
        let total = self.k_q + self.k_qm;
        if total == 0.0 {
            self.p0
        } else {
            self.k_qm / total
        }
    }

    /// Closed-form occupation probability of `[Q]` at time `t`:
    /// `p_eq + (p0 - p_eq) · exp(-(k_q + k_qm) t)`. Returns `p0` exactly at
    /// `t = 0` and for the frozen chain.
    pub fn probability_at(&self, t: f64) -> f64 {
        let total = self.k_q + self.k_qm;
        if t == 0.0 || total == 0.0 {
            return self.p0;
        }
        let p_eq = self.k_qm / total;
        p_eq + (self.p0 - p_eq) * (-total * t).exp()
    }
}

/// A record of occupation probabilities of `[Q]` along a time grid,
/// analytic and/or empirical.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Nondecreasing observation times.
    pub times: Vec<f64>,
    /// Closed-form probabilities, when computed.
    pub p_analytic: Option<Vec<f64>>,
    /// Sampled frequencies, when simulated.
    pub p_empirical: Option<Vec<EmpiricalPoint>>,
    /// Seed used by the sampler, when simulated.
    pub seed: Option<u64>,
}

/// One empirical grid point: observed frequency and sample count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalPoint {
    pub frequency: f64,
    pub samples: u64,
}

fn validate_grid(times: &[f64]) -> Result<(), Error> {
    let mut prev = 0.0f64;
    for (index, &t) in times.iter().enumerate() {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::NegativeTime { value: t });
        }
        if index > 0 && t < prev {
            return Err(Error::TimesNotNondecreasing { index });
        }
        prev = t;
    }
    Ok(())
}

/// Evaluates the closed form along a grid of times.
pub fn analytic_two_state(spec: &TwoStateSpec, times: &[f64]) -> Result<Trajectory, Error> {
    validate_grid(times)?;
    let p = times.iter().map(|&t| spec.probability_at(t)).collect();
    Ok(Trajectory {
        times: times.to_vec(),
        p_analytic: Some(p),
        p_empirical: None,
        seed: None,
    })
}

/// Number of sampler threads: `QCHIR_THREADS` when set to a positive
/// integer, otherwise the machine parallelism. Thread count never changes
/// results, only wall-clock time.
fn env_thread_count() -> usize {
    match std::env::var("QCHIR_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) => k.max(1),
            Err(_) => default_thread_count(),
        },
        Err(_) => default_thread_count(),
    }
}

fn default_thread_count() -> usize {
    std::thread::available_parallelism().map_or(1, |p| p.get())
}

/// Accumulates per-sample counts over `0..n_samples` on up to `threads`
/// workers. Sample `i` must depend only on `i` (substream discipline), so
/// the merged counts are independent of the split.
fn parallel_counts<F>(n_samples: u64, threads: usize, buckets: usize, per_sample: &F) -> Vec<u64>
where
    F: Fn(u64, &mut [u64]) + Sync,
{
    let threads = threads.clamp(1, 1024).min(n_samples.max(1) as usize);
    if threads == 1 {
        let mut counts = vec![0u64; buckets];
        for i in 0..n_samples {
            per_sample(i, &mut counts);
        }
        return counts;
    }
    let chunk = n_samples.div_ceil(threads as u64);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads as u64)
            .map(|t| {
                scope.spawn(move || {
                    let mut counts = vec![0u64; buckets];
                    let (lo, hi) = (t * chunk, ((t + 1) * chunk).min(n_samples));
                    for i in lo..hi {
                        per_sample(i, &mut counts);
                    }
                    counts
                })
            })
            .collect();
        let mut total = vec![0u64; buckets];
        for handle in handles {
            let part = handle.join().expect("sampler thread panicked");
            for (acc, v) in total.iter_mut().zip(part) {
                *acc += v;
            }
        }
        total
    })
}

/// One exact two-state trajectory: exponential holding times, recorded at
/// the grid points. The number of random draws depends only on the jump
/// sequence, never on the grid.
fn two_state_path(spec: &TwoStateSpec, grid: &[f64], rng: &mut SplitMix64, counts: &mut [u64]) {
    let mut in_q = rng.next_f64() < spec.p0;
    let rate_of = |in_q: bool| if in_q { spec.k_q } else { spec.k_qm };
    let mut rate = rate_of(in_q);
    let mut t_next = if rate > 0.0 {
        rng.next_exp(rate)
    } else {
        f64::INFINITY
    };
    for (k, &g) in grid.iter().enumerate() {
        while t_next <= g {
            in_q = !in_q;
            rate = rate_of(in_q);
            t_next += if rate > 0.0 {
                rng.next_exp(rate)
            } else {
                f64::INFINITY
            };
        }
        counts[k] += u64::from(in_q);
    }
}

/// Samples `n_samples` exact trajectories of the two-state chain and
/// records the empirical frequency of `[Q]` at each grid point.
///
/// Trajectory `i` draws exclusively from `SplitMix64::substream(seed, i)`,
/// so the result is a pure function of `(spec, grid, n_samples, seed)` —
/// identical across platforms, runs, and thread counts. `horizon` is the
/// nominal observation window and must be valid, but recording happens at
/// the grid times, which the exact sampler handles wherever they lie.
pub fn sample_two_state(
    spec: &TwoStateSpec,
    horizon: f64,
    n_samples: u64,
    seed: u64,
    grid: &[f64],
) -> Result<Trajectory, Error> {
    sample_two_state_with_threads(spec, horizon, n_samples, seed, grid, env_thread_count())
}

/// [`sample_two_state`] with an explicit worker count (the env wrapper and
/// tests that must not touch process-global state both call this).
pub fn sample_two_state_with_threads(
    spec: &TwoStateSpec,
    horizon: f64,
    n_samples: u64,
    seed: u64,
    grid: &[f64],
    threads: usize,
) -> Result<Trajectory, Error> {
    if !horizon.is_finite() || horizon < 0.0 {
        return Err(Error::NegativeTime { value: horizon });
    }
    validate_grid(grid)?;
    if n_samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let per_sample = |i: u64, counts: &mut [u64]| {
        let mut rng = SplitMix64::substream(seed, i);
        two_state_path(spec, grid, &mut rng, counts);
    };
    let counts = parallel_counts(n_samples, threads, grid.len(), &per_sample);
    let points = counts
        .into_iter()
        .map(|c| EmpiricalPoint {
            frequency: c as f64 / n_samples as f64,
            samples: n_samples,
        })
        .collect();
    Ok(Trajectory {
        times: grid.to_vec(),
        p_analytic: None,
        p_empirical: Some(points),
        seed: Some(seed),
    })
}

/// Result of the full-state-space verification of the class-level dynamics;
/// see [`full_state_descent_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct DescentReport {
    pub order: usize,
    pub square_count: usize,
    pub class_count: usize,
    pub class_sizes: Vec<usize>,
    /// Total outgoing rate of each class (taken at its representative).
    pub class_rates: Vec<f64>,
    /// Weight function used, in [`WeightFn::describe`] form.
    pub weight: String,
    /// Every transition target lies in the mirror class of its source.
    pub mirror_only_pass: bool,
    pub transitions_checked: u64,
    /// Sampled relabelings transport the channel set exactly:
    /// `Mir(h·Q) = {mirror_twist(h) ∘ g ∘ h⁻¹}` with channel weights and
    /// total rates preserved bitwise.
    pub gauge_invariance_pass: bool,
    pub gauge_pairs_tested: u32,
    /// Total rate is constant (bitwise) on every isotopy class.
    pub class_rate_constant_pass: bool,
    /// Every class coincides with its mirror class (true at these orders),
    /// which predicts constant class occupation.
    pub mirror_fixed_pass: bool,
    pub grid: Vec<f64>,
    /// Occupation checks, one entry per grid time.
    pub occupations: Vec<GridOccupation>,
    pub n_samples: u64,
    pub seed: u64,
    /// Conjunction of all hypothesis and occupation checks.
    pub pass: bool,
}

/// Class occupation comparison at one grid time.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOccupation {
    pub time: f64,
    pub classes: Vec<OccupationCheck>,
}

/// One (grid time, class) comparison of empirical frequency against the
/// constant prediction, with binomial 3σ tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupationCheck {
    pub predicted: f64,
    pub empirical: f64,
    pub sigma: f64,
    pub within_three_sigma: bool,
}

/// Builds the concrete jump chain on *all* Latin squares of order `n ≤ 4`
/// and verifies that it descends to the two-state class dynamics:
///
/// * **mirror-only** — every channel target lies in the isotopy class of
///   the source's mirror (checked over every square and channel, exactly);
/// * **gauge invariance** — for sampled relabelings `h`, the channel set
///   transports as `Mir(h·Q) = mirror_twist(h) · Mir(Q) · h⁻¹` with channel
///   weights preserved, so total rates of `Q` and `h·Q` are bit-identical.
///   (Individual *targets* are not carried to `h·target` — the transported
///   channel acts on the relabeled mirror — so rate maps are compared
///   through the transport, and totals bitwise.);
/// * **class-rate constancy** — the total rate is constant on each class;
/// * **mirror-fixed classes** — at these orders every class contains its
///   own mirror, so class occupation should be constant in time;
/// * **occupation** — empirical class occupation over `n_samples` exact
///   trajectories (uniform initial square) stays within 3σ of that constant
///   prediction at five grid times spanning `[0, t_max]`.
pub fn full_state_descent_check(
    n: usize,
    w: &WeightFn,
    t_max: f64,
    n_samples: u64,
    seed: u64,
) -> Result<DescentReport, Error> {
    full_state_descent_check_with_threads(n, w, t_max, n_samples, seed, env_thread_count())
}

/// [`full_state_descent_check`] with an explicit worker count.
pub fn full_state_descent_check_with_threads(
    n: usize,
    w: &WeightFn,
    t_max: f64,
    n_samples: u64,
    seed: u64,
    threads: usize,
) -> Result<DescentReport, Error> {
    const MAX_ORDER: usize = 4;
    const GAUGE_PAIRS: u32 = 20;
    if n == 0 || n > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: MAX_ORDER,
        });
    }
    if !t_max.is_finite() || t_max < 0.0 {
        return Err(Error::NegativeTime { value: t_max });
    }
    if n_samples == 0 {
        return Err(Error::ZeroSamples);
    }

    let squares: Vec<LatinSquare> = search::enumerate_latin_squares(n)?.collect();
    let index: BTreeMap<&LatinSquare, usize> =
        squares.iter().enumerate().map(|(i, q)| (q, i)).collect();
    let partition = search::isotopy_classes(&squares)?;
    let membership = partition.membership();
    let class_count = partition.class_count();
    let mirror_sets: Vec<Vec<Isotopism>> = squares.iter().map(search::mirror_isotopisms).collect();
    let rate_maps: Vec<RateMap> = squares
        .iter()
        .map(|q| symmetry_generated_rates(q, w))
        .collect::<Result<_, _>>()?;

    // Mirror-only: walk every channel of every square.
    let mut mirror_only_pass = true;
    let mut transitions_checked = 0u64;
    for (i, rm) in rate_maps.iter().enumerate() {
        let mirror_class = membership[index[&squares[i].mirror()]];
        for (target, _) in rm.targets() {
            transitions_checked += 1;
            if membership[index[target]] != mirror_class {
                mirror_only_pass = false;
            }
        }
    }

    // Gauge invariance via the exact channel transport.
    let mut gauge_invariance_pass = true;
    let mut gauge_rng = SplitMix64::substream(seed, u64::MAX);
    for _ in 0..GAUGE_PAIRS {
        let i = gauge_rng.next_below(squares.len());
        let h = Isotopism::random(n, &mut gauge_rng);
        let relabeled = squares[i].apply(&h)?;
        let h_twist = h.mirror_twist();
        let h_inv = h.inverse();
        let mut transported: Vec<Isotopism> = Vec::with_capacity(mirror_sets[i].len());
        let mut weights_preserved = true;
        for g in &mirror_sets[i] {
            let moved = h_twist.compose(g)?.compose(&h_inv)?;
            if w.eval(&moved) != w.eval(g) {
                weights_preserved = false;
            }
            transported.push(moved);
        }
        transported.sort_unstable();
        let actual = search::mirror_isotopisms(&relabeled);
        let totals_match =
            symmetry_generated_rates(&relabeled, w)?.total_rate() == rate_maps[i].total_rate();
        if actual != transported || !weights_preserved || !totals_match {
            gauge_invariance_pass = false;
        }
    }

    // Class-rate constancy, and the per-class rates themselves.
    let class_rates: Vec<f64> = partition
        .representatives()
        .iter()
        .map(|rep| symmetry_generated_rates(rep, w).map(|rm| rm.total_rate()))
        .collect::<Result<_, _>>()?;
    let mut class_rate_constant_pass = true;
    for (i, rm) in rate_maps.iter().enumerate() {
        if rm.total_rate() != class_rates[membership[i]] {
            class_rate_constant_pass = false;
        }
    }

    // Mirror-fixed classes.
    let mut mirror_fixed_pass = true;
    for (i, q) in squares.iter().enumerate() {
        if membership[index[&q.mirror()]] != membership[i] {
            mirror_fixed_pass = false;
        }
    }

    // Simulate the concrete chain and project onto classes.
    let grid: Vec<f64> = if t_max == 0.0 {
        vec![0.0]
    } else {
        (0..=4).map(|k| k as f64 * t_max / 4.0).collect()
    };
    // Deterministic per-square jump tables (target index, rate, exit sum).
    let jump_tables: Vec<(Vec<(usize, f64)>, f64)> = rate_maps
        .iter()
        .map(|rm| {
            let targets: Vec<(usize, f64)> =
                rm.targets().map(|(t, rate)| (index[t], rate)).collect();
            let exit = targets.iter().fold(0.0, |acc, &(_, r)| acc + r);
            (targets, exit)
        })
        .collect();
    let per_sample = |i: u64, counts: &mut [u64]| {
        let mut rng = SplitMix64::substream(seed, i);
        let mut state = rng.next_below(squares.len());
        let (mut targets, mut exit) = {
            let t = &jump_tables[state];
            (&t.0, t.1)
        };
        let mut t_next = if exit > 0.0 {
            rng.next_exp(exit)
        } else {
            f64::INFINITY
        };
        for (k, &g) in grid.iter().enumerate() {
            while t_next <= g {
                // Select a target proportionally to its rate.
                let mut u = rng.next_f64() * exit;
                let mut chosen = targets[targets.len() - 1].0;
                for &(t_idx, r) in targets {
                    if u < r {
                        chosen = t_idx;
                        break;
                    }
                    u -= r;
                }
                state = chosen;
                let t = &jump_tables[state];
                targets = &t.0;
                exit = t.1;
                t_next += if exit > 0.0 {
                    rng.next_exp(exit)
                } else {
                    f64::INFINITY
                };
            }
            counts[k * class_count + membership[state]] += 1;
        }
    };
    let counts = parallel_counts(n_samples, threads, grid.len() * class_count, &per_sample);

    let class_sizes = partition.class_sizes();
    let total_squares = squares.len() as f64;
    let mut occupations = Vec::with_capacity(grid.len());
    let mut occupation_pass = true;
    for (k, &time) in grid.iter().enumerate() {
        let mut classes = Vec::with_capacity(class_count);
        for c in 0..class_count {
            let predicted = class_sizes[c] as f64 / total_squares;
            let empirical = counts[k * class_count + c] as f64 / n_samples as f64;
            let sigma = (predicted * (1.0 - predicted) / n_samples as f64).sqrt();
            let within_three_sigma = (empirical - predicted).abs() <= 3.0 * sigma;
            if !within_three_sigma {
                occupation_pass = false;
            }
            classes.push(OccupationCheck {
                predicted,
                empirical,
                sigma,
                within_three_sigma,
            });
        }
        occupations.push(GridOccupation { time, classes });
    }

    let pass = mirror_only_pass
        && gauge_invariance_pass
        && class_rate_constant_pass
        && mirror_fixed_pass
        && occupation_pass;
    Ok(DescentReport {
        order: n,
        square_count: squares.len(),
        class_count,
        class_sizes,
        class_rates,
        weight: w.describe(),
        mirror_only_pass,
        transitions_checked,
        gauge_invariance_pass,
        gauge_pairs_tested: GAUGE_PAIRS,
        class_rate_constant_pass,
        mirror_fixed_pass,
        grid,
        occupations,
        n_samples,
        seed,
        pass,
    })
}

/// A real-valued function sampled over a family of squares, tagged with
/// whether it turned out to be constant on each isotopy class (exact
/// comparison). Only verified-invariant observables project to functions on
/// classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    values: Vec<f64>,
    invariant: bool,
}

impl Observable {
    /// Evaluates `f` on each square and records whether the values are
    /// constant within every class of `partition`.
    pub fn over_squares<F>(squares: &[LatinSquare], partition: &ClassPartition, f: F) -> Observable
    where
        F: Fn(&LatinSquare) -> f64,
    {
        assert_eq!(
            squares.len(),
            partition.membership().len(),
            "partition must describe exactly these squares"
        );
        let values: Vec<f64> = squares.iter().map(f).collect();
        let mut class_value: Vec<Option<f64>> = vec![None; partition.class_count()];
        let mut invariant = true;
        for (i, &v) in values.iter().enumerate() {
            let c = partition.membership()[i];
            match class_value[c] {
                None => class_value[c] = Some(v),
                Some(prev) => {
                    if prev.total_cmp(&v) != std::cmp::Ordering::Equal {
                        invariant = false;
                    }
                }
            }
        }
        Observable { values, invariant }
    }

    /// Per-square values, aligned with the input list.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Whether the observable was constant on every class.
    pub fn is_isotopy_invariant(&self) -> bool {
        self.invariant
    }

    /// Per-class values (at each class representative), or `None` when the
    /// observable is not invariant and such a projection would be lossy.
    pub fn class_values(&self, partition: &ClassPartition) -> Option<Vec<f64>> {
        if !self.invariant {
            return None;
        }
        let mut out = vec![0.0; partition.class_count()];
        let mut seen = vec![false; partition.class_count()];
        for (i, &v) in self.values.iter().enumerate() {
            let c = partition.membership()[i];
            if !seen[c] {
                out[c] = v;
                seen[c] = true;
            }
        }
        Some(out)
    }
}
