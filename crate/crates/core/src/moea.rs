//! NSGA-II over the two-parameter genotype. Objectives are maximized.

use std::cmp::Ordering;

use rand::Rng as _;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::controller::ControlParams;
use crate::error::{Error, Result};
use crate::seed::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub genotype: ControlParams,
    pub objectives: Vec<f64>,
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    pub fn new(genotype: ControlParams, objectives: Vec<f64>) -> Self {
        Self {
            genotype,
            objectives,
            rank: 0,
            crowding: 0.0,
        }
    }
}

impl AsRef<[f64]> for Individual {
    fn as_ref(&self) -> &[f64] {
        &self.objectives
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_probability: f64,
    pub crossover_eta: f64,
    pub mutation_sd: f64,
    pub mutation_probability: f64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            population_size: 40,
            generations: 200,
            crossover_probability: 0.9,
            crossover_eta: 15.0,
            mutation_sd: 0.05,
            mutation_probability: 0.5,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 || !self.population_size.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "population size must be even and >= 4, got {}",
                self.population_size
            )));
        }
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        if !unit(self.crossover_probability) || !unit(self.mutation_probability) {
            return Err(Error::Config(
                "variation probabilities must lie in [0, 1]".into(),
            ));
        }
        if self.crossover_eta.is_nan()
            || self.crossover_eta < 0.0
            || self.mutation_sd.is_nan()
            || self.mutation_sd < 0.0
        {
            return Err(Error::Config(
                "crossover index and mutation sd must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Pareto dominance for maximization.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::ObjectiveLength(a.len(), b.len()));
    }
    Ok(dominates_unchecked(a, b))
}

fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        if x > y {
            strictly = true;
        }
    }
    strictly
}

/// Deb's fast non-dominated sort. Returns fronts of indices, best first.
pub fn fast_nondominated_sort<T: AsRef<[f64]>>(population: &[T]) -> Result<Vec<Vec<usize>>> {
    let n = population.len();
    if let Some(first) = population.first() {
        let m = first.as_ref().len();
        if let Some(bad) = population.iter().find(|p| p.as_ref().len() != m) {
            return Err(Error::ObjectiveLength(m, bad.as_ref().len()));
        }
    }
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (population[i].as_ref(), population[j].as_ref());
            if dominates_unchecked(a, b) {
                dominated_by_me[i].push(j);
                domination_count[j] += 1;
            } else if dominates_unchecked(b, a) {
                dominated_by_me[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    Ok(fronts)
}

/// Crowding distance of each member of one front.
pub fn crowding_distance<T: AsRef<[f64]>>(front: &[T]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].as_ref().len();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        let value = |i: usize| front[i].as_ref()[k];
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(a.cmp(&b)));
        let (lo, hi) = (value(order[0]), value(order[n - 1]));
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in order.windows(3) {
            dist[w[1]] += (value(w[2]) - value(w[0])) / range;
        }
    }
    dist
}

/// Sets `rank` and `crowding` on every individual.
pub fn assign_rank_and_crowding(population: &mut [Individual]) -> Result<()> {
    let fronts = fast_nondominated_sort(population)?;
    for (rank, front) in fronts.iter().enumerate() {
        let members: Vec<&[f64]> = front
            .iter()
            .map(|&i| population[i].objectives.as_slice())
            .collect();
        let crowd = crowding_distance(&members);
        for (&i, c) in front.iter().zip(crowd) {
            population[i].rank = rank;
            population[i].crowding = c;
        }
    }
    Ok(())
}

/// Better-first comparison on (rank, crowding).
fn crowded_cmp(a: &Individual, b: &Individual) -> Ordering {
    a.rank
        .cmp(&b.rank)
        .then_with(|| b.crowding.total_cmp(&a.crowding))
}

fn tournament<'a>(population: &'a [Individual], rng: &mut Rng) -> &'a Individual {
    let a = &population[rng.random_range(0..population.len())];
    let b = &population[rng.random_range(0..population.len())];
    match crowded_cmp(a, b) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if rng.random_bool(0.5) {
                a
            } else {
                b
            }
        }
    }
}

fn sbx_pair(x1: f64, x2: f64, eta: f64, rng: &mut Rng) -> (f64, f64) {
    let u: f64 = rng.random();
    let beta = if u <= 0.5 {
        (2.0 * u).powf(1.0 / (eta + 1.0))
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta + 1.0))
    };
    let c1 = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2);
    let c2 = 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2);
    (c1, c2)
}

/// Produces `cfg.population_size` offspring genotypes from the parents.
pub fn make_offspring(
    parents: &[Individual],
    cfg: &EvolutionConfig,
    rng: &mut Rng,
) -> Vec<ControlParams> {
    let mutation = Normal::new(0.0, cfg.mutation_sd).ok();
    let mut out = Vec::with_capacity(cfg.population_size);
    while out.len() < cfg.population_size {
        let a = tournament(parents, rng).genotype.as_array();
        let b = tournament(parents, rng).genotype.as_array();
        let (mut c1, mut c2) = (a, b);
        if rng.random_bool(cfg.crossover_probability) {
            for k in 0..2 {
                let (x, y) = sbx_pair(a[k], b[k], cfg.crossover_eta, rng);
                c1[k] = x;
                c2[k] = y;
            }
        }
        for child in [&mut c1, &mut c2] {
            if let Some(normal) = mutation {
                for gene in child.iter_mut() {
                    if rng.random_bool(cfg.mutation_probability) {
                        *gene += normal.sample(rng);
                    }
                }
            }
            if out.len() < cfg.population_size {
                out.push(ControlParams::clamped(child[0], child[1]));
            }
        }
    }
    out
}

/// Keeps the best `size` individuals by non-domination rank, then crowding.
pub fn survive(mut pool: Vec<Individual>, size: usize) -> Result<Vec<Individual>> {
    let fronts = fast_nondominated_sort(&pool)?;
    let mut keep: Vec<usize> = Vec::with_capacity(size);
    for front in fronts {
        if keep.len() + front.len() <= size {
            keep.extend(front);
        } else {
            let members: Vec<&[f64]> = front
                .iter()
                .map(|&i| pool[i].objectives.as_slice())
                .collect();
            let crowd = crowding_distance(&members);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| crowd[b].total_cmp(&crowd[a]).then(a.cmp(&b)));
            keep.extend(order.into_iter().take(size - keep.len()).map(|k| front[k]));
        }
        if keep.len() == size {
            break;
        }
    }
    keep.sort_unstable();
    let mut survivors: Vec<Individual> = keep
        .into_iter()
        .map(|i| {
            std::mem::replace(
                &mut pool[i],
                Individual::new(ControlParams::center(), Vec::new()),
            )
        })
        .collect();
    assign_rank_and_crowding(&mut survivors)?;
    Ok(survivors)
}

/// Uniform random initial population, evaluated and ranked.
pub fn initial_population<F>(
    cfg: &EvolutionConfig,
    evaluate: &mut F,
    rng: &mut Rng,
) -> Result<Vec<Individual>>
where
    F: FnMut(ControlParams) -> Result<Vec<f64>>,
{
    cfg.validate()?;
    let genotypes: Vec<ControlParams> = (0..cfg.population_size)
        .map(|_| ControlParams::clamped(rng.random(), rng.random()))
        .collect();
    let mut pop = genotypes
        .into_iter()
        .map(|g| Ok(Individual::new(g, evaluate(g)?)))
        .collect::<Result<Vec<_>>>()?;
    assign_rank_and_crowding(&mut pop)?;
    Ok(pop)
}

/// One NSGA-II generation: tournament, SBX, Gaussian mutation, elitist
/// survival over parents and offspring.
pub fn evolve_generation<F>(
    population: Vec<Individual>,
    evaluate: &mut F,
    cfg: &EvolutionConfig,
    rng: &mut Rng,
) -> Result<Vec<Individual>>
where
    F: FnMut(ControlParams) -> Result<Vec<f64>>,
{
    if population.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let offspring = make_offspring(&population, cfg, rng);
    let size = population.len();
    let mut pool = population;
    for g in offspring {
        pool.push(Individual::new(g, evaluate(g)?));
    }
    survive(pool, size)
}

/// Re-evaluates every individual in place and re-ranks, for when the
/// objective function itself has changed.
pub fn reevaluate<F>(population: &mut [Individual], evaluate: &mut F) -> Result<()>
where
    F: FnMut(ControlParams) -> Result<Vec<f64>>,
{
    for ind in population.iter_mut() {
        ind.objectives = evaluate(ind.genotype)?;
    }
    assign_rank_and_crowding(population)
}
