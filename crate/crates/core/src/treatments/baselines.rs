use rand_distr::{Distribution, Normal};

use crate::controller::ControlParams;
use crate::error::{Error, Result};
use crate::moea::{
    assign_rank_and_crowding, evolve_generation, initial_population, make_offspring,
    EvolutionConfig, Individual,
};
use crate::regression::{IdwModel, KrigingModel, Regressor, Sample};
use crate::seed::{EvalSeed, Rng};
use crate::testbed::{covered_distance, simulate, TestbedConfig};

use super::{
    RealLab, RunResult, RunSettings, Treatment, DIRECT_REALITY_EVALS, LOCAL_SEARCH_STEPS,
    SEARCH_STREAM, SURROGATE_INITIAL_DESIGN,
};

const DIRECT_POPULATION: usize = 4;
const LOCAL_STEP_SD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    DirectReality,
    SimOnly,
    SimPlusLocal,
    SurrogateIdw,
    SurrogateKriging,
}

impl BaselineKind {
    pub fn treatment(&self) -> Treatment {
        match self {
            BaselineKind::DirectReality => Treatment::DirectReality,
            BaselineKind::SimOnly => Treatment::SimOnly,
            BaselineKind::SimPlusLocal => Treatment::SimPlusLocal,
            BaselineKind::SurrogateIdw => Treatment::SurrogateIdw,
            BaselineKind::SurrogateKriging => Treatment::SurrogateKriging,
        }
    }
}

impl TryFrom<Treatment> for BaselineKind {
    type Error = Error;

    fn try_from(t: Treatment) -> Result<Self> {
        Ok(match t {
            Treatment::DirectReality => BaselineKind::DirectReality,
            Treatment::SimOnly => BaselineKind::SimOnly,
            Treatment::SimPlusLocal => BaselineKind::SimPlusLocal,
            Treatment::SurrogateIdw => BaselineKind::SurrogateIdw,
            Treatment::SurrogateKriging => BaselineKind::SurrogateKriging,
            Treatment::Transferability => {
                return Err(Error::UnknownTreatment(format!("{t} is not a baseline")))
            }
        })
    }
}

struct Outcome {
    selected: ControlParams,
    real_fitness: f64,
}

pub fn run_baseline(kind: BaselineKind, settings: &RunSettings, seed: u64) -> Result<RunResult> {
    settings.validate()?;
    let treatment = kind.treatment();
    let cfg = &settings.testbed;
    let mut lab = RealLab::new(cfg, seed, treatment.real_eval_cap(settings.budget));
    let mut rng = EvalSeed::new(seed, SEARCH_STREAM).rng();
    let outcome = match kind {
        BaselineKind::DirectReality => direct_reality(&mut lab, &settings.evolution, &mut rng)?,
        BaselineKind::SimOnly => {
            let best = optimize_in_sim(cfg, &settings.evolution, &mut rng)?;
            let (traj, _) = lab.trial(best)?;
            Outcome {
                selected: best,
                real_fitness: covered_distance(&traj)?,
            }
        }
        BaselineKind::SimPlusLocal => {
            let best = optimize_in_sim(cfg, &settings.evolution, &mut rng)?;
            hill_climb(&mut lab, best, &mut rng)?
        }
        BaselineKind::SurrogateIdw | BaselineKind::SurrogateKriging => {
            surrogate(kind, &mut lab, &settings.evolution, &mut rng)?
        }
    };
    Ok(RunResult {
        treatment,
        seed,
        selected: outcome.selected,
        sim_fitness: covered_distance(&simulate(outcome.selected, cfg))?,
        real_fitness: outcome.real_fitness,
        real_evals_used: lab.budget().used,
        max_real_evals: lab.budget().max_real_evals,
        validation_evals: lab.validations(),
        transfers: Vec::new(),
    })
}

fn argmax_first(population: &[Individual]) -> Result<&Individual> {
    let mut best: Option<&Individual> = None;
    for ind in population {
        if best.is_none_or(|b| ind.objectives[0] > b.objectives[0]) {
            best = Some(ind);
        }
    }
    best.ok_or(Error::EmptyPopulation)
}

/// Single-objective run of the evolutionary core on any scalar objective.
fn maximize<F>(evo: &EvolutionConfig, objective: F, rng: &mut Rng) -> Result<ControlParams>
where
    F: Fn(ControlParams) -> Result<f64>,
{
    let mut eval = |p| objective(p).map(|v| vec![v]);
    let mut population = initial_population(evo, &mut eval, rng)?;
    for _ in 0..evo.generations {
        population = evolve_generation(population, &mut eval, evo, rng)?;
    }
    Ok(argmax_first(&population)?.genotype)
}

fn optimize_in_sim(
    cfg: &TestbedConfig,
    evo: &EvolutionConfig,
    rng: &mut Rng,
) -> Result<ControlParams> {
    maximize(evo, |p| covered_distance(&simulate(p, cfg)), rng)
}

/// Generational EA on the real evaluator: population 4, 5 generations, the
/// best measured individual is carried over and measured again.
fn direct_reality(lab: &mut RealLab<'_>, evo: &EvolutionConfig, rng: &mut Rng) -> Result<Outcome> {
    let cfg = EvolutionConfig {
        population_size: DIRECT_POPULATION,
        ..evo.clone()
    };
    let generations = DIRECT_REALITY_EVALS / DIRECT_POPULATION;
    let mut best: Option<Outcome> = None;
    let measure = |lab: &mut RealLab<'_>,
                   g: ControlParams,
                   best: &mut Option<Outcome>|
     -> Result<Individual> {
        let (traj, _) = lab.trial(g)?;
        let fitness = covered_distance(&traj)?;
        if best.as_ref().is_none_or(|b| fitness > b.real_fitness) {
            *best = Some(Outcome {
                selected: g,
                real_fitness: fitness,
            });
        }
        Ok(Individual::new(g, vec![fitness]))
    };

    let mut population = (0..DIRECT_POPULATION)
        .map(|_| {
            use rand::Rng as _;
            let g = ControlParams::clamped(rng.random(), rng.random());
            measure(lab, g, &mut best)
        })
        .collect::<Result<Vec<_>>>()?;
    for _ in 1..generations {
        assign_rank_and_crowding(&mut population)?;
        let elite = argmax_first(&population)?.genotype;
        let offspring = make_offspring(&population, &cfg, rng);
        let next: Vec<ControlParams> = std::iter::once(elite)
            .chain(offspring.into_iter().take(DIRECT_POPULATION - 1))
            .collect();
        population = next
            .into_iter()
            .map(|g| measure(lab, g, &mut best))
            .collect::<Result<Vec<_>>>()?;
    }
    best.ok_or(Error::EmptyPopulation)
}

/// (1+1) hill climbing on the real evaluator starting from `start`.
fn hill_climb(lab: &mut RealLab<'_>, start: ControlParams, rng: &mut Rng) -> Result<Outcome> {
    let step = Normal::new(0.0, LOCAL_STEP_SD).map_err(|e| Error::Config(e.to_string()))?;
    let (traj, _) = lab.trial(start)?;
    let mut incumbent = Outcome {
        selected: start,
        real_fitness: covered_distance(&traj)?,
    };
    for _ in 0..LOCAL_SEARCH_STEPS {
        let [p1, p2] = incumbent.selected.as_array();
        let candidate = ControlParams::clamped(p1 + step.sample(rng), p2 + step.sample(rng));
        let (traj, _) = lab.trial(candidate)?;
        let fitness = covered_distance(&traj)?;
        if fitness > incumbent.real_fitness {
            incumbent = Outcome {
                selected: candidate,
                real_fitness: fitness,
            };
        }
    }
    Ok(incumbent)
}

enum Surrogate {
    Idw(IdwModel),
    Kriging(KrigingModel),
}

impl Surrogate {
    fn fit(kind: BaselineKind, samples: &[Sample]) -> Result<Self> {
        Ok(match kind {
            BaselineKind::SurrogateKriging => {
                Surrogate::Kriging(KrigingModel::fit_default(samples)?)
            }
            _ => Surrogate::Idw(IdwModel::with_default_power(samples.to_vec())?),
        })
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        match self {
            Surrogate::Idw(m) => m.predict(x),
            Surrogate::Kriging(m) => m.predict(x),
        }
    }
}

/// Surrogate-assisted search: model real fitness over genotype space,
/// optimize the model in silico, test its optimum for real, repeat.
fn surrogate(
    kind: BaselineKind,
    lab: &mut RealLab<'_>,
    evo: &EvolutionConfig,
    rng: &mut Rng,
) -> Result<Outcome> {
    if lab.remaining() < SURROGATE_INITIAL_DESIGN.len() {
        return Err(Error::Config(format!(
            "surrogate baselines need a budget of at least {}",
            SURROGATE_INITIAL_DESIGN.len()
        )));
    }
    let mut samples = Vec::new();
    let mut best: Option<Outcome> = None;
    let mut record =
        |lab: &mut RealLab<'_>, g: ControlParams, samples: &mut Vec<Sample>| -> Result<()> {
            let (traj, _) = lab.trial(g)?;
            let fitness = covered_distance(&traj)?;
            samples.push(Sample::new(g.as_array().to_vec(), fitness));
            if best.as_ref().is_none_or(|b| fitness > b.real_fitness) {
                best = Some(Outcome {
                    selected: g,
                    real_fitness: fitness,
                });
            }
            Ok(())
        };
    for [p1, p2] in SURROGATE_INITIAL_DESIGN {
        record(lab, ControlParams::new(p1, p2)?, &mut samples)?;
    }
    while lab.remaining() > 0 {
        let model = Surrogate::fit(kind, &samples)?;
        let next = maximize(evo, |p| model.predict(&p.as_array()), rng)?;
        record(lab, next, &mut samples)?;
    }
    best.ok_or(Error::EmptyPopulation)
}
