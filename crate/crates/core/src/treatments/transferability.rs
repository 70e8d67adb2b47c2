use crate::behavior::{extract_descriptors, BehaviorDescriptor, TransferabilityScore};
use crate::controller::ControlParams;
use crate::error::{Error, Result};
use crate::moea::{evolve_generation, initial_population, reevaluate, Individual};
use crate::regression::{IdwModel, Normalization, Regressor, Sample};
use crate::seed::EvalSeed;
use crate::testbed::{covered_distance, simulate, TestbedConfig};

use super::{RealLab, RunResult, RunSettings, TransferRecord, Treatment, SEARCH_STREAM};

fn sim_descriptor(p: ControlParams, cfg: &TestbedConfig) -> Result<BehaviorDescriptor> {
    extract_descriptors(&simulate(p, cfg))
}

/// Objectives: simulated covered distance and predicted transferability.
fn objectives(p: ControlParams, cfg: &TestbedConfig, model: &IdwModel) -> Result<Vec<f64>> {
    let d = sim_descriptor(p, cfg)?;
    Ok(vec![d.covered_distance, model.predict(&d.to_vec())?])
}

fn transfer(
    lab: &mut RealLab<'_>,
    settings: &RunSettings,
    genotype: ControlParams,
    generation: usize,
) -> Result<TransferRecord> {
    let sim = simulate(genotype, &settings.testbed);
    let (real, seed) = lab.trial(genotype)?;
    let disparity = settings.measure.disparity(&sim, &real)?;
    Ok(TransferRecord {
        genotype,
        sim_descriptor: extract_descriptors(&sim)?,
        real_fitness: covered_distance(&real)?,
        score: TransferabilityScore::new(disparity, settings.score_reference)?,
        generation,
        seed,
    })
}

fn sample_of(record: &TransferRecord) -> Sample {
    Sample::new(record.sim_descriptor.to_vec(), record.score.score)
}

/// Multi-objective search on (sim fitness, learned transferability) with
/// periodic real-world transfers of the most novel population member.
pub fn run_transferability(settings: &RunSettings, seed: u64) -> Result<RunResult> {
    settings.validate()?;
    if settings.budget < 2 {
        return Err(Error::Config(format!(
            "transferability needs a budget of at least 2, got {}",
            settings.budget
        )));
    }
    let cfg = &settings.testbed;
    let evo = &settings.evolution;
    let mut lab = RealLab::new(
        cfg,
        seed,
        Treatment::Transferability.real_eval_cap(settings.budget),
    );
    let mut rng = EvalSeed::new(seed, SEARCH_STREAM).rng();

    let mut transfers = vec![transfer(&mut lab, settings, ControlParams::center(), 0)?];
    let mut model = IdwModel::with_default_power(transfers.iter().map(sample_of).collect())?;

    let mut population = initial_population(evo, &mut |p| objectives(p, cfg, &model), &mut rng)?;
    for generation in 1..=evo.generations {
        population = evolve_generation(
            population,
            &mut |p| objectives(p, cfg, &model),
            evo,
            &mut rng,
        )?;
        if generation % settings.transfer_interval == 0 && lab.remaining() > 0 {
            let descriptors = population
                .iter()
                .map(|ind| sim_descriptor(ind.genotype, cfg))
                .collect::<Result<Vec<_>>>()?;
            let pick = select_transfer_candidate(&descriptors, &transfers, model.normalization())?;
            let record = transfer(&mut lab, settings, population[pick].genotype, generation)?;
            model = model.with_sample(sample_of(&record))?;
            transfers.push(record);
            reevaluate(&mut population, &mut |p| objectives(p, cfg, &model))?;
        }
        debug_assert_eq!(model.len(), transfers.len());
    }

    let chosen = select_final_solution(&population, settings.tau)?;
    let selected = population[chosen].genotype;
    let validation = lab.validate(selected)?;
    Ok(RunResult {
        treatment: Treatment::Transferability,
        seed,
        selected,
        sim_fitness: covered_distance(&simulate(selected, cfg))?,
        real_fitness: covered_distance(&validation)?,
        real_evals_used: lab.budget().used,
        max_real_evals: lab.budget().max_real_evals,
        validation_evals: lab.validations(),
        transfers,
    })
}

/// Index of the population member whose descriptor is farthest (max-min
/// normalized distance) from every transferred record. Without records,
/// the member farthest from the population centroid. Ties go to the
/// lowest index.
pub fn select_transfer_candidate(
    population: &[BehaviorDescriptor],
    transferred: &[TransferRecord],
    normalization: &Normalization,
) -> Result<usize> {
    if population.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let points: Vec<Vec<f64>> = population.iter().map(BehaviorDescriptor::to_vec).collect();
    let references: Vec<Vec<f64>> = if transferred.is_empty() {
        let dim = points[0].len();
        let mut centroid = vec![0.0; dim];
        for p in &points {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / points.len() as f64;
            }
        }
        vec![centroid]
    } else {
        transferred
            .iter()
            .map(|r| r.sim_descriptor.to_vec())
            .collect()
    };
    let mut best = (0, f64::NEG_INFINITY);
    for (i, p) in points.iter().enumerate() {
        let nearest = references
            .iter()
            .map(|r| normalization.distance(p, r))
            .fold(f64::INFINITY, f64::min);
        if nearest > best.1 {
            best = (i, nearest);
        }
    }
    Ok(best.0)
}

/// Best simulated fitness among members whose predicted score reaches
/// `tau`; if none does, the best predicted score. Objectives are
/// `[sim fitness, predicted score]`.
pub fn select_final_solution(population: &[Individual], tau: f64) -> Result<usize> {
    if population.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let argmax = |key: &dyn Fn(&Individual) -> Option<f64>| {
        let mut best: Option<(usize, f64)> = None;
        for (i, ind) in population.iter().enumerate() {
            if let Some(v) = key(ind) {
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((i, v));
                }
            }
        }
        best.map(|(i, _)| i)
    };
    let feasible = argmax(&|ind| (ind.objectives[1] >= tau).then_some(ind.objectives[0]));
    Ok(feasible.unwrap_or_else(|| argmax(&|ind| Some(ind.objectives[1])).unwrap_or(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::DisparityMeasure;

    fn desc(d: f64, h: f64, th: f64) -> BehaviorDescriptor {
        BehaviorDescriptor {
            covered_distance: d,
            avg_height: h,
            final_heading: th,
        }
    }

    fn record_at(d: BehaviorDescriptor) -> TransferRecord {
        TransferRecord {
            genotype: ControlParams::center(),
            sim_descriptor: d,
            real_fitness: 0.0,
            score: TransferabilityScore::new(0.0, 1.0).unwrap(),
            generation: 0,
            seed: EvalSeed::new(0, 0),
        }
    }

    fn ind(fitness: f64, score: f64) -> Individual {
        Individual::new(ControlParams::center(), vec![fitness, score])
    }

    #[test]
    fn candidate_is_farthest_from_transfers() {
        let norm = Normalization::identity(3);
        let records = [record_at(desc(0.0, 0.0, 0.0))];
        let pop = [desc(1.0, 0.0, 0.0), desc(0.0, 3.0, 0.0)];
        assert_eq!(select_transfer_candidate(&pop, &records, &norm).unwrap(), 1);
    }

    #[test]
    fn candidate_ties_pick_lowest_index() {
        let norm = Normalization::identity(3);
        let records = [record_at(desc(0.0, 0.0, 0.0))];
        let pop = [desc(5.0, 1.0, 0.0); 4];
        assert_eq!(select_transfer_candidate(&pop, &records, &norm).unwrap(), 0);
    }

    #[test]
    fn candidate_without_transfers_uses_centroid() {
        let norm = Normalization::identity(3);
        let pop = [
            desc(1.0, 0.0, 0.0),
            desc(2.0, 0.0, 0.0),
            desc(9.0, 0.0, 0.0),
        ];
        assert_eq!(select_transfer_candidate(&pop, &[], &norm).unwrap(), 2);
        assert!(matches!(
            select_transfer_candidate(&[], &[], &norm),
            Err(Error::EmptyPopulation)
        ));
    }

    #[test]
    fn final_selection_rules() {
        let pop = [ind(1500.0, 0.1), ind(1200.0, 0.9), ind(1100.0, 0.95)];
        assert_eq!(select_final_solution(&pop, 0.8).unwrap(), 1);
        let low = [ind(1500.0, 0.1), ind(1200.0, 0.3), ind(1100.0, 0.2)];
        assert_eq!(select_final_solution(&low, 0.8).unwrap(), 1);
        assert_eq!(select_final_solution(&[ind(3.0, 0.0)], 0.8).unwrap(), 0);
        assert!(matches!(
            select_final_solution(&[], 0.8),
            Err(Error::EmptyPopulation)
        ));
    }

    fn quick_settings() -> RunSettings {
        let mut s = RunSettings::default();
        s.evolution.generations = 60;
        s
    }

    #[test]
    fn budget_and_schedule() {
        let s = quick_settings();
        let r = run_transferability(&s, 3).unwrap();
        // 1 initial transfer + one every 20 generations over 60.
        assert_eq!(r.real_evals_used, 4);
        assert_eq!(r.validation_evals, 1);
        let gens: Vec<_> = r.transfers.iter().map(|t| t.generation).collect();
        assert_eq!(gens, vec![0, 20, 40, 60]);
        assert_eq!(r.transfers[0].genotype, ControlParams::center());
    }

    #[test]
    fn budget_caps_transfers() {
        let mut s = quick_settings();
        s.budget = 2;
        let r = run_transferability(&s, 3).unwrap();
        assert_eq!(r.real_evals_used, 2);
        assert_eq!(r.transfers.len(), 2);
        s.budget = 1;
        assert!(run_transferability(&s, 3).is_err());
    }

    #[test]
    fn scores_match_disparities() {
        let mut s = quick_settings();
        s.measure = DisparityMeasure::Fitness;
        s.score_reference = 300.0;
        let r = run_transferability(&s, 11).unwrap();
        for t in &r.transfers {
            let expected = 1.0 / (1.0 + t.score.disparity / 300.0);
            assert!((t.score.score - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn same_seed_same_result() {
        let s = quick_settings();
        assert_eq!(
            run_transferability(&s, 21).unwrap(),
            run_transferability(&s, 21).unwrap()
        );
    }
}
