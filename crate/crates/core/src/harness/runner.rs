use std::io::Write;
use std::time::Instant;

use log::info;
use rand::seq::index::sample;
use rayon::prelude::*;

use crate::build::Algo;
use crate::edge_list::read_edge_list;
use crate::generators::{gen_gnp, gen_random_regular};
use crate::graph::Graph;
use crate::ist::verify_independent;
use crate::pseudo::spectral_profile;
use crate::rng::{derive_seed, SeededRng};

use super::config::{AlgoChoice, Cell, ExperimentConfig, KPolicy, Model};
use super::record::ExperimentRecord;
use super::HarnessError;

const ROOT_STREAM: u64 = 0x726f_6f74;

/// The `auto` rule: pseudorandom for regular graphs with `d / lambda >= 4`,
/// dense when the density reaches `min(ln^2 n / sqrt n, 0.05)`, sparse
/// otherwise.
pub fn auto_algo(g: &Graph) -> Algo {
    if g.regular_degree().is_some_and(|d| d > 0) && spectral_profile(g).ratio >= 4.0 {
        return Algo::Pseudo;
    }
    let n = g.n() as f64;
    let threshold = (n.ln().powi(2) / n.sqrt()).min(0.05);
    if g.density() >= threshold {
        Algo::Dense
    } else {
        Algo::Sparse
    }
}

/// Fraction of records that were built and verified.
pub fn success_rate(records: &[ExperimentRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.verified).count() as f64 / records.len() as f64
}

struct Job {
    first_run: usize,
    cell: Cell,
    seed: u64,
}

/// Runs the experiment and writes the CSV to `cfg.output` (required).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, HarnessError> {
    let path = cfg
        .output
        .as_ref()
        .ok_or_else(|| HarnessError::Config("no output path".into()))?;
    let file = std::fs::File::create(path)?;
    run_experiment_to(cfg, std::io::BufWriter::new(file))
}

/// Runs every `(cell, seed, root)` trial and writes one CSV row per trial in
/// run order. Rows are flushed after every batch of graphs, so an interrupted
/// run leaves a valid prefix.
pub fn run_experiment_to<W: Write>(
    cfg: &ExperimentConfig,
    out: W,
) -> Result<Vec<ExperimentRecord>, HarnessError> {
    cfg.validate()?;
    let file_graph = match cfg.model {
        Model::File => Some(read_edge_list(cfg.graph_file.as_ref().expect("validated"))?),
        _ => None,
    };
    let mut jobs = Vec::new();
    for (c, &cell) in cfg.cells().iter().enumerate() {
        for s in 0..cfg.seeds_per_cell {
            jobs.push(Job {
                first_run: jobs.len() * cfg.roots_per_graph,
                cell,
                seed: derive_seed(cfg.base_seed, ((c as u64) << 32) | s as u64),
            });
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let mut writer = csv::Writer::from_writer(out);
    let mut all = Vec::with_capacity(jobs.len() * cfg.roots_per_graph);
    for batch in jobs.chunks(cfg.workers) {
        let results: Vec<Result<Vec<ExperimentRecord>, HarnessError>> = pool.install(|| {
            batch
                .par_iter()
                .map(|job| run_job(cfg, job, file_graph.as_ref()))
                .collect()
        });
        for records in results {
            for r in records? {
                r.check().map_err(|message| HarnessError::Record {
                    run_id: r.run_id,
                    message,
                })?;
                writer.serialize(&r)?;
                all.push(r);
            }
        }
        writer.flush()?;
        info!("{} / {} trials done", all.len(), jobs.len() * cfg.roots_per_graph);
    }
    if all.is_empty() {
        writer.write_record(super::CSV_HEADER.split(','))?;
    }
    writer.flush()?;
    Ok(all)
}

fn run_job(
    cfg: &ExperimentConfig,
    job: &Job,
    file_graph: Option<&Graph>,
) -> Result<Vec<ExperimentRecord>, HarnessError> {
    let mut graph_rng = SeededRng::new(job.seed);
    let owned;
    let (g, p_or_d) = match job.cell {
        Cell::Gnp { n, p } => {
            owned = gen_gnp(n, p, &mut graph_rng)?;
            (&owned, p)
        }
        Cell::Regular { n, d } => {
            owned = gen_random_regular(n, d, &mut graph_rng)?;
            (&owned, d as f64)
        }
        Cell::File => {
            let g = file_graph.expect("file graph loaded");
            (g, g.density())
        }
    };
    let algo = match cfg.algo {
        AlgoChoice::Dense => Algo::Dense,
        AlgoChoice::Sparse => Algo::Sparse,
        AlgoChoice::Pseudo => Algo::Pseudo,
        AlgoChoice::Auto => auto_algo(g),
    };
    let delta = g.min_degree();
    let k = match cfg.k_policy {
        KPolicy::Delta => delta,
        KPolicy::Fixed(k) => k,
        KPolicy::Epsilon => cfg.pseudo.target_k(delta),
    };
    let roots_rng = &mut SeededRng::new(job.seed).fork(ROOT_STREAM);
    let mut roots = sample(roots_rng, g.n(), cfg.roots_per_graph.min(g.n())).into_vec();
    roots.sort_unstable();
    let mut records = Vec::with_capacity(roots.len());
    for (j, &root) in roots.iter().enumerate() {
        let start = Instant::now();
        let mut rng = SeededRng::new(job.seed).fork(root as u64 + 1);
        let result = algo.build(g, root, k, &cfg.sparse, &cfg.pseudo, &mut rng);
        let (built, verified, fail_stage, certificate_valid) = match result {
            Ok(outcome) => {
                let verified = outcome
                    .assemble(g)
                    .map(|fam| verify_independent(g, &fam).passed())
                    .unwrap_or(false);
                (true, verified, None, None)
            }
            Err(e) => (false, false, Some(e.stage()), Some(e.validate(g))),
        };
        records.push(ExperimentRecord {
            run_id: job.first_run + j,
            algo,
            n: g.n(),
            p_or_d,
            seed: job.seed,
            root,
            k_target: k,
            built,
            verified,
            fail_stage,
            elapsed_ms: if cfg.record_elapsed {
                start.elapsed().as_millis() as u64
            } else {
                0
            },
            delta_g: delta,
            kappa_lower_bound_certified: if verified { k } else { 0 },
            certificate_valid,
        });
    }
    Ok(records)
}
