//! Executing jobs.

use std::sync::Arc;
use std::time::Instant;

use parcohom_core::cohom::{build_cohomology, CohomPresentation};
use parcohom_core::coeff::{CoeffModule, SymPower};
use parcohom_core::fflin::{Matrix, PrimeField};
use parcohom_core::hecke::{
    algebra_closure, dimension_check, eigen_systems, euler_check, shapiro_hecke_check, twist_check, ActsOn,
    EigenSystem, FpAlgebra, HeckeEngine, HeckeOp,
};
use parcohom_core::modgrp::intmat::gcd;
use parcohom_core::modgrp::GroupTag;
use parcohom_core::wt1::{
    eigenspace_structure_check, sturm_bound, weight_one_algebra, weight_one_with_character, SturmKind,
    WeightOneOptions, WeightOneResult,
};

use crate::cache::{cache_key, version, Cache};
use crate::error::CliError;
use crate::job::{Command, JobSpec, Suite};
use crate::payload::{AlgebraPayload, MatrixPayload, OperatorPayload, Payload, ResultEnvelope, Timings, VerifyPayload};

/// Runs a job, consulting the cache when one is configured.
pub fn run(job: &JobSpec) -> Result<ResultEnvelope, CliError> {
    job.validate()?;
    let key = cache_key(job);
    let cache = match Cache::locate(job.cache.as_deref()) {
        Some(dir) => Some(Cache::open(dir)?),
        None => None,
    };
    if let Some(c) = &cache {
        if let Some(mut env) = c.load(&key)? {
            env.from_cache = true;
            env.job = job.clone();
            return Ok(env);
        }
    }
    let mut provenance = Vec::new();
    let start = Instant::now();
    let payload = compute(job, &mut provenance)?;
    let env = ResultEnvelope {
        job: job.clone(),
        version: version().to_string(),
        cache_key: key.clone(),
        from_cache: false,
        timings: Timings {
            compute_seconds: start.elapsed().as_secs_f64(),
        },
        payload,
        provenance,
    };
    if let Some(c) = &cache {
        c.store(&key, &env)?;
    }
    Ok(env)
}

pub fn compute(job: &JobSpec, prov: &mut Vec<String>) -> Result<Payload, CliError> {
    match job.command {
        Command::Cohomology => {
            let pres = presentation(job)?;
            prov.push("boundary and cusp maps built from the coset table".into());
            Ok(Payload::Cohomology {
                group: job.group,
                module: pres.module().spec().label(),
                index: pres.table().len(),
                dim_coinduced: pres.space().dim(),
                dim_h1: pres.dim_h1(),
                dim_par: pres.dim_par(),
                cusp_quotient_dim: pres.cusp_quotient_dim(),
                coinvariant_dim: pres.coinvariant_dim(),
            })
        }
        Command::HeckeMatrix => {
            let pres = presentation(job)?;
            let mut e = HeckeEngine::new(&pres);
            let mut operators = Vec::new();
            for &n in &job.ops {
                operators.push(operator(&e.t(n)?));
            }
            if let Some(d) = job.diamond {
                operators.push(operator(e.diamond(d)?));
            }
            prov.push("each operator preserves the parabolic subspace".into());
            Ok(Payload::HeckeMatrix { operators })
        }
        Command::HeckeAlgebra => {
            let pres = presentation(job)?;
            let bound = algebra_bound(job)?;
            let (alg, beyond) = algebra(&pres, job, job.acts_on, bound)?;
            prov.push(format!("algebra generated by T_1..T_{bound}"));
            Ok(Payload::HeckeAlgebra(AlgebraPayload {
                acts_on: job.acts_on,
                ambient_dim: alg.ambient_dim(),
                bound,
                dim: alg.dim(),
                generators: alg.labels().to_vec(),
                closed_commutative: alg.check_closed_commutative(),
                generators_commute: alg.generators_commute(),
                beyond_bound: beyond,
                identity: alg.identity_coordinates().to_vec(),
            }))
        }
        Command::EigenSystems => {
            let pres = presentation(job)?;
            let bound = algebra_bound(job)?;
            let (par, _) = algebra(&pres, job, ActsOn::Parabolic, bound)?;
            let (full, _) = algebra(&pres, job, ActsOn::Full, bound)?;
            let parabolic = eigen_systems(&par, bound, job.seed)?;
            let full = eigen_systems(&full, bound, job.seed)?;
            let mut full_only: Vec<EigenSystem> = Vec::new();
            for s in &full {
                let mut seen = false;
                for t in &parabolic {
                    if s.conjugate_to(t)? {
                        seen = true;
                        break;
                    }
                }
                if !seen {
                    full_only.push(s.clone());
                }
            }
            prov.push("systems on the full cohomology compared with the parabolic ones up to Frobenius".into());
            Ok(Payload::EigenSystems {
                bound,
                parabolic,
                full,
                full_only,
            })
        }
        Command::WeightOne => {
            let res = weight_one(job)?;
            prov.push(format!("operator bound {}, output bound {}", res.operator_bound, res.output_bound));
            Ok(Payload::WeightOne(Box::new(res)))
        }
        Command::Verify => verify(job, prov).map(Payload::Verify),
    }
}

fn verify(job: &JobSpec, prov: &mut Vec<String>) -> Result<VerifyPayload, CliError> {
    let f = PrimeField::new(job.prime)?;
    Ok(match job.suite.expect("validated") {
        Suite::Shapiro => {
            let m = job.modulus.expect("validated");
            let n = job.ops.first().copied().unwrap_or(2);
            let d = job.diamond.unwrap_or_else(|| least_coprime(job.level));
            let mult = job.mult.unwrap_or_else(|| least_coprime(m));
            prov.push(format!("T_{n}, <{d}>_N and <{mult}>_M compared across Shapiro"));
            VerifyPayload::Shapiro(shapiro_hecke_check(job.level, m, sym(job.weight, f), n, d, mult)?)
        }
        Suite::Euler => {
            let pres = presentation(job)?;
            prov.push("T_4, T_6 from their own coset lists against the recursion".into());
            VerifyPayload::Euler(euler_check(&pres)?)
        }
        Suite::Twist => {
            let primes = if job.primes.is_empty() { vec![2, 3] } else { job.primes.clone() };
            let ds: Vec<u32> = match job.twist {
                Some(d) => vec![d],
                None => (1..job.prime as u32).collect(),
            };
            prov.push(format!("characteristic polynomials of T_l for l in {primes:?}"));
            let mut reports = Vec::new();
            for d in ds {
                reports.push(twist_check(job.level, job.prime, d, &primes)?);
            }
            VerifyPayload::Twist { reports }
        }
        Suite::EigenspaceStructure => {
            let res = weight_one(job)?;
            prov.push("eigenspace dimensions in the ordinary weight-p cohomology".into());
            VerifyPayload::EigenspaceStructure {
                report: eigenspace_structure_check(&res),
                result: Box::new(res),
            }
        }
        Suite::Dimension => {
            prov.push("genus and cusp count from the coset permutations".into());
            VerifyPayload::Dimension(dimension_check(job.group, job.level, job.weight, job.prime)?)
        }
    })
}

fn least_coprime(m: u64) -> u64 {
    (2..).find(|&x| gcd(x as i128, m as i128) == 1).expect("some integer is coprime")
}

fn sym(weight: u32, f: PrimeField) -> Arc<dyn CoeffModule> {
    Arc::new(SymPower::new(weight - 2, f))
}

fn presentation(job: &JobSpec) -> Result<CohomPresentation, CliError> {
    let f = PrimeField::new(job.prime)?;
    Ok(build_cohomology(job.group, job.level, sym(job.weight, f))?)
}

fn operator(op: &HeckeOp) -> OperatorPayload {
    OperatorPayload {
        n: op.n,
        kind: op.kind,
        full: MatrixPayload::new(&op.matrix),
        parabolic: MatrixPayload::new(&op.par_matrix),
    }
}

/// `--bound`, or the operator count of the relevant bound in weight `k`.
fn algebra_bound(job: &JobSpec) -> Result<u64, CliError> {
    if let Some(b) = job.bound {
        return Ok(b);
    }
    let kind = match job.group {
        GroupTag::Gamma1 => SturmKind::WithoutCharacter,
        GroupTag::Gamma0 => SturmKind::WithCharacter,
    };
    Ok(sturm_bound(job.level, kind)?.operator_count(job.weight as u64))
}

type Beyond = Vec<(u64, bool)>;

fn algebra(
    pres: &CohomPresentation,
    job: &JobSpec,
    on: ActsOn,
    bound: u64,
) -> Result<(FpAlgebra<PrimeField>, Beyond), CliError> {
    let pick = |op: &HeckeOp| -> Matrix<PrimeField> {
        match on {
            ActsOn::Full => op.matrix.clone(),
            ActsOn::Parabolic => op.par_matrix.clone(),
        }
    };
    let mut e = HeckeEngine::new(pres);
    let mut ops = Vec::new();
    for n in 1..=bound {
        ops.push((n, pick(&e.t(n)?)));
    }
    let alg = algebra_closure(&ops, job.seed)?;
    let mut beyond = Vec::new();
    for n in bound + 1..=bound + 3 {
        beyond.push((n, alg.contains(&pick(&e.t(n)?))));
    }
    Ok((alg, beyond))
}

fn weight_one(job: &JobSpec) -> Result<WeightOneResult, CliError> {
    let opts = WeightOneOptions {
        operator_bound: job.bound,
        extra_operators: 0,
        output_bound: job.output_bound,
        seed: job.seed,
    };
    Ok(match job.character_data()? {
        Some(chi) => weight_one_with_character(job.level, job.prime, &chi, &opts)?,
        None => weight_one_algebra(job.level, job.prime, &opts)?,
    })
}

/// Serializes an envelope, with the timing zeroed when `stable` is set.
pub fn to_json(env: &ResultEnvelope, stable: bool) -> Result<String, CliError> {
    let mut e = env.clone();
    if stable {
        e.timings.compute_seconds = 0.0;
    }
    Ok(serde_json::to_string_pretty(&e)?)
}
