//! Batch command line: graph construction, word sampling, proving,
//! verification, soundness simulation, and parameter reports.
//!
//! Exit codes: 0 success/accept, 1 verification reject, 2 usage or
//! malformed input.

use clap::{Parser, Subcommand};
use flowering::analysis::{case_study, comparison_report, soundness_bound};
use flowering::code::{GraphCode, RsCode};
use flowering::field::PrimeField;
use flowering::fold::invalid_vertex_fraction;
use flowering::group::{
    build_blossoming, build_cayley, decomposition_schedule, graph_diameter, AlternatingGroup,
    BlossomingSequence, BooleanVectorGroup, Cayley, FiniteGroup, GeneratorSet,
};
use flowering::io::{
    parse_metadata, parse_rim, parse_word, write_metadata, write_rim, write_word, GraphMetadata,
};
use flowering::lps::lps_graph;
use flowering::protocol::{
    prove, simulate_soundness, verify, AdversaryStrategy, ProtocolError, ProtocolParams,
};
use flowering::rim::{EdgeWord, Rim, WeightFn};
use flowering::wire::{deserialize_proof, serialize_proof};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "flowering",
    version,
    about = "Proximity testing for codes on the edges of Cayley graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a graph family; writes the graph file and a metadata sidecar.
    Graph {
        /// Family: a4 | z2r | lps
        family: String,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        rank: Option<usize>,
        /// Comma-separated base-generator indices, one per round.
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample a random codeword of the graph code into a word file.
    Word {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Produce a non-interactive proof for a word file.
    Prove {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        reps: usize,
        #[arg(long = "edges-per-check")]
        edges_per_check: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a proof file against a graph bundle.
    Verify {
        #[arg(long)]
        proof: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Monte-Carlo acceptance rate of an adversary in the interactive mode.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 101)]
        modulus: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        reps: usize,
        /// Defaults to the full arity (mu = 1).
        #[arg(long = "edges-per-check")]
        edges_per_check: Option<usize>,
        /// Strategy: honest-fold | codeword
        #[arg(long, default_value = "honest-fold")]
        strategy: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corrupt edges until this fraction of vertices is invalid.
        #[arg(long, default_value_t = 0.3)]
        corrupt_fraction: f64,
    },
    /// Closed-form complexity/soundness report, optionally with the
    /// Ramanujan-family case study.
    Params {
        #[arg(long = "N")]
        code_length: u64,
        #[arg(long = "K")]
        code_dimension: u64,
        #[arg(long)]
        security: u32,
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = 6)]
        arity: usize,
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
        #[arg(long, default_value_t = 128)]
        reps: u32,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        /// Base-code dimension for the case study.
        #[arg(long)]
        rs_k: Option<usize>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Graph { family, p, q, rank, schedule, out } => {
            let schedule = schedule.map(|s| parse_schedule(&s)).transpose()?;
            let built = build_family(&family, p, q, rank, schedule)?;
            std::fs::write(&out, write_rim(&built.blossoming.base))
                .map_err(|e| format!("writing {}: {e}", out.display()))?;
            let meta_path = sidecar(&out);
            std::fs::write(&meta_path, &built.metadata)
                .map_err(|e| format!("writing {}: {e}", meta_path.display()))?;
            println!(
                "graph {} vertices={} arity={} edges={} rounds={}",
                family,
                built.blossoming.base.vertex_count(),
                built.blossoming.base.arity(),
                built.blossoming.base.edge_count(),
                built.blossoming.round_count()
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Word { graph, modulus, k, seed, out } => {
            let bundle = load_bundle(&graph)?;
            let field = PrimeField::new(modulus).map_err(|e| e.to_string())?;
            let base = RsCode::new(field.clone(), bundle.blossoming.base.arity(), k)
                .map_err(|e| e.to_string())?;
            let mut gc =
                GraphCode::new(bundle.blossoming.base.clone(), base).map_err(|e| e.to_string())?;
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let word = gc.sample_codeword(&mut rng);
            std::fs::write(&out, write_word(&field, &word))
                .map_err(|e| format!("writing {}: {e}", out.display()))?;
            println!("word edges={} modulus={}", word.values.len(), modulus);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Prove { graph, word, k, reps, edges_per_check, out } => {
            let bundle = load_bundle(&graph)?;
            let bytes =
                std::fs::read(&word).map_err(|e| format!("reading {}: {e}", word.display()))?;
            let (field, values) = parse_word(&bytes).map_err(|e| e.to_string())?;
            let f0 = EdgeWord::from_values(&bundle.blossoming.base, values)
                .map_err(|e| e.to_string())?;
            let params = ProtocolParams::new(bundle.blossoming, field, k, reps, edges_per_check)
                .map_err(|e| e.to_string())?;
            let (proof, counters) = prove(&params, &f0).map_err(|e| e.to_string())?;
            std::fs::write(&out, serialize_proof(&proof))
                .map_err(|e| format!("writing {}: {e}", out.display()))?;
            println!(
                "proof rounds={} queries={} proof_field_elements={} prover_ops={}",
                counters.rounds,
                counters.oracle_queries,
                counters.proof_field_elements,
                counters.prover_field_ops
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { proof, graph } => {
            let bundle = load_bundle(&graph)?;
            let bytes =
                std::fs::read(&proof).map_err(|e| format!("reading {}: {e}", proof.display()))?;
            let parsed = deserialize_proof(&bytes).map_err(|e| e.to_string())?;
            let field = PrimeField::new(parsed.modulus).map_err(|e| e.to_string())?;
            let params = ProtocolParams::new(
                bundle.blossoming,
                field,
                parsed.k as usize,
                parsed.reps as usize,
                parsed.edges_per_check as usize,
            )
            .map_err(|e| e.to_string())?;
            match verify(&params, &parsed, None) {
                Ok(verdict) if verdict.accepted => {
                    println!(
                        "accept queries={} verifier_ops={}",
                        verdict.counters.oracle_queries, verdict.counters.verifier_field_ops
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Ok(verdict) => {
                    println!("reject {:?}", verdict.reason);
                    Ok(ExitCode::from(1))
                }
                Err(ProtocolError::MalformedProof(m)) => Err(format!("malformed proof: {m}")),
                Err(e) => Err(e.to_string()),
            }
        }
        Cmd::Simulate {
            graph,
            modulus,
            k,
            reps,
            edges_per_check,
            strategy,
            trials,
            seed,
            corrupt_fraction,
        } => {
            let bundle = load_bundle(&graph)?;
            let field = PrimeField::new(modulus).map_err(|e| e.to_string())?;
            let n = bundle.blossoming.base.arity();
            let t = edges_per_check.unwrap_or(n);
            let strategy = match strategy.as_str() {
                "honest-fold" => AdversaryStrategy::HonestFold,
                "codeword" => AdversaryStrategy::FixedCodeword,
                other => return Err(format!("unknown strategy '{other}'")),
            };
            let base = RsCode::new(field.clone(), n, k).map_err(|e| e.to_string())?;
            let graph_rim = bundle.blossoming.base.clone();
            let mut gc =
                GraphCode::new(graph_rim.clone(), base.clone()).map_err(|e| e.to_string())?;
            let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x5eed);
            let mut f0 = gc.sample_codeword(&mut rng);
            let w = WeightFn::uniform(&graph_rim);
            let mut delta = 0.0;
            for _ in 0..graph_rim.edge_count() * 8 {
                let frac = invalid_vertex_fraction(&base, &graph_rim, &f0, &w)
                    .map_err(|e| e.to_string())?;
                delta = rational_to_f64(&frac);
                if delta >= corrupt_fraction {
                    break;
                }
                let e = rng.random_range(0..graph_rim.edge_count());
                f0.values[e] = field.sample_uniform(&mut rng);
            }
            let params = ProtocolParams::new(bundle.blossoming, field.clone(), k, reps, t)
                .map_err(|e| e.to_string())?;
            let est = simulate_soundness(&params, &f0, strategy, trials, seed)
                .map_err(|e| e.to_string())?;
            let bound = soundness_bound(
                &params.orders(),
                field.modulus() as f64,
                t as f64 / n as f64,
                reps as u32,
                delta,
            )
            .map_err(|e| e.to_string())?;
            println!("trials {}", est.trials);
            println!("accepted {}", est.accepted);
            println!("rate {:.6}", est.rate);
            println!("wilson99_halfwidth {:.6}", est.wilson99_halfwidth);
            println!("input_invalid_fraction {delta:.6}");
            println!("bound_epsilon {:.9}", bound.epsilon);
            println!("bound_commit {:.6}", bound.commit);
            println!("bound_query {:.6}", bound.query);
            println!("bound_total {:.6}", bound.total);
            println!("within_bound {}", est.rate <= bound.total + est.wilson99_halfwidth);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Params {
            code_length,
            code_dimension,
            security,
            kappa,
            arity,
            delta,
            reps,
            p,
            q,
            rs_k,
        } => {
            let report =
                comparison_report(code_length, code_dimension, security, kappa, arity, delta, reps)
                    .map_err(|e| e.to_string())?;
            println!(
                "comparison at N=2^{:.0} K=2^{:.0} security={} kappa={}",
                (code_length as f64).log2(),
                (code_dimension as f64).log2(),
                security,
                kappa
            );
            println!("{:<38} {:<28} {:<36} {:<28}", "quantity", "FRI", "STIR", "Flowering");
            for row in &report.rows {
                println!(
                    "{:<38} {:<28} {:<36} {:<28}",
                    row.quantity, row.fri, row.stir, row.flowering
                );
            }
            println!();
            println!("conventions: FRI/STIR thresholds print floor(log2) (\"requires more than\");");
            println!("the folding protocol prints ceil(log2), the smallest sufficient power of two;");
            println!("logs inside all closed forms are base 2.");
            println!();
            println!("fri_field_log2 {:.4}", report.fri_field_log2);
            println!("stir_field_log2 {:.4}", report.stir_field_log2);
            println!("flowering_field_log2 {:.4}", report.flowering_field_log2);
            println!("fri_threshold_exp {}", report.fri_threshold_exp);
            println!("stir_threshold_exp {}", report.stir_threshold_exp);
            println!("flowering_threshold_exp {}", report.flowering_threshold_exp);
            if let (Some(p), Some(q)) = (p, q) {
                let k = rs_k.unwrap_or((p as usize + 1) / 2 + 1);
                let cs = case_study(p, q, k).map_err(|e| e.to_string())?;
                println!();
                println!("case study p={} q={} k={}", cs.p, cs.q, cs.k);
                println!("group {}", if cs.special_group { "PSL2" } else { "PGL2" });
                println!("vertices {}", cs.vertices);
                println!("code_length {}", cs.code_length);
                println!("dimension_bound {}", cs.dimension_bound);
                println!("delta {:.6}", cs.delta);
                println!("lambda_tilde {:.6}", cs.lambda_tilde);
                println!("distance_bound {:.6}", cs.distance_bound);
                println!("diameter_bound {:.4}", cs.diameter_bound);
                println!("round_bound {}", cs.round_bound);
                println!("kappa_computed {:.4}", cs.kappa);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn rational_to_f64(r: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn parse_schedule(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| format!("bad schedule entry '{x}'")))
        .collect()
}

fn sidecar(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".meta");
    PathBuf::from(p)
}

struct Bundle {
    blossoming: BlossomingSequence,
    metadata: String,
}

fn describe_generators<G: FiniteGroup>(cayley: &Cayley<G>) -> Vec<String> {
    cayley
        .gens
        .base()
        .iter()
        .map(|g| {
            cayley.group.encode(g).iter().map(|b| format!("{b:02x}")).collect::<Vec<_>>().join("")
        })
        .collect()
}

fn resolved_schedule<G: FiniteGroup>(
    cayley: &Cayley<G>,
    requested: Option<Vec<usize>>,
) -> Result<Vec<usize>, String> {
    match requested {
        Some(s) => Ok(s),
        None => {
            let diam = graph_diameter(&cayley.rim).map_err(|e| e.to_string())?.max(1);
            Ok(decomposition_schedule(&cayley.gens, diam).iter().map(|s| s.gen_index).collect())
        }
    }
}

fn assemble<G: FiniteGroup>(
    family: &str,
    params: &[(&str, String)],
    cayley: Cayley<G>,
    schedule: Option<Vec<usize>>,
) -> Result<Bundle, String> {
    let schedule = resolved_schedule(&cayley, schedule)?;
    let generators = describe_generators(&cayley);
    let group_name = cayley.group.describe();
    let blossoming =
        build_blossoming(&cayley, Some(schedule.clone())).map_err(|e| e.to_string())?;
    let metadata = write_metadata(family, params, &group_name, &generators, &schedule);
    Ok(Bundle { blossoming, metadata })
}

fn build_family(
    family: &str,
    p: Option<u64>,
    q: Option<u64>,
    rank: Option<usize>,
    schedule: Option<Vec<usize>>,
) -> Result<Bundle, String> {
    match family {
        "a4" => {
            let (group, base) = AlternatingGroup::a4_base();
            let gens = GeneratorSet::new(&group, base).map_err(|e| e.to_string())?;
            let cayley = build_cayley(group, gens).map_err(|e| e.to_string())?;
            // the reference three-round chain unless overridden
            let schedule = schedule.or(Some(vec![0, 1, 0]));
            assemble("a4", &[], cayley, schedule)
        }
        "z2r" => {
            let rank = rank.ok_or("z2r requires --rank")?;
            let group = BooleanVectorGroup::new(rank);
            let basis = group.standard_basis();
            let gens = GeneratorSet::new(&group, basis).map_err(|e| e.to_string())?;
            let cayley = build_cayley(group, gens).map_err(|e| e.to_string())?;
            // the halving chain unless overridden
            let schedule = schedule.or_else(|| Some((0..rank).collect()));
            assemble("z2r", &[("rank", rank.to_string())], cayley, schedule)
        }
        "lps" => {
            let p = p.ok_or("lps requires --p")?;
            let q = q.ok_or("lps requires --q")?;
            let inst = lps_graph(p, q).map_err(|e| e.to_string())?;
            assemble("lps", &[("p", p.to_string()), ("q", q.to_string())], inst.cayley, schedule)
        }
        other => Err(format!("unknown family '{other}' (expected a4 | z2r | lps)")),
    }
}

fn bundle_from_metadata(meta: &GraphMetadata) -> Result<Bundle, String> {
    let schedule = Some(meta.schedule.clone());
    match meta.family.as_str() {
        "a4" => build_family("a4", None, None, None, schedule),
        "z2r" => {
            let rank = meta.param("rank").map_err(|e| e.to_string())? as usize;
            build_family("z2r", None, None, Some(rank), schedule)
        }
        "lps" => {
            let p = meta.param("p").map_err(|e| e.to_string())?;
            let q = meta.param("q").map_err(|e| e.to_string())?;
            build_family("lps", Some(p), Some(q), None, schedule)
        }
        other => Err(format!("metadata names unknown family '{other}'")),
    }
}

fn load_bundle(graph_path: &Path) -> Result<Bundle, String> {
    let text = std::fs::read_to_string(graph_path)
        .map_err(|e| format!("reading {}: {e}", graph_path.display()))?;
    let rim: Rim = parse_rim(&text).map_err(|e| e.to_string())?;
    let meta_path = sidecar(graph_path);
    let meta_text = std::fs::read_to_string(&meta_path)
        .map_err(|e| format!("reading {}: {e}", meta_path.display()))?;
    let meta = parse_metadata(&meta_text).map_err(|e| e.to_string())?;
    let bundle = bundle_from_metadata(&meta)?;
    if bundle.blossoming.base != rim {
        return Err("graph file does not match the metadata's construction".into());
    }
    Ok(bundle)
}
