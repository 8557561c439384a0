//! The folding IOPP: commit phase, query phase, counters, and a
//! seeded-randomness soundness simulator.
//!
//! Non-interactive mode derives every challenge from the transcript
//! (parameter digest, then commitment roots); the interactive simulator
//! draws the same choices from a seeded generator instead. Both share one
//! query-phase driver, so the access pattern, the opening order, and the
//! counters are identical by construction.
//!
//! Per repetition the verifier samples a start vertex and an edge subset,
//! walks one preimage chain down the cut sequence, and checks the fold
//! relation at every round on the sampled edges; the values shared
//! between consecutive rounds are opened once (`m` source openings at the
//! first round, `m - 1` afterward). The last word is opened in full as
//! the final local view and checked against the base code.

use crate::code::{CodeError, GraphCode, RsCode};
use crate::field::{FieldElement, PrimeField};
use crate::fold::{fold, FoldError};
use crate::group::BlossomingSequence;
use crate::merkle::{verify_path, Hash, MerkleCommitment, MerkleTree, MerkleError};
use crate::rim::{EdgeWord, RimError};
use crate::transcript::{blossoming_digest, label, Transcript};
use crate::wire::{Opening, Proof};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("malformed proof: {0}")]
    MalformedProof(&'static str),
    #[error(transparent)]
    Rim(#[from] RimError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Fold(#[from] FoldError),
    #[error(transparent)]
    Merkle(#[from] MerkleError),
}

/// Why the verifier rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    /// A Merkle opening failed or named the wrong leaf.
    OpeningInvalid,
    /// A fold consistency check failed.
    FoldMismatch,
    /// The final local view is inconsistent or not a base codeword.
    FinalCheckFailed,
    /// The input commitment does not match the expected one.
    RootMismatch,
}

/// Monotone work and size counters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComplexityCounters {
    pub prover_field_ops: u64,
    pub verifier_field_ops: u64,
    pub oracle_queries: u64,
    pub rounds: u64,
    pub proof_field_elements: u64,
    pub randomness_field_elements: u64,
    pub randomness_vertices: u64,
    pub randomness_subsets: u64,
    pub randomness_cut_choices: u64,
}

/// Everything fixed before proving: the cut sequence, the base code, the
/// repetition count L, and the per-round edge sample size t.
#[derive(Debug, Clone)]
pub struct ProtocolParams {
    pub field: PrimeField,
    pub base_code: RsCode,
    pub blossoming: BlossomingSequence,
    pub reps: usize,
    pub edges_per_check: usize,
    pub digest: [u8; 32],
}

impl ProtocolParams {
    pub fn new(
        blossoming: BlossomingSequence,
        field: PrimeField,
        k: usize,
        reps: usize,
        edges_per_check: usize,
    ) -> Result<ProtocolParams, ProtocolError> {
        let n = blossoming.base.arity();
        if k == 0 || k >= n {
            return Err(ProtocolError::BadParameters(format!("need 1 <= k < n, got k={k} n={n}")));
        }
        if reps == 0 {
            return Err(ProtocolError::BadParameters("need at least one repetition".into()));
        }
        if edges_per_check == 0 || edges_per_check > n {
            return Err(ProtocolError::BadParameters(format!(
                "need 1 <= t <= n, got t={edges_per_check} n={n}"
            )));
        }
        if blossoming.round_count() == 0 {
            return Err(ProtocolError::BadParameters("empty cut sequence".into()));
        }
        let base_code = RsCode::new(field.clone(), n, k)?;
        let digest = params_digest(&blossoming, &field, k, reps, edges_per_check);
        Ok(ProtocolParams { field, base_code, blossoming, reps, edges_per_check, digest })
    }

    /// The edge sample size from a checked-edges proportion: max(1, floor(mu n)).
    pub fn edge_checks_from_mu(n: usize, mu_num: usize, mu_den: usize) -> usize {
        ((mu_num * n) / mu_den).max(1)
    }

    pub fn rounds(&self) -> usize {
        self.blossoming.round_count()
    }

    pub fn arity(&self) -> usize {
        self.blossoming.base.arity()
    }

    pub fn k(&self) -> usize {
        self.base_code.dimension()
    }

    /// Cut order per round.
    pub fn orders(&self) -> Vec<usize> {
        self.blossoming.orders()
    }

    /// The closed-form query count: per repetition the first round opens
    /// `m_1 t` source values and `t` target values, later rounds open
    /// `(m_r - 1) t` and `t`, and the final check reads n values once.
    pub fn expected_queries(&self) -> u64 {
        let t = self.edges_per_check as u64;
        let sum_m: u64 = self.orders().iter().map(|&m| m as u64).sum();
        (self.reps as u64) * t * (sum_m + 1) + self.arity() as u64
    }

    /// The closed-form proof length in field elements.
    pub fn expected_proof_elements(&self) -> u64 {
        (1..=self.rounds()).map(|r| self.blossoming.graph(r).edge_count() as u64).sum()
    }
}

fn params_digest(
    blossoming: &BlossomingSequence,
    field: &PrimeField,
    k: usize,
    reps: usize,
    edges_per_check: usize,
) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"FLWRPRM1");
    h.update([field.byte_len() as u8]);
    h.update(&field.modulus().to_le_bytes()[..field.byte_len()]);
    h.update((blossoming.base.arity() as u32).to_le_bytes());
    h.update((k as u32).to_le_bytes());
    h.update((blossoming.round_count() as u32).to_le_bytes());
    h.update((reps as u32).to_le_bytes());
    h.update((edges_per_check as u32).to_le_bytes());
    for m in blossoming.orders() {
        h.update([m as u8]);
    }
    h.update(blossoming_digest(blossoming));
    h.finalize().into()
}

/// Challenge source: transcript-derived or seeded-random.
enum Randomness<'a> {
    Transcript(&'a mut Transcript),
    Rng(&'a mut ChaCha20Rng),
}

impl Randomness<'_> {
    fn index(&mut self, range: usize, lbl: u8) -> usize {
        debug_assert!(range > 0);
        match self {
            Randomness::Transcript(t) => t.challenge_index(range as u64, lbl) as usize,
            Randomness::Rng(r) => r.random_range(0..range),
        }
    }
}

/// The verifier's choices for one repetition. The start vertex is
/// implicit: it is the image of the round-1 walked vertex under the
/// round-1 chosen isomorphism.
struct RepetitionPlan {
    /// Sampled edge indices, ascending, size t.
    edges: Vec<usize>,
    /// Per round: chosen cut index and the walked vertex (local id).
    walk: Vec<(usize, u32)>,
}

fn derive_plan(params: &ProtocolParams, rnd: &mut Randomness) -> RepetitionPlan {
    let n = params.arity();
    let t = params.edges_per_check;
    let v0 = rnd.index(params.blossoming.base.vertex_count(), label::VERTEX) as u32;
    // partial Fisher-Yates; one index draw per sampled edge
    let mut pool: Vec<usize> = (0..n).collect();
    for x in 0..t {
        let off = rnd.index(n - x, label::SUBSET);
        pool.swap(x, x + off);
    }
    let mut edges = pool[..t].to_vec();
    edges.sort_unstable();

    let mut walk = Vec::with_capacity(params.rounds());
    let mut v_prev = v0;
    for round in &params.blossoming.rounds {
        let options = round.collection.cuts_containing(v_prev);
        let choice = options[rnd.index(options.len(), label::CUT)];
        let pos = round
            .collection
            .preimage(choice, v_prev)
            .expect("v_prev lies in the chosen cut") as u32;
        walk.push((choice, pos));
        v_prev = pos;
    }
    RepetitionPlan { edges, walk }
}

/// Read access to the committed words during the query phase.
///
/// Oracle `r` is the word on `graph(r)`; `0` is the input. Reads of the
/// last oracle come from the final view, not from openings.
trait OracleReader {
    fn read(
        &mut self,
        oracle: usize,
        vertex: u32,
        j: usize,
    ) -> Result<FieldElement, RejectReason>;
}

/// Prover side: reads its own words and emits openings as it goes.
struct ProverReader<'a> {
    params: &'a ProtocolParams,
    words: &'a [EdgeWord],
    trees: &'a [MerkleTree],
    openings: Vec<Opening>,
}

impl OracleReader for ProverReader<'_> {
    fn read(&mut self, oracle: usize, vertex: u32, j: usize) -> Result<FieldElement, RejectReason> {
        let graph = self.params.blossoming.graph(oracle);
        let value = self.words[oracle].value_at(graph, vertex, j);
        if oracle < self.params.rounds() {
            let leaf = graph.edge_id(vertex, j);
            let path = self.trees[oracle].path(leaf).expect("edge id in range");
            self.openings.push(Opening { leaf_index: leaf as u32, value, path });
        }
        Ok(value)
    }
}

/// Verifier side: consumes openings in order and authenticates each one.
struct VerifierReader<'a> {
    params: &'a ProtocolParams,
    commitments: &'a [MerkleCommitment],
    final_view: &'a [FieldElement],
    openings: std::slice::Iter<'a, Opening>,
}

impl OracleReader for VerifierReader<'_> {
    fn read(&mut self, oracle: usize, vertex: u32, j: usize) -> Result<FieldElement, RejectReason> {
        if oracle == self.params.rounds() {
            // flower word: already authenticated against the last root
            return Ok(self.final_view[j]);
        }
        let graph = self.params.blossoming.graph(oracle);
        let expected_leaf = graph.edge_id(vertex, j);
        let opening = self.openings.next().ok_or(RejectReason::OpeningInvalid)?;
        if opening.leaf_index as usize != expected_leaf {
            return Err(RejectReason::OpeningInvalid);
        }
        let bytes = self.params.field.canonical_bytes(opening.value);
        if !verify_path(&self.commitments[oracle], expected_leaf, &bytes, &opening.path) {
            return Err(RejectReason::OpeningInvalid);
        }
        Ok(opening.value)
    }
}

/// Simulator side: direct reads of the adversary's words.
struct DirectReader<'a> {
    params: &'a ProtocolParams,
    words: &'a [EdgeWord],
}

impl OracleReader for DirectReader<'_> {
    fn read(&mut self, oracle: usize, vertex: u32, j: usize) -> Result<FieldElement, RejectReason> {
        Ok(self.words[oracle].value_at(self.params.blossoming.graph(oracle), vertex, j))
    }
}

/// Runs the full query phase: L repetitions of the fold spot-checks.
fn run_query_phase(
    params: &ProtocolParams,
    rhos: &[FieldElement],
    reader: &mut dyn OracleReader,
    rnd: &mut Randomness,
    counters: &mut ComplexityCounters,
) -> Result<(), RejectReason> {
    let field = &params.field;
    let t = params.edges_per_check;
    for _ in 0..params.reps {
        let plan = derive_plan(params, rnd);
        counters.randomness_vertices += 1;
        counters.randomness_subsets += 1;
        counters.randomness_cut_choices += params.rounds() as u64;

        let mut cache: Vec<FieldElement> = Vec::new();
        for r in 1..=params.rounds() {
            let round = &params.blossoming.rounds[r - 1];
            let m = round.collection.order();
            let (i_r, v_r) = plan.walk[r - 1];

            // source values f_{r-1}(phi_i(v_r), j) for every cut i
            let mut sources: Vec<Vec<FieldElement>> = vec![Vec::with_capacity(t); m];
            for (i, slot) in sources.iter_mut().enumerate() {
                if r >= 2 && i == i_r {
                    *slot = cache.clone();
                    continue;
                }
                let u = round.collection.isos[i][v_r as usize];
                for &j in &plan.edges {
                    slot.push(reader.read(r - 1, u, j)?);
                    counters.oracle_queries += 1;
                }
            }

            // target values f_r(v_r, j) and the fold relation
            let mut target = Vec::with_capacity(t);
            for (jidx, &j) in plan.edges.iter().enumerate() {
                let val = reader.read(r, v_r, j)?;
                counters.oracle_queries += 1;
                let mut acc = FieldElement::ZERO;
                for i in (0..m).rev() {
                    acc = field.add(field.mul(acc, rhos[r - 1]), sources[i][jidx]);
                }
                counters.verifier_field_ops += 2 * (m as u64) - 2;
                if acc != val {
                    return Err(RejectReason::FoldMismatch);
                }
                target.push(val);
            }
            cache = target;
        }
    }
    Ok(())
}

/// The final check: the flower's full local view must be a base codeword.
fn final_rs_check(
    params: &ProtocolParams,
    final_view: &[FieldElement],
    counters: &mut ComplexityCounters,
) -> Result<(), RejectReason> {
    counters.oracle_queries += params.arity() as u64;
    let n = params.arity() as u64;
    let k = params.k() as u64;
    counters.verifier_field_ops += (n - k) * (2 * n - 1);
    match params.base_code.is_member(final_view) {
        Ok(true) => Ok(()),
        _ => Err(RejectReason::FinalCheckFailed),
    }
}

fn word_leaves(field: &PrimeField, word: &EdgeWord) -> Vec<Vec<u8>> {
    word.values.iter().map(|v| field.canonical_bytes(*v)).collect()
}

/// Produces the non-interactive proof for `f0` and the measured counters.
pub fn prove(
    params: &ProtocolParams,
    f0: &EdgeWord,
) -> Result<(Proof, ComplexityCounters), ProtocolError> {
    if f0.values.len() != params.blossoming.base.edge_count() {
        return Err(ProtocolError::Rim(RimError::ShapeMismatch));
    }
    let field = &params.field;
    let mut counters = ComplexityCounters { rounds: params.rounds() as u64, ..Default::default() };

    let mut transcript = Transcript::new(params.digest);
    let mut words: Vec<EdgeWord> = vec![f0.clone()];
    let mut trees: Vec<MerkleTree> = vec![MerkleTree::build(&word_leaves(field, f0))?];
    transcript.absorb_root(&trees[0].root());

    let mut rhos = Vec::with_capacity(params.rounds());
    for r in 1..=params.rounds() {
        let rho = transcript.challenge_field(field, label::RHO);
        counters.randomness_field_elements += 1;
        let round = &params.blossoming.rounds[r - 1];
        let next = fold(
            field,
            params.blossoming.graph(r - 1),
            &words[r - 1],
            &round.collection,
            &round.graph,
            rho,
        )?;
        let m = round.collection.order() as u64;
        counters.prover_field_ops += (2 * m - 1) * round.graph.edge_count() as u64;
        counters.proof_field_elements += round.graph.edge_count() as u64;
        let tree = MerkleTree::build(&word_leaves(field, &next))?;
        transcript.absorb_root(&tree.root());
        words.push(next);
        trees.push(tree);
        rhos.push(rho);
    }

    let flower = params.blossoming.graph(params.rounds());
    let final_view = words[params.rounds()].local_view(flower, 0);

    let mut reader = ProverReader { params, words: &words, trees: &trees, openings: Vec::new() };
    {
        let mut rnd = Randomness::Transcript(&mut transcript);
        run_query_phase(params, &rhos, &mut reader, &mut rnd, &mut counters)
            .expect("honest prover passes its own checks");
    }
    // count the final full-view read; a non-codeword input still yields a
    // well-formed proof, which the verifier then rejects
    let _ = final_rs_check(params, &final_view, &mut counters);

    let proof = Proof {
        modulus: field.modulus(),
        n: params.arity() as u32,
        k: params.k() as u32,
        rounds: params.rounds() as u32,
        reps: params.reps as u32,
        edges_per_check: params.edges_per_check as u32,
        orders: params.orders().iter().map(|&m| m as u8).collect(),
        input_root: trees[0].root(),
        roots: trees[1..].iter().map(|t| t.root()).collect(),
        final_view,
        openings: reader.openings,
    };
    Ok((proof, counters))
}

/// Outcome of verification, with the measured counters.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub accepted: bool,
    pub reason: Option<RejectReason>,
    pub counters: ComplexityCounters,
}

impl Verdict {
    fn reject(reason: RejectReason, counters: ComplexityCounters) -> Verdict {
        Verdict { accepted: false, reason: Some(reason), counters }
    }
}

/// Verifies a proof against the parameters; `expected_input_root` binds
/// the input oracle when the caller knows it.
pub fn verify(
    params: &ProtocolParams,
    proof: &Proof,
    expected_input_root: Option<Hash>,
) -> Result<Verdict, ProtocolError> {
    let field = &params.field;
    let mut counters = ComplexityCounters {
        rounds: params.rounds() as u64,
        proof_field_elements: params.expected_proof_elements(),
        ..Default::default()
    };

    // header must match the parameters exactly
    let orders: Vec<u8> = params.orders().iter().map(|&m| m as u8).collect();
    if proof.modulus != field.modulus()
        || proof.n as usize != params.arity()
        || proof.k as usize != params.k()
        || proof.rounds as usize != params.rounds()
        || proof.reps as usize != params.reps
        || proof.edges_per_check as usize != params.edges_per_check
        || proof.orders != orders
        || proof.roots.len() != params.rounds()
        || proof.final_view.len() != params.arity()
    {
        return Err(ProtocolError::MalformedProof("header does not match parameters"));
    }
    if let Some(root) = expected_input_root {
        if root != proof.input_root {
            return Ok(Verdict::reject(RejectReason::RootMismatch, counters));
        }
    }

    // the final view must be consistent on shared edges and must hash to
    // the last committed root
    let flower = params.blossoming.graph(params.rounds());
    let mut flower_word = vec![None::<FieldElement>; flower.edge_count()];
    for (j, v) in proof.final_view.iter().enumerate() {
        let e = flower.edge_id(0, j);
        match flower_word[e] {
            None => flower_word[e] = Some(*v),
            Some(prev) if prev == *v => {}
            Some(_) => return Ok(Verdict::reject(RejectReason::FinalCheckFailed, counters)),
        }
    }
    let flower_leaves: Vec<Vec<u8>> = flower_word
        .iter()
        .map(|v| field.canonical_bytes(v.expect("every flower edge appears in the view")))
        .collect();
    let flower_tree = MerkleTree::build(&flower_leaves)?;
    if flower_tree.root() != proof.roots[params.rounds() - 1] {
        return Ok(Verdict::reject(RejectReason::FinalCheckFailed, counters));
    }

    // transcript replay
    let mut transcript = Transcript::new(params.digest);
    transcript.absorb_root(&proof.input_root);
    let mut rhos = Vec::with_capacity(params.rounds());
    for root in &proof.roots {
        rhos.push(transcript.challenge_field(field, label::RHO));
        counters.randomness_field_elements += 1;
        transcript.absorb_root(root);
    }

    let commitments: Vec<MerkleCommitment> = (0..params.rounds())
        .map(|r| MerkleCommitment {
            root: if r == 0 { proof.input_root } else { proof.roots[r - 1] },
            leaf_count: params.blossoming.graph(r).edge_count(),
        })
        .collect();

    let mut reader = VerifierReader {
        params,
        commitments: &commitments,
        final_view: &proof.final_view,
        openings: proof.openings.iter(),
    };
    let query_result = {
        let mut rnd = Randomness::Transcript(&mut transcript);
        run_query_phase(params, &rhos, &mut reader, &mut rnd, &mut counters)
    };
    let leftovers = reader.openings.len();
    match query_result {
        Err(reason) => return Ok(Verdict::reject(reason, counters)),
        Ok(()) if leftovers > 0 => {
            return Err(ProtocolError::MalformedProof("trailing openings"));
        }
        Ok(()) => {}
    }

    if let Err(reason) = final_rs_check(params, &proof.final_view, &mut counters) {
        return Ok(Verdict::reject(reason, counters));
    }
    Ok(Verdict { accepted: true, reason: None, counters })
}

/// What a dishonest prover commits during simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryStrategy {
    /// Fold honestly at every round (all fold checks pass; acceptance
    /// hinges on the final low-degree check).
    HonestFold,
    /// Replace every committed word by a fresh codeword of the round's
    /// graph code, ignoring the fold relation.
    FixedCodeword,
}

/// Monte-Carlo acceptance estimate under seeded interactive randomness.
#[derive(Debug, Clone)]
pub struct SoundnessEstimate {
    pub trials: u64,
    pub accepted: u64,
    pub rate: f64,
    /// Half-width of the 99% Wilson interval around the rate.
    pub wilson99_halfwidth: f64,
}

impl SoundnessEstimate {
    fn new(trials: u64, accepted: u64) -> SoundnessEstimate {
        let n = trials as f64;
        let p = accepted as f64 / n;
        let z = 2.5758293035489004f64; // 99% two-sided normal quantile
        let denom = 1.0 + z * z / n;
        let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
        SoundnessEstimate { trials, accepted, rate: p, wilson99_halfwidth: half }
    }
}

/// Runs `trials` interactive executions against the given adversary and
/// reports the acceptance frequency.
pub fn simulate_soundness(
    params: &ProtocolParams,
    f0: &EdgeWord,
    strategy: AdversaryStrategy,
    trials: u64,
    seed: u64,
) -> Result<SoundnessEstimate, ProtocolError> {
    if f0.values.len() != params.blossoming.base.edge_count() {
        return Err(ProtocolError::Rim(RimError::ShapeMismatch));
    }
    let field = &params.field;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    // per-round codes only needed by the codeword-swapping adversary
    let mut round_codes: Vec<GraphCode> = Vec::new();
    if strategy == AdversaryStrategy::FixedCodeword {
        for r in 1..=params.rounds() {
            round_codes.push(GraphCode::new(
                params.blossoming.graph(r).clone(),
                params.base_code.clone(),
            )?);
        }
    }

    let mut accepted = 0u64;
    for _ in 0..trials {
        let mut words: Vec<EdgeWord> = vec![f0.clone()];
        let mut rhos = Vec::with_capacity(params.rounds());
        for r in 1..=params.rounds() {
            let rho = field.sample_uniform(&mut rng);
            let round = &params.blossoming.rounds[r - 1];
            let next = match strategy {
                AdversaryStrategy::HonestFold => fold(
                    field,
                    params.blossoming.graph(r - 1),
                    &words[r - 1],
                    &round.collection,
                    &round.graph,
                    rho,
                )?,
                AdversaryStrategy::FixedCodeword => round_codes[r - 1].sample_codeword(&mut rng),
            };
            words.push(next);
            rhos.push(rho);
        }

        let mut counters = ComplexityCounters::default();
        let mut reader = DirectReader { params, words: &words };
        let passed = {
            let mut rnd = Randomness::Rng(&mut rng);
            run_query_phase(params, &rhos, &mut reader, &mut rnd, &mut counters).is_ok()
        };
        let flower = params.blossoming.graph(params.rounds());
        let view = words[params.rounds()].local_view(flower, 0);
        if passed && final_rs_check(params, &view, &mut counters).is_ok() {
            accepted += 1;
        }
    }
    Ok(SoundnessEstimate::new(trials, accepted))
}

/// Exact distribution of the walked vertex after each round, by dynamic
/// programming over the cut choices: uniform start, then a uniform choice
/// among the cuts containing the current vertex.
pub fn query_walk_distribution(seq: &BlossomingSequence) -> Vec<Vec<BigRational>> {
    let v0 = seq.base.vertex_count();
    let uniform = BigRational::new(BigInt::from(1), BigInt::from(v0 as u64));
    let mut layers = vec![vec![uniform; v0]];
    for round in &seq.rounds {
        let prev = layers.last().unwrap();
        let mut next = Vec::with_capacity(round.collection.subsets[0].len());
        for pos in 0..round.collection.subsets[0].len() {
            let mut p = BigRational::new(BigInt::from(0), BigInt::from(1));
            for iso in &round.collection.isos {
                let u = iso[pos];
                let mult = round.collection.multiplicity[u as usize] as u64;
                p += &prev[u as usize] / BigRational::from(BigInt::from(mult));
            }
            next.push(p);
        }
        layers.push(next);
    }
    layers
}
