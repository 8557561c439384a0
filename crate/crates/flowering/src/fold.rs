//! The folding operator and an exhaustive check of its distance behavior.
//!
//! `Fold(f, rho)(v, j) = sum_i rho^i f(phi_i(v), j)`: the cut words pulled
//! back through the collection's isomorphisms, combined by powers of the
//! challenge. The exponent is the cut's list position. Folding maps the
//! graph code into the cut graph's code for every challenge, which is what
//! gives the protocol perfect completeness; the exhaustive check below
//! enumerates every challenge in a small field and verifies that folding
//! rarely shrinks the weighted distance to the code.

use crate::code::{CodeError, RsCode};
use crate::field::{FieldElement, PrimeField};
use crate::rim::{refine_weights, CutCollection, EdgeWord, Rim, RimError, WeightFn};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FoldError {
    #[error("field too large for exhaustive challenge enumeration")]
    FieldTooLarge,
    #[error(transparent)]
    Rim(#[from] RimError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Folds `f` (a word on `parent`) over `rho`, producing a word on `cut`,
/// which must be `parent.cut_graph(&collection.subsets[0])`.
pub fn fold(
    field: &PrimeField,
    parent: &Rim,
    f: &EdgeWord,
    collection: &CutCollection,
    cut: &Rim,
    rho: FieldElement,
) -> Result<EdgeWord, FoldError> {
    if f.values.len() != parent.edge_count()
        || collection.parent_vertices != parent.vertex_count()
        || cut.vertex_count() != collection.subsets[0].len()
    {
        return Err(FoldError::Rim(RimError::ShapeMismatch));
    }
    let m = collection.order();
    let n = cut.arity();
    let mut values = vec![FieldElement::ZERO; cut.edge_count()];
    for e in cut.edges() {
        let vloc = e.rep as usize / n;
        let j = e.rep as usize % n;
        // Horner over the list position i, highest first
        let mut acc = FieldElement::ZERO;
        for i in (0..m).rev() {
            let src = collection.isos[i][vloc];
            acc = field.add(field.mul(acc, rho), f.value_at(parent, src, j));
        }
        values[cut.edge_id(vloc as u32, j)] = acc;
    }
    Ok(EdgeWord { values })
}

/// Weighted fraction of vertices whose local view is not a base
/// codeword. This is the distance-to-code quantity the fold-distance
/// bound manipulates (and a lower bound on the true weighted distance to
/// the graph code, since a vertex matching a codeword is valid).
pub fn invalid_vertex_fraction(
    base: &RsCode,
    graph: &Rim,
    f: &EdgeWord,
    w: &WeightFn,
) -> Result<BigRational, FoldError> {
    if f.values.len() != graph.edge_count() || w.weights.len() != graph.vertex_count() {
        return Err(FoldError::Rim(RimError::ShapeMismatch));
    }
    let mut mass = BigRational::zero();
    for v in 0..graph.vertex_count() as u32 {
        if !base.is_member(&f.local_view(graph, v))? {
            mass += &w.weights[v as usize];
        }
    }
    Ok(mass / w.total())
}

/// Outcome of the exhaustive challenge sweep.
#[derive(Debug, Clone)]
pub struct CommitSoundnessReport {
    /// Fraction of challenges that shrink the weighted distance by more
    /// than epsilon.
    pub bad_fraction: BigRational,
    /// The claimed ceiling `(m - 1) / (epsilon |F|)`.
    pub bound: BigRational,
    /// Distance of the input to the parent code, `Delta_w(f, C)`.
    pub parent_distance: BigRational,
}

impl CommitSoundnessReport {
    pub fn holds(&self) -> bool {
        self.bad_fraction <= self.bound
    }
}

/// Enumerates every challenge and measures how often
/// `Delta_w~(Fold(f, rho), C') < Delta_w(f, C) - epsilon`,
/// comparing against `(m - 1) / (epsilon |F|)`. Exact rationals
/// throughout; fields above 10^4 elements are rejected.
pub fn commit_soundness_exhaustive(
    base: &RsCode,
    parent: &Rim,
    f: &EdgeWord,
    collection: &CutCollection,
    w: &WeightFn,
    epsilon: &BigRational,
) -> Result<CommitSoundnessReport, FoldError> {
    let field = base.field().clone();
    if field.modulus() > 10_000 {
        return Err(FoldError::FieldTooLarge);
    }
    let cut = parent.cut_graph(&collection.subsets[0])?;
    let refined = refine_weights(w, collection)?;
    let parent_distance = invalid_vertex_fraction(base, parent, f, w)?;
    let threshold = &parent_distance - epsilon;

    let mut bad = 0u64;
    for rho in 0..field.modulus() {
        let folded = fold(&field, parent, f, collection, &cut, FieldElement(rho))?;
        let d = invalid_vertex_fraction(base, &cut, &folded, &refined)?;
        if d < threshold {
            bad += 1;
        }
    }
    let size = BigRational::from(BigInt::from(field.modulus()));
    let m_minus_1 = BigRational::from(BigInt::from(collection.order() as u64 - 1));
    Ok(CommitSoundnessReport {
        bad_fraction: BigRational::from(BigInt::from(bad)) / &size,
        bound: m_minus_1 / (epsilon * &size),
        parent_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::GraphCode;
    use crate::group::{build_blossoming, build_cayley, AlternatingGroup, GeneratorSet};
    use crate::rim::{ratio, vertex_distance};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn a4_sequence() -> (PrimeField, crate::group::BlossomingSequence) {
        let (group, base) = AlternatingGroup::a4_base();
        let gens = GeneratorSet::new(&group, base).unwrap();
        let cayley = build_cayley(group, gens).unwrap();
        let seq = build_blossoming(&cayley, Some(vec![0, 1, 0])).unwrap();
        (PrimeField::new(101).unwrap(), seq)
    }

    fn random_word(g: &Rim, field: &PrimeField, rng: &mut ChaCha20Rng) -> EdgeWord {
        EdgeWord { values: (0..g.edge_count()).map(|_| field.sample_uniform(rng)).collect() }
    }

    #[test]
    fn fold_zero_word_is_zero() {
        let (field, seq) = a4_sequence();
        let parent = seq.graph(0);
        let round = &seq.rounds[0];
        let z = EdgeWord::zero(parent);
        let folded =
            fold(&field, parent, &z, &round.collection, &round.graph, FieldElement(17)).unwrap();
        assert_eq!(folded, EdgeWord::zero(&round.graph));
    }

    #[test]
    fn fold_at_zero_is_restriction() {
        let (field, seq) = a4_sequence();
        let parent = seq.graph(0);
        let round = &seq.rounds[0];
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..20 {
            let f = random_word(parent, &field, &mut rng);
            let folded =
                fold(&field, parent, &f, &round.collection, &round.graph, FieldElement::ZERO)
                    .unwrap();
            let restricted = f.cut_word(parent, &round.collection.subsets[0]).unwrap();
            assert_eq!(folded, restricted);
        }
    }

    #[test]
    fn fold_is_linear() {
        let (field, seq) = a4_sequence();
        let parent = seq.graph(0);
        let round = &seq.rounds[0];
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        for _ in 0..20 {
            let f = random_word(parent, &field, &mut rng);
            let g = random_word(parent, &field, &mut rng);
            let rho = field.sample_uniform(&mut rng);
            let sum = EdgeWord {
                values: f.values.iter().zip(&g.values).map(|(a, b)| field.add(*a, *b)).collect(),
            };
            let ff = fold(&field, parent, &f, &round.collection, &round.graph, rho).unwrap();
            let fg = fold(&field, parent, &g, &round.collection, &round.graph, rho).unwrap();
            let fsum = fold(&field, parent, &sum, &round.collection, &round.graph, rho).unwrap();
            let manual = EdgeWord {
                values: ff.values.iter().zip(&fg.values).map(|(a, b)| field.add(*a, *b)).collect(),
            };
            assert_eq!(fsum, manual);
        }
    }

    #[test]
    fn fold_maps_codewords_to_codewords() {
        let (field, seq) = a4_sequence();
        let base = RsCode::new(field.clone(), 3, 2).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        // walk the whole chain: codeword at every level, every sampled rho
        let mut gc0 = GraphCode::new(seq.graph(0).clone(), base.clone()).unwrap();
        for _ in 0..10 {
            let mut word = gc0.sample_codeword(&mut rng);
            for (r, round) in seq.rounds.iter().enumerate() {
                let parent = seq.graph(r);
                let rho = field.sample_uniform(&mut rng);
                word = fold(&field, parent, &word, &round.collection, &round.graph, rho).unwrap();
                let gc = GraphCode::new(round.graph.clone(), base.clone()).unwrap();
                assert!(gc.is_member(&word).unwrap());
            }
        }
    }

    #[test]
    fn codeword_has_zero_bad_fraction() {
        let (field, seq) = a4_sequence();
        let base = RsCode::new(field.clone(), 3, 2).unwrap();
        let mut gc0 = GraphCode::new(seq.graph(0).clone(), base.clone()).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        let cw = gc0.sample_codeword(&mut rng);
        let round = &seq.rounds[0];
        let eps = ratio(1, 10);
        let report = commit_soundness_exhaustive(
            &base,
            seq.graph(0),
            &cw,
            &round.collection,
            &seq.base_weights,
            &eps,
        )
        .unwrap();
        assert_eq!(report.parent_distance, BigRational::zero());
        assert_eq!(report.bad_fraction, BigRational::zero());
        assert!(report.holds());
    }

    #[test]
    fn bound_value_explicit() {
        // m = 3, eps = 1/10, |F| = 101: the ceiling is 20/101
        let (field, seq) = a4_sequence();
        let base = RsCode::new(field.clone(), 3, 2).unwrap();
        let round = &seq.rounds[0];
        let f = EdgeWord::zero(seq.graph(0));
        let report = commit_soundness_exhaustive(
            &base,
            seq.graph(0),
            &f,
            &round.collection,
            &seq.base_weights,
            &ratio(1, 10),
        )
        .unwrap();
        assert_eq!(report.bound, ratio(20, 101));
    }

    #[test]
    fn adversarial_words_respect_bound_on_every_step() {
        let (field, seq) = a4_sequence();
        let base = RsCode::new(field.clone(), 3, 2).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2718);
        for r in 0..seq.round_count() {
            let parent = seq.graph(r).clone();
            let round = &seq.rounds[r];
            let w = seq.weights(r);
            for _ in 0..10 {
                // corrupt a random fraction of vertices of a codeword
                let mut gc = GraphCode::new(parent.clone(), base.clone()).unwrap();
                let mut word = gc.sample_codeword(&mut rng);
                let corrupt = rng.random_range(1..=parent.vertex_count());
                for _ in 0..corrupt {
                    let e = rng.random_range(0..parent.edge_count());
                    word.values[e] = field.sample_uniform(&mut rng);
                }
                for eps in [ratio(1, 20), ratio(1, 10), ratio(1, 5)] {
                    let report = commit_soundness_exhaustive(
                        &base,
                        &parent,
                        &word,
                        &round.collection,
                        w,
                        &eps,
                    )
                    .unwrap();
                    assert!(
                        report.holds(),
                        "round {} eps {} bad {} bound {}",
                        r + 1,
                        eps,
                        report.bad_fraction,
                        report.bound
                    );
                }
            }
        }
    }

    #[test]
    fn field_too_large_rejected() {
        let field = PrimeField::new(1_000_003).unwrap();
        let (_, seq) = a4_sequence();
        let base = RsCode::new(field, 3, 2).unwrap();
        let round = &seq.rounds[0];
        let f = EdgeWord::zero(seq.graph(0));
        let err = commit_soundness_exhaustive(
            &base,
            seq.graph(0),
            &f,
            &round.collection,
            &seq.base_weights,
            &ratio(1, 10),
        )
        .unwrap_err();
        assert_eq!(err, FoldError::FieldTooLarge);
    }

    #[test]
    fn invalid_fraction_lower_bounds_vertex_distance_to_codewords() {
        let (field, seq) = a4_sequence();
        let base = RsCode::new(field.clone(), 3, 2).unwrap();
        let parent = seq.graph(0);
        let mut gc = GraphCode::new(parent.clone(), base.clone()).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let w = WeightFn::uniform(parent);
        for _ in 0..20 {
            let f = random_word(parent, &field, &mut rng);
            let frac = invalid_vertex_fraction(&base, parent, &f, &w).unwrap();
            for _ in 0..5 {
                let c = gc.sample_codeword(&mut rng);
                assert!(frac <= vertex_distance(parent, &f, &c).unwrap());
            }
        }
    }
}
