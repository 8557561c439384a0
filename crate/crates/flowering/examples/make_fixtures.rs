// regenerates the golden proof fixtures used by the acceptance suite
use flowering::code::GraphCode;
use flowering::field::PrimeField;
use flowering::group::{build_blossoming, build_cayley, AlternatingGroup, BooleanVectorGroup, GeneratorSet};
use flowering::protocol::{prove, ProtocolParams};
use flowering::wire::serialize_proof;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let field = PrimeField::new(101).unwrap();
    let (group, base) = AlternatingGroup::a4_base();
    let gens = GeneratorSet::new(&group, base).unwrap();
    let cayley = build_cayley(group, gens).unwrap();
    let a4 = build_blossoming(&cayley, Some(vec![0, 1, 0])).unwrap();
    let g = BooleanVectorGroup::new(3);
    let basis = g.standard_basis();
    let gens = GeneratorSet::new(&g, basis).unwrap();
    let c = build_cayley(g, gens).unwrap();
    let z2 = build_blossoming(&c, Some(vec![0, 1, 2])).unwrap();

    for (name, params, seed) in [
        ("a4_proof.bin", ProtocolParams::new(a4, field.clone(), 2, 2, 3).unwrap(), 42u64),
        ("z2cubed_proof.bin", ProtocolParams::new(z2, field, 2, 2, 2).unwrap(), 43),
    ] {
        let mut gc = GraphCode::new(params.blossoming.base.clone(), params.base_code.clone()).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let word = gc.sample_codeword(&mut rng);
        let (proof, _) = prove(&params, &word).unwrap();
        let bytes = serialize_proof(&proof);
        let path = format!("crates/flowering/tests/fixtures/{name}");
        std::fs::write(&path, &bytes).unwrap();
        println!("{path}: {} bytes", bytes.len());
    }
}
