// scratch benchmark: LPS(5,13) echelon + sampling + prove/verify timing
use flowering::code::{GraphCode, RsCode};
use flowering::field::PrimeField;
use flowering::group::build_blossoming;
use flowering::lps::lps_graph;
use flowering::protocol::{prove, verify, ProtocolParams};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let inst = lps_graph(5, 13).unwrap();
    println!("lps build: {:?}", t0.elapsed());

    let t1 = Instant::now();
    let diam = flowering::group::graph_diameter(&inst.cayley.rim).unwrap();
    println!("diameter = {diam}: {:?}", t1.elapsed());

    let t2 = Instant::now();
    let seq = build_blossoming(&inst.cayley, None).unwrap();
    println!("blossoming R={} orders={:?} sizes={:?}: {:?}",
        seq.round_count(), &seq.orders()[..6.min(seq.round_count())],
        (0..=seq.round_count()).map(|r| seq.graph(r).vertex_count()).collect::<Vec<_>>(),
        t2.elapsed());

    let field = PrimeField::new((1 << 31) - 1).unwrap();
    let base = RsCode::new(field.clone(), 6, 4).unwrap();
    let mut gc = GraphCode::new(inst.cayley.rim.clone(), base).unwrap();
    let t3 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let w = gc.sample_codeword(&mut rng);
    println!("echelon + first sample: {:?}", t3.elapsed());
    let t4 = Instant::now();
    for _ in 0..9 { let _ = gc.sample_codeword(&mut rng); }
    println!("9 more samples: {:?}", t4.elapsed());

    let params = ProtocolParams::new(seq, field, 4, 2, 6).unwrap();
    let t5 = Instant::now();
    let (proof, _) = prove(&params, &w).unwrap();
    println!("prove: {:?} (proof {} openings, {} roots)", t5.elapsed(), proof.openings.len(), proof.roots.len());
    let t6 = Instant::now();
    let v = verify(&params, &proof, None).unwrap();
    println!("verify: {:?} accepted={}", t6.elapsed(), v.accepted);
}
