use kodaira::document::flatten;
use kodaira::{parse_document, to_string, DocumentError};
use kodaira_core::linalg::IntMatrix;
use kodaira_core::monodromy::{
    kodaira_thurston_matrix, trefoil_matrix, BundleSpec, DeclaredBlock, Leaf, Provenance,
    RankInterval, SymplecticRep,
};
use kodaira_core::surface::CyclicCoverSpec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Commuting pair of powers, the rest identity: the relator holds.
fn explicit_leaf(rng: &mut ChaCha8Rng, b: usize) -> Leaf {
    let base = if rng.gen_bool(0.5) { trefoil_matrix() } else { kodaira_thurston_matrix() };
    let mut images = vec![IntMatrix::identity(2); 2 * b];
    images[0] = base.pow(rng.gen_range(0..6)).unwrap();
    images[1] = base.pow(rng.gen_range(0..6)).unwrap();
    let rep = SymplecticRep::new(1, b, images).unwrap();
    let signature = rng.gen_bool(0.5).then_some(0);
    Leaf::Explicit { rep, signature, has_zero_section: true }
}

fn leaf(rng: &mut ChaCha8Rng, b: usize) -> Provenance {
    let leaf = match rng.gen_range(0..6) {
        0 => Leaf::Product { fiber_genus: rng.gen_range(1..4), base_genus: b },
        1 => Leaf::Trefoil { base_genus: b },
        2 => Leaf::KodairaThurston { base_genus: b },
        3 if b == 9 => Leaf::Ekkos,
        4 => {
            let g = rng.gen_range(1..4);
            let lo = rng.gen_range(0..=2 * g);
            let hi = rng.gen_range(lo..=2 * g);
            let block = DeclaredBlock::new(g, b, RankInterval { lo, hi }).unwrap();
            Leaf::Declared { block, signature: rng.gen_range(-4..8), has_zero_section: true }
        }
        _ => explicit_leaf(rng, b),
    };
    Provenance::Leaf(leaf)
}

fn tree(rng: &mut ChaCha8Rng, b: usize, depth: usize) -> Provenance {
    if depth == 0 {
        return leaf(rng, b);
    }
    match rng.gen_range(0..3) {
        0 => Provenance::SectionSum(Box::new(tree(rng, b, depth - 1)), Box::new(tree(rng, b, depth - 1))),
        1 if b >= 2 => {
            let c = rng.gen_range(1..b);
            Provenance::FiberSumProduct { input: Box::new(tree(rng, b - c, depth - 1)), c }
        }
        _ => leaf(rng, b),
    }
}

fn random_bundle(seed: u64) -> Option<BundleSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = *[1, 2, 3, 9].get(rng.gen_range(0..4)).unwrap();
    let depth = rng.gen_range(0..4);
    let mut t = tree(&mut rng, b, depth);
    if rng.gen_bool(0.3) {
        let n = rng.gen_range(1..4);
        let images = (0..2 * b).map(|_| rng.gen_range(0..n as i64)).collect();
        if let Ok(spec) = CyclicCoverSpec::new(n, images) {
            t = Provenance::Cover { input: Box::new(t), spec };
        }
    }
    t.evaluate().ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn construction_round_trip(seed in any::<u64>()) {
        if let Some(x) = random_bundle(seed) {
            let text = to_string(&x);
            prop_assert_eq!(&parse_document(&text).unwrap(), &x);
            prop_assert_eq!(to_string(&parse_document(&text).unwrap()), text);
            if let Ok(flat) = flatten(&x) {
                prop_assert_eq!(parse_document(&to_string(&flat)).unwrap(), flat);
            }
        }
    }
}

#[test]
fn corpus_covers_every_node_kind() {
    let mut seen = std::collections::BTreeSet::new();
    fn walk(p: &Provenance, seen: &mut std::collections::BTreeSet<&'static str>) {
        seen.insert(match p {
            Provenance::Leaf(Leaf::Product { .. }) => "product",
            Provenance::Leaf(Leaf::Trefoil { .. }) => "trefoil",
            Provenance::Leaf(Leaf::KodairaThurston { .. }) => "kodaira_thurston",
            Provenance::Leaf(Leaf::Ekkos) => "ekkos",
            Provenance::Leaf(Leaf::Explicit { .. }) => "explicit",
            Provenance::Leaf(Leaf::Declared { .. }) => "declared",
            Provenance::Leaf(Leaf::GeneratingSet { .. }) => "generating_set",
            Provenance::SectionSum(..) => "section_sum",
            Provenance::FiberSumProduct { .. } => "fiber_sum_product",
            Provenance::Cover { .. } => "cover",
        });
        match p {
            Provenance::SectionSum(a, b) => {
                walk(a, seen);
                walk(b, seen);
            }
            Provenance::FiberSumProduct { input, .. } | Provenance::Cover { input, .. } => walk(input, seen),
            Provenance::Leaf(_) => {}
        }
    }
    for seed in 0..400 {
        if let Some(x) = random_bundle(seed) {
            let text = to_string(&x);
            assert_eq!(parse_document(&text).unwrap(), x);
            walk(x.provenance(), &mut seen);
            if let Ok(flat) = flatten(&x) {
                walk(flat.provenance(), &mut seen);
                assert_eq!(parse_document(&to_string(&flat)).unwrap(), flat);
            }
        }
    }
    assert_eq!(seen.len(), 10, "{seen:?}");
}

#[test]
fn node_errors_name_the_path() {
    let text = r#"{"format": 1, "kind": "construction", "root":
        {"op": "section_sum", "left": {"op": "trefoil", "b": 2},
         "right": {"op": "fiber_sum_product", "input": {"op": "ekkos"}, "c": 0}}}"#;
    match parse_document(text) {
        Err(DocumentError::Build(e)) => assert!(e.to_string().starts_with("at root.right:"), "{e}"),
        other => panic!("{other:?}"),
    }
}
