mod common;

use common::{corpus, isomorphic, random_molecule, random_permutation};
use molbench::chem::{canonical_smiles, canonicalize, parse_and_sanitize, write_smiles};
use molbench::rng::SeededRng;
use proptest::prelude::*;

#[test]
fn corpus_round_trips() {
    for (smiles, name) in corpus() {
        let g = parse_and_sanitize(&smiles).unwrap_or_else(|e| panic!("{name}: {e}"));
        let c = canonical_smiles(&g);
        assert_eq!(canonicalize(&c.text).unwrap(), c, "{name}: not idempotent");
        assert!(!c.text.contains(['@', '/', '\\']), "{name}: stereo token in {}", c.text);
        let back = parse_and_sanitize(&c.text).unwrap();
        assert!(isomorphic(&g, &back), "{name}: {smiles} -> {}", c.text);
    }
}

#[test]
fn corpus_permutation_invariance() {
    let mut rng = SeededRng::new(11);
    for (smiles, name) in corpus() {
        let g = parse_and_sanitize(&smiles).unwrap();
        let c = canonical_smiles(&g).text;
        for _ in 0..10 {
            let p = g.permuted(&random_permutation(g.atom_count(), &mut rng));
            let written = write_smiles(&p, false);
            assert_eq!(canonicalize(&written).unwrap().text, c, "{name}: {written}");
        }
    }
}

#[test]
fn random_molecules_round_trip() {
    let mut checked = 0;
    for seed in 0..1500u64 {
        let Some(g) = random_molecule(seed, 24) else { continue };
        let c = canonical_smiles(&g).text;
        let back = parse_and_sanitize(&c).unwrap_or_else(|e| panic!("seed {seed}: {c}: {e}"));
        assert!(isomorphic(&g, &back), "seed {seed}: {}", c);
        assert_eq!(canonical_smiles(&back).text, c, "seed {seed}");
        checked += 1;
    }
    assert!(checked >= 1000, "only {checked} random molecules were valid");
}

#[test]
fn distinct_molecules_get_distinct_strings() {
    let pairs = [
        ("CCO", "COC"),
        ("c1ccccc1O", "C1CCCCC1O"),
        ("CC(=O)O", "OCC=O"),
        ("c1ccncc1", "c1cnccc1C"),
        ("[13CH4]", "C"),
        ("C[NH3+]", "CN"),
    ];
    for (a, b) in pairs {
        assert_ne!(canonicalize(a).unwrap().text, canonicalize(b).unwrap().text, "{a} vs {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_form_ignores_atom_order(seed in 0u64..1_000_000, perm_seed in any::<u64>()) {
        if let Some(g) = random_molecule(seed, 20) {
            let c = canonical_smiles(&g);
            let mut rng = SeededRng::new(perm_seed);
            let p = g.permuted(&random_permutation(g.atom_count(), &mut rng));
            prop_assert_eq!(&canonical_smiles(&p), &c);
            prop_assert_eq!(canonicalize(&write_smiles(&p, false)).unwrap(), c);
        }
    }
}
