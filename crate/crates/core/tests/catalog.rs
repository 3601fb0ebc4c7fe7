use treeauto::activity::classify_activity;
use treeauto::catalog;
use treeauto::freeness::find_relations;
use treeauto::nucleus::nucleus;
use treeauto::GroupWord;

#[test]
fn expected_properties_are_rederived() {
    for entry in catalog::all() {
        let gens = &entry.generators;
        for (name, kind) in &entry.expected.activity {
            let g = gens.get(name).unwrap();
            assert_eq!(classify_activity(g).kind, *kind, "{}.{name}", entry.name);
        }
        let n = nucleus(gens, 64, 10).unwrap();
        match entry.expected.nucleus_size {
            Some(size) => {
                assert!(n.is_found(), "{}", entry.name);
                assert_eq!(n.size(), size, "{}", entry.name);
            }
            None => assert!(!n.is_found(), "{}", entry.name),
        }
        let longest = entry.expected.relators.iter().map(|r| r.split_whitespace().count()).max();
        if let Some(len) = longest {
            let found = find_relations(gens, len, 1 << 20).unwrap();
            for r in &entry.expected.relators {
                let w: GroupWord = r.parse().unwrap();
                assert!(gens.evaluate(&w).unwrap().is_identity(), "{}: {r}", entry.name);
                assert!(found.relators.contains(&w), "{}: {r} not mined", entry.name);
            }
        }
    }
}

#[test]
fn mined_relators_are_trivial_and_reduced() {
    for name in ["grigorchuk", "basilica", "gupta_sidki_3", "tullio"] {
        let gens = catalog::builtin(name).unwrap().generators;
        let r = find_relations(&gens, 6, 1 << 20).unwrap();
        assert!(r.complete);
        for w in &r.relators {
            assert!(gens.evaluate(w).unwrap().is_identity(), "{name}: {w}");
            assert!(w.is_cyclically_reduced(), "{name}: {w}");
            assert_eq!(&GroupWord::new(w.letters().to_vec()), w);
        }
    }
}

#[test]
fn branch_bookkeeping_is_consistent() {
    use treeauto::freeness::free_subgroup_certificate;
    use treeauto::BoundaryPoint;
    for name in ["adding_machine", "grigorchuk", "gupta_sidki_3"] {
        let gens = catalog::builtin(name).unwrap().generators;
        let e = free_subgroup_certificate(&gens, &[BoundaryPoint::constant(0)], 4, 1 << 20).unwrap();
        // a relator found at L never sits next to an empty, complete
        // stabilizer record claiming branch (2) on its own
        if !e.relations.relators.is_empty() && e.complete {
            assert!(e.summary.no_free_subgroup, "{name}");
        }
        for p in &e.points {
            for w in &p.stabilizer.words {
                assert_eq!(gens.evaluate(w).unwrap().apply_boundary(&p.point).unwrap(), p.point);
            }
        }
    }
}
