use proptest::prelude::*;

use stratbundle::cellbase::{closed_star, validate_complex, SimplicialMap, Subcomplex};
use stratbundle::doc::{canonical_value, to_canonical_string, BundleDoc, DiagramDoc};
use stratbundle::funcspace::{coend, principal_diagram};
use stratbundle::oracle::{gen_instance, gen_pair, orbit_classes, run_seed, InstanceSpec, Outcome, Suite};
use stratbundle::strabundle::{fiberwise_product, pullback, realize_total, validate_bundle};
use stratbundle::triviality::{local_triviality_certificate, LocalTriviality};

fn specs() -> impl Strategy<Value = InstanceSpec> {
    (any::<u64>(), 1usize..=30, 1usize..=3, 1usize..=4, any::<bool>(), 1usize..=3).prop_map(
        |(seed, max_cells, max_objects, max_fibre_size, groupoid_only, strata_depth)| InstanceSpec {
            seed,
            max_cells,
            max_objects,
            max_fibre_size,
            groupoid_only,
            strata_depth,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_instances_respect_bounds(spec in specs()) {
        let inst = gen_instance(&spec).unwrap();
        let x = &inst.bundle;
        let s = x.structure();
        prop_assert!(validate_bundle(x).is_valid());
        prop_assert!(x.base().len() <= spec.max_cells.max(1));
        prop_assert!(x.base().num_strata() <= spec.strata_depth);
        prop_assert!(s.cat.num_objects() <= spec.max_objects);
        prop_assert!((0..s.cat.num_objects()).all(|o| s.ff.fibre_size(o) <= spec.max_fibre_size));
    }

    #[test]
    fn attachments_add_the_cells_off_the_subcomplex(spec in specs()) {
        let inst = gen_instance(&spec).unwrap();
        for st in &inst.stages {
            let x = &st.attachment.bundle;
            prop_assert_eq!(x.base().len(), st.y.base().len() + st.m.base().len() - st.a.len());
            prop_assert!(st.attachment.inclusion.base_map.is_injective());
            prop_assert!(validate_bundle(x).is_valid());
            let top = x.base().max_stratum().unwrap();
            for c in 0..st.m.base().len() {
                let image = st.attachment.characteristic.base_map.image(c);
                prop_assert_eq!(st.a.contains(c), x.base().stratum(image) < top);
            }
        }
    }

    #[test]
    fn suites_pass_on_arbitrary_bounds(spec in specs()) {
        for suite in Suite::ALL {
            let o = run_seed(suite, &spec, false);
            prop_assert!(o.is_pass(), "{} {:?}", suite.name(), o);
        }
    }

    #[test]
    fn broken_inputs_never_count_as_violations(spec in specs()) {
        for suite in Suite::ALL {
            let o = run_seed(suite, &spec, true);
            prop_assert!(!matches!(o, Outcome::Violation { .. }), "{} {:?}", suite.name(), o);
        }
    }

    #[test]
    fn bundle_documents_round_trip(spec in specs()) {
        let x = gen_instance(&spec).unwrap().bundle;
        let text = to_canonical_string(&BundleDoc::from_bundle(&x)).unwrap();
        let back: BundleDoc = serde_json::from_str(&text).unwrap();
        prop_assert!(back.to_bundle().unwrap().equivalent(&x));
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(canonical_value(&value).unwrap(), text);
    }

    #[test]
    fn diagram_documents_round_trip(spec in specs()) {
        let x = gen_instance(&spec).unwrap().bundle;
        let p = principal_diagram(&x).unwrap();
        let doc = DiagramDoc::from_diagram(&p);
        let text = to_canonical_string(&doc).unwrap();
        let back: DiagramDoc = serde_json::from_str(&text).unwrap();
        let q = back.to_diagram().unwrap();
        prop_assert_eq!(to_canonical_string(&DiagramDoc::from_diagram(&q)).unwrap(), text);
    }

    #[test]
    fn closed_stars_are_subcomplexes(spec in specs()) {
        let x = gen_instance(&spec).unwrap().bundle;
        let b = x.base();
        for c in 0..b.len() {
            let star = closed_star(b, c);
            prop_assert!(star.contains(c));
            // the star of a higher cell may miss stratum 0, so check it unstratified
            let sub = star.extract(b);
            prop_assert!(validate_complex(&sub.with_strata(&vec![0; sub.len()]).unwrap()).is_valid());
            prop_assert!(star.cells().iter().all(|&d| b.closure(d).iter().all(|&f| star.contains(f))));
            prop_assert!(b.cofaces(c).iter().all(|&d| star.contains(d)));
        }
    }

    #[test]
    fn pullback_along_the_identity_is_the_identity(spec in specs()) {
        let x = gen_instance(&spec).unwrap().bundle;
        let (y, map) = pullback(&x, x.base_arc().clone(), &SimplicialMap::identity(x.base())).unwrap();
        prop_assert!(y.equivalent(&x));
        map.check(&y, &x).unwrap();
    }

    #[test]
    fn groupoid_bundles_have_a_chart_per_star(spec in specs()) {
        let spec = InstanceSpec { groupoid_only: true, ..spec };
        let x = gen_instance(&spec).unwrap().bundle;
        match local_triviality_certificate(&x).unwrap() {
            LocalTriviality::Atlas(atlas) => prop_assert_eq!(atlas.len(), x.base().len()),
            LocalTriviality::Counterexample { cell, .. } => prop_assert!(false, "star of {} not trivial", x.base().id(cell)),
        }
    }

    #[test]
    fn coend_classes_agree_with_orbit_search(spec in specs()) {
        let x = gen_instance(&spec).unwrap().bundle;
        let p = principal_diagram(&x).unwrap();
        let co = coend(&p, &x.structure().ff).unwrap();
        for c in 0..x.base().len() {
            let mut ours: Vec<usize> = co.classes[c].iter().map(|k| k.len()).collect();
            let mut theirs: Vec<usize> = orbit_classes(&x, c).iter().map(|k| k.len()).collect();
            ours.sort_unstable();
            theirs.sort_unstable();
            prop_assert_eq!(ours, theirs);
        }
    }

    #[test]
    fn product_totals_multiply(spec in specs()) {
        let (x, xp) = gen_pair(&spec).unwrap();
        let p = fiberwise_product(&x, &xp).unwrap();
        prop_assert!(validate_bundle(&p).is_valid());
        let (tx, txp, tp) = (realize_total(&x), realize_total(&xp), realize_total(&p));
        for c in 0..x.base().len() {
            prop_assert_eq!(tp.fibre(c).len(), tx.fibre(c).len() * txp.fibre(c).len());
        }
        let rel = |c: usize| x.base().faces(c).len();
        let expected: usize = (0..x.base().len()).map(|c| rel(c) * p.fibre_size(c)).sum();
        prop_assert_eq!(tp.relations.len(), expected);
    }

    #[test]
    fn full_subcomplex_restricts_to_itself(spec in specs()) {
        let x = gen_instance(&spec).unwrap().bundle;
        let full = Subcomplex::full(x.base());
        prop_assert!(stratbundle::strabundle::restrict(&x, &full).equivalent(&x));
    }
}
