//! Finite structure categories: finite categories, fibre functors into
//! finite sets, and the derived categories built from them.

mod category;
pub mod catalog;
mod functor;

pub use category::{
    is_groupoid, opposite, validate_category, CategoryParts, CategoryViolation, FiniteCategory, GroupoidCheck,
    Morphism,
};
pub use functor::{
    faithful_image, hom_fibre_functor, product_category, validate_fibre_functor, CatFunctor, FaithfulImage,
    FibreFunctor, FunctorViolation, StructureCategory,
};

pub(crate) use functor::pair_id;

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;

    fn parts(objects: &[&str], morphisms: &[(&str, &str, &str)], ids: &[(&str, &str)], compose: &[(&str, &str, &str)]) -> CategoryParts {
        CategoryParts {
            objects: objects.iter().map(|s| s.to_string()).collect(),
            morphisms: morphisms.iter().map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())).collect(),
            identities: ids.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            compose: compose.iter().map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())).collect(),
        }
    }

    #[test]
    fn z2_is_a_valid_group() {
        let s = z2(true);
        assert!(validate_category(&s.cat).is_valid());
        assert!(validate_fibre_functor(&s.cat, &s.ff).is_valid());
        assert!(is_groupoid(&s.cat).is_groupoid);
    }

    #[test]
    fn broken_associativity_names_the_triple() {
        // Z/3 = {e, a, b} with b∘b changed from a to e
        let mut p = parts(&["*"], &[("e", "*", "*"), ("a", "*", "*"), ("b", "*", "*")], &[("*", "e")], &[]);
        let table = [
            ("e", "e", "e"),
            ("e", "a", "a"),
            ("e", "b", "b"),
            ("a", "e", "a"),
            ("b", "e", "b"),
            ("a", "a", "b"),
            ("a", "b", "e"),
            ("b", "a", "e"),
            ("b", "b", "e"),
        ];
        p.compose = table.iter().map(|(g, f, gf)| (g.to_string(), f.to_string(), gf.to_string())).collect();
        let cat = FiniteCategory::from_parts(p).unwrap();
        let report = validate_category(&cat);
        // b∘(b∘a) = b∘e = b, (b∘b)∘a = e∘a = a
        assert!(report.violations.contains(&CategoryViolation::NonAssociative {
            h: "b".into(),
            g: "b".into(),
            f: "a".into()
        }));
        for v in &report.violations {
            let CategoryViolation::NonAssociative { h, g, f } = v else {
                panic!("unexpected violation {v}");
            };
            let (h, g, f) = (cat.morphism_index(h).unwrap(), cat.morphism_index(g).unwrap(), cat.morphism_index(f).unwrap());
            assert_ne!(cat.comp(h, cat.comp(g, f)), cat.comp(cat.comp(h, g), f));
        }
    }

    #[test]
    fn permutation_category_hom_sizes() {
        let s = permutation_category(&[1, 2]);
        assert!(validate_category(&s.cat).is_valid());
        let two = s.cat.object_index("2").unwrap();
        assert_eq!(s.cat.hom(two, two).len(), 2);
        let three = permutation_category(&[1, 2, 3]);
        let o3 = three.cat.object_index("3").unwrap();
        assert_eq!(three.cat.hom(o3, o3).len(), 6);
    }

    #[test]
    fn faithful_image_collapses_trivial_action() {
        let fi = faithful_image(&z2(false).cat, &z2(false).ff);
        assert_eq!(fi.structure.cat.num_morphisms(), 1);
        assert!(validate_category(&fi.structure.cat).is_valid());
        assert_eq!(fi.quotient, vec![0, 0]);
    }

    #[test]
    fn faithful_image_of_swap_is_bijective() {
        let s = z2(true);
        let fi = faithful_image(&s.cat, &s.ff);
        assert!(fi.is_bijective());
        assert_eq!(fi.structure.cat, s.cat);
    }

    #[test]
    fn faithful_image_merges_parallel_pair() {
        // two parallel morphisms a → b with the same function
        let cat = FiniteCategory::from_parts(parts(
            &["a", "b"],
            &[("ia", "a", "a"), ("ib", "b", "b"), ("u", "a", "b"), ("v", "a", "b")],
            &[("a", "ia"), ("b", "ib")],
            &[
                ("ia", "ia", "ia"),
                ("ib", "ib", "ib"),
                ("u", "ia", "u"),
                ("v", "ia", "v"),
                ("ib", "u", "u"),
                ("ib", "v", "v"),
            ],
        ))
        .unwrap();
        let ff = FibreFunctor::new(
            vec![vec!["x".into(), "y".into()], vec!["p".into()]],
            vec![vec![0, 1], vec![0], vec![0, 0], vec![0, 0]],
        );
        assert!(validate_fibre_functor(&cat, &ff).is_valid());
        // oracle: compare action tables pairwise
        let mut merged = Vec::new();
        for f in 0..cat.num_morphisms() {
            for g in f + 1..cat.num_morphisms() {
                if cat.source(f) == cat.source(g) && cat.target(f) == cat.target(g) && ff.action(f) == ff.action(g) {
                    merged.push((f, g));
                }
            }
        }
        assert_eq!(merged.len(), 1);
        let fi = faithful_image(&cat, &ff);
        assert_eq!(fi.structure.cat.num_morphisms(), 3);
        let (f, g) = merged[0];
        assert_eq!(fi.quotient[f], fi.quotient[g]);
        assert_eq!(fi.structure.cat.morphism_id(fi.quotient[f]), "u");
        let again = faithful_image(&fi.structure.cat, &fi.structure.ff);
        assert!(again.is_bijective());
    }

    #[test]
    fn orbit_category_is_not_a_groupoid() {
        let s = z2_orbit_category();
        assert!(validate_category(&s.cat).is_valid());
        let check = is_groupoid(&s.cat);
        assert!(!check.is_groupoid);
        assert_eq!(check.witness.as_deref(), Some("proj"));
        // exhaustive inverse search agrees
        let proj = s.cat.morphism_index("proj").unwrap();
        let (a, b) = (s.cat.source(proj), s.cat.target(proj));
        assert!(s.cat.hom(b, a).is_empty());
    }

    #[test]
    fn finite_sets_collapse_is_not_invertible() {
        let s = finite_sets(&[1, 2]);
        let check = is_groupoid(&s.cat);
        assert!(!check.is_groupoid);
        let w = s.cat.morphism_index(check.witness.as_deref().unwrap()).unwrap();
        let act = s.ff.action(w);
        let injective = act.iter().enumerate().all(|(i, x)| !act[i + 1..].contains(x));
        let surjective = (0..s.ff.fibre_size(s.cat.target(w))).all(|y| act.contains(&y));
        assert!(!(injective && surjective));
    }

    #[test]
    fn hom_functor_post_composes() {
        let s = z2(true);
        let hv = hom_fibre_functor(&s.cat, 0);
        assert!(validate_fibre_functor(&s.cat, &hv).is_valid());
        assert_eq!(hv.fibre(0), &["e".to_string(), "g".to_string()]);
        let g = s.cat.morphism_index("g").unwrap();
        // g∘e = g, g∘g = e
        assert_eq!(hv.action(g), &[1, 0]);
        let e = s.cat.morphism_index("e").unwrap();
        assert_eq!(hv.action(e), &[0, 1]);

        let p = permutation_category(&[2]);
        let hv = hom_fibre_functor(&p.cat, 0);
        assert_eq!(hv.fibre_size(0), 2);
    }

    #[test]
    fn product_with_trivial_category() {
        let p = product_category(&z2(true), &trivial());
        assert_eq!(p.cat.num_objects(), 1);
        assert_eq!(p.cat.num_morphisms(), 2);
        assert!(validate_category(&p.cat).is_valid());
        assert!(validate_fibre_functor(&p.cat, &p.ff).is_valid());
    }

    #[test]
    fn product_hom_counts_multiply() {
        let a = z2_orbit_category();
        let b = permutation_category(&[1, 2]);
        let p = product_category(&a, &b);
        assert!(validate_category(&p.cat).is_valid());
        assert!(validate_fibre_functor(&p.cat, &p.ff).is_valid());
        for v in 0..a.cat.num_objects() {
            for w in 0..a.cat.num_objects() {
                for v2 in 0..b.cat.num_objects() {
                    for w2 in 0..b.cat.num_objects() {
                        let src = p.cat.object_index(&pair_id(a.cat.object_id(v), b.cat.object_id(v2))).unwrap();
                        let tgt = p.cat.object_index(&pair_id(a.cat.object_id(w), b.cat.object_id(w2))).unwrap();
                        assert_eq!(p.cat.hom(src, tgt).len(), a.cat.hom(v, w).len() * b.cat.hom(v2, w2).len());
                    }
                }
            }
        }
    }

    #[test]
    fn product_action_swaps_first_coordinate() {
        let p = product_category(&z2(true), &z2(false));
        let m = p.cat.morphism_index("(g,e)").unwrap();
        let fib = p.ff.fibre(p.cat.source(m));
        // enumerate the product table by hand
        for (i, &j) in p.ff.action(m).iter().enumerate() {
            let (x, y) = fib[i].trim_matches(|c| c == '(' || c == ')').split_once(',').unwrap();
            let (x2, y2) = fib[j].trim_matches(|c| c == '(' || c == ')').split_once(',').unwrap();
            assert_ne!(x, x2);
            assert_eq!(y, y2);
        }
    }

    #[test]
    fn opposite_is_an_involution() {
        for s in [z2(true), z2_orbit_category(), finite_sets(&[1, 2])] {
            let op = opposite(&s.cat);
            assert!(validate_category(&op).is_valid());
            assert_eq!(opposite(&op), s.cat);
            for a in 0..s.cat.num_objects() {
                for b in 0..s.cat.num_objects() {
                    assert_eq!(op.hom(a, b), s.cat.hom(b, a));
                }
            }
            assert_eq!(is_groupoid(&op).is_groupoid, is_groupoid(&s.cat).is_groupoid);
        }
    }

    #[test]
    fn functor_validation_rejects_bad_composition() {
        let s = z2(true);
        let bad = CatFunctor {
            on_objects: vec![0],
            on_morphisms: vec![1, 1],
        };
        assert!(bad.validate(&s.cat, &s.cat).is_err());
        let trivial_hom = CatFunctor {
            on_objects: vec![0],
            on_morphisms: vec![0, 0],
        };
        trivial_hom.validate(&s.cat, &s.cat).unwrap();
        CatFunctor::identity(&s.cat).validate(&s.cat, &s.cat).unwrap();
    }
}
