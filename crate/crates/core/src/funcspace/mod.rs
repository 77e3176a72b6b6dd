//! Function-space families, the principal diagram, coends and associated
//! bundles.

mod coend;
mod diagram;

pub use coend::{
    associated_bundle, coend, coend_iso, nkc_certificate, reconstruct_check, AssociatedBundle, Coend, CoendMember,
    HomSize, NkcCertificate, ReconstructCheck,
};
pub(crate) use diagram::faithful;
pub use diagram::{
    function_bundle, principal_diagram, validate_diagram, DiagramBundle, DiagramViolation, FunctionBundle,
};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cellbase::{catalog as bases, closed_star, BaseComplex};
    use crate::fincat::{catalog as cats, product_category, CatFunctor, FibreFunctor, StructureCategory};
    use crate::strabundle::{catalog::*, restrict, validate_bundle, StratBundle};
    use crate::Error;

    fn product(base: BaseComplex, s: StructureCategory, obj: &str) -> StratBundle {
        let o = s.cat.object_index(obj).unwrap();
        StratBundle::product(Arc::new(base), Arc::new(s), o).unwrap()
    }

    fn monodromy(x: &StratBundle) -> Vec<usize> {
        let b = x.base();
        let ix = |s: String| b.index_of(&s).unwrap();
        (0..x.fibre_size(0))
            .map(|start| {
                (0..3).fold(start, |elem, i| {
                    let (a, e, c) = (ix(format!("v{i}")), ix(format!("e{i}")), ix(format!("v{}", (i + 1) % 3)));
                    let (ta, tc) = (x.transition(a, e).unwrap(), x.transition(c, e).unwrap());
                    let lift = (0..x.fibre_size(e)).find(|&y| x.act(ta, y) == elem).unwrap();
                    x.act(tc, lift)
                })
            })
            .collect()
    }

    fn point_fibre_functor(cat: &crate::fincat::FiniteCategory) -> FibreFunctor {
        FibreFunctor::new(vec![vec!["*".into()]; cat.num_objects()], vec![vec![0]; cat.num_morphisms()])
    }

    #[test]
    fn function_bundle_counts_hom_sets() {
        let x = product(bases::cycle(3), cats::permutation_category(&[2]), "2");
        let xv = function_bundle(&x, 0).unwrap();
        assert!(validate_bundle(&xv.bundle).is_valid());
        assert!((0..6).all(|c| xv.bundle.fibre_size(c) == 2));
    }

    #[test]
    fn orbit_category_function_bundles_are_fixed_points() {
        let x = orbit_free_cover();
        let cat = &x.structure().cat;
        let free = function_bundle(&x, cat.object_index("G/e").unwrap()).unwrap();
        let fixed = function_bundle(&x, cat.object_index("G/G").unwrap()).unwrap();
        for c in 0..x.base().len() {
            assert_eq!(free.bundle.fibre_size(c), x.fibre_size(c));
            // the action on G/e is free, so there are no fixed points
            assert_eq!(fixed.bundle.fibre_size(c), 0);
        }
        assert!(validate_bundle(&free.bundle).is_valid());
        assert!(validate_bundle(&fixed.bundle).is_valid());
    }

    #[test]
    fn function_bundle_commutes_with_restriction() {
        let x = collapse_disk();
        let star = closed_star(x.base(), x.base().index_of("c").unwrap());
        for v in 0..x.structure().cat.num_objects() {
            let a = restrict(&function_bundle(&x, v).unwrap().bundle, &star);
            let b = function_bundle(&restrict(&x, &star), v).unwrap().bundle;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn principal_diagram_of_a_group_is_the_right_action() {
        let x = double_cover_c3_z2();
        let p = principal_diagram(&x).unwrap();
        assert!(validate_diagram(&p).is_valid());
        let cat = p.cat();
        let g = cat.morphism_index("g").unwrap();
        let e = cat.morphism_index("e").unwrap();
        for c in 0..x.base().len() {
            // hom(*, *) = [e, g]; β ↦ β∘g swaps them
            assert_eq!(p.action(g, c), &[1, 0]);
            assert_eq!(p.action(e, c), &[0, 1]);
        }
    }

    #[test]
    fn principal_diagram_of_point_fibres() {
        let x = product(bases::cycle(3), cats::trivial(), "pt");
        let p = principal_diagram(&x).unwrap();
        assert_eq!(p.components().len(), 1);
        assert!((0..6).all(|c| p.component(0).fibre_size(c) == 1));
    }

    #[test]
    fn corrupted_actions_are_detected() {
        let x = double_cover_c3_z2();
        let p = principal_diagram(&x).unwrap();
        let mut actions = p.actions().to_vec();
        let e = p.cat().morphism_index("e").unwrap();
        actions[e][0] = vec![1, 0];
        assert!(matches!(DiagramBundle::new(&x, actions), Err(Error::Invalid { .. })));
    }

    #[test]
    fn point_diagram_coend_is_the_fibre() {
        let s = cats::z2(true);
        let x = product(bases::point(), s.clone(), "*");
        let p = principal_diagram(&x).unwrap();
        let co = coend(&p, &s.ff).unwrap();
        assert_eq!(co.num_classes(0), 2);
        // oracle: (β∘g, y) ∼ (β, g·y) on {e, g} × {0, 1}
        let cls = |b: usize, y: usize| co.class_of(0, (0, b, y));
        assert_eq!(cls(1, 0), cls(0, 1));
        assert_eq!(cls(0, 0), cls(1, 1));
        assert_ne!(cls(0, 0), cls(0, 1));
        let iso = coend_iso(&p, &co, &x, |_, a, y| s.ff.action(a)[y]).unwrap();
        assert_eq!(iso[0].len(), 2);
    }

    #[test]
    fn coend_with_point_functor_has_one_class_per_cell() {
        let x = collapse_disk();
        let p = principal_diagram(&x).unwrap();
        let co = coend(&p, &point_fibre_functor(p.cat())).unwrap();
        assert!((0..x.base().len()).all(|c| co.num_classes(c) == 1));
    }

    #[test]
    fn reconstruction_of_examples() {
        for x in [
            product(bases::cycle(3), cats::permutation_category(&[2]), "2"),
            double_cover_c3(),
            triple_cover_c3(),
            collapse_disk(),
            orbit_free_cover(),
            swapped_disk(),
        ] {
            let check = reconstruct_check(&x).unwrap();
            assert!(check.holds, "{:?}", check.failure);
            assert_eq!(check.iso.len(), x.base().len());
        }
    }

    #[test]
    fn reconstruction_over_a_non_faithful_functor() {
        let x = product(bases::cycle(3), cats::z2(false), "*");
        assert!(reconstruct_check(&x).unwrap().holds);
    }

    #[test]
    fn associated_bundle_along_identity() {
        let x = double_cover_c3();
        let id = CatFunctor::identity(&x.structure().cat);
        let out = associated_bundle(&x, &id, x.structure_arc().clone()).unwrap();
        assert_eq!(out.bundle, x);
        assert_eq!(out.iso, reconstruct_check(&x).unwrap().iso);
    }

    #[test]
    fn associated_bundle_into_the_trivial_category() {
        let x = swapped_disk();
        let t = Arc::new(cats::trivial());
        let collapse = CatFunctor {
            on_objects: vec![0; x.structure().cat.num_objects()],
            on_morphisms: vec![0; x.structure().cat.num_morphisms()],
        };
        let out = associated_bundle(&x, &collapse, t.clone()).unwrap();
        assert!((0..x.base().len()).all(|c| out.bundle.fibre_size(c) == 1));
        assert!(validate_bundle(&out.bundle).is_valid());
    }

    #[test]
    fn trivial_homomorphism_kills_monodromy() {
        let x = double_cover_c3_z2();
        assert_eq!(monodromy(&x), vec![1, 0]);
        let cat = &x.structure().cat;
        let e = cat.morphism_index("e").unwrap();
        let trivial = CatFunctor {
            on_objects: vec![0],
            on_morphisms: vec![e; cat.num_morphisms()],
        };
        let out = associated_bundle(&x, &trivial, x.structure_arc().clone()).unwrap();
        assert!(validate_bundle(&out.bundle).is_valid());
        assert_eq!(monodromy(&out.bundle), vec![0, 1]);
    }

    #[test]
    fn associated_bundles_compose() {
        let x = double_cover_c3_z2();
        let z2 = x.structure_arc().clone();
        let cat = &z2.cat;
        let swap = CatFunctor::identity(cat);
        let t = Arc::new(cats::trivial());
        let to_point = CatFunctor {
            on_objects: vec![0],
            on_morphisms: vec![0; cat.num_morphisms()],
        };
        let once = associated_bundle(&associated_bundle(&x, &swap, z2.clone()).unwrap().bundle, &to_point, t.clone()).unwrap();
        let composed = associated_bundle(&x, &swap.then(&to_point), t).unwrap();
        assert_eq!(once.bundle, composed.bundle);
    }

    #[test]
    fn associated_bundle_rejects_non_functors() {
        let x = double_cover_c3_z2();
        let cat = &x.structure().cat;
        let g = cat.morphism_index("g").unwrap();
        let bad = CatFunctor {
            on_objects: vec![0],
            on_morphisms: vec![g; 2],
        };
        assert!(matches!(associated_bundle(&x, &bad, x.structure_arc().clone()), Err(Error::NotFunctor(_))));
    }

    #[test]
    fn nkc_certificate_sizes() {
        let c = nkc_certificate(&cats::permutation_category(&[1, 2, 3]));
        assert!(c.holds);
        assert_eq!(c.max_hom_size, 6);
        let a = cats::z2(true);
        let b = cats::permutation_category(&[3]);
        let p = nkc_certificate(&product_category(&a, &b));
        assert_eq!(p.max_hom_size, nkc_certificate(&a).max_hom_size * nkc_certificate(&b).max_hom_size);
    }
}
