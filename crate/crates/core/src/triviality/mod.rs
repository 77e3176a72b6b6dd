//! Star-by-star trivialization, holonomy obstructions, covering spaces and
//! the passage from bundles over stratified bases to stratified bundles.

mod covering;
mod stratify;
mod tree;
mod trivialize;

pub use covering::{covering_space, BaseComponent, CoveringSpace, EvenCovering, Monodromy};
pub use stratify::{stratify_bundle, StratifiedBundle, StratumPiece};
pub use tree::{cycle_notation, loop_monodromy, transport};
pub use trivialize::{
    local_triviality_certificate, trivialize_over, LocalTriviality, Obstruction, Triviality, Trivialization,
};

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::cellbase::{catalog as bases, closed_star, BaseComplex, SimplicialMap, Subcomplex};
    use crate::fincat::{catalog as cats, StructureCategory};
    use crate::strabundle::{catalog::*, pullback, validate_bundle, StratBundle};
    use crate::Error;

    fn product(base: BaseComplex, s: StructureCategory, obj: &str) -> StratBundle {
        let o = s.cat.object_index(obj).unwrap();
        StratBundle::product(Arc::new(base), Arc::new(s), o).unwrap()
    }

    fn circle_walk(b: &BaseComplex, n: usize) -> Vec<usize> {
        let ix = |s: String| b.index_of(&s).unwrap();
        let mut walk: Vec<usize> = (0..n).flat_map(|i| [ix(format!("v{i}")), ix(format!("e{i}"))]).collect();
        walk.push(walk[0]);
        walk
    }

    #[test]
    fn double_cover_has_an_atlas_of_six_stars() {
        let x = double_cover_c3();
        let LocalTriviality::Atlas(atlas) = local_triviality_certificate(&x).unwrap() else {
            panic!("double cover is locally trivial");
        };
        assert_eq!(atlas.len(), 6);
        for t in &atlas {
            assert!(t.incompatible(&x).is_empty());
            let (restricted, product, map) = t.product_iso(&x).unwrap();
            map.check(&restricted, &product).unwrap();
        }
    }

    #[test]
    fn double_cover_is_globally_obstructed() {
        let x = double_cover_c3();
        let Triviality::Obstructed(o) = trivialize_over(&x, &Subcomplex::full(x.base())).unwrap() else {
            panic!("double cover is not trivial");
        };
        assert_eq!(x.structure().cat.morphism_id(o.holonomy), "p2_21");
        assert_eq!(o.cycle.len(), 7);
        assert_eq!(o.cycle.first(), o.cycle.last());
        // the product of transitions around the reported cycle is the swap
        assert_eq!(loop_monodromy(&x, &o.cycle).unwrap(), vec![1, 0]);
    }

    #[test]
    fn product_bundles_get_identity_charts() {
        let x = product(bases::cone_disk(5), cats::permutation_category(&[3]), "3");
        let t = trivialize_over(&x, &Subcomplex::full(x.base())).unwrap();
        let t = t.trivialization().unwrap();
        assert!(t.charts.iter().all(|&m| x.structure().cat.is_identity(m)));
        assert_eq!(t.tree.len(), x.base().len() - 1);
    }

    #[test]
    fn twisted_disk_is_trivial() {
        let x = swapped_disk();
        let t = trivialize_over(&x, &Subcomplex::full(x.base())).unwrap();
        let t = t.trivialization().unwrap();
        assert!(t.incompatible(&x).is_empty());
        assert!(local_triviality_certificate(&x).unwrap().holds());
    }

    #[test]
    fn non_groupoid_structures_are_refused() {
        match local_triviality_certificate(&collapse_disk()) {
            Err(Error::NotGroupoid { witness }) => {
                let s = cats::finite_sets(&[1, 2]);
                let w = s.cat.morphism_index(&witness).unwrap();
                assert!(s.inverse(w).is_none());
            }
            other => panic!("expected a groupoid error, got {other:?}"),
        }
        assert!(matches!(
            local_triviality_certificate(&orbit_free_cover()),
            Err(Error::NotGroupoid { witness }) if witness == "proj"
        ));
    }

    #[test]
    fn collapse_inside_the_region_is_an_error() {
        let x = collapse_disk();
        assert!(matches!(
            trivialize_over(&x, &Subcomplex::full(x.base())),
            Err(Error::NotInvertible { .. })
        ));
        let apex = closed_star(x.base(), x.base().index_of("c").unwrap());
        assert!(matches!(trivialize_over(&x, &apex), Err(Error::NotInvertible { .. })));
        // the boundary circle alone carries identity transitions
        let edge = Subcomplex::closure_of(x.base(), [x.base().index_of("e0").unwrap()]);
        assert!(trivialize_over(&x, &edge).unwrap().is_trivial());
    }

    #[test]
    fn disconnected_regions_are_refused() {
        let x = double_cover_c3();
        let b = x.base();
        let two_points = Subcomplex::new(b, [b.index_of("v0").unwrap(), b.index_of("v1").unwrap()]).unwrap();
        assert!(matches!(trivialize_over(&x, &two_points), Err(Error::Disconnected { .. })));
    }

    #[test]
    fn double_cover_covering_space() {
        let cov = covering_space(&double_cover_c3()).unwrap();
        assert_eq!(cov.num_components, 1);
        assert_eq!(cov.counts_by_dim, vec![6, 6]);
        assert_eq!(cov.monodromy.len(), 1);
        assert_eq!(cov.monodromy[0].cycles, "(1 2)");
        assert!(cov.even_covering.holds());
        assert_eq!(cov.even_covering.stars_checked, 12);
        assert_eq!(cov.base_components[0].sheets, 2);
    }

    #[test]
    fn trivial_two_sheets_are_disjoint() {
        let cov = covering_space(&trivial_2sheet()).unwrap();
        assert_eq!(cov.num_components, 2);
        assert_eq!(cov.monodromy[0].cycles, "()");
        assert_eq!(cov.base_components[0].lifts, 2);
    }

    #[test]
    fn triple_cover_is_connected() {
        let x = triple_cover_c3();
        let cov = covering_space(&x).unwrap();
        assert_eq!(cov.num_components, 1);
        // oracle: the orbit of 1 under the monodromy is everything
        let p = &cov.monodromy[0].permutation;
        let orbit: Vec<usize> = std::iter::successors(Some(0), |&i| Some(p[i]).filter(|&j| j != 0)).collect();
        assert_eq!(orbit.len(), 3);
        assert!(cov.even_covering.holds());
    }

    #[test]
    fn collapses_are_not_coverings() {
        assert!(matches!(covering_space(&collapse_disk()), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn cycle_notation_names_elements() {
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        assert_eq!(cycle_notation(&[1, 0, 3, 2], &names), "(a b)(c d)");
        assert_eq!(cycle_notation(&[1, 2, 0, 3], &names), "(a b c)");
        assert_eq!(cycle_notation(&[0, 1, 2, 3], &names), "()");
    }

    #[test]
    fn pullback_monodromy_follows_the_image_cycle() {
        let x = double_cover_c3();
        let c6 = Arc::new(bases::cycle(6));
        let vm: BTreeMap<usize, usize> = [0, 1, 1, 2, 2, 0]
            .iter()
            .enumerate()
            .map(|(i, &j)| (c6.index_of(&format!("v{i}")).unwrap(), x.base().index_of(&format!("v{j}")).unwrap()))
            .collect();
        let f = SimplicialMap::from_vertex_map(&c6, x.base(), &vm).unwrap();
        let (px, _) = pullback(&x, c6.clone(), &f).unwrap();
        let walk = circle_walk(&c6, 6);
        let mut image: Vec<usize> = walk.iter().map(|&c| f.image(c)).collect();
        image.dedup();
        assert_eq!(loop_monodromy(&px, &walk).unwrap(), loop_monodromy(&x, &image).unwrap());
        assert_eq!(loop_monodromy(&x, &image).unwrap(), vec![1, 0]);
    }

    #[test]
    fn stratified_product_disk() {
        let x = product(bases::triangle_disk(), cats::permutation_category(&[2]), "2");
        let flat = x.with_base(Arc::new(x.base().with_strata(&vec![0; x.base().len()]).unwrap())).unwrap();
        let strata = x.base().strata();
        let s = stratify_bundle(&flat, &strata).unwrap();
        assert_eq!(s.pieces.len(), 2);
        assert_eq!(s.pieces[1].attaching.len(), 6);
        assert!(s.round_trips().unwrap());
        assert_eq!(s.bundle, x);
    }

    #[test]
    fn stratified_double_cover() {
        let x = double_cover_c3();
        let b = x.base();
        let v0 = b.index_of("v0").unwrap();
        let strata: Vec<usize> = (0..b.len()).map(|c| usize::from(c != v0)).collect();
        let s = stratify_bundle(&x, &strata).unwrap();
        for piece in &s.pieces {
            assert!(validate_bundle(&piece.bundle).is_valid());
            assert!(covering_space(&piece.bundle).unwrap().even_covering.holds());
        }
        assert!(s.round_trips().unwrap());
    }

    #[test]
    fn stratify_needs_isomorphisms_and_closed_strata() {
        let x = collapse_disk();
        assert!(matches!(stratify_bundle(&x, &x.base().strata()), Err(Error::NotInvertible { .. })));
        let y = double_cover_c3();
        let b = y.base();
        let e0 = b.index_of("e0").unwrap();
        // a vertex above the edge it bounds
        let bad: Vec<usize> = (0..b.len()).map(|c| usize::from(c != e0)).collect();
        assert!(matches!(stratify_bundle(&y, &bad), Err(Error::Invalid { .. })));
    }
}
