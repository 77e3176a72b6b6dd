//! Finite simplicial base complexes with stratifications: face posets,
//! subcomplexes, closed stars, spanning trees, maps and cell attachment.

mod attach;
pub mod catalog;
mod complex;
mod map;

pub use attach::{attach_base, BaseAttachment};
pub use complex::{
    closed_star, components, poset_spanning_tree, validate_complex, BaseComplex, Cell, CellSpec, ComplexKind,
    ComplexViolation, Incidence, Subcomplex,
};
pub use map::SimplicialMap;

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::catalog::*;
    use super::*;
    use crate::Error;

    fn ix(b: &BaseComplex, id: &str) -> usize {
        b.index_of(id).unwrap()
    }

    #[test]
    fn c3_is_valid() {
        let b = cycle(3);
        assert!(validate_complex(&b).is_valid());
        assert_eq!(b.count_by_dim(), vec![3, 3]);
        assert_eq!(b.num_strata(), 1);
    }

    #[test]
    fn closure_condition_violation_is_named() {
        let mut specs = cycle(3).to_specs();
        specs.iter_mut().find(|s| s.id == "v1").unwrap().stratum = 1;
        let b = BaseComplex::from_cells(ComplexKind::Simplicial, specs).unwrap();
        let report = validate_complex(&b);
        let mut named: Vec<(String, String)> = report
            .violations
            .iter()
            .map(|v| match v {
                ComplexViolation::ClosureCondition { face, cell, .. } => (face.clone(), cell.clone()),
                other => panic!("unexpected {other}"),
            })
            .collect();
        named.sort();
        assert_eq!(named, vec![("v1".into(), "e0".into()), ("v1".into(), "e1".into())]);
    }

    #[test]
    fn disks_are_valid_two_stratum_complexes() {
        for b in [triangle_disk(), cone_disk(4)] {
            assert!(validate_complex(&b).is_valid(), "{}", validate_complex(&b));
            assert_eq!(b.num_strata(), 2);
        }
    }

    #[test]
    fn malformed_simplices_are_reported() {
        let specs = vec![
            CellSpec::new("a", 0, &[], 0),
            CellSpec::new("b", 0, &[], 0),
            CellSpec::new("x", 1, &["a", "b"], 0),
            CellSpec::new("y", 1, &["a", "b"], 0),
            CellSpec::new("z", 1, &["a"], 0),
            CellSpec::new("w", 2, &["a"], 0),
        ];
        let b = BaseComplex::from_cells(ComplexKind::Simplicial, specs).unwrap();
        let report = validate_complex(&b);
        let has = |p: &dyn Fn(&ComplexViolation) -> bool| report.violations.iter().any(p);
        assert!(has(&|v| matches!(v, ComplexViolation::DuplicateSimplex { cell, other } if cell == "y" && other == "x")));
        assert!(has(&|v| matches!(v, ComplexViolation::FaceCount { cell, .. } if cell == "z")));
        assert!(has(&|v| matches!(v, ComplexViolation::FaceDimension { cell, .. } if cell == "w")));
        assert!(BaseComplex::from_cells(ComplexKind::Simplicial, vec![CellSpec::new("a", 1, &["nope"], 0)]).is_err());
    }

    #[test]
    fn star_of_a_c3_vertex_is_a_two_edge_path() {
        let b = cycle(3);
        let v = ix(&b, "v0");
        let star = closed_star(&b, v);
        // oracle: every cell incident to v0 and all of their faces
        let mut expected = vec![v];
        for e in 0..b.len() {
            if b.faces(e).contains(&v) {
                expected.push(e);
                expected.extend_from_slice(b.faces(e));
            }
        }
        expected.sort_unstable();
        expected.dedup();
        assert_eq!(star.cells(), expected.as_slice());
        let sub = star.extract(&b);
        assert_eq!(sub.count_by_dim(), vec![3, 2]);
        assert!(validate_complex(&sub).is_valid());
    }

    #[test]
    fn star_of_top_cell_and_of_lone_vertex() {
        let b = triangle_disk();
        let f = ix(&b, "f");
        assert_eq!(closed_star(&b, f).cells(), b.closure(f));
        let p = point();
        assert_eq!(closed_star(&p, 0).cells(), &[0]);
    }

    #[test]
    fn spanning_tree_edge_counts() {
        let b = cycle(3);
        let star = closed_star(&b, ix(&b, "v0"));
        assert_eq!(poset_spanning_tree(&b, &star).unwrap().len(), star.len() - 1);
        assert_eq!(star.len() - 1, 4);
        let full = Subcomplex::full(&b);
        assert_eq!(b.incidences().len(), 6);
        let tree = poset_spanning_tree(&b, &full).unwrap();
        assert_eq!(tree.len(), 5);
        let p = point();
        assert!(poset_spanning_tree(&p, &Subcomplex::full(&p)).unwrap().is_empty());
    }

    #[test]
    fn spanning_tree_is_deterministic_and_reaches_in_order() {
        let b = cone_disk(5);
        let full = Subcomplex::full(&b);
        let t1 = poset_spanning_tree(&b, &full).unwrap();
        let t2 = poset_spanning_tree(&b, &full).unwrap();
        assert_eq!(t1, t2);
        let mut reached = vec![false; b.len()];
        reached[0] = true;
        for inc in &t1 {
            assert!(reached[inc.face] ^ reached[inc.cell]);
            reached[inc.face] = true;
            reached[inc.cell] = true;
        }
        assert!(reached.iter().all(|&r| r));
    }

    #[test]
    fn disconnected_region_is_refused() {
        let b = cycle(4);
        let sub = Subcomplex::from_ids(&b, &["v0", "v2"]).unwrap();
        assert!(matches!(poset_spanning_tree(&b, &sub), Err(Error::Disconnected { .. })));
        assert_eq!(components(&b, &sub).len(), 2);
        assert!(matches!(Subcomplex::from_ids(&b, &["e0"]), Err(Error::NotSubcomplex { .. })));
    }

    fn triangle() -> BaseComplex {
        BaseComplex::from_cells(
            ComplexKind::Simplicial,
            vec![
                CellSpec::new("a", 0, &[], 0),
                CellSpec::new("b", 0, &[], 0),
                CellSpec::new("c", 0, &[], 0),
                CellSpec::new("ab", 1, &["a", "b"], 0),
                CellSpec::new("bc", 1, &["b", "c"], 0),
                CellSpec::new("ac", 1, &["a", "c"], 0),
                CellSpec::new("abc", 2, &["ab", "bc", "ac"], 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn attaching_a_triangle_along_its_boundary() {
        let y = cycle(3);
        let m = triangle();
        let a = Subcomplex::from_ids(&m, &["a", "b", "c", "ab", "bc", "ac"]).unwrap();
        let a_complex = a.extract(&m);
        let vm: BTreeMap<usize, usize> = [("a", "v0"), ("b", "v1"), ("c", "v2")]
            .iter()
            .map(|(s, t)| (ix(&a_complex, s), ix(&y, t)))
            .collect();
        let h = SimplicialMap::from_vertex_map(&a_complex, &y, &vm).unwrap();
        let att = attach_base(&y, &m, &a, &h, false).unwrap();
        let x = &att.complex;
        assert!(validate_complex(x).is_valid());
        assert_eq!(x.count_by_dim(), vec![3, 3, 1]);
        assert_eq!(x.num_strata(), 2);
        assert_eq!(x.stratum(ix(x, "abc")), 1);
        assert!(att.inclusion.is_injective());
        att.inclusion.check_stratum_preserving(&y, x).unwrap();
        assert_eq!(att.characteristic.image(ix(&m, "bc")), ix(x, "e1"));
        let faces: Vec<&str> = x.faces(ix(x, "abc")).iter().map(|&f| x.id(f)).collect();
        assert_eq!(faces, vec!["e0", "e1", "e2"]);
    }

    #[test]
    fn attaching_along_empty_subcomplex_is_disjoint_union() {
        let y = cycle(3);
        let m = interval();
        let renamed: Vec<CellSpec> = m
            .to_specs()
            .into_iter()
            .map(|mut s| {
                s.id = format!("m{}", s.id);
                s.faces = s.faces.iter().map(|f| format!("m{f}")).collect();
                s
            })
            .collect();
        let m = BaseComplex::from_cells(ComplexKind::Simplicial, renamed).unwrap();
        let a = Subcomplex::new(&m, []).unwrap();
        let h = SimplicialMap::from_cell_map(&a.extract(&m), &y, vec![]).unwrap();
        let att = attach_base(&y, &m, &a, &h, false).unwrap();
        assert_eq!(att.complex.len(), y.len() + m.len());
        assert_eq!(components(&att.complex, &Subcomplex::full(&att.complex)).len(), 2);
    }

    #[test]
    fn interval_to_point_needs_delta_mode() {
        let y = point();
        let m = interval();
        let a = Subcomplex::from_ids(&m, &["v0", "v1"]).unwrap();
        let ac = a.extract(&m);
        let h = SimplicialMap::from_cell_map(&ac, &y, vec![0, 0]).unwrap();
        assert!(matches!(attach_base(&y, &m, &a, &h, false), Err(Error::DegenerateAttachment { .. })));
        let att = attach_base(&y, &m, &a, &h, true).unwrap();
        assert_eq!(att.complex.kind(), ComplexKind::Delta);
        assert_eq!(att.complex.count_by_dim(), vec![1, 1]);
        assert!(validate_complex(&att.complex).is_valid());
    }

    #[test]
    fn attaching_onto_an_existing_simplex_collides() {
        let y = triangle_disk();
        let renamed = BaseComplex::from_cells(
            ComplexKind::Simplicial,
            vec![
                CellSpec::new("p", 0, &[], 0),
                CellSpec::new("q", 0, &[], 0),
                CellSpec::new("pq", 1, &["p", "q"], 0),
            ],
        )
        .unwrap();
        let a = Subcomplex::from_ids(&renamed, &["p", "q"]).unwrap();
        let ac = a.extract(&renamed);
        let h = SimplicialMap::from_cell_map(&ac, &y, vec![ix(&y, "v0"), ix(&y, "v1")]).unwrap();
        assert!(matches!(attach_base(&y, &renamed, &a, &h, false), Err(Error::CellCollision { .. })));
    }

    #[test]
    fn subdivided_circle_collapse_map() {
        let c6 = cycle(6);
        let c3 = cycle(3);
        let vm: BTreeMap<usize, usize> = (0..6)
            .map(|i| (ix(&c6, &format!("v{i}")), ix(&c3, &format!("v{}", i / 2))))
            .collect();
        let f = SimplicialMap::from_vertex_map(&c6, &c3, &vm).unwrap();
        assert_eq!(f.image(ix(&c6, "e0")), ix(&c3, "v0"));
        assert_eq!(f.image(ix(&c6, "e1")), ix(&c3, "e0"));
        assert_eq!(f.image(ix(&c6, "e5")), ix(&c3, "e2"));
        f.check_stratum_preserving(&c6, &c3).unwrap();
        let same = SimplicialMap::from_cell_map(&c6, &c3, f.cell_map().to_vec()).unwrap();
        assert_eq!(same, f);
        let g = f.then(&SimplicialMap::identity(&c3));
        assert_eq!(g, f);
    }

    #[test]
    fn non_simplicial_vertex_map_is_refused() {
        let c3 = cycle(3);
        let c4 = cycle(4);
        let vm: BTreeMap<usize, usize> =
            (0..3).map(|i| (ix(&c3, &format!("v{i}")), ix(&c4, &format!("v{}", [0, 1, 2][i])))).collect();
        // e2 = {v2, v0} has no image in C4
        assert!(matches!(SimplicialMap::from_vertex_map(&c3, &c4, &vm), Err(Error::NotSimplicial(_))));
    }

    #[test]
    fn stratum_preservation_is_checked() {
        let disk = triangle_disk();
        let circle = cycle(3);
        let to_circle =
            SimplicialMap::from_cell_map(&circle, &disk, (0..circle.len()).map(|c| ix(&disk, circle.id(c))).collect())
                .unwrap();
        to_circle.check_stratum_preserving(&circle, &disk).unwrap();
        let flat = disk.with_strata(&vec![0; disk.len()]).unwrap();
        let id = SimplicialMap::identity(&disk);
        assert!(matches!(id.check_stratum_preserving(&disk, &flat), Err(Error::NotStratumPreserving { .. })));
    }
}
