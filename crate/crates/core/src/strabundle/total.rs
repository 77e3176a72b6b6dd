use std::fmt::Write;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::bundle::StratBundle;
use super::map::FBundleMap;

/// The category of elements of a bundle: one element per pair
/// `(cell, fibre element)`, related to `(face, transition(v))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TotalComplex {
    /// `(cell, element)` pairs, grouped by cell in canonical order.
    pub elements: Vec<(usize, usize)>,
    /// Codimension-one relations `(lower, upper)` as element indices.
    pub relations: Vec<(usize, usize)>,
    offsets: Vec<usize>,
}

impl TotalComplex {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element_index(&self, cell: usize, v: usize) -> usize {
        self.offsets[cell] + v
    }

    pub fn projection(&self, e: usize) -> usize {
        self.elements[e].0
    }

    /// Element indices over a cell; in bijection with its fibre.
    pub fn fibre(&self, cell: usize) -> std::ops::Range<usize> {
        self.offsets[cell]..self.offsets[cell + 1]
    }

    /// Connected components as a label per element, labels numbered by
    /// first appearance.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut uf = UnionFind::<usize>::new(self.len());
        for &(a, b) in &self.relations {
            uf.union(a, b);
        }
        let mut label_of_root = vec![usize::MAX; self.len()];
        let mut next = 0;
        (0..self.len())
            .map(|e| {
                let r = uf.find(e);
                if label_of_root[r] == usize::MAX {
                    label_of_root[r] = next;
                    next += 1;
                }
                label_of_root[r]
            })
            .collect()
    }

    pub fn num_components(&self) -> usize {
        self.component_labels().into_iter().max().map_or(0, |m| m + 1)
    }

    /// Number of elements over cells of each dimension.
    pub fn count_by_dim(&self, x: &StratBundle) -> Vec<usize> {
        let mut out = x.base().count_by_dim();
        out.iter_mut().for_each(|n| *n = 0);
        for &(c, _) in &self.elements {
            out[x.base().dim(c)] += 1;
        }
        out
    }

    /// Graphviz rendering: elements are nodes labelled `cell:element`.
    pub fn to_dot(&self, x: &StratBundle) -> String {
        let b = x.base();
        let ff = &x.structure().ff;
        let mut out = String::from("graph total {\n");
        for (e, &(c, v)) in self.elements.iter().enumerate() {
            let name = &ff.fibre(x.fibre_obj(c))[v];
            writeln!(out, "  n{e} [label=\"{}:{}\"];", b.id(c), name.replace('"', "\\\"")).unwrap();
        }
        for &(lo, hi) in &self.relations {
            writeln!(out, "  n{lo} -- n{hi};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

pub fn realize_total(x: &StratBundle) -> TotalComplex {
    let b = x.base();
    let mut offsets = Vec::with_capacity(b.len() + 1);
    let mut elements = Vec::new();
    for c in 0..b.len() {
        offsets.push(elements.len());
        elements.extend((0..x.fibre_size(c)).map(|v| (c, v)));
    }
    offsets.push(elements.len());
    let mut relations = Vec::new();
    for c in 0..b.len() {
        for (&f, &t) in b.faces(c).iter().zip(x.transitions(c)) {
            for v in 0..x.fibre_size(c) {
                relations.push((offsets[f] + x.act(t, v), offsets[c] + v));
            }
        }
    }
    TotalComplex {
        elements,
        relations,
        offsets,
    }
}

/// The map of total complexes induced by an F-map `x → y`.
pub fn realize_map(map: &FBundleMap, x: &StratBundle, y_total: &TotalComplex) -> Vec<usize> {
    let mut out = Vec::with_capacity(x.total_elements());
    for c in 0..x.base().len() {
        let fc = map.base_map.image(c);
        for v in 0..x.fibre_size(c) {
            out.push(y_total.element_index(fc, x.act(map.fibre_morphisms[c], v)));
        }
    }
    out
}
