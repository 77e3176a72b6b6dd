use std::sync::Arc;

use rayon::prelude::*;

use crate::cellbase::{closed_star, Incidence, SimplicialMap, Subcomplex};
use crate::fincat::is_groupoid;
use crate::strabundle::{restrict, FBundleMap, StratBundle};
use crate::{Error, Result};

use super::tree::RootedTree;

/// Charts `fibre_obj(c) → object` over a region, compatible with every
/// transition: `chart(face) ∘ transition = chart(cell)` up to `≡`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trivialization {
    pub region: Subcomplex,
    pub object: usize,
    /// Parallel to `region.cells()`.
    pub charts: Vec<usize>,
    /// The spanning tree the charts were propagated along.
    pub tree: Vec<Incidence>,
}

/// A non-tree incidence whose holonomy is not the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub edge: Incidence,
    /// A closed walk of cells through `edge`, first cell repeated at the end.
    pub cycle: Vec<usize>,
    /// `chart(face) ∘ transition ∘ chart(cell)⁻¹`, an automorphism of the
    /// chart object.
    pub holonomy: usize,
    pub object: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Triviality {
    Trivial(Trivialization),
    Obstructed(Obstruction),
}

impl Triviality {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Triviality::Trivial(_))
    }

    pub fn trivialization(&self) -> Option<&Trivialization> {
        match self {
            Triviality::Trivial(t) => Some(t),
            Triviality::Obstructed(_) => None,
        }
    }
}

impl Trivialization {
    pub fn chart(&self, c: usize) -> Option<usize> {
        self.region.position(c).map(|k| self.charts[k])
    }

    /// Incidences of the region whose compatibility equation fails.
    pub fn incompatible(&self, x: &StratBundle) -> Vec<Incidence> {
        let b = x.base();
        let cat = &x.structure().cat;
        let mut bad = Vec::new();
        for (k, &c) in self.region.cells().iter().enumerate() {
            for (&f, &t) in b.faces(c).iter().zip(x.transitions(c)) {
                let via = cat.comp(self.chart(f).expect("regions are closed"), t);
                if !x.same(via, self.charts[k]) {
                    bad.push(Incidence { face: f, cell: c });
                }
            }
        }
        bad
    }

    /// The product bundle over the region and the F-isomorphism from the
    /// restriction of `x` onto it that the charts define.
    pub fn product_iso(&self, x: &StratBundle) -> Result<(StratBundle, StratBundle, FBundleMap)> {
        let restricted = restrict(x, &self.region);
        let product = StratBundle::product(restricted.base_arc().clone(), x.structure_arc().clone(), self.object)?;
        let map = FBundleMap {
            base_map: SimplicialMap::identity(restricted.base()),
            fibre_morphisms: self.charts.clone(),
        };
        Ok((restricted, product, map))
    }
}

fn invertible_over(x: &StratBundle, region: &Subcomplex) -> Result<()> {
    let b = x.base();
    for &c in region.cells() {
        for (&f, &t) in b.faces(c).iter().zip(x.transitions(c)) {
            if x.structure().inverse(t).is_none() {
                return Err(Error::NotInvertible {
                    morphism: x.structure().cat.morphism_id(t).to_string(),
                    context: format!("transition of `{}` ≤ `{}` in the region", b.id(f), b.id(c)),
                });
            }
        }
    }
    Ok(())
}

/// Propagates charts from the first cell of a connected region along its
/// spanning tree, then checks every other incidence. The first incidence
/// with non-trivial holonomy is returned as the obstruction.
pub fn trivialize_over(x: &StratBundle, region: &Subcomplex) -> Result<Triviality> {
    invertible_over(x, region)?;
    let b = x.base();
    let s = x.structure();
    let cat = &s.cat;
    let tree = RootedTree::new(b, region)?;
    let object = x.fibre_obj(tree.root);
    let mut chart = vec![usize::MAX; b.len()];
    chart[tree.root] = cat.identity(object);
    for e in &tree.edges {
        let t = x.transition(e.face, e.cell).expect("tree edges are incidences");
        if chart[e.face] != usize::MAX {
            chart[e.cell] = cat.comp(chart[e.face], t);
        } else {
            let inv = s.inverse(t).expect("checked above");
            chart[e.face] = cat.comp(chart[e.cell], inv);
        }
    }
    for &c in region.cells() {
        for (&f, &t) in b.faces(c).iter().zip(x.transitions(c)) {
            let edge = Incidence { face: f, cell: c };
            if tree.is_tree_edge(edge) {
                continue;
            }
            let cell_inv = s.inverse(chart[c]).expect("charts are composites of isomorphisms");
            let holonomy = cat.comp(cat.comp(chart[f], t), cell_inv);
            if !s.is_identity_like(holonomy) {
                return Ok(Triviality::Obstructed(Obstruction {
                    edge,
                    cycle: tree.fundamental_cycle(edge),
                    holonomy,
                    object,
                }));
            }
        }
    }
    Ok(Triviality::Trivial(Trivialization {
        region: region.clone(),
        object,
        charts: region.cells().iter().map(|&c| chart[c]).collect(),
        tree: tree.edges,
    }))
}

/// Either a trivialization over every closed star, or the first star that
/// could not be trivialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalTriviality {
    /// One trivialization per cell, over its closed star, in cell order.
    Atlas(Vec<Trivialization>),
    Counterexample { cell: usize, obstruction: Obstruction },
}

impl LocalTriviality {
    pub fn holds(&self) -> bool {
        matches!(self, LocalTriviality::Atlas(_))
    }
}

/// Tries to trivialize over the closed star of every cell. The faithful
/// image of the structure category must be a groupoid; otherwise the error
/// names a morphism without inverse.
pub fn local_triviality_certificate(x: &StratBundle) -> Result<LocalTriviality> {
    let (xf, _) = x.in_faithful_image();
    let check = is_groupoid(&xf.structure().cat);
    if let Some(witness) = check.witness {
        return Err(Error::NotGroupoid { witness });
    }
    let b = Arc::clone(x.base_arc());
    let stars: Vec<Result<Triviality>> = (0..b.len())
        .into_par_iter()
        .map(|c| trivialize_over(x, &closed_star(&b, c)))
        .collect();
    let mut atlas = Vec::with_capacity(stars.len());
    for (cell, star) in stars.into_iter().enumerate() {
        match star? {
            Triviality::Trivial(t) => atlas.push(t),
            Triviality::Obstructed(obstruction) => return Ok(LocalTriviality::Counterexample { cell, obstruction }),
        }
    }
    Ok(LocalTriviality::Atlas(atlas))
}
