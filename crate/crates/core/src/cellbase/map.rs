use std::collections::BTreeMap;

use super::complex::{BaseComplex, ComplexKind};
use crate::{Error, Result};

/// A cellular map of complexes, stored as its action on cells. For
/// simplicial targets the action is determined by the vertex map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialMap {
    cell_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn identity(b: &BaseComplex) -> Self {
        SimplicialMap {
            cell_map: (0..b.len()).collect(),
        }
    }

    /// Extends a vertex map to cells: each cell goes to the cell spanned by
    /// the images of its vertices.
    pub fn from_vertex_map(src: &BaseComplex, tgt: &BaseComplex, vertex_map: &BTreeMap<usize, usize>) -> Result<Self> {
        let mut cell_map = Vec::with_capacity(src.len());
        for c in 0..src.len() {
            let mut image = Vec::new();
            for v in src.vertices(c) {
                let w = *vertex_map
                    .get(&v)
                    .ok_or_else(|| Error::NotSimplicial(format!("vertex `{}` has no image", src.id(v))))?;
                if w >= tgt.len() || tgt.dim(w) != 0 {
                    return Err(Error::NotSimplicial(format!(
                        "vertex `{}` is not sent to a vertex",
                        src.id(v)
                    )));
                }
                image.push(w);
            }
            image.sort_unstable();
            image.dedup();
            let target = tgt.cell_with_vertices(&image).ok_or_else(|| {
                let names: Vec<&str> = image.iter().map(|&w| tgt.id(w)).collect();
                Error::NotSimplicial(format!(
                    "cell `{}` goes to {{{}}}, which spans no cell of the target",
                    src.id(c),
                    names.join(", ")
                ))
            })?;
            cell_map.push(target);
        }
        Ok(SimplicialMap { cell_map })
    }

    /// Accepts an explicit cell map. It must not raise dimension and must
    /// preserve the face order; into a simplicial complex it must also agree
    /// with the induced vertex map.
    pub fn from_cell_map(src: &BaseComplex, tgt: &BaseComplex, cell_map: Vec<usize>) -> Result<Self> {
        if cell_map.len() != src.len() {
            return Err(Error::NotSimplicial(format!(
                "cell map has {} entries for {} cells",
                cell_map.len(),
                src.len()
            )));
        }
        if let Some(c) = (0..src.len()).find(|&c| cell_map[c] >= tgt.len()) {
            return Err(Error::NotSimplicial(format!("cell `{}` has no image", src.id(c))));
        }
        for c in 0..src.len() {
            let fc = cell_map[c];
            if tgt.dim(fc) > src.dim(c) {
                return Err(Error::NotSimplicial(format!(
                    "cell `{}` goes to the higher-dimensional cell `{}`",
                    src.id(c),
                    tgt.id(fc)
                )));
            }
            for &f in src.faces(c) {
                if !tgt.le(cell_map[f], fc) {
                    return Err(Error::NotSimplicial(format!(
                        "face `{}` of `{}` goes to `{}`, which is not a face of `{}`",
                        src.id(f),
                        src.id(c),
                        tgt.id(cell_map[f]),
                        tgt.id(fc)
                    )));
                }
            }
            if tgt.kind() == ComplexKind::Simplicial {
                let mut image: Vec<usize> = src.vertices(c).iter().map(|&v| cell_map[v]).collect();
                image.sort_unstable();
                image.dedup();
                if image != tgt.vertices(fc) {
                    return Err(Error::NotSimplicial(format!(
                        "cell `{}` goes to `{}` but its vertices span a different cell",
                        src.id(c),
                        tgt.id(fc)
                    )));
                }
            }
        }
        Ok(SimplicialMap { cell_map })
    }

    pub(crate) fn from_cell_map_unchecked(cell_map: Vec<usize>) -> Self {
        SimplicialMap { cell_map }
    }

    pub fn cell_map(&self) -> &[usize] {
        &self.cell_map
    }

    pub fn image(&self, c: usize) -> usize {
        self.cell_map[c]
    }

    pub fn len(&self) -> usize {
        self.cell_map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cell_map.is_empty()
    }

    pub fn vertex_map(&self, src: &BaseComplex) -> BTreeMap<usize, usize> {
        (0..src.len())
            .filter(|&c| src.dim(c) == 0)
            .map(|v| (v, self.cell_map[v]))
            .collect()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            cell_map: self.cell_map.iter().map(|&c| next.cell_map[c]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = self.cell_map.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// Open cells of each stratum must land in the same stratum.
    pub fn check_stratum_preserving(&self, src: &BaseComplex, tgt: &BaseComplex) -> Result<()> {
        for c in 0..src.len() {
            let fc = self.cell_map[c];
            if src.stratum(c) != tgt.stratum(fc) {
                return Err(Error::NotStratumPreserving {
                    cell: src.id(c).to_string(),
                    image: tgt.id(fc).to_string(),
                    source_stratum: src.stratum(c),
                    target_stratum: tgt.stratum(fc),
                });
            }
        }
        Ok(())
    }

    pub fn is_stratum_preserving(&self, src: &BaseComplex, tgt: &BaseComplex) -> bool {
        self.check_stratum_preserving(src, tgt).is_ok()
    }

    /// Restriction to the cells of a subcomplex, indexed as in its extraction.
    pub fn restrict(&self, cells: &[usize]) -> SimplicialMap {
        SimplicialMap {
            cell_map: cells.iter().map(|&c| self.cell_map[c]).collect(),
        }
    }
}
