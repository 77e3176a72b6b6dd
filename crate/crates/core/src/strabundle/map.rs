use crate::cellbase::SimplicialMap;
use crate::{Error, Result};

use super::bundle::StratBundle;

/// An F-map of bundles: a base map together with a fibre morphism
/// `fibre_X(c) → fibre_Y(f(c))` for every cell `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FBundleMap {
    pub base_map: SimplicialMap,
    pub fibre_morphisms: Vec<usize>,
}

impl FBundleMap {
    pub fn identity(x: &StratBundle) -> Self {
        FBundleMap {
            base_map: SimplicialMap::identity(x.base()),
            fibre_morphisms: identities(x, 0..x.base().len()),
        }
    }

    /// A base map with identity fibre morphisms, for bundles whose fibre
    /// objects agree along it.
    pub fn over(base_map: SimplicialMap, x: &StratBundle) -> Self {
        let fibre_morphisms = identities(x, 0..x.base().len());
        FBundleMap {
            base_map,
            fibre_morphisms,
        }
    }

    /// Checks typing and commutation with every codimension-one transition
    /// of the source, in the faithful image.
    pub fn check(&self, x: &StratBundle, y: &StratBundle) -> Result<()> {
        if x.structure() != y.structure() {
            return Err(Error::NotFBundleMap("bundles have different structure categories".into()));
        }
        let (bx, by) = (x.base(), y.base());
        if self.base_map.len() != bx.len() || self.fibre_morphisms.len() != bx.len() {
            return Err(Error::NotFBundleMap("map data does not cover the source base".into()));
        }
        let cat = &x.structure().cat;
        for c in 0..bx.len() {
            let fc = self.base_map.image(c);
            if fc >= by.len() {
                return Err(Error::NotFBundleMap(format!("cell `{}` has no image", bx.id(c))));
            }
            let phi = self.fibre_morphisms[c];
            if phi >= cat.num_morphisms() || cat.source(phi) != x.fibre_obj(c) || cat.target(phi) != y.fibre_obj(fc) {
                return Err(Error::NotFBundleMap(format!(
                    "fibre morphism over `{}` is not a morphism {} → {}",
                    bx.id(c),
                    cat.object_id(x.fibre_obj(c)),
                    cat.object_id(y.fibre_obj(fc))
                )));
            }
        }
        for c in 0..bx.len() {
            let fc = self.base_map.image(c);
            for (&f, &t) in bx.faces(c).iter().zip(x.transitions(c)) {
                let ff = self.base_map.image(f);
                let down = y.composite(ff, fc).ok_or_else(|| {
                    Error::NotFBundleMap(format!(
                        "base map sends `{}` ≤ `{}` to incomparable cells",
                        bx.id(f),
                        bx.id(c)
                    ))
                })?;
                let lhs = cat.comp(down, self.fibre_morphisms[c]);
                let rhs = cat.comp(self.fibre_morphisms[f], t);
                if !x.same(lhs, rhs) {
                    return Err(Error::NotFBundleMap(format!(
                        "naturality fails for `{}` ≤ `{}`",
                        bx.id(f),
                        bx.id(c)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &FBundleMap, x: &StratBundle) -> FBundleMap {
        let cat = &x.structure().cat;
        FBundleMap {
            base_map: self.base_map.then(&next.base_map),
            fibre_morphisms: (0..self.fibre_morphisms.len())
                .map(|c| cat.comp(next.fibre_morphisms[self.base_map.image(c)], self.fibre_morphisms[c]))
                .collect(),
        }
    }

    /// Equality of base maps and of fibre morphisms up to `≡`.
    pub fn equivalent(&self, other: &FBundleMap, x: &StratBundle) -> bool {
        self.base_map == other.base_map
            && self.fibre_morphisms.len() == other.fibre_morphisms.len()
            && self
                .fibre_morphisms
                .iter()
                .zip(&other.fibre_morphisms)
                .all(|(&f, &g)| x.same(f, g))
    }

    /// Restriction to the cells of a subcomplex of the source.
    pub fn restrict(&self, cells: &[usize]) -> FBundleMap {
        FBundleMap {
            base_map: self.base_map.restrict(cells),
            fibre_morphisms: cells.iter().map(|&c| self.fibre_morphisms[c]).collect(),
        }
    }
}

fn identities(x: &StratBundle, cells: impl Iterator<Item = usize>) -> Vec<usize> {
    let cat = &x.structure().cat;
    cells.map(|c| cat.identity(x.fibre_obj(c))).collect()
}
