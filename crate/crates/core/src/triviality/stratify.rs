use std::sync::Arc;

use crate::cellbase::{validate_complex, SimplicialMap, Subcomplex};
use crate::strabundle::{attach_bundle, restrict, validate_bundle, FBundleMap, StratBundle};
use crate::{Error, Result};

/// One step of the attachment decomposition: the closure `M̄ᵢ` of stratum
/// `i`, the bundle over it as a single stratum, and the part `Aᵢ` lying in
/// lower strata.
#[derive(Clone, Debug)]
pub struct StratumPiece {
    pub stratum: usize,
    /// `M̄ᵢ` as cells of the stratified base.
    pub closure: Subcomplex,
    /// `x|M̄ᵢ` with every cell in one stratum.
    pub bundle: StratBundle,
    /// `Aᵢ` as cells of `bundle.base()`.
    pub attaching: Subcomplex,
}

#[derive(Clone, Debug)]
pub struct StratifiedBundle {
    pub bundle: StratBundle,
    pub pieces: Vec<StratumPiece>,
}

impl StratifiedBundle {
    /// Rebuilds the bundle by attaching the pieces in stratum order along
    /// identity fibre morphisms. Strata of the result are numbered
    /// consecutively.
    pub fn reassemble(&self) -> Result<StratBundle> {
        let mut pieces = self.pieces.iter();
        let Some(first) = pieces.next() else {
            return Ok(self.bundle.clone());
        };
        let mut acc = first.bundle.clone();
        for piece in pieces {
            let mb = piece.bundle.base();
            let ab = piece.attaching.extract(mb);
            let yb = acc.base();
            let cell_map = piece
                .attaching
                .cells()
                .iter()
                .map(|&c| yb.index_of(mb.id(c)))
                .collect::<Result<Vec<_>>>()?;
            let base_map = SimplicialMap::from_cell_map(&ab, yb, cell_map)?;
            let h = FBundleMap::over(base_map, &restrict(&piece.bundle, &piece.attaching));
            acc = attach_bundle(&acc, &piece.bundle, &piece.attaching, &h)?.bundle;
        }
        Ok(acc)
    }

    /// The bundle with its strata renumbered consecutively, which is what
    /// [`Self::reassemble`] should reproduce.
    pub fn normalized(&self) -> Result<StratBundle> {
        let b = self.bundle.base();
        let mut used: Vec<usize> = b.strata();
        used.sort_unstable();
        used.dedup();
        let rank: Vec<usize> = b.strata().iter().map(|s| used.binary_search(s).unwrap()).collect();
        self.bundle.with_base(Arc::new(b.with_strata(&rank)?))
    }

    pub fn round_trips(&self) -> Result<bool> {
        Ok(self.reassemble()?.equivalent(&self.normalized()?))
    }
}

/// Re-tags a bundle whose transitions are all isomorphisms over the given
/// stratification, and decomposes it into the restrictions to the closures
/// of the strata.
pub fn stratify_bundle(x: &StratBundle, strata: &[usize]) -> Result<StratifiedBundle> {
    let b = x.base();
    for c in 0..b.len() {
        for (&f, &t) in b.faces(c).iter().zip(x.transitions(c)) {
            if x.structure().inverse(t).is_none() {
                return Err(Error::NotInvertible {
                    morphism: x.structure().cat.morphism_id(t).to_string(),
                    context: format!("transition of `{}` ≤ `{}`", b.id(f), b.id(c)),
                });
            }
        }
    }
    let sb = b.with_strata(strata)?;
    validate_complex(&sb).into_result()?;
    let bundle = x.with_base(Arc::new(sb))?;
    validate_bundle(&bundle).into_result()?;
    let sb = bundle.base();

    let mut levels = sb.strata();
    levels.sort_unstable();
    levels.dedup();
    let mut pieces = Vec::with_capacity(levels.len());
    for &i in &levels {
        let closure = Subcomplex::closure_of(sb, sb.cells_in_stratum(i));
        let restricted = restrict(&bundle, &closure);
        let rb = restricted.base();
        let flat = restricted.with_base(Arc::new(rb.with_strata(&vec![0; rb.len()])?))?;
        let attaching = Subcomplex::new(flat.base(), (0..rb.len()).filter(|&c| rb.stratum(c) < i))?;
        pieces.push(StratumPiece {
            stratum: i,
            closure,
            bundle: flat,
            attaching,
        });
    }
    Ok(StratifiedBundle { bundle, pieces })
}
