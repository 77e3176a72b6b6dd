use std::collections::HashMap;
use std::sync::Arc;

use crate::cellbase::{attach_base, BaseAttachment, SimplicialMap, Subcomplex};
use crate::{Error, Result};

use super::bundle::{restrict, validate_bundle, StratBundle};
use super::map::FBundleMap;
use super::pushout::BundleSquare;

#[derive(Clone, Debug)]
pub struct BundleAttachment {
    pub bundle: StratBundle,
    pub base: BaseAttachment,
    /// `Y → X` with identity fibre morphisms.
    pub inclusion: FBundleMap,
    /// `M → X`: `h` on `A`, identities elsewhere.
    pub characteristic: FBundleMap,
}

/// Glues a single-stratum bundle `m` over `(M, A)` to `y` along an F-map
/// `h: m|A → y`. A new transition from a cell of `M ∖ A` to a face in `A`
/// is `h(face) ∘ transition_m`.
pub fn attach_bundle(y: &StratBundle, m: &StratBundle, a: &Subcomplex, h: &FBundleMap) -> Result<BundleAttachment> {
    if y.structure() != m.structure() {
        return Err(Error::NotFBundleMap("bundles have different structure categories".into()));
    }
    let mb = m.base();
    if let Some(c) = (1..mb.len()).find(|&c| mb.stratum(c) != mb.stratum(0)) {
        return Err(Error::StrataMismatch(format!(
            "the attached bundle must have one stratum, but `{}` and `{}` differ",
            mb.id(0),
            mb.id(c)
        )));
    }
    validate_bundle(m).into_result()?;
    let am = restrict(m, a);
    h.check(&am, y)?;
    let base = attach_base(y.base(), mb, a, &h.base_map, false)?;
    let xb = &base.complex;
    let cat = &y.structure().cat;

    let mut fibre_obj = vec![usize::MAX; xb.len()];
    let mut transitions: HashMap<(usize, usize), usize> = HashMap::new();
    let yb = y.base();
    for c in 0..yb.len() {
        let xc = base.inclusion.image(c);
        fibre_obj[xc] = y.fibre_obj(c);
        for (&f, &t) in yb.faces(c).iter().zip(y.transitions(c)) {
            transitions.insert((base.inclusion.image(f), xc), t);
        }
    }
    for c in 0..mb.len() {
        if a.contains(c) {
            continue;
        }
        let xc = base.characteristic.image(c);
        fibre_obj[xc] = m.fibre_obj(c);
        for (&f, &t) in mb.faces(c).iter().zip(m.transitions(c)) {
            let glued = match a.position(f) {
                Some(k) => cat.comp(h.fibre_morphisms[k], t),
                None => t,
            };
            transitions.insert((base.characteristic.image(f), xc), glued);
        }
    }
    let complex = Arc::new(xb.clone());
    let bundle = StratBundle::from_incidences(complex, y.structure_arc().clone(), fibre_obj, &transitions)?;
    let inclusion = FBundleMap {
        base_map: base.inclusion.clone(),
        fibre_morphisms: (0..yb.len()).map(|c| cat.identity(y.fibre_obj(c))).collect(),
    };
    let characteristic = FBundleMap {
        base_map: base.characteristic.clone(),
        fibre_morphisms: (0..mb.len())
            .map(|c| match a.position(c) {
                Some(k) => h.fibre_morphisms[k],
                None => cat.identity(m.fibre_obj(c)),
            })
            .collect(),
    };
    Ok(BundleAttachment {
        bundle,
        base,
        inclusion,
        characteristic,
    })
}

impl BundleAttachment {
    /// The push-out square `A → Y, A → M, Y → X, M → X` of this attachment.
    pub fn square(&self, y: &StratBundle, m: &StratBundle, a: &Subcomplex, h: &FBundleMap) -> BundleSquare {
        let am = restrict(m, a);
        let cat = &m.structure().cat;
        let i = FBundleMap {
            base_map: SimplicialMap::from_cell_map_unchecked(a.cells().to_vec()),
            fibre_morphisms: a.cells().iter().map(|&c| cat.identity(m.fibre_obj(c))).collect(),
        };
        BundleSquare {
            a: am,
            y: y.clone(),
            m: m.clone(),
            x: self.bundle.clone(),
            h: h.clone(),
            i,
            j: self.inclusion.clone(),
            phi: self.characteristic.clone(),
        }
    }
}
