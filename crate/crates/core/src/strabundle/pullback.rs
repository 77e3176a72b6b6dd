use std::sync::Arc;

use crate::cellbase::{BaseComplex, SimplicialMap};
use crate::fincat::{pair_id, product_category};
use crate::{Error, Result};

use super::bundle::StratBundle;
use super::map::FBundleMap;

/// Pulls `target` back along a stratum-preserving `fbar: src → target.base()`.
/// Fibres over `b` are the fibres over `fbar(b)`; the transition of
/// `b' ≤ b` is the composite transition of `fbar(b') ≤ fbar(b)`, the
/// identity when both go to the same cell. Also returns the covering map.
pub fn pullback(target: &StratBundle, src: Arc<BaseComplex>, fbar: &SimplicialMap) -> Result<(StratBundle, FBundleMap)> {
    if fbar.len() != src.len() {
        return Err(Error::NotSimplicial(format!(
            "map is defined on {} cells, source has {}",
            fbar.len(),
            src.len()
        )));
    }
    fbar.check_stratum_preserving(&src, target.base())?;
    let cat = &target.structure().cat;
    let fibre_obj: Vec<usize> = (0..src.len()).map(|c| target.fibre_obj(fbar.image(c))).collect();
    let mut transitions = Vec::with_capacity(src.len());
    for c in 0..src.len() {
        let mut list = Vec::with_capacity(src.faces(c).len());
        for &f in src.faces(c) {
            let t = target.composite(fbar.image(f), fbar.image(c)).ok_or_else(|| {
                Error::NotSimplicial(format!(
                    "`{}` ≤ `{}` goes to incomparable cells",
                    src.id(f),
                    src.id(c)
                ))
            })?;
            list.push(t);
        }
        transitions.push(list);
    }
    let fibre_morphisms = fibre_obj.iter().map(|&o| cat.identity(o)).collect();
    let bundle = StratBundle::new(src, target.structure_arc().clone(), fibre_obj, transitions)?;
    Ok((
        bundle,
        FBundleMap {
            base_map: fbar.clone(),
            fibre_morphisms,
        },
    ))
}

/// The fiberwise product over a shared base, with structure category the
/// product of the two structure categories.
pub fn fiberwise_product(x: &StratBundle, xp: &StratBundle) -> Result<StratBundle> {
    if x.base() != xp.base() {
        return Err(Error::BaseMismatch(
            "fiberwise products need the same base and stratification".into(),
        ));
    }
    let (s1, s2) = (x.structure(), xp.structure());
    let product = product_category(s1, s2);
    let object = |a: usize, b: usize| {
        product
            .cat
            .object_index(&pair_id(s1.cat.object_id(a), s2.cat.object_id(b)))
            .expect("pair object")
    };
    let morphism = |f: usize, g: usize| {
        product
            .cat
            .morphism_index(&pair_id(s1.cat.morphism_id(f), s2.cat.morphism_id(g)))
            .expect("pair morphism")
    };
    let b = x.base();
    let fibre_obj = (0..b.len()).map(|c| object(x.fibre_obj(c), xp.fibre_obj(c))).collect();
    let transitions = (0..b.len())
        .map(|c| {
            x.transitions(c)
                .iter()
                .zip(xp.transitions(c))
                .map(|(&f, &g)| morphism(f, g))
                .collect()
        })
        .collect();
    StratBundle::new(x.base_arc().clone(), Arc::new(product), fibre_obj, transitions)
}
