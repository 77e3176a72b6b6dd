//! Concrete structure categories: categories whose morphisms are literally
//! functions between finite sets, plus the small named examples used across
//! the test suites and the shipped corpus.

use std::collections::HashMap;

use super::category::{FiniteCategory, Morphism};
use super::functor::{reindex_functor, FibreFunctor, StructureCategory};
use crate::{Error, Result};

/// A morphism given as a function between the fibres of two objects.
#[derive(Clone, Debug)]
pub struct ConcreteMorphism {
    pub id: String,
    pub source: usize,
    pub target: usize,
    pub function: Vec<usize>,
}

/// Builds a structure category from functions. Composition is function
/// composition; the morphism set must contain the identities and be closed
/// under composition. Distinct morphisms must be distinct functions, so the
/// fibre functor is faithful.
pub fn from_functions(objects: Vec<(String, Vec<String>)>, morphisms: Vec<ConcreteMorphism>) -> Result<StructureCategory> {
    let mut lookup: HashMap<(usize, usize, &[usize]), usize> = HashMap::new();
    for (i, m) in morphisms.iter().enumerate() {
        if m.function.len() != objects[m.source].1.len()
            || m.function.iter().any(|&j| j >= objects[m.target].1.len())
        {
            return Err(Error::Malformed(format!("`{}` is not a function between its fibres", m.id)));
        }
        if lookup.insert((m.source, m.target, &m.function), i).is_some() {
            return Err(Error::Malformed(format!("`{}` duplicates another function", m.id)));
        }
    }
    let mut identities = Vec::with_capacity(objects.len());
    for (o, (_, set)) in objects.iter().enumerate() {
        let id_fn: Vec<usize> = (0..set.len()).collect();
        let idm = lookup
            .get(&(o, o, id_fn.as_slice()))
            .copied()
            .ok_or_else(|| Error::Malformed(format!("object `{}` has no identity", objects[o].0)))?;
        identities.push(idm);
    }
    let mut compose = HashMap::new();
    for (fi, f) in morphisms.iter().enumerate() {
        for (gi, g) in morphisms.iter().enumerate() {
            if g.source != f.target {
                continue;
            }
            let gf: Vec<usize> = f.function.iter().map(|&x| g.function[x]).collect();
            let gfi = lookup.get(&(f.source, g.target, gf.as_slice())).copied().ok_or_else(|| {
                Error::Malformed(format!("composite {}∘{} is not in the morphism set", g.id, f.id))
            })?;
            compose.insert((gi, fi), gfi);
        }
    }
    let object_ids: Vec<String> = objects.iter().map(|(o, _)| o.clone()).collect();
    let mors: Vec<Morphism> = morphisms
        .iter()
        .map(|m| Morphism {
            id: m.id.clone(),
            source: m.source,
            target: m.target,
        })
        .collect();
    let cat = FiniteCategory::from_indexed(object_ids.clone(), mors.clone(), identities, compose);
    let ff = reindex_functor(
        &cat,
        &object_ids,
        &mors,
        objects.into_iter().map(|(_, s)| s).collect(),
        morphisms.into_iter().map(|m| m.function).collect(),
    );
    Ok(StructureCategory::new_unchecked(cat, ff))
}

fn elements(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Name of a function `{1..n} → {1..m}` in one-line notation, e.g. `f2_21`.
fn function_name(prefix: &str, func: &[usize]) -> String {
    let body: Vec<String> = func.iter().map(|&j| (j + 1).to_string()).collect();
    let sep = if func.iter().any(|&j| j >= 9) { "." } else { "" };
    format!("{prefix}{}_{}", func.len(), body.join(sep))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn all_functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..m).map(move |j| {
                    let mut g = f.clone();
                    g.push(j);
                    g
                })
            })
            .collect();
    }
    out
}

/// Finite sets `{1..k}` for `k` in `sizes`, with all permutations.
pub fn permutation_category(sizes: &[usize]) -> StructureCategory {
    let objects: Vec<(String, Vec<String>)> = sizes.iter().map(|&k| (k.to_string(), elements(k))).collect();
    let morphisms = sizes
        .iter()
        .enumerate()
        .flat_map(|(o, &k)| {
            permutations(k).into_iter().map(move |p| ConcreteMorphism {
                id: function_name("p", &p),
                source: o,
                target: o,
                function: p,
            })
        })
        .collect();
    from_functions(objects, morphisms).expect("permutations form a groupoid")
}

/// Finite sets `{1..k}` for `k` in `sizes`, with all functions between them.
pub fn finite_sets(sizes: &[usize]) -> StructureCategory {
    let objects: Vec<(String, Vec<String>)> = sizes.iter().map(|&k| (k.to_string(), elements(k))).collect();
    let mut morphisms = Vec::new();
    for (a, &n) in sizes.iter().enumerate() {
        for (b, &m) in sizes.iter().enumerate() {
            for f in all_functions(n, m) {
                morphisms.push(ConcreteMorphism {
                    id: format!("{}to{}", function_name("f", &f), m),
                    source: a,
                    target: b,
                    function: f,
                });
            }
        }
    }
    from_functions(objects, morphisms).expect("all functions form a category")
}

/// The cyclic group of order two as a one-object category acting on
/// `{0, 1}`, by swap when `swap` is set and trivially otherwise.
///
/// With `swap = false` the fibre functor is not faithful.
pub fn z2(swap: bool) -> StructureCategory {
    let cat = FiniteCategory::from_parts(super::CategoryParts {
        objects: vec!["*".into()],
        morphisms: vec![("e".into(), "*".into(), "*".into()), ("g".into(), "*".into(), "*".into())],
        identities: [("*".to_string(), "e".to_string())].into(),
        compose: vec![
            ("e".into(), "e".into(), "e".into()),
            ("e".into(), "g".into(), "g".into()),
            ("g".into(), "e".into(), "g".into()),
            ("g".into(), "g".into(), "e".into()),
        ],
    })
    .expect("Z/2 table");
    let g_action = if swap { vec![1, 0] } else { vec![0, 1] };
    let ff = FibreFunctor::new(vec![vec!["0".into(), "1".into()]], vec![vec![0, 1], g_action]);
    StructureCategory::new_unchecked(cat, ff)
}

/// A one-object, one-morphism category with a one-point fibre.
pub fn trivial() -> StructureCategory {
    from_functions(
        vec![("pt".into(), vec!["*".into()])],
        vec![ConcreteMorphism {
            id: "id".into(),
            source: 0,
            target: 0,
            function: vec![0],
        }],
    )
    .expect("trivial category")
}

/// The orbit category of Z/2: objects `G/e = {e, g}` and `G/G = {*}`,
/// with the equivariant maps between them.
pub fn z2_orbit_category() -> StructureCategory {
    from_functions(
        vec![
            ("G/G".into(), vec!["*".into()]),
            ("G/e".into(), vec!["e".into(), "g".into()]),
        ],
        vec![
            ConcreteMorphism {
                id: "id_G/e".into(),
                source: 1,
                target: 1,
                function: vec![0, 1],
            },
            ConcreteMorphism {
                id: "r_g".into(),
                source: 1,
                target: 1,
                function: vec![1, 0],
            },
            ConcreteMorphism {
                id: "proj".into(),
                source: 1,
                target: 0,
                function: vec![0, 0],
            },
            ConcreteMorphism {
                id: "id_G/G".into(),
                source: 0,
                target: 0,
                function: vec![0],
            },
        ],
    )
    .expect("orbit category")
}
