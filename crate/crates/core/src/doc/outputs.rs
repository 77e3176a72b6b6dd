use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cellbase::{BaseComplex, Incidence, Subcomplex};
use crate::fincat::FibreFunctor;
use crate::funcspace::{faithful, Coend, DiagramBundle, ReconstructCheck};
use crate::strabundle::StratBundle;
use crate::triviality::{CoveringSpace, LocalTriviality, Obstruction, StratifiedBundle, Triviality, Trivialization};

use super::inputs::{BundleDoc, ComplexDoc};

fn ids(b: &BaseComplex, cells: &[usize]) -> Vec<String> {
    cells.iter().map(|&c| b.id(c).to_string()).collect()
}

fn incidence(b: &BaseComplex, inc: Incidence) -> Value {
    json!({"face": b.id(inc.face), "cell": b.id(inc.cell)})
}

fn class_name(alpha: &str, y: &str) -> String {
    format!("{alpha}⊗{y}")
}

/// The evaluation isomorphism from the coend of the principal diagram back
/// to the bundle, per cell: class `α⊗y` ↦ fibre element.
pub fn iso_doc(x: &StratBundle, check: &ReconstructCheck) -> Value {
    let xf = faithful(x);
    let b = xf.base();
    let s = xf.structure();
    let iso: BTreeMap<String, BTreeMap<String, String>> = (0..b.len())
        .filter(|&c| check.holds && c < check.iso.len())
        .map(|c| {
            let names = s.ff.fibre(xf.fibre_obj(c));
            let table = check.representatives[c]
                .iter()
                .zip(&check.iso[c])
                .map(|(&(v, a, y), &e)| {
                    let alpha = s.cat.morphism_id(s.cat.hom(v, xf.fibre_obj(c))[a]);
                    (class_name(alpha, &s.ff.fibre(v)[y]), names[e].clone())
                })
                .collect();
            (b.id(c).to_string(), table)
        })
        .collect();
    json!({"holds": check.holds, "failure": check.failure, "iso": iso})
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTransitionDoc {
    pub face: String,
    pub cell: String,
    pub map: BTreeMap<String, String>,
}

/// A set-valued functor on the face poset: the coend as named classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoendDoc {
    pub base: ComplexDoc,
    pub classes: BTreeMap<String, Vec<String>>,
    pub transitions: Vec<FamilyTransitionDoc>,
}

pub fn coend_doc(p: &DiagramBundle, ff: &FibreFunctor, co: &Coend) -> CoendDoc {
    let b = p.base();
    let cat = p.cat();
    let names: Vec<Vec<String>> = (0..b.len())
        .map(|c| {
            co.classes[c]
                .iter()
                .map(|class| {
                    let (v, x, y) = class[0];
                    class_name(cat.morphism_id(p.element_morphism(v, c, x)), &ff.fibre(v)[y])
                })
                .collect()
        })
        .collect();
    let transitions = b
        .incidences()
        .into_iter()
        .map(|inc| {
            let k = b.faces(inc.cell).iter().position(|&f| f == inc.face).expect("incidence");
            FamilyTransitionDoc {
                face: b.id(inc.face).to_string(),
                cell: b.id(inc.cell).to_string(),
                map: co.transitions[inc.cell][k]
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (names[inc.cell][i].clone(), names[inc.face][j].clone()))
                    .collect(),
            }
        })
        .collect();
    CoendDoc {
        base: ComplexDoc::from_complex(b),
        classes: (0..b.len()).map(|c| (b.id(c).to_string(), names[c].clone())).collect(),
        transitions,
    }
}

fn trivialization_value(x: &StratBundle, t: &Trivialization) -> Value {
    let b = x.base();
    let cat = &x.structure().cat;
    let charts: BTreeMap<&str, &str> = t
        .region
        .cells()
        .iter()
        .zip(&t.charts)
        .map(|(&c, &m)| (b.id(c), cat.morphism_id(m)))
        .collect();
    json!({
        "region": ids(b, t.region.cells()),
        "object": cat.object_id(t.object),
        "charts": charts,
        "tree": t.tree.iter().map(|&e| incidence(b, e)).collect::<Vec<_>>(),
    })
}

fn obstruction_value(x: &StratBundle, o: &Obstruction) -> Value {
    let b = x.base();
    let s = x.structure();
    let names = s.ff.fibre(o.object);
    let action: BTreeMap<&str, &str> = s
        .ff
        .action(o.holonomy)
        .iter()
        .enumerate()
        .map(|(i, &j)| (names[i].as_str(), names[j].as_str()))
        .collect();
    json!({
        "edge": incidence(b, o.edge),
        "cycle": ids(b, &o.cycle),
        "holonomy": s.cat.morphism_id(o.holonomy),
        "object": s.cat.object_id(o.object),
        "action": action,
    })
}

pub fn triviality_doc(x: &StratBundle, region: &Subcomplex, t: &Triviality) -> Value {
    match t {
        Triviality::Trivial(t) => trivialization_value(x, t),
        Triviality::Obstructed(o) => json!({
            "region": ids(x.base(), region.cells()),
            "obstruction": obstruction_value(x, o),
        }),
    }
}

pub fn certificate_doc(x: &StratBundle, cert: &LocalTriviality) -> Value {
    let b = x.base();
    match cert {
        LocalTriviality::Atlas(atlas) => json!({
            "holds": true,
            "atlas": atlas
                .iter()
                .enumerate()
                .map(|(c, t)| {
                    let mut v = trivialization_value(x, t);
                    v["star"] = json!(b.id(c));
                    v
                })
                .collect::<Vec<_>>(),
        }),
        LocalTriviality::Counterexample { cell, obstruction } => json!({
            "holds": false,
            "counterexample": {"star": b.id(*cell), "obstruction": obstruction_value(x, obstruction)},
        }),
    }
}

pub fn covering_doc(x: &StratBundle, cov: &CoveringSpace) -> Value {
    let b = x.base();
    let ff = &x.structure().ff;
    let elem = |c: usize, v: usize| format!("{}:{}", b.id(c), ff.fibre(x.fibre_obj(c))[v]);
    json!({
        "components": cov.num_components,
        "counts_by_dim": cov.counts_by_dim,
        "sheets": cov
            .base_components
            .iter()
            .map(|bc| json!({"root": b.id(bc.root), "cells": bc.cells.len(), "sheets": bc.sheets, "lifts": bc.lifts}))
            .collect::<Vec<_>>(),
        "monodromy": cov
            .monodromy
            .iter()
            .map(|m| {
                let names = ff.fibre(x.fibre_obj(m.root));
                let perm: BTreeMap<&str, &str> =
                    m.permutation.iter().enumerate().map(|(i, &j)| (names[i].as_str(), names[j].as_str())).collect();
                json!({
                    "root": b.id(m.root),
                    "edge": incidence(b, m.edge),
                    "walk": ids(b, &m.walk),
                    "permutation": perm,
                    "cycles": m.cycles,
                })
            })
            .collect::<Vec<_>>(),
        "even_covering": {
            "holds": cov.even_covering.holds(),
            "stars_checked": cov.even_covering.stars_checked,
            "failure": cov.even_covering.failure,
        },
        "total": {
            "elements": cov.total.elements.iter().map(|&(c, v)| elem(c, v)).collect::<Vec<_>>(),
            "relations": cov
                .total
                .relations
                .iter()
                .map(|&(lo, hi)| {
                    let ((c, v), (d, w)) = (cov.total.elements[lo], cov.total.elements[hi]);
                    [elem(c, v), elem(d, w)]
                })
                .collect::<Vec<_>>(),
        },
    })
}

pub fn stratification_doc(s: &StratifiedBundle, round_trips: bool) -> Value {
    let b = s.bundle.base();
    json!({
        "bundle": BundleDoc::from_bundle(&s.bundle),
        "pieces": s
            .pieces
            .iter()
            .map(|p| json!({
                "stratum": p.stratum,
                "closure": ids(b, p.closure.cells()),
                "attaching": p.attaching.ids(p.bundle.base()),
            }))
            .collect::<Vec<_>>(),
        "round_trips": round_trips,
    })
}
