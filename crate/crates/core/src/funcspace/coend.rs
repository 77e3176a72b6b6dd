use std::collections::BTreeMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use crate::fincat::{validate_fibre_functor, CatFunctor, FibreFunctor, StructureCategory};
use crate::strabundle::{validate_bundle, StratBundle};
use crate::{Error, Result};

use super::diagram::{faithful, principal_diagram, DiagramBundle};

/// A member `(V, x, y)` of `⊔_V X^V_c × ff(V)`: an object, an element of
/// the component over the cell, and an element of `ff(V)`.
pub type CoendMember = (usize, usize, usize);

/// The cellwise coend `P ⊗_F ff`, as a set-valued functor on the face poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coend {
    /// Per cell, the classes in canonical order; each class lists its
    /// members in increasing order, so the first is its representative.
    pub classes: Vec<Vec<Vec<CoendMember>>>,
    /// Per cell, parallel to the faces: the induced map on classes.
    pub transitions: Vec<Vec<Vec<usize>>>,
    offsets: Vec<Vec<usize>>,
    class_of: Vec<Vec<usize>>,
    fibre_sizes: Vec<usize>,
}

impl Coend {
    pub fn num_classes(&self, c: usize) -> usize {
        self.classes[c].len()
    }

    pub fn class_of(&self, c: usize, (v, x, y): CoendMember) -> usize {
        self.class_of[c][self.offsets[c][v] + x * self.fibre_sizes[v] + y]
    }
}

/// Quotients `⊔_V P(V)_c × ff(V)` by `(P(α)x, y) ∼ (x, ff(α)y)` over every
/// cell with union–find, then induces transitions on classes and checks
/// they are well defined.
pub fn coend(p: &DiagramBundle, ff: &FibreFunctor) -> Result<Coend> {
    let cat = p.cat();
    validate_fibre_functor(cat, ff).into_result()?;
    let b = p.base();
    let fibre_sizes: Vec<usize> = (0..cat.num_objects()).map(|v| ff.fibre_size(v)).collect();

    let per_cell: Vec<(Vec<usize>, Vec<usize>, Vec<Vec<CoendMember>>)> = (0..b.len())
        .into_par_iter()
        .map(|c| {
            let mut offsets = Vec::with_capacity(cat.num_objects());
            let mut members = Vec::new();
            for v in 0..cat.num_objects() {
                offsets.push(members.len());
                for x in 0..p.component(v).fibre_size(c) {
                    members.extend((0..fibre_sizes[v]).map(|y| (v, x, y)));
                }
            }
            let node = |(v, x, y): CoendMember| offsets[v] + x * fibre_sizes[v] + y;
            let mut uf = UnionFind::<usize>::new(members.len());
            for alpha in 0..cat.num_morphisms() {
                let (v, w) = (cat.source(alpha), cat.target(alpha));
                let act = p.action(alpha, c);
                for (x, &pulled) in act.iter().enumerate() {
                    for y in 0..fibre_sizes[v] {
                        uf.union(node((v, pulled, y)), node((w, x, ff.action(alpha)[y])));
                    }
                }
            }
            // members are in increasing order, so classes come out sorted by
            // their smallest member
            let mut class_of = vec![usize::MAX; members.len()];
            let mut root_class: Vec<usize> = vec![usize::MAX; members.len()];
            let mut classes: Vec<Vec<CoendMember>> = Vec::new();
            for (n, &m) in members.iter().enumerate() {
                let r = uf.find(n);
                if root_class[r] == usize::MAX {
                    root_class[r] = classes.len();
                    classes.push(Vec::new());
                }
                class_of[n] = root_class[r];
                classes[root_class[r]].push(m);
            }
            (offsets, class_of, classes)
        })
        .collect();

    let mut offsets = Vec::with_capacity(b.len());
    let mut class_of = Vec::with_capacity(b.len());
    let mut classes = Vec::with_capacity(b.len());
    for (o, k, cl) in per_cell {
        offsets.push(o);
        class_of.push(k);
        classes.push(cl);
    }
    let mut out = Coend {
        classes,
        transitions: Vec::new(),
        offsets,
        class_of,
        fibre_sizes,
    };

    let mut transitions = Vec::with_capacity(b.len());
    for c in 0..b.len() {
        let mut lists = Vec::with_capacity(b.faces(c).len());
        for (k, &face) in b.faces(c).iter().enumerate() {
            let mut map = Vec::with_capacity(out.num_classes(c));
            for class in &out.classes[c] {
                let image = |&(v, x, y): &CoendMember| {
                    let comp = p.component(v);
                    out.class_of(face, (v, comp.act(comp.transitions(c)[k], x), y))
                };
                let first = image(&class[0]);
                if let Some(bad) = class.iter().find(|m| image(m) != first) {
                    return Err(Error::IllDefinedCoend {
                        cell: b.id(c).to_string(),
                        detail: format!(
                            "members {:?} and {:?} of one class go to different classes over `{}`",
                            class[0],
                            bad,
                            b.id(face)
                        ),
                    });
                }
                map.push(first);
            }
            lists.push(map);
        }
        transitions.push(lists);
    }
    out.transitions = transitions;
    Ok(out)
}

/// Checks that `eval` (a member `(V, α, y)` with `α: V → X_c` a morphism
/// of the diagram's category) is constant on classes, bijective onto the
/// fibres of `target`, and commutes with transitions. Returns the cellwise
/// bijection from classes to fibre elements.
pub fn coend_iso(
    p: &DiagramBundle,
    co: &Coend,
    target: &StratBundle,
    eval: impl Fn(usize, usize, usize) -> usize,
) -> std::result::Result<Vec<Vec<usize>>, String> {
    let b = p.base();
    let mut charts = Vec::with_capacity(b.len());
    for c in 0..b.len() {
        let mut chart = Vec::with_capacity(co.num_classes(c));
        let mut hit = vec![false; target.fibre_size(c)];
        for class in &co.classes[c] {
            let value = |&(v, x, y): &CoendMember| eval(v, p.element_morphism(v, c, x), y);
            let first = value(&class[0]);
            if class.iter().any(|m| value(m) != first) {
                return Err(format!("evaluation is not constant on a class over `{}`", b.id(c)));
            }
            if first >= hit.len() || hit[first] {
                return Err(format!("evaluation over `{}` is not injective", b.id(c)));
            }
            hit[first] = true;
            chart.push(first);
        }
        if hit.iter().any(|&h| !h) {
            return Err(format!("evaluation over `{}` is not surjective", b.id(c)));
        }
        charts.push(chart);
    }
    for c in 0..b.len() {
        for (k, &face) in b.faces(c).iter().enumerate() {
            let t = target.transitions(c)[k];
            for (class, &value) in charts[c].iter().enumerate() {
                if charts[face][co.transitions[c][k][class]] != target.act(t, value) {
                    return Err(format!(
                        "evaluation does not commute with `{}` ≤ `{}`",
                        b.id(face),
                        b.id(c)
                    ));
                }
            }
        }
    }
    Ok(charts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReconstructCheck {
    pub holds: bool,
    /// Per cell, the fibre element assigned to each coend class.
    pub iso: Vec<Vec<usize>>,
    /// Per cell, the representative `(V, α, y)` of each coend class, with
    /// `α` indexing `hom(V, X_c)` in the faithful image.
    pub representatives: Vec<Vec<CoendMember>>,
    pub failure: Option<String>,
}

/// Rebuilds `x` as the coend of its principal diagram with its own fibre
/// functor and checks the evaluation map `[α, v] ↦ ff(α)(v)` is a cellwise
/// bijection commuting with transitions.
pub fn reconstruct_check(x: &StratBundle) -> Result<ReconstructCheck> {
    validate_bundle(x).into_result()?;
    let xf = faithful(x);
    let p = principal_diagram(&xf)?;
    let ff = &xf.structure().ff;
    let co = coend(&p, ff)?;
    let representatives = co.classes.iter().map(|cell| cell.iter().map(|class| class[0]).collect()).collect();
    Ok(match coend_iso(&p, &co, &xf, |_, alpha, y| ff.action(alpha)[y]) {
        Ok(iso) => ReconstructCheck {
            holds: true,
            iso,
            representatives,
            failure: None,
        },
        Err(reason) => ReconstructCheck {
            holds: false,
            iso: Vec::new(),
            representatives,
            failure: Some(reason),
        },
    })
}

#[derive(Clone, Debug)]
pub struct AssociatedBundle {
    pub bundle: StratBundle,
    pub coend: Coend,
    /// Cellwise bijection from coend classes to fibres of `bundle`.
    pub iso: Vec<Vec<usize>>,
}

/// The bundle associated to `x` along `phi: F → G`: the coend of the
/// principal diagram with `gg ∘ phi`. The result has fibre objects
/// `phi(X_c)` and transitions `phi(t)`, which is checked against the coend.
///
/// When the fibre functor of `x` is not faithful, `gg ∘ phi` must be
/// constant on its classes, since the diagram lives on the faithful image.
pub fn associated_bundle(x: &StratBundle, phi: &CatFunctor, g: Arc<StructureCategory>) -> Result<AssociatedBundle> {
    let f = x.structure();
    phi.validate(&f.cat, &g.cat)?;
    validate_bundle(x).into_result()?;
    let (xf, quotient) = if f.is_faithful() {
        (x.clone(), (0..f.cat.num_morphisms()).collect::<Vec<_>>())
    } else {
        let (xq, fi) = x.in_faithful_image();
        (xq, fi.quotient)
    };
    let fq = &xf.structure().cat;
    let representative: Vec<usize> = (0..fq.num_morphisms())
        .map(|k| f.cat.morphism_index(fq.morphism_id(k)).expect("class representative"))
        .collect();
    let pulled = phi.pull_back_fibres(&g.ff);
    for m in 0..f.cat.num_morphisms() {
        let rep = representative[quotient[m]];
        if pulled.action(m) != pulled.action(rep) {
            return Err(Error::Precondition(format!(
                "`{}` and `{}` act alike in the source but not after the functor",
                f.cat.morphism_id(m),
                f.cat.morphism_id(rep)
            )));
        }
    }
    let descended = FibreFunctor::new(
        (0..fq.num_objects()).map(|o| pulled.fibre(o).to_vec()).collect(),
        representative.iter().map(|&r| pulled.action(r).to_vec()).collect(),
    );
    let p = principal_diagram(&xf)?;
    let co = coend(&p, &descended)?;

    let b = x.base();
    let fibre_obj = (0..b.len()).map(|c| phi.on_objects[x.fibre_obj(c)]).collect();
    let transitions = (0..b.len())
        .map(|c| x.transitions(c).iter().map(|&t| phi.on_morphisms[t]).collect())
        .collect();
    let bundle = StratBundle::new(x.base_arc().clone(), g.clone(), fibre_obj, transitions)?;
    let iso = coend_iso(&p, &co, &bundle, |_, alpha, y| g.ff.action(phi.on_morphisms[representative[alpha]])[y])
        .map_err(|reason| Error::invalid("associated bundle", reason))?;
    Ok(AssociatedBundle { bundle, coend: co, iso })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomSize {
    pub source: String,
    pub target: String,
    pub size: usize,
}

/// Finiteness record for a structure category: every hom-set is finite,
/// hence compact when discrete, so function-space families need no
/// further topological hypothesis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NkcCertificate {
    pub hom_sizes: Vec<HomSize>,
    pub max_hom_size: usize,
    pub fibre_sizes: BTreeMap<String, usize>,
    pub holds: bool,
    pub reason: &'static str,
}

pub fn nkc_certificate(s: &StructureCategory) -> NkcCertificate {
    let cat = &s.cat;
    let mut hom_sizes = Vec::new();
    for a in 0..cat.num_objects() {
        for b in 0..cat.num_objects() {
            hom_sizes.push(HomSize {
                source: cat.object_id(a).to_string(),
                target: cat.object_id(b).to_string(),
                size: cat.hom(a, b).len(),
            });
        }
    }
    NkcCertificate {
        max_hom_size: hom_sizes.iter().map(|h| h.size).max().unwrap_or(0),
        hom_sizes,
        fibre_sizes: (0..cat.num_objects())
            .map(|o| (cat.object_id(o).to_string(), s.ff.fibre_size(o)))
            .collect(),
        holds: true,
        reason: "all hom-sets and fibres are finite discrete sets, hence compact; \
                 function bundles are then bundles of finite sets with the same transitions",
    }
}
