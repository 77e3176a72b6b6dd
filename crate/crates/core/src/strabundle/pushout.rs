use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::cellbase::{BaseComplex, CellSpec, ComplexKind, SimplicialMap};
use crate::{Error, Result};

use super::bundle::StratBundle;
use super::map::FBundleMap;

/// A square of F-maps
///
/// ```text
///   A --h--> Y
///   |i       |j
///   M --phi-> X
/// ```
#[derive(Clone, Debug)]
pub struct BundleSquare {
    pub a: StratBundle,
    pub y: StratBundle,
    pub m: StratBundle,
    pub x: StratBundle,
    pub h: FBundleMap,
    pub i: FBundleMap,
    pub j: FBundleMap,
    pub phi: FBundleMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushoutWitness {
    /// Which cocone the property failed against.
    pub target: &'static str,
    /// `conflict`, `no_mediator`, `multiple_mediators` or `search_budget`.
    pub kind: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushoutCheck {
    pub holds: bool,
    pub targets_checked: usize,
    pub witness: Option<PushoutWitness>,
}

const SEARCH_BUDGET: usize = 200_000;

/// Bounded check of the push-out property. The cocones tested are the
/// independently built push-out `P` of `Y ← A → M` and the corner `X`
/// itself; the square passes if the mediating F-map exists and is unique
/// for `X → P`, `X → X` and `P → X`. Mediators are found by exhaustive
/// backtracking over cell images and fibre morphisms up to `≡`.
pub fn pushout_universality_check(sq: &BundleSquare) -> Result<PushoutCheck> {
    sq.h.check(&sq.a, &sq.y)?;
    sq.i.check(&sq.a, &sq.m)?;
    sq.j.check(&sq.y, &sq.x)?;
    sq.phi.check(&sq.m, &sq.x)?;
    let top = sq.h.then(&sq.j, &sq.a);
    let left = sq.i.then(&sq.phi, &sq.a);
    if !top.equivalent(&left, &sq.a) {
        let cell = (0..sq.a.base().len())
            .find(|&c| top.base_map.image(c) != left.base_map.image(c) || !sq.a.same(top.fibre_morphisms[c], left.fibre_morphisms[c]))
            .map(|c| sq.a.base().id(c).to_string())
            .unwrap_or_default();
        return Err(Error::NonCommutingSquare(format!("the two composites differ over `{cell}`")));
    }
    let (p, up, vp) = canonical_pushout(sq)?;
    let trials: [(&'static str, &StratBundle, &FBundleMap, &FBundleMap, &StratBundle, &FBundleMap, &FBundleMap); 3] = [
        ("canonical_pushout", &sq.x, &sq.j, &sq.phi, &p, &up, &vp),
        ("corner", &sq.x, &sq.j, &sq.phi, &sq.x, &sq.j, &sq.phi),
        ("corner_from_pushout", &p, &up, &vp, &sq.x, &sq.j, &sq.phi),
    ];
    for (k, (target, corner, cj, cphi, z, u, v)) in trials.into_iter().enumerate() {
        let outcome = mediators(sq, corner, cj, cphi, z, u, v);
        let witness = match outcome {
            Mediation::Unique => continue,
            Mediation::Conflict(detail) => PushoutWitness {
                target,
                kind: "conflict",
                detail,
            },
            Mediation::NoMediator(detail) => PushoutWitness {
                target,
                kind: "no_mediator",
                detail,
            },
            Mediation::Multiple(detail) => PushoutWitness {
                target,
                kind: "multiple_mediators",
                detail,
            },
            Mediation::Budget => PushoutWitness {
                target,
                kind: "search_budget",
                detail: format!("more than {SEARCH_BUDGET} search steps"),
            },
        };
        return Ok(PushoutCheck {
            holds: false,
            targets_checked: k + 1,
            witness: Some(witness),
        });
    }
    Ok(PushoutCheck {
        holds: true,
        targets_checked: 3,
        witness: None,
    })
}

/// `Y ⊔ M` with each cell of `A` identified with its image in `Y`,
/// together with its cocone maps from `Y` and `M`.
fn canonical_pushout(sq: &BundleSquare) -> Result<(StratBundle, FBundleMap, FBundleMap)> {
    let (yb, mb) = (sq.y.base(), sq.m.base());
    let ny = yb.len();
    let mut uf = UnionFind::<usize>::new(ny + mb.len());
    for k in 0..sq.a.base().len() {
        uf.union(ny + sq.i.base_map.image(k), sq.h.base_map.image(k));
    }
    // class representative: the smallest node, which is a cell of Y whenever
    // the class meets Y
    let mut rep = vec![usize::MAX; ny + mb.len()];
    for n in 0..ny + mb.len() {
        let r = uf.find(n);
        if rep[r] == usize::MAX || n < rep[r] {
            rep[r] = n;
        }
    }
    let class = |n: usize| rep[uf.find(n)];
    let name = |n: usize| {
        if n < ny {
            format!("y:{}", yb.id(n))
        } else {
            format!("m:{}", mb.id(n - ny))
        }
    };
    let mut reps: Vec<usize> = (0..ny + mb.len()).map(class).collect();
    reps.sort_unstable();
    reps.dedup();
    let mut specs = Vec::with_capacity(reps.len());
    for &r in &reps {
        let (dim, faces, stratum) = if r < ny {
            (yb.dim(r), yb.faces(r).iter().map(|&f| name(class(f))).collect::<Vec<_>>(), yb.stratum(r))
        } else {
            let c = r - ny;
            (mb.dim(c), mb.faces(c).iter().map(|&f| name(class(ny + f))).collect(), mb.stratum(c))
        };
        specs.push(CellSpec {
            id: name(r),
            dim,
            faces,
            stratum,
        });
    }
    let pb = Arc::new(BaseComplex::from_cells(ComplexKind::Simplicial, specs)?);
    let cat = &sq.y.structure().cat;
    let node_cell = |n: usize| pb.index_of(&name(class(n))).expect("class cell");

    // fibre morphism from M into P: h on A, identity elsewhere
    let mut psi: Vec<usize> = (0..mb.len()).map(|c| cat.identity(sq.m.fibre_obj(c))).collect();
    for k in 0..sq.a.base().len() {
        psi[sq.i.base_map.image(k)] = sq.h.fibre_morphisms[k];
    }
    let mut fibre_obj = vec![usize::MAX; pb.len()];
    let mut transitions: HashMap<(usize, usize), usize> = HashMap::new();
    for &r in &reps {
        let pc = node_cell(r);
        if r < ny {
            fibre_obj[pc] = sq.y.fibre_obj(r);
            for (&f, &t) in yb.faces(r).iter().zip(sq.y.transitions(r)) {
                transitions.insert((node_cell(f), pc), t);
            }
        } else {
            let c = r - ny;
            fibre_obj[pc] = sq.m.fibre_obj(c);
            for (&f, &t) in mb.faces(c).iter().zip(sq.m.transitions(c)) {
                transitions.insert((node_cell(ny + f), pc), cat.comp(psi[f], t));
            }
        }
    }
    let p = StratBundle::from_incidences(pb.clone(), sq.y.structure_arc().clone(), fibre_obj, &transitions)?;
    let up = FBundleMap {
        base_map: SimplicialMap::from_cell_map_unchecked((0..ny).map(node_cell).collect()),
        fibre_morphisms: (0..ny).map(|c| cat.identity(sq.y.fibre_obj(c))).collect(),
    };
    let vp = FBundleMap {
        base_map: SimplicialMap::from_cell_map_unchecked((0..mb.len()).map(|c| node_cell(ny + c)).collect()),
        fibre_morphisms: psi,
    };
    Ok((p, up, vp))
}

enum Mediation {
    Unique,
    Conflict(String),
    NoMediator(String),
    Multiple(String),
    Budget,
}

/// Counts F-maps `w: corner → z` with `w∘cj = u` and `w∘cphi = v`, up to two.
fn mediators(
    sq: &BundleSquare,
    corner: &StratBundle,
    cj: &FBundleMap,
    cphi: &FBundleMap,
    z: &StratBundle,
    u: &FBundleMap,
    v: &FBundleMap,
) -> Mediation {
    let cb = corner.base();
    let zb = z.base();
    let s = corner.structure();
    let cat = &s.cat;

    // constraints per corner cell: (incoming fibre morphism, required composite)
    let mut forced: Vec<Option<usize>> = vec![None; cb.len()];
    let mut equations: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cb.len()];
    for (src, into_corner, into_z) in [(sq.y.base(), cj, u), (sq.m.base(), cphi, v)] {
        for c in 0..src.len() {
            let xc = into_corner.base_map.image(c);
            let zc = into_z.base_map.image(c);
            match forced[xc] {
                Some(prev) if prev != zc => {
                    return Mediation::Conflict(format!(
                        "`{}` would have to go to both `{}` and `{}`",
                        cb.id(xc),
                        zb.id(prev),
                        zb.id(zc)
                    ));
                }
                _ => forced[xc] = Some(zc),
            }
            equations[xc].push((into_corner.fibre_morphisms[c], into_z.fibre_morphisms[c]));
        }
    }

    let mut candidates: Vec<Vec<(usize, usize)>> = Vec::with_capacity(cb.len());
    for xc in 0..cb.len() {
        let images: Vec<usize> = match forced[xc] {
            Some(zc) => vec![zc],
            None => (0..zb.len()).filter(|&zc| zb.dim(zc) <= cb.dim(xc)).collect(),
        };
        let mut list = Vec::new();
        for zc in images {
            let mut seen: Vec<usize> = Vec::new();
            for &w in cat.hom(corner.fibre_obj(xc), z.fibre_obj(zc)) {
                if seen.iter().any(|&o| s.same(o, w)) {
                    continue;
                }
                seen.push(w);
                if equations[xc].iter().all(|&(g, r)| s.same(cat.comp(w, g), r)) {
                    list.push((zc, w));
                }
            }
        }
        if list.is_empty() {
            return Mediation::NoMediator(format!("no admissible image for `{}`", cb.id(xc)));
        }
        candidates.push(list);
    }

    let mut order: Vec<usize> = (0..cb.len()).collect();
    order.sort_by_key(|&c| (cb.dim(c), c));
    let mut search = Search {
        corner,
        z,
        order,
        candidates,
        choice: vec![None; cb.len()],
        found: Vec::new(),
        steps: 0,
    };
    search.run(0);
    if search.steps > SEARCH_BUDGET {
        return Mediation::Budget;
    }
    match search.found.as_slice() {
        [] => Mediation::NoMediator("no assignment commutes with all transitions".into()),
        [_] => Mediation::Unique,
        [a, b, ..] => {
            let c = (0..a.len()).find(|&c| a[c] != b[c]).expect("distinct solutions");
            Mediation::Multiple(format!("two mediators differ over `{}`", cb.id(c)))
        }
    }
}

struct Search<'a> {
    corner: &'a StratBundle,
    z: &'a StratBundle,
    order: Vec<usize>,
    candidates: Vec<Vec<(usize, usize)>>,
    choice: Vec<Option<(usize, usize)>>,
    found: Vec<Vec<(usize, usize)>>,
    steps: usize,
}

impl Search<'_> {
    /// Returns true once the search can stop.
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            self.found.push(self.choice.iter().map(|o| o.expect("complete")).collect());
            return self.found.len() >= 2;
        }
        let c = self.order[depth];
        for k in 0..self.candidates[c].len() {
            self.steps += 1;
            if self.steps > SEARCH_BUDGET {
                return true;
            }
            let cand = self.candidates[c][k];
            if self.consistent(c, cand) {
                self.choice[c] = Some(cand);
                if self.run(depth + 1) {
                    return true;
                }
                self.choice[c] = None;
            }
        }
        false
    }

    /// Naturality against the already assigned faces of `c`.
    fn consistent(&self, c: usize, (zc, w): (usize, usize)) -> bool {
        let s = self.corner.structure();
        for (&f, &t) in self.corner.base().faces(c).iter().zip(self.corner.transitions(c)) {
            let (zf, wf) = self.choice[f].expect("faces are assigned first");
            let Some(down) = self.z.composite(zf, zc) else {
                return false;
            };
            if !s.same(s.cat.comp(down, w), s.cat.comp(wf, t)) {
                return false;
            }
        }
        true
    }
}
