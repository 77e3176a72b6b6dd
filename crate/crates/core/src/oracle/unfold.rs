//! Random stratum-preserving maps onto a generated bundle, built stage by
//! stage so that each stage of the source is itself an attachment.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cellbase::{BaseComplex, CellSpec, ComplexKind, SimplicialMap, Subcomplex};
use crate::strabundle::{attach_bundle, pullback, BundleAttachment, FBundleMap, StratBundle};
use crate::Result;

use super::generate::{stream, Instance, Stage, STREAM_MAP};
use super::rng::Rng;

#[derive(Clone, Debug)]
pub struct UnfoldedStage {
    /// Pull-back of the stage's `y` to the source built so far.
    pub y: StratBundle,
    /// Pull-back of the stage's `m` to one or two copies of its base.
    pub m: StratBundle,
    pub a: Subcomplex,
    pub h: FBundleMap,
    pub attachment: BundleAttachment,
    /// The source built so far, mapped to the stage's result.
    pub map: SimplicialMap,
}

#[derive(Clone, Debug)]
pub struct Unfolding {
    pub source: Arc<BaseComplex>,
    pub map: SimplicialMap,
    /// Map from the bottom of the source onto the bottom of the instance.
    pub bottom_map: SimplicialMap,
    pub bottom: StratBundle,
    pub stages: Vec<UnfoldedStage>,
}

/// Bottom of the source: an identity copy of the instance's bottom plus
/// random walks through it, which may pause on a vertex or close up.
fn bottom_source(rng: &mut Rng, bottom: &BaseComplex, budget: usize) -> Result<(Arc<BaseComplex>, SimplicialMap)> {
    let mut specs = bottom.to_specs();
    let mut vmap: BTreeMap<String, usize> = (0..bottom.len()).filter(|&c| bottom.dim(c) == 0).map(|c| (bottom.id(c).to_string(), c)).collect();
    let vertices: Vec<usize> = (0..bottom.len()).filter(|&c| bottom.dim(c) == 0).collect();
    let walks = rng.below(3);
    let mut used = 0;
    for k in 0..walks {
        let len = rng.between(1, 6);
        if used + 2 * len + 1 > budget {
            break;
        }
        let start = *rng.pick(&vertices);
        let mut path = vec![start];
        for _ in 1..len {
            let here = *path.last().unwrap();
            let mut next: Vec<usize> = bottom
                .cofaces(here)
                .iter()
                .filter(|&&e| bottom.dim(e) == 1)
                .map(|&e| *bottom.faces(e).iter().find(|&&v| v != here).unwrap())
                .collect();
            next.push(here);
            path.push(*rng.pick(&next));
        }
        let close = len > 2 && rng.chance(1, 2) && {
            let (a, b) = (path[0], *path.last().unwrap());
            a == b || bottom.cell_with_vertices(&[a.min(b), a.max(b)]).is_some()
        };
        let vid = |i: usize| format!("wv{k}_{i}");
        for (i, &v) in path.iter().enumerate() {
            specs.push(CellSpec::new(vid(i), 0, &[], 0));
            vmap.insert(vid(i), v);
        }
        for i in 1..path.len() {
            specs.push(CellSpec::new(format!("we{k}_{i}"), 1, &[&vid(i - 1), &vid(i)], 0));
        }
        if close {
            specs.push(CellSpec::new(format!("we{k}_c"), 1, &[&vid(path.len() - 1), &vid(0)], 0));
        }
        used += 2 * len + 1;
    }
    let src = Arc::new(BaseComplex::from_cells(ComplexKind::Simplicial, specs)?);
    let vm = vmap.iter().map(|(id, &v)| Ok((src.index_of(id)?, v))).collect::<Result<_>>()?;
    let map = SimplicialMap::from_vertex_map(&src, bottom, &vm)?;
    Ok((src, map))
}

/// Lifts the carriers of `stage` to cells of the current source over them,
/// as a vertex assignment on the closure of the carriers.
fn random_lift(rng: &mut Rng, stage: &Stage, src: &BaseComplex, map: &SimplicialMap) -> Option<BTreeMap<usize, usize>> {
    let yb = stage.y.base();
    let mut lift: BTreeMap<usize, usize> = BTreeMap::new();
    for &sigma in &stage.carriers {
        let over: Vec<usize> = (0..src.len()).filter(|&t| map.image(t) == sigma && src.dim(t) == yb.dim(sigma)).collect();
        if over.is_empty() {
            return None;
        }
        let tau = *rng.pick(&over);
        for u in src.vertices(tau) {
            match lift.insert(map.image(u), u) {
                Some(prev) if prev != u => return None,
                _ => {}
            }
        }
    }
    Some(lift)
}

fn copy_specs(mb: &BaseComplex, a: &Subcomplex, prefix: &str, a_prefix: &str) -> Vec<CellSpec> {
    let name = |c: usize| {
        let id = mb.id(c);
        if a.contains(c) {
            format!("{a_prefix}{}", &id[2..])
        } else {
            format!("{prefix}{id}")
        }
    };
    (0..mb.len())
        .map(|c| CellSpec {
            id: name(c),
            dim: mb.dim(c),
            faces: mb.faces(c).iter().map(|&f| name(f)).collect(),
            stratum: 0,
        })
        .collect()
}

/// Builds a random source over `inst` and the map onto it. Every stage
/// glues one or two pulled-back copies of the stage's cone.
pub fn unfold(inst: &Instance) -> Result<Unfolding> {
    let mut rng = stream(inst.spec.seed, STREAM_MAP);
    let budget = inst.spec.max_cells.saturating_sub(inst.bundle.base().len());
    let (src0, map0) = bottom_source(&mut rng, inst.bottom.base(), budget)?;
    let (bottom, _) = pullback(&inst.bottom, src0.clone(), &map0)?;
    let mut current = bottom.clone();
    let mut current_map = map0.clone();
    let mut stages = Vec::new();
    for stage in &inst.stages {
        let mb = stage.m.base();
        let copies = 1 + rng.below(2);
        let mut specs = copy_specs(mb, &stage.a, "", "a0:");
        if copies == 2 {
            specs.extend(copy_specs(mb, &stage.a, "d", "a1:"));
        }
        let mpb = Arc::new(BaseComplex::from_cells(ComplexKind::Simplicial, specs)?);
        // folding of the copies onto the stage's cone
        let fold: Vec<usize> = (0..mpb.len())
            .map(|c| {
                let id = mpb.id(c);
                let orig = if let Some(rest) = id.strip_prefix("a0:").or_else(|| id.strip_prefix("a1:")) {
                    format!("a:{rest}")
                } else {
                    id.strip_prefix('d').unwrap_or(id).to_string()
                };
                mb.index_of(&orig)
            })
            .collect::<Result<_>>()?;
        let fold = SimplicialMap::from_cell_map(&mpb, mb, fold)?;
        let (m, _) = pullback(&stage.m, mpb.clone(), &fold)?;
        let a_cells: Vec<usize> = (0..mpb.len()).filter(|&c| stage.a.contains(fold.image(c))).collect();
        let a = Subcomplex::new(&mpb, a_cells)?;

        let src = current.base();
        let yb = stage.y.base();
        let second = if copies == 2 { random_lift(&mut rng, stage, src, &current_map) } else { None };
        let mut targets = Vec::with_capacity(a.len());
        let mut fibre_morphisms = Vec::with_capacity(a.len());
        for &c in a.cells() {
            let y_cell = yb.index_of(&mpb.id(c)[3..])?;
            let canonical = src.index_of(yb.id(y_cell))?;
            let t = match (&mpb.id(c)[..3], &second) {
                ("a1:", Some(lift)) => {
                    let mut vs: Vec<usize> = yb.vertices(y_cell).iter().map(|u| lift[u]).collect();
                    vs.sort_unstable();
                    src.cell_with_vertices(&vs).unwrap_or(canonical)
                }
                _ => canonical,
            };
            targets.push(t);
            fibre_morphisms.push(stage.h.fibre_morphisms[stage.a.position(fold.image(c)).unwrap()]);
        }
        let base_map = SimplicialMap::from_cell_map(&a.extract(&mpb), src, targets)?;
        let h = FBundleMap {
            base_map,
            fibre_morphisms,
        };
        let attachment = attach_bundle(&current, &m, &a, &h)?;

        let xb = attachment.bundle.base_arc().clone();
        let mut cell_map = vec![usize::MAX; xb.len()];
        for c in 0..src.len() {
            cell_map[attachment.base.inclusion.image(c)] = stage.attachment.base.inclusion.image(current_map.image(c));
        }
        for c in 0..mpb.len() {
            if !a.contains(c) {
                cell_map[attachment.base.characteristic.image(c)] = stage.attachment.base.characteristic.image(fold.image(c));
            }
        }
        let next_map = SimplicialMap::from_cell_map(&xb, stage.attachment.bundle.base(), cell_map)?;
        stages.push(UnfoldedStage {
            y: current.clone(),
            m,
            a,
            h,
            attachment: attachment.clone(),
            map: next_map.clone(),
        });
        current = attachment.bundle;
        current_map = next_map;
    }
    Ok(Unfolding {
        source: current.base_arc().clone(),
        map: current_map,
        bottom_map: map0,
        bottom,
        stages,
    })
}
