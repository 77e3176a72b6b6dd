use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cellbase::{components, BaseComplex, CellSpec, ComplexKind, SimplicialMap, Subcomplex};
use crate::fincat::catalog::{from_functions, ConcreteMorphism};
use crate::fincat::StructureCategory;
use crate::strabundle::{attach_bundle, BundleAttachment, FBundleMap, StratBundle};
use crate::{Error, Result};

use super::rng::Rng;

/// Bounds for one generated instance. Generation is a pure function of
/// the spec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub seed: u64,
    pub max_cells: usize,
    pub max_objects: usize,
    pub max_fibre_size: usize,
    pub groupoid_only: bool,
    pub strata_depth: usize,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec {
            seed: 0,
            max_cells: 30,
            max_objects: 3,
            max_fibre_size: 4,
            groupoid_only: false,
            strata_depth: 3,
        }
    }
}

impl InstanceSpec {
    pub fn check(&self) -> Result<()> {
        if self.max_cells == 0 || self.max_objects == 0 || self.max_fibre_size == 0 || self.strata_depth == 0 {
            return Err(Error::Precondition("instance bounds must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        InstanceSpec { seed, ..self }
    }
}

/// Independent generator streams derived from one seed: stream `k` is
/// seeded with the `k`-th output (from 0) of a generator seeded with `seed`.
pub fn stream(seed: u64, k: usize) -> Rng {
    let mut r = Rng::new(seed);
    let mut s = 0;
    for _ in 0..=k {
        s = r.next_u64();
    }
    Rng::new(s)
}

pub(crate) const STREAM_CATEGORY: usize = 0;
pub(crate) const STREAM_BUNDLE: usize = 1;
pub(crate) const STREAM_MAP: usize = 2;
pub(crate) const STREAM_MUTATION: usize = 3;
pub(crate) const STREAM_PAIR: usize = 4;

/// Upper bound on the number of morphisms of a generated category.
pub const MAX_MORPHISMS: usize = 64;

type Arrow = (usize, usize, Vec<usize>);

struct Closure {
    sizes: Vec<usize>,
    arrows: Vec<Arrow>,
    set: BTreeSet<Arrow>,
}

impl Closure {
    fn new(sizes: &[usize]) -> Self {
        let arrows: Vec<Arrow> = sizes.iter().enumerate().map(|(o, &k)| (o, o, (0..k).collect())).collect();
        let set = arrows.iter().cloned().collect();
        Closure {
            sizes: sizes.to_vec(),
            arrows,
            set,
        }
    }

    /// Adds the generators and everything they compose to, unless that
    /// exceeds [`MAX_MORPHISMS`], in which case nothing changes.
    fn try_add(&mut self, generators: &[Arrow]) -> bool {
        let mut arrows = self.arrows.clone();
        let mut set = self.set.clone();
        let mut queue: Vec<Arrow> = Vec::new();
        for g in generators {
            if set.insert(g.clone()) {
                arrows.push(g.clone());
                queue.push(g.clone());
            }
        }
        while let Some(new) = queue.pop() {
            let mut produced = Vec::new();
            for old in &arrows {
                // old ∘ new and new ∘ old
                if old.0 == new.1 {
                    produced.push((new.0, old.1, new.2.iter().map(|&x| old.2[x]).collect()));
                }
                if new.0 == old.1 {
                    produced.push((old.0, new.1, old.2.iter().map(|&x| new.2[x]).collect()));
                }
            }
            for p in produced {
                if set.insert(p.clone()) {
                    arrows.push(p.clone());
                    queue.push(p);
                    if arrows.len() > MAX_MORPHISMS {
                        return false;
                    }
                }
            }
        }
        self.arrows = arrows;
        self.set = set;
        true
    }

    fn into_structure(self) -> StructureCategory {
        let objects = self
            .sizes
            .iter()
            .enumerate()
            .map(|(o, &k)| (format!("o{o}"), (1..=k).map(|i| i.to_string()).collect()))
            .collect();
        let n = self.sizes.len();
        let morphisms = self
            .arrows
            .into_iter()
            .enumerate()
            .map(|(i, (source, target, function))| ConcreteMorphism {
                id: if i < n { format!("id{source}") } else { format!("m{}", i - n) },
                source,
                target,
                function,
            })
            .collect();
        from_functions(objects, morphisms).expect("closed under composition by construction")
    }
}

fn random_permutation(rng: &mut Rng, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    rng.shuffle(&mut p);
    p
}

fn inverse_permutation(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        q[j] = i;
    }
    q
}

/// A random concrete category: objects are sets `{1..k}`, morphisms are
/// the composition closure of random generators. With `groupoid_only` the
/// generators are bijections, together with their inverses.
pub fn gen_category(spec: &InstanceSpec) -> StructureCategory {
    let mut rng = stream(spec.seed, STREAM_CATEGORY);
    let n = rng.between(1, spec.max_objects);
    let sizes: Vec<usize> = (0..n).map(|_| rng.between(1, spec.max_fibre_size)).collect();
    let mut closure = Closure::new(&sizes);
    let mut batches: Vec<Vec<Arrow>> = Vec::new();
    for (o, &k) in sizes.iter().enumerate() {
        for _ in 0..rng.between(usize::from(k > 1), 2) {
            batches.push(vec![(o, o, random_permutation(&mut rng, k))]);
        }
    }
    if spec.groupoid_only {
        for a in 0..n {
            for b in a + 1..n {
                if sizes[a] == sizes[b] && rng.chance(1, 2) {
                    let u = random_permutation(&mut rng, sizes[a]);
                    let v = inverse_permutation(&u);
                    batches.push(vec![(a, b, u), (b, a, v)]);
                }
            }
        }
    } else {
        for _ in 0..rng.between(1, 3) {
            let (a, b) = (rng.below(n), rng.below(n));
            let f = (0..sizes[a]).map(|_| rng.below(sizes[b])).collect();
            batches.push(vec![(a, b, f)]);
        }
    }
    for batch in &batches {
        closure.try_add(batch);
    }
    closure.into_structure()
}

/// One attachment step of a generated bundle: the cone `m` over a
/// subcomplex `a` glued to `y` along `h`.
#[derive(Clone, Debug)]
pub struct Stage {
    pub y: StratBundle,
    pub m: StratBundle,
    pub a: Subcomplex,
    pub h: FBundleMap,
    /// Cells of `y` whose closure is the image of `a`.
    pub carriers: Vec<usize>,
    pub attachment: BundleAttachment,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: InstanceSpec,
    /// The single-stratum bundle the stages are attached to.
    pub bottom: StratBundle,
    pub stages: Vec<Stage>,
    pub bundle: StratBundle,
}

fn automorphisms(s: &StructureCategory, o: usize) -> Vec<usize> {
    s.cat.hom(o, o).iter().copied().filter(|&m| s.inverse(m).is_some()).collect()
}

fn gauge_transitions(
    b: &BaseComplex,
    s: &StructureCategory,
    fibre_obj: &[usize],
    rng: &mut Rng,
    twist_free_edges: bool,
) -> HashMap<(usize, usize), usize> {
    let gauge: Vec<usize> = (0..b.len()).map(|c| *rng.pick(&automorphisms(s, fibre_obj[c]))).collect();
    let mut out = HashMap::new();
    for inc in b.incidences() {
        let (f, c) = (inc.face, inc.cell);
        let t = if twist_free_edges && b.dim(c) == 1 && b.cofaces(c).is_empty() {
            *rng.pick(&automorphisms(s, fibre_obj[c]))
        } else {
            s.cat.comp(s.inverse(gauge[f]).expect("automorphism"), gauge[c])
        };
        out.insert((f, c), t);
    }
    out
}

fn gen_bottom(rng: &mut Rng, s: &Arc<StructureCategory>, budget: usize) -> Result<StratBundle> {
    let nv = rng.between(2, 6).min(budget);
    let mut specs: Vec<CellSpec> = (0..nv).map(|i| CellSpec::new(format!("v{i}"), 0, &[], 0)).collect();
    let mut pairs: Vec<(usize, usize)> = (0..nv).flat_map(|i| (i + 1..nv).map(move |j| (i, j))).collect();
    rng.shuffle(&mut pairs);
    let mut edges = BTreeSet::new();
    for (i, j) in pairs {
        if specs.len() < budget && rng.chance(2, 3) {
            specs.push(CellSpec::new(format!("e{i}_{j}"), 1, &[&format!("v{i}"), &format!("v{j}")], 0));
            edges.insert((i, j));
        }
    }
    for i in 0..nv {
        for j in i + 1..nv {
            for k in j + 1..nv {
                let all = edges.contains(&(i, j)) && edges.contains(&(i, k)) && edges.contains(&(j, k));
                if all && specs.len() < budget && rng.chance(1, 3) {
                    specs.push(CellSpec::new(
                        format!("t{i}_{j}_{k}"),
                        2,
                        &[&format!("e{i}_{j}"), &format!("e{i}_{k}"), &format!("e{j}_{k}")],
                        0,
                    ));
                }
            }
        }
    }
    let b = Arc::new(BaseComplex::from_cells(ComplexKind::Simplicial, specs)?);
    gauged_bundle(rng, s, b)
}

/// A bundle with one random object per component, gauge-transformed by
/// random automorphisms and twisted on free edges. All transitions are
/// isomorphisms, so it is a bundle for any stratification of `b`.
fn gauged_bundle(rng: &mut Rng, s: &Arc<StructureCategory>, b: Arc<BaseComplex>) -> Result<StratBundle> {
    let mut fibre_obj = vec![0; b.len()];
    for comp in components(&b, &Subcomplex::full(&b)) {
        let o = rng.below(s.cat.num_objects());
        for c in comp {
            fibre_obj[c] = o;
        }
    }
    let transitions = gauge_transitions(&b, s, &fibre_obj, rng, true);
    StratBundle::from_incidences(b, s.clone(), fibre_obj, &transitions)
}

fn cone_stage(rng: &mut Rng, y: &StratBundle, stage: usize, budget: usize) -> Result<Option<Stage>> {
    let yb = y.base();
    let s = y.structure();
    let cat = &s.cat;
    let fits = |cells: &[usize]| Subcomplex::closure_of(yb, cells.iter().copied()).len() < budget;
    let candidates: Vec<usize> = (0..yb.len()).filter(|&c| yb.dim(c) <= 2 && fits(&[c])).collect();
    if candidates.is_empty() {
        return Ok(None);
    }
    let first = *rng.pick(&candidates);
    let mut carriers = vec![first];
    let sources: Vec<usize> = (0..cat.num_objects()).filter(|&v| !cat.hom(v, y.fibre_obj(first)).is_empty()).collect();
    let v = *rng.pick(&sources);
    let homs = cat.hom(v, y.fibre_obj(first));
    // ψ: V → Y_c on the closure of the carriers, natural by construction
    let mut psi: HashMap<usize, usize> = HashMap::new();
    let psi_first = *rng.pick(homs);
    for &f in yb.closure(first) {
        psi.insert(f, cat.comp(y.composite(f, first).expect("face of carrier"), psi_first));
    }
    if rng.chance(1, 3) {
        let others: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&c| !yb.le(c, first) && !yb.le(first, c) && fits(&[first, c]))
            .collect();
        if !others.is_empty() {
            let second = *rng.pick(&others);
            let consistent: Vec<usize> = cat
                .hom(v, y.fibre_obj(second))
                .iter()
                .copied()
                .filter(|&p| {
                    yb.closure(second).iter().all(|&f| match psi.get(&f) {
                        Some(&q) => s.same(q, cat.comp(y.composite(f, second).unwrap(), p)),
                        None => true,
                    })
                })
                .collect();
            if !consistent.is_empty() {
                let p = *rng.pick(&consistent);
                for &f in yb.closure(second) {
                    psi.entry(f).or_insert_with(|| cat.comp(y.composite(f, second).unwrap(), p));
                }
                carriers.push(second);
            }
        }
    }
    let a_cells = Subcomplex::closure_of(yb, carriers.iter().copied());

    let apex = format!("s{stage}");
    let copy = |c: usize| format!("a:{}", yb.id(c));
    let cone = |c: usize| format!("s{stage}^{}", yb.id(c));
    let mut specs = vec![CellSpec::new(apex.clone(), 0, &[], 0)];
    for &c in a_cells.cells() {
        let faces: Vec<String> = yb.faces(c).iter().map(|&f| copy(f)).collect();
        specs.push(CellSpec {
            id: copy(c),
            dim: yb.dim(c),
            faces,
            stratum: 0,
        });
        let mut cone_faces = vec![copy(c)];
        if yb.dim(c) == 0 {
            cone_faces.push(apex.clone());
        } else {
            cone_faces.extend(yb.faces(c).iter().map(|&f| cone(f)));
        }
        specs.push(CellSpec {
            id: cone(c),
            dim: yb.dim(c) + 1,
            faces: cone_faces,
            stratum: 0,
        });
    }
    let mb = Arc::new(BaseComplex::from_cells(ComplexKind::Simplicial, specs)?);
    let fibre_obj = vec![v; mb.len()];
    let structure = y.structure_arc().clone();
    let gauge: Vec<usize> = (0..mb.len()).map(|_| *rng.pick(&automorphisms(s, v))).collect();
    let transitions: HashMap<(usize, usize), usize> = mb
        .incidences()
        .into_iter()
        .map(|inc| {
            let t = cat.comp(s.inverse(gauge[inc.face]).expect("automorphism"), gauge[inc.cell]);
            ((inc.face, inc.cell), t)
        })
        .collect();
    let m = StratBundle::from_incidences(mb.clone(), structure, fibre_obj, &transitions)?;

    let a = Subcomplex::from_ids(&mb, &a_cells.cells().iter().map(|&c| copy(c)).collect::<Vec<_>>())?;
    let targets: Vec<usize> = a
        .cells()
        .iter()
        .map(|&c| yb.index_of(&mb.id(c)[2..]))
        .collect::<Result<_>>()?;
    let base_map = SimplicialMap::from_cell_map(&a.extract(&mb), yb, targets.clone())?;
    let fibre_morphisms = a
        .cells()
        .iter()
        .zip(&targets)
        .map(|(&c, t)| cat.comp(psi[t], gauge[c]))
        .collect();
    let h = FBundleMap {
        base_map,
        fibre_morphisms,
    };
    let attachment = attach_bundle(y, &m, &a, &h)?;
    Ok(Some(Stage {
        y: y.clone(),
        m,
        a,
        h,
        carriers,
        attachment,
    }))
}

/// A random stratified bundle over `structure`: a gauged, possibly twisted
/// bundle over a random complex of dimension at most two, followed by cone
/// attachments, one per further stratum.
pub fn gen_bundle(spec: &InstanceSpec, structure: Arc<StructureCategory>) -> Result<Instance> {
    spec.check()?;
    let mut rng = stream(spec.seed, STREAM_BUNDLE);
    let stages = if spec.strata_depth >= 2 { rng.between(1, spec.strata_depth - 1) } else { 0 };
    let reserve = 4 * stages;
    let room = spec.max_cells.saturating_sub(reserve).max(1);
    let budget = rng.between(room.div_ceil(2), room);
    let bottom = gen_bottom(&mut rng, &structure, budget)?;
    let mut bundle = bottom.clone();
    let mut out = Vec::new();
    for i in 1..=stages {
        let left = spec.max_cells.saturating_sub(bundle.base().len());
        match cone_stage(&mut rng, &bundle, i, left)? {
            Some(stage) => {
                bundle = stage.attachment.bundle.clone();
                out.push(stage);
            }
            None => break,
        }
    }
    Ok(Instance {
        spec: *spec,
        bottom,
        stages: out,
        bundle,
    })
}

pub fn gen_instance(spec: &InstanceSpec) -> Result<Instance> {
    gen_bundle(spec, Arc::new(gen_category(spec)))
}

/// Two bundles over the same base with independent structure categories.
pub fn gen_pair(spec: &InstanceSpec) -> Result<(StratBundle, StratBundle)> {
    let x = gen_instance(spec)?.bundle;
    let mut rng = stream(spec.seed, STREAM_PAIR);
    let other = spec.with_seed(rng.next_u64());
    let s = Arc::new(gen_category(&other));
    let xp = gauged_bundle(&mut rng, &s, x.base_arc().clone())?;
    Ok((x, xp))
}
