use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cellbase::{BaseComplex, CellSpec, ComplexKind, SimplicialMap, Subcomplex};
use crate::fincat::{CatFunctor, CategoryParts, FibreFunctor, FiniteCategory, StructureCategory};
use crate::funcspace::DiagramBundle;
use crate::strabundle::{restrict, FBundleMap, StratBundle};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// A category with its fibre functor. `fibres` and `actions` may be
/// omitted for a bare category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    /// `[g, f, g∘f]`
    pub compose: Vec<[String; 3]>,
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub fibres: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, String>>,
}

impl CategoryDoc {
    pub fn from_structure(s: &StructureCategory) -> Self {
        let parts = s.cat.to_parts();
        let (fibres, actions) = s.ff.to_tables(&s.cat);
        CategoryDoc {
            objects: parts.objects,
            morphisms: parts
                .morphisms
                .into_iter()
                .map(|(id, src, tgt)| MorphismDoc { id, src, tgt })
                .collect(),
            compose: parts.compose.into_iter().map(|(g, f, gf)| [g, f, gf]).collect(),
            identities: parts.identities,
            fibres,
            actions,
        }
    }

    /// Resolves identifiers without checking any axiom.
    pub fn to_parts(&self) -> Result<(FiniteCategory, FibreFunctor)> {
        let cat = FiniteCategory::from_parts(CategoryParts {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| (m.id.clone(), m.src.clone(), m.tgt.clone()))
                .collect(),
            identities: self.identities.clone(),
            compose: self
                .compose
                .iter()
                .map(|[g, f, gf]| (g.clone(), f.clone(), gf.clone()))
                .collect(),
        })?;
        let ff = FibreFunctor::from_tables(&cat, &self.fibres, &self.actions)?;
        Ok((cat, ff))
    }

    /// Resolves and validates.
    pub fn to_structure(&self) -> Result<StructureCategory> {
        let (cat, ff) = self.to_parts()?;
        StructureCategory::new(cat, ff)
    }
}

fn is_simplicial(kind: &ComplexKind) -> bool {
    *kind == ComplexKind::Simplicial
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    #[serde(default, skip_serializing_if = "is_simplicial")]
    pub kind: ComplexKind,
    pub cells: Vec<CellSpec>,
}

impl ComplexDoc {
    pub fn from_complex(b: &BaseComplex) -> Self {
        ComplexDoc {
            kind: b.kind(),
            cells: b.to_specs(),
        }
    }

    pub fn to_complex(&self) -> Result<BaseComplex> {
        BaseComplex::from_cells(self.kind, self.cells.clone())
    }
}

/// A simplicial map given on vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub vertex_map: BTreeMap<String, String>,
}

fn vertex_table(map: &SimplicialMap, src: &BaseComplex, tgt: &BaseComplex) -> BTreeMap<String, String> {
    (0..src.len())
        .filter(|&c| src.dim(c) == 0)
        .map(|v| (src.id(v).to_string(), tgt.id(map.image(v)).to_string()))
        .collect()
}

fn resolve_vertices(
    table: &BTreeMap<String, String>,
    src: &BaseComplex,
    tgt: &BaseComplex,
) -> Result<SimplicialMap> {
    let mut vm = BTreeMap::new();
    for (v, w) in table {
        vm.insert(src.index_of(v)?, tgt.index_of(w)?);
    }
    SimplicialMap::from_vertex_map(src, tgt, &vm)
}

impl MapDoc {
    pub fn from_map(map: &SimplicialMap, src: &BaseComplex, tgt: &BaseComplex) -> Self {
        MapDoc {
            vertex_map: vertex_table(map, src, tgt),
        }
    }

    pub fn to_map(&self, src: &BaseComplex, tgt: &BaseComplex) -> Result<SimplicialMap> {
        resolve_vertices(&self.vertex_map, src, tgt)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub face: String,
    pub cell: String,
    pub mor: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleDoc {
    pub base: ComplexDoc,
    pub category: CategoryDoc,
    /// cell → fibre object
    pub fibres: BTreeMap<String, String>,
    /// Omitted incidences between cells with the same fibre object carry
    /// the identity.
    #[serde(default)]
    pub transitions: Vec<TransitionDoc>,
}

impl BundleDoc {
    pub fn from_bundle(x: &StratBundle) -> Self {
        let b = x.base();
        let cat = &x.structure().cat;
        let fibres = (0..b.len())
            .map(|c| (b.id(c).to_string(), cat.object_id(x.fibre_obj(c)).to_string()))
            .collect();
        let transitions = b
            .incidences()
            .into_iter()
            .map(|inc| TransitionDoc {
                face: b.id(inc.face).to_string(),
                cell: b.id(inc.cell).to_string(),
                mor: cat.morphism_id(x.transition(inc.face, inc.cell).expect("incidence")).to_string(),
            })
            .collect();
        BundleDoc {
            base: ComplexDoc::from_complex(b),
            category: CategoryDoc::from_structure(x.structure()),
            fibres,
            transitions,
        }
    }

    /// Builds the bundle over a validated structure category. The bundle
    /// conditions are left to `validate_bundle`.
    pub fn to_bundle(&self) -> Result<StratBundle> {
        let structure = Arc::new(self.category.to_structure()?);
        self.to_bundle_over(structure)
    }

    pub fn to_bundle_over(&self, structure: Arc<StructureCategory>) -> Result<StratBundle> {
        let base = Arc::new(self.base.to_complex()?);
        let cat = &structure.cat;
        let mut fibre_obj = vec![usize::MAX; base.len()];
        for (cell, obj) in &self.fibres {
            fibre_obj[base.index_of(cell)?] = cat.object_index(obj)?;
        }
        if let Some(c) = fibre_obj.iter().position(|&o| o == usize::MAX) {
            return Err(Error::Malformed(format!("cell `{}` has no fibre", base.id(c))));
        }
        let mut given: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.transitions {
            let key = (base.index_of(&t.face)?, base.index_of(&t.cell)?);
            if !base.faces(key.1).contains(&key.0) {
                return Err(Error::Malformed(format!("`{}` is not a face of `{}`", t.face, t.cell)));
            }
            if given.insert(key, cat.morphism_index(&t.mor)?).is_some() {
                return Err(Error::Malformed(format!("transition `{}` ≤ `{}` given twice", t.face, t.cell)));
            }
        }
        for inc in base.incidences() {
            let key = (inc.face, inc.cell);
            if !given.contains_key(&key) && fibre_obj[inc.face] == fibre_obj[inc.cell] {
                given.insert(key, cat.identity(fibre_obj[inc.cell]));
            }
        }
        StratBundle::from_incidences(base, structure, fibre_obj, &given)
    }
}

fn fibre_table(x: &StratBundle, y: &StratBundle, map: &FBundleMap) -> BTreeMap<String, String> {
    let cat = &y.structure().cat;
    (0..x.base().len())
        .map(|c| (x.base().id(c).to_string(), cat.morphism_id(map.fibre_morphisms[c]).to_string()))
        .collect()
}

fn resolve_fibres(
    table: &BTreeMap<String, String>,
    base_map: SimplicialMap,
    x: &StratBundle,
    y: &StratBundle,
) -> Result<FBundleMap> {
    let cat = &y.structure().cat;
    let bx = x.base();
    let mut fibre_morphisms = vec![usize::MAX; bx.len()];
    for (cell, mor) in table {
        fibre_morphisms[bx.index_of(cell)?] = cat.morphism_index(mor)?;
    }
    for (c, m) in fibre_morphisms.iter_mut().enumerate() {
        if *m == usize::MAX {
            let (a, b) = (x.fibre_obj(c), y.fibre_obj(base_map.image(c)));
            if a != b {
                return Err(Error::Malformed(format!("cell `{}` has no fibre morphism", bx.id(c))));
            }
            *m = cat.identity(a);
        }
    }
    Ok(FBundleMap {
        base_map,
        fibre_morphisms,
    })
}

/// An F-map. Omitted fibre morphisms between equal objects are identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FMapDoc {
    pub vertex_map: BTreeMap<String, String>,
    #[serde(default)]
    pub fibre_morphisms: BTreeMap<String, String>,
}

impl FMapDoc {
    pub fn from_map(map: &FBundleMap, x: &StratBundle, y: &StratBundle) -> Self {
        FMapDoc {
            vertex_map: vertex_table(&map.base_map, x.base(), y.base()),
            fibre_morphisms: fibre_table(x, y, map),
        }
    }

    pub fn to_map(&self, x: &StratBundle, y: &StratBundle) -> Result<FBundleMap> {
        let base_map = resolve_vertices(&self.vertex_map, x.base(), y.base())?;
        resolve_fibres(&self.fibre_morphisms, base_map, x, y)
    }
}

/// A subcomplex `A` of the attached bundle's base together with the
/// attaching F-map `m|A → y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachingDoc {
    pub subcomplex: Vec<String>,
    pub vertex_map: BTreeMap<String, String>,
    #[serde(default)]
    pub fibre_morphisms: BTreeMap<String, String>,
}

impl AttachingDoc {
    pub fn from_parts(m: &StratBundle, a: &Subcomplex, h: &FBundleMap, y: &StratBundle) -> Self {
        let am = restrict(m, a);
        AttachingDoc {
            subcomplex: a.ids(m.base()).into_iter().map(str::to_string).collect(),
            vertex_map: vertex_table(&h.base_map, am.base(), y.base()),
            fibre_morphisms: fibre_table(&am, y, h),
        }
    }

    pub fn to_parts(&self, m: &StratBundle, y: &StratBundle) -> Result<(Subcomplex, FBundleMap)> {
        let a = Subcomplex::from_ids(m.base(), &self.subcomplex)?;
        let am = restrict(m, &a);
        let base_map = resolve_vertices(&self.vertex_map, am.base(), y.base())?;
        let h = resolve_fibres(&self.fibre_morphisms, base_map, &am, y)?;
        Ok((a, h))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorDoc {
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
}

impl FunctorDoc {
    pub fn from_functor(phi: &CatFunctor, source: &FiniteCategory, target: &FiniteCategory) -> Self {
        let (objects, morphisms) = phi.to_tables(source, target);
        FunctorDoc { objects, morphisms }
    }

    pub fn to_functor(&self, source: &FiniteCategory, target: &FiniteCategory) -> Result<CatFunctor> {
        CatFunctor::from_tables(source, target, &self.objects, &self.morphisms)
    }
}

/// A diagram of function bundles: one bundle document per object and, for
/// every morphism `g: V → W`, its action `X^W_c → X^V_c` over every cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub components: BTreeMap<String, BundleDoc>,
    pub actions: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
}

impl DiagramDoc {
    pub fn from_diagram(p: &DiagramBundle) -> Self {
        let cat = p.cat();
        let b = p.base();
        let components = (0..cat.num_objects())
            .map(|v| (cat.object_id(v).to_string(), BundleDoc::from_bundle(p.component(v))))
            .collect();
        let actions = (0..cat.num_morphisms())
            .map(|g| {
                let (v, w) = (cat.source(g), cat.target(g));
                let cells = (0..b.len())
                    .map(|c| {
                        let (fv, fw) = (p.component(v), p.component(w));
                        let (sv, sw) = (fv.structure().ff.fibre(fv.fibre_obj(c)), fw.structure().ff.fibre(fw.fibre_obj(c)));
                        let table = p.action(g, c).iter().enumerate().map(|(i, &j)| (sw[i].clone(), sv[j].clone())).collect();
                        (b.id(c).to_string(), table)
                    })
                    .collect();
                (cat.morphism_id(g).to_string(), cells)
            })
            .collect();
        DiagramDoc { components, actions }
    }

    pub fn to_diagram(&self) -> Result<DiagramBundle> {
        let first = self
            .components
            .values()
            .next()
            .ok_or_else(|| Error::Malformed("a diagram needs at least one component".into()))?;
        let (cat, _) = first.category.to_parts()?;
        let mut components = Vec::with_capacity(cat.num_objects());
        for v in cat.objects() {
            let doc = self.components.get(v).ok_or_else(|| Error::Malformed(format!("no component for `{v}`")))?;
            components.push(doc.to_bundle()?);
        }
        let b = components[0].base().clone();
        let mut actions = Vec::with_capacity(cat.num_morphisms());
        for (g, m) in cat.morphisms().iter().enumerate() {
            let cells = self
                .actions
                .get(&m.id)
                .ok_or_else(|| Error::Malformed(format!("no action for `{}`", m.id)))?;
            let (fv, fw) = (&components[cat.source(g)], &components[cat.target(g)]);
            let mut per_cell = Vec::with_capacity(b.len());
            for c in 0..b.len() {
                let table = cells
                    .get(b.id(c))
                    .ok_or_else(|| Error::Malformed(format!("action of `{}` misses cell `{}`", m.id, b.id(c))))?;
                let (sv, sw) = (fv.structure().ff.fibre(fv.fibre_obj(c)), fw.structure().ff.fibre(fw.fibre_obj(c)));
                let mut func = Vec::with_capacity(sw.len());
                for e in sw {
                    let image = table
                        .get(e)
                        .ok_or_else(|| Error::Malformed(format!("action of `{}` over `{}` misses `{e}`", m.id, b.id(c))))?;
                    func.push(sv.iter().position(|s| s == image).ok_or_else(|| {
                        Error::Malformed(format!("action of `{}` over `{}` sends `{e}` outside the fibre", m.id, b.id(c)))
                    })?);
                }
                per_cell.push(func);
            }
            actions.push(per_cell);
        }
        DiagramBundle::from_components(components, actions)
    }
}
