use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use super::category::{validate_category, FiniteCategory, Morphism};
use crate::report::ValidationReport;
use crate::{Error, Result};

/// A functor from a finite category to finite sets.
///
/// `sets[o]` lists the element identifiers of the fibre over object `o`;
/// `actions[m]` is the function of morphism `m`, as indices into the source
/// and target sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreFunctor {
    sets: Vec<Vec<String>>,
    actions: Vec<Vec<usize>>,
}

impl FibreFunctor {
    pub fn new(sets: Vec<Vec<String>>, actions: Vec<Vec<usize>>) -> Self {
        FibreFunctor { sets, actions }
    }

    /// Builds a fibre functor from identifier tables, checking that every
    /// referenced element exists.
    pub fn from_tables(
        cat: &FiniteCategory,
        fibres: &BTreeMap<String, Vec<String>>,
        actions: &BTreeMap<String, BTreeMap<String, String>>,
    ) -> Result<Self> {
        let mut sets = vec![Vec::new(); cat.num_objects()];
        for (o, elems) in fibres {
            sets[cat.object_index(o)?] = elems.clone();
        }
        for m in actions.keys() {
            cat.morphism_index(m)?;
        }
        let mut acts = Vec::with_capacity(cat.num_morphisms());
        for m in cat.morphisms() {
            let src = &sets[m.source];
            let tgt = &sets[m.target];
            let table = actions.get(&m.id);
            let mut func = Vec::with_capacity(src.len());
            for e in src {
                let image = match table.and_then(|t| t.get(e)) {
                    Some(img) => img,
                    None => {
                        return Err(Error::Malformed(format!(
                            "action of `{}` does not send element `{e}`",
                            m.id
                        )))
                    }
                };
                let idx = tgt.iter().position(|t| t == image).ok_or_else(|| {
                    Error::Malformed(format!(
                        "action of `{}` sends `{e}` to `{image}`, not an element of the target fibre",
                        m.id
                    ))
                })?;
                func.push(idx);
            }
            acts.push(func);
        }
        Ok(FibreFunctor { sets, actions: acts })
    }

    pub fn fibre(&self, o: usize) -> &[String] {
        &self.sets[o]
    }

    pub fn fibre_size(&self, o: usize) -> usize {
        self.sets[o].len()
    }

    pub fn action(&self, m: usize) -> &[usize] {
        &self.actions[m]
    }

    pub fn element_index(&self, o: usize, id: &str) -> Option<usize> {
        self.sets[o].iter().position(|e| e == id)
    }

    pub fn to_tables(
        &self,
        cat: &FiniteCategory,
    ) -> (BTreeMap<String, Vec<String>>, BTreeMap<String, BTreeMap<String, String>>) {
        let fibres = cat
            .objects()
            .iter()
            .enumerate()
            .map(|(o, id)| (id.clone(), self.sets[o].clone()))
            .collect();
        let actions = cat
            .morphisms()
            .iter()
            .enumerate()
            .map(|(m, mor)| {
                let table = self.actions[m]
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (self.sets[mor.source][i].clone(), self.sets[mor.target][j].clone()))
                    .collect();
                (mor.id.clone(), table)
            })
            .collect();
        (fibres, actions)
    }
}

/// A failed functor law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum FunctorViolation {
    ShapeMismatch { detail: String },
    NotTotal { morphism: String },
    Identity { object: String },
    Composition { g: String, f: String },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::ShapeMismatch { detail } => write!(fmt, "shape mismatch: {detail}"),
            FunctorViolation::NotTotal { morphism } => {
                write!(fmt, "action of `{morphism}` is not a total function between its fibres")
            }
            FunctorViolation::Identity { object } => {
                write!(fmt, "identity of `{object}` does not act as the identity")
            }
            FunctorViolation::Composition { g, f } => {
                write!(fmt, "action of {g}∘{f} differs from the composite action")
            }
        }
    }
}

/// Checks that `ff` is a functor on `cat` (which is assumed to be a valid category).
pub fn validate_fibre_functor(cat: &FiniteCategory, ff: &FibreFunctor) -> ValidationReport<FunctorViolation> {
    let mut report = ValidationReport::new("fibre functor");
    if ff.sets.len() != cat.num_objects() || ff.actions.len() != cat.num_morphisms() {
        report.push(FunctorViolation::ShapeMismatch {
            detail: format!(
                "{} fibres / {} actions for {} objects / {} morphisms",
                ff.sets.len(),
                ff.actions.len(),
                cat.num_objects(),
                cat.num_morphisms()
            ),
        });
        return report;
    }
    let mut total = true;
    for (m, mor) in cat.morphisms().iter().enumerate() {
        let act = &ff.actions[m];
        if act.len() != ff.sets[mor.source].len() || act.iter().any(|&j| j >= ff.sets[mor.target].len()) {
            report.push(FunctorViolation::NotTotal { morphism: mor.id.clone() });
            total = false;
        }
    }
    if !total {
        return report;
    }
    for o in 0..cat.num_objects() {
        let act = &ff.actions[cat.identity(o)];
        if act.iter().enumerate().any(|(i, &j)| i != j) {
            report.push(FunctorViolation::Identity {
                object: cat.object_id(o).to_string(),
            });
        }
    }
    for (&(g, f), &gf) in cat.compose_table() {
        if cat.target(f) != cat.source(g) {
            continue;
        }
        let composite: Vec<usize> = ff.actions[f].iter().map(|&i| ff.actions[g][i]).collect();
        if composite != ff.actions[gf] {
            report.push(FunctorViolation::Composition {
                g: cat.morphism_id(g).to_string(),
                f: cat.morphism_id(f).to_string(),
            });
        }
    }
    report
}

/// A structure category: a finite category together with its fibre functor.
///
/// Morphism equality for bundle purposes is equality of actions, i.e.
/// equality in the faithful image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureCategory {
    pub cat: FiniteCategory,
    pub ff: FibreFunctor,
}

impl StructureCategory {
    /// Validates both the category axioms and the functor laws.
    pub fn new(cat: FiniteCategory, ff: FibreFunctor) -> Result<Self> {
        validate_category(&cat).into_result()?;
        validate_fibre_functor(&cat, &ff).into_result()?;
        Ok(StructureCategory { cat, ff })
    }

    pub(crate) fn new_unchecked(cat: FiniteCategory, ff: FibreFunctor) -> Self {
        StructureCategory { cat, ff }
    }

    /// `f ≡ g` in the faithful image.
    pub fn same(&self, f: usize, g: usize) -> bool {
        self.cat.source(f) == self.cat.source(g)
            && self.cat.target(f) == self.cat.target(g)
            && self.ff.action(f) == self.ff.action(g)
    }

    pub fn is_identity_like(&self, f: usize) -> bool {
        self.cat.source(f) == self.cat.target(f) && self.ff.action(f).iter().enumerate().all(|(i, &j)| i == j)
    }

    /// An inverse up to `≡`: some `g` with `g∘f ≡ id` and `f∘g ≡ id`.
    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (a, b) = (self.cat.source(f), self.cat.target(f));
        let act_f = self.ff.action(f);
        self.cat.hom(b, a).iter().copied().find(|&g| {
            let act_g = self.ff.action(g);
            act_f.iter().enumerate().all(|(i, &j)| act_g[j] == i) && act_g.iter().enumerate().all(|(i, &j)| act_f[j] == i)
        })
    }

    pub fn is_faithful(&self) -> bool {
        let n = self.cat.num_objects();
        (0..n).all(|a| {
            (0..n).all(|b| {
                let hom = self.cat.hom(a, b);
                hom.iter().enumerate().all(|(i, &f)| hom[i + 1..].iter().all(|&g| self.ff.action(f) != self.ff.action(g)))
            })
        })
    }
}

/// Output of [`faithful_image`]: the quotient category F/≡ with its induced
/// fibre functor and the surjection on morphisms.
#[derive(Clone, Debug)]
pub struct FaithfulImage {
    pub structure: StructureCategory,
    /// `quotient[m]` is the index in `structure.cat` of the class of `m`.
    pub quotient: Vec<usize>,
}

impl FaithfulImage {
    pub fn is_bijective(&self) -> bool {
        self.structure.cat.num_morphisms() == self.quotient.len()
    }
}

/// Identifies morphisms with equal actions. Each class is named after its
/// lexicographically smallest member.
pub fn faithful_image(cat: &FiniteCategory, ff: &FibreFunctor) -> FaithfulImage {
    let mut class_of = vec![usize::MAX; cat.num_morphisms()];
    let mut reps: Vec<usize> = Vec::new();
    let mut by_key: HashMap<(usize, usize, &[usize]), usize> = HashMap::new();
    // morphisms are sorted by id, so the first member seen is the smallest
    for m in 0..cat.num_morphisms() {
        let key = (cat.source(m), cat.target(m), ff.action(m));
        let class = *by_key.entry(key).or_insert_with(|| {
            reps.push(m);
            reps.len() - 1
        });
        class_of[m] = class;
    }
    let morphisms: Vec<Morphism> = reps.iter().map(|&m| cat.morphism(m).clone()).collect();
    let identities = (0..cat.num_objects()).map(|o| class_of[cat.identity(o)]).collect();
    let mut compose = HashMap::new();
    for (&(g, f), &gf) in cat.compose_table() {
        compose.insert((class_of[g], class_of[f]), class_of[gf]);
    }
    let actions = reps.iter().map(|&m| ff.action(m).to_vec()).collect();
    let quotient_cat = FiniteCategory::from_indexed(cat.objects().to_vec(), morphisms, identities, compose);
    // from_indexed keeps order because representatives are already sorted.
    let ff_q = FibreFunctor::new(
        (0..cat.num_objects()).map(|o| ff.fibre(o).to_vec()).collect(),
        actions,
    );
    FaithfulImage {
        structure: StructureCategory::new_unchecked(quotient_cat, ff_q),
        quotient: class_of,
    }
}

/// The hom fibre functor `W ↦ hom(V, W)`, acting by post-composition.
pub fn hom_fibre_functor(cat: &FiniteCategory, v: usize) -> FibreFunctor {
    let n = cat.num_objects();
    let sets: Vec<Vec<String>> = (0..n)
        .map(|w| cat.hom(v, w).iter().map(|&m| cat.morphism_id(m).to_string()).collect())
        .collect();
    let position: HashMap<usize, usize> = (0..n)
        .flat_map(|w| cat.hom(v, w).iter().enumerate().map(|(i, &m)| (m, i)))
        .collect();
    let actions = (0..cat.num_morphisms())
        .map(|alpha| {
            let w = cat.source(alpha);
            cat.hom(v, w)
                .iter()
                .map(|&beta| position[&cat.comp(alpha, beta)])
                .collect()
        })
        .collect();
    FibreFunctor::new(sets, actions)
}

pub(crate) fn pair_id(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// The product structure category `(F×F', ff×ff')`.
pub fn product_category(a: &StructureCategory, b: &StructureCategory) -> StructureCategory {
    let (ca, cb) = (&a.cat, &b.cat);
    let nb_obj = cb.num_objects();
    let nb_mor = cb.num_morphisms();
    let objects: Vec<String> = (0..ca.num_objects())
        .flat_map(|i| (0..nb_obj).map(move |j| (i, j)))
        .map(|(i, j)| pair_id(ca.object_id(i), cb.object_id(j)))
        .collect();
    let morphisms: Vec<Morphism> = (0..ca.num_morphisms())
        .flat_map(|f| (0..nb_mor).map(move |g| (f, g)))
        .map(|(f, g)| Morphism {
            id: pair_id(ca.morphism_id(f), cb.morphism_id(g)),
            source: ca.source(f) * nb_obj + cb.source(g),
            target: ca.target(f) * nb_obj + cb.target(g),
        })
        .collect();
    let identities = (0..ca.num_objects())
        .flat_map(|i| (0..nb_obj).map(move |j| (i, j)))
        .map(|(i, j)| ca.identity(i) * nb_mor + cb.identity(j))
        .collect();
    let mut compose = HashMap::new();
    for (&(g1, f1), &gf1) in ca.compose_table() {
        for (&(g2, f2), &gf2) in cb.compose_table() {
            compose.insert((g1 * nb_mor + g2, f1 * nb_mor + f2), gf1 * nb_mor + gf2);
        }
    }

    // fibre functor before re-sorting, indexed like `objects` / `morphisms`
    let sets: Vec<Vec<String>> = (0..ca.num_objects())
        .flat_map(|i| (0..nb_obj).map(move |j| (i, j)))
        .map(|(i, j)| {
            a.ff.fibre(i)
                .iter()
                .flat_map(|x| b.ff.fibre(j).iter().map(move |y| pair_id(x, y)))
                .collect()
        })
        .collect();
    let actions: Vec<Vec<usize>> = (0..ca.num_morphisms())
        .flat_map(|f| (0..nb_mor).map(move |g| (f, g)))
        .map(|(f, g)| {
            let tgt_b = b.ff.fibre_size(cb.target(g));
            let act_a = a.ff.action(f);
            let act_b = b.ff.action(g);
            act_a
                .iter()
                .flat_map(|&x| act_b.iter().map(move |&y| x * tgt_b + y))
                .collect()
        })
        .collect();

    let cat = FiniteCategory::from_indexed(objects.clone(), morphisms.clone(), identities, compose);
    let ff = reindex_functor(&cat, &objects, &morphisms, sets, actions);
    StructureCategory::new_unchecked(cat, ff)
}

/// Moves fibre data indexed by an unsorted object/morphism list onto the
/// sorted indices of `cat`.
pub(crate) fn reindex_functor(
    cat: &FiniteCategory,
    objects: &[String],
    morphisms: &[Morphism],
    sets: Vec<Vec<String>>,
    actions: Vec<Vec<usize>>,
) -> FibreFunctor {
    let mut new_sets = vec![Vec::new(); cat.num_objects()];
    for (o, set) in objects.iter().zip(sets) {
        new_sets[cat.object_index(o).expect("object present")] = set;
    }
    let mut new_actions = vec![Vec::new(); cat.num_morphisms()];
    for (m, act) in morphisms.iter().zip(actions) {
        new_actions[cat.morphism_index(&m.id).expect("morphism present")] = act;
    }
    FibreFunctor::new(new_sets, new_actions)
}

/// A functor between finite categories, by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatFunctor {
    pub on_objects: Vec<usize>,
    pub on_morphisms: Vec<usize>,
}

impl CatFunctor {
    pub fn identity(cat: &FiniteCategory) -> Self {
        CatFunctor {
            on_objects: (0..cat.num_objects()).collect(),
            on_morphisms: (0..cat.num_morphisms()).collect(),
        }
    }

    pub fn from_tables(
        source: &FiniteCategory,
        target: &FiniteCategory,
        objects: &BTreeMap<String, String>,
        morphisms: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut on_objects = Vec::with_capacity(source.num_objects());
        for o in source.objects() {
            let image = objects
                .get(o)
                .ok_or_else(|| Error::Malformed(format!("functor does not map object `{o}`")))?;
            on_objects.push(target.object_index(image)?);
        }
        let mut on_morphisms = Vec::with_capacity(source.num_morphisms());
        for m in source.morphisms() {
            let image = morphisms
                .get(&m.id)
                .ok_or_else(|| Error::Malformed(format!("functor does not map morphism `{}`", m.id)))?;
            on_morphisms.push(target.morphism_index(image)?);
        }
        Ok(CatFunctor { on_objects, on_morphisms })
    }

    pub fn to_tables(
        &self,
        source: &FiniteCategory,
        target: &FiniteCategory,
    ) -> (BTreeMap<String, String>, BTreeMap<String, String>) {
        (
            source
                .objects()
                .iter()
                .zip(&self.on_objects)
                .map(|(o, &t)| (o.clone(), target.object_id(t).to_string()))
                .collect(),
            source
                .morphisms()
                .iter()
                .zip(&self.on_morphisms)
                .map(|(m, &t)| (m.id.clone(), target.morphism_id(t).to_string()))
                .collect(),
        )
    }

    /// Checks typing, identities, and composition against `target`.
    pub fn validate(&self, source: &FiniteCategory, target: &FiniteCategory) -> Result<()> {
        if self.on_objects.len() != source.num_objects() || self.on_morphisms.len() != source.num_morphisms() {
            return Err(Error::NotFunctor("table sizes do not match the source category".into()));
        }
        for (m, &t) in self.on_morphisms.iter().enumerate() {
            if target.source(t) != self.on_objects[source.source(m)] || target.target(t) != self.on_objects[source.target(m)] {
                return Err(Error::NotFunctor(format!(
                    "image of `{}` has the wrong source or target",
                    source.morphism_id(m)
                )));
            }
        }
        for o in 0..source.num_objects() {
            if self.on_morphisms[source.identity(o)] != target.identity(self.on_objects[o]) {
                return Err(Error::NotFunctor(format!(
                    "identity of `{}` is not sent to an identity",
                    source.object_id(o)
                )));
            }
        }
        for (&(g, f), &gf) in source.compose_table() {
            let lhs = target.compose(self.on_morphisms[g], self.on_morphisms[f]);
            if lhs != Some(self.on_morphisms[gf]) {
                return Err(Error::NotFunctor(format!(
                    "F({0}∘{1}) ≠ F({0})∘F({1})",
                    source.morphism_id(g),
                    source.morphism_id(f)
                )));
            }
        }
        Ok(())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &CatFunctor) -> CatFunctor {
        CatFunctor {
            on_objects: self.on_objects.iter().map(|&o| next.on_objects[o]).collect(),
            on_morphisms: self.on_morphisms.iter().map(|&m| next.on_morphisms[m]).collect(),
        }
    }

    /// The fibre functor `gg ∘ self` on the source category.
    pub fn pull_back_fibres(&self, gg: &FibreFunctor) -> FibreFunctor {
        FibreFunctor::new(
            self.on_objects.iter().map(|&o| gg.fibre(o).to_vec()).collect(),
            self.on_morphisms.iter().map(|&m| gg.action(m).to_vec()).collect(),
        )
    }
}
