use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::report::ValidationReport;
use crate::{Error, Result};

/// A morphism of a [`FiniteCategory`], addressed by index elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category given by explicit hom-sets and a composition table.
///
/// Objects and morphisms are kept sorted by identifier, so every hom-set is
/// listed in lexicographic order and index-based results are reproducible.
/// The composition table may be partial or wrong; [`validate_category`]
/// reports the damage instead of refusing construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    homs: Vec<Vec<usize>>,
    object_index: HashMap<String, usize>,
    morphism_index: HashMap<String, usize>,
}

/// Raw, identifier-based description of a category.
#[derive(Clone, Debug, Default)]
pub struct CategoryParts {
    pub objects: Vec<String>,
    /// `(id, source, target)`
    pub morphisms: Vec<(String, String, String)>,
    /// object → identity morphism
    pub identities: BTreeMap<String, String>,
    /// `(g, f, g∘f)`
    pub compose: Vec<(String, String, String)>,
}

impl FiniteCategory {
    pub fn from_parts(parts: CategoryParts) -> Result<Self> {
        let mut objects = parts.objects;
        objects.sort();
        if let Some(w) = objects.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateId {
                kind: "object",
                id: w[0].clone(),
            });
        }
        let object_index: HashMap<String, usize> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect();
        let obj = |id: &str| {
            object_index
                .get(id)
                .copied()
                .ok_or_else(|| Error::unknown("object", id))
        };

        let mut mors = Vec::with_capacity(parts.morphisms.len());
        for (id, s, t) in &parts.morphisms {
            mors.push(Morphism {
                id: id.clone(),
                source: obj(s)?,
                target: obj(t)?,
            });
        }
        mors.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = mors.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::DuplicateId {
                kind: "morphism",
                id: w[0].id.clone(),
            });
        }
        let morphism_index: HashMap<String, usize> = mors
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.clone(), i))
            .collect();
        let mor = |id: &str| {
            morphism_index
                .get(id)
                .copied()
                .ok_or_else(|| Error::unknown("morphism", id))
        };

        let mut identities = Vec::with_capacity(objects.len());
        for o in &objects {
            let id = parts
                .identities
                .get(o)
                .ok_or_else(|| Error::Malformed(format!("object `{o}` has no identity")))?;
            identities.push(mor(id)?);
        }
        for o in parts.identities.keys() {
            obj(o)?;
        }

        let mut compose = HashMap::with_capacity(parts.compose.len());
        for (g, f, gf) in &parts.compose {
            let key = (mor(g)?, mor(f)?);
            let value = mor(gf)?;
            if let Some(prev) = compose.insert(key, value) {
                if prev != value {
                    return Err(Error::Malformed(format!(
                        "composite {g}∘{f} given twice with different values"
                    )));
                }
            }
        }

        Ok(Self::assemble(objects, object_index, mors, morphism_index, identities, compose))
    }

    /// Index-level constructor for derived categories. Morphism identifiers
    /// are re-sorted; `compose` and `identities` are remapped accordingly.
    pub(crate) fn from_indexed(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Self {
        // objects are expected to arrive sorted; enforce it by remapping if not.
        let mut obj_order: Vec<usize> = (0..objects.len()).collect();
        obj_order.sort_by(|&a, &b| objects[a].cmp(&objects[b]));
        let mut obj_new = vec![0; objects.len()];
        for (new, &old) in obj_order.iter().enumerate() {
            obj_new[old] = new;
        }
        let sorted_objects: Vec<String> = obj_order.iter().map(|&i| objects[i].clone()).collect();
        let identities_by_obj: Vec<usize> = {
            let mut v = vec![0; objects.len()];
            for (old, &idm) in identities.iter().enumerate() {
                v[obj_new[old]] = idm;
            }
            v
        };

        let mut order: Vec<usize> = (0..morphisms.len()).collect();
        order.sort_by(|&a, &b| morphisms[a].id.cmp(&morphisms[b].id));
        let mut new_index = vec![0; morphisms.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let mors: Vec<Morphism> = order
            .iter()
            .map(|&i| Morphism {
                id: morphisms[i].id.clone(),
                source: obj_new[morphisms[i].source],
                target: obj_new[morphisms[i].target],
            })
            .collect();
        let identities = identities_by_obj.iter().map(|&m| new_index[m]).collect();
        let compose = compose
            .into_iter()
            .map(|((g, f), gf)| ((new_index[g], new_index[f]), new_index[gf]))
            .collect();
        let object_index = sorted_objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect();
        let morphism_index = mors
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.clone(), i))
            .collect();
        Self::assemble(sorted_objects, object_index, mors, morphism_index, identities, compose)
    }

    fn assemble(
        objects: Vec<String>,
        object_index: HashMap<String, usize>,
        morphisms: Vec<Morphism>,
        morphism_index: HashMap<String, usize>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Self {
        let n = objects.len();
        let mut homs = vec![Vec::new(); n * n];
        for (i, m) in morphisms.iter().enumerate() {
            homs[m.source * n + m.target].push(i);
        }
        FiniteCategory {
            objects,
            morphisms,
            identities,
            compose,
            homs,
            object_index,
            morphism_index,
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_id(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn object_index(&self, id: &str) -> Result<usize> {
        self.object_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::unknown("object", id))
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, m: usize) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn morphism_id(&self, m: usize) -> &str {
        &self.morphisms[m].id
    }

    pub fn morphism_index(&self, id: &str) -> Result<usize> {
        self.morphism_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::unknown("morphism", id))
    }

    pub fn source(&self, m: usize) -> usize {
        self.morphisms[m].source
    }

    pub fn target(&self, m: usize) -> usize {
        self.morphisms[m].target
    }

    /// Morphisms `a → b`, sorted by identifier.
    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a * self.objects.len() + b]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.morphisms[m].source] == m
    }

    /// `g ∘ f`, if the table has an entry.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    /// `g ∘ f` for a category already known to be valid.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        match self.compose.get(&(g, f)) {
            Some(&gf) => gf,
            None => panic!(
                "composite {}∘{} missing from a validated category",
                self.morphisms[g].id, self.morphisms[f].id
            ),
        }
    }

    pub(crate) fn compose_table(&self) -> &HashMap<(usize, usize), usize> {
        &self.compose
    }

    /// Two-sided inverse by identifier equality.
    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (a, b) = (self.source(f), self.target(f));
        self.hom(b, a).iter().copied().find(|&g| {
            self.compose(g, f) == Some(self.identity(a)) && self.compose(f, g) == Some(self.identity(b))
        })
    }

    /// Canonical parts, suitable for serialization.
    pub fn to_parts(&self) -> CategoryParts {
        let mut compose: Vec<(String, String, String)> = self
            .compose
            .iter()
            .map(|(&(g, f), &gf)| {
                (
                    self.morphisms[g].id.clone(),
                    self.morphisms[f].id.clone(),
                    self.morphisms[gf].id.clone(),
                )
            })
            .collect();
        compose.sort();
        CategoryParts {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| {
                    (
                        m.id.clone(),
                        self.objects[m.source].clone(),
                        self.objects[m.target].clone(),
                    )
                })
                .collect(),
            identities: self
                .objects
                .iter()
                .zip(&self.identities)
                .map(|(o, &m)| (o.clone(), self.morphisms[m].id.clone()))
                .collect(),
            compose,
        }
    }
}

/// A failed category axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum CategoryViolation {
    IdentityMistyped { object: String, morphism: String },
    MissingComposite { g: String, f: String },
    CompositeMistyped { g: String, f: String, gf: String },
    ComposedNonComposable { g: String, f: String },
    LeftIdentity { f: String },
    RightIdentity { f: String },
    /// `h ∘ (g ∘ f) ≠ (h ∘ g) ∘ f`
    NonAssociative { h: String, g: String, f: String },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CategoryViolation::*;
        match self {
            IdentityMistyped { object, morphism } => {
                write!(fmt, "identity `{morphism}` of `{object}` is not an endomorphism of it")
            }
            MissingComposite { g, f } => write!(fmt, "composite {g}∘{f} is missing"),
            CompositeMistyped { g, f, gf } => {
                write!(fmt, "composite {g}∘{f} = {gf} has the wrong source or target")
            }
            ComposedNonComposable { g, f } => {
                write!(fmt, "table composes non-composable pair {g}∘{f}")
            }
            LeftIdentity { f } => write!(fmt, "left identity law fails for `{f}`"),
            RightIdentity { f } => write!(fmt, "right identity law fails for `{f}`"),
            NonAssociative { h, g, f } => {
                write!(fmt, "associativity fails on ({h}, {g}, {f})")
            }
        }
    }
}

/// Exhaustively checks identities, typing, totality, and associativity.
pub fn validate_category(cat: &FiniteCategory) -> ValidationReport<CategoryViolation> {
    let mut report = ValidationReport::new("category");
    let name = |m: usize| cat.morphism_id(m).to_string();

    for (o, &idm) in cat.identities.iter().enumerate() {
        if cat.source(idm) != o || cat.target(idm) != o {
            report.push(CategoryViolation::IdentityMistyped {
                object: cat.object_id(o).to_string(),
                morphism: name(idm),
            });
        }
    }

    let mut composite_ok = true;
    for (&(g, f), &gf) in &cat.compose {
        if cat.target(f) != cat.source(g) {
            report.push(CategoryViolation::ComposedNonComposable { g: name(g), f: name(f) });
            composite_ok = false;
        } else if cat.source(gf) != cat.source(f) || cat.target(gf) != cat.target(g) {
            report.push(CategoryViolation::CompositeMistyped {
                g: name(g),
                f: name(f),
                gf: name(gf),
            });
            composite_ok = false;
        }
    }
    for f in 0..cat.num_morphisms() {
        let b = cat.target(f);
        for c in 0..cat.num_objects() {
            for &g in cat.hom(b, c) {
                if cat.compose(g, f).is_none() {
                    report.push(CategoryViolation::MissingComposite { g: name(g), f: name(f) });
                    composite_ok = false;
                }
            }
        }
    }
    if report.violations.iter().any(|v| matches!(v, CategoryViolation::IdentityMistyped { .. })) {
        return report;
    }

    for f in 0..cat.num_morphisms() {
        let (a, b) = (cat.source(f), cat.target(f));
        if cat.compose(cat.identity(b), f) != Some(f) {
            report.push(CategoryViolation::LeftIdentity { f: name(f) });
        }
        if cat.compose(f, cat.identity(a)) != Some(f) {
            report.push(CategoryViolation::RightIdentity { f: name(f) });
        }
    }

    if !composite_ok {
        return report;
    }
    let n = cat.num_objects();
    for f in 0..cat.num_morphisms() {
        let b = cat.target(f);
        for c in 0..n {
            for &g in cat.hom(b, c) {
                let gf = cat.comp(g, f);
                for d in 0..n {
                    for &h in cat.hom(c, d) {
                        if cat.comp(h, gf) != cat.comp(cat.comp(h, g), f) {
                            report.push(CategoryViolation::NonAssociative {
                                h: name(h),
                                g: name(g),
                                f: name(f),
                            });
                        }
                    }
                }
            }
        }
    }
    report
}

/// Result of [`is_groupoid`]: the first non-invertible morphism, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupoidCheck {
    pub is_groupoid: bool,
    pub witness: Option<String>,
}

pub fn is_groupoid(cat: &FiniteCategory) -> GroupoidCheck {
    match (0..cat.num_morphisms()).find(|&f| cat.inverse(f).is_none()) {
        None => GroupoidCheck {
            is_groupoid: true,
            witness: None,
        },
        Some(f) => GroupoidCheck {
            is_groupoid: false,
            witness: Some(cat.morphism_id(f).to_string()),
        },
    }
}

/// Reverses every morphism; the composition table is transposed.
pub fn opposite(cat: &FiniteCategory) -> FiniteCategory {
    let morphisms = cat
        .morphisms
        .iter()
        .map(|m| Morphism {
            id: m.id.clone(),
            source: m.target,
            target: m.source,
        })
        .collect();
    let compose = cat.compose.iter().map(|(&(g, f), &gf)| ((f, g), gf)).collect();
    FiniteCategory::from_indexed(cat.objects.clone(), morphisms, cat.identities.clone(), compose)
}
