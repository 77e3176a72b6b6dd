use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::cellbase::{validate_complex, BaseComplex, ComplexKind, ComplexViolation, Subcomplex};
use crate::fincat::{faithful_image, FaithfulImage, StructureCategory};
use crate::{Error, Result, ValidationReport};

/// A stratified bundle over a simplicial base, stored as a functor on the
/// face poset: a fibre object per cell and a transition morphism
/// `fibre(cell) → fibre(face)` per codimension-one face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratBundle {
    base: Arc<BaseComplex>,
    structure: Arc<StructureCategory>,
    fibre_obj: Vec<usize>,
    /// Parallel to `base.faces(c)`.
    transitions: Vec<Vec<usize>>,
}

impl StratBundle {
    /// Checks shapes and typing. The bundle conditions themselves are
    /// checked by [`validate_bundle`].
    pub fn new(
        base: Arc<BaseComplex>,
        structure: Arc<StructureCategory>,
        fibre_obj: Vec<usize>,
        transitions: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if base.kind() != ComplexKind::Simplicial {
            return Err(Error::Precondition(
                "bundles are defined over simplicial complexes only".into(),
            ));
        }
        let cat = &structure.cat;
        if fibre_obj.len() != base.len() || transitions.len() != base.len() {
            return Err(Error::Malformed(format!(
                "bundle data covers {} cells, base has {}",
                fibre_obj.len().min(transitions.len()),
                base.len()
            )));
        }
        if let Some(c) = (0..base.len()).find(|&c| fibre_obj[c] >= cat.num_objects()) {
            return Err(Error::Malformed(format!("cell `{}` has no fibre object", base.id(c))));
        }
        for c in 0..base.len() {
            if transitions[c].len() != base.faces(c).len() {
                return Err(Error::Malformed(format!(
                    "cell `{}` has {} transitions for {} faces",
                    base.id(c),
                    transitions[c].len(),
                    base.faces(c).len()
                )));
            }
            for (&f, &t) in base.faces(c).iter().zip(&transitions[c]) {
                if t >= cat.num_morphisms() || cat.source(t) != fibre_obj[c] || cat.target(t) != fibre_obj[f] {
                    return Err(Error::Malformed(format!(
                        "transition `{}` ≤ `{}` is not a morphism {} → {}",
                        base.id(f),
                        base.id(c),
                        cat.object_id(fibre_obj[c]),
                        cat.object_id(fibre_obj[f])
                    )));
                }
            }
        }
        Ok(StratBundle {
            base,
            structure,
            fibre_obj,
            transitions,
        })
    }

    /// Builds the transition lists from a map `(face, cell) → morphism`.
    pub fn from_incidences(
        base: Arc<BaseComplex>,
        structure: Arc<StructureCategory>,
        fibre_obj: Vec<usize>,
        transitions: &HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let mut lists = Vec::with_capacity(base.len());
        for c in 0..base.len() {
            let mut list = Vec::with_capacity(base.faces(c).len());
            for &f in base.faces(c) {
                list.push(*transitions.get(&(f, c)).ok_or_else(|| {
                    Error::Malformed(format!("no transition for `{}` ≤ `{}`", base.id(f), base.id(c)))
                })?);
            }
            lists.push(list);
        }
        Self::new(base, structure, fibre_obj, lists)
    }

    /// The product bundle: fibre `obj` everywhere, identity transitions.
    pub fn product(base: Arc<BaseComplex>, structure: Arc<StructureCategory>, obj: usize) -> Result<Self> {
        let id = structure.cat.identity(obj);
        let transitions = (0..base.len()).map(|c| vec![id; base.faces(c).len()]).collect();
        Self::new(base.clone(), structure, vec![obj; base.len()], transitions)
    }

    pub fn base(&self) -> &BaseComplex {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<BaseComplex> {
        &self.base
    }

    pub fn structure(&self) -> &StructureCategory {
        &self.structure
    }

    pub fn structure_arc(&self) -> &Arc<StructureCategory> {
        &self.structure
    }

    pub fn fibre_obj(&self, c: usize) -> usize {
        self.fibre_obj[c]
    }

    pub fn fibre_objects(&self) -> &[usize] {
        &self.fibre_obj
    }

    pub fn fibre_size(&self, c: usize) -> usize {
        self.structure.ff.fibre_size(self.fibre_obj[c])
    }

    pub fn transitions(&self, c: usize) -> &[usize] {
        &self.transitions[c]
    }

    /// The transition of a codimension-one incidence.
    pub fn transition(&self, face: usize, cell: usize) -> Option<usize> {
        let k = self.base.faces(cell).iter().position(|&f| f == face)?;
        Some(self.transitions[cell][k])
    }

    /// The transition along `lower ≤ upper`, composed along the first chain
    /// of faces found. Functoriality makes every chain give the same
    /// morphism up to `≡`.
    pub fn composite(&self, lower: usize, upper: usize) -> Option<usize> {
        if !self.base.le(lower, upper) {
            return None;
        }
        let cat = &self.structure.cat;
        let mut acc = cat.identity(self.fibre_obj[upper]);
        let mut at = upper;
        while at != lower {
            let k = self
                .base
                .faces(at)
                .iter()
                .position(|&f| self.base.le(lower, f))
                .expect("a chain exists below a comparable pair");
            acc = cat.comp(self.transitions[at][k], acc);
            at = self.base.faces(at)[k];
        }
        Some(acc)
    }

    /// Applies a morphism to a fibre element.
    pub fn act(&self, morphism: usize, element: usize) -> usize {
        self.structure.ff.action(morphism)[element]
    }

    pub fn same(&self, f: usize, g: usize) -> bool {
        self.structure.same(f, g)
    }

    /// Equality of data up to `≡` on transitions.
    pub fn equivalent(&self, other: &StratBundle) -> bool {
        self.base == other.base
            && self.structure == other.structure
            && self.fibre_obj == other.fibre_obj
            && self
                .transitions
                .iter()
                .zip(&other.transitions)
                .all(|(a, b)| a.iter().zip(b).all(|(&f, &g)| self.structure.same(f, g)))
    }

    /// Replaces the base by one with the same cells and another stratification.
    pub fn with_base(&self, base: Arc<BaseComplex>) -> Result<Self> {
        if base.len() != self.base.len()
            || (0..base.len()).any(|c| base.id(c) != self.base.id(c) || base.faces(c) != self.base.faces(c))
        {
            return Err(Error::BaseMismatch("the new base has different cells".into()));
        }
        Ok(StratBundle {
            base,
            ..self.clone()
        })
    }

    /// The same bundle over the faithful image of its structure category,
    /// together with the quotient map on morphisms.
    pub fn in_faithful_image(&self) -> (StratBundle, FaithfulImage) {
        let fi = faithful_image(&self.structure.cat, &self.structure.ff);
        let transitions = self
            .transitions
            .iter()
            .map(|list| list.iter().map(|&t| fi.quotient[t]).collect())
            .collect();
        let bundle = StratBundle {
            base: self.base.clone(),
            structure: Arc::new(fi.structure.clone()),
            fibre_obj: self.fibre_obj.clone(),
            transitions,
        };
        (bundle, fi)
    }

    pub fn total_elements(&self) -> usize {
        (0..self.base.len()).map(|c| self.fibre_size(c)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum BundleViolation {
    Base { violation: ComplexViolation },
    NotFunctorial { cell: String, face: String, via: String, other_via: String },
    NotInvertible { face: String, cell: String, morphism: String, stratum: usize },
}

impl fmt::Display for BundleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleViolation::Base { violation } => write!(f, "base: {violation}"),
            BundleViolation::NotFunctorial { cell, face, via, other_via } => write!(
                f,
                "transitions from `{cell}` to `{face}` through `{via}` and `{other_via}` differ"
            ),
            BundleViolation::NotInvertible { face, cell, morphism, stratum } => write!(
                f,
                "transition `{morphism}` for `{face}` ≤ `{cell}` inside stratum {stratum} is not an isomorphism"
            ),
        }
    }
}

/// Checks the base, functoriality on every codimension-two diamond, and
/// invertibility of every transition inside a stratum. All morphism
/// comparisons are in the faithful image.
pub fn validate_bundle(x: &StratBundle) -> ValidationReport<BundleViolation> {
    let mut report = ValidationReport::new("bundle");
    for violation in validate_complex(&x.base).violations {
        report.push(BundleViolation::Base { violation });
    }
    if !report.is_valid() {
        return report;
    }
    let b = &*x.base;
    let cat = &x.structure.cat;
    for c in 0..b.len() {
        // paths of length two from c, grouped by their bottom
        let mut by_bottom: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut bottoms: Vec<usize> = Vec::new();
        for (k, &f) in b.faces(c).iter().enumerate() {
            for (k2, &g) in b.faces(f).iter().enumerate() {
                let path = cat.comp(x.transitions[f][k2], x.transitions[c][k]);
                match by_bottom.get(&g) {
                    None => {
                        by_bottom.insert(g, (f, path));
                        bottoms.push(g);
                    }
                    Some(&(first, first_path)) => {
                        if !x.structure.same(first_path, path) {
                            report.push(BundleViolation::NotFunctorial {
                                cell: b.id(c).to_string(),
                                face: b.id(g).to_string(),
                                via: b.id(first).to_string(),
                                other_via: b.id(f).to_string(),
                            });
                        }
                    }
                }
            }
        }
        for (&f, &t) in b.faces(c).iter().zip(&x.transitions[c]) {
            if b.stratum(f) == b.stratum(c) && x.structure.inverse(t).is_none() {
                report.push(BundleViolation::NotInvertible {
                    face: b.id(f).to_string(),
                    cell: b.id(c).to_string(),
                    morphism: cat.morphism_id(t).to_string(),
                    stratum: b.stratum(c),
                });
            }
        }
    }
    report
}

/// The bundle restricted to a subcomplex, over `sub.extract(base)`.
pub fn restrict(x: &StratBundle, sub: &Subcomplex) -> StratBundle {
    let base = Arc::new(sub.extract(&x.base));
    StratBundle {
        base,
        structure: x.structure.clone(),
        fibre_obj: sub.cells().iter().map(|&c| x.fibre_obj[c]).collect(),
        transitions: sub.cells().iter().map(|&c| x.transitions[c].clone()).collect(),
    }
}
