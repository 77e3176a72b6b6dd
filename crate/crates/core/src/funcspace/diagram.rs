use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::cellbase::BaseComplex;
use crate::fincat::{hom_fibre_functor, FiniteCategory, StructureCategory};
use crate::strabundle::{validate_bundle, StratBundle};
use crate::{Error, Result, ValidationReport};

/// The bundle of admissible maps out of `tag`: over a cell `c` the fibre is
/// `hom(tag, X_c)`, and transitions act by post-composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionBundle {
    pub bundle: StratBundle,
    pub tag: usize,
}

/// Builds `X^V`. A non-faithful fibre functor is first replaced by its
/// faithful image, so hom-sets are taken there.
pub fn function_bundle(x: &StratBundle, v: usize) -> Result<FunctionBundle> {
    let cat = &x.structure().cat;
    if v >= cat.num_objects() {
        return Err(Error::unknown("object", v.to_string()));
    }
    let x = faithful(x);
    let cat = x.structure().cat.clone();
    let ff = hom_fibre_functor(&cat, v);
    let structure = Arc::new(StructureCategory::new_unchecked(cat, ff));
    let bundle = StratBundle::new(
        x.base_arc().clone(),
        structure,
        x.fibre_objects().to_vec(),
        (0..x.base().len()).map(|c| x.transitions(c).to_vec()).collect(),
    )?;
    Ok(FunctionBundle { bundle, tag: v })
}

pub(crate) fn faithful(x: &StratBundle) -> StratBundle {
    if x.structure().is_faithful() {
        x.clone()
    } else {
        x.in_faithful_image().0
    }
}

/// A contravariant diagram `V ↦ X^V` of function bundles over one base,
/// with explicit action tables: `actions[g][c]` maps the fibre of
/// `component(target g)` over `c` to that of `component(source g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramBundle {
    components: Vec<FunctionBundle>,
    actions: Vec<Vec<Vec<usize>>>,
}

impl DiagramBundle {
    /// Assembles a diagram from the underlying family and action tables
    /// and checks it with [`validate_diagram`].
    pub fn new(underlying: &StratBundle, actions: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let cat = &underlying.structure().cat;
        let components = (0..cat.num_objects())
            .map(|v| function_bundle(underlying, v))
            .collect::<Result<Vec<_>>>()?;
        let p = DiagramBundle { components, actions };
        validate_diagram(&p).into_result()?;
        Ok(p)
    }

    /// Assembles a diagram from explicit components, which must carry the
    /// hom functors of one category, and checks it.
    pub fn from_components(components: Vec<StratBundle>, actions: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Malformed("a diagram needs at least one component".into()))?;
        let cat = first.structure().cat.clone();
        if components.len() != cat.num_objects() {
            return Err(Error::Malformed(format!(
                "diagram has {} components for {} objects",
                components.len(),
                cat.num_objects()
            )));
        }
        let mut out = Vec::with_capacity(components.len());
        for (v, bundle) in components.into_iter().enumerate() {
            if bundle.structure().cat != cat || bundle.structure().ff != hom_fibre_functor(&cat, v) {
                return Err(Error::invalid(
                    "diagram",
                    format!("component `{}` is not a function bundle of the category", cat.object_id(v)),
                ));
            }
            out.push(FunctionBundle { bundle, tag: v });
        }
        let p = DiagramBundle {
            components: out,
            actions,
        };
        validate_diagram(&p).into_result()?;
        Ok(p)
    }

    pub fn base(&self) -> &BaseComplex {
        self.components[0].bundle.base()
    }

    pub fn cat(&self) -> &FiniteCategory {
        &self.components[0].bundle.structure().cat
    }

    pub fn components(&self) -> &[FunctionBundle] {
        &self.components
    }

    pub fn component(&self, v: usize) -> &StratBundle {
        &self.components[v].bundle
    }

    /// The action of `g: V → V'` over `c`, from `X^{V'}_c` to `X^V_c`.
    pub fn action(&self, g: usize, c: usize) -> &[usize] {
        &self.actions[g][c]
    }

    pub fn actions(&self) -> &[Vec<Vec<usize>>] {
        &self.actions
    }

    /// The underlying family, with the given fibre functor.
    pub fn underlying(&self, structure: Arc<StructureCategory>) -> Result<StratBundle> {
        let x = self.component(0);
        StratBundle::new(
            x.base_arc().clone(),
            structure,
            x.fibre_objects().to_vec(),
            (0..x.base().len()).map(|c| x.transitions(c).to_vec()).collect(),
        )
    }

    /// The morphism `V → X_c` named by an element of `X^V_c`.
    pub fn element_morphism(&self, v: usize, c: usize, x: usize) -> usize {
        let comp = self.component(v);
        self.cat().hom(v, comp.fibre_obj(c))[x]
    }
}

/// The principal diagram: every function bundle `X^V`, acted on by
/// pre-composition.
pub fn principal_diagram(x: &StratBundle) -> Result<DiagramBundle> {
    let x = faithful(x);
    let cat = &x.structure().cat;
    let b = x.base();
    let actions = (0..cat.num_morphisms())
        .map(|g| {
            let (v, w) = (cat.source(g), cat.target(g));
            (0..b.len())
                .map(|c| {
                    let xc = x.fibre_obj(c);
                    let target = cat.hom(v, xc);
                    cat.hom(w, xc)
                        .iter()
                        .map(|&beta| {
                            let composite = cat.comp(beta, g);
                            target.iter().position(|&m| m == composite).expect("composite in hom-set")
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    DiagramBundle::new(&x, actions)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum DiagramViolation {
    Component { object: String, detail: String },
    ActionShape { morphism: String, cell: String },
    Identity { object: String, cell: String },
    NotContravariant { g: String, f: String, cell: String },
    NotNatural { morphism: String, face: String, cell: String },
}

impl fmt::Display for DiagramViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DiagramViolation::*;
        match self {
            Component { object, detail } => write!(f, "component `{object}`: {detail}"),
            ActionShape { morphism, cell } => {
                write!(f, "action of `{morphism}` over `{cell}` is not a function between the right fibres")
            }
            Identity { object, cell } => write!(f, "identity of `{object}` acts non-trivially over `{cell}`"),
            NotContravariant { g, f: h, cell } => {
                write!(f, "action of `{g}∘{h}` over `{cell}` is not the action of `{h}` after `{g}`")
            }
            NotNatural { morphism, face, cell } => {
                write!(f, "action of `{morphism}` does not commute with the transition `{face}` ≤ `{cell}`")
            }
        }
    }
}

/// Checks the components, identities, contravariance
/// `P(g∘f) = P(f)∘P(g)`, and naturality of every action.
pub fn validate_diagram(p: &DiagramBundle) -> ValidationReport<DiagramViolation> {
    let mut report = ValidationReport::new("diagram");
    let cat = p.cat();
    let b = p.base();
    for (v, comp) in p.components.iter().enumerate() {
        let first = p.component(0);
        if comp.tag != v
            || comp.bundle.base() != b
            || comp.bundle.fibre_objects() != first.fibre_objects()
            || (0..b.len()).any(|c| comp.bundle.transitions(c) != first.transitions(c))
        {
            report.push(DiagramViolation::Component {
                object: cat.object_id(v).to_string(),
                detail: "components are not function bundles of one family".into(),
            });
        }
        let inner = validate_bundle(&comp.bundle);
        if !inner.is_valid() {
            report.push(DiagramViolation::Component {
                object: cat.object_id(v).to_string(),
                detail: inner.summary(),
            });
        }
    }
    if !report.is_valid() {
        return report;
    }
    if p.actions.len() != cat.num_morphisms() {
        report.push(DiagramViolation::ActionShape {
            morphism: "*".into(),
            cell: "*".into(),
        });
        return report;
    }
    let size = |v: usize, c: usize| p.component(v).fibre_size(c);
    for g in 0..cat.num_morphisms() {
        let (v, w) = (cat.source(g), cat.target(g));
        for c in 0..b.len() {
            let ok = p.actions[g].len() == b.len()
                && p.actions[g][c].len() == size(w, c)
                && p.actions[g][c].iter().all(|&e| e < size(v, c));
            if !ok {
                report.push(DiagramViolation::ActionShape {
                    morphism: cat.morphism_id(g).to_string(),
                    cell: b.id(c).to_string(),
                });
            }
        }
    }
    if !report.is_valid() {
        return report;
    }
    for o in 0..cat.num_objects() {
        let id = cat.identity(o);
        for c in 0..b.len() {
            if p.actions[id][c].iter().enumerate().any(|(i, &j)| i != j) {
                report.push(DiagramViolation::Identity {
                    object: cat.object_id(o).to_string(),
                    cell: b.id(c).to_string(),
                });
            }
        }
    }
    for f in 0..cat.num_morphisms() {
        for g in (0..cat.num_morphisms()).filter(|&g| cat.source(g) == cat.target(f)) {
            let gf = cat.comp(g, f);
            for c in 0..b.len() {
                let direct = &p.actions[gf][c];
                let stepwise: Vec<usize> = p.actions[g][c].iter().map(|&e| p.actions[f][c][e]).collect();
                if *direct != stepwise {
                    report.push(DiagramViolation::NotContravariant {
                        g: cat.morphism_id(g).to_string(),
                        f: cat.morphism_id(f).to_string(),
                        cell: b.id(c).to_string(),
                    });
                }
            }
        }
    }
    for g in 0..cat.num_morphisms() {
        let (v, w) = (cat.source(g), cat.target(g));
        let (pv, pw) = (p.component(v), p.component(w));
        for c in 0..b.len() {
            for (k, &face) in b.faces(c).iter().enumerate() {
                let (tv, tw) = (pv.transitions(c)[k], pw.transitions(c)[k]);
                let natural = (0..size(w, c)).all(|e| {
                    pv.act(tv, p.actions[g][c][e]) == p.actions[g][face][pw.act(tw, e)]
                });
                if !natural {
                    report.push(DiagramViolation::NotNatural {
                        morphism: cat.morphism_id(g).to_string(),
                        face: b.id(face).to_string(),
                        cell: b.id(c).to_string(),
                    });
                }
            }
        }
    }
    report
}
