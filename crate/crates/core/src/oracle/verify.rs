use std::sync::Arc;

use serde::Serialize;

use crate::cellbase::catalog::point;
use crate::funcspace::{coend, coend_iso, faithful, principal_diagram, reconstruct_check};
use crate::strabundle::{pullback, pushout_universality_check, validate_bundle, StratBundle};
use crate::triviality::{local_triviality_certificate, stratify_bundle, LocalTriviality};

use super::generate::{stream, Instance, STREAM_MUTATION};
use super::unfold::unfold;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Pass { checks: usize },
    /// The instance was rejected before any property was checked.
    InvalidInput { reason: String },
    Violation { reason: String },
}

impl Outcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass { .. })
    }
}

type Checked = std::result::Result<usize, Outcome>;

fn violation(reason: impl Into<String>) -> Outcome {
    Outcome::Violation { reason: reason.into() }
}

fn ensure(cond: bool, reason: impl FnOnce() -> String) -> std::result::Result<(), Outcome> {
    if cond {
        Ok(())
    } else {
        Err(violation(reason()))
    }
}

fn lib<T>(r: crate::Result<T>) -> std::result::Result<T, Outcome> {
    r.map_err(|e| violation(e.to_string()))
}

fn input(x: &StratBundle) -> std::result::Result<(), Outcome> {
    let report = validate_bundle(x);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Outcome::InvalidInput { reason: report.summary() })
    }
}

fn outcome(r: Checked) -> Outcome {
    match r {
        Ok(checks) => Outcome::Pass { checks },
        Err(o) => o,
    }
}

/// Pulls the instance back along a random unfolding and checks the result
/// is a bundle, that pulling back each stage agrees with attaching the
/// pulled-back pieces, and that every pulled-back attachment square is a
/// push-out.
pub fn verify_pullback(inst: &Instance) -> Outcome {
    outcome(pullback_checks(inst))
}

fn pullback_checks(inst: &Instance) -> Checked {
    input(&inst.bundle)?;
    let u = lib(unfold(inst))?;
    let (pb, cover) = lib(pullback(&inst.bundle, u.source.clone(), &u.map))?;
    let report = validate_bundle(&pb);
    ensure(report.is_valid(), || format!("pull-back is not a bundle: {}", report.summary()))?;
    lib(cover.check(&pb, &inst.bundle))?;
    let mut checks = 2;
    for (k, st) in u.stages.iter().enumerate() {
        let target = &inst.stages[k].attachment.bundle;
        let (direct, _) = lib(pullback(target, st.attachment.bundle.base_arc().clone(), &st.map))?;
        ensure(direct.equivalent(&st.attachment.bundle), || {
            format!("stage {}: pull-back differs from the attachment of pulled-back pieces", k + 1)
        })?;
        let mut square = st.attachment.square(&st.y, &st.m, &st.a, &st.h);
        square.x = direct;
        let check = lib(pushout_universality_check(&square))?;
        ensure(check.holds, || {
            let w = check.witness.as_ref().map(|w| format!("{} ({}): {}", w.target, w.kind, w.detail)).unwrap_or_default();
            format!("stage {}: square is not a push-out: {w}", k + 1)
        })?;
        checks += 2;
    }
    Ok(checks)
}

/// Certifies local triviality on every closed star and round-trips the
/// bundle through its stratification.
pub fn verify_bundle(inst: &Instance) -> Outcome {
    outcome(bundle_checks(inst))
}

fn bundle_checks(inst: &Instance) -> Checked {
    let x = &inst.bundle;
    input(x)?;
    let b = x.base();
    let mut checks = 0;
    match lib(local_triviality_certificate(x))? {
        LocalTriviality::Counterexample { cell, .. } => {
            return Err(violation(format!("the star of `{}` is not trivial", b.id(cell))));
        }
        LocalTriviality::Atlas(atlas) => {
            ensure(atlas.len() == b.len(), || format!("atlas has {} charts for {} cells", atlas.len(), b.len()))?;
            for t in &atlas {
                ensure(t.incompatible(x).is_empty(), || "a chart is incompatible with a transition".into())?;
                let (restricted, product, map) = lib(t.product_iso(x))?;
                lib(map.check(&restricted, &product))?;
                ensure(t.charts.iter().all(|&m| x.structure().inverse(m).is_some()), || "a chart is not invertible".into())?;
                checks += 1;
            }
        }
    }
    let plain = lib(b.with_strata(&vec![0; b.len()]).and_then(|pb| x.with_base(Arc::new(pb))))?;
    ensure(validate_bundle(&plain).is_valid(), || "forgetting the strata does not give a bundle".into())?;
    let s = lib(stratify_bundle(&plain, &b.strata()))?;
    ensure(s.bundle.equivalent(x), || "stratifying does not recover the bundle".into())?;
    ensure(s.pieces.len() == b.num_strata(), || "wrong number of pieces".into())?;
    ensure(lib(s.round_trips())?, || "reassembling the pieces does not recover the bundle".into())?;
    Ok(checks + 3)
}

/// Classes of `⊔_V hom(V, X_c) × ff(V)` under `(β∘g, y) ∼ (β, g·y)`, found
/// by graph search. Members are `(V, index in hom(V, X_c), y)`.
pub fn orbit_classes(x: &StratBundle, c: usize) -> Vec<Vec<(usize, usize, usize)>> {
    let s = x.structure();
    let (cat, ff) = (&s.cat, &s.ff);
    let xc = x.fibre_obj(c);
    let mut members = Vec::new();
    for v in 0..cat.num_objects() {
        for a in 0..cat.hom(v, xc).len() {
            for y in 0..ff.fibre_size(v) {
                members.push((v, a, y));
            }
        }
    }
    let index = |m: (usize, usize, usize)| members.binary_search(&m).unwrap();
    let mut adj = vec![Vec::new(); members.len()];
    for g in 0..cat.num_morphisms() {
        let (v, w) = (cat.source(g), cat.target(g));
        for (b, &beta) in cat.hom(w, xc).iter().enumerate() {
            let bg = cat.comp(beta, g);
            let a = cat.hom(v, xc).iter().position(|&m| m == bg).unwrap();
            for y in 0..ff.fibre_size(v) {
                let (p, q) = (index((v, a, y)), index((w, b, ff.action(g)[y])));
                adj[p].push(q);
                adj[q].push(p);
            }
        }
    }
    let mut seen = vec![false; members.len()];
    let mut out = Vec::new();
    for start in 0..members.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut class = vec![start];
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for &q in &adj[p] {
                if !seen[q] {
                    seen[q] = true;
                    class.push(q);
                    stack.push(q);
                }
            }
        }
        class.sort_unstable();
        out.push(class.into_iter().map(|i| members[i]).collect());
    }
    out
}

/// Checks the reconstruction of the bundle from its principal diagram
/// against the orbit search, and that the coend of a representable with
/// the fibre functor is the fibre of the representing object.
pub fn verify_principal(inst: &Instance) -> Outcome {
    outcome(principal_checks(inst))
}

fn principal_checks(inst: &Instance) -> Checked {
    input(&inst.bundle)?;
    let x = faithful(&inst.bundle);
    let s = x.structure();
    let (cat, ff) = (&s.cat, &s.ff);
    let eval = |v: usize, a: usize, y: usize, xc: usize| ff.action(cat.hom(v, xc)[a])[y];
    let rc = lib(reconstruct_check(&x))?;
    ensure(rc.holds, || rc.failure.clone().unwrap_or_default())?;
    let b = x.base();
    let mut checks = 1;
    for c in 0..b.len() {
        let xc = x.fibre_obj(c);
        let classes = orbit_classes(&x, c);
        ensure(classes.len() == x.fibre_size(c), || {
            format!("`{}` has {} classes for {} elements", b.id(c), classes.len(), x.fibre_size(c))
        })?;
        let mut hit = vec![false; x.fibre_size(c)];
        for class in &classes {
            let value = eval(class[0].0, class[0].1, class[0].2, xc);
            ensure(class.iter().all(|&(v, a, y)| eval(v, a, y, xc) == value), || {
                format!("evaluation is not constant on a class over `{}`", b.id(c))
            })?;
            ensure(!hit[value], || format!("evaluation is not injective over `{}`", b.id(c)))?;
            hit[value] = true;
        }
        ensure(rc.representatives[c].len() == classes.len(), || format!("class count differs over `{}`", b.id(c)))?;
        for (k, &(v, a, y)) in rc.representatives[c].iter().enumerate() {
            ensure(eval(v, a, y, xc) == rc.iso[c][k], || format!("the bijection over `{}` is not evaluation", b.id(c)))?;
        }
        checks += 1;
    }
    let pt = Arc::new(point());
    for w in 0..cat.num_objects() {
        let pw = lib(StratBundle::product(pt.clone(), x.structure_arc().clone(), w))?;
        let p = lib(principal_diagram(&pw))?;
        let co = lib(coend(&p, ff))?;
        ensure(co.num_classes(0) == ff.fibre_size(w) && orbit_classes(&pw, 0).len() == ff.fibre_size(w), || {
            format!("the representable at `{}` has {} classes for {} elements", cat.object_id(w), co.num_classes(0), ff.fibre_size(w))
        })?;
        ensure(coend_iso(&p, &co, &pw, |_, alpha, y| ff.action(alpha)[y]).is_ok(), || {
            format!("evaluation at `{}` is not an isomorphism", cat.object_id(w))
        })?;
        checks += 1;
    }
    Ok(checks)
}

/// An invalid variant of the instance's bundle: one transition replaced so
/// that functoriality or invertibility fails. `None` if no single
/// replacement breaks the bundle.
pub fn mutate(inst: &Instance) -> Option<StratBundle> {
    let x = &inst.bundle;
    let b = x.base();
    let cat = &x.structure().cat;
    let mut rng = stream(inst.spec.seed, STREAM_MUTATION);
    let mut candidates = Vec::new();
    for c in 0..b.len() {
        for (k, &t) in x.transitions(c).iter().enumerate() {
            for &m in cat.hom(cat.source(t), cat.target(t)) {
                if !x.same(m, t) {
                    candidates.push((c, k, m));
                }
            }
        }
    }
    rng.shuffle(&mut candidates);
    for (c, k, m) in candidates {
        let mut transitions: Vec<Vec<usize>> = (0..b.len()).map(|d| x.transitions(d).to_vec()).collect();
        transitions[c][k] = m;
        let bad = StratBundle::new(x.base_arc().clone(), x.structure_arc().clone(), x.fibre_objects().to_vec(), transitions).ok()?;
        if !validate_bundle(&bad).is_valid() {
            return Some(bad);
        }
    }
    None
}
