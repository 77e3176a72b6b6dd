use crate::cellbase::{closed_star, components, Incidence, Subcomplex};
use crate::strabundle::{realize_total, StratBundle, TotalComplex};
use crate::{Error, Result};

use super::tree::{cycle_notation, loop_monodromy, RootedTree};

/// Monodromy around the fundamental cycle of a non-tree incidence, acting
/// on the fibre over the component's root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monodromy {
    pub root: usize,
    pub edge: Incidence,
    pub walk: Vec<usize>,
    pub permutation: Vec<usize>,
    pub cycles: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseComponent {
    pub root: usize,
    pub cells: Vec<usize>,
    pub sheets: usize,
    /// Components of the total complex lying over this one.
    pub lifts: usize,
}

/// The even-covering condition: the closed star of every lift maps
/// bijectively onto the closed star of the cell below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenCovering {
    pub stars_checked: usize,
    pub failure: Option<String>,
}

impl EvenCovering {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringSpace {
    pub total: TotalComplex,
    pub counts_by_dim: Vec<usize>,
    pub num_components: usize,
    pub base_components: Vec<BaseComponent>,
    pub monodromy: Vec<Monodromy>,
    pub even_covering: EvenCovering,
}

fn check_bijective(x: &StratBundle) -> Result<()> {
    let b = x.base();
    for c in 0..b.len() {
        for (&f, &t) in b.faces(c).iter().zip(x.transitions(c)) {
            let act = x.structure().ff.action(t);
            let mut hit = vec![false; x.fibre_size(f)];
            for &j in act {
                hit[j] = true;
            }
            if act.len() != hit.len() || hit.contains(&false) {
                return Err(Error::NotInvertible {
                    morphism: x.structure().cat.morphism_id(t).to_string(),
                    context: format!("transition of `{}` ≤ `{}` is not a bijection", b.id(f), b.id(c)),
                });
            }
        }
    }
    Ok(())
}

fn even_covering(x: &StratBundle, total: &TotalComplex) -> EvenCovering {
    let b = x.base();
    let mut up = vec![Vec::new(); total.len()];
    let mut down = vec![Vec::new(); total.len()];
    for &(lo, hi) in &total.relations {
        up[lo].push(hi);
        down[hi].push(lo);
    }
    let mut stars_checked = 0;
    for c in 0..b.len() {
        let base_star = closed_star(b, c);
        for e in total.fibre(c) {
            stars_checked += 1;
            let mut seen = vec![false; total.len()];
            let mut stack = vec![e];
            let mut above = Vec::new();
            seen[e] = true;
            while let Some(a) = stack.pop() {
                above.push(a);
                for &u in &up[a] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            stack = above.clone();
            let mut star = above;
            while let Some(a) = stack.pop() {
                for &d in &down[a] {
                    if !seen[d] {
                        seen[d] = true;
                        star.push(d);
                        stack.push(d);
                    }
                }
            }
            let mut projected: Vec<usize> = star.iter().map(|&s| total.projection(s)).collect();
            projected.sort_unstable();
            if projected != base_star.cells() {
                let (cell, v) = total.elements[e];
                return EvenCovering {
                    stars_checked,
                    failure: Some(format!(
                        "the star of element {v} over `{}` does not map bijectively onto the star of `{}`",
                        b.id(cell),
                        b.id(cell)
                    )),
                };
            }
        }
    }
    EvenCovering {
        stars_checked,
        failure: None,
    }
}

/// Realizes a bundle with bijective transitions as a covering of its base:
/// the total complex, its components, the sheet count over each base
/// component, monodromy around each fundamental cycle, and the
/// even-covering condition checked on every closed star.
pub fn covering_space(x: &StratBundle) -> Result<CoveringSpace> {
    check_bijective(x)?;
    let b = x.base();
    let total = realize_total(x);
    let labels = total.component_labels();
    let mut base_components = Vec::new();
    let mut monodromy = Vec::new();
    for cells in components(b, &Subcomplex::full(b)) {
        let sub = Subcomplex::new(b, cells.iter().copied())?;
        let tree = RootedTree::new(b, &sub)?;
        let mut lifts: Vec<usize> = cells.iter().flat_map(|&c| total.fibre(c)).map(|e| labels[e]).collect();
        lifts.sort_unstable();
        lifts.dedup();
        let names = x.structure().ff.fibre(x.fibre_obj(tree.root));
        for &c in &cells {
            for &f in b.faces(c) {
                let edge = Incidence { face: f, cell: c };
                if tree.is_tree_edge(edge) {
                    continue;
                }
                let walk = tree.fundamental_walk(edge);
                let permutation = loop_monodromy(x, &walk)?;
                let cycles = cycle_notation(&permutation, names);
                monodromy.push(Monodromy {
                    root: tree.root,
                    edge,
                    walk,
                    permutation,
                    cycles,
                });
            }
        }
        base_components.push(BaseComponent {
            root: tree.root,
            sheets: x.fibre_size(tree.root),
            lifts: lifts.len(),
            cells,
        });
    }
    let even_covering = even_covering(x, &total);
    Ok(CoveringSpace {
        counts_by_dim: total.count_by_dim(x),
        num_components: total.num_components(),
        total,
        base_components,
        monodromy,
        even_covering,
    })
}
