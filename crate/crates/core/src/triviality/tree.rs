use crate::cellbase::{poset_spanning_tree, BaseComplex, Incidence, Subcomplex};
use crate::strabundle::StratBundle;
use crate::{Error, Result};

/// A rooted spanning tree of a connected subcomplex's incidence graph.
pub(crate) struct RootedTree {
    pub root: usize,
    pub edges: Vec<Incidence>,
    parent: Vec<Option<usize>>,
}

impl RootedTree {
    pub fn new(b: &BaseComplex, sub: &Subcomplex) -> Result<Self> {
        let root = *sub
            .cells()
            .first()
            .ok_or_else(|| Error::Precondition("region is empty".into()))?;
        let edges = poset_spanning_tree(b, sub)?;
        let mut parent = vec![None; b.len()];
        let mut reached = vec![false; b.len()];
        reached[root] = true;
        for e in &edges {
            let (old, new) = if reached[e.face] { (e.face, e.cell) } else { (e.cell, e.face) };
            parent[new] = Some(old);
            reached[new] = true;
        }
        Ok(RootedTree { root, edges, parent })
    }

    pub fn is_tree_edge(&self, inc: Incidence) -> bool {
        self.parent[inc.face] == Some(inc.cell) || self.parent[inc.cell] == Some(inc.face)
    }

    /// `c, parent(c), ..., root`.
    pub fn path_to_root(&self, c: usize) -> Vec<usize> {
        let mut path = vec![c];
        let mut at = c;
        while let Some(p) = self.parent[at] {
            path.push(p);
            at = p;
        }
        path
    }

    /// The closed walk `root → … → face → cell → … → root`.
    pub fn fundamental_walk(&self, inc: Incidence) -> Vec<usize> {
        let mut walk = self.path_to_root(inc.face);
        walk.reverse();
        walk.extend(self.path_to_root(inc.cell));
        walk
    }

    /// The fundamental cycle of a non-tree incidence, started at the
    /// branch point of the two tree paths: `lca → … → face → cell → … → lca`.
    pub fn fundamental_cycle(&self, inc: Incidence) -> Vec<usize> {
        let mut down = self.path_to_root(inc.face);
        let mut up = self.path_to_root(inc.cell);
        while down.len() > 1 && up.len() > 1 && down[down.len() - 2] == up[up.len() - 2] {
            down.pop();
            up.pop();
        }
        down.reverse();
        down.extend(up);
        down
    }
}

/// Transport of fibre elements along a walk of incident cells. Going down
/// applies the transition; going up takes the unique preimage.
pub fn transport(x: &StratBundle, walk: &[usize]) -> Result<Vec<usize>> {
    let first = *walk.first().ok_or_else(|| Error::Precondition("empty walk".into()))?;
    let b = x.base();
    let mut perm: Vec<usize> = (0..x.fibre_size(first)).collect();
    for step in walk.windows(2) {
        let (a, c) = (step[0], step[1]);
        if let Some(t) = x.transition(c, a) {
            for y in &mut perm {
                *y = x.act(t, *y);
            }
        } else if let Some(t) = x.transition(a, c) {
            let act = x.structure().ff.action(t);
            let mut inverse = vec![usize::MAX; act.len()];
            for (i, &j) in act.iter().enumerate() {
                inverse[j] = i;
            }
            if act.len() != x.fibre_size(a) || inverse.contains(&usize::MAX) {
                return Err(Error::NotInvertible {
                    morphism: x.structure().cat.morphism_id(t).to_string(),
                    context: format!("`{}` ≤ `{}` has no inverse to lift along", b.id(a), b.id(c)),
                });
            }
            for y in &mut perm {
                *y = inverse[*y];
            }
        } else {
            return Err(Error::Precondition(format!(
                "`{}` and `{}` are not incident",
                b.id(a),
                b.id(c)
            )));
        }
    }
    Ok(perm)
}

/// The monodromy permutation of a closed walk, as a map on the fibre over
/// its first cell.
pub fn loop_monodromy(x: &StratBundle, walk: &[usize]) -> Result<Vec<usize>> {
    if walk.first() != walk.last() {
        return Err(Error::Precondition("walk is not closed".into()));
    }
    transport(x, walk)
}

/// Disjoint cycle notation on named elements, fixed points omitted;
/// `()` for the identity.
pub fn cycle_notation(perm: &[usize], names: &[String]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            cycle.push(names[at].as_str());
            at = perm[at];
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}
