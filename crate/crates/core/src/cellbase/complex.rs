use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, ValidationReport};

/// Simplicial complexes identify a cell with its vertex set; Δ-complexes
/// allow several cells on the same vertices and cells with repeated faces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexKind {
    #[default]
    Simplicial,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    /// Codimension-one faces as cell indices.
    pub faces: Vec<usize>,
    pub stratum: usize,
}

/// A cell with faces named by identifier, as read from a document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSpec {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub faces: Vec<String>,
    #[serde(default)]
    pub stratum: usize,
}

impl CellSpec {
    pub fn new(id: impl Into<String>, dim: usize, faces: &[&str], stratum: usize) -> Self {
        CellSpec {
            id: id.into(),
            dim,
            faces: faces.iter().map(|f| f.to_string()).collect(),
            stratum,
        }
    }
}

/// One codimension-one face relation `face ≤ cell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Incidence {
    pub face: usize,
    pub cell: usize,
}

/// A finite stratified cell complex. Cells are kept sorted by identifier,
/// which is the canonical order used everywhere downstream.
///
/// Construction only resolves identifiers; the structural invariants are
/// checked by [`validate_complex`].
#[derive(Clone, Debug)]
pub struct BaseComplex {
    kind: ComplexKind,
    cells: Vec<Cell>,
    index: HashMap<String, usize>,
    cofaces: Vec<Vec<usize>>,
    closure: Vec<Vec<usize>>,
    by_vertices: HashMap<Vec<usize>, usize>,
}

impl PartialEq for BaseComplex {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.cells == other.cells
    }
}

impl Eq for BaseComplex {}

impl BaseComplex {
    pub fn from_cells(kind: ComplexKind, mut specs: Vec<CellSpec>) -> Result<Self> {
        specs.sort_by(|a, b| a.id.cmp(&b.id));
        let mut index = HashMap::with_capacity(specs.len());
        for (i, s) in specs.iter().enumerate() {
            if index.insert(s.id.clone(), i).is_some() {
                return Err(Error::DuplicateId {
                    kind: "cell",
                    id: s.id.clone(),
                });
            }
        }
        let mut cells = Vec::with_capacity(specs.len());
        for s in specs {
            let mut faces = Vec::with_capacity(s.faces.len());
            for f in &s.faces {
                faces.push(*index.get(f).ok_or_else(|| Error::unknown("cell", f.clone()))?);
            }
            if kind == ComplexKind::Simplicial {
                faces.sort_unstable();
            }
            cells.push(Cell {
                id: s.id,
                dim: s.dim,
                faces,
                stratum: s.stratum,
            });
        }
        Ok(Self::assemble(kind, cells, index))
    }

    fn assemble(kind: ComplexKind, cells: Vec<Cell>, index: HashMap<String, usize>) -> Self {
        let n = cells.len();
        let mut cofaces = vec![Vec::new(); n];
        for (c, cell) in cells.iter().enumerate() {
            for &f in &cell.faces {
                if !cofaces[f].contains(&c) {
                    cofaces[f].push(c);
                }
            }
        }
        for cf in &mut cofaces {
            cf.sort_unstable();
        }
        let mut closure = Vec::with_capacity(n);
        let mut seen = vec![usize::MAX; n];
        for c in 0..n {
            let mut stack = vec![c];
            let mut out = Vec::new();
            seen[c] = c;
            while let Some(x) = stack.pop() {
                out.push(x);
                for &f in &cells[x].faces {
                    if seen[f] != c {
                        seen[f] = c;
                        stack.push(f);
                    }
                }
            }
            out.sort_unstable();
            closure.push(out);
        }
        let mut by_vertices = HashMap::new();
        for (c, cl) in closure.iter().enumerate() {
            let verts: Vec<usize> = cl.iter().copied().filter(|&x| cells[x].dim == 0).collect();
            by_vertices.entry(verts).or_insert(c);
        }
        BaseComplex {
            kind,
            cells,
            index,
            cofaces,
            closure,
            by_vertices,
        }
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &Cell {
        &self.cells[c]
    }

    pub fn id(&self, c: usize) -> &str {
        &self.cells[c].id
    }

    pub fn dim(&self, c: usize) -> usize {
        self.cells[c].dim
    }

    pub fn faces(&self, c: usize) -> &[usize] {
        &self.cells[c].faces
    }

    pub fn cofaces(&self, c: usize) -> &[usize] {
        &self.cofaces[c]
    }

    pub fn stratum(&self, c: usize) -> usize {
        self.cells[c].stratum
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::unknown("cell", id))
    }

    /// All cells `c' ≤ c`, including `c`, in canonical order.
    pub fn closure(&self, c: usize) -> &[usize] {
        &self.closure[c]
    }

    /// Face-poset order.
    pub fn le(&self, lower: usize, upper: usize) -> bool {
        self.closure[upper].binary_search(&lower).is_ok()
    }

    pub fn vertices(&self, c: usize) -> Vec<usize> {
        self.closure[c].iter().copied().filter(|&x| self.cells[x].dim == 0).collect()
    }

    /// The cell spanned by a sorted vertex set, if any. Among Δ-cells sharing
    /// a vertex set the first in canonical order is returned.
    pub fn cell_with_vertices(&self, vertices: &[usize]) -> Option<usize> {
        self.by_vertices.get(vertices).copied()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn max_stratum(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.stratum).max()
    }

    /// Number of stratum indices in use, counting gaps.
    pub fn num_strata(&self) -> usize {
        self.max_stratum().map_or(0, |s| s + 1)
    }

    pub fn cells_in_stratum(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.stratum(c) == i).collect()
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut out = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for c in &self.cells {
            out[c.dim] += 1;
        }
        out
    }

    /// Codimension-one incidences, ordered by cell then face.
    pub fn incidences(&self) -> Vec<Incidence> {
        let mut out = Vec::new();
        for (c, cell) in self.cells.iter().enumerate() {
            let mut faces = cell.faces.clone();
            faces.sort_unstable();
            faces.dedup();
            out.extend(faces.into_iter().map(|face| Incidence { face, cell: c }));
        }
        out
    }

    pub fn to_specs(&self) -> Vec<CellSpec> {
        self.cells
            .iter()
            .map(|c| CellSpec {
                id: c.id.clone(),
                dim: c.dim,
                faces: c.faces.iter().map(|&f| self.cells[f].id.clone()).collect(),
                stratum: c.stratum,
            })
            .collect()
    }

    /// Same cells with a different stratification.
    pub fn with_strata(&self, strata: &[usize]) -> Result<Self> {
        if strata.len() != self.len() {
            return Err(Error::Malformed(format!(
                "stratification has {} entries for {} cells",
                strata.len(),
                self.len()
            )));
        }
        let mut out = self.clone();
        for (c, &s) in out.cells.iter_mut().zip(strata) {
            c.stratum = s;
        }
        Ok(out)
    }

    pub fn strata(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.stratum).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ComplexViolation {
    FaceDimension { cell: String, face: String, cell_dim: usize, face_dim: usize },
    MissingFaces { cell: String },
    FaceCount { cell: String, expected: usize, found: usize },
    RepeatedFace { cell: String, face: String },
    NotASimplex { cell: String, vertices: usize },
    DuplicateSimplex { cell: String, other: String },
    ClosureCondition { face: String, cell: String, face_stratum: usize, cell_stratum: usize },
    EmptyBottomStratum,
}

impl fmt::Display for ComplexViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ComplexViolation::*;
        match self {
            FaceDimension { cell, face, cell_dim, face_dim } => {
                write!(f, "face `{face}` (dim {face_dim}) of `{cell}` (dim {cell_dim}) is not of codimension one")
            }
            MissingFaces { cell } => write!(f, "cell `{cell}` has positive dimension but no faces"),
            FaceCount { cell, expected, found } => {
                write!(f, "cell `{cell}` has {found} faces, expected {expected}")
            }
            RepeatedFace { cell, face } => write!(f, "cell `{cell}` lists face `{face}` twice"),
            NotASimplex { cell, vertices } => {
                write!(f, "cell `{cell}` spans {vertices} vertices, which does not match its dimension")
            }
            DuplicateSimplex { cell, other } => write!(f, "cells `{cell}` and `{other}` have the same vertices"),
            ClosureCondition { face, cell, face_stratum, cell_stratum } => write!(
                f,
                "closure condition fails: face `{face}` is in stratum {face_stratum} but `{cell}` is in stratum {cell_stratum}"
            ),
            EmptyBottomStratum => write!(f, "stratum 0 is empty"),
        }
    }
}

/// Checks the complex and its stratification. Codimension-one faces force
/// the face order to be antisymmetric, so no separate cycle check is needed.
pub fn validate_complex(b: &BaseComplex) -> ValidationReport<ComplexViolation> {
    let mut report = ValidationReport::new("complex");
    for (c, cell) in b.cells.iter().enumerate() {
        let mut dims_ok = true;
        for &f in &cell.faces {
            if b.dim(f) + 1 != cell.dim {
                dims_ok = false;
                report.push(ComplexViolation::FaceDimension {
                    cell: cell.id.clone(),
                    face: b.id(f).to_string(),
                    cell_dim: cell.dim,
                    face_dim: b.dim(f),
                });
            }
            if b.stratum(f) > cell.stratum {
                report.push(ComplexViolation::ClosureCondition {
                    face: b.id(f).to_string(),
                    cell: cell.id.clone(),
                    face_stratum: b.stratum(f),
                    cell_stratum: cell.stratum,
                });
            }
        }
        if cell.dim == 0 {
            if !cell.faces.is_empty() {
                report.push(ComplexViolation::FaceCount {
                    cell: cell.id.clone(),
                    expected: 0,
                    found: cell.faces.len(),
                });
            }
            continue;
        }
        if cell.faces.is_empty() {
            report.push(ComplexViolation::MissingFaces { cell: cell.id.clone() });
            continue;
        }
        if cell.faces.len() != cell.dim + 1 {
            report.push(ComplexViolation::FaceCount {
                cell: cell.id.clone(),
                expected: cell.dim + 1,
                found: cell.faces.len(),
            });
        }
        if b.kind == ComplexKind::Simplicial {
            for w in cell.faces.windows(2) {
                if w[0] == w[1] {
                    report.push(ComplexViolation::RepeatedFace {
                        cell: cell.id.clone(),
                        face: b.id(w[0]).to_string(),
                    });
                }
            }
            let verts = b.vertices(c);
            if dims_ok && verts.len() != cell.dim + 1 {
                report.push(ComplexViolation::NotASimplex {
                    cell: cell.id.clone(),
                    vertices: verts.len(),
                });
            }
        }
    }
    if b.kind == ComplexKind::Simplicial {
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for c in 0..b.len() {
            if let Some(&other) = seen.get(&b.vertices(c)) {
                report.push(ComplexViolation::DuplicateSimplex {
                    cell: b.id(c).to_string(),
                    other: b.id(other).to_string(),
                });
            } else {
                seen.insert(b.vertices(c), c);
            }
        }
    }
    if !b.cells.iter().any(|c| c.stratum == 0) {
        report.push(ComplexViolation::EmptyBottomStratum);
    }
    report
}

/// A set of cells closed under taking faces, stored in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subcomplex {
    cells: Vec<usize>,
}

impl Subcomplex {
    pub fn new(b: &BaseComplex, cells: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut cells: Vec<usize> = cells.into_iter().collect();
        cells.sort_unstable();
        cells.dedup();
        for &c in &cells {
            for &f in b.faces(c) {
                if cells.binary_search(&f).is_err() {
                    return Err(Error::NotSubcomplex {
                        cell: b.id(c).to_string(),
                        face: b.id(f).to_string(),
                    });
                }
            }
        }
        Ok(Subcomplex { cells })
    }

    pub fn from_ids<S: AsRef<str>>(b: &BaseComplex, ids: &[S]) -> Result<Self> {
        let cells = ids.iter().map(|s| b.index_of(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(b, cells)
    }

    /// The smallest subcomplex containing `cells`.
    pub fn closure_of(b: &BaseComplex, cells: impl IntoIterator<Item = usize>) -> Self {
        let mut out: Vec<usize> = cells.into_iter().flat_map(|c| b.closure(c).iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        Subcomplex { cells: out }
    }

    pub fn full(b: &BaseComplex) -> Self {
        Subcomplex {
            cells: (0..b.len()).collect(),
        }
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.cells.binary_search(&c).is_ok()
    }

    /// Position of `c` in [`Subcomplex::extract`].
    pub fn position(&self, c: usize) -> Option<usize> {
        self.cells.binary_search(&c).ok()
    }

    /// The subcomplex as a complex of its own. Identifiers are kept, so the
    /// k-th cell of the result is `self.cells()[k]`.
    pub fn extract(&self, b: &BaseComplex) -> BaseComplex {
        let index = self
            .cells
            .iter()
            .enumerate()
            .map(|(k, &c)| (b.id(c).to_string(), k))
            .collect();
        let cells = self
            .cells
            .iter()
            .map(|&c| {
                let cell = b.cell(c);
                Cell {
                    id: cell.id.clone(),
                    dim: cell.dim,
                    faces: cell.faces.iter().map(|&f| self.position(f).expect("closed under faces")).collect(),
                    stratum: cell.stratum,
                }
            })
            .collect();
        BaseComplex::assemble(b.kind, cells, index)
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        let mut cells = self.cells.clone();
        cells.extend_from_slice(&other.cells);
        cells.sort_unstable();
        cells.dedup();
        Subcomplex { cells }
    }

    pub fn ids<'a>(&self, b: &'a BaseComplex) -> Vec<&'a str> {
        self.cells.iter().map(|&c| b.id(c)).collect()
    }
}

/// The smallest subcomplex containing every cell that has `c` as a face.
pub fn closed_star(b: &BaseComplex, c: usize) -> Subcomplex {
    let mut up = vec![c];
    let mut seen = vec![false; b.len()];
    seen[c] = true;
    let mut i = 0;
    while i < up.len() {
        for &x in b.cofaces(up[i]) {
            if !seen[x] {
                seen[x] = true;
                up.push(x);
            }
        }
        i += 1;
    }
    Subcomplex::closure_of(b, up)
}

/// A spanning tree of the incidence graph of `sub`, found by breadth-first
/// search from its first cell. Edges are listed in discovery order, so each
/// edge has one endpoint already reached by an earlier edge.
pub fn poset_spanning_tree(b: &BaseComplex, sub: &Subcomplex) -> Result<Vec<Incidence>> {
    let Some(&root) = sub.cells().first() else {
        return Ok(Vec::new());
    };
    let mut reached = vec![false; b.len()];
    reached[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut edges = Vec::new();
    while let Some(x) = queue.pop_front() {
        let mut next: Vec<(usize, Incidence)> = b
            .faces(x)
            .iter()
            .map(|&f| (f, Incidence { face: f, cell: x }))
            .chain(b.cofaces(x).iter().map(|&c| (c, Incidence { face: x, cell: c })))
            .filter(|(y, _)| sub.contains(*y))
            .collect();
        next.sort_unstable();
        for (y, inc) in next {
            if !reached[y] {
                reached[y] = true;
                edges.push(inc);
                queue.push_back(y);
            }
        }
    }
    if let Some(&missing) = sub.cells().iter().find(|&&c| !reached[c]) {
        return Err(Error::Disconnected {
            root: b.id(root).to_string(),
            unreached: b.id(missing).to_string(),
        });
    }
    Ok(edges)
}

/// Connected components of the incidence graph of `sub`, each in canonical order.
pub fn components(b: &BaseComplex, sub: &Subcomplex) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; b.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for &start in sub.cells() {
        if comp[start] != usize::MAX {
            continue;
        }
        let k = out.len();
        comp[start] = k;
        let mut members = vec![start];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &y in b.faces(x).iter().chain(b.cofaces(x)) {
                if sub.contains(y) && comp[y] == usize::MAX {
                    comp[y] = k;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}
