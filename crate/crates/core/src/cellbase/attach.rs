use super::complex::{validate_complex, BaseComplex, CellSpec, ComplexKind, ComplexViolation, Subcomplex};
use super::map::SimplicialMap;
use crate::{Error, Result};

/// The result of attaching `(M, A)` to `Y` along `h: A → Y`.
#[derive(Clone, Debug)]
pub struct BaseAttachment {
    pub complex: BaseComplex,
    /// `Y → X`, injective and stratum-preserving.
    pub inclusion: SimplicialMap,
    /// `M → X`; restricts to `inclusion ∘ h` on `A`.
    pub characteristic: SimplicialMap,
    /// Stratum index of the new cells.
    pub stratum: usize,
}

/// Glues `m` to `y` along `h`, whose source is `a.extract(m)`. Cells of
/// `M ∖ A` keep their identifiers and form a new top stratum.
///
/// In simplicial mode every new cell must still be a simplex with its own
/// vertex set. With `allow_delta` the result is a Δ-complex and such
/// identifications are allowed; lowering the dimension of a face is refused
/// in both modes because the attachment would not be cellular.
pub fn attach_base(
    y: &BaseComplex,
    m: &BaseComplex,
    a: &Subcomplex,
    h: &SimplicialMap,
    allow_delta: bool,
) -> Result<BaseAttachment> {
    if h.len() != a.len() {
        return Err(Error::NotSimplicial(format!(
            "attaching map is defined on {} cells, the subcomplex has {}",
            h.len(),
            a.len()
        )));
    }
    let stratum = y.max_stratum().map_or(0, |s| s + 1);
    let mut specs = y.to_specs();
    for c in 0..m.len() {
        if a.contains(c) {
            continue;
        }
        if y.index_of(m.id(c)).is_ok() {
            return Err(Error::DuplicateId {
                kind: "cell",
                id: m.id(c).to_string(),
            });
        }
        let mut faces = Vec::new();
        for &f in m.faces(c) {
            match a.position(f) {
                Some(k) => {
                    let image = h.image(k);
                    if y.dim(image) != m.dim(f) {
                        return Err(Error::DegenerateAttachment {
                            cell: m.id(c).to_string(),
                            detail: format!("face `{}` goes to `{}` of lower dimension", m.id(f), y.id(image)),
                        });
                    }
                    faces.push(y.id(image).to_string());
                }
                None => faces.push(m.id(f).to_string()),
            }
        }
        specs.push(CellSpec {
            id: m.id(c).to_string(),
            dim: m.dim(c),
            faces,
            stratum,
        });
    }
    let kind = if allow_delta { ComplexKind::Delta } else { y.kind() };
    let complex = BaseComplex::from_cells(kind, specs)?;
    let report = validate_complex(&complex);
    for v in &report.violations {
        match v {
            ComplexViolation::NotASimplex { cell, .. } | ComplexViolation::RepeatedFace { cell, .. } => {
                return Err(Error::DegenerateAttachment {
                    cell: cell.clone(),
                    detail: "its vertices are identified; retry in delta mode".into(),
                });
            }
            ComplexViolation::DuplicateSimplex { cell, other } => {
                return Err(Error::CellCollision {
                    cell: cell.clone(),
                    other: other.clone(),
                });
            }
            _ => {}
        }
    }
    report.into_result()?;
    let inclusion = SimplicialMap::from_cell_map_unchecked(
        (0..y.len()).map(|c| complex.index_of(y.id(c))).collect::<Result<_>>()?,
    );
    let characteristic = SimplicialMap::from_cell_map_unchecked(
        (0..m.len())
            .map(|c| match a.position(c) {
                Some(k) => Ok(inclusion.image(h.image(k))),
                None => complex.index_of(m.id(c)),
            })
            .collect::<Result<_>>()?,
    );
    Ok(BaseAttachment {
        complex,
        inclusion,
        characteristic,
        stratum,
    })
}
