//! Named example bundles.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cellbase::{catalog as bases, BaseComplex};
use crate::fincat::{catalog as cats, StructureCategory};

use super::bundle::StratBundle;

fn twisted(base: BaseComplex, structure: StructureCategory, obj: &str, twists: &[(&str, &str, &str)]) -> StratBundle {
    let base = Arc::new(base);
    let structure = Arc::new(structure);
    let o = structure.cat.object_index(obj).expect("catalog object");
    let id = structure.cat.identity(o);
    let mut transitions: HashMap<(usize, usize), usize> =
        base.incidences().into_iter().map(|inc| ((inc.face, inc.cell), id)).collect();
    for (face, cell, mor) in twists {
        let key = (base.index_of(face).unwrap(), base.index_of(cell).unwrap());
        transitions.insert(key, structure.cat.morphism_index(mor).unwrap());
    }
    StratBundle::from_incidences(base.clone(), structure, vec![o; base.len()], &transitions).expect("catalog bundle")
}

/// The connected double cover of the triangulated circle: fibre `{1, 2}`
/// under all permutations, with the swap on `v0 ≤ e0`.
pub fn double_cover_c3() -> StratBundle {
    twisted(bases::cycle(3), cats::permutation_category(&[2]), "2", &[("v0", "e0", "p2_21")])
}

/// The same cover with structure group Z/2 acting by swap.
pub fn double_cover_c3_z2() -> StratBundle {
    twisted(bases::cycle(3), cats::z2(true), "*", &[("v0", "e0", "g")])
}

/// The connected triple cover of the circle with monodromy a 3-cycle.
pub fn triple_cover_c3() -> StratBundle {
    twisted(bases::cycle(3), cats::permutation_category(&[3]), "3", &[("v0", "e0", "p3_231")])
}

/// Two disjoint copies of the circle.
pub fn trivial_2sheet() -> StratBundle {
    twisted(bases::cycle(3), cats::permutation_category(&[2]), "2", &[])
}

/// A free Z/2-set over the circle in the orbit category, twisted once.
pub fn orbit_free_cover() -> StratBundle {
    twisted(bases::cycle(3), cats::z2_orbit_category(), "G/e", &[("v0", "e0", "r_g")])
}

/// The cone on a 4-cycle over finite sets `{1, 2}`: fibre `1` on the
/// boundary circle, fibre `2` inside, collapse maps across the strata.
pub fn collapse_disk() -> StratBundle {
    let base = Arc::new(bases::cone_disk(4));
    let structure = Arc::new(cats::finite_sets(&[1, 2]));
    let cat = &structure.cat;
    let (one, two) = (cat.object_index("1").unwrap(), cat.object_index("2").unwrap());
    let collapse = cat.morphism_index("f2_11to1").unwrap();
    let fibre_obj: Vec<usize> = (0..base.len()).map(|c| if base.stratum(c) == 0 { one } else { two }).collect();
    let transitions = base
        .incidences()
        .into_iter()
        .map(|inc| {
            let t = match (fibre_obj[inc.cell] == two, fibre_obj[inc.face] == two) {
                (true, false) => collapse,
                _ => cat.identity(fibre_obj[inc.cell]),
            };
            ((inc.face, inc.cell), t)
        })
        .collect();
    StratBundle::from_incidences(base, structure.clone(), fibre_obj, &transitions).expect("catalog bundle")
}

/// The triangle disk over all permutations of `{1, 2}`: trivial on the
/// boundary circle, with the 2-cell glued on by the swap along every edge.
pub fn swapped_disk() -> StratBundle {
    twisted(
        bases::triangle_disk(),
        cats::permutation_category(&[2]),
        "2",
        &[("e0", "f", "p2_21"), ("e1", "f", "p2_21"), ("e2", "f", "p2_21")],
    )
}

/// The product bundle with fibre `{1, 2}` over the two-stratum cone disk.
pub fn product_disk() -> StratBundle {
    twisted(bases::cone_disk(4), cats::permutation_category(&[2]), "2", &[])
}
