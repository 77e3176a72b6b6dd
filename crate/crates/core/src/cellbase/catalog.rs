//! Small named complexes.

use super::complex::{BaseComplex, CellSpec, ComplexKind};

fn build(specs: Vec<CellSpec>) -> BaseComplex {
    BaseComplex::from_cells(ComplexKind::Simplicial, specs).expect("catalog complex")
}

fn cycle_specs(n: usize) -> Vec<CellSpec> {
    assert!(n >= 3, "a simplicial circle needs at least three vertices");
    let mut specs: Vec<CellSpec> = (0..n).map(|i| CellSpec::new(format!("v{i}"), 0, &[], 0)).collect();
    for i in 0..n {
        let (a, b) = (format!("v{i}"), format!("v{}", (i + 1) % n));
        specs.push(CellSpec::new(format!("e{i}"), 1, &[&a, &b], 0));
    }
    specs
}

/// A single vertex `v0`.
pub fn point() -> BaseComplex {
    build(vec![CellSpec::new("v0", 0, &[], 0)])
}

/// The circle with vertices `v0..v{n-1}` and edges `e{i} = {v{i}, v{i+1}}`.
pub fn cycle(n: usize) -> BaseComplex {
    build(cycle_specs(n))
}

/// An interval `v0 - e0 - v1`.
pub fn interval() -> BaseComplex {
    build(vec![
        CellSpec::new("v0", 0, &[], 0),
        CellSpec::new("v1", 0, &[], 0),
        CellSpec::new("e0", 1, &["v0", "v1"], 0),
    ])
}

/// The boundary of a triangle with the 2-cell `f` attached: the circle
/// `cycle(3)` is stratum 0 and `f` is stratum 1.
pub fn triangle_disk() -> BaseComplex {
    let mut specs = cycle_specs(3);
    specs.push(CellSpec::new("f", 2, &["e0", "e1", "e2"], 1));
    build(specs)
}

/// The cone on `cycle(n)`: the circle is stratum 0, the apex `c`, spokes
/// `s{i}` and triangles `t{i}` form stratum 1.
pub fn cone_disk(n: usize) -> BaseComplex {
    let mut specs = cycle_specs(n);
    specs.push(CellSpec::new("c", 0, &[], 1));
    for i in 0..n {
        specs.push(CellSpec::new(format!("s{i}"), 1, &[&format!("v{i}"), "c"], 1));
    }
    for i in 0..n {
        let (e, s, s2) = (format!("e{i}"), format!("s{i}"), format!("s{}", (i + 1) % n));
        specs.push(CellSpec::new(format!("t{i}"), 2, &[&e, &s, &s2], 1));
    }
    build(specs)
}
