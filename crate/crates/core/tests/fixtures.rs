//! Exact comparisons against the transcribed generator lists in `fixtures/`.

use std::collections::BTreeSet;
use std::path::PathBuf;

use qnp::graph::compositions;
use qnp::io::parse_ideal;
use qnp::{
    base_set, edge_ideal, generalized_graph_ideal, is_generalized_bipolymatroidal, log_set,
    power_via_compositions, BlockShape, Monomial, MonomialIdeal, MonomialPrime, StrongQuasiGraph,
};

fn fixture(name: &str) -> MonomialIdeal {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "tests",
        "fixtures",
        &format!("{name}.ideal"),
    ]
    .iter()
    .collect();
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_ideal(&text).unwrap()
}

fn raw_generator_count(name: &str) -> usize {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "tests",
        "fixtures",
        &format!("{name}.ideal"),
    ]
    .iter()
    .collect();
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| l.starts_with("x["))
        .count()
}

fn graph(sizes: &[usize]) -> StrongQuasiGraph {
    StrongQuasiGraph::complete(sizes).unwrap()
}

#[test]
fn i2_and_edge_ideal_of_k22_differ() {
    let g = graph(&[2, 2]);
    let i2 = generalized_graph_ideal(&g, 2, 2).unwrap();
    let edges = edge_ideal(&g);
    assert_eq!(i2, fixture("i2_k22"));
    assert_eq!(edges, fixture("edge_ideal_k22"));
    assert_eq!(i2.len(), 4);
    assert_eq!(edges.len(), 8);
    assert!(!i2.equals(&edges).unwrap());
}

#[test]
fn i9_of_k222() {
    let g = graph(&[2, 2, 2]);
    let i9 = generalized_graph_ideal(&g, 9, 2).unwrap();
    assert_eq!(raw_generator_count("i9_k222"), 50);
    assert_eq!(i9.len(), 50);
    assert_eq!(i9, fixture("i9_k222"));
    assert!(i9.is_equigenerated());

    let listed: Vec<String> = compositions(g.shape(), 9, 2)
        .iter()
        .map(|c| c.to_string())
        .collect();
    assert_eq!(
        listed,
        [
            "(1,4,4)", "(2,3,4)", "(2,4,3)", "(3,2,4)", "(3,3,3)", "(3,4,2)", "(4,1,4)", "(4,2,3)",
            "(4,3,2)", "(4,4,1)"
        ]
    );
}

#[test]
fn i11_of_k222_and_its_square() {
    let g = graph(&[2, 2, 2]);
    let i11 = generalized_graph_ideal(&g, 11, 2).unwrap();
    assert_eq!(i11, fixture("i11_k222"));
    assert!(is_generalized_bipolymatroidal(&i11).unwrap().passed());
    assert_eq!(base_set(&i11).unwrap().rank(), 11);

    let expected = fixture("i11_k222_squared");
    assert_eq!(raw_generator_count("i11_k222_squared"), 21);
    assert_eq!(expected.len(), 21);
    assert_eq!(i11.power(2).unwrap(), expected);
    assert_eq!(power_via_compositions(&g, 11, 2, 2).unwrap(), expected);
    assert!(is_generalized_bipolymatroidal(&expected).unwrap().passed());
}

#[test]
fn colon_of_i11_by_x11() {
    let g = graph(&[2, 2, 2]);
    let i11 = generalized_graph_ideal(&g, 11, 2).unwrap();
    let u = Monomial::parse(g.shape(), "x[1,1]").unwrap();
    let colon = i11.colon(&u).unwrap();
    assert_eq!(colon, fixture("i11_k222_colon_x11"));
    assert!(is_generalized_bipolymatroidal(&colon).unwrap().passed());
}

#[test]
fn i11_of_k33_and_its_localization() {
    let g = graph(&[3, 3]);
    let i11 = generalized_graph_ideal(&g, 11, 2).unwrap();
    assert_eq!(i11, fixture("i11_k33"));
    let p = MonomialPrime::parse(g.shape(), "x[1,1],x[1,2],x[2,1],x[2,2]").unwrap();
    let local = i11.localize(&p).unwrap();
    assert_eq!(local, fixture("i11_k33_localized"));
    assert!(is_generalized_bipolymatroidal(&local).unwrap().passed());
    for k in 1..=3 {
        let powered = i11.power(k).unwrap().localize(&p).unwrap();
        assert!(is_generalized_bipolymatroidal(&powered).unwrap().passed());
    }
}

#[test]
fn log_set_of_three_monomials() {
    let shape = BlockShape::new(&[2, 2, 2]).unwrap();
    let f: Vec<Monomial> = [
        "x[1,1]*x[2,1]^2*x[3,1]^2",
        "x[1,1]^3*x[1,2]*x[3,2]^2",
        "x[1,1]*x[3,1]*x[3,2]",
    ]
    .iter()
    .map(|s| Monomial::parse(&shape, s).unwrap())
    .collect();
    let expected: BTreeSet<Vec<u32>> = [
        vec![1, 0, 2, 0, 2, 0],
        vec![3, 1, 0, 0, 0, 2],
        vec![1, 0, 0, 0, 1, 1],
    ]
    .into_iter()
    .collect();
    assert_eq!(log_set(&f).unwrap(), expected);
}

#[test]
fn fixture_files_round_trip() {
    for name in [
        "edge_ideal_k22",
        "i2_k22",
        "i9_k222",
        "i11_k222",
        "i11_k222_squared",
        "i11_k222_colon_x11",
        "i11_k33",
        "i11_k33_localized",
    ] {
        let ideal = fixture(name);
        let text = qnp::io::format_ideal(&ideal);
        assert_eq!(parse_ideal(&text).unwrap(), ideal, "{name}");
        let json = qnp::io::ideal_to_json(&ideal, Vec::new());
        assert_eq!(qnp::io::ideal_from_json(&json).unwrap(), ideal, "{name}");
    }
}
