use super::*;

fn two_disjoint_pairs() -> Pregeometry {
    Pregeometry::from_edges(
        vec![1, 2],
        vec![2, 2],
        vec![Labels::Ordinal, Labels::Ordinal],
        [(Elem::new(0, 0), Elem::new(1, 0)), (Elem::new(0, 1), Elem::new(1, 1))],
    )
    .unwrap()
}

#[test]
fn disjoint_pairs_are_disconnected() {
    let g = two_disjoint_pairs();
    assert_eq!(g.components().len(), 2);
    assert!(!g.is_connected());
    assert!(rank2_params(&g).is_err());
}

#[test]
fn rank1_chambers() {
    let g = Pregeometry::rank1(1, Labels::Ordinal, 5).unwrap();
    assert_eq!(g.chamber_count(100).unwrap(), 5);
    assert!(g.is_geometry_exhaustive(100).unwrap().holds());
    assert!(Pregeometry::rank1(1, Labels::Ordinal, 0).is_err());
}

#[test]
fn same_type_incidence_rejected() {
    let r = Pregeometry::from_edges(
        vec![1, 2],
        vec![2, 2],
        vec![Labels::Ordinal, Labels::Ordinal],
        [(Elem::new(0, 0), Elem::new(0, 1))],
    );
    assert!(r.is_err());
}

#[test]
fn budget_is_enforced() {
    let g = Pregeometry::rank1(1, Labels::Ordinal, 50).unwrap();
    assert!(g.chamber_count(10).unwrap_err().is_resource());
}
