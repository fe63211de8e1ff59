use graph_realize::binmat::{BinaryMatrix, CountMatrix, IndexSet, RealMatrix};
use graph_realize::linedigraph::Role;
use graph_realize::realize::{
    analyze_structure, build_incidence, check_conditions, edge_indices, realize, sink_groupings, BoundarySystem,
    EdgeKind, FailureTag, RealizeOptions, RealizeOutcome, SinkPolicy,
};
use num_rational::BigRational;

type Q = BigRational;

fn q(x: i64) -> Q {
    Q::from_integer(x.into())
}

fn matrix(rows: &[&[i64]]) -> RealMatrix<Q> {
    RealMatrix::from_i64_rows(rows).unwrap()
}

fn three_vertex_system(j_minus: &[usize]) -> BoundarySystem<Q> {
    let xi_out = matrix(&[
        &[0, 1, 1, 0, 0, 0],
        &[1, 0, 0, 0, 0, 0],
        &[1, 1, 0, 0, 0, 0],
        &[0, 0, 1, 1, 0, 0],
        &[0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 1],
    ]);
    let xi_in = matrix(&[
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0],
        &[-1, -1, 0, 0, 0, -1],
        &[0, 0, -1, -1, -1, 0],
    ]);
    let minus = IndexSet::from_one_based(j_minus, 6).unwrap();
    let plus = IndexSet::range(6).difference(&minus);
    let speeds = [3, 2, 5, 4, 1, 1].iter().map(|&c| q(c)).collect();
    BoundarySystem::new(3, xi_out, xi_in, plus, minus, speeds).unwrap()
}

fn set(one_based: &[usize]) -> IndexSet {
    IndexSet::from_one_based(one_based, 6).unwrap()
}

#[test]
fn negative_case_intermediate_matrices() {
    let bs = three_vertex_system(&[5, 6]);
    let st = analyze_structure(&bs, &q(0)).unwrap().unwrap();
    let a = BinaryMatrix::from_01(&[
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0],
        &[1, 1, 0, 0, 0, 1],
        &[0, 0, 1, 1, 1, 0],
    ])
    .unwrap();
    assert_eq!(st.assumptions.a, a);
    let cs = st.assumptions.classes.as_ref().unwrap();
    assert_eq!(cs.v_out, vec![set(&[5]), set(&[6]), set(&[1, 2, 3, 4])]);
    assert_eq!(cs.v_in, vec![set(&[1, 2, 6]), set(&[3, 4, 5])]);
    assert_eq!(st.partition.v_s, set(&[1, 2, 3, 4]));
    assert_eq!(st.partition.parts, vec![set(&[5]), set(&[6])]);
    assert_eq!(
        st.sources.xi_s,
        BinaryMatrix::from_01(&[&[1, 1, 0, 0], &[1, 1, 1, 0], &[0, 1, 1, 1], &[0, 0, 1, 1]]).unwrap()
    );
    assert_eq!(st.sources.k(), 1);

    let mut groupings = sink_groupings(&st.sink_arcs, SinkPolicy::Pairs);
    let sp = groupings.next().unwrap();
    assert!(groupings.next().is_none());
    let layout = build_incidence(&st.partition, &st.sources, &sp).unwrap();
    assert_eq!(
        layout.incidence.plus,
        BinaryMatrix::from_01(&[&[1, 1, 0, 0, 0, 1], &[0, 0, 1, 1, 1, 0], &[0, 0, 0, 0, 0, 0]]).unwrap()
    );
    assert_eq!(
        layout.incidence.minus,
        BinaryMatrix::from_01(&[&[0, 0, 0, 0, 1, 0], &[0, 0, 0, 0, 0, 1], &[1, 1, 1, 1, 0, 0]]).unwrap()
    );
    assert_eq!(layout.adjacency, CountMatrix::from_u32_rows(&[&[0, 1, 2], &[1, 0, 2], &[0, 0, 0]]).unwrap());

    let map = edge_indices(&layout.adjacency, &layout.incidence).unwrap();
    let flat: Vec<(usize, usize, IndexSet, IndexSet)> =
        map.iter().map(|e| (e.i, e.j, e.ij.clone(), e.ji.clone())).collect();
    assert_eq!(
        flat,
        vec![
            (0, 1, set(&[6]), set(&[5])),
            (0, 2, set(&[1, 2]), IndexSet::empty()),
            (1, 2, set(&[3, 4]), IndexSet::empty()),
        ]
    );
    let failures = check_conditions(&bs, &layout.adjacency, &map, &q(0));
    assert_eq!(failures.len(), 1);
    assert!(failures[0].describe().contains("(1,1) pair (6,5) both in J-"), "{}", failures[0]);
}

#[test]
fn negative_case_is_not_realizable() {
    let bs = three_vertex_system(&[5, 6]);
    match realize(&bs, &RealizeOptions::default()).unwrap() {
        RealizeOutcome::NotRealizable(d) => {
            assert_eq!(d.tags, vec![FailureTag::Edgeid]);
            assert_eq!(d.attempts.len(), 1);
            assert!(d.describe().iter().any(|l| l.contains("(1,1) pair (6,5) both in J-")));
        }
        other => panic!("expected a negative verdict, got {other:?}"),
    }
}

#[test]
fn positive_case_network() {
    let bs = three_vertex_system(&[6]);
    let RealizeOutcome::Realizable(r) = realize(&bs, &RealizeOptions::default()).unwrap() else {
        panic!("expected a realization");
    };
    assert_eq!(r.successes, 1);
    let net = &r.network;
    let roles: Vec<Role> = net.vertices.iter().map(|v| v.role).collect();
    assert_eq!(roles, vec![Role::Transient, Role::Transient, Role::Source]);
    let edges: Vec<((usize, usize), EdgeKind, usize)> =
        net.edges.iter().map(|e| (e.components, e.kind, e.x0)).collect();
    assert_eq!(
        edges,
        vec![
            ((0, 1), EdgeKind::Concurrent, 2),
            ((2, 3), EdgeKind::Concurrent, 2),
            ((4, 5), EdgeKind::Countercurrent, 0),
        ]
    );
    let v1 = &net.systems[0];
    assert_eq!((v1.rows.clone(), v1.out_cols.clone(), v1.in_cols.clone()), (set(&[5]), set(&[5]), set(&[1, 2, 6])));
    assert_eq!(v1.xi_out, matrix(&[&[1]]));
    assert_eq!(v1.xi_in, matrix(&[&[-1, -1, -1]]));
    let v2 = &net.systems[1];
    assert_eq!((v2.rows.clone(), v2.out_cols.clone(), v2.in_cols.clone()), (set(&[6]), set(&[6]), set(&[3, 4, 5])));
    let v3 = &net.systems[2];
    assert_eq!(v3.rows, set(&[1, 2, 3, 4]));
    assert_eq!(v3.in_cols, IndexSet::empty());
}
