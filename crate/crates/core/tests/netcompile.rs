use graph_realize::binmat::{BinaryMatrix, RealMatrix};
use graph_realize::io::{parse_json, parse_metric_graph};
use graph_realize::linedigraph::Role;
use graph_realize::netcompile::{
    assemble_global, compile, count_outgoing, random_problem, EdgeData, Endpoint, GeneratorConfig, GraphEdge,
    MetricGraphProblem,
};
use graph_realize::realize::check_assumptions;
use graph_realize::{Error, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const G: f64 = 9.81;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn m(rows: &[&[f64]]) -> RealMatrix<f64> {
    RealMatrix::from_f64_rows(rows).unwrap()
}

/// Star with a source feeding `v1` and `n - 1` channels from `v1` to sinks.
/// Depths `h[j]`, velocities chosen so both eigenvalues are positive.
fn star(h: &[f64], explicit: bool) -> MetricGraphProblem<f64> {
    let n = h.len();
    let mut edges = Vec::new();
    for (j, &hj) in h.iter().enumerate() {
        let c = (G * hj).sqrt();
        let v = c + 1.0 + j as f64;
        let data = if explicit {
            EdgeData::Eigen { lambda_plus: v + c, lambda_minus: v - c, f: m(&[&[hj, hj], &[c, -c]]) }
        } else {
            EdgeData::Matrix(m(&[&[v, hj], &[G, v]]))
        };
        let (tail, head) = if j == 0 { (0, 1) } else { (1, j + 1) };
        edges.push(GraphEdge { tail, head, x0: Endpoint::Tail, data });
    }
    // p^j(0) = p^1(1) for j >= 2, componentwise.
    let cols = 2 * n;
    let phi1 = RealMatrix::from_fn(2 * (n - 1), cols, |r, c| {
        let (j, comp) = (r / 2 + 1, r % 2);
        if c == comp {
            -1.0
        } else if c == 2 * j + comp {
            1.0
        } else {
            0.0
        }
    });
    let mut phi = vec![Some(RealMatrix::identity(2)), Some(phi1)];
    phi.extend((2..=n).map(|_| None));
    let names = (0..=n).map(|v| format!("v{v}")).collect();
    MetricGraphProblem::new(names, edges, phi).unwrap()
}

#[test]
fn star_fixture_matches_riemann_form() {
    let p: MetricGraphProblem<f64> = parse_metric_graph(&parse_json(&fixture("saint_venant_star")).unwrap()).unwrap();
    let c = compile(&p, &1e-12).unwrap();
    assert_eq!(c.classification.roles, vec![Role::Source, Role::Transient, Role::Sink, Role::Sink]);
    assert_eq!(c.classification.k, vec![2, 4, 0, 0]);
    let wp = c.vertices[1].wellposed.as_ref().unwrap();
    let h = [2.0, 3.0, 1.5];
    let s = |j: usize| (G * h[j]).sqrt();
    let out =
        m(&[&[h[1], h[1], 0.0, 0.0], &[s(1), -s(1), 0.0, 0.0], &[0.0, 0.0, h[2], h[2]], &[0.0, 0.0, s(2), -s(2)]]);
    let inn = m(&[&[h[0], h[0]], &[s(0), -s(0)], &[h[0], h[0]], &[s(0), -s(0)]]).neg();
    assert!(wp.psi_out.sub(&out).unwrap().max_abs() <= 1e-12);
    assert!(wp.psi_in.sub(&inn).unwrap().max_abs() <= 1e-12);
    assert!(c.system.is_some());
}

#[test]
fn star_needs_two_n_minus_two_conditions() {
    for n in 2..=6 {
        let depths: Vec<f64> = (0..n).map(|j| 1.0 + 0.5 * j as f64).collect();
        for explicit in [true, false] {
            let c = compile(&star(&depths, explicit), &1e-12).unwrap();
            assert_eq!(c.classification.k[1], 2 * n - 2);
            assert!(c.system.is_some(), "n = {n}");
        }
    }
}

#[test]
fn star_from_matrices_agrees_up_to_column_scaling() {
    let depths = [2.0, 3.0, 1.5];
    let a = compile(&star(&depths, true), &1e-12).unwrap();
    let b = compile(&star(&depths, false), &1e-12).unwrap();
    let pa = &a.vertices[1].wellposed.as_ref().unwrap().psi_out;
    let pb = &b.vertices[1].wellposed.as_ref().unwrap().psi_out;
    for t in 0..pa.ncols() {
        // Unit eigenvectors: the explicit column divided by its length.
        let col = pa.column(t);
        let (j, _) = a.vertices[1].assembly.columns.iter().copied().filter(|&(j, _)| j != 0).nth(t).unwrap();
        let norm = (depths[j] * depths[j] + G * depths[j]).sqrt();
        for (x, y) in col.iter().zip(pb.column(t)) {
            assert!((x / norm - y).abs() <= 1e-12, "column {t}");
        }
    }
}

#[test]
fn single_edge_gives_two_components() {
    let p: MetricGraphProblem<Rational> = parse_metric_graph(&parse_json(&fixture("single_edge")).unwrap()).unwrap();
    let bs = assemble_global(&p, &Rational::from_integer(0.into())).unwrap();
    assert_eq!(bs.size(), 2);
    assert_eq!(bs.j_plus.one_based(), vec![1]);
    assert_eq!(bs.j_minus.one_based(), vec![2]);
}

#[test]
fn singular_conditions_are_rejected() {
    let p: MetricGraphProblem<Rational> =
        parse_metric_graph(&parse_json(&fixture("singular_conditions")).unwrap()).unwrap();
    let zero = Rational::from_integer(0.into());
    let c = compile(&p, &zero).unwrap();
    assert!(c.system.is_none());
    assert_eq!(c.ill_posed(), vec![0]);
    match assemble_global(&p, &zero) {
        Err(Error::InvalidProblem(msg)) => assert!(msg.contains("vertex 1 (det 0)"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn nearly_parallel_float_conditions_are_rejected() {
    // Two conditions at the source whose rows differ by `eps`.
    let build = |eps: f64| {
        let mut p = star(&[2.0, 3.0], true);
        p.phi[0] = Some(m(&[&[1.0, 0.0], &[1.0, eps]]));
        p
    };
    assert!(compile(&build(1e-12), &1e-15).unwrap().system.is_none());
    assert!(compile(&build(1e-3), &1e-15).unwrap().system.is_some());
}

#[test]
fn sink_with_conditions_is_invalid() {
    let edge = GraphEdge {
        tail: 0,
        head: 1,
        x0: Endpoint::Tail,
        data: EdgeData::Eigen { lambda_plus: 2.0, lambda_minus: 1.0, f: RealMatrix::identity(2) },
    };
    let p = MetricGraphProblem::new(
        vec!["a".into(), "b".into()],
        vec![edge],
        vec![Some(RealMatrix::identity(2)), Some(m(&[&[1.0, 0.0]]))],
    )
    .unwrap();
    assert!(matches!(compile(&p, &1e-12), Err(Error::InvalidProblem(_))));
}

/// Line digraph of the compiled arcs: `(k, j)` set when arc `j` enters the
/// vertex that arc `k` leaves.
fn line_adjacency_of(arcs: &[(usize, usize)]) -> BinaryMatrix {
    BinaryMatrix::from_fn(arcs.len(), arcs.len(), |k, j| arcs[j].1 == arcs[k].0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn outgoing_counts_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem::<f64, _>(&mut rng, &GeneratorConfig::default()).unwrap();
        let c = compile(&p, &1e-12).unwrap();
        let mut total = 0;
        for v in 0..p.vertex_count() {
            let counts = count_outgoing(&p, &c.classification.alpha, v).unwrap();
            prop_assert_eq!(counts.by_parameters, counts.by_partition);
            prop_assert_eq!(counts.by_partition, counts.by_flags);
            total += counts.by_flags;
        }
        prop_assert_eq!(total, 2 * p.edge_count());
    }

    #[test]
    fn solved_map_satisfies_the_conditions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem::<f64, _>(&mut rng, &GeneratorConfig::default()).unwrap();
        let c = compile(&p, &1e-12).unwrap();
        for vc in &c.vertices {
            let Some(wp) = &vc.wellposed else { continue };
            let map = wp.map.as_ref().unwrap();
            let inn = RealMatrix::from_fn(map.ncols(), 1, |_, _| rng.gen_range(-1.0..1.0));
            let out = map.mul(&inn).unwrap();
            let lhs = wp.psi_out.mul(&out).unwrap().add(&wp.psi_in.mul(&inn).unwrap()).unwrap();
            let scale = wp.psi_out.max_abs().max(wp.psi_in.max_abs()) * (1.0 + out.max_abs() + inn.max_abs());
            prop_assert!(lhs.max_abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn coupling_matrix_is_the_line_digraph_of_the_arcs(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem::<Rational, _>(&mut rng, &GeneratorConfig::default()).unwrap();
        let zero = Rational::from_integer(0.into());
        let c = compile(&p, &zero).unwrap();
        let report = check_assumptions(c.system.as_ref().unwrap(), &zero).unwrap();
        prop_assert!(report.all_passed());
        prop_assert_eq!(&report.a, &line_adjacency_of(&c.arcs));
    }
}
