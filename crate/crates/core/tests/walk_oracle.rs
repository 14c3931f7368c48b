//! Walk engine against hand-built models.

mod common;

use common::{two_vertex_graph, DenseTwoVertex};
use multiport::amplitude::{ExactComplex, Matrix};
use multiport::device::{grover_coin, MultiportSpec};
use multiport::walk::{build_network, run_walk, run_walk_from_lead, EdgeSpec, GraphSpec, Schedule, VertexKind, VertexOverride, VertexPort};
use num_complex::Complex64;

/// [`two_vertex_graph`] with the vertex indices swapped; leads keep their
/// physical positions, so lead order is permuted.
fn swapped_graph() -> (GraphSpec, [usize; 4]) {
    let mut g = GraphSpec::new();
    g.add_vertex(VertexKind::Physical { spec: MultiportSpec::new(3) });
    g.add_vertex(VertexKind::Physical { spec: MultiportSpec::new(3) });
    g.add_edge(EdgeSpec::new(VertexPort::new(1, 1), VertexPort::new(0, 2)));
    for (v, p) in [(0, 0), (0, 1), (1, 0), (1, 2)] {
        g.add_lead(VertexPort::new(v, p));
    }
    // original lead i sits at swapped lead map[i]
    (g, [2, 3, 0, 1])
}

#[test]
fn dense_oracle_matches_for_long_runs() {
    let dense = DenseTwoVertex::new();
    let engine = build_network::<Complex64>(&two_vertex_graph()).unwrap();
    for lead in 0..4 {
        let oracle = dense.run(lead, 120);
        let run = run_walk_from_lead(&engine, lead, 120, None).unwrap();
        for ((exits, _, _), step) in oracle.iter().zip(&run.steps) {
            for (a, b) in exits.iter().zip(&step.lead_amplitudes) {
                assert!((a - b).norm() < 1e-12);
            }
        }
        assert!(run.max_conservation_defect() < 1e-12);
    }
}

#[test]
fn relabeling_vertices_permutes_leads() {
    let a = build_network::<ExactComplex>(&two_vertex_graph()).unwrap();
    let (g, map) = swapped_graph();
    let b = build_network::<ExactComplex>(&g).unwrap();
    for lead in 0..4 {
        let ra = run_walk_from_lead(&a, lead, 16, None).unwrap();
        let rb = run_walk_from_lead(&b, map[lead], 16, None).unwrap();
        for (sa, sb) in ra.steps.iter().zip(&rb.steps) {
            for (i, amp) in sa.lead_amplitudes.iter().enumerate() {
                assert_eq!(*amp, sb.lead_amplitudes[map[i]], "lead {lead}, step {}", sa.step);
            }
        }
    }
}

#[test]
fn exact_walk_conserves_probability_exactly() {
    let engine = build_network::<ExactComplex>(&two_vertex_graph()).unwrap();
    let run = run_walk_from_lead(&engine, 1, 30, None).unwrap();
    for s in &run.steps {
        assert_eq!(s.internal.clone() + s.total_exited(), multiport::amplitude::Amplitude::one());
    }
}

#[test]
fn superposed_input_is_linear() {
    let engine = build_network::<Complex64>(&two_vertex_graph()).unwrap();
    let (a, b) = (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
    let both = run_walk(&engine, &[(0, a), (3, b)], 25, None).unwrap();
    let r0 = run_walk_from_lead(&engine, 0, 25, None).unwrap();
    let r3 = run_walk_from_lead(&engine, 3, 25, None).unwrap();
    for ((s, s0), s3) in both.steps.iter().zip(&r0.steps).zip(&r3.steps) {
        for i in 0..4 {
            let expected = a * s0.lead_amplitudes[i] + b * s3.lead_amplitudes[i];
            assert!((s.lead_amplitudes[i] - expected).norm() < 1e-14);
        }
    }
    assert!((both.initial_norm - 1.0).abs() < 1e-15);
}

#[test]
fn scheduled_identity_coin_reflects_back() {
    // ideal triangle; at step 2 vertex 1 passes the photon straight back
    let mut g = GraphSpec::new();
    for _ in 0..3 {
        g.add_vertex(VertexKind::Ideal { coin: grover_coin(3).unwrap() });
    }
    for k in 0..3 {
        g.add_edge(EdgeSpec::new(VertexPort::new(k, 1), VertexPort::new((k + 1) % 3, 2)));
    }
    for k in 0..3 {
        g.add_lead(VertexPort::new(k, 0));
    }
    let engine = build_network::<Complex64>(&g).unwrap();
    let free = run_walk_from_lead(&engine, 0, 6, None).unwrap();
    let mut schedule = Schedule::new();
    schedule.set(2, 1, VertexOverride::Coin(Matrix::identity(3)));
    let held = run_walk_from_lead(&engine, 0, 6, Some(&schedule)).unwrap();
    assert_eq!(free.steps[0].lead_amplitudes, held.steps[0].lead_amplitudes);
    let differs = free.steps[1..].iter().zip(&held.steps[1..]).any(|(f, h)| {
        f.lead_amplitudes.iter().zip(&h.lead_amplitudes).any(|(x, y)| (x - y).norm() > 1e-9)
    });
    assert!(differs);
    assert!(held.max_conservation_defect() < 1e-12);
}
