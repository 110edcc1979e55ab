use thetaur::bounds::expectation_bound;
use thetaur::graph::anticommutativity_graph;
use thetaur::sdp::SdpOptions;
use thetaur::theta::lovasz_theta_with;
use thetaur::{Graph, ObservableSet32, ObservableSet64};

fn f32_options() -> SdpOptions {
    SdpOptions {
        gap_tol: 1e-4,
        feas_tol: 1e-4,
        ..Default::default()
    }
}

#[test]
fn pentagon_theta_in_f32_matches_f64() {
    let labels = ["XII", "IXI", "ZIX", "ZZI", "IZZ"];
    let s32 = ObservableSet32::from_pauli_strs(&labels).unwrap();
    let s64 = ObservableSet64::from_pauli_strs(&labels).unwrap();
    let g = anticommutativity_graph(&s32).unwrap();
    let t32 = lovasz_theta_with(&g, s32.weights(), &f32_options())
        .unwrap()
        .value;
    let t64 = expectation_bound(&s64).unwrap().value;
    assert!((f64::from(t32) - t64).abs() < 1e-3, "{t32} vs {t64}");
}

#[test]
fn complete_and_empty_graphs_in_f32() {
    let ones = vec![1f32; 4];
    let k = lovasz_theta_with(&Graph::complete(4), &ones, &f32_options())
        .unwrap()
        .value;
    let e = lovasz_theta_with(&Graph::empty(4), &ones, &f32_options())
        .unwrap()
        .value;
    assert!((k - 1.0).abs() < 1e-3);
    assert!((e - 4.0).abs() < 1e-3);
}
