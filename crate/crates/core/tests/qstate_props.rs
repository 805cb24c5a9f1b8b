mod common;

use proptest::prelude::*;
use qcopy_core::qstate::{fidelity, StateVector, Subsystem, SubsystemLayout, UnitaryOp};
use qcopy_core::{DMatrix, C64};

fn layout(dims: &[usize]) -> SubsystemLayout {
    let entries = dims
        .iter()
        .enumerate()
        .map(|(i, &d)| Subsystem::qudit(format!("s{i}"), d).unwrap())
        .collect();
    SubsystemLayout::new(entries).unwrap()
}

fn state_strategy() -> impl Strategy<Value = (Vec<usize>, Vec<(f64, f64)>)> {
    prop::collection::vec(2usize..=3, 1..=4).prop_flat_map(|dims| {
        let n: usize = dims.iter().product();
        (Just(dims), prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n))
    })
    .prop_filter("nonzero", |(_, a)| a.iter().any(|(r, i)| r.abs() + i.abs() > 1e-3))
}

fn build(dims: &[usize], raw: &[(f64, f64)]) -> StateVector {
    let amps = raw.iter().map(|&(r, i)| C64::new(r, i)).collect();
    StateVector::from_amplitudes(layout(dims), amps).unwrap()
}

#[test]
fn oracle_self_check() {
    let h = vec![
        vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0)],
        vec![C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
    ];
    let ev = common::hermitian_eigenvalues(&h);
    assert!((ev[0] - 3.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
}

#[test]
fn bell_reduction_entropy_is_one_bit() {
    let s = StateVector::from_amplitudes(
        SubsystemLayout::qubits(&["A", "B"]).unwrap(),
        common::ghz(2, 1.0, 1.0),
    )
    .unwrap();
    let rho = s.partial_trace(&["A"]).unwrap();
    let oracle = common::partial_trace(s.amplitudes(), &[2, 2], &[0]);
    assert!((rho.get(0, 0).re - 0.5).abs() < 1e-15 && (oracle[0][0].re - 0.5).abs() < 1e-15);
    assert!((common::entropy_bits(&common::hermitian_eigenvalues(&oracle)) - 1.0).abs() < 1e-12);
    assert!((qcopy_core::infometrics::von_neumann_entropy(&rho) - 1.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn partial_trace_matches_oracle((dims, raw) in state_strategy(), mask in 1u32..16) {
        let s = build(&dims, &raw);
        let keep: Vec<usize> = (0..dims.len()).filter(|p| mask & (1 << p) != 0).collect();
        prop_assume!(!keep.is_empty());
        let labels: Vec<String> = keep.iter().map(|p| format!("s{p}")).collect();
        let rho = s.partial_trace(&labels).unwrap();
        let oracle = common::partial_trace(s.amplitudes(), &dims, &keep);
        for (i, row) in oracle.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                prop_assert!((rho.get(i, j) - v).norm_sqr().sqrt() < 1e-12);
            }
        }
        prop_assert!(rho.hermiticity_deviation() < 1e-10);
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
        prop_assert!(rho.eigenvalues().iter().all(|&l| l >= -1e-10));
    }

    #[test]
    fn schmidt_spectra_agree((dims, raw) in state_strategy(), mask in 1u32..16) {
        prop_assume!(dims.len() >= 2);
        let s = build(&dims, &raw);
        let keep: Vec<String> = (0..dims.len()).filter(|p| mask & (1 << p) != 0).map(|p| format!("s{p}")).collect();
        let rest: Vec<String> = (0..dims.len()).filter(|p| mask & (1 << p) == 0).map(|p| format!("s{p}")).collect();
        prop_assume!(!keep.is_empty() && !rest.is_empty());
        let a = s.partial_trace(&keep).unwrap().eigenvalues();
        let b = s.partial_trace(&rest).unwrap().eigenvalues();
        let rank = a.len().max(b.len());
        for k in 0..rank {
            let x = a.get(k).copied().unwrap_or(0.0);
            let y = b.get(k).copied().unwrap_or(0.0);
            prop_assert!((x - y).abs() < 1e-8, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn keep_all_is_projector((dims, raw) in state_strategy()) {
        let s = build(&dims, &raw);
        let all: Vec<String> = (0..dims.len()).map(|p| format!("s{p}")).collect();
        let rho = s.partial_trace(&all).unwrap();
        prop_assert!(rho.max_abs_diff(&s.to_density()).unwrap() < 1e-12);
    }

    #[test]
    fn unitaries_preserve_norm_and_invert(
        (dims, raw) in state_strategy(),
        entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4..16),
        first in 0usize..4,
        second in 0usize..4,
    ) {
        let s = build(&dims, &raw);
        let mut targets = vec![first % dims.len()];
        if second % dims.len() != targets[0] {
            targets.push(second % dims.len());
        }
        let side: usize = targets.iter().map(|&t| dims[t]).product();
        let u = common::unitary_from(&entries, side);
        let matrix = DMatrix::from_fn(side, side, |i, j| u[i][j]);
        let op = UnitaryOp::new(targets.iter().map(|t| format!("s{t}")), matrix).unwrap();
        let out = s.apply(&op).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
        let back = out.apply(&op.inverse()).unwrap();
        for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
            prop_assert!((a - b).norm_sqr().sqrt() < 1e-10);
        }
        prop_assert!((fidelity(&back, &s).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fidelity_is_symmetric((dims, raw) in state_strategy(), shift in 1usize..7) {
        let a = build(&dims, &raw);
        let mut rotated = raw.clone();
        rotated.rotate_left(shift % raw.len());
        prop_assume!(rotated.iter().any(|(r, i)| r.abs() + i.abs() > 1e-3));
        let b = build(&dims, &rotated);
        let ab = fidelity(&a, &b).unwrap();
        prop_assert!((ab - fidelity(&b, &a).unwrap()).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
    }
}
