mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use proptest::prelude::*;
use qcopy_core::copier::{apply_copy, build_copier, erase_copies, multi_copy, ChainMode, CopierSpec, CopyLog};
use qcopy_core::measurement::{measure, Basis};
use qcopy_core::qstate::{fidelity, unitarity_deviation, StateVector, Subsystem, SubsystemLayout};
use qcopy_core::{rng, C64};

fn qudits(d: usize) -> SubsystemLayout {
    SubsystemLayout::new(vec![Subsystem::qudit("A", d).unwrap(), Subsystem::qudit("B", d).unwrap()]).unwrap()
}

fn chain_labels(n: usize) -> Vec<String> {
    std::iter::once("A".to_string()).chain((1..=n).map(|i| format!("B{i}"))).collect()
}

fn source_superposition(n: usize, alpha: C64, beta: C64) -> StateVector {
    let labels = chain_labels(n);
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let layout = SubsystemLayout::qubits(&refs).unwrap();
    let mut factors = vec![vec![alpha, beta]];
    factors.extend((0..n).map(|_| vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]));
    StateVector::product(layout, factors).unwrap()
}

#[test]
fn copier_is_unitary_permutation_for_small_d() {
    for d in 2..=4 {
        for pm in 0..d {
            let u = build_copier(&CopierSpec::new("A", "B").with_pm_index(pm), &qudits(d)).unwrap();
            let m = u.matrix();
            assert!(unitarity_deviation(m) < 1e-10);
            // brute force: every row and column holds exactly one unit entry
            for i in 0..d * d {
                let row_ones = (0..d * d).filter(|&j| m[(i, j)] == C64::new(1.0, 0.0)).count();
                let col_ones = (0..d * d).filter(|&j| m[(j, i)] == C64::new(1.0, 0.0)).count();
                let zeros = (0..d * d).filter(|&j| m[(i, j)] == C64::new(0.0, 0.0)).count();
                assert_eq!((row_ones, col_ones, zeros), (1, 1, d * d - 1));
            }
        }
    }
}

#[test]
fn qutrit_rule_by_enumeration() {
    let layout = qudits(3);
    let u = build_copier(&CopierSpec::new("A", "B"), &layout).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let out = StateVector::basis_state(layout.clone(), &[i, j]).apply(&u).unwrap();
            assert_eq!(out, StateVector::basis_state(layout.clone(), &[i, (i + j) % 3]));
        }
    }
}

fn no_cloning_fidelity(theta: f64) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    let psi = vec![C64::new(c, 0.0), C64::new(s, 0.0)];
    let layout = SubsystemLayout::qubits(&["A", "B"]).unwrap();
    let input = StateVector::product(layout.clone(), vec![psi.clone(), vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]]).unwrap();
    let (copied, _) = apply_copy(&input, &CopierSpec::new("A", "B"), CopyLog::new()).unwrap();
    let clone = StateVector::product(layout, vec![psi.clone(), psi]).unwrap();
    fidelity(&copied, &clone).unwrap()
}

#[test]
fn no_cloning_witness() {
    assert!((no_cloning_fidelity(FRAC_PI_4) - 0.5).abs() < 1e-10);
    assert!((no_cloning_fidelity(0.0) - 1.0).abs() < 1e-10);
    assert!((no_cloning_fidelity(FRAC_PI_2) - 1.0).abs() < 1e-10);
    for k in 1..32 {
        let theta = FRAC_PI_2 * k as f64 / 32.0;
        // hand oracle: <copy|clone> = cos^3 + sin^3
        let oracle = (theta.cos().powi(3) + theta.sin().powi(3)).powi(2);
        let f = no_cloning_fidelity(theta);
        assert!((f - oracle).abs() < 1e-12);
        assert!(f < 1.0);
    }
}

#[test]
fn chain_and_source_modes_agree() {
    for n in 1..=4 {
        for &(a, b) in &[(0.6, 0.8), (1.0, 0.0), (0.3, -0.2)] {
            let s = source_superposition(n, C64::new(a, 0.1), C64::new(b, 0.0));
            let labels = chain_labels(n);
            let targets: Vec<&str> = labels[1..].iter().map(String::as_str).collect();
            let (x, lx) = multi_copy(&s, "A", &targets, ChainMode::FromSource, CopyLog::new()).unwrap();
            let (y, ly) = multi_copy(&s, "A", &targets, ChainMode::Chained, CopyLog::new()).unwrap();
            assert_eq!(lx.len(), n);
            assert_eq!(ly.seqs(), lx.seqs());
            for (p, q) in x.amplitudes().iter().zip(y.amplitudes()) {
                assert!((p - q).norm_sqr() < 1e-30);
            }
            // only the all-equal branches survive
            let norm = (a * a + 0.01 + b * b).sqrt();
            let last = x.amplitudes().len() - 1;
            assert!((x.amplitudes()[0] - C64::new(a / norm, 0.1 / norm)).norm_sqr() < 1e-28);
            assert!((x.amplitudes()[last] - C64::new(b / norm, 0.0)).norm_sqr() < 1e-28);
        }
    }
}

#[test]
fn shared_reality_any_first_measurement() {
    let n = 4;
    let s = source_superposition(n, C64::new(0.6, 0.0), C64::new(0.8, 0.0));
    let labels = chain_labels(n);
    let targets: Vec<&str> = labels[1..].iter().map(String::as_str).collect();
    let (ghz, _) = multi_copy(&s, "A", &targets, ChainMode::Chained, CopyLog::new()).unwrap();
    let mut rng = rng::seeded(5);
    for first in &labels {
        for _ in 0..50 {
            let m = measure(&ghz, first, Basis::Symbol, &mut rng).unwrap();
            let mut state = m.post_state;
            for other in labels.iter().filter(|l| *l != first) {
                let next = measure(&state, other, Basis::Symbol, &mut rng).unwrap();
                assert_eq!(next.result, m.result);
                assert!((next.probability - 1.0).abs() < 1e-12);
                state = next.post_state;
            }
        }
    }
}

proptest! {
    #[test]
    fn erasing_everything_restores_input(
        n in 1usize..=5,
        re in -1.0f64..1.0,
        im in -1.0f64..1.0,
        beta in -1.0f64..1.0,
        chained in any::<bool>(),
    ) {
        prop_assume!(re.abs() + im.abs() + beta.abs() > 1e-3);
        let s = source_superposition(n, C64::new(re, im), C64::new(beta, 0.0));
        let labels = chain_labels(n);
        let targets: Vec<&str> = labels[1..].iter().map(String::as_str).collect();
        let mode = if chained { ChainMode::Chained } else { ChainMode::FromSource };
        let (copied, log) = multi_copy(&s, "A", &targets, mode, CopyLog::new()).unwrap();
        let all = log.seqs();
        let (restored, log) = erase_copies(&copied, log, &all).unwrap();
        prop_assert!(log.is_empty());
        prop_assert!(fidelity(&restored, &s).unwrap() >= 1.0 - 1e-10);
        for (p, q) in restored.amplitudes().iter().zip(s.amplitudes()) {
            prop_assert!((p - q).norm_sqr().sqrt() < 1e-10);
        }
    }

    #[test]
    fn sequence_numbers_increase(copies in 1usize..20, erase_every in 2usize..5) {
        let layout = SubsystemLayout::qubits(&["A", "B"]).unwrap();
        let mut state = StateVector::basis_state(layout, &[1, 0]);
        let mut log = CopyLog::new();
        let mut last = 0;
        for k in 0..copies {
            (state, log) = apply_copy(&state, &CopierSpec::new("A", "B"), log).unwrap();
            let seq = *log.seqs().last().unwrap();
            prop_assert!(seq > last);
            last = seq;
            if k % erase_every == 0 {
                (state, log) = erase_copies(&state, log, &[seq]).unwrap();
            }
        }
    }
}
