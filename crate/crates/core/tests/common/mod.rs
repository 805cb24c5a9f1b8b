//! Reference computations that share no code with the crate's kernels.
#![allow(dead_code)]

use qcopy_core::C64;

/// Decode `index` into digits, first radix most significant.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

/// Reduced density matrix by explicit double sum over matching environment
/// digits. `keep` lists positions in ascending order.
pub fn partial_trace(amps: &[C64], dims: &[usize], keep: &[usize]) -> Vec<Vec<C64>> {
    let keep_dims: Vec<usize> = keep.iter().map(|&p| dims[p]).collect();
    let side: usize = keep_dims.iter().product();
    let mut rho = vec![vec![C64::new(0.0, 0.0); side]; side];
    let n = amps.len();
    for r in 0..n {
        let dr = digits(r, dims);
        for c in 0..n {
            let dc = digits(c, dims);
            let env_equal = (0..dims.len()).filter(|p| !keep.contains(p)).all(|p| dr[p] == dc[p]);
            if !env_equal {
                continue;
            }
            let fold = |d: &[usize]| keep.iter().fold(0, |acc, &p| acc * dims[p] + d[p]);
            rho[fold(&dr)][fold(&dc)] += amps[r] * amps[c].conj();
        }
    }
    rho
}

/// Eigenvalues of a Hermitian matrix via cyclic Jacobi on the real
/// symmetric embedding `[[Re, -Im], [Im, Re]]`, whose spectrum repeats each
/// eigenvalue twice.
pub fn hermitian_eigenvalues(h: &[Vec<C64>]) -> Vec<f64> {
    let n = h.len();
    let m = 2 * n;
    let mut a = vec![vec![0.0; m]; m];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = h[i][j].re;
            a[i + n][j + n] = h[i][j].re;
            a[i][j + n] = -h[i][j].im;
            a[i + n][j] = h[i][j].im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut diag: Vec<f64> = (0..m).map(|i| a[i][i]).collect();
    diag.sort_by(|x, y| y.total_cmp(x));
    diag.into_iter().step_by(2).collect()
}

pub fn entropy_bits(eigenvalues: &[f64]) -> f64 {
    -eigenvalues.iter().filter(|&&l| l > 1e-12).map(|l| l * l.log2()).sum::<f64>()
}

pub fn binary_entropy(p: f64) -> f64 {
    -[p, 1.0 - p].iter().filter(|&&x| x > 0.0).map(|x| x * x.log2()).sum::<f64>()
}

/// Amplitudes of `alpha|0..0> + beta|1..1>` over `n` qubits.
pub fn ghz(n: usize, alpha: f64, beta: f64) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); 1 << n];
    v[0] = C64::new(alpha, 0.0);
    v[(1 << n) - 1] = C64::new(beta, 0.0);
    v
}

/// Von Neumann entropy of the reduced state on `keep`.
pub fn reduced_entropy(amps: &[C64], dims: &[usize], keep: &[usize]) -> f64 {
    entropy_bits(&hermitian_eigenvalues(&partial_trace(amps, dims, keep)))
}

/// Haar-ish unitary from Gram-Schmidt on a seeded matrix of entries.
pub fn unitary_from(entries: &[(f64, f64)], n: usize) -> Vec<Vec<C64>> {
    let mut cols: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| {
            let (re, im) = entries[(i * n + j) % entries.len()];
            C64::new(re + if i == j { 1.5 } else { 0.0 }, im)
        }).collect())
        .collect();
    for j in 0..n {
        for k in 0..j {
            let proj: C64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..n {
                let v = cols[k][i];
                cols[j][i] -= proj * v;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}
