//! Spectral analysis, expansion bounds, and parameter reports.
//!
//! The eigensolver is self-contained: Householder tridiagonalization
//! followed by implicit-shift QL iteration, double precision, dense, with
//! the vertex count capped accordingly. Everything else is closed-form
//! evaluation: the distance and diameter bounds of expander graph codes,
//! the two-term soundness ceiling with its one-dimensional minimization,
//! and the side-by-side protocol comparison rows.

use crate::rim::Rim;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("graph too large for the dense eigensolver")]
    TooLarge,
    #[error("QL iteration failed to converge")]
    NoConvergence,
    #[error("parameters out of range: {0}")]
    BadParameters(&'static str),
}

const MAX_EIGEN_VERTICES: usize = 4000;

/// Full adjacency spectrum plus the derived expansion flags.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// Eigenvalues sorted by decreasing absolute value.
    pub eigenvalues: Vec<f64>,
    pub arity: usize,
    /// The literal definition lambda_2 / n with eigenvalues ordered by
    /// absolute value; for bipartite graphs this is 1 (the -n eigenvalue),
    /// so the Ramanujan flag uses `max_nontrivial_abs` instead.
    pub lambda_bar: f64,
    pub bipartite: bool,
    /// Largest |eigenvalue| after removing one copy of +n, and one copy
    /// of -n when the graph is bipartite.
    pub max_nontrivial_abs: f64,
    pub ramanujan: bool,
}

/// Dense symmetric adjacency spectrum.
///
/// Multi-edges count with multiplicity; an original loop adds 2 to the
/// diagonal and a petal adds 1.
pub fn adjacency_spectrum(g: &Rim) -> Result<SpectrumReport, AnalysisError> {
    let n = g.vertex_count();
    if n > MAX_EIGEN_VERTICES {
        return Err(AnalysisError::TooLarge);
    }
    let mut a = vec![vec![0.0f64; n]; n];
    for e in g.edges() {
        let v = (e.rep as usize / g.arity()) as usize;
        let j = e.rep as usize % g.arity();
        if e.is_petal {
            a[v][v] += 1.0;
        } else {
            let (u, _) = g.partner(v as u32, j);
            let u = u as usize;
            if u == v {
                a[v][v] += 2.0;
            } else {
                a[v][u] += 1.0;
                a[u][v] += 1.0;
            }
        }
    }
    let mut eigenvalues = symmetric_eigenvalues(a)?;
    eigenvalues.sort_by(|x, y| y.abs().partial_cmp(&x.abs()).unwrap());

    let arity = g.arity();
    let bipartite = is_bipartite(g);
    let lambda_bar = if n >= 2 { eigenvalues[1] / arity as f64 } else { 0.0 };

    // strip one +n copy, plus one -n copy for bipartite graphs
    let tol = 1e-6 * arity as f64;
    let mut stripped = eigenvalues.clone();
    if let Some(i) = stripped.iter().position(|x| (x - arity as f64).abs() < tol) {
        stripped.remove(i);
    }
    if bipartite {
        if let Some(i) = stripped.iter().position(|x| (x + arity as f64).abs() < tol) {
            stripped.remove(i);
        }
    }
    let max_nontrivial_abs = stripped.first().map(|x| x.abs()).unwrap_or(0.0);
    let ramanujan = max_nontrivial_abs <= 2.0 * ((arity - 1) as f64).sqrt() + 1e-6;

    Ok(SpectrumReport { eigenvalues, arity, lambda_bar, bipartite, max_nontrivial_abs, ramanujan })
}

pub fn is_ramanujan(report: &SpectrumReport) -> bool {
    report.ramanujan
}

fn is_bipartite(g: &Rim) -> bool {
    let n = g.vertex_count();
    let mut color = vec![-1i8; n];
    for start in 0..n as u32 {
        if color[start as usize] != -1 {
            continue;
        }
        color[start as usize] = 0;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for j in 0..g.arity() {
                let u = g.neighbor(v, j);
                if u == v {
                    return false; // loop or petal
                }
                if color[u as usize] == -1 {
                    color[u as usize] = 1 - color[v as usize];
                    stack.push(u);
                } else if color[u as usize] == color[v as usize] {
                    return false;
                }
            }
        }
    }
    true
}

/// Eigenvalues of a dense symmetric matrix: Householder + implicit QL.
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>, AnalysisError> {
    let n = a.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    tridiagonalize(&mut a, &mut d, &mut e);
    ql_implicit(&mut d, &mut e)?;
    Ok(d)
}

/// Householder reduction to tridiagonal form, eigenvalues-only variant:
/// diagonal ends in `d`, subdiagonal in `e[1..]`.
fn tridiagonalize(a: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = a.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0f64;
        if l > 0 {
            let scale: f64 = a[i][..=l].iter().map(|x| x.abs()).sum();
            if scale == 0.0 {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] /= scale;
                    h += a[i][k] * a[i][k];
                }
                let f = a[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i][l] = f - g;
                let mut ff = 0.0f64;
                for j in 0..=l {
                    let mut g = 0.0f64;
                    for k in 0..=j {
                        g += a[j][k] * a[i][k];
                    }
                    for k in j + 1..=l {
                        g += a[k][j] * a[i][k];
                    }
                    e[j] = g / h;
                    ff += e[j] * a[i][j];
                }
                let hh = ff / (h + h);
                for j in 0..=l {
                    let f = a[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j][k] -= f * e[k] + g * a[i][k];
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for i in 0..n {
        d[i] = a[i][i];
    }
}

/// Implicit-shift QL on a tridiagonal (d, e); `e[0]` unused on input.
fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<(), AnalysisError> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(AnalysisError::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let denom = g + if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / denom;
            let mut s = 1.0f64;
            let mut c = 1.0f64;
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// `delta (delta - lambda)`, clamped at zero: the minimum-distance floor
/// of the graph code on a lambda-expander.
pub fn distance_bound(delta: f64, lambda: f64) -> f64 {
    (delta * (delta - lambda)).max(0.0)
}

/// `2 log(|V|/2) / log((3 - lambda)/2) + 3`.
pub fn diameter_bound(vertices: usize, lambda: f64) -> Result<f64, AnalysisError> {
    if vertices < 2 || lambda >= 1.0 {
        return Err(AnalysisError::BadParameters("need |V| >= 2 and lambda < 1"));
    }
    Ok(2.0 * (vertices as f64 / 2.0).ln() / ((3.0 - lambda) / 2.0).ln() + 3.0)
}

/// Round ceiling derived from the diameter bound: `base_len * ceil(bound)`.
pub fn round_bound(base_len: usize, diam_bound: f64) -> u64 {
    base_len as u64 * diam_bound.ceil() as u64
}

/// The two-term acceptance ceiling at its optimized epsilon.
#[derive(Debug, Clone, Copy)]
pub struct SoundnessBound {
    pub epsilon: f64,
    pub commit: f64,
    pub query: f64,
    pub total: f64,
}

/// Minimizes `sum_r (m_r - 1)/(eps |F|) + (1 - mu (delta - R eps))^L`
/// over `eps` in `(0, delta / R)` by golden section (the sum is convex).
pub fn soundness_bound(
    orders: &[usize],
    field_size: f64,
    mu: f64,
    reps: u32,
    delta: f64,
) -> Result<SoundnessBound, AnalysisError> {
    if delta <= 0.0 || orders.is_empty() {
        return Err(AnalysisError::BadParameters("need delta > 0 and at least one round"));
    }
    let rcount = orders.len() as f64;
    let commit_mass: f64 = orders.iter().map(|&m| (m - 1) as f64).sum();
    let total_at = |eps: f64| -> (f64, f64, f64) {
        let commit = commit_mass / (eps * field_size);
        let base = (1.0 - mu * (delta - rcount * eps)).clamp(0.0, 1.0);
        let query = base.powi(reps as i32);
        (commit, query, commit + query)
    };

    let mut lo = delta / rcount * 1e-12;
    let mut hi = delta / rcount * (1.0 - 1e-12);
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = total_at(x1).2;
    let mut f2 = total_at(x2).2;
    while hi - lo > 1e-9 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = total_at(x1).2;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = total_at(x2).2;
        }
    }
    let eps = 0.5 * (lo + hi);
    let (commit, query, total) = total_at(eps);
    Ok(SoundnessBound { epsilon: eps, commit, query, total })
}

/// One comparison row: a quantity and its value per protocol.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub quantity: &'static str,
    pub fri: String,
    pub stir: String,
    pub flowering: String,
}

/// Side-by-side closed forms at a given code length/dimension/security
/// point.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub code_length: u64,
    pub code_dimension: u64,
    pub security: u32,
    pub kappa: f64,
    pub delta: f64,
    pub reps: u32,
    pub rows: Vec<ComparisonRow>,
    /// Exact base-2 logs of the three field-size requirements.
    pub fri_field_log2: f64,
    pub stir_field_log2: f64,
    pub flowering_field_log2: f64,
    /// Printed thresholds: "requires more than 2^e" for FRI and STIR
    /// (floor of the exact log), "a field of size 2^e suffices" for the
    /// folding protocol (ceiling of the exact log).
    pub fri_threshold_exp: i64,
    pub stir_threshold_exp: i64,
    pub flowering_threshold_exp: i64,
}

/// Evaluates the comparison tables. `delta` is the proximity parameter
/// and `reps` the repetition count used in the soundness rows; logs are
/// base 2 throughout.
pub fn comparison_report(
    code_length: u64,
    code_dimension: u64,
    security: u32,
    kappa: f64,
    arity: usize,
    delta: f64,
    reps: u32,
) -> Result<ComparisonReport, AnalysisError> {
    if code_length <= code_dimension || code_dimension == 0 {
        return Err(AnalysisError::BadParameters("need N > K >= 1"));
    }
    let nf = code_length as f64;
    let kf = code_dimension as f64;
    let lam = security as f64;
    let log_n = nf.log2();
    let log_k = kf.log2();
    let rate_term = 1.0 - (kf / nf).sqrt();

    // field-size requirements, in log2
    let fri_field_log2 = lam + (1e7f64).log2() + 3.5 * log_n + log_k.log2() - 1.5 * log_k;
    let stir_field_log2 =
        lam.log2() + lam + 2.0 * log_k + 3.5 * log_n - (log_n - log_k).max(f64::MIN_POSITIVE).log2();
    let flowering_field_log2 = lam + 1.0 + kappa.log2() + log_n + log_n.log2();

    let fri_verifier = 2.0 * lam * log_k / delta.min(rate_term);
    let flw_denom = delta + log_n / nf;
    let flw_verifier = 8.0 * lam * arity as f64 * kappa * log_n / flw_denom;
    let fri_query = fri_verifier / 2.0 * 2.0 / 2.0; // 2 lam log K / min(...), half the verifier constant
    let flw_query = 3.0 * lam * arity as f64 * kappa * log_n / flw_denom;

    // commit soundness evaluated at the threshold field size: both 2^-lam
    let fri_commit_log2 = fri_field_log2 - lam - fri_field_log2 + lam; // zero by construction
    let _ = fri_commit_log2;
    let fri_query_soundness = (1.0 - delta.min(1.0 - 1.05 * (kf / nf).sqrt())).powi(reps as i32);
    let flw_query_soundness = (1.0 - delta - log_n / nf).max(0.0).powi(reps as i32);

    let rows = vec![
        ComparisonRow {
            quantity: "prover field ops",
            fri: format!("< {:.3e}", 8.0 * nf),
            stir: format!("O(N) ~ {:.3e}", nf),
            flowering: format!("< {:.3e}", 5.0 * kappa * nf * log_n),
        },
        ComparisonRow {
            quantity: "verifier field ops",
            fri: format!("< {:.3e}", fri_verifier),
            stir: format!("O(lam^2 + lam loglog K) ~ {:.3e}", lam * lam + lam * log_k.log2()),
            flowering: format!("< {:.3e}", flw_verifier),
        },
        ComparisonRow {
            quantity: "queries",
            fri: format!("{:.3e}", fri_query),
            stir: format!("O(lam loglog K) ~ {:.3e}", lam * log_k.log2()),
            flowering: format!("< {:.3e}", flw_query),
        },
        ComparisonRow {
            quantity: "rounds",
            fri: format!("{:.1}", log_k),
            stir: format!("O(log K) ~ {:.1}", log_k),
            flowering: format!("< {:.1}", kappa * log_n),
        },
        ComparisonRow {
            quantity: "proof length",
            fri: format!("< {:.3e}", nf),
            stir: format!("N + O(log K) ~ {:.3e}", nf + log_k),
            flowering: format!("< {:.3e}", kappa * nf * log_n),
        },
        ComparisonRow {
            quantity: "field size (log2)",
            fri: format!("> 2^{:.2}", fri_field_log2),
            stir: format!("> 2^{:.2}", stir_field_log2),
            flowering: format!("needs 2^{:.2}", flowering_field_log2),
        },
        ComparisonRow {
            quantity: "commit soundness at threshold field",
            fri: format!("2^-{}", security),
            stir: "-".to_string(),
            flowering: format!("2^-{}", security),
        },
        ComparisonRow {
            quantity: "query soundness",
            fri: format!("{:.3e}", fri_query_soundness),
            stir: "-".to_string(),
            flowering: format!("{:.3e}", flw_query_soundness),
        },
    ];

    Ok(ComparisonReport {
        code_length,
        code_dimension,
        security,
        kappa,
        delta,
        reps,
        rows,
        fri_field_log2,
        stir_field_log2,
        flowering_field_log2,
        fri_threshold_exp: fri_field_log2.floor() as i64,
        stir_threshold_exp: stir_field_log2.floor() as i64,
        flowering_threshold_exp: flowering_field_log2.ceil() as i64,
    })
}

/// Closed-form figures for the Ramanujan family instance.
#[derive(Debug, Clone)]
pub struct CaseStudyReport {
    pub p: u64,
    pub q: u64,
    pub k: usize,
    pub special_group: bool,
    pub vertices: u64,
    pub code_length: u64,
    /// `(k - (p+1)/2) |V|`; negative means the bound is vacuous.
    pub dimension_bound: i64,
    pub delta: f64,
    pub lambda_tilde: f64,
    pub distance_bound: f64,
    pub diameter_bound: f64,
    pub round_bound: u64,
    /// Coefficient with `round_bound = kappa log2(code_length)`.
    pub kappa: f64,
}

/// Evaluates the case-study formulas for LPS parameters `(p, q, k)`
/// without building the graph: vertex counts, code length, dimension and
/// distance floors, and the diameter-derived round ceiling.
pub fn case_study(p: u64, q: u64, k: usize) -> Result<CaseStudyReport, AnalysisError> {
    use crate::field::is_prime;
    if !is_prime(p) || !is_prime(q) || p % 4 != 1 || q % 4 != 1 || p == q || q * q <= 4 * p {
        return Err(AnalysisError::BadParameters("invalid LPS parameters"));
    }
    let arity = (p + 1) as usize;
    if k == 0 || k >= arity {
        return Err(AnalysisError::BadParameters("need 1 <= k <= p"));
    }
    // quadratic residue test decides the group
    let mut p_is_square = false;
    let mut x = 1u64;
    while x <= (q - 1) / 2 {
        if (x * x) % q == p % q {
            p_is_square = true;
            break;
        }
        x += 1;
    }
    let full = (q - 1) * q * (q + 1);
    let vertices = if p_is_square { full / 2 } else { full };
    let code_length = (p + 1) * vertices / 2;
    let dimension_bound = (k as i64 - (p as i64 + 1) / 2) * vertices as i64;
    let delta = (p as f64 - k as f64 + 2.0) / (p as f64 + 1.0);
    let lambda_tilde = 1.0 / (p as f64).sqrt();
    let dist = distance_bound(delta, lambda_tilde);
    let diam = diameter_bound(vertices as usize, lambda_tilde)?;
    let base_len = (p as usize + 1).div_ceil(2);
    let rounds = round_bound(base_len, diam);
    let kappa = rounds as f64 / (code_length as f64).log2();
    Ok(CaseStudyReport {
        p,
        q,
        k,
        special_group: p_is_square,
        vertices,
        code_length,
        dimension_bound,
        delta,
        lambda_tilde,
        distance_bound: dist,
        diameter_bound: diam,
        round_bound: rounds,
        kappa,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rim::complete_graph_rim;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn cycle_rim(len: usize) -> Rim {
        let mut neighbor = Vec::new();
        let mut pairing = Vec::new();
        for v in 0..len {
            let next = (v + 1) % len;
            let prev = (v + len - 1) % len;
            neighbor.push(next as u32);
            neighbor.push(prev as u32);
            pairing.push((next * 2 + 1) as u32);
            pairing.push((prev * 2) as u32);
        }
        Rim::new(2, neighbor, pairing).unwrap()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn k4_spectrum() {
        let rep = adjacency_spectrum(&complete_graph_rim(4)).unwrap();
        let mut sorted = rep.eigenvalues.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_close(sorted[0], 3.0, 1e-9);
        for &l in &sorted[1..] {
            assert_close(l, -1.0, 1e-9);
        }
        assert!(!rep.bipartite);
        assert_close(rep.max_nontrivial_abs, 1.0, 1e-9);
        assert!(rep.ramanujan); // 1 <= 2 sqrt(2)
    }

    #[test]
    fn c4_spectrum_bipartite() {
        let rep = adjacency_spectrum(&cycle_rim(4)).unwrap();
        let mut sorted = rep.eigenvalues.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_close(sorted[0], 2.0, 1e-9);
        assert_close(sorted[1], 0.0, 1e-9);
        assert_close(sorted[2], 0.0, 1e-9);
        assert_close(sorted[3], -2.0, 1e-9);
        assert!(rep.bipartite);
        // the literal lambda-bar definition sees the -n eigenvalue
        assert_close(rep.lambda_bar.abs(), 1.0, 1e-9);
        assert_close(rep.max_nontrivial_abs, 0.0, 1e-9);
        assert!(rep.ramanujan);
    }

    #[test]
    fn c6_spectrum() {
        let rep = adjacency_spectrum(&cycle_rim(6)).unwrap();
        assert!(rep.bipartite);
        // nontrivial eigenvalues are +-1: 1 <= 2 sqrt(1)
        assert_close(rep.max_nontrivial_abs, 1.0, 1e-9);
        assert!(rep.ramanujan);
    }

    #[test]
    fn loops_count_on_the_diagonal() {
        // flower with 3 petals: adjacency is the 1x1 matrix [3]
        let flower = Rim::new(3, vec![0, 0, 0], vec![0, 1, 2]).unwrap();
        let rep = adjacency_spectrum(&flower).unwrap();
        assert_close(rep.eigenvalues[0], 3.0, 1e-12);
        // two petals plus one loop: diagonal 2 + 2 = 4
        let g = Rim::new(4, vec![0, 0, 0, 0], vec![0, 1, 3, 2]).unwrap();
        let rep = adjacency_spectrum(&g).unwrap();
        assert_close(rep.eigenvalues[0], 4.0, 1e-12);
    }

    #[test]
    fn spectrum_sum_matches_trace_and_frobenius() {
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        for n in [5usize, 17, 40] {
            let mut a = vec![vec![0.0f64; n]; n];
            for i in 0..n {
                for j in 0..=i {
                    let x: f64 = rng.random_range(-3.0..3.0);
                    a[i][j] = x;
                    a[j][i] = x;
                }
            }
            let trace: f64 = (0..n).map(|i| a[i][i]).sum();
            let frob: f64 = a.iter().flatten().map(|x| x * x).sum();
            let eig = symmetric_eigenvalues(a).unwrap();
            let sum: f64 = eig.iter().sum();
            let sq: f64 = eig.iter().map(|x| x * x).sum();
            assert_close(sum, trace, 1e-8 * n as f64);
            assert_close(sq, frob, 1e-8 * frob.abs().max(1.0));
        }
    }

    #[test]
    fn distance_bound_values() {
        assert_close(distance_bound(0.5, 0.0), 0.25, 1e-12);
        assert_eq!(distance_bound(0.3, 0.4), 0.0);
        // p = 5, k = 4: delta = 1/2, lambda = 1/sqrt(5)
        let d = distance_bound(0.5, 1.0 / 5.0f64.sqrt());
        assert_close(d, 0.5 * (0.5 - 0.4472135954999579), 1e-12);
    }

    #[test]
    fn diameter_bound_values() {
        assert_close(diameter_bound(2, 0.5).unwrap(), 3.0, 1e-12);
        // |V| = 2184, lambda = 1/sqrt(5): 2 ln(1092)/ln(1.27639...) + 3
        let b = diameter_bound(2184, 1.0 / 5.0f64.sqrt()).unwrap();
        assert_close(b, 2.0 * 1092.0f64.ln() / (1.2763932022500211f64).ln() + 3.0, 1e-9);
        assert_close(b, 60.33334851, 1e-6);
    }

    #[test]
    fn soundness_bound_matches_grid_search() {
        let orders = [3usize];
        let bound = soundness_bound(&orders, 101.0, 1.0, 1, 0.5).unwrap();
        // 10^4-point grid oracle
        let mut best = f64::INFINITY;
        let mut best_eps = 0.0;
        for i in 1..10_000 {
            let eps = 0.5 * i as f64 / 10_000.0;
            let commit = 2.0 / (eps * 101.0);
            let query = (1.0 - (0.5 - eps)).clamp(0.0, 1.0);
            let total = commit + query;
            if total < best {
                best = total;
                best_eps = eps;
            }
        }
        assert_close(bound.total, best, 1e-6);
        assert_close(bound.epsilon, best_eps, 1e-4);
    }

    #[test]
    fn soundness_bound_limits_and_monotonicity() {
        // enormous field: the commit term vanishes and the total tends to
        // (1 - mu delta)^L
        let b = soundness_bound(&[3, 2, 3], 1e30, 1.0, 4, 0.4).unwrap();
        assert_close(b.total, (1.0f64 - 0.4).powi(4), 1e-3);
        // non-increasing in L and in |F|
        let mut prev = f64::INFINITY;
        for reps in [1, 2, 4, 8] {
            let b = soundness_bound(&[3, 2, 3], 101.0, 1.0, reps, 0.4).unwrap();
            assert!(b.total <= prev + 1e-12);
            prev = b.total;
        }
        let mut prev = f64::INFINITY;
        for size in [101.0, 1009.0, 10007.0, 1e6] {
            let b = soundness_bound(&[3, 2, 3], size, 1.0, 4, 0.4).unwrap();
            assert!(b.total <= prev + 1e-12);
            prev = b.total;
        }
    }

    #[test]
    fn comparison_thresholds_at_the_reference_point() {
        let r = comparison_report(1 << 19, 1 << 18, 128, 128.0, 6, 0.25, 128).unwrap();
        assert_eq!(r.flowering_threshold_exp, 160);
        assert_eq!(r.fri_threshold_exp, 194);
        assert_eq!(r.stir_threshold_exp, 237);
        assert!(!r.rows.is_empty());
    }

    #[test]
    fn case_study_p5_q13() {
        let c = case_study(5, 13, 4).unwrap();
        assert!(!c.special_group); // 5 is not a QR mod 13
        assert_eq!(c.vertices, 2184);
        assert_eq!(c.code_length, 6552);
        assert_eq!(c.dimension_bound, 2184); // (4 - 3) * 2184
        assert_close(c.delta, 0.5, 1e-12);
        assert_close(c.lambda_tilde, 1.0 / 5.0f64.sqrt(), 1e-12);
        // the distance floor does not move with q
        let c17 = case_study(5, 17, 4).unwrap();
        assert_close(c.distance_bound, c17.distance_bound, 1e-12);
    }

    #[test]
    fn case_study_rejects_bad_parameters() {
        assert!(case_study(6, 13, 4).is_err());
        assert!(case_study(5, 13, 0).is_err());
        assert!(case_study(5, 13, 6).is_err());
    }
}
