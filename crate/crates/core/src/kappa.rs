//! Lower bounds for the maximum corank over well-signed matrices with one
//! negative eigenvalue, and consistency reports against the minor-closed
//! classes that bound the corank of matrices with the Strong Arnold Property.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{circuit_matrix, regular_polygon};
use crate::error::{Error, Result};
use crate::gmatrix::{random_well_signed, shift_to_one_negative, validate_well_signed, RandomParams, WellSignedMatrix};
use crate::graph::{generate_named, has_minor, is_flat_with_budget, vertex_connectivity, Graph, DEFAULT_MINOR_BUDGET};
use crate::sap::has_sap;
use crate::spectra::{eigen_sym, inertia_exact, SymMatrix};

/// Default cap on Newton iterations summed over all restarts and targets.
pub const DEFAULT_KAPPA_BUDGET: u64 = 20_000;
const RESTARTS: u64 = 8;
const MAX_ITERS: usize = 200;
const MIN_EDGE: f64 = -0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaWitness {
    #[serde(skip)]
    pub matrix: WellSignedMatrix,
    pub corank: usize,
    pub lambda_minus: usize,
    pub sap: bool,
    /// `closed_form:<family>` or `search`.
    pub method: String,
    /// Inertia confirmed in exact arithmetic from the binary entries.
    pub exact: bool,
    /// The iteration budget ran out before all targets were tried.
    pub budget_exhausted: bool,
    pub seed: u64,
    pub tol: f64,
}

/// Relabelled `K_{2,t}`: the two vertices of the small side, the rest.
fn k2t_sides(g: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.n();
    if n < 3 {
        return None;
    }
    let t = n - 2;
    if g.edge_count() != 2 * t {
        return None;
    }
    let hubs: Vec<usize> = (0..n).filter(|&v| g.degree(v) == t).collect();
    for a in 0..hubs.len() {
        for b in a + 1..hubs.len() {
            let (x, y) = (hubs[a], hubs[b]);
            if g.has_edge(x, y) {
                continue;
            }
            let rest: Vec<usize> = (0..n).filter(|&v| v != x && v != y).collect();
            if rest.iter().all(|&v| g.has_edge(x, v) && g.has_edge(y, v)) {
                return Some((vec![x, y], rest));
            }
        }
    }
    None
}

fn closed_forms(g: &Graph) -> Vec<(String, SymMatrix)> {
    let n = g.n();
    let mut out = Vec::new();
    if g.edge_count() == n * (n - 1) / 2 {
        out.push(("closed_form:complete".to_string(), SymMatrix::from_fn(n, |_, _| -1.0)));
    }
    if let Some((small, _)) = k2t_sides(g) {
        let m = SymMatrix::from_fn(n, |i, j| {
            if g.has_edge(i, j) && (small.contains(&i) != small.contains(&j)) {
                -1.0
            } else {
                0.0
            }
        });
        out.push(("closed_form:k2t".to_string(), m));
    }
    if let Some(order) = g.cycle_order() {
        let c = circuit_matrix(&order, &regular_polygon(n)).expect("regular polygon is a valid circuit");
        let mut m = SymMatrix::zeros(n);
        for (p, &a) in order.iter().enumerate() {
            for (q, &b) in order.iter().enumerate() {
                m.set(a, b, *c.matrix.get(p, q));
            }
        }
        out.push(("closed_form:cycle".to_string(), m));
    }
    out
}

fn edge_weights_matrix(g: &Graph, weights: &[f64], diag: &[f64]) -> SymMatrix {
    let mut m = SymMatrix::zeros(g.n());
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        m.set(i, j, weights[k]);
    }
    for (i, &d) in diag.iter().enumerate() {
        m.set(i, i, d);
    }
    m
}

/// Size of `λ_2 .. λ_{c+1}` relative to the Frobenius norm.
fn cluster_residual(values: &[f64], c: usize, norm: f64) -> f64 {
    values[1..=c].iter().map(|x| x * x).sum::<f64>().sqrt() / norm
}

struct Attempt {
    matrix: SymMatrix,
    converged: bool,
    iterations: u64,
}

/// Gauss-Newton on `Vᵀ M V = 0`, V the eigenvectors of `λ_2 .. λ_{c+1}`.
/// Edge weights are clamped to `<= MIN_EDGE` and the weights renormalised to
/// mean absolute value 1 after each step; the step halves on non-improvement.
fn drive_cluster(g: &Graph, start: &SymMatrix, c: usize, max_iters: usize) -> Attempt {
    let n = g.n();
    let ne = g.edge_count();
    let mut w: Vec<f64> = g.edges().iter().map(|&(i, j)| *start.get(i, j)).collect();
    let mut d: Vec<f64> = (0..n).map(|i| *start.get(i, i)).collect();
    let mut m = edge_weights_matrix(g, &w, &d);
    let (mut values, mut vectors, _) = crate::spectra::jacobi(&m);
    let mut residual = cluster_residual(&values, c, m.frobenius_norm());
    let mut step = 1.0;
    let mut iterations = 0;
    let pairs: Vec<(usize, usize)> = (0..c).flat_map(|a| (a..c).map(move |b| (a, b))).collect();
    while iterations < max_iters as u64 {
        if residual <= 1e-14 {
            return Attempt {
                matrix: m,
                converged: true,
                iterations,
            };
        }
        iterations += 1;
        let v = |k: usize, i: usize| vectors[k + 1][i];
        let jac = DMatrix::from_fn(pairs.len(), ne + n, |r, col| {
            let (a, b) = pairs[r];
            if col < ne {
                let (i, j) = g.edges()[col];
                v(a, i) * v(b, j) + v(a, j) * v(b, i)
            } else {
                let i = col - ne;
                v(a, i) * v(b, i)
            }
        });
        let rhs = DVector::from_fn(pairs.len(), |r, _| {
            let (a, b) = pairs[r];
            if a == b {
                -values[a + 1]
            } else {
                0.0
            }
        });
        let Ok(delta) = jac.clone().svd(true, true).solve(&rhs, 1e-12) else {
            break;
        };
        let mut improved = false;
        while step > 1e-6 {
            let mut w2: Vec<f64> = (0..ne).map(|k| (w[k] + step * delta[k]).min(MIN_EDGE)).collect();
            let mut d2: Vec<f64> = (0..n).map(|i| d[i] + step * delta[ne + i]).collect();
            let scale = w2.iter().map(|x| x.abs()).sum::<f64>() / ne.max(1) as f64;
            if scale > 0.0 {
                w2.iter_mut().for_each(|x| *x /= scale);
                d2.iter_mut().for_each(|x| *x /= scale);
            }
            let m2 = edge_weights_matrix(g, &w2, &d2);
            let (values2, vectors2, _) = crate::spectra::jacobi(&m2);
            let r2 = cluster_residual(&values2, c, m2.frobenius_norm());
            if r2 < residual {
                (w, d, m, values, vectors, residual) = (w2, d2, m2, values2, vectors2, r2);
                improved = true;
                step = (step * 2.0).min(1.0);
                break;
            }
            step /= 2.0;
        }
        if !improved {
            break;
        }
    }
    Attempt {
        converged: residual <= 1e-14,
        matrix: m,
        iterations,
    }
}

/// Shift so the cluster is centred on zero; returns the corank and λ⁻ at `tol`.
fn finish(g: &Graph, m: &SymMatrix, c: usize) -> Result<(WellSignedMatrix, usize, usize)> {
    let s = eigen_sym(m, None)?;
    let centre = s.eigenvalues[1..=c].iter().sum::<f64>() / c as f64;
    let shifted = m.shifted(-centre);
    let s = eigen_sym(&shifted, None)?;
    Ok((
        WellSignedMatrix {
            graph: g.clone(),
            matrix: shifted,
        },
        s.corank(),
        s.neg_count,
    ))
}

fn witness(m: WellSignedMatrix, method: String, seed: u64, budget_exhausted: bool) -> Result<KappaWitness> {
    let tol = m.default_tol();
    let s = eigen_sym(&m.matrix, Some(tol))?;
    let exact_inertia = inertia_exact(&m.matrix.to_rational());
    let exact = exact_inertia.neg == s.neg_count && exact_inertia.zero == s.corank();
    let sap = if s.corank() == 0 {
        true
    } else {
        has_sap(&m.graph, &m.matrix, Some(tol))?
    };
    Ok(KappaWitness {
        corank: s.corank(),
        lambda_minus: s.neg_count,
        sap,
        method,
        exact,
        budget_exhausted,
        seed,
        tol,
        matrix: m,
    })
}

/// One seeded attempt at a matrix with `λ⁻ = 1` and corank at least `c`.
pub fn search_corank(g: &Graph, c: usize, seed: u64, max_iters: usize) -> Result<Option<WellSignedMatrix>> {
    if c == 0 || c + 1 >= g.n() {
        return Err(Error::Invalid(format!("target corank {c} out of range for {} vertices", g.n())));
    }
    let start = shift_to_one_negative(&random_well_signed(g, seed, RandomParams::default()), 0.0)?;
    if c == 1 {
        return Ok(Some(start));
    }
    let attempt = drive_cluster(g, &start.matrix, c, max_iters);
    if !attempt.converged {
        return Ok(None);
    }
    let (m, corank, neg) = finish(g, &attempt.matrix, c)?;
    let valid = validate_well_signed(&m.graph, &m.matrix)?.is_empty();
    Ok((valid && neg == 1 && corank >= c).then_some(m))
}

/// Best corank found for a well-signed matrix with exactly one negative
/// eigenvalue. Recognised families use closed forms; otherwise targets
/// `c = 2, 3, ..` are tried in order from seeded restarts until one fails.
/// `budget` caps Newton iterations in total.
pub fn kappa_lower_bound(g: &Graph, budget: u64, seed: u64) -> Result<KappaWitness> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    if n == 1 {
        return witness(
            WellSignedMatrix {
                graph: g.clone(),
                matrix: SymMatrix::from_fn(1, |_, _| -1.0),
            },
            "closed_form:single_vertex".into(),
            seed,
            false,
        );
    }
    let mut best: Option<KappaWitness> = None;
    for (method, m) in closed_forms(g) {
        let w = witness(WellSignedMatrix::new(g.clone(), m)?, method, seed, false)?;
        if w.lambda_minus == 1 && best.as_ref().is_none_or(|b| w.corank > b.corank) {
            best = Some(w);
        }
    }
    if let Some(w) = best {
        return Ok(w);
    }

    let base = shift_to_one_negative(&random_well_signed(g, seed, RandomParams::default()), 0.0)?;
    let mut current = witness(base, "search".into(), seed, false)?;
    let mut spent = 0u64;
    let mut exhausted = false;
    for c in 2..n.saturating_sub(1) {
        if spent >= budget {
            exhausted = true;
            break;
        }
        let per_restart = ((budget - spent) / RESTARTS).min(MAX_ITERS as u64) as usize;
        let results: Vec<(u64, Attempt)> = (0..RESTARTS)
            .into_par_iter()
            .map(|r| {
                let s = seed.wrapping_add(r);
                let start = shift_to_one_negative(&random_well_signed(g, s, RandomParams::default()), 0.0)
                    .expect("connected graph");
                (s, drive_cluster(g, &start.matrix, c, per_restart))
            })
            .collect();
        spent += results.iter().map(|(_, a)| a.iterations).sum::<u64>();
        let mut found = None;
        for (s, attempt) in results.iter().filter(|(_, a)| a.converged) {
            let (m, corank, neg) = finish(g, &attempt.matrix, c)?;
            let valid = validate_well_signed(&m.graph, &m.matrix)?.is_empty();
            if valid && neg == 1 && corank >= c {
                found = Some((*s, m));
                break;
            }
        }
        match found {
            Some((s, m)) => current = witness(m, "search".into(), s, false)?,
            None => break,
        }
    }
    current.budget_exhausted = exhausted;
    Ok(current)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphClass {
    PathUnion,
    Outerplanar,
    Planar,
    Flat,
    Other,
}

impl GraphClass {
    /// Largest corank a matrix with the Strong Arnold Property may have.
    pub fn threshold(self) -> Option<usize> {
        match self {
            GraphClass::PathUnion => Some(1),
            GraphClass::Outerplanar => Some(2),
            GraphClass::Planar => Some(3),
            GraphClass::Flat => Some(4),
            GraphClass::Other => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MuReport {
    pub witness: KappaWitness,
    /// The witness corank; κ is at least this.
    pub kappa_at_least: usize,
    /// The witness corank when it has the Strong Arnold Property.
    pub mu_at_least: Option<usize>,
    pub flat: bool,
    pub class: GraphClass,
    pub threshold: Option<usize>,
    pub vertex_connectivity: usize,
    pub consistent: bool,
}

fn minor_free(g: &Graph, patterns: &[(&str, &[i64])]) -> Result<bool> {
    for (name, params) in patterns {
        if has_minor(g, &generate_named(name, params)?)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn classify_graph(g: &Graph) -> Result<(GraphClass, bool)> {
    let flat = is_flat_with_budget(g, DEFAULT_MINOR_BUDGET)?.flat;
    let class = if g.is_path_union() {
        GraphClass::PathUnion
    } else if minor_free(g, &[("complete", &[4]), ("complete_bipartite", &[2, 3])])? {
        GraphClass::Outerplanar
    } else if minor_free(g, &[("complete", &[5]), ("complete_bipartite", &[3, 3])])? {
        GraphClass::Planar
    } else if flat {
        GraphClass::Flat
    } else {
        GraphClass::Other
    };
    Ok((class, flat))
}

/// Witness, its SAP flag, flatness and connectivity, and whether a SAP
/// witness exceeds the corank threshold of the smallest class containing G.
pub fn mu_report(g: &Graph, budget: u64, seed: u64) -> Result<MuReport> {
    let witness = kappa_lower_bound(g, budget, seed)?;
    let (class, flat) = classify_graph(g)?;
    let threshold = class.threshold();
    let connectivity = if g.n() >= 2 { vertex_connectivity(g)? } else { 0 };
    let consistent = !(witness.sap && threshold.is_some_and(|t| witness.corank > t));
    Ok(MuReport {
        kappa_at_least: witness.corank,
        mu_at_least: witness.sap.then_some(witness.corank),
        flat,
        class,
        threshold,
        vertex_connectivity: connectivity,
        consistent,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(name: &str, params: &[i64]) -> Graph {
        generate_named(name, params).unwrap()
    }

    #[test]
    fn complete_graphs_use_all_ones() {
        let w = kappa_lower_bound(&named("complete", &[4]), DEFAULT_KAPPA_BUDGET, 0).unwrap();
        assert_eq!((w.corank, w.lambda_minus, w.method.as_str()), (3, 1, "closed_form:complete"));
        assert!(w.exact && w.sap);
    }

    #[test]
    fn k2t_uses_the_bipartite_witness() {
        let perm = [3, 0, 5, 1, 6, 2, 4];
        let g = named("complete_bipartite", &[2, 5]).permuted(&perm);
        let w = kappa_lower_bound(&g, DEFAULT_KAPPA_BUDGET, 0).unwrap();
        assert_eq!((w.corank, w.lambda_minus), (5, 1));
        assert!(w.exact && !w.sap);
    }

    #[test]
    fn pentagon() {
        let w = kappa_lower_bound(&named("cycle", &[5]), DEFAULT_KAPPA_BUDGET, 0).unwrap();
        assert_eq!((w.corank, w.lambda_minus, w.method.as_str()), (2, 1, "closed_form:cycle"));
    }

    #[test]
    fn path_stays_at_corank_one() {
        let w = kappa_lower_bound(&named("path", &[4]), 2_000, 0).unwrap();
        assert_eq!((w.corank, w.lambda_minus), (1, 1));
    }

    #[test]
    fn octahedron_search_reaches_three() {
        let w = kappa_lower_bound(&named("octahedron", &[]), DEFAULT_KAPPA_BUDGET, 1).unwrap();
        assert!(validate_well_signed(&w.matrix.graph, &w.matrix.matrix).unwrap().is_empty());
        assert_eq!(w.lambda_minus, 1);
        assert_eq!(w.corank, 3, "{w:?}");
        assert!(w.sap);
    }

    #[test]
    fn single_target_search() {
        let g = named("octahedron", &[]);
        let m = search_corank(&g, 2, 3, MAX_ITERS).unwrap().unwrap();
        let s = eigen_sym(&m.matrix, None).unwrap();
        assert_eq!(s.neg_count, 1);
        assert!(s.corank() >= 2);
        assert!(search_corank(&g, 5, 0, 10).is_err());
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(kappa_lower_bound(&g, 10, 0).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn reports() {
        let r = mu_report(&named("path", &[4]), 2_000, 0).unwrap();
        assert_eq!((r.class, r.kappa_at_least), (GraphClass::PathUnion, 1));
        assert!(r.consistent);
        let r = mu_report(&named("complete", &[5]), 2_000, 0).unwrap();
        assert_eq!((r.class, r.mu_at_least), (GraphClass::Flat, Some(4)));
        assert!(r.consistent && r.flat);
        let r = mu_report(&named("complete_bipartite", &[2, 4]), 2_000, 0).unwrap();
        assert_eq!((r.class, r.kappa_at_least, r.mu_at_least), (GraphClass::Planar, 4, None));
        assert!(r.consistent);
    }
}
