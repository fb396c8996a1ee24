//! Corpus runner: seeded random matrices with one negative eigenvalue (plus a
//! high-corank search witness) on each listed graph, checked for the Strong
//! Arnold Property, the hyperplane-split conditions and the corank bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{check_vdh_all, find_disjoint_planes, nullspace_embedding, two_hyperplane_cover, HyperplaneCover};
use crate::error::Result;
use crate::gmatrix::{random_well_signed, shift_to_one_negative, RandomParams, WellSignedMatrix};
use crate::graph::{generate_named, is_flat, vertex_connectivity, Graph};
use crate::kappa::{kappa_lower_bound, DEFAULT_KAPPA_BUDGET};
use crate::sap::sap_kernel;
use crate::spectra::eigen_sym;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub family: String,
    #[serde(default)]
    pub params: Vec<i64>,
    /// Expected to fail; failures are reported but do not fail the run.
    #[serde(default)]
    pub control: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub graphs: Vec<CorpusEntry>,
}

fn default_samples() -> usize {
    20
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorpusConfig {
    /// Overrides every instance's default tolerance.
    pub tol: Option<f64>,
    pub seed: u64,
    pub kappa_budget: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            tol: None,
            seed: 0,
            kappa_budget: DEFAULT_KAPPA_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceReport {
    /// `random` or the witness method.
    pub source: String,
    pub seed: u64,
    pub tol: f64,
    pub lambda_minus: usize,
    pub corank: usize,
    pub sap_kernel_dim: usize,
    pub has_sap: bool,
    /// `None` when the corank is below 2.
    pub vdh_passed: Option<bool>,
    pub vdh_hyperplanes: usize,
    /// Only for corank 4.
    pub disjoint_planes: Option<bool>,
    pub two_hyperplane_cover: Option<String>,
    pub corank_at_most_4: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphReport {
    pub name: String,
    pub family: String,
    pub params: Vec<i64>,
    pub control: bool,
    pub n: usize,
    pub edges: usize,
    pub connectivity: usize,
    pub flat: bool,
    /// Non-control graphs run only when 4-connected and flat.
    pub skipped: Option<String>,
    pub instances: Vec<InstanceReport>,
    pub sap_failures: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusReport {
    pub version: String,
    pub seed: u64,
    pub tol: Option<f64>,
    pub samples: usize,
    pub graphs: Vec<GraphReport>,
    pub passed: bool,
    pub first_failure: Option<String>,
}

fn check_instance(m: &WellSignedMatrix, source: String, seed: u64, tol: Option<f64>) -> Result<InstanceReport> {
    let tol = tol.unwrap_or_else(|| m.default_tol());
    let spec = eigen_sym(&m.matrix, Some(tol))?;
    let d = spec.corank();
    let sap = sap_kernel(&m.graph, &m.matrix, Some(tol))?;
    let (vdh_passed, vdh_hyperplanes) = if d >= 2 {
        let r = check_vdh_all(&m.graph, &m.matrix, Some(tol))?;
        (Some(r.passed()), r.hyperplanes_checked)
    } else {
        (None, 0)
    };
    let (disjoint_planes, cover) = if d == 4 {
        let u = nullspace_embedding(&m.matrix, Some(tol))?;
        let planes = find_disjoint_planes(&m.graph, &u)?.is_some();
        let cover = match two_hyperplane_cover(&m.graph, &u)? {
            HyperplaneCover::None => "none".to_string(),
            HyperplaneCover::Cover { .. } => "cover".to_string(),
            HyperplaneCover::Unknown { kernel_dim } => format!("unknown(kernel_dim={kernel_dim})"),
        };
        (Some(planes), Some(cover))
    } else {
        (None, None)
    };
    let passed = spec.neg_count == 1
        && d >= 1
        && sap.kernel_dim == 0
        && vdh_passed != Some(false)
        && d <= 4
        && disjoint_planes != Some(false)
        && cover.as_deref().is_none_or(|c| c == "none");
    Ok(InstanceReport {
        source,
        seed,
        tol,
        lambda_minus: spec.neg_count,
        corank: d,
        sap_kernel_dim: sap.kernel_dim,
        has_sap: sap.kernel_dim == 0,
        vdh_passed,
        vdh_hyperplanes,
        disjoint_planes,
        two_hyperplane_cover: cover,
        corank_at_most_4: d <= 4,
        passed,
    })
}

/// The instances run for one graph: `samples` shifted random matrices with
/// seeds `seed, seed+1, ..`, then the search witness.
pub fn corpus_instances(g: &Graph, samples: usize, config: &CorpusConfig) -> Result<Vec<(String, u64, WellSignedMatrix)>> {
    let mut out = Vec::with_capacity(samples + 1);
    for k in 0..samples as u64 {
        let s = config.seed.wrapping_add(k);
        let m = shift_to_one_negative(&random_well_signed(g, s, RandomParams::default()), 0.0)?;
        out.push(("random".to_string(), s, m));
    }
    let w = kappa_lower_bound(g, config.kappa_budget, config.seed)?;
    out.push((w.method, w.seed, w.matrix));
    Ok(out)
}

fn run_graph(entry: &CorpusEntry, samples: usize, config: &CorpusConfig) -> Result<GraphReport> {
    let g = generate_named(&entry.family, &entry.params)?;
    let connectivity = if g.n() >= 2 { vertex_connectivity(&g)? } else { 0 };
    let flat = is_flat(&g)?;
    let mut report = GraphReport {
        name: entry.name.clone(),
        family: entry.family.clone(),
        params: entry.params.clone(),
        control: entry.control,
        n: g.n(),
        edges: g.edge_count(),
        connectivity,
        flat,
        skipped: None,
        instances: Vec::new(),
        sap_failures: 0,
        passed: true,
    };
    if !entry.control && !(connectivity >= 4 && flat) {
        report.skipped = Some(format!("not 4-connected and flat (connectivity {connectivity}, flat {flat})"));
        return Ok(report);
    }
    let instances = corpus_instances(&g, samples, config)?;
    report.instances = instances
        .into_par_iter()
        .map(|(source, seed, m)| check_instance(&m, source, seed, config.tol))
        .collect::<Result<Vec<_>>>()?;
    report.sap_failures = report.instances.iter().filter(|i| !i.has_sap).count();
    report.passed = report.instances.iter().all(|i| i.passed);
    Ok(report)
}

/// Runs every graph; the run passes iff every non-control graph passes.
pub fn run_verify_corpus(spec: &CorpusSpec, config: &CorpusConfig) -> Result<CorpusReport> {
    let graphs = spec
        .graphs
        .par_iter()
        .map(|e| run_graph(e, spec.samples, config))
        .collect::<Result<Vec<_>>>()?;
    let first_failure = graphs.iter().filter(|g| !g.control).find_map(|g| {
        g.instances
            .iter()
            .find(|i| !i.passed)
            .map(|i| format!("{}: {} seed {} failed", g.name, i.source, i.seed))
    });
    Ok(CorpusReport {
        version: crate::VERSION.to_string(),
        seed: config.seed,
        tol: config.tol,
        samples: spec.samples,
        passed: first_failure.is_none(),
        first_failure,
        graphs,
    })
}
