//! Separability tests for normalized Laplacians: the degree criterion on the
//! partial transpose graph, the numeric partial transpose (PPT) test, the
//! edge-count sufficient condition, and the decision ladder combining them.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{laplacian_density, min_eigenvalue, DensityMatrix, Graph, PSD_TOLERANCE};
use crate::labeling::{
    apply_labeling, partial_transpose_with, single_factor_splits, Bipartition, DimVector,
    SplitCoords, VertexLabeling,
};

/// Degrees closer than this are treated as equal.
pub const DEGREE_TOLERANCE: f64 = 1e-12;
/// A partial transpose eigenvalue below `-PPT_TOLERANCE` certifies entanglement.
pub const PPT_TOLERANCE: f64 = PSD_TOLERANCE;

/// Vertex whose degree differs between a graph and its partial transpose graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeWitness {
    /// Grid cell of the vertex.
    pub cell: usize,
    pub split: Bipartition,
    pub deg_g: f64,
    pub deg_pt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DegreeOutcome {
    Pass,
    Fail(DegreeWitness),
}

impl DegreeOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, DegreeOutcome::Pass)
    }

    pub fn witness(&self) -> Option<&DegreeWitness> {
        match self {
            DegreeOutcome::Pass => None,
            DegreeOutcome::Fail(w) => Some(w),
        }
    }
}

/// Compares every vertex degree of a grid-ordered graph with its degree in
/// the partial transpose graph. Failure means the normalized Laplacian is
/// entangled across `split`.
pub fn degree_criterion(g: &Graph, dims: &DimVector, split: &Bipartition) -> Result<DegreeOutcome> {
    dims.check_order(g.n())?;
    let sc = SplitCoords::new(dims, split)?;
    Ok(degree_criterion_with(g, split, &sc))
}

fn degree_criterion_with(g: &Graph, split: &Bipartition, sc: &SplitCoords) -> DegreeOutcome {
    let pt = partial_transpose_with(g, sc);
    for v in 0..g.n() {
        let (deg_g, deg_pt) = (g.degree(v), pt.degree(v));
        if (deg_g - deg_pt).abs() > DEGREE_TOLERANCE {
            return DegreeOutcome::Fail(DegreeWitness {
                cell: v,
                split: split.clone(),
                deg_g,
                deg_pt,
            });
        }
    }
    DegreeOutcome::Pass
}

/// Degree criterion over every single-factor-versus-rest split; the first
/// failing split (in factor order) is reported.
pub fn degree_criterion_multipartite(g: &Graph, dims: &DimVector) -> Result<DegreeOutcome> {
    dims.check_order(g.n())?;
    for split in single_factor_splits(dims) {
        let sc = SplitCoords::new(dims, &split)?;
        if let fail @ DegreeOutcome::Fail(_) = degree_criterion_with(g, &split, &sc) {
            return Ok(fail);
        }
    }
    Ok(DegreeOutcome::Pass)
}

/// Transposes the right group of factors: entry `((a,b),(c,d))` of the
/// result is entry `((a,d),(c,b))` of `m`.
pub fn partial_transpose_matrix(
    m: &DMatrix<f64>,
    dims: &DimVector,
    split: &Bipartition,
) -> Result<DMatrix<f64>> {
    dims.check_order(m.nrows())?;
    let sc = SplitCoords::new(dims, split)?;
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for x in 0..n {
        let (a, b) = sc.coords(x);
        for y in 0..n {
            let (c, d) = sc.coords(y);
            out[(x, y)] = m[(sc.cell(a, d), sc.cell(c, b))];
        }
    }
    Ok(out)
}

/// Minimum eigenvalue of the partial transpose of `rho` across `split`.
pub fn ppt_min_eigenvalue(rho: &DensityMatrix, dims: &DimVector, split: &Bipartition) -> Result<f64> {
    let pt = partial_transpose_matrix(rho.matrix(), dims, split)?;
    Ok(min_eigenvalue(&pt))
}

/// Sufficient condition for separability in two factors: for all rows
/// `i != j` and columns `k`, the number of edges from `(i,k)` into row `j`
/// equals the number from `(j,k)` into row `i`.
pub fn edge_count_sufficient(g: &Graph, dims: &DimVector) -> Result<bool> {
    if dims.len() != 2 {
        return Err(Error::NotBipartiteDims(dims.len()));
    }
    dims.check_order(g.n())?;
    g.require_unweighted()?;
    let (p1, p2) = (dims.dims()[0], dims.dims()[1]);
    let cell = |i: usize, k: usize| i * p2 + k;
    let row_edges = |from: usize, to_row: usize| -> f64 {
        (0..p2).map(|y| g.weight(from, cell(to_row, y))).sum()
    };
    for i in 0..p1 {
        for j in 0..p1 {
            if i == j {
                continue;
            }
            for k in 0..p2 {
                if row_edges(cell(i, k), j) != row_edges(cell(j, k), i) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Entangled,
    Separable,
    Undecided,
}

/// Degree witness expressed in terms of the original graph's vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub vertex: usize,
    /// 1-based multi-index of the vertex under the labeling.
    pub label: Vec<usize>,
    pub split: Bipartition,
    pub deg_g: f64,
    pub deg_pt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub split: Option<Bipartition>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<f64>,
}

/// A split on which the degree criterion and the PPT test disagree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub split: Bipartition,
    pub degree_passed: bool,
    pub ppt_min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    /// Most negative PPT eigenvalue and its split, when PPT is violated.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ppt_violation: Option<(Bipartition, f64)>,
    /// Name of the sufficiency rule behind a Separable status.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rule: Option<String>,
    pub tests: Vec<TestRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub disagreements: Vec<Disagreement>,
}

/// Runs the decision ladder on `g` under `labeling`:
/// degree criterion on every split, PPT on every split, then the two-factor
/// sufficiency rules (edge counts, and PPT when a factor has dimension 2).
pub fn verdict(g: &Graph, dims: &DimVector, labeling: &VertexLabeling) -> Result<Verdict> {
    if labeling.dims() != dims {
        return Err(Error::InvalidLabeling(format!(
            "labeling dims {} differ from {}",
            labeling.dims(),
            dims
        )));
    }
    if dims.len() < 2 {
        return Err(Error::InvalidDims("need at least two factors".into()));
    }
    let canon = apply_labeling(g, labeling)?;
    let rho = laplacian_density(&canon)?;
    let splits = single_factor_splits(dims);

    let mut tests = Vec::new();
    let mut witness = None;
    let mut degree_results = Vec::with_capacity(splits.len());
    for split in &splits {
        let outcome = degree_criterion(&canon, dims, split)?;
        tests.push(TestRecord {
            name: "degree".into(),
            split: Some(split.clone()),
            passed: outcome.passed(),
            value: None,
        });
        if let (None, Some(w)) = (&witness, outcome.witness()) {
            let vertex = labeling.inverse()[w.cell];
            witness = Some(Witness {
                vertex,
                label: labeling.to_multi_indices()[vertex].clone(),
                split: w.split.clone(),
                deg_g: w.deg_g,
                deg_pt: w.deg_pt,
            });
        }
        degree_results.push(outcome.passed());
    }

    let mut ppt_violation: Option<(Bipartition, f64)> = None;
    let mut disagreements = Vec::new();
    for (split, &degree_passed) in splits.iter().zip(&degree_results) {
        let ev = ppt_min_eigenvalue(&rho, dims, split)?;
        let ppt_ok = ev >= -PPT_TOLERANCE;
        tests.push(TestRecord {
            name: "ppt".into(),
            split: Some(split.clone()),
            passed: ppt_ok,
            value: Some(ev),
        });
        if !ppt_ok && ppt_violation.as_ref().is_none_or(|(_, best)| ev < *best) {
            ppt_violation = Some((split.clone(), ev));
        }
        if ppt_ok != degree_passed {
            disagreements.push(Disagreement {
                split: split.clone(),
                degree_passed,
                ppt_min_eigenvalue: ev,
            });
        }
    }

    let mut rule = None;
    let status = if witness.is_some() || ppt_violation.is_some() {
        Status::Entangled
    } else if dims.len() == 2 {
        if canon.is_unweighted() && edge_count_sufficient(&canon, dims)? {
            tests.push(TestRecord {
                name: "edge-count".into(),
                split: None,
                passed: true,
                value: None,
            });
            rule = Some("edge-count".to_string());
            Status::Separable
        } else {
            if canon.is_unweighted() {
                tests.push(TestRecord {
                    name: "edge-count".into(),
                    split: None,
                    passed: false,
                    value: None,
                });
            }
            if dims.dims().contains(&2) {
                rule = Some("ppt-qubit-factor".to_string());
                Status::Separable
            } else {
                Status::Undecided
            }
        }
    } else {
        Status::Undecided
    };

    Ok(Verdict {
        status,
        witness,
        ppt_violation,
        rule,
        tests,
        disagreements,
    })
}

/// Degree-criterion-only check used by labeling searches: true when some
/// split certifies entanglement of `g` under `labeling`.
pub fn degree_entangled(g: &Graph, labeling: &VertexLabeling) -> Result<bool> {
    let canon = apply_labeling(g, labeling)?;
    Ok(!degree_criterion_multipartite(&canon, labeling.dims())?.passed())
}
