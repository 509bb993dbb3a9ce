//! Exhaustive experiments over labelings and graph catalogs: all-labelings
//! classification, the 4-vertex census, complete bipartite classes, and the
//! "every noncomplete graph has an entangling labeling" sweep.
//!
//! Work is spread over the rayon pool; every aggregate is computed from
//! results collected in enumeration order, so reports do not depend on the
//! number of workers.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::construct_entangling_labeling;
use crate::entanglement::{degree_entangled, verdict, Status};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::to_graph6;
use crate::labeling::{reduced_labelings, DimVector, LabelingDoc, VertexLabeling};

/// Largest order accepted by exhaustive labeling enumeration.
pub const ALL_LABELINGS_LIMIT: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    AllSeparable,
    AllEntangled,
    Mixed,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub entangled: usize,
    pub separable: usize,
    pub undecided: usize,
    /// Labelings examined.
    pub examined: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllLabelingsReport {
    pub classification: Classification,
    pub counts: Counts,
    /// Set when some labeling could not be decided; such graphs are never
    /// classified as all-separable.
    pub undecided_present: bool,
    /// First entangled labeling in enumeration order.
    pub entangling_labeling: Option<VertexLabeling>,
}

/// Verdicts for `g` under the given labelings, aggregated in order.
pub fn classify_labelings(g: &Graph, labelings: &[VertexLabeling]) -> Result<AllLabelingsReport> {
    let dims = labelings
        .first()
        .map(|l| l.dims().clone())
        .ok_or_else(|| Error::InvalidLabeling("no labelings".into()))?;
    let statuses = labelings
        .par_iter()
        .map(|lab| verdict(g, &dims, lab).map(|v| v.status))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = Counts {
        examined: statuses.len(),
        ..Counts::default()
    };
    let mut entangling_labeling = None;
    for (lab, status) in labelings.iter().zip(&statuses) {
        match status {
            Status::Entangled => {
                counts.entangled += 1;
                entangling_labeling.get_or_insert_with(|| lab.clone());
            }
            Status::Separable => counts.separable += 1,
            Status::Undecided => counts.undecided += 1,
        }
    }
    let classification = if counts.entangled == counts.examined {
        Classification::AllEntangled
    } else if counts.separable == counts.examined {
        Classification::AllSeparable
    } else {
        Classification::Mixed
    };
    Ok(AllLabelingsReport {
        classification,
        counts,
        undecided_present: counts.undecided > 0,
        entangling_labeling,
    })
}

/// Runs the verdict ladder under every labeling up to grid symmetry
/// (within-factor relabelings and swaps of equal factors).
pub fn all_labelings_verdict(g: &Graph, dims: &DimVector) -> Result<AllLabelingsReport> {
    if g.n() > ALL_LABELINGS_LIMIT {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: ALL_LABELINGS_LIMIT,
        });
    }
    dims.check_order(g.n())?;
    classify_labelings(g, &reduced_labelings(dims))
}

/// Minimum upper-triangle bit string over all vertex orders (bit `k` is the
/// `k`-th pair in graph6 order, most significant first).
pub fn canonical_code(g: &Graph) -> u128 {
    use itertools::Itertools;
    let n = g.n();
    assert!(n <= 16, "brute-force canonical form is limited to 16 vertices");
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    (0..n)
        .permutations(n)
        .map(|perm| {
            pairs.iter().fold(0u128, |acc, &(i, j)| {
                (acc << 1) | u128::from(g.has_edge(perm[i], perm[j]))
            })
        })
        .min()
        .unwrap_or(0)
}

/// Graph with the canonical adjacency bit string.
pub fn canonical_form(g: &Graph) -> Graph {
    let n = g.n();
    let code = canonical_code(g);
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut out = Graph::empty(n);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if (code >> (pairs.len() - 1 - k)) & 1 == 1 {
            out.set_weight(i, j, 1.0).expect("valid pair");
        }
    }
    out
}

/// One line of an experiment report (serialized as JSON lines).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportLine {
    pub graph6: String,
    pub n: usize,
    pub dims: Vec<usize>,
    pub classification: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub entangling_labeling: Option<LabelingDoc>,
    pub counts: Counts,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
}

fn classification_name(c: Classification) -> &'static str {
    match c {
        Classification::AllSeparable => "all_separable",
        Classification::AllEntangled => "all_entangled",
        Classification::Mixed => "mixed",
    }
}

fn report_line(g: &Graph, dims: &DimVector, report: &AllLabelingsReport) -> Result<ReportLine> {
    Ok(ReportLine {
        graph6: to_graph6(g)?,
        n: g.n(),
        dims: dims.dims().to_vec(),
        classification: classification_name(report.classification).to_string(),
        entangling_labeling: report.entangling_labeling.as_ref().map(LabelingDoc::from),
        counts: report.counts,
        method: Some("exhaustive".into()),
        reason: report
            .undecided_present
            .then(|| "undecided labelings present".to_string()),
        name: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    /// Isomorphism classes including the trivial graph.
    pub total_classes: usize,
    /// One line per nontrivial class, ordered by edge count then canonical code.
    pub lines: Vec<ReportLine>,
}

impl CensusReport {
    pub fn all_separable(&self) -> Vec<&ReportLine> {
        self.lines
            .iter()
            .filter(|l| l.classification == "all_separable")
            .collect()
    }
}

/// All graphs on 4 vertices up to isomorphism, classified over every
/// labeling in C^2 x C^2. The trivial graph is excluded.
pub fn census_n4() -> Result<CensusReport> {
    let pairs: Vec<(usize, usize)> = (1..4).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut classes: BTreeMap<(usize, u128), Graph> = BTreeMap::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(4, &edges)?;
        let canon = canonical_form(&g);
        classes
            .entry((edges.len(), canonical_code(&g)))
            .or_insert(canon);
    }
    let dims = DimVector::new(vec![2, 2])?;
    let total_classes = classes.len();
    let lines = classes
        .values()
        .filter(|g| !g.is_trivial())
        .map(|g| report_line(g, &dims, &all_labelings_verdict(g, &dims)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(CensusReport {
        total_classes,
        lines,
    })
}

/// Whether `K_{r,n-r}` is entangled under every labeling by its side size: some factor
/// `p_i` with `r < n / p_i` and `r` not divisible by `p_i`.
pub fn side_size_forces_entanglement(r: usize, dims: &DimVector) -> bool {
    let n = dims.product();
    dims.dims().iter().any(|&p| r < n / p && !r.is_multiple_of(p))
}

/// `K_{r,n-r}` and its complement for `1 <= r <= n/2`, each classified over all labelings.
pub fn bipartite_census(dims: &DimVector) -> Result<Vec<ReportLine>> {
    let n = dims.product();
    let mut out = Vec::new();
    for r in 1..=n / 2 {
        let g = Graph::complete_bipartite(r, n - r);
        for (name, graph) in [
            (format!("K_{{{r},{}}}", n - r), g.clone()),
            (format!("complement of K_{{{r},{}}}", n - r), g.complement()?),
        ] {
            let report = all_labelings_verdict(&graph, dims)?;
            let mut line = report_line(&graph, dims, &report)?;
            line.name = Some(name);
            if side_size_forces_entanglement(r, dims) {
                line.reason = Some("side size forces entanglement under every labeling".into());
            }
            out.push(line);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ExperimentOptions {
    /// Run the exhaustive search even when a construction succeeds.
    pub always_search: bool,
}

/// Outcome of searching for an entangling labeling of one graph.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Skipped(&'static str),
    Found {
        method: String,
        labeling: VertexLabeling,
        examined: usize,
    },
    NotFound {
        examined: usize,
    },
}

/// First reduced labeling (in enumeration order) under which `g` is
/// Entangled: the degree criterion is tried over all labelings first, then
/// the full verdict ladder. Returns the labeling and its 1-based position.
pub fn search_entangling_labeling(
    g: &Graph,
    dims: &DimVector,
) -> Result<Option<(VertexLabeling, usize)>> {
    if g.n() > ALL_LABELINGS_LIMIT {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: ALL_LABELINGS_LIMIT,
        });
    }
    dims.check_order(g.n())?;
    let labs = reduced_labelings(dims);
    let hits = labs
        .par_iter()
        .map(|l| degree_entangled(g, l))
        .collect::<Result<Vec<_>>>()?;
    if let Some(k) = hits.iter().position(|&h| h) {
        return Ok(Some((labs[k].clone(), k + 1)));
    }
    let statuses = labs
        .par_iter()
        .map(|l| verdict(g, dims, l).map(|v| v.status))
        .collect::<Result<Vec<_>>>()?;
    Ok(statuses
        .iter()
        .position(|&s| s == Status::Entangled)
        .map(|k| (labs[k].clone(), labs.len() + k + 1)))
}

/// Constructions first, then exhaustive search.
pub fn find_entangling_labeling(
    g: &Graph,
    dims: &DimVector,
    options: ExperimentOptions,
) -> Result<SearchOutcome> {
    dims.check_order(g.n())?;
    g.require_unweighted()?;
    if g.is_trivial() {
        return Ok(SearchOutcome::Skipped("trivial"));
    }
    if g.is_complete() {
        return Ok(SearchOutcome::Skipped("complete"));
    }
    let constructed = construct_entangling_labeling(g, dims);
    if let (Some((kind, factor, lab)), false) = (&constructed, options.always_search) {
        return Ok(SearchOutcome::Found {
            method: format!("{}:factor{}", kind.name(), factor + 1),
            labeling: lab.clone(),
            examined: 0,
        });
    }
    match search_entangling_labeling(g, dims)? {
        Some((labeling, examined)) => Ok(SearchOutcome::Found {
            method: match constructed {
                Some((kind, factor, _)) => {
                    format!("search (construction {}:factor{} also applies)", kind.name(), factor + 1)
                }
                None => "search".into(),
            },
            labeling,
            examined,
        }),
        None => Ok(SearchOutcome::NotFound {
            examined: 2 * reduced_labelings(dims).len(),
        }),
    }
}

/// Searches an entangling labeling for each graph of a catalog. Lines come
/// back in catalog order.
pub fn noncomplete_experiment(
    graphs: &[(String, Graph)],
    dims: &DimVector,
    options: ExperimentOptions,
) -> Result<Vec<ReportLine>> {
    graphs
        .par_iter()
        .map(|(code, g)| {
            let outcome = find_entangling_labeling(g, dims, options)?;
            let mut line = ReportLine {
                graph6: code.clone(),
                n: g.n(),
                dims: dims.dims().to_vec(),
                classification: String::new(),
                entangling_labeling: None,
                counts: Counts::default(),
                method: None,
                reason: None,
                name: None,
            };
            match outcome {
                SearchOutcome::Skipped(why) => {
                    line.classification = "skipped".into();
                    line.reason = Some(why.into());
                }
                SearchOutcome::Found {
                    method,
                    labeling,
                    examined,
                } => {
                    line.classification = "entangling_labeling_found".into();
                    line.entangling_labeling = Some(LabelingDoc::from(&labeling));
                    line.method = Some(method);
                    line.counts.examined = examined;
                    line.counts.entangled = 1;
                }
                SearchOutcome::NotFound { examined } => {
                    line.classification = "no_entangling_labeling".into();
                    line.method = Some("search".into());
                    line.counts.examined = examined;
                }
            }
            Ok(line)
        })
        .collect()
}
