//! Tensor factorizations `n = p1 * ... * pm`, vertex labelings onto the
//! multi-index grid, and the partial transpose graph.
//!
//! Multi-indices are 0-based inside the crate. The JSON helpers convert to
//! and from the 1-based form used in reports.

use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Ordered list of subsystem dimensions, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DimVector(Vec<usize>);

impl DimVector {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDims("no factors".into()));
        }
        if let Some(&p) = dims.iter().find(|&&p| p < 2) {
            return Err(Error::InvalidDims(format!("factor {p} is smaller than 2")));
        }
        Ok(DimVector(dims))
    }

    /// Parses "2,3" or "2x3".
    pub fn parse(s: &str) -> Result<Self> {
        let dims = s
            .split([',', 'x', 'X'])
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad dimension list {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        DimVector::new(dims)
    }

    /// Checks that the product of the dimensions is `n`.
    pub fn check_order(&self, n: usize) -> Result<()> {
        if self.product() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.product(),
            });
        }
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    /// Number of factors.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn product(&self) -> usize {
        self.0.iter().product()
    }

    /// Row-major (last index fastest) position of a multi-index.
    pub fn encode(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: index.len(),
            });
        }
        let mut k = 0;
        for (&i, &p) in index.iter().zip(&self.0) {
            if i >= p {
                return Err(Error::OutOfRange { index: i, bound: p });
            }
            k = k * p + i;
        }
        Ok(k)
    }

    pub fn decode(&self, k: usize) -> Result<Vec<usize>> {
        let n = self.product();
        if k >= n {
            return Err(Error::OutOfRange { index: k, bound: n });
        }
        let mut index = vec![0; self.len()];
        let mut rest = k;
        for (slot, &p) in index.iter_mut().zip(&self.0).rev() {
            *slot = rest % p;
            rest /= p;
        }
        Ok(index)
    }

    /// Dimensions of the factors in `factors`, in that order.
    pub fn select(&self, factors: &[usize]) -> Vec<usize> {
        factors.iter().map(|&f| self.0[f]).collect()
    }
}

impl TryFrom<Vec<usize>> for DimVector {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        DimVector::new(v)
    }
}

impl From<DimVector> for Vec<usize> {
    fn from(d: DimVector) -> Self {
        d.0
    }
}

impl std::fmt::Display for DimVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

/// Split of the factor indices into two nonempty groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    pub fn new(left: Vec<usize>, m: usize) -> Result<Self> {
        let mut left = left;
        left.sort_unstable();
        left.dedup();
        if left.is_empty() || left.len() >= m {
            return Err(Error::InvalidBipartition(format!(
                "left group {left:?} must be a nonempty proper subset of 0..{m}"
            )));
        }
        if let Some(&f) = left.iter().find(|&&f| f >= m) {
            return Err(Error::OutOfRange { index: f, bound: m });
        }
        let right = (0..m).filter(|f| !left.contains(f)).collect();
        Ok(Bipartition { left, right })
    }

    /// Factor `factor` against all the others.
    pub fn single(factor: usize, m: usize) -> Result<Self> {
        Bipartition::new(vec![factor], m)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn m(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{{{}}}|{{{}}}",
            self.left.iter().join(","),
            self.right.iter().join(",")
        )
    }
}

/// The single-factor-versus-rest splits, one per factor. With two factors
/// both splits are the same bipartition, so only one is returned.
pub fn single_factor_splits(dims: &DimVector) -> Vec<Bipartition> {
    let m = dims.len();
    match m {
        0 | 1 => Vec::new(),
        2 => vec![Bipartition::single(0, 2).expect("valid split")],
        _ => (0..m)
            .map(|f| Bipartition::single(f, m).expect("valid split"))
            .collect(),
    }
}

/// Coordinates of every grid cell as `(left index, right index)` under a split.
#[derive(Debug, Clone)]
pub struct SplitCoords {
    left_dim: usize,
    right_dim: usize,
    coords: Vec<(usize, usize)>,
    cells: Vec<usize>,
}

impl SplitCoords {
    pub fn new(dims: &DimVector, split: &Bipartition) -> Result<Self> {
        if split.m() != dims.len() {
            return Err(Error::DimensionMismatch {
                expected: dims.len(),
                got: split.m(),
            });
        }
        let left = DimVector(dims.select(split.left()));
        let right = DimVector(dims.select(split.right()));
        let (left_dim, right_dim) = (left.product(), right.product());
        let n = dims.product();
        let mut coords = Vec::with_capacity(n);
        let mut cells = vec![0; n];
        for k in 0..n {
            let idx = dims.decode(k)?;
            let li: Vec<usize> = split.left().iter().map(|&f| idx[f]).collect();
            let ri: Vec<usize> = split.right().iter().map(|&f| idx[f]).collect();
            let (a, b) = (left.encode(&li)?, right.encode(&ri)?);
            coords.push((a, b));
            cells[a * right_dim + b] = k;
        }
        Ok(SplitCoords {
            left_dim,
            right_dim,
            coords,
            cells,
        })
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn coords(&self, cell: usize) -> (usize, usize) {
        self.coords[cell]
    }

    pub fn cell(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.right_dim + b]
    }
}

/// Bijection from vertices to grid cells (cell = row-major position of the multi-index).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexLabeling {
    dims: DimVector,
    cells: Vec<usize>,
}

impl VertexLabeling {
    pub fn new(dims: DimVector, cells: Vec<usize>) -> Result<Self> {
        let n = dims.product();
        if cells.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: cells.len(),
            });
        }
        let mut seen = vec![false; n];
        for &c in &cells {
            if c >= n {
                return Err(Error::OutOfRange { index: c, bound: n });
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidLabeling(format!("cell {c} assigned twice")));
            }
        }
        Ok(VertexLabeling { dims, cells })
    }

    pub fn identity(dims: DimVector) -> Self {
        let n = dims.product();
        VertexLabeling {
            dims,
            cells: (0..n).collect(),
        }
    }

    /// Builds a labeling from 1-based multi-indices, one per vertex.
    pub fn from_multi_indices(dims: DimVector, labels: &[Vec<usize>]) -> Result<Self> {
        let cells = labels
            .iter()
            .map(|l| {
                if l.contains(&0) {
                    return Err(Error::InvalidLabeling(format!(
                        "multi-index {l:?} is not 1-based"
                    )));
                }
                let zero: Vec<usize> = l.iter().map(|&i| i - 1).collect();
                dims.encode(&zero)
            })
            .collect::<Result<Vec<_>>>()?;
        VertexLabeling::new(dims, cells)
    }

    /// 1-based multi-index of each vertex.
    pub fn to_multi_indices(&self) -> Vec<Vec<usize>> {
        self.cells
            .iter()
            .map(|&c| {
                self.dims
                    .decode(c)
                    .expect("cell in range")
                    .into_iter()
                    .map(|i| i + 1)
                    .collect()
            })
            .collect()
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn cell_of(&self, vertex: usize) -> usize {
        self.cells[vertex]
    }

    /// Vertex placed on each cell.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.cells.len()];
        for (v, &c) in self.cells.iter().enumerate() {
            inv[c] = v;
        }
        inv
    }
}

/// Labeling JSON document: `{"dims": [...], "labeling": [[i1, ..., im], ...]}` with 1-based indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelingDoc {
    pub dims: Vec<usize>,
    pub labeling: Vec<Vec<usize>>,
}

impl From<&VertexLabeling> for LabelingDoc {
    fn from(l: &VertexLabeling) -> Self {
        LabelingDoc {
            dims: l.dims.dims().to_vec(),
            labeling: l.to_multi_indices(),
        }
    }
}

impl TryFrom<LabelingDoc> for VertexLabeling {
    type Error = Error;

    fn try_from(doc: LabelingDoc) -> Result<Self> {
        VertexLabeling::from_multi_indices(DimVector::new(doc.dims)?, &doc.labeling)
    }
}

/// Reorders `g` into grid order: vertex `k` of the result is the vertex labeled with cell `k`.
pub fn apply_labeling(g: &Graph, lab: &VertexLabeling) -> Result<Graph> {
    lab.dims.check_order(g.n())?;
    Ok(g.permuted(&lab.inverse()))
}

/// Partial transpose graph of a grid-ordered graph: the edge `{(a,b),(c,d)}`
/// becomes `{(a,d),(c,b)}` where `a, c` index the left group and `b, d` the right.
pub fn partial_transpose_graph(g: &Graph, dims: &DimVector, split: &Bipartition) -> Result<Graph> {
    dims.check_order(g.n())?;
    let sc = SplitCoords::new(dims, split)?;
    Ok(partial_transpose_with(g, &sc))
}

pub(crate) fn partial_transpose_with(g: &Graph, sc: &SplitCoords) -> Graph {
    let mut out = Graph::empty(g.n());
    for (x, y, w) in g.edges() {
        let (a, b) = sc.coords(x);
        let (c, d) = sc.coords(y);
        let (x2, y2) = (sc.cell(a, d), sc.cell(c, b));
        debug_assert_ne!(x2, y2, "transposed edge collapsed onto one cell");
        out.set_weight(x2, y2, w).expect("cells in range");
    }
    out
}

/// Cell permutations generated by relabeling indices within each factor and
/// by swapping factors of equal dimension.
pub fn grid_symmetries(dims: &DimVector) -> Vec<Vec<usize>> {
    let m = dims.len();
    let n = dims.product();
    let factor_maps: Vec<Vec<usize>> = (0..m)
        .permutations(m)
        .filter(|pi| (0..m).all(|k| dims.0[pi[k]] == dims.0[k]))
        .collect();
    let local: Vec<Vec<Vec<usize>>> = dims
        .0
        .iter()
        .map(|&p| (0..p).permutations(p).collect())
        .collect();
    let decoded: Vec<Vec<usize>> = (0..n).map(|k| dims.decode(k).unwrap()).collect();

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for pi in &factor_maps {
        for sigmas in local.iter().multi_cartesian_product() {
            let map: Vec<usize> = decoded
                .iter()
                .map(|x| {
                    let mut y = vec![0; m];
                    for k in 0..m {
                        y[pi[k]] = sigmas[k][x[k]];
                    }
                    dims.encode(&y).unwrap()
                })
                .collect();
            if seen.insert(map.clone()) {
                out.push(map);
            }
        }
    }
    out
}

/// One labeling per orbit of the grid symmetry group: the lexicographically
/// smallest cell sequence of each orbit. Vertex 0 always lands on cell 0.
pub fn reduced_labelings(dims: &DimVector) -> Vec<VertexLabeling> {
    let n = dims.product();
    let group = grid_symmetries(dims);
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let active: Vec<usize> = (0..group.len()).collect();
    orderly_extend(&group, n, &mut prefix, &mut used, &active, &mut |cells| {
        out.push(VertexLabeling {
            dims: dims.clone(),
            cells: cells.to_vec(),
        })
    });
    out
}

fn orderly_extend(
    group: &[Vec<usize>],
    n: usize,
    prefix: &mut Vec<usize>,
    used: &mut [bool],
    active: &[usize],
    emit: &mut dyn FnMut(&[usize]),
) {
    if prefix.len() == n {
        emit(prefix);
        return;
    }
    'cells: for c in 0..n {
        if used[c] {
            continue;
        }
        let mut still = Vec::with_capacity(active.len());
        for &g in active {
            match group[g][c].cmp(&c) {
                std::cmp::Ordering::Less => continue 'cells,
                std::cmp::Ordering::Equal => still.push(g),
                std::cmp::Ordering::Greater => {}
            }
        }
        used[c] = true;
        prefix.push(c);
        orderly_extend(group, n, prefix, used, &still, emit);
        prefix.pop();
        used[c] = false;
    }
}

/// Every labeling (all n! bijections), in lexicographic order of cell sequences.
pub fn all_labelings(dims: &DimVector) -> impl Iterator<Item = VertexLabeling> + '_ {
    let n = dims.product();
    (0..n).permutations(n).map(move |cells| VertexLabeling {
        dims: dims.clone(),
        cells,
    })
}
