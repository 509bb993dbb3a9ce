//! Weighted undirected graphs, their Laplacians, and the density matrices
//! obtained by normalizing a Laplacian to unit trace.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Smallest eigenvalue accepted as "nonnegative" when validating a density matrix.
pub const PSD_TOLERANCE: f64 = 1e-10;
/// Allowed deviation of a density matrix trace from 1.
pub const TRACE_TOLERANCE: f64 = 1e-12;

/// Undirected graph on vertices `0..n` with edge weights in `[0, 1]`.
///
/// The adjacency matrix is always symmetric with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adj: DMatrix<f64>,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: DMatrix::zeros(n, n),
        }
    }

    pub fn from_adjacency(adj: DMatrix<f64>) -> Result<Self> {
        if adj.nrows() != adj.ncols() {
            return Err(Error::InvalidGraph(format!(
                "adjacency matrix is {}x{}",
                adj.nrows(),
                adj.ncols()
            )));
        }
        let n = adj.nrows();
        for i in 0..n {
            if adj[(i, i)] != 0.0 {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {i}")));
            }
            for j in 0..n {
                let w = adj[(i, j)];
                if !(0.0..=1.0).contains(&w) {
                    return Err(Error::InvalidGraph(format!(
                        "weight {w} on {i}-{j} outside [0, 1]"
                    )));
                }
                if w != adj[(j, i)] {
                    return Err(Error::InvalidGraph(format!(
                        "adjacency is not symmetric at {i}-{j}"
                    )));
                }
            }
        }
        Ok(Graph { adj })
    }

    /// Unweighted graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.set_weight(u, v, 1.0)?;
        }
        Ok(g)
    }

    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v, w) in edges {
            g.set_weight(u, v, w)?;
        }
        Ok(g)
    }

    pub fn set_weight(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(Error::OutOfRange { index: x, bound: n });
            }
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidGraph(format!(
                "weight {w} on {u}-{v} outside [0, 1]"
            )));
        }
        self.adj[(u, v)] = w;
        self.adj[(v, u)] = w;
        Ok(())
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Self {
        let mut adj = DMatrix::from_element(n, n, 1.0);
        adj.fill_diagonal(0.0);
        Graph { adj }
    }

    /// Complete bipartite graph K_{r,s}; vertices `0..r` form the first side.
    pub fn complete_bipartite(r: usize, s: usize) -> Self {
        let n = r + s;
        let adj = DMatrix::from_fn(n, n, |i, j| if (i < r) != (j < r) { 1.0 } else { 0.0 });
        Graph { adj }
    }

    /// Star K_{1,n-1} with center 0.
    pub fn star(n: usize) -> Self {
        Graph::complete_bipartite(1, n.saturating_sub(1))
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 1..n {
            g.adj[(i - 1, i)] = 1.0;
            g.adj[(i, i - 1)] = 1.0;
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n > 2 {
            g.adj[(0, n - 1)] = 1.0;
            g.adj[(n - 1, 0)] = 1.0;
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.nrows()
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adj
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.adj[(u, v)]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[(u, v)] != 0.0
    }

    /// Sum of the weights incident to `v`.
    pub fn degree(&self, v: usize) -> f64 {
        self.adj.row(v).sum()
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn min_degree(&self) -> f64 {
        self.degrees().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn max_degree(&self) -> f64 {
        self.degrees().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n()).filter(|&u| self.has_edge(v, u)).collect()
    }

    /// Edges `(u, v, w)` with `u < v` and nonzero weight, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let w = self.adj[(u, v)];
                if w != 0.0 {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Sum of all edge weights (each edge counted once).
    pub fn total_weight(&self) -> f64 {
        self.adj.sum() / 2.0
    }

    /// A graph is trivial when it has no edges.
    pub fn is_trivial(&self) -> bool {
        self.adj.iter().all(|&w| w == 0.0)
    }

    pub fn is_unweighted(&self) -> bool {
        self.adj.iter().all(|&w| w == 0.0 || w == 1.0)
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.adj[(i, j)] == 1.0))
    }

    /// Errors with [`Error::NonBinaryWeights`] on the first fractional weight.
    pub fn require_unweighted(&self) -> Result<()> {
        for (u, v, w) in self.edges() {
            if w != 1.0 {
                return Err(Error::NonBinaryWeights { u, v, weight: w });
            }
        }
        Ok(())
    }

    /// Graph whose vertex `k` is vertex `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Graph {
        let n = self.n();
        debug_assert_eq!(order.len(), n);
        Graph {
            adj: DMatrix::from_fn(n, n, |i, j| self.adj[(order[i], order[j])]),
        }
    }

    pub fn laplacian(&self) -> DMatrix<f64> {
        laplacian(self)
    }

    pub fn complement(&self) -> Result<Graph> {
        complement(self)
    }
}

/// L = D - A with D the diagonal matrix of weighted degrees.
pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    row_sum_diag(g.adjacency()) - g.adjacency()
}

/// Diagonal matrix carrying the row sums of `m`.
pub fn row_sum_diag(m: &DMatrix<f64>) -> DMatrix<f64> {
    let sums: DVector<f64> = m.column_sum();
    DMatrix::from_diagonal(&sums)
}

/// Complement of an unweighted graph: adjacency J - I - A.
pub fn complement(g: &Graph) -> Result<Graph> {
    g.require_unweighted()?;
    let n = g.n();
    let adj = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            1.0 - g.adjacency()[(i, j)]
        }
    });
    Ok(Graph { adj })
}

/// Checks `m[i][i] >= sum_{j != i} |m[i][j]|` for every row, returning the first offending row.
pub fn check_row_diagonally_dominant(m: &DMatrix<f64>, tol: f64) -> Result<()> {
    for i in 0..m.nrows() {
        let diag = m[(i, i)];
        let off: f64 = (0..m.ncols())
            .filter(|&j| j != i)
            .map(|j| m[(i, j)].abs())
            .sum();
        if diag + tol < off {
            return Err(Error::NotDiagonallyDominant { row: i, diag, off });
        }
    }
    Ok(())
}

pub fn is_row_diagonally_dominant(m: &DMatrix<f64>) -> bool {
    check_row_diagonally_dominant(m, 1e-12).is_ok()
}

/// Real symmetric, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<f64>,
}

impl DensityMatrix {
    /// Validates symmetry, unit trace and positive semidefiniteness.
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotDensityMatrix("matrix is not square".into()));
        }
        let n = mat.nrows();
        for i in 0..n {
            for j in 0..i {
                if (mat[(i, j)] - mat[(j, i)]).abs() > 1e-12 {
                    return Err(Error::NotDensityMatrix(format!(
                        "not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let tr = mat.trace();
        if (tr - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::NotDensityMatrix(format!("trace is {tr}")));
        }
        let min = min_eigenvalue(&mat);
        if min < -PSD_TOLERANCE {
            return Err(Error::NotDensityMatrix(format!(
                "minimum eigenvalue {min:e} is negative"
            )));
        }
        Ok(DensityMatrix { mat })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.mat
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Divides `m` by its trace and validates the result as a density matrix.
pub fn normalize_density(m: &DMatrix<f64>) -> Result<DensityMatrix> {
    let tr = m.trace();
    if tr == 0.0 {
        return Err(Error::ZeroTrace);
    }
    DensityMatrix::new(m / tr)
}

/// Normalized Laplacian L / tr(L) of a nontrivial graph.
pub fn laplacian_density(g: &Graph) -> Result<DensityMatrix> {
    normalize_density(&laplacian(g))
}

/// A matrix diag(D) - A that is row diagonally dominant.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedLaplacian {
    diag: DVector<f64>,
    adj: DMatrix<f64>,
}

impl GeneralizedLaplacian {
    pub fn new(diag: DVector<f64>, adj: DMatrix<f64>) -> Result<Self> {
        if adj.nrows() != adj.ncols() || adj.nrows() != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len(),
                got: adj.nrows(),
            });
        }
        let l = DMatrix::from_diagonal(&diag) - &adj;
        check_row_diagonally_dominant(&l, 1e-12)?;
        Ok(GeneralizedLaplacian { diag, adj })
    }

    /// The standard Laplacian r(|A|) - A of a graph.
    pub fn of_graph(g: &Graph) -> Self {
        let diag = g.adjacency().column_sum();
        GeneralizedLaplacian {
            diag,
            adj: g.adjacency().clone(),
        }
    }

    pub fn diag(&self) -> &DVector<f64> {
        &self.diag
    }

    pub fn adj(&self) -> &DMatrix<f64> {
        &self.adj
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.diag) - &self.adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn laplacian_small_graphs() {
        assert_eq!(
            laplacian(&Graph::complete(2)),
            dmatrix![1.0, -1.0; -1.0, 1.0]
        );
        assert_eq!(
            laplacian(&Graph::path(3)),
            dmatrix![1.0, -1.0, 0.0; -1.0, 2.0, -1.0; 0.0, -1.0, 1.0]
        );
        for n in 1..7 {
            let expected = DMatrix::identity(n, n) * n as f64 - DMatrix::from_element(n, n, 1.0);
            assert_eq!(laplacian(&Graph::complete(n)), expected);
        }
    }

    #[test]
    fn normalization() {
        let rho = laplacian_density(&Graph::complete(2)).unwrap();
        assert_eq!(rho.matrix(), &dmatrix![0.5, -0.5; -0.5, 0.5]);

        let rho = laplacian_density(&Graph::complete(4)).unwrap();
        let expected = (DMatrix::identity(4, 4) * 4.0 - DMatrix::from_element(4, 4, 1.0)) / 12.0;
        assert!((rho.matrix() - expected).amax() < 1e-15);

        assert_eq!(laplacian_density(&Graph::empty(4)), Err(Error::ZeroTrace));
    }

    #[test]
    fn complement_cases() {
        assert!(complement(&Graph::complete(5)).unwrap().is_trivial());
        // complement of K_{2,3} is K_2 ∪ K_3
        let c = complement(&Graph::complete_bipartite(2, 3)).unwrap();
        let mut expected = Graph::empty(5);
        expected.set_weight(0, 1, 1.0).unwrap();
        for (u, v) in [(2, 3), (2, 4), (3, 4)] {
            expected.set_weight(u, v, 1.0).unwrap();
        }
        assert_eq!(c, expected);

        let g = Graph::from_weighted_edges(3, &[(0, 1, 0.5)]).unwrap();
        assert!(matches!(
            complement(&g),
            Err(Error::NonBinaryWeights { .. })
        ));
    }

    #[test]
    fn degrees() {
        assert_eq!(Graph::star(4).degree(0), 3.0);
        assert!(Graph::complete(6).degrees().iter().all(|&d| d == 5.0));
        let g = Graph::from_weighted_edges(3, &[(0, 1, 0.5), (0, 2, 0.5)]).unwrap();
        assert_eq!(g.degree(0), 1.0);
    }

    #[test]
    fn row_sums() {
        let j = DMatrix::from_element(2, 2, 1.0);
        assert_eq!(row_sum_diag(&j), DMatrix::identity(2, 2) * 2.0);
        assert_eq!(
            row_sum_diag(Graph::complete(3).adjacency()),
            DMatrix::identity(3, 3) * 2.0
        );
    }

    #[test]
    fn rejects_bad_adjacency() {
        assert!(Graph::from_adjacency(dmatrix![0.0, 1.0; 0.0, 0.0]).is_err());
        assert!(Graph::from_adjacency(dmatrix![1.0, 0.0; 0.0, 0.0]).is_err());
        assert!(Graph::from_adjacency(dmatrix![0.0, 2.0; 2.0, 0.0]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn generalized_laplacian_requires_dominance() {
        let a = dmatrix![0.0, 1.0; 1.0, 0.0];
        assert!(GeneralizedLaplacian::new(DVector::from_vec(vec![1.0, 1.0]), a.clone()).is_ok());
        assert!(matches!(
            GeneralizedLaplacian::new(DVector::from_vec(vec![0.5, 1.0]), a),
            Err(Error::NotDiagonallyDominant { row: 0, .. })
        ));
    }

    #[test]
    fn density_rejects_indefinite() {
        let m = dmatrix![1.5, 0.0; 0.0, -0.5];
        assert!(DensityMatrix::new(m).is_err());
    }
}
