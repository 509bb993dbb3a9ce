//! Labelings that provably violate the degree criterion (and hence make the
//! normalized Laplacian entangled), built from degree conditions on the
//! graph, plus block labelings making complete bipartite graphs separable.
//!
//! Every construction works on a two-dimensional "proof grid" of
//! `rows x cols = n` cells obtained by grouping one factor against the rest,
//! pins a handful of vertices, fills the remaining vertices greedily into
//! free cells, and checks the degree criterion before returning.

use crate::entanglement::{degree_criterion, edge_count_sufficient};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labeling::{apply_labeling, Bipartition, DimVector, SplitCoords, VertexLabeling};

/// Vertex placement on a `rows x cols` grid; cell `(r, c)` is `r * cols + c`.
#[derive(Debug, Clone)]
struct Placement {
    cols: usize,
    vertex_at: Vec<Option<usize>>,
    cell_of: Vec<Option<usize>>,
}

impl Placement {
    fn new(rows: usize, cols: usize) -> Self {
        let n = rows * cols;
        Placement {
            cols,
            vertex_at: vec![None; n],
            cell_of: vec![None; n],
        }
    }

    fn place(&mut self, v: usize, r: usize, c: usize) {
        let cell = r * self.cols + c;
        debug_assert!(self.vertex_at[cell].is_none() && self.cell_of[v].is_none());
        self.vertex_at[cell] = Some(v);
        self.cell_of[v] = Some(cell);
    }

    fn swap(&mut self, a: usize, b: usize) {
        let (ca, cb) = (self.cell_of[a].unwrap(), self.cell_of[b].unwrap());
        self.cell_of.swap(a, b);
        self.vertex_at[ca] = Some(b);
        self.vertex_at[cb] = Some(a);
    }

    fn is_placed(&self, v: usize) -> bool {
        self.cell_of[v].is_some()
    }

    /// Remaining vertices go, in increasing order, to the free cells in row-major order.
    fn fill(mut self) -> Vec<(usize, usize)> {
        let mut free = (0..self.vertex_at.len()).filter(|&c| self.vertex_at[c].is_none());
        for v in 0..self.cell_of.len() {
            if self.cell_of[v].is_none() {
                let c = free.next().expect("as many cells as vertices");
                self.cell_of[v] = Some(c);
            }
        }
        self.cell_of
            .iter()
            .map(|c| {
                let c = c.unwrap();
                (c / self.cols, c % self.cols)
            })
            .collect()
    }
}

/// How the proof grid maps onto the factor grid.
struct GridFrame {
    dims: DimVector,
    split: Bipartition,
    coords: SplitCoords,
    /// Rows index the chosen factor (otherwise rows index the other factors).
    rows_are_factor: bool,
}

impl GridFrame {
    fn new(dims: &DimVector, factor: usize, rows_are_factor: bool) -> Result<Self> {
        let split = Bipartition::single(factor, dims.len())?;
        let coords = SplitCoords::new(dims, &split)?;
        Ok(GridFrame {
            dims: dims.clone(),
            split,
            coords,
            rows_are_factor,
        })
    }

    fn shape(&self) -> (usize, usize) {
        let (a, b) = (self.coords.left_dim(), self.coords.right_dim());
        if self.rows_are_factor {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn labeling(&self, rc: &[(usize, usize)]) -> VertexLabeling {
        let cells = rc
            .iter()
            .map(|&(r, c)| {
                if self.rows_are_factor {
                    self.coords.cell(r, c)
                } else {
                    self.coords.cell(c, r)
                }
            })
            .collect();
        VertexLabeling::new(self.dims.clone(), cells).expect("placement is a bijection")
    }
}

fn check_factor(dims: &DimVector, factor: usize) -> Result<()> {
    if dims.len() < 2 {
        return Err(Error::InvalidDims("need at least two factors".into()));
    }
    if factor >= dims.len() {
        return Err(Error::OutOfRange {
            index: factor,
            bound: dims.len(),
        });
    }
    Ok(())
}

fn check_graph(g: &Graph, dims: &DimVector) -> Result<()> {
    dims.check_order(g.n())?;
    g.require_unweighted()?;
    if g.is_trivial() {
        return Err(Error::TrivialGraph);
    }
    Ok(())
}

/// Lowest-numbered vertex of minimum degree, with its degree.
fn min_degree_vertex(g: &Graph) -> (usize, usize) {
    (0..g.n())
        .map(|v| (v, g.degree(v) as usize))
        .min_by_key(|&(v, d)| (d, v))
        .expect("nonempty graph")
}

/// Verifies that the degree criterion fails on `split` for `g` under `lab`.
fn verify_entangling(
    g: &Graph,
    lab: &VertexLabeling,
    split: &Bipartition,
    what: &str,
) -> Result<()> {
    let canon = apply_labeling(g, lab)?;
    if degree_criterion(&canon, lab.dims(), split)?.passed() {
        return Err(Error::ConstructionFailed(what.to_string()));
    }
    Ok(())
}

/// Placement for minimum degree `d < cols - 1`: the minimum-degree vertex at
/// (0,0), its neighbors along row 0, and one more vertex pinned so that the
/// partial transpose gains an edge at (0,0).
fn min_degree_placement(g: &Graph, rows: usize, cols: usize) -> Placement {
    let (w, d) = min_degree_vertex(g);
    debug_assert!(d + 1 < cols);
    let nbrs = g.neighbors(w);
    let mut p = Placement::new(rows, cols);
    p.place(w, 0, 0);
    for (k, &x) in nbrs.iter().enumerate() {
        p.place(x, 0, k + 1);
    }
    let closed: Vec<bool> = (0..g.n()).map(|v| v == w || nbrs.contains(&v)).collect();

    // Outside the closed neighbourhood every vertex has degree >= d, and
    // some vertex has positive degree because the graph is nontrivial.
    let u = (0..g.n())
        .find(|&u| !closed[u] && g.degree(u) > 0.0)
        .expect("nontrivial graph has an edge outside N[w]");
    let unbrs = g.neighbors(u);
    if let Some(&y) = unbrs.iter().find(|&&y| !closed[y]) {
        // u and y both outside N[w]: edge {(0,cols-1),(1,0)} becomes {(0,0),(1,cols-1)}.
        p.place(u, 0, cols - 1);
        p.place(y, 1, 0);
    } else {
        // u is adjacent to some neighbour (0,c) of w: edge {(0,c),(1,0)} becomes {(0,0),(1,c)}.
        p.place(u, 1, 0);
    }
    p
}

/// Placement for minimum degree `d < rows + cols - 2` with `cols > 2`.
fn general_placement(g: &Graph, rows: usize, cols: usize) -> Placement {
    let (w, d) = min_degree_vertex(g);
    if d + 1 < cols {
        return min_degree_placement(g, rows, cols);
    }
    debug_assert!(cols > 2 && d + 2 < rows + cols);
    let nbrs = g.neighbors(w);
    // A: cols - 2 neighbours along row 0; B: the rest down column 0.
    let (set_a, set_b) = nbrs.split_at(cols - 2);
    let mut p = Placement::new(rows, cols);
    p.place(w, 0, 0);
    for (k, &x) in set_a.iter().enumerate() {
        p.place(x, 0, k + 1);
    }
    for (k, &x) in set_b.iter().enumerate() {
        p.place(x, k + 1, 0);
    }

    let b0 = set_b[0];
    let x = g
        .neighbors(b0)
        .into_iter()
        .find(|&x| x != w)
        .expect("vertex of degree >= 2 has a neighbour besides w");
    if set_a.contains(&x) {
        // edge {(0,c),(1,0)} becomes {(0,0),(1,c)}
    } else if set_b.contains(&x) {
        // move x onto row 0; b0 is then adjacent to a row-0 neighbour of w
        p.swap(x, set_a[0]);
    } else {
        debug_assert!(!p.is_placed(x));
        p.place(x, 0, cols - 1);
    }
    p
}

/// Labeling violating the degree criterion for a graph whose minimum degree
/// is below `n / p_i - 1`.
pub fn entangling_labeling_min_degree(
    g: &Graph,
    dims: &DimVector,
    factor: usize,
) -> Result<VertexLabeling> {
    check_factor(dims, factor)?;
    check_graph(g, dims)?;
    let frame = GridFrame::new(dims, factor, true)?;
    let (rows, cols) = frame.shape();
    let (_, d) = min_degree_vertex(g);
    if d + 1 >= cols {
        return Err(Error::PreconditionUnmet(format!(
            "minimum degree {d} is not below n/p_{factor} - 1 = {}",
            cols - 1
        )));
    }
    let lab = frame.labeling(&min_degree_placement(g, rows, cols).fill());
    verify_entangling(g, &lab, &frame.split, "min-degree")?;
    Ok(lab)
}

/// Labeling violating the degree criterion for `n > 4` and minimum degree
/// below `p_i + n / p_i - 2`.
pub fn entangling_labeling_general(
    g: &Graph,
    dims: &DimVector,
    factor: usize,
) -> Result<VertexLabeling> {
    check_factor(dims, factor)?;
    check_graph(g, dims)?;
    let n = g.n();
    if n <= 4 {
        return Err(Error::PreconditionUnmet(format!("n = {n} must exceed 4")));
    }
    let p = dims.dims()[factor];
    let rest = n / p;
    let (_, d) = min_degree_vertex(g);
    if d + 2 >= p + rest {
        return Err(Error::PreconditionUnmet(format!(
            "minimum degree {d} is not below p_{factor} + n/p_{factor} - 2 = {}",
            p + rest - 2
        )));
    }
    // the construction needs more than two columns
    let frame = GridFrame::new(dims, factor, rest > 2)?;
    let (rows, cols) = frame.shape();
    let lab = frame.labeling(&general_placement(g, rows, cols).fill());
    verify_entangling(g, &lab, &frame.split, "general min-degree")?;
    Ok(lab)
}

/// Labeling violating the degree criterion for a noncomplete graph with a
/// large maximum degree, built on the complement (the degree criterion
/// holds for a graph exactly when it holds for its complement).
pub fn entangling_labeling_max_degree(
    g: &Graph,
    dims: &DimVector,
    factor: usize,
) -> Result<VertexLabeling> {
    check_factor(dims, factor)?;
    dims.check_order(g.n())?;
    g.require_unweighted()?;
    if g.is_complete() {
        return Err(Error::CompleteGraph);
    }
    let n = g.n();
    let p = dims.dims()[factor];
    let rest = n / p;
    let max = g.max_degree() as usize;
    let comp = g.complement()?;
    let lab = if max + rest > n {
        entangling_labeling_min_degree(&comp, dims, factor)?
    } else if n > 4 && max + p + rest > n + 1 {
        entangling_labeling_general(&comp, dims, factor)?
    } else {
        return Err(Error::PreconditionUnmet(format!(
            "maximum degree {max} exceeds neither n - n/p_{factor} = {} nor n - p_{factor} - n/p_{factor} + 1 = {}",
            n - rest,
            (n + 1).saturating_sub(p + rest)
        )));
    };
    let split = Bipartition::single(factor, dims.len())?;
    verify_entangling(g, &lab, &split, "max-degree")?;
    Ok(lab)
}

/// Labeling of `K_{r, n-r}` (vertices `0..r` on the first side) violating
/// the degree criterion, for `n = p1 * p2 > 4`.
pub fn bipartite_entangling_labeling(r: usize, dims: &DimVector) -> Result<VertexLabeling> {
    if dims.len() != 2 {
        return Err(Error::NotBipartiteDims(dims.len()));
    }
    let n = dims.product();
    if n <= 4 {
        return Err(Error::PreconditionUnmet(format!("n = {n} must exceed 4")));
    }
    if r == 0 || r >= n {
        return Err(Error::PreconditionUnmet(format!(
            "K_{{{r},{}}} is trivial",
            n.saturating_sub(r)
        )));
    }
    let g = Graph::complete_bipartite(r, n - r);
    // Normalize to the smaller side and to rows = smaller factor.
    let (side_a, side_b): (Vec<usize>, Vec<usize>) = if 2 * r <= n {
        ((0..r).collect(), (r..n).collect())
    } else {
        ((r..n).collect(), (0..r).collect())
    };
    let small_factor = if dims.dims()[0] <= dims.dims()[1] { 0 } else { 1 };
    let frame = GridFrame::new(dims, small_factor, true)?;
    let (rows, cols) = frame.shape();
    let a = side_a.len();

    let mut p = Placement::new(rows, cols);
    if a < rows {
        // entangled under every labeling
    } else if a == rows {
        p.place(side_a[0], 0, 1);
        for (k, &v) in side_a[1..].iter().enumerate() {
            p.place(v, k + 1, 0);
        }
        p.place(side_b[0], 0, 0);
        p.place(side_b[1], 0, 2);
    } else {
        for (k, &v) in side_a[..rows].iter().enumerate() {
            p.place(v, k, 0);
        }
        for (k, &v) in side_b[..cols - 1].iter().enumerate() {
            p.place(v, 0, k + 1);
        }
    }
    let lab = frame.labeling(&p.fill());
    verify_entangling(&g, &lab, &frame.split, "complete bipartite")?;
    Ok(lab)
}

/// Labeling of `K_{r, n-r}` putting the first side on `r / p2` whole rows,
/// which satisfies the edge-count sufficient condition.
pub fn bipartite_separable_labeling(r: usize, dims: &DimVector) -> Result<VertexLabeling> {
    if dims.len() != 2 {
        return Err(Error::NotBipartiteDims(dims.len()));
    }
    let n = dims.product();
    let p2 = dims.dims()[1];
    if r == 0 || r >= n || !r.is_multiple_of(p2) {
        return Err(Error::PreconditionUnmet(format!(
            "r = {r} must be a positive multiple of p2 = {p2} below n = {n}"
        )));
    }
    // row-major identity: vertices 0..r fill rows 0..r/p2
    let lab = VertexLabeling::identity(dims.clone());
    let g = Graph::complete_bipartite(r, n - r);
    if !edge_count_sufficient(&apply_labeling(&g, &lab)?, dims)? {
        return Err(Error::ConstructionFailed("block labeling".into()));
    }
    Ok(lab)
}

/// Which degree construction produced a labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionKind {
    MinDegree,
    General,
    MaxDegree,
}

impl ConstructionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConstructionKind::MinDegree => "min-degree",
            ConstructionKind::General => "general-min-degree",
            ConstructionKind::MaxDegree => "max-degree",
        }
    }
}

/// Tries every degree construction on every factor, in a fixed order.
pub fn construct_entangling_labeling(
    g: &Graph,
    dims: &DimVector,
) -> Option<(ConstructionKind, usize, VertexLabeling)> {
    type Builder = fn(&Graph, &DimVector, usize) -> Result<VertexLabeling>;
    let builders: [(ConstructionKind, Builder); 3] = [
        (ConstructionKind::MinDegree, entangling_labeling_min_degree),
        (ConstructionKind::General, entangling_labeling_general),
        (ConstructionKind::MaxDegree, entangling_labeling_max_degree),
    ];
    for (kind, build) in builders {
        for factor in 0..dims.len() {
            if let Ok(lab) = build(g, dims, factor) {
                return Some((kind, factor, lab));
            }
        }
    }
    None
}
