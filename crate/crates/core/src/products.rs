//! The 256 binary graph products. A product is a disjunction of the eight
//! conditions R1..R8 on a vertex pair `{(u,v),(w,y)}`; condition `Rk`
//! contributes the Kronecker term `T_k = X (x) Y` with `X` drawn from
//! `{G, I, J-I-G}` and `Y` from `{H, I, J-I-H}`.

use nalgebra::{DMatrix, DVector};

use crate::decomposition::{kron_separable_certificate, KronTerm, SeparableCertificate};
use crate::error::{Error, Result};
use crate::graph::{row_sum_diag, Graph};

/// Which per-factor matrix a Kronecker term uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorKind {
    /// Adjacency matrix of the factor ("adj").
    Adjacency,
    /// Identity ("=").
    Identity,
    /// Complement adjacency J - I - A ("not adj").
    Complement,
}

/// Left and right factor kinds of R1..R8.
pub const CONDITIONS: [(FactorKind, FactorKind); 8] = {
    use FactorKind::*;
    [
        (Adjacency, Adjacency),
        (Adjacency, Identity),
        (Adjacency, Complement),
        (Identity, Adjacency),
        (Identity, Complement),
        (Complement, Adjacency),
        (Complement, Identity),
        (Complement, Complement),
    ]
};

/// Subset of {R1, ..., R8}; bit `k - 1` stands for `Rk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductMask(pub u8);

impl ProductMask {
    pub const EMPTY: ProductMask = ProductMask(0);
    pub const FULL: ProductMask = ProductMask(0xff);

    pub fn from_conditions(conds: &[usize]) -> Result<Self> {
        let mut bits = 0u8;
        for &k in conds {
            if !(1..=8).contains(&k) {
                return Err(Error::UnknownName(format!("R{k}")));
            }
            bits |= 1 << (k - 1);
        }
        Ok(ProductMask(bits))
    }

    /// Condition numbers (1-based) in the mask.
    pub fn conditions(self) -> Vec<usize> {
        (1..=8).filter(|&k| self.contains(k)).collect()
    }

    pub fn contains(self, k: usize) -> bool {
        (1..=8).contains(&k) && self.0 & (1 << (k - 1)) != 0
    }

    pub fn complement(self) -> Self {
        complement_mask(self)
    }

    pub fn all() -> impl Iterator<Item = ProductMask> {
        (0..=255u8).map(ProductMask)
    }

    /// Accepts a product name, a list like "R1,R2,R4", or an integer 0-255.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(m) = named_mask(s) {
            return Ok(m);
        }
        if let Ok(v) = s.parse::<u8>() {
            return Ok(ProductMask(v));
        }
        let conds = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.strip_prefix(['R', 'r'])
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| Error::UnknownName(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        ProductMask::from_conditions(&conds)
    }
}

impl std::fmt::Display for ProductMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = self.conditions().iter().map(|k| format!("R{k}")).collect();
        if names.is_empty() {
            write!(f, "{{}}")
        } else {
            write!(f, "{}", names.join(","))
        }
    }
}

pub fn named_mask(name: &str) -> Result<ProductMask> {
    let conds: &[usize] = match name.to_ascii_lowercase().as_str() {
        "tensor" | "categorical" | "direct" | "cardinal" => &[1],
        "strong" => &[1, 2, 4],
        "cartesian" => &[2, 4],
        "lexicographic" | "lexicographical" => &[1, 2, 3, 4],
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    ProductMask::from_conditions(conds)
}

pub fn complement_mask(mask: ProductMask) -> ProductMask {
    ProductMask(!mask.0)
}

fn factor_matrix(g: &Graph, kind: FactorKind) -> DMatrix<f64> {
    let n = g.n();
    match kind {
        FactorKind::Adjacency => g.adjacency().clone(),
        FactorKind::Identity => DMatrix::identity(n, n),
        FactorKind::Complement => {
            DMatrix::from_element(n, n, 1.0) - DMatrix::identity(n, n) - g.adjacency()
        }
    }
}

/// Adjacency of the product `g <> h` for `mask`; vertex `(u, v)` is `u * h.n() + v`.
pub fn product_adjacency(mask: ProductMask, g: &Graph, h: &Graph) -> Result<Graph> {
    g.require_unweighted()?;
    h.require_unweighted()?;
    let n = g.n() * h.n();
    let mut adj = DMatrix::zeros(n, n);
    for k in mask.conditions() {
        let (left, right) = CONDITIONS[k - 1];
        adj += factor_matrix(g, left).kronecker(&factor_matrix(h, right));
    }
    Graph::from_adjacency(adj)
}

/// Left fold `((g1 <> g2) <> g3) <> ...` with one mask at every level.
pub fn product_chain(mask: ProductMask, graphs: &[Graph]) -> Result<Graph> {
    if graphs.len() < 2 {
        return Err(Error::InvalidDims(format!(
            "a product needs at least two graphs, got {}",
            graphs.len()
        )));
    }
    graphs[1..]
        .iter()
        .try_fold(graphs[0].clone(), |acc, g| product_adjacency(mask, &acc, g))
}

/// Expands the adjacency of a left-folded product chain into Kronecker
/// terms over the original factors. The complement of an inner product
/// with mask `M` is the inner product with the complementary mask.
pub fn chain_kron_kinds(mask: ProductMask, m: usize) -> Vec<Vec<FactorKind>> {
    assert!(m >= 2, "a product chain has at least two factors");
    chain_terms(m, mask, mask)
}

fn chain_terms(m: usize, top: ProductMask, inner: ProductMask) -> Vec<Vec<FactorKind>> {
    let mut out = Vec::new();
    for k in top.conditions() {
        let (left, right) = CONDITIONS[k - 1];
        for mut prefix in kind_terms(m - 1, left, inner) {
            prefix.push(right);
            out.push(prefix);
        }
    }
    out
}

fn kind_terms(m: usize, kind: FactorKind, inner: ProductMask) -> Vec<Vec<FactorKind>> {
    if m == 1 {
        return vec![vec![kind]];
    }
    match kind {
        FactorKind::Identity => vec![vec![FactorKind::Identity; m]],
        FactorKind::Adjacency => chain_terms(m, inner, inner),
        FactorKind::Complement => chain_terms(m, complement_mask(inner), inner),
    }
}

/// Kronecker terms `(r(T_k), T_k)` per factor for the Laplacian of a product chain.
pub fn product_kron_terms(mask: ProductMask, graphs: &[Graph]) -> Result<Vec<KronTerm>> {
    for g in graphs {
        g.require_unweighted()?;
    }
    Ok(chain_kron_kinds(mask, graphs.len())
        .into_iter()
        .map(|kinds| {
            kinds
                .iter()
                .zip(graphs)
                .map(|(&kind, g)| {
                    let t = factor_matrix(g, kind);
                    let d: DVector<f64> = row_sum_diag(&t).diagonal();
                    (d, t)
                })
                .collect()
        })
        .collect())
}

/// Separable certificate for the normalized Laplacian of `product_chain(mask, graphs)`.
///
/// The product adjacency is `B = sum_j (x)_i T^j_i` with nonnegative factors, so
/// its degree matrix is `sum_j (x)_i r(T^j_i)` and the Laplacian is a sum of
/// `D (x) ... - T (x) ...` terms handled by [`kron_separable_certificate`].
pub fn product_laplacian_certificate(
    mask: ProductMask,
    graphs: &[Graph],
) -> Result<SeparableCertificate> {
    let product = product_chain(mask, graphs)?;
    if product.is_trivial() {
        return Err(Error::ZeroTrace);
    }
    let terms = product_kron_terms(mask, graphs)?;
    kron_separable_certificate(&terms)
}
