//! Joint decompositions of (diagonal, symmetric) matrix pairs and explicit
//! separable certificates for sums of Kronecker-product Laplacians.
//!
//! A pair `(D, A)` with `D - A` row diagonally dominant is written as
//! `D = sum mu_i v_i v_i^T`, `A = sum lambda_i v_i v_i^T` with `mu_i >= lambda_i`.
//! For `D_1 (x) ... (x) D_m - P_1 (x) ... (x) P_m` the index tuples of the
//! per-factor decompositions give rank-one product terms with weight
//! `prod mu - prod lambda`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{check_row_diagonally_dominant, DensityMatrix};
use crate::labeling::DimVector;

/// Reconstruction tolerance for decompositions and certificates.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-10;
/// Expanded certificate weights below `-NEGATIVE_WEIGHT_TOLERANCE` are rejected.
pub const NEGATIVE_WEIGHT_TOLERANCE: f64 = 1e-10;
/// Expanded terms with smaller absolute weight are dropped.
pub const DROP_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionMethod {
    /// Eigendecomposition of `A - A_2` plus unit-vector diagonal terms,
    /// pivoting on the largest row sum of `|A|_*`.
    Spectral,
    /// One pair of vectors `(e_i +- e_j)/sqrt 2` per off-diagonal entry plus
    /// unit-vector diagonal slack terms.
    Edgewise,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointDecomposition {
    pub vectors: Vec<DVector<f64>>,
    pub mu: Vec<f64>,
    pub lambda: Vec<f64>,
    pub method: DecompositionMethod,
    /// Row sum used as the eigen-part coefficient (spectral method only).
    pub pivot: Option<f64>,
}

impl JointDecomposition {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn rebuild_d(&self) -> DMatrix<f64> {
        rebuild(&self.vectors, &self.mu)
    }

    pub fn rebuild_a(&self) -> DMatrix<f64> {
        rebuild(&self.vectors, &self.lambda)
    }

    /// True when `mu_i >= |lambda_i|` for every term (up to `tol`), which
    /// makes every product weight `prod mu - prod lambda` nonnegative.
    pub fn dominates_abs(&self, tol: f64) -> bool {
        self.mu
            .iter()
            .zip(&self.lambda)
            .all(|(&m, &l)| m + tol >= l.abs())
    }
}

fn rebuild(vectors: &[DVector<f64>], coeffs: &[f64]) -> DMatrix<f64> {
    let n = vectors.first().map_or(0, |v| v.len());
    let mut out = DMatrix::zeros(n, n);
    for (v, &c) in vectors.iter().zip(coeffs) {
        if c != 0.0 {
            out.ger(c, v, v, 1.0);
        }
    }
    out
}

fn check_pair(d: &DVector<f64>, a: &DMatrix<f64>) -> Result<()> {
    let n = d.len();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.nrows(),
        });
    }
    for i in 0..n {
        for j in 0..i {
            if (a[(i, j)] - a[(j, i)]).abs() > 1e-12 {
                return Err(Error::Numerical(format!("A is not symmetric at ({i}, {j})")));
            }
        }
    }
    check_row_diagonally_dominant(&(DMatrix::from_diagonal(d) - a), 1e-12)
}

fn validate(
    jd: &JointDecomposition,
    d: &DVector<f64>,
    a: &DMatrix<f64>,
) -> Result<()> {
    let d_res = (jd.rebuild_d() - DMatrix::from_diagonal(d)).amax();
    let a_res = (jd.rebuild_a() - a).amax();
    if d_res >= RECONSTRUCTION_TOLERANCE || a_res >= RECONSTRUCTION_TOLERANCE {
        return Err(Error::Numerical(format!(
            "joint decomposition residuals D {d_res:e}, A {a_res:e}"
        )));
    }
    if let Some((i, (m, l))) = jd
        .mu
        .iter()
        .zip(&jd.lambda)
        .enumerate()
        .find(|(_, (&m, &l))| m < l - 1e-12)
    {
        return Err(Error::Numerical(format!("term {i}: mu {m} < lambda {l}")));
    }
    Ok(())
}

/// Joint decomposition through the eigenvectors of `A_1 = A - A_2`, where
/// `A_2 = diag(r_i - r_max)` and `r_i` are the row sums of `|A|_*`.
///
/// Every row of `|A_1|_*` sums to `r_max`, so by Gershgorin each eigenvalue of
/// `A_1` is at most `r_max`; those terms get `mu = r_max`. The remaining
/// diagonal terms are `(e_i, D_ii - r_max, r_i - r_max)`.
pub fn joint_decompose(d: &DVector<f64>, a: &DMatrix<f64>) -> Result<JointDecomposition> {
    check_pair(d, a)?;
    let n = d.len();
    let row_sums: Vec<f64> = (0..n)
        .map(|i| {
            a[(i, i)]
                + (0..n)
                    .filter(|&j| j != i)
                    .map(|j| a[(i, j)].abs())
                    .sum::<f64>()
        })
        .collect();
    let pivot = row_sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pivot = if n == 0 { 0.0 } else { pivot };

    let shift = DVector::from_iterator(n, row_sums.iter().map(|r| r - pivot));
    let a1 = a - DMatrix::from_diagonal(&shift);
    let eig = SymmetricEigen::new(a1);

    let mut vectors = Vec::with_capacity(2 * n);
    let mut mu = Vec::with_capacity(2 * n);
    let mut lambda = Vec::with_capacity(2 * n);
    for (k, &ev) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k).normalize();
        if ev > pivot + RECONSTRUCTION_TOLERANCE {
            return Err(Error::Numerical(format!(
                "eigenvalue {ev} exceeds the Gershgorin bound {pivot}"
            )));
        }
        vectors.push(v);
        mu.push(pivot);
        lambda.push(ev);
    }
    for i in 0..n {
        vectors.push(DVector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 }));
        mu.push(d[i] - pivot);
        lambda.push(shift[i]);
    }

    let jd = JointDecomposition {
        vectors,
        mu,
        lambda,
        method: DecompositionMethod::Spectral,
        pivot: Some(pivot),
    };
    validate(&jd, d, a)?;
    Ok(jd)
}

/// Joint decomposition built from the individual entries of `A`: each
/// off-diagonal `a_ij` contributes `(e_i + s e_j)/sqrt 2` with `(|a_ij|, |a_ij|)`
/// and `(e_i - s e_j)/sqrt 2` with `(|a_ij|, -|a_ij|)`, `s = sign(a_ij)`;
/// diagonal slack terms are `(e_i, D_ii - sum_j |a_ij|, a_ii)`.
///
/// When `A` has a nonnegative diagonal every term satisfies `mu >= |lambda|`.
pub fn joint_decompose_edgewise(d: &DVector<f64>, a: &DMatrix<f64>) -> Result<JointDecomposition> {
    check_pair(d, a)?;
    let n = d.len();
    let unit = |i: usize| DVector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 });
    let half = std::f64::consts::FRAC_1_SQRT_2;

    let mut vectors = Vec::new();
    let mut mu = Vec::new();
    let mut lambda = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = a[(i, j)];
            if w == 0.0 {
                continue;
            }
            let s = w.signum();
            let (ei, ej) = (unit(i), unit(j));
            vectors.push((&ei + &ej * s) * half);
            mu.push(w.abs());
            lambda.push(w.abs());
            vectors.push((&ei - &ej * s) * half);
            mu.push(w.abs());
            lambda.push(-w.abs());
        }
    }
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        vectors.push(unit(i));
        mu.push(d[i] - off);
        lambda.push(a[(i, i)]);
    }

    let jd = JointDecomposition {
        vectors,
        mu,
        lambda,
        method: DecompositionMethod::Edgewise,
        pivot: None,
    };
    validate(&jd, d, a)?;
    Ok(jd)
}

/// One rank-one product term `weight * (v_1 v_1^T) (x) ... (x) (v_m v_m^T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateTerm {
    pub weight: f64,
    pub factors: Vec<DVector<f64>>,
}

impl CertificateTerm {
    /// The Kronecker product `v_1 (x) ... (x) v_m`.
    pub fn product_vector(&self) -> DVector<f64> {
        self.factors
            .iter()
            .skip(1)
            .fold(self.factors[0].clone(), |acc, v| acc.kronecker(v))
    }
}

/// Nonnegative combination of product states reconstructing a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableCertificate {
    pub dims: DimVector,
    pub terms: Vec<CertificateTerm>,
    /// Decomposition method used for each factor of each Kronecker summand.
    pub methods: Vec<Vec<DecompositionMethod>>,
}

impl SeparableCertificate {
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.dims.product();
        let mut out = DMatrix::zeros(n, n);
        for t in &self.terms {
            let x = t.product_vector();
            out.ger(t.weight, &x, &x, 1.0);
        }
        out
    }

    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    pub fn min_weight(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.weight)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_doc(&self, residual: Option<f64>) -> CertificateDoc {
        CertificateDoc {
            dims: self.dims.dims().to_vec(),
            terms: self
                .terms
                .iter()
                .map(|t| TermDoc {
                    weight: t.weight,
                    factors: t.factors.iter().map(|v| v.iter().copied().collect()).collect(),
                })
                .collect(),
            residual,
            methods: self.methods.clone(),
        }
    }

    pub fn from_doc(doc: &CertificateDoc) -> Result<Self> {
        let dims = DimVector::new(doc.dims.clone())?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in &doc.terms {
            if t.factors.len() != dims.len() {
                return Err(Error::DimensionMismatch {
                    expected: dims.len(),
                    got: t.factors.len(),
                });
            }
            for (f, &p) in t.factors.iter().zip(dims.dims()) {
                if f.len() != p {
                    return Err(Error::DimensionMismatch {
                        expected: p,
                        got: f.len(),
                    });
                }
            }
            terms.push(CertificateTerm {
                weight: t.weight,
                factors: t.factors.iter().map(|f| DVector::from_vec(f.clone())).collect(),
            });
        }
        Ok(SeparableCertificate {
            dims,
            terms,
            methods: doc.methods.clone(),
        })
    }
}

/// Certificate JSON: `{"dims", "terms": [{"weight", "factors"}], "residual"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub dims: Vec<usize>,
    pub terms: Vec<TermDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub methods: Vec<Vec<DecompositionMethod>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub weight: f64,
    pub factors: Vec<Vec<f64>>,
}

/// One Kronecker summand `D_1 (x) ... (x) D_m - P_1 (x) ... (x) P_m`, given
/// as per-factor pairs `(diagonal of D_k, P_k)`.
pub type KronTerm = Vec<(DVector<f64>, DMatrix<f64>)>;

/// Dense matrix `sum_j (D^j_1 (x) ... (x) D^j_m - P^j_1 (x) ... (x) P^j_m)`.
pub fn assemble_kron_sum(terms: &[KronTerm]) -> Result<DMatrix<f64>> {
    let dims = term_dims(terms)?;
    let n: usize = dims.iter().product();
    let mut out = DMatrix::zeros(n, n);
    for term in terms {
        let d = term
            .iter()
            .map(|(d, _)| DMatrix::from_diagonal(d))
            .reduce(|acc, m| acc.kronecker(&m))
            .expect("nonempty term");
        let p = term
            .iter()
            .map(|(_, p)| p.clone())
            .reduce(|acc, m| acc.kronecker(&m))
            .expect("nonempty term");
        out += d - p;
    }
    Ok(out)
}

fn term_dims(terms: &[KronTerm]) -> Result<Vec<usize>> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidDims("no Kronecker terms".into()))?;
    let dims: Vec<usize> = first.iter().map(|(d, _)| d.len()).collect();
    if dims.is_empty() {
        return Err(Error::InvalidDims("Kronecker term without factors".into()));
    }
    for term in terms {
        let these: Vec<usize> = term.iter().map(|(d, _)| d.len()).collect();
        if these != dims {
            return Err(Error::DimensionMismatch {
                expected: dims.len(),
                got: these.len(),
            });
        }
    }
    Ok(dims)
}

/// Expands one Kronecker summand over all index tuples of the per-factor
/// decompositions. Returns raw (unnormalized) terms.
fn expand(decomps: &[JointDecomposition]) -> Vec<CertificateTerm> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; decomps.len()];
    if decomps.iter().any(|d| d.is_empty()) {
        return out;
    }
    loop {
        let prod_mu: f64 = idx.iter().zip(decomps).map(|(&i, d)| d.mu[i]).product();
        let prod_lambda: f64 = idx.iter().zip(decomps).map(|(&i, d)| d.lambda[i]).product();
        let weight = prod_mu - prod_lambda;
        if weight.abs() >= DROP_TOLERANCE {
            out.push(CertificateTerm {
                weight,
                factors: idx
                    .iter()
                    .zip(decomps)
                    .map(|(&i, d)| d.vectors[i].clone())
                    .collect(),
            });
        }
        // odometer
        let mut k = decomps.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < decomps[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn most_negative(terms: &[CertificateTerm]) -> Option<f64> {
    terms
        .iter()
        .map(|t| t.weight)
        .filter(|&w| w < -NEGATIVE_WEIGHT_TOLERANCE)
        .reduce(f64::min)
}

/// Separable certificate for `A / tr(A)` with
/// `A = sum_j D^j_1 (x) ... (x) D^j_m - P^j_1 (x) ... (x) P^j_m`.
///
/// Each factor pair is first decomposed with [`joint_decompose`]. If a
/// summand then expands to a negative weight, the factors whose spectral
/// decomposition has some `mu < |lambda|` are redone with
/// [`joint_decompose_edgewise`]. A weight that stays negative is reported as
/// [`Error::NegativeWeight`]; the result is validated against the assembled
/// matrix before it is returned.
pub fn kron_separable_certificate(terms: &[KronTerm]) -> Result<SeparableCertificate> {
    let dims = DimVector::new(term_dims(terms)?)?;
    let target = assemble_kron_sum(terms)?;
    let trace = target.trace();
    if trace.abs() < DROP_TOLERANCE {
        return Err(Error::ZeroTrace);
    }

    let mut raw = Vec::new();
    let mut methods = Vec::with_capacity(terms.len());
    for term in terms {
        let mut decomps = term
            .iter()
            .map(|(d, p)| joint_decompose(d, p))
            .collect::<Result<Vec<_>>>()?;
        let mut expanded = expand(&decomps);
        if most_negative(&expanded).is_some() && decomps.len() > 1 {
            for (k, (d, p)) in term.iter().enumerate() {
                if !decomps[k].dominates_abs(1e-12) {
                    decomps[k] = joint_decompose_edgewise(d, p)?;
                }
            }
            expanded = expand(&decomps);
        }
        if let Some(weight) = most_negative(&expanded) {
            return Err(Error::NegativeWeight { weight });
        }
        methods.push(decomps.iter().map(|d| d.method).collect());
        raw.extend(expanded);
    }

    for t in &mut raw {
        t.weight /= trace;
    }
    let cert = SeparableCertificate {
        dims,
        terms: raw,
        methods,
    };
    let residual = (cert.matrix() - &target / trace).amax();
    if residual >= RECONSTRUCTION_TOLERANCE {
        return Err(Error::CertificateMismatch { residual });
    }
    Ok(cert)
}

/// Diagnostics comparing a certificate with a target density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    /// Largest absolute entry of `sum weight (x)(v v^T) - target`.
    pub residual: f64,
    pub min_weight: f64,
    pub weight_sum: f64,
}

impl CertificateCheck {
    /// Residual below 1e-10, weights at least -1e-12, weights summing to 1 within 1e-10.
    pub fn is_valid(&self) -> bool {
        self.residual < RECONSTRUCTION_TOLERANCE
            && self.min_weight >= -1e-12
            && (self.weight_sum - 1.0).abs() < RECONSTRUCTION_TOLERANCE
    }
}

pub fn verify_certificate(cert: &SeparableCertificate, target: &DensityMatrix) -> CertificateCheck {
    let residual = if target.dim() == cert.dims.product() {
        (cert.matrix() - target.matrix()).amax()
    } else {
        f64::INFINITY
    };
    CertificateCheck {
        residual,
        min_weight: cert.min_weight(),
        weight_sum: cert.weight_sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{laplacian_density, normalize_density, Graph};
    use nalgebra::dmatrix;

    fn dvec(v: &[f64]) -> DVector<f64> {
        DVector::from_vec(v.to_vec())
    }

    #[test]
    fn diagonal_only_pair() {
        let jd = joint_decompose(&dvec(&[3.0, 5.0]), &DMatrix::zeros(2, 2)).unwrap();
        // eigen part of the zero matrix has mu = lambda = 0
        assert_eq!(jd.pivot, Some(0.0));
        assert_eq!(&jd.mu[2..], &[3.0, 5.0]);
        assert_eq!(&jd.lambda[2..], &[0.0, 0.0]);
        assert_eq!(jd.rebuild_d(), DMatrix::from_diagonal(&dvec(&[3.0, 5.0])));
    }

    #[test]
    fn single_edge_pair() {
        let a = dmatrix![0.0, 1.0; 1.0, 0.0];
        let jd = joint_decompose(&dvec(&[1.0, 1.0]), &a).unwrap();
        assert_eq!(jd.pivot, Some(1.0));
        let mut eig: Vec<(f64, f64)> = jd.lambda[..2]
            .iter()
            .zip(&jd.vectors[..2])
            .map(|(&l, v)| (l, v[0] * v[1]))
            .collect();
        eig.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert!((eig[0].0 + 1.0).abs() < 1e-14 && (eig[0].1 + 0.5).abs() < 1e-14);
        assert!((eig[1].0 - 1.0).abs() < 1e-14 && (eig[1].1 - 0.5).abs() < 1e-14);
        assert!(jd.mu.iter().zip(&jd.lambda).all(|(m, l)| m >= l));
        // diagonal part vanishes
        assert_eq!(&jd.mu[2..], &[0.0, 0.0]);
    }

    #[test]
    fn rejects_non_dominant() {
        let a = dmatrix![0.0, 1.0; 1.0, 0.0];
        assert!(matches!(
            joint_decompose(&dvec(&[0.5, 1.0]), &a),
            Err(Error::NotDiagonallyDominant { row: 0, .. })
        ));
    }

    #[test]
    fn edgewise_dominates() {
        let g = Graph::path(3);
        let d = g.adjacency().column_sum();
        let jd = joint_decompose_edgewise(&d, g.adjacency()).unwrap();
        assert!(jd.dominates_abs(0.0));
        let spectral = joint_decompose(&d, g.adjacency()).unwrap();
        assert!(!spectral.dominates_abs(1e-12));
    }

    #[test]
    fn single_factor_certificate_is_normalized_pair() {
        let g = Graph::path(4);
        let d = g.adjacency().column_sum();
        let cert = kron_separable_certificate(&[vec![(d, g.adjacency().clone())]]).unwrap();
        assert_eq!(cert.methods, vec![vec![DecompositionMethod::Spectral]]);
        let target = laplacian_density(&g).unwrap();
        let check = verify_certificate(&cert, &target);
        assert!(check.is_valid(), "{check:?}");
    }

    #[test]
    fn identity_product_certificate() {
        let e = |i: usize| DVector::from_fn(2, |k, _| if k == i { 1.0 } else { 0.0 });
        let terms = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| CertificateTerm {
                weight: 0.25,
                factors: vec![e(i), e(j)],
            })
            .collect();
        let cert = SeparableCertificate {
            dims: DimVector::new(vec![2, 2]).unwrap(),
            terms,
            methods: vec![],
        };
        let target = DensityMatrix::new(DMatrix::identity(4, 4) / 4.0).unwrap();
        assert!(verify_certificate(&cert, &target).residual < 1e-12);
    }

    #[test]
    fn perturbed_weight_shows_in_residual() {
        let k2 = Graph::complete(2);
        let pair = (k2.adjacency().column_sum(), k2.adjacency().clone());
        let cert = kron_separable_certificate(&[vec![pair.clone(), pair]]).unwrap();
        let target = normalize_density(&assemble_kron_sum(&[vec![
            (k2.adjacency().column_sum(), k2.adjacency().clone()),
            (k2.adjacency().column_sum(), k2.adjacency().clone()),
        ]])
        .unwrap())
        .unwrap();
        let mut bad = cert.clone();
        bad.terms[0].weight += 1e-3;
        let expected = {
            let x = bad.terms[0].product_vector();
            1e-3 * (&x * x.transpose()).amax()
        };
        let check = verify_certificate(&bad, &target);
        assert!((check.residual - expected).abs() < 1e-12);
        assert!(!check.is_valid());
    }

    #[test]
    fn zero_trace_rejected() {
        let z = (DVector::zeros(2), DMatrix::zeros(2, 2));
        assert_eq!(
            kron_separable_certificate(&[vec![z.clone(), z]]),
            Err(Error::ZeroTrace)
        );
    }

    #[test]
    fn doc_round_trip() {
        let k2 = Graph::complete(2);
        let pair = (k2.adjacency().column_sum(), k2.adjacency().clone());
        let cert = kron_separable_certificate(&[vec![pair.clone(), pair]]).unwrap();
        let json = serde_json::to_string(&cert.to_doc(Some(0.0))).unwrap();
        let back: CertificateDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(SeparableCertificate::from_doc(&back).unwrap(), cert);
    }
}
