// Dense helpers shared by the operator and structure code. All matrices here
// live in whitened coordinates, where the space's inner product is the
// Euclidean one. Matrices are stored as nalgebra values; SVD and Hermitian
// eigendecompositions are delegated to faer.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub(crate) type CMatrix = DMatrix<Complex64>;
pub(crate) type CVector = DVector<Complex64>;

// Singular values below this are treated as zero even when the whole matrix
// is tiny.
const ABS_FLOOR: f64 = 1e-300;

pub(crate) fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn to_faer(mat: &CMatrix) -> Mat<Complex64> {
    Mat::from_fn(mat.nrows(), mat.ncols(), |i, j| mat[(i, j)])
}

fn from_faer(mat: faer::MatRef<'_, Complex64>) -> CMatrix {
    CMatrix::from_fn(mat.nrows(), mat.ncols(), |i, j| mat[(i, j)])
}

/// Full SVD `mat = U diag(s) Vᴴ` with `s` in descending order.
pub(crate) struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

pub(crate) fn svd(mat: &CMatrix) -> Svd {
    let (r, c) = mat.shape();
    if r == 0 || c == 0 {
        return Svd { u: CMatrix::identity(r, r), s: Vec::new(), v: CMatrix::identity(c, c) };
    }
    let f = to_faer(mat).svd().expect("SVD did not converge");
    let diag = f.S().column_vector();
    Svd {
        u: from_faer(f.U()),
        s: (0..r.min(c)).map(|i| diag[i].re).collect(),
        v: from_faer(f.V()),
    }
}

/// Largest singular value (spectral norm).
pub(crate) fn spectral_norm(mat: &CMatrix) -> f64 {
    svd(mat).s.first().copied().unwrap_or(0.0)
}

fn numerical_rank(s: &[f64], rel_tol: f64) -> usize {
    match s.first() {
        Some(&smax) if smax > ABS_FLOOR => s.iter().filter(|&&x| x > rel_tol * smax).count(),
        _ => 0,
    }
}

/// Orthonormal basis of the column space; singular values below
/// `rel_tol * σ_max` count as zero.
pub(crate) fn range_basis(mat: &CMatrix, rel_tol: f64) -> CMatrix {
    let d = svd(mat);
    let rank = numerical_rank(&d.s, rel_tol);
    d.u.columns(0, rank).into_owned()
}

pub(crate) fn rank(mat: &CMatrix, rel_tol: f64) -> usize {
    numerical_rank(&svd(mat).s, rel_tol)
}

/// Orthonormal basis of `{x : mat·x = 0}`.
pub(crate) fn null_space(mat: &CMatrix, rel_tol: f64) -> CMatrix {
    let m = mat.ncols();
    let d = svd(mat);
    let rank = numerical_rank(&d.s, rel_tol);
    d.v.columns(rank, m - rank).into_owned()
}

/// Moore-Penrose pseudo-inverse with the same cutoff as [`range_basis`].
pub(crate) fn pseudo_inverse(mat: &CMatrix, rel_tol: f64) -> CMatrix {
    let d = svd(mat);
    let rank = numerical_rank(&d.s, rel_tol);
    let mut out = CMatrix::zeros(mat.ncols(), mat.nrows());
    for i in 0..rank {
        out += d.v.column(i) * d.u.column(i).adjoint() * Complex64::new(1.0 / d.s[i], 0.0);
    }
    out
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `q`.
pub(crate) fn complement(q: &CMatrix) -> CMatrix {
    let m = q.nrows();
    let r = q.ncols();
    if r == 0 {
        return CMatrix::identity(m, m);
    }
    let proj = CMatrix::identity(m, m) - q * q.adjoint();
    // the projector has eigenvalues 0 and 1 only
    range_basis(&proj, 0.5)
}

/// Extreme eigenpairs of a Hermitian matrix: `(λ_min, v_min, λ_max, v_max)`.
pub(crate) fn hermitian_extremes(h: &CMatrix) -> (f64, CVector, f64, CVector) {
    let n = h.nrows();
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = to_faer(&sym).self_adjoint_eigen(Side::Lower).expect("eigensolver did not converge");
    // eigenvalues come in ascending order
    let values = eig.S().column_vector();
    let vectors = from_faer(eig.U());
    (values[0].re, vectors.column(0).into_owned(), values[n - 1].re, vectors.column(n - 1).into_owned())
}

/// Singular value extremes of `mat` with the matching right singular vectors.
/// For a wide matrix the smallest value is 0 with a null vector.
pub(crate) fn singular_extremes(mat: &CMatrix) -> (f64, CVector, f64, CVector) {
    let n = mat.ncols();
    let d = svd(mat);
    let smin = if mat.nrows() < n { 0.0 } else { d.s[n - 1] };
    (smin, d.v.column(n - 1).into_owned(), d.s[0], d.v.column(0).into_owned())
}

/// Cosine of the smallest principal angle between two orthonormal bases.
pub(crate) fn max_overlap(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.ncols() == 0 || b.ncols() == 0 {
        return 0.0;
    }
    spectral_norm(&(a.adjoint() * b))
}
