//! Canonical subspaces of V = F_q^n: RREF-canonical bases, enumeration by
//! pivot-column parametrization, degeneracy against coordinate hyperplanes,
//! and the lattice operations (sum, intersection, containment).

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::MatrixGf;

/// Instance parameters (n, k) over a field. The recovery entry points
/// additionally require 1 < k < n-1.
#[derive(Debug, Clone)]
pub struct Ambient {
    n: usize,
    k: usize,
    field: Field,
}

impl Ambient {
    pub fn new(n: usize, k: usize, q: u64) -> Result<Ambient> {
        let field = Field::new(q)?;
        if n < 2 || n > 12 {
            return Err(Error::InvalidInput(format!("ambient dimension n={n} out of range 2..=12")));
        }
        if k == 0 || k >= n {
            return Err(Error::InvalidInput(format!("working dimension k={k} must satisfy 0 < k < n")));
        }
        Ok(Ambient { n, k, field })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u8 {
        self.field.q()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The standing assumption for every recovery construction.
    pub fn require_recovery_range(&self) -> Result<()> {
        if self.k <= 1 || self.k >= self.n - 1 {
            return Err(Error::Refused(format!(
                "recovery requires 1 < k < n-1; got n={}, k={}",
                self.n, self.k
            )));
        }
        Ok(())
    }

    /// Ambient with the same n and field but a different working dimension.
    pub fn with_k(&self, k: usize) -> Result<Ambient> {
        Ambient::new(self.n, k, u64::from(self.q()))
    }
}

/// A subspace of F_q^n held as its unique RREF basis (full rank, no zero
/// rows), so subspace equality is bitwise matrix equality. The zero
/// subspace is the 0 x n matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceBasis {
    mat: MatrixGf,
}

impl SubspaceBasis {
    /// Canonicalizes an arbitrary spanning matrix.
    pub fn from_matrix(field: &Field, m: &MatrixGf) -> Result<SubspaceBasis> {
        let r = m.rref(field)?;
        Ok(SubspaceBasis {
            mat: r.matrix_trimmed(),
        })
    }

    pub fn from_rows(field: &Field, n: usize, rows: &[Vec<u8>]) -> Result<SubspaceBasis> {
        let m = MatrixGf::from_rows(field.q(), n, rows)?;
        SubspaceBasis::from_matrix(field, &m)
    }

    /// Trusted constructor for matrices already in RREF with no zero rows
    /// (the enumerators build these directly).
    fn from_canonical(mat: MatrixGf) -> SubspaceBasis {
        SubspaceBasis { mat }
    }

    pub fn zero(q: u8, n: usize) -> SubspaceBasis {
        SubspaceBasis {
            mat: MatrixGf::zero(q, 0, n),
        }
    }

    pub fn full(q: u8, n: usize) -> SubspaceBasis {
        SubspaceBasis {
            mat: MatrixGf::identity(q, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.mat.cols()
    }

    pub fn q(&self) -> u8 {
        self.mat.q()
    }

    pub fn matrix(&self) -> &MatrixGf {
        &self.mat
    }

    pub fn text(&self) -> String {
        self.mat.to_text()
    }

    pub fn from_text(field: &Field, n: usize, text: &str) -> Result<SubspaceBasis> {
        let m = MatrixGf::from_text(field.q(), n, text)?;
        SubspaceBasis::from_matrix(field, &m)
    }

    /// C_i = {x : x_i = 0}, the kernel of the i-th coordinate functional
    /// (1-based i).
    pub fn coordinate_hyperplane(field: &Field, n: usize, i: usize) -> Result<SubspaceBasis> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let rows: Vec<Vec<u8>> = (0..n)
            .filter(|&r| r != i - 1)
            .map(|r| {
                let mut v = vec![0u8; n];
                v[r] = 1;
                v
            })
            .collect();
        let m = MatrixGf::from_rows(field.q(), n, &rows)?;
        Ok(SubspaceBasis::from_canonical(m))
    }

    /// All 1-based i with S contained in C_i; on the canonical basis these
    /// are exactly the all-zero columns.
    pub fn degeneracy_witness(&self) -> Vec<usize> {
        (0..self.ambient_dim())
            .filter(|&c| self.mat.col_is_zero(c))
            .map(|c| c + 1)
            .collect()
    }

    pub fn is_degenerate(&self) -> bool {
        (0..self.ambient_dim()).any(|c| self.mat.col_is_zero(c))
    }

    fn check_compatible(&self, other: &SubspaceBasis) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() || self.q() != other.q() {
            return Err(Error::AmbientMismatch(format!(
                "F_{}^{} vs F_{}^{}",
                self.q(),
                self.ambient_dim(),
                other.q(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    /// True iff other is contained in self.
    pub fn contains(&self, field: &Field, other: &SubspaceBasis) -> Result<bool> {
        self.check_compatible(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        if other.dim() == 0 {
            return Ok(true);
        }
        Ok(self.mat.stack(&other.mat)?.rank(field)? == self.dim())
    }

    pub fn contains_vector(&self, field: &Field, v: &[u8]) -> Result<bool> {
        let vm = MatrixGf::from_rows(self.q(), self.ambient_dim(), &[v.to_vec()])?;
        if vm.col_is_zero(0) && v.iter().all(|&x| x == 0) {
            return Ok(true);
        }
        Ok(self.mat.stack(&vm)?.rank(field)? == self.dim())
    }

    pub fn sum(field: &Field, a: &SubspaceBasis, b: &SubspaceBasis) -> Result<SubspaceBasis> {
        a.check_compatible(b)?;
        SubspaceBasis::from_matrix(field, &a.mat.stack(&b.mat)?)
    }

    pub fn dim_sum(field: &Field, a: &SubspaceBasis, b: &SubspaceBasis) -> Result<usize> {
        a.check_compatible(b)?;
        a.mat.stack(&b.mat)?.rank(field)
    }

    /// By the modular identity dim(A) + dim(B) - dim(A+B).
    pub fn dim_intersection(field: &Field, a: &SubspaceBasis, b: &SubspaceBasis) -> Result<usize> {
        Ok(a.dim() + b.dim() - SubspaceBasis::dim_sum(field, a, b)?)
    }

    /// Canonical basis of A intersect B, from the left kernel of the
    /// stacked bases: z = (x, y) with x A + y B = 0 gives the intersection
    /// vector x A.
    pub fn intersect(field: &Field, a: &SubspaceBasis, b: &SubspaceBasis) -> Result<SubspaceBasis> {
        a.check_compatible(b)?;
        if a.dim() == 0 || b.dim() == 0 {
            return Ok(SubspaceBasis::zero(a.q(), a.ambient_dim()));
        }
        let stacked = a.mat.stack(&b.mat)?;
        let left_kernel = stacked.transpose().nullspace(field)?;
        let mut rows = Vec::with_capacity(left_kernel.rows());
        for r in 0..left_kernel.rows() {
            let z = left_kernel.row(r);
            let x = MatrixGf::from_rows(a.q(), a.dim(), &[z[..a.dim()].to_vec()])?;
            let v = x.mat_mul(field, &a.mat)?;
            rows.push(v.row(0).to_vec());
        }
        let m = MatrixGf::from_rows(a.q(), a.ambient_dim(), &rows)?;
        let result = SubspaceBasis::from_matrix(field, &m)?;
        debug_assert_eq!(
            result.dim(),
            SubspaceBasis::dim_intersection(field, a, b).unwrap()
        );
        Ok(result)
    }

    /// All d-dimensional superspaces of self for dim < d <= n; empty
    /// otherwise. They correspond to the (d - dim)-subspaces of the
    /// quotient spanned by the standard vectors at the non-pivot columns.
    pub fn superspaces(&self, field: &Field, d: usize) -> Result<Vec<SubspaceBasis>> {
        let n = self.ambient_dim();
        if d <= self.dim() || d > n {
            return Ok(Vec::new());
        }
        // The standard vectors at the non-pivot columns complement the
        // row space, so superspaces correspond to subspaces of their span.
        let pivots = leading_columns(&self.mat);
        let complement: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let small = enumerate_subspaces(field, complement.len(), d - self.dim(), u64::MAX)?;
        let mut out = Vec::with_capacity(small.len());
        for w in &small {
            let mut rows: Vec<Vec<u8>> = Vec::with_capacity(self.dim() + w.dim());
            for r in 0..self.dim() {
                rows.push(self.mat.row(r).to_vec());
            }
            for r in 0..w.dim() {
                let mut v = vec![0u8; n];
                for (j, &c) in complement.iter().enumerate() {
                    v[c] = w.mat.get(r, j);
                }
                rows.push(v);
            }
            let s = SubspaceBasis::from_rows(field, n, &rows)?;
            debug_assert_eq!(s.dim(), d);
            out.push(s);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// All d-dimensional subspaces of self for 0 <= d < dim; empty
    /// otherwise. Enumerated in coordinates with respect to the canonical
    /// basis and lifted back.
    pub fn subspaces_of(&self, field: &Field, d: usize) -> Result<Vec<SubspaceBasis>> {
        if d >= self.dim() {
            return Ok(Vec::new());
        }
        if d == 0 {
            return Ok(vec![SubspaceBasis::zero(self.q(), self.ambient_dim())]);
        }
        let small = enumerate_subspaces(field, self.dim(), d, u64::MAX)?;
        let mut out = Vec::with_capacity(small.len());
        for w in &small {
            let lifted = w.mat.mat_mul(field, &self.mat)?;
            let s = SubspaceBasis::from_matrix(field, &lifted)?;
            debug_assert_eq!(s.dim(), d);
            out.push(s);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// The (dim X + 1)-dimensional subspaces A with X ⊂ A ⊂ Y, i.e. the
    /// pencil between X and Y; there are [dim Y - dim X]_q of them.
    pub fn between(field: &Field, x: &SubspaceBasis, y: &SubspaceBasis) -> Result<Vec<SubspaceBasis>> {
        x.check_compatible(y)?;
        debug_assert!(y.contains(field, x)?);
        let inner = x.coords_in(field, y)?;
        let inner_basis = SubspaceBasis::from_matrix(field, &inner)?;
        let lifted_exts = inner_basis.superspaces(field, inner_basis.dim() + 1)?;
        let mut out = Vec::with_capacity(lifted_exts.len());
        for ext in &lifted_exts {
            let lifted = ext.mat.mat_mul(field, &y.mat)?;
            out.push(SubspaceBasis::from_matrix(field, &lifted)?);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Coordinates of self's rows with respect to y's canonical basis:
    /// for an RREF basis, the coordinate vector of v is v restricted to
    /// the pivot columns.
    fn coords_in(&self, _field: &Field, y: &SubspaceBasis) -> Result<MatrixGf> {
        let pivots = leading_columns(&y.mat);
        let rows: Vec<Vec<u8>> = (0..self.dim())
            .map(|r| pivots.iter().map(|&c| self.mat.get(r, c)).collect())
            .collect();
        MatrixGf::from_rows(self.q(), y.dim(), &rows)
    }
}

/// Leading (pivot) columns of a matrix already in RREF.
fn leading_columns(m: &MatrixGf) -> Vec<usize> {
    (0..m.rows())
        .filter_map(|r| (0..m.cols()).find(|&c| m.get(r, c) != 0))
        .collect()
}

/// [t]_q = (q^t - 1)/(q - 1), the number of points of PG(t-1, q).
pub fn count_points(t: u32, q: u64) -> u128 {
    let mut total = 0u128;
    let mut power = 1u128;
    for _ in 0..t {
        total += power;
        power *= q as u128;
    }
    total
}

/// Gaussian binomial [m choose d]_q via the Pascal-type recurrence,
/// exact in u128 for the sizes used here.
pub fn gaussian_binomial(m: u32, d: u32, q: u64) -> u128 {
    if d > m {
        return 0;
    }
    if d == 0 || d == m {
        return 1;
    }
    gaussian_binomial(m - 1, d - 1, q) + (q as u128).pow(d) * gaussian_binomial(m - 1, d, q)
}

/// Every d-dimensional subspace of F_q^n exactly once, sorted by the
/// row-major entry order of the canonical matrix. Refuses with the exact
/// count when it exceeds `cap`.
pub fn enumerate_subspaces(
    field: &Field,
    n: usize,
    d: usize,
    cap: u64,
) -> Result<Vec<SubspaceBasis>> {
    if d > n {
        return Ok(Vec::new());
    }
    let count = gaussian_binomial(n as u32, d as u32, u64::from(field.q()));
    if count > u128::from(cap) {
        return Err(Error::SubspaceCapExceeded { count, cap });
    }
    if d == 0 {
        return Ok(vec![SubspaceBasis::zero(field.q(), n)]);
    }
    let q = field.q();
    let mut out = Vec::with_capacity(count as usize);
    for pivot_set in (0..n).combinations(d) {
        // Free positions of the RREF parametrization: row i may hold an
        // arbitrary value at any non-pivot column right of its pivot.
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (i, &p) in pivot_set.iter().enumerate() {
            for c in (p + 1)..n {
                if !pivot_set.contains(&c) {
                    free.push((i, c));
                }
            }
        }
        let mut fill = vec![0u8; free.len()];
        loop {
            let mut entries = vec![0u8; d * n];
            for (i, &p) in pivot_set.iter().enumerate() {
                entries[i * n + p] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(fill.iter()) {
                entries[r * n + c] = v;
            }
            let m = MatrixGf::new(q, d, n, entries)?;
            out.push(SubspaceBasis::from_canonical(m));
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == fill.len() {
                    break;
                }
                fill[pos] += 1;
                if fill[pos] < q {
                    break;
                }
                fill[pos] = 0;
                pos += 1;
            }
            if pos == fill.len() {
                break;
            }
        }
    }
    debug_assert_eq!(out.len() as u128, count);
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn coordinate_hyperplane_shape() {
        let f3 = f(3);
        let c3 = SubspaceBasis::coordinate_hyperplane(&f3, 4, 3).unwrap();
        assert_eq!(c3.dim(), 3);
        assert_eq!(c3.text(), "1000;0100;0001");
        assert!(SubspaceBasis::coordinate_hyperplane(&f3, 4, 0).is_err());
        assert!(SubspaceBasis::coordinate_hyperplane(&f3, 4, 5).is_err());
        for i in 1..=4 {
            for j in 1..=4 {
                if i != j {
                    let ci = SubspaceBasis::coordinate_hyperplane(&f3, 4, i).unwrap();
                    let cj = SubspaceBasis::coordinate_hyperplane(&f3, 4, j).unwrap();
                    assert_eq!(SubspaceBasis::dim_intersection(&f3, &ci, &cj).unwrap(), 2);
                }
            }
        }
    }

    #[test]
    fn degeneracy_witnesses() {
        let f3 = f(3);
        let s = SubspaceBasis::from_rows(&f3, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert!(s.is_degenerate());
        assert_eq!(s.degeneracy_witness(), vec![3, 4]);
        let t =
            SubspaceBasis::from_rows(&f3, 4, &[vec![1, 0, 1, 1], vec![0, 1, 1, 2]]).unwrap();
        assert!(!t.is_degenerate());
        assert!(t.degeneracy_witness().is_empty());
    }

    #[test]
    fn degenerate_hyperplane_is_coordinate() {
        // a hyperplane is degenerate iff it equals some C_i
        let f3 = f(3);
        for h in enumerate_subspaces(&f3, 4, 3, u64::MAX).unwrap() {
            let is_ci = (1..=4).any(|i| {
                SubspaceBasis::coordinate_hyperplane(&f3, 4, i).unwrap() == h
            });
            assert_eq!(h.is_degenerate(), is_ci);
        }
    }

    #[test]
    fn enumeration_counts() {
        let f2 = f(2);
        assert_eq!(enumerate_subspaces(&f2, 4, 2, u64::MAX).unwrap().len(), 35);
        let f3 = f(3);
        assert_eq!(enumerate_subspaces(&f3, 4, 2, u64::MAX).unwrap().len(), 130);
        assert_eq!(enumerate_subspaces(&f3, 4, 4, u64::MAX).unwrap().len(), 1);
        assert_eq!(enumerate_subspaces(&f3, 4, 0, u64::MAX).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_count_equals_brute_force_orbits() {
        // independent oracle: spans of all independent pairs in F_2^4
        let f2 = f(2);
        let mut seen = std::collections::BTreeSet::new();
        for a in 1..16u8 {
            for b in 1..16u8 {
                if a == b {
                    continue;
                }
                let va: Vec<u8> = (0..4).map(|i| (a >> i) & 1).collect();
                let vb: Vec<u8> = (0..4).map(|i| (b >> i) & 1).collect();
                let s = SubspaceBasis::from_rows(&f2, 4, &[va, vb]).unwrap();
                if s.dim() == 2 {
                    seen.insert(s);
                }
            }
        }
        assert_eq!(seen.len(), 35);
    }

    #[test]
    fn enumeration_cap() {
        let f3 = f(3);
        match enumerate_subspaces(&f3, 4, 2, 10) {
            Err(Error::SubspaceCapExceeded { count, cap }) => {
                assert_eq!(count, 130);
                assert_eq!(cap, 10);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn count_points_values() {
        assert_eq!(count_points(3, 2), 7);
        assert_eq!(count_points(3, 3), 13);
        for q in [2u64, 3, 4, 5] {
            assert_eq!(count_points(1, q), 1);
        }
    }

    #[test]
    fn gaussian_binomial_matches_product_formula() {
        // (3^4-1)(3^3-1)/((3^2-1)(3-1)) = 130
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
        assert_eq!(gaussian_binomial(5, 3, 3), 1210);
        assert_eq!(gaussian_binomial(5, 2, 4), 5797);
    }

    #[test]
    fn sum_and_intersection_basics() {
        let f3 = f(3);
        let e1 = SubspaceBasis::from_rows(&f3, 4, &[vec![1, 0, 0, 0]]).unwrap();
        let e2 = SubspaceBasis::from_rows(&f3, 4, &[vec![0, 1, 0, 0]]).unwrap();
        let s = SubspaceBasis::sum(&f3, &e1, &e2).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(SubspaceBasis::sum(&f3, &e1, &e1).unwrap(), e1);
        assert_eq!(SubspaceBasis::intersect(&f3, &e1, &e1).unwrap(), e1);
        assert_eq!(SubspaceBasis::dim_intersection(&f3, &e1, &e2).unwrap(), 0);
    }

    #[test]
    fn nested_kernels_containment() {
        let f3 = f(3);
        let c1 = SubspaceBasis::coordinate_hyperplane(&f3, 4, 1).unwrap();
        let c2 = SubspaceBasis::coordinate_hyperplane(&f3, 4, 2).unwrap();
        let c3 = SubspaceBasis::coordinate_hyperplane(&f3, 4, 3).unwrap();
        let c12 = SubspaceBasis::intersect(&f3, &c1, &c2).unwrap();
        let c123 = SubspaceBasis::intersect(&f3, &c12, &c3).unwrap();
        assert!(c12.contains(&f3, &c123).unwrap());
        assert!(!c123.contains(&f3, &c12).unwrap());
    }

    #[test]
    fn ambient_mismatch_rejected() {
        let f3 = f(3);
        let a = SubspaceBasis::zero(3, 4);
        let b = SubspaceBasis::zero(3, 5);
        assert!(SubspaceBasis::sum(&f3, &a, &b).is_err());
    }

    #[test]
    fn super_and_sub_counts() {
        let f3 = f(3);
        // |superspaces(X, k)| = [n-k+1]_q for dim X = k-1 (n=4, k=2)
        for x in enumerate_subspaces(&f3, 4, 1, u64::MAX).unwrap() {
            assert_eq!(
                x.superspaces(&f3, 2).unwrap().len() as u128,
                count_points(3, 3)
            );
            // boundary: d == dim returns empty per the contract
            assert!(x.superspaces(&f3, 1).unwrap().is_empty());
        }
        for y in enumerate_subspaces(&f3, 4, 3, u64::MAX).unwrap().iter().take(10) {
            assert_eq!(
                y.subspaces_of(&f3, 2).unwrap().len() as u128,
                count_points(3, 3)
            );
            assert_eq!(y.subspaces_of(&f3, 0).unwrap(), vec![SubspaceBasis::zero(3, 4)]);
        }
    }

    #[test]
    fn between_is_a_pencil() {
        let f3 = f(3);
        let x = SubspaceBasis::from_rows(&f3, 4, &[vec![1, 0, 0, 0]]).unwrap();
        let y = SubspaceBasis::from_rows(
            &f3,
            4,
            &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]],
        )
        .unwrap();
        let pencil = SubspaceBasis::between(&f3, &x, &y).unwrap();
        assert_eq!(pencil.len(), 4); // [2]_3 = q + 1
        for a in &pencil {
            assert_eq!(a.dim(), 2);
            assert!(a.contains(&f3, &x).unwrap());
            assert!(y.contains(&f3, a).unwrap());
        }
    }

    #[test]
    fn degeneracy_monotone() {
        // every subspace of a degenerate subspace is degenerate; every
        // superspace of a non-degenerate subspace is non-degenerate
        let f3 = f(3);
        for s in enumerate_subspaces(&f3, 4, 2, u64::MAX).unwrap() {
            if s.is_degenerate() {
                for t in s.subspaces_of(&f3, 1).unwrap() {
                    assert!(t.is_degenerate());
                }
            } else {
                for t in s.superspaces(&f3, 3).unwrap() {
                    assert!(!t.is_degenerate());
                }
            }
        }
    }

    #[test]
    fn canonicalization_is_basis_independent() {
        let f4 = f(4);
        let s = SubspaceBasis::from_rows(&f4, 5, &[vec![1, 2, 0, 3, 1], vec![0, 1, 1, 1, 2]])
            .unwrap();
        // re-present by scaled and mixed rows
        let r0: Vec<u8> = (0..5).map(|c| f4.mulv(3, s.matrix().get(0, c))).collect();
        let r1: Vec<u8> = (0..5)
            .map(|c| f4.addv(s.matrix().get(1, c), s.matrix().get(0, c)))
            .collect();
        let t = SubspaceBasis::from_rows(&f4, 5, &[r1, r0]).unwrap();
        assert_eq!(s, t);
    }
}
