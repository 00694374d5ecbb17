//! Finite dimensional C*-algebras realized as direct sums of full complex
//! matrix blocks, together with the trace inner product, subspace spans and
//! ideal computations used by the rest of the crate.

use nalgebra::{Complex, DMatrix, DVector};

use crate::{Error, Result, EPS_EQ, EPS_RANK};

pub type C = Complex<f64>;
pub type CMat = DMatrix<C>;
pub type CVec = DVector<C>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// A direct sum of full matrix algebras `M_{d_1} ⊕ … ⊕ M_{d_k}`.
///
/// Carries the faithful tracial state `τ(x) = Σ_i tr(x_i) / Σ_j d_j`, which
/// weights block `i` by `d_i / Σ_j d_j` and satisfies `τ(1) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarAlgebra {
    block_dims: Vec<usize>,
}

impl StarAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::Invalid("algebra needs at least one block".into()));
        }
        if block_dims.contains(&0) {
            return Err(Error::Invalid("block dimensions must be positive".into()));
        }
        Ok(StarAlgebra { block_dims })
    }

    /// The full matrix algebra `M_d`.
    pub fn matrix(d: usize) -> Self {
        StarAlgebra::new(vec![d]).expect("d >= 1")
    }

    /// The commutative algebra `C(X)` on `n` points, as `M_1 ⊕ … ⊕ M_1`.
    pub fn functions(n: usize) -> Result<Self> {
        StarAlgebra::new(vec![1; n])
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Linear dimension `N = Σ d_i²`.
    pub fn linear_dim(&self) -> usize {
        self.block_dims.iter().map(|d| d * d).sum()
    }

    /// `Σ d_i`, the size of the block diagonal embedding.
    pub fn matrix_size(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn zero(&self) -> AlgebraElement {
        let blocks = self.block_dims.iter().map(|&d| CMat::zeros(d, d)).collect();
        AlgebraElement { algebra: self.clone(), blocks }
    }

    pub fn unit(&self) -> AlgebraElement {
        let blocks = self.block_dims.iter().map(|&d| CMat::identity(d, d)).collect();
        AlgebraElement { algebra: self.clone(), blocks }
    }

    /// The matrix units `e^{(i)}_{pq}` in block order, row major within a block.
    pub fn basis_elements(&self) -> Vec<AlgebraElement> {
        let mut out = Vec::with_capacity(self.linear_dim());
        for (i, &d) in self.block_dims.iter().enumerate() {
            for p in 0..d {
                for q in 0..d {
                    let mut x = self.zero();
                    x.blocks[i][(p, q)] = c(1.0, 0.0);
                    out.push(x);
                }
            }
        }
        out
    }

    pub fn from_blocks(&self, blocks: Vec<CMat>) -> Result<AlgebraElement> {
        if blocks.len() != self.block_dims.len() {
            return Err(Error::Invalid(format!(
                "expected {} blocks, got {}",
                self.block_dims.len(),
                blocks.len()
            )));
        }
        for (b, &d) in blocks.iter().zip(&self.block_dims) {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::Invalid(format!(
                    "block shape {}x{} does not match dimension {}",
                    b.nrows(),
                    b.ncols(),
                    d
                )));
            }
            if b.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Invalid("non-finite coordinate".into()));
            }
        }
        Ok(AlgebraElement { algebra: self.clone(), blocks })
    }

    /// Element from its linear coordinates in the matrix unit basis.
    pub fn from_coords(&self, v: &CVec) -> AlgebraElement {
        assert_eq!(v.len(), self.linear_dim());
        let mut blocks = Vec::with_capacity(self.block_dims.len());
        let mut off = 0;
        for &d in &self.block_dims {
            let mut m = CMat::zeros(d, d);
            for p in 0..d {
                for q in 0..d {
                    m[(p, q)] = v[off + p * d + q];
                }
            }
            blocks.push(m);
            off += d * d;
        }
        AlgebraElement { algebra: self.clone(), blocks }
    }

    /// A scalar in `C(X)`-style algebras: block `i` gets `values[i]·1`.
    pub fn from_block_scalars(&self, values: &[f64]) -> Result<AlgebraElement> {
        if values.len() != self.block_dims.len() {
            return Err(Error::Invalid("one scalar per block required".into()));
        }
        let blocks = values
            .iter()
            .zip(&self.block_dims)
            .map(|(&v, &d)| CMat::identity(d, d) * c(v, 0.0))
            .collect();
        Ok(AlgebraElement { algebra: self.clone(), blocks })
    }
}

/// An element of a [`StarAlgebra`], one complex matrix per block.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    algebra: StarAlgebra,
    blocks: Vec<CMat>,
}

impl AlgebraElement {
    pub fn algebra(&self) -> &StarAlgebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMat {
        &self.blocks[i]
    }

    fn check_same(&self, other: &AlgebraElement) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch(format!(
                "{:?} vs {:?}",
                self.algebra.block_dims, other.algebra.block_dims
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect();
        Ok(AlgebraElement { algebra: self.algebra.clone(), blocks })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect();
        Ok(AlgebraElement { algebra: self.algebra.clone(), blocks })
    }

    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect();
        Ok(AlgebraElement { algebra: self.algebra.clone(), blocks })
    }

    pub fn scale(&self, s: C) -> AlgebraElement {
        let blocks = self.blocks.iter().map(|b| b * s).collect();
        AlgebraElement { algebra: self.algebra.clone(), blocks }
    }

    /// Blockwise conjugate transpose.
    pub fn adjoint(&self) -> AlgebraElement {
        let blocks = self.blocks.iter().map(|b| b.adjoint()).collect();
        AlgebraElement { algebra: self.algebra.clone(), blocks }
    }

    /// The faithful tracial state `τ(x) = Σ_i tr(x_i) / Σ_j d_j`.
    pub fn trace_state(&self) -> C {
        let total: C = self.blocks.iter().map(|b| b.trace()).sum();
        total / c(self.algebra.matrix_size() as f64, 0.0)
    }

    /// Trace inner product `⟨x, y⟩ = τ(x* y)`, conjugate linear in `x`.
    pub fn inner(&self, other: &AlgebraElement) -> Result<C> {
        self.check_same(other)?;
        let mut acc = c(0.0, 0.0);
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            acc += a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum::<C>();
        }
        Ok(acc / c(self.algebra.matrix_size() as f64, 0.0))
    }

    /// Hilbert–Schmidt norm `√τ(x*x)`.
    pub fn hs_norm(&self) -> f64 {
        self.inner(self, ).expect("same algebra").re.max(0.0).sqrt()
    }

    /// Max over blocks of the largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                if b.nrows() == 1 {
                    b[(0, 0)].norm()
                } else {
                    b.clone().svd(false, false).singular_values[0]
                }
            })
            .fold(0.0, f64::max)
    }

    /// Linear coordinates in the matrix unit basis (block order, row major).
    pub fn coords(&self) -> CVec {
        let n = self.algebra.linear_dim();
        let mut v = CVec::zeros(n);
        let mut off = 0;
        for b in &self.blocks {
            let d = b.nrows();
            for p in 0..d {
                for q in 0..d {
                    v[off + p * d + q] = b[(p, q)];
                }
            }
            off += d * d;
        }
        v
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.operator_norm() <= tol
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.sub(&self.adjoint()).map(|d| d.is_zero(tol)).unwrap_or(false)
    }

    /// `x² = x = x*` within `tol` in operator norm.
    pub fn is_projection(&self, tol: f64) -> bool {
        let sq = self.mul(self).expect("same algebra");
        sq.sub(self).unwrap().is_zero(tol) && self.is_self_adjoint(tol)
    }

    /// `x*x = xx* = 1` within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let one = self.algebra.unit();
        let a = self.adjoint().mul(self).unwrap();
        let b = self.mul(&self.adjoint()).unwrap();
        a.sub(&one).unwrap().is_zero(tol) && b.sub(&one).unwrap().is_zero(tol)
    }

    /// Commutes with every matrix unit within `tol`.
    pub fn is_central(&self, tol: f64) -> bool {
        for b in self.algebra.basis_elements() {
            let lhs = self.mul(&b).unwrap();
            let rhs = b.mul(self).unwrap();
            if !lhs.sub(&rhs).unwrap().is_zero(tol) {
                return false;
            }
        }
        true
    }

    /// If `x = c·1` within `tol`, returns `c`.
    pub fn scalar_multiple_of_unit(&self, tol: f64) -> Option<C> {
        let cval = self.trace_state();
        let diff = self.sub(&self.algebra.unit().scale(cval)).unwrap();
        if diff.is_zero(tol) {
            Some(cval)
        } else {
            None
        }
    }

    /// Blockwise rank, singular values above `EPS_RANK` relative cutoff.
    pub fn block_ranks(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .map(|b| {
                let sv = b.clone().svd(false, false).singular_values;
                let top = sv.iter().fold(0.0f64, |a, &s| a.max(s));
                if top == 0.0 {
                    return 0;
                }
                sv.iter().filter(|&&s| s > EPS_RANK * top.max(1.0)).count()
            })
            .collect()
    }
}

/// Murray–von Neumann equivalence of projections: equal rank in every block.
pub fn mvn_equivalent(p: &AlgebraElement, q: &AlgebraElement) -> Result<bool> {
    if !p.is_projection(EPS_EQ) || !q.is_projection(EPS_EQ) {
        return Err(Error::Precondition("mvn_equivalent expects projections".into()));
    }
    p.check_same(q)?;
    Ok(p.block_ranks() == q.block_ranks())
}

/// A linear subspace with a basis orthonormal for the trace inner product.
#[derive(Debug, Clone)]
pub struct Subspace {
    algebra: StarAlgebra,
    basis: Vec<AlgebraElement>,
}

impl Subspace {
    pub fn algebra(&self) -> &StarAlgebra {
        &self.algebra
    }

    pub fn basis(&self) -> &[AlgebraElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let mut acc = self.algebra.zero();
        for b in &self.basis {
            let coeff = b.inner(x)?;
            acc = acc.add(&b.scale(coeff))?;
        }
        Ok(acc)
    }

    /// Residual `‖x − P(x)‖` in Hilbert–Schmidt norm.
    pub fn residual(&self, x: &AlgebraElement) -> Result<f64> {
        Ok(x.sub(&self.project(x)?)?.hs_norm())
    }

    pub fn contains(&self, x: &AlgebraElement, tol: f64) -> Result<bool> {
        Ok(self.residual(x)? <= tol * x.hs_norm().max(1.0))
    }

    /// Closed under product and adjoint, up to `tol` residual after re-projection.
    pub fn is_star_subalgebra(&self, tol: f64) -> Result<bool> {
        for a in &self.basis {
            if !self.contains(&a.adjoint(), tol)? {
                return Ok(false);
            }
            for b in &self.basis {
                if !self.contains(&a.mul(b)?, tol)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Orthonormal span via modified Gram–Schmidt against the trace inner product.
///
/// Residual vectors with norm below `EPS_RANK · max input norm` are dropped.
pub fn span(elements: &[AlgebraElement]) -> Result<Subspace> {
    let algebra = match elements.first() {
        Some(e) => e.algebra.clone(),
        None => return Err(Error::Invalid("span of empty list has no parent algebra".into())),
    };
    span_in(&algebra, elements)
}

pub fn span_in(algebra: &StarAlgebra, elements: &[AlgebraElement]) -> Result<Subspace> {
    let mut basis: Vec<AlgebraElement> = Vec::new();
    let max_norm = elements.iter().map(|e| e.hs_norm()).fold(0.0f64, f64::max);
    let cutoff = EPS_RANK * max_norm.max(1e-300);
    for e in elements {
        if &e.algebra != algebra {
            return Err(Error::AlgebraMismatch("span over mixed algebras".into()));
        }
        let mut v = e.clone();
        // two rounds of MGS for numerical orthogonality
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.inner(&v)?;
                v = v.sub(&b.scale(coeff))?;
            }
        }
        let n = v.hs_norm();
        if n > cutoff {
            basis.push(v.scale(c(1.0 / n, 0.0)));
        }
    }
    Ok(Subspace { algebra: algebra.clone(), basis })
}

/// The two-sided ideal generated by `generators`:
/// `span{ b_j · g · b_k }` over the matrix unit basis.
pub fn two_sided_ideal(algebra: &StarAlgebra, generators: &[AlgebraElement]) -> Result<Subspace> {
    let basis = algebra.basis_elements();
    let mut prods = Vec::new();
    for g in generators {
        if g.algebra() != algebra {
            return Err(Error::AlgebraMismatch("generator from another algebra".into()));
        }
        for bj in &basis {
            for bk in &basis {
                prods.push(bj.mul(g)?.mul(bk)?);
            }
        }
    }
    span_in(algebra, &prods)
}

/// Orthonormal subspace from raw coordinate vectors (matrix unit coordinates).
pub fn span_coords(algebra: &StarAlgebra, vectors: &[CVec]) -> Result<Subspace> {
    let elems: Vec<AlgebraElement> = vectors.iter().map(|v| algebra.from_coords(v)).collect();
    span_in(algebra, &elems)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2_m1() -> StarAlgebra {
        StarAlgebra::new(vec![2, 1]).unwrap()
    }

    #[test]
    fn rejects_degenerate_algebras() {
        assert!(StarAlgebra::new(vec![]).is_err());
        assert!(StarAlgebra::new(vec![2, 0]).is_err());
    }

    #[test]
    fn unit_is_neutral() {
        let a = m2_m1();
        let one = a.unit();
        for x in a.basis_elements() {
            let p = one.mul(&x).unwrap();
            assert!(p.sub(&x).unwrap().is_zero(0.0));
        }
    }

    #[test]
    fn involution_is_involutive() {
        let a = m2_m1();
        let x = a
            .from_blocks(vec![
                CMat::from_row_slice(2, 2, &[c(1.0, 2.0), c(0.5, -1.0), c(0.0, 3.0), c(-2.0, 0.1)]),
                CMat::from_row_slice(1, 1, &[c(0.3, 0.7)]),
            ])
            .unwrap();
        assert!(x.adjoint().adjoint().sub(&x).unwrap().is_zero(0.0));
    }

    #[test]
    fn diagonal_product() {
        let a = StarAlgebra::functions(2).unwrap();
        let x = a.from_block_scalars(&[2.0, 3.0]).unwrap();
        let y = a.from_block_scalars(&[5.0, 7.0]).unwrap();
        let p = x.mul(&y).unwrap();
        let expect = a.from_block_scalars(&[10.0, 21.0]).unwrap();
        assert!(p.sub(&expect).unwrap().is_zero(0.0));
    }

    #[test]
    fn trace_state_normalization() {
        let a = m2_m1();
        assert!((a.unit().trace_state() - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(a.zero().trace_state(), c(0.0, 0.0));
        let m2 = StarAlgebra::matrix(2);
        let x = m2
            .from_blocks(vec![CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])])
            .unwrap();
        assert!((x.trace_state() - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn operator_norm_examples() {
        let m2 = StarAlgebra::matrix(2);
        assert!((m2.unit().operator_norm() - 1.0).abs() < 1e-12);
        let x = m2
            .from_blocks(vec![CMat::from_row_slice(2, 2, &[c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -4.0)])])
            .unwrap();
        assert!((x.operator_norm() - 4.0).abs() < 1e-12);
        let p = m2
            .from_blocks(vec![CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])])
            .unwrap();
        assert!(p.is_projection(EPS_EQ));
        assert!((p.operator_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn span_dedup_and_full() {
        let a = m2_m1();
        let one = a.unit();
        let s = span(&[one.clone(), one.clone(), one.clone()]).unwrap();
        assert_eq!(s.dim(), 1);
        let full = span(&a.basis_elements()).unwrap();
        assert_eq!(full.dim(), a.linear_dim());
        let x = a.basis_elements()[1].clone();
        let s2 = span(&[x.clone(), x.scale(c(0.0, 1.0))]).unwrap();
        assert_eq!(s2.dim(), 1);
    }

    #[test]
    fn span_is_idempotent() {
        let a = m2_m1();
        let elems: Vec<_> = a.basis_elements().into_iter().take(3).collect();
        let s = span(&elems).unwrap();
        let s2 = span(s.basis()).unwrap();
        assert_eq!(s.dim(), s2.dim());
    }

    #[test]
    fn ideal_examples() {
        let a = m2_m1();
        let full = two_sided_ideal(&a, &[a.unit()]).unwrap();
        assert_eq!(full.dim(), a.linear_dim());
        let z = two_sided_ideal(&a, &[a.zero()]).unwrap();
        assert_eq!(z.dim(), 0);
        // unit of the M_1 summand generates a 1-dimensional ideal
        let mut p = a.zero();
        p = p.add(&a.basis_elements()[4]).unwrap();
        let ideal = two_sided_ideal(&a, &[p]).unwrap();
        assert_eq!(ideal.dim(), 1);
    }

    #[test]
    fn ideal_closed_under_multiplication() {
        let a = m2_m1();
        let mut p = a.zero();
        p = p.add(&a.basis_elements()[4]).unwrap();
        let ideal = two_sided_ideal(&a, &[p]).unwrap();
        for b in a.basis_elements() {
            for v in ideal.basis() {
                assert!(ideal.contains(&b.mul(v).unwrap(), EPS_EQ).unwrap());
                assert!(ideal.contains(&v.mul(&b).unwrap(), EPS_EQ).unwrap());
            }
        }
    }

    #[test]
    fn unitary_and_central_checks() {
        let m2 = StarAlgebra::matrix(2);
        let th = 0.37f64;
        let u = m2
            .from_blocks(vec![CMat::from_row_slice(2, 2, &[
                c(th.cos(), th.sin()), c(0.0, 0.0),
                c(0.0, 0.0), c(th.cos(), -th.sin()),
            ])])
            .unwrap();
        assert!(u.is_unitary(EPS_EQ));
        assert!(!u.is_central(EPS_EQ));
        assert!(m2.unit().is_central(EPS_EQ));
    }

    #[test]
    fn mvn_examples() {
        let m2 = StarAlgebra::matrix(2);
        let p = m2
            .from_blocks(vec![CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])])
            .unwrap();
        let q = m2
            .from_blocks(vec![CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])])
            .unwrap();
        assert!(mvn_equivalent(&p, &p).unwrap());
        assert!(mvn_equivalent(&p, &q).unwrap());
        assert!(!mvn_equivalent(&p, &m2.unit()).unwrap());
        assert!(mvn_equivalent(&p, &m2.from_coords(&p.coords().add_scalar(c(0.3, 0.0)))).is_err());
    }

    fn element_from_reals(a: &StarAlgebra, reals: &[f64]) -> AlgebraElement {
        let coords = CVec::from_iterator(
            a.linear_dim(),
            reals.chunks(2).map(|pair| c(pair[0], pair[1])),
        );
        a.from_coords(&coords)
    }

    proptest::proptest! {
        #[test]
        fn star_algebra_identities(
            xs in proptest::collection::vec(-1.0f64..1.0, 10),
            ys in proptest::collection::vec(-1.0f64..1.0, 10),
        ) {
            let a = StarAlgebra::new(vec![2, 1]).unwrap();
            let x = element_from_reals(&a, &xs);
            let y = element_from_reals(&a, &ys);
            // * is an anti-homomorphism and an involution
            let lhs = x.mul(&y).unwrap().adjoint();
            let rhs = y.adjoint().mul(&x.adjoint()).unwrap();
            proptest::prop_assert!(lhs.sub(&rhs).unwrap().is_zero(EPS_EQ));
            proptest::prop_assert!(x.adjoint().adjoint().sub(&x).unwrap().is_zero(EPS_EQ));
            // the trace state is positive and faithful on x*x
            let xx = x.adjoint().mul(&x).unwrap();
            let t = xx.trace_state();
            proptest::prop_assert!(t.im.abs() <= EPS_EQ && t.re >= -EPS_EQ);
            proptest::prop_assert!(t.re > 0.0 || x.is_zero(EPS_EQ));
            // hs and operator norms: compatible and submultiplicative
            proptest::prop_assert!(x.hs_norm() <= x.operator_norm() * (a.matrix_size() as f64).sqrt() + EPS_EQ);
            let xy = x.mul(&y).unwrap();
            proptest::prop_assert!(xy.operator_norm() <= x.operator_norm() * y.operator_norm() + EPS_EQ);
        }

        #[test]
        fn span_projection_is_idempotent(
            xs in proptest::collection::vec(-1.0f64..1.0, 10),
            ys in proptest::collection::vec(-1.0f64..1.0, 10),
            zs in proptest::collection::vec(-1.0f64..1.0, 10),
        ) {
            let a = StarAlgebra::new(vec![2, 1]).unwrap();
            let x = element_from_reals(&a, &xs);
            let y = element_from_reals(&a, &ys);
            let z = element_from_reals(&a, &zs);
            let s = span_in(&a, &[x.clone(), y]).unwrap();
            let p = s.project(&z).unwrap();
            proptest::prop_assert!(s.project(&p).unwrap().sub(&p).unwrap().is_zero(EPS_EQ));
            proptest::prop_assert!(s.contains(&p, EPS_EQ).unwrap());
            proptest::prop_assert!(s.residual(&x).unwrap() <= EPS_EQ);
        }
    }
}
