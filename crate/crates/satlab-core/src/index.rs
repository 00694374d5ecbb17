//! Quasi-basis solver and Watatani index for faithful conditional
//! expectations on finite dimensional C*-algebras, the five-way saturation
//! battery for finite group actions, the Hopf-level saturation criterion,
//! and the Rokhlin witness check.

use nalgebra::SymmetricEigen;

use crate::algebra::{c, AlgebraElement, CMat, CVec, StarAlgebra, Subspace};
use crate::crossed::CrossedAlgebra;
use crate::group::GroupAction;
use crate::hopf::HopfAction;
use crate::{Error, Result, EPS_EQ, EPS_QB, EPS_RANK};

/// A conditional expectation `E: M → B ⊆ M` stored as an `N×N` matrix on
/// entry coordinates. Construction verifies: idempotency, unitality,
/// *-preservation, positivity of the associated form, the bimodule property
/// over the range, faithfulness, and compatibility with the trace state
/// (`τ∘E = τ`), which the solver relies on.
#[derive(Debug, Clone)]
pub struct Expectation {
    algebra: StarAlgebra,
    matrix: CMat,
    range: Subspace,
}

impl Expectation {
    pub fn from_linear_map(
        algebra: StarAlgebra,
        matrix: CMat,
        onto: Option<&Subspace>,
    ) -> Result<Self> {
        let n = algebra.linear_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Invalid(format!("expectation matrix must be {n}x{n}")));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("expectation matrix has non-finite entries".into()));
        }
        let basis = algebra.basis_elements();
        let images: Vec<AlgebraElement> = basis
            .iter()
            .map(|b| algebra.from_coords(&(&matrix * b.coords())))
            .collect();
        let range = crate::algebra::span_in(&algebra, &images)?;
        if let Some(target) = onto {
            if target.dim() != range.dim() {
                return Err(Error::Precondition(format!(
                    "expectation range has dimension {}, expected {}",
                    range.dim(),
                    target.dim()
                )));
            }
            for b in range.basis() {
                if !target.contains(b, EPS_EQ)? {
                    return Err(Error::Precondition(
                        "expectation range differs from the declared subalgebra".into(),
                    ));
                }
            }
        }
        let e = Expectation { algebra, matrix, range };
        e.verify()?;
        Ok(e)
    }

    /// `E(x) = (1/|G|) Σ_g α_g(x)`, the expectation onto the fixed point
    /// algebra.
    pub fn from_group_action(action: &GroupAction) -> Result<Self> {
        let n = action.algebra().linear_dim();
        let mut m = CMat::zeros(n, n);
        for g in action.group().elements() {
            m += action.map_matrix(g);
        }
        m /= c(action.group().order() as f64, 0.0);
        Expectation::from_linear_map(action.algebra().clone(), m, None)
    }

    /// `E(x) = e·x` for the distinguished projection of the acting Hopf
    /// algebra.
    pub fn from_hopf_action(action: &HopfAction) -> Result<Self> {
        Expectation::from_linear_map(action.algebra().clone(), action.expectation_matrix(), None)
    }

    pub fn algebra(&self) -> &StarAlgebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn range(&self) -> &Subspace {
        &self.range
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch("element from another algebra".into()));
        }
        Ok(self.algebra.from_coords(&(&self.matrix * x.coords())))
    }

    fn verify(&self) -> Result<()> {
        let n = self.algebra.linear_dim();
        // idempotent
        if (&self.matrix * &self.matrix - &self.matrix).norm() > EPS_EQ * (n as f64) {
            return Err(Error::Precondition("expectation is not idempotent".into()));
        }
        // unital
        let one = self.algebra.unit();
        if !self.apply(&one)?.sub(&one)?.is_zero(EPS_EQ) {
            return Err(Error::Precondition("expectation is not unital".into()));
        }
        let basis = self.algebra.basis_elements();
        // *-preserving and trace compatible
        for b in &basis {
            let lhs = self.apply(&b.adjoint())?;
            let rhs = self.apply(b)?.adjoint();
            if !lhs.sub(&rhs)?.is_zero(EPS_EQ) {
                return Err(Error::Precondition("expectation does not commute with *".into()));
            }
            if (self.apply(b)?.trace_state() - b.trace_state()).norm() > EPS_EQ {
                return Err(Error::Precondition(
                    "expectation does not preserve the trace state".into(),
                ));
            }
        }
        // range is a *-subalgebra and E acts as a bimodule projection over it
        if !self.range.is_star_subalgebra(EPS_EQ)? {
            return Err(Error::Precondition("expectation range is not a *-subalgebra".into()));
        }
        for r in self.range.basis() {
            if !self.apply(r)?.sub(r)?.is_zero(EPS_EQ) {
                return Err(Error::Precondition("expectation does not fix its range".into()));
            }
            for s in self.range.basis() {
                for b in &basis {
                    let lhs = self.apply(&r.mul(b)?.mul(s)?)?;
                    let rhs = r.mul(&self.apply(b)?)?.mul(s)?;
                    if !lhs.sub(&rhs)?.is_zero(EPS_EQ) {
                        return Err(Error::Precondition(
                            "expectation violates the bimodule property".into(),
                        ));
                    }
                }
            }
        }
        // faithfulness: the form τ(E(x*y)) must be positive definite
        let gram = self.trace_gram()?;
        let eig = SymmetricEigen::new(gram);
        let max = eig.eigenvalues.iter().fold(0.0f64, |a, &v| a.max(v));
        let min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &v| a.min(v));
        if min <= EPS_RANK * max.max(1.0) {
            return Err(Error::Precondition("expectation is not faithful".into()));
        }
        Ok(())
    }

    /// Gram matrix of `(x,y) ↦ τ(E(x*y))` over the trace-orthonormal basis.
    fn trace_gram(&self) -> Result<CMat> {
        let basis = self.algebra.basis_elements();
        let n = basis.len();
        let d = self.algebra.matrix_size() as f64;
        let mut gram = CMat::zeros(n, n);
        for (j, bj) in basis.iter().enumerate() {
            for (k, bk) in basis.iter().enumerate() {
                gram[(j, k)] = self.apply(&bj.adjoint().mul(bk)?)?.trace_state() * d;
            }
        }
        Ok(gram)
    }
}

/// A quasi-basis `{(v_i, v_i*)}` for a conditional expectation: every `b`
/// reconstructs as `Σ_i v_i E(v_i* b) = Σ_i E(b v_i) v_i*`.
#[derive(Debug, Clone)]
pub struct QuasiBasis {
    pub elements: Vec<AlgebraElement>,
    pub residual: f64,
}

/// Solve for a quasi-basis via the frame operator `S(b) = Σ_j m_j E(m_j* b)`
/// over the trace-orthonormal basis `{m_j}`: `S` is Hermitian for the trace
/// inner product, positive definite exactly when a quasi-basis exists, and
/// `v_j = S^{-1/2}(m_j)` reconstructs with `Σ_j v_j E(v_j* b) = b`.
pub fn solve_quasi_basis(e: &Expectation) -> Result<QuasiBasis> {
    let algebra = e.algebra();
    let basis = algebra.basis_elements();
    let n = basis.len();
    let d = algebra.matrix_size() as f64;
    // column k = coordinates of S(b_k); the matrix is the same over the
    // unit basis and the trace-orthonormal basis m_j = √D·b_j
    let mut s = CMat::zeros(n, n);
    for (k, bk) in basis.iter().enumerate() {
        let mut acc = algebra.zero();
        for bj in basis.iter() {
            acc = acc.add(&bj.mul(&e.apply(&bj.adjoint().mul(bk)?)?)?)?;
        }
        s.set_column(k, &(acc.coords() * c(d, 0.0)));
    }
    let herm_defect = (&s - s.adjoint()).norm();
    if herm_defect > EPS_EQ * s.norm().max(1.0) {
        return Err(Error::Consistency(format!(
            "frame operator is not Hermitian (defect {herm_defect:.3e}); \
             the expectation is incompatible with the trace inner product"
        )));
    }
    let s = (&s + s.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(s);
    let max = eig.eigenvalues.iter().fold(0.0f64, |a, &v| a.max(v));
    let min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &v| a.min(v));
    if min <= EPS_RANK * max.max(1.0) {
        return Err(Error::Precondition(format!(
            "expectation not of index-finite type: frame operator eigenvalue \
             {min:.3e} below rank cutoff"
        )));
    }
    let u = &eig.eigenvectors;
    let inv_sqrt = CMat::from_diagonal(&eig.eigenvalues.map(|v| c(1.0 / v.sqrt(), 0.0)));
    let s_inv_half = u * inv_sqrt * u.adjoint();
    let elements: Vec<AlgebraElement> = (0..n)
        .map(|j| algebra.from_coords(&(s_inv_half.column(j) * c(d.sqrt(), 0.0))))
        .collect();
    let residual = check_quasi_basis(&elements, e)?;
    if residual > EPS_QB {
        return Err(Error::Consistency(format!(
            "quasi-basis solver residual {residual:.3e} exceeds tolerance"
        )));
    }
    Ok(QuasiBasis { elements, residual })
}

/// Max reconstruction residual of a candidate family over the basis, checking
/// both `Σ_i v_i E(v_i* b) = b` and `Σ_i E(b v_i) v_i* = b` in operator norm.
pub fn check_quasi_basis(candidate: &[AlgebraElement], e: &Expectation) -> Result<f64> {
    let algebra = e.algebra();
    let mut worst = 0.0f64;
    for b in algebra.basis_elements() {
        let mut left = algebra.zero();
        let mut right = algebra.zero();
        for v in candidate {
            left = left.add(&v.mul(&e.apply(&v.adjoint().mul(&b)?)?)?)?;
            right = right.add(&e.apply(&b.mul(v)?)?.mul(&v.adjoint())?)?;
        }
        worst = worst
            .max(left.sub(&b)?.operator_norm())
            .max(right.sub(&b)?.operator_norm());
    }
    Ok(worst)
}

/// The Watatani index `Σ_i v_i v_i*` of a quasi-basis, with centrality and
/// scalar detection.
#[derive(Debug, Clone)]
pub struct IndexReport {
    pub index_element: AlgebraElement,
    pub is_central: bool,
    /// `τ(Index)` when the index is a scalar multiple of the unit.
    pub scalar_value: Option<f64>,
    pub matches_expected: Option<bool>,
}

pub fn compute_index(qb: &QuasiBasis, expected_scalar: Option<f64>) -> Result<IndexReport> {
    if qb.elements.is_empty() {
        return Err(Error::Invalid("empty quasi-basis".into()));
    }
    let algebra = qb.elements[0].algebra().clone();
    let mut index = algebra.zero();
    for v in &qb.elements {
        index = index.add(&v.mul(&v.adjoint())?)?;
    }
    let is_central = index.is_central(EPS_EQ);
    let scalar_value = index
        .scalar_multiple_of_unit(EPS_EQ * index.operator_norm().max(1.0))
        .map(|z| z.re);
    let matches_expected = expected_scalar.map(|want| match scalar_value {
        Some(got) => (got - want).abs() <= EPS_QB * want.max(1.0),
        None => false,
    });
    Ok(IndexReport { index_element: index, is_central, scalar_value, matches_expected })
}

/// Per-condition results of the five-way saturation battery.
#[derive(Debug, Clone)]
pub struct SaturationVerdict {
    pub group_order: usize,
    /// (i) the ideal generated by the distinguished projection is everything
    pub ideal_dim: usize,
    pub crossed_dim: usize,
    pub ideal_full: bool,
    /// (ii) `Index(E) = |G|·1`
    pub index: IndexReport,
    pub index_residual: f64,
    pub index_is_order: bool,
    /// (iii) `Σ_i u_i α_g(u_i*) = 0` for `g ≠ ι`
    pub orthogonality_residual: f64,
    pub qb_orthogonality: bool,
    /// (iv) the exact witness `b_j = u_j/√|G|`, present when (iii) holds
    pub exact_witness: Option<Vec<AlgebraElement>>,
    pub witness_residual: f64,
    /// (v) the same family under the ε-inequalities
    pub approx_witness_pass: bool,
    pub epsilon: f64,
    /// `φ(1) = Σ_i f_{u_i, u_i*}` must be a projection in the crossed product
    pub phi_one_projection_residual: f64,
    pub consistent: bool,
}

impl SaturationVerdict {
    pub fn conditions(&self) -> [bool; 5] {
        [
            self.ideal_full,
            self.index_is_order,
            self.qb_orthogonality,
            self.exact_witness.is_some(),
            self.approx_witness_pass,
        ]
    }

    pub fn saturated(&self) -> bool {
        self.ideal_full
    }
}

/// Evaluate all five equivalent saturation conditions independently and
/// report every residual; disagreement is surfaced in `consistent`, never
/// resolved silently.
pub fn saturation_battery(action: &GroupAction, epsilon: f64) -> Result<SaturationVerdict> {
    if epsilon <= 0.0 {
        return Err(Error::Invalid("epsilon must be positive".into()));
    }
    let order = action.group().order();
    let cp = CrossedAlgebra::build(action.clone())?;
    let ideal = cp.ideal_j_alpha()?;
    let ideal_dim = ideal.dim();
    let crossed_dim = cp.dim();
    let ideal_full = ideal_dim == crossed_dim;

    let e = Expectation::from_group_action(action)?;
    let qb = solve_quasi_basis(&e)?;
    let index = compute_index(&qb, Some(order as f64))?;
    let order_unit = action.algebra().unit().scale(c(order as f64, 0.0));
    let index_residual = index.index_element.sub(&order_unit)?.operator_norm();
    let index_is_order = index_residual <= EPS_EQ * order as f64;

    let mut orthogonality_residual = 0.0f64;
    for g in action.group().elements() {
        if g == action.group().identity() {
            continue;
        }
        let mut acc = action.algebra().zero();
        for u in &qb.elements {
            acc = acc.add(&u.mul(&action.apply(g, &u.adjoint())?)?)?;
        }
        orthogonality_residual = orthogonality_residual.max(acc.operator_norm());
    }
    let qb_orthogonality = orthogonality_residual <= EPS_EQ * order as f64;

    // candidate witness b_j = u_j/√|G|, b^j_g = α_g(b_j); the shift relation
    // α_g(b^j_h) = b^j_{gh} is exact by construction
    let scale = c(1.0 / (order as f64).sqrt(), 0.0);
    let b: Vec<AlgebraElement> = qb.elements.iter().map(|u| u.scale(scale)).collect();
    let mut family = Vec::with_capacity(order);
    for g in action.group().elements() {
        let row: Vec<AlgebraElement> =
            b.iter().map(|bj| action.apply(g, bj)).collect::<Result<_>>()?;
        family.push(row);
    }
    let witness_residual = witness_delta_residual(action.algebra(), &family)?;
    let exact = qb_orthogonality && witness_residual <= EPS_EQ * order as f64;
    let exact_witness = if exact { Some(b) } else { None };
    let approx_witness_pass = witness_residual < epsilon;

    // φ(1) = (1/|G|) Σ_g (Σ_i u_i α_g(u_i*)) λ_g as a crossed
    // product element; it is a projection for any quasi-basis
    let mut phi_one = cp.zero();
    for u in &qb.elements {
        phi_one = cp.add(&phi_one, &cp.f_pair(u, &u.adjoint())?)?;
    }
    let rep = cp.represent(&phi_one)?;
    let sq = rep.mul(&rep)?;
    let phi_one_projection_residual = sq
        .sub(&rep)?
        .operator_norm()
        .max(rep.adjoint().sub(&rep)?.operator_norm());

    let conditions = [
        ideal_full,
        index_is_order,
        qb_orthogonality,
        exact,
        approx_witness_pass,
    ];
    let consistent = conditions.iter().all(|&x| x) || conditions.iter().all(|&x| !x);

    Ok(SaturationVerdict {
        group_order: order,
        ideal_dim,
        crossed_dim,
        ideal_full,
        index,
        index_residual,
        index_is_order,
        orthogonality_residual,
        qb_orthogonality,
        exact_witness,
        witness_residual,
        approx_witness_pass,
        epsilon,
        phi_one_projection_residual,
        consistent,
    })
}

/// `max_{g,h} ‖Σ_j b^j_g (b^j_h)* − δ_{gh}·1‖` for a family indexed as
/// `family[g][j]`.
fn witness_delta_residual(
    algebra: &StarAlgebra,
    family: &[Vec<AlgebraElement>],
) -> Result<f64> {
    let one = algebra.unit();
    let mut worst = 0.0f64;
    for (g, row_g) in family.iter().enumerate() {
        for (h, row_h) in family.iter().enumerate() {
            let mut acc = algebra.zero();
            for (bg, bh) in row_g.iter().zip(row_h.iter()) {
                acc = acc.add(&bg.mul(&bh.adjoint())?)?;
            }
            if g == h {
                acc = acc.sub(&one)?;
            }
            worst = worst.max(acc.operator_norm());
        }
    }
    Ok(worst)
}

/// The two sub-verdicts of the Hopf saturation criterion: fullness of
/// `span{x e y}` in the smash product, and `Index(E) = (dim A)·1`.
#[derive(Debug, Clone)]
pub struct HopfSaturationVerdict {
    pub span_dim: usize,
    pub smash_dim: usize,
    pub span_full: bool,
    pub index: IndexReport,
    pub index_residual: f64,
    pub index_is_dim: bool,
    pub saturated: bool,
}

pub fn hopf_saturation(action: &HopfAction) -> Result<HopfSaturationVerdict> {
    let smash = crate::hopf::SmashProduct::new(action.clone())?;
    let e_vec = smash.embed_a(&action.hopf().e_coords().clone());
    let m_basis = action.algebra().basis_elements();
    let mut generators: Vec<CVec> = Vec::with_capacity(m_basis.len() * m_basis.len());
    for x in &m_basis {
        let xe = smash.mul(&smash.embed_m(x)?, &e_vec);
        for y in &m_basis {
            generators.push(smash.mul(&xe, &smash.embed_m(y)?));
        }
    }
    let span_dim = coord_rank(&generators, smash.dim());
    let smash_dim = smash.dim();
    let span_full = span_dim == smash_dim;

    let d = action.hopf().dim() as f64;
    let e = Expectation::from_hopf_action(action)?;
    let qb = solve_quasi_basis(&e)?;
    let index = compute_index(&qb, Some(d))?;
    let d_unit = action.algebra().unit().scale(c(d, 0.0));
    let index_residual = index.index_element.sub(&d_unit)?.operator_norm();
    let index_is_dim = index_residual <= EPS_EQ * d;

    if span_full != index_is_dim {
        return Err(Error::Consistency(format!(
            "Hopf saturation sub-verdicts disagree: span {span_dim}/{smash_dim} vs \
             index residual {index_residual:.3e}"
        )));
    }
    Ok(HopfSaturationVerdict {
        span_dim,
        smash_dim,
        span_full,
        index,
        index_residual,
        index_is_dim,
        saturated: span_full,
    })
}

fn coord_rank(vectors: &[CVec], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m = CMat::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    let svd = m.svd(false, false);
    let top = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    svd.singular_values
        .iter()
        .filter(|&&s| s > EPS_RANK * top.max(1.0))
        .count()
}

/// Per-condition report of the Rokhlin witness check.
#[derive(Debug, Clone)]
pub struct RokhlinReport {
    pub projection_residual: f64,
    pub orthogonality_residual: f64,
    pub partition_residual: f64,
    pub shift_residual: f64,
    pub family_ok: bool,
    /// residual of `Σ_{j∈G} α_g(e_j)·α_h(e_j)* = δ_{gh}·1`
    pub witness_residual: f64,
    pub witness_pass: bool,
    /// battery verdict, run only when the family itself checks out
    pub battery_saturated: Option<bool>,
}

/// Check a Rokhlin family `{e_g}` — mutually orthogonal projections summing
/// to 1 with `α_g(e_h) ≈ e_{gh}` — and confirm it yields a saturation
/// witness `b^j_g := α_g(e_j)`, indexed over the group.
pub fn rokhlin_witness_check(
    action: &GroupAction,
    family: &[AlgebraElement],
    epsilon: f64,
) -> Result<RokhlinReport> {
    let order = action.group().order();
    if family.len() != order {
        return Err(Error::Invalid(format!("expected one projection per group element ({order})")));
    }
    for p in family {
        if p.algebra() != action.algebra() {
            return Err(Error::AlgebraMismatch("projection from another algebra".into()));
        }
    }
    let mut projection_residual = 0.0f64;
    for p in family {
        projection_residual = projection_residual
            .max(p.mul(p)?.sub(p)?.operator_norm())
            .max(p.adjoint().sub(p)?.operator_norm());
    }
    let mut orthogonality_residual = 0.0f64;
    for (g, p) in family.iter().enumerate() {
        for (h, q) in family.iter().enumerate() {
            if g != h {
                orthogonality_residual = orthogonality_residual.max(p.mul(q)?.operator_norm());
            }
        }
    }
    let mut total = action.algebra().zero();
    for p in family {
        total = total.add(p)?;
    }
    let partition_residual = total.sub(&action.algebra().unit())?.operator_norm();
    let mut shift_residual = 0.0f64;
    for g in action.group().elements() {
        for h in action.group().elements() {
            let moved = action.apply(g, &family[h])?;
            shift_residual = shift_residual
                .max(moved.sub(&family[action.group().mul(g, h)])?.operator_norm());
        }
    }
    let family_ok = projection_residual <= epsilon
        && orthogonality_residual <= epsilon
        && partition_residual <= epsilon
        && shift_residual <= epsilon;

    // ε-witness family: one generator per group element
    let mut witness = Vec::with_capacity(order);
    for g in action.group().elements() {
        let row: Vec<AlgebraElement> = family
            .iter()
            .map(|ej| action.apply(g, ej))
            .collect::<Result<_>>()?;
        witness.push(row);
    }
    let witness_residual = witness_delta_residual(action.algebra(), &witness)?;
    let witness_pass = witness_residual <= (order * order) as f64 * epsilon + EPS_EQ;

    let battery_saturated = if family_ok {
        Some(saturation_battery(action, epsilon.max(1e-6))?.saturated())
    } else {
        None
    };

    Ok(RokhlinReport {
        projection_residual,
        orthogonality_residual,
        partition_residual,
        shift_residual,
        family_ok,
        witness_residual,
        witness_pass,
        battery_saturated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::c;
    use crate::group::{block_permutation_matrix, FiniteGroup};
    use nalgebra::DMatrix;

    fn m2() -> StarAlgebra {
        StarAlgebra::matrix(2)
    }

    fn inner_z_n(algebra: &StarAlgebra, u: AlgebraElement, n: usize) -> GroupAction {
        let mut us = vec![algebra.unit()];
        for _ in 1..n {
            us.push(us.last().unwrap().mul(&u).unwrap());
        }
        GroupAction::inner(algebra.clone(), FiniteGroup::cyclic(n), us).unwrap()
    }

    fn pauli_z(a: &StarAlgebra) -> AlgebraElement {
        a.from_blocks(vec![DMatrix::from_row_slice(2, 2, &[
            c(1.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(-1.0, 0.0),
        ])])
        .unwrap()
    }

    fn pauli_x(a: &StarAlgebra) -> AlgebraElement {
        a.from_blocks(vec![DMatrix::from_row_slice(2, 2, &[
            c(0.0, 0.0), c(1.0, 0.0),
            c(1.0, 0.0), c(0.0, 0.0),
        ])])
        .unwrap()
    }

    /// diag(λ, λ̄) with λ = e^{2πi/3}: an order-3 unitary whose Ad action
    /// admits the quasi-basis {1, σ_x} of index 2.
    fn z3_action() -> GroupAction {
        let a = m2();
        let th = 2.0 * std::f64::consts::PI / 3.0;
        let w = a
            .from_blocks(vec![DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                c(th.cos(), th.sin()),
                c(th.cos(), -th.sin()),
            ]))])
            .unwrap();
        inner_z_n(&a, w, 3)
    }

    #[test]
    fn identity_expectation_index_one() {
        let a = StarAlgebra::new(vec![2, 3]).unwrap();
        let action = GroupAction::trivial(a.clone(), FiniteGroup::cyclic(1));
        let e = Expectation::from_group_action(&action).unwrap();
        assert_eq!(e.range().dim(), a.linear_dim());
        let qb = solve_quasi_basis(&e).unwrap();
        assert!(qb.residual < 1e-10);
        let report = compute_index(&qb, Some(1.0)).unwrap();
        assert!(report.is_central);
        assert!((report.scalar_value.unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(report.matches_expected, Some(true));
    }

    #[test]
    fn non_expectation_rejected() {
        let a = m2();
        // halving map: unital on nothing, not idempotent
        let m = CMat::identity(4, 4) * c(0.5, 0.0);
        assert!(matches!(
            Expectation::from_linear_map(a, m, None),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn explicit_quasi_basis_for_order_three_rotation() {
        let action = z3_action();
        let e = Expectation::from_group_action(&action).unwrap();
        let a = action.algebra();
        let candidate = vec![a.unit(), pauli_x(a)];
        let residual = check_quasi_basis(&candidate, &e).unwrap();
        assert!(residual <= 1e-9, "residual {residual}");
        // index from the hand-built basis and from the solver agree at 2
        let hand = compute_index(
            &QuasiBasis { elements: candidate, residual },
            Some(2.0),
        )
        .unwrap();
        assert_eq!(hand.matches_expected, Some(true));
        let qb = solve_quasi_basis(&e).unwrap();
        let solved = compute_index(&qb, Some(2.0)).unwrap();
        assert_eq!(solved.matches_expected, Some(true));
        assert!(
            hand.index_element
                .sub(&solved.index_element)
                .unwrap()
                .operator_norm()
                < 1e-7
        );
    }

    #[test]
    fn order_three_rotation_not_saturated() {
        let verdict = saturation_battery(&z3_action(), 1e-6).unwrap();
        assert!(verdict.consistent);
        assert!(!verdict.saturated());
        assert!(verdict.conditions().iter().all(|&x| !x));
        assert!(verdict.ideal_dim < verdict.crossed_dim);
        // index is 2 while the group order is 3
        assert!((verdict.index.scalar_value.unwrap() - 2.0).abs() < 1e-7);
        assert!(verdict.phi_one_projection_residual < 1e-8);
    }

    #[test]
    fn sign_flip_action_saturated() {
        let a = m2();
        let action = inner_z_n(&a, pauli_z(&a), 2);
        let verdict = saturation_battery(&action, 1e-6).unwrap();
        assert!(verdict.consistent);
        assert!(verdict.saturated());
        assert!(verdict.conditions().iter().all(|&x| x));
        assert!((verdict.index.scalar_value.unwrap() - 2.0).abs() < 1e-9);
        assert!(verdict.exact_witness.is_some());
        assert!(verdict.phi_one_projection_residual < 1e-8);

        // the explicit rank-one pair: x_1 = (e_11 + e_12)/√2, x_2 = (e_21 + e_22)/√2
        // satisfies Σ x_j x_j* = 1 and Σ x_j α(x_j*) = 0
        let s = c(1.0 / 2f64.sqrt(), 0.0);
        let b = a.basis_elements();
        let x1 = b[0].add(&b[1]).unwrap().scale(s);
        let x2 = b[2].add(&b[3]).unwrap().scale(s);
        let sum = x1
            .mul(&x1.adjoint())
            .unwrap()
            .add(&x2.mul(&x2.adjoint()).unwrap())
            .unwrap();
        assert!(sum.sub(&a.unit()).unwrap().operator_norm() < 1e-9);
        let twisted = x1
            .mul(&action.apply(1, &x1.adjoint()).unwrap())
            .unwrap()
            .add(&x2.mul(&action.apply(1, &x2.adjoint()).unwrap()).unwrap())
            .unwrap();
        assert!(twisted.operator_norm() < 1e-9);
    }

    #[test]
    fn trivial_action_not_saturated() {
        let a = m2();
        let action = GroupAction::trivial(a, FiniteGroup::cyclic(2));
        let verdict = saturation_battery(&action, 1e-6).unwrap();
        assert!(verdict.consistent);
        assert!(!verdict.saturated());
        // averaging a trivial action is the identity map: index 1
        assert!((verdict.index.scalar_value.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn composite_outer_action_not_saturated() {
        // saturated ⊕ non-saturated on M_2⊕M_2 is not saturated
        let a = StarAlgebra::new(vec![2, 2]).unwrap();
        let top = pauli_z(&m2());
        let mut u_block = DMatrix::identity(2, 2).map(|x: f64| c(x, 0.0));
        u_block.copy_from(top.block(0));
        let u = a
            .from_blocks(vec![u_block, DMatrix::identity(2, 2).map(|x: f64| c(x, 0.0))])
            .unwrap();
        let action = inner_z_n(&a, u, 2);
        let verdict = saturation_battery(&action, 1e-6).unwrap();
        assert!(verdict.consistent);
        assert!(!verdict.saturated());
    }

    #[test]
    fn single_unit_fails_for_averaging_expectation() {
        let a = m2();
        let action = inner_z_n(&a, pauli_z(&a), 2);
        let e = Expectation::from_group_action(&action).unwrap();
        let residual = check_quasi_basis(&[a.unit()], &e).unwrap();
        assert!(residual > 0.1);
    }

    #[test]
    fn hopf_saturation_matches_group_battery() {
        let a = m2();
        for action in [
            inner_z_n(&a, pauli_z(&a), 2),
            z3_action(),
            GroupAction::trivial(a.clone(), FiniteGroup::cyclic(2)),
        ] {
            let battery = saturation_battery(&action, 1e-6).unwrap();
            let ha = HopfAction::from_group_action(&action).unwrap();
            let hopf = hopf_saturation(&ha).unwrap();
            assert_eq!(hopf.saturated, battery.saturated());
            if hopf.saturated {
                assert!(
                    (hopf.index.scalar_value.unwrap() - action.group().order() as f64).abs()
                        < 1e-7
                );
            }
        }
    }

    #[test]
    fn trivial_hopf_always_saturated() {
        let a = StarAlgebra::new(vec![2, 1]).unwrap();
        let action = GroupAction::trivial(a, FiniteGroup::cyclic(1));
        let ha = HopfAction::from_group_action(&action).unwrap();
        let verdict = hopf_saturation(&ha).unwrap();
        assert!(verdict.saturated);
        assert_eq!(verdict.span_dim, verdict.smash_dim);
    }

    fn swap_action() -> (GroupAction, Vec<AlgebraElement>) {
        let a = StarAlgebra::new(vec![2, 2]).unwrap();
        let swap = block_permutation_matrix(&a, &[1, 0]).unwrap();
        let id = CMat::identity(a.linear_dim(), a.linear_dim());
        let action = GroupAction::from_matrices(
            a.clone(),
            FiniteGroup::cyclic(2),
            vec![id, swap],
        )
        .unwrap();
        let zero = DMatrix::zeros(2, 2);
        let one = DMatrix::identity(2, 2).map(|x: f64| c(x, 0.0));
        let e0 = a.from_blocks(vec![one.clone(), zero.clone()]).unwrap();
        let e1 = a.from_blocks(vec![zero, one]).unwrap();
        (action, vec![e0, e1])
    }

    #[test]
    fn rokhlin_family_for_swap() {
        let (action, family) = swap_action();
        let report = rokhlin_witness_check(&action, &family, 1e-9).unwrap();
        assert!(report.family_ok);
        assert!(report.witness_pass);
        assert!(report.witness_residual < 1e-12);
        assert_eq!(report.battery_saturated, Some(true));
    }

    #[test]
    fn rokhlin_fails_for_trivial_action() {
        let a = StarAlgebra::new(vec![2, 2]).unwrap();
        let action = GroupAction::trivial(a.clone(), FiniteGroup::cyclic(2));
        let (_, family) = swap_action();
        let report = rokhlin_witness_check(&action, &family, 1e-9).unwrap();
        // the shift condition α_g(e_h) = e_{gh} fails for a trivial action
        assert!(!report.family_ok);
        assert!(report.shift_residual > 0.5);
        assert!(report.battery_saturated.is_none());
    }

    #[test]
    fn rokhlin_vacuous_for_trivial_group() {
        let a = m2();
        let action = GroupAction::trivial(a.clone(), FiniteGroup::cyclic(1));
        let report = rokhlin_witness_check(&action, &[a.unit()], 1e-9).unwrap();
        assert!(report.family_ok);
        assert!(report.witness_pass);
        assert_eq!(report.battery_saturated, Some(true));
    }
}
