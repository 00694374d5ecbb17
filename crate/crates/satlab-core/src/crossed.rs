//! The crossed product `M ×_α G` for a finite group: elements `Σ_g x_g λ_g`,
//! the distinguished projection, the expectations E and F, the convolution
//! functions `f_{x,y}` and the ideal `J_α`.

use crate::algebra::{c, AlgebraElement, CMat, CVec, StarAlgebra, C};
use crate::group::GroupAction;
use crate::{Error, Result, EPS_EQ, EPS_RANK};

/// An element `Σ_g x_g λ_g` of `M ×_α G`, stored per group element.
#[derive(Debug, Clone)]
pub struct CrossedElement {
    coeffs: Vec<AlgebraElement>,
}

impl CrossedElement {
    pub fn coeff(&self, g: usize) -> &AlgebraElement {
        &self.coeffs[g]
    }

    pub fn coeffs(&self) -> &[AlgebraElement] {
        &self.coeffs
    }
}

/// `M ×_α G` with a faithful represented copy inside one matrix block of
/// size `(Σ d_i)·|G|` (the regular representation over `G`, with `M`
/// embedded block diagonally).
#[derive(Debug, Clone)]
pub struct CrossedAlgebra {
    action: GroupAction,
    rep_algebra: StarAlgebra,
}

impl CrossedAlgebra {
    /// Builds the crossed product and checks that the representation is a
    /// faithful *-homomorphism on generators.
    pub fn build(action: GroupAction) -> Result<Self> {
        let rep_size = action.algebra().matrix_size() * action.group().order();
        let rep_algebra = StarAlgebra::matrix(rep_size);
        let cp = CrossedAlgebra { action, rep_algebra };
        cp.verify()?;
        Ok(cp)
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn algebra(&self) -> &StarAlgebra {
        self.action.algebra()
    }

    pub fn rep_algebra(&self) -> &StarAlgebra {
        &self.rep_algebra
    }

    /// Linear dimension `N·|G|`.
    pub fn dim(&self) -> usize {
        self.algebra().linear_dim() * self.action.group().order()
    }

    pub fn zero(&self) -> CrossedElement {
        CrossedElement {
            coeffs: vec![self.algebra().zero(); self.action.group().order()],
        }
    }

    pub fn unit(&self) -> CrossedElement {
        let mut z = self.zero();
        z.coeffs[self.action.group().identity()] = self.algebra().unit();
        z
    }

    pub fn from_coeffs(&self, coeffs: Vec<AlgebraElement>) -> Result<CrossedElement> {
        if coeffs.len() != self.action.group().order() {
            return Err(Error::Invalid("one coefficient per group element".into()));
        }
        for x in &coeffs {
            if x.algebra() != self.algebra() {
                return Err(Error::AlgebraMismatch("coefficient from another algebra".into()));
            }
        }
        Ok(CrossedElement { coeffs })
    }

    /// `x λ_g` as a crossed element.
    pub fn monomial(&self, x: &AlgebraElement, g: usize) -> Result<CrossedElement> {
        let mut z = self.zero();
        z.coeffs[g] = x.clone();
        self.from_coeffs(z.coeffs)
    }

    /// Embedding of `M`.
    pub fn embed(&self, x: &AlgebraElement) -> Result<CrossedElement> {
        self.monomial(x, self.action.group().identity())
    }

    pub fn add(&self, a: &CrossedElement, b: &CrossedElement) -> Result<CrossedElement> {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x.add(y))
            .collect::<Result<_>>()?;
        Ok(CrossedElement { coeffs })
    }

    pub fn sub(&self, a: &CrossedElement, b: &CrossedElement) -> Result<CrossedElement> {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x.sub(y))
            .collect::<Result<_>>()?;
        Ok(CrossedElement { coeffs })
    }

    pub fn scale(&self, a: &CrossedElement, s: C) -> CrossedElement {
        CrossedElement { coeffs: a.coeffs.iter().map(|x| x.scale(s)).collect() }
    }

    /// `(x λ_g)(y λ_h) = x α_g(y) λ_{gh}`.
    pub fn mul(&self, a: &CrossedElement, b: &CrossedElement) -> Result<CrossedElement> {
        let group = self.action.group();
        let mut out = self.zero();
        for g in group.elements() {
            if a.coeffs[g].is_zero(0.0) {
                continue;
            }
            for h in group.elements() {
                let term = a.coeffs[g].mul(&self.action.apply(g, &b.coeffs[h])?)?;
                let gh = group.mul(g, h);
                out.coeffs[gh] = out.coeffs[gh].add(&term)?;
            }
        }
        Ok(out)
    }

    /// `(x λ_g)* = α_{g⁻¹}(x*) λ_{g⁻¹}`.
    pub fn adjoint(&self, a: &CrossedElement) -> Result<CrossedElement> {
        let group = self.action.group();
        let mut out = self.zero();
        for g in group.elements() {
            let ginv = group.inv(g);
            out.coeffs[ginv] = self.action.apply(ginv, &a.coeffs[g].adjoint())?;
        }
        Ok(out)
    }

    /// The image of `ξ` under the regular representation: block `(a, b)` is
    /// `α_{a⁻¹}(x_g)` when `b = g⁻¹a`.
    pub fn represent(&self, xi: &CrossedElement) -> Result<AlgebraElement> {
        let group = self.action.group();
        let order = group.order();
        let d = self.algebra().matrix_size();
        let mut big = CMat::zeros(d * order, d * order);
        for g in group.elements() {
            if xi.coeffs[g].is_zero(0.0) {
                continue;
            }
            for a in group.elements() {
                let b = group.mul(group.inv(g), a);
                let entry = self.action.apply(group.inv(a), &xi.coeffs[g])?;
                // embed the M-element block diagonally into the (a,b) cell
                let mut off = 0;
                for blk in entry.blocks() {
                    let dd = blk.nrows();
                    big.view_mut((a * d + off, b * d + off), (dd, dd)).copy_from(blk);
                    off += dd;
                }
            }
        }
        self.rep_algebra.from_blocks(vec![big])
    }

    /// Operator norm via the faithful representation.
    pub fn norm(&self, xi: &CrossedElement) -> Result<f64> {
        Ok(self.represent(xi)?.operator_norm())
    }

    fn verify(&self) -> Result<()> {
        let group = self.action.group();
        let basis = self.algebra().basis_elements();
        // *-homomorphism on generators x λ_g
        let mut gens = Vec::new();
        for b in &basis {
            for g in group.elements() {
                gens.push(self.monomial(b, g)?);
            }
        }
        let sample = |i: usize| &gens[i * 7919 % gens.len()];
        for i in 0..gens.len().min(8) {
            for j in 0..gens.len().min(8) {
                let a = sample(i);
                let b = sample(j);
                let lhs = self.represent(&self.mul(a, b)?)?;
                let rhs = self.represent(a)?.mul(&self.represent(b)?)?;
                if !lhs.sub(&rhs)?.is_zero(EPS_EQ) {
                    return Err(Error::Consistency(
                        "crossed representation is not multiplicative".into(),
                    ));
                }
                let ls = self.represent(&self.adjoint(a)?)?;
                if !ls.sub(&self.represent(a)?.adjoint())?.is_zero(EPS_EQ) {
                    return Err(Error::Consistency(
                        "crossed representation does not respect the involution".into(),
                    ));
                }
            }
        }
        // faithfulness: represented span has full dimension N|G|
        let vectors: Vec<CVec> = gens.iter().map(|x| self.coords(x)).collect();
        if rank_of(&vectors) != self.dim() {
            return Err(Error::Consistency("crossed representation is not faithful".into()));
        }
        Ok(())
    }

    /// Coefficient coordinates, length `N·|G|` (group-major).
    pub fn coords(&self, xi: &CrossedElement) -> CVec {
        let n = self.algebra().linear_dim();
        let order = self.action.group().order();
        let mut v = CVec::zeros(n * order);
        for g in 0..order {
            v.rows_mut(g * n, n).copy_from(&xi.coeffs[g].coords());
        }
        v
    }

    pub fn from_coords(&self, v: &CVec) -> CrossedElement {
        let n = self.algebra().linear_dim();
        let order = self.action.group().order();
        let coeffs = (0..order)
            .map(|g| self.algebra().from_coords(&CVec::from(v.rows(g * n, n))))
            .collect();
        CrossedElement { coeffs }
    }

    /// The distinguished projection `e = (1/|G|) Σ_g λ_g`.
    pub fn distinguished_projection(&self) -> CrossedElement {
        let order = self.action.group().order();
        let coeff = self.algebra().unit().scale(c(1.0 / order as f64, 0.0));
        CrossedElement { coeffs: vec![coeff; order] }
    }

    /// `E(x) = (1/|G|) Σ_g α_g(x)`, the expectation onto `M^α`.
    pub fn expectation_e(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        expectation_e(&self.action, x)
    }

    /// `F(Σ_g x_g λ_g) = x_ι`.
    pub fn expectation_f(&self, xi: &CrossedElement) -> AlgebraElement {
        xi.coeffs[self.action.group().identity()].clone()
    }

    /// `f_{x,y} = (1/|G|) Σ_g x α_g(y) λ_g`.
    pub fn f_pair(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<CrossedElement> {
        let group = self.action.group();
        let w = c(1.0 / group.order() as f64, 0.0);
        let coeffs = group
            .elements()
            .map(|g| Ok(x.mul(&self.action.apply(g, y)?)?.scale(w)))
            .collect::<Result<_>>()?;
        Ok(CrossedElement { coeffs })
    }

    /// The ideal `J_α`, computed three ways and cross-checked:
    /// as `span{f_{b_j,b_k}}`, as the two-sided ideal generated by `e`, and
    /// as the polarized span of `{f_{x,x*}}`.
    pub fn ideal_j_alpha(&self) -> Result<CrossedSubspace> {
        let basis = self.algebra().basis_elements();
        let group = self.action.group();

        let mut f_span = Vec::new();
        for x in &basis {
            for y in &basis {
                f_span.push(self.coords(&self.f_pair(x, y)?));
            }
        }
        let main = self.subspace_from(&f_span)?;

        // ideal generated by e: λ_g e = e, so span{ x e y λ_h } suffices
        let e = self.distinguished_projection();
        let mut ideal_vectors = Vec::new();
        for x in &basis {
            let xe = self.mul(&self.embed(x)?, &e)?;
            for y in &basis {
                let xey = self.mul(&xe, &self.embed(y)?)?;
                for h in group.elements() {
                    let shifted = self.mul(&xey, &self.monomial(&self.algebra().unit(), h)?)?;
                    ideal_vectors.push(self.coords(&shifted));
                }
            }
        }
        let from_e = rank_of(&ideal_vectors);

        // polarized span of f_{x,x*}: x = (b_l + i^k b_j*)* suffices
        let mut pol_vectors = Vec::new();
        for x in &basis {
            pol_vectors.push(self.coords(&self.f_pair(x, &x.adjoint())?));
        }
        for bj in &basis {
            for bl in &basis {
                for k in 0..4 {
                    let ik = c(0.0, 1.0).powu(k);
                    let x = bl.add(&bj.adjoint().scale(ik))?.adjoint();
                    pol_vectors.push(self.coords(&self.f_pair(&x, &x.adjoint())?));
                }
            }
        }
        let from_pol = rank_of(&pol_vectors);

        if main.dim() != from_e || main.dim() != from_pol {
            return Err(Error::Consistency(format!(
                "J_alpha computations disagree: f-span {}, ideal(e) {}, polarized {}",
                main.dim(),
                from_e,
                from_pol
            )));
        }
        Ok(main)
    }

    /// The hereditary corner `e (M×G) e`.
    pub fn hereditary_corner(&self) -> Result<CrossedSubspace> {
        let e = self.distinguished_projection();
        let group = self.action.group();
        let mut vectors = Vec::new();
        for b in self.algebra().basis_elements() {
            for g in group.elements() {
                let mid = self.monomial(&b, g)?;
                let prod = self.mul(&self.mul(&e, &mid)?, &e)?;
                vectors.push(self.coords(&prod));
            }
        }
        self.subspace_from(&vectors)
    }

    /// Checks that `x ↦ f_{x,1}` maps `M^α` bijectively and multiplicatively
    /// onto the hereditary corner.
    pub fn corner_isomorphism_check(&self) -> Result<bool> {
        let corner = self.hereditary_corner()?;
        let fixed = self.action.fixed_point_algebra()?;
        if corner.dim() != fixed.dim() {
            return Ok(false);
        }
        let mut images = Vec::new();
        for x in fixed.basis() {
            let fx = self.f_pair(x, &self.algebra().unit())?;
            if !corner.contains(self, &fx)? {
                return Ok(false);
            }
            images.push(self.coords(&fx));
        }
        if rank_of(&images) != fixed.dim() {
            return Ok(false);
        }
        // multiplicativity: f_{x,1} f_{y,1} = f_{xy,1} for fixed x, y
        for x in fixed.basis() {
            for y in fixed.basis() {
                let lhs = self.mul(
                    &self.f_pair(x, &self.algebra().unit())?,
                    &self.f_pair(y, &self.algebra().unit())?,
                )?;
                let rhs = self.f_pair(&x.mul(y)?, &self.algebra().unit())?;
                let diff = self.sub(&lhs, &rhs)?;
                if self.norm(&diff)? > EPS_EQ {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn subspace_from(&self, vectors: &[CVec]) -> Result<CrossedSubspace> {
        let basis = orthonormalize(vectors);
        Ok(CrossedSubspace { basis })
    }
}

/// `E(x) = (1/|G|) Σ_g α_g(x)`.
pub fn expectation_e(action: &GroupAction, x: &AlgebraElement) -> Result<AlgebraElement> {
    let group = action.group();
    let mut acc = action.algebra().zero();
    for g in group.elements() {
        acc = acc.add(&action.apply(g, x)?)?;
    }
    Ok(acc.scale(c(1.0 / group.order() as f64, 0.0)))
}

/// A linear subspace of the crossed product in coefficient coordinates.
#[derive(Debug, Clone)]
pub struct CrossedSubspace {
    basis: Vec<CVec>,
}

impl CrossedSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, cp: &CrossedAlgebra, xi: &CrossedElement) -> Result<bool> {
        let v = cp.coords(xi);
        let mut r = v.clone();
        for b in &self.basis {
            let coeff = b.dotc(&r);
            r -= b * coeff;
        }
        Ok(r.norm() <= EPS_EQ * v.norm().max(1.0))
    }
}

fn orthonormalize(vectors: &[CVec]) -> Vec<CVec> {
    let mut basis: Vec<CVec> = Vec::new();
    let max_norm = vectors.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let cutoff = EPS_RANK * max_norm.max(1e-300);
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.dotc(&r);
                r -= b * coeff;
            }
        }
        let n = r.norm();
        if n > cutoff {
            basis.push(r / c(n, 0.0));
        }
    }
    basis
}

fn rank_of(vectors: &[CVec]) -> usize {
    orthonormalize(vectors).len()
}
