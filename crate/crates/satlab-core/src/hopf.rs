//! Finite dimensional Hopf *-algebras as structure tensors over a chosen
//! basis inside a matrix algebra carrier, with a full axiom verifier, the
//! built-in group algebra C*(G) and its function algebra dual C(G), Hopf
//! actions on a [`StarAlgebra`], and the smash product M⋊A.

use crate::algebra::{c, AlgebraElement, CMat, CVec, StarAlgebra, C};
use crate::group::{FiniteGroup, GroupAction};
use crate::{Error, Result, EPS_EQ};

/// Entries below this are treated as structural zeros of the comultiplication
/// tensor when iterating sparsely.
const SPARSE_CUT: f64 = 1e-14;

/// A finite dimensional Hopf *-algebra.
///
/// The algebra `A` is the span of `basis` inside `carrier`; all structure
/// maps are stored as tensors over that basis. Construction runs the axiom
/// verifier and fails naming the violated identity.
#[derive(Debug, Clone)]
pub struct HopfAlgebra {
    carrier: StarAlgebra,
    basis: Vec<AlgebraElement>,
    dim: usize,
    /// `mul[i]` has column `j` = coordinates of `a_i a_j`.
    mul: Vec<CMat>,
    /// Column `i` = coordinates of `a_i*`.
    star: CMat,
    unit_coords: CVec,
    /// `(D²)×D`; column `i` = coordinates of `Δ(a_i)` with `(p,q) ↦ p·D+q`.
    comul: CMat,
    counit: CVec,
    antipode: CMat,
    haar: CVec,
    e_coords: CVec,
}

impl HopfAlgebra {
    /// The group algebra `C*(G)` inside the regular representation block.
    pub fn group_hopf(group: &FiniteGroup) -> Result<Self> {
        let n = group.order();
        let carrier = StarAlgebra::matrix(n);
        // λ_g as the left regular representation permutation matrix
        let basis: Vec<AlgebraElement> = group
            .elements()
            .map(|g| {
                let mut m = CMat::zeros(n, n);
                for b in group.elements() {
                    m[(group.mul(g, b), b)] = c(1.0, 0.0);
                }
                carrier.from_blocks(vec![m]).unwrap()
            })
            .collect();
        let mut mul = Vec::with_capacity(n);
        for g in group.elements() {
            let mut m = CMat::zeros(n, n);
            for h in group.elements() {
                m[(group.mul(g, h), h)] = c(1.0, 0.0);
            }
            mul.push(m);
        }
        let mut star = CMat::zeros(n, n);
        let mut antipode = CMat::zeros(n, n);
        for g in group.elements() {
            star[(group.inv(g), g)] = c(1.0, 0.0);
            antipode[(group.inv(g), g)] = c(1.0, 0.0);
        }
        let mut unit_coords = CVec::zeros(n);
        unit_coords[group.identity()] = c(1.0, 0.0);
        let mut comul = CMat::zeros(n * n, n);
        for g in group.elements() {
            comul[(g * n + g, g)] = c(1.0, 0.0);
        }
        let counit = CVec::from_element(n, c(1.0, 0.0));
        let mut haar = CVec::zeros(n);
        haar[group.identity()] = c(1.0, 0.0);
        let e_coords = CVec::from_element(n, c(1.0 / n as f64, 0.0));
        let hopf = HopfAlgebra {
            carrier,
            basis,
            dim: n,
            mul,
            star,
            unit_coords,
            comul,
            counit,
            antipode,
            haar,
            e_coords,
        };
        hopf.verify()?;
        Ok(hopf)
    }

    /// The function algebra `C(G)` with pointwise product and
    /// `Δf(g,h) = f(gh)`.
    pub fn dual_function_hopf(group: &FiniteGroup) -> Result<Self> {
        let n = group.order();
        let carrier = StarAlgebra::functions(n)?;
        let basis = carrier.basis_elements();
        let mut mul = Vec::with_capacity(n);
        for g in group.elements() {
            let mut m = CMat::zeros(n, n);
            m[(g, g)] = c(1.0, 0.0);
            mul.push(m);
        }
        let star = CMat::identity(n, n);
        let mut antipode = CMat::zeros(n, n);
        for g in group.elements() {
            antipode[(group.inv(g), g)] = c(1.0, 0.0);
        }
        let unit_coords = CVec::from_element(n, c(1.0, 0.0));
        let mut comul = CMat::zeros(n * n, n);
        for a in group.elements() {
            for b in group.elements() {
                comul[(a * n + b, group.mul(a, b))] = c(1.0, 0.0);
            }
        }
        let mut counit = CVec::zeros(n);
        counit[group.identity()] = c(1.0, 0.0);
        let haar = CVec::from_element(n, c(1.0 / n as f64, 0.0));
        let mut e_coords = CVec::zeros(n);
        e_coords[group.identity()] = c(1.0, 0.0);
        let hopf = HopfAlgebra {
            carrier,
            basis,
            dim: n,
            mul,
            star,
            unit_coords,
            comul,
            counit,
            antipode,
            haar,
            e_coords,
        };
        hopf.verify()?;
        Ok(hopf)
    }

    /// User-supplied structure tensors over a basis of a carrier algebra.
    ///
    /// The multiplication and involution tensors are derived from the carrier;
    /// Haar trace and distinguished projection are solved for when absent.
    /// Everything is gated by the axiom verifier, nothing is canonicalized.
    pub fn from_tensors(
        carrier: StarAlgebra,
        basis: Vec<AlgebraElement>,
        comul: CMat,
        counit: CVec,
        antipode: CMat,
        haar: Option<CVec>,
        e_coords: Option<CVec>,
    ) -> Result<Self> {
        let d = basis.len();
        if d == 0 {
            return Err(Error::Invalid("empty Hopf basis".into()));
        }
        for b in &basis {
            if b.algebra() != &carrier {
                return Err(Error::AlgebraMismatch("basis element from another algebra".into()));
            }
        }
        if comul.nrows() != d * d || comul.ncols() != d {
            return Err(Error::Invalid("comultiplication tensor must be D²×D".into()));
        }
        if counit.len() != d || antipode.nrows() != d || antipode.ncols() != d {
            return Err(Error::Invalid("counit/antipode tensor shape mismatch".into()));
        }
        // pseudoinverse of the basis coordinate matrix for re-expressing
        let nc = carrier.linear_dim();
        let mut bmat = CMat::zeros(nc, d);
        for (j, b) in basis.iter().enumerate() {
            bmat.set_column(j, &b.coords());
        }
        let gram = bmat.adjoint() * &bmat;
        let gram_inv = gram
            .try_inverse()
            .ok_or_else(|| Error::Precondition("Hopf basis is linearly dependent".into()))?;
        let pinv = gram_inv * bmat.adjoint();
        let in_basis = |x: &AlgebraElement| -> Result<CVec> {
            let v = x.coords();
            let coords = &pinv * &v;
            let back = &bmat * &coords;
            if (back - &v).norm() > EPS_EQ * v.norm().max(1.0) {
                return Err(Error::Precondition(
                    "element does not lie in the span of the Hopf basis".into(),
                ));
            }
            Ok(coords)
        };
        let mut mul = Vec::with_capacity(d);
        for i in 0..d {
            let mut m = CMat::zeros(d, d);
            for j in 0..d {
                m.set_column(j, &in_basis(&basis[i].mul(&basis[j])?)?);
            }
            mul.push(m);
        }
        let mut star = CMat::zeros(d, d);
        for (i, b) in basis.iter().enumerate() {
            star.set_column(i, &in_basis(&b.adjoint())?);
        }
        let unit_coords = in_basis(&carrier.unit())?;
        let mut hopf = HopfAlgebra {
            carrier,
            basis,
            dim: d,
            mul,
            star,
            unit_coords,
            comul,
            counit,
            antipode,
            haar: CVec::zeros(d),
            e_coords: CVec::zeros(d),
        };
        hopf.haar = match haar {
            Some(h) => h,
            None => hopf.solve_haar()?,
        };
        hopf.e_coords = match e_coords {
            Some(e) => e,
            None => hopf.solve_distinguished_projection()?,
        };
        hopf.verify()?;
        Ok(hopf)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn carrier(&self) -> &StarAlgebra {
        &self.carrier
    }

    pub fn basis(&self) -> &[AlgebraElement] {
        &self.basis
    }

    pub fn unit_coords(&self) -> &CVec {
        &self.unit_coords
    }

    pub fn e_coords(&self) -> &CVec {
        &self.e_coords
    }

    pub fn haar(&self, coords: &CVec) -> C {
        self.haar.iter().zip(coords.iter()).map(|(t, x)| t * x).sum()
    }

    pub fn counit(&self, coords: &CVec) -> C {
        self.counit.iter().zip(coords.iter()).map(|(e, x)| e * x).sum()
    }

    pub fn antipode_coords(&self, coords: &CVec) -> CVec {
        &self.antipode * coords
    }

    pub fn star_coords(&self, coords: &CVec) -> CVec {
        &self.star * coords.map(|z| z.conj())
    }

    pub fn mul_coords(&self, a: &CVec, b: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim);
        for (i, ai) in a.iter().enumerate() {
            if ai.norm() <= SPARSE_CUT {
                continue;
            }
            out += (&self.mul[i] * b) * *ai;
        }
        out
    }

    pub fn element(&self, coords: &CVec) -> AlgebraElement {
        let mut acc = self.carrier.zero();
        for (i, x) in coords.iter().enumerate() {
            acc = acc.add(&self.basis[i].scale(*x)).unwrap();
        }
        acc
    }

    /// Nonzero `(p, q, coefficient)` entries of `Δ(a_i)`.
    pub fn comul_terms(&self, i: usize) -> Vec<(usize, usize, C)> {
        let mut out = Vec::new();
        for p in 0..self.dim {
            for q in 0..self.dim {
                let v = self.comul[(p * self.dim + q, i)];
                if v.norm() > SPARSE_CUT {
                    out.push((p, q, v));
                }
            }
        }
        out
    }

    fn comul_of(&self, coords: &CVec) -> CVec {
        &self.comul * coords
    }

    fn solve_haar(&self) -> Result<CVec> {
        // linear conditions: Σ τ(a^L) a^R = τ(a)·1 for every basis a, plus τ(1)=1
        let d = self.dim;
        let rows = d * d + 1;
        let mut m = CMat::zeros(rows, d);
        let mut rhs = CVec::zeros(rows);
        for i in 0..d {
            for (p, q, dc) in self.comul_terms(i) {
                for k in 0..d {
                    // coefficient of τ_p from term dc·a_q at coordinate k
                    if q == k {
                        m[(i * d + k, p)] += dc;
                    }
                }
            }
            for k in 0..d {
                m[(i * d + k, i)] -= self.unit_coords[k];
            }
        }
        for p in 0..d {
            m[(d * d, p)] = self.unit_coords[p];
        }
        rhs[d * d] = c(1.0, 0.0);
        lstsq(&m, &rhs).ok_or_else(|| Error::Precondition("Haar trace system is singular".into()))
    }

    fn solve_distinguished_projection(&self) -> Result<CVec> {
        // null space of the stacked maps v ↦ a_i v − ε(a_i) v
        let d = self.dim;
        let mut stacked = CMat::zeros(d * d, d);
        for i in 0..d {
            let block = &self.mul[i] - CMat::identity(d, d) * self.counit[i];
            stacked.view_mut((i * d, 0), (d, d)).copy_from(&block);
        }
        let svd = stacked.svd(false, true);
        let vt = svd.v_t.expect("requested");
        let top = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
        let mut kernel: Vec<CVec> = Vec::new();
        for (i, &s) in svd.singular_values.iter().enumerate() {
            if s <= 1e-10 * top.max(1.0) {
                kernel.push(vt.row(i).adjoint());
            }
        }
        for i in svd.singular_values.len()..vt.nrows() {
            kernel.push(vt.row(i).adjoint());
        }
        if kernel.len() != 1 {
            return Err(Error::Precondition(format!(
                "distinguished projection is not unique: solution space has dimension {}",
                kernel.len()
            )));
        }
        // scale so that e² = e
        let v = kernel.pop().unwrap();
        let sq = self.mul_coords(&v, &v);
        // sq = s·v for some scalar s; pick the coordinate of largest magnitude
        let (k, _) = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap();
        let s = sq[k] / v[k];
        if s.norm() < 1e-12 {
            return Err(Error::Precondition("candidate projection is nilpotent".into()));
        }
        Ok(v / s)
    }

    /// Full identity battery for the Hopf *-algebra axioms over the basis,
    /// at the default tolerance.
    pub fn verify(&self) -> Result<()> {
        self.verify_with(EPS_EQ)
    }

    /// Identity battery at a caller-chosen tolerance.
    pub fn verify_with(&self, tol: f64) -> Result<()> {
        let d = self.dim;
        let close = |a: &CVec, b: &CVec, what: &str| -> Result<()> {
            if (a - b).norm() > tol * b.norm().max(1.0) {
                Err(Error::AxiomViolation(format!("{what} (residual {:.3e})", (a - b).norm())))
            } else {
                Ok(())
            }
        };
        // carrier-side sanity of the derived tensors
        for i in 0..d {
            let lhs = self.element(&self.star_coords(&unit_vec(d, i)));
            if !lhs.sub(&self.basis[i].adjoint())?.is_zero(tol) {
                return Err(Error::AxiomViolation("involution tensor mismatch".into()));
            }
        }
        // (i) Δ is a *-homomorphism
        for i in 0..d {
            for j in 0..d {
                let prod = self.mul[i].column(j).clone_owned();
                let lhs = self.comul_of(&prod);
                let mut rhs = CVec::zeros(d * d);
                for (p, q, c1) in self.comul_terms(i) {
                    for (r, s, c2) in self.comul_terms(j) {
                        let pr = self.mul[p].column(r).clone_owned();
                        let qs = self.mul[q].column(s).clone_owned();
                        for (u, pu) in pr.iter().enumerate() {
                            if pu.norm() <= SPARSE_CUT {
                                continue;
                            }
                            for (v, qv) in qs.iter().enumerate() {
                                rhs[u * d + v] += c1 * c2 * pu * qv;
                            }
                        }
                    }
                }
                close(&lhs, &rhs, "Δ(ab) = Δ(a)Δ(b)")?;
            }
        }
        for i in 0..d {
            let lhs = self.comul_of(&self.star_coords(&unit_vec(d, i)));
            let mut rhs = CVec::zeros(d * d);
            for (p, q, dc) in self.comul_terms(i) {
                let ps = self.star_coords(&unit_vec(d, p));
                let qs = self.star_coords(&unit_vec(d, q));
                for (u, pu) in ps.iter().enumerate() {
                    for (v, qv) in qs.iter().enumerate() {
                        rhs[u * d + v] += dc.conj() * pu * qv;
                    }
                }
            }
            close(&lhs, &rhs, "Δ(a*) = Δ(a)*")?;
        }
        // (i) ε is a *-homomorphism
        for i in 0..d {
            for j in 0..d {
                let prod = self.mul[i].column(j).clone_owned();
                let lhs = self.counit(&prod);
                let rhs = self.counit[i] * self.counit[j];
                if (lhs - rhs).norm() > tol {
                    return Err(Error::AxiomViolation("ε(ab) = ε(a)ε(b)".into()));
                }
            }
            let lhs = self.counit(&self.star_coords(&unit_vec(d, i)));
            if (lhs - self.counit[i].conj()).norm() > tol {
                return Err(Error::AxiomViolation("ε(a*) = conj ε(a)".into()));
            }
        }
        // (i) S is a *-preserving antimultiplicative involution
        for i in 0..d {
            for j in 0..d {
                let prod = self.mul[i].column(j).clone_owned();
                let lhs = self.antipode_coords(&prod);
                let rhs = self.mul_coords(
                    &self.antipode_coords(&unit_vec(d, j)),
                    &self.antipode_coords(&unit_vec(d, i)),
                );
                close(&lhs, &rhs, "S(ab) = S(b)S(a)")?;
            }
            let twice = self.antipode_coords(&self.antipode_coords(&unit_vec(d, i)));
            close(&twice, &unit_vec(d, i), "S∘S = id")?;
            let lhs = self.antipode_coords(&self.star_coords(&unit_vec(d, i)));
            let rhs = self.star_coords(&self.antipode_coords(&unit_vec(d, i)));
            close(&lhs, &rhs, "S(a*) = S(a)*")?;
        }
        // (ii) unit axioms
        close(
            &self.comul_of(&self.unit_coords),
            &tensor_coords(&self.unit_coords, &self.unit_coords),
            "Δ(1) = 1⊗1",
        )?;
        if (self.counit(&self.unit_coords) - c(1.0, 0.0)).norm() > tol {
            return Err(Error::AxiomViolation("ε(1) = 1".into()));
        }
        close(
            &self.antipode_coords(&self.unit_coords),
            &self.unit_coords,
            "S(1) = 1",
        )?;
        // (iii) coassociativity
        for i in 0..d {
            let mut lhs = CVec::zeros(d * d * d);
            let mut rhs = CVec::zeros(d * d * d);
            for (p, q, dc) in self.comul_terms(i) {
                for (u, v, dc2) in self.comul_terms(p) {
                    lhs[(u * d + v) * d + q] += dc * dc2;
                }
                for (u, v, dc2) in self.comul_terms(q) {
                    rhs[(p * d + u) * d + v] += dc * dc2;
                }
            }
            close(&lhs, &rhs, "coassociativity (Δ⊗id)Δ = (id⊗Δ)Δ")?;
        }
        // (iv) counit law in both sum orders
        for i in 0..d {
            let mut left = CVec::zeros(d);
            let mut right = CVec::zeros(d);
            for (p, q, dc) in self.comul_terms(i) {
                left += unit_vec(d, q) * (dc * self.counit[p]);
                right += unit_vec(d, p) * (dc * self.counit[q]);
            }
            close(&left, &unit_vec(d, i), "counit law: Σ ε(a^L)a^R = a")?;
            close(&right, &unit_vec(d, i), "counit law: Σ ε(a^R)a^L = a")?;
        }
        // (v) antipode laws in all four sum orders
        for i in 0..d {
            let target = self.unit_coords.clone() * self.counit[i];
            let mut sums = [CVec::zeros(d), CVec::zeros(d), CVec::zeros(d), CVec::zeros(d)];
            for (p, q, dc) in self.comul_terms(i) {
                let sp = self.antipode_coords(&unit_vec(d, p));
                let sq = self.antipode_coords(&unit_vec(d, q));
                sums[0] += self.mul_coords(&sp, &unit_vec(d, q)) * dc; // Σ S(a^L)a^R
                sums[1] += self.mul_coords(&unit_vec(d, p), &sq) * dc; // Σ a^L S(a^R)
                sums[2] += self.mul_coords(&unit_vec(d, q), &sp) * dc; // Σ a^R S(a^L)
                sums[3] += self.mul_coords(&sq, &unit_vec(d, p)) * dc; // Σ S(a^R)a^L
            }
            close(&sums[0], &target, "antipode law: Σ S(a^L)a^R = ε(a)1")?;
            close(&sums[1], &target, "antipode law: Σ a^L S(a^R) = ε(a)1")?;
            close(&sums[2], &target, "antipode law: Σ a^R S(a^L) = ε(a)1")?;
            close(&sums[3], &target, "antipode law: Σ S(a^R)a^L = ε(a)1")?;
        }
        // Haar trace: normalized, tracial, invariant
        if (self.haar(&self.unit_coords) - c(1.0, 0.0)).norm() > tol {
            return Err(Error::AxiomViolation("Haar trace is not normalized".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let ab = self.mul[i].column(j).clone_owned();
                let ba = self.mul[j].column(i).clone_owned();
                if (self.haar(&ab) - self.haar(&ba)).norm() > tol {
                    return Err(Error::AxiomViolation("Haar functional is not tracial".into()));
                }
            }
            let mut left = CVec::zeros(d);
            let mut right = CVec::zeros(d);
            for (p, q, dc) in self.comul_terms(i) {
                left += unit_vec(d, q) * (dc * self.haar[p]);
                right += unit_vec(d, p) * (dc * self.haar[q]);
            }
            let target = self.unit_coords.clone() * self.haar[i];
            close(&left, &target, "Haar invariance: Σ τ(a^L)a^R = τ(a)1")?;
            close(&right, &target, "Haar invariance: Σ τ(a^R)a^L = τ(a)1")?;
        }
        // distinguished projection
        let e_elem = self.element(&self.e_coords);
        if !e_elem.is_projection(tol) {
            return Err(Error::AxiomViolation("e is not a projection".into()));
        }
        for i in 0..d {
            let ae = self.mul_coords(&unit_vec(d, i), &self.e_coords);
            let target = self.e_coords.clone() * self.counit[i];
            close(&ae, &target, "ae = ε(a)e")?;
            let ea = self.mul_coords(&self.e_coords, &unit_vec(d, i));
            close(&ea, &target, "e is central (ea = ε(a)e)")?;
        }
        close(
            &self.antipode_coords(&self.e_coords),
            &self.e_coords,
            "S(e) = e",
        )?;
        if (self.haar(&self.e_coords) - c(1.0 / d as f64, 0.0)).norm() > tol {
            return Err(Error::AxiomViolation("τ(e) = 1/dim A".into()));
        }
        if (self.counit(&self.e_coords) - c(1.0, 0.0)).norm() > tol {
            return Err(Error::AxiomViolation("ε(e) = 1".into()));
        }
        Ok(())
    }
}

fn unit_vec(d: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[i] = c(1.0, 0.0);
    v
}

fn tensor_coords(a: &CVec, b: &CVec) -> CVec {
    let d = a.len();
    let mut out = CVec::zeros(d * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

fn lstsq(m: &CMat, rhs: &CVec) -> Option<CVec> {
    let svd = m.clone().svd(true, true);
    svd.solve(rhs, 1e-12).ok()
}

/// An action of a Hopf *-algebra on a [`StarAlgebra`], stored as one
/// coordinate matrix per Hopf basis element; the five action axioms are
/// verified at construction.
#[derive(Debug, Clone)]
pub struct HopfAction {
    hopf: HopfAlgebra,
    algebra: StarAlgebra,
    tensors: Vec<CMat>,
}

impl HopfAction {
    pub fn new(hopf: HopfAlgebra, algebra: StarAlgebra, tensors: Vec<CMat>) -> Result<Self> {
        let n = algebra.linear_dim();
        if tensors.len() != hopf.dim() {
            return Err(Error::Invalid("one tensor per Hopf basis element".into()));
        }
        for t in &tensors {
            if t.nrows() != n || t.ncols() != n {
                return Err(Error::Invalid(format!("action tensors must be {n}x{n}")));
            }
        }
        let action = HopfAction { hopf, algebra, tensors };
        action.verify()?;
        Ok(action)
    }

    /// `λ_g · x := α_g(x)` as an action of `C*(G)`.
    pub fn from_group_action(action: &GroupAction) -> Result<Self> {
        let hopf = HopfAlgebra::group_hopf(action.group())?;
        let tensors = action
            .group()
            .elements()
            .map(|g| action.map_matrix(g).clone())
            .collect();
        HopfAction::new(hopf, action.algebra().clone(), tensors)
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        &self.hopf
    }

    pub fn algebra(&self) -> &StarAlgebra {
        &self.algebra
    }

    pub fn act_basis(&self, i: usize, x: &AlgebraElement) -> AlgebraElement {
        self.algebra.from_coords(&(&self.tensors[i] * x.coords()))
    }

    pub fn act(&self, a: &CVec, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch("element from another algebra".into()));
        }
        let mut m = x.coords() * c(0.0, 0.0);
        for (i, ai) in a.iter().enumerate() {
            if ai.norm() > SPARSE_CUT {
                m += (&self.tensors[i] * x.coords()) * *ai;
            }
        }
        Ok(self.algebra.from_coords(&m))
    }

    /// `E(x) = e·x` as a coordinate matrix.
    pub fn expectation_matrix(&self) -> CMat {
        let n = self.algebra.linear_dim();
        let mut m = CMat::zeros(n, n);
        for (i, ei) in self.hopf.e_coords().iter().enumerate() {
            if ei.norm() > SPARSE_CUT {
                m += &self.tensors[i] * *ei;
            }
        }
        m
    }

    /// `E(x) = e·x`.
    pub fn expectation_e(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.act(&self.hopf.e_coords().clone(), x)
    }

    fn verify(&self) -> Result<()> {
        let d = self.hopf.dim();
        let basis = self.algebra.basis_elements();
        let one = self.algebra.unit();
        // 1·x = x
        let unit_act = {
            let n = self.algebra.linear_dim();
            let mut m = CMat::zeros(n, n);
            for (i, ui) in self.hopf.unit_coords().iter().enumerate() {
                if ui.norm() > SPARSE_CUT {
                    m += &self.tensors[i] * *ui;
                }
            }
            m
        };
        let n = self.algebra.linear_dim();
        if (&unit_act - CMat::identity(n, n)).norm() > EPS_EQ * n as f64 {
            return Err(Error::AxiomViolation("Hopf action: 1·x != x".into()));
        }
        for i in 0..d {
            // a·1 = ε(a)1
            let lhs = self.act_basis(i, &one);
            let rhs = one.scale(self.hopf.counit(&unit_vec(d, i)));
            if !lhs.sub(&rhs)?.is_zero(EPS_EQ) {
                return Err(Error::AxiomViolation("Hopf action: a·1 != ε(a)1".into()));
            }
            // ab·x = a·(b·x)
            for j in 0..d {
                let prod = self.hopf.mul_coords(&unit_vec(d, i), &unit_vec(d, j));
                for x in basis.iter() {
                    let lhs = self.act(&prod, x)?;
                    let rhs = self.act_basis(i, &self.act_basis(j, x));
                    if !lhs.sub(&rhs)?.is_zero(EPS_EQ) {
                        return Err(Error::AxiomViolation("Hopf action: (ab)·x != a·(b·x)".into()));
                    }
                }
            }
            // a·xy = Σ (a^L·x)(a^R·y)
            let terms = self.hopf.comul_terms(i);
            for x in basis.iter() {
                for y in basis.iter() {
                    let lhs = self.act_basis(i, &x.mul(y)?);
                    let mut rhs = self.algebra.zero();
                    for &(p, q, dc) in &terms {
                        rhs = rhs.add(&self.act_basis(p, x).mul(&self.act_basis(q, y))?.scale(dc))?;
                    }
                    if !lhs.sub(&rhs)?.is_zero(EPS_EQ) {
                        return Err(Error::AxiomViolation(
                            "Hopf action: a·(xy) != Σ (a^L·x)(a^R·y)".into(),
                        ));
                    }
                }
            }
            // (a·x)* = S(a*)·x*
            let sa_star = self.hopf.antipode_coords(&self.hopf.star_coords(&unit_vec(d, i)));
            for x in basis.iter() {
                let lhs = self.act_basis(i, x).adjoint();
                let rhs = self.act(&sa_star, &x.adjoint())?;
                if !lhs.sub(&rhs)?.is_zero(EPS_EQ) {
                    return Err(Error::AxiomViolation("Hopf action: (a·x)* != S(a*)·x*".into()));
                }
            }
        }
        Ok(())
    }

    /// Fixed point space `M^A = {x : a·x = ε(a)x for all a}`.
    pub fn fixed_point_dim(&self) -> usize {
        let n = self.algebra.linear_dim();
        let d = self.hopf.dim();
        let mut stacked = CMat::zeros(n * d, n);
        for i in 0..d {
            let block = &self.tensors[i] - CMat::identity(n, n) * self.hopf.counit(&unit_vec(d, i));
            stacked.view_mut((i * n, 0), (n, n)).copy_from(&block);
        }
        let svd = stacked.svd(false, false);
        let top = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > 1e-10 * top.max(1.0))
            .count();
        n - rank
    }
}

/// The smash product `M ⋊ A` over a Hopf action: the vector space `M⊗A`
/// with `(x⊗a)(y⊗b) = Σ x(a^L·y) ⊗ a^R b`. Elements are coordinate vectors
/// of length `N·D` over the basis `x_j ⊗ a_i`, index `j·D + i`.
#[derive(Debug, Clone)]
pub struct SmashProduct {
    action: HopfAction,
    dim: usize,
    /// `pair[(j,i)][(l,k)]` = coordinates of the basis product.
    pair: Vec<Vec<CVec>>,
    star_basis: Vec<CVec>,
}

impl SmashProduct {
    pub fn new(action: HopfAction) -> Result<Self> {
        let m_basis = action.algebra().basis_elements();
        let n = m_basis.len();
        let d = action.hopf().dim();
        let dim = n * d;
        let mut pair = vec![vec![CVec::zeros(dim); dim]; dim];
        for j in 0..n {
            for i in 0..d {
                let terms = action.hopf().comul_terms(i);
                for l in 0..n {
                    for k in 0..d {
                        let mut out = CVec::zeros(dim);
                        for &(p, q, dc) in &terms {
                            let m_part = m_basis[j].mul(&action.act_basis(p, &m_basis[l]))?;
                            let a_part = action.hopf().mul_coords(&unit_vec(d, q), &unit_vec(d, k));
                            let mc = m_part.coords();
                            for (r, xr) in mc.iter().enumerate() {
                                if xr.norm() <= SPARSE_CUT {
                                    continue;
                                }
                                for (s, ys) in a_part.iter().enumerate() {
                                    out[r * d + s] += dc * xr * ys;
                                }
                            }
                        }
                        pair[j * d + i][l * d + k] = out;
                    }
                }
            }
        }
        let mut star_basis = vec![CVec::zeros(dim); dim];
        for j in 0..n {
            for i in 0..d {
                let mut out = CVec::zeros(dim);
                for (p, q, dc) in action.hopf().comul_terms(i) {
                    let p_star = action.hopf().star_coords(&unit_vec(d, p));
                    let left = action.act(&p_star, &m_basis[j].adjoint())?;
                    let right = action.hopf().star_coords(&unit_vec(d, q));
                    let lc = left.coords();
                    for (r, xr) in lc.iter().enumerate() {
                        if xr.norm() <= SPARSE_CUT {
                            continue;
                        }
                        for (s, ys) in right.iter().enumerate() {
                            out[r * d + s] += dc.conj() * xr * ys;
                        }
                    }
                }
                star_basis[j * d + i] = out;
            }
        }
        let smash = SmashProduct { action, dim, pair, star_basis };
        smash.verify()?;
        Ok(smash)
    }

    pub fn action(&self) -> &HopfAction {
        &self.action
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self, a: &CVec, b: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim);
        for (i, ai) in a.iter().enumerate() {
            if ai.norm() <= SPARSE_CUT {
                continue;
            }
            let row = &self.pair[i];
            for (j, bj) in b.iter().enumerate() {
                if bj.norm() <= SPARSE_CUT {
                    continue;
                }
                out += &row[j] * (ai * bj);
            }
        }
        out
    }

    pub fn star(&self, a: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim);
        for (i, ai) in a.iter().enumerate() {
            if ai.norm() > SPARSE_CUT {
                out += &self.star_basis[i] * ai.conj();
            }
        }
        out
    }

    pub fn embed_m(&self, x: &AlgebraElement) -> Result<CVec> {
        if x.algebra() != self.action.algebra() {
            return Err(Error::AlgebraMismatch("element from another algebra".into()));
        }
        let d = self.action.hopf().dim();
        let unit = self.action.hopf().unit_coords();
        let mut out = CVec::zeros(self.dim);
        for (j, xj) in x.coords().iter().enumerate() {
            for (i, ui) in unit.iter().enumerate() {
                out[j * d + i] += xj * ui;
            }
        }
        Ok(out)
    }

    pub fn embed_a(&self, a: &CVec) -> CVec {
        let d = self.action.hopf().dim();
        let one = self.action.algebra().unit().coords();
        let mut out = CVec::zeros(self.dim);
        for (j, xj) in one.iter().enumerate() {
            for (i, ai) in a.iter().enumerate() {
                out[j * d + i] += xj * ai;
            }
        }
        out
    }

    pub fn unit(&self) -> CVec {
        self.embed_m(&self.action.algebra().unit()).expect("same algebra")
    }

    /// `F(Σ x_j ⊗ a_j) = Σ τ(a_j) x_j`.
    pub fn expectation_f(&self, v: &CVec) -> AlgebraElement {
        let d = self.action.hopf().dim();
        let n = self.action.algebra().linear_dim();
        let mut coords = CVec::zeros(n);
        for j in 0..n {
            let a_part = CVec::from_fn(d, |i, _| v[j * d + i]);
            coords[j] = self.action.hopf().haar(&a_part);
        }
        self.action.algebra().from_coords(&coords)
    }

    fn verify(&self) -> Result<()> {
        // unital embeddings and associativity / involution on basis triples
        let one = self.unit();
        for i in 0..self.dim {
            let b = unit_vec(self.dim, i);
            if (self.mul(&one, &b) - &b).norm() > EPS_EQ {
                return Err(Error::Consistency("smash unit fails on the left".into()));
            }
            if (self.mul(&b, &one) - &b).norm() > EPS_EQ {
                return Err(Error::Consistency("smash unit fails on the right".into()));
            }
        }
        for i in 0..self.dim {
            let bi = unit_vec(self.dim, i);
            for j in 0..self.dim {
                let bj = unit_vec(self.dim, j);
                let ij = self.mul(&bi, &bj);
                for k in 0..self.dim {
                    let bk = unit_vec(self.dim, k);
                    let lhs = self.mul(&ij, &bk);
                    let rhs = self.mul(&bi, &self.mul(&bj, &bk));
                    if (lhs - rhs).norm() > 1e-8 {
                        return Err(Error::Consistency(format!(
                            "smash product is not associative at ({i},{j},{k})"
                        )));
                    }
                }
                // (ab)* = b* a*
                let lhs = self.star(&ij);
                let rhs = self.mul(&self.star(&bj), &self.star(&bi));
                if (lhs - rhs).norm() > 1e-8 {
                    return Err(Error::Consistency(
                        "smash involution is not anti-multiplicative".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}
