//! Finite groups as multiplication tables, *-automorphism actions on a
//! [`StarAlgebra`], subgroup enumeration and the fixed point subalgebra.

use nalgebra::DMatrix;

use crate::algebra::{c, span_in, AlgebraElement, CMat, StarAlgebra, Subspace};
use crate::{Error, Result, EPS_EQ, EPS_RANK};

/// Default bound on |G| for subgroup enumeration (exponential downstream).
pub const SUBGROUP_ORDER_BOUND: usize = 16;

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Invalid("empty multiplication table".into()));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::Invalid("table is not square over 0..n".into()));
            }
        }
        // identity
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::Invalid("no identity element".into()))?;
        // inverses
        let mut inverse = vec![0; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::Invalid(format!("element {g} has no inverse")))?;
        }
        // associativity
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    if table[table[a][b]][cc] != table[a][table[b][cc]] {
                        return Err(Error::Invalid(format!(
                            "associativity fails at ({a},{b},{cc})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { order: n, table, identity, inverse })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(table).expect("cyclic table is a group")
    }

    /// The symmetric group on `n` letters (intended for small `n`).
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::Capacity("symmetric(n) supports 1 <= n <= 5".into()));
        }
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        // (a∘b)(i) = a(b(i))
                        let comp: Vec<usize> = (0..n).map(|i| a[b[i]]).collect();
                        index(&comp)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(table)
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let n = self.order * other.order;
        let idx = |a: usize, b: usize| a * other.order + b;
        let mut table = vec![vec![0; n]; n];
        for a1 in 0..self.order {
            for b1 in 0..other.order {
                for a2 in 0..self.order {
                    for b2 in 0..other.order {
                        table[idx(a1, b1)][idx(a2, b2)] =
                            idx(self.mul(a1, a2), other.mul(b1, b2));
                    }
                }
            }
        }
        FiniteGroup::from_table(table).expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    /// All subgroups, by breadth-first closure over generated subgroups.
    pub fn enumerate_subgroups(&self) -> Result<SubgroupLattice> {
        if self.order > SUBGROUP_ORDER_BOUND {
            return Err(Error::Capacity(format!(
                "subgroup enumeration bounded at order {SUBGROUP_ORDER_BOUND}, group has order {}",
                self.order
            )));
        }
        let trivial = vec![self.identity];
        let mut found: Vec<Vec<usize>> = vec![trivial.clone()];
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for g in 0..self.order {
                if h.contains(&g) {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let closed = self.closure(&gens);
                if !found.contains(&closed) {
                    found.push(closed.clone());
                    frontier.push(closed);
                }
            }
        }
        found.sort_by_key(|s| (s.len(), s.clone()));
        Ok(SubgroupLattice { subgroups: found })
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: Vec<usize> = vec![self.identity];
        let mut frontier: Vec<usize> = vec![self.identity];
        for &g in gens {
            if !set.contains(&g) {
                set.push(g);
                frontier.push(g);
            }
        }
        while let Some(x) = frontier.pop() {
            for &y in set.clone().iter() {
                for z in [self.mul(x, y), self.mul(y, x), self.inv(x)] {
                    if !set.contains(&z) {
                        set.push(z);
                        frontier.push(z);
                    }
                }
            }
        }
        set.sort_unstable();
        set
    }

    /// Left multiplication action on the cosets `G/H`; returns the coset
    /// representatives and, per group element, the permutation of cosets.
    pub fn coset_action(&self, subgroup: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>) {
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        let mut reps = Vec::new();
        for g in 0..self.order {
            let mut coset: Vec<usize> = subgroup.iter().map(|&h| self.mul(g, h)).collect();
            coset.sort_unstable();
            if !cosets.contains(&coset) {
                cosets.push(coset);
                reps.push(g);
            }
        }
        let perms = (0..self.order)
            .map(|g| {
                reps.iter()
                    .map(|&r| {
                        let mut moved: Vec<usize> =
                            subgroup.iter().map(|&h| self.mul(self.mul(g, r), h)).collect();
                        moved.sort_unstable();
                        cosets.iter().position(|cs| cs == &moved).unwrap()
                    })
                    .collect()
            })
            .collect();
        (reps, perms)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        let mut next = Vec::new();
        for p in out {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// All subgroups of a group, each as a sorted element index set.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    subgroups: Vec<Vec<usize>>,
}

impl SubgroupLattice {
    pub fn subgroups(&self) -> &[Vec<usize>] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }
}

/// An action of a finite group by *-automorphisms, one coordinate matrix
/// per group element. Automorphism and homomorphism axioms are verified at
/// construction.
#[derive(Debug, Clone)]
pub struct GroupAction {
    group: FiniteGroup,
    algebra: StarAlgebra,
    maps: Vec<CMat>,
}

impl GroupAction {
    /// Raw N×N coordinate matrices, one per group element, axiom checked.
    pub fn from_matrices(
        algebra: StarAlgebra,
        group: FiniteGroup,
        maps: Vec<CMat>,
    ) -> Result<Self> {
        let n = algebra.linear_dim();
        if maps.len() != group.order() {
            return Err(Error::Invalid("one matrix per group element required".into()));
        }
        for m in &maps {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Invalid(format!("action matrices must be {n}x{n}")));
            }
        }
        let action = GroupAction { group, algebra, maps };
        action.verify()?;
        Ok(action)
    }

    /// Inner action `α_g = Ad(u_g)` from a strict unitary representation.
    pub fn inner(
        algebra: StarAlgebra,
        group: FiniteGroup,
        unitaries: Vec<AlgebraElement>,
    ) -> Result<Self> {
        if unitaries.len() != group.order() {
            return Err(Error::Invalid("one unitary per group element required".into()));
        }
        for (g, u) in unitaries.iter().enumerate() {
            if u.algebra() != &algebra {
                return Err(Error::AlgebraMismatch("unitary from another algebra".into()));
            }
            if !u.is_unitary(EPS_EQ) {
                return Err(Error::Precondition(format!("u_{g} is not unitary")));
            }
        }
        for g in group.elements() {
            for h in group.elements() {
                let prod = unitaries[g].mul(&unitaries[h])?;
                let diff = prod.sub(&unitaries[group.mul(g, h)])?;
                if !diff.is_zero(EPS_EQ) {
                    return Err(Error::Precondition(format!(
                        "u_g u_h != u_gh at pair ({g},{h}); strict representation required"
                    )));
                }
            }
        }
        let basis = algebra.basis_elements();
        let n = algebra.linear_dim();
        let maps = unitaries
            .iter()
            .map(|u| {
                let mut m = CMat::zeros(n, n);
                for (j, b) in basis.iter().enumerate() {
                    let img = u.mul(b).unwrap().mul(&u.adjoint()).unwrap();
                    m.set_column(j, &img.coords());
                }
                m
            })
            .collect();
        GroupAction::from_matrices(algebra, group, maps)
    }

    /// Permutation action on `C(X)`: `α_g(f)(x) = f(g⁻¹x)`.
    ///
    /// `perms[g][x] = g·x`; must be a homomorphism into the symmetric group.
    pub fn permutation(
        algebra: StarAlgebra,
        group: FiniteGroup,
        perms: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let npts = algebra.num_blocks();
        if algebra.block_dims().iter().any(|&d| d != 1) {
            return Err(Error::Precondition(
                "permutation actions require an algebra of 1x1 blocks".into(),
            ));
        }
        if perms.len() != group.order() {
            return Err(Error::Invalid("one permutation per group element required".into()));
        }
        for p in &perms {
            let mut seen = vec![false; npts];
            if p.len() != npts {
                return Err(Error::Invalid("permutation length mismatch".into()));
            }
            for &x in p {
                if x >= npts || seen[x] {
                    return Err(Error::Invalid("not a permutation".into()));
                }
                seen[x] = true;
            }
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                for x in 0..npts {
                    if perms[g][perms[h][x]] != perms[gh][x] {
                        return Err(Error::Invalid(format!(
                            "perm map is not a homomorphism at pair ({g},{h})"
                        )));
                    }
                }
            }
        }
        let maps = group
            .elements()
            .map(|g| {
                let mut m = CMat::zeros(npts, npts);
                let ginv = group.inv(g);
                for x in 0..npts {
                    // coordinate x of α_g(f) reads f at g^{-1}x
                    m[(x, perms[ginv][x])] = c(1.0, 0.0);
                }
                m
            })
            .collect();
        GroupAction::from_matrices(algebra, group, maps)
    }

    pub fn trivial(algebra: StarAlgebra, group: FiniteGroup) -> Self {
        let n = algebra.linear_dim();
        let maps = group.elements().map(|_| CMat::identity(n, n)).collect();
        GroupAction { group, algebra, maps }
    }

    fn verify(&self) -> Result<()> {
        let n = self.algebra.linear_dim();
        let ident = CMat::identity(n, n);
        if (&self.maps[self.group.identity()] - &ident).norm() > EPS_EQ * (n as f64) {
            return Err(Error::AxiomViolation("alpha_iota is not the identity".into()));
        }
        for g in self.group.elements() {
            for h in self.group.elements() {
                let comp = &self.maps[g] * &self.maps[h];
                let diff = (&comp - &self.maps[self.group.mul(g, h)]).norm();
                if diff > EPS_EQ * (n as f64) {
                    return Err(Error::AxiomViolation(format!(
                        "alpha_g alpha_h != alpha_gh at pair ({g},{h}), residual {diff:.3e}"
                    )));
                }
            }
        }
        let basis = self.algebra.basis_elements();
        let one = self.algebra.unit();
        for g in self.group.elements() {
            if !self.apply(g, &one)?.sub(&one)?.is_zero(EPS_EQ) {
                return Err(Error::AxiomViolation(format!("alpha_{g}(1) != 1")));
            }
            let images: Vec<AlgebraElement> =
                basis.iter().map(|b| self.apply(g, b).unwrap()).collect();
            for (a, ia) in basis.iter().zip(&images) {
                let star = self.apply(g, &a.adjoint())?;
                if !star.sub(&ia.adjoint())?.is_zero(EPS_EQ) {
                    return Err(Error::AxiomViolation(format!(
                        "alpha_{g} does not preserve the involution"
                    )));
                }
            }
            for (a, ia) in basis.iter().zip(&images) {
                for (b, ib) in basis.iter().zip(&images) {
                    let lhs = self.apply(g, &a.mul(b)?)?;
                    let rhs = ia.mul(ib)?;
                    if !lhs.sub(&rhs)?.is_zero(EPS_EQ) {
                        return Err(Error::AxiomViolation(format!(
                            "alpha_{g} is not multiplicative"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn algebra(&self) -> &StarAlgebra {
        &self.algebra
    }

    pub fn map_matrix(&self, g: usize) -> &CMat {
        &self.maps[g]
    }

    pub fn apply(&self, g: usize, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch("element from another algebra".into()));
        }
        Ok(self.algebra.from_coords(&(&self.maps[g] * x.coords())))
    }

    /// The fixed point algebra `M^α = ∩_g ker(α_g − id)` as a subspace,
    /// verified to be closed under product and adjoint.
    pub fn fixed_point_algebra(&self) -> Result<Subspace> {
        let n = self.algebra.linear_dim();
        let order = self.group.order();
        let mut stacked = DMatrix::zeros(n * order, n);
        for g in self.group.elements() {
            let block = &self.maps[g] - CMat::identity(n, n);
            stacked.view_mut((g * n, 0), (n, n)).copy_from(&block);
        }
        let svd = stacked.svd(false, true);
        let vt = svd.v_t.expect("requested");
        let top = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
        let mut kernel = Vec::new();
        for (i, &s) in svd.singular_values.iter().enumerate() {
            if s <= EPS_RANK * top.max(1.0) {
                kernel.push(self.algebra.from_coords(&vt.row(i).adjoint()));
            }
        }
        // rows of V^t beyond the singular value count also span the kernel
        for i in svd.singular_values.len()..vt.nrows() {
            kernel.push(self.algebra.from_coords(&vt.row(i).adjoint()));
        }
        let sub = span_in(&self.algebra, &kernel)?;
        if !sub.is_star_subalgebra(EPS_EQ)? {
            return Err(Error::Consistency(
                "fixed point space is not closed under product/adjoint".into(),
            ));
        }
        Ok(sub)
    }

    /// Orbit partition of the points of a permutation action.
    pub fn orbits_of_permutation(perms: &[Vec<usize>], npts: usize) -> Vec<Vec<usize>> {
        let mut seen = vec![false; npts];
        let mut orbits = Vec::new();
        for x in 0..npts {
            if seen[x] {
                continue;
            }
            let mut orbit = vec![x];
            seen[x] = true;
            let mut frontier = vec![x];
            while let Some(y) = frontier.pop() {
                for p in perms {
                    let z = p[y];
                    if !seen[z] {
                        seen[z] = true;
                        orbit.push(z);
                        frontier.push(z);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }
}

/// Coordinate matrix of the automorphism permuting blocks of equal size.
///
/// `perm[i]` is the block index that block `i` is sent to.
pub fn block_permutation_matrix(algebra: &StarAlgebra, perm: &[usize]) -> Result<CMat> {
    let dims = algebra.block_dims();
    if perm.len() != dims.len() {
        return Err(Error::Invalid("one image per block required".into()));
    }
    let mut seen = vec![false; dims.len()];
    for (i, &j) in perm.iter().enumerate() {
        if j >= dims.len() || seen[j] || dims[i] != dims[j] {
            return Err(Error::Invalid(
                "block permutation must be a bijection between equal sized blocks".into(),
            ));
        }
        seen[j] = true;
    }
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0usize, |acc, &d| {
            let here = *acc;
            *acc += d * d;
            Some(here)
        })
        .collect();
    let n = algebra.linear_dim();
    let mut m = CMat::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        let d = dims[i];
        for k in 0..d * d {
            m[(offsets[j] + k, offsets[i] + k)] = c(1.0, 0.0);
        }
    }
    Ok(m)
}
