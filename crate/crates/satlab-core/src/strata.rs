//! Finite group actions on finite spaces: isotropy strata, the closed-form
//! index function x ↦ |G|/|G_x|, the singleton-indicator quasi-basis, and
//! the freeness ⟺ saturation equivalence, all cross-checked against the
//! general engine on the induced action on C(X).

use crate::algebra::{c, AlgebraElement, StarAlgebra};
use crate::group::{FiniteGroup, GroupAction};
use crate::index::{check_quasi_basis, saturation_battery, Expectation, QuasiBasis};
use crate::{Error, Result, EPS_EQ};

/// Represented-dimension budget for the battery cross-check inside
/// [`freeness_saturation_check`].
const REPRESENTED_DIM_BUDGET: usize = 4096;

/// A finite group acting on a finite point set by permutations.
#[derive(Debug, Clone)]
pub struct FiniteGSpace {
    labels: Vec<String>,
    group: FiniteGroup,
    /// `perms[g][x] = g·x`
    perms: Vec<Vec<usize>>,
}

impl FiniteGSpace {
    pub fn new(labels: Vec<String>, group: FiniteGroup, perms: Vec<Vec<usize>>) -> Result<Self> {
        let npts = labels.len();
        if npts == 0 {
            return Err(Error::Invalid("the space must have at least one point".into()));
        }
        if perms.len() != group.order() {
            return Err(Error::Invalid("one permutation per group element required".into()));
        }
        for p in &perms {
            if p.len() != npts {
                return Err(Error::Invalid("permutation length mismatch".into()));
            }
            let mut seen = vec![false; npts];
            for &x in p {
                if x >= npts || seen[x] {
                    return Err(Error::Invalid("not a permutation of the points".into()));
                }
                seen[x] = true;
            }
        }
        if perms[group.identity()].iter().enumerate().any(|(x, &gx)| gx != x) {
            return Err(Error::Invalid("identity must act trivially".into()));
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                for x in 0..npts {
                    if perms[g][perms[h][x]] != perms[gh][x] {
                        return Err(Error::Invalid(format!(
                            "point action is not a homomorphism at pair ({g},{h})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGSpace { labels, group, perms })
    }

    /// The left translation action of `G` on the coset space `G/H`.
    pub fn from_coset_action(group: FiniteGroup, subgroup: &[usize]) -> Result<Self> {
        let (reps, perms) = group.coset_action(subgroup);
        let labels = reps.iter().map(|r| format!("g{r}H")).collect();
        FiniteGSpace::new(labels, group, perms)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.perms[g][x]
    }

    /// The stabilizer `G_x = {g : gx = x}`, sorted.
    pub fn isotropy(&self, x: usize) -> Vec<usize> {
        self.group.elements().filter(|&g| self.perms[g][x] == x).collect()
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        GroupAction::orbits_of_permutation(&self.perms, self.size())
    }

    pub fn is_free(&self) -> bool {
        (0..self.size()).all(|x| self.isotropy(x).len() == 1)
    }

    /// `C(X)` as a direct sum of 1×1 blocks.
    pub fn algebra(&self) -> StarAlgebra {
        StarAlgebra::functions(self.size()).expect("nonempty point set")
    }

    /// The induced action `α_g(f)(x) = f(g^{-1}x)` on `C(X)`.
    pub fn induced_action(&self) -> Result<GroupAction> {
        GroupAction::permutation(self.algebra(), self.group.clone(), self.perms.clone())
    }
}

/// The partition of `X` into strata `X_H = {x : G_x = H}`, one entry per
/// subgroup of `G` (possibly empty).
#[derive(Debug, Clone)]
pub struct StrataPartition {
    /// `(subgroup elements, points with exactly that stabilizer)`
    pub strata: Vec<(Vec<usize>, Vec<usize>)>,
    /// stabilizer per point
    pub isotropy: Vec<Vec<usize>>,
}

pub fn strata(space: &FiniteGSpace) -> Result<StrataPartition> {
    let lattice = space.group().enumerate_subgroups()?;
    let isotropy: Vec<Vec<usize>> = (0..space.size()).map(|x| space.isotropy(x)).collect();
    let strata = lattice
        .subgroups()
        .iter()
        .map(|h| {
            let points = (0..space.size()).filter(|&x| &isotropy[x] == h).collect();
            (h.clone(), points)
        })
        .collect();
    Ok(StrataPartition { strata, isotropy })
}

/// `Index(E) = Σ_H (|G|/|H|)·χ_{X_H}`, i.e. the function `x ↦ |G|/|G_x|`,
/// as an element of `C(X)`.
pub fn index_function(space: &FiniteGSpace) -> AlgebraElement {
    let order = space.group().order() as f64;
    let values: Vec<f64> = (0..space.size())
        .map(|x| order / space.isotropy(x).len() as f64)
        .collect();
    space.algebra().from_block_scalars(&values).expect("finite values")
}

/// The singleton-indicator quasi-basis `u_x = √(|G|/|G_x|)·χ_{{x}}`,
/// verified against the averaging expectation of the induced action.
pub fn strata_quasi_basis(space: &FiniteGSpace) -> Result<QuasiBasis> {
    let algebra = space.algebra();
    let order = space.group().order() as f64;
    let elements: Vec<AlgebraElement> = algebra
        .basis_elements()
        .into_iter()
        .enumerate()
        .map(|(x, chi)| chi.scale(c((order / space.isotropy(x).len() as f64).sqrt(), 0.0)))
        .collect();
    let e = Expectation::from_group_action(&space.induced_action()?)?;
    let residual = check_quasi_basis(&elements, &e)?;
    if residual > crate::EPS_QB {
        return Err(Error::Consistency(format!(
            "stratum quasi-basis residual {residual:.3e} exceeds tolerance"
        )));
    }
    Ok(QuasiBasis { elements, residual })
}

/// Three independently computed faces of the freeness ⟺ saturation
/// equivalence; they are required to agree.
#[derive(Debug, Clone)]
pub struct FreenessVerdict {
    pub free: bool,
    pub index_is_order: bool,
    pub battery_saturated: bool,
}

pub fn freeness_saturation_check(space: &FiniteGSpace) -> Result<FreenessVerdict> {
    let order = space.group().order();
    let represented = space.size() * order * order;
    if represented > REPRESENTED_DIM_BUDGET {
        return Err(Error::Capacity(format!(
            "represented dimension {represented} exceeds budget {REPRESENTED_DIM_BUDGET}"
        )));
    }
    let free = space.is_free();
    let idx = index_function(space);
    let target = space.algebra().unit().scale(c(order as f64, 0.0));
    let index_is_order = idx.sub(&target)?.operator_norm() <= EPS_EQ * order as f64;
    let verdict = saturation_battery(&space.induced_action()?, 1e-6)?;
    let battery_saturated = verdict.saturated();
    if free != index_is_order || free != battery_saturated {
        return Err(Error::Consistency(format!(
            "freeness/saturation disagreement: free={free}, index_is_order={index_is_order}, \
             battery_saturated={battery_saturated}"
        )));
    }
    Ok(FreenessVerdict { free, index_is_order, battery_saturated })
}
