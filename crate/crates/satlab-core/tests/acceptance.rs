//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Tolerances are pinned here, not read from the library.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use satlab_core::algebra::{c, AlgebraElement, CMat, StarAlgebra};
use satlab_core::crossed::CrossedAlgebra;
use satlab_core::graph::{
    cartesian_product, fixed_core_blocks, gauge_act, gauge_witness, has_loop, paths_of_length,
    reduce_product, validate_graph, Graph, Path, PathMonomial,
};
use satlab_core::group::{block_permutation_matrix, FiniteGroup, GroupAction};
use satlab_core::hopf::{HopfAlgebra, HopfAction};
use satlab_core::index::{
    check_quasi_basis, compute_index, hopf_saturation, rokhlin_witness_check, saturation_battery,
    solve_quasi_basis, Expectation,
};
use satlab_core::strata::{
    freeness_saturation_check, index_function, strata_quasi_basis, FiniteGSpace,
};
use satlab_core::Error;

fn pass(criterion: usize, what: &str) {
    println!("ACCEPTANCE {criterion:2}: PASS — {what}");
}

fn m2() -> StarAlgebra {
    StarAlgebra::matrix(2)
}

fn mat2(entries: [f64; 4]) -> CMat {
    DMatrix::from_row_slice(2, 2, &entries).map(|x: f64| c(x, 0.0))
}

/// `Ad(w)` for the order-2 unitary `w = diag(1, −1)` on `M_2`.
fn sign_flip_action() -> GroupAction {
    let a = m2();
    let w = a.from_blocks(vec![mat2([1.0, 0.0, 0.0, -1.0])]).unwrap();
    GroupAction::inner(a.clone(), FiniteGroup::cyclic(2), vec![a.unit(), w]).unwrap()
}

/// `Ad(w)` for `w = diag(λ, λ̄)`, `λ = e^{2πi/3}`, a Z_3 action on `M_2`.
fn order_three_rotation() -> GroupAction {
    let a = m2();
    let lam = c(0.0, 2.0 * std::f64::consts::PI / 3.0).exp();
    let w = a
        .from_blocks(vec![DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            lam,
            lam.conj(),
        ]))])
        .unwrap();
    let w2 = w.mul(&w).unwrap();
    GroupAction::inner(a.clone(), FiniteGroup::cyclic(3), vec![a.unit(), w, w2]).unwrap()
}

#[test]
fn criterion_01_sign_flip_battery_and_explicit_witness() {
    let action = sign_flip_action();
    let verdict = saturation_battery(&action, 1e-6).unwrap();
    assert!(verdict.consistent, "battery disagrees with itself");
    assert!(verdict.conditions().iter().all(|&b| b), "not saturated on all five conditions");
    let idx = verdict.index.scalar_value.expect("index must be scalar");
    assert!((idx - 2.0).abs() <= 1e-7, "index {idx} != 2");

    // explicit witness pair and its crossed-product partition of unity:
    // Σ_g Σ_j x_j α_g(x_j*) λ_g = 1
    let a = action.algebra().clone();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x1 = a.from_blocks(vec![mat2([s, s, 0.0, 0.0])]).unwrap();
    let x2 = a.from_blocks(vec![mat2([0.0, 0.0, s, s])]).unwrap();
    let cp = CrossedAlgebra::build(action.clone()).unwrap();
    let mut coeffs = Vec::new();
    for g in action.group().elements() {
        let mut sum = a.zero();
        for x in [&x1, &x2] {
            sum = sum.add(&x.mul(&action.apply(g, &x.adjoint()).unwrap()).unwrap()).unwrap();
        }
        coeffs.push(sum);
    }
    let xi = cp.from_coeffs(coeffs).unwrap();
    let resid = cp.norm(&cp.sub(&xi, &cp.unit()).unwrap()).unwrap();
    assert!(resid <= 1e-9, "witness identity residual {resid:.3e}");
    pass(1, "order-2 sign flip saturated five ways, index 2, explicit witness verified");
}

#[test]
fn criterion_02_non_saturated_cases_and_explicit_quasi_basis() {
    // trivial unitary: fixed points are everything, never saturated
    let a = m2();
    let triv = GroupAction::inner(
        a.clone(),
        FiniteGroup::cyclic(2),
        vec![a.unit(), a.unit()],
    )
    .unwrap();
    let v = saturation_battery(&triv, 1e-6).unwrap();
    assert!(v.consistent && !v.saturated(), "trivial action must not be saturated");

    // order-3 rotation: index 2 < 3, not saturated
    let action = order_three_rotation();
    let v = saturation_battery(&action, 1e-6).unwrap();
    assert!(v.consistent && !v.saturated(), "rotation action must not be saturated");
    let idx = v.index.scalar_value.expect("index must be scalar");
    assert!((idx - 2.0).abs() <= 1e-7, "index {idx} != 2");

    // the explicit two-element quasi-basis {1, σ_x}
    let sx = a.from_blocks(vec![mat2([0.0, 1.0, 1.0, 0.0])]).unwrap();
    let e = Expectation::from_group_action(&action).unwrap();
    let resid = check_quasi_basis(&[a.unit(), sx], &e).unwrap();
    assert!(resid <= 1e-9, "explicit quasi-basis residual {resid:.3e}");
    pass(2, "trivial and order-3 rotation actions unsaturated, index 2, explicit quasi-basis");
}

fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMat {
    let m = CMat::from_fn(d, d, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    m.qr().q()
}

/// A random unitary of order dividing `n`: conjugated `n`-th roots of unity.
fn random_root_unitary(rng: &mut ChaCha8Rng, algebra: &StarAlgebra, n: usize) -> AlgebraElement {
    let blocks = algebra
        .block_dims()
        .iter()
        .map(|&d| {
            let v = random_unitary(rng, d);
            let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                d,
                (0..d).map(|_| {
                    let k = rng.gen_range(0..n) as f64;
                    c(0.0, 2.0 * std::f64::consts::PI * k / n as f64).exp()
                }),
            ));
            &v * diag * v.adjoint()
        })
        .collect();
    algebra.from_blocks(blocks).unwrap()
}

/// A random involution pair in a common eigenbasis (they commute).
fn random_commuting_involutions(
    rng: &mut ChaCha8Rng,
    algebra: &StarAlgebra,
) -> (AlgebraElement, AlgebraElement) {
    let mut b1 = Vec::new();
    let mut b2 = Vec::new();
    for &d in algebra.block_dims() {
        let v = random_unitary(rng, d);
        let sign_diag = |rng: &mut ChaCha8Rng| {
            DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                d,
                (0..d).map(|_| c(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0)),
            ))
        };
        let s = sign_diag(rng);
        let t = sign_diag(rng);
        b1.push(&v * s * v.adjoint());
        b2.push(&v * t * v.adjoint());
    }
    (algebra.from_blocks(b1).unwrap(), algebra.from_blocks(b2).unwrap())
}

/// The randomized inner-action suite shared by the equivalence and
/// Hopf-level cross-check criteria: cyclic groups and the Klein four-group
/// acting on three small algebras, five seeds each.
fn inner_action_suite() -> Vec<GroupAction> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7);
    let algebras = [
        StarAlgebra::new(vec![2]).unwrap(),
        StarAlgebra::new(vec![2, 1]).unwrap(),
        StarAlgebra::new(vec![1, 1]).unwrap(),
    ];
    let mut suite = Vec::new();
    for algebra in &algebras {
        for rep in 0..5 {
            let _ = rep;
            for n in [2usize, 3, 4] {
                let u = random_root_unitary(&mut rng, algebra, n);
                let mut us = vec![algebra.unit()];
                for _ in 1..n {
                    us.push(us.last().unwrap().mul(&u).unwrap());
                }
                suite.push(
                    GroupAction::inner(algebra.clone(), FiniteGroup::cyclic(n), us).unwrap(),
                );
            }
            let (u1, u2) = random_commuting_involutions(&mut rng, algebra);
            let z2 = FiniteGroup::cyclic(2);
            let klein = z2.direct_product(&z2);
            let us = vec![
                algebra.unit(),
                u2.clone(),
                u1.clone(),
                u1.mul(&u2).unwrap(),
            ];
            suite.push(GroupAction::inner(algebra.clone(), klein, us).unwrap());
        }
    }
    suite
}

#[test]
fn criterion_03_battery_equivalence_property_suite() {
    let suite = inner_action_suite();
    assert!(suite.len() >= 50, "suite has only {} instances", suite.len());
    let mut inconsistencies = 0usize;
    for action in &suite {
        let v = saturation_battery(action, 1e-4).unwrap();
        if !v.consistent {
            inconsistencies += 1;
        }
    }
    assert_eq!(inconsistencies, 0, "battery conditions disagreed on {inconsistencies} instances");
    // the approximation scale must not change any verdict
    for action in suite.iter().step_by(7) {
        for eps in [1e-2, 1e-4, 1e-6] {
            let v = saturation_battery(action, eps).unwrap();
            assert!(v.consistent, "inconsistent at epsilon {eps}");
        }
    }
    pass(3, &format!("five-way battery consistent on {} random inner actions", suite.len()));
}

#[test]
fn criterion_04_hopf_level_cross_check() {
    let suite = inner_action_suite();
    for action in &suite {
        let battery = saturation_battery(action, 1e-4).unwrap();
        let hopf = hopf_saturation(&HopfAction::from_group_action(action).unwrap()).unwrap();
        assert_eq!(
            battery.saturated(),
            hopf.saturated,
            "group battery and smash-product criterion disagree"
        );
    }
    pass(4, &format!("smash-product criterion matches the battery on {} instances", suite.len()));
}

/// Disjoint union of coset spaces `G/H_1 ⊔ … ⊔ G/H_k` under left translation.
fn disjoint_union(group: &FiniteGroup, subgroups: &[Vec<usize>]) -> FiniteGSpace {
    let mut labels = Vec::new();
    let mut perms = vec![Vec::new(); group.order()];
    for (piece, sub) in subgroups.iter().enumerate() {
        let (reps, part) = group.coset_action(sub);
        let offset = labels.len();
        for r in &reps {
            labels.push(format!("p{piece}.g{r}H"));
        }
        for g in group.elements() {
            perms[g].extend(part[g].iter().map(|&x| offset + x));
        }
    }
    FiniteGSpace::new(labels, group.clone(), perms).unwrap()
}

/// Random G-spaces: |G| ≤ 6, |X| ≤ 12, built from coset spaces.
fn gspace_suite() -> Vec<FiniteGSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1ce);
    let groups = vec![
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),
        FiniteGroup::cyclic(5),
        FiniteGroup::cyclic(6),
        FiniteGroup::symmetric(3).unwrap(),
    ];
    let mut suite = Vec::new();
    for group in &groups {
        let lattice = group.enumerate_subgroups().unwrap();
        for _ in 0..4 {
            let mut picked: Vec<Vec<usize>> = Vec::new();
            let mut total = 0usize;
            for _ in 0..rng.gen_range(1..=3) {
                let h = lattice.subgroups()[rng.gen_range(0..lattice.len())].clone();
                let cosets = group.order() / h.len();
                if total + cosets <= 12 {
                    total += cosets;
                    picked.push(h);
                }
            }
            if picked.is_empty() {
                picked.push((0..group.order()).collect());
            }
            suite.push(disjoint_union(group, &picked));
        }
    }
    suite
}

#[test]
fn criterion_05_isotropy_index_formula() {
    let suite = gspace_suite();
    assert!(suite.len() >= 20, "suite has only {} spaces", suite.len());
    for space in &suite {
        let e = Expectation::from_group_action(&space.induced_action().unwrap()).unwrap();
        let qb = solve_quasi_basis(&e).unwrap();
        let report = compute_index(&qb, None).unwrap();
        let expected = index_function(space);
        let resid = report.index_element.sub(&expected).unwrap().operator_norm();
        assert!(resid <= 1e-7, "index differs from |G|/|G_x| by {resid:.3e}");
        let sqb = strata_quasi_basis(space).unwrap();
        assert!(sqb.residual <= 1e-9, "stratum quasi-basis residual {:.3e}", sqb.residual);
    }
    pass(5, &format!("solver index equals x ↦ |G|/|G_x| on {} random G-spaces", suite.len()));
}

#[test]
fn criterion_06_freeness_saturation_equivalence() {
    let suite = gspace_suite();
    let mut free_count = 0usize;
    for space in &suite {
        // the check itself errors on any three-way disagreement
        let v = freeness_saturation_check(space).unwrap();
        assert_eq!(v.free, v.index_is_order);
        assert_eq!(v.free, v.battery_saturated);
        free_count += v.free as usize;
    }
    assert!(free_count > 0 && free_count < suite.len(), "suite never exercised both verdicts");
    pass(6, &format!("freeness ⟺ index ≡ |G| ⟺ saturation on {} G-spaces", suite.len()));
}

#[test]
fn criterion_07_hopf_axiom_battery() {
    let groups = vec![
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),
        FiniteGroup::symmetric(3).unwrap(),
    ];
    for group in &groups {
        for hopf in [
            HopfAlgebra::group_hopf(group).unwrap(),
            HopfAlgebra::dual_function_hopf(group).unwrap(),
        ] {
            hopf.verify_with(1e-10).unwrap();
            let tau_e = hopf.haar(hopf.e_coords());
            let want = 1.0 / hopf.dim() as f64;
            assert!(
                (tau_e - c(want, 0.0)).norm() <= 1e-14,
                "τ(e) = {tau_e} but 1/dim = {want}"
            );
        }
    }
    pass(7, "group and function Hopf algebras pass the axiom battery at 1e-10, τ(e) = 1/dim");
}

#[test]
fn criterion_08_rokhlin_implies_saturated() {
    let a = StarAlgebra::new(vec![2, 2]).unwrap();
    let g = FiniteGroup::cyclic(2);
    let swap = block_permutation_matrix(&a, &[1, 0]).unwrap();
    let action =
        GroupAction::from_matrices(a.clone(), g, vec![CMat::identity(8, 8), swap]).unwrap();
    let id2 = DMatrix::identity(2, 2).map(|x: f64| c(x, 0.0));
    let zero2 = CMat::zeros(2, 2);
    let e0 = a.from_blocks(vec![id2.clone(), zero2.clone()]).unwrap();
    let e1 = a.from_blocks(vec![zero2, id2]).unwrap();
    let report = rokhlin_witness_check(&action, &[e0, e1], 1e-6).unwrap();
    assert!(report.family_ok, "exact shift family rejected");
    assert!(report.witness_pass, "witness residual {:.3e}", report.witness_residual);
    assert_eq!(report.battery_saturated, Some(true), "battery must confirm saturation");
    pass(8, "exact order-2 shift family yields a verified witness and a saturated battery");
}

/// All paths of length ≤ `max_len` ending at `v`; window exhaustion during
/// enumeration means the path does not exist inside this window.
fn paths_into(g: &Graph, v: usize, max_len: usize) -> Vec<Path> {
    let mut out = Vec::new();
    for l in 0..=max_len {
        match paths_of_length(g, l, None, Some(v)) {
            Ok(ps) => out.extend(ps),
            Err(Error::WindowExhausted { .. }) => {}
            Err(e) => panic!("path enumeration failed: {e}"),
        }
    }
    out
}

/// Transport a path to another graph by vertex and edge names.
fn lift_path(from: &Graph, to: &Graph, p: &Path) -> Path {
    if p.is_empty() {
        let name = &from.vertex_names()[from.path_source(p)];
        let v = to.vertex_by_name(name).unwrap_or_else(|| panic!("missing vertex {name}"));
        to.vertex_path(v).unwrap()
    } else {
        let names: Vec<&str> =
            p.edges().iter().map(|&ei| from.edges()[ei].name.as_str()).collect();
        to.path_from_edge_names(&names).unwrap()
    }
}

struct BranchTally {
    backtrack: usize,
    extend: usize,
    adjoint: usize,
    retried: usize,
}

/// Run the witness generator over every target and replay each transcript.
fn witness_sweep(g: &Graph, max_len: usize, max_n: i64, tally: &mut BranchTally) -> usize {
    let mut cases = 0usize;
    for v in 0..g.num_vertices() {
        let paths = paths_into(g, v, max_len);
        for alpha in &paths {
            for beta in &paths {
                for n in -max_n..=max_n {
                    let mut cur = g.clone();
                    let (mut a, mut b) = (alpha.clone(), beta.clone());
                    let w = loop {
                        match gauge_witness(&cur, &a, &b, n) {
                            Ok(w) => break w,
                            Err(Error::WindowExhausted { required, .. }) => {
                                let bigger = Graph::line_window(required).unwrap();
                                a = lift_path(&cur, &bigger, &a);
                                b = lift_path(&cur, &bigger, &b);
                                cur = bigger;
                                tally.retried += 1;
                            }
                            Err(e) => panic!("witness failed for degree {n}: {e}"),
                        }
                    };
                    // independent replay of the recorded witness pair
                    let want = PathMonomial::new(&cur, a.clone(), b.clone(), n)
                        .unwrap()
                        .expect("target paths share a range by construction");
                    assert_eq!(w.target, want, "witness records a different target");
                    let check = if w.adjoint_route { want.adjoint() } else { want };
                    let replayed = reduce_product(&cur, &w.a, &gauge_act(&w.b))
                        .unwrap()
                        .expect("witness product reduced to zero");
                    assert_eq!(replayed, check, "replay does not reproduce the target");
                    if w.adjoint_route {
                        tally.adjoint += 1;
                    } else if w.l >= 0 {
                        tally.backtrack += 1;
                    } else {
                        tally.extend += 1;
                    }
                    cases += 1;
                }
            }
        }
    }
    cases
}

/// A seeded 6-vertex graph with no sinks or sources: a covering cycle plus
/// random chords.
fn random_battery_graph(seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = 6usize;
    let mut perm: Vec<usize> = (0..nv).collect();
    for i in (1..nv).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut edges: Vec<(String, usize, usize)> =
        (0..nv).map(|i| (format!("c{i}"), i, perm[i])).collect();
    for k in 0..nv {
        edges.push((format!("x{k}"), rng.gen_range(0..nv), rng.gen_range(0..nv)));
    }
    let g = Graph::from_parts((0..nv).map(|i| format!("v{i}")).collect(), edges, vec![], None)
        .unwrap();
    let report = validate_graph(&g);
    assert!(report.no_sinks && report.no_sources, "seed produced a sink or source");
    g
}

#[test]
fn criterion_09_gauge_witness_soundness() {
    let mut tally = BranchTally { backtrack: 0, extend: 0, adjoint: 0, retried: 0 };
    let mut total = 0usize;
    total += witness_sweep(&Graph::two_loop_vertex(), 4, 4, &mut tally);
    total += witness_sweep(&Graph::cycle(3).unwrap(), 4, 4, &mut tally);
    total += witness_sweep(&Graph::line_window(6).unwrap(), 4, 4, &mut tally);
    total += witness_sweep(&random_battery_graph(0x9e), 4, 4, &mut tally);
    assert!(total >= 2000, "only {total} witness cases");
    assert!(tally.backtrack > 0, "backtrack branch never exercised");
    assert!(tally.extend > 0, "extension branch never exercised");
    assert!(tally.adjoint > 0, "adjoint route never exercised");
    assert!(tally.retried > 0, "window retry never exercised");
    pass(
        9,
        &format!(
            "{total} gauge witnesses replayed ({} backtrack, {} extend, {} adjoint, {} window retries)",
            tally.backtrack, tally.extend, tally.adjoint, tally.retried
        ),
    );
}

#[test]
fn criterion_10_fixed_core_block_counts() {
    let two_loop = Graph::two_loop_vertex();
    for n in 0..=10usize {
        let blocks = fixed_core_blocks(&two_loop, n, 0).unwrap();
        assert_eq!(blocks, 1usize << n, "two-loop vertex core at depth {n}");
    }
    // the line graph has a unique backward path everywhere, so every core
    // block is 1×1 and the core is commutative
    let mut line = Graph::line_window(6).unwrap();
    for n in 0..=4usize {
        for name in line.vertex_names().to_vec() {
            let count = loop {
                let v = line.vertex_by_name(&name).unwrap();
                match fixed_core_blocks(&line, n, v) {
                    Ok(k) => break k,
                    Err(Error::WindowExhausted { required, .. }) => {
                        line = Graph::line_window(required).unwrap();
                    }
                    Err(e) => panic!("block count failed: {e}"),
                }
            };
            assert_eq!(count, 1, "line graph core at depth {n}, vertex {name}");
        }
    }
    pass(10, "core blocks: 2^n at the two-loop vertex (n ≤ 10), 1 everywhere on the line");
}

#[test]
fn criterion_11_product_with_line_is_loop_free() {
    let window = Graph::line_window(4).unwrap();
    let battery: Vec<Graph> = vec![
        Graph::two_loop_vertex(),
        Graph::cycle(3).unwrap(),
        Graph::line_window(6).unwrap(),
        random_battery_graph(0x9e),
    ];
    assert!(has_loop(&battery[0]) && has_loop(&battery[1]), "battery should contain loops");
    for g in &battery {
        let product = cartesian_product(&window, g).unwrap();
        assert!(!has_loop(&product), "product with the line window acquired a loop");
    }
    pass(11, "line-window products are loop-free for every battery graph");
}
