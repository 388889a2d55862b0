//! Exact maximum-support solver.
//!
//! Every solution of a boundary problem is one particular solution plus a
//! member of the flow space, and over a finite abelian group the flow
//! space is spanned coordinate-freely by the fundamental cycles of any
//! spanning forest. The solver therefore walks the whole solution coset
//! with a mixed-radix reflected Gray code, so consecutive members differ
//! in a single basis coefficient and the support count updates in time
//! proportional to one cycle length instead of one pass over the graph.
//!
//! The optimum is the member maximizing support, ties broken by the
//! lexicographically smallest value vector. That total order makes the
//! parallel shard merge associative and commutative, so results are
//! byte-identical no matter how many threads run. When a budget cuts the
//! walk short the partial best comes from a fixed serial prefix of the
//! same Gray order, again independent of thread count.

use crate::error::{Error, Result};
use crate::flow::{
    certify_integer_flow, is_flow_with_boundary, lift_modular_to_integer, EdgeLabelling,
    FlowCertificate, WeightedGraph,
};
use crate::graph::{MultiGraph, Orientation};
use crate::group::{GroupElem, GroupSpec};
use crate::report::Ratio;
use rayon::prelude::*;
use std::time::{Duration, Instant};

/// Default enumeration budget: 3^20 coset members.
pub const DEFAULT_BUDGET: u128 = 3_486_784_401;

/// A rooted BFS spanning forest. Roots are the smallest vertex of each
/// component and neighbours are scanned in edge-id order, so the forest
/// is a pure function of the graph.
#[derive(Debug, Clone)]
pub struct Forest {
    pub parent: Vec<Option<usize>>,
    pub parent_edge: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    /// Vertices in BFS discovery order, roots first per component.
    pub order: Vec<usize>,
    pub roots: Vec<usize>,
    pub in_tree: Vec<bool>,
}

pub fn bfs_forest(g: &MultiGraph) -> Forest {
    let n = g.num_vertices();
    let mut forest = Forest {
        parent: vec![None; n],
        parent_edge: vec![None; n],
        depth: vec![0; n],
        order: Vec::with_capacity(n),
        roots: Vec::new(),
        in_tree: vec![false; g.num_edges()],
    };
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        forest.roots.push(root);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            forest.order.push(v);
            for &(e, _) in g.incidence(v) {
                let w = g.other_end(e, v);
                if !seen[w] {
                    seen[w] = true;
                    forest.parent[w] = Some(v);
                    forest.parent_edge[w] = Some(e);
                    forest.depth[w] = forest.depth[v] + 1;
                    forest.in_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    forest
}

/// Signed fundamental cycles of the non-tree edges, in edge-id order.
/// Each cycle is a list of (edge, sign): +1 where the edge's orientation
/// agrees with the traversal that follows the non-tree edge forward. A
/// loop is its own one-edge cycle.
pub fn cycle_basis(g: &MultiGraph, o: &Orientation, forest: &Forest) -> Vec<Vec<(u32, i8)>> {
    let mut cycles = Vec::new();
    for e in 0..g.num_edges() {
        if forest.in_tree[e] {
            continue;
        }
        if g.is_loop(e) {
            cycles.push(vec![(e as u32, 1)]);
            continue;
        }
        let mut cycle = vec![(e as u32, 1i8)];
        let (mut down, mut up) = (o.head(e), o.tail(e));
        // climb from `down` (traversed child to parent) and from `up`
        // (traversed parent to child, so signs flip) until they meet
        while forest.depth[down] > forest.depth[up] {
            let t = forest.parent_edge[down].unwrap();
            cycle.push((t as u32, climb_sign(o, t, down)));
            down = forest.parent[down].unwrap();
        }
        while forest.depth[up] > forest.depth[down] {
            let t = forest.parent_edge[up].unwrap();
            cycle.push((t as u32, -climb_sign(o, t, up)));
            up = forest.parent[up].unwrap();
        }
        while down != up {
            let t = forest.parent_edge[down].unwrap();
            cycle.push((t as u32, climb_sign(o, t, down)));
            down = forest.parent[down].unwrap();
            let t = forest.parent_edge[up].unwrap();
            cycle.push((t as u32, -climb_sign(o, t, up)));
            up = forest.parent[up].unwrap();
        }
        cycles.push(cycle);
    }
    cycles
}

/// Sign of tree edge `t` when walked from child `x` towards its parent.
fn climb_sign(o: &Orientation, t: usize, x: usize) -> i8 {
    if o.tail(t) == x {
        1
    } else {
        -1
    }
}

/// One labelling with the requested boundary, or the witness that a
/// component's weights cannot balance. Built leaf-to-root along the
/// forest: each non-root vertex fixes its parent edge, and only the root
/// equation can fail.
pub fn particular_solution(
    wg: &WeightedGraph,
    group: &GroupSpec,
    forest: &Forest,
) -> Result<EdgeLabelling> {
    let g = &wg.graph;
    let o = &wg.orientation;
    let target = boundary_target(wg, group)?;
    let mut phi = EdgeLabelling::zero(group.clone(), g.num_edges());
    let mut bal = vec![group.zero(); g.num_vertices()];
    for &v in forest.order.iter().rev() {
        let Some(e) = forest.parent_edge[v] else {
            continue;
        };
        let need = group.sub(target[v], bal[v]);
        if need.is_zero() {
            continue;
        }
        let delta = if o.tail(e) == v { need } else { group.neg(need) };
        phi.set(e, group.add(phi.get(e), delta));
        bal[o.tail(e)] = group.add(bal[o.tail(e)], delta);
        bal[o.head(e)] = group.sub(bal[o.head(e)], delta);
    }
    for &r in &forest.roots {
        if bal[r] != target[r] {
            return Err(Error::Infeasible { component_vertex: r });
        }
    }
    Ok(phi)
}

/// Per-vertex boundary targets as group elements. Weights are Z3 data:
/// only the Z3 group can chase a nonzero weighting, every other group
/// requires all-zero weights.
fn boundary_target(wg: &WeightedGraph, group: &GroupSpec) -> Result<Vec<GroupElem>> {
    if group.orders() == [3] {
        Ok(wg.mu().iter().map(|m| m.to_elem()).collect())
    } else if wg.mu().iter().all(|m| m.is_zero()) {
        Ok(vec![group.zero(); wg.graph.num_vertices()])
    } else {
        Err(Error::GroupMismatch(format!(
            "nonzero boundary weights need the group Z3, not {group}"
        )))
    }
}

/// The walking state: current labelling, its support, and the digit
/// wiring of the Gray code. Digit d steps basis cycle `digit_cycle[d]`
/// in factor `digit_factor[d]`; digits are ordered by ascending cycle
/// length so the most-stepped digits are the cheapest.
#[derive(Clone)]
struct Walker<'a> {
    cycles: &'a [Vec<(u32, i8)>],
    digit_cycle: Vec<u32>,
    digit_factor: Vec<u8>,
    radix: Vec<u8>,
    values: Vec<GroupElem>,
    support: usize,
}

impl<'a> Walker<'a> {
    fn new(group: &GroupSpec, cycles: &'a [Vec<(u32, i8)>], phi0: &EdgeLabelling) -> Walker<'a> {
        let mut digits: Vec<(u32, u8)> = Vec::new();
        for b in 0..cycles.len() {
            for f in 0..group.num_factors() {
                digits.push((b as u32, f as u8));
            }
        }
        digits.sort_by_key(|&(b, f)| (cycles[b as usize].len(), b, f));
        let values = phi0.values().to_vec();
        let support = values.iter().filter(|v| !v.is_zero()).count();
        Walker {
            cycles,
            digit_cycle: digits.iter().map(|&(b, _)| b).collect(),
            digit_factor: digits.iter().map(|&(_, f)| f).collect(),
            radix: digits.iter().map(|&(_, f)| group.orders()[f as usize]).collect(),
            values,
            support,
        }
    }

    fn num_digits(&self) -> usize {
        self.radix.len()
    }

    /// Add `delta` (+1 or -1) times the digit's cycle to the labelling.
    fn step(&mut self, d: usize, delta: i8) {
        let f = self.digit_factor[d] as usize;
        let order = self.radix[d];
        for &(e, s) in &self.cycles[self.digit_cycle[d] as usize] {
            let v = &mut self.values[e as usize];
            let was_zero = v.is_zero();
            let r = v.0[f];
            v.0[f] = if delta == s {
                if r + 1 == order {
                    0
                } else {
                    r + 1
                }
            } else if r == 0 {
                order - 1
            } else {
                r - 1
            };
            match (was_zero, v.is_zero()) {
                (true, false) => self.support += 1,
                (false, true) => self.support -= 1,
                _ => {}
            }
        }
    }

    /// Jump a digit by `count` steps at once (used to seed shard bases).
    fn jump(&mut self, d: usize, count: u8) {
        let f = self.digit_factor[d] as usize;
        let order = self.radix[d] as i32;
        for &(e, s) in &self.cycles[self.digit_cycle[d] as usize] {
            let v = &mut self.values[e as usize];
            let was_zero = v.is_zero();
            let r = v.0[f] as i32 + count as i32 * s as i32;
            v.0[f] = r.rem_euclid(order) as u8;
            match (was_zero, v.is_zero()) {
                (true, false) => self.support += 1,
                (false, true) => self.support -= 1,
            _ => {}
            }
        }
    }

    /// Reflected mixed-radix Gray walk over the low `ndigits` digits,
    /// visiting every combination exactly once, stopping early after
    /// `limit` members or when `visit` returns false. Returns the number
    /// visited.
    fn gray_walk(
        &mut self,
        ndigits: usize,
        limit: u128,
        mut visit: impl FnMut(&Walker) -> bool,
    ) -> u128 {
        let mut a = vec![0u8; ndigits];
        let mut focus: Vec<usize> = (0..=ndigits).collect();
        let mut dir = vec![1i8; ndigits];
        let mut count = 0u128;
        if limit == 0 {
            return 0;
        }
        loop {
            let go_on = visit(self);
            count += 1;
            if !go_on || count == limit {
                return count;
            }
            let j = focus[0];
            focus[0] = 0;
            if j == ndigits {
                return count;
            }
            let delta = dir[j];
            a[j] = (a[j] as i8 + delta) as u8;
            self.step(j, delta);
            if a[j] == 0 || a[j] + 1 == self.radix[j] {
                dir[j] = -dir[j];
                focus[j] = focus[j + 1];
                focus[j + 1] = j + 1;
            }
        }
    }
}

/// Best-so-far tracking under the (max support, lex-min values) order.
#[derive(Debug, Clone)]
struct Best {
    support: usize,
    values: Vec<GroupElem>,
}

impl Best {
    fn consider(&mut self, w: &Walker) {
        if w.support > self.support
            || (w.support == self.support && w.values < self.values)
        {
            self.support = w.support;
            self.values.clear();
            self.values.extend_from_slice(&w.values);
        }
    }

    fn merge(self, other: Best) -> Best {
        if other.support > self.support
            || (other.support == self.support && other.values < self.values)
        {
            other
        } else {
            self
        }
    }
}

/// The full account of one solver run. `wall` is measured but never
/// serialized; reported JSON stays a pure function of the input.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub group: GroupSpec,
    pub num_vertices: usize,
    pub num_edges: usize,
    pub cycle_rank: usize,
    pub coset_size: u128,
    pub enumerated: u128,
    pub optimal: bool,
    pub support: usize,
    pub ratio: Ratio,
    pub gain: i64,
    pub certificate: FlowCertificate,
    pub integer_certificate: Option<FlowCertificate>,
    pub wall: Duration,
}

fn coset_size(group: &GroupSpec, rank: usize) -> u128 {
    let mut size = 1u128;
    for _ in 0..rank {
        size = size.saturating_mul(group.order() as u128);
    }
    size
}

/// Maximise support over every labelling with the graph's boundary
/// weights. Exhaustive within `budget`; a short budget returns the best
/// of a deterministic serial prefix with `optimal: false`.
pub fn max_support_flow(
    wg: &WeightedGraph,
    group: &GroupSpec,
    budget: u128,
) -> Result<RatioReport> {
    let start = Instant::now();
    let g = &wg.graph;
    let forest = bfs_forest(g);
    let phi0 = particular_solution(wg, group, &forest)?;
    let cycles = cycle_basis(g, &wg.orientation, &forest);
    // one group's worth of freedom per basis cycle
    let total = coset_size(group, cycles.len());
    let mut walker = Walker::new(group, &cycles, &phi0);
    debug_assert_eq!(walker.num_digits(), cycles.len() * group.num_factors());

    let (best, enumerated) = if total <= budget {
        enumerate_all(&walker, total)
    } else {
        let mut best = Best { support: walker.support, values: walker.values.clone() };
        let ndigits = walker.num_digits();
        let visited = walker.gray_walk(ndigits, budget, |w| {
            best.consider(w);
            true
        });
        (best, visited)
    };
    let optimal = enumerated == total;

    let phi = EdgeLabelling::new(group.clone(), best.values);
    let certificate = is_flow_with_boundary(wg, &phi)?;
    if !certificate.boundary_ok {
        return Err(Error::InvariantViolation(
            "enumerated labelling misses the required boundary".into(),
        ));
    }
    debug_assert_eq!(certificate.support, best.support);
    Ok(RatioReport {
        group: group.clone(),
        num_vertices: g.num_vertices(),
        num_edges: g.num_edges(),
        cycle_rank: cycles.len(),
        coset_size: total,
        enumerated,
        optimal,
        support: certificate.support,
        ratio: certificate.ratio,
        gain: certificate.gain,
        certificate,
        integer_certificate: None,
        wall: start.elapsed(),
    })
}

/// Visit every labelling with the graph's boundary weights, serially and
/// in a fixed order; `visit` returns false to stop early. A for-all claim
/// cannot survive truncation, so a coset larger than the budget errors up
/// front instead of visiting a prefix. Returns the number visited.
pub(crate) fn for_each_member(
    wg: &WeightedGraph,
    group: &GroupSpec,
    budget: u128,
    mut visit: impl FnMut(&[GroupElem]) -> bool,
) -> Result<u128> {
    let g = &wg.graph;
    let forest = bfs_forest(g);
    let phi0 = particular_solution(wg, group, &forest)?;
    let cycles = cycle_basis(g, &wg.orientation, &forest);
    let total = coset_size(group, cycles.len());
    if total > budget {
        return Err(Error::BudgetExceeded { budget, coset_size: total });
    }
    let mut walker = Walker::new(group, &cycles, &phi0);
    let ndigits = walker.num_digits();
    Ok(walker.gray_walk(ndigits, u128::MAX, |w| visit(&w.values)))
}

/// Walk the complete coset, sharding the most-significant (longest-cycle)
/// digits across threads when the instance is big enough to pay for it.
fn enumerate_all(walker: &Walker, total: u128) -> (Best, u128) {
    let ndigits = walker.num_digits();
    const SERIAL_LIMIT: u128 = 1 << 14;
    if total <= SERIAL_LIMIT || ndigits == 0 {
        let mut w = walker.clone();
        let mut best = Best { support: w.support, values: w.values.clone() };
        let visited = w.gray_walk(ndigits, u128::MAX, |w| {
            best.consider(w);
            true
        });
        return (best, visited);
    }
    // peel digits off the top until there are enough shards, keeping the
    // inner walk long enough to amortize the per-shard setup
    let mut split = ndigits;
    let mut shards = 1u128;
    let mut inner = total;
    while split > 0 && shards < 512 && inner > SERIAL_LIMIT {
        split -= 1;
        shards *= walker.radix[split] as u128;
        inner /= walker.radix[split] as u128;
    }
    let results: Vec<(Best, u128)> = (0..shards as u64)
        .into_par_iter()
        .map(|shard| {
            let mut w = walker.clone();
            let mut rest = shard;
            for d in split..ndigits {
                let r = w.radix[d] as u64;
                w.jump(d, (rest % r) as u8);
                rest /= r;
            }
            let mut best = Best { support: w.support, values: w.values.clone() };
            let visited = w.gray_walk(split, u128::MAX, |w| {
                best.consider(w);
                true
            });
            (best, visited)
        })
        .collect();
    results
        .into_iter()
        .reduce(|(a, ca), (b, cb)| (a.merge(b), ca + cb))
        .expect("at least one shard")
}

/// Search for a labelling that is nonzero on every edge and has zero
/// boundary. `Ok(None)` proves there is none (the whole flow space was
/// enumerated); a budget stop is inconclusive and errors instead.
pub fn nowhere_zero_flow(
    g: &MultiGraph,
    group: &GroupSpec,
    budget: u128,
) -> Result<Option<EdgeLabelling>> {
    let wg = WeightedGraph::zero(g.clone());
    let forest = bfs_forest(g);
    let phi0 = particular_solution(&wg, group, &forest)?;
    let cycles = cycle_basis(g, &wg.orientation, &forest);
    let total = coset_size(group, cycles.len());
    let m = g.num_edges();
    let mut walker = Walker::new(group, &cycles, &phi0);
    let ndigits = walker.num_digits();
    // serial scan, stopping at the first full-support member in Gray order
    let mut hit: Option<Vec<GroupElem>> = None;
    let visited = walker.gray_walk(ndigits, total.min(budget.max(1)), |w| {
        if w.support == m {
            hit = Some(w.values.to_vec());
            false
        } else {
            true
        }
    });
    match hit {
        Some(values) => Ok(Some(EdgeLabelling::new(group.clone(), values))),
        None if visited < total => Err(Error::BudgetExceeded { budget, coset_size: total }),
        None => Ok(None),
    }
}

/// The group a modulus stands for: 2 and 3 are cyclic, 4 is the Klein
/// group (the right reading for flow support questions), 6 is cyclic.
pub fn group_for_modulus(k: u32) -> Result<GroupSpec> {
    match k {
        2 => Ok(GroupSpec::z2()),
        3 => Ok(GroupSpec::z3()),
        4 => Ok(GroupSpec::z2z2()),
        6 => Ok(GroupSpec::z6()),
        other => Err(Error::UnsupportedGroup(format!(
            "modulus {other} is not one of 2, 3, 4, 6"
        ))),
    }
}

/// Exact best support ratio for flows with zero boundary, for modulus 2,
/// 3, 4 or 6. For modulus 3 the optimum is also lifted to an integer
/// witness with values in {-2,...,2} and the same support.
pub fn h_ratio(g: &MultiGraph, k: u32, budget: u128) -> Result<RatioReport> {
    let group = group_for_modulus(k)?;
    let wg = WeightedGraph::zero(g.clone());
    let mut report = max_support_flow(&wg, &group, budget)?;
    if k == 3 {
        let crate::flow::LabellingData::Modular(phi) = &report.certificate.data else {
            unreachable!("max_support_flow certifies modular data");
        };
        let lifted = lift_modular_to_integer(g, &wg.orientation, phi)?;
        report.integer_certificate = Some(certify_integer_flow(&wg, &lifted)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named;
    use crate::flow::boundary;
    use crate::group::Z3;

    fn z3() -> GroupSpec {
        GroupSpec::z3()
    }

    #[test]
    fn fundamental_cycles_are_flows() {
        // parallel edges, a loop, and branching all at once
        let g = MultiGraph::new(4, &[(0, 1), (0, 1), (1, 2), (2, 3), (3, 1), (2, 2)]).unwrap();
        let o = g.default_orientation();
        let forest = bfs_forest(&g);
        let cycles = cycle_basis(&g, &o, &forest);
        assert_eq!(cycles.len(), g.cycle_rank());
        for group in [z3(), GroupSpec::z2z2(), GroupSpec::z6()] {
            for cycle in &cycles {
                let mut phi = EdgeLabelling::zero(group.clone(), g.num_edges());
                let one = group.elements()[1];
                for &(e, s) in cycle {
                    let add = if s > 0 { one } else { group.neg(one) };
                    phi.set(e as usize, group.add(phi.get(e as usize), add));
                }
                let bal = boundary(&g, &o, &phi).unwrap();
                assert!(bal.iter().all(|b| b.is_zero()), "cycle {cycle:?} in {group}");
            }
        }
    }

    #[test]
    fn particular_solution_hits_target() {
        let g = named("theta").unwrap();
        let o = g.default_orientation();
        let wg = WeightedGraph::new(g.clone(), o.clone(), vec![Z3(1), Z3(2)]).unwrap();
        let forest = bfs_forest(&g);
        let phi = particular_solution(&wg, &z3(), &forest).unwrap();
        let bal = boundary(&g, &o, &phi).unwrap();
        assert_eq!(bal[0], Z3(1).to_elem());
        assert_eq!(bal[1], Z3(2).to_elem());
    }

    #[test]
    fn imbalanced_component_is_infeasible() {
        // two disjoint edges; weights sum to zero globally but not per
        // component
        let g = MultiGraph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let o = g.default_orientation();
        let wg = WeightedGraph::new(g.clone(), o, vec![Z3(1), Z3(0), Z3(0), Z3(2)]).unwrap();
        let forest = bfs_forest(&g);
        match particular_solution(&wg, &z3(), &forest) {
            Err(Error::Infeasible { component_vertex }) => {
                assert!(component_vertex == 0 || component_vertex == 2)
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn theta_optimum_is_full_support() {
        let wg = WeightedGraph::zero(named("theta").unwrap());
        let report = max_support_flow(&wg, &z3(), DEFAULT_BUDGET).unwrap();
        assert_eq!(report.coset_size, 9);
        assert_eq!(report.enumerated, 9);
        assert!(report.optimal);
        assert_eq!(report.support, 3);
        assert_eq!(report.ratio.to_string(), "1/1");
    }

    #[test]
    fn theta_with_boundary_weights() {
        let g = named("theta").unwrap();
        let o = g.default_orientation();
        let wg = WeightedGraph::new(g, o, vec![Z3(1), Z3(2)]).unwrap();
        let report = max_support_flow(&wg, &z3(), DEFAULT_BUDGET).unwrap();
        assert_eq!(report.support, 3);
        assert!(report.certificate.boundary_ok);
    }

    #[test]
    fn k4_optimum_support_is_five() {
        let wg = WeightedGraph::zero(named("k4").unwrap());
        let report = max_support_flow(&wg, &z3(), DEFAULT_BUDGET).unwrap();
        assert_eq!(report.cycle_rank, 3);
        assert_eq!(report.coset_size, 27);
        assert_eq!(report.support, 5);
        assert_eq!(report.ratio.to_string(), "5/6");
        assert_eq!(report.gain, 24 * 5 - 16 * 6);
    }

    #[test]
    fn budget_prefix_is_deterministic() {
        let wg = WeightedGraph::zero(named("k4").unwrap());
        let a = max_support_flow(&wg, &z3(), 5).unwrap();
        let b = max_support_flow(&wg, &z3(), 5).unwrap();
        assert!(!a.optimal);
        assert_eq!(a.enumerated, 5);
        let (va, vb) = match (&a.certificate.data, &b.certificate.data) {
            (crate::flow::LabellingData::Modular(x), crate::flow::LabellingData::Modular(y)) => {
                (x.values().to_vec(), y.values().to_vec())
            }
            _ => unreachable!(),
        };
        assert_eq!(va, vb);
        assert!(a.support <= 5);
    }

    #[test]
    fn thread_count_does_not_change_the_answer() {
        // petersen over Z3xZ3 enumerates 9^6 = 531441 members, well past
        // the serial threshold, so this exercises the sharded path
        let g = named("petersen").unwrap();
        let wg = WeightedGraph::zero(g);
        let group = GroupSpec::z3z3();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| max_support_flow(&wg, &group, DEFAULT_BUDGET).unwrap())
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.support, four.support);
        assert_eq!(one.enumerated, 531441);
        let (va, vb) = match (&one.certificate.data, &four.certificate.data) {
            (crate::flow::LabellingData::Modular(x), crate::flow::LabellingData::Modular(y)) => {
                (x.values().to_vec(), y.values().to_vec())
            }
            _ => unreachable!(),
        };
        assert_eq!(va, vb);
    }

    #[test]
    fn petersen_klein_group_optimum_is_fourteen() {
        let g = named("petersen").unwrap();
        let report = h_ratio(&g, 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.support, 14);
        assert_eq!(report.ratio.to_string(), "14/15");
        assert!(report.optimal);
    }

    #[test]
    fn nowhere_zero_results_match_classical_facts() {
        // theta carries a nowhere-zero Z3 flow, K4 does not (it is cubic
        // and not bipartite), K4 carries a Klein-group one, petersen has
        // no Z3 flow either
        let theta = named("theta").unwrap();
        assert!(nowhere_zero_flow(&theta, &z3(), DEFAULT_BUDGET).unwrap().is_some());
        let k4 = named("k4").unwrap();
        assert!(nowhere_zero_flow(&k4, &z3(), DEFAULT_BUDGET).unwrap().is_none());
        let nz = nowhere_zero_flow(&k4, &GroupSpec::z2z2(), DEFAULT_BUDGET).unwrap().unwrap();
        assert!(nz.is_nowhere_zero());
        let petersen = named("petersen").unwrap();
        assert!(nowhere_zero_flow(&petersen, &z3(), DEFAULT_BUDGET).unwrap().is_none());
        // inconclusive budget is an error, not a "none"
        match nowhere_zero_flow(&petersen, &z3(), 3) {
            Err(Error::BudgetExceeded { coset_size, .. }) => assert_eq!(coset_size, 729),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn h_ratio_on_k4_across_moduli() {
        let g = named("k4").unwrap();
        let two = h_ratio(&g, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(two.ratio.to_string(), "2/3");
        let three = h_ratio(&g, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(three.ratio.to_string(), "5/6");
        let lifted = three.integer_certificate.unwrap();
        assert_eq!(lifted.support, 5);
        assert!(lifted.boundary_ok);
        let four = h_ratio(&g, 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(four.ratio.to_string(), "1/1");
        let six = h_ratio(&g, 6, DEFAULT_BUDGET).unwrap();
        assert_eq!(six.ratio.to_string(), "1/1");
        assert!(h_ratio(&g, 5, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn degenerate_graphs() {
        // a single vertex: one empty labelling, fully supported by
        // convention
        let g = MultiGraph::new(1, &[]).unwrap();
        let wg = WeightedGraph::zero(g);
        let report = max_support_flow(&wg, &z3(), DEFAULT_BUDGET).unwrap();
        assert_eq!(report.coset_size, 1);
        assert_eq!(report.support, 0);
        assert_eq!(report.ratio.to_string(), "1/1");

        // a loop is a one-edge cycle: support 1 is reachable
        let g = MultiGraph::new(1, &[(0, 0)]).unwrap();
        let wg = WeightedGraph::zero(g);
        let report = max_support_flow(&wg, &z3(), DEFAULT_BUDGET).unwrap();
        assert_eq!(report.coset_size, 3);
        assert_eq!(report.support, 1);
        assert_eq!(report.ratio.to_string(), "1/1");
    }
}
