//! Exact minimum-distance engine.
//!
//! A codeword of `GB(1 + X^a, 1 + X^b, n)` is an edge subset of the Cayley
//! graph on `Z/nZ` with generators `a, b` whose boundary vanishes, and it is
//! logical exactly when it is not a sum of faces. A minimum-weight codeword
//! splits into edge-disjoint simple cycles of which at least one is not a
//! sum of faces, so the distance is the length of the shortest such cycle.
//! Cyclic shifts are graph automorphisms that permute the faces, so every
//! cycle can be shifted onto vertex 0 and the search roots there.
//!
//! The engine squeezes the answer between the lattice lower bound and
//! staircase upper bounds before falling back to an iterative-deepening
//! search over rooted simple cycles.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{cayley_cyclic, CayleyGraph};
use crate::code::{gb_build, gb_dimension, oracle_distance, GbCode, OracleOutcome, TwoTermSpec};
use crate::f2::{BitVec, Poly, RowBasis};
use crate::lattice::{lattice_from_alpha, reduce_unit_form, staircase_codeword, theorem1_bound};
use crate::{Error, Result};

/// Default cap on explored search-tree nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Tuning knobs for [`min_distance`].
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Hard cap on the cycle length searched; `None` picks
    /// `2 * ceil(sqrt(2n)) + 6`.
    pub w_max: Option<usize>,
    /// Node budget for the deepening search; exhausting it degrades the
    /// result to certified bounds instead of an exact value.
    pub node_budget: u64,
    /// Worker threads for the root fan-out; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions {
            w_max: None,
            node_budget: DEFAULT_NODE_BUDGET,
            threads: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Exact,
    Bounded,
    KZero,
}

/// Outcome of a distance computation on one code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub n: usize,
    pub a_exps: Vec<usize>,
    pub b_exps: Vec<usize>,
    #[serde(rename = "N")]
    pub block_length: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub d: Option<usize>,
    pub lower: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub upper: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub certificate_support: Option<Vec<usize>>,
    pub nodes: u64,
    pub status: SearchStatus,
    pub multigraph_regime: bool,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn ceil_sqrt(m: usize) -> usize {
    let mut s = (m as f64).sqrt() as usize;
    while s * s < m {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= m {
        s -= 1;
    }
    s
}

/// Default depth cap: `2 * ceil(sqrt(2n)) + 6`.
pub fn default_w_max(n: usize) -> usize {
    2 * ceil_sqrt(2 * n) + 6
}

/// Tests whether a kernel vector is a sum of faces, i.e. whether it lies in
/// the rowspace of `H_Z`. Vectors outside `ker H_X` are rejected as caller
/// bugs.
pub fn face_sum_test(cycle_edges: &BitVec, code: &GbCode) -> Result<bool> {
    if cycle_edges.len() != code.block_length() {
        return Err(Error::InvalidInput(format!(
            "edge vector has length {}, expected {}",
            cycle_edges.len(),
            code.block_length()
        )));
    }
    if !code.hx().mul_vec(cycle_edges).is_zero() {
        return Err(Error::InvalidInput(
            "edge vector is not in ker H_X".into(),
        ));
    }
    Ok(code.hz_basis().contains(cycle_edges))
}

/// Net generator step counts of an edge-index walk starting at `start`.
///
/// Edge `e < n` joins `e` to `e + a`; traversing it away from `e` counts +1
/// in the first coordinate and -1 the other way. Edges `n <= e < 2n` do the
/// same for `b` in the second coordinate. For a closed walk the result
/// `(x, y)` satisfies `a x + b y = 0 mod n`.
pub fn walk_displacement(start: usize, edges: &[usize], code: &GbCode) -> Result<(i64, i64)> {
    let n = code.n();
    let sa = TwoTermSpec::of(code.a_poly()).ok_or_else(|| {
        Error::InvalidInput(format!("walks need a two-term A, got {}", code.a_poly()))
    })?;
    let sb = TwoTermSpec::of(code.b_poly()).ok_or_else(|| {
        Error::InvalidInput(format!("walks need a two-term B, got {}", code.b_poly()))
    })?;
    let (g1, g2) = (sa.step(n), sb.step(n));
    if start >= n {
        return Err(Error::InvalidInput(format!(
            "start vertex {start} out of range for {n} vertices"
        )));
    }
    let (mut v, mut x, mut y) = (start, 0i64, 0i64);
    for &e in edges {
        if e < n {
            if v == e {
                x += 1;
                v = (e + g1) % n;
            } else if v == (e + g1) % n {
                x -= 1;
                v = e;
            } else {
                return Err(Error::InvalidInput(format!(
                    "edge {e} is not incident to vertex {v}"
                )));
            }
        } else if e < 2 * n {
            let base = e - n;
            if v == base {
                y += 1;
                v = (base + g2) % n;
            } else if v == (base + g2) % n {
                y -= 1;
                v = base;
            } else {
                return Err(Error::InvalidInput(format!(
                    "edge {e} is not incident to vertex {v}"
                )));
            }
        } else {
            return Err(Error::InvalidInput(format!(
                "edge index {e} out of range for {} edges",
                2 * n
            )));
        }
    }
    Ok((x, y))
}

struct TaskResult {
    found: Option<Vec<usize>>,
    nodes: u64,
    exhausted: bool,
}

struct Dfs<'a> {
    graph: &'a CayleyGraph,
    dist0: &'a [u32],
    basis: &'a RowBasis,
    w: usize,
    root_edge: usize,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    visited: Vec<bool>,
    path: Vec<usize>,
}

impl Dfs<'_> {
    fn search(&mut self, v: usize, depth: usize) -> Option<Vec<usize>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return None;
        }
        if depth + 1 == self.w {
            for &(nbr, e) in self.graph.adjacency(v) {
                let e = e as usize;
                // Closing into a larger edge index than the root edge keeps
                // exactly one of the two traversal directions of each cycle.
                if nbr == 0 && e > self.root_edge {
                    let mut c = BitVec::zeros(self.graph.num_edges());
                    for &pe in &self.path {
                        c.flip(pe);
                    }
                    c.flip(e);
                    if !self.basis.contains(&c) {
                        return Some(c.support());
                    }
                }
            }
        } else {
            for &(nbr, e) in self.graph.adjacency(v) {
                let nbr = nbr as usize;
                let room = self.w - depth - 1;
                if nbr != 0 && !self.visited[nbr] && (self.dist0[nbr] as usize) <= room {
                    self.visited[nbr] = true;
                    self.path.push(e as usize);
                    let hit = self.search(nbr, depth + 1);
                    self.path.pop();
                    self.visited[nbr] = false;
                    if hit.is_some() || self.exhausted {
                        return hit;
                    }
                }
            }
        }
        None
    }
}

fn dfs_task(
    graph: &CayleyGraph,
    dist0: &[u32],
    basis: &RowBasis,
    w: usize,
    root_vertex: usize,
    root_edge: usize,
    budget: u64,
) -> TaskResult {
    let mut dfs = Dfs {
        graph,
        dist0,
        basis,
        w,
        root_edge,
        budget,
        nodes: 0,
        exhausted: false,
        visited: vec![false; graph.order()],
        path: vec![root_edge],
    };
    dfs.visited[0] = true;
    dfs.visited[root_vertex] = true;
    let found = dfs.search(root_vertex, 1);
    TaskResult {
        found,
        nodes: dfs.nodes,
        exhausted: dfs.exhausted,
    }
}

fn bfs_from_zero(graph: &CayleyGraph) -> Vec<u32> {
    let mut dist = vec![u32::MAX; graph.order()];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &(nbr, _) in graph.adjacency(v) {
            let nbr = nbr as usize;
            if dist[nbr] == u32::MAX {
                dist[nbr] = dist[v] + 1;
                queue.push_back(nbr);
            }
        }
    }
    dist
}

/// How a searched codeword maps back to the original code: substitute
/// `X -> X^mult`, swap the two blocks when the reduction inverted the `B`
/// exponent instead of the `A` one, then undo the monomial shifts.
#[derive(Clone, Copy)]
struct PullBack {
    mult: usize,
    swapped: bool,
    shift_a: usize,
    shift_b: usize,
}

fn pull_back_support(support: &[usize], map: PullBack, n: usize) -> Vec<usize> {
    let mut mapped: Vec<usize> = support
        .iter()
        .map(|&s| {
            let (in_u, pos) = if s < n { (true, s) } else { (false, s - n) };
            let scaled = map.mult * pos % n;
            if in_u != map.swapped {
                (scaled + n - map.shift_a) % n
            } else {
                n + (scaled + n - map.shift_b) % n
            }
        })
        .collect();
    mapped.sort_unstable();
    mapped
}

/// Installs the pulled-back certificate on `out` after verifying it really
/// is a logical operator of `code`; returns its weight.
fn adopt_certificate(
    code: &GbCode,
    out: &mut DistanceResult,
    searched_support: &[usize],
    map: PullBack,
) -> Result<usize> {
    let n = code.n();
    let support = pull_back_support(searched_support, map, n);
    let mut c = BitVec::zeros(2 * n);
    for &s in &support {
        c.flip(s);
    }
    let valid = c.weight() == searched_support.len()
        && code.hx().mul_vec(&c).is_zero()
        && !code.hz_basis().contains(&c);
    if !valid {
        return Err(Error::Internal(format!(
            "certificate pullback failed for GB({}; {}; {})",
            code.a_poly(),
            code.b_poly(),
            n
        )));
    }
    out.certificate_support = Some(support);
    Ok(searched_support.len())
}

fn cross_check_oracle(searched: &GbCode, d: usize) -> Result<()> {
    match oracle_distance(searched) {
        Ok(OracleOutcome::Distance(od)) if od == d => Ok(()),
        Ok(OracleOutcome::Distance(od)) => Err(Error::Internal(format!(
            "cycle search found d = {d} but exhaustive enumeration found {od}"
        ))),
        Ok(OracleOutcome::NoLogicalOperators) => Err(Error::Internal(
            "exhaustive enumeration found no logical operators for a k > 0 code".into(),
        )),
        Err(Error::TooLarge(_)) => Ok(()),
        Err(e) => Err(e),
    }
}

/// Exact minimum distance of a two-term code.
///
/// Pipeline: normalize both polynomials to constant term and, when one
/// exponent step is invertible mod `n`, to the unit form `GB(1 + X,
/// 1 + X^alpha, n)`; take the lattice bound as the floor; project shortest
/// and next-shell lattice vectors to staircase codewords for the ceiling;
/// and when the two disagree, run an iterative-deepening DFS for the
/// shortest rooted simple cycle that is not a sum of faces. Certificates are
/// mapped back to the original code and re-verified against its matrices.
pub fn min_distance(code: &GbCode, opts: &SearchOptions) -> Result<DistanceResult> {
    let n = code.n();
    let sa = TwoTermSpec::of(code.a_poly()).ok_or_else(|| {
        Error::InvalidInput(format!(
            "cycle search needs a two-term A, got {}",
            code.a_poly()
        ))
    })?;
    let sb = TwoTermSpec::of(code.b_poly()).ok_or_else(|| {
        Error::InvalidInput(format!(
            "cycle search needs a two-term B, got {}",
            code.b_poly()
        ))
    })?;
    let k = gb_dimension(code);
    let mut out = DistanceResult {
        n,
        a_exps: vec![sa.i, sa.j],
        b_exps: vec![sb.i, sb.j],
        block_length: 2 * n,
        k,
        d: None,
        lower: 0,
        upper: None,
        certificate_support: None,
        nodes: 0,
        status: SearchStatus::KZero,
        multigraph_regime: false,
    };
    if k == 0 {
        return Ok(out);
    }

    let (a_step, b_step) = (sa.step(n), sb.step(n));
    let reduction = reduce_unit_form(a_step, b_step, n);
    let (g1, g2) = match reduction {
        Some(alpha) => (1, alpha),
        None => (a_step, b_step),
    };
    let swapped = reduction.is_some() && gcd(a_step, n) != 1;
    let map = PullBack {
        mult: match (reduction.is_some(), swapped) {
            (false, _) => 1,
            (true, false) => a_step,
            (true, true) => b_step,
        },
        swapped,
        shift_a: sa.i,
        shift_b: sb.i,
    };
    out.multigraph_regime =
        g1 == g2 || (g1 + g2) % n == 0 || (2 * g1) % n == 0 || (2 * g2) % n == 0;

    let searched = gb_build(
        &Poly::from_exponents(&[0, g1]),
        &Poly::from_exponents(&[0, g2]),
        n,
    )?;
    debug_assert_eq!(gb_dimension(&searched), k);
    out.lower = theorem1_bound(&searched).unwrap_or(2);

    // Staircase candidates over the two smallest norm shells.
    let mut stair: Option<(usize, Vec<usize>)> = None;
    if g1 == 1 {
        let lattice = lattice_from_alpha(g2, n)?;
        let lambda = lattice.lambda_min();
        let pool = lattice.vectors_up_to_norm(2 * lambda);
        let next = pool
            .iter()
            .map(|v| v.manhattan())
            .filter(|&m| m > lambda)
            .min();
        for v in pool {
            let norm = v.manhattan();
            if norm != lambda && Some(norm) != next {
                continue;
            }
            for p in [v, crate::lattice::LatticeVector::new(-v.x, -v.y)] {
                let c = staircase_codeword(p, &searched)?;
                if c.is_zero() || searched.hz_basis().contains(&c) {
                    continue;
                }
                let cand = (c.weight(), c.support());
                if stair.as_ref().map_or(true, |best| cand < *best) {
                    stair = Some(cand);
                }
            }
        }
    }

    let exact = |out: &mut DistanceResult, code: &GbCode, w: usize, sup: &[usize]| -> Result<()> {
        let weight = adopt_certificate(code, out, sup, map)?;
        debug_assert_eq!(weight, w);
        out.d = Some(w);
        out.lower = w;
        out.upper = Some(w);
        out.status = SearchStatus::Exact;
        if out.multigraph_regime && n <= 12 {
            cross_check_oracle(&searched, w)?;
        }
        Ok(())
    };

    if let Some((uw, usup)) = &stair {
        if out.lower >= *uw {
            exact(&mut out, code, *uw, usup)?;
            return Ok(out);
        }
    }

    let graph = cayley_cyclic(n, g1, g2)?;
    let dist0 = bfs_from_zero(&graph);
    let w_cap = opts.w_max.unwrap_or_else(|| default_w_max(n)).max(2);
    let cap = match &stair {
        Some((uw, _)) => w_cap.min(uw - 1),
        None => w_cap,
    };
    let start = out.lower.max(2);

    let pool = match opts.threads {
        Some(t) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?,
        ),
        None => None,
    };

    let mut remaining = opts.node_budget;
    let mut found: Option<(usize, Vec<usize>)> = None;
    let mut exhausted_at: Option<usize> = None;
    for w in start..=cap {
        if w == 2 {
            // Two-cycles are pairs of parallel edges; enumerate them at
            // vertex 0 directly.
            let adj0 = graph.adjacency(0);
            let mut best: Option<Vec<usize>> = None;
            for (i, &(u1, e1)) in adj0.iter().enumerate() {
                for &(u2, e2) in &adj0[i + 1..] {
                    if u1 != u2 || e1 == e2 {
                        continue;
                    }
                    out.nodes += 1;
                    let mut c = BitVec::zeros(2 * n);
                    c.flip(e1 as usize);
                    c.flip(e2 as usize);
                    if !searched.hz_basis().contains(&c) {
                        let sup = c.support();
                        if best.as_ref().map_or(true, |b| sup < *b) {
                            best = Some(sup);
                        }
                    }
                }
            }
            if let Some(sup) = best {
                found = Some((2, sup));
                break;
            }
            continue;
        }

        let tasks: Vec<(usize, usize)> = graph
            .adjacency(0)
            .iter()
            .map(|&(v, e)| (v as usize, e as usize))
            .collect();
        // Fixed per-task slices keep the node accounting, and therefore the
        // result, independent of scheduling.
        let slice = remaining / tasks.len() as u64;
        if slice == 0 {
            exhausted_at = Some(w);
            break;
        }
        let run = || -> Vec<TaskResult> {
            tasks
                .par_iter()
                .map(|&(v, e)| dfs_task(&graph, &dist0, searched.hz_basis(), w, v, e, slice))
                .collect()
        };
        let results = match &pool {
            Some(p) => p.install(run),
            None => run(),
        };
        let mut depth_found: Option<Vec<usize>> = None;
        let mut depth_exhausted = false;
        for r in results {
            out.nodes += r.nodes;
            remaining = remaining.saturating_sub(r.nodes);
            depth_exhausted |= r.exhausted;
            if let Some(sup) = r.found {
                if depth_found.as_ref().map_or(true, |b| sup < *b) {
                    depth_found = Some(sup);
                }
            }
        }
        if let Some(sup) = depth_found {
            found = Some((w, sup));
            break;
        }
        if depth_exhausted {
            exhausted_at = Some(w);
            break;
        }
    }

    match (found, exhausted_at) {
        (Some((w, sup)), _) => {
            exact(&mut out, code, w, &sup)?;
        }
        (None, Some(w)) => {
            out.status = SearchStatus::Bounded;
            out.lower = out.lower.max(w);
            if let Some((uw, usup)) = &stair {
                out.upper = Some(*uw);
                adopt_certificate(code, &mut out, usup, map)?;
            }
        }
        (None, None) => match &stair {
            Some((uw, usup)) if cap == uw - 1 => {
                exact(&mut out, code, *uw, usup)?;
            }
            other => {
                out.status = SearchStatus::Bounded;
                out.lower = out.lower.max(cap + 1);
                if let Some((uw, usup)) = other {
                    out.upper = Some(*uw);
                    adopt_certificate(code, &mut out, usup, map)?;
                }
            }
        },
    }
    Ok(out)
}

/// Distance of the transposed role, `ker H_Z` against `rs H_X`, computed by
/// running the engine on the reciprocal-polynomial code whose check matrices
/// are exactly `(H_Z, H_X)`.
pub fn min_distance_z(code: &GbCode, opts: &SearchOptions) -> Result<DistanceResult> {
    min_distance(&code.z_dual(), opts)
}
