//! Cayley multigraphs of `Z/nZ` and of planar quotients `Z^2/L`, with the
//! incidence matrices that tie them back to the codes.
//!
//! Every graph here is 4-regular: each group element `p` carries one edge to
//! `p + g1` and one to `p + g2`. Edges are indexed so that `h_k` is the
//! g1-edge based at the element with index `k` and `h_(m+k)` the g2-edge
//! based there (`m` the group order). The X checks of `GB(1+X^a, 1+X^b, n)`
//! are exactly the vertex-edge incidence matrix of the graph on `Z/nZ` with
//! generators `a, b`, and the Z checks are its face-edge incidence matrix,
//! where the face based at `p` is the closed walk `p, p+g1, p+g1+g2, p+g2`.

use serde_json::json;

use crate::canon::{witness_map, Canonical, ColoredMultigraph};
use crate::f2::BitMatrix;
use crate::{Error, Result};

/// Largest vertex count [`canonical_form`] will process.
pub const CANONICAL_VERTEX_LIMIT: usize = 512;

/// Finite abelian group on at most two generators, stored by invariant
/// factors `(d1, d2)` with `d1 | d2`; elements are coordinate pairs
/// `(x mod d1, y mod d2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    d1: u64,
    d2: u64,
}

/// Element of an [`AbelianGroup`] in reduced coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElem {
    pub x: u64,
    pub y: u64,
}

impl AbelianGroup {
    pub fn cyclic(n: u64) -> Self {
        AbelianGroup { d1: 1, d2: n }
    }

    pub fn invariant_factors(&self) -> (u64, u64) {
        (self.d1, self.d2)
    }

    pub fn order(&self) -> usize {
        (self.d1 * self.d2) as usize
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem { x: 0, y: 0 }
    }

    pub fn add(&self, a: GroupElem, b: GroupElem) -> GroupElem {
        GroupElem { x: (a.x + b.x) % self.d1, y: (a.y + b.y) % self.d2 }
    }

    pub fn reduce(&self, x: i64, y: i64) -> GroupElem {
        GroupElem {
            x: x.rem_euclid(self.d1 as i64) as u64,
            y: y.rem_euclid(self.d2 as i64) as u64,
        }
    }

    pub fn index_of(&self, e: GroupElem) -> usize {
        (e.x * self.d2 + e.y) as usize
    }

    pub fn elem_at(&self, index: usize) -> GroupElem {
        let index = index as u64;
        GroupElem { x: index / self.d2, y: index % self.d2 }
    }
}

/// Largest order of an element, i.e. the group exponent. With invariant
/// factors `(d1, d2)` and `d1 | d2` this is `d2`.
///
/// ```
/// use gb_forge::cayley::{max_element_order, torus_graph};
/// let g = torus_graph((3, 3), (3, -3)).unwrap();
/// assert_eq!(g.group().invariant_factors(), (3, 6));
/// assert_eq!(max_element_order(g.group()), 6);
/// ```
pub fn max_element_order(group: &AbelianGroup) -> u64 {
    group.d2
}

/// 4-regular Cayley multigraph with indexed edges.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    group: AbelianGroup,
    g1: GroupElem,
    g2: GroupElem,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<(u32, u32)>>,
}

impl CayleyGraph {
    fn new(group: AbelianGroup, g1: GroupElem, g2: GroupElem) -> Self {
        let m = group.order();
        let mut edges = Vec::with_capacity(2 * m);
        for &g in [g1, g2].iter() {
            for k in 0..m {
                let u = k as u32;
                let v = group.index_of(group.add(group.elem_at(k), g)) as u32;
                edges.push((u, v));
            }
        }
        let mut adj = vec![Vec::with_capacity(4); m];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[u as usize].push((v, e as u32));
            adj[v as usize].push((u, e as u32));
        }
        CayleyGraph { group, g1, g2, edges, adj }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn generators(&self) -> (GroupElem, GroupElem) {
        (self.g1, self.g2)
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.edges[e];
        (u as usize, v as usize)
    }

    /// Incident `(neighbor, edge index)` pairs of `v`. Always four entries;
    /// parallel edges appear separately and a self-loop appears twice.
    pub fn adjacency(&self, v: usize) -> &[(u32, u32)] {
        &self.adj[v]
    }

    /// Edge indices of the face based at `p`: the g1-edges at `p` and
    /// `p + g2`, and the g2-edges at `p` and `p + g1`.
    pub fn face_edges(&self, p: usize) -> [usize; 4] {
        let m = self.order();
        let pe = self.group.elem_at(p);
        let p_g1 = self.group.index_of(self.group.add(pe, self.g1));
        let p_g2 = self.group.index_of(self.group.add(pe, self.g2));
        [p, m + p_g1, p_g2, m + p]
    }

    /// JSON description: invariant factors, generator coordinates, and the
    /// indexed edge list.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "group": [self.group.d1, self.group.d2],
            "g1": [self.g1.x, self.g1.y],
            "g2": [self.g2.x, self.g2.y],
            "edges": self.edges.iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
        })
    }

    pub(crate) fn plain_colored(&self) -> ColoredMultigraph {
        let mut g = ColoredMultigraph::new(vec![0; self.order()]);
        for &(u, v) in &self.edges {
            g.add_edge(u as usize, v as usize);
        }
        g
    }
}

/// Cayley graph of `Z/nZ` with connection set `{a, b}`.
///
/// # Errors
///
/// [`Error::InvalidInput`] unless `n >= 2` and `1 <= a, b <= n-1`.
pub fn cayley_cyclic(n: usize, a: usize, b: usize) -> Result<CayleyGraph> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2, got {n}")));
    }
    if a == 0 || a >= n || b == 0 || b >= n {
        return Err(Error::InvalidInput(format!(
            "generators must lie in [1, {}], got a={a}, b={b}",
            n - 1
        )));
    }
    let group = AbelianGroup::cyclic(n as u64);
    Ok(CayleyGraph::new(
        group,
        GroupElem { x: 0, y: a as u64 },
        GroupElem { x: 0, y: b as u64 },
    ))
}

/// Cayley graph of the quotient `Z^2 / (Z v1 + Z v2)` with generators the
/// images of `(1, 0)` and `(0, 1)`.
///
/// ```
/// use gb_forge::cayley::torus_graph;
/// let g = torus_graph((2, 1), (-1, 2)).unwrap();
/// assert_eq!(g.order(), 5);
/// ```
///
/// # Errors
///
/// [`Error::InvalidInput`] when `v1, v2` are linearly dependent.
pub fn torus_graph(v1: (i64, i64), v2: (i64, i64)) -> Result<CayleyGraph> {
    let det = v1.0 * v2.1 - v1.1 * v2.0;
    if det == 0 {
        return Err(Error::InvalidInput(
            "periodicity vectors must be linearly independent".into(),
        ));
    }
    let (u, d1, d2) = smith_2x2([[v1.0, v2.0], [v1.1, v2.1]]);
    let group = AbelianGroup { d1: d1 as u64, d2: d2 as u64 };
    let map = |x: i64, y: i64| group.reduce(u[0][0] * x + u[0][1] * y, u[1][0] * x + u[1][1] * y);
    debug_assert_eq!(map(v1.0, v1.1), group.identity());
    debug_assert_eq!(map(v2.0, v2.1), group.identity());
    Ok(CayleyGraph::new(group, map(1, 0), map(0, 1)))
}

/// Smith normal form of an integer 2x2 matrix with nonzero determinant:
/// returns the left transform `U` (unimodular) and positive diagonal
/// `(d1, d2)` with `d1 | d2` such that `U M V = diag(d1, d2)` for some
/// unimodular `V`. Only `U` is needed: it maps `Z^2` coordinates to
/// quotient coordinates.
fn smith_2x2(m: [[i64; 2]; 2]) -> ([[i64; 2]; 2], i64, i64) {
    let mut m = m;
    let mut u = [[1i64, 0], [0, 1]];

    // Euclidean row steps: each division shrinks |m[1][0]|, each swap only
    // happens with a strictly smaller remainder, so both phases terminate.
    fn clear_below(m: &mut [[i64; 2]; 2], u: &mut [[i64; 2]; 2]) {
        while m[1][0] != 0 {
            if m[0][0] == 0 {
                m.swap(0, 1);
                u.swap(0, 1);
                continue;
            }
            let f = m[1][0] / m[0][0];
            for k in 0..2 {
                m[1][k] -= f * m[0][k];
                u[1][k] -= f * u[0][k];
            }
            if m[1][0] != 0 {
                m.swap(0, 1);
                u.swap(0, 1);
            }
        }
    }

    fn clear_right(m: &mut [[i64; 2]; 2]) {
        while m[0][1] != 0 {
            if m[0][0] == 0 {
                for row in m.iter_mut() {
                    row.swap(0, 1);
                }
                continue;
            }
            let f = m[0][1] / m[0][0];
            for row in m.iter_mut() {
                row[1] -= f * row[0];
            }
            if m[0][1] != 0 {
                for row in m.iter_mut() {
                    row.swap(0, 1);
                }
            }
        }
    }

    loop {
        clear_below(&mut m, &mut u);
        clear_right(&mut m);
        if m[1][0] == 0 && m[0][1] == 0 {
            if m[1][1] % m[0][0] == 0 {
                break;
            }
            // Fold the second invariant into the first column (a column
            // operation) and reduce again; the new corner entry becomes
            // gcd(d1, d2), which always divides the rest.
            m[1][0] = m[1][1];
        }
    }
    if m[0][0] < 0 {
        m[0][0] = -m[0][0];
        u[0] = [-u[0][0], -u[0][1]];
    }
    if m[1][1] < 0 {
        m[1][1] = -m[1][1];
        u[1] = [-u[1][0], -u[1][1]];
    }
    (u, m[0][0], m[1][1])
}

/// Vertex-edge incidence over F2: entry `(v, e)` is 1 iff `v` is an endpoint
/// of `e` an odd number of times, so self-loops contribute nothing.
pub fn incidence_x(g: &CayleyGraph) -> BitMatrix {
    let mut m = BitMatrix::zeros(g.order(), g.num_edges());
    for e in 0..g.num_edges() {
        let (u, v) = g.edge_endpoints(e);
        if u != v {
            m.set(u, e, true);
            m.set(v, e, true);
        }
    }
    m
}

/// Face-edge incidence over F2: row `p` holds the boundary of the face based
/// at `p`, with repeated edge slots cancelling.
pub fn incidence_z(g: &CayleyGraph) -> BitMatrix {
    let mut m = BitMatrix::zeros(g.order(), g.num_edges());
    for p in 0..g.order() {
        for e in g.face_edges(p) {
            m.set(p, e, !m.get(p, e));
        }
    }
    m
}

pub fn is_connected(g: &CayleyGraph) -> bool {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &(w, _) in g.adjacency(v) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                count += 1;
                stack.push(w as usize);
            }
        }
    }
    count == n
}

fn connected_avoiding(g: &CayleyGraph, banned: (usize, usize)) -> bool {
    let n = g.order();
    let Some(start) = (0..n).find(|&v| v != banned.0 && v != banned.1) else {
        return true;
    };
    let mut seen = vec![false; n];
    seen[banned.0] = true;
    seen[banned.1] = true;
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &(w, _) in g.adjacency(v) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                count += 1;
                stack.push(w as usize);
            }
        }
    }
    let banned_count = if banned.0 == banned.1 { 1 } else { 2 };
    count == n - banned_count
}

/// Whether the graph is 3-connected: at least four vertices, connected, and
/// no pair of vertices disconnects it. Because translations act transitively
/// on a Cayley graph, only pairs containing vertex 0 need to be removed.
///
/// # Errors
///
/// [`Error::InvalidInput`] when the graph has fewer than four vertices.
pub fn is_three_connected(g: &CayleyGraph) -> Result<bool> {
    if g.order() < 4 {
        return Err(Error::InvalidInput(format!(
            "3-connectivity needs at least 4 vertices, got {}",
            g.order()
        )));
    }
    if !is_connected(g) {
        return Ok(false);
    }
    Ok((1..g.order()).all(|w| connected_avoiding(g, (0, w))))
}

/// Canonical form of the underlying multigraph: a certificate that is equal
/// for isomorphic graphs and distinct otherwise, plus the vertex ordering
/// realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub certificate: Vec<u8>,
    /// `ordering[i]` is the original vertex at canonical position `i`.
    pub ordering: Vec<u32>,
}

/// Canonical form by individualization-refinement.
///
/// # Errors
///
/// [`Error::TooLarge`] beyond [`CANONICAL_VERTEX_LIMIT`] vertices.
pub fn canonical_form(g: &CayleyGraph) -> Result<CanonicalForm> {
    if g.order() > CANONICAL_VERTEX_LIMIT {
        return Err(Error::TooLarge(format!(
            "canonical form limited to {CANONICAL_VERTEX_LIMIT} vertices, got {}",
            g.order()
        )));
    }
    let Canonical { certificate, order } = g.plain_colored().canonical();
    Ok(CanonicalForm { certificate, ordering: order })
}

/// Whether two graphs are isomorphic as multigraphs.
///
/// # Errors
///
/// Propagates the [`canonical_form`] size guard.
pub fn is_isomorphic(g1: &CayleyGraph, g2: &CayleyGraph) -> Result<bool> {
    if g1.order() != g2.order() || g1.num_edges() != g2.num_edges() {
        return Ok(false);
    }
    Ok(canonical_form(g1)?.certificate == canonical_form(g2)?.certificate)
}

/// Vertex bijection realizing an isomorphism, if one exists.
pub fn isomorphism_witness(g1: &CayleyGraph, g2: &CayleyGraph) -> Result<Option<Vec<usize>>> {
    if g1.order() != g2.order() || g1.num_edges() != g2.num_edges() {
        return Ok(None);
    }
    let c1 = canonical_form(g1)?;
    let c2 = canonical_form(g2)?;
    if c1.certificate != c2.certificate {
        return Ok(None);
    }
    let c1 = Canonical { certificate: c1.certificate, order: c1.ordering };
    let c2 = Canonical { certificate: c2.certificate, order: c2.ordering };
    Ok(Some(witness_map(&c1, &c2)))
}

/// Graphviz rendering; g2 edges are dashed so the two generators stay
/// visually distinct.
pub fn export_dot(g: &CayleyGraph) -> String {
    let mut out = String::from("graph cayley {\n  node [shape=circle];\n");
    let m = g.order();
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        let style = if e < m { "" } else { " [style=dashed]" };
        out.push_str(&format!("  {u} -- {v}{style};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::gb_build;
    use crate::f2::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cyclic_graph_edge_layout() {
        let g = cayley_cyclic(5, 1, 2).unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.num_edges(), 10);
        let expected = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 2), (1, 3), (2, 4), (3, 0), (4, 1),
        ];
        for (e, &(u, v)) in expected.iter().enumerate() {
            assert_eq!(g.edge_endpoints(e), (u, v));
        }
        assert_eq!(g.face_edges(0), [0, 6, 2, 5]);
        for v in 0..5 {
            assert_eq!(g.adjacency(v).len(), 4);
        }
    }

    #[test]
    fn cyclic_rejects_out_of_range_generators() {
        assert!(cayley_cyclic(1, 1, 1).is_err());
        assert!(cayley_cyclic(5, 0, 2).is_err());
        assert!(cayley_cyclic(5, 1, 5).is_err());
    }

    #[test]
    fn json_export_shape() {
        let g = cayley_cyclic(5, 1, 2).unwrap();
        let v = g.to_json();
        assert_eq!(v["group"], serde_json::json!([1, 5]));
        assert_eq!(v["g1"], serde_json::json!([0, 1]));
        assert_eq!(v["g2"], serde_json::json!([0, 2]));
        assert_eq!(v["edges"].as_array().unwrap().len(), 10);
        assert_eq!(v["edges"][5], serde_json::json!([0, 2]));
    }

    #[test]
    fn incidence_matrices_match_parity_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..40 {
            let n = rng.gen_range(2..30);
            let a = rng.gen_range(1..n);
            let b = rng.gen_range(1..n);
            let g = cayley_cyclic(n, a, b).unwrap();
            let code = gb_build(
                &Poly::from_exponents(&[0, a]),
                &Poly::from_exponents(&[0, b]),
                n,
            )
            .unwrap();
            assert!(incidence_x(&g) == *code.hx(), "H_X mismatch at ({a},{b},{n})");
            assert!(incidence_z(&g) == *code.hz(), "H_Z mismatch at ({a},{b},{n})");
        }
    }

    #[test]
    fn faces_bound_cycles_even_on_torus_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..25 {
            let v1 = (rng.gen_range(-5..=5i64), rng.gen_range(-5..=5i64));
            let v2 = (rng.gen_range(-5..=5i64), rng.gen_range(-5..=5i64));
            if v1.0 * v2.1 - v1.1 * v2.0 == 0 {
                continue;
            }
            let g = torus_graph(v1, v2).unwrap();
            assert!(incidence_x(&g).mul_transpose(&incidence_z(&g)).is_zero());
        }
    }

    #[test]
    fn torus_reduces_to_invariant_factors() {
        let g = torus_graph((3, 3), (3, -3)).unwrap();
        assert_eq!(g.group().invariant_factors(), (3, 6));
        assert_eq!(g.order(), 18);
        assert_eq!(max_element_order(g.group()), 6);

        let g = torus_graph((2, 1), (-1, 2)).unwrap();
        assert_eq!(g.group().invariant_factors(), (1, 5));

        let g = torus_graph((4, 0), (0, 4)).unwrap();
        assert_eq!(g.group().invariant_factors(), (4, 4));
        assert_eq!(max_element_order(g.group()), 4);

        assert!(torus_graph((2, 4), (1, 2)).is_err());
    }

    #[test]
    fn torus_generators_step_one_lattice_unit() {
        // Walking g1 exactly n times returns home on the square torus.
        let g = torus_graph((5, 0), (0, 5)).unwrap();
        let (g1, _) = g.generators();
        let mut p = g.group().identity();
        for _ in 0..5 {
            p = g.group().add(p, g1);
        }
        assert_eq!(p, g.group().identity());
        assert_eq!(g.order(), 25);
    }

    #[test]
    fn connectivity_follows_generator_gcd() {
        assert!(is_connected(&cayley_cyclic(6, 2, 3).unwrap()));
        assert!(!is_connected(&cayley_cyclic(6, 2, 4).unwrap()));
        assert!(is_connected(&cayley_cyclic(9, 3, 1).unwrap()));
        assert!(!is_connected(&cayley_cyclic(9, 3, 6).unwrap()));
    }

    /// Reference 3-connectivity that removes every vertex pair, with no
    /// transitivity shortcut.
    fn three_connected_brute(g: &CayleyGraph) -> bool {
        if !is_connected(g) {
            return false;
        }
        for u in 0..g.order() {
            for w in u + 1..g.order() {
                if !connected_avoiding(g, (u, w)) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn three_connectivity_agrees_with_pairwise_reference() {
        for n in 4..=12 {
            for a in 1..n {
                for b in a..n {
                    let g = cayley_cyclic(n, a, b).unwrap();
                    assert_eq!(
                        is_three_connected(&g).unwrap(),
                        three_connected_brute(&g),
                        "({a},{b},{n})"
                    );
                }
            }
        }
    }

    #[test]
    fn three_connectivity_known_cases() {
        assert!(is_three_connected(&cayley_cyclic(4, 1, 2).unwrap()).unwrap());
        assert!(is_three_connected(&cayley_cyclic(9, 1, 3).unwrap()).unwrap());
        for n in [4, 7, 12] {
            assert!(
                !is_three_connected(&cayley_cyclic(n, 1, 1).unwrap()).unwrap(),
                "double edges leave a 2-cut at n={n}"
            );
        }
        assert!(is_three_connected(&cayley_cyclic(3, 1, 2).unwrap()).is_err());
    }

    #[test]
    fn isomorphism_detects_multiplier_relabelings() {
        let g1 = cayley_cyclic(13, 1, 5).unwrap();
        let g2 = cayley_cyclic(13, 2, 10).unwrap();
        assert!(is_isomorphic(&g1, &g2).unwrap());
        let w = isomorphism_witness(&g1, &g2).unwrap().unwrap();
        for e in 0..g1.num_edges() {
            let (u, v) = g1.edge_endpoints(e);
            let (mu, mv) = (w[u], w[v]);
            assert!(g2
                .adjacency(mu)
                .iter()
                .any(|&(nbr, _)| nbr as usize == mv));
        }
    }

    #[test]
    fn isomorphism_examples() {
        let a = cayley_cyclic(5, 1, 2).unwrap();
        let b = cayley_cyclic(5, 1, 3).unwrap();
        assert!(is_isomorphic(&a, &b).unwrap());

        let c = cayley_cyclic(8, 1, 2).unwrap();
        let d = cayley_cyclic(8, 1, 3).unwrap();
        assert!(!is_isomorphic(&c, &d).unwrap(), "one has triangles, the other not");
    }

    #[test]
    fn torus_and_cyclic_presentations_can_coincide() {
        let odd = torus_graph((2, 1), (-1, 2)).unwrap();
        let cyc = cayley_cyclic(5, 1, 2).unwrap();
        assert!(is_isomorphic(&odd, &cyc).unwrap());
    }

    #[test]
    fn canonical_form_guard() {
        let g = cayley_cyclic(600, 1, 7).unwrap();
        assert!(matches!(canonical_form(&g), Err(Error::TooLarge(_))));
    }

    #[test]
    fn dot_export_lists_every_edge() {
        let g = cayley_cyclic(6, 1, 2).unwrap();
        let dot = export_dot(&g);
        assert!(dot.starts_with("graph cayley {"));
        assert_eq!(dot.matches(" -- ").count(), 12);
        assert_eq!(dot.matches("style=dashed").count(), 6);
    }

    #[test]
    fn smith_form_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..300 {
            let m = [
                [rng.gen_range(-9..=9i64), rng.gen_range(-9..=9i64)],
                [rng.gen_range(-9..=9i64), rng.gen_range(-9..=9i64)],
            ];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det == 0 {
                continue;
            }
            let (u, d1, d2) = smith_2x2(m);
            assert!(d1 > 0 && d2 > 0);
            assert_eq!(d1 * d2, det.abs(), "m={m:?}");
            assert_eq!(d2 % d1, 0, "m={m:?}");
            let udet = u[0][0] * u[1][1] - u[0][1] * u[1][0];
            assert_eq!(udet.abs(), 1, "U not unimodular for m={m:?}");
            // Columns of M map to zero in the quotient coordinates.
            for col in 0..2 {
                let x = u[0][0] * m[0][col] + u[0][1] * m[1][col];
                let y = u[1][0] * m[0][col] + u[1][1] * m[1][col];
                assert_eq!(x.rem_euclid(d1), 0);
                assert_eq!(y.rem_euclid(d2), 0);
            }
        }
    }
}
