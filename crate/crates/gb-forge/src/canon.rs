//! Canonical labeling of small colored multigraphs.
//!
//! Individualization-refinement: repeatedly split color classes by the
//! multiset of (neighbor color, edge multiplicity) signatures; when the
//! partition stops being discrete, branch on the vertices of the first
//! non-singleton class. Each discrete partition yields a certificate
//! (initial colors plus the adjacency multiplicity triangle under that
//! ordering) and the canonical form is the lexicographically smallest one.
//! Two leaves with equal certificates expose an automorphism; recorded
//! automorphisms that fix the individualized path prune sibling branches
//! whose vertex already lies in the orbit of an explored sibling, keeping
//! the tree small on vertex-transitive inputs.

/// Undirected multigraph with vertex colors. Parallel edges are stored as
/// multiplicities; self-loops are allowed and count once per loop.
#[derive(Clone, Debug)]
pub(crate) struct ColoredMultigraph {
    colors: Vec<u32>,
    adj: Vec<Vec<(u32, u32)>>,
}

/// Certificate plus the vertex ordering that produced it:
/// `order[i]` is the original vertex at canonical position `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Canonical {
    pub certificate: Vec<u8>,
    pub order: Vec<u32>,
}

impl ColoredMultigraph {
    pub fn new(colors: Vec<u32>) -> Self {
        let n = colors.len();
        ColoredMultigraph { colors, adj: vec![Vec::new(); n] }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.bump(u, v);
        if u != v {
            self.bump(v, u);
        }
    }

    fn bump(&mut self, u: usize, v: usize) {
        let list = &mut self.adj[u];
        match list.binary_search_by_key(&(v as u32), |&(w, _)| w) {
            Ok(i) => list[i].1 += 1,
            Err(i) => list.insert(i, (v as u32, 1)),
        }
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.adj[u]
            .binary_search_by_key(&(v as u32), |&(w, _)| w)
            .map(|i| self.adj[u][i].1)
            .unwrap_or(0)
    }

    /// Refines `colors` to the coarsest stable partition at least as fine as
    /// the input. New color ids are ranks of sorted signatures, so they
    /// depend only on the isomorphism type.
    fn refine(&self, colors: &mut [u32]) {
        let n = self.len();
        let mut classes = distinct(colors);
        loop {
            let mut sigs: Vec<(Vec<(u32, u32)>, usize)> = (0..n)
                .map(|v| {
                    let mut s: Vec<(u32, u32)> =
                        self.adj[v].iter().map(|&(u, m)| (colors[u as usize], m)).collect();
                    s.sort_unstable();
                    s.insert(0, (colors[v], 0));
                    (s, v)
                })
                .collect();
            sigs.sort();
            let mut next = vec![0u32; n];
            let mut color = 0u32;
            for i in 0..n {
                if i > 0 && sigs[i].0 != sigs[i - 1].0 {
                    color += 1;
                }
                next[sigs[i].1] = color;
            }
            let new_classes = (color + 1) as usize;
            colors.copy_from_slice(&next);
            if new_classes == classes {
                return;
            }
            classes = new_classes;
        }
    }

    /// Smallest color value whose class has more than one vertex, if any.
    fn first_split_class(&self, colors: &[u32]) -> Option<u32> {
        let mut counts = vec![0u32; self.len()];
        for &c in colors {
            counts[c as usize] += 1;
        }
        counts.iter().position(|&c| c > 1).map(|c| c as u32)
    }

    fn certificate_for(&self, colors: &[u32]) -> Canonical {
        let n = self.len();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by_key(|&v| colors[v as usize]);
        let mut cert = Vec::with_capacity(8 + 4 * n + n * (n + 1) / 2);
        cert.extend_from_slice(&(n as u32).to_le_bytes());
        for &v in &order {
            cert.extend_from_slice(&self.colors[v as usize].to_le_bytes());
        }
        for i in 0..n {
            for j in i..n {
                let m = self.multiplicity(order[i] as usize, order[j] as usize);
                debug_assert!(m <= u8::MAX as u32);
                cert.push(m as u8);
            }
        }
        Canonical { certificate: cert, order }
    }

    fn search(&self, colors: Vec<u32>, st: &mut SearchState) {
        match self.first_split_class(&colors) {
            None => {
                let leaf = self.certificate_for(&colors);
                match &st.best {
                    None => st.best = Some(leaf),
                    Some(b) if leaf.certificate < b.certificate => st.best = Some(leaf),
                    Some(b) if leaf.certificate == b.certificate => {
                        let perm = permutation_between(b, &leaf);
                        st.record(perm);
                    }
                    _ => {}
                }
            }
            Some(class) => {
                let fresh = self.len() as u32;
                let mut done: Vec<u32> = Vec::new();
                for v in 0..self.len() {
                    if colors[v] != class {
                        continue;
                    }
                    if st.orbit_hits(v as u32, &done) {
                        continue;
                    }
                    let mut child = colors.clone();
                    child[v] = fresh;
                    self.refine(&mut child);
                    st.path.push(v as u32);
                    self.search(child, st);
                    st.path.pop();
                    done.push(v as u32);
                }
            }
        }
    }

    /// Canonical form: minimum certificate over all discrete refinements
    /// reached by individualizing whole color classes.
    pub fn canonical(&self) -> Canonical {
        let mut colors = self.colors.clone();
        self.refine(&mut colors);
        let mut st = SearchState { best: None, autos: Vec::new(), path: Vec::new() };
        self.search(colors, &mut st);
        st.best.expect("search always reaches at least one leaf")
    }
}

const AUTO_CAP: usize = 1024;

/// Mutable search position: best leaf so far, automorphisms discovered from
/// equal-certificate leaf pairs (stored with their inverses), and the stack
/// of vertices individualized on the way to the current node.
struct SearchState {
    best: Option<Canonical>,
    autos: Vec<Vec<u32>>,
    path: Vec<u32>,
}

impl SearchState {
    fn record(&mut self, perm: Vec<u32>) {
        if self.autos.len() >= AUTO_CAP {
            return;
        }
        if perm.iter().enumerate().all(|(i, &x)| i as u32 == x) {
            return;
        }
        let mut inv = vec![0u32; perm.len()];
        for (i, &x) in perm.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        if !self.autos.contains(&perm) {
            self.autos.push(perm);
        }
        if !self.autos.contains(&inv) {
            self.autos.push(inv);
        }
    }

    /// Whether some product of recorded automorphisms that fix every vertex
    /// on the current path maps `v` into `done`. Skipping such a branch is
    /// safe because the automorphism carries the pruned subtree onto an
    /// explored one leaf for leaf, with equal certificates.
    fn orbit_hits(&self, v: u32, done: &[u32]) -> bool {
        if done.is_empty() || self.autos.is_empty() {
            return false;
        }
        let fixing: Vec<&Vec<u32>> = self
            .autos
            .iter()
            .filter(|a| self.path.iter().all(|&p| a[p as usize] == p))
            .collect();
        if fixing.is_empty() {
            return false;
        }
        let n = fixing[0].len();
        let mut seen = vec![false; n];
        let mut stack = vec![v];
        seen[v as usize] = true;
        while let Some(x) = stack.pop() {
            for a in &fixing {
                let y = a[x as usize];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        done.iter().any(|&w| seen[w as usize])
    }
}

/// Automorphism sending `a.order[i]` to `b.order[i]`; sound whenever the two
/// certificates are equal, since positions then carry identical colors and
/// multiplicities.
fn permutation_between(a: &Canonical, b: &Canonical) -> Vec<u32> {
    debug_assert_eq!(a.certificate, b.certificate);
    let mut perm = vec![0u32; a.order.len()];
    for i in 0..a.order.len() {
        perm[a.order[i] as usize] = b.order[i];
    }
    perm
}

fn distinct(colors: &[u32]) -> usize {
    let mut seen: Vec<u32> = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Vertex bijection `g1 -> g2` induced by two equal-certificate labelings.
pub(crate) fn witness_map(c1: &Canonical, c2: &Canonical) -> Vec<usize> {
    debug_assert_eq!(c1.certificate, c2.certificate);
    let n = c1.order.len();
    let mut map = vec![0usize; n];
    for i in 0..n {
        map[c1.order[i] as usize] = c2.order[i] as usize;
    }
    map
}
