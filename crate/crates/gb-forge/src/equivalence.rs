//! Equivalence machinery for two-term codes: canonical parameter triples
//! under the parameter-preserving moves, and code-equivalence verdicts for
//! Cayley-graph codes backed by graph isomorphism, 3-connectivity
//! certificates, and group invariants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::canon::{witness_map, ColoredMultigraph};
use crate::cayley::{
    canonical_form, cayley_cyclic, incidence_x, incidence_z, is_three_connected, AbelianGroup,
    CayleyGraph,
};
use crate::code::{gb_build, GbCode};
use crate::f2::{BitMatrix, Poly};
use crate::{Error, Result};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Parameters (a, b, n) of the code with check polynomials 1 + X^a and
/// 1 + X^b over circulants of size n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub a: usize,
    pub b: usize,
    pub n: usize,
}

impl Triple {
    /// Builds a triple with both exponents reduced into [1, n−1].
    ///
    /// # Errors
    ///
    /// [`Error::InvalidInput`] when n < 2 or an exponent is ≡ 0 mod n.
    pub fn new(a: usize, b: usize, n: usize) -> Result<Triple> {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "circulant size must be at least 2, got {n}"
            )));
        }
        let a = a % n;
        let b = b % n;
        if a == 0 || b == 0 {
            return Err(Error::InvalidInput(
                "exponents must be nonzero mod n".into(),
            ));
        }
        Ok(Triple { a, b, n })
    }

    /// Whether gcd(a, b, n) = 1, the condition for dimension exactly 2.
    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.n) == 1
    }

    /// The code with H_X = [Circ(1 + X^a) | Circ(1 + X^b)].
    ///
    /// # Errors
    ///
    /// Propagates [`gb_build`] validation.
    pub fn code(&self) -> Result<GbCode> {
        let a = Poly::from_exponents(&[0, self.a]);
        let b = Poly::from_exponents(&[0, self.b]);
        gb_build(&a, &b, self.n)
    }

    /// The connectivity graph of the code: the Cayley graph of Z/nZ with
    /// generator pair (a, b).
    ///
    /// # Errors
    ///
    /// Propagates [`cayley_cyclic`] validation.
    pub fn graph(&self) -> Result<CayleyGraph> {
        cayley_cyclic(self.n, self.a, self.b)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.n)
    }
}

impl FromStr for Triple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Triple> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "expected a,b,n with three components, got {s:?}"
            )));
        }
        let nums: Vec<usize> = parts
            .iter()
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|e| Error::InvalidInput(format!("bad component {p:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        Triple::new(nums[0], nums[1], nums[2])
    }
}

/// Lexicographically minimal representative of the orbit of (a, b) under
/// unit scaling (a, b) → (ka, kb) for gcd(k, n) = 1, exponent negation
/// (a, b) → (n−a, b) and (a, b) → (a, n−b), and the block swap
/// (a, b) → (b, a). All these moves preserve the code parameters, so the
/// orbit representative indexes the code up to equivalence of parameters.
pub fn canonical_triple(t: Triple) -> Triple {
    let n = t.n;
    let mut best = (n, n);
    for k in 1..n {
        if gcd(k, n) != 1 {
            continue;
        }
        let x = k * t.a % n;
        let y = k * t.b % n;
        for cand in [
            (x, y),
            (n - x, y),
            (x, n - y),
            (n - x, n - y),
            (y, x),
            (n - y, x),
            (y, n - x),
            (n - y, n - x),
        ] {
            if cand < best {
                best = cand;
            }
        }
    }
    Triple { a: best.0, b: best.1, n }
}

/// Why two codes were ruled distinct.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistinctReason {
    /// The connectivity graphs are non-isomorphic as multigraphs.
    NonIsomorphicGraphs,
    /// The underlying groups already differ by invariant factors.
    GroupInvariant,
}

/// Outcome of an equivalence test between two Cayley-graph codes.
///
/// `Equivalent` is only produced from a verified isomorphism that maps
/// vertices to vertices, faces to faces, and edges to edges, which yields
/// the qubit permutation carrying one code's check matrices onto the
/// other's. `Distinct` with `whitney_certified` additionally guarantees
/// both graphs are 3-connected, so non-isomorphism rules out any
/// cycle-space-preserving qubit permutation. Anything outside these two
/// sound regimes is `Unknown`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquivVerdict {
    Equivalent {
        /// `vertex_map[v]` is the image of vertex v of the first graph.
        vertex_map: Vec<usize>,
        /// `qubit_map[e]` is the image of edge e, i.e. the column
        /// permutation identifying the two codes' check matrices.
        qubit_map: Vec<usize>,
    },
    Distinct {
        reason: DistinctReason,
        whitney_certified: bool,
        /// SHA-256 digests of the two canonical graph certificates; they
        /// differ exactly when the graphs are non-isomorphic.
        certificate_digests: [String; 2],
    },
    Unknown { detail: String },
}

impl EquivVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivVerdict::Equivalent { .. })
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, EquivVerdict::Distinct { .. })
    }
}

/// Whether two abelian groups differ by invariant factors. A cheap
/// pre-filter: distinct factors mean non-isomorphic groups, though the
/// Cayley graphs must still be compared to certify a code-level verdict.
pub fn group_invariant_distinct(g1: &AbelianGroup, g2: &AbelianGroup) -> bool {
    g1.invariant_factors() != g2.invariant_factors()
}

fn digest_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    let mut s = String::with_capacity(out.len() * 2);
    for b in out {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// The incidence structure of both check matrices as one colored graph:
/// color 0 holds the graph vertices (X checks), color 1 the faces
/// (Z checks), color 2 the edges (qubits), with an arc wherever the
/// corresponding matrix entry is 1.
fn augmented_incidence(g: &CayleyGraph) -> (ColoredMultigraph, BitMatrix, BitMatrix) {
    let x = incidence_x(g);
    let z = incidence_z(g);
    let nv = g.order();
    let ne = g.num_edges();
    let mut colors = vec![0u32; nv];
    colors.extend(std::iter::repeat(1).take(nv));
    colors.extend(std::iter::repeat(2).take(ne));
    let mut cg = ColoredMultigraph::new(colors);
    for v in 0..nv {
        for e in 0..ne {
            if x.get(v, e) {
                cg.add_edge(v, 2 * nv + e);
            }
        }
    }
    for p in 0..nv {
        for e in 0..ne {
            if z.get(p, e) {
                cg.add_edge(nv + p, 2 * nv + e);
            }
        }
    }
    (cg, x, z)
}

fn permutations_match(
    x1: &BitMatrix,
    x2: &BitMatrix,
    row_map: &[usize],
    col_map: &[usize],
    row_offset: usize,
    col_offset: usize,
) -> bool {
    for r in 0..x1.rows() {
        let r2 = row_map[r + row_offset] - row_offset;
        for c in 0..x1.cols() {
            let c2 = col_map[c + col_offset] - col_offset;
            if x1.get(r, c) != x2.get(r2, c2) {
                return false;
            }
        }
    }
    true
}

fn incidence_witness(
    g1: &CayleyGraph,
    g2: &CayleyGraph,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let (a1, x1, z1) = augmented_incidence(g1);
    let (a2, x2, z2) = augmented_incidence(g2);
    let c1 = a1.canonical();
    let c2 = a2.canonical();
    if c1.certificate != c2.certificate {
        return Ok(None);
    }
    let map = witness_map(&c1, &c2);
    let nv = g1.order();
    let ne = g1.num_edges();
    let in_class = map[..nv].iter().all(|&i| i < nv)
        && map[nv..2 * nv].iter().all(|&i| (nv..2 * nv).contains(&i))
        && map[2 * nv..].iter().all(|&i| i >= 2 * nv);
    if !in_class
        || !permutations_match(&x1, &x2, &map, &map, 0, 2 * nv)
        || !permutations_match(&z1, &z2, &map, &map, nv, 2 * nv)
    {
        return Err(Error::Internal(
            "incidence isomorphism witness failed verification".into(),
        ));
    }
    let vertex_map = map[..nv].to_vec();
    let qubit_map: Vec<usize> = map[2 * nv..].iter().map(|&i| i - 2 * nv).collect();
    debug_assert_eq!(qubit_map.len(), ne);
    Ok(Some((vertex_map, qubit_map)))
}

/// Decides equivalence of the codes presented by two Cayley graphs.
///
/// Equal-size graphs are first compared by canonical form. Isomorphic
/// graphs are then searched for an isomorphism of the full vertex/face/edge
/// incidence structure; when one is found and verified against both pairs
/// of check matrices the codes are `Equivalent` and the witness is
/// returned. Non-isomorphic graphs give `Distinct`, certified at the code
/// level only when both graphs are 3-connected. Graphs that are isomorphic
/// as multigraphs but admit no face-respecting isomorphism yield `Unknown`.
///
/// # Errors
///
/// [`Error::TooLarge`] beyond the canonical-form size guard;
/// [`Error::Internal`] if a witness fails verification.
pub fn cgp_equivalent(g1: &CayleyGraph, g2: &CayleyGraph) -> Result<EquivVerdict> {
    if g1.order() != g2.order() || g1.num_edges() != g2.num_edges() {
        let c1 = canonical_form(g1)?;
        let c2 = canonical_form(g2)?;
        return Ok(EquivVerdict::Distinct {
            reason: DistinctReason::NonIsomorphicGraphs,
            whitney_certified: false,
            certificate_digests: [digest_hex(&c1.certificate), digest_hex(&c2.certificate)],
        });
    }
    let c1 = canonical_form(g1)?;
    let c2 = canonical_form(g2)?;
    if c1.certificate != c2.certificate {
        let reason = if group_invariant_distinct(g1.group(), g2.group()) {
            DistinctReason::GroupInvariant
        } else {
            DistinctReason::NonIsomorphicGraphs
        };
        let certified = is_three_connected(g1).unwrap_or(false)
            && is_three_connected(g2).unwrap_or(false);
        return Ok(EquivVerdict::Distinct {
            reason,
            whitney_certified: certified,
            certificate_digests: [digest_hex(&c1.certificate), digest_hex(&c2.certificate)],
        });
    }
    match incidence_witness(g1, g2)? {
        Some((vertex_map, qubit_map)) => Ok(EquivVerdict::Equivalent { vertex_map, qubit_map }),
        None => Ok(EquivVerdict::Unknown {
            detail: "graphs are isomorphic but no isomorphism preserving the face structure \
                     was found"
                .into(),
        }),
    }
}
