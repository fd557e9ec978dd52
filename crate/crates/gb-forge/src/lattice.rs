//! Rank-2 integer lattices attached to two-term codes, the Manhattan-norm
//! invariant that lower-bounds the minimum distance, and the staircase
//! projection that turns short lattice vectors into candidate codewords.
//!
//! For `GB(1 + X, 1 + X^alpha, n)` the attached lattice is
//!
//! ```text
//! L = Z (n, 0) + Z (alpha, -1) = { (x, y) : x + alpha * y = 0 mod n }
//! ```
//!
//! and `lambda(L)`, the smallest Manhattan norm of a nonzero member, bounds
//! the distance from below once `n >= 6`. Codes `GB(1 + X^a, 1 + X^b, n)`
//! with `gcd(a, n) = 1` reduce to that shape with `alpha = b * a^-1 mod n`.

use crate::code::{GbCode, TwoTermSpec};
use crate::f2::BitVec;
use crate::{Error, Result};

/// A point of `Z^2`, ordered by Manhattan norm and then coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

impl LatticeVector {
    pub fn new(x: i64, y: i64) -> LatticeVector {
        LatticeVector { x, y }
    }

    pub fn manhattan(&self) -> usize {
        (self.x.unsigned_abs() + self.y.unsigned_abs()) as usize
    }

    /// Sign-canonical representative of `{v, -v}`: the one with `x > 0`, or
    /// `y > 0` when `x = 0`.
    fn canonical_sign(self) -> LatticeVector {
        if self.x < 0 || (self.x == 0 && self.y < 0) {
            LatticeVector::new(-self.x, -self.y)
        } else {
            self
        }
    }
}

impl PartialOrd for LatticeVector {
    fn partial_cmp(&self, other: &LatticeVector) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LatticeVector {
    fn cmp(&self, other: &LatticeVector) -> std::cmp::Ordering {
        (self.manhattan(), self.x, self.y).cmp(&(other.manhattan(), other.x, other.y))
    }
}

/// A full-rank sublattice of `Z^2`.
///
/// Internally kept in Hermite form `Z (a, 0) + Z (b, d)` with `a, d > 0` and
/// `0 <= b < a`, so membership and norm enumeration are direct. When `d = 1`
/// the lattice is a congruence lattice `{ (x, y) : x + alpha * y = 0 mod n }`
/// and [`Lattice2::congruence_form`] exposes `(alpha, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice2 {
    basis: [LatticeVector; 2],
    a: i64,
    b: i64,
    d: i64,
}

impl Lattice2 {
    /// Builds the lattice spanned by `v1` and `v2`.
    pub fn from_basis(v1: LatticeVector, v2: LatticeVector) -> Result<Lattice2> {
        let det = v1.x * v2.y - v1.y * v2.x;
        if det == 0 {
            return Err(Error::InvalidInput(format!(
                "basis ({}, {}), ({}, {}) is not full rank",
                v1.x, v1.y, v2.x, v2.y
            )));
        }
        let mut rows = [[v1.x, v1.y], [v2.x, v2.y]];
        // Euclidean steps on the y column leave row 0 horizontal.
        while rows[0][1] != 0 {
            if rows[1][1] == 0 {
                rows.swap(0, 1);
                continue;
            }
            let f = rows[0][1] / rows[1][1];
            for k in 0..2 {
                rows[0][k] -= f * rows[1][k];
            }
            if rows[0][1] != 0 {
                rows.swap(0, 1);
            }
        }
        let a = rows[0][0].abs();
        if rows[1][1] < 0 {
            rows[1][0] = -rows[1][0];
            rows[1][1] = -rows[1][1];
        }
        let d = rows[1][1];
        let b = rows[1][0].rem_euclid(a);
        debug_assert_eq!(a * d, det.abs());
        Ok(Lattice2 {
            basis: [v1, v2],
            a,
            b,
            d,
        })
    }

    pub fn basis(&self) -> [LatticeVector; 2] {
        self.basis
    }

    /// Index of the lattice in `Z^2`, equal to `|det|` of any basis.
    pub fn det(&self) -> usize {
        (self.a * self.d) as usize
    }

    /// Returns `(alpha, n)` when the lattice is
    /// `{ (x, y) : x + alpha * y = 0 mod n }`, which happens exactly when the
    /// quotient `Z^2 / L` is cyclic.
    pub fn congruence_form(&self) -> Option<(usize, usize)> {
        if self.d == 1 {
            Some(((-self.b).rem_euclid(self.a) as usize, self.a as usize))
        } else {
            None
        }
    }

    pub fn contains(&self, v: LatticeVector) -> bool {
        v.y % self.d == 0 && (v.x - (v.y / self.d) * self.b) % self.a == 0
    }

    /// Smallest Manhattan norm over nonzero members.
    ///
    /// Walks `y` through multiples of the vertical period; for each `y` only
    /// the two residues of `x` nearest zero can beat the best norm seen, and
    /// once `|y|` alone reaches that norm nothing further can.
    pub fn lambda_min(&self) -> usize {
        let mut best = self.a;
        let mut t: i64 = 1;
        while t * self.d < best {
            let y = t * self.d;
            let r = (t * self.b).rem_euclid(self.a);
            let candidate = if r == 0 { y } else { y + r.min(self.a - r) };
            best = best.min(candidate);
            t += 1;
        }
        best as usize
    }

    /// Every member with Manhattan norm in `1..=bound`, one per `{v, -v}`
    /// pair, sorted by norm and then coordinates.
    pub fn vectors_up_to_norm(&self, bound: usize) -> Vec<LatticeVector> {
        let bound = bound as i64;
        let mut found = std::collections::BTreeSet::new();
        let t_max = bound / self.d;
        for t in -t_max..=t_max {
            let y = t * self.d;
            let limit = bound - y.abs();
            let r = (t * self.b).rem_euclid(self.a);
            let mut x = r;
            while x <= limit {
                if (x, y) != (0, 0) {
                    found.insert(LatticeVector::new(x, y).canonical_sign());
                }
                x += self.a;
            }
            let mut x = r - self.a;
            while x >= -limit {
                if (x, y) != (0, 0) {
                    found.insert(LatticeVector::new(x, y).canonical_sign());
                }
                x -= self.a;
            }
        }
        found.into_iter().collect()
    }
}

/// The congruence lattice `{ (x, y) : x + alpha * y = 0 mod n }`, with basis
/// `(n, 0), (alpha, -1)`.
pub fn lattice_from_alpha(alpha: usize, n: usize) -> Result<Lattice2> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "congruence modulus must be at least 2, got {n}"
        )));
    }
    if alpha >= n {
        return Err(Error::InvalidInput(format!(
            "residue {alpha} out of range mod {n}"
        )));
    }
    Lattice2::from_basis(
        LatticeVector::new(n as i64, 0),
        LatticeVector::new(alpha as i64, -1),
    )
}

pub fn lambda_min(l: &Lattice2) -> usize {
    l.lambda_min()
}

/// All nonzero members of minimum Manhattan norm, one per `{v, -v}` pair.
pub fn shortest_vectors(l: &Lattice2) -> Vec<LatticeVector> {
    let lambda = l.lambda_min();
    l.vectors_up_to_norm(lambda)
        .into_iter()
        .filter(|v| v.manhattan() == lambda)
        .collect()
}

/// Multiplicative inverse of `a` modulo `n`, when gcd(a, n) = 1.
pub fn mod_inverse(a: usize, n: usize) -> Option<usize> {
    let (mut r0, mut r1) = (n as i64, (a % n) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 == 1 {
        Some(s0.rem_euclid(n as i64) as usize)
    } else {
        None
    }
}

/// Reduces the exponent pair of `GB(1 + X^a, 1 + X^b, n)` to the single
/// residue `alpha` with `GB(1 + X, 1 + X^alpha, n)` equivalent to it:
/// `alpha = b * a^-1 mod n` when `gcd(a, n) = 1`, the swapped reduction
/// `a * b^-1` when only `b` is invertible, and `None` when neither is.
pub fn reduce_unit_form(a: usize, b: usize, n: usize) -> Option<usize> {
    if a == 0 || b == 0 || a >= n || b >= n {
        return None;
    }
    if let Some(inv) = mod_inverse(a, n) {
        return Some(b * inv % n);
    }
    mod_inverse(b, n).map(|inv| a * inv % n)
}

/// Manhattan-norm lower bound on the minimum distance: `lambda(L)` for the
/// lattice of the unit-form reduction.
///
/// Returns `None` outside the regime where the bound holds: both polynomials
/// must have exactly two terms, `n` must be at least 6, and at least one
/// exponent step must be coprime with `n`.
pub fn theorem1_bound(code: &GbCode) -> Option<usize> {
    let n = code.n();
    if n < 6 {
        return None;
    }
    let a = TwoTermSpec::of(code.a_poly())?.step(n);
    let b = TwoTermSpec::of(code.b_poly())?.step(n);
    let alpha = reduce_unit_form(a, b, n)?;
    let lattice = lattice_from_alpha(alpha, n).expect("alpha reduced mod n");
    Some(lattice.lambda_min())
}

/// Projects the axis-aligned staircase path `(0,0) -> (x,0) -> (x,y)` onto
/// the cyclic Cayley graph of `GB(1 + X, 1 + X^alpha, n)` and returns the
/// traversed edge set mod 2 as a length-`2n` vector.
///
/// The endpoint lands back on vertex 0 exactly when `p` is in the code's
/// lattice, so the result is always in `ker H_X`; it may still be a sum of
/// faces, which the caller must check.
pub fn staircase_codeword(p: LatticeVector, code: &GbCode) -> Result<BitVec> {
    let n = code.n();
    let a = TwoTermSpec::of(code.a_poly())
        .filter(|t| t.i == 0 && t.j == 1)
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "staircase projection needs A = 1 + X, got {}",
                code.a_poly()
            ))
        })?;
    let b = TwoTermSpec::of(code.b_poly())
        .filter(|t| t.i == 0)
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "staircase projection needs B = 1 + X^alpha, got {}",
                code.b_poly()
            ))
        })?;
    debug_assert_eq!(a.step(n), 1 % n);
    let alpha = b.step(n);
    let in_lattice = (p.x + alpha as i64 * p.y).rem_euclid(n as i64) == 0;
    if !in_lattice {
        return Err(Error::InvalidInput(format!(
            "({}, {}) is not in the lattice of alpha = {alpha} mod {n}",
            p.x, p.y
        )));
    }

    let mut c = BitVec::zeros(2 * n);
    let mut v = 0usize;
    for _ in 0..p.x.unsigned_abs() {
        if p.x > 0 {
            c.flip(v);
            v = (v + 1) % n;
        } else {
            v = (v + n - 1) % n;
            c.flip(v);
        }
    }
    for _ in 0..p.y.unsigned_abs() {
        if p.y > 0 {
            c.flip(n + v);
            v = (v + alpha) % n;
        } else {
            v = (v + n - alpha) % n;
            c.flip(n + v);
        }
    }
    debug_assert_eq!(v, 0);
    debug_assert!(code.hx().mul_vec(&c).is_zero());
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::gb_build;
    use crate::f2::Poly;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn box_lambda(alpha: usize, n: usize) -> usize {
        let m = n as i64;
        let mut best = usize::MAX;
        for x in -m..=m {
            for y in -m..=m {
                if (x, y) != (0, 0) && (x + alpha as i64 * y).rem_euclid(m) == 0 {
                    best = best.min((x.unsigned_abs() + y.unsigned_abs()) as usize);
                }
            }
        }
        best
    }

    fn box_members(alpha: usize, n: usize, bound: usize) -> Vec<LatticeVector> {
        let m = bound as i64;
        let mut out = std::collections::BTreeSet::new();
        for x in -m..=m {
            for y in -m..=m {
                let member = (x + alpha as i64 * y).rem_euclid(n as i64) == 0;
                if (x, y) != (0, 0) && x.abs() + y.abs() <= m && member {
                    out.insert(LatticeVector::new(x, y).canonical_sign());
                }
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn congruence_lattice_contains_its_defining_vectors() {
        let l = lattice_from_alpha(3, 9).unwrap();
        assert!(l.contains(LatticeVector::new(0, 3)));
        assert!(l.contains(LatticeVector::new(3, -1)));
        assert!(l.contains(LatticeVector::new(9, 0)));
        assert!(!l.contains(LatticeVector::new(1, 0)));
        assert!(!l.contains(LatticeVector::new(3, 1)));
        assert_eq!(l.congruence_form(), Some((3, 9)));
        assert_eq!(l.det(), 9);
    }

    #[test]
    fn membership_matches_integer_combinations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let v1 = LatticeVector::new(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
            let v2 = LatticeVector::new(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
            let det = v1.x * v2.y - v1.y * v2.x;
            if det == 0 {
                assert!(Lattice2::from_basis(v1, v2).is_err());
                continue;
            }
            let l = Lattice2::from_basis(v1, v2).unwrap();
            for _ in 0..50 {
                let p = LatticeVector::new(rng.gen_range(-20..=20), rng.gen_range(-20..=20));
                // Cramer's rule: p = s v1 + t v2 has an integer solution
                // exactly when det divides both numerators.
                let s_num = p.x * v2.y - p.y * v2.x;
                let t_num = v1.x * p.y - v1.y * p.x;
                let solvable = s_num % det == 0 && t_num % det == 0;
                assert_eq!(l.contains(p), solvable, "p = {p:?} in {l:?}");
            }
        }
    }

    #[test]
    fn degenerate_bases_are_rejected() {
        let err = Lattice2::from_basis(LatticeVector::new(2, 4), LatticeVector::new(1, 2));
        assert!(err.is_err());
        assert!(lattice_from_alpha(9, 9).is_err());
        assert!(lattice_from_alpha(0, 1).is_err());
    }

    #[test]
    fn congruence_form_requires_cyclic_quotient() {
        let square = Lattice2::from_basis(LatticeVector::new(2, 0), LatticeVector::new(0, 2));
        assert_eq!(square.unwrap().congruence_form(), None);
        let l = Lattice2::from_basis(LatticeVector::new(9, 0), LatticeVector::new(3, -1));
        assert_eq!(l.unwrap().congruence_form(), Some((3, 9)));
    }

    #[test]
    fn lambda_known_values() {
        assert_eq!(lattice_from_alpha(3, 9).unwrap().lambda_min(), 3);
        assert_eq!(lattice_from_alpha(3, 8).unwrap().lambda_min(), 4);
        assert_eq!(lattice_from_alpha(5, 25).unwrap().lambda_min(), 5);
        assert_eq!(lattice_from_alpha(0, 7).unwrap().lambda_min(), 1);
        for n in 3..12 {
            assert_eq!(lattice_from_alpha(1, n).unwrap().lambda_min(), 2);
        }
    }

    #[test]
    fn lambda_agrees_with_box_enumeration() {
        for n in 2..=50 {
            for alpha in 0..n {
                let l = lattice_from_alpha(alpha, n).unwrap();
                assert_eq!(
                    l.lambda_min(),
                    box_lambda(alpha, n),
                    "alpha = {alpha}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn lambda_is_invariant_under_negation_and_inversion() {
        for n in 2usize..=40 {
            for alpha in 1..n {
                let lam = lattice_from_alpha(alpha, n).unwrap().lambda_min();
                let negated = lattice_from_alpha(n - alpha, n).unwrap().lambda_min();
                assert_eq!(lam, negated, "alpha = {alpha}, n = {n}");
                if let Some(inv) = mod_inverse(alpha, n) {
                    let inverted = lattice_from_alpha(inv, n).unwrap().lambda_min();
                    assert_eq!(lam, inverted, "alpha = {alpha}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn shortest_vectors_known_values() {
        let l = lattice_from_alpha(3, 9).unwrap();
        assert_eq!(shortest_vectors(&l), vec![LatticeVector::new(0, 3)]);
        let l = lattice_from_alpha(1, 3).unwrap();
        assert_eq!(shortest_vectors(&l), vec![LatticeVector::new(1, -1)]);
        let l = lattice_from_alpha(0, 5).unwrap();
        assert_eq!(shortest_vectors(&l), vec![LatticeVector::new(0, 1)]);
    }

    #[test]
    fn norm_enumeration_matches_box_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..120 {
            let n = rng.gen_range(2..40);
            let alpha = rng.gen_range(0..n);
            let bound = rng.gen_range(1..=n + 2);
            let l = lattice_from_alpha(alpha, n).unwrap();
            assert_eq!(
                l.vectors_up_to_norm(bound),
                box_members(alpha, n, bound),
                "alpha = {alpha}, n = {n}, bound = {bound}"
            );
        }
    }

    #[test]
    fn shortest_vectors_all_reach_the_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..80 {
            let n = rng.gen_range(2..60);
            let alpha = rng.gen_range(0..n);
            let l = lattice_from_alpha(alpha, n).unwrap();
            let lam = l.lambda_min();
            let shortest = shortest_vectors(&l);
            assert!(!shortest.is_empty());
            for v in &shortest {
                assert_eq!(v.manhattan(), lam);
                assert!(l.contains(*v));
            }
        }
    }

    #[test]
    fn unit_form_reduction_examples() {
        assert_eq!(reduce_unit_form(2, 6, 9), Some(3));
        assert_eq!(reduce_unit_form(3, 5, 9), Some(6));
        for n in 2..20 {
            for b in 1..n {
                assert_eq!(reduce_unit_form(1, b, n), Some(b));
            }
        }
        assert_eq!(reduce_unit_form(2, 4, 8), None);
        assert_eq!(reduce_unit_form(0, 3, 9), None);
        assert_eq!(reduce_unit_form(3, 0, 9), None);
    }

    #[test]
    fn unit_form_reduction_solves_the_congruence() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..500 {
            let n = rng.gen_range(2usize..80);
            let a = rng.gen_range(1..n);
            let b = rng.gen_range(1..n);
            match reduce_unit_form(a, b, n) {
                Some(alpha) => {
                    assert!(alpha < n);
                    // One of the two congruences must hold, depending on
                    // which exponent was inverted.
                    let forward = (alpha * a) % n == b % n;
                    let swapped = (alpha * b) % n == a % n;
                    assert!(forward || swapped, "a={a} b={b} n={n} alpha={alpha}");
                }
                None => {
                    assert!(gcd(a, n) > 1 && gcd(b, n) > 1, "a={a} b={b} n={n}");
                }
            }
        }
    }

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn distance_bound_known_values() {
        let code = |a: &[usize], b: &[usize], n| {
            gb_build(&Poly::from_exponents(a), &Poly::from_exponents(b), n).unwrap()
        };
        assert_eq!(theorem1_bound(&code(&[0, 1], &[0, 3], 9)), Some(3));
        assert_eq!(theorem1_bound(&code(&[0, 1], &[0, 3], 8)), Some(4));
        assert_eq!(theorem1_bound(&code(&[0, 2], &[0, 6], 9)), Some(3));
    }

    #[test]
    fn distance_bound_abstains_outside_its_regime() {
        let code = |a: &[usize], b: &[usize], n| {
            gb_build(&Poly::from_exponents(a), &Poly::from_exponents(b), n).unwrap()
        };
        assert_eq!(theorem1_bound(&code(&[0, 1], &[0, 2], 5)), None);
        assert_eq!(theorem1_bound(&code(&[0, 2], &[0, 4], 8)), None);
        assert_eq!(theorem1_bound(&code(&[0, 1, 2], &[0, 3], 9)), None);
    }

    #[test]
    fn distance_bound_is_shift_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..100 {
            let n = rng.gen_range(6usize..40);
            let a = rng.gen_range(1..n);
            let b = rng.gen_range(1..n);
            let (ia, ib) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let plain = gb_build(
                &Poly::from_exponents(&[0, a]),
                &Poly::from_exponents(&[0, b]),
                n,
            )
            .unwrap();
            let shifted = gb_build(
                &Poly::from_exponents(&[0, a]).shift_cyclic(ia, n),
                &Poly::from_exponents(&[0, b]).shift_cyclic(ib, n),
                n,
            )
            .unwrap();
            assert_eq!(theorem1_bound(&plain), theorem1_bound(&shifted));
        }
    }

    #[test]
    fn staircase_reproduces_the_vertical_logical_operator() {
        let code = gb_build(
            &Poly::from_exponents(&[0, 1]),
            &Poly::from_exponents(&[0, 3]),
            9,
        )
        .unwrap();
        let c = staircase_codeword(LatticeVector::new(0, 3), &code).unwrap();
        assert_eq!(c.support(), vec![9, 12, 15]);
    }

    #[test]
    fn staircase_wraps_on_the_two_vertex_graph() {
        let code = gb_build(
            &Poly::from_exponents(&[0, 1]),
            &Poly::from_exponents(&[0, 1]),
            2,
        )
        .unwrap();
        let c = staircase_codeword(LatticeVector::new(2, 0), &code).unwrap();
        assert_eq!(c.support(), vec![0, 1]);
    }

    #[test]
    fn staircase_of_the_origin_is_zero() {
        let code = gb_build(
            &Poly::from_exponents(&[0, 1]),
            &Poly::from_exponents(&[0, 3]),
            9,
        )
        .unwrap();
        let c = staircase_codeword(LatticeVector::new(0, 0), &code).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn staircase_rejects_bad_inputs() {
        let code = gb_build(
            &Poly::from_exponents(&[0, 1]),
            &Poly::from_exponents(&[0, 3]),
            9,
        )
        .unwrap();
        assert!(staircase_codeword(LatticeVector::new(1, 0), &code).is_err());
        let shifted = gb_build(
            &Poly::from_exponents(&[1, 2]),
            &Poly::from_exponents(&[0, 3]),
            9,
        )
        .unwrap();
        assert!(staircase_codeword(LatticeVector::new(0, 3), &shifted).is_err());
    }

    #[test]
    fn staircase_outputs_satisfy_the_x_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..150 {
            let n = rng.gen_range(2usize..30);
            let alpha = rng.gen_range(1..n);
            let code = gb_build(
                &Poly::from_exponents(&[0, 1]),
                &Poly::from_exponents(&[0, alpha]),
                n,
            )
            .unwrap();
            let l = lattice_from_alpha(alpha, n).unwrap();
            for p in l.vectors_up_to_norm(l.lambda_min() + 3) {
                let c = staircase_codeword(p, &code).unwrap();
                assert!(code.hx().mul_vec(&c).is_zero(), "p = {p:?}, n = {n}");
                let flipped = LatticeVector::new(-p.x, -p.y);
                let c2 = staircase_codeword(flipped, &code).unwrap();
                assert!(code.hx().mul_vec(&c2).is_zero());
            }
        }
    }
}
