//! Construction of the CSS codes themselves, membership tests for codeword
//! pairs, an exhaustive distance oracle for small instances, and the named
//! infinite families.
//!
//! A code is written `GB(A, B, n)` with `A, B` in `F2[X]/(X^n - 1)` and
//!
//! ```text
//! H_X = [ Circ(A) | Circ(B) ]      H_Z = [ Circ(B)^T | Circ(A)^T ]
//! ```
//!
//! A length-`2n` vector `c = (U | V)` (written as two polynomials) satisfies
//! `H_X c = 0` iff `A U + B V = 0`, and lies in the rowspace of `H_Z` iff
//! `U = B H` and `V = A H` for a single polynomial `H`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::f2::{
    circulant, kernel_basis, poly_gcd, poly_mul_mod, row_echelon, BitMatrix, BitVec, Poly,
    RowBasis,
};
use crate::{Error, Result};

/// Largest kernel dimension [`oracle_distance`] will enumerate (2^20 vectors).
pub const ORACLE_KERNEL_LIMIT: usize = 20;

/// A two-block circulant CSS code.
///
/// Both parity-check matrices and the row-echelon basis of `H_Z` are built
/// eagerly; the orthogonality `H_X H_Z^T = 0` is checked at construction.
#[derive(Clone)]
pub struct GbCode {
    n: usize,
    a: Poly,
    b: Poly,
    hx: BitMatrix,
    hz: BitMatrix,
    hz_basis: RowBasis,
}

impl GbCode {
    /// Circulant size `n`; the block length is `2n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_length(&self) -> usize {
        2 * self.n
    }

    /// First defining polynomial, reduced mod `X^n - 1`.
    pub fn a_poly(&self) -> &Poly {
        &self.a
    }

    /// Second defining polynomial, reduced mod `X^n - 1`.
    pub fn b_poly(&self) -> &Poly {
        &self.b
    }

    /// X-type parity checks `[Circ(A) | Circ(B)]`, `n` rows by `2n` columns.
    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    /// Z-type parity checks `[Circ(B)^T | Circ(A)^T]`.
    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    /// Cached echelon basis of the rowspace of `H_Z`.
    pub fn hz_basis(&self) -> &RowBasis {
        &self.hz_basis
    }

    /// The code whose X side plays this code's Z role: `GB(B*, A*, n)` with
    /// `*` the reciprocal `X -> X^(-1)`. Its X-distance equals this code's
    /// Z-distance because its `H_X` has the same rows as this `H_Z` and vice
    /// versa, transposed block by block.
    pub fn z_dual(&self) -> GbCode {
        gb_build(&self.b.reciprocal(self.n), &self.a.reciprocal(self.n), self.n)
            .expect("dual of a valid code is valid")
    }
}

impl PartialEq for GbCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.a == other.a && self.b == other.b
    }
}

impl Eq for GbCode {}

impl fmt::Debug for GbCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GbCode({self})")
    }
}

/// Block length, dimension, and (possibly unresolved) distance of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    /// Number of physical qubits `N = 2n`.
    #[serde(rename = "N")]
    pub block_length: usize,
    /// Number of logical qubits `k`.
    #[serde(rename = "k")]
    pub dimension: usize,
    /// Minimum distance, when claimed or established.
    #[serde(rename = "d", skip_serializing_if = "Option::is_none")]
    pub distance: Option<usize>,
    /// How much trust to put in `distance`.
    #[serde(rename = "status")]
    pub distance_status: DistanceStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceStatus {
    /// `distance` was certified by a search or an exhaustive oracle.
    Exact,
    /// Only the enclosed `(lower, upper)` window is certified.
    LowerUpper(usize, usize),
    /// `distance`, if present, is a claim that has not been checked.
    Unknown,
}

impl CodeParams {
    pub fn triple_string(&self) -> String {
        match self.distance {
            Some(d) => format!("[[{}, {}, {}]]", self.block_length, self.dimension, d),
            None => format!("[[{}, {}, ?]]", self.block_length, self.dimension),
        }
    }
}

/// A binomial `X^i + X^j` with `i < j`, the shape the graph machinery needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoTermSpec {
    pub i: usize,
    pub j: usize,
}

impl TwoTermSpec {
    /// Reads off the exponents when `p` has exactly two terms.
    pub fn of(p: &Poly) -> Option<TwoTermSpec> {
        match p.exponents().as_slice() {
            &[i, j] => Some(TwoTermSpec { i, j }),
            _ => None,
        }
    }

    pub fn poly(&self) -> Poly {
        Poly::from_exponents(&[self.i, self.j])
    }

    /// Exponent difference `j - i` reduced mod `n`, the generator the
    /// corresponding Cayley graph actually uses.
    pub fn step(&self, n: usize) -> usize {
        (self.j - self.i) % n
    }
}

/// Builds `GB(A, B, n)`, reducing both polynomials mod `X^n - 1`.
///
/// ```
/// use gb_forge::code::gb_build;
/// use gb_forge::f2::Poly;
/// let code = gb_build(
///     &Poly::from_exponents(&[0, 1]),
///     &Poly::from_exponents(&[0, 3]),
///     9,
/// )
/// .unwrap();
/// assert_eq!(code.block_length(), 18);
/// ```
///
/// # Errors
///
/// [`Error::InvalidInput`] when `n == 0` or both polynomials vanish after
/// reduction; [`Error::Internal`] if the constructed pair fails the CSS
/// orthogonality check (which would be a bug).
pub fn gb_build(a: &Poly, b: &Poly, n: usize) -> Result<GbCode> {
    if n == 0 {
        return Err(Error::InvalidInput("circulant size n must be positive".into()));
    }
    let a = a.reduce_cyclic(n);
    let b = b.reduce_cyclic(n);
    if a.is_zero() && b.is_zero() {
        return Err(Error::InvalidInput("A and B cannot both be zero".into()));
    }
    let ca = circulant(&a, n)?;
    let cb = circulant(&b, n)?;
    let hx = BitMatrix::hconcat(&ca, &cb);
    let hz = BitMatrix::hconcat(&cb.transpose(), &ca.transpose());
    if !hx.mul_transpose(&hz).is_zero() {
        return Err(Error::Internal(format!(
            "H_X H_Z^T != 0 for GB({a}, {b}, {n})"
        )));
    }
    let hz_basis = row_echelon(&hz);
    Ok(GbCode { n, a, b, hx, hz, hz_basis })
}

/// Number of logical qubits, `2n - rank(H_X) - rank(H_Z)`.
///
/// For these codes this always equals twice the degree of
/// `gcd(A, B, X^n - 1)`.
pub fn gb_dimension(code: &GbCode) -> usize {
    2 * code.n - code.hx.rank() - code.hz_basis.rank()
}

/// Whether the pair `(U, V)` satisfies the X checks, i.e. `A U + B V = 0`
/// in `F2[X]/(X^n - 1)`. Inputs are reduced mod `X^n - 1` first.
pub fn pair_in_kernel(u: &Poly, v: &Poly, code: &GbCode) -> bool {
    let n = code.n;
    let au = poly_mul_mod(&code.a, u, n).expect("n > 0");
    let bv = poly_mul_mod(&code.b, v, n).expect("n > 0");
    (&au + &bv).is_zero()
}

/// Whether `(U, V)` is a Z-stabilizer combination, i.e. `U = B H` and
/// `V = A H` for some `H`. Inputs are reduced mod `X^n - 1` first.
pub fn pair_in_rowspace(u: &Poly, v: &Poly, code: &GbCode) -> bool {
    let n = code.n;
    let c = u
        .reduce_cyclic(n)
        .coeff_vec(n)
        .concat(&v.reduce_cyclic(n).coeff_vec(n));
    code.hz_basis.contains(&c)
}

/// Outcome of the exhaustive oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    /// Exact minimum distance.
    Distance(usize),
    /// The code has `k = 0`: every X-kernel vector is a Z-stabilizer.
    NoLogicalOperators,
}

/// Exact `d_X` by enumerating the whole kernel of `H_X` in Gray-code order
/// and taking the minimum weight over vectors outside the rowspace of `H_Z`.
///
/// This is the independent reference the cycle-search engine is checked
/// against; it never looks at graphs or lattices.
///
/// # Errors
///
/// [`Error::TooLarge`] when the kernel dimension exceeds
/// [`ORACLE_KERNEL_LIMIT`]; use the distance engine for such codes.
pub fn oracle_distance(code: &GbCode) -> Result<OracleOutcome> {
    let kernel = kernel_basis(code.hx());
    if kernel.len() > ORACLE_KERNEL_LIMIT {
        return Err(Error::TooLarge(format!(
            "kernel dimension {} exceeds the enumeration guard {}",
            kernel.len(),
            ORACLE_KERNEL_LIMIT
        )));
    }
    if gb_dimension(code) == 0 {
        return Ok(OracleOutcome::NoLogicalOperators);
    }
    let mut current = BitVec::zeros(code.block_length());
    let mut best: Option<usize> = None;
    for counter in 1u64..1u64 << kernel.len() {
        current.xor_assign(&kernel[counter.trailing_zeros() as usize]);
        let w = current.weight();
        if best.is_none_or(|b| w < b) && !code.hz_basis.contains(&current) {
            best = Some(w);
        }
    }
    Ok(OracleOutcome::Distance(
        best.expect("k > 0 guarantees a kernel vector outside rs(H_Z)"),
    ))
}

fn family(a: &[usize], b: &[usize], n: usize, d: usize) -> Result<(GbCode, CodeParams)> {
    let code = gb_build(&Poly::from_exponents(a), &Poly::from_exponents(b), n)?;
    let dimension = gb_dimension(&code);
    let params = CodeParams {
        block_length: code.block_length(),
        dimension,
        distance: Some(d),
        distance_status: DistanceStatus::Unknown,
    };
    Ok((code, params))
}

/// `GB(1 + X, 1 + X^n, n^2)` with claimed parameters `[[2n^2, 2, n]]`.
///
/// # Errors
///
/// [`Error::InvalidInput`] when `n < 2`.
pub fn fam_square(n: usize) -> Result<(GbCode, CodeParams)> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("square family needs n >= 2, got {n}")));
    }
    family(&[0, 1], &[0, n], n * n, n)
}

/// `GB(1 + X, 1 + X^(2r-1), 2r^2)` with claimed parameters `[[4r^2, 2, 2r]]`.
///
/// # Errors
///
/// [`Error::InvalidInput`] when `r < 1`.
pub fn fam_even(r: usize) -> Result<(GbCode, CodeParams)> {
    if r < 1 {
        return Err(Error::InvalidInput("even family needs r >= 1".into()));
    }
    family(&[0, 1], &[0, 2 * r - 1], 2 * r * r, 2 * r)
}

/// `GB(1 + X, 1 + X^(2t+1), t^2 + (t+1)^2)` with claimed parameters
/// `[[2(t^2 + (t+1)^2), 2, 2t + 1]]`.
///
/// # Errors
///
/// [`Error::InvalidInput`] when `t < 1`.
pub fn fam_odd(t: usize) -> Result<(GbCode, CodeParams)> {
    if t < 1 {
        return Err(Error::InvalidInput("odd family needs t >= 1".into()));
    }
    family(&[0, 1], &[0, 2 * t + 1], t * t + (t + 1) * (t + 1), 2 * t + 1)
}

/// The Kovalev-Pryadko presentation of the odd-distance family,
/// `GB(1 + X^(2t^2+1), X + X^(2t^2), t^2 + (t+1)^2)`, with claimed
/// parameters `[[(2t+1)^2 + 1, 2, 2t + 1]]`.
///
/// # Errors
///
/// [`Error::InvalidInput`] when `t < 2`.
pub fn fam_kp(t: usize) -> Result<(GbCode, CodeParams)> {
    if t < 2 {
        return Err(Error::InvalidInput(format!("this family needs t >= 2, got {t}")));
    }
    let n = t * t + (t + 1) * (t + 1);
    family(&[0, 2 * t * t + 1], &[1, 2 * t * t], n, 2 * t + 1)
}

fn parse_exponent_list(part: &str, n: usize) -> Result<Vec<usize>> {
    let part = part.trim();
    if part.is_empty() {
        return Ok(Vec::new());
    }
    let mut exps = Vec::new();
    for tok in part.split(',') {
        let e: usize = tok
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad exponent {tok:?}")))?;
        if e >= n {
            return Err(Error::InvalidInput(format!(
                "exponent {e} is not below the circulant size {n}"
            )));
        }
        if exps.last().is_some_and(|&last| last >= e) {
            return Err(Error::InvalidInput(
                "exponent list must be strictly increasing".into(),
            ));
        }
        exps.push(e);
    }
    Ok(exps)
}

/// Parses the literal form `GB(0,1;0,3;9)`: two strictly increasing
/// exponent lists and the circulant size, semicolon-separated.
///
/// ```
/// use gb_forge::code::parse_code_literal;
/// let code = parse_code_literal("GB(0,1;0,3;9)").unwrap();
/// assert_eq!(code.to_string(), "GB(0,1;0,3;9)");
/// ```
///
/// # Errors
///
/// [`Error::InvalidInput`] on any malformed literal.
pub fn parse_code_literal(s: &str) -> Result<GbCode> {
    let body = s
        .trim()
        .strip_prefix("GB(")
        .and_then(|rest| rest.strip_suffix(')'))
        .ok_or_else(|| {
            Error::InvalidInput(format!("expected GB(a_exps;b_exps;n), got {s:?}"))
        })?;
    let parts: Vec<&str> = body.split(';').collect();
    let [a_part, b_part, n_part] = parts.as_slice() else {
        return Err(Error::InvalidInput(
            "expected three semicolon-separated fields".into(),
        ));
    };
    let n: usize = n_part
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad circulant size {n_part:?}")))?;
    if n == 0 {
        return Err(Error::InvalidInput("circulant size must be positive".into()));
    }
    let a = Poly::from_exponents(&parse_exponent_list(a_part, n)?);
    let b = Poly::from_exponents(&parse_exponent_list(b_part, n)?);
    gb_build(&a, &b, n)
}

fn exponent_list(p: &Poly) -> String {
    p.exponents()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for GbCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GB({};{};{})",
            exponent_list(&self.a),
            exponent_list(&self.b),
            self.n
        )
    }
}

impl FromStr for GbCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<GbCode> {
        parse_code_literal(s)
    }
}

/// Twice the degree of `gcd(A, B, X^n - 1)`, the closed form for `k`.
pub fn dimension_from_gcd(code: &GbCode) -> usize {
    let mut xn1 = Poly::monomial(code.n);
    xn1 += &Poly::one();
    let g = poly_gcd(&poly_gcd(&code.a, &code.b), &xn1);
    2 * g.degree().unwrap_or(0)
}
