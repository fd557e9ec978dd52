//! Bit-packed linear algebra over F2.
//!
//! Everything in the crate reduces to arithmetic in `F2[X]/(X^n - 1)` and to
//! rank/kernel/membership questions about the parity-check matrices built
//! from it. Polynomials and matrix rows are stored as little-endian `u64`
//! words; matrix storage is one contiguous buffer with a fixed row stride so
//! row operations stay word-wise.

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Polynomial over F2 with arbitrary degree, one bit per coefficient.
///
/// The zero polynomial has no degree; every other polynomial keeps its word
/// vector trimmed so equality and hashing are structural.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    words: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::monomial(0)
    }

    /// The polynomial `X`.
    pub fn x() -> Self {
        Poly::monomial(1)
    }

    /// The monomial `X^e`.
    pub fn monomial(e: usize) -> Self {
        let mut p = Poly::zero();
        p.set_coeff(e, true);
        p
    }

    /// Sum of `X^e` over the given exponents. Repeated exponents cancel.
    ///
    /// ```
    /// use gb_forge::f2::Poly;
    /// let p = Poly::from_exponents(&[0, 3]);
    /// assert_eq!(p.to_string(), "1 + X^3");
    /// assert!(Poly::from_exponents(&[2, 2]).is_zero());
    /// ```
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Poly::zero();
        for &e in exps {
            p.set_coeff(e, p.coeff(e) ^ true);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = self.words.last()?;
        Some((self.words.len() - 1) * WORD_BITS + (63 - last.leading_zeros() as usize))
    }

    pub fn coeff(&self, e: usize) -> bool {
        self.words
            .get(e / WORD_BITS)
            .is_some_and(|w| w >> (e % WORD_BITS) & 1 == 1)
    }

    pub fn set_coeff(&mut self, e: usize, value: bool) {
        let (w, b) = (e / WORD_BITS, e % WORD_BITS);
        if value {
            if self.words.len() <= w {
                self.words.resize(w + 1, 0);
            }
            self.words[w] |= 1 << b;
        } else if let Some(word) = self.words.get_mut(w) {
            *word &= !(1 << b);
            self.trim();
        }
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (i, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i * WORD_BITS + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    /// Carryless product in `F2[X]` (no modular reduction).
    pub fn mul(&self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        out.words = vec![0; self.words.len() + rhs.words.len()];
        for e in self.exponents() {
            let (shift_w, shift_b) = (e / WORD_BITS, e % WORD_BITS);
            let mut carry = 0u64;
            for (k, &w) in rhs.words.iter().enumerate() {
                let lo = if shift_b == 0 { w } else { w << shift_b };
                out.words[shift_w + k] ^= lo | carry;
                carry = if shift_b == 0 { 0 } else { w >> (64 - shift_b) };
            }
            if carry != 0 {
                out.words[shift_w + rhs.words.len()] ^= carry;
            }
        }
        out.trim();
        out
    }

    /// Quotient and remainder of division by `divisor`.
    ///
    /// # Panics
    ///
    /// Panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some(r) = rem.degree() {
            if r < d {
                break;
            }
            let shift = r - d;
            quot.set_coeff(shift, true);
            let mut sub = divisor.clone();
            sub.shl_assign(shift);
            rem += &sub;
        }
        (quot, rem)
    }

    /// Reduction modulo `X^n - 1`: every exponent is folded to `e mod n`.
    pub fn reduce_cyclic(&self, n: usize) -> Poly {
        assert!(n > 0, "cyclic reduction needs a positive modulus");
        let mut out = Poly::zero();
        for e in self.exponents() {
            let e = e % n;
            out.set_coeff(e, out.coeff(e) ^ true);
        }
        out
    }

    /// The reciprocal `p(X^-1) mod X^n - 1`, i.e. coefficient `e` moves to
    /// `(n - e) mod n`. `Circ(p)` transposed equals `Circ(p.reciprocal(n))`.
    pub fn reciprocal(&self, n: usize) -> Poly {
        let mut out = Poly::zero();
        for e in self.reduce_cyclic(n).exponents() {
            out.set_coeff((n - e) % n, true);
        }
        out
    }

    /// Product with `X^k` modulo `X^n - 1`.
    pub fn shift_cyclic(&self, k: usize, n: usize) -> Poly {
        let mut out = Poly::zero();
        for e in self.reduce_cyclic(n).exponents() {
            out.set_coeff((e + k) % n, true);
        }
        out
    }

    /// Coefficient vector of length `n`; the polynomial must already be
    /// reduced (degree below `n`).
    pub fn coeff_vec(&self, n: usize) -> BitVec {
        assert!(self.degree().map_or(true, |d| d < n), "polynomial not reduced");
        let mut v = BitVec::zeros(n);
        for e in self.exponents() {
            v.set(e, true);
        }
        v
    }

    pub fn from_coeff_vec(v: &BitVec) -> Poly {
        Poly::from_exponents(&v.support())
    }

    fn shl_assign(&mut self, bits: usize) {
        if self.is_zero() || bits == 0 {
            return;
        }
        let (shift_w, shift_b) = (bits / WORD_BITS, bits % WORD_BITS);
        let mut words = vec![0u64; self.words.len() + shift_w + 1];
        for (k, &w) in self.words.iter().enumerate() {
            if shift_b == 0 {
                words[k + shift_w] = w;
            } else {
                words[k + shift_w] |= w << shift_b;
                words[k + shift_w + 1] |= w >> (64 - shift_b);
            }
        }
        self.words = words;
        self.trim();
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        if self.words.len() < rhs.words.len() {
            self.words.resize(rhs.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
        self.trim();
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .exponents()
            .iter()
            .map(|&e| match e {
                0 => "1".to_string(),
                1 => "X".to_string(),
                _ => format!("X^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Product in `F2[X]/(X^n - 1)`.
///
/// Inputs need not be reduced beforehand.
///
/// # Errors
///
/// Returns [`Error::InvalidInput`] when `n == 0`.
pub fn poly_mul_mod(u: &Poly, v: &Poly, n: usize) -> Result<Poly> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus n must be positive".into()));
    }
    Ok(u.mul(v).reduce_cyclic(n))
}

/// Greatest common divisor by the Euclidean algorithm.
///
/// `poly_gcd(0, 0)` is the zero polynomial; otherwise the result is the
/// unique monic generator of the ideal `(u, v)`.
pub fn poly_gcd(u: &Poly, v: &Poly) -> Poly {
    let (mut a, mut b) = (u.clone(), v.clone());
    while !b.is_zero() {
        let (_, r) = a.divrem(&b);
        a = b;
        b = r;
    }
    a
}

/// Dense bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; words_for(len)] }
    }

    /// Vector with ones exactly at `support`.
    ///
    /// # Panics
    ///
    /// Panics if any index is out of range.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let (w, b) = (i / WORD_BITS, i % WORD_BITS);
        if value {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
    }

    pub fn xor_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.len, rhs.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the overlap with `rhs`.
    pub fn dot(&self, rhs: &BitVec) -> bool {
        assert_eq!(self.len, rhs.len, "length mismatch");
        self.words
            .iter()
            .zip(&rhs.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Indices of the ones, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (i, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i * WORD_BITS + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    /// `[self | rhs]` as one vector.
    pub fn concat(&self, rhs: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + rhs.len);
        for i in self.support() {
            out.set(i, true);
        }
        for i in rhs.support() {
            out.set(self.len + i, true);
        }
        out
    }

    /// The sub-vector `[lo, hi)`.
    pub fn slice(&self, lo: usize, hi: usize) -> BitVec {
        assert!(lo <= hi && hi <= self.len);
        let mut out = BitVec::zeros(hi - lo);
        for i in lo..hi {
            if self.get(i) {
                out.set(i - lo, true);
            }
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(len={}, support={:?})", self.len, self.support())
    }
}

/// Dense matrix over F2, row-major with a word-aligned stride.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols).max(1);
        BitMatrix { rows, cols, stride, words: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            for j in r.support() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        self.words[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        let idx = i * self.stride + j / WORD_BITS;
        if value {
            self.words[idx] |= 1 << (j % WORD_BITS);
        } else {
            self.words[idx] &= !(1 << (j % WORD_BITS));
        }
    }

    pub fn row(&self, i: usize) -> BitVec {
        assert!(i < self.rows);
        let words = self.words[i * self.stride..i * self.stride + words_for(self.cols)].to_vec();
        BitVec { len: self.cols, words }
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        let (dst_off, src_off) = (dst * self.stride, src * self.stride);
        for k in 0..self.stride {
            let w = self.words[src_off + k];
            self.words[dst_off + k] ^= w;
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row(i).support() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// `[a | b]` side by side.
    ///
    /// # Panics
    ///
    /// Panics if the row counts differ.
    pub fn hconcat(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        assert_eq!(a.rows, b.rows, "row count mismatch");
        let mut m = BitMatrix::zeros(a.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in a.row(i).support() {
                m.set(i, j, true);
            }
            for j in b.row(i).support() {
                m.set(i, a.cols + j, true);
            }
        }
        m
    }

    /// `a` stacked on top of `b`.
    ///
    /// # Panics
    ///
    /// Panics if the column counts differ.
    pub fn vconcat(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        assert_eq!(a.cols, b.cols, "column count mismatch");
        let mut m = BitMatrix::zeros(a.rows + b.rows, a.cols);
        for i in 0..a.rows {
            for j in a.row(i).support() {
                m.set(i, j, true);
            }
        }
        for i in 0..b.rows {
            for j in b.row(i).support() {
                m.set(a.rows + i, j, true);
            }
        }
        m
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in self.row(i).support() {
                out.xor_row_from(i, rhs, k);
            }
        }
        out
    }

    fn xor_row_from(&mut self, dst: usize, src: &BitMatrix, src_row: usize) {
        let dst_off = dst * self.stride;
        let src_off = src_row * src.stride;
        for k in 0..words_for(self.cols) {
            self.words[dst_off + k] ^= src.words[src_off + k];
        }
    }

    /// `self * rhs^T` without materializing the transpose.
    pub fn mul_transpose(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.cols, "column count mismatch");
        let mut out = BitMatrix::zeros(self.rows, rhs.rows);
        for i in 0..self.rows {
            let ri = self.row(i);
            for j in 0..rhs.rows {
                if ri.dot(&rhs.row(j)) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    /// `self * v` with `v` as a column vector.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let mut out = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.row(i).dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn rank(&self) -> usize {
        row_echelon(self).rank()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Basis of a rowspace in reduced row-echelon form.
///
/// Rows are sorted by pivot column and each pivot column is zero in every
/// other row, so membership reduction is canonical.
#[derive(Clone, Debug)]
pub struct RowBasis {
    cols: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl RowBasis {
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after eliminating against the basis. Zero residual
    /// means `v` lies in the rowspace.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "length mismatch");
        let mut r = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Reduced row-echelon basis of the rowspace of `m`.
pub fn row_echelon(m: &BitMatrix) -> RowBasis {
    let mut work = m.clone();
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..work.cols() {
        let Some(pivot_row) = (next_row..work.rows()).find(|&r| work.get(r, col)) else {
            continue;
        };
        if pivot_row != next_row {
            work.xor_rows(next_row, pivot_row);
            work.xor_rows(pivot_row, next_row);
            work.xor_rows(next_row, pivot_row);
        }
        for r in 0..work.rows() {
            if r != next_row && work.get(r, col) {
                work.xor_rows(r, next_row);
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == work.rows() {
            break;
        }
    }
    let rows = (0..next_row).map(|i| work.row(i)).collect();
    RowBasis { cols: m.cols(), rows, pivots }
}

/// Whether `v` lies in the rowspace described by `basis`.
///
/// # Errors
///
/// Returns [`Error::InvalidInput`] when the lengths disagree.
pub fn rowspace_contains(basis: &RowBasis, v: &BitVec) -> Result<bool> {
    if v.len() != basis.cols() {
        return Err(Error::InvalidInput(format!(
            "vector length {} does not match basis width {}",
            v.len(),
            basis.cols()
        )));
    }
    Ok(basis.contains(v))
}

/// Basis of the right kernel `{ v : m * v = 0 }`.
pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVec> {
    let basis = row_echelon(m);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; m.cols()];
        for &p in basis.pivots() {
            s[p] = true;
        }
        s
    };
    let mut out = Vec::with_capacity(m.cols() - basis.rank());
    for free in 0..m.cols() {
        if pivot_set[free] {
            continue;
        }
        let mut v = BitVec::zeros(m.cols());
        v.set(free, true);
        for (row, &p) in basis.rows().iter().zip(basis.pivots()) {
            if row.get(free) {
                v.set(p, true);
            }
        }
        out.push(v);
    }
    out
}

/// One solution of `m * x = b`, if any.
pub fn solve(m: &BitMatrix, b: &BitVec) -> Option<BitVec> {
    assert_eq!(b.len(), m.rows(), "right-hand side length mismatch");
    let mut col = BitMatrix::zeros(m.rows(), 1);
    for i in b.support() {
        col.set(i, 0, true);
    }
    let aug = row_echelon(&BitMatrix::hconcat(m, &col));
    if aug.pivots().last() == Some(&m.cols()) {
        return None;
    }
    let mut x = BitVec::zeros(m.cols());
    for (row, &p) in aug.rows().iter().zip(aug.pivots()) {
        if row.get(m.cols()) {
            x.set(p, true);
        }
    }
    Some(x)
}

/// Circulant matrix of `p` over `Z/nZ`: entry `(i, j)` is the coefficient of
/// `X^((i - j) mod n)`, so the first column is the coefficient vector of `p`
/// and `circulant(p, n) * q.coeff_vec(n)` is the coefficient vector of `p*q`.
///
/// ```
/// use gb_forge::f2::{circulant, Poly};
/// let c = circulant(&Poly::from_exponents(&[0, 1]), 5).unwrap();
/// assert_eq!(c.rank(), 4);
/// ```
///
/// # Errors
///
/// Returns [`Error::InvalidInput`] when `n == 0`.
pub fn circulant(p: &Poly, n: usize) -> Result<BitMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("circulant size must be positive".into()));
    }
    let p = p.reduce_cyclic(n);
    let mut m = BitMatrix::zeros(n, n);
    for e in p.exponents() {
        for j in 0..n {
            m.set((e + j) % n, j, true);
        }
    }
    Ok(m)
}
