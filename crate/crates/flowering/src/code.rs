//! Reed-Solomon base codes and the code on a graph.
//!
//! `RS[n, k]` is evaluated on the canonical points `0..n-1`. Membership is
//! a linear condition: the coefficients `k..n-1` of the interpolating
//! polynomial, each a fixed linear functional of the values (a row of the
//! inverse Vandermonde), must vanish. The graph code stacks those parity
//! rows once per vertex, with edge values as unknowns; its kernel is
//! computed by exact row echelon over the field. Echelon rows double as a
//! sampler: free coordinates drawn uniformly and back-substituted give a
//! uniform codeword without materializing a basis.

use crate::field::{FieldElement, FieldError, PrimeField};
use crate::rim::{EdgeWord, Rim};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("vector length does not match the code length")]
    LengthMismatch,
    #[error("instance too large for this exact oracle")]
    TooLarge,
    #[error("dimension must satisfy 1 <= k <= n <= |F|")]
    BadDimensions,
    #[error("word shape does not match the graph")]
    ShapeMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `RS[n, k]` over the points `0, 1, ..., n-1`.
#[derive(Debug, Clone)]
pub struct RsCode {
    field: PrimeField,
    n: usize,
    k: usize,
    /// Rows `k..n-1` of the inverse Vandermonde: the parity checks.
    parity: Vec<Vec<FieldElement>>,
    /// Full inverse Vandermonde, row `d` giving coefficient `d`.
    inverse_vandermonde: Vec<Vec<FieldElement>>,
}

impl RsCode {
    pub fn new(field: PrimeField, n: usize, k: usize) -> Result<RsCode, CodeError> {
        if k == 0 || k > n || (n as u64) > field.modulus() {
            return Err(CodeError::BadDimensions);
        }
        let inverse_vandermonde = invert_vandermonde(&field, n)?;
        let parity = inverse_vandermonde[k..].to_vec();
        Ok(RsCode { field, n, k, parity, inverse_vandermonde })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn parity_rows(&self) -> &[Vec<FieldElement>] {
        &self.parity
    }

    /// Coefficients of the least-degree interpolating polynomial.
    pub fn interpolate(&self, values: &[FieldElement]) -> Result<Vec<FieldElement>, CodeError> {
        if values.len() != self.n {
            return Err(CodeError::LengthMismatch);
        }
        Ok(self.inverse_vandermonde.iter().map(|row| dot(&self.field, row, values)).collect())
    }

    /// True iff the interpolating polynomial has degree `< k`.
    pub fn is_member(&self, values: &[FieldElement]) -> Result<bool, CodeError> {
        if values.len() != self.n {
            return Err(CodeError::LengthMismatch);
        }
        Ok(self.parity.iter().all(|row| dot(&self.field, row, values).0 == 0))
    }

    /// Evaluations of the polynomial with the given coefficients.
    pub fn encode(&self, coeffs: &[FieldElement]) -> Vec<FieldElement> {
        (0..self.n as u64)
            .map(|x| {
                let x = self.field.element(x);
                let mut acc = FieldElement::ZERO;
                for c in coeffs.iter().rev() {
                    acc = self.field.add(self.field.mul(acc, x), *c);
                }
                acc
            })
            .collect()
    }

    /// Exact distance of `values` to the code by the `C(n, k)`-subset
    /// interpolation oracle; only for `n <= 16`.
    pub fn distance(&self, values: &[FieldElement]) -> Result<usize, CodeError> {
        if values.len() != self.n {
            return Err(CodeError::LengthMismatch);
        }
        if self.n > 16 {
            return Err(CodeError::TooLarge);
        }
        // The nearest codeword agrees on >= k positions (any k of them
        // determine it), so scanning interpolants of all k-subsets finds
        // the maximum agreement.
        let mut best = 0usize;
        let mut subset: Vec<usize> = (0..self.k).collect();
        loop {
            let cw = self.interpolate_through(&subset, values);
            let agree = cw.iter().zip(values).filter(|(a, b)| a == b).count();
            best = best.max(agree);
            if best == self.n || !next_combination(&mut subset, self.n) {
                break;
            }
        }
        Ok(self.n - best)
    }

    /// Degree `< k` interpolant through the positions in `subset`,
    /// evaluated on all `n` points.
    fn interpolate_through(&self, subset: &[usize], values: &[FieldElement]) -> Vec<FieldElement> {
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; self.n];
        for (idx, &i) in subset.iter().enumerate() {
            let xi = f.element(i as u64);
            let mut denom = FieldElement::ONE;
            for (jdx, &j) in subset.iter().enumerate() {
                if jdx != idx {
                    denom = f.mul(denom, f.sub(xi, f.element(j as u64)));
                }
            }
            let scale = f.div(values[i], denom).expect("distinct points");
            for (x, slot) in out.iter_mut().enumerate() {
                let xe = f.element(x as u64);
                let mut num = FieldElement::ONE;
                for (jdx, &j) in subset.iter().enumerate() {
                    if jdx != idx {
                        num = f.mul(num, f.sub(xe, f.element(j as u64)));
                    }
                }
                *slot = f.add(*slot, f.mul(scale, num));
            }
        }
        out
    }
}

fn dot(field: &PrimeField, row: &[FieldElement], values: &[FieldElement]) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    for (a, b) in row.iter().zip(values) {
        acc = field.add(acc, field.mul(*a, *b));
    }
    acc
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] != i + n - k {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Inverse of the Vandermonde matrix on points `0..n-1` by exact
/// Gauss-Jordan elimination. Row `d` of the result maps a value vector to
/// coefficient `d` of its interpolating polynomial.
fn invert_vandermonde(field: &PrimeField, n: usize) -> Result<Vec<Vec<FieldElement>>, CodeError> {
    let mut a: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            let x = field.element(i as u64);
            let mut row = Vec::with_capacity(n);
            let mut p = FieldElement::ONE;
            for _ in 0..n {
                row.push(p);
                p = field.mul(p, x);
            }
            row
        })
        .collect();
    let mut inv: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            let mut row = vec![FieldElement::ZERO; n];
            row[i] = FieldElement::ONE;
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col].0 != 0).ok_or(CodeError::BadDimensions)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let s = field.inv(a[col][col])?;
        for c in 0..n {
            a[col][c] = field.mul(a[col][c], s);
            inv[col][c] = field.mul(inv[col][c], s);
        }
        for r in 0..n {
            if r != col && a[r][col].0 != 0 {
                let fct = a[r][col];
                for c in 0..n {
                    let sub_a = field.mul(fct, a[col][c]);
                    a[r][c] = field.sub(a[r][c], sub_a);
                    let sub_i = field.mul(fct, inv[col][c]);
                    inv[r][c] = field.sub(inv[r][c], sub_i);
                }
            }
        }
    }
    Ok(inv)
}

/// Result of the exhaustive minimum-distance search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinDistance {
    /// Exact minimum Hamming weight (in edges) over nonzero codewords.
    Exact(usize),
    /// Enumeration would exceed the budget, or the code is zero-dimensional.
    Unknown,
}

/// Row echelon form of the stacked parity system, kept for solving.
#[derive(Debug, Clone)]
struct EchelonForm {
    /// Rows normalized to a unit leading entry, dense over edge columns.
    rows: Vec<Vec<u64>>,
    /// Pivot column of each row, strictly increasing.
    pivot_cols: Vec<usize>,
    is_pivot: Vec<bool>,
}

/// The code `C(Gamma, k)`: every local view in `RS[n, k]`.
#[derive(Debug, Clone)]
pub struct GraphCode {
    graph: Rim,
    base: RsCode,
    echelon: Option<EchelonForm>,
}

impl GraphCode {
    pub fn new(graph: Rim, base: RsCode) -> Result<GraphCode, CodeError> {
        if graph.arity() != base.length() {
            return Err(CodeError::ShapeMismatch);
        }
        Ok(GraphCode { graph, base, echelon: None })
    }

    pub fn graph(&self) -> &Rim {
        &self.graph
    }

    pub fn base(&self) -> &RsCode {
        &self.base
    }

    /// True iff every local view is a base codeword.
    pub fn is_member(&self, f: &EdgeWord) -> Result<bool, CodeError> {
        if f.values.len() != self.graph.edge_count() {
            return Err(CodeError::ShapeMismatch);
        }
        for v in 0..self.graph.vertex_count() as u32 {
            if !self.base.is_member(&f.local_view(&self.graph, v))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn ensure_echelon(&mut self) -> &EchelonForm {
        if self.echelon.is_none() {
            self.echelon = Some(self.build_echelon());
        }
        self.echelon.as_ref().unwrap()
    }

    fn build_echelon(&self) -> EchelonForm {
        let edges = self.graph.edge_count();
        let field = self.base.field().clone();
        let p = field.modulus();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for v in 0..self.graph.vertex_count() as u32 {
            for prow in self.base.parity_rows() {
                let mut row = vec![0u64; edges];
                for (j, coeff) in prow.iter().enumerate() {
                    // loops hit the same edge twice; coefficients add
                    let e = self.graph.edge_id(v, j);
                    row[e] = add_mod(row[e], coeff.0, p);
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
        let (rows, pivot_cols) = row_echelon(rows, edges, &field);
        let mut is_pivot = vec![false; edges];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        EchelonForm { rows, pivot_cols, is_pivot }
    }

    /// Kernel basis as explicit words, plus the dimension.
    ///
    /// Only for graphs with at most ~10^4 edges: the basis is dense.
    pub fn compute_basis(&mut self) -> Result<(Vec<EdgeWord>, usize), CodeError> {
        if self.graph.edge_count() > 10_000 {
            return Err(CodeError::TooLarge);
        }
        let field = self.base.field().clone();
        let edges = self.graph.edge_count();
        let ech = self.ensure_echelon();
        let mut basis = Vec::new();
        for free in 0..edges {
            if ech.is_pivot[free] {
                continue;
            }
            let mut x = vec![0u64; edges];
            x[free] = 1;
            back_substitute(ech, &mut x, &field);
            basis.push(EdgeWord { values: x.into_iter().map(FieldElement).collect() });
        }
        let dim = basis.len();
        Ok((basis, dim))
    }

    /// Dimension of the code: edges minus the parity rank.
    pub fn dimension(&mut self) -> usize {
        let edges = self.graph.edge_count();
        let ech = self.ensure_echelon();
        edges - ech.rows.len()
    }

    /// Uniformly random codeword: free coordinates drawn uniformly, pivot
    /// coordinates forced by back-substitution.
    pub fn sample_codeword<R: Rng + ?Sized>(&mut self, rng: &mut R) -> EdgeWord {
        let field = self.base.field().clone();
        let edges = self.graph.edge_count();
        let ech = self.ensure_echelon();
        let mut x = vec![0u64; edges];
        for (c, slot) in x.iter_mut().enumerate() {
            if !ech.is_pivot[c] {
                *slot = field.sample_uniform(rng).0;
            }
        }
        back_substitute(ech, &mut x, &field);
        EdgeWord { values: x.into_iter().map(FieldElement).collect() }
    }

    /// Exact minimum Hamming weight by full enumeration of `|F|^dim`
    /// codewords, when that stays within `budget`.
    pub fn min_distance_bruteforce(&mut self, budget: u64) -> Result<MinDistance, CodeError> {
        let (basis, dim) = self.compute_basis()?;
        if dim == 0 {
            return Ok(MinDistance::Unknown);
        }
        let q = self.base.field().modulus();
        let mut total: u64 = 1;
        for _ in 0..dim {
            total = match total.checked_mul(q) {
                Some(t) if t <= budget => t,
                _ => return Ok(MinDistance::Unknown),
            };
        }
        let field = self.base.field().clone();
        let edges = self.graph.edge_count();
        let mut best = usize::MAX;
        // depth-first over coefficient vectors with per-level partial sums
        let mut partial: Vec<Vec<FieldElement>> = vec![vec![FieldElement::ZERO; edges]; dim + 1];
        let mut stack: Vec<u64> = vec![0; dim];
        let mut level = 0usize;
        loop {
            if level == dim {
                let w = partial[dim].iter().filter(|v| v.0 != 0).count();
                if w > 0 && w < best {
                    best = w;
                }
                loop {
                    if level == 0 {
                        return Ok(if best == usize::MAX {
                            MinDistance::Unknown
                        } else {
                            MinDistance::Exact(best)
                        });
                    }
                    level -= 1;
                    if stack[level] + 1 < q {
                        stack[level] += 1;
                        break;
                    }
                    stack[level] = 0;
                }
            }
            let c = FieldElement(stack[level]);
            let (lo, hi) = partial.split_at_mut(level + 1);
            for (slot, (prev, b)) in
                hi[0].iter_mut().zip(lo[level].iter().zip(&basis[level].values))
            {
                *slot = field.add(*prev, field.mul(c, *b));
            }
            level += 1;
        }
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

/// Barrett reducer for moduli below 2^31: `reduce(x) = x mod p` for any
/// `x < 2^63`, one wide multiplication plus a short correction loop.
struct Barrett {
    p: u64,
    m: u64,
}

impl Barrett {
    fn new(p: u64) -> Barrett {
        Barrett { p, m: ((1u128 << 63) / p as u128) as u64 }
    }

    #[inline]
    fn reduce(&self, x: u64) -> u64 {
        debug_assert!(x < (1u64 << 63));
        let q = ((x as u128 * self.m as u128) >> 63) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }
}

/// Row echelon form with unit pivots; returns normalized rows and their
/// pivot columns. Rows stay dense, but zero factors are skipped, which
/// keeps the early sparse phase cheap.
fn row_echelon(
    mut rows: Vec<Vec<u64>>,
    cols: usize,
    field: &PrimeField,
) -> (Vec<Vec<u64>>, Vec<usize>) {
    let p = field.modulus();
    let fast = p < (1 << 31);
    let barrett = Barrett::new(p);
    let nrows = rows.len();
    let mut rank = 0usize;
    let mut pivot_cols = Vec::new();
    for col in 0..cols {
        let Some(piv) = (rank..nrows).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = field.inv(FieldElement(rows[rank][col])).expect("nonzero pivot").0;
        if inv != 1 {
            let prow = &mut rows[rank];
            if fast {
                for x in prow[col..].iter_mut() {
                    *x = barrett.reduce(*x * inv);
                }
            } else {
                for x in prow[col..].iter_mut() {
                    *x = ((*x as u128 * inv as u128) % p as u128) as u64;
                }
            }
        }
        let (top, bottom) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in bottom.iter_mut() {
            let f = row[col];
            if f == 0 {
                continue;
            }
            let neg = p - f;
            if fast {
                for (x, &pv) in row[col..].iter_mut().zip(&prow[col..]) {
                    if pv != 0 {
                        *x = barrett.reduce(*x + barrett.reduce(neg * pv));
                    }
                }
            } else {
                for (x, &pv) in row[col..].iter_mut().zip(&prow[col..]) {
                    if pv != 0 {
                        *x = ((*x as u128 + neg as u128 * pv as u128) % p as u128) as u64;
                    }
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rows.truncate(rank);
    (rows, pivot_cols)
}

/// Completes a vector whose free coordinates are set: pivot coordinates
/// are forced bottom-up so every echelon row dots to zero.
fn back_substitute(ech: &EchelonForm, x: &mut [u64], field: &PrimeField) {
    let p = field.modulus();
    if p < (1 << 31) {
        let barrett = Barrett::new(p);
        for (row, &pc) in ech.rows.iter().zip(&ech.pivot_cols).rev() {
            let mut acc: u64 = 0;
            for (c, &coeff) in row.iter().enumerate().skip(pc + 1) {
                if coeff != 0 && x[c] != 0 {
                    acc = barrett.reduce(acc + barrett.reduce(coeff * x[c]));
                }
            }
            x[pc] = if acc == 0 { 0 } else { p - acc };
        }
    } else {
        for (row, &pc) in ech.rows.iter().zip(&ech.pivot_cols).rev() {
            let mut acc: u64 = 0;
            for (c, &coeff) in row.iter().enumerate().skip(pc + 1) {
                if coeff != 0 && x[c] != 0 {
                    acc = ((acc as u128 + coeff as u128 * x[c] as u128) % p as u128) as u64;
                }
            }
            x[pc] = if acc == 0 { 0 } else { p - acc };
        }
    }
}
