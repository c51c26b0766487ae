//! F_p-linear maps of F_q given by linearized polynomials L(x) = sum c_i x^(p^i).

use super::poly::inv_mod_p;
use super::{Fe, FieldCtx};
use crate::error::{Error, Result};

/// Reduced row echelon data for an n x n system over F_p.
#[derive(Clone, Debug)]
struct Echelon {
    /// Rows of the reduced matrix (only the first `pivots.len()` are nonzero).
    rows: Vec<Vec<u64>>,
    /// Pivot column of each nonzero row.
    pivots: Vec<usize>,
}

fn rref(mut rows: Vec<Vec<u64>>, p: u64) -> Echelon {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n_cols {
        let Some(pr) = (r..n_rows).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = inv_mod_p(rows[r][col], p);
        for v in rows[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..n_rows {
            if i != r && rows[i][col] != 0 {
                let f = rows[i][col];
                for j in 0..n_cols {
                    rows[i][j] = (rows[i][j] + p * p - f * rows[r][j]) % p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == n_rows {
            break;
        }
    }
    Echelon { rows, pivots }
}

/// L(x) = sum c_i x^(p^i) together with its matrix in the polynomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    terms: Vec<(Fe, u32)>,
    /// `matrix[row][col]`: digit `row` of L(p^col).
    matrix: Vec<Vec<u64>>,
    p: u64,
}

impl LinMap {
    pub fn new(ctx: &FieldCtx, terms: &[(Fe, u32)]) -> Result<Self> {
        let n = ctx.n();
        for &(c, i) in terms {
            ctx.check(c)?;
            if i >= n {
                return Err(Error::FrobeniusIndex { index: i, n });
            }
        }
        let terms = terms.to_vec();
        let mut matrix = vec![vec![0u64; n as usize]; n as usize];
        for col in 0..n as usize {
            let basis = Fe(ctx.p().pow(col as u32));
            let image = eval_terms(ctx, &terms, basis);
            for (row, d) in ctx.digits(image).into_iter().enumerate() {
                matrix[row][col] = d as u64;
            }
        }
        Ok(Self { terms, matrix, p: ctx.p() as u64 })
    }

    pub fn terms(&self) -> &[(Fe, u32)] {
        &self.terms
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    /// Evaluates L through the polynomial expression (not the matrix).
    pub fn eval(&self, ctx: &FieldCtx, x: Fe) -> Fe {
        eval_terms(ctx, &self.terms, x)
    }

    /// Evaluates L through its matrix.
    pub fn apply_matrix(&self, ctx: &FieldCtx, x: Fe) -> Fe {
        let v = ctx.digits(x);
        let out: Vec<u32> = self
            .matrix
            .iter()
            .map(|row| {
                let s = row.iter().zip(&v).map(|(a, &b)| a * b as u64).sum::<u64>();
                (s % self.p) as u32
            })
            .collect();
        ctx.from_digits(&out)
    }

    pub fn rank(&self) -> usize {
        rref(self.matrix.clone(), self.p).pivots.len()
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.matrix.len()
    }

    /// Basis of the kernel as digit vectors.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let n = self.matrix.len();
        let ech = rref(self.matrix.clone(), self.p);
        let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; n];
                v[f] = 1;
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    v[pc] = (self.p - ech.rows[r][f]) % self.p;
                }
                v
            })
            .collect()
    }

    /// One solution of L(x) = rhs, the one with the smallest encoding.
    pub fn solve(&self, ctx: &FieldCtx, rhs: Fe) -> Option<Fe> {
        let p = self.p;
        let n = self.matrix.len();
        let b = ctx.digits(rhs);
        let aug: Vec<Vec<u64>> = self
            .matrix
            .iter()
            .zip(&b)
            .map(|(row, &bi)| {
                let mut r = row.clone();
                r.push(bi as u64);
                r
            })
            .collect();
        let ech = rref(aug, p);
        if ech.pivots.contains(&n) {
            return None;
        }
        let mut x = vec![0u64; n];
        for (r, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.rows[r][n];
        }
        // Lexicographic minimisation from the most significant digit: any
        // coordinate touched by the remaining kernel can be driven to zero.
        let mut kernel = self.kernel();
        for i in (0..n).rev() {
            let Some(pos) = kernel.iter().position(|v| v[i] != 0) else {
                continue;
            };
            let v = kernel.swap_remove(pos);
            let inv = inv_mod_p(v[i], p);
            let f = x[i] * inv % p;
            for j in 0..n {
                x[j] = (x[j] + p * p - f * v[j]) % p;
            }
            for w in kernel.iter_mut() {
                let g = w[i] * inv % p;
                for j in 0..n {
                    w[j] = (w[j] + p * p - g * v[j]) % p;
                }
            }
        }
        let digits: Vec<u32> = x.into_iter().map(|d| d as u32).collect();
        Some(ctx.from_digits(&digits))
    }

    /// Every solution of L(x) = rhs, sorted by encoding.
    pub fn solutions(&self, ctx: &FieldCtx, rhs: Fe) -> Vec<Fe> {
        let Some(x0) = self.solve(ctx, rhs) else {
            return Vec::new();
        };
        let kernel: Vec<Fe> = self
            .kernel()
            .iter()
            .map(|v| ctx.from_digits(&v.iter().map(|&d| d as u32).collect::<Vec<_>>()))
            .collect();
        let mut out = vec![x0];
        for k in kernel {
            let mut next = Vec::with_capacity(out.len() * ctx.p() as usize);
            for &base in &out {
                let mut m = Fe::ZERO;
                for _ in 0..ctx.p() {
                    next.push(ctx.add(base, m));
                    m = ctx.add(m, k);
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

fn eval_terms(ctx: &FieldCtx, terms: &[(Fe, u32)], x: Fe) -> Fe {
    terms.iter().fold(Fe::ZERO, |acc, &(c, i)| {
        ctx.add(acc, ctx.mul(c, ctx.frobenius(x, i)))
    })
}
