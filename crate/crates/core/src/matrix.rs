//! Dense matrices over the group-ring extension, in the row-vector
//! convention: a matrix with `rows` rows and `cols` columns represents the
//! module map `R^rows -> R^cols`, `x |-> x * M`.

use crate::error::{Error, Result};
use crate::howell::ResidueMatrix;
use crate::ring::{RingContext, RingElement};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    ctx: Arc<RingContext>,
    rows: usize,
    cols: usize,
    data: Vec<RingElement>,
}

impl RingMatrix {
    pub fn zero(ctx: &Arc<RingContext>, rows: usize, cols: usize) -> Self {
        RingMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![RingElement::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &Arc<RingContext>, n: usize) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = RingElement::one(ctx);
        }
        m
    }

    /// n x n diagonal matrix with a constant entry.
    pub fn scalar(ctx: &Arc<RingContext>, n: usize, e: &RingElement) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = e.clone();
        }
        m
    }

    pub fn from_rows(ctx: &Arc<RingContext>, rows: Vec<Vec<RingElement>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for e in r {
                if **e.context() != **ctx {
                    return Err(Error::ContextMismatch("matrix entry context".into()));
                }
                data.push(e);
            }
        }
        Ok(RingMatrix {
            ctx: ctx.clone(),
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &RingElement {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut RingElement {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[RingElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// Matrix product; composition of row-vector maps is `self * other`.
    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RingMatrix::zero(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b);
                    let cur = out.at(i, j).add(&prod);
                    *out.at_mut(i, j) = cur;
                }
            }
        }
        Ok(out)
    }

    pub fn map<F: Fn(&RingElement) -> RingElement>(&self, f: F) -> RingMatrix {
        RingMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Entry-wise canonical lift along the context's gamma factor.
    pub fn lift_gamma(&self) -> RingMatrix {
        self.map(|e| e.lift_gamma())
    }

    /// The same matrix over a context differing only in `T`-precision.
    pub fn with_context(&self, ctx2: &Arc<RingContext>) -> RingMatrix {
        RingMatrix {
            ctx: ctx2.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e.with_context(ctx2)).collect(),
        }
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> RingMatrix {
        let mut out = RingMatrix::zero(&self.ctx, row_idx.len(), col_idx.len());
        for (i, &r) in row_idx.iter().enumerate() {
            for (j, &c) in col_idx.iter().enumerate() {
                *out.at_mut(i, j) = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn delete_rows_cols(&self, del_rows: &[usize], del_cols: &[usize]) -> RingMatrix {
        let rows: Vec<usize> = (0..self.rows).filter(|r| !del_rows.contains(r)).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|c| !del_cols.contains(c)).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn stack_vertical(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension("stacking width mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(RingMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block matrix [[self, right_top], [bottom_left, bottom_right]].
    pub fn block2x2(
        a: &RingMatrix,
        b: &RingMatrix,
        c: &RingMatrix,
        d: &RingMatrix,
    ) -> Result<RingMatrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Dimension("block shapes do not align".into()));
        }
        let ctx = a.ctx.clone();
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut out = RingMatrix::zero(&ctx, rows, cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                *out.at_mut(i, j) = a.at(i, j).clone();
            }
            for j in 0..b.cols {
                *out.at_mut(i, a.cols + j) = b.at(i, j).clone();
            }
        }
        for i in 0..c.rows {
            for j in 0..c.cols {
                *out.at_mut(a.rows + i, j) = c.at(i, j).clone();
            }
            for j in 0..d.cols {
                *out.at_mut(a.rows + i, a.cols + j) = d.at(i, j).clone();
            }
        }
        Ok(out)
    }

    /// Flattened `Z/p^N`-matrix of the map `x |-> x * M` over the basis
    /// `{(g, T^j) : j < m_eff}` of each free coordinate. Row `(i, b)` is the
    /// image of basis element `b` of the i-th source coordinate.
    pub fn flatten_action(&self, m_eff: u32) -> ResidueMatrix {
        let n = self.ctx.group_order();
        let block = n * m_eff as usize;
        let width = self.cols * block;
        let mut rows = Vec::with_capacity(self.rows * block);
        for i in 0..self.rows {
            for j in 0..m_eff {
                for g in 0..n as u32 {
                    let mut row = vec![0u64; width];
                    for c in 0..self.cols {
                        let e = self.at(i, c);
                        if e.is_zero() {
                            continue;
                        }
                        let shifted = e.mul_basis(g, j);
                        for (jj, gg, coeff) in shifted.terms() {
                            if jj < m_eff {
                                row[c * block + jj as usize * n + gg as usize] = coeff;
                            }
                        }
                    }
                    rows.push(row);
                }
            }
        }
        ResidueMatrix::new(
            self.ctx.p(),
            self.ctx.coeff_precision(),
            width,
            rows,
        )
    }

    /// Smallest `m_eff` that keeps all entry degrees exact, capped at the
    /// context's `M`.
    pub fn natural_t_slices(&self) -> u32 {
        let d = self
            .data
            .iter()
            .filter_map(|e| e.t_degree())
            .max()
            .unwrap_or(0);
        (d + 1).min(self.ctx.t_precision())
    }

    /// Generators of the left kernel `{x in R^rows : x * M = 0}`, one ring
    /// vector per row, from the flattened kernel at `m_eff` T-slices.
    pub fn kernel_matrix(&self, m_eff: u32) -> RingMatrix {
        let flat = self.flatten_action(m_eff);
        let ker = crate::howell::kernel(&flat);
        let n = self.ctx.group_order();
        let block = n * m_eff as usize;
        let rows: Vec<Vec<RingElement>> = ker
            .rows
            .iter()
            .map(|row| {
                (0..self.rows)
                    .map(|i| {
                        let mut e = RingElement::zero(&self.ctx);
                        for j in 0..m_eff as usize {
                            for g in 0..n {
                                let c = row[i * block + j * n + g];
                                if c != 0 {
                                    e = e.add(&RingElement::monomial(
                                        &self.ctx,
                                        c,
                                        &self.ctx.group().element_at(g),
                                        j as u32,
                                    ));
                                }
                            }
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        let mut out = RingMatrix::zero(&self.ctx, rows.len(), self.rows);
        for (i, r) in rows.into_iter().enumerate() {
            for (j, e) in r.into_iter().enumerate() {
                *out.at_mut(i, j) = e;
            }
        }
        out
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{} x {}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let entries: Vec<String> = (0..self.cols).map(|j| self.at(i, j).render()).collect();
            writeln!(f, "  [{}]", entries.join(", "))?;
        }
        Ok(())
    }
}
