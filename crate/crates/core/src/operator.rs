//! Dense complex matrices over the orthonormal bases of the edge Hilbert
//! space, tagged with the spaces they map between.

use std::fmt;

use crate::{Error, Result, C64};

/// The space an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// `L²(E)`, indexed by edges in canonical order.
    Top,
    /// `L²(Ω^{0,1} ⊗ E)`, coefficient of `ξ_{s(e)+1→s(e)} ⊗ χ_e` at edge `e`.
    Bottom,
    /// `H = Top ⊕ Bottom`, top block first.
    Full,
    /// `C(E_n)` of the complete loop-free graph on the vertex set.
    CompleteEdges,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Space::Top => "top",
            Space::Bottom => "bottom",
            Space::Full => "full",
            Space::CompleteEdges => "complete-edges",
        };
        f.write_str(s)
    }
}

/// Row-major dense complex matrix from `domain` to `codomain`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
    domain: Space,
    codomain: Space,
}

impl DenseOperator {
    pub fn zeros(rows: usize, cols: usize, domain: Space, codomain: Space) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
            domain,
            codomain,
        }
    }

    pub fn identity(dim: usize, space: Space) -> Self {
        let mut m = Self::zeros(dim, dim, space, space);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        domain: Space,
        codomain: Space,
        f: impl Fn(usize, usize) -> C64,
    ) -> Self {
        let mut m = Self::zeros(rows, cols, domain, codomain);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
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

    pub fn domain(&self) -> Space {
        self.domain
    }

    pub fn codomain(&self) -> Space {
        self.codomain
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Same entries, different space tags.
    pub fn retagged(mut self, domain: Space, codomain: Space) -> Self {
        self.domain = domain;
        self.codomain = codomain;
        self
    }

    /// Conjugate transpose. The orthonormal bases carry the uniform weight
    /// `1/n` on both blocks, so this is the Hilbert-space adjoint.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.codomain, self.domain, |i, j| {
            self.get(j, i).conj()
        })
    }

    /// `self · rhs`; requires `rhs.codomain == self.domain`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows || self.domain != rhs.codomain {
            return Err(Error::SpaceMismatch(format!(
                "({} <- {}, {}x{}) * ({} <- {}, {}x{})",
                self.codomain, self.domain, self.rows, self.cols, rhs.codomain, rhs.domain, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols, rhs.domain, self.codomain);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let r = rhs.row(k);
                let o = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in o.iter_mut().zip(r) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols || self.domain != rhs.domain || self.codomain != rhs.codomain
        {
            return Err(Error::SpaceMismatch(format!(
                "({} <- {}, {}x{}) vs ({} <- {}, {}x{})",
                self.codomain, self.domain, self.rows, self.cols, rhs.codomain, rhs.domain, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        let mut out = self.clone();
        out.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a += b);
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        let mut out = self.clone();
        out.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a -= b);
        Ok(out)
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|a| *a *= c);
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise absolute difference; infinite on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of `M - M†`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (self.get(i, j) - self.get(j, i).conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Block `[r0, r0+rows) x [c0, c0+cols)` as a new operator.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize, domain: Space, codomain: Space) -> Self {
        Self::from_fn(rows, cols, domain, codomain, |i, j| self.get(r0 + i, c0 + j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_checks_spaces() {
        let a = DenseOperator::identity(2, Space::Top).retagged(Space::Top, Space::Bottom);
        let b = DenseOperator::identity(2, Space::Top);
        assert!(a.compose(&b).is_ok());
        assert!(b.compose(&a).is_err());
    }

    #[test]
    fn adjoint_is_involutive() {
        let m = DenseOperator::from_fn(2, 3, Space::Top, Space::Bottom, |i, j| {
            C64::new(i as f64 + 1.0, j as f64 - 0.5)
        });
        let a = m.adjoint();
        assert_eq!((a.rows(), a.cols()), (3, 2));
        assert_eq!(a.domain(), Space::Bottom);
        assert_eq!(a.adjoint(), m);
    }
}
