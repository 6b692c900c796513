use super::{poly, Field};
use crate::error::{Error, Result};

/// A degree-`k` extension `F_q ⊆ F_{q^k}` with `F_{q^k} = F_q[X]/(γ)`.
///
/// Elements of the extension are stored over the base, so `flatten` is digit
/// extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    base: Field,
    ext: Field,
    k: usize,
    /// `tr(X^i)` for the polynomial basis.
    basis_traces: Vec<u32>,
}

impl Tower {
    /// The extension of `base` of degree `k` defined by the smallest irreducible γ.
    pub fn new(base: &Field, k: usize) -> Result<Tower> {
        if k == 0 {
            return Err(Error::InvalidModulus("tower degree must be at least 1".into()));
        }
        let order = (base.order() as u128).pow(k as u32);
        if order > super::MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge {
                order,
                bound: super::MAX_FIELD_ORDER,
            });
        }
        let gamma = poly::smallest_irreducible(base, k);
        Tower::with_gamma(base, gamma)
    }

    pub fn with_gamma(base: &Field, gamma: Vec<u32>) -> Result<Tower> {
        let ext = Field::extension(base, gamma)?;
        Tower::from_fields(base, &ext)
    }

    /// Recovers the tower from an extension built directly over `base`
    /// (or `ext == base` for the trivial tower).
    pub fn from_fields(base: &Field, ext: &Field) -> Result<Tower> {
        let k = if ext == base {
            1
        } else if ext.base() == Some(base) {
            ext.ext_degree()
        } else {
            return Err(Error::FieldMismatch(format!(
                "{ext} is not built directly over {base}"
            )));
        };
        let mut t = Tower {
            base: base.clone(),
            ext: ext.clone(),
            k,
            basis_traces: Vec::new(),
        };
        t.basis_traces = (0..k)
            .map(|i| {
                let x = t.unflatten_unchecked(&unit(k, i));
                t.trace_naive(x)
            })
            .collect();
        Ok(t)
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Defining polynomial of the extension over the base (`X` when `k = 1`).
    pub fn gamma(&self) -> Vec<u32> {
        if self.k == 1 {
            vec![0, 1]
        } else {
            self.ext.modulus().to_vec()
        }
    }

    fn check_ext(&self, x: u32) -> Result<()> {
        self.ext.check(x)
    }

    /// `Σ_{i<k} x^{q^i}` computed with Frobenius powers.
    pub fn trace_naive(&self, x: u32) -> u32 {
        let q = self.base.order();
        let mut acc = 0u32;
        let mut y = x;
        for _ in 0..self.k {
            acc = self.ext.add(acc, y);
            y = self.ext.pow(y, q);
        }
        debug_assert!(self.base.contains(acc as u64));
        acc
    }

    /// `tr_{F_{q^k}/F_q}(x)`, using linearity over the polynomial basis.
    pub fn trace(&self, x: u32) -> Result<u32> {
        self.check_ext(x)?;
        Ok(self.trace_unchecked(x))
    }

    pub(crate) fn trace_unchecked(&self, x: u32) -> u32 {
        let digits = self.flatten_unchecked(x);
        self.base.dot(&digits, &self.basis_traces)
    }

    pub fn flatten(&self, x: u32) -> Result<Vec<u32>> {
        self.check_ext(x)?;
        Ok(self.flatten_unchecked(x))
    }

    pub(crate) fn flatten_unchecked(&self, x: u32) -> Vec<u32> {
        if self.k == 1 {
            vec![x]
        } else {
            self.ext.digits(x)
        }
    }

    pub fn unflatten(&self, v: &[u32]) -> Result<u32> {
        if v.len() != self.k {
            return Err(crate::error::dim(format!(
                "unflatten expects {} coordinates, got {}",
                self.k,
                v.len()
            )));
        }
        for &c in v {
            self.base.check(c)?;
        }
        Ok(self.unflatten_unchecked(v))
    }

    pub(crate) fn unflatten_unchecked(&self, v: &[u32]) -> u32 {
        if self.k == 1 {
            v[0]
        } else {
            self.ext.from_digits(v)
        }
    }

    /// The basis element `X^i` of the extension.
    pub fn basis(&self, i: usize) -> u32 {
        self.unflatten_unchecked(&unit(self.k, i))
    }

    /// `k × k` matrix `M` over the base with `flatten(a·b) = M · flatten(b)`.
    /// Row-major, `M[i][j]` is coordinate `i` of `a · X^j`.
    pub fn mul_matrix(&self, a: u32) -> Result<Vec<Vec<u32>>> {
        self.check_ext(a)?;
        let cols: Vec<Vec<u32>> = (0..self.k)
            .map(|j| self.flatten_unchecked(self.ext.mul(a, self.basis(j))))
            .collect();
        Ok((0..self.k)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect())
    }

    /// Gram matrix `G[i][l] = tr(X^i X^l)` of the trace form.
    pub fn trace_gram(&self) -> Vec<Vec<u32>> {
        (0..self.k)
            .map(|i| {
                (0..self.k)
                    .map(|l| self.trace_unchecked(self.ext.mul(self.basis(i), self.basis(l))))
                    .collect()
            })
            .collect()
    }
}

fn unit(k: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0u32; k];
    v[i] = 1;
    v
}
