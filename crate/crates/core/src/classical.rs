//! Classical linear codes: Reed-Solomon evaluation codes, duals, star products,
//! puncturing and exhaustive distance.

use crate::enumerate;
use crate::error::{dim, Error, Result};
use crate::flinalg::{self, Mat};
use crate::gf::{poly, Field};

/// A classical `[n, k]_q` code given by a full-rank generator matrix, with an
/// optional designated encoder `F_q^k → C` (row `i` is the image of `e_i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    gen: Mat,
    encoder: Option<Mat>,
    eval_points: Option<Vec<u32>>,
}

impl LinearCode {
    /// A code from a generator matrix with linearly independent rows.
    pub fn new(gen: Mat) -> Result<LinearCode> {
        if gen.rank() != gen.rows() {
            return Err(Error::InvalidCode(format!(
                "generator has {} rows but rank {}",
                gen.rows(),
                gen.rank()
            )));
        }
        Ok(LinearCode {
            gen,
            encoder: None,
            eval_points: None,
        })
    }

    /// The code spanned by the rows of `m`, with an RREF generator.
    pub fn from_span(m: &Mat) -> LinearCode {
        LinearCode {
            gen: m.row_space(),
            encoder: None,
            eval_points: None,
        }
    }

    pub fn zero(field: &Field, n: usize) -> LinearCode {
        LinearCode::from_span(&Mat::empty(field, n))
    }

    pub fn with_encoder(mut self, encoder: Mat) -> Result<LinearCode> {
        if encoder.rows() != self.k() || encoder.cols() != self.n() {
            return Err(dim(format!(
                "encoder must be {}x{}, got {}x{}",
                self.k(),
                self.n(),
                encoder.rows(),
                encoder.cols()
            )));
        }
        if encoder.field() != self.field() {
            return Err(Error::FieldMismatch("encoder field".into()));
        }
        if encoder.row_space() != self.basis() {
            return Err(Error::InvalidCode(
                "encoder rows do not span the code".into(),
            ));
        }
        self.encoder = Some(encoder);
        Ok(self)
    }

    pub fn with_eval_points(mut self, points: Vec<u32>) -> Result<LinearCode> {
        if points.len() != self.n() {
            return Err(dim("one evaluation point per coordinate"));
        }
        check_distinct(self.field(), &points)?;
        self.eval_points = Some(points);
        Ok(self)
    }

    pub fn field(&self) -> &Field {
        self.gen.field()
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn gen(&self) -> &Mat {
        &self.gen
    }

    pub fn encoder(&self) -> Option<&Mat> {
        self.encoder.as_ref()
    }

    /// The designated encoder, or the generator when none is set.
    pub fn encoder_or_gen(&self) -> &Mat {
        self.encoder.as_ref().unwrap_or(&self.gen)
    }

    pub fn eval_points(&self) -> Option<&[u32]> {
        self.eval_points.as_deref()
    }

    /// Canonical RREF basis; two codes are equal as subspaces iff their bases are.
    pub fn basis(&self) -> Mat {
        self.gen.row_space()
    }

    pub fn same_subspace(&self, other: &LinearCode) -> bool {
        self.field() == other.field() && self.basis() == other.basis()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.n() && self.gen.rref().contains(v)
    }

    /// `Enc(m)` using the designated encoder (or the generator).
    pub fn encode(&self, msg: &[u32]) -> Result<Vec<u32>> {
        self.encoder_or_gen().vec_mul(msg)
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode::from_span(&self.gen.kernel())
    }

    pub fn puncture(&self, keep: &[usize]) -> Result<LinearCode> {
        if keep.is_empty() {
            return Err(dim("puncturing to an empty coordinate set"));
        }
        Ok(LinearCode::from_span(&flinalg::puncture(&self.gen, keep)?))
    }

    /// Exact minimum distance by enumerating all `q^k` messages.
    pub fn distance_bruteforce(&self, budget: u64) -> Result<usize> {
        enumerate::min_weight(&self.gen, &Mat::empty(self.field(), self.n()), budget)
    }
}

fn check_distinct(f: &Field, points: &[u32]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for &a in points {
        f.check(a)?;
        if !seen.insert(a) {
            return Err(Error::InvalidCode(format!("repeated evaluation point {a}")));
        }
    }
    Ok(())
}

/// `ev_A(f) = (f(a))_{a∈A}`.
pub fn evaluate(field: &Field, coeffs: &[u32], points: &[u32]) -> Vec<u32> {
    points.iter().map(|&a| poly::eval(field, coeffs, a)).collect()
}

/// Rows `ev_A(X^i)` for `i < k`.
pub fn vandermonde(field: &Field, points: &[u32], k: usize) -> Mat {
    let n = points.len();
    let mut data = Vec::with_capacity(k * n);
    let mut cur = vec![1u32; n];
    for _ in 0..k {
        data.extend_from_slice(&cur);
        for (c, &a) in cur.iter_mut().zip(points) {
            *c = field.mul(*c, a);
        }
    }
    Mat::from_flat(field, k, n, data)
}

/// The (punctured) Reed-Solomon code `ev_A(F_q[X]^{<k})` with generator rows
/// `ev_A(X^i)`, which is also its encoder.
pub fn rs_code(field: &Field, points: &[u32], k: usize) -> Result<LinearCode> {
    check_distinct(field, points)?;
    if k > points.len() {
        return Err(Error::InvalidCode(format!(
            "dimension {k} exceeds the {} evaluation points",
            points.len()
        )));
    }
    let gen = vandermonde(field, points, k);
    let mut code = LinearCode::new(gen.clone())?;
    code.encoder = Some(gen);
    code.eval_points = Some(points.to_vec());
    Ok(code)
}

/// All field elements in ascending encoding order.
pub fn all_points(field: &Field) -> Vec<u32> {
    field.elements().collect()
}

/// `span{g_i ∗ g_j ∗ g_l}` over generator rows of the three codes.
pub fn star_product_span(c1: &LinearCode, c2: &LinearCode, c3: &LinearCode) -> Result<LinearCode> {
    let f = c1.field();
    if c2.field() != f || c3.field() != f {
        return Err(Error::FieldMismatch("star product".into()));
    }
    let n = c1.n();
    if c2.n() != n || c3.n() != n {
        return Err(dim("star product of codes with different lengths"));
    }
    let mut m = Mat::empty(f, n);
    for a in c1.gen.row_iter() {
        for b in c2.gen.row_iter() {
            let ab = star(f, a, b);
            for c in c3.gen.row_iter() {
                m.push_row(&star(f, &ab, c))?;
            }
            // Keep the working matrix small when many triples are redundant.
            if m.rows() > 4 * n {
                m = m.row_space();
                if m.rows() == n {
                    return Ok(LinearCode::from_span(&m));
                }
            }
        }
    }
    Ok(LinearCode::from_span(&m))
}

/// Component-wise product.
pub fn star(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| f.mul(x, y)).collect()
}
