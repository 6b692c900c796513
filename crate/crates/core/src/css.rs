//! CSS codes with explicit encoding maps.
//!
//! A code is stored through the subspaces it actually needs for construction
//! and verification: the X-stabilizers `Q_X⊥` and `Q_Z`, both as RREF bases,
//! plus canonical representatives of `Enc_Z(e_i)` (and optionally `Enc_X(e_i)`).
//! `Q_X = (Q_X⊥)⊥` and `Q_Z⊥` are derived on demand, which keeps long
//! concatenated codes with few stabilizers cheap to hold.
//!
//! Canonical representatives: `Enc_Z(e_i)` is reduced modulo `Q_X⊥` (zero on the
//! pivot columns of its RREF basis). `Enc_X(e_i)` is represented by the unique
//! vector supported on the pivot columns of `Q_Z`'s RREF basis with the same
//! pairings against `Q_Z`; it differs from any other representative by an
//! element of `Q_Z⊥`.

use crate::enumerate;
use crate::error::{dim, Error, Result};
use crate::flinalg::{self, Mat};
use crate::gf::{Field, Tower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    x_stab: Mat,
    qz: Mat,
    encz: Mat,
    encx: Option<Mat>,
}

/// Bilinear form on `F_q^k` used for encoder compatibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bilinear {
    /// `(x, z) ↦ x · z`.
    Standard,
    /// `(x, z) ↦ tr(xz)` on `F_{q^k}` in the polynomial basis.
    Trace(Tower),
    /// `(x, z) ↦ Σ_j tr(x_j z_j)` on `F_{q^k}^m`, coordinates ordered `j·k + i`.
    BlockTrace(Tower, usize),
}

impl Bilinear {
    /// Gram matrix `G[i][l] = B(e_i, e_l)` on `F_q^k`.
    pub fn gram(&self, field: &Field, k: usize) -> Result<Mat> {
        match self {
            Bilinear::Standard => Ok(Mat::identity(field, k)),
            Bilinear::Trace(t) => Bilinear::BlockTrace(t.clone(), 1).gram(field, k),
            Bilinear::BlockTrace(t, m) => {
                if t.base() != field {
                    return Err(Error::FieldMismatch(format!(
                        "trace form over {} for a code over {field}",
                        t.base()
                    )));
                }
                if t.k() * m != k {
                    return Err(dim(format!(
                        "trace form of dimension {} for a code of dimension {k}",
                        t.k() * m
                    )));
                }
                let g = t.trace_gram();
                let mut out = Mat::zeros(field, k, k);
                for b in 0..*m {
                    for i in 0..t.k() {
                        for l in 0..t.k() {
                            out.set(b * t.k() + i, b * t.k() + l, g[i][l]);
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn eval(&self, field: &Field, x: &[u32], z: &[u32]) -> Result<u32> {
        let g = self.gram(field, x.len())?;
        Ok(field.dot(&g.vec_mul(x)?, z))
    }
}

impl CssCode {
    /// Builds a code from spanning sets of `Q_X⊥` and `Q_Z` and the Z-encoder rows
    /// (row `i` represents `Enc_Z(e_i)`), validating every structural invariant.
    pub fn new(x_stab: &Mat, qz: &Mat, encz: &Mat) -> Result<CssCode> {
        let f = x_stab.field();
        if qz.field() != f || encz.field() != f {
            return Err(Error::FieldMismatch("CSS components".into()));
        }
        let n = x_stab.cols();
        if qz.cols() != n || encz.cols() != n {
            return Err(dim(format!(
                "widths {} / {} / {} differ",
                n,
                qz.cols(),
                encz.cols()
            )));
        }
        let xs = x_stab.rref();
        let qzr = qz.rref();
        for row in xs.mat.row_iter() {
            if !qzr.contains(row) {
                return Err(Error::InvalidCode("Q_X⊥ is not contained in Q_Z".into()));
            }
        }
        let k = qzr.rank() - xs.rank();
        if encz.rows() != k {
            return Err(Error::InvalidCode(format!(
                "expected {k} Z-encoder representatives, got {}",
                encz.rows()
            )));
        }
        let mut reps = Mat::empty(f, n);
        for row in encz.row_iter() {
            if !qzr.contains(row) {
                return Err(Error::InvalidCode(
                    "Z-encoder representative lies outside Q_Z".into(),
                ));
            }
            reps.push_row(&xs.reduce(row))?;
        }
        if reps.rank() != k {
            return Err(Error::InvalidCode(
                "Z-encoder representatives are dependent modulo Q_X⊥".into(),
            ));
        }
        Ok(CssCode {
            x_stab: xs.mat,
            qz: qzr.mat,
            encz: reps,
            encx: None,
        })
    }

    /// `CSS(Q_X, Q_Z; Enc_Z)` from bases of `Q_X` and `Q_Z`.
    pub fn make_css(qx: &Mat, qz: &Mat, encz: &Mat) -> Result<CssCode> {
        CssCode::new(&qx.kernel(), qz, encz)
    }

    /// `CSS(F_q^n, C)` with the rows of `encoder` as Z-encoder.
    pub fn from_classical(encoder: &Mat) -> Result<CssCode> {
        CssCode::new(&Mat::empty(encoder.field(), encoder.cols()), encoder, encoder)
    }

    /// Attaches X-encoder representatives (row `i` represents `Enc_X(e_i)`).
    pub fn with_encx(mut self, encx: &Mat) -> Result<CssCode> {
        if encx.rows() != self.k() || encx.cols() != self.n() {
            return Err(dim(format!(
                "X-encoder must be {}x{}, got {}x{}",
                self.k(),
                self.n(),
                encx.rows(),
                encx.cols()
            )));
        }
        let f = self.field().clone();
        for row in encx.row_iter() {
            if self.x_stab.row_iter().any(|g| f.dot(g, row) != 0) {
                return Err(Error::InvalidCode(
                    "X-encoder representative lies outside Q_X".into(),
                ));
            }
        }
        let canon = self.canonical_x(encx)?;
        let pairing = canon.mul(&self.encz.transpose())?;
        if pairing.rank() != self.k() {
            return Err(Error::InvalidCode(
                "X-encoder representatives are dependent modulo Q_Z⊥".into(),
            ));
        }
        self.encx = Some(canon);
        Ok(self)
    }

    fn canonical_x(&self, encx: &Mat) -> Result<Mat> {
        let f = self.field();
        let qzr = self.qz.rref();
        let mut out = Mat::zeros(f, encx.rows(), self.n());
        for r in 0..encx.rows() {
            let x = encx.row(r);
            for (i, &p) in qzr.pivots.iter().enumerate() {
                out.set(r, p, f.dot(self.qz.row(i), x));
            }
        }
        Ok(out)
    }

    pub fn without_encx(mut self) -> CssCode {
        self.encx = None;
        self
    }

    pub fn field(&self) -> &Field {
        self.qz.field()
    }

    pub fn n(&self) -> usize {
        self.qz.cols()
    }

    pub fn k(&self) -> usize {
        self.encz.rows()
    }

    /// RREF basis of `Q_X⊥`.
    pub fn x_stab(&self) -> &Mat {
        &self.x_stab
    }

    /// RREF basis of `Q_Z`.
    pub fn qz(&self) -> &Mat {
        &self.qz
    }

    /// Canonical Z-encoder representatives, one row per logical basis vector.
    pub fn encz(&self) -> &Mat {
        &self.encz
    }

    pub fn encx(&self) -> Option<&Mat> {
        self.encx.as_ref()
    }

    /// RREF basis of `Q_X`.
    pub fn qx(&self) -> Mat {
        self.x_stab.kernel()
    }

    /// RREF basis of `Q_Z⊥`.
    pub fn z_stab(&self) -> Mat {
        self.qz.kernel()
    }

    pub fn dim_qx(&self) -> usize {
        self.n() - self.x_stab.rows()
    }

    pub fn dim_qz(&self) -> usize {
        self.qz.rows()
    }

    /// Canonical representative of `Enc_Z(z)`.
    pub fn encode_z(&self, z: &[u32]) -> Result<Vec<u32>> {
        self.encz.vec_mul(z)
    }

    pub fn encode_x(&self, x: &[u32]) -> Result<Vec<u32>> {
        match &self.encx {
            Some(m) => m.vec_mul(x),
            None => Err(Error::Incompatible("code has no X-encoder".into())),
        }
    }

    /// Logical value of a `Q_Z` vector, or `None` if it lies outside `Q_Z`.
    pub fn decode_z(&self, v: &[u32]) -> Result<Option<Vec<u32>>> {
        let basis = self.encz.vstack(&self.x_stab)?;
        Ok(basis
            .transpose()
            .solve(v)?
            .map(|c| c[..self.k()].to_vec()))
    }

    /// Checks that `encx · enczᵀ` is the Gram matrix of `form`.
    pub fn check_compatible(&self, form: &Bilinear) -> Result<()> {
        let Some(encx) = &self.encx else {
            return Err(Error::Incompatible("code has no X-encoder".into()));
        };
        let g = form.gram(self.field(), self.k())?;
        let pairing = encx.mul(&self.encz.transpose())?;
        if pairing != g {
            return Err(Error::Incompatible(
                "X/Z encoder pairing differs from the bilinear form".into(),
            ));
        }
        Ok(())
    }

    /// Vectors `d_l ∈ Q_X` with `d_l · Enc_Z(e_m) = δ_lm`.
    fn dual_of_encz(&self) -> Result<Mat> {
        let f = self.field();
        let k = self.k();
        let sys = self.x_stab.vstack(&self.encz)?;
        let s = self.x_stab.rows();
        let mut out = Mat::empty(f, self.n());
        for l in 0..k {
            let mut rhs = vec![0u32; s + k];
            rhs[s + l] = 1;
            let x = sys.solve(&rhs)?.ok_or_else(|| {
                Error::InvalidCode("Z-encoder is not independent modulo Q_X⊥".into())
            })?;
            out.push_row(&x)?;
        }
        Ok(out)
    }

    /// Attaches an X-encoder compatible with `Enc_Z` under `form`:
    /// `Enc_X(x) · Enc_Z(z) = B(x, z)` for all representatives.
    ///
    /// With `(d_l)` the basis of `Q_X/Q_Z⊥` dual to `(Enc_Z(e_l))` under the dot
    /// product and `G` the Gram matrix, `Enc_X(e_i) = Σ_l G_il d_l`.
    pub fn compatible_encx(&self, form: &Bilinear) -> Result<CssCode> {
        let g = form.gram(self.field(), self.k())?;
        if g.rank() != self.k() {
            return Err(Error::DegenerateForm);
        }
        let d = self.dual_of_encz()?;
        let encx = g.mul(&d)?;
        let out = self.clone().with_encx(&encx)?;
        debug_assert!(out.check_compatible(form).is_ok());
        Ok(out)
    }

    /// `Q|_S = CSS(Q_X, im Enc_Z(S))` for a basis `s` (rows in `F_q^k`) of `S`.
    pub fn restrict(&self, s: &Mat) -> Result<CssCode> {
        if s.cols() != self.k() {
            return Err(dim(format!(
                "restriction basis has width {}, code dimension is {}",
                s.cols(),
                self.k()
            )));
        }
        if s.rows() == 0 {
            return Err(Error::InvalidCode("restriction to the zero subspace".into()));
        }
        if s.rank() != s.rows() {
            return Err(Error::InvalidCode(
                "restriction basis rows are dependent".into(),
            ));
        }
        let encz = s.mul(&self.encz)?;
        let qz = self.x_stab.vstack(&encz)?;
        CssCode::new(&self.x_stab, &qz, &encz)
    }

    /// Exact minimum weight of `Q_Z ∖ Q_X⊥`.
    pub fn distance_z(&self, budget: u64) -> Result<usize> {
        enumerate::min_weight(&self.encz, &self.x_stab, budget)
    }

    /// Exact minimum weight of `Q_X ∖ Q_Z⊥`.
    pub fn distance_x(&self, budget: u64) -> Result<usize> {
        let q = self.field().order();
        let needed = enumerate::search_size(q, self.dim_qx());
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        if self.k() == 0 {
            return Err(Error::ZeroCode);
        }
        let z_stab = self.z_stab();
        let logical = match &self.encx {
            Some(m) => m.clone(),
            None => self.dual_of_encz()?,
        };
        enumerate::min_weight(&logical, &z_stab, budget)
    }

    /// Exact CSS distance, enumerating both sides.
    pub fn distance_bruteforce(&self, budget: u64) -> Result<usize> {
        if self.k() == 0 {
            return Err(Error::ZeroCode);
        }
        let q = self.field().order();
        let needed = enumerate::search_size(q, self.dim_qx())
            .saturating_add(enumerate::search_size(q, self.dim_qz()));
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        Ok(self.distance_z(budget)?.min(self.distance_x(budget)?))
    }

    /// Re-checks `Q_Z⊥ ⊆ Q_X`, the dual form of `Q_X⊥ ⊆ Q_Z`.
    pub fn z_stab_in_qx(&self) -> bool {
        let f = self.field();
        let zs = self.z_stab();
        let ok = zs
            .row_iter()
            .all(|v| self.x_stab.row_iter().all(|g| f.dot(g, v) == 0));
        ok
    }
}

/// Concatenation `inner ∘ outer`.
///
/// The inner code is over `F_q` with dimension `k_in` equal to the tower
/// degree, and its encoders must be compatible under the trace form; the outer
/// code is over `F_{q^{k_in}}` with encoders compatible under the standard form.
/// Logical coordinate `j·k_in + i` of the result is the `F_q`-basis element
/// `X^i e_j` of `F_{q^{k_in}}^{k_out}`.
pub fn concatenate(inner: &CssCode, tower: &Tower, outer: &CssCode) -> Result<CssCode> {
    if inner.field() != tower.base() {
        return Err(Error::FieldMismatch(format!(
            "inner code over {}, tower base {}",
            inner.field(),
            tower.base()
        )));
    }
    if outer.field() != tower.ext() {
        return Err(Error::FieldMismatch(format!(
            "outer code over {}, tower extension {}",
            outer.field(),
            tower.ext()
        )));
    }
    if inner.k() != tower.k() {
        return Err(dim(format!(
            "inner dimension {} differs from tower degree {}",
            inner.k(),
            tower.k()
        )));
    }
    inner.check_compatible(&Bilinear::Trace(tower.clone()))?;
    outer.check_compatible(&Bilinear::Standard)?;
    let inner_encx = inner.encx().unwrap();
    let outer_encx = outer.encx().unwrap();

    let f = inner.field();
    let ext = tower.ext();
    let kin = tower.k();
    let n_in = inner.n();
    let n_out = outer.n();
    let n = n_in * n_out;

    let lift = |w: &[u32], enc: &Mat| -> Vec<u32> {
        let mut out = vec![0u32; n];
        for (j, &sym) in w.iter().enumerate() {
            if sym == 0 {
                continue;
            }
            let block = &mut out[j * n_in..(j + 1) * n_in];
            for (i, &c) in tower.flatten_unchecked(sym).iter().enumerate() {
                f.axpy(block, c, enc.row(i));
            }
        }
        out
    };
    let basis_multiples = |rows: &Mat, enc: &Mat, out: &mut Mat| -> Result<()> {
        for row in rows.row_iter() {
            for i in 0..kin {
                let xi = tower.basis(i);
                let w: Vec<u32> = row.iter().map(|&s| ext.mul(s, xi)).collect();
                out.push_row(&lift(&w, enc))?;
            }
        }
        Ok(())
    };

    let mut x_stab = Mat::empty(f, n);
    for j in 0..n_out {
        for g in inner.x_stab().row_iter() {
            let mut v = vec![0u32; n];
            v[j * n_in..(j + 1) * n_in].copy_from_slice(g);
            x_stab.push_row(&v)?;
        }
    }
    let mut qz = x_stab.clone();
    basis_multiples(outer.x_stab(), inner.encz(), &mut x_stab)?;
    basis_multiples(outer.qz(), inner.encz(), &mut qz)?;

    let mut encz = Mat::empty(f, n);
    basis_multiples(outer.encz(), inner.encz(), &mut encz)?;
    let mut encx = Mat::empty(f, n);
    basis_multiples(outer_encx, inner_encx, &mut encx)?;

    CssCode::new(&x_stab, &qz, &encz)?.with_encx(&encx)
}

/// Exact `Q_X` of a concatenated code from its definition,
/// `Enc_X^in(Q_X^out) + ⊕ Q_Z^in⊥`, for cross-checking on small instances.
pub fn concatenated_qx(inner: &CssCode, tower: &Tower, outer: &CssCode) -> Result<Mat> {
    let f = inner.field();
    let n_in = inner.n();
    let n = n_in * outer.n();
    let inner_encx = inner
        .encx()
        .ok_or_else(|| Error::Incompatible("inner code has no X-encoder".into()))?;
    let mut out = Mat::empty(f, n);
    let zs = inner.z_stab();
    for j in 0..outer.n() {
        for g in zs.row_iter() {
            let mut v = vec![0u32; n];
            v[j * n_in..(j + 1) * n_in].copy_from_slice(g);
            out.push_row(&v)?;
        }
    }
    for row in outer.qx().row_iter() {
        for i in 0..tower.k() {
            let xi = tower.basis(i);
            let mut v = vec![0u32; n];
            for (j, &s) in row.iter().enumerate() {
                let sym = tower.ext().mul(s, xi);
                for (t, &c) in tower.flatten_unchecked(sym).iter().enumerate() {
                    f.axpy(&mut v[j * n_in..(j + 1) * n_in], c, inner_encx.row(t));
                }
            }
            out.push_row(&v)?;
        }
    }
    Ok(out.row_space())
}

/// Whether two spanning sets define the same subspace.
pub fn same_span(a: &Mat, b: &Mat) -> bool {
    a.row_space() == b.row_space()
}

/// `Q_X⊥ ⊆ Q_Z` and `Q_Z⊥ ⊆ Q_X` for an arbitrary pair of bases.
pub fn css_condition(qx: &Mat, qz: &Mat) -> Result<bool> {
    Ok(flinalg::is_subspace(&qx.kernel(), qz)? && flinalg::is_subspace(&qz.kernel(), qx)?)
}
