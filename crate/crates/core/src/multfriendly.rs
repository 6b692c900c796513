//! Multiplication-friendly codes: collections of `m` codes encoding `F_{q^k}`
//! into `F_q^n` with a linear `Dec` such that
//! `z_1 ⋯ z_m = Dec(Enc^(1)(z_1) ∗ ⋯ ∗ Enc^(m)(z_m))`.
//!
//! `F_{q^k}` is identified with `F_q^k` through the polynomial basis of the
//! tower, so logical coordinate `i` of every member is `X^i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certificate::{Certificate, Claim, Mode, VerifyMode};
use crate::classical::{all_points, rs_code, star, vandermonde, LinearCode};
use crate::css::CssCode;
use crate::enumerate::search_size;
use crate::error::{constraint, dim, Error, Result};
use crate::flinalg::Mat;
use crate::gf::{poly, Field, Tower};
use crate::transversal::split_code;

/// Default cap on the length `q^{m(k−1)}` of Reed-Muller based collections.
pub const DEFAULT_RM_MAX_LEN: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MfKind {
    Classical,
    Quantum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Members {
    /// Codes with designated encoders (row `i` is `Enc(X^i)`).
    Classical(Vec<LinearCode>),
    /// CSS codes whose Z-encoder row `i` represents `Enc_Z(X^i)`.
    Quantum(Vec<CssCode>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MfCollection {
    tower: Tower,
    members: Members,
    /// `k × n`; column `j` holds the coordinates of `Dec(e_j)`.
    dec: Mat,
    /// Certified lower bound on every member's distance.
    d_bound: u64,
}

impl MfCollection {
    /// Checks shapes only; the multiplication identity is checked by [`verify_mf`].
    pub fn new(tower: Tower, members: Members, dec: Mat) -> Result<MfCollection> {
        let f = tower.base();
        let k = tower.k();
        let shapes: Vec<(usize, usize, &Field)> = match &members {
            Members::Classical(cs) => {
                let mut v = Vec::new();
                for c in cs {
                    if c.encoder().is_none() {
                        return Err(Error::InvalidCode(
                            "classical member without an encoder".into(),
                        ));
                    }
                    v.push((c.n(), c.k(), c.field()));
                }
                v
            }
            Members::Quantum(qs) => qs.iter().map(|q| (q.n(), q.k(), q.field())).collect(),
        };
        if shapes.is_empty() {
            return Err(Error::InvalidCode("empty collection".into()));
        }
        let n = shapes[0].0;
        for &(nn, kk, ff) in &shapes {
            if ff != f {
                return Err(Error::FieldMismatch("member outside the tower base".into()));
            }
            if nn != n || kk != k {
                return Err(dim(format!(
                    "member of shape [{nn},{kk}] in a collection of [{n},{k}] codes"
                )));
            }
        }
        if dec.field() != f || dec.rows() != k || dec.cols() != n {
            return Err(dim(format!(
                "Dec must be {k}x{n} over {f}, got {}x{}",
                dec.rows(),
                dec.cols()
            )));
        }
        Ok(MfCollection {
            tower,
            members,
            dec,
            d_bound: 1,
        })
    }

    pub fn m(&self) -> usize {
        match &self.members {
            Members::Classical(c) => c.len(),
            Members::Quantum(q) => q.len(),
        }
    }

    pub fn n(&self) -> usize {
        self.dec.cols()
    }

    pub fn k(&self) -> usize {
        self.tower.k()
    }

    pub fn field(&self) -> &Field {
        self.tower.base()
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn members(&self) -> &Members {
        &self.members
    }

    pub fn dec(&self) -> &Mat {
        &self.dec
    }

    pub fn kind(&self) -> MfKind {
        match self.members {
            Members::Classical(_) => MfKind::Classical,
            Members::Quantum(_) => MfKind::Quantum,
        }
    }

    /// Whether all members are the same code with the same encoder.
    pub fn shared(&self) -> bool {
        match &self.members {
            Members::Classical(c) => c.windows(2).all(|w| w[0] == w[1]),
            Members::Quantum(q) => q.windows(2).all(|w| w[0] == w[1]),
        }
    }

    /// Member `h` as a CSS code (`CSS(F_q^n, C)` for classical members).
    pub fn member_css(&self, h: usize) -> Result<CssCode> {
        match &self.members {
            Members::Classical(c) => CssCode::from_classical(c[h].encoder().unwrap()),
            Members::Quantum(q) => Ok(q[h].clone()),
        }
    }

    /// Canonical encoding of `z` (coordinates in the polynomial basis).
    pub fn encode(&self, h: usize, z: &[u32]) -> Result<Vec<u32>> {
        match &self.members {
            Members::Classical(c) => c[h].encoder().unwrap().vec_mul(z),
            Members::Quantum(q) => q[h].encode_z(z),
        }
    }

    fn encoder_rows(&self, h: usize) -> &Mat {
        match &self.members {
            Members::Classical(c) => c[h].encoder().unwrap(),
            Members::Quantum(q) => q[h].encz(),
        }
    }

    fn x_stab(&self, h: usize) -> Option<&Mat> {
        match &self.members {
            Members::Classical(_) => None,
            Members::Quantum(q) => Some(q[h].x_stab()),
        }
    }

    /// `Dec(v)` as an element of `F_{q^k}`.
    pub fn decode(&self, v: &[u32]) -> Result<u32> {
        let coords = self.dec.mul_vec(v)?;
        self.tower.unflatten(&coords)
    }

    /// The same members with all members replaced by member `h`, keeping `Dec`.
    pub fn with_shared_member(&self, h: usize) -> MfCollection {
        let members = match &self.members {
            Members::Classical(c) => Members::Classical(vec![c[h].clone(); c.len()]),
            Members::Quantum(q) => Members::Quantum(vec![q[h].clone(); q.len()]),
        };
        MfCollection {
            tower: self.tower.clone(),
            members,
            dec: self.dec.clone(),
            d_bound: self.d_bound,
        }
    }

    pub fn with_dec(&self, dec: Mat) -> Result<MfCollection> {
        Ok(MfCollection::new(self.tower.clone(), self.members.clone(), dec)?
            .with_distance_bound(self.d_bound))
    }

    pub fn distance_bound(&self) -> u64 {
        self.d_bound
    }

    pub fn with_distance_bound(mut self, d: u64) -> MfCollection {
        self.d_bound = d.max(1);
        self
    }

    pub fn params(&self) -> String {
        let kind = match self.kind() {
            MfKind::Classical => format!("[{},{}]", self.n(), self.k()),
            MfKind::Quantum => format!("[[{},{}]]", self.n(), self.k()),
        };
        format!("{}-MF {}_{}", self.m(), kind, self.field().order())
    }
}

/// Coordinates of `g mod γ` in the polynomial basis.
fn reduce_to_ext(tower: &Tower, g: &[u32]) -> Vec<u32> {
    let f = tower.base();
    let mut r = poly::rem(f, g, &tower.gamma());
    r.resize(tower.k(), 0);
    r
}

fn mat_from_cols(f: &Field, rows: usize, cols: Vec<Vec<u32>>) -> Mat {
    let n = cols.len();
    let mut m = Mat::zeros(f, rows, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    m
}

/// Reed-Solomon based collection: `Enc(f) = ev_A(f)` on the first `n` points,
/// `Dec` interpolates through `A` and reduces mod γ.
pub fn mf_rs(field: &Field, n: usize, k: usize, m: usize) -> Result<MfCollection> {
    if k < 1 {
        return Err(constraint("k ≥ 1"));
    }
    if m * (k - 1) >= n {
        return Err(constraint("m(k−1) < n"));
    }
    if n as u64 > field.order() {
        return Err(constraint("n ≤ q"));
    }
    let tower = Tower::new(field, k)?;
    let points: Vec<u32> = all_points(field)[..n].to_vec();
    let code = rs_code(field, &points, k)?;
    let cols = (0..n)
        .map(|j| reduce_to_ext(&tower, &poly::lagrange_basis(field, &points, j)))
        .collect();
    let dec = mat_from_cols(field, k, cols);
    MfCollection::new(tower, Members::Classical(vec![code; m]), dec)
}

/// Digits of point `p` of `F_q^N` in lexicographic order (coordinate 0 most
/// significant).
fn point(p: u64, q: u64, nvars: usize) -> Vec<u32> {
    let mut x = vec![0u32; nvars];
    let mut r = p;
    for v in (0..nvars).rev() {
        x[v] = (r % q) as u32;
        r /= q;
    }
    x
}

/// Reed-Muller based collection of `m` distinct `[q^{m(k−1)}, k]_q` codes.
///
/// Variable `X_{h,j}` (`h < m`, `1 ≤ j < k`) has index `h(k−1) + j − 1`.
/// Member `h` evaluates `f_0 + Σ_j f_j X_{h,j}`; `Dec(e_x)` is the indicator
/// polynomial of `x` reduced modulo `(γ(X_{1,1}), X_{h,j} − X_{1,1}^j)`.
pub fn mf_rm(field: &Field, k: usize, m: usize) -> Result<MfCollection> {
    mf_rm_with_max_len(field, k, m, DEFAULT_RM_MAX_LEN)
}

pub fn mf_rm_with_max_len(field: &Field, k: usize, m: usize, max_len: u64) -> Result<MfCollection> {
    if k < 1 {
        return Err(constraint("k ≥ 1"));
    }
    if m < 1 {
        return Err(constraint("m ≥ 1"));
    }
    let q = field.order();
    let nvars = m * (k - 1);
    let len = search_size(q, nvars);
    if len > max_len as u128 {
        return Err(Error::BudgetExceeded {
            needed: len,
            budget: max_len,
        });
    }
    let n = len as usize;
    let tower = Tower::new(field, k)?;
    let ext = tower.ext().clone();
    let points: Vec<Vec<u32>> = (0..n as u64).map(|p| point(p, q, nvars)).collect();

    let mut members = Vec::with_capacity(m);
    for h in 0..m {
        let mut enc = Mat::zeros(field, k, n);
        for (p, x) in points.iter().enumerate() {
            enc.set(0, p, 1);
            for j in 1..k {
                enc.set(j, p, x[h * (k - 1) + j - 1]);
            }
        }
        members.push(LinearCode::new(enc.clone())?.with_encoder(enc)?);
    }

    let powers: Vec<u32> = (0..k).map(|j| ext.pow(tower.basis(1.min(k - 1)), j as u64)).collect();
    let cols = points
        .par_iter()
        .map(|x| {
            let mut acc = 1u32;
            for (v, &xv) in x.iter().enumerate() {
                let j = v % (k - 1) + 1;
                let t = ext.sub(powers[j], xv);
                acc = ext.mul(acc, ext.sub(1, ext.pow(t, q - 1)));
            }
            tower.flatten_unchecked(acc)
        })
        .collect();
    let dec = mat_from_cols(field, k, cols);
    MfCollection::new(tower, Members::Classical(members), dec)
}

/// Column permutation `π` with `member_{(h+shift) mod m}[:, π(p)] = member_h[:, p]`
/// for [`mf_rm`] collections: point `x` maps to the point whose variable block
/// `h + shift` holds block `h` of `x`.
pub fn rm_cyclic_permutation(q: u64, k: usize, m: usize, shift: usize) -> Vec<usize> {
    let nvars = m * (k - 1);
    let n = q.pow(nvars as u32);
    (0..n)
        .map(|p| {
            let x = point(p, q, nvars);
            let mut y = vec![0u32; nvars];
            for h in 0..m {
                let g = (h + shift) % m;
                for j in 0..k - 1 {
                    y[g * (k - 1) + j] = x[h * (k - 1) + j];
                }
            }
            y.iter().fold(0u64, |acc, &d| acc * q + d as u64) as usize
        })
        .collect()
}

/// Lift of a classical collection: `Q^(h) = CSS(F_q^n, C^(h))`, same `Dec`.
pub fn lift_classical(mf: &MfCollection) -> Result<MfCollection> {
    let Members::Classical(cs) = &mf.members else {
        return Err(Error::InvalidCode("collection is already quantum".into()));
    };
    let qs = cs
        .iter()
        .map(|c| CssCode::from_classical(c.encoder().unwrap()))
        .collect::<Result<Vec<_>>>()?;
    Ok(MfCollection::new(mf.tower.clone(), Members::Quantum(qs), mf.dec.clone())?
        .with_distance_bound(mf.d_bound))
}

/// Quantum collection with distance `≥ ℓ+1−r`: the Reed-Solomon split code on
/// `A` = the first `r` points, restricted to `ev_A(F_q[X]^{<k})`.
pub fn mf_quantum(field: &Field, k: usize, r: usize, l: usize, m: usize) -> Result<MfCollection> {
    let q = field.order() as usize;
    if k < 1 {
        return Err(constraint("k ≥ 1"));
    }
    if k > r {
        return Err(constraint("k ≤ r"));
    }
    if r > l {
        return Err(constraint("r ≤ ℓ"));
    }
    if r >= q {
        return Err(constraint("r < q"));
    }
    let n = q - r;
    if m * (l - 1) >= n {
        return Err(constraint("m(ℓ−1) < n"));
    }
    if m * (k - 1) >= r {
        return Err(constraint("m(k−1) < r"));
    }
    if 2 * l > q {
        return Err(constraint("ℓ ≤ q/2"));
    }
    let tower = Tower::new(field, k)?;
    let pts = all_points(field);
    let a_pts = &pts[..r];
    let rest_pts = &pts[r..];
    let c = rs_code(field, &pts, l)?;
    let a_set: Vec<usize> = (0..r).collect();
    let rest: Vec<usize> = (r..q).collect();
    let full = split_code(&c, &a_set, &rest)?;
    let s = vandermonde(field, a_pts, k);
    let code = full.restrict(&s)?;

    let cols = (0..n)
        .map(|j| {
            let fj = poly::lagrange_basis(field, rest_pts, j);
            let on_a: Vec<u32> = a_pts.iter().map(|&a| poly::eval(field, &fj, a)).collect();
            let g = poly::interpolate(field, a_pts, &on_a);
            reduce_to_ext(&tower, &g)
        })
        .collect();
    let dec = mat_from_cols(field, k, cols);
    Ok(MfCollection::new(tower, Members::Quantum(vec![code; m]), dec)?
        .with_distance_bound((l + 1 - r) as u64))
}

/// Solves for a `Dec` satisfying the identity on all basis tuples with
/// canonical representatives. `None` means no linear `Dec` exists for these
/// encoders.
pub fn fit_dec(mf: &MfCollection) -> Result<Option<Mat>> {
    let f = mf.field().clone();
    let (k, n, m) = (mf.k(), mf.n(), mf.m());
    let mut rows = Mat::empty(&f, n);
    let mut targets: Vec<Vec<u32>> = vec![Vec::new(); k];
    for idx in 0..k.pow(m as u32) {
        let t = tuple(idx, k, m);
        rows.push_row(&mf.star_of_basis(&t))?;
        let prod = mf.basis_product(&t);
        for (i, tv) in targets.iter_mut().enumerate() {
            tv.push(prod[i]);
        }
    }
    let mut dec = Mat::zeros(&f, k, n);
    for (i, tv) in targets.iter().enumerate() {
        match rows.solve(tv)? {
            Some(x) => dec.row_mut(i).copy_from_slice(&x),
            None => return Ok(None),
        }
    }
    Ok(Some(dec))
}

fn tuple(mut idx: usize, k: usize, m: usize) -> Vec<usize> {
    (0..m)
        .map(|_| {
            let d = idx % k;
            idx /= k;
            d
        })
        .collect()
}

impl MfCollection {
    fn star_of_basis(&self, t: &[usize]) -> Vec<u32> {
        let f = self.field();
        let mut acc = self.encoder_rows(0).row(t[0]).to_vec();
        for (h, &i) in t.iter().enumerate().skip(1) {
            acc = star(f, &acc, self.encoder_rows(h).row(i));
        }
        acc
    }

    fn basis_product(&self, t: &[usize]) -> Vec<u32> {
        let ext = self.tower.ext();
        let prod = t
            .iter()
            .fold(1u32, |acc, &i| ext.mul(acc, self.tower.basis(i)));
        self.tower.flatten_unchecked(prod)
    }
}

/// Verifies the multiplication identity for all inputs (and, for quantum
/// collections, all representatives).
pub fn verify_mf(mf: &MfCollection, mode: VerifyMode) -> Result<Certificate> {
    let mut cert = match mode {
        VerifyMode::Deterministic { limit } => verify_mf_deterministic(mf, limit)?,
        VerifyMode::Randomized { samples, seed } => verify_mf_randomized(mf, samples, seed)?,
    };
    cert.claims.push(Claim::exact("n", mf.n() as u64, "length"));
    cert.claims.push(Claim::exact("k", mf.k() as u64, "tower degree"));
    cert.claims.push(Claim::exact("m", mf.m() as u64, "collection size"));
    cert.claims.push(Claim::bound("d", mf.d_bound, "construction"));
    Ok(cert)
}

fn spanning_rows(mf: &MfCollection, h: usize) -> Mat {
    match mf.x_stab(h) {
        Some(s) => mf.encoder_rows(h).vstack(s).unwrap(),
        None => mf.encoder_rows(h).clone(),
    }
}

/// Estimated field operations of the deterministic check.
pub fn mf_deterministic_cost(mf: &MfCollection) -> u128 {
    let (k, n, m) = (mf.k() as u128, mf.n() as u128, mf.m() as u32);
    let mut count = k.pow(m);
    if mf.kind() == MfKind::Quantum {
        let spans: Vec<u128> = (0..mf.m()).map(|h| spanning_rows(mf, h).rows() as u128).collect();
        for h in 0..mf.m() {
            let g = mf.x_stab(h).map_or(0, |s| s.rows()) as u128;
            let others: u128 = (0..mf.m()).filter(|&o| o != h).map(|o| spans[o]).product();
            count += g * others;
        }
    }
    count * n * (m as u128 + k)
}

fn verify_mf_deterministic(mf: &MfCollection, limit: u128) -> Result<Certificate> {
    let estimate = mf_deterministic_cost(mf);
    if estimate > limit {
        return Err(Error::Infeasible { estimate, limit });
    }
    let f = mf.field().clone();
    let (k, m) = (mf.k(), mf.m());
    let mut cert = Certificate::new("mf", Mode::Deterministic);
    cert.limit = Some(limit);
    let total = k.pow(m as u32);
    let bad = (0..total).into_par_iter().find_map_any(|idx| {
        let t = tuple(idx, k, m);
        let got = mf.dec.mul_vec(&mf.star_of_basis(&t)).unwrap();
        let want = mf.basis_product(&t);
        (got != want).then(|| {
            format!(
                "basis tuple {:?}: Dec gives {got:?}, product is {want:?}",
                t.iter().map(|i| i + 1).collect::<Vec<_>>()
            )
        })
    });
    cert.record("basis identity", total as u64);
    if let Some(msg) = bad {
        cert.fail(msg);
        return Ok(cert);
    }
    if mf.kind() == MfKind::Quantum {
        let spans: Vec<Mat> = (0..m).map(|h| spanning_rows(mf, h)).collect();
        let mut count = 0u64;
        for h in 0..m {
            let stabs = mf.x_stab(h).unwrap();
            if stabs.rows() == 0 {
                continue;
            }
            let others: Vec<usize> = (0..m).filter(|&o| o != h).collect();
            let sizes: Vec<usize> = others.iter().map(|&o| spans[o].rows()).collect();
            let combos: usize = sizes.iter().product();
            let jobs = stabs.rows() * combos;
            count += jobs as u64;
            let bad = (0..jobs).into_par_iter().find_map_any(|job| {
                let g = job / combos;
                let mut rest = job % combos;
                let mut acc = stabs.row(g).to_vec();
                for (o, &sz) in others.iter().zip(&sizes) {
                    acc = star(&f, &acc, spans[*o].row(rest % sz));
                    rest /= sz;
                }
                let d = mf.dec.mul_vec(&acc).unwrap();
                d.iter().any(|&x| x != 0).then(|| {
                    format!("slot {}: X-stabilizer {g} does not decode to zero", h + 1)
                })
            });
            if let Some(msg) = bad {
                cert.record("representative independence", count);
                cert.fail(msg);
                return Ok(cert);
            }
        }
        cert.record("representative independence", count);
    }
    Ok(cert)
}

fn sample_rep(mf: &MfCollection, h: usize, z: &[u32], rng: &mut ChaCha8Rng) -> Vec<u32> {
    let f = mf.field();
    let q = f.order() as u32;
    let mut v = mf.encode(h, z).unwrap();
    if let Some(s) = mf.x_stab(h) {
        for g in s.row_iter() {
            f.axpy(&mut v, rng.gen_range(0..q), g);
        }
    }
    v
}

fn verify_mf_randomized(mf: &MfCollection, samples: u64, seed: u64) -> Result<Certificate> {
    let f = mf.field().clone();
    let q = f.order() as u32;
    let ext = mf.tower.ext().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cert = Certificate::new("mf", Mode::Randomized);
    cert.samples = Some(samples);
    cert.seed = Some(seed);
    let mut done = 0;
    for s in 0..samples {
        let mut prod = 1u32;
        let mut acc: Option<Vec<u32>> = None;
        for h in 0..mf.m() {
            let z: Vec<u32> = (0..mf.k()).map(|_| rng.gen_range(0..q)).collect();
            prod = ext.mul(prod, mf.tower.unflatten_unchecked(&z));
            let v = sample_rep(mf, h, &z, &mut rng);
            acc = Some(match acc {
                None => v,
                Some(a) => star(&f, &a, &v),
            });
        }
        done += 1;
        let got = mf.decode(&acc.unwrap())?;
        if got != prod {
            cert.fail(format!("sample {s}: Dec gives {got}, product is {prod}"));
            break;
        }
    }
    cert.record("sampled identity", done);
    Ok(cert)
}

/// Literal check over all `m`-tuples of inputs and all representatives.
pub fn verify_mf_exhaustive_oracle(mf: &MfCollection, budget: u64) -> Result<bool> {
    let f = mf.field().clone();
    let q = f.order();
    let ext = mf.tower.ext().clone();
    let per: Vec<Vec<(u32, Vec<u32>)>> = (0..mf.m())
        .map(|h| {
            let s = mf.x_stab(h).map_or(0, |s| s.rows());
            let sz = search_size(q, mf.k() + s);
            if sz.saturating_mul(mf.m() as u128) > budget as u128 {
                return Err(Error::BudgetExceeded { needed: sz, budget });
            }
            let basis = spanning_rows(mf, h);
            Ok((0..sz as u64)
                .map(|i| {
                    let c = point(i, q, mf.k() + s);
                    let z = mf.tower.unflatten_unchecked(&c[..mf.k()]);
                    (z, basis.vec_mul(&c).unwrap())
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let total: u128 = per.iter().map(|p| p.len() as u128).product();
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget,
        });
    }
    let mut idx = vec![0usize; mf.m()];
    loop {
        let mut prod = 1u32;
        let mut acc = vec![1u32; mf.n()];
        for (h, &i) in idx.iter().enumerate() {
            let (z, v) = &per[h][i];
            prod = ext.mul(prod, *z);
            acc = star(&f, &acc, v);
        }
        if mf.decode(&acc)? != prod {
            return Ok(false);
        }
        let mut h = 0;
        loop {
            if h == idx.len() {
                return Ok(true);
            }
            idx[h] += 1;
            if idx[h] < per[h].len() {
                break;
            }
            idx[h] = 0;
            h += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::DEFAULT_BUDGET;

    fn fq(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn rs_collection_passes_with_basis_count() {
        let mf = mf_rs(&fq(5), 5, 2, 4).unwrap();
        assert_eq!((mf.n(), mf.k(), mf.m()), (5, 2, 4));
        assert!(mf.shared());
        let c = verify_mf(&mf, VerifyMode::deterministic()).unwrap();
        assert!(c.passed, "{c:?}");
        assert_eq!(c.checks[0].count, 16);
        let one = mf.encode(0, &[1, 0]).unwrap();
        let mut acc = one.clone();
        for _ in 0..3 {
            acc = star(mf.field(), &acc, &one);
        }
        assert_eq!(mf.decode(&acc).unwrap(), 1);
    }

    #[test]
    fn rs_product_matches_extension_arithmetic() {
        let mf = mf_rs(&fq(5), 5, 2, 4).unwrap();
        let ext = mf.tower().ext().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let zs: Vec<u32> = (0..4).map(|_| rng.gen_range(0..25)).collect();
            let prod = zs.iter().fold(1, |a, &z| ext.mul(a, z));
            let mut acc = vec![1u32; 5];
            for (h, &z) in zs.iter().enumerate() {
                let v = mf.encode(h, &mf.tower().flatten(z).unwrap()).unwrap();
                acc = star(mf.field(), &acc, &v);
            }
            assert_eq!(mf.decode(&acc).unwrap(), prod);
        }
    }

    #[test]
    fn rs_constraints() {
        assert_eq!(
            mf_rs(&fq(5), 4, 2, 4).unwrap_err().to_string(),
            "m(k−1) < n violated"
        );
        assert!(mf_rs(&fq(5), 6, 2, 4).is_err());
    }

    #[test]
    fn rm_binary_exhaustive() {
        let mf = mf_rm(&fq(2), 2, 4).unwrap();
        assert_eq!((mf.n(), mf.k(), mf.m()), (16, 2, 4));
        assert!(!mf.shared());
        assert!(verify_mf(&mf, VerifyMode::deterministic()).unwrap().passed);
        let ext = mf.tower().ext().clone();
        let mut count = 0;
        for idx in 0..256u32 {
            let zs: Vec<u32> = (0..4).map(|h| (idx >> (2 * h)) & 3).collect();
            let prod = zs.iter().fold(1, |a, &z| ext.mul(a, z));
            let mut acc = vec![1u32; 16];
            for (h, &z) in zs.iter().enumerate() {
                let v = mf.encode(h, &mf.tower().flatten(z).unwrap()).unwrap();
                acc = star(mf.field(), &acc, &v);
            }
            assert_eq!(mf.decode(&acc).unwrap(), prod);
            count += 1;
        }
        assert_eq!(count, 256);
    }

    #[test]
    fn rm_repetition_when_k_is_one() {
        let mf = mf_rm(&fq(3), 1, 4).unwrap();
        assert_eq!((mf.n(), mf.k()), (1, 1));
        assert!(verify_mf(&mf, VerifyMode::deterministic()).unwrap().passed);
    }

    #[test]
    fn rm_zeroed_dec_column_fails() {
        let mf = mf_rm(&fq(2), 2, 4).unwrap();
        let mut dec = mf.dec().clone();
        let j = (0..16).find(|&j| dec.col(j).iter().any(|&x| x != 0)).unwrap();
        for i in 0..2 {
            dec.set(i, j, 0);
        }
        let bad = mf.with_dec(dec).unwrap();
        assert!(!verify_mf(&bad, VerifyMode::deterministic()).unwrap().passed);
    }

    #[test]
    fn rm_shared_member_is_impossible_over_f2() {
        let mf = mf_rm(&fq(2), 2, 4).unwrap();
        let shared = mf.with_shared_member(0);
        assert!(!verify_mf(&shared, VerifyMode::deterministic()).unwrap().passed);
        // No linear Dec at all exists for the shared encoders.
        assert_eq!(fit_dec(&shared).unwrap(), None);
        assert!(fit_dec(&mf).unwrap().is_some());
    }

    #[test]
    fn rm_members_are_cyclic_shifts() {
        let (q, k, m) = (2u64, 2usize, 4usize);
        let mf = mf_rm(&fq(q), k, m).unwrap();
        let Members::Classical(cs) = mf.members() else { unreachable!() };
        for shift in 1..m {
            let pi = rm_cyclic_permutation(q, k, m, shift);
            for h in 0..m {
                let a = cs[h].encoder().unwrap();
                let b = cs[(h + shift) % m].encoder().unwrap();
                for p in 0..pi.len() {
                    assert_eq!(a.col(p), b.col(pi[p]));
                }
            }
        }
    }

    #[test]
    fn lift_keeps_identity() {
        let mf = lift_classical(&mf_rs(&fq(5), 5, 2, 4).unwrap()).unwrap();
        assert_eq!(mf.kind(), MfKind::Quantum);
        let Members::Quantum(qs) = mf.members() else { unreachable!() };
        assert_eq!(qs[0].x_stab().rows(), 0);
        assert_eq!(qs[0].distance_bruteforce(DEFAULT_BUDGET).unwrap(), 1);
        assert!(verify_mf(&mf, VerifyMode::deterministic()).unwrap().passed);
        assert!(verify_mf_exhaustive_oracle(&mf, 1 << 20).unwrap());
    }

    #[test]
    fn quantum_collection_over_f8() {
        let mf = mf_quantum(&fq(8), 1, 1, 2, 4).unwrap();
        assert_eq!((mf.n(), mf.k()), (7, 1));
        let c = verify_mf(&mf, VerifyMode::deterministic()).unwrap();
        assert!(c.passed, "{c:?}");
        assert!(c.checks.iter().any(|c| c.name == "representative independence" && c.count > 0));
        let code = mf.member_css(0).unwrap();
        assert_eq!(code.distance_bruteforce(DEFAULT_BUDGET).unwrap(), 2);
        assert!(verify_mf_exhaustive_oracle(&mf, 1 << 25).unwrap());
        assert!(verify_mf(&mf, VerifyMode::randomized(300, 1)).unwrap().passed);
        assert_eq!(
            mf_quantum(&fq(8), 2, 5, 7, 4).unwrap_err().to_string(),
            "m(ℓ−1) < n violated"
        );
    }

    #[test]
    fn quantum_collection_with_larger_k() {
        let mf = mf_quantum(&fq(16), 2, 5, 5, 4).unwrap_err();
        assert_eq!(mf.to_string(), "m(ℓ−1) < n violated");
        let mf = mf_quantum(&fq(32), 2, 5, 6, 4).unwrap();
        assert!(verify_mf(&mf, VerifyMode::deterministic()).unwrap().passed);
    }

    #[test]
    fn perturbed_stabilizer_side_is_caught() {
        let mf = mf_quantum(&fq(8), 1, 1, 2, 4).unwrap();
        let mut dec = mf.dec().clone();
        let v = dec.get(0, 0);
        dec.set(0, 0, mf.field().add(v, 1));
        let bad = mf.with_dec(dec).unwrap();
        assert!(!verify_mf(&bad, VerifyMode::deterministic()).unwrap().passed);
        assert!(!verify_mf_exhaustive_oracle(&bad, 1 << 25).unwrap());
    }
}
