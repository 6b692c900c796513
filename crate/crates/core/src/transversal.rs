//! Triples of CSS codes supporting a transversal CCZ gate: construction from a
//! classical code, the Reed-Solomon instance, and verification of the phase
//! identity
//!
//! `Σ_{i<k} z_i^(1) z_i^(2) z_i^(3) = Σ_{j<n} b_j z'^(1)_j z'^(2)_j z'^(3)_j`
//!
//! for all logical `z^(h)` and all representatives `z'^(h) ∈ Enc_Z^(h)(z^(h))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certificate::{Certificate, Claim, Mode, VerifyMode};
use crate::classical::{all_points, rs_code, star_product_span, LinearCode};
use crate::css::CssCode;
use crate::enumerate::{self, search_size};
use crate::error::{constraint, dim, Error, Result};
use crate::flinalg::{self, Mat};
use crate::gf::Field;

/// Three CSS codes of equal length and dimension with a coefficients vector `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalTriple {
    codes: [CssCode; 3],
    b: Vec<u32>,
    same_code: bool,
    distance: Option<Claim>,
}

impl TransversalTriple {
    pub fn new(codes: [CssCode; 3], b: Vec<u32>, distance: Option<Claim>) -> Result<Self> {
        let f = codes[0].field().clone();
        let (n, k) = (codes[0].n(), codes[0].k());
        for c in &codes[1..] {
            if c.field() != &f {
                return Err(Error::FieldMismatch("codes of a triple".into()));
            }
            if c.n() != n || c.k() != k {
                return Err(dim(format!(
                    "triple members [[{},{}]] and [[{n},{k}]] differ",
                    c.n(),
                    c.k()
                )));
            }
        }
        if b.len() != n {
            return Err(dim(format!("coefficients vector of length {} for n = {n}", b.len())));
        }
        for &x in &b {
            f.check(x)?;
        }
        let same_code = codes[0] == codes[1] && codes[1] == codes[2];
        Ok(TransversalTriple {
            codes,
            b,
            same_code,
            distance,
        })
    }

    /// A triple whose three members are the same code.
    pub fn same(code: CssCode, b: Vec<u32>, distance: Option<Claim>) -> Result<Self> {
        TransversalTriple::new([code.clone(), code.clone(), code], b, distance)
    }

    pub fn codes(&self) -> &[CssCode; 3] {
        &self.codes
    }

    pub fn code(&self, h: usize) -> &CssCode {
        &self.codes[h]
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    pub fn same_code(&self) -> bool {
        self.same_code
    }

    pub fn field(&self) -> &Field {
        self.codes[0].field()
    }

    pub fn n(&self) -> usize {
        self.codes[0].n()
    }

    pub fn k(&self) -> usize {
        self.codes[0].k()
    }

    pub fn distance(&self) -> Option<&Claim> {
        self.distance.as_ref()
    }

    pub fn with_distance(mut self, claim: Option<Claim>) -> Self {
        self.distance = claim;
        self
    }

    /// Same codes with a different coefficients vector.
    pub fn with_b(&self, b: Vec<u32>) -> Result<Self> {
        TransversalTriple::new(self.codes.clone(), b, self.distance.clone())
    }

    /// Replaces the member codes (for example to attach X-encoders), keeping `b`.
    pub fn map_codes(&self, f: impl Fn(&CssCode) -> Result<CssCode>) -> Result<Self> {
        let codes = [f(&self.codes[0])?, f(&self.codes[1])?, f(&self.codes[2])?];
        TransversalTriple::new(codes, self.b.clone(), self.distance.clone())
    }

    pub fn params(&self) -> String {
        let d = match &self.distance {
            Some(c) if c.kind == crate::certificate::ClaimKind::Exact => format!(",{}", c.value),
            Some(c) => format!(",≥{}", c.value),
            None => String::new(),
        };
        format!("[[{},{}{}]]_{}", self.n(), self.k(), d, self.field().order())
    }
}

/// Caller-supplied certified lower bounds used when exact enumeration is too
/// expensive: `d(C)`, `d(C^{*3})`, `d(C⊥)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DistanceBounds {
    pub d: Option<usize>,
    pub d_star: Option<usize>,
    pub d_dual: Option<usize>,
}

fn distance_or_bound(
    c: &LinearCode,
    name: &str,
    bound: Option<usize>,
    budget: u64,
) -> Result<usize> {
    if let Some(b) = bound {
        return Ok(b);
    }
    let needed = search_size(c.field().order(), c.k());
    if needed > budget as u128 {
        return Err(Error::Constraint(format!(
            "{name} cannot be certified: enumeration needs {needed} vectors (budget {budget}) and no bound was supplied; k < {name}"
        )));
    }
    c.distance_bruteforce(budget)
}

/// Quantum code `CSS(C⊥|_{A^c}, C|_{A^c})` with `Enc_Z(z) = {c|_{A^c} : c|_A = z}`
/// and the coefficients vector recovered from `C^{*3}`.
///
/// Requires `C|_A = F_q^A` and `k = |A| < min{ℓ, d, d′, d⊥}`. Distances are
/// enumerated within `budget` unless bounds are supplied.
pub fn build_from_classical(
    c: &LinearCode,
    a_set: &[usize],
    bounds: DistanceBounds,
    budget: u64,
) -> Result<TransversalTriple> {
    let f = c.field().clone();
    let n = c.n();
    let k = a_set.len();
    if k == 0 {
        return Err(constraint("|A| ≥ 1"));
    }
    let mut in_a = vec![false; n];
    for &a in a_set {
        if a >= n {
            return Err(Error::IndexOutOfRange { index: a, len: n });
        }
        if in_a[a] {
            return Err(Error::InvalidCode(format!("repeated index {a} in A")));
        }
        in_a[a] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| !in_a[i]).collect();
    let gen = c.gen();
    let ga = gen.select_cols(a_set)?;
    if ga.rank() != k {
        return Err(constraint("C|_A = F_q^A"));
    }
    let l = c.k();
    if k >= l {
        return Err(constraint("k < ℓ"));
    }
    let d = distance_or_bound(c, "d", bounds.d, budget)?;
    if k >= d {
        return Err(constraint("k < d"));
    }
    let dual = c.dual();
    let d_dual = distance_or_bound(&dual, "d⊥", bounds.d_dual, budget)?;
    if k >= d_dual {
        return Err(constraint("k < d⊥"));
    }
    let c3 = star_product_span(c, c, c)?;
    let d_star = distance_or_bound(&c3, "d′", bounds.d_star, budget)?;
    if k >= d_star {
        return Err(constraint("k < d′"));
    }
    // Exact confirmation that the restrictions to A^c are injective.
    let c3_rest = c3.gen().select_cols(&rest)?;
    if c3_rest.rank() != c3.k() || gen.select_cols(&rest)?.rank() != l {
        return Err(constraint("k < d′"));
    }

    let code = split_code(c, a_set, &rest)?;
    // b: the functional c|_{A^c} ↦ Σ_{j∈A} c_j on C^{*3}|_{A^c}, zero on the
    // coordinates that are not pivots of its RREF basis.
    let sums: Vec<u32> = (0..c3.k())
        .map(|i| f.sum(a_set.iter().map(|&j| c3.gen().get(i, j))))
        .collect();
    let aug = c3_rest
        .hstack(&Mat::from_flat(&f, c3.k(), 1, sums))?
        .rref();
    let width = rest.len();
    let mut b = vec![0u32; width];
    for (i, &p) in aug.pivots.iter().enumerate() {
        debug_assert!(p < width);
        b[p] = aug.mat.get(i, width);
    }

    let claim = Claim::bound("d", (d.min(d_dual) - k) as u64, "min(d, d⊥) − k");
    TransversalTriple::same(code, b, Some(claim))
}

/// The Reed-Solomon instance: `C = ev_{F_q}(F_q[X]^{<ℓ})`, `A` the `k` largest
/// points, giving `[[q−k, k, ℓ+1−k]]_q`.
pub fn rs_transversal(field: &Field, k: usize, l: usize) -> Result<TransversalTriple> {
    let q = field.order() as usize;
    if k < 1 {
        return Err(constraint("k ≥ 1"));
    }
    if k >= l {
        return Err(constraint("k < ℓ"));
    }
    if 2 * l > q {
        return Err(constraint("ℓ ≤ q/2"));
    }
    let n = q - k;
    if 3 * (l - 1) >= n {
        return Err(constraint("3(ℓ−1) < n"));
    }
    let pts = all_points(field);
    let c = rs_code(field, &pts, l)?;
    let a_set: Vec<usize> = (q - k..q).collect();
    let bounds = DistanceBounds {
        d: Some(q - l + 1),
        d_star: Some(q - 3 * (l - 1)),
        d_dual: Some(l + 1),
    };
    let t = build_from_classical(&c, &a_set, bounds, enumerate::DEFAULT_BUDGET)?;
    Ok(t.with_distance(Some(Claim::bound(
        "d",
        (l + 1 - k) as u64,
        "Reed-Solomon construction",
    ))))
}

/// `CSS(C⊥|_{A^c}, C|_{A^c})` with `Enc_Z(e_j) = c|_{A^c}` for the codeword with
/// `c|_A = e_j`. `C|_A` must have full rank; `rest` lists `A^c` in order.
pub(crate) fn split_code(c: &LinearCode, a_set: &[usize], rest: &[usize]) -> Result<CssCode> {
    let f = c.field();
    let gen = c.gen();
    let gat = gen.select_cols(a_set)?.transpose();
    let x_stab = flinalg::shorten(gen, a_set)?;
    let qz = gen.select_cols(rest)?;
    let mut encz = Mat::empty(f, rest.len());
    for j in 0..a_set.len() {
        let mut e = vec![0u32; a_set.len()];
        e[j] = 1;
        let m = gat
            .solve(&e)?
            .ok_or_else(|| constraint("C|_A = F_q^A"))?;
        let w = gen.vec_mul(&m)?;
        let wr: Vec<u32> = rest.iter().map(|&i| w[i]).collect();
        encz.push_row(&wr)?;
    }
    CssCode::new(&x_stab, &qz, &encz)
}

/// Σ_j b_j x_j y_j z_j.
fn cubic(f: &Field, b: &[u32], x: &[u32], y: &[u32], z: &[u32]) -> u32 {
    let mut acc = 0u32;
    for j in 0..b.len() {
        if b[j] == 0 || x[j] == 0 || y[j] == 0 || z[j] == 0 {
            continue;
        }
        acc = f.add(acc, f.mul(f.mul(b[j], x[j]), f.mul(y[j], z[j])));
    }
    acc
}

fn spanning_set(code: &CssCode) -> Mat {
    code.encz().vstack(code.x_stab()).expect("same width")
}

/// Estimated field multiply-adds for the deterministic CCZ check.
pub fn deterministic_cost(t: &TransversalTriple) -> u128 {
    let k = t.k() as u128;
    let n = t.n() as u128;
    let span: Vec<u128> = t
        .codes
        .iter()
        .map(|c| (c.k() + c.x_stab().rows()) as u128)
        .collect();
    let mut count = k * k * k;
    for h in 0..3 {
        count += t.codes[h].x_stab().rows() as u128 * span[(h + 1) % 3] * span[(h + 2) % 3];
    }
    count * n
}

/// Checks the phase identity for all logical inputs and all representatives.
pub fn verify_ccz(t: &TransversalTriple, mode: VerifyMode) -> Result<Certificate> {
    let mut cert = match mode {
        VerifyMode::Deterministic { limit } => verify_ccz_deterministic(t, limit)?,
        VerifyMode::Randomized { samples, seed } => verify_ccz_randomized(t, samples, seed)?,
    };
    cert.claims.push(Claim::exact("n", t.n() as u64, "length"));
    cert.claims.push(Claim::exact("k", t.k() as u64, "rank"));
    if let Some(d) = &t.distance {
        cert.claims.push(d.clone());
    }
    Ok(cert)
}

fn verify_ccz_deterministic(t: &TransversalTriple, limit: u128) -> Result<Certificate> {
    let estimate = deterministic_cost(t);
    if estimate > limit {
        return Err(Error::Infeasible { estimate, limit });
    }
    let f = t.field().clone();
    let b = &t.b;
    let k = t.k();
    let mut cert = Certificate::new("ccz", Mode::Deterministic);
    cert.limit = Some(limit);

    // (i) basis identity.
    let reps: Vec<&Mat> = t.codes.iter().map(|c| c.encz()).collect();
    let mut basis_fail = None;
    'outer: for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let got = cubic(&f, b, reps[0].row(i), reps[1].row(j), reps[2].row(l));
                let want = u32::from(i == j && j == l);
                if got != want {
                    basis_fail = Some(format!(
                        "basis triple ({},{},{}): Σ b·z'z'z' = {got}, expected {want}",
                        i + 1,
                        j + 1,
                        l + 1
                    ));
                    break 'outer;
                }
            }
        }
    }
    cert.record("basis identity", (k * k * k) as u64);
    if let Some(msg) = basis_fail {
        cert.fail(msg);
        return Ok(cert);
    }

    // (ii) representative independence.
    let spans: Vec<Mat> = t.codes.iter().map(spanning_set).collect();
    let mut total = 0u64;
    for h in 0..3 {
        let u_span = &spans[(h + 1) % 3];
        let v_span = &spans[(h + 2) % 3];
        let stabs = t.codes[h].x_stab();
        let jobs: Vec<(usize, usize)> = (0..stabs.rows())
            .flat_map(|g| (0..u_span.rows()).map(move |u| (g, u)))
            .collect();
        total += (jobs.len() * v_span.rows()) as u64;
        let bad = jobs.par_iter().find_map_any(|&(g, u)| {
            let bg: Vec<u32> = (0..b.len())
                .map(|j| f.mul(f.mul(b[j], stabs.get(g, j)), u_span.get(u, j)))
                .collect();
            (0..v_span.rows()).find_map(|v| {
                let s = f.dot(&bg, v_span.row(v));
                (s != 0).then(|| {
                    format!(
                        "slot {}: X-stabilizer {} against spanning vectors ({u},{v}) gives {s}",
                        h + 1,
                        g
                    )
                })
            })
        });
        if let Some(msg) = bad {
            cert.record("representative independence", total);
            cert.fail(msg);
            return Ok(cert);
        }
    }
    cert.record("representative independence", total);
    Ok(cert)
}

fn random_vec(rng: &mut ChaCha8Rng, q: u32, len: usize) -> Vec<u32> {
    (0..len).map(|_| rng.gen_range(0..q)).collect()
}

/// Uniform representative of `Enc_Z(z)`.
fn random_rep(code: &CssCode, z: &[u32], rng: &mut ChaCha8Rng) -> Vec<u32> {
    let f = code.field();
    let q = f.order() as u32;
    let mut v = code.encode_z(z).expect("dimension checked");
    for g in code.x_stab().row_iter() {
        let c = rng.gen_range(0..q);
        f.axpy(&mut v, c, g);
    }
    v
}

fn verify_ccz_randomized(t: &TransversalTriple, samples: u64, seed: u64) -> Result<Certificate> {
    let f = t.field().clone();
    let q = f.order() as u32;
    let k = t.k();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cert = Certificate::new("ccz", Mode::Randomized);
    cert.samples = Some(samples);
    cert.seed = Some(seed);
    let mut done = 0u64;
    for s in 0..samples {
        let zs: Vec<Vec<u32>> = (0..3).map(|_| random_vec(&mut rng, q, k)).collect();
        let reps: Vec<Vec<u32>> = (0..3)
            .map(|h| random_rep(&t.codes[h], &zs[h], &mut rng))
            .collect();
        let lhs = f.sum((0..k).map(|i| f.mul(f.mul(zs[0][i], zs[1][i]), zs[2][i])));
        let rhs = cubic(&f, &t.b, &reps[0], &reps[1], &reps[2]);
        done += 1;
        if lhs != rhs {
            cert.fail(format!("sample {s}: logical sum {lhs}, physical sum {rhs}"));
            break;
        }
    }
    cert.record("sampled identity", done);
    Ok(cert)
}

/// Literal check of the phase identity over every logical triple and every
/// representative triple. Used as an independent oracle on tiny instances.
pub fn verify_ccz_exhaustive_oracle(t: &TransversalTriple, budget: u64) -> Result<bool> {
    let f = t.field().clone();
    let q = f.order();
    let k = t.k();
    let stab_dims: usize = t.codes.iter().map(|c| c.x_stab().rows()).sum();
    let needed = search_size(q, 3 * k + stab_dims);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let lists: Vec<Vec<(Vec<u32>, Vec<u32>)>> =
        t.codes.iter().map(|c| all_representatives(c)).collect();
    for (z1, v1) in &lists[0] {
        for (z2, v2) in &lists[1] {
            for (z3, v3) in &lists[2] {
                let lhs = f.sum((0..k).map(|i| f.mul(f.mul(z1[i], z2[i]), z3[i])));
                let mut rhs = 0u32;
                for j in 0..t.n() {
                    let term = f.mul(f.mul(t.b[j], v1[j]), f.mul(v2[j], v3[j]));
                    rhs = f.add(rhs, term);
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Every `(z, z')` with `z ∈ F_q^k` and `z' ∈ Enc_Z(z)`.
fn all_representatives(code: &CssCode) -> Vec<(Vec<u32>, Vec<u32>)> {
    let f = code.field();
    let q = f.order();
    let k = code.k();
    let s = code.x_stab().rows();
    let basis = code.encz().vstack(code.x_stab()).unwrap();
    (0..q.pow((k + s) as u32))
        .map(|i| {
            let mut x = i;
            let coeffs: Vec<u32> = (0..k + s)
                .map(|_| {
                    let d = (x % q) as u32;
                    x /= q;
                    d
                })
                .collect();
            let v = basis.vec_mul(&coeffs).unwrap();
            (coeffs[..k].to_vec(), v)
        })
        .collect()
}

/// Transversal U certificate for a single code: with all three members equal,
/// setting `z^(1) = z^(2) = z^(3)` in a passing CCZ identity gives
/// `Σ z_i³ = Σ b_j z'_j³`. The cubic identity is additionally checked
/// exhaustively when `q^{k + dim Q_X⊥} ≤ budget`.
pub fn derive_u_certificate(
    t: &TransversalTriple,
    ccz: &Certificate,
    budget: u64,
) -> Result<Certificate> {
    if !t.same_code {
        return Err(Error::SameCodeRequired);
    }
    if ccz.property != "ccz" || !ccz.passed {
        return Err(Error::Incompatible(
            "a passing CCZ certificate is required".into(),
        ));
    }
    let code = &t.codes[0];
    let f = t.field().clone();
    let mut cert = Certificate::new("u", ccz.mode);
    cert.record("ccz certificate", ccz.checks.iter().map(|c| c.count).sum());
    cert.samples = ccz.samples;
    cert.seed = ccz.seed;
    let needed = search_size(f.order(), code.k() + code.x_stab().rows());
    if needed <= budget as u128 {
        let mut count = 0u64;
        for (z, v) in all_representatives(code) {
            count += 1;
            let lhs = f.sum(z.iter().map(|&x| f.mul(f.mul(x, x), x)));
            let rhs = f.sum((0..v.len()).map(|j| f.mul(t.b[j], f.mul(f.mul(v[j], v[j]), v[j]))));
            if lhs != rhs {
                cert.fail(format!("cubic identity fails at logical {z:?}"));
                break;
            }
        }
        cert.record("cubic identity (exhaustive)", count);
    }
    cert.claims = ccz.claims.clone();
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::ClaimKind;
    use crate::enumerate::DEFAULT_BUDGET;

    fn f(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn rs_5_1_2() {
        let t = rs_transversal(&f(5), 1, 2).unwrap();
        assert_eq!((t.n(), t.k()), (4, 1));
        assert!(t.same_code());
        let c = verify_ccz(&t, VerifyMode::deterministic()).unwrap();
        assert!(c.passed, "{c:?}");
        assert_eq!(t.code(0).distance_bruteforce(DEFAULT_BUDGET).unwrap(), 2);
        assert!(verify_ccz_exhaustive_oracle(&t, 1 << 20).unwrap());
        let u = derive_u_certificate(&t, &c, 1 << 20).unwrap();
        assert!(u.passed);
        assert!(u.checks.iter().any(|c| c.name.contains("cubic") && c.count == 25));
    }

    #[test]
    fn rs_constraint_messages() {
        let e = rs_transversal(&f(4), 1, 2).unwrap_err();
        assert_eq!(e.to_string(), "3(ℓ−1) < n violated");
        assert!(rs_transversal(&f(8), 2, 2).is_err());
        assert!(rs_transversal(&f(8), 1, 5).is_err());
        assert!(rs_transversal(&f(8), 0, 2).is_err());
    }

    #[test]
    fn b_matches_sum_over_a_on_every_c3_codeword() {
        let fl = f(5);
        let c = rs_code(&fl, &all_points(&fl), 2).unwrap();
        let c3 = star_product_span(&c, &c, &c).unwrap();
        assert_eq!(c3.k(), 4);
        let t = rs_transversal(&fl, 1, 2).unwrap();
        let q = 5u64;
        let mut count = 0;
        for i in 0..q.pow(c3.k() as u32) {
            let mut x = i;
            let m: Vec<u32> = (0..c3.k())
                .map(|_| {
                    let d = (x % q) as u32;
                    x /= q;
                    d
                })
                .collect();
            let w = c3.gen().vec_mul(&m).unwrap();
            if w[..4].iter().all(|&x| x == 0) && w[4] != 0 {
                panic!("C^*3 restricted to A^c is not injective");
            }
            // Degree ≤ 3 polynomials on 5 points: A = {4}, A^c = {0,1,2,3}.
            assert_eq!(fl.dot(t.b(), &w[..4]), w[4]);
            count += 1;
        }
        assert_eq!(count, 625);
    }

    #[test]
    fn perturbed_b_fails() {
        let t = rs_transversal(&f(8), 1, 2).unwrap();
        assert!(verify_ccz(&t, VerifyMode::deterministic()).unwrap().passed);
        let mut b = t.b().to_vec();
        b[0] = t.field().add(b[0], 1);
        let bad = t.with_b(b).unwrap();
        assert!(!verify_ccz(&bad, VerifyMode::deterministic()).unwrap().passed);
        let zero = t.with_b(vec![0; t.n()]).unwrap();
        let cert = verify_ccz(&zero, VerifyMode::deterministic()).unwrap();
        assert!(!cert.passed);
        assert!(cert.failure.unwrap().contains("(1,1,1)"));
    }

    #[test]
    fn distinct_codes_cannot_derive_u() {
        let t = rs_transversal(&f(5), 1, 2).unwrap();
        let c = verify_ccz(&t, VerifyMode::deterministic()).unwrap();
        let fl = f(5);
        let other = CssCode::from_classical(&Mat::identity(&fl, 4))
            .unwrap()
            .restrict(&Mat::from_rows(&fl, vec![vec![1, 0, 0, 0]]).unwrap())
            .unwrap();
        let mixed = TransversalTriple::new(
            [t.code(0).clone(), other, t.code(2).clone()],
            t.b().to_vec(),
            None,
        )
        .unwrap();
        assert!(!mixed.same_code());
        assert!(matches!(
            derive_u_certificate(&mixed, &c, 1 << 20),
            Err(Error::SameCodeRequired)
        ));
    }

    #[test]
    fn randomized_mode_records_seed() {
        let t = rs_transversal(&f(13), 2, 4).unwrap();
        let c = verify_ccz(&t, VerifyMode::randomized(200, 7)).unwrap();
        assert!(c.passed);
        assert_eq!((c.samples, c.seed), (Some(200), Some(7)));
        assert_eq!(c.claims.iter().find(|c| c.quantity == "d").unwrap().kind, ClaimKind::Bound);
    }

    #[test]
    fn zero_logical_triple_balances() {
        let t = rs_transversal(&f(5), 1, 2).unwrap();
        let fl = t.field().clone();
        let lists = all_representatives(t.code(0));
        for (z, v) in lists.iter().filter(|(z, _)| z.iter().all(|&x| x == 0)) {
            for (_, w) in &lists {
                assert_eq!(cubic(&fl, t.b(), v, w, w), 0, "{z:?}");
            }
        }
    }

    #[test]
    fn build_from_classical_gates() {
        let fl = f(5);
        let c = rs_code(&fl, &all_points(&fl), 2).unwrap();
        // k = ℓ fails.
        assert!(build_from_classical(&c, &[3, 4], DistanceBounds::default(), 1 << 20).is_err());
        let err = build_from_classical(
            &c,
            &[4],
            DistanceBounds {
                d_star: Some(1),
                ..Default::default()
            },
            1 << 20,
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "k < d′ violated");
        let t = build_from_classical(&c, &[4], DistanceBounds::default(), 1 << 20).unwrap();
        assert_eq!(t, rs_transversal(&fl, 1, 2).unwrap().with_distance(t.distance().cloned()));
    }
}
