//! Dense univariate polynomials over a [`Field`], stored low-to-high as element
//! encodings. The zero polynomial is the empty vector after [`trim`].

use super::Field;

pub fn trim(p: &mut Vec<u32>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub fn degree(p: &[u32]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

pub fn add(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = f.add(x, y);
    }
    trim(&mut out);
    out
}

pub fn sub(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = f.sub(x, y);
    }
    trim(&mut out);
    out
}

pub fn scale(f: &Field, a: &[u32], c: u32) -> Vec<u32> {
    let mut out: Vec<u32> = a.iter().map(|&x| f.mul(x, c)).collect();
    trim(&mut out);
    out
}

pub fn mul(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x != 0 {
            f.axpy(&mut out[i..i + b.len()], x, b);
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by a nonzero `b`.
pub fn divrem(f: &Field, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut r: Vec<u32> = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u32; r.len() - db];
    for d in (db..r.len()).rev() {
        let c = r[d];
        if c == 0 {
            continue;
        }
        let t = f.mul(c, lead_inv);
        q[d - db] = t;
        let neg = f.neg(t);
        f.axpy(&mut r[d - db..=d], neg, &b[..=db]);
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn rem(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    divrem(f, a, b).1
}

/// Monic gcd; the gcd of two zero polynomials is zero.
pub fn gcd(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let inv = f.inv(a[d]).unwrap();
        a = scale(f, &a, inv);
    }
    a
}

pub fn mulmod(f: &Field, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    rem(f, &mul(f, a, b), m)
}

/// `a^e mod m`.
pub fn powmod(f: &Field, a: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut result = rem(f, &[1], m);
    let mut base = rem(f, a, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(f, &result, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    result
}

pub fn eval(f: &Field, p: &[u32], x: u32) -> u32 {
    p.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Coefficients (length `points.len()`) of the unique polynomial of degree
/// `< points.len()` taking `values[i]` at `points[i]`. Points must be distinct.
pub fn interpolate(f: &Field, points: &[u32], values: &[u32]) -> Vec<u32> {
    assert_eq!(points.len(), values.len());
    let n = points.len();
    let mut out = vec![0u32; n];
    for i in 0..n {
        if values[i] == 0 {
            continue;
        }
        let basis = lagrange_basis(f, points, i);
        f.axpy(&mut out, values[i], &basis);
    }
    out
}

/// Coefficients (length `points.len()`) of the Lagrange polynomial that is 1 at
/// `points[i]` and 0 at every other point.
pub fn lagrange_basis(f: &Field, points: &[u32], i: usize) -> Vec<u32> {
    let n = points.len();
    let mut num = vec![1u32];
    let mut denom = 1u32;
    for (j, &x) in points.iter().enumerate() {
        if j == i {
            continue;
        }
        num = mul(f, &num, &[f.neg(x), 1]);
        denom = f.mul(denom, f.sub(points[i], x));
    }
    let inv = f.inv(denom).expect("interpolation points must be distinct");
    let mut out = scale(f, &num, inv);
    out.resize(n, 0);
    out
}

/// Ben-Or irreducibility test for a polynomial over `f`.
pub fn is_irreducible(f: &Field, p: &[u32]) -> bool {
    let mut p = p.to_vec();
    trim(&mut p);
    let Some(k) = degree(&p) else {
        return false;
    };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    if p[0] == 0 {
        return false;
    }
    let q = f.order();
    let x = vec![0u32, 1];
    let mut xp = x.clone();
    for _ in 1..=k / 2 {
        xp = powmod(f, &xp, q, &p);
        let diff = sub(f, &xp, &x);
        let g = gcd(f, &p, &diff);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// The monic irreducible polynomial of degree `k` over `f` whose coefficient
/// list `(c_0, ..., c_{k-1})` has the smallest integer value `Σ c_i · |f|^i`.
/// Degree 1 gives `X`.
pub fn smallest_irreducible(f: &Field, k: usize) -> Vec<u32> {
    assert!(k >= 1);
    let q = f.order();
    let total = (q as u128).pow(k as u32);
    let mut code: u128 = 0;
    while code < total {
        let mut c = code;
        let mut poly = Vec::with_capacity(k + 1);
        for _ in 0..k {
            poly.push((c % q as u128) as u32);
            c /= q as u128;
        }
        poly.push(1);
        if (k == 1 || poly[0] != 0) && is_irreducible(f, &poly) {
            return poly;
        }
        code += 1;
    }
    unreachable!("irreducible polynomials exist in every degree")
}
