//! Alphabet reduction: concatenating a CCZ triple over `F_{q^k̄}` with a
//! 4-multiplication-friendly collection over `F_q` and restricting the logical
//! space to `(F_q^A)^k`, plus iterated schedules of such steps.

use serde::{Deserialize, Serialize};

use crate::certificate::{Claim, ClaimKind};
use crate::classical::{all_points, star};
use crate::css::{concatenate, Bilinear, CssCode};
use crate::error::{constraint, dim, Error, Result};
use crate::flinalg::Mat;
use crate::gf::{poly, Field, MAX_FIELD_ORDER};
use crate::multfriendly::{lift_classical, mf_quantum, mf_rm, mf_rs, MfCollection, MfKind};
use crate::transversal::{rs_transversal, TransversalTriple};

/// Source string for distance bounds obtained by multiplying inner and outer
/// distances.
pub const PRODUCT_BOUND: &str = "concatenation product bound";

/// `A`: the first `r` points of `F_q`.
pub fn restriction_points(field: &Field, r: usize) -> Result<Vec<u32>> {
    if r < 1 || r as u64 > field.order() {
        return Err(constraint("r ≤ q"));
    }
    Ok(all_points(field)[..r].to_vec())
}

/// `η` as a functional on polynomial-basis coordinates: `η(X^i) = Σ_{a∈A} a^i`.
pub fn eta_functional(field: &Field, a_pts: &[u32], k: usize) -> Vec<u32> {
    (0..k)
        .map(|i| field.sum(a_pts.iter().map(|&a| field.pow(a, i as u64))))
        .collect()
}

/// `η(f) = Σ_{a∈A} f(a)` by direct evaluation.
pub fn eta_eval(field: &Field, a_pts: &[u32], f: &[u32]) -> u32 {
    field.sum(a_pts.iter().map(|&a| poly::eval(field, f, a)))
}

/// Basis of `(F_q^A)^k ⊆ F_{q^k̄}^k` over `F_q`: row `j·r + s` is the Lagrange
/// polynomial of the `s`-th point of `A`, placed in outer block `j`.
pub fn restriction_basis(field: &Field, a_pts: &[u32], kbar: usize, k: usize) -> Mat {
    let r = a_pts.len();
    let mut s = Mat::zeros(field, k * r, k * kbar);
    for j in 0..k {
        for t in 0..r {
            let l = poly::lagrange_basis(field, a_pts, t);
            for (i, &c) in l.iter().enumerate() {
                s.set(j * r + t, j * kbar + i, c);
            }
        }
    }
    s
}

/// Inputs to one reduction step.
#[derive(Clone, Debug)]
pub struct DiamondInput {
    pub mf: MfCollection,
    pub triple: TransversalTriple,
    pub r: usize,
}

/// Per-slot codes before restriction, kept for audits.
#[derive(Clone, Debug)]
pub struct DiamondParts {
    pub inner: Vec<CssCode>,
    pub outer: Vec<CssCode>,
    pub a_pts: Vec<u32>,
    pub eta: Vec<u32>,
    /// Canonical `b̄_j ∈ Enc_Z^(4)(b_j)`.
    pub b_bar: Vec<Vec<u32>>,
}

fn check_input(input: &DiamondInput) -> Result<()> {
    let mf = &input.mf;
    if mf.m() != 4 {
        return Err(Error::InvalidCode(format!(
            "a 4-multiplication-friendly collection is required, got m = {}",
            mf.m()
        )));
    }
    if input.r < 1 {
        return Err(constraint("r ≥ 1"));
    }
    if 3 * (input.r - 1) >= mf.k() {
        return Err(constraint("3(r−1) < k̄"));
    }
    if input.r as u64 > mf.field().order() {
        return Err(constraint("r ≤ q"));
    }
    if input.triple.field() != mf.tower().ext() {
        return Err(Error::FieldMismatch(format!(
            "triple over {}, collection encodes {}",
            input.triple.field(),
            mf.tower().ext()
        )));
    }
    Ok(())
}

fn with_encx(code: &CssCode, form: &Bilinear) -> Result<CssCode> {
    match code.encx() {
        Some(_) if code.check_compatible(form).is_ok() => Ok(code.clone()),
        _ => code.compatible_encx(form),
    }
}

/// The reduction step. Returns the triple over `F_q` and the pieces used.
pub fn diamond_parts(input: &DiamondInput) -> Result<(TransversalTriple, DiamondParts)> {
    check_input(input)?;
    let mf = match input.mf.kind() {
        MfKind::Classical => lift_classical(&input.mf)?,
        MfKind::Quantum => input.mf.clone(),
    };
    let tower = mf.tower().clone();
    let f = tower.base().clone();
    let kbar = tower.k();
    let t = &input.triple;
    let k = t.k();
    let a_pts = restriction_points(&f, input.r)?;
    let s = restriction_basis(&f, &a_pts, kbar, k);
    let trace = Bilinear::Trace(tower.clone());

    let mut inner = Vec::with_capacity(3);
    let mut outer = Vec::with_capacity(3);
    let mut codes = Vec::with_capacity(3);
    for h in 0..3 {
        let i = with_encx(&mf.member_css(h)?, &trace)?;
        let o = with_encx(t.code(h), &Bilinear::Standard)?;
        let cat = concatenate(&i, &tower, &o)?;
        codes.push(cat.restrict(&s)?);
        inner.push(i);
        outer.push(o);
    }

    let eta = eta_functional(&f, &a_pts, kbar);
    // η ∘ Dec as a functional on F_q^n̄.
    let eta_dec: Vec<u32> = (0..mf.n())
        .map(|c| f.dot(&eta, &mf.dec().col(c)))
        .collect();
    let fourth = mf.member_css(3)?;
    let nbar = mf.n();
    let mut b_bar = Vec::with_capacity(t.n());
    let mut b = Vec::with_capacity(nbar * t.n());
    for &bj in t.b() {
        let bb = fourth.encode_z(&tower.flatten(bj)?)?;
        b.extend(bb.iter().zip(&eta_dec).map(|(&x, &y)| f.mul(x, y)));
        b_bar.push(bb);
    }

    let claim = t.distance().map(|d| {
        Claim::bound(
            "d",
            d.value * mf.distance_bound(),
            PRODUCT_BOUND,
        )
    });
    let codes: [CssCode; 3] = codes.try_into().expect("three slots");
    let out = TransversalTriple::new(codes, b, claim)?;
    Ok((
        out,
        DiamondParts {
            inner,
            outer,
            a_pts,
            eta,
            b_bar,
        },
    ))
}

/// `Q̄^(h) ⋄_r Q^(h)` for `h ∈ [3]` with the coefficients vector `b̃`.
pub fn diamond(input: &DiamondInput) -> Result<TransversalTriple> {
    Ok(diamond_parts(input)?.0)
}

/// Link-by-link results of the reduction identity chain
///
/// `Σ_j Σ_ĵ (b̃_j)_ĵ z̃¹ z̃² z̃³` (L1) `= Σ_j b̃_j·(z̃¹_j ∗ z̃²_j ∗ z̃³_j)` (L2)
/// `= Σ_j η(Dec(b̄_j ∗ z̃¹_j ∗ z̃²_j ∗ z̃³_j))` (L3) `= Σ_j η(b_j z¹′_j z²′_j z³′_j)` (L4)
/// `= η(Σ_j f¹_j f²_j f³_j)` (L5) `= Σ_j Σ_{a∈A} z¹_{j,a} z²_{j,a} z³_{j,a}` (L6).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainAudit {
    /// Evaluated (logical basis triple, representative triple) combinations.
    pub combinations: u64,
    /// Failures of equality `i` (L_{i+1} = L_{i+2}).
    pub link_failures: [u64; 5],
    /// Products `f¹f²f³` with degree ≥ k̄.
    pub degree_violations: u64,
    /// Representatives that the output code does not decode to their logical.
    pub membership_failures: u64,
}

impl ChainAudit {
    pub fn passed(&self) -> bool {
        self.combinations > 0
            && self.link_failures.iter().all(|&c| c == 0)
            && self.degree_violations == 0
            && self.membership_failures == 0
    }
}

/// A representative of the concatenated encoding built the way the chain
/// reads it: an outer representative `z′` and an inner representative per block.
struct Rep {
    logical: Vec<u32>,
    outer: Vec<u32>,
    inner: Vec<u32>,
}

/// Audits every link of the chain on all logical basis triples, with the
/// canonical representative and every single-generator shift in each slot
/// (outer X-stabilizers times `X^i`, inner X-stabilizers in each block).
/// Fails with `BudgetExceeded` beyond `max_combinations`.
pub fn audit_chain(
    input: &DiamondInput,
    output: &TransversalTriple,
    parts: &DiamondParts,
    max_combinations: u64,
) -> Result<ChainAudit> {
    let mf = match input.mf.kind() {
        MfKind::Classical => lift_classical(&input.mf)?,
        MfKind::Quantum => input.mf.clone(),
    };
    let tower = mf.tower();
    let f = tower.base().clone();
    let ext = tower.ext().clone();
    let kbar = tower.k();
    let t = &input.triple;
    let (k, n, nbar) = (t.k(), t.n(), mf.n());
    let r = input.r;
    let a_pts = &parts.a_pts;
    let logical_dim = k * r;
    if output.k() != logical_dim || output.n() != n * nbar {
        return Err(dim("output does not match the reduction input"));
    }

    // Logical e_{j·r+s} ↦ outer logical: f_j = Lagrange polynomial of point s.
    let lag: Vec<Vec<u32>> = (0..r)
        .map(|s| {
            let mut l = poly::lagrange_basis(&f, a_pts, s);
            l.resize(kbar, 0);
            l
        })
        .collect();

    let mut reps: Vec<Vec<Rep>> = Vec::with_capacity(3);
    for h in 0..3 {
        let inner = &parts.inner[h];
        let outer = &parts.outer[h];
        let lift = |zp: &[u32]| -> Result<Vec<u32>> {
            let mut v = Vec::with_capacity(n * nbar);
            for &sym in zp {
                v.extend(inner.encode_z(&tower.flatten(sym)?)?);
            }
            Ok(v)
        };
        let mut shifts_outer: Vec<Vec<u32>> = Vec::new();
        for g in outer.x_stab().row_iter() {
            for i in 0..kbar {
                let xi = tower.basis(i);
                shifts_outer.push(g.iter().map(|&x| ext.mul(x, xi)).collect());
            }
        }
        let mut slot = Vec::new();
        for idx in 0..logical_dim {
            let (j, s) = (idx / r, idx % r);
            let mut logical = vec![0u32; logical_dim];
            logical[idx] = 1;
            let mut z_out = vec![0u32; k];
            z_out[j] = tower.unflatten(&lag[s])?;
            let zp = outer.encode_z(&z_out)?;
            let base = lift(&zp)?;
            slot.push(Rep {
                logical: logical.clone(),
                outer: zp.clone(),
                inner: base.clone(),
            });
            for sh in &shifts_outer {
                let zp2: Vec<u32> = zp.iter().zip(sh).map(|(&a, &b)| ext.add(a, b)).collect();
                slot.push(Rep {
                    logical: logical.clone(),
                    inner: lift(&zp2)?,
                    outer: zp2,
                });
            }
            for block in 0..n {
                for g in inner.x_stab().row_iter() {
                    let mut v = base.clone();
                    f.axpy(&mut v[block * nbar..(block + 1) * nbar], 1, g);
                    slot.push(Rep {
                        logical: logical.clone(),
                        outer: zp.clone(),
                        inner: v,
                    });
                }
            }
        }
        reps.push(slot);
    }
    let per_slot: Vec<u64> = reps.iter().map(|s| (s.len() / logical_dim) as u64).collect();
    let combos = (logical_dim as u64).pow(3) * per_slot.iter().product::<u64>();
    if combos > max_combinations {
        return Err(Error::BudgetExceeded {
            needed: combos as u128,
            budget: max_combinations,
        });
    }

    let mut audit = ChainAudit::default();
    for (h, slot) in reps.iter().enumerate() {
        for rep in slot {
            match output.code(h).decode_z(&rep.inner)? {
                Some(z) if z == rep.logical => {}
                _ => audit.membership_failures += 1,
            }
        }
    }

    let b_out = output.b();
    let eta_of = |x: u32| f.dot(&parts.eta, &tower.flatten_unchecked(x));
    for r1 in &reps[0] {
        for r2 in &reps[1] {
            for r3 in &reps[2] {
                audit.combinations += 1;
                // L1: coordinate-wise sum over the whole block code.
                let mut l1 = 0u32;
                for c in 0..n * nbar {
                    let term = f.mul(f.mul(b_out[c], r1.inner[c]), f.mul(r2.inner[c], r3.inner[c]));
                    l1 = f.add(l1, term);
                }
                // L2: blockwise dot products.
                let mut l2 = 0u32;
                // L3: η ∘ Dec of the blockwise products with b̄_j.
                let mut l3 = 0u32;
                for j in 0..n {
                    let rg = j * nbar..(j + 1) * nbar;
                    let prod = star(&f, &star(&f, &r1.inner[rg.clone()], &r2.inner[rg.clone()]), &r3.inner[rg.clone()]);
                    l2 = f.add(l2, f.dot(&b_out[rg], &prod));
                    let with_b = star(&f, &parts.b_bar[j], &prod);
                    let dec = mf.dec().mul_vec(&with_b)?;
                    l3 = f.add(l3, f.dot(&parts.eta, &dec));
                }
                // L4: outer arithmetic in F_{q^k̄}.
                let mut l4 = 0u32;
                for j in 0..n {
                    let v = ext.mul(
                        ext.mul(t.b()[j], r1.outer[j]),
                        ext.mul(r2.outer[j], r3.outer[j]),
                    );
                    l4 = f.add(l4, eta_of(v));
                }
                // L5: polynomial products without reduction, degree guarded.
                let polys = |rep: &Rep| -> Vec<Vec<u32>> {
                    (0..k)
                        .map(|j| {
                            let mut p = vec![0u32; r];
                            for s in 0..r {
                                let c = rep.logical[j * r + s];
                                if c != 0 {
                                    p = poly::add(&f, &p, &poly::scale(&f, &lag[s][..r.max(1)], c));
                                }
                            }
                            p
                        })
                        .collect()
                };
                let (p1, p2, p3) = (polys(r1), polys(r2), polys(r3));
                let mut total = vec![0u32];
                let mut ext_total = 0u32;
                for j in 0..k {
                    let prod = poly::mul(&f, &poly::mul(&f, &p1[j], &p2[j]), &p3[j]);
                    if poly::degree(&prod).is_some_and(|d| d >= kbar) {
                        audit.degree_violations += 1;
                    }
                    total = poly::add(&f, &total, &prod);
                    let e = [&p1[j], &p2[j], &p3[j]]
                        .iter()
                        .map(|p| {
                            let mut c = p.to_vec();
                            c.resize(kbar, 0);
                            tower.unflatten_unchecked(&c)
                        })
                        .fold(1, |a, x| ext.mul(a, x));
                    ext_total = ext.add(ext_total, e);
                }
                let mut coeffs = total.clone();
                coeffs.resize(kbar.max(coeffs.len()), 0);
                if coeffs[kbar..].iter().any(|&c| c != 0)
                    || tower.flatten_unchecked(ext_total) != coeffs[..kbar]
                {
                    audit.degree_violations += 1;
                }
                let l5 = eta_eval(&f, a_pts, &total);
                // L6: the logical cubic form on (F_q^A)^k.
                let l6 = f.sum((0..logical_dim).map(|i| {
                    f.mul(f.mul(r1.logical[i], r2.logical[i]), r3.logical[i])
                }));
                let links = [l1 == l2, l2 == l3, l3 == l4, l4 == l5, l5 == l6];
                for (i, ok) in links.iter().enumerate() {
                    if !ok {
                        audit.link_failures[i] += 1;
                    }
                }
            }
        }
    }
    Ok(audit)
}

/// Multiplication-friendly family chosen at one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum MfFamily {
    /// Reed-Muller based, `n̄ = q^{4(k̄−1)}`.
    Rm { k: usize },
    /// Reed-Solomon based, `n̄ = n`.
    Rs { n: usize, k: usize },
    /// Quantum Reed-Solomon based with distance `ℓ + 1 − r̄`.
    Quantum { k: usize, r: usize, l: usize },
}

impl MfFamily {
    pub fn kbar(&self) -> usize {
        match *self {
            MfFamily::Rm { k } | MfFamily::Rs { k, .. } | MfFamily::Quantum { k, .. } => k,
        }
    }

    pub fn nbar(&self, q: u64) -> u128 {
        match *self {
            MfFamily::Rm { k } => (q as u128).saturating_pow(4 * (k as u32 - 1)),
            MfFamily::Rs { n, .. } => n as u128,
            MfFamily::Quantum { r, .. } => (q - r as u64) as u128,
        }
    }

    pub fn dbar(&self) -> u64 {
        match *self {
            MfFamily::Quantum { r, l, .. } => (l + 1 - r) as u64,
            _ => 1,
        }
    }

    /// Builds the 4-multiplication-friendly collection over `field`.
    pub fn build(&self, field: &Field) -> Result<MfCollection> {
        match *self {
            MfFamily::Rm { k } => lift_classical(&mf_rm(field, k, 4)?),
            MfFamily::Rs { n, k } => lift_classical(&mf_rs(field, n, k, 4)?),
            MfFamily::Quantum { k, r, l } => mf_quantum(field, k, r, l, 4),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MfFamily::Rm { .. } => "rm",
            MfFamily::Rs { .. } => "rs",
            MfFamily::Quantum { .. } => "quantum",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub q: u64,
    #[serde(flatten)]
    pub family: MfFamily,
    pub r: usize,
}

/// Reed-Solomon base code `rs_transversal(F_{q_T}, k, ℓ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseParams {
    pub q: u64,
    pub k: usize,
    pub l: usize,
}

/// Levels listed outermost first: level 1 is over `F_q`, and each level's
/// extension is the next level's field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub q: u64,
    pub levels: Vec<Level>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseParams>,
}

fn b1_family(q: u64) -> MfFamily {
    if q < 5 {
        MfFamily::Rm { k: 3 }
    } else if q < 200 {
        MfFamily::Rs {
            n: q as usize,
            k: ((q - 1) / 4 + 1) as usize,
        }
    } else {
        let k = (q / 50) as usize;
        MfFamily::Quantum {
            k,
            r: 5 * k,
            l: 10 * k,
        }
    }
}

fn restriction_for(kbar: usize) -> usize {
    (kbar - 1) / 3 + 1
}

fn next_order(q: u64, kbar: usize, level: usize) -> Result<u64> {
    let next = (q as u128).saturating_pow(kbar as u32);
    if next > MAX_FIELD_ORDER as u128 {
        return Err(Error::Level {
            level,
            source: Box::new(Error::FieldTooLarge {
                order: next,
                bound: MAX_FIELD_ORDER,
            }),
        });
    }
    Ok(next as u64)
}

/// The iterative Reed-Solomon / Reed-Muller schedule with `depth` reduction
/// levels and the top code `k̂ = ⌊q_T/8⌋`, `ℓ̂ = 2k̂` over `F_{q_T}`.
pub fn schedule_b1(q: u64, depth: usize) -> Result<Schedule> {
    if depth < 1 {
        return Err(constraint("depth ≥ 1"));
    }
    let mut levels = Vec::with_capacity(depth);
    let mut qt = q;
    for t in 1..=depth {
        let family = b1_family(qt);
        let kbar = family.kbar();
        levels.push(Level {
            q: qt,
            family,
            r: restriction_for(kbar),
        });
        qt = next_order(qt, kbar, t)?;
    }
    let khat = (qt / 8) as usize;
    Ok(Schedule {
        q,
        levels,
        base: Some(BaseParams {
            q: qt,
            k: khat,
            l: 2 * khat,
        }),
    })
}

/// The constant-depth schedule with `r = 1`: Reed-Muller with `k̄ = 4` while
/// `q_t < 5`, Reed-Solomon with `k̄ = 2`, `n̄ = q_t` otherwise, until `q_T ≥ 64`.
/// The base code over `F_{q_T}` is left to the caller.
pub fn schedule_constant_alphabet(q: u64) -> Result<Schedule> {
    let mut levels = Vec::new();
    let mut qt = q;
    while qt < 64 {
        let family = if qt < 5 {
            MfFamily::Rm { k: 4 }
        } else {
            MfFamily::Rs {
                n: qt as usize,
                k: 2,
            }
        };
        levels.push(Level {
            q: qt,
            family,
            r: 1,
        });
        qt = next_order(qt, family.kbar(), levels.len())?;
    }
    Ok(Schedule {
        q,
        levels,
        base: None,
    })
}

impl Schedule {
    /// Field order after all levels.
    pub fn top_order(&self) -> Result<u64> {
        let mut qt = self.q;
        for (i, l) in self.levels.iter().enumerate() {
            if l.q != qt {
                return Err(Error::Level {
                    level: i + 1,
                    source: Box::new(Error::FieldMismatch(format!(
                        "level declares q = {}, but the tower reaches {qt}",
                        l.q
                    ))),
                });
            }
            qt = next_order(qt, l.family.kbar(), i + 1)?;
        }
        Ok(qt)
    }

    /// Parameters `[[n, k, ≥d]]` predicted from the level formulas and the base.
    pub fn predicted(&self) -> Option<(u128, u128, u128)> {
        let base = self.base?;
        let mut n = (base.q - base.k as u64) as u128;
        let mut k = base.k as u128;
        let mut d = (base.l + 1 - base.k) as u128;
        for l in &self.levels {
            n *= l.family.nbar(l.q);
            k *= l.r as u128;
            d *= l.family.dbar() as u128;
        }
        Some((n, k, d))
    }
}

/// Parameters of one level in a pipeline run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub q: u64,
    pub family: String,
    pub nbar: usize,
    pub kbar: usize,
    pub dbar: u64,
    pub r: usize,
    pub n: usize,
    pub k: usize,
    pub d: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseRecord {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub d: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub triple: TransversalTriple,
    pub base: BaseRecord,
    /// Outermost level first.
    pub levels: Vec<LevelRecord>,
}

/// The field chain `F_q ⊆ F_{q_2} ⊆ ⋯` and collections of a schedule.
pub fn build_levels(schedule: &Schedule) -> Result<(Vec<MfCollection>, Field)> {
    schedule.top_order()?;
    let mut field = Field::with_order(schedule.q)?;
    let mut mfs = Vec::with_capacity(schedule.levels.len());
    for (i, l) in schedule.levels.iter().enumerate() {
        let mf = l.family.build(&field).map_err(|e| Error::Level {
            level: i + 1,
            source: Box::new(e),
        })?;
        field = mf.tower().ext().clone();
        mfs.push(mf);
    }
    Ok((mfs, field))
}

/// Builds the schedule's base code over the top field of the tower.
pub fn build_base(schedule: &Schedule, top: &Field) -> Result<TransversalTriple> {
    let base = schedule
        .base
        .ok_or_else(|| Error::InvalidCode("schedule has no base parameters".into()))?;
    if base.q != top.order() {
        return Err(Error::FieldMismatch(format!(
            "base declared over F_{}, tower reaches F_{}",
            base.q,
            top.order()
        )));
    }
    rs_transversal(top, base.k, base.l).map_err(|e| Error::Level {
        level: schedule.levels.len() + 1,
        source: Box::new(e),
    })
}

/// Right-to-left fold of reduction steps over `base`.
pub fn pipeline(
    base: &TransversalTriple,
    schedule: &Schedule,
    mfs: &[MfCollection],
) -> Result<PipelineOutput> {
    if mfs.len() != schedule.levels.len() {
        return Err(dim("one collection per schedule level"));
    }
    let base_rec = BaseRecord {
        q: base.field().order(),
        n: base.n(),
        k: base.k(),
        d: base.distance().map(|c| c.value),
    };
    let mut cur = base.clone();
    let mut records = Vec::with_capacity(mfs.len());
    for (i, (level, mf)) in schedule.levels.iter().zip(mfs).enumerate().rev() {
        let input = DiamondInput {
            mf: mf.clone(),
            triple: cur,
            r: level.r,
        };
        cur = diamond(&input).map_err(|e| Error::Level {
            level: i + 1,
            source: Box::new(e),
        })?;
        records.push(LevelRecord {
            level: i + 1,
            q: mf.field().order(),
            family: level.family.name().into(),
            nbar: mf.n(),
            kbar: mf.k(),
            dbar: mf.distance_bound(),
            r: level.r,
            n: cur.n(),
            k: cur.k(),
            d: cur.distance().map(|c| c.value),
        });
    }
    records.reverse();
    Ok(PipelineOutput {
        triple: cur,
        base: base_rec,
        levels: records,
    })
}

/// Builds the schedule end to end (levels, base, fold).
pub fn run_schedule(schedule: &Schedule) -> Result<PipelineOutput> {
    let (mfs, top) = build_levels(schedule)?;
    let base = build_base(schedule, &top)?;
    pipeline(&base, schedule, &mfs)
}

/// `log(n/k) / log(d)`.
pub fn gamma_exponent(n: u64, k: u64, d: u64) -> Result<f64> {
    if k < 1 || k > n {
        return Err(constraint("1 ≤ k ≤ n"));
    }
    if d < 2 {
        return Err(constraint("d ≥ 2"));
    }
    Ok((n as f64 / k as f64).ln() / (d as f64).ln())
}

/// `γ` from a triple's parameters and its distance claim.
pub fn triple_gamma(t: &TransversalTriple) -> Option<f64> {
    let d = t.distance()?;
    debug_assert!(matches!(d.kind, ClaimKind::Exact | ClaimKind::Bound));
    gamma_exponent(t.n() as u64, t.k() as u64, d.value).ok()
}
