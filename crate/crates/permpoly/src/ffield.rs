//! Two-level finite-field towers `F_p ⊂ F_q = F_{p^m} ⊂ F_{q^n}`.
//!
//! A [`FieldCtx`] owns both moduli and every precomputed table (discrete
//! logs for `F_q`, Frobenius matrices, the trace row, reduction rows for the
//! top modulus). [`Elem`] is a plain `Copy` coefficient vector tagged with
//! the id of its owning context; all arithmetic goes through `FieldCtx`
//! methods so elements of different towers can never silently mix.
//!
//! Moduli are chosen deterministically: the lexicographically smallest monic
//! irreducible of the required degree, coefficients ordered low-to-high and
//! scanned in base-p (resp. base-q) counting order. Every CLI report echoes
//! them, so results are reproducible across machines.

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::OnceLock;

use thiserror::Error;

/// Largest supported top-extension degree.
pub const MAX_DEGREE: usize = 4;

/// Desk-scale cap: `|F_{q^n}| <= 2^24` keeps every exhaustive sweep cheap.
pub const ORDER_CAP: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("field order {0} exceeds the desk-scale cap 2^24")]
    SizeCap(u64),
    #[error("unsupported extension degree n = {0} (supported: 2..=4)")]
    BadDegree(u32),
    #[error("base-extension degree m must be >= 1")]
    BadBaseDegree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different field contexts")]
    CtxMismatch,
    #[error("coefficient vector does not match the tower shape")]
    BadCoords,
    // The modulus searches are complete, so this is unreachable for inputs
    // that pass the size checks; it exists so the search has a total type.
    #[error("no irreducible modulus found")]
    NoIrreducibleFound,
}

/// One element of `F_{q^n}`: `n` coordinates over `F_q`, each stored as a
/// packed base-p code in `[0, q)`. Unused slots stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Elem {
    coeffs: [u32; MAX_DEGREE],
    ctx_id: u32,
}

impl Elem {
    /// `F_q`-coordinates (packed base-p codes), least significant first.
    pub fn coeffs(&self) -> &[u32; MAX_DEGREE] {
        &self.coeffs
    }

    pub fn ctx_id(&self) -> u32 {
        self.ctx_id
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0; MAX_DEGREE]
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem{:?}#{}", self.coeffs, self.ctx_id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

// ---------------------------------------------------------------------------
// F_p polynomial helpers (coefficients low-to-high, trimmed)
// ---------------------------------------------------------------------------

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    fp_trim(&mut out);
    out
}

/// Remainder of `a` by the monic polynomial `m`.
fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let dm = m.len() - 1;
    while !a.is_empty() && a.len() - 1 >= dm {
        let c = *a.last().unwrap();
        if c != 0 {
            let off = a.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                a[off + i] = (a[off + i] + (p - c % p) % p * mi) % p;
            }
        }
        a.pop();
        fp_trim(&mut a);
    }
    a
}

fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    for dd in 1..=d / 2 {
        let count = p.pow(dd as u32);
        for v in 0..count {
            let mut g = Vec::with_capacity(dd + 1);
            let mut t = v;
            for _ in 0..dd {
                g.push(t % p);
                t /= p;
            }
            g.push(1);
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `m` over `F_p`.
fn find_base_modulus(p: u64, m: u32) -> Result<Vec<u64>, FieldError> {
    let count = p.pow(m);
    for v in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut t = v;
        for _ in 0..m {
            f.push(t % p);
            t /= p;
        }
        f.push(1);
        if fp_is_irreducible(&f, p) {
            return Ok(f);
        }
    }
    Err(FieldError::NoIrreducibleFound)
}

// ---------------------------------------------------------------------------
// F_q tables
// ---------------------------------------------------------------------------

/// Add-table threshold: below this a full q*q table is cheap.
const ADD_TABLE_MAX_Q: u64 = 1024;

struct FqTables {
    p: u64,
    m: u32,
    q: u64,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl FqTables {
    fn build(p: u64, m: u32) -> Result<Self, FieldError> {
        let modulus = find_base_modulus(p, m)?;
        let q = p.pow(m);
        let mut t = FqTables {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add: None,
        };
        // multiplicative generator, found by complete ascending scan
        let gen = if q == 2 {
            1
        } else {
            let primes: Vec<u64> = factor_u64(q - 1).into_iter().map(|(r, _)| r).collect();
            (2..q as u32)
                .find(|&c| primes.iter().all(|&r| t.pow_raw(c, (q - 1) / r) != 1))
                .ok_or(FieldError::NoIrreducibleFound)?
        };
        let period = (q - 1).max(1) as usize;
        let mut exp = vec![1u32; 2 * period];
        let mut cur = 1u32;
        for i in 0..period {
            exp[i] = cur;
            exp[i + period] = cur;
            cur = t.mul_raw(cur, gen);
        }
        let mut log = vec![u32::MAX; q as usize];
        for (i, &e) in exp.iter().take(period).enumerate() {
            if log[e as usize] == u32::MAX {
                log[e as usize] = i as u32;
            }
        }
        t.exp = exp;
        t.log = log;
        t.neg = (0..q as u32).map(|x| t.neg_slow(x)).collect();
        if q <= ADD_TABLE_MAX_Q {
            let mut add = vec![0u32; (q * q) as usize];
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    add[(a as u64 * q + b as u64) as usize] = t.add_slow(a, b);
                }
            }
            t.add = Some(add);
        }
        Ok(t)
    }

    fn decode(&self, x: u32) -> Vec<u64> {
        let mut c = Vec::with_capacity(self.m as usize);
        let mut t = x as u64;
        for _ in 0..self.m {
            c.push(t % self.p);
            t /= self.p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        c
    }

    fn encode(&self, c: &[u64]) -> u32 {
        let mut x = 0u64;
        for &d in c.iter().rev() {
            x = x * self.p + d;
        }
        x as u32
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let prod = fp_mul(&self.decode(a), &self.decode(b), self.p);
        self.encode(&fp_rem(&prod, &self.modulus, self.p))
    }

    fn pow_raw(&self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_raw(r, a);
            }
            a = self.mul_raw(a, a);
            e >>= 1;
        }
        r
    }

    fn add_slow(&self, mut a: u32, mut b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as u32;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            out += (a % p + b % p) % p * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    fn neg_slow(&self, mut a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u32;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            out += (p - a % p) % p * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            a ^ b
        } else if let Some(t) = &self.add {
            t[(a as u64 * self.q + b as u64) as usize]
        } else {
            self.add_slow(a, b)
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    #[inline]
    fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let period = (self.q - 1).max(1);
        self.exp[((self.log[a as usize] as u64 * (e % period)) % period) as usize]
    }
}

/// Remainder of `a` by the monic polynomial `b`, coefficients in `F_q`.
fn fq_poly_rem(fq: &FqTables, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = a.to_vec();
    let db = b.len() - 1;
    loop {
        while a.last() == Some(&0) {
            a.pop();
        }
        if a.is_empty() || a.len() - 1 < db {
            return a;
        }
        let c = *a.last().unwrap();
        if c != 0 {
            let off = a.len() - 1 - db;
            let nc = fq.neg[c as usize];
            for (i, &bi) in b.iter().enumerate() {
                a[off + i] = fq.add(a[off + i], fq.mul(nc, bi));
            }
        }
        a.pop();
    }
}

fn fq_is_irreducible(fq: &FqTables, f: &[u32]) -> bool {
    let d = f.len() - 1;
    for dd in 1..=d / 2 {
        let count = fq.q.pow(dd as u32);
        for v in 0..count {
            let mut g = Vec::with_capacity(dd + 1);
            let mut t = v;
            for _ in 0..dd {
                g.push((t % fq.q) as u32);
                t /= fq.q;
            }
            g.push(1);
            if fq_poly_rem(fq, f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

fn find_top_modulus(fq: &FqTables, n: u32) -> Result<Vec<u32>, FieldError> {
    let count = fq.q.pow(n);
    for v in 0..count {
        let mut f = Vec::with_capacity(n as usize + 1);
        let mut t = v;
        for _ in 0..n {
            f.push((t % fq.q) as u32);
            t /= fq.q;
        }
        f.push(1);
        if fq_is_irreducible(fq, &f) {
            return Ok(f);
        }
    }
    Err(FieldError::NoIrreducibleFound)
}

// ---------------------------------------------------------------------------
// FieldCtx
// ---------------------------------------------------------------------------

static NEXT_CTX_ID: AtomicU32 = AtomicU32::new(1);

type FqMatrix = [[u32; MAX_DEGREE]; MAX_DEGREE];

/// A constructed tower `F_p ⊂ F_q ⊂ F_{q^n}`. Immutable after construction
/// and safe to share across threads; all element operations are pure.
pub struct FieldCtx {
    id: u32,
    p: u64,
    m: u32,
    n: u32,
    q: u64,
    order: u64,
    unit_circle_order: u64,
    fq: FqTables,
    top_modulus: Vec<u32>,
    /// `y^{n+t} mod h` for `t = 0 .. n-2`.
    reduction: [[u32; MAX_DEGREE]; MAX_DEGREE - 1],
    /// `frob_mats[j]` is the `F_q`-matrix of `x -> x^{q^j}`.
    frob_mats: [FqMatrix; MAX_DEGREE],
    /// `trace(y^c)` as an `F_q` scalar, per coordinate `c`.
    trace_row: [u32; MAX_DEGREE],
    generator: [u32; MAX_DEGREE],
    unit_circle: OnceLock<Vec<Elem>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldCtx(p={}, m={}, n={}, order={})",
            self.p, self.m, self.n, self.order
        )
    }
}

impl FieldCtx {
    /// Construct the tower `F_p ⊂ F_{p^m} ⊂ F_{p^{mn}}` with deterministic
    /// moduli. Fails on composite `p`, unsupported degrees, or orders above
    /// the desk-scale cap.
    pub fn new(p: u64, m: u32, n: u32) -> Result<FieldCtx, FieldError> {
        if !is_prime_u64(p) {
            return Err(FieldError::NonPrime(p));
        }
        if m == 0 {
            return Err(FieldError::BadBaseDegree);
        }
        if !(2..=MAX_DEGREE as u32).contains(&n) {
            return Err(FieldError::BadDegree(n));
        }
        let order = match (p as u128).checked_pow(m * n) {
            Some(full) if full <= ORDER_CAP as u128 => full as u64,
            Some(full) => return Err(FieldError::SizeCap(full.min(u64::MAX as u128) as u64)),
            None => return Err(FieldError::SizeCap(u64::MAX)),
        };
        let fq = FqTables::build(p, m)?;
        let q = fq.q;
        let top_modulus = find_top_modulus(&fq, n)?;
        let nu = n as usize;

        // reduction rows: y^{n+t} mod h
        let mut reduction = [[0u32; MAX_DEGREE]; MAX_DEGREE - 1];
        for i in 0..nu {
            reduction[0][i] = fq.neg[top_modulus[i] as usize];
        }
        for t in 1..nu.saturating_sub(1) {
            let prev = reduction[t - 1];
            let hi = prev[nu - 1];
            let mut row = [0u32; MAX_DEGREE];
            for i in (1..nu).rev() {
                row[i] = prev[i - 1];
            }
            if hi != 0 {
                for i in 0..nu {
                    row[i] = fq.add(row[i], fq.mul(hi, reduction[0][i]));
                }
            }
            reduction[t] = row;
        }

        let raw_mul = |a: &[u32; MAX_DEGREE], b: &[u32; MAX_DEGREE]| -> [u32; MAX_DEGREE] {
            let mut conv = [0u32; 2 * MAX_DEGREE - 1];
            for i in 0..nu {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..nu {
                    if b[j] != 0 {
                        conv[i + j] = fq.add(conv[i + j], fq.mul(a[i], b[j]));
                    }
                }
            }
            let mut out = [0u32; MAX_DEGREE];
            out[..nu].copy_from_slice(&conv[..nu]);
            for t in 0..nu - 1 {
                let hi = conv[nu + t];
                if hi != 0 {
                    for i in 0..nu {
                        if reduction[t][i] != 0 {
                            out[i] = fq.add(out[i], fq.mul(hi, reduction[t][i]));
                        }
                    }
                }
            }
            out
        };
        let raw_pow = |mut a: [u32; MAX_DEGREE], mut e: u64| -> [u32; MAX_DEGREE] {
            let mut r = [0u32; MAX_DEGREE];
            r[0] = 1;
            while e > 0 {
                if e & 1 == 1 {
                    r = raw_mul(&r, &a);
                }
                a = raw_mul(&a, &a);
                e >>= 1;
            }
            r
        };

        // Frobenius matrices: column c of M_1 is (y^q)^c.
        let mut y = [0u32; MAX_DEGREE];
        y[1] = 1;
        let yq = raw_pow(y, q);
        let mut mats = [[[0u32; MAX_DEGREE]; MAX_DEGREE]; MAX_DEGREE];
        for (i, row) in mats[0].iter_mut().enumerate() {
            row[i] = 1;
        }
        let mut cur = [0u32; MAX_DEGREE];
        cur[0] = 1;
        for c in 0..nu {
            for i in 0..nu {
                mats[1][i][c] = cur[i];
            }
            cur = raw_mul(&cur, &yq);
        }
        for j in 2..nu {
            for i in 0..nu {
                for c in 0..nu {
                    let mut acc = 0u32;
                    for k in 0..nu {
                        acc = fq.add(acc, fq.mul(mats[1][i][k], mats[j - 1][k][c]));
                    }
                    mats[j][i][c] = acc;
                }
            }
        }

        // trace of each basis power lands in F_q
        let mut trace_row = [0u32; MAX_DEGREE];
        for c in 0..nu {
            let mut vec = [0u32; MAX_DEGREE];
            for mat in mats.iter().take(nu) {
                for (i, v) in vec.iter_mut().enumerate().take(nu) {
                    *v = fq.add(*v, mat[i][c]);
                }
            }
            assert!(
                vec[1..nu].iter().all(|&v| v == 0),
                "trace of a basis power must lie in the base field"
            );
            trace_row[c] = vec[0];
        }

        // multiplicative generator of F_{q^n}*
        let primes: Vec<u64> = factor_u64(order - 1).into_iter().map(|(r, _)| r).collect();
        let mut generator = None;
        'search: for code in 2..order {
            let cand = decode_code(code, q, nu);
            for &r in &primes {
                let pw = raw_pow(cand, (order - 1) / r);
                if pw[0] == 1 && pw[1..nu].iter().all(|&v| v == 0) {
                    continue 'search;
                }
            }
            generator = Some(cand);
            break;
        }
        let generator = generator.ok_or(FieldError::NoIrreducibleFound)?;

        Ok(FieldCtx {
            id: NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed),
            p,
            m,
            n,
            q,
            order,
            unit_circle_order: (order - 1) / (q - 1),
            fq,
            top_modulus,
            reduction,
            frob_mats: mats,
            trace_row,
            generator,
            unit_circle: OnceLock::new(),
        })
    }

    pub fn id(&self) -> u32 {
        self.id
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn unit_circle_order(&self) -> u64 {
        self.unit_circle_order
    }

    /// Base modulus over `F_p`, coefficients low-to-high (monic).
    pub fn base_modulus(&self) -> &[u64] {
        &self.fq.modulus
    }

    /// Top modulus over `F_q`, coefficients as packed codes, low-to-high.
    pub fn top_modulus(&self) -> &[u32] {
        &self.top_modulus
    }

    // ---- element constructors ----

    pub fn zero(&self) -> Elem {
        Elem {
            coeffs: [0; MAX_DEGREE],
            ctx_id: self.id,
        }
    }

    pub fn one(&self) -> Elem {
        let mut coeffs = [0; MAX_DEGREE];
        coeffs[0] = 1;
        Elem {
            coeffs,
            ctx_id: self.id,
        }
    }

    pub fn generator(&self) -> Elem {
        Elem {
            coeffs: self.generator,
            ctx_id: self.id,
        }
    }

    /// Integer `v` reduced into the prime subfield.
    pub fn int_embed(&self, v: i64) -> Elem {
        let r = v.rem_euclid(self.p as i64) as u32;
        self.embed_scalar(r)
    }

    /// Embed an `F_q` scalar (packed code) as a constant of the top field.
    pub fn embed_scalar(&self, c: u32) -> Elem {
        debug_assert!((c as u64) < self.q);
        let mut coeffs = [0; MAX_DEGREE];
        coeffs[0] = c;
        Elem {
            coeffs,
            ctx_id: self.id,
        }
    }

    /// The canonical integer code of an element: base-q packing of its
    /// coordinates. Codes enumerate the field as `0..order`.
    pub fn code(&self, x: Elem) -> u64 {
        let mut out = 0u64;
        for i in (0..self.n as usize).rev() {
            out = out * self.q + x.coeffs[i] as u64;
        }
        out
    }

    pub fn elem_from_code(&self, code: u64) -> Elem {
        debug_assert!(code < self.order);
        Elem {
            coeffs: decode_code(code, self.q, self.n as usize),
            ctx_id: self.id,
        }
    }

    /// Build an element from per-level digit vectors: `coords[i]` is the
    /// base-p digit vector (low-to-high) of the i-th `F_q` coordinate.
    pub fn elem_from_coords(&self, coords: &[Vec<u64>]) -> Result<Elem, FieldError> {
        if coords.len() != self.n as usize {
            return Err(FieldError::BadCoords);
        }
        let mut coeffs = [0u32; MAX_DEGREE];
        for (i, digits) in coords.iter().enumerate() {
            if digits.len() > self.m as usize || digits.iter().any(|&d| d >= self.p) {
                return Err(FieldError::BadCoords);
            }
            coeffs[i] = self.fq.encode(digits);
        }
        Ok(Elem {
            coeffs,
            ctx_id: self.id,
        })
    }

    /// Per-level digit vectors of an element (inverse of `elem_from_coords`).
    pub fn coords(&self, x: Elem) -> Vec<Vec<u64>> {
        (0..self.n as usize)
            .map(|i| {
                let mut d = self.fq.decode(x.coeffs[i]);
                d.resize(self.m as usize, 0);
                d
            })
            .collect()
    }

    /// Compact display form: coordinates low-to-high joined by `,`, each a
    /// base-p digit string (low-to-high).
    pub fn format_elem(&self, x: Elem) -> String {
        let sep = if self.p <= 9 { "" } else { "." };
        self.coords(x)
            .iter()
            .map(|digits| {
                digits
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(sep)
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    #[inline]
    fn assert_ctx(&self, x: Elem) {
        assert_eq!(x.ctx_id, self.id, "element from another field context");
    }

    fn check_ctx(&self, x: Elem) -> Result<(), FieldError> {
        if x.ctx_id == self.id {
            Ok(())
        } else {
            Err(FieldError::CtxMismatch)
        }
    }

    // ---- arithmetic ----

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        self.assert_ctx(x);
        self.assert_ctx(y);
        let mut out = [0u32; MAX_DEGREE];
        for i in 0..self.n as usize {
            out[i] = self.fq.add(x.coeffs[i], y.coeffs[i]);
        }
        Elem {
            coeffs: out,
            ctx_id: self.id,
        }
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        self.assert_ctx(x);
        let mut out = [0u32; MAX_DEGREE];
        for i in 0..self.n as usize {
            out[i] = self.fq.neg[x.coeffs[i] as usize];
        }
        Elem {
            coeffs: out,
            ctx_id: self.id,
        }
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.assert_ctx(x);
        self.assert_ctx(y);
        let nu = self.n as usize;
        let mut conv = [0u32; 2 * MAX_DEGREE - 1];
        for i in 0..nu {
            let xi = x.coeffs[i];
            if xi == 0 {
                continue;
            }
            for j in 0..nu {
                let yj = y.coeffs[j];
                if yj != 0 {
                    conv[i + j] = self.fq.add(conv[i + j], self.fq.mul(xi, yj));
                }
            }
        }
        let mut out = [0u32; MAX_DEGREE];
        out[..nu].copy_from_slice(&conv[..nu]);
        for t in 0..nu - 1 {
            let hi = conv[nu + t];
            if hi != 0 {
                for i in 0..nu {
                    let r = self.reduction[t][i];
                    if r != 0 {
                        out[i] = self.fq.add(out[i], self.fq.mul(hi, r));
                    }
                }
            }
        }
        Elem {
            coeffs: out,
            ctx_id: self.id,
        }
    }

    /// Scale by an `F_q` scalar (cheaper than a full product).
    #[inline]
    pub fn scale(&self, c: u32, x: Elem) -> Elem {
        self.assert_ctx(x);
        let mut out = [0u32; MAX_DEGREE];
        for i in 0..self.n as usize {
            out[i] = self.fq.mul(c, x.coeffs[i]);
        }
        Elem {
            coeffs: out,
            ctx_id: self.id,
        }
    }

    pub fn inv(&self, x: Elem) -> Result<Elem, FieldError> {
        self.check_ctx(x)?;
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow_u(x, self.order - 2))
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem, FieldError> {
        self.check_ctx(x)?;
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Checked dispatcher over the four ring operations.
    pub fn arith(&self, x: Elem, y: Elem, kind: ArithKind) -> Result<Elem, FieldError> {
        self.check_ctx(x)?;
        self.check_ctx(y)?;
        match kind {
            ArithKind::Add => Ok(self.add(x, y)),
            ArithKind::Sub => Ok(self.sub(x, y)),
            ArithKind::Mul => Ok(self.mul(x, y)),
            ArithKind::Div => self.div(x, y),
        }
    }

    /// `x^e` with a non-negative exponent; total (`0^0 = 1`).
    pub fn pow_u(&self, x: Elem, e: u64) -> Elem {
        self.assert_ctx(x);
        if x.is_zero() {
            return if e == 0 { self.one() } else { x };
        }
        let mut e = e % (self.order - 1);
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x^e` for any integer exponent. Negative exponents reduce through the
    /// multiplicative order, so they require `x != 0`.
    pub fn pow(&self, x: Elem, e: i64) -> Result<Elem, FieldError> {
        self.check_ctx(x)?;
        if x.is_zero() {
            return match e {
                0 => Ok(self.one()),
                _ if e > 0 => Ok(x),
                _ => Err(FieldError::DivisionByZero),
            };
        }
        let period = (self.order - 1) as i128;
        let e = (e as i128).rem_euclid(period) as u64;
        Ok(self.pow_u(x, e))
    }

    /// `x^{q^j}` via the precomputed Frobenius matrices; `j` reduces mod `n`.
    #[inline]
    pub fn frobenius(&self, x: Elem, j: i64) -> Elem {
        self.assert_ctx(x);
        let j = j.rem_euclid(self.n as i64) as usize;
        if j == 0 {
            return x;
        }
        let mat = &self.frob_mats[j];
        let nu = self.n as usize;
        let mut out = [0u32; MAX_DEGREE];
        for (i, o) in out.iter_mut().enumerate().take(nu) {
            let mut acc = 0u32;
            for (c, row) in mat[i].iter().enumerate().take(nu) {
                if *row != 0 && x.coeffs[c] != 0 {
                    acc = self.fq.add(acc, self.fq.mul(*row, x.coeffs[c]));
                }
            }
            *o = acc;
        }
        Elem {
            coeffs: out,
            ctx_id: self.id,
        }
    }

    /// Relative trace to `F_q`, returned as a packed `F_q` code.
    #[inline]
    pub fn trace_scalar(&self, x: Elem) -> u32 {
        self.assert_ctx(x);
        let mut acc = 0u32;
        for i in 0..self.n as usize {
            let t = self.trace_row[i];
            if t != 0 && x.coeffs[i] != 0 {
                acc = self.fq.add(acc, self.fq.mul(t, x.coeffs[i]));
            }
        }
        acc
    }

    /// Relative trace to `F_q`, embedded back into the top field.
    pub fn trace(&self, x: Elem) -> Elem {
        self.embed_scalar(self.trace_scalar(x))
    }

    /// `F_q` scalar power `c^e` through the discrete-log tables.
    #[inline]
    pub fn fq_pow(&self, c: u32, e: u64) -> u32 {
        self.fq.pow(c, e)
    }

    /// Membership in the unit circle `μ = {x : x^((q^n-1)/(q-1)) = 1}`.
    pub fn in_unit_circle(&self, x: Elem) -> bool {
        !x.is_zero() && self.pow_u(x, self.unit_circle_order) == self.one()
    }

    /// All unit-circle elements in ascending code order (cached).
    pub fn unit_circle(&self) -> &[Elem] {
        self.unit_circle.get_or_init(|| {
            let step = self.pow_u(self.generator(), self.q - 1);
            let mut els = Vec::with_capacity(self.unit_circle_order as usize);
            let mut cur = self.one();
            for _ in 0..self.unit_circle_order {
                els.push(cur);
                cur = self.mul(cur, step);
            }
            els.sort_by_key(|&e| self.code(e));
            els.dedup();
            assert_eq!(els.len() as u64, self.unit_circle_order);
            els
        })
    }

    /// Deterministic square root: the first `y` in code order with `y^2 = c`.
    pub fn sqrt(&self, c: Elem) -> Option<Elem> {
        self.assert_ctx(c);
        (0..self.order)
            .map(|code| self.elem_from_code(code))
            .find(|&y| self.mul(y, y) == c)
    }
}

#[inline]
fn decode_code(code: u64, q: u64, n: usize) -> [u32; MAX_DEGREE] {
    let mut coeffs = [0u32; MAX_DEGREE];
    let mut t = code;
    for c in coeffs.iter_mut().take(n) {
        *c = (t % q) as u32;
        t /= q;
    }
    coeffs
}

// ---------------------------------------------------------------------------
// small number theory helpers
// ---------------------------------------------------------------------------

/// Largest `e` with `p^e | k`. Requires `k >= 1`.
pub fn nu_p(mut k: u64, p: u64) -> u32 {
    assert!(k >= 1 && p >= 2);
    let mut e = 0;
    while k % p == 0 {
        k /= p;
        e += 1;
    }
    e
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime_u64(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= x {
        if x % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

pub(crate) fn factor_u64(mut x: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            let mut e = 0;
            while x % d == 0 {
                x /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if x > 1 {
        out.push((x, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> FieldCtx {
        FieldCtx::new(2, 1, 3).unwrap()
    }

    #[test]
    fn make_field_small_towers() {
        let c = f8();
        assert_eq!((c.q(), c.order(), c.unit_circle_order()), (2, 8, 7));
        let c = FieldCtx::new(3, 1, 3).unwrap();
        assert_eq!((c.q(), c.order(), c.unit_circle_order()), (3, 27, 13));
        assert_eq!(c.top_modulus(), &[1, 2, 0, 1]); // y^3 + 2y + 1
        let c = FieldCtx::new(2, 2, 3).unwrap();
        assert_eq!((c.q(), c.order(), c.unit_circle_order()), (4, 64, 21));
    }

    #[test]
    fn make_field_rejects_bad_inputs() {
        assert_eq!(FieldCtx::new(4, 1, 3).unwrap_err(), FieldError::NonPrime(4));
        assert_eq!(FieldCtx::new(2, 13, 2).unwrap_err(), FieldError::SizeCap(1 << 26));
        assert_eq!(FieldCtx::new(2, 1, 5).unwrap_err(), FieldError::BadDegree(5));
        assert_eq!(FieldCtx::new(2, 0, 3).unwrap_err(), FieldError::BadBaseDegree);
    }

    #[test]
    fn f8_modulus_and_generator_cube() {
        let c = f8();
        // lexicographically smallest irreducible cubic over F_2: y^3 + y + 1
        assert_eq!(c.top_modulus(), &[1, 1, 0, 1]);
        let g = c.elem_from_code(2); // the class of y
        let g3 = c.pow_u(g, 3);
        assert_eq!(g3, c.add(g, c.one())); // g^3 = g + 1
        assert_eq!(c.pow_u(g, 7), c.one());
        assert_eq!(c.pow_u(c.zero(), 5), c.zero());
        assert_eq!(c.inv(c.one()).unwrap(), c.one());
        assert!(c.inv(c.zero()).is_err());
    }

    #[test]
    fn arith_dispatcher_and_ctx_mismatch() {
        let c1 = f8();
        let c2 = f8();
        let x = c1.elem_from_code(3);
        let y = c2.elem_from_code(5);
        assert_eq!(
            c1.arith(x, y, ArithKind::Add).unwrap_err(),
            FieldError::CtxMismatch
        );
        let z = c1.elem_from_code(5);
        assert_eq!(
            c1.arith(x, z, ArithKind::Div).unwrap(),
            c1.div(x, z).unwrap()
        );
        assert_eq!(
            c1.arith(x, c1.zero(), ArithKind::Div).unwrap_err(),
            FieldError::DivisionByZero
        );
    }

    #[test]
    fn frobenius_examples() {
        let c = f8();
        let g = c.elem_from_code(2);
        assert_eq!(c.frobenius(g, 0), g);
        assert_eq!(c.frobenius(g, 1), c.mul(g, g)); // q = 2
        for code in 0..c.order() {
            let x = c.elem_from_code(code);
            assert_eq!(c.frobenius(c.frobenius(x, 1), 2), x);
        }
    }

    #[test]
    fn trace_examples() {
        let c = f8();
        assert_eq!(c.trace(c.zero()), c.zero());
        // x in F_q => trace = 3x (= x for p = 2)
        assert_eq!(c.trace(c.one()), c.one());
        let g = c.elem_from_code(2);
        assert_eq!(c.trace(g), c.zero()); // g + g^2 + g^4 = 0 in F_8
        let c3 = FieldCtx::new(3, 1, 3).unwrap();
        assert_eq!(c3.trace(c3.one()), c3.zero()); // 3x = 0 when p = 3
    }

    #[test]
    fn trace_is_surjective_onto_fq() {
        for ctx in [FieldCtx::new(2, 2, 3).unwrap(), FieldCtx::new(3, 1, 3).unwrap()] {
            let mut image: Vec<u32> = (0..ctx.order())
                .map(|code| ctx.trace_scalar(ctx.elem_from_code(code)))
                .collect();
            image.sort_unstable();
            image.dedup();
            assert_eq!(image.len() as u64, ctx.q());
        }
    }

    #[test]
    fn unit_circle_f8_is_all_nonzero() {
        let c = f8();
        assert!(c.in_unit_circle(c.one()));
        assert!(!c.in_unit_circle(c.zero()));
        let mu = c.unit_circle();
        let codes: Vec<u64> = mu.iter().map(|&e| c.code(e)).collect();
        assert_eq!(codes, vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn unit_circle_counts() {
        for (p, m, expect) in [(2u64, 1u32, 7u64), (3, 1, 13), (2, 2, 21), (5, 1, 31)] {
            let c = FieldCtx::new(p, m, 3).unwrap();
            let count = (0..c.order())
                .filter(|&code| c.in_unit_circle(c.elem_from_code(code)))
                .count() as u64;
            assert_eq!(count, expect);
            assert_eq!(c.unit_circle().len() as u64, expect);
            for &a in c.unit_circle() {
                assert_eq!(c.pow_u(a, c.order()), a);
                assert_eq!(c.pow_u(a, c.unit_circle_order()), c.one());
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let c = f8();
        assert_eq!(c.sqrt(c.one()), Some(c.one()));
        assert_eq!(c.sqrt(c.zero()), Some(c.zero()));
        let c7 = FieldCtx::new(7, 1, 3).unwrap();
        let minus3 = c7.int_embed(-3);
        assert_eq!(c7.sqrt(minus3), Some(c7.elem_from_code(2)));
    }

    #[test]
    fn nt_helpers() {
        assert_eq!(nu_p(9, 3), 2);
        assert_eq!(nu_p(5, 3), 0);
        assert_eq!(gcd_u64(6, 63), 3);
    }

    #[test]
    fn pow_negative_exponents() {
        let c = f8();
        let g = c.elem_from_code(2);
        let inv = c.inv(g).unwrap();
        assert_eq!(c.pow(g, -1).unwrap(), inv);
        assert_eq!(c.pow(g, -3).unwrap(), c.pow_u(inv, 3));
        assert!(c.pow(c.zero(), -1).is_err());
        assert_eq!(c.pow(c.zero(), 0).unwrap(), c.one());
    }

    #[test]
    fn coords_roundtrip_and_format() {
        let c = FieldCtx::new(2, 2, 3).unwrap();
        for code in [0u64, 1, 17, 63] {
            let x = c.elem_from_code(code);
            let coords = c.coords(x);
            assert_eq!(c.elem_from_coords(&coords).unwrap(), x);
        }
        let one = c.one();
        assert_eq!(c.format_elem(one), "10,00,00");
    }

    #[test]
    fn field_axioms_random_sample() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        for (p, m) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
            let c = FieldCtx::new(p, m, 3).unwrap();
            let mut rng = StdRng::seed_from_u64(0x5eed ^ (p << 8) ^ m as u64);
            for _ in 0..10_000 {
                let x = c.elem_from_code(rng.gen_range(0..c.order()));
                let y = c.elem_from_code(rng.gen_range(0..c.order()));
                let z = c.elem_from_code(rng.gen_range(0..c.order()));
                assert_eq!(c.mul(c.mul(x, y), z), c.mul(x, c.mul(y, z)));
                assert_eq!(c.add(c.add(x, y), z), c.add(x, c.add(y, z)));
                assert_eq!(c.mul(x, c.add(y, z)), c.add(c.mul(x, y), c.mul(x, z)));
                assert_eq!(c.mul(x, y), c.mul(y, x));
                assert_eq!(c.add(x, c.neg(x)), c.zero());
                if !x.is_zero() {
                    assert_eq!(c.mul(x, c.inv(x).unwrap()), c.one());
                }
            }
        }
    }

    #[test]
    fn frobenius_is_ring_homomorphism() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let c = FieldCtx::new(3, 1, 3).unwrap();
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..2_000 {
            let x = c.elem_from_code(rng.gen_range(0..c.order()));
            let y = c.elem_from_code(rng.gen_range(0..c.order()));
            assert_eq!(c.frobenius(c.add(x, y), 1), c.add(c.frobenius(x, 1), c.frobenius(y, 1)));
            assert_eq!(c.frobenius(c.mul(x, y), 1), c.mul(c.frobenius(x, 1), c.frobenius(y, 1)));
            assert_eq!(c.frobenius(x, 1), c.pow_u(x, c.q()));
        }
        // phi^n = id, exhaustively on a small field
        for code in 0..c.order() {
            let x = c.elem_from_code(code);
            let mut y = x;
            for _ in 0..c.n() {
                y = c.frobenius(y, 1);
            }
            assert_eq!(y, x);
        }
    }

    #[test]
    fn n2_and_n4_towers_build() {
        let c = FieldCtx::new(3, 1, 2).unwrap();
        assert_eq!(c.order(), 9);
        assert_eq!(c.unit_circle_order(), 4);
        let c = FieldCtx::new(2, 1, 4).unwrap();
        assert_eq!(c.order(), 16);
        assert_eq!(c.unit_circle_order(), 15);
        for code in 0..c.order() {
            let x = c.elem_from_code(code);
            let mut y = x;
            for _ in 0..4 {
                y = c.frobenius(y, 1);
            }
            assert_eq!(y, x);
        }
    }

    #[test]
    fn slow_add_path_matches_table_path() {
        // q = 3^7 = 2187 > 1024 exercises the digit-loop adder
        let big = FieldCtx::new(3, 7, 2).unwrap();
        assert!(big.fq.add.is_none());
        let small = FieldCtx::new(3, 1, 2).unwrap();
        assert!(small.fq.add.is_some());
        let x = big.elem_from_code(123_456 % big.order());
        let y = big.elem_from_code(654_321 % big.order());
        assert_eq!(big.add(x, y), big.add(y, x));
        assert_eq!(big.sub(big.add(x, y), y), x);
    }
}
