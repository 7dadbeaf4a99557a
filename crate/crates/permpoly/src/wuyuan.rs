//! The determinant criterion for polynomials in the canonical form
//!
//! ```text
//!   f(X) = A_1^{m_1}(X) + Σ_{i=2}^{n} u_i · A_i^{m_i}(X),
//!   A_i(X) = X^{q^{n-1}} + a_i X^{q^{n-2}} + a_i^{1+q^{n-1}} X^{q^{n-3}} + ...
//! ```
//!
//! with every `a_i` on the unit circle. `f` permutes `F_{q^n}` iff
//! `gcd(m_1 ... m_n, q-1) = 1` and `det(D_1 D_2) != 0`, and in that case the
//! compositional inverse assembles from the rows of `D_1^{-1}`, the last row
//! of `D_2^{-1}`, and per-term exponents `(r_i, s_i)` solving
//! `m_i r_i ≡ 1 + s_i (q-1) (mod q^n - 1)`.
//!
//! The machinery is generic in `2 <= n <= 4`; the parametric families use
//! `n = 3`.

use thiserror::Error;

use crate::ffield::{gcd_u64, Elem, FieldCtx, FieldError};
use crate::linalg::Mat;
use crate::oracle;
use crate::qpoly::LinearizedPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WuYuanError {
    #[error("spec vectors must have length n = {0}")]
    BadLength(u32),
    #[error("a[{0}] is not on the unit circle")]
    NotUnitCircle(usize),
    #[error("u[0] must be 1")]
    LeadingUnitRequired,
    #[error("A-index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("no r with m*r = 1 (mod q-1): gcd(m, q-1) != 1")]
    NoSolution,
    #[error("criterion matrix is singular")]
    SingularMatrix,
    #[error("spec does not satisfy the permutation criterion")]
    NotAPermutation,
    #[error("constructed inverse failed the exhaustive round-trip")]
    RoundTripFailure,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Parameters `(a_i, u_i, m_i)` of the canonical form. `a` entries must lie
/// on the unit circle and `u[0] = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WuYuanSpec {
    a: Vec<Elem>,
    u: Vec<Elem>,
    mexp: Vec<u64>,
}

impl WuYuanSpec {
    pub fn new(
        ctx: &FieldCtx,
        a: Vec<Elem>,
        u: Vec<Elem>,
        mexp: Vec<u64>,
    ) -> Result<Self, WuYuanError> {
        let spec = Self::new_unchecked(ctx, a, u, mexp)?;
        for (i, &ai) in spec.a.iter().enumerate() {
            if !ctx.in_unit_circle(ai) {
                return Err(WuYuanError::NotUnitCircle(i));
            }
        }
        Ok(spec)
    }

    /// Skips the unit-circle membership scan; shape checks still run.
    pub(crate) fn new_unchecked(
        ctx: &FieldCtx,
        a: Vec<Elem>,
        u: Vec<Elem>,
        mexp: Vec<u64>,
    ) -> Result<Self, WuYuanError> {
        let n = ctx.n() as usize;
        if a.len() != n || u.len() != n || mexp.len() != n {
            return Err(WuYuanError::BadLength(ctx.n()));
        }
        if u[0] != ctx.one() {
            return Err(WuYuanError::LeadingUnitRequired);
        }
        if mexp.iter().any(|&m| m == 0) {
            return Err(WuYuanError::BadLength(ctx.n()));
        }
        Ok(WuYuanSpec { a, u, mexp })
    }

    pub fn a(&self) -> &[Elem] {
        &self.a
    }
    pub fn u(&self) -> &[Elem] {
        &self.u
    }
    pub fn mexp(&self) -> &[u64] {
        &self.mexp
    }

    /// Coefficient exponents of `A_i`: `A_i(X) = Σ_j a_i^{e_j} X^{q^{n-1-j}}`
    /// with `e_0 = 0`, `e_1 = 1`, `e_j = e_{j-1} + q^{n-j+1}`.
    fn coeff_exponents(ctx: &FieldCtx) -> Vec<u64> {
        let n = ctx.n() as u64;
        let q = ctx.q();
        let mut exps = vec![0u64, 1];
        for j in 2..n {
            let prev = exps[j as usize - 1];
            exps.push(prev + q.pow((n - j + 1) as u32));
        }
        exps.truncate(n as usize);
        exps
    }

    /// `A_i(x)`, 1-indexed as in the canonical form.
    pub fn eval_a(&self, ctx: &FieldCtx, i: usize, x: Elem) -> Result<Elem, WuYuanError> {
        let n = ctx.n() as usize;
        if i == 0 || i > n {
            return Err(WuYuanError::IndexOutOfRange(i, n));
        }
        Ok(self.eval_a_idx(ctx, i - 1, x))
    }

    fn eval_a_idx(&self, ctx: &FieldCtx, idx: usize, x: Elem) -> Elem {
        let n = ctx.n() as usize;
        let mut acc = ctx.zero();
        for (j, &e) in Self::coeff_exponents(ctx).iter().enumerate() {
            let coeff = ctx.pow_u(self.a[idx], e);
            let pw = ctx.frobenius(x, (n - 1 - j) as i64);
            acc = ctx.add(acc, ctx.mul(coeff, pw));
        }
        acc
    }

    /// `D_1[j][i] = u_i^{q^j} · a_i^{m_i (q + q^2 + ... + q^j)}` (0-indexed rows).
    pub(crate) fn d1(&self, ctx: &FieldCtx) -> Mat {
        let n = ctx.n() as usize;
        let q = ctx.q();
        let period = (ctx.order() - 1) as u128;
        let mut m = Mat::zero(ctx, n);
        let mut esum = 0u64;
        for j in 0..n {
            if j > 0 {
                esum += q.pow(j as u32);
            }
            for i in 0..n {
                let uf = ctx.pow_u(self.u[i], q.pow(j as u32));
                // a_i is a unit, so the exponent reduces mod order-1; wide
                // arithmetic keeps arbitrary m_i exact
                let e = (self.mexp[i] as u128 * esum as u128 % period) as u64;
                let af = ctx.pow_u(self.a[i], e);
                m.e[j][i] = ctx.mul(uf, af);
            }
        }
        m
    }

    /// `D_2` row `i` holds the coefficient vector of `A_i`, highest Frobenius
    /// power first.
    pub(crate) fn d2(&self, ctx: &FieldCtx) -> Mat {
        let n = ctx.n() as usize;
        let mut m = Mat::zero(ctx, n);
        let exps = Self::coeff_exponents(ctx);
        for i in 0..n {
            for (j, &e) in exps.iter().enumerate() {
                m.e[i][j] = ctx.pow_u(self.a[i], e);
            }
        }
        m
    }

    /// Rows of `D_1`.
    pub fn d1_rows(&self, ctx: &FieldCtx) -> Vec<Vec<Elem>> {
        let m = self.d1(ctx);
        (0..m.n).map(|i| m.row(i).to_vec()).collect()
    }

    /// Rows of `D_2` (row `i` is the coefficient vector of `A_i`).
    pub fn d2_rows(&self, ctx: &FieldCtx) -> Vec<Vec<Elem>> {
        let m = self.d2(ctx);
        (0..m.n).map(|i| m.row(i).to_vec()).collect()
    }

    /// `(det D_1, det D_2)`.
    pub fn dets(&self, ctx: &FieldCtx) -> (Elem, Elem) {
        (self.d1(ctx).det(ctx), self.d2(ctx).det(ctx))
    }

    /// The permutation criterion: `gcd(Π m_i, q-1) = 1` and `det(D_1 D_2) != 0`.
    pub fn is_pp(&self, ctx: &FieldCtx) -> bool {
        // the product is coprime to q-1 exactly when every factor is
        if self.mexp.iter().any(|&m| gcd_u64(m, ctx.q() - 1) != 1) {
            return false;
        }
        let (d1, d2) = self.dets(ctx);
        !ctx.mul(d1, d2).is_zero()
    }

    /// Evaluate the canonical form `A_1^{m_1}(x) + Σ u_i A_i^{m_i}(x)`.
    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        let n = ctx.n() as usize;
        let mut acc = ctx.zero();
        for i in 0..n {
            let v = self.eval_a_idx(ctx, i, x);
            let term = ctx.pow_u(v, self.mexp[i]);
            let term = if i == 0 { term } else { ctx.mul(self.u[i], term) };
            acc = ctx.add(acc, term);
        }
        acc
    }

    /// Assemble and exhaustively verify the compositional inverse. Fails
    /// with `SingularMatrix`/`NoSolution` when the criterion does not hold.
    pub fn generic_inverse(&self, ctx: &FieldCtx) -> Result<InverseForm, WuYuanError> {
        let n = ctx.n() as usize;
        let q = ctx.q();
        let d1_inv = self.d1(ctx).inverse(ctx).ok_or(WuYuanError::SingularMatrix)?;
        let d2_inv = self.d2(ctx).inverse(ctx).ok_or(WuYuanError::SingularMatrix)?;
        let theta = d2_inv.row(n - 1).to_vec();
        let eta: Vec<Vec<Elem>> = (0..n).map(|i| d1_inv.row(i).to_vec()).collect();
        let mut r = Vec::with_capacity(n);
        let mut sshift = Vec::with_capacity(n);
        let mut abase = Vec::with_capacity(n);
        for i in 0..n {
            let (ri, si) = solve_congruence(self.mexp[i], q, ctx.n())?;
            r.push(ri);
            sshift.push(si);
            let e = -((q as i64) * si as i64);
            abase.push(ctx.pow(self.a[i], e)?);
        }
        let inv = InverseForm {
            theta,
            eta,
            r,
            sshift,
            abase,
        };
        let ok = oracle::verify_inverse(ctx, |x| self.eval(ctx, x), |y| inv.eval(ctx, y))
            .map_err(|_| WuYuanError::RoundTripFailure)?;
        if !ok {
            return Err(WuYuanError::RoundTripFailure);
        }
        Ok(inv)
    }
}

/// Smallest positive `r` with `m·r ≡ 1 (mod q-1)`, lifted to the shift `s`
/// with `m·r ≡ 1 + s·(q-1) (mod q^n - 1)` and `s` reduced mod
/// `(q^n-1)/(q-1)`. Wide arithmetic keeps arbitrary `m` exact.
pub fn solve_congruence(m: u64, q: u64, n: u32) -> Result<(u64, u64), WuYuanError> {
    if gcd_u64(m, q - 1) != 1 {
        return Err(WuYuanError::NoSolution);
    }
    let modulus = (q - 1) as u128;
    let m = m as u128;
    let mut r = 1u128;
    while (m * r) % modulus != 1 % modulus {
        r += 1;
    }
    let lift = (m * r - 1) / modulus;
    let period = ((q.pow(n) - 1) / (q - 1)) as u128;
    let s = lift % period;
    let full = (q.pow(n) - 1) as u128;
    debug_assert_eq!((m * r) % full, (1 + s * modulus) % full);
    Ok((r as u64, s as u64))
}

/// The assembled compositional inverse
/// `f^{-1}(X) = Σ_i theta_i · abase_i · (eta_i · (X, X^q, ..., X^{q^{n-1}}))^{r_i}`
/// where `abase_i = a_i^{-q·s_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseForm {
    pub theta: Vec<Elem>,
    pub eta: Vec<Vec<Elem>>,
    pub r: Vec<u64>,
    pub sshift: Vec<u64>,
    pub abase: Vec<Elem>,
}

impl InverseForm {
    pub fn eval(&self, ctx: &FieldCtx, y: Elem) -> Elem {
        let n = ctx.n() as usize;
        let mut powers = [y; crate::ffield::MAX_DEGREE];
        for j in 1..n {
            powers[j] = ctx.frobenius(y, j as i64);
        }
        let mut out = ctx.zero();
        for i in 0..n {
            let mut acc = ctx.zero();
            for j in 0..n {
                if !self.eta[i][j].is_zero() {
                    acc = ctx.add(acc, ctx.mul(self.eta[i][j], powers[j]));
                }
            }
            let lam = ctx.mul(self.abase[i], ctx.pow_u(acc, self.r[i]));
            out = ctx.add(out, ctx.mul(self.theta[i], lam));
        }
        out
    }

    /// When every power exponent is 1, the whole inverse collapses to a
    /// linearized polynomial.
    pub fn as_linearized(&self, ctx: &FieldCtx) -> Option<LinearizedPoly> {
        if self.r.iter().any(|&r| r != 1) {
            return None;
        }
        let n = ctx.n() as usize;
        let mut coeffs = vec![ctx.zero(); n];
        for i in 0..n {
            let w = ctx.mul(self.theta[i], self.abase[i]);
            for (j, c) in coeffs.iter_mut().enumerate() {
                *c = ctx.add(*c, ctx.mul(w, self.eta[i][j]));
            }
        }
        Some(LinearizedPoly::new(ctx, coeffs).expect("matching context"))
    }
}
