//! Linearized polynomials `Σ c_j X^{q^j}` and the trace-power shape
//! `L(X) + c·Tr(X)^s`.
//!
//! Polynomials are kept in this sparse form and compared pointwise over the
//! full field (functions mod `X^{q^n} - X`); nothing here expands to dense
//! degree-(q^n - 1) coefficient vectors.

use crate::ffield::{Elem, FieldCtx, FieldError};

/// `Σ_j coeffs[j] · X^{q^j}`, an `F_q`-linear map of the top field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedPoly {
    coeffs: Vec<Elem>,
}

impl LinearizedPoly {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<Elem>) -> Result<Self, FieldError> {
        if coeffs.len() != ctx.n() as usize {
            return Err(FieldError::BadCoords);
        }
        for &c in &coeffs {
            if c.ctx_id() != ctx.id() {
                return Err(FieldError::CtxMismatch);
            }
        }
        Ok(LinearizedPoly { coeffs })
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        LinearizedPoly {
            coeffs: vec![ctx.zero(); ctx.n() as usize],
        }
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, ctx.one(), 0)
    }

    /// `c · X^{q^j}`.
    pub fn monomial(ctx: &FieldCtx, c: Elem, j: usize) -> Self {
        let mut coeffs = vec![ctx.zero(); ctx.n() as usize];
        coeffs[j % ctx.n() as usize] = c;
        LinearizedPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        let mut acc = ctx.zero();
        for (j, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = ctx.add(acc, ctx.mul(c, ctx.frobenius(x, j as i64)));
            }
        }
        acc
    }

    /// Coefficients of `self ∘ inner`: `c_k = Σ_{i+j ≡ k (n)} a_i · b_j^{q^i}`.
    pub fn compose(&self, ctx: &FieldCtx, inner: &LinearizedPoly) -> LinearizedPoly {
        let n = ctx.n() as usize;
        let mut out = vec![ctx.zero(); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in inner.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                let term = ctx.mul(a, ctx.frobenius(b, i as i64));
                out[k] = ctx.add(out[k], term);
            }
        }
        LinearizedPoly { coeffs: out }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &LinearizedPoly) -> LinearizedPoly {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| ctx.add(a, b))
            .collect();
        LinearizedPoly { coeffs }
    }

    /// Exhaustive injectivity over the full field. Linearized maps are
    /// bijective exactly when injective.
    pub fn is_bijection(&self, ctx: &FieldCtx) -> bool {
        let order = ctx.order() as usize;
        let mut seen = vec![0u64; order.div_ceil(64)];
        for code in 0..ctx.order() {
            let y = ctx.code(self.eval(ctx, ctx.elem_from_code(code)));
            let (w, b) = ((y / 64) as usize, y % 64);
            if seen[w] >> b & 1 == 1 {
                return false;
            }
            seen[w] |= 1 << b;
        }
        true
    }
}

/// `linear(X) + trace_coeff · Tr(X)^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracePowerPoly {
    pub linear: LinearizedPoly,
    pub trace_coeff: Elem,
    pub s: u64,
}

impl TracePowerPoly {
    pub fn new(linear: LinearizedPoly, trace_coeff: Elem, s: u64) -> Self {
        assert!(s >= 1, "trace-power exponent must be positive");
        TracePowerPoly {
            linear,
            trace_coeff,
            s,
        }
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        let lin = self.linear.eval(ctx, x);
        // the trace lands in F_q, so its power stays a scalar
        let t = ctx.fq_pow(ctx.trace_scalar(x), self.s);
        ctx.add(lin, ctx.mul(self.trace_coeff, ctx.embed_scalar(t)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_lin_fixes_zero_and_matches_frobenius() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        let l = LinearizedPoly::monomial(&ctx, ctx.one(), 1); // X^q
        assert_eq!(l.eval(&ctx, ctx.zero()), ctx.zero());
        for code in 0..ctx.order() {
            let x = ctx.elem_from_code(code);
            assert_eq!(l.eval(&ctx, x), ctx.frobenius(x, 1));
        }
    }

    #[test]
    fn compose_identity_and_monomials() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let id = LinearizedPoly::identity(&ctx);
        let xq = LinearizedPoly::monomial(&ctx, ctx.one(), 1);
        assert_eq!(id.compose(&ctx, &xq), xq);
        assert_eq!(xq.compose(&ctx, &id), xq);
        let xq2 = LinearizedPoly::monomial(&ctx, ctx.one(), 2);
        assert_eq!(xq.compose(&ctx, &xq), xq2);
    }

    #[test]
    fn compose_matches_nested_eval_exhaustively() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let mut rng = StdRng::seed_from_u64(31337);
        for _ in 0..50 {
            let l1 = LinearizedPoly::new(
                &ctx,
                (0..3).map(|_| ctx.elem_from_code(rng.gen_range(0..27))).collect(),
            )
            .unwrap();
            let l2 = LinearizedPoly::new(
                &ctx,
                (0..3).map(|_| ctx.elem_from_code(rng.gen_range(0..27))).collect(),
            )
            .unwrap();
            let comp = l1.compose(&ctx, &l2);
            for code in 0..27 {
                let x = ctx.elem_from_code(code);
                assert_eq!(comp.eval(&ctx, x), l1.eval(&ctx, l2.eval(&ctx, x)));
            }
            // associativity on a sample
            let l3 = LinearizedPoly::monomial(&ctx, ctx.elem_from_code(rng.gen_range(1..27)), 2);
            let a = l1.compose(&ctx, &l2).compose(&ctx, &l3);
            let b = l1.compose(&ctx, &l2.compose(&ctx, &l3));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn eval_is_fq_semilinear() {
        let ctx = FieldCtx::new(2, 2, 3).unwrap();
        let l = LinearizedPoly::new(
            &ctx,
            vec![ctx.elem_from_code(7), ctx.elem_from_code(13), ctx.elem_from_code(2)],
        )
        .unwrap();
        for lam in 0..ctx.q() as u32 {
            let lam_e = ctx.embed_scalar(lam);
            for code in 0..ctx.order() {
                let x = ctx.elem_from_code(code);
                assert_eq!(
                    l.eval(&ctx, ctx.mul(lam_e, x)),
                    ctx.mul(lam_e, l.eval(&ctx, x))
                );
            }
        }
    }

    #[test]
    fn eval_additivity() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let l = LinearizedPoly::new(
            &ctx,
            vec![ctx.elem_from_code(4), ctx.elem_from_code(9), ctx.elem_from_code(22)],
        )
        .unwrap();
        for xc in 0..27 {
            for yc in 0..27 {
                let (x, y) = (ctx.elem_from_code(xc), ctx.elem_from_code(yc));
                assert_eq!(
                    l.eval(&ctx, ctx.add(x, y)),
                    ctx.add(l.eval(&ctx, x), l.eval(&ctx, y))
                );
            }
        }
    }

    #[test]
    fn trace_power_eval() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        // X^q + Tr(X)^2
        let f = TracePowerPoly::new(
            LinearizedPoly::monomial(&ctx, ctx.one(), 1),
            ctx.one(),
            2,
        );
        for code in 0..8 {
            let x = ctx.elem_from_code(code);
            let t = ctx.trace(x);
            let expect = ctx.add(ctx.frobenius(x, 1), ctx.mul(t, t));
            assert_eq!(f.eval(&ctx, x), expect);
        }
    }

    #[test]
    fn linearized_bijection_check() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        assert!(LinearizedPoly::identity(&ctx).is_bijection(&ctx));
        assert!(!LinearizedPoly::zero(&ctx).is_bijection(&ctx));
        // Tr(X) = X + X^q + X^{q^2} is far from injective
        let tr = LinearizedPoly::new(&ctx, vec![ctx.one(), ctx.one(), ctx.one()]).unwrap();
        assert!(!tr.is_bijection(&ctx));
    }
}
