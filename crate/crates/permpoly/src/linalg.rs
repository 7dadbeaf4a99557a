//! Exact dense linear algebra over `F_{q^n}` for the small (n <= 4) matrices
//! of the permutation criterion. Gauss-Jordan with the first nonzero pivot in
//! column order; no pivot-magnitude notion exists over a finite field.

use crate::ffield::{Elem, FieldCtx, MAX_DEGREE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Mat {
    pub n: usize,
    pub e: [[Elem; MAX_DEGREE]; MAX_DEGREE],
}

impl Mat {
    pub fn zero(ctx: &FieldCtx, n: usize) -> Mat {
        Mat {
            n,
            e: [[ctx.zero(); MAX_DEGREE]; MAX_DEGREE],
        }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Mat {
        let mut m = Mat::zero(ctx, n);
        for i in 0..n {
            m.e[i][i] = ctx.one();
        }
        m
    }

    pub fn det(&self, ctx: &FieldCtx) -> Elem {
        let n = self.n;
        let mut w = self.e;
        let mut det = ctx.one();
        let mut negate = false;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !w[r][col].is_zero());
            let Some(pr) = pivot else {
                return ctx.zero();
            };
            if pr != col {
                w.swap(pr, col);
                negate = !negate;
            }
            let piv = w[col][col];
            det = ctx.mul(det, piv);
            let piv_inv = ctx.inv(piv).expect("pivot is nonzero");
            for r in col + 1..n {
                if w[r][col].is_zero() {
                    continue;
                }
                let factor = ctx.mul(w[r][col], piv_inv);
                for c in col..n {
                    let delta = ctx.mul(factor, w[col][c]);
                    w[r][c] = ctx.sub(w[r][c], delta);
                }
            }
        }
        if negate {
            ctx.neg(det)
        } else {
            det
        }
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self, ctx: &FieldCtx) -> Option<Mat> {
        let n = self.n;
        let mut w = self.e;
        let mut inv = Mat::identity(ctx, n).e;
        for col in 0..n {
            let pr = (col..n).find(|&r| !w[r][col].is_zero())?;
            if pr != col {
                w.swap(pr, col);
                inv.swap(pr, col);
            }
            let piv_inv = ctx.inv(w[col][col]).expect("pivot is nonzero");
            for c in 0..n {
                w[col][c] = ctx.mul(w[col][c], piv_inv);
                inv[col][c] = ctx.mul(inv[col][c], piv_inv);
            }
            for r in 0..n {
                if r == col || w[r][col].is_zero() {
                    continue;
                }
                let factor = w[r][col];
                for c in 0..n {
                    let dw = ctx.mul(factor, w[col][c]);
                    w[r][c] = ctx.sub(w[r][c], dw);
                    let di = ctx.mul(factor, inv[col][c]);
                    inv[r][c] = ctx.sub(inv[r][c], di);
                }
            }
        }
        Some(Mat { n, e: inv })
    }

    #[cfg(test)]
    pub fn mul(&self, ctx: &FieldCtx, rhs: &Mat) -> Mat {
        let n = self.n;
        let mut out = Mat::zero(ctx, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ctx.zero();
                for k in 0..n {
                    acc = ctx.add(acc, ctx.mul(self.e[i][k], rhs.e[k][j]));
                }
                out.e[i][j] = acc;
            }
        }
        out
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.e[i][..self.n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse_small() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let mut m = Mat::identity(&ctx, 3);
        m.e[0][1] = ctx.elem_from_code(5);
        m.e[2][0] = ctx.elem_from_code(11);
        let inv = m.inverse(&ctx).unwrap();
        assert_eq!(m.mul(&ctx, &inv), Mat::identity(&ctx, 3));
        assert!(!m.det(&ctx).is_zero());
    }

    #[test]
    fn singular_matrix() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        let mut m = Mat::zero(&ctx, 3);
        // two equal rows
        for c in 0..3 {
            m.e[0][c] = ctx.elem_from_code(c as u64 + 1);
            m.e[1][c] = ctx.elem_from_code(c as u64 + 1);
            m.e[2][c] = ctx.elem_from_code(7 - c as u64);
        }
        assert!(m.det(&ctx).is_zero());
        assert!(m.inverse(&ctx).is_none());
    }

    #[test]
    fn det_matches_product_rule() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let ctx = FieldCtx::new(2, 2, 3).unwrap();
        let mut rng = StdRng::seed_from_u64(4242);
        for _ in 0..200 {
            let mut a = Mat::zero(&ctx, 3);
            let mut b = Mat::zero(&ctx, 3);
            for i in 0..3 {
                for j in 0..3 {
                    a.e[i][j] = ctx.elem_from_code(rng.gen_range(0..ctx.order()));
                    b.e[i][j] = ctx.elem_from_code(rng.gen_range(0..ctx.order()));
                }
            }
            let lhs = a.mul(&ctx, &b).det(&ctx);
            let rhs = ctx.mul(a.det(&ctx), b.det(&ctx));
            assert_eq!(lhs, rhs);
        }
    }
}
