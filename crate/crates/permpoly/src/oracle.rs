//! Brute-force ground truth: exhaustive bijectivity, inverse round-trips,
//! root counts over the unit circle, and quasi-multiplicative / linear
//! equivalence searches.
//!
//! Everything here is deterministic. Witness searches scan in lexicographic
//! order so reruns and sharded runs report identical results.


use thiserror::Error;

use crate::ffield::{Elem, FieldCtx};
use crate::qpoly::LinearizedPoly;

/// Exhaustive checks refuse anything above the desk-scale cap.
pub const EXHAUSTIVE_CAP: u64 = 1 << 24;
/// Triple-loop search over (a, b, d); quadratic-ish in the field order.
pub const QM_CAP: u64 = 1 << 10;
/// Enumerates linearized permutations; pairs grow fast.
pub const LINEAR_CAP: u64 = 1 << 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("field order {0} exceeds the cap {1} for this check")]
    SizeCap(u64, u64),
    #[error("bad parameter: {0}")]
    BadParameter(&'static str),
}

fn check_cap(ctx: &FieldCtx, cap: u64) -> Result<(), OracleError> {
    if ctx.order() > cap {
        Err(OracleError::SizeCap(ctx.order(), cap))
    } else {
        Ok(())
    }
}

struct Bitmap(Vec<u64>);

impl Bitmap {
    fn new(bits: u64) -> Self {
        Bitmap(vec![0u64; (bits as usize).div_ceil(64)])
    }

    /// Sets the bit; returns whether it was already set.
    fn test_and_set(&mut self, i: u64) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        let was = self.0[w] >> b & 1 == 1;
        self.0[w] |= 1 << b;
        was
    }
}

/// True iff the image of the full field under `f` has no duplicates.
pub fn is_bijection_exhaustive(
    ctx: &FieldCtx,
    f: impl Fn(Elem) -> Elem,
) -> Result<bool, OracleError> {
    check_cap(ctx, EXHAUSTIVE_CAP)?;
    let mut seen = Bitmap::new(ctx.order());
    for code in 0..ctx.order() {
        let y = f(ctx.elem_from_code(code));
        if seen.test_and_set(ctx.code(y)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff `g(f(x)) = x` for every field element.
pub fn verify_inverse(
    ctx: &FieldCtx,
    f: impl Fn(Elem) -> Elem,
    g: impl Fn(Elem) -> Elem,
) -> Result<bool, OracleError> {
    check_cap(ctx, EXHAUSTIVE_CAP)?;
    for code in 0..ctx.order() {
        let x = ctx.elem_from_code(code);
        if g(f(x)) != x {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The two root-count audits over the unit circle, for characteristic 2:
/// `X^{q+1} + (A+1)X + A` and `X^{q+1} + (A+1)X^q + A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuEquation {
    /// `X^{q+1} + (A+1)X + A`; any `A != 0` in the top field.
    XTerm,
    /// `X^{q+1} + (A+1)X^q + A`; requires `A` in `F_q*`.
    XqTerm,
}

/// All roots of the selected polynomial lying in the unit circle, in the
/// deterministic enumeration order of `ctx.unit_circle()`.
pub fn roots_in_mu(ctx: &FieldCtx, kind: MuEquation, a: Elem) -> Result<Vec<Elem>, OracleError> {
    if ctx.p() != 2 {
        return Err(OracleError::BadParameter("requires characteristic 2"));
    }
    if a.is_zero() {
        return Err(OracleError::BadParameter("A must be nonzero"));
    }
    if kind == MuEquation::XqTerm && ctx.frobenius(a, 1) != a {
        return Err(OracleError::BadParameter("A must lie in F_q*"));
    }
    let a1 = ctx.add(a, ctx.one());
    let q = ctx.q();
    let mut roots = Vec::new();
    for &x in ctx.unit_circle() {
        let xq = ctx.pow_u(x, q);
        let head = ctx.mul(xq, x); // x^{q+1}
        let mid = match kind {
            MuEquation::XTerm => ctx.mul(a1, x),
            MuEquation::XqTerm => ctx.mul(a1, xq),
        };
        if ctx.add(ctx.add(head, mid), a).is_zero() {
            roots.push(x);
        }
    }
    Ok(roots)
}

/// A quasi-multiplicative witness: `f(X) = scale · g(inner · X^d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QmWitness {
    pub scale: Elem,
    pub inner: Elem,
    pub d: u64,
}

/// First witness in lexicographic `(d, scale-code, inner-code)` order, or
/// `None`. `d` ranges over `1..=order-2` with `gcd(d, order-1) = 1`.
pub fn qm_search(
    ctx: &FieldCtx,
    f: impl Fn(Elem) -> Elem,
    g: impl Fn(Elem) -> Elem,
) -> Result<Option<QmWitness>, OracleError> {
    check_cap(ctx, QM_CAP)?;
    let order = ctx.order();
    let ftab: Vec<Elem> = (0..order).map(|c| f(ctx.elem_from_code(c))).collect();
    let gtab: Vec<Elem> = (0..order).map(|c| g(ctx.elem_from_code(c))).collect();
    for d in 1..order - 1 {
        if crate::ffield::gcd_u64(d, order - 1) != 1 {
            continue;
        }
        let xd: Vec<Elem> = (0..order)
            .map(|c| ctx.pow_u(ctx.elem_from_code(c), d))
            .collect();
        for scale_code in 1..order {
            let scale = ctx.elem_from_code(scale_code);
            for inner_code in 1..order {
                let inner = ctx.elem_from_code(inner_code);
                let ok = (0..order).all(|c| {
                    let arg = ctx.mul(inner, xd[c as usize]);
                    ftab[c as usize] == ctx.mul(scale, gtab[ctx.code(arg) as usize])
                });
                if ok {
                    return Ok(Some(QmWitness { scale, inner, d }));
                }
            }
        }
    }
    Ok(None)
}

/// Every linearized permutation of the field, enumerated once and reused
/// across search calls. Only the coefficient codes are kept (the value
/// tables would not fit in memory near the cap). Coefficient tuples scan
/// ascending with the `X` coefficient as the least significant digit, so the
/// identity map is the first permutation enumerated.
pub struct LinearizedPerms {
    coeff_codes: Vec<[u32; crate::ffield::MAX_DEGREE]>,
}

impl LinearizedPerms {
    pub fn enumerate(ctx: &FieldCtx) -> Result<Self, OracleError> {
        check_cap(ctx, LINEAR_CAP)?;
        let order = ctx.order();
        let n = ctx.n() as usize;
        let total = order.pow(n as u32);
        let mut coeff_codes = Vec::new();
        for tuple in 0..total {
            let mut t = tuple;
            let mut codes = [0u32; crate::ffield::MAX_DEGREE];
            let mut coeffs = vec![ctx.zero(); n];
            for (code, c) in codes.iter_mut().zip(coeffs.iter_mut()).take(n) {
                *code = (t % order) as u32;
                *c = ctx.elem_from_code(t % order);
                t /= order;
            }
            let poly = LinearizedPoly::new(ctx, coeffs).expect("matching context");
            if poly.is_bijection(ctx) {
                coeff_codes.push(codes);
            }
        }
        Ok(LinearizedPerms { coeff_codes })
    }

    pub fn len(&self) -> usize {
        self.coeff_codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeff_codes.is_empty()
    }

    pub fn poly(&self, ctx: &FieldCtx, i: usize) -> LinearizedPoly {
        let coeffs = self.coeff_codes[i][..ctx.n() as usize]
            .iter()
            .map(|&c| ctx.elem_from_code(c as u64))
            .collect();
        LinearizedPoly::new(ctx, coeffs).expect("matching context")
    }
}

/// Searches for linearized permutations with `f = A2 ∘ g ∘ A1`, returning
/// the first `(A1, A2)` in enumeration order or `None`. Enumerates `A1` and
/// solves for `A2` when `g` permutes; degenerate (non-bijective) pairs fall
/// back to a full scan, which is only allowed on tiny fields.
pub fn linear_search(
    ctx: &FieldCtx,
    f: impl Fn(Elem) -> Elem,
    g: impl Fn(Elem) -> Elem,
) -> Result<Option<(LinearizedPoly, LinearizedPoly)>, OracleError> {
    let perms = LinearizedPerms::enumerate(ctx)?;
    linear_search_with(ctx, f, g, &perms)
}

/// Inverse of the Moore matrix of the polynomial basis `1, y, ..., y^{n-1}`;
/// solving against it recovers the coefficients of any linearized map from
/// its values on the basis.
fn moore_inverse(ctx: &FieldCtx) -> crate::linalg::Mat {
    let n = ctx.n() as usize;
    let mut m = crate::linalg::Mat::zero(ctx, n);
    for i in 0..n {
        let b = ctx.elem_from_code(ctx.q().pow(i as u32)); // y^i
        for j in 0..n {
            m.e[i][j] = ctx.frobenius(b, j as i64);
        }
    }
    m.inverse(ctx)
        .expect("a basis always has a nonsingular Moore matrix")
}

pub fn linear_search_with(
    ctx: &FieldCtx,
    f: impl Fn(Elem) -> Elem,
    g: impl Fn(Elem) -> Elem,
    perms: &LinearizedPerms,
) -> Result<Option<(LinearizedPoly, LinearizedPoly)>, OracleError> {
    check_cap(ctx, LINEAR_CAP)?;
    let order = ctx.order();
    let n = ctx.n() as usize;
    let ftab: Vec<u64> = (0..order)
        .map(|c| ctx.code(f(ctx.elem_from_code(c))))
        .collect();
    let gtab: Vec<u64> = (0..order)
        .map(|c| ctx.code(g(ctx.elem_from_code(c))))
        .collect();
    let f_bij = is_permutation_table(&ftab);
    let g_bij = is_permutation_table(&gtab);
    if f_bij != g_bij {
        // composing with permutations preserves bijectivity
        return Ok(None);
    }
    let eval_table = |poly: &LinearizedPoly, out: &mut Vec<u64>| {
        out.clear();
        out.extend((0..order).map(|c| ctx.code(poly.eval(ctx, ctx.elem_from_code(c)))));
    };
    if g_bij {
        let minv = moore_inverse(ctx);
        let mut t1 = Vec::with_capacity(order as usize);
        let mut hinv = vec![0u64; order as usize];
        for i1 in 0..perms.len() {
            let a1 = perms.poly(ctx, i1);
            eval_table(&a1, &mut t1);
            // h = g ∘ A1 is a permutation; A2 is forced to be f ∘ h^{-1}
            for x in 0..order as usize {
                hinv[gtab[t1[x] as usize] as usize] = x as u64;
            }
            let a2 = |y: u64| ftab[hinv[y as usize] as usize];
            // recover candidate coefficients from the basis images, then
            // check the candidate matches a2 everywhere
            let mut coeffs = vec![ctx.zero(); n];
            for (j, c) in coeffs.iter_mut().enumerate() {
                let mut acc = ctx.zero();
                for i in 0..n {
                    let rhs = ctx.elem_from_code(a2(ctx.q().pow(i as u32)));
                    acc = ctx.add(acc, ctx.mul(minv.e[j][i], rhs));
                }
                *c = acc;
            }
            let cand = LinearizedPoly::new(ctx, coeffs).expect("matching context");
            let matches = (0..order).all(|y| {
                ctx.code(cand.eval(ctx, ctx.elem_from_code(y))) == a2(y)
            });
            if matches {
                return Ok(Some((a1, cand)));
            }
        }
        return Ok(None);
    }
    // both maps degenerate: full pair scan with early exit
    if perms.len() > 2_000 {
        return Err(OracleError::SizeCap(perms.len() as u64, 2_000));
    }
    let tables: Vec<Vec<u64>> = (0..perms.len())
        .map(|i| {
            let mut t = Vec::new();
            eval_table(&perms.poly(ctx, i), &mut t);
            t
        })
        .collect();
    for (i1, t1) in tables.iter().enumerate() {
        for (i2, t2) in tables.iter().enumerate() {
            let ok = (0..order as usize).all(|x| ftab[x] == t2[gtab[t1[x] as usize] as usize]);
            if ok {
                return Ok(Some((perms.poly(ctx, i1), perms.poly(ctx, i2))));
            }
        }
    }
    Ok(None)
}

fn is_permutation_table(t: &[u64]) -> bool {
    let mut seen = Bitmap::new(t.len() as u64);
    t.iter().all(|&y| !seen.test_and_set(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bijection_basics() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        assert!(is_bijection_exhaustive(&ctx, |x| x).unwrap());
        let one = ctx.one();
        assert!(!is_bijection_exhaustive(&ctx, |_| one).unwrap());
    }

    #[test]
    fn verify_inverse_basics() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        assert!(verify_inverse(&ctx, |x| x, |x| x).unwrap());
        // x -> x^2 is a bijection of F_8 but not an involution
        let sq = |x: Elem| ctx.mul(x, x);
        assert!(is_bijection_exhaustive(&ctx, sq).unwrap());
        assert!(!verify_inverse(&ctx, sq, sq).unwrap());
    }

    #[test]
    fn mu_roots_always_contain_one() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        for code in 1..8 {
            let a = ctx.elem_from_code(code);
            let roots = roots_in_mu(&ctx, MuEquation::XTerm, a).unwrap();
            assert!(roots.contains(&ctx.one()), "A={code}");
        }
    }

    #[test]
    fn mu_root_classification_q2() {
        // degenerate A (A^3+A+1 = 0) have q+1 = 3 roots; the rest exactly one
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        let expected: [(u64, Vec<u64>); 7] = [
            (1, vec![1]),
            (2, vec![1, 4, 5]),
            (3, vec![1]),
            (4, vec![1, 6, 7]),
            (5, vec![1]),
            (6, vec![1, 2, 3]),
            (7, vec![1]),
        ];
        for (code, want) in expected {
            let roots = roots_in_mu(&ctx, MuEquation::XTerm, ctx.elem_from_code(code)).unwrap();
            let got: Vec<u64> = roots.iter().map(|&r| ctx.code(r)).collect();
            assert_eq!(got, want, "A = {code}");
        }
    }

    #[test]
    fn mu_roots_parameter_validation() {
        let ctx3 = FieldCtx::new(3, 1, 3).unwrap();
        assert!(roots_in_mu(&ctx3, MuEquation::XTerm, ctx3.one()).is_err());
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        assert!(roots_in_mu(&ctx, MuEquation::XTerm, ctx.zero()).is_err());
        // code 2 is not in F_q = F_2 for the X^q variant
        assert!(roots_in_mu(&ctx, MuEquation::XqTerm, ctx.elem_from_code(2)).is_err());
        assert_eq!(
            roots_in_mu(&ctx, MuEquation::XqTerm, ctx.one())
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn qm_search_identity_and_planted() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        let g = |x: Elem| ctx.add(ctx.mul(x, ctx.mul(x, x)), x); // arbitrary map
        let w = qm_search(&ctx, g, g).unwrap().unwrap();
        assert_eq!((ctx.code(w.scale), ctx.code(w.inner), w.d), (1, 1, 1));
        // planted scaling: f(x) = c * g(e * x)
        let c = ctx.elem_from_code(3);
        let e = ctx.elem_from_code(5);
        let f = |x: Elem| ctx.mul(c, g(ctx.mul(e, x)));
        assert!(qm_search(&ctx, f, g).unwrap().is_some());
    }

    #[test]
    fn qm_search_respects_cap() {
        let big = FieldCtx::new(2, 4, 3).unwrap(); // 4096 > 2^10
        assert!(matches!(
            qm_search(&big, |x| x, |x| x),
            Err(OracleError::SizeCap(..))
        ));
    }

    #[test]
    fn linear_search_identity_and_planted() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        let perms = LinearizedPerms::enumerate(&ctx).unwrap();
        assert_eq!(perms.len(), 168);
        let g = |x: Elem| ctx.pow_u(x, 6); // x^6 = x^{-1} on nonzero, a PP of F_8
        assert!(is_bijection_exhaustive(&ctx, g).unwrap());
        let (a1, a2) = linear_search_with(&ctx, g, g, &perms).unwrap().unwrap();
        assert_eq!(a1, LinearizedPoly::identity(&ctx));
        assert_eq!(a2, LinearizedPoly::identity(&ctx));
        // plant the Frobenius map as the outer permutation
        let l = LinearizedPoly::monomial(&ctx, ctx.one(), 1);
        assert!(l.is_bijection(&ctx));
        let f = |x: Elem| l.eval(&ctx, g(x));
        let found = linear_search_with(&ctx, f, g, &perms).unwrap();
        assert!(found.is_some());
    }

    #[test]
    fn searches_find_randomized_planted_equivalences() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        let perms = LinearizedPerms::enumerate(&ctx).unwrap();
        let g = |x: Elem| ctx.pow_u(x, 6);
        let mut rng = StdRng::seed_from_u64(777);
        let coprime_d: Vec<u64> = (1..7).collect(); // 7 is prime
        for _ in 0..100 {
            // quasi-multiplicative plant
            let c = ctx.elem_from_code(rng.gen_range(1..8));
            let e = ctx.elem_from_code(rng.gen_range(1..8));
            let d = coprime_d[rng.gen_range(0..coprime_d.len())];
            let f = |x: Elem| ctx.mul(c, g(ctx.mul(e, ctx.pow_u(x, d))));
            assert!(qm_search(&ctx, f, g).unwrap().is_some());
            // linear plant with random inner and outer permutations
            let a1 = perms.poly(&ctx, rng.gen_range(0..perms.len()));
            let a2 = perms.poly(&ctx, rng.gen_range(0..perms.len()));
            let f = |x: Elem| a2.eval(&ctx, g(a1.eval(&ctx, x)));
            assert!(linear_search_with(&ctx, f, g, &perms).unwrap().is_some());
        }
    }

    #[test]
    fn linear_search_mixed_bijectivity_is_none() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        let perms = LinearizedPerms::enumerate(&ctx).unwrap();
        let tr = |x: Elem| ctx.trace(x); // not a bijection
        let found = linear_search_with(&ctx, |x| x, tr, &perms).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn linear_search_plants_over_f27() {
        // exercises the coefficient-recovery path on a field where additive
        // maps are strictly richer than F_q-linear ones
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let perms = LinearizedPerms::enumerate(&ctx).unwrap();
        assert_eq!(perms.len(), 11_232); // |GL_3(F_3)| counted over F_27
        let g = |x: Elem| ctx.pow_u(x, 25); // x^{-1} on nonzero, a PP
        assert!(is_bijection_exhaustive(&ctx, g).unwrap());
        let outer = perms.poly(&ctx, 97);
        let f = |x: Elem| outer.eval(&ctx, g(x));
        let (a1, a2) = linear_search_with(&ctx, f, g, &perms).unwrap().unwrap();
        assert_eq!(a1, LinearizedPoly::identity(&ctx));
        for code in 0..ctx.order() {
            let x = ctx.elem_from_code(code);
            assert_eq!(a2.eval(&ctx, g(a1.eval(&ctx, x))), f(x));
        }
    }

    #[test]
    fn q2_family_instances_are_genuinely_equivalent() {
        // With q = 2 the trace power collapses pointwise, every family
        // instance becomes a linearized permutation, and the searches must
        // find the resulting witnesses.
        use crate::families::{construct, Family, FamilyParams};
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        let a = ctx.elem_from_code(2);
        let f5 = construct(&ctx, &FamilyParams::new(&ctx, Family::F5, a, 1, 1).unwrap()).unwrap();
        let f6 = construct(&ctx, &FamilyParams::new(&ctx, Family::F6, a, 1, 1).unwrap()).unwrap();
        let w = qm_search(&ctx, |x| f5.eval(&ctx, x), |x| f6.eval(&ctx, x))
            .unwrap()
            .expect("linearized instances are scalar-equivalent at q = 2");
        assert_eq!((ctx.code(w.scale), ctx.code(w.inner), w.d), (4, 3, 1));
        let lw = linear_search(&ctx, |x| f5.eval(&ctx, x), |x| f6.eval(&ctx, x)).unwrap();
        assert!(lw.is_some());
        // f1 at k = 1 coincides with f5 outright
        let f1 = construct(&ctx, &FamilyParams::new(&ctx, Family::F1, a, 1, 1).unwrap()).unwrap();
        let w = qm_search(&ctx, |x| f1.eval(&ctx, x), |x| f5.eval(&ctx, x))
            .unwrap()
            .unwrap();
        assert_eq!((ctx.code(w.scale), ctx.code(w.inner), w.d), (1, 1, 1));
    }
}
