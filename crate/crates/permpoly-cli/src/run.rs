//! Command implementations. Sweeps parallelize across rows through
//! `PERMPOLY_THREADS` scoped workers with a fixed chunk assignment, so the
//! row order (and therefore the rendered report) is identical for any worker
//! count.

use permpoly::families::{
    closed_form_inverse, construct, inverse_coeffs, predict_is_pp, to_wuyuan, Family, FamilyError,
    FamilyParams,
};
use permpoly::oracle::{
    self, is_bijection_exhaustive, linear_search_with, qm_search, roots_in_mu, LinearizedPerms,
    MuEquation, OracleError,
};
use permpoly::{Elem, FieldCtx, FieldError};

use crate::report::*;

/// Failures mapped onto the documented process exit codes.
pub enum CmdError {
    /// exit 2
    Usage(String),
    /// exit 3
    SizeCap(String),
    /// exit 4
    NotAPp(String),
    /// exit 5
    RoundTrip(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Usage(_) => 2,
            CmdError::SizeCap(_) => 3,
            CmdError::NotAPp(_) => 4,
            CmdError::RoundTrip(_) => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Usage(m) | CmdError::SizeCap(m) | CmdError::NotAPp(m) | CmdError::RoundTrip(m) => m,
        }
    }
}

pub fn build_ctx(p: u64, m: u32) -> Result<FieldCtx, CmdError> {
    FieldCtx::new(p, m, 3).map_err(|e| match e {
        FieldError::SizeCap(o) => CmdError::SizeCap(format!("field order {o} over the cap")),
        other => CmdError::Usage(other.to_string()),
    })
}

fn map_family_err(e: FamilyError) -> CmdError {
    match e {
        FamilyError::WrongCharacteristic
        | FamilyError::WrongTowerDegree(_)
        | FamilyError::NotUnitCircle
        | FamilyError::BadExponent => CmdError::Usage(e.to_string()),
        FamilyError::SingularMatrix => CmdError::NotAPp(e.to_string()),
        FamilyError::RoundTripFailure => CmdError::RoundTrip(e.to_string()),
        other => CmdError::Usage(other.to_string()),
    }
}

pub fn worker_count() -> usize {
    std::env::var("PERMPOLY_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

pub fn select_a(ctx: &FieldCtx, a_all: bool, a_index: Option<usize>) -> Result<Vec<(usize, Elem)>, CmdError> {
    let mu = ctx.unit_circle();
    if a_all {
        Ok(mu.iter().copied().enumerate().collect())
    } else {
        let idx = a_index.ok_or_else(|| CmdError::Usage("pass --a-all or --a-index N".into()))?;
        let a = *mu
            .get(idx)
            .ok_or_else(|| CmdError::Usage(format!("a-index {idx} out of range 0..{}", mu.len())))?;
        Ok(vec![(idx, a)])
    }
}

fn verify_row(ctx: &FieldCtx, family: Family, k: u64, a_index: usize, a: Elem, s: u64) -> Result<VerifyRow, CmdError> {
    let params = FamilyParams::new(ctx, family, a, s, k).map_err(map_family_err)?;
    let predicted = predict_is_pp(ctx, &params).map_err(map_family_err)?;
    let poly = construct(ctx, &params).map_err(map_family_err)?;
    let spec = to_wuyuan(ctx, &params).map_err(map_family_err)?;
    let criterion = spec.is_pp(ctx);
    let (d1, d2) = spec.dets(ctx);
    let oracle = is_bijection_exhaustive(ctx, |x| poly.eval(ctx, x))
        .map_err(|e| CmdError::SizeCap(e.to_string()))?;
    let agree = criterion == oracle && predicted.verdict().map_or(true, |v| v == oracle);
    let pp_str = |b: bool| if b { "PP" } else { "not-PP" }.to_string();
    Ok(VerifyRow {
        a_index,
        a_coeffs: ctx.coords(a),
        a: ctx.format_elem(a),
        s,
        predicted: predicted.to_string(),
        criterion: pp_str(criterion),
        oracle: pp_str(oracle),
        det_d1: ctx.format_elem(d1),
        det_d2: ctx.format_elem(d2),
        agree,
    })
}

pub fn run_verify(
    ctx: &FieldCtx,
    family: Family,
    k: u64,
    a_sel: Vec<(usize, Elem)>,
    svals: Vec<u64>,
) -> Result<VerifyReport, CmdError> {
    // validate the family/field combination once up front
    if let Some(&(_, a0)) = a_sel.first() {
        let params = FamilyParams::new(ctx, family, a0, *svals.first().unwrap_or(&1), k)
            .map_err(map_family_err)?;
        construct(ctx, &params).map_err(map_family_err)?;
    }
    let jobs: Vec<(usize, Elem, u64)> = a_sel
        .iter()
        .flat_map(|&(idx, a)| svals.iter().map(move |&s| (idx, a, s)))
        .collect();
    let workers = worker_count().min(jobs.len().max(1));
    let mut slots: Vec<Option<Result<VerifyRow, CmdError>>> = Vec::new();
    slots.resize_with(jobs.len(), || None);
    let chunk = jobs.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        for (job_chunk, slot_chunk) in jobs.chunks(chunk).zip(slots.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (&(idx, a, s), slot) in job_chunk.iter().zip(slot_chunk.iter_mut()) {
                    *slot = Some(verify_row(ctx, family, k, idx, a, s));
                }
            });
        }
    });
    let mut rows = Vec::with_capacity(slots.len());
    for slot in slots {
        rows.push(slot.expect("all jobs assigned")?);
    }
    let disagreements = rows.iter().filter(|r| !r.agree).count();
    let mut meta = Meta::new("verify", ctx);
    meta.family = Some(family.to_string());
    meta.k = (family == Family::F1).then_some(k);
    Ok(VerifyReport {
        meta,
        rows,
        disagreements,
    })
}

pub fn run_inverse(
    ctx: &FieldCtx,
    family: Family,
    k: u64,
    a_index: usize,
    s: u64,
) -> Result<InverseReport, CmdError> {
    let mu = ctx.unit_circle();
    let a = *mu
        .get(a_index)
        .ok_or_else(|| CmdError::Usage(format!("a-index {a_index} out of range 0..{}", mu.len())))?;
    let params = FamilyParams::new(ctx, family, a, s, k).map_err(map_family_err)?;
    let poly = construct(ctx, &params).map_err(map_family_err)?;
    let spec = to_wuyuan(ctx, &params).map_err(map_family_err)?;
    let is_pp = spec.is_pp(ctx)
        && is_bijection_exhaustive(ctx, |x| poly.eval(ctx, x))
            .map_err(|e| CmdError::SizeCap(e.to_string()))?;
    if !is_pp {
        return Err(CmdError::NotAPp(format!(
            "instance {family} a_index={a_index} s={s} is not a permutation"
        )));
    }
    let table = inverse_coeffs(ctx, &params).map_err(map_family_err)?;
    let closed = closed_form_inverse(ctx, &params).map_err(map_family_err)?;
    let generic = spec.generic_inverse(ctx).map_err(|e| CmdError::RoundTrip(e.to_string()))?;
    let verified = oracle::verify_inverse(ctx, |x| poly.eval(ctx, x), |y| closed.eval(ctx, y))
        .map_err(|e| CmdError::SizeCap(e.to_string()))?;
    if !verified {
        return Err(CmdError::RoundTrip("closed-form inverse failed round-trip".into()));
    }
    let agrees = (0..ctx.order()).all(|code| {
        let y = ctx.elem_from_code(code);
        closed.eval(ctx, y) == generic.eval(ctx, y)
    });
    let fe = |e: Elem| ctx.format_elem(e);
    let terms = (0..3)
        .map(|i| InverseTerm {
            theta: fe(closed.theta[i]),
            eta_row: closed.eta[i].iter().map(|&e| fe(e)).collect(),
            r: closed.r[i],
            sshift: closed.sshift[i],
            scale: fe(closed.abase[i]),
        })
        .collect();
    let mut meta = Meta::new("inverse", ctx);
    meta.family = Some(family.to_string());
    meta.k = (family == Family::F1).then_some(k);
    Ok(InverseReport {
        meta,
        a_index,
        a: fe(a),
        s,
        a_mat: table.a_mat.iter().map(|r| r.iter().map(|&e| fe(e)).collect()).collect(),
        d_row: table.d_row.iter().map(|&e| fe(e)).collect(),
        det_d1: fe(table.det_d1),
        det_d2: fe(table.det_d2),
        c_mat: table.c_mat.iter().map(|r| r.iter().map(|&e| fe(e)).collect()).collect(),
        b_row: table.b_row.iter().map(|&e| fe(e)).collect(),
        terms,
        verified,
        agrees_with_generic: agrees,
    })
}

pub fn run_lemma(ctx: &FieldCtx, which: &str) -> Result<LemmaReport, CmdError> {
    if ctx.p() != 2 {
        return Err(CmdError::Usage("root audits require characteristic 2".into()));
    }
    let q = ctx.q();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut violations = 0usize;
    match which {
        "3.1" => {
            // every nonzero A in the top field; expected count 1, or q+1 when
            // A^{q+1} + A + 1 = 0
            for code in 1..ctx.order() {
                let a = ctx.elem_from_code(code);
                let roots = roots_in_mu(ctx, MuEquation::XTerm, a)
                    .map_err(|e| CmdError::Usage(e.to_string()))?;
                let degenerate = ctx.add(ctx.add(ctx.pow_u(a, q + 1), a), ctx.one()).is_zero();
                let expect = if degenerate { q as usize + 1 } else { 1 };
                let ok = roots.len() == expect && roots.contains(&ctx.one());
                if !ok {
                    violations += 1;
                }
                rows.push(LemmaRow {
                    a: ctx.format_elem(a),
                    a_coeffs: ctx.coords(a),
                    root_count: roots.len(),
                    roots: roots.iter().map(|&r| ctx.format_elem(r)).collect(),
                    degenerate,
                    ok,
                });
            }
        }
        "3.2" => {
            // A in F_q*; for even m the hypothesis excludes A^2 + A + 1 = 0
            for c in 1..q as u32 {
                let a = ctx.embed_scalar(c);
                if ctx.m() % 2 == 0 && ctx.add(ctx.add(ctx.mul(a, a), a), ctx.one()).is_zero() {
                    skipped.push(ctx.format_elem(a));
                    continue;
                }
                let roots = roots_in_mu(ctx, MuEquation::XqTerm, a)
                    .map_err(|e| CmdError::Usage(e.to_string()))?;
                let ok = roots.len() == 1 && roots[0] == ctx.one();
                if !ok {
                    violations += 1;
                }
                rows.push(LemmaRow {
                    a: ctx.format_elem(a),
                    a_coeffs: ctx.coords(a),
                    root_count: roots.len(),
                    roots: roots.iter().map(|&r| ctx.format_elem(r)).collect(),
                    degenerate: false,
                    ok,
                });
            }
        }
        other => {
            return Err(CmdError::Usage(format!(
                "unknown audit `{other}` (expected 3.1 or 3.2)"
            )))
        }
    }
    Ok(LemmaReport {
        meta: Meta::new("lemma", ctx),
        which: which.to_string(),
        rows,
        skipped,
        violations,
    })
}

pub struct EquivSide {
    pub family: Family,
    pub k: u64,
    pub a_index: usize,
    pub s: u64,
}

pub fn run_equiv(
    ctx: &FieldCtx,
    side_a: EquivSide,
    side_b: EquivSide,
    kind: &str,
) -> Result<EquivReport, CmdError> {
    let mu = ctx.unit_circle();
    let get = |side: &EquivSide| -> Result<_, CmdError> {
        let a = *mu.get(side.a_index).ok_or_else(|| {
            CmdError::Usage(format!("a-index {} out of range 0..{}", side.a_index, mu.len()))
        })?;
        let params = FamilyParams::new(ctx, side.family, a, side.s, side.k).map_err(map_family_err)?;
        construct(ctx, &params).map_err(map_family_err)
    };
    let fa = get(&side_a)?;
    let fb = get(&side_b)?;
    let map_cap = |e: OracleError| match e {
        OracleError::SizeCap(..) => CmdError::SizeCap(e.to_string()),
        other => CmdError::Usage(other.to_string()),
    };
    let mut searched = Vec::new();
    let qm = if kind == "qm" || kind == "both" {
        searched.push("qm".to_string());
        qm_search(ctx, |x| fa.eval(ctx, x), |x| fb.eval(ctx, x))
            .map_err(map_cap)?
            .map(|w| QmWitnessOut {
                scale: ctx.format_elem(w.scale),
                inner: ctx.format_elem(w.inner),
                d: w.d,
            })
    } else {
        None
    };
    let linear = if kind == "linear" || kind == "both" {
        searched.push("linear".to_string());
        let perms = LinearizedPerms::enumerate(ctx).map_err(map_cap)?;
        linear_search_with(ctx, |x| fa.eval(ctx, x), |x| fb.eval(ctx, x), &perms)
            .map_err(map_cap)?
            .map(|(a1, a2)| LinearWitnessOut {
                a1_coeffs: a1.coeffs().iter().map(|&c| ctx.format_elem(c)).collect(),
                a2_coeffs: a2.coeffs().iter().map(|&c| ctx.format_elem(c)).collect(),
            })
    } else {
        None
    };
    let mut meta = Meta::new("equiv", ctx);
    meta.family = None;
    Ok(EquivReport {
        meta,
        fam_a: side_a.family.to_string(),
        fam_b: side_b.family.to_string(),
        qm,
        linear,
        searched,
    })
}

/// Parse `--s-window A..B` (inclusive).
pub fn parse_window(w: &str) -> Result<Vec<u64>, CmdError> {
    let parts: Vec<&str> = w.split("..").collect();
    if parts.len() != 2 {
        return Err(CmdError::Usage(format!("bad s-window `{w}` (expected A..B)")));
    }
    let lo: u64 = parts[0]
        .parse()
        .map_err(|_| CmdError::Usage(format!("bad window start `{}`", parts[0])))?;
    let hi: u64 = parts[1]
        .trim_start_matches('=')
        .parse()
        .map_err(|_| CmdError::Usage(format!("bad window end `{}`", parts[1])))?;
    if lo == 0 || hi < lo {
        return Err(CmdError::Usage(format!("empty or zero-based window `{w}`")));
    }
    Ok((lo..=hi).collect())
}
