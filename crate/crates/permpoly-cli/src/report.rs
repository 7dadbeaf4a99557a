//! Report rows and the three output formats (human table, JSON, CSV).
//!
//! Field elements serialize two ways: `*_coeffs` fields are nested arrays of
//! base-p digits (low-to-high, one vector per tower coordinate), and the
//! compact string form joins each coordinate's digits (low-to-high) with the
//! coordinates separated by commas. Every report echoes both moduli so the
//! element encodings are portable.

use permpoly::FieldCtx;
use serde::Serialize;

#[derive(Serialize, Clone)]
pub struct Meta {
    pub command: String,
    pub p: u64,
    pub m: u32,
    pub n: u32,
    pub q: u64,
    pub order: u64,
    pub unit_circle_order: u64,
    /// base modulus digits over F_p, low-to-high, monic
    pub base_modulus: Vec<u64>,
    /// top modulus coefficients as digit vectors over F_p, low-to-high
    pub top_modulus: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
}

impl Meta {
    pub fn new(command: &str, ctx: &FieldCtx) -> Meta {
        Meta {
            command: command.to_string(),
            p: ctx.p(),
            m: ctx.m(),
            n: ctx.n(),
            q: ctx.q(),
            order: ctx.order(),
            unit_circle_order: ctx.unit_circle_order(),
            base_modulus: ctx.base_modulus().to_vec(),
            top_modulus: ctx
                .top_modulus()
                .iter()
                .map(|&c| fq_digits(ctx, c))
                .collect(),
            family: None,
            k: None,
        }
    }

    pub fn header_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!(
                "# command={} p={} m={} n={} q={} order={} unit_circle_order={}",
                self.command, self.p, self.m, self.n, self.q, self.order, self.unit_circle_order
            ),
            format!(
                "# base_modulus={} top_modulus={}",
                join_digits(&self.base_modulus),
                self.top_modulus
                    .iter()
                    .map(|d| join_digits(d))
                    .collect::<Vec<_>>()
                    .join(","),
            ),
        ];
        if let Some(f) = &self.family {
            let k = self.k.map(|k| format!(" k={k}")).unwrap_or_default();
            lines.push(format!("# family={f}{k}"));
        }
        lines
    }
}

pub fn fq_digits(ctx: &FieldCtx, code: u32) -> Vec<u64> {
    let mut digits = Vec::with_capacity(ctx.m() as usize);
    let mut t = code as u64;
    for _ in 0..ctx.m() {
        digits.push(t % ctx.p());
        t /= ctx.p();
    }
    digits
}

fn join_digits(digits: &[u64]) -> String {
    digits
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("")
}

#[derive(Serialize, Clone)]
pub struct VerifyRow {
    pub a_index: usize,
    pub a_coeffs: Vec<Vec<u64>>,
    pub a: String,
    pub s: u64,
    pub predicted: String,
    pub criterion: String,
    pub oracle: String,
    pub det_d1: String,
    pub det_d2: String,
    pub agree: bool,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub meta: Meta,
    pub rows: Vec<VerifyRow>,
    pub disagreements: usize,
}

impl VerifyReport {
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        for line in self.meta.header_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(&format!(
            "{:<7} {:<12} {:<4} {:<18} {:<8} {:<8} {:<12} {:<12} {}\n",
            "a_idx", "a", "s", "predicted", "criter.", "oracle", "detD1", "detD2", "verdict"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<7} {:<12} {:<4} {:<18} {:<8} {:<8} {:<12} {:<12} {}\n",
                r.a_index,
                r.a,
                r.s,
                r.predicted,
                r.criterion,
                r.oracle,
                r.det_d1,
                r.det_d2,
                if r.agree { "AGREE" } else { "DISAGREE" }
            ));
        }
        let pp = self.rows.iter().filter(|r| r.oracle == "PP").count();
        out.push_str(&format!(
            "# rows={} permutations={} disagreements={}\n",
            self.rows.len(),
            pp,
            self.disagreements
        ));
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::new();
        for line in self.meta.header_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str("a_index,a_coeffs,s,predicted,criterion,oracle,det_d1,det_d2,agree\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.a_index,
                quote(&r.a),
                r.s,
                quote(&r.predicted),
                r.criterion,
                r.oracle,
                quote(&r.det_d1),
                quote(&r.det_d2),
                r.agree
            ));
        }
        out
    }
}

fn quote(s: &str) -> String {
    format!("\"{s}\"")
}

#[derive(Serialize)]
pub struct InverseTerm {
    /// multiplier `theta_i` in front of the whole term
    pub theta: String,
    /// row of normalized coefficients applied to (X, X^q, X^{q^2})
    pub eta_row: Vec<String>,
    /// outer exponent r_i
    pub r: u64,
    /// shift s_i in m_i r_i = 1 + s_i (q-1)
    pub sshift: u64,
    /// the constant `a_i^{-q s_i}` folded into the term
    pub scale: String,
}

#[derive(Serialize)]
pub struct InverseReport {
    pub meta: Meta,
    pub a_index: usize,
    pub a: String,
    pub s: u64,
    pub a_mat: Vec<Vec<String>>,
    pub d_row: Vec<String>,
    pub det_d1: String,
    pub det_d2: String,
    pub c_mat: Vec<Vec<String>>,
    pub b_row: Vec<String>,
    pub terms: Vec<InverseTerm>,
    pub verified: bool,
    pub agrees_with_generic: bool,
}

impl InverseReport {
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        for line in self.meta.header_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(&format!("# a_index={} a={} s={}\n", self.a_index, self.a, self.s));
        out.push_str(&format!("det_d1 = {}\ndet_d2 = {}\n", self.det_d1, self.det_d2));
        for (i, row) in self.a_mat.iter().enumerate() {
            out.push_str(&format!("a_mat[{}] = [{}]\n", i + 1, row.join("  ")));
        }
        out.push_str(&format!("d_row   = [{}]\n", self.d_row.join("  ")));
        for (i, row) in self.c_mat.iter().enumerate() {
            out.push_str(&format!("c_mat[{}] = [{}]\n", i + 1, row.join("  ")));
        }
        out.push_str(&format!("b_row   = [{}]\n", self.b_row.join("  ")));
        out.push_str("inverse terms (sum over i of theta_i * scale_i * (eta_i . (X, X^q, X^q2))^r_i):\n");
        for (i, t) in self.terms.iter().enumerate() {
            out.push_str(&format!(
                "  term[{}]: theta={} scale={} r={} sshift={} eta=[{}]\n",
                i + 1,
                t.theta,
                t.scale,
                t.r,
                t.sshift,
                t.eta_row.join("  ")
            ));
        }
        out.push_str(&format!(
            "verified: {}\nagrees_with_generic: {}\n",
            self.verified, self.agrees_with_generic
        ));
        out
    }
}

#[derive(Serialize)]
pub struct LemmaRow {
    pub a: String,
    pub a_coeffs: Vec<Vec<u64>>,
    pub root_count: usize,
    pub roots: Vec<String>,
    pub degenerate: bool,
    pub ok: bool,
}

#[derive(Serialize)]
pub struct LemmaReport {
    pub meta: Meta,
    pub which: String,
    pub rows: Vec<LemmaRow>,
    pub skipped: Vec<String>,
    pub violations: usize,
}

impl LemmaReport {
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        for line in self.meta.header_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(&format!("# equation={}\n", self.which));
        out.push_str(&format!("{:<12} {:<8} {:<12} {}\n", "A", "count", "class", "ok"));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<12} {:<8} {:<12} {}\n",
                r.a,
                r.root_count,
                if r.degenerate { "degenerate" } else { "generic" },
                r.ok
            ));
        }
        if !self.skipped.is_empty() {
            out.push_str(&format!("# skipped (hypothesis excludes): {}\n", self.skipped.join(" ")));
        }
        out.push_str(&format!("# rows={} violations={}\n", self.rows.len(), self.violations));
        out
    }
}

#[derive(Serialize)]
pub struct EquivReport {
    pub meta: Meta,
    pub fam_a: String,
    pub fam_b: String,
    pub qm: Option<QmWitnessOut>,
    pub linear: Option<LinearWitnessOut>,
    pub searched: Vec<String>,
}

#[derive(Serialize)]
pub struct QmWitnessOut {
    pub scale: String,
    pub inner: String,
    pub d: u64,
}

#[derive(Serialize)]
pub struct LinearWitnessOut {
    pub a1_coeffs: Vec<String>,
    pub a2_coeffs: Vec<String>,
}

impl EquivReport {
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        for line in self.meta.header_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(&format!("# fam_a={} fam_b={}\n", self.fam_a, self.fam_b));
        if self.searched.iter().any(|s| s == "qm") {
            match &self.qm {
                Some(w) => out.push_str(&format!(
                    "qm: WITNESS scale={} inner={} d={}\n",
                    w.scale, w.inner, w.d
                )),
                None => out.push_str("qm: NONE\n"),
            }
        }
        if self.searched.iter().any(|s| s == "linear") {
            match &self.linear {
                Some(w) => out.push_str(&format!(
                    "linear: WITNESS a1=[{}] a2=[{}]\n",
                    w.a1_coeffs.join("  "),
                    w.a2_coeffs.join("  ")
                )),
                None => out.push_str("linear: NONE\n"),
            }
        }
        out
    }
}
