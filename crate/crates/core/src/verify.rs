//! Theorem suites: every commutativity, difference-compatibility and duality
//! identity as an exact zero-residual check, plus the proof-level spectral
//! checks.
//!
//! The two dual realizations index the same canonically ordered table basis,
//! so the cross-algebra comparison is literal matrix equality; no intertwiner
//! is ever stored. Residuals of the differential duality displays drop the
//! derivative parts because they are syntactically identical on both sides:
//! both rows of the rational display carry kappa d/du, both rows of the
//! trigonometric display carry kappa u d/du, in the same coordinate u, so
//! the operator equality reduces to equality of the subtracted coefficient
//! matrices. Every operator preserves weight blocks, hence checking blockwise
//! over all margins in range is equivalent to checking on the whole
//! polynomial space.
//!
//! Difference identities are checked fully expanded, with no shift-operator
//! objects. Writing L = kappa u d_u - A for a trigonometric family and
//! M T_u for a difference family, applying both sides of `L (M T_u) =
//! (M T_u) L'` to a function and matching the coefficients of u and of du
//! gives two matrix identities:
//!
//! ```text
//! M(u) M'(u + kappa) = M'(u) M(u + kappa)                  (commutation)
//! kappa u dM/du      = A(u) M(u) - M(u) A'(u + kappa)      (mixed)
//! ```
//!
//! where the shifted arguments are plain evaluations and the scaled
//! derivative comes from the closed forms in the difference module.

use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::action::{
    casimir, pair_flip, pair_generator, pair_generator_slot, PairBlock, PairSlot, Side,
};
use crate::diffop::{coeff, curvature, DiffFamily, OpContext};
use crate::error::{Error, Result};
use crate::exec::{map_tasks, ExecMode};
use crate::matrix::{lagrange_projectors, QMatrix};
use crate::qop::{
    b_matrix, c_scalar, embedded_r, k_matrix, k_scaled_partial, n_scalar, r_eigenvalue, r_matrix,
    x_matrix, x_scaled_partial, RMatrixCache, RMatrixKey,
};
use crate::rat::Rat;
use crate::sample::{sample_point, sample_t_pair, ParamPoint};
use crate::weights::{
    binomial, enumerate_compositions, enumerate_partitions, enumerate_tables, weyl_dimension,
    Margins, WeightBlock,
};

/// One displayed equality of the duality theorems, as a residual on the
/// shared table basis. Indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualityCase {
    /// Rational KZ coefficient vs the dual rational DD coefficient.
    NdKz { i: usize },
    /// Rational DD coefficient vs the dual rational KZ coefficient.
    NdDd { a: usize },
    /// Trigonometric KZ vs dual trigonometric DD.
    HdKz { i: usize },
    /// Trigonometric DD vs dual trigonometric KZ.
    HdDd { a: usize },
    /// K product vs normalizer times dual X product.
    ZqLeft { i: usize },
    /// Normalizer times X product vs dual K product.
    ZqRight { a: usize },
    /// B times C on rows (a, b) vs the embedded dual R-matrix.
    BcrLeft { a: usize, b: usize },
    /// Embedded R-matrix on columns (i, j) vs dual B times C.
    BcrRight { i: usize, j: usize },
    /// Casimir identity relating the two actions.
    Ikn,
}

/// Exact residual of one duality display; the theorems assert the zero
/// matrix. The GLN-side constructions receive the lambda vector as their
/// factor coordinates and the z vector as their Cartan coordinates; the
/// context constructor asserts those shapes before any arithmetic.
pub fn residual(
    case: DualityCase,
    block: &Arc<WeightBlock>,
    point: &ParamPoint,
    cache: &RMatrixCache,
) -> Result<QMatrix> {
    let glk = || OpContext::new(Side::Glk, block, point);
    let gln = || OpContext::new(Side::Gln, block, point);
    match case {
        DualityCase::NdKz { i } => {
            let lhs = coeff(DiffFamily::KzRat, i, &glk())?;
            let rhs = coeff(DiffFamily::DdRat, i, &gln())?;
            Ok(&lhs - &rhs)
        }
        DualityCase::NdDd { a } => {
            let lhs = coeff(DiffFamily::DdRat, a, &glk())?;
            let rhs = coeff(DiffFamily::KzRat, a, &gln())?;
            Ok(&lhs - &rhs)
        }
        DualityCase::HdKz { i } => {
            let lhs = coeff(DiffFamily::KzTrig, i, &glk())?;
            let rhs = coeff(DiffFamily::DdTrig, i, &gln())?;
            Ok(&lhs - &rhs)
        }
        DualityCase::HdDd { a } => {
            let lhs = coeff(DiffFamily::DdTrig, a, &glk())?;
            let rhs = coeff(DiffFamily::KzTrig, a, &gln())?;
            Ok(&lhs - &rhs)
        }
        DualityCase::ZqLeft { i } => {
            let lhs = k_matrix(Side::Glk, i, block, point, cache)?;
            let scalar = n_scalar(Side::Gln, i, point, block)?;
            let rhs = x_matrix(Side::Gln, i, block, point)?.scale(&scalar);
            Ok(&lhs - &rhs)
        }
        DualityCase::ZqRight { a } => {
            let scalar = n_scalar(Side::Glk, a, point, block)?;
            let lhs = x_matrix(Side::Glk, a, block, point)?.scale(&scalar);
            let rhs = k_matrix(Side::Gln, a, block, point, cache)?;
            Ok(&lhs - &rhs)
        }
        DualityCase::BcrLeft { a, b } => {
            let t = point
                .t
                .clone()
                .ok_or_else(|| Error::SingularPoint("BCR residual needs t".into()))?;
            let w_a = block.margins.mu[a];
            let w_b = block.margins.mu[b];
            let lhs = b_matrix(Side::Glk, a, b, &t, block)?.scale(&c_scalar(w_a, w_b, &t)?);
            let rhs = embedded_r(Side::Gln, a, b, &t, block, cache)?;
            Ok(&lhs - &rhs)
        }
        DualityCase::BcrRight { i, j } => {
            let t = point
                .t
                .clone()
                .ok_or_else(|| Error::SingularPoint("BCR residual needs t".into()))?;
            let w_i = block.margins.lambda[i];
            let w_j = block.margins.lambda[j];
            let lhs = embedded_r(Side::Glk, i, j, &t, block, cache)?;
            let rhs = b_matrix(Side::Gln, i, j, &t, block)?.scale(&c_scalar(w_i, w_j, &t)?);
            Ok(&lhs - &rhs)
        }
        DualityCase::Ikn => {
            let d = block.margins.total_degree();
            let k = block.margins.k as i64;
            let n = block.margins.n as i64;
            let lhs = casimir(Side::Glk, block);
            let rhs = casimir(Side::Gln, block);
            let shift = QMatrix::scalar(block.dim(), &Rat::from_int((k - n) * d));
            Ok(&(&lhs - &rhs) - &shift)
        }
    }
}

/// Sweep limits for a suite run.
#[derive(Clone, Debug)]
pub struct SuiteLimits {
    pub k_values: Vec<usize>,
    pub n_values: Vec<usize>,
    pub degree_max: i64,
    pub trials: usize,
    pub seed: u64,
    /// Restrict the sweep to a single (lambda, mu) pair.
    pub fixed_margins: Option<(Vec<i64>, Vec<i64>)>,
}

impl Default for SuiteLimits {
    fn default() -> Self {
        SuiteLimits {
            k_values: vec![2, 3],
            n_values: vec![2, 3],
            degree_max: 4,
            trials: 5,
            seed: 42,
            fixed_margins: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<ParamPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<QMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// One verification record. Serialized records are deterministic functions
/// of (suite, limits): the wall-clock duration is carried in memory but
/// never serialized, so report bytes are reproducible.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub record: &'static str,
    pub suite: String,
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<i64>>,
    pub seed: u64,
    pub trial: usize,
    pub trials: usize,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// The individual checks a task can run. All residuals must be exactly zero.
#[derive(Clone, Debug)]
enum CheckKind {
    Vacuous,
    Duality(DualityCase),
    Curvature {
        fam_a: DiffFamily,
        idx_a: usize,
        fam_b: DiffFamily,
        idx_b: usize,
    },
    BZeroWeight {
        a: usize,
        b: usize,
    },
    BInversion {
        a: usize,
        b: usize,
    },
    BBraid {
        a: usize,
        b: usize,
        c: usize,
    },
    QddCommute {
        a: usize,
        b: usize,
    },
    KzQdd {
        a: usize,
        i: usize,
    },
    QkzCommute {
        i: usize,
        j: usize,
    },
    QkzDd {
        i: usize,
        a: usize,
    },
    RDef {
        key: RMatrixKey,
        a: usize,
        b: usize,
    },
    RInv {
        key: RMatrixKey,
        a: usize,
        b: usize,
    },
    RNorm {
        key: RMatrixKey,
    },
    RInversion {
        key: RMatrixKey,
    },
    Ybe,
    Itwo,
    B2,
    RnSpectrum {
        key: RMatrixKey,
    },
    BcrChain {
        m1: i64,
        m2: i64,
    },
    HoweDim {
        k: usize,
        n: usize,
        degree: i64,
    },
}

#[derive(Clone, Debug)]
struct TaskSpec {
    suite: &'static str,
    case: String,
    margins: Option<Margins>,
    point_seed: u64,
    trial: usize,
    trials: usize,
    kind: CheckKind,
}

fn block_of(margins: &Margins) -> Arc<WeightBlock> {
    Arc::new(enumerate_tables(margins))
}

fn guard_for(margins: &Margins) -> i64 {
    margins.total_degree() + 1
}

fn margin_point(margins: &Margins, point_seed: u64, need_t: bool) -> ParamPoint {
    sample_point(point_seed, margins.n, margins.k, need_t, guard_for(margins))
}

/// Run one check; every returned matrix must be exactly zero for a pass.
fn run_check(spec: &TaskSpec, cache: &RMatrixCache) -> Result<(Option<ParamPoint>, Vec<QMatrix>)> {
    match &spec.kind {
        CheckKind::Vacuous => Ok((None, Vec::new())),
        CheckKind::Duality(case) => {
            let margins = spec.margins.as_ref().expect("duality task has margins");
            let block = block_of(margins);
            let need_t = matches!(
                case,
                DualityCase::BcrLeft { .. } | DualityCase::BcrRight { .. }
            );
            let point = margin_point(margins, spec.point_seed, need_t);
            let r = residual(*case, &block, &point, cache)?;
            Ok((Some(point), vec![r]))
        }
        CheckKind::Curvature {
            fam_a,
            idx_a,
            fam_b,
            idx_b,
        } => {
            let margins = spec.margins.as_ref().expect("curvature task has margins");
            let block = block_of(margins);
            let point = margin_point(margins, spec.point_seed, false);
            let r = curvature(*fam_a, *idx_a, *fam_b, *idx_b, Side::Glk, &block, &point)?;
            Ok((Some(point), vec![r]))
        }
        CheckKind::BZeroWeight { a, b } => {
            let margins = spec.margins.as_ref().expect("margins");
            let block = block_of(margins);
            let point = margin_point(margins, spec.point_seed, true);
            let t = point.t.clone().unwrap();
            let bm = b_matrix(Side::Glk, *a, *b, &t, &block)?;
            let mut residuals = Vec::new();
            for c in 0..margins.k {
                let cartan = crate::action::total_generator(Side::Glk, c, c, &block)?.matrix;
                residuals.push(&(&bm * &cartan) - &(&cartan * &bm));
            }
            Ok((Some(point), residuals))
        }
        CheckKind::BInversion { a, b } => {
            let margins = spec.margins.as_ref().expect("margins");
            let block = block_of(margins);
            let point = margin_point(margins, spec.point_seed, true);
            let t = point.t.clone().unwrap();
            let lhs = &b_matrix(Side::Glk, *a, *b, &t, &block)?
                * &b_matrix(Side::Glk, *b, *a, &(-&t), &block)?;
            let w = Rat::from_int(margins.mu[*a] - margins.mu[*b]);
            let scalar = Rat::one() - &w / &t;
            let rhs = QMatrix::scalar(block.dim(), &scalar);
            Ok((Some(point), vec![&lhs - &rhs]))
        }
        CheckKind::BBraid { a, b, c } => {
            let margins = spec.margins.as_ref().expect("margins");
            let block = block_of(margins);
            let (t, s) = sample_t_pair(spec.point_seed);
            let ts = &t + &s;
            let lhs = &(&b_matrix(Side::Glk, *a, *b, &t, &block)?
                * &b_matrix(Side::Glk, *a, *c, &ts, &block)?)
                * &b_matrix(Side::Glk, *b, *c, &s, &block)?;
            let rhs = &(&b_matrix(Side::Glk, *b, *c, &s, &block)?
                * &b_matrix(Side::Glk, *a, *c, &ts, &block)?)
                * &b_matrix(Side::Glk, *a, *b, &t, &block)?;
            Ok((None, vec![&lhs - &rhs]))
        }
        CheckKind::QddCommute { a, b } => {
            let margins = spec.margins.as_ref().expect("margins");
            let block = block_of(margins);
            let point = margin_point(margins, spec.point_seed, false);
            let shift_a = point.with_lam_shift(*a, &point.kappa);
            let shift_b = point.with_lam_shift(*b, &point.kappa);
            let lhs = &x_matrix(Side::Glk, *a, &block, &point)?
                * &x_matrix(Side::Glk, *b, &block, &shift_a)?;
            let rhs = &x_matrix(Side::Glk, *b, &block, &point)?
                * &x_matrix(Side::Glk, *a, &block, &shift_b)?;
            Ok((Some(point), vec![&lhs - &rhs]))
        }
        CheckKind::KzQdd { a, i } => {
            let margins = spec.margins.as_ref().expect("margins");
            let block = block_of(margins);
            let point = margin_point(margins, spec.point_seed, false);
            let shifted = point.with_lam_shift(*a, &point.kappa);
            let x = x_matrix(Side::Glk, *a, &block, &point)?;
            let a_here = coeff(
                DiffFamily::KzTrig,
                *i,
                &OpContext::new(Side::Glk, &block, &point),
            )?;
            let a_shift = coeff(
                DiffFamily::KzTrig,
                *i,
                &OpContext::new(Side::Glk, &block, &shifted),
            )?;
            let lhs = x_scaled_partial(Side::Glk, *a, *i, &block, &point)?.scale(&point.kappa);
            let rhs = &(&a_here * &x) - &(&x * &a_shift);
            Ok((Some(point), vec![&lhs - &rhs]))
        }
        CheckKind::QkzCommute { i, j } => {
            let margins = spec.margins.as_ref().expect("margins");
            let block = block_of(margins);
            let point = margin_point(margins, spec.point_seed, false);
            let shift_i = point.with_z_shift(*i, &point.kappa);
            let shift_j = point.with_z_shift(*j, &point.kappa);
            let lhs = &k_matrix(Side::Glk, *i, &block, &point, cache)?
                * &k_matrix(Side::Glk, *j, &block, &shift_i, cache)?;
            let rhs = &k_matrix(Side::Glk, *j, &block, &point, cache)?
                * &k_matrix(Side::Glk, *i, &block, &shift_j, cache)?;
            Ok((Some(point), vec![&lhs - &rhs]))
        }
        CheckKind::QkzDd { i, a } => {
            let margins = spec.margins.as_ref().expect("margins");
            let block = block_of(margins);
            let point = margin_point(margins, spec.point_seed, false);
            let shifted = point.with_z_shift(*i, &point.kappa);
            let k = k_matrix(Side::Glk, *i, &block, &point, cache)?;
            let m_here = coeff(
                DiffFamily::DdTrig,
                *a,
                &OpContext::new(Side::Glk, &block, &point),
            )?;
            let m_shift = coeff(
                DiffFamily::DdTrig,
                *a,
                &OpContext::new(Side::Glk, &block, &shifted),
            )?;
            let lhs =
                k_scaled_partial(Side::Glk, *i, *a, &block, &point, cache)?.scale(&point.kappa);
            let rhs = &(&m_here * &k) - &(&k * &m_shift);
            Ok((Some(point), vec![&lhs - &rhs]))
        }
        CheckKind::RDef { key, a, b } => {
            let point = sample_point(spec.point_seed, 1, 1, true, key.l + key.m + 1);
            let t = point.t.clone().unwrap();
            let pair = PairBlock::new(key.n_vars, key.l, key.m);
            let r = r_matrix(*key, &t, cache)?;
            let e_ab_1 = pair_generator_slot(&pair, *a, *b, PairSlot::First);
            let mut lhs_op = e_ab_1.scale(&t);
            let mut rhs_op = e_ab_1.scale(&t);
            for c in 0..key.n_vars {
                let ac_1 = pair_generator_slot(&pair, *a, c, PairSlot::First);
                let cb_2 = pair_generator_slot(&pair, c, *b, PairSlot::Second);
                lhs_op = &lhs_op + &(&ac_1 * &cb_2);
                let cb_1 = pair_generator_slot(&pair, c, *b, PairSlot::First);
                let ac_2 = pair_generator_slot(&pair, *a, c, PairSlot::Second);
                rhs_op = &rhs_op + &(&cb_1 * &ac_2);
            }
            let residual = &(&r * &lhs_op) - &(&rhs_op * &r);
            Ok((Some(point), vec![residual]))
        }
        CheckKind::RInv { key, a, b } => {
            let point = sample_point(spec.point_seed, 1, 1, true, key.l + key.m + 1);
            let t = point.t.clone().unwrap();
            let pair = PairBlock::new(key.n_vars, key.l, key.m);
            let r = r_matrix(*key, &t, cache)?;
            let g = pair_generator(&pair, *a, *b);
            Ok((Some(point), vec![&(&r * &g) - &(&g * &r)]))
        }
        CheckKind::RNorm { key } => {
            let point = sample_point(spec.point_seed, 1, 1, true, key.l + key.m + 1);
            let t = point.t.clone().unwrap();
            let pair = PairBlock::new(key.n_vars, key.l, key.m);
            let r = r_matrix(*key, &t, cache)?;
            let hw = pair.highest_index();
            let col = r.column(hw);
            let mut residual = QMatrix::zero(pair.dim(), 1);
            for (row, v) in col.into_iter().enumerate() {
                let expect = if row == hw { Rat::one() } else { Rat::zero() };
                residual.set(row, 0, v - expect);
            }
            Ok((Some(point), vec![residual]))
        }
        CheckKind::RInversion { key } => {
            let point = sample_point(spec.point_seed, 1, 1, true, key.l + key.m + 1);
            let t = point.t.clone().unwrap();
            let pair_lm = PairBlock::new(key.n_vars, key.l, key.m);
            let pair_ml = PairBlock::new(key.n_vars, key.m, key.l);
            let swapped = RMatrixKey {
                n_vars: key.n_vars,
                l: key.m,
                m: key.l,
            };
            let r_vw = r_matrix(*key, &t, cache)?;
            let r_wv = r_matrix(swapped, &(-&t), cache)?;
            // R_WV^(21) = P_WV R_WV P_VW on the (l, m) basis.
            let p_vw = pair_flip(&pair_lm, &pair_ml);
            let p_wv = pair_flip(&pair_ml, &pair_lm);
            let r21 = &(&p_wv * &r_wv) * &p_vw;
            let residual = &(&r_vw * &r21) - &QMatrix::identity(pair_lm.dim());
            Ok((Some(point), vec![residual]))
        }
        CheckKind::Ybe => {
            let margins = spec.margins.as_ref().expect("ybe task has margins");
            let block = block_of(margins);
            let (t, u) = sample_t_pair(spec.point_seed);
            let tu = &t + &u;
            let r12 = embedded_r(Side::Gln, 0, 1, &t, &block, cache)?;
            let r13 = embedded_r(Side::Gln, 0, 2, &tu, &block, cache)?;
            let r23 = embedded_r(Side::Gln, 1, 2, &u, &block, cache)?;
            let lhs = &(&r12 * &r13) * &r23;
            let rhs = &(&r23 * &r13) * &r12;
            Ok((None, vec![&lhs - &rhs]))
        }
        CheckKind::Itwo => {
            let margins = spec.margins.as_ref().expect("margins");
            let block = block_of(margins);
            let cas = casimir(Side::Glk, &block);
            let mut ann = QMatrix::identity(block.dim());
            for c in itwo_spectrum(margins) {
                ann = &ann * &cas.sub_scalar(&Rat::from_int(c));
            }
            Ok((None, vec![ann]))
        }
        CheckKind::B2 => {
            let margins = spec.margins.as_ref().expect("margins");
            let block = block_of(margins);
            let point = margin_point(margins, spec.point_seed, true);
            let t = point.t.clone().unwrap();
            let cas = casimir(Side::Glk, &block);
            let spectrum: Vec<Rat> = itwo_spectrum(margins)
                .into_iter()
                .map(Rat::from_int)
                .collect();
            let projectors = lagrange_projectors(&cas, &spectrum)?;
            let bm = b_matrix(Side::Glk, 0, 1, &t, &block)?;
            let (m1, m2) = (margins.mu[0], margins.mu[1]);
            let mut residuals = Vec::new();
            for (m, p) in projectors.iter().enumerate() {
                let ev = b2_eigenvalue(m1, m2, m as i64, &t)?;
                residuals.push(&(&bm * p) - &p.scale(&ev));
            }
            Ok((Some(point), residuals))
        }
        CheckKind::RnSpectrum { key } => {
            let point = sample_point(spec.point_seed, 1, 1, true, key.l + key.m + 1);
            let t = point.t.clone().unwrap();
            let r = r_matrix(*key, &t, cache)?;
            let set = cache.get_or_build(*key)?;
            let mut residuals = Vec::new();
            for (mp, p) in set.projectors.iter().enumerate() {
                let ev = r_eigenvalue(key.l, key.m, mp as i64, &t)?;
                residuals.push(&(&r * p) - &p.scale(&ev));
            }
            Ok((Some(point), residuals))
        }
        CheckKind::BcrChain { m1, m2 } => {
            let point = sample_point(spec.point_seed, 1, 1, true, m1 + m2 + 1);
            let t = point.t.clone().unwrap();
            let c = c_scalar(*m1, *m2, &t)?;
            let mut residuals = Vec::new();
            for m in 0..=(*m1).min(*m2) {
                let b2 = b2_eigenvalue(*m1, *m2, m, &t)?;
                let rn = r_eigenvalue(*m1, *m2, m, &t)?;
                let diff = &(&b2 * &c) - &rn;
                let mut r = QMatrix::zero(1, 1);
                r.set(0, 0, diff);
                residuals.push(r);
            }
            Ok((Some(point), residuals))
        }
        CheckKind::HoweDim { k, n, degree } => {
            let mut lhs = 0i64;
            for nu in enumerate_partitions((*k).min(*n), *degree) {
                lhs += weyl_dimension(*k, &nu)? * weyl_dimension(*n, &nu)?;
            }
            let rhs = binomial((k * n) as i64 + degree - 1, *degree);
            let mut r = QMatrix::zero(1, 1);
            r.set(0, 0, Rat::from_int(lhs - rhs));
            Ok((None, vec![r]))
        }
    }
}

/// Casimir spectrum of a gl_2 block with weight mu = (m1, m2):
/// |lambda|^2 + |lambda| + 2m(m - |lambda| - 1) for m = 0..min(m1, m2).
fn itwo_spectrum(margins: &Margins) -> Vec<i64> {
    assert_eq!(margins.k, 2);
    let total = margins.total_degree();
    let min = margins.mu[0].min(margins.mu[1]);
    (0..=min)
        .map(|m| total * total + total + 2 * m * (m - total - 1))
        .collect()
}

/// Eigenvalue of B_12(t) on the m-summand of a gl_2 block:
/// prod_{j=m}^{m2-1} (t + m2 - j)/(t - m1 + j).
fn b2_eigenvalue(m1: i64, m2: i64, m: i64, t: &Rat) -> Result<Rat> {
    let mut acc = Rat::one();
    for j in m..m2 {
        let den = t - &Rat::from_int(m1 - j);
        if den.is_zero() {
            return Err(Error::PoleAtT(t.clone()));
        }
        acc = acc * (t + &Rat::from_int(m2 - j)) / den;
    }
    Ok(acc)
}

/// Proof-level spectral checks, runnable standalone.
#[derive(Clone, Debug)]
pub enum SpectralKind {
    /// The gl_2 Casimir on a (m1, m2) block is annihilated by its
    /// closed-form spectrum.
    Itwo { margins: Margins },
    /// B_12(t) acts on each Casimir projector image by the closed-form
    /// eigenvalue product.
    B2 { margins: Margins, seed: u64 },
    /// The R-matrix acts on each pair projector image by its eigenvalue
    /// product.
    Rn { key: RMatrixKey, seed: u64 },
}

pub fn spectral_check(kind: SpectralKind, cache: &RMatrixCache) -> VerifyReport {
    let spec = match kind {
        SpectralKind::Itwo { margins } => TaskSpec {
            suite: "spectral",
            case: "itwo".to_string(),
            margins: Some(margins),
            point_seed: 0,
            trial: 0,
            trials: 1,
            kind: CheckKind::Itwo,
        },
        SpectralKind::B2 { margins, seed } => TaskSpec {
            suite: "spectral",
            case: "b2".to_string(),
            margins: Some(margins),
            point_seed: seed,
            trial: 0,
            trials: 1,
            kind: CheckKind::B2,
        },
        SpectralKind::Rn { key, seed } => TaskSpec {
            suite: "spectral",
            case: format!("rn N={} l={} m={}", key.n_vars, key.l, key.m),
            margins: None,
            point_seed: seed,
            trial: 0,
            trials: 1,
            kind: CheckKind::RnSpectrum { key },
        },
    };
    run_task(&spec, cache)
}

pub fn suite_names() -> &'static [&'static str] {
    &[
        "kz-flat",
        "kz-trig-flat",
        "dd-flat",
        "dd-trig-flat",
        "kz-dd",
        "b-props",
        "r-props",
        "ybe",
        "qdd-commute",
        "kz-qdd",
        "qkz-commute",
        "qkz-dd",
        "ikn",
        "nd",
        "hd",
        "zq",
        "bcr",
        "spectral",
        "dual-dims",
        "all",
    ]
}

/// Margins swept by a suite, ordered by (k, n, |lambda|, lambda, mu).
fn margins_sweep(limits: &SuiteLimits, k_override: Option<usize>) -> Vec<Margins> {
    if let Some((lambda, mu)) = &limits.fixed_margins {
        if let Some(k) = k_override {
            if mu.len() != k {
                return Vec::new();
            }
        }
        return vec![Margins::new(
            mu.len(),
            lambda.len(),
            lambda.clone(),
            mu.clone(),
        )];
    }
    let k_values: Vec<usize> = match k_override {
        Some(k) => vec![k],
        None => limits.k_values.clone(),
    };
    let mut out = Vec::new();
    for &k in &k_values {
        for &n in &limits.n_values {
            for d in 0..=limits.degree_max {
                for lambda in enumerate_compositions(n, d) {
                    for mu in enumerate_compositions(k, d) {
                        out.push(Margins::new(k, n, lambda.clone(), mu));
                    }
                }
            }
        }
    }
    out
}

fn curvature_pairs(
    suite: &str,
    margins: &Margins,
) -> Vec<(DiffFamily, usize, DiffFamily, usize, String)> {
    let mut cases = Vec::new();
    let factor_pairs = |fam: DiffFamily, name: &str, count: usize| {
        let mut v = Vec::new();
        for i in 0..count {
            for j in (i + 1)..count {
                v.push((fam, i, fam, j, format!("{name} i={} j={}", i + 1, j + 1)));
            }
        }
        v
    };
    match suite {
        "kz-flat" => cases.extend(factor_pairs(DiffFamily::KzRat, "kz-flat", margins.n)),
        "kz-trig-flat" => cases.extend(factor_pairs(DiffFamily::KzTrig, "kz-trig-flat", margins.n)),
        "dd-flat" => cases.extend(factor_pairs(DiffFamily::DdRat, "dd-flat", margins.k)),
        "dd-trig-flat" => cases.extend(factor_pairs(DiffFamily::DdTrig, "dd-trig-flat", margins.k)),
        "kz-dd" => {
            for i in 0..margins.n {
                for a in 0..margins.k {
                    cases.push((
                        DiffFamily::KzRat,
                        i,
                        DiffFamily::DdRat,
                        a,
                        format!("kz-dd i={} a={}", i + 1, a + 1),
                    ));
                }
            }
        }
        _ => unreachable!("not a curvature suite"),
    }
    cases
}

fn push_margin_tasks<F>(
    tasks: &mut Vec<TaskSpec>,
    suite: &'static str,
    limits: &SuiteLimits,
    k_override: Option<usize>,
    mut case_builder: F,
) where
    F: FnMut(&Margins) -> Vec<(String, CheckKind)>,
{
    for margins in margins_sweep(limits, k_override) {
        let dim = crate::weights::block_dimension(&margins);
        if dim == 0 {
            tasks.push(TaskSpec {
                suite,
                case: "empty-block".to_string(),
                margins: Some(margins.clone()),
                point_seed: limits.seed,
                trial: 0,
                trials: 0,
                kind: CheckKind::Vacuous,
            });
            continue;
        }
        let cases = case_builder(&margins);
        for (case, kind) in cases {
            for trial in 0..limits.trials {
                tasks.push(TaskSpec {
                    suite,
                    case: case.clone(),
                    margins: Some(margins.clone()),
                    point_seed: limits.seed.wrapping_add(trial as u64),
                    trial,
                    trials: limits.trials,
                    kind: kind.clone(),
                });
            }
        }
    }
}

fn build_tasks(suite: &'static str, limits: &SuiteLimits) -> Result<Vec<TaskSpec>> {
    let mut tasks = Vec::new();
    match suite {
        "kz-flat" | "kz-trig-flat" | "dd-flat" | "dd-trig-flat" | "kz-dd" => {
            push_margin_tasks(&mut tasks, suite, limits, None, |margins| {
                curvature_pairs(suite, margins)
                    .into_iter()
                    .map(|(fa, ia, fb, ib, case)| {
                        (
                            case,
                            CheckKind::Curvature {
                                fam_a: fa,
                                idx_a: ia,
                                fam_b: fb,
                                idx_b: ib,
                            },
                        )
                    })
                    .collect()
            });
        }
        "b-props" => {
            push_margin_tasks(&mut tasks, suite, limits, None, |margins| {
                let k = margins.k;
                let mut cases = Vec::new();
                for a in 0..k {
                    for b in 0..k {
                        if a == b {
                            continue;
                        }
                        cases.push((
                            format!("b-zero-weight a={} b={}", a + 1, b + 1),
                            CheckKind::BZeroWeight { a, b },
                        ));
                        cases.push((
                            format!("b-inversion a={} b={}", a + 1, b + 1),
                            CheckKind::BInversion { a, b },
                        ));
                    }
                }
                for a in 0..k {
                    for b in (a + 1)..k {
                        for c in (b + 1)..k {
                            cases.push((
                                format!("b-braid a={} b={} c={}", a + 1, b + 1, c + 1),
                                CheckKind::BBraid { a, b, c },
                            ));
                        }
                    }
                }
                cases
            });
        }
        "r-props" => {
            for n_vars in [2usize, 3] {
                for l in 0..=3i64 {
                    for m in 0..=3i64 {
                        let key = RMatrixKey { n_vars, l, m };
                        let scope = format!("N={n_vars} l={l} m={m}");
                        let mut cases: Vec<(String, CheckKind)> = Vec::new();
                        for a in 0..n_vars {
                            for b in 0..n_vars {
                                cases.push((
                                    format!("r-def {scope} a={} b={}", a + 1, b + 1),
                                    CheckKind::RDef { key, a, b },
                                ));
                                cases.push((
                                    format!("r-inv {scope} a={} b={}", a + 1, b + 1),
                                    CheckKind::RInv { key, a, b },
                                ));
                            }
                        }
                        cases.push((format!("r-norm {scope}"), CheckKind::RNorm { key }));
                        cases.push((
                            format!("r-inversion {scope}"),
                            CheckKind::RInversion { key },
                        ));
                        for (case, kind) in cases {
                            for trial in 0..limits.trials {
                                tasks.push(TaskSpec {
                                    suite,
                                    case: case.clone(),
                                    margins: None,
                                    point_seed: limits.seed.wrapping_add(trial as u64),
                                    trial,
                                    trials: limits.trials,
                                    kind: kind.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
        "ybe" => {
            for n_vars in [2usize, 3] {
                for l in 0..=2i64 {
                    for m in 0..=2i64 {
                        for p in 0..=2i64 {
                            for w in enumerate_compositions(n_vars, l + m + p) {
                                let margins = Margins::new(3, n_vars, w, vec![l, m, p]);
                                if crate::weights::block_dimension(&margins) == 0 {
                                    continue;
                                }
                                let case = format!(
                                    "ybe N={n_vars} l={l} m={m} p={p} w={:?}",
                                    margins.lambda
                                );
                                for trial in 0..limits.trials {
                                    tasks.push(TaskSpec {
                                        suite,
                                        case: case.clone(),
                                        margins: Some(margins.clone()),
                                        point_seed: limits.seed.wrapping_add(trial as u64),
                                        trial,
                                        trials: limits.trials,
                                        kind: CheckKind::Ybe,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        "qdd-commute" => {
            push_margin_tasks(&mut tasks, suite, limits, None, |margins| {
                let mut cases = Vec::new();
                for a in 0..margins.k {
                    for b in (a + 1)..margins.k {
                        cases.push((
                            format!("qdd-commute a={} b={}", a + 1, b + 1),
                            CheckKind::QddCommute { a, b },
                        ));
                    }
                }
                cases
            });
        }
        "kz-qdd" => {
            push_margin_tasks(&mut tasks, suite, limits, None, |margins| {
                let mut cases = Vec::new();
                for a in 0..margins.k {
                    for i in 0..margins.n {
                        cases.push((
                            format!("kz-qdd a={} i={}", a + 1, i + 1),
                            CheckKind::KzQdd { a, i },
                        ));
                    }
                }
                cases
            });
        }
        "qkz-commute" => {
            push_margin_tasks(&mut tasks, suite, limits, None, |margins| {
                let mut cases = Vec::new();
                for i in 0..margins.n {
                    for j in (i + 1)..margins.n {
                        cases.push((
                            format!("qkz-commute i={} j={}", i + 1, j + 1),
                            CheckKind::QkzCommute { i, j },
                        ));
                    }
                }
                cases
            });
        }
        "qkz-dd" => {
            push_margin_tasks(&mut tasks, suite, limits, None, |margins| {
                let mut cases = Vec::new();
                for i in 0..margins.n {
                    for a in 0..margins.k {
                        cases.push((
                            format!("qkz-dd i={} a={}", i + 1, a + 1),
                            CheckKind::QkzDd { i, a },
                        ));
                    }
                }
                cases
            });
        }
        "ikn" => {
            push_margin_tasks(&mut tasks, suite, limits, None, |_| {
                vec![("ikn".to_string(), CheckKind::Duality(DualityCase::Ikn))]
            });
        }
        "nd" => {
            push_margin_tasks(&mut tasks, suite, limits, None, |margins| {
                let mut cases = Vec::new();
                for i in 0..margins.n {
                    cases.push((
                        format!("nd-kz i={}", i + 1),
                        CheckKind::Duality(DualityCase::NdKz { i }),
                    ));
                }
                for a in 0..margins.k {
                    cases.push((
                        format!("nd-dd a={}", a + 1),
                        CheckKind::Duality(DualityCase::NdDd { a }),
                    ));
                }
                cases
            });
        }
        "hd" => {
            push_margin_tasks(&mut tasks, suite, limits, None, |margins| {
                let mut cases = Vec::new();
                for i in 0..margins.n {
                    cases.push((
                        format!("hd-kz i={}", i + 1),
                        CheckKind::Duality(DualityCase::HdKz { i }),
                    ));
                }
                for a in 0..margins.k {
                    cases.push((
                        format!("hd-dd a={}", a + 1),
                        CheckKind::Duality(DualityCase::HdDd { a }),
                    ));
                }
                cases
            });
        }
        "zq" => {
            push_margin_tasks(&mut tasks, suite, limits, None, |margins| {
                let mut cases = Vec::new();
                for i in 0..margins.n {
                    cases.push((
                        format!("zq-left i={}", i + 1),
                        CheckKind::Duality(DualityCase::ZqLeft { i }),
                    ));
                }
                for a in 0..margins.k {
                    cases.push((
                        format!("zq-right a={}", a + 1),
                        CheckKind::Duality(DualityCase::ZqRight { a }),
                    ));
                }
                cases
            });
        }
        "bcr" => {
            push_margin_tasks(&mut tasks, suite, limits, None, |margins| {
                let mut cases = Vec::new();
                for a in 0..margins.k {
                    for b in 0..margins.k {
                        if a != b {
                            cases.push((
                                format!("bcr-left a={} b={}", a + 1, b + 1),
                                CheckKind::Duality(DualityCase::BcrLeft { a, b }),
                            ));
                        }
                    }
                }
                for i in 0..margins.n {
                    for j in 0..margins.n {
                        if i != j {
                            cases.push((
                                format!("bcr-right i={} j={}", i + 1, j + 1),
                                CheckKind::Duality(DualityCase::BcrRight { i, j }),
                            ));
                        }
                    }
                }
                cases
            });
        }
        "spectral" => {
            // gl_2 blocks: Casimir annihilation (Itwo) and B eigenvalues (B2).
            push_margin_tasks(&mut tasks, suite, limits, Some(2), |_| {
                vec![("itwo".to_string(), CheckKind::Itwo)]
            });
            push_margin_tasks(&mut tasks, suite, limits, Some(2), |_| {
                vec![("b2".to_string(), CheckKind::B2)]
            });
            for n_vars in [2usize, 3] {
                for l in 0..=3i64 {
                    for m in 0..=3i64 {
                        let key = RMatrixKey { n_vars, l, m };
                        let case = format!("rn N={n_vars} l={l} m={m}");
                        for trial in 0..limits.trials {
                            tasks.push(TaskSpec {
                                suite,
                                case: case.clone(),
                                margins: None,
                                point_seed: limits.seed.wrapping_add(trial as u64),
                                trial,
                                trials: limits.trials,
                                kind: CheckKind::RnSpectrum { key },
                            });
                        }
                    }
                }
            }
            for m1 in 0..=3i64 {
                for m2 in 0..=3i64 {
                    let case = format!("bcr-chain m1={m1} m2={m2}");
                    for trial in 0..limits.trials {
                        tasks.push(TaskSpec {
                            suite,
                            case: case.clone(),
                            margins: None,
                            point_seed: limits.seed.wrapping_add(trial as u64),
                            trial,
                            trials: limits.trials,
                            kind: CheckKind::BcrChain { m1, m2 },
                        });
                    }
                }
            }
        }
        "dual-dims" => {
            for &k in &limits.k_values {
                for &n in &limits.n_values {
                    for d in 0..=limits.degree_max {
                        tasks.push(TaskSpec {
                            suite,
                            case: format!("howe-dim D={d}"),
                            margins: Some(Margins::new(k, n, vec![0; n], vec![0; k])),
                            point_seed: limits.seed,
                            trial: 0,
                            trials: 0,
                            kind: CheckKind::HoweDim { k, n, degree: d },
                        });
                    }
                }
            }
        }
        _ => {
            return Err(Error::InvalidConfig(format!("unknown suite: {suite}")));
        }
    }
    Ok(tasks)
}

/// Run one theorem suite (or `all`). Report order is deterministic:
/// (suite, margins in (k, n, |lambda|, lambda, mu) order, case, trial).
pub fn run_suite(
    suite: &str,
    limits: &SuiteLimits,
    mode: ExecMode,
    cache: &RMatrixCache,
) -> Result<Vec<VerifyReport>> {
    let selected: Vec<&'static str> = if suite == "all" {
        suite_names()
            .iter()
            .copied()
            .filter(|s| *s != "all")
            .collect()
    } else {
        let name = suite_names()
            .iter()
            .copied()
            .find(|s| *s == suite)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite: {suite}")))?;
        vec![name]
    };
    let mut tasks = Vec::new();
    for s in selected {
        tasks.extend(build_tasks(s, limits)?);
    }
    Ok(map_tasks(tasks, mode, |spec| run_task(spec, cache)))
}

fn run_task(spec: &TaskSpec, cache: &RMatrixCache) -> VerifyReport {
    let start = Instant::now();
    let (status, witness) = match run_check(spec, cache) {
        Ok((point, residuals)) => match residuals.iter().find(|r| !r.is_zero()) {
            None => ("pass", None),
            Some(bad) => (
                "fail",
                Some(Witness {
                    point,
                    residual: Some(bad.clone()),
                    error: None,
                }),
            ),
        },
        Err(e) => (
            "fail",
            Some(Witness {
                point: None,
                residual: None,
                error: Some(e.to_string()),
            }),
        ),
    };
    VerifyReport {
        schema_version: 1,
        record: "verify",
        suite: spec.suite.to_string(),
        case: spec.case.clone(),
        k: spec.margins.as_ref().map(|m| m.k),
        n: spec.margins.as_ref().map(|m| m.n),
        lambda: spec.margins.as_ref().map(|m| m.lambda.clone()),
        mu: spec.margins.as_ref().map(|m| m.mu.clone()),
        seed: spec.point_seed,
        trial: spec.trial,
        trials: spec.trials,
        status,
        witness,
        elapsed: start.elapsed(),
    }
}
