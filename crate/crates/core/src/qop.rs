//! Difference-operator building blocks: the Cartan-denominator B-series, the
//! Gamma-ratio scalars, rational R-matrices on pairs of symmetric powers, and
//! the ordered products that give the difference dynamical and quantized KZ
//! operators.
//!
//! The shift operator T_u is never materialized: every difference identity is
//! checked in fully expanded matrix form, with shifted-argument evaluations
//! and the closed-form scaled partials below standing in for the operator
//! algebra. B-series truncation is operational: the sum stops at the first
//! power where the composed raising map vanishes on the block, with a safety
//! cap of the total degree. The series' diagonal denominator is evaluated at
//! the source weight, which is canonical because each term has zero weight.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::action::{
    cartan_local_diag, compose, embed_pair_operator, total_generator, BlockMap, PairBlock, Side,
};
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rat::Rat;
use crate::sample::ParamPoint;
use crate::weights::WeightBlock;

/// Gamma-ratio scalar reduced by the functional equation to the finite
/// product `prod_{j=0}^{w_a} (t - j)/(t - j + w_b)`.
pub fn c_scalar(w_a: i64, w_b: i64, t: &Rat) -> Result<Rat> {
    assert!(w_a >= 0 && w_b >= 0, "Cartan values are nonnegative here");
    let mut acc = Rat::one();
    for j in 0..=w_a {
        let den = t - &Rat::from_int(j - w_b);
        if den.is_zero() {
            return Err(Error::PoleAtT(t.clone()));
        }
        acc = acc * (t - &Rat::from_int(j)) / den;
    }
    Ok(acc)
}

/// The series B_ab(t) = 1 + sum_s e_ba^s e_ab^s prod_{j=1}^s
/// 1/(j (t - e_aa + e_bb - j)) as an exact matrix on the block.
pub fn b_matrix(
    side: Side,
    a: usize,
    b: usize,
    t: &Rat,
    block: &Arc<WeightBlock>,
) -> Result<QMatrix> {
    assert!(a != b, "B series needs a distinct generator pair");
    let w_a = side.cartan_weight(&block.margins, a);
    let w_b = side.cartan_weight(&block.margins, b);
    let cap = block.margins.total_degree() + 1;
    let mut acc = QMatrix::identity(block.dim());
    let mut up = BlockMap::identity(block);
    let mut down = BlockMap::identity(block);
    let mut denom = Rat::one();
    for s in 1..=cap {
        up = compose(&total_generator(side, a, b, &up.target)?, &up);
        if up.is_zero() {
            break;
        }
        let factor = t - &Rat::from_int(w_a - w_b + s);
        if factor.is_zero() {
            return Err(Error::PoleAtT(t.clone()));
        }
        denom *= &(Rat::from_int(s) * factor);
        down = compose(&down, &total_generator(side, b, a, &up.target)?);
        let term = compose(&down, &up).matrix;
        acc = &acc + &term.scale(&denom.recip().unwrap());
    }
    Ok(acc)
}

/// Cache key for the rational R-matrix on V_l (x) V_m over gl_N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RMatrixKey {
    #[serde(rename = "N")]
    pub n_vars: usize,
    pub l: i64,
    pub m: i64,
}

/// The t-independent part of an R-matrix: the pair-Casimir spectral
/// projectors, labelled by m' = 0..min(l, m), plus the Casimir spectrum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectorSet {
    pub key: RMatrixKey,
    pub spectrum: Vec<i64>,
    pub projectors: Vec<QMatrix>,
}

impl ProjectorSet {
    pub fn build(key: RMatrixKey) -> Result<ProjectorSet> {
        let pair = PairBlock::new(key.n_vars, key.l, key.m);
        let decomp = crate::action::pair_decomposition(&pair)?;
        let spectrum = (0..=key.l.min(key.m))
            .map(|mp| crate::action::pair_casimir_eigenvalue(key.n_vars, key.l, key.m, mp))
            .collect();
        Ok(ProjectorSet {
            key,
            spectrum,
            projectors: decomp.into_iter().map(|(_, p)| p).collect(),
        })
    }
}

/// Thread-safe projector cache: built once per key, then shared by readers.
#[derive(Default)]
pub struct RMatrixCache {
    inner: Mutex<HashMap<RMatrixKey, Arc<ProjectorSet>>>,
}

impl RMatrixCache {
    pub fn new() -> Self {
        RMatrixCache::default()
    }

    pub fn get_or_build(&self, key: RMatrixKey) -> Result<Arc<ProjectorSet>> {
        let mut map = self.inner.lock().expect("cache poisoned");
        if let Some(set) = map.get(&key) {
            return Ok(set.clone());
        }
        let set = Arc::new(ProjectorSet::build(key)?);
        map.insert(key, set.clone());
        Ok(set)
    }

    /// Seed the cache, e.g. from an on-disk store.
    pub fn insert(&self, set: ProjectorSet) {
        let mut map = self.inner.lock().expect("cache poisoned");
        map.insert(set.key, Arc::new(set));
    }

    /// Key-sorted snapshot for persistence.
    pub fn snapshot(&self) -> Vec<Arc<ProjectorSet>> {
        let map = self.inner.lock().expect("cache poisoned");
        let mut sets: Vec<_> = map.values().cloned().collect();
        sets.sort_by_key(|s| s.key);
        sets
    }
}

/// Eigenvalue of R on the m'-summand: prod_{j=0}^{m'-1} (t - l + j)/(t + m - j).
pub fn r_eigenvalue(l: i64, m: i64, m_prime: i64, t: &Rat) -> Result<Rat> {
    let mut acc = Rat::one();
    for j in 0..m_prime {
        let den = t + &Rat::from_int(m - j);
        if den.is_zero() {
            return Err(Error::PoleAtT(t.clone()));
        }
        acc = acc * (t - &Rat::from_int(l - j)) / den;
    }
    Ok(acc)
}

/// Rational R-matrix on the pair basis of V_l (x) V_m, by spectral
/// projection. It fixes v_l (x) v_m; the defining relation is validated in
/// tests, not used for construction.
pub fn r_matrix(key: RMatrixKey, t: &Rat, cache: &RMatrixCache) -> Result<QMatrix> {
    let set = cache.get_or_build(key)?;
    let dim = PairBlock::new(key.n_vars, key.l, key.m).dim();
    let mut acc = QMatrix::zero(dim, dim);
    for (mp, proj) in set.projectors.iter().enumerate() {
        let ev = r_eigenvalue(key.l, key.m, mp as i64, t)?;
        acc = &acc + &proj.scale(&ev);
    }
    Ok(acc)
}

/// R-matrix of the factor pair (u, v) transported onto the weight block.
pub fn embedded_r(
    side: Side,
    u: usize,
    v: usize,
    t: &Rat,
    block: &Arc<WeightBlock>,
    cache: &RMatrixCache,
) -> Result<QMatrix> {
    let key = RMatrixKey {
        n_vars: side.cartans(&block.margins),
        l: side.factor_degree(&block.margins, u),
        m: side.factor_degree(&block.margins, v),
    };
    let pair = PairBlock::new(key.n_vars, key.l, key.m);
    let r = r_matrix(key, t, cache)?;
    Ok(embed_pair_operator(block, side, u, v, &pair, &r))
}

/// Left inverse group, diagonal coordinate factor and right group of the
/// X product. `X_a = left^{-1} * diag * right`.
fn x_parts(
    side: Side,
    a: usize,
    block: &Arc<WeightBlock>,
    point: &ParamPoint,
) -> Result<(QMatrix, QMatrix, QMatrix)> {
    let rank = side.cartans(&block.margins);
    if a >= rank {
        return Err(Error::IndexOutOfRange(format!(
            "dynamical index {a} for rank {rank}"
        )));
    }
    let zs = side.factor_coords(point);
    let lams = side.cartan_coords(point);
    let dim = block.dim();

    let mut left = QMatrix::identity(dim);
    for c in ((a + 1)..rank).rev() {
        let arg = &lams[a] - &lams[c];
        left = &left * &b_matrix(side, a, c, &arg, block)?;
    }
    let left_inv = left.inverse()?;

    let mut diag = QMatrix::zero(dim, dim);
    for (s, tab) in block.tables.iter().enumerate() {
        let mut entry = Rat::one();
        for (f, z) in zs.iter().enumerate() {
            let e = side.entry(tab, a, f);
            if e != 0 {
                if z.is_zero() {
                    return Err(Error::SingularPoint("zero coordinate in X diagonal".into()));
                }
                entry *= &z.pow(-e);
            }
        }
        diag.set(s, s, entry);
    }

    let mut right = QMatrix::identity(dim);
    for c in 0..a {
        let arg = &(&lams[c] - &lams[a]) - &point.kappa;
        right = &right * &b_matrix(side, c, a, &arg, block)?;
    }
    Ok((left_inv, diag, right))
}

/// The ordered product X_a of inverted B factors, the coordinate power
/// diagonal, and kappa-shifted B factors.
pub fn x_matrix(
    side: Side,
    a: usize,
    block: &Arc<WeightBlock>,
    point: &ParamPoint,
) -> Result<QMatrix> {
    let (left_inv, diag, right) = x_parts(side, a, block, point)?;
    Ok(&(&left_inv * &diag) * &right)
}

/// Closed form of the scaled derivative z_i dX_a/dz_i =
/// -left^{-1} (e_aa)^(i) diag right; only the diagonal factor depends on the
/// factor coordinates, and the local Cartan commutes with it.
pub fn x_scaled_partial(
    side: Side,
    a: usize,
    i: usize,
    block: &Arc<WeightBlock>,
    point: &ParamPoint,
) -> Result<QMatrix> {
    if i >= side.factors(&block.margins) {
        return Err(Error::IndexOutOfRange(format!("factor index {i}")));
    }
    let (left_inv, diag, right) = x_parts(side, a, block, point)?;
    let local = cartan_local_diag(side, a, i, block);
    let mid = &local * &diag;
    Ok((&(&left_inv * &mid) * &right).scale(&Rat::from_int(-1)))
}

/// Left inverse group, diagonal and right group of the K product.
fn k_parts(
    side: Side,
    i: usize,
    block: &Arc<WeightBlock>,
    point: &ParamPoint,
    cache: &RMatrixCache,
) -> Result<(QMatrix, QMatrix, QMatrix)> {
    let factors = side.factors(&block.margins);
    if i >= factors {
        return Err(Error::IndexOutOfRange(format!(
            "factor index {i} among {factors}"
        )));
    }
    let zs = side.factor_coords(point);
    let lams = side.cartan_coords(point);
    let rank = side.cartans(&block.margins);
    let dim = block.dim();

    let mut left = QMatrix::identity(dim);
    for j in ((i + 1)..factors).rev() {
        let arg = &zs[i] - &zs[j];
        left = &left * &embedded_r(side, i, j, &arg, block, cache)?;
    }
    let left_inv = left.inverse()?;

    let mut diag = QMatrix::zero(dim, dim);
    for (s, tab) in block.tables.iter().enumerate() {
        let mut entry = Rat::one();
        for (c, lam) in lams.iter().enumerate().take(rank) {
            let e = side.entry(tab, c, i);
            if e != 0 {
                if lam.is_zero() {
                    return Err(Error::SingularPoint("zero coordinate in K diagonal".into()));
                }
                entry *= &lam.pow(-e);
            }
        }
        diag.set(s, s, entry);
    }

    let mut right = QMatrix::identity(dim);
    for j in 0..i {
        let arg = &(&zs[j] - &zs[i]) - &point.kappa;
        right = &right * &embedded_r(side, j, i, &arg, block, cache)?;
    }
    Ok((left_inv, diag, right))
}

/// The ordered product K_i of inverted R factors, the Cartan power diagonal,
/// and kappa-shifted R factors.
pub fn k_matrix(
    side: Side,
    i: usize,
    block: &Arc<WeightBlock>,
    point: &ParamPoint,
    cache: &RMatrixCache,
) -> Result<QMatrix> {
    let (left_inv, diag, right) = k_parts(side, i, block, point, cache)?;
    Ok(&(&left_inv * &diag) * &right)
}

/// Closed form of lam_a dK_i/dlam_a = -left^{-1} (e_aa)^(i) diag right.
pub fn k_scaled_partial(
    side: Side,
    i: usize,
    a: usize,
    block: &Arc<WeightBlock>,
    point: &ParamPoint,
    cache: &RMatrixCache,
) -> Result<QMatrix> {
    if a >= side.cartans(&block.margins) {
        return Err(Error::IndexOutOfRange(format!("Cartan index {a}")));
    }
    let (left_inv, diag, right) = k_parts(side, i, block, point, cache)?;
    let local = cartan_local_diag(side, a, i, block);
    let mid = &local * &diag;
    Ok((&(&left_inv * &mid) * &right).scale(&Rat::from_int(-1)))
}

/// The scalar normalizer N_idx of the duality theorem: a product of C
/// factors below the index at kappa-shifted arguments and inverted C factors
/// above it. Every Cartan total is constant on the block, so each factor is
/// an exact rational scalar.
pub fn n_scalar(side: Side, idx: usize, point: &ParamPoint, block: &WeightBlock) -> Result<Rat> {
    let rank = side.cartans(&block.margins);
    if idx >= rank {
        return Err(Error::IndexOutOfRange(format!(
            "normalizer index {idx} for rank {rank}"
        )));
    }
    let lams = side.cartan_coords(point);
    let w = |c: usize| side.cartan_weight(&block.margins, c);
    let mut acc = Rat::one();
    for j in 0..idx {
        let arg = &(&lams[j] - &lams[idx]) - &point.kappa;
        acc *= &c_scalar(w(j), w(idx), &arg)?;
    }
    for j in (idx + 1)..rank {
        let arg = &lams[idx] - &lams[j];
        let c = c_scalar(w(idx), w(j), &arg)?;
        let inv = c
            .recip()
            .ok_or_else(|| Error::SingularPoint("vanishing C factor".into()))?;
        acc *= &inv;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{pair_generator, PairSlot};
    use crate::matrix::lagrange_projectors;
    use crate::sample::sample_point;
    use crate::weights::{enumerate_tables, Margins};

    fn block(k: usize, n: usize, lambda: &[i64], mu: &[i64]) -> Arc<WeightBlock> {
        Arc::new(enumerate_tables(&Margins::new(
            k,
            n,
            lambda.to_vec(),
            mu.to_vec(),
        )))
    }

    #[test]
    fn c_scalar_examples() {
        let t = Rat::new(5, 2);
        for w in 0..=4 {
            assert_eq!(c_scalar(w, 0, &t).unwrap(), Rat::one());
        }
        // (0, q, t) -> t/(t+q)
        assert_eq!(c_scalar(0, 3, &t).unwrap(), &t / &(&t + &Rat::from_int(3)));
        // telescoping (1, 1, 5/2) -> (t-1)/(t+1) = 3/7
        assert_eq!(c_scalar(1, 1, &t).unwrap(), Rat::new(3, 7));
        // pole when t - j + w_b = 0
        assert!(matches!(
            c_scalar(2, 1, &Rat::from_int(1)),
            Err(Error::PoleAtT(_))
        ));
    }

    #[test]
    fn b_matrix_annihilated_is_identity() {
        // mu_2 = 0 makes e_12 annihilate: the series truncates at s = 0.
        let b = block(2, 2, &[1, 1], &[2, 0]);
        let m = b_matrix(Side::Glk, 0, 1, &Rat::from_int(3), &b).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn b_matrix_eigenvalues_on_casimir_projectors() {
        // mu = (1,1): eigenvalue (t+1)/(t-1) = 7/3 at t = 5/2 on the
        // Casimir-6 component, 1 on the Casimir-2 component.
        let blk = block(2, 2, &[1, 1], &[1, 1]);
        let cas = crate::action::casimir(Side::Glk, &blk);
        let ps = lagrange_projectors(&cas, &[Rat::from_int(6), Rat::from_int(2)]).unwrap();
        let t = Rat::new(5, 2);
        let bm = b_matrix(Side::Glk, 0, 1, &t, &blk).unwrap();
        assert_eq!(&bm * &ps[0], ps[0].scale(&Rat::new(7, 3)));
        assert_eq!(&bm * &ps[1], ps[1].clone());
    }

    #[test]
    fn b_matrix_inversion_spot_value() {
        // mu = (2,0): B_12(3) B_21(-3) = (1 - 2/3) Id = Id/3.
        let blk = block(2, 2, &[1, 1], &[2, 0]);
        let b12 = b_matrix(Side::Glk, 0, 1, &Rat::from_int(3), &blk).unwrap();
        let b21 = b_matrix(Side::Glk, 1, 0, &Rat::from_int(-3), &blk).unwrap();
        assert_eq!(&b12 * &b21, QMatrix::scalar(blk.dim(), &Rat::new(1, 3)));
    }

    #[test]
    fn b_matrix_pole_detected() {
        let blk = block(2, 2, &[1, 1], &[1, 1]);
        // w_a - w_b = 0, so t = 1 hits the s = 1 denominator.
        assert!(matches!(
            b_matrix(Side::Glk, 0, 1, &Rat::from_int(1), &blk),
            Err(Error::PoleAtT(_))
        ));
    }

    #[test]
    fn r_matrix_vector_vector() {
        // l = m = 1: R(t) = (t Id + P)/(t + 1); at t = 3 the antisymmetric
        // eigenvalue is 1/2 and the highest vector is fixed.
        let cache = RMatrixCache::new();
        let key = RMatrixKey {
            n_vars: 2,
            l: 1,
            m: 1,
        };
        let t = Rat::from_int(3);
        let r = r_matrix(key, &t, &cache).unwrap();
        let pair = PairBlock::new(2, 1, 1);
        let mut flip = QMatrix::zero(4, 4);
        for (s, (c, c2)) in pair.basis.iter().enumerate() {
            let row = pair.position(c2, c).unwrap();
            flip.set(row, s, Rat::one());
        }
        let expect = (&QMatrix::scalar(4, &t) + &flip).scale(&Rat::new(1, 4));
        assert_eq!(r, expect);

        let hw = pair.highest_index();
        let fixed = r.column(hw);
        for (row, v) in fixed.iter().enumerate() {
            let expect = if row == hw { Rat::one() } else { Rat::zero() };
            assert_eq!(v, &expect);
        }
        assert_eq!(r_eigenvalue(1, 1, 1, &t).unwrap(), Rat::new(1, 2));
    }

    #[test]
    fn r_matrix_gl_invariance_spot() {
        let cache = RMatrixCache::new();
        let key = RMatrixKey {
            n_vars: 3,
            l: 2,
            m: 1,
        };
        let t = Rat::new(5, 17);
        let r = r_matrix(key, &t, &cache).unwrap();
        let pair = PairBlock::new(3, 2, 1);
        for a in 0..3 {
            for b in 0..3 {
                let g = pair_generator(&pair, a, b);
                assert_eq!(&r * &g, &g * &r, "invariance e_{a}{b}");
            }
        }
        let _ = PairSlot::First;
    }

    #[test]
    fn x_matrix_rank_one_is_coordinate_diagonal() {
        let blk = block(1, 2, &[2, 1], &[3]);
        let point = sample_point(5, 2, 1, true, 4);
        let x = x_matrix(Side::Glk, 0, &blk, &point).unwrap();
        let expect = &point.z[0].pow(-2) * &point.z[1].pow(-1);
        assert_eq!(x, QMatrix::scalar(1, &expect));
    }

    #[test]
    fn x_matrix_boundary_index_has_empty_left_group() {
        // a = k: X_k = diag * B_{1k}(lam_1k - kappa) ... ; check by
        // reassembly against the factors.
        let blk = block(2, 2, &[1, 1], &[1, 1]);
        let point = sample_point(11, 2, 2, true, 3);
        let x = x_matrix(Side::Glk, 1, &blk, &point).unwrap();
        let arg = &(&point.lam[0] - &point.lam[1]) - &point.kappa;
        let b01 = b_matrix(Side::Glk, 0, 1, &arg, &blk).unwrap();
        let (_, diag, _) = x_parts(Side::Glk, 1, &blk, &point).unwrap();
        assert_eq!(x, &diag * &b01);
    }

    #[test]
    fn x_matrix_reassembly_against_factors() {
        // left * X = diag * right checks the inverse path independently.
        let blk = block(2, 2, &[1, 1], &[1, 1]);
        let point = sample_point(11, 2, 2, true, 3);
        let x = x_matrix(Side::Glk, 0, &blk, &point).unwrap();
        let arg = &point.lam[0] - &point.lam[1];
        let left = b_matrix(Side::Glk, 0, 1, &arg, &blk).unwrap();
        let (_, diag, _) = x_parts(Side::Glk, 0, &blk, &point).unwrap();
        assert_eq!(&left * &x, diag);
    }

    #[test]
    fn x_scaled_partial_rank_one() {
        let blk = block(1, 2, &[2, 1], &[3]);
        let point = sample_point(5, 2, 1, true, 4);
        let d = x_scaled_partial(Side::Glk, 0, 0, &blk, &point).unwrap();
        let x = x_matrix(Side::Glk, 0, &blk, &point).unwrap();
        assert_eq!(d, x.scale(&Rat::from_int(-2)));
    }

    #[test]
    fn x_scaled_partial_vanishes_on_zero_weight_row() {
        let blk = block(2, 2, &[1, 1], &[2, 0]);
        let point = sample_point(19, 2, 2, true, 3);
        let d = x_scaled_partial(Side::Glk, 1, 0, &blk, &point).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn k_matrix_single_factor_is_cartan_diagonal() {
        let blk = block(2, 1, &[3], &[2, 1]);
        let point = sample_point(23, 1, 2, true, 4);
        let cache = RMatrixCache::new();
        let k = k_matrix(Side::Glk, 0, &blk, &point, &cache).unwrap();
        let t = blk.table(0);
        let expect = &point.lam[0].pow(-t.get(0, 0)) * &point.lam[1].pow(-t.get(1, 0));
        assert_eq!(k, QMatrix::scalar(1, &expect));
    }

    #[test]
    fn k_matrix_boundary_index_has_empty_left_group() {
        // i = n: K_n = diag * R_{1n}(z_1n - kappa) ...
        let blk = block(2, 2, &[1, 1], &[1, 1]);
        let point = sample_point(13, 2, 2, true, 3);
        let cache = RMatrixCache::new();
        let k = k_matrix(Side::Glk, 1, &blk, &point, &cache).unwrap();
        let arg = &(&point.z[0] - &point.z[1]) - &point.kappa;
        let r01 = embedded_r(Side::Glk, 0, 1, &arg, &blk, &cache).unwrap();
        let (_, diag, _) = k_parts(Side::Glk, 1, &blk, &point, &cache).unwrap();
        assert_eq!(k, &diag * &r01);
    }

    #[test]
    fn k_scaled_partial_zero_weight_row_vanishes() {
        // m_a = 0 kills the local Cartan factor on every table.
        let blk = block(2, 2, &[1, 1], &[2, 0]);
        let point = sample_point(29, 2, 2, true, 3);
        let cache = RMatrixCache::new();
        let d = k_scaled_partial(Side::Glk, 0, 1, &blk, &point, &cache).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn k_matrix_reassembly_against_factors() {
        let blk = block(2, 2, &[1, 1], &[1, 1]);
        let point = sample_point(13, 2, 2, true, 3);
        let cache = RMatrixCache::new();
        let k = k_matrix(Side::Glk, 0, &blk, &point, &cache).unwrap();
        let arg = &point.z[0] - &point.z[1];
        let left = embedded_r(Side::Glk, 0, 1, &arg, &blk, &cache).unwrap();
        let (_, diag, _) = k_parts(Side::Glk, 0, &blk, &point, &cache).unwrap();
        assert_eq!(&left * &k, diag);
    }

    #[test]
    fn k_scaled_partial_single_factor() {
        let blk = block(2, 1, &[3], &[2, 1]);
        let point = sample_point(23, 1, 2, true, 4);
        let cache = RMatrixCache::new();
        let d = k_scaled_partial(Side::Glk, 0, 0, &blk, &point, &cache).unwrap();
        let k = k_matrix(Side::Glk, 0, &blk, &point, &cache).unwrap();
        // -d_{11} = -2 times the diagonal K
        assert_eq!(d, k.scale(&Rat::from_int(-2)));
    }

    #[test]
    fn n_scalar_trivial_rank() {
        let blk = block(1, 2, &[2, 1], &[3]);
        let point = sample_point(17, 2, 1, true, 4);
        assert_eq!(n_scalar(Side::Glk, 0, &point, &blk).unwrap(), Rat::one());
    }

    #[test]
    fn n_scalar_trivial_gln_rank() {
        // n = 1: the GLN normalizer is an empty product.
        let blk = block(2, 1, &[3], &[2, 1]);
        let point = sample_point(31, 1, 2, true, 4);
        assert_eq!(n_scalar(Side::Gln, 0, &point, &blk).unwrap(), Rat::one());
    }

    #[test]
    fn n_scalar_zero_weights_give_one() {
        let blk = block(2, 2, &[0, 0], &[0, 0]);
        let point = sample_point(17, 2, 2, true, 4);
        assert_eq!(n_scalar(Side::Gln, 0, &point, &blk).unwrap(), Rat::one());
    }

    #[test]
    fn n_scalar_derived_value() {
        // GLN normalizer at index 1 on the (1,1)/(1,1) block: the single
        // factor is c_scalar(l_1, l_2, z_12)^{-1} = (z_12 + 1)/(z_12 - 1).
        let blk = block(2, 2, &[1, 1], &[1, 1]);
        let point = sample_point(17, 2, 2, true, 3);
        let z12 = &point.z[0] - &point.z[1];
        let expect = (&z12 + &Rat::one()) / (&z12 - &Rat::one());
        assert_eq!(n_scalar(Side::Gln, 0, &point, &blk).unwrap(), expect);
    }
}
