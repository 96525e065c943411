//! Exact matrices of the two commuting gl actions on weight blocks.
//!
//! The gl_k generators act through the columns of a table (one tensor factor
//! per column), the gl_n generators through the rows. On the divided-power
//! basis the single nonzero matrix element of a local off-diagonal generator
//! is `d + 1` where `d` is the raised entry of the source table; diagonal
//! generators read off the entry itself. Weight-shifting generators are maps
//! between distinct blocks, and operators of interest are built as round-trip
//! compositions landing back on the source block.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{lagrange_projectors, QMatrix};
use crate::rat::Rat;
use crate::weights::{enumerate_compositions, enumerate_tables, Margins, Table, WeightBlock};

/// Which of the two dual algebras the generators belong to. GLK tensor
/// factors are the n columns of a table, GLN factors are the k rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Glk,
    Gln,
}

impl Side {
    /// Number of tensor factors of this side's module structure.
    pub fn factors(&self, m: &Margins) -> usize {
        match self {
            Side::Glk => m.n,
            Side::Gln => m.k,
        }
    }

    /// Number of Cartan directions (the rank of the acting algebra).
    pub fn cartans(&self, m: &Margins) -> usize {
        match self {
            Side::Glk => m.k,
            Side::Gln => m.n,
        }
    }

    /// Value of the total Cartan generator e_cc on the block.
    pub fn cartan_weight(&self, m: &Margins, c: usize) -> i64 {
        match self {
            Side::Glk => m.mu[c],
            Side::Gln => m.lambda[c],
        }
    }

    /// Degree of the single-factor module at factor `f` (the symmetric power
    /// exponent).
    pub fn factor_degree(&self, m: &Margins, f: usize) -> i64 {
        match self {
            Side::Glk => m.lambda[f],
            Side::Gln => m.mu[f],
        }
    }

    /// Table entry addressed by (cartan index, factor index).
    pub fn entry(&self, t: &Table, c: usize, f: usize) -> i64 {
        match self {
            Side::Glk => t.get(c, f),
            Side::Gln => t.get(f, c),
        }
    }

    /// Margins of the target block of e_{ab}: raise the Cartan weight at `a`,
    /// lower it at `b`. A negative margin yields an empty block downstream.
    pub fn shifted_margins(&self, m: &Margins, a: usize, b: usize) -> Margins {
        let mut out = m.clone();
        match self {
            Side::Glk => {
                out.mu[a] += 1;
                out.mu[b] -= 1;
            }
            Side::Gln => {
                out.lambda[a] += 1;
                out.lambda[b] -= 1;
            }
        }
        out
    }

    fn table_shift(&self, t: &Table, a: usize, b: usize, f: usize) -> Option<Table> {
        match self {
            Side::Glk => t.shifted(a, f, b, f),
            Side::Gln => t.shifted(f, a, f, b),
        }
    }

    /// Multidegree of the factor `f` component of a table.
    pub fn factor_multidegree(&self, t: &Table, f: usize) -> Vec<i64> {
        match self {
            Side::Glk => t.col(f),
            Side::Gln => t.row(f),
        }
    }

    pub fn with_factor_multidegree(&self, t: &Table, f: usize, deg: &[i64]) -> Table {
        match self {
            Side::Glk => t.with_col(f, deg),
            Side::Gln => t.with_row(f, deg),
        }
    }

    /// Role-swapped factor coordinates: one scalar per tensor factor.
    pub fn factor_coords<'a>(&self, point: &'a crate::sample::ParamPoint) -> &'a [Rat] {
        match self {
            Side::Glk => &point.z,
            Side::Gln => &point.lam,
        }
    }

    /// Role-swapped Cartan coordinates: one scalar per Cartan direction.
    pub fn cartan_coords<'a>(&self, point: &'a crate::sample::ParamPoint) -> &'a [Rat] {
        match self {
            Side::Glk => &point.lam,
            Side::Gln => &point.z,
        }
    }
}

/// A margins-typed linear map between two weight blocks.
#[derive(Clone, Debug)]
pub struct BlockMap {
    pub source: Arc<WeightBlock>,
    pub target: Arc<WeightBlock>,
    pub matrix: QMatrix,
}

impl BlockMap {
    pub fn identity(block: &Arc<WeightBlock>) -> BlockMap {
        BlockMap {
            source: block.clone(),
            target: block.clone(),
            matrix: QMatrix::identity(block.dim()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// f after g, as block maps.
pub fn compose(f: &BlockMap, g: &BlockMap) -> BlockMap {
    assert_eq!(
        g.target.margins, f.source.margins,
        "block map composition margin mismatch"
    );
    BlockMap {
        source: g.source.clone(),
        target: f.target.clone(),
        matrix: &f.matrix * &g.matrix,
    }
}

pub fn block_map_add(a: &BlockMap, b: &BlockMap) -> BlockMap {
    assert_eq!(a.source.margins, b.source.margins);
    assert_eq!(a.target.margins, b.target.margins);
    BlockMap {
        source: a.source.clone(),
        target: a.target.clone(),
        matrix: &a.matrix + &b.matrix,
    }
}

fn check_indices(side: Side, source: &WeightBlock, idx: &[usize], factors: &[usize]) -> Result<()> {
    let c = side.cartans(&source.margins);
    let f = side.factors(&source.margins);
    for &i in idx {
        if i >= c {
            return Err(Error::IndexOutOfRange(format!(
                "generator index {i} for rank {c}"
            )));
        }
    }
    for &i in factors {
        if i >= f {
            return Err(Error::IndexOutOfRange(format!(
                "factor index {i} among {f} factors"
            )));
        }
    }
    Ok(())
}

/// Matrix of the factor-local generator e_ab^(factor).
pub fn local_generator(
    side: Side,
    a: usize,
    b: usize,
    factor: usize,
    source: &Arc<WeightBlock>,
) -> Result<BlockMap> {
    check_indices(side, source, &[a, b], &[factor])?;
    if a == b {
        let mut matrix = QMatrix::zero(source.dim(), source.dim());
        for (s, t) in source.tables.iter().enumerate() {
            matrix.set(s, s, Rat::from_int(side.entry(t, a, factor)));
        }
        return Ok(BlockMap {
            source: source.clone(),
            target: source.clone(),
            matrix,
        });
    }
    let target_margins = side.shifted_margins(&source.margins, a, b);
    let target = Arc::new(enumerate_tables(&target_margins));
    let mut matrix = QMatrix::zero(target.dim(), source.dim());
    for (s, t) in source.tables.iter().enumerate() {
        if let Some(shifted) = side.table_shift(t, a, b, factor) {
            let coeff = Rat::from_int(side.entry(t, a, factor) + 1);
            let row = target
                .position(&shifted)
                .expect("shifted table must lie in the shifted block");
            matrix.add_to(row, s, &coeff);
        }
    }
    Ok(BlockMap {
        source: source.clone(),
        target,
        matrix,
    })
}

/// Matrix of the total generator e_ab = sum of the factor-local ones.
pub fn total_generator(
    side: Side,
    a: usize,
    b: usize,
    source: &Arc<WeightBlock>,
) -> Result<BlockMap> {
    check_indices(side, source, &[a, b], &[])?;
    let factors = side.factors(&source.margins);
    if a == b {
        // Constant on the block: the Cartan weight.
        let w = Rat::from_int(side.cartan_weight(&source.margins, a));
        return Ok(BlockMap {
            source: source.clone(),
            target: source.clone(),
            matrix: QMatrix::scalar(source.dim(), &w),
        });
    }
    let target_margins = side.shifted_margins(&source.margins, a, b);
    let target = Arc::new(enumerate_tables(&target_margins));
    let mut matrix = QMatrix::zero(target.dim(), source.dim());
    for (s, t) in source.tables.iter().enumerate() {
        for f in 0..factors {
            if let Some(shifted) = side.table_shift(t, a, b, f) {
                let coeff = Rat::from_int(side.entry(t, a, f) + 1);
                let row = target
                    .position(&shifted)
                    .expect("shifted table must lie in the shifted block");
                matrix.add_to(row, s, &coeff);
            }
        }
    }
    Ok(BlockMap {
        source: source.clone(),
        target,
        matrix,
    })
}

/// Diagonal matrix of the local Cartan generator e_aa^(factor) on the block.
pub fn cartan_local_diag(side: Side, a: usize, factor: usize, block: &WeightBlock) -> QMatrix {
    let mut m = QMatrix::zero(block.dim(), block.dim());
    for (s, t) in block.tables.iter().enumerate() {
        m.set(s, s, Rat::from_int(side.entry(t, a, factor)));
    }
    m
}

/// The Casimir element sum_{a,b} e_ab e_ba as a matrix on the block,
/// composed through the intermediate shifted blocks.
pub fn casimir(side: Side, block: &Arc<WeightBlock>) -> QMatrix {
    let rank = side.cartans(&block.margins);
    let mut acc = QMatrix::zero(block.dim(), block.dim());
    for a in 0..rank {
        for b in 0..rank {
            let down = total_generator(side, b, a, block).expect("index in range");
            let up = total_generator(side, a, b, &down.target).expect("index in range");
            acc = &acc + &compose(&up, &down).matrix;
        }
    }
    acc
}

/// The ordered divided-power basis of a two-factor symmetric-power module
/// V_l (x) V_m over gl_N: pairs of N-part multidegrees in lexicographic
/// order, with `sum c = l`, `sum c' = m`.
#[derive(Clone, Debug)]
pub struct PairBlock {
    pub n_vars: usize,
    pub l: i64,
    pub m: i64,
    pub basis: Vec<(Vec<i64>, Vec<i64>)>,
    index: HashMap<(Vec<i64>, Vec<i64>), usize>,
}

impl PairBlock {
    pub fn new(n_vars: usize, l: i64, m: i64) -> PairBlock {
        let first = enumerate_compositions(n_vars, l);
        let second = enumerate_compositions(n_vars, m);
        let mut basis = Vec::with_capacity(first.len() * second.len());
        for c in &first {
            for c2 in &second {
                basis.push((c.clone(), c2.clone()));
            }
        }
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();
        PairBlock {
            n_vars,
            l,
            m,
            basis,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, c: &[i64], c2: &[i64]) -> Option<usize> {
        self.index.get(&(c.to_vec(), c2.to_vec())).copied()
    }

    /// Index of the highest weight vector v_l (x) v_m = x^[l e_1] (x) x^[m e_1].
    pub fn highest_index(&self) -> usize {
        let mut c = vec![0i64; self.n_vars];
        c[0] = self.l;
        let mut c2 = vec![0i64; self.n_vars];
        c2[0] = self.m;
        self.position(&c, &c2).expect("highest vector in basis")
    }
}

/// Which tensor slot of a PairBlock an operator acts in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairSlot {
    First,
    Second,
}

/// Divided-power action of e_ab on one symmetric-power factor: returns the
/// (coefficient, shifted multidegree) pair, or None when it annihilates.
fn single_factor_apply(c: &[i64], a: usize, b: usize) -> Option<(i64, Vec<i64>)> {
    if a == b {
        return Some((c[a], c.to_vec()));
    }
    if c[b] == 0 {
        return None;
    }
    let mut out = c.to_vec();
    out[a] += 1;
    out[b] -= 1;
    Some((c[a] + 1, out))
}

/// Matrix of e_ab acting in one slot of the pair module.
pub fn pair_generator_slot(pair: &PairBlock, a: usize, b: usize, slot: PairSlot) -> QMatrix {
    let mut m = QMatrix::zero(pair.dim(), pair.dim());
    for (s, (c, c2)) in pair.basis.iter().enumerate() {
        let applied = match slot {
            PairSlot::First => single_factor_apply(c, a, b).map(|(f, nc)| (f, nc, c2.clone())),
            PairSlot::Second => single_factor_apply(c2, a, b).map(|(f, nc2)| (f, c.clone(), nc2)),
        };
        if let Some((coeff, nc, nc2)) = applied {
            if coeff != 0 {
                let row = pair.position(&nc, &nc2).expect("shift stays in module");
                m.add_to(row, s, &Rat::from_int(coeff));
            }
        }
    }
    m
}

/// Matrix of the coproduct generator e_ab (x) 1 + 1 (x) e_ab.
pub fn pair_generator(pair: &PairBlock, a: usize, b: usize) -> QMatrix {
    let first = pair_generator_slot(pair, a, b, PairSlot::First);
    let second = pair_generator_slot(pair, a, b, PairSlot::Second);
    &first + &second
}

/// Coproduct Casimir sum_{a,b} e_ab e_ba on V_l (x) V_m.
pub fn pair_casimir(pair: &PairBlock) -> QMatrix {
    let n = pair.n_vars;
    let mut acc = QMatrix::zero(pair.dim(), pair.dim());
    for a in 0..n {
        for b in 0..n {
            let up = pair_generator(pair, a, b);
            let down = pair_generator(pair, b, a);
            acc = &acc + &(&up * &down);
        }
    }
    acc
}

/// Casimir eigenvalue on the summand labelled by m' in the decomposition of
/// V_l (x) V_m: (l+m)^2 + (N-1)(l+m) + 2 m'(m' - l - m - 1).
pub fn pair_casimir_eigenvalue(n_vars: usize, l: i64, m: i64, m_prime: i64) -> i64 {
    let s = l + m;
    s * s + (n_vars as i64 - 1) * s + 2 * m_prime * (m_prime - s - 1)
}

/// Spectral projectors of the pair Casimir, labelled by m' = 0..min(l, m).
/// Projector ranks equal the Weyl dimensions of V_(l+m-m', m').
pub fn pair_decomposition(pair: &PairBlock) -> Result<Vec<(i64, QMatrix)>> {
    let max = pair.l.min(pair.m);
    let spectrum: Vec<Rat> = (0..=max)
        .map(|mp| Rat::from_int(pair_casimir_eigenvalue(pair.n_vars, pair.l, pair.m, mp)))
        .collect();
    let cas = pair_casimir(pair);
    let projectors = lagrange_projectors(&cas, &spectrum)?;
    Ok((0..=max).zip(projectors).collect())
}

/// Flip V_l (x) V_m -> V_m (x) V_l as a permutation matrix between the two
/// pair bases.
pub fn pair_flip(from: &PairBlock, to: &PairBlock) -> QMatrix {
    assert_eq!(from.n_vars, to.n_vars);
    assert_eq!((from.l, from.m), (to.m, to.l), "flip swaps the degrees");
    let mut m = QMatrix::zero(to.dim(), from.dim());
    for (s, (c, c2)) in from.basis.iter().enumerate() {
        let row = to.position(c2, c).expect("swapped pair in flipped basis");
        m.set(row, s, Rat::one());
    }
    m
}

/// Transport an operator on V_deg(u) (x) V_deg(v) to the weight block by
/// acting on the factor pair (u, v) and holding every other factor fixed.
pub fn embed_pair_operator(
    block: &WeightBlock,
    side: Side,
    u: usize,
    v: usize,
    pair: &PairBlock,
    op: &QMatrix,
) -> QMatrix {
    assert!(u != v, "factor pair must be distinct");
    assert_eq!(pair.n_vars, side.cartans(&block.margins));
    assert_eq!(pair.l, side.factor_degree(&block.margins, u));
    assert_eq!(pair.m, side.factor_degree(&block.margins, v));
    let mut out = QMatrix::zero(block.dim(), block.dim());
    for (s, t) in block.tables.iter().enumerate() {
        let cu = side.factor_multidegree(t, u);
        let cv = side.factor_multidegree(t, v);
        let p = pair.position(&cu, &cv).expect("factor pair in pair basis");
        for q in 0..pair.dim() {
            let coeff = op.get(q, p);
            if coeff.is_zero() {
                continue;
            }
            let (nc, nc2) = &pair.basis[q];
            let shifted =
                side.with_factor_multidegree(&side.with_factor_multidegree(t, u, nc), v, nc2);
            let row = block
                .position(&shifted)
                .expect("weight-preserving pair operator leaves the block");
            out.add_to(row, s, coeff);
        }
    }
    out
}
