//! Weight blocks of the polynomial space in k*n variables.
//!
//! A block is labelled by margins (lambda, mu): lambda gives the column sums
//! (gl_n weight / factor degrees) and mu the row sums (gl_k weight) of the
//! k x n nonnegative integer tables that index its basis. The same
//! table-indexed basis of divided-power monomials realizes both dual module
//! structures at once, so every cross-algebra comparison in the crate is a
//! plain matrix equality on this list.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Block label: row count k, column count n, column sums `lambda`
/// (length n), row sums `mu` (length k).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Margins {
    pub k: usize,
    pub n: usize,
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
}

impl Margins {
    pub fn new(k: usize, n: usize, lambda: Vec<i64>, mu: Vec<i64>) -> Self {
        assert_eq!(lambda.len(), n, "lambda length must equal n");
        assert_eq!(mu.len(), k, "mu length must equal k");
        Margins { k, n, lambda, mu }
    }

    pub fn sums_match(&self) -> bool {
        self.lambda.iter().sum::<i64>() == self.mu.iter().sum::<i64>()
    }

    pub fn total_degree(&self) -> i64 {
        self.lambda.iter().sum()
    }
}

/// A k x n nonnegative integer table, stored row-major. Membership in a
/// block means: column sums = lambda, row sums = mu.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    k: usize,
    n: usize,
    entries: Vec<i64>,
}

impl Table {
    pub fn new(k: usize, n: usize, entries: Vec<i64>) -> Self {
        assert_eq!(entries.len(), k * n);
        assert!(entries.iter().all(|&e| e >= 0), "negative table entry");
        Table { k, n, entries }
    }

    pub fn get(&self, a: usize, i: usize) -> i64 {
        self.entries[a * self.n + i]
    }

    /// Copy with `d[ra][ri] += 1` and `d[la][li] -= 1`; `None` when the
    /// decremented entry is already zero.
    pub fn shifted(&self, ra: usize, ri: usize, la: usize, li: usize) -> Option<Table> {
        if self.get(la, li) == 0 {
            return None;
        }
        let mut entries = self.entries.clone();
        entries[ra * self.n + ri] += 1;
        entries[la * self.n + li] -= 1;
        Some(Table {
            k: self.k,
            n: self.n,
            entries,
        })
    }

    /// Row `a` as a multidegree vector.
    pub fn row(&self, a: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(a, i)).collect()
    }

    /// Column `i` as a multidegree vector.
    pub fn col(&self, i: usize) -> Vec<i64> {
        (0..self.k).map(|a| self.get(a, i)).collect()
    }

    /// Copy with row `a` replaced.
    pub fn with_row(&self, a: usize, row: &[i64]) -> Table {
        assert_eq!(row.len(), self.n);
        let mut entries = self.entries.clone();
        entries[a * self.n..(a + 1) * self.n].clone_from_slice(row);
        Table::new(self.k, self.n, entries)
    }

    /// Copy with column `i` replaced.
    pub fn with_col(&self, i: usize, col: &[i64]) -> Table {
        assert_eq!(col.len(), self.k);
        let mut entries = self.entries.clone();
        for a in 0..self.k {
            entries[a * self.n + i] = col[a];
        }
        Table::new(self.k, self.n, entries)
    }

    pub fn transposed(&self) -> Table {
        let mut entries = vec![0; self.entries.len()];
        for a in 0..self.k {
            for i in 0..self.n {
                entries[i * self.k + a] = self.get(a, i);
            }
        }
        Table {
            k: self.n,
            n: self.k,
            entries,
        }
    }

    /// Nested-array form for reports.
    pub fn to_nested(&self) -> Vec<Vec<i64>> {
        (0..self.k).map(|a| self.row(a)).collect()
    }
}

/// A block's canonically ordered table basis plus the inverse index.
/// Tables are sorted ascending in lexicographic order of the row-major
/// flattening; an empty block is a legal value.
#[derive(Clone, Debug)]
pub struct WeightBlock {
    pub margins: Margins,
    pub tables: Vec<Table>,
    index: HashMap<Table, usize>,
}

impl WeightBlock {
    pub fn dim(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn position(&self, t: &Table) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn table(&self, idx: usize) -> &Table {
        &self.tables[idx]
    }
}

/// All tables with the prescribed margins, in canonical order. Mismatched
/// sums or a negative margin give the empty block.
pub fn enumerate_tables(margins: &Margins) -> WeightBlock {
    let mut tables = Vec::new();
    let negative = margins.lambda.iter().chain(&margins.mu).any(|&v| v < 0);
    if margins.sums_match() && !negative {
        let mut row_rem = margins.mu.clone();
        let mut col_rem = margins.lambda.clone();
        let mut cur = vec![0i64; margins.k * margins.n];
        fill_cells(
            margins,
            0,
            &mut row_rem,
            &mut col_rem,
            &mut cur,
            &mut tables,
        );
    }
    let index = tables
        .iter()
        .enumerate()
        .map(|(i, t): (usize, &Table)| (t.clone(), i))
        .collect();
    WeightBlock {
        margins: margins.clone(),
        tables,
        index,
    }
}

fn fill_cells(
    margins: &Margins,
    cell: usize,
    row_rem: &mut [i64],
    col_rem: &mut [i64],
    cur: &mut Vec<i64>,
    out: &mut Vec<Table>,
) {
    let (k, n) = (margins.k, margins.n);
    if cell == k * n {
        out.push(Table::new(k, n, cur.clone()));
        return;
    }
    let (a, i) = (cell / n, cell % n);
    let mut lo = 0;
    let mut hi = row_rem[a].min(col_rem[i]);
    if i == n - 1 {
        // Last cell of the row must close the row budget.
        lo = row_rem[a];
        hi = hi.min(row_rem[a]);
    }
    if a == k - 1 {
        // Last row must close every column budget.
        lo = lo.max(col_rem[i]);
        hi = hi.min(col_rem[i]);
    }
    let mut v = lo;
    while v <= hi {
        row_rem[a] -= v;
        col_rem[i] -= v;
        cur[cell] = v;
        fill_cells(margins, cell + 1, row_rem, col_rem, cur, out);
        cur[cell] = 0;
        row_rem[a] += v;
        col_rem[i] += v;
        v += 1;
    }
}

pub fn block_dimension(margins: &Margins) -> usize {
    enumerate_tables(margins).dim()
}

/// Weakly decreasing nonnegative parts, trailing zeros normalized away.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(pub Vec<i64>);

impl Partition {
    pub fn new(mut parts: Vec<i64>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p >= 0),
            "parts must be weakly decreasing and nonnegative"
        );
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// All partitions of `size` with at most `max_parts` parts, each exactly once,
/// in descending lexicographic order.
pub fn enumerate_partitions(max_parts: usize, size: i64) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        remaining: i64,
        max_part: i64,
        slots: usize,
        cur: &mut Vec<i64>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition::new(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        let hi = remaining.min(max_part);
        for p in (1..=hi).rev() {
            cur.push(p);
            rec(remaining - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    rec(size, size, max_parts, &mut cur, &mut out);
    out
}

/// Dimension of the irreducible gl_N module with highest weight `nu`, by the
/// Weyl product formula over positive roots.
pub fn weyl_dimension(n_vars: usize, nu: &Partition) -> Result<i64> {
    if nu.0.len() > n_vars {
        return Err(Error::TooManyParts {
            parts: nu.0.len(),
            n: n_vars,
        });
    }
    let mut padded = nu.0.clone();
    padded.resize(n_vars, 0);
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for a in 0..n_vars {
        for b in (a + 1)..n_vars {
            num *= (padded[a] - padded[b]) as i128 + (b - a) as i128;
            den *= (b - a) as i128;
        }
    }
    Ok((num / den) as i64)
}

/// All compositions of `size` into `parts` nonnegative parts, ascending lex.
pub fn enumerate_compositions(parts: usize, size: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(remaining: i64, slots: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if slots == 1 {
            cur.push(remaining);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=remaining {
            cur.push(v);
            rec(remaining - v, slots - 1, cur, out);
            cur.pop();
        }
    }
    if parts == 0 {
        if size == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(size, parts, &mut cur, &mut out);
    out
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}
