//! Independent symbolic oracle: a minimal polynomial engine over the k*n
//! variables. Generators act literally as x d/dx operators on monomials and
//! results are re-expanded in the divided-power basis, with no use of the
//! library's block-map machinery. Every generator matrix, Casimir-tensor
//! variant and differential coefficient matrix must agree with it.

use std::collections::BTreeMap;
use std::sync::Arc;

use kzdual_core::action::{casimir, local_generator, total_generator, Side};
use kzdual_core::diffop::{coeff, omega, DiffFamily, OmegaVariant, OpContext};
use kzdual_core::matrix::QMatrix;
use kzdual_core::rat::Rat;
use kzdual_core::sample::sample_point;
use kzdual_core::weights::{enumerate_tables, Margins, Table, WeightBlock};

/// Exponent-table polynomial: row-major exponent vectors mapped to exact
/// rational coefficients.
#[derive(Clone, Debug)]
struct Poly {
    k: usize,
    n: usize,
    terms: BTreeMap<Vec<i64>, Rat>,
}

fn factorial(v: i64) -> Rat {
    let mut acc = Rat::one();
    for i in 2..=v {
        acc *= &Rat::from_int(i);
    }
    acc
}

impl Poly {
    fn zero(k: usize, n: usize) -> Poly {
        Poly {
            k,
            n,
            terms: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, exps: Vec<i64>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Rat::zero);
        *entry += &c;
        if entry.is_zero() {
            let key: Vec<Vec<i64>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    /// x^[d] = x^d / prod d_{ai}!
    fn divided_monomial(table: &Table, k: usize, n: usize) -> Poly {
        let mut exps = vec![0i64; k * n];
        let mut denom = Rat::one();
        for a in 0..k {
            for i in 0..n {
                exps[a * n + i] = table.get(a, i);
                denom *= &factorial(table.get(a, i));
            }
        }
        let mut p = Poly::zero(k, n);
        p.add_term(exps, denom.recip().unwrap());
        p
    }

    fn plus(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn scale(&self, c: &Rat) -> Poly {
        let mut out = Poly::zero(self.k, self.n);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Apply x_{ra,ri} d/dx_{da,di}.
    fn x_del(&self, ra: usize, ri: usize, da: usize, di: usize) -> Poly {
        let mut out = Poly::zero(self.k, self.n);
        for (e, c) in &self.terms {
            let src = e[da * self.n + di];
            if src == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[da * self.n + di] -= 1;
            exps[ra * self.n + ri] += 1;
            out.add_term(exps, c * &Rat::from_int(src));
        }
        out
    }

    /// Coefficient of the divided-power monomial x^[d].
    fn divided_coeff(&self, table: &Table) -> Rat {
        let mut exps = vec![0i64; self.k * self.n];
        let mut fact = Rat::one();
        for a in 0..self.k {
            for i in 0..self.n {
                exps[a * self.n + i] = table.get(a, i);
                fact *= &factorial(table.get(a, i));
            }
        }
        match self.terms.get(&exps) {
            Some(c) => c * &fact,
            None => Rat::zero(),
        }
    }

    fn total_monomials(&self) -> usize {
        self.terms.len()
    }
}

/// Local generator e_ab^(factor) as a polynomial operator.
fn apply_local(side: Side, a: usize, b: usize, factor: usize, p: &Poly) -> Poly {
    match side {
        Side::Glk => p.x_del(a, factor, b, factor),
        Side::Gln => p.x_del(factor, a, factor, b),
    }
}

fn apply_total(side: Side, a: usize, b: usize, p: &Poly) -> Poly {
    let factors = match side {
        Side::Glk => p.n,
        Side::Gln => p.k,
    };
    let mut out = Poly::zero(p.k, p.n);
    for f in 0..factors {
        out = out.plus(&apply_local(side, a, b, f, p));
    }
    out
}

/// Expand `op` applied to each source basis monomial in the target basis.
/// Panics if anything escapes the target block (a margins-typing bug).
fn oracle_matrix<F>(source: &WeightBlock, target: &WeightBlock, op: F) -> QMatrix
where
    F: Fn(&Poly) -> Poly,
{
    let (k, n) = (source.margins.k, source.margins.n);
    let mut m = QMatrix::zero(target.dim(), source.dim());
    for (col, table) in source.tables.iter().enumerate() {
        let image = op(&Poly::divided_monomial(table, k, n));
        let mut seen = 0;
        for (row, t2) in target.tables.iter().enumerate() {
            let c = image.divided_coeff(t2);
            if !c.is_zero() {
                seen += 1;
            }
            m.set(row, col, c);
        }
        assert_eq!(
            seen,
            image.total_monomials(),
            "image escaped the target block"
        );
    }
    m
}

fn block(k: usize, n: usize, lambda: &[i64], mu: &[i64]) -> Arc<WeightBlock> {
    Arc::new(enumerate_tables(&Margins::new(
        k,
        n,
        lambda.to_vec(),
        mu.to_vec(),
    )))
}

fn test_blocks() -> Vec<Arc<WeightBlock>> {
    vec![
        block(2, 2, &[1, 1], &[1, 1]),
        block(2, 2, &[2, 1], &[2, 1]),
        block(3, 2, &[2, 2], &[2, 1, 1]),
        block(2, 3, &[1, 2, 1], &[2, 2]),
        block(3, 3, &[2, 1, 1], &[1, 2, 1]),
    ]
}

#[test]
fn local_generators_match_monomial_calculus() {
    for b in test_blocks() {
        for side in [Side::Glk, Side::Gln] {
            let rank = side.cartans(&b.margins);
            let factors = side.factors(&b.margins);
            for p in 0..rank {
                for q in 0..rank {
                    for f in 0..factors {
                        let got = local_generator(side, p, q, f, &b).unwrap();
                        let expect =
                            oracle_matrix(&b, &got.target, |poly| apply_local(side, p, q, f, poly));
                        assert_eq!(
                            got.matrix, expect,
                            "side {side:?} e_{p}{q}^({f}) on {:?}",
                            b.margins
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn total_generators_match_monomial_calculus() {
    for b in test_blocks() {
        for side in [Side::Glk, Side::Gln] {
            let rank = side.cartans(&b.margins);
            for p in 0..rank {
                for q in 0..rank {
                    let got = total_generator(side, p, q, &b).unwrap();
                    let expect =
                        oracle_matrix(&b, &got.target, |poly| apply_total(side, p, q, poly));
                    assert_eq!(got.matrix, expect);
                }
            }
        }
    }
}

#[test]
fn casimir_matches_monomial_calculus() {
    for b in test_blocks() {
        for side in [Side::Glk, Side::Gln] {
            let rank = side.cartans(&b.margins);
            let got = casimir(side, &b);
            let expect = oracle_matrix(&b, &b, |poly| {
                let mut acc = Poly::zero(poly.k, poly.n);
                for p in 0..rank {
                    for q in 0..rank {
                        acc = acc.plus(&apply_total(side, p, q, &apply_total(side, q, p, poly)));
                    }
                }
                acc
            });
            assert_eq!(got, expect);
        }
    }
}

/// Casimir tensor variants as polynomial operators.
fn apply_omega(
    variant: OmegaVariant,
    side: Side,
    i: usize,
    j: usize,
    rank: usize,
    p: &Poly,
) -> Poly {
    let one_term = |a: usize, b: usize, p: &Poly| -> Poly {
        apply_local(side, a, b, i, &apply_local(side, b, a, j, p))
    };
    let mut acc = Poly::zero(p.k, p.n);
    match variant {
        OmegaVariant::Full => {
            for a in 0..rank {
                for b in 0..rank {
                    acc = acc.plus(&one_term(a, b, p));
                }
            }
        }
        OmegaVariant::Zero => {
            for a in 0..rank {
                acc = acc.plus(&one_term(a, a, p));
            }
            acc = acc.scale(&Rat::new(1, 2));
        }
        OmegaVariant::Plus => {
            acc = apply_omega(OmegaVariant::Zero, side, i, j, rank, p);
            for a in 0..rank {
                for b in (a + 1)..rank {
                    acc = acc.plus(&one_term(a, b, p));
                }
            }
        }
        OmegaVariant::Minus => {
            acc = apply_omega(OmegaVariant::Zero, side, i, j, rank, p);
            for a in 0..rank {
                for b in (a + 1)..rank {
                    acc = acc.plus(&one_term(b, a, p));
                }
            }
        }
    }
    acc
}

#[test]
fn omega_variants_match_monomial_calculus() {
    for b in test_blocks() {
        for side in [Side::Glk, Side::Gln] {
            let rank = side.cartans(&b.margins);
            let factors = side.factors(&b.margins);
            for i in 0..factors {
                for j in 0..factors {
                    if i == j {
                        continue;
                    }
                    for variant in [
                        OmegaVariant::Full,
                        OmegaVariant::Plus,
                        OmegaVariant::Minus,
                        OmegaVariant::Zero,
                    ] {
                        let got = omega(variant, side, i, j, &b).unwrap();
                        let expect = oracle_matrix(&b, &b, |poly| {
                            apply_omega(variant, side, i, j, rank, poly)
                        });
                        assert_eq!(got, expect, "{variant:?} ({i},{j}) {side:?}");
                    }
                }
            }
        }
    }
}

/// All four differential coefficient families assembled directly as
/// polynomial operators with exact scalar weights.
fn apply_coeff(
    family: DiffFamily,
    index: usize,
    side: Side,
    ctx_zs: &[Rat],
    ctx_lams: &[Rat],
    weights: &[i64],
    p: &Poly,
) -> Poly {
    let rank = ctx_lams.len();
    let factors = ctx_zs.len();
    let mut acc = Poly::zero(p.k, p.n);
    match family {
        DiffFamily::KzRat => {
            let i = index;
            for c in 0..rank {
                acc = acc.plus(&apply_local(side, c, c, i, p).scale(&ctx_lams[c]));
            }
            for j in 0..factors {
                if j == i {
                    continue;
                }
                let f = (&ctx_zs[i] - &ctx_zs[j]).recip().unwrap();
                acc = acc.plus(&apply_omega(OmegaVariant::Full, side, i, j, rank, p).scale(&f));
            }
        }
        DiffFamily::KzTrig => {
            let i = index;
            for c in 0..rank {
                let s = &ctx_lams[c] - &Rat::new(weights[c], 2);
                acc = acc.plus(&apply_local(side, c, c, i, p).scale(&s));
            }
            for j in 0..factors {
                if j == i {
                    continue;
                }
                let d = (&ctx_zs[i] - &ctx_zs[j]).recip().unwrap();
                let plus =
                    apply_omega(OmegaVariant::Plus, side, i, j, rank, p).scale(&(&ctx_zs[i] * &d));
                let minus =
                    apply_omega(OmegaVariant::Minus, side, i, j, rank, p).scale(&(&ctx_zs[j] * &d));
                acc = acc.plus(&plus).plus(&minus);
            }
        }
        DiffFamily::DdRat => {
            let a = index;
            for f in 0..factors {
                acc = acc.plus(&apply_local(side, a, a, f, p).scale(&ctx_zs[f]));
            }
            for b in 0..rank {
                if b == a {
                    continue;
                }
                let f = (&ctx_lams[a] - &ctx_lams[b]).recip().unwrap();
                let round = apply_total(side, a, b, &apply_total(side, b, a, p));
                let diag = p.scale(&Rat::from_int(weights[a]));
                let mut num = round;
                num = num.plus(&diag.scale(&Rat::from_int(-1)));
                acc = acc.plus(&num.scale(&f));
            }
        }
        DiffFamily::DdTrig => {
            let a = index;
            acc = acc.plus(&p.scale(&Rat::new(-weights[a] * weights[a], 2)));
            for f in 0..factors {
                acc = acc.plus(&apply_local(side, a, a, f, p).scale(&ctx_zs[f]));
            }
            for b in 0..rank {
                for f in 0..factors {
                    for f2 in (f + 1)..factors {
                        acc =
                            acc.plus(&apply_local(side, a, b, f, &apply_local(side, b, a, f2, p)));
                    }
                }
            }
            for b in 0..rank {
                if b == a {
                    continue;
                }
                let s = &ctx_lams[b] / &(&ctx_lams[a] - &ctx_lams[b]);
                let round = apply_total(side, a, b, &apply_total(side, b, a, p));
                let diag = p.scale(&Rat::from_int(weights[a]));
                let mut num = round;
                num = num.plus(&diag.scale(&Rat::from_int(-1)));
                acc = acc.plus(&num.scale(&s));
            }
        }
    }
    acc
}

#[test]
fn coefficient_families_match_monomial_calculus() {
    for b in test_blocks() {
        let point = sample_point(101, b.margins.n, b.margins.k, false, 6);
        for side in [Side::Glk, Side::Gln] {
            let ctx = OpContext::new(side, &b, &point);
            let rank = side.cartans(&b.margins);
            let factors = side.factors(&b.margins);
            let weights: Vec<i64> = (0..rank)
                .map(|c| side.cartan_weight(&b.margins, c))
                .collect();
            for family in [
                DiffFamily::KzRat,
                DiffFamily::KzTrig,
                DiffFamily::DdRat,
                DiffFamily::DdTrig,
            ] {
                let indices = if family.is_kz() { factors } else { rank };
                for idx in 0..indices {
                    let got = coeff(family, idx, &ctx).unwrap();
                    let expect = oracle_matrix(&b, &b, |poly| {
                        apply_coeff(family, idx, side, &ctx.zs, &ctx.lams, &weights, poly)
                    });
                    assert_eq!(
                        got, expect,
                        "{family:?} idx {idx} {side:?} on {:?}",
                        b.margins
                    );
                }
            }
        }
    }
}
