//! Exact point counts over prime fields.
//!
//! [`count_brute`] evaluates the polynomial term by term at every point of
//! `F_q^n` and is the oracle for everything else. [`count_fibered`] writes
//! `p = t_e·A + B` and sweeps only the base `F_q^{n-1}`: a base point adds
//! `q-1` complement points when `A ≠ 0`, `q` when `A = 0 ≠ B`, and none when
//! both vanish.
//!
//! The base sweep folds one variable at a time. A multilinear polynomial in
//! `r` variables is held as `2^r` coefficients; fixing the top variable to
//! `x` gives `lo + x·hi`, and stepping `x` is one addition per coefficient.
//! Top levels with many variables fold sparse term lists instead, so memory
//! stays bounded by `2^DENSE_VARS`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{checked_pow, Prime};
use crate::graph::{EdgeKind, Multigraph};
use crate::poly::{MultilinearPoly, ReducedPoly};
use crate::symanzik::psi_by_trees;

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

const DENSE_VARS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    /// Maximum number of point evaluations one count may perform.
    pub budget: u64,
    pub parallel: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: DEFAULT_BUDGET,
            parallel: true,
        }
    }
}

impl CountOptions {
    pub fn sequential(self) -> Self {
        CountOptions {
            parallel: false,
            ..self
        }
    }

    fn check(&self, q: Prime, dims: usize) -> Result<()> {
        let needed = checked_pow(q.get(), dims).unwrap_or(u128::MAX);
        if needed > self.budget as u128 {
            return Err(Error::BudgetExceeded {
                needed,
                budget: self.budget,
            });
        }
        Ok(())
    }
}

/// Point counts of `X̂ = {p = 0} ⊂ A^n`, its complement `Y`, and the
/// projective zero set when `p` is homogeneous of positive degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountRecord {
    pub q: u64,
    pub n: usize,
    pub affine_zero_count: u64,
    pub complement_count: u64,
    pub projective_count: Option<u64>,
}

impl CountRecord {
    fn from_complement(p: &MultilinearPoly, q: Prime, complement: u64) -> Result<Self> {
        let n = p.var_count();
        let total = checked_pow(q.get(), n)
            .and_then(|t| u64::try_from(t).ok())
            .ok_or_else(|| Error::Consistency(format!("{q}^{n} overflows u64")))?;
        let affine_zero_count = total - complement;
        let projective_count = match p.homogeneous_degree() {
            Some(d) if d > 0 => Some(projective_from_affine(affine_zero_count, q)?),
            _ => None,
        };
        Ok(CountRecord {
            q: q.get(),
            n,
            affine_zero_count,
            complement_count: complement,
            projective_count,
        })
    }
}

/// Zeros of a homogeneous form in `P^{n-1}` from its affine cone: the
/// origin is the vertex and every other zero lies on a line of `q-1` points.
fn projective_from_affine(zeros: u64, q: Prime) -> Result<u64> {
    let fiber = q.get() - 1;
    if zeros == 0 || (zeros - 1) % fiber != 0 {
        return Err(Error::Consistency(format!(
            "{zeros} affine zeros are not 1 + (q-1)k for q={q}"
        )));
    }
    Ok((zeros - 1) / fiber)
}

/// `|X(F_q)|` for the projective hypersurface behind `rec`.
pub fn count_projective(rec: &CountRecord) -> Result<u64> {
    rec.projective_count.ok_or(Error::NoProjectiveHypersurface)
}

/// Full enumeration of `F_q^n`.
pub fn count_brute(p: &MultilinearPoly, q: Prime, opts: CountOptions) -> Result<CountRecord> {
    let n = p.var_count();
    opts.check(q, n)?;
    let reduced = p.reduce(q);
    let complement = if n == 0 {
        u64::from(reduced.eval_local(&[]) != 0)
    } else {
        let block = |top: u64| brute_block(&reduced, n, top, q);
        if opts.parallel {
            (0..q.get()).into_par_iter().map(block).sum()
        } else {
            (0..q.get()).map(block).sum()
        }
    };
    CountRecord::from_complement(p, q, complement)
}

/// Non-zeros among the points whose last coordinate is `top`.
fn brute_block(p: &ReducedPoly, n: usize, top: u64, q: Prime) -> u64 {
    let mut xs = vec![0u64; n];
    xs[n - 1] = top;
    let mut count = 0;
    loop {
        if p.eval_local(&xs) != 0 {
            count += 1;
        }
        // odometer over coordinates 0..n-1
        let mut i = 0;
        loop {
            if i == n - 1 {
                return count;
            }
            xs[i] += 1;
            if xs[i] < q.get() {
                break;
            }
            xs[i] = 0;
            i += 1;
        }
    }
}

/// Complement count via the fibration over the variable `label`.
pub fn count_fibered(
    p: &MultilinearPoly,
    label: usize,
    q: Prime,
    opts: CountOptions,
) -> Result<CountRecord> {
    if p.var_count() == 0 {
        let complement = u64::from(!p.is_zero() && p.reduce(q).eval_local(&[]) != 0);
        return CountRecord::from_complement(p, q, complement);
    }
    let (a, b) = p.split_var(label)?;
    let census = pair_census(&a, &b, q, opts)?;
    let qv = q.get();
    let complement = (qv - 1) * census.first_nonzero + qv * census.only_second_nonzero;
    CountRecord::from_complement(p, q, complement)
}

/// Fibered count over the highest-labelled variable.
pub fn count_fibered_last(
    p: &MultilinearPoly,
    q: Prime,
    opts: CountOptions,
) -> Result<CountRecord> {
    let label = p.var_labels().last().copied().unwrap_or(0);
    count_fibered(p, label, q, opts)
}

/// Which counter produces a [`CountRecord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Fibered,
    /// Both counters; a disagreement is an error.
    Both,
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "brute" => Ok(Method::Brute),
            "fibered" => Ok(Method::Fibered),
            "both" => Ok(Method::Both),
            other => Err(format!("unknown method {other:?} (brute|fibered|both)")),
        }
    }
}

/// Counts with `method`, fibering over the highest label.
pub fn count_with(
    p: &MultilinearPoly,
    q: Prime,
    method: Method,
    opts: CountOptions,
) -> Result<CountRecord> {
    match method {
        Method::Brute => count_brute(p, q, opts),
        Method::Fibered => count_fibered_last(p, q, opts),
        Method::Both => {
            let brute = count_brute(p, q, opts)?;
            let fibered = count_fibered_last(p, q, opts)?;
            if brute != fibered {
                return Err(Error::CountMismatch {
                    q: q.get(),
                    brute: brute.complement_count,
                    fibered: fibered.complement_count,
                });
            }
            Ok(brute)
        }
    }
}

/// Joint vanishing pattern of two polynomials over `F_q^m`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCensus {
    pub both_zero: u64,
    pub only_second_nonzero: u64,
    pub first_nonzero: u64,
}

impl PairCensus {
    fn merge(self, o: PairCensus) -> PairCensus {
        PairCensus {
            both_zero: self.both_zero + o.both_zero,
            only_second_nonzero: self.only_second_nonzero + o.only_second_nonzero,
            first_nonzero: self.first_nonzero + o.first_nonzero,
        }
    }
}

/// Shared sweep of `first` and `second` over the union of their ambient
/// variables.
pub fn pair_census(
    first: &MultilinearPoly,
    second: &MultilinearPoly,
    q: Prime,
    opts: CountOptions,
) -> Result<PairCensus> {
    let vars = first.vars() | second.vars();
    let first = first.with_vars(vars)?;
    let second = second.with_vars(vars)?;
    let m = first.var_count();
    opts.check(q, m)?;

    let mut merged = std::collections::BTreeMap::<u64, (u64, u64)>::new();
    for &(mask, c) in &first.reduce(q).terms {
        merged.entry(mask).or_default().0 = c;
    }
    for &(mask, c) in &second.reduce(q).terms {
        merged.entry(mask).or_default().1 = c;
    }
    let terms: Vec<Term> = merged.into_iter().map(|(m, (a, b))| (m, a, b)).collect();
    Ok(Sweep { q }.run(&terms, m, opts.parallel))
}

/// `|Z|`: common zeros of `ψ_{G∖e}` and `ψ_{G/e}` in `A^{n-1}`.
pub fn count_z(g: &Multigraph, label: usize, q: Prime, opts: CountOptions) -> Result<u64> {
    let kind = g.classify_edge(label)?;
    if kind != EdgeKind::Regular {
        return Err(Error::NotRegular {
            label,
            kind: kind.as_str(),
        });
    }
    let deleted = psi_by_trees(&g.delete_edge(label)?);
    let contracted = psi_by_trees(&g.contract_edge(label)?);
    Ok(pair_census(&deleted, &contracted, q, opts)?.both_zero)
}

type Term = (u64, u64, u64);

#[derive(Clone, Copy)]
struct Sweep {
    q: Prime,
}

impl Sweep {
    fn run(&self, terms: &[Term], m: usize, parallel: bool) -> PairCensus {
        if m == 0 {
            let (a, b) = terms.first().map_or((0, 0), |t| (t.1, t.2));
            return classify(a, b);
        }
        let (lo, hi) = split_top(terms, m);
        let task = |x: u64| {
            let folded = fold(&lo, &hi, x, self.q);
            self.sparse(&folded, m - 1)
        };
        if parallel {
            (0..self.q.get())
                .into_par_iter()
                .map(task)
                .reduce(PairCensus::default, PairCensus::merge)
        } else {
            (0..self.q.get())
                .map(task)
                .fold(PairCensus::default(), PairCensus::merge)
        }
    }

    fn sparse(&self, terms: &[Term], r: usize) -> PairCensus {
        if r <= DENSE_VARS {
            let size = 1usize << r;
            let mut a = vec![0u64; size];
            let mut b = vec![0u64; size];
            for &(mask, ca, cb) in terms {
                a[mask as usize] = ca;
                b[mask as usize] = cb;
            }
            let mut scratch: Vec<(Vec<u64>, Vec<u64>)> = (0..r)
                .map(|level| (vec![0; 1 << level], vec![0; 1 << level]))
                .collect();
            let mut census = PairCensus::default();
            self.dense(&a, &b, r, &mut scratch, &mut census);
            return census;
        }
        let (lo, hi) = split_top(terms, r);
        (0..self.q.get()).fold(PairCensus::default(), |acc, x| {
            acc.merge(self.sparse(&fold(&lo, &hi, x, self.q), r - 1))
        })
    }

    /// `scratch[l]` holds the folded coefficients with `l` variables left.
    fn dense(
        &self,
        a: &[u64],
        b: &[u64],
        r: usize,
        scratch: &mut [(Vec<u64>, Vec<u64>)],
        census: &mut PairCensus,
    ) {
        let q = self.q;
        if r == 0 {
            tally(census, a[0], b[0]);
            return;
        }
        if r == 1 {
            let (mut va, mut vb) = (a[0], b[0]);
            for _ in 0..q.get() {
                tally(census, va, vb);
                va = q.add(va, a[1]);
                vb = q.add(vb, b[1]);
            }
            return;
        }
        let half = 1 << (r - 1);
        let (a_lo, a_hi) = a.split_at(half);
        let (b_lo, b_hi) = b.split_at(half);
        let (below, level) = scratch.split_at_mut(r - 1);
        let (na, nb) = &mut level[0];
        na.copy_from_slice(a_lo);
        nb.copy_from_slice(b_lo);
        for _ in 0..q.get() {
            self.dense(na, nb, r - 1, below, census);
            for (v, &h) in na.iter_mut().zip(a_hi) {
                *v = q.add(*v, h);
            }
            for (v, &h) in nb.iter_mut().zip(b_hi) {
                *v = q.add(*v, h);
            }
        }
    }
}

#[inline]
fn tally(census: &mut PairCensus, a: u64, b: u64) {
    if a != 0 {
        census.first_nonzero += 1;
    } else if b != 0 {
        census.only_second_nonzero += 1;
    } else {
        census.both_zero += 1;
    }
}

fn classify(a: u64, b: u64) -> PairCensus {
    let mut c = PairCensus::default();
    tally(&mut c, a, b);
    c
}

/// Splits terms on variable `r - 1`; the top bit is stripped from `hi`.
/// Both halves stay sorted by mask.
fn split_top(terms: &[Term], r: usize) -> (Vec<Term>, Vec<Term>) {
    let bit = 1u64 << (r - 1);
    let (hi, lo): (Vec<Term>, Vec<Term>) = terms.iter().partition(|t| t.0 & bit != 0);
    let hi = hi.into_iter().map(|(m, a, b)| (m & !bit, a, b)).collect();
    (lo, hi)
}

/// Sorted merge of `lo + x·hi`.
fn fold(lo: &[Term], hi: &[Term], x: u64, q: Prime) -> Vec<Term> {
    let mut out = Vec::with_capacity(lo.len() + hi.len());
    let (mut i, mut j) = (0, 0);
    while i < lo.len() || j < hi.len() {
        let take_lo = j == hi.len() || (i < lo.len() && lo[i].0 <= hi[j].0);
        let take_hi = i == lo.len() || (j < hi.len() && hi[j].0 <= lo[i].0);
        let mask = if take_lo { lo[i].0 } else { hi[j].0 };
        let (mut a, mut b) = (0, 0);
        if take_lo {
            a = lo[i].1;
            b = lo[i].2;
            i += 1;
        }
        if take_hi {
            a = q.add(a, q.mul(x, hi[j].1));
            b = q.add(b, q.mul(x, hi[j].2));
            j += 1;
        }
        if a != 0 || b != 0 {
            out.push((mask, a, b));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn prime(q: u64) -> Prime {
        Prime::new(q).unwrap()
    }

    fn graph(v: usize, edges: &[(usize, usize)]) -> Multigraph {
        Multigraph::new(v, edges).unwrap()
    }

    fn c3() -> Multigraph {
        graph(3, &[(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn brute_examples() {
        let opts = CountOptions::default();
        let rec = count_brute(&psi_by_trees(&c3()), prime(3), opts).unwrap();
        assert_eq!((rec.affine_zero_count, rec.complement_count), (9, 18));
        assert_eq!(rec.projective_count, Some(4));

        let tree = psi_by_trees(&graph(4, &[(0, 1), (1, 2), (1, 3)]));
        let rec = count_brute(&tree, prime(5), opts).unwrap();
        assert_eq!((rec.affine_zero_count, rec.complement_count), (0, 125));
        assert_eq!(rec.projective_count, None);

        let bouquet = psi_by_trees(&graph(1, &[(0, 0); 3]));
        let rec = count_brute(&bouquet, prime(7), opts).unwrap();
        assert_eq!(rec.complement_count, 216);
    }

    #[test]
    fn fibered_examples() {
        let opts = CountOptions::default();
        let rec = count_fibered(&psi_by_trees(&c3()), 2, prime(3), opts).unwrap();
        assert_eq!(rec.complement_count, 18);

        let lp = psi_by_trees(&graph(1, &[(0, 0)]));
        assert_eq!(count_fibered(&lp, 0, prime(5), opts).unwrap().complement_count, 4);

        let b2 = psi_by_trees(&graph(2, &[(0, 1), (0, 1)]));
        let rec = count_fibered(&b2, 1, prime(5), opts).unwrap();
        assert_eq!(rec.complement_count, 20);
        assert_eq!(rec, count_brute(&b2, prime(5), opts).unwrap());
    }

    #[test]
    fn constants_count_as_points() {
        let opts = CountOptions::default();
        let one = MultilinearPoly::one(0);
        assert_eq!(count_fibered(&one, 0, prime(3), opts).unwrap().complement_count, 1);
        assert_eq!(count_brute(&one, prime(3), opts).unwrap().complement_count, 1);
        let zero = MultilinearPoly::zero(0);
        assert_eq!(count_fibered(&zero, 0, prime(3), opts).unwrap().complement_count, 0);
        // a multiple of q is zero mod q
        let seven = MultilinearPoly::constant(0b1, BigInt::from(7));
        let rec = count_fibered(&seven, 0, prime(7), opts).unwrap();
        assert_eq!((rec.complement_count, rec.affine_zero_count), (0, 7));
    }

    #[test]
    fn z_locus_examples() {
        let opts = CountOptions::default();
        for e in 0..3 {
            assert_eq!(count_z(&c3(), e, prime(5), opts), Ok(0));
        }
        let b3 = graph(2, &[(0, 1); 3]);
        for e in 0..3 {
            assert_eq!(count_z(&b3, e, prime(3), opts), Ok(1));
        }
        // B2 ∖ e is a bridge (ψ = 1), so Z is empty; checked by enumeration
        let b2 = graph(2, &[(0, 1); 2]);
        let deleted = psi_by_trees(&b2.delete_edge(1).unwrap());
        let contracted = psi_by_trees(&b2.contract_edge(1).unwrap());
        let q5 = prime(5);
        let brute = (0..5)
            .filter(|&x| {
                deleted.evaluate(&[x], q5).unwrap() == 0 && contracted.evaluate(&[x], q5).unwrap() == 0
            })
            .count() as u64;
        assert_eq!(brute, 0);
        assert_eq!(count_z(&b2, 1, q5, opts), Ok(brute));

        let bridge = graph(2, &[(0, 1)]);
        assert!(matches!(
            count_z(&bridge, 0, prime(5), opts),
            Err(Error::NotRegular { kind: "bridge", .. })
        ));
    }

    #[test]
    fn projective_examples() {
        let opts = CountOptions::default();
        let lp = count_brute(&psi_by_trees(&graph(1, &[(0, 0)])), prime(5), opts).unwrap();
        assert_eq!(count_projective(&lp), Ok(0));
        let b2 = count_brute(&psi_by_trees(&graph(2, &[(0, 1); 2])), prime(5), opts).unwrap();
        assert_eq!(count_projective(&b2), Ok(1));
        let tree = count_brute(&psi_by_trees(&graph(2, &[(0, 1)])), prime(5), opts).unwrap();
        assert_eq!(count_projective(&tree), Err(Error::NoProjectiveHypersurface));
        assert!(matches!(
            projective_from_affine(6, prime(5)),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let opts = CountOptions {
            budget: 26,
            parallel: false,
        };
        let p = psi_by_trees(&c3());
        assert!(matches!(
            count_brute(&p, prime(3), opts),
            Err(Error::BudgetExceeded { needed: 27, budget: 26 })
        ));
        assert!(count_fibered(&p, 0, prime(3), opts).is_ok());
    }

    #[test]
    fn sparse_levels_match_dense() {
        // 18 loops: fold sparse above DENSE_VARS, then dense
        let p = psi_by_trees(&graph(1, &[(0, 0); 18]));
        let census = pair_census(&p, &MultilinearPoly::zero(p.vars()), prime(2), CountOptions::default()).unwrap();
        assert_eq!(census.first_nonzero, 1);
        assert_eq!(census.both_zero, (1 << 18) - 1);
    }
}
