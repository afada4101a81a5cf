//! The graph polynomial `ψ_G = Σ_F Π_{e∉F} t_e`, `F` over maximal spanning
//! forests, built three independent ways.
//!
//! * [`psi_by_trees`] enumerates forests directly.
//! * [`psi_by_matrix_tree`] takes the reduced weighted Laplacian determinant
//!   of each component (Kirchhoff), multiplies, and complements every term.
//! * [`psi_by_deletion_contraction`] recurses on the highest label.
//!
//! The three agree term-for-term; the test suites hold them to that.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, Multigraph};
use crate::poly::MultilinearPoly;

pub fn psi_by_trees(g: &Multigraph) -> MultilinearPoly {
    let vars = g.label_mask();
    MultilinearPoly::from_terms(
        vars,
        g.spanning_forest_masks()
            .into_iter()
            .map(|f| (vars & !f, BigInt::one())),
    )
    .expect("forest masks lie inside the label mask")
}

pub fn psi_by_deletion_contraction(g: &Multigraph) -> MultilinearPoly {
    let Some(label) = g.labels().max() else {
        return MultilinearPoly::one(0);
    };
    let vars = g.label_mask();
    let kind = g.classify_edge(label).expect("label from graph");
    let with_e = |p: MultilinearPoly| p.mul_var(label).expect("e absent from minor");
    match kind {
        EdgeKind::Loop => with_e(psi_by_deletion_contraction(
            &g.delete_edge(label).expect("label from graph"),
        )),
        EdgeKind::Bridge => psi_by_deletion_contraction(
            &g.contract_edge(label).expect("bridge is not a loop"),
        )
        .with_vars(vars)
        .expect("minor variables are a subset"),
        EdgeKind::Regular => {
            let deleted = with_e(psi_by_deletion_contraction(
                &g.delete_edge(label).expect("label from graph"),
            ));
            let contracted =
                psi_by_deletion_contraction(&g.contract_edge(label).expect("regular edge"));
            deleted.add(&contracted)
        }
    }
}

pub fn psi_by_matrix_tree(g: &Multigraph) -> MultilinearPoly {
    let vars = g.label_mask();
    let width = g.label_bound();
    let comp = g.components();
    let comp_count = comp.iter().copied().max().map_or(0, |m| m + 1);

    let mut kirchhoff = SymPoly::constant(width, BigInt::one());
    for c in 0..comp_count {
        let members: Vec<usize> = (0..g.vertex_count()).filter(|&v| comp[v] == c).collect();
        // drop the first vertex of the component as the root
        let index = |v: usize| members[1..].iter().position(|&w| w == v);
        let k = members.len() - 1;
        let mut lap = vec![vec![SymPoly::zero(width); k]; k];
        for e in g.edges().iter().filter(|e| !e.is_loop() && comp[e.u] == c) {
            let t = SymPoly::variable(width, e.label);
            let (iu, iv) = (index(e.u), index(e.v));
            if let Some(i) = iu {
                lap[i][i] = lap[i][i].add(&t);
            }
            if let Some(j) = iv {
                lap[j][j] = lap[j][j].add(&t);
            }
            if let (Some(i), Some(j)) = (iu, iv) {
                lap[i][j] = lap[i][j].sub(&t);
                lap[j][i] = lap[j][i].sub(&t);
            }
        }
        kirchhoff = kirchhoff.mul(&bareiss_determinant(lap, width));
    }

    let terms = kirchhoff
        .terms
        .into_iter()
        .map(|(exps, c)| {
            let mut mask = 0u64;
            for (i, &x) in exps.iter().enumerate() {
                match x {
                    0 => {}
                    1 => mask |= 1 << i,
                    _ => return Err(Error::NotMultilinear),
                }
            }
            Ok((vars & !mask, c))
        })
        .collect::<Result<Vec<_>>>()
        .expect("Kirchhoff polynomial is multilinear");
    MultilinearPoly::from_terms(vars, terms).expect("complemented masks lie in the label mask")
}

/// Fraction-free Gaussian elimination; every division is exact.
fn bareiss_determinant(mut m: Vec<Vec<SymPoly>>, width: usize) -> SymPoly {
    let k = m.len();
    if k == 0 {
        return SymPoly::constant(width, BigInt::one());
    }
    let mut negate = false;
    let mut prev = SymPoly::constant(width, BigInt::one());
    for p in 0..k {
        if m[p][p].is_zero() {
            match (p + 1..k).find(|&r| !m[r][p].is_zero()) {
                Some(r) => {
                    m.swap(p, r);
                    negate = !negate;
                }
                None => return SymPoly::zero(width),
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let num = m[i][j].mul(&m[p][p]).sub(&m[i][p].mul(&m[p][j]));
                m[i][j] = num.exact_div(&prev);
            }
        }
        prev = m[p][p].clone();
    }
    let det = m[k - 1][k - 1].clone();
    if negate {
        SymPoly::zero(width).sub(&det)
    } else {
        det
    }
}

/// Sparse polynomial over exponent vectors, lex-ordered with `t0` most
/// significant. Only the matrix-tree oracle needs general exponents.
#[derive(Debug, Clone, PartialEq)]
struct SymPoly {
    width: usize,
    terms: BTreeMap<Vec<u16>, BigInt>,
}

impl SymPoly {
    fn zero(width: usize) -> Self {
        SymPoly {
            width,
            terms: BTreeMap::new(),
        }
    }

    fn constant(width: usize, c: BigInt) -> Self {
        let mut p = Self::zero(width);
        p.add_term(vec![0; width], c);
        p
    }

    fn variable(width: usize, i: usize) -> Self {
        let mut exps = vec![0; width];
        exps[i] = 1;
        let mut p = Self::zero(width);
        p.add_term(exps, BigInt::one());
        p
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Vec<u16>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.width);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Quotient of an exact division; panics if the division is not exact.
    fn exact_div(&self, divisor: &Self) -> Self {
        let (lead_exps, lead_c) = divisor.terms.iter().next_back().expect("non-zero divisor");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.width);
        while let Some((exps, c)) = rem
            .terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
        {
            let shift: Vec<u16> = exps
                .iter()
                .zip(lead_exps)
                .map(|(a, b)| a.checked_sub(*b).expect("inexact division: monomial"))
                .collect();
            assert!((&c % lead_c).is_zero(), "inexact division: coefficient");
            let mut step = Self::zero(self.width);
            step.add_term(shift, &c / lead_c);
            rem = rem.sub(&step.mul(divisor));
            quot = quot.add(&step);
        }
        quot
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_three(g: &Multigraph) -> [MultilinearPoly; 3] {
        [
            psi_by_trees(g),
            psi_by_matrix_tree(g),
            psi_by_deletion_contraction(g),
        ]
    }

    fn assert_psi(g: &Multigraph, expected: &str) {
        for p in all_three(g) {
            assert_eq!(p.to_string(), expected);
            assert_eq!(p.vars(), g.label_mask());
        }
    }

    #[test]
    fn small_graphs() {
        assert_psi(&Multigraph::new(2, &[(0, 1)]).unwrap(), "1");
        assert_psi(&Multigraph::new(1, &[(0, 0)]).unwrap(), "t0");
        assert_psi(
            &Multigraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap(),
            "t0 + t1 + t2",
        );
        assert_psi(
            &Multigraph::new(2, &[(0, 1); 3]).unwrap(),
            "t0*t1 + t0*t2 + t1*t2",
        );
        assert_psi(&Multigraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap(), "1");
        assert_psi(&Multigraph::new(1, &[(0, 0); 2]).unwrap(), "t0*t1");
        assert_psi(&Multigraph::new(1, &[(0, 0); 3]).unwrap(), "t0*t1*t2");
        assert_psi(&Multigraph::edgeless(3), "1");
    }

    #[test]
    fn one_recursion_step_on_triangle() {
        let c3 = Multigraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let path = psi_by_trees(&c3.delete_edge(2).unwrap());
        let b2 = psi_by_trees(&c3.contract_edge(2).unwrap());
        assert_eq!(path.to_string(), "1");
        assert_eq!(b2.to_string(), "t0 + t1");
        let step = path.mul_var(2).unwrap().add(&b2);
        assert_eq!(step, psi_by_trees(&c3));
    }

    #[test]
    fn kirchhoff_on_complete_graph() {
        // K4 has 16 spanning trees, each leaves three edges out
        let k4 = Multigraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let [a, b, c] = all_three(&k4);
        assert_eq!(a.term_count(), 16);
        assert_eq!(a.homogeneous_degree(), Some(3));
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn sympoly_exact_division() {
        let x = SymPoly::variable(2, 0);
        let y = SymPoly::variable(2, 1);
        let one = SymPoly::constant(2, BigInt::one());
        let a = x.add(&y);
        let b = x.sub(&one);
        assert_eq!(a.mul(&b).exact_div(&b), a);
        assert_eq!(a.mul(&a).exact_div(&a), a);
    }
}
